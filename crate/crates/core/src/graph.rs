//! Labeled simple graphs and the rewriting operations on them.
//!
//! A [`Graph`] is an ordered list of vertex labels plus a symmetric
//! zero-diagonal adjacency matrix over GF(2). Operations address vertices by
//! label, so the same vertex can be followed through any sequence of
//! rewrites and restrictions. Unordered pivots keep labels in place.
//!
//! [`BitGraph`] is a compact row-bitmask form (at most 128 vertices) for the
//! inner loops of orbit searches and Monte-Carlo sampling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{F2Matrix, F2Vector};

pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(Label),
    #[error("duplicate vertex label {0}")]
    DuplicateLabel(Label),
    #[error("{0}{1} is not an edge")]
    NotAnEdge(Label, Label),
    #[error("vertex sets differ")]
    VertexSetMismatch,
    #[error("adjacency matrix is {rows}x{cols} but there are {labels} labels")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        labels: usize,
    },
    #[error("adjacency matrix is not symmetric")]
    NotSymmetric,
    #[error("adjacency matrix has a self-loop at position {0}")]
    SelfLoop(usize),
    #[error("graph has {0} vertices, edge bitmasks support at most 16")]
    TooLarge(usize),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed graph6 at byte {position}: {message}")]
pub struct Graph6Error {
    pub position: usize,
    pub message: String,
}

impl Graph6Error {
    fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

/// Index of the unordered pair `{i, j}` (`i != j`) in the lexicographic
/// order (0,1), (0,2), ..., (0,n-1), (1,2), ... over `n` vertices.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The pairs of [`pair_index`] in index order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    labels: Vec<Label>,
    adj: F2Matrix,
}

impl Graph {
    pub fn new(labels: Vec<Label>, adj: F2Matrix) -> Result<Self, GraphError> {
        if adj.rows() != labels.len() || adj.cols() != labels.len() {
            return Err(GraphError::DimensionMismatch {
                rows: adj.rows(),
                cols: adj.cols(),
                labels: labels.len(),
            });
        }
        check_unique(&labels)?;
        if let Some(i) = (0..labels.len()).find(|&i| adj.get(i, i)) {
            return Err(GraphError::SelfLoop(i));
        }
        if !adj.is_symmetric() {
            return Err(GraphError::NotSymmetric);
        }
        Ok(Self { labels, adj })
    }

    /// Edgeless graph on labels `0..n`.
    pub fn empty(n: usize) -> Self {
        Self {
            labels: (0..n as Label).collect(),
            adj: F2Matrix::zeros(n, n),
        }
    }

    pub fn empty_labeled(labels: Vec<Label>) -> Result<Self, GraphError> {
        let n = labels.len();
        Self::new(labels, F2Matrix::zeros(n, n))
    }

    /// Graph on labels `0..n` with edges given by positions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            assert!(a != b && a < n && b < n, "bad edge ({a},{b})");
            g.adj.set(a, b, true);
            g.adj.set(b, a, true);
        }
        g
    }

    pub fn from_labeled_edges(
        labels: Vec<Label>,
        edges: &[(Label, Label)],
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty_labeled(labels)?;
        for &(a, b) in edges {
            let (i, j) = (g.index_of(a)?, g.index_of(b)?);
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            g.adj.set(i, j, true);
            g.adj.set(j, i, true);
        }
        Ok(g)
    }

    /// Complete graph on labels `0..n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for (i, j) in pairs(n) {
            g.adj.set(i, j, true);
            g.adj.set(j, i, true);
        }
        g
    }

    pub fn relabeled(&self, labels: Vec<Label>) -> Result<Self, GraphError> {
        Self::new(labels, self.adj.clone())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn adjacency(&self) -> &F2Matrix {
        &self.adj
    }

    pub fn index_of(&self, v: Label) -> Result<usize, GraphError> {
        self.labels
            .iter()
            .position(|&l| l == v)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn indices_of(&self, vs: &[Label]) -> Result<Vec<usize>, GraphError> {
        vs.iter().map(|&v| self.index_of(v)).collect()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> Result<bool, GraphError> {
        Ok(self.adj.get(self.index_of(a)?, self.index_of(b)?))
    }

    #[inline]
    pub fn has_edge_at(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j)
    }

    pub fn neighbors(&self, v: Label) -> Result<Vec<Label>, GraphError> {
        let i = self.index_of(v)?;
        Ok(self.adj.row(i).iter_ones().map(|j| self.labels[j]).collect())
    }

    /// Neighbourhood of position `i` as a bit vector over positions.
    pub fn neighborhood_at(&self, i: usize) -> &F2Vector {
        self.adj.row(i)
    }

    /// Edges as label pairs, in position-lexicographic order.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        pairs(self.n())
            .into_iter()
            .filter(|&(i, j)| self.adj.get(i, j))
            .map(|(i, j)| (self.labels[i], self.labels[j]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones() / 2
    }

    /// G*v: toggles every pair of distinct neighbours of `v`.
    pub fn local_complement(&self, v: Label) -> Result<Graph, GraphError> {
        let i = self.index_of(v)?;
        let mut g = self.clone();
        g.local_complement_at(i);
        Ok(g)
    }

    /// In-place local complementation at position `i`.
    pub fn local_complement_at(&mut self, i: usize) {
        let nb = self.adj.row(i).clone();
        for x in nb.iter_ones() {
            self.adj.xor_into_row(x, &nb);
            self.adj.flip(x, x);
        }
    }

    /// G×uv computed as G*u*v*u.
    pub fn pivot(&self, u: Label, v: Label) -> Result<Graph, GraphError> {
        let (iu, iv) = self.edge_positions(u, v)?;
        let mut g = self.clone();
        g.local_complement_at(iu);
        g.local_complement_at(iv);
        g.local_complement_at(iu);
        Ok(g)
    }

    /// G×uv computed by toggling every pair across the three parts
    /// N(u)∩N(v), N(v)\N(u)\{u} and N(u)\N(v)\{v}, then exchanging the
    /// neighbourhoods of u and v.
    pub fn pivot_tripartite(&self, u: Label, v: Label) -> Result<Graph, GraphError> {
        let (iu, iv) = self.edge_positions(u, v)?;
        let mut nu = self.adj.row(iu).clone();
        let mut nv = self.adj.row(iv).clone();
        nu.set(iv, false);
        nv.set(iu, false);
        let mut both = nu.clone();
        both.and_assign(&nv);
        let only_v = nv.xor(&both);
        let only_u = nu.xor(&both);

        let mut g = self.clone();
        let parts = [
            (&both, only_v.xor(&only_u)),
            (&only_v, both.xor(&only_u)),
            (&only_u, both.xor(&only_v)),
        ];
        for (part, others) in parts {
            for x in part.iter_ones() {
                g.adj.xor_into_row(x, &others);
            }
        }
        g.swap_positions(iu, iv);
        Ok(g)
    }

    fn edge_positions(&self, u: Label, v: Label) -> Result<(usize, usize), GraphError> {
        let (iu, iv) = (self.index_of(u)?, self.index_of(v)?);
        if iu == iv || !self.adj.get(iu, iv) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        Ok((iu, iv))
    }

    /// Exchanges the adjacency of positions `a` and `b`, keeping labels.
    fn swap_positions(&mut self, a: usize, b: usize) {
        let n = self.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(a, b);
        self.adj = F2Matrix::from_fn(n, n, |i, j| self.adj.get(perm[i], perm[j]));
    }

    /// Induced subgraph on `vs`, in the order given.
    pub fn induced(&self, vs: &[Label]) -> Result<Graph, GraphError> {
        check_unique(vs)?;
        let idx = self.indices_of(vs)?;
        Ok(Graph {
            labels: vs.to_vec(),
            adj: self.adj.submatrix(&idx, &idx),
        })
    }

    pub fn induced_at(&self, idx: &[usize]) -> Graph {
        Graph {
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            adj: self.adj.submatrix(idx, idx),
        }
    }

    pub fn delete_vertex(&self, v: Label) -> Result<Graph, GraphError> {
        let i = self.index_of(v)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&j| j != i).collect();
        Ok(self.induced_at(&keep))
    }

    /// Edge-set XOR. `other` may list the same labels in a different order;
    /// the result follows `self`'s order.
    pub fn symmetric_difference(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.n() != other.n() {
            return Err(GraphError::VertexSetMismatch);
        }
        let map: Vec<usize> = self
            .labels
            .iter()
            .map(|&l| other.index_of(l).map_err(|_| GraphError::VertexSetMismatch))
            .collect::<Result<_, _>>()?;
        let n = self.n();
        let adj = F2Matrix::from_fn(n, n, |i, j| {
            self.adj.get(i, j) ^ other.adj.get(map[i], map[j])
        });
        Ok(Graph {
            labels: self.labels.clone(),
            adj,
        })
    }

    /// Edge bitmask in [`pair_index`] order over positions.
    pub fn edge_mask(&self) -> Result<u128, GraphError> {
        let n = self.n();
        if n > 16 {
            return Err(GraphError::TooLarge(n));
        }
        let mut mask = 0u128;
        for (k, (i, j)) in pairs(n).into_iter().enumerate() {
            if self.adj.get(i, j) {
                mask |= 1 << k;
            }
        }
        Ok(mask)
    }

    pub fn from_edge_mask(labels: Vec<Label>, mask: u128) -> Result<Graph, GraphError> {
        let n = labels.len();
        if n > 16 {
            return Err(GraphError::TooLarge(n));
        }
        let mut g = Graph::empty_labeled(labels)?;
        for (k, (i, j)) in pairs(n).into_iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                g.adj.set(i, j, true);
                g.adj.set(j, i, true);
            }
        }
        Ok(g)
    }

    /// Standard graph6 encoding (no header, no newline).
    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out: Vec<u8> = Vec::new();
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.push(126);
            out.push(126);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        // Upper triangle, column by column: x(0,1), x(0,2), x(1,2), x(0,3), ...
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.adj.get(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 output is ASCII")
    }

    /// Decodes graph6 (optionally with a `>>graph6<<` header) onto labels
    /// `0..n`.
    pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
        let trimmed = text.trim_end_matches(['\n', '\r']);
        let (offset, body) = match trimmed.strip_prefix(">>graph6<<") {
            Some(rest) => (10, rest.as_bytes()),
            None => (0, trimmed.as_bytes()),
        };
        for (i, &b) in body.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::new(
                    offset + i,
                    format!("byte {b:#04x} outside the printable range 63..=126"),
                ));
            }
        }
        let take = |start: usize, count: usize| -> Result<usize, Graph6Error> {
            if body.len() < start + count {
                return Err(Graph6Error::new(
                    offset + body.len(),
                    "truncated vertex count",
                ));
            }
            Ok(body[start..start + count]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
        };
        let (n, mut pos) = match body.first() {
            None => return Err(Graph6Error::new(offset, "empty input")),
            Some(126) if body.get(1) == Some(&126) => (take(2, 6)?, 8),
            Some(126) => (take(1, 3)?, 4),
            Some(&b) => ((b - 63) as usize, 1),
        };
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        let available = body.len() - pos;
        if available != expected {
            return Err(Graph6Error::new(
                offset + pos + available.min(expected),
                format!("expected {expected} edge bytes for n={n}, found {available}"),
            ));
        }
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[pos + k / 6] - 63;
                if (byte >> (5 - k % 6)) & 1 == 1 {
                    g.adj.set(i, j, true);
                    g.adj.set(j, i, true);
                }
                k += 1;
            }
        }
        if bits % 6 != 0 {
            pos += expected - 1;
            let pad = (1u8 << (6 - bits % 6)) - 1;
            if (body[pos] - 63) & pad != 0 {
                return Err(Graph6Error::new(offset + pos, "nonzero padding bits"));
            }
        }
        Ok(g)
    }

    pub fn to_adjacency_list(&self) -> AdjacencyList {
        AdjacencyList {
            vertices: self.labels.clone(),
            adjacency: self
                .labels
                .iter()
                .enumerate()
                .map(|(i, &l)| {
                    let nb = self.adj.row(i).iter_ones().map(|j| self.labels[j]).collect();
                    (l, nb)
                })
                .collect(),
        }
    }

    pub fn from_adjacency_list(list: &AdjacencyList) -> Result<Graph, GraphError> {
        let mut g = Graph::empty_labeled(list.vertices.clone())?;
        for (&v, nbs) in &list.adjacency {
            let i = g.index_of(v)?;
            for &w in nbs {
                let j = g.index_of(w)?;
                if i == j {
                    return Err(GraphError::SelfLoop(i));
                }
                g.adj.set(i, j, true);
            }
        }
        if !g.adj.is_symmetric() {
            return Err(GraphError::NotSymmetric);
        }
        Ok(g)
    }
}

fn check_unique(labels: &[Label]) -> Result<(), GraphError> {
    let mut seen = HashMap::with_capacity(labels.len());
    for &l in labels {
        if seen.insert(l, ()).is_some() {
            return Err(GraphError::DuplicateLabel(l));
        }
    }
    Ok(())
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(labels={:?}, edges={:?})", self.labels, self.edges())
    }
}

/// Serialized as `{"labels": [...], "edges": [[a, b], ...]}`.
impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Graph", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
    }
}

/// Human-readable JSON form: vertex order plus each vertex's neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyList {
    pub vertices: Vec<Label>,
    pub adjacency: BTreeMap<Label, Vec<Label>>,
}

/// Row-bitmask graph on positions `0..n`, `n <= 128`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitGraph {
    n: usize,
    rows: Vec<u128>,
}

impl BitGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 128, "BitGraph supports at most 128 vertices");
        Self {
            n,
            rows: vec![0; n],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut b = Self::empty(g.n());
        for (i, r) in b.rows.iter_mut().enumerate() {
            *r = g.adj.row(i).to_mask();
        }
        b
    }

    pub fn to_graph(&self, labels: Vec<Label>) -> Result<Graph, GraphError> {
        let adj = F2Matrix::from_row_vectors(
            self.n,
            self.rows
                .iter()
                .map(|&r| F2Vector::from_mask(self.n, r))
                .collect(),
        );
        Graph::new(labels, adj)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> u128 {
        self.rows[i]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    #[inline]
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        debug_assert!(i != j);
        if present {
            self.rows[i] |= 1 << j;
            self.rows[j] |= 1 << i;
        } else {
            self.rows[i] &= !(1 << j);
            self.rows[j] &= !(1 << i);
        }
    }

    #[inline]
    pub fn local_complement(&mut self, v: usize) {
        let nb = self.rows[v];
        let mut rest = nb;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.rows[x] ^= nb ^ (1 << x);
        }
    }

    /// G*u*v*u. Caller guarantees `uv` is an edge.
    #[inline]
    pub fn pivot(&mut self, u: usize, v: usize) {
        debug_assert!(self.has_edge(u, v));
        self.local_complement(u);
        self.local_complement(v);
        self.local_complement(u);
    }

    /// Edge bitmask in [`pair_index`] order. Panics if `n > 16`.
    pub fn edge_mask(&self) -> u128 {
        assert!(self.n <= 16, "edge masks support at most 16 vertices");
        let mut mask = 0u128;
        let mut k = 0;
        for i in 0..self.n {
            let above = self.rows[i] >> (i + 1);
            let width = self.n - i - 1;
            mask |= (above & ((1u128 << width) - 1)) << k;
            k += width;
        }
        mask
    }

    pub fn from_edge_mask(n: usize, mask: u128) -> Self {
        assert!(n <= 16, "edge masks support at most 16 vertices");
        let mut b = Self::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if (mask >> k) & 1 == 1 {
                    b.rows[i] |= 1 << j;
                    b.rows[j] |= 1 << i;
                }
                k += 1;
            }
        }
        b
    }

    /// Edge bitmask of the subgraph induced on `idx` (in that order).
    pub fn induced_mask(&self, idx: &[usize]) -> u128 {
        let mut mask = 0u128;
        let mut k = 0;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if self.has_edge(i, j) {
                    mask |= 1 << k;
                }
                k += 1;
            }
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)])
    }

    fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let edges: Vec<_> = pairs(n)
                    .into_iter()
                    .zip(bits)
                    .filter(|(_, b)| *b)
                    .map(|(e, _)| e)
                    .collect();
                Graph::from_edges(n, &edges)
            })
        })
    }

    /// Local complementation straight from the definition.
    fn lc_by_definition(g: &Graph, v: Label) -> Graph {
        let nb = g.neighbors(v).unwrap();
        let mut edges: Vec<(Label, Label)> = g.edges();
        for (a, &x) in nb.iter().enumerate() {
            for &y in &nb[a + 1..] {
                if let Some(pos) = edges
                    .iter()
                    .position(|&e| e == (x, y) || e == (y, x))
                {
                    edges.remove(pos);
                } else {
                    edges.push((x, y));
                }
            }
        }
        Graph::from_labeled_edges(g.labels().to_vec(), &edges).unwrap()
    }

    #[test]
    fn local_complement_path_gives_triangle() {
        let g = path3().local_complement(1).unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn local_complement_isolated_vertex_is_identity() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]);
        assert_eq!(g.local_complement(3).unwrap(), g);
        assert_eq!(g.local_complement(9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn pivot_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(k2.pivot(0, 1).unwrap(), k2);
        assert_eq!(k2.pivot_tripartite(0, 1).unwrap(), k2);

        // a-b-c pivot at ab: a*b*a by hand gives edges ab, ac.
        let g = path3();
        let expected = Graph::from_edges(3, &[(0, 1), (0, 2)]);
        let by_lc = g
            .local_complement(0)
            .unwrap()
            .local_complement(1)
            .unwrap()
            .local_complement(0)
            .unwrap();
        assert_eq!(by_lc, expected);
        assert_eq!(g.pivot(0, 1).unwrap(), expected);
        // Parts: N(a)∩N(b) = ∅, N(b)\N(a)\{a} = {c}, N(a)\N(b)\{b} = ∅;
        // nothing toggles and a, b exchange neighbourhoods.
        assert_eq!(g.pivot_tripartite(0, 1).unwrap(), expected);
        assert_eq!(g.pivot(0, 2), Err(GraphError::NotAnEdge(0, 2)));
        assert_eq!(g.pivot_tripartite(0, 0), Err(GraphError::NotAnEdge(0, 0)));
    }

    #[test]
    fn induced_examples() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 3)]);
        assert_eq!(g.induced(&[0, 1, 2, 3]).unwrap(), g);
        assert_eq!(Graph::complete(3).induced(&[0, 1]).unwrap(), Graph::complete(2));
        assert_eq!(g.induced(&[0, 7]), Err(GraphError::UnknownVertex(7)));
        let sub = g.induced(&[3, 1]).unwrap();
        assert_eq!(sub.labels(), &[3, 1]);
        assert!(sub.has_edge(1, 3).unwrap());
    }

    #[test]
    fn symmetric_difference_examples() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let h = Graph::from_edges(4, &[(0, 1), (1, 2)]);
        assert_eq!(g.symmetric_difference(&g).unwrap(), Graph::empty(4));
        assert_eq!(g.symmetric_difference(&Graph::empty(4)).unwrap(), g);
        let d = g.symmetric_difference(&h).unwrap();
        assert_eq!(
            d.adjacency(),
            &g.adjacency().add(h.adjacency()).unwrap()
        );
        assert_eq!(
            g.symmetric_difference(&Graph::empty(3)),
            Err(GraphError::VertexSetMismatch)
        );
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(Graph::complete(2).to_graph6(), "A_");
        assert_eq!(Graph::from_graph6("A_").unwrap(), Graph::complete(2));
        assert_eq!(Graph::empty(1).to_graph6(), "@");
        assert_eq!(Graph::from_graph6("@").unwrap(), Graph::empty(1));
        assert_eq!(Graph::empty(0).to_graph6(), "?");
        // Path 0-1-2: bits x01=1, x02=0, x12=1 -> 101000 -> 40+63 = 'g'.
        assert_eq!(path3().to_graph6(), "Bg");
        assert_eq!(Graph::from_graph6(">>graph6<<Bg\n").unwrap(), path3());
        // Petersen graph, as printed by nauty's geng/showg.
        let petersen = Graph::from_graph6("IheA@GUAo").unwrap();
        assert_eq!(petersen.n(), 10);
        assert_eq!(petersen.edge_count(), 15);
        assert!((0..10).all(|v| petersen.neighbors(v).unwrap().len() == 3));
    }

    #[test]
    fn graph6_large_vertex_counts() {
        let g = Graph::from_edges(70, &[(0, 69), (5, 6)]);
        let s = g.to_graph6();
        assert!(s.starts_with('~'));
        assert_eq!(Graph::from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_errors_report_position() {
        let e = Graph::from_graph6("").unwrap_err();
        assert_eq!(e.position, 0);
        let e = Graph::from_graph6("B").unwrap_err();
        assert_eq!(e.position, 1);
        let e = Graph::from_graph6("Bg?").unwrap_err();
        assert_eq!(e.position, 2);
        let e = Graph::from_graph6("B\u{7f}").unwrap_err();
        assert_eq!(e.position, 1);
        // 'h' = 41 = 101001: last bit is padding.
        let e = Graph::from_graph6("Bh").unwrap_err();
        assert_eq!((e.position, e.message.as_str()), (1, "nonzero padding bits"));
        let e = Graph::from_graph6("~??").unwrap_err();
        assert_eq!(e.message, "truncated vertex count");
    }

    #[test]
    fn adjacency_list_json() {
        let g = path3().relabeled(vec![10, 20, 30]).unwrap();
        let json = serde_json::to_string(&g.to_adjacency_list()).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":[10,20,30],"adjacency":{"10":[20],"20":[10,30],"30":[20]}}"#
        );
        let back: AdjacencyList = serde_json::from_str(&json).unwrap();
        assert_eq!(Graph::from_adjacency_list(&back).unwrap(), g);
    }

    #[test]
    fn constructor_validation() {
        let asym = F2Matrix::from_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(Graph::new(vec![0, 1], asym), Err(GraphError::NotSymmetric));
        let looped = F2Matrix::from_rows(&[&[1, 0], &[0, 0]]);
        assert_eq!(Graph::new(vec![0, 1], looped), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::empty_labeled(vec![3, 3]),
            Err(GraphError::DuplicateLabel(3))
        );
    }

    #[test]
    fn pair_index_is_lexicographic() {
        for n in 2..9 {
            for (k, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(pair_index(n, j, i), k);
            }
        }
    }

    proptest! {
        #[test]
        fn local_complement_matches_definition_and_is_involution(g in graph_strategy(9), v in 0u32..9) {
            prop_assume!((v as usize) < g.n());
            let once = g.local_complement(v).unwrap();
            prop_assert_eq!(&once, &lc_by_definition(&g, v));
            prop_assert!(once.adjacency().is_symmetric());
            prop_assert!(once.adjacency().has_zero_diagonal());
            prop_assert_eq!(once.local_complement(v).unwrap(), g);
        }

        #[test]
        fn pivot_is_well_defined(g in graph_strategy(10)) {
            for (u, v) in g.edges() {
                let p = g.pivot(u, v).unwrap();
                let vuv = g.local_complement(v).unwrap()
                    .local_complement(u).unwrap()
                    .local_complement(v).unwrap();
                prop_assert_eq!(&p, &vuv);
                prop_assert_eq!(&p, &g.pivot(v, u).unwrap());
                prop_assert_eq!(&p, &g.pivot_tripartite(u, v).unwrap());
            }
        }

        #[test]
        fn outside_complementation_toggles_only_common_neighbours(
            g in graph_strategy(9),
            w in 0u32..9,
            keep in proptest::collection::vec(any::<bool>(), 9),
        ) {
            prop_assume!((w as usize) < g.n());
            let u: Vec<Label> = (0..g.n() as Label).filter(|&x| x != w && keep[x as usize]).collect();
            let before = g.induced(&u).unwrap();
            let after = g.local_complement(w).unwrap().induced(&u).unwrap();
            let diff = before.symmetric_difference(&after).unwrap();
            let nw = g.neighbors(w).unwrap();
            for (a, &x) in u.iter().enumerate() {
                for &y in &u[a + 1..] {
                    let toggled = nw.contains(&x) && nw.contains(&y);
                    prop_assert_eq!(diff.has_edge(x, y).unwrap(), toggled);
                }
            }
        }

        #[test]
        fn graph6_round_trip(g in graph_strategy(20)) {
            prop_assert_eq!(Graph::from_graph6(&g.to_graph6()).unwrap(), g);
        }

        #[test]
        fn bitgraph_agrees_with_graph(g in graph_strategy(12), ops in proptest::collection::vec(0usize..12, 0..6)) {
            let mut b = BitGraph::from_graph(&g);
            let mut h = g.clone();
            for v in ops.into_iter().filter(|&v| v < g.n()) {
                b.local_complement(v);
                h.local_complement_at(v);
            }
            prop_assert_eq!(b.to_graph(h.labels().to_vec()).unwrap(), h.clone());
            prop_assert_eq!(b.edge_mask(), h.edge_mask().unwrap());
            prop_assert_eq!(BitGraph::from_edge_mask(g.n(), b.edge_mask()), b);
        }
    }
}
