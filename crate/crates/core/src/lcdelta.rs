//! The change G_Δ = G'[U] △ G[U] produced by complementing at every vertex
//! of W = V \ U in a fixed order, computed two ways.
//!
//! [`sequential_delta`] performs the r local complementations on the whole
//! graph. [`delta_via_m`] never touches G[U]: it builds the unit upper
//! triangular matrix L from a private copy of G[W], sets M = L⁻¹(L⁻¹)ᵀ and
//! reads G_Δ off as OffDiag(X M Xᵀ), X being the U×W biadjacency matrix.
//!
//! Writing z_i for the U-neighbourhood of w_i at the moment it is
//! complemented, z_i = X_i + Σ z_j over the j < i with w_i w_j an edge just
//! before step j; that recurrence is exactly X = Z L, and the i-th step flips
//! OffDiag(z_i z_iᵀ) inside U.

use serde::Serialize;
use thiserror::Error;

use crate::f2core::{F2Matrix, F2Vector};
use crate::graph::{Graph, GraphError, Label};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("U and W do not partition the vertex set: {0}")]
    NotAPartition(String),
}

/// A graph together with a partition of its vertices into an ordered set U
/// and an ordered complementation sequence W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcInstance {
    g: Graph,
    u_set: Vec<Label>,
    w_order: Vec<Label>,
    u_idx: Vec<usize>,
    w_idx: Vec<usize>,
}

impl LcInstance {
    pub fn new(g: Graph, u_set: Vec<Label>, w_order: Vec<Label>) -> Result<Self, LcError> {
        let u_idx = g.indices_of(&u_set)?;
        let w_idx = g.indices_of(&w_order)?;
        let mut seen = vec![false; g.n()];
        for &i in u_idx.iter().chain(&w_idx) {
            if seen[i] {
                return Err(LcError::NotAPartition(format!(
                    "vertex {} listed twice",
                    g.labels()[i]
                )));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(LcError::NotAPartition(format!(
                "vertex {} is in neither U nor W",
                g.labels()[i]
            )));
        }
        Ok(Self {
            g,
            u_set,
            w_order,
            u_idx,
            w_idx,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn u_set(&self) -> &[Label] {
        &self.u_set
    }

    pub fn w_order(&self) -> &[Label] {
        &self.w_order
    }

    pub fn u_positions(&self) -> &[usize] {
        &self.u_idx
    }

    pub fn w_positions(&self) -> &[usize] {
        &self.w_idx
    }

    pub fn s(&self) -> usize {
        self.u_set.len()
    }

    pub fn r(&self) -> usize {
        self.w_order.len()
    }

    /// G[W] with vertices in complementation order.
    pub fn w_graph(&self) -> Graph {
        self.g.induced_at(&self.w_idx)
    }

    /// X: row i, column j is 1 iff u_i w_j is an edge.
    pub fn biadjacency(&self) -> F2Matrix {
        self.g.adjacency().submatrix(&self.u_idx, &self.w_idx)
    }

    /// The same instance with G[W] replaced by `gw`, whose labels must be
    /// W in complementation order.
    pub fn with_w_graph(&self, gw: &Graph) -> Result<Self, LcError> {
        if gw.labels() != self.w_order.as_slice() {
            return Err(GraphError::VertexSetMismatch.into());
        }
        let mut adj = self.g.adjacency().clone();
        for (a, &i) in self.w_idx.iter().enumerate() {
            for (b, &j) in self.w_idx.iter().enumerate() {
                adj.set(i, j, gw.has_edge_at(a, b));
            }
        }
        let g = Graph::new(self.g.labels().to_vec(), adj)?;
        Self::new(g, self.u_set.clone(), self.w_order.clone())
    }

    /// The same instance with G[U] replaced by `gu` (labels = U in order).
    pub fn with_u_graph(&self, gu: &Graph) -> Result<Self, LcError> {
        if gu.labels() != self.u_set.as_slice() {
            return Err(GraphError::VertexSetMismatch.into());
        }
        let mut adj = self.g.adjacency().clone();
        for (a, &i) in self.u_idx.iter().enumerate() {
            for (b, &j) in self.u_idx.iter().enumerate() {
                adj.set(i, j, gu.has_edge_at(a, b));
            }
        }
        let g = Graph::new(self.g.labels().to_vec(), adj)?;
        Self::new(g, self.u_set.clone(), self.w_order.clone())
    }
}

/// Everything produced along the way by [`delta_via_m`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCertificate {
    pub x: F2Matrix,
    pub l: F2Matrix,
    pub m: F2Matrix,
    pub z_cols: Vec<F2Vector>,
    pub delta: Graph,
}

/// Ground truth: complement at w_1, ..., w_r on the full graph and compare
/// the two restrictions to U.
pub fn sequential_delta(inst: &LcInstance) -> Graph {
    sequential_trace(inst).0
}

/// The naive simulation, also returning z_i = the U-neighbourhood of w_i in
/// G_i = G*w_1*...*w_i.
pub fn sequential_trace(inst: &LcInstance) -> (Graph, Vec<F2Vector>) {
    let mut g = inst.g.clone();
    let mut z_cols = Vec::with_capacity(inst.r());
    for &w in &inst.w_idx {
        g.local_complement_at(w);
        z_cols.push(g.neighborhood_at(w).select(&inst.u_idx));
    }
    let before = inst.g.induced_at(&inst.u_idx);
    let after = g.induced_at(&inst.u_idx);
    let delta = before
        .symmetric_difference(&after)
        .expect("same vertex set");
    (delta, z_cols)
}

pub fn build_l(inst: &LcInstance) -> F2Matrix {
    build_l_from_w_graph(&inst.w_graph())
}

/// L from G[W] alone (`gw` in complementation order): L_ji = 1 for j = i,
/// and for j < i when w_i w_j is an edge of G_{j-1}. The sweep keeps an
/// evolving copy of G[W], using (G*w)[W] = G[W]*w for w in W.
pub fn build_l_from_w_graph(gw: &Graph) -> F2Matrix {
    let r = gw.n();
    let mut current = gw.clone();
    let mut l = F2Matrix::identity(r);
    for j in 0..r {
        for i in current.neighborhood_at(j).iter_ones().filter(|&i| i > j) {
            l.set(j, i, true);
        }
        current.local_complement_at(j);
    }
    l
}

pub fn build_m(inst: &LcInstance) -> F2Matrix {
    build_m_from_w_graph(&inst.w_graph())
}

/// M = L⁻¹(L⁻¹)ᵀ.
pub fn build_m_from_w_graph(gw: &Graph) -> F2Matrix {
    m_from_l(&build_l_from_w_graph(gw))
}

fn m_from_l(l: &F2Matrix) -> F2Matrix {
    let l_inv = l.invert().expect("unit upper triangular L is invertible");
    l_inv
        .multiply(&l_inv.transpose())
        .expect("square factors")
}

/// The closed-form route to G_Δ, with every intermediate retained.
pub fn delta_via_m(inst: &LcInstance) -> DeltaCertificate {
    let x = inst.biadjacency();
    let l = build_l(inst);
    let m = m_from_l(&l);

    let x_cols = x.columns();
    let mut z_cols: Vec<F2Vector> = Vec::with_capacity(inst.r());
    for i in 0..inst.r() {
        let mut z = x_cols[i].clone();
        for j in (0..i).filter(|&j| l.get(j, i)) {
            z.xor_assign(&z_cols[j]);
        }
        z_cols.push(z);
    }

    let xmxt = x
        .multiply(&m)
        .and_then(|xm| xm.multiply(&x.transpose()))
        .expect("conformable");
    let delta = Graph::new(
        inst.u_set.clone(),
        xmxt.off_diag().expect("square"),
    )
    .expect("OffDiag of a symmetric matrix is an adjacency matrix");

    DeltaCertificate {
        x,
        l,
        m,
        z_cols,
        delta,
    }
}

/// Checks the internal consistency of a certificate; returns the list of
/// violated properties (empty when all hold).
pub fn certificate_violations(cert: &DeltaCertificate) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let r = cert.l.rows();
    let s = cert.x.rows();
    if !cert.l.is_unit_upper_triangular() {
        bad.push("L is not unit upper triangular");
    }
    if !cert.m.is_symmetric() {
        bad.push("M is not symmetric");
    }
    if cert.m.rank() != r {
        bad.push("M is not invertible");
    }
    match cert.l.invert() {
        Ok(l_inv) => {
            let xl = cert.x.multiply(&l_inv).expect("conformable");
            if xl.columns() != cert.z_cols {
                bad.push("columns of X L^-1 differ from z");
            }
        }
        Err(_) => bad.push("L is singular"),
    }
    let mut sum = F2Matrix::zeros(s, s);
    for z in &cert.z_cols {
        for i in z.iter_ones() {
            sum.xor_into_row(i, z);
        }
    }
    if cert.delta.adjacency() != &sum.off_diag().expect("square") {
        bad.push("delta differs from OffDiag(sum z z^T)");
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, p: f64) -> LcInstance {
        let n = rng.gen_range(1..=max_n);
        let mut g = Graph::empty(n);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        g = Graph::from_edges(g.n(), &edges);
        let mut verts: Vec<Label> = (0..n as Label).collect();
        verts.shuffle(rng);
        let s = rng.gen_range(0..=n);
        let u = verts[..s].to_vec();
        let w = verts[s..].to_vec();
        LcInstance::new(g, u, w).unwrap()
    }

    #[test]
    fn empty_w_gives_empty_delta() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let inst = LcInstance::new(g, vec![0, 1, 2], vec![]).unwrap();
        assert_eq!(sequential_delta(&inst), Graph::empty(3));
        let cert = delta_via_m(&inst);
        assert_eq!(cert.delta, Graph::empty(3));
        assert_eq!(cert.l.rows(), 0);
    }

    #[test]
    fn single_complementation_joins_common_neighbours() {
        // u1=0, u2=1 nonadjacent, w=2 adjacent to both.
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]);
        let inst = LcInstance::new(g, vec![0, 1], vec![2]).unwrap();
        let expected = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(sequential_delta(&inst), expected);
        assert_eq!(delta_via_m(&inst).delta, expected);
    }

    #[test]
    fn build_l_examples() {
        let indep = Graph::empty(4);
        assert_eq!(build_l_from_w_graph(&indep), F2Matrix::identity(4));
        assert_eq!(build_m_from_w_graph(&indep), F2Matrix::identity(4));

        let edge = Graph::complete(2);
        let l = build_l_from_w_graph(&edge);
        assert_eq!(l, F2Matrix::from_rows(&[&[1, 1], &[0, 1]]));
        // L^-1 = L, so M = L L^T = [[0,1],[1,1]].
        assert_eq!(
            build_m_from_w_graph(&edge),
            F2Matrix::from_rows(&[&[0, 1], &[1, 1]])
        );
    }

    #[test]
    fn independent_w_counts_common_neighbour_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = 4;
            let r = rng.gen_range(0..7);
            let n = s + r;
            let mut edges = Vec::new();
            for i in 0..s {
                for j in s..n {
                    if rng.gen_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges);
            let u: Vec<Label> = (0..s as Label).collect();
            let w: Vec<Label> = (s as Label..n as Label).collect();
            let inst = LcInstance::new(g.clone(), u, w.clone()).unwrap();
            let cert = delta_via_m(&inst);
            for a in 0..s as Label {
                for b in a + 1..s as Label {
                    let common = w
                        .iter()
                        .filter(|&&x| g.has_edge(a, x).unwrap() && g.has_edge(b, x).unwrap())
                        .count();
                    assert_eq!(cert.delta.has_edge(a, b).unwrap(), common % 2 == 1);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_sequential_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..300 {
            let p = [0.1, 0.3, 0.5, 0.7, 0.9][t % 5];
            let inst = random_instance(&mut rng, 20, p);
            let (delta, z_seq) = sequential_trace(&inst);
            let cert = delta_via_m(&inst);
            assert_eq!(cert.delta, delta);
            assert_eq!(cert.z_cols, z_seq);
            assert!(certificate_violations(&cert).is_empty());
        }
    }

    #[test]
    fn l_depends_only_on_w_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let inst = random_instance(&mut rng, 14, 0.5);
            let l = build_l(&inst);
            // Rewire every U-W and U-U pair at random.
            let mut adj = inst.graph().adjacency().clone();
            for &i in inst.u_positions() {
                for j in 0..inst.graph().n() {
                    if i != j && rng.gen_bool(0.5) {
                        adj.flip(i, j);
                        adj.flip(j, i);
                    }
                }
            }
            let g2 = Graph::new(inst.graph().labels().to_vec(), adj).unwrap();
            let inst2 = LcInstance::new(g2, inst.u_set().to_vec(), inst.w_order().to_vec()).unwrap();
            assert_eq!(build_l(&inst2), l);
        }
    }

    #[test]
    fn delta_is_independent_of_u_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let inst = random_instance(&mut rng, 14, 0.4);
            let s = inst.s();
            let mut edges = Vec::new();
            for i in 0..s {
                for j in i + 1..s {
                    if rng.gen_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            let gu = Graph::from_edges(s, &edges)
                .relabeled(inst.u_set().to_vec())
                .unwrap();
            let swapped = inst.with_u_graph(&gu).unwrap();
            assert_eq!(sequential_delta(&swapped), sequential_delta(&inst));
        }
    }

    #[test]
    fn instance_validation() {
        let g = Graph::empty(3);
        assert!(matches!(
            LcInstance::new(g.clone(), vec![0], vec![1]),
            Err(LcError::NotAPartition(_))
        ));
        assert!(matches!(
            LcInstance::new(g.clone(), vec![0, 1], vec![1, 2]),
            Err(LcError::NotAPartition(_))
        ));
        assert!(matches!(
            LcInstance::new(g, vec![0, 5], vec![1, 2]),
            Err(LcError::Graph(GraphError::UnknownVertex(5)))
        ));
    }
}
