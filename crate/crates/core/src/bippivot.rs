//! Ordered bipartite graphs and pivots on them.
//!
//! A pivot at an edge uv (u on the left, v on the right) is G*u*v*u on the
//! underlying graph, after which u and v trade sides. In biadjacency terms,
//! with u in row i and v in column j, every entry (a,b) with a != i and
//! b != j gains A[a][j]·A[i][b]; row i and column j stay as they are and
//! are relabelled v and u.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::f2core::{F2Matrix, F2Vector};
use crate::graph::{Graph, GraphError, Label};
use crate::numeric::derive_seed;
use crate::rankcensus::mask_rank;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BipError {
    #[error("vertex {0} is not on the expected side")]
    WrongSide(Label),
    #[error("{0}{1} is not an edge")]
    NotAnEdge(Label, Label),
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(Label),
    #[error("biadjacency is {got:?}, sides are {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("need 0 < gamma0 < r, got gamma0 = {gamma0}, r = {r}")]
    Domain { r: usize, gamma0: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrderedBipartiteGraph {
    left: Vec<Label>,
    right: Vec<Label>,
    biadj: F2Matrix,
}

impl OrderedBipartiteGraph {
    pub fn new(left: Vec<Label>, right: Vec<Label>, biadj: F2Matrix) -> Result<Self, BipError> {
        if biadj.rows() != left.len() || biadj.cols() != right.len() {
            return Err(BipError::DimensionMismatch {
                expected: (left.len(), right.len()),
                got: (biadj.rows(), biadj.cols()),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for &v in left.iter().chain(&right) {
            if !seen.insert(v) {
                return Err(BipError::DuplicateVertex(v));
            }
        }
        Ok(Self { left, right, biadj })
    }

    /// Left vertices 0..a, right vertices a..a+b.
    pub fn from_biadjacency(biadj: F2Matrix) -> Self {
        let a = biadj.rows() as Label;
        let b = biadj.cols() as Label;
        Self {
            left: (0..a).collect(),
            right: (a..a + b).collect(),
            biadj,
        }
    }

    pub fn left(&self) -> &[Label] {
        &self.left
    }

    pub fn right(&self) -> &[Label] {
        &self.right
    }

    pub fn biadjacency(&self) -> &F2Matrix {
        &self.biadj
    }

    pub fn left_index(&self, v: Label) -> Option<usize> {
        self.left.iter().position(|&x| x == v)
    }

    pub fn right_index(&self, v: Label) -> Option<usize> {
        self.right.iter().position(|&x| x == v)
    }

    pub fn has_edge(&self, u: Label, v: Label) -> bool {
        match (self.left_index(u), self.right_index(v)) {
            (Some(i), Some(j)) => self.biadj.get(i, j),
            _ => match (self.left_index(v), self.right_index(u)) {
                (Some(i), Some(j)) => self.biadj.get(i, j),
                _ => false,
            },
        }
    }

    /// The underlying graph with vertices ordered left then right.
    pub fn to_graph(&self) -> Graph {
        let (a, b) = (self.left.len(), self.right.len());
        let adj = F2Matrix::from_fn(a + b, a + b, |x, y| match (x < a, y < a) {
            (true, false) => self.biadj.get(x, y - a),
            (false, true) => self.biadj.get(y, x - a),
            _ => false,
        });
        let labels = self.left.iter().chain(&self.right).copied().collect();
        Graph::new(labels, adj).expect("bipartite adjacency is a valid graph")
    }

    /// Pivot at uv, u on the left and v on the right.
    pub fn pivot(&self, u: Label, v: Label) -> Result<Self, BipError> {
        let i = self.left_index(u).ok_or(BipError::WrongSide(u))?;
        let j = self.right_index(v).ok_or(BipError::WrongSide(v))?;
        if !self.biadj.get(i, j) {
            return Err(BipError::NotAnEdge(u, v));
        }
        let mut out = self.clone();
        out.pivot_at(i, j);
        Ok(out)
    }

    /// Pivot at row i, column j (must be a one).
    pub fn pivot_at(&mut self, i: usize, j: usize) {
        debug_assert!(self.biadj.get(i, j));
        let mut alpha = self.biadj.row(i).clone();
        alpha.set(j, false);
        let beta = self.biadj.column(j);
        for a in beta.iter_ones().filter(|&a| a != i) {
            self.biadj.xor_into_row(a, &alpha);
        }
        std::mem::swap(&mut self.left[i], &mut self.right[j]);
    }

    /// The subgraph on the given left and right vertices, in that order.
    pub fn induced(&self, left: &[Label], right: &[Label]) -> Result<Self, BipError> {
        let rows = left
            .iter()
            .map(|&v| self.left_index(v).ok_or(BipError::WrongSide(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let cols = right
            .iter()
            .map(|&v| self.right_index(v).ok_or(BipError::WrongSide(v)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            left: left.to_vec(),
            right: right.to_vec(),
            biadj: self.biadj.submatrix(&rows, &cols),
        })
    }
}

/// Pivot at uv on an ordered bipartite graph.
pub fn bipartite_pivot(
    g: &OrderedBipartiteGraph,
    u: Label,
    v: Label,
) -> Result<OrderedBipartiteGraph, BipError> {
    g.pivot(u, v)
}

/// A rows × cols random biadjacency matrix with i.i.d. Ber(p) entries, row by row.
pub fn random_biadjacency(rows: usize, cols: usize, p: f64, rng: &mut impl Rng) -> F2Matrix {
    F2Matrix::from_fn(rows, cols, |_, _| rng.gen_bool(p))
}

/// One step of [`find_pivot_pairs`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairStep {
    pub pair: (Label, Label),
    /// The pair is an edge of the graph after the previous pivots.
    pub edge_after_previous: bool,
    /// The reduced block B' + αβ is invertible.
    pub reduced_invertible: bool,
    /// The reduced block equals the pivoted graph restricted to what is
    /// left of V_B.
    pub reduced_matches_graph: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotPairing {
    pub rank: usize,
    pub pairs: Vec<(Label, Label)>,
    pub steps: Vec<PairStep>,
}

impl PivotPairing {
    pub fn all_certified(&self) -> bool {
        self.pairs.len() == self.rank
            && self
                .steps
                .iter()
                .all(|s| s.edge_after_previous && s.reduced_invertible && s.reduced_matches_graph)
    }
}

/// Row and column indices of an invertible rank(A) × rank(A) submatrix.
pub fn invertible_submatrix(a: &F2Matrix) -> (Vec<usize>, Vec<usize>) {
    // Maximal independent set of rows, in index order.
    let mut basis: Vec<(usize, F2Vector)> = Vec::new();
    let mut rows = Vec::new();
    for i in 0..a.rows() {
        let mut v = a.row(i).clone();
        for (p, b) in &basis {
            if v.get(*p) {
                v.xor_assign(b);
            }
        }
        if let Some(p) = v.first_one() {
            for (_, b) in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            basis.push((p, v));
            rows.push(i);
        }
    }
    // Pivot columns of the reduced rows span the same column space.
    let mut cols: Vec<usize> = basis.iter().map(|(p, _)| *p).collect();
    cols.sort_unstable();
    (rows, cols)
}

/// Finds rank(A) disjoint pairs w_i w'_i such that each is an edge after
/// pivoting at the previous ones.
///
/// B is an invertible submatrix; at each step the first one of B in
/// row-major order is pivoted and B is replaced by B' + αβ on the remaining
/// rows and columns. Every step is checked against the actual pivoted graph.
pub fn find_pivot_pairs(g: &OrderedBipartiteGraph) -> PivotPairing {
    let (row_idx, col_idx) = invertible_submatrix(&g.biadj);
    let rank = row_idx.len();
    let mut row_labels: Vec<Label> = row_idx.iter().map(|&i| g.left[i]).collect();
    let mut col_labels: Vec<Label> = col_idx.iter().map(|&j| g.right[j]).collect();
    let mut b = g.biadj.submatrix(&row_idx, &col_idx);
    let mut current = g.clone();
    let mut pairs = Vec::with_capacity(rank);
    let mut steps = Vec::with_capacity(rank);

    while b.rows() > 0 {
        let Some((i, j)) = (0..b.rows()).find_map(|i| b.row(i).first_one().map(|j| (i, j))) else {
            break;
        };
        let pair = (row_labels[i], col_labels[j]);
        let edge_after_previous = current.has_edge(pair.0, pair.1);
        if edge_after_previous {
            current = current.pivot(pair.0, pair.1).expect("checked edge");
        }

        let keep_rows: Vec<usize> = (0..b.rows()).filter(|&a| a != i).collect();
        let keep_cols: Vec<usize> = (0..b.cols()).filter(|&c| c != j).collect();
        let mut alpha = b.row(i).clone();
        alpha.set(j, false);
        let beta = b.column(j);
        for a in beta.iter_ones().filter(|&a| a != i) {
            b.xor_into_row(a, &alpha);
        }
        b = b.submatrix(&keep_rows, &keep_cols);
        row_labels.remove(i);
        col_labels.remove(j);

        let reduced_invertible = b.rank() == b.rows();
        let reduced_matches_graph = edge_after_previous
            && current
                .induced(&row_labels, &col_labels)
                .map(|h| h.biadj == b)
                .unwrap_or(false);
        pairs.push(pair);
        steps.push(PairStep {
            pair,
            edge_after_previous,
            reduced_invertible,
            reduced_matches_graph,
        });
    }
    PivotPairing { rank, pairs, steps }
}

/// Kinds of disagreement found by [`bipartite_delta_via_m`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationKind {
    /// G_Δ differs from Σ z^L (z^R)ᵀ.
    DeltaSum,
    /// No unit upper triangular Q with X Q = Z on the named side.
    SolveFailure,
    /// Q_L and Q_R exist but X_L Q_L Q_Rᵀ X_Rᵀ differs from G_Δ.
    MClaim,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub kind: RefutationKind,
    pub detail: String,
}

/// Everything computed by [`bipartite_delta_via_m`]. U_L and U_R are
/// disjoint, so the full |U_L|×|U_R| matrices are compared (there is no
/// diagonal to discard).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteDeltaReport {
    pub delta: F2Matrix,
    pub x_left: F2Matrix,
    pub x_right: F2Matrix,
    pub z_left: F2Matrix,
    pub z_right: F2Matrix,
    /// Unit upper triangular matrices read off the pivot sequence:
    /// X_L = Z_L R_L and X_R = Z_R R_R.
    pub recurrence_left: F2Matrix,
    pub recurrence_right: F2Matrix,
    pub q_left: Option<F2Matrix>,
    pub q_right: Option<F2Matrix>,
    pub m: Option<F2Matrix>,
    pub refutations: Vec<Refutation>,
}

impl BipartiteDeltaReport {
    pub fn is_certificate(&self) -> bool {
        self.refutations.is_empty()
    }

    pub fn delta_sum_holds(&self) -> bool {
        !self
            .refutations
            .iter()
            .any(|r| r.kind == RefutationKind::DeltaSum)
    }
}

/// Pivots along `pairing` (pairs in W_L × W_R) and checks the bipartite
/// analogue of the M construction on U_L × U_R.
///
/// z_i^L is the U_L-neighbourhood of w'_i and z_i^R the U_R-neighbourhood
/// of w_i, both just before the i-th pivot; that pivot toggles exactly
/// z_i^L (z_i^R)ᵀ inside U_L × U_R.
pub fn bipartite_delta_via_m(
    g: &OrderedBipartiteGraph,
    u_left: &[Label],
    u_right: &[Label],
    pairing: &[(Label, Label)],
) -> Result<BipartiteDeltaReport, BipError> {
    let mut used = std::collections::HashSet::new();
    for &v in u_left.iter().chain(u_right) {
        if !used.insert(v) {
            return Err(BipError::DuplicateVertex(v));
        }
    }
    for &(w, w2) in pairing {
        for v in [w, w2] {
            if !used.insert(v) {
                return Err(BipError::DuplicateVertex(v));
            }
        }
        g.left_index(w).ok_or(BipError::WrongSide(w))?;
        g.right_index(w2).ok_or(BipError::WrongSide(w2))?;
    }
    let before = g.induced(u_left, u_right)?;
    let r = pairing.len();
    let (sl, sr) = (u_left.len(), u_right.len());

    let w_left: Vec<Label> = pairing.iter().map(|p| p.0).collect();
    let w_right: Vec<Label> = pairing.iter().map(|p| p.1).collect();
    let x_left = F2Matrix::from_fn(sl, r, |a, i| g.has_edge(u_left[a], w_right[i]));
    let x_right = F2Matrix::from_fn(sr, r, |b, i| g.has_edge(u_right[b], w_left[i]));

    let mut z_left_cols = Vec::with_capacity(r);
    let mut z_right_cols = Vec::with_capacity(r);
    let mut rec_left = F2Matrix::identity(r);
    let mut rec_right = F2Matrix::identity(r);
    let mut current = g.clone();
    for (k, &(w, w2)) in pairing.iter().enumerate() {
        if !current.has_edge(w, w2) {
            return Err(BipError::NotAnEdge(w, w2));
        }
        z_left_cols.push(F2Vector::from_bools(
            &u_left.iter().map(|&u| current.has_edge(u, w2)).collect::<Vec<_>>(),
        ));
        z_right_cols.push(F2Vector::from_bools(
            &u_right.iter().map(|&u| current.has_edge(u, w)).collect::<Vec<_>>(),
        ));
        for i in k + 1..r {
            // Column w'_i picks up z_k^L when w'_i ~ w_k; row w_i picks up
            // z_k^R when w_i ~ w'_k.
            rec_left.set(k, i, current.has_edge(w, w_right[i]));
            rec_right.set(k, i, current.has_edge(w_left[i], w2));
        }
        current = current.pivot(w, w2)?;
    }
    let after = current.induced(u_left, u_right)?;
    let delta = before.biadj.add(&after.biadj).expect("same shape");
    let z_left = F2Matrix::from_columns(sl, &z_left_cols);
    let z_right = F2Matrix::from_columns(sr, &z_right_cols);

    let mut refutations = Vec::new();
    let sum = z_left
        .multiply(&z_right.transpose())
        .expect("conformable");
    if sum != delta {
        refutations.push(Refutation {
            kind: RefutationKind::DeltaSum,
            detail: format!("delta {delta:?} but sum of z products {sum:?}"),
        });
    }
    let q_left = F2Matrix::solve_unit_upper_triangular(&x_left, &z_left).expect("same shape");
    let q_right = F2Matrix::solve_unit_upper_triangular(&x_right, &z_right).expect("same shape");
    for (side, q) in [("left", &q_left), ("right", &q_right)] {
        if q.is_none() {
            refutations.push(Refutation {
                kind: RefutationKind::SolveFailure,
                detail: format!("no unit upper triangular Q on the {side} side"),
            });
        }
    }
    let m = match (&q_left, &q_right) {
        (Some(ql), Some(qr)) => {
            let m = ql.multiply(&qr.transpose()).expect("square");
            let predicted = x_left
                .multiply(&m)
                .and_then(|xm| xm.multiply(&x_right.transpose()))
                .expect("conformable");
            if predicted != delta {
                refutations.push(Refutation {
                    kind: RefutationKind::MClaim,
                    detail: format!("X_L M X_R^T = {predicted:?}, delta = {delta:?}"),
                });
            }
            Some(m)
        }
        _ => None,
    };
    Ok(BipartiteDeltaReport {
        delta,
        x_left,
        x_right,
        z_left,
        z_right,
        recurrence_left: rec_left,
        recurrence_right: rec_right,
        q_left,
        q_right,
        m,
        refutations,
    })
}

/// r(1-q)^(r-γ₀)/(r-γ₀), an upper bound on P[rank(A) ≤ γ₀] for an r×r
/// matrix with i.i.d. Ber(p) entries, q = min(p, 1-p).
pub fn rank_tail_bound(r: usize, q: f64, gamma0: usize) -> Result<f64, BipError> {
    if gamma0 == 0 || gamma0 >= r {
        return Err(BipError::Domain { r, gamma0 });
    }
    let gap = (r - gamma0) as f64;
    Ok(r as f64 * (1.0 - q).powf(gap) / gap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTailResult {
    pub r: usize,
    pub p: f64,
    pub gamma0: usize,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub sigma: f64,
    pub bound: f64,
}

impl RankTailResult {
    pub fn within_bound(&self) -> bool {
        self.frequency <= self.bound + 3.0 * self.sigma
    }
}

/// Frequency of rank(A) ≤ ⌊r/2⌋ over seeded random r×r matrices.
pub fn rank_tail_experiment(r: usize, p: f64, trials: u64, seed: u64) -> Result<RankTailResult, BipError> {
    let gamma0 = r / 2;
    let q = p.min(1.0 - p);
    let bound = rank_tail_bound(r, q, gamma0)?;
    assert!(r <= 128, "rank tail experiment supports r <= 128");
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t));
            let rows: Vec<u128> = (0..r)
                .map(|_| {
                    (0..r).fold(0u128, |acc, j| acc | ((rng.gen_bool(p) as u128) << j))
                })
                .collect();
            (mask_rank(&rows) <= gamma0) as u64
        })
        .sum();
    let n = trials as f64;
    let frequency = hits as f64 / n;
    Ok(RankTailResult {
        r,
        p,
        gamma0,
        trials,
        hits,
        frequency,
        sigma: (frequency * (1.0 - frequency) / n).sqrt(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_bip(a: usize, b: usize, p: f64, seed: u64) -> OrderedBipartiteGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        OrderedBipartiteGraph::from_biadjacency(random_biadjacency(a, b, p, &mut rng))
    }

    /// The ordered graph with the same vertex sides as `g` read from `h`.
    fn as_ordered(h: &Graph, left: &[Label], right: &[Label]) -> OrderedBipartiteGraph {
        let biadj = F2Matrix::from_fn(left.len(), right.len(), |i, j| {
            h.has_edge(left[i], right[j]).unwrap()
        });
        OrderedBipartiteGraph::new(left.to_vec(), right.to_vec(), biadj).unwrap()
    }

    #[test]
    fn single_edge_pivot_swaps_sides() {
        let g = OrderedBipartiteGraph::from_biadjacency(F2Matrix::from_rows(&[&[1]]));
        let h = bipartite_pivot(&g, 0, 1).unwrap();
        assert_eq!(h.left(), &[1]);
        assert_eq!(h.right(), &[0]);
        assert!(h.has_edge(1, 0));
        assert_eq!(bipartite_pivot(&h, 1, 0).unwrap(), g);
        assert_eq!(bipartite_pivot(&g, 1, 0), Err(BipError::WrongSide(1)));
        let e = OrderedBipartiteGraph::from_biadjacency(F2Matrix::zeros(1, 1));
        assert_eq!(bipartite_pivot(&e, 0, 1), Err(BipError::NotAnEdge(0, 1)));
    }

    #[test]
    fn pair_finding_examples() {
        let id = OrderedBipartiteGraph::from_biadjacency(F2Matrix::identity(4));
        let pairing = find_pivot_pairs(&id);
        assert_eq!(pairing.pairs, vec![(0, 4), (1, 5), (2, 6), (3, 7)]);
        assert!(pairing.all_certified());
        let zero = OrderedBipartiteGraph::from_biadjacency(F2Matrix::zeros(3, 5));
        let pairing = find_pivot_pairs(&zero);
        assert!(pairing.pairs.is_empty() && pairing.all_certified());
    }

    #[test]
    fn bipartite_delta_examples() {
        let g = random_bip(4, 4, 0.5, 3);
        let report = bipartite_delta_via_m(&g, &[0, 1], &[4, 5], &[]).unwrap();
        assert!(report.delta.is_zero() && report.is_certificate());

        // One pair (w, w'): delta = z^L (z^R)ᵀ with z read from g directly.
        let g = OrderedBipartiteGraph::from_biadjacency(F2Matrix::from_rows(&[
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 0],
        ]));
        // Left {0,1,2}, right {3,4,5}; pivot at 1~5 with U_L = {0,2}, U_R = {3,4}.
        let report = bipartite_delta_via_m(&g, &[0, 2], &[3, 4], &[(1, 5)]).unwrap();
        let zl = F2Vector::from_bits(&[1, 0]); // 0~5, 2!~5
        let zr = F2Vector::from_bits(&[0, 1]); // 1!~3, 1~4
        assert_eq!(report.z_left.column(0), zl);
        assert_eq!(report.z_right.column(0), zr);
        assert_eq!(report.delta, F2Matrix::from_rows(&[&[0, 1], &[0, 0]]));
        assert!(report.is_certificate());
    }

    #[test]
    fn rank_tail_examples() {
        let b = rank_tail_bound(40, 0.3, 20).unwrap();
        assert!((b - 2.0 * 0.7f64.powi(20)).abs() < 1e-15);
        assert_eq!(rank_tail_bound(10, 1.0, 4).unwrap(), 0.0);
        assert!(rank_tail_bound(10, 0.5, 0).is_err());
        assert!(rank_tail_bound(10, 0.5, 10).is_err());
        assert!(rank_tail_experiment(1, 0.5, 10, 1).is_err());
        let a = rank_tail_experiment(40, 0.5, 2000, 7).unwrap();
        assert_eq!(a, rank_tail_experiment(40, 0.5, 2000, 7).unwrap());
        assert!(a.within_bound());
    }

    #[test]
    fn perfect_matching_pairs_in_order() {
        let g = OrderedBipartiteGraph::from_biadjacency(F2Matrix::from_rows(&[
            &[0, 1, 0],
            &[1, 0, 0],
            &[0, 0, 1],
        ]));
        let pairing = find_pivot_pairs(&g);
        assert_eq!(pairing.pairs, vec![(0, 4), (1, 3), (2, 5)]);
    }

    proptest! {
        #[test]
        fn pivot_agrees_with_unordered_pivot(a in 1usize..7, b in 1usize..7, seed in any::<u64>()) {
            let g = random_bip(a, b, 0.5, seed);
            for i in 0..a {
                for j in 0..b {
                    if !g.biadjacency().get(i, j) {
                        continue;
                    }
                    let (u, v) = (g.left()[i], g.right()[j]);
                    let h = g.pivot(u, v).unwrap();
                    let plain = g.to_graph().pivot(u, v).unwrap();
                    let tri = g.to_graph().pivot_tripartite(u, v).unwrap();
                    prop_assert_eq!(&h, &as_ordered(&plain, h.left(), h.right()));
                    prop_assert_eq!(&h, &as_ordered(&tri, h.left(), h.right()));
                    prop_assert_eq!(h.pivot(v, u).unwrap(), g.clone());
                }
            }
        }

        #[test]
        fn pairing_achieves_rank(a in 1usize..14, b in 1usize..14, p in 0.05f64..0.95, seed in any::<u64>()) {
            let g = random_bip(a, b, p, seed);
            let pairing = find_pivot_pairs(&g);
            prop_assert_eq!(pairing.pairs.len(), g.biadjacency().rank());
            prop_assert!(pairing.all_certified());
            let (rows, cols) = invertible_submatrix(g.biadjacency());
            let sub = g.biadjacency().submatrix(&rows, &cols);
            prop_assert_eq!(sub.rank(), rows.len());
        }

        #[test]
        fn bipartite_delta_sum_and_m(seed in any::<u64>(), p in 0.1f64..0.9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = (rng.gen_range(2..=12), rng.gen_range(2..=12));
            let g = random_bip(a, b, p, seed ^ 1);
            let sl = rng.gen_range(1..a);
            let sr = rng.gen_range(1..b);
            let u_left: Vec<Label> = g.left()[..sl].to_vec();
            let u_right: Vec<Label> = g.right()[..sr].to_vec();
            let w = g.induced(&g.left()[sl..], &g.right()[sr..]).unwrap();
            let pairing = find_pivot_pairs(&w);
            let report = bipartite_delta_via_m(&g, &u_left, &u_right, &pairing.pairs).unwrap();
            prop_assert!(report.delta_sum_holds());
            let r = pairing.pairs.len();
            prop_assert!(report.recurrence_left.is_unit_upper_triangular());
            prop_assert_eq!(
                report.z_left.multiply(&report.recurrence_left).unwrap(),
                report.x_left.clone()
            );
            prop_assert_eq!(
                report.z_right.multiply(&report.recurrence_right).unwrap(),
                report.x_right.clone()
            );
            prop_assert!(report.is_certificate(), "{:?}", report.refutations);
            if let Some(m) = &report.m {
                prop_assert_eq!(m.rank(), r);
            }
        }
    }
}
