//! Vertex-minor and pivot-minor decisions by orbit exploration.
//!
//! Deleting u commutes with complementing at v != u, so every vertex-minor
//! is an induced subgraph of a locally equivalent graph. The decision
//! procedures therefore build the local-equivalence orbit once (breadth
//! first, so witnesses are shortest) and compare induced edge masks. The
//! same argument with (g×uv) - w = (g - w)×uv covers pivot-minors.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::bippivot::OrderedBipartiteGraph;
use crate::f2core::F2Matrix;
use crate::graph::{pairs, BitGraph, Graph, GraphError, Label};

/// Default orbit size limit.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {0} is not in the host graph")]
    UnknownVertex(Label),
    #[error("k = {k} needs {graphs} target graphs per subset, above the limit of 2^20")]
    TooManyTargets { k: usize, graphs: u128 },
    #[error("k = {k} exceeds the vertex count {n}")]
    KTooLarge { k: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

/// A sequence of local complementations (or pivots) and the graph it yields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub word: Vec<WitnessStep>,
    pub member: Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessStep {
    Complement(Label),
    Pivot(Label, Label),
}

/// The local-equivalence class of a labeled graph, as edge masks over the
/// seed's vertex order, in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub labels: Vec<Label>,
    pub members: Vec<u128>,
    /// Members first reached at each BFS depth.
    pub layer_sizes: Vec<usize>,
    pub truncated: bool,
    #[serde(skip)]
    parent: Vec<Option<(usize, usize)>>,
    #[serde(skip)]
    index: HashMap<u128, usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_graph(&self, idx: usize) -> Graph {
        Graph::from_edge_mask(self.labels.clone(), self.members[idx]).expect("labels fit")
    }

    /// The complementation word from the seed to member `idx`.
    pub fn word(&self, idx: usize) -> Vec<Label> {
        let mut word = Vec::new();
        let mut cur = idx;
        while let Some((p, v)) = self.parent[cur] {
            word.push(self.labels[v]);
            cur = p;
        }
        word.reverse();
        word
    }

    pub fn contains(&self, mask: u128) -> bool {
        self.index.contains_key(&mask)
    }
}

/// Breadth-first closure of `g` under g ↦ g*v, vertices tried in position
/// order. Stops adding members once `member_cap` is reached and flags the
/// orbit as truncated.
pub fn lc_orbit(g: &Graph, member_cap: usize) -> Result<Orbit, MinorError> {
    let seed = g.edge_mask()?;
    let n = g.n();
    let mut members = vec![seed];
    let mut parent = vec![None];
    let mut depth = vec![0usize];
    let mut index: HashMap<u128, usize> = HashMap::from([(seed, 0)]);
    let mut truncated = false;
    let mut idx = 0;
    'bfs: while idx < members.len() {
        let base = BitGraph::from_edge_mask(n, members[idx]);
        for v in 0..n {
            if base.row(v).count_ones() < 2 {
                continue;
            }
            let mut next = base.clone();
            next.local_complement(v);
            let mask = next.edge_mask();
            if index.contains_key(&mask) {
                continue;
            }
            if members.len() >= member_cap {
                truncated = true;
                break 'bfs;
            }
            index.insert(mask, members.len());
            members.push(mask);
            parent.push(Some((idx, v)));
            depth.push(depth[idx] + 1);
        }
        idx += 1;
    }
    let mut layer_sizes = vec![0; depth.last().map_or(0, |d| d + 1)];
    for d in depth {
        layer_sizes[d] += 1;
    }
    Ok(Orbit {
        labels: g.labels().to_vec(),
        members,
        layer_sizes,
        truncated,
        parent,
        index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorDecision {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub orbit_size: usize,
    pub truncated: bool,
}

/// Is `h` (a graph on a subset of V(g), in its own vertex order) a
/// vertex-minor of `g`? `Unknown` when the orbit was truncated before a
/// witness was found.
pub fn is_vertex_minor(g: &Graph, h: &Graph, member_cap: usize) -> Result<MinorDecision, MinorError> {
    let idx = positions(g, h.labels())?;
    let target = h.edge_mask()?;
    let orbit = lc_orbit(g, member_cap)?;
    let n = g.n();
    let found = orbit
        .members
        .iter()
        .position(|&m| BitGraph::from_edge_mask(n, m).induced_mask(&idx) == target);
    let verdict = match (found, orbit.truncated) {
        (Some(_), _) => Verdict::True,
        (None, false) => Verdict::False,
        (None, true) => Verdict::Unknown,
    };
    let witness = found.map(|i| Witness {
        word: orbit.word(i).into_iter().map(WitnessStep::Complement).collect(),
        member: orbit.member_graph(i),
    });
    Ok(MinorDecision {
        verdict,
        witness,
        orbit_size: orbit.len(),
        truncated: orbit.truncated,
    })
}

fn positions(g: &Graph, labels: &[Label]) -> Result<Vec<usize>, MinorError> {
    labels
        .iter()
        .map(|&v| g.index_of(v).map_err(|_| MinorError::UnknownVertex(v)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub subset: Vec<Label>,
    pub missing: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalityReport {
    pub k: usize,
    pub verdict: Verdict,
    pub subsets_checked: usize,
    pub orbit_size: usize,
    pub truncated: bool,
    pub counterexample: Option<Counterexample>,
}

/// All k-subsets of 0..n in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// How many of the 2^C(k,2) graphs on one k-subset are realized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetCoverage {
    pub subset: Vec<Label>,
    pub realized: usize,
    pub targets: usize,
    /// Smallest unrealized edge mask, if any.
    pub first_missing: Option<u128>,
}

/// Per-subset coverage over every k-subset, in lexicographic order. Unlike
/// [`is_k_vm_universal`] this never stops early.
pub fn subset_coverage(g: &Graph, k: usize, member_cap: usize) -> Result<(Orbit, Vec<SubsetCoverage>), MinorError> {
    let n = g.n();
    if k > n {
        return Err(MinorError::KTooLarge { k, n });
    }
    let e = pairs(k).len();
    if e > 20 {
        return Err(MinorError::TooManyTargets {
            k,
            graphs: 1u128 << e,
        });
    }
    let orbit = lc_orbit(g, member_cap)?;
    let graphs: Vec<BitGraph> = orbit
        .members
        .iter()
        .map(|&m| BitGraph::from_edge_mask(n, m))
        .collect();
    let targets = 1usize << e;
    let coverage = k_subsets(n, k)
        .into_iter()
        .map(|subset| {
            let mut seen = vec![false; targets];
            for bg in &graphs {
                seen[bg.induced_mask(&subset) as usize] = true;
            }
            SubsetCoverage {
                subset: subset.iter().map(|&i| g.labels()[i]).collect(),
                realized: seen.iter().filter(|&&s| s).count(),
                targets,
                first_missing: seen.iter().position(|&s| !s).map(|m| m as u128),
            }
        })
        .collect();
    Ok((orbit, coverage))
}

/// Whether every graph on every k-subset of V(g) is a vertex-minor. On
/// failure reports the first subset (lexicographic) and its smallest
/// unrealized edge mask.
pub fn is_k_vm_universal(g: &Graph, k: usize, member_cap: usize) -> Result<UniversalityReport, MinorError> {
    let n = g.n();
    if k > n {
        return Err(MinorError::KTooLarge { k, n });
    }
    let e = pairs(k).len();
    if e > 20 {
        return Err(MinorError::TooManyTargets {
            k,
            graphs: 1u128 << e,
        });
    }
    let orbit = lc_orbit(g, member_cap)?;
    let graphs: Vec<BitGraph> = orbit
        .members
        .iter()
        .map(|&m| BitGraph::from_edge_mask(n, m))
        .collect();
    let targets = 1usize << e;
    let mut subsets_checked = 0;
    let mut counterexample = None;
    for subset in k_subsets(n, k) {
        subsets_checked += 1;
        let mut seen = vec![false; targets];
        let mut hit = 0;
        for bg in &graphs {
            let m = bg.induced_mask(&subset) as usize;
            if !seen[m] {
                seen[m] = true;
                hit += 1;
                if hit == targets {
                    break;
                }
            }
        }
        if hit < targets {
            let missing = seen.iter().position(|&s| !s).expect("some graph missing");
            let labels: Vec<Label> = subset.iter().map(|&i| g.labels()[i]).collect();
            counterexample = Some(Counterexample {
                missing: Graph::from_edge_mask(labels.clone(), missing as u128)?,
                subset: labels,
            });
            break;
        }
    }
    let verdict = match (&counterexample, orbit.truncated) {
        (None, _) => Verdict::True,
        (Some(_), false) => Verdict::False,
        (Some(_), true) => Verdict::Unknown,
    };
    Ok(UniversalityReport {
        k,
        verdict,
        subsets_checked,
        orbit_size: orbit.len(),
        truncated: orbit.truncated,
        counterexample,
    })
}

/// Pivot-equivalence class of an ordered bipartite graph. States are keyed
/// by the edge mask over the seed's vertex order (left then right) and a
/// side word with bit i set when vertex i is on the right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotOrbit {
    pub labels: Vec<Label>,
    pub members: Vec<(u128, u32)>,
    pub truncated: bool,
    #[serde(skip)]
    parent: Vec<Option<(usize, usize, usize)>>,
}

impl PivotOrbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, idx: usize) -> OrderedBipartiteGraph {
        let (mask, sides) = self.members[idx];
        let n = self.labels.len();
        let bg = BitGraph::from_edge_mask(n, mask);
        let left: Vec<usize> = (0..n).filter(|&i| sides >> i & 1 == 0).collect();
        let right: Vec<usize> = (0..n).filter(|&i| sides >> i & 1 == 1).collect();
        let biadj = F2Matrix::from_fn(left.len(), right.len(), |a, b| bg.has_edge(left[a], right[b]));
        OrderedBipartiteGraph::new(
            left.iter().map(|&i| self.labels[i]).collect(),
            right.iter().map(|&i| self.labels[i]).collect(),
            biadj,
        )
        .expect("distinct labels")
    }

    pub fn word(&self, idx: usize) -> Vec<(Label, Label)> {
        let mut word = Vec::new();
        let mut cur = idx;
        while let Some((p, u, v)) = self.parent[cur] {
            word.push((self.labels[u], self.labels[v]));
            cur = p;
        }
        word.reverse();
        word
    }
}

/// Breadth-first closure under pivots at current edges (left endpoint
/// first), with side swaps tracked.
pub fn pivot_orbit(g: &OrderedBipartiteGraph, member_cap: usize) -> Result<PivotOrbit, MinorError> {
    let graph = g.to_graph();
    let n = graph.n();
    let seed_mask = graph.edge_mask()?;
    let seed_sides: u32 = ((1u32 << g.right().len()) - 1) << g.left().len();
    let seed = (seed_mask, seed_sides);
    let mut members = vec![seed];
    let mut parent = vec![None];
    let mut index: HashMap<(u128, u32), usize> = HashMap::from([(seed, 0)]);
    let mut truncated = false;
    let mut next_idx = 0;
    'bfs: while next_idx < members.len() {
        let (mask, sides) = members[next_idx];
        let base = BitGraph::from_edge_mask(n, mask);
        for u in (0..n).filter(|&u| sides >> u & 1 == 0) {
            let mut nb = base.row(u);
            while nb != 0 {
                let v = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                let mut next = base.clone();
                next.pivot(u, v);
                let state = (next.edge_mask(), sides ^ (1 << u) ^ (1 << v));
                if index.contains_key(&state) {
                    continue;
                }
                if members.len() >= member_cap {
                    truncated = true;
                    break 'bfs;
                }
                index.insert(state, members.len());
                members.push(state);
                parent.push(Some((next_idx, u, v)));
            }
        }
        next_idx += 1;
    }
    Ok(PivotOrbit {
        labels: graph.labels().to_vec(),
        members,
        truncated,
        parent,
    })
}

/// Is the ordered bipartite `h` a pivot-minor of `g`: some pivot-equivalent
/// graph has h's left vertices on the left, its right vertices on the
/// right, and induces h's edges.
pub fn is_pivot_minor(
    g: &OrderedBipartiteGraph,
    h: &OrderedBipartiteGraph,
    member_cap: usize,
) -> Result<MinorDecision, MinorError> {
    let graph = g.to_graph();
    let h_graph = h.to_graph();
    let idx = positions(&graph, h_graph.labels())?;
    let target = h_graph.edge_mask()?;
    let want_right: Vec<bool> = (0..idx.len()).map(|a| a >= h.left().len()).collect();
    let orbit = pivot_orbit(g, member_cap)?;
    let n = graph.n();
    let found = orbit.members.iter().position(|&(mask, sides)| {
        idx.iter()
            .zip(&want_right)
            .all(|(&i, &r)| (sides >> i & 1 == 1) == r)
            && BitGraph::from_edge_mask(n, mask).induced_mask(&idx) == target
    });
    let verdict = match (found, orbit.truncated) {
        (Some(_), _) => Verdict::True,
        (None, false) => Verdict::False,
        (None, true) => Verdict::Unknown,
    };
    let witness = found.map(|i| {
        let member = orbit.member(i);
        Witness {
            word: orbit
                .word(i)
                .into_iter()
                .map(|(u, v)| WitnessStep::Pivot(u, v))
                .collect(),
            member: member.to_graph(),
        }
    });
    Ok(MinorDecision {
        verdict,
        witness,
        orbit_size: orbit.len(),
        truncated: orbit.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path3() -> Graph {
        // a=0, b=1, c=2
        Graph::from_edges(3, &[(0, 1), (1, 2)])
    }

    fn random_graph(n: usize, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn orbit_examples() {
        let empty = lc_orbit(&Graph::empty(4), DEFAULT_CAP).unwrap();
        assert_eq!(empty.members, vec![0]);
        let orbit = lc_orbit(&path3(), DEFAULT_CAP).unwrap();
        assert_eq!(orbit.len(), 4);
        assert!(!orbit.truncated);
        let expected = [
            Graph::from_edges(3, &[(0, 1), (1, 2)]),
            Graph::from_edges(3, &[(0, 2), (2, 1)]),
            Graph::from_edges(3, &[(1, 0), (0, 2)]),
            Graph::complete(3),
        ];
        for g in expected {
            assert!(orbit.contains(g.edge_mask().unwrap()));
        }
        assert_eq!(orbit.layer_sizes, vec![1, 1, 2]);
        let truncated = lc_orbit(&path3(), 2).unwrap();
        assert!(truncated.truncated);
        assert_eq!(truncated.len(), 2);
    }

    #[test]
    fn witnesses_replay() {
        let g = random_graph(7, 4);
        let orbit = lc_orbit(&g, DEFAULT_CAP).unwrap();
        for idx in 0..orbit.len() {
            let mut h = g.clone();
            for v in orbit.word(idx) {
                h = h.local_complement(v).unwrap();
            }
            assert_eq!(h, orbit.member_graph(idx));
        }
    }

    #[test]
    fn vertex_minor_examples() {
        let g = path3();
        let same = g.induced(&[0, 1]).unwrap();
        let d = is_vertex_minor(&g, &same, DEFAULT_CAP).unwrap();
        assert_eq!(d.verdict, Verdict::True);
        assert!(d.witness.unwrap().word.is_empty());

        let ac = Graph::from_labeled_edges(vec![0, 2], &[(0, 2)]).unwrap();
        let d = is_vertex_minor(&g, &ac, DEFAULT_CAP).unwrap();
        assert_eq!(d.verdict, Verdict::True);
        assert_eq!(d.witness.unwrap().word, vec![WitnessStep::Complement(1)]);

        let ab = Graph::from_labeled_edges(vec![0, 1], &[(0, 1)]).unwrap();
        let d = is_vertex_minor(&Graph::empty(3), &ab, DEFAULT_CAP).unwrap();
        assert_eq!(d.verdict, Verdict::False);
        assert!(d.witness.is_none());

        let missing = Graph::from_labeled_edges(vec![0, 9], &[(0, 9)]).unwrap();
        assert_eq!(
            is_vertex_minor(&g, &missing, DEFAULT_CAP),
            Err(MinorError::UnknownVertex(9))
        );
    }

    #[test]
    fn universality_examples() {
        let r = is_k_vm_universal(&path3(), 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::True);
        assert_eq!(r.subsets_checked, 3);

        let r = is_k_vm_universal(&Graph::empty(3), 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.verdict, Verdict::False);
        let c = r.counterexample.unwrap();
        assert_eq!(c.subset, vec![0, 1]);
        assert_eq!(c.missing.edges(), vec![(0, 1)]);

        for seed in 0..5 {
            let g = random_graph(6, seed);
            assert_eq!(is_k_vm_universal(&g, 1, DEFAULT_CAP).unwrap().verdict, Verdict::True);
        }
    }

    #[test]
    fn coverage_agrees_with_universality() {
        for seed in 0..10 {
            let g = random_graph(5, 70 + seed);
            let report = is_k_vm_universal(&g, 3, DEFAULT_CAP).unwrap();
            let (_, cov) = subset_coverage(&g, 3, DEFAULT_CAP).unwrap();
            assert_eq!(cov.len(), 10);
            let first_bad = cov.iter().find(|c| c.realized < c.targets);
            assert_eq!(report.verdict == Verdict::True, first_bad.is_none());
            if let (Some(bad), Some(ce)) = (first_bad, &report.counterexample) {
                assert_eq!(bad.subset, ce.subset);
                assert_eq!(bad.first_missing, Some(ce.missing.edge_mask().unwrap()));
            }
        }
    }

    #[test]
    fn universality_agrees_with_single_decisions() {
        for seed in 0..20 {
            let g = random_graph(5, 50 + seed);
            let report = is_k_vm_universal(&g, 2, DEFAULT_CAP).unwrap();
            let mut all = true;
            for subset in k_subsets(5, 2) {
                let labels: Vec<Label> = subset.iter().map(|&i| i as Label).collect();
                for mask in 0..2u128 {
                    let h = Graph::from_edge_mask(labels.clone(), mask).unwrap();
                    all &= is_vertex_minor(&g, &h, DEFAULT_CAP).unwrap().verdict == Verdict::True;
                }
            }
            assert_eq!(report.verdict == Verdict::True, all);
        }
    }

    #[test]
    fn truncation_is_monotone() {
        for seed in 0..10 {
            let g = random_graph(6, 90 + seed);
            let h = Graph::from_labeled_edges(vec![0, 3, 5], &[(0, 3), (3, 5)]).unwrap();
            let full = is_vertex_minor(&g, &h, DEFAULT_CAP).unwrap().verdict;
            for cap in [1, 2, 4, 8, 16, 64] {
                let v = is_vertex_minor(&g, &h, cap).unwrap().verdict;
                match v {
                    Verdict::True => assert_eq!(full, Verdict::True),
                    Verdict::False => assert_eq!(full, Verdict::False),
                    Verdict::Unknown => {}
                }
            }
        }
    }

    #[test]
    fn deletion_commutes_with_complementation_and_pivots() {
        for n in 2..=6usize {
            let e = pairs(n).len();
            for mask in 0u128..(1 << e) {
                let g = BitGraph::from_edge_mask(n, mask);
                for w in 0..n {
                    let keep: Vec<usize> = (0..n).filter(|&x| x != w).collect();
                    let deleted = BitGraph::from_edge_mask(n - 1, g.induced_mask(&keep));
                    for (pos, &v) in keep.iter().enumerate() {
                        let mut a = g.clone();
                        a.local_complement(v);
                        let mut b = deleted.clone();
                        b.local_complement(pos);
                        assert_eq!(a.induced_mask(&keep), b.edge_mask());
                        for (pos2, &u) in keep.iter().enumerate() {
                            if u < v && g.has_edge(u, v) {
                                let mut a = g.clone();
                                a.pivot(u, v);
                                let mut b = deleted.clone();
                                b.pivot(pos2, pos);
                                assert_eq!(a.induced_mask(&keep), b.edge_mask());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pivot_minor_examples() {
        let single = OrderedBipartiteGraph::from_biadjacency(F2Matrix::identity(1));
        let same = single.clone();
        assert_eq!(is_pivot_minor(&single, &same, DEFAULT_CAP).unwrap().verdict, Verdict::True);
        let swapped = single.pivot(0, 1).unwrap();
        let d = is_pivot_minor(&single, &swapped, DEFAULT_CAP).unwrap();
        assert_eq!(d.verdict, Verdict::True);
        assert_eq!(d.witness.unwrap().word, vec![WitnessStep::Pivot(0, 1)]);

        let empty = OrderedBipartiteGraph::from_biadjacency(F2Matrix::zeros(2, 2));
        let edge = OrderedBipartiteGraph::new(vec![0], vec![2], F2Matrix::identity(1)).unwrap();
        assert_eq!(is_pivot_minor(&empty, &edge, DEFAULT_CAP).unwrap().verdict, Verdict::False);
        assert_eq!(pivot_orbit(&empty, DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn perfect_matching_orbit_only_swaps_sides() {
        for m in 1..=4usize {
            let g = OrderedBipartiteGraph::from_biadjacency(F2Matrix::identity(m));
            let orbit = pivot_orbit(&g, DEFAULT_CAP).unwrap();
            assert_eq!(orbit.len(), 1 << m);
            let seed_mask = orbit.members[0].0;
            assert!(orbit.members.iter().all(|&(mask, _)| mask == seed_mask));
        }
    }

    #[test]
    fn pivot_orbit_witnesses_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let biadj = F2Matrix::from_fn(3, 4, |_, _| rng.gen_bool(0.5));
        let g = OrderedBipartiteGraph::from_biadjacency(biadj);
        let orbit = pivot_orbit(&g, DEFAULT_CAP).unwrap();
        for idx in 0..orbit.len() {
            let mut h = g.clone();
            for (u, v) in orbit.word(idx) {
                h = h.pivot(u, v).unwrap();
            }
            let member = orbit.member(idx);
            let mut hl = h.left().to_vec();
            hl.sort_unstable();
            assert_eq!(hl, member.left());
            assert_eq!(h.to_graph().edges().len(), member.to_graph().edges().len());
            for &a in member.left() {
                for &b in member.right() {
                    assert_eq!(h.has_edge(a, b), member.has_edge(a, b));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn orbits_are_closed(n in 1usize..=7, seed in any::<u64>()) {
            let g = random_graph(n, seed);
            let orbit = lc_orbit(&g, DEFAULT_CAP).unwrap();
            prop_assert!(!orbit.truncated);
            prop_assert!(orbit.contains(g.edge_mask().unwrap()));
            for &m in &orbit.members {
                for v in 0..n {
                    let mut b = BitGraph::from_edge_mask(n, m);
                    b.local_complement(v);
                    prop_assert!(orbit.contains(b.edge_mask()));
                    b.local_complement(v);
                    prop_assert_eq!(b.edge_mask(), m);
                }
            }
        }
    }
}
