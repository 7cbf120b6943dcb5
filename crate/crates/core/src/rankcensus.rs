//! Number of labeled graphs on s vertices with adjacency matrix of GF(2)
//! rank a: exhaustive counts, the exact product formula, and the 2^(sa-2)
//! upper bound.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{pairs, BitGraph};

/// Largest s enumerated exhaustively (2^15 graphs).
pub const EXHAUSTIVE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("s = {s} exceeds the exhaustive cap of {cap}")]
    TooLarge { s: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCensus {
    pub s: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl RankCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, a: usize) -> u64 {
        self.counts.get(&a).copied().unwrap_or(0)
    }
}

/// Rank over GF(2) of a square matrix given by u128 row masks.
pub(crate) fn mask_rank(rows: &[u128]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for col in 0..128 {
        let bit = 1u128 << col;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Buckets all 2^C(s,2) graphs on [s] by adjacency rank.
pub fn census_exhaustive(s: usize) -> Result<RankCensus, CensusError> {
    if s > EXHAUSTIVE_CAP {
        return Err(CensusError::TooLarge {
            s,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let m = pairs(s).len();
    let mut counts: BTreeMap<usize, u64> = (0..=s).step_by(2).map(|a| (a, 0)).collect();
    for mask in 0u128..(1u128 << m) {
        let g = BitGraph::from_edge_mask(s, mask);
        let rows: Vec<u128> = (0..s).map(|i| g.row(i)).collect();
        *counts.entry(mask_rank(&rows)).or_insert(0) += 1;
    }
    Ok(RankCensus { s, counts })
}

/// ∏_{i=1}^{b} 2^(2i-2)/(2^(2i)-1) · ∏_{i=0}^{2b-1} (2^(s-i)-1) with b = a/2;
/// zero for odd a or a > s.
///
/// Factors are applied one b' at a time; each partial product is the count
/// for rank 2b', so every division is exact.
pub fn census_formula(s: usize, a: usize) -> BigUint {
    if a % 2 == 1 || a > s {
        return BigUint::zero();
    }
    let one = BigUint::one();
    let pow2 = |e: usize| &one << e;
    let mut acc = BigUint::one();
    for i in 1..=a / 2 {
        acc *= pow2(s - (2 * i - 2)) - &one;
        acc *= pow2(s - (2 * i - 1)) - &one;
        acc <<= 2 * i - 2;
        let den = pow2(2 * i) - &one;
        debug_assert!((&acc % &den).is_zero());
        acc /= den;
    }
    acc
}

/// 2^(sa-2) as a float.
pub fn census_bound(s: usize, a: usize) -> f64 {
    2f64.powi((s * a) as i32 - 2)
}

/// Exact test of census_formula(s,a) <= 2^(sa-2), i.e. 4·count <= 2^(sa).
pub fn formula_within_bound(s: usize, a: usize) -> bool {
    census_formula(s, a) << 2usize <= BigUint::one() << (s * a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub a: usize,
    pub exhaustive: Option<u64>,
    pub formula: String,
    pub bound: f64,
}

/// One row per a in 0..=s; the exhaustive column is filled for s <= 6.
pub fn census_table(s: usize) -> Vec<CensusRow> {
    let exhaustive = census_exhaustive(s).ok();
    (0..=s)
        .map(|a| CensusRow {
            a,
            exhaustive: exhaustive.as_ref().map(|c| c.count(a)),
            formula: census_formula(s, a).to_string(),
            bound: census_bound(s, a),
        })
        .collect()
}

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("a,exhaustive,formula,bound\n");
    for r in rows {
        let ex = r.exhaustive.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", r.a, ex, r.formula, r.bound));
    }
    out
}
