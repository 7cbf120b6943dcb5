//! Laws of random graphs on a small labeled vertex set U, their Fourier
//! transforms over F2^C(s,2), and the distance of G_Δ to uniform.
//!
//! Outcomes are edge bitmasks in the lexicographic pair order of
//! [`crate::graph::pair_index`]. The character at F is (-1)^|H ∩ F|, so
//! μ̂(∅) = 1 for every probability law and ½ Σ_{F≠∅} |μ̂(F)| bounds the
//! total variation distance to the uniform law.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::f2core::F2Matrix;
use crate::graph::{pair_index, pairs, Graph};
use crate::lcdelta::{build_m_from_w_graph, LcError, LcInstance};
use crate::numeric::{derive_seed, NeumaierSum};
use crate::quadpoly::{sign_counts, weighted_sum, QuadPoly, QuadPolyError};
use crate::rankcensus::census_formula;

/// Largest |U| for which laws are tabulated (2^21 outcomes).
pub const MAX_U: usize = 7;
/// Largest s·r enumerated exactly.
pub const EXACT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error("|U| = {0} exceeds the tabulation limit of {MAX_U}")]
    TooManyVertices(usize),
    #[error("s·r = {sr} exceeds the exact enumeration cap of {cap}")]
    CapExceeded { sr: usize, cap: usize },
    #[error("expected {expected} outcomes, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("s + r = {0} exceeds the 128-vertex sampler limit")]
    SamplerTooLarge(usize),
    #[error(transparent)]
    Lc(#[from] LcError),
    #[error(transparent)]
    QuadPoly(#[from] QuadPolyError),
}

fn edge_count(s: usize) -> usize {
    s * s.saturating_sub(1) / 2
}

fn check_s(s: usize) -> Result<(), FourierError> {
    if s > MAX_U {
        Err(FourierError::TooManyVertices(s))
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<(), FourierError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(FourierError::BadProbability(p))
    }
}

/// A probability law on graphs over U, indexed by edge bitmask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDist {
    u_size: usize,
    probs: Vec<f64>,
}

impl GraphDist {
    pub fn new(u_size: usize, probs: Vec<f64>) -> Result<Self, FourierError> {
        check_s(u_size)?;
        let expected = 1usize << edge_count(u_size);
        if probs.len() != expected {
            return Err(FourierError::SizeMismatch {
                expected,
                got: probs.len(),
            });
        }
        if let Some(bad) = probs.iter().find(|&&x| !(x >= 0.0)) {
            return Err(FourierError::InvalidDistribution(format!(
                "negative or NaN entry {bad}"
            )));
        }
        let total: NeumaierSum = probs.iter().copied().collect();
        if (total.total() - 1.0).abs() > 1e-12 {
            return Err(FourierError::InvalidDistribution(format!(
                "entries sum to {}",
                total.total()
            )));
        }
        Ok(Self { u_size, probs })
    }

    pub fn uniform(u_size: usize) -> Result<Self, FourierError> {
        check_s(u_size)?;
        let len = 1usize << edge_count(u_size);
        Ok(Self {
            u_size,
            probs: vec![1.0 / len as f64; len],
        })
    }

    pub fn point_mass(u_size: usize, mask: usize) -> Result<Self, FourierError> {
        check_s(u_size)?;
        let mut probs = vec![0.0; 1 << edge_count(u_size)];
        probs[mask] = 1.0;
        Ok(Self { u_size, probs })
    }

    /// G(U, p): every edge present independently with probability p.
    pub fn gnp(u_size: usize, p: f64) -> Result<Self, FourierError> {
        check_s(u_size)?;
        check_p(p)?;
        let e = edge_count(u_size);
        let probs = (0usize..1 << e)
            .map(|h| {
                let w = h.count_ones() as i32;
                p.powi(w) * (1.0 - p).powi(e as i32 - w)
            })
            .collect();
        Ok(Self { u_size, probs })
    }

    /// Empirical law from outcome counts.
    pub fn from_counts(u_size: usize, counts: &[u64]) -> Result<Self, FourierError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(FourierError::InvalidDistribution("no samples".into()));
        }
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(u_size, probs)
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, mask: usize) -> f64 {
        self.probs[mask]
    }

    /// P(u_i u_j is an edge).
    pub fn edge_marginal(&self, i: usize, j: usize) -> f64 {
        let bit = 1usize << pair_index(self.u_size, i, j);
        self.probs
            .iter()
            .enumerate()
            .filter(|(h, _)| h & bit != 0)
            .map(|(_, &x)| x)
            .collect::<NeumaierSum>()
            .total()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSpectrum {
    u_size: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }
}

/// In-place unnormalized Walsh–Hadamard transform; len must be a power of 2.
pub fn fwht(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

pub fn fourier_transform(d: &GraphDist) -> FourierSpectrum {
    let mut coeffs = d.probs.clone();
    fwht(&mut coeffs);
    FourierSpectrum {
        u_size: d.u_size,
        coeffs,
    }
}

/// f(H) = 2^-N Σ_F f̂(F) (-1)^|H ∩ F|. Returns raw values; tiny negative
/// rounding residue is not clipped.
pub fn inverse_fourier(spec: &FourierSpectrum) -> Vec<f64> {
    let mut v = spec.coeffs.clone();
    fwht(&mut v);
    let scale = 1.0 / v.len() as f64;
    v.iter_mut().for_each(|x| *x *= scale);
    v
}

/// ½ Σ_H |d(H) - 2^-N|.
pub fn tv_to_uniform(d: &GraphDist) -> f64 {
    let u = 1.0 / d.probs.len() as f64;
    0.5 * d
        .probs
        .iter()
        .map(|&x| (x - u).abs())
        .collect::<NeumaierSum>()
        .total()
}

/// ½ Σ_{F≠∅} |μ̂(F)|.
pub fn fourier_tv_bound(d: &GraphDist) -> f64 {
    spectrum_tv_bound(&fourier_transform(d))
}

pub fn spectrum_tv_bound(spec: &FourierSpectrum) -> f64 {
    0.5 * spec.coeffs[1..]
        .iter()
        .map(|x| x.abs())
        .collect::<NeumaierSum>()
        .total()
}

/// Exact law of G_Δ = OffDiag(X M Xᵀ) over X ∈ F2^{s×r}, stored as integer
/// counts per (outcome, |X|) so that it can be evaluated at any p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaLaw {
    s: usize,
    r: usize,
    counts: Vec<Vec<i64>>,
}

impl DeltaLaw {
    /// Enumerates the rows v_1..v_s of X; the (a,b) entry of X M Xᵀ is
    /// v_a · (M v_b), read from a table of M v over all v.
    pub fn enumerate(s: usize, m: &F2Matrix) -> Result<Self, FourierError> {
        check_s(s)?;
        let r = m.rows();
        if s * r > EXACT_CAP {
            return Err(FourierError::CapExceeded {
                sr: s * r,
                cap: EXACT_CAP,
            });
        }
        let m_rows: Vec<u32> = (0..r).map(|i| m.row(i).to_mask() as u32).collect();
        let mv: Vec<u32> = (0u32..1 << r)
            .map(|v| {
                (0..r).fold(0u32, |acc, i| {
                    acc | ((((m_rows[i] & v).count_ones() & 1) as u32) << i)
                })
            })
            .collect();
        let outcomes = 1usize << edge_count(s);
        let mut counts = vec![vec![0i64; s * r + 1]; outcomes];
        let mut rows = vec![0u32; s];
        Self::recurse(s, r, &mv, &mut rows, 0, 0, 0, &mut counts);
        Ok(Self { s, r, counts })
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        s: usize,
        r: usize,
        mv: &[u32],
        rows: &mut [u32],
        b: usize,
        outcome: usize,
        weight: usize,
        counts: &mut [Vec<i64>],
    ) {
        if b == s {
            counts[outcome][weight] += 1;
            return;
        }
        for v in 0u32..1 << r {
            let mvb = mv[v as usize];
            let mut out = outcome;
            for a in 0..b {
                if (rows[a] & mvb).count_ones() & 1 == 1 {
                    out |= 1 << pair_index(s, a, b);
                }
            }
            rows[b] = v;
            Self::recurse(s, r, mv, rows, b + 1, out, weight + v.count_ones() as usize, counts);
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn distribution(&self, p: f64) -> Result<GraphDist, FourierError> {
        check_p(p)?;
        let probs: Vec<f64> = self.counts.iter().map(|c| weighted_sum(c, p)).collect();
        // Compensated sums of nonnegative terms cannot go below zero.
        GraphDist::new(self.s, probs.into_iter().map(|x| x.max(0.0)).collect())
    }
}

/// P(G_Δ = H | G[W] = conditioned_gw) for H over U. `conditioned_gw` must
/// carry the labels of W in complementation order.
pub fn delta_distribution_exact(
    inst: &LcInstance,
    conditioned_gw: &Graph,
    p: f64,
) -> Result<GraphDist, FourierError> {
    let m = conditioned_m(inst, conditioned_gw)?;
    DeltaLaw::enumerate(inst.s(), &m)?.distribution(p)
}

fn conditioned_m(inst: &LcInstance, gw: &Graph) -> Result<F2Matrix, FourierError> {
    // Validates the labels.
    inst.with_w_graph(gw)?;
    Ok(build_m_from_w_graph(gw))
}

/// Law of G_Δ when W is an independent set (M = I): the XOR of r i.i.d.
/// copies of OffDiag(x xᵀ), x ~ Ber(p)^s, computed through Fourier powers.
pub fn independent_w_delta_distribution(
    s: usize,
    r: usize,
    p: f64,
) -> Result<GraphDist, FourierError> {
    check_s(s)?;
    check_p(p)?;
    let outcomes = 1usize << edge_count(s);
    let mut column = vec![0.0; outcomes];
    for x in 0u32..1 << s {
        let mut h = 0usize;
        for (k, (a, b)) in pairs(s).into_iter().enumerate() {
            if (x >> a) & (x >> b) & 1 == 1 {
                h |= 1 << k;
            }
        }
        let w = x.count_ones() as i32;
        column[h] += p.powi(w) * (1.0 - p).powi(s as i32 - w);
    }
    fwht(&mut column);
    column.iter_mut().for_each(|c| *c = c.powi(r as i32));
    let spec = FourierSpectrum {
        u_size: s,
        coeffs: column,
    };
    let probs = inverse_fourier(&spec).into_iter().map(|x| x.max(0.0)).collect();
    renormalized(s, probs)
}

fn renormalized(s: usize, probs: Vec<f64>) -> Result<GraphDist, FourierError> {
    let total: f64 = probs.iter().copied().collect::<NeumaierSum>().total();
    GraphDist::new(s, probs.into_iter().map(|x| x / total).collect())
}

/// P(u_1u_2 ∈ G_Δ) for independent W: the parity of r Ber(p²) events.
pub fn delta_edge_marginal(p: f64, r: usize) -> f64 {
    (1.0 - (1.0 - 2.0 * p * p).powi(r as i32)) / 2.0
}

/// P(u_1u_2 ∈ G'[U]) for independent W, G[U] ~ G(U,p) independent of G_Δ.
pub fn final_edge_marginal(p: f64, r: usize) -> f64 {
    (1.0 - (1.0 - 2.0 * p) * (1.0 - 2.0 * p * p).powi(r as i32)) / 2.0
}

/// Law of G[U] ⊕ G_Δ with G[U] ~ G(U,p) independent: each coefficient of the
/// delta spectrum is multiplied by (1-2p)^|F|. At p = 1/2 the result is
/// exactly uniform.
pub fn coupled_final_distribution(d_delta: &GraphDist, p: f64) -> Result<GraphDist, FourierError> {
    check_p(p)?;
    if p == 0.5 {
        return GraphDist::uniform(d_delta.u_size);
    }
    let mut spec = fourier_transform(d_delta);
    let bias = 1.0 - 2.0 * p;
    for (f, c) in spec.coeffs.iter_mut().enumerate() {
        *c *= bias.powi(f.count_ones() as i32);
    }
    let probs = inverse_fourier(&spec).into_iter().map(|x| x.max(0.0)).collect();
    renormalized(d_delta.u_size, probs)
}

/// (1-2q²)^(r·rank(F)/6 - 1).
pub fn claim34_bound(f: &Graph, r: usize, q: f64) -> f64 {
    claim34_bound_for_rank(f.adjacency().rank(), r, q)
}

pub fn claim34_bound_for_rank(rank: usize, r: usize, q: f64) -> f64 {
    (1.0 - 2.0 * q * q).powf((r * rank) as f64 / 6.0 - 1.0)
}

/// (1-2q²)^⌊r·rank(F)/6⌋, the sign-expectation bound before the exponent is relaxed.
pub fn claim34_bound_floor_for_rank(rank: usize, r: usize, q: f64) -> f64 {
    (1.0 - 2.0 * q * q).powi(((r * rank) / 6) as i32)
}

/// ½ Σ_{a≥1} #{F : rank F = a} · (1-2q²)^(ra/6 - 1).
pub fn census_chain_bound(s: usize, r: usize, q: f64) -> f64 {
    0.5 * (1..=s)
        .map(|a| {
            let count: f64 = census_formula(s, a).to_string().parse().expect("integer");
            count * claim34_bound_for_rank(a, r, q)
        })
        .collect::<NeumaierSum>()
        .total()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lemma31 {
    Bound { value: f64 },
    HypothesisViolation { s: usize, limit: f64 },
}

impl Lemma31 {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Lemma31::Bound { value } => Some(value),
            Lemma31::HypothesisViolation { .. } => None,
        }
    }
}

/// 2^(-q²r/6), claimed only when s ≤ q²r/6.
pub fn lemma31_bound(s: usize, r: usize, q: f64) -> Lemma31 {
    let limit = q * q * r as f64 / 6.0;
    if s as f64 <= limit * (1.0 + 1e-12) {
        Lemma31::Bound {
            value: 2f64.powf(-limit),
        }
    } else {
        Lemma31::HypothesisViolation { s, limit }
    }
}

/// The quadratic f(X) = Σ_{ab ∈ F} v_a M v_bᵀ over the s·r variables X_{ai}
/// (variable a·r + i), built monomial by monomial.
pub fn claim34_polynomial(f: &F2Matrix, m: &F2Matrix) -> QuadPoly {
    let (s, r) = (f.rows(), m.rows());
    let mut poly = QuadPoly::zero(s * r);
    for (a, b) in pairs(s) {
        if !f.get(a, b) {
            continue;
        }
        for i in 0..r {
            for j in m.row(i).iter_ones() {
                poly.toggle_pair(a * r + i, b * r + j);
            }
        }
    }
    poly
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorCheck {
    pub coef2_matches: bool,
    pub expectation_poly: f64,
    pub expectation_fourier: f64,
    pub passed: bool,
}

/// Compares Coef₂(f) with A_F ⊗ M and E[(-1)^f] with μ̂(F).
pub fn claim34_tensor_check_m(
    f: &F2Matrix,
    m: &F2Matrix,
    mu_hat_f: f64,
    p: f64,
) -> Result<TensorCheck, FourierError> {
    let poly = claim34_polynomial(f, m);
    let coef2_matches = poly.coef2() == &f.tensor(m);
    let expectation_poly = sign_counts(&poly)?.expectation(p);
    let passed = coef2_matches && (expectation_poly - mu_hat_f).abs() <= 1e-12;
    Ok(TensorCheck {
        coef2_matches,
        expectation_poly,
        expectation_fourier: mu_hat_f,
        passed,
    })
}

pub fn claim34_tensor_check(
    inst: &LcInstance,
    conditioned_gw: &Graph,
    f: &Graph,
    p: f64,
) -> Result<TensorCheck, FourierError> {
    let m = conditioned_m(inst, conditioned_gw)?;
    let spec = fourier_transform(&DeltaLaw::enumerate(inst.s(), &m)?.distribution(p)?);
    let mask = f.edge_mask().map_err(LcError::from)? as usize;
    claim34_tensor_check_m(f.adjacency(), &m, spec.coeff(mask), p)
}

/// Every check available for one M at one p.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierAudit {
    pub p: f64,
    pub tv_exact: f64,
    pub fourier_bound: f64,
    pub chain_bound: f64,
    /// max over F != ∅ of |μ̂(F)| / (1-2q²)^(r·rank F/6 - 1).
    pub max_claim34_ratio: f64,
    /// The same against (1-2q²)^⌊r·rank F/6⌋.
    pub max_claim34_floor_ratio: f64,
    pub max_tensor_error: f64,
    pub tensor_ok: bool,
    pub mu_empty_ok: bool,
}

impl FourierAudit {
    pub fn tv_le_fourier(&self) -> bool {
        self.tv_exact <= self.fourier_bound + 1e-12
    }

    pub fn fourier_le_chain(&self) -> bool {
        self.fourier_bound <= self.chain_bound + 1e-12
    }

    pub fn claim34_ok(&self) -> bool {
        self.max_claim34_ratio <= 1.0 + 1e-9
    }

    pub fn claim34_floor_ok(&self) -> bool {
        self.max_claim34_floor_ratio <= 1.0 + 1e-9
    }

    pub fn all_ok(&self) -> bool {
        self.tv_le_fourier()
            && self.fourier_le_chain()
            && self.claim34_ok()
            && self.claim34_floor_ok()
            && self.tensor_ok
            && self.mu_empty_ok
    }
}

fn bound_ratio(c: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        c.abs() / bound
    } else if c.abs() > 1e-12 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Exact law of G_Δ for the given M, checked at each p: TV against the
/// Fourier bound, every coefficient against both forms of the rank bound,
/// the census chain, and the tensor identity with its expectation.
///
/// One enumeration of X serves all p; the tensor-side sign counts are
/// computed once per F.
pub fn fourier_audit(s: usize, m: &F2Matrix, ps: &[f64]) -> Result<Vec<FourierAudit>, FourierError> {
    let r = m.rows();
    let law = DeltaLaw::enumerate(s, m)?;
    let f_graphs: Vec<F2Matrix> = (0u128..1 << edge_count(s))
        .map(|mask| {
            let bg = crate::graph::BitGraph::from_edge_mask(s, mask);
            F2Matrix::from_fn(s, s, |a, b| bg.has_edge(a, b))
        })
        .collect();
    let mut tensor_shape_ok = true;
    let mut sign = Vec::with_capacity(f_graphs.len());
    for f in &f_graphs {
        let poly = claim34_polynomial(f, m);
        tensor_shape_ok &= poly.coef2() == &f.tensor(m);
        sign.push(sign_counts(&poly)?);
    }
    let ranks: Vec<usize> = f_graphs.iter().map(|f| f.rank()).collect();
    ps.iter()
        .map(|&p| {
            let dist = law.distribution(p)?;
            let spec = fourier_transform(&dist);
            let q = p.min(1.0 - p);
            let mut max_ratio: f64 = 0.0;
            let mut max_floor_ratio: f64 = 0.0;
            let mut max_tensor_error: f64 = 0.0;
            for (mask, &c) in spec.coeffs().iter().enumerate() {
                max_tensor_error = max_tensor_error.max((sign[mask].expectation(p) - c).abs());
                if mask == 0 {
                    continue;
                }
                max_ratio = max_ratio.max(bound_ratio(c, claim34_bound_for_rank(ranks[mask], r, q)));
                max_floor_ratio =
                    max_floor_ratio.max(bound_ratio(c, claim34_bound_floor_for_rank(ranks[mask], r, q)));
            }
            Ok(FourierAudit {
                p,
                tv_exact: tv_to_uniform(&dist),
                fourier_bound: spectrum_tv_bound(&spec),
                chain_bound: census_chain_bound(s, r, q),
                max_claim34_ratio: max_ratio,
                max_claim34_floor_ratio: max_floor_ratio,
                max_tensor_error,
                tensor_ok: tensor_shape_ok && max_tensor_error <= 1e-12,
                mu_empty_ok: (spec.coeff(0) - 1.0).abs() <= 1e-12,
            })
        })
        .collect()
}

/// How G[W] is drawn by the sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WLayout {
    /// Full G(n,p).
    Random,
    /// W is an independent set; U-W and U-U edges are G(n,p).
    Independent,
}

/// Samples G on U ⊔ W, complements at w_1..w_r and records G_Δ and G'[U].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSampler {
    pub s: usize,
    pub r: usize,
    pub p: f64,
    pub layout: WLayout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McCounts {
    pub delta: Vec<u64>,
    pub final_graph: Vec<u64>,
    pub samples: u64,
}

const CHUNK: u64 = 1 << 14;

impl DeltaSampler {
    fn validate(&self) -> Result<(), FourierError> {
        check_s(self.s)?;
        check_p(self.p)?;
        if self.s + self.r > 128 {
            return Err(FourierError::SamplerTooLarge(self.s + self.r));
        }
        Ok(())
    }

    /// Counts over `samples` draws. Draws are split into fixed chunks with
    /// derived seeds, so the result does not depend on the thread count.
    pub fn run(&self, samples: u64, seed: u64) -> Result<McCounts, FourierError> {
        self.validate()?;
        let outcomes = 1usize << edge_count(self.s);
        let chunks = samples.div_ceil(CHUNK);
        let zero = || McCounts {
            delta: vec![0; outcomes],
            final_graph: vec![0; outcomes],
            samples: 0,
        };
        let merged = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK.min(samples - c * CHUNK);
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
                let mut acc = zero();
                let mut up = vec![0u128; self.s + self.r];
                for _ in 0..len {
                    let (delta, fin) = self.sample(&mut rng, &mut up);
                    acc.delta[delta] += 1;
                    acc.final_graph[fin] += 1;
                }
                acc.samples = len;
                acc
            })
            .reduce(zero, |mut a, b| {
                a.delta.iter_mut().zip(&b.delta).for_each(|(x, y)| *x += y);
                a.final_graph
                    .iter_mut()
                    .zip(&b.final_graph)
                    .for_each(|(x, y)| *x += y);
                a.samples += b.samples;
                a
            });
        Ok(merged)
    }

    /// Vertices 0..r are w_1..w_r, r..r+s are U. `up[a]` holds the
    /// neighbours of a with larger index. Complementing at w_j only needs
    /// the pairs above j, since later steps never look below.
    fn sample(&self, rng: &mut ChaCha8Rng, up: &mut [u128]) -> (usize, usize) {
        let (s, r) = (self.s, self.r);
        let n = s + r;
        for (a, row) in up.iter_mut().enumerate() {
            let lo = if a < r && self.layout == WLayout::Independent {
                r
            } else {
                a + 1
            };
            *row = if lo >= n {
                0
            } else {
                random_bits(rng, self.p, lo, n)
            };
        }
        let before = self.u_mask(up);
        for j in 0..r {
            let nb = up[j];
            let mut rest = nb;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                up[a] ^= nb & above(a + 1);
            }
        }
        let after = self.u_mask(up);
        (before ^ after, after)
    }

    fn u_mask(&self, up: &[u128]) -> usize {
        let (s, r) = (self.s, self.r);
        let mut h = 0usize;
        for a in 0..s {
            for b in a + 1..s {
                if (up[r + a] >> (r + b)) & 1 == 1 {
                    h |= 1 << pair_index(s, a, b);
                }
            }
        }
        h
    }
}

fn above(k: usize) -> u128 {
    if k >= 128 {
        0
    } else {
        !0u128 << k
    }
}

fn below(k: usize) -> u128 {
    if k >= 128 {
        !0
    } else {
        (1u128 << k) - 1
    }
}

/// Independent Ber(p) bits at positions lo..n, zero elsewhere.
fn random_bits(rng: &mut ChaCha8Rng, p: f64, lo: usize, n: usize) -> u128 {
    if p == 0.5 {
        let raw = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        raw & above(lo) & below(n)
    } else {
        let mut bits = 0u128;
        for i in lo..n {
            if rng.gen_bool(p) {
                bits |= 1 << i;
            }
        }
        bits
    }
}

/// Empirical law of G_Δ under the sampler.
pub fn delta_distribution_mc(
    sampler: &DeltaSampler,
    samples: u64,
    seed: u64,
) -> Result<GraphDist, FourierError> {
    let counts = sampler.run(samples, seed)?;
    GraphDist::from_counts(sampler.s, &counts.delta)
}

/// Plug-in TV estimate from counts, with its spread and upward bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvEstimate {
    pub tv: f64,
    /// Delta-method standard deviation of the plug-in estimate.
    pub sigma: f64,
    /// Upper bound ½ Σ sqrt(p̂_H / N) on E[plug-in] - TV.
    pub bias_bound: f64,
    pub samples: u64,
}

pub fn tv_estimate(counts: &[u64]) -> TvEstimate {
    let n: u64 = counts.iter().sum();
    let nf = n as f64;
    let u = 1.0 / counts.len() as f64;
    let mut tv = NeumaierSum::default();
    let mut signed = NeumaierSum::default();
    let mut bias = NeumaierSum::default();
    for &c in counts {
        let ph = c as f64 / nf;
        tv.add((ph - u).abs());
        signed.add(if ph >= u { ph } else { -ph });
        bias.add((ph / nf).sqrt());
    }
    let m = signed.total();
    TvEstimate {
        tv: 0.5 * tv.total(),
        sigma: 0.5 * ((1.0 - m * m).max(0.0) / nf).sqrt(),
        bias_bound: 0.5 * bias.total(),
        samples: n,
    }
}
