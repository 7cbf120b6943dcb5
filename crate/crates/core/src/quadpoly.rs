//! Multilinear polynomials of degree at most two over GF(2), and the bias
//! E[(-1)^f(X)] of such a polynomial under i.i.d. Ber(p) inputs.
//!
//! The degree-two part is stored as the symmetric, zero-diagonal matrix
//! Coef₂(f): the monomial x_i x_j sets entries (i,j) and (j,i), and
//! evaluation counts each unordered pair once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::f2core::{F2Matrix, F2Vector};
use crate::numeric::NeumaierSum;

/// Largest variable count summed exhaustively (2^24 evaluations).
pub const EXHAUSTIVE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadPolyError {
    #[error("expected {expected} variables, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("degree-2 coefficient matrix must be symmetric with zero diagonal")]
    NotMultilinear,
    #[error("{m} variables exceeds the exhaustive cap of {cap}; use the Monte-Carlo estimator")]
    CapExceeded { m: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadPoly {
    m: usize,
    constant: bool,
    linear: F2Vector,
    coef2: F2Matrix,
}

impl QuadPoly {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            constant: false,
            linear: F2Vector::zeros(m),
            coef2: F2Matrix::zeros(m, m),
        }
    }

    pub fn new(constant: bool, linear: F2Vector, coef2: F2Matrix) -> Result<Self, QuadPolyError> {
        let m = linear.len();
        if coef2.rows() != m || coef2.cols() != m {
            return Err(QuadPolyError::LengthMismatch {
                expected: m,
                got: coef2.rows(),
            });
        }
        if !coef2.is_symmetric() || !coef2.has_zero_diagonal() {
            return Err(QuadPolyError::NotMultilinear);
        }
        Ok(Self {
            m,
            constant,
            linear,
            coef2,
        })
    }

    /// Sum of the listed monomials (repeats cancel).
    pub fn from_terms(
        m: usize,
        constant: bool,
        linear_terms: &[usize],
        pair_terms: &[(usize, usize)],
    ) -> Self {
        let mut f = Self::zero(m);
        f.constant = constant;
        for &i in linear_terms {
            f.linear.flip(i);
        }
        for &(i, j) in pair_terms {
            f.toggle_pair(i, j);
        }
        f
    }

    /// Adds the monomial x_i x_j (i != j).
    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "x_i x_i is not multilinear");
        self.coef2.flip(i, j);
        self.coef2.flip(j, i);
    }

    pub fn toggle_linear(&mut self, i: usize) {
        self.linear.flip(i);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn linear(&self) -> &F2Vector {
        &self.linear
    }

    pub fn coef2(&self) -> &F2Matrix {
        &self.coef2
    }

    pub fn rank(&self) -> usize {
        self.coef2.rank()
    }

    pub fn add(&self, other: &QuadPoly) -> Result<QuadPoly, QuadPolyError> {
        if self.m != other.m {
            return Err(QuadPolyError::LengthMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        Ok(QuadPoly {
            m: self.m,
            constant: self.constant ^ other.constant,
            linear: self.linear.xor(&other.linear),
            coef2: self.coef2.add(&other.coef2).expect("same shape"),
        })
    }

    pub fn evaluate(&self, x: &F2Vector) -> Result<bool, QuadPolyError> {
        if x.len() != self.m {
            return Err(QuadPolyError::LengthMismatch {
                expected: self.m,
                got: x.len(),
            });
        }
        // Summing |row_i ∧ x| over the set i counts each pair twice.
        let twice: usize = x
            .iter_ones()
            .map(|i| {
                let mut r = self.coef2.row(i).clone();
                r.and_assign(x);
                r.count_ones()
            })
            .sum();
        Ok(self.constant ^ self.linear.dot(x) ^ ((twice / 2) % 2 == 1))
    }

    /// Row bitmasks of Coef₂ and the linear part as a mask. Requires m <= 64.
    fn masks(&self) -> (Vec<u64>, u64) {
        assert!(self.m <= 64);
        let rows = (0..self.m).map(|i| self.coef2.row(i).to_mask() as u64).collect();
        (rows, self.linear.to_mask() as u64)
    }

    fn evaluate_mask(rows: &[u64], linear: u64, constant: bool, x: u64) -> bool {
        let mut twice = 0u32;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice += (rows[i] & x).count_ones();
        }
        constant ^ ((linear & x).count_ones() & 1 == 1) ^ ((twice / 2) & 1 == 1)
    }
}

/// An affine form c + Σ a_i x_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub linear: F2Vector,
    pub constant: bool,
}

impl AffineForm {
    pub fn new(linear: F2Vector, constant: bool) -> Self {
        Self { linear, constant }
    }

    pub fn evaluate(&self, x: &F2Vector) -> bool {
        self.constant ^ self.linear.dot(x)
    }
}

/// The multilinear g with g(x) = f1(x) f2(x) on {0,1}^m, obtained by
/// replacing every x_i² by x_i in the product. Coef₂(g) = αᵀβ + βᵀα.
pub fn multilinearize_product(f1: &AffineForm, f2: &AffineForm) -> Result<QuadPoly, QuadPolyError> {
    let m = f1.linear.len();
    if f2.linear.len() != m {
        return Err(QuadPolyError::LengthMismatch {
            expected: m,
            got: f2.linear.len(),
        });
    }
    let (alpha, beta) = (&f1.linear, &f2.linear);
    let mut coef2 = F2Matrix::zeros(m, m);
    for i in alpha.iter_ones() {
        coef2.xor_into_row(i, beta);
    }
    for i in beta.iter_ones() {
        coef2.xor_into_row(i, alpha);
    }
    // The diagonal is 2 α_i β_i = 0 already.
    debug_assert!(coef2.has_zero_diagonal());

    // Linear part: c2·α + c1·β + (α ∧ β) from the squared terms.
    let mut linear = F2Vector::zeros(m);
    if f2.constant {
        linear.xor_assign(alpha);
    }
    if f1.constant {
        linear.xor_assign(beta);
    }
    let mut squares = alpha.clone();
    squares.and_assign(beta);
    linear.xor_assign(&squares);

    QuadPoly::new(f1.constant && f2.constant, linear, coef2)
}

/// Σ_{|x| = w} (-1)^f(x) for each Hamming weight w, exactly.
///
/// The bias at any p is then Σ_w S_w p^w (1-p)^(m-w), so one enumeration
/// serves every p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCounts {
    pub by_weight: Vec<i64>,
}

impl SignCounts {
    pub fn m(&self) -> usize {
        self.by_weight.len() - 1
    }

    pub fn expectation(&self, p: f64) -> f64 {
        weighted_sum(&self.by_weight, p)
    }
}

/// Σ_w c_w p^w (1-p)^(m-w) with compensated summation.
pub(crate) fn weighted_sum(by_weight: &[i64], p: f64) -> f64 {
    let m = by_weight.len() as i32 - 1;
    let mut acc = NeumaierSum::default();
    for (w, &c) in by_weight.iter().enumerate() {
        if c != 0 {
            let w = w as i32;
            acc.add(c as f64 * p.powi(w) * (1.0 - p).powi(m - w));
        }
    }
    acc.total()
}

/// Exhaustive signed counts via a Gray-code walk of {0,1}^m.
pub fn sign_counts(f: &QuadPoly) -> Result<SignCounts, QuadPolyError> {
    if f.m > EXHAUSTIVE_CAP {
        return Err(QuadPolyError::CapExceeded {
            m: f.m,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let (rows, linear) = f.masks();
    let mut by_weight = vec![0i64; f.m + 1];
    let mut x = 0u64;
    let mut value = f.constant;
    let mut weight = 0usize;
    by_weight[0] += if value { -1 } else { 1 };
    for k in 1u64..(1u64 << f.m) {
        let b = k.trailing_zeros() as usize;
        // f(x ⊕ e_b) = f(x) + ℓ_b + Σ_j a_bj x_j, independent of x_b.
        value ^= ((linear >> b) & 1 == 1) ^ ((rows[b] & x).count_ones() & 1 == 1);
        x ^= 1 << b;
        if (x >> b) & 1 == 1 {
            weight += 1;
        } else {
            weight -= 1;
        }
        by_weight[weight] += if value { -1 } else { 1 };
    }
    Ok(SignCounts { by_weight })
}

/// E[(-1)^f(X)] for X with i.i.d. Ber(p) entries, by exhaustive summation.
pub fn sign_expectation_exact(f: &QuadPoly, p: f64) -> Result<f64, QuadPolyError> {
    Ok(sign_counts(f)?.expectation(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Seeded Monte-Carlo estimate of E[(-1)^f(X)] with its standard error.
pub fn sign_expectation_mc(f: &QuadPoly, p: f64, samples: u64, seed: u64) -> McEstimate {
    assert!(samples >= 1, "at least one sample is required");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus = 0u64;
    if f.m <= 64 {
        let (rows, linear) = f.masks();
        for _ in 0..samples {
            let mut x = 0u64;
            for i in 0..f.m {
                if rng.gen_bool(p) {
                    x |= 1 << i;
                }
            }
            if !QuadPoly::evaluate_mask(&rows, linear, f.constant, x) {
                plus += 1;
            }
        }
    } else {
        let mut x = F2Vector::zeros(f.m);
        for _ in 0..samples {
            for i in 0..f.m {
                x.set(i, rng.gen_bool(p));
            }
            if !f.evaluate(&x).expect("length matches") {
                plus += 1;
            }
        }
    }
    let n = samples as f64;
    let mean = (2.0 * plus as f64 - n) / n;
    let var = if samples > 1 {
        (1.0 - mean * mean) * n / (n - 1.0)
    } else {
        0.0
    };
    McEstimate {
        mean,
        std_error: (var.max(0.0) / n).sqrt(),
        samples,
    }
}

/// (1 - 2q²)^⌊rank/6⌋ with q = min(p, 1-p).
pub fn lemma21_bound(f: &QuadPoly, p: f64) -> f64 {
    lemma21_bound_for_rank(f.rank(), p)
}

pub fn lemma21_bound_for_rank(rank: usize, p: f64) -> f64 {
    let q = p.min(1.0 - p);
    (1.0 - 2.0 * q * q).powi((rank / 6) as i32)
}

/// x_1x_2 + x_3x_4 + ... + x_{2t-1}x_{2t}.
pub fn disjoint_pairs(t: usize) -> QuadPoly {
    let pairs: Vec<(usize, usize)> = (0..t).map(|k| (2 * k, 2 * k + 1)).collect();
    QuadPoly::from_terms(2 * t, false, &[], &pairs)
}

/// All 2^(1 + m + C(m,2)) multilinear polynomials on m variables, indexed
/// by (constant, linear bits, pair bits) packed low to high.
pub fn all_polynomials(m: usize) -> impl Iterator<Item = QuadPoly> {
    let pair_list = crate::graph::pairs(m);
    let bits = 1 + m + pair_list.len();
    assert!(bits < 32, "too many polynomials to enumerate");
    (0u32..(1u32 << bits)).map(move |code| {
        let mut f = QuadPoly::zero(m);
        f.constant = code & 1 == 1;
        for i in 0..m {
            if (code >> (1 + i)) & 1 == 1 {
                f.toggle_linear(i);
            }
        }
        for (k, &(i, j)) in pair_list.iter().enumerate() {
            if (code >> (1 + m + k)) & 1 == 1 {
                f.toggle_pair(i, j);
            }
        }
        f
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Term-by-term evaluation.
    fn naive_eval(f: &QuadPoly, x: &[bool]) -> bool {
        let mut v = f.constant();
        for i in 0..f.m() {
            v ^= f.linear().get(i) && x[i];
            for j in i + 1..f.m() {
                v ^= f.coef2().get(i, j) && x[i] && x[j];
            }
        }
        v
    }

    /// Σ_x p^|x| (1-p)^(m-|x|) (-1)^f(x) summed point by point.
    fn naive_expectation(f: &QuadPoly, p: f64) -> f64 {
        let m = f.m();
        let mut total = 0.0;
        for code in 0u32..(1 << m) {
            let x: Vec<bool> = (0..m).map(|i| code >> i & 1 == 1).collect();
            let w = code.count_ones() as i32;
            let weight = p.powi(w) * (1.0 - p).powi(m as i32 - w);
            total += if naive_eval(f, &x) { -weight } else { weight };
        }
        total
    }

    fn poly_strategy(max_m: usize) -> impl Strategy<Value = QuadPoly> {
        (1..=max_m).prop_flat_map(|m| {
            (
                any::<bool>(),
                proptest::collection::vec(any::<bool>(), m),
                proptest::collection::vec(any::<bool>(), m * m),
            )
                .prop_map(move |(c, lin, quad)| {
                    let mut f = QuadPoly::zero(m);
                    f.constant = c;
                    for i in 0..m {
                        if lin[i] {
                            f.toggle_linear(i);
                        }
                        for j in i + 1..m {
                            if quad[i * m + j] {
                                f.toggle_pair(i, j);
                            }
                        }
                    }
                    f
                })
        })
    }

    #[test]
    fn evaluate_examples() {
        let zero = QuadPoly::zero(3);
        for code in 0..8u128 {
            assert!(!zero.evaluate(&F2Vector::from_mask(3, code)).unwrap());
        }
        let f = QuadPoly::from_terms(2, false, &[], &[(0, 1)]);
        assert!(f.evaluate(&F2Vector::from_bits(&[1, 1])).unwrap());
        assert!(!f.evaluate(&F2Vector::from_bits(&[1, 0])).unwrap());
        assert_eq!(
            f.evaluate(&F2Vector::zeros(3)),
            Err(QuadPolyError::LengthMismatch {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn exact_expectation_examples() {
        assert!((sign_expectation_exact(&QuadPoly::zero(5), 0.3).unwrap() - 1.0).abs() < 1e-15);
        let f = QuadPoly::from_terms(2, false, &[], &[(0, 1)]);
        for p in [0.0, 0.1, 0.25, 0.5, 0.8, 1.0] {
            let e = sign_expectation_exact(&f, p).unwrap();
            assert!((e - (1.0 - 2.0 * p * p)).abs() < 1e-15);
        }
        let three = disjoint_pairs(3);
        assert_eq!(naive_expectation(&three, 0.5), 0.125);
        assert!((sign_expectation_exact(&three, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(
            sign_expectation_exact(&QuadPoly::zero(25), 0.5),
            Err(QuadPolyError::CapExceeded { m: 25, cap: 24 })
        );
    }

    #[test]
    fn monte_carlo_examples() {
        let zero = sign_expectation_mc(&QuadPoly::zero(4), 0.3, 1000, 1);
        assert_eq!((zero.mean, zero.std_error), (1.0, 0.0));
        let f = QuadPoly::from_terms(2, false, &[], &[(0, 1)]);
        let est = sign_expectation_mc(&f, 0.5, 1_000_000, 42);
        assert!((est.mean - 0.5).abs() < 3e-3, "{est:?}");
        assert!((est.mean - 0.5).abs() < 3.0 * est.std_error + 1e-12, "{est:?}");
        assert_eq!(sign_expectation_mc(&f, 0.5, 5000, 9), sign_expectation_mc(&f, 0.5, 5000, 9));
    }

    #[test]
    fn lemma21_bound_examples() {
        assert_eq!(lemma21_bound(&QuadPoly::zero(4), 0.3), 1.0);
        assert_eq!(lemma21_bound(&disjoint_pairs(3), 0.5), 0.5);
        assert_eq!(disjoint_pairs(2).rank(), 4);
        assert_eq!(lemma21_bound(&disjoint_pairs(2), 0.2), 1.0);
    }

    #[test]
    fn multilinearize_examples() {
        let x1 = AffineForm::new(F2Vector::from_bits(&[1, 0]), false);
        let x2 = AffineForm::new(F2Vector::from_bits(&[0, 1]), false);
        let g = multilinearize_product(&x1, &x1).unwrap();
        assert_eq!(g, QuadPoly::from_terms(2, false, &[0], &[]));
        let g = multilinearize_product(&x1, &x2).unwrap();
        assert_eq!(g, QuadPoly::from_terms(2, false, &[], &[(0, 1)]));
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn all_polynomials_on_four_variables() {
        let all: Vec<_> = all_polynomials(4).collect();
        assert_eq!(all.len(), 2048);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 2048);
    }

    proptest! {
        #[test]
        fn evaluate_matches_monomial_sum(f in poly_strategy(12), code in any::<u32>()) {
            let x: Vec<bool> = (0..f.m()).map(|i| code >> i & 1 == 1).collect();
            prop_assert_eq!(f.evaluate(&F2Vector::from_bools(&x)).unwrap(), naive_eval(&f, &x));
        }

        #[test]
        fn gray_code_counts_match_pointwise_sum(f in poly_strategy(10), p in 0.0f64..=1.0) {
            let fast = sign_expectation_exact(&f, p).unwrap();
            prop_assert!((fast - naive_expectation(&f, p)).abs() < 1e-12);
        }

        #[test]
        fn multilinearized_product_agrees_pointwise(
            m in 1usize..=10,
            bits in proptest::collection::vec(any::<bool>(), 22),
        ) {
            let f1 = AffineForm::new(F2Vector::from_bools(&bits[..m]), bits[20]);
            let f2 = AffineForm::new(F2Vector::from_bools(&bits[10..10 + m]), bits[21]);
            let g = multilinearize_product(&f1, &f2).unwrap();
            prop_assert!(g.rank() <= 2);
            for code in 0u128..(1 << m) {
                let x = F2Vector::from_mask(m, code);
                prop_assert_eq!(g.evaluate(&x).unwrap(), f1.evaluate(&x) && f2.evaluate(&x));
            }
        }

        #[test]
        fn linear_changes_keep_coef2(f in poly_strategy(8), bits in proptest::collection::vec(any::<bool>(), 9)) {
            let m = f.m();
            let shift = QuadPoly::new(bits[8], F2Vector::from_bools(&bits[..m]), F2Matrix::zeros(m, m)).unwrap();
            let g = f.add(&shift).unwrap();
            prop_assert_eq!(g.coef2(), f.coef2());
        }

        #[test]
        fn lemma21_holds_on_random_polynomials(f in poly_strategy(14), p in 0.0f64..=1.0) {
            let e = sign_expectation_exact(&f, p).unwrap();
            prop_assert!(e.abs() <= lemma21_bound(&f, p) + 1e-12);
        }
    }
}
