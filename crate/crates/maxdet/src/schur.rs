//! The bordered construction and its Schur complement.
//!
//! Given a Hadamard core A of order h and a gap d, the border is an h×d
//! random ±1 block B, the deterministic d×h block C with
//! c_ij = sgn((AᵀB)_ji) (and sgn(0) = +1), and a d×d corner D that starts as
//! −I. Writing F = CA⁻¹B = CAᵀB/h and G = F + I, the block determinant
//! factors exactly:
//!
//! ```text
//! det(Ã) = det(A) · det(D − F)
//! ```
//!
//! so large det(G) (= det(D − F) up to sign at D = −I) means large det(Ã).
//! The sign matching in C removes cancellation on the diagonal of F, which
//! is what pushes `E[g_ii]` up to μ(h) ~ √(2h/π) + 1 while off-diagonal
//! entries stay at unit variance.
//!
//! All quantities are exact: hF is an integer matrix, F and G are rationals
//! with denominator h, and determinants go through fraction-free Bareiss
//! elimination over big integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hadamard::SignMatrix;
use crate::moments::ExactScalar;

/// Largest matrix order accepted by the exact determinant routines.
pub const DET_ORDER_LIMIT: usize = 4096;

/// Generator for one trial: a counter-based stream keyed on (seed, index),
/// so any worker can reproduce any trial independently.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A sampled border: the random block B (h×d) and its sign complement
/// C (d×h), which is a pure function of (A, B).
#[derive(Debug, Clone)]
pub struct BorderSample {
    pub b: SignMatrix,
    pub c: SignMatrix,
    pub h: usize,
    pub d: usize,
}

/// The pair (F, G = F + I), stored as the integer matrix hF.
#[derive(Debug, Clone)]
pub struct SchurPair {
    h: u64,
    d: usize,
    /// Row-major h·F, integral because hF = C·Aᵀ·B.
    hf: Vec<i64>,
}

impl SchurPair {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u64 {
        self.h
    }

    /// Integer entry (hF)_ij.
    #[inline]
    pub fn hf(&self, i: usize, j: usize) -> i64 {
        self.hf[i * self.d + j]
    }

    /// Exact rational F_ij.
    pub fn f(&self, i: usize, j: usize) -> ExactScalar {
        BigRational::new(BigInt::from(self.hf(i, j)), BigInt::from(self.h))
    }

    /// Exact rational G_ij = F_ij + δ_ij.
    pub fn g(&self, i: usize, j: usize) -> ExactScalar {
        let delta = if i == j {
            BigInt::from(self.h)
        } else {
            BigInt::zero()
        };
        BigRational::new(BigInt::from(self.hf(i, j)) + delta, BigInt::from(self.h))
    }

    pub fn f_matrix(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.f(i, j)).collect())
            .collect()
    }

    pub fn g_matrix(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| self.g(i, j)).collect())
            .collect()
    }

    /// Exact det(G) = det(hG)/h^d.
    pub fn det_g(&self) -> ExactScalar {
        let hh = self.h as i128;
        let m: Vec<Vec<i128>> = (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| self.hf(i, j) as i128 + if i == j { hh } else { 0 })
                    .collect()
            })
            .collect();
        BigRational::new(
            BigInt::from(det_i128(m)),
            BigInt::from(self.h).pow(self.d as u32),
        )
    }

    /// Check |F_ij| ≤ √h for every entry, i.e. (hF_ij)² ≤ h³, exactly.
    pub fn cauchy_schwarz_ok(&self) -> bool {
        let cube = (self.h as i128).pow(3);
        self.hf.iter().all(|&v| (v as i128) * (v as i128) <= cube)
    }

    /// All diagonal entries of F nonnegative (no cancellation in C·AᵀB).
    pub fn diagonal_nonnegative(&self) -> bool {
        (0..self.d).all(|i| self.hf(i, i) >= 0)
    }
}

/// Precomputed state for repeated trials against a fixed core A.
#[derive(Debug, Clone)]
pub struct TrialEngine {
    a: SignMatrix,
    /// Aᵀ, so columns of A are packed rows.
    at: SignMatrix,
    h: usize,
}

impl TrialEngine {
    /// Verifies that A is Hadamard once, up front.
    pub fn new(a: &SignMatrix) -> Result<Self> {
        if !a.is_hadamard() {
            return Err(Error::NotHadamard(a.rows()));
        }
        Ok(TrialEngine {
            a: a.clone(),
            at: a.transpose(),
            h: a.order(),
        })
    }

    pub fn core(&self) -> &SignMatrix {
        &self.a
    }

    pub fn order(&self) -> usize {
        self.h
    }

    /// Draw a uniform border B and derive (C, hF) from it.
    pub fn sample(&self, d: usize, rng: &mut impl RngCore) -> (BorderSample, SchurPair) {
        let b = SignMatrix::random(self.h, d, rng);
        self.pair_from_b(b)
    }

    /// Derive (C, hF) from an explicit border B.
    pub fn pair_from_b(&self, b: SignMatrix) -> (BorderSample, SchurPair) {
        let h = self.h;
        let d = b.cols();
        debug_assert_eq!(b.rows(), h);
        let bt = b.transpose();
        // (AᵀB)_{j,i} = (column j of A)·(column i of B).
        let mut atb = vec![0i64; h * d];
        for j in 0..h {
            for i in 0..d {
                atb[j * d + i] = self.at.dot_rows(j, &bt, i);
            }
        }
        // c_ij = sgn((AᵀB)_ji) with sgn(0) = +1.
        let c = SignMatrix::from_fn(d, h, |i, j| if atb[j * d + i] >= 0 { 1 } else { -1 });
        // hF = C·(AᵀB).
        let mut hf = vec![0i64; d * d];
        for i in 0..d {
            for k in 0..d {
                let mut acc = 0i64;
                for j in 0..h {
                    acc += c.get(i, j) as i64 * atb[j * d + k];
                }
                hf[i * d + k] = acc;
            }
        }
        (
            BorderSample { b, c, h, d },
            SchurPair { h: h as u64, d, hf },
        )
    }
}

/// Draw a uniform random border and its sign complement for a Hadamard A.
pub fn sample_border(a: &SignMatrix, d: usize, rng: &mut impl RngCore) -> BorderSample {
    debug_assert!(a.is_hadamard(), "core must be Hadamard");
    assert!(d >= 1);
    let engine = TrialEngine {
        a: a.clone(),
        at: a.transpose(),
        h: a.order(),
    };
    engine.sample(d, rng).0
}

/// The sign complement C of (A, B): c_ij = sgn((AᵀB)_ji), sgn(0) = +1.
pub fn sign_complement(a: &SignMatrix, b: &SignMatrix) -> Result<SignMatrix> {
    if a.rows() != a.cols() || a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}×{}, B is {}×{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let engine = TrialEngine {
        a: a.clone(),
        at: a.transpose(),
        h: a.order(),
    };
    Ok(engine.pair_from_b(b.clone()).0.c)
}

/// Exact F = CAᵀB/h and G = F + I for a sampled border.
pub fn schur_pair(a: &SignMatrix, sample: &BorderSample) -> SchurPair {
    debug_assert_eq!(a.order(), sample.h);
    let engine = TrialEngine {
        a: a.clone(),
        at: a.transpose(),
        h: a.order(),
    };
    engine.pair_from_b(sample.b.clone()).1
}

/// Exact determinant of a square big-integer matrix by fraction-free
/// (Bareiss) elimination.
pub fn det_exact(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    assert!(
        n <= DET_ORDER_LIMIT,
        "matrix order exceeds the determinant limit"
    );
    if n == 0 {
        return BigInt::one();
    }
    for row in m {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&p| !a[p][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev; // exact by the Bareiss identity
            }
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// Bareiss over i128 for tiny matrices (the d×d corners).
pub fn det_i128(m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    debug_assert!(n <= 8);
    if n == 0 {
        return 1;
    }
    let mut a = m;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&p| a[p][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// The corner block D as a small integer matrix with entries in {−1, 0, +1}.
pub type CornerMatrix = Vec<Vec<i32>>;

/// The starting corner D = −I (off-diagonal zeros still unresolved).
pub fn corner_neg_identity(d: usize) -> CornerMatrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { -1 } else { 0 }).collect())
        .collect()
}

/// Resolve the zeros of D = −I to ±1, greedily in row-major order, never
/// letting |det Ã| decrease; ties take +1. Works entirely in the d×d Schur
/// domain: |det Ã| = |det A|·|det(hD − hF)|/h^d, and det A is fixed.
pub fn complete_d(sample_pair: &SchurPair) -> SignMatrix {
    let d = sample_pair.dim();
    let h = sample_pair.order() as i128;
    let mut n: Vec<Vec<i128>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let dd = if i == j { -h } else { 0 };
                    dd - sample_pair.hf(i, j) as i128
                })
                .collect()
        })
        .collect();
    let mut out = SignMatrix::from_fn(d, d, |i, j| if i == j { -1 } else { 1 });
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let base = -(sample_pair.hf(i, j) as i128);
            n[i][j] = base + h;
            let det_plus = det_i128(n.clone()).abs();
            n[i][j] = base - h;
            let det_minus = det_i128(n.clone()).abs();
            if det_plus >= det_minus {
                n[i][j] = base + h;
                out.set(i, j, 1);
            } else {
                out.set(i, j, -1);
            }
        }
    }
    out
}

/// Assemble the full bordered matrix Ã = [A B; C D] over big integers.
pub fn assemble_bordered(
    a: &SignMatrix,
    sample: &BorderSample,
    corner: &CornerMatrix,
) -> Vec<Vec<BigInt>> {
    let h = sample.h;
    let d = sample.d;
    let n = h + d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..h {
        for j in 0..h {
            m[i][j] = BigInt::from(a.get(i, j));
        }
        for j in 0..d {
            m[i][h + j] = BigInt::from(sample.b.get(i, j));
        }
    }
    for i in 0..d {
        for j in 0..h {
            m[h + i][j] = BigInt::from(sample.c.get(i, j));
        }
        for j in 0..d {
            m[h + i][h + j] = BigInt::from(corner[i][j]);
        }
    }
    m
}

/// Exact check of det(Ã) = det(A)·det(D − F), comparing the big-integer
/// determinant of the assembled matrix against the rational product.
pub fn schur_identity_check(
    a: &SignMatrix,
    sample: &BorderSample,
    pair: &SchurPair,
    corner: &CornerMatrix,
) -> bool {
    let lhs = det_exact(&assemble_bordered(a, sample, corner));
    let h = sample.h as i128;
    let schur: Vec<Vec<i128>> = (0..sample.d)
        .map(|i| {
            (0..sample.d)
                .map(|j| corner[i][j] as i128 * h - pair.hf(i, j) as i128)
                .collect()
        })
        .collect();
    let det_a = det_exact(
        &(0..sample.h)
            .map(|i| {
                (0..sample.h)
                    .map(|j| BigInt::from(a.get(i, j)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    );
    // det(D − F) = det(hD − hF)/h^d.
    let rhs = BigRational::new(
        det_a * BigInt::from(det_i128(schur)),
        BigInt::from(sample.h).pow(sample.d as u32),
    );
    BigRational::from_integer(lhs) == rhs
}

/// The perturbation determinant bound: for M = I − E with |e_ij| ≤ ε and
/// d·ε ≤ 1, det(M) ≥ 1 − d·ε. Returns the exact rational bound 1 − d·ε.
pub fn ostrowski_lower_bound(m: &[Vec<ExactScalar>]) -> Result<ExactScalar> {
    let d = m.len();
    assert!(d >= 1);
    let mut eps = BigRational::zero();
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), d, "perturbation bound needs a square matrix");
        for (j, v) in row.iter().enumerate() {
            let delta = if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let e = (delta - v).abs();
            if e > eps {
                eps = e;
            }
        }
    }
    let d_eps = BigRational::from_integer(BigInt::from(d as i64)) * &eps;
    if d_eps > BigRational::one() {
        return Err(Error::PerturbationTooLarge(d_eps.to_string()));
    }
    Ok(BigRational::one() - d_eps)
}

/// Exact determinant of a rational matrix (clears denominators first).
pub fn det_rational(m: &[Vec<ExactScalar>]) -> ExactScalar {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut denom = BigInt::one();
    for row in m {
        for v in row {
            denom = num_integer::lcm(denom, v.denom().clone());
        }
    }
    let scaled: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.numer() * (&denom / v.denom()))
                .collect()
        })
        .collect();
    BigRational::new(det_exact(&scaled), denom.pow(n as u32))
}

/// Row norms of U = CA⁻¹: returns Σ_j u_ij² for each i (exact; must be 1).
pub fn u_row_norm_sq(a: &SignMatrix, c: &SignMatrix) -> Result<Vec<ExactScalar>> {
    if a.rows() != a.cols() || c.cols() != a.rows() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}×{}, C is {}×{}",
            a.rows(),
            a.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let h = a.order();
    // (CAᵀ)_ij is the inner product of row i of C with row j of A.
    let h_sq = BigInt::from(h as i64) * BigInt::from(h as i64);
    Ok((0..c.rows())
        .map(|i| {
            let sum_sq: i128 = (0..h)
                .map(|j| {
                    let v = c.dot_rows(i, a, j) as i128;
                    v * v
                })
                .sum();
            BigRational::new(BigInt::from(sum_sq), h_sq.clone())
        })
        .collect())
}
