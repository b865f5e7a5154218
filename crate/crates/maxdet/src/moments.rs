//! Exact rational moments of the bordered construction.
//!
//! When an h×h Hadamard core is bordered with a uniform random ±1 column
//! block B and the sign-matched row block C, the matrix G = CA⁻¹B + I has
//! diagonal entries with mean
//!
//! ```text
//! μ(h) = 1 + h·C(h, h/2) / 2^h
//! ```
//!
//! and variance
//!
//! ```text
//! σ²(h) = 1 + h(h−1)/2^(h+1) · C(h/2, h/4)² − h²/2^(2h) · C(h, h/2)²
//! ```
//!
//! while off-diagonal entries have mean 0 and variance 1. Everything here is
//! big-rational: at h = 996 the binomial term C(h, h/2)/2^h is far outside
//! machine-float range, so conversion to `f64` happens only at the reporting
//! boundary.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Stored in lowest terms with a
/// positive denominator (the `num-rational` canonical form).
pub type ExactScalar = BigRational;

/// Exact binomial coefficient C(n, k). Returns 0 for k outside [0, n].
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || (k as u64) > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// 2^e as a positive big integer.
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e as usize
}

fn require_order_div4(h: u64) -> Result<()> {
    if h < 4 || h % 4 != 0 {
        return Err(Error::InvalidOrder(h));
    }
    Ok(())
}

/// Exact mean μ(h) of a diagonal entry of G = F + I.
///
/// Defined for h ≡ 0 (mod 4), h ≥ 4, and for the degenerate orders
/// h ∈ {1, 2}. For h = 2 the general formula already gives 2; for h = 1 the
/// half-order binomial is meaningless, but the construction is exact there:
/// the single border product is sgn(b)·b = 1, so g₁₁ = 2 identically.
pub fn mu_exact(h: u64) -> Result<ExactScalar> {
    if h == 1 || h == 2 {
        return Ok(BigRational::from_integer(BigInt::from(2)));
    }
    require_order_div4(h)?;
    let term = BigRational::new(BigInt::from(h) * binomial(h, (h / 2) as i64), pow2(h));
    Ok(BigRational::one() + term)
}

/// Exact variance σ²(h) of a diagonal entry of G, for h ≡ 0 (mod 4), h ≥ 4.
pub fn sigma2_exact(h: u64) -> Result<ExactScalar> {
    require_order_div4(h)?;
    let quarter = binomial(h / 2, (h / 4) as i64);
    let half = binomial(h, (h / 2) as i64);
    let mid = BigRational::new(
        BigInt::from(h) * BigInt::from(h - 1) * (&quarter * &quarter),
        pow2(h + 1),
    );
    let last = BigRational::new(
        BigInt::from(h) * BigInt::from(h) * (&half * &half),
        pow2(2 * h),
    );
    Ok(BigRational::one() + mid - last)
}

/// Exact second moment `E[f_ii²]` = 1 + h(h−1)/2^(h+1) · C(h/2, h/4)².
pub fn e_fii_sq_exact(h: u64) -> Result<ExactScalar> {
    require_order_div4(h)?;
    let quarter = binomial(h / 2, (h / 4) as i64);
    let mid = BigRational::new(
        BigInt::from(h) * BigInt::from(h - 1) * (&quarter * &quarter),
        pow2(h + 1),
    );
    Ok(BigRational::one() + mid)
}

/// E[|S₁S₂|] for the pair of dependent ±1 sums of length h = 4k, evaluated
/// as the explicit double sum
///
/// ```text
/// (4 / 2^(4k)) · Σ_p Σ_q C(2k, k+p) · C(2k, k+q) · |p² − q²|
/// ```
///
/// and checked on the spot against the closed form h²/2^(h+1) · C(2k, k)².
/// The two routes agreeing exactly is part of this function's contract.
pub fn e_abs_s1s2(k: u64) -> ExactScalar {
    assert!(k >= 1, "k must be positive");
    let h = 4 * k;
    let ki = k as i64;
    let mut sum = BigInt::zero();
    for p in -ki..=ki {
        let cp = binomial(2 * k, ki + p);
        for q in -ki..=ki {
            let cq = binomial(2 * k, ki + q);
            let w = BigInt::from((p * p - q * q).abs());
            sum += &cp * &cq * w;
        }
    }
    let double_sum = BigRational::new(BigInt::from(4) * sum, pow2(h));
    let central = binomial(2 * k, ki);
    let closed = BigRational::new(
        BigInt::from(h) * BigInt::from(h) * (&central * &central),
        pow2(h + 1),
    );
    assert_eq!(double_sum, closed, "double-sum identity must hold exactly");
    double_sum
}

/// The exact first and second moments of a diagonal entry at order h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSet {
    pub h: u64,
    /// `E[g_ii]` = μ(h).
    pub mu: ExactScalar,
    /// `V[g_ii]` = σ²(h).
    pub sigma2: ExactScalar,
    /// `E[f_ii²]`, the raw second moment of the diagonal of F = G − I.
    pub e_fii_sq: ExactScalar,
}

/// Assemble the exact moment set for order h (h ≡ 0 mod 4, h ≥ 4).
///
/// Off-diagonal moments are the constants 0 and 1 and are not stored.
pub fn moments(h: u64) -> Result<MomentSet> {
    let mu = mu_exact(h)?;
    let sigma2 = sigma2_exact(h)?;
    let e_fii_sq = e_fii_sq_exact(h)?;
    debug_assert_eq!(
        sigma2,
        &e_fii_sq - (&mu - BigRational::one()) * (&mu - BigRational::one()),
        "σ² must equal E[f²] − E[f]²"
    );
    Ok(MomentSet {
        h,
        mu,
        sigma2,
        e_fii_sq,
    })
}

/// Convert a big rational to `f64` without overflowing on huge numerators or
/// denominators: the quotient is computed to ~80 bits first, then scaled.
pub fn rational_to_f64(q: &ExactScalar) -> f64 {
    if q.numer().is_zero() {
        return 0.0;
    }
    let negative = q.numer().sign() == Sign::Minus;
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let shift: i64 = 80 - num.bits() as i64 + den.bits() as i64;
    let t: BigUint = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mag = t.to_f64().unwrap_or(f64::INFINITY) * (-shift as f64).exp2();
    if negative {
        -mag
    } else {
        mag
    }
}

/// Render a rational with `sig` significant decimal digits.
///
/// Values with decimal exponent in [−4, sig + 3] print in plain positional
/// form; everything else uses `d.dd...e±E`.
pub fn to_decimal_sig(q: &ExactScalar, sig: usize) -> String {
    assert!(sig >= 1);
    if q.numer().is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.numer().abs();
    let b = q.denom().clone();
    // Decimal exponent e10: 10^e10 ≤ a/b < 10^(e10+1).
    let mut e10 = a.to_string().len() as i64 - b.to_string().len() as i64;
    let ten = BigInt::from(10);
    loop {
        // a/b < 10^e10 ?
        let lhs = if e10 >= 0 {
            a.clone()
        } else {
            &a * ten.pow((-e10) as u32)
        };
        let rhs = if e10 >= 0 {
            &b * ten.pow(e10 as u32)
        } else {
            b.clone()
        };
        if lhs < rhs {
            e10 -= 1;
        } else if {
            let lhs2 = if e10 + 1 >= 0 {
                a.clone()
            } else {
                &a * ten.pow((-(e10 + 1)) as u32)
            };
            let rhs2 = if e10 + 1 >= 0 {
                &b * ten.pow((e10 + 1) as u32)
            } else {
                b.clone()
            };
            lhs2 >= rhs2
        } {
            e10 += 1;
        } else {
            break;
        }
    }
    // Round a/b · 10^(sig-1-e10) to the nearest integer: the digit string.
    let s = sig as i64 - 1 - e10;
    let (num_sc, den_sc) = if s >= 0 {
        (&a * ten.pow(s as u32), b.clone())
    } else {
        (a.clone(), &b * ten.pow((-s) as u32))
    };
    let two = BigInt::from(2);
    let mut digits: BigInt = (&num_sc * &two + &den_sc) / (&den_sc * &two); // round half up
    let mut digits_str = digits.to_string();
    if digits_str.len() > sig {
        // Rounding carried into a new leading digit (e.g. 9.99 → 10.0).
        e10 += 1;
        digits = (&digits + 5) / 10;
        digits_str = digits.to_string();
        digits_str.truncate(sig);
    }
    let mantissa_digits = digits_str;
    let body = if (-4..sig as i64).contains(&e10) {
        if e10 >= 0 {
            let ip_len = e10 as usize + 1;
            let int_part = &mantissa_digits[..ip_len];
            let frac = &mantissa_digits[ip_len..];
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-e10 - 1) as usize);
            format!("0.{zeros}{mantissa_digits}")
        }
    } else {
        let (first, rest) = mantissa_digits.split_at(1);
        if rest.is_empty() {
            format!("{first}e{e10}")
        } else {
            format!("{first}.{rest}e{e10}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
