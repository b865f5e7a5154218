//! Certified enclosures of ln C(2m, m) and of μ(h).
//!
//! The central binomial coefficient has the convergent-looking expansion
//!
//! ```text
//! ln C(2m, m) = m·ln4 − ln(πm)/2 − Σ_{j=1}^{k−1} B_2j(1−4^−j)/(j(2j−1)) · m^(1−2j) + e_k(m)
//! ```
//!
//! with the truncation error bounded by |e_k(m)| < |B_2k|/(k(2k−1)) · m^(1−2k).
//! Everything but the two logarithms is exact rational arithmetic, so the
//! returned [`Interval`] is a true enclosure: the exact value of ln C(2m, m)
//! always lies inside it. The same error bound feeds the interval form of
//! μ(h) and the verified inequalities √(2h/π) + 0.9 < μ(h) < √(2h/π) + 1 and
//! 0 < σ²(h) < 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{exp_interval, ln2, ln_bigint, ln_interval, pi, Fixed, Interval};
use crate::moments::{binomial, mu_exact, sigma2_exact, ExactScalar};

/// Largest even Bernoulli index served by [`bernoulli`].
pub const MAX_BERNOULLI_INDEX: u64 = 40;

/// Exact Bernoulli numbers B_0, B_2, B_4, ... up to a fixed even index.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    /// values[j] = B_{2j}.
    values: Vec<ExactScalar>,
}

impl BernoulliCache {
    /// Compute B_0 .. B_max (even indices) by the defining recurrence
    /// Σ_{k=0}^{m} C(m+1, k)·B_k = 0, with B_1 = −1/2.
    pub fn new(max_even_index: u64) -> Self {
        let top = max_even_index as usize;
        let mut all: Vec<ExactScalar> = Vec::with_capacity(top + 1);
        all.push(BigRational::one());
        for m in 1..=top {
            // B_m = −1/(m+1) · Σ_{k<m} C(m+1, k) B_k
            let mut acc = BigRational::zero();
            for (k, b) in all.iter().enumerate() {
                acc += BigRational::from_integer(binomial(m as u64 + 1, k as i64)) * b;
            }
            all.push(-acc / BigRational::from_integer(BigInt::from(m as i64 + 1)));
        }
        let values = all.into_iter().step_by(2).collect();
        BernoulliCache { values }
    }

    /// B_{2j}, if cached.
    pub fn even(&self, j: usize) -> Option<&ExactScalar> {
        self.values.get(j)
    }
}

fn shared_cache() -> &'static BernoulliCache {
    static CACHE: std::sync::OnceLock<BernoulliCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| BernoulliCache::new(MAX_BERNOULLI_INDEX))
}

/// Exact Bernoulli number B_{two_j} for even two_j ≤ 40.
pub fn bernoulli(two_j: u64) -> Result<ExactScalar> {
    if two_j % 2 != 0 {
        return Err(Error::ParamRange(format!("Bernoulli index {two_j} is odd")));
    }
    if two_j > MAX_BERNOULLI_INDEX {
        return Err(Error::ParamRange(format!(
            "Bernoulli index {two_j} exceeds {MAX_BERNOULLI_INDEX}"
        )));
    }
    Ok(shared_cache().even((two_j / 2) as usize).unwrap().clone())
}

/// Exact rational m^(1−2j) = 1/m^(2j−1).
fn m_power(m: u64, j: u32) -> ExactScalar {
    BigRational::new(BigInt::one(), BigInt::from(m).pow(2 * j - 1))
}

/// The exact-rational truncation bound |B_2k|/(k(2k−1)) · m^(1−2k).
fn error_bound(m: u64, k: u32) -> ExactScalar {
    let b2k = shared_cache().even(k as usize).unwrap().abs();
    b2k / BigRational::from_integer(BigInt::from(k as u64 * (2 * k as u64 - 1))) * m_power(m, k)
}

/// Certified enclosure of ln C(2m, m) using k series terms (1 ≤ k ≤ 10).
pub fn ln_central_binomial(m: u64, k: u32) -> Result<Interval> {
    if m < 1 {
        return Err(Error::ParamRange("m must be ≥ 1".into()));
    }
    if !(1..=10).contains(&k) {
        return Err(Error::ParamRange(format!("k = {k} outside 1..=10")));
    }
    // Exact part of the partial sum: Σ_{j=1}^{k−1} B_2j(1−4^−j)/(j(2j−1))·m^(1−2j).
    let mut tail = BigRational::zero();
    for j in 1..k {
        let b = shared_cache().even(j as usize).unwrap();
        let four_pow = BigRational::new(BigInt::one(), BigInt::from(4).pow(j));
        let coeff = b * (BigRational::one() - four_pow)
            / BigRational::from_integer(BigInt::from(j as u64 * (2 * j as u64 - 1)));
        tail += coeff * m_power(m, j);
    }
    let m_ln4 = ln2().mul_int(2 * m as i64);
    let ln_pi_m = ln_interval(&pi().mul_int(m as i64));
    let s = m_ln4
        .sub(&ln_pi_m.div_int(2))
        .sub(&Interval::from_rational(&tail));
    let e = Fixed::from_rational_up(&error_bound(m, k));
    Ok(Interval::new(&s.lo - &e, &s.hi + &e))
}

/// Certified enclosure of μ(h) = 1 + exp(ln h − h·ln2 + ln C(h/2, h/4)·…),
/// evaluated through the series rather than the exact binomial.
pub fn mu_interval(h: u64, k: u32) -> Result<Interval> {
    if h < 4 || h % 4 != 0 {
        return Err(Error::InvalidOrder(h));
    }
    let ln_c = ln_central_binomial(h / 2, k)?;
    let exponent = ln_bigint(&BigInt::from(h))
        .sub(&ln2().mul_int(h as i64))
        .add(&ln_c);
    Ok(exp_interval(&exponent).add(&Interval::from_int(1)))
}

/// One row of the μ/σ² inequality scan.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub h_max: u64,
    pub checked: u64,
    /// First order where a required inequality could not be certified.
    pub first_violation: Option<u64>,
}

/// Verify, for every h ≡ 0 (mod 4) up to h_max, that
/// √(2h/π) + 0.9 < μ(h) < √(2h/π) + 1 and 0 < σ²(h) < 1,
/// comparing exact rationals against certified enclosures of √(2h/π).
pub fn check_mu_sigma_inequalities(h_max: u64) -> Result<InequalityReport> {
    if h_max < 4 {
        return Err(Error::ParamRange("h_max must be ≥ 4".into()));
    }
    let nine_tenths = BigRational::new(BigInt::from(9), BigInt::from(10));
    let mut checked = 0;
    for h in (4..=h_max).step_by(4) {
        let mu = mu_exact(h)?;
        let s2 = sigma2_exact(h)?;
        let root = Interval::from_int(2 * h as i64).div(pi()).sqrt();
        let lower_ok = root.hi.to_rational() + &nine_tenths < mu;
        let upper_ok = mu < root.lo.to_rational() + BigRational::one();
        let sigma_ok = s2 > BigRational::zero() && s2 < BigRational::one();
        if !(lower_ok && upper_ok && sigma_ok) {
            return Ok(InequalityReport {
                h_max,
                checked,
                first_violation: Some(h),
            });
        }
        checked += 1;
    }
    Ok(InequalityReport {
        h_max,
        checked,
        first_violation: None,
    })
}

/// One row of the ln C(2m, m) containment scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentRow {
    pub m: u64,
    pub k: u32,
    pub lo: f64,
    pub exact: f64,
    pub hi: f64,
    pub pass: bool,
}

/// Check, for m = 1..=m_max, that the certified enclosure of ln C(2m, m)
/// contains the independently computed big-integer logarithm.
pub fn containment_scan(m_max: u64, k: u32) -> Result<Vec<ContainmentRow>> {
    let mut rows = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let series = ln_central_binomial(m, k)?;
        let exact = ln_bigint(&binomial(2 * m, m as i64));
        let pass = series.contains(&exact);
        rows.push(ContainmentRow {
            m,
            k,
            lo: series.lo.to_f64(),
            exact: exact.midpoint_f64(),
            hi: series.hi.to_f64(),
            pass,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExactScalar {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_table_values() {
        assert_eq!(bernoulli(0).unwrap(), rat(1, 1));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), rat(1, 42));
        assert_eq!(bernoulli(8).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(42).is_err());
    }

    #[test]
    fn bernoulli_sign_alternates() {
        for j in 1..=20u64 {
            let b = bernoulli(2 * j).unwrap();
            let expect_positive = j % 2 == 1;
            assert_eq!(b.is_positive(), expect_positive, "sign of B_{}", 2 * j);
        }
    }

    #[test]
    fn series_encloses_small_exact_logs() {
        // m = 1, k = 1: C(2,1) = 2.
        let i = ln_central_binomial(1, 1).unwrap();
        assert!(i.contains(&ln_bigint(&BigInt::from(2))));
        // m = 2, k = 2: C(4,2) = 6, ln 6 ≈ 1.791759.
        let i = ln_central_binomial(2, 2).unwrap();
        assert!(i.contains(&ln_bigint(&BigInt::from(6))));
        assert!((i.midpoint_f64() - 6f64.ln()).abs() < 1e-2);
    }

    #[test]
    fn series_encloses_binomial_996() {
        let i = ln_central_binomial(498, 3).unwrap();
        let exact = ln_bigint(&binomial(996, 498));
        assert!(i.contains(&exact));
    }

    #[test]
    fn containment_holds_through_m_60_all_k() {
        for k in 1..=5 {
            let rows = containment_scan(60, k).unwrap();
            assert!(rows.iter().all(|r| r.pass), "containment failed at k = {k}");
        }
    }

    #[test]
    fn observed_error_respects_bound_and_sign() {
        // e_k(m) must stay inside the stated bound, and (empirically) carry
        // the sign of the first omitted series term. At m = 300 the error is
        // ~1e-16 relative to ln C(2m, m), far below f64 resolution, so the
        // comparison runs in fixed point. The enclosure is widened
        // symmetrically, so its midpoint recovers the series value.
        for m in [2u64, 10, 50, 300] {
            for k in 1..=4u32 {
                let exact = ln_bigint(&binomial(2 * m, m as i64));
                let enclosure = ln_central_binomial(m, k).unwrap();
                let center = (&enclosure.lo + &enclosure.hi).scale_pow2(-1, false);
                let e_obs = exact.sub(&Interval::point(center));
                let bound = error_bound(m, k);
                assert!(
                    e_obs.hi.to_rational() < bound && e_obs.lo.to_rational() > -&bound,
                    "bound at m={m} k={k}"
                );
                // Sign of the omitted j = k term: −B_2k(1−4^−k)/(k(2k−1))·m^(1−2k).
                let b2k = bernoulli(2 * k as u64).unwrap();
                let omitted_positive = b2k.is_negative();
                if omitted_positive {
                    assert!(e_obs.lo.is_positive(), "sign at m={m} k={k}");
                } else {
                    assert!(e_obs.hi.is_negative(), "sign at m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn mu_interval_contains_exact_values() {
        let i4 = mu_interval(4, 3).unwrap();
        assert!(i4.contains_rational(&rat(5, 2)));
        let i996 = mu_interval(996, 3).unwrap();
        assert!(i996.contains_rational(&mu_exact(996).unwrap()));
        assert!(mu_interval(6, 3).is_err());
    }

    #[test]
    fn mu_interval_width_shrinks_with_more_terms() {
        let w2 = mu_interval(100, 2).unwrap().width();
        let w4 = mu_interval(100, 4).unwrap().width();
        assert!(w4 <= w2);
    }

    #[test]
    fn inequalities_hold_to_64() {
        let report = check_mu_sigma_inequalities(64).unwrap();
        assert_eq!(report.first_violation, None);
        assert_eq!(report.checked, 16);
        assert!(check_mu_sigma_inequalities(2).is_err());
    }

    #[test]
    fn mu_bracket_at_h4_is_tight() {
        // √(8/π) ≈ 1.5958: the window (2.4958, 2.5958) must pin μ(4) = 5/2.
        let root = Interval::from_int(8).div(pi()).sqrt();
        let mu = rat(5, 2);
        assert!(root.hi.to_rational() + rat(9, 10) < mu);
        assert!(mu < root.lo.to_rational() + BigRational::one());
    }
}
