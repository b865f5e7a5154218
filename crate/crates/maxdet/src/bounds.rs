//! Closed-form lower bounds on D̄(n) and R(n) in log-domain arithmetic.
//!
//! Quantities like h^(h/2), n^(n/2), and the determinant bounds they bracket
//! overflow any machine float long before n = 998, so every magnitude lives
//! as a [`LogScalar`]: a sign plus a certified interval around the natural
//! log of the absolute value. Exact rationals (μ, binomials, integer powers)
//! are converted to log form exactly once, through the certified big-integer
//! logarithm, and only the final ratios collapse to `f64` for display.
//!
//! The bound families:
//!
//! - `chebyshev_*`: the probabilistic bordering bound
//!   D̄(n) ≥ h^(h/2)·μ^d·(1 − d²/μ) and its simplified ratio form
//!   (2/πe)^(d/2)·(1 − d²√(π/2h)), nontrivial iff h > πd⁴/2.
//! - `small_gap_*`: for d ≤ 3, D̄(n) ≥ h^(h/2)·(μ^d − η) with η = d − 1
//!   (d ≤ 2) or 5√h + 3 (d = 3), and R(n) > (2/πe)^(d/2).
//! - `kms_*`: the minors-based comparison bounds, one variant per residue
//!   class of n mod 4 (the d = 2 form is reconstructed and labeled as such).
//! - `bordering` / `bo_asymptotic`: the deterministic bordering comparison,
//!   2^d·h^(h/2)/n^(n/2), and its d = 2 asymptotic (8/(πe²n))^(1/2).
//! - `minors`: R(n) ≥ 16·h₊^(h₊/2 − 4)/n^(n/2) from a larger core h₊ ≥ n.
//! - `classic`: (3/4)^(n/2) and (ne/4)^(−d/2).

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hadamard::OrderRegistry;
use crate::interval::{exp_interval, ln_bigint, ln_interval, ln_rational, pi, Interval};
use crate::moments::{mu_exact, ExactScalar};

/// A signed magnitude in log space: sign ∈ {−1, 0, +1} and a certified
/// enclosure of ln|x| (ignored when the sign is 0).
#[derive(Debug, Clone)]
pub struct LogScalar {
    sign: i8,
    ln_mag: Interval,
}

impl LogScalar {
    pub fn zero() -> Self {
        LogScalar {
            sign: 0,
            ln_mag: Interval::zero(),
        }
    }

    pub fn from_parts(sign: i8, ln_mag: Interval) -> Self {
        assert!((-1..=1).contains(&sign));
        LogScalar { sign, ln_mag }
    }

    /// Exact rational → log form, certified by the big-integer logarithm.
    pub fn from_rational(q: &ExactScalar) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let sign = if q.is_positive() { 1 } else { -1 };
        LogScalar {
            sign,
            ln_mag: ln_rational(&q.abs()),
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let sign = if v.is_positive() { 1 } else { -1 };
        LogScalar {
            sign,
            ln_mag: ln_bigint(&v.abs()),
        }
    }

    /// Signed value from an interval enclosure of the quantity itself
    /// (not of its log). Sign 0 when the enclosure straddles zero.
    pub fn from_value_interval(v: &Interval) -> Self {
        if v.lo.is_positive() {
            LogScalar {
                sign: 1,
                ln_mag: ln_interval(v),
            }
        } else if v.hi.is_negative() {
            LogScalar {
                sign: -1,
                ln_mag: ln_interval(&v.neg()),
            }
        } else {
            Self::zero()
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_mag(&self) -> &Interval {
        &self.ln_mag
    }

    pub fn ln_mag_f64(&self) -> f64 {
        self.ln_mag.midpoint_f64()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        LogScalar {
            sign: self.sign * other.sign,
            ln_mag: self.ln_mag.add(&other.ln_mag),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(other.sign != 0, "division by a zero log scalar");
        if self.sign == 0 {
            return Self::zero();
        }
        LogScalar {
            sign: self.sign * other.sign,
            ln_mag: self.ln_mag.sub(&other.ln_mag),
        }
    }

    /// Certain comparison; `None` when the log enclosures overlap.
    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.sign, other.sign) {
            (0, 0) => Some(Ordering::Equal),
            (a, b) if a < b => Some(Ordering::Less),
            (a, b) if a > b => Some(Ordering::Greater),
            (1, 1) => self.ln_mag.try_cmp(&other.ln_mag),
            (-1, -1) => other.ln_mag.try_cmp(&self.ln_mag),
            _ => unreachable!(),
        }
    }

    /// self / other collapsed to `f64` (signs included).
    pub fn ratio_f64(&self, other: &Self) -> f64 {
        assert!(other.sign > 0, "ratio denominator must be positive");
        if self.sign == 0 {
            return 0.0;
        }
        let r = exp_interval(&self.ln_mag.sub(&other.ln_mag)).midpoint_f64();
        self.sign as f64 * r
    }

    /// Scientific-notation rendering with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.sign == 0 {
            return "0".to_string();
        }
        let l10 = self.ln_mag.midpoint_f64() / std::f64::consts::LN_10;
        let mut e = l10.floor() as i64;
        let mut mant = 10f64.powf(l10 - e as f64);
        // Carry if display rounding pushes the mantissa to 10.
        let scale = 10f64.powi(sig as i32 - 1);
        if (mant * scale).round() >= scale * 10.0 {
            mant /= 10.0;
            e += 1;
        }
        let body = format!("{:.*}e{}", sig - 1, mant, e);
        if self.sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// ln(n^(n/2)) as a certified interval.
pub fn ln_half_power(n: u64) -> Interval {
    ln_bigint(&BigInt::from(n)).mul_int(n as i64).div_int(2)
}

/// n^(n/2) as a log scalar.
pub fn half_power(n: u64) -> LogScalar {
    LogScalar {
        sign: 1,
        ln_mag: ln_half_power(n),
    }
}

/// R = dbar / n^(n/2) when the bound is positive; `None` (a dash) otherwise.
pub fn r_from_dbar(dbar: &LogScalar, n: u64) -> Option<f64> {
    (dbar.sign() > 0).then(|| dbar.ratio_f64(&half_power(n)))
}

fn e_const() -> &'static Interval {
    static E: OnceLock<Interval> = OnceLock::new();
    E.get_or_init(|| exp_interval(&Interval::from_int(1)))
}

/// 2/(πe) as a certified interval (≈ 0.2342).
pub fn two_over_pi_e() -> &'static Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    C.get_or_init(|| Interval::from_int(2).div(&pi().mul(e_const())))
}

fn bigint_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// h^(h/2) as an exact rational (h = 1 or h even).
fn half_power_exact(h: u64) -> Result<ExactScalar> {
    if h == 1 {
        return Ok(BigRational::one());
    }
    if h % 2 != 0 {
        return Err(Error::InvalidOrder(h));
    }
    Ok(BigRational::from_integer(bigint_pow(h, h / 2)))
}

/// (2/πe)^(d/2) as a certified interval, any d ≥ 1.
pub fn ratio_const_interval(d: u64) -> Interval {
    let c = two_over_pi_e();
    let mut acc = Interval::from_int(1);
    for _ in 0..d / 2 {
        acc = acc.mul(c);
    }
    if d % 2 == 1 {
        acc = acc.mul(&c.sqrt());
    }
    acc
}

/// The conjectured target (2/πe)^(d/2) as a plain real.
pub fn conjectured_r(d: u64) -> f64 {
    ratio_const_interval(d).midpoint_f64()
}

/// Exact rational form of the probabilistic-bordering bound,
/// h^(h/2)·μ^d·(1 − d²/μ). Negative or zero when d² ≥ μ(h).
pub fn chebyshev_dbar_exact(h: u64, d: u64) -> Result<ExactScalar> {
    if d < 1 {
        return Err(Error::ParamRange("gap d must be ≥ 1".into()));
    }
    if h < 4 || h % 4 != 0 {
        return Err(Error::InvalidOrder(h));
    }
    let mu = mu_exact(h)?;
    let mut mu_pow = BigRational::one();
    for _ in 0..d {
        mu_pow *= &mu;
    }
    let factor = BigRational::one() - BigRational::from_integer(BigInt::from((d * d) as i64)) / &mu;
    Ok(half_power_exact(h)? * mu_pow * factor)
}

/// Probabilistic-bordering bound on D̄(n): h^(h/2)·μ^d·(1 − d²/μ).
///
/// Computed as one exact rational, then moved to log form. The sign goes
/// nonpositive when d² ≥ μ(h); such bounds are trivial and render as dashes.
pub fn chebyshev_dbar(h: u64, d: u64) -> Result<LogScalar> {
    Ok(LogScalar::from_rational(&chebyshev_dbar_exact(h, d)?))
}

/// The sharp ratio form: h^(h/2)·μ^d·(1 − d²/μ) / n^(n/2), n = h + d.
/// Signed: a trivial (nonpositive) bound comes back as a value ≤ 0.
pub fn chebyshev_r(h: u64, d: u64) -> Result<f64> {
    let dbar = chebyshev_dbar(h, d)?;
    if dbar.sign() == 0 {
        return Ok(0.0);
    }
    Ok(dbar.ratio_f64(&half_power(h + d)))
}

/// The simplified asymptotic ratio: (2/πe)^(d/2)·(1 − d²·√(π/2h)).
/// May be ≤ 0; it is positive exactly when h > πd⁴/2.
pub fn chebyshev_r_asymptotic(h: u64, d: u64) -> Result<f64> {
    if h < 4 || h % 4 != 0 {
        return Err(Error::InvalidOrder(h));
    }
    Ok(chebyshev_r_asymptotic_interval(h, d).midpoint_f64())
}

fn chebyshev_r_asymptotic_interval(h: u64, d: u64) -> Interval {
    let lead = ratio_const_interval(d);
    let root = pi().div(&Interval::from_int(2 * h as i64)).sqrt();
    let second = Interval::from_int(1).sub(&root.mul_int((d * d) as i64));
    lead.mul(&second)
}

/// Certified positivity of the simplified ratio, paired with the algebraic
/// threshold h > πd⁴/2 (equivalently 2h/d⁴ > π). The two must agree.
pub fn chebyshev_positivity(h: u64, d: u64) -> (bool, bool) {
    let iv = chebyshev_r_asymptotic_interval(h, d);
    let positive = iv.lo.is_positive();
    let negative = iv.hi.is_negative();
    assert!(positive || negative, "positivity undecided at h={h}, d={d}");
    let threshold = BigRational::new(BigInt::from(2 * h), BigInt::from(d).pow(4));
    let above = pi().certainly_lt_rational(&threshold);
    let below = pi().certainly_gt_rational(&threshold);
    assert!(
        above || below,
        "threshold comparison undecided at h={h}, d={d}"
    );
    (positive, above)
}

/// Exact rational form of the small-gap bound for d ≤ 2 (where η = d − 1
/// keeps everything rational): h^(h/2)·(μ^d − η).
pub fn small_gap_dbar_exact(h: u64, d: u64) -> Result<ExactScalar> {
    if !(1..=2).contains(&d) {
        return Err(Error::ParamRange(format!(
            "exact small-gap form needs d ≤ 2, got {d}"
        )));
    }
    let mu = mu_exact(h)?;
    let mut mu_pow = BigRational::one();
    for _ in 0..d {
        mu_pow *= &mu;
    }
    let eta = BigRational::from_integer(BigInt::from((d - 1) as i64));
    Ok(half_power_exact(h)? * (mu_pow - eta))
}

/// Small-gap bound on D̄(n): h^(h/2)·(μ^d − η) for 1 ≤ d ≤ 3,
/// η = d − 1 if d ≤ 2, else 5√h + 3. Accepts the degenerate orders
/// h ∈ {1, 2} (where μ = 2 exactly).
pub fn small_gap_dbar(h: u64, d: u64) -> Result<LogScalar> {
    if !(1..=3).contains(&d) {
        return Err(Error::ParamRange(format!(
            "small-gap bound needs d ≤ 3, got {d}"
        )));
    }
    if d <= 2 {
        return Ok(LogScalar::from_rational(&small_gap_dbar_exact(h, d)?));
    }
    let mu = mu_exact(h)?;
    let mut mu_pow = BigRational::one();
    for _ in 0..d {
        mu_pow *= &mu;
    }
    // d = 3: η = 5√h + 3 is irrational; assemble in interval space.
    let eta = Interval::from_int(h as i64)
        .sqrt()
        .mul_int(5)
        .add(&Interval::from_int(3));
    let diff = Interval::from_rational(&mu_pow).sub(&eta);
    let ln_lead = ln_bigint(&BigInt::from(h)).mul_int(h as i64).div_int(2);
    let signed = LogScalar::from_value_interval(&diff);
    Ok(LogScalar::from_parts(
        signed.sign(),
        ln_lead.add(signed.ln_mag()),
    ))
}

/// Small-gap ratio constant (2/πe)^(d/2), d ≤ 3.
pub fn small_gap_r_const(d: u64) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::ParamRange(format!(
            "constant defined for d ≤ 3, got {d}"
        )));
    }
    Ok(conjectured_r(d))
}

/// Identifies which bound produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Probabilistic bordering, sharp form.
    Chebyshev,
    /// Probabilistic bordering, simplified asymptotic ratio.
    ChebyshevAsymptotic,
    /// Small-gap (d ≤ 3) expected-determinant bound.
    SmallGap,
    /// Minors-based comparison bound (d = 3 exact form).
    Kms,
    /// Deterministic bordering 2^d·h^(h/2)/n^(n/2).
    Bordering,
    /// Bordering asymptotic (8/πe²n)^(1/2) for d = 2.
    BoAsymptotic,
    /// 16·h₊^(h₊/2−4)/n^(n/2) from a larger core.
    Minors,
    /// (3/4)^(n/2).
    ClementsLindstrom,
    /// (ne/4)^(−d/2).
    BoGeneral,
    /// The conjectured target (2/πe)^(d/2).
    Conjectured,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Chebyshev,
        Method::ChebyshevAsymptotic,
        Method::SmallGap,
        Method::Kms,
        Method::Bordering,
        Method::BoAsymptotic,
        Method::Minors,
        Method::ClementsLindstrom,
        Method::BoGeneral,
        Method::Conjectured,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Chebyshev => "chebyshev",
            Method::ChebyshevAsymptotic => "chebyshev-asymptotic",
            Method::SmallGap => "small-gap",
            Method::Kms => "kms",
            Method::Bordering => "bordering",
            Method::BoAsymptotic => "bo-asymptotic",
            Method::Minors => "minors",
            Method::ClementsLindstrom => "clements-lindstrom",
            Method::BoGeneral => "bo-general",
            Method::Conjectured => "conjectured",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::ParamRange(format!("unknown method '{s}'")))
    }
}

/// One bound evaluation at one n.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u64,
    pub h: u64,
    pub d: u64,
    /// Method label. The reconstructed d = 2 comparison form and the d = 1
    /// asymptotic carry their own labels.
    pub method: String,
    /// Absent for ratio-only methods.
    pub dbar_bound: Option<LogScalar>,
    /// The ratio bound; `None` marks a trivial (≤ 0) bound, the table dash.
    pub r_bound: Option<f64>,
}

/// The minors-based comparison bound, one formula per residue class:
/// d = 3 (n ≡ 1 mod 4 complement): D̄(n) ≥ (n+1)^((n−1)/2) with n+1 ∈ 𝓗;
/// d = 2: the reconstructed D̄(n) ≥ 2·(n+2)^((n+2)/2 − 2) with n+2 ∈ 𝓗;
/// d = 1: ratio-only asymptotic 4(e/n)^(3/2).
pub fn kms_bound(n: u64, reg: &OrderRegistry) -> Result<BoundReport> {
    let (h, d) = reg.resolve_gap(n)?;
    match n % 4 {
        1 => {
            if !reg.contains(n - 1) {
                return Err(Error::ParamRange(format!("order {} not registered", n - 1)));
            }
            let r = Interval::from_int(4)
                .mul(&exp_interval(
                    &ln_interval(&e_const().div(&Interval::from_int(n as i64)))
                        .mul_int(3)
                        .div_int(2),
                ))
                .midpoint_f64();
            Ok(BoundReport {
                n,
                h,
                d,
                method: "kms-asymptotic".into(),
                dbar_bound: None,
                r_bound: Some(r),
            })
        }
        2 => {
            let m = n + 2;
            if !reg.contains(m) {
                return Err(Error::ParamRange(format!("order {m} not registered")));
            }
            let dbar = BigInt::from(2) * bigint_pow(m, m / 2 - 2);
            let log = LogScalar::from_bigint(&dbar);
            let r = r_from_dbar(&log, n);
            Ok(BoundReport {
                n,
                h,
                d,
                method: "kms-reconstructed".into(),
                dbar_bound: Some(log),
                r_bound: r,
            })
        }
        3 => {
            if !reg.contains(n + 1) {
                return Err(Error::ParamRange(format!("order {} not registered", n + 1)));
            }
            let dbar = bigint_pow(n + 1, (n - 1) / 2);
            let log = LogScalar::from_bigint(&dbar);
            let r = r_from_dbar(&log, n);
            Ok(BoundReport {
                n,
                h,
                d,
                method: Method::Kms.as_str().into(),
                dbar_bound: Some(log),
                r_bound: r,
            })
        }
        _ => Err(Error::ParamRange(format!("n = {n} is itself ≡ 0 mod 4"))),
    }
}

/// Deterministic bordering: D̄(n) ≥ 2^d·h^(h/2), so
/// R(n) ≥ 2^d·h^(h/2)/n^(n/2). For d = 2 the report instead carries the
/// asymptotic form (8/(πe²n))^(1/2), which is what the comparison table
/// tabulates.
pub fn bo_bound(n: u64, h: u64) -> Result<BoundReport> {
    if h > n || h % 2 != 0 && h != 1 {
        return Err(Error::ParamRange(format!(
            "core order {h} unusable for n = {n}"
        )));
    }
    let d = n - h;
    if d == 2 {
        return Ok(bo_asymptotic(n));
    }
    bordering_bound(n, h)
}

/// The exact deterministic-bordering report at any gap.
pub fn bordering_bound(n: u64, h: u64) -> Result<BoundReport> {
    if h > n {
        return Err(Error::ParamRange(format!("core order {h} exceeds n = {n}")));
    }
    let d = n - h;
    // 2^d · h^(h/2) (h = 1 gives 2^d).
    let dbar = BigRational::from_integer(BigInt::one() << d as usize) * half_power_exact(h)?;
    let log = LogScalar::from_rational(&dbar);
    let r = r_from_dbar(&log, n);
    Ok(BoundReport {
        n,
        h,
        d,
        method: Method::Bordering.as_str().into(),
        dbar_bound: Some(log),
        r_bound: r,
    })
}

/// The d = 2 bordering asymptotic (8/(πe²n))^(1/2) ≈ 0.5871/√n.
pub fn bo_asymptotic(n: u64) -> BoundReport {
    let inner = Interval::from_int(8).div(
        &pi()
            .mul(&e_const().mul(e_const()))
            .mul(&Interval::from_int(n as i64)),
    );
    let r = inner.sqrt().midpoint_f64();
    BoundReport {
        n,
        h: n.saturating_sub(2),
        d: 2,
        method: Method::BoAsymptotic.as_str().into(),
        dbar_bound: None,
        r_bound: Some(r),
    }
}

/// Minors bound from a larger core h₊ ≥ n: R(n) ≥ 16·h₊^(h₊/2 − 4)/n^(n/2).
pub fn minors_bound(n: u64, h_plus: u64, reg: &OrderRegistry) -> Result<BoundReport> {
    if h_plus < n {
        return Err(Error::ParamRange(format!("h₊ = {h_plus} is below n = {n}")));
    }
    if !reg.contains(h_plus) {
        return Err(Error::ParamRange(format!("order {h_plus} not registered")));
    }
    if h_plus % 2 != 0 || h_plus / 2 < 4 {
        return Err(Error::ParamRange(format!(
            "h₊ = {h_plus} too small for the minors form"
        )));
    }
    let dbar = BigInt::from(16) * bigint_pow(h_plus, h_plus / 2 - 4);
    let log = LogScalar::from_bigint(&dbar);
    let r = r_from_dbar(&log, n);
    let (h, d) = reg.resolve_gap(n)?;
    Ok(BoundReport {
        n,
        h,
        d,
        method: Method::Minors.as_str().into(),
        dbar_bound: Some(log),
        r_bound: r,
    })
}

/// The two classical comparison ratios: (3/4)^(n/2) and (ne/4)^(−d/2).
pub fn classic_bounds(n: u64, d: u64) -> Vec<BoundReport> {
    let cl = exp_interval(
        &ln_rational(&BigRational::new(BigInt::from(3), BigInt::from(4)))
            .mul_int(n as i64)
            .div_int(2),
    )
    .midpoint_f64();
    let bo_general = exp_interval(
        &ln_interval(
            &Interval::from_int(n as i64)
                .mul(e_const())
                .div(&Interval::from_int(4)),
        )
        .mul_int(-(d as i64))
        .div_int(2),
    )
    .midpoint_f64();
    let h = n - d;
    vec![
        BoundReport {
            n,
            h,
            d,
            method: Method::ClementsLindstrom.as_str().into(),
            dbar_bound: None,
            r_bound: Some(cl),
        },
        BoundReport {
            n,
            h,
            d,
            method: Method::BoGeneral.as_str().into(),
            dbar_bound: None,
            r_bound: Some(bo_general),
        },
    ]
}

/// Certified check of (h/n)^n > exp(−d − d²/h) for n = h + d.
pub fn hn_inequality_check(h: u64, d: u64) -> bool {
    assert!(h >= 1 && d >= 1);
    let n = h + d;
    // n·ln(h/n) > −(d + d²/h), left side certified, right side exact.
    let lhs = ln_bigint(&BigInt::from(h))
        .sub(&ln_bigint(&BigInt::from(n)))
        .mul_int(n as i64);
    let rhs = -(BigRational::from_integer(BigInt::from(d))
        + BigRational::new(BigInt::from(d * d), BigInt::from(h)));
    lhs.certainly_gt_rational(&rhs)
}

/// Scan the (h, d) grid; returns the first violating pair, expected `None`.
pub fn hn_scan(h_max: u64, d_max: u64) -> Option<(u64, u64)> {
    for h in 1..=h_max {
        for d in 1..=d_max {
            if !hn_inequality_check(h, d) {
                return Some((h, d));
            }
        }
    }
    None
}

/// Assemble one report for (n, method) against a registry.
pub fn bound_for(n: u64, method: Method, reg: &OrderRegistry) -> Result<BoundReport> {
    let (h, d) = reg.resolve_gap(n)?;
    match method {
        Method::Chebyshev => {
            let dbar = chebyshev_dbar(h, d)?;
            let r = r_from_dbar(&dbar, n);
            Ok(BoundReport {
                n,
                h,
                d,
                method: method.as_str().into(),
                dbar_bound: Some(dbar),
                r_bound: r,
            })
        }
        Method::ChebyshevAsymptotic => {
            let r = chebyshev_r_asymptotic(h, d)?;
            Ok(BoundReport {
                n,
                h,
                d,
                method: method.as_str().into(),
                dbar_bound: None,
                r_bound: (r > 0.0).then_some(r),
            })
        }
        Method::SmallGap => {
            let dbar = small_gap_dbar(h, d)?;
            let r = r_from_dbar(&dbar, n);
            Ok(BoundReport {
                n,
                h,
                d,
                method: method.as_str().into(),
                dbar_bound: Some(dbar),
                r_bound: r,
            })
        }
        Method::Kms => kms_bound(n, reg),
        Method::Bordering => bordering_bound(n, h),
        Method::BoAsymptotic => {
            if d != 2 {
                return Err(Error::ParamRange(
                    "asymptotic form is the d = 2 case".into(),
                ));
            }
            Ok(bo_asymptotic(n))
        }
        Method::Minors => {
            let h_plus = reg
                .next_order_at_least(n)
                .ok_or_else(|| Error::ParamRange(format!("no registered order ≥ {n}")))?;
            minors_bound(n, h_plus, reg)
        }
        Method::ClementsLindstrom => Ok(classic_bounds(n, d).swap_remove(0)),
        Method::BoGeneral => Ok(classic_bounds(n, d).swap_remove(1)),
        Method::Conjectured => Ok(BoundReport {
            n,
            h,
            d,
            method: method.as_str().into(),
            dbar_bound: None,
            r_bound: Some(conjectured_r(d)),
        }),
    }
}

/// One cell of an assembled bound table; per-cell failures are recorded,
/// not fatal.
pub struct TableCell {
    pub n: u64,
    pub method: Method,
    pub report: Result<BoundReport>,
}

/// Evaluate a grid of bounds.
pub fn bound_table(ns: &[u64], methods: &[Method], reg: &OrderRegistry) -> Vec<TableCell> {
    let mut cells = Vec::with_capacity(ns.len() * methods.len());
    for &n in ns {
        for &method in methods {
            cells.push(TableCell {
                n,
                method,
                report: bound_for(n, method, reg),
            });
        }
    }
    cells
}

/// Asymptotic coefficients: each ratio bound behaves like
/// coeff / n^exponent as n grows (exponent 0 = a positive constant).
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub d: u64,
    pub kms_coeff: f64,
    pub kms_exponent: f64,
    pub bo_coeff: f64,
    pub bo_exponent: f64,
    pub limit_const: f64,
}

/// The asymptotic comparison table for d ∈ {1, 2, 3}.
pub fn table1() -> Vec<Table1Row> {
    let e = e_const();
    let four_e32 = Interval::from_int(4).mul(&e.mul(&e.sqrt())).midpoint_f64(); // 4e^(3/2)
    let two_e = e.mul_int(2).midpoint_f64();
    let sqrt_e = e.sqrt().midpoint_f64();
    let bo_d2 = Interval::from_int(8)
        .div(&pi().mul(&e.mul(e)))
        .sqrt()
        .midpoint_f64(); // (8/πe²)^(1/2)
    vec![
        Table1Row {
            d: 1,
            kms_coeff: four_e32,
            kms_exponent: 1.5,
            bo_coeff: conjectured_r(1),
            bo_exponent: 0.0,
            limit_const: conjectured_r(1),
        },
        Table1Row {
            d: 2,
            kms_coeff: two_e,
            kms_exponent: 1.0,
            bo_coeff: bo_d2,
            bo_exponent: 0.5,
            limit_const: conjectured_r(2),
        },
        Table1Row {
            d: 3,
            kms_coeff: sqrt_e,
            kms_exponent: 0.5,
            bo_coeff: sqrt_e,
            bo_exponent: 0.5,
            limit_const: conjectured_r(3),
        },
    ]
}

/// One row of the d = 2 comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table2Row {
    /// "10", "14", ..., or "limit".
    pub label: String,
    pub kms: Option<f64>,
    pub bo: Option<f64>,
    pub chebyshev: Option<f64>,
    pub small_gap: Option<f64>,
}

/// The orders tabulated in the d = 2 comparison table.
pub const TABLE2_NS: [u64; 5] = [10, 14, 18, 98, 998];

/// The d = 2 comparison table: five orders plus the n → ∞ limit row.
pub fn table2(reg: &OrderRegistry) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::with_capacity(6);
    for n in TABLE2_NS {
        let (h, d) = reg.resolve_gap(n)?;
        debug_assert_eq!(d, 2);
        let kms = kms_bound(n, reg)?;
        let bo = bo_asymptotic(n);
        let cheb = chebyshev_dbar(h, d)?;
        let small = small_gap_dbar(h, d)?;
        rows.push(Table2Row {
            label: n.to_string(),
            kms: kms.r_bound,
            bo: bo.r_bound,
            chebyshev: r_from_dbar(&cheb, n),
            small_gap: r_from_dbar(&small, n),
        });
    }
    rows.push(Table2Row {
        label: "limit".into(),
        kms: Some(0.0),
        bo: Some(0.0),
        chebyshev: Some(conjectured_r(2)),
        small_gap: Some(conjectured_r(2)),
    });
    Ok(rows)
}

/// The four ratio values of the worked n = 668 example: deterministic
/// bordering, minors, the sharp probabilistic bound, and the conjectured
/// target.
#[derive(Debug, Clone, PartialEq)]
pub struct Example668 {
    pub n: u64,
    pub bordering: f64,
    pub minors: f64,
    pub probabilistic: f64,
    pub conjectured: f64,
}

pub fn example_668(reg: &OrderRegistry) -> Result<Example668> {
    let n = 668u64;
    let (h, d) = reg.resolve_gap(n)?;
    debug_assert_eq!((h, d), (664, 4));
    let bordering = bordering_bound(n, h)?.r_bound.unwrap();
    let minors = minors_bound(n, 672, reg)?.r_bound.unwrap();
    let probabilistic = chebyshev_r(h, d)?;
    Ok(Example668 {
        n,
        bordering,
        minors,
        probabilistic,
        conjectured: conjectured_r(d),
    })
}

/// Certified comparison for the d = 3 crossover: is the small-gap bound at
/// (h = n−3, d = 3) strictly above (n+1)^((n−1)/2)?
pub fn small_gap_beats_kms_d3(n: u64) -> Result<bool> {
    if n % 4 != 3 {
        return Err(Error::ParamRange(format!("n = {n} is not ≡ 3 mod 4")));
    }
    let lhs = small_gap_dbar(n - 3, 3)?;
    let rhs = LogScalar::from_bigint(&bigint_pow(n + 1, (n - 1) / 2));
    match lhs.try_cmp(&rhs) {
        Some(Ordering::Greater) => Ok(true),
        Some(_) => Ok(false),
        None => Err(Error::VerificationFailed(format!(
            "crossover comparison undecided at n = {n}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::OrderRegistry;

    fn assert_4dp(x: f64, expect: f64) {
        assert!(
            (x - expect).abs() < 0.5e-4,
            "expected {expect:.4}, got {x:.6}"
        );
    }

    #[test]
    fn log_scalar_round_trips_and_compares() {
        let a = LogScalar::from_bigint(&BigInt::from(1000));
        let b = LogScalar::from_bigint(&BigInt::from(999));
        assert_eq!(a.try_cmp(&b), Some(Ordering::Greater));
        // A value overlaps its own enclosure: correctly undecidable.
        assert_eq!(a.try_cmp(&a.clone()), None);
        let q = BigRational::new(BigInt::from(-3), BigInt::from(2));
        let c = LogScalar::from_rational(&q);
        assert_eq!(c.sign(), -1);
        assert!((c.ratio_f64(&LogScalar::from_bigint(&BigInt::one())) + 1.5).abs() < 1e-12);
        assert_eq!(LogScalar::zero().to_sci(3), "0");
        assert_eq!(
            LogScalar::from_bigint(&BigInt::from(41472)).to_sci(3),
            "4.15e4"
        );
    }

    #[test]
    fn consistency_r_equals_dbar_over_half_power() {
        // Where both forms exist, R must equal D̄/n^(n/2) to 1e−12 relative.
        let reg = OrderRegistry::known_table();
        for n in [11u64, 14, 98, 668] {
            let (h, d) = reg.resolve_gap(n).unwrap();
            if let Ok(dbar) = chebyshev_dbar(h, d) {
                if dbar.sign() > 0 {
                    let r = r_from_dbar(&dbar, n).unwrap();
                    let direct = (dbar.ln_mag_f64() - ln_half_power(n).midpoint_f64()).exp();
                    assert!((r - direct).abs() <= 1e-12 * direct.abs());
                }
            }
        }
    }

    #[test]
    fn chebyshev_table_points() {
        // n = 18: 0.0127; the smaller cores are trivial (μ < d²).
        assert_4dp(chebyshev_r(16, 2).unwrap(), 0.0127);
        assert!(chebyshev_dbar(8, 2).unwrap().sign() < 0);
        assert!(chebyshev_dbar(12, 2).unwrap().sign() < 0);
        assert_4dp(chebyshev_r(96, 2).unwrap(), 0.1601);
        assert_4dp(chebyshev_r(996, 2).unwrap(), 0.2142);
    }

    #[test]
    fn chebyshev_668_sharp_value() {
        // True value 1.69597…e−2 (the commonly quoted 1.69e−2 truncates the
        // third digit), so compare within one unit of that digit.
        let r = chebyshev_r(664, 4).unwrap();
        assert!((r - 1.69e-2).abs() <= 0.01e-2, "got {r:e}");
    }

    #[test]
    fn small_gap_table_points() {
        let reg = OrderRegistry::known_table();
        for (n, expect) in [
            (10u64, 0.3752),
            (14, 0.3609),
            (18, 0.3498),
            (98, 0.2897),
            (998, 0.2524),
        ] {
            let (h, d) = reg.resolve_gap(n).unwrap();
            let dbar = small_gap_dbar(h, d).unwrap();
            assert_4dp(r_from_dbar(&dbar, n).unwrap(), expect);
        }
    }

    #[test]
    fn small_gap_small_orders() {
        // h = 4, d = 1: 16·(5/2) = 40.
        let v = small_gap_dbar(4, 1).unwrap();
        assert_eq!(v.sign(), 1);
        assert!((v.ln_mag_f64() - 40f64.ln()).abs() < 1e-12);
        // h = 2, d = 1: 2·2 = 4.
        let v = small_gap_dbar(2, 1).unwrap();
        assert!((v.ln_mag_f64() - 4f64.ln()).abs() < 1e-12);
        // h = 4, d = 2: 16·(25/4 − 1) = 84.
        let v = small_gap_dbar(4, 2).unwrap();
        assert!((v.ln_mag_f64() - 84f64.ln()).abs() < 1e-12);
        assert!(small_gap_dbar(4, 4).is_err());
    }

    #[test]
    fn ratio_constants() {
        assert_4dp(conjectured_r(1), 0.4839);
        assert_4dp(conjectured_r(2), 0.2342);
        assert_4dp(conjectured_r(3), 0.1133);
        assert!((conjectured_r(4) - 0.2342f64.powi(2)).abs() < 1e-6);
        assert!(small_gap_r_const(4).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)] // 0.3183 is the n = 14 cell, not 1/π
    fn kms_bounds_match_table() {
        let reg = OrderRegistry::known_table();
        for (n, expect) in [
            (10u64, 0.4147),
            (14, 0.3183),
            (18, 0.2581),
            (98, 0.0538),
            (998, 0.0054),
        ] {
            let rep = kms_bound(n, &reg).unwrap();
            assert_eq!(rep.method, "kms-reconstructed");
            assert_4dp(rep.r_bound.unwrap(), expect);
        }
        // d = 3 exact form.
        let rep = kms_bound(11, &reg).unwrap();
        assert_eq!(rep.method, "kms");
        let expect = 12f64.powi(5) / 11f64.powf(5.5);
        assert!((rep.r_bound.unwrap() - expect).abs() < 1e-9);
        // d = 1 is ratio-only.
        let rep = kms_bound(13, &reg).unwrap();
        assert_eq!(rep.method, "kms-asymptotic");
        assert!(rep.dbar_bound.is_none());
        assert!(kms_bound(12, &reg).is_err());
    }

    #[test]
    fn bo_asymptotic_matches_table() {
        for (n, expect) in [
            (10u64, 0.1856),
            (14, 0.1569),
            (18, 0.1384),
            (98, 0.0593),
            (998, 0.0186),
        ] {
            let r = bo_asymptotic(n).r_bound.unwrap();
            assert!((r - expect).abs() < 2e-4, "n = {n}: {r} vs {expect}");
        }
    }

    #[test]
    fn bordering_and_minors_668() {
        let reg = OrderRegistry::known_table();
        let b = bordering_bound(668, 664).unwrap().r_bound.unwrap();
        assert!((b - 4.88e-6).abs() < 0.005e-6, "bordering {b:e}");
        let m = minors_bound(668, 672, &reg).unwrap().r_bound.unwrap();
        assert!((m - 2.60e-4).abs() < 0.005e-4, "minors {m:e}");
        assert!(minors_bound(668, 600, &reg).is_err());
        assert!(minors_bound(668, 676, &reg).is_err()); // not registered
    }

    #[test]
    fn bo_bound_dispatches_on_gap() {
        // d = 2 carries the tabulated asymptotic; any other gap carries the
        // exact bordering form.
        let at_d2 = bo_bound(98, 96).unwrap();
        assert_eq!(at_d2.method, "bo-asymptotic");
        let at_d4 = bo_bound(668, 664).unwrap();
        assert_eq!(at_d4.method, "bordering");
        assert!((at_d4.r_bound.unwrap() - 4.88e-6).abs() < 0.005e-6);
    }

    #[test]
    fn small_gap_ratio_exceeds_its_constant_at_all_gaps() {
        // The asymptotic constant (2/πe)^(d/2) sits strictly below the
        // finite-n ratio for each gap class.
        let reg = OrderRegistry::known_table();
        for n in [13u64, 21, 97, 345] {
            let (h, d) = reg.resolve_gap(n).unwrap();
            assert_eq!(d, 1);
            let r = r_from_dbar(&small_gap_dbar(h, d).unwrap(), n).unwrap();
            assert!(r > small_gap_r_const(1).unwrap(), "n = {n}: {r}");
        }
        for n in [15u64, 23, 99, 347] {
            let (h, d) = reg.resolve_gap(n).unwrap();
            assert_eq!(d, 3);
            let r = r_from_dbar(&small_gap_dbar(h, d).unwrap(), n).unwrap();
            assert!(r > small_gap_r_const(3).unwrap(), "n = {n}: {r}");
        }
    }

    #[test]
    fn minors_at_own_order_simplifies() {
        // n = h₊: the ratio collapses to 16/n⁴.
        let reg = OrderRegistry::known_table();
        let r = minors_bound(64, 64, &reg).unwrap().r_bound.unwrap();
        assert!((r - 16.0 / 64f64.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn example_668_values() {
        let reg = OrderRegistry::known_table();
        let ex = example_668(&reg).unwrap();
        assert!((ex.bordering - 4.88e-6).abs() < 0.005e-6);
        assert!((ex.minors - 2.60e-4).abs() < 0.005e-4);
        // 1.69597…e−2; one unit of the third digit covers the truncated form.
        assert!((ex.probabilistic - 1.69e-2).abs() <= 0.01e-2);
        assert!((ex.conjectured - 5.48e-2).abs() < 0.005e-2);
    }

    #[test]
    fn classic_bound_values() {
        let reports = classic_bounds(4, 1);
        assert!((reports[0].r_bound.unwrap() - 0.5625).abs() < 1e-12);
        let reports = classic_bounds(668, 4);
        let bo = reports[1].r_bound.unwrap();
        assert!((bo - 4.85e-6).abs() < 0.01e-6, "got {bo:e}");
        // The exponential bound drops below the polynomial one well before
        // n = 100 at d = 2.
        let at_100 = classic_bounds(100, 2);
        assert!(at_100[0].r_bound.unwrap() < at_100[1].r_bound.unwrap());
    }

    #[test]
    fn hn_inequality_examples() {
        assert!(hn_inequality_check(4, 1));
        assert!(hn_inequality_check(996, 2));
        assert_eq!(hn_scan(64, 4), None);
        // Direct numbers at (4, 1): 0.32768 > e^(−1.25) ≈ 0.2865.
        assert!((0.8f64.powi(5) - 0.32768).abs() < 1e-12);
        assert!(0.32768 > (-1.25f64).exp());
    }

    #[test]
    fn chebyshev_positivity_agreement_spot() {
        for h in (4..=200u64).step_by(4) {
            for d in 1..=4u64 {
                let (positive, threshold) = chebyshev_positivity(h, d);
                assert_eq!(positive, threshold, "h={h}, d={d}");
            }
        }
        // d = 1 at large h approaches (2/πe)^(1/2) from below.
        let r = chebyshev_r_asymptotic(2000, 1).unwrap();
        assert!(r > 0.47 && r < conjectured_r(1));
    }

    #[test]
    fn table1_constants() {
        let t = table1();
        assert!((t[0].kms_coeff - 17.93).abs() < 0.005);
        assert!((t[1].kms_coeff - 5.437).abs() < 0.0005);
        assert!((t[2].kms_coeff - 1.649).abs() < 0.0005);
        assert!((t[1].bo_coeff - 0.5871).abs() < 0.00005);
        assert_4dp(t[0].limit_const, 0.4839);
        assert_4dp(t[1].limit_const, 0.2342);
        assert_4dp(t[2].limit_const, 0.1133);
    }

    #[test]
    #[allow(clippy::approx_constant)] // 0.3183 is the n = 14 cell, not 1/π
    fn table2_reproduction() {
        let reg = OrderRegistry::known_table();
        let rows = table2(&reg).unwrap();
        assert_eq!(rows.len(), 6);
        let expect_kms = [0.4147, 0.3183, 0.2581, 0.0538, 0.0054];
        let expect_cheb = [None, None, Some(0.0127), Some(0.1601), Some(0.2142)];
        let expect_small = [0.3752, 0.3609, 0.3498, 0.2897, 0.2524];
        for (i, row) in rows[..5].iter().enumerate() {
            assert_4dp(row.kms.unwrap(), expect_kms[i]);
            match expect_cheb[i] {
                Some(v) => assert_4dp(row.chebyshev.unwrap(), v),
                None => assert!(row.chebyshev.is_none(), "row {i} should be a dash"),
            }
            assert_4dp(row.small_gap.unwrap(), expect_small[i]);
        }
        let limit = &rows[5];
        assert_eq!(limit.label, "limit");
        assert_eq!(limit.kms, Some(0.0));
        assert_4dp(limit.chebyshev.unwrap(), 0.2342);
        assert_4dp(limit.small_gap.unwrap(), 0.2342);
    }

    #[test]
    fn small_gap_column_decreases_toward_limit() {
        let reg = OrderRegistry::known_table();
        let rows = table2(&reg).unwrap();
        let mut prev = f64::INFINITY;
        for row in &rows[..5] {
            let v = row.small_gap.unwrap();
            assert!(v < prev);
            assert!(v > conjectured_r(2));
            prev = v;
        }
    }

    #[test]
    fn crossover_at_135_not_131() {
        assert!(small_gap_beats_kms_d3(135).unwrap());
        assert!(!small_gap_beats_kms_d3(131).unwrap());
        assert!(small_gap_beats_kms_d3(132).is_err());
    }

    #[test]
    fn bound_table_records_cell_errors() {
        let reg = OrderRegistry::known_table();
        let cells = bound_table(&[5, 10], &[Method::SmallGap, Method::Kms], &reg);
        assert_eq!(cells.len(), 4);
        // n = 5 resolves to (4, 1); both methods work there.
        assert!(cells.iter().all(|c| c.n != 5 || c.report.is_ok()));
        // Method parsing round-trips.
        for m in Method::ALL {
            assert_eq!(Method::parse(m.as_str()).unwrap(), m);
        }
        assert!(Method::parse("nope").is_err());
    }
}
