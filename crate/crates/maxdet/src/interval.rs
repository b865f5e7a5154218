//! Fixed-point reals with directed rounding, and intervals over them.
//!
//! A [`Fixed`] is a big integer mantissa scaled by 2^−[`PREC_BITS`], giving a
//! little over 100 decimal digits of working precision. Addition and
//! subtraction are exact at fixed point; multiplication, division, and square
//! roots round explicitly toward −∞ or +∞. An [`Interval`] is a pair
//! lo ≤ hi of such values, and every interval operation widens (never
//! narrows), so an interval that starts out containing an exact real quantity
//! keeps containing it through any chain of operations.
//!
//! Logarithms of big integers are taken through a mantissa/exponent split:
//! the top [`LN_MANTISSA_BITS`] bits are evaluated with an exact-dyadic
//! series and the dropped tail is absorbed into a one-sided error term of at
//! most 2^−(LN_MANTISSA_BITS−2). That keeps conversions of astronomically
//! large integers (think 996-digit determinant bounds) certified to well
//! beyond 30 significant digits.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fraction bits of the fixed-point representation (~106 decimal digits).
pub const PREC_BITS: u64 = 352;

/// Mantissa bits kept when taking logarithms of big integers.
pub const LN_MANTISSA_BITS: u64 = 128;

/// A real number stored as `mantissa / 2^PREC_BITS`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn one() -> Self {
        Fixed(BigInt::one() << PREC_BITS as usize)
    }

    /// Smallest representable increment.
    pub fn ulp() -> Self {
        Fixed(BigInt::one())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << PREC_BITS as usize)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Fixed(v.clone() << PREC_BITS as usize)
    }

    fn from_ratio_dir(num: &BigInt, den: &BigInt, up: bool) -> Self {
        debug_assert!(!den.is_zero());
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << PREC_BITS as usize;
        Fixed(div_dir(&scaled, &den, up))
    }

    /// Largest fixed-point value ≤ the rational.
    pub fn from_rational_down(q: &BigRational) -> Self {
        Self::from_ratio_dir(q.numer(), q.denom(), false)
    }

    /// Smallest fixed-point value ≥ the rational.
    pub fn from_rational_up(q: &BigRational) -> Self {
        Self::from_ratio_dir(q.numer(), q.denom(), true)
    }

    /// The exact rational value of this fixed-point number.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::one() << PREC_BITS as usize)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(if self.0.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }) * (-(PREC_BITS as f64)).exp2()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn mul_dir(&self, other: &Self, up: bool) -> Self {
        let prod = &self.0 * &other.0;
        Fixed(shr_dir(&prod, PREC_BITS, up))
    }

    pub fn div_dir(&self, other: &Self, up: bool) -> Self {
        debug_assert!(!other.0.is_zero());
        let (num, den) = if other.0.is_negative() {
            (-&self.0, -&other.0)
        } else {
            (self.0.clone(), other.0.clone())
        };
        let scaled = num << PREC_BITS as usize;
        Fixed(div_dir(&scaled, &den, up))
    }

    /// Directed square root; requires a nonnegative operand.
    pub fn sqrt_dir(&self, up: bool) -> Self {
        assert!(
            !self.0.is_negative(),
            "sqrt of a negative fixed-point value"
        );
        let scaled = self.0.clone() << PREC_BITS as usize;
        let root = scaled.sqrt();
        if up && (&root * &root) != scaled {
            Fixed(root + 1)
        } else {
            Fixed(root)
        }
    }

    /// Multiply by 2^e with directed rounding (exact for e ≥ 0).
    pub fn scale_pow2(&self, e: i64, up: bool) -> Self {
        if e >= 0 {
            Fixed(self.0.clone() << e as usize)
        } else {
            Fixed(shr_dir(&self.0, (-e) as u64, up))
        }
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

/// Shift right by `bits`, rounding toward −∞ (`up = false`) or +∞.
fn shr_dir(v: &BigInt, bits: u64, up: bool) -> BigInt {
    let floor = v >> bits as usize; // BigInt shr rounds toward −∞
    if up {
        let back = &floor << bits as usize;
        if &back == v {
            floor
        } else {
            floor + 1
        }
    } else {
        floor
    }
}

/// Directed integer division with a positive divisor.
fn div_dir(num: &BigInt, den: &BigInt, up: bool) -> BigInt {
    debug_assert!(den.is_positive());
    let (q, r) = num.div_mod_floor(den);
    if up && !r.is_zero() {
        q + 1
    } else {
        q
    }
}

/// A closed interval [lo, hi] of fixed-point reals with lo ≤ hi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Fixed,
    pub hi: Fixed,
}

impl Interval {
    pub fn new(lo: Fixed, hi: Fixed) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Fixed) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Self::point(Fixed::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Fixed::from_int(v))
    }

    /// Tightest representable enclosure of a rational.
    pub fn from_rational(q: &BigRational) -> Self {
        Interval {
            lo: Fixed::from_rational_down(q),
            hi: Fixed::from_rational_up(q),
        }
    }

    pub fn width(&self) -> Fixed {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Widen both endpoints outward by `ulps` least significant increments.
    pub fn widen_ulps(&self, ulps: u64) -> Self {
        let pad = BigInt::from(ulps);
        Interval {
            lo: Fixed(&self.lo.0 - &pad),
            hi: Fixed(&self.hi.0 + &pad),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Fixed> = None;
        let mut hi: Option<Fixed> = None;
        for (a, b) in candidates {
            let down = a.mul_dir(b, false);
            let up = a.mul_dir(b, true);
            lo = Some(match lo {
                Some(cur) => cur.min(down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(up),
                None => up,
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Interval division; the divisor must not contain zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "division by an interval containing zero"
        );
        let candidates = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Fixed> = None;
        let mut hi: Option<Fixed> = None;
        for (a, b) in candidates {
            let down = a.div_dir(b, false);
            let up = a.div_dir(b, true);
            lo = Some(match lo {
                Some(cur) => cur.min(down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(up),
                None => up,
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        let a = Fixed(&self.lo.0 * &k);
        let b = Fixed(&self.hi.0 * &k);
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0);
        let kb = BigInt::from(k.abs());
        let (a, b) = if k > 0 {
            (&self.lo, &self.hi)
        } else {
            (&self.hi, &self.lo)
        };
        let sign = if k > 0 { 1 } else { -1 };
        let lo = Fixed(div_dir(&(&a.0 * sign), &kb, false));
        let hi = Fixed(div_dir(&(&b.0 * sign), &kb, true));
        Interval { lo, hi }
    }

    /// Multiply by 2^e, exactly for e ≥ 0 and with outward rounding otherwise.
    pub fn scale_pow2(&self, e: i64) -> Self {
        Interval {
            lo: self.lo.scale_pow2(e, false),
            hi: self.hi.scale_pow2(e, true),
        }
    }

    /// Interval square root; the lower endpoint must be nonnegative.
    pub fn sqrt(&self) -> Self {
        Interval {
            lo: self.lo.sqrt_dir(false),
            hi: self.hi.sqrt_dir(true),
        }
    }

    /// Certain comparison: `Some(ordering)` when the intervals are disjoint
    /// (or both are points), `None` when they overlap.
    pub fn try_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self == other && self.lo == self.hi {
            return Some(Ordering::Equal);
        }
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// True when every point of the interval is strictly below the rational.
    pub fn certainly_lt_rational(&self, q: &BigRational) -> bool {
        self.hi.to_rational() < *q
    }

    /// True when every point of the interval is strictly above the rational.
    pub fn certainly_gt_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() > *q
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::add(self, rhs)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::sub(self, rhs)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        Interval::mul(self, rhs)
    }
}

impl Div for &Interval {
    type Output = Interval;
    fn div(self, rhs: &Interval) -> Interval {
        Interval::div(self, rhs)
    }
}

/// Enclosure of arctan(1/x) for integer x ≥ 2, as a scaled-integer
/// alternating series with an explicit ulp error budget.
fn atan_inv(x: u64) -> Interval {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let unit = BigInt::one() << PREC_BITS as usize;
    let mut denom = x.clone(); // x^(2k+1) for k = 0
    let mut k = 0u64;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    loop {
        let d = &denom * BigInt::from(2 * k + 1);
        if d > unit {
            break;
        }
        let term = &unit / &d; // floor
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        denom *= &x2;
        k += 1;
        terms += 1;
    }
    // Each floored term is off by < 1 ulp; truncation is < 1 ulp as well.
    let slop = BigInt::from(terms + 2);
    Interval {
        lo: Fixed(&sum - &slop),
        hi: Fixed(&sum + &slop),
    }
}

/// Enclosure of π (Machin: π = 16·atan(1/5) − 4·atan(1/239)).
pub fn pi() -> &'static Interval {
    static PI: OnceLock<Interval> = OnceLock::new();
    PI.get_or_init(|| {
        let a5 = atan_inv(5);
        let a239 = atan_inv(239);
        a5.mul_int(16).sub(&a239.mul_int(4))
    })
}

/// Enclosure of ln 2 (series Σ 1/(k·2^k)).
pub fn ln2() -> &'static Interval {
    static LN2: OnceLock<Interval> = OnceLock::new();
    LN2.get_or_init(|| {
        let mut sum = BigInt::zero();
        let mut terms = 0u64;
        for k in 1..=(PREC_BITS + 8) {
            let d = BigInt::from(k) << k as usize;
            sum += (BigInt::one() << PREC_BITS as usize) / d;
            terms += 1;
        }
        // Floored terms under-estimate; the truncated tail is below 1 ulp.
        Interval {
            lo: Fixed(sum.clone()),
            hi: Fixed(sum + BigInt::from(terms + 2)),
        }
    })
}

/// Enclosure of ln r for an exactly-representable r ∈ [1, 2), via the
/// atanh series ln r = 2 Σ z^(2k+1)/(2k+1) with z = (r−1)/(r+1) ∈ [0, 1/3].
fn ln_mantissa(r: &Fixed) -> Interval {
    debug_assert!(*r >= Fixed::one() && *r < Fixed::from_int(2));
    if *r == Fixed::one() {
        return Interval::zero();
    }
    let one = Interval::point(Fixed::one());
    let rr = Interval::point(r.clone());
    let z = rr.sub(&one).div(&rr.add(&one));
    let z2 = z.mul(&z);
    let mut power = z.clone(); // z^(2k+1)
    let mut sum = z.clone();
    let mut k = 1u64;
    let cutoff = Fixed(BigInt::one() << 6usize); // 2^-(PREC-6)
    loop {
        power = power.mul(&z2);
        let term = power.div_int(2 * k as i64 + 1);
        if term.hi < cutoff {
            // Tail: Σ_{j≥k} z^(2j+1)/(2j+1) ≤ term_k / (1 − z²).
            let rest = term.div(&one.sub(&z2));
            sum = sum.add(&Interval {
                lo: Fixed::zero(),
                hi: rest.hi,
            });
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    sum.mul_int(2)
}

/// Certified enclosure of ln n for a positive big integer.
///
/// Splits n = M·2^s + R with M holding the top [`LN_MANTISSA_BITS`] bits,
/// evaluates ln M exactly through the mantissa series, and encloses the
/// dropped ln(1 + R/(M·2^s)) ∈ [0, 2^(1−LN_MANTISSA_BITS)] one-sidedly.
pub fn ln_bigint(n: &BigInt) -> Interval {
    assert!(n.is_positive(), "ln of a nonpositive integer");
    let bits = n.bits();
    let (mant, drop_bits, dropped_any) = if bits > LN_MANTISSA_BITS {
        let s = bits - LN_MANTISSA_BITS;
        let m = n >> s as usize;
        let dropped = !(&m << s as usize == *n);
        (m, s, dropped)
    } else {
        (n.clone(), 0, false)
    };
    // mant ∈ [1, 2^LN_MANTISSA_BITS); write mant = r·2^(mbits−1), r ∈ [1, 2).
    let mbits = mant.bits().max(1);
    let r = Fixed(mant << (PREC_BITS - (mbits - 1)) as usize);
    let exponent = (drop_bits + mbits - 1) as i64;
    let mut result = ln_mantissa(&r).add(&ln2().mul_int(exponent));
    if dropped_any {
        // ln(1 + R/(M·2^s)) with R < 2^s and M ≥ 2^(LN_MANTISSA_BITS−1):
        // nonnegative and below 2^(1−LN_MANTISSA_BITS).
        let pad = Fixed(BigInt::one() << (PREC_BITS - LN_MANTISSA_BITS + 1) as usize);
        result = result.add(&Interval {
            lo: Fixed::zero(),
            hi: pad,
        });
    }
    result
}

/// Certified enclosure of ln q for a positive rational.
pub fn ln_rational(q: &BigRational) -> Interval {
    assert!(q.is_positive(), "ln of a nonpositive rational");
    ln_bigint(q.numer()).sub(&ln_bigint(q.denom()))
}

/// Enclosure of ln over a positive interval (monotone extension).
pub fn ln_interval(x: &Interval) -> Interval {
    assert!(x.lo.is_positive(), "ln over an interval reaching 0");
    let lo = ln_rational(&x.lo.to_rational());
    let hi = ln_rational(&x.hi.to_rational());
    Interval {
        lo: lo.lo,
        hi: hi.hi,
    }
}

/// Enclosure of e^v for a single fixed-point argument.
fn exp_point(v: &Fixed) -> Interval {
    // Range-reduce: v = q·ln2 + r with |r| ≤ 0.6, then e^v = 2^q · e^r.
    let q = (v.to_f64() / std::f64::consts::LN_2).round();
    assert!(q.abs() < 1e9, "exp argument out of supported range");
    let q = q as i64;
    let r = Interval::point(v.clone()).sub(&ln2().mul_int(q));
    let half = Fixed::from_rational_down(&BigRational::new(BigInt::from(3), BigInt::from(5)));
    assert!(
        r.lo.abs() <= half && r.hi.abs() <= half,
        "range reduction failed"
    );
    let mut term = Interval::point(Fixed::one());
    let mut sum = term.clone();
    let cutoff = Fixed(BigInt::one() << 6usize);
    let mut k = 1i64;
    loop {
        term = term.mul(&r).div_int(k);
        let mag = term.lo.abs().max(term.hi.abs());
        if mag < cutoff && k > 1 {
            // |remaining| ≤ |term|·Σ (0.6/(k+1))^j ≤ 2|term| for k ≥ 1.
            let pad = Fixed(&mag.0 * BigInt::from(2));
            sum = sum.add(&Interval { lo: -&pad, hi: pad });
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    sum.scale_pow2(q)
}

/// Enclosure of e^x over an interval (monotone extension).
pub fn exp_interval(x: &Interval) -> Interval {
    let lo = exp_point(&x.lo);
    let hi = exp_point(&x.hi);
    Interval {
        lo: lo.lo,
        hi: hi.hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fixed_directed_rounding_brackets_the_quotient() {
        let a = Fixed::from_int(1);
        let b = Fixed::from_int(3);
        let down = a.div_dir(&b, false);
        let up = a.div_dir(&b, true);
        assert!(down < up);
        assert_eq!(&up - &down, Fixed::ulp());
        let third = rat(1, 3);
        assert!(down.to_rational() < third && third < up.to_rational());
    }

    #[test]
    fn bigint_shr_rounds_toward_neg_infinity() {
        // shr_dir's floor rounding leans on this library behavior.
        assert_eq!(BigInt::from(-3) >> 1usize, BigInt::from(-2));
        assert_eq!(BigInt::from(-4) >> 1usize, BigInt::from(-2));
    }

    #[test]
    fn pi_matches_f64_constant() {
        let p = pi();
        assert!(p.width() <= Fixed(BigInt::from(8192)));
        assert!((p.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn ln2_matches_f64_constant() {
        let l = ln2();
        assert!(l.width() <= Fixed(BigInt::from(1024)));
        assert!((l.midpoint_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn ln_bigint_small_values() {
        for (n, expect) in [(1u32, 0.0), (2, std::f64::consts::LN_2), (10, 10f64.ln())] {
            let enc = ln_bigint(&BigInt::from(n));
            assert!((enc.midpoint_f64() - expect).abs() < 1e-14, "ln {n}");
        }
    }

    #[test]
    fn ln_bigint_certified_width_for_huge_inputs() {
        // ln of a 1000-digit-scale integer stays certified far beyond 30
        // significant digits.
        let n = BigInt::from(996u32).pow(498);
        let enc = ln_bigint(&n);
        let width = enc.width().to_f64();
        assert!(width < 1e-35, "width = {width:e}");
        let expect = 498.0 * 996f64.ln();
        assert!((enc.midpoint_f64() - expect).abs() < 1e-9);
    }

    #[test]
    fn ln_rational_and_exp_round_trip() {
        for (n, d) in [(3, 4), (22, 7), (997, 996), (1, 1000)] {
            let q = rat(n, d);
            let back = exp_interval(&ln_rational(&q));
            assert!(
                back.contains_rational(&q),
                "exp(ln({n}/{d})) should contain {n}/{d}"
            );
        }
    }

    #[test]
    fn exp_of_zero_and_one() {
        let e0 = exp_interval(&Interval::zero());
        assert!(e0.contains_rational(&BigRational::one()));
        let e1 = exp_interval(&Interval::from_int(1));
        assert!((e1.midpoint_f64() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn sqrt_brackets_irrationals() {
        let two = Interval::from_int(2);
        let s = two.sqrt();
        assert!(s.lo.mul_dir(&s.lo, false) <= Fixed::from_int(2));
        assert!(s.hi.mul_dir(&s.hi, true) >= Fixed::from_int(2));
        assert!((s.midpoint_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn interval_ops_contain_exact_rational_results() {
        let samples = [
            rat(1, 3),
            rat(-7, 5),
            rat(355, 113),
            rat(0, 1),
            rat(12345, 67),
            rat(-1, 1024),
        ];
        for a in &samples {
            for b in &samples {
                let ia = Interval::from_rational(a);
                let ib = Interval::from_rational(b);
                assert!(ia.add(&ib).contains_rational(&(a + b)));
                assert!(ia.sub(&ib).contains_rational(&(a - b)));
                assert!(ia.mul(&ib).contains_rational(&(a * b)));
                if !b.is_zero() {
                    assert!(ia.div(&ib).contains_rational(&(a / b)));
                }
            }
        }
    }

    #[test]
    fn try_cmp_detects_disjoint_and_overlapping() {
        let a = Interval::from_int(1);
        let b = Interval::from_int(2);
        assert_eq!(a.try_cmp(&b), Some(Ordering::Less));
        assert_eq!(b.try_cmp(&a), Some(Ordering::Greater));
        let wide = Interval::new(Fixed::from_int(0), Fixed::from_int(3));
        assert_eq!(wide.try_cmp(&a), None);
    }

    #[test]
    fn scale_pow2_directed() {
        let third = Interval::from_rational(&rat(1, 3));
        let scaled = third.scale_pow2(-4);
        assert!(scaled.contains_rational(&rat(1, 48)));
        let doubled = third.scale_pow2(1);
        assert!(doubled.contains_rational(&rat(2, 3)));
    }
}
