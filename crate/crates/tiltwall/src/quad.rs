//! Exact real quadratic numbers `a + b·√d`.
//!
//! These arise as intersection points of lines with the parabola
//! `w = b²/2`, so all wall endpoints live in a single real quadratic
//! field per line. Arithmetic (`+`, `-`, `*`, `/`) is supported between
//! numbers over the same radicand (or with rationals); comparisons are
//! exact and work across different radicands by repeated squaring, so
//! equality is equality of real values, never of representations.
//!
//! The radicand is canonicalized to a non-negative integer with square
//! factors removed by bounded trial division (complete for every
//! radicand this crate produces in practice; a perfect-square check
//! runs regardless, so rational values always normalize to `b = 0`).

use crate::rat::{decimal_string, floor_sqrt, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Largest trial divisor used when extracting square factors.
const SQUARE_EXTRACT_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct QuadNum {
    a: Rat,
    b: Rat,
    d: BigInt,
}

/// `n = f²·m` with `m` free of square factors up to the trial-division
/// bound (and never itself a perfect square).
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut m = n.clone();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2u8);
    let limit = BigInt::from(SQUARE_EXTRACT_LIMIT);
    while &(&p * &p) <= &m && p <= limit {
        let p2 = &p * &p;
        while (&m % &p2).is_zero() {
            m /= &p2;
            f *= &p;
        }
        p += if p == BigInt::from(2u8) { 1u8 } else { 2u8 };
    }
    // Catch a residual perfect square (e.g. the square of a large prime).
    let r = num_integer::Roots::sqrt(&m);
    if &(&r * &r) == &m {
        f *= &r;
        m = BigInt::one();
    }
    (f, m)
}

impl QuadNum {
    /// The rational `a`, as a quadratic number.
    pub fn from_rat(a: Rat) -> Self {
        QuadNum {
            a,
            b: Rat::zero(),
            d: BigInt::zero(),
        }
    }

    /// `a + b·√dd` for a non-negative rational radicand `dd`.
    ///
    /// Returns `None` when `dd < 0` (the value would not be real).
    pub fn new(a: Rat, b: Rat, dd: &Rat) -> Option<Self> {
        if dd.is_negative() {
            return None;
        }
        if b.is_zero() || dd.is_zero() {
            return Some(Self::from_rat(a));
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let n = dd.numer() * dd.denom();
        let b = b / Rat::from_integer(dd.denom().clone());
        let (f, m) = extract_square(&n);
        let b = b * Rat::from_integer(f);
        if m.is_one() {
            return Some(Self::from_rat(a + b));
        }
        Some(QuadNum { a, b, d: m })
    }

    /// `√dd`; `None` when `dd < 0`.
    pub fn sqrt(dd: &Rat) -> Option<Self> {
        Self::new(Rat::zero(), Rat::one(), dd)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn radical_coefficient(&self) -> &Rat {
        &self.b
    }

    /// Canonical radicand (zero for rational values).
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    fn merged_d(&self, other: &Self) -> BigInt {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.compatible(other), "incompatible radicands in add");
        let d = self.merged_d(other);
        let a = &self.a + &other.a;
        let b = &self.b + &other.b;
        if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadNum { a, b, d }
        }
    }

    pub fn neg(&self) -> Self {
        QuadNum {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.compatible(other), "incompatible radicands in mul");
        let d = self.merged_d(other);
        let dr = Rat::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * &dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadNum { a, b, d }
        }
    }

    pub fn mul_rat(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::from_rat(Rat::zero());
        }
        QuadNum {
            a: &self.a * k,
            b: &self.b * k,
            d: self.d.clone(),
        }
    }

    pub fn add_rat(&self, k: &Rat) -> Self {
        QuadNum {
            a: &self.a + k,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn sub_rat(&self, k: &Rat) -> Self {
        self.add_rat(&-k)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        if self.b.is_zero() {
            assert!(!self.a.is_zero(), "division by zero QuadNum");
            return Self::from_rat(self.a.recip());
        }
        let dr = Rat::from_integer(self.d.clone());
        let norm = &self.a * &self.a - &self.b * &self.b * &dr;
        assert!(!norm.is_zero(), "division by zero QuadNum");
        QuadNum {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
            d: self.d.clone(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Exact sign of the real value: -1, 0, or +1.
    pub fn sign(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // a and b·√d have opposite signs; compare magnitudes via squares.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rat::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_rat(&self, k: &Rat) -> Ordering {
        sign_to_ordering(self.sub_rat(k).sign())
    }

    /// Exact floor of the real value.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Rational bracket for √d at 10^-6 resolution, then exact fix-up.
        let scale = BigInt::from(1_000_000u64);
        let s_lo = Rat::new(
            floor_sqrt(&Rat::from_integer(&self.d * &scale * &scale)),
            scale,
        );
        let s_hi = &s_lo + Rat::new(BigInt::one(), BigInt::from(1_000_000u64));
        let (lo, hi) = if self.b.is_negative() {
            (&self.a + &self.b * &s_hi, &self.a + &self.b * &s_lo)
        } else {
            (&self.a + &self.b * &s_lo, &self.a + &self.b * &s_hi)
        };
        let mut cand = lo.floor().to_integer();
        let _ = hi;
        loop {
            let next = Rat::from_integer(&cand + 1);
            if self.cmp_rat(&next) != Ordering::Less {
                cand += 1;
            } else {
                break;
            }
        }
        while self.cmp_rat(&Rat::from_integer(cand.clone())) == Ordering::Less {
            cand -= 1;
        }
        cand
    }

    /// Deterministic decimal rendering with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.approx(digits + 12), digits)
    }

    /// Rational approximation with absolute error below `10^-guard · |b|`-ish;
    /// used only for display, never for decisions.
    fn approx(&self, guard: usize) -> Rat {
        if self.b.is_zero() {
            return self.a.clone();
        }
        let scale = BigInt::from(10u8).pow(guard as u32);
        let root = floor_sqrt(&Rat::from_integer(&self.d * &scale * &scale));
        &self.a + &self.b * Rat::new(root, scale)
    }
}

fn rat_sign(q: &Rat) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

fn sign_to_ordering(s: i8) -> Ordering {
    match s {
        0 => Ordering::Equal,
        x if x < 0 => Ordering::Less,
        _ => Ordering::Greater,
    }
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadNum {}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.compatible(other) {
            return sign_to_ordering(self.sub(other).sign());
        }
        // Different radicands: sign of (a₁-a₂) + b₁√d₁ - b₂√d₂.
        let u = QuadNum {
            a: &self.a - &other.a,
            b: self.b.clone(),
            d: self.d.clone(),
        };
        let su = u.sign();
        let st = rat_sign(&other.b); // sign of b₂√d₂
        if st == 0 {
            return sign_to_ordering(su);
        }
        if su == 0 {
            return sign_to_ordering(-st);
        }
        if su != st {
            return sign_to_ordering(su);
        }
        // Same sign: compare u² (single radicand) with (b₂√d₂)² (rational).
        let u2 = u.mul(&u);
        let t2 = &other.b * &other.b * Rat::from_integer(other.d.clone());
        let inner = u2.cmp_rat(&t2);
        if su > 0 {
            inner
        } else {
            inner.reverse()
        }
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

impl serde::Serialize for QuadNum {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("QuadNum", 3)?;
        st.serialize_field("a", &crate::rat::rat_value(&self.a))?;
        st.serialize_field("b", &crate::rat::rat_value(&self.b))?;
        st.serialize_field(
            "D",
            &crate::rat::rat_value(&Rat::from_integer(self.d.clone())),
        )?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for QuadNum {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as DeError;
        #[derive(serde::Deserialize)]
        struct Raw {
            a: serde_json::Value,
            b: serde_json::Value,
            #[serde(rename = "D")]
            d: serde_json::Value,
        }
        let raw = Raw::deserialize(de)?;
        let a = crate::rat::value_to_rat(&raw.a).ok_or_else(|| DeError::custom("bad 'a'"))?;
        let b = crate::rat::value_to_rat(&raw.b).ok_or_else(|| DeError::custom("bad 'b'"))?;
        let d = crate::rat::value_to_rat(&raw.d).ok_or_else(|| DeError::custom("bad 'D'"))?;
        QuadNum::new(a, b, &d).ok_or_else(|| DeError::custom("negative radicand"))
    }
}

/// Ascending real roots of `p·x² + q·x + r = 0` with `p ≠ 0`; `None`
/// when the discriminant is negative. A double root is returned twice.
pub fn solve_quadratic(p: &Rat, q: &Rat, r: &Rat) -> Option<(QuadNum, QuadNum)> {
    assert!(!p.is_zero(), "solve_quadratic requires a quadratic");
    let disc = q * q - Rat::from_integer(BigInt::from(4u8)) * p * r;
    if disc.is_negative() {
        return None;
    }
    let two_p = Rat::from_integer(BigInt::from(2u8)) * p;
    let root = QuadNum::sqrt(&disc).expect("non-negative discriminant");
    let base = QuadNum::from_rat(-q);
    let x1 = base.sub(&root).mul_rat(&two_p.recip());
    let x2 = base.add(&root).mul_rat(&two_p.recip());
    if p.is_negative() {
        Some((x2, x1))
    } else {
        Some((x1, x2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    #[test]
    fn canonicalizes_square_factors() {
        // sqrt(8) = 2*sqrt(2)
        let x = QuadNum::sqrt(&rint(8)).unwrap();
        assert_eq!(x.radicand(), &BigInt::from(2));
        assert_eq!(x.radical_coefficient(), &rint(2));
        // sqrt(9/4) = 3/2 exactly
        let y = QuadNum::sqrt(&rat(9, 4)).unwrap();
        assert_eq!(y.as_rat().unwrap(), &rat(3, 2));
        // sqrt(1/2) = (1/2) sqrt(2)
        let z = QuadNum::sqrt(&rat(1, 2)).unwrap();
        assert_eq!(z.radicand(), &BigInt::from(2));
        assert_eq!(z.radical_coefficient(), &rat(1, 2));
        assert!(QuadNum::sqrt(&rint(-1)).is_none());
    }

    #[test]
    fn ordering_same_field() {
        let s2 = QuadNum::sqrt(&rint(2)).unwrap();
        assert_eq!(s2.cmp_rat(&rat(7, 5)), Ordering::Greater);
        assert_eq!(s2.cmp_rat(&rat(3, 2)), Ordering::Less);
        let neg = s2.neg();
        assert!(neg < s2);
        assert_eq!(s2.sub(&s2).sign(), 0);
    }

    #[test]
    fn ordering_cross_field() {
        let s2 = QuadNum::sqrt(&rint(2)).unwrap();
        let s3 = QuadNum::sqrt(&rint(3)).unwrap();
        assert!(s2 < s3);
        // 1 + sqrt(2) vs sqrt(6): 2.4142… > 2.4494… is false
        let x = s2.add_rat(&rint(1));
        let y = QuadNum::sqrt(&rint(6)).unwrap();
        assert!(x < y);
        // 2 + sqrt(2) > sqrt(6)
        let x2 = s2.add_rat(&rint(2));
        assert!(x2 > y);
        // equality across representations: sqrt(2) + sqrt(2) == sqrt(8)
        let s8 = QuadNum::sqrt(&rint(8)).unwrap();
        assert_eq!(s2.add(&s2), s8);
    }

    #[test]
    fn arithmetic_and_division() {
        let s5 = QuadNum::sqrt(&rint(5)).unwrap();
        let golden = s5.add_rat(&rint(1)).mul_rat(&rat(1, 2)); // (1+sqrt 5)/2
        // golden² = golden + 1
        assert_eq!(golden.mul(&golden), golden.add_rat(&rint(1)));
        // golden · (golden - 1) = 1, so recip(golden) = golden - 1
        assert_eq!(golden.recip(), golden.sub_rat(&rint(1)));
    }

    #[test]
    fn floor_and_decimal() {
        let s2 = QuadNum::sqrt(&rint(2)).unwrap();
        assert_eq!(s2.floor(), BigInt::from(1));
        assert_eq!(s2.neg().floor(), BigInt::from(-2));
        assert_eq!(QuadNum::from_rat(rat(-7, 2)).floor(), BigInt::from(-4));
        assert_eq!(QuadNum::from_rat(rint(3)).floor(), BigInt::from(3));
        assert_eq!(s2.to_decimal(5), "1.41421");
        let x = QuadNum::new(rat(-11, 4), rat(-1, 4), &rint(769)).unwrap();
        assert_eq!(x.floor(), BigInt::from(-10)); // (-11 - sqrt 769)/4 ≈ -9.683
    }

    #[test]
    fn quadratic_solver() {
        // 2b² + 11b - 81 = 0 has roots (-11 ± sqrt 769)/4
        let (b1, b2) = solve_quadratic(&rint(2), &rint(11), &rint(-81)).unwrap();
        assert!(b1 < b2);
        assert_eq!(b1.to_decimal(4), "-9.6827");
        assert_eq!(b2.to_decimal(4), "4.1827");
        // double root
        let (c1, c2) = solve_quadratic(&rint(1), &rint(-2), &rint(1)).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(c1.as_rat().unwrap(), &rint(1));
        // no real roots
        assert!(solve_quadratic(&rint(1), &rint(0), &rint(1)).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let x = QuadNum::new(rat(-11, 4), rat(1, 4), &rint(769)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":[-11,4],"b":[1,4],"D":[769,1]}"#);
        let back: QuadNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
