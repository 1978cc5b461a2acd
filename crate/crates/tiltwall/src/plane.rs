//! Exact geometry of the half-plane `U = {(b, w) : w > b²/2}`.
//!
//! Weak stability conditions live at rational points of `U`.  A class of
//! nonzero rank projects to the point `Π(v) = (c/r, s/r)` below `U`; walls
//! of instability are line segments inside `U`.  Everything here is exact:
//! points and lines are rational, while intersections with the boundary
//! parabola `w = b²/2` live in a real quadratic field ([`QuadNum`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::quad::{solve_quadratic, QuadNum};
use crate::rat::{bigint_number, rat_serde, value_to_bigint, Rat};
use crate::threefold::KClass;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneError {
    /// `Π(v)` is undefined for rank-zero classes.
    #[error("projection is undefined for a rank-zero class")]
    RankZero,
    /// `Π'(v)` is undefined when `ch₁·H² = 0`.
    #[error("secondary projection is undefined when the degree component vanishes")]
    ChOneZero,
    #[error("cannot draw a line through coincident points")]
    CoincidentPoints,
    /// The line misses the parabola `w = b²/2` entirely.
    #[error("line does not intersect the boundary parabola")]
    NoIntersection,
    #[error("operation requires a non-vertical line")]
    VerticalLine,
    #[error("line coefficients are degenerate (A = B = 0)")]
    DegenerateLine,
}

/// A rational point of the `(b, w)`-plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "rat_serde")]
    pub b: Rat,
    #[serde(with = "rat_serde")]
    pub w: Rat,
}

impl PlanePoint {
    pub fn new(b: Rat, w: Rat) -> Self {
        PlanePoint { b, w }
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.b, self.w)
    }
}

/// Which side of a non-vertical line a point lies on, comparing `w`-values
/// at the point's `b` (the convention used for "on or above" a wall).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    On,
    Below,
}

/// The line `{A·b + B·w = C}` in canonical form: `A`, `B`, `C` are coprime
/// integers, not both `A` and `B` zero, and the first nonzero coefficient
/// among `(A, B)` is positive.  The canonical representation is unique per
/// line, so lines compare and hash structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneLine {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl PlaneLine {
    /// Canonical line from rational coefficients of `A·b + B·w = C`.
    pub fn from_rational(a: &Rat, b: &Rat, c: &Rat) -> Result<Self, PlaneError> {
        if a.is_zero() && b.is_zero() {
            return Err(PlaneError::DegenerateLine);
        }
        let lcm = a.denom().lcm(b.denom()).lcm(c.denom());
        let mut ai = (a * &lcm).to_integer();
        let mut bi = (b * &lcm).to_integer();
        let mut ci = (c * &lcm).to_integer();
        let g = ai.gcd(&bi).gcd(&ci);
        ai /= &g;
        bi /= &g;
        ci /= &g;
        let sign_ref = if ai.is_zero() { &bi } else { &ai };
        if sign_ref.is_negative() {
            ai = -ai;
            bi = -bi;
            ci = -ci;
        }
        Ok(PlaneLine { a: ai, b: bi, c: ci })
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// `−A/B`; `None` for vertical lines.
    pub fn slope(&self) -> Option<Rat> {
        if self.b.is_zero() {
            None
        } else {
            Some(Rat::new(-self.a.clone(), self.b.clone()))
        }
    }

    /// The `w`-value over `b`; `None` for vertical lines.
    pub fn w_at(&self, b: &Rat) -> Option<Rat> {
        if self.b.is_zero() {
            return None;
        }
        let c = Rat::from_integer(self.c.clone());
        let a = Rat::from_integer(self.a.clone());
        Some((c - a * b) / Rat::from_integer(self.b.clone()))
    }

    /// `A·b + B·w − C` at the point (positive above the line when `B > 0`).
    pub fn eval(&self, p: &PlanePoint) -> Rat {
        Rat::from_integer(self.a.clone()) * &p.b + Rat::from_integer(self.b.clone()) * &p.w
            - Rat::from_integer(self.c.clone())
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.eval(p).is_zero()
    }

    /// The parallel line through `p`.
    pub fn translate_through(&self, p: &PlanePoint) -> PlaneLine {
        let c = Rat::from_integer(self.a.clone()) * &p.b + Rat::from_integer(self.b.clone()) * &p.w;
        PlaneLine::from_rational(
            &Rat::from_integer(self.a.clone()),
            &Rat::from_integer(self.b.clone()),
            &c,
        )
        .expect("translating a valid line cannot degenerate")
    }
}

impl fmt::Display for PlaneLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*b + {}*w = {}", self.a, self.b, self.c)
    }
}

impl Serialize for PlaneLine {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        [
            bigint_number(&self.a),
            bigint_number(&self.b),
            bigint_number(&self.c),
        ]
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PlaneLine {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = <[serde_json::Value; 3]>::deserialize(de)?;
        let mut ints = raw
            .iter()
            .map(|v| value_to_bigint(v).ok_or_else(|| DeError::custom("expected an integer")));
        let a = ints.next().unwrap()?;
        let b = ints.next().unwrap()?;
        let c = ints.next().unwrap()?;
        PlaneLine::from_rational(
            &Rat::from_integer(a),
            &Rat::from_integer(b),
            &Rat::from_integer(c),
        )
        .map_err(DeError::custom)
    }
}

/// Projection `Π(v) = (ch₁·H²/(r·H³), ch₂·H/(r·H³)) = (c/r, s/r)`.
pub fn pi(v: &KClass) -> Result<PlanePoint, PlaneError> {
    if v.r.is_zero() {
        return Err(PlaneError::RankZero);
    }
    Ok(PlanePoint::new(&v.c / &v.r, &v.s / &v.r))
}

/// Secondary projection `Π'(v) = (2s/c, 3d/c)`, defined when `c ≠ 0`.
pub fn pi_prime(v: &KClass) -> Result<PlanePoint, PlaneError> {
    if v.c.is_zero() {
        return Err(PlaneError::ChOneZero);
    }
    let two = rint2();
    Ok(PlanePoint::new(
        two * &v.s / &v.c,
        Rat::from_integer(BigInt::from(3u8)) * &v.d / &v.c,
    ))
}

fn rint2() -> Rat {
    Rat::from_integer(BigInt::from(2u8))
}

/// Canonical line through two distinct points.
pub fn line_through(p: &PlanePoint, q: &PlanePoint) -> Result<PlaneLine, PlaneError> {
    if p == q {
        return Err(PlaneError::CoincidentPoints);
    }
    // (q.w − p.w)·b − (q.b − p.b)·w = (q.w − p.w)·p.b − (q.b − p.b)·p.w
    let a = &q.w - &p.w;
    let b = &p.b - &q.b;
    let c = &a * &p.b + &b * &p.w;
    PlaneLine::from_rational(&a, &b, &c)
}

/// `b`-values of the intersections of the line with `∂U = {w = b²/2}`,
/// ascending.  A tangent line yields a double root; a vertical line meets
/// the parabola once and returns that `b` twice.
pub fn parabola_roots(l: &PlaneLine) -> Result<(QuadNum, QuadNum), PlaneError> {
    let (a, b, c) = l.coefficients();
    if b.is_zero() {
        let root = QuadNum::from_rat(Rat::new(c.clone(), a.clone()));
        return Ok((root.clone(), root));
    }
    // Substituting w = b²/2: (B/2)·x² + A·x − C = 0.
    let p = Rat::new(b.clone(), BigInt::from(2u8));
    let q = Rat::from_integer(a.clone());
    let r = -Rat::from_integer(c.clone());
    solve_quadratic(&p, &q, &r).ok_or(PlaneError::NoIntersection)
}

/// Strict membership in the open region `U`.
pub fn in_u(p: &PlanePoint) -> bool {
    &p.w * rint2() > &p.b * &p.b
}

/// Side of a non-vertical line, comparing `w`-values over `p.b`.
pub fn point_side(l: &PlaneLine, p: &PlanePoint) -> Result<Side, PlaneError> {
    let w_line = l.w_at(&p.b).ok_or(PlaneError::VerticalLine)?;
    Ok(match p.w.cmp(&w_line) {
        std::cmp::Ordering::Greater => Side::Above,
        std::cmp::Ordering::Equal => Side::On,
        std::cmp::Ordering::Less => Side::Below,
    })
}

/// The smallest integer `b` with `(b, ·) ∈ l ∩ U`, if any.
///
/// For a non-vertical line the candidates are the integers strictly inside
/// the open interval cut out by [`parabola_roots`]; for a vertical line
/// `{b = v}` the answer is `v` itself when integral.
pub fn segment_contains_integer_b(l: &PlaneLine) -> Result<Option<BigInt>, PlaneError> {
    if l.is_vertical() {
        let (a, _, c) = l.coefficients();
        let v = Rat::new(c.clone(), a.clone());
        return Ok(if v.is_integer() {
            Some(v.to_integer())
        } else {
            None
        });
    }
    let (lo, hi) = parabola_roots(l)?;
    if lo == hi {
        return Ok(None);
    }
    let candidate = lo.floor() + BigInt::one();
    let inside = hi.cmp_rat(&Rat::from_integer(candidate.clone())) == std::cmp::Ordering::Greater;
    Ok(inside.then_some(candidate))
}

/// Membership in the region `U(w_n)`: on or above the translate of `lf`
/// through `Π(w_n)`, and strictly to the right of `Π(w_n)`.
pub fn region_u_of(w_n: &KClass, lf: &PlaneLine, p: &PlanePoint) -> Result<bool, PlaneError> {
    if lf.is_vertical() {
        return Err(PlaneError::VerticalLine);
    }
    let base = pi(w_n)?;
    let translated = lf.translate_through(&base);
    let side = point_side(&translated, p)?;
    Ok(side != Side::Below && p.b > base.b)
}
