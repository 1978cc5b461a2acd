//! Slope functions, heart-positivity, and the Bogomolov–Gieseker form.
//!
//! A weak stability condition is a point `(b, w) ∈ U`.  The slope of a
//! class is the gradient of the line joining `(b, w)` to its projection
//! `Π(v)`; the quadratic form `B_{b,w}` cuts out the line `ℓ_f` below
//! which no object of the class can be semistable.  On the quintic the
//! form is only known to hold on a restricted region ([`li_region`]).

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

use crate::plane::{parabola_roots, PlaneError, PlaneLine};
use crate::quad::QuadNum;
use crate::rat::{rat_value, rint, Rat};
use crate::threefold::{KClass, ThreefoldModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    /// The point `(b, w)` does not satisfy `w > b²/2`.
    #[error("point ({b}, {w}) lies outside the region U")]
    NotInU { b: Rat, w: Rat },
    /// `Δ_H(v) ≤ 0`: the locus `{B_{b,w}(v) = 0}` is not a graph over `b`.
    #[error("the Bogomolov-Gieseker locus is degenerate (Δ_H ≤ 0)")]
    DegenerateBG,
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Value of the slope function: a rational, or `+∞` when `ch₁^{bH}·H² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(Rat),
    Infinite,
}

impl Slope {
    pub fn is_finite(&self) -> bool {
        matches!(self, Slope::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Slope::Finite(q) => Some(q),
            Slope::Infinite => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(q) => write!(f, "{q}"),
            Slope::Infinite => write!(f, "+infinity"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(q) => rat_value(q).serialize(ser),
            Slope::Infinite => "+infinity".serialize(ser),
        }
    }
}

/// Sign of `ch₁^{bH}(v)·H²`, the numerical condition a class must satisfy
/// to sit in the positive cone of the tilted heart at `b`.  This is
/// necessary, never sufficient: membership itself is categorical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeartPositivity {
    Violates,
    Boundary,
    Interior,
}

/// Tilt slope `ν_{b,w}(v) = (s − w·r)/(c − b·r)`, the gradient of the line
/// from `(b, w)` to `Π(v)`; `+∞` when the denominator vanishes.
pub fn nu(b: &Rat, w: &Rat, v: &KClass, _x: &ThreefoldModel) -> Result<Slope, StabilityError> {
    if w * rint(2) <= b * b {
        return Err(StabilityError::NotInU {
            b: b.clone(),
            w: w.clone(),
        });
    }
    let den = &v.c - b * &v.r;
    if den.is_zero() {
        return Ok(Slope::Infinite);
    }
    Ok(Slope::Finite((&v.s - w * &v.r) / den))
}

/// Classify the sign of `c − b·r` (positive inside the cone, zero on its
/// boundary where the slope is `+∞`-adjacent, negative outside).
pub fn heart_positivity(b: &Rat, v: &KClass, _x: &ThreefoldModel) -> HeartPositivity {
    let q = &v.c - b * &v.r;
    if q.is_positive() {
        HeartPositivity::Interior
    } else if q.is_zero() {
        HeartPositivity::Boundary
    } else {
        HeartPositivity::Violates
    }
}

/// `C_i = ch_i(v)·H^{3−i}` for `i = 0..3`, the integer-scaled coefficients
/// used by the linear form of the Bogomolov-Gieseker locus.
fn big_c(v: &KClass, x: &ThreefoldModel) -> [Rat; 4] {
    let h3 = x.h3_rat();
    [&v.r * &h3, &v.c * &h3, &v.s * &h3, &v.d * &h3]
}

/// The quadratic form
/// `B_{b,w}(v) = (2w − b²)·Δ_H + 4(ch₂^{bH}·H)² − 6(ch₁^{bH}·H²)·ch₃^{bH}`.
///
/// Internally this also evaluates the expansion that is linear in `(b, w)`
/// and asserts the exact identity `B = 2·(linear form)`.
pub fn bg_form(b: &Rat, w: &Rat, v: &KClass, x: &ThreefoldModel) -> Rat {
    let h3 = x.h3_rat();
    let vb = v.ch_b(b);
    let quadratic = (rint(2) * w - b * b) * x.delta(v)
        + rint(4) * (&vb.s * &h3) * (&vb.s * &h3)
        - rint(6) * (&vb.c * &h3) * (&vb.d * &h3);
    let linear = bg_form_half(b, w, v, x);
    assert_eq!(quadratic, rint(2) * &linear, "B_{{b,w}} must be linear in (b, w)");
    quadratic
}

/// The linear-in-`(b,w)` expansion
/// `½B_{b,w}(v) = (C₁² − 2C₀C₂)·w + (3C₀C₃ − C₁C₂)·b + (2C₂² − 3C₁C₃)`.
pub fn bg_form_half(b: &Rat, w: &Rat, v: &KClass, x: &ThreefoldModel) -> Rat {
    let [c0, c1, c2, c3] = big_c(v, x);
    let coeff_w = &c1 * &c1 - rint(2) * &c0 * &c2;
    let coeff_b = rint(3) * &c0 * &c3 - &c1 * &c2;
    let constant = rint(2) * &c2 * &c2 - rint(3) * &c1 * &c3;
    coeff_w * w + coeff_b * b + constant
}

/// The line `ℓ_f = {B_{b,w}(v) = 0}`, namely
/// `Δ_H·w + (3C₀C₃ − C₁C₂)·b = 3C₁C₃ − 2C₂²`, defined when `Δ_H > 0`.
///
/// When `r ≠ 0 ≠ c` the line passes through both `Π(v)` and `Π'(v)`.
pub fn bg_line(v: &KClass, x: &ThreefoldModel) -> Result<PlaneLine, StabilityError> {
    let [c0, c1, c2, c3] = big_c(v, x);
    let coeff_w = &c1 * &c1 - rint(2) * &c0 * &c2;
    if !coeff_w.is_positive() {
        return Err(StabilityError::DegenerateBG);
    }
    let coeff_b = rint(3) * &c0 * &c3 - &c1 * &c2;
    let rhs = rint(3) * &c1 * &c3 - rint(2) * &c2 * &c2;
    Ok(PlaneLine::from_rational(&coeff_b, &coeff_w, &rhs)?)
}

/// The `b`-values `b₁^f ≤ b₂^f` of `ℓ_f ∩ ∂U`.
pub fn lf_roots(v_n0: &KClass, x: &ThreefoldModel) -> Result<(QuadNum, QuadNum), StabilityError> {
    let line = bg_line(v_n0, x)?;
    Ok(parabola_roots(&line)?)
}

/// The restricted region where the Bogomolov-Gieseker inequality is known
/// on the quintic: `w > ½b² + ½(b − ⌊b⌋)(⌊b⌋ + 1 − b)`.
pub fn li_region(b: &Rat, w: &Rat) -> bool {
    let fl = b.floor();
    let frac = b - &fl;
    let rhs = (b * b + &frac * (rint(1) - &frac)) / rint(2);
    w > &rhs
}
