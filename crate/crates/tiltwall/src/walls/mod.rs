//! Numerical walls of instability for weak stability conditions.
//!
//! A *wall* for a class `v` is a line in the `(b, w)`-plane on which the
//! tilt slopes of `v` and of a numerical decomposition `v = v₀ + v₁`
//! agree.  This module enumerates candidate walls in a region
//! ([`wall_candidates`]), builds the distinguished Joyce–Song wall of a
//! close class ([`js_wall`]), computes safe lines ([`safe_line`]), decides
//! the closeness predicate ([`close_to`]), classifies destabilizing
//! decompositions ([`classify_destabilizer`]), and evaluates the
//! shifted-class formulas ([`shifted_class`]) that drive the descent.
//!
//! Enumeration is *numerical*: it returns a finite superset of the true
//! categorical walls (a candidate decomposition need not be realized by
//! actual objects), and downstream consumers carry that caveat.

mod admissible;
mod candidates;
mod safe;

pub use admissible::{minimal_admissible_n0, n0_admissible};
pub use candidates::{rank0_no_walls_above, wall_candidates, Region};
pub use safe::{in_safe_area, safe_line, safe_slope};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::plane::{line_through, pi, point_side, PlaneError, PlaneLine, Side};
use crate::quad::QuadNum;
use crate::rat::{rat, rat_opt_serde, rat_serde, rint, Rat};
use crate::stability::bg_line;
use crate::threefold::{KClass, ThreefoldModel};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallsError {
    #[error("degenerate class: {0}")]
    DegenerateClass(String),
    /// `Δ_H(v) < 0`: the class lies outside the Bogomolov cone.
    #[error("negative discriminant Δ_H = {0}")]
    NegativeDiscriminant(Rat),
    /// The safe slope is a genuine quadratic irrational, so no
    /// rational-coefficient line realizes it; [`safe_slope`] still
    /// returns the exact value.
    #[error("the safe slope {0} is irrational")]
    IrrationalSafeSlope(QuadNum),
    #[error("search bounds exceeded: {0}")]
    UnboundedSearch(String),
    #[error("inconsistent decomposition: {0}")]
    InconsistentDecomposition(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Explicit enumeration bounds.  Exceeding any of them is an error
/// ([`WallsError::UnboundedSearch`]), never a silent truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest factor rank examined; a contribution from the top slice
    /// also errors, since completeness would then be unverified.
    pub max_rank: i64,
    /// Cap on the denominators of the enumeration grid (`12·H³`).
    pub max_denominator: i64,
    /// Cap on examined `(c, s, d)` candidates across all slices.
    pub max_candidates: u64,
    /// Cap on distinct wall lines.
    pub max_walls: u64,
    /// Worker threads for slice enumeration; output is identical for
    /// every value.
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 8,
            max_denominator: 120,
            max_candidates: 200_000,
            max_walls: 10_000,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallKind {
    JoyceSong,
    Generic,
}

/// One numerical decomposition supported on a wall.  `v0` is the factor
/// of non-negative rank (the destabilizing `E₀`, of rank 0, when the
/// parent has rank −1) and `v1` the factor of negative rank.  The primed
/// invariants `c′ = c − v0.c`, `s′`, `d′` depend on the twist `n` of the
/// parent close class, so they are populated only where that context
/// exists ([`js_wall`], classification consumers); [`wall_candidates`]
/// leaves them empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub v0: KClass,
    pub v1: KClass,
    #[serde(with = "rat_opt_serde", skip_serializing_if = "Option::is_none", default)]
    pub c_prime: Option<Rat>,
    #[serde(with = "rat_opt_serde", skip_serializing_if = "Option::is_none", default)]
    pub s_prime: Option<Rat>,
    #[serde(with = "rat_opt_serde", skip_serializing_if = "Option::is_none", default)]
    pub d_prime: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<Classification>,
}

impl Decomposition {
    pub fn new(v0: KClass, v1: KClass) -> Self {
        Decomposition {
            v0,
            v1,
            c_prime: None,
            s_prime: None,
            d_prime: None,
            classification: None,
        }
    }
}

/// A candidate wall: the supporting line, its kind, its slope, and every
/// surviving decomposition, sorted by `(v0.c, v0.s, v0.d, v0.r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub line: PlaneLine,
    pub kind: WallKind,
    #[serde(with = "rat_serde")]
    pub slope: Rat,
    pub decompositions: Vec<Decomposition>,
}

/// Per-bullet report of the closeness predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloseBounds {
    /// `Π(w_n)` lies on or above `ℓ_f` of `v_{n₀}`.
    pub on_or_above_lf: bool,
    /// `δ_n ∈ [0, c/3]`.
    pub delta_in_range: bool,
    /// The two-sided bound on `s`.
    pub s_in_range: bool,
    /// The lower bound on `d`.
    pub d_above_min: bool,
}

/// Recovered invariants `(n, δ_n, s, d)` of a would-be close class plus
/// the bullet-by-bullet verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloseWitness {
    #[serde(with = "rat_serde")]
    pub n: Rat,
    #[serde(with = "rat_serde")]
    pub delta_n: Rat,
    #[serde(with = "rat_serde")]
    pub s: Rat,
    #[serde(with = "rat_serde")]
    pub d: Rat,
    pub bounds_report: CloseBounds,
    pub close: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationCase {
    #[serde(rename = "js_wall_T_factor")]
    JsWallTFactor,
    CloseDescent,
    SafeDescent,
    Excluded,
}

/// The shifted-class data `(n′, s̃, d̃, δ′_n)` produced by a close descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedClass {
    #[serde(with = "rat_serde")]
    pub n_prime: Rat,
    #[serde(with = "rat_serde")]
    pub s_tilde: Rat,
    #[serde(with = "rat_serde")]
    pub d_tilde: Rat,
    #[serde(with = "rat_serde")]
    pub delta_n_prime: Rat,
}

/// Outcome of the destabilizer trichotomy.  `multiplicity` (the order of
/// `H²(X,ℤ)_tors`, counting the Pic⁰-twists) accompanies
/// `js_wall_T_factor`; `shifted` accompanies `close_descent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub case: ClassificationCase,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicity: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shifted: Option<ShiftedClass>,
}

fn underlying_s(w_n: &KClass, n: &Rat) -> Rat {
    &w_n.s + n * n / rint(2)
}

fn underlying_d(w_n: &KClass, n: &Rat) -> Rat {
    &w_n.d - n * n * n / rint(6)
}

/// The Joyce–Song wall of `w_n = (0,c,s,d) − [O(−n)]`: the line joining
/// `Π(w_n)` to `Π(O(−n))`, which meets `∂U` at `b₁′ = −n` and
/// `b₂′ = n + 2s/c`.  Its single canonical decomposition is
/// `(0,c,s,d) + (−[O(−n)])` with `c′ = s′ = d′ = 0`.
pub fn js_wall(w_n: &KClass, n: &Rat, x: &ThreefoldModel) -> Result<Wall, WallsError> {
    let _ = x;
    if w_n.r != rint(-1) {
        return Err(WallsError::DegenerateClass(format!(
            "js_wall expects rank −1, got {}",
            w_n.r
        )));
    }
    let c = &w_n.c - n;
    if !c.is_positive() {
        return Err(WallsError::DegenerateClass(format!(
            "ch₁-part c = {} of the close class must be positive",
            c
        )));
    }
    let s = underlying_s(w_n, n);
    let d = underlying_d(w_n, n);
    let o_minus_n = KClass::line_bundle(&-n);
    let line = line_through(&pi(w_n)?, &pi(&o_minus_n)?)?;
    let slope = line.slope().expect("c > 0 separates the two projections");
    let mut dec = Decomposition::new(KClass::new_rat(Rat::zero(), c, s, d), -&o_minus_n);
    dec.c_prime = Some(Rat::zero());
    dec.s_prime = Some(Rat::zero());
    dec.d_prime = Some(Rat::zero());
    Ok(Wall {
        line,
        kind: WallKind::JoyceSong,
        slope,
        decompositions: vec![dec],
    })
}

/// Decide whether `w_n` is close to `v_{n₀} = v − [O(−n₀)]`, reporting
/// each bullet of the definition separately: `Π(w_n)` on or above `ℓ_f`,
/// `δ_n = n₀ − n ∈ [0, c/3]`, the two-sided `s` bound, and the `d` lower
/// bound.
pub fn close_to(
    w_n: &KClass,
    v: &KClass,
    n0: &Rat,
    x: &ThreefoldModel,
) -> Result<CloseWitness, WallsError> {
    if !v.r.is_zero() || !v.c.is_positive() {
        return Err(WallsError::DegenerateClass(
            "close_to expects a rank-0 reference class with c > 0".into(),
        ));
    }
    if w_n.r != rint(-1) {
        return Err(WallsError::DegenerateClass(format!(
            "close_to expects a rank −1 class, got rank {}",
            w_n.r
        )));
    }
    let h3 = x.h3_rat();
    let (c, s0, d0) = (&v.c, &v.s, &v.d);
    let n = &w_n.c - c;
    let delta_n = n0 - &n;
    let s = underlying_s(w_n, &n);
    let d = underlying_d(w_n, &n);

    let v_n0 = v - &KClass::line_bundle(&-n0);
    let on_or_above_lf = match bg_line(&v_n0, x) {
        Ok(lf) => point_side(&lf, &pi(w_n)?)? != Side::Below,
        Err(_) => false,
    };

    let delta_in_range = !delta_n.is_negative() && delta_n <= c / rint(3);

    let abs_s0 = s0.abs();
    let s_lower = -(n0 * &delta_n) - &abs_s0;
    let s_upper = -(rat(3, 4) * n0 * &delta_n) + (c + &abs_s0 * &h3) * &delta_n + s0;
    let s_in_range = s_lower <= s && s <= s_upper;

    let s0h3 = s0 * &h3;
    let d_min = rat(15, 32) * n0 * n0 * &delta_n
        - n0 * &delta_n * (&abs_s0 * &h3 + c)
        - &delta_n * &s0h3 * &s0h3
        + d0;
    let d_above_min = d >= d_min;

    let bounds_report = CloseBounds {
        on_or_above_lf,
        delta_in_range,
        s_in_range,
        d_above_min,
    };
    let close = on_or_above_lf && delta_in_range && s_in_range && d_above_min;
    Ok(CloseWitness {
        n,
        delta_n,
        s,
        d,
        bounds_report,
        close,
    })
}

/// The shifted-class formulas: with `e = c − c′`,
///
///   n′ = n − e,
///   s̃ = s′ − e·n + e²/2,
///   d̃ = d′ + n²e/2 − n e²/2 + e³/6,
///   δ′_n = δ_n + e.
///
/// The reconstructed class `(0, c, s̃, d̃) − [O(−n′)]` equals the input
/// rank −1 factor componentwise.
pub fn shifted_class(
    c: &Rat,
    c_prime: &Rat,
    s_prime: &Rat,
    d_prime: &Rat,
    n: &Rat,
    delta_n: &Rat,
) -> Result<ShiftedClass, WallsError> {
    if !c_prime.is_positive() || c_prime >= c {
        return Err(WallsError::OutOfRange(format!(
            "shifted_class requires 0 < c′ < c, got c′ = {}, c = {}",
            c_prime, c
        )));
    }
    let e = c - c_prime;
    let n_prime = n - &e;
    let s_tilde = s_prime - &e * n + &e * &e / rint(2);
    let d_tilde = d_prime + n * n * &e / rint(2) - n * &e * &e / rint(2) + &e * &e * &e / rint(6);
    let delta_n_prime = delta_n + &e;
    Ok(ShiftedClass {
        n_prime,
        s_tilde,
        d_tilde,
        delta_n_prime,
    })
}

/// The destabilizer trichotomy for a decomposition `w_n = v0 + v1`
/// supported on `wall`:
///
/// * `c′ < 0` or `c′ ≥ c`, or `c′ = 0` with `δ_n ≠ 0`: `excluded`
///   (violates the constraint propositions — flags an inconsistent
///   input; enumeration output never lands here for admissible inputs).
/// * `c′ = 0`, `δ_n = 0`: `js_wall_T_factor`.  Any *realized*
///   destabilizer of this shape has `v1` numerically equal to
///   `−[O(−n₀)]`, i.e. `(s′, d′) = (0, 0)`; candidates violating that are
///   unrealizable but still classify here, with multiplicity `#H²_tors`.
/// * `0 < c′ < c`: `safe_descent` when `c′ < δ_n + 2c/3`, or when the
///   wall lies strictly above the Joyce–Song line (slope `> s/c`);
///   otherwise `close_descent`, carrying the shifted class.
pub fn classify_destabilizer(
    w_n: &KClass,
    params: &CloseWitness,
    wall: &Wall,
    dec: &Decomposition,
    n0: &Rat,
    x: &ThreefoldModel,
) -> Result<Classification, WallsError> {
    let bad = |msg: String| Err(WallsError::InconsistentDecomposition(msg));
    if &dec.v0 + &dec.v1 != *w_n {
        return bad("v0 + v1 does not equal the decomposed class".into());
    }
    if !dec.v0.r.is_zero() || dec.v1.r != rint(-1) {
        return bad(format!(
            "expected ranks (0, −1), got ({}, {})",
            dec.v0.r, dec.v1.r
        ));
    }
    if &params.n + &params.delta_n != *n0 {
        return bad(format!(
            "witness has n + δ_n = {}, but n₀ = {}",
            &params.n + &params.delta_n,
            n0
        ));
    }
    let c = &w_n.c - &params.n;
    if !c.is_positive() {
        return bad(format!("recovered c = {} is not positive", c));
    }
    if params.s != underlying_s(w_n, &params.n) || params.d != underlying_d(w_n, &params.n) {
        return bad("witness (s, d) does not match the class at the stated twist".into());
    }
    if wall.line.is_vertical() {
        return bad("a wall line cannot be vertical".into());
    }
    if !wall.line.contains(&pi(w_n)?) || !wall.line.contains(&pi(&dec.v1)?) {
        return bad("wall line misses a projection of the decomposition".into());
    }

    let c_prime = &c - &dec.v0.c;
    let excluded = Ok(Classification {
        case: ClassificationCase::Excluded,
        multiplicity: None,
        shifted: None,
    });
    if c_prime.is_negative() || c_prime >= c {
        return excluded;
    }
    if c_prime.is_zero() {
        if !params.delta_n.is_zero() {
            return excluded;
        }
        return Ok(Classification {
            case: ClassificationCase::JsWallTFactor,
            multiplicity: Some(x.tors),
            shifted: None,
        });
    }

    let safe = Ok(Classification {
        case: ClassificationCase::SafeDescent,
        multiplicity: None,
        shifted: None,
    });
    if c_prime < &params.delta_n + rint(2) * &c / rint(3) {
        return safe;
    }
    if wall.slope > &params.s / &c {
        return safe;
    }
    let s_prime = &params.s - &dec.v0.s;
    let d_prime = &params.d - &dec.v0.d;
    let shifted = shifted_class(&c, &c_prime, &s_prime, &d_prime, &params.n, &params.delta_n)?;
    Ok(Classification {
        case: ClassificationCase::CloseDescent,
        multiplicity: None,
        shifted: Some(shifted),
    })
}
