//! Safe lines and the safe area.
//!
//! For a rank −1 class `v` with `Δ_H(v) ≥ 0` and a cap `c`, the *safe
//! line* `ℓˢ_v` is the unique line through `Π(v)` whose parabola chord
//! `(b₁ˢ, b₂ˢ)` satisfies
//!
//!   b₁ˢ − Π(v).b  =  min(c, b₂ˢ − b₁ˢ).
//!
//! (`Π(v).b = −v.c`, so the left side is `v.c + b₁ˢ`.)  The safe *area*
//! is the part of `U` strictly above `ℓˢ_v` and strictly to the right of
//! `Π(v)`; weak stability of the relevant objects is unobstructed there.

use num_traits::Signed;

use super::WallsError;
use crate::plane::{in_u, parabola_roots, pi, PlaneLine, PlanePoint};
use crate::quad::QuadNum;
use crate::rat::{rat, rint, Rat};
use crate::threefold::{KClass, ThreefoldModel};

fn check_pre(v: &KClass, cap_c: &Rat) -> Result<Rat, WallsError> {
    if v.r != rint(-1) {
        return Err(WallsError::DegenerateClass(format!(
            "safe lines are defined for rank −1 classes, got rank {}",
            v.r
        )));
    }
    if !cap_c.is_positive() {
        return Err(WallsError::OutOfRange(format!(
            "the cap must be positive, got {}",
            cap_c
        )));
    }
    let dbar = v.delta_reduced();
    if dbar.is_negative() {
        return Err(WallsError::NegativeDiscriminant(dbar));
    }
    Ok(dbar)
}

/// The slope of the safe line, as an exact quadratic number (total even
/// when irrational).  Writing `p = Π(v).b` and `Δ̄ = Δ_H(v)/H⁶`, the two
/// `min`-branches give
///
/// * `μ = p + (Δ̄ + c²)/(2c)` when `Δ̄ ≥ 2c²` (chord longer than the cap), and
/// * `μ = p + (3/4)·√(2Δ̄)` when `Δ̄ ≤ 2c²` (equal offsets);
///
/// the branches agree at `Δ̄ = 2c²`, and the computed line is re-verified
/// post hoc by substituting its parabola roots into the defining
/// equation.
pub fn safe_slope(v: &KClass, cap_c: &Rat, x: &ThreefoldModel) -> Result<QuadNum, WallsError> {
    let _ = x;
    let dbar = check_pre(v, cap_c)?;
    let p = -&v.c;
    let two_cap2 = rint(2) * cap_c * cap_c;
    if dbar >= two_cap2 {
        let mu = &p + (&dbar + cap_c * cap_c) / (rint(2) * cap_c);
        Ok(QuadNum::from_rat(mu))
    } else {
        let two_dbar = rint(2) * &dbar;
        Ok(QuadNum::new(p, rat(3, 4), &two_dbar).expect("radicand 2Δ̄ is non-negative"))
    }
}

/// The safe line itself.  Errors with [`WallsError::IrrationalSafeSlope`]
/// when the slope is a genuine quadratic irrational (no integer-
/// coefficient line realizes it); use [`safe_slope`] for the exact value
/// and [`in_safe_area`] for membership, both of which stay total.
pub fn safe_line(v: &KClass, cap_c: &Rat, x: &ThreefoldModel) -> Result<PlaneLine, WallsError> {
    let mu_exact = safe_slope(v, cap_c, x)?;
    let mu = match mu_exact.as_rat() {
        Some(mu) => mu.clone(),
        None => return Err(WallsError::IrrationalSafeSlope(mu_exact)),
    };
    let pv = pi(v)?;
    // w − μ·b = q − μ·p, i.e. (−μ)·b + 1·w = q − μ·p.
    let line = PlaneLine::from_rational(&-&mu, &rint(1), &(&pv.w - &mu * &pv.b))?;

    // Post-hoc verification of the defining min-equation on the chord.
    let (b1, b2) = parabola_roots(&line)?;
    let lhs = b1.add_rat(&v.c);
    let chord = b2.sub(&b1);
    let cap = QuadNum::from_rat(cap_c.clone());
    let min = if chord < cap { chord } else { cap };
    assert!(
        lhs == min,
        "safe-line branch selection produced a chord violating its own min-equation"
    );
    Ok(line)
}

/// Membership in the safe area `Uˢ_v`: strictly inside `U`, strictly to
/// the right of `Π(v)`, and strictly above the safe line (evaluated via
/// the exact slope, so irrational safe slopes are handled).
pub fn in_safe_area(
    p: &PlanePoint,
    v: &KClass,
    cap_c: &Rat,
    x: &ThreefoldModel,
) -> Result<bool, WallsError> {
    let mu = safe_slope(v, cap_c, x)?;
    let pv = pi(v)?;
    if !in_u(p) || p.b <= pv.b {
        return Ok(false);
    }
    // Strictly above the line through Π(v) of slope μ:
    // w − Π(v).w > μ·(b − Π(v).b), with b − Π(v).b > 0.
    let rise = &p.w - &pv.w;
    let run = &p.b - &pv.b;
    Ok(mu.mul_rat(&run).cmp_rat(&rise) == std::cmp::Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walls::js_wall;

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    fn wn_quintic() -> KClass {
        // (0, 1, −1/2, 1/6) − [O(−10)] = (−1, 11, −101/2, 1001/6).
        KClass::new_rat(rint(-1), rint(11), rat(-101, 2), rat(1001, 6))
    }

    #[test]
    fn long_chord_branch_is_rational() {
        // Δ̄ = 20 ≥ 2·1², so μ = −11 + 21/2 = −1/2 and the line is [1, 2, 90].
        let x = quintic();
        let mu = safe_slope(&wn_quintic(), &rint(1), &x).unwrap();
        assert_eq!(mu.as_rat(), Some(&rat(-1, 2)));
        let line = safe_line(&wn_quintic(), &rint(1), &x).unwrap();
        let (a, b, c) = line.coefficients();
        assert_eq!(
            (a.to_string(), b.to_string(), c.to_string()),
            ("1".into(), "2".into(), "90".into())
        );
    }

    #[test]
    fn safe_line_equals_js_wall_line() {
        let x = quintic();
        // (c, s, n) = (1, −1/2, 10) and (2, −1, 7): the Joyce–Song wall of
        // w_n coincides with its safe line at cap c.
        for (c, s, n) in [(rint(1), rat(-1, 2), rint(10)), (rint(2), rint(-1), rint(7))] {
            let w_n = &KClass::new_rat(rint(0), c.clone(), s, rint(0))
                - &KClass::line_bundle(&-&n);
            let wall = js_wall(&w_n, &n, &x).unwrap();
            let ls = safe_line(&w_n, &c, &x).unwrap();
            assert_eq!(wall.line, ls);
        }
    }

    #[test]
    fn tangent_when_discriminant_vanishes() {
        // v = −[O(−3)]: Δ̄ = 0, safe line = tangent at Π(v) = (−3, 9/2),
        // slope −3, canonical triple [6, 2, −9]; both sides of the
        // min-equation are 0.
        let x = quintic();
        let v = -&KClass::line_bundle(&rint(-3));
        let mu = safe_slope(&v, &rint(1), &x).unwrap();
        assert_eq!(mu.as_rat(), Some(&rint(-3)));
        let line = safe_line(&v, &rint(1), &x).unwrap();
        let (a, b, c) = line.coefficients();
        assert_eq!(
            (a.to_string(), b.to_string(), c.to_string()),
            ("6".into(), "2".into(), "-9".into())
        );
        let (b1, b2) = parabola_roots(&line).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1.as_rat(), Some(&rint(-3)));
    }

    #[test]
    fn short_chord_branch_can_be_irrational() {
        // v = (−1, 3, −4, 0): Δ̄ = 1 < 2, so μ = −3 + (3/4)√2 — exact via
        // safe_slope, an error from safe_line.
        let x = quintic();
        let v = KClass::new_rat(rint(-1), rint(3), rint(-4), rint(0));
        let mu = safe_slope(&v, &rint(1), &x).unwrap();
        assert!(!mu.is_rational());
        assert_eq!(mu.rational_part(), &rint(-3));
        assert_eq!(mu.radical_coefficient(), &rat(3, 4));
        assert_eq!(mu.radicand().to_string(), "2");
        assert!(matches!(
            safe_line(&v, &rint(1), &x),
            Err(WallsError::IrrationalSafeSlope(_))
        ));
        // The area test still works: a point far above Π(v) = (−3, 4) on
        // the right is safe, Π(v) itself is not.
        assert!(in_safe_area(&PlanePoint::new(rint(0), rint(50)), &v, &rint(1), &x).unwrap());
        assert!(!in_safe_area(&PlanePoint::new(rint(-3), rint(4)), &v, &rint(1), &x).unwrap());
    }

    #[test]
    fn negative_discriminant_rejected() {
        let x = quintic();
        let v = KClass::new_rat(rint(-1), rint(1), rint(-1), rint(0));
        assert!(matches!(
            safe_slope(&v, &rint(1), &x),
            Err(WallsError::NegativeDiscriminant(d)) if d == rint(-1)
        ));
    }

    #[test]
    fn safe_area_membership() {
        let x = quintic();
        let v = wn_quintic();
        let cap = rint(1);
        // Π(v) itself: not in U, not strictly right — false.
        assert!(!in_safe_area(&pi(&v).unwrap(), &v, &cap, &x).unwrap());
        // On the safe line [1, 2, 90]: (0, 45) — false (not strict).
        assert!(!in_safe_area(&PlanePoint::new(rint(0), rint(45)), &v, &cap, &x).unwrap());
        // Just above it: (0, 46) — true.
        assert!(in_safe_area(&PlanePoint::new(rint(0), rint(46)), &v, &cap, &x).unwrap());
        // Above the line but left of Π(v): (−12, 80) — false.
        assert!(!in_safe_area(&PlanePoint::new(rint(-12), rint(80)), &v, &cap, &x).unwrap());
        // Above the line, right of Π(v), but below the parabola:
        // (−10, 50) sits on ∂U ∩ ℓˢ — false.
        assert!(!in_safe_area(&PlanePoint::new(rint(-10), rint(50)), &v, &cap, &x).unwrap());
    }

    #[test]
    fn steeper_lines_satisfy_the_strict_inequality() {
        // Rotating the chord upward about Π(v) moves b₁ left and b₂
        // right, so lines strictly above ℓˢ satisfy the strict
        // min-inequality b₁ + v.c < min(cap, b₂ − b₁).
        let x = quintic();
        let v = wn_quintic();
        let cap = rint(1);
        let mu_s = safe_slope(&v, &cap, &x).unwrap();
        let pv = pi(&v).unwrap();
        for bump in [rat(1, 7), rint(2), rat(19, 3)] {
            let mu = mu_s.as_rat().unwrap() + bump;
            let line =
                PlaneLine::from_rational(&-&mu, &rint(1), &(&pv.w - &mu * &pv.b)).unwrap();
            let (b1, b2) = parabola_roots(&line).unwrap();
            let lhs = b1.add_rat(&v.c);
            let chord = b2.sub(&b1);
            let capq = QuadNum::from_rat(cap.clone());
            let min = if chord < capq { chord } else { capq };
            assert!(lhs < min);
        }
    }
}
