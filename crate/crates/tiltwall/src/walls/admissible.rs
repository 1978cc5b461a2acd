//! Admissibility of the twist parameter `n₀`.
//!
//! The descent machinery needs `n₀` large enough that the fixed line
//! `ℓ_f = ℓ(v_{n₀})` is long, shallow, and correctly placed relative to
//! the Joyce–Song geometry.  The underlying requirements are asymptotic
//! (`O(n₀ⁱ)` comparisons); here they are replaced by a *conservative*
//! checklist of closed-form inequalities on the exact `ℓ_f ∩ ∂U` roots,
//! every remainder bounded explicitly.  `true` certifies admissibility;
//! `false` is *not* a claim of inadmissibility.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::WallsError;
use crate::plane::parabola_roots;
use crate::rat::{rat, rint, Rat};
use crate::stability::bg_line;
use crate::threefold::{KClass, ThreefoldModel};

/// Conservative sufficient checklist for `n₀`, evaluated exactly on the
/// roots `b₁ ≤ b₂` of `ℓ_f ∩ ∂U` for `v_{n₀} = v − [O(−n₀)]`:
///
/// 1. `Δ_H(v_{n₀}) > 0`, `ℓ_f` defined, roots distinct;
/// 2. `slope(ℓ_f) > −n₀/4 − |s₀|·H³` (shallowness);
/// 3. `b₂ − 2b₁ > n₀ + c` (left root deep enough);
/// 4. `b₂ − b₁ > (4/3)c` (chord long enough for the trichotomy);
/// 5. `⌈(−b₁)H³⌉/H³ ≥ n₀ − c/3` (every admissible twist stays on the chord);
/// 6. `b₁ + n₀ − c/3 < 1/(3H³)` (margin for the last twist);
/// 7. `b₂ − b₁ ≥ (3/2)n₀ − (5/12)c + 3s₀/(2c) − c` (separation).
pub fn n0_admissible(v: &KClass, n0: &Rat, x: &ThreefoldModel) -> bool {
    if !v.r.is_zero() || !v.c.is_positive() || !n0.is_positive() {
        return false;
    }
    let h3 = x.h3_rat();
    let c = &v.c;
    let s0 = &v.s;

    let v_n0 = v - &KClass::line_bundle(&-n0);
    if !v_n0.delta_reduced().is_positive() {
        return false;
    }
    let lf = match bg_line(&v_n0, x) {
        Ok(l) => l,
        Err(_) => return false,
    };
    let (b1, b2) = match parabola_roots(&lf) {
        Ok(r) => r,
        Err(_) => return false,
    };
    if b1 == b2 {
        return false;
    }
    let slope = match lf.slope() {
        Some(m) => m,
        None => return false,
    };

    if slope <= -(n0 / rint(4)) - s0.abs() * &h3 {
        return false;
    }
    if b2.sub(&b1).sub(&b1).cmp_rat(&(n0 + c)) != Ordering::Greater {
        return false;
    }
    let chord = b2.sub(&b1);
    if chord.cmp_rat(&(rat(4, 3) * c)) != Ordering::Greater {
        return false;
    }
    // ⌈(−b₁)H³⌉ = −⌊b₁·H³⌋.
    let ceil_scaled: BigInt = -b1.mul_rat(&h3).floor();
    let rounded = Rat::from(ceil_scaled) / &h3;
    if rounded < n0 - c / rint(3) {
        return false;
    }
    if b1.add_rat(&(n0 - c / rint(3))).cmp_rat(&(rint(1) / (rint(3) * &h3))) != Ordering::Less {
        return false;
    }
    let separation = rat(3, 2) * n0 - rat(5, 12) * c + rat(3, 2) * s0 / c - c;
    if chord.cmp_rat(&separation) == Ordering::Less {
        return false;
    }
    true
}

/// Doubling-then-bisection search for the least integer `n₀` accepted by
/// [`n0_admissible`] (exact minimality relies on the checklist being
/// monotone past its threshold, which holds on all tested inputs).
pub fn minimal_admissible_n0(v: &KClass, x: &ThreefoldModel) -> Result<Rat, WallsError> {
    if !v.r.is_zero() || !v.c.is_positive() {
        return Err(WallsError::DegenerateClass(
            "admissibility search expects a rank-0 class with c > 0".into(),
        ));
    }
    const CAP: i64 = 1 << 40;
    let mut hi: i64 = 1;
    while !n0_admissible(v, &rint(hi), x) {
        if hi >= CAP {
            return Err(WallsError::UnboundedSearch(format!(
                "no admissible n₀ found up to {}",
                hi
            )));
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // 0 when hi = 1; in either case not admissible
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if n0_admissible(v, &rint(mid), x) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(rint(hi))
}
