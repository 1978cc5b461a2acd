//! Candidate-wall enumeration.
//!
//! [`wall_candidates`] lists every line that could support a numerical
//! decomposition `v = v₁ + v₂` destabilizing `v` inside a region of `U`,
//! for parents of rank 0 or −1.  The search is exact and certified
//! finite: factors live on the integral lattice (integer rank and `ch₁`,
//! Euler characteristics integral), discriminant subadditivity bounds
//! the `(c₁, s₁)` box in closed form, and the third component is pinned
//! by the positivity form evaluated on the wall.  Every cap is an
//! explicit [`Limits`] field and overrunning one is an error, never a
//! silent truncation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Decomposition, Limits, Wall, WallKind, WallsError};
use crate::plane::{parabola_roots, PlaneError, PlaneLine};
use crate::quad::QuadNum;
use crate::rat::{rat, rat_opt_serde, rint, Rat};
use crate::stability::bg_form_half;
use crate::threefold::{KClass, ThreefoldModel};

/// Search region: the part of `U` strictly above `above_line` and, when
/// set, strictly to the right of `b = right_of`.  A line missing `∂U`
/// entirely lies below it, so the constraint is vacuous and the region
/// is all of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub above_line: PlaneLine,
    #[serde(with = "rat_opt_serde", skip_serializing_if = "Option::is_none", default)]
    pub right_of: Option<Rat>,
}

impl Region {
    /// All of `U`: above a line that never meets the parabola.
    pub fn all_of_u() -> Self {
        Region {
            above_line: PlaneLine::from_rational(&rint(0), &rint(1), &rint(-1))
                .expect("constant line is well formed"),
            right_of: None,
        }
    }
}

struct Cx<'a> {
    v: &'a KClass,
    x: &'a ThreefoldModel,
    limits: &'a Limits,
    right_of: Option<&'a Rat>,
    /// Parabola roots of the region line; `None` means the constraint is
    /// vacuous.
    rho: Option<(QuadNum, QuadNum)>,
    dbar: Rat,
    h3: Rat,
    c2h: Rat,
}

#[derive(Default)]
struct SliceOut {
    pairs: Vec<(PlaneLine, Decomposition)>,
    examined: u64,
    contributed: bool,
}

fn qceil(q: &QuadNum) -> BigInt {
    -q.neg().floor()
}

fn cap_error(limit: u64) -> WallsError {
    WallsError::UnboundedSearch(format!(
        "examined more than max_candidates = {} factor candidates",
        limit
    ))
}

/// `ℓ` strictly above the parabola at `b = q`.
fn strictly_above_parabola(line: &PlaneLine, q: &QuadNum) -> bool {
    let (a, b, c) = line.coefficients();
    let bq = Rat::from(b.clone());
    let w = q
        .mul_rat(&(-Rat::from(a.clone()) / &bq))
        .add_rat(&(Rat::from(c.clone()) / &bq));
    w > q.mul(q).mul_rat(&rat(1, 2))
}

/// Does the wall's open chord `(b₁ℓ, b₂ℓ)` meet the part of `U` strictly
/// above the region line?  The lower boundary of that set is the region
/// chord `[ρ₁, ρ₂]` capped by the parabola, so a line meets it exactly
/// when it passes strictly above one of the corners `(ρᵢ, ρᵢ²/2)`, or
/// its chord lies entirely beyond the region chord (where the parabola
/// itself is the binding constraint).
fn region_keeps(
    rho: Option<&(QuadNum, QuadNum)>,
    line: &PlaneLine,
    b1l: &QuadNum,
    b2l: &QuadNum,
) -> bool {
    let Some((r1, r2)) = rho else { return true };
    if strictly_above_parabola(line, r1) || strictly_above_parabola(line, r2) {
        return true;
    }
    b1l >= r2 || b2l <= r1
}

/// The positivity form `½B` of `u`, restricted to the wall, as an affine
/// function of `b`: returns `(slope, intercept)`.
fn half_bg_affine(u: &KClass, line: &PlaneLine, x: &ThreefoldModel) -> (Rat, Rat) {
    let w0 = line.w_at(&rint(0)).expect("wall lines are non-vertical");
    let w1 = line.w_at(&rint(1)).expect("wall lines are non-vertical");
    let e0 = bg_form_half(&rint(0), &w0, u, x);
    let e1 = bg_form_half(&rint(1), &w1, u, x);
    (&e1 - &e0, e0)
}

/// `P(q)/(−G(q))` for the affine pair `P = p_sl·b + p_in`,
/// `G = g_sl·b + g_in`, at a chord endpoint.  `−G > 0` on the open chord
/// by positivity; at an endpoint it may vanish, which is the tangency
/// `Δ_H(u) = 0` when `P` vanishes with it (the ratio is then constant)
/// and a genuine divergence of the bound otherwise.
fn ratio_at(
    q: &QuadNum,
    p_sl: &Rat,
    p_in: &Rat,
    g_sl: &Rat,
    g_in: &Rat,
) -> Result<QuadNum, WallsError> {
    let den = q.mul_rat(&-g_sl.clone()).add_rat(&-g_in.clone());
    let num = q.mul_rat(p_sl).add_rat(p_in);
    if den.sign() == 0 {
        if num.sign() == 0 {
            Ok(QuadNum::from_rat(-(p_sl / g_sl)))
        } else {
            Err(WallsError::UnboundedSearch(
                "positivity bound diverges at a chord endpoint".into(),
            ))
        }
    } else {
        Ok(num.div(&den))
    }
}

fn slice_candidates(cx: &Cx, t: i64) -> Result<SliceOut, WallsError> {
    let mut out = SliceOut::default();
    let v = cx.v;
    let r1 = rint(t);
    let r2 = &v.r - &r1;
    let u = -&r2; // positive for both supported parent ranks

    // Integer windows for c₁ = ch₁(v₁)·H²/H³.
    //
    // Rank-0 parent, ranks (t, −t), t ≥ 1: the projections of both
    // factors sit on the wall (slope σ = s/c) outside its chord, one on
    // each side, and positivity of both factors at a chord point forces
    // t·σ ≤ c₁ ≤ t·σ + c.
    //
    // Rank −1 parent, ranks (t, −1−t): the chord-side analysis against
    // Δ_H-subadditivity gives t·√Δ̄ ≤ |c₁ + t·c| ≤ (1+t)·√Δ̄ (for t = 0
    // this is |c₁| ≤ √Δ̄; a rank-0 factor additionally needs c₁ ≥ 1).
    let mut windows: Vec<(BigInt, BigInt)> = Vec::new();
    if v.r.is_zero() {
        let lo = &r1 * &v.s / &v.c;
        let hi = &lo + &v.c;
        windows.push((lo.ceil().to_integer(), hi.floor().to_integer()));
    } else {
        let sq = QuadNum::sqrt(&cx.dbar).expect("Δ̄ ≥ 0 was checked");
        let center = -(&r1 * &v.c);
        let inner = sq.mul_rat(&rint(t));
        let outer = sq.mul_rat(&rint(t + 1));
        let lo1 = qceil(&outer.neg().add_rat(&center));
        let hi1 = inner.neg().add_rat(&center).floor();
        let lo2 = qceil(&inner.add_rat(&center));
        let hi2 = outer.add_rat(&center).floor();
        if hi1 >= lo2 {
            windows.push((lo1, hi2));
        } else {
            windows.push((lo1, hi1));
            windows.push((lo2, hi2));
        }
    }

    for (lo, hi) in windows {
        let mut c1int = lo;
        while c1int <= hi {
            let c1r = Rat::from(c1int.clone());
            c1int += 1u32;
            if t == 0 && !c1r.is_positive() {
                continue;
            }
            examine_c1(cx, &mut out, &r1, &r2, &u, &c1r)?;
        }
    }
    Ok(out)
}

fn examine_c1(
    cx: &Cx,
    out: &mut SliceOut,
    r1: &Rat,
    r2: &Rat,
    u: &Rat,
    c1r: &Rat,
) -> Result<(), WallsError> {
    let v = cx.v;
    let h3 = &cx.h3;
    let c2 = &v.c - c1r;

    // `0 ≤ Δ_H(v₂) ≤ Δ_H(v)` pins s₁ to an interval; for a positive-rank
    // factor, `0 ≤ Δ_H(v₁) ≤ Δ_H(v)` adds a second one.
    let mut lo_s = &v.s + (&c2 * &c2 - &cx.dbar) / (rint(2) * u);
    let mut hi_s = &v.s + &c2 * &c2 / (rint(2) * u);
    if r1.is_positive() {
        let lo1 = (c1r * c1r - &cx.dbar) / (rint(2) * r1);
        let hi1 = c1r * c1r / (rint(2) * r1);
        if lo1 > lo_s {
            lo_s = lo1;
        }
        if hi1 < hi_s {
            hi_s = hi1;
        }
    }
    if lo_s > hi_s {
        return Ok(());
    }

    // χ(v₁(1)) − χ(v₁) ∈ ℤ parametrizes the s₁ grid:
    // s₁ = (m − T)/H³ with T = H³c₁/2 + H³r₁/6 + r₁(c₂H)/12.
    let tcoset = h3 * c1r / rint(2) + h3 * r1 / rint(6) + r1 * &cx.c2h / rint(12);
    let m_hi = (h3 * &hi_s + &tcoset).floor().to_integer();
    let mut m = (h3 * &lo_s + &tcoset).ceil().to_integer();
    while m <= m_hi {
        let mr = Rat::from(m.clone());
        m += 1u32;
        out.examined += 1;
        if out.examined > cx.limits.max_candidates {
            return Err(cap_error(cx.limits.max_candidates));
        }
        let s1 = (&mr - &tcoset) / h3;
        examine_pair(cx, out, r1, r2, c1r, &c2, &s1)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn examine_pair(
    cx: &Cx,
    out: &mut SliceOut,
    r1: &Rat,
    r2: &Rat,
    c1r: &Rat,
    c2: &Rat,
    s1: &Rat,
) -> Result<(), WallsError> {
    let v = cx.v;
    let h3 = &cx.h3;
    let s2 = &v.s - s1;

    let d1bar = c1r * c1r - rint(2) * r1 * s1;
    let d2bar = c2 * c2 - rint(2) * r2 * &s2;
    if d1bar.is_negative()
        || d2bar.is_negative()
        || d1bar > cx.dbar
        || d2bar > cx.dbar
        || &d1bar + &d2bar > cx.dbar
    {
        return Ok(());
    }

    // The locus ν(v₁) = ν(v); the bilinear terms cancel, so it is a line.
    let la = s1 * &v.r - &v.s * r1;
    let lb = r1 * &v.c - &v.r * c1r;
    let lc = s1 * &v.c - &v.s * c1r;
    if lb.is_zero() {
        // Vertical (or v₁ proportional to v): not a wall.
        return Ok(());
    }
    let line = PlaneLine::from_rational(&la, &lb, &lc)?;
    let (b1l, b2l) = match parabola_roots(&line) {
        Ok(roots) => roots,
        Err(PlaneError::NoIntersection) => return Ok(()),
        Err(e) => return Err(e.into()),
    };
    if b1l == b2l {
        return Ok(());
    }

    // Positivity of parent and factors somewhere on the chord.  Each
    // projection lies on the line below the parabola, hence outside the
    // open chord, so its cutoff either frees the whole chord or forbids
    // it entirely.
    for (ru, cu) in [(&v.r, &v.c), (r1, c1r), (r2, c2)] {
        if ru.is_zero() {
            if !cu.is_positive() {
                return Ok(());
            }
        } else {
            let cutoff = cu / ru;
            if ru.is_positive() {
                if b2l.cmp_rat(&cutoff) == Ordering::Greater {
                    return Ok(());
                }
            } else if b1l.cmp_rat(&cutoff) == Ordering::Less {
                return Ok(());
            }
        }
    }

    if !region_keeps(cx.rho.as_ref(), &line, &b1l, &b2l) {
        return Ok(());
    }
    if let Some(r0) = cx.right_of {
        if b2l.cmp_rat(r0) != Ordering::Greater {
            return Ok(());
        }
    }

    // Resolve the third component: χ(v₁) = k ∈ ℤ, i.e.
    // d₁ = (k − c₁(c₂H)/12)/H³, bounded through ½B(vᵢ) ≥ 0 on the chord.
    // With the d-part zeroed, ½B(u)|wall = P_u(b) + d_u·G_u(b) where
    // G_u(b) = 3H⁶(r_u·b − c_u) < 0 under positivity, so
    // d_u ≤ P_u/(−G_u), a Möbius bound maximized at the endpoints.
    let three_h6 = rint(3) * h3 * h3;
    let (av, bv) = half_bg_affine(v, &line, cx.x);
    let z1 = KClass::new_rat(r1.clone(), c1r.clone(), s1.clone(), Rat::zero());
    let (p1s, p1i) = half_bg_affine(&z1, &line, cx.x);
    let (g1s, g1i) = (&three_h6 * r1, -(&three_h6 * c1r));
    let z2 = KClass::new_rat(r2.clone(), c2.clone(), s2.clone(), Rat::zero());
    let (p2s, p2i) = half_bg_affine(&z2, &line, cx.x);
    let (g2s, g2i) = (&three_h6 * r2, -(&three_h6 * c2));

    let u1a = ratio_at(&b1l, &p1s, &p1i, &g1s, &g1i)?;
    let u1b = ratio_at(&b2l, &p1s, &p1i, &g1s, &g1i)?;
    let u1max = if u1a >= u1b { u1a } else { u1b };
    let u2a = ratio_at(&b1l, &p2s, &p2i, &g2s, &g2i)?;
    let u2b = ratio_at(&b2l, &p2s, &p2i, &g2s, &g2i)?;
    let u2max = if u2a >= u2b { u2a } else { u2b };

    let shift = c1r * &cx.c2h / rint(12);
    let k_hi = u1max.mul_rat(h3).add_rat(&shift).floor();
    let mut k = qceil(&u2max.neg().add_rat(&v.d).mul_rat(h3).add_rat(&shift));
    while k <= k_hi {
        let kr = Rat::from(k.clone());
        k += 1u32;
        out.examined += 1;
        if out.examined > cx.limits.max_candidates {
            return Err(cap_error(cx.limits.max_candidates));
        }
        let d1 = (&kr - &shift) / h3;
        let d2 = &v.d - &d1;

        // ∃ b₀ on the open chord with ½B ≥ 0 for parent and factors:
        // three affine conditions cut a rational interval.
        let conds = [
            (av.clone(), bv.clone()),
            (&p1s + &d1 * &g1s, &p1i + &d1 * &g1i),
            (&p2s + &d2 * &g2s, &p2i + &d2 * &g2i),
        ];
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        let mut ok = true;
        for (al, be) in &conds {
            match al.cmp(&Rat::zero()) {
                Ordering::Greater => {
                    let bound = -(be / al);
                    if lo.as_ref().map_or(true, |l| &bound > l) {
                        lo = Some(bound);
                    }
                }
                Ordering::Less => {
                    let bound = -(be / al);
                    if hi.as_ref().map_or(true, |h| &bound < h) {
                        hi = Some(bound);
                    }
                }
                Ordering::Equal => {
                    if be.is_negative() {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                continue;
            }
        }
        if let Some(l) = &lo {
            if b2l.cmp_rat(l) != Ordering::Greater {
                continue;
            }
        }
        if let Some(h) = &hi {
            if b1l.cmp_rat(h) != Ordering::Less {
                continue;
            }
        }

        let v1k = KClass::new_rat(r1.clone(), c1r.clone(), s1.clone(), d1);
        let v2k = v - &v1k;
        out.pairs.push((line.clone(), Decomposition::new(v1k, v2k)));
        out.contributed = true;
    }
    Ok(())
}

/// Enumerate candidate walls for `v` (rank 0 or −1) inside `region`.
///
/// The output is a finite *superset* of the true walls: every line
/// carries at least one decomposition passing the exact discriminant,
/// positivity, and `½B`-feasibility filters at some rational point of
/// its chord, but a numerical decomposition need not be realized by
/// objects.  Walls are sorted by strictly descending slope (ties by
/// canonical line triple); decompositions by `(v0.c, v0.s, v0.d, v0.r)`
/// with `v0` the factor of non-negative rank.
pub fn wall_candidates(
    v: &KClass,
    region: &Region,
    x: &ThreefoldModel,
    limits: &Limits,
) -> Result<Vec<Wall>, WallsError> {
    if limits.max_rank < 1 {
        return Err(WallsError::OutOfRange(
            "max_rank must be at least 1".into(),
        ));
    }
    if v.r.is_zero() && v.c.is_zero() && v.s.is_zero() {
        return Err(WallsError::DegenerateClass(
            "ch^{≤2}(v) = 0 supports no walls".into(),
        ));
    }
    if !v.r.is_zero() && v.r != rint(-1) {
        return Err(WallsError::OutOfRange(format!(
            "wall enumeration supports parent ranks 0 and −1, got {}",
            v.r
        )));
    }
    let dbar = v.delta_reduced();
    if dbar.is_negative() {
        return Err(WallsError::NegativeDiscriminant(dbar));
    }
    let grid_denominator = 12 * x.h3;
    if grid_denominator > limits.max_denominator {
        return Err(WallsError::UnboundedSearch(format!(
            "χ-lattice denominator 12·H³ = {} exceeds max_denominator = {}",
            grid_denominator, limits.max_denominator
        )));
    }
    if region.above_line.is_vertical() {
        return Err(WallsError::OutOfRange(
            "the region boundary must be a non-vertical line".into(),
        ));
    }
    let rho = match parabola_roots(&region.above_line) {
        Ok(roots) => Some(roots),
        Err(PlaneError::NoIntersection) => None,
        Err(e) => return Err(e.into()),
    };
    if v.r.is_zero() && !v.c.is_positive() {
        return Ok(Vec::new());
    }

    let cx = Cx {
        v,
        x,
        limits,
        right_of: region.right_of.as_ref(),
        rho,
        dbar,
        h3: x.h3_rat(),
        c2h: x.c2h_rat(),
    };
    let first = if v.r.is_zero() { 1 } else { 0 };
    let slices: Vec<i64> = (first..=limits.max_rank).collect();

    let mut results: Vec<Option<Result<SliceOut, WallsError>>> =
        slices.iter().map(|_| None).collect();
    let n_threads = limits.threads.max(1).min(slices.len());
    if n_threads <= 1 {
        for (i, t) in slices.iter().enumerate() {
            results[i] = Some(slice_candidates(&cx, *t));
        }
    } else {
        let chunks: Vec<Vec<(usize, i64)>> = (0..n_threads)
            .map(|j| {
                slices
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i % n_threads == j)
                    .map(|(i, t)| (i, *t))
                    .collect()
            })
            .collect();
        let cxr = &cx;
        let collected: Vec<Vec<(usize, Result<SliceOut, WallsError>)>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .into_iter()
                    .map(|chunk| {
                        scope.spawn(move || {
                            chunk
                                .into_iter()
                                .map(|(i, t)| (i, slice_candidates(cxr, t)))
                                .collect()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("slice worker panicked"))
                    .collect()
            });
        for batch in collected {
            for (i, r) in batch {
                results[i] = Some(r);
            }
        }
    }

    // Merge in slice order: deterministic independent of scheduling.
    let top = *slices.last().expect("at least one slice");
    let mut total: u64 = 0;
    let mut by_line: BTreeMap<PlaneLine, Vec<Decomposition>> = BTreeMap::new();
    for (i, t) in slices.iter().enumerate() {
        let slice = results[i].take().expect("every slice ran")?;
        total += slice.examined;
        if total > limits.max_candidates {
            return Err(cap_error(limits.max_candidates));
        }
        if *t == top && slice.contributed {
            return Err(WallsError::UnboundedSearch(format!(
                "the rank-{} slice still produced candidates; raise max_rank to certify completeness",
                top
            )));
        }
        for (line, dec) in slice.pairs {
            by_line.entry(line).or_default().push(dec);
        }
    }
    if by_line.len() as u64 > limits.max_walls {
        return Err(WallsError::UnboundedSearch(format!(
            "more than max_walls = {} distinct wall lines",
            limits.max_walls
        )));
    }

    let minus_one = rint(-1);
    let mut walls: Vec<Wall> = by_line
        .into_iter()
        .map(|(line, mut decs)| {
            decs.sort_by(|p, q| {
                p.v0.c
                    .cmp(&q.v0.c)
                    .then_with(|| p.v0.s.cmp(&q.v0.s))
                    .then_with(|| p.v0.d.cmp(&q.v0.d))
                    .then_with(|| p.v0.r.cmp(&q.v0.r))
            });
            let joyce = v.r == minus_one
                && decs.iter().any(|d| {
                    let n = &d.v1.c;
                    d.v0.r.is_zero()
                        && d.v1.r == minus_one
                        && d.v1.s == -(n * n) / rint(2)
                        && d.v1.d == n * n * n / rint(6)
                });
            let slope = line.slope().expect("wall lines are non-vertical");
            Wall {
                line,
                kind: if joyce {
                    WallKind::JoyceSong
                } else {
                    WallKind::Generic
                },
                slope,
                decompositions: decs,
            }
        })
        .collect();
    walls.sort_by(|p, q| q.slope.cmp(&p.slope).then_with(|| p.line.cmp(&q.line)));
    Ok(walls)
}

/// `true` iff [`wall_candidates`] finds nothing for the rank-0 class
/// `v0` in the region of `U` on or above `lf`.
pub fn rank0_no_walls_above(
    v0: &KClass,
    lf: &PlaneLine,
    x: &ThreefoldModel,
    limits: &Limits,
) -> Result<bool, WallsError> {
    if !v0.r.is_zero() {
        return Err(WallsError::DegenerateClass(format!(
            "expected a rank-0 class, got rank {}",
            v0.r
        )));
    }
    let region = Region {
        above_line: lf.clone(),
        right_of: None,
    };
    Ok(wall_candidates(v0, &region, x, limits)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walls::{classify_destabilizer, close_to, ClassificationCase};

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    fn v0() -> KClass {
        KClass::new(0, rint(1), rat(-1, 2), rat(1, 6))
    }

    fn vn0() -> KClass {
        &v0() - &KClass::line_bundle(&rint(-10))
    }

    fn line(a: i64, b: i64, c: i64) -> PlaneLine {
        PlaneLine::from_rational(&rint(a), &rint(b), &rint(c)).unwrap()
    }

    fn lf_region() -> Region {
        Region {
            above_line: line(11, 4, 81),
            right_of: Some(rint(-11)),
        }
    }

    #[test]
    fn stable_pair_class_has_one_wall() {
        let x = quintic();
        let walls = wall_candidates(&v0(), &Region::all_of_u(), &x, &Limits::default()).unwrap();
        assert_eq!(walls.len(), 1);
        let w = &walls[0];
        assert_eq!(w.line, line(1, 2, 0));
        assert_eq!(w.slope, rat(-1, 2));
        assert_eq!(w.kind, WallKind::Generic);
        assert_eq!(w.decompositions.len(), 1);
        let dec = &w.decompositions[0];
        assert_eq!(dec.v0, KClass::new(1, rint(0), rint(0), rint(0)));
        assert_eq!(dec.v1, KClass::new(-1, rint(1), rat(-1, 2), rat(1, 6)));
        assert_eq!(&dec.v0 + &dec.v1, v0());
    }

    #[test]
    fn rank_zero_walls_are_parallel() {
        // A rank-0 class with several walls: all share the slope s/c.
        let x = quintic();
        let v = KClass::new(0, rint(2), rint(-1), rint(0));
        let walls = wall_candidates(&v, &Region::all_of_u(), &x, &Limits::default()).unwrap();
        assert!(!walls.is_empty());
        for w in &walls {
            assert_eq!(w.slope, rat(-1, 2));
            for dec in &w.decompositions {
                assert_eq!(&dec.v0 + &dec.v1, v);
                let dd = |u: &KClass| u.delta_reduced();
                assert!(!dd(&dec.v0).is_negative() && !dd(&dec.v1).is_negative());
                assert!(dd(&dec.v0) + dd(&dec.v1) <= dd(&v));
            }
        }
        // Distinct lines, descending canonical order on the tie-broken sort.
        for pair in walls.windows(2) {
            assert!(pair[0].line != pair[1].line);
            assert!(pair[0].line < pair[1].line);
        }
    }

    #[test]
    fn close_class_walls_in_the_fixed_region() {
        let x = quintic();
        let v = vn0();
        let walls = wall_candidates(&v, &lf_region(), &x, &Limits::default()).unwrap();

        assert!(walls.len() >= 2 && walls.len() <= 12, "got {}", walls.len());
        let first = &walls[0];
        assert_eq!(first.line, line(1, 2, 90));
        assert_eq!(first.kind, WallKind::JoyceSong);
        assert_eq!(first.slope, rat(-1, 2));
        // The canonical stable-pair factor sorts first on the wall.
        let dec = &first.decompositions[0];
        assert_eq!(dec.v0, v0());
        assert_eq!(dec.v1, KClass::new(-1, rint(10), rint(-50), rat(500, 3)));

        assert!(walls.iter().any(|w| w.line == line(7, 10, 428)));
        for pair in walls.windows(2) {
            assert!(pair[0].slope > pair[1].slope);
        }

        let witness = close_to(&v, &v0(), &rint(10), &x).unwrap();
        assert!(witness.close);
        for w in &walls {
            assert_ne!(w.line.slope(), None);
            for dec in &w.decompositions {
                // Every factor splits ranks (0, −1) with the rank −1 part
                // keeping a large degree, and none is excluded.
                assert!(dec.v0.r.is_zero());
                assert_eq!(dec.v1.r, rint(-1));
                assert_eq!(dec.v1.c, rint(10));
                assert!(dec.v1.c >= rint(10) - rat(1, 3));
                let cls = classify_destabilizer(&v, &witness, w, dec, &rint(10), &x).unwrap();
                assert_ne!(cls.case, ClassificationCase::Excluded);
                assert_eq!(cls.case, ClassificationCase::JsWallTFactor);
            }
        }
    }

    #[test]
    fn region_filters_respect_geometry() {
        let x = quintic();
        let limits = Limits::default();
        // The only wall of v0 is [1,2,0] with chord (−1, 0): it misses the
        // region above ℓ_f, and the region above [5,2,0] (corner at b=0).
        assert!(rank0_no_walls_above(&v0(), &line(11, 4, 81), &x, &limits).unwrap());
        assert!(rank0_no_walls_above(&v0(), &line(5, 2, 0), &x, &limits).unwrap());
        // A parallel line strictly below the wall covers it (here the
        // region line misses ∂U entirely, so the constraint is vacuous).
        assert!(!rank0_no_walls_above(&v0(), &line(1, 2, -2), &x, &limits).unwrap());

        // right_of beyond the chord empties the list; inside keeps it.
        let far = Region {
            above_line: line(0, 1, -1),
            right_of: Some(rint(5)),
        };
        assert!(wall_candidates(&v0(), &far, &x, &limits).unwrap().is_empty());
        let near = Region {
            above_line: line(0, 1, -1),
            right_of: Some(rat(-1, 2)),
        };
        assert_eq!(wall_candidates(&v0(), &near, &x, &limits).unwrap().len(), 1);
    }

    #[test]
    fn caps_error_instead_of_truncating() {
        let x = quintic();
        let v = v0();
        let r = Region::all_of_u();

        let mut l = Limits::default();
        l.max_rank = 1; // the contributing slice is now the top slice
        assert!(matches!(
            wall_candidates(&v, &r, &x, &l),
            Err(WallsError::UnboundedSearch(_))
        ));

        let mut l = Limits::default();
        l.max_denominator = 30; // 12·H³ = 60 on the quintic
        assert!(matches!(
            wall_candidates(&v, &r, &x, &l),
            Err(WallsError::UnboundedSearch(_))
        ));

        let mut l = Limits::default();
        l.max_candidates = 1;
        assert!(matches!(
            wall_candidates(&v, &r, &x, &l),
            Err(WallsError::UnboundedSearch(_))
        ));

        let mut l = Limits::default();
        l.max_walls = 0;
        assert!(matches!(
            wall_candidates(&v, &r, &x, &l),
            Err(WallsError::UnboundedSearch(_))
        ));
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let x = quintic();
        let r = Region::all_of_u();
        let l = Limits::default();
        assert!(matches!(
            wall_candidates(&KClass::new(2, rint(1), rint(0), rint(0)), &r, &x, &l),
            Err(WallsError::OutOfRange(_))
        ));
        assert!(matches!(
            wall_candidates(&KClass::new(-1, rint(1), rint(-1), rint(0)), &r, &x, &l),
            Err(WallsError::NegativeDiscriminant(d)) if d == rint(-1)
        ));
        assert!(matches!(
            wall_candidates(&KClass::new(0, rint(0), rint(0), rint(1)), &r, &x, &l),
            Err(WallsError::DegenerateClass(_))
        ));
        // Rank 0 with c ≤ 0 supports no heart objects: empty, not an error.
        assert!(wall_candidates(&KClass::new(0, rint(-2), rint(1), rint(0)), &r, &x, &l)
            .unwrap()
            .is_empty());

        let vertical = Region {
            above_line: PlaneLine::from_rational(&rint(1), &rint(0), &rint(3)).unwrap(),
            right_of: None,
        };
        assert!(matches!(
            wall_candidates(&v0(), &vertical, &x, &l),
            Err(WallsError::OutOfRange(_))
        ));
    }

    #[test]
    fn threading_is_deterministic() {
        let x = quintic();
        let v = vn0();
        let mut l1 = Limits::default();
        l1.threads = 1;
        let mut l4 = Limits::default();
        l4.threads = 4;
        let w1 = wall_candidates(&v, &lf_region(), &x, &l1).unwrap();
        let w4 = wall_candidates(&v, &lf_region(), &x, &l4).unwrap();
        assert_eq!(w1, w4);
        assert_eq!(
            serde_json::to_string(&w1).unwrap(),
            serde_json::to_string(&w4).unwrap()
        );
    }

    #[test]
    fn region_serde_shape() {
        let r = lf_region();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["above_line"], serde_json::json!([11, 4, 81]));
        assert_eq!(v["right_of"], serde_json::json!([-11, 1]));
        let back: Region = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let bare: Region = serde_json::from_str(r#"{"above_line":[1,2,0]}"#).unwrap();
        assert_eq!(bare.right_of, None);
    }
}
