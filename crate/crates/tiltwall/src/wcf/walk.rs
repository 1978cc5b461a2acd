//! The ascending wall-walk for `v_{n₀} = v − [O(−n₀)]`.
//!
//! Starting from the vanishing chamber below the slope-bound line, where
//! the invariant of `v_{n₀}` is zero, the walk crosses every candidate
//! wall in the region to the right of `Π(v_{n₀})` in ascending order and
//! accumulates the crossing terms, terminating at large volume with a
//! relation for `J_{b,∞}(v_{n₀})` in rank 0 symbols of smaller degree,
//! rank `−1` symbols, and placeholder coefficients.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::plane::{pi, PlanePoint};
use crate::rat::{rint, Rat};
use crate::stability::bg_line;
use crate::threefold::{KClass, ThreefoldModel};
use crate::walls::{
    classify_destabilizer, close_to, n0_admissible, wall_candidates, ClassificationCase, Limits,
    Region, Wall,
};

use super::{
    merge_terms, oriented_coefficient, require_calabi_yau, wall_witnesses, ChamberTag, Derivation,
    InvariantSymbol, Provenance, Relation, Term, WcfError,
};

/// A class is primitive when no integer `k ≥ 2` divides it within the
/// integral lattice.  Rank `±1` classes are always primitive; for the
/// rest the divisor search is bounded by the rank or the degree.
fn is_primitive(a: &KClass, x: &ThreefoldModel) -> bool {
    let bound = if a.r.is_zero() {
        let ch = &a.c * x.h3_rat();
        if !ch.is_integer() {
            return true;
        }
        ch.to_integer().abs().to_i64().unwrap_or(0)
    } else if a.r.is_integer() {
        a.r.to_integer().abs().to_i64().unwrap_or(0)
    } else {
        return true;
    };
    for k in 2..=bound.max(1) {
        let kk = rint(k);
        let scaled = KClass::new_rat(&a.r / &kk, &a.c / &kk, &a.s / &kk, &a.d / &kk);
        if x.integrality_check(&scaled) {
            return false;
        }
    }
    true
}

/// An unexpanded universal coefficient symbol: classes sorted
/// canonically, pairing matrix in the same order.
pub(super) fn placeholder(classes: Vec<&KClass>, x: &ThreefoldModel) -> InvariantSymbol {
    let mut sorted: Vec<KClass> = classes.into_iter().cloned().collect();
    sorted.sort_by_key(|c| serde_json::to_string(c).expect("classes serialize"));
    let pairing = sorted
        .iter()
        .map(|a| sorted.iter().map(|b| x.euler_pair(a, b)).collect())
        .collect();
    InvariantSymbol::PlaceholderC {
        classes: sorted,
        pairing,
    }
}

/// A witness with finite slope for `class` near the chord midpoint of
/// `line`; shifts right by one if the midpoint is the slope pole.
fn finite_witness_below(
    line: &crate::plane::PlaneLine,
    class: &KClass,
) -> Result<PlanePoint, WcfError> {
    let (below, _) = wall_witnesses(line)?;
    if !(&class.c - &below.b * &class.r).is_zero() {
        return Ok(below);
    }
    let b = &below.b + rint(1);
    let w0 = line.w_at(&b).expect("non-vertical line");
    let w = (&b * &b / rint(2) + &w0) / rint(2);
    Ok(PlanePoint::new(b, w))
}

/// Chain the crossing relations for `v_{n₀} = v − [O(−n₀)]` from the
/// vanishing region below the slope-bound line up to large volume.
///
/// Each candidate wall in the region right of `Π(v_{n₀})` contributes one
/// relation `J_below = J_above + Σ χ̄·(factor symbols)`.  Decompositions
/// are classified first; those certified unrealizable drop out:
///
/// * rank splits other than `(0, −1)` — precisely one factor of a
///   destabilizing sequence has rank `−1` here;
/// * Joyce–Song-shaped splits (`c′ = 0`) whose rank `−1` factor is not
///   exactly `−[O(−n₀)]`.
///
/// Surviving factors are substituted by their chamber-independent
/// values: the `−[O(−n₀)]` factor counts `#tors` line bundles, rank 0
/// factors and safe rank `−1` factors take their large-volume symbols,
/// and close rank `−1` factors stay tagged just above their wall.  A
/// wall whose every split drops is omitted.  Imprimitive splits keep a
/// symbolic placeholder coefficient instead of `χ̄`.
///
/// Walls whose factors survive the numerical sieve need not carry actual
/// semistable objects, so their terms are retained as symbols that may
/// be zero; the steps are recorded in substitution order (descending
/// `w`), ending with the zero relation below the slope-bound line.
pub fn walk_walls(
    v: &KClass,
    n0: &Rat,
    x: &ThreefoldModel,
    limits: &Limits,
) -> Result<Derivation, WcfError> {
    require_calabi_yau(x)?;
    if !v.r.is_zero() || !v.c.is_positive() {
        return Err(WcfError::OutOfRange(
            "the walk starts from a rank 0 class with positive degree".into(),
        ));
    }
    if !x.integrality_check(v) {
        return Err(WcfError::OutOfRange(format!(
            "{v} fails the integrality check for the model"
        )));
    }
    if !n0_admissible(v, n0, x) {
        return Err(WcfError::NotAdmissible(n0.clone()));
    }

    let w_n = v - &KClass::line_bundle(&-n0);
    let lf = bg_line(&w_n, x)?;
    let region = Region {
        above_line: lf.clone(),
        right_of: Some(pi(&w_n)?.b),
    };
    let walls = wall_candidates(&w_n, &region, x, limits)?;
    let witness = close_to(&w_n, v, n0, x)?;
    let t_shift = -&KClass::line_bundle(&-n0);

    // Pass 1, in candidate order (descending w): build each wall's
    // relation and remember its substituted crossing terms.
    let mut steps: Vec<Relation> = Vec::new();
    let mut crossing_terms: Vec<Vec<Term>> = Vec::new();
    let mut all_coefficients: Vec<Rat> = Vec::new();
    for wall in &walls {
        let (wit_below, wit_above) = wall_witnesses(&wall.line)?;
        let mut terms: Vec<Term> = Vec::new();
        let mut coefficients: Vec<Rat> = Vec::new();
        let mut used = Vec::new();
        let mut dropped_ranks = 0u32;
        let mut dropped_js_shape = 0u32;
        let mut dropped_excluded = 0u32;
        for dec in &wall.decompositions {
            if !dec.v0.r.is_zero() || dec.v1.r != rint(-1) {
                dropped_ranks += 1;
                continue;
            }
            let cls = classify_destabilizer(&w_n, &witness, wall, dec, n0, x)?;
            if cls.case == ClassificationCase::Excluded {
                dropped_excluded += 1;
                continue;
            }
            let mut dec = dec.clone();
            let rem = v - &dec.v0;
            dec.c_prime = Some(rem.c);
            dec.s_prime = Some(rem.s);
            dec.d_prime = Some(rem.d);
            dec.classification = Some(cls.clone());
            match cls.case {
                ClassificationCase::Excluded => unreachable!(),
                ClassificationCase::JsWallTFactor => {
                    if dec.v1 != t_shift {
                        dropped_js_shape += 1;
                        continue;
                    }
                    let (_, _, k) = oriented_coefficient(&dec.v0, &dec.v1, &wall.line, x)?;
                    let coeff = &k * rint(x.tors);
                    terms.push(Term::new(
                        coeff.clone(),
                        vec![InvariantSymbol::j_large_volume(&dec.v0)?],
                    ));
                    coefficients.push(coeff);
                }
                ClassificationCase::SafeDescent | ClassificationCase::CloseDescent => {
                    let s0 = InvariantSymbol::j_large_volume(&dec.v0)?;
                    let s1 = if cls.case == ClassificationCase::SafeDescent {
                        InvariantSymbol::j_large_volume(&dec.v1)?
                    } else {
                        InvariantSymbol::j_at(
                            &dec.v1,
                            ChamberTag::Above(wall.line.clone()),
                            Some(wit_above.clone()),
                        )?
                    };
                    if is_primitive(&dec.v0, x) && is_primitive(&dec.v1, x) {
                        let (_, _, k) = oriented_coefficient(&dec.v0, &dec.v1, &wall.line, x)?;
                        if !k.is_zero() {
                            terms.push(Term::new(k.clone(), vec![s0, s1]));
                        }
                        coefficients.push(k);
                    } else {
                        terms.push(Term::new(
                            rint(1),
                            vec![placeholder(vec![&dec.v0, &dec.v1], x), s0, s1],
                        ));
                    }
                }
            }
            used.push(dec);
        }
        if used.is_empty() {
            continue;
        }
        let mut notes = Vec::new();
        if dropped_ranks > 0 {
            notes.push(format!(
                "dropped {dropped_ranks} split(s) without a single rank −1 factor"
            ));
        }
        if dropped_excluded > 0 {
            notes.push(format!(
                "dropped {dropped_excluded} split(s) excluded by the degree trichotomy"
            ));
        }
        if dropped_js_shape > 0 {
            notes.push(format!(
                "dropped {dropped_js_shape} Joyce–Song-shaped split(s) whose rank −1 factor is not −[O(−n₀)]"
            ));
        }
        let wall_record = Wall {
            line: wall.line.clone(),
            kind: wall.kind,
            slope: wall.slope.clone(),
            decompositions: used,
        };
        all_coefficients.extend(coefficients.iter().cloned());
        let left = InvariantSymbol::j_at(
            &w_n,
            ChamberTag::Below(wall.line.clone()),
            Some(wit_below),
        )?;
        let mut right = vec![Term::new(
            rint(1),
            vec![InvariantSymbol::j_at(
                &w_n,
                ChamberTag::Above(wall.line.clone()),
                Some(wit_above),
            )?],
        )];
        right.extend(terms.iter().cloned());
        steps.push(Relation::new(
            left,
            right,
            Provenance {
                citation_tag: "wall_crossing".into(),
                wall: Some(wall_record),
                coefficients,
                notes,
            },
        ));
        crossing_terms.push(terms);
    }

    // The vanishing chamber: no semistable objects exist below the
    // slope-bound line, so the walk starts from the zero relation.
    steps.push(Relation::new(
        InvariantSymbol::j_at(
            &w_n,
            ChamberTag::Below(lf.clone()),
            Some(finite_witness_below(&lf, &w_n)?),
        )?,
        Vec::new(),
        Provenance {
            citation_tag: "bogomolov_gieseker_vanishing".into(),
            wall: None,
            coefficients: Vec::new(),
            notes: vec!["no semistable objects exist below the slope-bound line".into()],
        },
    ));

    // Pass 2, ascending: substitute each chamber value into the next
    // crossing, J_above = J_below − Σ, starting from zero.
    let mut acc: Vec<Term> = Vec::new();
    for terms in crossing_terms.iter().rev() {
        for t in terms {
            acc.push(Term::new(-&t.coefficient, t.symbols.clone()));
        }
        acc = merge_terms(acc);
    }
    let final_relation = Relation::new(
        InvariantSymbol::j_large_volume(&w_n)?,
        acc,
        Provenance {
            citation_tag: "wall_walk".into(),
            wall: None,
            coefficients: all_coefficients,
            notes: vec![
                "walls are numerically enumerated candidates; retained terms carry symbols that may vanish"
                    .into(),
            ],
        },
    );
    Ok(Derivation {
        steps,
        final_relation,
    })
}
