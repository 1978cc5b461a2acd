//! The Gieseker↔tilt comparison skeleton.
//!
//! At large volume, tilt stability of a rank 0 class dominates Gieseker
//! stability, and the two invariants differ by a sum over decompositions
//! into factors with the *same* truncated reduced Hilbert polynomial.
//! The universal coefficients of that sum are not expanded here; each
//! decomposition contributes a placeholder symbol carrying its classes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::hilbert::HilbertPolynomial;
use crate::rat::{rint, Rat};
use crate::threefold::{KClass, ThreefoldModel};
use crate::walls::Limits;

use super::{
    require_calabi_yau, InvariantSymbol, Provenance, Relation, Term, WcfError,
};

/// Partitions of `total` into exactly `parts` non-increasing positive
/// integers, each at most `max_part`.
fn partitions(total: i64, max_part: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let hi = max_part.min(total - (parts as i64 - 1));
    for first in (1..=hi).rev() {
        for mut rest in partitions(total - first, first, parts - 1) {
            let mut p = vec![first];
            p.append(&mut rest);
            out.push(p);
        }
    }
    out
}

/// Euler-characteristic splits `Σ χ_i = total` with `|χ_i| ≤ window`,
/// non-increasing along runs of equal degree so each multiset of factors
/// is produced once.
fn chi_splits(
    degrees: &[i64],
    total: &BigInt,
    window: i64,
    examined: &mut u64,
    cap: u64,
) -> Result<Vec<Vec<BigInt>>, WcfError> {
    fn rec(
        degrees: &[i64],
        idx: usize,
        remaining: BigInt,
        prefix: &mut Vec<BigInt>,
        window: i64,
        examined: &mut u64,
        cap: u64,
        out: &mut Vec<Vec<BigInt>>,
    ) -> Result<(), WcfError> {
        if idx == degrees.len() - 1 {
            *examined += 1;
            if *examined > cap {
                return Err(WcfError::Walls(
                    crate::walls::WallsError::UnboundedSearch(format!(
                        "more than {cap} Gieseker decomposition candidates"
                    )),
                ));
            }
            let last = remaining;
            if last < BigInt::from(-window) || last > BigInt::from(window) {
                return Ok(());
            }
            if idx > 0 && degrees[idx] == degrees[idx - 1] && last > prefix[idx - 1] {
                return Ok(());
            }
            let mut split = prefix.clone();
            split.push(last);
            out.push(split);
            return Ok(());
        }
        let upper = if idx > 0 && degrees[idx] == degrees[idx - 1] {
            prefix[idx - 1]
                .to_i64()
                .map_or(window, |p| p.min(window))
        } else {
            window
        };
        for c in (-window..=upper).rev() {
            prefix.push(BigInt::from(c));
            rec(
                degrees,
                idx + 1,
                &remaining - c,
                prefix,
                window,
                examined,
                cap,
                out,
            )?;
            prefix.pop();
        }
        Ok(())
    }

    let mut out = Vec::new();
    let mut prefix = Vec::new();
    rec(
        degrees,
        0,
        total.clone(),
        &mut prefix,
        window,
        examined,
        cap,
        &mut out,
    )?;
    Ok(out)
}

/// The comparison relation for a rank 0 class `v` with positive integer
/// degree:
///
/// ```text
/// J_Gieseker(v) = J_{b,∞}(v) + Σ C(α₁,…,α_m) · Π J_{b,∞}(α_i)
/// ```
///
/// summed over integral decompositions `v = Σ α_i` (m ≥ 2) whose factors
/// are rank 0 with positive degree and share the truncated reduced
/// Hilbert polynomial of `v` — checked exactly, though for dimension-two
/// classes it amounts to equality of `s/c`.  The search box is bounded
/// by the limits: at most `max_rank` factors, factor Euler
/// characteristics at most `max_denominator` in magnitude, and at most
/// `max_candidates` candidates examined before erroring.  A class with
/// no decomposition in the box yields the plain equality
/// `J_Gieseker(v) = J_{b,∞}(v)`.
pub fn gieseker_tilt_skeleton(
    v: &KClass,
    x: &ThreefoldModel,
    limits: &Limits,
) -> Result<Relation, WcfError> {
    require_calabi_yau(x)?;
    if !v.r.is_zero() || !v.c.is_positive() {
        return Err(WcfError::OutOfRange(
            "the comparison applies to rank 0 classes of positive degree".into(),
        ));
    }
    if !v.c.is_integer() {
        return Err(WcfError::OutOfRange(format!(
            "degree c = {} is not an integer",
            v.c
        )));
    }
    if !x.integrality_check(v) {
        return Err(WcfError::OutOfRange(format!(
            "{v} fails the integrality check for the model"
        )));
    }
    let c_int = v.c.to_integer().to_i64().ok_or_else(|| {
        WcfError::OutOfRange("degree too large for the decomposition search".into())
    })?;
    let slope = &v.s / &v.c;
    let chi_total = x.euler(v);
    debug_assert!(chi_total.is_integer());
    let chi_total = chi_total.to_integer();
    let target = HilbertPolynomial::of(x, v)?.truncated();

    let window = limits.max_denominator.max(0);
    let max_parts = limits.max_rank.max(2).min(c_int.max(2)) as usize;
    let cap = limits.max_candidates;
    let mut examined = 0u64;

    let h3 = x.h3_rat();
    let c2h_term = x.c2h_rat() / rint(12);

    let mut right = vec![Term::new(rint(1), vec![InvariantSymbol::j_large_volume(v)?])];
    for m in 2..=max_parts {
        if (m as i64) > c_int {
            break;
        }
        for degrees in partitions(c_int, c_int - 1, m) {
            for split in chi_splits(&degrees, &chi_total, window, &mut examined, cap)? {
                let mut factors = Vec::with_capacity(m);
                let mut ok = true;
                for (ci, chi) in degrees.iter().zip(&split) {
                    let c = rint(*ci);
                    let s = &slope * &c;
                    let d = (Rat::from_integer(chi.clone()) - &c * &c2h_term) / &h3;
                    let alpha = KClass::new_rat(Rat::zero(), c, s, d);
                    if !x.integrality_check(&alpha)
                        || HilbertPolynomial::of(x, &alpha)?.truncated() != target
                    {
                        ok = false;
                        break;
                    }
                    factors.push(alpha);
                }
                if !ok {
                    continue;
                }
                let mut symbols = vec![super::walk::placeholder(factors.iter().collect(), x)];
                for alpha in &factors {
                    symbols.push(InvariantSymbol::j_large_volume(alpha)?);
                }
                right.push(Term::new(rint(1), symbols));
            }
        }
    }

    Ok(Relation::new(
        InvariantSymbol::JGieseker { class: v.clone() },
        right,
        Provenance {
            citation_tag: "gieseker_tilt_comparison".into(),
            wall: None,
            coefficients: Vec::new(),
            notes: vec![format!(
                "decompositions searched with at most {max_parts} factors and factor |χ| ≤ {window}"
            )],
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::walls::WallsError;

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    fn beta() -> KClass {
        KClass::new(0, rint(1), rat(-1, 2), rat(1, 6))
    }

    #[test]
    fn primitive_class_reduces_to_plain_equality() {
        let x = quintic();
        let rel = gieseker_tilt_skeleton(&beta(), &x, &Limits::default()).unwrap();
        assert_eq!(
            rel.left,
            InvariantSymbol::JGieseker {
                class: beta()
            }
        );
        assert_eq!(rel.right.len(), 1);
        assert_eq!(rel.right[0].coefficient, rint(1));
        assert_eq!(
            rel.right[0].symbols,
            vec![InvariantSymbol::j_large_volume(&beta()).unwrap()]
        );
    }

    #[test]
    fn doubled_class_lists_equal_polynomial_decompositions() {
        let x = quintic();
        let alpha = KClass::new(0, rint(2), rint(-1), rat(1, 3));
        let limits = Limits {
            max_denominator: 6,
            ..Limits::default()
        };
        let rel = gieseker_tilt_skeleton(&alpha, &x, &limits).unwrap();

        // χ(α) = 10 splits inside |χ| ≤ 6 as (5,5) and (6,4)
        assert_eq!(rel.right.len(), 3);
        let pairs: Vec<&Term> = rel.right.iter().filter(|t| t.symbols.len() == 3).collect();
        assert_eq!(pairs.len(), 2);
        let placeholders: Vec<_> = pairs
            .iter()
            .flat_map(|t| t.symbols.iter())
            .filter_map(|s| match s {
                InvariantSymbol::PlaceholderC { classes, pairing } => Some((classes, pairing)),
                _ => None,
            })
            .collect();
        assert_eq!(placeholders.len(), 2);
        let bb = placeholders
            .iter()
            .find(|(classes, _)| **classes == vec![beta(), beta()])
            .expect("the (β, β) split appears");
        assert_eq!(
            bb.1,
            &vec![vec![rint(0), rint(0)], vec![rint(0), rint(0)]]
        );
        for t in &pairs {
            for s in &t.symbols {
                if let InvariantSymbol::JAt { class, .. } = s {
                    assert!(class.r.is_zero() && class.c.is_positive());
                    assert_eq!(&class.s / &class.c, rat(-1, 2));
                }
            }
        }
    }

    #[test]
    fn candidate_cap_errors_instead_of_truncating() {
        let x = quintic();
        let alpha = KClass::new(0, rint(2), rint(-1), rat(1, 3));
        let limits = Limits {
            max_candidates: 1,
            ..Limits::default()
        };
        assert!(matches!(
            gieseker_tilt_skeleton(&alpha, &x, &limits),
            Err(WcfError::Walls(WallsError::UnboundedSearch(_)))
        ));
    }

    #[test]
    fn comparison_rejects_other_shapes() {
        let x = quintic();
        assert!(matches!(
            gieseker_tilt_skeleton(&KClass::line_bundle(&rint(0)), &x, &Limits::default()),
            Err(WcfError::OutOfRange(_))
        ));
        let fractional = KClass::new_rat(rint(0), rat(7, 5), rint(0), rint(0));
        assert!(matches!(
            gieseker_tilt_skeleton(&fractional, &x, &Limits::default()),
            Err(WcfError::OutOfRange(_))
        ));
    }
}
