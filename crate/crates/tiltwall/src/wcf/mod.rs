//! Symbolic wall-crossing relations.
//!
//! Rather than evaluating any enumerative invariant, this module
//! manipulates *symbols* `J_{b,w}(v)` — one per numerical class and
//! chamber — and emits exact linear relations between them: the
//! two-factor crossing formula, the Joyce–Song base relation, the
//! ascending wall-walk that chains crossings from the vanishing region
//! up to large volume, the Gieseker↔tilt comparison skeleton, and the
//! bridge identifying large-volume rank `−1` symbols with stable-pair
//! symbols.  All coefficients are exact rationals; multi-factor
//! coefficients beyond the two-factor case are kept as opaque
//! placeholder symbols carrying their argument classes.
//!
//! Every operation requires `calabi_yau = true` on the model: the
//! crossing identities assume `K_X ≅ O_X` and `H¹(O_X) = 0`.

mod gieseker;
mod walk;

pub use gieseker::gieseker_tilt_skeleton;
pub use walk::walk_walls;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane::{parabola_roots, PlaneError, PlaneLine, PlanePoint};
use crate::rat::{rat_serde, rat_value, rint, value_to_rat, Rat};
use crate::stability::StabilityError;
use crate::threefold::{KClass, ThreefoldError, ThreefoldModel};
use crate::walls::{js_wall, Wall, WallsError};

#[derive(Debug, Error)]
pub enum WcfError {
    #[error("model `{0}` is not Calabi-Yau: the crossing identities assume K_X ≅ O_X and H¹(O_X) = 0")]
    NotCalabiYau(String),
    #[error("slope mismatch on the wall: {0}")]
    SlopeMismatch(String),
    #[error("the Euler pairing {0} is not an integer")]
    NonIntegerEuler(Rat),
    #[error("not the base case: {0}")]
    NotBaseCase(String),
    #[error("expected a rank −1 class, got rank {0}")]
    NonMinusOneRank(Rat),
    #[error("n₀ = {0} is not admissible for this class")]
    NotAdmissible(Rat),
    #[error("{0}")]
    OutOfRange(String),
    #[error(transparent)]
    Walls(#[from] WallsError),
    #[error(transparent)]
    Threefold(#[from] ThreefoldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// Which chamber a `J_at` symbol is evaluated in.  Tags are adjacency
/// data relative to a wall line, not concrete `(b, w)` points, since the
/// invariants are constant on chambers.  The `on_plus` / `on_minus` tags
/// complete the alphabet but are never emitted by the operations here:
/// on-wall values exist yet play no role when crossing into large volume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChamberTag {
    LargeVolume,
    Below(PlaneLine),
    Above(PlaneLine),
    OnPlus(PlaneLine),
    OnMinus(PlaneLine),
}

/// A formal invariant symbol.  Symbols compare and sort by their
/// canonical JSON serialization, which doubles as their stable ID.
///
/// * `JAt` — `J_{b,w}(class)` in the tagged chamber; the witness point
///   certifies that the tilt slope of the class is finite there
///   (`large_volume` symbols, written `J_{b,∞}`, carry no witness).
/// * `JGieseker` — the Gieseker-side invariant of a rank 0 class.
/// * `Pt` — the stable-pair invariant `P_{χ}(β·H)`.
/// * `ConstTors` — the constant `#H²(X,ℤ)_tors`, available as a symbol;
///   the operations here fold the torsion factor into coefficients
///   instead, so it only appears if a caller constructs it.
/// * `PlaceholderC` — an unexpanded universal coefficient
///   `C(α₁, …, α_m)`, carrying its argument classes and their pairwise
///   Euler pairing matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantSymbol {
    JAt {
        class: KClass,
        chamber: ChamberTag,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<PlanePoint>,
    },
    JGieseker {
        class: KClass,
    },
    #[serde(rename = "PT")]
    Pt {
        #[serde(with = "rat_serde")]
        beta_h: Rat,
        #[serde(with = "rat_serde")]
        chi: Rat,
    },
    ConstTors,
    #[serde(rename = "placeholder_C")]
    PlaceholderC {
        classes: Vec<KClass>,
        #[serde(with = "rat_matrix_serde")]
        pairing: Vec<Vec<Rat>>,
    },
}

impl InvariantSymbol {
    /// Stable identifier: the canonical serialization of the symbol.
    pub fn canonical_id(&self) -> String {
        serde_json::to_string(self).expect("symbols always serialize")
    }

    /// A chamber-tagged `J` symbol.  Non-large-volume tags require a
    /// witness point at which the class has finite tilt slope.  Classes
    /// with `r = c = 0` have slope `+∞` everywhere, so their invariant
    /// is chamber-independent; the large-volume tag is their canonical
    /// label.
    pub fn j_at(
        class: &KClass,
        chamber: ChamberTag,
        witness: Option<PlanePoint>,
    ) -> Result<Self, WcfError> {
        match (&chamber, &witness) {
            (ChamberTag::LargeVolume, None) => {
                if class.r.is_zero()
                    && class.c.is_zero()
                    && class.s.is_zero()
                    && class.d.is_zero()
                {
                    return Err(WcfError::OutOfRange(
                        "the zero class carries no invariant".into(),
                    ));
                }
            }
            (ChamberTag::LargeVolume, Some(_)) => {
                return Err(WcfError::OutOfRange(
                    "large-volume symbols carry no witness point".into(),
                ));
            }
            (_, None) => {
                return Err(WcfError::OutOfRange(
                    "a chamber symbol needs a witness point with finite slope".into(),
                ));
            }
            (_, Some(p)) => {
                if (&class.c - &p.b * &class.r).is_zero() {
                    return Err(WcfError::OutOfRange(format!(
                        "the slope of {class} is infinite at b = {}",
                        p.b
                    )));
                }
            }
        }
        Ok(InvariantSymbol::JAt {
            class: class.clone(),
            chamber,
            witness,
        })
    }

    /// `J_{b,∞}(class)`: the large-volume symbol.
    pub fn j_large_volume(class: &KClass) -> Result<Self, WcfError> {
        Self::j_at(class, ChamberTag::LargeVolume, None)
    }
}

impl fmt::Display for InvariantSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantSymbol::JAt { class, chamber, .. } => match chamber {
                ChamberTag::LargeVolume => write!(f, "J_∞({class})"),
                ChamberTag::Below(l) => write!(f, "J({class} | below {l})"),
                ChamberTag::Above(l) => write!(f, "J({class} | above {l})"),
                ChamberTag::OnPlus(l) => write!(f, "J({class} | on+ {l})"),
                ChamberTag::OnMinus(l) => write!(f, "J({class} | on− {l})"),
            },
            InvariantSymbol::JGieseker { class } => write!(f, "J_G({class})"),
            InvariantSymbol::Pt { beta_h, chi } => write!(f, "PT({beta_h}, {chi})"),
            InvariantSymbol::ConstTors => write!(f, "#tors"),
            InvariantSymbol::PlaceholderC { classes, .. } => {
                write!(f, "C(")?;
                for (i, c) in classes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl PartialEq for InvariantSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_id() == other.canonical_id()
    }
}

impl Eq for InvariantSymbol {}

impl PartialOrd for InvariantSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InvariantSymbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_id().cmp(&other.canonical_id())
    }
}

/// One monomial `coefficient · Π symbols` of a relation's right side.
/// Symbol products are commutative; the factors are kept sorted by
/// canonical ID so equal monomials merge and serialization is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rat_serde")]
    pub coefficient: Rat,
    pub symbols: Vec<InvariantSymbol>,
}

impl Term {
    pub fn new(coefficient: Rat, mut symbols: Vec<InvariantSymbol>) -> Self {
        symbols.sort();
        Term {
            coefficient,
            symbols,
        }
    }
}

/// Where a relation came from: a mechanism tag, the wall it was emitted
/// at (when any), the exact crossing coefficients used, and free-form
/// caveats.  Every relation records the caveat-bearing data needed to
/// audit it without re-running the enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub citation_tag: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall: Option<Wall>,
    #[serde(with = "rat_vec_serde")]
    pub coefficients: Vec<Rat>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// An exact linear relation `left = Σ right` between invariant symbols.
/// The right side is kept merged (like monomials combined, zero
/// coefficients dropped) and sorted, so byte-identical re-serialization
/// is automatic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub left: InvariantSymbol,
    pub right: Vec<Term>,
    pub provenance: Provenance,
}

impl Relation {
    pub fn new(left: InvariantSymbol, right: Vec<Term>, provenance: Provenance) -> Self {
        Relation {
            left,
            right: merge_terms(right),
            provenance,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.left)?;
        if self.right.is_empty() {
            return write!(f, " 0");
        }
        for (i, t) in self.right.iter().enumerate() {
            if i > 0 {
                write!(f, " +")?;
            }
            write!(f, " {}·", t.coefficient)?;
            for (j, s) in t.symbols.iter().enumerate() {
                if j > 0 {
                    write!(f, "·")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// A chained wall-walk: the per-wall relations in substitution order
/// (descending `w`, top wall first, ending with the vanishing relation
/// below the slope-bound line), plus the fully substituted large-volume
/// relation they compose to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub steps: Vec<Relation>,
    pub final_relation: Relation,
}

/// Merge like monomials and drop zero coefficients; output is sorted by
/// the monomials' canonical IDs.
fn merge_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<Vec<String>, Term> = BTreeMap::new();
    for t in terms {
        let key: Vec<String> = t.symbols.iter().map(|s| s.canonical_id()).collect();
        match acc.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let c = &e.get().coefficient + &t.coefficient;
                e.get_mut().coefficient = c;
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
        }
    }
    acc.into_values().filter(|t| !t.coefficient.is_zero()).collect()
}

pub(crate) fn require_calabi_yau(x: &ThreefoldModel) -> Result<(), WcfError> {
    if x.calabi_yau {
        Ok(())
    } else {
        Err(WcfError::NotCalabiYau(x.name.clone()))
    }
}

/// `χ̄(v, w) = (−1)^{χ(v,w)−1} χ(v,w)` as a rational, erroring on
/// non-integer pairings.
fn chi_bar_rat(x: &ThreefoldModel, v: &KClass, w: &KClass) -> Result<Rat, WcfError> {
    match x.chi_bar(v, w) {
        Ok(n) => Ok(Rat::from_integer(n)),
        Err(ThreefoldError::NonIntegerEuler(q)) => Err(WcfError::NonIntegerEuler(q)),
        Err(e) => Err(WcfError::Threefold(e)),
    }
}

/// The midpoint of a wall's chord on `∂U`, which is rational: the chord
/// of `A·b + B·w = C` spans the roots of `B·b²/2 + A·b − C = 0`, whose
/// sum is `−2A/B`.
fn chord_midpoint(line: &PlaneLine) -> Result<Rat, WcfError> {
    let (a, b, _) = line.coefficients();
    if line.is_vertical() {
        return Err(WcfError::OutOfRange(
            "a crossing wall cannot be vertical".into(),
        ));
    }
    Ok(-Rat::from_integer(a.clone()) / Rat::from_integer(b.clone()))
}

/// Witness points certifying finite slope just below / just above the
/// wall at the chord midpoint `b₀`: below sits halfway between the
/// parabola and the wall, above sits one unit over it.  These certify
/// finiteness only; the chamber semantics live in the tag.
fn wall_witnesses(line: &PlaneLine) -> Result<(PlanePoint, PlanePoint), WcfError> {
    let b0 = chord_midpoint(line)?;
    let w0 = line.w_at(&b0).expect("non-vertical line");
    let below = (&b0 * &b0 / rint(2) + &w0) / rint(2);
    let above = &w0 + rint(1);
    Ok((
        PlanePoint::new(b0.clone(), below),
        PlanePoint::new(b0, above),
    ))
}

/// Canonical orientation and combined coefficient of a two-factor wall.
///
/// Checks exactly that the equal-slope locus of `(a1, a2)` is `line`,
/// then returns `(hi, lo, χ̄(hi, lo))` where `hi` is the factor whose
/// tilt slope is the larger one just above the wall.  The sign of
/// `ν(a1) − ν(a2)` there is the sign of
/// `(r₂c₁ − r₁c₂) / ((c₁ − b₀r₁)(c₂ − b₀r₂))` at the chord midpoint
/// `b₀`, constant on the chord interior because the slope poles
/// `Π(aᵢ).b` lie outside it.
pub(crate) fn oriented_coefficient<'a>(
    a1: &'a KClass,
    a2: &'a KClass,
    line: &PlaneLine,
    x: &ThreefoldModel,
) -> Result<(&'a KClass, &'a KClass, Rat), WcfError> {
    let aa = &a1.s * &a2.r - &a2.s * &a1.r;
    let bb = &a1.r * &a2.c - &a2.r * &a1.c;
    let cc = &a1.s * &a2.c - &a2.s * &a1.c;
    if aa.is_zero() && bb.is_zero() && cc.is_zero() {
        return Err(WcfError::SlopeMismatch(
            "the factors have equal slope everywhere; no wall separates them".into(),
        ));
    }
    let locus = PlaneLine::from_rational(&aa, &bb, &cc).map_err(|_| {
        WcfError::SlopeMismatch("the factors never have equal slope".into())
    })?;
    if locus != *line {
        return Err(WcfError::SlopeMismatch(format!(
            "the equal-slope locus {locus} is not the stated wall {line}"
        )));
    }
    let (rho1, rho2) = parabola_roots(line)?;
    if rho1 == rho2 {
        return Err(WcfError::OutOfRange(
            "the wall is tangent to ∂U; no chamber lies on either side".into(),
        ));
    }
    let b0 = chord_midpoint(line)?;
    let den1 = &a1.c - &b0 * &a1.r;
    let den2 = &a2.c - &b0 * &a2.r;
    if den1.is_zero() || den2.is_zero() {
        return Err(WcfError::OutOfRange(
            "a factor has infinite slope at the chord midpoint".into(),
        ));
    }
    // d/dw of ν(a1) − ν(a2) on the wall, up to the positive factor ε
    let grad = (&a2.r * &a1.c - &a1.r * &a2.c) / (den1 * den2);
    let (hi, lo) = if grad.is_positive() { (a1, a2) } else { (a2, a1) };
    let k = chi_bar_rat(x, hi, lo)?;
    Ok((hi, lo, k))
}

/// The two-factor crossing relation at a wall where `v = a1 + a2`
/// destabilizes:
///
/// ```text
/// J_below(v) = J_above(v) + χ̄(hi, lo) · J_above(a1) · J_above(a2)
/// ```
///
/// with `hi` the factor of larger slope just above the wall, so the
/// emitted relation does not depend on the order of `a1, a2`.  Solved
/// for `J_above` this is the usual "just above = just below + χ̄·…"
/// identity; a zero pairing degenerates to equality across the wall.
pub fn two_factor_crossing(
    v: &KClass,
    a1: &KClass,
    a2: &KClass,
    wall: &Wall,
    x: &ThreefoldModel,
) -> Result<Relation, WcfError> {
    require_calabi_yau(x)?;
    if &(a1 + a2) != v {
        return Err(WcfError::OutOfRange(
            "the factors do not sum to the crossed class".into(),
        ));
    }
    let (hi, lo, k) = oriented_coefficient(a1, a2, &wall.line, x)?;
    let (wit_below, wit_above) = wall_witnesses(&wall.line)?;
    let below = InvariantSymbol::j_at(
        v,
        ChamberTag::Below(wall.line.clone()),
        Some(wit_below),
    )?;
    let above_tag = |c: &KClass| {
        InvariantSymbol::j_at(c, ChamberTag::Above(wall.line.clone()), Some(wit_above.clone()))
    };
    let mut right = vec![Term::new(rint(1), vec![above_tag(v)?])];
    if !k.is_zero() {
        right.push(Term::new(k.clone(), vec![above_tag(hi)?, above_tag(lo)?]));
    }
    let provenance = Provenance {
        citation_tag: "two_factor_crossing".into(),
        wall: Some(wall.clone()),
        coefficients: vec![k],
        notes: vec![format!(
            "orientation: {hi} has the larger slope just above the wall"
        )],
    };
    Ok(Relation::new(below, right, provenance))
}

/// The Joyce–Song base relation for a rank 0 class of minimal degree
/// `c = c_min`:
///
/// ```text
/// J_{b,∞}(v − [O(−n₀)]) = χ̄(v(n₀)) · #tors · J_{b,∞}(v)
/// ```
///
/// At minimal degree the Joyce–Song wall is the only wall for
/// `v_{n₀} = v − [O(−n₀)]`, its rank 0 factor is stable, and the single
/// crossing collapses to this closed form.
pub fn js_base_relation(
    v: &KClass,
    n0: &Rat,
    x: &ThreefoldModel,
) -> Result<Relation, WcfError> {
    require_calabi_yau(x)?;
    if !v.r.is_zero() {
        return Err(WcfError::NotBaseCase(format!(
            "expected a rank 0 class, got rank {}",
            v.r
        )));
    }
    if v.c != x.cmin {
        return Err(WcfError::NotBaseCase(format!(
            "c = {} is not the minimal degree c_min = {} of the model",
            v.c, x.cmin
        )));
    }
    let k = match x.chi_bar_twisted(v, n0) {
        Ok(n) => Rat::from_integer(n) * rint(x.tors),
        Err(ThreefoldError::NonIntegerEuler(q)) => return Err(WcfError::NonIntegerEuler(q)),
        Err(e) => return Err(WcfError::Threefold(e)),
    };
    let w_n = v - &KClass::line_bundle(&-n0);
    let wall = js_wall(&w_n, n0, x)?;
    let left = InvariantSymbol::j_large_volume(&w_n)?;
    let right = vec![Term::new(
        k.clone(),
        vec![InvariantSymbol::j_large_volume(v)?],
    )];
    let provenance = Provenance {
        citation_tag: "joyce_song_base_relation".into(),
        wall: Some(wall),
        coefficients: vec![k],
        notes: vec![
            "single-wall closed form: the torsion count of the line-bundle factor is folded into the coefficient"
                .into(),
        ],
    };
    Ok(Relation::new(left, right, provenance))
}

/// The large-volume bridge from a rank `−1` class to a stable-pair
/// symbol:
///
/// ```text
/// J_{b,∞}(v) = #tors · PT(β·H, χ)
/// ```
///
/// Untwisting `v` by its determinant `O(c)` puts it in the normal form
/// `(−1, 0, β·H/H³, −m)`; the pair's curve class has `β·H = s·H³` and
/// the quotient sheaf `F` has `χ(F) = −d·H³` by Riemann–Roch (its
/// degree-`c₂` correction vanishes since `ch₁(F) = 0`).
pub fn pt_bridge(v: &KClass, x: &ThreefoldModel) -> Result<Relation, WcfError> {
    require_calabi_yau(x)?;
    if v.r != rint(-1) {
        return Err(WcfError::NonMinusOneRank(v.r.clone()));
    }
    if !v.c.is_integer() {
        return Err(WcfError::OutOfRange(format!(
            "c = {} is not an integer, so no line-bundle twist normalizes the class",
            v.c
        )));
    }
    let u = v.twist(&v.c);
    debug_assert!(u.c.is_zero());
    let h3 = x.h3_rat();
    let beta_h = &u.s * &h3;
    if !beta_h.is_integer() || !beta_h.is_positive() {
        return Err(WcfError::OutOfRange(format!(
            "β·H = {beta_h} is not a positive integer"
        )));
    }
    let chi = -&u.d * &h3;
    if !chi.is_integer() {
        return Err(WcfError::NonIntegerEuler(chi));
    }
    let left = InvariantSymbol::j_large_volume(v)?;
    let right = vec![Term::new(
        rint(x.tors),
        vec![InvariantSymbol::Pt {
            beta_h: beta_h.clone(),
            chi: chi.clone(),
        }],
    )];
    let provenance = Provenance {
        citation_tag: "stable_pair_bridge".into(),
        wall: None,
        coefficients: vec![rint(x.tors)],
        notes: vec![format!(
            "untwisted by O({}) to the pair normal form; (β·H, χ) = ({beta_h}, {chi})",
            v.c
        )],
    };
    Ok(Relation::new(left, right, provenance))
}

pub(crate) use crate::rat::rat_vec_serde;

pub(crate) mod rat_matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], ser: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<Vec<serde_json::Value>> = m
            .iter()
            .map(|row| row.iter().map(rat_value).collect())
            .collect();
        serde::Serialize::serialize(&vals, ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let vals: Vec<Vec<serde_json::Value>> = serde::Deserialize::deserialize(de)?;
        vals.iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        value_to_rat(x)
                            .ok_or_else(|| serde::de::Error::custom("expected [num, den]"))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    fn v0() -> KClass {
        KClass::new(0, rint(1), rat(-1, 2), rat(1, 6))
    }

    fn shift(n0: i64) -> KClass {
        -&KClass::line_bundle(&rint(-n0))
    }

    #[test]
    fn base_instance_crossing_coefficient() {
        let x = quintic();
        let v = v0();
        let n0 = rint(10);
        let w_n = &v - &KClass::line_bundle(&-&n0);
        let wall = js_wall(&w_n, &n0, &x).unwrap();
        let a1 = shift(10);
        let rel = two_factor_crossing(&w_n, &a1, &v, &wall, &x).unwrap();

        assert_eq!(
            rel.left,
            InvariantSymbol::j_at(
                &w_n,
                ChamberTag::Below(wall.line.clone()),
                Some(PlanePoint::new(rat(-1, 2), rat(363, 16))),
            )
            .unwrap()
        );
        assert_eq!(rel.right.len(), 2);
        // the product term carries χ̄(hi, lo) = −χ̄(v(n₀)) = +230; solving
        // for the just-above symbol recovers the −230 of the base relation
        let product: Vec<&Term> = rel.right.iter().filter(|t| t.symbols.len() == 2).collect();
        assert_eq!(product.len(), 1);
        assert_eq!(product[0].coefficient, rint(230));
        assert_eq!(rel.provenance.coefficients, vec![rint(230)]);

        // argument order does not matter
        let swapped = two_factor_crossing(&w_n, &v, &a1, &wall, &x).unwrap();
        assert_eq!(rel, swapped);
    }

    #[test]
    fn zero_pairing_degenerates_to_equality() {
        let x = quintic();
        // χ(a2) = 5d + 25/6 vanishes at d = −5/6
        let a1 = KClass::line_bundle(&rint(0));
        let a2 = KClass::new(-1, rint(1), rat(-1, 2), rat(-5, 6));
        let v = &a1 + &a2;
        let line = PlaneLine::from_rational(&rint(1), &rint(2), &rint(0)).unwrap();
        let wall = Wall {
            line: line.clone(),
            kind: crate::walls::WallKind::Generic,
            slope: rat(-1, 2),
            decompositions: vec![],
        };
        let rel = two_factor_crossing(&v, &a1, &a2, &wall, &x).unwrap();
        assert_eq!(rel.right.len(), 1);
        assert_eq!(rel.right[0].symbols.len(), 1);
        assert_eq!(rel.right[0].coefficient, rint(1));
        assert_eq!(rel.provenance.coefficients, vec![rint(0)]);
    }

    #[test]
    fn crossing_rejects_bad_input() {
        let x = quintic();
        let v = v0();
        let n0 = rint(10);
        let w_n = &v - &KClass::line_bundle(&-&n0);
        let wall = js_wall(&w_n, &n0, &x).unwrap();
        let a1 = shift(10);

        // factors that do not sum to v
        let err = two_factor_crossing(&w_n, &a1, &a1, &wall, &x).unwrap_err();
        assert!(matches!(err, WcfError::OutOfRange(_)));

        // wrong wall line
        let off = Wall {
            line: PlaneLine::from_rational(&rint(1), &rint(2), &rint(80)).unwrap(),
            ..wall.clone()
        };
        let err = two_factor_crossing(&w_n, &a1, &v, &off, &x).unwrap_err();
        assert!(matches!(err, WcfError::SlopeMismatch(_)));

        // fractional Euler pairing
        let a2 = KClass::new(-1, rint(1), rat(-1, 2), rat(1, 12));
        let v_bad = &KClass::line_bundle(&rint(0)) + &a2;
        let pair_wall = Wall {
            line: PlaneLine::from_rational(&rint(1), &rint(2), &rint(0)).unwrap(),
            kind: crate::walls::WallKind::Generic,
            slope: rat(-1, 2),
            decompositions: vec![],
        };
        let err =
            two_factor_crossing(&v_bad, &KClass::line_bundle(&rint(0)), &a2, &pair_wall, &x)
                .unwrap_err();
        assert!(matches!(err, WcfError::NonIntegerEuler(_)));
    }

    #[test]
    fn non_calabi_yau_models_are_rejected() {
        let mut x = quintic();
        x.calabi_yau = false;
        let v = v0();
        let n0 = rint(10);
        let w_n = &v - &KClass::line_bundle(&-&n0);
        let wall = js_wall(&w_n, &n0, &quintic()).unwrap();
        let a1 = shift(10);
        assert!(matches!(
            two_factor_crossing(&w_n, &a1, &v, &wall, &x),
            Err(WcfError::NotCalabiYau(_))
        ));
        assert!(matches!(
            js_base_relation(&v, &n0, &x),
            Err(WcfError::NotCalabiYau(_))
        ));
        assert!(matches!(
            pt_bridge(&w_n, &x),
            Err(WcfError::NotCalabiYau(_))
        ));
    }

    #[test]
    fn base_relation_on_the_quintic() {
        let x = quintic();
        let v = v0();
        let rel = js_base_relation(&v, &rint(10), &x).unwrap();
        let w_n = &v - &KClass::line_bundle(&rint(-10));
        assert_eq!(rel.left, InvariantSymbol::j_large_volume(&w_n).unwrap());
        assert_eq!(rel.right.len(), 1);
        assert_eq!(rel.right[0].coefficient, rint(-230));
        assert_eq!(
            rel.right[0].symbols,
            vec![InvariantSymbol::j_large_volume(&v).unwrap()]
        );
        let wall = rel.provenance.wall.as_ref().unwrap();
        assert_eq!(wall.kind, crate::walls::WallKind::JoyceSong);
    }

    #[test]
    fn base_relation_scales_with_torsion() {
        let mut x = quintic();
        x.tors = 3;
        let rel = js_base_relation(&v0(), &rint(10), &x).unwrap();
        assert_eq!(rel.right[0].coefficient, rint(-690));
    }

    #[test]
    fn base_relation_requires_minimal_degree() {
        let x = quintic();
        let v = KClass::new(0, rint(2), rint(-1), rint(0));
        assert!(matches!(
            js_base_relation(&v, &rint(10), &x),
            Err(WcfError::NotBaseCase(_))
        ));
        assert!(matches!(
            js_base_relation(&KClass::line_bundle(&rint(0)), &rint(10), &x),
            Err(WcfError::NotBaseCase(_))
        ));
    }

    #[test]
    fn pt_bridge_round_trips_stable_pair_classes() {
        let x = quintic();
        let (_, e_n) = x.stable_pair_class(&rat(1, 5), &rat(1, 5), &rint(2));
        let rel = pt_bridge(&e_n, &x).unwrap();
        assert_eq!(rel.left, InvariantSymbol::j_large_volume(&e_n).unwrap());
        assert_eq!(rel.right.len(), 1);
        assert_eq!(rel.right[0].coefficient, rint(1));
        assert_eq!(
            rel.right[0].symbols,
            vec![InvariantSymbol::Pt {
                beta_h: rint(1),
                chi: rint(1),
            }]
        );
    }

    #[test]
    fn pt_bridge_rejects_other_ranks() {
        let x = quintic();
        assert!(matches!(
            pt_bridge(&v0(), &x),
            Err(WcfError::NonMinusOneRank(_))
        ));
        let frac = KClass::new_rat(rint(-1), rat(1, 2), rint(0), rint(0));
        assert!(matches!(pt_bridge(&frac, &x), Err(WcfError::OutOfRange(_))));
    }

    #[test]
    fn terms_merge_and_drop_zeros() {
        let x = quintic();
        let j = InvariantSymbol::j_large_volume(&v0()).unwrap();
        let k = InvariantSymbol::j_large_volume(&KClass::line_bundle(&rint(0))).unwrap();
        let merged = merge_terms(vec![
            Term::new(rint(2), vec![j.clone(), k.clone()]),
            Term::new(rint(3), vec![k.clone(), j.clone()]),
            Term::new(rint(1), vec![j.clone()]),
            Term::new(rint(-1), vec![j.clone()]),
        ]);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].coefficient, rint(5));
        assert_eq!(merged[0].symbols.len(), 2);
        drop(x);
    }

    #[test]
    fn relations_reserialize_byte_identically() {
        let x = quintic();
        let rel = js_base_relation(&v0(), &rint(10), &x).unwrap();
        let s1 = serde_json::to_string_pretty(&rel).unwrap();
        let back: Relation = serde_json::from_str(&s1).unwrap();
        let s2 = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(rel, back);

        // symbol IDs are canonical serializations and order symbols totally
        let a = InvariantSymbol::j_large_volume(&v0()).unwrap();
        let b = InvariantSymbol::ConstTors;
        assert_eq!(a.cmp(&b), a.canonical_id().cmp(&b.canonical_id()));
        let id: InvariantSymbol = serde_json::from_str(&a.canonical_id()).unwrap();
        assert_eq!(a, id);
    }
}
