//! Dimension ≤ 1 classes: the `cl` projection `(r, ch₂·H, ch₃)`, the
//! `ν_θ` slope family, the Joyce-Song point `θ_JS`, finite enumeration
//! of candidate walls against an external `ch₃` lower bound, a chamber
//! report, and the "easy" Joyce-Song relation expressing a dimension-one
//! generalized DT invariant through a single stable-pair invariant.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rat, rat_serde, rat_vec_serde, rint, Rat};
use crate::stability::Slope;
use crate::threefold::KClass;
use crate::threefold::ThreefoldModel;
use crate::wcf::{
    require_calabi_yau, InvariantSymbol, Provenance, Relation, Term, WcfError,
};

#[derive(Debug, Error)]
pub enum Dim1Error {
    #[error("invalid class triple: {0}")]
    InvalidTriple(String),
    #[error("ch₂·H must be positive, got {0}")]
    NonPositiveC(i64),
    #[error("{0}")]
    OutOfRange(String),
    #[error(transparent)]
    Wcf(#[from] WcfError),
}

/// The projection `cl(E) = (r, ch₂(E)·H, ch₃(E))` of a class of
/// dimension ≤ 1 plus rank, with the positivity a heart of dimension-one
/// objects imposes: `r ≥ 0`, `c ≥ 0`, and `s ≥ 0` once `r = c = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClTriple {
    pub r: i64,
    pub c: i64,
    pub s: i64,
}

impl ClTriple {
    pub fn new(r: i64, c: i64, s: i64) -> Result<Self, Dim1Error> {
        let t = ClTriple { r, c, s };
        t.validate()?;
        Ok(t)
    }

    /// The invariants, re-checkable because the fields are public.
    pub fn validate(&self) -> Result<(), Dim1Error> {
        if self.r < 0 {
            return Err(Dim1Error::InvalidTriple(format!(
                "rank {} is negative",
                self.r
            )));
        }
        if self.c < 0 {
            return Err(Dim1Error::InvalidTriple(format!(
                "ch₂·H = {} is negative",
                self.c
            )));
        }
        if self.r == 0 && self.c == 0 && self.s < 0 {
            return Err(Dim1Error::InvalidTriple(format!(
                "a point class needs ch₃ ≥ 0, got {}",
                self.s
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ClTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c, self.s)
    }
}

/// An external lower bound `L(n, c_budget)` on `ch₃` of quotients of
/// `O_X(−n)` with `ch₂·H` at most `c_budget`.  The bound is genuinely an
/// input — it comes from boundedness of the relevant Quot schemes and is
/// not computable from the numerical model — so callers inject it;
/// [`Ch3Bound::constant`] is the documented default shape, with the
/// constant chosen per model.
///
/// Contract: monotone non-increasing in `c_budget` (a larger budget
/// admits every quotient a smaller one does).  The enumeration
/// spot-checks this along the budgets it evaluates in debug builds.
#[derive(Clone)]
pub struct Ch3Bound {
    f: Arc<dyn Fn(i64, i64) -> Rat + Send + Sync>,
}

impl Ch3Bound {
    pub fn new(f: impl Fn(i64, i64) -> Rat + Send + Sync + 'static) -> Self {
        Ch3Bound { f: Arc::new(f) }
    }

    /// The constant bound `L ≡ value`, trivially monotone.
    pub fn constant(value: i64) -> Self {
        Ch3Bound::new(move |_, _| rint(value))
    }

    pub fn eval(&self, n: i64, c_budget: i64) -> Rat {
        (self.f)(n, c_budget)
    }
}

impl fmt::Debug for Ch3Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ch3Bound").finish_non_exhaustive()
    }
}

/// The slope `ν_θ` on triples: `θ` for positive rank, `s/c` for
/// dimension-one classes, `+∞` for point classes.
pub fn nu_theta(theta: &Rat, t: &ClTriple) -> Result<Slope, Dim1Error> {
    t.validate()?;
    if t.r != 0 {
        Ok(Slope::Finite(theta.clone()))
    } else if t.c != 0 {
        Ok(Slope::Finite(rat(t.s, t.c)))
    } else {
        Ok(Slope::Infinite)
    }
}

/// The Joyce-Song point `θ_JS = s/c`, where `ν_θ` gives `(1, c, s)`,
/// `(0, c, s)` and `(1, 0, 0)` one common slope.
pub fn theta_js(c: i64, s: i64) -> Result<Rat, Dim1Error> {
    if c <= 0 {
        return Err(Dim1Error::NonPositiveC(c));
    }
    Ok(rat(s, c))
}

/// A candidate wall value `θ = s₀/c₀` for `(1, c, s)` together with
/// every witnessing destabilizer `(c₀, s₀)` in the enumeration box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim1Wall {
    #[serde(with = "rat_serde")]
    pub theta: Rat,
    pub witnesses: Vec<(i64, i64)>,
}

/// Candidate walls for the triple `(1, c, s)`, `c > 0`, as `θ` increases
/// from `θ_JS` toward large volume.
///
/// The returned list starts with `θ_JS` itself (no witnesses — the
/// Joyce-Song wall is not produced by a destabilizing pair) and then
/// ascends through every `s₀/c₀` with
///
/// * `0 < c₀ < c`,
/// * `s₀/c₀ > s/c`, and
/// * `s − s₀ ≥ max(0, s/c) + L(n, c − c₀)`,
///
/// the last condition bounding `s₀` above through the injected `ch₃`
/// bound on the complementary quotient.  Values are exact; witnesses are
/// sorted by `(c₀, s₀)`; the seesaw ordering
/// `s₀/c₀ > s/c > (s−s₀)/(c−c₀)` is asserted for every witness.
pub fn dim1_walls(
    c: i64,
    s: i64,
    bound: &Ch3Bound,
    n: i64,
) -> Result<Vec<Dim1Wall>, Dim1Error> {
    let theta0 = theta_js(c, s)?;
    let slope = rat(s, c);
    let ceiling = &rint(s) - slope.clone().max(Rat::zero());

    let mut by_theta: BTreeMap<Rat, Vec<(i64, i64)>> = BTreeMap::new();
    let mut prev_bound: Option<Rat> = None;
    for c0 in 1..c {
        let lb = bound.eval(n, c - c0);
        if let Some(prev) = &prev_bound {
            debug_assert!(
                lb >= *prev,
                "Ch3Bound must be monotone non-increasing in the budget"
            );
        }
        prev_bound = Some(lb.clone());

        let lower = &slope * rint(c0); // s₀ strictly above c₀·s/c
        let upper = &ceiling - &lb;
        if upper < lower {
            continue;
        }
        let s0_min = floor_i64(&lower)? + 1;
        let s0_max = floor_i64(&upper)?;
        for s0 in s0_min..=s0_max {
            let theta = rat(s0, c0);
            let complement = rat(s - s0, c - c0);
            assert!(
                theta > slope && slope > complement,
                "seesaw ordering fails for ({c0}, {s0})"
            );
            by_theta.entry(theta).or_default().push((c0, s0));
        }
    }

    let mut walls = vec![Dim1Wall {
        theta: theta0,
        witnesses: Vec::new(),
    }];
    walls.extend(
        by_theta
            .into_iter()
            .map(|(theta, witnesses)| Dim1Wall { theta, witnesses }),
    );
    Ok(walls)
}

fn floor_i64(q: &Rat) -> Result<i64, Dim1Error> {
    q.floor().to_integer().to_i64().ok_or_else(|| {
        Dim1Error::OutOfRange("the ch₃ bound pushes the search box out of i64 range".into())
    })
}

/// The vanishing hypothesis a chamber report is conditional on; it is
/// cohomological, so it is recorded rather than checked.
pub const REPORT_ASSUMPTION: &str = "H^1(F(n)) = 0 for any Gieseker semistable";

/// The chamber structure of the `θ` line for `(1, c, s)`: nothing is
/// semistable on `(θ_JS − 1, θ_JS)`, the Joyce-Song wall sits at
/// `θ_JS`, finitely many candidate walls follow, and past the last one
/// the semistable objects are exactly the stable pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberReport {
    #[serde(with = "rat_serde")]
    pub theta_js: Rat,
    /// Exactly `[θ_JS − 1, θ_JS]`, the open interval between them empty.
    #[serde(with = "rat_vec_serde")]
    pub empty_chamber: Vec<Rat>,
    /// Candidate walls strictly above `θ_JS`.
    pub walls: Vec<Dim1Wall>,
    pub large_volume: String,
    pub n: i64,
    pub assumption: String,
}

pub fn chamber_report(
    c: i64,
    s: i64,
    bound: &Ch3Bound,
    n: i64,
) -> Result<ChamberReport, Dim1Error> {
    let mut all = dim1_walls(c, s, bound, n)?;
    let theta_js = all.remove(0).theta;
    Ok(ChamberReport {
        empty_chamber: vec![&theta_js - rint(1), theta_js.clone()],
        theta_js,
        walls: all,
        large_volume: "stable pairs".to_string(),
        n,
        assumption: REPORT_ASSUMPTION.to_string(),
    })
}

/// The closed-form Joyce-Song relation for a minimal-degree curve class:
///
/// ```text
/// P_{β, m+n·β·H} = (−1)^{m+n·β·H−1} (m+n·β·H) · J(0, 0, β, m)
/// ```
///
/// `beta_h = β·H` must be positive and is caller-asserted minimal among
/// curve degrees; `m + n·β·H` must be nonzero so the relation can be
/// solved for `J`.  The `J` symbol carries the normalized class
/// `(0, 0, β·H/H³, m/H³)`; being of rank and degree zero it is
/// chamber-independent, labeled large-volume.
pub fn easy_js_relation(
    beta_h: i64,
    m: i64,
    n: i64,
    x: &ThreefoldModel,
) -> Result<Relation, Dim1Error> {
    require_calabi_yau(x)?;
    if beta_h <= 0 {
        return Err(Dim1Error::OutOfRange(format!(
            "β·H must be positive, got {beta_h}"
        )));
    }
    let chi = m + n * beta_h;
    if chi == 0 {
        return Err(Dim1Error::OutOfRange(
            "m + n·β·H = 0: the stable-pair side vanishes and cannot be inverted".into(),
        ));
    }
    let coefficient = if chi.rem_euclid(2) == 1 {
        rint(chi)
    } else {
        rint(-chi)
    };

    let h3 = x.h3_rat();
    let class = KClass::new_rat(
        Rat::zero(),
        Rat::zero(),
        rint(beta_h) / &h3,
        rint(m) / &h3,
    );
    let left = InvariantSymbol::Pt {
        beta_h: rint(beta_h),
        chi: rint(chi),
    };
    let right = vec![Term::new(
        coefficient.clone(),
        vec![InvariantSymbol::j_large_volume(&class)?],
    )];
    Ok(Relation::new(
        left,
        right,
        Provenance {
            citation_tag: "easy_joyce_song".into(),
            wall: None,
            coefficients: vec![coefficient],
            notes: vec!["β·H is caller-asserted minimal among curve degrees".into()],
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wcf::ChamberTag;

    #[test]
    fn triples_enforce_positivity() {
        assert!(ClTriple::new(1, 0, 0).is_ok());
        assert!(ClTriple::new(0, 0, 5).is_ok());
        assert!(matches!(
            ClTriple::new(-1, 2, 0),
            Err(Dim1Error::InvalidTriple(_))
        ));
        assert!(matches!(
            ClTriple::new(0, -1, 0),
            Err(Dim1Error::InvalidTriple(_))
        ));
        assert!(matches!(
            ClTriple::new(0, 0, -1),
            Err(Dim1Error::InvalidTriple(_))
        ));
    }

    #[test]
    fn slopes_by_shape() {
        let theta = rat(3, 7);
        assert_eq!(
            nu_theta(&theta, &ClTriple::new(1, 0, 0).unwrap()).unwrap(),
            Slope::Finite(rat(3, 7))
        );
        assert_eq!(
            nu_theta(&theta, &ClTriple::new(0, 2, 3).unwrap()).unwrap(),
            Slope::Finite(rat(3, 2))
        );
        assert_eq!(
            nu_theta(&rint(-4), &ClTriple::new(0, 2, 3).unwrap()).unwrap(),
            Slope::Finite(rat(3, 2))
        );
        assert_eq!(
            nu_theta(&theta, &ClTriple::new(0, 0, 5).unwrap()).unwrap(),
            Slope::Infinite
        );
        let bad = ClTriple { r: -1, c: 0, s: 0 };
        assert!(matches!(
            nu_theta(&theta, &bad),
            Err(Dim1Error::InvalidTriple(_))
        ));
    }

    #[test]
    fn joyce_song_point() {
        assert_eq!(theta_js(1, 1).unwrap(), rint(1));
        assert_eq!(theta_js(2, -3).unwrap(), rat(-3, 2));
        assert!(matches!(theta_js(0, 1), Err(Dim1Error::NonPositiveC(0))));
        assert!(matches!(theta_js(-2, 1), Err(Dim1Error::NonPositiveC(-2))));
    }

    #[test]
    fn degree_one_has_only_the_joyce_song_wall() {
        let walls = dim1_walls(1, 1, &Ch3Bound::constant(-100), 5).unwrap();
        assert_eq!(walls.len(), 1);
        assert_eq!(walls[0].theta, rint(1));
        assert!(walls[0].witnesses.is_empty());
    }

    #[test]
    fn degree_two_walls_with_a_constant_bound() {
        // c = 2, s = 0, L ≡ −3: c₀ = 1, 0 < s₀ ≤ 3
        let walls = dim1_walls(2, 0, &Ch3Bound::constant(-3), 5).unwrap();
        let thetas: Vec<_> = walls.iter().map(|w| w.theta.clone()).collect();
        assert_eq!(thetas, vec![rint(0), rint(1), rint(2), rint(3)]);
        for (w, s0) in walls[1..].iter().zip(1..) {
            assert_eq!(w.witnesses, vec![(1, s0)]);
        }
    }

    #[test]
    fn walls_match_exhaustive_enumeration() {
        for b in [0i64, -3, -10] {
            let bound = Ch3Bound::constant(b);
            for c in 1..=4i64 {
                for s in -6..=6i64 {
                    let walls = dim1_walls(c, s, &bound, 5).unwrap();
                    let slope = rat(s, c);

                    let mut expected: BTreeMap<Rat, Vec<(i64, i64)>> = BTreeMap::new();
                    for c0 in 1..c {
                        // |s₀| ≤ 200 provably contains the box: the upper
                        // bound is at most s − b ≤ 16, the lower at least
                        // c₀·s/c ≥ −18
                        for s0 in -200..=200i64 {
                            let strict = rat(s0, c0) > slope;
                            let room = rint(s - s0)
                                >= slope.clone().max(Rat::zero()) + rint(b);
                            if strict && room {
                                expected.entry(rat(s0, c0)).or_default().push((c0, s0));
                            }
                        }
                    }

                    assert_eq!(walls[0].theta, slope);
                    assert!(walls[0].witnesses.is_empty());
                    assert_eq!(walls.len(), expected.len() + 1);
                    for (wall, (theta, wits)) in walls[1..].iter().zip(expected.iter()) {
                        assert_eq!(&wall.theta, theta);
                        assert_eq!(&wall.witnesses, wits);
                        assert!(wall.theta > slope);
                    }
                    for pair in walls.windows(2) {
                        assert!(pair[0].theta < pair[1].theta);
                    }
                }
            }
        }
    }

    #[test]
    fn seesaw_holds_for_every_witness() {
        let walls = dim1_walls(4, 3, &Ch3Bound::constant(-10), 5).unwrap();
        assert!(walls.len() > 1);
        for wall in &walls[1..] {
            for (c0, s0) in &wall.witnesses {
                assert!(rat(*s0, *c0) > rat(3, 4));
                assert!(rat(3 - *s0, 4 - *c0) < rat(3, 4));
            }
        }
    }

    #[test]
    fn report_shape_and_empty_chamber() {
        let report = chamber_report(1, 1, &Ch3Bound::constant(-3), 7).unwrap();
        assert_eq!(report.theta_js, rint(1));
        assert_eq!(report.empty_chamber, vec![rint(0), rint(1)]);
        assert!(report.walls.is_empty());
        assert_eq!(report.large_volume, "stable pairs");
        assert_eq!(report.assumption, REPORT_ASSUMPTION);

        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: ChamberReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);

        let wide = chamber_report(3, -2, &Ch3Bound::constant(-4), 7).unwrap();
        assert_eq!(&wide.empty_chamber[1] - &wide.empty_chamber[0], rint(1));
        assert_eq!(wide.empty_chamber[1], wide.theta_js);
    }

    #[test]
    fn easy_js_base_instance() {
        let x = ThreefoldModel::quintic();
        let rel = easy_js_relation(1, 1, 2, &x).unwrap();
        assert_eq!(
            rel.left,
            InvariantSymbol::Pt {
                beta_h: rint(1),
                chi: rint(3)
            }
        );
        assert_eq!(rel.right.len(), 1);
        assert_eq!(rel.right[0].coefficient, rint(3));
        let class = KClass::new_rat(Rat::zero(), Rat::zero(), rat(1, 5), rat(1, 5));
        assert_eq!(
            rel.right[0].symbols,
            vec![InvariantSymbol::j_large_volume(&class).unwrap()]
        );
        if let InvariantSymbol::JAt { chamber, .. } = &rel.right[0].symbols[0] {
            assert_eq!(chamber, &ChamberTag::LargeVolume);
        }
    }

    #[test]
    fn easy_js_signs() {
        let x = ThreefoldModel::quintic();
        assert_eq!(
            easy_js_relation(1, 1, 0, &x).unwrap().right[0].coefficient,
            rint(1)
        );
        for m in -4..=3i64 {
            let chi = m + 2;
            if chi == 0 {
                continue;
            }
            let rel = easy_js_relation(1, m, 2, &x).unwrap();
            let expected = if chi.rem_euclid(2) == 1 {
                rint(chi)
            } else {
                rint(-chi)
            };
            assert_eq!(rel.right[0].coefficient, expected);
        }
        // the sign flips with m ↦ m + 1
        let odd = easy_js_relation(1, 1, 2, &x).unwrap();
        let even = easy_js_relation(1, 2, 2, &x).unwrap();
        assert_eq!(odd.right[0].coefficient, rint(3));
        assert_eq!(even.right[0].coefficient, rint(-4));
    }

    #[test]
    fn easy_js_validates_inputs() {
        let x = ThreefoldModel::quintic();
        assert!(matches!(
            easy_js_relation(0, 1, 2, &x),
            Err(Dim1Error::OutOfRange(_))
        ));
        assert!(matches!(
            easy_js_relation(1, -2, 2, &x),
            Err(Dim1Error::OutOfRange(_))
        ));
        let mut fake = ThreefoldModel::quintic();
        fake.calabi_yau = false;
        assert!(matches!(
            easy_js_relation(1, 1, 2, &fake),
            Err(Dim1Error::Wcf(WcfError::NotCalabiYau(_)))
        ));
    }

    #[test]
    fn wall_json_wire_shape() {
        let walls = dim1_walls(2, 0, &Ch3Bound::constant(-3), 5).unwrap();
        let json = serde_json::to_value(&walls[1]).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"theta": [1, 1], "witnesses": [[1, 1]]})
        );
    }
}
