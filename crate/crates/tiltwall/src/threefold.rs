//! Numerical data of a polarized threefold `(X, O_X(1))` and K-theory
//! classes at the level of normalized Chern characters.
//!
//! A class is stored as `ch_H(v) = (ch₀, ch₁·H²/H³, ch₂·H/H³, ch₃/H³)`,
//! written `(r, c, s, d)` throughout. With `H` ample and Picard rank
//! one this captures everything the wall-and-chamber geometry sees.
//! The model records `H³`, `c₂(X)·H`, the order of the torsion of
//! `H²(X,ℤ)`, the minimal normalized degree of an effective divisor,
//! and whether `K_X ≅ O_X` (the Calabi-Yau assumption used by the
//! wall-crossing machinery; Riemann-Roch below already assumes it).

use crate::rat::{rat, rat_value, rint, value_to_rat, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThreefoldError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("Euler pairing {0} is not an integer")]
    NonIntegerEuler(Rat),
    #[error("the zero class has no Hilbert polynomial")]
    ZeroClass,
}

/// Numerical invariants of a polarized threefold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldModel {
    pub name: String,
    /// `H³ ≥ 1`.
    pub h3: i64,
    /// `c₂(X)·H`.
    pub c2h: i64,
    /// `#H²(X,ℤ)_tors ≥ 1`.
    pub tors: i64,
    /// Minimal `D·H²/H³` over effective divisors `D`; `cmin·H³` is a
    /// positive integer.
    #[serde(with = "crate::rat::rat_serde")]
    pub cmin: Rat,
    pub calabi_yau: bool,
}

impl ThreefoldModel {
    pub fn new(
        name: &str,
        h3: i64,
        c2h: i64,
        tors: i64,
        cmin: Rat,
        calabi_yau: bool,
    ) -> Result<Self, ThreefoldError> {
        let model = ThreefoldModel {
            name: name.to_string(),
            h3,
            c2h,
            tors,
            cmin,
            calabi_yau,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ThreefoldError> {
        if self.h3 < 1 {
            return Err(ThreefoldError::InvalidModel(format!(
                "h3 must be a positive integer, got {}",
                self.h3
            )));
        }
        if self.tors < 1 {
            return Err(ThreefoldError::InvalidModel(format!(
                "tors must be a positive integer, got {}",
                self.tors
            )));
        }
        if !self.cmin.is_positive() {
            return Err(ThreefoldError::InvalidModel(format!(
                "cmin must be positive, got {}",
                self.cmin
            )));
        }
        if !(&self.cmin * self.h3_rat()).is_integer() {
            return Err(ThreefoldError::InvalidModel(format!(
                "cmin*h3 must be a positive integer, got {}",
                &self.cmin * self.h3_rat()
            )));
        }
        Ok(())
    }

    /// The quintic threefold in `P⁴`: `H³ = 5`, `c₂·H = 50`, torsion-free
    /// `H²`, minimal effective divisor degree 1.
    pub fn quintic() -> Self {
        ThreefoldModel {
            name: "quintic".to_string(),
            h3: 5,
            c2h: 50,
            tors: 1,
            cmin: rint(1),
            calabi_yau: true,
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "quintic" => Some(Self::quintic()),
            _ => None,
        }
    }

    pub fn h3_rat(&self) -> Rat {
        rint(self.h3)
    }

    pub fn c2h_rat(&self) -> Rat {
        rint(self.c2h)
    }

    /// Bogomolov discriminant `Δ_H(v) = (ch₁H²)² − 2(ch₂H)(ch₀)H³`,
    /// i.e. `H⁶·(c² − 2sr)`; invariant under twisting.
    pub fn delta(&self, v: &KClass) -> Rat {
        rint(self.h3 * self.h3) * v.delta_reduced()
    }

    /// Euler characteristic by Riemann-Roch with `c₁(X) = 0`:
    /// `χ(v) = ch₃ + ch₁·c₂(X)/12 = d·H³ + c·(c₂·H)/12`.
    pub fn euler(&self, v: &KClass) -> Rat {
        &v.d * self.h3_rat() + &v.c * self.c2h_rat() / rint(12)
    }

    /// `χ(v(n))` for a rational twist `n`.
    pub fn euler_twisted(&self, v: &KClass, n: &Rat) -> Rat {
        self.euler(&v.twist(n))
    }

    /// Euler pairing `χ(v, w) = χ(v^∨ ⊗ w)`; antisymmetric on
    /// Calabi-Yau threefolds.
    pub fn euler_pair(&self, v: &KClass, w: &KClass) -> Rat {
        self.euler(&v.dual().truncated_product(w))
    }

    /// `χ̄(v, w) = (−1)^{χ(v,w)−1} χ(v,w)`; errors unless the pairing is
    /// an integer.
    pub fn chi_bar(&self, v: &KClass, w: &KClass) -> Result<BigInt, ThreefoldError> {
        let chi = self.euler_pair(v, w);
        chi_bar_int(&chi)
    }

    /// `χ̄(v(n))`, the special case pairing against `O_X(−n)`.
    pub fn chi_bar_twisted(&self, v: &KClass, n: &Rat) -> Result<BigInt, ThreefoldError> {
        chi_bar_int(&self.euler_twisted(v, n))
    }

    /// Whether `v` could be the class of an object of `D^b(X)`: integer
    /// rank, integer `ch₁·H²`, and integer `χ(v(n))` for `n = 0..3`.
    pub fn integrality_check(&self, v: &KClass) -> bool {
        if !(&v.c * self.h3_rat()).is_integer() {
            return false;
        }
        (0..4).all(|n| self.euler_twisted(v, &rint(n)).is_integer())
    }

    /// Classes of a stable pair `I• = [O_X → F]` with `ch(F) =
    /// (0, 0, beta_h, m)` in normalized coordinates, and of its
    /// dual-shift `E = (I•)^∨[1]` twisted by `O(−n)`.
    ///
    /// Caller contract: `beta_h > 0` (the support is a curve).
    pub fn stable_pair_class(&self, beta_h: &Rat, m: &Rat, n: &Rat) -> (KClass, KClass) {
        assert!(
            beta_h.is_positive(),
            "stable_pair_class requires beta_h > 0"
        );
        let pair = KClass::new_rat(rint(1), Rat::zero(), -beta_h, -m);
        let dual_shift = KClass::new_rat(rint(-1), Rat::zero(), beta_h.clone(), -m).twist(&-n);
        (pair, dual_shift)
    }
}

fn chi_bar_int(chi: &Rat) -> Result<BigInt, ThreefoldError> {
    if !chi.is_integer() {
        return Err(ThreefoldError::NonIntegerEuler(chi.clone()));
    }
    let n = chi.to_integer();
    if num_integer::Integer::is_even(&n) {
        Ok(-n)
    } else {
        Ok(n)
    }
}

/// Normalized Chern character `(r, c, s, d)` of a numerical K-theory
/// class. `r = ch₀` is an integer for honest classes but is kept
/// rational so intermediate arithmetic stays closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KClass {
    pub r: Rat,
    pub c: Rat,
    pub s: Rat,
    pub d: Rat,
}

impl KClass {
    pub fn new(r: i64, c: Rat, s: Rat, d: Rat) -> Self {
        KClass {
            r: rint(r),
            c,
            s,
            d,
        }
    }

    pub fn new_rat(r: Rat, c: Rat, s: Rat, d: Rat) -> Self {
        KClass { r, c, s, d }
    }

    pub fn zero() -> Self {
        KClass::new_rat(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.c.is_zero() && self.s.is_zero() && self.d.is_zero()
    }

    /// `ch(O_X(nH)) = (1, n, n²/2, n³/6)` for rational `n`.
    pub fn line_bundle(n: &Rat) -> Self {
        KClass::new_rat(
            rint(1),
            n.clone(),
            n * n / rint(2),
            n * n * n / rint(6),
        )
    }

    /// Skyscraper-type class `(0, 0, 0, 1/H³)` with `χ = 1`.
    pub fn point(x: &ThreefoldModel) -> Self {
        KClass::new_rat(Rat::zero(), Rat::zero(), Rat::zero(), rat(1, x.h3))
    }

    /// Twist by `e^{nH}`:
    /// `(r, c+nr, s+nc+n²r/2, d+ns+n²c/2+n³r/6)`.
    pub fn twist(&self, n: &Rat) -> Self {
        let n2 = n * n;
        let n3 = &n2 * n;
        KClass {
            r: self.r.clone(),
            c: &self.c + n * &self.r,
            s: &self.s + n * &self.c + &n2 * &self.r / rint(2),
            d: &self.d + n * &self.s + &n2 * &self.c / rint(2) + &n3 * &self.r / rint(6),
        }
    }

    /// `ch^{bH} = ch · e^{−bH}`.
    pub fn ch_b(&self, b: &Rat) -> Self {
        self.twist(&-b)
    }

    /// Derived dual: `(r, −c, s, −d)`.
    pub fn dual(&self) -> Self {
        KClass {
            r: self.r.clone(),
            c: -&self.c,
            s: self.s.clone(),
            d: -&self.d,
        }
    }

    /// `c² − 2sr`, the discriminant without its `H⁶` scale.
    pub fn delta_reduced(&self) -> Rat {
        &self.c * &self.c - rint(2) * &self.s * &self.r
    }

    /// Degree-truncated product of Chern characters (the component of
    /// `ch(v)·ch(w)` in each degree ≤ 3).
    pub fn truncated_product(&self, w: &KClass) -> Self {
        KClass {
            r: &self.r * &w.r,
            c: &self.r * &w.c + &self.c * &w.r,
            s: &self.r * &w.s + &self.c * &w.c + &self.s * &w.r,
            d: &self.r * &w.d + &self.c * &w.s + &self.s * &w.c + &self.d * &w.r,
        }
    }
}

impl std::ops::Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        KClass {
            r: &self.r + &rhs.r,
            c: &self.c + &rhs.c,
            s: &self.s + &rhs.s,
            d: &self.d + &rhs.d,
        }
    }
}

impl std::ops::Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        KClass {
            r: &self.r - &rhs.r,
            c: &self.c - &rhs.c,
            s: &self.s - &rhs.s,
            d: &self.d - &rhs.d,
        }
    }
}

impl std::ops::Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass {
            r: -&self.r,
            c: -&self.c,
            s: -&self.s,
            d: -&self.d,
        }
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.r, self.c, self.s, self.d)
    }
}

impl Serialize for KClass {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("KClass", 4)?;
        if self.r.is_integer() {
            st.serialize_field("r", &crate::rat::bigint_number(&self.r.to_integer()))?;
        } else {
            st.serialize_field("r", &rat_value(&self.r))?;
        }
        st.serialize_field("c", &rat_value(&self.c))?;
        st.serialize_field("s", &rat_value(&self.s))?;
        st.serialize_field("d", &rat_value(&self.d))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for KClass {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as DeError;
        #[derive(Deserialize)]
        struct Raw {
            r: serde_json::Value,
            c: serde_json::Value,
            s: serde_json::Value,
            d: serde_json::Value,
        }
        let raw = Raw::deserialize(de)?;
        let get = |v: &serde_json::Value, name: &str| {
            value_to_rat(v).ok_or_else(|| DeError::custom(format!("bad class field '{name}'")))
        };
        Ok(KClass {
            r: get(&raw.r, "r")?,
            c: get(&raw.c, "c")?,
            s: get(&raw.s, "s")?,
            d: get(&raw.d, "d")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    /// The structure sheaf of a hyperplane section `D ∈ |H|` on the
    /// quintic: `ch(O_D) = (0, 1, −1/2, 1/6)`.
    fn o_d() -> KClass {
        KClass::new(0, rint(1), rat(-1, 2), rat(1, 6))
    }

    #[test]
    fn model_validation() {
        assert!(quintic().validate().is_ok());
        assert!(ThreefoldModel::new("bad", 0, 0, 1, rint(1), true).is_err());
        assert!(ThreefoldModel::new("bad", 5, 50, 0, rint(1), true).is_err());
        assert!(ThreefoldModel::new("bad", 5, 50, 1, rat(1, 3), true).is_err());
        assert!(ThreefoldModel::new("ok", 5, 50, 1, rat(2, 5), true).is_ok());
        assert!(ThreefoldModel::builtin("quintic").is_some());
        assert!(ThreefoldModel::builtin("sextic").is_none());
    }

    #[test]
    fn twist_matches_line_bundle() {
        let o = KClass::line_bundle(&rint(0));
        assert_eq!(o.twist(&rint(-2)), KClass::line_bundle(&rint(-2)));
        let om = KClass::line_bundle(&rint(-3));
        assert_eq!(om, KClass::new(1, rint(-3), rat(9, 2), rat(-27, 6)));
        // twisting is a group action
        let v = KClass::new(2, rat(1, 5), rat(-3, 10), rat(7, 30));
        assert_eq!(v.twist(&rat(2, 3)).twist(&rat(-2, 3)), v);
        assert_eq!(v.ch_b(&rat(1, 2)), v.twist(&rat(-1, 2)));
    }

    #[test]
    fn dual_and_delta() {
        let v = KClass::new(-1, rint(10), rat(-50, 1), rat(1001, 6));
        assert_eq!(
            v.dual(),
            KClass::new(-1, rint(-10), rat(-50, 1), rat(-1001, 6))
        );
        // Δ is twist-invariant
        let x = quintic();
        let w = o_d();
        assert_eq!(x.delta(&w), x.delta(&w.twist(&rat(7, 3))));
        assert_eq!(x.delta(&w), rint(25));
        // line bundles have Δ = 0
        assert_eq!(x.delta(&KClass::line_bundle(&rint(-4))), rint(0));
    }

    #[test]
    fn euler_characteristic_quintic() {
        let x = quintic();
        assert_eq!(x.euler(&KClass::line_bundle(&rint(0))), rint(0));
        // χ(O_X(n)) = C(n+4,4) − C(n−1,4) from the restriction sequence
        assert_eq!(x.euler(&KClass::line_bundle(&rint(1))), rint(5));
        assert_eq!(x.euler(&KClass::line_bundle(&rint(2))), rint(15));
        assert_eq!(x.euler(&KClass::line_bundle(&rint(9))), rint(645));
        assert_eq!(x.euler(&KClass::line_bundle(&rint(10))), rint(875));
        // χ of a point class is 1
        assert_eq!(x.euler(&KClass::point(&x)), rint(1));
        // χ(O_D(n)) = (5/2)n(n−1) + 5
        let v = o_d();
        assert_eq!(x.euler_twisted(&v, &rint(0)), rint(5));
        assert_eq!(x.euler_twisted(&v, &rint(1)), rint(5));
        assert_eq!(x.euler_twisted(&v, &rint(10)), rint(230));
    }

    #[test]
    fn euler_pairing_antisymmetric() {
        let x = quintic();
        let o = KClass::line_bundle(&rint(0));
        let on = KClass::line_bundle(&rint(3));
        // χ(O_X, O(n)) = χ(O(n))
        assert_eq!(x.euler_pair(&o, &on), x.euler(&on));
        assert_eq!(x.euler_pair(&on, &o), -x.euler(&on));
        let v = o_d();
        assert_eq!(x.euler_pair(&v, &on), -x.euler_pair(&on, &v));
        assert_eq!(x.euler_pair(&v, &v), rint(0));
    }

    #[test]
    fn chi_bar_values() {
        let x = quintic();
        let v = o_d();
        // χ(v(10)) = 230 even → χ̄ = −230
        assert_eq!(x.chi_bar_twisted(&v, &rint(10)).unwrap(), BigInt::from(-230));
        // χ(O(1)) = 5 odd → χ̄ = 5
        assert_eq!(
            x.chi_bar(&KClass::line_bundle(&rint(0)), &KClass::line_bundle(&rint(1)))
                .unwrap(),
            BigInt::from(5)
        );
        // non-integer pairing errors
        let bad = KClass::new(0, rint(1), rint(0), rint(0));
        assert!(matches!(
            x.chi_bar(&KClass::line_bundle(&rint(0)), &bad),
            Err(ThreefoldError::NonIntegerEuler(_))
        ));
    }

    #[test]
    fn integrality() {
        let x = quintic();
        assert!(x.integrality_check(&o_d()));
        assert!(x.integrality_check(&KClass::line_bundle(&rint(-7))));
        assert!(x.integrality_check(&KClass::point(&x)));
        assert!(!x.integrality_check(&KClass::new(0, rint(1), rint(0), rint(0))));
        assert!(!x.integrality_check(&KClass::new(0, rat(1, 2), rint(0), rint(0))));
    }

    #[test]
    fn stable_pair_classes() {
        let x = quintic();
        let (pair, dual_shift) = x.stable_pair_class(&rat(1, 5), &rat(1, 5), &rint(0));
        assert_eq!(pair, KClass::new(1, rint(0), rat(-1, 5), rat(-1, 5)));
        assert_eq!(dual_shift, KClass::new(-1, rint(0), rat(1, 5), rat(-1, 5)));
        // Δ of the dual-shift class is 2·beta_h·H⁶ ≥ 0
        assert_eq!(x.delta(&dual_shift), rat(1, 5) * rint(2) * rint(25));
        // twisting by O(−n) moves c to n
        let (_, e_n) = x.stable_pair_class(&rat(1, 5), &rat(1, 5), &rint(2));
        assert_eq!(e_n.c, rint(2));
        assert_eq!(e_n, dual_shift.twist(&rint(-2)));
    }

    #[test]
    fn serde_format() {
        let v = KClass::new(-1, rint(11), rat(-101, 2), rat(1001, 6));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"r":-1,"c":[11,1],"s":[-101,2],"d":[1001,6]}"#);
        let back: KClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
