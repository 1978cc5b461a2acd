//! Hilbert polynomials `P_v(t) = χ(v(t))` and the ordering used for
//! Gieseker-type stability comparisons.

use crate::rat::{rat_value, rint, Rat};
use crate::threefold::{KClass, ThreefoldError, ThreefoldModel};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

/// A polynomial of degree ≤ 3 with rational coefficients, stored by
/// degree: `coeffs[k]` multiplies `t^k`. Always nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    coeffs: [Rat; 4],
}

impl HilbertPolynomial {
    /// `P_v(t) = χ(v(t)) = (H³r/6)t³ + (H³c/2)t² + (H³s + r·c₂H/12)t
    /// + (H³d + c·c₂H/12)`. The zero class is rejected: it is the only
    /// class whose Hilbert polynomial vanishes identically.
    pub fn of(x: &ThreefoldModel, v: &KClass) -> Result<Self, ThreefoldError> {
        if v.is_zero() {
            return Err(ThreefoldError::ZeroClass);
        }
        let h3 = x.h3_rat();
        let c2h = x.c2h_rat();
        Ok(HilbertPolynomial {
            coeffs: [
                &h3 * &v.d + &v.c * &c2h / rint(12),
                &h3 * &v.s + &v.r * &c2h / rint(12),
                &h3 * &v.c / rint(2),
                &h3 * &v.r / rint(6),
            ],
        })
    }

    fn from_coeffs(coeffs: [Rat; 4]) -> Self {
        debug_assert!(coeffs.iter().any(|a| !a.is_zero()));
        HilbertPolynomial { coeffs }
    }

    pub fn coeff(&self, degree: usize) -> &Rat {
        &self.coeffs[degree]
    }

    pub fn degree(&self) -> usize {
        (0..4).rev().find(|&k| !self.coeffs[k].is_zero()).unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> &Rat {
        &self.coeffs[self.degree()]
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for k in (0..4).rev() {
            acc = acc * t + &self.coeffs[k];
        }
        acc
    }

    /// Monic rescaling `P / lead(P)`.
    pub fn reduced(&self) -> Self {
        let lead = self.leading_coeff().clone();
        HilbertPolynomial::from_coeffs(self.coeffs.clone().map(|a| a / &lead))
    }

    /// Reduced polynomial with its constant term dropped. For a
    /// dimension-two class `(0, c, s, d)` this is `t² + (2s/c)t`, so two
    /// such classes share a truncated reduced polynomial exactly when
    /// they have the same `s/c`.
    pub fn truncated(&self) -> Self {
        let mut out = self.reduced();
        out.coeffs[0] = Rat::zero();
        out
    }

    /// Strict ordering `self ≺ other`: greater degree first, then the
    /// values for `t ≫ 0`, i.e. lexicographic from the top coefficient
    /// down. Equal polynomials do not precede each other.
    pub fn precedes(&self, other: &Self) -> bool {
        match other.degree().cmp(&self.degree()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => (0..4)
                .rev()
                .map(|k| self.coeffs[k].cmp(&other.coeffs[k]))
                .find(|o| *o != Ordering::Equal)
                .map(|o| o == Ordering::Less)
                .unwrap_or(false),
        }
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..4).rev() {
            let a = &self.coeffs[k];
            if a.is_zero() {
                continue;
            }
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if a.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = a.abs();
            let unit_coeff = abs.is_one() && k > 0;
            if !unit_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}t", if unit_coeff { "" } else { "*" })?,
                _ => write!(f, "{}t^{}", if unit_coeff { "" } else { "*" }, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for HilbertPolynomial {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("HilbertPolynomial", 2)?;
        let desc: Vec<_> = (0..4).rev().map(|k| rat_value(&self.coeffs[k])).collect();
        st.serialize_field("coeffs", &desc)?;
        st.serialize_field("degree", &self.degree())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn quintic() -> ThreefoldModel {
        ThreefoldModel::quintic()
    }

    fn o_d() -> KClass {
        KClass::new(0, rint(1), rat(-1, 2), rat(1, 6))
    }

    #[test]
    fn hyperplane_section_polynomial() {
        let p = HilbertPolynomial::of(&quintic(), &o_d()).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(*p.coeff(2), rat(5, 2));
        assert_eq!(*p.coeff(1), rat(-5, 2));
        assert_eq!(*p.coeff(0), rint(5));
        assert_eq!(p.eval(&rint(10)), rint(230));
        assert_eq!(p.to_string(), "5/2*t^2 - 5/2*t + 5");
        let red = p.reduced();
        assert_eq!(red.to_string(), "t^2 - t + 2");
        assert_eq!(p.truncated().to_string(), "t^2 - t");
    }

    #[test]
    fn structure_sheaf_polynomial() {
        let p = HilbertPolynomial::of(&quintic(), &KClass::line_bundle(&rint(0))).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.to_string(), "5/6*t^3 + 25/6*t");
        assert_eq!(p.eval(&rint(1)), rint(5));
        assert_eq!(p.eval(&rint(10)), rint(875));
        assert_eq!(p.truncated().to_string(), "t^3 + 5*t");
    }

    #[test]
    fn zero_class_has_no_polynomial() {
        assert_eq!(
            HilbertPolynomial::of(&quintic(), &KClass::zero()),
            Err(ThreefoldError::ZeroClass)
        );
    }

    #[test]
    fn ordering() {
        let x = quintic();
        let p3 = HilbertPolynomial::of(&x, &KClass::line_bundle(&rint(0))).unwrap();
        let p2 = HilbertPolynomial::of(&x, &o_d()).unwrap();
        // greater degree comes first
        assert!(p3.precedes(&p2));
        assert!(!p2.precedes(&p3));
        // same degree: compare for t >> 0
        let q = HilbertPolynomial::of(&x, &o_d().twist(&rint(1))).unwrap();
        assert!(p2.precedes(&q));
        assert!(!q.precedes(&p2));
        assert!(!p2.precedes(&p2));
        // truncation can merge distinct polynomials
        assert_eq!(p2.truncated(), p2.truncated());
    }

    #[test]
    fn eval_point_class() {
        let x = quintic();
        let p = HilbertPolynomial::of(&x, &KClass::point(&x)).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(p.eval(&rint(1000)), rint(1));
        assert_eq!(p.to_string(), "1");
        assert_eq!(p.reduced(), p);
    }

    #[test]
    fn serde_shape() {
        let p = HilbertPolynomial::of(&quintic(), &o_d()).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "coeffs": [[0,1],[5,2],[-5,2],[5,1]],
                "degree": 2
            })
        );
    }
}
