//! Arbitrary-precision real and complex arithmetic with tracked error bounds.
//!
//! Values carry a mantissa size and a conservative bound on their distance
//! from the exact quantity. The bookkeeping is not full interval arithmetic
//! (rounding inside a single kernel operation is bounded by hand), so results
//! used for acceptance are also re-run at a higher precision.

mod complex;
mod consts;
mod elem;
mod mag;
mod real;

pub use complex::BigComplex;
pub use consts::{ln2, pi};
pub use elem::{cos_pi_rat, exp, ln, pow_int, pow_rat as pow_rat_bits, powr, sin_pi_rat as sin_pi_rat_bits};
pub use mag::{ldexp, Mag};
pub use real::BigReal;

use crate::error::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// Working precision: `bits` of target accuracy plus `guard_bits` of slack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub bits: u32,
    pub guard_bits: u32,
}

impl Precision {
    /// 450 bits plus 50 guard bits.
    pub const DEFAULT: Precision = Precision { bits: 450, guard_bits: 50 };

    pub fn new(bits: u32, guard_bits: u32) -> Result<Precision> {
        if bits < 64 {
            return Err(Error::Domain(format!("precision of {bits} bits is below the 64-bit minimum")));
        }
        Ok(Precision { bits, guard_bits })
    }

    /// Precision for `digits` decimal digits with 50 guard bits.
    pub fn from_digits(digits: u32) -> Result<Precision> {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
        Precision::new(bits.max(64), 50)
    }

    /// Mantissa size used for intermediate values.
    pub fn working(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Exponent `e` of the advertised accuracy `2^e`.
    pub fn tolerance_exp(&self) -> i64 {
        -i64::from(self.bits)
    }

    pub fn escalate(&self, extra: u32) -> Precision {
        Precision { bits: self.bits + extra, guard_bits: self.guard_bits }
    }
}

/// π at the working precision.
pub fn const_pi(prec: Precision) -> BigReal {
    pi(prec.working())
}

/// `sin(π r)`, reducing `r` modulo 2 exactly.
pub fn sin_pi_rat(r: &Rational, prec: Precision) -> BigReal {
    sin_pi_rat_bits(r, prec.working())
}

/// `base^exponent` for `base > 0`.
pub fn pow_rat(base: &Rational, exponent: &Rational, prec: Precision) -> Result<BigReal> {
    pow_rat_bits(base, exponent, prec.working())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn precision_contract() {
        assert!(Precision::new(32, 0).is_err());
        let p = Precision::from_digits(135).unwrap();
        assert!(p.bits >= 448);
        assert_eq!(Precision::DEFAULT.working(), 500);
    }

    #[test]
    fn pi_two_algorithms() {
        // Gauss-Legendre AGM iteration as an independent oracle.
        let prec = Precision::new(256, 40).unwrap();
        let w = prec.working();
        let mut a = BigReal::one(w);
        let mut b = BigReal::from_ratio(1, 2, w).sqrt();
        let mut t = BigReal::from_ratio(1, 4, w);
        let mut pw = 0i64;
        for _ in 0..10 {
            let an = a.add(&b).mul_2exp(-1);
            let bn = a.mul(&b).sqrt();
            let d = a.sub(&an);
            t = t.sub(&d.square().mul_2exp(pw));
            pw += 1;
            a = an;
            b = bn;
        }
        let agm = a.add(&b).square().div(&t.mul_2exp(2));
        let pi = const_pi(prec);
        assert!(agm.sub(&pi).abs_upper() < Mag::pow2(-250));
        assert!(pi.to_sci_string(21).starts_with("3.14159265358979323846"));
    }

    #[test]
    fn sin_of_pi_vanishes() {
        let prec = Precision::new(128, 32).unwrap();
        let s = sin_pi_rat(&q(1, 1), prec);
        assert!(s.is_zero_value());
        let twice = const_pi(prec).mul_i64(2);
        let s2 = sin_pi_rat(&q(2, 1), prec);
        assert!(s2.abs_upper() < Mag::pow2(-120));
        assert!(twice.sub(&const_pi(prec).add(&const_pi(prec))).abs_upper() < Mag::pow2(-150));
    }

    #[test]
    fn pow_rat_examples() {
        let prec = Precision::new(256, 32).unwrap();
        let v = pow_rat(&q(15625, 1), &q(1, 4), prec).unwrap();
        assert!(v.to_sci_string(20).starts_with("1.118033988"));
        let r = pow_rat(&q(5776, 3375), &q(1, 2), prec).unwrap();
        let oracle = BigReal::from_int(76, prec.working()).div(&pow_rat(&q(15, 1), &q(3, 2), prec).unwrap());
        assert!(r.sub(&oracle).abs_upper() < Mag::pow2(-250));
    }
}
