use super::mag::Mag;
use super::real::BigReal;
use std::fmt;

/// A complex number with componentwise [`BigReal`] error bounds.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> BigComplex {
        BigComplex { re, im }
    }

    pub fn from_real(re: BigReal) -> BigComplex {
        let prec = re.prec();
        BigComplex { re, im: BigReal::zero(prec) }
    }

    pub fn i(prec: u32) -> BigComplex {
        BigComplex { re: BigReal::zero(prec), im: BigReal::one(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, r: &BigReal) -> BigComplex {
        BigComplex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> BigComplex {
        BigComplex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> BigComplex {
        let n = self.norm_sqr();
        BigComplex { re: self.re.div(&n), im: self.im.neg().div(&n) }
    }

    pub fn div(&self, o: &BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        BigComplex { re: num.re.div(&n), im: num.im.div(&n) }
    }

    pub fn powi(&self, k: u32) -> BigComplex {
        let mut r = BigComplex::from_real(BigReal::one(self.prec()));
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Bound on `|self - o|` in the max norm.
    pub fn dist_upper(&self, o: &BigComplex) -> Mag {
        let d = self.sub(o);
        d.re.abs_upper().max(d.im.abs_upper())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let im = self.im.to_sci_string(digits);
        if im.starts_with('-') {
            write!(f, "{} - {}i", self.re.to_sci_string(digits), &im[1..])
        } else {
            write!(f, "{} + {}i", self.re.to_sci_string(digits), im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_inverts_multiplication() {
        let p = 200;
        let a = BigComplex::new(BigReal::from_ratio(3, 7, p), BigReal::from_ratio(-2, 5, p));
        let b = BigComplex::new(BigReal::from_ratio(1, 9, p), BigReal::from_int(4, p));
        let c = a.mul(&b).div(&b);
        assert!(c.dist_upper(&a) < Mag::pow2(-190));
        let i2 = BigComplex::i(p).powi(2);
        assert!(i2.dist_upper(&BigComplex::from_real(BigReal::from_int(-1, p))) < Mag::pow2(-190));
    }
}
