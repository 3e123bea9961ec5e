//! Elementary functions on [`BigReal`].

use super::consts::{ln2, pi};
use super::mag::Mag;
use super::real::{int_root, BigReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn halving_steps(prec: u32) -> i64 {
    (f64::from(prec).sqrt() / 2.0) as i64 + 4
}

/// `e^x`. Arguments must satisfy `|x| < 2^40`.
pub fn exp(x: &BigReal) -> BigReal {
    let prec = x.prec();
    if x.is_zero_value() && x.is_exact() {
        return BigReal::one(prec);
    }
    let xf = x.to_f64();
    assert!(xf.abs() < 1.0e12, "exp argument out of range");
    let n = (xf / std::f64::consts::LN_2).round() as i64;
    let s = halving_steps(prec);
    let nbits = 64 - n.unsigned_abs().leading_zeros();
    let wp = prec + s as u32 + 32 + nbits;
    let r = x.with_prec(wp).sub(&ln2(wp).mul_i64(n)).mul_2exp(-s);
    let stop = Mag::pow2(-(i64::from(wp) + 4));
    let mut sum = BigReal::one(wp);
    let mut term = BigReal::one(wp);
    let mut k = 1;
    loop {
        term = term.mul(&r).div_i64(k);
        sum = sum.add(&term);
        if term.value_mag_up() < stop {
            break;
        }
        k += 1;
    }
    sum = sum.add_error(term.abs_upper());
    for _ in 0..s {
        sum = sum.square();
    }
    sum.mul_2exp(n).with_prec(prec)
}

/// Natural logarithm of a certainly positive number.
pub fn ln(x: &BigReal) -> Result<BigReal> {
    if x.sign() <= 0 || x.abs_lower().is_zero() {
        return Err(Error::Domain("logarithm of a non-positive number".into()));
    }
    let prec = x.prec();
    let j = halving_steps(prec);
    let wp = prec + 2 * j as u32 + 40;
    let k = x.log2_floor().unwrap();
    let mut y = x.mul_2exp(-k).with_prec(wp);
    for _ in 0..j {
        y = y.sqrt();
    }
    let one = BigReal::one(wp);
    let u = y.sub(&one).div(&y.add(&one));
    let u2 = u.square();
    let stop = Mag::pow2(-(i64::from(wp) + 4));
    let mut pw = u.clone();
    let mut sum = u.clone();
    let mut i = 1i64;
    let last = loop {
        pw = pw.mul(&u2);
        let t = pw.div_i64(2 * i + 1);
        sum = sum.add(&t);
        if t.value_mag_up() < stop {
            break t;
        }
        i += 1;
    };
    let sum = sum.add_error(last.abs_upper());
    let res = ln2(wp).mul_i64(k).add(&sum.mul_2exp(j + 1));
    Ok(res.with_prec(prec))
}

fn sin_taylor(x: &BigReal) -> BigReal {
    let wp = x.prec() + 16;
    let x = x.with_prec(wp);
    let x2 = x.square();
    let stop = Mag::pow2(-(i64::from(wp) + 4));
    let mut term = x.clone();
    let mut sum = x;
    let mut k = 1i64;
    loop {
        term = term.mul(&x2).div_i64((2 * k) * (2 * k + 1)).neg();
        sum = sum.add(&term);
        if term.value_mag_up() < stop {
            break;
        }
        k += 1;
    }
    sum.add_error(term.abs_upper())
}

fn cos_taylor(x: &BigReal) -> BigReal {
    let wp = x.prec() + 16;
    let x2 = x.with_prec(wp).square();
    let stop = Mag::pow2(-(i64::from(wp) + 4));
    let mut term = BigReal::one(wp);
    let mut sum = BigReal::one(wp);
    let mut k = 1i64;
    loop {
        term = term.mul(&x2).div_i64((2 * k - 1) * (2 * k)).neg();
        sum = sum.add(&term);
        if term.value_mag_up() < stop {
            break;
        }
        k += 1;
    }
    sum.add_error(term.abs_upper())
}

/// `sin(pi r)` with the reduction of `r` done exactly.
pub fn sin_pi_rat(r: &BigRational, prec: u32) -> BigReal {
    let two = BigRational::from_integer(2.into());
    let mut r = r - (r / &two).floor() * &two;
    let mut negate = false;
    if r >= BigRational::one() {
        r -= BigRational::one();
        negate = true;
    }
    let half = BigRational::new(1.into(), 2.into());
    if r > half {
        r = BigRational::one() - r;
    }
    let v = if r.is_zero() {
        BigReal::zero(prec)
    } else if r == half {
        BigReal::one(prec)
    } else if r == BigRational::new(1.into(), 6.into()) {
        BigReal::from_ratio(1, 2, prec)
    } else if r <= BigRational::new(1.into(), 4.into()) {
        sin_taylor(&pi(prec + 16).mul_rat(&r)).with_prec(prec)
    } else {
        cos_taylor(&pi(prec + 16).mul_rat(&(half - r))).with_prec(prec)
    };
    if negate {
        v.neg()
    } else {
        v
    }
}

/// `cos(pi r)`.
pub fn cos_pi_rat(r: &BigRational, prec: u32) -> BigReal {
    sin_pi_rat(&(r + BigRational::new(1.into(), 2.into())), prec)
}

/// `base^e` for a positive rational base and rational exponent.
///
/// Exact perfect powers come back exact (up to binary rounding of the
/// rational result); other small-denominator cases use a scaled integer root.
pub fn pow_rat(base: &BigRational, e: &BigRational, prec: u32) -> Result<BigReal> {
    if !base.is_positive() {
        return Err(Error::Domain("pow_rat needs a positive base".into()));
    }
    let (p, q) = (e.numer(), e.denom());
    let pabs = match p.abs().to_u32() {
        Some(v) if v <= 4096 => v,
        _ => return Ok(powr(&BigReal::from_rational(base, prec + 32), e)?.with_prec(prec)),
    };
    let mut r = num_traits::pow(base.clone(), pabs as usize);
    if p.is_negative() {
        r = r.recip();
    }
    if q.is_one() {
        return Ok(BigReal::from_rational(&r, prec));
    }
    let qn = match q.to_u32() {
        Some(v) => v,
        None => return Ok(powr(&BigReal::from_rational(base, prec + 32), e)?.with_prec(prec)),
    };
    let (a, b) = (r.numer(), r.denom());
    let ra = int_root(a, qn);
    let rb = int_root(b, qn);
    if num_traits::pow(ra.clone(), qn as usize) == *a && num_traits::pow(rb.clone(), qn as usize) == *b {
        return Ok(BigReal::from_rational(&BigRational::new(ra, rb), prec));
    }
    if qn > 24 {
        return Ok(powr(&BigReal::from_rational(base, prec + 32), e)?.with_prec(prec));
    }
    let wp = i64::from(prec) + 8;
    let q = i64::from(qn);
    let s = wp + 2 - (a.bits() as i64 - b.bits() as i64).div_euclid(q);
    let shift = q * s;
    let n = if shift >= 0 { (a << shift as u64) / b } else { a / (b << (-shift) as u64) };
    let y = int_root(&n, qn);
    Ok(BigReal::from_parts(y, -s, Mag::pow2(-s), prec))
}

/// `x^e` for certainly positive `x`, through `exp(e ln x)`.
pub fn powr(x: &BigReal, e: &BigRational) -> Result<BigReal> {
    if e.is_zero() {
        return Ok(BigReal::one(x.prec()));
    }
    if e.is_integer() {
        if let Some(k) = e.numer().to_i64() {
            return Ok(x.powi(k));
        }
    }
    let bits = e.numer().bits().max(e.denom().bits()) as u32;
    let wp = x.prec() + 16 + bits;
    let l = ln(&x.with_prec(wp))?;
    Ok(exp(&l.mul_rat(e)).with_prec(x.prec()))
}

/// `x^k` for an integer `k`, convenience for exact integer bases.
pub fn pow_int(base: i64, k: u32, prec: u32) -> BigReal {
    BigReal::from_int(BigInt::from(base).pow(k), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close(a: &BigReal, b: &BigReal, e: i64) -> bool {
        a.sub(b).abs_upper() < Mag::pow2(e)
    }

    #[test]
    fn exp_ln_inverse() {
        let p = 300;
        for (n, d) in [(1, 3), (-7, 2), (50, 1), (1, 1000)] {
            let x = BigReal::from_rational(&q(n, d), p);
            let y = ln(&exp(&x)).unwrap();
            assert!(close(&x, &y, -280), "{n}/{d}");
        }
        let e = exp(&BigReal::one(200));
        assert!(e.to_sci_string(30).starts_with("2.71828182845904523536028747135"));
    }

    #[test]
    fn ln_of_ten() {
        let l = ln(&BigReal::from_int(10, 200)).unwrap();
        assert!(l.to_sci_string(25).starts_with("2.30258509299404568401799"));
        assert!(ln(&BigReal::from_int(-1, 64)).is_err());
    }

    #[test]
    fn sine_special_values() {
        let p = 256;
        assert!(sin_pi_rat(&q(1, 1), p).is_zero_value());
        assert!(sin_pi_rat(&q(1, 1), p).is_exact());
        let s = sin_pi_rat(&q(1, 4), p);
        let h = BigReal::from_int(2, p).sqrt().div_i64(2);
        assert!(close(&s, &h, -250));
        assert!(close(&sin_pi_rat(&q(-7, 6), p), &BigReal::from_ratio(1, 2, p), -250));
        assert!(close(&sin_pi_rat(&q(3, 2), p), &BigReal::from_int(-1, p), -250));
    }

    #[test]
    fn sine_half_angle_tower() {
        // sin(pi/24) = sqrt((1 - cos(pi/12))/2), cos(pi/12) = (sqrt6 + sqrt2)/4
        let p = 300;
        let c12 = BigReal::from_int(6, p).sqrt().add(&BigReal::from_int(2, p).sqrt()).div_i64(4);
        let oracle = BigReal::one(p).sub(&c12).div_i64(2).sqrt();
        let s = sin_pi_rat(&q(1, 24), p);
        assert!(close(&s, &oracle, -290));
        assert!(s.to_sci_string(9).starts_with("1.3052619"));
    }

    #[test]
    fn pow_rat_exact_and_scaled() {
        let p = 256;
        let two = pow_rat(&q(4, 1), &q(1, 2), p).unwrap();
        assert!(two.is_exact() && two.cmp_value(&BigReal::from_int(2, p)).is_eq());
        let r = pow_rat(&q(15625, 1), &q(1, 4), p).unwrap();
        let oracle = BigReal::from_int(5, p).powi(3).sqrt();
        assert!(close(&r, &oracle, -240));
        assert!(r.to_sci_string(20).starts_with("1.118033988"));
        let r = pow_rat(&q(5776, 3375), &q(1, 2), p).unwrap();
        let sq = r.square();
        assert!(close(&sq, &BigReal::from_rational(&q(5776, 3375), p), -245));
        assert!(pow_rat(&q(-1, 1), &q(1, 2), p).is_err());
    }

    #[test]
    fn pow_rat_agrees_with_exp_ln() {
        let p = 256;
        let b = q(7, 3);
        let e = q(-5, 6);
        let a = pow_rat(&b, &e, p).unwrap();
        let c = powr(&BigReal::from_rational(&b, p), &e).unwrap();
        assert!(close(&a, &c, -240));
        let big = pow_rat(&b, &q(353, 182), p).unwrap();
        let alt = powr(&BigReal::from_rational(&b, p), &q(353, 182)).unwrap();
        assert!(close(&big, &alt, -235));
    }
}
