//! Γ at positive rationals, the Chowla–Selberg period and the constants C1,
//! C2 and C of the X6* series.

use crate::arith::{class_number, kronecker, unit_count, Discriminant};
use crate::error::{Error, Result};
use crate::numkernel::{exp, ln, pi, pow_rat_bits, sin_pi_rat_bits, BigReal, Mag, Precision, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Mutex;

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`).
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (k, b) in cache.iter().enumerate() {
            acc += b * &binom;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        cache.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    cache[..=n].to_vec()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `ln Γ(z)` for rational `z` large enough that the asymptotic series reaches
/// `2^-wp`; returns `None` when it does not.
fn stirling(z: &Rational, wp: u32) -> Option<BigReal> {
    let zr = BigReal::from_rational(z, wp);
    let lz = ln(&zr).ok()?;
    let two_pi = pi(wp).mul_2exp(1);
    let mut s = zr
        .sub(&BigReal::from_ratio(1, 2, wp))
        .mul(&lz)
        .sub(&zr)
        .add(&ln(&two_pi).ok()?.mul_2exp(-1));
    let stop = Mag::pow2(-(i64::from(wp) + 8));
    let inv_z2 = zr.square().recip();
    let mut zpow = zr.recip();
    let mut prev = Mag::INF;
    let mut k = 1usize;
    loop {
        let b = bernoulli_upto(2 * k + 2);
        let coef = &b[2 * k] / Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = zpow.mul_rat(&coef);
        let mag = term.abs_upper();
        if mag > prev {
            return None;
        }
        s = s.add(&term);
        zpow = zpow.mul(&inv_z2);
        let next = &b[2 * k + 2] / Rational::from_integer(BigInt::from((2 * k + 2) * (2 * k + 1)));
        let next_mag = zpow.mul_rat(&next.abs()).abs_upper();
        if next_mag < stop {
            return Some(s.add_error(next_mag));
        }
        prev = mag;
        k += 1;
        if k > 600 {
            return None;
        }
    }
}

fn check_positive(r: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("Gamma is only evaluated at positive rationals, got {r}")));
    }
    Ok(())
}

/// `ln Γ(r)` at `wp` bits for positive rational `r`.
pub fn ln_gamma_bits(r: &Rational, wp: u32) -> Result<BigReal> {
    check_positive(r)?;
    let inner = wp + 32;
    let zmin = Rational::from_integer(BigInt::from((u64::from(inner) * 2 / 5).max(12)));
    let shift = if *r >= zmin { BigInt::zero() } else { (&zmin - r).ceil().to_integer() };
    let n = shift.to_u64().unwrap();
    let z = r + Rational::from_integer(shift);
    let lg = stirling(&z, inner).ok_or_else(|| Error::Domain("Stirling series did not converge".into()))?;
    let mut prod = Rational::one();
    for k in 0..n {
        prod *= r + Rational::from_integer(BigInt::from(k));
    }
    let lp = ln(&BigReal::from_rational(&prod, inner))?;
    Ok(lg.sub(&lp).with_prec(wp))
}

/// `Γ(r)` at `wp` bits for positive rational `r`.
pub fn gamma_bits(r: &Rational, wp: u32) -> Result<BigReal> {
    check_positive(r)?;
    if r.is_integer() && *r.numer() <= BigInt::from(200) {
        let n = r.numer().to_u64().unwrap();
        let f: BigInt = (1..n).map(BigInt::from).product();
        return Ok(BigReal::from_int(f, wp));
    }
    let l = ln_gamma_bits(r, wp + 16)?;
    Ok(exp(&l).with_prec(wp))
}

/// `Γ(r)` for a positive rational `r`.
pub fn gamma_rat(r: &Rational, prec: Precision) -> Result<BigReal> {
    gamma_bits(r, prec.working())
}

/// Exponents `w χ(a) / (4h)` of the Chowla–Selberg product, keyed by `a`.
pub fn chowla_selberg_exponents(d: Discriminant) -> Result<Vec<(i64, Rational)>> {
    if !d.is_fundamental {
        return Err(Error::Unsupported(format!("Chowla-Selberg period needs a fundamental discriminant, got {}", d.d)));
    }
    let w = i64::from(unit_count(d));
    let h = class_number(d) as i64;
    let m = -d.d;
    Ok((1..m)
        .filter_map(|a| {
            let chi = i64::from(kronecker(d, a));
            (chi != 0).then(|| (a, q(w * chi, 4 * h)))
        })
        .collect())
}

/// `Ω_d = sqrt(π) ∏ Γ(a/|d|)^{w χ(a)/(4h)}`.
pub fn chowla_selberg_period(d: Discriminant, prec: Precision) -> Result<BigReal> {
    let wp = prec.working() + 32;
    let exps = chowla_selberg_exponents(d)?;
    let m = -d.d;
    let mut acc = ln(&pi(wp))?.mul_2exp(-1);
    for (a, e) in exps {
        acc = acc.add(&ln_gamma_bits(&q(a, m), wp)?.mul_rat(&e));
    }
    Ok(exp(&acc).with_prec(prec.working()))
}

fn gamma_ratio_product(num: &[(i64, i64)], den: &[(i64, i64)], wp: u32) -> Result<BigReal> {
    let mut acc = BigReal::zero(wp + 16);
    for &(a, b) in num {
        acc = acc.add(&ln_gamma_bits(&q(a, b), wp + 16)?);
    }
    for &(a, b) in den {
        acc = acc.sub(&ln_gamma_bits(&q(a, b), wp + 16)?);
    }
    Ok(exp(&acc).with_prec(wp))
}

/// `C1 = (4 / 12^{1/4}) Γ(3/4)^2 / Γ(1/4)^2`.
pub fn c1(prec: Precision) -> Result<BigReal> {
    let wp = prec.working();
    let g = gamma_ratio_product(&[(3, 4), (3, 4)], &[(1, 4), (1, 4)], wp + 8)?;
    let k = pow_rat_bits(&q(12, 1), &q(-1, 4), wp + 8)?.mul_i64(4);
    Ok(k.mul(&g).with_prec(wp))
}

/// `C2 = (3 / 2^{1/6}) Γ(2/3)^3 / Γ(1/3)^3`.
pub fn c2(prec: Precision) -> Result<BigReal> {
    let wp = prec.working();
    let g = gamma_ratio_product(&[(2, 3), (2, 3), (2, 3)], &[(1, 3), (1, 3), (1, 3)], wp + 8)?;
    let k = pow_rat_bits(&q(2, 1), &q(-1, 6), wp + 8)?.mul_i64(3);
    Ok(k.mul(&g).with_prec(wp))
}

/// The constant of the Schwarzian map in Gamma-product form:
/// `(√2 − √3) Γ(3/4)Γ(19/24)Γ(23/24) / (Γ(5/4)Γ(13/24)Γ(17/24))`.
pub fn lemma3_constant(prec: Precision) -> Result<BigReal> {
    let wp = prec.working();
    let g = gamma_ratio_product(&[(3, 4), (19, 24), (23, 24)], &[(5, 4), (13, 24), (17, 24)], wp + 8)?;
    let w = wp + 8;
    let s = BigReal::from_int(2, w).sqrt().sub(&BigReal::from_int(3, w).sqrt());
    Ok(s.mul(&g).with_prec(wp))
}

/// The constants shared by every series check.
#[derive(Clone, Debug)]
pub struct GammaConstantSet {
    pub c1: BigReal,
    pub c2: BigReal,
    pub c_lemma3: BigReal,
    pub omega_m3: BigReal,
    pub omega_m4: BigReal,
}

impl GammaConstantSet {
    pub fn compute(prec: Precision) -> Result<GammaConstantSet> {
        Ok(GammaConstantSet {
            c1: c1(prec)?,
            c2: c2(prec)?,
            c_lemma3: lemma3_constant(prec)?,
            omega_m3: chowla_selberg_period(Discriminant::new(-3)?, prec)?,
            omega_m4: chowla_selberg_period(Discriminant::new(-4)?, prec)?,
        })
    }

    /// `C1` recomputed from `Ω_{-4}`: `(4/12^{1/4}) π / Ω_{-4}^2`.
    pub fn c1_from_period(&self, prec: Precision) -> Result<BigReal> {
        let wp = prec.working();
        let k = pow_rat_bits(&q(12, 1), &q(-1, 4), wp)?.mul_i64(4);
        Ok(k.mul(&pi(wp)).div(&self.omega_m4.square()))
    }

    /// `C2` recomputed from `Ω_{-3}`: `(3/2^{1/6}) π / Ω_{-3}^2`.
    pub fn c2_from_period(&self, prec: Precision) -> Result<BigReal> {
        let wp = prec.working();
        let k = pow_rat_bits(&q(2, 1), &q(-1, 6), wp)?.mul_i64(3);
        Ok(k.mul(&pi(wp)).div(&self.omega_m3.square()))
    }
}

/// `|Γ(r)Γ(1-r) - π/sin(πr)|` for `0 < r < 1`.
pub fn reflection_residual(r: &Rational, prec: Precision) -> Result<Mag> {
    let wp = prec.working();
    let lhs = gamma_bits(r, wp)?.mul(&gamma_bits(&(Rational::one() - r), wp)?);
    let rhs = pi(wp).div(&sin_pi_rat_bits(r, wp));
    Ok(lhs.sub(&rhs).abs_upper())
}

/// `|Γ(r+1) - r Γ(r)|`.
pub fn functional_equation_residual(r: &Rational, prec: Precision) -> Result<Mag> {
    let wp = prec.working();
    let lhs = gamma_bits(&(r + Rational::one()), wp)?;
    let rhs = gamma_bits(r, wp)?.mul_rat(r);
    Ok(lhs.sub(&rhs).abs_upper())
}

/// `|∏_{j<k} Γ(z + j/k) - (2π)^{(k-1)/2} k^{1/2-kz} Γ(kz)|`.
pub fn gauss_multiplication_residual(z: &Rational, k: u32, prec: Precision) -> Result<Mag> {
    let wp = prec.working();
    let kk = Rational::from_integer(BigInt::from(k));
    let mut lhs = BigReal::one(wp);
    for j in 0..k {
        lhs = lhs.mul(&gamma_bits(&(z + q(i64::from(j), i64::from(k))), wp)?);
    }
    let two_pi = pi(wp + 16).mul_2exp(1);
    let half_pow = two_pi.sqrt().powi(i64::from(k) - 1);
    let e = q(1, 2) - &kk * z;
    let rhs = half_pow.mul(&pow_rat_bits(&kk, &e, wp + 16)?).mul(&gamma_bits(&(&kk * z), wp + 16)?);
    Ok(lhs.sub(&rhs).abs_upper())
}

/// `|(Γ(19/24)Γ(23/24)/(Γ(13/24)Γ(17/24)))^2 - (s^2/√12) Γ(3/4)^2/Γ(1/4)^2|`
/// with `s = √3 + √2`, or `s = √3 − √2` when `minus` is set. Only the first
/// form is an identity; the second is kept to show that it is not.
pub fn squared_ratio_residual(prec: Precision, minus: bool) -> Result<Mag> {
    let wp = prec.working();
    let lhs = gamma_ratio_product(&[(19, 24), (23, 24)], &[(13, 24), (17, 24)], wp + 8)?.square();
    let w = wp + 16;
    let (r3, r2) = (BigReal::from_int(3, w).sqrt(), BigReal::from_int(2, w).sqrt());
    let d = if minus { r3.sub(&r2) } else { r3.add(&r2) }.square();
    let rhs = d
        .div(&BigReal::from_int(12, w).sqrt())
        .mul(&gamma_ratio_product(&[(3, 4), (3, 4)], &[(1, 4), (1, 4)], wp + 8)?);
    Ok(lhs.sub(&rhs).abs_upper())
}

/// Deterministic sample of rationals in `(0, 1)` with small denominators.
pub fn sample_rationals(count: usize) -> Vec<Rational> {
    (0..count)
        .map(|i| {
            let den = 7 + (i as i64 * 13) % 89;
            let num = 1 + (i as i64 * 37 + 5) % (den - 1);
            let g = num.gcd(&den);
            q(num / g, den / g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(200, 40).unwrap()
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_upto(12);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert!(b[11].is_zero());
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let p = prec();
        let g = gamma_rat(&q(1, 2), p).unwrap();
        let s = pi(p.working()).sqrt();
        assert!(g.sub(&s).abs_upper() < Mag::pow2(-220));
    }

    #[test]
    fn gamma_quarter_agm_oracle() {
        // Γ(1/4)^2 = (2π)^{3/2} / AGM(1, √2)
        let p = prec();
        let w = p.working();
        let mut a = BigReal::one(w);
        let mut b = BigReal::from_int(2, w).sqrt();
        for _ in 0..12 {
            let an = a.add(&b).mul_2exp(-1);
            b = a.mul(&b).sqrt();
            a = an;
        }
        let two_pi = pi(w).mul_2exp(1);
        let oracle = two_pi.sqrt().powi(3).div(&a);
        let g = gamma_rat(&q(1, 4), p).unwrap();
        assert!(g.square().sub(&oracle).abs_upper() < Mag::pow2(-215));
        assert!(g.to_sci_string(20).starts_with("3.62560990"));
    }

    #[test]
    fn reflection_at_quarter() {
        let p = prec();
        let w = p.working();
        let prod = gamma_rat(&q(1, 4), p).unwrap().mul(&gamma_rat(&q(3, 4), p).unwrap());
        let oracle = pi(w).mul(&BigReal::from_int(2, w).sqrt());
        assert!(prod.sub(&oracle).abs_upper() < Mag::pow2(-215));
    }

    #[test]
    fn period_closed_forms() {
        let p = prec();
        let w = p.working();
        let o4 = chowla_selberg_period(Discriminant::new(-4).unwrap(), p).unwrap();
        let f4 = pi(w).sqrt().mul(&gamma_rat(&q(1, 4), p).unwrap()).div(&gamma_rat(&q(3, 4), p).unwrap());
        assert!(o4.sub(&f4).abs_upper() < Mag::pow2(-210));
        let o3 = chowla_selberg_period(Discriminant::new(-3).unwrap(), p).unwrap();
        let r = gamma_rat(&q(1, 3), p).unwrap().div(&gamma_rat(&q(2, 3), p).unwrap());
        let f3 = pi(w).sqrt().mul(&r.powi(3).sqrt());
        assert!(o3.sub(&f3).abs_upper() < Mag::pow2(-210));
        assert!(chowla_selberg_period(Discriminant::new(-75).unwrap(), p).is_err());
    }

    #[test]
    fn lemma3_product_equals_minus_c1() {
        let p = prec();
        let c = lemma3_constant(p).unwrap();
        let c1v = c1(p).unwrap();
        assert!(c.add(&c1v).abs_upper() < Mag::pow2(-210));
        assert!(squared_ratio_residual(p, false).unwrap() < Mag::pow2(-210));
        assert!(squared_ratio_residual(p, true).unwrap() > Mag::pow2(-4));
    }

    #[test]
    fn gauss_multiplication_k3() {
        let p = prec();
        assert!(gauss_multiplication_residual(&q(1, 3), 3, p).unwrap() < Mag::pow2(-210));
        assert!(gauss_multiplication_residual(&q(5, 7), 4, p).unwrap() < Mag::pow2(-210));
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(gamma_rat(&q(0, 1), prec()).is_err());
        assert!(gamma_rat(&q(-1, 2), prec()).is_err());
    }
}
