//! Pochhammer-quotient series: the four series families, generic
//! hypergeometric sums with certified truncation, Clausen's identity and the
//! Schwarzian map `t -> τ` of X6*.

use crate::error::{Error, Result};
use crate::gamma::lemma3_constant;
use crate::numkernel::{pow_rat_bits, BigComplex, BigReal, Mag, Precision, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Coefficients `∏(a_i)_n / (∏(b_j)_n n!)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochFamily {
    pub numerator_params: Vec<Rational>,
    pub denominator_params: Vec<Rational>,
}

impl PochFamily {
    pub fn new(numerator_params: Vec<Rational>, denominator_params: Vec<Rational>) -> PochFamily {
        PochFamily { numerator_params, denominator_params }
    }

    /// `(1/12)_n (1/4)_n (5/12)_n / ((1/2)_n (3/4)_n n!)`.
    pub fn a() -> PochFamily {
        PochFamily::new(vec![q(1, 12), q(1, 4), q(5, 12)], vec![q(1, 2), q(3, 4)])
    }

    /// `(7/12)_n (3/4)_n (11/12)_n / ((3/2)_n (5/4)_n n!)`.
    pub fn a_prime() -> PochFamily {
        PochFamily::new(vec![q(7, 12), q(3, 4), q(11, 12)], vec![q(3, 2), q(5, 4)])
    }

    /// `(1/12)_n (1/3)_n (7/12)_n / ((2/3)_n (5/6)_n n!)`.
    pub fn b() -> PochFamily {
        PochFamily::new(vec![q(1, 12), q(1, 3), q(7, 12)], vec![q(2, 3), q(5, 6)])
    }

    /// `(5/12)_n (2/3)_n (11/12)_n / ((4/3)_n (7/6)_n n!)`.
    pub fn b_prime() -> PochFamily {
        PochFamily::new(vec![q(5, 12), q(2, 3), q(11, 12)], vec![q(4, 3), q(7, 6)])
    }

    /// `term(n+1) / term(n)`.
    pub fn ratio(&self, n: u64) -> Rational {
        let nn = Rational::from_integer(BigInt::from(n));
        let mut r = Rational::one();
        for a in &self.numerator_params {
            r *= a + &nn;
        }
        for b in &self.denominator_params {
            r /= b + &nn;
        }
        r / (nn + Rational::one())
    }

    /// Integer numerator and denominator of `x * ratio(n)` for `x = u/v`,
    /// without reducing.
    fn ratio_parts(&self, n: u64, u: &BigInt, v: &BigInt) -> (BigInt, BigInt) {
        let nb = BigInt::from(n);
        let mut num = u.clone();
        let mut den = v * (&nb + 1);
        for a in &self.numerator_params {
            num *= a.numer() + a.denom() * &nb;
            den *= a.denom();
        }
        for b in &self.denominator_params {
            den *= b.numer() + b.denom() * &nb;
            num *= b.denom();
        }
        (num, den)
    }

    /// Exact value of the `n`-th coefficient.
    pub fn term(&self, n: u64) -> Rational {
        let mut t = Rational::one();
        for k in 0..n {
            t *= self.ratio(k);
        }
        t
    }

    /// Upper bound on `ratio(m)` valid for every `m >= n`, or `None` if `n`
    /// is too small for the monotonicity argument.
    pub fn ratio_bound_from(&self, n: u64) -> Option<Rational> {
        let nn = Rational::from_integer(BigInt::from(n));
        let mut dens = self.denominator_params.clone();
        dens.push(Rational::one());
        if self.numerator_params.len() > dens.len() {
            return None;
        }
        let mut bound = Rational::one();
        for (i, b) in dens.iter().enumerate() {
            let bd = b + &nn;
            if !bd.is_positive() {
                return None;
            }
            match self.numerator_params.get(i) {
                Some(a) => {
                    let ad = a + &nn;
                    if !ad.is_positive() {
                        return None;
                    }
                    if ad > bd {
                        bound *= ad / bd;
                    }
                }
                None => {
                    if bd < Rational::one() {
                        bound /= bd;
                    }
                }
            }
        }
        Some(bound)
    }
}

/// `Σ (R1 (n + shift) + R2) term(n) argument^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    pub family: PochFamily,
    pub r1: Rational,
    pub r2: Rational,
    pub shift: Rational,
    pub argument: Rational,
}

impl SeriesSpec {
    /// Weight of the `n`-th term.
    pub fn weight(&self, n: u64) -> Rational {
        &self.r1 * (Rational::from_integer(BigInt::from(n)) + &self.shift) + &self.r2
    }

    /// Constant part `R1 shift + R2` of the weight.
    pub fn weight_offset(&self) -> Rational {
        &self.r1 * &self.shift + &self.r2
    }
}

/// A certified series value.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: BigReal,
    pub terms: u64,
    pub tail_bound: Mag,
}

fn tail_ratio(spec: &SeriesSpec, n: u64) -> Option<Rational> {
    let rho = spec.family.ratio_bound_from(n)?;
    let c = spec.weight_offset();
    let growth = if spec.r1.is_zero() {
        Rational::one()
    } else {
        let wn = &spec.r1 * Rational::from_integer(BigInt::from(n)) + &c;
        if wn.is_zero() || wn.is_negative() != spec.r1.is_negative() {
            return None;
        }
        Rational::one() + (&spec.r1 / wn).abs()
    };
    Some(spec.argument.abs() * rho * growth)
}

/// Certified sum at `wp` working bits.
pub fn sum_linear_bits(spec: &SeriesSpec, wp: u32) -> Result<SeriesValue> {
    if spec.argument.abs() >= Rational::one() {
        return Err(Error::Divergence(format!("|argument| = |{}| >= 1", spec.argument)));
    }
    let inner = wp + 32;
    let (u, v) = (spec.argument.numer().clone(), spec.argument.denom().clone());
    let mut term = BigReal::one(inner);
    let mut sum = BigReal::from_rational(&spec.weight(0), inner);
    if u.is_zero() {
        return Ok(SeriesValue { value: sum.with_prec(wp), terms: 1, tail_bound: Mag::ZERO });
    }
    let c = spec.weight_offset();
    let den = spec.r1.denom().lcm(c.denom());
    let wn_int = (&spec.r1 * Rational::from_integer(den.clone())).to_integer();
    let wc_int = (&c * Rational::from_integer(den.clone())).to_integer();
    let mut n: u64 = 0;
    loop {
        let (rn, rd) = spec.family.ratio_parts(n, &u, &v);
        term = term.mul_int(&rn).div_int(&rd);
        n += 1;
        let weight_num = &wn_int * BigInt::from(n) + &wc_int;
        let contrib = term.mul_int(&weight_num).div_int(&den);
        sum = sum.add(&contrib);
        let target = match sum.log2_floor() {
            Some(l) => Mag::pow2(l - i64::from(wp) - 6),
            None => Mag::pow2(-i64::from(wp) - 6),
        };
        if contrib.value_mag_up() < target && !spec.r1.is_zero() || term.value_mag_up() < target {
            if let Some(qr) = tail_ratio(spec, n + 1) {
                if qr < Rational::one() {
                    let (rn, rd) = spec.family.ratio_parts(n, &u, &v);
                    let next = term.mul_int(&rn).div_int(&rd);
                    let next_w = spec.weight(n + 1);
                    let lead = next.abs_upper().mul(Mag::from_big_up(next_w.numer().magnitude(), 0)).div(Mag::from_big_down(next_w.denom().magnitude(), 0));
                    let one_minus = Rational::one() - qr;
                    let factor = Mag::from_big_up(one_minus.denom().magnitude(), 0).div(Mag::from_big_down(one_minus.numer().magnitude(), 0));
                    let tail = lead.mul(factor);
                    if tail < target {
                        return Ok(SeriesValue { value: sum.add_error(tail).with_prec(wp), terms: n + 1, tail_bound: tail });
                    }
                }
            }
        }
        if n > 10_000_000 {
            return Err(Error::Divergence("series needs more than 10^7 terms".into()));
        }
    }
}

/// Certified sum of the linear-weight series.
pub fn sum_linear(spec: &SeriesSpec, prec: Precision) -> Result<SeriesValue> {
    sum_linear_bits(spec, prec.working())
}

/// Exact partial sum of the first `n_terms` terms by binary splitting.
pub fn partial_sum_exact(spec: &SeriesSpec, n_terms: u64) -> Rational {
    if n_terms == 0 {
        return Rational::zero();
    }
    let c = spec.weight_offset();
    let scale = c.denom() * spec.r1.denom();
    let alpha = (&spec.r1 * Rational::from_integer(scale.clone())).to_integer();
    let beta = (&c * Rational::from_integer(scale.clone())).to_integer();
    let (u, v) = (spec.argument.numer().clone(), spec.argument.denom().clone());
    let fam = &spec.family;
    fn split(fam: &PochFamily, a: u64, b: u64, u: &BigInt, v: &BigInt, alpha: &BigInt, beta: &BigInt) -> (BigInt, BigInt, BigInt) {
        if b - a == 1 {
            let (p, qq) = fam.ratio_parts(a, u, v);
            let w = alpha * BigInt::from(a) + beta;
            return (p, qq.clone(), w * qq);
        }
        let m = a + (b - a) / 2;
        let (p1, q1, t1) = split(fam, a, m, u, v, alpha, beta);
        let (p2, q2, t2) = split(fam, m, b, u, v, alpha, beta);
        (&p1 * &p2, &q1 * &q2, t1 * &q2 + p1 * t2)
    }
    let (_, qq, t) = split(fam, 0, n_terms, &u, &v, &alpha, &beta);
    Rational::new(t, qq * scale)
}

/// `pFq(num; den; x)` as a certified series value.
pub fn hyper_pfq_bits(num: &[Rational], den: &[Rational], x: &Rational, wp: u32) -> Result<SeriesValue> {
    for b in den {
        if !b.is_positive() && b.is_integer() {
            return Err(Error::Domain(format!("lower parameter {b} is a non-positive integer")));
        }
    }
    let spec = SeriesSpec {
        family: PochFamily::new(num.to_vec(), den.to_vec()),
        r1: Rational::zero(),
        r2: Rational::one(),
        shift: Rational::zero(),
        argument: x.clone(),
    };
    sum_linear_bits(&spec, wp)
}

/// Gauss series `2F1(a, b; c; x)` for `|x| < 1`.
pub fn hyper2f1(a: &Rational, b: &Rational, c: &Rational, x: &Rational, prec: Precision) -> Result<BigReal> {
    Ok(hyper_pfq_bits(&[a.clone(), b.clone()], std::slice::from_ref(c), x, prec.working())?.value)
}

/// `|2F1(α, β; α+β+1/2; x)^2 - 3F2(2α, α+β, 2β; 2α+2β, α+β+1/2; x)|`.
pub fn clausen_residual(alpha: &Rational, beta: &Rational, x: &Rational, prec: Precision) -> Result<BigReal> {
    let wp = prec.working();
    let half = q(1, 2);
    let s = alpha + beta;
    let f = hyper_pfq_bits(&[alpha.clone(), beta.clone()], &[&s + &half], x, wp)?.value;
    let two = Rational::from_integer(2.into());
    let g = hyper_pfq_bits(&[&two * alpha, s.clone(), &two * beta], &[&two * &s, &s + &half], x, wp)?.value;
    Ok(f.square().sub(&g).abs())
}

/// The two local solutions at `t = 0` and the constant `C`, evaluated at
/// rational points in `(-1, 1)`.
#[derive(Clone, Debug)]
pub struct SchwarzianMap {
    pub c: BigReal,
    wp: u32,
}

impl SchwarzianMap {
    pub fn new(prec: Precision) -> Result<SchwarzianMap> {
        Ok(SchwarzianMap { c: lemma3_constant(prec)?.with_prec(prec.working() + 32), wp: prec.working() + 32 })
    }

    pub fn with_constant(c: BigReal, wp: u32) -> SchwarzianMap {
        SchwarzianMap { c, wp }
    }

    /// `F1(t) = 2F1(1/24, 5/24; 3/4; t)`.
    pub fn f1(&self, t: &Rational) -> Result<BigReal> {
        Ok(hyper_pfq_bits(&[q(1, 24), q(5, 24)], &[q(3, 4)], t, self.wp)?.value)
    }

    /// `2F1(7/24, 11/24; 5/4; t)`, the series part of `F2`.
    pub fn f2_series(&self, t: &Rational) -> Result<BigReal> {
        Ok(hyper_pfq_bits(&[q(7, 24), q(11, 24)], &[q(5, 4)], t, self.wp)?.value)
    }

    /// `t^{1/4}` on the branch that is positive for `t > 0` and equals
    /// `e^{-2πi/8} |t|^{1/4}` for `t < 0`.
    pub fn quarter_root(&self, t: &Rational) -> Result<BigComplex> {
        let w = self.wp;
        if t.is_zero() {
            return Ok(BigComplex::from_real(BigReal::zero(w)));
        }
        let r = pow_rat_bits(&t.abs(), &q(1, 4), w)?;
        if t.is_positive() {
            Ok(BigComplex::from_real(r))
        } else {
            let h = BigReal::from_ratio(1, 2, w).sqrt().mul(&r);
            Ok(BigComplex::new(h.clone(), h.neg()))
        }
    }

    /// `F2(t) = t^{1/4} 2F1(7/24, 11/24; 5/4; t)`.
    pub fn f2(&self, t: &Rational) -> Result<BigComplex> {
        let s = self.f2_series(t)?;
        Ok(self.quarter_root(t)?.mul_real(&s))
    }

    /// `F1(t) - C F2(t)`.
    pub fn f_base(&self, t: &Rational) -> Result<BigComplex> {
        let f1 = BigComplex::from_real(self.f1(t)?);
        Ok(f1.sub(&self.f2(t)?.mul_real(&self.c)))
    }

    /// The weight-8 form `F = (F1 - C F2)^8` as a function of `t`.
    pub fn eval_f(&self, t: &Rational) -> Result<BigComplex> {
        if t.abs() >= Rational::one() {
            return Err(Error::Divergence(format!("|t| = |{t}| >= 1")));
        }
        Ok(self.f_base(t)?.powi(8))
    }

    /// `τ(t) = i (1 + w)/(1 - w)` with `w = C F2(t)/F1(t)`, for `0 < t < 1`.
    pub fn tau_of_t(&self, t: &Rational) -> Result<BigComplex> {
        if !t.is_positive() || *t >= Rational::one() {
            return Err(Error::Domain(format!("tau_of_t needs 0 < t < 1, got {t}")));
        }
        let w = self.c.mul(&self.f2_series(t)?).mul(&pow_rat_bits(t, &q(1, 4), self.wp)?).div(&self.f1(t)?);
        let one = BigReal::one(self.wp);
        let den = one.sub(&w);
        if den.abs_lower().is_zero() {
            return Err(Error::Singular("C F2/F1 = 1".into()));
        }
        Ok(BigComplex::new(BigReal::zero(self.wp), one.add(&w).div(&den)))
    }

    /// `t'(τ) = 2 t^{3/4} (1-t)^{1/2} (F1 - C F2)^2 / (C i)` for `0 < t < 1`.
    pub fn t_prime(&self, t: &Rational) -> Result<BigComplex> {
        if !t.is_positive() || *t >= Rational::one() {
            return Err(Error::Domain(format!("t_prime needs 0 < t < 1, got {t}")));
        }
        let w = self.wp;
        let a = pow_rat_bits(t, &q(3, 4), w)?;
        let b = pow_rat_bits(&(Rational::one() - t), &q(1, 2), w)?;
        let f = self.f_base(t)?.re;
        let mag = a.mul(&b).mul(&f.square()).mul_2exp(1).div(&self.c);
        Ok(BigComplex::new(BigReal::zero(w), mag.neg()))
    }

    /// `|τ'(t) t'(τ(t)) - 1|` with `τ'` from Richardson-extrapolated central
    /// differences of step `2^{-bits/3}`.
    pub fn schwarzian_consistency(&self, t: &Rational, bits: u32) -> Result<Mag> {
        let h = Rational::new(BigInt::one(), BigInt::one() << (bits / 3));
        let diff = |h: &Rational| -> Result<BigReal> {
            let up = self.tau_of_t(&(t + h))?.im;
            let dn = self.tau_of_t(&(t - h))?.im;
            Ok(up.sub(&dn).div(&BigReal::from_rational(&(h * Rational::from_integer(2.into())), self.wp)))
        };
        let d1 = diff(&h)?;
        let d2 = diff(&(&h / Rational::from_integer(2.into())))?;
        let dy = d2.mul_i64(4).sub(&d1).div_i64(3);
        let dtau = BigComplex::new(BigReal::zero(self.wp), dy);
        let prod = dtau.mul(&self.t_prime(t)?);
        Ok(prod.dist_upper(&BigComplex::from_real(BigReal::one(self.wp))))
    }
}

/// `τ(t)` for `0 < t < 1` with the constant computed at `prec`.
pub fn tau_of_t(t: &Rational, prec: Precision) -> Result<BigComplex> {
    SchwarzianMap::new(prec)?.tau_of_t(t)
}

/// `F(t) = (F1(t) - C F2(t))^8`; complex for `t < 0`.
#[allow(non_snake_case)]
pub fn eval_F(t: &Rational, prec: Precision) -> Result<BigComplex> {
    SchwarzianMap::new(prec)?.eval_f(t)
}

/// Rough size of `term(n)` for asymptotic checks.
pub fn term_f64(family: &PochFamily, n: u64) -> f64 {
    let mut t = 1.0f64;
    for k in 0..n {
        t *= family.ratio(k).to_f64().unwrap_or(0.0);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::pi;

    fn prec() -> Precision {
        Precision::new(200, 40).unwrap()
    }

    #[test]
    fn first_terms() {
        assert_eq!(PochFamily::a().term(0), Rational::one());
        assert_eq!(PochFamily::a().term(1), q(5, 216));
        assert_eq!(PochFamily::b().term(1), q(7, 240));
    }

    #[test]
    fn zero_argument() {
        let spec = SeriesSpec { family: PochFamily::a_prime(), r1: q(10, 1), r2: q(3, 1), shift: q(1, 2), argument: q(0, 1) };
        let v = sum_linear(&spec, prec()).unwrap();
        assert_eq!(v.value.to_rational(), q(8, 1));
    }

    #[test]
    fn ramanujan_classical() {
        let half = q(1, 2);
        let spec = SeriesSpec {
            family: PochFamily::new(vec![half.clone(), half.clone(), half.clone()], vec![q(1, 1), q(1, 1)]),
            r1: q(6, 1),
            r2: q(1, 1),
            shift: q(0, 1),
            argument: q(1, 4),
        };
        let v = sum_linear(&spec, prec()).unwrap();
        let target = BigReal::from_int(4, 240).div(&pi(240));
        assert!(v.value.sub(&target).abs_upper() < Mag::pow2(-225));
    }

    #[test]
    fn binary_splitting_matches_float_partial() {
        let spec = SeriesSpec { family: PochFamily::b(), r1: q(10200, 1), r2: q(175, 1), shift: q(0, 1), argument: q(-125, 2187) };
        let exact = partial_sum_exact(&spec, 40);
        let mut naive = Rational::zero();
        let mut t = Rational::one();
        for n in 0..40u64 {
            naive += spec.weight(n) * &t;
            t *= spec.family.ratio(n) * &spec.argument;
        }
        assert_eq!(exact, naive);
    }

    #[test]
    fn fractional_weights_match_exact_sum() {
        let spec = SeriesSpec { family: PochFamily::a(), r1: q(27000, 2401), r2: q(2250, 6517), shift: q(0, 1), argument: q(-2401, 3375) };
        let v = sum_linear(&spec, prec()).unwrap();
        let exact = BigReal::from_rational(&partial_sum_exact(&spec, 1200), 600);
        assert!(v.value.sub(&exact).abs_upper() < Mag::pow2(-225));
        let spec = SeriesSpec { r1: q(7, 3), shift: q(1, 2), family: PochFamily::a_prime(), ..spec };
        let v = sum_linear(&spec, prec()).unwrap();
        let exact = BigReal::from_rational(&partial_sum_exact(&spec, 1200), 600);
        assert!(v.value.sub(&exact).abs_upper() < Mag::pow2(-225));
    }

    #[test]
    fn divergent_argument_rejected() {
        let spec = SeriesSpec { family: PochFamily::a(), r1: q(1, 1), r2: q(0, 1), shift: q(0, 1), argument: q(1, 1) };
        assert!(matches!(sum_linear(&spec, prec()), Err(Error::Divergence(_))));
    }

    #[test]
    fn hyper2f1_degenerations() {
        let p = prec();
        let one = hyper2f1(&q(1, 3), &q(2, 5), &q(7, 4), &q(0, 1), p).unwrap();
        assert_eq!(one.to_rational(), Rational::one());
        let v = hyper2f1(&q(1, 3), &q(5, 7), &q(5, 7), &q(1, 2), p).unwrap();
        let oracle = pow_rat_bits(&q(2, 1), &q(1, 3), p.working()).unwrap();
        assert!(v.sub(&oracle).abs_upper() < Mag::pow2(-225));
    }

    #[test]
    fn clausen_examples() {
        let p = prec();
        assert!(clausen_residual(&q(1, 24), &q(5, 24), &q(3, 10), p).unwrap().abs_upper() < Mag::pow2(-200));
        assert!(clausen_residual(&q(7, 24), &q(11, 24), &q(-1, 5), p).unwrap().abs_upper() < Mag::pow2(-200));
        assert!(clausen_residual(&q(7, 24), &q(11, 24), &q(0, 1), p).unwrap().is_zero_value());
        let sq = hyper2f1(&q(1, 24), &q(5, 24), &q(3, 4), &q(1, 10), p).unwrap().square();
        let a = hyper_pfq_bits(&PochFamily::a().numerator_params, &PochFamily::a().denominator_params, &q(1, 10), p.working()).unwrap();
        assert!(sq.sub(&a.value).abs_upper() < Mag::pow2(-200));
    }

    #[test]
    fn tau_geometry() {
        let map = SchwarzianMap::new(prec()).unwrap();
        let tau = map.tau_of_t(&q(1, 2)).unwrap();
        assert!(tau.re.is_zero_value());
        let im = tau.im.to_f64();
        let p2 = (6f64.sqrt() - 2f64.sqrt()) / 2.0;
        assert!(im < 1.0 && im > p2);
        let near0 = map.tau_of_t(&q(1, 1 << 40)).unwrap().im.to_f64();
        assert!((near0 - 1.0).abs() < 1e-3);
        let a = map.tau_of_t(&q(9, 10)).unwrap().im.to_f64();
        let b = map.tau_of_t(&q(99, 100)).unwrap().im.to_f64();
        assert!(im > a && a > b && b > p2);
        assert!(b - p2 < 0.05, "{b} vs {p2}");
        assert!(map.tau_of_t(&q(3, 2)).is_err());
    }

    #[test]
    fn f_values() {
        let map = SchwarzianMap::new(prec()).unwrap();
        let f0 = map.eval_f(&q(0, 1)).unwrap();
        assert_eq!(f0.re.to_rational(), Rational::one());
        let fh = map.eval_f(&q(1, 2)).unwrap();
        assert!(fh.re.certain_sign() == Some(1));
        assert!(fh.im.is_zero_value());
        let fneg = map.eval_f(&q(-1, 3)).unwrap();
        assert!(fneg.im.certain_sign().is_some());
    }

    #[test]
    fn schwarzian_round_trip() {
        let map = SchwarzianMap::new(prec()).unwrap();
        for k in [1, 5, 9] {
            let e = map.schwarzian_consistency(&q(k, 10), 200).unwrap();
            assert!(e < Mag::pow2(-100), "t = {k}/10");
        }
    }

    #[test]
    fn a_family_decay() {
        let fam = PochFamily::a();
        let mut t = 1.0f64;
        for n in 0..10_000u64 {
            if n > 0 {
                assert!(t * (n as f64).powf(1.5) < 1.0);
            }
            t *= fam.ratio(n).to_f64().unwrap();
        }
    }
}
