use super::report::{compare_abs, decimal_exponent, Label, Status, VerificationReport};
use super::{Family, IdentityRow, RowStatus};
use crate::error::{Error, Result};
use crate::gamma;
use crate::hyperseries::{sum_linear, SeriesSpec};
use crate::numkernel::{pow_rat_bits, BigReal, Precision, Rational};
use crate::quaternion::EmbeddingSpec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::f64::consts::LOG10_2;
use std::time::Instant;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `C1` and `C2` at one precision, shared by every series check.
#[derive(Clone, Debug)]
pub struct ArchConstants {
    pub prec: Precision,
    pub c1: BigReal,
    pub c2: BigReal,
}

impl ArchConstants {
    pub fn compute(prec: Precision) -> Result<ArchConstants> {
        Ok(ArchConstants { prec, c1: gamma::c1(prec)?, c2: gamma::c2(prec)? })
    }

    pub fn for_family(&self, f: Family) -> &BigReal {
        match f {
            Family::A => &self.c1,
            Family::B => &self.c2,
        }
    }

    /// Decimal digits every residual must reach: 120 at the default 450 bits.
    pub fn tolerance_digits(&self) -> u32 {
        ((f64::from(self.prec.bits) * LOG10_2).floor() as u32).saturating_sub(15)
    }
}

/// `R3^{1/2} |M|^a N^b C^{±1}` with `(a, b)` fixed by the family and the prime.
pub fn table_rhs(row: &IdentityRow, primed: bool, c: &BigReal, wp: u32) -> Result<BigReal> {
    if !row.r3.is_positive() {
        return Err(Error::Domain(format!("R3 = {} must be positive", row.r3)));
    }
    let (em, en) = match (row.family, primed) {
        (Family::A, false) => (q(3, 4), q(1, 4)),
        (Family::A, true) => (q(1, 4), q(3, 4)),
        (Family::B, false) => (q(2, 3), q(1, 3)),
        (Family::B, true) => (q(1, 3), q(2, 3)),
    };
    let w = wp + 16;
    let m = Rational::from_integer(row.m.abs());
    let n = Rational::from_integer(row.n.clone());
    let v = pow_rat_bits(&row.r3, &q(1, 2), w)?.mul(&pow_rat_bits(&m, &em, w)?).mul(&pow_rat_bits(&n, &en, w)?);
    Ok(if primed { v.div(c) } else { v.mul(c) }.with_prec(wp))
}

fn series_report(id: String, family: Family, equation: String, label: Label, lhs: &BigReal, rhs: &BigReal, terms: u64, start: Instant, tol: u32) -> VerificationReport {
    let (rel, sign, ok) = compare_abs(lhs, rhs, tol);
    VerificationReport {
        id,
        family: family.to_string(),
        equation,
        label,
        lhs: lhs.to_sci_string(40),
        rhs: rhs.to_sci_string(40),
        residual_exponent: Some(decimal_exponent(rel)),
        padic_digits: None,
        sign: Some(sign),
        terms,
        ms: start.elapsed().as_millis() as u64,
        status: match (label, ok) {
            (Label::Diagnostic | Label::Exploratory, _) => Status::Info,
            (_, true) => Status::Pass,
            (_, false) => Status::Fail,
        },
        note: None,
    }
}

/// The unprimed and primed identities of a row against the table right-hand
/// sides. Both use the same `C1` or `C2` value.
pub fn verify_archimedean(row: &IdentityRow, consts: &ArchConstants) -> Result<[VerificationReport; 2]> {
    let c = consts.for_family(row.family);
    let label = match row.status {
        RowStatus::Proved => Label::Proved,
        RowStatus::NumericOnly => Label::NumericOnly,
    };
    let one = |primed: bool| -> Result<VerificationReport> {
        let start = Instant::now();
        let sv = sum_linear(&row.series(primed), consts.prec)?;
        let rhs = table_rhs(row, primed, c, consts.prec.working())?;
        let eq = format!("series{}", if primed { "'" } else { "" });
        Ok(series_report(row.id(), row.family, eq, label, &sv.value, &rhs, sv.terms, start, consts.tolerance_digits()))
    };
    Ok([one(false)?, one(true)?])
}

/// Which equation pair applies at a real `t0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCase {
    /// `0 < t0 < 1`.
    APositive,
    /// `-1 < t0 < 0`.
    ANegative,
    /// `t0 > 1`, summed at `s0 = 1/t0`.
    BPositive,
    /// `t0 < -1`, summed at `s0 = 1/t0`.
    BNegative,
}

impl EmbeddingCase {
    pub fn family(self) -> Family {
        match self {
            EmbeddingCase::APositive | EmbeddingCase::ANegative => Family::A,
            _ => Family::B,
        }
    }
}

/// The case and the series argument (`t0` or `s0`).
pub fn embedding_case(t0: &Rational) -> Result<(EmbeddingCase, Rational)> {
    let one = Rational::one();
    if t0.is_zero() || t0.abs() == one {
        return Err(Error::Singular(format!("t0 = {t0} is a boundary value")));
    }
    Ok(if t0.abs() < one {
        (if t0.is_positive() { EmbeddingCase::APositive } else { EmbeddingCase::ANegative }, t0.clone())
    } else {
        (if t0.is_positive() { EmbeddingCase::BPositive } else { EmbeddingCase::BNegative }, t0.recip())
    })
}

/// Residuals of the embedding form of a row's identities.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub case: EmbeddingCase,
    /// `R = |t0|^{3/4} (1-t0)^{1/2}` or `R' = |s0|^{5/6} (1-s0)^{1/2}`.
    pub r: BigReal,
    pub rhs: BigReal,
    pub rhs_primed: BigReal,
    pub unprimed: VerificationReport,
    pub primed: VerificationReport,
    /// The primed identity with shift `1/2` and the divisor `t0` (or `s0`)
    /// taken literally; kept as a diagnostic.
    pub primed_literal: VerificationReport,
}

/// Checks the pair of identities attached to the embedding `e`, the real CM
/// value `t0` and the logarithmic-derivative constant `s` (`S` or `S'`).
pub fn verify_theorem2(e: &EmbeddingSpec, t0: &Rational, s: &Rational, consts: &ArchConstants) -> Result<EmbeddingReport> {
    let (case, x) = embedding_case(t0)?;
    let fam = case.family();
    let wp = consts.prec.working();
    let w = wp + 16;
    let ax = x.abs();
    let root_exp = match fam {
        Family::A => q(3, 4),
        Family::B => q(5, 6),
    };
    let r = pow_rat_bits(&ax, &root_exp, w)?.mul(&pow_rat_bits(&(Rational::one() - &x), &q(1, 2), w)?);
    let lead = Rational::from_integer(BigInt::from(if fam == Family::A { 8 } else { 12 })) / &ax;
    let r2 = if x.is_positive() { -s.clone() } else { s.clone() };
    let spec = |primed: bool, shift: Rational| SeriesSpec {
        family: fam.series(primed),
        r1: lead.clone(),
        r2: r2.clone(),
        shift,
        argument: x.clone(),
    };
    let (coef, radicand) = match case {
        EmbeddingCase::APositive => (e.a3().clone(), 3),
        EmbeddingCase::ANegative => (e.a3().clone(), 6),
        EmbeddingCase::BPositive => (e.a2() + e.a3(), 6),
        EmbeddingCase::BNegative => (e.a1() - Rational::from_integer(3.into()) * e.a3(), 2),
    };
    let c = consts.for_family(fam);
    let base = BigReal::from_int(radicand, w)
        .sqrt()
        .div(&BigReal::from_int(-e.d.d, w).sqrt())
        .mul_rat(&(Rational::from_integer(2.into()) * coef));
    let rhs = base.mul(c).with_prec(wp);
    let root = match fam {
        Family::A => q(1, 2),
        Family::B => q(1, 3),
    };
    let rhs_primed = base.div(&pow_rat_bits(&ax, &root, w)?).div(c).with_prec(wp);
    let rhs_literal = match case {
        EmbeddingCase::BNegative => rhs_primed.clone(),
        _ => base.div(&BigReal::from_rational(&x, w)).div(c).with_prec(wp),
    };
    let tol = consts.tolerance_digits();
    let id = format!("{}{}", fam, e.d.d);
    let run = |sp: SeriesSpec, rhs: &BigReal, eq: &str, label: Label| -> Result<(VerificationReport, BigReal)> {
        let start = Instant::now();
        let sv = sum_linear(&sp, consts.prec)?;
        let lhs = r.mul(&sv.value).with_prec(wp);
        Ok((series_report(id.clone(), fam, eq.to_string(), label, &lhs, rhs, sv.terms, start, tol), lhs))
    };
    let (unprimed, _) = run(spec(false, Rational::zero()), &rhs, "embedding", Label::Check)?;
    let (primed, _) = run(spec(true, fam.primed_shift()), &rhs_primed, "embedding'", Label::Check)?;
    let (mut primed_literal, lhs_literal) = run(spec(true, q(1, 2)), &rhs_literal, "embedding'-literal", Label::Diagnostic)?;
    primed_literal.note = Some(format!("lhs/rhs = {}", lhs_literal.div(&rhs_literal).to_sci_string(12)));
    Ok(EmbeddingReport { case, r: r.with_prec(wp), rhs, rhs_primed, unprimed, primed, primed_literal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::IdentityTable;
    use crate::hyperseries::PochFamily;

    fn consts() -> ArchConstants {
        ArchConstants::compute(Precision::DEFAULT).unwrap()
    }

    #[test]
    fn minus_52_both_identities() {
        let c = consts();
        assert_eq!(c.tolerance_digits(), 120);
        let row = IdentityTable::embedded().unwrap().row(-52, None).unwrap();
        let [u, p] = verify_archimedean(row, &c).unwrap();
        assert_eq!(u.status, Status::Pass, "{}", u.human());
        assert_eq!(p.status, Status::Pass, "{}", p.human());
        assert!(u.residual_exponent.unwrap() < -120);
        assert_eq!(u.sign, Some(1));
    }

    #[test]
    fn wrong_constant_is_caught() {
        let c = consts();
        let row = IdentityTable::embedded().unwrap().row(-40, None).unwrap();
        let swapped = ArchConstants { prec: c.prec, c1: c.c2.clone(), c2: c.c1.clone() };
        let [u, _] = verify_archimedean(row, &swapped).unwrap();
        assert_eq!(u.status, Status::Fail);
    }

    #[test]
    fn minus_120_embedding_form() {
        let c = consts();
        let e = EmbeddingSpec::from_coords(-120, 12, -2, 2).unwrap();
        let t0 = q(-2401, 3375);
        let s = q(2250, 6517);
        let rep = verify_theorem2(&e, &t0, &s, &c).unwrap();
        assert_eq!(rep.case, EmbeddingCase::ANegative);
        assert_eq!(rep.unprimed.status, Status::Pass, "{}", rep.unprimed.human());
        assert_eq!(rep.primed.status, Status::Pass, "{}", rep.primed.human());
        let wp = c.prec.working();
        // R = 2^2 7^3 19 / 15^{15/4}
        let r = BigReal::from_int(4 * 343 * 19, wp).div(&pow_rat_bits(&q(15, 1), &q(15, 4), wp).unwrap());
        assert!(rep.r.rel_diff_upper(&r).log2_ceil().unwrap() < -400);
        // right-hand side (2/√5) C1
        let rhs = BigReal::from_int(2, wp).div(&BigReal::from_int(5, wp).sqrt()).mul(&c.c1);
        let lhs = rep.r.mul(&sum_linear(&SeriesSpec { family: PochFamily::a(), r1: q(8 * 3375, 2401), r2: s.clone(), shift: q(0, 1), argument: t0.clone() }, c.prec).unwrap().value);
        assert!(lhs.rel_diff_upper(&rhs).log2_ceil().unwrap() < -400);
        // primed: (30√3/49) / C1
        let rhs_p = BigReal::from_int(30, wp).mul(&BigReal::from_int(3, wp).sqrt()).div_i64(49).div(&c.c1);
        let lhs_p = rep.r.mul(&sum_linear(&SeriesSpec { family: PochFamily::a_prime(), r1: q(8 * 3375, 2401), r2: s, shift: q(1, 2), argument: t0 }, c.prec).unwrap().value);
        assert!(lhs_p.rel_diff_upper(&rhs_p).log2_ceil().unwrap() < -400);
        assert_eq!(rep.primed_literal.status, Status::Info);
    }

    #[test]
    fn minus_19_embedding_form() {
        let c = consts();
        let e = EmbeddingSpec::from_coords(-19, 5, -1, 1).unwrap();
        let rep = verify_theorem2(&e, &q(-2187, 1024), &q(15309, 15808), &c).unwrap();
        assert_eq!(rep.case, EmbeddingCase::BNegative);
        assert_eq!(rep.unprimed.status, Status::Pass, "{}", rep.unprimed.human());
        assert_eq!(rep.primed.status, Status::Pass, "{}", rep.primed.human());
        let wp = c.prec.working();
        // (4√2/√19) C2 and 3^{7/3}/(2^{5/6} 19^{1/2}) / C2
        let rhs = BigReal::from_int(32, wp).sqrt().div(&BigReal::from_int(19, wp).sqrt()).mul(&c.c2);
        assert!(rep.rhs.rel_diff_upper(&rhs).log2_ceil().unwrap() < -400);
        let p = pow_rat_bits(&q(3, 1), &q(7, 3), wp).unwrap().div(&pow_rat_bits(&q(2, 1), &q(5, 6), wp).unwrap()).div(&BigReal::from_int(19, wp).sqrt()).div(&c.c2);
        assert!(rep.rhs_primed.rel_diff_upper(&p).log2_ceil().unwrap() < -400);
        assert_eq!(rep.primed_literal.status, Status::Info);
    }

    #[test]
    fn cases() {
        assert_eq!(embedding_case(&q(1, 2)).unwrap().0, EmbeddingCase::APositive);
        assert_eq!(embedding_case(&q(-3, 1)).unwrap(), (EmbeddingCase::BNegative, q(-1, 3)));
        assert!(embedding_case(&q(1, 1)).is_err());
        assert!(embedding_case(&q(0, 1)).is_err());
    }
}
