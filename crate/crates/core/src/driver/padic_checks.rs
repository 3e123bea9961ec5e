use super::report::{Label, Status, VerificationReport};
use super::{Family, IdentityRow};
use crate::error::{Error, Result};
use crate::numkernel::Rational;
use crate::padic::{c_p, gamma_p, padic_sum_linear, sixth_power_check, val_int, PadicInt};
use num_bigint::BigInt;
use num_traits::Zero;
use std::time::Instant;

/// Digits of `p`-adic precision held back from every congruence.
pub const PADIC_GUARD: u32 = 8;

fn padic_report(row: &IdentityRow, equation: &str, lhs: &PadicInt, rhs: &PadicInt, agree: u32, ok: bool, terms: u64, start: Instant) -> VerificationReport {
    VerificationReport {
        id: row.id(),
        family: row.family.to_string(),
        equation: equation.into(),
        label: Label::Check,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        residual_exponent: None,
        padic_digits: Some(agree),
        sign: None,
        terms,
        ms: start.elapsed().as_millis() as u64,
        status: if ok { Status::Pass } else { Status::Fail },
        note: None,
    }
}

fn check_pre(row: &IdentityRow, p: u64) -> Result<()> {
    let pb = BigInt::from(p);
    if p < 5 || !(&row.m % &pb).is_zero() || (&row.n % &pb).is_zero() {
        return Err(Error::Domain(format!("{}: need p = {p} >= 5 dividing M and prime to N", row.id())));
    }
    Ok(())
}

/// `L^6 ≡ R3^3 M^4 N^2 C_p` and `(L'/p)^6 ≡ R3^3 M^2 N^4 / C_p`, both modulo
/// `p^{K - guard}`, using the p-adic `R3` of the row.
pub fn verify_padic(row: &IdentityRow, p: u64, k: u32, guard: u32) -> Result<[VerificationReport; 2]> {
    let entry = row
        .padic
        .as_ref()
        .filter(|e| e.p == p)
        .ok_or_else(|| Error::Domain(format!("{} has no {p}-adic constant", row.id())))?;
    if row.family != Family::B {
        return Err(Error::Unsupported("p-adic constants exist only for family B".into()));
    }
    check_pre(row, p)?;
    let r3 = &entry.r3;
    let m = Rational::from_integer(row.m.clone());
    let n = Rational::from_integer(row.n.clone());
    let cp = c_p(p, k)?;

    let start = Instant::now();
    let l = padic_sum_linear(&row.series(false), p, k)?;
    let t1 = PadicInt::from_rational(&(r3 * r3 * r3 * m.pow(4) * n.pow(2)), p, k)?.mul(&cp).with_precision(k);
    let rep = sixth_power_check(&l.value, &t1, guard)?;
    let first = padic_report(row, "padic", &l.value.pow(6), &t1, rep.agreement_digits, rep.holds, l.terms, start);

    let start = Instant::now();
    let lp = padic_sum_linear(&row.series(true), p, k + 1)?;
    let pp = PadicInt::from_int(&BigInt::from(p), p, k + 1);
    let t2 = PadicInt::from_rational(&(r3 * r3 * r3 * m.pow(2) * n.pow(4)), p, k)?;
    let second = match lp.value.div(&pp) {
        Ok(q) => {
            let q = q.with_precision(k);
            let lhs = q.pow(6).mul(&cp).with_precision(k);
            let agree = lhs.agreement_digits(&t2).min(k);
            padic_report(row, "padic'", &lhs, &t2, agree, agree >= k.saturating_sub(guard), lp.terms, start)
        }
        Err(_) => {
            let mut r = padic_report(row, "padic'", &lp.value, &t2, 0, false, lp.terms, start);
            r.note = Some(format!("L' is not divisible by {p}"));
            r
        }
    };
    Ok([first, second])
}

/// The p-adic limits of a family-A row at a prime dividing `M`, printed but
/// not compared against anything.
#[derive(Clone, Debug)]
pub struct ExploratoryProbe {
    pub id: String,
    pub p: u64,
    pub l: PadicInt,
    pub l_primed: PadicInt,
    /// `Γ_p(3/4)/Γ_p(1/4)`.
    pub gamma_ratio: PadicInt,
}

impl ExploratoryProbe {
    pub fn reports(&self) -> Vec<VerificationReport> {
        let make = |eq: &str, v: &PadicInt| {
            let mut r = VerificationReport::check(self.id.clone(), format!("{eq}@{}", self.p), true, "");
            r.family = "A".into();
            r.label = Label::Exploratory;
            r.status = Status::Info;
            r.lhs = v.to_string();
            r.note = Some(format!("L^4 = {}, L^6 = {}", v.pow(4), v.pow(6)));
            r
        };
        let mut g = make("gamma_ratio", &self.gamma_ratio);
        g.note = Some(format!("Gamma_p(3/4)/Gamma_p(1/4) = {}", self.gamma_ratio));
        vec![make("series", &self.l), make("series'", &self.l_primed), g]
    }
}

/// Prime factors below `10^4` of `m`.
fn small_prime_factors(m: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = m.clone();
    for p in 2u64..10_000 {
        if val_int(&m, p) > 0 {
            out.push(p);
            while val_int(&m, p) > 0 {
                m /= p;
            }
        }
    }
    out
}

/// Sums both series of every family-A row at each prime `p >= 5` dividing `M`.
pub fn exploratory_probe(rows: &[IdentityRow], k: u32) -> Result<Vec<ExploratoryProbe>> {
    let mut out = Vec::new();
    let mut rows: Vec<&IdentityRow> = rows.iter().filter(|r| r.family == Family::A).collect();
    rows.sort_by_key(|r| -r.d.d);
    for row in rows {
        for p in small_prime_factors(&row.m) {
            if check_pre(row, p).is_err() {
                continue;
            }
            let l = padic_sum_linear(&row.series(false), p, k)?.value;
            let l_primed = padic_sum_linear(&row.series(true), p, k)?.value;
            let g34 = gamma_p(p, &Rational::new(3.into(), 4.into()), k)?;
            let g14 = gamma_p(p, &Rational::new(1.into(), 4.into()), k)?;
            out.push(ExploratoryProbe { id: row.id(), p, l, l_primed, gamma_ratio: g34.div(&g14)? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::IdentityTable;

    #[test]
    fn remark_rows() {
        let t = IdentityTable::embedded().unwrap();
        for d in [-40, -147, -228] {
            let row = t.row(d, None).unwrap();
            let [a, b] = verify_padic(row, 5, 40, PADIC_GUARD).unwrap();
            assert_eq!(a.status, Status::Pass, "{}", a.human());
            assert_eq!(b.status, Status::Pass, "{}", b.human());
        }
    }

    #[test]
    fn wrong_r3_fails() {
        let t = IdentityTable::embedded().unwrap();
        let mut row = t.row(-40, None).unwrap().clone();
        row.padic.as_mut().unwrap().r3 = Rational::from_integer(3.into());
        let [a, b] = verify_padic(&row, 5, 40, PADIC_GUARD).unwrap();
        assert_eq!(a.status, Status::Fail);
        assert_eq!(b.status, Status::Fail);
        assert!(verify_padic(t.row(-84, None).unwrap(), 5, 40, PADIC_GUARD).is_err());
    }

    #[test]
    fn probe_runs() {
        let t = IdentityTable::embedded().unwrap();
        let rows: Vec<_> = t.rows.iter().filter(|r| r.d.d == -120).cloned().collect();
        let probes = exploratory_probe(&rows, 12).unwrap();
        assert_eq!(probes.len(), 1);
        assert_eq!(probes[0].p, 7);
        assert!(probes[0].reports().iter().all(|r| r.status == Status::Info));
    }
}
