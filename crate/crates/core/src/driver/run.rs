use super::archimedean::{verify_archimedean, verify_theorem2, ArchConstants};
use super::certificates::{certify_root, derive_s, SCertificate};
use super::padic_checks::{exploratory_probe, verify_padic, PADIC_GUARD};
use super::report::{Label, Status, VerificationReport};
use super::suites::{clausen_suite, gamma_p_suite, gamma_suite, hecke_suite, q_coefficient_reports, root_suite, structural_suite, table_embedding};
use super::{Family, IdentityRow, IdentityTable, RowStatus};
use crate::error::{Error, Result};
use crate::hecke::{newton_to_q, power_sum_polys, HeckeTable};
use crate::numkernel::{Precision, Rational};
use crate::polys::{AppendixPolys, BiPolyQ, MPoly};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use std::cmp::Reverse;

/// Settings for a full run.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub prec: Precision,
    /// p-adic digits `K`.
    pub padic_k: u32,
    pub guard: u32,
    pub seed: u64,
    pub exploratory: bool,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions { prec: Precision::DEFAULT, padic_k: 40, guard: PADIC_GUARD, seed: 20, exploratory: false }
    }
}

/// Everything a run produced, in a fixed order.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub reports: Vec<VerificationReport>,
    pub certificates: Vec<SCertificate>,
}

impl RunSummary {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    pub fn failures(&self) -> Vec<&VerificationReport> {
        self.reports.iter().filter(|r| !r.passed()).collect()
    }

    /// `(id, equation, status)` for every report, for run-to-run comparison.
    pub fn status_vector(&self) -> Vec<(String, String, Status)> {
        self.reports.iter().map(|r| (r.id.clone(), r.equation.clone(), r.status)).collect()
    }
}

fn sort_key(r: &IdentityRow) -> (i64, Family) {
    (-r.d.d, r.family)
}

fn error_report(id: String, equation: &str, e: Error) -> VerificationReport {
    VerificationReport::check(id, equation, false, e.to_string())
}

/// Archimedean checks of every row, sorted by `|D|` then family.
pub fn archimedean_reports(rows: &[IdentityRow], consts: &ArchConstants) -> Vec<VerificationReport> {
    let mut rows: Vec<&IdentityRow> = rows.iter().collect();
    rows.sort_by_key(|r| sort_key(r));
    rows.par_iter()
        .flat_map_iter(|r| match verify_archimedean(r, consts) {
            Ok(reps) => reps.to_vec(),
            Err(e) => vec![error_report(r.id(), "series", e)],
        })
        .collect()
}

/// Root certificate of a row plus its embedding-form identities, when the
/// boundary embedding is unique.
pub fn certificate_and_embedding(r: &IdentityRow, polys: &AppendixPolys, consts: &ArchConstants) -> (Vec<VerificationReport>, Option<SCertificate>) {
    let mut reps = Vec::new();
    let cert = match certify_root(&derive_s(r), polys) {
        Ok(c) => c,
        Err(e) => return (vec![error_report(r.id(), "certificate", e)], None),
    };
    let mut rep = VerificationReport::check(r.id(), "certificate", true, "");
    rep.family = r.family.to_string();
    rep.lhs = cert.s.to_string();
    match (&cert.q, &cert.rho, &cert.kappa) {
        (Some(q), Some(rho), Some(k)) => rep.note = Some(format!("P{q} vanishes at {rho} ({k:?})")),
        _ => {
            rep.status = Status::Info;
            rep.note = Some("no small-prime certificate".into());
        }
    }
    reps.push(rep);
    match table_embedding(r) {
        Ok(found) if found.len() == 1 => match verify_theorem2(&found[0], &r.t0(), &cert.s, consts) {
            Ok(t2) => reps.extend([t2.unprimed, t2.primed, t2.primed_literal]),
            Err(e) => reps.push(error_report(r.id(), "embedding", e)),
        },
        Ok(found) => {
            let mut rep = VerificationReport::check(r.id(), "embedding", true, format!("{} boundary embeddings found", found.len()));
            rep.status = Status::Info;
            reps.push(rep);
        }
        Err(e) => reps.push(error_report(r.id(), "embedding", e)),
    }
    if r.status == RowStatus::NumericOnly {
        for rep in reps.iter_mut().filter(|x| x.label == Label::Check) {
            rep.label = Label::NumericOnly;
        }
    }
    (reps, Some(cert))
}

fn certificate_reports(rows: &[IdentityRow], polys: &AppendixPolys, consts: &ArchConstants) -> (Vec<VerificationReport>, Vec<SCertificate>) {
    let mut rows: Vec<&IdentityRow> = rows.iter().collect();
    rows.sort_by_key(|r| sort_key(r));
    let per_row: Vec<_> = rows.par_iter().map(|r| certificate_and_embedding(r, polys, consts)).collect();
    let mut reps = Vec::new();
    let mut certs = Vec::new();
    for (r, c) in per_row {
        reps.extend(r);
        certs.extend(c);
    }
    (reps, certs)
}

/// Both p-adic congruences of every row that carries a p-adic constant.
pub fn padic_reports(rows: &[IdentityRow], k: u32, guard: u32) -> Vec<VerificationReport> {
    let mut rows: Vec<&IdentityRow> = rows.iter().filter(|r| r.padic.is_some()).collect();
    rows.sort_by_key(|r| sort_key(r));
    rows.par_iter()
        .flat_map_iter(|r| {
            let p = r.padic.as_ref().map(|e| e.p).unwrap_or(5);
            match verify_padic(r, p, k, guard) {
                Ok(reps) => reps.to_vec(),
                Err(e) => vec![error_report(r.id(), "padic", e)],
            }
        })
        .collect()
}

/// Every check over the shipped tables: the archimedean rows, the root
/// certificates and embedding forms, the Hecke reconstruction, the property
/// suites and the p-adic rows. Exploratory output is labeled and never fails.
pub fn run_all(opts: &RunOptions) -> Result<RunSummary> {
    let table = IdentityTable::embedded()?;
    let polys = AppendixPolys::embedded()?;
    let consts = ArchConstants::compute(opts.prec)?;
    let mut reports = archimedean_reports(&table.rows, &consts);
    let (cert_reps, certificates) = certificate_reports(&table.rows, polys, &consts);
    reports.extend(root_suite(&table.rows, polys)?);
    reports.extend(cert_reps);
    let ((hecke, gam), (cl, gp)) = rayon::join(
        || rayon::join(|| hecke_suite(polys), || gamma_suite(opts.prec)),
        || rayon::join(|| clausen_suite(opts.prec, 20, opts.seed), || gamma_p_suite(5, opts.padic_k, opts.seed)),
    );
    reports.extend(hecke?.0);
    reports.extend(gam?);
    reports.extend(cl?);
    reports.extend(gp?);
    reports.extend(structural_suite(&table.rows)?);
    reports.extend(padic_reports(&table.rows, opts.padic_k, opts.guard));
    if opts.exploratory {
        for probe in exploratory_probe(&table.rows, opts.padic_k)? {
            reports.extend(probe.reports());
        }
    }
    Ok(RunSummary { reports, certificates })
}

/// Re-runs the archimedean rows at `bits + extra` and reports whether the
/// pass/fail vector is unchanged.
pub fn escalation_check(rows: &[IdentityRow], prec: Precision, extra: u32) -> Result<VerificationReport> {
    let base = archimedean_reports(rows, &ArchConstants::compute(prec)?);
    let up = archimedean_reports(rows, &ArchConstants::compute(prec.escalate(extra))?);
    let key = |v: &[VerificationReport]| v.iter().map(|r| (r.id.clone(), r.equation.clone(), r.status)).collect::<Vec<_>>();
    let same = key(&base) == key(&up);
    Ok(VerificationReport::check("escalation", format!("+{extra} bits"), same, format!("{} reports compared", base.len())))
}

/// One single-integer corruption and whether any check noticed it.
#[derive(Clone, Debug)]
pub struct MutationOutcome {
    pub target: String,
    pub delta: i64,
    pub detected: bool,
}

#[derive(Clone, Debug, Default)]
pub struct MutationSummary {
    pub outcomes: Vec<MutationOutcome>,
}

impl MutationSummary {
    fn group(&self, prefix: &str) -> impl Iterator<Item = &MutationOutcome> {
        let prefix = prefix.to_string();
        self.outcomes.iter().filter(move |o| o.target.starts_with(&prefix))
    }

    /// `(detected, total)` for targets starting with `prefix`.
    pub fn coverage(&self, prefix: &str) -> (usize, usize) {
        (self.group(prefix).filter(|o| o.detected).count(), self.group(prefix).count())
    }

    pub fn undetected(&self) -> Vec<&MutationOutcome> {
        self.outcomes.iter().filter(|o| !o.detected).collect()
    }
}

fn bump(r: &Rational, numer: bool, delta: i64) -> Rational {
    if numer {
        Rational::new(r.numer() + delta, r.denom().clone())
    } else {
        Rational::new(r.numer().clone(), r.denom() + delta)
    }
}

fn rational_field(r: &mut IdentityRow, i: usize) -> &mut Rational {
    match i {
        0 => &mut r.r1,
        1 => &mut r.r2,
        _ => &mut r.r3,
    }
}

fn row_mutants(row: &IdentityRow) -> Vec<(String, i64, IdentityRow)> {
    let mut out = Vec::new();
    for delta in [-1i64, 1] {
        let mut push = |name: &str, f: &dyn Fn(&mut IdentityRow)| {
            let mut r = row.clone();
            f(&mut r);
            out.push((format!("table:{}:{name}", row.id()), delta, r));
        };
        push("M", &|r| r.m += delta);
        push("N", &|r| r.n += delta);
        for (name, get) in [("R1", 0usize), ("R2", 1), ("R3", 2)] {
            let v = rational_field(&mut row.clone(), get).clone();
            push(&format!("{name}.num"), &|r| *rational_field(r, get) = bump(&v, true, delta));
            if !v.denom().is_one() {
                push(&format!("{name}.den"), &|r| *rational_field(r, get) = bump(&v, false, delta));
            }
        }
        if let Some(e) = &row.padic {
            let v = e.r3.clone();
            push("R3p.num", &|r| r.padic.as_mut().unwrap().r3 = bump(&v, true, delta));
            if !v.denom().is_one() {
                push("R3p.den", &|r| r.padic.as_mut().unwrap().r3 = bump(&v, false, delta));
            }
        }
    }
    out
}

fn row_detects(row: &IdentityRow, baseline: &SCertificate, consts: &ArchConstants, polys: &AppendixPolys, k: u32, guard: u32) -> bool {
    let red = |v: Result<[VerificationReport; 2]>| v.map(|r| r.iter().any(|x| !x.passed())).unwrap_or(true);
    if red(verify_archimedean(row, consts)) {
        return true;
    }
    if let Some(e) = &row.padic {
        if red(verify_padic(row, e.p, k, guard)) {
            return true;
        }
    }
    if baseline.is_certified() {
        return certify_root(&derive_s(row), polys).map(|c| !c.is_certified()).unwrap_or(true);
    }
    false
}

fn poly_mutants(name: &str, p: &BiPolyQ) -> Vec<(String, i64, BiPolyQ)> {
    let mut out = Vec::new();
    for (mono, c) in p.terms() {
        for delta in [-1i64, 1] {
            let m = p + &MPoly::monomial(Rational::from_integer(BigInt::from(delta)), *mono);
            out.push((format!("{name}:x^{} z^{} ({c})", mono[0], mono[2]), delta, m));
        }
    }
    out
}

/// Corrupts every integer of the identity table, every entry of the Hecke
/// table that feeds `Q`, and every coefficient of the auxiliary polynomials
/// by `±1`, one at a time, and records whether some check turns red.
pub fn mutation_smoke(opts: &RunOptions) -> Result<MutationSummary> {
    let table = IdentityTable::embedded()?;
    let polys = AppendixPolys::embedded()?;
    let consts = ArchConstants::compute(opts.prec)?;
    let baselines: Vec<SCertificate> = table.rows.iter().map(|r| certify_root(&derive_s(r), polys)).collect::<Result<_>>()?;

    let mut outcomes: Vec<MutationOutcome> = table
        .rows
        .par_iter()
        .zip(baselines.par_iter())
        .flat_map_iter(|(row, base)| {
            row_mutants(row)
                .into_iter()
                .map(|(target, delta, m)| MutationOutcome { detected: row_detects(&m, base, &consts, polys, opts.padic_k, opts.guard), target, delta })
                .collect::<Vec<_>>()
        })
        .collect();

    let hecke = HeckeTable::embedded()?;
    for k in hecke.weights() {
        let m = hecke.matrix(k).expect("listed weight");
        let i = m.len() - 1;
        for j in 0..m[i].len() {
            for delta in [-1i64, 1] {
                let t = hecke.with_entry(k, i, j, bump(&m[i][j], true, delta))?;
                let detected = match power_sum_polys(&t) {
                    Ok(ps) => q_coefficient_reports(&newton_to_q(&ps)).iter().any(|r| !r.passed()),
                    Err(_) => true,
                };
                outcomes.push(MutationOutcome { target: format!("hecke:k={k}:({i},{j})"), delta, detected });
            }
        }
    }

    let p5 = polys.get(5).expect("P5 is shipped");
    let eliminated = newton_to_q(&power_sum_polys(hecke)?);
    let primitive = crate::hecke::eliminate_to_p(&eliminated)?.primitive;
    for (target, delta, m) in poly_mutants("P5", p5) {
        outcomes.push(MutationOutcome { target, delta, detected: m != primitive });
    }
    let certified: Vec<(&IdentityRow, &SCertificate)> = table.rows.iter().zip(baselines.iter()).filter(|(_, c)| c.is_certified()).collect();
    for qq in polys.primes().into_iter().filter(|&q| q != 5) {
        let p = polys.get(qq).expect("listed prime");
        let users: Vec<&(&IdentityRow, &SCertificate)> = certified.iter().filter(|(_, c)| c.q == Some(qq)).collect();
        let muts = poly_mutants(&format!("P{qq}"), p);
        let found: Vec<MutationOutcome> = muts
            .into_par_iter()
            .map(|(target, delta, m)| {
                let swapped = polys.with_poly(qq, m);
                let detected = users.iter().any(|(_, c)| certify_root(c, &swapped).map(|n| n.q != c.q).unwrap_or(true));
                MutationOutcome { target, delta, detected }
            })
            .collect();
        outcomes.extend(found);
    }
    outcomes.sort_by_key(|o| (Reverse(o.detected), o.target.clone(), o.delta));
    Ok(MutationSummary { outcomes })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_run_is_green() {
        let s = run_all(&RunOptions { exploratory: true, ..RunOptions::default() }).unwrap();
        for r in &s.reports {
            eprintln!("{}", r.human());
        }
        assert!(s.all_pass(), "{:#?}", s.failures());
        assert!(s.reports.iter().filter(|r| r.label == Label::Exploratory).all(|r| r.status == Status::Info));
    }

    #[test]
    fn mutations_are_caught() {
        let m = mutation_smoke(&RunOptions::default()).unwrap();
        for o in m.undetected() {
            eprintln!("undetected {} {:+}", o.target, o.delta);
        }
        let (hit, all) = m.coverage("table:");
        assert_eq!(hit, all);
        let (hit, all) = m.coverage("P5:");
        assert_eq!(hit, all);
    }
}
