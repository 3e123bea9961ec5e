use std::time::Instant;
use x6star::driver::*;
use x6star::hecke::{newton_to_q, power_sum_polys, HeckeTable};
use x6star::numkernel::Precision;
use x6star::polys::AppendixPolys;

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, text: impl Into<String>) -> Line {
    Line { ok, text: text.into() }
}

fn all_pass(reps: &[VerificationReport]) -> bool {
    !reps.is_empty() && reps.iter().all(|r| r.status == Status::Pass)
}

fn first_failure(reps: &[VerificationReport]) -> String {
    reps.iter().find(|r| r.status != Status::Pass).map(|r| format!("; first failure: {}", r.human())).unwrap_or_default()
}

fn rows_line(rows: &[IdentityRow], consts: &ArchConstants, numeric: bool) -> Line {
    let reps = archimedean_reports(rows, consts);
    let tol = consts.tolerance_digits();
    let within = reps.iter().all(|r| r.residual_exponent.is_some_and(|e| e < -(tol as i64)));
    let slowest = reps.iter().map(|r| r.ms).max().unwrap_or(0);
    let labels = !numeric || reps.iter().all(|r| r.label == Label::NumericOnly);
    let worst = reps.iter().filter_map(|r| r.residual_exponent).max().unwrap_or(0);
    let ok = all_pass(&reps) && within && slowest < 10_000 && labels && reps.len() == 2 * rows.len();
    let mut text = format!("{} identities, worst residual 1e{worst} (< 1e-{tol}), slowest {slowest} ms", reps.len());
    if let Some(r) = reps.iter().find(|r| r.id == "A-120" && r.equation == "series") {
        text.push_str(&format!(", A-120 used {} terms", r.terms));
    }
    if numeric {
        text.push_str(", labeled numeric_only");
    }
    text.push_str(&first_failure(&reps));
    line(ok, text)
}

fn main() {
    let start = Instant::now();
    let prec = Precision::DEFAULT;
    let consts = ArchConstants::compute(prec).expect("constants");
    let table = IdentityTable::embedded().expect("identity table");
    let polys = AppendixPolys::embedded().expect("appendix polynomials");
    let select = |f: Option<Family>, s: RowStatus| -> Vec<IdentityRow> {
        table.rows.iter().filter(|r| r.status == s && f.is_none_or(|f| r.family == f)).cloned().collect()
    };
    let mut lines: Vec<(&str, Line)> = Vec::new();

    lines.push(("first table (A)", rows_line(&select(Some(Family::A), RowStatus::Proved), &consts, false)));
    lines.push(("second table (B)", rows_line(&select(Some(Family::B), RowStatus::Proved), &consts, false)));
    lines.push(("numeric-only rows", rows_line(&select(None, RowStatus::NumericOnly), &consts, true)));

    let padic = |k: u32| -> Vec<VerificationReport> {
        table
            .padic_rows()
            .flat_map(|r| match verify_padic(r, 5, k, PADIC_GUARD) {
                Ok(reps) => reps.to_vec(),
                Err(e) => vec![VerificationReport::check(r.id(), "padic", false, e.to_string())],
            })
            .collect()
    };
    let reps = padic(40);
    let rows = table.padic_rows().count();
    let min = reps.iter().filter_map(|r| r.padic_digits).min().unwrap_or(0);
    let ok = all_pass(&reps) && rows == 9 && min >= 40 - PADIC_GUARD;
    let stretch = padic(100);
    let smin = stretch.iter().filter_map(|r| r.padic_digits).min().unwrap_or(0);
    let stretch_note = if all_pass(&stretch) { format!("K = 100 stretch holds to {smin} digits") } else { format!("K = 100 stretch fails{}", first_failure(&stretch)) };
    lines.push(("5-adic congruences", line(ok, format!("{rows} rows x 2 congruences at K = 40, guard {PADIC_GUARD}, min agreement {min} digits; {stretch_note}{}", first_failure(&reps)))));

    let q = HeckeTable::embedded().and_then(power_sum_polys).map(|ps| newton_to_q(&ps));
    lines.push((
        "Q from T5",
        match &q {
            Ok(qq) => {
                let reps = q_coefficient_reports(qq);
                line(all_pass(&reps), format!("{} coefficient checks exact{}", reps.len(), first_failure(&reps)))
            }
            Err(e) => line(false, e.to_string()),
        },
    ));

    lines.push((
        "elimination",
        match hecke_suite(polys) {
            Ok((reps, _)) => {
                let reps: Vec<_> = reps.into_iter().filter(|r| r.equation != "evaluated route").collect();
                let notes: Vec<String> = reps.iter().filter_map(|r| r.note.clone()).collect();
                line(all_pass(&reps), format!("P5 divides the resultant; {}{}", notes.join("; "), first_failure(&reps)))
            }
            Err(e) => line(false, e.to_string()),
        },
    ));

    lines.push((
        "root certificates",
        match root_suite(&table.rows, polys) {
            Ok(reps) => line(all_pass(&reps), format!("{} exact checks ({}){}", reps.len(), reps.iter().map(|r| r.equation.trim()).collect::<Vec<_>>().join(", "), first_failure(&reps))),
            Err(e) => line(false, e.to_string()),
        },
    ));

    let limit = -(i64::from(prec.bits) - 50);
    let residual_line = |reps: std::result::Result<Vec<VerificationReport>, x6star::Error>| match reps {
        Ok(reps) => {
            let worst = reps.iter().filter_map(|r| r.residual_exponent).max().unwrap_or(0);
            line(all_pass(&reps), format!("{} checks, worst residual 1e{worst} (limit 2^{limit}){}", reps.len(), first_failure(&reps)))
        }
        Err(e) => line(false, e.to_string()),
    };
    lines.push(("gamma suite", residual_line(gamma_suite(prec))));
    lines.push(("Clausen identity", residual_line(clausen_suite(prec, 20, 20))));

    lines.push((
        "gamma_p suite",
        match gamma_p_suite(5, 40, 20) {
            Ok(reps) => line(all_pass(&reps), format!("{} exact congruence families at K = 40{}", reps.len(), first_failure(&reps))),
            Err(e) => line(false, e.to_string()),
        },
    ));

    lines.push((
        "structure",
        match structural_suite(&table.rows) {
            Ok(reps) => {
                let classes = reps.iter().filter(|r| r.equation.trim() == "boundary class").count();
                line(all_pass(&reps), format!("dimensions, embedding counts and {classes} boundary classes{}", first_failure(&reps)))
            }
            Err(e) => line(false, e.to_string()),
        },
    ));

    lines.push((
        "mutation smoke",
        match mutation_smoke(&RunOptions::default()) {
            Ok(m) => {
                let (hit, all) = m.coverage("table:");
                let (h5, a5) = m.coverage("P5:");
                let (hh, ah) = m.coverage("hecke:");
                let (h7, a7) = m.coverage("P7:");
                line(hit == all && all > 0, format!("identity table {hit}/{all} detected; also Hecke {hh}/{ah}, P5 {h5}/{a5}, P7 {h7}/{a7}"))
            }
            Err(e) => line(false, e.to_string()),
        },
    ));

    let mut failed = 0;
    for (i, (name, l)) in lines.iter().enumerate() {
        println!("{} {:>2}. {name}: {}", if l.ok { "PASS" } else { "FAIL" }, i + 1, l.text);
        failed += usize::from(!l.ok);
    }
    println!("{} of {} criteria pass in {:.1} s", lines.len() - failed, lines.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
