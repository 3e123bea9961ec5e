use clap::{Parser, Subcommand};
use serde_json::json;
use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;
use x6star::driver::*;
use x6star::gamma::{gamma_rat, GammaConstantSet};
use x6star::hecke::{eliminate_to_p, newton_to_q, power_sum_polys, HeckeTable};
use x6star::numkernel::{BigReal, Precision, Rational};
use x6star::polys::AppendixPolys;
use x6star::Result;

#[derive(Parser)]
#[command(name = "x6star", version, about = "Verify Ramanujan-type series attached to CM points of X6*")]
struct Cli {
    /// Also run the exploratory p-adic probe of the first family.
    #[arg(long, global = true)]
    exploratory: bool,

    /// Write the JSON-lines report here; `-` replaces the text output.
    #[arg(long, global = true, value_name = "PATH")]
    jsonl: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identities of one discriminant.
    Verify {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Run every check over the shipped tables.
    VerifyAll {
        #[arg(long)]
        digits: Option<u32>,
    },
    /// The sixth-power congruences of the second family.
    Padic {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 40)]
        digits: u32,
        #[arg(long = "D", allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// The linear coefficient of a row and its root certificate.
    DeriveS {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
    },
    /// Root certificates for every row and the pinned roots.
    CertifyRoots,
    /// Rebuild Q(x, y) from the Hecke table and eliminate y.
    ReconstructQ,
    /// Gamma at a rational argument.
    Gamma {
        #[arg(long, value_name = "a/b", allow_hyphen_values = true)]
        arg: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// C1, C2 and the periods they come from.
    Constants {
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// A quick pass over every component at reduced precision.
    Selftest,
}

macro_rules! say {
    ($($t:tt)*) => {
        writeln!(io::stdout(), $($t)*)?
    };
}

struct Output {
    text: bool,
    sink: Option<Box<dyn Write>>,
}

impl Output {
    fn new(jsonl: Option<&str>) -> io::Result<Output> {
        Ok(match jsonl {
            None => Output { text: true, sink: None },
            Some("-") => Output { text: false, sink: Some(Box::new(io::stdout())) },
            Some(path) => Output { text: true, sink: Some(Box::new(File::create(path)?)) },
        })
    }

    fn json(&mut self, line: &str) -> io::Result<()> {
        match &mut self.sink {
            Some(w) => writeln!(w, "{line}"),
            None => Ok(()),
        }
    }

    fn reports(&mut self, reps: &[VerificationReport]) -> io::Result<bool> {
        for r in reps {
            if self.text {
                say!("{}", r.human());
            }
            self.json(&r.to_json())?;
        }
        Ok(reps.iter().all(|r| r.passed()))
    }

    fn value(&mut self, name: &str, value: &str) -> io::Result<()> {
        if self.text {
            say!("{name} = {value}");
        }
        self.json(&json!({ "id": name, "value": value }).to_string())
    }
}

fn precision(digits: Option<u32>) -> Result<Precision> {
    digits.map_or(Ok(Precision::DEFAULT), Precision::from_digits)
}

fn rows_for(d: i64, family: Option<Family>) -> Result<Vec<IdentityRow>> {
    let rows: Vec<IdentityRow> = IdentityTable::embedded()?.rows.iter().filter(|r| r.d.d == d && family.is_none_or(|f| r.family == f)).cloned().collect();
    if rows.is_empty() {
        return Err(x6star::Error::Domain(format!("no table row for D = {d}")));
    }
    Ok(rows)
}

fn show(x: &BigReal, digits: u32) -> String {
    x.to_sci_string(digits as usize)
}

fn run(cli: &Cli, out: &mut Output) -> std::result::Result<bool, Box<dyn std::error::Error>> {
    let mut ok = true;
    match &cli.command {
        Command::Verify { d, family, digits } => {
            let consts = ArchConstants::compute(precision(*digits)?)?;
            let polys = AppendixPolys::embedded()?;
            for row in rows_for(*d, *family)? {
                ok &= out.reports(&verify_archimedean(&row, &consts)?)?;
                ok &= out.reports(&certificate_and_embedding(&row, polys, &consts).0)?;
                if let Some(e) = &row.padic {
                    ok &= out.reports(&verify_padic(&row, e.p, 40, PADIC_GUARD)?)?;
                }
            }
            if cli.exploratory {
                for probe in exploratory_probe(&rows_for(*d, Some(Family::A)).unwrap_or_default(), 40)? {
                    out.reports(&probe.reports())?;
                }
            }
        }
        Command::VerifyAll { digits } => {
            let opts = RunOptions { prec: precision(*digits)?, exploratory: cli.exploratory, ..RunOptions::default() };
            let summary = run_all(&opts)?;
            ok &= out.reports(&summary.reports)?;
            for c in &summary.certificates {
                out.json(&c.to_json())?;
            }
            if out.text {
                let failed = summary.failures().len();
                say!("{} checks, {failed} failed", summary.reports.len());
            }
        }
        Command::Padic { p, digits, d } => {
            let table = IdentityTable::embedded()?;
            let rows: Vec<IdentityRow> = match d {
                Some(d) => rows_for(*d, Some(Family::B))?,
                None => table.padic_rows().cloned().collect(),
            };
            for row in &rows {
                ok &= out.reports(&verify_padic(row, *p, *digits, PADIC_GUARD)?)?;
            }
            if cli.exploratory {
                for probe in exploratory_probe(&table.rows, *digits)? {
                    out.reports(&probe.reports())?;
                }
            }
        }
        Command::DeriveS { d } => {
            let polys = AppendixPolys::embedded()?;
            for row in rows_for(*d, None)? {
                let cert = certify_root(&derive_s(&row), polys)?;
                if out.text {
                    let which = if row.family == Family::A { "S" } else { "S'" };
                    say!("{} {which} = {}", cert.id(), cert.s);
                    if let Some(x) = &cert.x {
                        say!("{} X = {x}", cert.id());
                    }
                    match (&cert.q, &cert.rho) {
                        (Some(q), Some(rho)) => say!("{} P{q} vanishes at {rho}", cert.id()),
                        _ => say!("{} no small-prime certificate", cert.id()),
                    }
                }
                out.json(&cert.to_json())?;
            }
        }
        Command::CertifyRoots => {
            let table = IdentityTable::embedded()?;
            let polys = AppendixPolys::embedded()?;
            ok &= out.reports(&root_suite(&table.rows, polys)?)?;
            for row in &table.rows {
                let cert = certify_root(&derive_s(row), polys)?;
                if out.text {
                    let status = match (&cert.q, &cert.rho) {
                        (Some(q), Some(rho)) => format!("P{q} at {rho}"),
                        _ => "no small-prime certificate".into(),
                    };
                    say!("{:<10} {:<28} {status}", cert.id(), cert.s.to_string());
                }
                out.json(&cert.to_json())?;
            }
        }
        Command::ReconstructQ => {
            let q = newton_to_q(&power_sum_polys(HeckeTable::embedded()?)?);
            out.value("Q", &q.to_string())?;
            ok &= out.reports(&q_coefficient_reports(&q))?;
            let el = eliminate_to_p(&q)?;
            out.value("primitive resultant", &el.primitive.to_string())?;
            ok &= out.reports(&hecke_suite(AppendixPolys::embedded()?)?.0)?;
        }
        Command::Gamma { arg, digits } => {
            let r: Rational = x6star::datafile::parse_rational(arg).ok_or_else(|| x6star::Error::Domain(format!("cannot read {arg} as a rational")))?;
            let v = gamma_rat(&r, Precision::from_digits(*digits + 5)?)?;
            out.value(&format!("Gamma({r})"), &show(&v, *digits))?;
        }
        Command::Constants { digits } => {
            let prec = Precision::from_digits(*digits + 5)?;
            let g = GammaConstantSet::compute(prec)?;
            out.value("C1", &show(&g.c1, *digits))?;
            out.value("C2", &show(&g.c2, *digits))?;
            out.value("C", &show(&g.c_lemma3, *digits))?;
            out.value("Omega_-3", &show(&g.omega_m3, *digits))?;
            out.value("Omega_-4", &show(&g.omega_m4, *digits))?;
        }
        Command::Selftest => {
            let prec = Precision::new(200, 40)?;
            let consts = ArchConstants::compute(prec)?;
            let table = IdentityTable::embedded()?;
            let polys = AppendixPolys::embedded()?;
            ok &= out.reports(&archimedean_reports(&table.rows, &consts))?;
            ok &= out.reports(&padic_reports(&table.rows, 20, 4))?;
            ok &= out.reports(&root_suite(&table.rows, polys)?)?;
            ok &= out.reports(&q_coefficient_reports(&newton_to_q(&power_sum_polys(HeckeTable::embedded()?)?)))?;
            ok &= out.reports(&gamma_p_suite(5, 20, 1)?)?;
            ok &= out.reports(&structural_suite(&table.rows)?)?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = match Output::new(cli.jsonl.as_deref()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("x6star: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("x6star: {e}");
            ExitCode::from(2)
        }
    }
}
