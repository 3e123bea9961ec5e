//! The identity tables and everything that is checked against them: the
//! archimedean series, the linear-coefficient certificates, the 5-adic
//! congruences and the supporting property suites.

mod archimedean;
mod certificates;
mod padic_checks;
mod report;
mod run;
mod suites;

pub use archimedean::{table_rhs, embedding_case, verify_archimedean, verify_theorem2, ArchConstants, EmbeddingCase, EmbeddingReport};
pub use certificates::{certify_root, derive_s, kappa_times_rho, s_from_x, x_from_s, Kappa, Rho, SCertificate};
pub use padic_checks::{exploratory_probe, verify_padic, ExploratoryProbe, PADIC_GUARD};
pub use report::{Label, Status, VerificationReport};
pub use run::{archimedean_reports, certificate_and_embedding, escalation_check, padic_reports, mutation_smoke, run_all, MutationOutcome, MutationSummary, RunOptions, RunSummary};
pub use suites::{clausen_suite, expected_class, expected_q_coefficients, gamma_p_suite, gamma_suite, hecke_suite, q_coefficient_reports, root_suite, structural_suite, table_embedding};

use crate::arith::Discriminant;
use crate::datafile::{parse_rational, read_checksummed};
use crate::error::{Error, Result};
use crate::hyperseries::{PochFamily, SeriesSpec};
use crate::numkernel::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Which of the two series families a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn series(self, primed: bool) -> PochFamily {
        match (self, primed) {
            (Family::A, false) => PochFamily::a(),
            (Family::A, true) => PochFamily::a_prime(),
            (Family::B, false) => PochFamily::b(),
            (Family::B, true) => PochFamily::b_prime(),
        }
    }

    /// Shift of `n` in the weight of the primed series.
    pub fn primed_shift(self) -> Rational {
        match self {
            Family::A => Rational::new(1.into(), 2.into()),
            Family::B => Rational::new(1.into(), 3.into()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            _ => Err(Error::Domain(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Proved,
    NumericOnly,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Proved => "proved",
            RowStatus::NumericOnly => "numeric_only",
        })
    }
}

/// The constant `R3` of a p-adic analogue of a row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicEntry {
    pub p: u64,
    pub r3: Rational,
}

/// One identity `Σ (R1 n + R2) c_n (M/N)^n = ...` of the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub d: Discriminant,
    pub family: Family,
    pub m: BigInt,
    pub n: BigInt,
    pub r1: Rational,
    pub r2: Rational,
    pub r3: Rational,
    pub status: RowStatus,
    pub padic: Option<PadicEntry>,
}

impl IdentityRow {
    /// Short identifier such as `B-19`.
    pub fn id(&self) -> String {
        format!("{}{}", self.family, self.d.d)
    }

    /// The series argument `M/N`.
    pub fn x0(&self) -> Rational {
        Rational::new(self.m.clone(), self.n.clone())
    }

    /// The Hauptmodul value of the CM point: `M/N` for family A, `N/M` for B.
    pub fn t0(&self) -> Rational {
        match self.family {
            Family::A => self.x0(),
            Family::B => self.x0().recip(),
        }
    }

    pub fn series(&self, primed: bool) -> SeriesSpec {
        SeriesSpec {
            family: self.family.series(primed),
            r1: self.r1.clone(),
            r2: self.r2.clone(),
            shift: if primed { self.family.primed_shift() } else { Rational::zero() },
            argument: self.x0(),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !self.n.is_positive() || self.m.is_zero() {
            return Err("need N > 0 and M != 0".into());
        }
        if !self.m.gcd(&self.n).is_one() {
            return Err(format!("M = {} and N = {} are not coprime", self.m, self.n));
        }
        if self.m.abs() >= self.n {
            return Err(format!("|M/N| = |{}/{}| is not below 1", self.m, self.n));
        }
        if self.r1.is_zero() {
            return Err("R1 = 0".into());
        }
        Ok(())
    }
}

/// The full identity table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTable {
    pub rows: Vec<IdentityRow>,
}

const IDENTITY_FILE: &str = "identities.txt";
const IDENTITY_TEXT: &str = include_str!("../../data/identities.txt");

impl IdentityTable {
    pub fn parse(file: &str, text: &str) -> Result<IdentityTable> {
        let perr = |line: usize, msg: String| Error::Parse { file: file.into(), line, msg };
        let mut rows: Vec<IdentityRow> = Vec::new();
        for l in read_checksummed(file, text)? {
            let toks: Vec<&str> = l.text.split_whitespace().collect();
            let rat = |s: &str| parse_rational(s).ok_or_else(|| perr(l.number, format!("bad rational {s}")));
            let int = |s: &str| s.parse::<BigInt>().map_err(|_| perr(l.number, format!("bad integer {s}")));
            let disc = |s: &str| {
                let d: i64 = s.parse().map_err(|_| perr(l.number, format!("bad discriminant {s}")))?;
                Discriminant::new(d).map_err(|e| perr(l.number, e.to_string()))
            };
            match toks.as_slice() {
                ["row", d, fam, status, m, n, r1, r2, r3] => {
                    let status = match *status {
                        "proved" => RowStatus::Proved,
                        "numeric_only" => RowStatus::NumericOnly,
                        s => return Err(perr(l.number, format!("bad status {s}"))),
                    };
                    let row = IdentityRow {
                        d: disc(d)?,
                        family: fam.parse().map_err(|e: Error| perr(l.number, e.to_string()))?,
                        m: int(m)?,
                        n: int(n)?,
                        r1: rat(r1)?,
                        r2: rat(r2)?,
                        r3: rat(r3)?,
                        status,
                        padic: None,
                    };
                    row.validate().map_err(|m| perr(l.number, m))?;
                    if rows.iter().any(|r| r.d == row.d && r.family == row.family) {
                        return Err(perr(l.number, format!("row {} repeated", row.id())));
                    }
                    rows.push(row);
                }
                ["padic", p, d, r3] => {
                    let p: u64 = p.parse().map_err(|_| perr(l.number, format!("bad prime {p}")))?;
                    let d = disc(d)?;
                    let r3 = rat(r3)?;
                    let row = rows
                        .iter_mut()
                        .find(|r| r.d == d && r.family == Family::B)
                        .ok_or_else(|| perr(l.number, format!("p-adic entry for unknown row B{}", d.d)))?;
                    if row.padic.is_some() {
                        return Err(perr(l.number, format!("second p-adic entry for B{}", d.d)));
                    }
                    row.padic = Some(PadicEntry { p, r3 });
                }
                _ => return Err(perr(l.number, format!("unrecognized line {:?}", l.text))),
            }
        }
        Ok(IdentityTable { rows })
    }

    /// The table shipped with the crate, parsed once.
    pub fn embedded() -> Result<&'static IdentityTable> {
        static CELL: OnceLock<std::result::Result<IdentityTable, Error>> = OnceLock::new();
        CELL.get_or_init(|| IdentityTable::parse(IDENTITY_FILE, IDENTITY_TEXT)).as_ref().map_err(|e| e.clone())
    }

    /// The row for discriminant `d`, optionally restricted to one family.
    pub fn row(&self, d: i64, family: Option<Family>) -> Option<&IdentityRow> {
        self.rows.iter().find(|r| r.d.d == d && family.is_none_or(|f| f == r.family))
    }

    pub fn padic_rows(&self) -> impl Iterator<Item = &IdentityRow> {
        self.rows.iter().filter(|r| r.padic.is_some())
    }
}

/// All rows of the shipped table, in file order.
pub fn load_tables() -> Result<Vec<IdentityRow>> {
    Ok(IdentityTable::embedded()?.rows.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datafile::with_checksum;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn table_counts() {
        let rows = load_tables().unwrap();
        let count = |f: Family, s: RowStatus| rows.iter().filter(|r| r.family == f && r.status == s).count();
        assert_eq!(count(Family::A, RowStatus::Proved), 8);
        assert_eq!(count(Family::B, RowStatus::Proved), 12);
        assert_eq!(count(Family::A, RowStatus::NumericOnly), 3);
        assert_eq!(count(Family::B, RowStatus::NumericOnly), 1);
        let t = IdentityTable::embedded().unwrap();
        assert_eq!(t.padic_rows().count(), 9);
        assert!(t.padic_rows().all(|r| r.padic.as_ref().unwrap().p == 5));
    }

    #[test]
    fn sample_rows() {
        let t = IdentityTable::embedded().unwrap();
        let r = t.row(-120, None).unwrap();
        assert_eq!(r.family, Family::A);
        assert_eq!((r.m.clone(), r.n.clone()), (BigInt::from(-2401), BigInt::from(3375)));
        assert_eq!((r.r1.clone(), r.r2.clone(), r.r3.clone()), (q(74480, 1), q(6860, 3), q(5, 1)));
        let r = t.row(-84, Some(Family::B)).unwrap();
        assert_eq!((r.m.clone(), r.n.clone()), (BigInt::from(27), BigInt::from(196)));
        assert_eq!((r.r1.clone(), r.r2.clone(), r.r3.clone()), (q(4914, 1), q(189, 2), q(42, 1)));
        let r = t.row(-267, None).unwrap();
        assert_eq!(r.status, RowStatus::NumericOnly);
        assert_eq!(r.family, Family::B);
        assert_eq!(r.r1, Rational::from_integer("45769617921456000".parse().unwrap()));
        assert_eq!(r.padic.as_ref().unwrap().r3, q(1, 2));
        assert_eq!(t.row(-228, None).unwrap().padic.as_ref().unwrap().r3, q(-38, 1));
        assert!(t.row(-84, Some(Family::A)).is_none());
    }

    #[test]
    fn rejects_bad_rows() {
        let bad = with_checksum("row -120 A proved 3375 2401 1 1 1\n");
        assert!(IdentityTable::parse("t", &bad).is_err());
        let bad = with_checksum("row -120 A proved -2401 3375 74480 6860/3 5\npadic 5 -120 2\n");
        assert!(IdentityTable::parse("t", &bad).is_err());
        let tampered = IDENTITY_TEXT.replacen("74480", "74481", 1);
        assert!(matches!(IdentityTable::parse("t", &tampered), Err(Error::Checksum { .. })));
    }
}
