use crate::numkernel::{BigReal, Mag};
use serde::Serialize;
use std::f64::consts::{LOG10_2, LOG2_10};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for information only; never affects the exit status.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "info",
        })
    }
}

/// Epistemic label attached to a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Proved,
    NumericOnly,
    Check,
    Diagnostic,
    Exploratory,
}

/// One line of the machine-readable report.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub family: String,
    pub equation: String,
    pub label: Label,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_exponent: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub padic_digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i32>,
    pub terms: u64,
    pub ms: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// A report for a yes/no check with no numeric sides.
    pub fn check(id: impl Into<String>, equation: impl Into<String>, ok: bool, note: impl Into<String>) -> VerificationReport {
        VerificationReport {
            id: id.into(),
            family: "-".into(),
            equation: equation.into(),
            label: Label::Check,
            lhs: String::new(),
            rhs: String::new(),
            residual_exponent: None,
            padic_digits: None,
            sign: None,
            terms: 0,
            ms: 0,
            status: if ok { Status::Pass } else { Status::Fail },
            note: Some(note.into()).filter(|s: &String| !s.is_empty()),
        }
    }

    /// A report for an absolute residual that must stay below `2^limit`.
    pub fn residual(id: impl Into<String>, equation: impl Into<String>, residual: Mag, limit: i64) -> VerificationReport {
        let mut r = VerificationReport::check(id, equation, residual < Mag::pow2(limit), "");
        r.residual_exponent = Some(decimal_exponent(residual));
        r.rhs = format!("< 2^{limit}");
        r
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// One line of human-readable text.
    pub fn human(&self) -> String {
        let mut s = format!("{:<5} {:<10} {:<16}", self.status, self.id, self.equation);
        if let Some(e) = self.residual_exponent {
            s.push_str(&format!(" residual 1e{e}"));
        }
        if let Some(d) = self.padic_digits {
            s.push_str(&format!(" agree {d} digits"));
        }
        if let Some(sg) = self.sign {
            s.push_str(&format!(" sign {sg:+}"));
        }
        if self.terms > 0 {
            s.push_str(&format!(" terms {}", self.terms));
        }
        if self.ms > 0 {
            s.push_str(&format!(" {} ms", self.ms));
        }
        match self.label {
            Label::NumericOnly => s.push_str(" [numeric_only]"),
            Label::Diagnostic => s.push_str(" [diagnostic]"),
            Label::Exploratory => s.push_str(" [exploratory]"),
            _ => {}
        }
        if let Some(n) = &self.note {
            s.push_str(&format!("  {n}"));
        }
        s
    }
}

/// Smallest decimal `e` with `m <= 10^e`.
pub(crate) fn decimal_exponent(m: Mag) -> i64 {
    match m.log2_ceil() {
        Some(c) => (c as f64 * LOG10_2).ceil() as i64,
        None => i64::MIN / 2,
    }
}

/// Compares `|lhs|` with `|rhs|`: `(relative residual bound, sign of lhs·rhs, pass)`.
pub(crate) fn compare_abs(lhs: &BigReal, rhs: &BigReal, tol_digits: u32) -> (Mag, i32, bool) {
    let rel = lhs.abs().rel_diff_upper(&rhs.abs());
    let ok = match rel.log2_ceil() {
        Some(c) => (c as f64) < -f64::from(tol_digits) * LOG2_10,
        None => true,
    };
    (rel, lhs.sign() * rhs.sign(), ok)
}
