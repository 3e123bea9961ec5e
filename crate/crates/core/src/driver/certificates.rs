use super::{Family, IdentityRow};
use crate::arith::Discriminant;
use crate::error::Result;
use crate::numkernel::Rational;
use crate::polys::{eval_quad, AppendixPolys, QuadElem};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// How the root `ρ` relates to the t-side quantity `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kappa {
    /// `ρ = X`.
    Identity,
    /// `X = ((1 + √D)/√D) ρ`.
    HalfIntegral,
}

/// A root of an auxiliary polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rho {
    Rational(Rational),
    Quadratic(QuadElem),
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Rational(r) => write!(f, "{r}"),
            Rho::Quadratic(z) => write!(f, "{z}"),
        }
    }
}

/// The derived linear coefficient of a row and, once certified, the
/// auxiliary polynomial that has it (or its t-side image) as a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCertificate {
    pub d: Discriminant,
    pub family: Family,
    /// `t0` for family A, `s0` for family B.
    pub x0: Rational,
    /// `S` for family A, `S'` for family B.
    pub s: Rational,
    /// Family B only: `X = -(2/3)(S' + t0)/t0^2` with `t0 = 1/s0`.
    pub x: Option<Rational>,
    pub q: Option<u32>,
    pub rho: Option<Rho>,
    pub kappa: Option<Kappa>,
}

impl SCertificate {
    pub fn id(&self) -> String {
        format!("{}{}", self.family, self.d.d)
    }

    pub fn is_certified(&self) -> bool {
        self.q.is_some()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            id: String,
            family: Family,
            x0: String,
            s: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            x: Option<String>,
            q: Option<u32>,
            rho: Option<String>,
            kappa: Option<Kappa>,
            status: &'a str,
        }
        let v = View {
            id: self.id(),
            family: self.family,
            x0: self.x0.to_string(),
            s: self.s.to_string(),
            x: self.x.as_ref().map(|x| x.to_string()),
            q: self.q,
            rho: self.rho.as_ref().map(|r| r.to_string()),
            kappa: self.kappa,
            status: if self.is_certified() { "certified" } else { "no small-prime certificate" },
        };
        serde_json::to_string(&v).expect("certificates serialize")
    }
}

/// `S = -8 R2 / (R1 t0)` (family A) or `S' = -12 R2 / (R1 s0)` (family B).
pub fn derive_s(row: &IdentityRow) -> SCertificate {
    let x0 = row.x0();
    let k = match row.family {
        Family::A => int(-8),
        Family::B => int(-12),
    };
    let s = k * &row.r2 / (&row.r1 * &x0);
    let x = (row.family == Family::B).then(|| x_from_s(&x0.recip(), &s));
    SCertificate { d: row.d, family: row.family, x0, s, x, q: None, rho: None, kappa: None }
}

/// `X = -(2/3)(S' + t0)/t0^2`.
pub fn x_from_s(t0: &Rational, s: &Rational) -> Rational {
    -int(2) / int(3) * (s + t0) / (t0 * t0)
}

/// Inverse of [`x_from_s`]: `S' = -(3/2) X t0^2 - t0`.
pub fn s_from_x(t0: &Rational, x: &Rational) -> Rational {
    -int(3) / int(2) * x * t0 * t0 - t0
}

/// `((1 + √d)/√d) ρ`.
pub fn kappa_times_rho(d: i64, rho: &QuadElem) -> Result<QuadElem> {
    let sq = QuadElem::new(d, Rational::zero(), Rational::one());
    let one = QuadElem::from_rational(d, Rational::one());
    one.add(&sq).div(&sq).map(|k| k.mul(rho))
}

/// Searches the auxiliary polynomials, in increasing `q`, for one that
/// vanishes exactly at the derived value. For family B both readings of
/// `κ` are tried. Any certificate already present on `cert` is discarded.
pub fn certify_root(cert: &SCertificate, polys: &AppendixPolys) -> Result<SCertificate> {
    let mut out = SCertificate { q: None, rho: None, kappa: None, ..cert.clone() };
    let d = cert.d.d;
    for q in polys.primes() {
        let p = polys.get(q).expect("listed prime");
        match cert.family {
            Family::A => {
                if p.eval(&cert.x0, &Rational::zero(), &cert.s).is_zero() {
                    out.q = Some(q);
                    out.rho = Some(Rho::Rational(cert.s.clone()));
                    out.kappa = Some(Kappa::Identity);
                    return Ok(out);
                }
            }
            Family::B => {
                let t0 = cert.x0.recip();
                let x = cert.x.clone().unwrap_or_else(|| x_from_s(&t0, &cert.s));
                if p.eval(&t0, &Rational::zero(), &x).is_zero() {
                    out.q = Some(q);
                    out.rho = Some(Rho::Rational(x));
                    out.kappa = Some(Kappa::Identity);
                    return Ok(out);
                }
                let sq = QuadElem::new(d, Rational::zero(), Rational::one());
                let one = QuadElem::from_rational(d, Rational::one());
                let rho = sq.scale(&x).div(&one.add(&sq))?;
                if eval_quad(p, &t0, &rho)?.is_zero() {
                    out.q = Some(q);
                    out.rho = Some(Rho::Quadratic(rho));
                    out.kappa = Some(Kappa::HalfIntegral);
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::IdentityTable;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pinned_values() {
        let t = IdentityTable::embedded().unwrap();
        let polys = AppendixPolys::embedded().unwrap();
        let c = derive_s(t.row(-120, None).unwrap());
        assert_eq!(c.s, q(2250, 6517));
        let c = certify_root(&c, polys).unwrap();
        assert_eq!((c.q, c.kappa), (Some(5), Some(Kappa::Identity)));

        let c = derive_s(t.row(-19, None).unwrap());
        assert_eq!(c.s, q(15309, 15808));
        assert_eq!(c.x, Some(q(10240, 60021)));
        let c = certify_root(&c, polys).unwrap();
        assert_eq!((c.q, c.kappa), (Some(5), Some(Kappa::HalfIntegral)));
        let expect = QuadElem::new(-19, q(512 * 19, 60021), q(512, 60021));
        assert_eq!(c.rho, Some(Rho::Quadratic(expect.clone())));
        let back = kappa_times_rho(-19, &expect).unwrap();
        assert!(back.b.is_zero());
        assert_eq!(s_from_x(&q(-2187, 1024), &back.a), q(15309, 15808));
    }

    #[test]
    fn uncertified_row_is_reported() {
        let t = IdentityTable::embedded().unwrap();
        let mut row = t.row(-120, None).unwrap().clone();
        row.r2 += Rational::one();
        let c = certify_root(&derive_s(&row), AppendixPolys::embedded().unwrap()).unwrap();
        assert!(!c.is_certified());
        assert!(c.to_json().contains("no small-prime certificate"));

        let good = certify_root(&derive_s(t.row(-84, None).unwrap()), AppendixPolys::embedded().unwrap()).unwrap();
        let polys = AppendixPolys::embedded().unwrap();
        let p7 = polys.get(7).unwrap() + &crate::polys::MPoly::one();
        assert!(!certify_root(&good, &polys.with_poly(7, p7)).unwrap().is_certified());
    }
}
