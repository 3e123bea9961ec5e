//! The Hecke operator `T_5` on `S_k(X6*)`: table loading, the power sums of
//! the ratios `F|γ_j / F`, Newton's identities and elimination to `P_5`.

use crate::datafile::{parse_rational, read_checksummed};
use crate::error::{Error, Result};
use crate::numkernel::Rational;
use crate::polys::{primitive_part, resultant, BiPolyQ, MPoly, PolyQ, Var};
use crate::quaternion::dim_sk;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `T_5` matrices on the weight-`k` bases, `k = 8, 16, ..., 48`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeTable {
    entries: BTreeMap<u32, Vec<Vec<Rational>>>,
}

const HECKE_FILE: &str = "hecke_t5.txt";
const HECKE_TEXT: &str = include_str!("../data/hecke_t5.txt");

impl HeckeTable {
    pub fn parse(file: &str, text: &str) -> Result<HeckeTable> {
        let lines = read_checksummed(file, text)?;
        let perr = |line: usize, msg: String| Error::Parse { file: file.into(), line, msg };
        let mut entries: BTreeMap<u32, Vec<Vec<Rational>>> = BTreeMap::new();
        let mut current: Option<(u32, usize)> = None;
        for l in &lines {
            if let Some(k) = l.text.strip_prefix("weight ") {
                if let Some((k0, d)) = current {
                    if entries[&k0].len() != d {
                        return Err(perr(l.number, format!("weight {k0} has {} rows, expected {d}", entries[&k0].len())));
                    }
                }
                let k: u32 = k.trim().parse().map_err(|_| perr(l.number, format!("bad weight {k}")))?;
                let d = dim_sk(k).map_err(|e| perr(l.number, e.to_string()))? as usize;
                if entries.insert(k, Vec::new()).is_some() {
                    return Err(perr(l.number, format!("weight {k} repeated")));
                }
                current = Some((k, d));
                continue;
            }
            let (k, d) = current.ok_or_else(|| perr(l.number, "row before any weight line".into()))?;
            let row: Vec<Rational> = l
                .text
                .split_whitespace()
                .map(|s| parse_rational(s).ok_or_else(|| perr(l.number, format!("bad rational {s}"))))
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(perr(l.number, format!("row of length {} for weight {k}, expected {d}", row.len())));
            }
            let m = entries.get_mut(&k).unwrap();
            if m.len() == d {
                return Err(perr(l.number, format!("too many rows for weight {k}")));
            }
            m.push(row);
        }
        if let Some((k, d)) = current {
            if entries[&k].len() != d {
                return Err(perr(0, format!("weight {k} has {} rows, expected {d}", entries[&k].len())));
            }
        }
        Ok(HeckeTable { entries })
    }

    /// The table shipped with the crate, parsed once.
    pub fn embedded() -> Result<&'static HeckeTable> {
        static CELL: OnceLock<std::result::Result<HeckeTable, Error>> = OnceLock::new();
        CELL.get_or_init(|| HeckeTable::parse(HECKE_FILE, HECKE_TEXT)).as_ref().map_err(|e| e.clone())
    }

    pub fn weights(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn matrix(&self, k: u32) -> Option<&Vec<Vec<Rational>>> {
        self.entries.get(&k)
    }

    /// Copy with entry `(i, j)` of the weight-`k` matrix replaced.
    pub fn with_entry(&self, k: u32, i: usize, j: usize, value: Rational) -> Result<HeckeTable> {
        let mut t = self.clone();
        let cell = t
            .entries
            .get_mut(&k)
            .and_then(|m| m.get_mut(i))
            .and_then(|r| r.get_mut(j))
            .ok_or_else(|| Error::Domain(format!("no entry ({i}, {j}) at weight {k}")))?;
        *cell = value;
        Ok(t)
    }
}

/// `p_ℓ(t) = Σ_j r_j^ℓ` for `ℓ = 1..6`; `p[0]` is `p_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    pub p: Vec<PolyQ>,
}

/// Reads `T_5 F^ℓ` off the last row of the weight-`8ℓ` matrix, rewrites the
/// basis ratios as powers of `u = -540/t` and scales by `5^{1-4ℓ}`.
pub fn power_sum_polys(table: &HeckeTable) -> Result<PowerSums> {
    let mut p = Vec::with_capacity(6);
    let inv_u = Rational::new(BigInt::from(-1), BigInt::from(540));
    for l in 1..=6u32 {
        let k = 8 * l;
        let m = table.matrix(k).ok_or_else(|| Error::Data(format!("Hecke table lacks weight {k}")))?;
        let d = m.len();
        let row = &m[d - 1];
        let mut c = vec![Rational::zero(); d];
        for (j, mj) in row.iter().enumerate() {
            // g_j / g_{d-1} = u^{j-(d-1)} = (t / -540)^{d-1-j}
            let n = d - 1 - j;
            c[n] += mj * num_traits::pow(inv_u.clone(), n);
        }
        let scale = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(5), (4 * l - 1) as usize));
        let poly = PolyQ::new(c).scale(&scale);
        if poly.degree().unwrap_or(0) > (l / 3) as usize {
            return Err(Error::Data(format!("p_{l} has degree {:?}, above {}", poly.degree(), l / 3)));
        }
        p.push(poly);
    }
    Ok(PowerSums { p })
}

/// `e_1..e_6` from `p_1..p_6` via `k e_k = Σ_{i=1}^k (-1)^{i-1} e_{k-i} p_i`;
/// the result includes `e_0 = 1`.
pub fn elementary_from_power_sums(ps: &[PolyQ]) -> Vec<PolyQ> {
    let mut e = vec![PolyQ::constant(Rational::one())];
    for k in 1..=ps.len() {
        let mut acc = PolyQ::zero();
        for i in 1..=k {
            let term = &e[k - i] * &ps[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
    }
    e
}

/// Inverse of `elementary_from_power_sums`; `e[0]` must be 1.
pub fn power_sums_from_elementary(e: &[PolyQ]) -> Vec<PolyQ> {
    let n = e.len() - 1;
    let mut p: Vec<PolyQ> = Vec::with_capacity(n);
    for k in 1..=n {
        // p_k = Σ_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
        let mut acc = e[k].scale(&rat(k as i64));
        if k % 2 == 0 {
            acc = acc.scale(&rat(-1));
        }
        for i in 1..k {
            let term = &e[i] * &p[k - i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        p.push(acc);
    }
    p
}

/// `Q(x, y) = Σ_k (-1)^k e_k(x) y^k = ∏_j (1 - r_j y)`.
pub fn newton_to_q(ps: &PowerSums) -> BiPolyQ {
    let e = elementary_from_power_sums(&ps.p);
    let mut q = MPoly::zero();
    for (k, ek) in e.iter().enumerate() {
        let mut c = MPoly::from_poly(ek, Var::X);
        if k % 2 == 1 {
            c = -&c;
        }
        q = &q + &(&c * &MPoly::var(Var::Y).pow(k as u32));
    }
    q
}

fn d_dx(p: &MPoly) -> MPoly {
    MPoly::from_terms(p.terms().filter(|(e, _)| e[0] > 0).map(|(e, c)| ([e[0] - 1, e[1], e[2]], c * rat(e[0] as i64))))
}

fn d_dy(p: &MPoly) -> MPoly {
    MPoly::from_terms(p.terms().filter(|(e, _)| e[1] > 0).map(|(e, c)| ([e[0], e[1] - 1, e[2]], c * rat(e[1] as i64))))
}

/// The companion `∂Q/∂x + y z ∂Q/∂y` of `Q`.
pub fn elimination_partner(q: &BiPolyQ) -> BiPolyQ {
    let yz = &MPoly::var(Var::Y) * &MPoly::var(Var::Z);
    &d_dx(q) + &(&yz * &d_dy(q))
}

/// Outcome of eliminating `y`.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub resultant: BiPolyQ,
    /// Primitive part with respect to `z`.
    pub primitive: BiPolyQ,
    /// `resultant / primitive`, a polynomial in `x` alone.
    pub content: BiPolyQ,
}

/// `res_y(Q, ∂Q/∂x + yz ∂Q/∂y)` and its primitive part in `z`.
pub fn eliminate_to_p(q: &BiPolyQ) -> Result<Elimination> {
    if q.is_zero() || q.degree(Var::Y).unwrap_or(0) == 0 {
        return Err(Error::Domain("Q must have positive degree in y".into()));
    }
    let b = elimination_partner(q);
    if b.is_zero() {
        return Err(Error::Domain("degenerate Q: partner polynomial vanishes".into()));
    }
    let r = resultant(q, &b, Var::Y)?;
    if r.is_zero() {
        return Err(Error::Domain("degenerate Q: resultant vanishes".into()));
    }
    let prim = primitive_part(&r, Var::Z)?;
    let content = r.div_exact(&prim)?;
    Ok(Elimination { resultant: r, primitive: prim, content })
}

/// How an elimination output relates to a target polynomial.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub divides_resultant: bool,
    pub equals_primitive: bool,
    /// `primitive / target` when the division is exact.
    pub cofactor: Option<BiPolyQ>,
}

pub fn compare_with(el: &Elimination, target: &BiPolyQ) -> Comparison {
    let divides = el.resultant.div_exact(target).is_ok();
    let cof = el.primitive.div_exact(target).ok();
    Comparison { divides_resultant: divides, equals_primitive: el.primitive == *target, cofactor: cof }
}

/// Eliminates `y` after specializing `x = x0`, giving a polynomial in `z`.
pub fn eliminate_at(q: &BiPolyQ, x0: &Rational) -> Result<PolyQ> {
    let b = elimination_partner(q).eval_var(Var::X, x0);
    let a = q.eval_var(Var::X, x0);
    resultant(&a, &b, Var::Y)?.to_poly(Var::Z)
}

/// `Q` reconstructed from the shipped table.
pub fn reconstruct_q() -> Result<BiPolyQ> {
    Ok(newton_to_q(&power_sum_polys(HeckeTable::embedded()?)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polys::AppendixPolys;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn big(s: &str) -> Rational {
        Rational::from_integer(s.parse().unwrap())
    }

    fn pow5(k: usize) -> Rational {
        Rational::from_integer(num_traits::pow(BigInt::from(5), k))
    }

    #[test]
    fn table_shape() {
        let t = HeckeTable::embedded().unwrap();
        assert_eq!(t.weights(), vec![8, 16, 24, 32, 40, 48]);
        for k in t.weights() {
            assert_eq!(t.matrix(k).unwrap().len() as i64, dim_sk(k).unwrap());
        }
        let bad = crate::datafile::with_checksum("weight 24\n1 2\n");
        assert!(HeckeTable::parse("t", &bad).is_err());
    }

    #[test]
    fn power_sums() {
        let ps = power_sum_polys(HeckeTable::embedded().unwrap()).unwrap();
        assert_eq!(ps.p[0], PolyQ::constant(q(-114, 125)));
        let p3 = PolyQ::new(vec![rat(14267406), rat(-103680000)]).scale(&pow5(11).recip());
        assert_eq!(ps.p[2], p3);
        assert_eq!(ps.p[5].coeff(2), big("8957952000000000") / pow5(23));
        for (l, p) in ps.p.iter().enumerate() {
            assert!(p.degree().unwrap_or(0) <= (l + 1) / 3);
        }
    }

    #[test]
    fn newton_round_trip() {
        let toy = PowerSums { p: vec![PolyQ::constant(rat(6)); 6] };
        let qq = newton_to_q(&toy);
        let binom = [1, 6, 15, 20, 15, 6, 1];
        for (k, b) in binom.iter().enumerate() {
            let s = if k % 2 == 1 { -b } else { *b };
            assert_eq!(qq.coeff_of([0, k as u32, 0]), rat(s));
        }
        let ps = power_sum_polys(HeckeTable::embedded().unwrap()).unwrap();
        let e = elementary_from_power_sums(&ps.p);
        assert_eq!(power_sums_from_elementary(&e), ps.p);
    }

    #[test]
    fn q_coefficients() {
        let qq = reconstruct_q().unwrap();
        let cy = |k: usize| qq.coeffs_in(Var::Y)[k].to_poly(Var::X).unwrap();
        assert_eq!(cy(0), PolyQ::constant(rat(1)));
        assert_eq!(cy(1), PolyQ::constant(q(114, 125)));
        assert_eq!(cy(2), PolyQ::constant(q(-6333, 78125)));
        assert_eq!(cy(3), PolyQ::new(vec![rat(-5177953), rat(8640000)]).scale(&(rat(4) / pow5(11))));
        let lin = PolyQ::new(vec![rat(14641), rat(138240)]);
        assert_eq!(cy(6), (&lin * &lin).scale(&pow5(16).recip()));
    }

    #[test]
    fn toy_elimination() {
        let x = MPoly::var(Var::X);
        let y = MPoly::var(Var::Y);
        let z = MPoly::var(Var::Z);
        let toy = &MPoly::one() - &(&y * &x);
        let el = eliminate_to_p(&toy).unwrap();
        assert_eq!(el.primitive, &MPoly::one() + &(&x * &z));
        assert!(eliminate_to_p(&x).is_err());
    }

    #[test]
    fn p5_from_table() {
        let qq = reconstruct_q().unwrap();
        let el = eliminate_to_p(&qq).unwrap();
        let p5 = AppendixPolys::embedded().unwrap().get(5).unwrap();
        let cmp = compare_with(&el, p5);
        assert!(cmp.divides_resultant);
        assert!(cmp.equals_primitive);
        assert!(!el.content.uses(Var::Z));
        let at = eliminate_at(&qq, &q(-2401, 3375)).unwrap();
        assert_eq!(at.rational_roots(), vec![q(2250, 6517)]);
    }
}
