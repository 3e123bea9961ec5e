//! Exact polynomials over Q and Q(√d): univariate dense polynomials with
//! Sturm-based real and rational roots, sparse polynomials in `x, y, z`,
//! resultants, primitive parts and the auxiliary polynomials `P_q(x, z)`.

use crate::datafile::read_checksummed;
use crate::error::{Error, Result};
use crate::numkernel::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense univariate polynomial, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    c: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut c: Vec<Rational>) -> PolyQ {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        PolyQ { c }
    }

    pub fn from_ints(c: &[i64]) -> PolyQ {
        PolyQ::new(c.iter().map(|&v| rat(v)).collect())
    }

    pub fn zero() -> PolyQ {
        PolyQ { c: Vec::new() }
    }

    pub fn constant(r: Rational) -> PolyQ {
        PolyQ::new(vec![r])
    }

    /// The polynomial `x`.
    pub fn x() -> PolyQ {
        PolyQ::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lc(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> PolyQ {
        PolyQ::new(self.c.iter().map(|v| v * r).collect())
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ::new(self.c.iter().enumerate().skip(1).map(|(k, v)| v * rat(k as i64)).collect())
    }

    pub fn monic(&self) -> PolyQ {
        if self.is_zero() {
            return PolyQ::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn divrem(&self, d: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let dd = d.degree().ok_or_else(|| Error::Singular("polynomial division by zero".into()))?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((PolyQ::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let inv = d.lc().recip();
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &inv;
            if !f.is_zero() {
                for (j, dv) in d.c.iter().enumerate() {
                    r[k + j] -= &f * dv;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        Ok((PolyQ::new(q), PolyQ::new(r)))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).unwrap().1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`.
    pub fn squarefree_part(&self) -> PolyQ {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).unwrap().0
    }

    /// Primitive integer model with positive leading coefficient.
    pub fn integer_model(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let s = if ints.last().unwrap().is_negative() { -g } else { g };
        ints.into_iter().map(|v| v / &s).collect()
    }

    fn sturm_chain(&self) -> Vec<PolyQ> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].divrem(&chain[n - 1]).unwrap().1;
            if r.is_zero() {
                break;
            }
            chain.push(r.neg_poly());
        }
        chain
    }

    fn neg_poly(&self) -> PolyQ {
        PolyQ::new(self.c.iter().map(|v| -v.clone()).collect())
    }

    fn sign_changes(chain: &[PolyQ], x: &Rational) -> usize {
        let mut last = 0;
        let mut n = 0;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Upper bound on the absolute value of every root.
    pub fn root_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self.c.iter().take(self.c.len().saturating_sub(1)).map(|v| v.abs() / &lc).fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Disjoint intervals `(a, b]`, one per distinct real root, each narrower
    /// than `width`. Exact rational roots come back as `(r, r)`.
    pub fn isolate_real_roots(&self, width: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.squarefree_part();
        let chain = p.sturm_chain();
        let count = |a: &Rational, b: &Rational| Self::sign_changes(&chain, a) - Self::sign_changes(&chain, b);
        let bnd = p.root_bound();
        let mut stack = vec![(-bnd.clone(), bnd)];
        let mut out = Vec::new();
        let two = rat(2);
        while let Some((a, b)) = stack.pop() {
            let n = count(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                let (mut a, mut b) = (a, b);
                if p.eval(&b).is_zero() {
                    out.push((b.clone(), b));
                    continue;
                }
                while &b - &a >= *width {
                    let m = (&a + &b) / &two;
                    if p.eval(&m).is_zero() {
                        a = m.clone();
                        b = m;
                        break;
                    }
                    if count(&a, &m) == 1 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                out.push((a, b));
                continue;
            }
            let m = (&a + &b) / &two;
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
        out.sort();
        out
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let p = self.squarefree_part();
        let chain = p.sturm_chain();
        let b = p.root_bound();
        Self::sign_changes(&chain, &-b.clone()) - Self::sign_changes(&chain, &b)
    }

    /// All rational roots, ascending. Each real root is isolated to width below
    /// `1/(2L^2)`, `L` the leading coefficient of the integer model, so the
    /// simplest rational in the interval is the only candidate; it is then
    /// checked by exact evaluation.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sq = self.squarefree_part();
        let model = sq.integer_model();
        let l = model.last().unwrap().abs();
        let width = Rational::new(BigInt::one(), BigInt::from(2) * &l * &l);
        let mut out = Vec::new();
        for (a, b) in sq.isolate_real_roots(&width) {
            let cand = simplest_rational(&a, &b);
            if self.eval(&cand).is_zero() {
                out.push(cand);
            }
        }
        out
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, o: &PolyQ) -> PolyQ {
        let n = self.c.len().max(o.c.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, o: &PolyQ) -> PolyQ {
        let n = self.c.len().max(o.c.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyQ::new(c)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let sep = if first { if v.is_negative() { "-" } else { "" } } else if v.is_negative() { " - " } else { " + " };
            write!(f, "{sep}{}", v.abs())?;
            match k {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// The rational with the smallest denominator in `[a, b]`.
pub fn simplest_rational(a: &Rational, b: &Rational) -> Rational {
    if a > b {
        return simplest_rational(b, a);
    }
    if !a.is_positive() && !b.is_negative() {
        return Rational::zero();
    }
    if b.is_negative() {
        return -simplest_rational(&-b.clone(), &-a.clone());
    }
    let c = a.ceil();
    if c <= *b {
        return c;
    }
    let fl = a.floor();
    let inner = simplest_rational(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

/// Variable index in `MPoly`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Var {
    fn idx(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        ["x", "y", "z"][self.idx()]
    }
}

/// Sparse polynomial in `x, y, z` over Q; keys ordered lexicographically with
/// `x > y > z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<[u32; 3], Rational>,
}

/// Bivariate view used for `P_q(x, z)` and `Q(x, y)`.
pub type BiPolyQ = MPoly;

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn constant(r: Rational) -> MPoly {
        MPoly::monomial(r, [0, 0, 0])
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rational::one())
    }

    pub fn var(v: Var) -> MPoly {
        let mut e = [0; 3];
        e[v.idx()] = 1;
        MPoly::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, e: [u32; 3]) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ([u32; 3], Rational)>) -> MPoly {
        let mut p = MPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: [u32; 3], c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0, 0])
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&[0, 0, 0]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, e: [u32; 3]) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<([u32; 3], Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))
    }

    pub fn degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.idx()]).max()
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.idx()] > 0)
    }

    pub fn scale(&self, r: &Rational) -> MPoly {
        if r.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut r = MPoly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Coefficients as a polynomial in `v`, ascending.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let d = match self.degree(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![MPoly::zero(); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[v.idx()] = 0;
            out[e[v.idx()] as usize].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, cs: &[MPoly]) -> MPoly {
        let mut p = MPoly::zero();
        for (k, c) in cs.iter().enumerate() {
            for (e, val) in &c.terms {
                let mut e2 = *e;
                e2[v.idx()] += k as u32;
                p.add_term(e2, val.clone());
            }
        }
        p
    }

    /// Substitutes `v = value`.
    pub fn eval_var(&self, v: Var, value: &Rational) -> MPoly {
        let mut p = MPoly::zero();
        let mut powers: Vec<Rational> = vec![Rational::one()];
        for (e, c) in &self.terms {
            let k = e[v.idx()] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut e2 = *e;
            e2[v.idx()] = 0;
            p.add_term(e2, c * &powers[k]);
        }
        p
    }

    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        self.eval_var(Var::X, x).eval_var(Var::Y, y).eval_var(Var::Z, z).constant_term()
    }

    /// Substitutes `v = q`, a polynomial.
    pub fn substitute(&self, v: Var, q: &MPoly) -> MPoly {
        let cs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Univariate view; fails if another variable occurs.
    pub fn to_poly(&self, v: Var) -> Result<PolyQ> {
        let mut c = Vec::new();
        for (e, val) in &self.terms {
            if (0..3).any(|i| i != v.idx() && e[i] > 0) {
                return Err(Error::Domain(format!("polynomial is not univariate in {}", v.name())));
            }
            let k = e[v.idx()] as usize;
            if c.len() <= k {
                c.resize(k + 1, Rational::zero());
            }
            c[k] = val.clone();
        }
        Ok(PolyQ::new(c))
    }

    pub fn from_poly(p: &PolyQ, v: Var) -> MPoly {
        MPoly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = [0; 3];
            e[v.idx()] = k as u32;
            (e, c.clone())
        }))
    }

    /// Exact quotient; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Result<MPoly> {
        let (de, dc) = d.leading().ok_or_else(|| Error::Singular("division by the zero polynomial".into()))?;
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((e, c)) = r.leading() {
            if (0..3).any(|i| e[i] < de[i]) {
                return Err(Error::Domain("inexact polynomial division".into()));
            }
            let m = MPoly::monomial(c / &dc, [e[0] - de[0], e[1] - de[1], e[2] - de[2]]);
            r = &r - &(&m * d);
            q = &q + &m;
        }
        Ok(q)
    }

    /// Multiplies through by the lcm of denominators and divides by the gcd of
    /// numerators; the leading term ends up positive.
    pub fn integer_normalize(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let l = self.terms.values().fold(BigInt::one(), |a, v| a.lcm(v.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |a, v| a.gcd(v));
        if self.leading().unwrap().1.is_negative() {
            g = -g;
        }
        MPoly { terms: self.terms.keys().zip(ints).map(|(e, v)| (*e, Rational::from_integer(v / &g))).collect() }
    }

    /// Coefficients as integers, if all are integral.
    pub fn integer_terms(&self) -> Option<Vec<([u32; 3], BigInt)>> {
        self.terms.iter().map(|(e, c)| c.is_integer().then(|| (*e, c.to_integer()))).collect()
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&rat(-1))
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sep = if first { if c.is_negative() { "-" } else { "" } } else if c.is_negative() { " - " } else { " + " };
            write!(f, "{sep}")?;
            let a = c.abs();
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { ["x", "y", "z"][i].to_string() } else { format!("{}^{}", ["x", "y", "z"][i], e[i]) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
            first = false;
        }
        Ok(())
    }
}

fn lc_of(p: &[MPoly]) -> &MPoly {
    p.last().unwrap()
}

fn trim(mut p: Vec<MPoly>) -> Vec<MPoly> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder of `a` by `b` as polynomials in one variable.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return r;
    }
    let delta = r.len() - 1 - db;
    let lb = lc_of(b).clone();
    let mut steps = 0;
    while r.len() > db && !r.is_empty() {
        let lr = lc_of(&r).clone();
        let shift = r.len() - 1 - db;
        let mut nr: Vec<MPoly> = r.iter().map(|c| c * &lb).collect();
        for (j, bc) in b.iter().enumerate() {
            nr[j + shift] = &nr[j + shift] - &(&lr * bc);
        }
        nr.pop();
        r = trim(nr);
        steps += 1;
    }
    let missing = delta + 1 - steps;
    let f = lb.pow(missing as u32);
    r.iter().map(|c| c * &f).collect()
}

/// Resultant with respect to `v` by the subresultant PRS.
pub fn resultant(a: &MPoly, b: &MPoly, v: Var) -> Result<MPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("resultant of the zero polynomial".into()));
    }
    let mut pa = a.coeffs_in(v);
    let mut pb = b.coeffs_in(v);
    let mut s = MPoly::one();
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
        if (pa.len() - 1) % 2 == 1 && (pb.len() - 1) % 2 == 1 {
            s = -&s;
        }
    }
    if pb.len() == 1 {
        return Ok(&s * &pb[0].pow((pa.len() - 1) as u32));
    }
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let da = pa.len() - 1;
        let db = pb.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -&s;
        }
        let r = prem(&pa, &pb);
        if r.is_empty() {
            return Ok(MPoly::zero());
        }
        let den = &g * &h.pow(delta);
        pa = pb;
        pb = r.iter().map(|c| c.div_exact(&den)).collect::<Result<Vec<_>>>()?;
        g = lc_of(&pa).clone();
        h = if delta == 0 { h } else { g.pow(delta).div_exact(&h.pow(delta - 1))? };
        if pb.len() == 1 {
            let da = (pa.len() - 1) as u32;
            let res = pb[0].pow(da).div_exact(&h.pow(da - 1))?;
            return Ok(&s * &res);
        }
    }
}

/// `res_y(A, B)`.
pub fn resultant_y(a: &BiPolyQ, b: &BiPolyQ) -> Result<BiPolyQ> {
    if a.degree(Var::Y).unwrap_or(0) == 0 || b.degree(Var::Y).unwrap_or(0) == 0 {
        return Err(Error::Domain("resultant needs positive degree in y".into()));
    }
    resultant(a, b, Var::Y)
}

/// Resultant as the Sylvester determinant, by fraction-free elimination.
pub fn sylvester_resultant(a: &MPoly, b: &MPoly, v: Var) -> Result<MPoly> {
    let pa = a.coeffs_in(v);
    let pb = b.coeffs_in(v);
    if pa.is_empty() || pb.is_empty() {
        return Err(Error::Domain("resultant of the zero polynomial".into()));
    }
    let (m, n) = (pa.len() - 1, pb.len() - 1);
    let size = m + n;
    if size == 0 {
        return Ok(MPoly::one());
    }
    let mut mat = vec![vec![MPoly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in pa.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in pb.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square matrix of polynomials.
pub fn bareiss_det(mut mat: Vec<Vec<MPoly>>) -> Result<MPoly> {
    let n = mat.len();
    let mut sign = MPoly::one();
    let mut prev = MPoly::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = -&sign;
                }
                None => return Ok(MPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = t.div_exact(&prev)?;
            }
        }
        prev = mat[k][k].clone();
    }
    Ok(&sign * &mat[n - 1][n - 1])
}

/// Content of `p` as a polynomial in `wrt`, for `p` involving at most one
/// other variable.
pub fn content(p: &MPoly, wrt: Var) -> Result<MPoly> {
    if p.is_zero() {
        return Err(Error::Domain("content of the zero polynomial".into()));
    }
    let others: Vec<Var> = [Var::X, Var::Y, Var::Z].into_iter().filter(|&v| v != wrt && p.uses(v)).collect();
    match others.as_slice() {
        [] => Ok(MPoly::one()),
        [o] => {
            let mut g = PolyQ::zero();
            for c in p.coeffs_in(wrt) {
                if !c.is_zero() {
                    g = g.gcd(&c.to_poly(*o)?);
                }
            }
            Ok(MPoly::from_poly(&g, *o))
        }
        _ => Err(Error::Unsupported("content over more than one coefficient variable".into())),
    }
}

/// `p` divided by its content, scaled to a primitive integer polynomial whose
/// leading term is positive.
pub fn primitive_part(p: &MPoly, wrt: Var) -> Result<MPoly> {
    let c = content(p, wrt)?;
    Ok(p.div_exact(&c)?.integer_normalize())
}

/// `a + b√d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub d: i64,
    pub a: Rational,
    pub b: Rational,
}

impl QuadElem {
    pub fn new(d: i64, a: Rational, b: Rational) -> QuadElem {
        QuadElem { d, a, b }
    }

    pub fn from_rational(d: i64, a: Rational) -> QuadElem {
        QuadElem::new(d, a, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem::new(self.d, self.a.clone(), -self.b.clone())
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(self.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        rat(2) * &self.a
    }

    fn same(&self, o: &QuadElem) {
        assert_eq!(self.d, o.d, "mixing quadratic fields");
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        self.same(o);
        QuadElem::new(self.d, &self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        self.same(o);
        QuadElem::new(self.d, &self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        self.same(o);
        QuadElem::new(self.d, &self.a * &o.a + rat(self.d) * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }

    pub fn scale(&self, r: &Rational) -> QuadElem {
        QuadElem::new(self.d, &self.a * r, &self.b * r)
    }

    pub fn inv(&self) -> Result<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Singular(format!("{self} is not invertible")));
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &QuadElem) -> Result<QuadElem> {
        Ok(self.mul(&o.inv()?))
    }

    /// Minimal polynomial `z^2 - tr z + N` (or `z - a` when rational).
    pub fn minimal_polynomial(&self) -> PolyQ {
        if self.b.is_zero() {
            PolyQ::new(vec![-self.a.clone(), Rational::one()])
        } else {
            PolyQ::new(vec![self.norm(), -self.trace(), Rational::one()])
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            let s = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{} {} {}*sqrt({})", self.a, s, self.b.abs(), self.d)
        }
    }
}

/// Univariate polynomial over `Q(√d)`, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyQuad {
    pub d: i64,
    pub coeffs: Vec<QuadElem>,
}

impl PolyQuad {
    pub fn from_polyq(p: &PolyQ, d: i64) -> PolyQuad {
        PolyQuad { d, coeffs: p.coeffs().iter().map(|c| QuadElem::from_rational(d, c.clone())).collect() }
    }

    pub fn eval(&self, z: &QuadElem) -> QuadElem {
        let mut acc = QuadElem::from_rational(self.d, Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }
}

/// `P(x, z)` at rational `x` and quadratic `z`.
pub fn eval_quad(p: &BiPolyQ, x: &Rational, z: &QuadElem) -> Result<QuadElem> {
    if p.uses(Var::Y) {
        return Err(Error::Domain("eval_quad expects a polynomial in x and z".into()));
    }
    let pz = p.eval_var(Var::X, x).to_poly(Var::Z)?;
    Ok(PolyQuad::from_polyq(&pz, z.d).eval(z))
}

/// The auxiliary polynomials `P_q(x, z)` for `q ∈ {5, 7, 11, 13}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixPolys {
    polys: BTreeMap<u32, BiPolyQ>,
}

const APPENDIX_FILE: &str = "appendix_polys.txt";
const APPENDIX_TEXT: &str = include_str!("../data/appendix_polys.txt");

impl AppendixPolys {
    /// Parses the monomial-per-line format.
    pub fn parse(file: &str, text: &str) -> Result<AppendixPolys> {
        let lines = read_checksummed(file, text)?;
        let perr = |line: usize, msg: String| Error::Parse { file: file.into(), line, msg };
        let mut polys = BTreeMap::new();
        let mut current: Option<(u32, MPoly)> = None;
        for l in lines {
            let toks: Vec<&str> = l.text.split_whitespace().collect();
            match toks.as_slice() {
                ["poly", name] => {
                    if current.is_some() {
                        return Err(perr(l.number, "nested poly block".into()));
                    }
                    let q = name.strip_prefix('P').and_then(|s| s.parse().ok()).ok_or_else(|| perr(l.number, format!("bad name {name}")))?;
                    current = Some((q, MPoly::zero()));
                }
                ["end"] => {
                    let (q, p) = current.take().ok_or_else(|| perr(l.number, "end without poly".into()))?;
                    if polys.insert(q, p).is_some() {
                        return Err(perr(l.number, format!("P{q} defined twice")));
                    }
                }
                [c, xe, ze] => {
                    let (_, p) = current.as_mut().ok_or_else(|| perr(l.number, "monomial outside a block".into()))?;
                    let c: BigInt = c.parse().map_err(|_| perr(l.number, format!("bad coefficient {c}")))?;
                    let i: u32 = xe.strip_prefix("x^").and_then(|s| s.parse().ok()).ok_or_else(|| perr(l.number, format!("bad x exponent {xe}")))?;
                    let j: u32 = ze.strip_prefix("z^").and_then(|s| s.parse().ok()).ok_or_else(|| perr(l.number, format!("bad z exponent {ze}")))?;
                    if c.is_zero() || !p.coeff_of([i, 0, j]).is_zero() {
                        return Err(perr(l.number, "zero or repeated monomial".into()));
                    }
                    p.add_term([i, 0, j], Rational::from_integer(c));
                }
                _ => return Err(perr(l.number, format!("unrecognized line {:?}", l.text))),
            }
        }
        if current.is_some() {
            return Err(perr(0, "unterminated poly block".into()));
        }
        Ok(AppendixPolys { polys })
    }

    /// The data shipped with the crate, parsed once.
    pub fn embedded() -> Result<&'static AppendixPolys> {
        static CELL: OnceLock<std::result::Result<AppendixPolys, Error>> = OnceLock::new();
        CELL.get_or_init(|| AppendixPolys::parse(APPENDIX_FILE, APPENDIX_TEXT)).as_ref().map_err(|e| e.clone())
    }

    pub fn get(&self, q: u32) -> Option<&BiPolyQ> {
        self.polys.get(&q)
    }

    pub fn primes(&self) -> Vec<u32> {
        self.polys.keys().copied().collect()
    }

    /// A copy with `P_q` replaced.
    pub fn with_poly(&self, q: u32, p: BiPolyQ) -> AppendixPolys {
        let mut polys = self.polys.clone();
        polys.insert(q, p);
        AppendixPolys { polys }
    }

    /// Serializes in the data-file format, checksum included.
    pub fn to_text(&self) -> String {
        let mut body = String::from("# P_q(x, z), one monomial per line: c x^i z^j\n");
        for (q, p) in &self.polys {
            body.push_str(&format!("poly P{q}\n"));
            let mut terms: Vec<_> = p.terms().collect();
            terms.sort_by_key(|(e, _)| (std::cmp::Reverse(e[2]), std::cmp::Reverse(e[0])));
            for (e, c) in terms {
                body.push_str(&format!("{} x^{} z^{}\n", c, e[0], e[2]));
            }
            body.push_str("end\n");
        }
        crate::datafile::with_checksum(&body)
    }
}
