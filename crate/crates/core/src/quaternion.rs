//! The quaternion algebra `B = (-1, 3)/Q`, its maximal order, the embedding
//! `ι` into `M_2(Q(√3))`, elliptic points and CM fixed points.

use crate::arith::Discriminant;
use crate::error::{Error, Result};
use crate::numkernel::{BigComplex, BigReal, Precision, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a + b√3` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem3 {
    pub a: Rational,
    pub b: Rational,
}

impl QuadElem3 {
    pub fn new(a: Rational, b: Rational) -> QuadElem3 {
        QuadElem3 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> QuadElem3 {
        QuadElem3::new(rat(a), rat(b))
    }

    pub fn zero() -> QuadElem3 {
        QuadElem3::from_ints(0, 0)
    }

    pub fn one() -> QuadElem3 {
        QuadElem3::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> QuadElem3 {
        QuadElem3::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 3b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(3) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rational) -> QuadElem3 {
        QuadElem3::new(&self.a * r, &self.b * r)
    }

    pub fn inv(&self) -> Result<QuadElem3> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Singular("inverse of 0 in Q(√3)".into()));
        }
        Ok(self.conj().scale(&n.recip()))
    }

    /// Sign of `a + b√3`, exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let d = &self.a * &self.a - rat(3) * &self.b * &self.b;
        if d.is_positive() {
            sa
        } else {
            sb
        }
    }

    pub fn to_real(&self, wp: u32) -> BigReal {
        let s3 = BigReal::from_int(3, wp).sqrt();
        BigReal::from_rational(&self.a, wp).add(&s3.mul_rat(&self.b))
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for &QuadElem3 {
    type Output = QuadElem3;
    fn add(self, o: &QuadElem3) -> QuadElem3 {
        QuadElem3::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadElem3 {
    type Output = QuadElem3;
    fn sub(self, o: &QuadElem3) -> QuadElem3 {
        QuadElem3::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadElem3 {
    type Output = QuadElem3;
    fn mul(self, o: &QuadElem3) -> QuadElem3 {
        QuadElem3::new(&self.a * &o.a + rat(3) * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Neg for &QuadElem3 {
    type Output = QuadElem3;
    fn neg(self) -> QuadElem3 {
        QuadElem3::new(-self.a.clone(), -self.b.clone())
    }
}

impl fmt::Display for QuadElem3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√3", self.b),
            _ if self.b.is_negative() => write!(f, "{} - {}√3", self.a, -self.b.clone()),
            _ => write!(f, "{} + {}√3", self.a, self.b),
        }
    }
}

/// `x0 + x1 I + x2 J + x3 IJ` with `I^2 = -1`, `J^2 = 3`, `IJ = -JI`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuatQ {
    pub x: [Rational; 4],
}

impl QuatQ {
    pub fn new(x0: Rational, x1: Rational, x2: Rational, x3: Rational) -> QuatQ {
        QuatQ { x: [x0, x1, x2, x3] }
    }

    pub fn from_ints(x0: i64, x1: i64, x2: i64, x3: i64) -> QuatQ {
        QuatQ::new(rat(x0), rat(x1), rat(x2), rat(x3))
    }

    pub fn scalar(r: Rational) -> QuatQ {
        QuatQ::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn one() -> QuatQ {
        QuatQ::from_ints(1, 0, 0, 0)
    }

    pub fn i() -> QuatQ {
        QuatQ::from_ints(0, 1, 0, 0)
    }

    pub fn j() -> QuatQ {
        QuatQ::from_ints(0, 0, 1, 0)
    }

    pub fn ij() -> QuatQ {
        QuatQ::from_ints(0, 0, 0, 1)
    }

    pub fn conj(&self) -> QuatQ {
        let [a, b, c, d] = &self.x;
        QuatQ::new(a.clone(), -b.clone(), -c.clone(), -d.clone())
    }

    /// Reduced norm `x0^2 + x1^2 - 3 x2^2 - 3 x3^2`.
    pub fn norm(&self) -> Rational {
        let [a, b, c, d] = &self.x;
        a * a + b * b - rat(3) * (c * c + d * d)
    }

    /// Reduced trace `2 x0`.
    pub fn trace(&self) -> Rational {
        rat(2) * &self.x[0]
    }

    pub fn scale(&self, r: &Rational) -> QuatQ {
        QuatQ { x: self.x.clone().map(|v| v * r) }
    }

    pub fn is_pure(&self) -> bool {
        self.x[0].is_zero()
    }

    /// Membership in `Z + ZI + ZJ + Z(1+I+J+IJ)/2`.
    pub fn in_maximal_order(&self) -> bool {
        let two = rat(2);
        if !self.x.iter().all(|v| (v * &two).is_integer()) {
            return false;
        }
        let f0 = self.x[0].fract();
        self.x.iter().all(|v| (v - &f0).is_integer())
    }

    pub fn inv(&self) -> Result<QuatQ> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Singular("quaternion of norm 0".into()));
        }
        Ok(self.conj().scale(&n.recip()))
    }
}

impl Add for &QuatQ {
    type Output = QuatQ;
    fn add(self, o: &QuatQ) -> QuatQ {
        QuatQ { x: std::array::from_fn(|k| &self.x[k] + &o.x[k]) }
    }
}

impl Sub for &QuatQ {
    type Output = QuatQ;
    fn sub(self, o: &QuatQ) -> QuatQ {
        QuatQ { x: std::array::from_fn(|k| &self.x[k] - &o.x[k]) }
    }
}

impl Neg for &QuatQ {
    type Output = QuatQ;
    fn neg(self) -> QuatQ {
        QuatQ { x: std::array::from_fn(|k| -self.x[k].clone()) }
    }
}

impl Mul for &QuatQ {
    type Output = QuatQ;
    fn mul(self, o: &QuatQ) -> QuatQ {
        // (-1, 3): I^2 = -1, J^2 = 3, (IJ)^2 = 3
        let [a0, a1, a2, a3] = &self.x;
        let [b0, b1, b2, b3] = &o.x;
        let three = rat(3);
        let x0 = a0 * b0 - a1 * b1 + &three * a2 * b2 + &three * a3 * b3;
        let x1 = a0 * b1 + a1 * b0 - &three * a2 * b3 + &three * a3 * b2;
        let x2 = a0 * b2 + a2 * b0 - a1 * b3 + a3 * b1;
        let x3 = a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1;
        QuatQ::new(x0, x1, x2, x3)
    }
}

impl fmt::Display for QuatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "I", "J", "IJ"];
        let mut first = true;
        for (v, n) in self.x.iter().zip(names) {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let a = v.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if n.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{n}")?;
            } else {
                write!(f, "{a}{n}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `(1/√e) [[a, b], [c, d]]` with entries in `Q(√3)` and `e ∈ {1, 2, 3, 6}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2Q3 {
    pub m: [[QuadElem3; 2]; 2],
    pub inv_sqrt: u8,
}

impl Mat2Q3 {
    pub fn new(m: [[QuadElem3; 2]; 2], inv_sqrt: u8) -> Result<Mat2Q3> {
        if ![1, 2, 3, 6].contains(&inv_sqrt) {
            return Err(Error::Domain(format!("scale 1/√{inv_sqrt} not supported")));
        }
        Ok(Mat2Q3 { m, inv_sqrt })
    }

    pub fn identity() -> Mat2Q3 {
        Mat2Q3 { m: [[QuadElem3::one(), QuadElem3::zero()], [QuadElem3::zero(), QuadElem3::one()]], inv_sqrt: 1 }
    }

    pub fn mul(&self, o: &Mat2Q3) -> Mat2Q3 {
        let a = &self.m;
        let b = &o.m;
        let mut m: [[QuadElem3; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])));
        let e = u32::from(self.inv_sqrt) * u32::from(o.inv_sqrt);
        let (s, e2) = match e {
            1 | 2 | 3 | 6 => (1, e),
            4 => (2, 1),
            9 => (3, 1),
            12 => (2, 3),
            18 => (3, 2),
            36 => (6, 1),
            _ => unreachable!(),
        };
        if s != 1 {
            let r = Rational::new(BigInt::one(), BigInt::from(s));
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = v.scale(&r);
                }
            }
        }
        Mat2Q3 { m, inv_sqrt: e2 as u8 }
    }

    /// Exact determinant.
    pub fn det(&self) -> QuadElem3 {
        let m = &self.m;
        (&(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])).scale(&Rational::new(BigInt::one(), BigInt::from(self.inv_sqrt)))
    }

    /// Trace times `√e`, which lies in `Q(√3)`.
    pub fn scaled_trace(&self) -> QuadElem3 {
        &self.m[0][0] + &self.m[1][1]
    }

    /// True if the matrix is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1]
    }

    pub fn entries_real(&self, wp: u32) -> [[BigReal; 2]; 2] {
        let s = BigReal::from_int(i64::from(self.inv_sqrt), wp).sqrt();
        std::array::from_fn(|i| std::array::from_fn(|j| self.m[i][j].to_real(wp).div(&s)))
    }

    /// Möbius action `(aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: &BigComplex, wp: u32) -> BigComplex {
        let [[a, b], [c, d]] = self.entries_real(wp);
        let num = tau.mul_real(&a).add(&BigComplex::from_real(b));
        let den = tau.mul_real(&c).add(&BigComplex::from_real(d));
        num.div(&den)
    }
}

impl fmt::Display for Mat2Q3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv_sqrt != 1 {
            write!(f, "(1/√{}) ", self.inv_sqrt)?;
        }
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

/// `I ↦ [[0,-1],[1,0]]`, `J ↦ [[√3,0],[0,-√3]]`.
pub fn iota(q: &QuatQ) -> Mat2Q3 {
    let [x0, x1, x2, x3] = &q.x;
    let a = QuadElem3::new(x0.clone(), x2.clone());
    let d = QuadElem3::new(x0.clone(), -x2.clone());
    let b = QuadElem3::new(-x1.clone(), x3.clone());
    let c = QuadElem3::new(x1.clone(), x3.clone());
    Mat2Q3 { m: [[a, b], [c, d]], inv_sqrt: 1 }
}

fn scaled(q: QuatQ, e: u8) -> Mat2Q3 {
    Mat2Q3 { inv_sqrt: e, ..iota(&q) }
}

fn half(n: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(2))
}

/// Atkin-Lehner representatives `γ_1, γ_2, γ_3, γ_6`.
pub fn gamma1() -> Mat2Q3 {
    iota(&QuatQ::one())
}

pub fn gamma2() -> Mat2Q3 {
    scaled(QuatQ::from_ints(1, 1, 0, 0), 2)
}

pub fn gamma3() -> Mat2Q3 {
    scaled(QuatQ::new(half(3), half(3), half(1), half(1)), 3)
}

/// `(1/√6) ι(3I + IJ)`.
pub fn gamma6() -> Mat2Q3 {
    scaled(QuatQ::from_ints(0, 3, 0, 1), 6)
}

/// Generator of the isotropy group of `P_2`.
pub fn m2() -> Mat2Q3 {
    gamma6()
}

/// Generator of the isotropy group of `P_4`.
pub fn m4() -> Mat2Q3 {
    gamma2()
}

/// Generator of the isotropy group of `P_6`.
pub fn m6() -> Mat2Q3 {
    scaled(QuatQ::new(half(3), half(-3), half(1), half(-1)), 3)
}

/// `P_2 = (√6 - √2) i / 2`.
pub fn p2(wp: u32) -> BigComplex {
    let v = BigReal::from_int(6, wp).sqrt().sub(&BigReal::from_int(2, wp).sqrt()).mul_2exp(-1);
    BigComplex::new(BigReal::zero(wp), v)
}

/// `P_4 = i`.
pub fn p4(wp: u32) -> BigComplex {
    BigComplex::i(wp)
}

/// `P_6 = (-1 + i)/(1 + √3)`.
pub fn p6(wp: u32) -> BigComplex {
    let d = BigReal::one(wp).add(&BigReal::from_int(3, wp).sqrt());
    let r = BigReal::one(wp).div(&d);
    BigComplex::new(r.neg(), r)
}

/// `d_k = 1 - k + ⌊k/4⌋ + ⌊3k/8⌋ + ⌊5k/12⌋`.
pub fn dim_sk(k: u32) -> Result<i64> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Domain(format!("weight {k} must be even and at least 4")));
    }
    let k = i64::from(k);
    Ok(1 - k + k / 4 + 3 * k / 8 + 5 * k / 12)
}

/// Position of a CM fixed point on the boundary of the fundamental domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryClass {
    /// `a_2 = 0`, `t ∈ [0, 1]`.
    Segment01,
    /// `a_1 = 3 a_3`, `t ∈ [1, ∞)`.
    Ray1Inf,
    /// `a_2 = -a_3`, `t < 0`.
    NegativeArc,
    Interior,
}

impl fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryClass::Segment01 => "segment01",
            BoundaryClass::Ray1Inf => "ray_1_inf",
            BoundaryClass::NegativeArc => "negative_arc",
            BoundaryClass::Interior => "interior",
        })
    }
}

/// `α = φ(√D) = a_1 I + a_2 J + a_3 IJ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub d: Discriminant,
    pub alpha: QuatQ,
}

impl EmbeddingSpec {
    pub fn new(d: Discriminant, alpha: QuatQ) -> Result<EmbeddingSpec> {
        if !alpha.is_pure() {
            return Err(Error::Domain(format!("{alpha} has nonzero trace")));
        }
        if alpha.norm() != rat(-d.d) {
            return Err(Error::Domain(format!("N({alpha}) = {} but |D| = {}", alpha.norm(), -d.d)));
        }
        let e = EmbeddingSpec { d, alpha };
        if e.denominator().signum() <= 0 {
            return Err(Error::Domain("a1 + a3√3 must be positive".into()));
        }
        Ok(e)
    }

    pub fn from_coords(d: i64, a1: i64, a2: i64, a3: i64) -> Result<EmbeddingSpec> {
        EmbeddingSpec::new(Discriminant::new(d)?, QuatQ::from_ints(0, a1, a2, a3))
    }

    pub fn a1(&self) -> &Rational {
        &self.alpha.x[1]
    }

    pub fn a2(&self) -> &Rational {
        &self.alpha.x[2]
    }

    pub fn a3(&self) -> &Rational {
        &self.alpha.x[3]
    }

    /// `a_1 + a_3√3`.
    pub fn denominator(&self) -> QuadElem3 {
        QuadElem3::new(self.a1().clone(), self.a3().clone())
    }

    /// `τ_0 = (a_2√3 + √D)/(a_1 + a_3√3)`.
    pub fn fixed_point(&self, prec: Precision) -> Result<BigComplex> {
        let wp = prec.working();
        let den = self.denominator();
        if den.is_zero() {
            return Err(Error::Singular("a1 + a3√3 = 0".into()));
        }
        let den = den.to_real(wp);
        let re = QuadElem3::new(Rational::zero(), self.a2().clone()).to_real(wp).div(&den);
        let im = BigReal::from_int(-self.d.d, wp).sqrt().div(&den);
        Ok(BigComplex::new(re, im))
    }

    pub fn lemma5_classify(&self) -> BoundaryClass {
        if self.a2().is_zero() {
            BoundaryClass::Segment01
        } else if *self.a1() == rat(3) * self.a3() {
            BoundaryClass::Ray1Inf
        } else if *self.a2() == -self.a3().clone() {
            BoundaryClass::NegativeArc
        } else {
            BoundaryClass::Interior
        }
    }

    /// `φ(R_D) ⊂ 𝒪` and no larger order `R_{D/ℓ^2}` maps into `𝒪`.
    pub fn is_optimal(&self) -> bool {
        let d = self.d.d;
        let gen = |dd: i64, f: i64| (&QuatQ::scalar(rat(dd)) + &self.alpha.scale(&Rational::new(BigInt::one(), BigInt::from(f)))).scale(&half(1));
        if !self.alpha.in_maximal_order() || !gen(d, 1).in_maximal_order() {
            return false;
        }
        let mut l = 2i64;
        while l * l <= -d {
            if d % (l * l) == 0 && is_prime(l) {
                let d2 = d / (l * l);
                if d2.rem_euclid(4) <= 1 && gen(d2, l).in_maximal_order() {
                    return false;
                }
            }
            l += 1;
        }
        true
    }

    /// True if the fixed point lies on the boundary arc its class predicts.
    pub fn on_fundamental_boundary(&self) -> bool {
        let prec = Precision::new(64, 64).unwrap();
        let Ok(tau) = self.fixed_point(prec) else { return false };
        let (x, y) = (tau.re.to_f64(), tau.im.to_f64());
        let s3 = 3f64.sqrt();
        let p2 = (6f64.sqrt() - 2f64.sqrt()) / 2.0;
        let p6x = -1.0 / (1.0 + s3);
        let eps = 1e-12;
        match self.lemma5_classify() {
            BoundaryClass::Segment01 => x.abs() < eps && y >= p2 - eps && y <= 1.0 + eps,
            BoundaryClass::NegativeArc => x <= eps && x >= p6x - eps,
            BoundaryClass::Ray1Inf => x <= eps && x >= p6x - eps,
            BoundaryClass::Interior => false,
        }
    }
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Optimal embeddings `α = a_1 I + a_2 J + a_3 IJ` of the order of
/// discriminant `d` whose fixed point lies on the boundary piece of `class`,
/// for `|a_i| <= bound`.
pub fn search_embeddings(d: i64, class: BoundaryClass, bound: i64) -> Result<Vec<EmbeddingSpec>> {
    let disc = Discriminant::new(d)?;
    let mut out = Vec::new();
    for a1 in -bound..=bound {
        for a3 in -bound..=bound {
            let a2s: Vec<i64> = match class {
                BoundaryClass::Segment01 => vec![0],
                BoundaryClass::NegativeArc => vec![-a3],
                BoundaryClass::Ray1Inf if a1 == 3 * a3 => (-bound..=bound).collect(),
                BoundaryClass::Ray1Inf => continue,
                BoundaryClass::Interior => (-bound..=bound).collect(),
            };
            for a2 in a2s {
                if a1 * a1 - 3 * a2 * a2 - 3 * a3 * a3 != -d {
                    continue;
                }
                let Ok(e) = EmbeddingSpec::new(disc, QuatQ::from_ints(0, a1, a2, a3)) else { continue };
                if e.lemma5_classify() == class && e.is_optimal() && (class == BoundaryClass::Interior || e.on_fundamental_boundary()) {
                    out.push(e);
                }
            }
        }
    }
    Ok(out)
}

/// The unique optimal boundary embedding for `d` in `class`.
pub fn find_embedding(d: i64, class: BoundaryClass) -> Result<EmbeddingSpec> {
    let bound = 2 * (((-d) as f64).sqrt() as i64) + 8;
    let mut found = search_embeddings(d, class, bound)?;
    match found.len() {
        1 => Ok(found.remove(0)),
        0 => Err(Error::Data(format!("no optimal embedding for D = {d} on {class}"))),
        n => Err(Error::Data(format!("{n} optimal embeddings for D = {d} on {class}"))),
    }
}

/// Order of the image of `m` in `PSL_2`, up to `limit`.
pub fn projective_order(m: &Mat2Q3, limit: u32) -> Option<u32> {
    let mut p = m.clone();
    for k in 1..=limit {
        if p.is_scalar() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// Fixed-point residual `|mτ - τ|`.
pub fn fixes(m: &Mat2Q3, tau: &BigComplex, wp: u32) -> BigReal {
    m.act(tau, wp).sub(tau).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::Mag;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn norms_and_traces() {
        assert_eq!(QuatQ::from_ints(0, 6, -1, 1).norm(), rat(30));
        assert_eq!(QuatQ::from_ints(0, 5, -1, 1).norm(), rat(19));
        assert_eq!(QuatQ::i().trace(), rat(0));
        assert_eq!(QuatQ::i().norm(), rat(1));
        let a = QuatQ::from_ints(0, 6, -1, 1);
        assert_eq!(&a * &a, QuatQ::scalar(rat(-30)));
        assert_eq!(&QuatQ::i() * &QuatQ::j(), QuatQ::ij());
        assert_eq!(&QuatQ::j() * &QuatQ::i(), -&QuatQ::ij());
    }

    #[test]
    fn order_membership() {
        assert!(QuatQ::new(q(1, 2), q(1, 2), q(1, 2), q(1, 2)).in_maximal_order());
        assert!(QuatQ::from_ints(0, 6, -1, 1).in_maximal_order());
        assert!(!QuatQ::new(q(0, 1), q(1, 2), q(0, 1), q(0, 1)).in_maximal_order());
    }

    #[test]
    fn iota_minus_120() {
        let m = iota(&QuatQ::from_ints(0, 12, -2, 2));
        let e = |a, b| QuadElem3::from_ints(a, b);
        assert_eq!(m.m, [[e(0, -2), e(-12, 2)], [e(12, 2), e(0, 2)]]);
        assert_eq!(iota(&QuatQ::one()), Mat2Q3::identity());
    }

    #[test]
    fn atkin_lehner_matrices() {
        let e = |a, b| QuadElem3::from_ints(a, b);
        let h = |a, b| QuadElem3::new(q(a, 2), q(b, 2));
        assert_eq!(gamma3().m, [[h(3, 1), h(-3, 1)], [h(3, 1), h(3, -1)]]);
        assert_eq!(gamma6().m, [[e(0, 0), e(-3, 1)], [e(3, 1), e(0, 0)]]);
        assert_eq!(m6().m, [[h(3, 1), h(3, -1)], [h(-3, -1), h(3, -1)]]);
        for g in [gamma1(), gamma2(), gamma3(), gamma6(), m6()] {
            assert_eq!(g.det(), QuadElem3::one(), "{g}");
        }
    }

    #[test]
    fn elliptic_points() {
        let wp = 256;
        let tol = Mag::pow2(-240);
        assert!(fixes(&m2(), &p2(wp), wp).abs_upper() < tol);
        assert!(fixes(&m4(), &p4(wp), wp).abs_upper() < tol);
        assert!(fixes(&m6(), &p6(wp), wp).abs_upper() < tol);
        assert_eq!(projective_order(&m2(), 12), Some(2));
        assert_eq!(projective_order(&m4(), 12), Some(4));
        assert_eq!(projective_order(&m6(), 12), Some(6));
    }

    #[test]
    fn fixed_points() {
        let prec = Precision::new(200, 40).unwrap();
        let e = EmbeddingSpec::from_coords(-120, 12, -2, 2).unwrap();
        let tau = e.fixed_point(prec).unwrap();
        let wp = prec.working();
        let s3 = BigReal::from_int(3, wp).sqrt();
        let den = s3.add(&BigReal::from_int(6, wp));
        assert!(tau.re.sub(&s3.neg().div(&den)).abs_upper() < Mag::pow2(-200));
        assert!(tau.im.sub(&BigReal::from_int(30, wp).sqrt().div(&den)).abs_upper() < Mag::pow2(-200));
        assert!(fixes(&iota(&e.alpha), &tau, wp).abs_upper() < Mag::pow2(-200));
        assert_eq!(e.lemma5_classify(), BoundaryClass::NegativeArc);
        let e19 = EmbeddingSpec::from_coords(-19, 5, -1, 1).unwrap();
        assert_eq!(e19.lemma5_classify(), BoundaryClass::NegativeArc);
        assert!(e19.is_optimal() && e.is_optimal());
        assert!(EmbeddingSpec::from_coords(-120, -12, -2, 2).is_err());
        assert_eq!(EmbeddingSpec::from_coords(-52, 8, 0, 2).unwrap().lemma5_classify(), BoundaryClass::Segment01);
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_sk(8).unwrap(), 1);
        assert_eq!(dim_sk(24).unwrap(), 2);
        assert_eq!(dim_sk(48).unwrap(), 3);
        assert!(dim_sk(7).is_err());
    }

    #[test]
    fn embedding_search() {
        let e = find_embedding(-120, BoundaryClass::NegativeArc).unwrap();
        assert_eq!(e.alpha, QuatQ::from_ints(0, 12, -2, 2));
        let e = find_embedding(-19, BoundaryClass::NegativeArc).unwrap();
        assert_eq!(e.alpha, QuatQ::from_ints(0, 5, -1, 1));
        let e = find_embedding(-100, BoundaryClass::NegativeArc).unwrap();
        assert_eq!(e.alpha, QuatQ::from_ints(0, 14, -4, 4));
        let e = find_embedding(-75, BoundaryClass::NegativeArc).unwrap();
        assert_eq!(e.alpha, QuatQ::from_ints(0, 9, -1, 1));
    }
}
