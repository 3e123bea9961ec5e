use super::mag::{ldexp, Mag};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A real number `man * 2^exp` carried at `prec` mantissa bits, together with
/// a bound `err` on the distance to the exact value it stands for.
#[derive(Clone, Debug)]
pub struct BigReal {
    man: BigInt,
    exp: i64,
    err: Mag,
    prec: u32,
}

fn round_to(man: BigInt, exp: i64, prec: u32) -> (BigInt, i64, Mag) {
    let bits = man.bits();
    if bits <= u64::from(prec) {
        return (man, exp, Mag::ZERO);
    }
    let s = bits - u64::from(prec);
    let half = BigInt::one() << (s - 1);
    let m: BigInt = (man + half) >> s;
    (m, exp + s as i64, Mag::pow2(exp + s as i64 - 1))
}

impl BigReal {
    pub(crate) fn from_parts(man: BigInt, exp: i64, err: Mag, prec: u32) -> BigReal {
        let (man, exp, r) = round_to(man, exp, prec);
        let exp = if man.is_zero() { 0 } else { exp };
        BigReal { man, exp, err: err.add(r), prec }
    }

    pub fn zero(prec: u32) -> BigReal {
        BigReal { man: BigInt::zero(), exp: 0, err: Mag::ZERO, prec }
    }

    pub fn one(prec: u32) -> BigReal {
        BigReal::from_int(1, prec)
    }

    pub fn from_int(x: impl Into<BigInt>, prec: u32) -> BigReal {
        BigReal::from_parts(x.into(), 0, Mag::ZERO, prec)
    }

    /// Correctly bracketed conversion of an exact rational.
    pub fn from_rational(q: &BigRational, prec: u32) -> BigReal {
        let (n, d) = (q.numer(), q.denom());
        if n.is_zero() {
            return BigReal::zero(prec);
        }
        if d.is_one() {
            return BigReal::from_int(n.clone(), prec);
        }
        if let Some(tz) = d.trailing_zeros() {
            if (d >> tz).is_one() {
                return BigReal::from_parts(n.clone(), -(tz as i64), Mag::ZERO, prec);
            }
        }
        let s = i64::from(prec) + 2 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if s >= 0 { (n << s as u64, d.clone()) } else { (n.clone(), d << (-s) as u64) };
        let man = num / den;
        BigReal::from_parts(man, -s, Mag::pow2(-s), prec)
    }

    pub fn from_ratio(n: i64, d: i64, prec: u32) -> BigReal {
        BigReal::from_rational(&BigRational::new(n.into(), d.into()), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-rounds to a new mantissa size.
    pub fn with_prec(&self, prec: u32) -> BigReal {
        BigReal::from_parts(self.man.clone(), self.exp, self.err, prec)
    }

    pub fn error_bound(&self) -> Mag {
        self.err
    }

    /// `e` such that the stored value is within `2^e` of the exact one;
    /// `None` when the value is exact.
    pub fn error_exponent(&self) -> Option<i64> {
        self.err.log2_ceil()
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Widens the error bound by `extra`.
    pub fn add_error(mut self, extra: Mag) -> BigReal {
        self.err = self.err.add(extra);
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero_value(&self) -> bool {
        self.man.is_zero()
    }

    /// Upper bound on `|stored value|`.
    pub fn value_mag_up(&self) -> Mag {
        Mag::from_big_up(self.man.magnitude(), self.exp)
    }

    /// Lower bound on `|stored value|`.
    pub fn value_mag_down(&self) -> Mag {
        Mag::from_big_down(self.man.magnitude(), self.exp)
    }

    /// Upper bound on the absolute value of the exact number.
    pub fn abs_upper(&self) -> Mag {
        self.value_mag_up().add(self.err)
    }

    /// Lower bound on the absolute value of the exact number.
    pub fn abs_lower(&self) -> Mag {
        self.value_mag_down().sub_down(self.err)
    }

    /// Sign of the stored value (-1, 0, 1).
    pub fn sign(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Sign of the exact number if the error bound determines it.
    pub fn certain_sign(&self) -> Option<i32> {
        if self.abs_lower().is_zero() {
            None
        } else {
            Some(self.sign())
        }
    }

    /// `floor(log2 |value|)`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.man.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn neg(&self) -> BigReal {
        BigReal { man: -&self.man, ..self.clone() }
    }

    pub fn abs(&self) -> BigReal {
        BigReal { man: self.man.abs(), ..self.clone() }
    }

    pub fn mul_2exp(&self, k: i64) -> BigReal {
        BigReal {
            man: self.man.clone(),
            exp: if self.man.is_zero() { 0 } else { self.exp + k },
            err: self.err.mul_2exp(k),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        let err = self.err.add(o.err);
        if o.man.is_zero() {
            return BigReal::from_parts(self.man.clone(), self.exp, err, prec);
        }
        if self.man.is_zero() {
            return BigReal::from_parts(o.man.clone(), o.exp, err, prec);
        }
        let cut = self.top().max(o.top()) - i64::from(prec) - 8;
        let mut err = err;
        let mut parts = Vec::with_capacity(2);
        for x in [self, o] {
            if x.exp < cut {
                let (m, e, r) = round_to(x.man.clone(), x.exp, (x.top() - cut).max(1) as u32);
                err = err.add(r);
                parts.push((m, e));
            } else {
                parts.push((x.man.clone(), x.exp));
            }
        }
        let e = parts[0].1.min(parts[1].1);
        let sum = (&parts[0].0 << (parts[0].1 - e) as u64) + (&parts[1].0 << (parts[1].1 - e) as u64);
        BigReal::from_parts(sum, e, err, prec)
    }

    pub fn sub(&self, o: &BigReal) -> BigReal {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        let err = self
            .value_mag_up()
            .mul(o.err)
            .add(o.value_mag_up().mul(self.err))
            .add(self.err.mul(o.err));
        BigReal::from_parts(&self.man * &o.man, self.exp + o.exp, err, prec)
    }

    pub fn square(&self) -> BigReal {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> BigReal {
        let km = Mag::from_big_up(k.magnitude(), 0);
        BigReal::from_parts(&self.man * k, self.exp, self.err.mul(km), self.prec)
    }

    pub fn mul_i64(&self, k: i64) -> BigReal {
        self.mul_int(&BigInt::from(k))
    }

    pub fn div_int(&self, k: &BigInt) -> BigReal {
        assert!(!k.is_zero(), "division by zero");
        let s = i64::from(self.prec) + 2 + k.bits() as i64 - self.man.bits() as i64;
        let s = s.max(0);
        let q = (&self.man << s as u64) / k;
        let exp = self.exp - s;
        let kl = Mag::from_big_down(k.magnitude(), 0);
        let err = self.err.div(kl).add(Mag::pow2(exp));
        BigReal::from_parts(q, exp, err, self.prec)
    }

    pub fn div_i64(&self, k: i64) -> BigReal {
        self.div_int(&BigInt::from(k))
    }

    pub fn mul_rat(&self, q: &BigRational) -> BigReal {
        self.mul_int(q.numer()).div_int(q.denom())
    }

    pub fn div(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        if o.man.is_zero() {
            return BigReal { man: BigInt::zero(), exp: 0, err: Mag::INF, prec };
        }
        let s = i64::from(prec) + 2 + o.man.bits() as i64 - self.man.bits() as i64;
        let s = s.max(0);
        let q = (&self.man << s as u64) / &o.man;
        let exp = self.exp - o.exp - s;
        let lower = o.abs_lower();
        let ratio = self.value_mag_up().div(o.value_mag_down());
        let err = self.err.add(ratio.mul(o.err)).div(lower).add(Mag::pow2(exp));
        BigReal::from_parts(q, exp, err, prec)
    }

    pub fn recip(&self) -> BigReal {
        BigReal::one(self.prec).div(self)
    }

    pub fn powi(&self, n: i64) -> BigReal {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = BigReal::one(self.prec);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Square root; a stored value that is negative only within its error
    /// bound is treated as zero.
    pub fn sqrt(&self) -> BigReal {
        let prec = self.prec;
        if self.man.is_zero() || (self.man.is_negative() && self.abs_lower().is_zero()) {
            let bound = self.abs_upper().sqrt();
            return BigReal { man: BigInt::zero(), exp: 0, err: bound, prec };
        }
        assert!(!self.man.is_negative(), "square root of a negative number");
        let mut k = (2 * i64::from(prec) + 4 - self.man.bits() as i64).max(0);
        if (self.exp - k) % 2 != 0 {
            k += 1;
        }
        let r = (&self.man << k as u64).sqrt();
        let exp = (self.exp - k) / 2;
        let vd = self.value_mag_down();
        let prop = if self.err.is_zero() {
            Mag::ZERO
        } else {
            self.err.div(vd.sqrt_down()).min_with(self.err.sqrt())
        };
        BigReal::from_parts(r, exp, prop.add(Mag::pow2(exp)), prec)
    }

    /// Exact comparison of stored values.
    pub fn cmp_value(&self, o: &BigReal) -> std::cmp::Ordering {
        let d = self.sub_exact(o);
        d.sign().cmp(&0)
    }

    fn sub_exact(&self, o: &BigReal) -> BigReal {
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        BigReal { man: a - b, exp: e, err: Mag::ZERO, prec: u32::MAX }
    }

    /// Relative distance `|self - o| / |o|` as an upper bound (including both
    /// error bounds).
    pub fn rel_diff_upper(&self, o: &BigReal) -> Mag {
        let d = self.sub(o);
        d.abs_upper().div(o.abs_lower())
    }

    /// Integer nearest to the value (ties away from zero are irrelevant here).
    pub fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let s = (-self.exp) as u64;
        (&self.man + (BigInt::one() << (s - 1))) >> s
    }

    /// Exact rational equal to the stored value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let s = bits.saturating_sub(60);
        let top = (&self.man >> s).to_i64().unwrap();
        ldexp(top as f64, self.exp + s as i64)
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.man.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let l2 = self.log2_floor().unwrap() as f64;
        let mut e10 = (l2 * std::f64::consts::LOG10_2).floor() as i64;
        let abs = self.man.abs();
        let scaled = |e10: i64| -> BigInt {
            let s = digits as i64 - 1 - e10;
            let (mut num, mut den) = (abs.clone(), BigInt::one());
            if s >= 0 {
                num *= BigInt::from(10).pow(s as u32);
            } else {
                den *= BigInt::from(10).pow((-s) as u32);
            }
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            let (q, r) = num.div_rem(&den);
            if r * 2 >= den { q + 1 } else { q }
        };
        let mut n = scaled(e10);
        let lim = BigInt::from(10).pow(digits as u32);
        if n >= lim {
            e10 += 1;
            n = scaled(e10);
        } else if n < lim.clone() / 10 {
            e10 -= 1;
            n = scaled(e10);
        }
        let s = n.to_string();
        let sign = if self.man.is_negative() { "-" } else { "" };
        if s.len() == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
        }
    }
}

impl Mag {
    pub(crate) fn min_with(self, o: Mag) -> Mag {
        if self <= o { self } else { o }
    }
}

/// Integer `floor(x^(1/n))` for nonnegative `x`.
pub(crate) fn int_root(x: &BigInt, n: u32) -> BigInt {
    x.nth_root(n)
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_sci_string(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, o: &BigReal) -> bool {
        self.cmp_value(o) == std::cmp::Ordering::Equal && self.err == o.err
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_conversion_brackets_the_value() {
        let x = BigReal::from_rational(&q(1, 3), 100);
        let diff = (x.to_rational() - q(1, 3)).abs();
        assert!(diff <= BigRational::new(1.into(), BigInt::one() << 100u32));
        assert!(Mag::from_big_up(diff.numer().magnitude(), 0).div(Mag::from_big_down(diff.denom().magnitude(), 0)) <= x.error_bound());
        assert!(BigReal::from_rational(&q(3, 8), 64).is_exact());
    }

    #[test]
    fn arithmetic_round_trip() {
        let p = 200;
        let a = BigReal::from_rational(&q(22, 7), p);
        let b = BigReal::from_rational(&q(-5, 13), p);
        let c = a.mul(&b).div(&b);
        assert!(c.sub(&a).abs_upper() < Mag::pow2(-190));
        let s = a.add(&b).sub(&a);
        assert!(s.sub(&b).abs_upper() < Mag::pow2(-190));
    }

    #[test]
    fn sqrt_of_two_squares_back() {
        let r = BigReal::from_int(2, 300).sqrt();
        let back = r.square();
        assert!(back.sub(&BigReal::from_int(2, 300)).abs_upper() < Mag::pow2(-290));
        assert!(BigReal::from_int(49, 64).sqrt().cmp_value(&BigReal::from_int(7, 64)).is_eq());
    }

    #[test]
    fn error_bound_covers_truth() {
        let p = 80;
        let mut acc = BigReal::zero(p);
        let mut exact = BigRational::zero();
        for k in 1..200i64 {
            acc = acc.add(&BigReal::from_rational(&q(1, k), p));
            exact += q(1, k);
        }
        let d = (acc.to_rational() - exact).abs();
        let dm = Mag::from_big_up(d.numer().magnitude(), 0).div(Mag::from_big_down(d.denom().magnitude(), 0));
        assert!(dm <= acc.error_bound());
    }

    #[test]
    fn decimal_rendering() {
        let x = BigReal::from_rational(&q(1, 3), 128);
        assert_eq!(x.to_sci_string(5), "3.3333e-1");
        assert_eq!(BigReal::from_int(-12345, 64).to_sci_string(3), "-1.23e4");
    }
}
