//! Nonnegative dyadic magnitudes with directed rounding, used for error bounds.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;

const MBITS: u32 = 32;
const E_INF: i64 = 1 << 40;

/// A nonnegative number `m * 2^e` with a 32-bit normalized mantissa.
///
/// Every constructor and operation comes in a rounding direction; the plain
/// operations round up, which is what error bounds need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0, e: 0 };
    /// Saturated "no information" bound.
    pub const INF: Mag = Mag { m: 1 << (MBITS - 1), e: E_INF };

    fn norm(m: u128, e: i64, up: bool) -> Mag {
        if m == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - m.leading_zeros();
        let (mut m, mut e) = if bits > MBITS {
            let s = bits - MBITS;
            let hi = m >> s;
            let lost = m & ((1u128 << s) - 1) != 0;
            (hi + u128::from(up && lost), e + i64::from(s))
        } else {
            let s = MBITS - bits;
            (m << s, e - i64::from(s))
        };
        if m >> MBITS != 0 {
            m >>= 1;
            e += 1;
        }
        if e >= E_INF {
            return Mag::INF;
        }
        if e < -E_INF {
            return if up { Mag { m: 1 << (MBITS - 1), e: -E_INF } } else { Mag::ZERO };
        }
        Mag { m: m as u64, e }
    }

    pub fn pow2(e: i64) -> Mag {
        Mag::norm(1, e, true)
    }

    pub fn from_u64(x: u64) -> Mag {
        Mag::norm(u128::from(x), 0, true)
    }

    /// Upper bound for `x * 2^e`.
    pub fn from_big_up(x: &BigUint, e: i64) -> Mag {
        Self::from_big(x, e, true)
    }

    /// Lower bound for `x * 2^e`.
    pub fn from_big_down(x: &BigUint, e: i64) -> Mag {
        Self::from_big(x, e, false)
    }

    fn from_big(x: &BigUint, e: i64, up: bool) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let bits = x.bits();
        if bits <= 64 {
            return Mag::norm(u128::from(x.to_u64().unwrap()), e, up);
        }
        let s = bits - 64;
        let hi: u128 = (x >> s).to_u64().unwrap().into();
        let lost = up && x.trailing_zeros().is_some_and(|tz| tz < s);
        Mag::norm(hi + u128::from(lost), e + s as i64, up)
    }

    /// Upper bound for a finite nonnegative f64.
    pub fn from_f64_up(x: f64) -> Mag {
        assert!(x >= 0.0 && x.is_finite());
        if x == 0.0 {
            return Mag::ZERO;
        }
        let (m, e) = frexp(x);
        Mag::norm(u128::from((m * (1u64 << 53) as f64) as u64), i64::from(e) - 53, true)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    pub fn is_inf(&self) -> bool {
        self.e >= E_INF
    }

    /// Smallest `k` with `self <= 2^k`, or `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.m == 0 {
            return None;
        }
        let bits = 64 - i64::from(self.m.leading_zeros());
        let pow = self.m.is_power_of_two();
        Some(self.e + bits - i64::from(pow))
    }

    /// Largest `k` with `2^k <= self`, or `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.m == 0 {
            return None;
        }
        Some(self.e + 63 - i64::from(self.m.leading_zeros()))
    }

    pub fn mul_2exp(self, k: i64) -> Mag {
        if self.m == 0 {
            return self;
        }
        Mag::norm(u128::from(self.m), self.e.saturating_add(k), true)
    }

    pub fn add(self, o: Mag) -> Mag {
        self.add_dir(o, true)
    }

    pub fn add_down(self, o: Mag) -> Mag {
        self.add_dir(o, false)
    }

    fn add_dir(self, o: Mag, up: bool) -> Mag {
        if self.m == 0 {
            return o;
        }
        if o.m == 0 {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d >= 90 {
            return Mag::norm(u128::from(hi.m) + u128::from(up), hi.e, up);
        }
        Mag::norm((u128::from(hi.m) << d) + u128::from(lo.m), lo.e, up)
    }

    /// Lower bound for `self - o`, clamped at zero.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.m == 0 {
            return self;
        }
        if self <= o {
            return Mag::ZERO;
        }
        let d = self.e - o.e;
        if d >= 90 {
            return Mag::norm(u128::from(self.m) - 1, self.e, false);
        }
        Mag::norm((u128::from(self.m) << d) - u128::from(o.m), o.e, false)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.m == 0 || o.m == 0 {
            return Mag::ZERO;
        }
        Mag::norm(u128::from(self.m) * u128::from(o.m), self.e.saturating_add(o.e), true)
    }

    pub fn mul_down(self, o: Mag) -> Mag {
        if self.m == 0 || o.m == 0 {
            return Mag::ZERO;
        }
        Mag::norm(u128::from(self.m) * u128::from(o.m), self.e.saturating_add(o.e), false)
    }

    /// Upper bound for `self / o`; `o` should be a lower bound of the divisor.
    pub fn div(self, o: Mag) -> Mag {
        if self.m == 0 {
            return Mag::ZERO;
        }
        if o.m == 0 {
            return Mag::INF;
        }
        let n = u128::from(self.m) << 64;
        let d = u128::from(o.m);
        let q = n / d + u128::from(n % d != 0);
        Mag::norm(q, self.e - o.e - 64, true)
    }

    /// Lower bound for `self / o`; `o` should be an upper bound of the divisor.
    pub fn div_down(self, o: Mag) -> Mag {
        if self.m == 0 || o.is_inf() {
            return Mag::ZERO;
        }
        if o.m == 0 {
            return Mag::INF;
        }
        let q = (u128::from(self.m) << 64) / u128::from(o.m);
        Mag::norm(q, self.e - o.e - 64, false)
    }

    pub fn sqrt(self) -> Mag {
        self.sqrt_dir(true)
    }

    pub fn sqrt_down(self) -> Mag {
        self.sqrt_dir(false)
    }

    fn sqrt_dir(self, up: bool) -> Mag {
        if self.m == 0 {
            return self;
        }
        let (m, e) = if self.e % 2 == 0 { (u128::from(self.m), self.e) } else { (u128::from(self.m) << 1, self.e - 1) };
        let n = m << 64;
        let mut r = (n as f64).sqrt() as u128;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        let exact = r * r == n;
        Mag::norm(r + u128::from(up && !exact), (e - 64) / 2, up)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o { self } else { o }
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.m as f64, self.e)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.m == 0, other.m == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&other.e).then(self.m.cmp(&other.m)),
        }
    }
}

/// `x * 2^e` without intermediate overflow for moderate results.
pub fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

fn frexp(x: f64) -> (f64, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_mul_round_up() {
        let a = Mag::from_u64(3);
        let b = Mag::from_u64(5);
        assert_eq!(a.add(b), Mag::from_u64(8));
        assert_eq!(a.mul(b), Mag::from_u64(15));
        let third = Mag::from_u64(1).div(Mag::from_u64(3));
        assert!(third.mul(Mag::from_u64(3)) >= Mag::from_u64(1));
        assert!(Mag::from_u64(1).div_down(Mag::from_u64(3)).mul(Mag::from_u64(3)) <= Mag::from_u64(1));
    }

    #[test]
    fn log2_bounds() {
        assert_eq!(Mag::pow2(-10).log2_ceil(), Some(-10));
        assert_eq!(Mag::from_u64(5).log2_ceil(), Some(3));
        assert_eq!(Mag::from_u64(5).log2_floor(), Some(2));
        assert_eq!(Mag::ZERO.log2_ceil(), None);
    }

    #[test]
    fn sub_and_sqrt() {
        let a = Mag::from_u64(10).sub_down(Mag::from_u64(3));
        assert_eq!(a, Mag::from_u64(7));
        assert_eq!(Mag::from_u64(3).sub_down(Mag::from_u64(4)), Mag::ZERO);
        assert_eq!(Mag::from_u64(16).sqrt(), Mag::from_u64(4));
        assert!(Mag::from_u64(2).sqrt().to_f64() >= std::f64::consts::SQRT_2);
    }

    #[test]
    fn big_conversions_bracket() {
        let x = BigUint::from(3u32).pow(100);
        let up = Mag::from_big_up(&x, -5);
        let down = Mag::from_big_down(&x, -5);
        assert!(down <= up);
        let f = 3f64.powi(100) / 32.0;
        assert!(down.to_f64() <= f * (1.0 + 1e-12) && up.to_f64() >= f * (1.0 - 1e-12));
    }
}
