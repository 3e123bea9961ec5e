//! Cached fixed-point constants.

use super::mag::Mag;
use super::real::BigReal;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Mutex;

/// A fixed-point value `v * 2^-w` within `err_units * 2^-w` of the constant.
#[derive(Clone)]
struct Fixed {
    w: u64,
    v: BigInt,
    err_units: u64,
}

static PI: Mutex<Option<Fixed>> = Mutex::new(None);
static LN2: Mutex<Option<Fixed>> = Mutex::new(None);

/// `sum (+-1)^n / ((2n+1) k^(2n+1))` in fixed point, with its error in units.
fn arctan_series(k: u64, w: u64, alternating: bool) -> (BigInt, u64) {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = (BigInt::one() << w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if alternating && n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= &k2;
        n += 1;
    }
    (sum, 3 * n + 3)
}

fn compute_pi(w: u64) -> Fixed {
    let (a, ea) = arctan_series(5, w, true);
    let (b, eb) = arctan_series(239, w, true);
    Fixed { w, v: a * 16 - b * 4, err_units: 16 * ea + 4 * eb }
}

fn compute_ln2(w: u64) -> Fixed {
    let (a, ea) = arctan_series(3, w, false);
    Fixed { w, v: a * 2, err_units: 2 * ea + 4 }
}

fn cached(slot: &Mutex<Option<Fixed>>, prec: u32, f: fn(u64) -> Fixed) -> BigReal {
    let w = u64::from(prec) + 32;
    let fixed = {
        let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
        match guard.as_ref() {
            Some(c) if c.w >= w => c.clone(),
            _ => {
                let c = f(w.max(guard.as_ref().map_or(0, |c| c.w * 3 / 2)));
                *guard = Some(c.clone());
                c
            }
        }
    };
    let err = Mag::from_u64(fixed.err_units).mul_2exp(-(fixed.w as i64));
    BigReal::from_parts(fixed.v, -(fixed.w as i64), err, prec)
}

/// π to `prec` bits (Machin's arctangent formula).
pub fn pi(prec: u32) -> BigReal {
    cached(&PI, prec, compute_pi)
}

/// ln 2 to `prec` bits (`2 artanh(1/3)`).
pub fn ln2(prec: u32) -> BigReal {
    cached(&LN2, prec, compute_ln2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_known_digits() {
        let p = pi(256);
        assert!(p.to_sci_string(40).starts_with("3.14159265358979323846264338327"));
        assert!(p.error_exponent().unwrap() < -250);
    }

    #[test]
    fn ln2_matches_known_digits() {
        let l = ln2(200);
        assert!(l.to_sci_string(25).starts_with("6.93147180559945309417232"));
    }

    #[test]
    fn cache_serves_lower_precisions() {
        let hi = pi(600);
        let lo = pi(100);
        assert!(hi.sub(&lo).abs_upper() < Mag::pow2(-95));
    }
}
