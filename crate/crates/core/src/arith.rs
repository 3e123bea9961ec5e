//! Kronecker characters, class numbers and the optimal-embedding count.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A negative discriminant `d ≡ 0, 1 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Discriminant {
    pub d: i64,
    pub is_fundamental: bool,
}

fn squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Discriminant> {
        if d >= 0 || d.rem_euclid(4) > 1 {
            return Err(Error::Domain(format!("{d} is not a negative discriminant")));
        }
        let is_fundamental = if d.rem_euclid(4) == 1 {
            squarefree(d)
        } else {
            let m = d / 4;
            squarefree(m) && matches!(m.rem_euclid(4), 2 | 3)
        };
        Ok(Discriminant { d, is_fundamental })
    }

    /// Largest `f` with `d / f^2` a discriminant, together with that
    /// fundamental discriminant.
    pub fn conductor(&self) -> (i64, i64) {
        let mut best = (1, self.d);
        let mut f = 2;
        while f * f <= self.d.abs() {
            if self.d % (f * f) == 0 {
                if let Ok(d0) = Discriminant::new(self.d / (f * f)) {
                    if d0.is_fundamental {
                        best = (f, d0.d);
                    }
                }
            }
            f += 1;
        }
        best
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i32 {
    assert!(n > 0 && n % 2 == 1, "jacobi needs an odd positive modulus");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)`.
pub fn kronecker(d: Discriminant, n: i64) -> i32 {
    kronecker_raw(d.d, n)
}

pub(crate) fn kronecker_raw(d: i64, n: i64) -> i32 {
    if n == 0 {
        return i32::from(d.abs() == 1);
    }
    let mut r = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            r = -r;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        if matches!(d.rem_euclid(8), 3 | 5) {
            r = -r;
        }
    }
    r * jacobi(d, n)
}

/// Number of reduced primitive forms `ax^2 + bxy + cy^2` of discriminant `d`,
/// with `|b| <= a <= c` and `b >= 0` whenever `|b| = a` or `a = c`.
pub fn class_number(d: Discriminant) -> u64 {
    let d = d.d;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Number of roots of unity in the order of discriminant `d`.
pub fn unit_count(d: Discriminant) -> u32 {
    match d.d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Number of optimal embeddings of the order of discriminant `d` into the
/// maximal order of the rational quaternion algebra of discriminant 6, up to
/// conjugation by its normalizer. Only fundamental `d` are supported.
pub fn embedding_count(d: Discriminant) -> Result<u64> {
    if !d.is_fundamental {
        return Err(Error::Unsupported(format!("embedding count needs a fundamental discriminant, got {}", d.d)));
    }
    if matches!(d.d, -3 | -4 | -24) {
        return Ok(1);
    }
    let f2 = (1 - kronecker(d, 2)) as u64;
    let f3 = (1 - kronecker(d, 3)) as u64;
    let num = class_number(d) * f2 * f3;
    if !num.is_multiple_of(4) {
        return Err(Error::Data(format!("embedding count for {} is not integral", d.d)));
    }
    Ok(num / 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn fundamental_flags() {
        assert!(disc(-4).is_fundamental);
        assert!(disc(-3).is_fundamental);
        assert!(disc(-120).is_fundamental);
        assert!(!disc(-75).is_fundamental);
        assert!(!disc(-100).is_fundamental);
        assert!(!disc(-16).is_fundamental);
        assert!(Discriminant::new(-5).is_err());
        assert_eq!(disc(-147).conductor(), (7, -3));
        assert_eq!(disc(-120).conductor(), (1, -120));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(disc(-4), 3), -1);
        assert_eq!(kronecker(disc(-3), 2), -1);
        assert_eq!(kronecker(disc(-24), 5), 1);
        // brute force: x^2 = -24 mod 5 solvable
        assert!((0..5).any(|x: i64| (x * x + 24).rem_euclid(5) == 0));
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(disc(-4)), 1);
        assert_eq!(class_number(disc(-23)), 3);
        assert_eq!(class_number(disc(-19)), 1);
        assert_eq!(class_number(disc(-120)), 4);
    }

    #[test]
    fn units_and_embeddings() {
        assert_eq!(unit_count(disc(-3)), 6);
        assert_eq!(unit_count(disc(-4)), 4);
        assert_eq!(unit_count(disc(-120)), 2);
        assert_eq!(embedding_count(disc(-24)).unwrap(), 1);
        assert_eq!(embedding_count(disc(-43)).unwrap(), 1);
        assert_eq!(embedding_count(disc(-120)).unwrap(), 1);
        assert!(embedding_count(disc(-75)).is_err());
    }
}
