//! Prime-dependent constants used by presentations.

use crate::error::{Error, Result};
use serde::Serialize;

/// An odd prime with its least quadratic non-residue and least primitive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeParams {
    pub p: u64,
    pub nu: u64,
    pub omega: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Multiplicative order of `a` modulo prime `p`.
pub fn mult_order(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

pub fn resolve_params(p: u64) -> Result<PrimeParams> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let nu = (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).expect("non-residue exists");
    let omega = (2..p).find(|&a| mult_order(a, p) == p - 1).expect("primitive root exists");
    Ok(PrimeParams { p, nu, omega })
}

/// Inverse of `a` modulo prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(resolve_params(3).unwrap(), PrimeParams { p: 3, nu: 2, omega: 2 });
        assert_eq!(resolve_params(5).unwrap(), PrimeParams { p: 5, nu: 2, omega: 2 });
        assert_eq!(resolve_params(7).unwrap(), PrimeParams { p: 7, nu: 3, omega: 3 });
    }

    #[test]
    fn rejects_non_odd_primes() {
        for n in [0, 1, 2, 4, 9, 15, 91] {
            assert_eq!(resolve_params(n), Err(Error::InvalidPrime(n)));
        }
    }

    #[test]
    fn defining_congruences_up_to_97() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            let pp = resolve_params(p).unwrap();
            assert_eq!(pow_mod(pp.nu, (p - 1) / 2, p), p - 1);
            for a in 1..pp.nu {
                assert_ne!(pow_mod(a, (p - 1) / 2, p), p - 1);
            }
            assert_eq!(mult_order(pp.omega, p), p - 1);
            for a in 2..pp.omega {
                assert_ne!(mult_order(a, p), p - 1);
            }
        }
    }
}
