use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= from`.
pub fn next_prime(from: u64) -> u64 {
    let mut p = from.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn divisors(m: u64) -> Vec<u64> {
    let mut out = alloc::vec![1u64];
    for (p, e) in factorize(m) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

fn positive(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("modulus must be at least 1".into()));
    }
    Ok(())
}

pub fn euler_phi(m: u64) -> Result<u64> {
    positive(m)?;
    Ok(factorize(m)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1)))
}

/// Carmichael's function: the exponent of `(Z/mZ)^*`.
pub fn carmichael_lambda(m: u64) -> Result<u64> {
    positive(m)?;
    Ok(factorize(m).into_iter().fold(1, |acc, (p, e)| {
        let phi = (p - 1) * p.pow(e - 1);
        let part = if p == 2 && e >= 3 { phi / 2 } else { phi };
        acc.lcm(&part)
    }))
}

/// Multiplicative order of `a` modulo `m`.
pub fn mult_order(a: u64, m: u64) -> Result<u64> {
    positive(m)?;
    if m == 1 {
        return Ok(1);
    }
    if a.gcd(&m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    // The order divides lambda(m); strip prime factors while possible.
    let mut t = carmichael_lambda(m)?;
    for (p, _) in factorize(t) {
        while t % p == 0 && pow_mod(a, t / p, m) == 1 {
            t /= p;
        }
    }
    Ok(t)
}

pub fn is_primitive_lambda_root(a: u64, m: u64) -> Result<bool> {
    Ok(mult_order(a, m)? == carmichael_lambda(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael_lambda(8).unwrap(), 2);
        assert_eq!(carmichael_lambda(2).unwrap(), 1);
        assert_eq!(carmichael_lambda(4).unwrap(), 2);
        assert_eq!(carmichael_lambda(15).unwrap(), 4);
        assert_eq!(carmichael_lambda(1).unwrap(), 1);
        assert!(carmichael_lambda(0).is_err());
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(16).unwrap(), 8);
        assert_eq!(euler_phi(36).unwrap(), 12);
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(5, 16).unwrap(), 4);
        assert_eq!(mult_order(2, 3).unwrap(), 2);
        assert!(is_primitive_lambda_root(5, 16).unwrap());
        assert!(!is_primitive_lambda_root(9, 16).unwrap());
        assert_eq!(mult_order(4, 6), Err(Error::NotCoprime { a: 4, m: 6 }));
    }

    #[test]
    fn order_by_powering() {
        for m in 2..200u64 {
            for a in 1..m {
                if a.gcd(&m) != 1 {
                    continue;
                }
                let mut t = 1;
                let mut x = a % m;
                while x != 1 % m {
                    x = x * a % m;
                    t += 1;
                }
                assert_eq!(mult_order(a, m).unwrap(), t, "a={a} m={m}");
            }
        }
    }

    #[test]
    fn primality_matches_sieve() {
        let mut sieve = alloc::vec![true; 10_000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..100 {
            if sieve[i] {
                for j in (i * i..10_000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), p, "{i}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), alloc::vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), alloc::vec![1]);
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
    }
}
