//! Sieve-backed factorization and a few elementary modular routines.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Smallest-prime-factor table covers `[0, SIEVE_LIMIT]`.
pub const SIEVE_LIMIT: u32 = 1_000_000;

struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    })
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n <= SIEVE_LIMIT as u64 {
        let s = sieve();
        let end = s.primes.partition_point(|&p| (p as u64) <= n);
        return s.primes[..end].iter().map(|&p| p as u64).collect();
    }
    (2..=n).filter(|&k| is_prime(k)).collect()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n <= SIEVE_LIMIT as u64 {
        return n >= 2 && sieve().spf[n as usize] == n as u32;
    }
    if n % 2 == 0 {
        return false;
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn factor_u64_into(mut n: u64, out: &mut BTreeMap<u64, u32>) -> Result<()> {
    let s = sieve();
    if n > SIEVE_LIMIT as u64 {
        for &p in &s.primes {
            let p = p as u64;
            if p * p > n {
                break;
            }
            while n % p == 0 {
                n /= p;
                *out.entry(p).or_insert(0) += 1;
            }
            if n <= SIEVE_LIMIT as u64 {
                break;
            }
        }
    }
    if n > SIEVE_LIMIT as u64 {
        if is_prime(n) {
            *out.entry(n).or_insert(0) += 1;
            return Ok(());
        }
        return Err(Error::FactorTooLarge(n.to_string()));
    }
    while n > 1 {
        let p = s.spf[n as usize];
        n /= p as u64;
        *out.entry(p as u64).or_insert(0) += 1;
    }
    Ok(())
}

/// Prime factorization of `|n|` for `n != 0`.
pub fn factor(n: &BigInt) -> Result<BTreeMap<u64, u32>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut out = BTreeMap::new();
    let mut m = n.abs();
    if let Some(small) = m.to_u64() {
        factor_u64_into(small, &mut out)?;
        return Ok(out);
    }
    for &p in &sieve().primes {
        let bp = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
            *out.entry(p as u64).or_insert(0) += 1;
        }
        if let Some(small) = m.to_u64() {
            factor_u64_into(small, &mut out)?;
            return Ok(out);
        }
    }
    Err(Error::FactorTooLarge(n.to_string()))
}

/// Primes dividing `|n|`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    Ok(factor(n)?.into_keys().collect())
}

/// The `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Kronecker symbol `(a / p)` for a prime `p`.
pub fn kronecker(a: i64, p: u64) -> i8 {
    if p == 2 {
        return match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Integer square root of a nonnegative big integer, or `None` if it is not
/// a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `floor(sqrt(n))`.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    match factor(&BigInt::from(n)) {
        Ok(f) => f.values().all(|&e| e == 1),
        Err(_) => false,
    }
}

/// `a^{-1} mod m` for `gcd(a, m) = 1`.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
