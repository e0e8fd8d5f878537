//! Residues modulo prime powers and the arithmetic every criterion is built on.

mod primality;
mod quotients;
mod rational;
mod residue;
mod scalar;
mod sieve;
mod word;

pub use primality::{
    classify, is_prime_u64, is_probable_prime, trial_division_witness, Primality, PrimalityStatus,
    DETERMINISTIC_LIMIT, PRIMALITY_POLICY,
};
pub use quotients::{
    fermat_quotient, fermat_quotient_table, harmonic_mod, inverse_table, teichmuller_lift,
    wilson_quotient, FermatQuotientTable,
};
pub use rational::{padic_valuation, rational_mod, rational_residue};
pub use residue::{mod_pow, PrimePowerOf, ResidueOf, MAX_EXPONENT};
pub use scalar::Scalar;
pub use sieve::{sieve_primes, smallest_prime_factors, PrimeRange, SegmentedPrimes};
pub use word::{mul_mod, pow_mod, ModWord};

/// Greatest common divisor on `u64`.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Euler's totient, by trial factorisation.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// `x^{-1} mod m` by the extended Euclidean algorithm.
pub fn inv_mod(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
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

/// Lift a square root of `a` modulo the odd prime `p` to one modulo `p^2`.
pub fn hensel_sqrt_p2(a: i64, root_mod_p: u64, p: u64) -> Option<u64> {
    let m = p * p;
    let s = root_mod_p % p;
    if s == 0 {
        return None;
    }
    // s' = s - (s^2 - a) / (2s)
    let a_mod = reduce_signed(a as i128, m);
    let f = (mul_mod(s, s, m) + m - a_mod) % m;
    let inv = inv_mod((2 * s) % m, m)?;
    let corr = mul_mod(f, inv, m);
    Some((s + m - corr) % m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_factors() {
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(14), 6);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(13), 2);
        assert_eq!(primitive_root(41), 6);
    }

    #[test]
    fn square_roots() {
        for p in [13u64, 17, 29, 41, 97, 193] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                    let lifted = hensel_sqrt_p2(a as i64, r, p).unwrap();
                    assert_eq!(mul_mod(lifted, lifted, p * p), a);
                }
            }
        }
        let s = hensel_sqrt_p2(-1, sqrt_mod_prime(12, 13).unwrap(), 13).unwrap();
        assert_eq!(mul_mod(s, s, 169), 168);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(2, 13), Some(7));
        assert_eq!(inv_mod(5, 25), None);
    }
}
