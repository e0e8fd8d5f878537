use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{mul_mod, pow_mod};

/// Below this bound the fixed base set {2, 3, 5, 7, 11, 13, 17} makes
/// Miller-Rabin deterministic (valid up to 341,550,071,728,321).
pub const DETERMINISTIC_LIMIT: u64 = 330_000_000_000_000;

const SMALL_RANGE_BASES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];
const FULL_U64_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const RANDOM_BASES: usize = 20;

/// Human-readable statement of the primality policy, embedded in output records.
pub const PRIMALITY_POLICY: &str =
    "Miller-Rabin bases {2,3,5,7,11,13,17} (deterministic) below 3.3e14; \
     otherwise Miller-Rabin base 2 + 20 seeded pseudo-random bases + strong Lucas (Selfridge)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    ProbablePrime,
}

/// Primality outcome reported in search records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimalityStatus {
    /// Below [`DETERMINISTIC_LIMIT`], so the Miller-Rabin verdict is a proof.
    PrimeProvenSmall,
    ProbablePrime,
    Composite,
}

fn miller_rabin_u64(n: u64, bases: &[u64]) -> bool {
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'bases: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn small_prime_answer(n: u64) -> Option<bool> {
    if n < 2 {
        return Some(false);
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return Some(true);
        }
        if n % q == 0 {
            return Some(false);
        }
    }
    None
}

/// Deterministic primality for any `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    small_prime_answer(n).unwrap_or_else(|| miller_rabin_u64(n, &FULL_U64_BASES))
}

fn is_prime_small_range(n: u64) -> bool {
    debug_assert!(n < DETERMINISTIC_LIMIT);
    small_prime_answer(n).unwrap_or_else(|| miller_rabin_u64(n, &SMALL_RANGE_BASES))
}

fn miller_rabin_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a
        .mod_floor(&BigInt::from_biguint(Sign::Plus, n.clone()))
        .to_biguint()
        .unwrap();
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        if (&a % 4u32).to_u32().unwrap() == 3 && n_mod_8 % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas(n: &BigUint) -> bool {
    let root = Roots::sqrt(n);
    if &root * &root == *n {
        return false;
    }
    let mut d_param: i64 = 5;
    loop {
        match jacobi(&BigInt::from(d_param), n) {
            -1 => break,
            0 => {
                // shares a factor with |D|; prime only when n == |D|
                return BigUint::from(d_param.unsigned_abs()) == *n;
            }
            _ => {
                d_param = if d_param > 0 {
                    -(d_param + 2)
                } else {
                    -d_param + 2
                }
            }
        }
    }
    let nn = BigInt::from_biguint(Sign::Plus, n.clone());
    let p = BigInt::one();
    let q = BigInt::from((1 - d_param) / 4);
    let dd = BigInt::from(d_param);
    let half = |x: BigInt| -> BigInt {
        let x = x.mod_floor(&nn);
        if x.is_odd() {
            (x + &nn) >> 1
        } else {
            x >> 1
        }
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let d = &n_plus_1 >> s;
    let bits = d.bits();
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&nn);
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - (&qk << 1u32)).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if d.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&dd * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Probable-prime test; never reports a prime as composite.
pub fn is_probable_prime(n: &BigUint) -> Primality {
    let verdict = match n.to_u64() {
        Some(small) if small < DETERMINISTIC_LIMIT => is_prime_small_range(small),
        _ => is_probable_prime_large(n),
    };
    if verdict {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

fn is_probable_prime_large(n: &BigUint) -> bool {
    if n.is_even() {
        return false;
    }
    if let Some(q) = trial_division_witness(n, 1000) {
        return BigUint::from(q) == *n;
    }
    let two = BigUint::from(2u32);
    if !miller_rabin_big(n, &two) {
        return false;
    }
    // Seeded from n so repeated runs give identical bases.
    let seed = n
        .iter_u64_digits()
        .fold(0x9e37_79b9_7f4a_7c15u64, |h, w| h.rotate_left(7) ^ w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper = n - 1u32;
    for _ in 0..RANDOM_BASES {
        let base = rng.gen_biguint_range(&two, &upper);
        if !miller_rabin_big(n, &base) {
            return false;
        }
    }
    strong_lucas(n)
}

/// Classification used by search records.
pub fn classify(n: &BigUint) -> PrimalityStatus {
    match (is_probable_prime(n), n.to_u64()) {
        (Primality::Composite, _) => PrimalityStatus::Composite,
        (Primality::ProbablePrime, Some(small)) if small < DETERMINISTIC_LIMIT => {
            PrimalityStatus::PrimeProvenSmall
        }
        (Primality::ProbablePrime, _) => PrimalityStatus::ProbablePrime,
    }
}

/// Smallest prime `q < limit` dividing `n`, if any.
pub fn trial_division_witness(n: &BigUint, limit: u64) -> Option<u64> {
    let digits = n.to_u32_digits();
    let rem = |q: u64| {
        digits
            .iter()
            .rev()
            .fold(0u64, |r, &d| ((r << 32) | d as u64) % q)
    };
    (2..limit)
        .filter(|&q| is_prime_u64(q))
        .find(|&q| rem(q) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(is_probable_prime(&big("2521")), Primality::ProbablePrime);
        assert_eq!(
            is_probable_prime(&big("381765135195632792959100810331957408101589361")),
            Primality::ProbablePrime
        );
        assert_eq!(is_probable_prime(&big("4")), Primality::Composite);
        assert_eq!(is_probable_prime(&big("2")), Primality::ProbablePrime);
    }

    #[test]
    fn small_range_agrees_with_trial_division() {
        for n in 2u64..20_000 {
            let oracle = (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), oracle, "n={n}");
            let verdict = is_probable_prime(&BigUint::from(n)) == Primality::ProbablePrime;
            assert_eq!(verdict, oracle, "n={n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_caught() {
        // strong pseudoprime to bases 2..=37 except one below 2^64
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // Carmichael numbers
        for n in [561u64, 1105, 1729, 41041, 825265] {
            assert!(!is_prime_u64(n));
        }
        // above the deterministic limit: a product of two primes, and a prime
        let composite = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        assert_eq!(is_probable_prime(&composite), Primality::Composite);
        assert_eq!(
            classify(&big("18446744073709551557")),
            PrimalityStatus::ProbablePrime
        );
        assert_eq!(classify(&big("2521")), PrimalityStatus::PrimeProvenSmall);
        // 2^127 - 1
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(is_probable_prime(&m127), Primality::ProbablePrime);
        assert_eq!(is_probable_prime(&(&m127 * &m127)), Primality::Composite);
    }

    #[test]
    fn lucas_alone_on_known_values() {
        for p in ["1000000007", "2305843009213693951", "18446744073709551557"] {
            assert!(strong_lucas(&big(p)), "{p}");
        }
        // strong Lucas pseudoprimes are composite but pass; 5459 is the first one
        assert!(strong_lucas(&big("5459")));
        assert!(!strong_lucas(&big("5461")));
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for n in [7u64, 11, 13, 97] {
            for a in -20i64..20 {
                let e = pow_mod(a.rem_euclid(n as i64) as u64, (n - 1) / 2, n);
                let expect = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(
                    jacobi(&BigInt::from(a), &BigUint::from(n)),
                    expect,
                    "a={a} n={n}"
                );
            }
        }
    }

    #[test]
    fn trial_division() {
        assert_eq!(trial_division_witness(&BigUint::from(91u32), 100), Some(7));
        assert_eq!(trial_division_witness(&BigUint::from(97u32), 50), None);
    }
}
