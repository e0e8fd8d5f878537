//! Gauss factorials `N_n! = prod_{i <= N, gcd(i, n) = 1} i` modulo prime
//! powers, and the 1-exceptional criteria built on them.
//!
//! `p ≡ 1 (mod m)` is 1-exceptional for `m` when
//! `((p^2 - 1)/m)_p!^{p-1} ≡ 1 (mod p^2)`. Writing that power as
//! `(1 + p)^{-xi}` defines `xi mod p`, which the Fermat-quotient and
//! Bernoulli routes compute without the `O(p^2)` product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::modmath::{
    fermat_quotient_table, harmonic_mod, inv_mod, inverse_table, is_prime_u64, mul_mod, pow_mod,
    prime_factors, rational_mod, sieve_primes, wilson_quotient, PrimeRange,
};
use crate::quadfields::{kronecker, QuadField};
use crate::scan::try_ordered_map;
use crate::specialnums::{bernoulli, bernoulli_poly_with, EXACT_ROUTE_LIMIT};
use crate::{PrimePower, Residue};

/// Largest number of factors a brute-force product may take.
pub const DIRECT_PRODUCT_LIMIT: u64 = 10_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalMethod {
    Direct,
    FermatQuotient,
    Bernoulli,
}

/// Outcome of a 1-exceptionality test (`alpha`-exceptionality for the direct
/// route). `verdict` holds exactly when `xi` is zero; `xi` lives modulo
/// `p^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalVerdict {
    pub p: u64,
    pub m: u64,
    pub alpha: u32,
    pub method: ExceptionalMethod,
    pub xi: Residue,
    pub verdict: bool,
}

fn product_guard(count: u64) -> Result<()> {
    ensure!(
        count <= DIRECT_PRODUCT_LIMIT,
        Error::SizeGuard(format!(
            "{count} factors exceeds the brute-force limit {DIRECT_PRODUCT_LIMIT}"
        ))
    );
    Ok(())
}

/// Multiply `acc` by every `i` in `(lo, hi]` coprime to the primes in `factors`.
fn multiply_range(mut acc: u64, lo: u64, hi: u64, factors: &[u64], m: u64) -> u64 {
    match factors {
        [] => {
            for i in lo + 1..=hi {
                acc = mul_mod(acc, i % m, m);
            }
        }
        [q] => {
            let q = *q;
            let mut i = lo + 1;
            while i <= hi {
                if i % q == 0 {
                    i += 1;
                    continue;
                }
                let stop = hi.min((i / q + 1) * q - 1);
                for j in i..=stop {
                    acc = mul_mod(acc, j % m, m);
                }
                i = stop + 1;
            }
        }
        _ => {
            for i in (lo + 1..=hi).filter(|i| factors.iter().all(|q| i % q != 0)) {
                acc = mul_mod(acc, i % m, m);
            }
        }
    }
    acc
}

/// `N_n!` for each `N` in `cutoffs`, from a single pass up to the largest.
pub fn gauss_factorials_at(cutoffs: &[u64], n: u64, modulus: PrimePower) -> Vec<Residue> {
    let m = modulus.modulus();
    let factors = prime_factors(n);
    let mut order: Vec<usize> = (0..cutoffs.len()).collect();
    order.sort_by_key(|&i| cutoffs[i]);
    let mut out = vec![Residue::one(modulus); cutoffs.len()];
    let (mut acc, mut reached) = (1u64, 0u64);
    for i in order {
        acc = multiply_range(acc, reached, cutoffs[i], &factors, m);
        reached = reached.max(cutoffs[i]);
        out[i] = Residue::from_u64(acc, modulus);
    }
    out
}

/// `N_n! mod p^k` by direct product; cost `O(N)`.
pub fn gauss_factorial(big_n: u64, n: u64, modulus: PrimePower) -> Residue {
    gauss_factorials_at(&[big_n], n, modulus)[0]
}

fn check_odd_prime(p: u64) -> Result<()> {
    ensure!(
        p > 2 && is_prime_u64(p),
        Error::Precondition(format!("{p} is not an odd prime"))
    );
    Ok(())
}

fn check_class(p: u64, m: u64) -> Result<()> {
    check_odd_prime(p)?;
    ensure!(m >= 2, Error::Precondition(format!("m = {m} < 2")));
    ensure!(
        p % m == 1,
        Error::Precondition(format!("{p} is not 1 mod {m}"))
    );
    Ok(())
}

/// `x = (1+p)^{-xi}` with `x ≡ 1 (mod p)` at modulus `p^{a+1}` gives
/// `xi ≡ -(x - 1)/p (mod p^a)`.
fn xi_from_power(x: Residue, alpha: u32) -> Result<Residue> {
    let modulus = x.modulus();
    let (p, pk) = (modulus.p(), modulus.modulus());
    let t = (x.value() + pk - 1) % pk / p;
    Ok(-Residue::from_u64(t, modulus.lower(alpha)?))
}

/// `alpha`-exceptionality by the product itself:
/// `((p^{alpha+1} - 1)/m)_p!^{p-1} ≡ 1 (mod p^{alpha+1})`.
pub fn exceptional_direct(p: u64, m: u64, alpha: u32) -> Result<ExceptionalVerdict> {
    check_class(p, m)?;
    ensure!(
        alpha >= 1,
        Error::Precondition("alpha must be positive".into())
    );
    let modulus = PrimePower::new(p, alpha + 1)?;
    let big_n = (modulus.modulus() - 1) / m;
    product_guard(big_n)?;
    let power = gauss_factorial(big_n, p, modulus).pow(p - 1);
    Ok(ExceptionalVerdict {
        p,
        m,
        alpha,
        method: ExceptionalMethod::Direct,
        xi: xi_from_power(power, alpha)?,
        verdict: power.is_one(),
    })
}

/// `xi_m = (1/m)(w_p - H_{(p-1)/m}) - sum_{a <= (p-1)/m} q_p(a) (mod p)` for
/// each `m`, sharing the Wilson quotient and the quotient table.
pub fn xi_values(p: u64, ms: &[u64]) -> Result<Vec<Residue>> {
    for &m in ms {
        check_class(p, m)?;
    }
    let Some(&smallest) = ms.iter().min() else {
        return Ok(Vec::new());
    };
    let modulus = PrimePower::new(p, 1)?;
    let w = wilson_quotient(p)?.value();
    let bound = (p - 1) / smallest;
    let table = fermat_quotient_table(p, bound)?;
    let inv = inverse_table(bound, p);
    ms.iter()
        .map(|&m| {
            let n = (p - 1) / m;
            let harmonic = inv[1..=n as usize].iter().fold(0, |s, &x| (s + x) % p);
            let inv_m = inv_mod(m, p).expect("m < p");
            let first = mul_mod((w + p - harmonic) % p, inv_m, p);
            Ok(Residue::from_u64(
                (first + p - table.prefix_sum(n)) % p,
                modulus,
            ))
        })
        .collect()
}

/// 1-exceptionality from Fermat and Wilson quotients in `O(p)`.
pub fn exceptional_fq(p: u64, m: u64) -> Result<ExceptionalVerdict> {
    let xi = xi_values(p, &[m])?[0];
    Ok(ExceptionalVerdict {
        p,
        m,
        alpha: 1,
        method: ExceptionalMethod::FermatQuotient,
        xi,
        verdict: xi.is_zero(),
    })
}

/// `xi` from exact Bernoulli values: `w_p ≡ B_{p-1} + 1/p - 1 (mod p)` and
/// `sum_{a <= N} a^{p-1} = (B_p(N + 1) - B_p(1))/p`. Limited to small `p`.
pub fn exceptional_bernoulli(p: u64, m: u64) -> Result<ExceptionalVerdict> {
    check_class(p, m)?;
    ensure!(
        p <= EXACT_ROUTE_LIMIT,
        Error::SizeGuard(format!("exact route limited to p <= {EXACT_ROUTE_LIMIT}"))
    );
    let n = (p - 1) / m;
    let table = bernoulli::<BigRational>(&(), p as usize)?;
    let big_p = BigInt::from(p);

    let w_exact = &table[(p - 1) as usize] + BigRational::new(BigInt::one(), big_p.clone())
        - BigRational::one();
    let w = rational_mod(&w_exact, p)?;

    let at = |t: u64| {
        bernoulli_poly_with(
            &(),
            &table,
            p as usize,
            &BigRational::from_integer(t.into()),
        )
    };
    let power_sum = (at(n + 1) - at(1)) / BigRational::from_integer(big_p.clone());
    ensure!(
        power_sum.is_integer(),
        Error::RouteMismatch {
            p,
            detail: "power sum is not an integer".into()
        }
    );
    let (sum_q, rem) = (power_sum.to_integer() - BigInt::from(n)).div_rem(&big_p);
    ensure!(
        rem == BigInt::from(0),
        Error::RouteMismatch {
            p,
            detail: "power sum not congruent to N mod p".into()
        }
    );
    let sum_q = sum_q.mod_floor(&big_p).to_u64().expect("reduced mod p");

    let harmonic = harmonic_mod(n, p)?.value();
    let inv_m = inv_mod(m, p).expect("m < p");
    let first = mul_mod((w + p - harmonic) % p, inv_m, p);
    let xi = Residue::from_u64((first + p - sum_q) % p, PrimePower::new(p, 1)?);
    Ok(ExceptionalVerdict {
        p,
        m,
        alpha: 1,
        method: ExceptionalMethod::Bernoulli,
        xi,
        verdict: xi.is_zero(),
    })
}

/// `(p^{2r} - 1)/D` after checking `p^r ≡ 1 (mod D)` and the word-size limit.
fn block_length(p: u64, big_d: u64, r: u32) -> Result<u64> {
    ensure!(
        big_d >= 4 && big_d % 2 == 0,
        Error::Precondition(format!("D = {big_d} must be even and at least 4"))
    );
    ensure!(r >= 1, Error::Precondition("r must be positive".into()));
    ensure!(
        pow_mod(p % big_d, r as u64, big_d) == 1,
        Error::Precondition(format!("{p}^{r} is not 1 mod {big_d}"))
    );
    let q = p
        .checked_pow(2 * r)
        .filter(|&q| q < 1 << 63)
        .ok_or_else(|| Error::SizeGuard(format!("{p}^{} exceeds 2^63", 2 * r)))?;
    Ok((q - 1) / big_d)
}

/// `((k M)_p!^2 / (2k M)_p!)` for each `k`, where `M = (p^{2r} - 1)/D`.
fn factorial_ratios(p: u64, block: u64, ks: &[u64]) -> Result<Vec<Residue>> {
    let modulus = PrimePower::new(p, 2)?;
    let cutoffs: Vec<u64> = ks
        .iter()
        .flat_map(|&k| [k * block, 2 * k * block])
        .collect();
    product_guard(cutoffs.iter().copied().max().unwrap_or(0))?;
    let f = gauss_factorials_at(&cutoffs, p, modulus);
    Ok(f.chunks(2)
        .map(|pair| pair[0] * pair[0] * pair[1].inverse().expect("Gauss factorials are units"))
        .collect())
}

/// `(((p^{2r}-1)/D)_p!^2 / ((p^{2r}-1)/(D/2))_p!)^{p-1} mod p^2`.
pub fn ratio_value(p: u64, big_d: u64, r: u32) -> Result<Residue> {
    check_odd_prime(p)?;
    let block = block_length(p, big_d, r)?;
    Ok(factorial_ratios(p, block, &[1])?[0].pow(p - 1))
}

/// Maximal-class-number criterion: [`ratio_value`] `≡ 1 (mod p^2)`.
pub fn exceptional_ratio(p: u64, big_d: u64, r: u32) -> Result<bool> {
    Ok(ratio_value(p, big_d, r)?.is_one())
}

fn check_general(p: u64, field: &QuadField) -> Result<()> {
    check_odd_prime(p)?;
    ensure!(
        field.class_number() % p != 0,
        Error::Inapplicable {
            p,
            reason: format!("p divides h = {}", field.class_number())
        }
    );
    ensure!(
        !(p == 3 && kronecker(field.discriminant(), 2) == -1 && field.d() != 3),
        Error::Inapplicable {
            p,
            reason: "p = 3 with chi(2) = -1".into()
        }
    );
    Ok(())
}

/// Power `p - 1` of the double product over `i` coprime to `D` with
/// `chi(i) = 1`: ratios `R(D - i)` for `D/2 < i < D` against inverse ratios
/// `R(i)^{-1}` for `0 < i < D/2`, where `R(k) = (kM)_p!^2 / (2kM)_p!`.
pub fn general_value(p: u64, field: &QuadField, r: u32) -> Result<Residue> {
    check_general(p, field)?;
    let big_d = field.modulus();
    let block = block_length(p, big_d, r)?;
    let (upper, lower) = field.residue_halves();
    let ks: Vec<u64> = upper
        .iter()
        .map(|&i| big_d - i)
        .chain(lower.iter().copied())
        .collect();
    let ratios = factorial_ratios(p, block, &ks)?;
    let (up, low) = ratios.split_at(upper.len());
    let mut product = Residue::one(PrimePower::new(p, 2)?);
    for &x in up {
        product = product * x;
    }
    for &x in low {
        product = product * x.inverse().expect("unit");
    }
    Ok(product.pow(p - 1))
}

/// Gauss-factorial criterion for any imaginary quadratic field.
pub fn exceptional_general(p: u64, field: &QuadField, r: u32) -> Result<bool> {
    Ok(general_value(p, field, r)?.is_one())
}

/// `((p^n - 1)/3)_p!^24 ≡ ((p^n - 1)/6)_p!^12 (mod p^n)` for `p ≡ 1 (mod 6)`.
pub fn cd_congruence_check(p: u64, n: u32) -> Result<bool> {
    check_class(p, 6)?;
    let modulus = PrimePower::new(p, n)?;
    let q = modulus.modulus() - 1;
    product_guard(q / 3)?;
    let f = gauss_factorials_at(&[q / 3, q / 6], p, modulus);
    Ok(f[0].pow(24) == f[1].pow(12))
}

/// [`exceptional_fq`] for every prime `p ≡ 1 (mod m)` in `[lower, upper]`,
/// in increasing order.
pub fn exceptional_verdicts(
    lower: u64,
    upper: u64,
    m: u64,
    workers: usize,
) -> Result<Vec<ExceptionalVerdict>> {
    ensure!(m >= 2, Error::Precondition(format!("m = {m} < 2")));
    let range = PrimeRange::new(lower.max(3), upper.max(3), Some((m, 1)))?;
    let primes: Vec<u64> = sieve_primes(range).filter(|&p| p > m).collect();
    try_ordered_map(&primes, workers, |&p| exceptional_fq(p, m))
}

/// The 1-exceptional primes for `m` in `[lower, upper]`.
pub fn scan_exceptional(
    lower: u64,
    upper: u64,
    m: u64,
    workers: usize,
) -> Result<Vec<ExceptionalVerdict>> {
    let verdicts = exceptional_verdicts(lower, upper, m, workers)?;
    Ok(verdicts.into_iter().filter(|v| v.verdict).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfields::make_field;

    fn m(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    #[test]
    fn gauss_factorial_examples() {
        assert!(gauss_factorial(1, 7, m(5, 2)).is_one());
        assert_eq!(gauss_factorial(4, 5, m(5, 2)).value(), 24);
        assert!(gauss_factorial(24, 7, m(7, 2)).pow(6).is_one());
        // 1 * 5 * 7 * 11 for n = 12
        assert_eq!(gauss_factorial(12, 12, m(13, 2)).value(), 385 % 169);
        assert_eq!(gauss_factorial(10, 1, m(11, 3)).value(), 3_628_800 % 1331);
    }

    #[test]
    fn checkpoints_match_single_products() {
        let cut = [50u64, 3, 200, 3, 0];
        let joint = gauss_factorials_at(&cut, 13, m(13, 2));
        for (c, f) in cut.iter().zip(joint) {
            assert_eq!(f, gauss_factorial(*c, 13, m(13, 2)));
        }
    }

    #[test]
    fn direct_examples() {
        assert!(exceptional_direct(13, 3, 1).unwrap().verdict);
        assert!(!exceptional_direct(7, 3, 1).unwrap().verdict);
        // 1-exceptional but not 2-exceptional: the order mod 13^3 gains a factor 13
        assert!(!exceptional_direct(13, 3, 2).unwrap().verdict);
        assert!(exceptional_direct(11, 3, 1).is_err());
        assert!(exceptional_direct(13, 3, 3).is_err());
    }

    #[test]
    fn fq_examples() {
        let v = exceptional_fq(13, 3).unwrap();
        assert!(v.verdict);
        assert!(v.xi.is_zero());
        assert!(exceptional_fq(181, 3).unwrap().verdict);
        assert!(!exceptional_fq(5, 4).unwrap().verdict);
        assert!(!exceptional_direct(5, 4, 1).unwrap().verdict);
        assert!(exceptional_fq(7, 4).is_err());
    }

    #[test]
    fn three_routes_report_the_same_xi() {
        for p in (7..300).filter(|&p| is_prime_u64(p)) {
            for m in [3u64, 4, 6, 5, 2] {
                if p % m != 1 {
                    continue;
                }
                let d = exceptional_direct(p, m, 1).unwrap();
                let f = exceptional_fq(p, m).unwrap();
                let b = exceptional_bernoulli(p, m).unwrap();
                assert_eq!(d.xi, f.xi, "p={p} m={m}");
                assert_eq!(b.xi, f.xi, "p={p} m={m}");
                assert_eq!(d.verdict, d.xi.is_zero());
            }
        }
    }

    #[test]
    fn ratio_examples() {
        assert!(exceptional_ratio(13, 6, 1).unwrap());
        assert!(!exceptional_ratio(7, 6, 1).unwrap());
        assert!(exceptional_ratio(7, 6, 0).is_err());
        assert!(exceptional_ratio(5, 6, 1).is_err());
        assert!(exceptional_ratio(3, 20, 4).is_ok());
    }

    #[test]
    fn general_reduces_to_ratio_on_maximal_fields() {
        for d in [1u64, 2, 3, 5, 6] {
            let field = make_field(d).unwrap();
            let big_d = field.modulus();
            for p in (3..400).filter(|&p| is_prime_u64(p) && p % big_d == 1) {
                let general = general_value(p, &field, 1).unwrap();
                let ratio = ratio_value(p, big_d, 1).unwrap();
                assert_eq!(general.is_one(), ratio.is_one(), "d={d} p={p}");
                if big_d <= 6 {
                    // a single residue below D/2: the products are inverse
                    assert!((general * ratio).is_one(), "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn general_preconditions() {
        let k23 = make_field(23).unwrap();
        assert!(matches!(
            exceptional_general(3, &k23, 1),
            Err(Error::Inapplicable { .. })
        ));
        // chi(2) = -1 for d = 11, and 3^5 ≡ 1 (mod 22)
        let k11 = make_field(11).unwrap();
        assert!(matches!(
            exceptional_general(3, &k11, 5),
            Err(Error::Inapplicable { .. })
        ));
        assert!(exceptional_general(3, &make_field(5).unwrap(), 4).is_ok());
        assert!(exceptional_general(43, &make_field(5).unwrap(), 1).is_err());
    }

    #[test]
    fn cd_congruence_examples() {
        assert!(cd_congruence_check(7, 2).unwrap());
        assert!(cd_congruence_check(13, 2).unwrap());
        assert!(cd_congruence_check(19, 3).unwrap());
        assert!(cd_congruence_check(5, 2).is_err());
    }

    #[test]
    fn small_scan() {
        let hits: Vec<u64> = scan_exceptional(3, 3000, 3, 2)
            .unwrap()
            .iter()
            .map(|v| v.p)
            .collect();
        assert_eq!(hits, vec![13, 181, 2521]);
    }
}
