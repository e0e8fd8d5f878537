//! Jacobi sums modulo `p^2` through the Teichmüller character, the Jacobi-sum
//! form of the `lambda_p(K) > 1` criterion, and Gold's criterion evaluated
//! directly from a generator of `𝔭^h` as an independent oracle.
//!
//! With `g` a primitive root mod `p` and `ζ = ω(g)^{(p-1)/D}`, the order-`D`
//! character is `ψ(a) = ζ^{log_g a}`, so
//! `J(ψ^i) = sum_{a=2}^{p-1} ζ^{i (log a + log(1 - a))}`.
//! Grouping the `a` by `log a + log(1 - a) mod D` makes every further Jacobi
//! sum at the same prime cost `O(D)`.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::gaussfact;
use crate::modmath::{
    gcd, hensel_sqrt_p2, is_prime_u64, mul_mod, pow_mod, primitive_root, sieve_primes,
    sqrt_mod_prime, teichmuller_lift, PrimeRange,
};
use crate::quadfields::{chi, QuadField};
use crate::scan::try_ordered_map;
use crate::{PrimePower, Residue};

/// Largest prime handled by the scans (so that `p^2` fits a `u64`).
pub const SCAN_LIMIT: u64 = u32::MAX as u64;

/// Which `(p-1)/D`-th power of the Teichmüller character plays `ψ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `ψ = ω^{(p-1)/D}`: `J(ψ^{-i})` is congruent to the Gauss-factorial
    /// ratio (up to sign) and is a unit.
    #[default]
    Standard,
    /// `ψ = ω^{-(p-1)/D}`, which swaps `J(ψ^i)` and `J(ψ^{-i})`. Only useful
    /// to check that the cross-route tests notice the swap.
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMethod {
    Jacobi,
    GaussRatio,
    Cornacchia,
    FermatQuotient,
}

/// Outcome of a `lambda_p(K) > 1` test. `verdict` holds exactly when
/// `criterion_value` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaVerdict {
    pub field: QuadField,
    pub p: u64,
    pub r: u32,
    pub method: LambdaMethod,
    pub criterion_value: Residue,
    pub verdict: bool,
}

impl LambdaVerdict {
    fn new(field: &QuadField, p: u64, r: u32, method: LambdaMethod, value: Residue) -> Self {
        LambdaVerdict {
            field: field.clone(),
            p,
            r,
            method,
            criterion_value: value,
            verdict: value.is_one(),
        }
    }
}

/// Per-prime tables for Jacobi sums of characters of order `D`.
#[derive(Clone, Debug)]
pub struct JacobiContext {
    p: u64,
    big_d: u64,
    modulus: PrimePower,
    generator: u64,
    /// `ζ^k` for `0 <= k < D`.
    zeta_powers: Vec<Residue>,
    /// `counts[e] = #{2 <= a <= p-1 : log a + log(1-a) ≡ e (mod D)}`.
    counts: Vec<u64>,
}

impl JacobiContext {
    pub fn new(p: u64, big_d: u64, normalization: Normalization) -> Result<Self> {
        ensure!(
            p > 2 && is_prime_u64(p) && p <= SCAN_LIMIT,
            Error::Precondition(format!("{p} is not an odd prime below 2^32"))
        );
        ensure!(
            big_d >= 1 && (p - 1) % big_d == 0,
            Error::Precondition(format!("D = {big_d} does not divide {p} - 1"))
        );
        let modulus = PrimePower::new(p, 2)?;
        let generator = primitive_root(p);
        let omega = teichmuller_lift(generator as i64, p, 2)?;
        let mut zeta = omega.pow((p - 1) / big_d);
        if normalization == Normalization::Flipped {
            zeta = zeta.inverse().expect("roots of unity are units");
        }
        let mut zeta_powers = Vec::with_capacity(big_d as usize);
        let mut z = Residue::one(modulus);
        for _ in 0..big_d {
            zeta_powers.push(z);
            z = z * zeta;
        }

        let mut log = vec![0u32; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            log[x as usize] = k as u32;
            x = mul_mod(x, generator, p);
        }
        let mut counts = vec![0u64; big_d as usize];
        for a in 2..p {
            let e = (log[a as usize] as u64 + log[(p + 1 - a) as usize] as u64) % big_d;
            counts[e as usize] += 1;
        }
        Ok(JacobiContext {
            p,
            big_d,
            modulus,
            generator,
            zeta_powers,
            counts,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.big_d
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// `ψ(g)` for the primitive root `g` used to build the tables.
    pub fn psi_of_generator(&self) -> Residue {
        self.zeta_powers[1 % self.big_d as usize]
    }

    /// `J(ψ^i) mod p^2`.
    pub fn jacobi_sum(&self, i: i64) -> Residue {
        let d = self.big_d as i64;
        let i = i.rem_euclid(d) as u64;
        let mut acc = Residue::zero(self.modulus);
        for (e, &count) in self.counts.iter().enumerate() {
            if count > 0 {
                let k = (i * e as u64) % self.big_d;
                acc = acc + Residue::from_u64(count, self.modulus) * self.zeta_powers[k as usize];
            }
        }
        acc
    }
}

/// `J(ψ^i) mod p^2` for `ψ` of order `D`, `gcd(i, D) = 1`.
pub fn jacobi_sum_mod_p2(p: u64, big_d: u64, i: i64) -> Result<Residue> {
    ensure!(
        gcd(i.unsigned_abs(), big_d) == 1,
        Error::Precondition(format!("i = {i} is not coprime to D = {big_d}"))
    );
    Ok(JacobiContext::new(p, big_d, Normalization::Standard)?.jacobi_sum(i))
}

fn check_split(field: &QuadField, p: u64) -> Result<()> {
    ensure!(
        p > 2 && is_prime_u64(p),
        Error::Precondition(format!("{p} is not an odd prime"))
    );
    ensure!(
        field.modulus() % p != 0,
        Error::Inapplicable {
            p,
            reason: format!("{p} ramifies in Q(sqrt -{})", field.d())
        }
    );
    ensure!(
        chi(field, p as i64) == 1,
        Error::Inapplicable {
            p,
            reason: format!("{p} is inert in Q(sqrt -{})", field.d())
        }
    );
    ensure!(
        field.class_number() % p != 0,
        Error::Inapplicable {
            p,
            reason: format!("p divides h = {}", field.class_number())
        }
    );
    Ok(())
}

fn check_one_mod_d(field: &QuadField, p: u64) -> Result<()> {
    check_split(field, p)?;
    ensure!(
        p % field.modulus() == 1,
        Error::Precondition(format!(
            "{p} is not 1 mod D = {}; only p ≡ 1 (mod D) is supported here",
            field.modulus()
        ))
    );
    Ok(())
}

/// Criterion value from a prebuilt context; a non-unit denominator gives 0.
pub fn lambda_value_with(field: &QuadField, ctx: &JacobiContext) -> Residue {
    let (upper, lower) = field.residue_halves();
    let mut numerator = Residue::one(ctx.modulus);
    for &i in &upper {
        numerator = numerator * ctx.jacobi_sum(i as i64);
    }
    let mut denominator = Residue::one(ctx.modulus);
    for &i in &lower {
        denominator = denominator * ctx.jacobi_sum(-(i as i64));
    }
    match denominator.inverse() {
        Some(inv) => (numerator * inv).pow(ctx.p - 1),
        None => Residue::zero(ctx.modulus),
    }
}

/// `V = (prod_{D/2<i<D, chi(i)=1} J(ψ^i) / prod_{0<i<D/2, chi(i)=1} J(ψ^{-i}))^{p-1}`;
/// non-trivial iff `V ≡ 1 (mod p^2)`.
pub fn lambda_criterion_jacobi(field: &QuadField, p: u64) -> Result<LambdaVerdict> {
    lambda_criterion_jacobi_with(field, p, Normalization::Standard)
}

pub fn lambda_criterion_jacobi_with(
    field: &QuadField,
    p: u64,
    normalization: Normalization,
) -> Result<LambdaVerdict> {
    check_one_mod_d(field, p)?;
    let ctx = JacobiContext::new(p, field.modulus(), normalization)?;
    let value = lambda_value_with(field, &ctx);
    Ok(LambdaVerdict::new(field, p, 1, LambdaMethod::Jacobi, value))
}

/// Gauss-factorial double product; also covers `r > 1` at brute-force scale.
pub fn lambda_criterion_gauss(field: &QuadField, p: u64, r: u32) -> Result<LambdaVerdict> {
    check_split(field, p)?;
    let value = gaussfact::general_value(p, field, r)?;
    Ok(LambdaVerdict::new(
        field,
        p,
        r,
        LambdaMethod::GaussRatio,
        value,
    ))
}

/// Maximal fields only: `(1 + p)^{xi_{D/2} - 2 xi_D}`, which equals the
/// power `p - 1` of the single Gauss-factorial ratio.
pub fn lambda_criterion_fq(field: &QuadField, p: u64) -> Result<LambdaVerdict> {
    check_one_mod_d(field, p)?;
    ensure!(
        field.is_maximal(),
        Error::Precondition(format!(
            "Q(sqrt -{}) does not have maximal class number",
            field.d()
        ))
    );
    let big_d = field.modulus();
    let xi = gaussfact::xi_values(p, &[big_d / 2, big_d])?;
    let exponent = (xi[0].value() + 2 * (p - xi[1].value())) % p;
    let modulus = PrimePower::new(p, 2)?;
    let value = Residue::from_u64(1 + p, modulus).pow(exponent);
    Ok(LambdaVerdict::new(
        field,
        p,
        1,
        LambdaMethod::FermatQuotient,
        value,
    ))
}

/// Solve `x^2 + d y^2 = p` for a prime `p` (Cornacchia).
pub fn cornacchia(d: u64, p: u64) -> Option<(u64, u64)> {
    let minus_d = (p - d % p) % p;
    let mut r0 = sqrt_mod_prime(minus_d, p)?;
    if 2 * r0 < p {
        r0 = p - r0;
    }
    let (mut a, mut b) = (p, r0);
    let limit = p.sqrt();
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p.checked_sub(b * b)?;
    if rest % d != 0 {
        return None;
    }
    let c = rest / d;
    let y = c.sqrt();
    (y * y == c).then_some((b, y))
}

/// Solve `x^2 + d y^2 = 4p` for `d ≡ 3 (mod 4)` and a prime `p`.
pub fn cornacchia_4p(d: u64, p: u64) -> Option<(u64, u64)> {
    let minus_d = (p - d % p) % p;
    let mut x0 = sqrt_mod_prime(minus_d, p)?;
    // x0 must have the parity of -d, i.e. be odd
    if x0 % 2 == 0 {
        x0 = p - x0;
    }
    let (mut a, mut b) = (2 * p, x0);
    let limit = (4 * p).sqrt();
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = (4 * p).checked_sub(b * b)?;
    if rest % d != 0 {
        return None;
    }
    let c = rest / d;
    let y = c.sqrt();
    (y * y == c).then_some((b, y))
}

/// Which square root of `-d` modulo `p^2` embeds `K` into `Q_p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootChoice {
    #[default]
    Principal,
    Conjugate,
}

fn sqrt_minus_d_p2(d: u64, p: u64, root: RootChoice) -> Result<u64> {
    let p2 = p * p;
    let minus_d = (p - d % p) % p;
    let s = sqrt_mod_prime(minus_d, p)
        .and_then(|s| hensel_sqrt_p2(-(d as i64), s, p))
        .ok_or_else(|| Error::Inapplicable {
            p,
            reason: format!("-{d} is not a square mod p"),
        })?;
    Ok(match root {
        RootChoice::Principal => s,
        RootChoice::Conjugate => (p2 - s) % p2,
    })
}

/// Gold's test from `(X + Y sqrt(-d)) / 2` of norm `p^h`, not divisible by `p`:
/// the unit among its two images in `Z/p^2` raised to `p - 1`.
fn gold_value(p: u64, big_x: u64, big_y: u64, s: u64) -> Result<Residue> {
    let modulus = PrimePower::new(p, 2)?;
    let p2 = p * p;
    let half = Residue::from_u64((p2 + 1) / 2, modulus);
    let (x, ys) = (big_x % p2, mul_mod(big_y % p2, s, p2));
    let plus = Residue::from_u64((x + ys) % p2, modulus) * half;
    let minus = Residue::from_u64((x + p2 - ys) % p2, modulus) * half;
    let unit = match (plus.is_unit(), minus.is_unit()) {
        (true, false) => plus,
        (false, true) => minus,
        _ => {
            return Err(Error::RouteMismatch {
                p,
                detail: "exactly one embedding should be a unit".into(),
            })
        }
    };
    Ok(unit.pow(p - 1))
}

/// Gold's criterion for class number one: a generator `α` of `𝔭` from
/// Cornacchia (`x^2 + d y^2 = p`, or `4p` when `d ≡ 3 (mod 4)`), embedded
/// through a Hensel-lifted `sqrt(-d) mod p^2`.
pub fn cornacchia_gold(field: &QuadField, p: u64) -> Result<LambdaVerdict> {
    cornacchia_gold_with(field, p, RootChoice::Principal)
}

pub fn cornacchia_gold_with(field: &QuadField, p: u64, root: RootChoice) -> Result<LambdaVerdict> {
    ensure!(
        field.class_number() == 1,
        Error::Precondition(format!(
            "Q(sqrt -{}) has class number {}",
            field.d(),
            field.class_number()
        ))
    );
    check_split(field, p)?;
    let d = field.d();
    let (big_x, big_y) = match cornacchia(d, p) {
        Some((x, y)) => (2 * x, 2 * y),
        None if d % 4 == 3 => cornacchia_4p(d, p).ok_or_else(|| Error::RouteMismatch {
            p,
            detail: format!("no solution of x^2 + {d} y^2 = 4p"),
        })?,
        None => {
            return Err(Error::RouteMismatch {
                p,
                detail: format!("no solution of x^2 + {d} y^2 = p"),
            })
        }
    };
    let s = sqrt_minus_d_p2(d, p, root)?;
    let value = gold_value(p, big_x, big_y, s)?;
    Ok(LambdaVerdict::new(
        field,
        p,
        multiplicative_order(p, field.modulus()),
        LambdaMethod::Cornacchia,
        value,
    ))
}

/// Largest `p^h` the brute-force generator search accepts.
pub const GOLD_SEARCH_LIMIT: u64 = 1 << 40;

/// Gold's criterion for any class number, finding `α` with `N(α) = p^h` and
/// `p ∤ α` by exhaustive search. Small `p^h` only.
pub fn gold_oracle(field: &QuadField, p: u64, root: RootChoice) -> Result<LambdaVerdict> {
    check_split(field, p)?;
    let d = field.d();
    let h = field.class_number() as u32;
    let norm = p
        .checked_pow(h)
        .filter(|&n| n <= GOLD_SEARCH_LIMIT)
        .ok_or_else(|| Error::SizeGuard(format!("{p}^{h} above the search limit")))?;
    // (X + Y sqrt(-d))/2 with X^2 + d Y^2 = 4 p^h; X, Y even unless d ≡ 3 (mod 4)
    let target = 4 * norm;
    let step = if d % 4 == 3 { 1 } else { 2 };
    let mut y = 0u64;
    let found = loop {
        if d * y * y > target {
            break None;
        }
        let rest = target - d * y * y;
        let x = rest.sqrt();
        if x * x == rest && (x % p != 0 || y % p != 0) && (x + y) % 2 == 0 && x % step == 0 {
            break Some((x, y));
        }
        y += step;
    };
    let (big_x, big_y) = found.ok_or_else(|| Error::RouteMismatch {
        p,
        detail: format!("no element of norm {p}^{h} prime to p"),
    })?;
    let s = sqrt_minus_d_p2(d, p, root)?;
    let value = gold_value(p, big_x, big_y, s)?;
    Ok(LambdaVerdict::new(
        field,
        p,
        multiplicative_order(p, field.modulus()),
        LambdaMethod::Cornacchia,
        value,
    ))
}

/// Smallest `r >= 1` with `p^r ≡ 1 (mod D)`; `p` must be prime to `D`.
pub fn multiplicative_order(p: u64, big_d: u64) -> u32 {
    let mut r = 1;
    while pow_mod(p % big_d, r as u64, big_d) != 1 {
        r += 1;
    }
    r
}

/// Non-trivial primes `p ≡ 1 (mod D)`, `p <= bound`, in increasing order:
/// Fermat-quotient route for maximal fields, Jacobi sums otherwise. Primes
/// dividing `h` are skipped.
pub fn scan_lambda(field: &QuadField, bound: u64, workers: usize) -> Result<Vec<LambdaVerdict>> {
    ensure!(
        bound <= SCAN_LIMIT,
        Error::SizeGuard(format!("bound {bound} above the scan limit {SCAN_LIMIT}"))
    );
    let big_d = field.modulus();
    let primes: Vec<u64> = sieve_primes(PrimeRange::new(3, bound.max(3), Some((big_d, 1)))?)
        .filter(|p| field.class_number() % p != 0)
        .collect();
    let verdicts = try_ordered_map(&primes, workers, |&p| {
        if field.is_maximal() {
            lambda_criterion_fq(field, p)
        } else {
            lambda_criterion_jacobi(field, p)
        }
    })?;
    Ok(verdicts.into_iter().filter(|v| v.verdict).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaStatus {
    NonTrivial,
    Trivial,
    Inapplicable,
}

/// One prime of a cross-checked scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub p: u64,
    pub status: LambdaStatus,
    /// Route whose value is reported; absent for inapplicable primes.
    pub method: Option<LambdaMethod>,
    /// Further routes that returned the same verdict.
    pub cross_checks: Vec<LambdaMethod>,
    pub criterion_value: Option<u64>,
    pub reason: Option<String>,
}

fn cross_checked_row(field: &QuadField, p: u64) -> Result<LambdaRow> {
    if let Err(Error::Inapplicable { reason, .. }) = check_split(field, p) {
        return Ok(LambdaRow {
            p,
            status: LambdaStatus::Inapplicable,
            method: None,
            cross_checks: Vec::new(),
            criterion_value: None,
            reason: Some(reason),
        });
    }
    let primary = if field.is_maximal() {
        lambda_criterion_fq(field, p)?
    } else {
        lambda_criterion_jacobi(field, p)?
    };
    let mut others = Vec::new();
    if field.is_maximal() {
        others.push(lambda_criterion_jacobi(field, p)?);
    }
    if field.class_number() == 1 {
        others.push(cornacchia_gold(field, p)?);
    }
    for other in &others {
        ensure!(
            other.verdict == primary.verdict,
            Error::RouteMismatch {
                p,
                detail: format!(
                    "{:?} says {} but {:?} says {} for d = {}",
                    primary.method,
                    primary.verdict,
                    other.method,
                    other.verdict,
                    field.d()
                ),
            }
        );
    }
    Ok(LambdaRow {
        p,
        status: if primary.verdict {
            LambdaStatus::NonTrivial
        } else {
            LambdaStatus::Trivial
        },
        method: Some(primary.method),
        cross_checks: others.iter().map(|v| v.method).collect(),
        criterion_value: Some(primary.criterion_value.value()),
        reason: None,
    })
}

/// Every prime `p ≡ 1 (mod D)` up to `bound` with each applicable route run
/// and required to agree; rows for trivial primes are dropped.
pub fn scan_lambda_rows(field: &QuadField, bound: u64, workers: usize) -> Result<Vec<LambdaRow>> {
    scan_lambda_rows_range(field, 3, bound, workers)
}

/// [`scan_lambda_rows`] restricted to `lower <= p <= upper`.
pub fn scan_lambda_rows_range(
    field: &QuadField,
    lower: u64,
    upper: u64,
    workers: usize,
) -> Result<Vec<LambdaRow>> {
    ensure!(
        upper <= SCAN_LIMIT,
        Error::SizeGuard(format!("bound {upper} above the scan limit {SCAN_LIMIT}"))
    );
    let range = PrimeRange::new(lower.max(3), upper.max(3), Some((field.modulus(), 1)))?;
    let primes: Vec<u64> = sieve_primes(range).collect();
    let rows = try_ordered_map(&primes, workers, |&p| cross_checked_row(field, p))?;
    Ok(rows
        .into_iter()
        .filter(|r| r.status != LambdaStatus::Trivial)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfields::make_field;

    #[test]
    fn norm_relation() {
        for (p, big_d) in [
            (13u64, 6u64),
            (13, 4),
            (41, 8),
            (41, 20),
            (73, 24),
            (61, 20),
        ] {
            let ctx = JacobiContext::new(p, big_d, Normalization::Standard).unwrap();
            for i in (1..big_d as i64).filter(|&i| gcd(i as u64, big_d) == 1) {
                let product = ctx.jacobi_sum(i) * ctx.jacobi_sum(-i);
                assert_eq!(product.value(), p, "p={p} D={big_d} i={i}");
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert!(jacobi_sum_mod_p2(13, 6, -1).unwrap().pow(12).is_one());
        assert!(!jacobi_sum_mod_p2(7, 6, -1).unwrap().pow(6).is_one());
        assert!(jacobi_sum_mod_p2(11, 6, 1).is_err());
        assert!(jacobi_sum_mod_p2(13, 6, 2).is_err());
    }

    #[test]
    fn matches_gauss_factorial_ratio() {
        // J(ψ^{-1}) ≡ -((2M)_p! / (M)_p!^2) with M = (p^2 - 1)/D
        for (p, big_d) in [(13u64, 6u64), (37, 6), (29, 4), (41, 8), (61, 20)] {
            let ratio = gaussfact::ratio_value(p, big_d, 1).unwrap();
            let j = jacobi_sum_mod_p2(p, big_d, -1).unwrap();
            assert_eq!(j.pow(p - 1).inverse().unwrap(), ratio, "p={p} D={big_d}");
        }
    }

    #[test]
    fn psi_has_order_d() {
        for (p, big_d) in [(13u64, 6u64), (41, 8), (61, 20), (73, 24)] {
            let ctx = JacobiContext::new(p, big_d, Normalization::Standard).unwrap();
            let z = ctx.psi_of_generator();
            assert!(z.pow(big_d).is_one());
            for q in crate::modmath::prime_factors(big_d) {
                assert!(!z.pow(big_d / q).is_one());
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let k3 = make_field(3).unwrap();
        let qi = make_field(1).unwrap();
        assert!(lambda_criterion_jacobi(&k3, 13).unwrap().verdict);
        assert!(!lambda_criterion_jacobi(&qi, 13).unwrap().verdict);
        assert!(lambda_criterion_jacobi(&k3, 76543).unwrap().verdict);
        assert!(matches!(
            lambda_criterion_jacobi(&qi, 7),
            Err(Error::Inapplicable { .. })
        ));
        assert!(lambda_criterion_jacobi(&make_field(5).unwrap(), 29).is_err());
    }

    #[test]
    fn cornacchia_solutions() {
        assert_eq!(cornacchia(1, 13), Some((3, 2)));
        assert_eq!(cornacchia(2, 11), Some((3, 1)));
        assert_eq!(cornacchia(1, 7), None);
        let (x, y) = cornacchia_4p(7, 29).unwrap();
        assert_eq!(x * x + 7 * y * y, 116);
        let (x, y) = cornacchia_4p(3, 7).unwrap();
        assert_eq!(x * x + 3 * y * y, 28);
    }

    #[test]
    fn gold_examples() {
        let qi = make_field(1).unwrap();
        let k3 = make_field(3).unwrap();
        assert!(cornacchia_gold(&qi, 29789).unwrap().verdict);
        assert!(!cornacchia_gold(&qi, 5).unwrap().verdict);
        assert!(cornacchia_gold(&k3, 13).unwrap().verdict);
        assert!(cornacchia_gold(&k3, 181).unwrap().verdict);
        assert!(!cornacchia_gold(&k3, 7).unwrap().verdict);
        assert!(cornacchia_gold(&make_field(5).unwrap(), 41).is_err());
        assert!(cornacchia_gold(&qi, 7).is_err());
    }

    #[test]
    fn gold_is_blind_to_root_choice() {
        for d in [1u64, 2, 3, 7, 11] {
            let field = make_field(d).unwrap();
            for p in (3..600).filter(|&p| is_prime_u64(p) && chi(&field, p as i64) == 1) {
                let a = cornacchia_gold_with(&field, p, RootChoice::Principal).unwrap();
                let b = cornacchia_gold_with(&field, p, RootChoice::Conjugate).unwrap();
                assert_eq!(a.verdict, b.verdict, "d={d} p={p}");
                let c = gold_oracle(&field, p, RootChoice::Principal).unwrap();
                assert_eq!(a.verdict, c.verdict, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn fq_value_equals_ratio_value() {
        for d in [1u64, 2, 3, 5, 6] {
            let field = make_field(d).unwrap();
            for p in (3..500).filter(|&p| is_prime_u64(p) && p % field.modulus() == 1) {
                let v = lambda_criterion_fq(&field, p).unwrap();
                let ratio = gaussfact::ratio_value(p, field.modulus(), 1).unwrap();
                assert_eq!(v.criterion_value, ratio, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn flipped_normalization_breaks_agreement() {
        let k3 = make_field(3).unwrap();
        let flipped = lambda_criterion_jacobi_with(&k3, 13, Normalization::Flipped).unwrap();
        assert!(!flipped.verdict);
    }

    #[test]
    fn literal_ratio_disagrees_with_gold_beyond_r_one() {
        // p^r ≡ 1 (mod D) with r > 1: the single-ratio formula and Gold's
        // criterion part ways.
        let k5 = make_field(5).unwrap();
        assert!(gaussfact::exceptional_ratio(3, 20, 4).unwrap());
        assert!(!gold_oracle(&k5, 3, RootChoice::Principal).unwrap().verdict);
        let k2 = make_field(2).unwrap();
        assert!(gaussfact::exceptional_ratio(19, 8, 2).unwrap());
        assert!(!gold_oracle(&k2, 19, RootChoice::Principal).unwrap().verdict);
    }

    #[test]
    fn scan_examples() {
        let k3 = make_field(3).unwrap();
        let qi = make_field(1).unwrap();
        let hits: Vec<u64> = scan_lambda(&k3, 3000, 2)
            .unwrap()
            .iter()
            .map(|v| v.p)
            .collect();
        assert_eq!(hits, vec![13, 181, 2521]);
        assert!(scan_lambda(&k3, 10, 1).unwrap().is_empty());
        assert!(scan_lambda(&qi, 20000, 1).unwrap().is_empty());
    }

    #[test]
    fn cross_checked_scan() {
        let k3 = make_field(3).unwrap();
        let rows = scan_lambda_rows(&k3, 3000, 2).unwrap();
        let ps: Vec<u64> = rows.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![13, 181, 2521]);
        assert_eq!(
            rows[0].cross_checks,
            vec![LambdaMethod::Jacobi, LambdaMethod::Cornacchia]
        );
        let k5 = make_field(5).unwrap();
        for r in scan_lambda_rows(&k5, 3000, 1).unwrap() {
            assert_eq!(r.status, LambdaStatus::NonTrivial);
            assert_eq!(r.cross_checks, vec![LambdaMethod::Jacobi]);
        }
        // h = 3 for d = 23: p = 3 would be inapplicable but is not 1 mod 46
        let k23 = make_field(23).unwrap();
        assert!(scan_lambda_rows(&k23, 500, 1).is_ok());
    }
}
