//! Bernoulli, Euler and Glaisher numbers, exactly and modulo prime powers,
//! and the identities tying them to the non-triviality criteria.
//!
//! Generating functions:
//! `x/(e^x - 1)` for `B_n`, `x e^{xt}/(e^x - 1)` for `B_n(t)`,
//! `2/(e^x + e^-x)` for `E_n` and `(3/2)/(e^x + e^-x + 1)` for `G_n`.

mod kernel;
mod recurrence;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::gaussfact;
use crate::modmath::{is_prime_u64, padic_valuation, rational_mod};
use crate::quadfields::QuadField;
use crate::{ExactRational, PrimePower, Residue};

pub use recurrence::{bernoulli, bernoulli_poly_with, euler, glaisher};

/// Largest index accepted by the exact-rational routines.
pub const EXACT_LIMIT: usize = 1000;

/// Largest `p` for which [`bernoulli_criterion`] also runs the exact route.
pub const EXACT_ROUTE_LIMIT: u64 = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    Bernoulli,
    Euler,
    Glaisher,
}

/// `values[n]` is the `n`-th term. `modulus` is `None` for exact sequences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialSequence<S> {
    kind: SequenceKind,
    modulus: Option<PrimePower>,
    values: Vec<S>,
}

pub type ExactSequence = SpecialSequence<ExactRational>;
pub type ResidueSequence = SpecialSequence<Residue>;

impl<S> SpecialSequence<S> {
    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn modulus(&self) -> Option<PrimePower> {
        self.modulus
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&S> {
        self.values.get(n)
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }
}

fn exact_guard(n: usize) -> Result<()> {
    ensure!(
        n <= EXACT_LIMIT,
        Error::SizeGuard(format!("exact index {n} above {EXACT_LIMIT}"))
    );
    Ok(())
}

fn exact(kind: SequenceKind, values: Vec<ExactRational>) -> ExactSequence {
    SpecialSequence {
        kind,
        modulus: None,
        values,
    }
}

fn ratio(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn bernoulli_exact(n_max: usize) -> Result<ExactSequence> {
    exact_guard(n_max)?;
    Ok(exact(SequenceKind::Bernoulli, bernoulli(&(), n_max)?))
}

pub fn bernoulli_poly_exact(n: usize, t: &ExactRational) -> Result<ExactRational> {
    let table = bernoulli_exact(n)?;
    Ok(bernoulli_poly_with(&(), table.values(), n, t))
}

pub fn euler_exact(n_max: usize) -> Result<ExactSequence> {
    exact_guard(n_max)?;
    Ok(exact(SequenceKind::Euler, euler(&(), n_max)))
}

pub fn glaisher_exact(n_max: usize) -> Result<ExactSequence> {
    exact_guard(n_max)?;
    Ok(exact(SequenceKind::Glaisher, glaisher(&(), n_max)?))
}

fn modular(kind: SequenceKind, n_max: usize, modulus: PrimePower) -> Result<ResidueSequence> {
    let p = modulus.p();
    let m = modulus.modulus();
    let values = if kind != SequenceKind::Bernoulli && (n_max as u64) < p && m < 1 << 32 {
        let series = match kind {
            SequenceKind::Euler => kernel::Series::Euler,
            SequenceKind::Glaisher => kernel::Series::Glaisher,
            SequenceKind::Bernoulli => unreachable!("no kernel for Bernoulli numbers"),
        };
        let even = kernel::even_values(series, n_max / 2, p, m);
        let mut values = vec![Residue::zero(modulus); n_max + 1];
        for (i, v) in even.into_iter().enumerate() {
            values[2 * i] = Residue::from_u64(v, modulus);
        }
        values
    } else {
        match kind {
            SequenceKind::Euler => euler(&modulus, n_max),
            SequenceKind::Glaisher => glaisher(&modulus, n_max)?,
            SequenceKind::Bernoulli => bernoulli(&modulus, n_max)?,
        }
    };
    Ok(SpecialSequence {
        kind,
        modulus: Some(modulus),
        values,
    })
}

/// `E_0 ..= E_{n_max}` modulo `p^k`. All-integer; `O(n_max^2)` ring operations.
pub fn euler_mod(n_max: usize, modulus: PrimePower) -> Result<ResidueSequence> {
    modular(SequenceKind::Euler, n_max, modulus)
}

/// `G_0 ..= G_{n_max}` modulo `p^k`, `p > 3`.
pub fn glaisher_mod(n_max: usize, modulus: PrimePower) -> Result<ResidueSequence> {
    ensure!(
        modulus.p() > 3,
        Error::InvalidModulus(format!("Glaisher numbers need p > 3, got {modulus}"))
    );
    modular(SequenceKind::Glaisher, n_max, modulus)
}

/// `B_0 ..= B_{n_max}` modulo `p^k`; fails once `n + 1` hits a multiple of `p`.
pub fn bernoulli_mod(n_max: usize, modulus: PrimePower) -> Result<ResidueSequence> {
    modular(SequenceKind::Bernoulli, n_max, modulus)
}

fn check_prime(p: u64, class: u64) -> Result<()> {
    ensure!(
        p > 3 && is_prime_u64(p) && p % class == 1,
        Error::Precondition(format!("{p} is not a prime > 3 congruent to 1 mod {class}"))
    );
    Ok(())
}

fn last_mod_p2(kind: SequenceKind, p: u64) -> Result<Residue> {
    let modulus = PrimePower::new(p, 2)?;
    let seq = modular(kind, (p - 1) as usize, modulus)?;
    Ok(seq.values[(p - 1) as usize])
}

/// `E_{p-1} mod p^2` for `p ≡ 1 (mod 4)`.
pub fn euler_last(p: u64) -> Result<Residue> {
    check_prime(p, 4)?;
    last_mod_p2(SequenceKind::Euler, p)
}

/// `lambda_p(Q(i)) > 1` iff `E_{p-1} ≡ 0 (mod p^2)`.
pub fn euler_criterion(p: u64) -> Result<bool> {
    Ok(euler_last(p)?.is_zero())
}

/// `G_{p-1} mod p^2` for `p ≡ 1 (mod 3)`, `p > 3`.
pub fn glaisher_last(p: u64) -> Result<Residue> {
    check_prime(p, 3)?;
    last_mod_p2(SequenceKind::Glaisher, p)
}

/// `lambda_p(Q(sqrt -3)) > 1` iff `G_{p-1} ≡ 0 (mod p^2)`.
pub fn glaisher_criterion(p: u64) -> Result<bool> {
    Ok(glaisher_last(p)?.is_zero())
}

/// One row of the Glaisher table: `G_{p-1}` reduced mod `p` and mod `p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlaisherRow {
    pub p: u64,
    pub mod_p: u64,
    pub mod_p2: u64,
}

pub fn glaisher_row(p: u64) -> Result<GlaisherRow> {
    let g = glaisher_last(p)?.value();
    Ok(GlaisherRow {
        p,
        mod_p: g % p,
        mod_p2: g,
    })
}

/// Rows for every prime `7 <= p <= bound` with `p ≡ 1 (mod 3)`.
pub fn glaisher_table(bound: u64) -> Result<Vec<GlaisherRow>> {
    (7..=bound)
        .filter(|&p| p % 3 == 1 && is_prime_u64(p))
        .map(glaisher_row)
        .collect()
}

/// Both evaluations of `B_p(2/D) ≡ 2^p B_p(1/D) (mod p^3)`, each normalised
/// to `(B_p(2/D) - 2^p B_p(1/D)) / p^2 mod p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliRoutes {
    pub p: u64,
    pub d: u64,
    /// Exact rationals; absent above [`EXACT_ROUTE_LIMIT`].
    pub exact: Option<u64>,
    /// `xi_{D/2} - 2 xi_D` from Fermat-quotient sums.
    pub fermat_quotient: u64,
    pub verdict: bool,
}

/// `(B_p(1/m) - 2^p B_p(1/(2m))) / p^2 mod p`, exactly.
pub fn bernoulli_difference_exact(p: u64, m: u64) -> Result<u64> {
    exact_guard(p as usize)?;
    bernoulli_difference_with(&bernoulli(&(), p as usize)?, p, m)
}

/// As [`bernoulli_difference_exact`] with a precomputed `[B_0, ..., B_n]`, `n >= p`.
pub fn bernoulli_difference_with(table: &[ExactRational], p: u64, m: u64) -> Result<u64> {
    let n = p as usize;
    ensure!(
        table.len() > n,
        Error::Precondition(format!("Bernoulli table stops below index {p}"))
    );
    let a = bernoulli_poly_with(&(), table, n, &ratio(1, m as i64));
    let b = bernoulli_poly_with(&(), table, n, &ratio(1, 2 * m as i64));
    let two_p = BigRational::from_integer(BigInt::from(2).pow(p as u32));
    let x = a - two_p * b;
    if x.is_zero() {
        return Ok(0);
    }
    let v = padic_valuation(&x, p).expect("nonzero");
    ensure!(
        v >= 2,
        Error::RouteMismatch {
            p,
            detail: format!("B_p difference has valuation {v} < 2")
        }
    );
    let p2 = BigRational::from_integer(BigInt::from(p * p));
    rational_mod(&(x / p2), p)
}

fn check_maximal_split(p: u64, field: &QuadField) -> Result<()> {
    ensure!(
        field.is_maximal(),
        Error::Precondition(format!(
            "Q(sqrt -{}) does not have maximal class number",
            field.d()
        ))
    );
    ensure!(
        is_prime_u64(p) && p % field.modulus() == 1,
        Error::Precondition(format!(
            "{p} is not a prime congruent to 1 mod {}",
            field.modulus()
        ))
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

pub fn bernoulli_criterion_routes(p: u64, field: &QuadField) -> Result<BernoulliRoutes> {
    check_maximal_split(p, field)?;
    let big_d = field.modulus();
    let xi = gaussfact::xi_values(p, &[big_d / 2, big_d])?;
    let fq = (xi[0].value() + 2 * (p - xi[1].value())) % p;
    let exact = if p <= EXACT_ROUTE_LIMIT {
        let e = bernoulli_difference_exact(p, big_d / 2)?;
        ensure!(
            e == fq,
            Error::RouteMismatch {
                p,
                detail: format!(
                    "exact value {e}, Fermat-quotient value {fq} (d = {})",
                    field.d()
                )
            }
        );
        Some(e)
    } else {
        None
    };
    Ok(BernoulliRoutes {
        p,
        d: field.d(),
        exact,
        fermat_quotient: fq,
        verdict: fq == 0,
    })
}

/// `lambda_p(K) > 1` for a maximal field via `B_p(2/D) ≡ 2^p B_p(1/D) (mod p^3)`.
/// Both routes run when `p <= EXACT_ROUTE_LIMIT` and must agree.
pub fn bernoulli_criterion(p: u64, field: &QuadField) -> Result<bool> {
    Ok(bernoulli_criterion_routes(p, field)?.verdict)
}

/// `B_{2n+1}(1/3) = -(2n+1) G_{2n} / 3^{2n+1}`, exactly.
pub fn glaisher_bernoulli_identity(n: usize) -> Result<bool> {
    let k = 2 * n + 1;
    exact_guard(k)?;
    let table = bernoulli(&(), k)?;
    let lhs = bernoulli_poly_with(&(), &table, k, &ratio(1, 3));
    let g = glaisher::<ExactRational>(&(), 2 * n)?;
    let three_k = BigRational::from_integer(BigInt::from(3).pow(k as u32));
    let rhs = -BigRational::from_integer(BigInt::from(k)) * g[2 * n].clone() / three_k;
    Ok(lhs == rhs)
}

/// `B_{2n+1}(1/6) = ((2^{2n} + 1)/2^{2n}) B_{2n+1}(1/3)`, exactly.
pub fn raabe_identity(n: usize) -> Result<bool> {
    let k = 2 * n + 1;
    exact_guard(k)?;
    let table = bernoulli(&(), k)?;
    let sixth = bernoulli_poly_with(&(), &table, k, &ratio(1, 6));
    let third = bernoulli_poly_with(&(), &table, k, &ratio(1, 3));
    let four_n = BigInt::from(2).pow(2 * n as u32);
    let factor = BigRational::new(&four_n + BigInt::one(), four_n);
    Ok(sixth == factor * third)
}

/// `B_p(1/4) = -p E_{p-1} / 4^p`, exactly.
pub fn euler_bernoulli_identity(p: u64) -> Result<bool> {
    let n = p as usize;
    exact_guard(n)?;
    let table = bernoulli(&(), n)?;
    let lhs = bernoulli_poly_with(&(), &table, n, &ratio(1, 4));
    let e = euler::<ExactRational>(&(), n - 1);
    let four_p = BigRational::from_integer(BigInt::from(4).pow(p as u32));
    let rhs = -BigRational::from_integer(BigInt::from(p)) * e[n - 1].clone() / four_p;
    Ok(lhs == rhs)
}
