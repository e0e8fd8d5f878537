use super::sieve::smallest_prime_factors;
use super::{mul_mod, pow_mod};
use crate::error::{ensure, Error, Result};
use crate::{PrimePower, Residue};

/// Teichmüller representative of `a` modulo `p^k`: the unique `(p-1)`-th
/// root of unity congruent to `a` mod `p`, reached by iterating `x -> x^p`.
pub fn teichmuller_lift(a: i64, p: u64, k: u32) -> Result<Residue> {
    let modulus = PrimePower::new(p, k)?;
    let mut x = Residue::from_i64(a, modulus);
    ensure!(x.is_unit(), Error::Precondition(format!("{p} divides {a}")));
    // k - 1 iterations reach the fixed point; one extra confirms it.
    for _ in 0..k {
        let next = x.pow(p);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// `q_p(a) = (a^{p-1} - 1)/p mod p`.
pub fn fermat_quotient(a: i64, p: u64) -> Result<Residue> {
    let m2 = PrimePower::new(p, 2)?;
    let x = Residue::from_i64(a, m2);
    ensure!(x.is_unit(), Error::Precondition(format!("{p} divides {a}")));
    let power = x.pow(p - 1).value();
    Ok(Residue::from_u64(
        (power + m2.modulus() - 1) % m2.modulus() / p,
        m2.lower(1)?,
    ))
}

/// Fermat quotients `q_p(a)` for `1 <= a <= bound`, indexed by `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatQuotientTable {
    p: u64,
    values: Vec<u64>,
}

const ABSENT: u64 = u64::MAX;

impl FermatQuotientTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn bound(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `q_p(a) mod p`, or `None` if `p | a` or `a` is out of range.
    pub fn get(&self, a: u64) -> Option<u64> {
        match self.values.get(a as usize) {
            Some(&v) if v != ABSENT => Some(v),
            _ => None,
        }
    }

    /// `(a, q_p(a))` for every `a` in range coprime to `p`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != ABSENT)
            .map(|(a, &v)| (a as u64, v))
    }

    /// `sum_{a=1}^{n} q_p(a) mod p` over `a` coprime to `p`.
    pub fn prefix_sum(&self, n: u64) -> u64 {
        let n = n.min(self.bound()) as usize;
        self.values[1..=n]
            .iter()
            .filter(|&&v| v != ABSENT)
            .fold(0u64, |acc, &v| (acc + v) % self.p)
    }
}

/// Bulk Fermat quotients. `a^{p-1} mod p^2` is exponentiated only at prime
/// `a`; composite entries come from multiplicativity over a smallest-prime-
/// factor sieve.
pub fn fermat_quotient_table(p: u64, bound: u64) -> Result<FermatQuotientTable> {
    PrimePower::new(p, 2)?;
    let m = p * p;
    ensure!(
        bound < m,
        Error::Precondition(format!("bound {bound} must be below p^2 = {m}"))
    );
    let spf = smallest_prime_factors(bound);
    let n = bound as usize;
    let mut powers = vec![0u64; n + 1];
    let mut values = vec![ABSENT; n + 1];
    if n >= 1 {
        powers[1] = 1;
        values[1] = 0;
    }
    for a in 2..=n {
        if a as u64 % p == 0 {
            continue;
        }
        let f = spf[a] as usize;
        let power = if f == a {
            pow_mod(a as u64, p - 1, m)
        } else {
            mul_mod(powers[f], powers[a / f], m)
        };
        powers[a] = power;
        values[a] = (power - 1) / p % p;
    }
    Ok(FermatQuotientTable { p, values })
}

/// `w_p = ((p-1)! + 1)/p mod p`.
pub fn wilson_quotient(p: u64) -> Result<Residue> {
    let m2 = PrimePower::new(p, 2)?;
    let m = m2.modulus();
    let mut f = 1u64;
    for a in 2..p {
        f = mul_mod(f, a, m);
    }
    Ok(Residue::from_u64((f + 1) % m / p, m2.lower(1)?))
}

/// `inv[a] = a^{-1} mod p` for `1 <= a <= n < p` (index 0 unused).
pub fn inverse_table(n: u64, p: u64) -> Vec<u64> {
    let n = n as usize;
    let mut inv = vec![0u64; n + 1];
    if n >= 1 {
        inv[1] = 1;
    }
    for a in 2..=n {
        let a64 = a as u64;
        inv[a] = (p - (p / a64) * inv[(p % a64) as usize] % p) % p;
    }
    inv
}

/// `H_n = sum_{a=1}^n 1/a mod p`; requires `n < p` so every term is invertible.
pub fn harmonic_mod(n: u64, p: u64) -> Result<Residue> {
    let m1 = PrimePower::new(p, 1)?;
    ensure!(
        n < p,
        Error::Precondition(format!("harmonic sum H_{n} has a term divisible by {p}"))
    );
    let sum = inverse_table(n, p)[1..]
        .iter()
        .fold(0u64, |acc, &v| (acc + v) % p);
    Ok(Residue::from_u64(sum, m1))
}
