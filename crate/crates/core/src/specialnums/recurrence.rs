//! Convolution recurrences from the defining generating functions, generic
//! over the coefficient ring. Binomial rows are advanced in the ring itself
//! by Pascal's rule so the residue case never touches big integers.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::modmath::Scalar;

fn next_row<S: Scalar>(row: &[S]) -> Vec<S> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(row[0].clone());
    for w in row.windows(2) {
        next.push(w[0].clone() + w[1].clone());
    }
    next.push(row[row.len() - 1].clone());
    next
}

fn not_invertible<S: Scalar>(ring: &S::Ring, d: i64) -> Error {
    Error::Precondition(format!("{d} is not invertible in {ring:?}"))
}

/// `B_0 ..= B_{n_max}` from `sum_{k<=n} C(n+1, k) B_k = 0`, `B_1 = -1/2`.
pub fn bernoulli<S: Scalar>(ring: &S::Ring, n_max: usize) -> Result<Vec<S>> {
    let mut values = vec![S::zero(ring); n_max + 1];
    values[0] = S::one(ring);
    // row holds C(n + 1, .)
    let mut row = next_row(&[S::one(ring)]);
    for n in 1..=n_max {
        row = next_row(&row);
        if n > 1 && n % 2 == 1 {
            continue;
        }
        let mut acc = S::zero(ring);
        for k in 0..n {
            if !values[k].is_zero() {
                acc = acc + row[k].clone() * values[k].clone();
            }
        }
        let d = n as i64 + 1;
        values[n] = -(acc
            .div_i64(ring, d)
            .ok_or_else(|| not_invertible::<S>(ring, d))?);
    }
    Ok(values)
}

/// `B_n(t) = sum_k C(n, k) B_k t^{n-k}` given `table = [B_0, ..., B_m]`, `m >= n`.
pub fn bernoulli_poly_with<S: Scalar>(ring: &S::Ring, table: &[S], n: usize, t: &S) -> S {
    assert!(table.len() > n, "Bernoulli table too short for index {n}");
    let mut binom = BigInt::from(1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(S::from_bigint(ring, &binom) * table[k].clone());
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    // Horner in t over k = 0..=n with t^{n-k}
    let mut acc = S::zero(ring);
    for c in coeffs {
        acc = acc * t.clone() + c;
    }
    acc
}

/// `E_0 ..= E_{n_max}` from `sum_j C(n, 2j) E_{n-2j} = 0` (`n >= 2` even), `E_0 = 1`.
pub fn euler<S: Scalar>(ring: &S::Ring, n_max: usize) -> Vec<S> {
    even_convolution(ring, n_max, S::one(ring), |acc| -acc)
}

/// `G_0 ..= G_{n_max}` from `3 G_n + 2 sum_{j>=1} C(n, 2j) G_{n-2j} = 0`, `G_0 = 1/2`.
pub fn glaisher<S: Scalar>(ring: &S::Ring, n_max: usize) -> Result<Vec<S>> {
    let half = S::one(ring)
        .div_i64(ring, 2)
        .ok_or_else(|| not_invertible::<S>(ring, 2))?;
    let minus_two_thirds = S::from_i64(ring, -2)
        .div_i64(ring, 3)
        .ok_or_else(|| not_invertible::<S>(ring, 3))?;
    Ok(even_convolution(ring, n_max, half, |acc| {
        minus_two_thirds.clone() * acc
    }))
}

/// Shared shape of the Euler and Glaisher recurrences: odd entries vanish and
/// the even entry `n` is `finish(sum_{j>=1} C(n, 2j) a_{n-2j})`.
fn even_convolution<S: Scalar>(
    ring: &S::Ring,
    n_max: usize,
    first: S,
    finish: impl Fn(S) -> S,
) -> Vec<S> {
    let mut values = vec![S::zero(ring); n_max + 1];
    values[0] = first;
    let mut row = vec![S::one(ring)];
    for n in 1..=n_max {
        row = next_row(&row);
        if n % 2 == 1 {
            continue;
        }
        let mut acc = S::zero(ring);
        for j in 1..=n / 2 {
            acc = acc + row[2 * j].clone() * values[n - 2 * j].clone();
        }
        values[n] = finish(acc);
    }
    values
}
