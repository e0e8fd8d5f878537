//! Flat `u32` kernel for Euler and Glaisher numbers modulo `m = p^k < 2^32`
//! with `n_max < p`.
//!
//! Dividing through by `n!` turns the binomial recurrences into plain
//! convolutions: with `e_n = E_n / n!`,
//! `e_n = -sum_{j>=1} e_{n-2j} / (2j)!`, and likewise
//! `g_n = -(2/3) sum_{j>=1} g_{n-2j} / (2j)!` for `g_n = G_n / n!`.

use crate::modmath::{inv_mod, mul_mod};

const LANES: usize = 16;

/// Moduli below this keep sixteen `u32 * u32` products inside a `u64`.
const NARROW_LIMIT: u64 = 1 << 30;

fn dot(a: &[u32], b: &[u32], m: u64) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    if m >= NARROW_LIMIT {
        let s: u128 = a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum();
        return (s % m as u128) as u64;
    }
    let mut acc = 0u64;
    let (ac, bc) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let (at, bt) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        let mut s = 0u64;
        for k in 0..LANES {
            s += x[k] as u64 * y[k] as u64;
        }
        acc += s % m;
    }
    let mut s = 0u64;
    for (&x, &y) in at.iter().zip(bt) {
        s += x as u64 * y as u64;
    }
    (acc + s % m) % m
}

pub(super) enum Series {
    Euler,
    Glaisher,
}

/// Even-index values `a_0, a_2, ..., a_{2*half}` modulo `m`.
pub(super) fn even_values(series: Series, half: usize, p: u64, m: u64) -> Vec<u64> {
    assert!(
        m < 1 << 32 && (2 * half as u64) < p,
        "kernel needs m < 2^32 and n_max < p"
    );
    let n_max = 2 * half;
    let mut fact = vec![1u64; n_max + 1];
    for i in 1..=n_max {
        fact[i] = mul_mod(fact[i - 1], i as u64, m);
    }
    let mut inv_fact = vec![1u64; n_max + 1];
    inv_fact[n_max] = inv_mod(fact[n_max], m).expect("n! is a unit below p");
    for i in (1..=n_max).rev() {
        inv_fact[i - 1] = mul_mod(inv_fact[i], i as u64, m);
    }
    let c: Vec<u32> = (0..=half).map(|j| inv_fact[2 * j] as u32).collect();

    let (first, scale) = match series {
        Series::Euler => (1, m - 1),
        Series::Glaisher => {
            let inv2 = inv_mod(2, m).expect("p > 2");
            let inv3 = inv_mod(3, m).expect("p > 3");
            (inv2, m - mul_mod(2, inv3, m))
        }
    };

    // rev[half - i] = a_{2i} / (2i)!, so each convolution is a dot product
    // of two ascending slices.
    let mut rev = vec![0u32; half + 1];
    rev[half] = first as u32;
    for i in 1..=half {
        let s = dot(&rev[half - i + 1..=half], &c[1..=i], m);
        rev[half - i] = mul_mod(s, scale, m) as u32;
    }
    (0..=half)
        .map(|i| mul_mod(rev[half - i] as u64, fact[2 * i], m))
        .collect()
}
