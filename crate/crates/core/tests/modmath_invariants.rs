use lambda_sieve_core::modmath::{
    fermat_quotient, inv_mod, sieve_primes, teichmuller_lift, PrimeRange,
};
use lambda_sieve_core::{PrimePower, Residue};
use proptest::prelude::*;

fn odd_primes(upper: u64) -> Vec<u64> {
    sieve_primes(PrimeRange::new(3, upper, None).unwrap()).collect()
}

/// `q_p(a)` for every `0 <= a < p^2`, by direct exponentiation; zero where `p | a`.
fn quotients(p: u64) -> Vec<u64> {
    (0..p * p)
        .map(|a| fermat_quotient(a as i64, p).map_or(0, |r| r.value()))
        .collect()
}

#[test]
fn fermat_quotient_is_logarithmic_up_to_100() {
    for p in odd_primes(100) {
        let p2 = p * p;
        let q = quotients(p);
        for a in (1..p2).filter(|a| a % p != 0) {
            for b in (1..p2).step_by(7).filter(|b| b % p != 0) {
                let (a_, b_) = (a as usize, b as usize);
                assert_eq!(
                    q[(a * b % p2) as usize],
                    (q[a_] + q[b_]) % p,
                    "p={p} a={a} b={b}"
                );
                let a_over_b = a * inv_mod(b, p2).unwrap() % p2;
                assert_eq!(
                    q[a_over_b as usize],
                    (q[a_] + p - q[b_]) % p,
                    "p={p} a={a} b={b}"
                );
            }
        }
    }
}

#[test]
fn fermat_quotient_shift_by_p_up_to_100() {
    for p in odd_primes(100) {
        let q = quotients(p);
        for a in (1..p * p - p).filter(|a| a % p != 0) {
            let inv = inv_mod(a % p, p).unwrap();
            assert_eq!(
                q[(a + p) as usize],
                (q[a as usize] + p - inv) % p,
                "p={p} a={a}"
            );
        }
    }
}

#[test]
fn unit_decomposition_up_to_50() {
    for p in odd_primes(50) {
        let m2 = PrimePower::new(p, 2).unwrap();
        let q = quotients(p);
        for b0 in 1..p {
            let lift = Residue::from_u64(b0, m2).pow(p);
            for b1 in 0..p {
                let b = Residue::from_u64(b0 + b1 * p, m2);
                let t = (b1 * inv_mod(b0, p).unwrap() + p - q[b0 as usize]) % p;
                let rhs = lift * Residue::from_u64(1 + t * p, m2);
                assert_eq!(b, rhs, "p={p} b0={b0} b1={b1}");
            }
        }
    }
}

proptest! {
    #[test]
    fn teichmuller_is_a_root_of_unity(idx in 0usize..24, a in 1i64..1_000_000, k in 1u32..=3) {
        let p = odd_primes(100)[idx];
        prop_assume!(a % p as i64 != 0);
        let w = teichmuller_lift(a, p, k).unwrap();
        prop_assert_eq!(w.value() % p, a as u64 % p);
        prop_assert!(w.pow(p - 1).is_one());
        prop_assert_eq!(w.pow(p), w);
    }

    #[test]
    fn teichmuller_is_multiplicative(idx in 0usize..24, a in 1i64..10_000, b in 1i64..10_000) {
        let p = odd_primes(100)[idx];
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        let wa = teichmuller_lift(a, p, 3).unwrap();
        let wb = teichmuller_lift(b, p, 3).unwrap();
        prop_assert_eq!(wa * wb, teichmuller_lift(a * b, p, 3).unwrap());
    }
}
