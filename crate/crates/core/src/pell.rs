//! Primes `p = (γ^q + γ^{-q})/4`, `γ = 2 + sqrt 3`, equivalently
//! `p^2 = 3x^2 + 3x + 1`.
//!
//! `γ^n = a_n + b_n sqrt 3` with `a_n, b_n` both following
//! `s_{n+1} = 4 s_n - s_{n-1}`; `u_n = 2 a_n` is the trace. For odd `q`,
//! `X = a_q = 2p` and `Y = b_q = 2x + 1` solve `X^2 - 3 Y^2 = 1`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure, Error, Result};
use crate::gaussfact::exceptional_fq;
use crate::modmath::{classify, is_prime_u64, sieve_primes, PrimalityStatus, PrimeRange};
use crate::scan::ordered_map;

/// Candidates with a prime factor below this are rejected before any
/// probable-prime test.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Progress is reported after each block of this many indices.
pub const PROGRESS_INTERVAL: u64 = 100;

/// Largest `p` handed to [`cd_implies_nontrivial`].
pub const NONTRIVIAL_CHECK_LIMIT: u64 = 10_000_000;

mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellRecord {
    pub q: u64,
    #[serde(with = "decimal")]
    pub p_candidate: BigUint,
    pub digits: usize,
    pub status: PrimalityStatus,
    /// `p^2 = 3x^2 + 3x + 1`.
    #[serde(with = "decimal")]
    pub x: BigUint,
}

/// `(a_n, b_n)` with `γ^n = a_n + b_n sqrt 3`, for `n = 0, 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct PellSequence {
    n: u64,
    a: (BigUint, BigUint),
    b: (BigUint, BigUint),
}

impl Default for PellSequence {
    fn default() -> Self {
        PellSequence {
            n: 0,
            a: (BigUint::one(), BigUint::from(2u32)),
            b: (BigUint::zero(), BigUint::one()),
        }
    }
}

impl Iterator for PellSequence {
    type Item = (u64, BigUint, BigUint);

    fn next(&mut self) -> Option<Self::Item> {
        fn step(pair: &mut (BigUint, BigUint)) -> BigUint {
            let next = &pair.1 * 4u32 - &pair.0;
            let cur = std::mem::replace(&mut pair.0, std::mem::replace(&mut pair.1, next));
            cur
        }
        let item = (self.n, step(&mut self.a), step(&mut self.b));
        self.n += 1;
        Some(item)
    }
}

fn check_odd(q: u64) -> Result<()> {
    ensure!(
        q % 2 == 1,
        Error::Precondition(format!("q = {q} must be odd"))
    );
    Ok(())
}

/// `u_q / 4` from the trace recurrence `u_0 = 2, u_1 = 4, u_{n+1} = 4u_n - u_{n-1}`.
pub fn pell_value(q: u64) -> Result<BigUint> {
    check_odd(q)?;
    let (mut prev, mut cur) = (BigUint::from(2u32), BigUint::from(4u32));
    for _ in 1..q {
        let next = &cur * 4u32 - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    let (p, rem) = cur.div_rem(&BigUint::from(4u32));
    ensure!(
        rem.is_zero(),
        Error::Precondition(format!("u_{q} is not divisible by 4"))
    );
    Ok(p)
}

/// `(p, x)` from `a_q = 2p`, `b_q = 2x + 1`.
fn record_parts(a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    (a >> 1u32, (b - 1u32) >> 1u32)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        sieve_primes(PrimeRange::new(3, TRIAL_DIVISION_LIMIT, None).expect("valid range"))
            .map(|p| p as u32)
            .collect()
    })
}

/// Primality status after trial division below [`TRIAL_DIVISION_LIMIT`].
fn candidate_status(n: &BigUint) -> PrimalityStatus {
    if n.is_even() {
        return if *n == BigUint::from(2u32) {
            PrimalityStatus::PrimeProvenSmall
        } else {
            PrimalityStatus::Composite
        };
    }
    let small = n.to_u64();
    for &q in small_primes() {
        let q = q as u64;
        if small.is_some_and(|s| s < q * q) {
            break;
        }
        if (n % q).is_zero() {
            return if small == Some(q) {
                PrimalityStatus::PrimeProvenSmall
            } else {
                PrimalityStatus::Composite
            };
        }
    }
    classify(n)
}

/// Records for odd prime `q` in `[q_lo, q_hi]` whose candidate is not
/// composite, in increasing `q`.
pub fn cd_search_range(q_lo: u64, q_hi: u64, workers: usize) -> Result<Vec<PellRecord>> {
    let indices: Vec<(u64, BigUint, BigUint)> = PellSequence::default()
        .take_while(|(n, _, _)| *n <= q_hi)
        .filter(|(n, _, _)| *n >= q_lo.max(3) && is_prime_u64(*n))
        .collect();
    let statuses = ordered_map(&indices, workers, |(_, a, _)| {
        candidate_status(&(a >> 1u32))
    })?;
    Ok(indices
        .into_iter()
        .zip(statuses)
        .filter(|(_, s)| *s != PrimalityStatus::Composite)
        .map(|((q, a, b), status)| {
            let (p, x) = record_parts(&a, &b);
            PellRecord {
                q,
                digits: p.to_str_radix(10).len(),
                p_candidate: p,
                status,
                x,
            }
        })
        .collect())
}

/// [`cd_search_range`] over `3 <= q <= q_bound` in blocks of
/// [`PROGRESS_INTERVAL`], calling `progress` with the last index covered.
pub fn cd_search_with(
    q_bound: u64,
    workers: usize,
    mut progress: impl FnMut(u64, &[PellRecord]),
) -> Result<Vec<PellRecord>> {
    ensure!(
        q_bound >= 3,
        Error::Precondition(format!("q_bound = {q_bound} < 3"))
    );
    let mut records = Vec::new();
    let mut lo = 0;
    while lo <= q_bound {
        let hi = (lo + PROGRESS_INTERVAL - 1).min(q_bound);
        let block = cd_search_range(lo, hi, workers)?;
        progress(hi, &block);
        records.extend(block);
        lo = hi + 1;
    }
    Ok(records)
}

pub fn cd_search(q_bound: u64, workers: usize) -> Result<Vec<PellRecord>> {
    cd_search_with(q_bound, workers, |_, _| {})
}

/// `(2p)^2 - 3(2x + 1)^2 = 1`.
pub fn pell_identity_holds(record: &PellRecord) -> bool {
    let big_x = &record.p_candidate * 2u32;
    let big_y = &record.x * 2u32 + 1u32;
    &big_x * &big_x == &big_y * &big_y * 3u32 + 1u32
}

/// Every such prime is 1-exceptional for `m = 3`, hence non-trivial for
/// `Q(sqrt -3)`; checked here with the Fermat-quotient route.
pub fn cd_implies_nontrivial(record: &PellRecord) -> Result<bool> {
    ensure!(
        record.status != PrimalityStatus::Composite,
        Error::Precondition(format!("candidate for q = {} is composite", record.q))
    );
    let p = record
        .p_candidate
        .to_u64()
        .filter(|&p| p <= NONTRIVIAL_CHECK_LIMIT)
        .ok_or_else(|| {
            Error::SizeGuard(format!(
                "p for q = {} above {NONTRIVIAL_CHECK_LIMIT}",
                record.q
            ))
        })?;
    Ok(exceptional_fq(p, 3)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(pell_value(1).unwrap(), BigUint::from(1u32));
        assert_eq!(pell_value(3).unwrap(), BigUint::from(13u32));
        assert_eq!(
            pell_value(79).unwrap().to_string(),
            "381765135195632792959100810331957408101589361"
        );
        assert!(pell_value(4).is_err());
    }

    #[test]
    fn sequence_matches_pell_value() {
        for (n, a, b) in PellSequence::default().take(40) {
            if n % 2 == 1 {
                assert_eq!(&a >> 1u32, pell_value(n).unwrap(), "n={n}");
            }
            assert_eq!(&a * &a, &b * &b * 3u32 + 1u32, "n={n}");
        }
        let (_, a3, b3) = PellSequence::default().nth(3).unwrap();
        assert_eq!((a3, b3), (BigUint::from(26u32), BigUint::from(15u32)));
    }

    #[test]
    fn small_search() {
        let records = cd_search(19, 2).unwrap();
        let got: Vec<(u64, String)> = records
            .iter()
            .map(|r| (r.q, r.p_candidate.to_string()))
            .collect();
        let want = [
            (3, "13"),
            (5, "181"),
            (7, "2521"),
            (11, "489061"),
            (13, "6811741"),
            (17, "1321442641"),
            (19, "18405321661"),
        ];
        assert_eq!(got.len(), want.len());
        for ((q, p), (wq, wp)) in got.iter().zip(want) {
            assert_eq!((*q, p.as_str()), (wq, wp));
        }
        assert_eq!(records[0].x, BigUint::from(7u32));
        assert!(records.iter().all(pell_identity_holds));
    }

    #[test]
    fn composite_indices() {
        for q in [9u64, 15, 21] {
            let p = pell_value(q).unwrap();
            assert_eq!(candidate_status(&p), PrimalityStatus::Composite, "q={q}");
        }
    }

    #[test]
    fn nontrivial_examples() {
        for r in cd_search(13, 1).unwrap() {
            assert!(cd_implies_nontrivial(&r).unwrap(), "q={}", r.q);
        }
        let big = cd_search(17, 1).unwrap().pop().unwrap();
        assert!(matches!(
            cd_implies_nontrivial(&big),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn record_json_uses_decimal_strings() {
        let r = cd_search(5, 1).unwrap().pop().unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"p_candidate\":\"181\""), "{text}");
        let back: PellRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
