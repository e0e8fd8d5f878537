use num_integer::Roots;

use crate::error::{ensure, Error, Result};

/// Closed interval of candidate primes, optionally restricted to one residue
/// class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    pub lower: u64,
    pub upper: u64,
    /// `(m, c)`: keep only primes `p ≡ c (mod m)`.
    pub residue_filter: Option<(u64, u64)>,
}

impl PrimeRange {
    pub fn new(lower: u64, upper: u64, residue_filter: Option<(u64, u64)>) -> Result<Self> {
        ensure!(
            lower >= 3,
            Error::Precondition(format!("lower bound {lower} < 3"))
        );
        if let Some((m, c)) = residue_filter {
            ensure!(
                m >= 1,
                Error::Precondition("filter modulus must be positive".into())
            );
            return Ok(Self {
                lower,
                upper,
                residue_filter: Some((m, c % m)),
            });
        }
        Ok(Self {
            lower,
            upper,
            residue_filter,
        })
    }

    /// Primes `p ≡ 1 (mod m)` in `[3, upper]`.
    pub fn one_mod(m: u64, upper: u64) -> Self {
        Self::new(3, upper, Some((m, 1))).expect("valid range")
    }

    fn admits(&self, p: u64) -> bool {
        self.residue_filter.is_none_or(|(m, c)| p % m == c)
    }
}

const SEGMENT: u64 = 1 << 16;

/// Segmented sieve of Eratosthenes over odd numbers; memory is
/// `O(sqrt(upper) + SEGMENT)`.
#[derive(Clone, Debug)]
pub struct SegmentedPrimes {
    range: PrimeRange,
    base: Vec<u64>,
    seg_low: u64,
    composite: Vec<bool>,
    pos: usize,
}

impl SegmentedPrimes {
    fn new(range: PrimeRange) -> Self {
        let root = range.upper.sqrt();
        let base = simple_odd_primes(root);
        let mut it = Self {
            range,
            base,
            seg_low: range.lower,
            composite: Vec::new(),
            pos: 0,
        };
        it.fill();
        it
    }

    fn fill(&mut self) {
        self.composite.clear();
        self.pos = 0;
        if self.seg_low > self.range.upper {
            return;
        }
        let hi = self
            .range
            .upper
            .min(self.seg_low.saturating_add(SEGMENT - 1));
        let len = (hi - self.seg_low + 1) as usize;
        self.composite.resize(len, false);
        for (i, c) in self.composite.iter_mut().enumerate() {
            let n = self.seg_low + i as u64;
            *c = n % 2 == 0 || n < 2;
        }
        for &q in &self.base {
            let sq = q * q;
            if sq > hi {
                break;
            }
            let start = if sq >= self.seg_low {
                sq
            } else {
                self.seg_low.div_ceil(q) * q
            };
            let mut n = start;
            while n <= hi {
                self.composite[(n - self.seg_low) as usize] = true;
                n += q;
            }
        }
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos >= self.composite.len() {
                if self.composite.is_empty() {
                    return None;
                }
                self.seg_low += self.composite.len() as u64;
                self.fill();
                continue;
            }
            let n = self.seg_low + self.pos as u64;
            let composite = self.composite[self.pos];
            self.pos += 1;
            if !composite && self.range.admits(n) {
                return Some(n);
            }
        }
    }
}

/// Primes in `range`, ascending.
pub fn sieve_primes(range: PrimeRange) -> SegmentedPrimes {
    SegmentedPrimes::new(range)
}

fn simple_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in (3..=n).step_by(2) {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(2 * i) {
                composite[j] = true;
            }
        }
    }
    out
}

/// `spf[n]` = smallest prime factor of `n` for `2 <= n <= limit` (0 and 1 map to 0 and 1).
pub fn smallest_prime_factors(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut spf: Vec<u32> = (0..=n as u32).collect();
    let mut i = 2;
    while i * i <= n {
        if spf[i] == i as u32 {
            for j in (i * i..=n).step_by(i) {
                if spf[j] == j as u32 {
                    spf[j] = i as u32;
                }
            }
        }
        i += 1;
    }
    spf
}
