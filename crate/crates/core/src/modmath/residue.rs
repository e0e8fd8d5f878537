use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::primality::is_prime_u64;
use super::word::ModWord;
use crate::error::{ensure, Error, Result};

/// Largest supported exponent `k` in a modulus `p^k`.
pub const MAX_EXPONENT: u32 = 3;

/// A modulus `p^k` with `p` an odd prime and `1 <= k <= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPrimePower", into = "RawPrimePower")]
pub struct PrimePowerOf<W: ModWord> {
    p: W,
    k: u32,
    modulus: W,
}

#[derive(Serialize, Deserialize)]
struct RawPrimePower {
    p: u64,
    k: u32,
}

impl<W: ModWord> TryFrom<RawPrimePower> for PrimePowerOf<W> {
    type Error = Error;
    fn try_from(raw: RawPrimePower) -> Result<Self> {
        Self::new(raw.p, raw.k)
    }
}

impl<W: ModWord> From<PrimePowerOf<W>> for RawPrimePower {
    fn from(m: PrimePowerOf<W>) -> Self {
        RawPrimePower {
            p: m.p.to_u64(),
            k: m.k,
        }
    }
}

impl<W: ModWord> PrimePowerOf<W> {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        ensure!(
            (1..=MAX_EXPONENT).contains(&k),
            Error::InvalidModulus(format!("exponent {k} outside 1..={MAX_EXPONENT}"))
        );
        ensure!(
            p > 2 && is_prime_u64(p),
            Error::InvalidModulus(format!("{p} is not an odd prime"))
        );
        let modulus = p
            .checked_pow(k)
            .and_then(W::from_u64)
            .ok_or_else(|| Error::InvalidModulus(format!("{p}^{k} does not fit the word")))?;
        Ok(Self {
            p: W::from_u64(p).unwrap(),
            k,
            modulus,
        })
    }

    pub fn p(&self) -> u64 {
        self.p.to_u64()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus.to_u64()
    }

    pub(crate) fn word(&self) -> W {
        self.modulus
    }

    /// The modulus `p^j` for `1 <= j <= k`.
    pub fn lower(&self, j: u32) -> Result<Self> {
        ensure!(
            (1..=self.k).contains(&j),
            Error::InvalidModulus(format!("cannot reduce p^{} to p^{j}", self.k))
        );
        Self::new(self.p(), j)
    }
}

impl<W: ModWord> fmt::Display for PrimePowerOf<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// An integer carried modulo a prime power, always in `[0, modulus)`.
///
/// Arithmetic operators panic when the moduli differ; mixing moduli is a
/// logic error, never data-dependent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawResidue", into = "RawResidue")]
pub struct ResidueOf<W: ModWord> {
    value: W,
    modulus: PrimePowerOf<W>,
}

#[derive(Serialize, Deserialize)]
struct RawResidue {
    value: u64,
    p: u64,
    k: u32,
}

impl<W: ModWord> TryFrom<RawResidue> for ResidueOf<W> {
    type Error = Error;
    fn try_from(raw: RawResidue) -> Result<Self> {
        let modulus = PrimePowerOf::new(raw.p, raw.k)?;
        ensure!(
            raw.value < modulus.modulus(),
            Error::InvalidModulus(format!(
                "value {} not reduced modulo {}",
                raw.value, modulus
            ))
        );
        Ok(Self::from_u64(raw.value, modulus))
    }
}

impl<W: ModWord> From<ResidueOf<W>> for RawResidue {
    fn from(r: ResidueOf<W>) -> Self {
        RawResidue {
            value: r.value.to_u64(),
            p: r.modulus.p(),
            k: r.modulus.k(),
        }
    }
}

impl<W: ModWord> ResidueOf<W> {
    pub fn from_u64(value: u64, modulus: PrimePowerOf<W>) -> Self {
        let m = modulus.modulus();
        Self {
            value: W::from_u64(value % m).unwrap(),
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: PrimePowerOf<W>) -> Self {
        Self::from_i128(value as i128, modulus)
    }

    pub fn from_i128(value: i128, modulus: PrimePowerOf<W>) -> Self {
        let m = modulus.modulus() as i128;
        Self::from_u64(value.rem_euclid(m) as u64, modulus)
    }

    pub fn zero(modulus: PrimePowerOf<W>) -> Self {
        Self {
            value: W::zero(),
            modulus,
        }
    }

    pub fn one(modulus: PrimePowerOf<W>) -> Self {
        Self {
            value: W::one(),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value.to_u64()
    }

    pub fn modulus(&self) -> PrimePowerOf<W> {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// True when the value is a unit, i.e. not divisible by `p`.
    pub fn is_unit(&self) -> bool {
        self.value() % self.modulus.p() != 0
    }

    /// `self^exponent` by square-and-multiply; `x^0 = 1`.
    pub fn pow(self, exponent: u64) -> Self {
        Self {
            value: self.value.pow_mod(exponent, self.modulus.word()),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Option<Self> {
        let m = self.modulus.modulus();
        super::inv_mod(self.value(), m).map(|v| Self::from_u64(v, self.modulus))
    }

    /// Reduce to the modulus `p^j`, `j <= k`.
    pub fn reduce(self, j: u32) -> Result<Self> {
        let lower = self.modulus.lower(j)?;
        Ok(Self::from_u64(self.value(), lower))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "residue modulus mismatch");
    }
}

/// `base^exponent` at the modulus of `base`.
pub fn mod_pow<W: ModWord>(base: ResidueOf<W>, exponent: u64) -> ResidueOf<W> {
    base.pow(exponent)
}

impl<W: ModWord> Add for ResidueOf<W> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        let m = self.modulus.word();
        Self {
            value: self.value.add_mod(rhs.value, m),
            modulus: self.modulus,
        }
    }
}

impl<W: ModWord> Sub for ResidueOf<W> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        let m = self.modulus.word();
        Self {
            value: self.value.sub_mod(rhs.value, m),
            modulus: self.modulus,
        }
    }
}

impl<W: ModWord> Mul for ResidueOf<W> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        let m = self.modulus.word();
        Self {
            value: self.value.mul_mod(rhs.value, m),
            modulus: self.modulus,
        }
    }
}

impl<W: ModWord> Neg for ResidueOf<W> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::zero(self.modulus) - self
    }
}

impl<W: ModWord> fmt::Display for ResidueOf<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{PrimePower, Residue, Residue32};
    use proptest::prelude::*;

    fn m(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    #[test]
    fn pow_examples() {
        let two = Residue::from_u64(2, m(5, 2));
        assert_eq!(mod_pow(two, 4).value(), 16);
        assert_eq!(mod_pow(two, 20).value(), 1);
        let x = Residue::from_u64(123, m(13, 2));
        assert!(mod_pow(x, 0).is_one());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimePower::new(9, 2).is_err());
        assert!(PrimePower::new(2, 2).is_err());
        assert!(PrimePower::new(7, 4).is_err());
        assert!(PrimePowerOf::<u32>::new(65537, 2).is_err());
        assert!(PrimePowerOf::<u32>::new(65521, 2).is_ok());
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn mixed_moduli_panic() {
        let _ = Residue::from_u64(1, m(5, 2)) + Residue::from_u64(1, m(7, 2));
    }

    #[test]
    fn negative_values_reduce() {
        let r = Residue::from_i64(-1, m(7, 2));
        assert_eq!(r.value(), 48);
        assert_eq!((-r).value(), 1);
        assert!(Residue::from_u64(14, m(7, 2)).inverse().is_none());
    }

    proptest! {
        #[test]
        fn value_always_canonical(v in any::<i64>(), idx in 0usize..6) {
            let p = [3u64, 5, 7, 101, 65521, 4294967291][idx];
            let r = Residue::from_i64(v, m(p, 2));
            prop_assert!(r.value() < p * p);
            prop_assert_eq!(r.value() as i128, (v as i128).rem_euclid((p * p) as i128));
        }

        #[test]
        fn narrow_word_agrees_with_wide(a in 0u64..1_000_000, b in 0u64..1_000_000, e in 0u64..10_000) {
            let wide = m(997, 2);
            let narrow = PrimePowerOf::<u32>::new(997, 2).unwrap();
            let (x, y) = (Residue::from_u64(a, wide), Residue::from_u64(b, wide));
            let (xn, yn) = (Residue32::from_u64(a, narrow), Residue32::from_u64(b, narrow));
            prop_assert_eq!((x * y).value(), (xn * yn).value());
            prop_assert_eq!((x - y).value(), (xn - yn).value());
            prop_assert_eq!(x.pow(e).value(), xn.pow(e).value());
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..1_000_000) {
            let r = Residue::from_u64(a, m(1009, 2));
            match r.inverse() {
                Some(inv) => prop_assert!((r * inv).is_one()),
                None => prop_assert_eq!(a % 1009, 0),
            }
        }
    }
}
