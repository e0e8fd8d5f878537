use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::residue::{PrimePowerOf, ResidueOf};
use super::word::ModWord;

/// Coefficient ring for the special-number recurrences: exact rationals, or
/// residues modulo a prime power. `Ring` carries whatever context is needed
/// to build constants (nothing for rationals, the modulus for residues).
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ring: Clone + Debug;

    fn from_bigint(ring: &Self::Ring, v: &BigInt) -> Self;

    fn from_i64(ring: &Self::Ring, v: i64) -> Self {
        Self::from_bigint(ring, &BigInt::from(v))
    }

    fn zero(ring: &Self::Ring) -> Self {
        Self::from_i64(ring, 0)
    }

    fn one(ring: &Self::Ring) -> Self {
        Self::from_i64(ring, 1)
    }

    fn inverse(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;

    fn div_i64(&self, ring: &Self::Ring, d: i64) -> Option<Self> {
        Some(self.clone() * Self::from_i64(ring, d).inverse()?)
    }
}

impl Scalar for BigRational {
    type Ring = ();

    fn from_bigint(_: &(), v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }

    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl<W: ModWord> Scalar for ResidueOf<W> {
    type Ring = PrimePowerOf<W>;

    fn from_bigint(ring: &PrimePowerOf<W>, v: &BigInt) -> Self {
        let m = BigInt::from(ring.modulus());
        let r = v
            .mod_floor(&m)
            .to_u64()
            .expect("reduced below a u64 modulus");
        ResidueOf::from_u64(r, *ring)
    }

    fn from_i64(ring: &PrimePowerOf<W>, v: i64) -> Self {
        ResidueOf::from_i64(v, *ring)
    }

    fn inverse(&self) -> Option<Self> {
        ResidueOf::inverse(*self)
    }

    fn is_zero(&self) -> bool {
        ResidueOf::is_zero(self)
    }
}
