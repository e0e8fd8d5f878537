use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};

/// Machine word a residue is stored in, paired with a double-width word
/// for products.
pub trait ModWord:
    PrimInt + Unsigned + Debug + Display + Hash + Default + Send + Sync + 'static
{
    type Wide: PrimInt + Unsigned;

    fn widen(self) -> Self::Wide;
    /// Truncating conversion; callers only narrow values already reduced
    /// below a `Self` modulus.
    fn narrow(w: Self::Wide) -> Self;
    fn from_u64(v: u64) -> Option<Self>;
    fn to_u64(self) -> u64;

    #[inline]
    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        Self::narrow(self.widen() * rhs.widen() % m.widen())
    }

    #[inline]
    fn add_mod(self, rhs: Self, m: Self) -> Self {
        Self::narrow((self.widen() + rhs.widen()) % m.widen())
    }

    #[inline]
    fn sub_mod(self, rhs: Self, m: Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - (rhs - self)
        }
    }

    fn pow_mod(self, mut exp: u64, m: Self) -> Self {
        let mut base = self % m;
        let mut acc = Self::one() % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(base, m);
            }
            base = base.mul_mod(base, m);
            exp >>= 1;
        }
        acc
    }
}

impl ModWord for u32 {
    type Wide = u64;

    #[inline]
    fn widen(self) -> u64 {
        self as u64
    }
    #[inline]
    fn narrow(w: u64) -> u32 {
        w as u32
    }
    fn from_u64(v: u64) -> Option<u32> {
        u32::try_from(v).ok()
    }
    fn to_u64(self) -> u64 {
        self as u64
    }
}

impl ModWord for u64 {
    type Wide = u128;

    #[inline]
    fn widen(self) -> u128 {
        self as u128
    }
    #[inline]
    fn narrow(w: u128) -> u64 {
        w as u64
    }
    fn from_u64(v: u64) -> Option<u64> {
        Some(v)
    }
    fn to_u64(self) -> u64 {
        self
    }
}

/// `a * b mod m` on `u64` through a 128-bit product.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        // both operands already < 2^32
        (a % m) * (b % m) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// Square-and-multiply exponentiation on `u64`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut base = base % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}
