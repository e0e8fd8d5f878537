use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::inv_mod;
use crate::error::{Error, Result};
use crate::{PrimePower, Residue};

/// `v_p(r)`, or `None` for `r = 0`.
pub fn padic_valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        loop {
            let (q, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    };
    Some(count(r.numer().clone()) - count(r.denom().clone()))
}

/// A `p`-integral rational reduced modulo `m` (any modulus coprime to its
/// denominator).
pub fn rational_mod(r: &BigRational, m: u64) -> Result<u64> {
    let mb = BigInt::from(m);
    let num = r.numer().mod_floor(&mb).to_u64().unwrap();
    let den = r.denom().mod_floor(&mb).to_u64().unwrap();
    let inv = inv_mod(den, m).ok_or(Error::NotInvertible {
        value: den,
        modulus: m,
    })?;
    Ok(super::mul_mod(num, inv, m))
}

pub fn rational_residue(r: &BigRational, modulus: PrimePower) -> Result<Residue> {
    Ok(Residue::from_u64(
        rational_mod(r, modulus.modulus())?,
        modulus,
    ))
}
