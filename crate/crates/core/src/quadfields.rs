//! Imaginary quadratic fields `K = Q(sqrt(-d))`: the modulus `D`, the
//! quadratic character, class numbers and the maximal-class-number test.
//!
//! `D = 2d` when `d ≡ 3 (mod 4)` and `4d` otherwise. For `d ≡ 3 (mod 4)`
//! this is twice the conductor; the character is still the Kronecker symbol
//! of the field discriminant, restricted to residues coprime to `D`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::modmath::{euler_phi, gcd};

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -1;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi_u64(a.rem_euclid(n) as u64, n as u64)
}

fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    let mut result = 1;
    a %= n;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut f = 2u64;
    let mut n = n;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// `(D, discriminant)` for square-free `d`.
pub fn modulus_and_discriminant(d: u64) -> (u64, i64) {
    if d % 4 == 3 {
        (2 * d, -(d as i64))
    } else {
        (4 * d, -4 * d as i64)
    }
}

/// Values of the quadratic character on residues coprime to `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    modulus: u64,
    values: Vec<i8>,
}

impl CharacterTable {
    fn new(modulus: u64, discriminant: i64) -> Self {
        let values = (0..modulus)
            .map(|i| {
                if gcd(i, modulus) == 1 {
                    kronecker(discriminant, i as i64)
                } else {
                    0
                }
            })
            .collect();
        Self { modulus, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `chi(i)` for `i` coprime to `D`, `None` otherwise.
    pub fn get(&self, i: i64) -> Option<i8> {
        let r = i.rem_euclid(self.modulus as i64) as usize;
        match self.values[r] {
            0 => None,
            v => Some(v),
        }
    }

    /// `(i, chi(i))` over residues `0 < i < D` coprime to `D`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (i as u64, v))
    }
}

/// Descriptor of `Q(sqrt(-d))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldRecord", into = "FieldRecord")]
pub struct QuadField {
    d: u64,
    modulus: u64,
    discriminant: i64,
    class_number: u64,
    maximal: bool,
    character: CharacterTable,
}

/// Serialized form of [`QuadField`]; everything but `d` is recomputed and
/// checked on the way back in.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldRecord {
    pub d: u64,
    #[serde(rename = "D")]
    pub modulus: u64,
    pub discriminant: i64,
    pub class_number: u64,
    pub maximal: bool,
}

impl From<QuadField> for FieldRecord {
    fn from(f: QuadField) -> Self {
        FieldRecord {
            d: f.d,
            modulus: f.modulus,
            discriminant: f.discriminant,
            class_number: f.class_number,
            maximal: f.maximal,
        }
    }
}

impl TryFrom<FieldRecord> for QuadField {
    type Error = Error;
    fn try_from(rec: FieldRecord) -> Result<Self> {
        let field = make_field(rec.d)?;
        ensure!(
            field.modulus == rec.modulus
                && field.discriminant == rec.discriminant
                && field.class_number == rec.class_number
                && field.maximal == rec.maximal,
            Error::Precondition(format!("inconsistent field record for d = {}", rec.d))
        );
        Ok(field)
    }
}

impl QuadField {
    pub fn d(&self) -> u64 {
        self.d
    }

    /// `D`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn character(&self) -> &CharacterTable {
        &self.character
    }

    /// `d ∈ {1, 3}`: the fields with extra units.
    pub fn has_extra_units(&self) -> bool {
        matches!(self.d, 1 | 3)
    }

    /// Residues `0 < i < D` coprime to `D` with `chi(i) = 1`, split at `D/2`
    /// into `(upper half, lower half)`.
    pub fn residue_halves(&self) -> (Vec<u64>, Vec<u64>) {
        let half = self.modulus / 2;
        self.character
            .iter()
            .filter(|&(_, v)| v == 1)
            .map(|(i, _)| i)
            .partition(|&i| i > half)
    }
}

fn is_maximal(d: u64, modulus: u64, discriminant: i64, h: u64) -> bool {
    if matches!(d, 1 | 3) {
        return true;
    }
    let denom = 2 * (2 - kronecker(discriminant, 2) as i64) as u64;
    let phi = euler_phi(modulus);
    phi % denom == 0 && h == phi / denom
}

pub fn make_field(d: u64) -> Result<QuadField> {
    ensure!(is_square_free(d), Error::NotSquareFree(d));
    let (modulus, discriminant) = modulus_and_discriminant(d);
    let class_number = class_number_forms(discriminant)?;
    Ok(QuadField {
        d,
        modulus,
        discriminant,
        class_number,
        maximal: is_maximal(d, modulus, discriminant, class_number),
        character: CharacterTable::new(modulus, discriminant),
    })
}

/// `chi_K(n)`: Kronecker symbol of the discriminant. For `d ≡ 3 (mod 4)`
/// this is nonzero at even `n` although `2 | D`.
pub fn chi(field: &QuadField, n: i64) -> i8 {
    kronecker(field.discriminant, n)
}

/// `h = |a+ - a-| / (2 - chi(2))`, counting residues `0 < j < D/2` coprime
/// to `D` by character value.
pub fn class_number_charsum(field: &QuadField) -> Result<u64> {
    if field.has_extra_units() {
        return Ok(1);
    }
    let half = field.modulus / 2;
    let diff: i64 = field
        .character
        .iter()
        .filter(|&(j, _)| j < half)
        .map(|(_, v)| v as i64)
        .sum();
    let denom = 2 - kronecker(field.discriminant, 2) as i64;
    ensure!(
        diff % denom == 0,
        Error::Precondition(format!(
            "a+ - a- = {diff} not divisible by {denom} for d = {}",
            field.d
        ))
    );
    Ok((diff / denom).unsigned_abs())
}

/// Number of reduced primitive positive-definite forms `(a, b, c)` with
/// `b^2 - 4ac = discriminant`.
pub fn class_number_forms(discriminant: i64) -> Result<u64> {
    ensure!(
        discriminant < 0
            && matches!(discriminant.rem_euclid(4), 0 | 1)
            && discriminant >= -100_000_000,
        Error::InvalidDiscriminant(discriminant)
    );
    let n = -discriminant;
    let mut count = 0u64;
    let mut b = n % 2;
    while 3 * b * b <= n {
        let ac = (b * b + n) / 4;
        let mut a = b.max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let c = ac / a;
                if num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                    count += if b == 0 || a == b || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(count)
}

/// Square-free `d <= d_bound` whose field has maximal class number.
pub fn maximal_scan(d_bound: u64) -> Result<Vec<u64>> {
    ensure!(
        d_bound >= 6,
        Error::Precondition(format!("d_bound {d_bound} < 6"))
    );
    let found: Vec<u64> = (1..=d_bound)
        .into_par_iter()
        .filter(|&d| is_square_free(d))
        .filter_map(|d| {
            let (modulus, disc) = modulus_and_discriminant(d);
            let h = class_number_forms(disc).ok()?;
            is_maximal(d, modulus, disc, h).then_some(d)
        })
        .collect();
    Ok(found)
}

/// `S_i(D) = { 0 < j < D : gcd(j, D) = 1, (j i mod D) < D/2 }`.
pub fn s_set(i: i64, modulus: u64) -> Vec<u64> {
    let m = modulus as i64;
    (1..modulus)
        .filter(|&j| gcd(j, modulus) == 1)
        .filter(|&j| 2 * ((j as i64 * i).rem_euclid(m)) < m)
        .collect()
}

/// Whether the odd prime `p` splits in `K`.
pub fn splits(field: &QuadField, p: u64) -> Result<bool> {
    ensure!(
        field.modulus % p != 0,
        Error::Inapplicable {
            p,
            reason: format!("{p} is ramified in Q(sqrt(-{}))", field.d)
        }
    );
    Ok(chi(field, p as i64) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        let k3 = make_field(3).unwrap();
        assert_eq!((k3.modulus(), k3.discriminant()), (6, -3));
        let k5 = make_field(5).unwrap();
        assert_eq!(
            (k5.modulus(), k5.discriminant(), k5.class_number()),
            (20, -20, 2)
        );
        assert!(k5.is_maximal());
        let k7 = make_field(7).unwrap();
        assert_eq!((k7.modulus(), k7.class_number()), (14, 1));
        assert!(!k7.is_maximal());
        assert_eq!(make_field(12), Err(Error::NotSquareFree(12)));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&make_field(3).unwrap(), 2), -1);
        assert_eq!(chi(&make_field(1).unwrap(), 1), 1);
        assert_eq!(chi(&make_field(1).unwrap(), 3), -1);
        assert_eq!(chi(&make_field(5).unwrap(), 2), 0);
    }

    #[test]
    fn kronecker_against_euler_criterion() {
        for disc in [-3i64, -4, -7, -8, -20, -23, -24, -163] {
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                let expect = if disc.rem_euclid(p as i64) == 0 {
                    0
                } else if crate::modmath::pow_mod(disc.rem_euclid(p as i64) as u64, (p - 1) / 2, p)
                    == 1
                {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(disc, p as i64), expect, "disc={disc} p={p}");
            }
        }
        // (-3 | 2) = -1 since -3 ≡ 5 (mod 8); (-7 | 2) = 1
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number_forms(-4).unwrap(), 1);
        assert_eq!(class_number_forms(-20).unwrap(), 2);
        assert_eq!(class_number_forms(-23).unwrap(), 3);
        assert_eq!(class_number_forms(-3).unwrap(), 1);
        assert_eq!(class_number_forms(-163).unwrap(), 1);
        assert!(class_number_forms(-5).is_err());
        assert!(class_number_forms(4).is_err());
        for d in [2u64, 5, 6] {
            let f = make_field(d).unwrap();
            assert_eq!(class_number_charsum(&f).unwrap(), f.class_number(), "d={d}");
        }
        assert_eq!(class_number_charsum(&make_field(2).unwrap()).unwrap(), 1);
    }

    #[test]
    fn charsum_matches_forms() {
        for d in (1..=2000).filter(|&d| is_square_free(d) && !matches!(d, 1 | 3)) {
            let f = make_field(d).unwrap();
            assert_eq!(class_number_charsum(&f).unwrap(), f.class_number(), "d={d}");
        }
    }

    #[test]
    fn maximal_examples() {
        assert_eq!(maximal_scan(10).unwrap(), vec![1, 2, 3, 5, 6]);
        assert_eq!(maximal_scan(300).unwrap(), vec![1, 2, 3, 5, 6]);
        assert!(maximal_scan(5).is_err());
    }

    #[test]
    fn maximal_fields_fill_lower_half() {
        for d in [1u64, 2, 3, 5, 6] {
            let f = make_field(d).unwrap();
            let half = f.modulus() / 2;
            let lower: Vec<u64> = (1..half).filter(|&i| gcd(i, f.modulus()) == 1).collect();
            assert!(lower.iter().all(|&i| chi(&f, i as i64) == 1), "d={d}");
            assert_eq!(s_set(1, f.modulus()), lower, "d={d}");
        }
    }

    #[test]
    fn s_set_examples() {
        assert_eq!(s_set(1, 4), vec![1]);
        assert_eq!(s_set(1, 6), vec![1]);
        for modulus in (2..=100).step_by(2) {
            assert_eq!(
                s_set(1, modulus).len() as u64,
                euler_phi(modulus) / 2,
                "D={modulus}"
            );
        }
    }

    #[test]
    fn character_table_is_odd_and_multiplicative() {
        for d in [1u64, 2, 3, 5, 6, 7, 11, 15, 23, 163] {
            let f = make_field(d).unwrap();
            let t = f.character();
            for (i, ci) in t.iter() {
                assert_eq!(t.get(f.modulus() as i64 - i as i64), Some(-ci));
                for (j, cj) in t.iter() {
                    assert_eq!(t.get((i * j) as i64), Some(ci * cj));
                }
            }
        }
    }

    #[test]
    fn splitting() {
        let qi = make_field(1).unwrap();
        assert!(splits(&qi, 13).unwrap());
        assert!(!splits(&make_field(3).unwrap(), 5).unwrap());
        assert!(splits(&make_field(5).unwrap(), 3).unwrap());
        assert!(splits(&make_field(5).unwrap(), 5).is_err());
    }
}
