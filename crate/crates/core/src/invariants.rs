//! Exact arithmetic in `Q/Z`.
//!
//! A [`QZInvariant`] is always stored in canonical form: `0 <= num < den`,
//! `gcd(num, den) = 1`, and zero is `0/1`. Structural equality is therefore
//! equality in `Q/Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZInvariant {
    num: BigUint,
    den: BigUint,
}

impl QZInvariant {
    pub fn zero() -> Self {
        QZInvariant { num: BigUint::zero(), den: BigUint::one() }
    }

    /// Canonical representative of `num/den` modulo 1.
    pub fn reduce(num: &BigInt, den: &BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidDenominator);
        }
        let den_i = BigInt::from_biguint(Sign::Plus, den.clone());
        let r = num.mod_floor(&den_i);
        let r = r.to_biguint().expect("mod_floor by a positive modulus is non-negative");
        Ok(Self::from_residue(r, den.clone()))
    }

    /// Small-integer convenience constructor.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        Self::reduce(&BigInt::from(num), &BigUint::from(den))
    }

    fn from_residue(r: BigUint, den: BigUint) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let g = r.gcd(&den);
        QZInvariant { num: r / &g, den: den / g }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn denominator(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Additive order in `Q/Z`, i.e. the canonical denominator.
    pub fn order(&self) -> BigUint {
        self.den.clone()
    }

    /// Order as a machine integer, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.den.to_u64()
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let num = &self.num * (&den / &self.den) + &other.num * (&den / &other.den);
        Self::from_residue(num % &den, den)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        QZInvariant { num: &self.den - &self.num, den: self.den.clone() }
    }

    pub fn scale(&self, m: u64) -> Self {
        self.scale_big(&BigUint::from(m))
    }

    pub fn scale_big(&self, m: &BigUint) -> Self {
        Self::from_residue((&self.num * m) % &self.den, self.den.clone())
    }

    /// Splits `self` into its unique components of prime-power order.
    ///
    /// For `x = a/n` with `n = q * r`, `q = p^e` and `gcd(q, r) = 1`, the
    /// `p`-component is `a * r^{-1} / q` (inverse taken mod `q`).
    pub fn primary_split(&self) -> BTreeMap<BigUint, QZInvariant> {
        let mut out = BTreeMap::new();
        for (p, e) in factorize_big(&self.den) {
            let q = num_traits::pow(p.clone(), e as usize);
            let r = &self.den / &q;
            let r_inv = mod_inverse(&r, &q).expect("cofactor is coprime to its prime power");
            let num = (&self.num * r_inv) % &q;
            out.insert(p, Self::from_residue(num, q));
        }
        out
    }

    /// Sum of an iterator of invariants.
    pub fn sum<'a, I: IntoIterator<Item = &'a QZInvariant>>(iter: I) -> Self {
        iter.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from_biguint(Sign::Plus, a % m);
    let m_i = BigInt::from_biguint(Sign::Plus, m.clone());
    let ext = a.extended_gcd(&m_i);
    if !ext.gcd.is_one() {
        return None;
    }
    ext.x.mod_floor(&m_i).to_biguint()
}

/// Trial-division factorization. Denominators here are products of small
/// local orders, so this is never the bottleneck.
pub(crate) fn factorize_big(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

impl Default for QZInvariant {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for QZInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QZInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parses `"a/b"` (any integer `a`, positive `b`) or a bare integer,
/// reducing to canonical form.
impl FromStr for QZInvariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLiteral(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigUint = den.parse().map_err(|_| bad())?;
        Self::reduce(&num, &den)
    }
}

impl Serialize for QZInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QZInvariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
