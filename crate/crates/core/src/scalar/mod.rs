//! Exact coefficient rings.
//!
//! Every polynomial and linear-algebra routine in the crate is generic over
//! [`Ring`] (or [`Field`] where division is needed). A ring is a small context
//! value (for example the modulus) and its elements are plain values, so
//! `F_p` elements are bare `u64`s in `[0, p)`.

pub mod linalg;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of a rational number, failing when the denominator is not a unit.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn format(&self, a: &Rational) -> String {
        format_rational(a)
    }
}

impl Field for Rationals {
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"num/den"` or `"num"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

pub fn is_odd_prime_below_2_31(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) || p >= 1 << 31 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn bigint_mod(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_odd_prime_below_2_31(p) {
            Ok(Self { p })
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn from_bigint(&self, n: &BigInt) -> u64 {
        bigint_mod(n, self.p)
    }

    /// Balanced representative in `(-p/2, p/2]`, handy for display.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        reduce_mod_p(q, self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
}

/// Reduction `ℚ → F_p`; fails when `p` divides the denominator.
pub fn reduce_mod_p(x: &Rational, p: u64) -> Result<u64> {
    let den = bigint_mod(x.denom(), p);
    if den == 0 {
        return Err(Error::DenominatorDivisibleByP {
            denominator: x.denom().to_string(),
            p,
        });
    }
    let f = PrimeField { p };
    let num = bigint_mod(x.numer(), p);
    Ok(f.mul(&num, &f.inv(&den).expect("nonzero")))
}

/// The ring `Z/p²`, used to lift mod-p computations one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZModP2 {
    p: u64,
    q: u64,
}

impl ZModP2 {
    pub fn new(p: u64) -> Result<Self> {
        if is_odd_prime_below_2_31(p) {
            Ok(Self { p, q: p * p })
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn residue_field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    /// Canonical lift of an `F_p` element: the representative in `[0, p)`.
    pub fn lift(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        a
    }

    /// Reduction `Z/p² → F_p`.
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    /// `x / p` as an element of `F_p`, defined when `p | x`.
    pub fn divide_by_p(&self, a: u64) -> Result<u64> {
        if !a.is_multiple_of(self.p) {
            return Err(Error::NotDivisibleByP { value: a, p: self.p });
        }
        Ok(a / self.p)
    }

    /// Inverse of a unit (a value coprime to `p`).
    pub fn unit_inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        // φ(p²) = p(p-1)
        Some(self.pow(&a, self.p * (self.p - 1) - 1))
    }
}

/// Free-function form of [`ZModP2::divide_by_p`].
pub fn divide_by_p(x: u64, p: u64) -> Result<u64> {
    ZModP2::new(p)?.divide_by_p(x % (p * p))
}

impl Ring for ZModP2 {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.q as u128) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }
    fn from_rational(&self, q: &Rational) -> Result<u64> {
        let den = bigint_mod(q.denom(), self.q);
        let inv = self.unit_inv(den).ok_or_else(|| Error::DenominatorDivisibleByP {
            denominator: q.denom().to_string(),
            p: self.p,
        })?;
        Ok(self.mul(&bigint_mod(q.numer(), self.q), &inv))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}
