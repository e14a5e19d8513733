//! Exact rational scalars and the elementary number-theoretic symbols:
//! squarefree decomposition, Legendre and Hilbert symbols.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as "p/q", omitting "/q" when the denominator is 1.
pub fn rat_to_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Exact integer square root when `n` is a perfect square.
pub fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Principal square root of a rational square.
pub fn is_square_rat(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(Rat::new(n, d))
}

/// N = root^2 * core with core squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqfDecomp {
    pub core: u64,
    pub root: u64,
}

/// Squarefree decomposition by trial division.
pub fn sqf_decompose(n: i64) -> Result<SqfDecomp> {
    if n <= 0 {
        return Err(Error::domain(format!("sqf_decompose requires N >= 1, got {n}")));
    }
    let mut n = n as u64;
    let mut core = 1u64;
    let mut root = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // leftover n is 1 or a prime
    core *= n;
    Ok(SqfDecomp { core, root })
}

/// Squarefree part of a positive integer.
pub fn sqf(n: i64) -> Result<u64> {
    Ok(sqf_decompose(n)?.core)
}

pub fn is_squarefree(n: i64) -> bool {
    n >= 1 && sqf_decompose(n).map(|d| d.root == 1).unwrap_or(false)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u128;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: i64, p: i64) -> Result<i32> {
    if p < 3 || p % 2 == 0 || !is_prime(p as u64) {
        return Err(Error::domain(format!("legendre requires an odd prime, got {p}")));
    }
    let p = p as u64;
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    let e = mod_pow(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// A place of Q: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Finite(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl serde::Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Infinity => ser.serialize_str("inf"),
            Place::Finite(p) => ser.serialize_u64(*p),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = Place;
            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "\"inf\" or a prime number")
            }
            fn visit_u64<E: serde::de::Error>(self, p: u64) -> std::result::Result<Place, E> {
                Ok(Place::Finite(p))
            }
            fn visit_i64<E: serde::de::Error>(self, p: i64) -> std::result::Result<Place, E> {
                if p <= 0 {
                    return Err(E::custom("place must be positive"));
                }
                Ok(Place::Finite(p as u64))
            }
            fn visit_str<E: serde::de::Error>(self, s: &str) -> std::result::Result<Place, E> {
                if s == "inf" {
                    Ok(Place::Infinity)
                } else {
                    s.parse().map(Place::Finite).map_err(E::custom)
                }
            }
        }
        de.deserialize_any(V)
    }
}

fn split_valuation(mut n: i64, p: u64) -> (u32, i64) {
    let mut v = 0;
    while n % (p as i64) == 0 {
        n /= p as i64;
        v += 1;
    }
    (v, n)
}

/// Hilbert symbol (a,b) at a place of Q: 1 iff z^2 = ax^2 + by^2 has a
/// nontrivial solution in the completion.
pub fn hilbert(a: i64, b: i64, place: Place) -> Result<i32> {
    if a == 0 || b == 0 {
        return Err(Error::domain("hilbert requires nonzero arguments".to_string()));
    }
    match place {
        Place::Infinity => Ok(if a < 0 && b < 0 { -1 } else { 1 }),
        Place::Finite(2) => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            // eps(u) = (u-1)/2 mod 2, omega(u) = (u^2-1)/8 mod 2, read off u mod 8
            let eps = |u: i64| -> u32 {
                match u.rem_euclid(4) {
                    1 => 0,
                    _ => 1,
                }
            };
            let omega = |u: i64| -> u32 {
                match u.rem_euclid(8) {
                    1 | 7 => 0,
                    _ => 1,
                }
            };
            let e = eps(u) * eps(v) + alpha % 2 * omega(v) + beta % 2 * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Finite(p) => {
            if !is_prime(p) || p % 2 == 0 {
                return Err(Error::domain(format!("hilbert place must be a prime or inf, got {p}")));
            }
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut sign = 1i32;
            if alpha % 2 == 1 && beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                sign = -sign;
            }
            if beta % 2 == 1 {
                sign *= legendre(u, p as i64)?;
            }
            if alpha % 2 == 1 {
                sign *= legendre(v, p as i64)?;
            }
            Ok(sign)
        }
    }
}

/// Odd prime divisors of |n|, ascending, without multiplicity.
pub fn odd_prime_divisors(n: i64) -> Vec<u64> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Height of a rational in lowest terms: max(|p|, q).
pub fn rat_height(q: &Rat) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}
