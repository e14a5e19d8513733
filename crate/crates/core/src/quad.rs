//! Exact arithmetic in real quadratic fields Q(sqrt(m)), including the
//! conjugation sigma, exact sign under the real embedding with sqrt(m) > 0,
//! and the square test.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_square_rat, is_squarefree, rat, rat_from_str, rat_to_string, Rat};

/// A real quadratic field Q(sqrt(m)), m > 1 squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self> {
        if m <= 1 || !is_squarefree(m) {
            return Err(Error::domain(format!("m must be squarefree and > 1, got {m}")));
        }
        Ok(QuadField { m })
    }

    pub fn m(&self) -> i64 {
        self.m
    }
}

/// Base field of a curve or element: Q itself or a real quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumField {
    Q,
    Quad(QuadField),
}

impl NumField {
    pub fn quad(m: i64) -> Result<Self> {
        Ok(NumField::Quad(QuadField::new(m)?))
    }

    pub fn m(&self) -> Option<i64> {
        match self {
            NumField::Q => None,
            NumField::Quad(f) => Some(f.m),
        }
    }

    /// Common field of two operands; Q promotes to the quadratic field.
    fn join(self, other: NumField) -> NumField {
        match (self, other) {
            (NumField::Q, f) => f,
            (f, NumField::Q) => f,
            (NumField::Quad(a), NumField::Quad(b)) => {
                assert_eq!(a.m, b.m, "mixed quadratic fields: {} vs {}", a.m, b.m);
                NumField::Quad(a)
            }
        }
    }
}

/// An element a + b*sqrt(m) of Q(sqrt(m)); over Q the sqrt(m) part is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    a: Rat,
    b: Rat,
    field: NumField,
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat, field: NumField) -> Result<Self> {
        if field == NumField::Q && !b.is_zero() {
            return Err(Error::domain("nonzero sqrt(m) part over Q".to_string()));
        }
        Ok(QuadElem { a, b, field })
    }

    pub fn rational(a: Rat) -> Self {
        QuadElem { a, b: Rat::zero(), field: NumField::Q }
    }

    pub fn from_parts(a: Rat, b: Rat, m: i64) -> Result<Self> {
        Ok(QuadElem { a, b, field: NumField::quad(m)? })
    }

    pub fn zero(field: NumField) -> Self {
        QuadElem { a: Rat::zero(), b: Rat::zero(), field }
    }

    /// sqrt(m) itself, as an element of the field.
    pub fn sqrt_m(field: QuadField) -> Self {
        QuadElem { a: Rat::zero(), b: rat(1), field: NumField::Quad(field) }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn field(&self) -> NumField {
        self.field
    }

    fn m_rat(&self) -> Rat {
        rat(self.field.m().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value when b = 0.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Reinterpret in a larger field (Q embeds into any Q(sqrt(m))).
    pub fn promote(&self, field: NumField) -> Self {
        QuadElem { a: self.a.clone(), b: self.b.clone(), field: self.field.join(field) }
    }

    /// Galois conjugation sigma: a + b*sqrt(m) -> a - b*sqrt(m).
    pub fn conj(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -self.b.clone(), field: self.field }
    }

    /// Field norm x * sigma(x) = a^2 - m b^2.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - self.m_rat() * &self.b * &self.b
    }

    /// Exact sign under the real embedding with iota(sqrt(m)) > 0.
    /// Integer comparisons only, no floating point.
    pub fn sign(&self) -> i32 {
        let sa = if self.a.is_zero() { 0 } else if self.a.is_positive() { 1 } else { -1 };
        let sb = if self.b.is_zero() { 0 } else if self.b.is_positive() { 1 } else { -1 };
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            _ => {
                // mixed signs: compare a^2 against m b^2
                let a2 = &self.a * &self.a;
                let mb2 = self.m_rat() * &self.b * &self.b;
                // a^2 = m b^2 would force m to be a rational square
                if a2 > mb2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero".to_string()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElem { a: &c.a / &n, b: &c.b / &n, field: self.field })
    }

    pub fn scale(&self, q: &Rat) -> Self {
        QuadElem { a: &self.a * q, b: &self.b * q, field: self.field }
    }

    /// Principal square root in the field, when one exists.
    ///
    /// x = a + b*sqrt(m) is a square iff either b = 0 and a or a/m is a
    /// rational square, or b != 0, a^2 - m b^2 = n0^2 is a rational square,
    /// and (a + n0)/2 or (a - n0)/2 is a rational square c^2 with
    /// d = b/(2c) making (c + d*sqrt(m))^2 = x check out exactly.
    pub fn sqrt(&self) -> Option<QuadElem> {
        if self.is_zero() {
            return Some(QuadElem::zero(self.field));
        }
        if self.sign() < 0 {
            return None; // not a square in a real field
        }
        if self.b.is_zero() {
            if let Some(c) = is_square_rat(&self.a) {
                return Some(QuadElem { a: c, b: Rat::zero(), field: self.field });
            }
            if let NumField::Quad(f) = self.field {
                if let Some(d) = is_square_rat(&(&self.a / rat(f.m))) {
                    return Some(QuadElem { a: Rat::zero(), b: d, field: self.field });
                }
            }
            return None;
        }
        let n0 = is_square_rat(&self.norm())?;
        let two = rat(2);
        for half in [(&self.a + &n0) / &two, (&self.a - &n0) / &two] {
            if let Some(c) = is_square_rat(&half) {
                if c.is_zero() {
                    continue;
                }
                let d = &self.b / (&two * &c);
                let cand = QuadElem { a: c, b: d, field: self.field };
                if &cand * &cand == *self {
                    let root = if cand.sign() > 0 { cand } else { -cand };
                    return Some(root);
                }
            }
        }
        None
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        QuadElem {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            field: self.field.join(rhs.field),
        }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        QuadElem {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            field: self.field.join(rhs.field),
        }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        let field = self.field.join(rhs.field);
        let m = rat(field.m().unwrap_or(0));
        QuadElem {
            a: &self.a * &rhs.a + &m * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            field,
        }
    }
}

impl Div for &QuadElem {
    type Output = QuadElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -self.a, b: -self.b, field: self.field }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { a: -self.a.clone(), b: -self.b.clone(), field: self.field }
    }
}

impl std::fmt::Display for QuadElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rat_to_string(&self.a));
        }
        let m = self.field.m().unwrap_or(0);
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", rat_to_string(&self.b), m);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", rat_to_string(&self.a), rat_to_string(&-self.b.clone()), m)
        } else {
            write!(f, "{} + {}*sqrt({})", rat_to_string(&self.a), rat_to_string(&self.b), m)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadElemRepr {
    a: String,
    b: String,
    m: Option<i64>,
}

impl Serialize for QuadElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadElemRepr {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
            m: self.field.m(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QuadElemRepr::deserialize(d)?;
        let a = rat_from_str(&repr.a).map_err(D::Error::custom)?;
        let b = rat_from_str(&repr.b).map_err(D::Error::custom)?;
        let field = match repr.m {
            None => NumField::Q,
            Some(m) => NumField::quad(m).map_err(D::Error::custom)?,
        };
        QuadElem::new(a, b, field).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn k(m: i64) -> NumField {
        NumField::quad(m).unwrap()
    }

    fn q(a: i64, b: i64, m: i64) -> QuadElem {
        QuadElem::new(rat(a), rat(b), k(m)).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(QuadField::new(13).is_ok());
        assert!(QuadField::new(1).is_err());
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(-3).is_err());
    }

    #[test]
    fn conj_and_norm() {
        let x = q(9, 1, 13);
        assert_eq!(x.conj(), q(9, -1, 13));
        assert_eq!((&x.conj() * &x).as_rational().unwrap(), &rat(68));
        // Example values: (41/3)^2 - 13*(11/3)^2 = 12
        let y = QuadElem::new(ratio(41, 3), ratio(11, 3), k(13)).unwrap();
        assert_eq!(y.norm(), rat(12));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(QuadElem::zero(k(3)).sign(), 0);
        assert_eq!(q(4, -2, 3).sign(), 1); // 16 > 12
        assert_eq!(q(140, -82, 3).sign(), -1); // 19600 < 20172
        assert_eq!(q(-4, 3, 3).sign(), 1);
        assert_eq!(q(0, -1, 5).sign(), -1);
    }

    #[test]
    fn sign_agrees_with_interval_evaluation() {
        // oracle: evaluate a + b*sqrt(m) with wide integer scaling
        // sqrt(m) bracketed by lo/S < sqrt(m) < hi/S, S = 10^9
        let oracle = |x: &QuadElem| -> i32 {
            let m = x.field().m().unwrap();
            let s: i128 = 1_000_000_000;
            let mut lo: i128 = 0;
            let mut hi: i128 = (m as i128 + 1) * s;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if mid * mid <= m as i128 * s * s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // sign(a + b sqrt(m)) = sign(pa*qb + pb*qa*sqrt(m)), scaled by S
            use num_bigint::BigInt;
            let sc = BigInt::from(s);
            let av = x.a().numer() * x.b().denom() * &sc;
            let bi = x.b().numer() * x.a().denom();
            let b_lo = &bi * BigInt::from(lo);
            let b_hi = &bi * BigInt::from(hi);
            let v1 = &av + &b_lo;
            let v2 = &av + &b_hi;
            use num_traits::Signed as _;
            if v1.is_positive() && v2.is_positive() {
                1
            } else if v1.is_negative() && v2.is_negative() {
                -1
            } else {
                0 // interval straddles zero: only exact zero in our inputs
            }
        };
        let mut seed = 0x12345678u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 41) as i64 - 20
        };
        let mut n = 0;
        while n < 1000 {
            let (a, b, m) = (next(), next(), [2, 3, 5, 13, 21][(next().rem_euclid(5)) as usize]);
            let x = q(a, b, m);
            let o = oracle(&x);
            if o == 0 {
                assert!(x.is_zero() || x.sign() != 0);
                continue;
            }
            assert_eq!(x.sign(), o, "a={a} b={b} m={m}");
            n += 1;
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(q(3, 0, 3).sqrt(), Some(q(0, 1, 3)));
        assert_eq!(q(84, 48, 3).sqrt(), Some(q(6, 4, 3)));
        assert_eq!(q(140, -82, 3).sqrt(), None); // negative under iota
        assert_eq!(q(84, -48, 3).sqrt(), Some(q(-6, 4, 3))); // principal root positive
        assert_eq!(q(0, 0, 5).sqrt(), Some(QuadElem::zero(k(5))));
        assert_eq!(q(7, 0, 5).sqrt(), None);
    }

    #[test]
    fn sqrt_of_squares_round_trips() {
        let mut seed = 0xdeadbeefu64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for i in 0..1000 {
            let m = [2, 3, 5, 6, 13][i % 5];
            let a = Rat::new((next() % 40).into(), (next().rem_euclid(9) + 1).into());
            let b = Rat::new((next() % 40).into(), (next().rem_euclid(9) + 1).into());
            let x = QuadElem::new(a, b, k(m)).unwrap();
            let sq = &x * &x;
            let r = sq.sqrt().expect("square of an element must be a square");
            assert_eq!(&r * &r, sq);
            assert!(r.is_zero() || r.sign() > 0);
        }
    }

    #[test]
    fn serde_round_trip() {
        let x = QuadElem::new(ratio(41, 3), ratio(-11, 3), k(13)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"41/3","b":"-11/3","m":13}"#);
        let y: QuadElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z = QuadElem::rational(ratio(3, 2));
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"a":"3/2","b":"0","m":null}"#);
        assert_eq!(serde_json::from_str::<QuadElem>(&s).unwrap(), z);
    }
}
