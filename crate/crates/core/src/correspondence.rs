//! Triangles (U,V,W) with angle theta and area n*alpha_theta, the mutually
//! inverse maps phi/psi between triangles and points of 2E(K) \ {inf}, the
//! four-type classifier, and the reduction of each type to a conic point.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::curves::{Angle, Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::obstruct::Conic;
use crate::quad::{NumField, QuadElem};
use crate::rational::{rat, ratio, Rat};

/// A validated (K,theta,n)-triangle: UV = 2rn and
/// W^2 = U^2 + V^2 - (2s/r) UV hold exactly, sides positive, U <= V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    u: QuadElem,
    v: QuadElem,
    w: QuadElem,
    n: i64,
    angle: Angle,
    field: NumField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleType {
    Rational,
    Type1,
    Type2,
    Type3,
    Type4,
}

impl TriangleType {
    pub fn tag(&self) -> &'static str {
        match self {
            TriangleType::Rational => "rational",
            TriangleType::Type1 => "1",
            TriangleType::Type2 => "2",
            TriangleType::Type3 => "3",
            TriangleType::Type4 => "4",
        }
    }
}

impl std::fmt::Display for TriangleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriangleType::Rational => write!(f, "rational"),
            t => write!(f, "type {}", t.tag()),
        }
    }
}

impl Triangle {
    pub fn sides(&self) -> (&QuadElem, &QuadElem, &QuadElem) {
        (&self.u, &self.v, &self.w)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn field(&self) -> NumField {
        self.field
    }

    pub fn curve(&self) -> Curve {
        Curve::new(self.n, self.angle, self.field).expect("triangle carries a valid curve")
    }

    /// Scale all three sides by a positive rational factor times sqrt(m)^k.
    pub fn map_sides(&self, f: impl Fn(&QuadElem) -> QuadElem, n: i64) -> Result<Triangle> {
        validate(
            f(&self.u),
            f(&self.v),
            f(&self.w),
            n,
            self.angle,
            self.field,
        )
    }
}

/// Check the defining identities and normalize so that U <= V.
pub fn validate(
    u: QuadElem,
    v: QuadElem,
    w: QuadElem,
    n: i64,
    angle: Angle,
    field: NumField,
) -> Result<Triangle> {
    let u = u.promote(field);
    let v = v.promote(field);
    let w = w.promote(field);
    if u.sign() <= 0 || v.sign() <= 0 || w.sign() <= 0 {
        return Err(Error::InvalidTriangle { identity: "sides must be positive".to_string() });
    }
    let (u, v) = if (&v - &u).sign() < 0 { (v, u) } else { (u, v) };
    let uv = &u * &v;
    let expect_uv = QuadElem::rational(rat(2 * angle.r() * n)).promote(field);
    if uv != expect_uv {
        return Err(Error::InvalidTriangle { identity: format!("UV = 2rn (got UV = {uv})") });
    }
    let cos_term = uv.scale(&ratio(2 * angle.s(), angle.r()));
    let lhs = &w * &w;
    let rhs = &(&(&u * &u) + &(&v * &v)) - &cos_term;
    if lhs != rhs {
        return Err(Error::InvalidTriangle {
            identity: "W^2 = U^2 + V^2 - (2s/r) UV".to_string(),
        });
    }
    Ok(Triangle { u, v, w, n, angle, field })
}

/// phi(U,V,W) = (W^2/4, W(V^2 - U^2)/8), a point of 2E_{n,theta}(K) \ {inf}.
pub fn phi(t: &Triangle) -> CurvePoint {
    let (u, v, w) = t.sides();
    let x = (w * w).scale(&ratio(1, 4));
    let y = (w * &(&(v * v) - &(u * u))).scale(&ratio(1, 8));
    CurvePoint::Affine { x, y }
}

/// psi(u,v) = (s1 - s2, s1 + s2, 2 s0) with s1 = sqrt(u + (r+s)n),
/// s2 = sqrt(u - (r-s)n), s0 = sqrt(u), all principal roots.
pub fn psi(curve: &Curve, p: &CurvePoint) -> Result<Triangle> {
    let (x, y) = p
        .xy()
        .ok_or_else(|| Error::NotInImage("infinity has no triangle".to_string()))?;
    if y.sign() < 0 {
        return Err(Error::NotInImage("psi requires v >= 0 under iota".to_string()));
    }
    let (r, s, n) = (curve.angle().r(), curve.angle().s(), curve.n());
    let sqrt_of = |shift: i64, what: &str| -> Result<QuadElem> {
        (x + &curve.elem(rat(shift)))
            .sqrt()
            .ok_or_else(|| Error::NotInImage(format!("{what} is not a square in the field")))
    };
    let s1 = sqrt_of((r + s) * n, "u + (r+s)n")?;
    let s2 = sqrt_of(-(r - s) * n, "u - (r-s)n")?;
    let s0 = sqrt_of(0, "u")?;
    validate(
        &s1 - &s2,
        &s1 + &s2,
        s0.scale(&rat(2)),
        n,
        curve.angle(),
        curve.field(),
    )
}

/// The four-type classification over K = Q(sqrt(m)).
pub fn classify(t: &Triangle) -> Result<TriangleType> {
    if t.field == NumField::Q {
        return Err(Error::domain("classification requires a quadratic field".to_string()));
    }
    let (u, v, w) = t.sides();
    let in_q = |x: &QuadElem| x.b().is_zero();
    let sqrt_m_multiple = |x: &QuadElem| x.a().is_zero();
    if in_q(u) && in_q(v) && in_q(w) {
        return Ok(TriangleType::Rational);
    }
    if sqrt_m_multiple(u) && sqrt_m_multiple(v) && sqrt_m_multiple(w) {
        return Ok(TriangleType::Type1);
    }
    if in_q(u) && in_q(v) && sqrt_m_multiple(w) {
        return Ok(TriangleType::Type2);
    }
    if !in_q(u) && !in_q(v) && in_q(w) {
        if u.conj() == *v {
            return Ok(TriangleType::Type3);
        }
        if u.conj() == -v {
            return Ok(TriangleType::Type4);
        }
    }
    Err(Error::OutsideClassification)
}

/// Reduce a triangle of Type 2, 3 or 4 to a rational point on the matching
/// conic z^2 = A x^2 + B y^2, verified by substitution.
pub fn to_conic_point(t: &Triangle) -> Result<((Rat, Rat, Rat), Conic)> {
    let m = t
        .field
        .m()
        .ok_or_else(|| Error::domain("conic reduction requires a quadratic field".to_string()))?;
    let (r, s) = (t.angle.r(), t.angle.s());
    let (tu, tv, tw) = t.sides();
    let (point, conic) = match classify(t)? {
        TriangleType::Type2 => {
            // (U, V, W) = (u, v, w sqrt(m)) -> (ru - sv, v, mrw)
            let u = tu.a().clone();
            let v = tv.a().clone();
            let w = tw.b().clone();
            let x = &u * rat(r) - &v * rat(s);
            ((x, v, w * rat(m * r)), Conic::new(m, m * (r * r - s * s))?)
        }
        TriangleType::Type3 => {
            // (U, V, W) = (u - v sqrt(m), u + v sqrt(m), w) -> (u, v, rw)
            let u = tv.a().clone();
            let v = tv.b().clone();
            let w = tw.a().clone();
            ((u, v, w * rat(r)), Conic::new(2 * r * (r - s), 2 * m * r * (r + s))?)
        }
        TriangleType::Type4 => {
            // (U, V, W) = (-u + v sqrt(m), u + v sqrt(m), w) -> (u, v, rw)
            let u = tv.a().clone();
            let v = tv.b().clone();
            let w = tw.a().clone();
            ((u, v, w * rat(r)), Conic::new(2 * r * (r + s), 2 * m * r * (r - s))?)
        }
        other => {
            return Err(Error::domain(format!(
                "conic reduction applies to types 2, 3, 4 only, triangle is {other}"
            )));
        }
    };
    let (x, y, z) = &point;
    debug_assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
    let lhs = z * z;
    let rhs = rat(conic.a()) * x * x + rat(conic.b()) * y * y;
    if lhs != rhs {
        return Err(Error::domain("conic substitution check failed".to_string()));
    }
    Ok((point, conic))
}

#[derive(Serialize, Deserialize)]
struct TriangleRepr {
    #[serde(rename = "U")]
    u: QuadElem,
    #[serde(rename = "V")]
    v: QuadElem,
    #[serde(rename = "W")]
    w: QuadElem,
    n: i64,
    r: i64,
    s: i64,
    m: Option<i64>,
}

impl Serialize for Triangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TriangleRepr {
            u: self.u.clone(),
            v: self.v.clone(),
            w: self.w.clone(),
            n: self.n,
            r: self.angle.r(),
            s: self.angle.s(),
            m: self.field.m(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Triangle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TriangleRepr::deserialize(d)?;
        let angle = Angle::new(repr.r, repr.s).map_err(D::Error::custom)?;
        let field = match repr.m {
            None => NumField::Q,
            Some(m) => NumField::quad(m).map_err(D::Error::custom)?,
        };
        validate(repr.u, repr.v, repr.w, repr.n, angle, field).map_err(D::Error::custom)
    }
}

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.u, self.v, self.w)
    }
}
