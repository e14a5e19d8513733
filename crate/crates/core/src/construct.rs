//! Constructive search for triangles of the four types, and the composition
//! of a rational triangle with a twisted one into a genuinely quadratic one.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::correspondence::{classify, phi, psi, validate, Triangle, TriangleType};
use crate::curves::{add, neg, Angle, Curve, CurvePoint};
use crate::decide::witness_from_rational_curve;
use crate::error::{Error, Result};
use crate::quad::{NumField, QuadElem, QuadField};
use crate::rational::{is_square_rat, rat, rat_to_string, ratio, Rat};

/// Bounds for the exhaustive searches. Numerator/denominator bound the
/// rational point search x = p/e^2; max_param bounds side and slope sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_numerator: i64,
    pub max_denominator: i64,
    pub max_param: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_numerator: 1_000_000, max_denominator: 1_000, max_param: 10_000 }
    }
}

/// How a triangle was found, for reproducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction {
    pub triangle: Triangle,
    pub provenance: Provenance,
}

/// Divide the sides of a rational triangle with area mn*alpha by sqrt(m),
/// giving a type-1 triangle with area n*alpha over K.
fn divide_by_sqrt_m(t: &Triangle, n: i64, m: i64) -> Result<Triangle> {
    let field = NumField::quad(m)?;
    let sqm = QuadElem::sqrt_m(QuadField::new(m)?);
    let inv_m = ratio(1, m);
    let (u, v, w) = t.sides();
    let f = |x: &QuadElem| (&x.promote(field) * &sqm).scale(&inv_m);
    validate(f(u), f(v), f(w), n, t.angle(), field)
}

/// Search E_mn(Q) for a point of order > 2 and descend its triangle by
/// sqrt(m). Returns the triangle with the twist curve and point used.
pub(crate) fn type1_via_twist(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
) -> Result<Option<(Triangle, Curve, CurvePoint)>> {
    NumField::quad(m)?;
    if m.gcd(&n) != 1 {
        return Err(Error::domain(format!("type-1 search requires gcd(m, n) = 1, got m={m} n={n}")));
    }
    let curve_mn = Curve::over_q(m * n, angle)?;
    match witness_from_rational_curve(&curve_mn, budget)? {
        None => Ok(None),
        Some((tq, point)) => {
            let t = divide_by_sqrt_m(&tq, n, m)?;
            Ok(Some((t, curve_mn, point)))
        }
    }
}

pub fn search_type1(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
) -> Result<Option<Construction>> {
    Ok(type1_via_twist(n, angle, m, budget)?.map(|(triangle, _, point)| Construction {
        triangle,
        provenance: Provenance {
            method: "type1-twist-descent".to_string(),
            base: None,
            t: None,
            point: Some(point.to_string()),
        },
    }))
}

/// Coprime pairs (p, q) with max(|p|, q) = h, q >= 1, ordered by p then q.
fn pairs_at_height(h: i64, signed: bool) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let lo = if signed { -h } else { 1 };
    for p in lo..=h {
        for q in 1..=h {
            if p.abs().max(q) == h && p.abs().gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Enumerate rational U of ascending height until U, V = 2rn/U and
/// W = w sqrt(m) close up into a type-2 triangle.
pub fn search_type2(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
) -> Result<Option<Construction>> {
    let field = NumField::quad(m)?;
    Curve::new(n, angle, field)?;
    let (r, s) = (angle.r(), angle.s());
    let two_rn = rat(2 * r * n);
    for h in 1..=budget.max_param {
        for (p, q) in pairs_at_height(h, false) {
            let u = ratio(p, q);
            let v = &two_rn / &u;
            // W^2 = U^2 + V^2 - (2s/r) UV with UV = 2rn
            let wsq = &u * &u + &v * &v - rat(4 * s * n);
            let Some(w) = is_square_rat(&(wsq / rat(m))) else { continue };
            if w.is_zero() {
                continue;
            }
            let wk = QuadElem::new(Rat::zero(), w, field)?;
            let Ok(t) =
                validate(QuadElem::rational(u.clone()), QuadElem::rational(v), wk, n, angle, field)
            else {
                continue;
            };
            if matches!(classify(&t), Ok(TriangleType::Type2)) {
                return Ok(Some(Construction {
                    triangle: t,
                    provenance: Provenance {
                        method: "type2-enumeration".to_string(),
                        base: None,
                        t: Some(rat_to_string(&u)),
                        point: None,
                    },
                }));
            }
        }
    }
    Ok(None)
}

/// Shared search for types 3 and 4. The side pair (U, V) comes from rational
/// points on c_u u^2 + c_v v^2 = 2rn, swept by lines through a base point.
fn conic_parametrization_search(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
    want: TriangleType,
) -> Result<Option<Construction>> {
    let field = NumField::quad(m)?;
    Curve::new(n, angle, field)?;
    let (r, s) = (angle.r(), angle.s());
    let target = 2 * r * n;
    let (cu, cv) = match want {
        TriangleType::Type3 => (1i64, -m),
        TriangleType::Type4 => (-1i64, m),
        other => return Err(Error::domain(format!("no conic parametrization for {other}"))),
    };
    // integral base point by bounded scan over v
    let mut base = None;
    for v0 in 0..=budget.max_param {
        let rhs = (target as i128) - (cv as i128) * (v0 as i128) * (v0 as i128);
        let scaled = (cu as i128) * rhs; // u^2 = rhs / cu with cu = +-1
        if scaled >= 0 {
            if let Some(u0) = crate::rational::int_sqrt(&scaled.into()) {
                base = Some((i64::try_from(u0).expect("bounded root"), v0));
                break;
            }
        }
    }
    let Some((u0, v0)) = base else { return Ok(None) };
    let method = match want {
        TriangleType::Type3 => "type3-parametrization",
        _ => "type4-parametrization",
    };
    let provenance = |t: Option<&Rat>| Provenance {
        method: method.to_string(),
        base: Some([u0.to_string(), v0.to_string()]),
        t: t.map(rat_to_string),
        point: None,
    };
    let accept = |u1: &Rat, v1: &Rat| -> Option<Triangle> {
        if v1.is_zero() {
            return None;
        }
        let (u, v) = (u1.abs(), v1.abs());
        // W^2 = U^2 + V^2 - (2s/r) UV = 2u^2 + 2mv^2 - 4sn for these sides
        let wsq = rat(2) * &u * &u + rat(2 * m) * &v * &v - rat(4 * s * n);
        let w = is_square_rat(&wsq)?;
        if w.is_zero() {
            return None;
        }
        let big_u = match want {
            TriangleType::Type3 => QuadElem::new(u.clone(), -v.clone(), field),
            _ => QuadElem::new(-u.clone(), v.clone(), field),
        }
        .ok()?;
        let big_v = QuadElem::new(u, v, field).ok()?;
        let t = validate(big_u, big_v, QuadElem::rational(w), n, angle, field).ok()?;
        (classify(&t) == Ok(want)).then_some(t)
    };
    if let Some(t) = accept(&rat(u0), &rat(v0)) {
        return Ok(Some(Construction { triangle: t, provenance: provenance(None) }));
    }
    let (base_u, base_v) = (rat(u0), rat(v0));
    for h in 1..=budget.max_param {
        for (p, q) in pairs_at_height(h, true) {
            let t = ratio(p, q);
            // substitute v = v0 + t (u - u0) into c_u u^2 + c_v v^2 = 2rn
            let a = rat(cu) + rat(cv) * &t * &t;
            if a.is_zero() {
                continue;
            }
            let shift = &base_v - &t * &base_u;
            let b = rat(2 * cv) * &t * &shift;
            let u1 = -(&b / &a) - &base_u;
            let v1 = &base_v + &t * (&u1 - &base_u);
            debug_assert_eq!(
                rat(cu) * &u1 * &u1 + rat(cv) * &v1 * &v1,
                rat(target),
                "parametrized point left the conic"
            );
            if let Some(tri) = accept(&u1, &v1) {
                return Ok(Some(Construction { triangle: tri, provenance: provenance(Some(&t)) }));
            }
        }
    }
    Ok(None)
}

pub fn search_type3(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
) -> Result<Option<Construction>> {
    conic_parametrization_search(n, angle, m, budget, TriangleType::Type3)
}

pub fn search_type4(
    n: i64,
    angle: Angle,
    m: i64,
    budget: &SearchBudget,
) -> Result<Option<Construction>> {
    conic_parametrization_search(n, angle, m, budget, TriangleType::Type4)
}

/// Add the curve points of a rational triangle with area n*alpha and a
/// rational triangle with area mn*alpha (divided by sqrt(m)) on E_n(K),
/// and return the triangle of the sum. The x-coordinate of the sum is
/// cross-checked against its closed form.
pub fn compose(t1: &Triangle, t2: &Triangle, m: i64) -> Result<Triangle> {
    let field = NumField::quad(m)?;
    if t1.field() != NumField::Q || t2.field() != NumField::Q {
        return Err(Error::domain("compose expects two rational triangles".to_string()));
    }
    if t1.angle() != t2.angle() {
        return Err(Error::domain("compose expects triangles with the same angle".to_string()));
    }
    let n = t1.n();
    let s = t1.angle().s();
    if t2.n() != m * n {
        return Err(Error::domain(format!(
            "second triangle must have area {}*alpha, got {}*alpha",
            m * n,
            t2.n()
        )));
    }
    let side = |x: &QuadElem| x.a().clone();
    let (u1, v1, w1) = t1.sides();
    let (u2, v2, w2) = t2.sides();
    let (w1r, w2r) = (side(w1), side(w2));
    if &w2r * &w2r == rat(m) * &w1r * &w1r {
        return Err(Error::DegenerateSum(
            "W2^2 = m W1^2: the two points share an x-coordinate".to_string(),
        ));
    }
    let curve = Curve::new(n, t1.angle(), field)?;
    let lift = |p: &CurvePoint| match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => {
            CurvePoint::Affine { x: x.promote(field), y: y.promote(field) }
        }
    };
    let p1 = lift(&phi(t1));
    let t2k = divide_by_sqrt_m(t2, n, m)?;
    let p2 = phi(&t2k);
    let sum = add(&curve, &p1, &p2)?;
    let (sx, sy) = sum
        .xy()
        .ok_or_else(|| Error::DegenerateSum("the curve points sum to infinity".to_string()))?;
    // closed form for the rational part of x(P1 + P2)
    let sq = |x: &Rat| x * x;
    let (mr, w1sq, w2sq) = (rat(m), sq(&w1r), sq(&side(w2)));
    let d1 = sq(&side(v1)) - sq(&side(u1));
    let d2 = sq(&side(v2)) - sq(&side(u2));
    let numer = &mr * &mr * &mr * &w1sq * sq(&d1) + &w2sq * sq(&d2);
    let denom = rat(4) * &mr * sq(&(&w2sq - &mr * &w1sq));
    let a_expected =
        numer / denom - &w1sq / rat(4) - &w2sq / (rat(4) * &mr) - rat(2 * s * n);
    if sx.a() != &a_expected {
        return Err(Error::domain(
            "closed-form cross-check failed for the sum's x-coordinate".to_string(),
        ));
    }
    let oriented = if sy.sign() < 0 { neg(&sum) } else { sum.clone() };
    let tri = psi(&curve, &oriented)?;
    let w = tri.sides().2;
    if w.a().is_zero() || w.b().is_zero() {
        return Err(Error::DegenerateSum(format!(
            "sum triangle has W = {w}, which is rational or a rational multiple of sqrt({m})"
        )));
    }
    Ok(tri)
}
