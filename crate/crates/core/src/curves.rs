//! The theta-congruent elliptic curve y^2 = x(x + (r+s)n)(x - (r-s)n) over Q
//! or Q(sqrt(m)): exact group law, 2-divisibility, halving of 2-torsion,
//! twist descent, and torsion classification.

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{NumField, QuadElem};
use crate::rational::{is_squarefree, rat, sqf, Rat};

/// The angle theta with cos(theta) = s/r, 0 < theta < pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    r: i64,
    s: i64,
}

impl Angle {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        if r <= 0 || s == 0 || s.abs() >= r {
            return Err(Error::domain(format!(
                "angle requires 0 < |s| < r with s nonzero, got s/r = {s}/{r}"
            )));
        }
        if s.gcd(&r) != 1 {
            return Err(Error::domain(format!("gcd(r,s) must be 1, got s/r = {s}/{r}")));
        }
        Ok(Angle { r, s })
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// alpha_theta^2 = r^2 - s^2.
    pub fn alpha_sq(&self) -> i64 {
        self.r * self.r - self.s * self.s
    }
}

/// E_{n,theta}: y^2 = x(x + (r+s)n)(x - (r-s)n) over Q or Q(sqrt(m)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    n: i64,
    angle: Angle,
    field: NumField,
}

impl Curve {
    pub fn new(n: i64, angle: Angle, field: NumField) -> Result<Self> {
        if n < 1 || !is_squarefree(n) {
            return Err(Error::domain(format!("n must be a positive squarefree integer, got {n}")));
        }
        Ok(Curve { n, angle, field })
    }

    pub fn over_q(n: i64, angle: Angle) -> Result<Self> {
        Curve::new(n, angle, NumField::Q)
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

    /// Roots of the cubic: 0, -(r+s)n, (r-s)n.
    pub fn roots(&self) -> [i64; 3] {
        let (r, s, n) = (self.angle.r, self.angle.s, self.n);
        [0, -(r + s) * n, (r - s) * n]
    }

    /// x^3 + 2sn x^2 - (r^2 - s^2) n^2 x, evaluated exactly.
    pub fn eval_cubic(&self, x: &QuadElem) -> QuadElem {
        let a2 = self.elem(rat(2 * self.angle.s * self.n));
        let a1 = self.elem(-rat(self.angle.alpha_sq() * self.n * self.n));
        &(&(&(x + &a2) * x) + &a1) * x
    }

    /// Lift a rational constant into the curve's base field.
    pub fn elem(&self, a: Rat) -> QuadElem {
        QuadElem::rational(a).promote(self.field)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if x.field() != self.field && x.field() != NumField::Q {
                    return false;
                }
                if y.field() != self.field && y.field() != NumField::Q {
                    return false;
                }
                let (x, y) = (x.promote(self.field), y.promote(self.field));
                &(&y * &y) - &self.eval_cubic(&x) == QuadElem::zero(self.field)
            }
        }
    }

    pub fn affine(&self, x: QuadElem, y: QuadElem) -> Result<CurvePoint> {
        let p = CurvePoint::Affine { x: x.promote(self.field), y: y.promote(self.field) };
        if !self.contains(&p) {
            return Err(Error::domain("point is not on the curve".to_string()));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum CurvePoint {
    Infinity,
    Affine { x: QuadElem, y: QuadElem },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn xy(&self) -> Option<(&QuadElem, &QuadElem)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "infinity"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
enum PointRepr {
    Infinity(String),
    Affine { x: QuadElem, y: QuadElem },
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => "infinity".serialize(s),
            CurvePoint::Affine { x, y } => {
                PointRepr::Affine { x: x.clone(), y: y.clone() }.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match PointRepr::deserialize(d)? {
            PointRepr::Infinity(s) if s == "infinity" => Ok(CurvePoint::Infinity),
            PointRepr::Infinity(s) => Err(D::Error::custom(format!("unknown point tag {s:?}"))),
            PointRepr::Affine { x, y } => Ok(CurvePoint::Affine { x, y }),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    n: i64,
    r: i64,
    s: i64,
    m: Option<i64>,
}

impl Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveRepr { n: self.n, r: self.angle.r, s: self.angle.s, m: self.field.m() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CurveRepr::deserialize(d)?;
        let angle = Angle::new(repr.r, repr.s).map_err(D::Error::custom)?;
        let field = match repr.m {
            None => NumField::Q,
            Some(m) => NumField::quad(m).map_err(D::Error::custom)?,
        };
        Curve::new(repr.n, angle, field).map_err(D::Error::custom)
    }
}

fn add_unchecked(curve: &Curve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let (x1, y1) = match p.xy() {
        None => return q.clone(),
        Some(v) => v,
    };
    let (x2, y2) = match q.xy() {
        None => return p.clone(),
        Some(v) => v,
    };
    let lambda = if (x1 - x2).is_zero() {
        if (y1 + y2).is_zero() {
            return CurvePoint::Infinity;
        }
        // tangent: (3x^2 + 2*a2*x + a1) / (2y)
        let a2 = curve.elem(rat(2 * curve.angle.s * curve.n));
        let a1 = curve.elem(-rat(curve.angle.alpha_sq() * curve.n * curve.n));
        let three_x2 = &(x1 * x1).scale(&rat(3)) + &(&a2 * x1).scale(&rat(2));
        let num = &three_x2 + &a1;
        let den = y1.scale(&rat(2));
        &num / &den
    } else {
        &(y2 - y1) / &(x2 - x1)
    };
    let a2 = curve.elem(rat(2 * curve.angle.s * curve.n));
    let x3 = &(&(&lambda * &lambda) - &a2) - &(x1 + x2);
    let y3 = &(&lambda * &(x1 - &x3)) - y1;
    CurvePoint::Affine { x: x3, y: y3 }
}

/// Chord-tangent addition. Inputs must lie on the curve.
pub fn add(curve: &Curve, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
    if !curve.contains(p) || !curve.contains(q) {
        return Err(Error::domain("add: input point is not on the curve".to_string()));
    }
    Ok(add_unchecked(curve, p, q))
}

pub fn neg(p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y },
    }
}

pub fn scalar_mul(curve: &Curve, k: i64, p: &CurvePoint) -> Result<CurvePoint> {
    if !curve.contains(p) {
        return Err(Error::domain("scalar_mul: point is not on the curve".to_string()));
    }
    let (k, base) = if k < 0 { (-k, neg(p)) } else { (k, p.clone()) };
    let mut acc = CurvePoint::Infinity;
    let mut pow = base;
    let mut k = k as u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = add_unchecked(curve, &acc, &pow);
        }
        k >>= 1;
        if k > 0 {
            pow = add_unchecked(curve, &pow, &pow);
        }
    }
    Ok(acc)
}

/// The full 2-torsion: infinity and the three roots.
pub fn two_torsion(curve: &Curve) -> [CurvePoint; 4] {
    let [e1, e2, e3] = curve.roots();
    let zero = curve.elem(Rat::zero());
    [
        CurvePoint::Infinity,
        CurvePoint::Affine { x: curve.elem(rat(e1)), y: zero.clone() },
        CurvePoint::Affine { x: curve.elem(rat(e2)), y: zero.clone() },
        CurvePoint::Affine { x: curve.elem(rat(e3)), y: zero },
    ]
}

/// Membership in 2E: x - e is a square in the base field for each root e.
pub fn is_in_2e(curve: &Curve, p: &CurvePoint) -> Result<bool> {
    let (x, _) = p
        .xy()
        .ok_or_else(|| Error::domain("is_in_2e requires an affine point".to_string()))?;
    if !curve.contains(p) {
        return Err(Error::domain("is_in_2e: point is not on the curve".to_string()));
    }
    Ok(curve
        .roots()
        .iter()
        .all(|&e| (x - &curve.elem(rat(e))).sqrt().is_some()))
}

/// All points Q with 2Q = (e1, 0), for a root e1 of the cubic.
///
/// Candidate x-values are e1 +- sqrt((e1-e2)(e1-e3)); each is kept iff the
/// cubic at x is a square in the field. Returns 0, 2 or 4 points.
pub fn halve_two_torsion(curve: &Curve, e1: i64) -> Result<Vec<CurvePoint>> {
    let roots = curve.roots();
    if !roots.contains(&e1) {
        return Err(Error::domain(format!("{e1} is not a root of the curve cubic")));
    }
    let others: Vec<i64> = roots.iter().copied().filter(|&e| e != e1).collect();
    let disc = curve.elem(rat((e1 - others[0]) * (e1 - others[1])));
    let mut out = Vec::new();
    if let Some(root) = disc.sqrt() {
        let e1_elem = curve.elem(rat(e1));
        for cand in [&e1_elem + &root, &e1_elem - &root] {
            if let Some(y) = curve.eval_cubic(&cand).sqrt() {
                out.push(CurvePoint::Affine { x: cand.clone(), y: y.clone() });
                out.push(CurvePoint::Affine { x: cand, y: -y });
            }
        }
    }
    Ok(out)
}

/// Least k <= bound with kP = infinity; None when the order exceeds the bound.
pub fn point_order(curve: &Curve, p: &CurvePoint, bound: u32) -> Result<Option<u32>> {
    if !curve.contains(p) {
        return Err(Error::domain("point_order: point is not on the curve".to_string()));
    }
    let mut acc = CurvePoint::Infinity;
    for k in 1..=bound {
        acc = add_unchecked(curve, &acc, p);
        if acc.is_infinity() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorsionShape {
    #[serde(rename = "Z2xZ2")]
    Z2Z2,
    #[serde(rename = "Z2xZ4")]
    Z2Z4,
    #[serde(rename = "Z2xZ6")]
    Z2Z6,
    #[serde(rename = "Z2xZ8")]
    Z2Z8,
}

impl std::fmt::Display for TorsionShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TorsionShape::Z2Z2 => "Z2xZ2",
            TorsionShape::Z2Z4 => "Z2xZ4",
            TorsionShape::Z2Z6 => "Z2xZ6",
            TorsionShape::Z2Z8 => "Z2xZ8",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionClass {
    pub shape: TorsionShape,
    /// Generators beyond the 2-torsion, possibly empty.
    pub witnesses: Vec<CurvePoint>,
}

fn is_square_int(x: i64) -> bool {
    x >= 0 && {
        let s = (x as f64).sqrt() as i64;
        (s - 1..=s + 1).any(|t| t * t == x)
    }
}

// (1 + sqrt(2)) b > a > b, exactly
fn between_b_and_silver(a: i64, b: i64) -> bool {
    a > b && (a - b) * (a - b) < 2 * b * b
}

fn z2z8_params(n: i64, r: i64, s: i64) -> Option<(i64, i64)> {
    let pow4 = |x: i64| {
        let x = x as i128;
        x * x * x * x
    };
    let (r128, rs128) = (r as i128, (r - s) as i128);
    if n == 1 {
        // r = 8 a^4 b^4, r - s = (a - b)^4
        for a in 1i64.. {
            if 8 * pow4(a) > r128 {
                break;
            }
            for b in 1..a {
                if 8 * pow4(a) * pow4(b) > r128 {
                    break;
                }
                if a.gcd(&b) == 1
                    && (a + b) % 2 == 1
                    && 8 * pow4(a) * pow4(b) == r128
                    && pow4(a - b) == rs128
                    && between_b_and_silver(a, b)
                {
                    return Some((a, b));
                }
            }
        }
    } else if n == 2 {
        // r = (a^2 - b^2)^4, r - s = 32 a^4 b^4
        for a in 2i64.. {
            if pow4(2 * a - 1) > r128 {
                break;
            }
            for b in 1..a {
                if a.gcd(&b) == 1
                    && (a + b) % 2 == 1
                    && pow4(a * a - b * b) == r128
                    && 32 * pow4(a) * pow4(b) == rs128
                    && (a - b) * (a - b) > 2 * b * b
                {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

fn z2z6_params(n: i64, r: i64, s: i64) -> Option<(i64, i64)> {
    // common shape: c1 * r = (u-v)^3 (u+v), c2 * (r+s) = c3 * u^3 (u-2v)
    let (c1, c2, c3) = match n {
        1 => (2, 1, 1),
        2 => (1, 1, 2),
        3 => (6, 3, 1),
        6 => (3, 3, 2),
        _ => return None,
    };
    let lhs1 = (c1 as i128) * r as i128;
    let lhs2 = (c2 as i128) * (r + s) as i128;
    let cube = |x: i128| x * x * x;
    for u in 3i128.. {
        // (u - v)^3 (u + v) >= (u/2)^3 * u for v < u/2
        if cube(u) * u / 8 > lhs1 {
            break;
        }
        for v in 1..(u + 1) / 2 {
            if (u as i64).gcd(&(v as i64)) != 1 {
                continue;
            }
            if cube(u - v) * (u + v) == lhs1 && c3 as i128 * cube(u) * (u - 2 * v) == lhs2 {
                return Some((u as i64, v as i64));
            }
        }
    }
    None
}

/// Small scan for low-order witnesses over Q (x = p/e^2 with small height).
fn small_order_points(curve: &Curve, orders: &[u32]) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for e in 1i64..=4 {
        for p in -400i64..=400 {
            if p.gcd(&(e * e)) != 1 {
                continue;
            }
            let x = curve.elem(Rat::new(p.into(), (e * e).into()));
            if let Some(y) = curve.eval_cubic(&x).sqrt() {
                for y in [y.clone(), -y] {
                    let pt = CurvePoint::Affine { x: x.clone(), y };
                    if let Ok(Some(o)) = point_order(curve, &pt, 18) {
                        if orders.contains(&o) {
                            out.push(pt);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Torsion of E_{n,theta}(Q), classified by the parity/square conditions on
/// (r, s) with bounded parameter searches, plus witness points where found.
pub fn torsion_q(n: i64, angle: Angle) -> Result<TorsionClass> {
    if n < 1 || !is_squarefree(n) {
        return Err(Error::domain(format!("n must be positive squarefree, got {n}")));
    }
    let (r, s) = (angle.r, angle.s);
    let curve = Curve::over_q(n, angle)?;
    if z2z8_params(n, r, s).is_some() {
        let witnesses = small_order_points(&curve, &[8]);
        return Ok(TorsionClass { shape: TorsionShape::Z2Z8, witnesses });
    }
    if z2z6_params(n, r, s).is_some() {
        let witnesses = small_order_points(&curve, &[3, 6]);
        return Ok(TorsionClass { shape: TorsionShape::Z2Z6, witnesses });
    }
    let z4 = match n {
        1 => is_square_int(2 * r) && is_square_int(r - s),
        2 => is_square_int(r) && is_square_int(2 * (r - s)),
        _ => false,
    };
    if z4 {
        let witnesses = halve_two_torsion(&curve, (r - s) * n)?;
        return Ok(TorsionClass { shape: TorsionShape::Z2Z4, witnesses });
    }
    Ok(TorsionClass { shape: TorsionShape::Z2Z2, witnesses: Vec::new() })
}

/// Torsion of E_{n,theta}(K) for K = Q(sqrt(m)): Z2xZ4 exactly when the
/// 2-torsion point ((r-s)n, 0) halves in K, else Z2xZ2. Hypothesis
/// violations are reported in the notes; classification is still attempted.
pub fn torsion_k(n: i64, angle: Angle, m: i64) -> Result<(TorsionClass, Vec<String>)> {
    let field = NumField::quad(m)?;
    if n < 1 || !is_squarefree(n) {
        return Err(Error::domain(format!("n must be positive squarefree, got {n}")));
    }
    let mut notes = Vec::new();
    if m.gcd(&n) != 1 {
        notes.push(format!("theorem inapplicable: gcd(m,n) = {} != 1", m.gcd(&n)));
    }
    if [2, 3, 6].contains(&(m * n)) {
        notes.push(format!("theorem inapplicable: mn = {} is one of 2, 3, 6", m * n));
    }
    let curve = Curve::new(n, angle, field)?;
    let halves = halve_two_torsion(&curve, (angle.r - angle.s) * n)?;
    let class = if halves.is_empty() {
        TorsionClass { shape: TorsionShape::Z2Z2, witnesses: Vec::new() }
    } else {
        TorsionClass { shape: TorsionShape::Z2Z4, witnesses: halves }
    };
    Ok((class, notes))
}

/// Descend a trace-zero point of E_{n,theta}(K) to the twist E_{mn,theta}(Q):
/// P = (x, y' sqrt(m)) with x rational maps to (m x, m^2 y').
pub fn twist_descend(curve: &Curve, p: &CurvePoint) -> Result<(Curve, CurvePoint)> {
    let m = curve
        .field
        .m()
        .ok_or_else(|| Error::domain("twist_descend requires a curve over K".to_string()))?;
    let target = Curve::over_q(sqf(m * curve.n)? as i64, curve.angle)?;
    if sqf(m * curve.n)? as i64 != m * curve.n {
        return Err(Error::domain("twist_descend requires gcd(m, n) = 1".to_string()));
    }
    match p {
        CurvePoint::Infinity => Ok((target, CurvePoint::Infinity)),
        CurvePoint::Affine { x, y } => {
            if !curve.contains(p) {
                return Err(Error::domain("twist_descend: point not on curve".to_string()));
            }
            let sigma_neg = neg(&CurvePoint::Affine { x: x.conj(), y: y.conj() });
            if sigma_neg != *p {
                return Err(Error::domain("twist_descend requires sigma(P) = -P".to_string()));
            }
            let xq = x
                .as_rational()
                .ok_or_else(|| Error::domain("twist_descend: x must be rational".to_string()))?;
            let yq = y.b(); // y = y' sqrt(m)
            let mx = xq * rat(m);
            let my = yq * rat(m * m);
            let q = target.affine(QuadElem::rational(mx), QuadElem::rational(my))?;
            Ok((target, q))
        }
    }
}

/// Lift a point of E_{mn,theta}(Q) to E_{n,theta}(K): (x, y) maps to
/// (x/m, (y/m^2) sqrt(m)).
pub fn twist_ascend(curve_q: &Curve, p: &CurvePoint, n: i64, m: i64) -> Result<(Curve, CurvePoint)> {
    let field = NumField::quad(m)?;
    if curve_q.n != m * n {
        return Err(Error::domain(format!(
            "twist_ascend expects a curve for mn = {}, got {}",
            m * n,
            curve_q.n
        )));
    }
    let target = Curve::new(n, curve_q.angle, field)?;
    match p {
        CurvePoint::Infinity => Ok((target, CurvePoint::Infinity)),
        CurvePoint::Affine { x, y } => {
            let xq = x.as_rational().ok_or_else(|| Error::domain("rational point expected".to_string()))?;
            let yq = y.as_rational().ok_or_else(|| Error::domain("rational point expected".to_string()))?;
            let nx = QuadElem::rational(xq / rat(m)).promote(field);
            let ny = QuadElem::new(Rat::zero(), yq / rat(m * m), field)?;
            let q = target.affine(nx, ny)?;
            Ok((target, q))
        }
    }
}
