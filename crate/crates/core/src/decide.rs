//! Deciding (K,theta)-congruence: bounded rational point search on the curve
//! and its twist, with the order-4 torsion route as a fallback certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::construct::{type1_via_twist, SearchBudget};
use crate::correspondence::{psi, validate, Triangle};
use crate::curves::{add, neg, point_order, torsion_k, Angle, Curve, CurvePoint, TorsionShape};
use crate::error::{Error, Result};
use crate::quad::{NumField, QuadElem};
use crate::rational::{int_sqrt, sqf, Rat};

fn as_square(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    // quick residue filter: squares mod 64
    const SQ64: u64 = {
        let mut mask = 0u64;
        let mut i = 0u64;
        while i < 64 {
            mask |= 1 << (i * i % 64);
            i += 1;
        }
        mask
    };
    if SQ64 >> (v % 64) & 1 == 0 {
        return None;
    }
    let root = int_sqrt(&BigInt::from(v))?;
    Some(i128::try_from(root).expect("root of an i128 square fits"))
}

/// Brute-force rational points: x = p/e^2 with |p| <= max_numerator,
/// 1 <= e <= max_denominator, gcd(p, e) = 1. Sorted by height, then x, then y.
pub fn naive_point_search(curve: &Curve, budget: &SearchBudget) -> Result<Vec<CurvePoint>> {
    if curve.field() != NumField::Q {
        return Err(Error::domain("naive_point_search requires a curve over Q".to_string()));
    }
    let (r, s, n) = (curve.angle().r() as i128, curve.angle().s() as i128, curve.n() as i128);
    let a2 = 2 * s * n;
    let a1 = -(r * r - s * s) * n * n;
    let mut found: Vec<(i64, Rat, Rat)> = Vec::new();
    for e in 1..=budget.max_denominator.max(1) {
        let e2 = (e * e) as i128;
        let e3 = e2 * e as i128;
        let e4 = e2 * e2;
        for p in -budget.max_numerator..=budget.max_numerator {
            if p.gcd(&e) != 1 {
                continue;
            }
            let pp = p as i128;
            // numerator of the cubic over denominator e^6
            let num = pp * pp * pp + a2 * pp * pp * e2 + a1 * pp * e4;
            if let Some(t) = as_square(num) {
                let height = p.unsigned_abs().max((e * e) as u64) as i64;
                let x = Rat::new(p.into(), (e as i128 * e as i128).into());
                let y = Rat::new(t.into(), e3.into());
                if t == 0 {
                    found.push((height, x, y));
                } else {
                    found.push((height, x.clone(), -y.clone()));
                    found.push((height, x, y));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2)));
    Ok(found
        .into_iter()
        .map(|(_, x, y)| CurvePoint::Affine {
            x: QuadElem::rational(x),
            y: QuadElem::rational(y),
        })
        .collect())
}

/// Smallest searched point of order > 2, turned into a triangle via psi(2P).
pub(crate) fn witness_from_rational_curve(
    curve: &Curve,
    budget: &SearchBudget,
) -> Result<Option<(Triangle, CurvePoint)>> {
    for p in naive_point_search(curve, budget)? {
        let (_, y) = p.xy().expect("search yields affine points");
        if y.is_zero() {
            continue; // 2-torsion
        }
        if matches!(point_order(curve, &p, 18)?, Some(o) if o <= 2) {
            continue;
        }
        let two_p = add(curve, &p, &p)?;
        let oriented = match two_p.xy() {
            None => continue,
            Some((_, y)) if y.sign() < 0 => neg(&two_p),
            _ => two_p,
        };
        match psi(curve, &oriented) {
            Ok(t) => return Ok(Some((t, oriented))),
            Err(_) => continue,
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Congruent,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub triangle: Triangle,
    pub point: CurvePoint,
    pub curve: Curve,
}

/// The outcome of a bounded congruence decision. An `Unknown` verdict only
/// means the searches within the budget found nothing; it is not a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub notes: Vec<String>,
}

/// Decide whether n is a (Q(sqrt(m)), theta)-congruent number, searching
/// E_n(Q), then the twist E_mn(Q), then the torsion of E_n(K).
pub fn decide(n: i64, m: i64, angle: Angle, budget: &SearchBudget) -> Result<Decision> {
    let field = NumField::quad(m)?;
    Curve::new(n, angle, field)?; // validates n
    let (r, s) = (angle.r(), angle.s());
    let mut notes = Vec::new();
    let g = m.gcd(&n);
    if g != 1 {
        notes.push(format!("hypothesis gcd(m, n) = 1 fails: gcd = {g}"));
    }
    if [2, 3, 6].contains(&(m * n)) {
        notes.push(format!("hypothesis mn not in {{2, 3, 6}} fails: mn = {}", m * n));
    }
    if sqf(2 * r * (r - s))? as i64 == m {
        notes.push(
            "m equals the squarefree part of 2r(r-s), so E_n(K) has torsion Z2xZ4".to_string(),
        );
    }

    // direct search on E_n(Q): a rational triangle embeds into K
    let curve_q = Curve::over_q(n, angle)?;
    if let Some((tq, point)) = witness_from_rational_curve(&curve_q, budget)? {
        let (u, v, w) = tq.sides();
        let triangle = validate(u.clone(), v.clone(), w.clone(), n, angle, field)?;
        return Ok(Decision {
            verdict: Verdict::Congruent,
            witness: Some(Witness { triangle, point, curve: curve_q }),
            source: Some("E_n/Q".to_string()),
            notes,
        });
    }

    // twist search on E_mn(Q): divide the triangle's sides by sqrt(m)
    if g == 1 {
        if let Some((triangle, curve, point)) = type1_via_twist(n, angle, m, budget)? {
            return Ok(Decision {
                verdict: Verdict::Congruent,
                witness: Some(Witness { triangle, point, curve }),
                source: Some("E_mn/Q".to_string()),
                notes,
            });
        }
    }

    // torsion route: with Z2xZ4 over K the point ((r-s)n, 0) lies in 2E(K)
    let (class, _) = torsion_k(n, angle, m)?;
    if class.shape == TorsionShape::Z2Z4 {
        let curve_k = Curve::new(n, angle, field)?;
        let t2 = curve_k.affine(
            curve_k.elem(crate::rational::rat((r - s) * n)),
            QuadElem::zero(field),
        )?;
        if let Ok(triangle) = psi(&curve_k, &t2) {
            notes.push(
                "the 2-torsion point ((r-s)n, 0) lies in 2E(K); its triangle certifies congruence"
                    .to_string(),
            );
            return Ok(Decision {
                verdict: Verdict::Congruent,
                witness: Some(Witness { triangle, point: t2, curve: curve_k }),
                source: Some("torsion".to_string()),
                notes,
            });
        }
    }

    notes.push(format!(
        "search budget exhausted (max numerator {}, max denominator {})",
        budget.max_numerator, budget.max_denominator
    ));
    Ok(Decision { verdict: Verdict::Unknown, witness: None, source: None, notes })
}
