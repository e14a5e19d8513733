//! Exact arithmetic for theta-congruent numbers over real quadratic fields
//! Q(sqrt(m)): triangles with a rational cosine, the elliptic curves they
//! correspond to, torsion classification, local obstructions, and bounded
//! searches that certify congruence with explicit triangle witnesses.

pub mod construct;
pub mod correspondence;
pub mod curves;
pub mod decide;
pub mod error;
pub mod obstruct;
pub mod quad;
pub mod rational;
pub mod surd;

pub use construct::{compose, search_type1, search_type2, search_type3, search_type4, SearchBudget};
pub use correspondence::{classify, phi, psi, to_conic_point, Triangle, TriangleType};
pub use curves::{Angle, Curve, CurvePoint, TorsionShape};
pub use decide::{decide, Decision, Verdict};
pub use error::{Error, Result};
pub use obstruct::{obstruction_report, Conic, ObstructionReport};
pub use quad::{NumField, QuadElem, QuadField};
pub use rational::{Place, Rat};
