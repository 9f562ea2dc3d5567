//! Conic bundles `X` in `P(E)` for a rank-3 bundle `E` on a surface `S`.
//!
//! `P(E)` is the bundle of one-dimensional quotients, `xi = c1(O(1))`, and
//! `X` is a divisor in `|O(2) (x) det E^*|`, so `[X] = 2 xi - e1`. Classes
//! on `P(E)` live in a ring generated by the surface classes and `xi`, with
//! `xi^3 = e1 xi^2 - e2 xi + e3`; the fiber integral reads the `xi^2`
//! coefficient.

use std::sync::Arc;

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::classes::{chern_character, dual, todd_from_ch};
use super::ring::{monomial_string, GradedRing, Monomial, Relation, RingElement};
use super::ChernError;
use crate::surface::{BundleInvariants, SurfaceModel};
use crate::Rational;

const SURFACE_GENERATORS: [(&str, u32); 4] = [("c1", 1), ("c2", 2), ("e1", 1), ("e2", 2)];

/// Numerical classes on `S`: `c1 = c1(S)`, `c2 = c2(S)`, `e1 = c1(E)`,
/// `e2 = c2(E)`, truncated above degree 2.
pub fn surface_ring() -> Arc<GradedRing> {
    GradedRing::new(&SURFACE_GENERATORS, 2, vec![]).expect("no relations")
}

/// Ring of `P(E)` for a rank-3 bundle, truncated above degree 4.
///
/// Base classes are kept formally up to total degree 4, so `xi^3` reduces
/// to `e1 xi^2 - e2 xi + e3` without dropping `e3`.
pub fn projective_bundle_ring(rank: u32) -> Result<Arc<GradedRing>, ChernError> {
    if rank != 3 {
        return Err(ChernError::UnsupportedRank(rank));
    }
    let gens = [("c1", 1), ("c2", 2), ("e1", 1), ("e2", 2), ("e3", 3), ("xi", 1)];
    let mono = |v: [u32; 6]| Monomial(v.to_vec());
    let relation = Relation {
        generator: 5,
        power: 3,
        replacement: vec![
            (mono([0, 0, 1, 0, 0, 2]), Rational::from_integer(1)),
            (mono([0, 0, 0, 1, 0, 1]), Rational::from_integer(-1)),
            (mono([0, 0, 0, 0, 1, 0]), Rational::from_integer(1)),
        ],
    };
    GradedRing::new(&gens, 4, vec![relation])
}

fn gen(ring: &Arc<GradedRing>, name: &str) -> RingElement {
    RingElement::generator(ring, name).expect("generator of a built-in ring")
}

/// Fiber integral `P(E) -> S`: the `xi^2` coefficient, as a class on `S`.
pub fn pushforward_to_s(beta: &RingElement, s_ring: &Arc<GradedRing>) -> Result<RingElement, ChernError> {
    let xi = beta.ring().index("xi")?;
    let names: Vec<usize> = SURFACE_GENERATORS.iter().map(|(n, _)| beta.ring().index(n)).collect::<Result<_, _>>()?;
    let terms = beta.terms().iter().filter(|(m, _)| m.0[xi] == 2).filter_map(|(m, c)| {
        let rest: Vec<u32> = names.iter().map(|&i| m.0[i]).collect();
        // anything outside the surface generators has degree > 2 on S
        let extra = m.0.iter().enumerate().any(|(i, e)| *e > 0 && i != xi && !names.contains(&i));
        (!extra).then_some((Monomial(rest), *c))
    });
    Ok(RingElement::from_terms(s_ring, terms))
}

/// Degree-2 part of a class on `S`, read as a formal surface number.
pub fn integral_s(alpha: &RingElement) -> RingElement {
    alpha.part(2)
}

/// `[X] = 2 xi - e1`.
pub fn conic_class(p: &Arc<GradedRing>) -> RingElement {
    &gen(p, "xi").scale(Rational::from_integer(2)) - &gen(p, "e1")
}

/// `ch(E)` from `c(E) = 1 + e1 + e2 + e3`.
pub fn bundle_ch(p: &Arc<GradedRing>) -> RingElement {
    let total = &(&(&RingElement::one(p) + &gen(p, "e1")) + &gen(p, "e2")) + &gen(p, "e3");
    chern_character(&total, 3, p.truncation())
}

/// `ch(T_S)` pulled back to `P(E)`.
pub fn surface_tangent_ch(p: &Arc<GradedRing>) -> RingElement {
    let total = &(&RingElement::one(p) + &gen(p, "c1")) + &gen(p, "c2");
    chern_character(&total, 2, p.truncation())
}

/// Relative Euler sequence `0 -> O -> pi^*E^* (x) O(1) -> T_{P/S} -> 0`.
pub fn relative_tangent_ch(p: &Arc<GradedRing>) -> RingElement {
    &(&dual(&bundle_ch(p)) * &gen(p, "xi").exp()) - &RingElement::one(p)
}

/// `ch(T_{P(E)})`.
pub fn projective_bundle_tangent_ch(p: &Arc<GradedRing>) -> RingElement {
    &relative_tangent_ch(p) + &surface_tangent_ch(p)
}

/// `ch(T_X)` as a class on `P(E)` to be restricted to `X`, from
/// `0 -> T_X -> T_{P(E)}|_X -> O_X(X) -> 0`.
pub fn conic_bundle_tangent(p: &Arc<GradedRing>) -> RingElement {
    &projective_bundle_tangent_ch(p) - &conic_class(p).exp()
}

/// `int_X beta = pi_*(beta [X])`, as a class on `S`.
pub fn integrate_over_x(beta: &RingElement, s_ring: &Arc<GradedRing>) -> Result<RingElement, ChernError> {
    Ok(integral_s(&pushforward_to_s(&(beta * &conic_class(beta.ring())), s_ring)?))
}

/// `int_{P(E)} beta`.
pub fn integrate_over_p(beta: &RingElement, s_ring: &Arc<GradedRing>) -> Result<RingElement, ChernError> {
    Ok(integral_s(&pushforward_to_s(beta, s_ring)?))
}

/// The characteristic numbers that follow from the ring computations.
#[derive(Debug, Clone)]
pub struct ConicBundleNumbers {
    pub s_ring: Arc<GradedRing>,
    pub p_ring: Arc<GradedRing>,
    pub chi_tx: RingElement,
    pub chi_ox: RingElement,
    pub chi_op: RingElement,
    pub td_s: RingElement,
    /// Coefficient of every monomial containing `e3` in the fiber integral
    /// of `ch(T_X) td(T_X) [X]`, before restricting to degree 2.
    pub e3_coefficient: Rational,
}

pub fn conic_bundle_numbers() -> Result<ConicBundleNumbers, ChernError> {
    let s = surface_ring();
    let p = projective_bundle_ring(3)?;
    let ch_x = conic_bundle_tangent(&p);
    let td_x = todd_from_ch(&ch_x, 3);
    let integrand = &(&ch_x * &td_x) * &conic_class(&p);
    let xi = p.index("xi")?;
    let e3 = p.index("e3")?;
    let e3_coefficient = integrand
        .terms()
        .iter()
        .filter(|(m, _)| m.0[xi] == 2 && m.0[e3] > 0)
        .fold(Rational::zero(), |acc, (_, c)| acc + c);
    let chi_tx = integral_s(&pushforward_to_s(&integrand, &s)?);
    let chi_ox = integrate_over_x(&td_x, &s)?;
    let td_p = todd_from_ch(&projective_bundle_tangent_ch(&p), 4);
    let chi_op = integrate_over_p(&td_p, &s)?;
    let td_s = {
        let total = &(&RingElement::one(&s) + &gen(&s, "c1")) + &gen(&s, "c2");
        integral_s(&super::classes::todd_class(&total, 2))
    };
    Ok(ConicBundleNumbers { s_ring: s, p_ring: p, chi_tx, chi_ox, chi_op, td_s, e3_coefficient })
}

/// `chi(O_S) = (c1^2 + c2) / 12` in the surface ring.
pub fn noether(s: &Arc<GradedRing>) -> RingElement {
    (&(&gen(s, "c1") * &gen(s, "c1")) + &gen(s, "c2")).scale(Rational::new(1, 12))
}

/// Right-hand side of the deformation count without `h^0`:
/// `c2(E) - c1(E)c1(S) - 2 c1(S)^2 + 7 chi(O_S)`.
pub fn riero_target(s: &Arc<GradedRing>) -> RingElement {
    let c1 = gen(s, "c1");
    let lhs = &(&gen(s, "e2") - &(&gen(s, "e1") * &c1)) - &(&c1 * &c1).scale(Rational::from_integer(2));
    &lhs + &noether(s).scale(Rational::from_integer(7))
}

/// `c2(E) - c1(E)^2 / 3`.
pub fn bogomolov_form(s: &Arc<GradedRing>) -> RingElement {
    &gen(s, "e2") - &(&gen(s, "e1") * &gen(s, "e1")).scale(Rational::new(1, 3))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RieroRow {
    pub monomial: String,
    pub chi_tx: Rational,
    pub target: Rational,
    pub residual: Rational,
}

/// `-chi(T_X)` against the closed-form right-hand side, monomial by monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RieroReport {
    pub chi_tx: RingElement,
    pub target: RingElement,
    pub residual: RingElement,
    pub e3_coefficient: Rational,
    pub rows: Vec<RieroRow>,
}

impl RieroReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.e3_coefficient.is_zero()
    }
}

pub fn riero_report() -> Result<RieroReport, ChernError> {
    let n = conic_bundle_numbers()?;
    let target = riero_target(&n.s_ring);
    let residual = &(-&n.chi_tx) - &target;
    let mut monomials: Vec<Monomial> =
        n.chi_tx.terms().keys().chain(target.terms().keys()).cloned().collect();
    monomials.sort();
    monomials.dedup();
    let rows = monomials
        .iter()
        .map(|m| RieroRow {
            monomial: monomial_string(&n.s_ring, m),
            chi_tx: n.chi_tx.coefficient(m),
            target: target.coefficient(m),
            residual: residual.coefficient(m),
        })
        .collect();
    Ok(RieroReport { chi_tx: n.chi_tx, target, residual, e3_coefficient: n.e3_coefficient, rows })
}

/// Computes `chi(T_X)` and fails unless it matches the closed form exactly.
pub fn verify_riero() -> Result<RieroReport, ChernError> {
    let report = riero_report()?;
    if !report.residual.is_zero() {
        return Err(ChernError::ResidualNonzero(report.residual.to_string()));
    }
    if !report.e3_coefficient.is_zero() {
        return Err(ChernError::ResidualNonzero(format!("e3 coefficient {}", report.e3_coefficient)));
    }
    Ok(report)
}

impl Serialize for RieroRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RieroRow", 4)?;
        s.serialize_field("monomial", &self.monomial)?;
        s.serialize_field("chi_TX", &self.chi_tx.to_string())?;
        s.serialize_field("target", &self.target.to_string())?;
        s.serialize_field("residual", &self.residual.to_string())?;
        s.end()
    }
}

impl Serialize for RieroReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RieroReport", 7)?;
        s.serialize_field("schema", crate::SCHEMA)?;
        s.serialize_field("chi_TX", &self.chi_tx.to_string())?;
        s.serialize_field("target", &self.target.to_string())?;
        s.serialize_field("residual", &self.residual.to_string())?;
        s.serialize_field("e3_coefficient", &self.e3_coefficient.to_string())?;
        s.serialize_field("holds", &self.holds())?;
        s.serialize_field("monomials", &self.rows)?;
        s.end()
    }
}

/// Values of the degree-2 surface monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceNumbers {
    /// `c1(S)^2 = K^2`.
    pub c1_sq: i64,
    pub c2: i64,
    /// `c1(E)^2`.
    pub e1_sq: i64,
    /// `c1(E).c1(S) = -c1(E).K`.
    pub e1_c1: i64,
    pub e2: i64,
}

impl SurfaceNumbers {
    pub fn new(s: &SurfaceModel, e: &BundleInvariants) -> Self {
        SurfaceNumbers { c1_sq: s.c1_squared(), c2: s.c2(), e1_sq: e.c1_sq, e1_c1: e.c1_dot_c1_surface(), e2: e.c2 }
    }

    /// Evaluates the degree-2 part of a surface-ring element.
    pub fn evaluate(&self, alpha: &RingElement) -> Result<Rational, ChernError> {
        let ring = alpha.ring();
        let value = |name: &str| -> Result<Vec<u32>, ChernError> {
            let mut v = vec![0; ring.generators().len()];
            for part in name.split('*') {
                v[ring.index(part)?] += 1;
            }
            Ok(v)
        };
        let table = [
            (value("c1*c1")?, self.c1_sq),
            (value("c2")?, self.c2),
            (value("e1*e1")?, self.e1_sq),
            (value("c1*e1")?, self.e1_c1),
            (value("e2")?, self.e2),
        ];
        let mut total = Rational::zero();
        for (m, c) in integral_s(alpha).terms() {
            let (_, v) = table
                .iter()
                .find(|(t, _)| *t == m.0)
                .ok_or_else(|| ChernError::UnknownGenerator(monomial_string(ring, m)))?;
            total += c * Rational::from_integer(*v);
        }
        Ok(total)
    }
}
