//! `h^1(T_X) - h^2(T_X)` for a conic bundle `X -> S` over a non-algebraic
//! Kaehler surface, with the inequalities that make it non-negative.
//!
//! The count is obtained by evaluating the closed form from
//! [`crate::chern::conic::riero_target`] on the given numbers:
//! `h^0 + c2(E) - c1(E)c1(S) - 2 c1(S)^2 + 7 chi(O_S)`.

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::chern::conic::{bogomolov_form, riero_target, surface_ring, SurfaceNumbers};
use crate::surface::{BundleInvariants, SurfaceModel};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationError {
    #[error("E must have rank 3, got {0}")]
    UnsupportedRank(u32),
    #[error("count evaluated to the non-integer {0}; the invariants are inconsistent")]
    NonIntegerResult(String),
    #[error("c1(E) must be numerically trivial when a(S) = 0, got c1^2 = {c1_sq}, c1.K = {c1_dot_k}")]
    A0NonzeroC1 { c1_sq: i64, c1_dot_k: i64 },
    #[error("outside the hypotheses: {0}")]
    OutOfHypotheses(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PositiveStrict,
    NonnegWithEqualityConditions,
    ExceptionalCaseI,
    ExceptionalCaseII,
    OutOfHypotheses,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub schema: &'static str,
    pub h0_tx: u64,
    pub h1_minus_h2: i64,
    /// `c2(E) - c1(E)^2 / 3`, as a reduced fraction.
    pub banlep_lhs: String,
    pub banlep_holds: bool,
    pub chern_gap: i64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub const NOTE_H1_NONZERO: &str =
    "H^1(T_X) != 0 holds for every conic bundle over a non-algebraic Kaehler surface with rho(X) = rho(S) + 1";
pub const NOTE_PICARD: &str = "assumes rho(X) = rho(S) + 1";
pub const NOTE_PROJECTIVELY_FLAT: &str =
    "torus with c1^2(E) = c2(E) = 0: numerically consistent with projectively flat E";
pub const NOTE_ELLIPTIC_FIBERS: &str = "minimal properly elliptic with c2(S) = 0: stated condition that all singular \
     fibers are multiples of smooth elliptic curves, not checkable from numbers";

fn require_rank_three(e: &BundleInvariants) -> Result<(), DeformationError> {
    if e.rank != 3 {
        return Err(DeformationError::UnsupportedRank(e.rank));
    }
    Ok(())
}

/// `h^1(T_X) - h^2(T_X)`.
pub fn h1_minus_h2(s: &SurfaceModel, e: &BundleInvariants, h0_tx: u64) -> Result<i64, DeformationError> {
    require_rank_three(e)?;
    let value = SurfaceNumbers::new(s, e)
        .evaluate(&riero_target(&surface_ring()))
        .expect("closed form uses surface monomials only");
    let total = value + Rational::from_integer(h0_tx as i64);
    if !total.is_integer() {
        return Err(DeformationError::NonIntegerResult(total.to_string()));
    }
    Ok(total.to_integer())
}

/// `(c2 - c1^2 / 3, c2 - c1^2 / 3 >= 0)`.
pub fn banlep_check(e: &BundleInvariants) -> (Rational, bool) {
    let numbers = SurfaceNumbers { c1_sq: 0, c2: 0, e1_sq: e.c1_sq, e1_c1: 0, e2: e.c2 };
    let v = numbers.evaluate(&bogomolov_form(&surface_ring())).expect("surface monomials only");
    (v, !v.is_negative())
}

/// `c1(E)^2 - 3 c1(E)c1(S) - 4 c1(S)^2`.
pub fn chern_gap(s: &SurfaceModel, e: &BundleInvariants) -> Result<i64, DeformationError> {
    if s.alg_dim() == 0 && (e.c1_sq != 0 || e.c1_dot_k != 0) {
        return Err(DeformationError::A0NonzeroC1 { c1_sq: e.c1_sq, c1_dot_k: e.c1_dot_k });
    }
    Ok(e.c1_sq - 3 * e.c1_dot_c1_surface() - 4 * s.c1_squared())
}

/// Negative semi-definiteness of the Neron-Severi form on a non-algebraic
/// surface, applied to `K` and `c1(E)`.
fn lattice_violations(s: &SurfaceModel, e: &BundleInvariants) -> Vec<String> {
    let mut out = Vec::new();
    if e.c1_sq > 0 {
        out.push(format!("c1(E)^2 = {} > 0 is impossible on a non-algebraic surface", e.c1_sq));
    }
    if e.c1_dot_k * e.c1_dot_k > s.k_squared() * e.c1_sq {
        out.push(format!(
            "(c1(E).K)^2 = {} exceeds K^2 c1(E)^2 = {}, impossible for a semi-definite form",
            e.c1_dot_k * e.c1_dot_k,
            s.k_squared() * e.c1_sq
        ));
    }
    out
}

pub fn classify(s: &SurfaceModel, e: &BundleInvariants, h0_tx: u64) -> Result<DeformationReport, DeformationError> {
    if s.alg_dim() >= 2 {
        return Err(DeformationError::OutOfHypotheses("S is algebraic".into()));
    }
    if !s.is_kaehler() {
        return Err(DeformationError::OutOfHypotheses("S is not Kaehler".into()));
    }
    let value = h1_minus_h2(s, e, h0_tx)?;
    let (banlep, banlep_holds) = banlep_check(e);
    let gap = chern_gap(s, e)?;
    let mut notes = vec![NOTE_H1_NONZERO.to_string(), NOTE_PICARD.to_string()];

    let mut violations = lattice_violations(s, e);
    if !banlep_holds {
        violations.push(format!("c2(E) - c1(E)^2/3 = {banlep} < 0 contradicts the Bogomolov-Luebke inequality"));
    }
    if gap < 0 {
        violations.push(format!("c1(E)^2 - 3 c1(E)c1(S) - 4 c1(S)^2 = {gap} < 0 contradicts the discriminant bound"));
    }
    let verdict = if !violations.is_empty() {
        notes.extend(violations);
        Verdict::OutOfHypotheses
    } else if value > 0 {
        Verdict::PositiveStrict
    } else {
        // every summand of value - h0 is non-negative here, so equality
        // forces all of them to vanish
        debug_assert_eq!(value, 0);
        let vanish = h0_tx == 0 && s.c1_squared() == 0 && s.c2() == 0 && e.c1_sq == 0 && e.c2 == 0;
        match (s.kodaira_dim(), s.is_minimal()) {
            _ if !vanish => {
                notes.push("equality without the vanishing conditions: inconsistent input".to_string());
                Verdict::OutOfHypotheses
            }
            (0, _) => {
                notes.push(NOTE_PROJECTIVELY_FLAT.to_string());
                Verdict::ExceptionalCaseI
            }
            (1, true) => {
                notes.push(NOTE_ELLIPTIC_FIBERS.to_string());
                Verdict::ExceptionalCaseII
            }
            _ => Verdict::NonnegWithEqualityConditions,
        }
    };
    Ok(DeformationReport {
        schema: crate::SCHEMA,
        h0_tx,
        h1_minus_h2: value,
        banlep_lhs: banlep.to_string(),
        banlep_holds,
        chern_gap: gap,
        verdict,
        notes,
    })
}
