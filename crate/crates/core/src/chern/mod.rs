//! Characteristic classes over exact rationals.

pub mod classes;
pub mod conic;
pub mod ring;

pub use classes::{chern_character, todd_class, todd_from_ch};
pub use conic::{
    bogomolov_form, conic_bundle_numbers, conic_bundle_tangent, integrate_over_x, projective_bundle_ring,
    pushforward_to_s, riero_report, surface_ring, verify_riero, RieroReport, SurfaceNumbers,
};
pub use ring::{GradedRing, Monomial, RingElement};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("unknown generator or monomial `{0}`")]
    UnknownGenerator(String),
    #[error("normal form failure: {0}")]
    NormalFormFailure(String),
    #[error("only rank 3 is supported, got {0}")]
    UnsupportedRank(u32),
    #[error("nonzero residual: {0}")]
    ResidualNonzero(String),
}
