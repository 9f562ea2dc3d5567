//! Exact intersection calculus on surfaces, Kodaira fiber combinatorics and
//! a Chern-class / Hirzebruch-Riemann-Roch engine for conic bundles.
//!
//! All arithmetic is exact: integers for intersection numbers, rationals with
//! small denominators for characteristic classes.

pub mod chern;
pub mod cli;
pub mod curves;
pub mod deformation;
pub mod discriminant;
pub mod kodaira;
pub mod surface;

/// Tag carried by every JSON document read or written by this crate.
pub const SCHEMA: &str = "kodaira-kit/1";

/// Exact rational numbers used by the characteristic class engine.
pub type Rational = num_rational::Ratio<i64>;

pub(crate) fn check_schema(schema: &str) -> Result<(), String> {
    if schema == SCHEMA {
        Ok(())
    } else {
        Err(format!("unsupported schema `{schema}`, expected `{SCHEMA}`"))
    }
}
