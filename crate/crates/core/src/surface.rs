//! Numerical models of compact complex surfaces.
//!
//! A surface is represented only through its numerical invariants. The
//! canonical class `K_S` is the single source of truth for signs: wherever a
//! formula is naturally written with `c_1(S)` the caller passes `L·K_S` and
//! the sign is flipped internally (`c_1(S) = -K_S`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("Noether's formula violated: K^2 + c2 = {sum} is not divisible by 12")]
    NoetherViolation { sum: i64 },
    #[error(
        "a non-algebraic Kähler surface needs K^2 <= 0 and chi(O) >= 0, got K^2 = {k_squared}, chi(O) = {chi_o}"
    )]
    NonAlgebraicPositivity { k_squared: i64, chi_o: i64 },
    #[error("field `{field}` out of range: {value}")]
    OutOfRange { field: &'static str, value: i64 },
    #[error("L^2 - L.K = {diff} is odd; no line bundle has these numbers")]
    ParityViolation { diff: i64 },
    #[error("dimension mismatch: form has rank {rank}, class has length {len}")]
    DimensionMismatch { rank: usize, len: usize },
    #[error("intersection matrix is not symmetric at ({row}, {col})")]
    AsymmetricForm { row: usize, col: usize },
    #[error("intersection matrix must be square and non-empty")]
    MalformedForm,
    #[error("non-minimal surface without a (-1)-curve in the attached configuration")]
    MissingExceptionalCurve,
}

/// Numerical invariants of a compact complex surface.
///
/// `chi_o` is always derived from Noether's formula and can not be set
/// independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SurfaceFields")]
pub struct SurfaceModel {
    k_squared: i64,
    c2: i64,
    #[serde(rename = "chi_O")]
    chi_o: i64,
    picard_rank: u32,
    alg_dim: u8,
    kodaira_dim: i8,
    minimal: bool,
    kaehler: bool,
}

/// Constructor fields of a [`SurfaceModel`] as they appear on the wire.
/// A `chi_O` entry is accepted and ignored.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFields {
    #[serde(default)]
    schema: Option<String>,
    k_squared: i64,
    c2: i64,
    picard_rank: i64,
    alg_dim: i64,
    kodaira_dim: i64,
    minimal: bool,
    kaehler: bool,
    #[serde(default, rename = "chi_O")]
    _chi_o: Option<i64>,
}

impl TryFrom<SurfaceFields> for SurfaceModel {
    type Error = String;

    fn try_from(f: SurfaceFields) -> Result<Self, Self::Error> {
        if let Some(schema) = &f.schema {
            crate::check_schema(schema)?;
        }
        make_surface(
            f.k_squared,
            f.c2,
            f.picard_rank,
            f.alg_dim,
            f.kodaira_dim,
            f.minimal,
            f.kaehler,
        )
        .map_err(|e| e.to_string())
    }
}

/// Validated constructor; computes `chi_O = (K^2 + c2) / 12`.
pub fn make_surface(
    k_squared: i64,
    c2: i64,
    picard_rank: i64,
    alg_dim: i64,
    kodaira_dim: i64,
    minimal: bool,
    kaehler: bool,
) -> Result<SurfaceModel, SurfaceError> {
    if picard_rank < 0 || picard_rank > u32::MAX as i64 {
        return Err(SurfaceError::OutOfRange { field: "picard_rank", value: picard_rank });
    }
    if !(0..=2).contains(&alg_dim) {
        return Err(SurfaceError::OutOfRange { field: "alg_dim", value: alg_dim });
    }
    if !(-1..=2).contains(&kodaira_dim) {
        return Err(SurfaceError::OutOfRange { field: "kodaira_dim", value: kodaira_dim });
    }
    let sum = k_squared + c2;
    if sum.rem_euclid(12) != 0 {
        return Err(SurfaceError::NoetherViolation { sum });
    }
    let chi_o = sum / 12;
    if kaehler && alg_dim < 2 && (k_squared > 0 || chi_o < 0) {
        return Err(SurfaceError::NonAlgebraicPositivity { k_squared, chi_o });
    }
    Ok(SurfaceModel {
        k_squared,
        c2,
        chi_o,
        picard_rank: picard_rank as u32,
        alg_dim: alg_dim as u8,
        kodaira_dim: kodaira_dim as i8,
        minimal,
        kaehler,
    })
}

impl SurfaceModel {
    pub fn k_squared(&self) -> i64 {
        self.k_squared
    }
    pub fn c2(&self) -> i64 {
        self.c2
    }
    pub fn chi_o(&self) -> i64 {
        self.chi_o
    }
    pub fn picard_rank(&self) -> u32 {
        self.picard_rank
    }
    pub fn alg_dim(&self) -> u8 {
        self.alg_dim
    }
    pub fn kodaira_dim(&self) -> i8 {
        self.kodaira_dim
    }
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }
    pub fn is_kaehler(&self) -> bool {
        self.kaehler
    }

    /// `c_1(S)^2`, equal to `K_S^2`.
    pub fn c1_squared(&self) -> i64 {
        self.k_squared
    }

    /// The surface obtained by blowing up one point.
    pub fn blown_up(&self) -> SurfaceModel {
        SurfaceModel {
            k_squared: self.k_squared - 1,
            c2: self.c2 + 1,
            picard_rank: self.picard_rank + 1,
            minimal: false,
            ..*self
        }
    }

    /// A non-minimal model must come with a (-1)-curve somewhere in the
    /// configuration it is paired with.
    pub fn check_exceptional_record(
        &self,
        cfg: &crate::curves::CurveConfiguration,
    ) -> Result<(), SurfaceError> {
        if self.minimal || cfg.nodes().any(|n| n.is_minus_one_curve()) {
            Ok(())
        } else {
            Err(SurfaceError::MissingExceptionalCurve)
        }
    }
}

/// Riemann-Roch for a line bundle on a surface:
/// `chi(L) = chi(O) + (L^2 - L.K) / 2`.
pub fn riemann_roch_line(surface: &SurfaceModel, l_sq: i64, l_dot_k: i64) -> Result<i64, SurfaceError> {
    let diff = l_sq - l_dot_k;
    if diff.rem_euclid(2) != 0 {
        return Err(SurfaceError::ParityViolation { diff });
    }
    Ok(surface.chi_o + diff / 2)
}

/// Left-hand side of `D.(D - 3K) - 4K^2 >= 0`.
pub fn inequality_value(surface: &SurfaceModel, d_sq: i64, d_dot_k: i64) -> i64 {
    inequality_value_raw(surface.k_squared, d_sq, d_dot_k)
}

pub(crate) fn inequality_value_raw(k_squared: i64, d_sq: i64, d_dot_k: i64) -> i64 {
    d_sq - 3 * d_dot_k - 4 * k_squared
}

/// A symmetric integer pairing on a lattice of fixed rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
}

impl IntersectionForm {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, SurfaceError> {
        let rank = matrix.len();
        if rank == 0 || matrix.iter().any(|row| row.len() != rank) {
            return Err(SurfaceError::MalformedForm);
        }
        let mut upper = (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j)));
        if let Some((row, col)) = upper.find(|&(i, j)| matrix[i][j] != matrix[j][i]) {
            return Err(SurfaceError::AsymmetricForm { row, col });
        }
        Ok(Self { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn class(&self, coeffs: Vec<i64>) -> Result<DivisorClass, SurfaceError> {
        if coeffs.len() != self.rank() {
            return Err(SurfaceError::DimensionMismatch { rank: self.rank(), len: coeffs.len() });
        }
        Ok(DivisorClass { coeffs })
    }
}

/// Integer coordinates of a divisor class with respect to a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }
}

/// `a^T M b`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass, form: &IntersectionForm) -> Result<i64, SurfaceError> {
    let rank = form.rank();
    for len in [a.coeffs.len(), b.coeffs.len()] {
        if len != rank {
            return Err(SurfaceError::DimensionMismatch { rank, len });
        }
    }
    let mut total = 0i64;
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let row: i64 = form.matrix[i].iter().zip(&b.coeffs).map(|(m, bj)| m * bj).sum();
        total += ai * row;
    }
    Ok(total)
}

/// Rank and Chern numbers of a vector bundle on a surface.
///
/// `c1_dot_k` is `c_1(E).K_S`; note `c_1(E).c_1(S) = -c1_dot_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BundleFields")]
pub struct BundleInvariants {
    pub rank: u32,
    pub c1_sq: i64,
    #[serde(rename = "c1_dot_K")]
    pub c1_dot_k: i64,
    pub c2: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFields {
    #[serde(default)]
    schema: Option<String>,
    rank: i64,
    c1_sq: i64,
    #[serde(rename = "c1_dot_K")]
    c1_dot_k: i64,
    c2: i64,
}

impl TryFrom<BundleFields> for BundleInvariants {
    type Error = String;

    fn try_from(f: BundleFields) -> Result<Self, Self::Error> {
        if let Some(schema) = &f.schema {
            crate::check_schema(schema)?;
        }
        BundleInvariants::new(f.rank, f.c1_sq, f.c1_dot_k, f.c2).map_err(|e| e.to_string())
    }
}

impl BundleInvariants {
    pub fn new(rank: i64, c1_sq: i64, c1_dot_k: i64, c2: i64) -> Result<Self, SurfaceError> {
        if rank < 1 || rank > u32::MAX as i64 {
            return Err(SurfaceError::OutOfRange { field: "rank", value: rank });
        }
        Ok(Self { rank: rank as u32, c1_sq, c1_dot_k, c2 })
    }

    /// `c_1(E).c_1(S)`.
    pub fn c1_dot_c1_surface(&self) -> i64 {
        -self.c1_dot_k
    }
}
