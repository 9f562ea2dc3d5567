//! Kodaira's singular fibers of elliptic fibrations as curve configurations.
//!
//! Entries are hard-coded from the standard tables. Each record is checked
//! on construction: the fiber `F = sum m_i C_i` must satisfy `F.C_j = 0` for
//! every component and `F^2 = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curves::{CurveConfiguration, CurveNode, IntersectionTable, LocalType, MarkedPoint, ReducedDivisor, Singularity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown fiber type `{0}`")]
    UnknownType(String),
    #[error("catalog entry {fiber} fails {check}")]
    Transcription { fiber: String, check: String },
    #[error("fiber {0} has too many components to enumerate")]
    TooLarge(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberType {
    I0,
    /// Cycle of `n >= 1` rational curves (a nodal curve for `n = 1`).
    I(u32),
    /// Multiple fiber `m I_n` with `m >= 2`, `n >= 0`.
    Multiple { m: u32, n: u32 },
    II,
    III,
    IV,
    I0Star,
    /// `I_n^*` for `n >= 1`.
    IStar(u32),
    IIStar,
    IIIStar,
    IVStar,
}

impl FiberType {
    pub fn validate(self) -> Result<Self, CatalogError> {
        match self {
            FiberType::I(0) | FiberType::IStar(0) => Err(CatalogError::UnknownType(self.to_string())),
            FiberType::Multiple { m, .. } if m < 2 => Err(CatalogError::UnknownType(self.to_string())),
            t => Ok(t),
        }
    }

    /// Topological Euler number of the fiber.
    pub fn euler_number(self) -> i64 {
        match self {
            FiberType::I0 => 0,
            FiberType::I(n) | FiberType::Multiple { n, .. } => n as i64,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::I0Star => 6,
            FiberType::IStar(n) => n as i64 + 6,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    pub fn is_starred(self) -> bool {
        matches!(
            self,
            FiberType::I0Star | FiberType::IStar(_) | FiberType::IVStar | FiberType::IIIStar | FiberType::IIStar
        )
    }

    /// Builds a type from the CLI spelling (`In`, `mIn`, `In*`, `IV`, ...)
    /// and explicit parameters.
    pub fn from_parts(kind: &str, n: Option<u32>, m: Option<u32>) -> Result<Self, CatalogError> {
        let unknown = || CatalogError::UnknownType(kind.to_string());
        let k = kind.trim().replace("star", "*");
        let t = match k.as_str() {
            "I0" => FiberType::I0,
            "In" => FiberType::I(n.ok_or_else(unknown)?),
            "mIn" => FiberType::Multiple { m: m.ok_or_else(unknown)?, n: n.ok_or_else(unknown)? },
            "II" => FiberType::II,
            "III" => FiberType::III,
            "IV" => FiberType::IV,
            "I0*" => FiberType::I0Star,
            "In*" => FiberType::IStar(n.ok_or_else(unknown)?),
            "II*" => FiberType::IIStar,
            "III*" => FiberType::IIIStar,
            "IV*" => FiberType::IVStar,
            other => return other.parse(),
        };
        t.validate()
    }

    /// Every fiber type with `n <= max_n`; multiple fibers are listed for
    /// `m` in `2..=3`.
    pub fn all_up_to(max_n: u32) -> Vec<FiberType> {
        let mut out = vec![FiberType::I0];
        out.extend((1..=max_n).map(FiberType::I));
        for m in 2..=3 {
            out.extend((0..=max_n).map(|n| FiberType::Multiple { m, n }));
        }
        out.extend([FiberType::II, FiberType::III, FiberType::IV, FiberType::I0Star]);
        out.extend((1..=max_n).map(FiberType::IStar));
        out.extend([FiberType::IVStar, FiberType::IIIStar, FiberType::IIStar]);
        out
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I0 => write!(f, "I0"),
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::Multiple { m, n } => write!(f, "{m}I{n}"),
            FiberType::II => write!(f, "II"),
            FiberType::III => write!(f, "III"),
            FiberType::IV => write!(f, "IV"),
            FiberType::I0Star => write!(f, "I0*"),
            FiberType::IStar(n) => write!(f, "I{n}*"),
            FiberType::IIStar => write!(f, "II*"),
            FiberType::IIIStar => write!(f, "III*"),
            FiberType::IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for FiberType {
    type Err = CatalogError;

    /// Parses the display form: `I0`, `I5`, `2I3`, `II`, `I4*`, `IV*`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CatalogError::UnknownType(s.to_string());
        let s = s.trim().replace("star", "*");
        let t = match s.as_str() {
            "II" => FiberType::II,
            "III" => FiberType::III,
            "IV" => FiberType::IV,
            "I0*" => FiberType::I0Star,
            "II*" => FiberType::IIStar,
            "III*" => FiberType::IIIStar,
            "IV*" => FiberType::IVStar,
            "I0" => FiberType::I0,
            _ => {
                let digits_end = s.find('I').ok_or_else(unknown)?;
                let (mult, rest) = s.split_at(digits_end);
                let rest = &rest[1..];
                let (num, star) = match rest.strip_suffix('*') {
                    Some(r) => (r, true),
                    None => (rest, false),
                };
                let n: u32 = num.parse().map_err(|_| unknown())?;
                match (mult.is_empty(), star) {
                    (true, false) => FiberType::I(n),
                    (true, true) => FiberType::IStar(n),
                    (false, false) => FiberType::Multiple { m: mult.parse().map_err(|_| unknown())?, n },
                    (false, true) => return Err(unknown()),
                }
            }
        };
        t.validate()
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    #[serde(rename = "type")]
    pub fiber_type: FiberType,
    pub config: CurveConfiguration,
    pub component_multiplicities: BTreeMap<String, u32>,
    pub euler_number: i64,
}

impl FiberRecord {
    /// `F.C_j` for every component, in node order.
    pub fn fiber_dot_components(&self) -> Vec<i64> {
        let cfg = &self.config;
        cfg.ids()
            .map(|j| {
                self.component_multiplicities.iter().map(|(i, &m)| m as i64 * cfg.intersection(i, j)).sum()
            })
            .collect()
    }

    pub fn fiber_square(&self) -> i64 {
        self.config
            .ids()
            .zip(self.fiber_dot_components())
            .map(|(j, v)| self.component_multiplicities[j] as i64 * v)
            .sum()
    }

    pub fn reduced(&self) -> ReducedDivisor {
        self.config.full_divisor()
    }

    /// Every nonempty subset of components, each exactly once.
    pub fn reduced_subdivisors(&self) -> Result<impl Iterator<Item = ReducedDivisor> + '_, CatalogError> {
        let table = self.config.table();
        let n = table.ids.len();
        if n >= 63 {
            return Err(CatalogError::TooLarge(self.fiber_type.to_string()));
        }
        Ok((1u64..(1u64 << n)).map(move |mask| table.divisor_of(mask)))
    }
}

fn cid(i: usize) -> String {
    format!("C{i}")
}

struct Builder {
    cfg: CurveConfiguration,
    mult: BTreeMap<String, u32>,
}

impl Builder {
    fn new() -> Self {
        Self { cfg: CurveConfiguration::new(), mult: BTreeMap::new() }
    }

    fn curve(&mut self, node: CurveNode, m: u32) -> &mut Self {
        self.mult.insert(node.id.clone(), m);
        self.cfg.add_curve(node);
        self
    }

    fn minus_two(&mut self, i: usize, m: u32) -> &mut Self {
        self.curve(CurveNode::rational(cid(i), -2), m)
    }

    fn meet(&mut self, a: usize, b: usize) -> &mut Self {
        let (x, y) = (cid(a), cid(b));
        self.cfg.add_point(MarkedPoint::new(format!("p{a}_{b}"), LocalType::Ordinary, &[(&x, 1), (&y, 1)]));
        self
    }

    /// Affine Dynkin diagram: `(multiplicity, neighbors)` per component.
    fn tree(mults: &[u32], edges: &[(usize, usize)]) -> Self {
        let mut b = Builder::new();
        for (i, &m) in mults.iter().enumerate() {
            b.minus_two(i, m);
        }
        for &(x, y) in edges {
            b.meet(x, y);
        }
        b
    }
}

fn cycle(n: u32, m: u32) -> Builder {
    let mut b = Builder::new();
    match n {
        0 => {
            b.curve(CurveNode::irrational(cid(0), 0), m);
        }
        1 => {
            b.curve(CurveNode::singular_rational(cid(0), 0, Singularity::Node), m);
            b.cfg.add_point(MarkedPoint::new("node", LocalType::Ordinary, &[("C0", 2)]));
        }
        _ => {
            let n = n as usize;
            for i in 0..n {
                b.minus_two(i, m);
            }
            if n == 2 {
                for k in 0..2 {
                    b.cfg.add_point(MarkedPoint::new(format!("p0_1_{k}"), LocalType::Ordinary, &[("C0", 1), ("C1", 1)]));
                }
            } else {
                for i in 0..n {
                    b.meet(i, (i + 1) % n);
                }
            }
        }
    }
    b
}

/// Catalog entry for a fiber type.
pub fn fiber(t: FiberType) -> Result<FiberRecord, CatalogError> {
    let t = t.validate()?;
    let b = match t {
        FiberType::I0 => cycle(0, 1),
        FiberType::I(n) => cycle(n, 1),
        FiberType::Multiple { m, n } => cycle(n, m),
        FiberType::II => {
            let mut b = Builder::new();
            b.curve(CurveNode::singular_rational(cid(0), 0, Singularity::Cusp), 1);
            b.cfg.add_point(MarkedPoint::new("cusp", LocalType::CuspOnCurve, &[("C0", 2)]));
            b
        }
        FiberType::III => {
            let mut b = Builder::new();
            b.minus_two(0, 1).minus_two(1, 1);
            b.cfg.add_point(MarkedPoint::new("t", LocalType::Tangential, &[("C0", 1), ("C1", 1)]));
            b
        }
        FiberType::IV => {
            let mut b = Builder::new();
            b.minus_two(0, 1).minus_two(1, 1).minus_two(2, 1);
            b.cfg.add_point(MarkedPoint::new("t", LocalType::TripleOrdinary, &[("C0", 1), ("C1", 1), ("C2", 1)]));
            b
        }
        // D~4: center C0
        FiberType::I0Star => Builder::tree(&[2, 1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3), (0, 4)]),
        // D~(n+4): chain C0..Cn of multiplicity 2, two leaves at each end
        FiberType::IStar(n) => {
            let n = n as usize;
            let mut mults = vec![2; n + 1];
            mults.extend([1, 1, 1, 1]);
            let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
            edges.extend([(0, n + 1), (0, n + 2), (n, n + 3), (n, n + 4)]);
            Builder::tree(&mults, &edges)
        }
        // E~6: center C0, three arms of multiplicities 2, 1
        FiberType::IVStar => {
            Builder::tree(&[3, 2, 1, 2, 1, 2, 1], &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
        }
        // E~7: chain 1-2-3-4-3-2-1 with a 2 on the middle
        FiberType::IIIStar => Builder::tree(
            &[1, 2, 3, 4, 3, 2, 1, 2],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
        ),
        // E~8: chain 2-4-6-5-4-3-2-1 with a 3 on the 6
        FiberType::IIStar => Builder::tree(
            &[2, 4, 6, 5, 4, 3, 2, 1, 3],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)],
        ),
    };
    let rec = FiberRecord {
        fiber_type: t,
        config: b.cfg,
        component_multiplicities: b.mult,
        euler_number: t.euler_number(),
    };
    let fail = |check: &str| CatalogError::Transcription { fiber: t.to_string(), check: check.to_string() };
    if !rec.config.validate().is_empty() {
        return Err(fail("configuration invariants"));
    }
    if rec.fiber_dot_components().iter().any(|&v| v != 0) {
        return Err(fail("F.C_j = 0"));
    }
    if rec.fiber_square() != 0 {
        return Err(fail("F^2 = 0"));
    }
    Ok(rec)
}

/// Every nonempty reduced sub-divisor of a fiber.
pub fn enumerate_reduced_subdivisors(rec: &FiberRecord) -> Result<Vec<ReducedDivisor>, CatalogError> {
    Ok(rec.reduced_subdivisors()?.collect())
}

/// True iff all components of `d` are smooth rational, their pairwise
/// intersections are at most one, and the dual graph of `d` has no cycle.
/// A forest counts.
pub fn is_tree_of_smooth_rationals(cfg: &CurveConfiguration, d: &ReducedDivisor) -> bool {
    if d.iter().any(|id| !cfg.node(id).is_some_and(|n| n.rational_smooth)) {
        return false;
    }
    let ids: Vec<&str> = d.iter().collect();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (k, a) in ids.iter().enumerate() {
        for b in &ids[k + 1..] {
            match cfg.intersection(a, b) {
                0 => {}
                1 => {
                    let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
                    if ra == rb {
                        return false;
                    }
                    parent[ra] = rb;
                }
                _ => return false,
            }
        }
    }
    true
}

/// Property-(P) census of one fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    #[serde(rename = "type")]
    pub fiber_type: FiberType,
    pub components: usize,
    pub subsets_checked: u64,
    /// Sub-divisors with property (P).
    pub p_divisors: Vec<ReducedDivisor>,
    /// Every (P)-divisor has `D^2 = 0`.
    pub all_p_square_zero: bool,
    /// The (P)-divisors are exactly the full reduced fiber when
    /// `F_red^2 = 0`, and there are none otherwise.
    pub only_full_fiber: bool,
}

impl Census {
    pub fn passed(&self) -> bool {
        self.all_p_square_zero && self.only_full_fiber
    }
}

/// Checks property (P) and `D^2` for every nonempty reduced sub-divisor.
pub fn census(rec: &FiberRecord) -> Result<Census, CatalogError> {
    let table: IntersectionTable = rec.config.table();
    let n = table.ids.len();
    if n >= 63 {
        return Err(CatalogError::TooLarge(rec.fiber_type.to_string()));
    }
    let full = (1u64 << n) - 1;
    let mut p_masks = Vec::new();
    let mut all_zero = true;
    for mask in 1..=full {
        if table.property_p_witness(mask).is_none() {
            all_zero &= table.square(mask) == 0;
            p_masks.push(mask);
        }
    }
    let expected: Vec<u64> = if table.square(full) == 0 { vec![full] } else { vec![] };
    Ok(Census {
        fiber_type: rec.fiber_type,
        components: n,
        subsets_checked: full,
        p_divisors: p_masks.iter().map(|&m| table.divisor_of(m)).collect(),
        all_p_square_zero: all_zero,
        only_full_fiber: p_masks == expected,
    })
}

/// Sum of Euler numbers of a list of fibers; for an elliptic surface without
/// multiple-fiber corrections this is `c2(S)`.
pub fn euler_sum(types: &[FiberType]) -> i64 {
    types.iter().map(|t| t.euler_number()).sum()
}
