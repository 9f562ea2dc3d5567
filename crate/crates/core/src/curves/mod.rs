//! Configurations of irreducible curves on a surface.
//!
//! A configuration records each curve's self-intersection, whether it is a
//! smooth rational curve, the global intersection numbers between distinct
//! curves, and a set of marked points carrying local intersection data.
//! Every global number `C_i.C_j` has to be accounted for by marked points
//! plus an explicit count of unmarked transversal intersections.

mod blowup;

pub use blowup::{blow_down, blow_up, pullback_divisor, BlowDown, BlowUp};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("unknown marked point `{0}`")]
    UnknownPoint(String),
    #[error("curve `{0}` is not a component of the divisor")]
    ComponentNotInDivisor(String),
    #[error("curve `{id}` is not a smooth rational curve with self-intersection -1")]
    NotMinusOneCurve { id: String },
    #[error("marked point `{0}` has a local type that can not be blown up")]
    UnsupportedLocalType(String),
    #[error("epsilon must be 0 or 1, got {0}")]
    BadEpsilon(i64),
    #[error("multiplicity must be non-negative, got {0}")]
    BadMultiplicity(i64),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Kind of singularity carried by an irreducible rational curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Singularity {
    Node,
    Cusp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveNode {
    pub id: String,
    pub self_int: i64,
    pub rational_smooth: bool,
    /// Set for a rational curve with a single node or cusp.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus_note: Option<Singularity>,
}

impl CurveNode {
    pub fn rational(id: impl Into<String>, self_int: i64) -> Self {
        Self { id: id.into(), self_int, rational_smooth: true, genus_note: None }
    }

    pub fn singular_rational(id: impl Into<String>, self_int: i64, kind: Singularity) -> Self {
        Self { id: id.into(), self_int, rational_smooth: false, genus_note: Some(kind) }
    }

    /// A curve that is not rational at all (e.g. a smooth elliptic curve).
    pub fn irrational(id: impl Into<String>, self_int: i64) -> Self {
        Self { id: id.into(), self_int, rational_smooth: false, genus_note: None }
    }

    pub fn is_minus_one_curve(&self) -> bool {
        self.rational_smooth && self.self_int == -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalType {
    /// Branches with distinct tangents; a single incident curve with
    /// multiplicity 2 is a node of that curve.
    Ordinary,
    /// Two smooth branches with local intersection number 2.
    Tangential,
    /// Three smooth branches with distinct tangents.
    TripleOrdinary,
    /// A cusp of a single curve.
    CuspOnCurve,
    #[serde(other)]
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    pub curve: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedPoint {
    pub id: String,
    pub local_type: LocalType,
    pub incidences: Vec<Incidence>,
}

impl MarkedPoint {
    pub fn new(id: impl Into<String>, local_type: LocalType, incidences: &[(&str, u32)]) -> Self {
        Self {
            id: id.into(),
            local_type,
            incidences: incidences.iter().map(|&(c, m)| Incidence { curve: c.to_string(), mult: m }).collect(),
        }
    }

    pub fn mult_of(&self, curve: &str) -> u32 {
        self.incidences.iter().filter(|i| i.curve == curve).map(|i| i.mult).sum()
    }

    pub fn contains(&self, curve: &str) -> bool {
        self.incidences.iter().any(|i| i.curve == curve)
    }

    /// Local intersection number of two distinct curves at this point.
    pub fn local_intersection(&self, a: &str, b: &str) -> u32 {
        if a == b {
            return 0;
        }
        let (ma, mb) = (self.mult_of(a), self.mult_of(b));
        if ma == 0 || mb == 0 {
            return 0;
        }
        match self.local_type {
            LocalType::Tangential => 2,
            _ => ma * mb,
        }
    }
}

/// A set of components, each taken with coefficient one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedDivisor {
    pub components: BTreeSet<String>,
}

impl ReducedDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { components: ids.into_iter().map(Into::into).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.components.contains(id)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(String::as_str)
    }
}

/// An invariant of [`CurveConfiguration`] that does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateCurve { id: String },
    DuplicatePoint { id: String },
    UnknownCurve { id: String, context: String },
    SelfPair { id: String },
    SymmetryViolation { a: String, b: String, forward: u32, backward: u32 },
    InconsistentIntersection { a: String, b: String, declared: u32, accounted: u32 },
    BadPointShape { point: String, reason: String },
    UnsupportedLocalType { point: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CurveConfiguration {
    nodes: Vec<CurveNode>,
    pairwise: BTreeMap<(String, String), u32>,
    unmarked: BTreeMap<(String, String), u32>,
    points: Vec<MarkedPoint>,
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl CurveConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &CurveNode> {
        self.nodes.iter()
    }

    pub fn node(&self, id: &str) -> Option<&CurveNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub(crate) fn node_mut(&mut self, id: &str) -> Option<&mut CurveNode> {
        self.nodes.iter_mut().find(|n| n.id == id)
    }

    pub fn points(&self) -> impl Iterator<Item = &MarkedPoint> {
        self.points.iter()
    }

    pub fn point(&self, id: &str) -> Option<&MarkedPoint> {
        self.points.iter().find(|p| p.id == id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.id.as_str())
    }

    pub fn add_curve(&mut self, node: CurveNode) -> &mut Self {
        self.nodes.push(node);
        self
    }

    /// Adds a marked point and bumps the global intersection numbers by its
    /// local contributions.
    pub fn add_point(&mut self, point: MarkedPoint) -> &mut Self {
        let curves: Vec<&str> = point.incidences.iter().map(|i| i.curve.as_str()).collect();
        for (k, a) in curves.iter().enumerate() {
            for b in &curves[k + 1..] {
                let local = point.local_intersection(a, b);
                if local > 0 {
                    *self.pairwise.entry(ordered(a, b)).or_insert(0) += local;
                }
            }
        }
        self.points.push(point);
        self
    }

    /// Records `count` unmarked transversal intersections of `a` and `b`.
    pub fn add_transversal(&mut self, a: &str, b: &str, count: u32) -> &mut Self {
        if count > 0 {
            *self.pairwise.entry(ordered(a, b)).or_insert(0) += count;
            *self.unmarked.entry(ordered(a, b)).or_insert(0) += count;
        }
        self
    }

    /// Overwrites the raw global intersection entry for the ordered pair
    /// `(a, b)` without touching point data.
    pub fn set_pairwise_raw(&mut self, a: &str, b: &str, value: u32) -> &mut Self {
        self.pairwise.insert((a.to_string(), b.to_string()), value);
        self
    }

    /// Global intersection number `C_a.C_b` for distinct curves; self
    /// intersections come from the node.
    pub fn intersection(&self, a: &str, b: &str) -> i64 {
        if a == b {
            return self.node(a).map_or(0, |n| n.self_int);
        }
        let forward = self.pairwise.get(&(a.to_string(), b.to_string()));
        let backward = self.pairwise.get(&(b.to_string(), a.to_string()));
        forward.or(backward).copied().unwrap_or(0) as i64
    }

    pub fn unmarked_count(&self, a: &str, b: &str) -> u32 {
        self.unmarked.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    /// Checks every structural invariant; an empty list means the
    /// configuration is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id.as_str()) {
                out.push(Violation::DuplicateCurve { id: n.id.clone() });
            }
        }
        let mut seen_points = BTreeSet::new();
        for p in &self.points {
            if !seen_points.insert(p.id.as_str()) {
                out.push(Violation::DuplicatePoint { id: p.id.clone() });
            }
        }
        let known = |id: &str| seen.contains(id);

        for ((a, b), &v) in &self.pairwise {
            for id in [a, b] {
                if !known(id) {
                    out.push(Violation::UnknownCurve { id: id.clone(), context: "pairwise".into() });
                }
            }
            if a == b {
                out.push(Violation::SelfPair { id: a.clone() });
                continue;
            }
            if a < b {
                if let Some(&w) = self.pairwise.get(&(b.clone(), a.clone())) {
                    if w != v {
                        out.push(Violation::SymmetryViolation {
                            a: a.clone(),
                            b: b.clone(),
                            forward: v,
                            backward: w,
                        });
                    }
                }
            }
        }
        for (a, b) in self.unmarked.keys() {
            for id in [a, b] {
                if !known(id) {
                    out.push(Violation::UnknownCurve { id: id.clone(), context: "unmarked".into() });
                }
            }
            if a == b {
                out.push(Violation::SelfPair { id: a.clone() });
            }
        }

        for p in &self.points {
            let mut ids = BTreeSet::new();
            for inc in &p.incidences {
                if !known(&inc.curve) {
                    out.push(Violation::UnknownCurve {
                        id: inc.curve.clone(),
                        context: format!("point {}", p.id),
                    });
                }
                if !ids.insert(inc.curve.as_str()) {
                    out.push(shape(p, format!("curve {} listed twice", inc.curve)));
                }
                if inc.mult == 0 {
                    out.push(shape(p, format!("curve {} has local multiplicity 0", inc.curve)));
                }
                if inc.mult > 1 && self.node(&inc.curve).is_some_and(|n| n.rational_smooth) {
                    out.push(shape(p, format!("smooth curve {} has local multiplicity {}", inc.curve, inc.mult)));
                }
            }
            let mults: Vec<u32> = p.incidences.iter().map(|i| i.mult).collect();
            match p.local_type {
                LocalType::Ordinary => {
                    if p.incidences.is_empty() {
                        out.push(shape(p, "ordinary point without incident curves".into()));
                    }
                }
                LocalType::TripleOrdinary => {
                    if mults != [1, 1, 1] {
                        out.push(shape(p, "ordinary triple point needs three curves of multiplicity 1".into()));
                    }
                }
                LocalType::Tangential => {
                    if mults != [1, 1] {
                        out.push(shape(p, "tangency needs two curves of multiplicity 1".into()));
                    }
                }
                LocalType::CuspOnCurve => {
                    if mults != [2] {
                        out.push(shape(p, "cusp needs one curve of multiplicity 2".into()));
                    } else if self.node(&p.incidences[0].curve).is_some_and(|n| n.rational_smooth) {
                        out.push(shape(p, "cusp on a smooth curve".into()));
                    }
                }
                LocalType::Unsupported => out.push(Violation::UnsupportedLocalType { point: p.id.clone() }),
            }
        }

        // Every global number is the sum of local contributions.
        let mut pairs: BTreeSet<(String, String)> = self
            .pairwise
            .keys()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| ordered(a, b))
            .collect();
        pairs.extend(self.unmarked.keys().filter(|(a, b)| a != b).cloned());
        for p in &self.points {
            for (k, x) in p.incidences.iter().enumerate() {
                for y in &p.incidences[k + 1..] {
                    if x.curve != y.curve {
                        pairs.insert(ordered(&x.curve, &y.curve));
                    }
                }
            }
        }
        for (a, b) in pairs {
            let declared = self.intersection(&a, &b) as u32;
            let accounted = self.points.iter().map(|p| p.local_intersection(&a, &b)).sum::<u32>()
                + self.unmarked_count(&a, &b);
            if declared != accounted {
                out.push(Violation::InconsistentIntersection { a, b, declared, accounted });
            }
        }
        out
    }

    pub fn check_divisor(&self, d: &ReducedDivisor) -> Result<(), CurveError> {
        match d.iter().find(|id| self.node(id).is_none()) {
            Some(id) => Err(CurveError::UnknownCurve(id.to_string())),
            None => Ok(()),
        }
    }

    /// `D^2` for a reduced divisor.
    pub fn divisor_square(&self, d: &ReducedDivisor) -> i64 {
        let ids: Vec<&str> = d.iter().collect();
        let mut total = 0;
        for (k, a) in ids.iter().enumerate() {
            total += self.intersection(a, a);
            for b in &ids[k + 1..] {
                total += 2 * self.intersection(a, b);
            }
        }
        total
    }

    /// The sum of all components.
    pub fn full_divisor(&self) -> ReducedDivisor {
        ReducedDivisor::new(self.ids())
    }

    /// Dense view used by the exhaustive sweeps.
    pub fn table(&self) -> IntersectionTable {
        let ids: Vec<String> = self.ids().map(str::to_string).collect();
        let n = ids.len();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.intersection(&ids[i], &ids[j]);
            }
        }
        let rational_smooth = self.nodes.iter().map(|n| n.rational_smooth).collect();
        IntersectionTable { ids, matrix: m, rational_smooth }
    }

    /// Gram matrix of the components, in node order.
    pub fn intersection_form(&self) -> Result<crate::surface::IntersectionForm, crate::surface::SurfaceError> {
        crate::surface::IntersectionForm::new(self.table().matrix)
    }
}

fn shape(p: &MarkedPoint, reason: String) -> Violation {
    Violation::BadPointShape { point: p.id.clone(), reason }
}

/// Dense intersection matrix plus smooth-rational flags, indexed in node
/// order. Subsets of components are bitmasks.
#[derive(Debug, Clone)]
pub struct IntersectionTable {
    pub ids: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub rational_smooth: Vec<bool>,
}

impl IntersectionTable {
    pub fn pair_degree(&self, mask: u64, c: usize) -> i64 {
        (0..self.ids.len())
            .filter(|&j| j != c && mask & (1 << j) != 0)
            .map(|j| self.matrix[c][j])
            .sum()
    }

    /// First smooth rational component of `mask` violating property (P).
    pub fn property_p_witness(&self, mask: u64) -> Option<usize> {
        (0..self.ids.len())
            .filter(|&c| mask & (1 << c) != 0 && self.rational_smooth[c])
            .find(|&c| self.pair_degree(mask, c) < 2)
    }

    pub fn square(&self, mask: u64) -> i64 {
        let members: Vec<usize> = (0..self.ids.len()).filter(|&i| mask & (1 << i) != 0).collect();
        members.iter().flat_map(|&i| members.iter().map(move |&j| (i, j))).map(|(i, j)| self.matrix[i][j]).sum()
    }

    pub fn mask_of(&self, d: &ReducedDivisor) -> u64 {
        self.ids.iter().enumerate().filter(|(_, id)| d.contains(id)).fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn divisor_of(&self, mask: u64) -> ReducedDivisor {
        ReducedDivisor::new(self.ids.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, id)| id.clone()))
    }
}

/// `C.(D - C)` for a component `C` of `D`.
pub fn pair_degree(cfg: &CurveConfiguration, d: &ReducedDivisor, c: &str) -> Result<i64, CurveError> {
    if !d.contains(c) {
        return Err(CurveError::ComponentNotInDivisor(c.to_string()));
    }
    cfg.check_divisor(d)?;
    Ok(d.iter().filter(|&j| j != c).map(|j| cfg.intersection(c, j)).sum())
}

/// Outcome of a property-(P) check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyP {
    pub holds: bool,
    /// A smooth rational component meeting the rest of the divisor fewer
    /// than two times.
    pub witness: Option<String>,
    pub witness_pair_degree: Option<i64>,
}

/// A reduced divisor has property (P) when every smooth rational component
/// `C` satisfies `C.(D - C) >= 2`. The zero divisor passes vacuously.
pub fn property_p(cfg: &CurveConfiguration, d: &ReducedDivisor) -> Result<PropertyP, CurveError> {
    cfg.check_divisor(d)?;
    for node in cfg.nodes().filter(|n| n.rational_smooth && d.contains(&n.id)) {
        let pd = pair_degree(cfg, d, &node.id)?;
        if pd < 2 {
            return Ok(PropertyP { holds: false, witness: Some(node.id.clone()), witness_pair_degree: Some(pd) });
        }
    }
    Ok(PropertyP { holds: true, witness: None, witness_pair_degree: None })
}

/// Multiplicity of `D` at a marked point: the sum of local multiplicities
/// of the components of `D` through it.
pub fn point_multiplicity(cfg: &CurveConfiguration, d: &ReducedDivisor, point: &str) -> Result<u32, CurveError> {
    let p = cfg.point(point).ok_or_else(|| CurveError::UnknownPoint(point.to_string()))?;
    Ok(p.incidences.iter().filter(|i| d.contains(&i.curve)).map(|i| i.mult).sum())
}

// ---------------------------------------------------------------------------
// JSON wire format

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairValue {
    pub a: String,
    pub b: String,
    pub value: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    nodes: Vec<CurveNode>,
    #[serde(default)]
    pairwise: Vec<PairValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    unmarked: Vec<PairValue>,
    #[serde(default)]
    points: Vec<MarkedPoint>,
}

impl Serialize for CurveConfiguration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs = |m: &BTreeMap<(String, String), u32>| {
            m.iter()
                .filter(|(_, &v)| v > 0)
                .map(|((a, b), &value)| PairValue { a: a.clone(), b: b.clone(), value })
                .collect::<Vec<_>>()
        };
        ConfigWire {
            schema: None,
            nodes: self.nodes.clone(),
            pairwise: pairs(&self.pairwise),
            unmarked: pairs(&self.unmarked),
            points: self.points.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CurveConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = ConfigWire::deserialize(deserializer)?;
        if let Some(schema) = &wire.schema {
            crate::check_schema(schema).map_err(D::Error::custom)?;
        }
        let mut pairwise = BTreeMap::new();
        for p in wire.pairwise {
            if pairwise.insert((p.a.clone(), p.b.clone()), p.value).is_some() {
                return Err(D::Error::custom(format!("duplicate pairwise entry ({}, {})", p.a, p.b)));
            }
        }
        let mut unmarked = BTreeMap::new();
        for p in wire.unmarked {
            *unmarked.entry(ordered(&p.a, &p.b)).or_insert(0) += p.value;
        }
        Ok(CurveConfiguration { nodes: wire.nodes, pairwise, unmarked, points: wire.points })
    }
}
