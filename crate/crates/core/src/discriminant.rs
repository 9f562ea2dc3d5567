//! Blow-down induction for `D.(D - 3K) - 4K^2 >= 0` on surfaces of
//! algebraic dimension one, and the algebraic-dimension-zero decision.
//!
//! A chain starts from a configuration on the top surface and contracts
//! (-1)-curves one at a time down to a minimal elliptic surface. At each
//! step `mu` is the multiplicity of the pushed-forward divisor at the image
//! point and `eps` records whether the contracted curve lies in `D`; the
//! left-hand side changes by `4 + (mu - eps)(eps - mu - 3)`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{
    blow_down, point_multiplicity, property_p, pullback_divisor, CurveConfiguration, CurveError, LocalType,
    ReducedDivisor,
};
use crate::kodaira::is_tree_of_smooth_rationals;
use crate::surface::{inequality_value_raw, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscriminantError {
    #[error("multiplicity {mu} exceeds 3, impossible for a reduced curve in an elliptic fiber")]
    MuOutOfRange { mu: i64 },
    #[error("epsilon must be 0 or 1, got {0}")]
    BadEpsilon(i64),
    #[error("base surface is not minimal: {0}")]
    NotMinimal(String),
    #[error("base surface must have algebraic dimension 1, got {0}")]
    NotAlgebraicDimensionOne(u8),
    #[error("surface must have algebraic dimension 0, got {0}")]
    NotAlgebraicDimensionZero(u8),
    #[error("property (P) fails at stage {stage}: `{witness}` meets the rest of D {pair_degree} times")]
    PropertyPFails { stage: usize, witness: String, pair_degree: i64 },
    #[error("divisor with property (P) on a minimal elliptic surface has D^2 = {d_sq}")]
    CensusViolation { d_sq: i64 },
    #[error(
        "step {step} contracting `{curve}` has (mu, eps) = ({mu}, {eps}) ({label}); \
         `{witness}` meets the rest of D {pair_degree} times"
    )]
    ExcludedCaseEncountered {
        step: usize,
        curve: String,
        mu: i64,
        eps: i64,
        label: CaseLabel,
        witness: String,
        pair_degree: i64,
    },
    #[error("step {step} contracting `{curve}` has excluded case {label} but the local data does not decide it")]
    InsufficientLocalData { step: usize, curve: String, label: CaseLabel },
    #[error("chain broken at step {step}: {reason}")]
    ChainBroken { step: usize, reason: String },
    #[error("inconsistent context: {0}")]
    InconsistentContext(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    Admissible,
    Mu3Excluded,
    Mu2Eps0Excluded,
    /// `eps = 1` with `mu <= 1`: the contracted curve itself violates (P).
    PimpExcluded,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseLabel::Admissible => "admissible",
            CaseLabel::Mu3Excluded => "mu3_excluded",
            CaseLabel::Mu2Eps0Excluded => "mu2eps0_excluded",
            CaseLabel::PimpExcluded => "pimp_excluded",
        })
    }
}

/// `4 + (mu - eps)(eps - mu - 3)`.
pub fn increment(mu: i64, eps: i64) -> i64 {
    4 + (mu - eps) * (eps - mu - 3)
}

pub fn admissible_mu_eps(mu: i64, eps: i64) -> Result<CaseLabel, DiscriminantError> {
    if !(0..=1).contains(&eps) {
        return Err(DiscriminantError::BadEpsilon(eps));
    }
    Ok(match mu {
        3 => CaseLabel::Mu3Excluded,
        2 if eps == 0 => CaseLabel::Mu2Eps0Excluded,
        0 | 1 if eps == 1 => CaseLabel::PimpExcluded,
        0..=2 => CaseLabel::Admissible,
        _ => return Err(DiscriminantError::MuOutOfRange { mu }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionStep {
    pub curve: String,
    pub mu: i64,
    pub eps: i64,
    pub delta_value: i64,
    pub case_label: CaseLabel,
}

impl InductionStep {
    pub fn new(curve: impl Into<String>, mu: i64, eps: i64) -> Result<Self, DiscriminantError> {
        Ok(Self { curve: curve.into(), mu, eps, delta_value: increment(mu, eps), case_label: admissible_mu_eps(mu, eps)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    /// Steps in contraction order, top surface first.
    pub chain: Vec<InductionStep>,
    pub base_value: i64,
    pub final_value: i64,
    pub verdict: bool,
    pub top_k_squared: i64,
    /// `D^2` and `D.K` on the top surface, from composing pullbacks.
    pub d_squared: i64,
    pub d_dot_k: i64,
}

impl Certificate {
    /// Recomputes `final_value` from the steps.
    pub fn recompute(&self) -> i64 {
        self.base_value + self.chain.iter().map(|s| increment(s.mu, s.eps)).sum::<i64>()
    }

    pub fn is_consistent(&self) -> bool {
        self.recompute() == self.final_value
            && self.final_value == inequality_value_raw(self.top_k_squared, self.d_squared, self.d_dot_k)
            && self.verdict == (self.final_value >= 0)
            && self.chain.iter().all(|s| s.delta_value == increment(s.mu, s.eps))
    }
}

/// Input to [`verify_inductive`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowDownChain {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    /// Configuration on the top surface.
    pub config: CurveConfiguration,
    pub divisor: ReducedDivisor,
    /// Curves to contract, in order.
    pub contractions: Vec<String>,
    /// Optional expected configuration after each contraction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<CurveConfiguration>,
    /// The minimal surface at the bottom of the chain.
    pub base_surface: SurfaceModel,
}

fn p_witness(cfg: &CurveConfiguration, d: &ReducedDivisor, stage: usize) -> Result<(), DiscriminantError> {
    let p = property_p(cfg, d)?;
    match (p.witness, p.witness_pair_degree) {
        (Some(witness), Some(pair_degree)) => Err(DiscriminantError::PropertyPFails { stage, witness, pair_degree }),
        _ => Ok(()),
    }
}

/// Base case: on a minimal elliptic surface a (P)-divisor has `D^2 = 0`
/// and `D.K = 0`, so the left-hand side is `-4K^2`.
pub fn minimal_elliptic_base(
    cfg: &CurveConfiguration,
    d: &ReducedDivisor,
    surface: &SurfaceModel,
) -> Result<i64, DiscriminantError> {
    base_case(cfg, d, surface, 0)
}

fn base_case(
    cfg: &CurveConfiguration,
    d: &ReducedDivisor,
    surface: &SurfaceModel,
    stage: usize,
) -> Result<i64, DiscriminantError> {
    if !surface.is_minimal() {
        return Err(DiscriminantError::NotMinimal("surface is flagged non-minimal".into()));
    }
    if surface.alg_dim() != 1 {
        return Err(DiscriminantError::NotAlgebraicDimensionOne(surface.alg_dim()));
    }
    if let Some(n) = cfg.nodes().find(|n| n.is_minus_one_curve()) {
        return Err(DiscriminantError::NotMinimal(format!("configuration still contains the (-1)-curve `{}`", n.id)));
    }
    if let Some(v) = cfg.validate().first() {
        return Err(CurveError::Invalid(format!("{v:?}")).into());
    }
    p_witness(cfg, d, stage)?;
    let d_sq = cfg.divisor_square(d);
    if d_sq != 0 {
        return Err(DiscriminantError::CensusViolation { d_sq });
    }
    Ok(-4 * surface.k_squared())
}

/// `D.K` by adjunction, when every component has known arithmetic genus.
/// Components of curves on an elliptic surface that are not rational have
/// arithmetic genus one.
fn adjunction_d_dot_k(cfg: &CurveConfiguration, d: &ReducedDivisor) -> i64 {
    d.iter()
        .filter_map(|id| cfg.node(id))
        .map(|n| {
            let pa = if n.rational_smooth { 0 } else { 1 };
            2 * pa - 2 - n.self_int
        })
        .sum()
}

fn component_of(cfg: &CurveConfiguration, d: &ReducedDivisor, start: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([start.to_string()]);
    let mut queue = VecDeque::from([start.to_string()]);
    while let Some(a) = queue.pop_front() {
        for b in d.iter() {
            if !seen.contains(b) && cfg.intersection(&a, b) > 0 {
                seen.insert(b.to_string());
                queue.push_back(b.to_string());
            }
        }
    }
    seen
}

/// Recognises the connected component of `D'` through the image point as
/// one of the shapes the exclusion arguments handle.
fn excluded_shape_known(
    below: &CurveConfiguration,
    d_below: &ReducedDivisor,
    point: &str,
    label: CaseLabel,
) -> bool {
    let Some(p) = below.point(point) else { return false };
    let through: Vec<&str> = p.incidences.iter().filter(|i| d_below.contains(&i.curve)).map(|i| i.curve.as_str()).collect();
    let Some(first) = through.first() else { return false };
    let comp = component_of(below, d_below, first);
    let smooth = |id: &String| below.node(id).is_some_and(|n| n.rational_smooth);
    match label {
        CaseLabel::Mu3Excluded => {
            p.local_type == LocalType::TripleOrdinary
                && through.len() == 3
                && comp.len() == 3
                && comp.iter().all(smooth)
        }
        CaseLabel::Mu2Eps0Excluded => {
            let irreducible_singular = comp.len() == 1
                && below.node(first).is_some_and(|n| n.genus_note.is_some())
                && p.mult_of(first) == 2;
            let tangent_pair = comp.len() == 2
                && comp.iter().all(smooth)
                && p.local_type == LocalType::Tangential
                && below.intersection(through[0], through[1]) == 2;
            let cycle = comp.len() >= 2
                && comp.iter().all(smooth)
                && through.len() == 2
                && comp.iter().all(|c| comp.iter().filter(|o| *o != c).map(|o| below.intersection(c, o)).sum::<i64>() == 2);
            irreducible_singular || tangent_pair || cycle
        }
        _ => false,
    }
}

/// Runs the blow-down induction and returns a certificate.
pub fn verify_inductive(chain: &BlowDownChain) -> Result<Certificate, DiscriminantError> {
    if let Some(schema) = &chain.schema {
        crate::check_schema(schema).map_err(DiscriminantError::InconsistentContext)?;
    }
    if !chain.stages.is_empty() && chain.stages.len() != chain.contractions.len() {
        return Err(DiscriminantError::ChainBroken {
            step: 0,
            reason: format!("{} stages for {} contractions", chain.stages.len(), chain.contractions.len()),
        });
    }
    chain.config.check_divisor(&chain.divisor)?;
    let mut cfg = chain.config.clone();
    let mut d = chain.divisor.clone();
    let mut steps = Vec::with_capacity(chain.contractions.len());
    let broken = |step: usize, reason: String| DiscriminantError::ChainBroken { step, reason };

    for (step, c0) in chain.contractions.iter().enumerate() {
        let node = cfg.node(c0).ok_or_else(|| broken(step, format!("unknown curve `{c0}`")))?;
        if !node.is_minus_one_curve() {
            return Err(broken(step, format!("`{c0}` is not a (-1)-curve")));
        }
        let mu: i64 = d.iter().filter(|c| *c != c0).map(|c| cfg.intersection(c0, c)).sum();
        let eps = d.contains(c0) as i64;
        let label = admissible_mu_eps(mu, eps)?;
        let bd = blow_down(&cfg, c0).map_err(|e| broken(step, e.to_string()))?;
        let d_below = bd.push_divisor(&d);
        if mu > 0 {
            let point = bd.image_point.as_deref().ok_or_else(|| broken(step, "no image point".into()))?;
            let m = point_multiplicity(&bd.config, &d_below, point)? as i64;
            if m != mu {
                return Err(broken(step, format!("multiplicity at image point is {m}, intersection count gives {mu}")));
            }
        }

        if label != CaseLabel::Admissible {
            let known = match label {
                CaseLabel::PimpExcluded => true,
                _ => bd.image_point.as_deref().is_some_and(|p| excluded_shape_known(&bd.config, &d_below, p, label)),
            };
            // under (0,1) and (1,1) the contracted curve is its own witness
            let p = match label {
                CaseLabel::PimpExcluded => (Some(c0.clone()), Some(mu - eps + 1)),
                _ => {
                    let p = property_p(&cfg, &d)?;
                    (p.witness, p.witness_pair_degree)
                }
            };
            return match (known, p.0, p.1) {
                (true, Some(witness), Some(pair_degree)) => Err(DiscriminantError::ExcludedCaseEncountered {
                    step,
                    curve: c0.clone(),
                    mu,
                    eps,
                    label,
                    witness,
                    pair_degree,
                }),
                _ => Err(DiscriminantError::InsufficientLocalData { step, curve: c0.clone(), label }),
            };
        }
        p_witness(&cfg, &d, step)?;

        if let Some(expected) = chain.stages.get(step) {
            let (got, want) = (bd.config.table(), expected.table());
            if got.ids != want.ids || got.matrix != want.matrix || got.rational_smooth != want.rational_smooth {
                return Err(broken(step, format!("configuration after contracting `{c0}` differs from the given stage")));
            }
        }
        steps.push(InductionStep::new(c0.clone(), mu, eps)?);
        cfg = bd.config;
        d = d_below;
    }

    let n = steps.len();
    let base_value = base_case(&cfg, &d, &chain.base_surface, n)?;
    let final_value = base_value + steps.iter().map(|s| s.delta_value).sum::<i64>();
    let top_k_squared = chain.base_surface.k_squared() - n as i64;

    // second path: pull D'^2 = 0, D'.K' = 0 back up the chain
    let (mut d_sq, mut d_dot_k) = (0, 0);
    for s in steps.iter().rev() {
        (d_sq, d_dot_k) = pullback_divisor(d_sq, d_dot_k, s.mu, s.eps)?;
    }
    let two_path = inequality_value_raw(top_k_squared, d_sq, d_dot_k);
    if two_path != final_value {
        return Err(broken(n, format!("pullback composition gives {two_path}, increments give {final_value}")));
    }
    let direct_sq = chain.config.divisor_square(&chain.divisor);
    let direct_k = adjunction_d_dot_k(&chain.config, &chain.divisor);
    if (direct_sq, direct_k) != (d_sq, d_dot_k) {
        return Err(broken(
            n,
            format!("top surface has D^2 = {direct_sq}, D.K = {direct_k}; pullbacks give {d_sq}, {d_dot_k}"),
        ));
    }

    Ok(Certificate {
        schema: crate::SCHEMA,
        chain: steps,
        base_value,
        final_value,
        verdict: final_value >= 0,
        top_k_squared,
        d_squared: d_sq,
        d_dot_k,
    })
}

/// Outcome of the algebraic-dimension-zero decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct A0Decision {
    pub schema: &'static str,
    /// True iff `D = 0`.
    pub holds: bool,
    pub witness: Option<String>,
    pub witness_pair_degree: Option<i64>,
}

/// On a surface with `a(S) = 0` every connected curve is a tree of smooth
/// rational curves, so only `D = 0` can have property (P).
pub fn decide_a0(
    surface: &SurfaceModel,
    cfg: &CurveConfiguration,
    d: &ReducedDivisor,
) -> Result<A0Decision, DiscriminantError> {
    if surface.alg_dim() != 0 {
        return Err(DiscriminantError::NotAlgebraicDimensionZero(surface.alg_dim()));
    }
    cfg.check_divisor(d)?;
    if d.is_zero() {
        return Ok(A0Decision { schema: crate::SCHEMA, holds: true, witness: None, witness_pair_degree: None });
    }
    if !is_tree_of_smooth_rationals(cfg, d) {
        return Err(DiscriminantError::InconsistentContext(
            "curves on a surface of algebraic dimension 0 form trees of smooth rational curves".into(),
        ));
    }
    let p = property_p(cfg, d)?;
    if p.holds {
        return Err(DiscriminantError::InconsistentContext("a tree satisfied property (P)".into()));
    }
    Ok(A0Decision { schema: crate::SCHEMA, holds: false, witness: p.witness, witness_pair_degree: p.witness_pair_degree })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::curves::{blow_up, tests::chain as curve_chain};
    use crate::kodaira::{fiber, FiberType};
    use crate::surface::make_surface;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Minimal elliptic K3 surface of algebraic dimension one.
    pub(crate) fn elliptic() -> SurfaceModel {
        make_surface(0, 24, 10, 1, 0, true, true).unwrap()
    }

    /// Blows up `points` in order, choosing `eps` so every step is
    /// admissible when possible; returns the chain.
    pub(crate) fn build_chain(
        t: FiberType,
        full: bool,
        mut pick: impl FnMut(&CurveConfiguration, &ReducedDivisor) -> Option<String>,
        depth: usize,
    ) -> BlowDownChain {
        let rec = fiber(t).unwrap();
        let mut cfg = rec.config.clone();
        let mut d = if full { rec.reduced() } else { ReducedDivisor::zero() };
        let mut exceptional = Vec::new();
        for _ in 0..depth {
            let Some(p) = pick(&cfg, &d) else { break };
            let mu = point_multiplicity(&cfg, &d, &p).unwrap();
            let bu = blow_up(&cfg, &p).unwrap();
            let mut ids: Vec<String> = d.iter().map(str::to_string).collect();
            if mu >= 2 {
                ids.push(bu.exceptional.clone());
            }
            d = ReducedDivisor::new(ids);
            cfg = bu.config;
            exceptional.push(bu.exceptional);
        }
        exceptional.reverse();
        BlowDownChain {
            schema: None,
            config: cfg,
            divisor: d,
            contractions: exceptional,
            stages: vec![],
            base_surface: elliptic(),
        }
    }

    fn first_point(name: &'static str) -> impl FnMut(&CurveConfiguration, &ReducedDivisor) -> Option<String> {
        move |c, _| c.point(name).map(|p| p.id.clone())
    }

    #[test]
    fn labels() {
        use CaseLabel::*;
        let expect = [
            ((0, 0), Admissible),
            ((1, 0), Admissible),
            ((2, 0), Mu2Eps0Excluded),
            ((3, 0), Mu3Excluded),
            ((0, 1), PimpExcluded),
            ((1, 1), PimpExcluded),
            ((2, 1), Admissible),
            ((3, 1), Mu3Excluded),
        ];
        for ((mu, eps), label) in expect {
            assert_eq!(admissible_mu_eps(mu, eps).unwrap(), label, "({mu},{eps})");
            if label == Admissible {
                assert!((mu - eps) * (mu - eps + 3) <= 4);
            }
        }
        assert_eq!(admissible_mu_eps(4, 0), Err(DiscriminantError::MuOutOfRange { mu: 4 }));
        assert_eq!(admissible_mu_eps(1, 2), Err(DiscriminantError::BadEpsilon(2)));
    }

    #[test]
    fn base_cases() {
        let s = elliptic();
        let i5 = fiber(FiberType::I(5)).unwrap();
        assert_eq!(minimal_elliptic_base(&i5.config, &i5.reduced(), &s), Ok(0));
        assert_eq!(minimal_elliptic_base(&i5.config, &ReducedDivisor::zero(), &s), Ok(0));
        let single = ReducedDivisor::new(["C0"]);
        assert!(matches!(
            minimal_elliptic_base(&i5.config, &single, &s),
            Err(DiscriminantError::PropertyPFails { pair_degree: 0, .. })
        ));
        assert!(matches!(
            minimal_elliptic_base(&i5.config, &i5.reduced(), &s.blown_up()),
            Err(DiscriminantError::NotMinimal(_))
        ));
    }

    #[test]
    fn empty_chain_on_cycle() {
        let c = build_chain(FiberType::I(4), true, |_, _| None, 0);
        let cert = verify_inductive(&c).unwrap();
        assert_eq!((cert.final_value, cert.verdict), (0, true));
        assert!(cert.is_consistent());
    }

    #[test]
    fn node_of_i1() {
        let c = build_chain(FiberType::I(1), true, first_point("node"), 1);
        assert_eq!(c.contractions, vec!["E1"]);
        let cert = verify_inductive(&c).unwrap();
        assert_eq!(cert.chain.len(), 1);
        let s = &cert.chain[0];
        assert_eq!((s.mu, s.eps, s.delta_value, s.case_label), (2, 1, 0, CaseLabel::Admissible));
        assert_eq!((cert.final_value, cert.verdict), (0, true));
        assert_eq!(cert.top_k_squared, -1);
        assert!(cert.is_consistent());
    }

    #[test]
    fn triple_point_is_excluded() {
        let c = build_chain(FiberType::IV, true, first_point("t"), 1);
        match verify_inductive(&c) {
            Err(DiscriminantError::ExcludedCaseEncountered { mu: 3, eps: 1, label, pair_degree, .. }) => {
                assert_eq!(label, CaseLabel::Mu3Excluded);
                assert_eq!(pair_degree, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mu2_eps0_subcases() {
        for (t, point) in [(FiberType::I(1), "node"), (FiberType::II, "cusp"), (FiberType::III, "t"), (FiberType::I(3), "p0_1")] {
            let mut c = build_chain(t, true, first_point(point), 1);
            c.divisor = ReducedDivisor::new(c.divisor.iter().filter(|id| !id.starts_with('E')).map(str::to_string));
            match verify_inductive(&c) {
                Err(DiscriminantError::ExcludedCaseEncountered { mu: 2, eps: 0, label, pair_degree, .. }) => {
                    assert_eq!(label, CaseLabel::Mu2Eps0Excluded, "{t}");
                    assert!(pair_degree < 2);
                }
                other => panic!("{t}: {other:?}"),
            }
        }
    }

    #[test]
    fn pimp_excluded_names_contracted_curve() {
        // E2 blows up the point where E1 meets C1; with C1 outside D the
        // first step has (mu, eps) = (1, 1)
        let rec = fiber(FiberType::I(3)).unwrap();
        let bu = blow_up(&rec.config, "p0_1").unwrap();
        let bu2 = blow_up(&bu.config, "E1.C1").unwrap();
        let mut c = build_chain(FiberType::I(3), true, |_, _| None, 0);
        c.config = bu2.config;
        c.contractions = vec!["E2".into(), "E1".into()];
        c.divisor = ReducedDivisor::new(["C0", "C2", "E1", "E2"]);
        match verify_inductive(&c) {
            Err(DiscriminantError::ExcludedCaseEncountered { curve, label, witness, .. }) => {
                assert_eq!(label, CaseLabel::PimpExcluded);
                assert_eq!((curve.as_str(), witness.as_str()), ("E2", "E2"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn broken_chains() {
        let mut c = build_chain(FiberType::I(1), true, first_point("node"), 1);
        c.contractions = vec!["C0".into()];
        assert!(matches!(verify_inductive(&c), Err(DiscriminantError::ChainBroken { step: 0, .. })));
        let mut c = build_chain(FiberType::I(1), true, first_point("node"), 1);
        c.contractions.clear();
        assert!(matches!(verify_inductive(&c), Err(DiscriminantError::NotMinimal(_))));
        let mut c = build_chain(FiberType::I(1), true, first_point("node"), 1);
        c.stages = vec![fiber(FiberType::I(2)).unwrap().config];
        assert!(matches!(verify_inductive(&c), Err(DiscriminantError::ChainBroken { .. })));
        let mut c = build_chain(FiberType::I(1), true, first_point("node"), 1);
        c.stages = vec![fiber(FiberType::I(1)).unwrap().config];
        assert!(verify_inductive(&c).is_ok());
    }

    #[test]
    fn chain_json_round_trip() {
        let c = build_chain(FiberType::I(2), true, first_point("p0_1_0"), 1);
        let text = serde_json::to_string(&c).unwrap();
        let back: BlowDownChain = serde_json::from_str(&text).unwrap();
        assert_eq!(verify_inductive(&back), verify_inductive(&c));
    }

    fn random_point(rng: &mut StdRng, cfg: &CurveConfiguration, d: &ReducedDivisor) -> Option<String> {
        let candidates: Vec<String> = cfg
            .points()
            .filter(|p| p.local_type != LocalType::Unsupported)
            .filter(|p| point_multiplicity(cfg, d, &p.id).unwrap() < 3)
            .map(|p| p.id.clone())
            .collect();
        (!candidates.is_empty()).then(|| candidates[rng.gen_range(0..candidates.len())].clone())
    }

    #[test]
    fn random_admissible_chains_stay_nonnegative() {
        let mut rng = StdRng::seed_from_u64(7);
        let types = FiberType::all_up_to(4);
        for _ in 0..300 {
            let t = types[rng.gen_range(0..types.len())];
            let full = !t.is_starred() && rng.gen_bool(0.8);
            let depth = rng.gen_range(0..=5);
            let mut r = StdRng::seed_from_u64(rng.gen());
            let c = build_chain(t, full, |cfg, d| random_point(&mut r, cfg, d), depth);
            let cert = verify_inductive(&c).unwrap_or_else(|e| panic!("{t} {:?}: {e}", c.contractions));
            assert!(cert.verdict && cert.final_value >= 0, "{t}");
            assert!(cert.is_consistent());
        }
    }

    #[test]
    fn a0_decision() {
        let s = make_surface(0, 0, 0, 0, 0, true, true).unwrap();
        let tree = curve_chain(4);
        assert!(decide_a0(&s, &tree, &ReducedDivisor::zero()).unwrap().holds);
        let dec = decide_a0(&s, &tree, &tree.full_divisor()).unwrap();
        assert!(!dec.holds);
        assert_eq!(dec.witness_pair_degree, Some(1));
        let cyc = fiber(FiberType::I(3)).unwrap();
        assert!(matches!(decide_a0(&s, &cyc.config, &cyc.reduced()), Err(DiscriminantError::InconsistentContext(_))));
        assert!(matches!(decide_a0(&elliptic(), &tree, &tree.full_divisor()), Err(DiscriminantError::NotAlgebraicDimensionZero(1))));
    }
}
