//! Blow-up and blow-down of configurations.
//!
//! For a point of multiplicity `m` on a curve `C`, the strict transform
//! satisfies `C~^2 = C^2 - m^2` and `C~.E = m`; two curves through the point
//! lose `m_1 m_2` from their mutual intersection. Contracting a (-1)-curve
//! `E` inverts this: `C_i'.C_j' = C_i.C_j + (E.C_i)(E.C_j)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ordered, CurveConfiguration, CurveError, CurveNode, LocalType, MarkedPoint, ReducedDivisor, Singularity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowUp {
    pub config: CurveConfiguration,
    pub exceptional: String,
    /// Old curve id to strict transform id.
    pub transform: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowDown {
    pub config: CurveConfiguration,
    /// Old curve id to image id; the contracted curve maps to nothing.
    pub pushforward: BTreeMap<String, Option<String>>,
    /// Marked point at the image of the contracted curve, if any curve
    /// passes through it.
    pub image_point: Option<String>,
}

impl BlowDown {
    pub fn push_divisor(&self, d: &ReducedDivisor) -> ReducedDivisor {
        ReducedDivisor::new(d.iter().filter_map(|id| self.pushforward.get(id).cloned().flatten()))
    }
}

fn fresh_id(cfg: &CurveConfiguration, stem: &str) -> String {
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|id| cfg.node(id).is_none() && cfg.point(id).is_none())
        .expect("unbounded id space")
}

/// Blows up the marked point `point`.
pub fn blow_up(cfg: &CurveConfiguration, point: &str) -> Result<BlowUp, CurveError> {
    let p = cfg.point(point).ok_or_else(|| CurveError::UnknownPoint(point.to_string()))?.clone();
    if p.local_type == LocalType::Unsupported {
        return Err(CurveError::UnsupportedLocalType(p.id));
    }
    ensure_valid(cfg)?;
    for inc in &p.incidences {
        if cfg.node(&inc.curve).is_none() {
            return Err(CurveError::UnknownCurve(inc.curve.clone()));
        }
    }
    let e = fresh_id(cfg, "E");
    let mut out = cfg.clone();
    out.points.retain(|q| q.id != p.id);

    // mutual intersections at p disappear; a tangency gets one back from
    // the triple point added below
    for (k, x) in p.incidences.iter().enumerate() {
        for y in &p.incidences[k + 1..] {
            let local = p.local_intersection(&x.curve, &y.curve);
            let key = ordered(&x.curve, &y.curve);
            let current = out.intersection(&x.curve, &y.curve) as u32;
            out.pairwise.remove(&(key.1.clone(), key.0.clone()));
            out.pairwise.insert(key, current - local);
        }
    }

    for inc in &p.incidences {
        let m = inc.mult as i64;
        let node = out.node_mut(&inc.curve).expect("checked above");
        node.self_int -= m * m;
        let resolves = match (p.local_type, node.genus_note) {
            (LocalType::Ordinary, Some(Singularity::Node)) => m == 2,
            (LocalType::CuspOnCurve, Some(Singularity::Cusp)) => true,
            _ => false,
        };
        if resolves {
            node.rational_smooth = true;
            node.genus_note = None;
        }
    }
    out.add_curve(CurveNode::rational(e.clone(), -1));

    match p.local_type {
        LocalType::Ordinary | LocalType::TripleOrdinary => {
            for inc in &p.incidences {
                for k in 0..inc.mult {
                    let id = if inc.mult == 1 {
                        format!("{e}.{}", inc.curve)
                    } else {
                        format!("{e}.{}.{}", inc.curve, k + 1)
                    };
                    out.add_point(MarkedPoint::new(id, LocalType::Ordinary, &[(&inc.curve, 1), (&e, 1)]));
                }
            }
        }
        LocalType::Tangential => {
            let (a, b) = (&p.incidences[0].curve, &p.incidences[1].curve);
            out.add_point(MarkedPoint::new(
                format!("{e}.{}", p.id),
                LocalType::TripleOrdinary,
                &[(a, 1), (b, 1), (&e, 1)],
            ));
        }
        LocalType::CuspOnCurve => {
            let c = &p.incidences[0].curve;
            out.add_point(MarkedPoint::new(format!("{e}.{}", p.id), LocalType::Tangential, &[(c, 1), (&e, 1)]));
        }
        LocalType::Unsupported => unreachable!(),
    }
    out.pairwise.retain(|_, v| *v > 0);

    let transform = cfg.ids().map(|id| (id.to_string(), id.to_string())).collect();
    Ok(BlowUp { config: out, exceptional: e, transform })
}

/// Contracts the (-1)-curve `c0`.
///
/// The marked points on `c0` merge into one point. Its local type is
/// recovered when the data determines it (node, cusp, tangency, ordinary
/// triple point); otherwise it is recorded as an ordinary point with the
/// computed multiplicities, and any local intersection in excess of
/// `m_i m_j` is carried as an unmarked count.
pub fn blow_down(cfg: &CurveConfiguration, c0: &str) -> Result<BlowDown, CurveError> {
    let e = cfg.node(c0).ok_or_else(|| CurveError::UnknownCurve(c0.to_string()))?;
    if !e.is_minus_one_curve() {
        return Err(CurveError::NotMinusOneCurve { id: c0.to_string() });
    }
    ensure_valid(cfg)?;
    let survivors: Vec<&CurveNode> = cfg.nodes().filter(|n| n.id != c0).collect();
    let m: BTreeMap<&str, i64> = survivors.iter().map(|n| (n.id.as_str(), cfg.intersection(c0, &n.id))).collect();
    let (merged, kept): (Vec<&MarkedPoint>, Vec<&MarkedPoint>) = cfg.points().partition(|p| p.contains(c0));

    let mut out = CurveConfiguration::new();
    for n in &survivors {
        let mi = m[n.id.as_str()];
        let mut node = (*n).clone();
        node.self_int += mi * mi;
        if node.rational_smooth && mi >= 2 {
            node.rational_smooth = false;
            node.genus_note = match mi {
                2 if tangent_to(&merged, &n.id, c0) => Some(Singularity::Cusp),
                2 => Some(Singularity::Node),
                _ => None,
            };
        }
        out.add_curve(node);
    }
    for (k, a) in survivors.iter().enumerate() {
        for b in &survivors[k + 1..] {
            let v = cfg.intersection(&a.id, &b.id) + m[a.id.as_str()] * m[b.id.as_str()];
            if v > 0 {
                out.pairwise.insert(ordered(&a.id, &b.id), v as u32);
            }
        }
    }
    for ((a, b), &v) in &cfg.unmarked {
        if a != c0 && b != c0 {
            out.unmarked.insert((a.clone(), b.clone()), v);
        }
    }
    for p in &kept {
        out.points.push((*p).clone());
    }

    // old local contributions at the merged points, between survivors
    let through: Vec<&str> = survivors.iter().map(|n| n.id.as_str()).filter(|id| m[id] > 0).collect();
    let old_local = |a: &str, b: &str| -> u32 { merged.iter().map(|p| p.local_intersection(a, b)).sum() };

    let image_point = if through.is_empty() {
        None
    } else {
        let id = format!("p({c0})");
        let mults: Vec<i64> = through.iter().map(|c| m[c]).collect();
        let pair_locals: Vec<u32> = pairs(&through).map(|(a, b)| old_local(a, b)).collect();
        let local_type = match (mults.as_slice(), pair_locals.as_slice()) {
            ([2], _) if tangent_to(&merged, through[0], c0) => LocalType::CuspOnCurve,
            ([1, 1], [1]) => LocalType::Tangential,
            ([1, 1, 1], [0, 0, 0]) => LocalType::TripleOrdinary,
            _ => LocalType::Ordinary,
        };
        if local_type == LocalType::Ordinary {
            for (a, b) in pairs(&through) {
                let excess = old_local(a, b);
                if excess > 0 {
                    *out.unmarked.entry(ordered(a, b)).or_insert(0) += excess;
                }
            }
        }
        let incidences: Vec<(&str, u32)> = through.iter().map(|c| (*c, m[c] as u32)).collect();
        out.points.push(MarkedPoint::new(id.clone(), local_type, &incidences));
        Some(id)
    };

    let pushforward = cfg
        .ids()
        .map(|id| (id.to_string(), (id != c0).then(|| id.to_string())))
        .collect();
    Ok(BlowDown { config: out, pushforward, image_point })
}

fn ensure_valid(cfg: &CurveConfiguration) -> Result<(), CurveError> {
    match cfg.validate().first() {
        None => Ok(()),
        Some(v) => Err(CurveError::Invalid(format!("{v:?}"))),
    }
}

fn pairs<'a>(ids: &'a [&'a str]) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
    ids.iter().enumerate().flat_map(move |(k, a)| ids[k + 1..].iter().map(move |b| (*a, *b)))
}

fn tangent_to(points: &[&MarkedPoint], curve: &str, c0: &str) -> bool {
    points
        .iter()
        .any(|p| p.local_type == LocalType::Tangential && p.contains(curve) && p.contains(c0))
}

/// Numbers of `D = p^*D' + (eps - mu) C_0` on the blown-up surface, given
/// `D'^2` and `D'.K'` below; uses `K = p^*K' + C_0` and `C_0^2 = -1`.
pub fn pullback_divisor(d_sq: i64, d_dot_k: i64, mu: i64, eps: i64) -> Result<(i64, i64), CurveError> {
    if !(0..=1).contains(&eps) {
        return Err(CurveError::BadEpsilon(eps));
    }
    if mu < 0 {
        return Err(CurveError::BadMultiplicity(mu));
    }
    let t = mu - eps;
    Ok((d_sq - t * t, d_dot_k + t))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{cycle, i2};
    use super::super::*;
    use super::*;
    use crate::surface::inequality_value_raw;
    use proptest::prelude::*;

    fn ordinary_pair() -> CurveConfiguration {
        let mut c = CurveConfiguration::new();
        c.add_curve(CurveNode::rational("A", 0))
            .add_curve(CurveNode::rational("B", 1))
            .add_point(MarkedPoint::new("p", LocalType::Ordinary, &[("A", 1), ("B", 1)]))
            .add_transversal("A", "B", 2);
        c
    }

    #[test]
    fn blow_up_ordinary_double_point() {
        let cfg = ordinary_pair();
        let up = blow_up(&cfg, "p").unwrap();
        let out = &up.config;
        assert!(out.validate().is_empty(), "{:?}", out.validate());
        assert_eq!(out.intersection("A", "A"), -1);
        assert_eq!(out.intersection("B", "B"), 0);
        assert_eq!(out.intersection("A", "B"), 2);
        assert_eq!(out.intersection("A", &up.exceptional), 1);
        assert_eq!(out.intersection("B", &up.exceptional), 1);
        assert!(out.node(&up.exceptional).unwrap().is_minus_one_curve());
    }

    #[test]
    fn blow_up_triple_point() {
        let mut cfg = CurveConfiguration::new();
        for id in ["A", "B", "C"] {
            cfg.add_curve(CurveNode::rational(id, -2));
        }
        cfg.add_point(MarkedPoint::new("t", LocalType::TripleOrdinary, &[("A", 1), ("B", 1), ("C", 1)]));
        let up = blow_up(&cfg, "t").unwrap();
        let out = &up.config;
        assert!(out.validate().is_empty());
        for id in ["A", "B", "C"] {
            assert_eq!(out.intersection(id, id), -3);
            assert_eq!(out.intersection(id, &up.exceptional), 1);
        }
        assert_eq!(out.intersection("A", "B"), 0);
        assert_eq!(out.intersection("B", "C"), 0);
    }

    #[test]
    fn blow_up_cusp_and_node() {
        let mut cusp = CurveConfiguration::new();
        cusp.add_curve(CurveNode::singular_rational("C", 0, Singularity::Cusp))
            .add_point(MarkedPoint::new("c", LocalType::CuspOnCurve, &[("C", 2)]));
        let up = blow_up(&cusp, "c").unwrap();
        assert!(up.config.validate().is_empty());
        assert_eq!(up.config.intersection("C", "C"), -4);
        assert_eq!(up.config.intersection("C", &up.exceptional), 2);
        assert!(up.config.node("C").unwrap().rational_smooth);
        let tangency = up.config.points().find(|p| p.local_type == LocalType::Tangential).unwrap();
        assert!(tangency.contains("C") && tangency.contains(&up.exceptional));

        // and back: the contracted image is cuspidal again
        let down = blow_down(&up.config, &up.exceptional).unwrap();
        assert_eq!(down.config, cusp_image(&down.config));
        let node = down.config.node("C").unwrap();
        assert_eq!((node.self_int, node.rational_smooth, node.genus_note), (0, false, Some(Singularity::Cusp)));

        let mut nodal = CurveConfiguration::new();
        nodal
            .add_curve(CurveNode::singular_rational("C", 0, Singularity::Node))
            .add_point(MarkedPoint::new("n", LocalType::Ordinary, &[("C", 2)]));
        let up = blow_up(&nodal, "n").unwrap();
        assert!(up.config.validate().is_empty());
        assert_eq!(up.config.intersection("C", "C"), -4);
        assert_eq!(up.config.intersection("C", &up.exceptional), 2);
        let down = blow_down(&up.config, &up.exceptional).unwrap();
        assert_eq!(down.config.node("C").unwrap().genus_note, Some(Singularity::Node));
        assert_eq!(down.config.point("p(E1)").unwrap().local_type, LocalType::Ordinary);
    }

    fn cusp_image(cfg: &CurveConfiguration) -> CurveConfiguration {
        let mut c = CurveConfiguration::new();
        c.add_curve(CurveNode::singular_rational("C", 0, Singularity::Cusp))
            .add_point(MarkedPoint::new("p(E1)", LocalType::CuspOnCurve, &[("C", 2)]));
        assert_eq!(cfg.len(), 1);
        c
    }

    #[test]
    fn blow_up_tangency_gives_triple_point() {
        let mut iii = CurveConfiguration::new();
        iii.add_curve(CurveNode::rational("A", -2))
            .add_curve(CurveNode::rational("B", -2))
            .add_point(MarkedPoint::new("t", LocalType::Tangential, &[("A", 1), ("B", 1)]));
        let up = blow_up(&iii, "t").unwrap();
        assert!(up.config.validate().is_empty(), "{:?}", up.config.validate());
        assert_eq!(up.config.intersection("A", "B"), 1);
        assert_eq!(up.config.intersection("A", "A"), -3);
        assert!(up.config.points().any(|p| p.local_type == LocalType::TripleOrdinary));

        let down = blow_down(&up.config, &up.exceptional).unwrap();
        assert!(down.config.validate().is_empty());
        assert_eq!(down.config.intersection("A", "B"), 2);
        assert_eq!(down.config.point("p(E1)").unwrap().local_type, LocalType::Tangential);
    }

    #[test]
    fn blow_down_examples() {
        // E meets a single curve once
        let mut one = CurveConfiguration::new();
        one.add_curve(CurveNode::rational("C", -3)).add_curve(CurveNode::rational("E", -1)).add_transversal("C", "E", 1);
        let down = blow_down(&one, "E").unwrap();
        assert_eq!(down.config.intersection("C", "C"), -2);
        assert!(down.config.validate().is_empty());

        // two disjoint curves each meeting E once end up meeting once
        let mut two = one.clone();
        two.add_curve(CurveNode::rational("D", -2)).add_transversal("D", "E", 1);
        let down = blow_down(&two, "E").unwrap();
        assert_eq!(down.config.intersection("C", "D"), 1);
        assert!(down.config.validate().is_empty());

        // a curve away from E is untouched
        let mut far = one.clone();
        far.add_curve(CurveNode::rational("F", -5));
        let down = blow_down(&far, "E").unwrap();
        assert_eq!(down.config.node("F"), far.node("F"));

        assert_eq!(
            blow_down(&i2(), "A").unwrap_err(),
            CurveError::NotMinusOneCurve { id: "A".into() }
        );
    }

    #[test]
    fn unsupported_point_type_is_rejected() {
        let mut c = CurveConfiguration::new();
        c.add_curve(CurveNode::irrational("A", 0));
        c.points.push(MarkedPoint::new("x", LocalType::Unsupported, &[("A", 2)]));
        assert_eq!(blow_up(&c, "x").unwrap_err(), CurveError::UnsupportedLocalType("x".into()));
    }

    #[test]
    fn round_trip_on_cycle() {
        let cyc = cycle(5);
        let mut marked = cyc.clone();
        // mark one of the cycle's nodes so it can be blown up
        marked.unmarked.insert(ordered("C0", "C1"), 0);
        marked.unmarked.retain(|_, v| *v > 0);
        marked.points.push(MarkedPoint::new("q", LocalType::Ordinary, &[("C0", 1), ("C1", 1)]));
        assert!(marked.validate().is_empty());
        let up = blow_up(&marked, "q").unwrap();
        let down = blow_down(&up.config, &up.exceptional).unwrap();
        let before = marked.table();
        let after = down.config.table();
        assert_eq!(before.ids, after.ids);
        assert_eq!(before.matrix, after.matrix);
    }

    #[test]
    fn excess_intersection_exhaustive() {
        // two curves through an ordinary point with multiplicities m1, m2
        for m1 in 1..=3u32 {
            for m2 in 1..=3u32 {
                let mut c = CurveConfiguration::new();
                let sing = |id: &str, m| {
                    if m == 1 {
                        CurveNode::rational(id, 5)
                    } else {
                        CurveNode::irrational(id, 5)
                    }
                };
                c.add_curve(sing("A", m1))
                    .add_curve(sing("B", m2))
                    .add_point(MarkedPoint::new("p", LocalType::Ordinary, &[("A", m1), ("B", m2)]))
                    .add_transversal("A", "B", 3);
                assert!(c.validate().is_empty());
                let up = blow_up(&c, "p").unwrap();
                let e = &up.exceptional;
                let o = &up.config;
                assert!(o.validate().is_empty(), "{m1} {m2}: {:?}", o.validate());
                assert_eq!(o.intersection("A", "B"), c.intersection("A", "B") - (m1 * m2) as i64);
                assert_eq!(o.intersection("A", e), m1 as i64);
                assert_eq!(o.intersection("B", e), m2 as i64);
                assert_eq!(o.intersection("A", "A"), 5 - (m1 * m1) as i64);
                let down = blow_down(o, e).unwrap();
                assert_eq!(down.config.table().matrix, c.table().matrix);
                assert!(down.config.validate().is_empty(), "{:?}", down.config.validate());
            }
        }
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(pullback_divisor(3, -2, 0, 0), Ok((3, -2)));
        assert_eq!(pullback_divisor(3, -2, 2, 1), Ok((2, -1)));
        assert_eq!(pullback_divisor(3, -2, 1, 0), Ok((2, -1)));
        assert_eq!(pullback_divisor(0, 0, 1, 2), Err(CurveError::BadEpsilon(2)));
    }

    #[test]
    fn pullback_increment_identity_all_cases() {
        for mu in 0..=3 {
            for eps in 0..=1 {
                for (dsq, dk, k2) in [(0, 0, 0), (-3, 5, -2), (7, -1, 1)] {
                    let (sq, dot) = pullback_divisor(dsq, dk, mu, eps).unwrap();
                    let below = inequality_value_raw(k2, dsq, dk);
                    let above = inequality_value_raw(k2 - 1, sq, dot);
                    assert_eq!(above, below + 4 + (mu - eps) * (eps - mu - 3), "mu={mu} eps={eps}");
                }
            }
        }
    }

    /// Arbitrary configuration with a (-1)-curve `E`, intersections in 0..=3,
    /// plus a divisor mask.
    fn config_with_exceptional() -> impl Strategy<Value = (CurveConfiguration, Vec<bool>)> {
        (1usize..=9).prop_flat_map(|n| {
            let k = n + 1;
            (
                proptest::collection::vec((-4i64..=2, any::<bool>()), n),
                proptest::collection::vec(0u32..=3, k * (k - 1) / 2),
                proptest::collection::vec(any::<bool>(), k),
            )
                .prop_map(move |(nodes, ints, mask)| {
                    let mut c = CurveConfiguration::new();
                    c.add_curve(CurveNode::rational("E", -1));
                    for (i, (s, smooth)) in nodes.iter().enumerate() {
                        let node = if *smooth { CurveNode::rational(format!("C{i}"), *s) } else { CurveNode::irrational(format!("C{i}"), *s) };
                        c.add_curve(node);
                    }
                    let ids: Vec<String> = c.ids().map(str::to_string).collect();
                    let mut t = 0;
                    for a in 0..k {
                        for b in (a + 1)..k {
                            c.add_transversal(&ids[a], &ids[b], ints[t]);
                            t += 1;
                        }
                    }
                    (c, mask)
                })
        })
    }

    proptest! {
        #[test]
        fn blow_down_preserves_property_p((cfg, mask) in config_with_exceptional()) {
            let d = ReducedDivisor::new(cfg.ids().zip(&mask).filter(|(_, &b)| b).map(|(id, _)| id.to_string()));
            if property_p(&cfg, &d).unwrap().holds {
                let down = blow_down(&cfg, "E").unwrap();
                prop_assert!(down.config.validate().is_empty());
                let pushed = down.push_divisor(&d);
                prop_assert!(property_p(&down.config, &pushed).unwrap().holds);
            }
        }

        #[test]
        fn blow_down_square_formula((cfg, mask) in config_with_exceptional()) {
            let d = ReducedDivisor::new(cfg.ids().zip(&mask).filter(|(_, &b)| b).map(|(id, _)| id.to_string()));
            let down = blow_down(&cfg, "E").unwrap();
            let pushed = down.push_divisor(&d);
            let eps = d.contains("E") as i64;
            let mu: i64 = pushed.iter().map(|c| cfg.intersection("E", c)).sum();
            let (sq, _) = pullback_divisor(down.config.divisor_square(&pushed), 0, mu, eps).unwrap();
            prop_assert_eq!(sq, cfg.divisor_square(&d));
            if let Some(p) = &down.image_point {
                prop_assert_eq!(point_multiplicity(&down.config, &pushed, p).unwrap() as i64, mu);
            }
        }
    }
}
