//! Truncated graded polynomial rings over the rationals with rewrite rules.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::ChernError;
use crate::Rational;

/// Exponent vector over the generators of a ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// `generator^power = replacement`, where the replacement has strictly lower
/// degree in `generator` and no other rewritten generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub generator: usize,
    pub power: u32,
    pub replacement: Vec<(Monomial, Rational)>,
}

const REWRITE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    generators: Vec<Generator>,
    truncation: u32,
    relations: Vec<Relation>,
}

impl GradedRing {
    /// Classes of degree above `truncation` vanish.
    pub fn new(generators: &[(&str, u32)], truncation: u32, relations: Vec<Relation>) -> Result<Arc<Self>, ChernError> {
        let generators: Vec<Generator> =
            generators.iter().map(|(n, d)| Generator { name: n.to_string(), degree: *d }).collect();
        let ring = GradedRing { generators, truncation, relations };
        for r in &ring.relations {
            let g = ring.generators.get(r.generator).ok_or_else(|| ChernError::UnknownGenerator(r.generator.to_string()))?;
            let lhs_degree = g.degree * r.power;
            for (m, _) in &r.replacement {
                let wrong_shape = m.0.len() != ring.generators.len();
                let rewritten_again = ring.relations.iter().any(|o| {
                    let e = m.0.get(o.generator).copied().unwrap_or(0);
                    if o.generator == r.generator { e >= r.power } else { e > 0 }
                });
                if wrong_shape || rewritten_again || ring.degree(m) != lhs_degree {
                    return Err(ChernError::NormalFormFailure(format!("relation for {}^{} does not terminate", g.name, r.power)));
                }
            }
        }
        Ok(Arc::new(ring))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn index(&self, name: &str) -> Result<usize, ChernError> {
        self.generators.iter().position(|g| g.name == name).ok_or_else(|| ChernError::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.generators).map(|(e, g)| e * g.degree).sum()
    }

    fn normal_form_terms(&self, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> BTreeMap<Monomial, Rational> {
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut work: Vec<(Monomial, Rational)> = terms.into_iter().collect();
        let mut steps = 0;
        while let Some((m, c)) = work.pop() {
            steps += 1;
            // construction guarantees termination; the cap guards against
            // future edits to that check
            assert!(steps < REWRITE_CAP, "normal form did not terminate");
            if c.is_zero() || self.degree(&m) > self.truncation {
                continue;
            }
            match self.relations.iter().find(|r| m.0[r.generator] >= r.power) {
                Some(r) => {
                    let mut rest = m.clone();
                    rest.0[r.generator] -= r.power;
                    work.extend(r.replacement.iter().map(|(rm, rc)| (rest.times(rm), c * rc)));
                }
                None => {
                    let slot = out.entry(m).or_insert_with(Rational::zero);
                    *slot += c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Element of a [`GradedRing`], always kept in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Arc<GradedRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl RingElement {
    pub fn zero(ring: &Arc<GradedRing>) -> Self {
        RingElement { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<GradedRing>, c: Rational) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.generators.len()), c)])
    }

    pub fn one(ring: &Arc<GradedRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn generator(ring: &Arc<GradedRing>, name: &str) -> Result<Self, ChernError> {
        let i = ring.index(name)?;
        let mut m = Monomial::one(ring.generators.len());
        m.0[i] = 1;
        Ok(Self::from_terms(ring, [(m, Rational::one())]))
    }

    /// Builds and normalises an element from raw terms.
    pub fn from_terms(ring: &Arc<GradedRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        RingElement { ring: ring.clone(), terms: ring.normal_form_terms(terms) }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-applies the rewrite rules; a no-op on elements built through this
    /// API.
    pub fn normal_form(&self) -> Self {
        Self::from_terms(&self.ring, self.terms.clone())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).copied().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of a monomial given as `(name, exponent)` pairs.
    pub fn coefficient_of(&self, factors: &[(&str, u32)]) -> Result<Rational, ChernError> {
        let mut m = Monomial::one(self.ring.generators.len());
        for (name, e) in factors {
            m.0[self.ring.index(name)?] += e;
        }
        Ok(self.coefficient(&m))
    }

    /// Homogeneous part of degree `d`.
    pub fn part(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| self.ring.degree(m) == d).map(|(m, c)| (m.clone(), *c)).collect();
        RingElement { ring: self.ring.clone(), terms }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| self.ring.degree(m)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    /// `exp(x)` for `x` without constant term.
    pub fn exp(&self) -> Self {
        let mut term = Self::one(&self.ring);
        let mut sum = term.clone();
        for k in 1..=self.ring.truncation as i64 {
            term = (&term * self).scale(Rational::new(1, k));
            sum = &sum + &term;
        }
        sum
    }

    /// Same terms in another ring whose generators extend this one's by name.
    pub fn embed(&self, target: &Arc<GradedRing>) -> Result<Self, ChernError> {
        let map: Vec<usize> =
            self.ring.generators.iter().map(|g| target.index(&g.name)).collect::<Result<_, _>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut t = Monomial::one(target.generators.len());
            for (i, e) in m.0.iter().enumerate() {
                t.0[map[i]] += e;
            }
            (t, *c)
        });
        Ok(Self::from_terms(target, terms))
    }

    fn check_same(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring, "ring mismatch");
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.check_same(rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            *terms.entry(m.clone()).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        RingElement { ring: self.ring.clone(), terms }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.check_same(rhs);
        let terms = self
            .terms
            .iter()
            .flat_map(|(a, x)| rhs.terms.iter().map(move |(b, y)| (a.times(b), x * y)));
        RingElement::from_terms(&self.ring, terms)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RingElement {
            type Output = RingElement;
            fn $f(self, rhs: RingElement) -> RingElement { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first, then by generator order
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| self.ring.degree(b).cmp(&self.ring.degree(a)).then(b.cmp(a)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mono = monomial_string(&self.ring, m);
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

/// `c1^2*e2`, empty for the unit monomial.
pub fn monomial_string(ring: &GradedRing, m: &Monomial) -> String {
    m.0.iter()
        .zip(&ring.generators)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn toy() -> Arc<GradedRing> {
        // x^2 = a x - b over a base with a (deg 1), b (deg 2)
        let mono = |v: &[u32]| Monomial(v.to_vec());
        GradedRing::new(
            &[("a", 1), ("b", 2), ("x", 1)],
            3,
            vec![Relation {
                generator: 2,
                power: 2,
                replacement: vec![(mono(&[1, 0, 1]), r(1, 1)), (mono(&[0, 1, 0]), r(-1, 1))],
            }],
        )
        .unwrap()
    }

    #[test]
    fn rewriting() {
        let ring = toy();
        let x = RingElement::generator(&ring, "x").unwrap();
        let a = RingElement::generator(&ring, "a").unwrap();
        let b = RingElement::generator(&ring, "b").unwrap();
        assert_eq!(x.pow(2), &(&a * &x) - &b);
        // x^3 = a x^2 - b x = a(a x - b) - b x
        assert_eq!(x.pow(3), &(&(&a * &a) * &x) - &(&(&a * &b) + &(&b * &x)));
        assert!(x.pow(4).is_zero());
        assert_eq!(format!("{}", x.pow(2)), "a*x - b");
    }

    #[test]
    fn nonterminating_relation_rejected() {
        let err = GradedRing::new(
            &[("x", 1)],
            3,
            vec![Relation { generator: 0, power: 1, replacement: vec![(Monomial(vec![1]), r(1, 1))] }],
        );
        assert!(matches!(err, Err(ChernError::NormalFormFailure(_))));
    }

    #[test]
    fn exp_of_line_class() {
        let ring = toy();
        let a = RingElement::generator(&ring, "a").unwrap();
        let e = a.exp();
        for k in 0..=3u32 {
            let fact: i64 = (1..=k as i64).product();
            assert_eq!(e.coefficient_of(&[("a", k)]).unwrap(), r(1, fact));
        }
    }

    #[test]
    fn display() {
        let ring = toy();
        let a = RingElement::generator(&ring, "a").unwrap();
        let b = RingElement::generator(&ring, "b").unwrap();
        let e = &(&a * &a).scale(r(17, 12)) - &b.scale(r(7, 12));
        assert_eq!(e.to_string(), "17/12*a^2 - 7/12*b");
        assert_eq!(RingElement::zero(&ring).to_string(), "0");
        assert_eq!((-&RingElement::one(&ring)).to_string(), "-1");
    }

    fn arb_element(ring: Arc<GradedRing>) -> impl Strategy<Value = RingElement> {
        prop::collection::vec(((0u32..3, 0u32..2, 0u32..4), -20i64..20, 1i64..7), 0..8).prop_map(move |ts| {
            RingElement::from_terms(&ring, ts.into_iter().map(|((a, b, x), n, d)| (Monomial(vec![a, b, x]), r(n, d))))
        })
    }

    proptest! {
        #[test]
        fn normal_form_idempotent_and_linear(x in arb_element(toy()), y in arb_element(toy())) {
            prop_assert_eq!(x.normal_form(), x.clone());
            let ring = toy();
            let raw = x.terms().iter().chain(y.terms()).map(|(m, c)| (m.clone(), *c));
            prop_assert_eq!(RingElement::from_terms(&ring, raw), &x + &y);
        }

        #[test]
        fn multiplication_associative(x in arb_element(toy()), y in arb_element(toy()), z in arb_element(toy())) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }
}
