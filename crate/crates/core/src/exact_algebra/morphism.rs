//! Algebra morphisms given on generators, and bounded decisions of their validity.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::algebra::{evaluate, substitute, substitute_anti, FreeAlgebra};
use super::field::Scalar;
use super::groebner::GroebnerBasis;
use super::poly::NCPolynomial;
use super::presentation::Presentation;
use crate::error::{Error, Result};

/// Three-valued outcome of a bounded equality decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    /// Conjunction: any refutation wins, then any inconclusive result.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }

    pub fn all(it: impl IntoIterator<Item = Verdict>) -> Verdict {
        it.into_iter().fold(Verdict::Verified, Verdict::and)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A candidate algebra morphism (or anti-morphism) determined by generator images.
#[derive(Clone, Debug)]
pub struct GeneratorImageMap {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub images: Vec<NCPolynomial>,
    /// Extend anti-multiplicatively instead of multiplicatively.
    pub anti: bool,
    pub verified_to_degree: Option<usize>,
}

impl GeneratorImageMap {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, images: Vec<NCPolynomial>) -> Result<Self> {
        if images.len() != source.gen_count() {
            let missing = source.generators().get(images.len()).cloned().unwrap_or_default();
            return Err(Error::MissingAssignment(missing));
        }
        for img in &images {
            if img.field() != target.field() {
                return Err(Error::FieldMismatch(img.field().to_string(), target.field().to_string()));
            }
            if img.max_gen().is_some_and(|g| g as usize >= target.gen_count()) {
                return Err(Error::AlphabetMismatch);
            }
        }
        Ok(GeneratorImageMap { source, target, images, anti: false, verified_to_degree: None })
    }

    pub fn anti(mut self) -> Self {
        self.anti = true;
        self
    }

    pub fn identity(p: Arc<Presentation>) -> Self {
        let images = (0..p.gen_count() as u32).map(|g| p.var(g)).collect();
        GeneratorImageMap { source: p.clone(), target: p, images, anti: false, verified_to_degree: None }
    }

    /// Builds a map from `name -> image text` pairs; every source generator must be listed.
    pub fn from_named(source: Arc<Presentation>, target: Arc<Presentation>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut images = vec![None; source.gen_count()];
        for (name, text) in pairs {
            let g = source.gen_index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            images[g as usize] = Some(target.poly(text)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.ok_or_else(|| Error::MissingAssignment(source.generators()[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        GeneratorImageMap::new(source, target, images)
    }

    /// Image of a source polynomial.
    pub fn apply(&self, p: &NCPolynomial) -> Result<NCPolynomial> {
        let alg = FreeAlgebra(self.target.field());
        if self.anti {
            substitute_anti(p, &self.images, &alg)
        } else {
            substitute(p, &self.images, &alg)
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GeneratorImageMap) -> Result<GeneratorImageMap> {
        if *self.target != *other.source {
            return Err(Error::CompositionMismatch(format!("{} vs {}", self.target.name(), other.source.name())));
        }
        let images = self.images.iter().map(|img| other.apply(img)).collect::<Result<Vec<_>>>()?;
        Ok(GeneratorImageMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
            anti: self.anti != other.anti,
            verified_to_degree: None,
        })
    }

    pub fn mark_verified(&mut self, degree: usize) {
        self.verified_to_degree = Some(degree);
    }

    pub fn render(&self) -> Vec<String> {
        self.source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, img)| format!("{g} -> {}", self.target.render_poly(img)))
            .collect()
    }
}

/// Outcome of [`verify_morphism`] with the first offending relation, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub verdict: Verdict,
    pub witness: Option<(usize, NCPolynomial)>,
}

/// Checks that every source relation maps into the target ideal.
pub fn verify_morphism(m: &GeneratorImageMap, degree_bound: usize) -> Result<MorphismReport> {
    let mut oracle = EqualityOracle::new(m.target.clone(), degree_bound)?;
    let mut verdict = Verdict::Verified;
    let mut witness = None;
    for (i, r) in m.source.relations().iter().enumerate() {
        let img = m.apply(r)?;
        let v = oracle.decide(&img)?;
        if v != Verdict::Verified && witness.is_none() {
            witness = Some((i, oracle.residual(&img)));
        }
        verdict = verdict.and(v);
        if verdict == Verdict::Refuted {
            break;
        }
    }
    Ok(MorphismReport { verdict, witness })
}

/// Decides whether polynomials vanish in a presented algebra.
///
/// Zero reduction by any partial Gröbner basis is a proof of membership. A nonzero
/// residue is a refutation only when completion finished, or when some supplied
/// witness point (an assignment satisfying all relations) does not annihilate the input.
/// Completion starts at a low degree and is raised step by step up to the bound.
#[derive(Clone, Debug)]
pub struct EqualityOracle {
    pres: Arc<Presentation>,
    gb: Option<GroebnerBasis>,
    max_bound: usize,
    witnesses: Vec<Vec<Scalar>>,
}

impl EqualityOracle {
    pub fn new(pres: Arc<Presentation>, max_bound: usize) -> Result<Self> {
        let deg = pres.max_relation_degree();
        if max_bound < deg {
            return Err(Error::BoundTooSmall { bound: max_bound, degree: deg });
        }
        Ok(EqualityOracle { pres, gb: None, max_bound, witnesses: Vec::new() })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    /// Registers a point of the presentation; rejected unless it satisfies every relation.
    pub fn add_witness(&mut self, point: Vec<Scalar>) -> Result<()> {
        if point.len() != self.pres.gen_count() {
            return Err(Error::InvalidPoint(format!("expected {} coordinates", self.pres.gen_count())));
        }
        for r in self.pres.relations() {
            if !self.pres.field().is_zero(&evaluate(r, &point)?) {
                return Err(Error::InvalidPoint(format!("relation {} fails", self.pres.render_poly(r))));
            }
        }
        self.witnesses.push(point);
        Ok(())
    }

    fn start_bound(&self) -> usize {
        self.pres.max_relation_degree().max(2).min(self.max_bound)
    }

    fn basis(&mut self) -> &mut GroebnerBasis {
        if self.gb.is_none() {
            let b = self.start_bound();
            self.gb = Some(GroebnerBasis::compute(&self.pres, b).expect("bound checked at construction"));
        }
        self.gb.as_mut().unwrap()
    }

    /// Current reduction of `p` (not necessarily canonical).
    pub fn residual(&mut self, p: &NCPolynomial) -> NCPolynomial {
        self.basis().reduce(p)
    }

    pub fn is_complete(&mut self) -> bool {
        self.basis().is_complete()
    }

    pub fn decide(&mut self, p: &NCPolynomial) -> Result<Verdict> {
        if p.is_zero() {
            return Ok(Verdict::Verified);
        }
        if p.field() != self.pres.field() {
            return Err(Error::FieldMismatch(p.field().to_string(), self.pres.field().to_string()));
        }
        let mut witnessed = false;
        loop {
            let gb = self.basis();
            let r = gb.reduce(p);
            if r.is_zero() {
                return Ok(Verdict::Verified);
            }
            if gb.is_complete() {
                return Ok(Verdict::Refuted);
            }
            if !witnessed {
                witnessed = true;
                let f = self.pres.field();
                for w in &self.witnesses {
                    if !f.is_zero(&evaluate(p, w)?) {
                        return Ok(Verdict::Refuted);
                    }
                }
            }
            let max = self.max_bound;
            let gb = self.basis();
            if gb.bound() >= max {
                return Ok(Verdict::Inconclusive);
            }
            let next = gb.bound() + 1;
            gb.extend_to(next);
        }
    }

    pub fn decide_equal(&mut self, a: &NCPolynomial, b: &NCPolynomial) -> Result<Verdict> {
        self.decide(&a.sub(b))
    }
}
