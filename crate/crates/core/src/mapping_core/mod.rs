//! The universal algebra of mappings `𝔄(B, C)`, its tower, functoriality and points.

pub mod functor;
pub mod points;
pub mod transport;

use std::collections::HashMap;
use std::sync::Arc;

use crate::basis_algebra::{BasisAlgebra, BasisElem, CoeffAlgebra, CoeffElem};
use crate::error::{Error, Result};
use crate::exact_algebra::presentation::dedup_relations;
use crate::exact_algebra::{substitute, Gen, NCPolynomial, Presentation, Verdict};
use crate::pro_tower::{Connecting, Tower};

pub use functor::{factor_family, factor_family_pro, induced_promorphism, scalar_family, BasisMap, BasisRule, Family};
pub use points::{
    enumerate_morphisms, enumerate_points, morphism_to_point, point_morphism_bijection, point_to_morphism,
    Correspondent, EnumOptions, DEFAULT_GUARD,
};
pub use transport::{transport_exponential, transport_product, ExponentialReport, ProductReport};

/// Input of the construction: `B`, `C`, and for each generator of `B` the finite basis
/// subset its image may use.
#[derive(Clone, Debug)]
pub struct MappingProblem {
    pub b: Arc<Presentation>,
    pub c: Arc<BasisAlgebra>,
    pub delta: Vec<Vec<BasisElem>>,
}

impl MappingProblem {
    pub fn new(b: Arc<Presentation>, c: Arc<BasisAlgebra>, delta: Vec<Vec<BasisElem>>) -> Result<Self> {
        if b.field() != c.field() {
            return Err(Error::FieldMismatch(b.field().to_string(), c.field().to_string()));
        }
        if delta.len() != b.gen_count() {
            return Err(Error::Invalid(format!("expected {} support sets, got {}", b.gen_count(), delta.len())));
        }
        for (g, d) in delta.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::Invalid(format!("empty support set for generator {}", b.gen_name(g as Gen))));
            }
            if let Some(e) = d.iter().find(|e| !c.contains(e)) {
                return Err(Error::UnknownBasisElement(format!("{:?}", e.0), c.name().to_string()));
            }
        }
        Ok(MappingProblem { b, c, delta })
    }

    /// Every generator uses the same subset `L` (sorted into basis order).
    pub fn uniform(b: Arc<Presentation>, c: Arc<BasisAlgebra>, l: &[BasisElem]) -> Result<Self> {
        let mut l = l.to_vec();
        c.sort_elems(&mut l);
        l.dedup();
        let delta = vec![l; b.gen_count()];
        MappingProblem::new(b, c, delta)
    }
}

/// `𝔄(B, C_L)` together with the universal family `h: B -> C ⊗ A`.
#[derive(Clone, Debug)]
pub struct MappingAlgebra {
    pub problem: MappingProblem,
    pub presentation: Arc<Presentation>,
    /// `h(b) = Σ_c c ⊗ x⟨b,c⟩` for every generator `b` of `B`.
    pub h: Vec<CoeffElem>,
    index: HashMap<(Gen, BasisElem), Gen>,
}

impl MappingAlgebra {
    /// The same generators under a presentation with more relations.
    pub fn with_presentation(&self, presentation: Arc<Presentation>) -> Self {
        MappingAlgebra { presentation, ..self.clone() }
    }

    /// Generator `x⟨b,c⟩` if `c` is in the support of `b`.
    pub fn generator(&self, b: Gen, c: &BasisElem) -> Option<Gen> {
        self.index.get(&(b, c.clone())).copied()
    }

    /// The pair `(b, c)` behind each generator, in generator order.
    pub fn generator_pairs(&self) -> Vec<(Gen, BasisElem)> {
        let mut out = Vec::with_capacity(self.presentation.gen_count());
        for (b, d) in self.problem.delta.iter().enumerate() {
            for c in d {
                out.push((b as Gen, c.clone()));
            }
        }
        out
    }

    /// Re-expands every relation of `B` under `h` and checks that each basis coefficient
    /// is, up to a scalar, one of the emitted relations (or zero).
    pub fn check_self_consistency(&self) -> Result<bool> {
        let emitted = expand_relations(&self.problem, &self.h)?;
        let have: std::collections::BTreeSet<_> = self.presentation.relations().iter().map(|r| r.monic()).collect();
        Ok(emitted.iter().all(|r| have.contains(&r.monic())))
    }
}

/// Generator name `b[label]`.
pub fn generator_name(b: &str, label: &str) -> String {
    format!("{b}[{label}]")
}

fn expand_relations(problem: &MappingProblem, h: &[CoeffElem]) -> Result<Vec<NCPolynomial>> {
    let c = &problem.c;
    let alg = CoeffAlgebra { c };
    let mut out = Vec::new();
    for r in problem.b.relations() {
        let e = substitute(r, h, &alg)?;
        let mut keys: Vec<&BasisElem> = e.0.keys().collect();
        keys.sort_by(|a, b| c.cmp_elems(a, b));
        for k in keys {
            out.push(e.0[k].clone());
        }
    }
    Ok(out)
}

/// Builds `𝔄(B, C_δ)`: generators `x⟨b,c⟩` in generator-major, basis-minor order and one
/// relation per nonzero basis coefficient of each `h(r)`.
pub fn build_mapping_algebra(problem: &MappingProblem) -> Result<MappingAlgebra> {
    build_named(problem, format!("A_{}_{}", problem.b.name(), problem.c.name()))
}

fn build_named(problem: &MappingProblem, name: String) -> Result<MappingAlgebra> {
    let f = problem.b.field();
    let mut names = Vec::new();
    let mut index = HashMap::new();
    let mut h = Vec::with_capacity(problem.b.gen_count());
    for (b, d) in problem.delta.iter().enumerate() {
        let mut hb = CoeffElem::zero();
        for c in d {
            let g = names.len() as Gen;
            names.push(generator_name(problem.b.gen_name(b as Gen), &problem.c.label(c)));
            index.insert((b as Gen, c.clone()), g);
            hb.add_term(c.clone(), &NCPolynomial::var(f, g));
        }
        h.push(hb);
    }
    let relations = dedup_relations(expand_relations(problem, &h)?);
    let presentation = Arc::new(Presentation::new(name, f, names, relations)?);
    Ok(MappingAlgebra { problem: problem.clone(), presentation, h, index })
}

/// Adds all generator commutators (deduplicated), i.e. passes to the commutative quotient.
pub fn commutativize(p: &Presentation) -> Presentation {
    let n = p.gen_count() as Gen;
    let comms = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| p.commutator(i, j));
    p.with_relations(comms.collect::<Vec<_>>()).expect("same alphabet")
}

/// The tower `p ↦ 𝔄(B, C_{L_p})` with truncation as connecting maps.
#[derive(Clone, Debug)]
pub struct MappingTower {
    pub b: Arc<Presentation>,
    pub c: Arc<BasisAlgebra>,
    pub levels: Vec<MappingAlgebra>,
    pub tower: Arc<Tower>,
}

impl MappingTower {
    pub fn level(&self, p: usize) -> Result<&MappingAlgebra> {
        if self.tower.is_stable() {
            return Ok(&self.levels[0]);
        }
        self.levels.get(p).ok_or(Error::LevelUnavailable(p, self.levels.len() - 1))
    }

    pub fn max_level(&self) -> Option<usize> {
        self.tower.max_level()
    }

    /// Smallest level whose basis subset contains all of `support`.
    pub fn level_for(&self, support: impl IntoIterator<Item = BasisElem>) -> usize {
        if self.tower.is_stable() {
            return 0;
        }
        support.into_iter().map(|e| self.c.degree(&e)).max().unwrap_or(0)
    }

    /// Checks `(id ⊗ connecting(p, p')) ∘ h_{p'} = h_p` exactly on generators.
    pub fn check_h_compatibility(&self, max: usize) -> Result<Verdict> {
        let top = self.max_level().map_or(0, |m| m.min(max));
        for p in 0..=top {
            for q in p..=top {
                let conn = self.tower.connecting(p, q)?;
                let (hp, hq) = (&self.level(p)?.h, &self.level(q)?.h);
                for (a, b) in hp.iter().zip(hq) {
                    let mut pushed = CoeffElem::zero();
                    for (c, poly) in &b.0 {
                        pushed.add_term(c.clone(), &conn.apply(poly)?);
                    }
                    if pushed != *a {
                        return Ok(Verdict::Refuted);
                    }
                }
            }
        }
        Ok(Verdict::Verified)
    }

    /// Levelwise commutative quotient with the same connecting maps.
    pub fn commutativized(&self) -> Result<MappingTower> {
        let levels: Vec<MappingAlgebra> = self
            .levels
            .iter()
            .map(|m| MappingAlgebra { presentation: Arc::new(commutativize(&m.presentation)), ..m.clone() })
            .collect();
        let pres = levels.iter().map(|m| m.presentation.clone()).collect();
        let tower = if self.tower.is_stable() {
            Tower::stable(format!("c{}", self.tower.name), levels[0].presentation.clone())
        } else {
            Tower::new(format!("c{}", self.tower.name), pres, Connecting::Truncate)?
        };
        Ok(MappingTower { b: self.b.clone(), c: self.c.clone(), levels, tower: Arc::new(tower) })
    }
}

/// Builds levels `0..=max_level` (a single stable level when `C` is finite dimensional).
pub fn build_mapping_tower(b: Arc<Presentation>, c: Arc<BasisAlgebra>, max_level: usize) -> Result<MappingTower> {
    let chain = c.level_chain()?;
    let base = format!("A_{}_{}", b.name(), c.name());
    if chain.is_stable() {
        let prob = MappingProblem::uniform(b.clone(), c.clone(), &chain.level(0))?;
        let m = build_named(&prob, base.clone())?;
        let tower = Tower::stable(base, m.presentation.clone());
        return Ok(MappingTower { b, c, levels: vec![m], tower: Arc::new(tower) });
    }
    let mut levels = Vec::with_capacity(max_level + 1);
    for p in 0..=max_level {
        let prob = MappingProblem::uniform(b.clone(), c.clone(), &chain.level(p))?;
        levels.push(build_named(&prob, format!("{base}_{p}"))?);
    }
    let pres = levels.iter().map(|m| m.presentation.clone()).collect();
    let tower = Tower::new(base, pres, Connecting::Truncate)?;
    Ok(MappingTower { b, c, levels, tower: Arc::new(tower) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::FieldSpec;

    fn rendered(p: &Presentation) -> Vec<String> {
        p.relations().iter().map(|r| p.render_poly(r)).collect()
    }

    #[test]
    fn idempotent_into_k2() {
        let f = FieldSpec::Rationals;
        let b = Arc::new(Presentation::parse("B", f, "b", &["b*b - b"]).unwrap());
        let c = Arc::new(BasisAlgebra::diagonal("K2", f, 2));
        let l = c.basis().unwrap();
        let m = build_mapping_algebra(&MappingProblem::uniform(b, c, &l).unwrap()).unwrap();
        assert_eq!(m.presentation.generators(), &["b[e1]".to_string(), "b[e2]".to_string()]);
        assert_eq!(rendered(&m.presentation), vec!["b[e1]*b[e1] - b[e1]", "b[e2]*b[e2] - b[e2]"]);
        assert!(m.check_self_consistency().unwrap());
    }

    #[test]
    fn free_generator_gives_free_algebra() {
        let f = FieldSpec::Prime(3);
        let b = Arc::new(Presentation::free("X", f, &["x"]));
        let c = Arc::new(BasisAlgebra::polynomial("P", f, &["y"]));
        let l = c.level_chain().unwrap().level(3);
        let m = build_mapping_algebra(&MappingProblem::uniform(b, c, &l).unwrap()).unwrap();
        assert_eq!(m.presentation.gen_count(), 4);
        assert!(m.presentation.relations().is_empty());
    }

    #[test]
    fn gl1_level_one() {
        let f = FieldSpec::Rationals;
        let b = Arc::new(Presentation::parse("GL1", f, "t,s", &["t*s - 1", "s*t - 1"]).unwrap());
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(b, c, 2).unwrap();
        let p = &t.level(1).unwrap().presentation;
        assert_eq!(p.generators(), &["t[1]", "t[x]", "s[1]", "s[x]"].map(String::from));
        assert_eq!(
            rendered(p),
            vec![
                "t[1]*s[1] - 1",
                "t[x]*s[1] + t[1]*s[x]",
                "t[x]*s[x]",
                "s[1]*t[1] - 1",
                "s[x]*t[1] + s[1]*t[x]",
                "s[x]*t[x]"
            ]
        );
        let conn = t.tower.connecting(1, 2).unwrap();
        let lines = conn.render();
        assert_eq!(lines[2], "t[x^2] -> 0");
        assert_eq!(lines[1], "t[x] -> t[x]");
        assert_eq!(t.tower.check_coherence(2, 8).unwrap(), Verdict::Verified);
        assert_eq!(t.check_h_compatibility(2).unwrap(), Verdict::Verified);
        let c1 = commutativize(p);
        assert_eq!(c1.relations().len(), 6 + 6);
        assert!(c1.is_commutative());
        assert_eq!(commutativize(&c1).relations().len(), 12);
    }

    #[test]
    fn finite_coefficients_give_stable_tower() {
        let f = FieldSpec::Prime(2);
        let b = Arc::new(Presentation::parse("B", f, "b", &["b*b - b"]).unwrap());
        let c = Arc::new(BasisAlgebra::diagonal("K2", f, 2));
        let t = build_mapping_tower(b, c, 3).unwrap();
        assert!(t.tower.is_stable());
        assert_eq!(t.tower.level(0).unwrap(), t.tower.level(7).unwrap());
        let p = &t.levels[0].presentation;
        let identity: Vec<NCPolynomial> = (0..p.gen_count() as Gen).map(|g| p.var(g)).collect();
        assert_eq!(t.tower.connecting(0, 3).unwrap().images, identity);
    }
}
