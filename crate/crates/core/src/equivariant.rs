//! Comodules over basis Hopf algebras and the universal algebra of equivariant mappings.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basis_algebra::hopf::BasisComb2;
use crate::basis_algebra::{BasisAlgebra, BasisComb, BasisElem, BasisHopfAlgebra, BasisKind, CoeffAlgebra, CoeffElem};
use crate::error::{Error, Result};
use crate::exact_algebra::{substitute, EqualityOracle, Lin, NCPolynomial, Presentation, Verdict};
use crate::mapping_core::{
    build_mapping_algebra, enumerate_morphisms, EnumOptions, MappingAlgebra, MappingProblem, MappingTower,
};
use crate::pro_tower::{Connecting, Tower};

/// How `ρ` is given on the basis of `V`.
#[derive(Clone, Debug, PartialEq)]
pub enum Coaction {
    /// `ρ(v)` for every basis element.
    Table(BTreeMap<BasisElem, BasisComb2>),
    /// Polynomial `V` graded by group elements: `ρ(x^I) = x^I ⊗ Π g_j^{I_j}`.
    Grading(Vec<u32>),
    /// `ρ(v) = v ⊗ 1`.
    Trivial,
}

/// An algebra with a basis and a coaction `ρ: V -> V ⊗ H`.
#[derive(Clone, Debug)]
pub struct BasisComodule {
    pub v: Arc<BasisAlgebra>,
    pub h: Arc<BasisHopfAlgebra>,
    pub coaction: Coaction,
}

impl BasisComodule {
    /// `H` coacting on itself by `Δ`.
    pub fn regular(h: Arc<BasisHopfAlgebra>) -> Result<Self> {
        let v = Arc::new(h.algebra().clone());
        let table = v.basis()?.into_iter().map(|e| (e.clone(), h.comul(&e))).collect();
        Ok(BasisComodule { v, h, coaction: Coaction::Table(table) })
    }

    pub fn rho(&self, e: &BasisElem) -> Result<BasisComb2> {
        let f = self.v.field();
        let hopf = &self.h;
        match &self.coaction {
            Coaction::Table(t) => {
                t.get(e).cloned().ok_or_else(|| Error::Invalid(format!("no coaction given on {}", self.v.label(e))))
            }
            Coaction::Trivial => Ok(Lin::basis(f, (e.clone(), hopf.algebra().unit_elem().expect("group algebra")))),
            Coaction::Grading(g) => {
                if !matches!(self.v.kind(), BasisKind::Monomial { .. }) || g.len() != e.0.len() {
                    return Err(Error::Invalid("a grading needs one group element per variable".into()));
                }
                let grp = hopf.group();
                let mut d = 0u32;
                for (gj, &k) in g.iter().zip(&e.0) {
                    for _ in 0..k {
                        d = grp.mul(d, *gj);
                    }
                }
                Ok(Lin::basis(f, (e.clone(), BasisElem(vec![d]))))
            }
        }
    }

    /// `ρ` on a combination.
    pub fn rho_comb(&self, c: &BasisComb) -> Result<BasisComb2> {
        let mut out = Lin::zero(self.v.field());
        for (e, k) in c.iter() {
            out.add_scaled(&self.rho(e)?, k);
        }
        Ok(out)
    }

    /// Coassociativity, counit and multiplicativity of `ρ` on the given basis elements.
    pub fn validate(&self, elems: &[BasisElem]) -> Result<()> {
        let f = self.v.field();
        let fail = |law: &str, at: String| Err(Error::LawViolated { law: law.into(), witness: at });
        for e in elems {
            let r = self.rho(e)?;
            let mut left: Lin<(BasisElem, BasisElem, BasisElem)> = Lin::zero(f);
            let mut right = Lin::zero(f);
            let mut counit = Lin::zero(f);
            for ((v, g), k) in r.iter() {
                for ((v2, g2), k2) in self.rho(v)?.iter() {
                    left.add_term((v2.clone(), g2.clone(), g.clone()), f.mul(k, k2));
                }
                for ((g1, g2), k2) in self.h.comul(g).iter() {
                    right.add_term((v.clone(), g1.clone(), g2.clone()), f.mul(k, k2));
                }
                counit.add_term(v.clone(), f.mul(k, &self.h.counit(g)));
            }
            if left != right {
                return fail("comodule coassociativity", self.v.label(e));
            }
            if counit != Lin::basis(f, e.clone()) {
                return fail("comodule counit", self.v.label(e));
            }
        }
        let hal = self.h.algebra();
        let one = hal.unit_elem().expect("group algebra");
        let mut unit = Lin::zero(f);
        for (e, k) in self.v.unit().iter() {
            unit.add_term((e.clone(), one.clone()), k.clone());
        }
        if self.rho_comb(&self.v.unit())? != unit {
            return fail("coaction is unital", "1".into());
        }
        for a in elems {
            for b in elems {
                let lhs = self.rho_comb(&self.v.mul_basis(a, b)?)?;
                let mut rhs = Lin::zero(f);
                for ((v1, g1), k1) in self.rho(a)?.iter() {
                    for ((v2, g2), k2) in self.rho(b)?.iter() {
                        let vv = self.v.mul_basis(v1, v2)?;
                        let gg = hal.mul_basis(g1, g2)?;
                        for (v, s) in vv.iter() {
                            for (g, t) in gg.iter() {
                                rhs.add_term((v.clone(), g.clone()), f.mul(&f.mul(k1, k2), &f.mul(s, t)));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return fail("coaction is multiplicative", format!("({}, {})", self.v.label(a), self.v.label(b)));
                }
            }
        }
        Ok(())
    }
}

/// A presented algebra with `ϱ(w) = Σ P_i ⊗ η_i` on generators.
#[derive(Clone, Debug)]
pub struct PresentedComodule {
    pub w: Arc<Presentation>,
    pub h: Arc<BasisHopfAlgebra>,
    pub coaction: Vec<Vec<(NCPolynomial, BasisElem)>>,
}

impl PresentedComodule {
    /// `ϱ(w) = w ⊗ 1` on every generator.
    pub fn trivial(w: Arc<Presentation>, h: Arc<BasisHopfAlgebra>) -> Self {
        let one = h.algebra().unit_elem().expect("group algebra");
        let coaction = (0..w.gen_count() as u32).map(|g| vec![(w.var(g), one.clone())]).collect();
        PresentedComodule { w, h, coaction }
    }

    /// `ϱ(w)` as an element of `H ⊗ Free(W)`.
    fn image(&self, g: usize) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (p, e) in &self.coaction[g] {
            out.add_term(e.clone(), p);
        }
        out
    }

    /// Checks at `bound` that `ϱ` respects the relations of `W` and satisfies the
    /// coassociativity and counit laws on generators.
    pub fn validate(&self, bound: usize) -> Result<Verdict> {
        let hal = self.h.algebra();
        let f = self.w.field();
        let alg = CoeffAlgebra { c: hal };
        let images: Vec<CoeffElem> = (0..self.w.gen_count()).map(|g| self.image(g)).collect();
        let mut oracle = EqualityOracle::new(self.w.clone(), bound)?;
        let mut verdict = Verdict::Verified;
        for r in self.w.relations() {
            for p in substitute(r, &images, &alg)?.0.values() {
                verdict = verdict.and(oracle.decide(p)?);
            }
        }
        for g in 0..self.w.gen_count() {
            let mut left: BTreeMap<(BasisElem, BasisElem), NCPolynomial> = BTreeMap::new();
            let mut right: BTreeMap<(BasisElem, BasisElem), NCPolynomial> = BTreeMap::new();
            let mut counit = NCPolynomial::zero(f);
            for (p, eta) in &self.coaction[g] {
                for (e, q) in substitute(p, &images, &alg)?.0 {
                    let slot = left.entry((e, eta.clone())).or_insert_with(|| NCPolynomial::zero(f));
                    *slot = slot.add(&q);
                }
                for ((a, b), k) in self.h.comul(eta).iter() {
                    let slot = right.entry((a.clone(), b.clone())).or_insert_with(|| NCPolynomial::zero(f));
                    *slot = slot.add(&p.scale(k));
                }
                counit = counit.add(&p.scale(&self.h.counit(eta)));
            }
            let keys: std::collections::BTreeSet<_> = left.keys().chain(right.keys()).cloned().collect();
            for k in keys {
                let zero = NCPolynomial::zero(f);
                verdict =
                    verdict.and(oracle.decide_equal(left.get(&k).unwrap_or(&zero), right.get(&k).unwrap_or(&zero))?);
            }
            verdict = verdict.and(oracle.decide_equal(&counit, &self.w.var(g as u32))?);
        }
        Ok(verdict)
    }
}

/// Coefficient differences of `(id ⊗ F)(ρ ⊗ id)h(w)` and `(h ⊗ id)ϱ(w)` over `basis(V) × basis(H)`.
fn family_condition(w: &PresentedComodule, v: &BasisComodule, h: &[CoeffElem]) -> Result<Vec<NCPolynomial>> {
    let f = v.v.field();
    let alg = CoeffAlgebra { c: &v.v };
    let mut out = Vec::new();
    for (g, hw) in h.iter().enumerate() {
        let mut diff: BTreeMap<(BasisElem, BasisElem), NCPolynomial> = BTreeMap::new();
        for (c, x) in &hw.0 {
            for ((vv, eta), k) in v.rho(c)?.iter() {
                let slot = diff.entry((vv.clone(), eta.clone())).or_insert_with(|| NCPolynomial::zero(f));
                *slot = slot.add(&x.scale(k));
            }
        }
        for (p, eta) in &w.coaction[g] {
            for (vv, q) in substitute(p, h, &alg)?.0 {
                let slot = diff.entry((vv, eta.clone())).or_insert_with(|| NCPolynomial::zero(f));
                *slot = slot.sub(&q);
            }
        }
        let mut keys: Vec<_> = diff.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        keys.sort_by(|a, b| v.v.cmp_elems(&a.0 .0, &b.0 .0).then_with(|| a.0 .1.cmp(&b.0 .1)));
        out.extend(keys.into_iter().map(|(_, p)| p.monic()));
    }
    Ok(out)
}

fn check_pair(w: &PresentedComodule, v: &BasisComodule) -> Result<()> {
    if w.h.algebra() != v.h.algebra() {
        return Err(Error::Invalid("the comodules are over different Hopf algebras".into()));
    }
    Ok(())
}

/// `𝔄†(W, V_L)`: `𝔄(W, V_L)` plus the coefficient differences of the family condition.
pub fn build_equivariant_algebra(w: &PresentedComodule, v: &BasisComodule, l: &[BasisElem]) -> Result<MappingAlgebra> {
    check_pair(w, v)?;
    let base = build_mapping_algebra(&MappingProblem::uniform(w.w.clone(), v.v.clone(), l)?)?;
    equivariant_from(w, v, base)
}

fn equivariant_from(w: &PresentedComodule, v: &BasisComodule, base: MappingAlgebra) -> Result<MappingAlgebra> {
    let extra = family_condition(w, v, &base.h)?;
    let pres = base.presentation.with_relations(extra)?;
    Ok(base.with_presentation(Arc::new(pres)))
}

/// Levelwise `𝔄†` over the level chain of `V`, with the truncation connecting maps.
pub fn build_equivariant_tower(w: &PresentedComodule, v: &BasisComodule, max_level: usize) -> Result<MappingTower> {
    check_pair(w, v)?;
    let base = crate::mapping_core::build_mapping_tower(w.w.clone(), v.v.clone(), max_level)?;
    let levels =
        base.levels.iter().map(|m| equivariant_from(w, v, m.clone())).collect::<Result<Vec<MappingAlgebra>>>()?;
    let pres: Vec<_> = levels.iter().map(|m| m.presentation.clone()).collect();
    let name = format!("Ad_{}_{}", w.w.name(), v.v.name());
    let tower = if base.tower.is_stable() {
        Tower::stable(name, pres[0].clone())
    } else {
        Tower::new(name, pres, Connecting::Truncate)?
    };
    Ok(MappingTower { levels, tower: Arc::new(tower), ..base })
}

/// Whether a scalar morphism `W -> V` satisfies `ρ ∘ φ = (φ ⊗ id) ∘ ϱ` on generators.
pub fn is_equivariant(w: &PresentedComodule, v: &BasisComodule, images: &[BasisComb]) -> Result<bool> {
    let f = v.v.field();
    for (g, img) in images.iter().enumerate() {
        let lhs = v.rho_comb(img)?;
        let mut rhs: BasisComb2 = Lin::zero(f);
        for (p, eta) in &w.coaction[g] {
            let val = substitute(p, images, v.v.as_ref())?;
            for (e, k) in val.iter() {
                rhs.add_term((e.clone(), eta.clone()), k.clone());
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Morphisms `W -> V` supported on `L`, filtered by the comodule condition.
pub fn enumerate_equivariant_morphisms(
    w: &PresentedComodule,
    v: &BasisComodule,
    l: &[BasisElem],
    opts: &EnumOptions,
) -> Result<Vec<Vec<BasisComb>>> {
    check_pair(w, v)?;
    let all = enumerate_morphisms(&w.w, &v.v, l, opts)?;
    let mut out = Vec::new();
    for m in all {
        if is_equivariant(w, v, &m)? {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis_algebra::FiniteGroup;
    use crate::exact_algebra::FieldSpec;
    use crate::mapping_core::{enumerate_points, point_to_morphism};

    fn z2(f: FieldSpec) -> Arc<BasisHopfAlgebra> {
        Arc::new(BasisHopfAlgebra::group_algebra("H", f, FiniteGroup::cyclic(2).unwrap()))
    }

    fn involution(h: &Arc<BasisHopfAlgebra>) -> PresentedComodule {
        let w = Arc::new(Presentation::parse("W", h.field(), "w", &["w*w - 1"]).unwrap());
        let u = h.algebra().parse_label("u1").unwrap();
        PresentedComodule { coaction: vec![vec![(w.var(0), u)]], w, h: h.clone() }
    }

    #[test]
    fn z2_graded_involutions_over_f3() {
        let f = FieldSpec::Prime(3);
        let h = z2(f);
        let v = BasisComodule::regular(h.clone()).unwrap();
        v.validate(&v.v.basis().unwrap()).unwrap();
        let w = involution(&h);
        assert_eq!(w.validate(8).unwrap(), Verdict::Verified);
        let l = v.v.basis().unwrap();
        let a = build_equivariant_algebra(&w, &v, &l).unwrap();
        let rels: Vec<String> = a.presentation.relations().iter().map(|r| a.presentation.render_poly(r)).collect();
        assert!(rels.contains(&"w[u0]".to_string()), "{rels:?}");
        let opts = EnumOptions::default();
        let pts = enumerate_points(&a.presentation, &opts).unwrap();
        assert_eq!(pts.len(), 2);
        let mut from_points: Vec<_> = pts.iter().map(|p| point_to_morphism(&a, p).unwrap()).collect();
        let mut filtered = enumerate_equivariant_morphisms(&w, &v, &l, &opts).unwrap();
        from_points.sort();
        filtered.sort();
        assert_eq!(from_points, filtered);
        assert_eq!(enumerate_morphisms(&w.w, &v.v, &l, &opts).unwrap().len(), 4);
    }

    #[test]
    fn free_generator_keeps_degree() {
        let f = FieldSpec::Prime(3);
        let h = z2(f);
        let v = BasisComodule::regular(h.clone()).unwrap();
        let w = Arc::new(Presentation::free("W", f, &["w"]));
        let u = h.algebra().parse_label("u1").unwrap();
        let w = PresentedComodule { coaction: vec![vec![(w.var(0), u)]], w, h };
        let l = v.v.basis().unwrap();
        let opts = EnumOptions::default();
        assert_eq!(enumerate_equivariant_morphisms(&w, &v, &l, &opts).unwrap().len(), 3);
        assert_eq!(enumerate_morphisms(&w.w, &v.v, &l, &opts).unwrap().len(), 9);
        let a = build_equivariant_algebra(&w, &v, &l).unwrap();
        assert_eq!(enumerate_points(&a.presentation, &opts).unwrap().len(), 3);
    }

    #[test]
    fn trivial_coactions_add_nothing() {
        let f = FieldSpec::Prime(3);
        let h = z2(f);
        let v = BasisComodule {
            v: Arc::new(BasisAlgebra::diagonal("K2", f, 2)),
            h: h.clone(),
            coaction: Coaction::Trivial,
        };
        let w = PresentedComodule::trivial(Arc::new(Presentation::parse("W", f, "w", &["w*w - 1"]).unwrap()), h);
        let l = v.v.basis().unwrap();
        let plain = build_mapping_algebra(&MappingProblem::uniform(w.w.clone(), v.v.clone(), &l).unwrap()).unwrap();
        let dag = build_equivariant_algebra(&w, &v, &l).unwrap();
        assert_eq!(*plain.presentation, *dag.presentation);
    }

    #[test]
    fn graded_polynomial_tower() {
        let f = FieldSpec::Prime(3);
        let h = z2(f);
        let v = BasisComodule {
            v: Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"])),
            h: h.clone(),
            coaction: Coaction::Grading(vec![1]),
        };
        v.validate(&v.v.level_chain().unwrap().level(3)).unwrap();
        let w = PresentedComodule::trivial(Arc::new(Presentation::free("W", f, &["w"])), h);
        let t = build_equivariant_tower(&w, &v, 3).unwrap();
        let rels: Vec<String> =
            t.levels[3].presentation.relations().iter().map(|r| t.levels[3].presentation.render_poly(r)).collect();
        assert_eq!(rels, vec!["w[x]", "w[x^3]"]);
        assert_eq!(t.tower.check_coherence(3, 8).unwrap(), Verdict::Verified);
    }
}
