//! Universal property and functoriality of the mapping tower.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basis_algebra::{BasisAlgebra, BasisComb, BasisElem, BasisKind, CoeffAlgebra, CoeffElem};
use crate::error::{Error, Result};
use crate::exact_algebra::{substitute, GeneratorImageMap, Lin, NCPolynomial, Presentation};
use crate::pro_tower::{ProMorphism, Tower};

use super::MappingTower;

/// A family `e: B -> C ⊗ E` given by the images `e(b) = Σ_c c ⊗ e⟨b,c⟩` of the generators of `B`.
#[derive(Clone, Debug)]
pub struct Family {
    pub target: Arc<Presentation>,
    pub images: Vec<CoeffElem>,
}

impl Family {
    /// Basis elements of `C` used by some image.
    pub fn support(&self) -> Vec<BasisElem> {
        let mut out: Vec<BasisElem> = self.images.iter().flat_map(|e| e.0.keys().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn needed_level(tower: &MappingTower, family: &Family) -> Result<usize> {
    if family.images.len() != tower.b.gen_count() {
        return Err(Error::Invalid(format!(
            "family has {} images, {} has {} generators",
            family.images.len(),
            tower.b.name(),
            tower.b.gen_count()
        )));
    }
    let support = family.support();
    if let Some(e) = support.iter().find(|e| !tower.c.contains(e)) {
        return Err(Error::UnknownBasisElement(format!("{:?}", e.0), tower.c.name().to_string()));
    }
    let need = tower.level_for(support);
    match tower.max_level() {
        Some(max) if need > max => Err(Error::SupportOverflow(need, max)),
        _ => Ok(need),
    }
}

/// The map `A_p -> E`, `x⟨b,c⟩ ↦ e⟨b,c⟩`, through which the family factors.
pub fn factor_family(tower: &MappingTower, family: &Family, level: usize) -> Result<GeneratorImageMap> {
    let need = needed_level(tower, family)?;
    if need > level {
        return Err(Error::SupportOverflow(need, level));
    }
    let ma = tower.level(level)?;
    let f = family.target.field();
    let images = ma.generator_pairs().into_iter().map(|(b, c)| family.images[b as usize].coefficient(&c, f)).collect();
    GeneratorImageMap::new(ma.presentation.clone(), family.target.clone(), images)
}

/// The factorization as a pro-morphism into the constant tower on `E`, with one member
/// for each requested level that contains the support.
pub fn factor_family_pro(tower: &MappingTower, family: &Family, levels: &[usize]) -> Result<ProMorphism> {
    let need = needed_level(tower, family)?;
    let target = Arc::new(Tower::stable(family.target.name().to_string(), family.target.clone()));
    let mut out = ProMorphism::new(tower.tower.clone(), target);
    let mut levels: Vec<usize> = levels.iter().copied().filter(|&p| p >= need).collect();
    if tower.tower.is_stable() {
        levels = vec![0];
    }
    if levels.is_empty() {
        return Err(Error::SupportOverflow(need, 0));
    }
    for p in levels {
        out.push(p, 0, factor_family(tower, family, p)?)?;
    }
    Ok(out)
}

/// How a [`BasisMap`] is specified.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisRule {
    /// Image of every basis element that is needed.
    Table(BTreeMap<BasisElem, BasisComb>),
    /// Images of the variables of a polynomial algebra, extended multiplicatively.
    Variables(Vec<BasisComb>),
}

/// A linear map between basis algebras, meant to be an algebra morphism.
#[derive(Clone, Debug)]
pub struct BasisMap {
    pub source: Arc<BasisAlgebra>,
    pub target: Arc<BasisAlgebra>,
    pub rule: BasisRule,
}

impl BasisMap {
    pub fn identity(c: Arc<BasisAlgebra>) -> Self {
        let rule = match c.kind() {
            BasisKind::Monomial { vars } => BasisRule::Variables(
                (0..vars.len())
                    .map(|i| {
                        let mut e = vec![0u32; vars.len()];
                        e[i] = 1;
                        Lin::basis(c.field(), BasisElem(e))
                    })
                    .collect(),
            ),
            _ => BasisRule::Table(
                c.basis().unwrap_or_default().into_iter().map(|e| (e.clone(), Lin::basis(c.field(), e))).collect(),
            ),
        };
        BasisMap { source: c.clone(), target: c, rule }
    }

    pub fn apply_basis(&self, e: &BasisElem) -> Result<BasisComb> {
        match &self.rule {
            BasisRule::Table(t) => {
                t.get(e).cloned().ok_or_else(|| Error::Invalid(format!("no image given for {}", self.source.label(e))))
            }
            BasisRule::Variables(v) => {
                if !matches!(self.source.kind(), BasisKind::Monomial { .. }) || v.len() != e.0.len() {
                    return Err(Error::Invalid("variable images need a polynomial source".into()));
                }
                let mut out = self.target.unit();
                for (img, &k) in v.iter().zip(&e.0) {
                    for _ in 0..k {
                        out = self.target.expand_product(&out, img)?;
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn apply(&self, c: &BasisComb) -> Result<BasisComb> {
        let mut out = Lin::zero(self.target.field());
        for (e, k) in c.iter() {
            out.add_scaled(&self.apply_basis(e)?, k);
        }
        Ok(out)
    }

    /// `(f ⊗ id)(Σ c ⊗ P_c) = Σ f(c) ⊗ P_c`.
    pub fn apply_coeff(&self, x: &CoeffElem) -> Result<CoeffElem> {
        let mut out = CoeffElem::zero();
        for (c, p) in &x.0 {
            for (d, k) in self.apply_basis(c)?.iter() {
                out.add_term(d.clone(), &p.scale(k));
            }
        }
        Ok(out)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BasisMap) -> Result<BasisMap> {
        if *self.target != *other.source {
            return Err(Error::CompositionMismatch(format!("{} vs {}", self.target.name(), other.source.name())));
        }
        let rule = match &self.rule {
            BasisRule::Table(t) => {
                BasisRule::Table(t.iter().map(|(e, img)| Ok((e.clone(), other.apply(img)?))).collect::<Result<_>>()?)
            }
            BasisRule::Variables(v) => {
                BasisRule::Variables(v.iter().map(|img| other.apply(img)).collect::<Result<_>>()?)
            }
        };
        Ok(BasisMap { source: self.source.clone(), target: other.target.clone(), rule })
    }

    /// Checks unit and products on the given basis elements.
    pub fn check_multiplicative(&self, elems: &[BasisElem]) -> Result<bool> {
        if self.apply(&self.source.unit())? != self.target.unit() {
            return Ok(false);
        }
        for a in elems {
            for b in elems {
                let lhs = self.apply(&self.source.mul_basis(a, b)?)?;
                let rhs = self.target.expand_product(&self.apply_basis(a)?, &self.apply_basis(b)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The pro-morphism `𝔄(B, C) -> 𝔄(B', C')` induced by `g: B -> B'` and `f: C' -> C`.
/// For each target level `p'` the family `(f ⊗ id) ∘ h'_{p'} ∘ g` is factored at the
/// smallest source level containing its support.
pub fn induced_promorphism(
    g: &GeneratorImageMap,
    f: &BasisMap,
    src: &MappingTower,
    dst: &MappingTower,
    levels: &[usize],
) -> Result<ProMorphism> {
    if *g.source != *src.b || *g.target != *dst.b || g.anti {
        return Err(Error::CompositionMismatch("g must be a morphism between the source algebras".into()));
    }
    if *f.source != *dst.c || *f.target != *src.c {
        return Err(Error::CompositionMismatch("f must map the coefficient algebras backwards".into()));
    }
    let mut out = ProMorphism::new(src.tower.clone(), dst.tower.clone());
    let levels: Vec<usize> = if dst.tower.is_stable() { vec![0] } else { levels.to_vec() };
    for q in levels {
        let ma = dst.level(q)?;
        let alg = CoeffAlgebra { c: &dst.c };
        let mut images = Vec::with_capacity(g.images.len());
        for img in &g.images {
            let e = substitute(img, &ma.h, &alg)?;
            images.push(f.apply_coeff(&e)?);
        }
        let family = Family { target: ma.presentation.clone(), images };
        let p = needed_level(src, &family)?;
        out.push(p, q, factor_family(src, &family, p)?)?;
    }
    Ok(out)
}

/// The family `B -> C ⊗ K` of a scalar morphism, with constant coefficients.
pub fn scalar_family(field_algebra: Arc<Presentation>, images: &[BasisComb]) -> Family {
    let f = field_algebra.field();
    let images = images
        .iter()
        .map(|e| {
            let mut out = CoeffElem::zero();
            for (c, k) in e.iter() {
                out.add_term(c.clone(), &NCPolynomial::constant(f, k.clone()));
            }
            out
        })
        .collect();
    Family { target: field_algebra, images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{verify_morphism, FieldSpec, Verdict};
    use crate::mapping_core::build_mapping_tower;

    fn gl1(f: FieldSpec) -> Arc<Presentation> {
        Arc::new(Presentation::parse("GL1", f, "t,s", &["t*s - 1", "s*t - 1"]).unwrap())
    }

    #[test]
    fn scalar_morphism_factors_through_its_level() {
        let f = FieldSpec::Rationals;
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(gl1(f), c.clone(), 3).unwrap();
        let k = Arc::new(Presentation::free("K", f, &[]));
        let one = c.elem("1").unwrap();
        let half = f.inv(&f.from_int(2)).unwrap();
        let fam = scalar_family(k, &[one.scale(&f.from_int(2)), one.scale(&half)]);
        let m = factor_family(&t, &fam, 1).unwrap();
        assert_eq!(m.render(), vec!["t[1] -> 2", "t[x] -> 0", "s[1] -> 1/2", "s[x] -> 0"]);
        assert_eq!(verify_morphism(&m, 8).unwrap().verdict, Verdict::Verified);
        let pro = factor_family_pro(&t, &fam, &[0, 1, 2, 3]).unwrap();
        assert!(pro.check_compatibility(8).unwrap().is_compatible());
    }

    #[test]
    fn support_beyond_the_tower_is_reported() {
        let f = FieldSpec::Rationals;
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(gl1(f), c.clone(), 1).unwrap();
        let k = Arc::new(Presentation::free("K", f, &[]));
        let fam = scalar_family(k, &[c.elem("x^2").unwrap(), c.elem("1").unwrap()]);
        assert!(matches!(factor_family(&t, &fam, 1), Err(Error::SupportOverflow(2, 1))));
    }

    #[test]
    fn identity_induces_identity() {
        let f = FieldSpec::Rationals;
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(gl1(f), c.clone(), 3).unwrap();
        let g = GeneratorImageMap::identity(t.b.clone());
        let ind = induced_promorphism(&g, &BasisMap::identity(c), &t, &t, &[0, 1, 2, 3]).unwrap();
        for m in &ind.members {
            assert_eq!(m.source_level, m.target_level);
            assert_eq!(m.map.images, GeneratorImageMap::identity(m.map.source.clone()).images);
        }
        let id = ProMorphism::identity(t.tower.clone(), 3).unwrap();
        assert!(ind.union(&id).unwrap().check_compatibility(8).unwrap().is_compatible());
    }

    #[test]
    fn evaluation_at_origin_lands_in_level_zero() {
        let f = FieldSpec::Prime(3);
        let c = Arc::new(BasisAlgebra::polynomial("PolyX", f, &["x"]));
        let t = build_mapping_tower(gl1(f), c.clone(), 2).unwrap();
        let zero = BasisMap { source: c.clone(), target: c.clone(), rule: BasisRule::Variables(vec![Lin::zero(f)]) };
        assert!(zero.check_multiplicative(&c.level_chain().unwrap().level(2)).unwrap());
        let g = GeneratorImageMap::identity(t.b.clone());
        let ind = induced_promorphism(&g, &zero, &t, &t, &[0, 1, 2]).unwrap();
        let top = &ind.members[2];
        assert_eq!(top.source_level, 0);
        assert_eq!(top.map.render(), vec!["t[1] -> t[1]", "s[1] -> s[1]"]);
    }
}
