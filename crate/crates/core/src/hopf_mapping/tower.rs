//! The structure maps `Δ̂`, `ε̂`, `T̂` on `𝔄(B, K[x_1..x_m])`, explicitly and via the
//! universal property.

use std::sync::Arc;

use crate::basis_algebra::{BasisAlgebra, BasisElem, CoeffAlgebra, CoeffElem};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    substitute, substitute_anti, GeneratorImageMap, NCPolynomial, Presentation, Scalar, TensorPresentation,
    UnitalAlgebra,
};
use crate::mapping_core::{build_mapping_tower, factor_family, Family, MappingTower};
use crate::pro_tower::{tensor_towers, Connecting, ProMorphism, Tower};

use super::{Cell, HopfData, Pseudogroup};

/// A mapping tower into a pseudogroup together with its structure pro-morphisms.
#[derive(Clone, Debug)]
pub struct HopfTower {
    pub pseudogroup: Pseudogroup,
    pub data: HopfData,
    pub p_max: usize,
    pub mapping: MappingTower,
    /// Levelwise `A_p ⊗ A_p` up to level `2 p_max`.
    pub square: Arc<Tower>,
    /// The constant tower on the base field.
    pub base: Arc<Tower>,
    /// Members `Δ̂_p: A_{2p} -> A_p ⊗ A_p` for `p ≤ 2 p_max`.
    pub comul: ProMorphism,
    /// Members `ε̂_p: A_p -> K` for `p ≤ 2 p_max`.
    pub counit: ProMorphism,
    /// Anti-multiplicative members into `A_p` for `p ≤ 2 p_max`.
    pub antipode: ProMorphism,
}

impl HopfTower {
    /// `ε̂` on level `q`, through the highest member at or below `q`.
    pub fn counit_on(&self, q: usize) -> Result<GeneratorImageMap> {
        let m = self
            .counit
            .members
            .iter()
            .filter(|m| m.source_level <= q || self.mapping.tower.is_stable())
            .max_by_key(|m| m.source_level)
            .ok_or(Error::UnreachedLevel(q))?;
        let lo = if self.mapping.tower.is_stable() { q } else { m.source_level };
        self.mapping.tower.connecting(lo, q)?.then(&m.map)
    }

    pub fn layout(&self, p: usize) -> &TensorPresentation {
        self.square.layout(p).expect("tensor tower")
    }
}

/// The coefficient algebra `K[x_1..x_m]` (`K[x]` for `m = 1`).
pub fn polynomial_coefficients(field: crate::exact_algebra::FieldSpec, m: usize) -> BasisAlgebra {
    if m == 1 {
        return BasisAlgebra::polynomial("PolyX", field, &["x"]);
    }
    let names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    BasisAlgebra::polynomial(format!("PolyX{m}"), field, &refs)
}

/// The point `x⟨b,c⟩ ↦ ε(b)·(coefficient of c in 1)` of level `p`.
pub fn counit_point(mapping: &MappingTower, data: &HopfData, p: usize) -> Result<Vec<Scalar>> {
    let f = mapping.c.field();
    let unit = mapping.c.unit();
    let ma = mapping.level(p)?;
    Ok(ma.generator_pairs().into_iter().map(|(b, c)| f.mul(&data.counit[b as usize], &unit.coeff(&c))).collect())
}

fn truncated(t: &MappingTower, top: usize) -> Result<Arc<Tower>> {
    if t.tower.is_stable() {
        return Ok(t.tower.clone());
    }
    let levels = t.tower.levels()[..=top].to_vec();
    Ok(Arc::new(Tower::new(t.tower.name.clone(), levels, Connecting::Truncate)?))
}

fn exponents_below(e: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &k in e {
        out = out.into_iter().flat_map(|v| (0..=k).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    out
}

/// `a⟨p,k,l,I⟩` as an element of level `p`: the generator, a constant, or 0.
fn entry_coeff(
    pg: &Pseudogroup,
    mapping: &MappingTower,
    p: usize,
    k: usize,
    l: usize,
    e: &[u32],
) -> Result<NCPolynomial> {
    let f = pg.field();
    let ma = mapping.level(p)?;
    Ok(match pg.cell(k, l) {
        Cell::Gen(g) => ma
            .generator(*g, &BasisElem(e.to_vec()))
            .map(|x| ma.presentation.var(x))
            .unwrap_or_else(|| NCPolynomial::zero(f)),
        Cell::Const(c) if e.iter().all(|&x| x == 0) => NCPolynomial::constant(f, c.clone()),
        Cell::Const(_) => NCPolynomial::zero(f),
    })
}

/// Builds `𝔄(B, K[x_1..x_m])` up to level `4 p_max` with `Δ̂`, `ε̂`, `T̂` from the
/// convolution formulas. The antipode images must be linear.
pub fn build_hopf_tower(pg: &Pseudogroup, m: usize, p_max: usize) -> Result<HopfTower> {
    let data = pg.hopf_data()?;
    if !data.antipode_is_linear() {
        return Err(Error::Unsupported(
            "antipode images are not linear in the entries; use derive_structure for a level-shifted antipode".into(),
        ));
    }
    let f = pg.field();
    let c = Arc::new(polynomial_coefficients(f, m));
    let mapping = build_mapping_tower(pg.b.clone(), c, 4 * p_max)?;
    let half = truncated(&mapping, 2 * p_max)?;
    let square = Arc::new(tensor_towers(&[&half, &half])?);
    let base = Arc::new(Tower::stable("K", Arc::new(Presentation::base_field(f))));
    let mut comul = ProMorphism::new(mapping.tower.clone(), square.clone());
    let mut counit = ProMorphism::new(mapping.tower.clone(), base.clone());
    let mut antipode = ProMorphism::new(mapping.tower.clone(), mapping.tower.clone());
    for p in 0..=2 * p_max {
        let layout = square.layout(p).expect("tensor tower");
        let src = mapping.level(2 * p)?;
        let mut images = Vec::new();
        for (b, e) in src.generator_pairs() {
            let (k, l) = pg.position(b).expect("generated by entries");
            let mut img = NCPolynomial::zero(f);
            for r in 0..pg.n {
                for t in exponents_below(&e.0) {
                    let s: Vec<u32> = e.0.iter().zip(&t).map(|(i, j)| i - j).collect();
                    let left = entry_coeff(pg, &mapping, p, k, r, &t)?;
                    let right = entry_coeff(pg, &mapping, p, r, l, &s)?;
                    img = img.add(&layout.embed(0, &left).mul(&layout.embed(1, &right)));
                }
            }
            images.push(img);
        }
        comul.push(2 * p, p, GeneratorImageMap::new(src.presentation.clone(), layout.presentation.clone(), images)?)?;

        let lp = mapping.level(p)?;
        let eps = counit_point(&mapping, &data, p)?.into_iter().map(|v| NCPolynomial::constant(f, v)).collect();
        counit.push(p, 0, GeneratorImageMap::new(lp.presentation.clone(), base.level(0)?.clone(), eps)?)?;

        let mut images = Vec::new();
        for (b, e) in lp.generator_pairs() {
            let unit = e.0.iter().all(|&x| x == 0);
            let mut img = NCPolynomial::zero(f);
            for (w, coef) in data.antipode[b as usize].iter() {
                match w.letters() {
                    [] if unit => img.add_term(w.clone(), coef.clone()),
                    [] => {}
                    [g] => {
                        let x = lp.generator(*g, &e).expect("uniform support");
                        img = img.add(&lp.presentation.var(x).scale(coef));
                    }
                    _ => unreachable!("linear antipode"),
                }
            }
            images.push(img);
        }
        let t = GeneratorImageMap::new(lp.presentation.clone(), lp.presentation.clone(), images)?.anti();
        antipode.push(p, p, t)?;
    }
    Ok(HopfTower { pseudogroup: pg.clone(), data, p_max, mapping, square, base, comul, counit, antipode })
}

/// Structure pro-morphisms obtained by factoring families through the universal property.
#[derive(Clone, Debug)]
pub struct DerivedStructure {
    pub comul: ProMorphism,
    pub counit: ProMorphism,
    pub antipode: ProMorphism,
    /// Level shift of the antipode members (longest antipode word).
    pub antipode_shift: usize,
}

/// Factors `b ↦ μ_C-legs (h ⊗ h) Δ_B(b)`, `b ↦ ε_B(b)·1`, and `b ↦ h(T(b))` (in
/// `C ⊗ A^op`) through the tower, for target levels `p ≤ p_max`. `square` must be the
/// levelwise square of `mapping` (or a truncation of it).
pub fn derive_structure(
    mapping: &MappingTower,
    data: &HopfData,
    square: &Arc<Tower>,
    p_max: usize,
) -> Result<DerivedStructure> {
    let c = &mapping.c;
    if !c.is_commutative() {
        return Err(Error::Unsupported(format!(
            "{} is not commutative; multiplying coefficient legs is not a morphism",
            c.name()
        )));
    }
    let f = c.field();
    let alg = CoeffAlgebra { c };
    let stable = mapping.tower.is_stable();
    let top = mapping.max_level();
    let levels: Vec<usize> = if stable { vec![0] } else { (0..=p_max).collect() };
    let base = Arc::new(Tower::stable("K", Arc::new(Presentation::base_field(f))));
    let mut comul = ProMorphism::new(mapping.tower.clone(), square.clone());
    let mut counit = ProMorphism::new(mapping.tower.clone(), base.clone());
    let mut antipode = ProMorphism::new(mapping.tower.clone(), mapping.tower.clone());
    let shift = data.antipode_degree();
    let embed = |layout: &TensorPresentation, k: usize, x: &CoeffElem| {
        CoeffElem(x.0.iter().map(|(e, p)| (e.clone(), layout.embed(k, p))).collect())
    };
    for &p in &levels {
        let lp = mapping.level(p)?;
        let layout = square.layout(p).ok_or_else(|| Error::Invalid("square must be a tensor tower".into()))?;
        let mut images = Vec::new();
        for pairs in &data.comul {
            let mut acc = alg.zero();
            for (l, r) in pairs {
                let hl = embed(layout, 0, &substitute(l, &lp.h, &alg)?);
                let hr = embed(layout, 1, &substitute(r, &lp.h, &alg)?);
                acc = alg.add(&acc, &alg.mul(&hl, &hr)?);
            }
            images.push(acc);
        }
        let fam = Family { target: layout.presentation.clone(), images };
        let src = if stable { 0 } else { 2 * p };
        comul.push(src, p, factor_family(mapping, &fam, src)?)?;

        let unit: Vec<CoeffElem> = data
            .counit
            .iter()
            .map(|v| {
                let mut out = CoeffElem::zero();
                for (e, k) in c.unit().iter() {
                    out.add_term(e.clone(), &NCPolynomial::constant(f, f.mul(v, k)));
                }
                out
            })
            .collect();
        let fam = Family { target: base.level(0)?.clone(), images: unit };
        counit.push(p, 0, factor_family(mapping, &fam, p)?)?;

        let src = if stable { 0 } else { shift * p };
        if top.is_none_or(|t| src <= t) {
            let images = data.antipode.iter().map(|t| substitute_anti(t, &lp.h, &alg)).collect::<Result<Vec<_>>>()?;
            let fam = Family { target: lp.presentation.clone(), images };
            antipode.push(src, p, factor_family(mapping, &fam, src)?.anti())?;
        }
    }
    Ok(DerivedStructure { comul, counit, antipode, antipode_shift: shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{verify_morphism, FieldSpec, Verdict};
    use crate::hopf_mapping::pseudogroup::{gl1, sl2};
    use crate::mapping_core::point_to_morphism;

    #[test]
    fn gl1_comultiplication_at_level_one() {
        let h = build_hopf_tower(&gl1(FieldSpec::Rationals), 1, 1).unwrap();
        let d1 = h.comul.member_into(1).unwrap();
        assert_eq!(d1.source_level, 2);
        let lines = d1.map.render();
        assert_eq!(lines[0], "t[1] -> t[1].1*t[1].2");
        assert_eq!(lines[1], "t[x] -> t[x].1*t[1].2 + t[1].1*t[x].2");
        assert_eq!(lines[2], "t[x^2] -> t[x].1*t[x].2");
        let eps = h.counit.member_into(0).unwrap();
        assert_eq!(h.counit.members[1].map.render(), vec!["t[1] -> 1", "t[x] -> 0", "s[1] -> 1", "s[x] -> 0"]);
        assert_eq!(eps.source_level, 0);
        assert_eq!(
            h.antipode.members[1].map.render(),
            vec!["t[1] -> s[1]", "t[x] -> s[x]", "s[1] -> t[1]", "s[x] -> t[x]"]
        );
        assert_eq!(verify_morphism(&d1.map, 6).unwrap().verdict, Verdict::Verified);
        assert_eq!(verify_morphism(&h.antipode.members[2].map, 6).unwrap().verdict, Verdict::Verified);
        for s in [&h.comul, &h.counit, &h.antipode] {
            assert!(s.check_compatibility(6).unwrap().is_compatible());
        }
    }

    #[test]
    fn explicit_and_derived_agree() {
        for (pg, m) in [(gl1(FieldSpec::Rationals), 1), (gl1(FieldSpec::Rationals), 2), (sl2(FieldSpec::Prime(7)), 1)] {
            let h = build_hopf_tower(&pg, m, 1).unwrap();
            let d = derive_structure(&h.mapping, &h.data, &h.square, 2).unwrap();
            assert_eq!(d.antipode_shift, 1);
            for p in 0..=2 {
                let (a, b) = (h.comul.member_into(p).unwrap(), d.comul.member_into(p).unwrap());
                assert_eq!(a.source_level, b.source_level);
                assert_eq!(a.map.images, b.map.images);
                let (a, b) = (&h.counit.members[p], &d.counit.members[p]);
                assert_eq!(a.map.images, b.map.images);
                let (a, b) = (&h.antipode.members[p], &d.antipode.members[p]);
                assert_eq!(a.map.images, b.map.images);
                assert!(b.map.anti);
            }
        }
    }

    #[test]
    fn counit_is_the_constant_point() {
        let f = FieldSpec::Prime(5);
        let pg = sl2(f);
        let h = build_hopf_tower(&pg, 1, 1).unwrap();
        let pt = counit_point(&h.mapping, &h.data, 2).unwrap();
        let imgs = point_to_morphism(h.mapping.level(2).unwrap(), &pt).unwrap();
        let one = h.mapping.c.unit();
        assert_eq!(imgs, vec![one.clone(), one.scale(&f.zero()), one.scale(&f.zero()), one]);
    }

    #[test]
    fn group_like_into_the_base_field() {
        let f = FieldSpec::Rationals;
        let b = Arc::new(Presentation::parse("G", f, "g", &["g*g - 1"]).unwrap());
        let data =
            HopfData { comul: vec![vec![(b.var(0), b.var(0))]], counit: vec![f.one()], antipode: vec![b.var(0)] };
        let c = Arc::new(BasisAlgebra::diagonal("K", f, 1));
        let t = build_mapping_tower(b, c, 0).unwrap();
        let square = Arc::new(tensor_towers(&[&t.tower, &t.tower]).unwrap());
        let d = derive_structure(&t, &data, &square, 0).unwrap();
        assert_eq!(d.comul.members[0].map.render(), vec!["g[e1] -> g[e1].1*g[e1].2"]);
    }

    #[test]
    fn quadratic_antipode_is_shifted() {
        let f = FieldSpec::Rationals;
        let b = Arc::new(Presentation::parse("Z3", f, "g", &["g*g*g - 1"]).unwrap());
        let pg = Pseudogroup::new(b.clone(), 1, vec![Cell::Gen(0)], vec![b.var(0).mul(&b.var(0))]).unwrap();
        assert!(matches!(build_hopf_tower(&pg, 1, 1), Err(Error::Unsupported(_))));
        let data = pg.hopf_data().unwrap();
        let c = Arc::new(polynomial_coefficients(f, 1));
        let t = build_mapping_tower(b, c, 4).unwrap();
        let half = truncated(&t, 2).unwrap();
        let square = Arc::new(tensor_towers(&[&half, &half]).unwrap());
        let d = derive_structure(&t, &data, &square, 2).unwrap();
        assert_eq!(d.antipode_shift, 2);
        let m = d.antipode.member_into(1).unwrap();
        assert_eq!(m.source_level, 2);
        assert_eq!(m.map.render()[1], "g[x] -> g[x]*g[1] + g[1]*g[x]");
    }
}
