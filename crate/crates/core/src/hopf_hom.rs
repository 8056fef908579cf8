//! Families of Hopf-algebra morphisms and the commutative algebra classifying them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basis_algebra::{BasisComb, BasisElem, BasisHopfAlgebra, CoeffAlgebra, CoeffElem, FiniteGroup};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    evaluate, substitute, tensor_many, verify_morphism, EqualityOracle, FieldSpec, Gen, GeneratorImageMap, Lin,
    NCPolynomial, Presentation, TensorPresentation, Verdict,
};
use crate::hopf_mapping::{overall, Check, HopfData};
use crate::mapping_core::{
    build_mapping_algebra, commutativize, enumerate_points, point_to_morphism, EnumOptions, MappingAlgebra,
    MappingProblem,
};

/// A presented Hopf algebra with its structure maps given on generators.
#[derive(Clone, Debug)]
pub struct PresentedHopf {
    pub presentation: Arc<Presentation>,
    pub data: HopfData,
    /// When the algebra is a group algebra: the group and the element of each generator.
    pub group: Option<(FiniteGroup, Vec<u32>)>,
}

impl PresentedHopf {
    pub fn new(presentation: Arc<Presentation>, data: HopfData) -> Result<Self> {
        let n = presentation.gen_count();
        if data.comul.len() != n || data.counit.len() != n || data.antipode.len() != n {
            return Err(Error::Invalid(format!(
                "structure maps of {} must be given on all {n} generators",
                presentation.name()
            )));
        }
        Ok(PresentedHopf { presentation, data, group: None })
    }

    /// `K[G]` with one generator per non-identity element and the multiplication table as relations.
    pub fn group_algebra(name: &str, field: FieldSpec, group: FiniteGroup) -> Result<Self> {
        let elems: Vec<u32> = (1..group.order() as u32).collect();
        let names: Vec<String> = elems.iter().map(|&a| group.label(a).to_string()).collect();
        let var = |a: u32| -> NCPolynomial {
            if a == 0 {
                NCPolynomial::one(field)
            } else {
                NCPolynomial::var(field, a - 1)
            }
        };
        let mut rels = Vec::new();
        for &a in &elems {
            for &b in &elems {
                rels.push(var(a).mul(&var(b)).sub(&var(group.mul(a, b))));
            }
        }
        let pres = Arc::new(Presentation::new(name, field, names, rels)?);
        let data = HopfData {
            comul: elems.iter().map(|&a| vec![(var(a), var(a))]).collect(),
            counit: elems.iter().map(|_| field.one()).collect(),
            antipode: elems.iter().map(|&a| var(group.inverse(a))).collect(),
        };
        Ok(PresentedHopf { presentation: pres, data, group: Some((group, elems)) })
    }

    /// `K⟨g | g^n - 1⟩` with `g` group-like.
    pub fn cyclic(name: &str, field: FieldSpec, n: usize, gen: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cyclic group of order 0".into()));
        }
        let g = NCPolynomial::var(field, 0);
        let power = |k: usize| (0..k).fold(NCPolynomial::one(field), |acc, _| acc.mul(&g));
        let pres = Arc::new(Presentation::new(
            name,
            field,
            vec![gen.to_string()],
            vec![power(n).sub(&NCPolynomial::one(field))],
        )?);
        let data = HopfData {
            comul: vec![vec![(g.clone(), g.clone())]],
            counit: vec![field.one()],
            antipode: vec![power(n - 1)],
        };
        Ok(PresentedHopf { presentation: pres, data, group: Some((FiniteGroup::cyclic(n)?, vec![(1 % n) as u32])) })
    }

    pub fn field(&self) -> FieldSpec {
        self.presentation.field()
    }

    fn comul_map(&self, tp: &TensorPresentation, left: usize, right: usize) -> Result<GeneratorImageMap> {
        let f = self.field();
        let images = self
            .data
            .comul
            .iter()
            .map(|pairs| {
                pairs
                    .iter()
                    .fold(NCPolynomial::zero(f), |acc, (p, q)| acc.add(&tp.embed(left, p).mul(&tp.embed(right, q))))
            })
            .collect();
        GeneratorImageMap::new(self.presentation.clone(), tp.presentation.clone(), images)
    }

    /// Structure maps respect the relations, and the coassociativity, counit and antipode
    /// laws hold on generators, each decided at `bound`.
    pub fn validate(&self, bound: usize) -> Result<Vec<Check>> {
        let f = self.field();
        let h = &self.presentation;
        let n = h.gen_count() as Gen;
        let mut checks = Vec::new();
        let render_witness = |w: Option<(usize, NCPolynomial)>, target: &Presentation| {
            w.map(|(i, r)| format!("{} -> {}", h.render_poly(&h.relations()[i]), target.render_poly(&r)))
        };

        let hh = tensor_many(&[h, h])?;
        let delta = self.comul_map(&hh, 0, 1)?;
        let rep = verify_morphism(&delta, bound)?;
        checks.push(Check::new(
            "comultiplication respects relations",
            rep.verdict,
            render_witness(rep.witness, &hh.presentation),
        ));

        let mut bad = None;
        for r in h.relations() {
            if !f.is_zero(&evaluate(r, &self.data.counit)?) {
                bad = Some(h.render_poly(r));
                break;
            }
        }
        checks.push(Check::new(
            "counit respects relations",
            if bad.is_none() { Verdict::Verified } else { Verdict::Refuted },
            bad,
        ));

        let s = GeneratorImageMap::new(h.clone(), h.clone(), self.data.antipode.clone())?.anti();
        let rep = verify_morphism(&s, bound)?;
        checks.push(Check::new("antipode is anti-multiplicative", rep.verdict, render_witness(rep.witness, h)));

        let hhh = tensor_many(&[h, h, h])?;
        let d01 = self.comul_map(&hhh, 0, 1)?;
        let d12 = self.comul_map(&hhh, 1, 2)?;
        let mut oracle3 = EqualityOracle::new(hhh.presentation.clone(), bound)?;
        oracle3.add_witness([self.data.counit.clone(), self.data.counit.clone(), self.data.counit.clone()].concat())?;
        let mut oracle = EqualityOracle::new(h.clone(), bound)?;
        oracle.add_witness(self.data.counit.clone())?;
        let mut coassoc = (Verdict::Verified, None);
        let mut counit = (Verdict::Verified, None);
        let mut antipode = (Verdict::Verified, None);
        let note = |slot: &mut (Verdict, Option<String>), v: Verdict, g: Gen| {
            if v != Verdict::Verified && slot.1.is_none() {
                slot.1 = Some(h.gen_name(g).to_string());
            }
            slot.0 = slot.0.and(v);
        };
        for g in 0..n {
            let pairs = &self.data.comul[g as usize];
            let mut left = NCPolynomial::zero(f);
            let mut right = NCPolynomial::zero(f);
            let mut el = NCPolynomial::zero(f);
            let mut er = NCPolynomial::zero(f);
            let mut sl = NCPolynomial::zero(f);
            let mut sr = NCPolynomial::zero(f);
            for (p, q) in pairs {
                left = left.add(&d01.apply(p)?.mul(&hhh.embed(2, q)));
                right = right.add(&hhh.embed(0, p).mul(&d12.apply(q)?));
                el = el.add(&q.scale(&evaluate(p, &self.data.counit)?));
                er = er.add(&p.scale(&evaluate(q, &self.data.counit)?));
                sl = sl.add(&s.apply(p)?.mul(q));
                sr = sr.add(&p.mul(&s.apply(q)?));
            }
            let v = if hhh.canonical(&left) == hhh.canonical(&right) {
                Verdict::Verified
            } else {
                oracle3.decide_equal(&left, &right)?
            };
            note(&mut coassoc, v, g);
            let x = h.var(g);
            let v = oracle.decide_equal(&el, &x)?.and(oracle.decide_equal(&er, &x)?);
            note(&mut counit, v, g);
            let unit = NCPolynomial::constant(f, self.data.counit[g as usize].clone());
            let v = oracle.decide_equal(&sl, &unit)?.and(oracle.decide_equal(&sr, &unit)?);
            note(&mut antipode, v, g);
        }
        checks.push(Check::new("coassociativity on generators", coassoc.0, coassoc.1));
        checks.push(Check::new("counit law on generators", counit.0, counit.1));
        checks.push(Check::new("antipode law on generators", antipode.0, antipode.1));
        Ok(checks)
    }

    pub fn is_valid(&self, bound: usize) -> Result<Verdict> {
        Ok(overall(&self.validate(bound)?))
    }
}

/// `𝔄‡(H1, H2)` together with `ψ(t) = Σ_s s ⊗ x⟨t,s⟩`.
#[derive(Clone, Debug)]
pub struct HomSchemeAlgebra {
    pub algebra: MappingAlgebra,
    /// Number of relations contributed by comultiplicativity.
    pub comultiplicativity: usize,
}

impl HomSchemeAlgebra {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.algebra.presentation
    }

    pub fn psi(&self) -> &[CoeffElem] {
        &self.algebra.h
    }
}

/// Coefficients of `(Δ2 ⊗ id)ψ(t) - (id ⊗ μ)(id ⊗ F ⊗ id)(ψ ⊗ ψ)Δ1(t)` over `basis(H2)^{⊗2}`.
fn comultiplicativity(h1: &PresentedHopf, h2: &BasisHopfAlgebra, psi: &[CoeffElem]) -> Result<Vec<NCPolynomial>> {
    let f = h1.field();
    let c = h2.algebra();
    let alg = CoeffAlgebra { c };
    let mut out = Vec::new();
    for (t, img) in psi.iter().enumerate() {
        let mut diff: BTreeMap<(BasisElem, BasisElem), NCPolynomial> = BTreeMap::new();
        let mut bump = |k: (BasisElem, BasisElem), p: &NCPolynomial| {
            let slot = diff.entry(k).or_insert_with(|| NCPolynomial::zero(f));
            *slot = slot.add(p);
        };
        for (e, x) in &img.0 {
            for ((a, b), k) in h2.comul(e).iter() {
                bump((a.clone(), b.clone()), &x.scale(k));
            }
        }
        for (p, q) in &h1.data.comul[t] {
            let sp = substitute(p, psi, &alg)?;
            let sq = substitute(q, psi, &alg)?;
            for (a, x) in &sp.0 {
                for (b, y) in &sq.0 {
                    bump((a.clone(), b.clone()), &x.mul(y).neg());
                }
            }
        }
        let mut nonzero: Vec<_> = diff.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        nonzero.sort_by(|x, y| c.cmp_elems(&x.0 .0, &y.0 .0).then_with(|| c.cmp_elems(&x.0 .1, &y.0 .1)));
        out.extend(nonzero.into_iter().map(|(_, p)| p.monic()));
    }
    Ok(out)
}

/// The commutative mapping algebra `𝔄(H1, H2_L)` plus the comultiplicativity coefficients.
pub fn build_hom_algebra(h1: &PresentedHopf, h2: &BasisHopfAlgebra, l: &[BasisElem]) -> Result<HomSchemeAlgebra> {
    if h1.field() != h2.field() {
        return Err(Error::FieldMismatch(h1.field().to_string(), h2.field().to_string()));
    }
    let c = Arc::new(h2.algebra().clone());
    let base = build_mapping_algebra(&MappingProblem::uniform(h1.presentation.clone(), c, l)?)?;
    let extra = comultiplicativity(h1, h2, &base.h)?;
    let count = extra.len();
    let pres = commutativize(&base.presentation).with_relations(extra)?.renamed(format!(
        "Hom_{}_{}",
        h1.presentation.name(),
        h2.name()
    ));
    Ok(HomSchemeAlgebra { algebra: base.with_presentation(Arc::new(pres)), comultiplicativity: count })
}

/// Re-expands the family condition for `ψ` and decides every coefficient in `𝔄‡`.
pub fn check_family(h1: &PresentedHopf, h2: &BasisHopfAlgebra, a: &HomSchemeAlgebra, bound: usize) -> Result<Verdict> {
    let mut oracle = EqualityOracle::new(a.presentation().clone(), bound)?;
    let mut v = Verdict::Verified;
    for p in comultiplicativity(h1, h2, a.psi())? {
        v = v.and(oracle.decide(&p)?);
    }
    Ok(v)
}

/// Points of `𝔄‡` and, for group algebras, the group homomorphisms they should match.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfPointReport {
    pub points: Vec<Vec<BasisComb>>,
    pub oracle: Option<Vec<Vec<BasisComb>>>,
}

impl HopfPointReport {
    /// Whether points and oracle morphisms agree as sets (`None` without an oracle).
    pub fn bijection(&self) -> Option<bool> {
        let mut p = self.points.clone();
        let mut o = self.oracle.clone()?;
        p.sort();
        o.sort();
        Some(p == o)
    }
}

/// Enumerates the points of `build_hom_algebra` over a finite field, with the group
/// homomorphism oracle when both sides come from finite groups.
pub fn enumerate_hopf_points(
    h1: &PresentedHopf,
    h2: &BasisHopfAlgebra,
    l: &[BasisElem],
    opts: &EnumOptions,
) -> Result<HopfPointReport> {
    let a = build_hom_algebra(h1, h2, l)?;
    let pts = enumerate_points(a.presentation(), opts)?;
    let points = pts.iter().map(|p| point_to_morphism(&a.algebra, p)).collect::<Result<Vec<_>>>()?;
    let oracle = h1.group.as_ref().map(|(g1, gens)| {
        let f = h1.field();
        g1.homomorphisms_to(h2.group())
            .into_iter()
            .map(|phi| {
                gens.iter().map(|&a| Lin::basis(f, BasisElem(vec![phi[a as usize]]))).collect::<Vec<BasisComb>>()
            })
            .filter(|m| m.iter().all(|c| c.keys().all(|e| l.contains(e))))
            .collect()
    });
    Ok(HopfPointReport { points, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, f: FieldSpec) -> BasisHopfAlgebra {
        BasisHopfAlgebra::group_algebra(format!("Z{n}"), f, FiniteGroup::cyclic(n).unwrap())
    }

    #[test]
    fn presented_group_algebras_validate() {
        let f = FieldSpec::Prime(7);
        assert_eq!(PresentedHopf::cyclic("C3", f, 3, "g").unwrap().is_valid(8).unwrap(), Verdict::Verified);
        let s3 = PresentedHopf::group_algebra("S3", f, FiniteGroup::symmetric(3).unwrap()).unwrap();
        assert_eq!(s3.is_valid(6).unwrap(), Verdict::Verified);
    }

    #[test]
    fn broken_antipode_is_refuted() {
        let f = FieldSpec::Prime(7);
        let mut h = PresentedHopf::cyclic("C3", f, 3, "g").unwrap();
        h.data.antipode[0] = h.presentation.var(0);
        let checks = h.validate(8).unwrap();
        let law = checks.iter().find(|c| c.name == "antipode law on generators").unwrap();
        assert_eq!(law.verdict, Verdict::Refuted);
        assert_eq!(law.witness.as_deref(), Some("g"));
    }

    #[test]
    fn z3_hom_algebra_relations() {
        // ψ(g) = Σ u^j ⊗ x_j. Comultiplicativity gives x_j x_k = 0 (j ≠ k) and x_j^2 = x_j;
        // g^3 - 1 gives (x_0 + x_1 + x_2)^3 = 1, which with the idempotents reduces to Σ x_j = 1.
        let f = FieldSpec::Prime(7);
        let h1 = PresentedHopf::cyclic("C3", f, 3, "g").unwrap();
        let h2 = z(3, f);
        let l = h2.algebra().basis().unwrap();
        let a = build_hom_algebra(&h1, &h2, &l).unwrap();
        let pres = a.presentation();
        assert!(pres.is_commutative());
        assert_eq!(a.comultiplicativity, 9);
        let mut o = EqualityOracle::new(pres.clone(), 6).unwrap();
        let x: Vec<NCPolynomial> = (0..3).map(|j| pres.var(j)).collect();
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { x[j].clone() } else { NCPolynomial::zero(f) };
                assert_eq!(o.decide_equal(&x[j].mul(&x[k]), &want).unwrap(), Verdict::Verified);
            }
        }
        let sum = x[0].add(&x[1]).add(&x[2]);
        assert_eq!(o.decide_equal(&sum, &NCPolynomial::one(f)).unwrap(), Verdict::Verified);
        assert_eq!(check_family(&h1, &h2, &a, 6).unwrap(), Verdict::Verified);
    }

    #[test]
    fn point_counts_match_group_homomorphisms() {
        let opts = EnumOptions::default();
        for (m, n, p, want) in [(3, 3, 7, 3), (2, 3, 7, 1), (2, 2, 3, 2)] {
            let f = FieldSpec::Prime(p);
            let h1 = PresentedHopf::cyclic("C", f, m, "g").unwrap();
            let h2 = z(n, f);
            let l = h2.algebra().basis().unwrap();
            let r = enumerate_hopf_points(&h1, &h2, &l, &opts).unwrap();
            assert_eq!(r.points.len(), want, "Z{m} -> Z{n}");
            assert_eq!(r.bijection(), Some(true));
        }
    }

    #[test]
    fn unit_support_maps_into_scalars() {
        let f = FieldSpec::Prime(5);
        let h1 = PresentedHopf::cyclic("C2", f, 2, "g").unwrap();
        let h2 = z(2, f);
        let l = vec![h2.algebra().unit_elem().unwrap()];
        let r = enumerate_hopf_points(&h1, &h2, &l, &EnumOptions::default()).unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.bijection(), Some(true));
    }

    #[test]
    fn full_group_algebra_source() {
        let f = FieldSpec::Prime(3);
        let h1 = PresentedHopf::group_algebra("KZ2", f, FiniteGroup::cyclic(2).unwrap()).unwrap();
        let h2 = z(2, f);
        let l = h2.algebra().basis().unwrap();
        let r = enumerate_hopf_points(&h1, &h2, &l, &EnumOptions::default()).unwrap();
        assert_eq!(r.points.len(), 2);
        assert_eq!(r.bijection(), Some(true));
    }
}
