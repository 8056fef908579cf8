//! Hopf structures given basiswise. Group algebras are the supported instances.

use super::{BasisAlgebra, BasisComb, BasisElem, FiniteGroup};
use crate::error::{Error, Result};
use crate::exact_algebra::{FieldSpec, Lin, Scalar};

/// Two-leg combination `Σ c · (a ⊗ b)` of basis elements.
pub type BasisComb2 = Lin<(BasisElem, BasisElem)>;

/// A group algebra `K[G]` with `Δ(g) = g ⊗ g`, `ε(g) = 1`, `S(g) = g⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisHopfAlgebra {
    algebra: BasisAlgebra,
}

impl BasisHopfAlgebra {
    pub fn group_algebra(name: impl Into<String>, field: FieldSpec, group: FiniteGroup) -> Self {
        BasisHopfAlgebra { algebra: BasisAlgebra::group_algebra(name, field, group) }
    }

    pub fn from_algebra(algebra: BasisAlgebra) -> Result<Self> {
        if algebra.group().is_none() {
            return Err(Error::Unsupported(format!(
                "{} is not a group algebra; basiswise Hopf data is only available for group algebras",
                algebra.name()
            )));
        }
        Ok(BasisHopfAlgebra { algebra })
    }

    pub fn algebra(&self) -> &BasisAlgebra {
        &self.algebra
    }

    pub fn group(&self) -> &FiniteGroup {
        self.algebra.group().expect("group algebra")
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    pub fn comul(&self, e: &BasisElem) -> BasisComb2 {
        Lin::basis(self.field(), (e.clone(), e.clone()))
    }

    pub fn counit(&self, _e: &BasisElem) -> Scalar {
        self.field().one()
    }

    pub fn antipode(&self, e: &BasisElem) -> BasisComb {
        Lin::basis(self.field(), BasisElem(vec![self.group().inverse(e.0[0])]))
    }

    pub fn comul_comb(&self, c: &BasisComb) -> BasisComb2 {
        let mut out = Lin::zero(self.field());
        for (e, k) in c.iter() {
            out.add_scaled(&self.comul(e), k);
        }
        out
    }

    pub fn counit_comb(&self, c: &BasisComb) -> Scalar {
        let f = self.field();
        c.iter().fold(f.zero(), |acc, (e, k)| f.add(&acc, &f.mul(k, &self.counit(e))))
    }

    /// Checks coassociativity, the counit and antipode laws, and multiplicativity of `Δ`
    /// and `ε` on every basis element (pair).
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let alg = &self.algebra;
        let basis = alg.basis()?;
        let fail = |law: &str, w: String| Err(Error::LawViolated { law: law.into(), witness: w });
        for e in &basis {
            let d = self.comul(e);
            let mut left: Lin<(BasisElem, BasisElem, BasisElem)> = Lin::zero(f);
            let mut right = Lin::zero(f);
            for ((a, b), c) in d.iter() {
                for ((x, y), k) in self.comul(a).iter() {
                    left.add_term((x.clone(), y.clone(), b.clone()), f.mul(c, k));
                }
                for ((x, y), k) in self.comul(b).iter() {
                    right.add_term((a.clone(), x.clone(), y.clone()), f.mul(c, k));
                }
            }
            if left != right {
                return fail("coassociativity", alg.label(e));
            }
            let mut l_counit = Lin::zero(f);
            let mut r_counit = Lin::zero(f);
            let mut l_anti = Lin::zero(f);
            let mut r_anti = Lin::zero(f);
            for ((a, b), c) in d.iter() {
                l_counit.add_term(b.clone(), f.mul(c, &self.counit(a)));
                r_counit.add_term(a.clone(), f.mul(c, &self.counit(b)));
                let eb = Lin::basis(f, b.clone());
                let ea = Lin::basis(f, a.clone());
                l_anti.add_scaled(&alg.expand_product(&self.antipode(a), &eb)?, c);
                r_anti.add_scaled(&alg.expand_product(&ea, &self.antipode(b))?, c);
            }
            let ee = Lin::basis(f, e.clone());
            if l_counit != ee || r_counit != ee {
                return fail("counit", alg.label(e));
            }
            let target = alg.unit().scale(&self.counit(e));
            if l_anti != target || r_anti != target {
                return fail("antipode", alg.label(e));
            }
        }
        for a in &basis {
            for b in &basis {
                let ab = alg.mul_basis(a, b)?;
                let lhs = self.comul_comb(&ab);
                let mut rhs = Lin::zero(f);
                for ((x, y), c) in self.comul(a).iter() {
                    for ((u, v), k) in self.comul(b).iter() {
                        let xu = alg.mul_basis(x, u)?;
                        let yv = alg.mul_basis(y, v)?;
                        for (p, s) in xu.iter() {
                            for (q, t) in yv.iter() {
                                rhs.add_term((p.clone(), q.clone()), f.mul(&f.mul(c, k), &f.mul(s, t)));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return fail("comultiplicativity", format!("({}, {})", alg.label(a), alg.label(b)));
                }
                if self.counit_comb(&ab) != f.mul(&self.counit(a), &self.counit(b)) {
                    return fail("counit multiplicativity", format!("({}, {})", alg.label(a), alg.label(b)));
                }
            }
        }
        Ok(())
    }

    pub fn render_decl(&self) -> String {
        format!("hopfbasis {} {{\n  type: groupalg;\n  group: {};\n}}", self.name(), self.group().name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_algebra_is_hopf() {
        let h = BasisHopfAlgebra::group_algebra("H", FieldSpec::Prime(7), FiniteGroup::cyclic(3).unwrap());
        h.validate().unwrap();
        let u1 = h.algebra().parse_label("u1").unwrap();
        assert_eq!(h.antipode(&u1), h.algebra().elem("u2").unwrap());
    }

    #[test]
    fn symmetric_group_algebra_is_hopf() {
        let h = BasisHopfAlgebra::group_algebra("S3", FieldSpec::Rationals, FiniteGroup::symmetric(3).unwrap());
        h.validate().unwrap();
    }

    #[test]
    fn non_group_algebras_are_rejected() {
        let k2 = BasisAlgebra::diagonal("K2", FieldSpec::Rationals, 2);
        assert!(matches!(BasisHopfAlgebra::from_algebra(k2), Err(Error::Unsupported(_))));
    }
}
