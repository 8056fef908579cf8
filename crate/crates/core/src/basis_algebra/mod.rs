//! Algebras given by a basis and a locally finite product on basis elements.

pub mod group;
pub mod hopf;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact_algebra::{FieldSpec, Lin, NCPolynomial, Scalar, UnitalAlgebra};

pub use group::FiniteGroup;
pub use hopf::BasisHopfAlgebra;

/// Index of a basis element. Its shape depends on the owning algebra: one index for
/// finite bases, an exponent vector for monomials, concatenated keys for tensor products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElem(pub Vec<u32>);

/// Finite linear combination of basis elements.
pub type BasisComb = Lin<BasisElem>;

#[derive(Clone, Debug, PartialEq)]
pub enum BasisKind {
    /// Finite dimensional: `table[i][j]` is the coordinate vector of `e_i e_j`.
    StructConst {
        labels: Vec<String>,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    },
    /// Commutative polynomials in the named variables, graded by total degree.
    Monomial {
        vars: Vec<String>,
    },
    Group(FiniteGroup),
    Tensor(Box<BasisAlgebra>, Box<BasisAlgebra>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisAlgebra {
    name: String,
    field: FieldSpec,
    kind: BasisKind,
}

impl BasisAlgebra {
    pub fn struct_const(
        name: impl Into<String>,
        field: FieldSpec,
        labels: Vec<String>,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Self> {
        let n = labels.len();
        let name = name.into();
        let ok = table.len() == n
            && unit.len() == n
            && table.iter().all(|row| row.len() == n && row.iter().all(|v| v.len() == n));
        if !ok {
            return Err(Error::Invalid(format!("structure table of {name} does not have dimension {n}")));
        }
        Ok(BasisAlgebra { name, field, kind: BasisKind::StructConst { labels, table, unit } })
    }

    /// Builds a structure-constant algebra from products `(i, j) -> combination`; absent
    /// products are zero.
    pub fn from_products(
        name: impl Into<String>,
        field: FieldSpec,
        labels: Vec<String>,
        products: &[((usize, usize), Vec<Scalar>)],
        unit: Vec<Scalar>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut table = vec![vec![vec![field.zero(); n]; n]; n];
        for ((i, j), v) in products {
            if *i >= n || *j >= n || v.len() != n {
                return Err(Error::Invalid(format!("product ({i}, {j}) out of range")));
            }
            table[*i][*j] = v.clone();
        }
        BasisAlgebra::struct_const(name, field, labels, table, unit)
    }

    /// `K^n` with orthogonal idempotents `e1, ..., en`.
    pub fn diagonal(name: impl Into<String>, field: FieldSpec, n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("e{i}")).collect();
        let unit_vec = |i: usize| (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect::<Vec<_>>();
        let table = (0..n)
            .map(|i| (0..n).map(|j| if i == j { unit_vec(i) } else { vec![field.zero(); n] }).collect())
            .collect();
        BasisAlgebra::struct_const(name, field, labels, table, vec![field.one(); n]).unwrap()
    }

    pub fn polynomial(name: impl Into<String>, field: FieldSpec, vars: &[&str]) -> Self {
        BasisAlgebra {
            name: name.into(),
            field,
            kind: BasisKind::Monomial { vars: vars.iter().map(|s| s.to_string()).collect() },
        }
    }

    pub fn group_algebra(name: impl Into<String>, field: FieldSpec, group: FiniteGroup) -> Self {
        BasisAlgebra { name: name.into(), field, kind: BasisKind::Group(group) }
    }

    pub fn tensor(a: &BasisAlgebra, b: &BasisAlgebra) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(a.field.to_string(), b.field.to_string()));
        }
        Ok(BasisAlgebra {
            name: format!("{}_x_{}", a.name, b.name),
            field: a.field,
            kind: BasisKind::Tensor(Box::new(a.clone()), Box::new(b.clone())),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        BasisAlgebra { name: name.into(), ..self.clone() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            BasisKind::Group(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(self.kind, BasisKind::Monomial { .. })
    }

    /// Dimension, or `None` for the infinite monomial bases.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            BasisKind::StructConst { labels, .. } => Some(labels.len()),
            BasisKind::Monomial { .. } => None,
            BasisKind::Group(g) => Some(g.order()),
            BasisKind::Tensor(a, b) => Some(a.dim()? * b.dim()?),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.dim().is_some()
    }

    fn key_len(&self) -> usize {
        match &self.kind {
            BasisKind::Monomial { vars } => vars.len(),
            BasisKind::Tensor(a, b) => a.key_len() + b.key_len(),
            _ => 1,
        }
    }

    fn split_key(&self, e: &BasisElem) -> (BasisElem, BasisElem) {
        match &self.kind {
            BasisKind::Tensor(a, _) => {
                let k = a.key_len();
                (BasisElem(e.0[..k].to_vec()), BasisElem(e.0[k..].to_vec()))
            }
            _ => unreachable!("split_key on a non-tensor algebra"),
        }
    }

    /// Splits a basis element of a tensor product into its two legs.
    pub fn legs(&self, e: &BasisElem) -> Option<(BasisElem, BasisElem)> {
        matches!(self.kind, BasisKind::Tensor(..)).then(|| self.split_key(e))
    }

    pub fn pair(&self, a: &BasisElem, b: &BasisElem) -> BasisElem {
        BasisElem(a.0.iter().chain(&b.0).copied().collect())
    }

    pub fn contains(&self, e: &BasisElem) -> bool {
        if e.0.len() != self.key_len() {
            return false;
        }
        match &self.kind {
            BasisKind::StructConst { labels, .. } => (e.0[0] as usize) < labels.len(),
            BasisKind::Monomial { .. } => true,
            BasisKind::Group(g) => (e.0[0] as usize) < g.order(),
            BasisKind::Tensor(a, b) => {
                let (x, y) = self.split_key(e);
                a.contains(&x) && b.contains(&y)
            }
        }
    }

    fn check(&self, e: &BasisElem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::UnknownBasisElement(format!("{:?}", e.0), self.name.clone()))
        }
    }

    pub fn unit_elem(&self) -> Option<BasisElem> {
        match &self.kind {
            BasisKind::Monomial { vars } => Some(BasisElem(vec![0; vars.len()])),
            BasisKind::Group(_) => Some(BasisElem(vec![0])),
            _ => None,
        }
    }

    /// The unit written in the basis.
    pub fn unit(&self) -> BasisComb {
        let f = self.field;
        match &self.kind {
            BasisKind::StructConst { unit, .. } => {
                Lin::from_terms(f, unit.iter().enumerate().map(|(i, c)| (BasisElem(vec![i as u32]), c.clone())))
            }
            BasisKind::Monomial { .. } | BasisKind::Group(_) => Lin::basis(f, self.unit_elem().unwrap()),
            BasisKind::Tensor(a, b) => {
                let mut out = Lin::zero(f);
                for (x, c) in a.unit().iter() {
                    for (y, d) in b.unit().iter() {
                        out.add_term(self.pair(x, y), f.mul(c, d));
                    }
                }
                out
            }
        }
    }

    /// Product of two basis elements.
    pub fn mul_basis(&self, a: &BasisElem, b: &BasisElem) -> Result<BasisComb> {
        self.check(a)?;
        self.check(b)?;
        let f = self.field;
        Ok(match &self.kind {
            BasisKind::StructConst { table, .. } => {
                let v = &table[a.0[0] as usize][b.0[0] as usize];
                Lin::from_terms(f, v.iter().enumerate().map(|(k, c)| (BasisElem(vec![k as u32]), c.clone())))
            }
            BasisKind::Monomial { .. } => Lin::basis(f, BasisElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())),
            BasisKind::Group(g) => Lin::basis(f, BasisElem(vec![g.mul(a.0[0], b.0[0])])),
            BasisKind::Tensor(l, r) => {
                let (a1, a2) = self.split_key(a);
                let (b1, b2) = self.split_key(b);
                let x = l.mul_basis(&a1, &b1)?;
                let y = r.mul_basis(&a2, &b2)?;
                let mut out = Lin::zero(f);
                for (u, c) in x.iter() {
                    for (v, d) in y.iter() {
                        out.add_term(self.pair(u, v), f.mul(c, d));
                    }
                }
                out
            }
        })
    }

    /// Bilinear extension of the basis product.
    pub fn expand_product(&self, a: &BasisComb, b: &BasisComb) -> Result<BasisComb> {
        let f = self.field;
        let mut out = Lin::zero(f);
        for (u, c) in a.iter() {
            for (v, d) in b.iter() {
                out.add_scaled(&self.mul_basis(u, v)?, &f.mul(c, d));
            }
        }
        Ok(out)
    }

    /// Total degree for graded bases; 0 for finite ones.
    pub fn degree(&self, e: &BasisElem) -> usize {
        match &self.kind {
            BasisKind::Monomial { .. } => e.0.iter().map(|&x| x as usize).sum(),
            _ => 0,
        }
    }

    /// Canonical basis order: index order for finite bases; for monomials total degree,
    /// then larger exponents of earlier variables first (`1, x1, x2, x1^2, x1*x2, ...`).
    pub fn cmp_elems(&self, a: &BasisElem, b: &BasisElem) -> Ordering {
        match &self.kind {
            BasisKind::Monomial { .. } => self.degree(a).cmp(&self.degree(b)).then_with(|| b.0.cmp(&a.0)),
            BasisKind::Tensor(l, r) => {
                let (a1, a2) = self.split_key(a);
                let (b1, b2) = self.split_key(b);
                l.cmp_elems(&a1, &b1).then_with(|| r.cmp_elems(&a2, &b2))
            }
            _ => a.0.cmp(&b.0),
        }
    }

    pub fn sort_elems(&self, v: &mut [BasisElem]) {
        v.sort_by(|a, b| self.cmp_elems(a, b));
    }

    /// The whole basis of a finite-dimensional algebra in canonical order.
    pub fn basis(&self) -> Result<Vec<BasisElem>> {
        Ok(match &self.kind {
            BasisKind::StructConst { labels, .. } => (0..labels.len() as u32).map(|i| BasisElem(vec![i])).collect(),
            BasisKind::Group(g) => (0..g.order() as u32).map(|i| BasisElem(vec![i])).collect(),
            BasisKind::Monomial { .. } => {
                return Err(Error::Unsupported(format!("{} has an infinite basis", self.name)));
            }
            BasisKind::Tensor(a, b) => {
                let (x, y) = (a.basis()?, b.basis()?);
                x.iter().flat_map(|u| y.iter().map(move |v| (u, v))).map(|(u, v)| self.pair(u, v)).collect()
            }
        })
    }

    /// Monomials of total degree at most `p`, in canonical order.
    fn monomials_up_to(m: usize, p: usize) -> Vec<BasisElem> {
        let mut out = Vec::new();
        for d in 0..=p {
            let mut cur = vec![0u32; m];
            compositions(m, d, 0, &mut cur, &mut out);
        }
        out
    }

    pub fn level_chain(&self) -> Result<LevelChain<'_>> {
        match &self.kind {
            BasisKind::Tensor(..) if !self.is_finite() => Err(Error::Unsupported(format!(
                "{} is an infinite tensor product; no level chain available",
                self.name
            ))),
            _ => Ok(LevelChain { owner: self }),
        }
    }

    /// Label of a basis element: `e2`, `x1^2*x2`, `u1`, or `a@b` for tensor products.
    pub fn label(&self, e: &BasisElem) -> String {
        match &self.kind {
            BasisKind::StructConst { labels, .. } => labels[e.0[0] as usize].clone(),
            BasisKind::Group(g) => g.label(e.0[0]).to_string(),
            BasisKind::Monomial { vars } => {
                let parts: Vec<String> = vars
                    .iter()
                    .zip(&e.0)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
            BasisKind::Tensor(a, b) => {
                let (x, y) = self.split_key(e);
                format!("{}@{}", a.label(&x), b.label(&y))
            }
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<BasisElem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::UnknownBasisElement(s.clone(), self.name.clone());
        match &self.kind {
            BasisKind::StructConst { labels, .. } => {
                labels.iter().position(|l| *l == s).map(|i| BasisElem(vec![i as u32])).ok_or_else(unknown)
            }
            BasisKind::Group(g) => g.index_of(&s).map(|i| BasisElem(vec![i])).ok_or_else(unknown),
            BasisKind::Monomial { vars } => {
                let mut exps = vec![0u32; vars.len()];
                if s == "1" {
                    return Ok(BasisElem(exps));
                }
                for factor in s.split('*') {
                    let (v, k) = match factor.split_once('^') {
                        Some((v, k)) => (v, k.parse::<u32>().map_err(|_| unknown())?),
                        None => (factor, 1),
                    };
                    let i = vars.iter().position(|x| x == v).ok_or_else(unknown)?;
                    exps[i] += k;
                }
                Ok(BasisElem(exps))
            }
            BasisKind::Tensor(a, b) => {
                let (x, y) = s.split_once('@').ok_or_else(unknown)?;
                Ok(self.pair(&a.parse_label(x)?, &b.parse_label(y)?))
            }
        }
    }

    /// The basis element as a combination, looked up by label.
    pub fn elem(&self, label: &str) -> Result<BasisComb> {
        Ok(Lin::basis(self.field, self.parse_label(label)?))
    }

    /// Generators in the sense of the text format: basis labels for finite algebras,
    /// variables for polynomial algebras.
    pub fn lookup_name(&self, name: &str) -> Result<BasisComb> {
        self.elem(name)
    }

    pub fn render(&self, c: &BasisComb) -> String {
        let mut terms: Vec<(&BasisElem, &Scalar)> = c.iter().collect();
        terms.sort_by(|a, b| self.cmp_elems(b.0, a.0));
        crate::exact_algebra::poly::render_terms(self.field, terms.into_iter(), |e| {
            if self.is_graded() && self.degree(e) == 0 {
                vec![]
            } else {
                vec![self.label(e)]
            }
        })
    }

    pub fn is_commutative(&self) -> bool {
        match &self.kind {
            BasisKind::Monomial { .. } => true,
            BasisKind::Group(g) => g.is_abelian(),
            BasisKind::Tensor(a, b) => a.is_commutative() && b.is_commutative(),
            BasisKind::StructConst { .. } => {
                let basis = self.basis().unwrap();
                basis.iter().all(|a| basis.iter().all(|b| self.mul_basis(a, b).ok() == self.mul_basis(b, a).ok()))
            }
        }
    }

    /// Checks associativity and the unit laws on all basis triples (finite case) or on
    /// all monomials of degree below `bound` (graded case).
    pub fn validate_structure(&self, bound: usize) -> Result<()> {
        let basis = match self.is_finite() {
            true => self.basis()?,
            false => LevelChain { owner: self }.level(bound),
        };
        let one = self.unit();
        let lbl = |e: &BasisElem| self.label(e);
        for a in &basis {
            let ea = Lin::basis(self.field, a.clone());
            if self.expand_product(&one, &ea)? != ea || self.expand_product(&ea, &one)? != ea {
                return Err(Error::LawViolated { law: "unit".into(), witness: lbl(a) });
            }
        }
        for a in &basis {
            for b in &basis {
                let ab = self.mul_basis(a, b)?;
                for c in &basis {
                    let ec = Lin::basis(self.field, c.clone());
                    let left = self.expand_product(&ab, &ec)?;
                    let bc = self.mul_basis(b, c)?;
                    let right = self.expand_product(&Lin::basis(self.field, a.clone()), &bc)?;
                    if left != right {
                        return Err(Error::LawViolated {
                            law: "associativity".into(),
                            witness: format!("({}, {}, {})", lbl(a), lbl(b), lbl(c)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// DSL rendering of the declaration.
    pub fn render_decl(&self) -> String {
        match &self.kind {
            BasisKind::Monomial { vars } => {
                format!("basisalg {} {{\n  type: poly;\n  vars: {};\n}}", self.name, vars.join(", "))
            }
            BasisKind::Group(g) => format!("basisalg {} {{\n  type: groupalg;\n  group: {};\n}}", self.name, g.name()),
            BasisKind::StructConst { labels, unit, .. } => {
                let f = self.field;
                let unit: Vec<String> = unit.iter().map(|c| f.display(c)).collect();
                let mut rules = Vec::new();
                let basis = self.basis().unwrap();
                for a in &basis {
                    for b in &basis {
                        let p = self.mul_basis(a, b).unwrap();
                        if !p.is_zero() {
                            rules.push(format!("{}*{} = {}", self.label(a), self.label(b), self.render(&p)));
                        }
                    }
                }
                format!(
                    "basisalg {} {{\n  type: structconst;\n  dim: {};\n  unit: [{}];\n  mul: {};\n}}",
                    self.name,
                    labels.len(),
                    unit.join(", "),
                    rules.join(",\n       ")
                )
            }
            BasisKind::Tensor(a, b) => format!("# {} = {} @ {}", self.name, a.name, b.name),
        }
    }
}

fn compositions(m: usize, d: usize, i: usize, cur: &mut Vec<u32>, out: &mut Vec<BasisElem>) {
    if m == 0 {
        if d == 0 {
            out.push(BasisElem(vec![]));
        }
        return;
    }
    if i == m - 1 {
        cur[i] = d as u32;
        out.push(BasisElem(cur.clone()));
        cur[i] = 0;
        return;
    }
    for k in (0..=d).rev() {
        cur[i] = k as u32;
        compositions(m, d - k, i + 1, cur, out);
    }
    cur[i] = 0;
}

impl fmt::Display for BasisAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_decl())
    }
}

impl UnitalAlgebra for BasisAlgebra {
    type Elem = BasisComb;

    fn field(&self) -> FieldSpec {
        self.field
    }
    fn zero(&self) -> BasisComb {
        Lin::zero(self.field)
    }
    fn one(&self) -> BasisComb {
        self.unit()
    }
    fn add(&self, a: &BasisComb, b: &BasisComb) -> BasisComb {
        a.add(b)
    }
    fn scale(&self, c: &Scalar, a: &BasisComb) -> BasisComb {
        a.scale(c)
    }
    fn mul(&self, a: &BasisComb, b: &BasisComb) -> Result<BasisComb> {
        self.expand_product(a, b)
    }
}

/// The cofinal chain of finite basis subsets `L_0 ⊆ L_1 ⊆ ...` of a basis algebra.
#[derive(Clone, Copy, Debug)]
pub struct LevelChain<'a> {
    owner: &'a BasisAlgebra,
}

impl LevelChain<'_> {
    pub fn owner(&self) -> &BasisAlgebra {
        self.owner
    }

    /// `L_p`: the whole basis when finite, monomials of degree at most `p` when graded.
    pub fn level(&self, p: usize) -> Vec<BasisElem> {
        match &self.owner.kind {
            BasisKind::Monomial { vars } => BasisAlgebra::monomials_up_to(vars.len(), p),
            _ => self.owner.basis().expect("finite basis"),
        }
    }

    /// Smallest level containing `e`.
    pub fn level_of(&self, e: &BasisElem) -> usize {
        self.owner.degree(e)
    }

    /// True when every level equals level 0.
    pub fn is_stable(&self) -> bool {
        self.owner.is_finite()
    }
}

/// Elements of `C ⊗ Free(X)`: finite sums `Σ c ⊗ P_c` keyed by basis elements of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffElem(pub BTreeMap<BasisElem, NCPolynomial>);

impl CoeffElem {
    pub fn zero() -> Self {
        CoeffElem(BTreeMap::new())
    }

    pub fn pure(c: BasisElem, p: NCPolynomial) -> Self {
        let mut out = CoeffElem::zero();
        out.add_term(c, &p);
        out
    }

    pub fn add_term(&mut self, c: BasisElem, p: &NCPolynomial) {
        if p.is_zero() {
            return;
        }
        let sum = match self.0.get(&c) {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        if sum.is_zero() {
            self.0.remove(&c);
        } else {
            self.0.insert(c, sum);
        }
    }

    pub fn coefficient(&self, c: &BasisElem, field: FieldSpec) -> NCPolynomial {
        self.0.get(c).cloned().unwrap_or_else(|| NCPolynomial::zero(field))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `C ⊗ Free(X)` as an algebra, for substituting universal families into relations.
#[derive(Clone, Copy, Debug)]
pub struct CoeffAlgebra<'a> {
    pub c: &'a BasisAlgebra,
}

impl UnitalAlgebra for CoeffAlgebra<'_> {
    type Elem = CoeffElem;

    fn field(&self) -> FieldSpec {
        self.c.field
    }
    fn zero(&self) -> CoeffElem {
        CoeffElem::zero()
    }
    fn one(&self) -> CoeffElem {
        let f = self.c.field;
        let mut out = CoeffElem::zero();
        for (e, k) in self.c.unit().iter() {
            out.add_term(e.clone(), &NCPolynomial::constant(f, k.clone()));
        }
        out
    }
    fn add(&self, a: &CoeffElem, b: &CoeffElem) -> CoeffElem {
        let mut out = a.clone();
        for (e, p) in &b.0 {
            out.add_term(e.clone(), p);
        }
        out
    }
    fn scale(&self, c: &Scalar, a: &CoeffElem) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (e, p) in &a.0 {
            out.add_term(e.clone(), &p.scale(c));
        }
        out
    }
    fn mul(&self, a: &CoeffElem, b: &CoeffElem) -> Result<CoeffElem> {
        let mut out = CoeffElem::zero();
        for (u, p) in &a.0 {
            for (v, q) in &b.0 {
                let uv = self.c.mul_basis(u, v)?;
                if uv.is_zero() {
                    continue;
                }
                let pq = p.mul(q);
                for (w, k) in uv.iter() {
                    out.add_term(w.clone(), &pq.scale(k));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{substitute, Presentation};

    #[test]
    fn diagonal_products() {
        let f = FieldSpec::Rationals;
        let k2 = BasisAlgebra::diagonal("K2", f, 2);
        let e1 = k2.elem("e1").unwrap();
        let e2 = k2.elem("e2").unwrap();
        assert!(k2.expand_product(&e1, &e2).unwrap().is_zero());
        assert_eq!(k2.expand_product(&e1, &e1).unwrap(), e1);
        assert_eq!(k2.expand_product(&k2.unit(), &e2).unwrap(), e2);
        k2.validate_structure(0).unwrap();
        assert!(k2.is_commutative());
    }

    #[test]
    fn monomial_products_and_levels() {
        let f = FieldSpec::Rationals;
        let kx = BasisAlgebra::polynomial("PolyX", f, &["x"]);
        let x2 = kx.elem("x^2").unwrap();
        let x3 = kx.elem("x^3").unwrap();
        assert_eq!(kx.expand_product(&x2, &x3).unwrap(), kx.elem("x^5").unwrap());
        let chain = kx.level_chain().unwrap();
        let l2: Vec<String> = chain.level(2).iter().map(|e| kx.label(e)).collect();
        assert_eq!(l2, vec!["1", "x", "x^2"]);
        let kxy = BasisAlgebra::polynomial("P2", f, &["x1", "x2"]);
        let l1: Vec<String> = kxy.level_chain().unwrap().level(1).iter().map(|e| kxy.label(e)).collect();
        assert_eq!(l1, vec!["1", "x1", "x2"]);
        let l2: Vec<String> = kxy.level_chain().unwrap().level(2).iter().map(|e| kxy.label(e)).collect();
        assert_eq!(l2, vec!["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]);
        assert_eq!(kxy.parse_label("x2*x1^2").unwrap(), BasisElem(vec![2, 1]));
    }

    #[test]
    fn finite_levels_stabilize() {
        let k2 = BasisAlgebra::diagonal("K2", FieldSpec::Prime(2), 2);
        let c = k2.level_chain().unwrap();
        assert_eq!(c.level(0), c.level(5));
        assert!(c.is_stable());
    }

    #[test]
    fn planted_defect_is_found() {
        let f = FieldSpec::Rationals;
        let labels = vec!["e1".to_string(), "e2".to_string()];
        let v = |a: i64, b: i64| vec![f.from_int(a), f.from_int(b)];
        // K^2 with e1*e2 changed from 0 to e2.
        let products = [((0, 0), v(1, 0)), ((0, 1), v(0, 1)), ((1, 1), v(0, 1))];
        let bad = BasisAlgebra::from_products("Bad", f, labels, &products, v(0, 0)).unwrap();
        match bad.validate_structure(0) {
            Err(Error::LawViolated { law, witness }) => {
                assert_eq!(law, "unit");
                assert_eq!(witness, "e1");
            }
            other => panic!("expected a violation, got {other:?}"),
        }
        let labels = vec!["e1".to_string(), "e2".to_string()];
        let bad = BasisAlgebra::from_products("Bad", f, labels, &products, v(1, 1)).unwrap();
        assert!(matches!(bad.validate_structure(0), Err(Error::LawViolated { .. })));
    }

    #[test]
    fn substitution_into_coefficient_tensor() {
        let f = FieldSpec::Rationals;
        let k2 = BasisAlgebra::diagonal("K2", f, 2);
        let b = Presentation::parse("B", f, "b", &["b*b - b"]).unwrap();
        let alg = CoeffAlgebra { c: &k2 };
        let e1 = k2.parse_label("e1").unwrap();
        let e2 = k2.parse_label("e2").unwrap();
        let mut h = CoeffElem::pure(e1.clone(), NCPolynomial::var(f, 0));
        h.add_term(e2.clone(), &NCPolynomial::var(f, 1));
        let out = substitute(&b.relations()[0], &[h], &alg).unwrap();
        let x = Presentation::free("X", f, &["x1", "x2"]);
        assert_eq!(out.coefficient(&e1, f), x.poly("x1*x1 - x1").unwrap());
        assert_eq!(out.coefficient(&e2, f), x.poly("x2*x2 - x2").unwrap());
    }

    #[test]
    fn gl1_expansion_in_polynomials() {
        let f = FieldSpec::Rationals;
        let kx = BasisAlgebra::polynomial("PolyX", f, &["x"]);
        let alg = CoeffAlgebra { c: &kx };
        let gl1 = Presentation::parse("GL1", f, "t,s", &["t*s - 1"]).unwrap();
        let (one, x) = (kx.parse_label("1").unwrap(), kx.parse_label("x").unwrap());
        // a0, a1, b0, b1 = 0, 1, 2, 3
        let mut t = CoeffElem::pure(one.clone(), NCPolynomial::var(f, 0));
        t.add_term(x.clone(), &NCPolynomial::var(f, 1));
        let mut s = CoeffElem::pure(one.clone(), NCPolynomial::var(f, 2));
        s.add_term(x.clone(), &NCPolynomial::var(f, 3));
        let out = substitute(&gl1.relations()[0], &[t, s], &alg).unwrap();
        let names = Presentation::free("A", f, &["a0", "a1", "b0", "b1"]);
        assert_eq!(out.coefficient(&one, f), names.poly("a0*b0 - 1").unwrap());
        assert_eq!(out.coefficient(&x, f), names.poly("a0*b1 + a1*b0").unwrap());
        assert_eq!(out.coefficient(&kx.parse_label("x^2").unwrap(), f), names.poly("a1*b1").unwrap());
    }
}
