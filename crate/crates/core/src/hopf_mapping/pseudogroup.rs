//! Pseudogroups `(B, (u_kl))` with antipode `T`, and bounded validation of their axioms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_algebra::{
    evaluate, tensor_presentation, verify_morphism, EqualityOracle, FieldSpec, Gen, GeneratorImageMap, NCPolynomial,
    Presentation, Scalar, Verdict,
};

use super::{Check, HopfData};

/// A matrix entry: a generator of `B` or a scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Gen(Gen),
    Const(Scalar),
}

#[derive(Clone, Debug)]
pub struct Pseudogroup {
    pub b: Arc<Presentation>,
    pub n: usize,
    /// Row-major `n × n` entries.
    pub cells: Vec<Cell>,
    /// `T(g)` for every generator `g` of `B`.
    pub antipode: Vec<NCPolynomial>,
}

impl Pseudogroup {
    pub fn new(b: Arc<Presentation>, n: usize, cells: Vec<Cell>, antipode: Vec<NCPolynomial>) -> Result<Self> {
        if n == 0 || cells.len() != n * n {
            return Err(Error::Invalid(format!("expected {} entries for size {n}", n * n)));
        }
        if antipode.len() != b.gen_count() {
            return Err(Error::Invalid(format!("expected {} antipode images", b.gen_count())));
        }
        for c in &cells {
            if let Cell::Gen(g) = c {
                if *g as usize >= b.gen_count() {
                    return Err(Error::UnknownGenerator(format!("#{g}")));
                }
            }
        }
        Ok(Pseudogroup { b, n, cells, antipode })
    }

    pub fn field(&self) -> FieldSpec {
        self.b.field()
    }

    pub fn cell(&self, k: usize, l: usize) -> &Cell {
        &self.cells[k * self.n + l]
    }

    pub fn cell_poly(&self, k: usize, l: usize) -> NCPolynomial {
        match self.cell(k, l) {
            Cell::Gen(g) => self.b.var(*g),
            Cell::Const(c) => NCPolynomial::constant(self.field(), c.clone()),
        }
    }

    /// First cell holding generator `g`, in row-major order.
    pub fn position(&self, g: Gen) -> Option<(usize, usize)> {
        self.cells.iter().position(|c| *c == Cell::Gen(g)).map(|i| (i / self.n, i % self.n))
    }

    /// Generators that appear in no cell.
    pub fn missing_generators(&self) -> Vec<String> {
        (0..self.b.gen_count() as Gen)
            .filter(|g| self.position(*g).is_none())
            .map(|g| self.b.gen_name(g).to_string())
            .collect()
    }

    /// `Σ_r u_kr ⊗ u_rl` as a list of pure tensors.
    pub fn matrix_comul(&self, k: usize, l: usize) -> Vec<(NCPolynomial, NCPolynomial)> {
        (0..self.n)
            .map(|r| (self.cell_poly(k, r), self.cell_poly(r, l)))
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .collect()
    }

    /// Generator-level data `Δ(u_kl) = Σ u_kr ⊗ u_rl`, `ε(u_kl) = δ_kl`, and `T`.
    pub fn hopf_data(&self) -> Result<HopfData> {
        let missing = self.missing_generators();
        if !missing.is_empty() {
            return Err(Error::Invalid(format!("generators not among the entries: {}", missing.join(", "))));
        }
        let f = self.field();
        let mut comul = Vec::new();
        let mut counit = Vec::new();
        for g in 0..self.b.gen_count() as Gen {
            let (k, l) = self.position(g).expect("checked above");
            comul.push(self.matrix_comul(k, l));
            counit.push(if k == l { f.one() } else { f.zero() });
        }
        Ok(HopfData { comul, counit, antipode: self.antipode.clone() })
    }

    fn antipode_map(&self) -> Result<GeneratorImageMap> {
        Ok(GeneratorImageMap::new(self.b.clone(), self.b.clone(), self.antipode.clone())?.anti())
    }

    /// The point `u_kl ↦ δ_kl` of `B`, if it satisfies the relations.
    pub fn counit_point(&self) -> Result<Vec<Scalar>> {
        let data = self.hopf_data()?;
        for r in self.b.relations() {
            if !self.field().is_zero(&evaluate(r, &data.counit)?) {
                return Err(Error::InvalidPoint(self.b.render_poly(r)));
            }
        }
        Ok(data.counit)
    }

    /// Checks condition (i) syntactically, (ii) as a morphism `B -> B ⊗ B` plus agreement
    /// on every cell, and (iii) as anti-multiplicativity, `T² = id` on generators and the
    /// two Kronecker sums, all at `bound`.
    pub fn validate(&self, bound: usize) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let missing = self.missing_generators();
        let generated = if missing.is_empty() { Verdict::Verified } else { Verdict::Refuted };
        checks.push(Check::new("generated by entries", generated, (!missing.is_empty()).then(|| missing.join(", "))));
        if !missing.is_empty() {
            return Ok(checks);
        }
        let f = self.field();
        let data = self.hopf_data()?;

        let counit = self.counit_point();
        let counit_ok = counit.is_ok()
            && self.cells.iter().enumerate().all(|(i, c)| match c {
                Cell::Const(v) => *v == if i / self.n == i % self.n { f.one() } else { f.zero() },
                Cell::Gen(_) => true,
            });
        checks.push(Check::new(
            "counit is a character",
            if counit_ok { Verdict::Verified } else { Verdict::Refuted },
            counit.as_ref().err().map(|e| e.to_string()),
        ));

        let bb = tensor_presentation(&self.b, &self.b)?;
        let pure = |pairs: &[(NCPolynomial, NCPolynomial)]| {
            let mut out = NCPolynomial::zero(f);
            for (a, b) in pairs {
                out = out.add(&bb.embed(0, a).mul(&bb.embed(1, b)));
            }
            out
        };
        let images: Vec<NCPolynomial> = data.comul.iter().map(|p| pure(p)).collect();
        let delta = GeneratorImageMap::new(self.b.clone(), bb.presentation.clone(), images.clone())?;
        let rep = verify_morphism(&delta, bound)?;
        checks.push(Check::new(
            "comultiplication respects relations",
            rep.verdict,
            rep.witness.map(|(i, r)| {
                format!("{} -> {}", self.b.render_poly(&self.b.relations()[i]), bb.presentation.render_poly(&r))
            }),
        ));
        let mut oracle = EqualityOracle::new(bb.presentation.clone(), bound)?;
        let mut verdict = Verdict::Verified;
        let mut witness = None;
        for k in 0..self.n {
            for l in 0..self.n {
                let want = match self.cell(k, l) {
                    Cell::Gen(g) => images[*g as usize].clone(),
                    Cell::Const(c) => NCPolynomial::constant(f, c.clone()),
                };
                let got = pure(&self.matrix_comul(k, l));
                let v = if bb.canonical(&want) == bb.canonical(&got) {
                    Verdict::Verified
                } else {
                    oracle.decide_equal(&want, &got)?
                };
                if v != Verdict::Verified && witness.is_none() {
                    witness = Some(format!("entry ({}, {})", k + 1, l + 1));
                }
                verdict = verdict.and(v);
            }
        }
        checks.push(Check::new("comultiplication agrees on every entry", verdict, witness));

        let t = self.antipode_map()?;
        let rep = verify_morphism(&t, bound)?;
        checks.push(Check::new(
            "antipode is anti-multiplicative",
            rep.verdict,
            rep.witness
                .map(|(i, r)| format!("{} -> {}", self.b.render_poly(&self.b.relations()[i]), self.b.render_poly(&r))),
        ));

        let mut oracle = EqualityOracle::new(self.b.clone(), bound)?;
        if let Ok(p) = counit {
            oracle.add_witness(p)?;
        }
        let mut verdict = Verdict::Verified;
        let mut witness = None;
        for g in 0..self.b.gen_count() as Gen {
            let tt = t.apply(&t.images[g as usize])?;
            let v = oracle.decide_equal(&tt, &self.b.var(g))?;
            if v != Verdict::Verified && witness.is_none() {
                witness = Some(self.b.gen_name(g).to_string());
            }
            verdict = verdict.and(v);
        }
        checks.push(Check::new("antipode is an involution", verdict, witness));

        let mut verdict = Verdict::Verified;
        let mut witness = None;
        for k in 0..self.n {
            for l in 0..self.n {
                let delta = if k == l { NCPolynomial::one(f) } else { NCPolynomial::zero(f) };
                let mut left = NCPolynomial::zero(f);
                let mut right = NCPolynomial::zero(f);
                for r in 0..self.n {
                    left = left.add(&t.apply(&self.cell_poly(k, r))?.mul(&self.cell_poly(r, l)));
                    right = right.add(&self.cell_poly(k, r).mul(&t.apply(&self.cell_poly(r, l))?));
                }
                for (side, sum) in [("left", &left), ("right", &right)] {
                    let v = oracle.decide_equal(sum, &delta)?;
                    if v != Verdict::Verified && witness.is_none() {
                        witness = Some(format!("{side} sum at ({}, {})", k + 1, l + 1));
                    }
                    verdict = verdict.and(v);
                }
            }
        }
        checks.push(Check::new("antipode sums are the Kronecker delta", verdict, witness));
        Ok(checks)
    }
}

/// `GL₁` as `diag(t, s)` with `ts = st = 1` and `T: t ↔ s`.
pub fn gl1(field: FieldSpec) -> Pseudogroup {
    let b = Arc::new(Presentation::parse("GL1", field, "t,s", &["t*s - 1", "s*t - 1"]).expect("valid"));
    let z = Cell::Const(field.zero());
    let cells = vec![Cell::Gen(0), z.clone(), z, Cell::Gen(1)];
    let antipode = vec![b.var(1), b.var(0)];
    Pseudogroup::new(b, 2, cells, antipode).expect("valid")
}

/// `SL₂` with entries `a, b; c, d`, commuting, `ad - bc = 1`.
pub fn sl2(field: FieldSpec) -> Pseudogroup {
    let rels = ["b*a - a*b", "c*a - a*c", "d*a - a*d", "c*b - b*c", "d*b - b*d", "d*c - c*d", "a*d - b*c - 1"];
    let b = Arc::new(Presentation::parse("SL2", field, "a,b,c,d", &rels).expect("valid"));
    let cells = (0..4).map(Cell::Gen).collect();
    let antipode = vec![b.var(3), b.var(1).neg(), b.var(2).neg(), b.var(0)];
    Pseudogroup::new(b, 2, cells, antipode).expect("valid")
}
