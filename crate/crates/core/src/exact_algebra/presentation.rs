//! Finitely presented algebras and their tensor products.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::field::FieldSpec;
use super::poly::{render_poly, NCPolynomial};
use super::word::{Gen, Word};
use crate::error::{Error, Result};

/// An algebra given by an ordered generator list and finitely many relations.
///
/// Equality ignores the display name.
#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    field: FieldSpec,
    generators: Vec<String>,
    index: HashMap<String, Gen>,
    relations: Vec<NCPolynomial>,
    commutative: bool,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        generators: Vec<String>,
        relations: Vec<NCPolynomial>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.clone(), i as Gen).is_some() {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relations {
            if r.field() != field {
                return Err(Error::FieldMismatch(r.field().to_string(), field.to_string()));
            }
            if let Some(g) = r.max_gen() {
                if g as usize >= generators.len() {
                    return Err(Error::UnknownGenerator(format!("#{g}")));
                }
            }
        }
        let relations: Vec<_> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let mut p = Presentation { name: name.into(), field, generators, index, relations, commutative: false };
        p.commutative = p.has_all_commutators();
        Ok(p)
    }

    /// Parses generator names and relation strings, e.g. `("t,s", ["t*s - 1"])`.
    pub fn parse(name: &str, field: FieldSpec, gens: &str, rels: &[&str]) -> Result<Self> {
        let generators: Vec<String> = gens.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        let relations =
            rels.iter().map(|r| crate::syntax::parse_poly_in(r, &generators, field)).collect::<Result<Vec<_>>>()?;
        Presentation::new(name, field, generators, relations)
    }

    pub fn free(name: impl Into<String>, field: FieldSpec, gens: &[&str]) -> Self {
        Presentation::new(name, field, gens.iter().map(|s| s.to_string()).collect(), vec![])
            .expect("distinct generator names")
    }

    /// The ground field as a presentation with no generators.
    pub fn base_field(field: FieldSpec) -> Self {
        Presentation::new("K", field, vec![], vec![]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Presentation { name: name.into(), ..self.clone() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<Gen> {
        self.index.get(name).copied()
    }

    pub fn gen_name(&self, g: Gen) -> &str {
        &self.generators[g as usize]
    }

    pub fn relations(&self) -> &[NCPolynomial] {
        &self.relations
    }

    /// True iff every generator commutator occurs among the relations (up to a scalar).
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    pub fn var(&self, g: Gen) -> NCPolynomial {
        NCPolynomial::var(self.field, g)
    }

    /// Looks a generator up by name and returns it as a polynomial.
    pub fn var_named(&self, name: &str) -> Result<NCPolynomial> {
        self.gen_index(name).map(|g| self.var(g)).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn poly(&self, text: &str) -> Result<NCPolynomial> {
        crate::syntax::parse_poly_in(text, &self.generators, self.field)
    }

    pub fn render_poly(&self, p: &NCPolynomial) -> String {
        render_poly(p, &self.generators)
    }

    /// `g_j * g_i - g_i * g_j` for `i < j`, so the leading word is `g_j g_i`.
    pub fn commutator(&self, i: Gen, j: Gen) -> NCPolynomial {
        let f = self.field;
        NCPolynomial::word(f, &[j, i]).sub(&NCPolynomial::word(f, &[i, j]))
    }

    fn has_all_commutators(&self) -> bool {
        let n = self.gen_count() as Gen;
        if n < 2 {
            return true;
        }
        let have: BTreeSet<NCPolynomial> = self.relations.iter().map(|r| r.monic()).collect();
        (0..n).all(|i| (i + 1..n).all(|j| have.contains(&self.commutator(i, j).monic())))
    }

    /// Appends relations, skipping zeros and scalar multiples of relations already present.
    pub fn with_relations(&self, extra: impl IntoIterator<Item = NCPolynomial>) -> Result<Self> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        Presentation::new(self.name.clone(), self.field, self.generators.clone(), dedup_relations(rels))
    }

    /// Removes zero relations and relations that are scalar multiples of earlier ones.
    pub fn deduplicated(&self) -> Self {
        Presentation::new(
            self.name.clone(),
            self.field,
            self.generators.clone(),
            dedup_relations(self.relations.clone()),
        )
        .expect("same alphabet")
    }

    /// DSL rendering: `presentation NAME { gens: ...; rels: ...; }`.
    pub fn render(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| self.render_poly(r)).collect();
        format!(
            "presentation {} {{\n  gens: {};\n  rels: {};\n}}",
            self.name,
            self.generators.join(", "),
            rels.join(",\n        ")
        )
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn dedup_relations(rels: Vec<NCPolynomial>) -> Vec<NCPolynomial> {
    let mut seen = BTreeSet::new();
    rels.into_iter().filter(|r| !r.is_zero() && seen.insert(r.monic())).collect()
}

/// A tensor product of presentations remembering where each factor's generators sit.
#[derive(Clone, Debug)]
pub struct TensorPresentation {
    pub presentation: Arc<Presentation>,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl TensorPresentation {
    pub fn factor_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn factor_of(&self, g: Gen) -> usize {
        self.factor_table()[g as usize]
    }

    /// Moves a polynomial over factor `k` into the tensor product's alphabet.
    pub fn embed(&self, k: usize, p: &NCPolynomial) -> NCPolynomial {
        let off = self.offsets[k] as Gen;
        p.map_keys(|w| Word(w.letters().iter().map(|g| g + off).collect()))
    }

    /// Index map from factor `k`'s generators to tensor generators.
    pub fn embedding(&self, k: usize) -> Vec<Gen> {
        (0..self.sizes[k]).map(|i| (self.offsets[k] + i) as Gen).collect()
    }

    /// Sorts the letters of every word by factor (stable within a factor). This is the
    /// normal form modulo the cross commutators.
    pub fn canonical(&self, p: &NCPolynomial) -> NCPolynomial {
        let fac = self.factor_table();
        p.map_keys(|w| {
            let mut v = w.letters().to_vec();
            v.sort_by_key(|g| fac[*g as usize]);
            Word(v)
        })
    }

    /// Splits a word into its per-factor subwords.
    pub fn split(&self, w: &Word) -> Vec<Word> {
        let fac = self.factor_table();
        let mut parts = vec![Vec::new(); self.factor_count()];
        for g in w.letters() {
            let k = fac[*g as usize];
            parts[k].push(*g - self.offsets[k] as Gen);
        }
        parts.into_iter().map(Word).collect()
    }

    fn factor_table(&self) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.presentation.gen_count());
        for (k, s) in self.sizes.iter().enumerate() {
            t.extend(std::iter::repeat_n(k, *s));
        }
        t
    }
}

/// Tensor product of several presentations: generators are concatenated (names that
/// occur in more than one factor get a `.k` suffix, `k` the 1-based factor index),
/// relations are the factors' relations plus all cross commutators.
pub fn tensor_many(parts: &[&Presentation]) -> Result<TensorPresentation> {
    let field = parts.first().map(|p| p.field).unwrap_or(FieldSpec::Rationals);
    let mut count: HashMap<&str, usize> = HashMap::new();
    for p in parts {
        if p.field != field {
            return Err(Error::FieldMismatch(p.field.to_string(), field.to_string()));
        }
        for g in &p.generators {
            *count.entry(g.as_str()).or_default() += 1;
        }
    }
    let mut generators = Vec::new();
    let mut offsets = Vec::new();
    let mut sizes = Vec::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for (k, p) in parts.iter().enumerate() {
        offsets.push(generators.len());
        sizes.push(p.gen_count());
        for g in &p.generators {
            let mut name = if count[g.as_str()] > 1 { format!("{g}.{}", k + 1) } else { g.clone() };
            while taken.contains(&name) || (count.contains_key(name.as_str()) && name != *g) {
                name.push_str(&format!(".{}", k + 1));
            }
            taken.insert(name.clone());
            generators.push(name);
        }
    }
    let mut relations = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let off = offsets[k] as Gen;
        for r in &p.relations {
            relations.push(r.map_keys(|w| Word(w.letters().iter().map(|g| g + off).collect())));
        }
    }
    for k in 0..parts.len() {
        for l in k + 1..parts.len() {
            for i in 0..sizes[k] {
                for j in 0..sizes[l] {
                    let gi = (offsets[k] + i) as Gen;
                    let gj = (offsets[l] + j) as Gen;
                    relations.push(NCPolynomial::word(field, &[gj, gi]).sub(&NCPolynomial::word(field, &[gi, gj])));
                }
            }
        }
    }
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("_x_");
    let presentation = Arc::new(Presentation::new(name, field, generators, relations)?);
    Ok(TensorPresentation { presentation, offsets, sizes })
}

pub fn tensor_presentation(p1: &Presentation, p2: &Presentation) -> Result<TensorPresentation> {
    tensor_many(&[p1, p2])
}
