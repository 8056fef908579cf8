use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::field::{FieldSpec, Scalar};

/// A finite formal linear combination of keys with nonzero scalar coefficients.
///
/// Used for polynomials (keys are words), basis combinations (keys are basis
/// elements) and their tensor products (keys are tuples).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin<K: Ord> {
    field: FieldSpec,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero(field: FieldSpec) -> Self {
        Lin { field, terms: BTreeMap::new() }
    }

    pub fn term(field: FieldSpec, key: K, coeff: Scalar) -> Self {
        let mut out = Lin::zero(field);
        out.add_term(key, coeff);
        out
    }

    pub fn basis(field: FieldSpec, key: K) -> Self {
        Lin::term(field, key, field.one())
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (K, Scalar)>) -> Self {
        let mut out = Lin::zero(field);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<K, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.terms.keys()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Largest key with its coefficient.
    pub fn leading(&self) -> Option<(&K, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn pop_leading(&mut self) -> Option<(K, Scalar)> {
        self.terms.pop_last()
    }

    pub fn add_term(&mut self, key: K, coeff: Scalar) {
        let f = self.field;
        if f.is_zero(&coeff) {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &coeff);
                if f.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Lin<K>, c: &Scalar) {
        self.check_field(other);
        let f = self.field;
        if f.is_zero(c) {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), f.mul(v, c));
        }
    }

    pub fn add(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.one());
        out
    }

    pub fn sub(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.from_int(-1));
        out
    }

    pub fn neg(&self) -> Lin<K> {
        self.scale(&self.field.from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Lin<K> {
        let f = self.field;
        if f.is_zero(c) {
            return Lin::zero(f);
        }
        Lin { field: f, terms: self.terms.iter().map(|(k, v)| (k.clone(), f.mul(v, c))).collect() }
    }

    /// Relabels keys, merging coefficients of keys that collide.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Lin<K2> {
        let mut out = Lin::zero(self.field);
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Divides by the leading coefficient. The zero combination is returned unchanged.
    pub fn monic(&self) -> Lin<K> {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    fn check_field(&self, other: &Lin<K>) {
        assert_eq!(self.field, other.field, "linear combinations over different fields");
    }
}
