//! Noncommutative polynomials: elements of free algebras.

use super::field::{FieldSpec, Scalar};
use super::lin::Lin;
use super::word::{Gen, Word};
use crate::error::{Error, Result};

/// Element of a free associative algebra over a fixed field.
pub type NCPolynomial = Lin<Word>;

impl Lin<Word> {
    pub fn constant(field: FieldSpec, c: Scalar) -> Self {
        Lin::term(field, Word::unit(), c)
    }

    pub fn one(field: FieldSpec) -> Self {
        Lin::basis(field, Word::unit())
    }

    pub fn var(field: FieldSpec, g: Gen) -> Self {
        Lin::basis(field, Word::letter(g))
    }

    pub fn word(field: FieldSpec, letters: &[Gen]) -> Self {
        Lin::basis(field, Word(letters.to_vec()))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.leading().map(|(w, _)| w.len()).unwrap_or(0)
    }

    pub fn max_gen(&self) -> Option<Gen> {
        self.keys().flat_map(|w| w.letters().iter().copied()).max()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.len() {
            0 => Some(self.field().zero()),
            1 => {
                let (w, c) = self.leading().unwrap();
                w.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Product in the free algebra (concatenation of words).
    pub fn mul(&self, other: &NCPolynomial) -> NCPolynomial {
        assert_eq!(self.field(), other.field(), "polynomials over different fields");
        let f = self.field();
        let mut out = Lin::zero(f);
        for (u, a) in self.iter() {
            for (v, b) in other.iter() {
                out.add_term(u.concat(v), f.mul(a, b));
            }
        }
        out
    }

    /// Applies the order-reversing involution of the free algebra.
    pub fn reversed(&self) -> NCPolynomial {
        self.map_keys(|w| w.reversed())
    }

    pub fn left_right_mul(&self, left: &[Gen], right: &[Gen]) -> NCPolynomial {
        self.map_keys(|w| {
            let mut v = Vec::with_capacity(left.len() + w.len() + right.len());
            v.extend_from_slice(left);
            v.extend_from_slice(w.letters());
            v.extend_from_slice(right);
            Word(v)
        })
    }

    pub fn relabel(&self, map: &[Gen]) -> NCPolynomial {
        self.map_keys(|w| Word(w.letters().iter().map(|g| map[*g as usize]).collect()))
    }
}

/// Checked product: both operands must live over the same field and the same alphabet size.
pub fn nc_mul(p: &NCPolynomial, q: &NCPolynomial) -> Result<NCPolynomial> {
    if p.field() != q.field() {
        return Err(Error::FieldMismatch(p.field().to_string(), q.field().to_string()));
    }
    Ok(p.mul(q))
}

/// Like [`nc_mul`] but also checks that every letter belongs to an alphabet of `alphabet_len`.
pub fn nc_mul_in(p: &NCPolynomial, q: &NCPolynomial, alphabet_len: usize) -> Result<NCPolynomial> {
    for x in [p, q] {
        if x.max_gen().is_some_and(|g| g as usize >= alphabet_len) {
            return Err(Error::AlphabetMismatch);
        }
    }
    nc_mul(p, q)
}

/// Text form with the leading term first: `2*x*y - y + 1`.
pub fn render_poly(p: &NCPolynomial, names: &[String]) -> String {
    render_terms(p.field(), p.iter().rev(), |w| {
        w.letters().iter().map(|g| names.get(*g as usize).cloned().unwrap_or_else(|| format!("?{g}"))).collect()
    })
}

/// Shared renderer for linear combinations whose keys render as a list of factors
/// (an empty factor list is the unit).
pub fn render_terms<'a, K: 'a>(
    field: FieldSpec,
    terms: impl Iterator<Item = (&'a K, &'a Scalar)>,
    factors: impl Fn(&K) -> Vec<String>,
) -> String {
    let mut out = String::new();
    for (i, (k, c)) in terms.enumerate() {
        let negative = field.is_negative_display(c);
        let magnitude = if negative { field.display(&field.neg(c)) } else { field.display(c) };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let fs = factors(k);
        if fs.is_empty() {
            out.push_str(&magnitude);
        } else {
            if magnitude != "1" {
                out.push_str(&magnitude);
                out.push('*');
            }
            out.push_str(&fs.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
