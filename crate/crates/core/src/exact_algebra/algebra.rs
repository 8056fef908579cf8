//! Target algebras for substitution and the universal extension of generator assignments.

use super::field::{FieldSpec, Scalar};
use super::poly::NCPolynomial;
use super::word::Gen;
use crate::error::{Error, Result};

/// An associative unital algebra with exact arithmetic on some element type.
pub trait UnitalAlgebra {
    type Elem: Clone;

    fn field(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Scalar, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// The free algebra on an implicit alphabet; elements are [`NCPolynomial`]s.
#[derive(Clone, Copy, Debug)]
pub struct FreeAlgebra(pub FieldSpec);

impl UnitalAlgebra for FreeAlgebra {
    type Elem = NCPolynomial;

    fn field(&self) -> FieldSpec {
        self.0
    }
    fn zero(&self) -> NCPolynomial {
        NCPolynomial::zero(self.0)
    }
    fn one(&self) -> NCPolynomial {
        NCPolynomial::one(self.0)
    }
    fn add(&self, a: &NCPolynomial, b: &NCPolynomial) -> NCPolynomial {
        a.add(b)
    }
    fn scale(&self, c: &Scalar, a: &NCPolynomial) -> NCPolynomial {
        a.scale(c)
    }
    fn mul(&self, a: &NCPolynomial, b: &NCPolynomial) -> Result<NCPolynomial> {
        Ok(a.mul(b))
    }
}

/// The ground field viewed as an algebra; substitution into it evaluates a polynomial.
#[derive(Clone, Copy, Debug)]
pub struct ScalarAlgebra(pub FieldSpec);

impl UnitalAlgebra for ScalarAlgebra {
    type Elem = Scalar;

    fn field(&self) -> FieldSpec {
        self.0
    }
    fn zero(&self) -> Scalar {
        self.0.zero()
    }
    fn one(&self) -> Scalar {
        self.0.one()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.0.add(a, b)
    }
    fn scale(&self, c: &Scalar, a: &Scalar) -> Scalar {
        self.0.mul(c, a)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.0.mul(a, b))
    }
}

/// The opposite algebra: same elements, multiplication reversed.
pub struct Opposite<'a, A>(pub &'a A);

impl<A: UnitalAlgebra> UnitalAlgebra for Opposite<'_, A> {
    type Elem = A::Elem;

    fn field(&self) -> FieldSpec {
        self.0.field()
    }
    fn zero(&self) -> A::Elem {
        self.0.zero()
    }
    fn one(&self) -> A::Elem {
        self.0.one()
    }
    fn add(&self, a: &A::Elem, b: &A::Elem) -> A::Elem {
        self.0.add(a, b)
    }
    fn scale(&self, c: &Scalar, a: &A::Elem) -> A::Elem {
        self.0.scale(c, a)
    }
    fn mul(&self, a: &A::Elem, b: &A::Elem) -> Result<A::Elem> {
        self.0.mul(b, a)
    }
}

/// Applies the unique algebra morphism extending `images[g]` for each generator `g`.
pub fn substitute<A: UnitalAlgebra>(p: &NCPolynomial, images: &[A::Elem], target: &A) -> Result<A::Elem> {
    substitute_with(p, |g| images.get(g as usize), target)
}

/// As [`substitute`], looking generator images up through a closure.
pub fn substitute_with<'e, A, F>(p: &NCPolynomial, lookup: F, target: &A) -> Result<A::Elem>
where
    A: UnitalAlgebra,
    A::Elem: 'e,
    F: Fn(Gen) -> Option<&'e A::Elem>,
{
    let mut acc = target.zero();
    for (w, c) in p.iter() {
        let mut prod = target.one();
        for g in w.letters() {
            let img = lookup(*g).ok_or_else(|| Error::MissingAssignment(format!("#{g}")))?;
            prod = target.mul(&prod, img)?;
        }
        acc = target.add(&acc, &target.scale(c, &prod));
    }
    Ok(acc)
}

/// Anti-multiplicative extension: words are evaluated right to left.
pub fn substitute_anti<A: UnitalAlgebra>(p: &NCPolynomial, images: &[A::Elem], target: &A) -> Result<A::Elem> {
    substitute(p, images, &Opposite(target))
}

/// Evaluates a polynomial at a scalar point.
pub fn evaluate(p: &NCPolynomial, point: &[Scalar]) -> Result<Scalar> {
    substitute(p, point, &ScalarAlgebra(p.field()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_maps_to_unit() {
        let f = FieldSpec::Rationals;
        let one = NCPolynomial::one(f);
        let r = substitute(&one, &[], &FreeAlgebra(f)).unwrap();
        assert_eq!(r, NCPolynomial::one(f));
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let f = FieldSpec::Rationals;
        let p = NCPolynomial::var(f, 3);
        assert!(matches!(evaluate(&p, &[f.one()]), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn anti_substitution_reverses_words() {
        let f = FieldSpec::Rationals;
        let xy = NCPolynomial::word(f, &[0, 1]);
        let imgs = vec![NCPolynomial::var(f, 0), NCPolynomial::var(f, 1)];
        let r = substitute_anti(&xy, &imgs, &FreeAlgebra(f)).unwrap();
        assert_eq!(r, NCPolynomial::word(f, &[1, 0]));
    }
}
