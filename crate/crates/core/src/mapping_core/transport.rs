//! Point-level checks of the exponential law and the product decomposition.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::basis_algebra::BasisAlgebra;
use crate::error::{Error, Result};
use crate::exact_algebra::{tensor_presentation, Presentation, Scalar};

use super::points::{enumerate_morphisms, enumerate_points, EnumOptions};
use super::{build_mapping_algebra, commutativize, MappingProblem};

/// Point counts of `𝔄(B, C1 ⊗ C2)` and `𝔄(𝔄(B, C2), C1)`, a direct count of morphisms
/// `B -> C1 ⊗ C2`, and whether the coordinate transport `y⟨x⟨b,c2⟩,c1⟩ ↦ x⟨b,c1⊗c2⟩`
/// maps the right-hand points exactly onto the left-hand ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentialReport {
    pub left: usize,
    pub right: usize,
    pub oracle: usize,
    pub transported: bool,
}

impl ExponentialReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.left == self.oracle && self.transported
    }
}

pub fn transport_exponential(
    b: Arc<Presentation>,
    c1: Arc<BasisAlgebra>,
    c2: Arc<BasisAlgebra>,
    opts: &EnumOptions,
) -> Result<ExponentialReport> {
    if !c1.is_finite() || !c2.is_finite() {
        return Err(Error::Unsupported("the exponential check needs finite-dimensional coefficients".into()));
    }
    let c12 = Arc::new(BasisAlgebra::tensor(&c1, &c2)?);
    let left_alg = build_mapping_algebra(&MappingProblem::uniform(b.clone(), c12.clone(), &c12.basis()?)?)?;
    let inner = build_mapping_algebra(&MappingProblem::uniform(b.clone(), c2.clone(), &c2.basis()?)?)?;
    let outer = build_mapping_algebra(&MappingProblem::uniform(inner.presentation.clone(), c1.clone(), &c1.basis()?)?)?;

    let left: BTreeSet<Vec<Scalar>> = enumerate_points(&left_alg.presentation, opts)?.into_iter().collect();
    let right = enumerate_points(&outer.presentation, opts)?;
    let oracle = enumerate_morphisms(&b, &c12, &c12.basis()?, opts)?.len();

    let mut slot = vec![0usize; outer.presentation.gen_count()];
    for (y, (m, e1)) in outer.generator_pairs().into_iter().enumerate() {
        let (bg, e2) = &inner.generator_pairs()[m as usize];
        let x = left_alg.generator(*bg, &c12.pair(&e1, e2)).expect("full support");
        slot[y] = x as usize;
    }
    let mut moved = BTreeSet::new();
    for pt in &right {
        let mut out = vec![c1.field().zero(); pt.len()];
        for (y, v) in pt.iter().enumerate() {
            out[slot[y]] = v.clone();
        }
        moved.insert(out);
    }
    Ok(ExponentialReport { left: left.len(), right: right.len(), oracle, transported: moved == left })
}

/// Point counts of `𝔠𝔄(B1 ⊗ B2, C)` against `𝔠𝔄(B1, C)` and `𝔠𝔄(B2, C)`, and whether
/// splitting coordinates gives exactly the Cartesian product.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductReport {
    pub left: usize,
    pub right1: usize,
    pub right2: usize,
    pub product: usize,
    pub transported: bool,
}

impl ProductReport {
    pub fn holds(&self) -> bool {
        self.left == self.product && self.transported
    }
}

pub fn transport_product(
    b1: Arc<Presentation>,
    b2: Arc<Presentation>,
    c: Arc<BasisAlgebra>,
    opts: &EnumOptions,
) -> Result<ProductReport> {
    if !c.is_finite() {
        return Err(Error::Unsupported("the product check needs finite-dimensional coefficients".into()));
    }
    let l = c.basis()?;
    let b12 = Arc::new(tensor_presentation(&b1, &b2)?.presentation.as_ref().clone());
    let points = |b: Arc<Presentation>| -> Result<Vec<Vec<Scalar>>> {
        let m = build_mapping_algebra(&MappingProblem::uniform(b, c.clone(), &l)?)?;
        enumerate_points(&commutativize(&m.presentation), opts)
    };
    let left: BTreeSet<Vec<Scalar>> = points(b12)?.into_iter().collect();
    let r1 = points(b1.clone())?;
    let r2 = points(b2)?;
    let split = b1.gen_count() * l.len();
    let product: BTreeSet<Vec<Scalar>> =
        r1.iter().flat_map(|p| r2.iter().map(move |q| p.iter().chain(q).cloned().collect())).collect();
    let transported = left.iter().all(|p| p.len() == split + r2.first().map_or(0, |q| q.len())) && left == product;
    Ok(ProductReport {
        left: left.len(),
        right1: r1.len(),
        right2: r2.len(),
        product: r1.len() * r2.len(),
        transported,
    })
}
