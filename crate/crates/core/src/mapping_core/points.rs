//! Exhaustive point and morphism enumeration over prime fields.

use crate::basis_algebra::{BasisAlgebra, BasisComb, BasisElem};
use crate::error::{Error, Result};
use crate::exact_algebra::{substitute, FieldSpec, Lin, NCPolynomial, Presentation, Scalar};
use crate::pro_tower::TowerPoint;

use super::{MappingAlgebra, MappingTower};

/// Default bound on the size of the search space `q^n`.
pub const DEFAULT_GUARD: f64 = 1e7;

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub guard: f64,
    /// Number of threads; the search is split on the value of the first unknown.
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { guard: DEFAULT_GUARD, workers: 1 }
    }
}

fn modulus(field: FieldSpec) -> Result<u64> {
    match field {
        FieldSpec::Prime(p) => Ok(p),
        FieldSpec::Rationals => Err(Error::InfiniteField),
    }
}

fn check_guard(q: u64, n: usize, guard: f64) -> Result<()> {
    let size = (q as f64).powi(n as i32);
    if size > guard {
        return Err(Error::GuardExceeded { size, limit: guard });
    }
    Ok(())
}

/// A relation flattened to residues for fast evaluation.
struct Compiled {
    terms: Vec<(u64, Vec<u32>)>,
}

impl Compiled {
    fn new(p: &NCPolynomial) -> Self {
        let terms = p
            .iter()
            .map(|(w, c)| match c {
                Scalar::Modular(v) => (*v, w.letters().to_vec()),
                Scalar::Rational(_) => unreachable!("prime field checked"),
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, x: &[u64], q: u64) -> u64 {
        let mut acc = 0u64;
        for (c, w) in &self.terms {
            let mut t = *c;
            for g in w {
                t = t * x[*g as usize] % q;
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % q;
        }
        acc
    }
}

struct Search<'a> {
    q: u64,
    n: usize,
    rels: &'a [Compiled],
    /// Relations whose highest generator is `k`, checked right after `k` is assigned.
    ready: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&self, k: usize, x: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == self.n {
            out.push(x.clone());
            return;
        }
        for v in 0..self.q {
            x[k] = v;
            if self.ready[k].iter().all(|&r| self.rels[r].eval(x, self.q) == 0) {
                self.run(k + 1, x, out);
            }
        }
        x[k] = 0;
    }

    fn run_first(&self, v: u64) -> Vec<Vec<u64>> {
        let mut x = vec![0u64; self.n];
        let mut out = Vec::new();
        x[0] = v;
        if self.ready[0].iter().all(|&r| self.rels[r].eval(&x, self.q) == 0) {
            self.run(1, &mut x, &mut out);
        }
        out
    }
}

/// All points of `p` over its (prime) field, in lexicographic order of coordinates.
pub fn enumerate_points(p: &Presentation, opts: &EnumOptions) -> Result<Vec<Vec<Scalar>>> {
    let q = modulus(p.field())?;
    let n = p.gen_count();
    check_guard(q, n, opts.guard)?;
    let rels: Vec<Compiled> = p.relations().iter().map(Compiled::new).collect();
    let mut ready = vec![Vec::new(); n];
    for (i, r) in p.relations().iter().enumerate() {
        match r.max_gen() {
            Some(g) => ready[g as usize].push(i),
            None => return Ok(Vec::new()),
        }
    }
    let search = Search { q, n, rels: &rels, ready };
    let raw: Vec<Vec<u64>> = if n == 0 {
        vec![vec![]]
    } else if opts.workers <= 1 {
        let mut out = Vec::new();
        search.run(0, &mut vec![0; n], &mut out);
        out
    } else {
        let workers = opts.workers.min(q as usize);
        let mut parts: Vec<(u64, Vec<Vec<u64>>)> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let search = &search;
                    s.spawn(move || {
                        (w as u64..q).step_by(workers).map(|v| (v, search.run_first(v))).collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        });
        parts.sort_by_key(|(v, _)| *v);
        parts.into_iter().flat_map(|(_, pts)| pts).collect()
    };
    Ok(raw.into_iter().map(|x| x.into_iter().map(Scalar::Modular).collect()).collect())
}

/// All algebra morphisms `B -> C` whose generator images are supported on `l`, found by
/// evaluating the relations of `B` directly in `C`. Ordered generator-major and, within
/// a generator, lexicographically by the coefficients along `l`.
pub fn enumerate_morphisms(
    b: &Presentation,
    c: &BasisAlgebra,
    l: &[BasisElem],
    opts: &EnumOptions,
) -> Result<Vec<Vec<BasisComb>>> {
    let f = c.field();
    let q = modulus(f)?;
    if b.field() != f {
        return Err(Error::FieldMismatch(b.field().to_string(), f.to_string()));
    }
    let mut l = l.to_vec();
    c.sort_elems(&mut l);
    l.dedup();
    let n = b.gen_count();
    check_guard(q, n * l.len(), opts.guard)?;
    let mut candidates = Vec::new();
    let mut coeffs = vec![0u64; l.len()];
    loop {
        candidates.push(Lin::from_terms(f, l.iter().cloned().zip(coeffs.iter().map(|&v| Scalar::Modular(v)))));
        let mut i = l.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
        }
        if coeffs.iter().all(|&v| v == 0) {
            break;
        }
    }
    let mut ready = vec![Vec::new(); n];
    for r in b.relations() {
        match r.max_gen() {
            Some(g) => ready[g as usize].push(r),
            None => {
                if !substitute(r, &[], c)?.is_zero() {
                    return Ok(Vec::new());
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut images: Vec<BasisComb> = Vec::with_capacity(n);
    morphism_search(c, &candidates, &ready, &mut images, &mut out)?;
    Ok(out)
}

fn morphism_search(
    c: &BasisAlgebra,
    candidates: &[BasisComb],
    ready: &[Vec<&NCPolynomial>],
    images: &mut Vec<BasisComb>,
    out: &mut Vec<Vec<BasisComb>>,
) -> Result<()> {
    let k = images.len();
    if k == ready.len() {
        out.push(images.clone());
        return Ok(());
    }
    for cand in candidates {
        images.push(cand.clone());
        let mut ok = true;
        for r in &ready[k] {
            if !substitute(r, images, c)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            morphism_search(c, candidates, ready, images, out)?;
        }
        images.pop();
    }
    Ok(())
}

/// One side of the correspondence between tower points and morphisms `B -> C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Correspondent {
    Point(TowerPoint),
    Morphism(Vec<BasisComb>),
}

/// Converts a point to its morphism or a morphism to its point, whichever is given.
pub fn point_morphism_bijection(mt: &MappingTower, datum: &Correspondent) -> Result<Correspondent> {
    match datum {
        Correspondent::Point(p) => {
            p.validate(&mt.tower)?;
            Ok(Correspondent::Morphism(point_to_morphism(mt.level(p.level)?, &p.assignment)?))
        }
        Correspondent::Morphism(m) => Ok(Correspondent::Point(morphism_to_point(mt, m)?)),
    }
}

/// The morphism `b ↦ Σ_c point(x⟨b,c⟩)·c` of a point of the mapping algebra.
pub fn point_to_morphism(ma: &MappingAlgebra, point: &[Scalar]) -> Result<Vec<BasisComb>> {
    let pres = &ma.presentation;
    if point.len() != pres.gen_count() {
        return Err(Error::InvalidPoint(format!("expected {} coordinates", pres.gen_count())));
    }
    for r in pres.relations() {
        if !pres.field().is_zero(&crate::exact_algebra::evaluate(r, point)?) {
            return Err(Error::InvalidPoint(pres.render_poly(r)));
        }
    }
    let f = pres.field();
    let mut out = vec![Lin::zero(f); ma.problem.b.gen_count()];
    for (g, (b, c)) in ma.generator_pairs().into_iter().enumerate() {
        out[b as usize].add_term(c, point[g].clone());
    }
    Ok(out)
}

/// The point at the smallest level containing all supports, `x⟨b,c⟩ ↦ coefficient of c in e(b)`.
pub fn morphism_to_point(mt: &MappingTower, images: &[BasisComb]) -> Result<TowerPoint> {
    let level = mt.level_for(images.iter().flat_map(|e| e.keys().cloned()));
    let ma = mt.level(level)?;
    if images.len() != ma.problem.b.gen_count() {
        return Err(Error::InvalidPoint(format!("expected {} images", ma.problem.b.gen_count())));
    }
    let assignment = ma.generator_pairs().iter().map(|(b, c)| images[*b as usize].coeff(c)).collect();
    let point = TowerPoint { level, assignment };
    point.validate(&mt.tower)?;
    Ok(point)
}
