//! Degree-truncated two-sided Gröbner bases in free algebras (deglex order).

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use super::field::FieldSpec;
use super::poly::NCPolynomial;
use super::presentation::Presentation;
use super::word::{Gen, Word};
use crate::error::{Error, Result};

/// Default bound on overlap degrees processed during completion.
pub const DEFAULT_DEGREE_BOUND: usize = 8;

const MAX_RULES: usize = 6000;

#[derive(Clone, Debug)]
struct Rule {
    lead: Vec<Gen>,
    poly: NCPolynomial,
    alive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Overlap {
    left: usize,
    right: usize,
    shared: usize,
}

/// A rewriting system that is complete for all ambiguities up to its current bound.
///
/// Completion is resumable: overlaps above the bound are kept aside and processed by
/// [`GroebnerBasis::extend_to`].
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: FieldSpec,
    rules: Vec<Rule>,
    lookup: HashMap<Vec<Gen>, usize>,
    lead_lengths: BTreeSet<usize>,
    deferred: Vec<(usize, Overlap)>,
    bound: usize,
    overflow: bool,
}

/// Result of a bounded normal-form computation.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub poly: NCPolynomial,
    /// True when completion never had to drop an ambiguity, so the rewriting system is a
    /// full Gröbner basis and the normal form is canonical.
    pub complete: bool,
}

impl GroebnerBasis {
    pub fn compute(pres: &Presentation, bound: usize) -> Result<Self> {
        let deg = pres.max_relation_degree();
        if bound < deg {
            return Err(Error::BoundTooSmall { bound, degree: deg });
        }
        let mut gb = GroebnerBasis {
            field: pres.field(),
            rules: Vec::new(),
            lookup: HashMap::new(),
            lead_lengths: BTreeSet::new(),
            deferred: Vec::new(),
            bound,
            overflow: false,
        };
        let mut rels: Vec<NCPolynomial> = pres.relations().to_vec();
        rels.sort_by(|a, b| a.leading().map(|x| x.0).cmp(&b.leading().map(|x| x.0)));
        gb.complete_with(rels, Vec::new());
        Ok(gb)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_complete(&self) -> bool {
        self.deferred.is_empty() && !self.overflow
    }

    pub fn rules(&self) -> impl Iterator<Item = &NCPolynomial> {
        self.rules.iter().filter(|r| r.alive).map(|r| &r.poly)
    }

    pub fn rule_count(&self) -> usize {
        self.lookup.len()
    }

    /// Raises the bound and resumes completion with the ambiguities set aside earlier.
    pub fn extend_to(&mut self, bound: usize) {
        if bound <= self.bound || self.overflow {
            return;
        }
        self.bound = bound;
        let (now, later): (Vec<_>, Vec<_>) =
            std::mem::take(&mut self.deferred).into_iter().partition(|(d, _)| *d <= bound);
        self.deferred = later;
        self.complete_with(Vec::new(), now);
    }

    fn complete_with(&mut self, mut polys: Vec<NCPolynomial>, overlaps: Vec<(usize, Overlap)>) {
        let mut heap: BinaryHeap<Reverse<(usize, Overlap)>> = overlaps.into_iter().map(Reverse).collect();
        loop {
            if self.overflow {
                return;
            }
            let next = if let Some(p) = polys.pop() {
                Some(p)
            } else if let Some(Reverse((_, ov))) = heap.pop() {
                if !self.rules[ov.left].alive || !self.rules[ov.right].alive {
                    continue;
                }
                Some(self.s_poly(&ov))
            } else {
                None
            };
            let Some(p) = next else { return };
            let r = self.reduce(&p);
            if r.is_zero() {
                continue;
            }
            if self.lookup.len() >= MAX_RULES {
                self.overflow = true;
                return;
            }
            let r = r.monic();
            let lead = r.leading().unwrap().0.letters().to_vec();
            // Rules whose lead contains the new lead are retired and re-reduced.
            let retired: Vec<usize> =
                self.lookup.iter().filter(|(l, _)| Word(l.to_vec()).find(&lead).is_some()).map(|(_, &i)| i).collect();
            for i in retired {
                self.rules[i].alive = false;
                self.lookup.remove(&self.rules[i].lead);
                polys.push(self.rules[i].poly.clone());
            }
            self.lead_lengths = self.lookup.keys().map(|l| l.len()).collect();
            let id = self.rules.len();
            self.rules.push(Rule { lead: lead.clone(), poly: r, alive: true });
            self.lookup.insert(lead.clone(), id);
            self.lead_lengths.insert(lead.len());
            let alive: Vec<usize> = self.lookup.values().copied().collect();
            for j in alive {
                for ov in self.overlaps(id, j).into_iter().chain(if j != id { self.overlaps(j, id) } else { vec![] }) {
                    let deg = self.rules[ov.left].lead.len() + self.rules[ov.right].lead.len() - ov.shared;
                    if deg <= self.bound {
                        heap.push(Reverse((deg, ov)));
                    } else {
                        self.deferred.push((deg, ov));
                    }
                }
            }
        }
    }

    fn overlaps(&self, left: usize, right: usize) -> Vec<Overlap> {
        let u = &self.rules[left].lead;
        let v = &self.rules[right].lead;
        let max = u.len().min(v.len());
        (1..max).filter(|&k| u[u.len() - k..] == v[..k]).map(|shared| Overlap { left, right, shared }).collect()
    }

    fn s_poly(&self, ov: &Overlap) -> NCPolynomial {
        let u = &self.rules[ov.left];
        let v = &self.rules[ov.right];
        let a = &u.lead[..u.lead.len() - ov.shared];
        let b = &v.lead[ov.shared..];
        u.poly.left_right_mul(&[], b).sub(&v.poly.left_right_mul(a, &[]))
    }

    fn find_divisor(&self, w: &[Gen]) -> Option<(usize, usize)> {
        for &l in &self.lead_lengths {
            if l > w.len() {
                break;
            }
            for pos in 0..=w.len() - l {
                if let Some(&i) = self.lookup.get(&w[pos..pos + l]) {
                    return Some((i, pos));
                }
            }
        }
        None
    }

    /// Fully reduces `p` by the current rules.
    pub fn reduce(&self, p: &NCPolynomial) -> NCPolynomial {
        let f = self.field;
        let mut rem = p.clone();
        let mut out = NCPolynomial::zero(f);
        while let Some((w, c)) = rem.pop_leading() {
            match self.find_divisor(w.letters()) {
                None => out.add_term(w, c),
                Some((i, pos)) => {
                    let rule = &self.rules[i];
                    let left = &w.letters()[..pos];
                    let right = &w.letters()[pos + rule.lead.len()..];
                    let neg = f.neg(&c);
                    for (t, tc) in rule.poly.iter() {
                        if t.letters() == rule.lead.as_slice() {
                            continue;
                        }
                        let mut v = Vec::with_capacity(left.len() + t.len() + right.len());
                        v.extend_from_slice(left);
                        v.extend_from_slice(t.letters());
                        v.extend_from_slice(right);
                        rem.add_term(Word(v), f.mul(&neg, tc));
                    }
                }
            }
        }
        out
    }

    pub fn normal_form(&self, p: &NCPolynomial) -> NormalForm {
        NormalForm { poly: self.reduce(p), complete: self.is_complete() }
    }
}

/// Normal form of `p` modulo the ideal of `pres`, completing ambiguities up to `degree_bound`.
pub fn nf_bounded(p: &NCPolynomial, pres: &Presentation, degree_bound: usize) -> Result<NormalForm> {
    let gb = GroebnerBasis::compute(pres, degree_bound)?;
    Ok(gb.normal_form(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl1() -> Presentation {
        Presentation::parse("GL1", FieldSpec::Rationals, "t,s", &["t*s - 1", "s*t - 1"]).unwrap()
    }

    #[test]
    fn inverse_pair_reduces() {
        let p = gl1();
        let tst = p.poly("t*s*t").unwrap();
        let nf = nf_bounded(&tst, &p, 4).unwrap();
        assert_eq!(nf.poly, p.poly("t").unwrap());
        assert!(nf.complete);
    }

    #[test]
    fn idempotent_on_normal_forms() {
        let p = gl1();
        let gb = GroebnerBasis::compute(&p, 6).unwrap();
        let q = p.poly("t*t*s*s*s + 3*t - 2").unwrap();
        let once = gb.reduce(&q);
        assert_eq!(gb.reduce(&once), once);
    }

    #[test]
    fn free_algebra_leaves_polys_alone() {
        let p = Presentation::free("X", FieldSpec::Prime(5), &["x"]);
        let q = p.poly("x*x*x + 2*x").unwrap();
        assert_eq!(nf_bounded(&q, &p, 3).unwrap().poly, q);
    }

    #[test]
    fn bound_below_relation_degree() {
        let p = Presentation::parse("B", FieldSpec::Rationals, "b", &["b*b*b - b"]).unwrap();
        assert_eq!(nf_bounded(&p.var(0), &p, 2).unwrap_err(), Error::BoundTooSmall { bound: 2, degree: 3 });
    }

    #[test]
    fn commutative_completion() {
        let p = Presentation::parse("C", FieldSpec::Rationals, "x,y", &["y*x - x*y", "x*x - y"]).unwrap();
        let gb = GroebnerBasis::compute(&p, 8).unwrap();
        assert!(gb.is_complete());
        let a = p.poly("y*x*x").unwrap();
        let b = p.poly("y*y").unwrap();
        assert_eq!(gb.reduce(&a.sub(&b)), NCPolynomial::zero(p.field()));
    }

    #[test]
    fn truncation_is_reported_and_resumable() {
        // x*y*x = y*x*y style relations generate an infinite basis.
        let p = Presentation::parse("R", FieldSpec::Rationals, "x,y", &["x*y*x - y*x*y"]).unwrap();
        let mut gb = GroebnerBasis::compute(&p, 4).unwrap();
        assert!(!gb.is_complete());
        let before = gb.rule_count();
        gb.extend_to(7);
        assert!(gb.rule_count() >= before);
        assert_eq!(gb.bound(), 7);
    }
}
