//! Bounded checks of the Hopf pro-algebra axioms, and planted defects for testing them.

use serde::Serialize;

use crate::error::Result;
use crate::exact_algebra::{tensor_many, EqualityOracle, Gen, GeneratorImageMap, NCPolynomial, Verdict};

use super::tower::{counit_point, HopfTower};
use super::Check;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfAxiomReport {
    pub p_max: usize,
    pub degree_bound: usize,
    pub coassociativity: Check,
    pub counit: Check,
    pub antipode: Check,
}

impl HopfAxiomReport {
    pub fn verdict(&self) -> Verdict {
        self.coassociativity.verdict.and(self.counit.verdict).and(self.antipode.verdict)
    }

    pub fn checks(&self) -> [&Check; 3] {
        [&self.coassociativity, &self.counit, &self.antipode]
    }
}

struct Tally {
    verdict: Verdict,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { verdict: Verdict::Verified, witness: None }
    }

    fn record(&mut self, v: Verdict, at: impl FnOnce() -> String) {
        if v != Verdict::Verified && self.witness.is_none() {
            self.witness = Some(at());
        }
        self.verdict = self.verdict.and(v);
    }

    fn into_check(self, name: &str) -> Check {
        Check::new(name, self.verdict, self.witness)
    }
}

fn shifted(p: &NCPolynomial, by: usize, len: usize) -> NCPolynomial {
    let map: Vec<Gen> = (0..len as Gen).map(|g| g + by as Gen).collect();
    p.relabel(&map)
}

/// Checks, for every level `p ≤ p_max`, generator by generator:
/// `(Δ̂ ⊗ id)Δ̂ = (id ⊗ Δ̂)Δ̂` from level `4p` into `A_p^{⊗3}`,
/// `(ε̂ ⊗ id)Δ̂ = (id ⊗ ε̂)Δ̂ = connecting map` from `A_{2p}` to `A_p`, and
/// `μ(T̂ ⊗ id)Δ̂ = μ(id ⊗ T̂)Δ̂ = η ε̂` into `A_p`.
/// Differences are decided in the target level with the counit point as a witness.
pub fn check_hopf_axioms(h: &HopfTower, degree_bound: usize, p_max: usize) -> Result<HopfAxiomReport> {
    let f = h.pseudogroup.field();
    let tower = &h.mapping.tower;
    let mut coassoc = Tally::new();
    let mut counit = Tally::new();
    let mut antipode = Tally::new();
    for p in 0..=p_max {
        let ap = tower.level(p)?.clone();
        let n = ap.gen_count();
        let witness = counit_point(&h.mapping, &h.data, p)?;
        let mut oracle = EqualityOracle::new(ap.clone(), degree_bound)?;
        oracle.add_witness(witness.clone())?;

        let d2 = h.comul.member_into(2 * p)?;
        let d1 = h.comul.member_into(p)?;
        let conn = tower.connecting(p, d1.source_level)?;
        let n2 = tower.level(d1.source_level)?.gen_count();
        let e3 = tensor_many(&[&ap, &ap, &ap])?;
        let mut left_imgs = d1.map.images.clone();
        left_imgs.extend(conn.images.iter().map(|c| shifted(c, 2 * n, n)));
        let mut right_imgs = conn.images.clone();
        right_imgs.extend(d1.map.images.iter().map(|c| shifted(c, n, 2 * n)));
        let mid = d2.map.target.clone();
        debug_assert_eq!(mid.gen_count(), 2 * n2);
        let l = d2.map.then(&GeneratorImageMap::new(mid.clone(), e3.presentation.clone(), left_imgs)?)?;
        let r = d2.map.then(&GeneratorImageMap::new(mid, e3.presentation.clone(), right_imgs)?)?;
        let mut e3_oracle: Option<EqualityOracle> = None;
        for (g, (x, y)) in l.images.iter().zip(&r.images).enumerate() {
            let (x, y) = (e3.canonical(x), e3.canonical(y));
            let v = if x == y {
                Verdict::Verified
            } else {
                if e3_oracle.is_none() {
                    let mut o = EqualityOracle::new(e3.presentation.clone(), degree_bound)?;
                    o.add_witness([witness.clone(), witness.clone(), witness.clone()].concat())?;
                    e3_oracle = Some(o);
                }
                e3_oracle.as_mut().unwrap().decide_equal(&x, &y)?
            };
            coassoc.record(v, || format!("level {p}, {}", l.source.gen_name(g as Gen)));
        }

        let eps = match h.counit_on(p) {
            Ok(e) => e,
            Err(_) => {
                counit.record(Verdict::Inconclusive, || format!("no counit member at level {p}"));
                continue;
            }
        };
        let sq = d1.map.target.clone();
        let consts: Vec<NCPolynomial> = eps.images.clone();
        let vars: Vec<NCPolynomial> = (0..n as Gen).map(|g| ap.var(g)).collect();
        let el = GeneratorImageMap::new(sq.clone(), ap.clone(), [consts.clone(), vars.clone()].concat())?;
        let er = GeneratorImageMap::new(sq.clone(), ap.clone(), [vars, consts].concat())?;
        for (side, m) in [("left", &el), ("right", &er)] {
            let composite = d1.map.then(m)?;
            for (g, (x, y)) in composite.images.iter().zip(&conn.images).enumerate() {
                let v = if x == y { Verdict::Verified } else { oracle.decide_equal(x, y)? };
                counit.record(v, || format!("{side}, level {p}, {}", composite.source.gen_name(g as Gen)));
            }
        }

        let t = match h.antipode.member_into(p) {
            Ok(t) => t,
            Err(_) => {
                antipode.record(Verdict::Inconclusive, || format!("no antipode member at level {p}"));
                continue;
            }
        };
        let s = t.source_level;
        let ds = match h.comul.member_into(s) {
            Ok(d) => d,
            Err(_) => {
                antipode.record(Verdict::Inconclusive, || format!("no comultiplication member at level {s}"));
                continue;
            }
        };
        let layout = h.layout(s);
        let down = tower.connecting(p, s)?;
        let eps_src = h.counit_on(ds.source_level)?;
        for (g, img) in ds.map.images.iter().enumerate() {
            let unit = NCPolynomial::constant(f, eps_src.images[g].as_constant().unwrap_or_else(|| f.zero()));
            let mut left = NCPolynomial::zero(f);
            let mut right = NCPolynomial::zero(f);
            for (w, c) in img.iter() {
                let parts = layout.split(w);
                let (a, b) = (NCPolynomial::word(f, parts[0].letters()), NCPolynomial::word(f, parts[1].letters()));
                left = left.add(&t.map.apply(&a)?.mul(&down.apply(&b)?).scale(c));
                right = right.add(&down.apply(&a)?.mul(&t.map.apply(&b)?).scale(c));
            }
            for (side, sum) in [("left", &left), ("right", &right)] {
                let v = oracle.decide_equal(sum, &unit)?;
                antipode.record(v, || format!("{side}, level {p}, {}", ds.map.source.gen_name(g as Gen)));
            }
        }
    }
    Ok(HopfAxiomReport {
        p_max,
        degree_bound,
        coassociativity: coassoc.into_check("coassociativity"),
        counit: counit.into_check("counit"),
        antipode: antipode.into_check("antipode"),
    })
}

/// Planted defects in the structure maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negates the leading term of `Δ̂(x⟨g,1⟩)` for the first diagonal generator `g`.
    ComulSign,
    /// Adds one to `ε̂(x⟨g,1⟩)` for the first diagonal generator `g`.
    CounitShift,
    /// Negates every antipode image.
    AntipodeSign,
}

/// A copy of `h` with the defect applied to every member.
pub fn mutate(h: &HopfTower, m: Mutation) -> HopfTower {
    let mut out = h.clone();
    let f = h.pseudogroup.field();
    let pg = &h.pseudogroup;
    let diag = (0..pg.b.gen_count() as Gen).find(|g| pg.position(*g).is_some_and(|(k, l)| k == l));
    let unit = h.mapping.c.unit_elem();
    let target = |level: usize| -> Option<usize> {
        let ma = h.mapping.level(level).ok()?;
        ma.generator(diag?, unit.as_ref()?).map(|x| x as usize)
    };
    match m {
        Mutation::ComulSign => {
            for mem in &mut out.comul.members {
                if let Some(x) = target(mem.source_level) {
                    let img = &mut mem.map.images[x];
                    if let Some((w, c)) = img.leading().map(|(w, c)| (w.clone(), c.clone())) {
                        img.add_term(w, f.neg(&f.add(&c, &c)));
                    }
                }
            }
        }
        Mutation::CounitShift => {
            for mem in &mut out.counit.members {
                if let Some(x) = target(mem.source_level) {
                    mem.map.images[x] = mem.map.images[x].add(&NCPolynomial::one(f));
                }
            }
        }
        Mutation::AntipodeSign => {
            for mem in &mut out.antipode.members {
                for img in &mut mem.map.images {
                    *img = img.neg();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::FieldSpec;
    use crate::hopf_mapping::pseudogroup::{gl1, sl2};
    use crate::hopf_mapping::tower::build_hopf_tower;

    #[test]
    fn gl1_axioms_hold() {
        let h = build_hopf_tower(&gl1(FieldSpec::Rationals), 1, 2).unwrap();
        let r = check_hopf_axioms(&h, 8, 2).unwrap();
        assert_eq!(r.verdict(), Verdict::Verified, "{r:?}");
    }

    #[test]
    fn sl2_axioms_hold_at_level_one() {
        let h = build_hopf_tower(&sl2(FieldSpec::Rationals), 1, 1).unwrap();
        let r = check_hopf_axioms(&h, 8, 1).unwrap();
        assert_eq!(r.verdict(), Verdict::Verified, "{r:?}");
    }

    #[test]
    fn mutants_are_refuted() {
        let h = build_hopf_tower(&gl1(FieldSpec::Rationals), 1, 1).unwrap();
        let r = check_hopf_axioms(&mutate(&h, Mutation::ComulSign), 8, 1).unwrap();
        assert_eq!(r.counit.verdict, Verdict::Refuted);
        assert!(r.counit.witness.is_some());
        let r = check_hopf_axioms(&mutate(&h, Mutation::CounitShift), 8, 1).unwrap();
        assert_eq!(r.counit.verdict, Verdict::Refuted);
        let r = check_hopf_axioms(&mutate(&h, Mutation::AntipodeSign), 8, 1).unwrap();
        assert_eq!(r.antipode.verdict, Verdict::Refuted);
    }
}
