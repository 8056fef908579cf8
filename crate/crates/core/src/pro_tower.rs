//! Towers of presented algebras indexed by a chain, and represented pro-morphisms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_algebra::{
    evaluate, tensor_many, EqualityOracle, GeneratorImageMap, NCPolynomial, Presentation, Scalar, TensorPresentation,
    Verdict,
};

/// How the maps `level p' -> level p` are obtained.
#[derive(Clone, Debug)]
pub enum Connecting {
    /// Generators keep their name when present at the lower level and go to 0 otherwise.
    Truncate,
    /// Levelwise tensor product of component towers.
    Tensor { factors: Vec<Arc<Tower>>, layouts: Vec<TensorPresentation> },
    /// `steps[p]` maps level `p + 1` to level `p`.
    Steps(Vec<GeneratorImageMap>),
}

/// An ℕ-indexed inverse system of presentations. A stable tower has one level that
/// stands for every index, with identity connecting maps.
#[derive(Clone, Debug)]
pub struct Tower {
    pub name: String,
    levels: Vec<Arc<Presentation>>,
    stable: bool,
    connecting: Connecting,
}

impl Tower {
    pub fn new(name: impl Into<String>, levels: Vec<Arc<Presentation>>, connecting: Connecting) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("a tower needs at least one level".into()));
        }
        if let Connecting::Steps(steps) = &connecting {
            if steps.len() + 1 != levels.len() {
                return Err(Error::Invalid("a tower with n levels needs n - 1 steps".into()));
            }
        }
        Ok(Tower { name: name.into(), levels, stable: false, connecting })
    }

    /// The constant tower on one algebra.
    pub fn stable(name: impl Into<String>, level: Arc<Presentation>) -> Self {
        Tower { name: name.into(), levels: vec![level], stable: true, connecting: Connecting::Truncate }
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Highest available level, or `None` when every level is available.
    pub fn max_level(&self) -> Option<usize> {
        (!self.stable).then(|| self.levels.len() - 1)
    }

    pub fn has_level(&self, p: usize) -> bool {
        self.stable || p < self.levels.len()
    }

    pub fn level(&self, p: usize) -> Result<&Arc<Presentation>> {
        if self.stable {
            return Ok(&self.levels[0]);
        }
        self.levels.get(p).ok_or(Error::LevelUnavailable(p, self.levels.len() - 1))
    }

    pub fn levels(&self) -> &[Arc<Presentation>] {
        &self.levels
    }

    /// Layout of level `p` when this is a tensor tower.
    pub fn layout(&self, p: usize) -> Option<&TensorPresentation> {
        match &self.connecting {
            Connecting::Tensor { layouts, .. } => Some(if self.stable { &layouts[0] } else { &layouts[p] }),
            _ => None,
        }
    }

    pub fn connecting_kind(&self) -> &Connecting {
        &self.connecting
    }

    /// The connecting map `level hi -> level lo` for `lo <= hi`.
    pub fn connecting(&self, lo: usize, hi: usize) -> Result<GeneratorImageMap> {
        if lo > hi {
            return Err(Error::Invalid(format!("connecting map needs {lo} <= {hi}")));
        }
        let src = self.level(hi)?.clone();
        let dst = self.level(lo)?.clone();
        if self.stable || lo == hi {
            return Ok(GeneratorImageMap::identity(src));
        }
        match &self.connecting {
            Connecting::Truncate => {
                let f = dst.field();
                let images = src
                    .generators()
                    .iter()
                    .map(|g| dst.gen_index(g).map(|i| dst.var(i)).unwrap_or_else(|| NCPolynomial::zero(f)))
                    .collect();
                GeneratorImageMap::new(src, dst, images)
            }
            Connecting::Tensor { factors, layouts } => {
                let (ls, ld) = (&layouts[hi], &layouts[lo]);
                let mut images = Vec::with_capacity(src.gen_count());
                for (k, t) in factors.iter().enumerate() {
                    let m = t.connecting(lo, hi)?;
                    images.extend(m.images.iter().map(|img| ld.embed(k, img)));
                }
                debug_assert_eq!(images.len(), ls.presentation.gen_count());
                GeneratorImageMap::new(src, dst, images)
            }
            Connecting::Steps(steps) => {
                let mut m = steps[hi - 1].clone();
                for p in (lo..hi - 1).rev() {
                    m = m.then(&steps[p])?;
                }
                Ok(m)
            }
        }
    }

    /// Checks `connecting(p, p'') = connecting(p, p') ∘ connecting(p', p'')` and
    /// `connecting(p, p) = id` for all `p <= p' <= p'' <= max`.
    pub fn check_coherence(&self, max: usize, degree_bound: usize) -> Result<Verdict> {
        let top = if self.stable { max } else { max.min(self.levels.len() - 1) };
        let mut verdict = Verdict::Verified;
        for p in 0..=top {
            let id = self.connecting(p, p)?;
            if id.images != GeneratorImageMap::identity(self.level(p)?.clone()).images {
                return Ok(Verdict::Refuted);
            }
            let mut oracle = EqualityOracle::new(self.level(p)?.clone(), degree_bound)?;
            for q in p..=top {
                let lower = self.connecting(p, q)?;
                for r in q..=top {
                    let direct = self.connecting(p, r)?;
                    let composed = self.connecting(q, r)?.then(&lower)?;
                    for (a, b) in direct.images.iter().zip(&composed.images) {
                        if a != b {
                            verdict = verdict.and(oracle.decide_equal(a, b)?);
                        }
                    }
                }
            }
        }
        Ok(verdict)
    }
}

/// Levelwise tensor product of towers along the diagonal chain.
pub fn tensor_towers(parts: &[&Arc<Tower>]) -> Result<Tower> {
    let stable = parts.iter().all(|t| t.stable);
    let top = parts.iter().filter_map(|t| t.max_level()).min().unwrap_or(0);
    let count = if stable { 1 } else { top + 1 };
    let mut levels = Vec::with_capacity(count);
    let mut layouts = Vec::with_capacity(count);
    for p in 0..count {
        let comps = parts.iter().map(|t| t.level(p).map(|a| a.as_ref())).collect::<Result<Vec<_>>>()?;
        let layout = tensor_many(&comps)?;
        levels.push(layout.presentation.clone());
        layouts.push(layout);
    }
    let name = parts.iter().map(|t| t.name.as_str()).collect::<Vec<_>>().join("_x_");
    let factors = parts.iter().map(|t| Arc::clone(t)).collect();
    Ok(Tower { name, levels, stable, connecting: Connecting::Tensor { factors, layouts } })
}

/// Tensor product of maps `f_k: A_k -> B_k` between tensor presentations.
pub fn tensor_map(
    maps: &[&GeneratorImageMap],
    source: &TensorPresentation,
    target: &TensorPresentation,
) -> Result<GeneratorImageMap> {
    let mut images = Vec::with_capacity(source.presentation.gen_count());
    for (k, m) in maps.iter().enumerate() {
        images.extend(m.images.iter().map(|img| target.embed(k, img)));
    }
    GeneratorImageMap::new(source.presentation.clone(), target.presentation.clone(), images)
}

/// One level map of a represented pro-morphism.
#[derive(Clone, Debug)]
pub struct Member {
    pub source_level: usize,
    pub target_level: usize,
    pub map: GeneratorImageMap,
}

/// A finite set of level maps `source_i -> target_j` standing for a pro-morphism.
#[derive(Clone, Debug)]
pub struct ProMorphism {
    pub source: Arc<Tower>,
    pub target: Arc<Tower>,
    pub members: Vec<Member>,
}

/// Outcome of a compatibility check, with the first offending pair of members.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport {
    pub verdict: Verdict,
    pub reached_levels: bool,
    pub witness: Option<(usize, usize, String)>,
}

impl CompatibilityReport {
    pub fn label(&self) -> &'static str {
        match self.verdict {
            Verdict::Verified if self.reached_levels => "compatible",
            Verdict::Verified | Verdict::Refuted => "incompatible",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn is_compatible(&self) -> bool {
        self.verdict == Verdict::Verified && self.reached_levels
    }
}

impl ProMorphism {
    pub fn new(source: Arc<Tower>, target: Arc<Tower>) -> Self {
        ProMorphism { source, target, members: Vec::new() }
    }

    pub fn push(&mut self, source_level: usize, target_level: usize, map: GeneratorImageMap) -> Result<()> {
        if *map.source != **self.source.level(source_level)? || *map.target != **self.target.level(target_level)? {
            return Err(Error::CompositionMismatch(format!(
                "member {source_level} -> {target_level} does not match the towers"
            )));
        }
        self.members.push(Member { source_level, target_level, map });
        Ok(())
    }

    /// Identity members at levels `0..=top`.
    pub fn identity(tower: Arc<Tower>, top: usize) -> Result<Self> {
        let mut out = ProMorphism::new(tower.clone(), tower.clone());
        let top = if tower.is_stable() { 0 } else { top };
        for p in 0..=top {
            out.push(p, p, GeneratorImageMap::identity(tower.level(p)?.clone()))?;
        }
        Ok(out)
    }

    /// The union of member sets; two pro-morphisms are equivalent when it is compatible.
    pub fn union(&self, other: &ProMorphism) -> Result<ProMorphism> {
        if !Arc::ptr_eq(&self.source, &other.source) && self.source.levels() != other.source.levels() {
            return Err(Error::CompositionMismatch("different source towers".into()));
        }
        let mut out = self.clone();
        out.members.extend(other.members.iter().cloned());
        Ok(out)
    }

    /// A member landing at target level exactly `j`, pushing a higher one down if needed.
    pub fn member_into(&self, j: usize) -> Result<Member> {
        let best = self
            .members
            .iter()
            .filter(|m| m.target_level >= j || self.target.is_stable())
            .min_by_key(|m| (m.target_level, m.source_level))
            .ok_or(Error::UnreachedLevel(j))?;
        if best.target_level == j || self.target.is_stable() {
            let mut m = best.clone();
            m.target_level = j;
            return Ok(m);
        }
        let down = self.target.connecting(j, best.target_level)?;
        Ok(Member { source_level: best.source_level, target_level: j, map: best.map.then(&down)? })
    }

    /// Condition (i) up to the highest member target level, and condition (ii) for every
    /// pair of members with comparable target levels, checked generator-wise in the target.
    pub fn check_compatibility(&self, degree_bound: usize) -> Result<CompatibilityReport> {
        let top = self.members.iter().map(|m| m.target_level).max().unwrap_or(0);
        let reached_levels = (0..=top).all(|j| self.members.iter().any(|m| m.target_level >= j));
        let mut verdict = Verdict::Verified;
        let mut witness = None;
        let mut oracles: Vec<Option<EqualityOracle>> = vec![None; top + 1];
        for (a, fa) in self.members.iter().enumerate() {
            for (b, fb) in self.members.iter().enumerate() {
                if a == b || fa.target_level > fb.target_level || (fa.target_level == fb.target_level && a > b) {
                    continue;
                }
                let (i, j) = (fa.source_level, fa.target_level);
                let (i2, j2) = (fb.source_level, fb.target_level);
                let top_src = i.max(i2);
                let left = self.source.connecting(i, top_src)?.then(&fa.map)?;
                let right =
                    self.source.connecting(i2, top_src)?.then(&fb.map)?.then(&self.target.connecting(j, j2)?)?;
                let slot = if self.target.is_stable() { 0 } else { j };
                if oracles[slot].is_none() {
                    oracles[slot] = Some(EqualityOracle::new(self.target.level(j)?.clone(), degree_bound)?);
                }
                let oracle = oracles[slot].as_mut().unwrap();
                for (g, (x, y)) in left.images.iter().zip(&right.images).enumerate() {
                    if x == y {
                        continue;
                    }
                    let v = oracle.decide_equal(x, y)?;
                    if v != Verdict::Verified && witness.is_none() {
                        witness = Some((a, b, left.source.gen_name(g as u32).to_string()));
                    }
                    verdict = verdict.and(v);
                }
                if verdict == Verdict::Refuted {
                    return Ok(CompatibilityReport { verdict, reached_levels, witness });
                }
            }
        }
        Ok(CompatibilityReport { verdict, reached_levels, witness })
    }
}

/// `psi ∘ phi` at the requested target levels of `psi`.
pub fn compose_pro(psi: &ProMorphism, phi: &ProMorphism, levels: &[usize]) -> Result<ProMorphism> {
    if phi.target.levels() != psi.source.levels() {
        return Err(Error::CompositionMismatch(format!("{} vs {}", phi.target.name, psi.source.name)));
    }
    let mut out = ProMorphism::new(phi.source.clone(), psi.target.clone());
    for &k in levels {
        let outer = psi.member_into(k)?;
        let inner = phi.member_into(outer.source_level)?;
        out.members.push(Member {
            source_level: inner.source_level,
            target_level: k,
            map: inner.map.then(&outer.map)?,
        });
    }
    Ok(out)
}

/// A scalar point of one tower level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TowerPoint {
    pub level: usize,
    pub assignment: Vec<Scalar>,
}

impl TowerPoint {
    /// Checks that the assignment satisfies every relation of the level exactly.
    pub fn validate(&self, tower: &Tower) -> Result<()> {
        let pres = tower.level(self.level)?;
        if self.assignment.len() != pres.gen_count() {
            return Err(Error::InvalidPoint(format!("expected {} coordinates", pres.gen_count())));
        }
        for r in pres.relations() {
            if !pres.field().is_zero(&evaluate(r, &self.assignment)?) {
                return Err(Error::InvalidPoint(pres.render_poly(r)));
            }
        }
        Ok(())
    }

    /// The induced point at a higher level: precomposition with the connecting map.
    pub fn lift(&self, tower: &Tower, to: usize) -> Result<TowerPoint> {
        let m = tower.connecting(self.level, to)?;
        let assignment = m.images.iter().map(|img| evaluate(img, &self.assignment)).collect::<Result<Vec<_>>>()?;
        Ok(TowerPoint { level: to, assignment })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::FieldSpec;

    fn chain() -> Arc<Tower> {
        let f = FieldSpec::Rationals;
        let l0 = Presentation::parse("L0", f, "a", &["a*a - a"]).unwrap();
        let l1 = Presentation::parse("L1", f, "a,b", &["a*a - a", "a*b + b*a - b"]).unwrap();
        let l2 = Presentation::parse("L2", f, "a,b,c", &["a*a - a", "a*b + b*a - b"]).unwrap();
        Arc::new(Tower::new("T", vec![Arc::new(l0), Arc::new(l1), Arc::new(l2)], Connecting::Truncate).unwrap())
    }

    #[test]
    fn truncation_tower_is_coherent() {
        assert_eq!(chain().check_coherence(4, 8).unwrap(), Verdict::Verified);
    }

    #[test]
    fn singleton_and_identity_are_compatible() {
        let t = chain();
        let id = ProMorphism::identity(t.clone(), 2).unwrap();
        assert!(id.check_compatibility(8).unwrap().is_compatible());
        let comp = compose_pro(&id, &id, &[0, 1, 2]).unwrap();
        assert!(comp.union(&id).unwrap().check_compatibility(8).unwrap().is_compatible());
    }

    #[test]
    fn perturbed_member_is_incompatible() {
        let t = chain();
        let mut id = ProMorphism::identity(t.clone(), 2).unwrap();
        let m = &mut id.members[1].map;
        m.images[0] = m.images[0].add(&NCPolynomial::one(FieldSpec::Rationals));
        let rep = id.check_compatibility(8).unwrap();
        assert_eq!(rep.label(), "incompatible");
    }

    #[test]
    fn tensor_tower_levels() {
        let t = chain();
        let tt = tensor_towers(&[&t, &t]).unwrap();
        assert_eq!(tt.level(1).unwrap().gen_count(), 4);
        assert_eq!(tt.check_coherence(2, 8).unwrap(), Verdict::Verified);
        let k = Arc::new(Tower::stable("K", Arc::new(Presentation::base_field(FieldSpec::Rationals))));
        let tk = tensor_towers(&[&t, &k]).unwrap();
        for p in 0..=2 {
            assert_eq!(**tk.level(p).unwrap(), **t.level(p).unwrap());
        }
    }

    #[test]
    fn points_lift() {
        let t = chain();
        let f = FieldSpec::Rationals;
        let p = TowerPoint { level: 0, assignment: vec![f.one()] };
        p.validate(&t).unwrap();
        let q = p.lift(&t, 2).unwrap();
        assert_eq!(q.assignment, vec![f.one(), f.zero(), f.zero()]);
        q.validate(&t).unwrap();
    }
}
