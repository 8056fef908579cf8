use std::cmp::Ordering;

/// Index of a generator within its presentation's declared order.
pub type Gen = u32;

/// A monomial of the free algebra: an ordered sequence of generator indices.
/// The empty word is the unit.
///
/// Words are ordered degree-lexicographically: shorter words first, ties broken
/// by comparing generator indices left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Gen) -> Self {
        Word(vec![g])
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Position of the first occurrence of `needle` as a contiguous subword.
    pub fn find(&self, needle: &[Gen]) -> Option<usize> {
        if needle.is_empty() || needle.len() > self.len() {
            return None;
        }
        self.0.windows(needle.len()).position(|w| w == needle)
    }
}

impl From<Vec<Gen>> for Word {
    fn from(v: Vec<Gen>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deglex_order() {
        let a = Word(vec![1]);
        let b = Word(vec![0, 0]);
        let c = Word(vec![0, 1]);
        assert!(Word::unit() < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn concat_unit_identity() {
        let w = Word(vec![2, 0, 1]);
        assert_eq!(w.concat(&Word::unit()), w);
        assert_eq!(Word::unit().concat(&w), w);
        assert_eq!(w.find(&[0, 1]), Some(1));
        assert_eq!(w.find(&[1, 0]), None);
    }
}
