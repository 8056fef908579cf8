//! Finite groups given by multiplication tables.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite group with labelled elements; element 0 is always the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<u32>>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, checking the group axioms.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, table: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        let name = name.into();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n))
        {
            return Err(Error::Invalid(format!("malformed multiplication table for {name}")));
        }
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i as u32 || row[0] != i as u32 {
                return Err(Error::LawViolated { law: "identity".into(), witness: labels[i].clone() });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b] as usize][c];
                    let r = table[a][table[b][c] as usize];
                    if l != r {
                        return Err(Error::LawViolated {
                            law: "associativity".into(),
                            witness: format!("({}, {}, {})", labels[a], labels[b], labels[c]),
                        });
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for (a, row) in table.iter().enumerate() {
            let inv = row
                .iter()
                .position(|&x| x == 0)
                .ok_or_else(|| Error::LawViolated { law: "inverse".into(), witness: labels[a].clone() })?;
            inverses.push(inv as u32);
        }
        Ok(FiniteGroup { name, labels, table, inverses })
    }

    /// Z/n with elements `u0, ..., u{n-1}` (`u_j = u^j`).
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cyclic group of order 0".into()));
        }
        let labels = (0..n).map(|j| format!("u{j}")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect()).collect();
        FiniteGroup::from_table(format!("cyclic({n})"), labels, table)
    }

    /// Permutations of `1..=n` in one-line notation (`p132` sends 2 to 3), in lexicographic
    /// order; the product is composition `(st)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(Error::Unsupported(format!("symmetric({n}) is outside the supported range 1..=6")));
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..n).collect()];
        while let Some(next) = next_permutation(perms.last().unwrap()) {
            perms.push(next);
        }
        let index: HashMap<Vec<usize>, u32> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let labels =
            perms.iter().map(|p| format!("p{}", p.iter().map(|i| (i + 1).to_string()).collect::<String>())).collect();
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()]).collect())
            .collect();
        FiniteGroup::from_table(format!("symmetric({n})"), labels, table)
    }

    /// Direct product with labels `a_b`.
    pub fn product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order(), other.order());
        let labels = (0..n * m).map(|k| format!("{}_{}", self.labels[k / m], other.labels[k % m])).collect();
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.table[x / m][y / m] * m as u32 + other.table[x % m][y % m]).collect())
            .collect();
        FiniteGroup::from_table(format!("{} x {}", self.name, other.name), labels, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: u32) -> &str {
        &self.labels[g as usize]
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order() as u32;
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Every homomorphism to `other`, as image tables, in lexicographic order.
    pub fn homomorphisms_to(&self, other: &FiniteGroup) -> Vec<Vec<u32>> {
        let n = self.order();
        let mut out = Vec::new();
        let mut img = vec![0u32; n];
        self.extend_hom(other, 1, &mut img, &mut out);
        out
    }

    fn extend_hom(&self, other: &FiniteGroup, k: usize, img: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = self.order();
        if k == n {
            let ok = (0..n as u32).all(|a| {
                (0..n as u32).all(|b| img[self.mul(a, b) as usize] == other.mul(img[a as usize], img[b as usize]))
            });
            if ok {
                out.push(img.clone());
            }
            return;
        }
        for v in 0..other.order() as u32 {
            img[k] = v;
            self.extend_hom(other, k + 1, img, out);
        }
    }
}

fn next_permutation(p: &[usize]) -> Option<Vec<usize>> {
    let mut v = p.to_vec();
    let i = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1])?;
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    Some(v)
}
