//! Numerical semigroups: construction, membership, Apéry sets and the
//! Frobenius number.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A numerical semigroup given by its minimal generating set.
///
/// The stored generators are exactly the atoms of the semigroup, in
/// increasing order. Membership is answered from the Apéry set with respect
/// to the smallest generator, which is computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGenerators", into = "RawGenerators")]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    apery_first: Vec<u64>,
    apery_sum: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawGenerators {
    generators: Vec<u64>,
}

impl TryFrom<RawGenerators> for NumericalSemigroup {
    type Error = Error;
    fn try_from(raw: RawGenerators) -> Result<Self> {
        NumericalSemigroup::new(&raw.generators)
    }
}

impl From<NumericalSemigroup> for RawGenerators {
    fn from(s: NumericalSemigroup) -> Self {
        RawGenerators {
            generators: s.generators,
        }
    }
}

/// The Apéry set of a semigroup with respect to one of its elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AperyTable {
    pub modulus: u64,
    /// `entries[j]` is the least element of S congruent to `j` modulo `modulus`.
    pub entries: Vec<u64>,
}

impl AperyTable {
    /// Apéry element in the class of `n`.
    pub fn for_class_of(&self, n: u64) -> u64 {
        self.entries[(n % self.modulus) as usize]
    }
}

impl NumericalSemigroup {
    /// Builds a semigroup from a generating list, insisting that the list is
    /// already minimal once sorted and deduplicated.
    pub fn new(raw: &[u64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if raw.contains(&0) {
            return Err(Error::ZeroGenerator);
        }
        let mut generators = raw.to_vec();
        generators.sort_unstable();
        generators.dedup();
        if generators[0] == 1 {
            return Err(if generators.len() == 1 {
                Error::Degenerate
            } else {
                Error::ContainsOne
            });
        }
        let gcd = generators.iter().fold(0u64, |acc, &g| acc.gcd(&g));
        if gcd != 1 {
            return Err(Error::GcdNotOne(gcd));
        }
        for (i, &g) in generators.iter().enumerate() {
            let others: Vec<u64> = generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &h)| h)
                .collect();
            if representable(&others, g) {
                return Err(Error::NotMinimal(g));
            }
        }
        let g1 = generators[0];
        let sum: u64 = generators.iter().sum();
        let apery_first = shortest_residues(&generators, g1);
        let apery_sum = shortest_residues(&generators, sum);
        Ok(Self {
            generators,
            apery_first,
            apery_sum,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Embedding dimension k.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn smallest(&self) -> u64 {
        self.generators[0]
    }

    pub fn largest(&self) -> u64 {
        *self.generators.last().unwrap()
    }

    /// g = g₁ + … + g_k.
    pub fn generator_sum(&self) -> u64 {
        self.generators.iter().sum()
    }

    /// N = g₁² + … + g_k².
    pub fn square_sum(&self) -> u64 {
        self.generators.iter().map(|g| g * g).sum()
    }

    pub fn generator_lcm(&self) -> u64 {
        self.generators.iter().fold(1u64, |acc, &g| acc.lcm(&g))
    }

    pub fn contains(&self, n: u64) -> bool {
        let g1 = self.smallest();
        n >= self.apery_first[(n % g1) as usize]
    }

    /// Apéry set with respect to `m`, which must lie in the semigroup.
    pub fn apery(&self, m: u64) -> Result<AperyTable> {
        if m == 0 || !self.contains(m) {
            return Err(Error::ModulusNotInSemigroup(m));
        }
        let entries = if m == self.smallest() {
            self.apery_first.clone()
        } else if m == self.generator_sum() {
            self.apery_sum.clone()
        } else {
            shortest_residues(&self.generators, m)
        };
        Ok(AperyTable { modulus: m, entries })
    }

    pub(crate) fn apery_first_entry(&self, n: u64) -> u64 {
        self.apery_first[(n % self.smallest()) as usize]
    }

    pub(crate) fn apery_sum_entry(&self, class: u64) -> u64 {
        self.apery_sum[class as usize]
    }

    /// Largest integer outside the semigroup.
    pub fn frobenius(&self) -> i64 {
        let max = *self.apery_first.iter().max().unwrap();
        max as i64 - self.smallest() as i64
    }
}

/// Least element of ⟨generators⟩ in each residue class mod `m`
/// (Dijkstra over the residue graph with edges `r -> r + g`).
fn shortest_residues(generators: &[u64], m: u64) -> Vec<u64> {
    let m_us = m as usize;
    let mut dist = vec![u64::MAX; m_us];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &g in generators {
            let next = ((r as u64 + g) % m) as usize;
            let nd = d + g;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    dist
}

/// Whether `target` is a nonnegative combination of `gens`.
fn representable(gens: &[u64], target: u64) -> bool {
    let t = target as usize;
    let mut reach = vec![false; t + 1];
    reach[0] = true;
    for v in 1..=t {
        reach[v] = gens
            .iter()
            .any(|&g| (g as usize) <= v && reach[v - g as usize]);
    }
    reach[t]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan_members(gens: &[u64], upto: usize) -> Vec<bool> {
        let mut reach = vec![false; upto + 1];
        reach[0] = true;
        for v in 1..=upto {
            reach[v] = gens.iter().any(|&g| g as usize <= v && reach[v - g as usize]);
        }
        reach
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(NumericalSemigroup::new(&[2, 3, 5]), Err(Error::NotMinimal(5)));
        assert_eq!(NumericalSemigroup::new(&[4, 6]), Err(Error::GcdNotOne(2)));
        assert_eq!(NumericalSemigroup::new(&[1]), Err(Error::Degenerate));
        assert_eq!(NumericalSemigroup::new(&[1, 3]), Err(Error::ContainsOne));
        assert_eq!(NumericalSemigroup::new(&[]), Err(Error::Empty));
        assert_eq!(NumericalSemigroup::new(&[0, 3]), Err(Error::ZeroGenerator));
        let s = NumericalSemigroup::new(&[7, 3, 5, 3]).unwrap();
        assert_eq!(s.generators(), &[3, 5, 7]);
    }

    #[test]
    fn membership() {
        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        assert!(!s.contains(1));
        assert!(s.contains(7));
        assert!(s.contains(0));
        let t = NumericalSemigroup::new(&[6, 9, 20]).unwrap();
        assert!(!t.contains(43));
        assert!(t.contains(44));
    }

    #[test]
    fn apery_examples() {
        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        assert_eq!(s.apery(2).unwrap().entries, vec![0, 3]);
        assert_eq!(s.apery(5).unwrap().entries, vec![0, 6, 2, 3, 4]);
        assert_eq!(s.apery(1), Err(Error::ModulusNotInSemigroup(1)));
        let t = NumericalSemigroup::new(&[3, 5, 7]).unwrap();
        assert_eq!(t.apery(3).unwrap().entries, vec![0, 7, 5]);
        assert_eq!(t.apery(4), Err(Error::ModulusNotInSemigroup(4)));
    }

    #[test]
    fn frobenius_examples() {
        for (gens, f) in [(vec![2, 3], 1), (vec![3, 5, 7], 4), (vec![6, 9, 20], 43)] {
            assert_eq!(NumericalSemigroup::new(&gens).unwrap().frobenius(), f);
        }
    }

    #[test]
    fn agrees_with_membership_scan() {
        for gens in [vec![2, 3], vec![3, 5, 7], vec![6, 9, 20], vec![5, 7, 11, 13], vec![4, 9]] {
            let s = NumericalSemigroup::new(&gens).unwrap();
            let bound = (s.smallest() * s.largest()) as usize;
            let scan = scan_members(&gens, bound);
            for (n, &member) in scan.iter().enumerate() {
                assert_eq!(s.contains(n as u64), member, "{gens:?} n={n}");
            }
            let brute_f = scan.iter().rposition(|&b| !b).map_or(-1, |i| i as i64);
            assert_eq!(s.frobenius(), brute_f);
            for m in [s.smallest(), s.generator_sum(), s.largest() + s.smallest()] {
                let ap = s.apery(m).unwrap();
                assert_eq!(ap.entries.len() as u64, m);
                assert_eq!(ap.entries[0], 0);
                for (j, &a) in ap.entries.iter().enumerate() {
                    assert_eq!(a % m, j as u64);
                    assert!(s.contains(a));
                    assert!(a < m || !s.contains(a - m));
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = NumericalSemigroup::new(&[3, 5, 7]).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"generators":[3,5,7]}"#);
        let back: NumericalSemigroup = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<NumericalSemigroup>(r#"{"generators":[4,6]}"#).is_err());
    }
}
