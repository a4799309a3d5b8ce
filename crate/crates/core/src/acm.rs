//! Arithmetical congruence monoids M_{a,b} = {1} ∪ {n ≥ 1 : n ≡ a mod b}
//! over machine-word integers.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::length::{ExtExponent, Mode};
use crate::factor::DEFAULT_CELL_BUDGET;
use crate::separable::{ExponentBox, SeparableTable};

/// Trial divisions attempted before giving up on factoring an element.
pub const TRIAL_DIVISION_LIMIT: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Acm {
    a: u64,
    b: u64,
}

impl Acm {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidArgument("ACM parameters must be positive".into()));
        }
        let r = a % b;
        let a = if r == 0 { b } else { r };
        let (aa, bb) = (a as u128, b as u128);
        if (aa * aa) % bb != aa % bb {
            return Err(Error::NotIdempotent { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn is_regular(&self) -> bool {
        self.a == 1
    }

    pub fn contains(&self, x: u128) -> bool {
        x == 1 || (x >= 1 && x % self.b as u128 == self.a as u128 % self.b as u128)
    }

    /// Whether `x` is irreducible in the monoid.
    pub fn is_atom(&self, x: u128) -> Result<bool> {
        if x <= 1 || !self.contains(x) {
            return Err(Error::NotInMonoid(x.to_string()));
        }
        let mut d: u128 = 2;
        while d * d <= x {
            if x.is_multiple_of(d) && self.contains(d) && self.contains(x / d) {
                return Ok(false);
            }
            d += 1;
        }
        Ok(true)
    }

    /// Atoms of the monoid not exceeding `bound`, in increasing order.
    pub fn atoms_up_to(&self, bound: u128) -> Result<Vec<u128>> {
        let mut out = Vec::new();
        let b = self.b as u128;
        let mut x = self.a as u128;
        if x == 1 {
            x += b;
        }
        while x <= bound {
            let lattice = DivisorLattice::new(x)?;
            if lattice.atoms(self).contains(&lattice.top()) {
                out.push(x);
            }
            x += b;
        }
        Ok(out)
    }

    pub fn descriptor(&self) -> String {
        format!("M({},{})", self.a, self.b)
    }
}

/// Prime factorization by trial division.
pub fn factor_integer(x: u128) -> Result<Vec<(u128, u32)>> {
    if x == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut rem = x;
    let mut d: u128 = 2;
    let mut steps: u128 = 0;
    while d.checked_mul(d).is_some_and(|dd| dd <= rem) {
        if rem.is_multiple_of(d) {
            let mut e = 0;
            while rem.is_multiple_of(d) {
                rem /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
        steps += 1;
        if steps > TRIAL_DIVISION_LIMIT {
            return Err(Error::FactoringLimit(x));
        }
    }
    if rem > 1 {
        out.push((rem, 1));
    }
    Ok(out)
}

/// The divisors of a fixed integer, indexed by prime-exponent vectors.
pub(crate) struct DivisorLattice {
    grid: ExponentBox,
    values: Vec<u128>,
}

impl DivisorLattice {
    pub fn new(x: u128) -> Result<Self> {
        let fac = factor_integer(x)?;
        let primes: Vec<u128> = fac.iter().map(|&(p, _)| p).collect();
        let exps: Vec<u32> = fac.iter().map(|&(_, e)| e).collect();
        let grid = ExponentBox::new(&exps, DEFAULT_CELL_BUDGET)?;
        let values = (0..grid.size())
            .map(|i| {
                grid.coords(i)
                    .iter()
                    .zip(&primes)
                    .fold(1u128, |acc, (&e, &p)| acc * p.pow(e))
            })
            .collect();
        Ok(Self { grid, values })
    }

    pub fn size(&self) -> usize {
        self.grid.size()
    }

    pub fn top(&self) -> usize {
        self.grid.target()
    }

    pub fn value(&self, i: usize) -> u128 {
        self.values[i]
    }

    /// `j / i` as a lattice index when `i` divides `j`.
    pub fn quotient(&self, j: usize, i: usize) -> Option<usize> {
        self.grid.sub(j, self.grid.coords(i), i)
    }

    /// Lattice indices of the atoms dividing the top element, by increasing value.
    pub fn atoms(&self, m: &Acm) -> Vec<usize> {
        let member: Vec<bool> = (0..self.size())
            .map(|i| i != 0 && m.contains(self.values[i]))
            .collect();
        let mut atoms: Vec<usize> = (1..self.size())
            .filter(|&i| {
                member[i]
                    && !(1..self.size()).any(|d| {
                        d != i && member[d] && self.quotient(i, d).is_some_and(|q| q != 0 && member[q])
                    })
            })
            .collect();
        atoms.sort_by_key(|&i| self.values[i]);
        atoms
    }
}

/// A factorization as (atom, multiplicity) pairs with strictly increasing atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcmFactorization(Vec<(u128, u64)>);

impl AcmFactorization {
    pub fn new(mut parts: Vec<(u128, u64)>) -> Self {
        parts.retain(|&(_, m)| m > 0);
        parts.sort_unstable();
        Self(parts)
    }

    pub fn parts(&self) -> &[(u128, u64)] {
        &self.0
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.0.iter().map(|&(_, m)| m).collect()
    }

    pub fn distinct(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> u64 {
        self.0.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> Option<u128> {
        self.0.iter().try_fold(1u128, |acc, &(u, m)| {
            acc.checked_mul(u.checked_pow(u32::try_from(m).ok()?)?)
        })
    }

    pub fn plength(&self, p: ExtExponent) -> Result<u128> {
        crate::length::plength(&self.multiplicities(), p)
    }
}

impl Serialize for AcmFactorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Part {
            atom: u128,
            mult: u64,
        }
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &(atom, mult) in &self.0 {
            seq.serialize_element(&Part { atom, mult })?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcmExtremalResult {
    pub x: u128,
    pub p: ExtExponent,
    pub mode: Mode,
    pub value: u128,
    pub witness: AcmFactorization,
}

fn check_member(m: &Acm, x: u128) -> Result<()> {
    if m.contains(x) {
        Ok(())
    } else {
        Err(Error::NotInMonoid(x.to_string()))
    }
}

/// Atoms of `m` dividing `x`, in increasing order.
pub fn acm_atom_divisors(m: &Acm, x: u128) -> Result<Vec<u128>> {
    check_member(m, x)?;
    let lattice = DivisorLattice::new(x)?;
    Ok(lattice.atoms(m).into_iter().map(|i| lattice.value(i)).collect())
}

/// Every factorization of `x`, in increasing lexicographic order of parts.
pub fn acm_factorizations(m: &Acm, x: u128, cap: u64) -> Result<Vec<AcmFactorization>> {
    check_member(m, x)?;
    let lattice = DivisorLattice::new(x)?;
    let atoms = lattice.atoms(m);
    let member: Vec<bool> = (0..lattice.size()).map(|i| m.contains(lattice.value(i))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    descend(&lattice, &atoms, &member, lattice.top(), 0, &mut chosen, &mut out, cap)?;
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    lattice: &DivisorLattice,
    atoms: &[usize],
    member: &[bool],
    rem: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<AcmFactorization>,
    cap: u64,
) -> Result<()> {
    if rem == 0 {
        if out.len() as u64 >= cap {
            return Err(Error::BudgetExceeded(cap));
        }
        let mut parts: Vec<(u128, u64)> = Vec::new();
        for &a in chosen.iter() {
            let v = lattice.value(a);
            match parts.last_mut() {
                Some((u, m)) if *u == v => *m += 1,
                _ => parts.push((v, 1)),
            }
        }
        out.push(AcmFactorization(parts));
        return Ok(());
    }
    for (k, &a) in atoms.iter().enumerate().skip(from) {
        if let Some(q) = lattice.quotient(rem, a) {
            if member[q] {
                chosen.push(a);
                descend(lattice, atoms, member, q, k, chosen, out, cap)?;
                chosen.pop();
            }
        }
    }
    Ok(())
}

/// Exact ℓpᵐ(x) or ℓpᴹ(x) in `m`, with the lexicographically greatest
/// optimal multiplicity vector (atoms in increasing order) as witness.
pub fn acm_extremal_plength(m: &Acm, x: u128, p: ExtExponent, mode: Mode) -> Result<AcmExtremalResult> {
    check_member(m, x)?;
    let lattice = DivisorLattice::new(x)?;
    let atoms = lattice.atoms(m);
    let step = |j: usize, s: usize| lattice.quotient(s, atoms[j]);
    let table = SeparableTable::build(atoms.len(), lattice.size(), p, mode, DEFAULT_CELL_BUDGET, step)?;
    let top = lattice.top();
    let value = table.value(top).ok_or_else(|| Error::NotInMonoid(x.to_string()))?;
    let z = table
        .witness(top, step)
        .ok_or_else(|| Error::NotInMonoid(x.to_string()))?;
    let witness = AcmFactorization::new(atoms.iter().map(|&i| lattice.value(i)).zip(z).collect());
    Ok(AcmExtremalResult {
        x,
        p,
        mode,
        value,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::length::ExtExponent::{Finite, Infinity};
    use proptest::prelude::*;

    fn hilbert() -> Acm {
        Acm::new(1, 4).unwrap()
    }

    #[test]
    fn construction() {
        assert!(Acm::new(1, 4).is_ok());
        assert_eq!(Acm::new(16, 6).unwrap(), Acm::new(4, 6).unwrap());
        assert_eq!(Acm::new(6, 6).unwrap().a(), 6);
        assert_eq!(Acm::new(2, 4), Err(Error::NotIdempotent { a: 2, b: 4 }));
        assert!(Acm::new(0, 4).is_err());
    }

    #[test]
    fn membership_and_atoms() {
        let h = hilbert();
        assert!(h.contains(9) && h.contains(1) && !h.contains(3));
        assert!(!Acm::new(4, 6).unwrap().contains(14));
        for u in [9, 21, 49] {
            assert!(h.is_atom(u).unwrap());
        }
        assert!(!h.is_atom(441).unwrap());
        assert!(!Acm::new(6, 6).unwrap().is_atom(36).unwrap());
        assert!(Acm::new(4, 6).unwrap().is_atom(4).unwrap());
        assert_eq!(h.is_atom(3), Err(Error::NotInMonoid("3".into())));
        assert_eq!(h.atoms_up_to(30).unwrap(), vec![5, 9, 13, 17, 21, 29]);
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_integer(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_integer(1).unwrap(), vec![]);
        assert_eq!(factor_integer(97).unwrap(), vec![(97, 1)]);
    }

    #[test]
    fn hilbert_example() {
        let h = hilbert();
        let all = acm_factorizations(&h, 441, 100).unwrap();
        assert_eq!(
            all,
            vec![AcmFactorization(vec![(9, 1), (49, 1)]), AcmFactorization(vec![(21, 2)])]
        );
        let json = serde_json::to_string(&all[1]).unwrap();
        assert_eq!(json, r#"[{"atom":21,"mult":2}]"#);
        assert_eq!(acm_extremal_plength(&h, 441, Finite(0), Mode::Max).unwrap().value, 2);
        let r = acm_extremal_plength(&h, 441, Infinity, Mode::Max).unwrap();
        assert_eq!((r.value, r.witness.parts()), (2, &[(21, 2)][..]));
        assert_eq!(acm_factorizations(&h, 1, 10).unwrap(), vec![AcmFactorization(vec![])]);
        assert_eq!(acm_extremal_plength(&h, 1, Finite(1), Mode::Min).unwrap().value, 0);
    }

    #[test]
    fn other_monoids() {
        let m66 = Acm::new(6, 6).unwrap();
        let all = acm_factorizations(&m66, 216, 100).unwrap();
        assert!(all.contains(&AcmFactorization(vec![(12, 1), (18, 1)])));
        let m46 = Acm::new(4, 6).unwrap();
        assert_eq!(acm_factorizations(&m46, 4, 10).unwrap(), vec![AcmFactorization(vec![(4, 1)])]);
        assert!(acm_factorizations(&m46, 14, 10).is_err());
        assert_eq!(acm_factorizations(&m66, 6u128.pow(8), 2), Err(Error::BudgetExceeded(2)));
    }

    fn brute_optimum(m: &Acm, x: u128, p: ExtExponent, mode: Mode) -> Option<(u128, AcmFactorization)> {
        let all = acm_factorizations(m, x, 1_000_000).unwrap();
        let best = all.iter().map(|f| f.plength(p).unwrap()).reduce(|a, b| if mode.better(b, a) { b } else { a })?;
        let witness = all
            .iter()
            .filter(|f| f.plength(p).unwrap() == best)
            .max_by(|f, g| {
                let atoms = acm_atom_divisors(m, x).unwrap();
                let vec = |h: &AcmFactorization| {
                    atoms
                        .iter()
                        .map(|a| h.parts().iter().find(|(u, _)| u == a).map_or(0, |&(_, k)| k))
                        .collect::<Vec<_>>()
                };
                vec(f).cmp(&vec(g))
            })
            .cloned()?;
        Some((best, witness))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn factorizations_are_valid(
            (a, b) in prop::sample::select(vec![(1u64, 4u64), (4, 6), (6, 6), (1, 3), (3, 6), (9, 12)]),
            k in 1u128..400,
        ) {
            let m = Acm::new(a, b).unwrap();
            let x = if m.a() == 1 { 1 + k * b as u128 } else { m.a() as u128 * (1 + k * b as u128) };
            prop_assume!(m.contains(x));
            for f in acm_factorizations(&m, x, 100_000).unwrap() {
                prop_assert_eq!(f.product(), Some(x));
                for &(u, _) in f.parts() {
                    prop_assert!(m.is_atom(u).unwrap());
                }
            }
        }

        #[test]
        fn dp_matches_enumeration(
            (a, b) in prop::sample::select(vec![(1u64, 4u64), (4, 6), (6, 6), (1, 3)]),
            k in 1u128..2000,
            p in prop::sample::select(vec![Finite(0), Finite(1), Finite(2), Infinity]),
            max in any::<bool>(),
        ) {
            let m = Acm::new(a, b).unwrap();
            let x = m.a() as u128 * (1 + k * b as u128);
            prop_assume!(m.contains(x) && x > 1);
            let mode = if max { Mode::Max } else { Mode::Min };
            let r = acm_extremal_plength(&m, x, p, mode).unwrap();
            let (best, witness) = brute_optimum(&m, x, p, mode).unwrap();
            prop_assert_eq!(r.value, best);
            prop_assert_eq!(r.witness, witness);
        }
    }
}
