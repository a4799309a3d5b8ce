//! Factorization sets of numerical semigroup elements and exact extremal
//! p-lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::length::{plength, ExtExponent, Mode};
use crate::semigroup::NumericalSemigroup;
use crate::separable::SeparableTable;

/// Default cap on the number of factorizations an enumeration may produce.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Default cap on dynamic-programming cells (atoms × states).
pub const DEFAULT_CELL_BUDGET: u64 = 500_000_000;

/// Exponent vector `z` with `Σ zᵢgᵢ` equal to the element it factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization(Vec<u64>);

impl Factorization {
    pub fn new(s: &NumericalSemigroup, n: u64, z: Vec<u64>) -> Result<Self> {
        if z.len() != s.rank() {
            return Err(Error::InvalidArgument(format!(
                "factorization has {} coordinates, semigroup has {} generators",
                z.len(),
                s.rank()
            )));
        }
        let total = z
            .iter()
            .zip(s.generators())
            .try_fold(0u64, |acc, (&zi, &g)| acc.checked_add(zi.checked_mul(g)?))
            .ok_or(Error::Overflow("factorization sum"))?;
        if total != n {
            return Err(Error::InvalidArgument(format!(
                "exponents {z:?} sum to {total}, not {n}"
            )));
        }
        Ok(Self(z))
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn plength(&self, p: ExtExponent) -> Result<u128> {
        plength(&self.0, p)
    }
}

/// An extremal p-length together with a factorization attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub n: u64,
    pub p: ExtExponent,
    pub mode: Mode,
    pub value: u128,
    pub witness: Factorization,
}

/// All factorizations of `n`, largest first coordinate first.
///
/// Plain bounded recursion over the generators from largest to smallest.
/// This is the reference enumeration the dynamic program is checked against.
pub fn factorizations(s: &NumericalSemigroup, n: u64, budget: u64) -> Result<Vec<Factorization>> {
    let gens = s.generators();
    let mut out = Vec::new();
    let mut z = vec![0u64; gens.len()];
    recurse(gens, gens.len() - 1, n, &mut z, &mut out, budget)?;
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

fn recurse(
    gens: &[u64],
    i: usize,
    remaining: u64,
    z: &mut Vec<u64>,
    out: &mut Vec<Factorization>,
    budget: u64,
) -> Result<()> {
    let g = gens[i];
    if i == 0 {
        if remaining.is_multiple_of(g) {
            z[0] = remaining / g;
            if out.len() as u64 >= budget {
                return Err(Error::BudgetExceeded(budget));
            }
            out.push(Factorization(z.clone()));
        }
        return Ok(());
    }
    for zi in 0..=remaining / g {
        z[i] = zi;
        recurse(gens, i - 1, remaining - zi * g, z, out, budget)?;
    }
    z[i] = 0;
    Ok(())
}

/// Exact extremal p-lengths for every element up to a bound.
///
/// Row `j` of the underlying table holds the optimum over generators `j..`
/// for each remaining value, so a single build answers every `n ≤ n_max`.
pub struct PLengthTable {
    semigroup: NumericalSemigroup,
    n_max: u64,
    exponent: ExtExponent,
    table: SeparableTable,
}

impl PLengthTable {
    pub fn build(s: &NumericalSemigroup, n_max: u64, p: ExtExponent, mode: Mode) -> Result<Self> {
        Self::with_budget(s, n_max, p, mode, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(
        s: &NumericalSemigroup,
        n_max: u64,
        p: ExtExponent,
        mode: Mode,
        cell_budget: u64,
    ) -> Result<Self> {
        let states = usize::try_from(n_max)
            .ok()
            .and_then(|n| n.checked_add(1))
            .ok_or(Error::Overflow("table size"))?;
        let gens = s.generators();
        let table = SeparableTable::build(gens.len(), states, p, mode, cell_budget, |j, st| {
            st.checked_sub(gens[j] as usize)
        })?;
        Ok(Self {
            semigroup: s.clone(),
            n_max,
            exponent: p,
            table,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Optimum at `n`, or `None` when `n` is outside the semigroup or the table.
    pub fn value(&self, n: u64) -> Option<u128> {
        if n > self.n_max {
            return None;
        }
        self.table.value(n as usize)
    }

    pub fn witness(&self, n: u64) -> Option<Factorization> {
        if n > self.n_max {
            return None;
        }
        let gens = self.semigroup.generators();
        self.table
            .witness(n as usize, |j, st| st.checked_sub(gens[j] as usize))
            .map(Factorization)
    }

    pub fn result(&self, n: u64) -> Result<ExtremalResult> {
        let value = self.value(n).ok_or(Error::NotInSemigroup(n))?;
        let witness = self.witness(n).ok_or(Error::NotInSemigroup(n))?;
        Ok(ExtremalResult {
            n,
            p: self.exponent,
            mode: self.table.mode(),
            value,
            witness,
        })
    }
}

/// Exact ℓpᵐ(n) or ℓpᴹ(n) with a witness.
///
/// Among optimal factorizations the witness is the lexicographically
/// greatest one.
pub fn extremal_plength(s: &NumericalSemigroup, n: u64, p: ExtExponent, mode: Mode) -> Result<ExtremalResult> {
    if !s.contains(n) {
        return Err(Error::NotInSemigroup(n));
    }
    PLengthTable::build(s, n, p, mode)?.result(n)
}
