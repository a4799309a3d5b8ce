//! Exact extremal search for separable length functionals.
//!
//! A factorization is a choice of multiplicity for each atom. Every state
//! (a remaining semigroup element, or a remaining exponent vector) has a
//! "subtract one copy of atom j" move. Since ℓp is a sum (or max) of
//! per-atom terms, the optimum over atoms `j..` from state `s` only depends
//! on `(j, s)`, so a suffix table over all states is exact.

use crate::error::{Error, Result};
use crate::length::{ExtExponent, Mode};

pub(crate) struct SeparableTable {
    exponent: ExtExponent,
    mode: Mode,
    atoms: usize,
    /// `layers[j][s]`: best length using atoms `j..` to consume state `s`.
    layers: Vec<Vec<Option<u128>>>,
}

impl SeparableTable {
    /// `step(j, s)` returns the state left after removing one copy of atom `j`
    /// from `s`, or `None` when it does not fit. State 0 is the identity.
    pub fn build<F>(
        atoms: usize,
        states: usize,
        exponent: ExtExponent,
        mode: Mode,
        cell_budget: u64,
        step: F,
    ) -> Result<Self>
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let cells = (atoms as u64 + 1).saturating_mul(states as u64);
        if cells > cell_budget {
            return Err(Error::BudgetExceeded(cell_budget));
        }
        let mut layers = vec![Vec::new(); atoms + 1];
        let mut base = vec![None; states];
        if states > 0 {
            base[0] = Some(0);
        }
        layers[atoms] = base;
        for j in (0..atoms).rev() {
            let next = &layers[j + 1];
            let mut layer = vec![None; states];
            for (s, slot) in layer.iter_mut().enumerate() {
                let mut best: Option<u128> = None;
                let mut cur = Some(s);
                let mut m = 0u64;
                while let Some(c) = cur {
                    if let Some(rest) = next[c] {
                        let v = exponent.combine(exponent.term(m)?, rest)?;
                        if best.is_none_or(|b| mode.better(v, b)) {
                            best = Some(v);
                        }
                    }
                    m += 1;
                    cur = step(j, c);
                }
                *slot = best;
            }
            layers[j] = layer;
        }
        Ok(Self {
            exponent,
            mode,
            atoms,
            layers,
        })
    }

    pub fn value(&self, state: usize) -> Option<u128> {
        self.layers[0].get(state).copied().flatten()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Lexicographically greatest optimal multiplicity vector for `state`.
    pub fn witness<F>(&self, state: usize, step: F) -> Option<Vec<u64>>
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let opt = self.value(state)?;
        let p = self.exponent;
        let mut acc = 0u128;
        let mut s = state;
        let mut z = Vec::with_capacity(self.atoms);
        for j in 0..self.atoms {
            let mut chain = vec![s];
            while let Some(c) = step(j, *chain.last().unwrap()) {
                chain.push(c);
            }
            let (m, next_state, next_acc) = chain
                .iter()
                .enumerate()
                .rev()
                .find_map(|(m, &c)| {
                    let rest = self.layers[j + 1][c]?;
                    let acc2 = p.combine(acc, p.term(m as u64).ok()?).ok()?;
                    (p.combine(acc2, rest).ok()? == opt).then_some((m as u64, c, acc2))
                })?;
            z.push(m);
            s = next_state;
            acc = next_acc;
        }
        debug_assert_eq!(s, 0);
        Some(z)
    }
}

/// Exponent vectors bounded componentwise by a target, in mixed radix.
/// Index 0 is the zero vector and the target has the largest index.
pub(crate) struct ExponentBox {
    bounds: Vec<u32>,
    strides: Vec<usize>,
    coords: Vec<u32>,
    size: usize,
}

impl ExponentBox {
    pub fn new(bounds: &[u32], state_budget: u64) -> Result<Self> {
        let mut strides = Vec::with_capacity(bounds.len());
        let mut size = 1usize;
        for &b in bounds {
            strides.push(size);
            size = size
                .checked_mul(b as usize + 1)
                .filter(|&s| s as u64 <= state_budget)
                .ok_or(Error::BudgetExceeded(state_budget))?;
        }
        let r = bounds.len();
        let mut coords = vec![0u32; size * r];
        for idx in 0..size {
            for (d, (&stride, &b)) in strides.iter().zip(bounds).enumerate() {
                coords[idx * r + d] = ((idx / stride) % (b as usize + 1)) as u32;
            }
        }
        Ok(Self {
            bounds: bounds.to_vec(),
            strides,
            coords,
            size,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn target(&self) -> usize {
        self.size - 1
    }

    pub fn coords(&self, idx: usize) -> &[u32] {
        let r = self.bounds.len();
        &self.coords[idx * r..(idx + 1) * r]
    }

    pub fn index(&self, v: &[u32]) -> usize {
        v.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    /// State reached by removing `v` (with precomputed index `offset`).
    pub fn sub(&self, idx: usize, v: &[u32], offset: usize) -> Option<usize> {
        self.coords(idx)
            .iter()
            .zip(v)
            .all(|(a, b)| a >= b)
            .then(|| idx - offset)
    }
}
