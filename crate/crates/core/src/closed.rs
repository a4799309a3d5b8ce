//! Closed forms for extremal lengths of large semigroup elements, with the
//! validity thresholds they come with, and the integer-relaxation ℓ₂
//! minimizer used for the quadratic minimum length.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{extremal_plength, PLengthTable};
use crate::length::{ExtExponent, Mode};
use crate::semigroup::NumericalSemigroup;

/// Validity thresholds of the closed forms; each holds for `n > threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    /// (g₁ − 1)·g_k, minimum classical length recurrence.
    pub min1: u128,
    /// (g_{k−1} − 1)·g_k, maximum classical length recurrence.
    pub max1: u128,
    /// g_k², periodicity of the minimum 0-length.
    pub min0: u128,
    /// F(S) + g, maximum 0-length equals k.
    pub max0: u128,
    /// g₁²·g, maximum ∞-length closed form.
    pub max_inf: u128,
    /// g², minimum ∞-length closed form.
    pub min_inf: u128,
}

impl Thresholds {
    pub fn of(s: &NumericalSemigroup) -> Self {
        let g1 = s.smallest() as u128;
        let gk = s.largest() as u128;
        let gens = s.generators();
        let g_prev = gens[gens.len() - 2] as u128;
        let g = s.generator_sum() as u128;
        Self {
            min1: (g1 - 1) * gk,
            max1: (g_prev - 1) * gk,
            min0: gk * gk,
            max0: (s.frobenius() as i128 + g as i128) as u128,
            max_inf: g1 * g1 * g,
            min_inf: g * g,
        }
    }
}

fn require_above(n: u64, threshold: u128) -> Result<()> {
    if (n as u128) <= threshold {
        Err(Error::ThresholdNotMet { n, threshold })
    } else {
        Ok(())
    }
}

/// ℓ∞ᴹ(n) = (n − aᵢ)/g₁ with aᵢ ∈ Ap(S; g₁) in the class of n, for n > g₁²g.
pub fn closed_max_inf(s: &NumericalSemigroup, n: u64) -> Result<u128> {
    require_above(n, Thresholds::of(s).max_inf)?;
    if !s.contains(n) {
        return Err(Error::NotInSemigroup(n));
    }
    Ok(((n - s.apery_first_entry(n)) / s.smallest()) as u128)
}

/// ℓ∞ᵐ(n) = (n + aᵢ)/g with aᵢ ∈ Ap(S; g), i ≡ −n mod g, for n > g².
pub fn closed_min_inf(s: &NumericalSemigroup, n: u64) -> Result<u128> {
    require_above(n, Thresholds::of(s).min_inf)?;
    if !s.contains(n) {
        return Err(Error::NotInSemigroup(n));
    }
    let g = s.generator_sum();
    let class = (g - n % g) % g;
    let a = s.apery_sum_entry(class) as u128;
    Ok((n as u128 + a) / g as u128)
}

/// Largest first coordinate of any factorization of `n ∈ S`.
pub fn max_first_coordinate(s: &NumericalSemigroup, n: u64) -> Option<u64> {
    s.contains(n)
        .then(|| (n - s.apery_first_entry(n)) / s.smallest())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthRecurrence {
    /// ℓ₁ᵐ(n) = ℓ₁ᵐ(n − g_k) + 1.
    Min1,
    /// ℓ₁ᴹ(n) = ℓ₁ᴹ(n − g₁) + 1.
    Max1,
}

/// Evaluates ℓ₁ᵐ or ℓ₁ᴹ by unwinding the +1 recurrence.
///
/// Steps are only taken while the landing point stays above the threshold,
/// so the base value comes from the window `(threshold, threshold + step]`.
pub fn closed_len_recurrence(s: &NumericalSemigroup, n: u64, which: LengthRecurrence) -> Result<u128> {
    let t = Thresholds::of(s);
    let (threshold, step, mode) = match which {
        LengthRecurrence::Min1 => (t.min1, s.largest(), Mode::Min),
        LengthRecurrence::Max1 => (t.max1, s.smallest(), Mode::Max),
    };
    require_above(n, threshold)?;
    if !s.contains(n) {
        return Err(Error::NotInSemigroup(n));
    }
    let above = n as u128 - threshold;
    // number of steps with the landing point still > threshold
    let steps = (above - 1) / step as u128;
    let base = n - (steps as u64) * step;
    let base_value = extremal_plength(s, base, ExtExponent::Finite(1), mode)?.value;
    Ok(base_value + steps)
}

/// ℓ₂-minimal integer (possibly negative) solution of Σ xᵢgᵢ = n.
///
/// Among minimizers the lexicographically greatest is returned, together
/// with its ℓ₂ value.
pub fn integer_l2_minimizer(s: &NumericalSemigroup, n: i128) -> (Vec<i128>, u128) {
    let gens: Vec<i128> = s.generators().iter().map(|&g| g as i128).collect();
    let k = gens.len();
    let big_n: i128 = gens.iter().map(|g| g * g).sum();
    let gk = gens[k - 1];
    let g: i128 = gens.iter().sum();
    // Reducing the first k−1 coordinates modulo g_k puts some solution within
    // squared distance q/4 of the real minimizer n·g/N, and every solution z
    // satisfies |z|² = |x*|² + |z − x*|².
    let q = (k as i128 - 1) * gk * gk + (g - gk) * (g - gk);
    let bound = big_n * big_n * q; // compare against 4·Σ(N zᵢ − n gᵢ)²
    let radius = ((q as f64).sqrt() / 2.0).ceil() as i128 + 1;

    let mut search = L2Search {
        gens: &gens,
        n,
        big_n,
        bound,
        radius,
        best: None,
        z: vec![0; k],
    };
    search.descend(0, 0, 0);
    let (value, z) = search.best.expect("a lattice point always lies in the search box");
    (z, value as u128)
}

struct L2Search<'a> {
    gens: &'a [i128],
    n: i128,
    big_n: i128,
    bound: i128,
    radius: i128,
    best: Option<(i128, Vec<i128>)>,
    z: Vec<i128>,
}

impl L2Search<'_> {
    fn descend(&mut self, i: usize, partial_sum: i128, partial_dev: i128) {
        let k = self.gens.len();
        if i == k - 1 {
            let rest = self.n - partial_sum;
            let gi = self.gens[i];
            if rest % gi != 0 {
                return;
            }
            let zi = rest / gi;
            let dev = self.big_n * zi - self.n * gi;
            if 4 * (partial_dev + dev * dev) > self.bound {
                return;
            }
            self.z[i] = zi;
            let value: i128 = self.z.iter().map(|x| x * x).sum();
            let better = match &self.best {
                None => true,
                Some((bv, bz)) => value < *bv || (value == *bv && self.z > *bz),
            };
            if better {
                self.best = Some((value, self.z.clone()));
            }
            return;
        }
        let gi = self.gens[i];
        let center = (self.n * gi).div_euclid(self.big_n);
        for zi in center - self.radius..=center + self.radius + 1 {
            let dev = self.big_n * zi - self.n * gi;
            let d2 = partial_dev + dev * dev;
            if 4 * d2 > self.bound {
                continue;
            }
            self.z[i] = zi;
            self.descend(i + 1, partial_sum + zi * gi, d2);
        }
    }
}

/// Shifting an ℓ₂ minimizer for `n` by (g₁, …, g_k) gives an ℓ₂ minimizer
/// for `n + N`, N = Σ gᵢ².
pub fn min2_shift_check(s: &NumericalSemigroup, n: u64) -> bool {
    let big_n = s.square_sum() as i128;
    let (z, _) = integer_l2_minimizer(s, n as i128);
    let shifted: u128 = z
        .iter()
        .zip(s.generators())
        .map(|(&zi, &g)| {
            let v = zi + g as i128;
            (v * v) as u128
        })
        .sum();
    let (_, target) = integer_l2_minimizer(s, n as i128 + big_n);
    shifted == target
}

/// First `n*` from which ℓ₂ᵐ agrees with the integer-relaxation minimum for
/// N consecutive values; by the shift property the agreement, and with it
/// the second-difference law, then persists for every larger n.
pub fn min2_stabilization(s: &NumericalSemigroup, limit: u64) -> Result<Option<u64>> {
    let table = PLengthTable::build(s, limit, ExtExponent::Finite(2), Mode::Min)?;
    Ok(min2_stabilization_from(s, &table))
}

pub(crate) fn min2_stabilization_from(s: &NumericalSemigroup, table: &PLengthTable) -> Option<u64> {
    let big_n = s.square_sum();
    let mut run = 0u64;
    for n in 0..=table.n_max() {
        let agrees = table
            .value(n)
            .is_some_and(|v| v == integer_l2_minimizer(s, n as i128).1);
        if agrees {
            run += 1;
            if run == big_n {
                return Some(n + 1 - big_n);
            }
        } else {
            run = 0;
        }
    }
    None
}
