//! The monoid M₄,₆ restricted to {2,5,7}-smooth elements, stored as
//! exponent triples so that large powers never have to be expanded.
//!
//! An element 2^e2·5^e5·7^e7 lies in M₄,₆ iff e2 ≥ 1 and e2 + e5 is even,
//! and it is an atom iff (e2, e5) = (2, 0) or e2 = 1 with e5 odd.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factor::DEFAULT_CELL_BUDGET;
use crate::length::{ExtExponent, Mode};
use crate::separable::{ExponentBox, SeparableTable};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmoothElement {
    pub e2: u32,
    pub e5: u32,
    pub e7: u32,
}

impl SmoothElement {
    pub const ONE: SmoothElement = SmoothElement { e2: 0, e5: 0, e7: 0 };

    pub const fn new(e2: u32, e5: u32, e7: u32) -> Self {
        Self { e2, e5, e7 }
    }

    /// Exponent triple of `x`, or `None` when `x` has another prime factor.
    pub fn from_integer(x: u128) -> Option<Self> {
        if x == 0 {
            return None;
        }
        let mut rem = x;
        let mut e = [0u32; 3];
        for (slot, p) in e.iter_mut().zip([2u128, 5, 7]) {
            while rem.is_multiple_of(p) {
                rem /= p;
                *slot += 1;
            }
        }
        (rem == 1).then(|| Self::new(e[0], e[1], e[2]))
    }

    pub fn exponents(&self) -> [u32; 3] {
        [self.e2, self.e5, self.e7]
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(2u32).pow(self.e2) * BigUint::from(5u32).pow(self.e5) * BigUint::from(7u32).pow(self.e7)
    }

    pub fn to_u128(&self) -> Option<u128> {
        2u128
            .checked_pow(self.e2)?
            .checked_mul(5u128.checked_pow(self.e5)?)?
            .checked_mul(7u128.checked_pow(self.e7)?)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let f = |e: u32| e.checked_mul(n).ok_or(Error::Overflow("smooth exponent"));
        Ok(Self::new(f(self.e2)?, f(self.e5)?, f(self.e7)?))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let f = |a: u32, b: u32| a.checked_add(b).ok_or(Error::Overflow("smooth exponent"));
        Ok(Self::new(f(self.e2, other.e2)?, f(self.e5, other.e5)?, f(self.e7, other.e7)?))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.e2 <= other.e2 && self.e5 <= other.e5 && self.e7 <= other.e7
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// Compares the represented integers.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl fmt::Display for SmoothElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A member of M₄,₆ that is irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SmoothAtom(SmoothElement);

impl SmoothAtom {
    pub fn element(&self) -> SmoothElement {
        self.0
    }
}

impl TryFrom<SmoothElement> for SmoothAtom {
    type Error = Error;

    fn try_from(u: SmoothElement) -> Result<Self> {
        if smooth_is_atom(&u)? {
            Ok(Self(u))
        } else {
            Err(Error::InvalidArgument(format!("{u} is not an atom of M(4,6)")))
        }
    }
}

impl fmt::Display for SmoothAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn smooth_is_member(u: &SmoothElement) -> bool {
    u.is_one() || (u.e2 >= 1 && (u.e2 + u.e5).is_multiple_of(2))
}

pub fn smooth_is_atom(u: &SmoothElement) -> Result<bool> {
    if u.is_one() || !smooth_is_member(u) {
        return Err(Error::NotInMonoid(u.to_string()));
    }
    Ok((u.e2 == 2 && u.e5 == 0) || (u.e2 == 1 && u.e5 % 2 == 1))
}

fn require_member(x: &SmoothElement) -> Result<()> {
    if smooth_is_member(x) {
        Ok(())
    } else {
        Err(Error::NotInMonoid(x.to_string()))
    }
}

/// Atoms dividing `x`, in increasing order of value.
pub fn atom_divisors(x: &SmoothElement) -> Vec<SmoothAtom> {
    let mut out = Vec::new();
    if x.e2 >= 2 {
        out.extend((0..=x.e7).map(|r| SmoothAtom(SmoothElement::new(2, 0, r))));
    }
    if x.e2 >= 1 {
        for q in (1..=x.e5).step_by(2) {
            out.extend((0..=x.e7).map(|r| SmoothAtom(SmoothElement::new(1, q, r))));
        }
    }
    let mut keyed: Vec<(BigUint, SmoothAtom)> = out.into_iter().map(|u| (u.0.value(), u)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, u)| u).collect()
}

/// A factorization in M₄,₆ as (atom, multiplicity) pairs, atoms increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmoothFactorization(Vec<(SmoothAtom, u64)>);

impl SmoothFactorization {
    pub fn new(parts: Vec<(SmoothAtom, u64)>) -> Self {
        let mut keyed: Vec<(BigUint, SmoothAtom, u64)> = Vec::new();
        for (u, m) in parts.into_iter().filter(|&(_, m)| m > 0) {
            match keyed.iter_mut().find(|(_, v, _)| *v == u) {
                Some(slot) => slot.2 += m,
                None => keyed.push((u.0.value(), u, m)),
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        Self(keyed.into_iter().map(|(_, u, m)| (u, m)).collect())
    }

    pub fn parts(&self) -> &[(SmoothAtom, u64)] {
        &self.0
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

    pub fn product(&self) -> Result<SmoothElement> {
        self.0.iter().try_fold(SmoothElement::ONE, |acc, &(u, m)| {
            let m = u32::try_from(m).map_err(|_| Error::Overflow("multiplicity"))?;
            acc.checked_mul(&u.0.pow(m)?)
        })
    }

    pub fn plength(&self, p: ExtExponent) -> Result<u128> {
        let z: Vec<u64> = self.0.iter().map(|&(_, m)| m).collect();
        crate::length::plength(&z, p)
    }
}

impl Serialize for SmoothFactorization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Part {
            atom: SmoothElement,
            mult: u64,
        }
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &(u, mult) in &self.0 {
            seq.serialize_element(&Part { atom: u.0, mult })?;
        }
        seq.end()
    }
}

/// Some factorization of a member `r` (possibly the unit).
fn factor_member(r: &SmoothElement) -> Result<Vec<(SmoothAtom, u64)>> {
    require_member(r)?;
    if r.is_one() {
        return Ok(Vec::new());
    }
    let four = SmoothAtom(SmoothElement::new(2, 0, 0));
    let mut parts = Vec::new();
    let rest_e2 = if r.e5 % 2 == 1 {
        parts.push((SmoothAtom(SmoothElement::new(1, r.e5, r.e7)), 1));
        r.e2 - 1
    } else if r.e5 > 0 {
        parts.push((SmoothAtom(SmoothElement::new(1, r.e5 - 1, r.e7)), 1));
        parts.push((SmoothAtom(SmoothElement::new(1, 1, 0)), 1));
        r.e2 - 2
    } else {
        parts.push((SmoothAtom(SmoothElement::new(2, 0, r.e7)), 1));
        r.e2 - 2
    };
    parts.push((four, u64::from(rest_e2 / 2)));
    Ok(parts)
}

/// Maximum number of distinct atoms in a factorization, with a witness.
#[derive(Clone, Debug, Serialize)]
pub struct Ell0Max {
    pub value: u64,
    pub witness: SmoothFactorization,
}

/// ℓ₀ᴹ(xⁿ) in M₄,₆.
pub fn ell0_max_exact(x: &SmoothElement, n: u32) -> Result<u64> {
    ell0_max_value(x, n, DEFAULT_CELL_BUDGET)
}

/// ℓ₀ᴹ(xⁿ) without a witness; memory is linear in the number of divisors.
pub fn ell0_max_value(x: &SmoothElement, n: u32, cell_budget: u64) -> Result<u64> {
    require_member(x)?;
    let target = x.pow(n)?;
    let k = Knapsack::run(&target, cell_budget, false)?;
    Ok(k.best().1 as u64)
}

/// ℓ₀ᴹ(xⁿ) with a witness factorization.
///
/// A set D of distinct atoms is realizable iff the product of its members
/// divides xⁿ with a cofactor in M₄,₆, because the cofactor then factors
/// further. A 0/1 knapsack over exponent vectors records, for each
/// product, the largest D reaching it exactly.
pub fn ell0_max_search(x: &SmoothElement, n: u32, cell_budget: u64) -> Result<Ell0Max> {
    require_member(x)?;
    let target = x.pow(n)?;
    let k = Knapsack::run(&target, cell_budget, true)?;
    let (best_state, best) = k.best();
    let mut parts = Vec::new();
    let mut s = best_state;
    for j in (0..k.atoms.len()).rev() {
        if k.taken[j * k.states + s] {
            parts.push((k.atoms[j], 1));
            s -= k.offsets[j];
        }
    }
    parts.extend(factor_member(&k.residual(best_state))?);
    let witness = SmoothFactorization::new(parts);
    if s != 0 || witness.product()? != target || witness.distinct() as i32 != best {
        return Err(Error::ConstructionInvalid(format!(
            "distinct-atom witness for {x}^{n} failed to verify"
        )));
    }
    Ok(Ell0Max {
        value: best as u64,
        witness,
    })
}

struct Knapsack {
    target: SmoothElement,
    atoms: Vec<SmoothAtom>,
    offsets: Vec<usize>,
    states: usize,
    /// `reach[s]`: most distinct atoms whose product is exactly state `s`.
    reach: Vec<i32>,
    taken: Vec<bool>,
}

impl Knapsack {
    fn run(target: &SmoothElement, cell_budget: u64, keep_taken: bool) -> Result<Self> {
        let atoms = atom_divisors(target);
        let [x2, x5, x7] = target.exponents().map(|e| e as usize);
        let (w2, w5) = (x2 + 1, (x2 + 1) * (x5 + 1));
        let states = w5
            .checked_mul(x7 + 1)
            .filter(|&s| (s as u64).saturating_mul(atoms.len() as u64) <= cell_budget)
            .ok_or(Error::BudgetExceeded(cell_budget))?;
        let offsets: Vec<usize> = atoms
            .iter()
            .map(|u| u.0.e2 as usize + w2 * u.0.e5 as usize + w5 * u.0.e7 as usize)
            .collect();
        let mut reach = vec![-1i32; states];
        reach[0] = 0;
        let mut taken = if keep_taken { vec![false; atoms.len() * states] } else { Vec::new() };
        for (j, (u, &off)) in atoms.iter().zip(&offsets).enumerate() {
            let [v2, v5, v7] = u.0.exponents().map(|e| e as usize);
            // descending index order, so each atom is used at most once
            for c7 in (v7..=x7).rev() {
                for c5 in (v5..=x5).rev() {
                    let row = c5 * w2 + c7 * w5;
                    for c2 in (v2..=x2).rev() {
                        let s = row + c2;
                        let r = reach[s - off];
                        if r >= 0 && r + 1 > reach[s] {
                            reach[s] = r + 1;
                            if keep_taken {
                                taken[j * states + s] = true;
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            target: *target,
            atoms,
            offsets,
            states,
            reach,
            taken,
        })
    }

    fn coords(&self, s: usize) -> SmoothElement {
        let w2 = self.target.e2 as usize + 1;
        let w5 = w2 * (self.target.e5 as usize + 1);
        SmoothElement::new((s % w2) as u32, ((s % w5) / w2) as u32, (s / w5) as u32)
    }

    fn residual(&self, s: usize) -> SmoothElement {
        let c = self.coords(s);
        let t = self.target;
        SmoothElement::new(t.e2 - c.e2, t.e5 - c.e5, t.e7 - c.e7)
    }

    /// Lowest-index state attaining the largest realizable set.
    fn best(&self) -> (usize, i32) {
        (0..self.states)
            .filter(|&s| self.reach[s] >= 0 && smooth_is_member(&self.residual(s)))
            .map(|s| (s, self.reach[s]))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
    }
}

fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// ℓ₀ᴹ(28ⁿ) = k + 1 for T_k ≤ n < T_{k+1}, valid from n = 3.
pub fn ell0_max_28_closed(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::ThresholdNotMet { n, threshold: 3 });
    }
    let mut k = 2;
    while triangular(k + 1) <= n {
        k += 1;
    }
    Ok(k + 1)
}

/// ℓ₀ᴹ(40ⁿ) = k + 1 for k² ≤ n < (k+1)².
pub fn ell0_max_40_closed(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::ThresholdNotMet { n, threshold: 1 });
    }
    Ok(n.isqrt() + 1)
}

/// A factorization of 70ⁿ with T_k + 1 distinct atoms, n = Σ_{a ≤ k} a².
///
/// Uses the atoms 2·5^(2i−1)·7^(2(a−i)+1) for 1 ≤ i ≤ a ≤ k together with
/// enough copies of 4 to balance the exponent of 2.
pub fn construct_70_factorization(k: u32) -> Result<(u64, SmoothFactorization)> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("k must be even and at least 2, got {k}")));
    }
    let k64 = u64::from(k);
    let n = k64 * (k64 + 1) * (2 * k64 + 1) / 6;
    let t = triangular(k64);
    let mut parts = Vec::new();
    for a in 1..=k {
        for i in 1..=a {
            let u = SmoothElement::new(1, 2 * i - 1, 2 * (a - i) + 1);
            parts.push((SmoothAtom::try_from(u)?, 1));
        }
    }
    parts.push((SmoothAtom(SmoothElement::new(2, 0, 0)), (n - t) / 2));
    let f = SmoothFactorization::new(parts);
    let n32 = u32::try_from(n).map_err(|_| Error::Overflow("construction size"))?;
    let expected = SmoothElement::new(1, 1, 1).pow(n32)?;
    if f.product()? != expected || f.distinct() as u64 != t + 1 {
        return Err(Error::ConstructionInvalid(format!(
            "product for k = {k} is {:?}, expected {expected:?}",
            f.product()?
        )));
    }
    Ok((n, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Goodness {
    Good,
    Evil,
}

/// Good iff x.e2·(u.e5 + u.e7) ≤ 3·u.e2·(x.e5 + x.e7).
pub fn good_evil_classify(x: &SmoothElement, u: &SmoothAtom) -> Goodness {
    let u = u.0;
    let lhs = u64::from(x.e2) * (u64::from(u.e5) + u64::from(u.e7));
    let rhs = 3 * u64::from(u.e2) * (u64::from(x.e5) + u64::from(x.e7));
    if lhs <= rhs {
        Goodness::Good
    } else {
        Goodness::Evil
    }
}

/// The good atoms for `x`, in increasing order of value.
pub fn good_atoms(x: &SmoothElement) -> Result<Vec<SmoothAtom>> {
    if x.e2 == 0 {
        return Err(Error::NotInMonoid(x.to_string()));
    }
    let budget = 6 * (x.e5 + x.e7) / x.e2;
    let bound = SmoothElement::new(2, budget, budget);
    Ok(atom_divisors(&bound)
        .into_iter()
        .filter(|u| good_evil_classify(x, u) == Goodness::Good)
        .collect())
}

/// Number of good atoms for `x`. A pure power of 2 has exactly one (the atom 4).
pub fn count_good_atoms(x: &SmoothElement) -> Result<u64> {
    if x.e2 == 0 {
        return Err(Error::NotInMonoid(x.to_string()));
    }
    let s = u64::from(x.e5) + u64::from(x.e7);
    let a = u64::from(x.e2);
    // 4·7^r: r ≤ 6s/a.  2·5^q·7^r with q odd: q + r ≤ 3s/a.
    let even = 6 * s / a + 1;
    let l = 3 * s / a;
    let odd: u64 = (1..=l).step_by(2).map(|q| l - q + 1).sum();
    Ok(even + odd)
}

/// Every factorization of `x`, up to `cap` of them.
pub fn smooth_factorizations(x: &SmoothElement, cap: u64) -> Result<Vec<SmoothFactorization>> {
    require_member(x)?;
    let atoms = atom_divisors(x);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    smooth_descend(&atoms, *x, 0, &mut chosen, &mut out, cap)?;
    Ok(out)
}

fn smooth_descend(
    atoms: &[SmoothAtom],
    rem: SmoothElement,
    from: usize,
    chosen: &mut Vec<(SmoothAtom, u64)>,
    out: &mut Vec<SmoothFactorization>,
    cap: u64,
) -> Result<()> {
    if rem.is_one() {
        if out.len() as u64 >= cap {
            return Err(Error::BudgetExceeded(cap));
        }
        out.push(SmoothFactorization::new(chosen.clone()));
        return Ok(());
    }
    for (k, u) in atoms.iter().enumerate().skip(from) {
        let v = u.0;
        if v.divides(&rem) {
            let q = SmoothElement::new(rem.e2 - v.e2, rem.e5 - v.e5, rem.e7 - v.e7);
            if smooth_is_member(&q) {
                chosen.push((*u, 1));
                smooth_descend(atoms, q, k, chosen, out, cap)?;
                chosen.pop();
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothExtremalResult {
    pub x: SmoothElement,
    pub p: ExtExponent,
    pub mode: Mode,
    pub value: u128,
    pub witness: SmoothFactorization,
}

/// Exact ℓpᵐ or ℓpᴹ of a member, by dynamic programming over the exponent box.
pub fn smooth_extremal_plength(
    x: &SmoothElement,
    p: ExtExponent,
    mode: Mode,
    cell_budget: u64,
) -> Result<SmoothExtremalResult> {
    require_member(x)?;
    let atoms = atom_divisors(x);
    let grid = ExponentBox::new(&x.exponents(), cell_budget)?;
    let vecs: Vec<[u32; 3]> = atoms.iter().map(|u| u.0.exponents()).collect();
    let offsets: Vec<usize> = vecs.iter().map(|v| grid.index(v)).collect();
    let step = |j: usize, s: usize| grid.sub(s, &vecs[j], offsets[j]);
    let table = SeparableTable::build(atoms.len(), grid.size(), p, mode, cell_budget, step)?;
    let top = grid.target();
    let missing = || Error::NotInMonoid(x.to_string());
    let value = table.value(top).ok_or_else(missing)?;
    let z = table.witness(top, step).ok_or_else(missing)?;
    Ok(SmoothExtremalResult {
        x: *x,
        p,
        mode,
        value,
        witness: SmoothFactorization::new(atoms.into_iter().zip(z).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GrowthBase {
    Smooth(SmoothElement),
    Integer(u128),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthPoint {
    pub n: u32,
    pub value: u128,
}

/// Exact values of a length functional along the powers xⁿ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthSeries {
    pub base: GrowthBase,
    pub p: ExtExponent,
    pub mode: Mode,
    pub points: Vec<GrowthPoint>,
    pub fitted_exponent: Option<f64>,
    pub residual: Option<f64>,
}

impl GrowthSeries {
    pub fn from_points(base: GrowthBase, p: ExtExponent, mode: Mode, points: Vec<GrowthPoint>) -> Self {
        let half = points.len() / 2;
        let fit = fit_loglog(&points[half..]);
        Self {
            base,
            p,
            mode,
            points,
            fitted_exponent: fit.map(|f| f.0),
            residual: fit.map(|f| f.1),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for pt in &self.points {
            out.push_str(&format!("{},{}\n", pt.n, pt.value));
        }
        out
    }
}

/// Least-squares slope of log(value) against log(n), with the root mean
/// square residual. Points with n = 0 or value = 0 are ignored.
pub fn fit_loglog(points: &[GrowthPoint]) -> Option<(f64, f64)> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.n > 0 && p.value > 0)
        .map(|p| ((p.n as f64).ln(), (p.value as f64).ln()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = xy.iter().map(|p| (p.1 - icept - slope * p.0).powi(2)).sum();
    Some((slope, (rss / m).sqrt()))
}

/// Values of the functional at xⁿ for n = 1..=n_max.
pub fn growth_series(
    x: &SmoothElement,
    p: ExtExponent,
    mode: Mode,
    n_max: u32,
    cell_budget: u64,
) -> Result<GrowthSeries> {
    require_member(x)?;
    use rayon::prelude::*;
    let points = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let value = if p == ExtExponent::Finite(0) && mode == Mode::Max {
                u128::from(ell0_max_search(x, n, cell_budget)?.value)
            } else {
                smooth_extremal_plength(&x.pow(n)?, p, mode, cell_budget)?.value
            };
            Ok(GrowthPoint { n, value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthSeries::from_points(GrowthBase::Smooth(*x), p, mode, points))
}
