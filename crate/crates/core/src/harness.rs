//! Replays the known results on finite windows and collects pass/fail
//! checks with concrete counterexamples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::acm::{acm_extremal_plength, acm_factorizations, factor_integer, Acm};
use crate::closed::{
    closed_max_inf, closed_min_inf, min2_shift_check, min2_stabilization_from, Thresholds,
};
use crate::error::{Error, Result};
use crate::factor::{factorizations, PLengthTable, DEFAULT_BUDGET, DEFAULT_CELL_BUDGET};
use crate::length::{ExtExponent, Mode};
use crate::m46::{
    construct_70_factorization, count_good_atoms, ell0_max_28_closed, ell0_max_40_closed,
    ell0_max_exact, fit_loglog, good_evil_classify, smooth_extremal_plength, smooth_factorizations,
    smooth_is_atom, smooth_is_member, Goodness, GrowthPoint, SmoothElement,
};
use crate::quasi::{qp_detect, SampleWindow};
use crate::semigroup::NumericalSemigroup;
use crate::table1::{verify_row, ROWS};

use ExtExponent::{Finite, Infinity};

/// Tunables for a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Restricts windowed checks to `lo..=hi`.
    pub window: Option<(u64, u64)>,
    /// Cap on enumerated factorizations.
    pub budget: u64,
    /// Cap on dynamic-programming cells.
    pub cell_budget: u64,
    pub d_max: usize,
    pub pi_max: u64,
    /// Accepted interval for fitted growth exponents.
    pub fit_interval: (f64, f64),
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window: None,
            budget: DEFAULT_BUDGET,
            cell_budget: DEFAULT_CELL_BUDGET,
            d_max: 4,
            pi_max: 60,
            fit_interval: (0.5, 0.85),
            seed: 0,
            samples: 50,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 || self.cell_budget == 0 {
            return Err(Error::InvalidArgument("budgets must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.window {
            if lo > hi {
                return Err(Error::InvalidArgument(format!("empty window {lo}:{hi}")));
            }
        }
        if self.fit_interval.0 > self.fit_interval.1 {
            return Err(Error::InvalidArgument("fit interval is empty".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub claim: String,
    pub window: Option<(u64, u64)>,
    pub status: CheckStatus,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    fn new(claim: &str, window: Option<(u64, u64)>) -> Self {
        Self {
            claim: claim.into(),
            window,
            status: CheckStatus::Skipped,
            checked: 0,
            counterexample: None,
            detail: None,
        }
    }

    /// Records one instance; only the first failure is kept.
    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.checked += 1;
        if ok {
            if self.status == CheckStatus::Skipped {
                self.status = CheckStatus::Pass;
            }
        } else if self.status != CheckStatus::Fail {
            self.status = CheckStatus::Fail;
            self.counterexample = Some(counterexample());
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// A quantity that is reported but not pass/fail, such as an empirical
/// growth exponent of an asymptotic claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: Option<f64>,
    pub interval: (f64, f64),
    pub within: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub subject: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub measurements: Vec<Measurement>,
    pub all_pass: bool,
}

impl VerificationReport {
    fn assemble(subject: Value, thresholds: Option<Thresholds>, groups: Vec<Vec<Check>>, measurements: Vec<Measurement>) -> Self {
        let mut checks: Vec<Check> = groups.into_iter().flatten().collect();
        checks.sort_by(|a, b| a.claim.cmp(&b.claim));
        let all_pass = checks.iter().all(|c| c.status != CheckStatus::Fail);
        Self {
            subject,
            thresholds,
            checks,
            measurements,
            all_pass,
        }
    }

    pub fn check(&self, claim: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.claim == claim)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

fn mismatch(n: u64, expected: impl Serialize, actual: impl Serialize) -> Value {
    json!({ "n": n, "expected": expected, "actual": actual })
}

struct NsContext<'a> {
    s: &'a NumericalSemigroup,
    cfg: &'a RunConfig,
    t: Thresholds,
}

impl NsContext<'_> {
    /// Window `(threshold, threshold + 500]` unless the configuration narrows it.
    fn range(&self, threshold: u128) -> (u64, u64) {
        let first = threshold as u64 + 1;
        match self.cfg.window {
            Some((lo, hi)) => (lo.max(first), hi),
            None => (first, first + 499),
        }
    }

    fn table(&self, n_max: u64, p: ExtExponent, mode: Mode) -> Result<PLengthTable> {
        PLengthTable::with_budget(self.s, n_max, p, mode, self.cfg.cell_budget)
    }

    /// `f(n) = f(n − step) + 1` on the window above `threshold`.
    fn plus_one(&self, claim: &str, threshold: u128, step: u64, p: ExtExponent, mode: Mode) -> Result<Check> {
        let (lo, hi) = self.range(threshold);
        let mut check = Check::new(claim, Some((lo, hi)));
        let table = self.table(hi, p, mode)?;
        for n in lo..=hi {
            if n < step || !self.s.contains(n) || !self.s.contains(n - step) {
                continue;
            }
            let (a, b) = (table.value(n), table.value(n - step));
            check.record(a.is_some() && a == b.map(|v| v + 1), || {
                mismatch(n, b.map(|v| v + 1), a)
            });
        }
        Ok(check.with_detail(json!({ "threshold": threshold, "step": step })))
    }

    fn closed_form(&self, claim: &str, threshold: u128, mode: Mode) -> Result<Check> {
        let (lo, hi) = self.range(threshold);
        let mut check = Check::new(claim, Some((lo, hi)));
        let table = self.table(hi, Infinity, mode)?;
        for n in (lo..=hi).filter(|&n| self.s.contains(n)) {
            let closed = match mode {
                Mode::Max => closed_max_inf(self.s, n)?,
                Mode::Min => closed_min_inf(self.s, n)?,
            };
            let dp = table.value(n);
            check.record(dp == Some(closed), || mismatch(n, dp, closed));
        }
        Ok(check.with_detail(json!({ "threshold": threshold })))
    }
}

fn ns_l0_checks(c: &NsContext) -> Result<Vec<Check>> {
    let s = c.s;
    let lcm = s.generator_lcm();
    let (lo, hi) = c.range(c.t.min0);
    let mut periodic = Check::new("l0-min-periodic", Some((lo, hi)));
    let table = c.table(hi + lcm, Finite(0), Mode::Min)?;
    for n in (lo..=hi).filter(|&n| s.contains(n)) {
        let (a, b) = (table.value(n), table.value(n + lcm));
        periodic.record(a == b, || mismatch(n, a, b));
    }
    let periodic = periodic.with_detail(json!({ "threshold": c.t.min0, "period": lcm }));

    let (lo, hi) = c.range(c.t.max0);
    let mut rank = Check::new("l0-max-equals-rank", Some((lo, hi)));
    let table = c.table(hi, Finite(0), Mode::Max)?;
    let k = s.rank() as u128;
    for n in lo..=hi {
        let v = table.value(n);
        rank.record(v == Some(k), || mismatch(n, k, v));
    }
    let rank = rank.with_detail(json!({ "threshold": c.t.max0 }));
    Ok(vec![periodic, rank])
}

fn ns_l1_checks(c: &NsContext) -> Result<Vec<Check>> {
    let s = c.s;
    Ok(vec![
        c.plus_one("l1-min-recurrence", c.t.min1, s.largest(), Finite(1), Mode::Min)?,
        c.plus_one("l1-max-recurrence", c.t.max1, s.smallest(), Finite(1), Mode::Max)?,
    ])
}

fn ns_linf_checks(c: &NsContext) -> Result<Vec<Check>> {
    let s = c.s;
    let g = s.generator_sum();
    let mut out = vec![
        c.closed_form("linf-max-closed-form", c.t.max_inf, Mode::Max)?,
        c.closed_form("linf-min-closed-form", c.t.min_inf, Mode::Min)?,
        c.plus_one("linf-max-recurrence", c.t.max_inf, s.smallest(), Infinity, Mode::Max)?,
        c.plus_one("linf-min-recurrence", c.t.min_inf, g, Infinity, Mode::Min)?,
    ];

    // ℓ∞ᵐ(n) > c whenever n > c·g, for c ≤ 20
    let top = 21 * g;
    let table = c.table(top, Infinity, Mode::Min)?;
    let mut lower = Check::new("linf-min-exceeds-multiple", Some((0, top)));
    for n in (1..=top).filter(|&n| s.contains(n)) {
        let cc = ((n - 1) / g).min(20) as u128;
        let v = table.value(n);
        lower.record(v.is_some_and(|v| v > cc), || mismatch(n, format!("> {cc}"), v));
    }
    out.push(lower);

    let ap = s.apery(g)?;
    let amax = *ap.entries.iter().max().unwrap_or(&0);
    let table = c.table(amax, Infinity, Mode::Min)?;
    let mut apery = Check::new("linf-min-below-sum-on-apery", Some((0, amax)));
    for &a in &ap.entries {
        let v = table.value(a);
        apery.record(v.is_some_and(|v| v < g as u128), || mismatch(a, format!("< {g}"), v));
    }
    out.push(apery);
    Ok(out)
}

fn ns_l2_checks(c: &NsContext) -> Result<Vec<Check>> {
    let s = c.s;
    let big_n = s.square_sum();
    let mut end = 8 * big_n;
    let (table, n_star) = loop {
        let table = c.table(end, Finite(2), Mode::Min)?;
        if let Some(n_star) = min2_stabilization_from(s, &table) {
            if n_star + 5 * big_n <= end {
                break (table, n_star);
            }
        }
        end = end.checked_mul(2).filter(|&e| e < 1 << 24).ok_or(Error::BudgetExceeded(end))?;
    };
    let hi = n_star + 3 * big_n;
    let mut second = Check::new("l2-min-second-difference", Some((n_star, hi)));
    for n in (n_star..=hi).filter(|&n| s.contains(n)) {
        let v = |m: u64| table.value(m).map(|x| x as i128);
        let d = match (v(n), v(n + big_n), v(n + 2 * big_n)) {
            (Some(a), Some(b), Some(c2)) => Some(c2 - 2 * b + a),
            _ => None,
        };
        second.record(d == Some(2 * big_n as i128), || mismatch(n, 2 * big_n, d));
    }
    let second = second.with_detail(json!({ "stabilization_point": n_star, "square_sum": big_n }));

    let mut rng = ChaCha8Rng::seed_from_u64(c.cfg.seed);
    let bound = c.cfg.window.map_or(20 * big_n, |w| w.1.max(1));
    let mut shift = Check::new("l2-min-shift", Some((0, bound)));
    for _ in 0..c.cfg.samples {
        let n = rng.gen_range(0..=bound);
        shift.record(min2_shift_check(s, n), || json!({ "n": n }));
    }
    Ok(vec![second, shift])
}

fn ns_shape_checks(c: &NsContext) -> Result<Vec<Check>> {
    ROWS.par_iter()
        .map(|&f| {
            let row = verify_row(c.s, f, c.cfg.window)?;
            let mut check = Check::new(&format!("eventual-shape-{}", row.function), Some((row.fit.window_start, row.fit.window_end)));
            check.record(row.pass, || {
                json!({
                    "expected": { "degree": row.degree, "period": row.period, "leading": row.expected_leading },
                    "actual": { "fit": row.fit, "leading": row.observed_leading, "minimal_period": row.minimal_period },
                })
            });
            Ok(check.with_detail(json!({
                "degree": row.degree,
                "period": row.period,
                "leading": row.observed_leading,
                "settle_point": row.threshold,
                "note": row.note,
            })))
        })
        .collect()
}

fn ns_enumeration_checks(c: &NsContext) -> Result<Vec<Check>> {
    let s = c.s;
    let hi = 100;
    let mut sandwich = Check::new("linf-l1-sandwich", Some((0, hi)));
    let k = s.rank() as u128;
    for n in 0..=hi {
        for z in factorizations(s, n, c.cfg.budget)? {
            let linf = z.plength(Infinity)?;
            let l1 = z.plength(Finite(1))?;
            sandwich.record(linf <= l1 && l1 <= k * linf, || json!({ "n": n, "z": z }));
        }
    }
    Ok(vec![sandwich])
}

/// Non-quasipolynomiality of ℓ₃ᵐ, recorded for ⟨2,3⟩ only.
fn ns_l3_check(c: &NsContext) -> Result<Vec<Check>> {
    if c.s.generators() != [2, 3] {
        return Ok(vec![]);
    }
    let (lo, hi) = (100, 1600);
    let table = c.table(hi, Finite(3), Mode::Min)?;
    let w = SampleWindow::from_fn(lo, hi, |n| table.value(n).unwrap_or_default())?;
    let report = qp_detect(&w, c.cfg.d_max, c.cfg.pi_max)?;
    let mut check = Check::new("l3-min-not-quasipolynomial", Some((lo, hi)));
    check.record(report.fitted().is_none(), || json!({ "fit": report }));
    Ok(vec![check.with_detail(json!({ "d_max": c.cfg.d_max, "pi_max": c.cfg.pi_max }))])
}

type NsGroup = fn(&NsContext) -> Result<Vec<Check>>;

/// Every numerical-semigroup check, sorted by claim id.
pub fn ns_verify(s: &NumericalSemigroup, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let ctx = NsContext {
        s,
        cfg,
        t: Thresholds::of(s),
    };
    let groups: [NsGroup; 7] = [
        ns_l0_checks,
        ns_l1_checks,
        ns_linf_checks,
        ns_l2_checks,
        ns_shape_checks,
        ns_enumeration_checks,
        ns_l3_check,
    ];
    let results = groups
        .par_iter()
        .map(|g| g(&ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::assemble(
        json!({ "generators": s.generators() }),
        Some(ctx.t),
        results,
        vec![],
    ))
}

/// n ≤ ℓ∞ᴹ(xⁿ) ≤ ℓ₁ᴹ(xⁿ) ≤ k′n, k′ the number of prime factors of x.
fn acm_sandwich(m: &Acm, bases: &[u128], n_max: u32) -> Result<Check> {
    let mut check = Check::new("power-length-sandwich", Some((1, n_max.into())));
    for &x in bases {
        let kp: u128 = factor_integer(x)?.iter().map(|&(_, e)| u128::from(e)).sum();
        for n in 1..=n_max {
            let xn = x.checked_pow(n).ok_or(Error::Overflow("power of base"))?;
            let linf = acm_extremal_plength(m, xn, Infinity, Mode::Max)?.value;
            let l1 = acm_extremal_plength(m, xn, Finite(1), Mode::Max)?.value;
            let n = u128::from(n);
            check.record(n <= linf && linf <= l1 && l1 <= kp * n, || {
                json!({ "x": x, "n": n, "linf_max": linf, "l1_max": l1, "k_prime": kp })
            });
        }
    }
    Ok(check.with_detail(json!({ "bases": bases })))
}

fn bifurcus_scan(m: &Acm, bound: u128) -> Result<Check> {
    let members: Vec<u128> = (2..=bound).filter(|&x| m.contains(x)).collect();
    let outcomes = members
        .par_iter()
        .map(|&x| -> Result<Option<(u128, u128)>> {
            if m.is_atom(x)? {
                return Ok(None);
            }
            Ok(Some((x, acm_extremal_plength(m, x, Finite(1), Mode::Min)?.value)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut check = Check::new("bifurcus-min-length", Some((1, bound as u64)));
    for (x, v) in outcomes.into_iter().flatten() {
        check.record(v <= 2, || json!({ "x": x, "l1_min": v }));
    }
    Ok(check)
}

fn hilbert_checks(m: &Acm, cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut hilbert = Check::new("hilbert-441", None);
    let all = acm_factorizations(m, 441, cfg.budget)?;
    let parts: Vec<_> = all.iter().map(|f| f.parts().to_vec()).collect();
    let expected = vec![vec![(9, 1), (49, 1)], vec![(21, 2)]];
    hilbert.record(parts == expected, || json!({ "expected": "9*49, 21^2", "actual": all }));
    for (p, mode) in [(Finite(0), Mode::Max), (Finite(1), Mode::Max), (Finite(1), Mode::Min), (Infinity, Mode::Max)] {
        let v = acm_extremal_plength(m, 441, p, mode)?.value;
        hilbert.record(v == 2, || json!({ "p": p, "mode": mode, "value": v }));
    }

    // atoms used by the powers of x, and ℓ₀ᴹ, stop changing from n = 2
    let mut stable = Check::new("regular-power-support-stable", Some((2, 10)));
    for x in [441u128, 225] {
        let mut reference = None;
        for n in 2..=10u32 {
            let xn = x.pow(n);
            let mut support: Vec<u128> = acm_factorizations(m, xn, cfg.budget)?
                .iter()
                .flat_map(|f| f.parts().iter().map(|&(u, _)| u).collect::<Vec<_>>())
                .collect();
            support.sort_unstable();
            support.dedup();
            let l0 = acm_extremal_plength(m, xn, Finite(0), Mode::Max)?.value;
            let here = (support, l0);
            match &reference {
                None => {
                    reference = Some(here);
                    stable.record(true, || Value::Null);
                }
                Some(r) => stable.record(*r == here, || {
                    json!({ "x": x, "n": n, "expected": r, "actual": here })
                }),
            }
        }
    }
    Ok(vec![hilbert, stable])
}

const X28: SmoothElement = SmoothElement::new(2, 0, 1);
const X40: SmoothElement = SmoothElement::new(3, 1, 0);
const X70: SmoothElement = SmoothElement::new(1, 1, 1);
const X490: SmoothElement = SmoothElement::new(1, 1, 2);

fn m46_checks(m: &Acm, cfg: &RunConfig) -> Result<(Vec<Check>, Vec<Measurement>)> {
    let mut out = Vec::new();
    let limit: u128 = 10_000_000;

    let mut classifier = Check::new("smooth-atom-classifier", Some((1, limit as u64)));
    let mut e2 = 0;
    while 2u128.pow(e2) <= limit {
        let mut e5 = 0;
        while 2u128.pow(e2) * 5u128.pow(e5) <= limit {
            let mut e7 = 0;
            while 2u128.pow(e2) * 5u128.pow(e5) * 7u128.pow(e7) <= limit {
                let u = SmoothElement::new(e2, e5, e7);
                let v = u.to_u128().unwrap_or(u128::MAX);
                let member = smooth_is_member(&u);
                classifier.record(member == m.contains(v), || json!({ "u": u, "member": member }));
                if member && !u.is_one() {
                    let a = smooth_is_atom(&u)?;
                    let b = m.is_atom(v)?;
                    classifier.record(a == b, || json!({ "u": u, "smooth": a, "divisor_search": b }));
                }
                e7 += 1;
            }
            e5 += 1;
        }
        e2 += 1;
    }
    out.push(classifier);

    let mut c28 = Check::new("distinct-atoms-28-closed-form", Some((3, 28)));
    for n in 3..=28u32 {
        let (a, b) = (ell0_max_28_closed(n.into())?, ell0_max_exact(&X28, n)?);
        c28.record(a == b, || mismatch(n.into(), a, b));
    }
    out.push(c28);
    let mut c40 = Check::new("distinct-atoms-40-closed-form", Some((1, 25)));
    for n in 1..=25u32 {
        let (a, b) = (ell0_max_40_closed(n.into())?, ell0_max_exact(&X40, n)?);
        c40.record(a == b, || mismatch(n.into(), a, b));
    }
    out.push(c40);

    let mut construct = Check::new("distinct-atoms-70-construction", Some((2, 10)));
    let mut bound = Check::new("distinct-atoms-70-at-least-construction", None);
    for k in (2..=10).step_by(2) {
        match construct_70_factorization(k) {
            Ok((n, f)) => {
                let atoms_ok = f.parts().iter().all(|(u, _)| smooth_is_atom(&u.element()).unwrap_or(false));
                let t = u64::from(k) * u64::from(k + 1) / 2;
                construct.record(atoms_ok && f.distinct() as u64 == t + 1, || {
                    json!({ "k": k, "n": n, "distinct": f.distinct(), "expected": t + 1 })
                });
                if let Ok(exact) = ell0_max_exact(&X70, n as u32) {
                    bound.record(exact > t, || json!({ "k": k, "n": n, "exact": exact, "constructed": t + 1 }));
                }
            }
            Err(e) => construct.record(false, || json!({ "k": k, "error": e.to_string() })),
        }
    }
    out.push(construct);
    out.push(bound);

    let bases = [(X28, "28"), (X40, "40"), (X70, "70"), (X490, "490")];
    let mut good_bound = Check::new("good-atom-min-inf-bound", Some((1, 10)));
    for (x, name) in bases {
        let g = count_good_atoms(&x)?;
        for n in 1..=10u32 {
            let xn = x.pow(n)?;
            let linf = smooth_extremal_plength(&xn, Infinity, Mode::Min, cfg.cell_budget)?.value;
            let l1 = smooth_extremal_plength(&xn, Finite(1), Mode::Min, cfg.cell_budget)?.value;
            // ℓ∞ᵐ ≥ n / (3G)
            let ok = 3 * u128::from(g) * linf >= u128::from(n) && linf <= l1;
            good_bound.record(ok, || json!({ "x": name, "n": n, "good_atoms": g, "linf_min": linf, "l1_min": l1 }));
        }
    }
    out.push(good_bound);

    let mut evil = Check::new("evil-slots-at-most-twice-good", Some((1, 4)));
    for (x, name) in bases {
        for n in 1..=4u32 {
            for f in smooth_factorizations(&x.pow(n)?, cfg.budget)? {
                let (mut good, mut bad) = (0u64, 0u64);
                for (u, mult) in f.parts() {
                    match good_evil_classify(&x, u) {
                        Goodness::Good => good += mult,
                        Goodness::Evil => bad += mult,
                    }
                }
                evil.record(bad <= 2 * good, || json!({ "x": name, "n": n, "factorization": f }));
            }
        }
    }
    out.push(evil);

    let points = (4..=12u32)
        .map(|n| Ok(GrowthPoint { n, value: u128::from(ell0_max_exact(&X70, n)?) }))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_loglog(&points);
    let (lo, hi) = cfg.fit_interval;
    let measurement = Measurement {
        name: "distinct-atoms-70-loglog-slope".into(),
        value: fit.map(|f| f.0),
        interval: cfg.fit_interval,
        within: fit.is_some_and(|f| lo <= f.0 && f.0 <= hi),
        detail: json!({ "n_range": [4, 12], "points": points, "residual": fit.map(|f| f.1) }),
    };
    Ok((out, vec![measurement]))
}

/// Every check applicable to `m`, sorted by claim id.
pub fn acm_verify(m: &Acm, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut groups = Vec::new();
    let mut measurements = Vec::new();
    let bases: Vec<u128> = match (m.a(), m.b()) {
        (1, 4) => vec![441],
        (4, 6) => vec![28, 40, 70],
        _ => {
            let b = u128::from(m.b());
            let start = u128::from(m.a());
            (0..)
                .map(|i| start + i * b)
                .filter(|&x| x > 1)
                .take(2)
                .collect()
        }
    };
    groups.push(vec![acm_sandwich(m, &bases, 10)?]);
    match (m.a(), m.b()) {
        (1, 4) => groups.push(hilbert_checks(m, cfg)?),
        (6, 6) => groups.push(vec![bifurcus_scan(m, 100_000)?]),
        (4, 6) => {
            let (checks, meas) = m46_checks(m, cfg)?;
            groups.push(checks);
            measurements = meas;
        }
        _ => {}
    }
    Ok(VerificationReport::assemble(
        json!({ "acm": { "a": m.a(), "b": m.b() } }),
        None,
        groups,
        measurements,
    ))
}
