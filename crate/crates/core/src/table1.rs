//! Certifies the eventual quasipolynomial shape (degree, period, leading
//! coefficient) of each extremal length function of a numerical semigroup.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::closed::{max_first_coordinate, min2_stabilization_from, Thresholds};
use crate::error::{Error, Result};
use crate::factor::PLengthTable;
use crate::length::{ExtExponent, Mode};
use crate::quasi::{qp_fit, ratio, FitReport, SampleWindow};
use crate::semigroup::NumericalSemigroup;

/// One extremal length function of n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LengthFunction {
    Min0,
    Min1,
    Min2,
    MinInf,
    Max0,
    MaxP(u32),
    MaxInf,
}

impl LengthFunction {
    pub fn exponent(self) -> ExtExponent {
        match self {
            LengthFunction::Min0 | LengthFunction::Max0 => ExtExponent::Finite(0),
            LengthFunction::Min1 => ExtExponent::Finite(1),
            LengthFunction::Min2 => ExtExponent::Finite(2),
            LengthFunction::MaxP(p) => ExtExponent::Finite(p),
            LengthFunction::MinInf | LengthFunction::MaxInf => ExtExponent::Infinity,
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            LengthFunction::Min0 | LengthFunction::Min1 | LengthFunction::Min2 | LengthFunction::MinInf => Mode::Min,
            _ => Mode::Max,
        }
    }

    pub fn label(self) -> String {
        match self {
            LengthFunction::Min0 => "l0_min".into(),
            LengthFunction::Min1 => "l1_min".into(),
            LengthFunction::Min2 => "l2_min".into(),
            LengthFunction::MinInf => "linf_min".into(),
            LengthFunction::Max0 => "l0_max".into(),
            LengthFunction::MaxP(p) => format!("l{p}_max"),
            LengthFunction::MaxInf => "linf_max".into(),
        }
    }
}

/// Degree, period and (when constant) leading coefficient a row asserts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowClaim {
    pub degree: usize,
    pub period: u64,
    pub leading: Option<BigRational>,
}

/// The expected eventual shape of `f` over `s`.
pub fn expected_shape(s: &NumericalSemigroup, f: LengthFunction) -> RowClaim {
    let g1 = s.smallest() as i64;
    let gk = s.largest() as i64;
    let g = s.generator_sum() as i64;
    let big_n = s.square_sum() as i64;
    let k = s.rank() as i64;
    let (degree, period, leading) = match f {
        LengthFunction::Min0 => (0, s.generator_lcm(), None),
        LengthFunction::Min1 => (1, gk as u64, Some(ratio(1, gk))),
        LengthFunction::Min2 => (2, big_n as u64, Some(ratio(1, big_n))),
        LengthFunction::MinInf => (1, g as u64, Some(ratio(1, g))),
        LengthFunction::Max0 => (0, 1, Some(ratio(k, 1))),
        LengthFunction::MaxP(p) => (p as usize, g1 as u64, Some(ratio(1, g1.pow(p)))),
        LengthFunction::MaxInf => (1, g1 as u64, Some(ratio(1, g1))),
    };
    RowClaim {
        degree,
        period,
        leading,
    }
}

/// The functions certified by [`verify_table1`], in report order.
pub const ROWS: [LengthFunction; 9] = [
    LengthFunction::Min0,
    LengthFunction::Min1,
    LengthFunction::Min2,
    LengthFunction::MinInf,
    LengthFunction::Max0,
    LengthFunction::MaxP(1),
    LengthFunction::MaxP(2),
    LengthFunction::MaxP(3),
    LengthFunction::MaxInf,
];

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub function: String,
    pub degree: usize,
    pub period: u64,
    pub expected_leading: Option<String>,
    /// Start of the range on which the shape is guaranteed (or, for the
    /// empirically stabilized rows, observed).
    pub threshold: u64,
    pub fit: FitReport,
    pub observed_leading: Option<String>,
    pub minimal_period: Option<u64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub generators: Vec<u64>,
    pub thresholds: Thresholds,
    pub rows: Vec<RowReport>,
    pub all_pass: bool,
}

fn values_window(table: &PLengthTable, start: u64, end: u64) -> Result<SampleWindow> {
    let values = (start..=end)
        .map(|n| table.value(n).map(BigInt::from).ok_or(Error::NotInSemigroup(n)))
        .collect::<Result<Vec<_>>>()?;
    SampleWindow::new(start, values)
}

/// Where `f` is known (or observed) to have settled into its eventual form.
fn settle_point(s: &NumericalSemigroup, f: LengthFunction, table: &PLengthTable) -> Option<u64> {
    let t = Thresholds::of(s);
    let above = |x: u128| Some(x as u64 + 1);
    match f {
        LengthFunction::Min0 => above(t.min0),
        LengthFunction::Min1 => above(t.min1),
        LengthFunction::MinInf => above(t.min_inf),
        LengthFunction::Max0 => above(t.max0),
        LengthFunction::MaxP(1) => above(t.max1),
        LengthFunction::MaxInf => above(t.max_inf),
        LengthFunction::Min2 => min2_stabilization_from(s, table),
        LengthFunction::MaxP(_) => {
            // last n whose maximum is not attained at the largest first coordinate
            let last_bad = (0..=table.n_max()).rev().find(|&n| {
                s.contains(n)
                    && table.witness(n).map(|z| z.exponents()[0]) != max_first_coordinate(s, n)
            });
            Some(last_bad.map_or(0, |n| n + 1))
        }
    }
}

/// Fits one row on an automatically chosen window.
///
/// The window starts one period past the settle point (and past `lo`), and
/// spans at least max((d+3)·π, 64) samples or up to `hi`, whichever is longer.
pub fn verify_row(s: &NumericalSemigroup, f: LengthFunction, bounds: Option<(u64, u64)>) -> Result<RowReport> {
    let claim = expected_shape(s, f);
    let (lo, hi) = bounds.unwrap_or((0, 0));
    let span = ((claim.degree as u64 + 3) * claim.period).max(64);
    let frob_next = (s.frobenius() + 1).max(0) as u64;
    let mut end = hi.max(lo + 2 * span).max(4 * span);
    let (table, settle) = loop {
        let table = PLengthTable::build(s, end, f.exponent(), f.mode())?;
        let settle = settle_point(s, f, &table);
        if let Some(settle) = settle {
            let start = settle.max(lo).max(frob_next) + claim.period;
            if start + span - 1 <= end {
                break (table, settle);
            }
        }
        end = end
            .checked_mul(2)
            .filter(|&e| e < 1 << 24)
            .ok_or(Error::BudgetExceeded(end))?;
    };
    let start = settle.max(lo).max(frob_next) + claim.period;
    let stop = hi.max(start + span - 1).min(end);
    let window = values_window(&table, start, stop)?;

    let fit = qp_fit(&window, claim.degree, claim.period)?;
    let mut pass = false;
    let mut observed_leading = None;
    let mut minimal_period = None;
    if let Some(q) = fit.fitted() {
        let lead = q.constant_leading_coefficient();
        observed_leading = Some(match &lead {
            Some(c) => c.to_string(),
            None => format!(
                "[{}]",
                q.leading_coefficients().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            ),
        });
        let mut divisors: Vec<u64> = (1..=claim.period).filter(|d| claim.period.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            if qp_fit(&window, claim.degree, d)?.fitted().is_some() {
                minimal_period = Some(d);
                break;
            }
        }
        let degree_ok = q.degree() == claim.degree;
        let lead_ok = match &claim.leading {
            Some(c) => lead.as_ref() == Some(c),
            None => true,
        };
        pass = degree_ok && lead_ok && minimal_period == Some(claim.period);
    }
    let note = match f {
        LengthFunction::MaxP(p) if p >= 2 => Some(format!(
            "leading coefficient is 1/g1^{p}; the value 1/g1 holds only for p = 1"
        )),
        LengthFunction::Min2 | LengthFunction::MaxP(_) if !matches!(f, LengthFunction::MaxP(1)) => {
            Some("settle point found empirically".into())
        }
        _ => None,
    };
    Ok(RowReport {
        function: f.label(),
        degree: claim.degree,
        period: claim.period,
        expected_leading: claim.leading.map(|c| c.to_string()),
        threshold: settle,
        fit,
        observed_leading,
        minimal_period,
        pass,
        note,
    })
}

/// Runs every row of the eventual-shape table for `s`.
pub fn verify_table1(s: &NumericalSemigroup, bounds: Option<(u64, u64)>) -> Result<Table1Report> {
    use rayon::prelude::*;
    let rows = ROWS
        .par_iter()
        .map(|&f| verify_row(s, f, bounds))
        .collect::<Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(Table1Report {
        generators: s.generators().to_vec(),
        thresholds: Thresholds::of(s),
        rows,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_semigroup_rows() {
        let s = NumericalSemigroup::new(&[2, 3]).unwrap();
        let report = verify_table1(&s, Some((200, 600))).unwrap();
        for row in &report.rows {
            assert!(row.pass, "{row:?}");
        }
        let l2 = report.rows.iter().find(|r| r.function == "l2_min").unwrap();
        assert_eq!(l2.period, 13);
        assert_eq!(l2.observed_leading.as_deref(), Some("1/13"));
        let l0 = report.rows.iter().find(|r| r.function == "l0_max").unwrap();
        assert_eq!((l0.degree, l0.observed_leading.as_deref()), (0, Some("2")));
    }

    #[test]
    fn max_inf_row_for_three_generators() {
        let s = NumericalSemigroup::new(&[3, 5, 7]).unwrap();
        let row = verify_row(&s, LengthFunction::MaxInf, Some((300, 1000))).unwrap();
        assert!(row.pass);
        assert_eq!(row.period, 3);
        assert_eq!(row.observed_leading.as_deref(), Some("1/3"));
    }
}
