//! Quasipolynomial detection for integer sequences on a finite window.
//!
//! A sequence agrees with a quasipolynomial of degree ≤ d and period π on a
//! window exactly when its (d+1)-fold π-step difference vanishes there.
//! Coefficients are then recovered per residue class by exact rational
//! interpolation and checked against every sample.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

/// Contiguous samples f(start), f(start+1), ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleWindow {
    start: u64,
    values: Vec<BigInt>,
}

impl SampleWindow {
    pub fn new(start: u64, values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::WindowTooShort { needed: 1, have: 0 });
        }
        Ok(Self { start, values })
    }

    pub fn from_fn<T: Into<BigInt>>(start: u64, end: u64, f: impl Fn(u64) -> T) -> Result<Self> {
        Self::new(start, (start..=end).map(|n| f(n).into()).collect())
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// Last sampled index, inclusive.
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Option<&BigInt> {
        n.checked_sub(self.start)
            .and_then(|i| self.values.get(i as usize))
    }

    /// Window of f(n + step) − f(n), same start.
    pub fn step_difference(&self, step: usize) -> Result<SampleWindow> {
        if step == 0 || self.values.len() <= step {
            return Err(Error::WindowTooShort {
                needed: step + 1,
                have: self.values.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&self.values[step..])
            .map(|(a, b)| b - a)
            .collect();
        Ok(SampleWindow {
            start: self.start,
            values,
        })
    }
}

/// f(n) = c_d(n)·n^d + … + c_0(n) with each cᵢ periodic of period π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    degree: usize,
    period: u64,
    /// `coefficients[j][i]` is cᵢ on the class n ≡ j (mod period).
    coefficients: Vec<Vec<BigRational>>,
}

impl QuasiPolynomial {
    pub fn new(period: u64, coefficients: Vec<Vec<BigRational>>) -> Result<Self> {
        if period == 0 || coefficients.len() as u64 != period {
            return Err(Error::InvalidArgument("one coefficient row per residue class".into()));
        }
        let degree = coefficients.iter().map(Vec::len).max().unwrap_or(1).max(1) - 1;
        let mut coefficients = coefficients;
        for row in &mut coefficients {
            row.resize(degree + 1, BigRational::zero());
        }
        let mut q = Self {
            degree,
            period,
            coefficients,
        };
        q.trim();
        Ok(q)
    }

    fn trim(&mut self) {
        while self.degree > 0 && self.coefficients.iter().all(|row| row[self.degree].is_zero()) {
            self.degree -= 1;
            for row in &mut self.coefficients {
                row.pop();
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn coefficients(&self) -> &[Vec<BigRational>] {
        &self.coefficients
    }

    /// c_d(j) for each residue class j.
    pub fn leading_coefficients(&self) -> Vec<BigRational> {
        self.coefficients
            .iter()
            .map(|row| row[self.degree].clone())
            .collect()
    }

    /// The leading coefficient when it is the same on every class.
    pub fn constant_leading_coefficient(&self) -> Option<BigRational> {
        let lead = self.leading_coefficients();
        lead.iter().all(|c| *c == lead[0]).then(|| lead[0].clone())
    }

    pub fn evaluate(&self, n: u64) -> BigRational {
        let row = &self.coefficients[(n % self.period) as usize];
        let x = BigRational::from_integer(BigInt::from(n));
        row.iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    Fitted(QuasiPolynomial),
    NotQuasipolynomial { max_degree: usize, max_period: u64 },
}

/// Result of fitting or detecting a quasipolynomial on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitReport {
    pub outcome: FitOutcome,
    pub window_start: u64,
    pub window_end: u64,
    /// First n at which the differenced window is nonzero, for a failed fit.
    pub first_mismatch: Option<u64>,
}

impl FitReport {
    pub fn fitted(&self) -> Option<&QuasiPolynomial> {
        match &self.outcome {
            FitOutcome::Fitted(q) => Some(q),
            FitOutcome::NotQuasipolynomial { .. } => None,
        }
    }
}

impl Serialize for FitReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Window {
            start: u64,
            end: u64,
        }
        let mut st = serializer.serialize_struct("FitReport", 6)?;
        match &self.outcome {
            FitOutcome::Fitted(q) => {
                st.serialize_field("outcome", "fitted")?;
                st.serialize_field("degree", &q.degree)?;
                st.serialize_field("period", &q.period)?;
                let lead: Vec<String> = q.leading_coefficients().iter().map(|c| c.to_string()).collect();
                st.serialize_field("leading_coefficients", &lead)?;
            }
            FitOutcome::NotQuasipolynomial {
                max_degree,
                max_period,
            } => {
                st.serialize_field("outcome", "not_quasipolynomial")?;
                st.serialize_field("degree", max_degree)?;
                st.serialize_field("period", max_period)?;
                st.serialize_field("leading_coefficients", &Vec::<String>::new())?;
            }
        }
        st.serialize_field(
            "window",
            &Window {
                start: self.window_start,
                end: self.window_end,
            },
        )?;
        st.serialize_field("first_mismatch", &self.first_mismatch)?;
        st.end()
    }
}

/// Fits a quasipolynomial of degree ≤ `degree` and period `period`.
pub fn qp_fit(w: &SampleWindow, degree: usize, period: u64) -> Result<FitReport> {
    let needed = (degree + 2) * period as usize;
    if period == 0 || w.len() < needed {
        return Err(Error::WindowTooShort {
            needed: needed.max(1),
            have: w.len(),
        });
    }
    let not_fitted = |first_mismatch| FitReport {
        outcome: FitOutcome::NotQuasipolynomial {
            max_degree: degree,
            max_period: period,
        },
        window_start: w.start(),
        window_end: w.end(),
        first_mismatch,
    };
    let mut diff = w.clone();
    for _ in 0..=degree {
        diff = diff.step_difference(period as usize)?;
    }
    if let Some(pos) = diff.values().iter().position(|v| !v.is_zero()) {
        return Ok(not_fitted(Some(w.start() + pos as u64)));
    }

    let mut rows = vec![Vec::new(); period as usize];
    for (offset, row) in rows.iter_mut().enumerate() {
        let first = w.start() + offset as u64;
        let xs: Vec<u64> = (0..=degree).map(|i| first + i as u64 * period).collect();
        let ys: Vec<&BigInt> = xs.iter().map(|&x| w.get(x).unwrap()).collect();
        *row = interpolate(&xs, &ys);
    }
    // rows are indexed by offset from the window start; rotate to residues
    let shift = (w.start() % period) as usize;
    rows.rotate_right(shift);
    let q = QuasiPolynomial::new(period, rows)?;
    for (i, v) in w.values().iter().enumerate() {
        let n = w.start() + i as u64;
        if q.evaluate(n) != BigRational::from_integer(v.clone()) {
            return Ok(not_fitted(Some(n)));
        }
    }
    Ok(FitReport {
        outcome: FitOutcome::Fitted(q),
        window_start: w.start(),
        window_end: w.end(),
        first_mismatch: None,
    })
}

/// Searches periods 1..=`max_period` (outer) and degrees 0..=`max_degree`
/// (inner) for the first fit.
pub fn qp_detect(w: &SampleWindow, max_degree: usize, max_period: u64) -> Result<FitReport> {
    let needed = (max_degree + 2) * max_period as usize;
    if max_period == 0 || w.len() < needed {
        return Err(Error::WindowTooShort {
            needed: needed.max(1),
            have: w.len(),
        });
    }
    for period in 1..=max_period {
        for degree in 0..=max_degree {
            let report = qp_fit(w, degree, period)?;
            if report.fitted().is_some() {
                return Ok(report);
            }
        }
    }
    Ok(FitReport {
        outcome: FitOutcome::NotQuasipolynomial {
            max_degree,
            max_period,
        },
        window_start: w.start(),
        window_end: w.end(),
        first_mismatch: None,
    })
}

/// Monomial coefficients (ascending) of the polynomial through the points.
fn interpolate(xs: &[u64], ys: &[&BigInt]) -> Vec<BigRational> {
    let m = xs.len();
    let xr: Vec<BigRational> = xs
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    // Newton divided differences
    let mut dd: Vec<BigRational> = ys
        .iter()
        .map(|&y| BigRational::from_integer(y.clone()))
        .collect();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xr[i] - &xr[i - level]);
        }
    }
    // expand dd[0] + (x − x0)(dd[1] + (x − x1)(…))
    let mut poly = vec![dd[m - 1].clone()];
    for i in (0..m - 1).rev() {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &xr[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn win(start: u64, v: &[i64]) -> SampleWindow {
        SampleWindow::new(start, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn step_difference_examples() {
        let sq = win(0, &[0, 1, 4, 9, 16]);
        assert_eq!(sq.step_difference(1).unwrap(), win(0, &[1, 3, 5, 7]));
        assert_eq!(sq.step_difference(2).unwrap(), win(0, &[4, 8, 12]));
        assert_eq!(
            win(0, &[1, 2, 3]).step_difference(5),
            Err(Error::WindowTooShort { needed: 6, have: 3 })
        );
    }

    #[test]
    fn fit_squares() {
        let w = SampleWindow::from_fn(0, 20, |n| n * n).unwrap();
        let r = qp_fit(&w, 2, 1).unwrap();
        let q = r.fitted().unwrap();
        assert_eq!(q.degree(), 2);
        assert_eq!(q.constant_leading_coefficient(), Some(BigRational::one()));
        assert!(qp_fit(&w, 1, 1).unwrap().fitted().is_none());
        assert!(matches!(qp_fit(&w, 9, 3), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn fit_reduces_degree_to_exact() {
        let w = SampleWindow::from_fn(5, 40, |n| 3 * n + 1).unwrap();
        let q = qp_fit(&w, 3, 2).unwrap().fitted().unwrap().clone();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.period(), 2);
    }

    #[test]
    fn detect_constant_and_floor() {
        let w = SampleWindow::from_fn(3, 60, |_| 7u64).unwrap();
        let q = qp_detect(&w, 2, 5).unwrap().fitted().unwrap().clone();
        assert_eq!((q.degree(), q.period()), (0, 1));
        // ⌈n/3⌉ = n/3 + (0, 2/3, 1/3)
        let w = SampleWindow::from_fn(10, 80, |n| n.div_ceil(3)).unwrap();
        let q = qp_detect(&w, 2, 6).unwrap().fitted().unwrap().clone();
        assert_eq!((q.degree(), q.period()), (1, 3));
        assert_eq!(q.constant_leading_coefficient(), Some(ratio(1, 3)));
        assert_eq!(q.coefficients()[1][0], ratio(2, 3));
    }

    #[test]
    fn detect_rejects_irrational_floor() {
        // ⌊n·√2⌋ is not eventually quasipolynomial
        let w = SampleWindow::from_fn(1, 400, |n| {
            let t = 2 * n * n;
            let mut r = (t as f64).sqrt() as u64;
            while r * r > t {
                r -= 1;
            }
            while (r + 1) * (r + 1) <= t {
                r += 1;
            }
            r
        })
        .unwrap();
        let report = qp_detect(&w, 3, 30).unwrap();
        assert!(report.fitted().is_none());
    }

    #[test]
    fn report_json() {
        let w = SampleWindow::from_fn(10, 80, |n| n.div_ceil(3)).unwrap();
        let v = serde_json::to_value(qp_fit(&w, 1, 3).unwrap()).unwrap();
        assert_eq!(v["outcome"], "fitted");
        assert_eq!(v["period"], 3);
        assert_eq!(v["leading_coefficients"][0], "1/3");
        assert_eq!(v["window"]["start"], 10);
    }

    fn qp_strategy() -> impl Strategy<Value = (usize, u64, Vec<Vec<(i64, i64)>>)> {
        (0usize..=3, 1u64..=6).prop_flat_map(|(d, p)| {
            let row = prop::collection::vec((-20i64..=20, 1i64..=6), d + 1);
            (Just(d), Just(p), prop::collection::vec(row, p as usize))
        })
    }

    fn build(d: usize, p: u64, raw: &[Vec<(i64, i64)>]) -> QuasiPolynomial {
        let rows = raw
            .iter()
            .map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect())
            .collect();
        let q = QuasiPolynomial::new(p, rows).unwrap();
        assert!(q.degree() <= d);
        q
    }

    proptest! {
        #[test]
        fn detection_recovers_generated_quasipolynomials((d, p, raw) in qp_strategy(), start in 0u64..50) {
            let truth = build(d, p, &raw);
            // scale to integers by the lcm of denominators
            let den = truth.coefficients().iter().flatten()
                .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
            let len = (3 + 2) * 6 + 10;
            let w = SampleWindow::new(start, (start..start + len as u64)
                .map(|n| (truth.evaluate(n) * BigRational::from_integer(den.clone())).to_integer())
                .collect()).unwrap();
            let report = qp_detect(&w, 3, 6).unwrap();
            let q = report.fitted().expect("generated data must fit");
            prop_assert!(q.period() <= p);
            for n in w.start()..=w.end() {
                prop_assert_eq!(q.evaluate(n), BigRational::from_integer(w.get(n).unwrap().clone()));
            }
            // minimality: the detected period divides the generating one
            prop_assert_eq!(p % q.period(), 0);
            // difference identity for constant leading coefficients
            if let (Some(c), true) = (q.constant_leading_coefficient(), q.degree() > 0) {
                let mut diff = w.clone();
                for _ in 0..q.degree() {
                    diff = diff.step_difference(q.period() as usize).unwrap();
                }
                let fact: u64 = (1..=q.degree() as u64).product();
                let expect = c * BigRational::from_integer(BigInt::from(fact * q.period().pow(q.degree() as u32)));
                for v in diff.values() {
                    prop_assert_eq!(&BigRational::from_integer(v.clone()), &expect);
                }
            }
        }
    }
}
