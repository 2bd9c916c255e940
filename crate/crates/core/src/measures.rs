//! Analytic cross-codifference and cross-covariation of the stationary
//! AR(1) solution, in both lag directions.
//!
//! Both measures are series over `j >= 0` of finite sums over the atoms of
//! the spectral measure. The series is cut at an index `J` chosen from
//! closed-form majorants of the discarded terms, so the reported value is
//! within the requested absolute tolerance of the infinite sum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar_model::StableAR1Model;
use crate::error::{Error, Result};
use crate::stable::signed_power;
use crate::summation::{truncation_index, CompensatedSum, TailTerm};
use crate::terms::{codifference_kernel, TermEvaluator};

/// Largest lag evaluated by the series.
pub const MAX_LAG: usize = 1_000_000;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1 << 24;

/// Which component is shifted in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `(X1(t), X2(t - h))`
    Minus,
    /// `(X1(t), X2(t + h))`
    Plus,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Minus => "minus",
            Direction::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LagSpec {
    pub h: usize,
    pub direction: Direction,
}

impl LagSpec {
    pub fn minus(h: usize) -> Self {
        LagSpec {
            h,
            direction: Direction::Minus,
        }
    }

    pub fn plus(h: usize) -> Self {
        LagSpec {
            h,
            direction: Direction::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "cd")]
    Codifference,
    #[serde(rename = "cv")]
    Covariation,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Codifference => "cd",
            MeasureKind::Covariation => "cv",
        }
    }
}

/// A truncated series value with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Number of `j` terms summed.
    pub truncation_j: usize,
    /// Bound on the absolute value of the discarded tail.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries {
    pub kind: MeasureKind,
    pub lags: Vec<LagSpec>,
    pub values: Vec<f64>,
    /// Largest truncation index used across the lags.
    pub truncation_j: usize,
    /// Largest tail bound across the lags.
    pub tail_bound: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

fn tail_terms(
    terms: &TermEvaluator,
    kind: MeasureKind,
    alpha: f64,
    h: usize,
) -> Vec<TailTerm> {
    let mut out = Vec::with_capacity(2 * terms.atoms.len());
    for at in &terms.atoms {
        let x = terms.shifted_envelope(at, h);
        let c = terms.base_envelope(at);
        let w = at.weight;
        match kind {
            MeasureKind::Codifference if alpha > 1.0 => {
                // ||x|^α + |c|^α - |c - x|^α| <= (α+1)|x|^α + α|x||c|^(α-1)
                out.push(TailTerm::new((alpha + 1.0) * w, vec![(x, alpha)]));
                out.push(TailTerm::new(alpha * w, vec![(x, 1.0), (c, alpha - 1.0)]));
            }
            MeasureKind::Codifference => {
                // subadditivity of t -> t^α for α <= 1
                out.push(TailTerm::new(2.0 * w, vec![(x, alpha)]));
            }
            // the signed power sits on the X2 entry: unshifted for Minus, shifted for Plus
            MeasureKind::Covariation if terms.is_minus() => {
                out.push(TailTerm::new(w, vec![(x, 1.0), (c, alpha - 1.0)]))
            }
            MeasureKind::Covariation => {
                out.push(TailTerm::new(w, vec![(c, 1.0), (x, alpha - 1.0)]))
            }
        }
    }
    out
}

/// Evaluates one measure at one lag with certified truncation.
pub fn evaluate(
    model: &StableAR1Model,
    kind: MeasureKind,
    lag: LagSpec,
    tol: f64,
) -> Result<SeriesValue> {
    check_tol(tol)?;
    if kind == MeasureKind::Covariation {
        model.alpha().check_covariation()?;
    }
    if lag.h > MAX_LAG {
        return Err(Error::LagTooLarge(lag.h));
    }
    let terms = TermEvaluator::new(model, lag.direction);
    evaluate_with(&terms, model.alpha().value(), kind, lag.h, tol)
}

pub(crate) fn evaluate_with(
    terms: &TermEvaluator,
    alpha: f64,
    kind: MeasureKind,
    h: usize,
    tol: f64,
) -> Result<SeriesValue> {
    let rho = terms.rho();
    let (j_max, tail_bound) = if rho == 0.0 {
        // Θ^n = 0 for n >= 2
        (2, 0.0)
    } else {
        truncation_index(&tail_terms(terms, kind, alpha, h), rho, tol, MAX_TERMS)
            .ok_or(Error::TruncationFailed {
                tol,
                max_terms: MAX_TERMS,
            })?
    };

    let minus = terms.is_minus();
    let mut acc = CompensatedSum::new();
    for j in 0..j_max {
        for at in &terms.atoms {
            let c = terms.base(at, j);
            let x = terms.shifted(at, j, h);
            let term = match kind {
                MeasureKind::Codifference => codifference_kernel(c, x, alpha),
                MeasureKind::Covariation if minus => x * signed_power(c, alpha - 1.0),
                MeasureKind::Covariation => c * signed_power(x, alpha - 1.0),
            };
            acc.add(at.weight * term);
        }
    }
    Ok(SeriesValue {
        value: acc.value(),
        truncation_j: j_max,
        tail_bound,
    })
}

/// `CD(X1(t), X2(t ∓ h))`, defined for `0 < α <= 2`.
pub fn cross_codifference(model: &StableAR1Model, lag: LagSpec, tol: f64) -> Result<f64> {
    evaluate(model, MeasureKind::Codifference, lag, tol).map(|v| v.value)
}

/// `CV(X1(t), X2(t ∓ h))`, the covariation of `X1(t)` on `X2(t ∓ h)`;
/// requires `α > 1`.
pub fn cross_covariation(model: &StableAR1Model, lag: LagSpec, tol: f64) -> Result<f64> {
    evaluate(model, MeasureKind::Covariation, lag, tol).map(|v| v.value)
}

/// Evaluates `h = 0..=h_max`. Lags are computed in parallel and collected
/// in order, so the output does not depend on scheduling.
pub fn measure_series(
    model: &StableAR1Model,
    kind: MeasureKind,
    direction: Direction,
    h_max: usize,
    tol: f64,
) -> Result<MeasureSeries> {
    measure_series_with(model, kind, direction, h_max, |_| tol)
}

/// As [`measure_series`] with a per-lag tolerance.
pub fn measure_series_with<F>(
    model: &StableAR1Model,
    kind: MeasureKind,
    direction: Direction,
    h_max: usize,
    tol_at: F,
) -> Result<MeasureSeries>
where
    F: Fn(usize) -> f64 + Sync,
{
    if h_max > MAX_LAG {
        return Err(Error::LagTooLarge(h_max));
    }
    if kind == MeasureKind::Covariation {
        model.alpha().check_covariation()?;
    }
    let terms = TermEvaluator::new(model, direction);
    let alpha = model.alpha().value();
    let results: Vec<SeriesValue> = (0..=h_max)
        .into_par_iter()
        .map(|h| {
            let tol = tol_at(h);
            check_tol(tol)?;
            evaluate_with(&terms, alpha, kind, h, tol)
        })
        .collect::<Result<_>>()?;
    Ok(MeasureSeries {
        kind,
        lags: (0..=h_max)
            .map(|h| LagSpec { h, direction })
            .collect(),
        values: results.iter().map(|r| r.value).collect(),
        truncation_j: results.iter().map(|r| r.truncation_j).max().unwrap_or(0),
        tail_bound: results.iter().map(|r| r.tail_bound).fold(0.0, f64::max),
    })
}

/// Absolute tolerance at lag `h` equal to `rel` times `Γ(S2) ρ^h`, the
/// natural scale of the lag-`h` terms; floored at the smallest normal
/// double.
pub fn lag_scaled_tolerance(model: &StableAR1Model, rel: f64, h: usize) -> f64 {
    let rho = model.eigen().spectral_radius();
    let scale = model.noise().total_mass() * rho.powi(h.min(i32::MAX as usize) as i32);
    (rel * scale).max(f64::MIN_POSITIVE)
}
