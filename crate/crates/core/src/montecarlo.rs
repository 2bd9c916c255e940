//! Empirical cross-codifference and cross-covariation of an observed path,
//! moving-block bootstrap standard errors, and the ratio estimator of α.

use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ar_model::{simulate_path, StableAR1Model};
use crate::asymptotics::RatioSeries;
use crate::error::{Error, Result};
use crate::measures::{Direction, LagSpec};
use crate::stable::signed_power;

/// Ratios on lags whose covariation is within this many bootstrap standard
/// errors of zero are left out of the α estimate.
pub const COVARIATION_SIGNIFICANCE: f64 = 3.0;

/// Default lag window of the α estimator on sampled paths.
pub const DEFAULT_ALPHA_WINDOW: (usize, usize) = (5, 15);

#[derive(Debug, Clone, PartialEq)]
pub enum PathOrigin {
    Simulated { seed: u64, model: StableAR1Model },
    Ingested { source: String },
}

/// An observed (or simulated) realization of the bivariate process.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    observations: Vec<[f64; 2]>,
    origin: PathOrigin,
}

impl PathSample {
    pub fn new(observations: Vec<[f64; 2]>, origin: PathOrigin) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::SampleSize {
                min: 2,
                got: observations.len(),
            });
        }
        Ok(PathSample {
            observations,
            origin,
        })
    }

    /// `n` stationary observations with the model's default burn-in.
    pub fn simulate(model: &StableAR1Model, n: usize, seed: u64) -> Result<Self> {
        let obs = simulate_path(model, n, model.default_burn_in(), seed)?;
        Self::new(
            obs,
            PathOrigin::Simulated {
                seed,
                model: model.clone(),
            },
        )
    }

    pub fn observations(&self) -> &[[f64; 2]] {
        &self.observations
    }

    pub fn origin(&self) -> &PathOrigin {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// The path with its two components exchanged.
    pub fn swapped(&self) -> Self {
        PathSample {
            observations: self.observations.iter().map(|&[a, b]| [b, a]).collect(),
            origin: self.origin.clone(),
        }
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file, &path.display().to_string())
    }

    /// Two numeric columns `x1,x2`, one row per time step. A first row that
    /// does not parse as numbers is taken as a header.
    pub fn from_csv_reader<R: Read>(reader: R, source: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut obs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 1;
            let rec = rec.map_err(|e| Error::Io(format!("{source}: line {line}: {e}")))?;
            if rec.len() != 2 {
                return Err(Error::Io(format!(
                    "{source}: line {line}: expected 2 columns, found {}",
                    rec.len()
                )));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => obs.push([a, b]),
                (Ok(_), Ok(_)) => {
                    return Err(Error::Io(format!("{source}: line {line}: non-finite value")))
                }
                _ if line == 1 => continue,
                _ => {
                    return Err(Error::Io(format!(
                        "{source}: line {line}: cannot parse {:?} as numbers",
                        rec.iter().collect::<Vec<_>>()
                    )))
                }
            }
        }
        Self::new(
            obs,
            PathOrigin::Ingested {
                source: source.to_string(),
            },
        )
    }

    /// Header `x1,x2`, 17 significant digits, LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x1,x2")?;
        for [a, b] in &self.observations {
            writeln!(out, "{a:.16e},{b:.16e}")?;
        }
        Ok(())
    }

    /// `(X1(t), X2(t ∓ h))` for every admissible `t`.
    fn lagged_pairs(&self, lag: LagSpec) -> Result<Vec<(f64, f64)>> {
        let n = self.observations.len();
        if lag.h + 2 > n {
            return Err(Error::SampleSize {
                min: lag.h + 2,
                got: n,
            });
        }
        let obs = &self.observations;
        let m = n - lag.h;
        Ok(match lag.direction {
            Direction::Minus => (0..m).map(|i| (obs[i + lag.h][0], obs[i][1])).collect(),
            Direction::Plus => (0..m).map(|i| (obs[i][0], obs[i + lag.h][1])).collect(),
        })
    }
}

/// Moving-block bootstrap settings. Replicate `r` draws its block starts
/// from ChaCha8 seeded with `seed` on stream `r`, so results do not depend
/// on thread count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockBootstrap {
    /// `None` selects `ceil(n^(1/3))`.
    pub block_len: Option<usize>,
    pub replicates: usize,
    pub seed: u64,
}

impl Default for BlockBootstrap {
    fn default() -> Self {
        BlockBootstrap {
            block_len: None,
            replicates: 200,
            seed: 0,
        }
    }
}

impl BlockBootstrap {
    pub fn with_seed(seed: u64) -> Self {
        BlockBootstrap {
            seed,
            ..Self::default()
        }
    }

    pub fn block_len_for(&self, m: usize) -> usize {
        let auto = (m as f64).cbrt().ceil() as usize;
        self.block_len.unwrap_or(auto).clamp(1, m.max(1))
    }

    fn draw_starts(&self, m: usize) -> (usize, Vec<Vec<usize>>) {
        let len = self.block_len_for(m);
        let blocks = m.div_ceil(len);
        let starts = (0..self.replicates)
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(r as u64);
                (0..blocks).map(|_| rng.random_range(0..=m - len)).collect()
            })
            .collect();
        (len, starts)
    }
}

/// Per-time-step statistics whose means feed an estimator, stored as
/// prefix sums so a block mean costs one subtraction.
struct Columns {
    prefix: Vec<Vec<f64>>,
    m: usize,
}

impl Columns {
    fn new(cols: Vec<Vec<f64>>) -> Self {
        let m = cols[0].len();
        let prefix = cols
            .into_iter()
            .map(|c| {
                let mut p = Vec::with_capacity(m + 1);
                let mut acc = 0.0;
                p.push(0.0);
                for v in c {
                    acc += v;
                    p.push(acc);
                }
                p
            })
            .collect();
        Columns { prefix, m }
    }

    fn means(&self) -> Vec<f64> {
        self.prefix.iter().map(|p| p[self.m] / self.m as f64).collect()
    }

    fn resampled_means(&self, len: usize, starts: &[usize]) -> Vec<f64> {
        let total = (len * starts.len()) as f64;
        self.prefix
            .iter()
            .map(|p| starts.iter().map(|&s| p[s + len] - p[s]).sum::<f64>() / total)
            .collect()
    }
}

fn codifference_columns(pairs: &[(f64, f64)]) -> Vec<Vec<f64>> {
    vec![
        pairs.iter().map(|(x, y)| (x - y).cos()).collect(),
        pairs.iter().map(|(x, _)| x.cos()).collect(),
        pairs.iter().map(|(_, y)| y.cos()).collect(),
    ]
}

fn covariation_columns(pairs: &[(f64, f64)], p: f64) -> Vec<Vec<f64>> {
    vec![
        pairs.iter().map(|(x, y)| x * signed_power(*y, p - 1.0)).collect(),
        pairs.iter().map(|(_, y)| y.abs().powf(p)).collect(),
        pairs.iter().map(|(_, y)| y.cos()).collect(),
    ]
}

/// `log ĉ(1,-1) - log ĉ(1,0) - log ĉ(0,-1)` from the three cosine means.
fn codifference_from_means(m: &[f64]) -> Result<f64> {
    for &value in &m[..3] {
        if !(value > 0.0) {
            return Err(Error::NonPositiveCharFn { value });
        }
    }
    Ok(m[0].ln() - m[1].ln() - m[2].ln())
}

/// `mean[X Y^<p-1>] / mean[|Y|^p] * γ_Y`, with `γ_Y = -log ĉ_Y(1)`.
fn covariation_from_means(m: &[f64]) -> Result<f64> {
    if m[1] == 0.0 {
        return Err(Error::ZeroMoment);
    }
    if !(m[2] > 0.0) {
        return Err(Error::NonPositiveCharFn { value: m[2] });
    }
    Ok(m[0] / m[1] * -m[2].ln())
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// Empirical cross-codifference, with the joint characteristic function
/// of `(X1(t), X2(t ∓ h))` replaced by its time average at unit arguments.
pub fn empirical_codifference(path: &PathSample, lag: LagSpec) -> Result<f64> {
    let pairs = path.lagged_pairs(lag)?;
    codifference_from_means(&Columns::new(codifference_columns(&pairs)).means())
}

/// FLOM estimate of the covariation of `X1(t)` on `X2(t ∓ h)`. Consistent
/// for `1 < p < α`.
pub fn empirical_covariation(path: &PathSample, lag: LagSpec, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let pairs = path.lagged_pairs(lag)?;
    covariation_from_means(&Columns::new(covariation_columns(&pairs, p)).means())
}

/// A point estimate with its moving-block bootstrap standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Replicates on which the statistic was defined.
    pub replicates_used: usize,
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

fn with_stderr<F>(cols: Columns, boot: &BlockBootstrap, stat: F) -> Result<EmpiricalEstimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let value = stat(&cols.means())?;
    let (len, starts) = boot.draw_starts(cols.m);
    let reps: Vec<f64> = starts
        .par_iter()
        .filter_map(|s| stat(&cols.resampled_means(len, s)).ok())
        .collect();
    Ok(EmpiricalEstimate {
        value,
        stderr: sample_std(&reps),
        replicates_used: reps.len(),
    })
}

pub fn empirical_codifference_with_se(
    path: &PathSample,
    lag: LagSpec,
    boot: &BlockBootstrap,
) -> Result<EmpiricalEstimate> {
    let pairs = path.lagged_pairs(lag)?;
    with_stderr(Columns::new(codifference_columns(&pairs)), boot, codifference_from_means)
}

pub fn empirical_covariation_with_se(
    path: &PathSample,
    lag: LagSpec,
    p: f64,
    boot: &BlockBootstrap,
) -> Result<EmpiricalEstimate> {
    check_exponent(p)?;
    let pairs = path.lagged_pairs(lag)?;
    with_stderr(Columns::new(covariation_columns(&pairs, p)), boot, covariation_from_means)
}

/// FLOM exponent `1 + (α0 - 1)/2`, midway between 1 and a pilot `α0`.
pub fn default_flom_exponent(alpha0: f64) -> Result<f64> {
    if alpha0 > 1.0 && alpha0 <= 2.0 {
        Ok(1.0 + (alpha0 - 1.0) / 2.0)
    } else {
        Err(Error::AlphaOutOfRange(alpha0))
    }
}

fn marginal_alpha(xs: &mut [f64]) -> Option<f64> {
    let mid = xs.len() / 2;
    let (_, med, _) = xs.select_nth_unstable_by(mid, |a, b| a.abs().total_cmp(&b.abs()));
    let scale = med.abs();
    if scale == 0.0 {
        return None;
    }
    let log_cf = |t: f64| {
        let c = xs.iter().map(|x| (t * x / scale).cos()).sum::<f64>() / xs.len() as f64;
        (c > 0.0 && c < 1.0).then(|| (-c.ln()).ln())
    };
    // -log ĉ(t) = γ |t|^α, so the log-log slope between two arguments is α
    let (t1, t2) = (0.5, 1.0);
    Some((log_cf(t2)? - log_cf(t1)?) / (t2 / t1).ln())
}

/// Pilot stability index from the marginal empirical characteristic
/// functions of both components (averaged), each standardized by its median
/// absolute value.
pub fn pilot_alpha(path: &PathSample) -> Result<f64> {
    let est: Vec<f64> = (0..2)
        .filter_map(|k| {
            let mut xs: Vec<f64> = path.observations.iter().map(|o| o[k]).collect();
            marginal_alpha(&mut xs)
        })
        .collect();
    if est.is_empty() {
        return Err(Error::NonPositiveCharFn { value: 0.0 });
    }
    Ok(est.iter().sum::<f64>() / est.len() as f64)
}

/// One lag's contribution to the α estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagRatio {
    pub h: usize,
    pub codifference: f64,
    pub covariation: f64,
    pub covariation_stderr: f64,
    /// `CD / CV`, absent when the covariation is not distinguishable from 0.
    pub ratio: Option<f64>,
    pub ratio_stderr: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    pub h_window: (usize, usize),
    /// FLOM exponent used; `None` for analytic ratios.
    pub p: Option<f64>,
    pub per_lag_ratios: Vec<LagRatio>,
    pub stderr: f64,
    /// `alpha_hat` outside `(1, 2)`; reported as is, not clamped.
    pub out_of_range: bool,
}

fn check_window(window: (usize, usize), n: usize) -> Result<()> {
    let (lo, hi) = window;
    if lo == 0 || lo > hi || hi + 2 > n {
        return Err(Error::InvalidWindow { lo, hi });
    }
    Ok(())
}

/// Inverse-variance weighted mean of the minus-direction ratios
/// `CD(X1(t), X2(t-h)) / CV(X1(t), X2(t-h))` over `h` in the window.
///
/// Every lag uses the same `n - h_hi` time indices and every bootstrap
/// replicate resamples them with the same blocks for all lags, so the
/// reported standard error accounts for the correlation between lags.
pub fn estimate_alpha(
    path: &PathSample,
    window: (usize, usize),
    p: f64,
    boot: &BlockBootstrap,
) -> Result<AlphaEstimate> {
    check_exponent(p)?;
    check_window(window, path.len())?;
    let (lo, hi) = window;
    let m = path.len() - hi;
    let (len, starts) = boot.draw_starts(m);
    let obs = &path.observations;

    let mut per_lag = Vec::with_capacity(hi - lo + 1);
    let mut rep_ratios: Vec<Vec<Option<f64>>> = Vec::with_capacity(hi - lo + 1);
    for h in lo..=hi {
        let pairs: Vec<(f64, f64)> = (0..m).map(|i| (obs[i + h][0], obs[i][1])).collect();
        let mut cols = codifference_columns(&pairs);
        cols.extend(covariation_columns(&pairs, p).into_iter().take(2));
        let cols = Columns::new(cols);
        let ratio_parts = |mm: &[f64]| -> Result<(f64, f64)> {
            let cd = codifference_from_means(mm)?;
            let cv = covariation_from_means(&[mm[3], mm[4], mm[2]])?;
            Ok((cd, cv))
        };
        let (cd, cv) = ratio_parts(&cols.means())?;
        let reps: Vec<Option<(f64, f64)>> = starts
            .par_iter()
            .map(|s| ratio_parts(&cols.resampled_means(len, s)).ok())
            .collect();
        let cv_reps: Vec<f64> = reps.iter().flatten().map(|r| r.1).collect();
        let cv_se = sample_std(&cv_reps);
        let ratios: Vec<Option<f64>> = reps
            .iter()
            .map(|r| r.and_then(|(a, b)| (b != 0.0).then(|| a / b)))
            .collect();
        let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
        let ratio_se = sample_std(&defined);
        let significant = cv.abs() > COVARIATION_SIGNIFICANCE * cv_se;
        let usable = significant && ratio_se.is_finite() && ratio_se > 0.0;
        per_lag.push(LagRatio {
            h,
            codifference: cd,
            covariation: cv,
            covariation_stderr: cv_se,
            ratio: significant.then(|| cd / cv),
            ratio_stderr: ratio_se,
            weight: if usable { 1.0 / (ratio_se * ratio_se) } else { 0.0 },
        });
        rep_ratios.push(ratios);
    }

    let total: f64 = per_lag.iter().map(|l| l.weight).sum();
    if total == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let alpha_hat = per_lag
        .iter()
        .filter(|l| l.weight > 0.0)
        .map(|l| l.weight * l.ratio.unwrap_or(0.0))
        .sum::<f64>()
        / total;
    let combined: Vec<f64> = (0..boot.replicates)
        .filter_map(|r| {
            let mut acc = 0.0;
            for (l, reps) in per_lag.iter().zip(&rep_ratios) {
                if l.weight > 0.0 {
                    acc += l.weight * reps[r]?;
                }
            }
            Some(acc / total)
        })
        .collect();
    Ok(AlphaEstimate {
        alpha_hat,
        h_window: window,
        p: Some(p),
        per_lag_ratios: per_lag,
        stderr: sample_std(&combined),
        out_of_range: !(alpha_hat > 1.0 && alpha_hat < 2.0),
    })
}

/// [`estimate_alpha`] with the FLOM exponent chosen from [`pilot_alpha`].
/// Pilot values outside `(1, 2]` are pulled back to `[1.1, 2]` before the
/// exponent is formed.
pub fn estimate_alpha_auto(
    path: &PathSample,
    window: (usize, usize),
    boot: &BlockBootstrap,
) -> Result<AlphaEstimate> {
    let pilot = pilot_alpha(path)?.clamp(1.1, 2.0);
    estimate_alpha(path, window, default_flom_exponent(pilot)?, boot)
}

/// The estimator applied to noise-free ratios: an unweighted mean of
/// `r(-h)` over the window.
pub fn estimate_alpha_from_ratios(
    ratios: &RatioSeries,
    window: (usize, usize),
) -> Result<AlphaEstimate> {
    let (lo, hi) = window;
    if lo == 0 || lo > hi || hi >= ratios.r_minus.len() {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let per_lag: Vec<LagRatio> = (lo..=hi)
        .map(|h| {
            let r = ratios.r_minus[h];
            LagRatio {
                h,
                codifference: f64::NAN,
                covariation: f64::NAN,
                covariation_stderr: 0.0,
                ratio: r,
                ratio_stderr: 0.0,
                weight: if r.is_some() { 1.0 } else { 0.0 },
            }
        })
        .collect();
    let used: Vec<f64> = per_lag.iter().filter_map(|l| l.ratio).collect();
    if used.is_empty() {
        return Err(Error::UndefinedRatio);
    }
    let alpha_hat = used.iter().sum::<f64>() / used.len() as f64;
    Ok(AlphaEstimate {
        alpha_hat,
        h_window: window,
        p: None,
        per_lag_ratios: per_lag,
        stderr: 0.0,
        out_of_range: !(alpha_hat > 1.0 && alpha_hat < 2.0),
    })
}
