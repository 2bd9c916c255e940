//! Leading-order behaviour of the cross measures for large lags.
//!
//! The constants `D1..D11` and `E3` are absolutely convergent series over
//! `j` of atom sums of the lead/trail/unshifted terms (see [`crate::terms`]).
//! They feed case-dispatched predictions for CD and CV, which in turn give
//! the limits `CD/CV -> α` (lag `-h`) and `CD/CV -> 0` (lag `+h`).

use serde::Serialize;

use crate::ar_model::{classify_case, Case, CaseTag, EigenStructure, LagParity, PowerSplit, StableAR1Model};
use crate::error::{Error, Result};
use crate::measures::{
    lag_scaled_tolerance, measure_series_with, Direction, LagSpec, MeasureKind,
};
use crate::stable::signed_power;
use crate::summation::{truncation_index, CompensatedSum, TailTerm};
use crate::terms::{AtomVectors, TermEvaluator};

/// Absolute tail tolerance for every asymptotic constant.
pub const CONSTANT_TOLERANCE: f64 = 1e-12;

/// Relative (to `Γ(S2) ρ^h`) truncation tolerance of the series behind ratios.
pub const RATIO_SERIES_REL_TOL: f64 = 1e-12;

/// Default guard: a ratio is undefined where `|CV| < guard * max_h |CV|`.
pub const DEFAULT_RATIO_GUARD: f64 = 1e-15;

const MAX_CONSTANT_TERMS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub eigen: EigenStructure,
    pub alpha: f64,
    /// `d[i]` holds `D_(i+1)`; `None` where the model's case does not use it.
    pub d: [Option<f64>; 11],
    pub e3: Option<f64>,
    /// Largest truncation index over the constants.
    pub truncation_j: usize,
}

impl AsymptoticConstants {
    /// `D_i` for `i` in `1..=11`.
    pub fn d(&self, i: usize) -> Option<f64> {
        assert!((1..=11).contains(&i), "constant index {i} outside 1..=11");
        self.d[i - 1]
    }

    fn need(&self, i: usize) -> f64 {
        self.d(i)
            .unwrap_or_else(|| panic!("D{i} is not defined for this eigen-structure"))
    }

    /// Every constant multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.d.iter_mut().flatten() {
            *v *= factor;
        }
        if let Some(e) = out.e3.as_mut() {
            *e *= factor;
        }
        out
    }
}

/// Sums `Σ_j Σ_atoms w f(A, B, C)` with a certified tail below the
/// constant tolerance.
fn constant_sum<F>(terms: &TermEvaluator, tail: Vec<TailTerm>, f: F) -> Result<(f64, usize)>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let (j_max, _) = truncation_index(&tail, terms.rho(), CONSTANT_TOLERANCE, MAX_CONSTANT_TERMS)
        .ok_or(Error::TruncationFailed {
            tol: CONSTANT_TOLERANCE,
            max_terms: MAX_CONSTANT_TERMS,
        })?;
    let mut acc = CompensatedSum::new();
    for j in 0..j_max {
        for at in &terms.atoms {
            let (a, b) = terms.lead_trail(at, j);
            let c = terms.base(at, j);
            acc.add(at.weight * f(a, b, c));
        }
    }
    Ok((acc.value(), j_max))
}

/// Which lead/trail combination sits where in a constant's integrand.
#[derive(Clone, Copy)]
enum Integrand {
    /// `X C^<α-1>` with `X = A`, `B`
    OnBase(Part),
    /// `C X^<α-1>`
    OnShift(Part),
}

#[derive(Clone, Copy)]
enum Part {
    Lead,
    Trail,
    Sum,
    Difference,
}

impl Part {
    fn pick(self, a: f64, b: f64) -> f64 {
        match self {
            Part::Lead => a,
            Part::Trail => b,
            Part::Sum => a + b,
            Part::Difference => a - b,
        }
    }
}

fn tail_for(terms: &TermEvaluator, at: &AtomVectors, integrand: Integrand, alpha: f64) -> Vec<TailTerm> {
    let c = terms.base_envelope(at);
    let lead = terms.lead_envelope(at);
    let trail = terms.trail_envelope(at);
    let w = at.weight;
    let parts = |p: Part| match p {
        Part::Lead => vec![lead],
        Part::Trail => vec![trail],
        Part::Sum | Part::Difference => vec![lead, trail],
    };
    match integrand {
        // |A ± B| |C|^(α-1) <= (|A| + |B|) |C|^(α-1)
        Integrand::OnBase(p) => parts(p)
            .into_iter()
            .map(|e| TailTerm::new(w, vec![(e, 1.0), (c, alpha - 1.0)]))
            .collect(),
        // |C| |A ± B|^(α-1) <= |C| (|A|^(α-1) + |B|^(α-1))
        Integrand::OnShift(p) => parts(p)
            .into_iter()
            .map(|e| TailTerm::new(w, vec![(c, 1.0), (e, alpha - 1.0)]))
            .collect(),
    }
}

fn constant(terms: &TermEvaluator, integrand: Integrand, alpha: f64) -> Result<(f64, usize)> {
    let tail = terms
        .atoms
        .iter()
        .flat_map(|at| tail_for(terms, at, integrand, alpha))
        .collect();
    let p = alpha - 1.0;
    match integrand {
        Integrand::OnBase(part) => constant_sum(terms, tail, |a, b, c| part.pick(a, b) * signed_power(c, p)),
        Integrand::OnShift(part) => constant_sum(terms, tail, |a, b, c| c * signed_power(part.pick(a, b), p)),
    }
}

/// Constants for the model's own eigenvalue labeling.
pub fn asymptotic_constants(model: &StableAR1Model) -> Result<AsymptoticConstants> {
    asymptotic_constants_for(model, model.eigen())
}

/// Constants for an explicit labeling of the model's eigenvalues. The
/// constants depend on which eigenvalue is called `λ1`; exchanging the
/// labels exchanges `D1 <-> D2`, `D4 <-> D5` and `D7 <-> D8`.
pub fn asymptotic_constants_for(
    model: &StableAR1Model,
    eig: &EigenStructure,
) -> Result<AsymptoticConstants> {
    let alpha = model.alpha();
    alpha.check_covariation()?;
    let own = model.eigen();
    let same_set = (eig.lambda1 == own.lambda1 && eig.lambda2 == own.lambda2)
        || (eig.lambda1 == own.lambda2 && eig.lambda2 == own.lambda1);
    if !same_set || eig.degenerate != own.degenerate {
        return Err(Error::AsymptoticsUndefined(
            "eigenvalue labeling does not match the model".into(),
        ));
    }
    let a = alpha.value();
    let split = PowerSplit::new(model.theta(), eig);
    let minus = TermEvaluator::with_split(model, split, Direction::Minus);
    let plus = TermEvaluator::with_split(model, split, Direction::Plus);

    let mut d = [None; 11];
    let mut e3 = None;
    let mut j_used = 0;
    let mut put = |slot: &mut Option<f64>, r: Result<(f64, usize)>| -> Result<()> {
        let (v, j) = r?;
        j_used = j_used.max(j);
        *slot = Some(v);
        Ok(())
    };

    if eig.degenerate {
        if eig.lambda1 == 0.0 {
            return Err(Error::AsymptoticsUndefined(
                "repeated zero eigenvalue: the measures vanish for lags >= 2".into(),
            ));
        }
        put(&mut e3, constant(&minus, Integrand::OnBase(Part::Lead), a))?;
        put(&mut d[2], constant(&minus, Integrand::OnBase(Part::Trail), a))?;
        put(&mut d[5], constant(&plus, Integrand::OnBase(Part::Trail), a))?;
        put(&mut d[8], constant(&plus, Integrand::OnShift(Part::Trail), a))?;
    } else {
        put(&mut d[0], constant(&minus, Integrand::OnBase(Part::Lead), a))?;
        put(&mut d[1], constant(&minus, Integrand::OnBase(Part::Trail), a))?;
        put(&mut d[3], constant(&plus, Integrand::OnBase(Part::Lead), a))?;
        put(&mut d[4], constant(&plus, Integrand::OnBase(Part::Trail), a))?;
        put(&mut d[6], constant(&plus, Integrand::OnShift(Part::Lead), a))?;
        put(&mut d[7], constant(&plus, Integrand::OnShift(Part::Trail), a))?;
        if eig.is_sign_flip() {
            put(&mut d[9], constant(&plus, Integrand::OnShift(Part::Sum), a))?;
            put(&mut d[10], constant(&plus, Integrand::OnShift(Part::Difference), a))?;
        }
    }
    Ok(AsymptoticConstants {
        eigen: *eig,
        alpha: a,
        d,
        e3,
        truncation_j: j_used,
    })
}

/// A case-dispatched prediction. `exact` marks the sign-flip CV formulas
/// that hold at every lag rather than only asymptotically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub value: f64,
    pub exact: bool,
    pub case: CaseTag,
}

fn pow_h(x: f64, h: usize) -> f64 {
    x.powi(h as i32)
}

/// Leading-order CD at the given lag.
pub fn asymptotic_cd(c: &AsymptoticConstants, lag: LagSpec) -> Prediction {
    let tag = classify_case(&c.eigen, LagParity::of(lag.h));
    let (l1, l2, h) = (c.eigen.lambda1, c.eigen.lambda2, lag.h);
    let hf = h as f64;
    let (first, second, repeated) = match lag.direction {
        Direction::Minus => (1, 2, 3),
        Direction::Plus => (4, 5, 6),
    };
    let core = match tag.case {
        Case::I => c.need(first) * pow_h(l1, h),
        Case::II => c.need(second) * pow_h(l2, h),
        Case::III => c.need(repeated) * hf * pow_h(l1, h),
        Case::IV => (c.need(first) + c.need(second)) * pow_h(l1, h),
        Case::V => (c.need(first) - c.need(second)) * pow_h(l1, h),
    };
    Prediction {
        value: c.alpha * core,
        exact: false,
        case: tag,
    }
}

/// Leading-order (or, in cases IV and V, exact) CV at the given lag.
pub fn asymptotic_cv(c: &AsymptoticConstants, lag: LagSpec) -> Prediction {
    let tag = classify_case(&c.eigen, LagParity::of(lag.h));
    let (l1, l2, h) = (c.eigen.lambda1, c.eigen.lambda2, lag.h);
    let hf = h as f64;
    let p = c.alpha - 1.0;
    let exact = matches!(tag.case, Case::IV | Case::V);
    let value = match lag.direction {
        Direction::Minus => match tag.case {
            Case::I => c.need(1) * pow_h(l1, h),
            Case::II => c.need(2) * pow_h(l2, h),
            Case::III => c.need(3) * hf * pow_h(l1, h),
            Case::IV => (c.need(1) + c.need(2)) * pow_h(l1, h),
            Case::V => (c.need(1) - c.need(2)) * pow_h(l1, h),
        },
        Direction::Plus => match tag.case {
            Case::I => c.need(7) * signed_power(pow_h(l1, h), p),
            Case::II => c.need(8) * signed_power(pow_h(l2, h), p),
            Case::III => c.need(9) * signed_power(hf * pow_h(l1, h), p),
            Case::IV => c.need(10) * signed_power(pow_h(l1, h), p),
            Case::V => c.need(11) * signed_power(pow_h(l1, h), p),
        },
    };
    Prediction { value, exact, case: tag }
}

/// `CV(minus, h) = λ^h E3 + h λ^h D3`, exact for a repeated eigenvalue.
pub fn repeated_root_cv_minus(c: &AsymptoticConstants, h: usize) -> Option<f64> {
    let (e3, d3) = (c.e3?, c.d(3)?);
    let lh = pow_h(c.eigen.lambda1, h);
    Some(lh * e3 + h as f64 * lh * d3)
}

/// `r(-h) = CD/CV` at lag `-h` and `r(h)` at lag `+h`, for `h = 0..=h_max`.
/// `None` marks lags where the covariation is numerically zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSeries {
    pub alpha: f64,
    pub lags: Vec<usize>,
    pub r_minus: Vec<Option<f64>>,
    pub r_plus: Vec<Option<f64>>,
}

impl RatioSeries {
    pub fn r_minus_over_alpha(&self, h: usize) -> Option<f64> {
        self.r_minus.get(h).copied().flatten().map(|r| r / self.alpha)
    }

    pub fn r_plus_at(&self, h: usize) -> Option<f64> {
        self.r_plus.get(h).copied().flatten()
    }
}

fn guarded_ratios(cd: &[f64], cv: &[f64], guard: f64) -> Vec<Option<f64>> {
    let scale = cv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    cd.iter()
        .zip(cv)
        .map(|(&n, &d)| {
            if scale == 0.0 || !(d.abs() >= guard * scale) || d == 0.0 {
                None
            } else {
                Some(n / d)
            }
        })
        .collect()
}

/// Ratio curves from the analytic series. `guard` is the relative
/// threshold below which `|CV(h)| / max_h |CV|` counts as zero.
pub fn ratio_series(model: &StableAR1Model, h_max: usize, guard: f64) -> Result<RatioSeries> {
    model.alpha().check_covariation()?;
    if !(guard >= 0.0 && guard.is_finite()) {
        return Err(Error::InvalidTolerance(guard));
    }
    let tol = |h| lag_scaled_tolerance(model, RATIO_SERIES_REL_TOL, h);
    let series = |kind, dir| measure_series_with(model, kind, dir, h_max, tol).map(|s| s.values);
    let cd_minus = series(MeasureKind::Codifference, Direction::Minus)?;
    let cv_minus = series(MeasureKind::Covariation, Direction::Minus)?;
    let cd_plus = series(MeasureKind::Codifference, Direction::Plus)?;
    let cv_plus = series(MeasureKind::Covariation, Direction::Plus)?;
    Ok(RatioSeries {
        alpha: model.alpha().value(),
        lags: (0..=h_max).collect(),
        r_minus: guarded_ratios(&cd_minus, &cv_minus, guard),
        r_plus: guarded_ratios(&cd_plus, &cv_plus, guard),
    })
}

/// Numerical check of the two ratio limits at `h_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub alpha: f64,
    pub h_max: usize,
    pub case: Case,
    /// `r(-h_max) / α`
    pub r_minus_over_alpha: Option<f64>,
    /// `|r(-h_max) / α - 1|`
    pub minus_deviation: Option<f64>,
    /// `r(h_max)`
    pub r_plus: Option<f64>,
    pub tol: f64,
    pub minus_passed: bool,
    pub plus_passed: bool,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.minus_passed && self.plus_passed
    }
}

/// Passes when `|r(-h_max)/α - 1| <= tol` and `|r(h_max)| <= tol`.
pub fn theorem1_check(model: &StableAR1Model, h_max: usize, tol: f64) -> Result<Theorem1Report> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let ratios = ratio_series(model, h_max, DEFAULT_RATIO_GUARD)?;
    let rm = ratios.r_minus_over_alpha(h_max);
    let rp = ratios.r_plus_at(h_max);
    let minus_deviation = rm.map(|r| (r - 1.0).abs());
    Ok(Theorem1Report {
        alpha: ratios.alpha,
        h_max,
        case: classify_case(model.eigen(), LagParity::of(h_max)).case,
        r_minus_over_alpha: rm,
        minus_deviation,
        r_plus: rp,
        tol,
        minus_passed: minus_deviation.is_some_and(|d| d <= tol),
        plus_passed: rp.is_some_and(|r| r.abs() <= tol),
    })
}
