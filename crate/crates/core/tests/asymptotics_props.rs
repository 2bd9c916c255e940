mod common;

use common::{model, ALPHAS, THETA1, THETA2};
use stable_ar2::asymptotics::DEFAULT_RATIO_GUARD;
use stable_ar2::measures::{evaluate, lag_scaled_tolerance};
use stable_ar2::{
    asymptotic_cd, asymptotic_constants, asymptotic_cv, cross_codifference, cross_covariation,
    ratio_series, Alpha, Case, CoeffMatrix, Direction, LagSpec, MeasureKind, SpectralMeasure,
    StableAR1Model,
};

fn series(m: &StableAR1Model, kind: MeasureKind, lag: LagSpec) -> f64 {
    evaluate(m, kind, lag, lag_scaled_tolerance(m, 1e-13, lag.h)).unwrap().value
}

#[test]
fn d2_is_the_limit_of_scaled_codifference() {
    let m = model(THETA1, 1.5);
    let c = asymptotic_constants(&m).unwrap();
    let l2 = c.eigen.lambda2;
    let limit = series(&m, MeasureKind::Codifference, LagSpec::minus(60)) / (1.5 * l2.powi(60));
    assert!((limit - c.d(2).unwrap()).abs() < 1e-4, "{limit} vs {:?}", c.d(2));
}

#[test]
fn constants_scale_with_the_measure_and_ratios_do_not() {
    for theta in [THETA1, THETA2, CoeffMatrix::new(0.1, 0.3, 0.5, -0.1)] {
        let m = model(theta, 1.6);
        let scaled = m.with_noise(m.noise().scaled(2.5).unwrap());
        let c = asymptotic_constants(&m).unwrap();
        let s = asymptotic_constants(&scaled).unwrap();
        for i in 1..=11 {
            match (c.d(i), s.d(i)) {
                (Some(a), Some(b)) => assert!((2.5 * a - b).abs() < 1e-11, "D{i}"),
                (None, None) => {}
                other => panic!("D{i} presence differs: {other:?}"),
            }
        }
        if let (Some(a), Some(b)) = (c.e3, s.e3) {
            assert!((2.5 * a - b).abs() < 1e-11);
        }
        let r = ratio_series(&m, 20, DEFAULT_RATIO_GUARD).unwrap();
        let q = ratio_series(&scaled, 20, DEFAULT_RATIO_GUARD).unwrap();
        for h in 0..=20 {
            let (a, b) = (r.r_minus[h].unwrap(), q.r_minus[h].unwrap());
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{h}");
            let (a, b) = (r.r_plus[h].unwrap(), q.r_plus[h].unwrap());
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{h}");
        }
    }
}

#[test]
fn sign_flip_covariation_formulas_are_exact() {
    for theta in [CoeffMatrix::diag(0.5, -0.5), CoeffMatrix::new(0.1, 0.3, 0.5, -0.1)] {
        for a in ALPHAS {
            let m = model(theta, a);
            let c = asymptotic_constants(&m).unwrap();
            for h in 0..=40 {
                for dir in [Direction::Minus, Direction::Plus] {
                    let lag = LagSpec { h, direction: dir };
                    let p = asymptotic_cv(&c, lag);
                    if h > 0 {
                        assert!(p.exact);
                        assert_eq!(p.case.case, if h % 2 == 0 { Case::IV } else { Case::V });
                    }
                    let v = cross_covariation(&m, lag, 1e-13).unwrap();
                    assert!((v - p.value).abs() < 1e-8, "{theta:?} {a} {lag:?}: {v} vs {}", p.value);
                }
            }
        }
    }
}

#[test]
fn distinct_root_predictions_converge() {
    for a in ALPHAS {
        let m = model(THETA1, a);
        let c = asymptotic_constants(&m).unwrap();
        for kind in [MeasureKind::Codifference, MeasureKind::Covariation] {
            for dir in [Direction::Minus, Direction::Plus] {
                let err = |h| {
                    let lag = LagSpec { h, direction: dir };
                    let p = match kind {
                        MeasureKind::Codifference => asymptotic_cd(&c, lag),
                        MeasureKind::Covariation => asymptotic_cv(&c, lag),
                    };
                    assert_eq!(p.case.case, Case::II);
                    (series(&m, kind, lag) / p.value - 1.0).abs()
                };
                let (e10, e30, e60) = (err(10), err(30), err(60));
                // constants carry an absolute error of 1e-12
                let floor = 1e-11;
                assert!(e60 <= e30 + floor && e30 <= e10 + floor, "{a} {kind:?} {dir:?}: {e10} {e30} {e60}");
                assert!(e60 < 0.02);
            }
        }
    }
}

#[test]
fn repeated_root_error_decays_like_one_over_h() {
    // the next-order term of the lead/trail split is O(1/h) relative
    let m = model(THETA2, 1.5);
    let c = asymptotic_constants(&m).unwrap();
    for kind in [MeasureKind::Codifference, MeasureKind::Covariation] {
        for dir in [Direction::Minus, Direction::Plus] {
            let scaled_err = |h: usize| {
                let lag = LagSpec { h, direction: dir };
                let p = match kind {
                    MeasureKind::Codifference => asymptotic_cd(&c, lag).value,
                    MeasureKind::Covariation => asymptotic_cv(&c, lag).value,
                };
                (series(&m, kind, lag) / p - 1.0) * h as f64
            };
            let (a, b) = (scaled_err(200), scaled_err(400));
            assert!((a - b).abs() < 0.02 * a.abs().max(1.0), "{kind:?} {dir:?}: {a} {b}");
        }
    }
}

#[test]
fn plus_ratio_decays() {
    for a in ALPHAS {
        let r = ratio_series(&model(THETA1, a), 40, DEFAULT_RATIO_GUARD).unwrap();
        let (r10, r40) = (r.r_plus_at(10).unwrap(), r.r_plus_at(40).unwrap());
        assert!(r40.abs() < r10.abs(), "{a}: {r10} {r40}");
        let m40 = r.r_minus_over_alpha(40).unwrap();
        assert!((m40 - 1.0).abs() < 0.01, "{a}: {m40}");
    }
}

#[test]
fn case_three_plus_prediction_uses_d6() {
    let m = model(THETA2, 1.5);
    let c = asymptotic_constants(&m).unwrap();
    let lag = LagSpec::plus(12);
    let p = asymptotic_cd(&c, lag);
    let expected = 1.5 * c.d(6).unwrap() * 12.0 * 0.6f64.powi(12);
    assert!((p.value - expected).abs() < 1e-15);
    let q = asymptotic_cv(&c, LagSpec::plus(12));
    let base: f64 = 12.0 * 0.6f64.powi(12);
    assert!((q.value - c.d(9).unwrap() * base.powf(0.5)).abs() < 1e-15);
}

#[test]
fn zero_constants_predict_zero() {
    let m = StableAR1Model::new(
        CoeffMatrix::diag(0.4, 0.7),
        Alpha::new(1.3).unwrap(),
        SpectralMeasure::axis_example(1.0, 2.0).unwrap(),
    )
    .unwrap();
    let c = asymptotic_constants(&m).unwrap();
    for h in [1, 2, 9] {
        for lag in [LagSpec::minus(h), LagSpec::plus(h)] {
            assert_eq!(asymptotic_cd(&c, lag).value, 0.0);
            assert_eq!(asymptotic_cv(&c, lag).value, 0.0);
            assert_eq!(cross_codifference(&m, lag, 1e-12).unwrap(), 0.0);
        }
    }
}
