mod common;

use common::{brute_codifference, brute_covariation, gaussian_cross_covariance, model, ALPHAS, THETA1, THETA2};
use stable_ar2::measures::{evaluate, measure_series, MAX_LAG};
use stable_ar2::{
    cross_codifference, cross_covariation, Alpha, Atom, CoeffMatrix, Direction, Error, LagSpec,
    MeasureKind, SpectralMeasure, StableAR1Model,
};

const DIRS: [Direction; 2] = [Direction::Minus, Direction::Plus];

#[test]
fn certified_series_match_fixed_truncation_oracle() {
    for theta in [THETA1, THETA2] {
        for a in ALPHAS {
            let m = model(theta, a);
            for h in [0, 1, 2, 3, 7, 15, 40] {
                for dir in DIRS {
                    let lag = LagSpec { h, direction: dir };
                    let cd = cross_codifference(&m, lag, 1e-12).unwrap();
                    let cv = cross_covariation(&m, lag, 1e-12).unwrap();
                    let bcd = brute_codifference(&m, h, dir, 500);
                    let bcv = brute_covariation(&m, h, dir, 500);
                    assert!((cd - bcd).abs() < 1e-8, "{theta:?} {a} {lag:?}: CD {cd} vs {bcd}");
                    assert!((cv - bcv).abs() < 1e-8, "{theta:?} {a} {lag:?}: CV {cv} vs {bcv}");
                }
            }
        }
    }
}

#[test]
fn codifference_below_one_matches_oracle() {
    for a in [0.5, 0.9, 1.0] {
        let m = model(THETA1, a);
        for h in [0, 1, 4, 12] {
            for dir in DIRS {
                let cd = cross_codifference(&m, LagSpec { h, direction: dir }, 1e-12).unwrap();
                let bcd = brute_codifference(&m, h, dir, 500);
                assert!((cd - bcd).abs() < 1e-8, "{a} {h} {dir:?}: {cd} vs {bcd}");
            }
        }
    }
}

#[test]
fn gaussian_case_reduces_to_covariance() {
    for theta in [THETA1, THETA2] {
        let m = model(theta, 2.0);
        for h in 0..=20 {
            for dir in DIRS {
                let lag = LagSpec { h, direction: dir };
                let cd = cross_codifference(&m, lag, 1e-13).unwrap();
                let cv = cross_covariation(&m, lag, 1e-13).unwrap();
                let cov = gaussian_cross_covariance(&theta, m.noise(), h, dir);
                assert!((cd - 2.0 * cv).abs() < 1e-8);
                assert!((cd - cov).abs() < 1e-8, "{h} {dir:?}: {cd} vs {cov}");
            }
        }
    }
}

#[test]
fn independent_components_have_zero_cross_measures() {
    let m = StableAR1Model::new(
        CoeffMatrix::diag(0.6, -0.4),
        Alpha::new(1.5).unwrap(),
        SpectralMeasure::axis_example(1.0, 0.4).unwrap(),
    )
    .unwrap();
    for h in [0, 1, 5, 30] {
        for dir in DIRS {
            let lag = LagSpec { h, direction: dir };
            assert_eq!(cross_codifference(&m, lag, 1e-12).unwrap(), 0.0);
            assert_eq!(cross_covariation(&m, lag, 1e-12).unwrap(), 0.0);
        }
    }
}

#[test]
fn identical_components_reduce_to_scalar_autocodifference() {
    // X1 = X2 = scalar AR(1) with coefficient lam and noise scale sigma^alpha
    let lam: f64 = 0.7;
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let gamma = SpectralMeasure::new(vec![Atom::new(c, c, 0.8), Atom::new(-c, -c, 0.8)]).unwrap();
    for a in [0.8, 1.3, 1.9] {
        let m = StableAR1Model::new(CoeffMatrix::diag(lam, lam), Alpha::new(a).unwrap(), gamma.clone()).unwrap();
        let sigma_a = 2.0 * 0.8 * c.powf(a);
        for h in [0, 1, 3, 10] {
            let lh = lam.powi(h as i32);
            let auto_cd = sigma_a * (lh.powf(a) + 1.0 - (1.0 - lh).powf(a)) / (1.0 - lam.powf(a));
            for dir in DIRS {
                // the signed power sits on the X2 factor, which is the lagged one for Plus
                let auto_cv = match dir {
                    Direction::Minus => sigma_a * lh / (1.0 - lam.powf(a)),
                    Direction::Plus => sigma_a * lh.powf(a - 1.0) / (1.0 - lam.powf(a)),
                };
                let lag = LagSpec { h, direction: dir };
                let cd = cross_codifference(&m, lag, 1e-13).unwrap();
                assert!((cd - auto_cd).abs() < 1e-10, "{a} {h}: {cd} vs {auto_cd}");
                if a > 1.0 {
                    let cv = cross_covariation(&m, lag, 1e-13).unwrap();
                    assert!((cv - auto_cv).abs() < 1e-10, "{a} {h}: {cv} vs {auto_cv}");
                }
            }
        }
    }
}

#[test]
fn reported_tail_bound_is_honest() {
    let m = model(THETA2, 1.2);
    for tol in [1e-4, 1e-8] {
        for h in [0, 5, 20] {
            let v = evaluate(&m, MeasureKind::Codifference, LagSpec::minus(h), tol).unwrap();
            let exact = brute_codifference(&m, h, Direction::Minus, 2000);
            assert!(v.tail_bound <= tol);
            assert!((v.value - exact).abs() <= v.tail_bound + 1e-13, "{tol} {h}");
        }
    }
}

#[test]
fn series_batch_matches_single_evaluations_bitwise() {
    let m = model(THETA1, 1.5);
    let s = measure_series(&m, MeasureKind::Covariation, Direction::Plus, 25, 1e-11).unwrap();
    for (h, v) in s.values.iter().enumerate() {
        let single = cross_covariation(&m, LagSpec::plus(h), 1e-11).unwrap();
        assert_eq!(v.to_bits(), single.to_bits());
    }
}

#[test]
fn domain_errors() {
    let m = model(THETA1, 1.0);
    assert_eq!(
        cross_covariation(&m, LagSpec::minus(1), 1e-8),
        Err(Error::AlphaOutOfRange(1.0))
    );
    let m = model(THETA1, 1.5);
    assert_eq!(
        cross_codifference(&m, LagSpec::minus(MAX_LAG + 1), 1e-8),
        Err(Error::LagTooLarge(MAX_LAG + 1))
    );
    assert_eq!(
        cross_codifference(&m, LagSpec::minus(1), 0.0),
        Err(Error::InvalidTolerance(0.0))
    );
    assert!(matches!(
        StableAR1Model::new(CoeffMatrix::new(0.9, 0.5, 0.5, 0.9), Alpha::new(1.5).unwrap(), SpectralMeasure::four_point_example()),
        Err(Error::Unstable(_))
    ));
    assert!(matches!(
        StableAR1Model::new(CoeffMatrix::new(0.0, -0.5, 0.5, 0.0), Alpha::new(1.5).unwrap(), SpectralMeasure::four_point_example()),
        Err(Error::ComplexEigenvalues(_))
    ));
}
