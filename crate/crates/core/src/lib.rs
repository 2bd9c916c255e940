//! Cross-dependence measures of a bidimensional AR(1) process driven by
//! symmetric alpha-stable noise with a discrete spectral measure.
//!
//! The crate evaluates the cross-codifference and cross-covariation of
//! `X(t) = Θ X(t-1) + Z(t)` as certified series, their large-lag
//! asymptotics, and the empirical counterparts on simulated or observed
//! paths, including an estimator of α built from the limit
//! `CD/CV -> α`.
//!
//! ```
//! use stable_ar2::{CoeffMatrix, Alpha, SpectralMeasure, StableAR1Model, LagSpec};
//! use stable_ar2::measures::cross_codifference;
//!
//! let model = StableAR1Model::new(
//!     CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6),
//!     Alpha::new(1.5)?,
//!     SpectralMeasure::four_point_example(),
//! )?;
//! let cd = cross_codifference(&model, LagSpec::minus(3), 1e-12)?;
//! assert!(cd.is_finite());
//! # Ok::<(), stable_ar2::Error>(())
//! ```

pub mod ar_model;
pub mod asymptotics;
pub mod cli;
pub mod config;
pub mod error;
pub mod measures;
pub mod montecarlo;
pub mod stable;
pub mod summation;
pub mod svg;
mod terms;

pub use ar_model::{
    classify_case, eigen_structure, is_stable, simulate_path, theta_power, Case, CaseTag,
    CoeffMatrix, EigenStructure, LagParity, StableAR1Model,
};
pub use asymptotics::{
    asymptotic_cd, asymptotic_constants, asymptotic_cv, ratio_series, theorem1_check,
    AsymptoticConstants, Prediction, RatioSeries, Theorem1Report,
};
pub use config::{RunConfig, Task};
pub use error::{Error, Result};
pub use measures::{
    cross_codifference, cross_covariation, measure_series, Direction, LagSpec, MeasureKind,
};
pub use montecarlo::{
    empirical_codifference, empirical_covariation, estimate_alpha, AlphaEstimate,
    BlockBootstrap, PathSample,
};
pub use stable::{
    joint_char_function, sample_bivariate_stable, sample_standard_sas, signed_power, Alpha, Atom,
    SpectralMeasure,
};
