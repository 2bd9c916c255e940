//! Bidimensional AR(1) model `X(t) = Θ X(t-1) + Z(t)` with symmetric
//! alpha-stable noise: eigen-structure of Θ, closed-form powers `Θ^j`,
//! asymptotic case classification and path simulation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stable::{sample_bivariate_stable, Alpha, SpectralMeasure};

/// Relative tolerance under which two eigenvalues are treated as equal, or
/// as exact negatives of each other.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

/// Relative tolerance on the discriminant `(a1 - a4)^2 + 4 a2 a3`. Values
/// within it are rounding noise around a repeated root and are set to zero
/// before the square root amplifies them.
pub const DISCRIMINANT_TOLERANCE: f64 = 64.0 * f64::EPSILON;

/// Transient level below which the burn-in of a simulated path is discarded.
pub const BURN_IN_LEVEL: f64 = 1e-12;

pub type Mat2 = [[f64; 2]; 2];

/// Row-major 2x2 coefficient matrix `[a1, a2; a3, a4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffMatrix {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl CoeffMatrix {
    pub const fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        CoeffMatrix { a1, a2, a3, a4 }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn diag(d1: f64, d2: f64) -> Self {
        Self::new(d1, 0.0, 0.0, d2)
    }

    pub fn from_rows(m: Mat2) -> Self {
        Self::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn rows(&self) -> Mat2 {
        [[self.a1, self.a2], [self.a3, self.a4]]
    }

    pub fn trace(&self) -> f64 {
        self.a1 + self.a4
    }

    pub fn det(&self) -> f64 {
        self.a1 * self.a4 - self.a2 * self.a3
    }

    /// `(a1 - a4)^2 + 4 a2 a3`; the eigenvalues are real iff it is non-negative.
    pub fn discriminant(&self) -> f64 {
        let d = self.a1 - self.a4;
        d * d + 4.0 * self.a2 * self.a3
    }

    pub fn mul(&self, rhs: &CoeffMatrix) -> CoeffMatrix {
        CoeffMatrix::new(
            self.a1 * rhs.a1 + self.a2 * rhs.a3,
            self.a1 * rhs.a2 + self.a2 * rhs.a4,
            self.a3 * rhs.a1 + self.a4 * rhs.a3,
            self.a3 * rhs.a2 + self.a4 * rhs.a4,
        )
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a1 * v[0] + self.a2 * v[1],
            self.a3 * v[0] + self.a4 * v[1],
        ]
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a1
            .abs()
            .max(self.a2.abs())
            .max(self.a3.abs())
            .max(self.a4.abs())
    }

    pub fn max_abs_diff(&self, other: &CoeffMatrix) -> f64 {
        (self.a1 - other.a1)
            .abs()
            .max((self.a2 - other.a2).abs())
            .max((self.a3 - other.a3).abs())
            .max((self.a4 - other.a4).abs())
    }

    fn scaled_plus_identity(&self, scale: f64, shift: f64) -> CoeffMatrix {
        CoeffMatrix::new(
            scale * self.a1 + shift,
            scale * self.a2,
            scale * self.a3,
            scale * self.a4 + shift,
        )
    }
}

/// Real eigenvalues of Θ, ordered `lambda1 <= lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenStructure {
    pub lambda1: f64,
    pub lambda2: f64,
    pub degenerate: bool,
}

impl EigenStructure {
    pub fn spectral_radius(&self) -> f64 {
        self.lambda1.abs().max(self.lambda2.abs())
    }

    /// `lambda1 = -lambda2 != 0` within the relative eigenvalue tolerance.
    pub fn is_sign_flip(&self) -> bool {
        !self.degenerate
            && (self.lambda1 + self.lambda2).abs()
                < EIGEN_TOLERANCE * self.lambda1.abs().max(1.0)
    }

    /// The same pair with the labels exchanged. Asymptotic constants are
    /// label-dependent; this is how the relabeling symmetry is exercised.
    pub fn swapped(&self) -> EigenStructure {
        EigenStructure {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
            degenerate: self.degenerate,
        }
    }
}

/// Roots of `z^2 - (a1 + a4) z + (a1 a4 - a2 a3)`.
pub fn eigen_structure(theta: &CoeffMatrix) -> Result<EigenStructure> {
    let scale = theta.max_abs_entry().max(1.0);
    let disc = theta.discriminant();
    let disc_tol = DISCRIMINANT_TOLERANCE * scale * scale;
    if disc < -disc_tol {
        return Err(Error::ComplexEigenvalues(disc));
    }
    let tr = theta.trace();
    if disc < disc_tol {
        return Ok(EigenStructure {
            lambda1: 0.5 * tr,
            lambda2: 0.5 * tr,
            degenerate: true,
        });
    }
    let root = disc.sqrt();
    // Stable quadratic formula: the larger-magnitude root first, the other via det.
    let big = 0.5 * (tr + root.copysign(tr));
    let small = if big != 0.0 { theta.det() / big } else { 0.0 };
    let (mut l1, mut l2) = if big <= small { (big, small) } else { (small, big) };
    let degenerate = (l2 - l1).abs() < EIGEN_TOLERANCE * l1.abs().max(1.0);
    if degenerate {
        let mid = 0.5 * (l1 + l2);
        l1 = mid;
        l2 = mid;
    }
    Ok(EigenStructure {
        lambda1: l1,
        lambda2: l2,
        degenerate,
    })
}

/// Both eigenvalues strictly inside the unit disc (real or complex).
pub fn is_stable(theta: &CoeffMatrix) -> bool {
    match eigen_structure(theta) {
        Ok(e) => e.spectral_radius() < 1.0,
        // complex conjugate pair: |lambda|^2 = det
        Err(_) => theta.det().sqrt() < 1.0,
    }
}

/// `n * x^(n-1)` with the `n = 0` term equal to zero even when `x = 0`.
#[inline]
pub(crate) fn n_pow_minus_one(n: usize, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * x.powi(n as i32 - 1)
    }
}

/// `Θ^j` from the eigenvalues: the divided-difference form for distinct
/// eigenvalues, `j λ^(j-1) Θ - (j-1) λ^j I` for a repeated one.
pub fn theta_power(theta: &CoeffMatrix, j: usize) -> Result<CoeffMatrix> {
    let eig = eigen_structure(theta)?;
    Ok(theta_power_with(theta, &eig, j))
}

pub(crate) fn theta_power_with(theta: &CoeffMatrix, eig: &EigenStructure, j: usize) -> CoeffMatrix {
    if j == 0 {
        return CoeffMatrix::identity();
    }
    let n = j as i32;
    if eig.degenerate {
        let l = eig.lambda1;
        let coef = n_pow_minus_one(j, l);
        let shift = -((j - 1) as f64) * l.powi(n);
        theta.scaled_plus_identity(coef, shift)
    } else {
        let (l1, l2) = (eig.lambda1, eig.lambda2);
        let (p1, p2) = (l1.powi(n), l2.powi(n));
        let gap = l2 - l1;
        let f = (p2 - p1) / gap;
        let g = (l2 * p1 - l1 * p2) / gap;
        theta.scaled_plus_identity(f, g)
    }
}

/// Asymptotic regimes of the cross-dependence measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `|λ1| > |λ2|`
    I,
    /// `|λ1| < |λ2|`
    II,
    /// `λ1 = λ2`
    III,
    /// `λ1 = -λ2`, even lag
    IV,
    /// `λ1 = -λ2`, odd lag
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LagParity {
    Even,
    Odd,
}

impl LagParity {
    pub fn of(h: usize) -> Self {
        if h % 2 == 0 {
            LagParity::Even
        } else {
            LagParity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: Case,
    pub parity: LagParity,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CASE {:?}", self.case)
    }
}

/// A repeated eigenvalue (including `λ1 = λ2 = 0`) is CASE III.
pub fn classify_case(eig: &EigenStructure, parity: LagParity) -> CaseTag {
    let case = if eig.degenerate {
        Case::III
    } else if eig.is_sign_flip() {
        match parity {
            LagParity::Even => Case::IV,
            LagParity::Odd => Case::V,
        }
    } else if eig.lambda1.abs() > eig.lambda2.abs() {
        Case::I
    } else {
        Case::II
    };
    CaseTag { case, parity }
}

/// Spectral split of the matrix powers used by every series term:
/// `Θ^n = λ1^n P1 + λ2^n P2` for distinct eigenvalues, with
/// `P1 = (Θ - λ2 I)/(λ1 - λ2)` and `P2 = (Θ - λ1 I)/(λ2 - λ1)`; and
/// `Θ^n = λ^n I + n λ^(n-1) N` with `N = Θ - λ I` for a repeated one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PowerSplit {
    Distinct {
        l1: f64,
        l2: f64,
        p1: CoeffMatrix,
        p2: CoeffMatrix,
    },
    Repeated {
        l: f64,
        nil: CoeffMatrix,
    },
}

impl PowerSplit {
    pub(crate) fn new(theta: &CoeffMatrix, eig: &EigenStructure) -> Self {
        if eig.degenerate {
            let l = eig.lambda1;
            PowerSplit::Repeated {
                l,
                nil: theta.scaled_plus_identity(1.0, -l),
            }
        } else {
            let (l1, l2) = (eig.lambda1, eig.lambda2);
            PowerSplit::Distinct {
                l1,
                l2,
                p1: theta.scaled_plus_identity(1.0 / (l1 - l2), -l2 / (l1 - l2)),
                p2: theta.scaled_plus_identity(1.0 / (l2 - l1), -l1 / (l2 - l1)),
            }
        }
    }

    pub(crate) fn spectral_radius(&self) -> f64 {
        match *self {
            PowerSplit::Distinct { l1, l2, .. } => l1.abs().max(l2.abs()),
            PowerSplit::Repeated { l, .. } => l.abs(),
        }
    }
}

/// The full process specification: coefficients, stability index and
/// noise spectral measure. Construction enforces real eigenvalues inside
/// the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct StableAR1Model {
    theta: CoeffMatrix,
    alpha: Alpha,
    noise: SpectralMeasure,
    eig: EigenStructure,
}

impl StableAR1Model {
    pub fn new(theta: CoeffMatrix, alpha: Alpha, noise: SpectralMeasure) -> Result<Self> {
        let eig = eigen_structure(&theta)?;
        let rho = eig.spectral_radius();
        if rho >= 1.0 {
            return Err(Error::Unstable(rho));
        }
        Ok(StableAR1Model {
            theta,
            alpha,
            noise,
            eig,
        })
    }

    pub fn theta(&self) -> &CoeffMatrix {
        &self.theta
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn noise(&self) -> &SpectralMeasure {
        &self.noise
    }

    pub fn eigen(&self) -> &EigenStructure {
        &self.eig
    }

    pub fn with_alpha(&self, alpha: Alpha) -> Self {
        StableAR1Model {
            alpha,
            ..self.clone()
        }
    }

    pub fn with_noise(&self, noise: SpectralMeasure) -> Self {
        StableAR1Model {
            noise,
            ..self.clone()
        }
    }

    pub fn power(&self, j: usize) -> CoeffMatrix {
        theta_power_with(&self.theta, &self.eig, j)
    }

    pub(crate) fn split(&self) -> PowerSplit {
        PowerSplit::new(&self.theta, &self.eig)
    }

    /// Smallest burn-in after which the zero-state transient is below
    /// [`BURN_IN_LEVEL`] relative to the stationary path.
    pub fn default_burn_in(&self) -> usize {
        let rho = self.eig.spectral_radius();
        if rho == 0.0 {
            // nilpotent: Θ^2 = 0
            return if self.theta == CoeffMatrix::zero() { 0 } else { 1 };
        }
        let base = (BURN_IN_LEVEL.ln() / rho.ln()).ceil() as usize;
        if !self.eig.degenerate {
            return base;
        }
        let growth = PowerSplit::new(&self.theta, &self.eig);
        let nil_norm = match growth {
            PowerSplit::Repeated { nil, .. } => nil.max_abs_entry(),
            PowerSplit::Distinct { .. } => 0.0,
        };
        let mut b = base;
        while (1.0 + b as f64 * nil_norm / rho) * rho.powi(b as i32) >= BURN_IN_LEVEL {
            b += 1;
        }
        b
    }
}

/// Runs the recursion from `X(0) = 0`, discards `burn_in` steps and returns
/// the next `n` observations. The noise is
/// `sample_bivariate_stable(noise, alpha, burn_in + n, seed)`.
pub fn simulate_path(
    model: &StableAR1Model,
    n: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Vec<[f64; 2]>> {
    if n == 0 {
        return Err(Error::SampleSize { min: 1, got: 0 });
    }
    let noise = sample_bivariate_stable(model.noise(), model.alpha(), burn_in + n, seed)?;
    let theta = model.theta();
    let mut state = [0.0; 2];
    let mut out = Vec::with_capacity(n);
    for (t, z) in noise.iter().enumerate() {
        let prev = theta.apply(state);
        state = [prev[0] + z[0], prev[1] + z[1]];
        if t >= burn_in {
            out.push(state);
        }
    }
    Ok(out)
}
