//! Per-atom series terms shared by the measure series and the asymptotic
//! constants.
//!
//! For a lag `h` the cross measures pair the lagged-row entry of
//! `Θ^(j+h) s` with the other row's entry of `Θ^j s`. Splitting
//! `Θ^(j+h)` along the eigenvalues gives
//!
//! * distinct: `Θ^(j+h) s = λ1^h (λ1^j P1 s) + λ2^h (λ2^j P2 s)`, the
//!   "lead" and "trail" parts;
//! * repeated: `Θ^(j+h) s = λ^h (Θ^j s) + h λ^h (λ^(j-1) N s)`.
//!
//! The lead part, the trail part and the unshifted entry are the `A`, `B`
//! and `C` quantities the asymptotic constants are built from.

use crate::ar_model::{n_pow_minus_one, PowerSplit, StableAR1Model};
use crate::measures::Direction;
use crate::summation::Envelope;

#[derive(Debug, Clone, Copy)]
pub(crate) struct AtomVectors {
    pub weight: f64,
    /// distinct: `P1 s`; repeated: `s`
    pub u: [f64; 2],
    /// distinct: `P2 s`; repeated: `N s`
    pub v: [f64; 2],
}

#[derive(Debug, Clone)]
pub(crate) struct TermEvaluator {
    pub split: PowerSplit,
    pub atoms: Vec<AtomVectors>,
    /// row of the lagged entry
    row: usize,
    /// row of the unshifted entry
    other: usize,
}

impl TermEvaluator {
    pub fn new(model: &StableAR1Model, direction: Direction) -> Self {
        Self::with_split(model, model.split(), direction)
    }

    pub fn with_split(model: &StableAR1Model, split: PowerSplit, direction: Direction) -> Self {
        let atoms = model
            .noise()
            .atoms()
            .iter()
            .map(|at| {
                let s = at.point();
                let (u, v) = match &split {
                    PowerSplit::Distinct { p1, p2, .. } => (p1.apply(s), p2.apply(s)),
                    PowerSplit::Repeated { nil, .. } => (s, nil.apply(s)),
                };
                AtomVectors {
                    weight: at.weight,
                    u,
                    v,
                }
            })
            .collect();
        // CD(X1(t), X2(t-h)) lags through row 0; CD(X1(t), X2(t+h)) through row 1.
        let (row, other) = match direction {
            Direction::Minus => (0, 1),
            Direction::Plus => (1, 0),
        };
        TermEvaluator {
            split,
            atoms,
            row,
            other,
        }
    }

    pub fn is_minus(&self) -> bool {
        self.row == 0
    }

    pub fn rho(&self) -> f64 {
        self.split.spectral_radius()
    }

    /// Row `i` of `Θ^n s`.
    #[inline]
    fn power_entry(&self, at: &AtomVectors, i: usize, n: usize) -> f64 {
        match self.split {
            PowerSplit::Distinct { l1, l2, .. } => {
                l1.powi(n as i32) * at.u[i] + l2.powi(n as i32) * at.v[i]
            }
            PowerSplit::Repeated { l, .. } => {
                l.powi(n as i32) * at.u[i] + n_pow_minus_one(n, l) * at.v[i]
            }
        }
    }

    /// The unshifted entry `C`.
    #[inline]
    pub fn base(&self, at: &AtomVectors, j: usize) -> f64 {
        self.power_entry(at, self.other, j)
    }

    /// The lagged entry `λ1^h A + λ2^h B` (or `λ^h A + h λ^h B`).
    #[inline]
    pub fn shifted(&self, at: &AtomVectors, j: usize, h: usize) -> f64 {
        self.power_entry(at, self.row, j + h)
    }

    /// `(A, B)`. In the repeated case `B = λ^(j-1) (N s)` needs `λ != 0`.
    pub fn lead_trail(&self, at: &AtomVectors, j: usize) -> (f64, f64) {
        let r = self.row;
        match self.split {
            PowerSplit::Distinct { l1, l2, .. } => {
                (l1.powi(j as i32) * at.u[r], l2.powi(j as i32) * at.v[r])
            }
            PowerSplit::Repeated { l, .. } => {
                let a = self.power_entry(at, r, j);
                let b = l.powi(j as i32 - 1) * at.v[r];
                (a, b)
            }
        }
    }

    fn row_envelope(&self, at: &AtomVectors, i: usize, offset: usize) -> Envelope {
        match self.split {
            PowerSplit::Distinct { .. } => Envelope::new(at.u[i].abs() + at.v[i].abs(), 0.0, offset),
            PowerSplit::Repeated { .. } => {
                Envelope::new(at.u[i].abs(), at.v[i].abs() / self.rho(), offset)
            }
        }
    }

    pub fn base_envelope(&self, at: &AtomVectors) -> Envelope {
        self.row_envelope(at, self.other, 0)
    }

    pub fn shifted_envelope(&self, at: &AtomVectors, h: usize) -> Envelope {
        self.row_envelope(at, self.row, h)
    }

    pub fn lead_envelope(&self, at: &AtomVectors) -> Envelope {
        match self.split {
            PowerSplit::Distinct { .. } => Envelope::new(at.u[self.row].abs(), 0.0, 0),
            PowerSplit::Repeated { .. } => self.row_envelope(at, self.row, 0),
        }
    }

    pub fn trail_envelope(&self, at: &AtomVectors) -> Envelope {
        match self.split {
            PowerSplit::Distinct { .. } => Envelope::new(at.v[self.row].abs(), 0.0, 0),
            PowerSplit::Repeated { .. } => Envelope::new(at.v[self.row].abs() / self.rho(), 0.0, 0),
        }
    }
}

/// `|x|^α + |c|^α - |c - x|^α` without the cancellation that the direct
/// formula suffers when `|x| << |c|`.
#[inline]
pub(crate) fn codifference_kernel(c: f64, x: f64, alpha: f64) -> f64 {
    if x == 0.0 || c == 0.0 {
        // |x|^α + 0 - |x|^α, or 0 + |c|^α - |c|^α
        return 0.0;
    }
    let ax = x.abs().powf(alpha);
    let u = x / c;
    if u.abs() <= 0.5 {
        // |c|^α - |c - x|^α = -|c|^α (|1 - u|^α - 1)
        ax - c.abs().powf(alpha) * (alpha * (-u).ln_1p()).exp_m1()
    } else {
        ax + c.abs().powf(alpha) - (c - x).abs().powf(alpha)
    }
}
