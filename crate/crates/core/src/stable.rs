//! Scalar and bivariate symmetric alpha-stable primitives.
//!
//! A symmetric alpha-stable vector in the plane is described by its
//! stability index and a finite symmetric spectral measure on the unit
//! circle. Only atomic measures are supported, so every integral over the
//! circle is a finite weighted sum over atoms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the unit-norm and antipodal-symmetry checks on atoms.
pub const ATOM_TOLERANCE: f64 = 1e-12;

/// Draws generated per independently seeded RNG stream.
pub(crate) const SAMPLE_CHUNK: usize = 1 << 14;

/// `|a|^p * sign(a)`, with `0` mapped to `0`.
#[inline]
pub fn signed_power(a: f64, p: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a.abs().powf(p).copysign(a)
    }
}

/// Stability index of a symmetric stable law, `0 < alpha <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 2.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Covariation needs `alpha > 1`. The Gaussian endpoint `alpha = 2` is
    /// accepted, where covariation is half the covariance.
    pub fn check_covariation(self) -> Result<()> {
        if self.0 > 1.0 {
            Ok(())
        } else {
            Err(Error::AlphaOutOfRange(self.0))
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Alpha::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

/// One point mass of a spectral measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub s1: f64,
    pub s2: f64,
    #[serde(rename = "w")]
    pub weight: f64,
}

impl Atom {
    pub fn new(s1: f64, s2: f64, weight: f64) -> Self {
        Atom { s1, s2, weight }
    }

    #[inline]
    pub fn point(&self) -> [f64; 2] {
        [self.s1, self.s2]
    }
}

/// Finite symmetric atomic measure on the unit circle.
///
/// Construction rejects anything that is not a valid symmetric measure;
/// asymmetric input is never silently symmetrized.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpectralMeasure {
    atoms: Vec<Atom>,
}

impl SpectralMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !(a.s1.is_finite() && a.s2.is_finite() && a.weight.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {i} is not finite")));
            }
            let norm2 = a.s1 * a.s1 + a.s2 * a.s2;
            if (norm2 - 1.0).abs() > ATOM_TOLERANCE {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i} = ({}, {}) is not on the unit circle (|s|^2 = {norm2})",
                    a.s1, a.s2
                )));
            }
            if a.weight <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom {i} has non-positive weight {}",
                    a.weight
                )));
            }
        }

        // Pair every atom with a distinct antipode of equal weight.
        let mut paired = vec![false; atoms.len()];
        for i in 0..atoms.len() {
            if paired[i] {
                continue;
            }
            let a = atoms[i];
            let mate = (0..atoms.len()).find(|&k| {
                k != i
                    && !paired[k]
                    && (atoms[k].s1 + a.s1).abs() <= ATOM_TOLERANCE
                    && (atoms[k].s2 + a.s2).abs() <= ATOM_TOLERANCE
                    && (atoms[k].weight - a.weight).abs() <= ATOM_TOLERANCE
            });
            match mate {
                Some(k) => {
                    paired[i] = true;
                    paired[k] = true;
                }
                None => {
                    return Err(Error::InvalidMeasure(format!(
                        "atom ({}, {}) with weight {} has no antipodal partner of equal weight",
                        a.s1, a.s2, a.weight
                    )))
                }
            }
        }
        Ok(SpectralMeasure { atoms })
    }

    /// Builds a measure from one representative per antipodal pair; each
    /// entry `(s1, s2, w)` contributes atoms at `s` and `-s`, both of weight `w`.
    pub fn from_pairs(pairs: &[(f64, f64, f64)]) -> Result<Self> {
        let atoms = pairs
            .iter()
            .flat_map(|&(s1, s2, w)| [Atom::new(s1, s2, w), Atom::new(-s1, -s2, w)])
            .collect();
        Self::new(atoms)
    }

    /// Four atoms at `(±1/2, ±sqrt(3)/2)`: weight 0.5 on the pair along
    /// `(1/2, sqrt(3)/2)` and 0.2 on the pair along `(-1/2, sqrt(3)/2)`.
    pub fn four_point_example() -> Self {
        let c = 3f64.sqrt() / 2.0;
        Self::new(vec![
            Atom::new(0.5, c, 0.5),
            Atom::new(-0.5, -c, 0.5),
            Atom::new(-0.5, c, 0.2),
            Atom::new(0.5, -c, 0.2),
        ])
        .expect("example measure is valid")
    }

    /// Atoms on the coordinate axes, making the two noise components independent.
    pub fn axis_example(w1: f64, w2: f64) -> Result<Self> {
        Self::from_pairs(&[(1.0, 0.0, w1), (0.0, 1.0, w2)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Same atoms with every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.atoms
                .iter()
                .map(|a| Atom::new(a.s1, a.s2, a.weight * factor))
                .collect(),
        )
    }

    /// `exp(-sum_k w_k |<theta, s_k>|^alpha)`.
    pub fn char_function(&self, alpha: Alpha, theta: [f64; 2]) -> f64 {
        let a = alpha.value();
        let exponent: f64 = self
            .atoms
            .iter()
            .map(|at| at.weight * (theta[0] * at.s1 + theta[1] * at.s2).abs().powf(a))
            .sum();
        (-exponent).exp()
    }

    /// `sum_k w_k s_k s_k^T`; the noise covariance at `alpha = 2` is twice this.
    pub fn second_moment_matrix(&self) -> [[f64; 2]; 2] {
        let mut m = [[0.0; 2]; 2];
        for at in &self.atoms {
            m[0][0] += at.weight * at.s1 * at.s1;
            m[0][1] += at.weight * at.s1 * at.s2;
            m[1][1] += at.weight * at.s2 * at.s2;
        }
        m[1][0] = m[0][1];
        m
    }
}

impl<'de> Deserialize<'de> for SpectralMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<Atom>::deserialize(d)?;
        SpectralMeasure::new(atoms).map_err(serde::de::Error::custom)
    }
}

/// Joint characteristic function of the stable vector with spectral measure
/// `measure`; real-valued because the measure is symmetric.
pub fn joint_char_function(measure: &SpectralMeasure, alpha: Alpha, theta: [f64; 2]) -> f64 {
    measure.char_function(alpha, theta)
}

/// One Chambers-Mallows-Stuck draw of a standard symmetric stable variable
/// with characteristic function `exp(-|t|^alpha)`.
pub fn draw_standard_sas<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = PI * (rng.random::<f64>() - 0.5);
    let w = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break -u.ln();
        }
    };
    if alpha == 1.0 {
        return v.tan();
    }
    let av = alpha * v;
    av.sin() / v.cos().powf(1.0 / alpha) * ((v - av).cos() / w).powf((1.0 - alpha) / alpha)
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// `n` i.i.d. standard symmetric stable draws. Chunks of the output are
/// generated on independent RNG streams derived from `seed`, so the result
/// does not depend on the number of worker threads.
pub fn sample_standard_sas(alpha: Alpha, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::SampleSize { min: 1, got: 0 });
    }
    let a = alpha.value();
    let mut out = vec![0.0; n];
    out.par_chunks_mut(SAMPLE_CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let mut rng = chunk_rng(seed, c);
            for x in chunk.iter_mut() {
                *x = draw_standard_sas(a, &mut rng);
            }
        });
    Ok(out)
}

/// `n` i.i.d. draws of the bivariate stable vector `Z = sum_k w_k^(1/alpha) A_k s_k`
/// with `A_k` independent standard symmetric stable scalars.
pub fn sample_bivariate_stable(
    measure: &SpectralMeasure,
    alpha: Alpha,
    n: usize,
    seed: u64,
) -> Result<Vec<[f64; 2]>> {
    if n == 0 {
        return Err(Error::SampleSize { min: 1, got: 0 });
    }
    let a = alpha.value();
    let loadings: Vec<[f64; 2]> = measure
        .atoms()
        .iter()
        .map(|at| {
            let scale = at.weight.powf(1.0 / a);
            [scale * at.s1, scale * at.s2]
        })
        .collect();
    let mut out = vec![[0.0; 2]; n];
    out.par_chunks_mut(SAMPLE_CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let mut rng = chunk_rng(seed, c);
            for z in chunk.iter_mut() {
                let mut acc = [0.0; 2];
                for l in &loadings {
                    let g = draw_standard_sas(a, &mut rng);
                    acc[0] += g * l[0];
                    acc[1] += g * l[1];
                }
                *z = acc;
            }
        });
    Ok(out)
}
