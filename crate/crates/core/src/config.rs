//! Declarative run configuration (JSON).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ar_model::{CoeffMatrix, StableAR1Model};
use crate::error::{Error, Result};
use crate::measures::{Direction, MeasureKind};
use crate::stable::{Alpha, Atom, SpectralMeasure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Measures,
    Asymptotics,
    Ratio,
    Simulate,
    Estimate,
    CheckTheorem1,
}

/// Model and task options. Every task option is optional in the file and
/// may be overridden on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub alpha: f64,
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MeasureKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// `[h_lo, h_hi]` for the α estimator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[usize; 2]>,
    /// FLOM exponent; chosen from a pilot estimate when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `Θ1 = [-0.2, 0.1; -0.3, 0.6]` with the four-atom measure and α = 1.5.
    pub fn theta1_example() -> Self {
        Self::example(CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6))
    }

    /// `Θ2 = [0.5, 0.1; -0.1, 0.7]` with the four-atom measure and α = 1.5.
    pub fn theta2_example() -> Self {
        Self::example(CoeffMatrix::new(0.5, 0.1, -0.1, 0.7))
    }

    fn example(theta: CoeffMatrix) -> Self {
        let atoms = SpectralMeasure::four_point_example().atoms().to_vec();
        RunConfig {
            a1: theta.a1,
            a2: theta.a2,
            a3: theta.a3,
            a4: theta.a4,
            alpha: 1.5,
            atoms,
            task: None,
            h_max: None,
            tol: None,
            seed: None,
            n: None,
            output: None,
            svg: None,
            kind: None,
            direction: None,
            input: None,
            window: None,
            p: None,
            replicates: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn theta(&self) -> CoeffMatrix {
        CoeffMatrix::new(self.a1, self.a2, self.a3, self.a4)
    }

    pub fn noise(&self) -> Result<SpectralMeasure> {
        SpectralMeasure::new(self.atoms.clone())
    }

    /// Validated model; fails on an invalid α or measure, complex
    /// eigenvalues or an unstable Θ.
    pub fn model(&self) -> Result<StableAR1Model> {
        StableAR1Model::new(self.theta(), Alpha::new(self.alpha)?, self.noise()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let text = r#"{"a1": 0.1, "a2": 0, "a3": 0, "a4": 0.2, "alpha": 1.5,
            "atoms": [{"s1": 1, "s2": 0, "w": 1}], "hmax": 3}"#;
        let err = RunConfig::from_json(text).unwrap_err().to_string();
        assert!(err.contains("hmax") && err.contains("line 2"), "{err}");
        let atom = r#"{"a1": 0.1, "a2": 0, "a3": 0, "a4": 0.2, "alpha": 1.5,
            "atoms": [{"s1": 1, "s2": 0, "weight": 1}]}"#;
        assert!(RunConfig::from_json(atom).is_err());
    }

    #[test]
    fn examples_round_trip_and_validate() {
        for cfg in [RunConfig::theta1_example(), RunConfig::theta2_example()] {
            let back = RunConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(back, cfg);
            cfg.model().unwrap();
        }
    }

    #[test]
    fn task_names_are_kebab_case() {
        let text = r#"{"a1": 0.1, "a2": 0, "a3": 0, "a4": 0.2, "alpha": 1.5,
            "atoms": [{"s1": 1, "s2": 0, "w": 1}, {"s1": -1, "s2": 0, "w": 1}],
            "task": "check-theorem1", "kind": "cv", "direction": "plus"}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.task, Some(Task::CheckTheorem1));
        assert_eq!(cfg.direction, Some(Direction::Plus));
    }
}
