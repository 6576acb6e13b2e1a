use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::estimates::LabConfig;
use crate::solver::Level;

/// Radii `start, …, stop` with `count` equally spaced values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for RaySpec {
    fn default() -> Self {
        RaySpec { start: 0.0, stop: 0.99, count: 100 }
    }
}

impl RaySpec {
    /// `start:stop:count`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::Config(format!("ray `{text}` is not of the form start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Ok(RaySpec { start, stop, count })
    }

    pub fn radii(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 }).collect()
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Config("ray needs at least one radius".into()));
        }
        if !(0.0 <= self.start && self.start <= self.stop && self.stop < 1.0) {
            return Err(CliError::Config(format!(
                "ray radii must satisfy 0 <= start <= stop < 1, got {}:{}",
                self.start, self.stop
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub ray: RaySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    /// Manufactured case id.
    pub case: Option<String>,
    /// Boundary samples at the nodes of the sphere rule.
    pub phi_csv: Option<PathBuf>,
    /// Where to write the sphere rule's nodes.
    pub nodes_csv: Option<PathBuf>,
    pub hyperbolic: bool,
    pub level: Level,
    pub grid_radii: Vec<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            case: None,
            phi_csv: None,
            nodes_csv: None,
            hyperbolic: false,
            level: Level { sphere_order: 32, radial_order: 16, ball_sphere_order: 16 },
            grid_radii: vec![0.2, 0.4, 0.6, 0.8],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub all: bool,
    pub case: Option<String>,
    /// Refinement ladder; the default depends on `n`.
    pub levels: Option<Vec<Level>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticsConfig {
    /// `all`, `i_alpha`, `i_alpha_beta`, `d_integral`, `disc_i_alpha` or `gradient`.
    pub experiment: String,
    pub beta: Option<f64>,
    pub s: Option<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub disc_r_max: f64,
    pub radii: usize,
    pub order: usize,
    pub refined_order: Option<usize>,
}

impl Default for AsymptoticsConfig {
    fn default() -> Self {
        let lab = LabConfig::default();
        AsymptoticsConfig {
            experiment: "all".into(),
            beta: None,
            s: None,
            r_min: lab.r_min,
            r_max: lab.r_max,
            disc_r_max: lab.disc_r_max,
            radii: lab.radii,
            order: lab.order,
            refined_order: lab.refined_order,
        }
    }
}

impl AsymptoticsConfig {
    pub fn lab(&self, n: usize) -> LabConfig {
        LabConfig {
            n,
            r_min: self.r_min,
            r_max: self.r_max,
            disc_r_max: self.disc_r_max,
            radii: self.radii,
            order: self.order,
            refined_order: self.refined_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobiusConfig {
    pub self_test: bool,
    pub pairs: usize,
    pub seed: u64,
    /// Dimensions tested.
    pub dims: Vec<usize>,
}

impl Default for MobiusConfig {
    fn default() -> Self {
        MobiusConfig { self_test: false, pairs: 1000, seed: 20_240_601, dims: vec![3, 4, 5] }
    }
}

/// Everything a run depends on. Loaded from an optional JSON file, then
/// overridden by command-line flags, then validated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    /// `None` until resolved; the hyperbolic solve defaults it to `n − 2`.
    pub alpha: Option<f64>,
    pub out_dir: PathBuf,
    pub kernel: KernelConfig,
    pub solve: SolveConfig,
    pub verify: VerifyConfig,
    pub asymptotics: AsymptoticsConfig,
    pub mobius: MobiusConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            n: 3,
            alpha: None,
            out_dir: PathBuf::from("talpha-out"),
            kernel: KernelConfig::default(),
            solve: SolveConfig::default(),
            verify: VerifyConfig::default(),
            asymptotics: AsymptoticsConfig::default(),
            mobius: MobiusConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// The resolved weight; valid after [`RunConfig::validate`].
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.0)
    }

    /// Fill defaults that depend on other fields and check every precondition.
    pub fn validate(&mut self) -> Result<(), CliError> {
        let disc_only = self.command == "asymptotics" && self.asymptotics.experiment == "disc_i_alpha";
        if self.n < 3 && !(self.n == 2 && disc_only) {
            return Err(CliError::Config(format!(
                "n = {} must be at least 3 (n = 2 only for the disc_i_alpha experiment)",
                self.n
            )));
        }
        if self.command == "solve" && self.solve.hyperbolic {
            let h = self.n as f64 - 2.0;
            match self.alpha {
                None => self.alpha = Some(h),
                Some(a) if a != h => {
                    return Err(CliError::Config(format!("the hyperbolic solve needs alpha = n - 2 = {h}, got {a}")))
                }
                _ => {}
            }
        }
        if self.command == "asymptotics" && self.asymptotics.experiment == "gradient" && self.alpha.is_none() {
            self.alpha = Some(1.0);
        }
        let a = self.alpha.unwrap_or(0.0);
        // asymptotics keeps `None` to mean the standard parameter sweep
        if self.command != "asymptotics" {
            self.alpha = Some(a);
        }
        if !(a.is_finite() && a > -1.0) {
            return Err(CliError::Config(format!("alpha = {a} must satisfy alpha > -1")));
        }
        self.kernel.ray.validate()?;
        for &r in &self.solve.grid_radii {
            if !(0.0..1.0).contains(&r) {
                return Err(CliError::Config(format!("grid radius {r} outside [0, 1)")));
            }
        }
        let lv = self.solve.level;
        if lv.sphere_order < 2 || lv.radial_order < 2 || lv.ball_sphere_order < 2 {
            return Err(CliError::Config("quadrature orders must be at least 2".into()));
        }
        if let Some(levels) = &self.verify.levels {
            if levels.is_empty() {
                return Err(CliError::Config("verify.levels is empty".into()));
            }
        }
        let ax = &self.asymptotics;
        if !(0.5 < ax.r_min && ax.r_min < ax.r_max && ax.r_max < 1.0 && ax.disc_r_max < 1.0) {
            return Err(CliError::Config("asymptotics window must satisfy 0.5 < r_min < r_max < 1".into()));
        }
        if ax.radii < 4 {
            return Err(CliError::Config("asymptotics needs at least 4 radii".into()));
        }
        if let Some(b) = ax.beta {
            if !(b > 0.0 && b <= 1.0) {
                return Err(CliError::Config(format!("beta = {b} must lie in (0, 1]")));
            }
        }
        if self.mobius.dims.iter().any(|&d| d < 2) {
            return Err(CliError::Config("mobius.dims entries must be at least 2".into()));
        }
        if self.mobius.pairs == 0 {
            return Err(CliError::Config("mobius.pairs must be positive".into()));
        }
        Ok(())
    }
}
