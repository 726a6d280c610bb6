//! TOML run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use mixruin_core::{JumpLaw, MixingAtom, MixingLaw, ModelSpec, TailClosure};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: RawModel,
    claims: RawLaw,
    premium_jumps: RawLaw,
    mixing: RawMixing,
    grid: Option<RawGrid>,
    solver: Option<RawSolver>,
    mc: Option<RawMc>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    u: f64,
    c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
enum RawLaw {
    Exponential {
        rate: f64,
    },
    Gamma {
        shape: f64,
        rate: f64,
    },
    Pareto {
        scale: f64,
        tail_index: f64,
    },
    Empirical {
        sample: Option<Vec<f64>>,
        path: Option<PathBuf>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawMixing {
    Degenerate {
        gamma: f64,
        delta: f64,
    },
    Discrete {
        atoms: Vec<RawAtom>,
    },
    Gamma {
        gamma_shape: f64,
        gamma_rate: f64,
        delta_shape: f64,
        delta_rate: f64,
        samples: Option<usize>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    gamma: f64,
    delta: f64,
    prob: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    start: f64,
    stop: f64,
    step: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    h: Option<f64>,
    u_max: Option<f64>,
    tolerance: Option<f64>,
    tail: Option<TailChoice>,
    max_iterations: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    paths: Option<u64>,
    horizon: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: PathBuf,
}

/// Evenly spaced evaluation points `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl UGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, CliError> {
        let ok = start.is_finite() && stop.is_finite() && step.is_finite();
        if !ok || step <= 0.0 || start < 0.0 || stop < start {
            return Err(CliError::config(format!(
                "grid needs step > 0, start >= 0 and stop >= start, got {start}:{stop}:{step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Parse `start:stop:step`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::config(format!("--u-grid expects start:stop:step, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.trim().parse().map_err(|_| bad())?;
        }
        Self::new(v[0], v[1], v[2])
    }

    pub fn points(&self) -> Vec<f64> {
        // tolerate rounding in (stop - start) / step so that 0:10:0.5 ends at 10
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl Default for UGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 10.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailChoice {
    Lundberg,
    Zero,
}

/// Solver settings; unset fields fall back to per-atom defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverSettings {
    pub h: Option<f64>,
    pub u_max: Option<f64>,
    pub tolerance: Option<f64>,
    pub tail: Option<TailChoice>,
    pub max_iterations: Option<usize>,
}

impl SolverSettings {
    /// Tail closure for an atom with adjustment coefficient `r`.
    pub fn closure(&self, r: Option<f64>) -> Result<TailClosure, CliError> {
        match (self.tail, r) {
            (Some(TailChoice::Zero), _) | (None, None) => Ok(TailClosure::Zero),
            (_, Some(r)) => Ok(TailClosure::Lundberg(r)),
            (Some(TailChoice::Lundberg), None) => Err(CliError::config(
                "tail = \"lundberg\" needs an adjustment coefficient, which this model lacks; use tail = \"zero\"",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub paths: u64,
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
}

pub const DEFAULT_MC_PATHS: u64 = 100_000;
/// Default horizon in units of the mean interarrival time of the slowest atom.
pub const DEFAULT_HORIZON_EVENTS: f64 = 4000.0;

impl McSettings {
    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::config("[mc] seed is required for simulation"))
    }

    /// Configured horizon, else `4000 / lambda_min` over the mixing support.
    pub fn horizon(&self, mixing: &MixingLaw) -> f64 {
        self.horizon.unwrap_or_else(|| {
            let lambda_min = match mixing.atoms() {
                Some(atoms) => atoms
                    .iter()
                    .map(|a| a.gamma + a.delta)
                    .fold(f64::INFINITY, f64::min),
                None => {
                    let m = mixing.moments();
                    m.mean_gamma + m.mean_delta
                }
            };
            DEFAULT_HORIZON_EVENTS / lambda_min
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub u_grid: UGrid,
    pub solver: SolverSettings,
    /// `None` when the file has no `[mc]` section.
    pub mc: Option<McSettings>,
    pub mix_samples: Option<usize>,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    /// Parse config text; relative sample paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))?;

        let premium_law = build_law(raw.premium_jumps, base, "premium_jumps")?;
        let claim_law = build_law(raw.claims, base, "claims")?;
        let (mixing, mix_samples) = build_mixing(raw.mixing);
        let model = ModelSpec::new(raw.model.u, raw.model.c, premium_law, claim_law, mixing)
            .map_err(|e| CliError::config(e.to_string()))?;

        let u_grid = match raw.grid {
            Some(g) => UGrid::new(g.start, g.stop, g.step)?,
            None => UGrid::default(),
        };
        let s = raw.solver.unwrap_or_default();
        let solver = SolverSettings {
            h: s.h,
            u_max: s.u_max,
            tolerance: s.tolerance,
            tail: s.tail,
            max_iterations: s.max_iterations,
        };
        let mc = raw.mc.map(|m| McSettings {
            paths: m.paths.unwrap_or(DEFAULT_MC_PATHS),
            horizon: m.horizon,
            seed: m.seed,
        });
        Ok(Self {
            model,
            u_grid,
            solver,
            mc,
            mix_samples,
            output_path: raw.output.map(|o| o.path),
        })
    }

    pub fn mc(&self) -> Result<McSettings, CliError> {
        self.mc
            .ok_or_else(|| CliError::config("an [mc] section with a seed is required"))
    }
}

fn build_law(raw: RawLaw, base: &Path, section: &str) -> Result<JumpLaw, CliError> {
    let law = match raw {
        RawLaw::Exponential { rate } => JumpLaw::exponential(rate),
        RawLaw::Gamma { shape, rate } => JumpLaw::gamma(shape, rate),
        RawLaw::Pareto { scale, tail_index } => JumpLaw::pareto(scale, tail_index),
        RawLaw::Empirical { sample, path } => {
            let values = match (sample, path) {
                (Some(v), None) => v,
                (None, Some(p)) => read_sample(&base.join(p))?,
                _ => {
                    return Err(CliError::config(format!(
                        "[{section}] empirical law needs exactly one of `sample` or `path`"
                    )))
                }
            };
            JumpLaw::empirical(values)
        }
    };
    law.map_err(|e| CliError::config(format!("[{section}] {e}")))
}

fn read_sample(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read sample {}: {e}", path.display())))?;
    text.split(|ch: char| ch.is_whitespace() || ch == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                CliError::config(format!("bad number {t:?} in sample {}", path.display()))
            })
        })
        .collect()
}

fn build_mixing(raw: RawMixing) -> (MixingLaw, Option<usize>) {
    match raw {
        RawMixing::Degenerate { gamma, delta } => (MixingLaw::Degenerate { gamma, delta }, None),
        RawMixing::Discrete { atoms } => (
            MixingLaw::Discrete(
                atoms
                    .into_iter()
                    .map(|a| MixingAtom {
                        gamma: a.gamma,
                        delta: a.delta,
                        prob: a.prob,
                    })
                    .collect(),
            ),
            None,
        ),
        RawMixing::Gamma {
            gamma_shape,
            gamma_rate,
            delta_shape,
            delta_rate,
            samples,
        } => (
            MixingLaw::IndependentGamma {
                gamma_shape,
                gamma_rate,
                delta_shape,
                delta_rate,
            },
            samples,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG_A: &str = r#"
[model]
u = 0
c = 1

[claims]
dist = "exponential"
rate = 1

[premium_jumps]
dist = "exponential"
rate = 1

[mixing]
type = "degenerate"
gamma = 1
delta = 0.5
"#;

    #[test]
    fn integers_read_as_reals() {
        let cfg = RunConfig::parse(CONFIG_A, Path::new(".")).unwrap();
        assert_eq!(cfg.model.c, 1.0);
        assert_eq!(cfg.model.exponential_rates(), Some((1.0, 1.0)));
        assert_eq!(cfg.u_grid, UGrid::default());
        assert!(cfg.mc.is_none());
    }

    #[test]
    fn grid_points_include_stop() {
        let g = UGrid::parse("0:10:0.5").unwrap();
        let p = g.points();
        assert_eq!(p.len(), 21);
        assert_eq!(p[20], 10.0);
        assert_eq!(UGrid::parse("3:3:1").unwrap().points(), vec![3.0]);
        assert_eq!(UGrid::parse("0:0.3:0.1").unwrap().points().len(), 4);
    }

    #[test]
    fn grid_rejects_bad_triples() {
        for s in ["0:1", "0:1:0", "2:1:0.5", "-1:1:0.5", "a:1:1"] {
            assert_eq!(UGrid::parse(s).unwrap_err().code, 1, "{s}");
        }
    }

    #[test]
    fn unknown_dist_is_config_error() {
        let text = CONFIG_A.replace("dist = \"exponential\"\nrate = 1\n\n[premium", "dist = \"weibull\"\nrate = 1\n\n[premium");
        assert_eq!(RunConfig::parse(&text, Path::new(".")).unwrap_err().code, 1);
    }

    #[test]
    fn discrete_and_empirical_sections() {
        let text = r#"
[model]
c = 1
[claims]
dist = "empirical"
sample = [0.5, 1.5, 1.0]
[premium_jumps]
dist = "gamma"
shape = 2
rate = 2
[mixing]
type = "discrete"
atoms = [
  { gamma = 1, delta = 1.5, prob = 0.5 },
  { gamma = 2, delta = 0.5, prob = 0.5 },
]
[mc]
seed = 7
"#;
        let cfg = RunConfig::parse(text, Path::new(".")).unwrap();
        assert_eq!(cfg.model.claim_law.mean(), 1.0);
        assert_eq!(cfg.mc().unwrap().seed().unwrap(), 7);
        assert_eq!(cfg.mc().unwrap().paths, DEFAULT_MC_PATHS);
        // slowest atom has lambda = 2.5
        assert_eq!(cfg.mc().unwrap().horizon(&cfg.model.mixing), 1600.0);
    }

    #[test]
    fn probabilities_must_sum_to_one() {
        let text = CONFIG_A.replace(
            "type = \"degenerate\"\ngamma = 1\ndelta = 0.5",
            "type = \"discrete\"\natoms = [{ gamma = 1, delta = 1, prob = 0.6 }]",
        );
        assert_eq!(RunConfig::parse(&text, Path::new(".")).unwrap_err().code, 1);
    }

    #[test]
    fn mc_without_seed_is_rejected_on_use() {
        let text = format!("{CONFIG_A}\n[mc]\npaths = 1000\n");
        let cfg = RunConfig::parse(&text, Path::new(".")).unwrap();
        assert_eq!(cfg.mc().unwrap().seed().unwrap_err().code, 1);
    }
}
