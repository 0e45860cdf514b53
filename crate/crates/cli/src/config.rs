//! Run configuration: serde defaults, file loading and flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use rbrdo::optimize::DEFAULT_PSI;
use rbrdo::problems::{ConstraintFamily, ControlSource, ProblemId, ProblemOptions};
use rbrdo::robustness::Aggregator;
use rbrdo::sampling::SamplingScheme;
use rbrdo::stats::RmsConvention;
use rbrdo::{AsoslParams, DeParams, ModeParams, MppPlacement, RobustnessSpec, RobustnessStrategy};

use crate::error::{CliError, CliResult};

/// Directory used for outputs when no `--output` prefix is given.
pub const OUTPUT_DIR_ENV: &str = "RBRDO_OUTPUT_DIR";

/// Table of the metadata file that describes the run rather than configures it.
pub const RUN_INFO_TABLE: &str = "run_info";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Deterministic,
    Rbdo,
    #[default]
    Rbrdo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Deterministic => "deterministic",
            Self::Rbdo => "rbdo",
            Self::Rbrdo => "rbrdo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    None,
    #[default]
    EffectiveMean,
    TypeIi,
    Penalty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AggregatorName {
    #[default]
    Mean,
    Worst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingName {
    #[default]
    Lhs,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementName {
    #[default]
    PerSample,
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub problem: String,
    pub mode: Mode,
    pub strategy: StrategyName,
    /// δ levels; empty means the problem's default sweep (or `[0]` for deterministic runs).
    pub delta: Vec<f64>,
    /// Neighborhood sample count M.
    pub samples: usize,
    pub eta: f64,
    pub aggregator: AggregatorName,
    pub sampling: SamplingName,
    pub placement: PlacementName,
    /// Fixed reliability index of rbdo runs.
    pub beta: Option<f64>,
    pub f: f64,
    pub cr: f64,
    pub np: usize,
    /// 100 for single-objective runs and 500 for rbrdo when unset.
    pub generations: Option<usize>,
    pub r: f64,
    pub pseudo_fronts: usize,
    pub psi: f64,
    pub delta_eta: f64,
    pub alpha_b: f64,
    pub s_b: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    pub benchmark_family: String,
    pub catalyst_controls: String,
    pub rms: String,
    pub seed: u64,
    pub threads: usize,
    /// Path prefix of every output file.
    pub output: Option<String>,
    pub history: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let de = DeParams::default();
        let mode = ModeParams::default();
        let asosl = AsoslParams::<f64>::default();
        Self {
            problem: String::new(),
            mode: Mode::default(),
            strategy: StrategyName::default(),
            delta: Vec::new(),
            samples: 50,
            eta: 0.1,
            aggregator: AggregatorName::default(),
            sampling: SamplingName::default(),
            placement: PlacementName::default(),
            beta: None,
            f: de.f,
            cr: de.cr,
            np: de.np,
            generations: None,
            r: mode.r,
            pseudo_fronts: mode.pseudo_fronts,
            psi: DEFAULT_PSI,
            delta_eta: asosl.delta_eta,
            alpha_b: asosl.alpha_b,
            s_b: asosl.s_b,
            epsilon: asosl.epsilon,
            max_iters: asosl.max_iters,
            benchmark_family: ConstraintFamily::default().name().into(),
            catalyst_controls: ControlSource::default().name().into(),
            rms: RmsConvention::default().name().into(),
            seed: de.seed,
            threads: de.threads,
            output: None,
            history: false,
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

impl RunConfig {
    /// Reads a TOML config. A `[run_info]` table (as written to metadata files) is ignored.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        Self::from_toml(&text).map_err(|e| e.context(&path.display().to_string()))
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| CliError::Io(format!("malformed TOML: {e}")))?;
        table.remove(RUN_INFO_TABLE);
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::config(e.message().to_string()))
    }

    pub fn to_table(&self) -> CliResult<toml::Table> {
        toml::Table::try_from(self).map_err(|e| CliError::config(format!("config is not representable as TOML: {e}")))
    }

    pub fn problem_id(&self) -> CliResult<ProblemId> {
        if self.problem.is_empty() {
            return Err(CliError::config("no problem given (use --problem or a config file)"));
        }
        Ok(self.problem.parse::<ProblemId>()?)
    }

    pub fn problem_options(&self) -> CliResult<ProblemOptions> {
        problem_options(&self.benchmark_family, &self.catalyst_controls)
    }

    pub fn rms_convention(&self) -> CliResult<RmsConvention> {
        parse_rms(&self.rms)
    }

    /// Fills every defaulted field and checks the result, so the returned
    /// config fully describes the run.
    pub fn resolve(mut self) -> CliResult<Self> {
        let id = self.problem_id()?;
        self.problem_options()?;
        self.rms_convention()?;
        if self.generations.is_none() {
            self.generations = Some(match self.mode {
                Mode::Rbrdo => ModeParams::default().de.generations,
                _ => DeParams::default().generations,
            });
        }
        if self.delta.is_empty() {
            self.delta = match self.mode {
                Mode::Deterministic => vec![0.0],
                _ => id.delta_levels().to_vec(),
            };
        }
        match self.mode {
            Mode::Rbdo => {
                self.beta.get_or_insert(id.default_beta());
            }
            _ => {
                if self.beta.is_some() {
                    return Err(CliError::config(format!("beta is only used in rbdo mode (mode is {})", self.mode.name())));
                }
            }
        }
        if self.output.is_none() {
            let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            let prefix = dir.join(format!("{}-{}", id.name(), self.mode.name()));
            self.output = Some(prefix.to_string_lossy().into_owned());
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> CliResult<()> {
        for (i, d) in self.delta.iter().enumerate() {
            if !(*d >= 0.0 && d.is_finite()) {
                return Err(CliError::config(format!("delta level {i} must be finite and >= 0 (got {d})")));
            }
        }
        let mut sorted = self.delta.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        if sorted.len() != self.delta.len() {
            return Err(CliError::config("delta levels must be distinct"));
        }
        let positive = self.delta.iter().any(|d| *d > 0.0);
        if positive && self.mode == Mode::Deterministic {
            return Err(CliError::config("deterministic runs take no delta levels other than 0"));
        }
        if positive && self.strategy == StrategyName::None {
            return Err(CliError::config("robustness strategy 'none' cannot be combined with delta > 0"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(CliError::config(format!("seed must be <= {} (got {})", i64::MAX, self.seed)));
        }
        if self.threads == 0 {
            return Err(CliError::config("threads must be >= 1"));
        }
        self.mode_params()?.validate()?;
        self.asosl_params().validate()?;
        self.robustness_spec(1)?;
        if !(self.psi > 0.0 && self.psi.is_finite()) {
            return Err(CliError::config(format!("penalty coefficient psi must be > 0 (got {})", self.psi)));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::config(format!("beta must be > 0 (got {b})")));
            }
        }
        Ok(())
    }

    pub fn de_params(&self) -> CliResult<DeParams> {
        Ok(DeParams {
            f: self.f,
            cr: self.cr,
            np: self.np,
            generations: self.generations.ok_or_else(|| CliError::config("generations unresolved"))?,
            seed: self.seed,
            threads: self.threads,
        })
    }

    pub fn mode_params(&self) -> CliResult<ModeParams> {
        Ok(ModeParams {
            de: self.de_params()?,
            r: self.r,
            pseudo_fronts: self.pseudo_fronts,
        })
    }

    pub fn asosl_params(&self) -> AsoslParams<f64> {
        asosl_params(self.delta_eta, self.alpha_b, self.s_b, self.epsilon, self.max_iters)
    }

    /// Spec with zero δ; levels are applied per run.
    pub fn robustness_spec(&self, n: usize) -> CliResult<RobustnessSpec<f64>> {
        let strategy = match self.strategy {
            StrategyName::None => return Ok(RobustnessSpec::none(n)),
            StrategyName::EffectiveMean => RobustnessStrategy::EffectiveMean,
            StrategyName::Penalty => RobustnessStrategy::PenaltyBased,
            StrategyName::TypeIi => RobustnessStrategy::TypeII {
                eta: self.eta,
                aggregator: match self.aggregator {
                    AggregatorName::Mean => Aggregator::Mean,
                    AggregatorName::Worst => Aggregator::Worst,
                },
            },
        };
        let scheme = match self.sampling {
            SamplingName::Lhs => SamplingScheme::LatinHypercube,
            SamplingName::Uniform => SamplingScheme::Uniform,
        };
        Ok(RobustnessSpec::new(strategy, vec![0.0; n], self.samples)?.with_scheme(scheme))
    }

    pub fn placement(&self) -> MppPlacement {
        match self.placement {
            PlacementName::PerSample => MppPlacement::PerSample,
            PlacementName::Nominal => MppPlacement::Nominal,
        }
    }

    pub fn output_prefix(&self) -> CliResult<PathBuf> {
        self.output
            .as_ref()
            .map(PathBuf::from)
            .ok_or_else(|| CliError::config("output prefix unresolved"))
    }
}

pub fn asosl_params(delta_eta: f64, alpha_b: f64, s_b: f64, epsilon: f64, max_iters: usize) -> AsoslParams<f64> {
    AsoslParams {
        delta_eta,
        alpha_b,
        s_b,
        epsilon,
        max_iters,
        ..AsoslParams::default()
    }
}

pub fn problem_options(family: &str, controls: &str) -> CliResult<ProblemOptions> {
    let benchmark_family = ConstraintFamily::parse(family).ok_or_else(|| {
        CliError::config(format!(
            "unknown benchmark family '{family}' (known: standard, flipped-second-term, negative-denominator)"
        ))
    })?;
    let catalyst_controls = ControlSource::parse(controls)
        .ok_or_else(|| CliError::config(format!("unknown catalyst control source '{controls}' (known: mpp, mean)")))?;
    Ok(ProblemOptions {
        benchmark_family,
        catalyst_controls,
    })
}

pub fn parse_rms(s: &str) -> CliResult<RmsConvention> {
    RmsConvention::parse(s).ok_or_else(|| CliError::config(format!("unknown RMS convention '{s}' (known: dof, population)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = RunConfig {
            problem: "reactor".into(),
            ..RunConfig::default()
        }
        .resolve()
        .unwrap();
        let text = toml::to_string(&cfg.to_table().unwrap()).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn run_info_is_ignored_and_unknown_keys_rejected() {
        let cfg = RunConfig::from_toml("problem = \"benchmark\"\n[run_info]\nwall_time_s = 1.5\n").unwrap();
        assert_eq!(cfg.problem, "benchmark");
        assert!(matches!(RunConfig::from_toml("problme = \"x\"\n"), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::from_toml("problem = \n"), Err(CliError::Io(_))));
    }

    #[test]
    fn none_strategy_with_noise_is_rejected() {
        let cfg = RunConfig {
            problem: "benchmark".into(),
            strategy: StrategyName::None,
            delta: vec![0.0, 0.05],
            ..RunConfig::default()
        };
        assert!(matches!(cfg.resolve(), Err(CliError::Config(_))));
    }
}
