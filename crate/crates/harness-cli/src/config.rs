use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use agents::{AgentConfig, Algorithm};
use radar_dsp::{CfarConfig, RadarConfig, Scene};
use spectrum_env::{read_trace_file, EnvConfig, InterferenceSource};

use crate::error::HarnessError;

/// Named interference model, buildable from a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    Tdd {
        bands: Vec<usize>,
        on_steps: usize,
        off_steps: usize,
        #[serde(default)]
        phase: usize,
    },
    Fdd {
        bands: Vec<usize>,
    },
    Trace {
        path: PathBuf,
        #[serde(default = "default_wrap")]
        wrap: bool,
    },
}

fn default_wrap() -> bool {
    true
}

impl SourceSpec {
    pub fn build(&self) -> Result<InterferenceSource, HarnessError> {
        Ok(match self {
            Self::Tdd { bands, on_steps, off_steps, phase } => InterferenceSource::Tdd {
                bands: bands.clone(),
                on_steps: *on_steps,
                off_steps: *off_steps,
                phase: *phase,
            },
            Self::Fdd { bands } => InterferenceSource::Fdd { bands: bands.clone() },
            Self::Trace { path, wrap } => {
                InterferenceSource::Trace { rows: read_trace_file(path)?, wrap: *wrap }
            }
        })
    }
}

/// Simulation scale: `desk` decimates the radar to 25 Msps / 64-pulse
/// CPIs for fast runs, `full` keeps the hardware-faithful 100 Msps /
/// 1000-pulse configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Desk,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "desk" => Ok(Self::Desk),
            "full" => Ok(Self::Full),
            other => Err(format!("unknown scale {other:?} (expected desk or full)")),
        }
    }
}

/// Detection-pass settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectionConfig {
    /// CPIs scored from the tail of the evaluation stream.
    pub n_cpis: usize,
    /// Theoretical false-alarm probabilities swept for the ROC.
    pub pfa: Vec<f64>,
    pub n_train: usize,
    pub n_guard: usize,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self { n_cpis: 50, pfa: vec![1e-2, 3e-3, 1e-3, 3e-4, 1e-4], n_train: 6, n_guard: 2 }
    }
}

impl DetectionConfig {
    pub fn cfar(&self, pfa: f64) -> CfarConfig {
        CfarConfig { n_train: self.n_train, n_guard: self.n_guard, pfa_theoretical: pfa }
    }

    /// The pfa nearest 1e-3, used for single-number PD summaries.
    pub fn reference_pfa(&self) -> f64 {
        let target: f64 = 1e-3;
        self.pfa
            .iter()
            .copied()
            .min_by(|a, b| {
                (a.log10() - target.log10())
                    .abs()
                    .total_cmp(&(b.log10() - target.log10()).abs())
            })
            .unwrap_or(target)
    }
}

/// Everything one experiment needs; (config, seed) fully determines every
/// output byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub scale: Scale,
    pub output_dir: PathBuf,
    pub env: EnvConfig,
    pub agent: AgentConfig,
    pub radar: RadarConfig,
    pub scene: Scene,
    pub detection: DetectionConfig,
    pub interference_train: SourceSpec,
    pub interference_eval: SourceSpec,
    /// Decisions in the sharing-report window.
    pub sharing_window: usize,
}

/// File form of [`ExperimentConfig`]: every section optional, with the
/// scale preset filling whatever the file leaves out.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    scale: Option<Scale>,
    output_dir: Option<PathBuf>,
    env: Option<EnvConfig>,
    agent: Option<AgentConfig>,
    radar: Option<RadarConfig>,
    scene: Option<Scene>,
    detection: Option<DetectionConfig>,
    interference_train: Option<SourceSpec>,
    interference_eval: Option<SourceSpec>,
    sharing_window: Option<usize>,
}

impl ExperimentConfig {
    /// Default TDD coexistence experiment: trained on a 3-on/2-off duty
    /// cycle in bands {1,2}, evaluated on a 2-on/3-off cycle.
    pub fn preset(scale: Scale, algorithm: Algorithm, seed: u64) -> Self {
        let radar = match scale {
            Scale::Desk => RadarConfig::desk_scale(),
            Scale::Full => RadarConfig::full_scale(),
        };
        let env = EnvConfig { cpi_pulses: radar.pulses_per_cpi, ..EnvConfig::default() };
        // The detection tail must fit inside the evaluation stream; the
        // full-scale CPI is ~16x longer, so score fewer of them by default.
        let detection = match scale {
            Scale::Desk => DetectionConfig::default(),
            Scale::Full => DetectionConfig { n_cpis: 20, ..DetectionConfig::default() },
        };
        Self {
            seed,
            scale,
            output_dir: PathBuf::from("out"),
            env,
            agent: AgentConfig::with_algorithm(algorithm),
            radar,
            scene: Scene::default(),
            detection,
            interference_train: SourceSpec::Tdd {
                bands: vec![1, 2],
                on_steps: 3,
                off_steps: 2,
                phase: 0,
            },
            interference_eval: SourceSpec::Tdd {
                bands: vec![1, 2],
                on_steps: 2,
                off_steps: 3,
                phase: 0,
            },
            sharing_window: 101,
        }
    }

    /// FDD variant of the preset: bands {1,2} while training, shifted to
    /// bands {0,1} for evaluation.
    pub fn preset_fdd(scale: Scale, algorithm: Algorithm, seed: u64) -> Self {
        Self {
            interference_train: SourceSpec::Fdd { bands: vec![1, 2] },
            interference_eval: SourceSpec::Fdd { bands: vec![0, 1] },
            ..Self::preset(scale, algorithm, seed)
        }
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::ConfigFile(format!("{}: {e}", path.display())))?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| HarnessError::ConfigFile(e.to_string()))?;
        Ok(Self::from_raw(raw))
    }

    fn from_raw(raw: RawConfig) -> Self {
        let scale = raw.scale.unwrap_or(Scale::Desk);
        let algorithm =
            raw.agent.as_ref().map(|a| a.algorithm).unwrap_or(Algorithm::Dqn);
        let mut cfg = Self::preset(scale, algorithm, raw.seed.unwrap_or(0));
        if let Some(v) = raw.output_dir {
            cfg.output_dir = v;
        }
        if let Some(v) = raw.env {
            cfg.env = v;
        }
        if let Some(v) = raw.agent {
            cfg.agent = v;
        }
        if let Some(v) = raw.radar {
            cfg.radar = v;
        }
        if let Some(v) = raw.scene {
            cfg.scene = v;
        }
        if let Some(v) = raw.detection {
            cfg.detection = v;
        }
        if let Some(v) = raw.interference_train {
            cfg.interference_train = v;
        }
        if let Some(v) = raw.interference_eval {
            cfg.interference_eval = v;
        }
        if let Some(v) = raw.sharing_window {
            cfg.sharing_window = v;
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.env.validate().map_err(HarnessError::Env)?;
        self.agent.validate().map_err(HarnessError::Agent)?;
        self.radar.validate().map_err(HarnessError::Dsp)?;
        self.scene.validate(&self.radar).map_err(HarnessError::Dsp)?;
        if self.radar.n_subbands != self.env.n_subbands {
            return Err(HarnessError::InvalidConfig(format!(
                "radar has {} sub-bands but the environment has {}",
                self.radar.n_subbands, self.env.n_subbands
            )));
        }
        if self.sharing_window == 0 {
            return Err(HarnessError::InvalidConfig("sharing_window must be >= 1".into()));
        }
        if self.detection.pfa.is_empty() {
            return Err(HarnessError::InvalidConfig("detection.pfa must be nonempty".into()));
        }
        for &pfa in &self.detection.pfa {
            if !(pfa > 0.0 && pfa < 1.0) {
                return Err(HarnessError::InvalidConfig(format!(
                    "pfa {pfa} outside (0, 1)"
                )));
            }
        }
        let eval_decisions = self.agent.online_epochs * self.agent.steps_per_epoch;
        let needed = self.detection.n_cpis * self.radar.pulses_per_cpi;
        if self.detection.n_cpis > 0 && eval_decisions < needed {
            return Err(HarnessError::InvalidConfig(format!(
                "evaluation stream ({eval_decisions} decisions) shorter than the \
                 detection pass ({needed})"
            )));
        }
        if eval_decisions < self.sharing_window {
            return Err(HarnessError::InvalidConfig(format!(
                "evaluation stream ({eval_decisions} decisions) shorter than the \
                 sharing window ({})",
                self.sharing_window
            )));
        }
        Ok(())
    }
}
