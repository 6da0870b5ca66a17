//! Scenario configuration, built-in presets and layered overrides.
//!
//! Resolution order is preset, then config file, then command-line
//! overrides; each layer is a [`ConfigPatch`] applied on top of the previous
//! one, and the result is checked with [`SimConfig::validate`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::types::{Minute, Rect};

/// Whether every agent in the scenario wears a mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskPolicy {
    AllMasked,
    NoneMasked,
}

impl MaskPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            MaskPolicy::AllMasked => "all-masked",
            MaskPolicy::NoneMasked => "none-masked",
        }
    }
}

impl fmt::Display for MaskPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MaskPolicy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all-masked" => Ok(MaskPolicy::AllMasked),
            "none-masked" => Ok(MaskPolicy::NoneMasked),
            other => Err(ConfigError::Parse {
                field: "mask_policy",
                value: other.to_string(),
                reason: "expected `all-masked` or `none-masked`".into(),
            }),
        }
    }
}

/// `rows × cols` grid dimensions, written `4x4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridDims {
    pub rows: u32,
    pub cols: u32,
}

impl GridDims {
    pub const fn new(rows: u32, cols: u32) -> Self {
        Self { rows, cols }
    }

    pub fn count(self) -> usize {
        (self.rows * self.cols) as usize
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for GridDims {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ConfigError::Parse {
            field: "grid",
            value: s.to_string(),
            reason: reason.to_string(),
        };
        let (r, c) = s.split_once(['x', 'X', '×']).ok_or_else(|| bad("expected ROWSxCOLS"))?;
        let rows = r.trim().parse().map_err(|_| bad("rows is not an integer"))?;
        let cols = c.trim().parse().map_err(|_| bad("cols is not an integer"))?;
        Ok(GridDims { rows, cols })
    }
}

impl TryFrom<String> for GridDims {
    type Error = ConfigError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GridDims> for String {
    fn from(g: GridDims) -> String {
        g.to_string()
    }
}

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Values from the narrative evaluation: 2000 m square, 500 minutes,
    /// speeds up to 20 m/min, 3 m proximity.
    #[default]
    PaperText,
    /// Values from the simulation parameter table: 1000 m square, 300
    /// minutes, speeds 1..10 m/min, 5 m proximity, 10 minute contacts.
    PaperTable,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::PaperText => "paper-text",
            Preset::PaperTable => "paper-table",
        }
    }

    pub fn config(self) -> SimConfig {
        match self {
            Preset::PaperText => SimConfig {
                area_width: 2000.0,
                area_height: 2000.0,
                population: 500,
                initial_confirmed: 50,
                initial_carriers: 10,
                speed_min: 0.01,
                speed_max: 20.0,
                tick: 1,
                horizon: 500,
                proximity_threshold: 3.0,
                contact_duration: 1,
                infect_prob_mask: 0.3,
                infect_prob_nomask: 0.6,
                mask_policy: MaskPolicy::NoneMasked,
                symptom_threshold: 0.9,
                symptom_persistence: 60,
                ramp_duration: 120,
                telemetry_noise: 0.05,
                distance_violation_threshold: 3.0,
                rng_seed: 1,
                camera_grid: GridDims::new(4, 4),
                cell_grid: GridDims::new(2, 2),
                meters_per_pixel: 0.05,
                miss_prob: 0.0,
                enforce_quarantine: false,
                global_symptom_watch: false,
            },
            Preset::PaperTable => SimConfig {
                area_width: 1000.0,
                area_height: 1000.0,
                population: 150,
                initial_confirmed: 50,
                initial_carriers: 10,
                speed_min: 1.0,
                speed_max: 10.0,
                tick: 1,
                horizon: 300,
                proximity_threshold: 5.0,
                contact_duration: 10,
                infect_prob_mask: 0.3,
                infect_prob_nomask: 0.6,
                mask_policy: MaskPolicy::NoneMasked,
                symptom_threshold: 0.9,
                symptom_persistence: 60,
                ramp_duration: 120,
                telemetry_noise: 0.05,
                distance_violation_threshold: 5.0,
                rng_seed: 1,
                camera_grid: GridDims::new(4, 4),
                cell_grid: GridDims::new(2, 2),
                meters_per_pixel: 0.05,
                miss_prob: 0.0,
                enforce_quarantine: true,
                global_symptom_watch: false,
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-text" => Ok(Preset::PaperText),
            "paper-table" => Ok(Preset::PaperTable),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }
}

/// Complete parameter set for one scenario run.
///
/// Distances are meters, speeds meters per minute, durations minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub area_width: f64,
    pub area_height: f64,
    pub population: usize,
    pub initial_confirmed: usize,
    /// Unregistered infected agents whose symptom ramp starts at t = 0.
    pub initial_carriers: usize,
    pub speed_min: f64,
    pub speed_max: f64,
    pub tick: Minute,
    pub horizon: Minute,
    pub proximity_threshold: f64,
    pub contact_duration: Minute,
    pub infect_prob_mask: f64,
    pub infect_prob_nomask: f64,
    pub mask_policy: MaskPolicy,
    pub symptom_threshold: f64,
    pub symptom_persistence: Minute,
    /// Minutes from infection until the symptom level reaches 1.
    pub ramp_duration: Minute,
    /// Half-width of the uniform per-vital wearable noise.
    pub telemetry_noise: f64,
    pub distance_violation_threshold: f64,
    pub rng_seed: u64,
    pub camera_grid: GridDims,
    pub cell_grid: GridDims,
    pub meters_per_pixel: f64,
    /// Probability that the synthetic detector misses a person.
    pub miss_prob: f64,
    /// When false, quarantine orders are issued but the agent keeps moving
    /// and transmitting.
    pub enforce_quarantine: bool,
    /// Dispatch self-isolation notices whenever a wearable flag rises,
    /// independent of camera violations.
    pub global_symptom_watch: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Preset::default().config()
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(ConfigError::Invariant(msg()))
    }
}

fn is_prob(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

impl SimConfig {
    pub fn preset(preset: Preset) -> Self {
        preset.config()
    }

    pub fn area(&self) -> Rect {
        Rect::new(0.0, 0.0, self.area_width, self.area_height)
    }

    /// Number of ticks covering the horizon.
    pub fn ticks(&self) -> u32 {
        self.horizon / self.tick
    }

    pub fn infect_prob(&self, masked: bool) -> f64 {
        if masked {
            self.infect_prob_mask
        } else {
            self.infect_prob_nomask
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check(self.area_width.is_finite() && self.area_width > 0.0, || {
            format!("area_width must be > 0 (got {})", self.area_width)
        })?;
        check(self.area_height.is_finite() && self.area_height > 0.0, || {
            format!("area_height must be > 0 (got {})", self.area_height)
        })?;
        check(self.speed_min > 0.0, || {
            format!("speed_min must be > 0 (got {})", self.speed_min)
        })?;
        check(self.speed_max.is_finite() && self.speed_min <= self.speed_max, || {
            format!(
                "speed_min <= speed_max violated ({} > {})",
                self.speed_min, self.speed_max
            )
        })?;
        check(self.tick > 0, || "tick must be > 0".into())?;
        check(self.horizon.is_multiple_of(self.tick), || {
            format!("horizon ({}) must be a multiple of tick ({})", self.horizon, self.tick)
        })?;
        check(
            is_prob(self.infect_prob_mask) && is_prob(self.infect_prob_nomask),
            || "infection probabilities must lie in [0, 1]".into(),
        )?;
        check(self.infect_prob_mask <= self.infect_prob_nomask, || {
            format!(
                "infect_prob_mask <= infect_prob_nomask violated ({} > {})",
                self.infect_prob_mask, self.infect_prob_nomask
            )
        })?;
        check(
            self.initial_confirmed + self.initial_carriers <= self.population,
            || {
                format!(
                    "initial_confirmed + initial_carriers <= population violated ({} + {} > {})",
                    self.initial_confirmed, self.initial_carriers, self.population
                )
            },
        )?;
        check(u32::try_from(self.population).is_ok(), || {
            "population does not fit agent ids".into()
        })?;
        check(self.proximity_threshold >= 0.0, || {
            "proximity_threshold must be >= 0".into()
        })?;
        check(self.contact_duration > 0, || "contact_duration must be > 0".into())?;
        check(is_prob(self.symptom_threshold), || {
            "symptom_threshold must lie in [0, 1]".into()
        })?;
        check(self.symptom_persistence > 0, || {
            "symptom_persistence must be > 0".into()
        })?;
        check(self.ramp_duration > 0, || "ramp_duration must be > 0".into())?;
        check((0.0..=0.5).contains(&self.telemetry_noise), || {
            "telemetry_noise must lie in [0, 0.5]".into()
        })?;
        check(self.distance_violation_threshold > 0.0, || {
            "distance_violation_threshold must be > 0".into()
        })?;
        check(self.camera_grid.count() > 0 && self.cell_grid.count() > 0, || {
            "camera_grid and cell_grid need at least one tile".into()
        })?;
        check(self.meters_per_pixel > 0.0, || "meters_per_pixel must be > 0".into())?;
        check(is_prob(self.miss_prob), || "miss_prob must lie in [0, 1]".into())?;
        Ok(())
    }
}

/// A partial [`SimConfig`]: every field optional. Used for config files and
/// command-line overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    pub preset: Option<Preset>,
    pub area_width: Option<f64>,
    pub area_height: Option<f64>,
    pub population: Option<usize>,
    pub initial_confirmed: Option<usize>,
    pub initial_carriers: Option<usize>,
    pub speed_min: Option<f64>,
    pub speed_max: Option<f64>,
    pub tick: Option<Minute>,
    pub horizon: Option<Minute>,
    pub proximity_threshold: Option<f64>,
    pub contact_duration: Option<Minute>,
    pub infect_prob_mask: Option<f64>,
    pub infect_prob_nomask: Option<f64>,
    pub mask_policy: Option<MaskPolicy>,
    pub symptom_threshold: Option<f64>,
    pub symptom_persistence: Option<Minute>,
    pub ramp_duration: Option<Minute>,
    pub telemetry_noise: Option<f64>,
    pub distance_violation_threshold: Option<f64>,
    pub rng_seed: Option<u64>,
    pub camera_grid: Option<GridDims>,
    pub cell_grid: Option<GridDims>,
    pub meters_per_pixel: Option<f64>,
    pub miss_prob: Option<f64>,
    pub enforce_quarantine: Option<bool>,
    pub global_symptom_watch: Option<bool>,
}

macro_rules! apply_fields {
    ($patch:expr, $cfg:expr, $($field:ident),* $(,)?) => {
        $( if let Some(v) = $patch.$field { $cfg.$field = v; } )*
    };
}

impl ConfigPatch {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::File(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Overwrites every field that is set in `self`. The `preset` key is
    /// ignored here; see [`resolve`].
    pub fn apply(&self, cfg: &mut SimConfig) {
        apply_fields!(
            self,
            cfg,
            area_width,
            area_height,
            population,
            initial_confirmed,
            initial_carriers,
            speed_min,
            speed_max,
            tick,
            horizon,
            proximity_threshold,
            contact_duration,
            infect_prob_mask,
            infect_prob_nomask,
            mask_policy,
            symptom_threshold,
            symptom_persistence,
            ramp_duration,
            telemetry_noise,
            distance_violation_threshold,
            rng_seed,
            camera_grid,
            cell_grid,
            meters_per_pixel,
            miss_prob,
            enforce_quarantine,
            global_symptom_watch,
        );
    }
}

/// Layers `preset → file → overrides`. The preset named on the command line
/// wins over one named in the file; with neither, `paper-text` is used.
pub fn resolve(
    cli_preset: Option<Preset>,
    file: Option<&ConfigPatch>,
    overrides: &ConfigPatch,
) -> Result<SimConfig, ConfigError> {
    let preset = cli_preset
        .or(overrides.preset)
        .or(file.and_then(|f| f.preset))
        .unwrap_or_default();
    let mut cfg = preset.config();
    if let Some(f) = file {
        f.apply(&mut cfg);
    }
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
#[allow(clippy::field_reassign_with_default)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        Preset::PaperText.config().validate().unwrap();
        Preset::PaperTable.config().validate().unwrap();
    }

    #[test]
    fn table_preset_values() {
        let c = Preset::PaperTable.config();
        assert_eq!(c.horizon, 300);
        assert_eq!(c.initial_confirmed, 50);
        assert_eq!((c.area_width, c.area_height), (1000.0, 1000.0));
        assert_eq!((c.speed_min, c.speed_max), (1.0, 10.0));
        assert_eq!(c.proximity_threshold, 5.0);
        assert_eq!((c.infect_prob_mask, c.infect_prob_nomask), (0.3, 0.6));
        assert_eq!(c.contact_duration, 10);
        assert_eq!(c.symptom_persistence, 60);
        assert_eq!(c.symptom_threshold, 0.9);
    }

    #[test]
    fn text_preset_is_default() {
        let c = SimConfig::default();
        assert_eq!(c.horizon, 500);
        assert_eq!((c.area_width, c.area_height), (2000.0, 2000.0));
        assert_eq!(c.speed_max, 20.0);
        assert_eq!(c.proximity_threshold, 3.0);
        assert_eq!(c.initial_confirmed, 50);
    }

    #[test]
    fn validation_names_the_broken_invariant() {
        let mut c = SimConfig::default();
        c.speed_min = 5.0;
        c.speed_max = 1.0;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("speed_min <= speed_max"), "{err}");

        let mut c = SimConfig::default();
        c.infect_prob_mask = 0.7;
        assert!(c
            .validate()
            .unwrap_err()
            .to_string()
            .contains("infect_prob_mask <= infect_prob_nomask"));

        let mut c = SimConfig::default();
        c.population = 55;
        assert!(c.validate().unwrap_err().to_string().contains("population"));

        let mut c = SimConfig::default();
        c.tick = 3;
        assert!(c.validate().unwrap_err().to_string().contains("multiple of tick"));

        let mut c = SimConfig::default();
        c.speed_min = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn horizon_zero_is_allowed() {
        let mut c = SimConfig::default();
        c.horizon = 0;
        c.validate().unwrap();
        assert_eq!(c.ticks(), 0);
    }

    #[test]
    fn layering_precedence() {
        let file = ConfigPatch::from_toml_str(
            r#"
            preset = "paper-table"
            population = 300
            horizon = 100
            camera_grid = "2x3"
            "#,
        )
        .unwrap();
        let cli = ConfigPatch {
            horizon: Some(50),
            ..Default::default()
        };
        let cfg = resolve(None, Some(&file), &cli).unwrap();
        assert_eq!(cfg.area_width, 1000.0);
        assert_eq!(cfg.population, 300);
        assert_eq!(cfg.horizon, 50);
        assert_eq!(cfg.camera_grid, GridDims::new(2, 3));

        let cfg = resolve(Some(Preset::PaperText), Some(&file), &cli).unwrap();
        assert_eq!(cfg.area_width, 2000.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ConfigPatch::from_toml_str("populaton = 3").is_err());
    }

    #[test]
    fn full_config_round_trips_through_toml() {
        let c = SimConfig::default();
        let text = toml::to_string(&c).unwrap();
        let back: SimConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn grid_dims_parse() {
        assert_eq!("4x4".parse::<GridDims>().unwrap(), GridDims::new(4, 4));
        assert_eq!("2×3".parse::<GridDims>().unwrap(), GridDims::new(2, 3));
        assert!("4".parse::<GridDims>().is_err());
        assert!("axb".parse::<GridDims>().is_err());
    }
}
