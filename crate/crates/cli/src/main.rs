use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cotrace::harness::{run_sweep, write_summary_csv, write_summary_json, SweepSpec};
use cotrace::sensing::ingest_detection_stream;
use cotrace::{
    aggregate, resolve, Agent, AgentId, ConfigPatch, GridDims, MaskPolicy, Preset, ScenarioOutcome, SimConfig,
    Simulation, WorldState,
};

#[derive(Parser)]
#[command(name = "cotrace", version, about = "Camera/cell/wearable contact-tracing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario; writes ledger.jsonl and metrics.csv.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write every telemetry sample as JSON lines.
        #[arg(long)]
        telemetry_out: Option<PathBuf>,
    },
    /// Replicate over populations, seeds and mask scenarios; writes a summary table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Number of seeds starting at --seed, or an explicit comma list.
        #[arg(long, default_value = "20")]
        seeds: String,
        /// `both`, `all-masked`, `none-masked`, or a comma list.
        #[arg(long, default_value = "both")]
        scenarios: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Feed a detection stream through sensing and the orchestrator against a scripted world.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// Line-delimited detections.
        #[arg(long)]
        input: PathBuf,
        /// JSON array of agents (`id` and `position` required).
        #[arg(long)]
        world: PathBuf,
        /// JSON array of confirmed agent ids, added to the registry.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    preset: Option<Preset>,
    /// TOML file with any subset of the configuration fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[command(flatten)]
    fields: Fields,
}

/// One flag per configuration field.
#[derive(Args)]
struct Fields {
    #[arg(long, alias = "area_width")]
    area_width: Option<f64>,
    #[arg(long, alias = "area_height")]
    area_height: Option<f64>,
    /// A single value, or a comma list for `sweep`.
    #[arg(long, value_delimiter = ',')]
    population: Vec<usize>,
    #[arg(long, alias = "initial_confirmed")]
    initial_confirmed: Option<usize>,
    #[arg(long, alias = "initial_carriers")]
    initial_carriers: Option<usize>,
    #[arg(long, alias = "speed_min")]
    speed_min: Option<f64>,
    #[arg(long, alias = "speed_max")]
    speed_max: Option<f64>,
    #[arg(long)]
    tick: Option<u32>,
    #[arg(long)]
    horizon: Option<u32>,
    #[arg(long, alias = "proximity_threshold")]
    proximity_threshold: Option<f64>,
    #[arg(long, alias = "contact_duration")]
    contact_duration: Option<u32>,
    #[arg(long, alias = "infect_prob_mask")]
    infect_prob_mask: Option<f64>,
    #[arg(long, alias = "infect_prob_nomask")]
    infect_prob_nomask: Option<f64>,
    #[arg(long, alias = "mask_policy")]
    mask_policy: Option<MaskPolicy>,
    #[arg(long, alias = "symptom_threshold")]
    symptom_threshold: Option<f64>,
    #[arg(long, alias = "symptom_persistence")]
    symptom_persistence: Option<u32>,
    #[arg(long, alias = "ramp_duration")]
    ramp_duration: Option<u32>,
    #[arg(long, alias = "telemetry_noise")]
    telemetry_noise: Option<f64>,
    #[arg(long, alias = "distance_violation_threshold")]
    distance_violation_threshold: Option<f64>,
    #[arg(long, alias = "rng-seed", alias = "rng_seed")]
    seed: Option<u64>,
    #[arg(long, alias = "camera_grid")]
    camera_grid: Option<GridDims>,
    #[arg(long, alias = "cell_grid")]
    cell_grid: Option<GridDims>,
    #[arg(long, alias = "meters_per_pixel")]
    meters_per_pixel: Option<f64>,
    #[arg(long, alias = "miss_prob")]
    miss_prob: Option<f64>,
    #[arg(long, alias = "enforce_quarantine")]
    enforce_quarantine: Option<bool>,
    #[arg(long, alias = "global_symptom_watch")]
    global_symptom_watch: Option<bool>,
}

impl Fields {
    fn patch(&self, population: Option<usize>) -> ConfigPatch {
        ConfigPatch {
            preset: None,
            area_width: self.area_width,
            area_height: self.area_height,
            population,
            initial_confirmed: self.initial_confirmed,
            initial_carriers: self.initial_carriers,
            speed_min: self.speed_min,
            speed_max: self.speed_max,
            tick: self.tick,
            horizon: self.horizon,
            proximity_threshold: self.proximity_threshold,
            contact_duration: self.contact_duration,
            infect_prob_mask: self.infect_prob_mask,
            infect_prob_nomask: self.infect_prob_nomask,
            mask_policy: self.mask_policy,
            symptom_threshold: self.symptom_threshold,
            symptom_persistence: self.symptom_persistence,
            ramp_duration: self.ramp_duration,
            telemetry_noise: self.telemetry_noise,
            distance_violation_threshold: self.distance_violation_threshold,
            rng_seed: self.seed,
            camera_grid: self.camera_grid,
            cell_grid: self.cell_grid,
            meters_per_pixel: self.meters_per_pixel,
            miss_prob: self.miss_prob,
            enforce_quarantine: self.enforce_quarantine,
            global_symptom_watch: self.global_symptom_watch,
        }
    }
}

impl Common {
    fn config(&self, population: Option<usize>) -> Result<SimConfig> {
        self.config_with(self.fields.patch(population))
    }

    fn config_with(&self, overrides: ConfigPatch) -> Result<SimConfig> {
        let file = match &self.config {
            Some(path) => Some(ConfigPatch::from_file(path)?),
            None => None,
        };
        Ok(resolve(self.preset, file.as_ref(), &overrides)?)
    }

    fn single_config(&self) -> Result<SimConfig> {
        ensure!(
            self.fields.population.len() <= 1,
            "--population takes a single value here; use `sweep` for a list"
        );
        self.config(self.fields.population.first().copied())
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { common, telemetry_out } => run(&common, telemetry_out.as_deref()),
        Command::Sweep {
            common,
            seeds,
            scenarios,
            format,
            jobs,
        } => sweep(&common, &seeds, &scenarios, format, jobs),
        Command::Ingest {
            common,
            input,
            world,
            registry,
        } => ingest(&common, &input, &world, registry.as_deref()),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn write_outcome(dir: &Path, outcome: &ScenarioOutcome) -> Result<()> {
    let mut ledger = create(dir, "ledger.jsonl")?;
    outcome.ledger.write_jsonl(&mut ledger)?;
    ledger.flush()?;
    let mut metrics = create(dir, "metrics.csv")?;
    outcome.metrics.write_csv(&mut metrics)?;
    metrics.flush()?;
    Ok(())
}

fn run(common: &Common, telemetry_out: Option<&Path>) -> Result<()> {
    let config = common.single_config()?;
    prepare_out(&common.out)?;
    let mut sim = Simulation::new(config)?;
    if let Some(path) = telemetry_out {
        let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        sim.set_telemetry_sink(Box::new(BufWriter::new(file)));
    }
    let outcome = sim.run();
    write_outcome(&common.out, &outcome)?;
    let t = outcome.final_totals();
    eprintln!(
        "exposed_to_confirmed={} exposed_to_symptomatic={} infected_total={} notices={} quarantines={}",
        t.exposed_to_confirmed, t.exposed_to_symptomatic, t.infected_total, t.notices_sent, t.quarantines
    );
    Ok(())
}

fn parse_seeds(text: &str, base: u64) -> Result<Vec<u64>> {
    if text.contains(',') {
        return text
            .split(',')
            .map(|s| s.trim().parse().with_context(|| format!("bad seed `{s}`")))
            .collect();
    }
    let n: u64 = text
        .trim()
        .parse()
        .with_context(|| format!("bad seed count `{text}`"))?;
    Ok((base..base + n).collect())
}

fn parse_scenarios(text: &str) -> Result<Vec<MaskPolicy>> {
    if text == "both" {
        return Ok(vec![MaskPolicy::AllMasked, MaskPolicy::NoneMasked]);
    }
    text.split(',')
        .map(|s| s.trim().parse::<MaskPolicy>().map_err(|e| anyhow::anyhow!(e)))
        .collect()
}

fn sweep(common: &Common, seeds: &str, scenarios: &str, format: Format, jobs: usize) -> Result<()> {
    let base = common.config(None)?;
    let populations = if common.fields.population.is_empty() {
        vec![base.population]
    } else {
        common.fields.population.clone()
    };
    let spec = SweepSpec::population(
        populations,
        parse_seeds(seeds, base.rng_seed)?,
        parse_scenarios(scenarios)?,
    );
    spec.validate()?;
    prepare_out(&common.out)?;
    let results = run_sweep(&base, &spec, jobs)?;
    let rows = aggregate(&results);
    match format {
        Format::Csv => {
            let mut out = create(&common.out, "summary.csv")?;
            write_summary_csv(&rows, &mut out)?;
            out.flush()?;
        }
        Format::Json => {
            let mut out = create(&common.out, "summary.json")?;
            write_summary_json(&rows, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn ingest(common: &Common, input: &Path, world: &Path, registry: Option<&Path>) -> Result<()> {
    let agents: Vec<Agent> = serde_json::from_reader(BufReader::new(
        File::open(world).with_context(|| format!("cannot read {}", world.display()))?,
    ))
    .with_context(|| format!("{}: not a JSON array of agents", world.display()))?;
    // roles come from the world file and the registry, not from the preset
    let config = common.config_with(ConfigPatch {
        initial_confirmed: Some(0),
        initial_carriers: Some(0),
        ..common.fields.patch(Some(agents.len()))
    })?;
    let area = config.area();
    for a in &agents {
        if !area.contains_closed(a.position) {
            bail!(
                "agent {} at ({}, {}) lies outside the area",
                a.id,
                a.position.x,
                a.position.y
            );
        }
    }
    let mut state =
        WorldState::from_agents(area, agents, config.proximity_threshold).context("agent ids must be 0..n in order")?;
    if let Some(path) = registry {
        let ids: Vec<AgentId> =
            cotrace::HealthRegistry::load(path).with_context(|| format!("cannot read registry {}", path.display()))?;
        for id in ids {
            state.confirm(id)?;
        }
    }
    let mut sim = Simulation::with_world(config, state);
    let known: HashSet<String> = sim.cameras().iter().map(|c| c.camera_id.clone()).collect();
    let frames = ingest_detection_stream(
        BufReader::new(File::open(input).with_context(|| format!("cannot read {}", input.display()))?),
        Some(&known),
    )
    .with_context(|| format!("{}", input.display()))?;
    prepare_out(&common.out)?;
    sim.ingest(&frames);
    let outcome = sim.into_outcome();
    write_outcome(&common.out, &outcome)?;
    eprintln!(
        "frames={} violations={} scans={}",
        frames.len(),
        outcome.ledger.count("Violation"),
        outcome.ledger.count("AreaScan")
    );
    Ok(())
}
