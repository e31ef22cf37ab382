use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcomm::closeness::{Measure, PhaseVector, Regime};
use qcomm::error::{Error, Result};
use qcomm::hermitian::{HermitianMatrix, DEFAULT_DEGENERACY_TOL};
use qcomm::network_lab::{
    load_hamiltonian, load_partition, perturb, planted_hamiltonian, save_hamiltonian, toy_hamiltonian,
    write_closeness_csv, write_dendrogram, write_partition, PartitionRecord, PlantedSpec, ToyConfig, ToyVariant,
};
use qcomm::partitioning::{nmi, Partition};
use qcomm::pipeline::{detect, MeasureSpec};
use qcomm::sweep::phase_sweep;

/// `println!` that exits quietly when stdout has been closed by the reader.
macro_rules! say {
    ($($arg:tt)*) => {
        emit(format_args!($($arg)*))
    };
}

fn emit(args: std::fmt::Arguments) {
    use std::io::Write as _;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{args}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcomm", version, about = "Community detection in quantum networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect communities and write closeness, dendrogram and partition files.
    Partition(PartitionArgs),
    /// Print the NMI between two partition files.
    Compare { x: PathBuf, y: PathBuf },
    /// NMI of detected partitions as hopping phases are randomized.
    PhaseSweep(SweepArgs),
    /// Write a generated Hamiltonian (and planted partition) to disk.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// Six-node toy configuration (a..i).
    #[arg(long, group = "source")]
    pub toy: Option<String>,
    /// Seed for the random bridge phases of toys e and h.
    #[arg(long, default_value_t = 0)]
    pub toy_seed: u64,
    /// Hamiltonian JSON file.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Planted-partition spec, e.g. `n=60 k=4 deg=6 rewire=0.05 seed=7`.
    #[arg(long, group = "source", num_args = 1.., value_name = "KEY=VALUE")]
    pub planted: Option<Vec<String>>,
    /// Add a random Hermitian perturbation of this magnitude.
    #[arg(long)]
    pub perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub perturb_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeArg {
    Short,
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureArgs {
    /// transport, fidelity, fidelity-phase-avg, purity or purity-phase-avg.
    #[arg(long)]
    pub measure: String,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Averaging time for the finite regime.
    #[arg(long)]
    pub t: Option<f64>,
    /// Comma-separated initial-state phases (default all zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_DEGENERACY_TOL)]
    pub degeneracy_tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Comma-separated phase standard deviations.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sigmas: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ground-truth partition file (defaults to the planted partition).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// A failure tagged with the pipeline stage it came from.
#[derive(Debug)]
pub struct Failure {
    pub stage: &'static str,
    pub error: Error,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        if self.error.is_numerical() {
            2
        } else {
            1
        }
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure { stage, error })
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Partition(args) => cmd_partition(&args),
        Command::Compare { x, y } => cmd_compare(&x, &y),
        Command::PhaseSweep(args) => cmd_phase_sweep(&args),
        Command::Generate(args) => cmd_generate(&args),
    }
}

fn measure_spec(args: &MeasureArgs) -> Result<MeasureSpec> {
    let measure: Measure = args.measure.parse()?;
    let regime = match (args.regime, args.t) {
        (RegimeArg::Finite, Some(t)) => {
            qcomm::dynamics::Horizon::Finite(t).validate()?;
            Regime::Finite(t)
        }
        (RegimeArg::Finite, None) => return Err(Error::parse("--t", "the finite regime requires --t")),
        (_, Some(_)) => return Err(Error::parse("--t", "--t only applies to the finite regime")),
        (RegimeArg::Short, None) => Regime::Short,
        (RegimeArg::Infinite, None) => Regime::Infinite,
    };
    if args.degeneracy_tol.is_nan() || args.degeneracy_tol < 0.0 {
        return Err(Error::InvalidTolerance(args.degeneracy_tol));
    }
    let mut spec = MeasureSpec::new(measure, regime);
    spec.degeneracy_tol = args.degeneracy_tol;
    if let Some(p) = &args.phases {
        spec = spec.with_phases(PhaseVector::new(p.clone()));
    }
    Ok(spec)
}

fn parse_planted(tokens: &[String]) -> Result<PlantedSpec> {
    let mut spec = PlantedSpec {
        n: 60,
        n_communities: 4,
        mean_degree: 6.0,
        rewire_fraction: 0.05,
        seed: 0,
    };
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::parse("--planted", format!("expected KEY=VALUE, got `{token}`")))?;
        let bad = |e: &dyn std::fmt::Display| Error::parse("--planted", format!("{key}: {e}"));
        match key {
            "n" => spec.n = value.parse().map_err(|e| bad(&e))?,
            "k" => spec.n_communities = value.parse().map_err(|e| bad(&e))?,
            "deg" => spec.mean_degree = value.parse().map_err(|e| bad(&e))?,
            "rewire" => spec.rewire_fraction = value.parse().map_err(|e| bad(&e))?,
            "seed" => spec.seed = value.parse().map_err(|e| bad(&e))?,
            _ => {
                return Err(Error::parse(
                    "--planted",
                    format!("unknown key `{key}` (n, k, deg, rewire, seed)"),
                ))
            }
        }
    }
    Ok(spec)
}

struct Loaded {
    hamiltonian: HermitianMatrix,
    planted: Option<Partition>,
    seed: Option<u64>,
}

fn load_source(src: &SourceArgs) -> Result<Loaded> {
    let mut loaded = if let Some(v) = &src.toy {
        let variant: ToyVariant = v.parse()?;
        Loaded {
            hamiltonian: toy_hamiltonian(&ToyConfig::new(variant, src.toy_seed)),
            planted: None,
            seed: matches!(variant, ToyVariant::E | ToyVariant::H).then_some(src.toy_seed),
        }
    } else if let Some(path) = &src.input {
        Loaded {
            hamiltonian: load_hamiltonian(path)?,
            planted: None,
            seed: None,
        }
    } else if let Some(tokens) = &src.planted {
        let spec = parse_planted(tokens)?;
        let net = planted_hamiltonian(&spec)?;
        if !net.connected {
            eprintln!("note: planted graph is not connected");
        }
        Loaded {
            hamiltonian: net.hamiltonian,
            planted: Some(net.partition),
            seed: Some(spec.seed),
        }
    } else {
        return Err(Error::parse("input", "one of --toy, --input or --planted is required"));
    };
    if let Some(eps) = src.perturb {
        loaded.hamiltonian = perturb(&loaded.hamiltonian, eps, src.perturb_seed)?;
    }
    Ok(loaded)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn config_value<T: Serialize>(command: &str, args: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(args).unwrap_or(serde_json::Value::Null);
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("command".into(), command.into());
    }
    v
}

/// Flattens a JSON config into `key=value` pairs for CSV headers.
fn config_lines(config: &serde_json::Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, v, out);
                }
            }
            serde_json::Value::Null => {}
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", config, &mut out);
    out
}

fn cmd_partition(args: &PartitionArgs) -> CliResult {
    let spec = measure_spec(&args.measure).stage("config")?;
    let loaded = load_source(&args.source).stage("input")?;
    if let Some(p) = &spec.phases {
        if p.len() != loaded.hamiltonian.n() {
            return Err(Error::DimensionMismatch {
                expected: loaded.hamiltonian.n(),
                found: p.len(),
            })
            .stage("config");
        }
    }
    let det = detect(&loaded.hamiltonian, &spec).stage("detection")?;

    let config = config_value("partition", args);
    create_dir(&args.out).stage("output")?;
    write_closeness_csv(&det.closeness, &config_lines(&config), args.out.join("closeness.csv")).stage("output")?;
    write_dendrogram(&det.dendrogram, args.out.join("dendrogram.json")).stage("output")?;
    let record = PartitionRecord {
        labels: det.partition.labels().to_vec(),
        modularity: Some(det.modularity),
        measure: Some(spec.measure.name().into()),
        regime: Some(spec.regime.name().into()),
        seed: loaded.seed,
        config,
    };
    write_partition(&record, args.out.join("partition.json")).stage("output")?;

    let labels: Vec<String> = det.partition.labels().iter().map(|l| l.to_string()).collect();
    say!("communities: {}", det.partition.num_communities());
    say!("modularity: {:.6}", det.modularity);
    say!("labels: [{}]", labels.join(","));
    Ok(())
}

fn cmd_compare(x: &Path, y: &Path) -> CliResult {
    let px = load_partition(x).stage("input")?;
    let py = load_partition(y).stage("input")?;
    let v = nmi(&px, &py).stage("compare")?;
    say!("{v:.6}");
    Ok(())
}

fn cmd_phase_sweep(args: &SweepArgs) -> CliResult {
    let spec = measure_spec(&args.measure).stage("config")?;
    if let Some(&bad) = args.sigmas.iter().find(|s| s.is_nan() || **s < 0.0) {
        return Err(Error::NegativeSigma(bad)).stage("config");
    }
    if args.samples == 0 {
        return Err(Error::parse("--samples", "must be at least 1")).stage("config");
    }
    let loaded = load_source(&args.source).stage("input")?;
    let reference = match &args.reference {
        Some(path) => Some(load_partition(path).stage("input")?),
        None => loaded.planted.clone(),
    };
    let rows = phase_sweep(
        &loaded.hamiltonian,
        reference.as_ref(),
        &spec,
        &args.sigmas,
        args.samples,
        args.seed,
    )
    .stage("sweep")?;

    let config = config_value("phase-sweep", args);
    let mut out = String::new();
    for (k, v) in config_lines(&config) {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str("sigma,mean_nmi_vs_zero_phase,std_nmi_vs_zero_phase,mean_nmi_vs_planted,std_nmi_vs_planted\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.sigma,
            r.mean_nmi_vs_zero_phase,
            r.std_nmi_vs_zero_phase,
            opt(r.mean_nmi_vs_planted),
            opt(r.std_nmi_vs_planted)
        );
    }
    create_dir(&args.out).stage("output")?;
    let path = args.out.join("phase_sweep.csv");
    fs::write(&path, &out)
        .map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
        .stage("output")?;
    say!(
        "{}",
        out.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    );
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> CliResult {
    let loaded = load_source(&args.source).stage("input")?;
    create_dir(&args.out).stage("output")?;
    let h_path = args.out.join("hamiltonian.json");
    save_hamiltonian(&loaded.hamiltonian, &h_path).stage("output")?;
    say!("wrote {}", h_path.display());
    if let Some(p) = &loaded.planted {
        let mut record = PartitionRecord::new(p);
        record.seed = loaded.seed;
        record.config = config_value("generate", args);
        let p_path = args.out.join("planted_partition.json");
        write_partition(&record, &p_path).stage("output")?;
        say!("wrote {}", p_path.display());
    }
    match loaded.seed {
        Some(s) => say!("seed: {s}"),
        None => say!("seed: none"),
    }
    Ok(())
}
