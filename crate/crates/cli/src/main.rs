//! Command-line front end for the mdsense spectrum-sensing toolkit:
//! analytic detector design, noise generation/fitting, and Monte-Carlo
//! ROC / Pd-vs-SNR sweeps with CSV output.
//!
//! Every CSV starts with a `#`-prefixed metadata header whose `# command:`
//! line holds the fully resolved invocation, so any output can be
//! regenerated byte-identically from its own header. Exit codes: 0 success,
//! 2 domain/validation error, 3 I/O or format error.

mod config;
mod iq;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mdsense::detector::{self, EdConfig, MdConfig};
use mdsense::mcleish::{self, FittedNoise};
use mdsense::simulator::{
    pd_vs_snr, roc_curve, ChannelSpec, CurvePoint, DetectorKind, Modulation, PulseShaping,
    Scenario, TrialBatch, TxSpec, UncertaintySpec,
};
use mdsense::{Hypothesis, McLeishParams, SignalModel};

use config::{merge, require, FileConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad parameter values or math-domain violations -> exit 2.
    Domain(String),
    /// File system or data format problems -> exit 3.
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<mdsense::Error> for CliError {
    fn from(e: mdsense::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "mdsense",
    version,
    about = "Blind moment-based spectrum sensing under McLeish noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the CFAR threshold and noise-only statistics for the
    /// moment-based detector.
    Threshold(ThresholdArgs),
    /// Closed-form Pf/Pd of both detectors over an SNR grid (CSV).
    Analytic(AnalyticArgs),
    /// Generate McLeish noise samples into an IQ file.
    GenNoise(GenNoiseArgs),
    /// Fit McLeish parameters to a recorded IQ file.
    FitNoise(FitNoiseArgs),
    /// Empirical ROC curve: Pd and companion Pf per false-alarm target (CSV).
    Roc(RocArgs),
    /// Empirical Pd over an SNR grid at a fixed false-alarm target (CSV).
    PdSnr(PdSnrArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModArg {
    Bpsk,
    Qam16,
}

impl ModArg {
    fn to_modulation(self) -> Modulation {
        match self {
            ModArg::Bpsk => Modulation::Bpsk,
            ModArg::Qam16 => Modulation::Qam16,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ModArg::Bpsk => "bpsk",
            ModArg::Qam16 => "qam16",
        }
    }
}

impl std::str::FromStr for ModArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bpsk" => Ok(ModArg::Bpsk),
            "qam16" => Ok(ModArg::Qam16),
            other => Err(format!("unknown modulation `{other}`")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DetectorArg {
    Md,
    Ed,
}

impl DetectorArg {
    fn to_kind(self) -> DetectorKind {
        match self {
            DetectorArg::Md => DetectorKind::Md,
            DetectorArg::Ed => DetectorKind::Ed,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            DetectorArg::Md => "md",
            DetectorArg::Ed => "ed",
        }
    }
}

impl std::str::FromStr for DetectorArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" => Ok(DetectorArg::Md),
            "ed" => Ok(DetectorArg::Ed),
            other => Err(format!("unknown detector `{other}`")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PulseArg {
    Flat,
    Srrc,
}

impl PulseArg {
    fn to_shaping(self) -> PulseShaping {
        match self {
            PulseArg::Flat => PulseShaping::Flat,
            PulseArg::Srrc => PulseShaping::default_srrc(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            PulseArg::Flat => "flat",
            PulseArg::Srrc => "srrc",
        }
    }
}

impl std::str::FromStr for PulseArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(PulseArg::Flat),
            "srrc" => Ok(PulseArg::Srrc),
            other => Err(format!("unknown pulse shaping `{other}`")),
        }
    }
}

#[derive(Args)]
struct ThresholdArgs {
    /// Non-Gaussianity parameter v.
    #[arg(long)]
    v: Option<f64>,
    /// False-alarm probability target in (0, 1).
    #[arg(long)]
    pf: Option<f64>,
    /// Samples per sensing decision (recorded; the threshold itself is
    /// N-free on the normalized statistic).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long)]
    v: Option<f64>,
    /// Total noise power sigma_w^2.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Modulation: bpsk or qam16.
    #[arg(long = "mod")]
    modulation: Option<ModArg>,
    /// Comma-separated SNR grid in dB (alternative to --sp).
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Peak amplitude s_p (alternative to --snr-db; implies one grid point).
    #[arg(long)]
    sp: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pf: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenNoiseArgs {
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    /// Number of complex samples.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write two-column `i,q` text instead of binary f32 pairs.
    #[arg(long)]
    text: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct FitNoiseArgs {
    /// Input IQ file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Read two-column `i,q` text instead of binary f32 pairs.
    #[arg(long)]
    text: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RocArgs {
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long = "mod")]
    modulation: Option<ModArg>,
    /// Scenario SNR in dB (single value; alternative to --sp).
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    sp: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated false-alarm targets forming the ROC grid.
    #[arg(long)]
    pf: Option<String>,
    #[arg(long)]
    detector: Option<DetectorArg>,
    /// Noise-uncertainty half range L in dB (energy detector only).
    #[arg(long = "uncertainty-db")]
    uncertainty_db: Option<f64>,
    #[arg(long)]
    pulse: Option<PulseArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PdSnrArgs {
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long = "mod")]
    modulation: Option<ModArg>,
    /// Comma-separated SNR grid in dB.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Fixed false-alarm target.
    #[arg(long)]
    pf: Option<f64>,
    #[arg(long)]
    detector: Option<DetectorArg>,
    #[arg(long = "uncertainty-db")]
    uncertainty_db: Option<f64>,
    #[arg(long)]
    pulse: Option<PulseArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Threshold(a) => cmd_threshold(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::GenNoise(a) => cmd_gen_noise(a),
        Command::FitNoise(a) => cmd_fit_noise(a),
        Command::Roc(a) => cmd_roc(a),
        Command::PdSnr(a) => cmd_pd_snr(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Domain(_) => ExitCode::from(2),
                CliError::Io(_) => ExitCode::from(3),
            }
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    }
}

fn parse_grid(raw: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let grid: Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match grid {
        Ok(g) if !g.is_empty() => Ok(g),
        _ => Err(CliError::Domain(format!(
            "--{what} expects a comma-separated list of numbers, got `{raw}`"
        ))),
    }
}

fn join_grid(grid: &[f64]) -> String {
    let mut s = String::new();
    for (i, x) in grid.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s
}

/// Writes a CSV document with its reproduction header to --out or stdout.
fn emit_csv(
    out: &Option<PathBuf>,
    command_line: &str,
    extra_meta: &[(&str, String)],
    columns: &str,
    rows: &[String],
) -> Result<(), CliError> {
    let mut doc = String::new();
    let _ = writeln!(doc, "# mdsense {}", mdsense::VERSION);
    let _ = writeln!(doc, "# command: {command_line}");
    for (k, v) in extra_meta {
        let _ = writeln!(doc, "# {k}: {v}");
    }
    let _ = writeln!(doc, "{columns}");
    for row in rows {
        let _ = writeln!(doc, "{row}");
    }
    match out {
        Some(path) => std::fs::write(path, doc)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn cmd_threshold(a: ThresholdArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let v = require(a.v, &cfg, "v")?;
    let pf_target = require(a.pf, &cfg, "pf")?;
    let n = merge(a.n, &cfg, "n")?;

    let lambda = detector::md_threshold(pf_target, v)?;
    let sigma = detector::sigma2_h0(v)?.sqrt();
    let t0 = detector::t_h0(v)?;
    println!("lambda_star = {lambda}");
    println!("sigma_h0 = {sigma}");
    println!("t_h0 = {t0}");
    if let Some(n) = n {
        println!("n = {n}");
    }
    Ok(())
}

fn cmd_analytic(a: AnalyticArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let v = require(a.v, &cfg, "v")?;
    let sigma2 = merge(a.sigma2, &cfg, "sigma2")?.unwrap_or(1.0);
    let modulation = require(a.modulation, &cfg, "mod")?;
    let n = require(a.n, &cfg, "n")?;
    let pf_target = require(a.pf, &cfg, "pf")?;
    let sp = merge(a.sp, &cfg, "sp")?;
    let snr_raw: Option<String> = merge(a.snr_db, &cfg, "snr-db")?;

    let noise = McLeishParams::new(sigma2, v)?;
    let snr_grid = match (&snr_raw, sp) {
        (Some(raw), None) => parse_grid(raw, "snr-db")?,
        (None, Some(sp)) => vec![10.0 * (sp * sp / sigma2).log10()],
        (None, None) => {
            return Err(CliError::Domain(
                "provide --snr-db or --sp for the analytic grid".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Domain(
                "--snr-db and --sp are mutually exclusive".into(),
            ))
        }
    };

    let mut rows = Vec::new();
    for &snr_db in &snr_grid {
        let amplitude = (10f64.powf(snr_db / 10.0) * sigma2).sqrt();
        let model = SignalModel::new(
            modulation.to_modulation().levels_per_dimension(),
            amplitude,
            1.0,
        )?;
        let md = MdConfig {
            noise,
            sample_count: n,
            pf_target,
        };
        let lambda_md = detector::md_threshold(pf_target, v)?;
        let md_pf = detector::pf(lambda_md, v)?;
        let md_pd = detector::md_pd(&md, &model)?;
        let ed = EdConfig {
            assumed_noise_power: sigma2,
            true_noise: noise,
            sample_count: n,
            pf_target,
        };
        let lambda_ed = detector::ed_threshold(&ed)?;
        let ed_pf = detector::ed_pf(lambda_ed, &ed)?;
        let ed_pd = detector::ed_pd(lambda_ed, &ed, &model)?;
        rows.push(format!(
            "{snr_db},{pf_target},{lambda_md},{md_pf},{md_pd},{lambda_ed},{ed_pf},{ed_pd}"
        ));
    }

    let command = format!(
        "analytic --v {v} --sigma2 {sigma2} --mod {} --snr-db {} --n {n} --pf {pf_target}",
        modulation.as_str(),
        join_grid(&snr_grid),
    );
    emit_csv(
        &a.out,
        &command,
        &[("n", n.to_string())],
        "snr_db,pf_target,md_threshold,md_pf,md_pd,ed_threshold,ed_pf,ed_pd",
        &rows,
    )
}

fn cmd_gen_noise(a: GenNoiseArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let v = require(a.v, &cfg, "v")?;
    let sigma2 = require(a.sigma2, &cfg, "sigma2")?;
    let n = require(a.n, &cfg, "n")?;
    let seed = merge(a.seed, &cfg, "seed")?.unwrap_or(0);
    let out: PathBuf = require(a.out, &cfg, "out")?;

    let noise = McLeishParams::new(sigma2, v)?;
    let buf = mcleish::sample_ccs(&noise, n, seed)?;
    if a.text {
        iq::write_text(&out, &buf)?;
    } else {
        iq::write_binary(&out, &buf)?;
    }
    eprintln!(
        "wrote {} samples (v = {v}, sigma2 = {sigma2}, seed = {seed}) to {}",
        buf.len(),
        out.display()
    );
    Ok(())
}

fn cmd_fit_noise(a: FitNoiseArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let input: PathBuf = require(a.input, &cfg, "in")?;
    let buf = if a.text {
        iq::read_text(&input)?
    } else {
        iq::read_binary(&input)?
    };
    match mcleish::fit_params(&buf)? {
        FittedNoise::McLeish(p) => {
            println!("variance = {}", p.variance());
            println!("v = {}", p.non_gaussianity());
        }
        FittedNoise::GaussianOrLighter { variance, kurtosis } => {
            println!("variance = {variance}");
            println!("v = inf (gaussian-or-lighter, kurtosis = {kurtosis})");
        }
    }
    Ok(())
}

struct SweepParams {
    v: f64,
    sigma2: f64,
    modulation: ModArg,
    n: usize,
    trials: usize,
    detector: DetectorArg,
    uncertainty_db: f64,
    pulse: PulseArg,
    seed: u64,
}

impl SweepParams {
    fn scenario(&self, amplitude: f64, pf_target: f64) -> Result<Scenario, CliError> {
        Ok(Scenario {
            tx: TxSpec {
                modulation: self.modulation.to_modulation(),
                amplitude,
                pulse_shaping: self.pulse.to_shaping(),
            },
            channel: ChannelSpec::default(),
            noise: McLeishParams::new(self.sigma2, self.v)?,
            uncertainty: UncertaintySpec {
                half_range_db: self.uncertainty_db,
            },
            pf_target,
        })
    }

    fn batch(&self) -> TrialBatch {
        TrialBatch {
            trials: self.trials,
            samples_per_trial: self.n,
            master_seed: self.seed,
            detector: self.detector.to_kind(),
            hypothesis: Hypothesis::H1,
        }
    }

    fn meta(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
        ]
    }
}

fn curve_rows(points: &[CurvePoint]) -> Vec<String> {
    points
        .iter()
        .map(|p| format!("{},{},{},{}", p.x, p.pd, p.pf_empirical, p.ci_halfwidth))
        .collect()
}

fn cmd_roc(a: RocArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let params = SweepParams {
        v: require(a.v, &cfg, "v")?,
        sigma2: merge(a.sigma2, &cfg, "sigma2")?.unwrap_or(1.0),
        modulation: require(a.modulation, &cfg, "mod")?,
        n: require(a.n, &cfg, "n")?,
        trials: merge(a.trials, &cfg, "trials")?.unwrap_or(10_000),
        detector: merge(a.detector, &cfg, "detector")?.unwrap_or(DetectorArg::Md),
        uncertainty_db: merge(a.uncertainty_db, &cfg, "uncertainty-db")?.unwrap_or(0.0),
        pulse: merge(a.pulse, &cfg, "pulse")?.unwrap_or(PulseArg::Flat),
        seed: merge(a.seed, &cfg, "seed")?.unwrap_or(0),
    };
    let snr_db = match (merge(a.snr_db, &cfg, "snr-db")?, merge(a.sp, &cfg, "sp")?) {
        (Some(snr), None) => snr,
        (None, Some(sp)) => 10.0 * (sp * sp / params.sigma2).log10(),
        (None, None) => {
            return Err(CliError::Domain(
                "provide the scenario SNR via --snr-db or --sp".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Domain(
                "--snr-db and --sp are mutually exclusive".into(),
            ))
        }
    };
    let pf_raw: String = require(a.pf, &cfg, "pf")?;
    let pf_grid = parse_grid(&pf_raw, "pf")?;

    let amplitude = (10f64.powf(snr_db / 10.0) * params.sigma2).sqrt();
    let scenario = params.scenario(amplitude, pf_grid[0])?;
    let points = roc_curve(&pf_grid, &params.batch(), &scenario)?;

    let command = format!(
        "roc --v {} --sigma2 {} --mod {} --snr-db {snr_db} --n {} --trials {} --pf {} \
         --detector {} --uncertainty-db {} --pulse {} --seed {}",
        params.v,
        params.sigma2,
        params.modulation.as_str(),
        params.n,
        params.trials,
        join_grid(&pf_grid),
        params.detector.as_str(),
        params.uncertainty_db,
        params.pulse.as_str(),
        params.seed,
    );
    emit_csv(
        &a.out,
        &command,
        &params.meta(),
        "x,pd,pf_empirical,ci_halfwidth",
        &curve_rows(&points),
    )
}

fn cmd_pd_snr(a: PdSnrArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let params = SweepParams {
        v: require(a.v, &cfg, "v")?,
        sigma2: merge(a.sigma2, &cfg, "sigma2")?.unwrap_or(1.0),
        modulation: require(a.modulation, &cfg, "mod")?,
        n: require(a.n, &cfg, "n")?,
        trials: merge(a.trials, &cfg, "trials")?.unwrap_or(10_000),
        detector: merge(a.detector, &cfg, "detector")?.unwrap_or(DetectorArg::Md),
        uncertainty_db: merge(a.uncertainty_db, &cfg, "uncertainty-db")?.unwrap_or(0.0),
        pulse: merge(a.pulse, &cfg, "pulse")?.unwrap_or(PulseArg::Flat),
        seed: merge(a.seed, &cfg, "seed")?.unwrap_or(0),
    };
    let snr_raw: String = require(a.snr_db, &cfg, "snr-db")?;
    let snr_grid = parse_grid(&snr_raw, "snr-db")?;
    let pf_target: f64 = require(a.pf, &cfg, "pf")?;

    // per-point amplitudes are set inside pd_vs_snr; this one only passes
    // scenario validation
    let scenario = params.scenario(1.0, pf_target)?;
    let points = pd_vs_snr(&snr_grid, &params.batch(), &scenario)?;

    let command = format!(
        "pd-snr --v {} --sigma2 {} --mod {} --snr-db {} --n {} --trials {} --pf {pf_target} \
         --detector {} --uncertainty-db {} --pulse {} --seed {}",
        params.v,
        params.sigma2,
        params.modulation.as_str(),
        join_grid(&snr_grid),
        params.n,
        params.trials,
        params.detector.as_str(),
        params.uncertainty_db,
        params.pulse.as_str(),
        params.seed,
    );
    emit_csv(
        &a.out,
        &command,
        &params.meta(),
        "x,pd,pf_empirical,ci_halfwidth",
        &curve_rows(&points),
    )
}
