use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use riesz::gdr::{auto_window, characterize, drazin_window_inverse, uniqueness_analysis, CharacterizationReport, SpectralWindow};
use riesz::io::{certificate_json, element_json, parse_element_text, plot_csv, spectral_set_json};
use riesz::{spectra, suite, AlgebraElement, Config, Error};

const EXIT_PARSE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_NOT_GDR: u8 = 4;
const EXIT_SUITE: u8 = 5;

#[derive(Parser)]
#[command(name = "riesz", version, about = "Generalized Drazin-Riesz inverses on block and diagonal algebra models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, essential, Browder, Riesz-point and Drazin-Riesz spectra of an element.
    Spectrum {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Characterization, windowed inverse and uniqueness analysis of an element.
    Gdr {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Window index n; chosen automatically when absent.
        #[arg(long)]
        window: Option<usize>,
        /// Write the characterization report and exit 0 even when the element is not invertible.
        #[arg(long)]
        report_only: bool,
    },
    /// Seeded property suite with one entry per theorem.
    Verify {
        /// Output directory.
        #[arg(long, default_value = "riesz-out")]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per theorem.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
}

#[derive(Args)]
struct IoArgs {
    /// Element file: JSON, or Matrix Market for a single block.
    #[arg(long)]
    input: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "riesz-out")]
    out: PathBuf,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    tol: f64,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    tol_zero: f64,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    cluster_radius: f64,
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    clearance: f64,
    /// Starting contour quadrature nodes.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(4..))]
    nodes: u64,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive tolerance")),
        Err(e) => Err(e.to_string()),
    }
}

impl TolArgs {
    fn config(&self) -> Config {
        let nodes = self.nodes as usize;
        let base = Config::default();
        Config {
            tol: self.tol,
            tol_zero: self.tol_zero,
            cluster_radius: self.cluster_radius,
            clearance: self.clearance,
            nodes,
            max_nodes: base.max_nodes.max(nodes),
            ..base
        }
    }
}

/// A command failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { EXIT_PARSE } else { EXIT_NUMERIC };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_NUMERIC, message: format!("{}: {e}", path.display()) }
}

/// Collects written artifacts so their paths can be printed once the command finishes.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        Ok(Outputs { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| io_failure(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<(), Failure> {
        let mut body = serde_json::to_string_pretty(v).expect("values serialize");
        body.push('\n');
        self.text(name, &body)
    }

    fn print(&self) {
        for p in &self.written {
            println!("{}", p.display());
        }
    }
}

fn read_element(path: &Path) -> Result<AlgebraElement, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) })?;
    Ok(parse_element_text(&text)?)
}

fn spectrum(io: &IoArgs, cfg: &Config) -> Result<Outputs, Failure> {
    let a = read_element(&io.input)?;
    let sets = [
        ("sigma", spectra::spectrum(&a, cfg)),
        ("sigma_e", spectra::essential_spectrum(&a, cfg)),
        ("sigma_b", spectra::browder_spectrum(&a, cfg)),
        ("p00", spectra::riesz_points(&a, cfg)),
        ("sigma_dr", spectra::gdr_spectrum(&a, cfg)),
    ];
    let mut out = Outputs::new(&io.out)?;
    let body: serde_json::Map<String, Value> = sets.iter().map(|(k, s)| (k.to_string(), spectral_set_json(s))).collect();
    out.json("spectra.json", &Value::Object(body))?;
    let labelled: Vec<(&str, &spectra::SpectralSet)> = sets.iter().map(|(k, s)| (*k, s)).collect();
    out.text("spectra.csv", &plot_csv(&labelled))?;
    Ok(out)
}

fn characterization_json(rep: &CharacterizationReport) -> Value {
    json!({
        "gdr": rep.gdr(),
        "consistent": rep.consistent(),
        "conditions": rep.conditions,
        "failing_condition": rep.failing_condition(),
        "window_n": rep.window_n,
    })
}

fn gdr(io: &IoArgs, cfg: &Config, window: Option<usize>, report_only: bool) -> Result<Outputs, Failure> {
    let a = read_element(&io.input)?;
    let rep = characterize(&a, cfg)?;
    let mut out = Outputs::new(&io.out)?;
    out.json("characterization.json", &characterization_json(&rep))?;
    if !rep.gdr() {
        // Every condition is false here; report the first one.
        let failing = rep.conditions.iter().position(|c| !c).map_or(1, |i| i + 1);
        let message = format!("element is not generalized Drazin-Riesz invertible: condition ({failing}) fails");
        if report_only {
            eprintln!("{message}");
            return Ok(out);
        }
        out.print();
        return Err(Failure { code: EXIT_NOT_GDR, message });
    }
    let w = match window {
        Some(n) => SpectralWindow::at(&a, n, cfg)?,
        None => auto_window(&a, cfg)?,
    };
    let cert = drazin_window_inverse(&a, &w, None, cfg)?;
    out.json("certificate.json", &certificate_json(&cert))?;
    out.json("inverse.json", &element_json(&cert.inverse))?;
    let uniqueness = match uniqueness_analysis(&a, cfg) {
        Ok(u) => json!({
            "unique": u.unique,
            "witnesses": u.witnesses.len(),
            "difference": u.difference,
            "drazin_distance": u.drazin_distance,
        }),
        Err(e) => json!({ "unique": null, "reason": e.to_string() }),
    };
    out.json("uniqueness.json", &uniqueness)?;
    if !cert.valid {
        eprintln!("warning: certificate residuals exceed the tolerances");
    }
    Ok(out)
}

fn verify(dir: &Path, cfg: &Config, seed: u64, trials: usize) -> Result<Outputs, Failure> {
    let report = suite::run_suite(seed, trials, cfg);
    for w in &report.config_warnings {
        eprintln!("warning: {w}");
    }
    let mut out = Outputs::new(dir)?;
    out.json("verify.json", &serde_json::to_value(&report).expect("report serializes"))?;
    if !report.passed {
        for t in report.theorems.iter().filter(|t| !t.passed) {
            for f in &t.failures {
                eprintln!("{} trial {} (seed {}): {}", t.tag, f.trial, f.seed, f.detail);
            }
        }
        out.print();
        return Err(Failure { code: EXIT_SUITE, message: "property suite failed".into() });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum { io, tol } => spectrum(io, &tol.config()),
        Command::Gdr { io, tol, window, report_only } => gdr(io, &tol.config(), *window, *report_only),
        Command::Verify { out, tol, seed, trials } => verify(out, &tol.config(), *seed, *trials as usize),
    };
    match result {
        Ok(out) => {
            out.print();
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
