use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kipp::analysis::{analyze, canonical, render_canonical, render_text};
use kipp::format::{FormatError, MatrixDocument};
use kipp::kipp_core::kipp::DetectOptions;
use kipp::kipp_core::linalg::ComplexMatrix;
use kipp::kipp_core::pisom::project_to_partial_isometry;
use kipp::output::{curve_csv, render_svg_detected, DEFAULT_RENDER_STEPS, DEFAULT_TRACE_STEPS, MIN_STEPS};
use kipp::golden::{reproduce_with, GoldenDocs};
use kipp::verify;

/// Kippenhahn curves and numerical ranges of partial isometries.
#[derive(Parser)]
#[command(name = "kipp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Matrix document (JSON).
    input: PathBuf,
    /// Project onto the nearest partial isometry first (for rounded data).
    #[arg(long)]
    project: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, defect, canonical parameters, circles, disk question, numerical radius.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the curve as CSV (theta,branch,lambda,re,im).
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_TRACE_STEPS, value_parser = parse_steps)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the curve and its detected circles as SVG.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_RENDER_STEPS, value_parser = parse_steps)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded theorem checks; exits 1 if a non-exploratory check fails.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Run a single check (see --list).
        #[arg(long)]
        theorem: Option<String>,
        /// List check ids and exit.
        #[arg(long)]
        list: bool,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the worked examples and figure configurations with their published values.
    PaperExamples {
        /// Read example{1,2,3}.json and figure{1,2,3}.json from here instead of the bundled copies.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical parameters of a rank-three partial isometry.
    Canon {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
}

fn parse_steps(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{}", e))?;
    if n < MIN_STEPS {
        return Err(format!("need at least {} steps", MIN_STEPS));
    }
    Ok(n)
}

enum Failure {
    Check,
    Write(String),
    Parse(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check | Failure::Write(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Validation(_) => 3,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Parse(e.to_string())
    }
}

fn load(input: &Input) -> Result<(MatrixDocument, ComplexMatrix), Failure> {
    let doc = MatrixDocument::load(&input.input)?;
    let m = doc.to_matrix()?;
    Ok((doc, m))
}

/// The input matrix, projected when asked.
fn prepared(input: &Input) -> Result<ComplexMatrix, Failure> {
    let (_, m) = load(input)?;
    if input.project {
        project_to_partial_isometry(&m).map_err(|e| Failure::Validation(format!("projection failed: {}", e)))
    } else {
        Ok(m)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Write(format!("{}: {}", path.display(), e)))
}

fn print(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Write(format!("stdout: {}", e)))
}

/// Writes to `out` if given, otherwise to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, text),
        None => print(text),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, json, out } => {
            let (doc, m) = load(&input)?;
            let r = analyze(&m, input.project, doc.label.clone()).map_err(|e| Failure::Validation(e.to_string()))?;
            let js = to_json(&r);
            if let Some(p) = &out {
                write_file(p, &js)?;
            }
            print(&if json { js } else { render_text(&r) })
        }
        Command::Trace { input, steps, out } => {
            let a = prepared(&input)?;
            emit(out.as_deref(), &curve_csv(&a, steps))
        }
        Command::Render { input, steps, out } => {
            let a = prepared(&input)?;
            let opts = if input.project {
                DetectOptions::rounded_input()
            } else {
                DetectOptions::default()
            };
            emit(out.as_deref(), &render_svg_detected(&a, steps, &opts))
        }
        Command::Fuzz {
            seed,
            trials,
            theorem,
            list,
            json,
            out,
        } => {
            if list {
                return print(&(verify::theorem_ids().join("\n") + "\n"));
            }
            let trials = trials as usize;
            let reports = match theorem {
                Some(id) => vec![verify::run_theorem(&id, seed, trials).ok_or_else(|| {
                    Failure::Parse(format!(
                        "unknown check {:?}; known: {}",
                        id,
                        verify::theorem_ids().join(", ")
                    ))
                })?],
                None => verify::run_suite(seed, trials),
            };
            let js = verify::suite_json(&reports);
            if let Some(p) = &out {
                write_file(p, &js)?;
            }
            print(&if json { js } else { verify::suite_table(&reports) })?;
            if verify::suite_passed(&reports) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::PaperExamples { data_dir, json, out } => {
            let docs = GoldenDocs::load(data_dir.as_deref())?;
            let report = reproduce_with(&docs);
            let js = to_json(&report);
            if let Some(p) = &out {
                write_file(p, &js)?;
            }
            print(&if json { js } else { report.table() })?;
            if report.all_pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Canon { input, json } => {
            let (_, m) = load(&input)?;
            let c = canonical(&m, input.project).map_err(|e| Failure::Validation(e.to_string()))?;
            print(&if json { to_json(&c) } else { render_canonical(&c) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check => {}
                Failure::Write(m) | Failure::Parse(m) | Failure::Validation(m) => eprintln!("kipp: {}", m),
            }
            ExitCode::from(f.code())
        }
    }
}
