use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::Value;

use qmapk::cmdeg::{default_samples, PencilInput};
use qmapk::dvrred::{FamilyInput, DEFAULT_MAX_ITERS};
use qmapk::elliptic::ModelInput;
use qmapk::field::{parse_rat, rat_to_f64, rat_to_string};
use qmapk::qmap::{are_isomorphic, degenerate_at, rescale, QuasimapInput};
use qmapk::{Quasimap, RationalPoint};

/// K-stability calculus for quasimaps from the projective line.
#[derive(Parser, Debug)]
#[command(name = "qmapk", version)]
struct Cli {
    /// Output format; `pretty` indents and appends decimal approximations to fractions
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a quasimap (NotFano/Unstable/Semistable/Polystable/Stable)
    Classify { file: Option<PathBuf> },
    /// Compute the delta invariant of a quasimap
    Delta { file: Option<PathBuf> },
    /// Degenerate a quasimap towards a rational point
    Degenerate {
        file: Option<PathBuf>,
        /// Affine coordinate `a/b`, or `inf`
        #[arg(long)]
        point: String,
    },
    /// Semistable reduction of a family over k[[t]]
    ReduceDvr { file: Option<PathBuf> },
    /// CM degree and nefness probe of a pencil over P^1
    CmDegree {
        file: Option<PathBuf>,
        /// Number of base points at which fibers are classified
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Weierstrass elliptic surfaces
    Elliptic {
        #[command(subcommand)]
        command: EllipticCommand,
    },
    /// Veronese rescaling by degree l
    Rescale {
        file: Option<PathBuf>,
        #[arg(long)]
        l: u32,
    },
    /// Decide whether two quasimaps differ by a rational Moebius map
    Isom { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
enum EllipticCommand {
    /// Kodaira profile, discriminant divisor, moduli degree, adiabatic verdict
    Analyze { file: Option<PathBuf> },
}

enum Failure {
    Malformed(anyhow::Error),
    Domain(qmapk::Error),
}

impl From<qmapk::Error> for Failure {
    fn from(e: qmapk::Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_source(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut buf = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            buf = std::fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))
                .map_err(Failure::Malformed)?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")
                .map_err(Failure::Malformed)?;
        }
    }
    Ok(buf)
}

fn parse_input<T: DeserializeOwned>(path: Option<&PathBuf>) -> Result<T, Failure> {
    let text = read_source(path)?;
    serde_json::from_str(&text)
        .context("malformed input")
        .map_err(Failure::Malformed)
}

fn quasimap(path: Option<&PathBuf>) -> Result<Quasimap, Failure> {
    Ok(parse_input::<QuasimapInput>(path)?.build()?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn max_iters() -> Result<usize, Failure> {
    match std::env::var("QMAPK_MAX_ITERS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Malformed(anyhow!("QMAPK_MAX_ITERS must be a natural number, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ITERS),
    }
}

fn execute(cmd: &Command) -> Result<Value, Failure> {
    match cmd {
        Command::Classify { file } => Ok(to_value(&quasimap(file.as_ref())?.report())),
        Command::Delta { file } => {
            let d = quasimap(file.as_ref())?.delta();
            Ok(serde_json::json!({ "delta": rat_to_string(&d) }))
        }
        Command::Degenerate { file, point } => {
            let p = RationalPoint::parse(point)
                .ok_or_else(|| Failure::Malformed(anyhow!("bad point {point:?}, expected a/b or inf")))?;
            let q = quasimap(file.as_ref())?;
            Ok(to_value(&degenerate_at(&q, &p)?))
        }
        Command::ReduceDvr { file } => {
            let cap = max_iters()?;
            let fam = parse_input::<FamilyInput>(file.as_ref())?.build()?;
            Ok(to_value(&fam.semistable_reduction_with_cap(cap)?))
        }
        Command::CmDegree { file, samples } => {
            let fam = parse_input::<PencilInput>(file.as_ref())?.build()?;
            Ok(to_value(&fam.nefness_probe(&default_samples(*samples))?))
        }
        Command::Elliptic { command: EllipticCommand::Analyze { file } } => {
            let model = parse_input::<ModelInput>(file.as_ref())?.build()?;
            Ok(to_value(&model.analyze()?))
        }
        Command::Rescale { file, l } => {
            let q = quasimap(file.as_ref())?;
            Ok(to_value(&rescale(&q, *l)?))
        }
        Command::Isom { first, second } => {
            let q1 = quasimap(Some(first))?;
            let q2 = quasimap(Some(second))?;
            Ok(serde_json::json!({ "isomorphic": are_isomorphic(&q1, &q2)? }))
        }
    }
}

/// Appends `≈ decimal` to every non-integral `num/den` string.
fn annotate(v: Value) -> Value {
    match v {
        Value::String(s) if s.contains('/') => match parse_rat(&s) {
            Some(r) => Value::String(format!("{s} ≈ {:.6}", rat_to_f64(&r))),
            None => Value::String(s),
        },
        Value::Array(xs) => Value::Array(xs.into_iter().map(annotate).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, annotate(x))).collect()),
        other => other,
    }
}

fn render(v: Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(&v),
        Format::Pretty => serde_json::to_string_pretty(&annotate(v)),
    }
    .expect("json values serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(v) => {
            println!("{}", render(v, cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            let obj = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            println!("{}", render(obj, cli.format));
            ExitCode::from(1)
        }
        Err(Failure::Malformed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
