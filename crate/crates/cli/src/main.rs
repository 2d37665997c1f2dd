//! `grassblow`: index sets, verification suites and orbit data as JSON lines.
//!
//! Exit codes: 0 when everything passes, 1 when a check is falsified, 2 on bad input.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grassblow::grassmann::{enum_stratum, index_set, GrassPoint, Params};
use grassblow::par::Strategy;
use grassblow::sampling::Sampler;
use grassblow::suites::{self, all_pass, CheckRecord, SampleConfig};
use grassblow::torusflow::{fixed_component, limit, orbit_curve_degree, Direction, FlowCurve};
use grassblow::Error;

#[derive(Parser)]
#[command(name = "grassblow", version, about = "Exact computations on Grassmannian blow-ups")]
struct Cli {
    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the index set, or one weight stratum of it.
    Enum {
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        /// Weight; needs --s.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a verification suite and print one JSON line per check.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Rank for the orbits suite.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Flow curve, limits and degree of a G_m-orbit.
    Flow {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        /// Use a seeded random point instead of reading one.
        #[arg(long, conflicts_with = "point")]
        random: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON matrix file (`{"rows": [[...]]}` or a bare array); stdin if absent.
        #[arg(long)]
        point: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    LemmaEm,
    Orbits,
    Diagram,
    Retraction,
    Flow,
    Strata,
}

enum Failure {
    Falsified,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    let res = match cli.cmd {
        Cmd::Enum { s, p, n, k } => cmd_enum(s, p, n, k),
        Cmd::Verify { suite, s, p, n, r, samples, seed, output } => {
            let cfg = SampleConfig { samples, seed, strategy };
            cmd_verify(suite, s, p, n, r, &cfg, output)
        }
        Cmd::Flow { s, p, n, random, seed, point } => cmd_flow(s, p, n, random, seed, point),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Falsified) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Input(format!("--{flag} is required here")))
}

fn cmd_enum(s: Option<usize>, p: usize, n: usize, k: Option<usize>) -> Outcome {
    let labels = match (s, k) {
        (Some(s), Some(k)) => enum_stratum(&Params::new(s, p, n)?, k)?,
        (Some(s), None) => index_set(Params::new(s, p, n)?.p(), n),
        (None, Some(_)) => return Err(Failure::Input("--k needs --s".into())),
        (None, None) => {
            if p == 0 || p >= n {
                return Err(Failure::Input(format!("need 0 < p < n, got p={p}, n={n}")));
            }
            index_set(p, n)
        }
    };
    let v = json!({ "s": s, "p": p, "n": n, "k": k, "count": labels.len(), "labels": labels });
    emit(&mut io::stdout().lock(), &v)?;
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    s: Option<usize>,
    p: Option<usize>,
    n: Option<usize>,
    r: Option<usize>,
    cfg: &SampleConfig,
    output: Option<PathBuf>,
) -> Outcome {
    let params = || -> Result<Params, Failure> { Ok(Params::new(need(s, "s")?, need(p, "p")?, need(n, "n")?)?) };
    let records: Vec<CheckRecord> = match suite {
        Suite::LemmaEm => {
            let par = params()?;
            let mut v = suites::check_lemma_em(&par, cfg.strategy);
            v.extend(suites::check_round_trip(&par, cfg));
            v
        }
        Suite::Orbits => {
            let r = need(r, "r")?;
            if !(1..=3).contains(&r) {
                return Err(Failure::Input(format!("--r must be in [1, 3], got {r}")));
            }
            suites::check_orbits(r, cfg.seed, cfg.strategy)
        }
        Suite::Diagram => {
            let (p, n) = (need(p, "p")?, need(n, "n")?);
            grassblow::kauszlm::kausz_params(p, n)?;
            let mut v = suites::check_diagram(p, n, cfg);
            v.extend(suites::check_ideal_dictionary(p, n, cfg));
            v
        }
        Suite::Retraction => suites::check_retraction(&params()?, cfg),
        Suite::Flow => {
            let par = params()?;
            let mut v = suites::check_flow(&par, cfg);
            v.push(suites::check_source_sink(&par, cfg));
            v
        }
        Suite::Strata => {
            let par = params()?;
            let mut v = suites::check_strata(&par, cfg);
            v.extend(suites::check_oracle(&par, cfg));
            v
        }
    };
    let mut out: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    for rec in &records {
        emit(&mut *out, &json!(rec))?;
    }
    out.flush()?;
    let failed = records.iter().filter(|r| !r.pass).count();
    eprintln!("{} checks, {failed} failed", records.len());
    if all_pass(&records) {
        Ok(())
    } else {
        Err(Failure::Falsified)
    }
}

fn read_point(path: Option<PathBuf>) -> Result<GrassPoint, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => File::open(p)?.read_to_string(&mut text)?,
        None => io::stdin().read_to_string(&mut text)?,
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("bad JSON: {e}")))?;
    Ok(GrassPoint::from_json(&v)?)
}

fn cmd_flow(s: usize, p: usize, n: usize, random: bool, seed: u64, point: Option<PathBuf>) -> Outcome {
    let par = Params::new(s, p, n)?;
    let x = if random { suites::random_point(&mut Sampler::new(seed, 0), p, n)? } else { read_point(point)? };
    if (x.p(), x.n()) != (p, n) {
        return Err(Failure::Input(format!("point is {}x{}, expected {p}x{n}", x.p(), x.n())));
    }
    let curve = FlowCurve::new(&par, &x)?;
    let fixed = fixed_component(&par, &x)?;
    let degree = match orbit_curve_degree(&par, &x) {
        Ok(d) => Some(d),
        Err(Error::DegenerateOrbit) => None,
        Err(e) => return Err(e.into()),
    };
    let v = json!({
        "params": par,
        "point": x,
        "degenerate": degree.is_none(),
        "fixed_component": fixed,
        "degree": degree,
        "components": [curve.kmin(), curve.kmax()],
        "flow": curve,
        "to_zero": limit(&par, &x, Direction::ToZero)?,
        "to_infinity": limit(&par, &x, Direction::ToInfinity)?,
    });
    emit(&mut io::stdout().lock(), &v)?;
    Ok(())
}
