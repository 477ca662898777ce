use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use hurwitz_core::class_numbers::hurwitz_class_number;
use hurwitz_core::cosets::{
    eq0_sides, theorem1_sides, theorem21_predicted, theorem21_sum, theorem2_table, CosetRow,
    RelationRecord,
};
use hurwitz_core::rational::{format_rational, parse_rational, Rational};
use hurwitz_core::tessellation::{
    label_words, locate, svg_render, RatPoint, Viewport, DEFAULT_MAX_DEPTH,
};
use hurwitz_core::verify::{self, Suite, VerifyConfig, DEFAULT_SEED};
use hurwitz_core::Error;
use serde_json::json;

const DEPTH_ENV: &str = "HURWITZ_MAX_DEPTH";

#[derive(Parser)]
#[command(
    name = "hurwitz",
    version,
    about = "Hurwitz class numbers, coset sums, and the triangulation of y >= 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print H(D) for D >= 0, D = 0 or 3 mod 4.
    ClassNumber { d: i64 },
    /// Both sides of the class number relation for n, as JSON.
    Relation {
        n: i64,
        /// Check the weighted count of elliptic matrices instead.
        #[arg(long)]
        eq0: bool,
    },
    /// Per-coset weighted sums for determinant n, as TSV.
    Cosets { n: i64 },
    /// Labels of the triangles containing (x, y), as a JSON array of words.
    Locate {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// Descent generations before giving up [env: HURWITZ_MAX_DEPTH, default: 64].
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Sum of alpha([[y,x],[0,1]] g) over the modular group, with the predicted value.
    AlphaSum {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Draw the triangles with short labels as SVG.
    Figure {
        /// xmin,xmax,ymin,ymax as rationals.
        #[arg(long, default_value = "-4,5,1,6", allow_hyphen_values = true)]
        viewport: String,
        /// Maximum word length.
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded verification suites and print a JSON report.
    Verify {
        /// thm1, eq0, thm2, thm21, tessellation, words, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Omit wall times so repeated runs compare byte for byte.
        #[arg(long)]
        stable: bool,
    },
}

/// Exit codes: 0 ok, 1 verification failure, 2 usage or input error,
/// 3 descent depth exhausted.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DepthExceeded(_)) => 3,
        _ => 2,
    }
}

fn positive_n(n: i64) -> anyhow::Result<u64> {
    if n < 1 {
        return Err(Error::InvalidN(n).into());
    }
    Ok(n as u64)
}

fn rational(s: &str) -> anyhow::Result<Rational> {
    Ok(parse_rational(s)?)
}

fn max_depth(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{DEPTH_ENV}={v} is not a depth")),
        Err(_) => Ok(DEFAULT_MAX_DEPTH),
    }
}

fn parse_viewport(s: &str) -> anyhow::Result<Viewport> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!(Error::Parse("viewport".into(), s.into()));
    }
    let v = parts
        .iter()
        .map(|p| rational(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let [xmin, xmax, ymin, ymax]: [Rational; 4] = v.try_into().expect("four parts");
    Ok(Viewport::new(xmin, xmax, ymin, ymax)?)
}

/// Runs a command, returning whether every check it made passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::ClassNumber { d } => {
            let h = hurwitz_class_number(d)?;
            writeln!(out, "{}", format_rational(h.value()))?;
            Ok(true)
        }
        Command::Relation { n, eq0 } => {
            let n = positive_n(n)?;
            let sides = if eq0 {
                eq0_sides(n)?
            } else {
                theorem1_sides(n)?
            };
            let record = RelationRecord::new(n, &sides);
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
            Ok(record.ok)
        }
        Command::Cosets { n } => {
            let rows = theorem2_table(positive_n(n)?)?;
            writeln!(out, "{}", CosetRow::tsv_header())?;
            for row in &rows {
                writeln!(out, "{}", row.to_tsv())?;
            }
            Ok(rows.iter().all(CosetRow::ok))
        }
        Command::Locate {
            x,
            y,
            max_depth: depth,
        } => {
            let p = RatPoint::new(rational(&x)?, rational(&y)?);
            let labels = locate(&p, max_depth(depth)?)?;
            writeln!(out, "{}", serde_json::to_string(&label_words(&labels))?)?;
            Ok(true)
        }
        Command::AlphaSum { x, y } => {
            let (x, y) = (rational(&x)?, rational(&y)?);
            let sum = theorem21_sum(&x, &y, max_depth(None)?)?;
            let predicted = theorem21_predicted(&y);
            let ok = sum == predicted;
            let record = json!({
                "x": format_rational(&x),
                "y": format_rational(&y),
                "sum": format_rational(&sum),
                "predicted": format_rational(&predicted),
                "ok": ok,
            });
            writeln!(out, "{record}")?;
            Ok(ok)
        }
        Command::Figure {
            viewport,
            depth,
            out: path,
        } => {
            let svg = svg_render(&parse_viewport(&viewport)?, depth)?;
            match path {
                Some(path) => std::fs::write(&path, svg)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(svg.as_bytes())?,
            }
            Ok(true)
        }
        Command::Verify {
            suite,
            n_max,
            samples,
            seed,
            stable,
        } => {
            let suite: Suite = suite.parse()?;
            let config = VerifyConfig {
                n_max,
                samples,
                ..VerifyConfig::new(seed)
            };
            let mut reports = verify::run(suite, &config)?;
            if stable {
                reports.iter_mut().for_each(|r| r.wall_time_ms = None);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
            Ok(reports.iter().all(|r| r.ok()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
