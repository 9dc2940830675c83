//! `cfmap`: exact continued fraction expansions, evaluations, distances and
//! continuity probes from the command line.

mod check;

use std::fmt::Write as _;
use std::process::ExitCode;

use cfmap::{
    continuity_probe, convergents, dist_with_depth, endpoint_probe, eval, eval_k, expand, fib,
    forget, fundamental_interval, in_cylinder, irrational_probe, preimage, rho, DistResult, Error,
    ExtDigit, Preimage, ProbeReport, Rational, Seq, Side, Value, Word, DEFAULT_DEPTH_BUDGET,
};
use clap::{CommandFactory, Parser, Subcommand};
use serde_json::{json, Value as Json};

#[derive(Parser, Debug)]
#[command(
    name = "cfmap",
    version,
    about = "Exact extended continued fraction toolkit"
)]
struct Cli {
    /// Print one JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Depth budget given to every stream argument.
    #[arg(long, global = true, value_name = "B", default_value_t = DEFAULT_DEPTH_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Digit sequence of a rational in [0,1].
    Expand { x: String },
    /// Value of a sequence (exact, or an enclosure for streams).
    Eval { seq: String },
    /// k-th approximant of a sequence.
    Evalk { seq: String, k: usize },
    /// Table of convergent numerators and denominators up to depth n.
    Conv { seq: String, n: usize },
    /// Weighted product distance between two sequences.
    Dist {
        s: String,
        t: String,
        /// Truncation depth for infinite sequences.
        #[arg(long, value_name = "K")]
        depth: Option<usize>,
    },
    /// Digit distance between two digits (`inf` allowed).
    Rho { m: String, n: String },
    /// n-th Fibonacci number.
    Fib { n: u32 },
    /// Fundamental interval of a finite word.
    Interval { seq: String },
    /// Both digit sequences of a rational in (0,1).
    Preimage { x: String },
    /// Forget everything after the first `inf`.
    Gmap { seq: String },
    /// Whether a sequence lies in the cylinder over a word.
    Cyl { seq: String, base: String },
    /// Expansions of points approaching x from one side.
    Probe {
        x: String,
        /// Required for interior points; ignored at 0 and 1.
        #[arg(long)]
        side: Option<String>,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Approximants of a stream and their distances to it.
    ProbeIrr {
        stream: String,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Run the randomized invariant suites.
    Check {
        #[arg(long, value_enum, default_value_t = check::Suite::All)]
        suite: check::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = check::Size::Small)]
        size: check::Size,
    },
}

pub struct Output {
    pub text: String,
    pub json: Json,
}

enum Failure {
    Domain(Error),
    Usage(clap::Error),
    Suite(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = |out: &Output| {
        if cli.json {
            println!("{}", out.json);
        } else {
            print!("{}", out.text);
        }
    };
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Suite(out)) => {
            emit(&out);
            ExitCode::from(3)
        }
        Err(Failure::Domain(e)) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => e.exit(),
    }
}

fn seq(s: &str, budget: u64) -> Result<Seq, Error> {
    Seq::parse_with_budget(s, budget as usize)
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let budget = cli.budget;
    let out = match &cli.command {
        Command::Expand { x } => {
            let x: Rational = x.parse()?;
            let w = expand(&x)?;
            Output {
                text: line(&w),
                json: json!({ "x": x.to_string(), "word": w.to_string() }),
            }
        }
        Command::Eval { seq: s } => {
            let s = seq(s, budget)?;
            let v = eval(&s);
            Output {
                text: line(&v),
                json: json!({ "seq": s.to_string(), "value": value_json(&v) }),
            }
        }
        Command::Evalk { seq: s, k } => {
            let s = seq(s, budget)?;
            let v = eval_k(&s, *k)?;
            Output {
                text: line(&v),
                json: json!({ "seq": s.to_string(), "k": k, "value": v.to_string() }),
            }
        }
        Command::Conv { seq: s, n } => {
            let s = seq(s, budget)?;
            let table = convergents(&s, *n)?;
            let rows: Vec<[String; 3]> = table
                .rows()
                .map(|(k, p, q)| [k.to_string(), p.to_string(), q.to_string()])
                .collect();
            let text = render_table(&["k", "p", "q"], &rows);
            let json_rows: Vec<Json> = rows
                .iter()
                .map(|[k, p, q]| json!({ "k": k.parse::<i64>().unwrap(), "p": p, "q": q }))
                .collect();
            Output {
                text,
                json: json!({ "seq": s.to_string(), "rows": json_rows }),
            }
        }
        Command::Dist { s, t, depth } => {
            let (s, t) = (seq(s, budget)?, seq(t, budget)?);
            let d = dist_with_depth(&s, &t, *depth)?;
            Output {
                text: line(&d),
                json: dist_json(&d),
            }
        }
        Command::Rho { m, n } => {
            let (m, n): (ExtDigit, ExtDigit) = (m.parse()?, n.parse()?);
            let r = rho(&m, &n);
            Output {
                text: line(&r),
                json: json!({ "m": m.to_string(), "n": n.to_string(), "rho": r.to_string() }),
            }
        }
        Command::Fib { n } => {
            let f = fib(*n);
            Output {
                text: line(&f),
                json: json!({ "n": n, "fib": f.to_string() }),
            }
        }
        Command::Interval { seq: s } => {
            let w: Word = s.parse()?;
            let i = fundamental_interval(&w)?;
            Output {
                text: line(&i),
                json: json!({
                    "word": w.to_string(),
                    "lo": i.lo.to_string(),
                    "hi": i.hi.to_string(),
                    "lo_closed": i.lo_closed,
                    "hi_closed": i.hi_closed,
                }),
            }
        }
        Command::Preimage { x } => {
            let x: Rational = x.parse()?;
            let p = preimage(&x)?;
            let words = match &p {
                Preimage::Single(w) => vec![w.to_string()],
                Preimage::Pair(pair) => {
                    vec![pair.canonical.to_string(), pair.alternate.to_string()]
                }
            };
            Output {
                text: line(&p),
                json: json!({ "x": x.to_string(), "preimages": words }),
            }
        }
        Command::Gmap { seq: s } => {
            let s = seq(s, budget)?;
            let g = forget(&s);
            Output {
                text: line(&g),
                json: json!({ "seq": s.to_string(), "image": g.to_string() }),
            }
        }
        Command::Cyl { seq: s, base } => {
            let s = seq(s, budget)?;
            let base: Word = base.parse()?;
            let inside = in_cylinder(&s, &base)?;
            Output {
                text: line(inside),
                json: json!({ "seq": s.to_string(), "base": base.to_string(), "member": inside }),
            }
        }
        Command::Probe { x, side, count } => {
            let x: Rational = x.parse()?;
            let report = if x.is_zero() || x == Rational::one() {
                endpoint_probe(&x, *count)?
            } else {
                let Some(side) = side else {
                    return Err(Failure::Usage(Cli::command().error(
                        clap::error::ErrorKind::MissingRequiredArgument,
                        "--side inside|outside is required for points in (0,1)",
                    )));
                };
                continuity_probe(&x, side.parse::<Side>()?, *count)?
            };
            probe_output(&report)
        }
        Command::ProbeIrr { stream, count } => {
            let Seq::Stream(s) = seq(stream, budget)? else {
                return Err(Error::Parse(format!("`{stream}` is not a stream")).into());
            };
            probe_output(&irrational_probe(&s, *count)?)
        }
        Command::Check { suite, seed, size } => {
            let (out, passed) = check::run(*suite, *seed, *size);
            if !passed {
                return Err(Failure::Suite(out));
            }
            out
        }
    };
    Ok(out)
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(x) => json!({ "exact": x.to_string() }),
        Value::Enclosure(e) => json!({
            "lo": e.lo.to_string(),
            "hi": e.hi.to_string(),
            "depth": e.depth,
        }),
    }
}

fn dist_json(d: &DistResult) -> Json {
    match d {
        DistResult::Exact(x) => json!({ "exact": x.to_string() }),
        DistResult::Bracket { lo, hi, depth } => json!({
            "lo": lo.to_string(),
            "hi": hi.to_string(),
            "depth": depth,
        }),
    }
}

fn probe_output(report: &ProbeReport) -> Output {
    let rows: Vec<[String; 5]> = report
        .samples
        .iter()
        .enumerate()
        .map(|(j, s)| {
            [
                (j + 1).to_string(),
                s.t.to_string(),
                s.word.to_string(),
                s.distance.to_string(),
                s.distance.to_decimal(6),
            ]
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "target {}  approach {}  limit {}",
        report.target, report.approach, report.limit_word
    );
    text.push_str(&render_table(
        &["j", "t", "word", "distance", "approx"],
        &rows,
    ));
    let samples: Vec<Json> = report
        .samples
        .iter()
        .map(|s| {
            json!({
                "t": s.t.to_string(),
                "word": s.word.to_string(),
                "distance": s.distance.to_string(),
                "product_distance": s.product_distance.to_string(),
            })
        })
        .collect();
    Output {
        text,
        json: json!({
            "target": report.target.to_string(),
            "approach": report.approach.to_string(),
            "limit": report.limit_word.to_string(),
            "samples": samples,
        }),
    }
}

fn render_table<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut push = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    push(header.to_vec());
    for row in rows {
        push(row.iter().map(String::as_str).collect());
    }
    out
}
