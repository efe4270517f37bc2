//! Command-line matcher for patterns with variables under edit distance.

mod bench;
mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use edmatch::general::{general_min, GeneralBudget};
use edmatch::oracle::{oracle_any, OracleBound};
use edmatch::regular;
use edmatch::{edit, EditScript, Pattern, PatternClass, Substitution, Word};
use serde::Serialize;

use instance::Instance;
use report::{script_ops, substitution_map, Distance, MatchReport, Timings};

#[derive(Parser)]
#[command(
    name = "edmatch",
    version,
    about = "Match patterns with variables against words under edit distance"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the pattern matches the word within a distance budget
    Match(MatchArgs),
    /// Compute the exact minimum distance and a witness
    MinMatch(MatchArgs),
    /// Print the structural class of a pattern
    Classify(ClassifyArgs),
    /// Generate a hardness-reduction instance plus a JSON sidecar
    GenHardness(GenArgs),
    /// Time the matchers on generated instances; CSV on stdout
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Algo {
    Auto,
    Dp,
    Diagonal,
    General,
    Oracle,
}

#[derive(Args)]
struct MatchArgs {
    /// Instance file (pattern line, word line, optional delta line); - for stdin
    instance: Option<PathBuf>,
    /// Inline pattern text (with --word, replaces the instance file)
    #[arg(long)]
    pattern: Option<String>,
    /// Inline word text
    #[arg(long)]
    word: Option<String>,
    /// Distance budget; overrides the instance file's third line
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    /// Treat each byte of the word as one symbol
    #[arg(long)]
    binary: bool,
    /// Factorization budget for the general algorithm
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct ClassifyArgs {
    instance: Option<PathBuf>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Binary payload strings, comma separated (e.g. 01,1,001)
    #[arg(long, value_delimiter = ',', required = true)]
    strings: Vec<String>,
    /// Median-string budget encoded in the instance
    #[arg(long)]
    delta: usize,
    /// Shrink the separator scale; flags the instance as structural-only
    #[arg(long)]
    s_override: Option<usize>,
    /// Output instance file; the sidecar goes to <OUT>.json
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Match(args) => run_match(&args, true),
        Cmd::MinMatch(args) => run_match(&args, false),
        Cmd::Classify(args) => run_classify(&args),
        Cmd::GenHardness(args) => run_gen(&args).map(|()| ExitCode::SUCCESS),
        Cmd::Bench(args) => bench::run(&args).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(args: &MatchArgs) -> Result<Instance> {
    match (&args.pattern, &args.word) {
        (Some(p), Some(w)) => Ok(Instance {
            pattern: Pattern::parse(p).context("parsing --pattern")?,
            word: if args.binary {
                Word::from_bytes(w.as_bytes())
            } else {
                Word::from_text(w)
            },
            delta: None,
        }),
        (None, None) => {
            let path = args
                .instance
                .as_ref()
                .ok_or_else(|| anyhow!("provide an instance file or --pattern with --word"))?;
            instance::read_instance(path, args.binary)
        }
        _ => bail!("--pattern and --word must be given together"),
    }
}

struct Solved {
    algo: &'static str,
    /// None when the decision procedure proved only `distance > delta`.
    distance: Option<usize>,
    witness: Option<(Substitution, EditScript)>,
}

fn solve(p: &Pattern, w: &Word, delta: Option<usize>, algo: Algo, budget: Option<u64>) -> Result<Solved> {
    let class = p.classify();
    let algo = match algo {
        Algo::Auto => {
            if class == PatternClass::Regular {
                Algo::Diagonal
            } else {
                Algo::General
            }
        }
        other => other,
    };
    match algo {
        Algo::Diagonal => {
            if class != PatternClass::Regular {
                bail!("pattern not regular (classified {class}); the diagonal algorithm does not apply");
            }
            match delta {
                Some(delta) => {
                    let (view, ws) = regular::normalize(p, w)?;
                    let bound = w.len() + p.term_projection().len();
                    match regular::diagonal_decide(&view, &ws, delta.min(bound))? {
                        Some(d) => {
                            let wit = regular::recover_witness(&view, &ws, d)?;
                            Ok(Solved {
                                algo: "diagonal",
                                distance: Some(d),
                                witness: Some((wit.substitution, wit.script)),
                            })
                        }
                        None => Ok(Solved {
                            algo: "diagonal",
                            distance: None,
                            witness: None,
                        }),
                    }
                }
                None => {
                    let (d, wit) = regular::min_distance(p, w)?;
                    Ok(Solved {
                        algo: "diagonal",
                        distance: Some(d),
                        witness: Some((wit.substitution, wit.script)),
                    })
                }
            }
        }
        Algo::Dp => {
            if class != PatternClass::Regular {
                bail!("pattern not regular (classified {class}); the dp algorithm does not apply");
            }
            let (view, ws) = regular::normalize(p, w)?;
            let m = regular::dp_matrix(&view, &ws);
            let wit = regular::dp_traceback(&view, &ws, &m)?;
            Ok(Solved {
                algo: "dp",
                distance: Some(m.distance()),
                witness: Some((wit.substitution, wit.script)),
            })
        }
        Algo::General => {
            let mut b = GeneralBudget::default();
            if let Some(max) = budget {
                b.max_factorizations = max;
            }
            let (d, h) = general_min(p, w, &b)?;
            let image = p.apply(&h).expect("general witness covers all variables");
            let (_, script) = edit::align(&image, w);
            Ok(Solved {
                algo: "general",
                distance: Some(d),
                witness: Some((h, script)),
            })
        }
        Algo::Oracle => {
            let bound = OracleBound::new(
                w.len() + p.term_projection().len(),
                OracleBound::instance_alphabet(p, w),
            );
            let d = oracle_any(p, w, &bound)?;
            Ok(Solved {
                algo: "oracle",
                distance: Some(d),
                witness: None,
            })
        }
        Algo::Auto => unreachable!("auto resolved above"),
    }
}

fn run_match(args: &MatchArgs, decision_mode: bool) -> Result<ExitCode> {
    let started = Instant::now();
    let inst = load(args)?;
    let delta = args.delta.or(inst.delta);
    if decision_mode && delta.is_none() {
        bail!("match needs a delta (flag or instance line 3); use min-match to compute the distance");
    }
    let effective_delta = if decision_mode { delta } else { None };
    let parse_s = started.elapsed().as_secs_f64();

    let solve_started = Instant::now();
    let solved = solve(&inst.pattern, &inst.word, effective_delta, args.algo, args.budget)?;
    let solve_s = solve_started.elapsed().as_secs_f64();

    let within = effective_delta.map(|d| solved.distance.is_some_and(|got| got <= d));
    let report = MatchReport {
        algo: solved.algo,
        pattern_class: inst.pattern.classify().to_string(),
        delta: effective_delta,
        distance: match solved.distance {
            Some(d) => Distance::Value(d),
            None => Distance::Marker("exceeds_delta"),
        },
        within_delta: within,
        substitution: solved
            .witness
            .as_ref()
            .map(|(h, _)| substitution_map(&inst.pattern, h)),
        script: solved.witness.as_ref().map(|(_, s)| script_ops(s)),
        timings: Timings {
            parse_s,
            solve_s,
            total_s: started.elapsed().as_secs_f64(),
        },
    };
    report.print(args.json);
    let exceeded = matches!(within, Some(false));
    Ok(if exceeded {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_classify(args: &ClassifyArgs) -> Result<ExitCode> {
    let pattern = match &args.pattern {
        Some(text) => Pattern::parse(text).context("parsing --pattern")?,
        None => {
            let path = args
                .instance
                .as_ref()
                .ok_or_else(|| anyhow!("provide an instance file or --pattern"))?;
            instance::read_instance(path, false)?.pattern
        }
    };
    let class = pattern.classify();
    if args.json {
        println!("{}", serde_json::json!({ "class": class.to_string() }));
    } else {
        println!("{class}");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Sidecar {
    s: usize,
    k: usize,
    delta: usize,
    structural_only: bool,
    pattern_len: usize,
    word_len: usize,
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let strings: Vec<Word> = args.strings.iter().map(|s| Word::from_text(s)).collect();
    let mut params = edmatch::hardness::ReductionParams::new(strings, args.delta)?;
    if let Some(s) = args.s_override {
        params = params.with_s_override(s);
    }
    let inst = edmatch::hardness::gen_instance(&params)?;
    let mut file = String::new();
    file.push_str(&inst.pattern.to_text());
    file.push('\n');
    file.push_str(&inst.word.to_text());
    file.push('\n');
    file.push_str(&inst.delta.to_string());
    file.push('\n');
    std::fs::write(&args.out, file)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let sidecar = Sidecar {
        s: inst.sep_scale,
        k: inst.pattern.occurrences(0),
        delta: inst.delta,
        structural_only: inst.structural_only,
        pattern_len: inst.pattern.len(),
        word_len: inst.word.len(),
    };
    let sidecar_path = {
        let mut os = args.out.as_os_str().to_owned();
        os.push(".json");
        PathBuf::from(os)
    };
    std::fs::write(
        &sidecar_path,
        serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"),
    )
    .with_context(|| format!("writing {}", sidecar_path.display()))?;
    eprintln!(
        "wrote {} and {}",
        args.out.display(),
        sidecar_path.display()
    );
    Ok(())
}
