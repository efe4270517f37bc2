//! Scaling harness: generates seeded instances with controllable true
//! distance and times the matchers, one CSV row per (n, delta, algo) cell.

use std::time::Instant;

use anyhow::{bail, Result};
use clap::Args;
use edmatch::regular;
use edmatch::{Pattern, PatternItem, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Word lengths, comma separated (may be empty)
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    pub n: Vec<String>,
    /// Distance thresholds, comma separated
    #[arg(long, value_delimiter = ',', default_value = "8,64")]
    pub delta: Vec<String>,
    /// Algorithms to time: diagonal, dp
    #[arg(long, value_delimiter = ',', default_value = "diagonal")]
    pub algo: Vec<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Alphabet size of the generated word
    #[arg(long, default_value_t = 4)]
    pub sigma: u32,
    /// Number of variables planted into the pattern
    #[arg(long, default_value_t = 4)]
    pub vars: usize,
    /// Fraction of the word absorbed by variables
    #[arg(long, default_value_t = 0.15)]
    pub density: f64,
    /// Random edits applied to the word after the pattern was derived
    #[arg(long, default_value_t = 4)]
    pub edits: usize,
    /// Skip dp rows for n above this cutoff
    #[arg(long, default_value_t = 20_000)]
    pub dp_cutoff: usize,
}

/// Derives a regular pattern from a random word by carving variable gaps,
/// then perturbs the word with random edits; the true distance is close to
/// (and at most) the number of edits.
pub fn gen_instance(
    n: usize,
    sigma: u32,
    vars: usize,
    density: f64,
    edits: usize,
    rng: &mut ChaCha8Rng,
) -> (Pattern, Word) {
    let sigma = sigma.max(1);
    let base: Vec<Symbol> = (0..n).map(|_| Symbol(rng.gen_range(0..sigma))).collect();

    let mut items = Vec::new();
    if vars == 0 || n == 0 {
        items.extend(base.iter().map(|&s| PatternItem::Terminal(s)));
        if items.is_empty() {
            items.push(PatternItem::Var(0));
        }
    } else {
        // one gap per variable, placed inside disjoint blocks of the word
        let gap_target = ((n as f64 * density / vars as f64) as usize).max(1);
        for (i, block) in (0..vars).map(|i| (i, (n * i / vars, n * (i + 1) / vars))) {
            let (lo, hi) = block;
            let span = hi - lo;
            let gap = gap_target.min(span);
            let start = lo + rng.gen_range(0..=span - gap);
            items.extend(base[lo..start].iter().map(|&s| PatternItem::Terminal(s)));
            items.push(PatternItem::Var(i));
            items.extend(base[start + gap..hi].iter().map(|&s| PatternItem::Terminal(s)));
        }
    }
    let pattern = Pattern::from_items(items).expect("generated pattern is nonempty");

    let mut word = base;
    for _ in 0..edits {
        let sym = Symbol(rng.gen_range(0..sigma));
        match rng.gen_range(0..3u8) {
            0 if !word.is_empty() => {
                let at = rng.gen_range(0..word.len());
                word.remove(at);
            }
            1 if !word.is_empty() => {
                let at = rng.gen_range(0..word.len());
                word[at] = sym;
            }
            _ => {
                let at = rng.gen_range(0..=word.len());
                word.insert(at, sym);
            }
        }
    }
    (pattern, Word::from_syms(word))
}

fn parse_list(raw: &[String], what: &str) -> Result<Vec<usize>> {
    raw.iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| anyhow::anyhow!("bad {what} value '{s}': {e}"))
        })
        .collect()
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let ns = parse_list(&args.n, "n")?;
    let deltas = parse_list(&args.delta, "delta")?;
    let algos: Vec<&String> = args.algo.iter().filter(|s| !s.is_empty()).collect();
    for algo in &algos {
        if algo.as_str() != "diagonal" && algo.as_str() != "dp" {
            bail!("unknown bench algorithm '{algo}' (expected diagonal or dp)");
        }
    }
    println!("n,delta,algo,seconds,distance");
    for &n in &ns {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ (n as u64).wrapping_mul(0x9E3779B9));
        let (pattern, word) =
            gen_instance(n, args.sigma, args.vars, args.density, args.edits, &mut rng);
        let (view, ws) = regular::normalize(&pattern, &word).expect("generated pattern is regular");
        for &delta in &deltas {
            for algo in &algos {
                if algo.as_str() == "dp" && n > args.dp_cutoff {
                    continue;
                }
                let cell = || -> i64 {
                    match algo.as_str() {
                        "diagonal" => regular::diagonal_decide(&view, &ws, delta)
                            .expect("decide on normalized inputs")
                            .map_or(-1, |d| d as i64),
                        _ => regular::dp_distance(&view, &ws) as i64,
                    }
                };
                cell(); // warm-up, excluded from the measurement
                let started = Instant::now();
                let distance = cell();
                let seconds = started.elapsed().as_secs_f64();
                println!("{n},{delta},{algo},{seconds:.6},{distance}");
            }
        }
    }
    Ok(())
}
