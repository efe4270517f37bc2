//! Brute-force reference implementations for property testing: exhaustive
//! substitution search, an independent free-insertion DP, and exhaustive
//! median search. Deliberately slow, structurally unrelated to the production
//! algorithms they check, and capped so misuse fails fast instead of hanging.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::median::MedianResult;
use crate::pattern::{Pattern, PatternClass, PatternItem, Symbol, Word};

/// Hard cap on the number of enumerated candidates.
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of {candidates} candidates exceeds the oracle cap of {cap}")]
    CapExceeded { candidates: u128, cap: u64 },
    #[error("oracle requires a regular pattern")]
    NotRegular,
    #[error("missing substitution image")]
    Apply,
}

/// Bounds for exhaustive searches: candidate words are drawn from
/// `alphabet^(0..=max_image_len)`.
#[derive(Debug, Clone)]
pub struct OracleBound {
    pub max_image_len: usize,
    pub alphabet: Vec<Symbol>,
}

impl OracleBound {
    pub fn new(max_image_len: usize, alphabet: Vec<Symbol>) -> OracleBound {
        OracleBound {
            max_image_len,
            alphabet,
        }
    }

    /// Symbols occurring in `w` or in the terminals of `p`; symbols outside
    /// this set cannot reduce the distance.
    pub fn instance_alphabet(p: &Pattern, w: &Word) -> Vec<Symbol> {
        let mut set: BTreeSet<Symbol> = w.iter().copied().collect();
        set.extend(p.term_projection().iter().copied());
        set.into_iter().collect()
    }
}

// oracle-local edit distance: full matrix, row major, no tricks
fn ed_naive(u: &[Symbol], v: &[Symbol]) -> usize {
    let cols = v.len() + 1;
    let mut d = vec![0usize; (u.len() + 1) * cols];
    for l in 0..cols {
        d[l] = l;
    }
    for j in 1..=u.len() {
        d[j * cols] = j;
        for l in 1..=v.len() {
            let sub = d[(j - 1) * cols + l - 1] + usize::from(u[j - 1] != v[l - 1]);
            let del = d[(j - 1) * cols + l] + 1;
            let ins = d[j * cols + l - 1] + 1;
            d[j * cols + l] = sub.min(del).min(ins);
        }
    }
    d[u.len() * cols + v.len()]
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
fn candidate_words(b: &OracleBound) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut level: Vec<Word> = vec![Word::new()];
    for _ in 0..b.max_image_len {
        let mut next = Vec::new();
        for w in &level {
            for &c in &b.alphabet {
                let mut w2 = w.clone();
                w2.push(c);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
        if level.is_empty() {
            break;
        }
    }
    out
}

fn candidate_count(b: &OracleBound) -> u128 {
    let sigma = b.alphabet.len() as u128;
    let mut total: u128 = 1;
    let mut pow: u128 = 1;
    for _ in 0..b.max_image_len {
        pow = pow.saturating_mul(sigma);
        total = total.saturating_add(pow);
    }
    total
}

/// Minimum of `ed(h(p), w)` over every substitution with images bounded by
/// `b`; exact whenever the bound covers an optimal substitution.
pub fn oracle_any(p: &Pattern, w: &Word, b: &OracleBound) -> Result<usize, OracleError> {
    let vars = p.var_count();
    let per_var = candidate_count(b);
    let mut total: u128 = 1;
    for _ in 0..vars {
        total = total.saturating_mul(per_var);
    }
    if total > ENUMERATION_CAP as u128 {
        return Err(OracleError::CapExceeded {
            candidates: total,
            cap: ENUMERATION_CAP,
        });
    }
    if vars == 0 {
        return Ok(ed_naive(&p.term_projection(), w));
    }
    let candidates = candidate_words(b);
    let mut pick = vec![0usize; vars];
    let mut best = usize::MAX;
    loop {
        let mut image = Vec::new();
        for item in p.items() {
            match *item {
                PatternItem::Terminal(s) => image.push(s),
                PatternItem::Var(x) => image.extend_from_slice(&candidates[pick[x]]),
            }
        }
        best = best.min(ed_naive(&image, w));
        // next assignment
        let mut i = vars;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < candidates.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// The free-insertion DP rebuilt from scratch: no sentinel, no variable
/// merging, full matrix. Checks the production matcher from the outside.
pub fn oracle_regular_dp(p: &Pattern, w: &Word) -> Result<usize, OracleError> {
    if p.classify() != PatternClass::Regular {
        return Err(OracleError::NotRegular);
    }
    let beta = p.term_projection();
    let mut free: BTreeSet<usize> = BTreeSet::new();
    let mut seen = 0usize;
    for item in p.items() {
        match item {
            PatternItem::Terminal(_) => seen += 1,
            PatternItem::Var(_) => {
                free.insert(seen);
            }
        }
    }
    let cols = w.len() + 1;
    let rows = beta.len() + 1;
    let mut d = vec![0u64; rows * cols];
    for l in 1..cols {
        d[l] = if free.contains(&0) { 0 } else { l as u64 };
    }
    for j in 1..rows {
        let is_free = free.contains(&j);
        d[j * cols] = j as u64;
        for l in 1..cols {
            let sub = d[(j - 1) * cols + l - 1] + u64::from(beta[j - 1] != w[l - 1]);
            let del = d[(j - 1) * cols + l] + 1;
            let ins = d[j * cols + l - 1] + if is_free { 0 } else { 1 };
            d[j * cols + l] = sub.min(del).min(ins);
        }
    }
    Ok(d[rows * cols - 1] as usize)
}

/// Exhaustive minimum of the summed edit distance over all candidate words.
pub fn oracle_median(strings: &[Word], b: &OracleBound) -> Result<MedianResult, OracleError> {
    let total = candidate_count(b);
    if total > ENUMERATION_CAP as u128 {
        return Err(OracleError::CapExceeded {
            candidates: total,
            cap: ENUMERATION_CAP,
        });
    }
    let mut best: Option<MedianResult> = None;
    for cand in candidate_words(b) {
        let cost: usize = strings.iter().map(|s| ed_naive(s, &cand)).sum();
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(MedianResult {
                median: cand,
                cost,
            });
        }
    }
    Ok(best.expect("candidate enumeration always contains the empty word"))
}
