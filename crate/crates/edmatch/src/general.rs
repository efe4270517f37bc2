//! Exact matching of arbitrary patterns under edit distance by enumerating
//! factorizations of the word.
//!
//! Every factorization assigns one word segment to each variable occurrence;
//! grouping the segments per variable and taking their exact median string
//! yields the best substitution compatible with that factorization. The
//! minimum over all factorizations is the distance. For a variable with a
//! single occurrence the median degenerates to the segment itself.

use std::collections::HashMap;

use thiserror::Error;

use crate::edit::edit_distance;
use crate::median::{median, MedianError, MedianInstance};
use crate::pattern::{Pattern, PatternItem, Substitution, Symbol, Word};

#[derive(Debug, Error)]
pub enum GeneralError {
    #[error("{count} factorizations exceed the budget of {budget}; route regular patterns through the diagonal matcher or shrink the input")]
    TooManyFactorizations { count: u128, budget: u64 },
    #[error(transparent)]
    Median(#[from] MedianError),
}

/// Enumeration limits for [`general_min`].
#[derive(Debug, Clone)]
pub struct GeneralBudget {
    /// Cap on the number of factorizations `C(n + 2k₂, 2k₂)`.
    pub max_factorizations: u64,
    /// Cell budget forwarded to the median subroutine.
    pub median_cells: usize,
}

impl Default for GeneralBudget {
    fn default() -> GeneralBudget {
        GeneralBudget {
            max_factorizations: 5_000_000,
            median_cells: crate::median::DEFAULT_CELL_BUDGET,
        }
    }
}

/// Number of non-decreasing cut tuples: `C(n + 2k₂, 2k₂)`.
pub fn count_factorizations(n: usize, k2: usize) -> u128 {
    let m = 2 * k2 as u128;
    let n = n as u128;
    let mut result: u128 = 1;
    for i in 0..m {
        result = result.saturating_mul(n + m - i);
        result /= i + 1;
        if result > u128::MAX / 2 {
            return u128::MAX;
        }
    }
    result
}

/// Visits every non-decreasing tuple of `2·k2` cut points in `0..=n`, in
/// lexicographic order, exactly once.
pub fn enumerate_factorizations<F: FnMut(&[usize])>(n: usize, k2: usize, mut visitor: F) {
    let m = 2 * k2;
    if m == 0 {
        visitor(&[]);
        return;
    }
    let mut cuts = vec![0usize; m];
    loop {
        visitor(&cuts);
        let mut i = m;
        while i > 0 && cuts[i - 1] == n {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let v = cuts[i - 1] + 1;
        for c in cuts.iter_mut().skip(i - 1) {
            *c = v;
        }
    }
}

/// Exact minimum distance and best substitution for an arbitrary pattern.
pub fn general_min(
    p: &Pattern,
    w: &Word,
    budget: &GeneralBudget,
) -> Result<(usize, Substitution), GeneralError> {
    let k2 = p.total_occurrences();
    let count = count_factorizations(w.len(), k2);
    if count > budget.max_factorizations as u128 {
        return Err(GeneralError::TooManyFactorizations {
            count,
            budget: budget.max_factorizations,
        });
    }
    // variable id of each occurrence, in pattern order
    let occ_vars: Vec<usize> = p
        .items()
        .iter()
        .filter_map(|it| match it {
            PatternItem::Var(x) => Some(*x),
            _ => None,
        })
        .collect();

    let mut memo: HashMap<(usize, Vec<Vec<Symbol>>), Word> = HashMap::new();
    let mut best: Option<(usize, Substitution)> = None;
    let mut failure: Option<GeneralError> = None;

    enumerate_factorizations(w.len(), k2, |cuts| {
        if failure.is_some() || best.as_ref().is_some_and(|(d, _)| *d == 0) {
            return;
        }
        let mut h = Substitution::new();
        for x in 0..p.var_count() {
            let mut segments: Vec<Vec<Symbol>> = Vec::new();
            for (occ, &var) in occ_vars.iter().enumerate() {
                if var == x {
                    segments.push(w[cuts[2 * occ]..cuts[2 * occ + 1]].to_vec());
                }
            }
            let image = if segments.len() == 1 {
                Word::from_syms(segments.pop().unwrap())
            } else {
                // identical segment groups recur across factorizations
                let mut key = segments.clone();
                key.sort();
                if let Some(cached) = memo.get(&(x, key.clone())) {
                    cached.clone()
                } else {
                    let words = segments.iter().cloned().map(Word::from_syms).collect();
                    let inst = MedianInstance::new(words).expect("every variable occurs");
                    match median(&inst, budget.median_cells) {
                        Ok(r) => {
                            memo.insert((x, key), r.median.clone());
                            r.median
                        }
                        Err(e) => {
                            failure = Some(GeneralError::Median(e));
                            return;
                        }
                    }
                }
            };
            h.insert(x, image);
        }
        let image = p.apply(&h).expect("substitution covers all variables");
        let d = edit_distance(&image, w);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, h));
        }
    });

    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best.expect("at least one factorization exists"))
}
