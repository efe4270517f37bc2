//! Exact median (Steiner) string of k words under edit distance.
//!
//! The DP runs over the k-dimensional grid of prefix positions. A transition
//! either emits one letter of the median (each input string aligns it as a
//! match/substitution or takes it as an insertion) or deletes one input
//! character. Exponential in k by design; a cell budget keeps it honest.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::edit::edit_distance;
use crate::pattern::{Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MedianError {
    #[error("median instance needs at least one string")]
    Empty,
    #[error("median grid has {cells} cells, over the budget of {budget}; use the brute-force oracle or a smaller instance")]
    BudgetExceeded { cells: u128, budget: usize },
}

/// Default cell budget for [`median`].
pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone)]
pub struct MedianInstance {
    strings: Vec<Word>,
    alphabet: Vec<Symbol>,
}

impl MedianInstance {
    pub fn new(strings: Vec<Word>) -> Result<MedianInstance, MedianError> {
        if strings.is_empty() {
            return Err(MedianError::Empty);
        }
        let alphabet: BTreeSet<Symbol> = strings.iter().flat_map(|w| w.iter().copied()).collect();
        Ok(MedianInstance {
            strings,
            alphabet: alphabet.into_iter().collect(),
        })
    }

    pub fn strings(&self) -> &[Word] {
        &self.strings
    }

    /// Symbols occurring in the strings; emitted letters are drawn from here.
    /// A letter foreign to every input could be swapped for an occurring one
    /// in any candidate without increasing any distance.
    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianResult {
    pub median: Word,
    pub cost: usize,
}

/// Sum of edit distances from `s` to every string of the instance.
pub fn sum_distance(s: &Word, inst: &MedianInstance) -> usize {
    inst.strings.iter().map(|w| edit_distance(w, s)).sum()
}

// per-cell traceback move, packed: deletions and emission masks index the
// nonempty strings only (the cell budget bounds those to well under 32)
const MOVE_NONE: u64 = u64::MAX;
const MOVE_DEL_BIT: u64 = 1 << 63;

/// Exact median string by the k-dimensional grid DP.
///
/// Errors out before allocating when the grid `Π (|w_i|+1)` exceeds `budget`.
pub fn median(inst: &MedianInstance, budget: usize) -> Result<MedianResult, MedianError> {
    let k = inst.strings.len();
    let dims: Vec<usize> = inst.strings.iter().map(|w| w.len() + 1).collect();
    let mut cells: u128 = 1;
    for &d in &dims {
        cells = cells.saturating_mul(d as u128);
    }
    if cells > budget as u128 {
        return Err(MedianError::BudgetExceeded { cells, budget });
    }
    let cells = cells as usize;
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // only these can ever advance or be deleted from
    let nonempty: Vec<usize> = (0..k).filter(|&i| dims[i] > 1).collect();

    let mut cost = vec![u32::MAX; cells];
    let mut moves = vec![MOVE_NONE; cells];
    cost[0] = 0;

    let mut pos = vec![0usize; k];
    for idx in 1..cells {
        // advance the mixed-radix odometer (lexicographic traversal)
        let mut i = k - 1;
        loop {
            pos[i] += 1;
            if pos[i] < dims[i] {
                break;
            }
            pos[i] = 0;
            i -= 1;
        }
        let mut best = u32::MAX;
        let mut best_move = MOVE_NONE;
        // per-string deletions
        for (rel, &i) in nonempty.iter().enumerate() {
            if pos[i] > 0 {
                let c = cost[idx - strides[i]].saturating_add(1);
                if c < best {
                    best = c;
                    best_move = MOVE_DEL_BIT | rel as u64;
                }
            }
        }
        // emit a letter consumed by a nonempty subset of the live strings
        let live: Vec<usize> = nonempty.iter().copied().filter(|&i| pos[i] > 0).collect();
        if !live.is_empty() {
            for mask in 1u32..(1u32 << live.len()) {
                let mut pred = idx;
                for (bit, &i) in live.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        pred -= strides[i];
                    }
                }
                let base = cost[pred];
                if base == u32::MAX {
                    continue;
                }
                let inserted = (k - mask.count_ones() as usize) as u32;
                for (ci, &letter) in inst.alphabet.iter().enumerate() {
                    let mut pay = inserted;
                    let mut rel_mask = 0u64;
                    for (bit, &i) in live.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            let rel = nonempty.iter().position(|&j| j == i).unwrap();
                            rel_mask |= 1 << rel;
                            if inst.strings[i][pos[i] - 1] != letter {
                                pay += 1;
                            }
                        }
                    }
                    let c = base.saturating_add(pay);
                    if c < best {
                        best = c;
                        best_move = (ci as u64) << 32 | rel_mask;
                    }
                }
            }
        }
        cost[idx] = best;
        moves[idx] = best_move;
    }

    // traceback; emitted letters come out reversed
    let mut median = Vec::new();
    let mut idx = cells - 1;
    while idx > 0 {
        let mv = moves[idx];
        debug_assert_ne!(mv, MOVE_NONE);
        if mv & MOVE_DEL_BIT != 0 {
            let i = nonempty[(mv & !MOVE_DEL_BIT) as usize];
            idx -= strides[i];
        } else {
            let letter = inst.alphabet[(mv >> 32) as usize];
            let rel_mask = mv & 0xFFFF_FFFF;
            median.push(letter);
            for (rel, &i) in nonempty.iter().enumerate() {
                if rel_mask & (1 << rel) != 0 {
                    idx -= strides[i];
                }
            }
        }
    }
    median.reverse();
    Ok(MedianResult {
        median: Word::from_syms(median),
        cost: cost[cells - 1] as usize,
    })
}
