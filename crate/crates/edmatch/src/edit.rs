//! Unit-cost edit distance between words, edit scripts, and alignment.

use thiserror::Error;

use crate::pattern::{Symbol, Word};

/// Classic unit-cost edit distance (insertions, deletions, substitutions).
pub fn edit_distance(u: &[Symbol], v: &[Symbol]) -> usize {
    if u.is_empty() {
        return v.len();
    }
    if v.is_empty() {
        return u.len();
    }
    let mut prev: Vec<usize> = (0..=v.len()).collect();
    let mut cur = vec![0usize; v.len() + 1];
    for (i, &uc) in u.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &vc) in v.iter().enumerate() {
            let cost = usize::from(uc != vc);
            cur[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[v.len()]
}

/// One edit operation, annotated with the source position it applies to.
///
/// `Keep`, `Delete` and `Substitute` consume source position `pos` (1-based).
/// `Insert` places a symbol after `pos` consumed source symbols, so `pos = 0`
/// inserts in front of the word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EditOp {
    Keep { pos: usize },
    Delete { pos: usize },
    Substitute { pos: usize, sym: Symbol },
    Insert { pos: usize, sym: Symbol },
}

impl EditOp {
    pub fn cost(&self) -> usize {
        match self {
            EditOp::Keep { .. } => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("op consumes position {pos} but the source has only {len} symbols")]
    OutOfRange { pos: usize, len: usize },
    #[error("op at position {found} does not follow canonical order (expected {expected})")]
    OutOfOrder { expected: usize, found: usize },
}

/// An ordered list of edit operations, left to right by source position.
///
/// Consuming ops cover a prefix of the source; any unconsumed suffix is kept
/// unchanged when the script is applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditScript {
    ops: Vec<EditOp>,
}

impl EditScript {
    pub fn new(ops: Vec<EditOp>) -> EditScript {
        EditScript { ops }
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    /// Number of cost-1 operations (everything except `Keep`).
    pub fn cost(&self) -> usize {
        self.ops.iter().map(EditOp::cost).sum()
    }

    /// Applies the script to `u`, validating the position annotations.
    pub fn apply(&self, u: &[Symbol]) -> Result<Word, ScriptError> {
        let mut out = Word::new();
        let mut consumed = 0usize;
        for op in &self.ops {
            match *op {
                EditOp::Keep { pos } | EditOp::Delete { pos } | EditOp::Substitute { pos, .. } => {
                    if consumed >= u.len() {
                        return Err(ScriptError::OutOfRange {
                            pos,
                            len: u.len(),
                        });
                    }
                    if pos != consumed + 1 {
                        return Err(ScriptError::OutOfOrder {
                            expected: consumed + 1,
                            found: pos,
                        });
                    }
                    match *op {
                        EditOp::Keep { .. } => out.push(u[consumed]),
                        EditOp::Substitute { sym, .. } => out.push(sym),
                        _ => {}
                    }
                    consumed += 1;
                }
                EditOp::Insert { pos, sym } => {
                    if pos != consumed {
                        return Err(ScriptError::OutOfOrder {
                            expected: consumed,
                            found: pos,
                        });
                    }
                    out.push(sym);
                }
            }
        }
        out.extend_from(&u[consumed..]);
        Ok(out)
    }
}

/// Edit distance together with a canonical minimal script from `u` to `v`.
///
/// Ties resolve as keep, then delete, substitute, insert, which makes the
/// returned script deterministic.
pub fn align(u: &[Symbol], v: &[Symbol]) -> (usize, EditScript) {
    let rows = u.len() + 1;
    let cols = v.len() + 1;
    let mut d = vec![0usize; rows * cols];
    for j in 0..cols {
        d[j] = j;
    }
    for i in 1..rows {
        d[i * cols] = i;
        for j in 1..cols {
            let cost = usize::from(u[i - 1] != v[j - 1]);
            d[i * cols + j] = (d[(i - 1) * cols + j - 1] + cost)
                .min(d[(i - 1) * cols + j] + 1)
                .min(d[i * cols + j - 1] + 1);
        }
    }
    let mut ops = Vec::new();
    let (mut i, mut j) = (u.len(), v.len());
    while i > 0 || j > 0 {
        let cur = d[i * cols + j];
        if i > 0 && j > 0 && u[i - 1] == v[j - 1] && d[(i - 1) * cols + j - 1] == cur {
            ops.push(EditOp::Keep { pos: i });
            i -= 1;
            j -= 1;
        } else if i > 0 && d[(i - 1) * cols + j] + 1 == cur {
            ops.push(EditOp::Delete { pos: i });
            i -= 1;
        } else if i > 0 && j > 0 && d[(i - 1) * cols + j - 1] + 1 == cur {
            ops.push(EditOp::Substitute {
                pos: i,
                sym: v[j - 1],
            });
            i -= 1;
            j -= 1;
        } else {
            debug_assert!(j > 0 && d[i * cols + j - 1] + 1 == cur);
            ops.push(EditOp::Insert {
                pos: i,
                sym: v[j - 1],
            });
            j -= 1;
        }
    }
    ops.reverse();
    (d[u.len() * cols + v.len()], EditScript::new(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Word;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from_text(s)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(edit_distance(&w("abc"), &w("abc")), 0);
        assert_eq!(edit_distance(&w("kitten"), &w("sitting")), 3);
        assert_eq!(edit_distance(&w("aaa"), &w("bbb")), 3);
        assert_eq!(edit_distance(&w(""), &w("ab")), 2);
        assert_eq!(edit_distance(&w("ab"), &w("")), 2);
    }

    #[test]
    fn apply_examples() {
        let s = EditScript::new(vec![EditOp::Keep { pos: 1 }, EditOp::Keep { pos: 2 }]);
        assert_eq!(s.apply(&w("ab")).unwrap(), w("ab"));

        let c = Symbol::from_char('c');
        let s = EditScript::new(vec![
            EditOp::Substitute { pos: 1, sym: c },
            EditOp::Keep { pos: 2 },
        ]);
        assert_eq!(s.apply(&w("ab")).unwrap(), w("cb"));

        let b = Symbol::from_char('b');
        let s = EditScript::new(vec![EditOp::Insert { pos: 0, sym: b }, EditOp::Keep { pos: 1 }]);
        assert_eq!(s.apply(&w("a")).unwrap(), w("ba"));
    }

    #[test]
    fn apply_out_of_range() {
        let s = EditScript::new(vec![EditOp::Keep { pos: 1 }, EditOp::Delete { pos: 2 }]);
        assert_eq!(
            s.apply(&w("a")),
            Err(ScriptError::OutOfRange { pos: 2, len: 1 })
        );
    }

    #[test]
    fn align_reproduces_target() {
        let (d, s) = align(&w("kitten"), &w("sitting"));
        assert_eq!(d, 3);
        assert_eq!(s.cost(), 3);
        assert_eq!(s.apply(&w("kitten")).unwrap(), w("sitting"));
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u32..4, 0..=max)
            .prop_map(|v| Word::from_syms(v.into_iter().map(Symbol).collect()))
    }

    // random valid script over u: consuming ops for a prefix, inserts anywhere
    fn arb_script(u: Word) -> impl Strategy<Value = (Word, EditScript)> {
        let len = u.len();
        proptest::collection::vec((0u8..5, 0u32..4), 0..=2 * len + 4).prop_map(move |choices| {
            let mut ops = Vec::new();
            let mut consumed = 0usize;
            for (kind, sym) in choices {
                match kind {
                    0..=2 if consumed < len => {
                        let pos = consumed + 1;
                        ops.push(match kind {
                            0 => EditOp::Keep { pos },
                            1 => EditOp::Delete { pos },
                            _ => EditOp::Substitute {
                                pos,
                                sym: Symbol(sym),
                            },
                        });
                        consumed += 1;
                    }
                    _ => ops.push(EditOp::Insert {
                        pos: consumed,
                        sym: Symbol(sym),
                    }),
                }
            }
            (u.clone(), EditScript::new(ops))
        })
    }

    proptest! {
        #[test]
        fn distance_is_symmetric(u in arb_word(24), v in arb_word(24)) {
            prop_assert_eq!(edit_distance(&u, &v), edit_distance(&v, &u));
        }

        #[test]
        fn distance_bounds(u in arb_word(24), v in arb_word(24)) {
            let d = edit_distance(&u, &v);
            let lo = u.len().abs_diff(v.len());
            let hi = u.len().max(v.len());
            prop_assert!(d >= lo && d <= hi);
            prop_assert_eq!(d == 0, u == v);
        }

        #[test]
        fn triangle_inequality(u in arb_word(16), v in arb_word(16), t in arb_word(16)) {
            let uv = edit_distance(&u, &v);
            let vt = edit_distance(&v, &t);
            let ut = edit_distance(&u, &t);
            prop_assert!(ut <= uv + vt);
        }

        #[test]
        fn script_cost_dominates_distance((u, s) in arb_word(16).prop_flat_map(arb_script)) {
            let out = s.apply(&u).unwrap();
            prop_assert!(s.cost() >= edit_distance(&u, &out));
        }

        #[test]
        fn align_is_optimal_and_applies(u in arb_word(20), v in arb_word(20)) {
            let (d, s) = align(&u, &v);
            prop_assert_eq!(d, edit_distance(&u, &v));
            prop_assert_eq!(s.cost(), d);
            prop_assert_eq!(s.apply(&u).unwrap(), v);
        }
    }
}
