//! Constant-time longest-common-extension queries between suffixes of two
//! words, built once from a suffix array over their separated concatenation.

use thiserror::Error;

use crate::pattern::{Symbol, Word};

/// Separator placed between the two words; reserved, occurs nowhere else.
const GUARD: Symbol = Symbol(u32::MAX - 3);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LcpError {
    #[error("input contains the reserved lcp separator symbol")]
    SeparatorCollision,
    #[error("lce position ({i}, {j}) out of range for lengths ({beta_len}, {w_len})")]
    OutOfRange {
        i: usize,
        j: usize,
        beta_len: usize,
        w_len: usize,
    },
}

/// Longest-common-extension index over `beta · guard · w`.
pub struct LcpIndex {
    concat: Vec<Symbol>,
    rank: Vec<u32>,
    adjacent_lcp: Vec<u32>,
    range_min: SparseTable,
    beta_len: usize,
    w_len: usize,
}

impl LcpIndex {
    /// Builds the index; `O(N log N)` with `N = |beta| + |w| + 1`.
    pub fn build(beta: &Word, w: &Word) -> Result<LcpIndex, LcpError> {
        if beta.contains(&GUARD) || w.contains(&GUARD) {
            return Err(LcpError::SeparatorCollision);
        }
        let mut concat = Vec::with_capacity(beta.len() + w.len() + 1);
        concat.extend_from_slice(beta);
        concat.push(GUARD);
        concat.extend_from_slice(w);

        let sa = suffix_array(&concat);
        let mut rank = vec![0u32; concat.len()];
        for (r, &s) in sa.iter().enumerate() {
            rank[s as usize] = r as u32;
        }
        let adjacent_lcp = kasai(&concat, &sa, &rank);
        let range_min = SparseTable::new(&adjacent_lcp);
        Ok(LcpIndex {
            concat,
            rank,
            adjacent_lcp,
            range_min,
            beta_len: beta.len(),
            w_len: w.len(),
        })
    }

    pub fn beta_len(&self) -> usize {
        self.beta_len
    }

    pub fn w_len(&self) -> usize {
        self.w_len
    }

    /// Length of the longest common prefix of `beta[i..]` and `w[j..]`,
    /// 1-based. One-past-end positions are allowed and yield 0.
    pub fn lce(&self, i: usize, j: usize) -> Result<usize, LcpError> {
        if i == 0 || j == 0 || i > self.beta_len + 1 || j > self.w_len + 1 {
            return Err(LcpError::OutOfRange {
                i,
                j,
                beta_len: self.beta_len,
                w_len: self.w_len,
            });
        }
        if i == self.beta_len + 1 || j == self.w_len + 1 {
            return Ok(0);
        }
        let a = self.rank[i - 1] as usize;
        let b = self.rank[self.beta_len + 1 + (j - 1)] as usize;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // The guard symbol is unique, so the match cannot run past either word.
        Ok(self.range_min.min(lo + 1, hi) as usize)
    }

    /// Suffix start positions in lexicographic order (for inspection/tests).
    pub fn suffix_order(&self) -> Vec<usize> {
        let mut sa = vec![0usize; self.concat.len()];
        for (pos, &r) in self.rank.iter().enumerate() {
            sa[r as usize] = pos;
        }
        sa
    }

    pub fn adjacent_lcp(&self) -> &[u32] {
        &self.adjacent_lcp
    }
}

/// Prefix-doubling suffix array over an arbitrary `u32` alphabet.
fn suffix_array(s: &[Symbol]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<u32> = (0..n as u32).collect();
    // initial ranks by symbol code
    sa.sort_unstable_by_key(|&i| s[i as usize].0);
    let mut rank = vec![0u32; n];
    let mut r = 0u32;
    for idx in 1..n {
        if s[sa[idx] as usize] != s[sa[idx - 1] as usize] {
            r += 1;
        }
        rank[sa[idx] as usize] = r;
    }
    let mut tmp = vec![0u32; n];
    let mut k = 1usize;
    while k < n && (r as usize) < n - 1 {
        let key = |i: u32| -> u64 {
            let first = rank[i as usize] as u64;
            let second = if (i as usize) + k < n {
                rank[i as usize + k] as u64 + 1
            } else {
                0
            };
            (first << 32) | second
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 0;
        r = 0;
        for idx in 1..n {
            if key(sa[idx]) != key(sa[idx - 1]) {
                r += 1;
            }
            tmp[sa[idx] as usize] = r;
        }
        std::mem::swap(&mut rank, &mut tmp);
        k *= 2;
    }
    sa
}

/// Kasai's algorithm; `lcp[r]` is the lcp of the suffixes ranked `r-1` and `r`.
fn kasai(s: &[Symbol], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut k = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            k = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + k < n && j + k < n && s[i + k] == s[j + k] {
            k += 1;
        }
        lcp[r] = k as u32;
        k = k.saturating_sub(1);
    }
    lcp
}

/// Doubling sparse table answering range minima in constant time.
struct SparseTable {
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    fn new(values: &[u32]) -> SparseTable {
        let n = values.len();
        let mut levels = vec![values.to_vec()];
        let mut span = 1usize;
        while 2 * span <= n {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..=n - 2 * span)
                .map(|i| prev[i].min(prev[i + span]))
                .collect();
            levels.push(next);
            span *= 2;
        }
        SparseTable { levels }
    }

    /// Minimum over the inclusive index range `lo..=hi`.
    fn min(&self, lo: usize, hi: usize) -> u32 {
        debug_assert!(lo <= hi && hi < self.levels[0].len());
        let len = hi - lo + 1;
        let lvl = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let span = 1usize << lvl;
        self.levels[lvl][lo].min(self.levels[lvl][hi + 1 - span])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from_text(s)
    }

    fn naive_lce(beta: &Word, word: &Word, i: usize, j: usize) -> usize {
        beta[i - 1..]
            .iter()
            .zip(word[j - 1..].iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    #[test]
    fn lce_examples() {
        let ix = LcpIndex::build(&w("ab"), &w("ab")).unwrap();
        assert_eq!(ix.lce(1, 1).unwrap(), 2);

        let ix = LcpIndex::build(&w("abab"), &w("abba")).unwrap();
        assert_eq!(ix.lce(1, 1).unwrap(), 2);

        let ix = LcpIndex::build(&w("aaa"), &w("aab")).unwrap();
        assert_eq!(ix.lce(1, 1).unwrap(), 2);

        let ix = LcpIndex::build(&w("ab"), &w("ba")).unwrap();
        assert_eq!(ix.lce(1, 2).unwrap(), 1);
    }

    #[test]
    fn one_past_end_is_zero_and_beyond_errors() {
        let ix = LcpIndex::build(&w("ab"), &w("xab")).unwrap();
        assert_eq!(ix.lce(3, 1).unwrap(), 0);
        assert_eq!(ix.lce(1, 4).unwrap(), 0);
        assert!(ix.lce(4, 1).is_err());
        assert!(ix.lce(1, 5).is_err());
        assert!(ix.lce(0, 1).is_err());

        // empty w: position 1 is one-past-end and allowed, position 2 is not
        let ix = LcpIndex::build(&w("a"), &w("")).unwrap();
        assert_eq!(ix.lce(1, 1).unwrap(), 0);
        assert!(ix.lce(1, 2).is_err());
    }

    #[test]
    fn separator_collision_detected() {
        let mut bad = Word::new();
        bad.push(GUARD);
        match LcpIndex::build(&bad, &w("a")) {
            Err(LcpError::SeparatorCollision) => {}
            _ => panic!("expected separator collision"),
        }
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u32..3, 0..=max)
            .prop_map(|v| Word::from_syms(v.into_iter().map(Symbol).collect()))
    }

    #[test]
    fn index_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<LcpIndex>();
    }

    proptest! {
        #[test]
        fn matches_naive_scan(beta in arb_word(200), word in arb_word(200)) {
            let ix = LcpIndex::build(&beta, &word).unwrap();
            // structural invariants of the index itself
            let order = ix.suffix_order();
            let lcp = ix.adjacent_lcp();
            for r in 1..order.len() {
                let a = &ix.concat[order[r - 1]..];
                let b = &ix.concat[order[r]..];
                prop_assert!(a < b, "suffixes out of order at rank {}", r);
                let naive = a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count();
                prop_assert_eq!(lcp[r] as usize, naive);
            }
            for i in 1..=beta.len() + 1 {
                for j in 1..=word.len() + 1 {
                    let got = ix.lce(i, j).unwrap();
                    let want = if i > beta.len() || j > word.len() {
                        0
                    } else {
                        naive_lce(&beta, &word, i, j)
                    };
                    prop_assert_eq!(got, want, "lce({}, {})", i, j);
                    prop_assert!(got <= (beta.len() + 1 - i).min(word.len() + 1 - j));
                    let zero = i > beta.len() || j > word.len() || beta[i - 1] != word[j - 1];
                    prop_assert_eq!(got == 0, zero);
                }
            }
        }
    }
}
