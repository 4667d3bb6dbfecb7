//! Single-pattern matching with a failure-function automaton.
//!
//! The automaton is the standard KMP construction compiled into a dense
//! transition table over the pattern's own alphabet (every letter outside it
//! sends any state back to 0). Occurrence counting resets the state after
//! each accept, which makes the count greedy leftmost and therefore equal to
//! the maximum number of pairwise non-overlapping occurrences.

use std::collections::HashMap;
use std::hash::Hash;

/// Compiled matcher for one fixed pattern over letters `L`.
#[derive(Debug, Clone)]
pub struct Matcher<L> {
    len: usize,
    alphabet: HashMap<L, usize>,
    // (len + 1) x (alphabet size) next-state table.
    table: Vec<u32>,
    sigma: usize,
}

impl<L: Copy + Eq + Hash> Matcher<L> {
    pub fn new(pattern: &[L]) -> Self {
        assert!(!pattern.is_empty(), "pattern must be nonempty");
        let mut alphabet: HashMap<L, usize> = HashMap::new();
        for &ch in pattern {
            let next = alphabet.len();
            alphabet.entry(ch).or_insert(next);
        }
        let sigma = alphabet.len();
        let m = pattern.len();
        let pat: Vec<usize> = pattern.iter().map(|ch| alphabet[ch]).collect();

        // Longest proper prefix of pattern[..q] that is also a suffix.
        let mut fail = vec![0usize; m];
        let mut k = 0usize;
        for q in 1..m {
            while k > 0 && pat[k] != pat[q] {
                k = fail[k - 1];
            }
            if pat[k] == pat[q] {
                k += 1;
            }
            fail[q] = k;
        }

        let mut table = vec![0u32; (m + 1) * sigma];
        #[allow(clippy::needless_range_loop)]
        for c in 0..sigma {
            table[c] = u32::from(pat[0] == c);
        }
        for q in 1..=m {
            for c in 0..sigma {
                table[q * sigma + c] = if q < m && pat[q] == c {
                    (q + 1) as u32
                } else {
                    table[fail[q - 1] * sigma + c]
                };
            }
        }
        Matcher {
            len: m,
            alphabet,
            table,
            sigma,
        }
    }

    /// Number of automaton states (`pattern length + 1`).
    pub fn state_count(&self) -> usize {
        self.len + 1
    }

    pub fn pattern_len(&self) -> usize {
        self.len
    }

    /// Advances one letter; on a full match the state resets to 0 and the
    /// accept flag is set (non-overlapping counting).
    #[inline]
    pub fn step(&self, state: usize, letter: L) -> (usize, bool) {
        let next = match self.alphabet.get(&letter) {
            Some(&c) => self.table[state * self.sigma + c] as usize,
            None => 0,
        };
        if next == self.len {
            (0, true)
        } else {
            (next, false)
        }
    }

    /// Maximum number of pairwise non-overlapping occurrences in `text`.
    pub fn count_nonoverlapping(&self, text: &[L]) -> usize {
        let mut state = 0usize;
        let mut count = 0usize;
        for &ch in text {
            let (next, accepted) = self.step(state, ch);
            state = next;
            if accepted {
                count += 1;
            }
        }
        count
    }
}

/// Maximum number of pairwise non-overlapping occurrences of `pattern` in
/// `text`, greedy left to right.
pub fn count_nonoverlap<L: Copy + Eq + Hash>(text: &[L], pattern: &[L]) -> usize {
    assert!(!pattern.is_empty(), "pattern must be nonempty");
    Matcher::new(pattern).count_nonoverlapping(text)
}

/// Brute-force reference: scan left to right, restart after each literal
/// slice match. Used as the independent occurrence-counting oracle in tests.
pub fn count_nonoverlap_naive<L: PartialEq>(text: &[L], pattern: &[L]) -> usize {
    assert!(!pattern.is_empty());
    let mut count = 0usize;
    let mut i = 0usize;
    while i + pattern.len() <= text.len() {
        if text[i..i + pattern.len()] == *pattern {
            count += 1;
            i += pattern.len();
        } else {
            i += 1;
        }
    }
    count
}
