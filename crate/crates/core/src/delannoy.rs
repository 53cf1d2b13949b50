//! Delannoy numbers and Delannoy languages.
//!
//! `L(p₁,…,pₙ)` is the set of all S-words with Parikh vector `(p₁,…,pₙ)`:
//! every n-ary situation among items with that many points. Its size obeys
//!
//! ```text
//! D(p) = Σ D(p')   over p' ≠ p with p'ᵢ ∈ {pᵢ, pᵢ − 1} (and p'ᵢ = 0 when pᵢ = 0)
//! D(0,…,0) = 1
//! ```
//!
//! Counting is generic over the integer type; [`delannoy_number`] and
//! [`delannoy_number_n`] use arbitrary precision.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_traits::{CheckedAdd, One, Zero};

use crate::error::{Error, Result};
use crate::language::{cmp_mask, Mask, Packed, SLanguage};
use crate::word::{Alphabet, Letter, SLetter, SWord};
use crate::Count;

/// Integer types Delannoy counts can be computed in.
pub trait Counter: Zero + One + CheckedAdd + Clone {}

impl<T: Zero + One + CheckedAdd + Clone> Counter for T {}

/// The index `(p₁,…,pₙ)` of a Delannoy language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DelannoyIndex(Vec<u32>);

impl DelannoyIndex {
    pub fn new(p: Vec<u32>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::BoundMismatch("a Delannoy index needs at least one entry".into()));
        }
        Ok(DelannoyIndex(p))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: construction rejects the empty case.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }
}

impl fmt::Display for DelannoyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// The `(rows+1) × (cols+1)` Delannoy table, or `None` on overflow of `T`.
pub fn delannoy_table_in<T: Counter>(rows: usize, cols: usize) -> Option<Vec<Vec<T>>> {
    let mut table = vec![vec![T::one(); cols + 1]; rows + 1];
    for p in 1..=rows {
        for q in 1..=cols {
            let v = table[p][q - 1]
                .checked_add(&table[p - 1][q - 1])?
                .checked_add(&table[p - 1][q])?;
            table[p][q] = v;
        }
    }
    Some(table)
}

pub fn delannoy_number_in<T: Counter>(p: u32, q: u32) -> Option<T> {
    let (p, q) = (p.min(q) as usize, p.max(q) as usize);
    // Rolling rows over the shorter side.
    let mut row = vec![T::one(); p + 1];
    for _ in 1..=q {
        let mut diag = row[0].clone();
        for i in 1..=p {
            let up = row[i].clone();
            row[i] = up.checked_add(&diag)?.checked_add(&row[i - 1])?;
            diag = up;
        }
    }
    Some(row[p].clone())
}

/// D(p, q), exact.
pub fn delannoy_number(p: u32, q: u32) -> Count {
    delannoy_number_in(p, q).expect("arbitrary precision does not overflow")
}

pub fn delannoy_number_n_in<T: Counter>(p: &[u32]) -> Option<T> {
    fn go<T: Counter>(key: Vec<u32>, memo: &mut HashMap<Vec<u32>, T>) -> Option<T> {
        if let Some(v) = memo.get(&key) {
            return Some(v.clone());
        }
        let nonzero: Vec<usize> = (0..key.len()).filter(|&i| key[i] > 0).collect();
        if nonzero.len() <= 1 {
            return Some(T::one());
        }
        let mut total = T::zero();
        for sub in 1u64..(1 << nonzero.len()) {
            let mut pred = key.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if sub & (1 << bit) != 0 {
                    pred[i] -= 1;
                }
            }
            pred.sort_unstable();
            total = total.checked_add(&go(pred, memo)?)?;
        }
        memo.insert(key, total.clone());
        Some(total)
    }
    let mut key: Vec<u32> = p.to_vec();
    key.sort_unstable();
    go(key, &mut HashMap::new())
}

/// D(p₁,…,pₙ), exact.
pub fn delannoy_number_n(p: &DelannoyIndex) -> Count {
    delannoy_number_n_in(p.as_slice()).expect("arbitrary precision does not overflow")
}

thread_local! {
    static SHUFFLE_COUNTS: RefCell<Vec<Vec<u128>>> = const { RefCell::new(Vec::new()) };
}

/// D(r, s) saturated to `u128`: the size of the S-shuffle of two words of
/// lengths `r` and `s` over disjoint alphabets.
pub(crate) fn shuffle_count(r: usize, s: usize) -> u128 {
    let (r, s) = (r.min(s), r.max(s));
    if r == 0 {
        return 1;
    }
    SHUFFLE_COUNTS.with(|t| {
        let mut t = t.borrow_mut();
        if t.len() <= s || t[0].len() <= s {
            let n = (s + 1).max(t.len() * 2).max(16);
            let mut table = vec![vec![1u128; n]; n];
            for i in 1..n {
                for j in 1..n {
                    table[i][j] = table[i][j - 1]
                        .saturating_add(table[i - 1][j - 1])
                        .saturating_add(table[i - 1][j]);
                }
            }
            *t = table;
        }
        t[r][s]
    })
}

/// Nonempty submasks of `avail`, in canonical S-letter order.
pub(crate) fn ordered_submasks(avail: Mask) -> Vec<Mask> {
    let mut subs = Vec::with_capacity((1usize << avail.count_ones().min(20)) - 1);
    let mut s = avail;
    while s != 0 {
        subs.push(s);
        s = (s - 1) & avail;
    }
    subs.sort_unstable_by(|&a, &b| cmp_mask(a, b));
    subs
}

/// Calls `emit` with every packed word whose per-bit counts are `counts`,
/// in canonical order.
pub(crate) fn for_each_profile_word(counts: &mut [u32], emit: &mut dyn FnMut(&[Mask])) {
    fn go(counts: &mut [u32], prefix: &mut Vec<Mask>, emit: &mut dyn FnMut(&[Mask])) {
        let avail = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        if avail == 0 {
            emit(prefix);
            return;
        }
        for s in ordered_submasks(avail) {
            apply(counts, s, |c| c - 1);
            prefix.push(s);
            go(counts, prefix, emit);
            prefix.pop();
            apply(counts, s, |c| c + 1);
        }
    }
    go(counts, &mut Vec::new(), emit)
}

fn apply(counts: &mut [u32], mut s: Mask, f: impl Fn(u32) -> u32) {
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        counts[i] = f(counts[i]);
        s &= s - 1;
    }
}

/// All S-words over `letters` with Parikh vector `p` (`p[i]` occurrences of
/// `letters[i]`), refusing to enumerate more than `cap` words.
pub fn delannoy_language(p: &DelannoyIndex, letters: &[Letter], cap: usize) -> Result<SLanguage> {
    if letters.len() != p.len() {
        return Err(Error::BoundMismatch(format!(
            "{} letters for an index of length {}",
            letters.len(),
            p.len()
        )));
    }
    let alphabet = Alphabet::new(letters.iter().cloned())?;
    if alphabet.len() != letters.len() {
        return Err(Error::DuplicateItem("repeated letter in Delannoy alphabet".into()));
    }
    let size = delannoy_number_n(p);
    if size > Count::from(cap) {
        return Err(Error::cap(format!("L{p}"), &size, cap));
    }
    let mut counts = vec![0u32; alphabet.len()];
    for (l, &c) in letters.iter().zip(p.as_slice()) {
        counts[alphabet.index_of(l).expect("own letter")] = c;
    }
    let mut words = Vec::new();
    for_each_profile_word(&mut counts, &mut |w| words.push(Packed(w.to_vec())));
    Ok(SLanguage::from_sorted_packed(alphabet, words))
}

/// One step of a Delannoy path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    North,
    East,
    NorthEast,
}

impl PathStep {
    /// Single-character code: `N`, `E`, or `D` (diagonal).
    pub fn code(self) -> char {
        match self {
            PathStep::North => 'N',
            PathStep::East => 'E',
            PathStep::NorthEast => 'D',
        }
    }

    pub fn from_code(c: char) -> Option<PathStep> {
        match c {
            'N' => Some(PathStep::North),
            'E' => Some(PathStep::East),
            'D' => Some(PathStep::NorthEast),
            _ => None,
        }
    }
}

/// Reads a two-letter S-word as a Delannoy path: `north` alone is a north
/// step, `east` alone an east step, both together a diagonal step.
pub fn encode_path(w: &SWord, north: &Letter, east: &Letter) -> Result<Vec<PathStep>> {
    w.sletters()
        .iter()
        .map(|s| {
            if let Some(l) = s.letters().iter().find(|l| *l != north && *l != east) {
                return Err(Error::LetterOutsideAlphabet(l.to_string()));
            }
            Ok(match (s.contains(north), s.contains(east)) {
                (true, true) => PathStep::NorthEast,
                (true, false) => PathStep::North,
                _ => PathStep::East,
            })
        })
        .collect()
}

pub fn decode_path(steps: &[PathStep], north: &Letter, east: &Letter) -> SWord {
    SWord::new(
        steps
            .iter()
            .map(|s| match s {
                PathStep::North => SLetter::single(north.clone()),
                PathStep::East => SLetter::single(east.clone()),
                PathStep::NorthEast => {
                    SLetter::new([north.clone(), east.clone()]).expect("distinct letters")
                }
            })
            .collect(),
    )
}
