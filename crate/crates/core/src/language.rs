//! Finite S-languages.
//!
//! Words are stored packed: each S-letter is a bit mask over the language's
//! sorted alphabet. Because the alphabet is sorted by name, comparing masks
//! lowest-bit-first gives the same order as comparing sorted letter lists,
//! so the packed order agrees with `Ord` on [`SWord`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, ParikhVector, SLetter, SWord};

pub(crate) type Mask = u64;

/// Order of two S-letter masks as sorted letter lists.
pub(crate) fn cmp_mask(mut x: Mask, mut y: Mask) -> Ordering {
    loop {
        if x == y {
            return Ordering::Equal;
        }
        if x == 0 {
            return Ordering::Less;
        }
        if y == 0 {
            return Ordering::Greater;
        }
        let (lx, ly) = (x.trailing_zeros(), y.trailing_zeros());
        if lx != ly {
            return lx.cmp(&ly);
        }
        x &= x - 1;
        y &= y - 1;
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct Packed(pub(crate) Vec<Mask>);

impl Ord for Packed {
    fn cmp(&self, other: &Self) -> Ordering {
        for (&x, &y) in self.0.iter().zip(&other.0) {
            match cmp_mask(x, y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Packed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Projection of a packed word onto `keep`.
pub(crate) fn project_masks(w: &[Mask], keep: Mask) -> Packed {
    Packed(w.iter().map(|&m| m & keep).filter(|&m| m != 0).collect())
}

/// Bit translation from one alphabet's indices into a superset's.
pub(crate) struct Remap(Vec<u32>);

impl Remap {
    pub(crate) fn new(from: &Alphabet, into: &Alphabet) -> Remap {
        Remap(
            from.letters()
                .iter()
                .map(|l| into.index_of(l).expect("target alphabet covers source") as u32)
                .collect(),
        )
    }

    pub(crate) fn mask(&self, mut m: Mask) -> Mask {
        let mut out = 0;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << self.0[i];
            m &= m - 1;
        }
        out
    }

    pub(crate) fn word(&self, w: &[Mask]) -> Vec<Mask> {
        w.iter().map(|&m| self.mask(m)).collect()
    }
}

impl Alphabet {
    pub(crate) fn full_mask(&self) -> Mask {
        if self.len() == 64 {
            !0
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Mask of the letters of `sub` that belong to this alphabet.
    pub(crate) fn mask_of(&self, sub: &Alphabet) -> Mask {
        sub.letters()
            .iter()
            .filter_map(|l| self.index_of(l))
            .fold(0, |m, i| m | (1 << i))
    }

    pub(crate) fn pack(&self, w: &SWord) -> Result<Packed> {
        let mut out = Vec::with_capacity(w.len());
        for s in w.sletters() {
            let mut m = 0;
            for l in s.letters() {
                let i = self
                    .index_of(l)
                    .ok_or_else(|| Error::LetterOutsideAlphabet(l.to_string()))?;
                m |= 1 << i;
            }
            out.push(m);
        }
        Ok(Packed(out))
    }

    pub(crate) fn unpack(&self, w: &[Mask]) -> SWord {
        let letters = self.letters();
        SWord::new(
            w.iter()
                .map(|&m| {
                    let mut v = Vec::with_capacity(m.count_ones() as usize);
                    let mut m = m;
                    while m != 0 {
                        v.push(letters[m.trailing_zeros() as usize].clone());
                        m &= m - 1;
                    }
                    SLetter::from_sorted(v)
                })
                .collect(),
        )
    }
}

/// A finite set of S-words over one alphabet, deduplicated and kept in
/// canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SLanguage {
    alphabet: Alphabet,
    words: Vec<Packed>,
}

impl SLanguage {
    pub fn new(alphabet: Alphabet, words: impl IntoIterator<Item = SWord>) -> Result<Self> {
        let words = words
            .into_iter()
            .map(|w| alphabet.pack(&w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_packed(alphabet, words))
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        SLanguage {
            alphabet,
            words: Vec::new(),
        }
    }

    /// The one-word language over the word's own letters.
    pub fn singleton(w: SWord) -> Result<Self> {
        let alphabet = Alphabet::new(w.letters())?;
        SLanguage::new(alphabet, [w])
    }

    pub(crate) fn from_packed(alphabet: Alphabet, mut words: Vec<Packed>) -> Self {
        words.sort_unstable();
        words.dedup();
        SLanguage { alphabet, words }
    }

    /// Caller guarantees the words are sorted and unique.
    pub(crate) fn from_sorted_packed(alphabet: Alphabet, words: Vec<Packed>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        SLanguage { alphabet, words }
    }

    pub(crate) fn packed(&self) -> &[Packed] {
        &self.words
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in canonical order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = SWord> + '_ {
        self.words.iter().map(|p| self.alphabet.unpack(&p.0))
    }

    pub fn words(&self) -> Vec<SWord> {
        self.iter().collect()
    }

    pub fn contains(&self, w: &SWord) -> bool {
        match self.alphabet.pack(w) {
            Ok(p) => self.words.binary_search(&p).is_ok(),
            Err(_) => false,
        }
    }

    /// The Parikh vector shared by every word.
    pub fn uniform_parikh(&self) -> Result<ParikhVector> {
        let first = self.words.first().ok_or(Error::EmptyLanguage)?;
        let counts = packed_counts(&first.0, self.alphabet.len());
        if self
            .words
            .iter()
            .any(|w| packed_counts(&w.0, self.alphabet.len()) != counts)
        {
            return Err(Error::MixedParikh);
        }
        ParikhVector::new(self.alphabet.clone(), counts)
    }

    /// Whether every word has the Parikh vector `bound` (which must be over
    /// this language's alphabet).
    pub fn has_profile(&self, bound: &ParikhVector) -> bool {
        bound.alphabet() == &self.alphabet
            && self
                .words
                .iter()
                .all(|w| packed_counts(&w.0, self.alphabet.len()) == bound.counts())
    }

    pub fn intersection(&self, other: &SLanguage) -> Result<SLanguage> {
        self.same_alphabet(other)?;
        let other: BTreeSet<&Packed> = other.words.iter().collect();
        let words = self.words.iter().filter(|w| other.contains(w)).cloned().collect();
        Ok(Self::from_sorted_packed(self.alphabet.clone(), words))
    }

    pub fn union(&self, other: &SLanguage) -> Result<SLanguage> {
        self.same_alphabet(other)?;
        let words = self.words.iter().chain(&other.words).cloned().collect();
        Ok(Self::from_packed(self.alphabet.clone(), words))
    }

    fn same_alphabet(&self, other: &SLanguage) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::ProfileMismatch(format!(
                "alphabets {} and {} differ",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    pub fn filter(&self, mut keep: impl FnMut(&SWord) -> bool) -> SLanguage {
        let words = self
            .words
            .iter()
            .filter(|p| keep(&self.alphabet.unpack(&p.0)))
            .cloned()
            .collect();
        Self::from_sorted_packed(self.alphabet.clone(), words)
    }

    /// Projection of every word onto `keep`, deduplicated. The result's
    /// alphabet is `keep` restricted to this language's alphabet.
    pub fn project(&self, keep: &Alphabet) -> SLanguage {
        let target = self.alphabet.intersection(keep);
        let mask = self.alphabet.mask_of(&target);
        // Dropping letters from a sorted alphabet keeps the remaining
        // letters in order, so compressing bits is a valid renumbering.
        let words = self
            .words
            .iter()
            .map(|w| {
                let p = project_masks(&w.0, mask);
                Packed(p.0.into_iter().map(|m| compress(m, mask)).collect())
            })
            .collect();
        Self::from_packed(target, words)
    }

    /// Reinterprets the words over a larger alphabet.
    pub fn widen(&self, alphabet: &Alphabet) -> Result<SLanguage> {
        if !self.alphabet.is_subset(alphabet) {
            return Err(Error::ProfileMismatch(format!(
                "{} is not contained in {}",
                self.alphabet, alphabet
            )));
        }
        let remap = Remap::new(&self.alphabet, alphabet);
        let words = self.words.iter().map(|w| Packed(remap.word(&w.0))).collect();
        Ok(Self::from_packed(alphabet.clone(), words))
    }

    /// Parses a language file: one S-word per line, `#` starts a comment,
    /// blank lines are ignored and `ε` denotes the empty word. The alphabet
    /// is the set of letters used.
    pub fn parse(text: &str) -> Result<SLanguage> {
        let words = parse_lines(text)?;
        let alphabet = Alphabet::new(words.iter().flat_map(|w| w.letters()))?;
        SLanguage::new(alphabet, words)
    }

    /// Like [`SLanguage::parse`] with a declared alphabet.
    pub fn parse_with_alphabet(text: &str, alphabet: Alphabet) -> Result<SLanguage> {
        let words = parse_lines(text)?;
        SLanguage::new(alphabet, words)
    }

    /// One canonical word per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in self.iter() {
            if w.is_empty() {
                out.push('ε');
            } else {
                out.push_str(&w.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn packed_counts(w: &[Mask], n: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n];
    for &m in w {
        let mut m = m;
        while m != 0 {
            counts[m.trailing_zeros() as usize] += 1;
            m &= m - 1;
        }
    }
    counts
}

/// Packs the bits of `m` selected by `mask` into the low bits.
fn compress(m: Mask, mask: Mask) -> Mask {
    let mut out = 0;
    let mut bit = 0;
    let mut sel = mask;
    while sel != 0 {
        let i = sel.trailing_zeros();
        if m & (1 << i) != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        sel &= sel - 1;
    }
    out
}

fn parse_lines(text: &str) -> Result<Vec<SWord>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "ε" {
            out.push(SWord::empty());
            continue;
        }
        let w = line.parse::<SWord>().map_err(|e| Error::Parse {
            line: n + 1,
            message: e.to_string(),
        })?;
        out.push(w);
    }
    Ok(out)
}

impl fmt::Display for SLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if w.is_empty() {
                f.write_str("ε")?;
            } else {
                write!(f, "{w}")?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SLanguage{} {}", self.alphabet, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SWord {
        s.parse().unwrap()
    }

    fn lang(words: &[&str]) -> SLanguage {
        SLanguage::parse(&words.join("\n")).unwrap()
    }

    #[test]
    fn mask_order_matches_word_order() {
        let words = ["a a", "a {a,b}", "a b", "{a,b} a", "{a,b}", "b", "b a", "{a,c}", "c"];
        let l = lang(&words);
        let mut sorted: Vec<SWord> = words.iter().map(|s| w(s)).collect();
        sorted.sort();
        assert_eq!(l.words(), sorted);
    }

    #[test]
    fn dedups_and_contains() {
        let l = lang(&["a b", "b a", "a b", "{b,a}"]);
        assert_eq!(l.len(), 3);
        assert!(l.contains(&w("{a,b}")));
        assert!(!l.contains(&w("a a")));
        assert!(!l.contains(&w("z")));
    }

    #[test]
    fn file_format() {
        let text = "# header\n\na b   # trailing comment\n{b,a}\nε\n";
        let l = SLanguage::parse(text).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.to_text(), "ε\na b\n{a,b}\n");
        assert_eq!(SLanguage::parse(&l.to_text()).unwrap(), l);
        let err = SLanguage::parse("a\n{b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn uniform_parikh() {
        let l = lang(&["a b", "{a,b}"]);
        assert_eq!(l.uniform_parikh().unwrap().counts(), &[1, 1]);
        assert_eq!(lang(&["a", "a a"]).uniform_parikh(), Err(Error::MixedParikh));
        assert_eq!(
            SLanguage::empty(Alphabet::parse("a").unwrap()).uniform_parikh(),
            Err(Error::EmptyLanguage)
        );
    }

    #[test]
    fn project_and_widen() {
        let l = lang(&["{a,b} c", "a {b,c}", "c a b", "{a,b,c}"]);
        let p = l.project(&Alphabet::parse("a c").unwrap());
        assert_eq!(p.words(), vec![w("a c"), w("{a,c}"), w("c a")]);
        let wide = p.widen(&Alphabet::parse("a b c").unwrap()).unwrap();
        assert_eq!(wide.words(), p.words());
        assert_eq!(wide.alphabet().len(), 3);
    }

    #[test]
    fn set_operations() {
        let l1 = lang(&["a b", "b a"]);
        let l2 = lang(&["b a", "{a,b}"]);
        assert_eq!(l1.intersection(&l2).unwrap().words(), vec![w("b a")]);
        assert_eq!(l1.union(&l2).unwrap().len(), 3);
        assert!(l1.intersection(&lang(&["a c"])).is_err());
    }
}
