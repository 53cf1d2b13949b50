//! Letters, S-letters, S-words and Parikh vectors, with the canonical text
//! syntax:
//!
//! ```text
//! sword   := (sletter WS?)*
//! sletter := ident | '{' ident (',' ident)* '}'
//! ```
//!
//! Identifiers are maximal, so `aabb` is a single letter; write `a a b b`
//! for the four-letter word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Identity of one temporal item. Ordered lexicographically by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Result<Self> {
        if is_ident(name) {
            Ok(Letter(Arc::from(name)))
        } else {
            Err(Error::InvalidLetter(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Letter::new(s)
    }
}

/// A nonempty set of letters occurring at the same instant.
///
/// Members are kept sorted, so the derived ordering compares S-letters as
/// sorted letter sequences (a proper prefix sorts first).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SLetter(Vec<Letter>);

impl SLetter {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut v: Vec<Letter> = letters.into_iter().collect();
        v.sort();
        if v.is_empty() {
            return Err(Error::EmptySLetter { pos: 0 });
        }
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLetter {
                letter: w[0].to_string(),
            });
        }
        Ok(SLetter(v))
    }

    pub fn single(letter: Letter) -> Self {
        SLetter(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: construction rejects the empty case.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.0.binary_search(letter).is_ok()
    }

    /// Intersection with `keep`; `None` when nothing survives.
    pub fn restrict(&self, keep: &Alphabet) -> Option<SLetter> {
        let v: Vec<Letter> = self.0.iter().filter(|l| keep.contains(l)).cloned().collect();
        (!v.is_empty()).then_some(SLetter(v))
    }

    pub fn union(&self, other: &SLetter) -> SLetter {
        let set: BTreeSet<Letter> = self.0.iter().chain(other.0.iter()).cloned().collect();
        SLetter(set.into_iter().collect())
    }

    // Caller guarantees: sorted, unique, nonempty.
    pub(crate) fn from_sorted(v: Vec<Letter>) -> Self {
        debug_assert!(!v.is_empty());
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        SLetter(v)
    }
}

impl fmt::Display for SLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite sequence of S-letters: one complete situation on the timeline.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SWord(Vec<SLetter>);

impl SWord {
    pub fn new(sletters: Vec<SLetter>) -> Self {
        SWord(sletters)
    }

    pub fn empty() -> Self {
        SWord(Vec::new())
    }

    /// The word `x x ... x` with `n` occurrences.
    pub fn power(letter: &Letter, n: usize) -> Self {
        SWord(vec![SLetter::single(letter.clone()); n])
    }

    pub fn sletters(&self) -> &[SLetter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of S-letters, |f|.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Total number of letter occurrences, ‖f‖.
    pub fn weight(&self) -> usize {
        self.0.iter().map(SLetter::len).sum()
    }

    /// Occurrences of one letter, ‖f‖ₓ.
    pub fn count(&self, letter: &Letter) -> usize {
        self.0.iter().filter(|s| s.contains(letter)).count()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.0.iter().flat_map(|s| s.0.iter().cloned()).collect()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::from_set(self.letters())
    }

    pub fn concat(&self, other: &SWord) -> SWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        SWord(v)
    }

    /// Reads the word right to left (time reversal).
    pub fn mirror(&self) -> SWord {
        SWord(self.0.iter().rev().cloned().collect())
    }

    /// Applies a letter bijection. The mapping must cover every letter of
    /// the word and be injective on its domain.
    pub fn rename(&self, mapping: &BTreeMap<Letter, Letter>) -> Result<SWord> {
        let image: BTreeSet<&Letter> = mapping.values().collect();
        if image.len() != mapping.len() {
            return Err(Error::NotBijective("two letters share an image".into()));
        }
        let mut out = Vec::with_capacity(self.0.len());
        for s in &self.0 {
            let mut v = Vec::with_capacity(s.len());
            for l in &s.0 {
                match mapping.get(l) {
                    Some(t) => v.push(t.clone()),
                    None => {
                        return Err(Error::NotBijective(format!("`{l}` is not mapped")));
                    }
                }
            }
            v.sort();
            out.push(SLetter(v));
        }
        Ok(SWord(out))
    }

    /// Keeps only the letters of `keep`; emptied S-letters vanish.
    pub fn project(&self, keep: &Alphabet) -> SWord {
        SWord(self.0.iter().filter_map(|s| s.restrict(keep)).collect())
    }

    pub fn parikh(&self, alphabet: &Alphabet) -> Result<ParikhVector> {
        let mut counts = vec![0u32; alphabet.len()];
        for s in &self.0 {
            for l in &s.0 {
                let i = alphabet
                    .index_of(l)
                    .ok_or_else(|| Error::LetterOutsideAlphabet(l.to_string()))?;
                counts[i] += 1;
            }
        }
        Ok(ParikhVector {
            alphabet: alphabet.clone(),
            counts,
        })
    }
}

impl fmt::Display for SWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for SWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_sword(s)
    }
}

pub fn parse_sword(text: &str) -> Result<SWord> {
    Parser { src: text.as_bytes(), pos: 0 }.sword()
}

pub fn format_sword(w: &SWord) -> String {
    w.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn ident(&mut self) -> Result<Letter> {
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            Some(&c) => return Err(self.err(format!("unexpected `{}`", c as char))),
            None => return Err(self.err("unexpected end of input")),
        }
        while let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(Letter(Arc::from(name)))
    }

    fn sletter(&mut self) -> Result<SLetter> {
        if self.src[self.pos] != b'{' {
            return Ok(SLetter::single(self.ident()?));
        }
        let open = self.pos;
        self.pos += 1;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'}') {
            return Err(Error::EmptySLetter { pos: open });
        }
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            letters.push(self.ident()?);
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    break;
                }
                Some(_) => return Err(self.err("expected `,` or `}`")),
                None => return Err(self.err("unclosed `{`")),
            }
        }
        letters.sort();
        if let Some(w) = letters.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLetter {
                letter: w[0].to_string(),
            });
        }
        Ok(SLetter(letters))
    }

    fn sword(&mut self) -> Result<SWord> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.pos >= self.src.len() {
                return Ok(SWord(out));
            }
            out.push(self.sletter()?);
        }
    }
}

/// A finite, sorted set of letters (at most 64, the width of the packed
/// S-letter representation used by languages).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet(Vec<Letter>);

impl Alphabet {
    pub const MAX_LETTERS: usize = 64;

    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let set: BTreeSet<Letter> = letters.into_iter().collect();
        if set.len() > Self::MAX_LETTERS {
            return Err(Error::AlphabetTooLarge(set.len()));
        }
        Ok(Alphabet(set.into_iter().collect()))
    }

    /// Parses a list of letter names separated by commas or whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        let letters = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(Letter::new)
            .collect::<Result<Vec<_>>>()?;
        Alphabet::new(letters)
    }

    fn from_set(set: BTreeSet<Letter>) -> Self {
        Alphabet(set.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.0.binary_search(letter).is_ok()
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        self.0.binary_search(letter).ok()
    }

    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        Alphabet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        Alphabet(self.0.iter().filter(|l| other.contains(l)).cloned().collect())
    }

    pub fn difference(&self, other: &Alphabet) -> Alphabet {
        Alphabet(self.0.iter().filter(|l| !other.contains(l)).cloned().collect())
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.0.iter().all(|l| other.contains(l))
    }

    pub fn is_disjoint(&self, other: &Alphabet) -> bool {
        self.0.iter().all(|l| !other.contains(l))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Per-letter occurrence counts over a declared alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParikhVector {
    alphabet: Alphabet,
    counts: Vec<u32>,
}

impl ParikhVector {
    pub fn new(alphabet: Alphabet, counts: Vec<u32>) -> Result<Self> {
        if alphabet.len() != counts.len() {
            return Err(Error::BoundMismatch(format!(
                "{} counts for {} letters",
                counts.len(),
                alphabet.len()
            )));
        }
        Ok(ParikhVector { alphabet, counts })
    }

    /// Builds a vector from `(letter, count)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Letter, u32)>) -> Result<Self> {
        let map: BTreeMap<Letter, u32> = pairs.into_iter().collect();
        let alphabet = Alphabet::new(map.keys().cloned())?;
        Ok(ParikhVector {
            alphabet,
            counts: map.into_values().collect(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, letter: &Letter) -> Option<u32> {
        self.alphabet.index_of(letter).map(|i| self.counts[i])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Restriction to the letters of `keep` that this vector covers.
    pub fn restrict(&self, keep: &Alphabet) -> ParikhVector {
        let alphabet = self.alphabet.intersection(keep);
        let counts = alphabet
            .letters()
            .iter()
            .map(|l| self.get(l).expect("restricted letter"))
            .collect();
        ParikhVector { alphabet, counts }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, u32)> + '_ {
        self.alphabet.0.iter().zip(self.counts.iter().copied())
    }
}

/// Componentwise sum of two vectors over the same alphabet.
impl Add for &ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        assert_eq!(self.alphabet, rhs.alphabet, "Parikh vectors over different alphabets");
        ParikhVector {
            alphabet: self.alphabet.clone(),
            counts: self.counts.iter().zip(&rhs.counts).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alphabet, self)
    }
}
