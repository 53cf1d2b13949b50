//! Qualitative algebras over two items, encoded as S-words.
//!
//! An atom of an algebra whose items carry `p` and `q` points is one word of
//! `L(p,q)`. Composition is a join over three letters followed by a
//! projection on the outer pair, so tables are computed, not stored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::delannoy::{delannoy_language, encode_path, DelannoyIndex};
use crate::error::{Error, Result};
use crate::language::SLanguage;
use crate::ops::join_capped;
use crate::word::{Alphabet, Letter, ParikhVector, SWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    /// Two points.
    Point,
    /// A point, then an interval.
    PointInterval,
    /// An interval, then a point.
    IntervalPoint,
    /// Two intervals.
    Allen,
    /// Chains of `p` and `q` points; atoms are named by Delannoy path code.
    Chain(u32, u32),
}

const POINT: &[(&str, &str)] = &[("a b", "<"), ("{a,b}", "="), ("b a", ">")];

const POINT_INTERVAL: &[(&str, &str)] = &[
    ("a b b", "before"),
    ("{a,b} b", "starts"),
    ("b a b", "during"),
    ("b {a,b}", "finishes"),
    ("b b a", "after"),
];

const INTERVAL_POINT: &[(&str, &str)] = &[
    ("b a a", "before~"),
    ("{a,b} a", "starts~"),
    ("a b a", "during~"),
    ("a {a,b}", "finishes~"),
    ("a a b", "after~"),
];

const ALLEN: &[(&str, &str)] = &[
    ("a a b b", "<"),
    ("a {a,b} b", "m"),
    ("a b a b", "o"),
    ("{a,b} a b", "s"),
    ("a b {a,b}", "f~"),
    ("b a a b", "d"),
    ("{a,b} {a,b}", "="),
    ("a b b a", "d~"),
    ("b a {a,b}", "f"),
    ("{a,b} b a", "s~"),
    ("b a b a", "o~"),
    ("b {a,b} a", "m~"),
    ("b b a a", ">"),
];

/// Atom names and words over the standard letters `a`, `b`, in canonical
/// word order.
#[derive(Debug)]
struct AtomTable {
    names: Vec<String>,
    words: Vec<SWord>,
    by_name: HashMap<String, usize>,
    by_word: HashMap<SWord, usize>,
}

fn std_letters() -> (Letter, Letter) {
    (Letter::new("a").expect("valid"), Letter::new("b").expect("valid"))
}

impl AtomTable {
    fn build(alg: Algebra) -> AtomTable {
        let (p, q) = alg.profile();
        let (a, b) = std_letters();
        let idx = DelannoyIndex::new(vec![p, q]).expect("nonempty index");
        let lang = delannoy_language(&idx, &[a.clone(), b.clone()], usize::MAX).expect("two letters");
        let fixed = match alg {
            Algebra::Point => Some(POINT),
            Algebra::PointInterval => Some(POINT_INTERVAL),
            Algebra::IntervalPoint => Some(INTERVAL_POINT),
            Algebra::Allen => Some(ALLEN),
            Algebra::Chain(..) => None,
        };
        let named: HashMap<SWord, &str> = fixed
            .unwrap_or(&[])
            .iter()
            .map(|(w, n)| (w.parse().expect("atom word"), *n))
            .collect();
        let words = lang.words();
        let names: Vec<String> = words
            .iter()
            .map(|w| match fixed {
                Some(_) => named[w].to_string(),
                None => encode_path(w, &a, &b)
                    .expect("two-letter word")
                    .iter()
                    .map(|s| s.code())
                    .collect(),
            })
            .collect();
        AtomTable {
            by_name: names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            by_word: words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect(),
            names,
            words,
        }
    }
}

fn table(alg: Algebra) -> Arc<AtomTable> {
    static CACHE: OnceLock<Mutex<HashMap<Algebra, Arc<AtomTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("atom cache poisoned");
    guard
        .entry(alg)
        .or_insert_with(|| Arc::new(AtomTable::build(alg)))
        .clone()
}

impl Algebra {
    /// Point counts of the first and second item.
    pub fn profile(self) -> (u32, u32) {
        match self {
            Algebra::Point => (1, 1),
            Algebra::PointInterval => (1, 2),
            Algebra::IntervalPoint => (2, 1),
            Algebra::Allen => (2, 2),
            Algebra::Chain(p, q) => (p, q),
        }
    }

    /// The named algebra for a profile, falling back to a chain.
    pub fn for_profile(p: u32, q: u32) -> Algebra {
        match (p, q) {
            (1, 1) => Algebra::Point,
            (1, 2) => Algebra::PointInterval,
            (2, 1) => Algebra::IntervalPoint,
            (2, 2) => Algebra::Allen,
            _ => Algebra::Chain(p, q),
        }
    }

    pub fn chain(p: u32, q: u32) -> Result<Algebra> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidAtom {
                algebra: format!("chain({p},{q})"),
                name: "chain indices must be at least 1".into(),
            });
        }
        Ok(Algebra::Chain(p, q))
    }

    /// The algebra of the swapped pair.
    pub fn converse(self) -> Algebra {
        match self {
            Algebra::PointInterval => Algebra::IntervalPoint,
            Algebra::IntervalPoint => Algebra::PointInterval,
            Algebra::Chain(p, q) => Algebra::Chain(q, p),
            a => a,
        }
    }

    pub fn atom_count(self) -> usize {
        table(self).names.len()
    }

    /// Atom names in canonical word order.
    pub fn atom_names(self) -> Vec<String> {
        table(self).names.clone()
    }

    pub fn atom_name(self, index: usize) -> String {
        table(self).names[index].clone()
    }

    pub fn atom_index(self, name: &str) -> Result<usize> {
        table(self).by_name.get(name).copied().ok_or_else(|| Error::InvalidAtom {
            algebra: self.to_string(),
            name: name.to_string(),
        })
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Point => f.write_str("point"),
            Algebra::PointInterval => f.write_str("point_interval"),
            Algebra::IntervalPoint => f.write_str("interval_point"),
            Algebra::Allen => f.write_str("allen"),
            Algebra::Chain(p, q) => write!(f, "chain({p},{q})"),
        }
    }
}

impl FromStr for Algebra {
    type Err = Error;

    /// `point`, `point_interval`, `interval_point`, `allen`, `chain(p,q)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAtom {
            algebra: "any".into(),
            name: s.to_string(),
        };
        match s.trim() {
            "point" => Ok(Algebra::Point),
            "point_interval" => Ok(Algebra::PointInterval),
            "interval_point" => Ok(Algebra::IntervalPoint),
            "allen" | "interval" => Ok(Algebra::Allen),
            t => {
                let inner = t
                    .strip_prefix("chain(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (p, q) = inner.split_once(',').ok_or_else(bad)?;
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                Algebra::chain(p, q)
            }
        }
    }
}

fn swap_map(from: (&Letter, &Letter), to: (&Letter, &Letter)) -> BTreeMap<Letter, Letter> {
    BTreeMap::from([(from.0.clone(), to.0.clone()), (from.1.clone(), to.1.clone())])
}

/// The word of atom `name`, with `first` playing the first item.
pub fn atom_to_sword(alg: Algebra, name: &str, first: &Letter, second: &Letter) -> Result<SWord> {
    if first == second {
        return Err(Error::DuplicateItem(first.to_string()));
    }
    let t = table(alg);
    let i = alg.atom_index(name)?;
    let (a, b) = std_letters();
    t.words[i].rename(&swap_map((&a, &b), (first, second)))
}

/// The atom realised by `w`, read with `first` as the first item.
pub fn sword_to_atom(alg: Algebra, w: &SWord, first: &Letter, second: &Letter) -> Result<String> {
    sword_to_index(alg, w, first, second).map(|i| alg.atom_name(i))
}

fn sword_to_index(alg: Algebra, w: &SWord, first: &Letter, second: &Letter) -> Result<usize> {
    let mismatch = || Error::ProfileMismatch(format!("`{w}` is not a {alg} situation of {first} and {second}"));
    if first == second || w.letters().iter().any(|l| l != first && l != second) {
        return Err(mismatch());
    }
    let (a, b) = std_letters();
    let std = w.rename(&swap_map((first, second), (&a, &b)))?;
    table(alg).by_word.get(&std).copied().ok_or_else(mismatch)
}

/// A disjunction of atoms; empty is ⊥, full is ⊤.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSet {
    algebra: Algebra,
    atoms: BTreeSet<usize>,
}

impl RelationSet {
    pub fn new<S: AsRef<str>>(algebra: Algebra, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms = names
            .into_iter()
            .map(|n| algebra.atom_index(n.as_ref()))
            .collect::<Result<_>>()?;
        Ok(RelationSet { algebra, atoms })
    }

    pub fn from_indices(algebra: Algebra, atoms: impl IntoIterator<Item = usize>) -> Self {
        let n = algebra.atom_count();
        let atoms: BTreeSet<usize> = atoms.into_iter().collect();
        assert!(atoms.iter().all(|&i| i < n), "atom index out of range");
        RelationSet { algebra, atoms }
    }

    pub fn single(algebra: Algebra, name: &str) -> Result<Self> {
        Self::new(algebra, [name])
    }

    pub fn top(algebra: Algebra) -> Self {
        RelationSet {
            algebra,
            atoms: (0..algebra.atom_count()).collect(),
        }
    }

    pub fn bottom(algebra: Algebra) -> Self {
        RelationSet {
            algebra,
            atoms: BTreeSet::new(),
        }
    }

    /// Accepts `⊤`/`top`, `⊥`/`bot`/`∅`, or atom names separated by
    /// whitespace or commas, optionally inside braces.
    pub fn parse(algebra: Algebra, text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "⊤" | "top" => return Ok(Self::top(algebra)),
            "⊥" | "bot" | "∅" | "{}" => return Ok(Self::bottom(algebra)),
            _ => {}
        }
        let t = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(t);
        Self::new(algebra, t.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()))
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.atoms.len() == self.algebra.atom_count()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.algebra.atom_index(name).is_ok_and(|i| self.atoms.contains(&i))
    }

    /// Names in canonical atom order.
    pub fn names(&self) -> Vec<String> {
        let t = table(self.algebra);
        self.atoms.iter().map(|&i| t.names[i].clone()).collect()
    }

    fn same_algebra(&self, other: &RelationSet) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(format!("{} vs {}", self.algebra, other.algebra)));
        }
        Ok(())
    }

    pub fn union(&self, other: &RelationSet) -> Result<RelationSet> {
        self.same_algebra(other)?;
        Ok(RelationSet {
            algebra: self.algebra,
            atoms: &self.atoms | &other.atoms,
        })
    }

    pub fn intersection(&self, other: &RelationSet) -> Result<RelationSet> {
        self.same_algebra(other)?;
        Ok(RelationSet {
            algebra: self.algebra,
            atoms: &self.atoms & &other.atoms,
        })
    }

    /// The atoms' words over `{first, second}`.
    pub fn to_language(&self, first: &Letter, second: &Letter) -> Result<SLanguage> {
        let alphabet = Alphabet::new([first.clone(), second.clone()])?;
        if alphabet.len() != 2 {
            return Err(Error::DuplicateItem(first.to_string()));
        }
        let names = self.names();
        let words = names
            .iter()
            .map(|n| atom_to_sword(self.algebra, n, first, second))
            .collect::<Result<Vec<_>>>()?;
        SLanguage::new(alphabet, words)
    }

    /// Atoms realised by the words of `l`, read with `first` as first item.
    pub fn from_language(algebra: Algebra, l: &SLanguage, first: &Letter, second: &Letter) -> Result<Self> {
        let atoms = l
            .iter()
            .map(|w| sword_to_index(algebra, &w, first, second))
            .collect::<Result<_>>()?;
        Ok(RelationSet { algebra, atoms })
    }
}

impl fmt::Display for RelationSet {
    /// Space-separated names; ⊥ prints as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("∅");
        }
        f.write_str(&self.names().join(" "))
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.algebra, self.names().join(","))
    }
}

/// `A r B ⇔ B r~ A`, computed by swapping the letters of each atom word.
pub fn converse(rs: &RelationSet) -> RelationSet {
    let (a, b) = std_letters();
    let target = rs.algebra.converse();
    let t = table(rs.algebra);
    let atoms = rs
        .atoms
        .iter()
        .map(|&i| sword_to_index(target, &t.words[i], &b, &a).expect("converse atom exists"))
        .collect();
    RelationSet { algebra: target, atoms }
}

/// The algebra of `A ? C` given `A r1 B` and `B r2 C`.
pub fn composition_algebra(r1: Algebra, r2: Algebra) -> Result<Algebra> {
    let (p, q1) = r1.profile();
    let (q2, s) = r2.profile();
    if q1 != q2 {
        return Err(Error::AlgebraMismatch(format!(
            "the middle item has {q1} points in {r1} but {q2} in {r2}"
        )));
    }
    Ok(match (r1, r2) {
        (Algebra::Chain(..), _) | (_, Algebra::Chain(..)) => Algebra::Chain(p, s),
        _ => Algebra::for_profile(p, s),
    })
}

/// Composition by join and projection. No table is consulted.
pub fn compose(r1: &RelationSet, r2: &RelationSet) -> Result<RelationSet> {
    let target = composition_algebra(r1.algebra, r2.algebra)?;
    if r1.is_empty() || r2.is_empty() {
        return Ok(RelationSet::bottom(target));
    }
    let (a, b) = std_letters();
    let c = Letter::new("c").expect("valid");
    let (p, q) = r1.algebra.profile();
    let (_, s) = r2.algebra.profile();
    let l1 = r1.to_language(&a, &b)?;
    let l2 = r2.to_language(&b, &c)?;
    let bound = ParikhVector::from_pairs([(a.clone(), p), (b, q), (c.clone(), s)])?;
    let joined = join_capped(&l1, &l2, &bound, usize::MAX)?;
    let outer = Alphabet::new([a.clone(), c.clone()])?;
    RelationSet::from_language(target, &joined.project(&outer), &a, &c)
}

/// Composition matrix: entry (i, j) is `row atom i ∘ column atom j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityTable {
    rows: Algebra,
    cols: Algebra,
    result: Algebra,
    entries: Vec<Vec<RelationSet>>,
}

/// The table of `alg` with itself. For a profile `(p,q)` the columns are
/// the `(q,q)` algebra, so point–interval rows meet Allen columns.
pub fn transitivity_table(alg: Algebra) -> Result<TransitivityTable> {
    let (_, q) = alg.profile();
    let cols = match alg {
        Algebra::Chain(..) => Algebra::Chain(q, q),
        _ => Algebra::for_profile(q, q),
    };
    mixed_table(alg, cols)
}

/// The table of `rows ∘ cols` for any pair with matching middle profile.
pub fn mixed_table(rows: Algebra, cols: Algebra) -> Result<TransitivityTable> {
    let result = composition_algebra(rows, cols)?;
    let entries = (0..rows.atom_count())
        .map(|i| {
            (0..cols.atom_count())
                .map(|j| {
                    compose(
                        &RelationSet::from_indices(rows, [i]),
                        &RelationSet::from_indices(cols, [j]),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitivityTable {
        rows,
        cols,
        result,
        entries,
    })
}

impl TransitivityTable {
    pub fn rows(&self) -> Algebra {
        self.rows
    }

    pub fn cols(&self) -> Algebra {
        self.cols
    }

    pub fn result(&self) -> Algebra {
        self.result
    }

    pub fn entry(&self, row: usize, col: usize) -> &RelationSet {
        &self.entries[row][col]
    }

    pub fn get(&self, row: &str, col: &str) -> Result<&RelationSet> {
        Ok(&self.entries[self.rows.atom_index(row)?][self.cols.atom_index(col)?])
    }

    /// Aligned grid. Full entries print as `⊤`.
    pub fn to_text(&self) -> String {
        let cell = |r: &RelationSet| {
            if r.is_top() && r.len() > 1 {
                "⊤".to_string()
            } else {
                r.names().join(",")
            }
        };
        let rows = self.rows.atom_names();
        let cols = self.cols.atom_names();
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("∘".to_string()).chain(cols.iter().cloned()).collect()];
        for (i, r) in rows.iter().enumerate() {
            let mut line = vec![r.clone()];
            line.extend(self.entries[i].iter().map(cell));
            grid.push(line);
        }
        let width: Vec<usize> = (0..=cols.len())
            .map(|j| grid.iter().map(|l| l[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in grid {
            let cells: Vec<String> = line
                .iter()
                .zip(&width)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    /// One line per entry: `row col : atoms`.
    pub fn to_rows(&self) -> String {
        let rows = self.rows.atom_names();
        let cols = self.cols.atom_names();
        let mut out = String::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                out.push_str(&format!("{r} {c} : {}\n", self.entries[i][j]));
            }
        }
        out
    }
}
