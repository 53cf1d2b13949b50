//! Brute-force oracles shared by the integration tests. The oracles work on
//! raw bit masks; the engine is only touched to build networks from them.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use slang_core::{build_network, Alphabet, Constraint, ConstraintNetwork, Letter, SLanguage, SWord, TemporalItem};

/// A word as S-letter bit masks over letter indices.
pub type Word = Vec<u8>;

/// Every word with `counts[i]` occurrences of letter `i` (at most 8 letters).
pub fn all_words(counts: &[u32]) -> Vec<Word> {
    fn rec(counts: &mut [u32], prefix: &mut Word, out: &mut Vec<Word>) {
        let avail = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(0u8, |m, (i, _)| m | 1 << i);
        if avail == 0 {
            out.push(prefix.clone());
            return;
        }
        for s in 1..=255u8 {
            if s & !avail != 0 {
                continue;
            }
            for (i, c) in counts.iter_mut().enumerate() {
                if s & (1 << i) != 0 {
                    *c -= 1;
                }
            }
            prefix.push(s);
            rec(counts, prefix, out);
            prefix.pop();
            for (i, c) in counts.iter_mut().enumerate() {
                if s & (1 << i) != 0 {
                    *c += 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut counts.to_vec(), &mut Vec::new(), &mut out);
    out
}

pub fn project(w: &[u8], keep: u8) -> Word {
    w.iter().map(|&s| s & keep).filter(|&s| s != 0).collect()
}

/// Canonical text: singletons bare, larger S-letters as sorted `{x,y}`.
pub fn format(w: &[u8], names: &[&str]) -> String {
    let mut idx: Vec<usize> = (0..names.len()).collect();
    idx.sort_by_key(|&i| names[i]);
    w.iter()
        .map(|&s| {
            let members: Vec<&str> = idx.iter().filter(|&&i| s & (1 << i) != 0).map(|&i| names[i]).collect();
            if members.len() == 1 {
                members[0].to_string()
            } else {
                format!("{{{}}}", members.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A constraint as a letter mask and the admitted projections.
#[derive(Clone, Debug)]
pub struct OracleConstraint {
    pub scope: u8,
    pub words: BTreeSet<Word>,
}

/// Scenarios of `counts` satisfying every constraint.
pub fn filter(counts: &[u32], cs: &[OracleConstraint]) -> Vec<Word> {
    all_words(counts)
        .into_iter()
        .filter(|w| cs.iter().all(|c| c.words.contains(&project(w, c.scope))))
        .collect()
}

/// Parses the canonical text form back to masks.
pub fn parse(text: &str, names: &[&str]) -> Word {
    let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    text.split_whitespace()
        .map(|tok| {
            tok.trim_start_matches('{')
                .trim_end_matches('}')
                .split(',')
                .fold(0u8, |m, l| m | 1 << pos[l])
        })
        .collect()
}

// Allen relations by endpoint comparison.

pub const ALLEN: [&str; 13] = ["=", "<", ">", "d", "d~", "o", "o~", "m", "m~", "s", "s~", "f", "f~"];

/// The relation of `x` to `y` for intervals given as endpoint pairs.
pub fn allen_relation(x: (i32, i32), y: (i32, i32)) -> &'static str {
    let ((a1, a2), (b1, b2)) = (x, y);
    if a2 < b1 {
        "<"
    } else if b2 < a1 {
        ">"
    } else if a2 == b1 {
        "m"
    } else if b2 == a1 {
        "m~"
    } else if a1 == b1 && a2 == b2 {
        "="
    } else if a1 == b1 {
        if a2 < b2 {
            "s"
        } else {
            "s~"
        }
    } else if a2 == b2 {
        if a1 > b1 {
            "f"
        } else {
            "f~"
        }
    } else if b1 < a1 && a2 < b2 {
        "d"
    } else if a1 < b1 && b2 < a2 {
        "d~"
    } else if a1 < b1 {
        "o"
    } else {
        "o~"
    }
}

/// Composition table by placing three intervals on six integer slots.
pub fn allen_oracle() -> BTreeMap<(&'static str, &'static str), BTreeSet<&'static str>> {
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    let ivs: Vec<(i32, i32)> = (0..6).flat_map(|s| (s + 1..6).map(move |e| (s, e))).collect();
    for &a in &ivs {
        for &b in &ivs {
            for &c in &ivs {
                out.entry((allen_relation(a, b), allen_relation(b, c)))
                    .or_default()
                    .insert(allen_relation(a, c));
            }
        }
    }
    out
}

pub fn point_oracle() -> BTreeMap<(&'static str, &'static str), BTreeSet<&'static str>> {
    let rel = |x: i32, y: i32| match x.cmp(&y) {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                out.entry((rel(a, b), rel(b, c))).or_default().insert(rel(a, c));
            }
        }
    }
    out
}

/// The printed interval table, columns `= < > d d~ o o~ m m~ s s~ f f~`.
pub const PRINTED_ALLEN: &str = "\
=   | = < > d d~ o o~ m m~ s s~ f f~
<   | < < □ Γ~ < < Γ~ < Γ~ < < Γ~ <
>   | > □ > Λ~ > Λ~ > Λ~ > Λ~ > > >
d   | d < > d □ Γ~ Λ~ < > d Λ~ d Γ~
d~  | d~ Λ Γ ◇ d~ ρ δ ρ δ ρ d~ δ d~
o   | o < Γ δ~ Λ α ◇ < δ o ρ δ~ α
o~  | o~ Λ > ρ~ Γ ◇ α~ ρ > ρ~ α~ o~ δ
m   | m < Γ δ~ < < δ~ < f̂ m m δ~ <
m~  | m~ Λ > ρ~ > ρ~ > ŝ > ρ~ > m~ m~
s   | s < > d Λ α ρ~ < m~ s ŝ d α
s~  | s~ Λ > ρ~ d~ ρ o~ ρ m~ ŝ s~ o~ d~
f   | f < > d Γ δ~ α~ m > d α~ f f̂
f~  | f~ < Γ δ~ d~ o δ m~ δ o d~ f̂ f~
";

/// Expands one printed cell to atom names.
pub fn expand_symbol(sym: &str) -> BTreeSet<&'static str> {
    let set = |v: &[&'static str]| v.iter().copied().collect::<BTreeSet<_>>();
    let conv = |v: &[&'static str]| {
        v.iter()
            .map(|a| match *a {
                "<" => ">",
                ">" => "<",
                "=" => "=",
                x if x.ends_with('~') => ALLEN.iter().copied().find(|y| *y == &x[..x.len() - 1]).unwrap(),
                x => ALLEN.iter().copied().find(|y| y.len() == x.len() + 1 && y.starts_with(x)).unwrap(),
            })
            .collect::<BTreeSet<_>>()
    };
    let gamma_t = ["<", "m", "o", "s", "d"];
    let lambda = ["<", "m", "o", "d~", "f~"];
    let alpha = ["<", "m", "o"];
    let delta_t = ["o", "s", "d"];
    let rho_t = ["o~", "d", "f"];
    match sym {
        "□" => set(&ALLEN),
        "◇" => ALLEN.iter().copied().filter(|a| !["<", "m", "m~", ">"].contains(a)).collect(),
        "Γ~" => set(&gamma_t),
        "Γ" => conv(&gamma_t),
        "Λ" => set(&lambda),
        "Λ~" => conv(&lambda),
        "α" => set(&alpha),
        "α~" => conv(&alpha),
        "δ~" => set(&delta_t),
        "δ" => conv(&delta_t),
        "ρ~" => set(&rho_t),
        "ρ" => conv(&rho_t),
        "ŝ" => set(&["s", "=", "s~"]),
        "f̂" => set(&["f", "=", "f~"]),
        a => set(&[ALLEN.iter().copied().find(|x| *x == a).unwrap_or_else(|| panic!("unknown symbol {a}"))]),
    }
}

/// `(row, col) → atoms` as printed.
pub fn printed_allen() -> BTreeMap<(&'static str, &'static str), BTreeSet<&'static str>> {
    let mut out = BTreeMap::new();
    for line in PRINTED_ALLEN.lines() {
        let (row, cells) = line.split_once('|').unwrap();
        let row = ALLEN.iter().copied().find(|a| *a == row.trim()).unwrap();
        let cells: Vec<&str> = cells.split_whitespace().collect();
        assert_eq!(cells.len(), 13, "row {row}");
        for (col, cell) in ALLEN.iter().zip(cells) {
            out.insert((row, *col), expand_symbol(cell));
        }
    }
    out
}

/// The published Delannoy table: rows p = 0..=9, columns q = 0..=8.
pub const PRINTED_DELANNOY: [[u64; 9]; 10] = [
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 3, 5, 7, 9, 11, 13, 15, 17],
    [1, 5, 13, 25, 41, 61, 85, 113, 145],
    [1, 7, 25, 63, 129, 231, 377, 575, 833],
    [1, 9, 41, 129, 321, 681, 1289, 2241, 3649],
    [1, 11, 61, 231, 681, 1683, 3653, 7183, 13073],
    [1, 13, 85, 377, 1289, 3653, 8989, 19825, 40081],
    [1, 15, 113, 575, 2241, 7183, 19825, 48639, 108545],
    [1, 17, 145, 833, 3649, 13073, 40081, 108545, 265729],
    [1, 19, 181, 1159, 5641, 22363, 75517, 224143, 598417],
];

/// The four-interval network over `a b c d` (bits 0..3), constraints in
/// the order they are joined in the worked example.
pub fn allen_network_oracle() -> Vec<OracleConstraint> {
    let names = ["a", "b", "c", "d"];
    let c = |scope: &[&str], words: &[&str]| {
        let mask = scope.iter().fold(0u8, |m, l| m | 1 << names.iter().position(|n| n == l).unwrap());
        OracleConstraint {
            scope: mask,
            words: words.iter().map(|w| parse(w, &names)).collect(),
        }
    };
    vec![
        c(&["a", "d"], &["{a,d} d a", "d {a,d} a"]),
        c(&["c", "d"], &["{c,d} d c", "d {c,d} c"]),
        c(&["b", "d"], &["d b d b"]),
        c(&["a", "c"], &["c a {a,c}", "a c {a,c}"]),
        c(&["b", "c"], &["b c c b", "c b b c"]),
        c(&["a", "d"], &["a d d a", "d a a d"]),
    ]
}

// Random small networks for the solver equivalence checks.

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Clone, Debug)]
pub struct Instance {
    pub counts: Vec<u32>,
    pub constraints: Vec<OracleConstraint>,
}

pub fn instance() -> impl Strategy<Value = Instance> {
    prop::collection::vec(1u32..=3, 1..=4)
        .prop_filter("at most eight points", |c| c.iter().sum::<u32>() <= 8)
        .prop_flat_map(|counts| {
            let n = counts.len();
            let full = (1u8 << n) - 1;
            let c = counts.clone();
            let constraint = (1u8..=full, any::<u64>()).prop_map(move |(scope, seed)| {
                let sub: Vec<u32> = (0..n).map(|i| if scope & (1 << i) != 0 { c[i] } else { 0 }).collect();
                let words = all_words(&sub);
                // A pseudo-random nonempty subset of the scope language.
                let mut state = seed | 1;
                let mut keep: BTreeSet<Word> = BTreeSet::new();
                for w in &words {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    if state % 3 != 0 {
                        keep.insert(w.clone());
                    }
                }
                if keep.is_empty() {
                    keep.insert(words[(seed as usize) % words.len()].clone());
                }
                OracleConstraint { scope, words: keep }
            });
            (Just(counts), prop::collection::vec(constraint, 0..=3))
        })
        .prop_map(|(counts, constraints)| Instance { counts, constraints })
}

pub fn letter(i: usize) -> Letter {
    Letter::new(NAMES[i]).unwrap()
}

pub fn network(inst: &Instance) -> ConstraintNetwork {
    let n = inst.counts.len();
    let items: Vec<TemporalItem> = (0..n).map(|i| TemporalItem::new(NAMES[i], inst.counts[i]).unwrap()).collect();
    let constraints = inst
        .constraints
        .iter()
        .map(|c| {
            let scope: Vec<usize> = (0..n).filter(|i| c.scope & (1 << i) != 0).collect();
            let alphabet = Alphabet::new(scope.iter().map(|&i| letter(i))).unwrap();
            let words = c.words.iter().map(|w| format(w, &NAMES).parse::<SWord>().unwrap());
            Constraint::new(scope.iter().map(|&i| NAMES[i]), SLanguage::new(alphabet, words).unwrap())
        })
        .collect();
    build_network(items, constraints).unwrap()
}

pub fn texts(l: &SLanguage) -> BTreeSet<String> {
    l.iter().map(|w| w.to_string()).collect()
}

pub fn oracle_texts(counts: &[u32], cs: &[OracleConstraint]) -> BTreeSet<String> {
    filter(counts, cs).iter().map(|w| format(w, &NAMES)).collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

