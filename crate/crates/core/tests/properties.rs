mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{all_words, format, project as oproject};
use proptest::prelude::*;
use slang_core::*;

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn sw(s: &str) -> SWord {
    s.parse().unwrap()
}

fn alpha(mask: u8) -> Alphabet {
    Alphabet::new((0..4).filter(|i| mask & (1 << i) != 0).map(|i| Letter::new(NAMES[i]).unwrap())).unwrap()
}

/// Random S-words over letters among `a..d` restricted to `letters`.
fn word_over(letters: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    let subs: Vec<u8> = (1..16u8).filter(|s| s & !letters == 0).collect();
    prop::collection::vec(prop::sample::select(subs), 0..=max_len)
}

fn text(w: &[u8]) -> String {
    format(w, &NAMES)
}

proptest! {
    #[test]
    fn parse_format_round_trip(w in word_over(0b1111, 8)) {
        let t = text(&w);
        let parsed = sw(&t);
        prop_assert_eq!(parsed.to_string(), t.clone());
        prop_assert_eq!(parse_sword(&format_sword(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn format_canonicalizes(w in word_over(0b1111, 6)) {
        // Write each S-letter in reverse member order with extra spacing.
        let messy: Vec<String> = w.iter().map(|&s| {
            let m: Vec<&str> = (0..4).rev().filter(|i| s & (1 << i) != 0).map(|i| NAMES[i]).collect();
            format!("{{ {} }}", m.join(" , "))
        }).collect();
        let once = sw(&messy.join("  ")).to_string();
        prop_assert_eq!(&once, &text(&w));
        prop_assert_eq!(sw(&once).to_string(), once);
    }

    #[test]
    fn mirror_and_rename_invert(w in word_over(0b1111, 8)) {
        let w = sw(&text(&w));
        prop_assert_eq!(w.mirror().mirror(), w.clone());
        let l = |s: &str| Letter::new(s).unwrap();
        let m: BTreeMap<Letter, Letter> = [("a", "b"), ("b", "c"), ("c", "a"), ("d", "x")]
            .iter().map(|(x, y)| (l(x), l(y))).collect();
        let inv: BTreeMap<Letter, Letter> = m.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        prop_assert_eq!(w.rename(&m).unwrap().rename(&inv).unwrap(), w);
    }

    #[test]
    fn parikh_is_additive(u in word_over(0b1111, 6), v in word_over(0b1111, 6)) {
        let (u, v) = (sw(&text(&u)), sw(&text(&v)));
        let x = alpha(0b1111);
        let sum = &u.parikh(&x).unwrap() + &v.parikh(&x).unwrap();
        prop_assert_eq!(concat(&u, &v).parikh(&x).unwrap(), sum);
    }

    #[test]
    fn projection_composes(w in word_over(0b1111, 8), y in 0u8..16, z in 0u8..16) {
        let w = sw(&text(&w));
        prop_assert_eq!(w.project(&alpha(y)).project(&alpha(z)), w.project(&alpha(y & z)));
    }

    #[test]
    fn word_shuffle_bound(u in prop::collection::vec(prop::sample::select(vec!["a", "b"]), 0..5),
                          v in prop::collection::vec(prop::sample::select(vec!["a", "c"]), 0..5)) {
        let (uw, vw) = (sw(&u.join(" ")), sw(&v.join(" ")));
        let n = word_shuffle(&uw, &vw).unwrap().len() as u64;
        let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        let c = binom((u.len() + v.len()) as u64, u.len() as u64);
        prop_assert!(n <= c);
        let disjoint = !u.contains(&"a") || !v.contains(&"a");
        if disjoint {
            prop_assert_eq!(n, c);
        }
    }

    #[test]
    fn shuffle_membership_law(f in word_over(0b0011, 3), g in word_over(0b1100, 3)) {
        prop_assume!(f.iter().chain(&g).map(|s| s.count_ones()).sum::<u32>() <= 6);
        let (fw, gw) = (sw(&text(&f)), sw(&text(&g)));
        let sh = s_shuffle(&fw, &gw).unwrap();
        let fl = fw.alphabet();
        let gl = gw.alphabet();
        let both = fl.union(&gl).unwrap();
        let counts: Vec<u32> = (0..4).map(|i| f.iter().chain(&g).filter(|s| *s & (1 << i) != 0).count() as u32).collect();
        let fm = f.iter().fold(0, |m, s| m | s);
        let gm = g.iter().fold(0, |m, s| m | s);
        let expected: BTreeSet<String> = all_words(&counts)
            .into_iter()
            .filter(|h| oproject(h, fm) == f && oproject(h, gm) == g)
            .map(|h| text(&h))
            .collect();
        let got: BTreeSet<String> = sh.iter().map(|w| w.to_string()).collect();
        prop_assert_eq!(&got, &expected);
        prop_assert!(sh.alphabet().is_subset(&both));
        // Commutativity.
        let back: BTreeSet<String> = s_shuffle(&gw, &fw).unwrap().iter().map(|w| w.to_string()).collect();
        prop_assert_eq!(back, got);
    }

    #[test]
    fn shuffle_associative(f in word_over(0b0001, 2), g in word_over(0b0010, 2), h in word_over(0b0100, 2)) {
        let (f, g, h) = (sw(&text(&f)), sw(&text(&g)), sw(&text(&h)));
        let singleton = |w: &SWord| SLanguage::new(w.alphabet(), [w.clone()]).unwrap();
        let left = s_shuffle_languages(&s_shuffle(&f, &g).unwrap(), &singleton(&h)).unwrap();
        let right = s_shuffle_languages(&singleton(&f), &s_shuffle(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left.words(), right.words());
        prop_assert_eq!(s_shuffle_many(&[f, g, h]).unwrap().words(), left.words());
    }

    #[test]
    fn join_matches_filter(h in word_over(0b1111, 4), k in 0usize..4) {
        prop_assume!(h.iter().map(|s| s.count_ones()).sum::<u32>() <= 6);
        let counts: Vec<u32> = (0..4).map(|i| h.iter().filter(|s| *s & (1 << i) != 0).count() as u32).collect();
        let w1 = oproject(&h, 0b0011);
        // A second admitted word on the right, so pairs fail to align too.
        let right = oproject(&h, 0b0110);
        let mut noise = right.clone();
        if !noise.is_empty() {
            let n = noise.len();
            noise.rotate_left(k % n);
        }
        let w2s = [right, noise];
        let mask = |w: &[u8]| w.iter().fold(0u8, |m, s| m | s);
        let (m1, m2) = (mask(&w1), mask(&w2s[0]));
        prop_assume!(m1 != 0 && m2 != 0);
        let full = (0..4).filter(|&i| counts[i] > 0).fold(0u8, |m, i| m | 1 << i);
        let lang = |ws: &[Vec<u8>], m: u8| SLanguage::new(alpha(m), ws.iter().map(|w| sw(&text(w)))).unwrap();
        let bound = ParikhVector::new(alpha(full), (0..4).filter(|&i| counts[i] > 0).map(|i| counts[i]).collect()).unwrap();
        let w2s: Vec<Vec<u8>> = w2s.into_iter().filter(|w| !w.is_empty()).collect();
        let (l1, l2) = (lang(std::slice::from_ref(&w1), m1), lang(&w2s, m2));
        let j = join(&l1, &l2, &bound).unwrap();
        let got: BTreeSet<String> = j.iter().map(|w| w.to_string()).collect();
        let used = m1 | m2;
        let sub: Vec<u32> = (0..4).map(|i| if used & (1 << i) != 0 { counts[i] } else { 0 }).collect();
        let expected: BTreeSet<String> = all_words(&sub)
            .into_iter()
            .filter(|g| oproject(g, m1) == w1 && w2s.contains(&oproject(g, m2)))
            .map(|g| text(&g))
            .collect();
        prop_assert!(got.contains(&text(&oproject(&h, used))));
        prop_assert_eq!(got, expected);
        let i1 = Integration::new(l1, bound).unwrap();
        let n1 = all_words(&counts).into_iter().filter(|g| oproject(g, m1) == w1).count();
        prop_assert_eq!(i1.count(), Count::from(n1));
    }

    #[test]
    fn integration_members_project_back(w in word_over(0b0011, 3), free in 0u32..3) {
        let na = w.iter().filter(|s| *s & 1 != 0).count() as u32;
        let nb = w.iter().filter(|s| *s & 2 != 0).count() as u32;
        prop_assume!(na > 0 && nb > 0);
        let base = sw(&text(&w));
        let bound = ParikhVector::new(alpha(if free > 0 { 0b0111 } else { 0b0011 }),
            if free > 0 { vec![na, nb, free] } else { vec![na, nb] }).unwrap();
        let spec = IntegrationSpec { base: base.clone(), target_alphabet: bound.alphabet().clone(), bound: bound.clone() };
        let i = integrate_bounded(&spec).unwrap();
        let all = i.enumerate(DEFAULT_CAP).unwrap();
        prop_assert_eq!(Count::from(all.len()), i.count());
        for g in all.iter() {
            prop_assert_eq!(g.project(&base.alphabet()), base.clone());
            prop_assert_eq!(g.parikh(bound.alphabet()).unwrap(), bound.clone());
            prop_assert!(i.contains(&g));
        }
    }

    #[test]
    fn delannoy_symmetric(p in 0u32..12, q in 0u32..12) {
        prop_assert_eq!(delannoy_number(p, q), delannoy_number(q, p));
    }

    #[test]
    fn delannoy_n_permutation_invariant(mut v in prop::collection::vec(0u32..5, 1..5), k in 0usize..24) {
        let base = delannoy_number_n(&DelannoyIndex::new(v.clone()).unwrap());
        let n = v.len();
        v.rotate_left(k % n);
        v.swap(0, (k / 3) % n);
        prop_assert_eq!(delannoy_number_n(&DelannoyIndex::new(v).unwrap()), base);
    }

    #[test]
    fn converse_involution(bits in 0u16..(1 << 13)) {
        let rs = RelationSet::from_indices(Algebra::Allen, (0..13).filter(|i| bits & (1 << i) != 0));
        prop_assert_eq!(converse(&converse(&rs)), rs);
    }
}

#[test]
fn delannoy_language_counts_exhaustive() {
    fn indices(len: usize, total: u32) -> Vec<Vec<u32>> {
        if len == 0 {
            return vec![vec![]];
        }
        (0..=total)
            .flat_map(|h| indices(len - 1, total - h).into_iter().map(move |mut t| {
                t.insert(0, h);
                t
            }))
            .collect()
    }
    for len in 1..=4 {
        for p in indices(len, 8) {
            let idx = DelannoyIndex::new(p.clone()).unwrap();
            let letters: Vec<Letter> = NAMES[..len].iter().map(|n| Letter::new(n).unwrap()).collect();
            let l = delannoy_language(&idx, &letters, DEFAULT_CAP).unwrap();
            assert_eq!(Count::from(l.len()), delannoy_number_n(&idx), "{p:?}");
            if len <= 2 {
                assert_eq!(l.len(), all_words(&p).len());
            }
        }
    }
}

#[test]
fn ordered_set_partitions() {
    // Fubini numbers by brute force: surjections onto ranks 0..k.
    fn fubini(n: usize) -> usize {
        let mut count = 0;
        let total = (n as u64).pow(n as u32).max(1);
        for code in 0..total {
            let ranks: Vec<u64> = (0..n).map(|i| code / (n as u64).pow(i as u32) % n as u64).collect();
            let used: BTreeSet<u64> = ranks.iter().copied().collect();
            if used.iter().copied().eq(0..used.len() as u64) {
                count += 1;
            }
        }
        count
    }
    for n in 1..=5 {
        assert_eq!(delannoy_number_n(&DelannoyIndex::new(vec![1; n]).unwrap()), Count::from(fubini(n)));
    }
}

#[test]
fn atoms_are_bijective() {
    let (a, b) = (Letter::new("a").unwrap(), Letter::new("b").unwrap());
    for (alg, p, q) in [(Algebra::Point, 1, 1), (Algebra::PointInterval, 1, 2), (Algebra::Allen, 2, 2), (Algebra::Chain(3, 2), 3, 2)] {
        let lang = delannoy_language(&DelannoyIndex::new(vec![p, q]).unwrap(), &[a.clone(), b.clone()], 100).unwrap();
        let words: BTreeSet<SWord> = alg
            .atom_names()
            .iter()
            .map(|n| atom_to_sword(alg, n, &a, &b).unwrap())
            .collect();
        assert_eq!(words.len(), alg.atom_count());
        assert_eq!(words.into_iter().collect::<Vec<_>>(), lang.words());
    }
}

#[test]
fn equality_in_self_converse_composition() {
    for alg in [Algebra::Point, Algebra::Allen, Algebra::PointInterval, Algebra::Chain(2, 3)] {
        for n in alg.atom_names() {
            let r = RelationSet::single(alg, &n).unwrap();
            let c = compose(&r, &converse(&r)).unwrap();
            let eq = atom_to_sword(c.algebra(), &c.algebra().atom_name(0), &Letter::new("a").unwrap(), &Letter::new("b").unwrap());
            assert!(eq.is_ok());
            // The identity atom is the word with every point fused pairwise.
            let (p, _) = alg.profile();
            let ident = vec!["{a,b}"; p as usize].join(" ");
            let name = sword_to_atom(c.algebra(), &sw(&ident), &Letter::new("a").unwrap(), &Letter::new("b").unwrap()).unwrap();
            assert!(c.contains(&name), "{alg} {n}: {c}");
        }
    }
}

#[test]
fn mirror_duality() {
    let (a, b) = (Letter::new("a").unwrap(), Letter::new("b").unwrap());
    // Time reversal of Allen atoms.
    let reversed: BTreeMap<&str, &str> = [
        ("<", ">"), (">", "<"), ("m", "m~"), ("m~", "m"), ("o", "o~"), ("o~", "o"),
        ("s", "f"), ("f", "s"), ("s~", "f~"), ("f~", "s~"), ("d", "d"), ("d~", "d~"), ("=", "="),
    ]
    .into_iter()
    .collect();
    for n in Algebra::Allen.atom_names() {
        let w = atom_to_sword(Algebra::Allen, &n, &a, &b).unwrap().mirror();
        assert_eq!(sword_to_atom(Algebra::Allen, &w, &a, &b).unwrap(), reversed[n.as_str()]);
    }
}

#[test]
fn lattice_nodes_are_delannoy_languages() {
    let mut indices = Vec::new();
    for p in 1..=6u32 {
        for q in 1..=7 - p {
            indices.push(vec![p, q]);
        }
    }
    indices.extend([vec![1, 1, 1], vec![2, 1, 1], vec![2, 2, 1], vec![3, 2, 2], vec![1, 1, 1, 1], vec![2, 2, 2, 1]]);
    for p in indices {
        let n = p.len();
        let idx = DelannoyIndex::new(p.clone()).unwrap();
        let sys = ThueSystem::standard(n);
        let l = lattice_from(&idx, &sys, DEFAULT_CAP).unwrap();
        let lang = delannoy_language(&idx, sys.letters(), DEFAULT_CAP).unwrap();
        assert_eq!(l.nodes(), lang.words().as_slice(), "{p:?}");
        let bottom: Vec<String> = (0..n).flat_map(|i| vec![NAMES[i]; p[i] as usize]).map(str::to_string).collect();
        let top: Vec<String> = (0..n).rev().flat_map(|i| vec![NAMES[i]; p[i] as usize]).map(str::to_string).collect();
        assert_eq!(l.bottom().to_string(), bottom.join(" "));
        assert_eq!(l.top().to_string(), top.join(" "));
        for w in l.nodes() {
            let i = l.position(w).unwrap();
            assert!(l.leq(l.position(l.bottom()).unwrap(), i));
            assert!(l.leq(i, l.position(l.top()).unwrap()));
        }
    }
}

#[test]
fn binary_lattices_are_distributive() {
    for p in 1..=7u32 {
        for q in 1..=8 - p {
            let l = lattice_from(&DelannoyIndex::new(vec![p, q]).unwrap(), &ThueSystem::standard(2), DEFAULT_CAP).unwrap();
            assert_eq!(l.check_distributive().unwrap(), Distributivity::Distributive, "({p},{q})");
        }
    }
}
