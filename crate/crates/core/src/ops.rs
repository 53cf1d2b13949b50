//! Concatenation, shuffles, projection, bounded integration and join.
//!
//! The join is what replaces composition tables: two constraint languages
//! over overlapping alphabets are combined word pair by word pair, by
//! (i) taking the common letters, (ii) keeping only pairs whose projections
//! on the common letters coincide, and (iii) S-shuffling the private
//! segments between consecutive common anchors.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::delannoy::{delannoy_number_n_in, for_each_profile_word, ordered_submasks, shuffle_count};
use crate::error::{Error, Result};
use crate::language::{packed_counts, project_masks, Mask, Packed, Remap, SLanguage};
use crate::word::{Alphabet, ParikhVector, SWord};
use crate::{Count, DEFAULT_CAP};

pub fn concat(u: &SWord, v: &SWord) -> SWord {
    u.concat(v)
}

/// All interleavings of `u` and `v` that keep each operand's order. No
/// S-letters are fused; the operands may share letters.
pub fn word_shuffle(u: &SWord, v: &SWord) -> Result<SLanguage> {
    fn go(u: &[Mask], v: &[Mask], prefix: &mut Vec<Mask>, out: &mut Vec<Packed>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.push(Packed(w));
            return;
        }
        prefix.push(u[0]);
        go(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        go(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let alphabet = u.alphabet().union(&v.alphabet())?;
    let (pu, pv) = (alphabet.pack(u)?, alphabet.pack(v)?);
    let mut out = Vec::new();
    go(&pu.0, &pv.0, &mut Vec::new(), &mut out);
    Ok(SLanguage::from_packed(alphabet, out))
}

fn shuffle_masks(
    f: &[Mask],
    g: &[Mask],
    prefix: &mut Vec<Mask>,
    emit: &mut dyn FnMut(&[Mask]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if f.is_empty() || g.is_empty() {
        let n = prefix.len();
        prefix.extend_from_slice(f);
        prefix.extend_from_slice(g);
        let r = emit(prefix);
        prefix.truncate(n);
        return r;
    }
    for (m, df, dg) in [(f[0], 1, 0), (g[0], 0, 1), (f[0] | g[0], 1, 1)] {
        prefix.push(m);
        let r = shuffle_masks(&f[df..], &g[dg..], prefix, emit);
        prefix.pop();
        r?;
    }
    ControlFlow::Continue(())
}

fn shuffle_list(f: &[Mask], g: &[Mask]) -> Vec<Vec<Mask>> {
    let mut out = Vec::new();
    let _ = shuffle_masks(f, g, &mut Vec::new(), &mut |w| {
        out.push(w.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// The S-shuffle `[f ‖ g]` of two words over disjoint alphabets: all
/// interleavings in which one S-letter of each side may also be fused.
pub fn s_shuffle(f: &SWord, g: &SWord) -> Result<SLanguage> {
    let (af, ag) = (f.alphabet(), g.alphabet());
    if !af.is_disjoint(&ag) {
        return Err(Error::SharedLetters(af.intersection(&ag).to_string()));
    }
    let alphabet = af.union(&ag)?;
    let words = shuffle_list(&alphabet.pack(f)?.0, &alphabet.pack(g)?.0);
    Ok(SLanguage::from_packed(alphabet, words.into_iter().map(Packed).collect()))
}

/// S-shuffle of n words, folded left to right.
pub fn s_shuffle_many(words: &[SWord]) -> Result<SLanguage> {
    let mut acc = SLanguage::singleton(SWord::empty())?;
    for w in words {
        acc = s_shuffle_languages(&acc, &SLanguage::singleton(w.clone())?)?;
    }
    Ok(acc)
}

/// `[L ‖ L']`, the union of the S-shuffles of all word pairs.
pub fn s_shuffle_languages(l1: &SLanguage, l2: &SLanguage) -> Result<SLanguage> {
    if !l1.alphabet().is_disjoint(l2.alphabet()) {
        return Err(Error::SharedLetters(
            l1.alphabet().intersection(l2.alphabet()).to_string(),
        ));
    }
    let alphabet = l1.alphabet().union(l2.alphabet())?;
    let (r1, r2) = (Remap::new(l1.alphabet(), &alphabet), Remap::new(l2.alphabet(), &alphabet));
    let mut out = Vec::new();
    for u in l1.packed() {
        let u = r1.word(&u.0);
        for v in l2.packed() {
            let v = r2.word(&v.0);
            out.extend(shuffle_list(&u, &v).into_iter().map(Packed));
        }
    }
    Ok(SLanguage::from_packed(alphabet, out))
}

/// The S-projection `f|Y`.
pub fn project(f: &SWord, keep: &Alphabet) -> SWord {
    f.project(keep)
}

pub fn project_language(l: &SLanguage, keep: &Alphabet) -> SLanguage {
    l.project(keep)
}

/// Parameters of a bounded integration `∫_Z^ν base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrationSpec {
    pub base: SWord,
    pub target_alphabet: Alphabet,
    pub bound: ParikhVector,
}

/// A bounded integration held symbolically: every word over the bound's
/// alphabet whose projection on the base alphabet is a base word and whose
/// Parikh vector is the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integration {
    base: SLanguage,
    bound: ParikhVector,
}

pub fn integrate_bounded(spec: &IntegrationSpec) -> Result<Integration> {
    if spec.bound.alphabet() != &spec.target_alphabet {
        return Err(Error::BoundMismatch(format!(
            "bound is over {} but the target alphabet is {}",
            spec.bound.alphabet(),
            spec.target_alphabet
        )));
    }
    Integration::new(SLanguage::singleton(spec.base.clone())?, spec.bound.clone())
}

impl Integration {
    /// Lifts a language to the bound's alphabet. Every base word must have
    /// the bound's counts on the base letters.
    pub fn new(base: SLanguage, bound: ParikhVector) -> Result<Self> {
        if !base.alphabet().is_subset(bound.alphabet()) {
            return Err(Error::BoundMismatch(format!(
                "base alphabet {} is not inside the bound alphabet {}",
                base.alphabet(),
                bound.alphabet()
            )));
        }
        let local = bound.restrict(base.alphabet());
        if !base.has_profile(&local) {
            return Err(Error::BoundMismatch(format!(
                "base words do not all have the counts {local:?}"
            )));
        }
        Ok(Integration { base, bound })
    }

    pub fn base(&self) -> &SLanguage {
        &self.base
    }

    pub fn bound(&self) -> &ParikhVector {
        &self.bound
    }

    fn free_counts(&self) -> Vec<u32> {
        let free = self.bound.alphabet().difference(self.base.alphabet());
        free.letters()
            .iter()
            .map(|l| self.bound.get(l).expect("free letter"))
            .collect()
    }

    /// Exact size. A base word of length r contributes D(r, free counts):
    /// its S-letters behave like r occurrences of one extra letter.
    pub fn count(&self) -> Count {
        let mut by_len: HashMap<usize, u64> = HashMap::new();
        for w in self.base.packed() {
            *by_len.entry(w.0.len()).or_default() += 1;
        }
        let free = self.free_counts();
        let mut total = Count::from(0u32);
        for (len, n) in by_len {
            let mut idx = vec![len as u32];
            idx.extend_from_slice(&free);
            let d: Count = delannoy_number_n_in(&idx).expect("arbitrary precision");
            total += d * Count::from(n);
        }
        total
    }

    pub fn contains(&self, w: &SWord) -> bool {
        match w.parikh(self.bound.alphabet()) {
            Ok(p) if p == self.bound => self.base.contains(&w.project(self.base.alphabet())),
            _ => false,
        }
    }

    pub fn enumerate(&self, cap: usize) -> Result<SLanguage> {
        let size = self.count();
        if size > Count::from(cap) {
            return Err(Error::cap(
                format!("integration of {} words onto {}", self.base.len(), self.bound.alphabet()),
                size,
                cap,
            ));
        }
        let alphabet = self.bound.alphabet().clone();
        let remap = Remap::new(self.base.alphabet(), &alphabet);
        let free_mask = alphabet.full_mask() & !alphabet.mask_of(self.base.alphabet());
        let mut counts = vec![0u32; alphabet.len()];
        for (i, l) in alphabet.letters().iter().enumerate() {
            if free_mask & (1 << i) != 0 {
                counts[i] = self.bound.get(l).expect("bound letter");
            }
        }
        let mut out = Vec::new();
        for w in self.base.packed() {
            let w = remap.word(&w.0);
            if w.is_empty() {
                for_each_profile_word(&mut counts, &mut |h| out.push(Packed(h.to_vec())));
            } else {
                integrate_word(&w, &mut counts, &mut Vec::new(), &mut out);
            }
        }
        Ok(SLanguage::from_packed(alphabet, out))
    }
}

/// Every word that interleaves the remaining free occurrences with `w`,
/// optionally fusing free letters into the S-letters of `w`.
fn integrate_word(w: &[Mask], counts: &mut [u32], prefix: &mut Vec<Mask>, out: &mut Vec<Packed>) {
    let avail = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0u64, |m, (i, _)| m | (1 << i));
    if w.is_empty() {
        if avail == 0 {
            out.push(Packed(prefix.clone()));
        } else {
            for_each_profile_word(counts, &mut |tail| {
                let mut h = prefix.clone();
                h.extend_from_slice(tail);
                out.push(Packed(h));
            });
        }
        return;
    }
    let subs = if avail == 0 { Vec::new() } else { ordered_submasks(avail) };
    // w[0] alone or fused with free letters.
    prefix.push(w[0]);
    integrate_word(&w[1..], counts, prefix, out);
    prefix.pop();
    for &s in &subs {
        take(counts, s);
        prefix.push(w[0] | s);
        integrate_word(&w[1..], counts, prefix, out);
        prefix.pop();
        give(counts, s);
    }
    // Free letters strictly before w[0].
    for &s in &subs {
        take(counts, s);
        prefix.push(s);
        integrate_word(w, counts, prefix, out);
        prefix.pop();
        give(counts, s);
    }
}

fn take(counts: &mut [u32], mut s: Mask) {
    while s != 0 {
        counts[s.trailing_zeros() as usize] -= 1;
        s &= s - 1;
    }
}

fn give(counts: &mut [u32], mut s: Mask) {
    while s != 0 {
        counts[s.trailing_zeros() as usize] += 1;
        s &= s - 1;
    }
}

/// Splits `w` at S-letters meeting `common`: private segments and anchors.
fn decompose(w: &[Mask], common: Mask) -> (Vec<&[Mask]>, Vec<Mask>) {
    let mut segments = Vec::new();
    let mut anchors = Vec::new();
    let mut start = 0;
    for (i, &m) in w.iter().enumerate() {
        if m & common != 0 {
            segments.push(&w[start..i]);
            anchors.push(m);
            start = i + 1;
        }
    }
    segments.push(&w[start..]);
    (segments, anchors)
}

/// Size of the join of two aligned words (both over the union alphabet).
pub(crate) fn pair_join_count(w1: &[Mask], w2: &[Mask], common: Mask) -> u128 {
    let (s1, _) = decompose(w1, common);
    let (s2, _) = decompose(w2, common);
    s1.iter()
        .zip(&s2)
        .fold(1u128, |acc, (a, b)| acc.saturating_mul(shuffle_count(a.len(), b.len())))
}

/// Emits every word `h` with `h|X1 = w1` and `h|X2 = w2`. Both words are
/// over the union alphabet and must agree on the common letters.
pub(crate) fn for_each_pair_join(
    w1: &[Mask],
    w2: &[Mask],
    common: Mask,
    emit: &mut dyn FnMut(&[Mask]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let (s1, a1) = decompose(w1, common);
    let (s2, a2) = decompose(w2, common);
    debug_assert_eq!(a1.len(), a2.len());
    let anchors: Vec<Mask> = a1.iter().zip(&a2).map(|(x, y)| x | y).collect();
    let pieces: Vec<Vec<Vec<Mask>>> = s1.iter().zip(&s2).map(|(a, b)| shuffle_list(a, b)).collect();

    fn product(
        k: usize,
        pieces: &[Vec<Vec<Mask>>],
        anchors: &[Mask],
        prefix: &mut Vec<Mask>,
        emit: &mut dyn FnMut(&[Mask]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for seg in &pieces[k] {
            let n = prefix.len();
            prefix.extend_from_slice(seg);
            let r = if k < anchors.len() {
                prefix.push(anchors[k]);
                product(k + 1, pieces, anchors, prefix, emit)
            } else {
                emit(prefix)
            };
            prefix.truncate(n);
            r?;
        }
        ControlFlow::Continue(())
    }
    product(0, &pieces, &anchors, &mut Vec::new(), emit)
}

/// The aligned word pairs of a join, before enumeration.
#[derive(Debug)]
pub struct JoinPlan<'a> {
    left: &'a SLanguage,
    right: &'a SLanguage,
    alphabet: Alphabet,
    common: Alphabet,
    left_words: Vec<Vec<Mask>>,
    right_words: Vec<Vec<Mask>>,
    pairs: Vec<(usize, usize)>,
}

impl<'a> JoinPlan<'a> {
    pub fn new(left: &'a SLanguage, right: &'a SLanguage) -> Result<Self> {
        let alphabet = left.alphabet().union(right.alphabet())?;
        let common = left.alphabet().intersection(right.alphabet());
        let cmask = alphabet.mask_of(&common);
        let (r1, r2) = (Remap::new(left.alphabet(), &alphabet), Remap::new(right.alphabet(), &alphabet));
        let left_words: Vec<Vec<Mask>> = left.packed().iter().map(|w| r1.word(&w.0)).collect();
        let right_words: Vec<Vec<Mask>> = right.packed().iter().map(|w| r2.word(&w.0)).collect();
        let mut index: HashMap<Packed, Vec<usize>> = HashMap::new();
        for (j, w) in right_words.iter().enumerate() {
            index.entry(project_masks(w, cmask)).or_default().push(j);
        }
        let mut pairs = Vec::new();
        for (i, w) in left_words.iter().enumerate() {
            if let Some(js) = index.get(&project_masks(w, cmask)) {
                pairs.extend(js.iter().map(|&j| (i, j)));
            }
        }
        Ok(JoinPlan {
            left,
            right,
            alphabet,
            common,
            left_words,
            right_words,
            pairs,
        })
    }

    pub fn operands(&self) -> (&SLanguage, &SLanguage) {
        (self.left, self.right)
    }

    pub fn common(&self) -> &Alphabet {
        &self.common
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of aligned word pairs.
    pub fn aligned_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Exact number of words the join produces, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        let cmask = self.alphabet.mask_of(&self.common);
        self.pairs.iter().fold(0u128, |acc, &(i, j)| {
            acc.saturating_add(pair_join_count(&self.left_words[i], &self.right_words[j], cmask))
        })
    }

    pub fn execute(&self, cap: usize) -> Result<SLanguage> {
        let size = self.size();
        if size > cap as u128 {
            return Err(Error::cap(
                format!("join of {} and {} words over {}", self.left.len(), self.right.len(), self.alphabet),
                size,
                cap,
            ));
        }
        let cmask = self.alphabet.mask_of(&self.common);
        let mut out = Vec::with_capacity(size as usize);
        for &(i, j) in &self.pairs {
            let _ = for_each_pair_join(&self.left_words[i], &self.right_words[j], cmask, &mut |h| {
                out.push(Packed(h.to_vec()));
                ControlFlow::Continue(())
            });
        }
        Ok(SLanguage::from_packed(self.alphabet.clone(), out))
    }
}

fn check_bound(l: &SLanguage, bound: &ParikhVector) -> Result<()> {
    if !l.alphabet().is_subset(bound.alphabet()) {
        return Err(Error::BoundMismatch(format!(
            "operand alphabet {} is not inside {}",
            l.alphabet(),
            bound.alphabet()
        )));
    }
    let local = bound.restrict(l.alphabet());
    let n = l.alphabet().len();
    if let Some(w) = l.packed().iter().find(|w| packed_counts(&w.0, n) != local.counts()) {
        return Err(Error::BoundMismatch(format!(
            "word `{}` does not have the counts {local:?}",
            l.alphabet().unpack(&w.0)
        )));
    }
    Ok(())
}

/// `∫^ν L1 ∩ ∫^ν L2`, restricted to the union of the operand alphabets,
/// computed without ever integrating.
pub fn join(l1: &SLanguage, l2: &SLanguage, bound: &ParikhVector) -> Result<SLanguage> {
    join_capped(l1, l2, bound, DEFAULT_CAP)
}

pub fn join_capped(l1: &SLanguage, l2: &SLanguage, bound: &ParikhVector, cap: usize) -> Result<SLanguage> {
    check_bound(l1, bound)?;
    check_bound(l2, bound)?;
    JoinPlan::new(l1, l2)?.execute(cap)
}

/// Joins k languages, folding in ascending order of cardinality.
pub fn join_all(langs: &[SLanguage], bound: &ParikhVector, cap: usize) -> Result<SLanguage> {
    let mut order: Vec<&SLanguage> = langs.iter().collect();
    order.sort_by_key(|l| l.len());
    let Some((first, rest)) = order.split_first() else {
        return SLanguage::singleton(SWord::empty());
    };
    check_bound(first, bound)?;
    let mut acc = (*first).clone();
    for l in rest {
        acc = join_capped(&acc, l, bound, cap)?;
    }
    Ok(acc)
}
