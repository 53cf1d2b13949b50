//! Thue-rewriting lattices over Delannoy languages.
//!
//! With a total order `a₁ < … < aₙ` on letters, S-letters are ordered by
//! `P < Q ⇔ every x ∈ P is below every y ∈ Q`, and the rewriting rules are
//! `PQ → P∪Q` and `P∪Q → QP`. Starting from `a₁^{p₁}…aₙ^{pₙ}` they reach
//! every word of `L(p₁,…,pₙ)`; the reflexive-transitive closure of one step
//! is the lattice order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::delannoy::{delannoy_number_n, DelannoyIndex};
use crate::error::{Error, Result};
use crate::word::{Letter, SLetter, SWord};
use crate::Count;

/// The letter order a Thue system is built on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThueSystem {
    order: Vec<Letter>,
}

impl ThueSystem {
    pub fn new(order: Vec<Letter>) -> Result<Self> {
        let distinct: BTreeSet<&Letter> = order.iter().collect();
        if distinct.len() != order.len() {
            return Err(Error::DuplicateItem("letter repeated in Thue order".into()));
        }
        if order.len() > 64 {
            return Err(Error::AlphabetTooLarge(order.len()));
        }
        Ok(ThueSystem { order })
    }

    /// `a`, `b`, `c`, … for the first `n` positions (n ≤ 26).
    pub fn standard(n: usize) -> Self {
        assert!(n <= 26, "standard letters run out after z");
        let order = (0..n)
            .map(|i| Letter::new(&((b'a' + i as u8) as char).to_string()).expect("ascii letter"))
            .collect();
        ThueSystem { order }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.order
    }

    fn encode(&self, w: &SWord) -> Result<Vec<u64>> {
        w.sletters()
            .iter()
            .map(|s| {
                s.letters().iter().try_fold(0u64, |m, l| {
                    let r = self
                        .order
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| Error::LetterOutsideAlphabet(l.to_string()))?;
                    Ok(m | (1 << r))
                })
            })
            .collect()
    }

    fn decode(&self, w: &[u64]) -> SWord {
        SWord::new(
            w.iter()
                .map(|&m| {
                    let mut v = Vec::new();
                    let mut m = m;
                    while m != 0 {
                        v.push(self.order[m.trailing_zeros() as usize].clone());
                        m &= m - 1;
                    }
                    SLetter::new(v).expect("nonempty S-letter")
                })
                .collect(),
        )
    }
}

/// P < Q: every rank of P is below every rank of Q.
fn below(p: u64, q: u64) -> bool {
    63 - p.leading_zeros() < q.trailing_zeros()
}

fn successors_ranked(w: &[u64], out: &mut Vec<Vec<u64>>) {
    for i in 0..w.len() {
        if i + 1 < w.len() && below(w[i], w[i + 1]) {
            let mut v = Vec::with_capacity(w.len() - 1);
            v.extend_from_slice(&w[..i]);
            v.push(w[i] | w[i + 1]);
            v.extend_from_slice(&w[i + 2..]);
            out.push(v);
        }
        // Split R = P ∪ Q with P < Q, written QP.
        let r = w[i];
        let mut low = 0u64;
        let mut rest = r;
        while rest.count_ones() > 1 {
            low |= rest & rest.wrapping_neg();
            rest &= rest - 1;
            let mut v = Vec::with_capacity(w.len() + 1);
            v.extend_from_slice(&w[..i]);
            v.push(rest);
            v.push(low);
            v.extend_from_slice(&w[i + 1..]);
            out.push(v);
        }
    }
}

/// All words reachable from `w` by one rewrite.
pub fn thue_successors(w: &SWord, sys: &ThueSystem) -> Result<BTreeSet<SWord>> {
    let ranked = sys.encode(w)?;
    let mut out = Vec::new();
    successors_ranked(&ranked, &mut out);
    Ok(out.iter().map(|v| sys.decode(v)).collect())
}

/// Fixed-width bit rows.
#[derive(Clone, Debug)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            words,
            bits: vec![0; n * words],
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.words {
            let v = self.bits[src * self.words + k];
            self.bits[dst * self.words + k] |= v;
        }
    }
}

fn popcount(row: &[u64]) -> u32 {
    row.iter().map(|w| w.count_ones()).sum()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Nodes of `L(p)` with the covering relation of the Thue order.
#[derive(Clone, Debug)]
pub struct Lattice {
    index: DelannoyIndex,
    nodes: Vec<SWord>,
    /// One-step rewrites, `(lower, upper)`, sorted.
    covers: Vec<(usize, usize)>,
    bottom: usize,
    top: usize,
    /// `up[i]` holds every `j` with `i ≤ j`.
    up: BitMatrix,
    /// `down[i]` holds every `j` with `j ≤ i`.
    down: BitMatrix,
}

pub fn lattice_from(p: &DelannoyIndex, sys: &ThueSystem, cap: usize) -> Result<Lattice> {
    if sys.letters().len() != p.len() {
        return Err(Error::BoundMismatch(format!(
            "Thue order has {} letters for an index of length {}",
            sys.letters().len(),
            p.len()
        )));
    }
    let size = delannoy_number_n(p);
    if size > Count::from(cap) {
        return Err(Error::cap(format!("lattice L{p}"), &size, cap));
    }
    let seed: Vec<u64> = p
        .as_slice()
        .iter()
        .enumerate()
        .flat_map(|(r, &c)| std::iter::repeat_n(1u64 << r, c as usize))
        .collect();

    let mut ids: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut ranked: Vec<Vec<u64>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(seed.clone(), 0);
    ranked.push(seed);
    queue.push_back(0);
    let mut succ = Vec::new();
    while let Some(u) = queue.pop_front() {
        succ.clear();
        successors_ranked(&ranked[u], &mut succ);
        for v in succ.drain(..) {
            let next = ranked.len();
            let id = *ids.entry(v.clone()).or_insert_with(|| {
                ranked.push(v);
                queue.push_back(next);
                next
            });
            edges.push((u, id));
        }
    }

    // Renumber in canonical word order.
    let words: Vec<SWord> = ranked.iter().map(|r| sys.decode(r)).collect();
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&a, &b| words[a].cmp(&words[b]));
    let mut pos = vec![0; words.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let nodes: Vec<SWord> = order.iter().map(|&old| words[old].clone()).collect();
    let mut covers: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
    covers.sort_unstable();
    covers.dedup();

    let n = nodes.len();
    let mut succs = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(u, v) in &covers {
        succs[u].push(v);
        indeg[v] += 1;
    }
    // Kahn; a leftover node would mean a rewrite cycle.
    let mut topo = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(u) = ready.pop() {
        topo.push(u);
        for &v in &succs[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
    }
    assert_eq!(topo.len(), n, "Thue rewriting is acyclic");
    let mut up = BitMatrix::new(n);
    for &u in topo.iter().rev() {
        up.set(u, u);
        for &v in &succs[u] {
            up.or_row_into(v, u);
        }
    }
    let mut down = BitMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            if up.get(i, j) {
                down.set(j, i);
            }
        }
    }
    let bottom = pos[0];
    let top = (0..n)
        .find(|&i| succs[i].is_empty())
        .expect("finite acyclic graph has a sink");
    Ok(Lattice {
        index: p.clone(),
        nodes,
        covers,
        bottom,
        top,
        up,
        down,
    })
}

/// Outcome of a distributivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distributivity {
    Distributive,
    /// `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    Counterexample { x: SWord, y: SWord, z: SWord },
}

/// Outcome of a modularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modularity {
    Modular,
    /// A pentagon sublattice `[bottom, a, c, b, top]` with `a < c`,
    /// `a ∧ b = c ∧ b = bottom` and `a ∨ b = c ∨ b = top`.
    Pentagon([SWord; 5]),
}

/// Meet and join tables, available once the order is known to be a lattice.
struct Ops {
    n: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl Ops {
    fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }
}

impl Lattice {
    pub fn index(&self) -> &DelannoyIndex {
        &self.index
    }

    pub fn nodes(&self) -> &[SWord] {
        &self.nodes
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn bottom(&self) -> &SWord {
        &self.nodes[self.bottom]
    }

    pub fn top(&self) -> &SWord {
        &self.nodes[self.top]
    }

    pub fn position(&self, w: &SWord) -> Option<usize> {
        self.nodes.binary_search(w).ok()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up.get(a, b)
    }

    pub fn lower_covers(&self, i: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(_, v)| v == i).map(|&(u, _)| u).collect()
    }

    fn bound(&self, set: &[u64], rows: &BitMatrix) -> Option<usize> {
        // The least element of `set` is the one whose own `rows` set
        // (up-set for joins, down-set for meets) contains all of `set`.
        let mut best: Option<(u32, usize)> = None;
        for (k, &word) in set.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let i = k * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let c = popcount(rows.row(i));
                if best.is_none_or(|(bc, _)| c > bc) {
                    best = Some((c, i));
                }
            }
        }
        let (_, i) = best?;
        is_subset(set, rows.row(i)).then_some(i)
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let common: Vec<u64> = self.up.row(a).iter().zip(self.up.row(b)).map(|(x, y)| x & y).collect();
        self.bound(&common, &self.up)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let common: Vec<u64> = self.down.row(a).iter().zip(self.down.row(b)).map(|(x, y)| x & y).collect();
        self.bound(&common, &self.down)
    }

    fn ops(&self) -> Result<Ops> {
        let n = self.nodes.len();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let m = self.meet(a, b).ok_or_else(|| {
                    Error::NotALattice(format!("no meet for `{}` and `{}`", self.nodes[a], self.nodes[b]))
                })?;
                let j = self.join(a, b).ok_or_else(|| {
                    Error::NotALattice(format!("no join for `{}` and `{}`", self.nodes[a], self.nodes[b]))
                })?;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
            }
        }
        Ok(Ops { n, meet, join })
    }

    /// Verifies that every pair has a meet and a join.
    pub fn verify(&self) -> Result<()> {
        self.ops().map(|_| ())
    }

    pub fn check_distributive(&self) -> Result<Distributivity> {
        let ops = self.ops()?;
        let n = ops.n;
        for x in 0..n {
            for y in 0..n {
                let xy = ops.meet(x, y);
                for z in y + 1..n {
                    let lhs = ops.meet(x, ops.join(y, z));
                    let rhs = ops.join(xy, ops.meet(x, z));
                    if lhs != rhs {
                        return Ok(Distributivity::Counterexample {
                            x: self.nodes[x].clone(),
                            y: self.nodes[y].clone(),
                            z: self.nodes[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(Distributivity::Distributive)
    }

    pub fn check_modular(&self) -> Result<Modularity> {
        let ops = self.ops()?;
        let n = ops.n;
        for a in 0..n {
            for c in 0..n {
                if a == c || !self.leq(a, c) {
                    continue;
                }
                for b in 0..n {
                    let o = ops.meet(a, b);
                    let i = ops.join(a, b);
                    if ops.meet(c, b) == o && ops.join(c, b) == i {
                        return Ok(Modularity::Pentagon(
                            [o, a, c, b, i].map(|k| self.nodes[k].clone()),
                        ));
                    }
                }
            }
        }
        Ok(Modularity::Modular)
    }

    /// Nodes with exactly one lower cover. Binary indices only.
    pub fn union_irreducibles(&self) -> Result<Vec<SWord>> {
        if self.index.len() != 2 {
            return Err(Error::NonBinaryIndex(self.index.len()));
        }
        let mut lower = vec![0usize; self.nodes.len()];
        for &(_, v) in &self.covers {
            lower[v] += 1;
        }
        Ok((0..self.nodes.len())
            .filter(|&i| lower[i] == 1)
            .map(|i| self.nodes[i].clone())
            .collect())
    }

    /// Graphviz rendering of the covering graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=LR;\n");
        for (i, w) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{w}\"];");
        }
        for &(u, v) in &self.covers {
            let _ = writeln!(out, "  n{u} -> n{v};");
        }
        out.push_str("}\n");
        out
    }

    /// Plain text: one node per line, then one cover per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nodes {}", self.nodes.len());
        for w in &self.nodes {
            let _ = writeln!(out, "  {w}");
        }
        let _ = writeln!(out, "covers {}", self.covers.len());
        for &(u, v) in &self.covers {
            let _ = writeln!(out, "  {} -> {}", self.nodes[u], self.nodes[v]);
        }
        out
    }
}
