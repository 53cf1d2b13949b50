//! Constraint networks over temporal items and their scenario languages.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::ops::ControlFlow;

use crate::delannoy::{delannoy_language, delannoy_number_n, DelannoyIndex};
use crate::error::{Error, Result};
use crate::language::{project_masks, Mask, Packed, Remap, SLanguage};
use crate::ops::{for_each_pair_join, Integration, JoinPlan};
use crate::word::{Alphabet, Letter, ParikhVector, SWord};
use crate::{Count, DEFAULT_CAP};

/// A named object with a fixed number of point occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalItem {
    pub name: String,
    pub letter: Letter,
    pub occurrences: u32,
}

impl TemporalItem {
    /// An item whose letter is its own name.
    pub fn new(name: &str, occurrences: u32) -> Result<Self> {
        Ok(TemporalItem {
            name: name.to_string(),
            letter: Letter::new(name)?,
            occurrences,
        })
    }

    pub fn with_letter(name: &str, letter: Letter, occurrences: u32) -> Self {
        TemporalItem {
            name: name.to_string(),
            letter,
            occurrences,
        }
    }

    pub fn point(name: &str) -> Result<Self> {
        Self::new(name, 1)
    }

    pub fn interval(name: &str) -> Result<Self> {
        Self::new(name, 2)
    }
}

/// An ordered scope of item names and the admitted situations among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<String>,
    pub language: SLanguage,
}

impl Constraint {
    pub fn new<S: Into<String>>(scope: impl IntoIterator<Item = S>, language: SLanguage) -> Self {
        Constraint {
            scope: scope.into_iter().map(Into::into).collect(),
            language,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintNetwork {
    items: Vec<TemporalItem>,
    constraints: Vec<Constraint>,
    alphabet: Alphabet,
    profile: ParikhVector,
}

pub fn build_network(items: Vec<TemporalItem>, constraints: Vec<Constraint>) -> Result<ConstraintNetwork> {
    let mut names = BTreeSet::new();
    let mut letters = BTreeSet::new();
    for it in &items {
        if it.occurrences == 0 {
            return Err(Error::InvalidItem {
                name: it.name.clone(),
                message: "needs at least one occurrence".into(),
            });
        }
        if !names.insert(it.name.as_str()) {
            return Err(Error::DuplicateItem(it.name.clone()));
        }
        if !letters.insert(it.letter.clone()) {
            return Err(Error::DuplicateItem(it.letter.to_string()));
        }
    }
    let alphabet = Alphabet::new(letters)?;
    let profile = ParikhVector::from_pairs(items.iter().map(|it| (it.letter.clone(), it.occurrences)))?;
    let by_name: HashMap<&str, &TemporalItem> = items.iter().map(|it| (it.name.as_str(), it)).collect();

    let mut normalized = Vec::with_capacity(constraints.len());
    for (index, c) in constraints.into_iter().enumerate() {
        let bad = |message: String| Error::InvalidConstraint { index, message };
        if c.scope.is_empty() {
            return Err(bad("empty scope".into()));
        }
        let mut scope_letters = Vec::new();
        for n in &c.scope {
            let it = by_name.get(n.as_str()).ok_or_else(|| Error::UnknownItem(n.clone()))?;
            scope_letters.push(it.letter.clone());
        }
        let scope_alpha = Alphabet::new(scope_letters.iter().cloned())?;
        if scope_alpha.len() != c.scope.len() {
            return Err(bad("item repeated in scope".into()));
        }
        if c.language.is_empty() {
            return Err(bad("empty language".into()));
        }
        let lang = c
            .language
            .widen(&scope_alpha)
            .map_err(|_| bad(format!("words use letters outside the scope {scope_alpha}")))?;
        let local = profile.restrict(&scope_alpha);
        if let Some(w) = lang.iter().find(|w| w.parikh(&scope_alpha).map_or(true, |p| p != local)) {
            return Err(bad(format!("word `{w}` does not have the item profile {local}")));
        }
        normalized.push(Constraint {
            scope: c.scope,
            language: lang,
        });
    }
    Ok(ConstraintNetwork {
        items,
        constraints: normalized,
        alphabet,
        profile,
    })
}

impl ConstraintNetwork {
    pub fn items(&self) -> &[TemporalItem] {
        &self.items
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Occurrence counts of every item letter.
    pub fn profile(&self) -> &ParikhVector {
        &self.profile
    }

    pub fn item(&self, name: &str) -> Option<&TemporalItem> {
        self.items.iter().find(|it| it.name == name)
    }

    /// Size of the unconstrained scenario space.
    pub fn scenario_space(&self) -> Count {
        self.index().map_or(Count::from(1u32), |p| delannoy_number_n(&p))
    }

    /// `None` for a network without items.
    fn index(&self) -> Option<DelannoyIndex> {
        DelannoyIndex::new(self.profile.counts().to_vec()).ok()
    }

    /// Whether `w` is a globally consistent scenario.
    pub fn admits(&self, w: &SWord) -> bool {
        w.parikh(&self.alphabet).is_ok_and(|p| p == self.profile)
            && self
                .constraints
                .iter()
                .all(|c| c.language.contains(&w.project(c.language.alphabet())))
    }
}

/// One join performed while solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinStep {
    /// Index of the constraint folded in.
    pub constraint: usize,
    /// Letters covered so far.
    pub alphabet: Alphabet,
    /// Words of the accumulated language over `alphabet`.
    pub cardinality: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub scenarios: SLanguage,
    pub steps: Vec<JoinStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solver {
    pub cap: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { cap: DEFAULT_CAP }
    }
}

/// Greedy join order: the smallest language first, then repeatedly the
/// constraint sharing most letters with what is covered, smaller languages
/// and lower indices breaking ties.
pub fn join_order(net: &ConstraintNetwork) -> Vec<usize> {
    let cs = net.constraints();
    let mut left: Vec<usize> = (0..cs.len()).collect();
    let mut order = Vec::with_capacity(cs.len());
    let mut covered = Alphabet::new([]).expect("empty alphabet");
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .min_by_key(|&(_, &i)| {
                let a = cs[i].language.alphabet();
                let shared = if order.is_empty() { 0 } else { a.intersection(&covered).len() };
                (std::cmp::Reverse(shared), cs[i].language.len(), i)
            })
            .expect("nonempty");
        let i = left.remove(pos);
        covered = covered.union(cs[i].language.alphabet()).expect("within network alphabet");
        order.push(i);
    }
    order
}

fn check_order(net: &ConstraintNetwork, order: &[usize]) -> Result<()> {
    let n = net.constraints().len();
    let seen: BTreeSet<usize> = order.iter().copied().collect();
    if seen.len() != order.len() || order.iter().any(|&i| i >= n) {
        return Err(Error::InvalidConstraint {
            index: order.iter().copied().find(|&i| i >= n).unwrap_or(0),
            message: "join order must list distinct constraint indices".into(),
        });
    }
    Ok(())
}

impl Solver {
    pub fn new(cap: usize) -> Self {
        Solver { cap }
    }

    /// Folds constraints by join in `order`, returning the accumulated
    /// language after every step. Stops early once a step is empty.
    fn fold(&self, net: &ConstraintNetwork, order: &[usize]) -> Result<(Vec<JoinStep>, SLanguage)> {
        check_order(net, order)?;
        let cs = net.constraints();
        let mut steps = Vec::with_capacity(order.len());
        let mut acc: Option<SLanguage> = None;
        for &i in order {
            let next = match &acc {
                None => cs[i].language.clone(),
                Some(a) => JoinPlan::new(a, &cs[i].language)?.execute(self.cap).map_err(|e| match e {
                    Error::CapExceeded { size, cap, .. } => Error::CapExceeded {
                        what: format!(
                            "join step {} (constraint {i} on {}) onto {}",
                            steps.len() + 1,
                            cs[i].scope.join(","),
                            a.alphabet()
                        ),
                        size,
                        cap,
                    },
                    e => e,
                })?,
            };
            steps.push(JoinStep {
                constraint: i,
                alphabet: next.alphabet().clone(),
                cardinality: next.len(),
            });
            let empty = next.is_empty();
            acc = Some(next);
            if empty {
                break;
            }
        }
        let acc = acc.unwrap_or_else(|| SLanguage::singleton(SWord::empty()).expect("empty word"));
        Ok((steps, acc))
    }

    /// Every globally consistent scenario.
    pub fn solve(&self, net: &ConstraintNetwork) -> Result<Solution> {
        self.solve_in_order(net, &join_order(net))
    }

    pub fn solve_in_order(&self, net: &ConstraintNetwork, order: &[usize]) -> Result<Solution> {
        if order.is_empty() {
            check_order(net, order)?;
            let scenarios = match net.index() {
                None => SLanguage::singleton(SWord::empty())?,
                Some(p) => delannoy_language(&p, net.alphabet().letters(), self.cap)?,
            };
            return Ok(Solution {
                scenarios,
                steps: Vec::new(),
            });
        }
        let (steps, acc) = self.fold(net, order)?;
        let scenarios = if acc.is_empty() {
            SLanguage::empty(net.alphabet().clone())
        } else {
            // Items outside every scope are free.
            Integration::new(acc, net.profile().clone())?.enumerate(self.cap)?
        };
        Ok(Solution { scenarios, steps })
    }

    /// `|∫ L_{o1} ∩ … ∩ L_{oi}|` over the whole network, for each prefix of
    /// `order`. Entries after an empty step are 0.
    pub fn intermediate_cardinalities(&self, net: &ConstraintNetwork, order: &[usize]) -> Result<Vec<Count>> {
        let mut out = Vec::with_capacity(order.len());
        let cs = net.constraints();
        check_order(net, order)?;
        let mut acc: Option<SLanguage> = None;
        for &i in order {
            let next = match &acc {
                None => cs[i].language.clone(),
                Some(a) if a.is_empty() => a.clone(),
                Some(a) => JoinPlan::new(a, &cs[i].language)?.execute(self.cap)?,
            };
            out.push(Integration::new(next.clone(), net.profile().clone())?.count());
            acc = Some(next);
        }
        Ok(out)
    }

    /// Whether some scenario exists. Searches depth first, one partial
    /// scenario at a time, and stops at the first witness.
    pub fn satisfiable(&self, net: &ConstraintNetwork) -> Result<bool> {
        let alphabet = net.alphabet();
        let order = join_order(net);
        struct Step {
            common: Mask,
            by_projection: HashMap<Packed, Vec<Vec<Mask>>>,
        }
        let mut covered: Mask = 0;
        let mut steps = Vec::with_capacity(order.len());
        for &i in &order {
            let lang = &net.constraints()[i].language;
            let remap = Remap::new(lang.alphabet(), alphabet);
            let scope = alphabet.mask_of(lang.alphabet());
            let common = covered & scope;
            let mut by_projection: HashMap<Packed, Vec<Vec<Mask>>> = HashMap::new();
            for w in lang.packed() {
                let w = remap.word(&w.0);
                by_projection.entry(project_masks(&w, common)).or_default().push(w);
            }
            steps.push(Step { common, by_projection });
            covered |= scope;
        }

        fn go(steps: &[Step], w: &[Mask]) -> ControlFlow<()> {
            let Some((step, rest)) = steps.split_first() else {
                return ControlFlow::Break(());
            };
            if let Some(candidates) = step.by_projection.get(&project_masks(w, step.common)) {
                for c in candidates {
                    for_each_pair_join(w, c, step.common, &mut |h| go(rest, h))?;
                }
            }
            ControlFlow::Continue(())
        }
        Ok(go(&steps, &[]).is_break())
    }
}

/// One point occurrence: the `index`-th (from 1) occurrence of `letter`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub letter: Letter,
    pub index: u32,
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.letter, self.index)
    }
}

/// Precedences and simultaneities common to every scenario of a language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecedenceGraph {
    nodes: Vec<Occurrence>,
    /// Transitive reduction of "strictly before in every scenario".
    edges: Vec<(usize, usize)>,
    /// Pairs simultaneous in every scenario, `i < j`.
    fused: Vec<(usize, usize)>,
}

pub fn hasse_graph(l: &SLanguage) -> Result<PrecedenceGraph> {
    let parikh = l.uniform_parikh()?;
    let mut nodes = Vec::new();
    for (letter, n) in parikh.iter() {
        nodes.extend((1..=n).map(|index| Occurrence {
            letter: letter.clone(),
            index,
        }));
    }
    let k = nodes.len();
    let slot: BTreeMap<&Occurrence, usize> = nodes.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut before = vec![true; k * k];
    let mut same = vec![true; k * k];
    let mut pos = vec![0usize; k];
    for w in l.iter() {
        let mut seen: HashMap<&Letter, u32> = HashMap::new();
        for (t, s) in w.sletters().iter().enumerate() {
            for x in s.letters() {
                let c = seen.entry(x).or_default();
                *c += 1;
                let occ = Occurrence {
                    letter: x.clone(),
                    index: *c,
                };
                pos[slot[&occ]] = t;
            }
        }
        for i in 0..k {
            for j in 0..k {
                before[i * k + j] &= pos[i] < pos[j];
                same[i * k + j] &= pos[i] == pos[j];
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if before[i * k + j] && !(0..k).any(|m| before[i * k + m] && before[m * k + j]) {
                edges.push((i, j));
            }
        }
    }
    let fused = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|&(i, j)| same[i * k + j])
        .collect();
    Ok(PrecedenceGraph { nodes, edges, fused })
}

impl PrecedenceGraph {
    pub fn nodes(&self) -> &[Occurrence] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn fused(&self) -> &[(usize, usize)] {
        &self.fused
    }

    fn find(&self, letter: &str, index: u32) -> Option<usize> {
        self.nodes.iter().position(|o| o.letter.as_str() == letter && o.index == index)
    }

    /// Whether the reduction contains `from.i → to.j`.
    pub fn has_edge(&self, from: (&str, u32), to: (&str, u32)) -> bool {
        match (self.find(from.0, from.1), self.find(to.0, to.1)) {
            (Some(a), Some(b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }

    /// Whether `from` precedes `to` in every scenario (edge path exists).
    pub fn precedes(&self, from: (&str, u32), to: (&str, u32)) -> bool {
        let (Some(a), Some(b)) = (self.find(from.0, from.1), self.find(to.0, to.1)) else {
            return false;
        };
        let mut stack = vec![a];
        let mut seen = vec![false; self.nodes.len()];
        while let Some(u) = stack.pop() {
            for &(x, y) in &self.edges {
                if x == u && !seen[y] {
                    if y == b {
                        return true;
                    }
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn named_edges(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].to_string(), self.nodes[b].to_string()))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.named_edges() {
            let _ = writeln!(out, "{a} -> {b}");
        }
        for &(a, b) in &self.fused {
            let _ = writeln!(out, "{} = {}", self.nodes[a], self.nodes[b]);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph precedence {\n");
        for o in &self.nodes {
            let _ = writeln!(out, "  \"{o}\";");
        }
        for (a, b) in self.named_edges() {
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\";");
        }
        for &(a, b) in &self.fused {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [dir=none, style=dashed];", self.nodes[a], self.nodes[b]);
        }
        out.push_str("}\n");
        out
    }
}
