//! Single-resource allocation, unrolled against a fixed request sequence.
//!
//! Requester `i` owns four letters: `ri` (request), `gi` (grant), `ri_bar`
//! (release) and `gi_bar` (deallocation), each occurring once per request.

use crate::error::{Error, Result};
use crate::language::SLanguage;
use crate::solver::{build_network, hasse_graph, Constraint, ConstraintNetwork, PrecedenceGraph, Solver, TemporalItem};
use crate::word::{Alphabet, Letter, SLetter, SWord};
use crate::DEFAULT_CAP;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationInstance {
    k: usize,
    requests: Vec<usize>,
}

impl AllocationInstance {
    /// `requests` lists requester indices (1-based) in request order.
    pub fn new(k: usize, requests: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("at least one requester is needed".into()));
        }
        if requests.is_empty() {
            return Err(Error::InvalidInstance("empty request sequence".into()));
        }
        if let Some(&bad) = requests.iter().find(|&&i| i == 0 || i > k) {
            return Err(Error::InvalidInstance(format!("requester {bad} is outside 1..={k}")));
        }
        Ok(AllocationInstance { k, requests })
    }

    /// Takes `k` as the largest index mentioned.
    pub fn from_requests(requests: Vec<usize>) -> Result<Self> {
        let k = requests.iter().copied().max().unwrap_or(0);
        Self::new(k, requests)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn requests(&self) -> &[usize] {
        &self.requests
    }

    /// Number of requests by requester `i`.
    pub fn count(&self, i: usize) -> usize {
        self.requests.iter().filter(|&&r| r == i).count()
    }

    /// Requesters that issue at least one request, ascending.
    pub fn active(&self) -> Vec<usize> {
        (1..=self.k).filter(|&i| self.count(i) > 0).collect()
    }
}

pub fn request(i: usize) -> Letter {
    letter(format!("r{i}"))
}

pub fn grant(i: usize) -> Letter {
    letter(format!("g{i}"))
}

pub fn release(i: usize) -> Letter {
    letter(format!("r{i}_bar"))
}

pub fn deallocate(i: usize) -> Letter {
    letter(format!("g{i}_bar"))
}

fn letter(name: String) -> Letter {
    Letter::new(&name).expect("generated names are identifiers")
}

fn word(letters: impl IntoIterator<Item = Letter>) -> SWord {
    SWord::new(letters.into_iter().map(SLetter::single).collect())
}

fn one_word(w: SWord) -> Result<SLanguage> {
    SLanguage::singleton(w)
}

fn names(letters: &[Letter]) -> Vec<String> {
    letters.iter().map(|l| l.to_string()).collect()
}

/// Items and constraints of the unrolled specification:
///
/// - grants exclusive, in request order: `g ḡ` pairs following the sequence;
/// - each requester cycles `r g r̄ ḡ` once per request;
/// - grants follow the request order (the grant subsequence);
/// - requests are issued in the given order.
pub fn allocation_network(inst: &AllocationInstance) -> Result<ConstraintNetwork> {
    let active = inst.active();
    let mut items = Vec::new();
    for &i in &active {
        let n = inst.count(i) as u32;
        for l in [request(i), grant(i), release(i), deallocate(i)] {
            items.push(TemporalItem::with_letter(l.as_str(), l.clone(), n));
        }
    }
    let mut constraints = Vec::new();

    let exclusion: Vec<Letter> = inst.requests.iter().flat_map(|&i| [grant(i), deallocate(i)]).collect();
    let scope: Vec<Letter> = active.iter().flat_map(|&i| [grant(i), deallocate(i)]).collect();
    constraints.push(Constraint::new(names(&scope), one_word(word(exclusion))?));

    for &i in &active {
        let cycle: Vec<Letter> = (0..inst.count(i))
            .flat_map(|_| [request(i), grant(i), release(i), deallocate(i)])
            .collect();
        let scope = [request(i), grant(i), release(i), deallocate(i)];
        constraints.push(Constraint::new(names(&scope), one_word(word(cycle))?));
    }

    let grant_scope: Vec<Letter> = active.iter().map(|&i| grant(i)).collect();
    constraints.push(Constraint::new(
        names(&grant_scope),
        one_word(word(inst.requests.iter().map(|&i| grant(i))))?,
    ));

    let request_scope: Vec<Letter> = active.iter().map(|&i| request(i)).collect();
    constraints.push(Constraint::new(
        names(&request_scope),
        one_word(word(inst.requests.iter().map(|&i| request(i))))?,
    ));

    build_network(items, constraints)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AllocationOptions {
    /// Keep only scenarios without simultaneous events.
    pub no_simultaneous: bool,
    pub cap: usize,
}

impl Default for AllocationOptions {
    fn default() -> Self {
        AllocationOptions {
            no_simultaneous: false,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AllocationSolution {
    pub network: ConstraintNetwork,
    pub scenarios: SLanguage,
    pub graph: PrecedenceGraph,
}

pub fn allocation_solve(inst: &AllocationInstance, opts: AllocationOptions) -> Result<AllocationSolution> {
    let network = allocation_network(inst)?;
    let mut scenarios = Solver::new(opts.cap).solve(&network)?.scenarios;
    if opts.no_simultaneous {
        scenarios = scenarios.filter(|w| w.sletters().iter().all(|s| s.len() == 1));
    }
    let graph = hasse_graph(&scenarios)?;
    Ok(AllocationSolution {
        network,
        scenarios,
        graph,
    })
}

/// The subword of `w` over the grant letters of `inst`.
pub fn grant_subsequence(inst: &AllocationInstance, w: &SWord) -> SWord {
    let grants = Alphabet::new(inst.active().into_iter().map(grant)).expect("distinct grants");
    w.project(&grants)
}
