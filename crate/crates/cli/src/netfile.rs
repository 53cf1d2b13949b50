//! Line-oriented network files.
//!
//! ```text
//! items:
//!   a interval
//!   p point
//!   x 3 x_letter
//! constraints:
//!   p a : point_interval(before)
//!   a b : allen(s, m)
//!   a b : words a {a,b} b; a a b b
//! ```
//!
//! Items are `NAME KIND|COUNT [LETTER]`. A constraint is a scope of item
//! names, a colon and either `ALGEBRA(atoms)` or `words w1; w2; …`.

use std::fmt::Write as _;

use slang_core::{
    build_network, Algebra, Constraint, ConstraintNetwork, Letter, RelationSet, SLanguage, SWord, TemporalItem,
};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemSpec {
    pub name: String,
    pub occurrences: u32,
    pub letter: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Atoms(RelationSet),
    Words(Vec<SWord>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSpec {
    pub scope: Vec<String>,
    pub relation: Relation,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetworkFile {
    pub items: Vec<ItemSpec>,
    pub constraints: Vec<ConstraintSpec>,
}

fn perr(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

enum Section {
    None,
    Items,
    Constraints,
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<NetworkFile, CliError> {
        let mut file = NetworkFile::default();
        let mut section = Section::None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            match body {
                "items:" => {
                    section = Section::Items;
                    continue;
                }
                "constraints:" => {
                    section = Section::Constraints;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::None => return Err(perr(line, "expected `items:` or `constraints:`")),
                Section::Items => file.items.push(parse_item(body, line)?),
                Section::Constraints => file.constraints.push(parse_constraint(body, line)?),
            }
        }
        Ok(file)
    }

    /// Canonical text; parsing it yields an equal file (up to line numbers).
    pub fn render(&self) -> String {
        let mut out = String::from("items:\n");
        for it in &self.items {
            let kind = match it.occurrences {
                1 => "point".to_string(),
                2 => "interval".to_string(),
                n => n.to_string(),
            };
            let _ = write!(out, "  {} {kind}", it.name);
            if let Some(l) = &it.letter {
                let _ = write!(out, " {l}");
            }
            out.push('\n');
        }
        out.push_str("constraints:\n");
        for c in &self.constraints {
            let rel = match &c.relation {
                Relation::Atoms(rs) => format!("{}({})", rs.algebra(), rs.names().join(", ")),
                Relation::Words(ws) => {
                    let ws: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                    format!("words {}", ws.join("; "))
                }
            };
            let _ = writeln!(out, "  {} : {rel}", c.scope.join(" "));
        }
        out
    }

    pub fn to_network(&self) -> Result<ConstraintNetwork, CliError> {
        let mut items = Vec::with_capacity(self.items.len());
        for it in &self.items {
            let letter = Letter::new(it.letter.as_deref().unwrap_or(&it.name))?;
            items.push(TemporalItem::with_letter(&it.name, letter, it.occurrences));
        }
        let letter_of = |name: &str, line: usize| {
            items
                .iter()
                .find(|it| it.name == name)
                .map(|it| it.letter.clone())
                .ok_or_else(|| perr(line, format!("unknown item `{name}`")))
        };
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let language = match &c.relation {
                Relation::Atoms(rs) => {
                    let [x, y] = c.scope.as_slice() else {
                        return Err(perr(c.line, "an algebra relation needs exactly two items"));
                    };
                    rs.to_language(&letter_of(x, c.line)?, &letter_of(y, c.line)?)
                        .map_err(|e| perr(c.line, e.to_string()))?
                }
                Relation::Words(ws) => {
                    let letters = c
                        .scope
                        .iter()
                        .map(|n| letter_of(n, c.line))
                        .collect::<Result<Vec<_>, _>>()?;
                    let alphabet = slang_core::Alphabet::new(letters).map_err(|e| perr(c.line, e.to_string()))?;
                    SLanguage::new(alphabet, ws.iter().cloned()).map_err(|e| perr(c.line, e.to_string()))?
                }
            };
            constraints.push(Constraint::new(c.scope.iter().cloned(), language));
        }
        build_network(items, constraints).map_err(|e| match e {
            slang_core::Error::InvalidConstraint { index, message } => perr(self.constraints[index].line, message),
            e => CliError::Core(e),
        })
    }
}

fn parse_item(body: &str, line: usize) -> Result<ItemSpec, CliError> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    let (name, kind, letter) = match toks.as_slice() {
        [n, k] => (*n, *k, None),
        [n, k, l] => (*n, *k, Some(l.to_string())),
        _ => return Err(perr(line, "expected `NAME KIND|COUNT [LETTER]`")),
    };
    let occurrences = match kind {
        "point" => 1,
        "interval" => 2,
        k => k
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| perr(line, format!("`{k}` is neither point, interval nor a positive count")))?,
    };
    if let Some(l) = &letter {
        Letter::new(l).map_err(|e| perr(line, e.to_string()))?;
    } else {
        Letter::new(name).map_err(|e| perr(line, e.to_string()))?;
    }
    Ok(ItemSpec {
        name: name.to_string(),
        occurrences,
        letter,
    })
}

fn parse_constraint(body: &str, line: usize) -> Result<ConstraintSpec, CliError> {
    let (scope, rel) = body
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `SCOPE : RELATION`"))?;
    let scope: Vec<String> = scope.split_whitespace().map(str::to_string).collect();
    if scope.is_empty() {
        return Err(perr(line, "empty scope"));
    }
    let rel = rel.trim();
    let relation = if let Some(rest) = rel.strip_prefix("words") {
        let ws = rest
            .split(';')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(|w| w.parse::<SWord>().map_err(|e| perr(line, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if ws.is_empty() {
            return Err(perr(line, "`words` needs at least one word"));
        }
        Relation::Words(ws)
    } else {
        let open = rel
            .rfind('(')
            .filter(|_| rel.ends_with(')'))
            .ok_or_else(|| perr(line, "expected `ALGEBRA(atoms)` or `words …`"))?;
        let alg: Algebra = rel[..open].parse().map_err(|e: slang_core::Error| perr(line, e.to_string()))?;
        let rs = RelationSet::parse(alg, &rel[open + 1..rel.len() - 1]).map_err(|e| perr(line, e.to_string()))?;
        Relation::Atoms(rs)
    };
    Ok(ConstraintSpec { scope, relation, line })
}

/// Equality ignoring source line numbers.
pub fn same_content(a: &NetworkFile, b: &NetworkFile) -> bool {
    a.items == b.items
        && a.constraints.len() == b.constraints.len()
        && a
            .constraints
            .iter()
            .zip(&b.constraints)
            .all(|(x, y)| x.scope == y.scope && x.relation == y.relation)
}
