//! The `slang` command line.

pub mod netfile;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use slang_core::{
    allocation_solve, compose, delannoy_language, delannoy_number_n, hasse_graph, lattice_from, mixed_table,
    transitivity_table, Algebra, AllocationInstance, AllocationOptions, DelannoyIndex, Distributivity, Letter,
    Modularity, RelationSet, Solver, ThueSystem, DEFAULT_CAP,
};
use thiserror::Error;

pub use netfile::NetworkFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] slang_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(slang_core::Error::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Rows,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "slang", version, about = "Qualitative temporal reasoning with S-languages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Largest language any step may materialize.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true)]
    pub cap: usize,
    /// Print per-join cardinalities.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every consistent scenario of a network file.
    Solve { file: String },
    /// Decide satisfiability of a network file (exit 1 when unsatisfiable).
    Sat { file: String },
    /// Compose two relations, e.g. `compose --algebra allen o o`.
    Compose {
        #[arg(long, default_value = "allen")]
        algebra: Algebra,
        /// Algebra of the second relation when it differs from the first.
        #[arg(long)]
        second: Option<Algebra>,
        r1: String,
        r2: String,
    },
    /// Print a composition table.
    Table {
        #[arg(long, default_value = "allen")]
        algebra: Algebra,
        /// Column algebra, for mixed tables.
        #[arg(long)]
        with: Option<Algebra>,
    },
    /// Delannoy number of an index.
    Count {
        #[arg(required = true)]
        index: Vec<u32>,
    },
    /// List the Delannoy language of an index over letters a, b, c, …
    Enumerate {
        #[arg(required = true)]
        index: Vec<u32>,
    },
    /// The Thue-rewriting lattice of an index.
    Lattice {
        #[arg(required = true)]
        index: Vec<u32>,
    },
    /// Solve the allocation problem for a request sequence.
    Alloc {
        /// Requester indices in request order, e.g. `1,2,3,1,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        requests: Vec<usize>,
        /// Number of requesters (defaults to the largest index).
        #[arg(long)]
        k: Option<usize>,
        /// Keep only scenarios without simultaneous events.
        #[arg(long)]
        no_simultaneous: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs a command line (the first element is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn index(p: &[u32]) -> Result<DelannoyIndex, CliError> {
    Ok(DelannoyIndex::new(p.to_vec())?)
}

fn standard_letters(n: usize) -> Result<Vec<Letter>, CliError> {
    if n > 26 {
        return Err(CliError::Usage("at most 26 components are supported".into()));
    }
    Ok(ThueSystem::standard(n).letters().to_vec())
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let mut out = String::new();
    let solver = Solver::new(cli.cap);
    match &cli.command {
        Command::Solve { file } => {
            let net = NetworkFile::parse(&read(file)?)?.to_network()?;
            if cli.trace {
                let order: Vec<usize> = (0..net.constraints().len()).collect();
                let counts = solver.intermediate_cardinalities(&net, &order)?;
                let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "trace {}", counts.join(" "));
            }
            let sol = solver.solve(&net)?;
            match cli.format {
                Format::Dot => {
                    if sol.scenarios.is_empty() {
                        return Err(CliError::Usage("no scenario to draw: the network is unsatisfiable".into()));
                    }
                    out.push_str(&hasse_graph(&sol.scenarios)?.to_dot());
                }
                Format::Rows => out.push_str(&sol.scenarios.to_text()),
                Format::Text => {
                    if sol.scenarios.is_empty() {
                        out.push_str("UNSAT\n");
                    } else {
                        let _ = writeln!(out, "SAT {}", sol.scenarios.len());
                        out.push_str(&sol.scenarios.to_text());
                    }
                }
            }
            Ok((0, out))
        }
        Command::Sat { file } => {
            let net = NetworkFile::parse(&read(file)?)?.to_network()?;
            let sat = solver.satisfiable(&net)?;
            out.push_str(if sat { "SAT\n" } else { "UNSAT\n" });
            Ok((if sat { 0 } else { 1 }, out))
        }
        Command::Compose {
            algebra,
            second,
            r1,
            r2,
        } => {
            let a = RelationSet::parse(*algebra, r1)?;
            let b = RelationSet::parse(second.unwrap_or(*algebra), r2)?;
            let _ = writeln!(out, "{}", compose(&a, &b)?);
            Ok((0, out))
        }
        Command::Table { algebra, with } => {
            let t = match with {
                Some(cols) => mixed_table(*algebra, *cols)?,
                None => transitivity_table(*algebra)?,
            };
            out.push_str(&match cli.format {
                Format::Rows => t.to_rows(),
                _ => t.to_text(),
            });
            Ok((0, out))
        }
        Command::Count { index: p } => {
            let _ = writeln!(out, "{}", delannoy_number_n(&index(p)?));
            Ok((0, out))
        }
        Command::Enumerate { index: p } => {
            let l = delannoy_language(&index(p)?, &standard_letters(p.len())?, cli.cap)?;
            out.push_str(&l.to_text());
            Ok((0, out))
        }
        Command::Lattice { index: p } => {
            let sys = ThueSystem::new(standard_letters(p.len())?)?;
            let l = lattice_from(&index(p)?, &sys, cli.cap)?;
            match cli.format {
                Format::Dot => out.push_str(&l.to_dot()),
                _ => {
                    out.push_str(&l.to_text());
                    let d = matches!(l.check_distributive()?, Distributivity::Distributive);
                    let _ = writeln!(out, "distributive {}", if d { "yes" } else { "no" });
                    match l.check_modular()? {
                        Modularity::Modular => out.push_str("modular yes\n"),
                        Modularity::Pentagon(w) => {
                            let w: Vec<String> = w.iter().map(|x| format!("[{x}]")).collect();
                            let _ = writeln!(out, "modular no, pentagon {}", w.join(" "));
                        }
                    }
                    if p.len() == 2 {
                        let _ = writeln!(out, "union-irreducibles {}", l.union_irreducibles()?.len());
                    }
                }
            }
            Ok((0, out))
        }
        Command::Alloc {
            requests,
            k,
            no_simultaneous,
        } => {
            let inst = match k {
                Some(k) => AllocationInstance::new(*k, requests.clone())?,
                None => AllocationInstance::from_requests(requests.clone())?,
            };
            let sol = allocation_solve(
                &inst,
                AllocationOptions {
                    no_simultaneous: *no_simultaneous,
                    cap: cli.cap,
                },
            )?;
            match cli.format {
                Format::Dot => out.push_str(&sol.graph.to_dot()),
                Format::Rows => out.push_str(&sol.scenarios.to_text()),
                Format::Text => {
                    let _ = writeln!(out, "scenarios {}", sol.scenarios.len());
                    out.push_str(&sol.graph.to_text());
                }
            }
            Ok((0, out))
        }
    }
}
