//! Command-line front end for the `bicoset-core` toolkit.
//!
//! Each run executes exactly one subcommand and writes one JSON document
//! (schema `bicoset-lab/1`) to stdout, or atomically to a file given with
//! `--out`. The document embeds a run manifest recording the command, its
//! parameters (including the full content of any input file), the seed, the
//! tool version, and the outcome; two runs with identical manifests produce
//! byte-identical documents.
//!
//! Exit codes:
//!
//! - `0` — success;
//! - `1` — usage error: bad flags, malformed input, out-of-range parameters;
//! - `2` — a verification check failed; the JSON document is still written,
//!   with outcome `"check-failed"` and the failing condition named;
//! - `3` — a configured resource bound was exceeded (trial-division bound,
//!   coset index bound, or automorphism search budget).
//!
//! The environment variable `BICOSET_LAB_FACTOR_BOUND` overrides the global
//! trial-division bound used when factoring plain integers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use bicoset_core::bicoset::{faithfulness_check, BiCosetError, BiCosetGraph};
use bicoset_core::catalog::{self, CatalogError, GroupSpec};
use bicoset_core::cosetcert::{
    intersection_matrix, normalizer_criterion_check, semisymmetry_check, Assumption,
};
use bicoset_core::factnum::{
    diophantine_scan, set_factor_bound, zsigmondy_scan, FactnumError, FactoredNat,
    ZsigmondyOutcome,
};
use bicoset_core::graphauto::{analyze, Graph, GraphError, SymmetryReport};
use bicoset_core::permcore::{
    pair_stabilizer, product_of_cycles, transposition, Perm, PermGroup, SetPartition,
};

/// Schema identifier stamped on every document this tool emits.
const SCHEMA: &str = "bicoset-lab/1";

/// Largest accepted block size for `verify three-blocks`.
const MAX_THREE_BLOCK_SIZE: u32 = 10_000;
/// Largest accepted degree in a bi-coset input file.
const MAX_INPUT_DEGREE: u32 = 100_000;
/// Largest accepted `--k-max` for the binomial-equation scan.
const MAX_DIOPHANTINE_K: u64 = 100;
/// Largest accepted `--q-max` for the primitive-prime-divisor scan.
const MAX_ZSIGMONDY_Q: u64 = 200;
/// Largest accepted `--m-max` for the primitive-prime-divisor scan.
const MAX_ZSIGMONDY_M: u32 = 50;

// ---------------------------------------------------------------------------
// Command-line grammar
// ---------------------------------------------------------------------------

/// Exact double-coset certificates, bi-coset graphs, and order invariants.
#[derive(Parser)]
#[command(name = "bicoset-lab", version, disable_help_subcommand = true)]
struct Cli {
    /// Randomness seed recorded in the run manifest (every command is
    /// deterministic; the seed only tags the output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the JSON document to this file (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-derive and check a built-in worked example.
    Verify {
        #[command(subcommand)]
        example: VerifyExample,
    },
    /// Order invariants of an almost simple group given by its label.
    Artin {
        /// Group label, e.g. "Sym(9)", "PSL(3,4)", "PGammaL(2,49)", "M11".
        label: String,
    },
    /// Exhaustive scans over parameter ranges.
    Scan {
        #[command(subcommand)]
        kind: ScanKind,
    },
    /// Build a bi-coset graph from an input file and report its properties.
    Bicoset {
        /// Input file: DEGREE line, then GROUP/LEFT/RIGHT/DREPS sections.
        input: PathBuf,
        /// Cap on the coset indices [G:L] and [G:R].
        #[arg(long, value_name = "N")]
        index_bound: Option<usize>,
        /// Also compute the full automorphism group of the built graph.
        #[arg(long)]
        symmetry: bool,
        /// Node budget for the automorphism search (with --symmetry).
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        /// Also write the plain-text edge list to this file (atomically).
        #[arg(long, value_name = "FILE")]
        edges_out: Option<PathBuf>,
    },
    /// Compute the automorphism group of a graph from an edge-list file.
    Graph {
        /// Input file: "n_left n_right m" header plus "u v" lines, or a
        /// single adjacency line "n u-v u-v ...".
        input: PathBuf,
        /// Node budget for the automorphism search.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum VerifyExample {
    /// Three uniform blocks of size --m (at least 8), degree 3m.
    ThreeBlocks {
        /// Block size; the closed-form intersection matrix needs m >= 8.
        #[arg(long)]
        m: u32,
    },
    /// Eight blocks of size four, degree 32, fixed connection element.
    EightBlocks,
}

#[derive(Subcommand)]
enum ScanKind {
    /// Simple-group labels sharing one order, up to a bound.
    Sameorder {
        /// Inclusive order bound; an integer or scientific form like 1e10.
        #[arg(long)]
        bound: String,
    },
    /// Repeated orders inside the maximal-subgroup order tables.
    Coincidence {
        /// Largest ambient degree to scan.
        #[arg(long, value_name = "N")]
        n_max: u64,
    },
    /// Solutions of C(n+k, k) = 2 C(n, k).
    Diophantine {
        /// Largest k to scan.
        #[arg(long, value_name = "K")]
        k_max: u64,
    },
    /// Primitive prime divisors of q^m - 1.
    Zsigmondy {
        /// Largest base q to scan.
        #[arg(long, value_name = "Q")]
        q_max: u64,
        /// Largest exponent m to scan.
        #[arg(long, value_name = "M")]
        m_max: u32,
    },
}

// ---------------------------------------------------------------------------
// Run plumbing
// ---------------------------------------------------------------------------

/// Errors that abort a run before a document can be produced.
enum CliError {
    /// Invalid invocation or input; exit code 1, message on stderr.
    Usage(String),
    /// A configured resource bound was exceeded; exit code 3.
    Resource(String),
}

/// Result of a dispatched command, ready to be wrapped in a document.
struct CommandRun {
    /// Manifest command name, e.g. "verify three-blocks".
    command: &'static str,
    /// Manifest parameters (inputs are embedded by content).
    parameters: Value,
    /// The report placed under the document's "report" key.
    payload: Value,
    /// `Some(condition)` when a verification check failed.
    check: Option<String>,
}

/// Manifest embedded in every document.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    seed: u64,
    tool_version: String,
    outcome: String,
}

/// The complete emitted document.
#[derive(Serialize)]
struct Document {
    schema: &'static str,
    manifest: RunManifest,
    report: Value,
}

/// Ordered list of named pass/fail checks; remembers the first failure.
struct CheckList {
    items: Vec<Value>,
    first_failure: Option<String>,
}

impl CheckList {
    fn new() -> CheckList {
        CheckList { items: Vec::new(), first_failure: None }
    }

    /// Records one check and returns `pass` unchanged.
    fn record(&mut self, name: &str, pass: bool) -> bool {
        self.items.push(json!({ "name": name, "pass": pass }));
        if !pass && self.first_failure.is_none() {
            self.first_failure = Some(name.to_string());
        }
        pass
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    if let Ok(raw) = std::env::var("BICOSET_LAB_FACTOR_BOUND") {
        match raw.parse::<u64>() {
            Ok(bound) if bound >= 2 => {
                set_factor_bound(bound);
            }
            _ => {
                eprintln!(
                    "error: BICOSET_LAB_FACTOR_BOUND must be an integer >= 2, got '{raw}'"
                );
                return ExitCode::from(1);
            }
        }
    }

    let run = match dispatch(&cli) {
        Ok(run) => run,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("resource bound exceeded: {msg}");
            return ExitCode::from(3);
        }
    };

    let outcome = if run.check.is_none() { "success" } else { "check-failed" };
    let document = Document {
        schema: SCHEMA,
        manifest: RunManifest {
            command: run.command.to_string(),
            parameters: run.parameters,
            seed: cli.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outcome: outcome.to_string(),
        },
        report: run.payload,
    };
    let mut text = serde_json::to_string_pretty(&document).expect("document serializes");
    text.push('\n');
    if let Err(msg) = write_output(cli.out.as_deref(), &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }

    match run.check {
        None => ExitCode::SUCCESS,
        Some(condition) => {
            eprintln!("check failed: {condition}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<CommandRun, CliError> {
    match &cli.command {
        Command::Verify { example } => match example {
            VerifyExample::ThreeBlocks { m } => verify_three_blocks(*m, cli.seed),
            VerifyExample::EightBlocks => verify_eight_blocks(cli.seed),
        },
        Command::Artin { label } => artin_command(label),
        Command::Scan { kind } => scan_command(kind),
        Command::Bicoset { input, index_bound, symmetry, budget, edges_out } => {
            bicoset_command(input, *index_bound, *symmetry, *budget, edges_out.as_deref())
        }
        Command::Graph { input, budget } => graph_command(input, *budget),
    }
}

/// Writes `text` to stdout, or atomically to `path` via a sibling temp file.
fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| format!("cannot write to stdout: {e}"))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| format!("cannot create a temporary file in {}: {e}", dir.display()))?;
            tmp.write_all(text.as_bytes())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            tmp.persist(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Error mapping and JSON helpers
// ---------------------------------------------------------------------------

/// Maps an error whose occurrence would indicate a bug in this binary's own
/// input construction (degree mismatches on internally built data, ...).
fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("internal error: {e}"))
}

fn map_catalog(e: CatalogError) -> CliError {
    match e {
        CatalogError::Factnum(FactnumError::FactorBoundExceeded { .. })
        | CatalogError::Factnum(FactnumError::FactorialBoundExceeded { .. }) => {
            CliError::Resource(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn map_factnum(e: FactnumError) -> CliError {
    match e {
        FactnumError::FactorBoundExceeded { .. } | FactnumError::FactorialBoundExceeded { .. } => {
            CliError::Resource(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn map_bicoset(e: BiCosetError) -> CliError {
    match e {
        BiCosetError::IndexBoundExceeded { .. } => CliError::Resource(e.to_string()),
        other => internal(other),
    }
}

fn map_graph(e: GraphError) -> CliError {
    match e {
        GraphError::SearchBudgetExceeded { .. } => CliError::Resource(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

/// Renders an exact factored integer with both its factorization and its
/// decimal expansion.
fn nat_json(n: &FactoredNat) -> Value {
    json!({ "factors": n.factors(), "decimal": n.to_decimal_string() })
}

/// Renders a symmetry report (orbit sizes only; generators in cycle
/// notation on 1-based vertex numbers).
fn symmetry_json(report: &SymmetryReport) -> Value {
    json!({
        "aut_order": nat_json(&report.aut_order),
        "generators": report.generators.iter().map(Perm::to_string).collect::<Vec<_>>(),
        "vertex_orbit_sizes": report.vertex_orbits.iter().map(Vec::len).collect::<Vec<_>>(),
        "edge_orbit_sizes": report.edge_orbits.iter().map(Vec::len).collect::<Vec<_>>(),
        "regular": report.regular,
        "vertex_transitive": report.vertex_transitive,
        "edge_transitive": report.edge_transitive,
        "semisymmetric": report.semisymmetric,
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Reference intersection matrix for the degree-32 example: eight blocks of
/// size four against their image under the fixed connection element.
const DEGREE32_MATRIX: [[u64; 8]; 8] = [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 0, 1, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0, 0],
    [1, 1, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 0, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 0, 1, 0, 0, 1, 1, 1],
];

/// Degree 3m with three uniform blocks: the intersection matrix of the
/// fixed connection element has the closed form
/// `[[m-4, 1, 3], [2, m-2, 0], [2, 1, m-3]]`, its inverse's matrix is the
/// transpose, and both semisymmetry conditions hold.
fn verify_three_blocks(m: u32, seed: u64) -> Result<CommandRun, CliError> {
    if m < 8 {
        return Err(CliError::Usage(format!(
            "--m must be at least 8 so the diagonal entries m-4, m-2, m-3 stay disjoint \
             from the off-diagonal values 0..=3; got {m}"
        )));
    }
    if m > MAX_THREE_BLOCK_SIZE {
        return Err(CliError::Usage(format!(
            "--m must be at most {MAX_THREE_BLOCK_SIZE}; got {m}"
        )));
    }
    let n = 3 * m;
    let v = SetPartition::uniform(m, 3);
    let g = product_of_cycles(
        n,
        &[
            vec![1, m + 1],
            vec![2, m + 2, 2 * m + 1],
            vec![3, 2 * m + 2, 4, 2 * m + 3],
        ],
    );
    let expected: Vec<Vec<u64>> = vec![
        vec![u64::from(m) - 4, 1, 3],
        vec![2, u64::from(m) - 2, 0],
        vec![2, 1, u64::from(m) - 3],
    ];

    let mut checks = CheckList::new();
    checks.record("the connection element is even", g.sign() == 1);
    let p = intersection_matrix(&v, &v.apply(&g)).map_err(internal)?;
    checks.record(
        "the intersection matrix matches its closed form",
        p.entries() == expected.as_slice(),
    );
    let q = intersection_matrix(&v, &v.apply(&g.inverse())).map_err(internal)?;
    checks.record(
        "the inverse element's matrix is the transpose",
        q.entries() == p.transpose().entries(),
    );
    let outcome =
        semisymmetry_check(n, &v, &g, Assumption::overgroup_socle()).map_err(internal)?;
    checks.record("the two double cosets are distinct", outcome.double_cosets_distinct);
    checks.record(
        "the block-pair stabilizer contains an odd permutation",
        outcome.odd_intersection,
    );
    checks.record("the semisymmetry certificate is complete", outcome.certified);

    let mut certificate = outcome.certificate.clone();
    certificate.seed = seed;
    let payload = json!({
        "degree": n,
        "block_count": 3,
        "block_size": m,
        "g": g.to_string(),
        "matrix": p.entries(),
        "inverse_matrix": q.entries(),
        "double_cosets_distinct": outcome.double_cosets_distinct,
        "pair_stabilizer_contains_odd": outcome.odd_intersection,
        "certified": outcome.certified,
        "checks": checks.items,
        "certificate": serde_json::to_value(&certificate).map_err(internal)?,
    });
    Ok(CommandRun {
        command: "verify three-blocks",
        parameters: json!({ "m": m }),
        payload,
        check: checks.first_failure,
    })
}

/// Degree 32 with eight blocks of size four and a fixed even connection
/// element: the stored reference matrix is re-derived, the transposition
/// `(1,2)` normalizes the block stabilizer and fixes the matrix, the
/// inverse's matrix is the transpose, the pair stabilizer is all-even, and
/// the normalizer criterion certifies the double cosets distinct.
fn verify_eight_blocks(seed: u64) -> Result<CommandRun, CliError> {
    let n = 32;
    let v = SetPartition::uniform(4, 8);
    let g = product_of_cycles(
        n,
        &[
            vec![2, 5],
            vec![3, 9],
            vec![4, 13],
            vec![7, 10, 15, 18, 11, 17, 8, 14],
            vec![12, 29, 20, 25, 19, 22, 16, 21],
            vec![23, 26],
            vec![24, 30],
            vec![28, 31],
        ],
    );
    let iota = transposition(n, 1, 2);
    let reference: Vec<Vec<u64>> = DEGREE32_MATRIX.iter().map(|row| row.to_vec()).collect();

    let mut checks = CheckList::new();
    checks.record("the connection element is even", g.sign() == 1);
    let p = intersection_matrix(&v, &v.apply(&g)).map_err(internal)?;
    checks.record(
        "the intersection matrix matches the stored reference",
        p.entries() == reference.as_slice(),
    );
    let conjugate = g.conjugated_by(&iota);
    let p_conjugate = intersection_matrix(&v, &v.apply(&conjugate)).map_err(internal)?;
    checks.record(
        "conjugating by the transposition (1,2) preserves the matrix",
        p_conjugate.entries() == p.entries(),
    );
    let q = intersection_matrix(&v, &v.apply(&g.inverse())).map_err(internal)?;
    checks.record(
        "the inverse element's matrix is the transpose",
        q.entries() == p.transpose().entries(),
    );
    let pair = pair_stabilizer(&v, &v.apply(&g)).map_err(internal)?;
    checks.record(
        "the block-pair stabilizer consists of even permutations only",
        !pair.contains_odd_element,
    );
    let outcome =
        normalizer_criterion_check(n, &v, &g, Assumption::overgroup_socle()).map_err(internal)?;
    checks.record(
        "the normalizer strictly contains the block stabilizer",
        outcome.iota.is_some(),
    );
    checks.record("the two double cosets are distinct", outcome.distinct == Some(true));
    checks.record("the normalizer-criterion certificate is complete", outcome.certified);

    let mut certificate = outcome.certificate.clone();
    certificate.seed = seed;
    let payload = json!({
        "degree": n,
        "block_count": 8,
        "block_size": 4,
        "g": g.to_string(),
        "iota": iota.to_string(),
        "criterion_iota": outcome.iota.as_ref().map(Perm::to_string),
        "matrix": p.entries(),
        "inverse_matrix": q.entries(),
        "pair_stabilizer_all_even": !pair.contains_odd_element,
        "pair_stabilizer_order": nat_json(&pair.order),
        "double_cosets_distinct": outcome.distinct,
        "certified": outcome.certified,
        "checks": checks.items,
        "certificate": serde_json::to_value(&certificate).map_err(internal)?,
    });
    Ok(CommandRun {
        command: "verify eight-blocks",
        parameters: json!({}),
        payload,
        check: checks.first_failure,
    })
}

// ---------------------------------------------------------------------------
// artin
// ---------------------------------------------------------------------------

/// Parses the label, computes the group order exactly, and reports the
/// order invariants derived from its prime factorization.
fn artin_command(label: &str) -> Result<CommandRun, CliError> {
    let spec = GroupSpec::parse(label).map_err(map_catalog)?;
    let order = spec.order().map_err(map_catalog)?;
    let invariants = catalog::artin(&order).map_err(map_catalog)?;
    let payload = json!({
        "label": spec.to_string(),
        "order": nat_json(&order),
        "dominant_prime": invariants.dominant_prime,
        "ell": invariants.ell,
        "omega": invariants.omega,
        "psi": invariants.psi,
        "f1": invariants.f1.to_string(),
        "f2": invariants.f2.to_string(),
    });
    Ok(CommandRun {
        command: "artin",
        parameters: json!({ "label": label }),
        payload,
        check: None,
    })
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn scan_command(kind: &ScanKind) -> Result<CommandRun, CliError> {
    match kind {
        ScanKind::Sameorder { bound } => {
            let value = parse_bound(bound).map_err(CliError::Usage)?;
            let collisions = catalog::same_order_scan(value).map_err(map_catalog)?;
            let rows: Vec<Value> = collisions
                .iter()
                .map(|c| {
                    json!({
                        "order": nat_json(&c.order),
                        "members": c.members.iter().map(GroupSpec::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(CommandRun {
                command: "scan sameorder",
                parameters: json!({ "bound": bound, "bound_value": value.to_string() }),
                payload: json!({ "bound": value.to_string(), "collisions": rows }),
                check: None,
            })
        }
        ScanKind::Coincidence { n_max } => {
            let report = catalog::coincidence_scan(*n_max).map_err(map_catalog)?;
            Ok(CommandRun {
                command: "scan coincidence",
                parameters: json!({ "n_max": n_max }),
                payload: serde_json::to_value(&report).map_err(internal)?,
                check: None,
            })
        }
        ScanKind::Diophantine { k_max } => {
            if *k_max == 0 || *k_max > MAX_DIOPHANTINE_K {
                return Err(CliError::Usage(format!(
                    "--k-max must be in 1..={MAX_DIOPHANTINE_K}; got {k_max}"
                )));
            }
            let solutions = diophantine_scan(*k_max);
            Ok(CommandRun {
                command: "scan diophantine",
                parameters: json!({ "k_max": k_max }),
                payload: json!({ "k_max": k_max, "solutions": solutions }),
                check: None,
            })
        }
        ScanKind::Zsigmondy { q_max, m_max } => {
            if *q_max < 2 || *q_max > MAX_ZSIGMONDY_Q {
                return Err(CliError::Usage(format!(
                    "--q-max must be in 2..={MAX_ZSIGMONDY_Q}; got {q_max}"
                )));
            }
            if *m_max < 2 || *m_max > MAX_ZSIGMONDY_M {
                return Err(CliError::Usage(format!(
                    "--m-max must be in 2..={MAX_ZSIGMONDY_M}; got {m_max}"
                )));
            }
            let cells = zsigmondy_scan(*q_max, *m_max).map_err(map_factnum)?;
            let exceptions: Vec<Value> = cells
                .iter()
                .filter(|(_, _, o)| *o == ZsigmondyOutcome::Absent)
                .map(|(q, m, _)| json!({ "q": q, "m": m }))
                .collect();
            let rows: Vec<Value> = cells
                .iter()
                .map(|(q, m, outcome)| {
                    let mut row = Map::new();
                    row.insert("q".into(), json!(q));
                    row.insert("m".into(), json!(m));
                    match outcome {
                        ZsigmondyOutcome::Absent => {
                            row.insert("outcome".into(), json!("absent"));
                        }
                        ZsigmondyOutcome::Prime(r) => {
                            row.insert("outcome".into(), json!("prime"));
                            row.insert("prime".into(), json!(r));
                        }
                        ZsigmondyOutcome::ExistsBeyondBound => {
                            row.insert("outcome".into(), json!("exists-beyond-bound"));
                        }
                    }
                    Value::Object(row)
                })
                .collect();
            Ok(CommandRun {
                command: "scan zsigmondy",
                parameters: json!({ "q_max": q_max, "m_max": m_max }),
                payload: json!({
                    "q_max": q_max,
                    "m_max": m_max,
                    "exceptions": exceptions,
                    "cells": rows,
                }),
                check: None,
            })
        }
    }
}

/// Parses an order bound: a plain integer, or scientific form `MeE` with an
/// integer mantissa (e.g. `1e10`).
fn parse_bound(text: &str) -> Result<u128, String> {
    let trimmed = text.trim();
    let (mantissa, exponent) = match trimmed.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (trimmed, None),
    };
    let mantissa: u128 = mantissa
        .parse()
        .map_err(|_| format!("bad bound '{text}': use an integer or a form like 1e10"))?;
    match exponent {
        None => Ok(mantissa),
        Some(e) => {
            let e: u32 = e
                .parse()
                .map_err(|_| format!("bad exponent in bound '{text}'"))?;
            10u128
                .checked_pow(e)
                .and_then(|p| mantissa.checked_mul(p))
                .ok_or_else(|| format!("bound '{text}' does not fit in 128 bits"))
        }
    }
}

// ---------------------------------------------------------------------------
// bicoset
// ---------------------------------------------------------------------------

/// Parsed content of a bi-coset input file.
#[derive(Debug)]
struct BiCosetInput {
    degree: u32,
    group: Vec<Perm>,
    left: Vec<Perm>,
    right: Vec<Perm>,
    d_reps: Vec<Perm>,
}

/// Parses the bi-coset input format: `#` starts a comment, blank lines are
/// ignored, the first meaningful line is `DEGREE n`, and each of the
/// section headers `GROUP`, `LEFT`, `RIGHT`, `DREPS` is followed by one
/// permutation per line in cycle notation (`()` for the identity).
fn parse_bicoset_input(text: &str) -> Result<BiCosetInput, String> {
    let mut degree: Option<u32> = None;
    let mut sections: [Vec<Perm>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut seen = [false; 4];
    let mut current: Option<usize> = None;

    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = index + 1;
        let Some(n) = degree else {
            let rest = line.strip_prefix("DEGREE").ok_or_else(|| {
                format!("line {lineno}: expected 'DEGREE n' before anything else, got '{line}'")
            })?;
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| format!("line {lineno}: bad degree '{}'", rest.trim()))?;
            if n == 0 || n > MAX_INPUT_DEGREE {
                return Err(format!(
                    "line {lineno}: the degree must be in 1..={MAX_INPUT_DEGREE}, got {n}"
                ));
            }
            degree = Some(n);
            continue;
        };
        let section = match line {
            "GROUP" => Some(0),
            "LEFT" => Some(1),
            "RIGHT" => Some(2),
            "DREPS" => Some(3),
            _ => None,
        };
        if let Some(idx) = section {
            if seen[idx] {
                return Err(format!("line {lineno}: duplicate section '{line}'"));
            }
            seen[idx] = true;
            current = Some(idx);
            continue;
        }
        let Some(idx) = current else {
            return Err(format!(
                "line {lineno}: expected a section header (GROUP, LEFT, RIGHT, DREPS) \
                 before '{line}'"
            ));
        };
        let perm = Perm::parse(line, n).map_err(|e| format!("line {lineno}: {e}"))?;
        sections[idx].push(perm);
    }

    let degree = degree.ok_or("the input contains no DEGREE line")?;
    for (idx, name) in ["GROUP", "LEFT", "RIGHT", "DREPS"].iter().enumerate() {
        if !seen[idx] {
            return Err(format!("missing section '{name}'"));
        }
    }
    let [group, left, right, d_reps] = sections;
    Ok(BiCosetInput { degree, group, left, right, d_reps })
}

fn bicoset_command(
    input: &Path,
    index_bound: Option<usize>,
    symmetry: bool,
    budget: Option<u64>,
    edges_out: Option<&Path>,
) -> Result<CommandRun, CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let parameters = json!({
        "input": input.display().to_string(),
        "input_content": text,
        "index_bound": index_bound,
        "symmetry": symmetry,
        "budget": budget,
    });
    let parsed = parse_bicoset_input(&text).map_err(CliError::Usage)?;
    let group =
        PermGroup::from_generators(parsed.degree, parsed.group).map_err(|e| CliError::Usage(e.to_string()))?;
    let left =
        PermGroup::from_generators(parsed.degree, parsed.left).map_err(|e| CliError::Usage(e.to_string()))?;
    let right =
        PermGroup::from_generators(parsed.degree, parsed.right).map_err(|e| CliError::Usage(e.to_string()))?;

    let graph = match BiCosetGraph::build(group, left, right, parsed.d_reps, index_bound) {
        Ok(graph) => graph,
        Err(BiCosetError::IndexBoundExceeded { bound }) => {
            return Err(CliError::Resource(format!("a coset index exceeds the bound {bound}")));
        }
        Err(e @ (BiCosetError::NotSubgroup(_) | BiCosetError::EmptyConnectionSet)) => {
            // The file parsed but fails a structural precondition: report it
            // as a failed check so the document still records the attempt.
            let message = e.to_string();
            return Ok(CommandRun {
                command: "bicoset",
                parameters,
                payload: json!({ "error": message }),
                check: Some(message),
            });
        }
        Err(e) => return Err(internal(e)),
    };

    let connectivity_criterion = graph.connectivity_criterion().map_err(map_bicoset)?;
    let sufficient_vt = graph.sufficient_vertex_transitive().map_err(map_bicoset)?;
    let faithful = faithfulness_check(graph.group(), graph.left(), graph.right(), index_bound)
        .map_err(map_bicoset)?;
    let mut edge_list = graph.to_edge_list();
    if !edge_list.ends_with('\n') {
        edge_list.push('\n');
    }
    if let Some(path) = edges_out {
        write_output(Some(path), &edge_list).map_err(CliError::Usage)?;
    }

    let mut payload = json!({
        "degree": parsed.degree,
        "group_order": nat_json(graph.group().order()),
        "left_order": nat_json(graph.left().order()),
        "right_order": nat_json(graph.right().order()),
        "d_reps": graph.d_reps().iter().map(Perm::to_string).collect::<Vec<_>>(),
        "d_coset_count": graph.d_coset_count(),
        "d_size": nat_json(&graph.d_size()),
        "n_left": graph.n_left(),
        "n_right": graph.n_right(),
        "edge_count": graph.edge_count(),
        "regular": graph.is_regular(),
        "connected": graph.is_connected(),
        "connectivity_criterion": connectivity_criterion,
        "g_edge_transitive": graph.is_g_edge_transitive(),
        "sufficient_vertex_transitive": sufficient_vt,
        "faithful": faithful,
        "edge_list": edge_list.lines().collect::<Vec<_>>(),
    });
    if symmetry {
        let undirected = Graph::from_bicoset(&graph);
        let report = analyze(&undirected, budget).map_err(map_graph)?;
        payload
            .as_object_mut()
            .expect("payload is an object")
            .insert("symmetry".to_string(), symmetry_json(&report));
    }

    Ok(CommandRun { command: "bicoset", parameters, payload, check: None })
}

// ---------------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------------

/// Parses a graph input: either the edge-list format with an
/// `n_left n_right m` header, or a single adjacency line `n u-v u-v ...`.
/// `#` starts a comment; blank lines are ignored.
fn parse_graph_input(text: &str) -> Result<Graph, String> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err("the input contains no graph".into());
    }
    if lines.len() == 1 {
        let fields: Vec<&str> = lines[0].split_whitespace().collect();
        if fields.len() >= 2 && fields[1..].iter().all(|f| f.contains('-')) {
            return Graph::parse_adjacency_line(lines[0]).map_err(|e| e.to_string());
        }
    }
    Graph::parse_edge_list(&lines.join("\n")).map_err(|e| e.to_string())
}

fn graph_command(input: &Path, budget: Option<u64>) -> Result<CommandRun, CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let graph = parse_graph_input(&text).map_err(CliError::Usage)?;
    let report = analyze(&graph, budget).map_err(map_graph)?;
    let mut payload = symmetry_json(&report);
    let object = payload.as_object_mut().expect("payload is an object");
    object.insert("vertex_count".to_string(), json!(graph.vertex_count()));
    object.insert("edge_count".to_string(), json!(graph.edge_count()));
    Ok(CommandRun {
        command: "graph",
        parameters: json!({
            "input": input.display().to_string(),
            "input_content": text,
            "budget": budget,
        }),
        payload,
        check: None,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_parsing_accepts_plain_and_scientific_forms() {
        assert_eq!(parse_bound("59"), Ok(59));
        assert_eq!(parse_bound("1e10"), Ok(10_000_000_000));
        assert_eq!(parse_bound("25E2"), Ok(2500));
        assert_eq!(parse_bound(" 20159 "), Ok(20159));
        assert!(parse_bound("ten").is_err());
        assert!(parse_bound("1e40").is_err());
        assert!(parse_bound("1.5e3").is_err());
        assert!(parse_bound("-4").is_err());
    }

    #[test]
    fn bicoset_input_parses_sections_and_comments() {
        let text = "# complete bipartite on 3 + 3\nDEGREE 3\nGROUP\n(1,2) # a transposition\n\
                    (1,2,3)\nLEFT\n(1,2)\nRIGHT\n(1,2)\nDREPS\n()\n(1,3)\n";
        let parsed = parse_bicoset_input(text).unwrap();
        assert_eq!(parsed.degree, 3);
        assert_eq!(parsed.group.len(), 2);
        assert_eq!(parsed.left.len(), 1);
        assert_eq!(parsed.right.len(), 1);
        assert_eq!(parsed.d_reps.len(), 2);
    }

    #[test]
    fn bicoset_input_rejects_malformed_files() {
        assert!(parse_bicoset_input("GROUP\n(1,2)\n").unwrap_err().contains("DEGREE"));
        assert!(parse_bicoset_input("DEGREE 3\n(1,2)\n").unwrap_err().contains("section header"));
        assert!(parse_bicoset_input("DEGREE 3\nGROUP\nLEFT\nRIGHT\n")
            .unwrap_err()
            .contains("DREPS"));
        assert!(parse_bicoset_input("DEGREE 3\nGROUP\nGROUP\nLEFT\nRIGHT\nDREPS\n")
            .unwrap_err()
            .contains("duplicate"));
        assert!(parse_bicoset_input("DEGREE 0\nGROUP\nLEFT\nRIGHT\nDREPS\n")
            .unwrap_err()
            .contains("degree"));
        assert!(parse_bicoset_input("DEGREE 3\nGROUP\n(1,4)\nLEFT\nRIGHT\nDREPS\n").is_err());
    }

    #[test]
    fn graph_input_dispatches_on_format() {
        // Edge-list form: a 4-cycle as a 2+2 bi-coset edge list.
        let square = parse_graph_input("2 2 4\n0 2\n0 3\n1 2\n1 3\n").unwrap();
        assert_eq!(square.vertex_count(), 4);
        assert_eq!(square.edge_count(), 4);
        // Adjacency-line form: a triangle.
        let triangle = parse_graph_input("3 0-1 1-2 0-2\n").unwrap();
        assert_eq!(triangle.vertex_count(), 3);
        assert_eq!(triangle.edge_count(), 3);
        // Comments and blank lines are stripped before parsing.
        let commented = parse_graph_input("# a header\n\n2 2 1 # sizes\n0 2\n").unwrap();
        assert_eq!(commented.edge_count(), 1);
        assert!(parse_graph_input("\n").is_err());
    }

    #[test]
    fn check_lists_remember_the_first_failure() {
        let mut checks = CheckList::new();
        assert!(checks.record("first", true));
        assert!(!checks.record("second", false));
        assert!(!checks.record("third", false));
        assert_eq!(checks.first_failure.as_deref(), Some("second"));
        assert_eq!(checks.items.len(), 3);
    }
}
