//! The `robinson-embed` command line.
//!
//! Exit codes: 0 success or feasible, 1 invalid matrix, 2 usage or I/O,
//! 3 infeasible (or an embedding that fails verification), 4 internal
//! inconsistency.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{walk_bound, BoundVector, BoundWalk, WalkKind};
use crate::embed::{check_embedding, EmbedError, Embedding};
use crate::feasibility::ThresholdVector;
use crate::generate::{duplicate_rows, perturb_until_infeasible, planted};
use crate::matrix::{parse_matrix, MatrixError, RobinsonMatrix};
use crate::oracle::{
    buffer_vector, direct_feasibility, enumerate_paths_bruteforce, minimal_cycles_bruteforce,
    separating_threshold, DirectOutcome, DIRECT_GUARD_K, DIRECT_GUARD_N,
};
use crate::pathgen::{generate_bound_tables, CycleRecord};
use crate::rational::parse_rational;
use crate::report::{
    describe_certificate, describe_cycle, describe_solution, format_vector, BoundsJson,
    CertificateJson, CycleJson, EmbeddingJson, PathJson, SolveJson,
};
use crate::solve::{embed_with_thresholds, solve, Method, SolveError, SolveOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "robinson-embed",
    version,
    about = "Uniform embeddings of Robinson similarity matrices, or certificates that none exist"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a matrix file is a Robinson matrix.
    Validate {
        /// Matrix file, or `-` for standard input.
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Find thresholds and an embedding, or a certificate of infeasibility.
    Solve {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
        /// Force the two-level ratio method (requires k = 2).
        #[arg(long, conflicts_with = "general")]
        k2: bool,
        /// Force exact elimination for any k.
        #[arg(long)]
        general: bool,
        /// Print decimals instead of exact fractions (text output only).
        #[arg(long)]
        float: bool,
    },
    /// Construct an embedding for given thresholds, or check an embedding file.
    #[command(group(ArgGroup::new("mode").required(true).args(["d", "check"])))]
    Embed {
        matrix: PathBuf,
        /// Thresholds `d_1,...,d_k`, strictly decreasing and positive.
        #[arg(long, value_name = "D1,...,DK")]
        d: Option<String>,
        /// JSON file `{"d": [...], "pi": [...]}` to verify.
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        float: bool,
    },
    /// Dump the minimal bound-paths of every pair and the extracted cycles.
    Bounds {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Produce and recheck an infeasibility certificate, or check a given one.
    Certify {
        matrix: PathBuf,
        /// Certificate JSON, either bare or the output of `solve --json`.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "general")]
        k2: bool,
        #[arg(long)]
        general: bool,
    },
    /// Print a random matrix with a known embedding, optionally perturbed.
    Gen {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb one entry at a time, up to this many times, stopping
        /// once the matrix becomes infeasible.
        #[arg(long, default_value_t = 0)]
        infeasible_attempts: usize,
        /// Number of the `n` rows that repeat an earlier row.
        #[arg(long, default_value_t = 0)]
        duplicates: usize,
    },
    /// Brute-force references for small matrices.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Extremal bounds over all simple paths from U to V (1-based).
    Paths {
        matrix: PathBuf,
        u: usize,
        v: usize,
        /// Lower-bound-paths instead of upper-bound-paths.
        #[arg(long)]
        lower: bool,
        #[arg(long)]
        json: bool,
    },
    /// Minimal simple upper-bound-cycles by exhaustive search.
    Cycles {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide feasibility by elimination over positions and thresholds.
    Feasible {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Buffer vector between A ⪯ B, given as comma-separated integers.
    Buffer {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Threshold vector with A.d > B.d, given that A ⪯ B fails.
    Separate {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
}

/// A failed command: exit code and message for standard error.
struct Failure(i32, String);

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn internal(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INTERNAL, msg.into())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { matrix, json } => cmd_validate(matrix, *json, out),
        Command::Solve {
            matrix,
            json,
            k2,
            general,
            float,
        } => cmd_solve(matrix, *json, method(*k2, *general), *float, out),
        Command::Embed {
            matrix,
            d,
            check,
            json,
            float,
        } => match (d, check) {
            (Some(d), _) => cmd_embed(matrix, d, *json, *float, out),
            (None, Some(file)) => cmd_check(matrix, file, *json, out),
            (None, None) => Err(usage("embed needs --d or --check")),
        },
        Command::Bounds { matrix, json } => cmd_bounds(matrix, *json, out),
        Command::Certify {
            matrix,
            certificate,
            json,
            k2,
            general,
        } => match certificate {
            Some(file) => cmd_check_certificate(matrix, file, *json, out),
            None => cmd_certify(matrix, *json, method(*k2, *general), out),
        },
        Command::Gen {
            n,
            k,
            seed,
            infeasible_attempts,
            duplicates,
        } => cmd_gen(
            *n as usize,
            *k,
            *seed,
            *infeasible_attempts,
            *duplicates,
            out,
        ),
        Command::Oracle { command } => match command {
            OracleCommand::Paths {
                matrix,
                u,
                v,
                lower,
                json,
            } => cmd_oracle_paths(matrix, *u, *v, *lower, *json, out),
            OracleCommand::Cycles { matrix, json } => cmd_oracle_cycles(matrix, *json, out),
            OracleCommand::Feasible { matrix, json } => cmd_oracle_feasible(matrix, *json, out),
            OracleCommand::Buffer { a, b } => {
                let (a, b) = (parse_bound(a)?, parse_bound(b)?);
                let c = buffer_vector(&a, &b).map_err(|e| usage(e.to_string()))?;
                emit(out, &format!("{c}"))
            }
            OracleCommand::Separate { a, b } => {
                let (a, b) = (parse_bound(a)?, parse_bound(b)?);
                let d = separating_threshold(&a, &b).map_err(|e| usage(e.to_string()))?;
                emit(
                    out,
                    &format!("d = {d}\na.d = {}\nb.d = {}", a.dot(&d), b.dot(&d)),
                )
            }
        },
    }
}

fn method(k2: bool, general: bool) -> Method {
    match (k2, general) {
        (true, _) => Method::Ratio,
        (_, true) => Method::General,
        _ => Method::Auto,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    writeln!(out, "{text}").map_err(|e| usage(format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    let text = serde_json::to_string(value).map_err(|e| internal(e.to_string()))?;
    emit(out, &text)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
    }
}

/// Exit code for a matrix that fails to load: 1 when the file is well
/// formed but not a Robinson matrix, 2 otherwise.
pub fn matrix_error_code(e: &MatrixError) -> i32 {
    match e {
        MatrixError::OutOfRange { .. }
        | MatrixError::Symmetry { .. }
        | MatrixError::Diagonal { .. }
        | MatrixError::Robinson(_) => EXIT_INVALID,
        _ => EXIT_USAGE,
    }
}

fn load_matrix(path: &Path) -> Result<RobinsonMatrix, Failure> {
    let text = read_input(path)?;
    parse_matrix(&text)
        .map_err(|e| Failure(matrix_error_code(&e), format!("{}: {e}", path.display())))
}

fn parse_bound(text: &str) -> Result<BoundVector, Failure> {
    text.split(',')
        .map(|x| x.trim().parse::<i32>())
        .collect::<Result<Vec<_>, _>>()
        .map(BoundVector::new)
        .map_err(|_| usage(format!("cannot parse {text:?} as comma-separated integers")))
}

fn parse_thresholds(text: &str) -> Result<ThresholdVector, Failure> {
    let values = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    ThresholdVector::new(values).map_err(|e| usage(e.to_string()))
}

fn cmd_validate(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let text = read_input(path)?;
    match parse_matrix(&text) {
        Ok(m) => {
            if json {
                emit_json(
                    out,
                    &serde_json::json!({"valid": true, "n": m.n(), "k": m.k()}),
                )
            } else {
                emit(
                    out,
                    &format!("valid Robinson matrix: n = {}, k = {}", m.n(), m.k()),
                )
            }
        }
        Err(e) => {
            let code = matrix_error_code(&e);
            if code == EXIT_INVALID {
                if json {
                    let mut report = serde_json::json!({"valid": false, "error": e.to_string()});
                    if let MatrixError::Robinson(w) = &e {
                        report["witness"] = serde_json::json!([w.u + 1, w.v + 1, w.w + 1]);
                    }
                    emit_json(out, &report)?;
                } else {
                    emit(out, &format!("invalid: {e}"))?;
                }
                Ok(code)
            } else {
                Err(Failure(code, format!("{}: {e}", path.display())))
            }
        }
    }
}

fn solve_or_fail(m: &RobinsonMatrix, method: Method) -> Result<SolveOutcome, Failure> {
    solve(m, method).map_err(|e| match e {
        SolveError::Method(e) => usage(e.to_string()),
        other => internal(other.to_string()),
    })
}

fn cmd_solve(path: &Path, json: bool, method: Method, float: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let outcome = solve_or_fail(&m, method)?;
    if json {
        emit_json(out, &SolveJson::from_outcome(&outcome))?;
    } else {
        match &outcome {
            SolveOutcome::Feasible(s) => write_text(out, &describe_solution(&s.d, &s.pi, float))?,
            SolveOutcome::Infeasible(cert) => write_text(out, &describe_certificate(&m, cert))?,
        }
    }
    Ok(if outcome.is_feasible() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn write_text(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("cannot write output: {e}")))
}

fn cmd_embed(path: &Path, d: &str, json: bool, float: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let d = parse_thresholds(d)?;
    match embed_with_thresholds(&m, &d) {
        Ok(pi) => {
            if json {
                emit_json(out, &EmbeddingJson::new(&d, &pi))?;
            } else {
                write_text(out, &describe_solution(&d, &pi, float))?;
            }
            Ok(EXIT_OK)
        }
        Err(SolveError::Construction(EmbedError::Levels { .. } | EmbedError::Length { .. })) => {
            Err(usage(format!(
                "expected {} thresholds, got {}",
                m.k(),
                d.k()
            )))
        }
        Err(SolveError::Construction(
            e @ (EmbedError::CycleViolated(_) | EmbedError::EmptyInterval { .. }),
        )) => {
            if json {
                emit_json(
                    out,
                    &serde_json::json!({"status": "infeasible", "error": e.to_string()}),
                )?;
            } else {
                emit(out, &format!("NO EMBEDDING for d = {d}\nreason: {e}"))?;
                if let EmbedError::CycleViolated(c) = &e {
                    write_text(out, &describe_cycle(&m, c))?;
                }
            }
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(internal(e.to_string())),
    }
}

fn cmd_check(path: &Path, file: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let text = read_input(file)?;
    let doc: EmbeddingJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let (d, pi) = doc
        .parse()
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let d = ThresholdVector::new(d).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let pi = Embedding::new(pi);
    match check_embedding(&m, &d, &pi) {
        Ok(()) => {
            if json {
                emit_json(out, &serde_json::json!({"valid": true}))
            } else {
                emit(out, "embedding verifies")
            }
        }
        Err(EmbedError::Verification(v)) => {
            if json {
                emit_json(
                    out,
                    &serde_json::json!({"valid": false, "violation": v.to_string()}),
                )?;
            } else {
                emit(out, &format!("embedding fails: {v}"))?;
            }
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(usage(format!("{}: {e}", file.display()))),
    }
}

fn cmd_bounds(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let table = generate_bound_tables(&m);
    if json {
        return emit_json(out, &BoundsJson::from_table(&table));
    }
    let mut text = String::new();
    for i in 0..m.n() {
        for j in 0..m.n() {
            if i == j {
                continue;
            }
            let paths = table.minimal_paths(i, j);
            if paths.is_empty() {
                continue;
            }
            let parts: Vec<String> = paths
                .iter()
                .map(|p| format!("{} via {}", p.bound, BoundWalk::upper(p.vertices.clone())))
                .collect();
            text.push_str(&format!("{} -> {}: {}\n", i + 1, j + 1, parts.join(", ")));
        }
    }
    let cycles = table.extract_cycles();
    text.push_str(&format!("minimal cycles: {}\n", cycles.len()));
    for c in &cycles {
        text.push_str(&format!("  {c}\n"));
    }
    write_text(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_certify(path: &Path, json: bool, method: Method, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    match solve_or_fail(&m, method)? {
        SolveOutcome::Feasible(s) => {
            if json {
                emit_json(out, &SolveJson::from_outcome(&SolveOutcome::Feasible(s)))
            } else {
                emit(
                    out,
                    &format!(
                        "feasible, no certificate exists\nd  = ({})",
                        format_vector(s.d.values(), false)
                    ),
                )
            }
        }
        SolveOutcome::Infeasible(cert) => {
            if !cert.recheck(m.k() as usize) {
                return Err(internal("certificate cycles do not recheck as infeasible"));
            }
            if json {
                emit_json(out, &CertificateJson::from_certificate(&cert))?;
            } else {
                write_text(out, &describe_certificate(&m, &cert))?;
                emit(out, "recheck: the cited cycles alone admit no thresholds")?;
            }
            Ok(EXIT_INFEASIBLE)
        }
    }
}

/// Accepts a bare certificate or a `solve --json` document.
fn read_certificate(file: &Path) -> Result<CertificateJson, Failure> {
    let text = read_input(file)?;
    let bad = |e: serde_json::Error| usage(format!("{}: {e}", file.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    if value.get("status").is_some() {
        match serde_json::from_value::<SolveJson>(value).map_err(bad)? {
            SolveJson::Infeasible { certificate } => Ok(certificate),
            SolveJson::Feasible { .. } => Err(usage(format!(
                "{}: document reports a feasible matrix",
                file.display()
            ))),
        }
    } else {
        serde_json::from_value(value).map_err(bad)
    }
}

/// Checks that each cited cycle is a closed simple legal walk of `m` with
/// the stated bound.
fn check_cited_cycle(m: &RobinsonMatrix, c: &CycleRecord) -> Result<(), String> {
    let vs = &c.vertices;
    if vs.len() < 3 || vs.first() != vs.last() {
        return Err(format!("{c} is not a closed walk"));
    }
    if c.bound.k() != m.k() as usize {
        return Err(format!(
            "{c} has a bound with {} levels, matrix has {}",
            c.bound.k(),
            m.k()
        ));
    }
    let walk = BoundWalk {
        vertices: vs.clone(),
        kind: WalkKind::Upper,
    };
    if !walk.is_simple() {
        return Err(format!("{c} repeats a vertex"));
    }
    let actual = walk_bound(m, &walk).map_err(|e| format!("{c}: {e}"))?;
    if actual != c.bound {
        return Err(format!(
            "{c} states bound {} but its steps sum to {actual}",
            c.bound
        ));
    }
    Ok(())
}

fn cmd_check_certificate(path: &Path, file: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let cert = read_certificate(file)?;
    let cycles = cert
        .to_cycles()
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let reject = |msg: String| usage(format!("certificate rejected: {msg}"));
    if cycles.is_empty() {
        return Err(reject("no cycles".into()));
    }
    for c in &cycles {
        check_cited_cycle(&m, c).map_err(reject)?;
    }
    let recheck = crate::feasibility::solve_general_k(&cycles, m.k() as usize)
        .map_err(|e| reject(e.to_string()))?;
    if recheck.is_feasible() {
        return Err(reject("the cited cycles admit thresholds".into()));
    }
    if json {
        emit_json(out, &serde_json::json!({"valid": true}))?;
    } else {
        let mut text = String::from("certificate confirmed: the matrix has no uniform embedding\n");
        for c in &cycles {
            text.push_str(&describe_cycle(&m, c));
        }
        write_text(out, &text)?;
    }
    Ok(EXIT_INFEASIBLE)
}

/// Feasibility label for generated matrices: brute force when small enough,
/// the solver otherwise.
fn label(m: &RobinsonMatrix) -> Result<(bool, &'static str), Failure> {
    if m.n() <= DIRECT_GUARD_N && m.k() <= DIRECT_GUARD_K {
        let outcome = direct_feasibility(m).map_err(|e| internal(e.to_string()))?;
        Ok((outcome.is_feasible(), "oracle"))
    } else {
        let outcome = solve(m, Method::General).map_err(|e| internal(e.to_string()))?;
        Ok((outcome.is_feasible(), "solver"))
    }
}

fn cmd_gen(
    n: usize,
    k: u32,
    seed: u64,
    attempts: usize,
    duplicates: usize,
    out: &mut dyn Write,
) -> Outcome {
    if duplicates >= n {
        return Err(usage(format!("--duplicates must be below n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = planted(n - duplicates, k as usize, &mut rng).matrix;
    let mut tag = "feasible (planted)".to_string();
    if attempts > 0 {
        let mut failure = None;
        m = perturb_until_infeasible(&m, attempts, &mut rng, |x| match label(x) {
            Ok((feasible, _)) => feasible,
            Err(e) => {
                failure = Some(e);
                false
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    if duplicates > 0 {
        m = duplicate_rows(&m, duplicates, &mut rng);
    }
    if attempts > 0 {
        let (feasible, by) = label(&m)?;
        tag = format!(
            "{} ({by})",
            if feasible { "feasible" } else { "infeasible" }
        );
    }
    let header = format!(
        "# robinson-embed gen n={n} k={k} seed={seed} infeasible-attempts={attempts} duplicates={duplicates}\n# label: {tag}\n"
    );
    write_text(out, &header)?;
    write_text(out, &m.to_text())?;
    Ok(EXIT_OK)
}

fn cmd_oracle_paths(
    path: &Path,
    u: usize,
    v: usize,
    lower: bool,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let m = load_matrix(path)?;
    if u == 0 || v == 0 {
        return Err(usage("vertices are 1-based"));
    }
    let kind = if lower {
        WalkKind::Lower
    } else {
        WalkKind::Upper
    };
    let paths =
        enumerate_paths_bruteforce(&m, u - 1, v - 1, kind).map_err(|e| usage(e.to_string()))?;
    if json {
        let doc: Vec<PathJson> = paths
            .iter()
            .map(|p| PathJson {
                bound: p.bound.coeffs().to_vec(),
                path: p.vertices.iter().map(|x| x + 1).collect(),
            })
            .collect();
        return emit_json(out, &doc);
    }
    let mut text = String::new();
    for p in &paths {
        text.push_str(&format!(
            "{} {}\n",
            p.bound,
            BoundWalk::upper(p.vertices.clone())
        ));
    }
    write_text(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_oracle_cycles(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let cycles = minimal_cycles_bruteforce(&m).map_err(|e| usage(e.to_string()))?;
    if json {
        let doc: Vec<CycleJson> = cycles
            .iter()
            .map(|c| CycleJson {
                vertices: c.vertices.iter().map(|x| x + 1).collect(),
                bound: c.bound.coeffs().to_vec(),
            })
            .collect();
        return emit_json(out, &doc);
    }
    let text: String = cycles.iter().map(|c| format!("{c}\n")).collect();
    write_text(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_oracle_feasible(path: &Path, json: bool, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(path)?;
    let outcome = direct_feasibility(&m).map_err(|e| usage(e.to_string()))?;
    match &outcome {
        DirectOutcome::Feasible { d, pi } => {
            if json {
                emit_json(
                    out,
                    &SolveJson::Feasible {
                        d: d.to_strings(),
                        pi: pi.to_strings(),
                    },
                )?;
            } else {
                write_text(out, &describe_solution(d, pi, false))?;
            }
            Ok(EXIT_OK)
        }
        DirectOutcome::Infeasible => {
            if json {
                emit_json(out, &serde_json::json!({"status": "infeasible"}))?;
            } else {
                emit(out, "NO SOLUTION")?;
            }
            Ok(EXIT_INFEASIBLE)
        }
    }
}
