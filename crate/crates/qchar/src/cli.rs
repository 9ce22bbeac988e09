//! Command-line front end. Every subcommand produces a `Report` whose text
//! and JSON renderings carry the same lines, so golden tests can diff either.
//! Exit codes: 0 success, 1 input validation, 2 resource budget, 3 internal
//! consistency alarm.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bicomplex;
use crate::cyclic_words::{cyclic_primitive, reference_a_word, transgress};
use crate::error::QcharError;
use crate::graphs::enumerate::{family_cohomology_dims, slice_matrix};
use crate::graphs::{enumerate_basis, graph_differential, render_vector, Family, GraphVector};
use crate::linalg::QMatrix;
use crate::qmanifolds::{
    builtin_algebra, ce_field, class_a, class_b, class_c, is_exact, modular_class, parse_algebra,
    LieSuperAlgebraSpec, Series,
};
use crate::rational::{fmt_rat, Rat};
use crate::sampling::Sampler;
use crate::superalg::{lie_derivative, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "qchar",
    version,
    about = "Exact symbolic engine for characteristic classes of homological vector fields"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count for randomized property checks.
    #[arg(long, global = true, default_value_t = 100)]
    trials: u32,
    /// Worker threads for parallelizable checks.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph complex computations.
    Graphs {
        #[command(subcommand)]
        command: GraphsCommand,
    },
    /// Solve the cyclic-word transgression in degree 2n-1.
    Transgress(TransgressArgs),
    /// Lie superalgebra Q-manifolds: validation, classes, modular class.
    Lie {
        #[command(subcommand)]
        command: LieCommand,
    },
    /// Seven-letter bicomplex checks and representative identities.
    Bicomplex {
        #[command(subcommand)]
        command: BicomplexCommand,
    },
}

#[derive(Subcommand)]
enum GraphsCommand {
    /// Cohomology dimension table for a graph family.
    Cohomology(CohomologyArgs),
}

#[derive(Args)]
struct CohomologyArgs {
    /// Family: tree, cyclic, polygon or line.
    #[arg(long)]
    family: String,
    /// Table index for the tree and cyclic families.
    #[arg(long)]
    n: Option<usize>,
    /// Vertex bound for the polygon table.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Length bound for the line table.
    #[arg(long)]
    max_length: Option<usize>,
    /// Also print basis cocycles with verified closedness for each
    /// nonvanishing degree.
    #[arg(long)]
    certificates: bool,
}

#[derive(Args)]
struct TransgressArgs {
    /// Index of the transgression; the candidate lives in degree 2n-1.
    #[arg(long)]
    n: u32,
    /// Raise the default index budget of 4.
    #[arg(long)]
    budget: Option<u32>,
}

#[derive(Subcommand)]
enum LieCommand {
    /// Validate an algebra: antisymmetry, Jacobi, squared field, plus seeded
    /// random checks that the Lie derivative squares to zero.
    Verify(LieInputArgs),
    /// Compute class representatives for the listed series at index n.
    Classes(ClassesArgs),
    /// Decide the modular class: exactness of the first scalar class.
    Modular(LieInputArgs),
}

#[derive(Args)]
struct LieInputArgs {
    /// Built-in algebra name or path to an algebra description file.
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct ClassesArgs {
    /// Built-in algebra name or path to an algebra description file.
    #[arg(long)]
    input: String,
    /// Comma-separated series letters from {A, B, C}.
    #[arg(long)]
    series: String,
    /// Class index.
    #[arg(long)]
    n: usize,
    /// Also decide exactness of each representative.
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand)]
enum BicomplexCommand {
    /// Nilpotency, homotopy and truncated-cohomology checks.
    Check {
        /// Longest traced word inspected (at most 4).
        #[arg(long, default_value_t = bicomplex::MAX_WORD_LEN)]
        upto: usize,
    },
    /// Solve the exact-representative identities for n = 1..=upto.
    Representatives {
        /// Largest diagonal cocycle index (at most 3).
        #[arg(long, default_value_t = 3)]
        upto: u8,
    },
    /// Print the images of the two averaged homotopies on every letter.
    Homotopy,
}

/// One finished command: the echo line, engine version, optional seed for
/// randomized runs, and the result lines. JSON and text renderings carry the
/// same fields one-to-one.
#[derive(Serialize)]
struct Report {
    command: String,
    engine_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    lines: Vec<String>,
    #[serde(skip)]
    failure: Option<QcharError>,
}

impl Report {
    fn new(command: String) -> Self {
        Report {
            command,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            lines: Vec::new(),
            failure: None,
        }
    }

    fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!(
                    "qchar {}\ncommand: {}\n",
                    self.engine_version, self.command
                );
                if let Some(seed) = self.seed {
                    out.push_str(&format!("seed: {seed}\n"));
                }
                for line in &self.lines {
                    out.push_str(line);
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self)
                    .expect("report serialization cannot fail");
                out.push('\n');
                out
            }
        }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            print!("{}", report.emit(cli.format));
            match &report.failure {
                Some(err) => {
                    eprintln!("error: {err}");
                    err.exit_code()
                }
                None => 0,
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, QcharError> {
    if cli.threads == 0 {
        return Err(QcharError::InvalidInput(
            "--threads must be at least 1".to_string(),
        ));
    }
    match &cli.command {
        Command::Graphs {
            command: GraphsCommand::Cohomology(args),
        } => cmd_graph_cohomology(args),
        Command::Transgress(args) => cmd_transgress(args),
        Command::Lie { command } => match command {
            LieCommand::Verify(args) => {
                cmd_lie_verify(&args.input, cli.seed, cli.trials, cli.threads)
            }
            LieCommand::Classes(args) => cmd_lie_classes(args),
            LieCommand::Modular(args) => cmd_lie_modular(&args.input),
        },
        Command::Bicomplex { command } => match command {
            BicomplexCommand::Check { upto } => cmd_bicomplex_check(*upto),
            BicomplexCommand::Representatives { upto } => cmd_bicomplex_representatives(*upto),
            BicomplexCommand::Homotopy => cmd_bicomplex_homotopy(),
        },
    }
}

// ---------------------------------------------------------------------------
// graphs cohomology
// ---------------------------------------------------------------------------

fn reject_flag<T>(value: &Option<T>, flag: &str, family: &str) -> Result<(), QcharError> {
    if value.is_some() {
        return Err(QcharError::InvalidInput(format!(
            "{flag} does not apply to the {family} family"
        )));
    }
    Ok(())
}

fn cmd_graph_cohomology(args: &CohomologyArgs) -> Result<Report, QcharError> {
    let family: Family = args.family.parse()?;
    // (in-legs, out-legs, largest vertex count, row label)
    let (n_in, m_out, max_k, row_label) = match family {
        Family::Tree => {
            let n = args
                .n
                .ok_or_else(|| QcharError::InvalidInput("--n is required for tree".into()))?;
            reject_flag(&args.max_vertices, "--max-vertices", "tree")?;
            reject_flag(&args.max_length, "--max-length", "tree")?;
            (n + 1, 1, n + 1, "m")
        }
        Family::Cyclic => {
            let n = args
                .n
                .ok_or_else(|| QcharError::InvalidInput("--n is required for cyclic".into()))?;
            reject_flag(&args.max_vertices, "--max-vertices", "cyclic")?;
            reject_flag(&args.max_length, "--max-length", "cyclic")?;
            (n, 0, n + 1, "m")
        }
        Family::Polygon => {
            let v = args.max_vertices.ok_or_else(|| {
                QcharError::InvalidInput("--max-vertices is required for polygon".into())
            })?;
            reject_flag(&args.n, "--n", "polygon")?;
            reject_flag(&args.max_length, "--max-length", "polygon")?;
            (0, 0, v + 1, "vertices")
        }
        Family::Line => {
            let v = args.max_length.ok_or_else(|| {
                QcharError::InvalidInput("--max-length is required for line".into())
            })?;
            reject_flag(&args.n, "--n", "line")?;
            reject_flag(&args.max_vertices, "--max-vertices", "line")?;
            (1, 1, v + 1, "vertices")
        }
        other => {
            return Err(QcharError::InvalidInput(format!(
                "cohomology tables cover tree, cyclic, polygon and line, not {other}"
            )))
        }
    };

    let mut echo = format!("graphs cohomology --family {}", args.family);
    if let Some(n) = args.n {
        echo.push_str(&format!(" --n {n}"));
    }
    if let Some(v) = args.max_vertices {
        echo.push_str(&format!(" --max-vertices {v}"));
    }
    if let Some(v) = args.max_length {
        echo.push_str(&format!(" --max-length {v}"));
    }
    if args.certificates {
        echo.push_str(" --certificates");
    }

    let dims = family_cohomology_dims(family, n_in, m_out, max_k)?;
    let mut report = Report::new(echo);
    for (k, dim) in &dims {
        report.push(format!("{row_label}={k}: {dim}"));
    }
    if args.certificates {
        for (k, dim) in &dims {
            if *dim == 0 {
                continue;
            }
            for v in cocycle_certificates(family, n_in, m_out, *k, *dim)? {
                let closed = graph_differential(&v).is_zero();
                report.push(format!(
                    "cocycle at {row_label}={k}: {}  [d -> 0 {}]",
                    render_vector(&v),
                    if closed { "verified" } else { "FAILED" }
                ));
                if !closed {
                    report.failure = Some(QcharError::Internal(
                        "certificate vector is not closed".to_string(),
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Representatives of the degree-`k` cohomology: kernel vectors of the
/// outgoing differential that extend the incoming image to a full basis of
/// the kernel.
fn cocycle_certificates(
    family: Family,
    n_in: usize,
    m_out: usize,
    k: usize,
    expected: usize,
) -> Result<Vec<GraphVector>, QcharError> {
    let below = enumerate_basis(family, n_in, m_out, k - 1)?;
    let here = enumerate_basis(family, n_in, m_out, k)?;
    let above = enumerate_basis(family, n_in, m_out, k + 1)?;
    let kernel = slice_matrix(&here, &above).kernel_basis();
    let image = slice_matrix(&below, &here);

    // Columns of `image` plus chosen kernel vectors, extended greedily.
    let mut span: Vec<Vec<Rat>> = (0..below.basis.len())
        .map(|j| (0..here.basis.len()).map(|i| image.get(i, j).clone()).collect())
        .collect();
    let mut rank = QMatrix::from_rows(transpose(&span, here.basis.len())).rank();
    let mut picked = Vec::new();
    for v in kernel {
        span.push(v.clone());
        let next = QMatrix::from_rows(transpose(&span, here.basis.len())).rank();
        if next > rank {
            rank = next;
            let mut gv = GraphVector::zero();
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    gv.add_graph(&here.basis[i], c.clone());
                }
            }
            picked.push(gv);
        } else {
            span.pop();
        }
    }
    if picked.len() != expected {
        return Err(QcharError::Internal(format!(
            "certificate count {} disagrees with the dimension {expected}",
            picked.len()
        )));
    }
    Ok(picked)
}

fn transpose(cols: &[Vec<Rat>], rows: usize) -> Vec<Vec<Rat>> {
    (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// transgress
// ---------------------------------------------------------------------------

fn cmd_transgress(args: &TransgressArgs) -> Result<Report, QcharError> {
    let budget = args.budget.unwrap_or(4);
    if args.n > budget {
        return Err(QcharError::Budget(format!(
            "transgression index {} above the budget {budget}; raise it with --budget",
            args.n
        )));
    }
    let mut echo = format!("transgress --n {}", args.n);
    if let Some(b) = args.budget {
        echo.push_str(&format!(" --budget {b}"));
    }
    let t = transgress(args.n)?;
    let mut report = Report::new(echo);
    report.push(format!("candidate: {}", t.candidate));
    report.push(format!("alpha: {}", fmt_rat(&t.alpha)));
    report.push(format!(
        "binomial C(2n-1,n): {} ({})",
        fmt_rat(&t.binomial_alpha),
        if t.matches_binomial() {
            "matches"
        } else {
            "DIFFERS"
        }
    ));
    if args.n <= 4 {
        let reference = reference_a_word(args.n)?;
        let diff = t.candidate.sub(&reference);
        if diff.is_zero() {
            report.push("reference comparison: identical".to_string());
        } else if cyclic_primitive(&diff).is_some() {
            report.push("reference comparison: cohomologous (difference is exact)".to_string());
        } else {
            report.push("reference comparison: NOT COHOMOLOGOUS".to_string());
            report.failure = Some(QcharError::Internal(format!(
                "transgression candidate at n={} is not cohomologous to the stored word",
                args.n
            )));
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// lie
// ---------------------------------------------------------------------------

fn load_algebra(input: &str) -> Result<LieSuperAlgebraSpec, QcharError> {
    match builtin_algebra(input) {
        Ok(spec) => Ok(spec),
        Err(builtin_err) => match std::fs::read_to_string(input) {
            Ok(text) => parse_algebra(&text),
            Err(_) => {
                let detail = match &builtin_err {
                    QcharError::InvalidInput(msg) => msg.clone(),
                    other => other.to_string(),
                };
                Err(QcharError::InvalidInput(format!(
                    "{detail}, and no readable file at {input:?}"
                )))
            }
        },
    }
}

fn tensor_lines(prefix: &str, t: &TensorField) -> Vec<String> {
    if t.is_zero() {
        return vec![format!("{prefix}: 0")];
    }
    if t.n_lower() == 0 && t.n_upper() == 0 {
        return vec![format!("{prefix}: {}", t.get(&[], &[]).render(t.domain()))];
    }
    let dom = t.domain().clone();
    let idx = |v: &[u8]| {
        v.iter()
            .map(|&i| dom.name(i as usize).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    t.iter()
        .map(|((l, u), poly)| format!("{prefix}[{}|{}] = {}", idx(l), idx(u), poly.render(&dom)))
        .collect()
}

fn cmd_lie_verify(
    input: &str,
    seed: u64,
    trials: u32,
    threads: usize,
) -> Result<Report, QcharError> {
    let spec = load_algebra(input)?;
    let m = ce_field(&spec)?;
    let mut report = Report::new(format!("lie verify --input {input}"));
    report.seed = Some(seed);
    report.push(format!("dimension: {}", spec.dim()));
    report.push("antisymmetry and Jacobi: verified".to_string());
    report.push("homological field Q^2 = 0: verified".to_string());

    // Randomized spot check: the Lie derivative along a homological field
    // squares to zero on arbitrary tensors.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| QcharError::Internal(format!("thread pool: {e}")))?;
    let all_ok = pool.install(|| {
        (0..trials).into_par_iter().all(|t| {
            let mut sampler = Sampler::new(seed.wrapping_add(1 + t as u64));
            let tensor = sampler.tensor(m.domain(), 1, 1, (t % 2) as u8);
            lie_derivative(m.q(), &tensor)
                .and_then(|once| lie_derivative(m.q(), &once))
                .map(|twice| twice.is_zero())
                .unwrap_or(false)
        })
    });
    report.push(format!(
        "random Lie-derivative square checks: {trials} trials {}",
        if all_ok { "passed" } else { "FAILED" }
    ));
    if !all_ok {
        report.failure = Some(QcharError::Internal(
            "Lie derivative failed to square to zero on a sampled tensor".to_string(),
        ));
    }
    Ok(report)
}

fn cmd_lie_classes(args: &ClassesArgs) -> Result<Report, QcharError> {
    let spec = load_algebra(&args.input)?;
    let m = ce_field(&spec)?;
    let mut series = Vec::new();
    for part in args.series.split(',') {
        series.push(match part.trim() {
            "A" | "a" => Series::A,
            "B" | "b" => Series::B,
            "C" | "c" => Series::C,
            other => {
                return Err(QcharError::InvalidInput(format!(
                    "unknown series {other:?}; use letters from A,B,C"
                )))
            }
        });
    }
    if args.n == 0 {
        return Err(QcharError::InvalidInput("--n must be at least 1".into()));
    }
    let mut echo = format!(
        "lie classes --input {} --series {} --n {}",
        args.input, args.series, args.n
    );
    if args.exact {
        echo.push_str(" --exact");
    }
    let mut report = Report::new(echo);
    for s in series {
        let class = match s {
            Series::A => class_a(&m, args.n),
            Series::B => class_b(&m, args.n),
            Series::C => class_c(&m, args.n),
        };
        report.push(format!(
            "series {s} n={}: closed={}",
            args.n,
            if class.closed { "yes" } else { "NO" }
        ));
        if !class.closed {
            report.failure = Some(QcharError::Internal(format!(
                "series {s} representative is not closed"
            )));
        }
        for line in tensor_lines("  representative", &class.representative) {
            report.push(line);
        }
        if s == Series::C && args.n == 2 {
            if let Some(det) = constant_form_determinant(&class.representative) {
                report.push(format!(
                    "  bilinear form determinant: {} ({})",
                    fmt_rat(&det),
                    if det.is_zero() {
                        "degenerate"
                    } else {
                        "nondegenerate"
                    }
                ));
            }
        }
        if args.exact {
            let (exact, primitive) = is_exact(&m, &class.representative)?;
            report.push(format!("  exact: {}", if exact { "yes" } else { "no" }));
            if let Some(p) = primitive {
                for line in tensor_lines("  primitive", &p) {
                    report.push(line);
                }
            }
        }
    }
    Ok(report)
}

/// Determinant of a twice-lower tensor whose components are all constant.
fn constant_form_determinant(t: &TensorField) -> Option<Rat> {
    if t.n_lower() != 2 || t.n_upper() != 0 {
        return None;
    }
    let dim = t.domain().dim();
    let mut rows = vec![vec![Rat::zero(); dim]; dim];
    for (a, row) in rows.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            let poly = t.get(&[a as u8, b as u8], &[]);
            if poly.max_degree() > 0 {
                return None;
            }
            *entry = poly.coeff(0);
        }
    }
    Some(QMatrix::from_rows(rows).det())
}

fn cmd_lie_modular(input: &str) -> Result<Report, QcharError> {
    let spec = load_algebra(input)?;
    let class = modular_class(&spec)?;
    let mut report = Report::new(format!("lie modular --input {input}"));
    match class.exact {
        Some(true) => {
            report.push("modular class: trivial (representative is exact)".to_string());
            if let Some(p) = &class.primitive {
                for line in tensor_lines("primitive", p) {
                    report.push(line);
                }
            }
        }
        Some(false) => {
            report.push("modular class: nontrivial".to_string());
            for line in tensor_lines("representative", &class.representative) {
                report.push(line);
            }
        }
        None => {
            return Err(QcharError::Internal(
                "modular class computation left exactness undecided".to_string(),
            ))
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// bicomplex
// ---------------------------------------------------------------------------

fn push_checks(report: &mut Report, checks: &[(String, bool)]) -> bool {
    let mut all = true;
    for (name, ok) in checks {
        report.push(format!("{name}: {}", if *ok { "ok" } else { "FAIL" }));
        all &= ok;
    }
    all
}

fn cmd_bicomplex_check(upto: usize) -> Result<Report, QcharError> {
    let mut report = Report::new(format!("bicomplex check --upto {upto}"));
    let nilpotency = bicomplex::nilpotency_check(upto)?;
    let mut all = push_checks(&mut report, &nilpotency.checks);
    let homotopy = bicomplex::homotopy_check();
    all &= push_checks(&mut report, &homotopy.checks);
    let tables = bicomplex::small_degree_cohomology(upto)?;
    for line in tables.render().lines() {
        report.push(line.to_string());
    }
    if !all {
        report.failure = Some(QcharError::Internal(
            "bicomplex structural checks failed".to_string(),
        ));
    }
    Ok(report)
}

fn cmd_bicomplex_representatives(upto: u8) -> Result<Report, QcharError> {
    let mut report = Report::new(format!("bicomplex representatives --upto {upto}"));
    let mut all = true;
    for n in 1..=upto {
        let rep = bicomplex::verify_exact_representatives(n)?;
        all &= rep.status != bicomplex::RepStatus::Failed;
        report.push(rep.render());
    }
    if !all {
        report.failure = Some(QcharError::Internal(
            "a representative identity has no solution on the candidate basis".to_string(),
        ));
    }
    Ok(report)
}

fn cmd_bicomplex_homotopy() -> Result<Report, QcharError> {
    let mut report = Report::new("bicomplex homotopy".to_string());
    for line in bicomplex::homotopy_letter_images() {
        report.push(line);
    }
    let check = bicomplex::homotopy_check();
    let all = check.checks.iter().all(|(_, ok)| *ok);
    report.push(format!(
        "letter tables verified: {}",
        if all { "ok" } else { "FAIL" }
    ));
    if !all {
        report.failure = Some(QcharError::Internal(
            "homotopy letter tables disagree with the stored images".to_string(),
        ));
    }
    Ok(report)
}
