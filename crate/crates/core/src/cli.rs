//! The `circbut` command line.
//!
//! Structured results go to stdout as JSON (or the row text format), and
//! diagnostics go to stderr. Exit status: 0 success, 1 a failed verification or
//! aborted operation, 2 bad usage or unreadable input.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::circulant::{
    canonicalize_with, check_cyclic_root, is_hadamard, is_hermitian, row_to_cyclic_root,
    EquivalenceGroup, ExponentRow,
};
use crate::constructions::{
    backelin_circulant, fourier_circulant, quadratic_row, reduce_to_fourier, BackelinParams,
    QuadraticCoeffs,
};
use crate::duality::{dual, inverse_dual, ComplexRow};
use crate::obstructions::{
    check_obstructions, haagerup_count_bound, intersection_bound_check, planar_theorem_audit,
    verify_determinant_identity, IntersectionReport,
};
use crate::rowtext::{self, RowFile};
use crate::search::{
    classify_cell, classify_hermitian, prime_uniqueness_audit, sweep_table, SearchConfig,
    SearchError, SearchReport, TableEntry, DEFAULT_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "circbut",
    version,
    about = "Circulant Butson Hadamard matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check rows read from a row file (stdin by default).
    Verify(InputArgs),
    /// Print a row from one of the explicit families.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Classify a cell C_n(l) by exhaustive search.
    Search(SearchArgs),
    /// Apply the Fourier duality x -> Fx to rows.
    Dualize(DualizeArgs),
    /// Report the first known obstruction for a cell.
    Obstruct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
    },
    /// Render the existence table over a range of cells.
    Table(TableArgs),
    /// Run one of the exhaustive audits.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Row file; stdin when omitted.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Fourier matrix in circulant form.
    Fourier {
        #[arg(long)]
        n: usize,
    },
    /// Backelin's circulant of order m*n.
    Backelin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// e[j] = a j^2 + b j + c over Z/pZ.
    Quadratic {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        c: usize,
        /// Print the reduction to the Fourier matrix as JSON instead.
        #[arg(long)]
        reduce: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupArg {
    RotateAndConstant,
    RotateConstantAndReversal,
}

impl From<GroupArg> for EquivalenceGroup {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::RotateAndConstant => Self::RotateAndConstant,
            GroupArg::RotateConstantAndReversal => Self::RotateConstantAndReversal,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    /// Only classes containing a Hermitian row.
    #[arg(long)]
    hermitian: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value = "rotate-and-constant")]
    group: GroupArg,
    /// Also write the representatives in the row text format.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append finished subtrees here and skip them on a rerun.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Include elapsed seconds in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct DualizeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Apply F* instead of F.
    #[arg(long)]
    inverse: bool,
    /// Print verdicts and values as JSON instead of the row text format.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    l_min: usize,
    #[arg(long)]
    l_max: usize,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[command(group(
    clap::ArgGroup::new("kind")
        .required(true)
        .args(["planar", "prime", "intersection", "haagerup", "determinant"])
))]
struct AuditArgs {
    /// Planar <=> quadratic <=> Hadamard over all functions on Z/pZ.
    #[arg(long, requires = "p")]
    planar: bool,
    /// Uniqueness of the Fourier matrix in C_p(p).
    #[arg(long, requires = "p")]
    prime: bool,
    /// Shift-intersection bound over every subset of Z/nZ.
    #[arg(long, requires = "n")]
    intersection: bool,
    /// binomial(2p-2, p-1).
    #[arg(long, requires = "p")]
    haagerup: bool,
    /// |det H|^2 = n^n for rows read from stdin or --file.
    #[arg(long)]
    determinant: bool,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

/// Error carrying the exit status it maps to.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILED,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let text = serde_json::to_string(value).expect("reports serialize");
        writeln!(self.stdout, "{text}").map_err(|e| failed(format!("writing output: {e}")))
    }

    fn text(&mut self, text: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| failed(format!("writing output: {e}")))
    }

    fn read_rows(&mut self, file: &Option<PathBuf>) -> Result<RowFile, Failure> {
        let text = match file {
            Some(path) => fs::read_to_string(path)
                .map_err(|e| usage(format!("reading {}: {e}", path.display())))?,
            None => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| usage(format!("reading stdin: {e}")))?;
                s
            }
        };
        rowtext::parse(&text).map_err(|e| usage(format!("row file: {e}")))
    }
}

fn exponent_rows(file: RowFile) -> Result<(usize, usize, Vec<ExponentRow>), Failure> {
    match file {
        RowFile::Exponent { n, l, rows } => Ok((n, l, rows)),
        RowFile::Complex { .. } => Err(usage("expected an exponent row file (`# n=<n> l=<l>`)")),
    }
}

fn config(workers: Option<usize>, budget: u64) -> SearchConfig {
    let mut c = SearchConfig::default().with_budget(budget);
    if let Some(w) = workers {
        c = c.with_workers(w);
    }
    c
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::BudgetExceeded { .. } | SearchError::Checkpoint(_) => failed(e.to_string()),
        _ => usage(e.to_string()),
    }
}

#[derive(Serialize)]
struct VerifiedRow {
    exponents: Vec<usize>,
    hadamard: bool,
    hermitian: bool,
    cyclic_root_vanishing: bool,
    cyclic_root_product_one: bool,
    canonical: Vec<usize>,
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    l: usize,
    hadamard: bool,
    hermitian: bool,
    rows: Vec<VerifiedRow>,
}

fn verify(io: &mut Io, args: InputArgs) -> Outcome {
    let (n, l, rows) = exponent_rows(io.read_rows(&args.file)?)?;
    let checked: Vec<VerifiedRow> = rows
        .iter()
        .map(|r| {
            let root = check_cyclic_root(&row_to_cyclic_root(r));
            VerifiedRow {
                exponents: r.exponents().to_vec(),
                hadamard: is_hadamard(r),
                hermitian: is_hermitian(r),
                cyclic_root_vanishing: root.vanishing,
                cyclic_root_product_one: root.product_one,
                canonical: canonicalize_with(r, EquivalenceGroup::RotateAndConstant)
                    .representative
                    .into_exponents(),
            }
        })
        .collect();
    let report = VerifyReport {
        n,
        l,
        hadamard: checked.iter().all(|r| r.hadamard),
        hermitian: checked.iter().all(|r| r.hermitian),
        rows: checked,
    };
    io.json(&report)?;
    Ok(if report.hadamard {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[derive(Serialize)]
struct ReductionReport {
    p: usize,
    a: usize,
    b: usize,
    c: usize,
    row_permutation: Vec<usize>,
    column_dephased: Vec<Vec<usize>>,
    row_dephased: Vec<Vec<usize>>,
    fourier: Vec<Vec<usize>>,
}

fn construct(io: &mut Io, family: Family) -> Outcome {
    let row = match family {
        Family::Fourier { n } => fourier_circulant(n).map_err(|e| usage(e.to_string()))?,
        Family::Backelin { n, m } => {
            backelin_circulant(BackelinParams::new(n, m).map_err(|e| usage(e.to_string()))?)
        }
        Family::Quadratic { p, a, b, c, reduce } => {
            let coeffs = QuadraticCoeffs::new(p, a, b, c).map_err(|e| usage(e.to_string()))?;
            let row = quadratic_row(coeffs);
            if reduce {
                let red = reduce_to_fourier(&row).map_err(|e| failed(e.to_string()))?;
                io.json(&ReductionReport {
                    p,
                    a: coeffs.a(),
                    b: coeffs.b(),
                    c: coeffs.c(),
                    row_permutation: red.row_permutation,
                    column_dephased: red.column_dephased,
                    row_dephased: red.row_dephased,
                    fourier: red.fourier,
                })?;
                return Ok(EXIT_OK);
            }
            row
        }
    };
    io.text(&rowtext::format_exponent_rows(
        row.n(),
        row.l(),
        std::slice::from_ref(&row),
    ))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SearchJson {
    n: usize,
    l: usize,
    hermitian: bool,
    equivalence_group: EquivalenceGroup,
    class_count: usize,
    hadamard_class_count: Option<usize>,
    representatives: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hermitian_rows: Option<Vec<Vec<usize>>>,
    nodes: u64,
    pruned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

fn search_json(r: &SearchReport, timing: bool) -> SearchJson {
    let plain = |rows: &[ExponentRow]| rows.iter().map(|r| r.exponents().to_vec()).collect();
    SearchJson {
        n: r.n,
        l: r.l,
        hermitian: r.hermitian,
        equivalence_group: r.equivalence_group,
        class_count: r.class_count,
        hadamard_class_count: r.hadamard_class_count,
        representatives: plain(&r.representatives),
        hermitian_rows: r.hermitian_rows.as_deref().map(plain),
        nodes: r.nodes_visited,
        pruned: r.pruned,
        seconds: timing.then_some(r.wall_time.as_secs_f64()),
    }
}

fn search(io: &mut Io, args: SearchArgs) -> Outcome {
    let mut cfg = config(args.workers, args.budget).with_group(args.group.into());
    if let Some(path) = &args.checkpoint {
        if args.hermitian {
            return Err(usage("--checkpoint is not supported with --hermitian"));
        }
        cfg = cfg.with_checkpoint(path);
    }
    let report = if args.hermitian {
        classify_hermitian(args.n, args.l, &cfg)
    } else {
        classify_cell(args.n, args.l, &cfg)
    }
    .map_err(search_failure)?;
    if let Some(path) = &args.out {
        let text = rowtext::format_exponent_rows(report.n, report.l, &report.representatives);
        fs::write(path, text).map_err(|e| failed(format!("writing {}: {e}", path.display())))?;
    }
    io.json(&search_json(&report, args.timing))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DualRowJson {
    values: Vec<[f64; 2]>,
    unimodular: bool,
    hermitian: bool,
    real: bool,
}

#[derive(Serialize)]
struct DualJson {
    n: usize,
    inverse: bool,
    rows: Vec<DualRowJson>,
}

fn dualize(io: &mut Io, args: DualizeArgs) -> Outcome {
    let (n, inputs): (usize, Vec<ComplexRow>) = match io.read_rows(&args.input.file)? {
        RowFile::Exponent { n, rows, .. } => {
            (n, rows.iter().map(ComplexRow::from_exponents).collect())
        }
        RowFile::Complex { n, rows } => (
            n,
            rows.into_iter()
                .map(|r| ComplexRow::new(r).map_err(|e| usage(e.to_string())))
                .collect::<Result<_, _>>()?,
        ),
    };
    let map = if args.inverse { inverse_dual } else { dual };
    let outputs: Vec<ComplexRow> = inputs.iter().map(map).collect();
    if args.json {
        io.json(&DualJson {
            n,
            inverse: args.inverse,
            rows: outputs
                .iter()
                .map(|y| DualRowJson {
                    values: y.values().iter().map(|z| [z.re, z.im]).collect(),
                    unimodular: y.is_unimodular(),
                    hermitian: y.is_hermitian_symmetric(),
                    real: y.is_real(),
                })
                .collect(),
        })?;
    } else {
        let rows: Vec<_> = outputs.iter().map(|y| y.values().to_vec()).collect();
        io.text(&rowtext::format_complex_rows(n, &rows))?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ObstructJson {
    n: usize,
    l: usize,
    status: &'static str,
    reason: Option<crate::obstructions::Reason>,
}

fn obstruct(io: &mut Io, n: usize, l: usize) -> Outcome {
    let v = check_obstructions(n, l).map_err(|e| usage(e.to_string()))?;
    io.json(&ObstructJson {
        n,
        l,
        status: if v.is_obstructed() {
            "obstructed"
        } else {
            "no_known_obstruction"
        },
        reason: v.reason(),
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TableCellJson {
    n: usize,
    l: usize,
    symbol: String,
    obstruction: Option<crate::obstructions::Reason>,
    class_count: Option<usize>,
    hadamard_class_count: Option<usize>,
}

fn table(io: &mut Io, args: TableArgs) -> Outcome {
    if args.n_min < 2 || args.l_min < 2 || args.n_max < args.n_min || args.l_max < args.l_min {
        return Err(usage("table ranges need 2 <= min <= max"));
    }
    let cfg = config(args.workers, args.budget);
    let t = sweep_table(args.n_min..=args.n_max, args.l_min..=args.l_max, &cfg)
        .map_err(search_failure)?;
    if args.json {
        let cells: Vec<TableCellJson> = t
            .cells
            .iter()
            .map(|c| {
                let (obstruction, class_count, hadamard_class_count) = match &c.entry {
                    TableEntry::Obstructed(r) => (Some(*r), None, None),
                    TableEntry::Count {
                        classes,
                        hadamard_classes,
                    } => (None, Some(*classes), *hadamard_classes),
                    TableEntry::Blank => (None, None, None),
                };
                TableCellJson {
                    n: c.n,
                    l: c.l,
                    symbol: c.symbol(),
                    obstruction,
                    class_count,
                    hadamard_class_count,
                }
            })
            .collect();
        io.json(&cells)?;
    } else {
        io.text(&t.render())?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IntersectionAudit {
    n: usize,
    subsets: u64,
    literal_violations: u64,
    literal_nonzero_violations: u64,
    squared_violations: u64,
    first_literal_violation: Option<IntersectionReport>,
    holds: bool,
}

/// Runs the shift-intersection bound over all nonempty subsets of `Z/nZ`.
pub fn intersection_audit(n: usize) -> Result<IntersectionAuditSummary, String> {
    if n == 0 || n > 24 {
        return Err(format!("n={n} outside 1..=24"));
    }
    let mut s = IntersectionAuditSummary {
        n,
        subsets: 0,
        literal_violations: 0,
        literal_nonzero_violations: 0,
        squared_violations: 0,
        first_literal_violation: None,
    };
    for mask in 1u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let r = intersection_bound_check(n, &set).map_err(|e| e.to_string())?;
        s.subsets += 1;
        if !r.literal_holds {
            s.literal_violations += 1;
            if s.first_literal_violation.is_none() {
                s.first_literal_violation = Some((set, r.clone()));
            }
        }
        s.literal_nonzero_violations += (!r.literal_holds_nonzero) as u64;
        s.squared_violations += (!r.squared_holds) as u64;
    }
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct IntersectionAuditSummary {
    pub n: usize,
    pub subsets: u64,
    pub literal_violations: u64,
    pub literal_nonzero_violations: u64,
    pub squared_violations: u64,
    pub first_literal_violation: Option<(Vec<usize>, IntersectionReport)>,
}

#[derive(Serialize)]
struct HaagerupJson {
    p: usize,
    bound: u128,
}

#[derive(Serialize)]
struct DeterminantJson {
    n: usize,
    l: usize,
    rows: Vec<crate::obstructions::DeterminantCheck>,
    holds: bool,
}

fn audit(io: &mut Io, args: AuditArgs) -> Outcome {
    if args.planar {
        let p = args.p.expect("clap requires --p");
        let a = planar_theorem_audit(p).map_err(|e| usage(e.to_string()))?;
        io.json(&a)?;
        return Ok(if a.holds() { EXIT_OK } else { EXIT_FAILED });
    }
    if args.prime {
        let p = args.p.expect("clap requires --p");
        let a = prime_uniqueness_audit(p, &config(args.workers, DEFAULT_BUDGET))
            .map_err(search_failure)?;
        io.json(&a)?;
        return Ok(if a.holds { EXIT_OK } else { EXIT_FAILED });
    }
    if args.intersection {
        let n = args.n.expect("clap requires --n");
        let s = intersection_audit(n).map_err(usage)?;
        let holds = s.literal_violations == 0 && s.literal_nonzero_violations == 0;
        io.json(&IntersectionAudit {
            n,
            subsets: s.subsets,
            literal_violations: s.literal_violations,
            literal_nonzero_violations: s.literal_nonzero_violations,
            squared_violations: s.squared_violations,
            first_literal_violation: s.first_literal_violation.map(|(_, r)| r),
            holds,
        })?;
        return Ok(if holds { EXIT_OK } else { EXIT_FAILED });
    }
    if args.haagerup {
        let p = args.p.expect("clap requires --p");
        let bound = haagerup_count_bound(p).map_err(|e| usage(e.to_string()))?;
        io.json(&HaagerupJson { p, bound })?;
        return Ok(EXIT_OK);
    }
    let (n, l, rows) = exponent_rows(io.read_rows(&args.file)?)?;
    let checks: Vec<_> = rows.iter().map(verify_determinant_identity).collect();
    let holds = checks.iter().all(|c| c.holds);
    io.json(&DeterminantJson {
        n,
        l,
        rows: checks,
        holds,
    })?;
    Ok(if holds { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    let outcome = match cli.command {
        Command::Verify(a) => verify(&mut io, a),
        Command::Construct { family } => construct(&mut io, family),
        Command::Search(a) => search(&mut io, a),
        Command::Dualize(a) => dualize(&mut io, a),
        Command::Obstruct { n, l } => obstruct(&mut io, n, l),
        Command::Table(a) => table(&mut io, a),
        Command::Audit(a) => audit(&mut io, a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
