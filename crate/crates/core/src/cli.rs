//! Command-line front end.
//!
//! Every command yields a [`CommandResult`]: a status that maps to the
//! process exit code, a JSON payload (the default output) and a plain-text
//! rendering used with `--text`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::combinat::{character, class_size, partitions, Partition};
use crate::dims::{DimensionTable, RankTriangulation};
use crate::error::{invalid, Error, Result};
use crate::exactnum::Cyclo;
use crate::hypermatrix::Hypermatrix;
use crate::symmetry::{decompose_isotypic, DecompositionReport, Label};
use crate::vanishing::{
    cayley_det_222, chern_top, diag_system, resultant_n2, star_condition, witness_n2,
    witness_search_ff, ExactWitness, FfReduction, Resultant,
};

/// Largest `d` accepted for character tables.
pub const MAX_CHARTABLE_DEGREE: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    InvalidInput,
    CheckFailed,
    ResourceLimit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 1,
            Status::CheckFailed => 2,
            Status::ResourceLimit => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub text: String,
}

impl CommandResult {
    fn ok(payload: Value, text: String) -> Self {
        CommandResult {
            status: Status::Ok,
            payload,
            text,
        }
    }

    fn failure(status: Status, message: String) -> Self {
        CommandResult {
            status,
            payload: json!({ "error": message }),
            text: format!("error: {message}\n"),
        }
    }

    pub fn from_error(e: &Error) -> Self {
        let status = match e {
            Error::ResourceLimit(_) => Status::ResourceLimit,
            _ => Status::InvalidInput,
        };
        Self::failure(status, e.to_string())
    }

    /// The JSON document written for this result: the payload plus `status`.
    pub fn document(&self) -> Value {
        let mut doc = serde_json::Map::new();
        doc.insert("status".into(), json!(self.status));
        match &self.payload {
            Value::Object(fields) => doc.extend(fields.clone()),
            other => {
                doc.insert("result".into(), other.clone());
            }
        }
        Value::Object(doc)
    }
}

fn collapse(result: Result<CommandResult>) -> CommandResult {
    result.unwrap_or_else(|e| CommandResult::from_error(&e))
}

fn cyclo_string(c: &Cyclo) -> String {
    c.to_string()
}

fn vector_strings(v: &[Cyclo]) -> Vec<String> {
    v.iter().map(cyclo_string).collect()
}

/// Parses a comma-separated vector of cyclotomic literals such as
/// `1/2,-1,1/3-2*w^2`.
pub fn parse_vector(root_order: u32, text: &str) -> Result<Vec<Cyclo>> {
    if text.trim().is_empty() {
        return invalid("empty vector");
    }
    text.split(',').map(|s| Cyclo::parse(root_order, s.trim())).collect()
}

fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn nonzero_entries_text(h: &Hypermatrix, out: &mut String) {
    for (lin, c) in h.entries().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let idx: Vec<String> = h.multi_index(lin).iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "  a[{}] = {c}", idx.join(","));
    }
}

/// Checks that the components sum back to the input; a mismatch is
/// reported as a failed check.
pub fn verify_recomposition(f: &Hypermatrix, report: &DecompositionReport) -> Result<CommandResult> {
    if report.recompose()? != *f {
        return Ok(CommandResult::failure(
            Status::CheckFailed,
            "components do not sum to the input hypermatrix".into(),
        ));
    }
    let nonzero: Vec<String> = report
        .components
        .iter()
        .filter(|(_, h)| !h.is_zero())
        .map(|(l, _)| l.to_string())
        .collect();
    // eigencomponents of one shape still make a pure symmetry type
    let mut shapes: Vec<&Partition> = report
        .components
        .iter()
        .filter(|(_, h)| !h.is_zero())
        .map(|(l, _)| match l {
            Label::Isotypic(p) | Label::Eigen { shape: p, .. } => p,
        })
        .collect();
    shapes.dedup();
    let kind = match shapes.len() {
        0 => "zero",
        1 => "pure",
        _ => "mixed",
    };
    let mut payload = serde_json::to_value(report).expect("report serializes");
    payload["n"] = json!(f.n());
    payload["d"] = json!(f.d());
    payload["root_order"] = json!(f.root_order());
    payload["kind"] = json!(kind);
    payload["nonzero"] = json!(nonzero);
    payload["recomposition_verified"] = json!(true);

    let mut text = format!(
        "n = {}, d = {}, root_order = {}: {kind}\n",
        f.n(),
        f.d(),
        f.root_order()
    );
    for (label, h) in &report.components {
        if h.is_zero() {
            let _ = writeln!(text, "({label}): zero");
        } else {
            let _ = writeln!(text, "({label}):");
            nonzero_entries_text(h, &mut text);
        }
    }
    text.push_str("recomposition verified\n");
    Ok(CommandResult::ok(payload, text))
}

/// Isotypic decomposition, optionally with the standard component split
/// into its cyclic eigencomponents.
pub fn cmd_decompose(f: &Hypermatrix, standard: bool) -> CommandResult {
    collapse((|| {
        let mut report = decompose_isotypic(f)?;
        if standard {
            if f.d() < 3 {
                return invalid(format!("--standard needs d >= 3, got d = {}", f.d()));
            }
            report = report.refine_standard()?;
        }
        verify_recomposition(f, &report)
    })())
}

/// Which checks to run on one hypermatrix.
#[derive(Clone, Debug, Default)]
pub struct CheckRequest {
    pub star: Vec<String>,
    pub det222: bool,
    pub resultant: bool,
    pub witness_ff: Vec<u64>,
}

fn check_star(f: &Hypermatrix, vector: &str) -> Result<(Value, String)> {
    let v = parse_vector(f.root_order(), vector)?;
    let holds = star_condition(f, &v)?;
    Ok((
        json!({ "check": "star", "mode": "exact", "vector": vector_strings(&v), "result": holds }),
        format!("star condition at ({}): {holds}\n", vector_strings(&v).join(", ")),
    ))
}

fn check_det222(f: &Hypermatrix) -> Result<(Value, String)> {
    let det = cayley_det_222(f)?;
    Ok((
        json!({ "check": "det222", "mode": "exact", "value": cyclo_string(&det) }),
        format!("2x2x2 hyperdeterminant: {det}\n"),
    ))
}

fn check_resultant(f: &Hypermatrix) -> Result<(Value, String)> {
    let system = diag_system(f);
    let resultant = resultant_n2(&system)?;
    let witness = witness_n2(&system)?;
    let (value, common_root) = match &resultant {
        Resultant::Value(r) => (json!(cyclo_string(r)), r.is_zero()),
        Resultant::Degenerate => (json!("degenerate"), true),
    };
    let mut text = match &resultant {
        Resultant::Value(r) => format!("resultant: {r}\n"),
        Resultant::Degenerate => "resultant: degenerate: every point is a witness\n".to_string(),
    };
    let witness_json = match &witness {
        ExactWitness::Degenerate => json!({ "status": "degenerate" }),
        ExactWitness::None => json!({ "status": "none" }),
        ExactWitness::Found(u) => {
            let _ = writeln!(text, "witness: ({})", vector_strings(u).join(", "));
            json!({ "status": "found", "point": vector_strings(u) })
        }
        ExactWitness::ExtensionField { gcd_degree } => {
            let _ = writeln!(text, "witness: exists in an extension field (gcd degree {gcd_degree})");
            json!({ "status": "extension-field", "gcd_degree": gcd_degree })
        }
    };
    Ok((
        json!({
            "check": "resultant",
            "mode": "exact",
            "value": value,
            "common_root": common_root,
            "system": system,
            "witness": witness_json,
        }),
        text,
    ))
}

fn check_witness_ff(f: &Hypermatrix, p: u64) -> Result<(Value, String)> {
    let mode = format!("evidence-ff({p})");
    let reduced = FfReduction::new(f, p)?;
    let witness = witness_search_ff(f, p)?;
    let star = witness.as_ref().map(|u| reduced.star_condition(u));
    let text = match &witness {
        Some(u) => format!(
            "[{mode}] witness mod {p}: {:?}; all slices vanish mod {p}: {}\n",
            u,
            star.unwrap()
        ),
        None => format!("[{mode}] no witness in P^{}(GF({p}))\n", f.n() - 1),
    };
    Ok((
        json!({
            "check": "witness-ff",
            "mode": mode,
            "p": p,
            "omega": reduced.omega(),
            "witness": witness,
            "star_condition": star,
        }),
        text,
    ))
}

/// Runs the requested checks in the order star, det222, resultant,
/// witness-ff. Any failing precondition aborts the whole command.
pub fn cmd_check(f: &Hypermatrix, request: &CheckRequest) -> CommandResult {
    collapse((|| {
        let mut results = Vec::new();
        for v in &request.star {
            results.push(check_star(f, v)?);
        }
        if request.det222 {
            results.push(check_det222(f)?);
        }
        if request.resultant {
            results.push(check_resultant(f)?);
        }
        for &p in &request.witness_ff {
            results.push(check_witness_ff(f, p)?);
        }
        if results.is_empty() {
            return invalid("check needs at least one of --star, --det222, --resultant, --witness-ff");
        }
        let (checks, texts): (Vec<Value>, Vec<String>) = results.into_iter().unzip();
        Ok(CommandResult::ok(json!({ "checks": checks }), texts.concat()))
    })())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableRequest {
    CharTable { d: u32 },
    Dims { n: u32, d: u32, ranks: bool },
    Chern { n: u32, d: u32 },
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, &w))| if i == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn char_table(d: u32) -> Result<CommandResult> {
    if d == 0 || d > MAX_CHARTABLE_DEGREE {
        return invalid(format!("--chartable needs 1 <= d <= {MAX_CHARTABLE_DEGREE}"));
    }
    let rows = partitions(d);
    // columns from the identity class upwards
    let cols: Vec<_> = rows.iter().rev().cloned().collect();
    let table = rows
        .iter()
        .map(|l| cols.iter().map(|m| character(l, m)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<String> = cols.iter().map(|m| class_size(m).to_string()).collect();
    let payload = json!({
        "d": d,
        "partitions": rows,
        "classes": cols.iter().zip(&sizes).map(|(m, s)| json!({ "cycle_type": m, "size": s.parse::<u64>().map(Value::from).unwrap_or_else(|_| json!(s)) })).collect::<Vec<_>>(),
        "table": table,
    });
    let mut grid = vec![
        std::iter::once("λ \\ μ".to_string())
            .chain(cols.iter().map(|m| format!("({m})")))
            .collect::<Vec<_>>(),
        std::iter::once("class size".to_string()).chain(sizes).collect(),
    ];
    for (l, row) in rows.iter().zip(&table) {
        grid.push(
            std::iter::once(format!("({l})"))
                .chain(row.iter().map(i64::to_string))
                .collect(),
        );
    }
    Ok(CommandResult::ok(payload, aligned(&grid)))
}

fn dims_table(n: u32, d: u32, ranks: bool) -> Result<CommandResult> {
    let table = DimensionTable::new(n, d)?;
    let mut payload = serde_json::to_value(&table).expect("table serializes");
    let mut text = table.to_text();
    if ranks {
        let tri = RankTriangulation::compute(n, d)?;
        let consistent = tri.isotypic_consistent() && tri.eigen_consistent();
        payload["ranks"] = serde_json::to_value(&tri).expect("ranks serialize");
        payload["ranks"]["consistent"] = json!(consistent);
        let _ = writeln!(text, "projector ranks:");
        for row in &tri.isotypic {
            let _ = writeln!(text, "  ({}): rank {} (formula {})", row.label, row.rank, row.formula);
        }
        let _ = writeln!(
            text,
            "  eigencomponent ranks {:?}; hook content {}; closed form {}",
            tri.eigen_ranks, tri.hook_content, tri.closed_form
        );
        let _ = writeln!(text, "consistent: {consistent}");
        if !consistent {
            let mut r = CommandResult::ok(payload, text);
            r.status = Status::CheckFailed;
            return Ok(r);
        }
    }
    Ok(CommandResult::ok(payload, text))
}

/// Character tables, dimension tables and top Chern numbers.
pub fn cmd_tables(request: TableRequest) -> CommandResult {
    collapse(match request {
        TableRequest::CharTable { d } => char_table(d),
        TableRequest::Dims { n, d, ranks } => dims_table(n, d, ranks),
        TableRequest::Chern { n, d } => {
            if n < 2 || d < 2 {
                invalid("--chern needs n >= 2 and d >= 2")
            } else {
                let c = chern_top(n, d);
                Ok(CommandResult::ok(
                    json!({ "n": n, "d": d, "chern_top": big_json(&c) }),
                    format!("c_{}(Omega_P^{}({d})) = {c}\n", n - 1, n - 1),
                ))
            }
        }
    })
}

#[derive(Parser, Debug)]
#[command(
    name = "hypersym",
    version,
    about = "Exact symmetry decomposition of hypermatrices and hyperdeterminant vanishing checks"
)]
struct Cli {
    /// Read the hypermatrix from this file (default: standard input).
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the report to this file (default: standard output).
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a hypermatrix into its isotypic components.
    Decompose {
        file: Option<PathBuf>,
        /// Further split the standard component into eigencomponents.
        #[arg(long)]
        standard: bool,
    },
    /// Run vanishing checks on a hypermatrix.
    Check {
        file: Option<PathBuf>,
        /// Test the star condition at a comma-separated vector.
        #[arg(long, value_name = "VECTOR", allow_hyphen_values = true)]
        star: Vec<String>,
        /// Evaluate the 2x2x2 hyperdeterminant.
        #[arg(long)]
        det222: bool,
        /// Sylvester resultant of the diagonal system (n = 2).
        #[arg(long)]
        resultant: bool,
        /// Search for a witness over GF(p) (evidence only).
        #[arg(long = "witness-ff", value_name = "P")]
        witness_ff: Vec<u64>,
    },
    /// Character tables, dimension tables and Chern numbers.
    #[command(group(ArgGroup::new("table").required(true).args(["chartable", "dims", "chern"])))]
    Tables {
        #[arg(long, value_name = "D")]
        chartable: Option<u32>,
        #[arg(long, num_args = 2, value_names = ["N", "D"])]
        dims: Option<Vec<u32>>,
        /// With --dims: cross-check against exact projector ranks.
        #[arg(long)]
        ranks: bool,
        #[arg(long, num_args = 2, value_names = ["N", "D"])]
        chern: Option<Vec<u32>>,
    },
}

fn load_hypermatrix(
    global: &Option<PathBuf>,
    positional: &Option<PathBuf>,
    stdin: &mut dyn Read,
) -> Result<Hypermatrix> {
    let text = match (global, positional) {
        (Some(_), Some(_)) => return invalid("give the input either as --input or as a positional file"),
        (Some(path), None) | (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    Hypermatrix::from_json(&text)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> CommandResult {
    match &cli.command {
        Command::Decompose { file, standard } => match load_hypermatrix(&cli.input, file, stdin) {
            Ok(f) => cmd_decompose(&f, *standard),
            Err(e) => CommandResult::from_error(&e),
        },
        Command::Check {
            file,
            star,
            det222,
            resultant,
            witness_ff,
        } => match load_hypermatrix(&cli.input, file, stdin) {
            Ok(f) => cmd_check(
                &f,
                &CheckRequest {
                    star: star.clone(),
                    det222: *det222,
                    resultant: *resultant,
                    witness_ff: witness_ff.clone(),
                },
            ),
            Err(e) => CommandResult::from_error(&e),
        },
        Command::Tables {
            chartable,
            dims,
            ranks,
            chern,
        } => {
            if *ranks && dims.is_none() {
                return CommandResult::from_error(&Error::InvalidInput("--ranks needs --dims".into()));
            }
            let request = match (chartable, dims, chern) {
                (Some(d), _, _) => TableRequest::CharTable { d: *d },
                (_, Some(nd), _) => TableRequest::Dims {
                    n: nd[0],
                    d: nd[1],
                    ranks: *ranks,
                },
                (_, _, Some(nd)) => TableRequest::Chern { n: nd[0], d: nd[1] },
                _ => unreachable!("clap enforces one table"),
            };
            cmd_tables(request)
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report. Returns the process exit code.
pub fn execute<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => Status::InvalidInput.exit_code(),
            };
        }
    };
    let result = dispatch(&cli, stdin);
    let rendered = if cli.text {
        result.text.clone()
    } else {
        let mut s = serde_json::to_string_pretty(&result.document()).expect("JSON output");
        s.push('\n');
        s
    };
    if result.status != Status::Ok {
        if let Some(msg) = result.payload.get("error").and_then(Value::as_str) {
            let _ = writeln!(stderr, "hypersym: {msg}");
        }
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &rendered),
        None => stdout.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "hypersym: cannot write output: {e}");
        return Status::InvalidInput.exit_code();
    }
    result.status.exit_code()
}
