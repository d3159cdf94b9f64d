//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::matrix::PolyVec;
use crate::algebra::{Poly, PolyMatrix};
use crate::connections::{connection, ConnectionKind};
use crate::curvature::{curvature, ricci_form, Engine};
use crate::fixtures::{self, Expected, Fixture, Summary};
use crate::model::{build_group, Family, LieGroupModel};
use crate::soliton::{
    build_soliton_system, falsify_by_sampling, families_from_json, verify_family, Counterexample, FamilyReport,
    Grid, SolitonKind, SolitonSpec, SolitonSystem, SolutionFamily, Status,
};

#[derive(Debug, Parser)]
#[command(name = "liesoliton", version, about = "Connections, curvature and algebraic Ricci solitons on three-dimensional Lorentzian Lie groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print connection coefficients.
    Connections(TableArgs),
    /// Print curvature components R(e_i, e_j) e_k for i < j.
    Curvature(TableArgs),
    /// Print the Ricci form and the Ricci operator.
    Ricci {
        #[command(flatten)]
        table: TableArgs,
        /// Symmetrize the Ricci form first.
        #[arg(long)]
        symmetrized: bool,
    },
    /// Print the soliton equation system and D = Ric - c Id.
    Soliton(SolitonArgs),
    /// Check claimed solution families against the system.
    Verify {
        #[command(flatten)]
        soliton: SolitonArgs,
        /// JSON file with one family or an array of families.
        #[arg(long, value_name = "FILE")]
        family_file: PathBuf,
    },
    /// Search a rational grid for solutions.
    Scan {
        #[command(flatten)]
        soliton: SolitonArgs,
        /// Grid JSON file; defaults to -2..2 in steps of 1/2.
        #[arg(long, value_name = "FILE")]
        grid: Option<PathBuf>,
        /// Skip points covered by the bundled classification.
        #[arg(long)]
        exclude_known: bool,
    },
    /// Recompute every bundled table and theorem and compare.
    CheckPaper {
        /// Check a single fixture id.
        #[arg(long, value_name = "ID")]
        only: Option<String>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// One of G1..G7.
    #[arg(value_parser = parse_family, required_unless_present = "model", conflicts_with = "model")]
    family: Option<Family>,
    /// Custom model JSON file.
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Fix eta to 1 or -1; both values are reported otherwise.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_eta)]
    eta: Option<i64>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_parser = parse_connection)]
    connection: ConnectionKind,
}

#[derive(Debug, Args)]
struct SolitonArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_parser = parse_connection)]
    connection: ConnectionKind,
    #[arg(long, value_parser = parse_kind)]
    kind: SolitonKind,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_connection(s: &str) -> Result<ConnectionKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_kind(s: &str) -> Result<SolitonKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_eta(s: &str) -> Result<i64, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("eta must be 1 or -1, got {s:?}")),
    }
}

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

/// Result of one command before rendering.
struct Outcome {
    model: String,
    results: Value,
    text: String,
    failed: bool,
}

struct Loaded {
    model: LieGroupModel,
    family: Option<Family>,
}

impl ModelArgs {
    fn load(&self) -> Result<Loaded, Usage> {
        let (model, family) = match (&self.family, &self.model) {
            (Some(f), _) => (build_group(*f), Some(*f)),
            (None, Some(path)) => (LieGroupModel::from_file(path)?, None),
            (None, None) => return Err(Usage("give a family name or --model FILE".into())),
        };
        if self.eta.is_some() && !model.has_symbolic_eta() {
            return Err(Usage(format!("model {} has no eta parameter", model.name)));
        }
        Ok(Loaded { model, family })
    }

    /// The eta values to report: the requested one, or every admissible one.
    fn etas(&self, m: &LieGroupModel) -> Vec<Option<i64>> {
        match self.eta {
            Some(v) => vec![Some(v)],
            None => m.eta_values(),
        }
    }
}

fn eta_json(eta: Option<i64>) -> Value {
    eta.map_or(Value::Null, Value::from)
}

fn block_header(text: &mut String, eta: Option<i64>, blocks: usize) {
    if let Some(v) = eta {
        if blocks > 1 || text.is_empty() {
            let _ = writeln!(text, "[eta = {v}]");
        }
    }
}

/// `-alpha e2 - alpha e3`, `0` for the zero vector.
fn fmt_vector(v: &PolyVec) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, body) = if c.len() == 1 && s.starts_with('-') {
            (true, s[1..].to_string())
        } else {
            (false, s)
        };
        let coeff = if body == "1" {
            String::new()
        } else if c.len() > 1 {
            format!("({body}) ")
        } else {
            format!("{body} ")
        };
        let term = format!("{coeff}e{}", k + 1);
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn vector_json(v: &PolyVec) -> Value {
    json!(v)
}

fn matrix_text(text: &mut String, name: &str, m: &PolyMatrix) {
    let _ = writeln!(text, "{name} =");
    for i in 0..3 {
        let row = m.row(i);
        let _ = writeln!(text, "  [{}, {}, {}]", row[0], row[1], row[2]);
    }
}

fn cmd_connections(args: &TableArgs) -> Result<Outcome, Usage> {
    let l = args.model.load()?;
    let etas = args.model.etas(&l.model);
    let sym = args.connection.symbol();
    let mut blocks = Vec::new();
    let mut text = String::new();
    for eta in &etas {
        let m = l.model.with_eta(*eta);
        let conn = connection(&m, args.connection);
        block_header(&mut text, *eta, etas.len());
        let mut table = BTreeMap::new();
        for i in 0..3 {
            for j in 0..3 {
                table.insert(format!("{}{}", i + 1, j + 1), vector_json(&conn.gamma[i][j]));
                let _ = writeln!(text, "{sym}_{{e{}}} e{} = {}", i + 1, j + 1, fmt_vector(&conn.gamma[i][j]));
            }
        }
        blocks.push(json!({"eta": eta_json(*eta), "connection": args.connection.long(), "table": table}));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: Value::Array(blocks),
        text,
        failed: false,
    })
}

fn cmd_curvature(args: &TableArgs) -> Result<Outcome, Usage> {
    let l = args.model.load()?;
    let etas = args.model.etas(&l.model);
    let name = match args.connection {
        ConnectionKind::LeviCivita => "R",
        ConnectionKind::Canonical => "R0",
        ConnectionKind::KobayashiNomizu => "R1",
    };
    let mut blocks = Vec::new();
    let mut text = String::new();
    for eta in &etas {
        let m = l.model.with_eta(*eta);
        let r = curvature(&m, &connection(&m, args.connection));
        block_header(&mut text, *eta, etas.len());
        let mut table = BTreeMap::new();
        for i in 0..3 {
            for j in i + 1..3 {
                for k in 0..3 {
                    let v = &r.r[i][j][k];
                    table.insert(format!("{}{}{}", i + 1, j + 1, k + 1), vector_json(v));
                    let _ = writeln!(text, "{name}(e{}, e{})e{} = {}", i + 1, j + 1, k + 1, fmt_vector(v));
                }
            }
        }
        if r.is_zero() {
            let _ = writeln!(text, "flat");
        }
        blocks.push(json!({
            "eta": eta_json(*eta),
            "connection": args.connection.long(),
            "flat": r.is_zero(),
            "curvature": table,
        }));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: Value::Array(blocks),
        text,
        failed: false,
    })
}

fn cmd_ricci(args: &TableArgs, symmetrized: bool) -> Result<Outcome, Usage> {
    let l = args.model.load()?;
    let etas = args.model.etas(&l.model);
    let engine = Engine::default();
    let mut blocks = Vec::new();
    let mut text = String::new();
    for eta in &etas {
        let m = l.model.with_eta(*eta);
        let rho = ricci_form(&m, &curvature(&m, &connection(&m, args.connection)));
        let (rho, ric) = if symmetrized {
            engine.symmetrize(&rho)
        } else {
            let ric = engine.ricci_operator(&rho);
            (rho, ric)
        };
        block_header(&mut text, *eta, etas.len());
        let tilde = if symmetrized { "~" } else { "" };
        matrix_text(&mut text, &format!("rho{tilde}"), &rho.rho);
        matrix_text(&mut text, &format!("Ric{tilde}"), &ric.ric);
        blocks.push(json!({
            "eta": eta_json(*eta),
            "connection": args.connection.long(),
            "symmetrized": symmetrized,
            "rho": rho.rho,
            "ric": ric.ric,
        }));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: Value::Array(blocks),
        text,
        failed: false,
    })
}

/// Bundled theorem fixtures speaking about this case.
fn classifying_fixtures(family: Option<Family>, conn: ConnectionKind, kind: SolitonKind) -> Result<Vec<Fixture>, Usage> {
    let Some(family) = family else {
        return Ok(Vec::new());
    };
    Ok(fixtures::load()?
        .into_iter()
        .filter(|f| {
            f.family == family
                && matches!(f.expected, Expected::Theorem { .. } | Expected::Nonexistence { .. })
                && f.expected.connection() == Some(conn)
                && f.expected.kinds().contains(&kind)
        })
        .collect())
}

fn known_families(fx: &[Fixture]) -> Vec<SolutionFamily> {
    fx.iter()
        .flat_map(|f| match &f.expected {
            Expected::Theorem { cases, .. } => cases.clone(),
            _ => Vec::new(),
        })
        .collect()
}

fn systems(args: &SolitonArgs) -> Result<(Loaded, Vec<SolitonSystem>), Usage> {
    let l = args.model.load()?;
    let mut out = Vec::new();
    for eta in args.model.etas(&l.model) {
        let spec = SolitonSpec::new(l.model.clone(), args.connection, args.kind, eta)?;
        out.push(build_soliton_system(&spec));
    }
    Ok((l, out))
}

fn spec_json(sys: &SolitonSystem) -> Value {
    json!({
        "model": sys.spec.model.name,
        "connection": sys.spec.connection.long(),
        "kind": sys.spec.kind.name(),
        "eta": eta_json(sys.eta()),
    })
}

fn classification_json(fx: &[Fixture]) -> Value {
    json!({
        "fixtures": fx.iter().map(|f| f.id.clone()).collect::<Vec<_>>(),
        "unfixtured": fx.is_empty(),
    })
}

fn classification_text(text: &mut String, family: Option<Family>, fx: &[Fixture]) {
    if family.is_none() {
        return;
    }
    if fx.is_empty() {
        let _ = writeln!(text, "classification: unfixtured (no bundled statement for this case)");
    } else {
        let ids: Vec<&str> = fx.iter().map(|f| f.id.as_str()).collect();
        let _ = writeln!(text, "classification: {}", ids.join(", "));
    }
}

fn poly_list(text: &mut String, title: &str, ps: &[Poly]) {
    let _ = writeln!(text, "{title}:");
    if ps.is_empty() {
        let _ = writeln!(text, "  (none)");
    }
    for p in ps {
        let _ = writeln!(text, "  {p} = 0");
    }
}

fn cmd_soliton(args: &SolitonArgs) -> Result<Outcome, Usage> {
    let (l, syss) = systems(args)?;
    let fx = classifying_fixtures(l.family, args.connection, args.kind)?;
    let mut blocks = Vec::new();
    let mut text = String::new();
    classification_text(&mut text, l.family, &fx);
    for sys in &syss {
        block_header(&mut text, sys.eta(), syss.len());
        matrix_text(&mut text, if args.kind.symmetrized() { "Ric~" } else { "Ric" }, &sys.ricci);
        matrix_text(&mut text, "D", &sys.derivation);
        poly_list(&mut text, "equations", &sys.equations);
        poly_list(&mut text, "reduced", &sys.reduced_equations);
        if !sys.inequations.is_empty() {
            let ps: Vec<String> = sys.inequations.iter().map(|p| format!("{p} != 0")).collect();
            let _ = writeln!(text, "assuming: {}", ps.join(", "));
        }
        blocks.push(json!({
            "spec": spec_json(sys),
            "ricci": sys.ricci,
            "D": sys.derivation,
            "equations": sys.equations,
            "reduced_equations": sys.reduced_equations,
            "inequations": sys.inequations,
            "constraints": sys.constraints,
        }));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: json!({"classification": classification_json(&fx), "systems": blocks}),
        text,
        failed: false,
    })
}

fn family_report_json(fam: &SolutionFamily, r: &FamilyReport) -> Value {
    let diffs = |v: &[crate::soliton::EntryDiff]| -> Vec<Value> {
        v.iter()
            .map(|d| json!({"row": d.row + 1, "col": d.col + 1, "expected": d.expected, "actual": d.actual}))
            .collect()
    };
    json!({
        "label": r.label,
        "substitution": fam.substitution,
        "status": r.status.name(),
        "failing_equation": r.failing_equation.as_ref().map(|(e, _)| e.to_string()),
        "failing_residual": r.failing_equation.as_ref().map(|(_, rest)| rest.to_string()),
        "problems": r.problems,
        "d_diffs": diffs(&r.d_diffs),
        "ric_diffs": diffs(&r.ric_diffs),
    })
}

fn cmd_verify(args: &SolitonArgs, file: &PathBuf) -> Result<Outcome, Usage> {
    let (l, syss) = systems(args)?;
    let text_in = std::fs::read_to_string(file).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let fams = families_from_json(&text_in, &l.model)?;
    let mut failed = false;
    let mut blocks = Vec::new();
    let mut text = String::new();
    for sys in &syss {
        block_header(&mut text, sys.eta(), syss.len());
        let mut reports = Vec::new();
        for fam in &fams {
            let r = verify_family(sys, fam);
            failed |= r.status == Status::Fail;
            let label = if r.label.is_empty() { "(unlabelled)" } else { &r.label };
            let _ = writeln!(text, "{label}: {}", r.status.name());
            if let Some((eq, rest)) = &r.failing_equation {
                let _ = writeln!(text, "  equation {eq} = 0 leaves {rest}");
            }
            for p in &r.problems {
                let _ = writeln!(text, "  {p}");
            }
            for (name, ds) in [("D", &r.d_diffs), ("Ric", &r.ric_diffs)] {
                for d in ds {
                    let _ = writeln!(
                        text,
                        "  {name}[{},{}]: claimed {} computed {}",
                        d.row + 1,
                        d.col + 1,
                        d.expected,
                        d.actual
                    );
                }
            }
            reports.push(family_report_json(fam, &r));
        }
        blocks.push(json!({"spec": spec_json(sys), "equations": sys.equations, "families": reports}));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: Value::Array(blocks),
        text,
        failed,
    })
}

fn counterexample_json(c: &Counterexample) -> Value {
    let mut point: BTreeMap<String, String> = c.point.iter().map(|(p, v)| (p.to_string(), v.to_string())).collect();
    if let Some(e) = c.eta {
        point.insert("eta".into(), e.to_string());
    }
    json!(point)
}

fn cmd_scan(args: &SolitonArgs, grid: &Option<PathBuf>, exclude_known: bool) -> Result<Outcome, Usage> {
    let (l, syss) = systems(args)?;
    let mut grid = match grid {
        Some(path) => {
            let t = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            Grid::from_json(&t)?
        }
        None => Grid::default(),
    };
    if let Some(v) = args.model.eta {
        grid.eta.retain(|e| *e == v);
    }
    let fx = classifying_fixtures(l.family, args.connection, args.kind)?;
    let known = if exclude_known { known_families(&fx) } else { Vec::new() };
    let mut failed = false;
    let mut blocks = Vec::new();
    let mut text = String::new();
    classification_text(&mut text, l.family, &fx);
    for sys in &syss {
        if let Some(e) = sys.eta() {
            if !grid.eta.contains(&e) {
                continue;
            }
        }
        let found = falsify_by_sampling(sys, &grid, &known);
        failed |= !found.is_empty();
        block_header(&mut text, sys.eta(), syss.len());
        let _ = writeln!(text, "{} solutions on the grid", found.len());
        for c in &found {
            let _ = writeln!(text, "  {c}");
        }
        let families: Vec<Value> = known.iter().map(|f| family_report_json(f, &verify_family(sys, f))).collect();
        blocks.push(json!({
            "spec": spec_json(sys),
            "equations": sys.equations,
            "families": families,
            "grid": grid.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "counterexamples": found.iter().map(counterexample_json).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome {
        model: l.model.name.clone(),
        results: json!({"classification": classification_json(&fx), "scans": blocks}),
        text,
        failed,
    })
}

fn summary_text(s: &Summary, coverage: &fixtures::Coverage) -> String {
    let mut text = String::new();
    for r in &s.reports {
        let _ = writeln!(text, "{:<10} {:<8} {} {}", r.id, r.verdict.name(), r.family, r.quantity);
        if let Some(n) = &r.notes {
            let _ = writeln!(text, "    note: {n}");
        }
        for d in &r.discrepancies {
            let _ = writeln!(text, "    {}: printed {} recomputed {}", d.location, d.expected, d.actual);
        }
        if !r.verdict.is_ok() {
            for d in &r.details {
                let _ = writeln!(text, "    {d}");
            }
        }
    }
    let counts: Vec<String> = s.counts.iter().map(|(v, n)| format!("{} {n}", v.name())).collect();
    let _ = writeln!(text, "{} fixtures: {}; {} unexplained", s.reports.len(), counts.join(", "), s.unexplained);
    if !coverage.missing.is_empty() {
        let _ = writeln!(text, "missing fixtures: {}", coverage.missing.join(", "));
    }
    text
}

fn cmd_check_paper(only: &Option<String>) -> Result<Outcome, Usage> {
    let mut all = fixtures::load()?;
    let coverage = fixtures::coverage(&all);
    if let Some(id) = only {
        all.retain(|f| &f.id == id);
        if all.is_empty() {
            return Err(Usage(format!("no fixture with id {id:?}")));
        }
    }
    let summary = fixtures::run_all(&Engine::default(), &all);
    let text = summary_text(&summary, &coverage);
    let results = json!({
        "summary": summary,
        "coverage": {
            "missing": coverage.missing,
            "unexpected": coverage.unexpected,
            "duplicated": coverage.duplicated,
        },
    });
    Ok(Outcome {
        model: "fixtures".into(),
        failed: !summary.is_clean(),
        results,
        text,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Connections(_) => "connections",
        Command::Curvature(_) => "curvature",
        Command::Ricci { .. } => "ricci",
        Command::Soliton(_) => "soliton",
        Command::Verify { .. } => "verify",
        Command::Scan { .. } => "scan",
        Command::CheckPaper { .. } => "check-paper",
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Usage> {
    match &cli.command {
        Command::Connections(a) => cmd_connections(a),
        Command::Curvature(a) => cmd_curvature(a),
        Command::Ricci { table, symmetrized } => cmd_ricci(table, *symmetrized),
        Command::Soliton(a) => cmd_soliton(a),
        Command::Verify { soliton, family_file } => cmd_verify(soliton, family_file),
        Command::Scan {
            soliton,
            grid,
            exclude_known,
        } => cmd_scan(soliton, grid, *exclude_known),
        Command::CheckPaper { only } => cmd_check_paper(only),
    }
}

/// Runs the tool on `argv` (including the program name), writing regular
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
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
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let rendered = match cli.format {
        Format::Json => {
            let envelope = json!({
                "command": command_name(&cli.command),
                "model": outcome.model,
                "results": outcome.results,
                "version": env!("CARGO_PKG_VERSION"),
            });
            let mut s = serde_json::to_string_pretty(&envelope).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => outcome.text,
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    if outcome.failed {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Scope};

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("liesoliton").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn vector_formatting() {
        let p = |s: &str| parse_poly(s, Scope::Any).unwrap();
        assert_eq!(fmt_vector(&[Poly::zero(), p("-alpha"), p("-alpha")]), "-alpha e2 - alpha e3");
        assert_eq!(fmt_vector(&[p("1"), p("alpha + beta"), Poly::zero()]), "e1 + (alpha + beta) e2");
        assert_eq!(fmt_vector(&[Poly::zero(), Poly::zero(), Poly::zero()]), "0");
    }

    #[test]
    fn bad_family_is_usage_error() {
        let (code, _, err) = run_str(&["connections", "BADNAME", "--connection", "lc"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("BADNAME"));
    }

    #[test]
    fn eta_on_family_without_eta() {
        let (code, _, _) = run_str(&["connections", "G1", "--connection", "lc", "--eta", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn g4_without_eta_has_two_blocks() {
        let (code, out, _) = run_str(&["ricci", "G4", "--connection", "canonical"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("[eta = 1]") && out.contains("[eta = -1]"));
    }
}
