mod args;
mod output;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use glove_core::catalog::{self, haar_rotations, verify_entry, CatalogEntry, EntryDoc};
use glove_core::irrep::{block_table, Check, CheckTolerances};
use glove_core::protocol::{resource_report, simulate_exchange, ChannelConfig, SimReport};
use glove_core::search::optimize_approx_gloves;
use glove_core::twirl::{averaged_state_discrepancy, twirl_report, TwirlMethod, TwirlReport};
use glove_core::{DensityMatrix, GloveError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use args::{Cli, Command, Format, SearchArgs, SimulateArgs, TwirlArgs, VerifyArgs};
use output::{num, Document};

enum Failure {
    Domain(String),
    /// The document was produced but reports failing checks.
    Checks(Document),
}

impl From<GloveError> for Failure {
    fn from(e: GloveError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return usage_error(e),
    };
    let to_terminal = cli.out.is_none() && std::io::stdout().is_terminal();
    let format = cli.format.unwrap_or(if to_terminal { Format::Table } else { Format::Json });
    let color = to_terminal && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());

    let (doc, code) = match run(&cli.command) {
        Ok(doc) => (doc, ExitCode::SUCCESS),
        Err(Failure::Checks(doc)) => (doc, ExitCode::FAILURE),
        Err(Failure::Domain(msg)) => {
            eprintln!("gloves: {msg}");
            return ExitCode::FAILURE;
        }
    };
    let text = doc.render(format, color);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("gloves: {msg}");
        return ExitCode::FAILURE;
    }
    code
}

/// Prints clap's message, adding the usage line when clap leaves it out.
fn usage_error(e: clap::Error) -> ExitCode {
    if !e.use_stderr() {
        let _ = e.print();
        return ExitCode::SUCCESS;
    }
    let mut msg = e.render().to_string();
    if !msg.contains("Usage:") {
        msg = format!("{}\n\n{}", msg.trim_end(), Cli::command().render_usage());
    }
    eprintln!("{}", msg.trim_end());
    ExitCode::from(2)
}

fn run(command: &Command) -> Result<Document, Failure> {
    match command {
        Command::Catalog { entry } => catalog_cmd(entry.as_deref()),
        Command::Verify(a) => verify_cmd(a),
        Command::Decompose { space } => {
            let t = block_table(space)?;
            let mut doc = Document::new(&t, &["L", "parity", "copy", "dim"])?;
            for b in &t.blocks {
                doc.row(vec![half(b.two_l), sign(b.parity), b.copy.to_string(), (b.two_l + 1).to_string()]);
            }
            Ok(doc)
        }
        Command::Twirl(a) => twirl_cmd(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Search(a) => search_cmd(a),
        Command::Report { entry } => report_cmd(entry.as_deref()),
    }
}

fn half(two: u32) -> String {
    if two.is_multiple_of(2) {
        (two / 2).to_string()
    } else {
        format!("{two}/2")
    }
}

fn sign(p: i8) -> String {
    if p > 0 { "+1" } else { "-1" }.to_string()
}

fn entries(id: Option<&str>) -> Result<Vec<CatalogEntry>, Failure> {
    Ok(match id {
        Some(id) => vec![catalog::entry(id)?],
        None => catalog::all_entries(),
    })
}

/// A single object for one entry, an array otherwise.
fn one_or_many<T: Serialize>(id: Option<&str>, mut items: Vec<T>) -> serde_json::Value {
    let v = if id.is_some() && items.len() == 1 {
        serde_json::to_value(items.remove(0))
    } else {
        serde_json::to_value(items)
    };
    v.expect("documents serialize")
}

fn catalog_cmd(id: Option<&str>) -> Result<Document, Failure> {
    let list = entries(id)?;
    let docs: Vec<EntryDoc> = list.iter().map(EntryDoc::from).collect();
    let mut doc =
        Document::new(&one_or_many(id, docs), &["entry", "perfect", "kind", "particles", "L", "dim", "defect"])?;
    for e in &list {
        doc.row(vec![
            e.id.clone(),
            e.perfect.to_string(),
            format!("{:?}", e.pair.kind).to_lowercase(),
            e.particles.to_string(),
            e.pair.two_l.map_or("-".into(), half),
            e.space.dim().to_string(),
            e.defect.map_or("-".into(), num),
        ]);
    }
    Ok(doc)
}

#[derive(Serialize)]
struct EntryChecks {
    entry: String,
    pass: bool,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct VerifyDoc {
    pass: bool,
    rotations: usize,
    seed: u64,
    tolerance: f64,
    entries: Vec<EntryChecks>,
}

fn verify_cmd(a: &VerifyArgs) -> Result<Document, Failure> {
    let list = entries(if a.all { None } else { a.entry.as_deref() })?;
    let mut tol = CheckTolerances::default();
    if let Some(t) = a.tolerance {
        tol.state = t;
    }
    let rotations = haar_rotations(a.rotations, a.seed);
    let mut results = Vec::new();
    for e in &list {
        let checks = verify_entry(e, &rotations, tol)?;
        results.push(EntryChecks { entry: e.id.clone(), pass: checks.iter().all(|c| c.pass), checks });
    }
    let pass = results.iter().all(|r| r.pass);
    let body = VerifyDoc { pass, rotations: a.rotations, seed: a.seed, tolerance: tol.state, entries: results };
    let mut doc = Document::new(&body, &["entry", "check", "value", "tolerance", "result"])?;
    for r in &body.entries {
        for c in &r.checks {
            let result = if c.pass { "PASS" } else { "FAIL" };
            doc.row(vec![r.entry.clone(), c.name.clone(), num(c.value), num(c.tolerance), result.into()]);
        }
    }
    if pass {
        Ok(doc)
    } else {
        Err(Failure::Checks(doc))
    }
}

fn method_label(m: &TwirlMethod) -> String {
    match m {
        TwirlMethod::Exact => "exact".into(),
        TwirlMethod::MonteCarlo { samples, seed } => format!("monte_carlo(samples={samples};seed={seed})"),
    }
}

fn twirl_cmd(a: &TwirlArgs) -> Result<Document, Failure> {
    if a.printed {
        let d = averaged_state_discrepancy()?;
        let mut doc = Document::new(&d, &["source", "trace_distance", "helstrom"])?;
        doc.row(vec!["printed".into(), num(d.printed_trace_distance), num(d.printed_helstrom)]);
        doc.row(vec!["twirl".into(), num(d.twirl_trace_distance), num(d.twirl_helstrom)]);
        return Ok(doc);
    }
    let (label, rho) = match (&a.entry, &a.space) {
        (Some(id), _) => {
            let e = catalog::entry(id)?;
            (e.id.clone(), DensityMatrix::pure(e.pair.plus())?)
        }
        (None, Some(space)) => {
            if a.rank == 0 {
                return Err(Failure::Domain("rank must be at least 1".into()));
            }
            let rho = DensityMatrix::random(space, a.rank, &mut ChaCha8Rng::seed_from_u64(a.seed));
            (space.to_string(), rho)
        }
        (None, None) => unreachable!("clap requires an input"),
    };
    let method = match a.samples {
        Some(samples) => TwirlMethod::MonteCarlo { samples, seed: a.seed },
        None => TwirlMethod::Exact,
    };
    let report: TwirlReport = twirl_report(&rho, method)?;
    let mut doc = Document::new(&report, &["input", "method", "trace_distance", "helstrom"])?;
    doc.row(vec![label, method_label(&report.method), num(report.trace_distance), num(report.helstrom)]);
    Ok(doc)
}

fn simulate_cmd(a: &SimulateArgs) -> Result<Document, Failure> {
    let e = catalog::entry(&a.entry)?;
    let config = ChannelConfig::new(a.random_rotation, a.fixed_rotation, a.bob_opposite)?;
    let r = simulate_exchange(&e, &config, a.measurement.into(), a.trials, a.seed)?;
    let header: Vec<&str> = SimReport::CSV_HEADER.split(',').collect();
    let mut doc = Document::new(&r, &header)?;
    doc.row(vec![
        r.entry.clone(),
        r.config_label(),
        r.trials.to_string(),
        r.successes.to_string(),
        num(r.frequency),
        num(r.stderr),
        r.seed.to_string(),
    ]);
    Ok(doc)
}

fn search_cmd(a: &SearchArgs) -> Result<Document, Failure> {
    let r = optimize_approx_gloves(&a.space, a.restarts, a.max_iters, a.seed)?;
    let mut doc = Document::new(&r, &["space", "score", "bound", "iterations", "converged", "restarts", "seed"])?;
    doc.row(vec![
        r.space.to_string(),
        num(r.score),
        num(r.bound),
        r.iterations.to_string(),
        r.converged.to_string(),
        r.restarts.to_string(),
        r.seed.to_string(),
    ]);
    Ok(doc)
}

fn report_cmd(id: Option<&str>) -> Result<Document, Failure> {
    let reports = entries(id)?.iter().map(resource_report).collect::<Result<Vec<_>, _>>()?;
    let mut doc =
        Document::new(&one_or_many(id, reports.clone()), &["entry", "particles", "qubits", "lmax", "perfect"])?;
    for r in &reports {
        let lmax: Vec<String> = r.lmax.iter().map(u32::to_string).collect();
        doc.row(vec![
            r.entry.clone(),
            r.particles.to_string(),
            num(r.qubits),
            format!("[{}]", lmax.join(" ")),
            r.perfect.to_string(),
        ]);
    }
    Ok(doc)
}
