//! Command-line front end: basis enumeration, inequality-table regeneration
//! and diffing, certificate verification, the cutting-plane search, and the
//! brute-force consistency oracles.
//!
//! Machine-readable JSON goes to stdout, progress and summaries to stderr.
//! Exit codes: 0 success, 1 failed verification / diff / oracle check,
//! 2 usage or input error.  Identical invocations produce byte-identical
//! stdout.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use triflag::algebra::{decimal_string, rational_from_decimal, LinearForm, Rational};
use triflag::certificate::{load_certificate, verify};
use triflag::digraph::MAX_ENUMERATION_ORDER;
use triflag::flags::{type_beta, type_empty, type_point, type_t, type_v, Basis, BasisName};
use triflag::inequalities::{cs_matrix, determine_reg_scale, fork_form, induction_form, reg_matrices};
use triflag::oracle::{
    blow_up_check, chain_rule_check, density_agreement_check, GenerationMethod, OracleReport,
    RandomDigraphSpec,
};
use triflag::search::{cutting_plane_search, SearchParams, StopReason};
use triflag::tables;

#[derive(Parser)]
#[command(
    name = "triflag",
    about = "Exact flag-algebra toolkit for triangle-free digraphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    Cs,
    Reg,
    Ind,
    Fork,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    /// Brute-force subset counting vs. the main density operator.
    Density,
    /// The chain rule over an intermediate order.
    Chain,
    /// The blow-up construction's invariants.
    Blowup,
}

#[derive(Subcommand)]
enum Command {
    /// List the flags of a basis in canonical order.
    Enumerate {
        /// Type: 0 (empty), 1 (single point), beta (one edge), T, or V.
        #[arg(long = "type")]
        type_name: String,
        /// Number of vertices per flag.
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Regenerate inequality tables, optionally diffing against the shipped
    /// transcriptions.
    Tables {
        #[arg(long, value_enum)]
        which: Table,
        /// Compare against the hardcoded reference tables; exit 1 on mismatch.
        #[arg(long)]
        diff: bool,
    },
    /// Check a certificate file; exit 0 iff it proves its threshold.
    Verify {
        /// Path to a certificate JSON file.
        #[arg(long)]
        certificate: PathBuf,
        /// Override the certificate's threshold (decimal or p/q).
        #[arg(long)]
        c: Option<String>,
    },
    /// Run the cutting-plane search for the smallest provable threshold.
    Search {
        /// Lower end of the bisection interval (decimal or p/q).
        #[arg(long)]
        c_lo: String,
        /// Upper end of the bisection interval.
        #[arg(long)]
        c_hi: String,
        /// Bisection stops once the interval is this narrow.
        #[arg(long)]
        tol_c: String,
        /// Stop when an iteration improves the threshold by less than this.
        #[arg(long)]
        stop_delta: String,
        #[arg(long)]
        max_iters: usize,
        /// JSON file of initial cut vectors (an array of 8-entry rows, or a
        /// certificate file whose cs_vectors are used).
        #[arg(long)]
        seed_cuts: Option<PathBuf>,
        /// Write the iteration trace to this file as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Cross-check the algebra against independent brute-force computations.
    Oracle {
        #[arg(long, value_enum)]
        check: OracleCheck,
        /// Random trials on top of the built-in deterministic sweep.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Enumerate {
            type_name,
            order,
            format,
        } => cmd_enumerate(&type_name, order, format),
        Command::Tables { which, diff } => cmd_tables(which, diff),
        Command::Verify { certificate, c } => cmd_verify(&certificate, c.as_deref()),
        Command::Search {
            c_lo,
            c_hi,
            tol_c,
            stop_delta,
            max_iters,
            seed_cuts,
            trace,
        } => cmd_search(
            &c_lo,
            &c_hi,
            &tol_c,
            &stop_delta,
            max_iters,
            seed_cuts.as_deref(),
            trace.as_deref(),
        ),
        Command::Oracle {
            check,
            trials,
            seed,
        } => cmd_oracle(check, trials, seed),
    }
}

fn emit(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Parses either an exact decimal ("0.3465") or a ratio ("1/3").
fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let numer: num_bigint::BigInt = p.trim().parse().context("bad numerator")?;
        let denom: num_bigint::BigInt = q.trim().parse().context("bad denominator")?;
        ensure!(!denom.is_zero(), "zero denominator in {s:?}");
        Ok(Rational::new(numer, denom))
    } else {
        Ok(rational_from_decimal(s).with_context(|| format!("bad rational {s:?}"))?)
    }
}

/// Exact decimal when one exists, `p/q` otherwise.
fn rational_out(r: &Rational) -> String {
    decimal_string(r).unwrap_or_else(|_| r.to_string())
}

fn integer_coeffs(form: &LinearForm) -> Result<Vec<i64>> {
    form.coeffs()
        .iter()
        .map(|r| {
            ensure!(r.is_integer(), "non-integer coefficient {r}");
            r.to_integer()
                .to_i64()
                .context("coefficient out of i64 range")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// enumerate

fn cmd_enumerate(type_name: &str, order: usize, format: Format) -> Result<i32> {
    let (canonical, sigma) = match type_name {
        "0" => ("0", type_empty()),
        "1" => ("1", type_point()),
        "beta" | "Beta" | "BETA" => ("beta", type_beta()),
        "T" | "t" => ("T", type_t()),
        "V" | "v" => ("V", type_v()),
        other => bail!("unknown type {other:?}: expected 0, 1, beta, T or V"),
    };
    ensure!(
        order >= sigma.n(),
        "order {order} is smaller than the type's {} vertices",
        sigma.n()
    );
    ensure!(
        order <= MAX_ENUMERATION_ORDER,
        "order {order} exceeds the enumeration cap {MAX_ENUMERATION_ORDER}"
    );
    let basis = Basis::of(&sigma, order)?;
    let name = basis.name().map(|n| match n {
        BasisName::H => "H",
        BasisName::K => "K",
        BasisName::L => "L",
    });
    match format {
        Format::Json => emit(&json!({
            "type": canonical,
            "order": order,
            "count": basis.len(),
            "basis": name,
            "flags": basis.describe(),
        }))?,
        Format::Text => {
            for (i, f) in basis.members().iter().enumerate() {
                match name {
                    Some(letter) => println!("{letter}{i}: {f}"),
                    None => println!("{i}: {f}"),
                }
            }
        }
    }
    eprintln!(
        "{} flags of order {order} over type {canonical}",
        basis.len()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// tables

struct Diff {
    matched: usize,
    total: usize,
    mismatches: Vec<serde_json::Value>,
}

impl Diff {
    fn new() -> Diff {
        Diff {
            matched: 0,
            total: 0,
            mismatches: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> serde_json::Value) {
        self.total += 1;
        if ok {
            self.matched += 1;
        } else {
            self.mismatches.push(detail());
        }
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "matched": self.matched,
            "total": self.total,
            "mismatches": self.mismatches,
        })
    }
}

fn cs_table(diff: bool) -> Result<(serde_json::Value, Option<Diff>)> {
    let cs = cs_matrix()?;
    let mut entries = Vec::new();
    let mut d = diff.then(Diff::new);
    for i in 0..cs.size() {
        let mut row = Vec::new();
        for j in 0..cs.size() {
            let coeffs = cs.entry_integers(i, j)?;
            if let Some(d) = d.as_mut() {
                let mut reference = vec![0i64; 32];
                for &(v, idx) in tables::cs_reference(i, j) {
                    reference[idx] = v;
                }
                d.record(coeffs == reference, || {
                    json!({"table": "cs", "row": i, "col": j,
                           "regenerated": coeffs, "reference": reference})
                });
            }
            row.push(json!(coeffs));
        }
        entries.push(serde_json::Value::Array(row));
    }
    let mut v = json!({
        "table": "cs",
        "scale": 24,
        "entries": entries,
    });
    if let Some(d) = &d {
        v["diff"] = d.to_json();
    }
    Ok((v, d))
}

fn reg_table(diff: bool) -> Result<(serde_json::Value, Option<Diff>)> {
    let reg = reg_matrices()?;
    let scale = determine_reg_scale()?;
    let mut d = diff.then(Diff::new);
    if let Some(d) = d.as_mut() {
        for (name, got, reference) in [
            ("reg.a", reg.a(), &tables::A_REG_REFERENCE),
            ("reg.b", reg.b(), &tables::B_REG_REFERENCE),
        ] {
            for (row, (got_row, reference_row)) in got.iter().zip(reference.iter()).enumerate() {
                for (col, (&x, &y)) in got_row.iter().zip(reference_row.iter()).enumerate() {
                    d.record(x == y, || {
                        json!({"table": name, "row": row, "col": col,
                               "regenerated": x, "reference": y})
                    });
                }
            }
        }
    }
    let mut v = json!({
        "table": "reg",
        "reproduced_scale": scale,
        "stated_scale": 24,
        "scale_note": "the stated normalization 24 does not reproduce the reference \
                       transcription; the factor 12 does, across every entry",
        "a": reg.a(),
        "b": reg.b(),
    });
    if let Some(d) = &d {
        v["diff"] = d.to_json();
    }
    Ok((v, d))
}

fn ind_table(diff: bool) -> Result<(serde_json::Value, Option<Diff>)> {
    let mut d = diff.then(Diff::new);
    let mut out = serde_json::Map::new();
    out.insert("table".into(), json!("ind"));
    out.insert("scale".into(), json!({"T": 24, "V": 12}));
    for (key, sigma, reference) in [
        ("T", type_t(), &tables::IND_T_REFERENCE),
        ("V", type_v(), &tables::IND_V_REFERENCE),
    ] {
        let form = induction_form(&sigma)?;
        let constant = integer_coeffs(form.const_part())?;
        let slope = integer_coeffs(form.c_part())?;
        if let Some(d) = d.as_mut() {
            for i in 0..32 {
                let (k, s) = reference[i];
                d.record(constant[i] == k, || {
                    json!({"table": format!("ind.{key}.constant"), "index": i,
                           "regenerated": constant[i], "reference": k})
                });
                d.record(slope[i] == s, || {
                    json!({"table": format!("ind.{key}.c_slope"), "index": i,
                           "regenerated": slope[i], "reference": s})
                });
            }
        }
        out.insert(
            key.into(),
            json!({"constant": constant, "c_slope": slope}),
        );
    }
    let mut v = serde_json::Value::Object(out);
    if let Some(d) = &d {
        v["diff"] = d.to_json();
    }
    Ok((v, d))
}

fn fork_table(diff: bool) -> Result<(serde_json::Value, Option<Diff>)> {
    let fork = fork_form()?;
    let linear = integer_coeffs(fork.linear())?;
    let mult = fork.quadratic_multiplier();
    ensure!(mult.is_integer(), "non-integer fork multiplier");
    let mult = mult.to_integer().to_i64().context("fork multiplier range")?;
    let mut d = diff.then(Diff::new);
    if let Some(d) = d.as_mut() {
        for i in 0..32 {
            d.record(linear[i] == tables::FORK_LINEAR_REFERENCE[i], || {
                json!({"table": "fork.linear", "index": i,
                       "regenerated": linear[i],
                       "reference": tables::FORK_LINEAR_REFERENCE[i]})
            });
        }
        d.record(mult == -12, || {
            json!({"table": "fork.quadratic_multiplier",
                   "regenerated": mult, "reference": -12})
        });
    }
    let mut v = json!({
        "table": "fork",
        "linear": linear,
        "quadratic_multiplier": mult,
    });
    if let Some(d) = &d {
        v["diff"] = d.to_json();
    }
    Ok((v, d))
}

fn cmd_tables(which: Table, diff: bool) -> Result<i32> {
    let selected: Vec<(&str, fn(bool) -> Result<(serde_json::Value, Option<Diff>)>)> = match which
    {
        Table::Cs => vec![("cs", cs_table)],
        Table::Reg => vec![("reg", reg_table)],
        Table::Ind => vec![("ind", ind_table)],
        Table::Fork => vec![("fork", fork_table)],
        Table::All => vec![
            ("cs", cs_table),
            ("reg", reg_table),
            ("ind", ind_table),
            ("fork", fork_table),
        ],
    };
    let mut payloads = Vec::new();
    let mut clean = true;
    for (name, build) in selected {
        let (v, d) = build(diff)?;
        if let Some(d) = &d {
            eprintln!("{name}: {}/{} entries match", d.matched, d.total);
            if name == "reg" {
                eprintln!("reg: reproduced scale 12, stated scale 24");
            }
            if !d.mismatches.is_empty() {
                clean = false;
            }
        }
        payloads.push(v);
    }
    if payloads.len() == 1 {
        emit(&payloads.into_iter().next().unwrap())?;
    } else {
        emit(&serde_json::Value::Array(payloads))?;
    }
    Ok(if clean { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(path: &std::path::Path, c_override: Option<&str>) -> Result<i32> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut cert = load_certificate(&text)
        .with_context(|| format!("cannot parse certificate {}", path.display()))?;
    if let Some(c) = c_override {
        cert = cert.with_threshold(parse_rational(c)?)?;
    }
    let report = verify(&cert)?;
    let mut v = report.to_json();
    v["c"] = json!(rational_out(cert.threshold_c()));
    emit(&v)?;
    eprintln!(
        "certificate: {} quadratic vectors, threshold c = {}",
        cert.cs_vectors().len(),
        rational_out(cert.threshold_c())
    );
    let approx = report.max_coefficient.to_f64().unwrap_or(f64::NAN);
    eprintln!(
        "max coefficient: {} (approx {approx:.6})",
        report.max_coefficient
    );
    eprintln!("all coefficients negative: {}", report.valid);
    eprintln!("monotone for c above threshold: {}", report.monotone_in_c);
    eprintln!(
        "verdict: {}",
        if report.valid { "VALID" } else { "INVALID" }
    );
    Ok(if report.valid { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// search

fn load_seed_cuts(path: &std::path::Path) -> Result<Vec<Vec<Rational>>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let rows = match &v {
        serde_json::Value::Object(m) => m
            .get("cs_vectors")
            .context("certificate file has no cs_vectors array")?,
        other => other,
    };
    let rows = rows.as_array().context("seed cuts must be a JSON array")?;
    let mut cuts = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .with_context(|| format!("seed cut {i} is not an array"))?;
        ensure!(row.len() == 8, "seed cut {i} has {} entries, need 8", row.len());
        let mut cut = Vec::new();
        for entry in row {
            let s = entry
                .as_str()
                .with_context(|| format!("seed cut {i} holds a non-string entry"))?;
            cut.push(parse_rational(s)?);
        }
        cuts.push(cut);
    }
    Ok(cuts)
}

fn stop_reason_str(r: StopReason) -> &'static str {
    match r {
        StopReason::PsdReached => "psd-reached",
        StopReason::DeltaBelowThreshold => "delta-below-threshold",
        StopReason::MaxIterations => "max-iterations",
    }
}

fn cmd_search(
    c_lo: &str,
    c_hi: &str,
    tol_c: &str,
    stop_delta: &str,
    max_iters: usize,
    seed_cuts: Option<&std::path::Path>,
    trace: Option<&std::path::Path>,
) -> Result<i32> {
    let params = SearchParams {
        lo: parse_rational(c_lo)?,
        hi: parse_rational(c_hi)?,
        tol_c: parse_rational(tol_c)?,
        stop_delta: parse_rational(stop_delta)?,
        max_iters,
        seed_cuts: seed_cuts.map(load_seed_cuts).transpose()?.unwrap_or_default(),
    };
    eprintln!(
        "searching on [{}, {}] with {} seed cuts",
        rational_out(&params.lo),
        rational_out(&params.hi),
        params.seed_cuts.len()
    );
    let outcome = cutting_plane_search(&params)?;
    for it in &outcome.trace.iterations {
        eprintln!(
            "k={}: c_k = {} (approx {:.6}), min eigenvalue {:.3e}{}",
            it.k,
            it.c_k,
            it.c_k.to_f64().unwrap_or(f64::NAN),
            it.min_eig,
            if it.cut.is_some() { ", cut appended" } else { "" }
        );
    }
    eprintln!("stop: {}", stop_reason_str(outcome.trace.stop_reason));
    if let Some(path) = trace {
        std::fs::write(path, outcome.trace.to_jsonl())
            .with_context(|| format!("cannot write {}", path.display()))?;
        eprintln!("trace written to {}", path.display());
    }
    let c_final = outcome.certificate.threshold_c();
    emit(&json!({
        "c_final": c_final.to_string(),
        "c_final_approx": c_final.to_f64(),
        "stop_reason": stop_reason_str(outcome.trace.stop_reason),
        "iterations": outcome.trace.iterations.len(),
        "cuts": outcome
            .certificate
            .cs_vectors()
            .iter()
            .map(|cut| cut.iter().map(rational_out).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "trace": outcome
            .trace
            .iterations
            .iter()
            .map(|it| it.to_json())
            .collect::<Vec<_>>(),
    }))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// oracle

fn report_summary(label: &str, report: &OracleReport) {
    eprintln!(
        "{label}: {} trials, {} violations",
        report.trials,
        report.violations.len()
    );
    for note in &report.notes {
        eprintln!("  {note}");
    }
}

fn cmd_oracle(check: OracleCheck, trials: usize, seed: u64) -> Result<i32> {
    let (payload, passed) = match check {
        OracleCheck::Density => {
            let spec = RandomDigraphSpec {
                order: 5,
                seed,
                method: GenerationMethod::RandomOrientation,
            };
            let report = density_agreement_check(&spec, trials)?;
            report_summary("density", &report);
            (report.to_json(), report.passed())
        }
        OracleCheck::Chain => {
            let exhaustive = chain_rule_check(
                &RandomDigraphSpec {
                    order: 4,
                    seed,
                    method: GenerationMethod::Exhaustive,
                },
                0,
            )?;
            report_summary("chain (exhaustive, order <= 4)", &exhaustive);
            let random = chain_rule_check(
                &RandomDigraphSpec {
                    order: 5,
                    seed,
                    method: GenerationMethod::RandomOrientation,
                },
                trials,
            )?;
            report_summary("chain (random, order <= 5)", &random);
            let passed = exhaustive.passed() && random.passed();
            (
                json!({
                    "check": "chain-rule",
                    "exhaustive": exhaustive.to_json(),
                    "random": random.to_json(),
                }),
                passed,
            )
        }
        OracleCheck::Blowup => {
            let spec = RandomDigraphSpec {
                order: 6,
                seed,
                method: GenerationMethod::RandomOrientation,
            };
            let report = blow_up_check(&spec, trials)?;
            report_summary("blow-up", &report);
            (report.to_json(), report.passed())
        }
    };
    emit(&payload)?;
    eprintln!("oracle: {}", if passed { "PASSED" } else { "FAILED" });
    Ok(if passed { 0 } else { 1 })
}
