//! Command-line laboratory for multiple zeta values.
//!
//! Exit codes: 0 success, 1 mathematical non-result (NotExpressible, no
//! relation found, failed verification), 2 usage or configuration error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use mzvlab::ball::Ball;
use mzvlab::cache::EvalCache;
use mzvlab::config::{Config, OutputMode};
use mzvlab::dims::{alpha, d_sequence};
use mzvlab::formal::FormalSum;
use mzvlab::index::MzvIndex;
use mzvlab::lindep::pslq::{pslq, PslqOutcome};
use mzvlab::lindep::{certify_corollary, IndependenceCertificate};
use mzvlab::numeval::{eval_mzv, eval_naive, EvalConfig};
use mzvlab::rat::rational_str;
use mzvlab::relations::{
    dimension_bound_capped, generate_relations, hoffman_reduce_capped, relation_matrix, Family,
    ReduceOutcome,
};
use mzvlab::render::{guaranteed_decimal, BallRepr};
use mzvlab::word::index_to_word;

#[derive(Parser)]
#[command(
    name = "mzvlab",
    about = "multiple zeta values: rigorous evaluation, relations, reductions, integer-relation probes",
    after_help = "Precision is an absolute radius target: --prec P means every reported ball \
has radius <= 2^-P. Config fields can also come from MZVLAB_PREC_BITS, MZVLAB_MAX_WEIGHT, \
MZVLAB_MAX_COEFF_BITS, MZVLAB_CACHE and MZVLAB_OUTPUT."
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Target precision in bits (absolute radius 2^-P).
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Weight cap for relation systems and reductions.
    #[arg(long, global = true)]
    max_weight: Option<u32>,
    /// Evaluation cache file (JSON lines), locked for the run.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate ζ(index) to a rigorous enclosure.
    Eval(EvalArgs),
    /// Expand a product of two zeta values (stuffle or shuffle route).
    Product(ProductArgs),
    /// Dump the relation matrix rows for a weight.
    Relations(RelationsArgs),
    /// Dimension upper bound at a weight, compared with d_w.
    Bound(BoundArgs),
    /// Reduce ζ(index) to the weight-w {2,3} basis.
    Reduce(ReduceArgs),
    /// Print d_0..d_max of the dimension recurrence.
    Dims(DimsArgs),
    /// Probe a tuple of constants for an integer relation.
    Pslq(PslqArgs),
    /// Build an experimental independence certificate.
    Certify(CertifyArgs),
    /// Run the full verification battery.
    VerifyPaper,
}

#[derive(Args)]
struct EvalArgs {
    /// Index, comma-separated parts: `3,2,2`.
    index: String,
    /// Also print the exact dyadic form.
    #[arg(long)]
    dyadic: bool,
    /// Use the naive truncated series with this many terms instead.
    #[arg(long)]
    naive: Option<u64>,
}

#[derive(Args)]
struct ProductArgs {
    /// Expand via the quasi-shuffle (harmonic) product.
    #[arg(long, conflicts_with = "shuffle")]
    stuffle: bool,
    /// Expand via the iterated-integral shuffle on words.
    #[arg(long)]
    shuffle: bool,
    u: String,
    v: String,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long)]
    weight: u32,
    /// Comma-separated subset of fds,hoffman,duality.
    #[arg(long, default_value = "fds,hoffman,duality")]
    families: String,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    weight: u32,
}

#[derive(Args)]
struct ReduceArgs {
    index: String,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    max: u32,
}

#[derive(Args)]
struct PslqArgs {
    /// Semicolon-separated entries; `1` is the constant one, anything
    /// else is an admissible index such as `3` or `2,1`.
    #[arg(long)]
    indices: String,
    #[arg(long)]
    max_coeff_bits: Option<u32>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    l: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = Config::from_env();
    if let Some(p) = cli.prec {
        config.prec_bits = p;
    }
    if let Some(w) = cli.max_weight {
        config.max_weight = w;
    }
    if let Some(c) = &cli.cache {
        config.cache_path = Some(c.clone());
    }
    if cli.json {
        config.output_mode = OutputMode::Json;
    }
    if let Err(e) = config.validate() {
        eprintln!("configuration error: {e}");
        return ExitCode::from(2);
    }
    match dispatch(&cli.command, &config) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::NonResult) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum Outcome {
    Success,
    /// Mathematically meaningful "no": NotExpressible, no relation found,
    /// a failed verification.
    NonResult,
}

fn emit<T: Serialize>(config: &Config, json: &T, text: impl FnOnce() -> String) {
    match config.output_mode {
        OutputMode::Json => println!(
            "{}",
            serde_json::to_string_pretty(json).expect("reports serialize")
        ),
        OutputMode::Text => println!("{}", text()),
    }
}

fn parse_index(s: &str) -> Result<MzvIndex, String> {
    MzvIndex::from_str(s).map_err(|e| e.to_string())
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct EvalReport {
    index: String,
    prec_bits: u32,
    decimal: String,
    ball: BallRepr,
    from_cache: bool,
    naive_terms: Option<u64>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ProductReport {
    route: String,
    u: String,
    v: String,
    terms: Vec<(String, String)>,
    pretty: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct RelationLine {
    family: String,
    provenance: String,
    terms: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct RelationsReport {
    weight: u32,
    families: Vec<String>,
    columns: Vec<String>,
    rows: Vec<RelationLine>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct ReduceReport {
    target: String,
    expressible: bool,
    coefficients: Vec<(String, String)>,
    residual_contains_zero: Option<bool>,
    residual: Option<BallRepr>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct DimsReport {
    max: u32,
    values: Vec<u64>,
    alpha_64: String,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct PslqReport {
    entries: Vec<String>,
    prec_bits: u32,
    max_coeff_bits: u32,
    found: bool,
    coefficients: Option<Vec<String>>,
    no_relation_below_log2: Option<u32>,
}

fn dispatch(cmd: &Command, config: &Config) -> Result<Outcome, String> {
    match cmd {
        Command::Eval(args) => cmd_eval(args, config),
        Command::Product(args) => cmd_product(args, config),
        Command::Relations(args) => cmd_relations(args, config),
        Command::Bound(args) => cmd_bound(args, config),
        Command::Reduce(args) => cmd_reduce(args, config),
        Command::Dims(args) => cmd_dims(args, config),
        Command::Pslq(args) => cmd_pslq(args, config),
        Command::Certify(args) => cmd_certify(args, config),
        Command::VerifyPaper => cmd_verify(config),
    }
}

fn cmd_eval(args: &EvalArgs, config: &Config) -> Result<Outcome, String> {
    let index = parse_index(&args.index)?;
    index.ensure_admissible().map_err(|e| e.to_string())?;
    let prec = config.prec_bits;

    let (ball, from_cache) = if let Some(n) = args.naive {
        (eval_naive(&index, n).map_err(|e| e.to_string())?, false)
    } else {
        let mut cache = match &config.cache_path {
            Some(path) => match EvalCache::open(path) {
                Ok(c) => {
                    for w in &c.warnings {
                        eprintln!("warning: {w}");
                    }
                    Some(c)
                }
                Err(e) => {
                    eprintln!("warning: cache disabled ({e})");
                    None
                }
            },
            None => None,
        };
        let key = index.canonical();
        match cache.as_ref().and_then(|c| c.get(&key, prec)) {
            Some(b) => (b, true),
            None => {
                let b = eval_mzv(&index, &EvalConfig::with_prec(prec))
                    .map_err(|e| e.to_string())?;
                if let Some(c) = cache.as_mut() {
                    c.put(&key, &b).map_err(|e| format!("cache write: {e}"))?;
                }
                (b, false)
            }
        }
    };

    let report = EvalReport {
        index: index.canonical(),
        prec_bits: prec,
        decimal: guaranteed_decimal(&ball),
        ball: BallRepr::from_ball(&ball),
        from_cache,
        naive_terms: args.naive,
    };
    let dyadic = args.dyadic;
    emit(config, &report, || {
        let mut s = format!("ζ{} = {}", index, report.decimal);
        if dyadic {
            s.push_str(&format!("\n     = {}", report.ball.display()));
        }
        if report.from_cache {
            s.push_str("\n     (cache hit)");
        }
        s
    });
    Ok(Outcome::Success)
}

fn cmd_product(args: &ProductArgs, config: &Config) -> Result<Outcome, String> {
    if !args.stuffle && !args.shuffle {
        return Err("choose --stuffle or --shuffle".into());
    }
    let u = parse_index(&args.u)?;
    let v = parse_index(&args.v)?;
    let (route, sum): (&str, FormalSum<MzvIndex>) = if args.stuffle {
        ("stuffle", mzvlab::relations::stuffle(&u, &v))
    } else {
        u.ensure_admissible().map_err(|e| e.to_string())?;
        v.ensure_admissible().map_err(|e| e.to_string())?;
        let words = mzvlab::relations::shuffle(&index_to_word(&u), &index_to_word(&v));
        ("shuffle", words.decode().map_err(|e| e.to_string())?)
    };
    let report = ProductReport {
        route: route.into(),
        u: u.canonical(),
        v: v.canonical(),
        terms: sum
            .iter()
            .map(|(k, c)| (k.canonical(), rational_str(c)))
            .collect(),
        pretty: sum.pretty(),
    };
    emit(config, &report, || {
        format!("ζ{} · ζ{} ({}) = {}", u, v, route, report.pretty)
    });
    Ok(Outcome::Success)
}

fn parse_families(s: &str) -> Result<BTreeSet<Family>, String> {
    let mut set = BTreeSet::new();
    for part in s.split(',') {
        set.insert(Family::parse(part).ok_or_else(|| format!("unknown family `{part}`"))?);
    }
    Ok(set)
}

fn cmd_relations(args: &RelationsArgs, config: &Config) -> Result<Outcome, String> {
    if args.weight < 2 || args.weight > config.max_weight {
        return Err(format!(
            "weight {} outside 2..={}",
            args.weight, config.max_weight
        ));
    }
    let families = parse_families(&args.families)?;
    let rels = generate_relations(args.weight, &families).map_err(|e| e.to_string())?;
    let (matrix, kept) = relation_matrix(args.weight, rels).map_err(|e| e.to_string())?;
    let report = RelationsReport {
        weight: args.weight,
        families: families.iter().map(|f| f.to_string()).collect(),
        columns: matrix
            .column_labels()
            .unwrap_or_default()
            .iter()
            .map(|c| c.canonical())
            .collect(),
        rows: kept
            .iter()
            .map(|r| RelationLine {
                family: r.family.to_string(),
                provenance: r.provenance.to_string(),
                terms: r
                    .combo
                    .iter()
                    .map(|(k, c)| (k.canonical(), rational_str(c)))
                    .collect(),
            })
            .collect(),
    };
    emit(config, &report, || {
        let mut s = format!(
            "weight {} relations ({} rows over {} columns):",
            args.weight,
            kept.len(),
            report.columns.len()
        );
        for r in &kept {
            s.push_str(&format!("\n{}", r.dump_line()));
        }
        s
    });
    Ok(Outcome::Success)
}

fn cmd_bound(args: &BoundArgs, config: &Config) -> Result<Outcome, String> {
    let report =
        dimension_bound_capped(args.weight, config.max_weight).map_err(|e| e.to_string())?;
    emit(config, &report, || {
        format!(
            "weight {}: {} unknowns, {} relations of rank {} -> dim upper bound {} (conjectured {}: {})",
            report.weight,
            report.num_unknowns,
            report.num_relations,
            report.rank,
            report.upper_bound,
            report.conjectured,
            if report.matches_conjecture { "match" } else { "MISMATCH" }
        )
    });
    Ok(Outcome::Success)
}

fn cmd_reduce(args: &ReduceArgs, config: &Config) -> Result<Outcome, String> {
    let target = parse_index(&args.index)?;
    match hoffman_reduce_capped(&target, config.max_weight).map_err(|e| e.to_string())? {
        ReduceOutcome::Reduced(r) => {
            let report = ReduceReport {
                target: target.canonical(),
                expressible: true,
                coefficients: r
                    .coefficients
                    .iter()
                    .map(|(k, c)| (k.canonical(), rational_str(c)))
                    .collect(),
                residual_contains_zero: Some(r.residual_check.contains_zero()),
                residual: Some(BallRepr::from_ball(&r.residual_check)),
            };
            emit(config, &report, || {
                let combo = r
                    .coefficients
                    .iter()
                    .map(|(k, c)| format!("{}·ζ{}", rational_str(c), k))
                    .collect::<Vec<_>>()
                    .join(" + ");
                format!(
                    "ζ{} = {} (residual contains zero: {})",
                    target,
                    combo,
                    r.residual_check.contains_zero()
                )
            });
            Ok(Outcome::Success)
        }
        ReduceOutcome::NotExpressible { weight, .. } => {
            let report = ReduceReport {
                target: target.canonical(),
                expressible: false,
                coefficients: vec![],
                residual_contains_zero: None,
                residual: None,
            };
            emit(config, &report, || {
                format!(
                    "ζ{target} is NOT expressible over the weight-{weight} {{2,3}} basis with the generated relation families (honest non-result)"
                )
            });
            Ok(Outcome::NonResult)
        }
    }
}

fn cmd_dims(args: &DimsArgs, config: &Config) -> Result<Outcome, String> {
    if args.max > 10_000 {
        return Err("dims --max above 10000".into());
    }
    let table = d_sequence(args.max);
    let report = DimsReport {
        max: args.max,
        values: table.values().to_vec(),
        alpha_64: guaranteed_decimal(&alpha(64)),
    };
    emit(config, &report, || {
        report
            .values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    });
    Ok(Outcome::Success)
}

fn cmd_pslq(args: &PslqArgs, config: &Config) -> Result<Outcome, String> {
    let entries: Vec<&str> = args
        .indices
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if entries.len() < 2 {
        return Err("pslq needs at least two entries".into());
    }
    let prec = config.prec_bits;
    let cfg = EvalConfig::with_prec(prec);
    let mut values = Vec::new();
    for e in &entries {
        if *e == "1" {
            values.push(Ball::one());
        } else {
            let index = parse_index(e)?;
            index.ensure_admissible().map_err(|err| err.to_string())?;
            values.push(eval_mzv(&index, &cfg).map_err(|err| err.to_string())?);
        }
    }
    let bits = args.max_coeff_bits.unwrap_or(config.max_coeff_bits);
    let outcome = pslq(&values, bits).map_err(|e| e.to_string())?;
    let (found, coefficients, below) = match &outcome {
        PslqOutcome::Candidate(c) => (
            true,
            Some(c.coefficients.iter().map(|v| v.to_string()).collect()),
            None,
        ),
        PslqOutcome::NoRelationBelow(_) => (false, None, Some(bits)),
    };
    let report = PslqReport {
        entries: entries.iter().map(|s| s.to_string()).collect(),
        prec_bits: prec,
        max_coeff_bits: bits,
        found,
        coefficients,
        no_relation_below_log2: below,
    };
    emit(config, &report, || match &outcome {
        PslqOutcome::Candidate(c) => {
            let combo = entries
                .iter()
                .zip(&c.coefficients)
                .map(|(e, c)| format!("{c}·[{e}]"))
                .collect::<Vec<_>>()
                .join(" + ");
            format!("integer relation found: {combo} = 0 (verified: combination ball contains zero)")
        }
        PslqOutcome::NoRelationBelow(b) => {
            format!("no integer relation with coefficients below {b} (certified at {prec} bits)")
        }
    });
    Ok(match outcome {
        PslqOutcome::Candidate(_) => Outcome::Success,
        PslqOutcome::NoRelationBelow(_) => Outcome::NonResult,
    })
}

fn cmd_certify(args: &CertifyArgs, config: &Config) -> Result<Outcome, String> {
    let prec = config.prec_bits.max(256);
    let cert: IndependenceCertificate =
        certify_corollary(args.l, prec).map_err(|e| e.to_string())?;
    emit(config, &cert, || cert.render_text());
    Ok(Outcome::Success)
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct VerifyReport {
    criteria: Vec<mzvlab::battery::CriterionResult>,
    all_passed: bool,
}

fn cmd_verify(config: &Config) -> Result<Outcome, String> {
    let criteria = mzvlab::battery::run_all();
    let all_passed = criteria.iter().all(|c| c.passed);
    if config.output_mode == OutputMode::Text {
        for c in &criteria {
            println!("{}", c.line());
        }
        println!(
            "{}",
            if all_passed {
                "all criteria passed"
            } else {
                "SOME CRITERIA FAILED"
            }
        );
    } else {
        let report = VerifyReport {
            criteria,
            all_passed,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(if report.all_passed {
            Outcome::Success
        } else {
            Outcome::NonResult
        });
    }
    Ok(if all_passed {
        Outcome::Success
    } else {
        Outcome::NonResult
    })
}
