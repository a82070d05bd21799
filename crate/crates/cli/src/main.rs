//! `sbflag`: one engine operation per invocation, one JSON record per line.

mod config;
mod render;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sbflag_core::csa::{AlgebraDescriptor, BaseKind};
use sbflag_core::equiv_chain::{validate_chain, NodeRegistry};
use sbflag_core::fixtures::chain_fixtures;
use sbflag_core::global_brauer::{
    construct_extension_lemma, construct_power_extension, global_restrict, verify_extension_lemma,
};
use sbflag_core::oracle::{oracle_index, run_suite};
use sbflag_core::sb_calculus::{
    generic_index, has_rational_point, normal_form, variety_index, Hypotheses, Rule, TorsionEngine,
};
use sbflag_core::{EquivChain, Error, FlagDescriptor, FormalExtension, GlobalBrauerClass, LocalField, QZInvariant,
    SCHEMA_VERSION};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::Config;

#[derive(Parser)]
#[command(name = "sbflag", version, about = "Index and torsion calculus for Severi-Brauer flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file (overrides $SBFLAG_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Render the result for reading instead of as a JSON line.
    #[arg(long, global = true)]
    human: bool,
}

#[derive(Args)]
struct Payload {
    /// JSON payload; read from standard input when omitted.
    payload: Option<String>,
    #[arg(long, conflicts_with = "payload")]
    payload_file: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    max_places: Option<usize>,
    #[arg(long)]
    max_denominator: Option<u64>,
    #[arg(long)]
    max_degree: Option<u64>,
    #[arg(long)]
    max_index: Option<u64>,
    /// Disable a torsion rule in the engine under test (fault injection).
    #[arg(long, value_name = "RULE")]
    drop_rule: Vec<Rule>,
}

#[derive(Subcommand)]
enum Command {
    /// Index and period of a class given by local invariants.
    ClassIndex(Payload),
    /// Primary components of a class.
    ClassDecompose(Payload),
    /// Restriction of a class along a formal extension.
    ClassRestrict(Payload),
    /// Index of a flag variety.
    SbIndex(Payload),
    /// Index of the algebra over the function field of a flag variety.
    SbGenericIndex(Payload),
    /// Annihilation bound for A0 of a flag variety.
    SbBound(Payload),
    /// Rational point criterion over an extension of known index.
    SbRationalPoint(Payload),
    /// Degree-p extension count of a local field.
    LocalExtCount(Payload),
    /// Extension lemma: a third degree-p extension with prescribed indices.
    ConstructExt(Payload),
    /// Extension of degree p^k lowering the index by p^k.
    ConstructPowerExt(Payload),
    /// Chain of simple-equivalence certificates between two fields.
    Chain(Payload),
    /// Re-validate a serialized chain.
    VerifyChain(Payload),
    /// Compare every engine operation with its brute-force oracle.
    OracleSuite(SuiteArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ClassIndex(_) => "class-index",
            Command::ClassDecompose(_) => "class-decompose",
            Command::ClassRestrict(_) => "class-restrict",
            Command::SbIndex(_) => "sb-index",
            Command::SbGenericIndex(_) => "sb-generic-index",
            Command::SbBound(_) => "sb-bound",
            Command::SbRationalPoint(_) => "sb-rational-point",
            Command::LocalExtCount(_) => "local-ext-count",
            Command::ConstructExt(_) => "construct-ext",
            Command::ConstructPowerExt(_) => "construct-power-ext",
            Command::Chain(_) => "chain",
            Command::VerifyChain(_) => "verify-chain",
            Command::OracleSuite(_) => "oracle-suite",
        }
    }
}

/// Everything that ends a run without a normal result.
enum Failure {
    Malformed(String),
    Engine(Error),
    /// A check ran and failed; the report is still printed.
    Mismatch(Value),
    Budget(Value),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::Mismatch(_) => 1,
            Failure::Budget(_) => 5,
            Failure::Engine(e) => match e {
                Error::LemmaPreconditionsFailed(_) => 3,
                Error::BudgetExceeded(_) => 5,
                e if e.is_internal() => 4,
                _ => 2,
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<Value, Failure>;

/// Numbers that fit in 64 bits are written as JSON numbers, larger ones as
/// decimal strings.
fn big(n: &impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s))
}

fn read_payload(p: &Payload) -> Result<Value, Failure> {
    let text = match (&p.payload, &p.payload_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Malformed(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("payload is not JSON: {e}")))
}

fn decode<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Malformed(e.to_string()))
}

/// Either a full class record or a bare `{place: "a/b"}` map.
fn parse_class(v: Value) -> Result<GlobalBrauerClass, Failure> {
    let full = v.as_object().is_some_and(|o| o.contains_key("invariants") || o.contains_key("places"));
    if full {
        return decode(v);
    }
    let invariants: std::collections::BTreeMap<String, QZInvariant> = decode(v)?;
    Ok(GlobalBrauerClass::from_invariants(invariants.iter().map(|(l, q)| (l.as_str(), q.clone())))?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagPayload {
    algebra: Option<AlgebraDescriptor>,
    ind: Option<u64>,
    exp: Option<u64>,
    deg: Option<u64>,
    char_divides_index: Option<bool>,
    flags: Vec<u64>,
    field_kind: Option<BaseKind>,
    #[serde(default)]
    hypotheses: Hypotheses,
    ind_over_l: Option<u64>,
}

impl FlagPayload {
    fn descriptor(&self) -> Result<FlagDescriptor, Failure> {
        let algebra = match (&self.algebra, self.ind) {
            (Some(a), None) => a.clone(),
            (None, Some(ind)) => {
                AlgebraDescriptor::abstract_algebra(ind, self.exp.unwrap_or(ind), self.deg, self.char_divides_index)?
            }
            _ => return Err(Failure::Malformed("give exactly one of `algebra` and `ind`".into())),
        };
        Ok(FlagDescriptor::new(algebra, self.flags.clone())?)
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("engine records serialize")
}

fn class_index(v: Value, cfg: &Config) -> Outcome {
    let c = parse_class(v)?;
    let local: serde_json::Map<String, Value> = c.support().keys().map(|l| (l.clone(), big(&c.local_index(l)))).collect();
    let mut out = json!({ "index": big(&c.index()), "period": big(&c.period()), "local_indices": local });
    if let Ok(o) = oracle_index(&c, &cfg.budget) {
        out["oracle_index"] = json!(o);
    }
    Ok(out)
}

fn class_decompose(v: Value) -> Outcome {
    let c = parse_class(v)?;
    let parts: serde_json::Map<String, Value> =
        c.primary_components().iter().map(|(p, comp)| (p.to_string(), to_value(comp))).collect();
    Ok(json!({ "components": parts }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictPayload {
    class: Value,
    extension: FormalExtension,
}

fn class_restrict(v: Value) -> Outcome {
    let p: RestrictPayload = decode(v)?;
    let c = parse_class(p.class)?;
    let r = global_restrict(&c, &p.extension)?;
    Ok(json!({ "class": to_value(&r), "index": big(&r.index()) }))
}

fn sb_index(v: Value) -> Outcome {
    let x = decode::<FlagPayload>(v)?.descriptor()?;
    Ok(json!({ "index": variety_index(&x), "generic_index": generic_index(&x) }))
}

fn sb_generic_index(v: Value) -> Outcome {
    let x = decode::<FlagPayload>(v)?.descriptor()?;
    Ok(json!({ "generic_index": generic_index(&x) }))
}

fn sb_bound(v: Value, cfg: &Config) -> Outcome {
    let p: FlagPayload = decode(v)?;
    let x = p.descriptor()?;
    let kind = p.field_kind.or(cfg.default_field_kind.filter(|_| x.algebra().kind() == BaseKind::Abstract));
    let bound = TorsionEngine::new().bound(&x, kind, &p.hypotheses)?;
    let mut out = to_value(&bound);
    out["d"] = json!(normal_form(&x).d);
    Ok(out)
}

fn sb_rational_point(v: Value) -> Outcome {
    let p: FlagPayload = decode(v)?;
    let x = p.descriptor()?;
    let l = p.ind_over_l.ok_or_else(|| Failure::Malformed("missing `ind_over_l`".into()))?;
    Ok(json!({ "rational_point": has_rational_point(&x, l)? }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CountPayload {
    descriptor: LocalField,
    p: u64,
}

fn local_ext_count(v: Value) -> Outcome {
    let p: CountPayload = decode(v)?;
    let count = p.descriptor.count_degree_p_extensions(p.p)?;
    let case = p.descriptor.counting_case(p.p)?;
    let catalog = p.descriptor.guaranteed_catalog(p.p, p.p + 1)?;
    Ok(json!({ "count": to_value(&count), "case": to_value(&case), "catalog": to_value(&catalog) }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LemmaPayload {
    class: Value,
    l0: FormalExtension,
    l1: FormalExtension,
}

fn construct_ext(v: Value) -> Outcome {
    let p: LemmaPayload = decode(v)?;
    let c = parse_class(p.class)?;
    let cert = construct_extension_lemma(&c, &p.l0, &p.l1)?;
    verify_extension_lemma(&c, &cert.l0, &cert.l1, &cert.extension, &cert.distinguishing_place)
        .map_err(|e| Error::ConstructionFailed(format!("self-check failed: {e}")))?;
    Ok(to_value(&cert))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerPayload {
    class: Value,
    k: u32,
}

fn construct_power_ext(v: Value) -> Outcome {
    let p: PowerPayload = decode(v)?;
    let c = parse_class(p.class)?;
    let e = construct_power_extension(&c, p.k)?;
    let after = global_restrict(&c, &e)?;
    Ok(json!({ "extension": to_value(&e), "index_after": big(&after.index()) }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Step {
    id: String,
    parent: String,
    extension: FormalExtension,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainPayload {
    fixture: Option<String>,
    class: Option<Value>,
    k: Option<u32>,
    #[serde(default)]
    steps: Vec<Step>,
    l0: String,
    l1: String,
}

fn chain(v: Value) -> Outcome {
    let p: ChainPayload = decode(v)?;
    let (mut registry, k) = match (&p.fixture, p.class) {
        (Some(name), None) => {
            let f = chain_fixtures()
                .into_iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| Failure::Malformed(format!("unknown fixture `{name}`")))?;
            (f.registry()?, p.k.unwrap_or(f.k))
        }
        (None, Some(class)) => {
            let mut r = NodeRegistry::new(parse_class(class)?)?;
            for s in &p.steps {
                r.add_extension(&s.parent, &s.id, &s.extension)?;
            }
            (r, p.k.ok_or_else(|| Failure::Malformed("missing `k`".into()))?)
        }
        _ => return Err(Failure::Malformed("give exactly one of `fixture` and `class`".into())),
    };
    let chain = registry.build_chain(k, &p.l0, &p.l1)?;
    Ok(to_value(&chain))
}

fn verify_chain(v: Value) -> Outcome {
    let chain: EquivChain = decode(v)?;
    let report = validate_chain(&chain);
    let out = json!({ "valid": report.valid, "diagnostics": report.diagnostics, "length": chain.nodes.len() });
    if report.valid {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn oracle_suite(args: &SuiteArgs, cfg: &Config) -> Outcome {
    let mut budget = cfg.budget;
    budget.max_places = args.max_places.unwrap_or(budget.max_places);
    budget.max_denominator = args.max_denominator.unwrap_or(budget.max_denominator);
    budget.max_degree = args.max_degree.unwrap_or(budget.max_degree);
    budget.max_index = args.max_index.unwrap_or(budget.max_index);
    let engine = args.drop_rule.iter().fold(TorsionEngine::new(), |e, r| e.without(*r));
    let report = run_suite(&budget, &engine)?;
    let out = to_value(&report);
    if report.budget_exceeded {
        Err(Failure::Budget(out))
    } else if !report.passed {
        Err(Failure::Mismatch(out))
    } else {
        Ok(out)
    }
}

fn run(cli: &Cli) -> Outcome {
    let cfg = config::resolve(cli.config.as_deref()).map_err(Failure::Malformed)?;
    match &cli.command {
        Command::ClassIndex(p) => class_index(read_payload(p)?, &cfg),
        Command::ClassDecompose(p) => class_decompose(read_payload(p)?),
        Command::ClassRestrict(p) => class_restrict(read_payload(p)?),
        Command::SbIndex(p) => sb_index(read_payload(p)?),
        Command::SbGenericIndex(p) => sb_generic_index(read_payload(p)?),
        Command::SbBound(p) => sb_bound(read_payload(p)?, &cfg),
        Command::SbRationalPoint(p) => sb_rational_point(read_payload(p)?),
        Command::LocalExtCount(p) => local_ext_count(read_payload(p)?),
        Command::ConstructExt(p) => construct_ext(read_payload(p)?),
        Command::ConstructPowerExt(p) => construct_power_ext(read_payload(p)?),
        Command::Chain(p) => chain(read_payload(p)?),
        Command::VerifyChain(p) => verify_chain(read_payload(p)?),
        Command::OracleSuite(args) => oracle_suite(args, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let outcome = run(&cli);
    let (record, code) = match outcome {
        Ok(result) => (json!({ "schema_version": SCHEMA_VERSION, "command": command, "status": "ok", "result": result }), 0),
        Err(f) => {
            let code = f.exit_code();
            let record = match f {
                Failure::Mismatch(result) | Failure::Budget(result) => json!({
                    "schema_version": SCHEMA_VERSION, "command": command,
                    "status": if code == 5 { "budget-exceeded" } else { "fail" }, "result": result,
                }),
                Failure::Malformed(message) => json!({
                    "schema_version": SCHEMA_VERSION, "command": command, "status": "error",
                    "error": { "code": "malformed-input", "message": message },
                }),
                Failure::Engine(e) => json!({
                    "schema_version": SCHEMA_VERSION, "command": command, "status": "error",
                    "error": { "code": e.code(), "message": e.to_string() },
                }),
            };
            if let Some(msg) = record.pointer("/error/message").and_then(Value::as_str) {
                eprintln!("sbflag {command}: {msg}");
            }
            (record, code)
        }
    };
    let text = if cli.human { render::human(&record) } else { format!("{record}\n") };
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(code)
}
