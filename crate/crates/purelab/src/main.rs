//! File-driven front end for the decision procedures.  Every run prints a
//! single report (JSON or indented text) embedding the tool version and a
//! sha256 digest of each input file.  Exit codes: 0 the property holds or
//! the object is valid, 1 the property fails (witness in the report),
//! 2 input error (machine-readable error object).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use purelab::connectivity::components_outside;
use purelab::fincat::{is_llp, LlpDecision};
use purelab::io::{self, InputDigest};
use purelab::limits::{is_pullback_square, pullback_monos, pushout_monos};
use purelab::presheaf::{generate, representable, Elem, Hom, Presheaf};
use purelab::purity::{
    is_pure, is_pure_effective, is_split, EqSystem, PureEffectiveDecision, PurityCertificate,
};
use purelab::suite::{run_all, run_criterion, CriterionOutcome};
use purelab::witness::{
    build_chain, check_h_properties, check_order_pattern, find_pattern, PatternShape,
};
use purelab::{Error, Result};

#[derive(Parser)]
#[command(name = "purelab", version, about, max_term_width = 100)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate category, presheaf, hom or square files; reports every failure, not just the first.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide whether every span of arrows in a category factors through one of its legs.
    Llp { category: PathBuf },
    /// Decide purity of a monomorphism given as a hom file; reports a retraction or a falsifying
    /// equation system with its solution.
    Pure { hom: PathBuf },
    /// Search for a retraction of a monomorphism given as a hom file.
    Split { hom: PathBuf },
    /// Check a commuting square of monomorphisms.
    Square {
        square: PathBuf,
        #[arg(long, value_enum)]
        check: SquareCheck,
    },
    /// Push out two monomorphisms with a common source; prints the cospan into the pushout.
    Pushout {
        /// Hom file for the left leg K -> A.
        left: PathBuf,
        /// Hom file for the right leg K -> B.
        right: PathBuf,
        /// Directory to write the pushout bundle into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pull back two monomorphisms with a common target; prints the completed square.
    Pullback {
        /// Hom file for the left leg A -> L.
        left: PathBuf,
        /// Hom file for the right leg B -> L.
        right: PathBuf,
        /// Directory to write the pullback bundle into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connected components of a presheaf outside the subpresheaf generated by --base.
    Components {
        presheaf: PathBuf,
        /// Generators as "Sort:element", comma separated; omit for the empty base.
        #[arg(long, value_delimiter = ',')]
        base: Vec<String>,
    },
    /// Build the iterated gluing chain from a representable seed and verify the order pattern
    /// and the stable intersection H in its final stage.
    Witness {
        /// Category file.
        #[arg(long)]
        cat: PathBuf,
        /// Seed "rep_<Object>:<f>,<g>,<c>": in the representable at <Object>, glue along
        /// a = f.c and b = g.c with witness c.
        #[arg(long)]
        seed: String,
        /// Number of diagonal rounds; stages are indexed (n, m) with m <= n < depth.
        #[arg(long)]
        depth: usize,
        /// Directory to write the stage-by-stage trace into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a presheaf for a bipartite or order witness pattern over a span of arrows.
    Pattern {
        presheaf: PathBuf,
        /// Row arrow of the span.
        #[arg(long)]
        f: String,
        /// Column arrow of the span.
        #[arg(long)]
        g: String,
        /// "bipartite:ROWS,COLS" or "order:LEN".
        #[arg(long)]
        shape: String,
    },
    /// Run the acceptance suites; one line per criterion in text format.
    Suite {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a single criterion by number (1 to 9).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SquareCheck {
    /// All four legs pure and the induced map into the pushout a pure mono.
    PureEffective,
    /// The square is a pullback: K is exactly the intersection of A and B in L.
    Pullback,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Llp { .. } => "llp",
            Command::Pure { .. } => "pure",
            Command::Split { .. } => "split",
            Command::Square { .. } => "square",
            Command::Pushout { .. } => "pushout",
            Command::Pullback { .. } => "pullback",
            Command::Components { .. } => "components",
            Command::Witness { .. } => "witness",
            Command::Pattern { .. } => "pattern",
            Command::Suite { .. } => "suite",
        }
    }
}

/// Outcome of one command: report body, input digests, process exit code.
struct Outcome {
    result: Value,
    inputs: Vec<InputDigest>,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    match run(&cli.command, cli.format) {
        Ok(outcome) => {
            emit(cli.format, command, &outcome.inputs, &outcome.result);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            let body = json!({
                "tool": "purelab",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&body).unwrap()),
                Format::Text => eprintln!("error[{}]: {e}", e.kind()),
            }
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, command: &str, inputs: &[InputDigest], result: &Value) {
    match format {
        Format::Json => {
            let body = json!({
                "tool": "purelab",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "inputs": inputs,
                "result": result,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
        Format::Text => {
            println!("purelab {} {}", env!("CARGO_PKG_VERSION"), command);
            for d in inputs {
                println!("input {} sha256={}", d.path, d.sha256);
            }
            print_text(result, 0);
        }
    }
}

fn print_text(v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if val.is_object() || (val.is_array() && !val.as_array().unwrap().is_empty()) {
                    println!("{pad}{k}:");
                    print_text(val, indent + 1);
                } else {
                    println!("{pad}{k}: {val}");
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if item.is_object() || item.is_array() {
                    println!("{pad}-");
                    print_text(item, indent + 1);
                } else {
                    println!("{pad}- {item}");
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn run(command: &Command, format: Format) -> Result<Outcome> {
    match command {
        Command::Validate { files } => cmd_validate(files),
        Command::Llp { category } => cmd_llp(category),
        Command::Pure { hom } => cmd_pure(hom),
        Command::Split { hom } => cmd_split(hom),
        Command::Square { square, check } => cmd_square(square, *check),
        Command::Pushout { left, right, out } => cmd_pushout(left, right, out.as_deref()),
        Command::Pullback { left, right, out } => cmd_pullback(left, right, out.as_deref()),
        Command::Components { presheaf, base } => cmd_components(presheaf, base),
        Command::Witness { cat, seed, depth, out } => {
            cmd_witness(cat, seed, *depth, out.as_deref())
        }
        Command::Pattern { presheaf, f, g, shape } => cmd_pattern(presheaf, f, g, shape),
        Command::Suite { seed, only } => cmd_suite(*seed, *only, format),
    }
}

// ---- validate ----

fn classify_and_load(path: &Path) -> Result<(&'static str, Vec<InputDigest>)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path.display().to_string())
        } else {
            Error::Io { path: path.display().to_string(), detail: e.to_string() }
        }
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::MalformedJson {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let keys = value.as_object().map(|m| m.keys().cloned().collect::<Vec<_>>()).unwrap_or_default();
    let has = |k: &str| keys.iter().any(|x| x == k);
    if has("objects") && has("arrows") {
        Ok(("category", io::load_category(path)?.1))
    } else if has("carriers") {
        Ok(("presheaf", io::load_presheaf(path)?.1))
    } else if has("source") && has("map") {
        Ok(("hom", io::load_hom(path)?.1))
    } else if has("K") && has("kA") {
        Ok(("square", io::load_square(path)?.1))
    } else {
        Err(Error::MalformedJson {
            path: path.display().to_string(),
            detail: "unrecognized document shape; expected a category, presheaf, hom or square"
                .into(),
        })
    }
}

fn cmd_validate(files: &[PathBuf]) -> Result<Outcome> {
    let mut entries = Vec::new();
    let mut inputs = Vec::new();
    let mut all_ok = true;
    for path in files {
        match classify_and_load(path) {
            Ok((kind, digests)) => {
                entries.push(json!({
                    "path": path.display().to_string(),
                    "valid": true,
                    "kind": kind,
                }));
                for d in digests {
                    if !inputs.iter().any(|x: &InputDigest| x.path == d.path) {
                        inputs.push(d);
                    }
                }
            }
            Err(e) => {
                all_ok = false;
                entries.push(json!({
                    "path": path.display().to_string(),
                    "valid": false,
                    "error": { "kind": e.kind(), "message": e.to_string() },
                }));
            }
        }
    }
    Ok(Outcome {
        result: json!({ "valid": all_ok, "files": entries }),
        inputs,
        code: if all_ok { 0 } else { 2 },
    })
}

// ---- llp ----

fn cmd_llp(path: &Path) -> Result<Outcome> {
    let (cat, inputs) = io::load_category(path)?;
    match is_llp(&cat) {
        LlpDecision::Holds(cert) => Ok(Outcome {
            result: json!({ "llp": true, "spans_factored": cert.len() }),
            inputs,
            code: 0,
        }),
        LlpDecision::Fails(w) => Ok(Outcome {
            result: json!({
                "llp": false,
                "witness": {
                    "apex": cat.object_name(w.apex),
                    "left": cat.arrow_name(w.left),
                    "right": cat.arrow_name(w.right),
                },
            }),
            inputs,
            code: 1,
        }),
    }
}

// ---- pure / split ----

fn hom_map(h: &Hom) -> BTreeMap<String, BTreeMap<String, String>> {
    h.to_raw("", "").map
}

fn falsifier_json(sys: &EqSystem, ambient: &Presheaf, solution: &[Elem]) -> Value {
    json!({
        "falsifier": sys.to_raw(ambient),
        "solution_in_l": solution.iter().map(|&e| ambient.qualified(e)).collect::<Vec<_>>(),
    })
}

fn cmd_pure(path: &Path) -> Result<Outcome> {
    let (hom, inputs) = io::load_hom(path)?;
    match is_pure(&hom)? {
        PurityCertificate::Pure { retraction } => Ok(Outcome {
            result: json!({ "pure": true, "retraction": hom_map(&retraction) }),
            inputs,
            code: 0,
        }),
        PurityCertificate::NotPure { falsifier, solution_in_l } => {
            let mut result = falsifier_json(&falsifier, hom.target(), &solution_in_l);
            result["pure"] = json!(false);
            Ok(Outcome { result, inputs, code: 1 })
        }
    }
}

fn cmd_split(path: &Path) -> Result<Outcome> {
    let (hom, inputs) = io::load_hom(path)?;
    match is_split(&hom)? {
        Some(retraction) => Ok(Outcome {
            result: json!({ "split": true, "retraction": hom_map(&retraction) }),
            inputs,
            code: 0,
        }),
        None => Ok(Outcome { result: json!({ "split": false }), inputs, code: 1 }),
    }
}

// ---- square ----

fn cmd_square(path: &Path, check: SquareCheck) -> Result<Outcome> {
    let (square, inputs) = io::load_square(path)?;
    match check {
        SquareCheck::PureEffective => match is_pure_effective(&square)? {
            PureEffectiveDecision::PureEffective { induced, retraction } => Ok(Outcome {
                result: json!({
                    "pure_effective": true,
                    "induced": hom_map(&induced),
                    "retraction": hom_map(&retraction),
                }),
                inputs,
                code: 0,
            }),
            PureEffectiveDecision::InducedNotMono { induced } => Ok(Outcome {
                result: json!({
                    "pure_effective": false,
                    "reason": "induced-not-mono",
                    "induced": hom_map(&induced),
                }),
                inputs,
                code: 1,
            }),
            PureEffectiveDecision::InducedNotPure { induced, falsifier, solution_in_l } => {
                let mut result = falsifier_json(&falsifier, &square.l, &solution_in_l);
                result["pure_effective"] = json!(false);
                result["reason"] = json!("induced-not-pure");
                result["induced"] = json!(hom_map(&induced));
                Ok(Outcome { result, inputs, code: 1 })
            }
        },
        SquareCheck::Pullback => {
            let holds = is_pullback_square(&square)?;
            Ok(Outcome {
                result: json!({ "pullback": holds }),
                inputs,
                code: if holds { 0 } else { 1 },
            })
        }
    }
}

// ---- pushout / pullback ----

fn cmd_pushout(left: &Path, right: &Path, out: Option<&Path>) -> Result<Outcome> {
    let (ka, mut inputs) = io::load_hom(left)?;
    let (kb, more) = io::load_hom(right)?;
    inputs.extend(more);
    let po = pushout_monos(&ka, &kb)?;
    let mut result = json!({
        "p": po.p.to_raw("category.cat.json"),
        "in_a": po.in_a.to_raw("a.psh.json", "p.psh.json"),
        "in_b": po.in_b.to_raw("b.psh.json", "p.psh.json"),
    });
    if let Some(dir) = out {
        write_cospan_bundle(dir, &po.in_a, &po.in_b)?;
        result["out"] = json!(dir.display().to_string());
    }
    Ok(Outcome { result, inputs, code: 0 })
}

fn cmd_pullback(left: &Path, right: &Path, out: Option<&Path>) -> Result<Outcome> {
    let (al, mut inputs) = io::load_hom(left)?;
    let (bl, more) = io::load_hom(right)?;
    inputs.extend(more);
    let square = pullback_monos(&al, &bl)?;
    let mut result = json!({
        "k": square.k.to_raw("category.cat.json"),
        "ka": square.ka.to_raw("k.psh.json", "a.psh.json"),
        "kb": square.kb.to_raw("k.psh.json", "b.psh.json"),
    });
    if let Some(dir) = out {
        write_span_bundle(dir, &square.ka, &square.kb)?;
        result["out"] = json!(dir.display().to_string());
    }
    Ok(Outcome { result, inputs, code: 0 })
}

/// Writes A -> P <- B with its category and all three presheaves.
fn write_cospan_bundle(dir: &Path, in_a: &Hom, in_b: &Hom) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), detail: e.to_string() })?;
    io::write_json(&dir.join("category.cat.json"), &in_a.source().cat().to_raw())?;
    io::write_json(&dir.join("a.psh.json"), &in_a.source().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("b.psh.json"), &in_b.source().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("p.psh.json"), &in_a.target().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("in_a.hom.json"), &in_a.to_raw("a.psh.json", "p.psh.json"))?;
    io::write_json(&dir.join("in_b.hom.json"), &in_b.to_raw("b.psh.json", "p.psh.json"))?;
    Ok(())
}

/// Writes A <- K -> B with its category and all three presheaves.
fn write_span_bundle(dir: &Path, ka: &Hom, kb: &Hom) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), detail: e.to_string() })?;
    io::write_json(&dir.join("category.cat.json"), &ka.source().cat().to_raw())?;
    io::write_json(&dir.join("k.psh.json"), &ka.source().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("a.psh.json"), &ka.target().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("b.psh.json"), &kb.target().to_raw("category.cat.json"))?;
    io::write_json(&dir.join("ka.hom.json"), &ka.to_raw("k.psh.json", "a.psh.json"))?;
    io::write_json(&dir.join("kb.hom.json"), &kb.to_raw("k.psh.json", "b.psh.json"))?;
    Ok(())
}

// ---- components ----

fn parse_qualified(p: &Presheaf, spec: &str) -> Result<Elem> {
    let (sort, name) = spec
        .split_once(':')
        .ok_or_else(|| Error::BadParameters(format!("expected Sort:element, got {spec}")))?;
    let o = p.cat().object_id(sort)?;
    p.elem(o, name)
}

fn cmd_components(path: &Path, base: &[String]) -> Result<Outcome> {
    let (p, inputs) = io::load_presheaf(path)?;
    let gens: Vec<Elem> =
        base.iter().map(|spec| parse_qualified(&p, spec)).collect::<Result<_>>()?;
    let sub = generate(&p, &gens);
    let report = components_outside(&sub);
    let qualify = |e: Elem| p.qualified(e);
    Ok(Outcome {
        result: json!({
            "base": sub.elements().map(qualify).collect::<Vec<_>>(),
            "component_count": report.components.len(),
            "components": report
                .components
                .iter()
                .map(|c| c.iter().map(|&e| qualify(e)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "edges": report
                .edges
                .iter()
                .map(|&(x, a, y)| json!([qualify(x), p.cat().arrow_name(a), qualify(y)]))
                .collect::<Vec<_>>(),
        }),
        inputs,
        code: 0,
    })
}

// ---- witness ----

/// Parses "rep_<Object>:<f>,<g>,<c>" against a loaded category.  The
/// element c lives in the representable at <Object>, so its name is an
/// arrow name; "id<Object>" is accepted for the identity.
fn parse_seed(
    cat: &Arc<purelab::fincat::FinCat>,
    spec: &str,
) -> Result<(Arc<Presheaf>, Elem, Elem, Elem, purelab::fincat::ArrowId, purelab::fincat::ArrowId)> {
    let bad = |msg: &str| Error::BadParameters(format!("seed {spec}: {msg}"));
    let rest = spec.strip_prefix("rep_").ok_or_else(|| bad("expected rep_<Object>:<f>,<g>,<c>"))?;
    let (obj_name, args) =
        rest.split_once(':').ok_or_else(|| bad("expected rep_<Object>:<f>,<g>,<c>"))?;
    let parts: Vec<&str> = args.split(',').collect();
    let [f_name, g_name, c_name] = parts[..] else {
        return Err(bad("expected three comma-separated names f,g,c"));
    };
    let obj = cat.object_id(obj_name)?;
    let rep = Arc::new(representable(cat, obj));
    let f = cat.arrow_id(f_name)?;
    let g = cat.arrow_id(g_name)?;
    if cat.dom(f) != cat.dom(g) {
        return Err(Error::BadSpan { f: f_name.to_string(), g: g_name.to_string() });
    }
    let dom = cat.dom(f);
    let c = rep.elem(dom, c_name).or_else(|e| {
        if dom == obj && c_name == format!("id{obj_name}") {
            rep.elem(dom, &format!("id_{obj_name}"))
        } else {
            Err(e)
        }
    })?;
    let a = rep.act(f, c);
    let b = rep.act(g, c);
    Ok((rep, a, b, c, f, g))
}

fn cmd_witness(cat_path: &Path, seed: &str, depth: usize, out: Option<&Path>) -> Result<Outcome> {
    let (cat, inputs) = io::load_category(cat_path)?;
    let (rep, a, b, c, f, g) = parse_seed(&cat, seed)?;
    let trace = build_chain(&rep, a, b, c, f, g, depth)?;
    let order = check_order_pattern(&trace);
    let h = check_h_properties(&trace);
    let fin = trace.final_stage();
    let ok = order.ok() && h.ok();
    let mut result = json!({
        "stage_sizes": trace.stage_sizes(),
        "final_size": fin.size(),
        "order": order.to_raw(fin),
        "h": h.to_raw(fin),
        "ok": ok,
    });
    if let Some(dir) = out {
        let manifest = io::write_trace_dir(&trace, dir)?;
        result["out"] = json!(dir.display().to_string());
        result["manifest"] = serde_json::to_value(&manifest).expect("manifest serializes");
    }
    Ok(Outcome { result, inputs, code: if ok { 0 } else { 1 } })
}

// ---- pattern ----

fn parse_shape(spec: &str) -> Result<PatternShape> {
    let bad = |msg: &str| Error::BadParameters(format!("shape {spec}: {msg}"));
    let (kind, args) =
        spec.split_once(':').ok_or_else(|| bad("expected bipartite:ROWS,COLS or order:LEN"))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("sizes must be integers"));
    match kind {
        "bipartite" => {
            let (r, c) = args.split_once(',').ok_or_else(|| bad("expected ROWS,COLS"))?;
            Ok(PatternShape::Bipartite { rows: parse(r)?, cols: parse(c)? })
        }
        "order" => Ok(PatternShape::Order { len: parse(args)? }),
        _ => Err(bad("unknown shape kind")),
    }
}

fn cmd_pattern(path: &Path, f: &str, g: &str, shape: &str) -> Result<Outcome> {
    let (p, inputs) = io::load_presheaf(path)?;
    let shape = parse_shape(shape)?;
    let f = p.cat().arrow_id(f)?;
    let g = p.cat().arrow_id(g)?;
    match find_pattern(&p, f, g, shape)? {
        Some(w) => Ok(Outcome {
            result: json!({ "found": true, "witness": w.to_raw(&p) }),
            inputs,
            code: 0,
        }),
        None => Ok(Outcome { result: json!({ "found": false }), inputs, code: 1 }),
    }
}

// ---- suite ----

fn cmd_suite(seed: u64, only: Option<usize>, format: Format) -> Result<Outcome> {
    let outcomes: Vec<CriterionOutcome> = match only_checked(only)? {
        Some(id) => vec![run_criterion(id, seed)],
        None => run_all(seed),
    };
    if matches!(format, Format::Text) {
        for o in &outcomes {
            println!(
                "criterion {} ({}): {} ({} ms) {}",
                o.id,
                o.name,
                if o.passed { "PASS" } else { "FAIL" },
                o.millis,
                o.details
            );
        }
    }
    let all_passed = outcomes.iter().all(|o| o.passed);
    Ok(Outcome {
        result: json!({ "seed": seed, "criteria": outcomes, "all_passed": all_passed }),
        inputs: Vec::new(),
        code: if all_passed { 0 } else { 1 },
    })
}

fn only_checked(only: Option<usize>) -> Result<Option<usize>> {
    match only {
        Some(id) if (1..=9).contains(&id) => Ok(Some(id)),
        Some(id) => Err(Error::BadParameters(format!("no criterion numbered {id}"))),
        None => Ok(None),
    }
}
