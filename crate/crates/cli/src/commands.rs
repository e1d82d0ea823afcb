use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;

use graphfn::convergence::{check_convergence_with, m_bound_check, CheckOptions};
use graphfn::dual::{duality_preconditions, labeled_isomorphic, planar_dual, verify_duality_theorem, DualError};
use graphfn::evaluator::{charted_integrand, evaluate_gf, EvalError};
use graphfn::forest::cremona_transform;
use graphfn::integrand::{build_direct_integrand, build_dual_integrand, n_with_overrides, IntegrandError};
use graphfn::io::write_graph;
use graphfn::{
    dual_forest_polynomial, load_graph, phi_tilde, EvalOptions, ExternalData, FeynmanGraph, Poly, Representation,
    RotationSystem, SamplerConfig, SamplerKind, VertexPartition,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::envelope::ResultEnvelope;
use crate::parse;
use crate::{Command, EvalArgs, PolyArgs, SamplingArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Usage = 1,
    Divergent = 2,
    Refused = 3,
    CheckFailed = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub code: Code,
    pub message: String,
    /// Printed to stdout before the message goes to stderr.
    pub stdout: Option<String>,
}

impl Failure {
    fn new(code: Code, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
            stdout: None,
        }
    }

    fn usage(message: impl ToString) -> Self {
        Self::new(Code::Usage, message)
    }
}

type Outcome = Result<String, Failure>;

struct Input {
    bytes: Vec<u8>,
    graph: FeynmanGraph,
    rotation: Option<RotationSystem>,
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let mut bytes = Vec::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    read.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| Failure::usage(format!("{}: not UTF-8", path.display())))?;
    let (graph, rotation) = load_graph(text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(Input { bytes, graph, rotation })
}

fn envelope(command: &'static str, input: &Input, payload: Value) -> String {
    let mut out = ResultEnvelope::new(command, &input.bytes, payload).to_json();
    out.push('\n');
    out
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("payload serializes")
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file, connected_only } => check(&read_input(&file)?, connected_only),
        Command::Poly(args) => poly(&read_input(&args.file)?, &args),
        Command::Eval(args) => eval(&read_input(&args.file)?, &args),
        Command::Integrand {
            file,
            representation,
            n,
        } => integrand(&read_input(&file)?, &representation, &n),
        Command::Dual { file, json, output } => dual(&read_input(&file)?, json, output.as_deref()),
        Command::VerifyDual {
            file,
            z,
            sampling,
            exact_only,
        } => verify_dual(&read_input(&file)?, &z, &sampling, exact_only),
    }
}

fn check_payload(g: &FeynmanGraph, options: CheckOptions) -> (bool, Value) {
    let report = check_convergence_with(g, options);
    let convergent = report.is_convergent();
    let mut payload = to_value(&report);
    payload["m_bound"] = to_value(m_bound_check(g));
    (convergent, payload)
}

fn check(input: &Input, connected_only: bool) -> Outcome {
    let (convergent, payload) = check_payload(
        &input.graph,
        CheckOptions {
            connected_uv_only: connected_only,
        },
    );
    let out = envelope("check", input, payload);
    if convergent {
        Ok(out)
    } else {
        Err(Failure {
            code: Code::Divergent,
            message: "graph is divergent".into(),
            stdout: Some(out),
        })
    }
}

/// Refusal for a divergent graph, echoing the `check` result.
fn divergent(input: &Input, message: impl ToString) -> Failure {
    let (_, payload) = check_payload(&input.graph, CheckOptions::default());
    Failure {
        code: Code::Divergent,
        message: message.to_string(),
        stdout: Some(envelope("check", input, payload)),
    }
}

fn integrand_failure(input: &Input, e: IntegrandError) -> Failure {
    match e {
        IntegrandError::Divergent(_) => divergent(input, e),
        IntegrandError::InvalidN { .. } | IntegrandError::NLength { .. } | IntegrandError::UnknownEdge(_) => {
            Failure::usage(e)
        }
        IntegrandError::NonPositiveWeight(_)
        | IntegrandError::Degenerate
        | IntegrandError::GammaPole(_)
        | IntegrandError::Poly(_) => Failure::new(Code::Refused, e),
    }
}

fn eval_failure(input: &Input, e: EvalError) -> Failure {
    match e {
        EvalError::InvalidZ
        | EvalError::NonPositiveDistance(_)
        | EvalError::MissingDistance(_)
        | EvalError::NoSamples => Failure::usage(e),
        EvalError::NotThreePoint | EvalError::Refused(_) => Failure::new(Code::Refused, e),
        EvalError::Integrand(inner) => integrand_failure(input, inner),
    }
}

fn dual_failure(input: &Input, e: DualError) -> Failure {
    match e {
        DualError::Divergent => divergent(input, e),
        DualError::Validation(_) => Failure::usage(e),
        DualError::Evaluation(inner) => eval_failure(input, inner),
        other => Failure::new(Code::Refused, other),
    }
}

#[derive(Serialize)]
struct PolyEntry {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<String>,
    degree: u32,
    terms: usize,
    polynomial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    cremona: Option<String>,
}

fn poly_entry(g: &FeynmanGraph, kind: &'static str, partition: Option<String>, p: &Poly, cremona: bool) -> Outcome {
    let text = if p.is_zero() { "0".to_string() } else { g.format_poly(p) };
    let degree = match p.homogeneous_degree() {
        Ok(Some(k)) => k,
        Ok(None) => return Err(Failure::new(Code::Refused, "polynomial is not homogeneous")),
        Err(_) => 0,
    };
    let cremona = if cremona && !p.is_zero() {
        let c = cremona_transform(p, degree).map_err(|e| Failure::new(Code::Refused, e))?;
        Some(g.format_poly(&c))
    } else {
        None
    };
    let entry = PolyEntry {
        kind,
        partition,
        degree,
        terms: p.len(),
        polynomial: text,
        cremona,
    };
    Ok(serde_json::to_string(&entry).expect("entry serializes"))
}

fn poly(input: &Input, args: &PolyArgs) -> Outcome {
    let g = &input.graph;
    let mut partitions: Vec<VertexPartition> = Vec::new();
    for text in &args.partition {
        partitions
            .push(VertexPartition::parse(g, text).map_err(|e| Failure::usage(format!("--partition {text}: {e}")))?);
    }
    let want_phi = args.phi || args.partition.is_empty();
    if args.partition.is_empty() && !args.phi {
        partitions.push(VertexPartition::singletons(g));
    }
    let mut entries = Vec::new();
    for p in &partitions {
        let psi = dual_forest_polynomial(g, p);
        entries.push(poly_entry(g, "psi", Some(p.describe(g)), &psi, args.cremona)?);
    }
    if want_phi {
        entries.push(poly_entry(g, "phi", None, &phi_tilde(g), args.cremona)?);
    }
    let entries: Vec<Value> = entries
        .iter()
        .map(|e| serde_json::from_str(e).expect("valid json"))
        .collect();
    if args.text {
        let mut out = String::new();
        for e in &entries {
            let name = match &e["partition"] {
                Value::String(p) => format!("psi[{p}]"),
                _ => "phi".to_string(),
            };
            writeln!(out, "{name} = {}", e["polynomial"].as_str().unwrap_or_default()).unwrap();
            if let Some(c) = e["cremona"].as_str() {
                writeln!(out, "{name}.cremona = {c}").unwrap();
            }
        }
        return Ok(out);
    }
    Ok(envelope("poly", input, json!({ "polynomials": entries })))
}

fn sampler_config(args: &SamplingArgs) -> Result<SamplerConfig, Failure> {
    let sampler: SamplerKind = args.sampler.parse().map_err(Failure::usage)?;
    Ok(SamplerConfig {
        samples: args.samples,
        seed: args.seed,
        sampler,
        parallel: !args.serial,
    })
}

fn edge_id(g: &FeynmanGraph, name: &str) -> Result<usize, Failure> {
    g.edge_by_name(name)
        .ok_or_else(|| Failure::usage(format!("unknown edge `{name}`")))
}

fn derivative_orders(input: &Input, items: &[String]) -> Result<Option<Vec<u32>>, Failure> {
    if items.is_empty() {
        return Ok(None);
    }
    let overrides = items
        .iter()
        .map(|s| parse::derivative_order(s))
        .collect::<Result<Vec<_>, _>>();
    let overrides = overrides.map_err(Failure::usage)?;
    n_with_overrides(&input.graph, &overrides)
        .map(Some)
        .map_err(|e| integrand_failure(input, e))
}

fn eval(input: &Input, args: &EvalArgs) -> Outcome {
    let g = &input.graph;
    let (external, external_json) = match (&args.z, args.s.is_empty()) {
        (Some(z), _) => {
            let z = parse::complex(z).map_err(Failure::usage)?;
            let x = ExternalData::z(z).map_err(|e| eval_failure(input, e))?;
            (x, json!({ "z": [z.re, z.im] }))
        }
        (None, false) => {
            let pairs = parse::distances(&args.s).map_err(Failure::usage)?;
            let shown: serde_json::Map<String, Value> =
                pairs.iter().map(|((a, b), v)| (format!("{a},{b}"), json!(v))).collect();
            let x = ExternalData::distances(pairs).map_err(|e| eval_failure(input, e))?;
            (x, json!({ "distances": shown }))
        }
        (None, true) => return Err(Failure::usage("either --z or --s is required")),
    };
    let cfg = sampler_config(&args.sampling)?;
    let representation: Representation = args.representation.parse().map_err(Failure::usage)?;
    let chart = args.chart.as_deref().map(|c| edge_id(g, c)).transpose()?;
    let n = derivative_orders(input, &args.n)?;
    if n.is_some() && representation == Representation::Direct {
        return Err(Failure::usage("--n applies to the dual representation only"));
    }
    if let Some(w) = args.warp {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Failure::usage("--warp must be positive"));
        }
    }
    let opts = EvalOptions {
        representation,
        chart,
        n,
        warp: args.warp,
    };
    let ci = charted_integrand(g, &opts).map_err(|e| integrand_failure(input, e))?;
    let estimate = evaluate_gf(&ci, &external, &cfg).map_err(|e| eval_failure(input, e))?;
    if let Some(w) = &estimate.warning {
        eprintln!("warning: {w}");
    }
    let payload = json!({
        "estimate": estimate,
        "external": external_json,
        "representation": representation,
        "chart": g.edges()[ci.chart].name,
        "n": ci.integrand.n,
        "warp": ci.warp,
        "prefactor": ci.integrand.prefactor(),
    });
    Ok(envelope("eval", input, payload))
}

fn integrand(input: &Input, representation: &str, n: &[String]) -> Outcome {
    let g = &input.graph;
    let representation: Representation = representation.parse().map_err(Failure::usage)?;
    let n = derivative_orders(input, n)?;
    let built = match representation {
        Representation::Dual => {
            let n = n.unwrap_or_else(|| graphfn::integrand::choose_n(g));
            build_dual_integrand(g, &n)
        }
        Representation::Direct if n.is_some() => {
            return Err(Failure::usage("--n applies to the dual representation only"));
        }
        Representation::Direct => build_direct_integrand(g),
    };
    let integrand = built.map_err(|e| integrand_failure(input, e))?;
    let mut payload = to_value(integrand.dump());
    payload["edges"] = json!(g.edges().iter().map(|e| e.name.clone()).collect::<Vec<_>>());
    Ok(envelope("integrand", input, payload))
}

fn rotation(input: &Input) -> Result<&RotationSystem, Failure> {
    input
        .rotation
        .as_ref()
        .ok_or_else(|| Failure::new(Code::Refused, "the graph file has no rotation lines"))
}

fn dual(input: &Input, as_json: bool, output: Option<&Path>) -> Outcome {
    let g = &input.graph;
    let rot = rotation(input)?;
    duality_preconditions(g).map_err(|e| dual_failure(input, e))?;
    let result = planar_dual(g, rot).map_err(|e| dual_failure(input, e))?;
    let self_dual = labeled_isomorphic(g, &result.dual);
    let pairs = result.edge_pairs(g);
    let mut file = String::from("# planar dual\n");
    for (e, d) in &pairs {
        writeln!(file, "# {e} <-> {d}").unwrap();
    }
    if self_dual {
        file.push_str("# self-dual: isomorphic to the input with labels and weights\n");
    }
    file.push_str(&write_graph(&result.dual, Some(&result.rotation)));
    if let Some(path) = output {
        std::fs::write(path, &file).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    if !as_json {
        return Ok(file);
    }
    let payload = json!({
        "graph_file": file,
        "edge_bijection": pairs.iter().map(|(e, d)| json!({ "edge": e, "dual": d })).collect::<Vec<_>>(),
        "self_dual": self_dual,
        "faces": result.augmented.faces.len(),
        "euler_characteristic": result.augmented.euler_characteristic(),
    });
    Ok(envelope("dual", input, payload))
}

fn verify_dual(input: &Input, z: &str, sampling: &SamplingArgs, exact_only: bool) -> Outcome {
    let g = &input.graph;
    let rot = rotation(input)?;
    let z = parse::complex(z).map_err(Failure::usage)?;
    ExternalData::z(z).map_err(|e| eval_failure(input, e))?;
    let cfg = sampler_config(sampling)?;
    let report =
        verify_duality_theorem(g, rot, z, (!exact_only).then_some(&cfg)).map_err(|e| dual_failure(input, e))?;
    let numeric_ok = report.numeric.as_ref().is_none_or(|n| n.agrees);
    let all_hold = report.exact.all_hold() && numeric_ok;
    let mut payload = to_value(&report);
    payload["z"] = json!([z.re, z.im]);
    payload["all_hold"] = json!(all_hold);
    let out = envelope("verify-dual", input, payload);
    if all_hold {
        Ok(out)
    } else {
        Err(Failure {
            code: Code::CheckFailed,
            message: "a duality check failed".into(),
            stdout: Some(out),
        })
    }
}
