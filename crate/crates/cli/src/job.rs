use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{json, Value};

use arrcoh::catalog;
use arrcoh::cohomology::{
    arnold_relation_check, cddmp_check, omega_circuit_failures, CircuitOptions, CohomologyRing,
    IkChoice, Quotient, RingElement,
};
use arrcoh::exactlin::rational::format_rational;
use arrcoh::vg::verify_vg_presentation;
use arrcoh::{AbelianArrangement, Check, IndexSet, IntPoly};

use crate::input::{parse_document, InputDocument};
use crate::report::Report;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Signed circuits with their relations and multiplicities.
    Circuits,
    /// Rank and multiplicity of every subset.
    Multiplicities,
    /// Poset of layers with Möbius values.
    Layers,
    /// Characteristic polynomial.
    Charpoly,
    /// Poincaré polynomial of the complement.
    Poincare,
    /// Betti numbers of the presented ring, checked against the Poincaré polynomial.
    Betti,
    /// Circuit relations of the presentation.
    Relations,
    /// Runs the full property suite on one arrangement.
    Verify,
    /// Chambers and Heaviside relations of a real arrangement.
    Vg,
    /// Averaged-class identities at every central nullity-one set.
    Cddmp,
    /// Three-term relation checks for a braid arrangement.
    Arnold,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Circuits => "circuits",
            Command::Multiplicities => "multiplicities",
            Command::Layers => "layers",
            Command::Charpoly => "charpoly",
            Command::Poincare => "poincare",
            Command::Betti => "betti",
            Command::Relations => "relations",
            Command::Verify => "verify",
            Command::Vg => "vg",
            Command::Cddmp => "cddmp",
            Command::Arnold => "arnold",
        }
    }

    fn default_ab(self) -> (usize, usize) {
        match self {
            Command::Vg => (0, 1),
            _ => (1, 1),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    File(String),
    Example(String),
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub source: Source,
    pub ab: Option<(usize, usize)>,
    pub format: Format,
    pub max_degree: Option<usize>,
}

/// Result payload, human-readable lines and checks of one command.
struct Outcome {
    result: Value,
    text: Vec<String>,
    checks: Vec<Check>,
}

fn load(job: &JobSpec) -> Result<(AbelianArrangement, InputDocument), CliError> {
    let arr = match &job.source {
        Source::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let doc = parse_document(&text)?;
            if let Some(ab) = job.ab {
                if ab != (doc.a, doc.b) {
                    return Err(CliError::Usage(format!(
                        "--ab {},{} conflicts with the document's (a,b) = ({},{})",
                        ab.0, ab.1, doc.a, doc.b
                    )));
                }
            }
            doc.to_arrangement()?
        }
        Source::Example(name) => {
            let (a, b) = job.ab.unwrap_or_else(|| job.command.default_ab());
            catalog::builtin(name, a, b)?
        }
    };
    let doc = InputDocument::from_arrangement(&arr)?;
    Ok((arr, doc))
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let (arr, doc) = load(job)?;
    let outcome = match job.command {
        Command::Circuits => circuits(&arr)?,
        Command::Multiplicities => multiplicities(&arr),
        Command::Layers => layers(&arr),
        Command::Charpoly => charpoly(&arr),
        Command::Poincare => poincare(&arr)?,
        Command::Betti => betti(&arr, job.max_degree)?,
        Command::Relations => relations(&arr)?,
        Command::Verify => verify(&arr)?,
        Command::Vg => vg(&arr)?,
        Command::Cddmp => cddmp(&arr)?,
        Command::Arnold => arnold(&arr, &job.source)?,
    };
    Ok(Report {
        command: job.command.name().to_string(),
        input_fingerprint: doc.fingerprint(),
        result: outcome.result,
        checks: outcome.checks,
        text: outcome.text,
    })
}

fn labels(arr: &AbelianArrangement, set: IndexSet) -> Vec<String> {
    set.iter().map(|i| arr.label(i).to_string()).collect()
}

fn set_text(arr: &AbelianArrangement, set: IndexSet) -> String {
    format!("{{{}}}", labels(arr, set).join(","))
}

fn number(x: &BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn coefficients(p: &IntPoly) -> Vec<Value> {
    p.coeffs().iter().map(number).collect()
}

fn poly_counts(p: &IntPoly) -> Vec<usize> {
    p.coeffs()
        .iter()
        .map(|c| usize::try_from(c).unwrap_or(usize::MAX))
        .collect()
}

fn circuits(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let m = arr.matroid();
    let mut result = Vec::new();
    let mut text = Vec::new();
    for c in m.circuits() {
        let support = c.support();
        let signs = m.circuit_signs(&c)?;
        let relation: Vec<Value> = support.iter().map(|i| number(&c.relation[i])).collect();
        result.push(json!({
            "support": labels(arr, support),
            "positive": labels(arr, c.positive),
            "negative": labels(arr, c.negative),
            "relation": relation,
            "signs": signs.iter().map(|(_, s)| *s).collect::<Vec<_>>(),
            "multiplicity": number(&m.multiplicity(support)),
            "central": arr.is_central(support),
        }));
        text.push(format!(
            "{} = {} ⊔ {}  m = {}  signs {:?}{}",
            set_text(arr, support),
            set_text(arr, c.positive),
            set_text(arr, c.negative),
            m.multiplicity(support),
            signs.iter().map(|(_, s)| *s).collect::<Vec<_>>(),
            if arr.is_central(support) {
                ""
            } else {
                "  (not central)"
            }
        ));
    }
    Ok(Outcome {
        result: Value::Array(result),
        text,
        checks: Vec::new(),
    })
}

fn multiplicities(arr: &AbelianArrangement) -> Outcome {
    let m = arr.matroid();
    let mut result = Vec::new();
    let mut text = Vec::new();
    for set in arr.ground_set().subsets() {
        result.push(json!({
            "set": labels(arr, set),
            "rank": m.rank(set),
            "multiplicity": number(&m.multiplicity(set)),
        }));
        text.push(format!(
            "{}  rank {}  m = {}",
            set_text(arr, set),
            m.rank(set),
            m.multiplicity(set)
        ));
    }
    Outcome {
        result: Value::Array(result),
        text,
        checks: Vec::new(),
    }
}

fn rational_list(v: &[num_rational::BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn layers(arr: &AbelianArrangement) -> Outcome {
    let poset = arr.layer_poset();
    let mut result = Vec::new();
    let mut text = Vec::new();
    for (id, layer) in poset.layers().iter().enumerate() {
        let below: Vec<usize> = (0..poset.len())
            .filter(|&x| x != id && poset.le(x, id))
            .collect();
        result.push(json!({
            "id": id,
            "rank": layer.rank,
            "support": labels(arr, layer.support),
            "point": {
                "real": layer.point.real.iter().map(|v| rational_list(v)).collect::<Vec<_>>(),
                "torus": layer.point.torus.iter().map(|v| rational_list(v)).collect::<Vec<_>>(),
            },
            "mobius": number(poset.mobius(id)),
            "contained_in": below,
        }));
        text.push(format!(
            "L{id}  rank {}  support {}  mu = {}",
            layer.rank,
            set_text(arr, layer.support),
            poset.mobius(id)
        ));
    }
    Outcome {
        result: Value::Array(result),
        text,
        checks: Vec::new(),
    }
}

fn charpoly(arr: &AbelianArrangement) -> Outcome {
    let chi = arr.characteristic_polynomial();
    Outcome {
        result: json!({ "coefficients": coefficients(&chi), "polynomial": chi.to_string() }),
        text: vec![format!("chi(t) = {chi}")],
        checks: Vec::new(),
    }
}

fn poincare(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let p = arr.poincare_polynomial()?;
    Ok(Outcome {
        result: json!({ "coefficients": coefficients(&p), "polynomial": p.to_string() }),
        text: vec![format!("P(t) = {p}")],
        checks: Vec::new(),
    })
}

fn betti(arr: &AbelianArrangement, max_degree: Option<usize>) -> Result<Outcome, CliError> {
    let ring = CohomologyRing::new(arr)?;
    let betti = ring.betti_numbers(max_degree)?;
    let p = arr.poincare_polynomial()?;
    let mut expected = poly_counts(&p);
    if let Some(k) = max_degree {
        expected.truncate(k + 1);
        while expected.len() > 1 && expected.last() == Some(&0) {
            expected.pop();
        }
    }
    let check = Check::new(
        "Betti numbers equal Poincare coefficients",
        betti == expected,
        format!("ring {betti:?}, polynomial {expected:?}"),
    );
    Ok(Outcome {
        result: json!({ "betti": betti, "poincare": coefficients(&p) }),
        text: vec![format!("betti {betti:?}")],
        checks: vec![check],
    })
}

fn element_text(arr: &AbelianArrangement, ring: &CohomologyRing, e: &RingElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let a = ring.a();
    let mut out = String::new();
    for (k, (s, c)) in e.terms().iter().enumerate() {
        let c_text = format_rational(c);
        let (sign, mag) = match c_text.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", c_text),
        };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mut factors = Vec::new();
        if mag != "1" {
            factors.push(mag);
        }
        if !s.set.is_empty() {
            factors.push(format!("w[L{};{}]", s.layer, labels(arr, s.set).join(",")));
        }
        for g in s.mono.generators() {
            factors.push(format!("x{}_{}", g / a + 1, g % a + 1));
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        out.push_str(&factors.join("·"));
    }
    out
}

fn relations(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let ring = CohomologyRing::new(arr)?;
    let mut result = Vec::new();
    let mut text = Vec::new();
    for rel in ring.circuit_relations(&CircuitOptions::default())? {
        let body = element_text(arr, &ring, &rel.element);
        result.push(json!({
            "set": labels(arr, rel.set),
            "layer": rel.layer,
            "degree": rel.element.degree(ring.d()),
            "relation": body,
        }));
        text.push(format!(
            "X = {} at L{}:  {body} = 0",
            set_text(arr, rel.set),
            rel.layer
        ));
    }
    Ok(Outcome {
        result: Value::Array(result),
        text,
        checks: Vec::new(),
    })
}

fn verify(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let ring = CohomologyRing::new(arr)?;
    let base = Quotient::new(&ring, &CircuitOptions::default(), None)?;
    let betti = base.betti_numbers();
    let p = arr.poincare_polynomial()?;
    let expected = poly_counts(&p);
    let mut checks = vec![Check::new(
        "Betti numbers equal Poincare coefficients",
        betti == expected,
        format!("ring {betti:?}, polynomial {expected:?}"),
    )];

    let d = arr.d();
    let mut failures = Vec::new();
    for i in 0..arr.len() {
        let del = arr.deletion(i)?.poincare_polynomial()?;
        let res = arr.restriction(i)?.poincare_polynomial()?;
        if p != &del + &res.shift(d) {
            failures.push(arr.label(i).to_string());
        }
    }
    checks.push(Check::new(
        "deletion-restriction",
        failures.is_empty(),
        if failures.is_empty() {
            format!("P = P' + t^{d} P'' for all {} elements", arr.len())
        } else {
            format!("fails for {}", failures.join(","))
        },
    ));

    let stability = base.check_stability();
    checks.push(Check::new(
        "relation span stable under multiplication",
        stability.is_ok(),
        stability.map_or_else(|e| e, |n| format!("{n} products checked")),
    ));

    let mut choice_failures = Vec::new();
    for (name, ik) in [("max", IkChoice::Max), ("second", IkChoice::Nth(1))] {
        let opts = CircuitOptions {
            ik,
            ..Default::default()
        };
        if !base.same_span(&Quotient::new(&ring, &opts, None)?) {
            choice_failures.push(name);
        }
    }
    checks.push(Check::new(
        "i_K choice leaves the relation span unchanged",
        choice_failures.is_empty(),
        choice_failures.join(","),
    ));

    let mut sign_failures = Vec::new();
    let all = CircuitOptions {
        reverse_all: true,
        ..Default::default()
    };
    if !base.same_span(&Quotient::new(&ring, &all, None)?) {
        sign_failures.push("all".to_string());
    }
    for (x, _) in ring.circuit_sites() {
        let opts = CircuitOptions {
            reversed: vec![x],
            ..Default::default()
        };
        if !base.same_span(&Quotient::new(&ring, &opts, None)?) {
            sign_failures.push(set_text(arr, x));
        }
    }
    sign_failures.dedup();
    checks.push(Check::new(
        "circuit orientation leaves the relation span unchanged",
        sign_failures.is_empty(),
        sign_failures.join(" "),
    ));

    let omega_c = omega_circuit_failures(&base)?;
    checks.push(Check::new(
        "omega_C vanishes for unimodular circuits",
        omega_c.is_empty(),
        omega_c
            .iter()
            .map(|c| set_text(arr, *c))
            .collect::<Vec<_>>()
            .join(" "),
    ));

    let text = vec![format!("betti {betti:?}"), format!("P(t) = {p}")];
    Ok(Outcome {
        result: json!({ "betti": betti, "poincare": coefficients(&p) }),
        text,
        checks,
    })
}

fn vg(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let report = verify_vg_presentation(arr)?;
    let chambers: Vec<Value> = report
        .chambers
        .iter()
        .map(|c| {
            let signs: String = c
                .signs
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect();
            json!({ "signs": signs, "witness": rational_list(&c.witness) })
        })
        .collect();
    let text = vec![
        format!("{} chambers", report.chambers.len()),
        format!("monomial span dimension {}", report.span_dimension),
        format!("(-1)^r chi(-1) = {}", report.zaslavsky),
    ];
    Ok(Outcome {
        result: json!({
            "chambers": report.chambers.len(),
            "span_dimension": report.span_dimension,
            "zaslavsky": number(&report.zaslavsky),
            "sign_vectors": chambers,
        }),
        text,
        checks: report.checks,
    })
}

fn cddmp(arr: &AbelianArrangement) -> Result<Outcome, CliError> {
    let ring = CohomologyRing::new(arr)?;
    let quotient = Quotient::new(&ring, &CircuitOptions::default(), None)?;
    let mut result = Vec::new();
    let mut text = Vec::new();
    let mut checks = Vec::new();
    for (x, y) in ring.circuit_sites() {
        let r = cddmp_check(&quotient, x, y)?;
        let site = format!("{} at L{y}", set_text(arr, x));
        result.push(json!({
            "set": labels(arr, x),
            "layer": y,
            "combination_member": r.combination_member,
            "averaged_member": r.averaged_member,
        }));
        text.push(format!(
            "{site}: combination {}, averaged classes {}",
            member(r.combination_member),
            member(r.averaged_member)
        ));
        checks.push(Check::new(
            format!("averaged combination in the ideal, {site}"),
            r.combination_member,
            "",
        ));
        checks.push(Check::new(
            format!("relation in averaged classes in the ideal, {site}"),
            r.averaged_member,
            "",
        ));
    }
    Ok(Outcome {
        result: Value::Array(result),
        text,
        checks,
    })
}

fn member(b: bool) -> &'static str {
    if b {
        "member"
    } else {
        "not a member"
    }
}

fn arnold(arr: &AbelianArrangement, source: &Source) -> Result<Outcome, CliError> {
    let n = match source {
        Source::Example(name) => name
            .strip_prefix("braid:")
            .and_then(|p| p.parse::<usize>().ok()),
        Source::File(_) => None,
    }
    .ok_or_else(|| CliError::Usage("arnold needs --example braid:N".into()))?;
    let report = arnold_relation_check(n, arr.a(), arr.b())?;
    Ok(Outcome {
        result: json!({ "n": n, "betti": report.betti }),
        text: vec![format!("n = {n}  betti {:?}", report.betti)],
        checks: report.checks,
    })
}
