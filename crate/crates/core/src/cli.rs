//! Batch command front end. Each command reads one JSON document,
//! runs the corresponding library pipeline, and emits a deterministic
//! report in text or JSON form. Matrix entries are serialized as
//! decimal strings so arbitrary precision survives the trip; on input
//! both strings and plain JSON integers are accepted.
//!
//! Exit codes: 0 for a completed run (including a NotExtendable
//! verdict), 1 for a mathematical precondition failure, 2 for
//! malformed input.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::cones::{is_normal, saturate_semigroup, semigroup_contains, SemigroupPresentation};
use crate::divisor::{
    build_extension_problem, decide_extension, verify_certificate, AbGroup, DivisorEnvironment,
    ExtensionDecision, ExtensionProblem, GroupHom, DEFAULT_SELECTION_BUDGET,
};
use crate::hilbert::{hilbert_basis, minimal_obstruction, ObstructionWitness};
use crate::intlin::{is_zero_vec, IntMat};
use crate::toric::{classify, LatticePresentation, LocalIrreducibility, ToricProfile};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    HilbertBasis,
    Saturate,
    Obstruction,
    Counterexample,
    DecideExtension,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// One batch job: a command, where to read its document, how to
/// render the report, and an optional selection-search cap.
#[derive(Clone, Debug)]
pub struct Job {
    pub command: Command,
    pub input_path: String,
    pub format: Format,
    pub budget: Option<u64>,
}

/// A failed run, carrying the process exit code and the diagnostic to
/// print on stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliFailure {
    pub exit_code: i32,
    pub message: String,
}

impl From<Error> for CliFailure {
    fn from(err: Error) -> Self {
        CliFailure {
            exit_code: if err.is_input_error() { 2 } else { 1 },
            message: err.to_string(),
        }
    }
}

/// Execute a job: read the document (`-` means stdin), resolve the
/// budget, dispatch.
pub fn run(job: &Job) -> Result<String, CliFailure> {
    let text = if job.input_path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| CliFailure {
            exit_code: 2,
            message: format!("cannot read stdin: {e}"),
        })?;
        buf
    } else {
        std::fs::read_to_string(&job.input_path).map_err(|e| CliFailure {
            exit_code: 2,
            message: format!("cannot read {}: {e}", job.input_path),
        })?
    };
    let budget = resolve_budget(job.budget)?;
    dispatch(job.command, &text, job.format, budget)
}

/// The selection-search cap: the `TORIC_BUDGET` environment variable
/// wins over the flag, which wins over the default.
pub fn resolve_budget(flag: Option<u64>) -> Result<u64, CliFailure> {
    if let Ok(s) = std::env::var("TORIC_BUDGET") {
        return s.trim().parse::<u64>().map_err(|_| CliFailure {
            exit_code: 2,
            message: format!("TORIC_BUDGET must be a nonnegative integer, got {s:?}"),
        });
    }
    Ok(flag.unwrap_or(DEFAULT_SELECTION_BUDGET))
}

/// Run a command on an already-read document.
pub fn dispatch(
    command: Command,
    document: &str,
    format: Format,
    budget: u64,
) -> Result<String, CliFailure> {
    let doc = parse_document(document)?;
    let report = match command {
        Command::Classify => cmd_classify(&doc, format)?,
        Command::HilbertBasis => cmd_hilbert_basis(&doc, format)?,
        Command::Saturate => cmd_saturate(&doc, format)?,
        Command::Obstruction => cmd_obstruction(&doc, format)?,
        Command::Counterexample => cmd_counterexample(&doc, format)?,
        Command::DecideExtension => cmd_decide_extension(&doc, format, budget)?,
    };
    Ok(report)
}

// input parsing

fn parse_document(text: &str) -> Result<Map<String, Value>, Error> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("malformed document: {e}")))?;
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(Error::Invalid("document must be a JSON object".into())),
    }
}

fn field<'a>(doc: &'a Map<String, Value>, name: &str) -> Result<&'a Value, Error> {
    doc.get(name)
        .ok_or_else(|| Error::Invalid(format!("missing field {name:?}")))
}

fn bigint_from(v: &Value, ctx: &str) -> Result<BigInt, Error> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("{ctx}: {s:?} is not an integer"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Invalid(format!("{ctx}: {n} is not an integer")))
            }
        }
        _ => Err(Error::Invalid(format!(
            "{ctx}: expected an integer or decimal string"
        ))),
    }
}

fn usize_from(v: &Value, ctx: &str) -> Result<usize, Error> {
    bigint_from(v, ctx)?
        .to_usize()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: value out of range")))
}

fn int_vec(v: &Value, ctx: &str) -> Result<Vec<BigInt>, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected an array")))?;
    arr.iter().map(|x| bigint_from(x, ctx)).collect()
}

fn int_matrix(v: &Value, ctx: &str) -> Result<IntMat, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected an array of rows")))?;
    let mut rows = Vec::with_capacity(arr.len());
    for (i, row) in arr.iter().enumerate() {
        rows.push(int_vec(row, &format!("{ctx}[{i}]"))?);
    }
    if let Some(first) = rows.first() {
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid(format!("{ctx}: rows have unequal lengths")));
        }
    }
    if rows.is_empty() {
        return Ok(IntMat::zeros(0, 0));
    }
    Ok(IntMat::from_rows(rows))
}

fn parse_group(v: &Value, ctx: &str) -> Result<AbGroup, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected an object")))?;
    let free_rank = usize_from(field_in(obj, "free_rank", ctx)?, &format!("{ctx}.free_rank"))?;
    let torsion = match obj.get("torsion") {
        Some(t) => int_vec(t, &format!("{ctx}.torsion"))?,
        None => Vec::new(),
    };
    AbGroup::new(free_rank, torsion)
}

fn field_in<'a>(obj: &'a Map<String, Value>, name: &str, ctx: &str) -> Result<&'a Value, Error> {
    obj.get(name)
        .ok_or_else(|| Error::Invalid(format!("{ctx}: missing field {name:?}")))
}

fn string_vec(v: &Value, ctx: &str) -> Result<Vec<String>, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("{ctx}: expected an array")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::Invalid(format!("{ctx}: expected strings")))
        })
        .collect()
}

fn presentation_from(doc: &Map<String, Value>) -> Result<LatticePresentation, Error> {
    LatticePresentation::new(int_matrix(field(doc, "A")?, "A")?)
}

// rendering

fn tuple(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn okfail(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn json_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn json_matrix(m: &IntMat) -> Value {
    Value::Array((0..m.rows()).map(|i| json_vec(&m.row_vec(i))).collect())
}

fn json_group(g: &AbGroup) -> Value {
    let mut obj = Map::new();
    obj.insert("free_rank".into(), Value::from(g.free_rank() as u64));
    obj.insert("torsion".into(), json_vec(g.torsion()));
    Value::Object(obj)
}

fn group_desc(g: &AbGroup) -> String {
    if g.dim() == 0 {
        return "trivial".into();
    }
    let mut parts = Vec::new();
    match g.free_rank() {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    for t in g.torsion() {
        parts.push(format!("Z/{t}"));
    }
    parts.join(" x ")
}

fn finish_json(obj: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(obj))
        .expect("report serialization cannot fail");
    s.push('\n');
    s
}

fn basis_columns(m: &IntMat) -> Vec<Vec<BigInt>> {
    (0..m.cols()).map(|j| m.col_vec(j)).collect()
}

fn push_columns(out: &mut String, header: &str, cols: &[Vec<BigInt>]) {
    let _ = writeln!(out, "{header} ({}):", cols.len());
    for c in cols {
        let _ = writeln!(out, "  {}", tuple(c));
    }
}

// commands

fn cmd_classify(doc: &Map<String, Value>, format: Format) -> Result<String, Error> {
    let p = presentation_from(doc)?;
    let profile = classify(&p);
    let a = p.relations();
    let b = &profile.basis.matrix;
    let check_ab = a.mul(b).is_zero();
    let check_be = b.mul(&profile.kernel).is_zero();
    match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "presentation: {} relation(s) on {} coordinate(s)",
                a.rows(),
                a.cols()
            );
            let _ = writeln!(out, "prime: {}", yesno(profile.is_prime));
            let _ = writeln!(out, "contains origin: {}", yesno(profile.contains_origin));
            match &profile.positive_vector {
                Some(v) => {
                    let _ = writeln!(out, "positive kernel vector: {}", tuple(v));
                }
                None => {
                    let _ = writeln!(out, "positive kernel vector: none");
                }
            }
            let _ = writeln!(out, "variety dimension: {}", profile.dimension);
            push_columns(&mut out, "hilbert basis columns", &basis_columns(b));
            push_columns(
                &mut out,
                "kernel basis columns",
                &basis_columns(&profile.kernel),
            );
            let _ = writeln!(
                out,
                "normalization is affine space: {}",
                yesno(profile.normalization_is_affine_space)
            );
            let irr = match &profile.local_irreducibility {
                LocalIrreducibility::Irreducible => "yes".to_string(),
                LocalIrreducibility::NotIrreducible { column_gcds } => {
                    let parts: Vec<String> = column_gcds
                        .iter()
                        .map(|(c, g)| format!("column {c} gcd {g}"))
                        .collect();
                    format!("no ({})", parts.join("; "))
                }
                LocalIrreducibility::NotComputed => "not computed".to_string(),
            };
            let _ = writeln!(out, "locally irreducible: {irr}");
            let _ = writeln!(out, "check A*B = 0: {}", okfail(check_ab));
            let _ = writeln!(out, "check B*E = 0: {}", okfail(check_be));
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("is_prime".into(), Value::Bool(profile.is_prime));
            obj.insert("contains_origin".into(), Value::Bool(profile.contains_origin));
            obj.insert(
                "positive_kernel_vector".into(),
                match &profile.positive_vector {
                    Some(v) => json_vec(v),
                    None => Value::Null,
                },
            );
            obj.insert("dimension".into(), Value::from(profile.dimension as u64));
            obj.insert("B".into(), json_matrix(b));
            obj.insert("E".into(), json_matrix(&profile.kernel));
            obj.insert(
                "normalization_is_affine_space".into(),
                Value::Bool(profile.normalization_is_affine_space),
            );
            let (irr, gcds) = match &profile.local_irreducibility {
                LocalIrreducibility::Irreducible => (Value::Bool(true), Value::Null),
                LocalIrreducibility::NotIrreducible { column_gcds } => (
                    Value::Bool(false),
                    Value::Array(
                        column_gcds
                            .iter()
                            .map(|(c, g)| {
                                Value::Array(vec![
                                    Value::from(*c as u64),
                                    Value::String(g.to_string()),
                                ])
                            })
                            .collect(),
                    ),
                ),
                LocalIrreducibility::NotComputed => (Value::Null, Value::Null),
            };
            obj.insert("locally_irreducible".into(), irr);
            obj.insert("column_gcds".into(), gcds);
            let mut checks = Map::new();
            checks.insert("A*B = 0".into(), Value::String(okfail(check_ab).into()));
            checks.insert("B*E = 0".into(), Value::String(okfail(check_be).into()));
            obj.insert("checks".into(), Value::Object(checks));
            Ok(finish_json(obj))
        }
    }
}

fn cmd_hilbert_basis(doc: &Map<String, Value>, format: Format) -> Result<String, Error> {
    let p = presentation_from(doc)?;
    let basis = hilbert_basis(&p);
    let check_ab = p.relations().mul(&basis.matrix).is_zero();
    match format {
        Format::Text => {
            let mut out = String::new();
            push_columns(
                &mut out,
                "hilbert basis columns",
                &basis_columns(&basis.matrix),
            );
            let _ = writeln!(out, "check A*B = 0: {}", okfail(check_ab));
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("B".into(), json_matrix(&basis.matrix));
            let mut checks = Map::new();
            checks.insert("A*B = 0".into(), Value::String(okfail(check_ab).into()));
            obj.insert("checks".into(), Value::Object(checks));
            Ok(finish_json(obj))
        }
    }
}

fn cmd_saturate(doc: &Map<String, Value>, format: Format) -> Result<String, Error> {
    let m = int_matrix(field(doc, "A")?, "A")?;
    let s = SemigroupPresentation::from_rows(&m)?;
    let sat = saturate_semigroup(&s)?;
    let normal = is_normal(&s)?;
    let contained = s
        .generators()
        .iter()
        .all(|g| semigroup_contains(&sat, g));
    match format {
        Format::Text => {
            let mut out = String::new();
            push_columns(&mut out, "generators", s.generators());
            push_columns(&mut out, "saturation", sat.generators());
            let _ = writeln!(out, "already saturated: {}", yesno(normal));
            let _ = writeln!(
                out,
                "check saturation contains generators: {}",
                okfail(contained)
            );
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert(
                "generators".into(),
                Value::Array(s.generators().iter().map(|g| json_vec(g)).collect()),
            );
            obj.insert(
                "saturation".into(),
                Value::Array(sat.generators().iter().map(|g| json_vec(g)).collect()),
            );
            obj.insert("already_saturated".into(), Value::Bool(normal));
            let mut checks = Map::new();
            checks.insert(
                "saturation contains generators".into(),
                Value::String(okfail(contained).into()),
            );
            obj.insert("checks".into(), Value::Object(checks));
            Ok(finish_json(obj))
        }
    }
}

fn witness_checks(basis_matrix: &IntMat, w: &ObstructionWitness) -> (bool, bool, bool) {
    let bl = basis_matrix.mul_vec(&w.lesser) == w.value;
    let bg = basis_matrix.mul_vec(&w.greater) == w.value;
    let disjoint = w
        .lesser
        .iter()
        .zip(&w.greater)
        .all(|(a, b)| a.is_zero() || b.is_zero());
    (bl, bg, disjoint)
}

fn cmd_obstruction(doc: &Map<String, Value>, format: Format) -> Result<String, Error> {
    let p = presentation_from(doc)?;
    let basis = hilbert_basis(&p);
    let w = minimal_obstruction(&basis).ok_or(Error::KerBTrivial)?;
    let (bl, bg, disjoint) = witness_checks(&basis.matrix, &w);
    match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "minimal obstruction value: {}", tuple(&w.value));
            let _ = writeln!(out, "lesser representation: {}", tuple(&w.lesser));
            let _ = writeln!(out, "greater representation: {}", tuple(&w.greater));
            let _ = writeln!(
                out,
                "lesser split: unit {} + rest {}",
                tuple(&w.lesser_split.0),
                tuple(&w.lesser_split.1)
            );
            let _ = writeln!(
                out,
                "greater split: unit {} + rest {}",
                tuple(&w.greater_split.0),
                tuple(&w.greater_split.1)
            );
            let _ = writeln!(out, "check B*lesser = value: {}", okfail(bl));
            let _ = writeln!(out, "check B*greater = value: {}", okfail(bg));
            let _ = writeln!(out, "check disjoint supports: {}", okfail(disjoint));
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("value".into(), json_vec(&w.value));
            obj.insert("lesser".into(), json_vec(&w.lesser));
            obj.insert("greater".into(), json_vec(&w.greater));
            let mut ls = Map::new();
            ls.insert("unit".into(), json_vec(&w.lesser_split.0));
            ls.insert("rest".into(), json_vec(&w.lesser_split.1));
            obj.insert("lesser_split".into(), Value::Object(ls));
            let mut gs = Map::new();
            gs.insert("unit".into(), json_vec(&w.greater_split.0));
            gs.insert("rest".into(), json_vec(&w.greater_split.1));
            obj.insert("greater_split".into(), Value::Object(gs));
            let mut checks = Map::new();
            checks.insert("B*lesser = value".into(), Value::String(okfail(bl).into()));
            checks.insert("B*greater = value".into(), Value::String(okfail(bg).into()));
            checks.insert(
                "disjoint supports".into(),
                Value::String(okfail(disjoint).into()),
            );
            obj.insert("checks".into(), Value::Object(checks));
            Ok(finish_json(obj))
        }
    }
}

fn problem_document(problem: &ExtensionProblem, a: &IntMat) -> Map<String, Value> {
    let env = problem.env();
    let mut obj = Map::new();
    obj.insert("A".into(), json_matrix(a));
    obj.insert(
        "primes".into(),
        Value::Array(
            env.primes()
                .iter()
                .map(|p| Value::String(p.clone()))
                .collect(),
        ),
    );
    obj.insert(
        "classes".into(),
        Value::Array(env.classes().iter().map(|c| json_vec(c)).collect()),
    );
    obj.insert("H_S".into(), json_group(env.class_group()));
    obj.insert("H_X".into(), json_group(env.ambient_class_group()));
    obj.insert("rho".into(), json_matrix(env.restriction().matrix()));
    obj.insert("V".into(), json_matrix(problem.divisor()));
    obj
}

fn cmd_counterexample(doc: &Map<String, Value>, format: Format) -> Result<String, Error> {
    let p = presentation_from(doc)?;
    let profile = classify(&p);
    let problem = crate::divisor::generate_counterexample(&profile)?;
    let witness = minimal_obstruction(&profile.basis).expect("problem construction found one");
    let a = p.relations();
    let cols_ok = (0..problem.divisor().cols())
        .all(|g| is_zero_vec(&a.mul_vec(&problem.divisor().col_vec(g))));
    match format {
        Format::Text => {
            let env = problem.env();
            let mut out = String::new();
            let _ = writeln!(out, "primes: {}", env.primes().join(" "));
            let classes: Vec<String> = env.classes().iter().map(|c| tuple(c)).collect();
            let _ = writeln!(out, "classes: {}", classes.join(" "));
            let _ = writeln!(out, "class group: {}", group_desc(env.class_group()));
            let _ = writeln!(
                out,
                "ambient class group: {}",
                group_desc(env.ambient_class_group())
            );
            let _ = writeln!(out, "divisor columns:");
            for (g, name) in env.primes().iter().enumerate() {
                let _ = writeln!(out, "  {name}: {}", tuple(&problem.divisor().col_vec(g)));
            }
            let _ = writeln!(out, "obstruction value: {}", tuple(&witness.value));
            let _ = writeln!(out, "check columns in ker A: {}", okfail(cols_ok));
            Ok(out)
        }
        Format::Json => {
            let mut obj = problem_document(&problem, a);
            let mut wobj = Map::new();
            wobj.insert("value".into(), json_vec(&witness.value));
            wobj.insert("lesser".into(), json_vec(&witness.lesser));
            wobj.insert("greater".into(), json_vec(&witness.greater));
            obj.insert("witness".into(), Value::Object(wobj));
            Ok(finish_json(obj))
        }
    }
}

fn parse_problem(doc: &Map<String, Value>) -> Result<(ExtensionProblem, ToricProfile), Error> {
    let p = presentation_from(doc)?;
    let profile = classify(&p);
    let h_s = parse_group(field(doc, "H_S")?, "H_S")?;
    let h_x = parse_group(field(doc, "H_X")?, "H_X")?;
    let rho = GroupHom::new(h_x, h_s, int_matrix(field(doc, "rho")?, "rho")?)?;
    let primes = string_vec(field(doc, "primes")?, "primes")?;
    let mut classes = Vec::new();
    let class_field = field(doc, "classes")?
        .as_array()
        .ok_or_else(|| Error::Invalid("classes: expected an array".into()))?;
    for (i, c) in class_field.iter().enumerate() {
        classes.push(int_vec(c, &format!("classes[{i}]"))?);
    }
    let env = DivisorEnvironment::new(primes, classes, rho, profile.clone())?;
    let divisor = int_matrix(field(doc, "V")?, "V")?;
    Ok((build_extension_problem(env, divisor)?, profile))
}

fn cmd_decide_extension(
    doc: &Map<String, Value>,
    format: Format,
    budget: u64,
) -> Result<String, Error> {
    let (problem, profile) = parse_problem(doc)?;
    let decision = decide_extension(&problem, budget)?;
    match decision {
        ExtensionDecision::Extendable {
            factorization,
            class_witness,
        } => {
            let b = &profile.basis.matrix;
            let check_bu = b.mul(&factorization) == *problem.divisor();
            let check_classes = verify_certificate(&problem, &factorization, &class_witness);
            match format {
                Format::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "verdict: Extendable");
                    let _ = writeln!(out, "factorization columns:");
                    for (g, name) in problem.env().primes().iter().enumerate() {
                        let _ = writeln!(out, "  {name}: {}", tuple(&factorization.col_vec(g)));
                    }
                    if class_witness.is_empty() {
                        let _ = writeln!(out, "class witness: none needed");
                    } else {
                        let parts: Vec<String> =
                            class_witness.iter().map(|h| tuple(h)).collect();
                        let _ = writeln!(out, "class witness: {}", parts.join(" "));
                    }
                    let _ = writeln!(out, "check B*U = V: {}", okfail(check_bu));
                    let _ = writeln!(out, "check class equation: {}", okfail(check_classes));
                    Ok(out)
                }
                Format::Json => {
                    let mut obj = Map::new();
                    obj.insert("verdict".into(), Value::String("Extendable".into()));
                    obj.insert("U".into(), json_matrix(&factorization));
                    obj.insert(
                        "eta".into(),
                        Value::Array(class_witness.iter().map(|h| json_vec(h)).collect()),
                    );
                    let mut checks = Map::new();
                    checks.insert("B*U = V".into(), Value::String(okfail(check_bu).into()));
                    checks.insert(
                        "class equation".into(),
                        Value::String(okfail(check_classes).into()),
                    );
                    obj.insert("checks".into(), Value::Object(checks));
                    Ok(finish_json(obj))
                }
            }
        }
        ExtensionDecision::NotExtendable {
            selections_examined,
        } => match format {
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "verdict: NotExtendable");
                let _ = writeln!(out, "selections examined: {selections_examined}");
                Ok(out)
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("verdict".into(), Value::String("NotExtendable".into()));
                obj.insert(
                    "selections_examined".into(),
                    Value::String(selections_examined.to_string()),
                );
                Ok(finish_json(obj))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(command: Command, doc: &str) -> String {
        dispatch(command, doc, Format::Text, DEFAULT_SELECTION_BUDGET).unwrap()
    }

    fn json(command: Command, doc: &str) -> String {
        dispatch(command, doc, Format::Json, DEFAULT_SELECTION_BUDGET).unwrap()
    }

    #[test]
    fn classify_cone_report() {
        let doc = r#"{"A": [[1, 1, -2]]}"#;
        let out = text(Command::Classify, doc);
        assert!(out.contains("prime: yes"));
        assert!(out.contains("contains origin: yes"));
        assert!(out.contains("(2, 0, 1)"));
        assert!(out.contains("(0, 2, 1)"));
        assert!(out.contains("(1, 1, 1)"));
        assert!(out.contains("(1, 1, -2)"));
        assert!(out.contains("normalization is affine space: no"));
        assert!(out.contains("check A*B = 0: ok"));
        assert!(out.contains("check B*E = 0: ok"));
        let j = json(Command::Classify, doc);
        assert!(j.contains("\"is_prime\": true"));
        assert!(j.contains("\"dimension\": 2"));
    }

    #[test]
    fn string_and_number_entries_agree() {
        let a = text(Command::Classify, r#"{"A": [[1, 1, -2]]}"#);
        let b = text(Command::Classify, r#"{"A": [["1", "1", "-2"]]}"#);
        assert_eq!(a, b);
    }

    #[test]
    fn reports_are_deterministic() {
        let doc = r#"{"A": [[2, 1, -2]]}"#;
        for command in [Command::Classify, Command::HilbertBasis] {
            assert_eq!(json(command, doc), json(command, doc));
            assert_eq!(text(command, doc), text(command, doc));
        }
    }

    #[test]
    fn hilbert_basis_exact_text() {
        let out = text(Command::HilbertBasis, r#"{"A": [[1, 1, -2]]}"#);
        assert_eq!(
            out,
            "hilbert basis columns (3):\n  (2, 0, 1)\n  (0, 2, 1)\n  (1, 1, 1)\ncheck A*B = 0: ok\n"
        );
    }

    #[test]
    fn saturate_umbrella_rows() {
        let out = text(Command::Saturate, r#"{"A": [[1, 0], [0, 2], [1, 1]]}"#);
        assert!(out.contains("already saturated: no"));
        assert!(out.contains("saturation (2):\n  (1, 0)\n  (0, 1)\n"));
        assert!(out.contains("check saturation contains generators: ok"));
    }

    #[test]
    fn obstruction_reports_the_cone_witness() {
        let out = text(Command::Obstruction, r#"{"A": [[1, 1, -2]]}"#);
        assert!(out.contains("minimal obstruction value: (2, 2, 2)"));
        assert!(out.contains("lesser representation: (0, 0, 2)"));
        assert!(out.contains("greater representation: (1, 1, 0)"));
        assert!(out.contains("check disjoint supports: ok"));
    }

    #[test]
    fn obstruction_fails_on_trivial_kernel() {
        let err = dispatch(
            Command::Obstruction,
            r#"{"A": [[2, 1, -2]]}"#,
            Format::Text,
            DEFAULT_SELECTION_BUDGET,
        )
        .unwrap_err();
        assert_eq!(err.exit_code, 1);
        assert!(err.message.contains("ker B trivial"));
    }

    #[test]
    fn counterexample_pipes_into_decide_extension() {
        let problem = json(Command::Counterexample, r#"{"A": [[1, 1, -2]]}"#);
        let verdict = text(Command::DecideExtension, &problem);
        assert!(verdict.contains("verdict: NotExtendable"));
        assert!(verdict.contains("selections examined: 1"));
        let jv = json(Command::DecideExtension, &problem);
        assert!(jv.contains("\"verdict\": \"NotExtendable\""));
        assert!(jv.contains("\"selections_examined\": \"1\""));
    }

    #[test]
    fn decide_extension_reports_certificates() {
        let doc = r#"{
            "A": [[1, 1, -2]],
            "primes": ["Z1", "Z2", "W1", "W2"],
            "classes": [["-1"], ["-1"], ["1"], ["1"]],
            "H_S": {"free_rank": 1, "torsion": []},
            "H_X": {"free_rank": 1, "torsion": []},
            "rho": [["1"]],
            "V": [[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 1, 1]]
        }"#;
        let out = text(Command::DecideExtension, doc);
        assert!(out.contains("verdict: Extendable"));
        assert!(out.contains("class witness: (-1)"));
        assert!(out.contains("check B*U = V: ok"));
        assert!(out.contains("check class equation: ok"));
    }

    #[test]
    fn malformed_documents_exit_two() {
        for doc in [
            "not json",
            "[1, 2]",
            r#"{"B": [[1]]}"#,
            r#"{"A": [[1, 1], [1]]}"#,
            r#"{"A": [[1.5, 1]]}"#,
            r#"{"A": [["x", "1"]]}"#,
        ] {
            let err = dispatch(
                Command::Classify,
                doc,
                Format::Text,
                DEFAULT_SELECTION_BUDGET,
            )
            .unwrap_err();
            assert_eq!(err.exit_code, 2, "document {doc:?}");
        }
    }

    #[test]
    fn budget_flag_reaches_the_search() {
        let doc = r#"{
            "A": [[1, 1, -2]],
            "primes": ["P", "Q"],
            "classes": [["1"], ["1"]],
            "H_S": {"free_rank": 1, "torsion": []},
            "H_X": {"free_rank": 0, "torsion": []},
            "rho": [[]],
            "V": [[2, 2], [2, 2], [2, 2]]
        }"#;
        let err = dispatch(Command::DecideExtension, doc, Format::Text, 2).unwrap_err();
        assert_eq!(err.exit_code, 1);
        assert!(err.message.contains("search budget exceeded"));
        let ok = dispatch(Command::DecideExtension, doc, Format::Text, 10).unwrap();
        assert!(ok.contains("verdict: NotExtendable"));
        assert!(ok.contains("selections examined: 4"));
    }
}
