//! Subcommand dispatch: one request in, one JSON document and an exit code out.

use std::path::PathBuf;

use apolar_core::antipolar::{
    antipolar, forbidden_certificate, forbidden_scan_quartic, GENERICITY_ASSUMPTION,
};
use apolar_core::apolarity::{
    binary_apolar_generators, binary_rank_complex, catalecticant, rs_witness_binary,
    tangential_membership_binary,
};
use apolar_core::exactalg::format_rational;
use apolar_core::hyperdet::{
    bergqvist_real_rank, format_pencil_form, hyperdet_222, hyperdet_2222, hyperdet_2nn,
    pencil_form, Pencil, Tensor2222,
};
use apolar_core::realcert::{
    omega_real_zero_exists, rank_certify, signature, typical_rank_sample,
    typical_rank_sample_with_threads,
};
use apolar_core::{ExactMatrix, GradedForm, Multidegree, Rational};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::parse::{parse_form_in, parse_number, ParseError, RingSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest number of terms written inline for symbolic results; the rest go to `--full-out`.
pub const DEFAULT_TERM_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Catalecticant,
    Antipolar,
    RsMembership,
    ForbiddenScan,
    Signature,
    RankCertify,
    BoundarySide,
    SampleTypical,
    PencilForm,
    Hyperdet,
    Bergqvist,
    Hyperdet2222,
    BinaryRank,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Catalecticant,
        Command::Antipolar,
        Command::RsMembership,
        Command::ForbiddenScan,
        Command::Signature,
        Command::RankCertify,
        Command::BoundarySide,
        Command::SampleTypical,
        Command::PencilForm,
        Command::Hyperdet,
        Command::Bergqvist,
        Command::Hyperdet2222,
        Command::BinaryRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Catalecticant => "catalecticant",
            Command::Antipolar => "antipolar",
            Command::RsMembership => "rs-membership",
            Command::ForbiddenScan => "forbidden-scan",
            Command::Signature => "signature",
            Command::RankCertify => "rank-certify",
            Command::BoundarySide => "boundary-side",
            Command::SampleTypical => "sample-typical",
            Command::PencilForm => "pencil-form",
            Command::Hyperdet => "hyperdet",
            Command::Bergqvist => "bergqvist",
            Command::Hyperdet2222 => "hyperdet2222",
            Command::BinaryRank => "binary-rank",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    fn default_ring(self) -> Option<RingSpec> {
        match self {
            Command::ForbiddenScan => Some(RingSpec::Ternary),
            Command::RankCertify | Command::BoundarySide => Some(RingSpec::P1xP1),
            Command::BinaryRank => Some(RingSpec::Binary),
            _ => None,
        }
    }
}

/// A fully read request. Text-valued options are validated by [`run`] so that malformed
/// values produce a schema error document rather than a usage message.
#[derive(Clone, Debug, Default)]
pub struct JobRequest {
    pub command: Option<Command>,
    /// Input text: a form in the expression syntax, or JSON for matrices, pencils and tensors.
    pub input: Option<String>,
    /// Where the input came from (`--expr` or a file path), echoed in the output.
    pub input_source: Option<String>,
    pub b: Option<String>,
    pub d: Option<u32>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub point: Option<String>,
    pub threads: Option<usize>,
    pub ring: Option<String>,
    pub full_out: Option<PathBuf>,
    pub term_limit: Option<usize>,
}

impl JobRequest {
    pub fn new(command: Command) -> Self {
        JobRequest { command: Some(command), ..Default::default() }
    }

    pub fn expr(mut self, text: &str) -> Self {
        self.input = Some(text.to_string());
        self.input_source = Some("--expr".into());
        self
    }

    pub fn with_b(mut self, b: &str) -> Self {
        self.b = Some(b.to_string());
        self
    }

    pub fn with_point(mut self, p: &str) -> Self {
        self.point = Some(p.to_string());
        self
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] apolar_core::Error),
}

impl CliError {
    /// 1 for parse, schema and i/o errors; 2 for violated mathematical preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(ParseError::Syntax { .. }) => "syntax",
            CliError::Parse(ParseError::Form(e)) => e.kind(),
            CliError::Schema(_) => "schema",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.kind(),
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Parse(p) = self {
            if let Some(off) = p.offset() {
                v["offset"] = json!(off);
            }
        }
        v
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, PartialEq)]
pub struct JobOutput {
    pub document: Value,
    pub exit_code: i32,
}

impl JobOutput {
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("serialisable");
        s.push('\n');
        s
    }
}

struct Outcome {
    result: Value,
    evidence: Value,
    assumptions: Vec<String>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome { result, evidence: json!({}), assumptions: Vec::new() }
    }

    fn evidence(mut self, evidence: Value) -> Self {
        self.evidence = evidence;
        self
    }

    fn assume(mut self, a: &str) -> Self {
        self.assumptions.push(a.to_string());
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn echo(job: &JobRequest) -> Value {
    let mut m = Map::new();
    if let Some(src) = &job.input_source {
        m.insert("source".into(), json!(src));
    }
    if let Some(text) = &job.input {
        m.insert("text".into(), json!(text.trim()));
    }
    for (key, val) in [("B", &job.b), ("point", &job.point), ("ring", &job.ring)] {
        if let Some(v) = val {
            m.insert(key.into(), json!(v));
        }
    }
    if let Some(d) = job.d {
        m.insert("d".into(), json!(d));
    }
    if let Some(s) = job.seed {
        m.insert("seed".into(), json!(s));
    }
    if let Some(n) = job.samples {
        m.insert("samples".into(), json!(n));
    }
    Value::Object(m)
}

/// Runs one request. Never panics on bad input; every failure becomes an error document.
pub fn run(job: &JobRequest) -> JobOutput {
    let mut doc = json!({
        "tool": "apolar",
        "version": VERSION,
        "command": job.command.map(Command::name),
        "input": echo(job),
    });
    match dispatch(job) {
        Ok(out) => {
            doc["status"] = json!("ok");
            doc["result"] = out.result;
            doc["evidence"] = out.evidence;
            doc["assumptions"] = json!(out.assumptions);
            JobOutput { document: doc, exit_code: 0 }
        }
        Err(e) => {
            doc["status"] = json!("error");
            doc["error"] = e.to_json();
            JobOutput { document: doc, exit_code: e.exit_code() }
        }
    }
}

fn dispatch(job: &JobRequest) -> CliResult<Outcome> {
    let cmd = job
        .command
        .ok_or_else(|| CliError::Schema("no subcommand given".into()))?;
    match cmd {
        Command::Catalecticant => cmd_catalecticant(job),
        Command::Antipolar => cmd_antipolar(job),
        Command::RsMembership => cmd_rs_membership(job),
        Command::ForbiddenScan => cmd_forbidden_scan(job),
        Command::Signature => cmd_signature(job),
        Command::RankCertify => cmd_rank_certify(job),
        Command::BoundarySide => cmd_boundary_side(job),
        Command::SampleTypical => cmd_sample_typical(job),
        Command::PencilForm => cmd_pencil_form(job),
        Command::Hyperdet => cmd_hyperdet(job),
        Command::Bergqvist => cmd_bergqvist(job),
        Command::Hyperdet2222 => cmd_hyperdet2222(job),
        Command::BinaryRank => cmd_binary_rank(job),
    }
}

fn input_text(job: &JobRequest) -> CliResult<&str> {
    job.input
        .as_deref()
        .filter(|t| !t.trim().is_empty())
        .ok_or_else(|| CliError::Schema("missing input: pass --expr TEXT or --input FILE".into()))
}

fn form(job: &JobRequest) -> CliResult<GradedForm> {
    let spec = match &job.ring {
        Some(r) => Some(r.parse::<RingSpec>().map_err(CliError::Schema)?),
        None => job.command.and_then(Command::default_ring),
    };
    Ok(parse_form_in(input_text(job)?, spec)?)
}

fn json_input(job: &JobRequest) -> CliResult<Value> {
    serde_json::from_str(input_text(job)?)
        .map_err(|e| CliError::Schema(format!("input is not valid JSON: {e}")))
}

fn parse_list<T>(text: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|p| f(p.trim()).ok_or_else(|| CliError::Schema(format!("bad {what} entry {p:?}"))))
        .collect()
}

/// `--B`, defaulting to half the multidegree when every part is even.
fn multidegree(job: &JobRequest, f: &GradedForm) -> CliResult<Multidegree> {
    match &job.b {
        Some(text) => Ok(Multidegree(parse_list(text, "--B", |s| s.parse().ok())?)),
        None => {
            let parts = f.degree().parts();
            if parts.iter().all(|k| k % 2 == 0) {
                Ok(Multidegree(parts.iter().map(|k| k / 2).collect()))
            } else {
                Err(CliError::Schema(format!(
                    "--B is required for a form of multidegree {}",
                    f.degree()
                )))
            }
        }
    }
}

fn point(job: &JobRequest) -> CliResult<Vec<Rational>> {
    let text = job
        .point
        .as_deref()
        .ok_or_else(|| CliError::Schema("--point is required".into()))?;
    parse_list(text, "--point", parse_number)
}

fn rational_value(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_number(s),
        Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
        _ => None,
    }
}

fn matrix_value(v: &Value, name: &str) -> CliResult<ExactMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Schema(format!("{name} must be an array of rows")))?;
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| CliError::Schema(format!("{name}: each row must be an array")))?
                .iter()
                .map(|x| {
                    rational_value(x).ok_or_else(|| {
                        CliError::Schema(format!("{name}: entry {x} is not an integer or \"p/q\""))
                    })
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;
    if rows.is_empty() {
        return Err(CliError::Schema(format!("{name} is empty")));
    }
    ExactMatrix::from_rows(rows).map_err(|e| CliError::Schema(format!("{name}: {e}")))
}

fn matrix_input(job: &JobRequest) -> CliResult<ExactMatrix> {
    let v = json_input(job)?;
    match v.get("matrix") {
        Some(m) => matrix_value(m, "matrix"),
        None => matrix_value(&v, "matrix"),
    }
}

fn pencil_input(job: &JobRequest) -> CliResult<Pencil> {
    let v = json_input(job)?;
    let get = |k: &str| v.get(k).ok_or_else(|| CliError::Schema(format!("pencil needs {k:?}")));
    let t1 = matrix_value(get("T1")?, "T1")?;
    let t2 = matrix_value(get("T2")?, "T2")?;
    if let Some(n) = v.get("n") {
        if n.as_u64() != Some(t1.rows() as u64) {
            return Err(CliError::Schema(format!("n = {n} does not match T1 with {} rows", t1.rows())));
        }
    }
    let symmetric = match v.get("symmetric") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(other) => return Err(CliError::Schema(format!("symmetric must be a boolean, got {other}"))),
    };
    let shapes_ok = t1.is_square() && t2.rows() == t1.rows() && t2.cols() == t1.cols();
    if !shapes_ok {
        return Err(CliError::Schema(format!(
            "slices must be square of one size, got {}x{} and {}x{}",
            t1.rows(),
            t1.cols(),
            t2.rows(),
            t2.cols()
        )));
    }
    Ok(if symmetric { Pencil::new_symmetric(t1, t2)? } else { Pencil::new(t1, t2)? })
}

fn tensor_input(job: &JobRequest) -> CliResult<Tensor2222> {
    let v = json_input(job)?;
    let arr = v
        .get("entries")
        .unwrap_or(&v)
        .as_array()
        .ok_or_else(|| CliError::Schema("tensor must be an array of 16 entries".into()))?;
    if arr.len() != 16 {
        return Err(CliError::Schema(format!("tensor needs 16 entries, got {}", arr.len())));
    }
    let entries = arr
        .iter()
        .map(|x| rational_value(x).ok_or_else(|| CliError::Schema(format!("bad tensor entry {x}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Tensor2222::new(entries)?)
}

fn form_evidence(f: &GradedForm) -> Value {
    json!({
        "form": f.to_string(),
        "ring": f.ring().to_string(),
        "multidegree": f.degree().parts(),
        "terms": f.num_terms(),
    })
}

fn cmd_catalecticant(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let b = multidegree(job, &f)?;
    let cat = catalecticant(&f, &b)?;
    let mut result = to_value(&cat.to_json());
    result["B"] = json!(b.parts());
    result["rank"] = json!(cat.rank());
    result["det"] = match cat.is_square() {
        true => json!(cat.det()?.to_string()),
        false => Value::Null,
    };
    let kernel: Vec<String> = cat.kernel_forms()?.iter().map(ToString::to_string).collect();
    result["kernel"] = json!(kernel);
    Ok(Outcome::new(result).evidence(form_evidence(&f)))
}

fn cmd_antipolar(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let b = multidegree(job, &f)?;
    let omega = antipolar(&f, &b)?;
    let cat = catalecticant(&f, &b)?;
    let mut evidence = form_evidence(&f);
    evidence["catalecticant"] = to_value(&cat.to_json());
    evidence["point_ring"] = json!(omega.form.ring().to_string());
    Ok(Outcome::new(to_value(&omega.to_json())).evidence(evidence))
}

fn cmd_rs_membership(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let b = multidegree(job, &f)?;
    let p = point(job)?;
    let omega = antipolar(&f, &b)?;
    let value = omega.eval(&p)?;
    let verdict = forbidden_certificate(&f, &b, &p)?;
    let result = json!({
        "member": num_traits::Zero::is_zero(&value),
        "omega_value": value.to_string(),
        "forbidden": verdict,
        "point": rationals(&p),
    });
    let mut evidence = form_evidence(&f);
    evidence["antipolar"] = to_value(&omega.to_json());
    Ok(Outcome::new(result).evidence(evidence).assume(GENERICITY_ASSUMPTION))
}

fn terms_with_limit(job: &JobRequest, g: &GradedForm, label: &str) -> CliResult<Value> {
    let limit = job.term_limit.unwrap_or(DEFAULT_TERM_LIMIT);
    let records = g.term_records();
    let truncated = records.len() > limit;
    let mut v = json!({
        "term_count": records.len(),
        "truncated": truncated,
        "terms": to_value(&records[..records.len().min(limit)].to_vec()),
    });
    if !truncated {
        v["form"] = json!(g.to_string());
    }
    if let Some(path) = &job.full_out {
        let full = json!({ label: g.to_string(), "terms": to_value(&records) });
        let text = serde_json::to_string_pretty(&full).expect("serialisable");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        v["full_output"] = json!(path.display().to_string());
    }
    Ok(v)
}

fn cmd_forbidden_scan(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let report = forbidden_scan_quartic(&f)?;
    let strings = |v: &[GradedForm]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let result = json!({
        "rank_cf": report.rank_cf,
        "size": report.size,
        "det_cf": report.det_cf.to_string(),
        "delta_poly": terms_with_limit(job, &report.delta_poly, "delta_poly")?,
        "delta_is_zero": report.delta_poly.is_zero(),
        "nullspace_conditions": strings(&report.nullspace_conditions),
        "kernel": strings(&report.kernel),
        "annotations": report.annotations,
    });
    let mut evidence = form_evidence(&f);
    evidence["scan_ring"] = json!(report.delta_poly.ring().to_string());
    Ok(Outcome::new(result).evidence(evidence))
}

fn cmd_signature(job: &JobRequest) -> CliResult<Outcome> {
    let m = matrix_input(job)?;
    let sig = signature(&m)?;
    let mut result = to_value(&sig);
    result["signature"] = json!(sig.to_string());
    let evidence = json!({
        "size": m.rows(),
        "char_poly": rationals(m.char_poly()?.coeffs()),
        "det": m.det()?.to_string(),
    });
    Ok(Outcome::new(result).evidence(evidence))
}

fn cmd_rank_certify(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let cert = rank_certify(&f)?;
    let assumptions = cert.assumptions.clone();
    let mut out = Outcome::new(to_value(&cert)).evidence(form_evidence(&f));
    out.assumptions = assumptions;
    Ok(out)
}

fn cmd_boundary_side(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let parts = f.degree().parts().to_vec();
    if f.ring().block_sizes() != [2, 2] || parts.len() != 2 || parts[0] != 2 || parts[1] % 2 != 0 {
        return Err(apolar_core::Error::Shape(format!(
            "boundary-side expects a form of bidegree (2,2d), got {}",
            f.degree()
        ))
        .into());
    }
    let b = Multidegree::new(&[1, parts[1] / 2]);
    let omega = antipolar(&f, &b)?;
    let report = omega_real_zero_exists(&omega.form)?;
    let mut result = to_value(&report);
    result["omega"] = json!(omega.form.to_string());
    Ok(Outcome::new(result)
        .evidence(form_evidence(&f))
        .assume(GENERICITY_ASSUMPTION))
}

fn cmd_sample_typical(job: &JobRequest) -> CliResult<Outcome> {
    let d = job.d.unwrap_or(1);
    let n = job.samples.unwrap_or(500);
    let seed = job.seed.unwrap_or(42);
    let stats = match job.threads {
        Some(t) => typical_rank_sample_with_threads(d, n, seed, t)?,
        None => typical_rank_sample(d, n, seed)?,
    };
    Ok(Outcome::new(to_value(&stats)))
}

fn pencil_evidence(t: &Pencil) -> Value {
    let p = pencil_form(t);
    json!({
        "pencil": to_value(t),
        "pencil_form": format_pencil_form(&p),
        "coefficients": rationals(p.coeffs()),
    })
}

fn cmd_pencil_form(job: &JobRequest) -> CliResult<Outcome> {
    let t = pencil_input(job)?;
    let p = pencil_form(&t);
    let result = json!({
        "n": t.n(),
        "form": format_pencil_form(&p),
        "coefficients": rationals(p.coeffs()),
    });
    Ok(Outcome::new(result).evidence(json!({ "pencil": to_value(&t) })))
}

fn cmd_hyperdet(job: &JobRequest) -> CliResult<Outcome> {
    let t = pencil_input(job)?;
    let h = hyperdet_2nn(&t)?;
    let mut result = to_value(&h);
    result["vanishes"] = json!(h.is_zero());
    if t.n() == 2 {
        result["hyperdet_222"] = json!(hyperdet_222(&t)?.to_string());
    }
    Ok(Outcome::new(result).evidence(pencil_evidence(&t)))
}

fn cmd_bergqvist(job: &JobRequest) -> CliResult<Outcome> {
    let t = pencil_input(job)?;
    let rep = bergqvist_real_rank(&t)?;
    let out = Outcome::new(to_value(&rep)).evidence(pencil_evidence(&t));
    Ok(out.assume("the rank statement holds for general tensors; forms with a repeated root are reported as BOUNDARY"))
}

fn cmd_hyperdet2222(job: &JobRequest) -> CliResult<Outcome> {
    let z = tensor_input(job)?;
    let h = hyperdet_2222(&z);
    let mut result = to_value(&h);
    result["p_coefficients"] = rationals(h.p.coeffs());
    result["vanishes"] = json!(num_traits::Zero::is_zero(&h.value));
    Ok(Outcome::new(result).evidence(json!({ "tensor": to_value(&z) })))
}

fn cmd_binary_rank(job: &JobRequest) -> CliResult<Outcome> {
    let f = form(job)?;
    let (g1, g2) = binary_apolar_generators(&f)?;
    let mut result = json!({
        "degree": f.degree().parts()[0],
        "rank": binary_rank_complex(&f)?,
        "generators": [g1.to_string(), g2.to_string()],
        "generator_degrees": [g1.degree().parts()[0], g2.degree().parts()[0]],
    });
    result["tangential"] = match tangential_membership_binary(&f) {
        Ok(b) => json!(b),
        Err(apolar_core::Error::DegreeTooSmall { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    if job.point.is_some() {
        result["rs_witness"] = json!(rs_witness_binary(&f, &point(job)?)?);
    }
    Ok(Outcome::new(result).evidence(form_evidence(&f)))
}
