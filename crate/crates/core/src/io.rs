//! JSON instance and certificate formats.
//!
//! Field elements are integers whose base-p digits are polynomial coefficients, lowest
//! degree first. Matrices and subspace bases are lists of rows; a subspace in a certificate
//! is always its reduced row echelon basis.

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::conjecture::{run_experiment, Candidate, ExperimentConfig, Report};
use crate::error::{Error, Result};
use crate::field::{build_field, Field, FieldSpec};
use crate::galois::GaloisContext;
use crate::group::{MatrixGroup, PermGroup, SemilinearElement};
use crate::matrix::Matrix;
use crate::operator::{approximate_operator, OperatorCertificate, OperatorInstance};
use crate::set_majority::{majority_set, refined_majority, refinement_applies, verify_proof_accounting, SetInstance};
use crate::subspace::Subspace;
use crate::wagner::{certify_invariance, wagner_approximate, WagnerCertificate};

pub const FORMAT_VERSION: u64 = 1;

pub type Rows = Vec<Vec<u32>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Wagner,
    Operator,
    GaloisSubspace,
    GaloisOperator,
    SetMajority,
    Conjecture,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::Wagner, Kind::Operator, Kind::GaloisSubspace, Kind::GaloisOperator, Kind::SetMajority, Kind::Conjecture];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Wagner => "wagner",
            Kind::Operator => "operator",
            Kind::GaloisSubspace => "galois-subspace",
            Kind::GaloisOperator => "galois-operator",
            Kind::SetMajority => "set-majority",
            Kind::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| Error::Schema(format!("unknown kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Monic modulus, coefficients lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemilinearJson {
    pub frobenius: u32,
    pub matrix: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "generators", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupJson {
    Linear(Vec<Rows>),
    Semilinear(Vec<SemilinearJson>),
    /// One-line notation on coordinates: generator `g` sends `e_i` to `e_{g[i]}`.
    Perm(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WagnerInput {
    pub field: FieldJson,
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    /// Spanning sets; with a group, the collection is the union of their orbits.
    pub subspaces: Vec<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorPairJson {
    pub v: Rows,
    pub v_prime: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorInput {
    pub field: FieldJson,
    pub d: usize,
    pub d_prime: usize,
    pub generators: Vec<GeneratorPairJson>,
    /// `d_prime × d`, acting on column vectors.
    pub t: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisSubspaceInput {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    pub basis: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisOperatorInput {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    pub d_prime: usize,
    pub t: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetMajorityInput {
    pub x_size: usize,
    /// Permutations of `0..x_size` in one-line notation.
    pub generators: Vec<Vec<usize>>,
    pub a: Vec<usize>,
}

fn default_group_cap() -> usize {
    8
}

fn default_budget() -> usize {
    1
}

fn default_candidates() -> Vec<String> {
    Candidate::DEFAULT.iter().map(|c| c.name().to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureInput {
    pub p: u32,
    #[serde(default = "one")]
    pub n: u32,
    pub dim: usize,
    #[serde(default = "default_group_cap")]
    pub group_cap: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_candidates")]
    pub candidates: Vec<String>,
}

fn one() -> u32 {
    1
}

impl ConjectureInput {
    pub fn config(&self, threads: Option<usize>) -> Result<ExperimentConfig> {
        let candidates =
            self.candidates.iter().map(|c| c.parse()).collect::<Result<Vec<Candidate>>>().map_err(schema)?;
        Ok(ExperimentConfig {
            p: self.p,
            n: self.n,
            dim: self.dim,
            group_cap: self.group_cap,
            budget: self.budget,
            trials: self.trials,
            seed: self.seed,
            candidates,
            threads,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Wagner(WagnerInput),
    Operator(OperatorInput),
    GaloisSubspace(GaloisSubspaceInput),
    GaloisOperator(GaloisOperatorInput),
    SetMajority(SetMajorityInput),
    Conjecture(ConjectureInput),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Wagner(_) => Kind::Wagner,
            Instance::Operator(_) => Kind::Operator,
            Instance::GaloisSubspace(_) => Kind::GaloisSubspace,
            Instance::GaloisOperator(_) => Kind::GaloisOperator,
            Instance::SetMajority(_) => Kind::SetMajority,
            Instance::Conjecture(_) => Kind::Conjecture,
        }
    }

    pub fn to_json(&self) -> String {
        let payload = match self {
            Instance::Wagner(x) => serde_json::to_value(x),
            Instance::Operator(x) => serde_json::to_value(x),
            Instance::GaloisSubspace(x) => serde_json::to_value(x),
            Instance::GaloisOperator(x) => serde_json::to_value(x),
            Instance::SetMajority(x) => serde_json::to_value(x),
            Instance::Conjecture(x) => serde_json::to_value(x),
        }
        .expect("instance serializes");
        let mut map = Map::new();
        map.insert("version".into(), FORMAT_VERSION.into());
        map.insert("kind".into(), self.kind().as_str().into());
        if let Value::Object(fields) = payload {
            map.extend(fields);
        }
        to_json_string(&Value::Object(map))
    }
}

fn schema(e: Error) -> Error {
    match e {
        Error::Schema(_) => e,
        other => Error::Schema(other.to_string()),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    if e.line() > 0 {
        Error::Schema(format!("line {}, column {}: {e}", e.line(), e.column()))
    } else {
        Error::Schema(e.to_string())
    }
}

/// Splits `{"version", "kind", ...payload}` into the kind and the remaining fields.
fn split_envelope(text: &str, expected: Option<Kind>) -> Result<(Kind, Value)> {
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    let Value::Object(mut map) = value else {
        return Err(Error::Schema("top level must be a JSON object".into()));
    };
    if let Some(v) = map.remove("version") {
        if v.as_u64() != Some(FORMAT_VERSION) {
            return Err(Error::Schema(format!("unsupported version {v}; expected {FORMAT_VERSION}")));
        }
    }
    let kind = match map.remove("kind") {
        Some(Value::String(s)) => Some(s.parse::<Kind>()?),
        Some(other) => return Err(Error::Schema(format!("kind must be a string, got {other}"))),
        None => None,
    };
    let kind = match (kind, expected) {
        (Some(k), Some(e)) if k != e => {
            return Err(Error::Schema(format!("instance kind {k} does not match {e}")));
        }
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(Error::Schema("missing kind".into())),
    };
    Ok((kind, Value::Object(map)))
}

fn payload<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

/// Parses an instance file. `expected` supplies the kind when the file omits it.
pub fn parse_instance(text: &str, expected: Option<Kind>) -> Result<Instance> {
    let (kind, v) = split_envelope(text, expected)?;
    Ok(match kind {
        Kind::Wagner => Instance::Wagner(payload(v)?),
        Kind::Operator => Instance::Operator(payload(v)?),
        Kind::GaloisSubspace => Instance::GaloisSubspace(payload(v)?),
        Kind::GaloisOperator => Instance::GaloisOperator(payload(v)?),
        Kind::SetMajority => Instance::SetMajority(payload(v)?),
        Kind::Conjecture => Instance::Conjecture(payload(v)?),
    })
}

// Conversions from the JSON shapes, validating as they go.

pub fn field_from_json(f: &FieldJson) -> Result<Field> {
    let field = match &f.modulus {
        Some(m) => FieldSpec::with_modulus(f.p, m.clone()).map_err(schema)?,
        None => build_field(f.p, f.n.unwrap_or(1)).map_err(schema)?,
    };
    if let Some(n) = f.n {
        if n != field.degree() {
            return Err(Error::Schema(format!("n = {n} disagrees with the modulus degree {}", field.degree())));
        }
    }
    Ok(field)
}

pub fn field_to_json(f: &Field) -> FieldJson {
    FieldJson { p: f.characteristic(), n: Some(f.degree()), modulus: Some(f.modulus().to_vec()) }
}

/// A `rows × cols` matrix; `rows = None` accepts any number of rows.
pub fn matrix_from_rows(f: &Field, data: &Rows, rows: Option<usize>, cols: usize, what: &str) -> Result<Matrix> {
    if let Some(r) = rows {
        if data.len() != r {
            return Err(Error::Schema(format!("{what}: expected {r} rows, found {}", data.len())));
        }
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Schema(format!("{what}: row {i} has {} entries, expected {cols}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| !f.contains(x)) {
            return Err(Error::Schema(format!("{what}: entry {bad} is outside GF({})", f.order())));
        }
    }
    Matrix::from_rows(f, cols, data).map_err(schema)
}

pub fn rows_of(m: &Matrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn subspace_from_rows(f: &Field, data: &Rows, d: usize, what: &str) -> Result<Subspace> {
    Ok(Subspace::span(&matrix_from_rows(f, data, None, d, what)?))
}

fn check_perm(g: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    if g.len() != n {
        return Err(Error::Schema(format!("{what}: permutation has length {}, expected {n}", g.len())));
    }
    for &x in g {
        if x >= n || seen[x] {
            return Err(Error::Schema(format!("{what}: {g:?} is not a permutation of 0..{n}")));
        }
        seen[x] = true;
    }
    Ok(())
}

pub fn group_from_json(f: &Field, d: usize, g: &GroupJson) -> Result<MatrixGroup> {
    let gens: Vec<SemilinearElement> = match g {
        GroupJson::Linear(ms) => ms
            .iter()
            .map(|m| SemilinearElement::linear(matrix_from_rows(f, m, Some(d), d, "generator")?))
            .collect::<Result<_>>()?,
        GroupJson::Semilinear(ms) => ms
            .iter()
            .map(|s| SemilinearElement::new(s.frobenius, matrix_from_rows(f, &s.matrix, Some(d), d, "generator")?))
            .collect::<Result<_>>()?,
        GroupJson::Perm(ps) => ps
            .iter()
            .map(|p| {
                check_perm(p, d, "generator")?;
                SemilinearElement::linear(PermGroup::permutation_matrix(f, p))
            })
            .collect::<Result<_>>()?,
    };
    MatrixGroup::close(f, d, &gens).map_err(schema)
}

/// The collection an instance describes: the given subspaces, or the union of their orbits.
pub fn wagner_collection(input: &WagnerInput) -> Result<(Field, Option<MatrixGroup>, Vec<Subspace>)> {
    let f = field_from_json(&input.field)?;
    let d = input.ambient_dim;
    if input.subspaces.is_empty() {
        return Err(Error::Schema("subspaces must be nonempty".into()));
    }
    let given: Vec<Subspace> =
        input.subspaces.iter().map(|s| subspace_from_rows(&f, s, d, "subspace")).collect::<Result<_>>()?;
    let group = input.group.as_ref().map(|g| group_from_json(&f, d, g)).transpose()?;
    let xs = match &group {
        None => given,
        Some(g) => {
            let mut all = Vec::new();
            for a in &given {
                all.extend(g.orbit_subspace(a)?);
            }
            all
        }
    };
    Ok((f, group, xs))
}

pub fn operator_instance(input: &OperatorInput) -> Result<OperatorInstance> {
    let f = field_from_json(&input.field)?;
    let (d, dp) = (input.d, input.d_prime);
    if d == 0 || dp == 0 {
        return Err(Error::Schema("d and d_prime must be positive".into()));
    }
    let t = matrix_from_rows(&f, &input.t, Some(dp), d, "t")?;
    let pairs = input
        .generators
        .iter()
        .map(|g| {
            Ok((
                matrix_from_rows(&f, &g.v, Some(d), d, "generator v")?,
                matrix_from_rows(&f, &g.v_prime, Some(dp), dp, "generator v_prime")?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorInstance::from_generator_pairs(&f, &pairs, t).map_err(|e| match e {
        Error::InvalidParameter(_) | Error::NotInvertible | Error::ClosureCapExceeded { .. } => schema(e),
        other => other,
    })
}

pub fn galois_context(p: u32, n: u32) -> Result<GaloisContext> {
    GaloisContext::new(p, n).map_err(schema)
}

pub fn set_instance(input: &SetMajorityInput) -> Result<SetInstance> {
    for g in &input.generators {
        check_perm(g, input.x_size, "generator")?;
    }
    let group = PermGroup::close(input.x_size, &input.generators).map_err(schema)?;
    SetInstance::new(group, input.a.clone()).map_err(schema)
}

// Certificate shapes.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WagnerCertJson {
    pub r: usize,
    pub r_raw: usize,
    pub collection: Vec<Rows>,
    pub h_table: Vec<usize>,
    pub case: u8,
    pub chosen_m: Option<usize>,
    pub witness_subsets: Vec<Vec<usize>>,
    pub w: Rows,
    pub dim_w: usize,
    pub per_x_bounds: Vec<[usize; 2]>,
    pub bound_codim: u64,
    pub bound_dim: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<bool>,
}

impl WagnerCertJson {
    pub fn from_certificate(c: &WagnerCertificate) -> Self {
        WagnerCertJson {
            r: c.r,
            r_raw: c.r_raw,
            collection: c.collection.iter().map(|x| rows_of(x.basis())).collect(),
            h_table: c.h_table.clone(),
            case: c.case.number(),
            chosen_m: c.chosen_m,
            witness_subsets: c.witness_subsets.clone(),
            w: rows_of(c.w.basis()),
            dim_w: c.w.dim(),
            per_x_bounds: c.per_x_bounds.iter().map(|&(a, b)| [a, b]).collect(),
            bound_codim: c.bound_codim,
            bound_dim: c.bound_dim,
            group_order: None,
            invariant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorCertJson {
    pub r: usize,
    pub r_raw: usize,
    pub graph: WagnerCertJson,
    pub k: Rows,
    pub i: Rows,
    pub dim_k: usize,
    pub codim_i: usize,
    pub t0: Rows,
    pub rank_defect: usize,
    pub restricted_defect: usize,
    pub bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<bool>,
}

impl OperatorCertJson {
    pub fn from_certificate(c: &OperatorCertificate, d: usize) -> Self {
        OperatorCertJson {
            r: c.r,
            r_raw: c.r_raw,
            graph: WagnerCertJson::from_certificate(&c.inner),
            k: rows_of(c.k.basis()),
            i: rows_of(c.i.basis()),
            dim_k: c.k.dim(),
            codim_i: d - c.i.dim(),
            t0: rows_of(&c.t0),
            rank_defect: c.rank_defect,
            restricted_defect: c.restricted_defect,
            bound: c.bound,
            group_order: None,
            equivariant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisSubspaceCertJson {
    pub r: usize,
    pub conjugates: WagnerCertJson,
    pub w: Rows,
    pub w0: Rows,
    pub dim_w: usize,
    pub bounds: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisOperatorCertJson {
    pub operator: OperatorCertJson,
    pub w: Rows,
    pub w0: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccountingJson {
    pub p: usize,
    pub p1: usize,
    pub p2: usize,
    pub a_minus_a0: usize,
    pub a0_minus_a: usize,
    pub disjoint: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinedJson {
    pub a0: Vec<usize>,
    pub symdiff: usize,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetMajorityCertJson {
    pub group_order: usize,
    pub r: usize,
    pub a0: Vec<usize>,
    pub symdiff: usize,
    pub bound: usize,
    pub accounting: AccountingJson,
    pub refined: Option<RefinedJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Wagner(WagnerCertJson),
    Operator(OperatorCertJson),
    GaloisSubspace(GaloisSubspaceCertJson),
    GaloisOperator(GaloisOperatorCertJson),
    SetMajority(SetMajorityCertJson),
    Conjecture(Report),
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: u64,
    kind: &'a str,
    certificate: &'a T,
}

fn envelope<T: Serialize>(kind: Kind, c: &T) -> String {
    let v = serde_json::to_value(Envelope { version: FORMAT_VERSION, kind: kind.as_str(), certificate: c })
        .expect("certificate serializes");
    to_json_string(&v)
}

fn holds_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(holds_object),
        _ => false,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if holds_object(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Pretty JSON with objects spread over lines and object-free arrays kept on one line,
/// followed by a newline.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

impl Certificate {
    pub fn kind(&self) -> Kind {
        match self {
            Certificate::Wagner(_) => Kind::Wagner,
            Certificate::Operator(_) => Kind::Operator,
            Certificate::GaloisSubspace(_) => Kind::GaloisSubspace,
            Certificate::GaloisOperator(_) => Kind::GaloisOperator,
            Certificate::SetMajority(_) => Kind::SetMajority,
            Certificate::Conjecture(_) => Kind::Conjecture,
        }
    }

    /// `{"version", "kind", "certificate"}`, pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let k = self.kind();
        match self {
            Certificate::Wagner(c) => envelope(k, c),
            Certificate::Operator(c) => envelope(k, c),
            Certificate::GaloisSubspace(c) => envelope(k, c),
            Certificate::GaloisOperator(c) => envelope(k, c),
            Certificate::SetMajority(c) => envelope(k, c),
            Certificate::Conjecture(r) => envelope(k, &r.summary),
        }
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        match self {
            Certificate::Wagner(c) => format!(
                "wagner: r = {}, case {}, dim W = {}, max dim W/(W∩A) = {}, max dim A/(W∩A) = {} (bounds {} and {})",
                c.r,
                c.case,
                c.dim_w,
                c.per_x_bounds.iter().map(|b| b[0]).max().unwrap_or(0),
                c.per_x_bounds.iter().map(|b| b[1]).max().unwrap_or(0),
                c.bound_codim,
                c.bound_dim
            ),
            Certificate::Operator(c) => operator_line("operator", c),
            Certificate::GaloisSubspace(c) => format!(
                "galois-subspace: r = {}, dim W = {}, dim W/(W∩A) = {}, dim A/(W∩A) = {}",
                c.r, c.dim_w, c.bounds[0], c.bounds[1]
            ),
            Certificate::GaloisOperator(c) => operator_line("galois-operator", &c.operator),
            Certificate::SetMajority(c) => {
                format!("set-majority: r = {}, |A0| = {}, |A Δ A0| = {} <= {}", c.r, c.a0.len(), c.symdiff, c.bound)
            }
            Certificate::Conjecture(r) => format!(
                "conjecture: {} trials, {} above r(r+1)^(r+1), {} candidate findings",
                r.records.len(),
                r.summary.theorem_bound_exceeded,
                r.summary.findings.len()
            ),
        }
    }
}

fn operator_line(name: &str, c: &OperatorCertJson) -> String {
    format!(
        "{name}: r = {}, rk(T-T0) = {} <= {}, dim K = {}, codim I = {}",
        c.r, c.rank_defect, c.bound, c.dim_k, c.codim_i
    )
}

fn hypothesis_or_internal(e: Error) -> Error {
    match e {
        Error::NotStable(j) => Error::Internal(format!("engine output is not stable under Frobenius power {j}")),
        other => other,
    }
}

/// Runs the construction an instance describes. `threads` only affects the conjecture lab.
pub fn run(inst: &Instance, threads: Option<usize>) -> Result<Certificate> {
    match inst {
        Instance::Wagner(input) => {
            let (_, group, xs) = wagner_collection(input)?;
            let cert = wagner_approximate(&xs, input.r).map_err(|e| match e {
                Error::InvalidParameter(_) | Error::CollectionTooLarge { .. } => schema(e),
                other => other,
            })?;
            let mut out = WagnerCertJson::from_certificate(&cert);
            if let Some(g) = &group {
                if !certify_invariance(g, &cert.w)? {
                    return Err(Error::Internal("W is not invariant under the group".into()));
                }
                out.group_order = Some(g.order());
                out.invariant = Some(true);
            }
            Ok(Certificate::Wagner(out))
        }
        Instance::Operator(input) => {
            let inst = operator_instance(input)?;
            let cert = approximate_operator(&inst)?;
            let mut out = OperatorCertJson::from_certificate(&cert, input.d);
            out.group_order = Some(inst.order());
            out.equivariant = Some(true);
            Ok(Certificate::Operator(out))
        }
        Instance::GaloisSubspace(input) => {
            let ctx = galois_context(input.p, input.n)?;
            let a = subspace_from_rows(ctx.extension(), &input.basis, input.d, "basis")?;
            let c = ctx.descend_subspace(&a).map_err(hypothesis_or_internal)?;
            Ok(Certificate::GaloisSubspace(GaloisSubspaceCertJson {
                r: c.r,
                conjugates: WagnerCertJson::from_certificate(&c.inner),
                w: rows_of(c.w.basis()),
                w0: rows_of(&c.w0),
                dim_w: c.w.dim(),
                bounds: [c.bounds.0, c.bounds.1],
            }))
        }
        Instance::GaloisOperator(input) => {
            let ctx = galois_context(input.p, input.n)?;
            if input.d == 0 || input.d_prime == 0 {
                return Err(Error::Schema("d and d_prime must be positive".into()));
            }
            let t = matrix_from_rows(ctx.extension(), &input.t, Some(input.d_prime), input.d, "t")?;
            let c = ctx.descend_operator(&t).map_err(hypothesis_or_internal)?;
            Ok(Certificate::GaloisOperator(GaloisOperatorCertJson {
                operator: OperatorCertJson::from_certificate(&c.operator, input.d),
                w: rows_of(c.w.basis()),
                w0: rows_of(&c.w0),
            }))
        }
        Instance::SetMajority(input) => {
            let inst = set_instance(input)?;
            let c = majority_set(&inst)?;
            let acc = verify_proof_accounting(&inst, &c);
            if !acc.holds() {
                return Err(Error::Internal("counting argument fails on the majority set".into()));
            }
            let refined = if refinement_applies(&inst) {
                let rc = refined_majority(&inst)?;
                Some(RefinedJson { a0: rc.a0, symdiff: rc.symdiff, strict: rc.strict })
            } else {
                None
            };
            Ok(Certificate::SetMajority(SetMajorityCertJson {
                group_order: inst.group().order(),
                r: c.r,
                a0: c.a0,
                symdiff: c.symdiff,
                bound: 2 * c.r,
                accounting: AccountingJson {
                    p: acc.p,
                    p1: acc.p1,
                    p2: acc.p2,
                    a_minus_a0: acc.a_minus_a0,
                    a0_minus_a: acc.a0_minus_a,
                    disjoint: acc.disjoint,
                    holds: true,
                },
                refined,
            }))
        }
        Instance::Conjecture(input) => {
            let cfg = input.config(threads)?;
            let report = run_experiment(&cfg).map_err(|e| match e {
                Error::InvalidParameter(_) | Error::NotPrime(_) | Error::DegreeTooLarge { .. } => schema(e),
                other => other,
            })?;
            Ok(Certificate::Conjecture(report))
        }
    }
}

/// Parses and runs an instance file in one step.
pub fn run_text(text: &str, expected: Option<Kind>, threads: Option<usize>) -> Result<Certificate> {
    run(&parse_instance(text, expected)?, threads)
}

/// Parsed certificate file: its kind and the raw certificate payload.
pub fn parse_certificate_envelope(text: &str) -> std::result::Result<(Kind, Value), String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("certificate is not valid JSON: {e}"))?;
    let Value::Object(mut map) = value else {
        return Err("certificate must be a JSON object".into());
    };
    let version = map.remove("version");
    if version.as_ref().and_then(Value::as_u64) != Some(FORMAT_VERSION) {
        return Err(format!("certificate version must be {FORMAT_VERSION}"));
    }
    let kind = match map.remove("kind") {
        Some(Value::String(s)) => s.parse::<Kind>().map_err(|e| e.to_string())?,
        _ => return Err("certificate kind is missing".into()),
    };
    let cert = map.remove("certificate").ok_or("certificate payload is missing")?;
    if let Some(extra) = map.keys().next() {
        return Err(format!("unknown certificate field {extra:?}"));
    }
    Ok((kind, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP_WAGNER: &str = r#"{"version": 1, "kind": "wagner", "field": {"p": 2},
        "ambient_dim": 2, "subspaces": [[[1, 0]], [[0, 1]]]}"#;

    #[test]
    fn parses_and_runs_wagner() {
        let c = run_text(SWAP_WAGNER, None, None).unwrap();
        let Certificate::Wagner(w) = &c else { panic!() };
        assert_eq!((w.case, w.dim_w, w.h_table.clone()), (2, 0, vec![2, 1]));
        assert!(c.to_json().starts_with("{\n  \"version\": 1,\n  \"kind\": \"wagner\""));
        assert!(c.to_json().contains("\"h_table\": [2,1],"));
    }

    #[test]
    fn schema_errors() {
        let bad = [
            ("{\"kind\": \"wagner\",\n \"field\": ", "line 2"),
            (r#"{"kind": "wagner", "field": {"p": 2}, "ambient_dim": 2, "subspaces": [], "extra": 1}"#, "unknown field"),
            (r#"{"kind": "nope"}"#, "unknown kind"),
            (r#"{"version": 2, "kind": "wagner"}"#, "version"),
            (r#"{"field": {"p": 2}}"#, "missing kind"),
            (r#"{"kind": "wagner", "field": {"p": 4}, "ambient_dim": 1, "subspaces": [[[1]]]}"#, "not prime"),
            (r#"{"kind": "wagner", "field": {"p": 2}, "ambient_dim": 2, "subspaces": [[[1, 2]]]}"#, "outside"),
            (r#"{"kind": "wagner", "field": {"p": 2}, "ambient_dim": 2, "subspaces": [[[1]]]}"#, "entries"),
            (r#"{"kind": "set-majority", "x_size": 2, "generators": [[0, 0]], "a": [0]}"#, "permutation"),
        ];
        for (text, needle) in bad {
            let e = run_text(text, None, None).unwrap_err();
            assert_eq!(e.exit_code(), 3, "{text}");
            assert!(e.to_string().contains(needle), "{e} lacks {needle}");
        }
        let e = parse_instance(r#"{"kind": "operator"}"#, Some(Kind::Wagner)).unwrap_err();
        assert!(e.to_string().contains("does not match"));
    }

    #[test]
    fn hypothesis_errors_exit_two() {
        let given_r = r#"{"kind": "wagner", "field": {"p": 2}, "ambient_dim": 3,
            "subspaces": [[[1, 0, 0], [0, 1, 0]], [[0, 0, 1]]], "r": 1}"#;
        assert_eq!(run_text(given_r, None, None).unwrap_err().exit_code(), 2);
        let modular = r#"{"kind": "operator", "field": {"p": 2}, "d": 2, "d_prime": 2,
            "generators": [{"v": [[0, 1], [1, 0]], "v_prime": [[0, 1], [1, 0]]}], "t": [[1, 0], [0, 0]]}"#;
        assert_eq!(run_text(modular, None, None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn instances_round_trip() {
        let inst = parse_instance(SWAP_WAGNER, None).unwrap();
        assert_eq!(parse_instance(&inst.to_json(), None).unwrap(), inst);
    }

    #[test]
    fn group_json_shapes() {
        let g: GroupJson = serde_json::from_str(r#"{"kind": "perm", "generators": [[1, 0]]}"#).unwrap();
        assert_eq!(g, GroupJson::Perm(vec![vec![1, 0]]));
        let s: GroupJson =
            serde_json::from_str(r#"{"kind": "semilinear", "generators": [{"frobenius": 1, "matrix": [[1]]}]}"#).unwrap();
        assert!(matches!(s, GroupJson::Semilinear(_)));
        assert!(serde_json::from_str::<GroupJson>(r#"{"kind": "perm", "generators": [], "x": 1}"#).is_err());
    }

    #[test]
    fn field_json() {
        let f = field_from_json(&FieldJson { p: 2, n: None, modulus: Some(vec![1, 1, 1]) }).unwrap();
        assert_eq!((f.order(), f.degree()), (4, 2));
        assert!(field_from_json(&FieldJson { p: 2, n: Some(3), modulus: Some(vec![1, 1, 1]) }).is_err());
        assert!(field_from_json(&FieldJson { p: 2, n: None, modulus: Some(vec![1, 0, 1]) }).is_err());
        assert_eq!(field_to_json(&build_field(3, 2).unwrap()).modulus, Some(vec![1, 0, 1]));
    }
}
