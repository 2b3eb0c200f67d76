//! Problem files: `{kind, payload, metadata}` with exact numbers.

use std::collections::BTreeMap;
use std::fmt;

use destab_core::cone::InnerProduct;
use destab_core::gauge::{Node, SubobjectLattice};
use destab_core::linalg::RationalMatrix;
use destab_core::rational::parse_rational;
use destab_core::torus::{SupportVector, TorusAction, Weight, WeightSystem};
use destab_core::Rational;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Torus,
    Hom,
    Chain,
    Bundle,
    Pair,
    Vector,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Torus => "torus",
            Kind::Hom => "hom",
            Kind::Chain => "chain",
            Kind::Bundle => "bundle",
            Kind::Pair => "pair",
            Kind::Vector => "vector",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    pub payload: serde_json::Value,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

/// A JSON integer, a decimal literal, or a string `"p"`, `"p/q"`, `"-1.5"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Rational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => return Err(D::Error::custom(format!("expected a number or \"p/q\" string, found {other}"))),
        };
        parse_rational(&text).map(Num).map_err(D::Error::custom)
    }
}

fn unwrap_all(v: Vec<Num>) -> Vec<Rational> {
    v.into_iter().map(|n| n.0).collect()
}

fn matrix(rows: Vec<Vec<Num>>, what: &str) -> Result<RationalMatrix, CliError> {
    let cols = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| CliError::Invalid(format!("{what}: matrix has no rows")))?;
    let rows = rows.into_iter().map(unwrap_all).collect();
    RationalMatrix::from_rows(rows, cols).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

fn core(what: &str) -> impl Fn(destab_core::Error) -> CliError + '_ {
    move |e| CliError::from_core(e, what)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub label: String,
    pub chi: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub label: String,
    pub amp_sq: Num,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusPayload {
    pub dim: usize,
    pub weights: Vec<WeightSpec>,
    pub tau: Vec<Num>,
    #[serde(default)]
    pub gram: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub support: Vec<Component>,
}

pub struct TorusProblem {
    pub action: TorusAction,
    pub point: SupportVector,
}

impl TorusPayload {
    pub fn build(self) -> Result<TorusProblem, CliError> {
        let weights = self
            .weights
            .into_iter()
            .map(|w| Weight::new(w.label, unwrap_all(w.chi)))
            .collect();
        let ws = WeightSystem::new(self.dim, weights).map_err(core("payload.weights"))?;
        let metric = match self.gram {
            Some(rows) => InnerProduct::new(matrix(rows, "payload.gram")?).map_err(core("payload.gram"))?,
            None => InnerProduct::identity(self.dim),
        };
        let action = TorusAction::new(ws, unwrap_all(self.tau), metric).map_err(core("payload.tau"))?;
        for c in &self.support {
            if action.weights().get(&c.label).is_none() {
                return Err(CliError::Invalid(format!("payload.support: unknown weight `{}`", c.label)));
            }
        }
        let point = SupportVector::new(self.support.into_iter().map(|c| (c.label, c.amp_sq.0))).map_err(core("payload.support"))?;
        Ok(TorusProblem { action, point })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomPayload {
    pub t: Num,
    pub matrix: Vec<Vec<Num>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainPayload {
    pub t: Vec<Num>,
    pub matrices: Vec<Vec<Vec<Num>>>,
}

impl HomPayload {
    pub fn build(self) -> Result<destab_core::gl::HomProblem, CliError> {
        let f = matrix(self.matrix, "payload.matrix")?;
        destab_core::gl::HomProblem::new(f, self.t.0).map_err(core("payload"))
    }
}

impl ChainPayload {
    pub fn build(self) -> Result<destab_core::gl::ChainProblem, CliError> {
        let maps = self
            .matrices
            .into_iter()
            .enumerate()
            .map(|(i, m)| matrix(m, &format!("payload.matrices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        destab_core::gl::ChainProblem::new(maps, unwrap_all(self.t)).map_err(core("payload"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub label: String,
    pub rank: u32,
    pub degree: i64,
    #[serde(default)]
    pub contains_phi: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticePayload {
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub tau: Option<Num>,
}

impl LatticePayload {
    pub fn build(self) -> Result<(SubobjectLattice, Option<Rational>), CliError> {
        let nodes = self
            .nodes
            .into_iter()
            .map(|n| Node::new(n.label, n.rank, n.degree, n.contains_phi))
            .collect();
        let lattice = SubobjectLattice::new(nodes, &self.order).map_err(core("payload.nodes"))?;
        Ok((lattice, self.tau.map(|t| t.0)))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorPayload {
    pub s: Vec<Num>,
}

impl VectorPayload {
    pub fn values(self) -> Vec<Rational> {
        unwrap_all(self.s)
    }
}

fn path_error(prefix: &str, e: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let path = e.path().to_string();
    let at = match (prefix, path.as_str()) {
        ("", p) => p.to_string(),
        (pre, ".") => pre.to_string(),
        (pre, p) => format!("{pre}.{p}"),
    };
    let inner = e.into_inner();
    // serde_json appends "at line X column Y"; the path already locates it.
    let msg = inner.to_string();
    let msg = match msg.rfind(" at line ") {
        Some(i) if inner.line() > 0 => msg[..i].to_string(),
        _ => msg,
    };
    CliError::Invalid(format!("{at}: {msg}"))
}

pub fn parse_file(text: &str) -> Result<ProblemFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| path_error("", e))?;
    Ok(file)
}

pub fn parse_payload<T: DeserializeOwned>(payload: serde_json::Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(payload).map_err(|e| path_error("payload", e))
}
