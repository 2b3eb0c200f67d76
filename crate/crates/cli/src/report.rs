//! Serializable reports and their text rendering.
//!
//! Every exact quantity is a string: rationals as `"p/q"` in lowest terms,
//! integers as `"p"`. `float_approx` fields are for display only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use destab_core::cone::{KktCertificate, Ray};
use destab_core::rational::format_rational;
use destab_core::{Extended, Rational, SignedSquare};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Semistable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub sign: i8,
    pub square: String,
    pub float_approx: String,
}

impl Value {
    pub fn from_signed_square(v: &SignedSquare) -> Self {
        Self {
            sign: v.sign(),
            square: format_rational(v.square()),
            float_approx: float_approx(v.to_f64()),
        }
    }
}

/// A value that may be `+∞`, as for the minimum of a semistable point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtendedValue {
    Finite(Value),
    Infinity,
}

impl ExtendedValue {
    pub fn new(v: &Extended<SignedSquare>) -> Self {
        match v {
            Extended::Finite(x) => ExtendedValue::Finite(Value::from_signed_square(x)),
            Extended::Infinity => ExtendedValue::Infinity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaInf {
    pub sign: i8,
    pub square: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimal {
    /// Primitive integer vector (row-major for matrices).
    pub ray: Vec<String>,
    pub lambda_inf: LambdaInf,
    pub float_approx: String,
}

impl Optimal {
    pub fn new(primitive: Vec<String>, lambda_inf: &SignedSquare) -> Self {
        Self {
            ray: primitive,
            lambda_inf: LambdaInf {
                sign: lambda_inf.sign(),
                square: format_rational(lambda_inf.square()),
            },
            float_approx: float_approx(lambda_inf.to_f64()),
        }
    }

    pub fn from_ray(ray: &Ray, lambda_inf: &SignedSquare) -> Self {
        Self::new(ray.primitive().iter().map(ToString::to_string).collect(), lambda_inf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub active_set: Vec<usize>,
    pub multipliers: Vec<String>,
    pub theta: String,
    pub valid: bool,
}

impl Certificate {
    pub fn new(c: &KktCertificate) -> Self {
        Self {
            active_set: c.active_set.clone(),
            multipliers: rationals(&c.multipliers),
            theta: format_rational(&c.theta),
            valid: c.is_valid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusStage {
    /// Exact direction of the optimal ray, unnormalized.
    pub direction: Vec<String>,
    pub initial_covector: Vec<String>,
    pub finite_cone_rows: Vec<Vec<String>>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub amp_sq: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitStage {
    pub support: Vec<Component>,
    pub induced_weights: Vec<String>,
    pub tau_prime: Vec<String>,
    /// `⟨τ′, ray⟩`, zero by construction.
    pub tau_prime_pairing: String,
    pub induced_verdict: Verdict,
    pub semistable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal: Option<Optimal>,
    pub supports: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomStage {
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projector: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStage {
    pub dims: Vec<usize>,
    pub monotone_dims: bool,
    pub ranks: Vec<usize>,
    pub kernels: Vec<Vec<Vec<String>>>,
    pub flag: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_maps: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationStage {
    pub chain: Vec<String>,
    /// `[rank, degree]` of each subquotient.
    pub hn_type: Vec<[i64; 2]>,
    pub slopes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_step: Option<usize>,
    /// Exact eigenvalues of the optimal element, one per subquotient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub rank: u32,
    pub degree: i64,
    pub carries_phi: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStage {
    pub eigenvalues: Vec<String>,
    pub flag: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal: Option<Optimal>,
    /// Minimum of the weight on the unit sphere when it is not negative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimum: Option<ExtendedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<StratumReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<HomStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_object: Option<Vec<Quotient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassStage>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, kind: &str, metadata: BTreeMap<String, String>) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            kind: kind.to_string(),
            metadata,
            verdict: None,
            optimal: None,
            minimum: None,
            torus: None,
            limit: None,
            strata: None,
            hom: None,
            chain: None,
            filtration: None,
            limit_object: None,
            class: None,
            verification: Vec::new(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.verification.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        line(w, "command", &self.command);
        if let Some(v) = self.verdict {
            line(w, "verdict", verdict_str(v));
        }
        if let Some(o) = &self.optimal {
            line(w, "ray", &bracket(&o.ray));
            line(w, "lambda_inf", &format!("{} (~ {})", signed_sqrt(&o.lambda_inf), o.float_approx));
        }
        if let Some(m) = &self.minimum {
            let s = match m {
                ExtendedValue::Finite(v) => format!("{} (~ {})", signed_sqrt(&LambdaInf { sign: v.sign, square: v.square.clone() }), v.float_approx),
                ExtendedValue::Infinity => "+inf".into(),
            };
            line(w, "minimum", &s);
        }
        if let Some(t) = &self.torus {
            line(w, "direction", &bracket(&t.direction));
            line(w, "initial covector", &bracket(&t.initial_covector));
            let rows: Vec<String> = t.finite_cone_rows.iter().map(|r| bracket(r)).collect();
            line(w, "finite cone rows", &rows.join(" "));
            line(
                w,
                "certificate",
                &format!(
                    "active {:?}, multipliers {}, theta {}, valid {}",
                    t.certificate.active_set,
                    bracket(&t.certificate.multipliers),
                    t.certificate.theta,
                    t.certificate.valid
                ),
            );
        }
        if let Some(l) = &self.limit {
            let comps: Vec<String> = l.support.iter().map(|c| format!("{}:{}", c.label, c.amp_sq)).collect();
            line(w, "limit support", &format!("{{{}}}", comps.join(", ")));
            line(w, "induced weights", &bracket(&l.induced_weights));
            line(w, "tau'", &bracket(&l.tau_prime));
            line(w, "<tau', ray>", &l.tau_prime_pairing);
            line(w, "induced verdict", verdict_str(l.induced_verdict));
            line(w, "limit semistable", &l.semistable.to_string());
        }
        if let Some(strata) = &self.strata {
            line(w, "strata", &strata.len().to_string());
            for (i, s) in strata.iter().enumerate() {
                let head = match &s.optimal {
                    Some(o) => format!("ray {} lambda_inf {}", bracket(&o.ray), signed_sqrt(&o.lambda_inf)),
                    None => "semistable".into(),
                };
                let supports: Vec<String> = s.supports.iter().map(|x| format!("{{{}}}", x.join(","))).collect();
                let _ = writeln!(w, "  [{i}] {head}: {}", supports.join(" "));
            }
        }
        if let Some(h) = &self.hom {
            line(w, "kernel dim", &h.kernel_dim.to_string());
            line(w, "kernel basis", &matrix_text(&h.kernel_basis));
            if let Some(p) = &h.projector {
                line(w, "projector", &matrix_text(p));
            }
        }
        if let Some(c) = &self.chain {
            line(w, "dims", &format!("{:?}", c.dims));
            line(w, "monotone dims", &c.monotone_dims.to_string());
            line(w, "ranks", &format!("{:?}", c.ranks));
            let kernels: Vec<String> = c.kernels.iter().map(|k| matrix_text(k)).collect();
            line(w, "kernels", &kernels.join(" "));
            let flag: Vec<String> = c.flag.iter().map(|k| matrix_text(k)).collect();
            line(w, "flag", &flag.join(" "));
            if let Some(q) = &c.quotient_maps {
                let maps: Vec<String> = q.iter().map(|m| matrix_text(m)).collect();
                line(w, "quotient maps", &maps.join(" "));
            }
            if let Some(s) = c.limit_stable {
                line(w, "limit stable", &s.to_string());
            }
        }
        if let Some(f) = &self.filtration {
            line(w, "chain", &f.chain.join(" < "));
            let ty: Vec<String> = f.hn_type.iter().map(|[r, d]| format!("({r}, {d})")).collect();
            line(w, "type", &format!("[{}]", ty.join(", ")));
            line(w, "slopes", &bracket(&f.slopes));
            if let Some(m) = f.m {
                line(w, "m", &m.to_string());
            }
            if let Some(c) = &f.case {
                line(w, "case", c);
            }
            if let Some(l) = f.phi_step {
                line(w, "phi step", &l.to_string());
            }
            if let Some(e) = &f.eigenvalues {
                line(w, "eigenvalues", &bracket(e));
            }
        }
        if let Some(q) = &self.limit_object {
            let parts: Vec<String> = q
                .iter()
                .map(|x| format!("({}, {}){}", x.rank, x.degree, if x.carries_phi { "*" } else { "" }))
                .collect();
            line(w, "limit object", &parts.join(" + "));
        }
        if let Some(c) = &self.class {
            line(w, "eigenvalues", &bracket(&c.eigenvalues));
            line(w, "flag", &format!("{:?}", c.flag));
        }
        for c in &self.verification {
            let _ = writeln!(w, "check {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        out
    }
}

fn line(w: &mut String, key: &str, value: &str) {
    let _ = writeln!(w, "{key}: {value}");
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Semistable => "semistable",
        Verdict::Unstable => "unstable",
    }
}

fn bracket(xs: &[String]) -> String {
    format!("[{}]", xs.join(", "))
}

fn matrix_text(rows: &[Vec<String>]) -> String {
    let rows: Vec<String> = rows.iter().map(|r| bracket(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn signed_sqrt(l: &LambdaInf) -> String {
    match l.sign {
        0 => "0".into(),
        s => format!("{}sqrt({})", if s < 0 { "-" } else { "" }, l.square),
    }
}

pub fn rationals(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

pub fn rational_rows(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| rationals(r)).collect()
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn float_approx(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
