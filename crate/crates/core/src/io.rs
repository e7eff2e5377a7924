//! JSON file formats.
//!
//! Inner function:
//!
//! ```json
//! {"gamma": [1, 0], "zeros": [[0.3, 0], [0, -0.5]], "clark": [1, [0, 1]]}
//! ```
//!
//! `gamma` defaults to `1`; `clark` lists circle parameters whose Clark
//! measures `ttolab describe` should report. A parameter is `[re, im]`, a real
//! number, or `"inf"`/`"infinity"`.
//!
//! Query:
//!
//! ```json
//! {"theta1": {...}, "a1": [0.3, 0], "theta2": {...}, "a2": "inf"}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blaschke::{ClarkMeasure, FiniteBlaschkeProduct, KappaInvariant};
use crate::error::{Error, Result};
use crate::isodecider::{Certificate, IsoDecision, IsoQuery, Verdict};
use crate::moebius::{ExtendedParameter, MoebiusAutomorphism, UnimodularConstant};
use crate::C64;

/// Parsed inner-function file.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaInput {
    pub theta: FiniteBlaschkeProduct,
    pub clark: Vec<UnimodularConstant>,
}

fn syntax(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON syntax error at line {}, column {}: {e}", e.line(), e.column())))
}

fn field_error(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{path}: {msg}"))
}

fn complex_at(v: &Value, path: &str) -> Result<C64> {
    match v {
        Value::Array(xs) if xs.len() == 2 => {
            let re = xs[0].as_f64().ok_or_else(|| field_error(&format!("{path}[0]"), "expected a number"))?;
            let im = xs[1].as_f64().ok_or_else(|| field_error(&format!("{path}[1]"), "expected a number"))?;
            Ok(C64::new(re, im))
        }
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        _ => Err(field_error(path, "expected [re, im] or a number")),
    }
}

/// A point of the sphere: `[re, im]`, a number, or `"inf"`/`"infinity"`.
pub fn parameter_at(v: &Value, path: &str) -> Result<ExtendedParameter> {
    if let Value::String(s) = v {
        return match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(ExtendedParameter::Infinity),
            _ => Err(field_error(path, format!("unknown parameter {s:?}"))),
        };
    }
    let z = complex_at(v, path)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(field_error(path, "parameter must be finite or \"inf\""));
    }
    Ok(ExtendedParameter::from_complex(z))
}

fn theta_at(v: &Value, path: &str) -> Result<ThetaInput> {
    let obj = v.as_object().ok_or_else(|| field_error(path, "expected an object"))?;
    let prefix = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    for key in obj.keys() {
        if !matches!(key.as_str(), "gamma" | "zeros" | "clark") {
            return Err(field_error(&prefix(key), "unknown field"));
        }
    }
    let gamma = match obj.get("gamma") {
        Some(g) => complex_at(g, &prefix("gamma"))?,
        None => C64::new(1.0, 0.0),
    };
    let zeros_path = prefix("zeros");
    let zs = obj
        .get("zeros")
        .ok_or_else(|| field_error(&zeros_path, "missing field"))?
        .as_array()
        .ok_or_else(|| field_error(&zeros_path, "expected an array"))?;
    let zeros = zs
        .iter()
        .enumerate()
        .map(|(k, z)| complex_at(z, &format!("{zeros_path}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    for (k, z) in zeros.iter().enumerate() {
        if z.norm() >= 1.0 || z.norm().is_nan() {
            return Err(field_error(&zeros_path, format!("zeros[{k}] = {z} lies outside the open unit disk")));
        }
    }
    if zeros.is_empty() {
        return Err(field_error(&zeros_path, "at least one zero is required"));
    }
    let theta = FiniteBlaschkeProduct::with_gamma(gamma, &zeros).map_err(|e| field_error(&prefix("gamma"), e))?;
    let mut clark = Vec::new();
    if let Some(c) = obj.get("clark") {
        let cpath = prefix("clark");
        let cs = c.as_array().ok_or_else(|| field_error(&cpath, "expected an array"))?;
        for (k, p) in cs.iter().enumerate() {
            let at = format!("{cpath}[{k}]");
            match parameter_at(p, &at)? {
                ExtendedParameter::Circle(u) => clark.push(u),
                _ => return Err(field_error(&at, "Clark parameters must lie on the unit circle")),
            }
        }
    }
    Ok(ThetaInput { theta, clark })
}

pub fn parse_theta(text: &str) -> Result<ThetaInput> {
    theta_at(&syntax(text)?, "")
}

pub fn parse_query(text: &str) -> Result<IsoQuery> {
    let v = syntax(text)?;
    let obj = v.as_object().ok_or_else(|| field_error("query", "expected an object"))?;
    let get = |k: &str| obj.get(k).ok_or_else(|| field_error(k, "missing field"));
    let t1 = theta_at(get("theta1")?, "theta1")?.theta;
    let t2 = theta_at(get("theta2")?, "theta2")?.theta;
    let a1 = parameter_at(get("a1")?, "a1")?;
    let a2 = parameter_at(get("a2")?, "a2")?;
    Ok(IsoQuery::new(t1, a1, t2, a2))
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Serialized `ψ(z) = λ(z − c)/(1 − c̄z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub lambda: [f64; 2],
    pub c: [f64; 2],
}

impl From<&MoebiusAutomorphism> for AutomorphismReport {
    fn from(m: &MoebiusAutomorphism) -> Self {
        Self { lambda: pair(m.lambda.value()), c: pair(m.c.value()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub zeta: [f64; 2],
    pub psi: AutomorphismReport,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub verdict: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaInvariant>,
    /// Residual of the witness on samples not used by the solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fresh_residual: Option<f64>,
    /// Span residual of the induced spatial unitary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    pub sharp1: bool,
    pub sharp2: bool,
    /// Disk parameters of the reduced equation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<[[f64; 2]; 2]>,
}

impl DecisionReport {
    /// The report for `decision`, without the re-verification fields.
    pub fn new(decision: &IsoDecision) -> Self {
        let v = &decision.verdict;
        let mut r = Self {
            verdict: v.label().to_string(),
            exit_code: v.exit_code(),
            reason: None,
            witness: None,
            kappa: None,
            fresh_residual: None,
            span_residual: None,
            best_residual: None,
            starts: None,
            sharp1: decision.reduction.sharp1,
            sharp2: decision.reduction.sharp2,
            reduced: decision.reduced.map(|(p, q)| [pair(p.value()), pair(q.value())]),
        };
        match v {
            Verdict::Equivalent(Certificate::Witness(w)) => {
                r.witness = Some(WitnessReport { zeta: pair(w.zeta.value()), psi: (&w.psi).into(), residual: w.residual });
            }
            Verdict::Equivalent(Certificate::Kappa(k)) => r.kappa = Some(*k),
            Verdict::NotEquivalent(reason) => r.reason = Some(reason.code().to_string()),
            Verdict::Undetermined { best_residual, starts } => {
                r.best_residual = Some(*best_residual);
                r.starts = Some(*starts);
            }
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClarkReport {
    pub measure: ClarkMeasure,
    pub total_mass: f64,
    pub kappa: KappaInvariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescribeReport {
    pub degree: usize,
    pub gamma: [f64; 2],
    pub zeros: Vec<[f64; 2]>,
    pub theta_at_zero: [f64; 2],
    /// Pairs with `Θ(uz) = vΘ(z)`.
    pub rotational_symmetries: Vec<SymmetryReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub same_argument: Option<[f64; 2]>,
    pub clark: Vec<ClarkReport>,
}

pub fn describe(input: &ThetaInput) -> Result<DescribeReport> {
    let t = &input.theta;
    let clark = input
        .clark
        .iter()
        .map(|&a| {
            let m = t.clark_measure(a)?;
            Ok(ClarkReport { total_mass: m.total_mass(), kappa: m.kappa(), measure: m })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescribeReport {
        degree: t.degree(),
        gamma: pair(t.gamma().value()),
        zeros: t.zero_values().into_iter().map(pair).collect(),
        theta_at_zero: pair(t.eval_unchecked(C64::new(0.0, 0.0))),
        rotational_symmetries: t
            .rotational_symmetry()
            .into_iter()
            .map(|(u, v)| SymmetryReport { u: pair(u.value()), v: pair(v.value()) })
            .collect(),
        same_argument: t.same_argument_zeros().map(|v| pair(v.value())),
        clark,
    })
}
