//! JSON instance and result files. Every integer of an instance is a decimal
//! string so that no consumer ever rounds it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::arith::{AffineMap, Domain, Mat2, Vec2};
use crate::error::{Error, Result};
use crate::instance::{Budget, Config, Exhaustion, NoCertificate, ProblemInstance, ProblemTag, Verdict, Word};
use crate::machines::{Bca, BcaTransition, Poly, Prm, PrmTransition};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn is_decimal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && (digits == "0" || !digits.starts_with('0'))
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    let s = v.as_str().ok_or_else(|| schema(format!("expected a decimal string, got {v}")))?;
    if !is_decimal(s) {
        return Err(schema(format!("malformed integer {s:?}")));
    }
    s.parse().map_err(|_| schema(format!("malformed integer {s:?}")))
}

pub fn int_json(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array, got {v}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

/// `[[m11, m12], [m21, m22]]`, or an upper-triangular `[a, b, c]`.
pub fn parse_matrix(v: &Value) -> Result<Mat2> {
    let items = array(v, "matrix")?;
    match items.as_slice() {
        [r1, r2] => {
            let (r1, r2) = (array(r1, "matrix row")?, array(r2, "matrix row")?);
            if r1.len() != 2 || r2.len() != 2 {
                return Err(schema("matrix rows must have two entries"));
            }
            Ok(Mat2::new(parse_int(&r1[0])?, parse_int(&r1[1])?, parse_int(&r2[0])?, parse_int(&r2[1])?))
        }
        [a, b, c] => Ok(Mat2::new(parse_int(a)?, parse_int(b)?, BigInt::zero(), parse_int(c)?)),
        _ => Err(schema(format!("matrix must be 2x2 or an [a, b, c] triple, got {v}"))),
    }
}

pub fn matrix_json(m: &Mat2) -> Value {
    json!([[int_json(&m.m11), int_json(&m.m12)], [int_json(&m.m21), int_json(&m.m22)]])
}

pub fn parse_vector(v: &Value) -> Result<Vec2> {
    match array(v, "vector")?.as_slice() {
        [a, b] => Ok(Vec2::new(parse_int(a)?, parse_int(b)?)),
        _ => Err(schema(format!("vector must have two entries, got {v}"))),
    }
}

pub fn vector_json(v: &Vec2) -> Value {
    json!([int_json(&v.v1), int_json(&v.v2)])
}

/// `{"num", "den"}` or a plain decimal string.
pub fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Object(obj) => {
            let den = parse_int(field(obj, "den")?)?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(BigRational::new(parse_int(field(obj, "num")?)?, den))
        }
        other => Ok(BigRational::from_integer(parse_int(other)?)),
    }
}

pub fn rational_json(q: &BigRational) -> Value {
    json!({"num": int_json(q.numer()), "den": int_json(q.denom())})
}

pub fn parse_affine(v: &Value, domain: Domain) -> Result<AffineMap> {
    let obj = v.as_object().ok_or_else(|| schema(format!("affine map must be an object, got {v}")))?;
    let a = parse_int(field(obj, "a")?)?;
    let b = parse_int(field(obj, "b")?)?;
    let c = obj.get("c").map(parse_int).transpose()?.unwrap_or_else(BigInt::one);
    match domain {
        Domain::Z if c.is_one() => Ok(AffineMap::z(a, b)),
        Domain::Z => Err(schema(format!("integer affine map has c = {c}"))),
        Domain::Q => AffineMap::q(a, b, c),
    }
}

pub fn affine_json(f: &AffineMap) -> Value {
    match f.domain() {
        Domain::Z => json!({"a": int_json(f.a()), "b": int_json(f.b())}),
        Domain::Q => json!({"a": int_json(f.a()), "b": int_json(f.b()), "c": int_json(f.c())}),
    }
}

fn parse_state(v: &Value, states: &[String]) -> Result<usize> {
    let idx = match v {
        Value::Number(n) => n.as_u64().map(|i| i as usize),
        Value::String(s) => states.iter().position(|q| q == s),
        _ => None,
    };
    idx.filter(|&i| i < states.len()).ok_or_else(|| schema(format!("unknown state {v}")))
}

fn parse_config(v: &Value, states: &[String]) -> Result<Config> {
    let obj = v.as_object().ok_or_else(|| schema(format!("configuration must be an object, got {v}")))?;
    Ok(Config { state: parse_state(field(obj, "state")?, states)?, value: parse_int(field(obj, "value")?)? })
}

fn config_json(c: &Config) -> Value {
    json!({"state": c.state, "value": int_json(&c.value)})
}

fn parse_states(obj: &Map<String, Value>) -> Result<Vec<String>> {
    array(field(obj, "states")?, "states")?
        .iter()
        .map(|s| s.as_str().map(str::to_owned).ok_or_else(|| schema("state names must be strings")))
        .collect()
}

fn transition_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("transition must be an object, got {v}")))
}

pub fn parse_bca(v: &Value) -> Result<Bca> {
    let obj = v.as_object().ok_or_else(|| schema("machine must be an object"))?;
    let states = parse_states(obj)?;
    let bound = parse_int(field(obj, "bound")?)?;
    let transitions = array(field(obj, "transitions")?, "transitions")?
        .iter()
        .map(|t| {
            let t = transition_object(t)?;
            Ok(BcaTransition {
                from: parse_state(field(t, "from")?, &states)?,
                delta: parse_int(field(t, "delta")?)?,
                to: parse_state(field(t, "to")?, &states)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Bca { states, bound, transitions };
    m.validate()?;
    Ok(m)
}

pub fn bca_json(m: &Bca) -> Value {
    let transitions: Vec<Value> = m
        .transitions
        .iter()
        .map(|t| json!({"from": t.from, "delta": int_json(&t.delta), "to": t.to}))
        .collect();
    json!({"states": m.states, "bound": int_json(&m.bound), "transitions": transitions})
}

/// Updates are coefficient lists in ascending degree: `["b", "a"]` is `a·x + b`.
pub fn parse_prm(v: &Value) -> Result<Prm> {
    let obj = v.as_object().ok_or_else(|| schema("machine must be an object"))?;
    let states = parse_states(obj)?;
    let transitions = array(field(obj, "transitions")?, "transitions")?
        .iter()
        .map(|t| {
            let t = transition_object(t)?;
            let coeffs = array(field(t, "update")?, "update")?.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
            Ok(PrmTransition {
                from: parse_state(field(t, "from")?, &states)?,
                update: Poly::new(coeffs),
                to: parse_state(field(t, "to")?, &states)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Prm { states, transitions };
    m.validate()?;
    Ok(m)
}

pub fn prm_json(m: &Prm) -> Value {
    let transitions: Vec<Value> = m
        .transitions
        .iter()
        .map(|t| {
            let update: Vec<Value> = t.update.coeffs().iter().map(int_json).collect();
            json!({"from": t.from, "update": update, "to": t.to})
        })
        .collect();
    json!({"states": m.states, "transitions": transitions})
}

fn parse_list<T>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    array(v, "generators")?.iter().map(f).collect()
}

pub fn instance_from_value(v: &Value) -> Result<ProblemInstance> {
    let obj = v.as_object().ok_or_else(|| schema("instance must be a JSON object"))?;
    let tag_name = field(obj, "problem")?.as_str().ok_or_else(|| schema("problem tag must be a string"))?;
    let tag = ProblemTag::parse(tag_name)?;
    let f = |k: &str| field(obj, k);
    let matrices = || parse_list(f("generators")?, parse_matrix);
    Ok(match tag {
        ProblemTag::AffineMembershipZ => ProblemInstance::AffineMembershipZ {
            functions: parse_list(f("generators")?, |g| parse_affine(g, Domain::Z))?,
            target: parse_affine(f("target")?, Domain::Z)?,
        },
        ProblemTag::AffineReachabilityZ => ProblemInstance::AffineReachabilityZ {
            functions: parse_list(f("generators")?, |g| parse_affine(g, Domain::Z))?,
            x: parse_int(f("x")?)?,
            y: parse_int(f("y")?)?,
        },
        ProblemTag::AffineReachabilityQ => ProblemInstance::AffineReachabilityQ {
            functions: parse_list(f("generators")?, |g| parse_affine(g, Domain::Q))?,
            x: parse_rational(f("x")?)?,
            y: parse_rational(f("y")?)?,
        },
        ProblemTag::MatrixMembership => {
            ProblemInstance::Membership { generators: matrices()?, target: parse_matrix(f("target")?)? }
        }
        ProblemTag::VectorReachability => ProblemInstance::VectorReachability {
            generators: matrices()?,
            x: parse_vector(f("x")?)?,
            y: parse_vector(f("y")?)?,
        },
        ProblemTag::ScalarReachability => ProblemInstance::ScalarReachability {
            generators: matrices()?,
            x: parse_vector(f("x")?)?,
            y: parse_vector(f("y")?)?,
            lambda: parse_int(f("lambda")?)?,
        },
        ProblemTag::ZeroReachability => ProblemInstance::ZeroReachability {
            generators: matrices()?,
            x: parse_vector(f("x")?)?,
            y: parse_vector(f("y")?)?,
        },
        ProblemTag::Mortality => ProblemInstance::Mortality { generators: matrices()? },
        ProblemTag::BcaReachability => {
            let machine = parse_bca(f("machine")?)?;
            let from = parse_config(f("from")?, &machine.states)?;
            let to = parse_config(f("to")?, &machine.states)?;
            ProblemInstance::BcaReachability { machine, from, to }
        }
        ProblemTag::PrmReachability => {
            let machine = parse_prm(f("machine")?)?;
            let from = parse_config(f("from")?, &machine.states)?;
            let to = parse_config(f("to")?, &machine.states)?;
            ProblemInstance::PrmReachability { machine, from, to }
        }
    })
}

pub fn instance_to_value(inst: &ProblemInstance) -> Value {
    let mut obj = Map::new();
    obj.insert("problem".into(), json!(inst.tag().name()));
    let mut put = |k: &str, v: Value| {
        obj.insert(k.into(), v);
    };
    let mats = |gens: &[Mat2]| Value::Array(gens.iter().map(matrix_json).collect());
    let maps = |fs: &[AffineMap]| Value::Array(fs.iter().map(affine_json).collect());
    match inst {
        ProblemInstance::AffineMembershipZ { functions, target } => {
            put("generators", maps(functions));
            put("target", affine_json(target));
        }
        ProblemInstance::AffineReachabilityZ { functions, x, y } => {
            put("generators", maps(functions));
            put("x", int_json(x));
            put("y", int_json(y));
        }
        ProblemInstance::AffineReachabilityQ { functions, x, y } => {
            put("generators", maps(functions));
            put("x", rational_json(x));
            put("y", rational_json(y));
        }
        ProblemInstance::Membership { generators, target } => {
            put("generators", mats(generators));
            put("target", matrix_json(target));
        }
        ProblemInstance::VectorReachability { generators, x, y }
        | ProblemInstance::ZeroReachability { generators, x, y } => {
            put("generators", mats(generators));
            put("x", vector_json(x));
            put("y", vector_json(y));
        }
        ProblemInstance::ScalarReachability { generators, x, y, lambda } => {
            put("generators", mats(generators));
            put("x", vector_json(x));
            put("y", vector_json(y));
            put("lambda", int_json(lambda));
        }
        ProblemInstance::Mortality { generators } => put("generators", mats(generators)),
        ProblemInstance::BcaReachability { machine, from, to } => {
            put("machine", bca_json(machine));
            put("from", config_json(from));
            put("to", config_json(to));
        }
        ProblemInstance::PrmReachability { machine, from, to } => {
            put("machine", prm_json(machine));
            put("from", config_json(from));
            put("to", config_json(to));
        }
    }
    Value::Object(obj)
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    instance_from_value(&v)
}

pub fn write_instance(inst: &ProblemInstance) -> String {
    serde_json::to_string_pretty(&instance_to_value(inst)).expect("JSON values always serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Yes,
    No,
    Unknown,
}

/// Limits a solve ran under, echoed in the result file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub max_len: usize,
    pub max_magnitude: Option<String>,
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub verdict: VerdictKind,
    pub witness: Option<Word>,
    pub certificate: Option<NoCertificate>,
    /// Why the answer is unknown; absent otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustion: Option<Exhaustion>,
    pub solver: String,
    pub budget: BudgetReport,
}

impl ResultFile {
    pub fn new(verdict: &Verdict, solver: &str, budget: &Budget, max_steps: usize) -> Self {
        let budget = BudgetReport {
            max_len: budget.max_len,
            max_magnitude: budget.max_magnitude.as_ref().map(BigInt::to_string),
            max_steps,
        };
        let (kind, witness, certificate, exhaustion) = match verdict {
            Verdict::Yes(w) => (VerdictKind::Yes, Some(w.clone()), None, None),
            Verdict::No(c) => (VerdictKind::No, None, Some(*c), None),
            Verdict::Unknown(e) => (VerdictKind::Unknown, None, None, Some(*e)),
        };
        ResultFile { verdict: kind, witness, certificate, exhaustion, solver: solver.to_owned(), budget }
    }

    pub fn verdict(&self) -> Result<Verdict> {
        match (self.verdict, &self.witness, self.certificate) {
            (VerdictKind::Yes, Some(w), None) => Ok(Verdict::Yes(w.clone())),
            (VerdictKind::No, None, Some(c)) => Ok(Verdict::No(c)),
            (VerdictKind::Unknown, None, None) => Ok(Verdict::Unknown(self.exhaustion.unwrap_or(Exhaustion::Length))),
            _ => Err(schema("witness must be present iff the verdict is yes; certificate iff no")),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result files always serialize")
    }
}
