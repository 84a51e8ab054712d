//! The `rcvv/1` JSON form file: exact rationals as `{num, den}` integer pairs,
//! floats as full-precision JSON numbers.

use crate::error::CliError;
use rcvv::jacobi::ThetaComponentForm;
use rcvv::skewjacobi::SkewThetaForm;
use rcvv::{Backend, BigComplex, Coeff, FourierSeries, MultiplierData, VVForm};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Number;
use std::str::FromStr;

pub const SCHEMA: &str = "rcvv/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonRational {
    pub num: Number,
    pub den: Number,
}

/// A coefficient part: exact rational or a float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Rational(JsonRational),
    Float(Number),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonTerm {
    pub n: i64,
    pub re: JsonScalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<JsonScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonTensor {
    pub left: Vec<JsonRational>,
    pub right: Vec<JsonRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub command: String,
    #[serde(default)]
    pub inputs: Vec<InputHash>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFileV1 {
    pub schema: String,
    pub kind: String,
    pub weight: JsonRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    pub dim: usize,
    pub offsets: Vec<JsonRational>,
    /// Smallest component precision.
    pub precision: i64,
    /// Present only when components carry different precisions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component_precisions: Option<Vec<i64>>,
    pub backend: String,
    /// Mantissa bits of float coefficients; defaults to `RCVV_FLOAT_PREC`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub float_prec: Option<u32>,
    pub components: Vec<Vec<JsonTerm>>,
    pub cusp: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<JsonTensor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    /// Common symbolic factor multiplying every coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

/// A parsed form of any of the three kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Vector(VVForm),
    Jacobi(ThetaComponentForm),
    Skew(SkewThetaForm),
}

impl Form {
    pub fn kind(&self) -> &'static str {
        match self {
            Form::Vector(_) => "vvform",
            Form::Jacobi(_) => "jacobi",
            Form::Skew(_) => "skew",
        }
    }

    pub fn into_vector(self) -> Result<VVForm, CliError> {
        match self {
            Form::Vector(f) => Ok(f),
            other => Err(CliError::Validation(format!("expected a vvform, got {}", other.kind()))),
        }
    }

    pub fn into_jacobi(self) -> Result<ThetaComponentForm, CliError> {
        match self {
            Form::Jacobi(f) => Ok(f),
            other => Err(CliError::Validation(format!("expected a jacobi form, got {}", other.kind()))),
        }
    }

    pub fn into_skew(self) -> Result<SkewThetaForm, CliError> {
        match self {
            Form::Skew(f) => Ok(f),
            other => Err(CliError::Validation(format!("expected a skew form, got {}", other.kind()))),
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_integer(n: &Number, what: &str) -> Result<Integer, CliError> {
    let s = n.to_string();
    Integer::from_str(&s).map_err(|_| invalid(format!("{what}: {s} is not an integer")))
}

pub fn rational_to_json(q: &Rational) -> JsonRational {
    JsonRational {
        num: Number::from_str(&q.numer().to_string()).expect("integer literal"),
        den: Number::from_str(&q.denom().to_string()).expect("integer literal"),
    }
}

pub fn rational_from_json(j: &JsonRational, what: &str) -> Result<Rational, CliError> {
    let num = parse_integer(&j.num, what)?;
    let den = parse_integer(&j.den, what)?;
    if den <= 0 {
        return Err(invalid(format!("{what}: denominator {den} must be positive")));
    }
    Ok(Rational::from((num, den)))
}

fn float_to_json(x: &Float) -> Result<Number, CliError> {
    if !x.is_finite() {
        return Err(invalid("non-finite float coefficient"));
    }
    if x.is_zero() {
        return Ok(Number::from(0));
    }
    // MPFR prints enough digits for an exact read-back at this precision.
    let s = x.to_string_radix(10, None);
    Number::from_str(&s).map_err(|e| CliError::Internal(format!("float {s} does not print as JSON: {e}")))
}

fn float_from_json(n: &Number, prec: u32) -> Result<Float, CliError> {
    let s = n.to_string();
    let parsed = Float::parse(&s).map_err(|e| invalid(format!("float {s}: {e}")))?;
    let x = Float::with_val(prec, parsed);
    if !x.is_finite() {
        return Err(invalid(format!("float {s} is not finite")));
    }
    Ok(x)
}

fn term_to_json(n: i64, c: &Coeff) -> Result<JsonTerm, CliError> {
    Ok(match c {
        Coeff::Rational(q) => JsonTerm { n, re: JsonScalar::Rational(rational_to_json(q)), im: None },
        Coeff::Complex(z) => JsonTerm {
            n,
            re: JsonScalar::Float(float_to_json(&z.re)?),
            im: (!z.im.is_zero()).then(|| float_to_json(&z.im)).transpose()?.map(JsonScalar::Float),
        },
    })
}

fn term_from_json(t: &JsonTerm, backend: Backend, where_: &str) -> Result<Coeff, CliError> {
    match backend {
        Backend::Rational => {
            let JsonScalar::Rational(q) = &t.re else {
                return Err(invalid(format!("{where_}: rational backend needs {{num, den}} coefficients")));
            };
            if t.im.is_some() {
                return Err(invalid(format!("{where_}: rational backend has no imaginary parts")));
            }
            Ok(Coeff::Rational(rational_from_json(q, where_)?))
        }
        Backend::Float(prec) => {
            let part = |s: &JsonScalar| -> Result<Float, CliError> {
                match s {
                    JsonScalar::Float(x) => float_from_json(x, prec),
                    JsonScalar::Rational(q) => Ok(Float::with_val(prec, &rational_from_json(q, where_)?)),
                }
            };
            let re = part(&t.re)?;
            let im = match &t.im {
                Some(s) => part(s)?,
                None => Float::new(prec),
            };
            Ok(Coeff::Complex(BigComplex::from_parts(re, im)))
        }
    }
}

fn series_to_json(s: &FourierSeries) -> Result<Vec<JsonTerm>, CliError> {
    s.terms().map(|(n, c)| term_to_json(n, c)).collect()
}

fn vector_parts(f: &VVForm) -> Result<(Vec<JsonRational>, i64, Option<Vec<i64>>, Vec<Vec<JsonTerm>>), CliError> {
    let offsets = f.offsets().iter().map(rational_to_json).collect();
    let precs: Vec<i64> = f.components().iter().map(|c| c.precision()).collect();
    let precision = precs.iter().copied().min().unwrap_or(0);
    let component_precisions = precs.iter().any(|p| *p != precision).then_some(precs);
    let components = f.components().iter().map(series_to_json).collect::<Result<_, _>>()?;
    Ok((offsets, precision, component_precisions, components))
}

fn backend_fields(b: Backend) -> (String, Option<u32>) {
    match b {
        Backend::Rational => ("rational".into(), None),
        Backend::Float(p) => ("float".into(), Some(p)),
    }
}

/// Serializes a form without provenance.
pub fn to_file(form: &Form) -> Result<FormFileV1, CliError> {
    let (vv, index, weight) = match form {
        Form::Vector(f) => (f.clone(), None, f.weight().clone()),
        Form::Jacobi(f) => (f.psi(), Some(f.index()), f.weight().clone()),
        Form::Skew(f) => (f.psi_sk(), Some(f.index()), f.weight().clone()),
    };
    let (offsets, precision, component_precisions, components) = vector_parts(&vv)?;
    let (backend, float_prec) = backend_fields(vv.backend());
    let tensor = match form {
        Form::Vector(f) => f.meta().tensor().map(|t| JsonTensor {
            left: t.left.iter().map(rational_to_json).collect(),
            right: t.right.iter().map(rational_to_json).collect(),
        }),
        _ => None,
    };
    Ok(FormFileV1 {
        schema: SCHEMA.into(),
        kind: form.kind().into(),
        weight: rational_to_json(&weight),
        index,
        dim: vv.dim(),
        offsets,
        precision,
        component_precisions,
        backend,
        float_prec,
        components,
        cusp: vv.cusp_flag(),
        tensor,
        provenance: None,
        scale: None,
    })
}

/// Validates every invariant of the file and builds the form.
pub fn from_file(file: &FormFileV1) -> Result<Form, CliError> {
    if file.schema != SCHEMA {
        return Err(invalid(format!("schema tag {:?}, expected {SCHEMA:?}", file.schema)));
    }
    let weight = rational_from_json(&file.weight, "weight")?;
    if file.offsets.len() != file.dim {
        return Err(invalid(format!("offsets has {} entries but dim = {}", file.offsets.len(), file.dim)));
    }
    if file.components.len() != file.dim {
        return Err(invalid(format!("components has {} entries but dim = {}", file.components.len(), file.dim)));
    }
    if file.dim == 0 {
        return Err(invalid("dim must be positive"));
    }
    let backend = match (file.backend.as_str(), file.float_prec) {
        ("rational", None) => Backend::Rational,
        ("rational", Some(_)) => return Err(invalid("float_prec given for the rational backend")),
        ("float", Some(p)) => Backend::Float(p),
        ("float", None) => Backend::Float(rcvv::number::float_prec_from_env().map_err(CliError::from)?),
        (other, _) => return Err(invalid(format!("unknown backend {other:?}"))),
    };
    if let Backend::Float(p) = backend {
        if p < rcvv::number::MIN_FLOAT_PREC {
            return Err(invalid(format!("float_prec {p} is below {}", rcvv::number::MIN_FLOAT_PREC)));
        }
    }
    let precs: Vec<i64> = match &file.component_precisions {
        Some(p) if p.len() != file.dim => {
            return Err(invalid(format!("component_precisions has {} entries but dim = {}", p.len(), file.dim)))
        }
        Some(p) => {
            if p.iter().copied().min() != Some(file.precision) {
                return Err(invalid("precision must equal the smallest component precision"));
            }
            p.clone()
        }
        None => vec![file.precision; file.dim],
    };
    let mut series = Vec::with_capacity(file.dim);
    for (j, (terms, prec)) in file.components.iter().zip(&precs).enumerate() {
        let offset = rational_from_json(&file.offsets[j], &format!("offset {j}"))?;
        let mut seen = std::collections::BTreeSet::new();
        let mut coeffs = Vec::with_capacity(terms.len());
        for t in terms {
            let where_ = format!("component {j} index {}", t.n);
            if t.n < 0 || t.n > *prec {
                return Err(invalid(format!("{where_}: index outside 0..={prec}")));
            }
            if !seen.insert(t.n) {
                return Err(invalid(format!("{where_}: duplicate index")));
            }
            coeffs.push((t.n, term_from_json(t, backend, &where_)?));
        }
        series.push(FourierSeries::new(offset, *prec, backend, coeffs)?);
    }
    match file.kind.as_str() {
        "vvform" => {
            if file.index.is_some() {
                return Err(invalid("index given for a vvform"));
            }
            let offsets = series.iter().map(|s| s.offset().clone()).collect();
            let mut meta = MultiplierData::new(weight, offsets)?;
            if let Some(t) = &file.tensor {
                let conv = |v: &[JsonRational], what: &str| -> Result<Vec<Rational>, CliError> {
                    v.iter().map(|q| rational_from_json(q, what)).collect()
                };
                meta = meta.with_tensor_factors(conv(&t.left, "tensor.left")?, conv(&t.right, "tensor.right")?)?;
            }
            Ok(Form::Vector(VVForm::new(meta, series, file.cusp)?))
        }
        "jacobi" | "skew" => {
            let m = file.index.ok_or_else(|| invalid(format!("{} form needs an index", file.kind)))?;
            if m == 0 || file.dim != 2 * m as usize {
                return Err(invalid(format!("index {m} needs dim {}, got {}", 2 * m as usize, file.dim)));
            }
            if file.tensor.is_some() {
                return Err(invalid("tensor factors only apply to vvforms"));
            }
            let offsets: Vec<Rational> = series.iter().map(|s| s.offset().clone()).collect();
            let meta = MultiplierData::new(Rational::from(&weight - Rational::from((1, 2))), offsets)?;
            let vv = VVForm::new(meta, series, file.cusp)?;
            if file.kind == "jacobi" {
                Ok(Form::Jacobi(ThetaComponentForm::psi_inv(&vv)?))
            } else {
                Ok(Form::Skew(SkewThetaForm::psi_sk_inv(&vv)?))
            }
        }
        other => Err(invalid(format!("unknown kind {other:?}"))),
    }
}

pub fn parse_str(s: &str) -> Result<(Form, FormFileV1), CliError> {
    let file: FormFileV1 = serde_json::from_str(s).map_err(|e| invalid(format!("malformed form file: {e}")))?;
    let form = from_file(&file)?;
    Ok((form, file))
}

pub fn to_string(file: &FormFileV1) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(file).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcvv::fixtures;

    fn round_trip(form: &Form) -> Form {
        let s = to_string(&to_file(form).unwrap()).unwrap();
        parse_str(&s).unwrap().0
    }

    #[test]
    fn rational_round_trip() {
        let f = Form::Vector(fixtures::delta(12));
        assert_eq!(round_trip(&f), f);
        let t = Form::Vector(fixtures::theta_quarter(30));
        assert_eq!(round_trip(&t), t);
    }

    #[test]
    fn big_coefficients_survive() {
        // sigma_11(40) * 65520 / 691 overflows i64.
        let f = Form::Vector(fixtures::eisenstein(12, 40).unwrap());
        assert_eq!(round_trip(&f), f);
    }

    #[test]
    fn float_round_trip() {
        let f = Form::Vector(fixtures::delta(8).to_float(200));
        assert_eq!(round_trip(&f), f);
    }

    #[test]
    fn jacobi_kind_round_trip() {
        let j = Form::Jacobi(ThetaComponentForm::theta(2, 3, 6).unwrap());
        assert_eq!(round_trip(&j), j);
    }

    #[test]
    fn rejects_bad_documents() {
        let good = to_file(&Form::Vector(fixtures::delta(4))).unwrap();
        let mut bad = good.clone();
        bad.schema = "rcvv/0".into();
        assert!(from_file(&bad).is_err());
        let mut bad = good.clone();
        bad.components[0].push(JsonTerm { n: 9, re: JsonScalar::Rational(rational_to_json(&Rational::from(1))), im: None });
        assert!(from_file(&bad).is_err());
        let mut bad = good.clone();
        bad.weight.den = Number::from(0);
        assert!(from_file(&bad).is_err());
        let mut bad = good;
        bad.offsets[0] = rational_to_json(&Rational::from(1));
        assert!(from_file(&bad).is_err());
    }
}
