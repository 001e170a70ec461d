//! JSON encodings of the engine's types.
//!
//! Exact data is written with rationals as canonical `"p/q"` strings; floats
//! only appear in Borel outputs, as 17-significant-digit strings. Objects are
//! built as `serde_json::Value`, whose maps keep keys sorted, so identical
//! inputs give byte-identical output.

use std::collections::BTreeMap;

use getzler_core::borel::{BorelSpec, TaylorCheckReport};
use getzler_core::getzler::KappaEntry;
use getzler_core::heat::{expected_source_factor, HeatExpansion};
use getzler_core::index::{IndexReport, McKeanSingerReport};
use getzler_core::rational::{self, Q};
use getzler_core::selfcheck::SelfcheckReport;
use getzler_core::{
    CurvatureModel, FloatForm, FormElement, GaussSymbol, HalfInt, Monomial, ScalarResult,
    TaylorSymbol,
};
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::error::CliError;

/// A rational read from a `"p/q"`, integer, or decimal string.
#[derive(Clone, Debug)]
pub struct Rat(pub Q);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        rational::parse(&s)
            .map(Rat)
            .map_err(|_| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct Half(pub HalfInt);

impl<'de> Deserialize<'de> for Half {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        HalfInt::parse(&s)
            .map(Half)
            .map_err(|_| D::Error::custom(format!("invalid half-integer {s:?}")))
    }
}

/// A float read from a decimal string.
#[derive(Clone, Copy, Debug)]
pub struct Decimal(pub f64);

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Decimal(v)),
            _ => Err(D::Error::custom(format!("invalid decimal {s:?}"))),
        }
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Deserializes with the JSON path and line/column of the first error.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Input(format!(
            "{what}: at line {} column {}, field `{path}`: {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    de.end()
        .map_err(|e| CliError::Input(format!("{what}: trailing data: {e}")))?;
    Ok(value)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

fn q(v: &Q) -> Value {
    Value::String(rational::format(v))
}

// forms

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    coeff: Rat,
    index: Vec<usize>,
}

pub fn form_to_json(f: &FormElement) -> Value {
    Value::Array(
        f.sorted_terms()
            .iter()
            .map(|(b, c)| json!({"coeff": q(c), "index": b.indices()}))
            .collect(),
    )
}

fn form_from_json(n: usize, terms: Vec<TermJson>) -> Result<FormElement, CliError> {
    Ok(FormElement::from_terms(
        n,
        terms.into_iter().map(|t| (t.index, t.coeff.0)),
    )?)
}

pub fn float_form_to_json(f: &FloatForm) -> Value {
    Value::Array(
        f.sorted_terms()
            .iter()
            .map(|(b, c)| json!({"coeff": format_float(*c), "index": b.indices()}))
            .collect(),
    )
}

// models

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaJson {
    i: usize,
    j: usize,
    form: Vec<TermJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    n: usize,
    s: Rat,
    #[serde(default)]
    kappa: Vec<KappaJson>,
}

impl ModelJson {
    pub fn build(self) -> Result<CurvatureModel, CliError> {
        let n = self.n;
        let entries = self
            .kappa
            .into_iter()
            .map(|k| Ok(KappaEntry::new(k.i, k.j, form_from_json(n, k.form)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(CurvatureModel::build(n, self.s.0, &entries)?)
    }
}

pub fn model_to_json(m: &CurvatureModel) -> Value {
    let kappa: Vec<Value> = m
        .upper_entries()
        .iter()
        .map(|e| json!({"i": e.i, "j": e.j, "form": form_to_json(&e.form)}))
        .collect();
    json!({"n": m.n(), "s": q(m.scalar_curvature()), "kappa": kappa})
}

// symbols

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolTermJson {
    q: Rat,
    xi: Vec<u32>,
    #[serde(default)]
    tau: u32,
    form: Vec<TermJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    n: usize,
    terms: Vec<SymbolTermJson>,
}

impl SymbolJson {
    pub fn build(self) -> Result<GaussSymbol, CliError> {
        let n = self.n;
        let terms = self
            .terms
            .into_iter()
            .map(|t| {
                Ok((
                    t.q.0,
                    Monomial::new(t.xi, t.tau),
                    form_from_json(n, t.form)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(GaussSymbol::from_terms(n, terms)?)
    }
}

pub fn symbol_to_json(s: &GaussSymbol) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(w, m, f)| json!({"q": q(w), "xi": m.xi, "tau": m.tau, "form": form_to_json(f)}))
        .collect();
    json!({"n": s.n(), "terms": terms})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorJson {
    n: usize,
    #[serde(default)]
    order: i64,
    coeffs: Vec<SymbolJson>,
}

impl TaylorJson {
    pub fn build(self) -> Result<TaylorSymbol, CliError> {
        let coeffs = self
            .coeffs
            .into_iter()
            .map(SymbolJson::build)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TaylorSymbol::new(self.n, self.order, coeffs)?)
    }
}

pub fn taylor_to_json(t: &TaylorSymbol) -> Value {
    let coeffs: Vec<Value> = t.coeffs().iter().map(symbol_to_json).collect();
    json!({"n": t.n(), "order": t.order(), "coeffs": coeffs})
}

pub enum Operand {
    Taylor(TaylorSymbol),
    Symbol(GaussSymbol),
}

/// A product operand: an object with `coeffs` is a Taylor symbol, anything
/// else a single symbol.
pub fn parse_operand(text: &str, what: &str) -> Result<Operand, CliError> {
    let probe: Value = parse(text, what)?;
    if probe.get("coeffs").is_some() {
        Ok(Operand::Taylor(parse::<TaylorJson>(text, what)?.build()?))
    } else {
        Ok(Operand::Symbol(parse::<SymbolJson>(text, what)?.build()?))
    }
}

// scalar results

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ScalarJson {
    terms: BTreeMap<String, Rat>,
    pi_power: Half,
    i_power: i64,
}

impl ScalarJson {
    pub fn build(self) -> Result<ScalarResult, CliError> {
        if !(0..4).contains(&self.i_power) {
            return Err(CliError::Input(format!(
                "iPower {} outside 0..3",
                self.i_power
            )));
        }
        let mut terms = BTreeMap::new();
        for (k, v) in self.terms {
            let h = HalfInt::parse(&k)
                .map_err(|_| CliError::Input(format!("invalid τ exponent {k:?}")))?;
            terms.insert(h, v.0);
        }
        Ok(ScalarResult::new(terms, self.pi_power.0, self.i_power))
    }
}

pub fn scalar_to_json(s: &ScalarResult) -> Value {
    let terms: serde_json::Map<String, Value> = s
        .terms()
        .iter()
        .map(|(h, c)| (h.to_halves_string(), q(c)))
        .collect();
    json!({
        "terms": terms,
        "piPower": s.pi_power().to_halves_string(),
        "iPower": s.i_power(),
    })
}

// reports

pub fn heat_to_json(h: &HeatExpansion) -> Result<Value, CliError> {
    let s = h.model.scalar_curvature();
    let residual = getzler_core::heat::heat_residual(&h.expansion, &h.model)?;
    let sources: Vec<Value> = h
        .sources
        .iter()
        .map(|sf| {
            json!({
                "order": sf.order,
                "previousOrder": sf.previous_order,
                "factor": sf.factor.as_ref().map(q),
                "factorOverS": sf.factor_over_s(s).as_ref().map(q),
                "expectedFactor": q(&expected_source_factor(s, sf.order)),
                "previousIsZero": sf.previous_is_zero,
            })
        })
        .collect();
    let order1 = (h.truncation() >= 1).then(|| symbol_to_json(&h.expansion.coeff(1)));
    Ok(json!({
        "K": h.truncation(),
        "model": model_to_json(&h.model),
        "expansion": taylor_to_json(&h.expansion),
        "residual_zero": residual.is_zero(),
        "initialConditions": h.initial_conditions_hold(),
        "oddOrdersVanish": h.odd_orders_vanish(),
        "order1Coefficient": order1,
        "sources": sources,
    }))
}

pub fn mckean_singer_to_json(r: &McKeanSingerReport) -> Value {
    let values: Vec<Value> = r
        .values
        .iter()
        .map(|row| Value::Array(row.iter().map(scalar_to_json).collect()))
        .collect();
    json!({
        "consistent": r.consistent,
        "tauSamples": r.tau_samples.iter().map(q).collect::<Vec<_>>(),
        "values": values,
    })
}

pub fn index_to_json(r: &IndexReport, k: usize, ms: &McKeanSingerReport) -> Value {
    json!({
        "K": k,
        "model": model_to_json(&r.model),
        "perOrder": r.per_order.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "tauIndependent": r.tau_independent,
        "aHatTop": q(&r.a_hat_top),
        "matchRatio": r.match_ratio.as_ref().map(q),
        "mckeanSinger": mckean_singer_to_json(ms),
    })
}

// borel

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelJson {
    coefficients: Vec<SymbolJson>,
    #[serde(default)]
    bounds: Option<Vec<Decimal>>,
    /// Derived from the bounds; accepted so that written specs read back.
    #[serde(default)]
    #[allow(dead_code)]
    epsilons: Option<Vec<Decimal>>,
    #[serde(default)]
    order: i64,
    #[serde(default)]
    tau: Option<Decimal>,
}

impl BorelJson {
    pub fn build(self) -> Result<BorelSpec, CliError> {
        let coeffs = self
            .coefficients
            .into_iter()
            .map(SymbolJson::build)
            .collect::<Result<Vec<_>, _>>()?;
        let bounds = self.bounds.map(|b| b.into_iter().map(|d| d.0).collect());
        let tau = self.tau.map(|d| d.0).unwrap_or(1.0);
        Ok(BorelSpec::build_with(coeffs, bounds, self.order, tau)?)
    }
}

pub fn borel_spec_to_json(b: &BorelSpec) -> Value {
    json!({
        "coefficients": b.coefficients().iter().map(symbol_to_json).collect::<Vec<_>>(),
        "bounds": b.bounds().iter().map(|x| format_float(*x)).collect::<Vec<_>>(),
        "epsilons": b.epsilons().iter().map(|x| format_float(*x)).collect::<Vec<_>>(),
        "order": b.order(),
        "tau": format_float(b.tau()),
    })
}

pub fn taylor_check_to_json(r: &TaylorCheckReport) -> Value {
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "xi": p.xi.iter().map(|x| format_float(*x)).collect::<Vec<_>>(),
                "estimate": float_form_to_json(&p.estimate),
                "expected": float_form_to_json(&p.expected),
                "relError": format_float(p.rel_error),
            })
        })
        .collect();
    json!({"k": r.k, "points": points, "maxRelError": format_float(r.max_rel_error)})
}

pub fn selfcheck_to_json(r: &SelfcheckReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "cases": c.cases, "detail": c.detail}))
        .collect();
    json!({"seed": r.seed, "passed": r.all_passed(), "checks": checks})
}
