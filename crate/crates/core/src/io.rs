//! JSON and CSV codecs.
//!
//! Every writer produces canonical JSON: object keys sorted, floats printed
//! as `{:.16e}` (17 significant digits, enough to round-trip any `f64`),
//! integers printed exactly, one trailing newline. Loading and saving again
//! reproduces the same bytes.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

use crate::complexity::{DecisionFunction, XorWitness};
use crate::diff::BasePoint;
use crate::domain::{CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::factorization::CliqueFactorization;
use crate::generative::{Class, GenerativeClassifier};
use crate::graph::{Dag, UndirectedGraph};
use crate::ipf::{Dataset, IpfReport};
use crate::scalar::Scalar;
use crate::table::TabularFunction;

/// Scalars with a canonical JSON form.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Result<Value>;
    fn from_json(v: &Value) -> Result<Self>;
}

fn number_from_literal(s: &str) -> Value {
    Value::Number(Number::from_str(s).expect("formatted literal is valid JSON"))
}

/// Canonical JSON number for a finite float.
pub fn float_json(x: f64) -> Result<Value> {
    if !x.is_finite() {
        return Err(Error::Format(format!("cannot write non-finite value {x}")));
    }
    Ok(number_from_literal(&format!("{x:.16e}")))
}

/// JSON number written with all of its digits.
pub fn integer_json(x: impl std::fmt::Display) -> Value {
    number_from_literal(&x.to_string())
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Result<Value> {
        float_json(*self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        let x = v
            .as_number()
            .and_then(Number::as_f64)
            .ok_or_else(|| Error::Format(format!("expected a number, found {v}")))?;
        if !x.is_finite() {
            return Err(Error::Format(format!("number {v} is out of range")));
        }
        Ok(x)
    }
}

impl JsonScalar for BigInt {
    fn to_json(&self) -> Result<Value> {
        Ok(integer_json(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => BigInt::from_str(n.as_str())
                .map_err(|_| Error::Format(format!("expected an integer, found {n}"))),
            _ => Err(Error::Format(format!("expected an integer, found {v}"))),
        }
    }
}

impl JsonScalar for i64 {
    fn to_json(&self) -> Result<Value> {
        Ok(integer_json(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_i64()
            .ok_or_else(|| Error::Format(format!("expected a 64-bit integer, found {v}")))
    }
}

/// Integers are written as numbers, other rationals as `"p/q"` strings.
/// Reading also accepts any decimal literal, converted exactly.
impl JsonScalar for BigRational {
    fn to_json(&self) -> Result<Value> {
        if self.is_integer() {
            Ok(integer_json(self.numer()))
        } else {
            Ok(Value::String(format!("{}/{}", self.numer(), self.denom())))
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => parse_decimal(n.as_str()),
            Value::String(s) => BigRational::from_str(s)
                .map_err(|_| Error::Format(format!("expected a rational \"p/q\", found {s:?}"))),
            _ => Err(Error::Format(format!(
                "expected a number or rational, found {v}"
            ))),
        }
    }
}

/// Exact value of a JSON number literal.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("invalid number literal {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
    let exp = exp - frac.len() as i64;
    if exp.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let scale = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    Ok(if exp >= 0 {
        BigRational::from_integer(digits * scale)
    } else {
        BigRational::new(digits, scale)
    })
}

/// Serializes `v` canonically.
pub fn to_canonical_string(v: &Value) -> String {
    // `Map` is ordered by key without the `preserve_order` feature.
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn values_json<T: JsonScalar>(values: &[T]) -> Result<Value> {
    Ok(Value::Array(
        values.iter().map(T::to_json).collect::<Result<_>>()?,
    ))
}

fn values_from_json<T: JsonScalar>(field: &str, values: &[Value]) -> Result<Vec<T>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            T::from_json(v).map_err(|e| Error::Format(format!("{field}[{i}]: {}", strip(e))))
        })
        .collect()
}

fn strip(e: Error) -> String {
    match e {
        Error::Format(m) => m,
        other => other.to_string(),
    }
}

fn parse<'a, D: Deserialize<'a>>(what: &str, text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn domain_from(
    cardinalities: Vec<usize>,
    labels: Option<Vec<Vec<String>>>,
) -> Result<CategoricalDomain> {
    match labels {
        Some(l) => CategoricalDomain::with_labels(cardinalities, l),
        None => CategoricalDomain::new(cardinalities),
    }
}

fn insert_domain(obj: &mut Map<String, Value>, domain: &CategoricalDomain) {
    obj.insert("cardinalities".into(), json!(domain.cardinalities()));
    if let Some(l) = domain.labels() {
        obj.insert("labels".into(), json!(l));
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDto {
    cardinalities: Vec<usize>,
    values: Vec<Value>,
    labels: Option<Vec<Vec<String>>>,
}

/// `{"cardinalities": [...], "values": [...], "labels"?: [[...], ...]}`.
pub fn table_to_json<T: JsonScalar>(f: &TabularFunction<T>) -> Result<Value> {
    let mut obj = Map::new();
    insert_domain(&mut obj, f.domain());
    obj.insert("values".into(), values_json(f.values())?);
    Ok(Value::Object(obj))
}

pub fn table_from_json<T: JsonScalar>(text: &str) -> Result<TabularFunction<T>> {
    let dto: TableDto = parse("function", text)?;
    let domain = domain_from(dto.cardinalities, dto.labels)?;
    TabularFunction::new(domain, values_from_json("values", &dto.values)?)
}

/// Whether every entry of a function file is an integer literal.
pub fn table_is_integral(text: &str) -> Result<bool> {
    let dto: TableDto = parse("function", text)?;
    Ok(dto
        .values
        .iter()
        .all(|v| matches!(v, Value::Number(n) if BigInt::from_str(n.as_str()).is_ok())))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDto {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// `{"edges": [[i, j], ...], "n": n}` with `i < j`, sorted.
pub fn graph_to_json(g: &UndirectedGraph) -> Value {
    json!({ "n": g.n(), "edges": g.edges() })
}

pub fn graph_from_json(text: &str) -> Result<UndirectedGraph> {
    let dto: GraphDto = parse("graph", text)?;
    UndirectedGraph::new(dto.n, dto.edges)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DagDto {
    n: usize,
    parents: Vec<Vec<usize>>,
}

pub fn dag_to_json(d: &Dag) -> Value {
    let parents: Vec<&[usize]> = (0..d.n()).map(|v| d.parents(v).as_slice()).collect();
    json!({ "n": d.n(), "parents": parents })
}

pub fn dag_from_json(text: &str) -> Result<Dag> {
    let dto: DagDto = parse("DAG", text)?;
    if dto.parents.len() != dto.n {
        return Err(Error::Format(format!(
            "DAG declares n = {} but lists parents for {} nodes",
            dto.n,
            dto.parents.len()
        )));
    }
    Dag::new(dto.parents)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDto {
    vars: VariableSubset,
    values: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizationDto {
    cardinalities: Vec<usize>,
    basepoint: Vec<usize>,
    terms: Vec<TermDto>,
    labels: Option<Vec<Vec<String>>>,
}

/// Terms in lexicographic order of their variable sets.
pub fn factorization_to_json<T: JsonScalar>(fac: &CliqueFactorization<T>) -> Result<Value> {
    let terms = fac
        .terms()
        .iter()
        .map(|(vars, g)| Ok(json!({ "vars": vars.as_slice(), "values": values_json(g.values())? })))
        .collect::<Result<Vec<_>>>()?;
    let mut obj = Map::new();
    insert_domain(&mut obj, fac.domain());
    obj.insert("basepoint".into(), json!(fac.basepoint().values()));
    obj.insert("terms".into(), Value::Array(terms));
    Ok(Value::Object(obj))
}

pub fn factorization_from_json<T: JsonScalar>(text: &str) -> Result<CliqueFactorization<T>> {
    let dto: FactorizationDto = parse("factorization", text)?;
    let domain = domain_from(dto.cardinalities, dto.labels)?;
    let x0 = BasePoint::new(&domain, dto.basepoint)?;
    let mut terms = BTreeMap::new();
    for (k, t) in dto.terms.into_iter().enumerate() {
        let field = format!("terms[{k}].values");
        let values = values_from_json(&field, &t.values)?;
        let g = TabularFunction::new(domain.marginal(&t.vars)?, values)?;
        if terms.insert(t.vars.clone(), g).is_some() {
            return Err(Error::Format(format!(
                "terms[{k}]: duplicate variable set {}",
                t.vars
            )));
        }
    }
    CliqueFactorization::new(domain, terms, x0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierDto {
    cardinalities: Vec<usize>,
    p_plus: Vec<Value>,
    p_minus: Vec<Value>,
    labels: Option<Vec<Vec<String>>>,
}

pub fn classifier_to_json(p: &GenerativeClassifier<f64>) -> Result<Value> {
    let mut obj = Map::new();
    insert_domain(&mut obj, p.domain());
    obj.insert("p_plus".into(), values_json(p.p_plus().values())?);
    obj.insert("p_minus".into(), values_json(p.p_minus().values())?);
    Ok(Value::Object(obj))
}

/// Loads a possibly marginally extended classifier (zeros allowed).
pub fn classifier_from_json(text: &str) -> Result<GenerativeClassifier<f64>> {
    let dto: ClassifierDto = parse("model", text)?;
    let domain = domain_from(dto.cardinalities, dto.labels)?;
    let plus = TabularFunction::new(domain.clone(), values_from_json("p_plus", &dto.p_plus)?)?;
    let minus = TabularFunction::new(domain, values_from_json("p_minus", &dto.p_minus)?)?;
    GenerativeClassifier::new_extended(plus, minus)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecisionDto {
    cardinalities: Vec<usize>,
    signs: Vec<i8>,
    labels: Option<Vec<Vec<String>>>,
}

pub fn decision_to_json(phi: &DecisionFunction) -> Value {
    let mut obj = Map::new();
    insert_domain(&mut obj, phi.domain());
    obj.insert("signs".into(), json!(phi.signs()));
    Value::Object(obj)
}

pub fn decision_from_json(text: &str) -> Result<DecisionFunction> {
    let dto: DecisionDto = parse("decision", text)?;
    DecisionFunction::new(domain_from(dto.cardinalities, dto.labels)?, dto.signs)
}

/// Whether a JSON document looks like a decision file (has `"signs"`).
pub fn is_decision_json(text: &str) -> Result<bool> {
    let v: Value = parse("input", text)?;
    Ok(v.get("signs").is_some())
}

pub fn witness_to_json(w: &XorWitness) -> Value {
    json!({
        "vars": w.vars.as_slice(),
        "context": w.context,
        "dots": w.dots,
        "ddots": w.ddots,
    })
}

/// The trace is included only when `with_trace` is set; `-∞` entries are
/// written as `null`.
pub fn ipf_report_to_json(r: &IpfReport<f64>, with_trace: bool) -> Result<Value> {
    let mut obj = Map::new();
    obj.insert("converged".into(), Value::Bool(r.converged));
    obj.insert(
        "final_marginal_gap".into(),
        float_json(r.final_marginal_gap)?,
    );
    obj.insert("iterations".into(), integer_json(r.iterations));
    if let Some(last) = r.loglik_trace.last() {
        obj.insert("final_loglik".into(), loglik_json(*last));
    }
    if with_trace {
        obj.insert(
            "loglik_trace".into(),
            Value::Array(r.loglik_trace.iter().map(|&v| loglik_json(v)).collect()),
        );
    }
    Ok(Value::Object(obj))
}

fn loglik_json(v: f64) -> Value {
    float_json(v).unwrap_or(Value::Null)
}

/// How class values in a dataset are spelled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClassEncoding {
    /// `+1` (also `1`) and `-1`.
    #[default]
    Signed,
    /// `1` for the positive class, `0` for the negative.
    ZeroOne,
}

impl ClassEncoding {
    fn parse(self, s: &str) -> Option<Class> {
        match (self, s) {
            (ClassEncoding::Signed, "+1" | "1") => Some(Class::Positive),
            (ClassEncoding::Signed, "-1") => Some(Class::Negative),
            (ClassEncoding::ZeroOne, "1") => Some(Class::Positive),
            (ClassEncoding::ZeroOne, "0") => Some(Class::Negative),
            _ => None,
        }
    }
}

/// Options for [`load_dataset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvOptions {
    pub class_col: String,
    pub encoding: ClassEncoding,
    /// Fixed category lists per column name; unseen values are errors.
    pub labels: Option<BTreeMap<String, Vec<String>>>,
    /// Cardinalities the dataset must fit into, e.g. those of `f`.
    pub cardinalities: Option<Vec<usize>>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            class_col: "class".into(),
            encoding: ClassEncoding::Signed,
            labels: None,
            cardinalities: None,
        }
    }
}

/// Labels sidecar: `{"column name": ["category", ...], ...}`.
pub fn labels_from_json(text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    parse("labels", text)
}

/// Reads a dataset whose header names the predictors and the class column.
///
/// Predictors are the non-class columns in header order. Without a labels
/// sidecar, categories are numbered in order of first appearance.
pub fn load_dataset(reader: impl Read, opts: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let class_idx = header
        .iter()
        .position(|h| *h == opts.class_col)
        .ok_or_else(|| {
            Error::Format(format!(
                "class column {:?} not found in header",
                opts.class_col
            ))
        })?;
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != class_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if names.is_empty() {
        return Err(Error::Format("dataset has no predictor columns".into()));
    }
    if let Some(cards) = &opts.cardinalities {
        if cards.len() != names.len() {
            return Err(Error::Format(format!(
                "dataset has {} predictor columns but the model has {} variables",
                names.len(),
                cards.len()
            )));
        }
    }

    let fixed: Option<Vec<&Vec<String>>> = opts
        .labels
        .as_ref()
        .map(|map| {
            names
                .iter()
                .map(|n| {
                    map.get(n).ok_or_else(|| {
                        Error::Format(format!("labels file has no entry for column {n:?}"))
                    })
                })
                .collect::<Result<_>>()
        })
        .transpose()?;
    let mut seen: Vec<Vec<String>> = match &fixed {
        Some(f) => f.iter().map(|l| (*l).clone()).collect(),
        None => vec![Vec::new(); names.len()],
    };
    let mut lookup: Vec<HashMap<String, usize>> = seen
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let class_raw = &row[class_idx];
        let class = opts.encoding.parse(class_raw).ok_or_else(|| {
            Error::Format(format!(
                "line {line}, column {:?}: unrecognized class value {class_raw:?}",
                opts.class_col
            ))
        })?;
        let mut x = Vec::with_capacity(names.len());
        let values = row
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != class_idx)
            .map(|(_, v)| v);
        for (var, value) in values.enumerate() {
            let idx = match lookup[var].get(value) {
                Some(&i) => i,
                None if fixed.is_some() => {
                    return Err(Error::Format(format!(
                        "line {line}, column {:?}: category {value:?} is not in the labels file",
                        names[var]
                    )))
                }
                None => {
                    let i = seen[var].len();
                    seen[var].push(value.to_owned());
                    lookup[var].insert(value.to_owned(), i);
                    i
                }
            };
            x.push(idx);
        }
        records.push((x, class));
    }

    let mut cards: Vec<usize> = seen.iter().map(Vec::len).collect();
    if let Some(hint) = &opts.cardinalities {
        for (var, (&have, &want)) in cards.iter().zip(hint).enumerate() {
            if have > want || (fixed.is_some() && have != want) {
                return Err(Error::Format(format!(
                    "column {:?} has {have} categories but the model allows {want}",
                    names[var]
                )));
            }
        }
        cards.clone_from(hint);
        for (l, &c) in seen.iter_mut().zip(&cards) {
            while l.len() < c {
                l.push(format!("#{}", l.len()));
            }
        }
    }
    if let Some(var) = cards.iter().position(|&c| c == 0) {
        return Err(Error::Format(format!(
            "column {:?} has no categories",
            names[var]
        )));
    }
    Dataset::new(CategoricalDomain::with_labels(cards, seen)?, records)
}

/// Reads the CSV file at `path`; errors name the file.
pub fn load_dataset_file(path: &std::path::Path, opts: &CsvOptions) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_dataset(file, opts).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Exact rational copy of a float table.
pub fn to_rational(f: &TabularFunction<f64>) -> TabularFunction<BigRational> {
    f.map(|&v| BigRational::from_float(v).unwrap_or_else(BigRational::zero))
}

/// Integer table viewed as rationals.
pub fn int_to_rational(f: &TabularFunction<BigInt>) -> TabularFunction<BigRational> {
    f.map(|v| BigRational::new(v.clone(), BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.0,
            -0.0,
            1.0,
            -1.0,
            0.1,
            1.0 / 3.0,
            1e-300,
            6.02e23,
            f64::MIN_POSITIVE,
            f64::MAX,
        ] {
            let v = float_json(x).unwrap();
            let back = f64::from_json(&v).unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
        assert_eq!(
            to_canonical_string(&float_json(1.5).unwrap()),
            "1.5000000000000000e+0\n"
        );
        assert!(float_json(f64::NAN).is_err());
    }

    #[test]
    fn table_round_trip_is_byte_stable() {
        let text = r#"{"values":[-1,5,2,3.25,-7,-4e-3],"cardinalities":[2,3]}"#;
        let f: TabularFunction<f64> = table_from_json(text).unwrap();
        let once = to_canonical_string(&table_to_json(&f).unwrap());
        let g: TabularFunction<f64> = table_from_json(&once).unwrap();
        assert_eq!(f, g);
        assert_eq!(once, to_canonical_string(&table_to_json(&g).unwrap()));
        assert!(once.starts_with(r#"{"cardinalities":[2,3],"values":[-1.0000000000000000e+0,"#));
    }

    #[test]
    fn integer_tables_stay_exact() {
        let text = r#"{"cardinalities":[2],"values":[123456789012345678901234567890,-1]}"#;
        assert!(table_is_integral(text).unwrap());
        let f: TabularFunction<BigInt> = table_from_json(text).unwrap();
        assert_eq!(
            to_canonical_string(&table_to_json(&f).unwrap()),
            format!("{text}\n")
        );
        assert!(!table_is_integral(r#"{"cardinalities":[1],"values":[1.5]}"#).unwrap());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_decimal("1.25").unwrap(),
            BigRational::new(5.into(), 4.into())
        );
        assert_eq!(
            parse_decimal("-3e2").unwrap(),
            BigRational::from_integer((-300).into())
        );
        assert_eq!(
            parse_decimal("2.5E-1").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        let r = BigRational::new(1.into(), 3.into());
        assert_eq!(BigRational::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn malformed_inputs_are_format_errors() {
        let cases = [
            r#"{"cardinalities":[2],"values":[1]}"#,
            r#"{"cardinalities":[2],"values":[1,"x"]}"#,
            r#"{"cardinalities":[2],"values":[1,2],"extra":1}"#,
            r#"{"cardinalities":[2],"values":[1,1e999]}"#,
            r#"not json"#,
        ];
        for c in cases {
            let e = table_from_json::<f64>(c).unwrap_err();
            assert!(!e.is_math(), "{c}: {e}");
        }
    }

    #[test]
    fn graph_and_dag_round_trip() {
        let g = graph_from_json(r#"{"n":4,"edges":[[1,0],[1,2],[2,3],[3,0]]}"#).unwrap();
        assert_eq!(
            to_canonical_string(&graph_to_json(&g)),
            "{\"edges\":[[0,1],[0,3],[1,2],[2,3]],\"n\":4}\n"
        );
        assert!(graph_from_json(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        let d = dag_from_json(r#"{"n":3,"parents":[[],[],[0,1]]}"#).unwrap();
        assert_eq!(
            to_canonical_string(&dag_to_json(&d)),
            "{\"n\":3,\"parents\":[[],[],[0,1]]}\n"
        );
        assert!(dag_from_json(r#"{"n":2,"parents":[[]]}"#).is_err());
    }

    #[test]
    fn classifier_round_trip() {
        let text = r#"{"cardinalities":[2],"p_minus":[0.125,0.375],"p_plus":[0.25,0.25]}"#;
        let p = classifier_from_json(text).unwrap();
        let once = to_canonical_string(&classifier_to_json(&p).unwrap());
        let twice = to_canonical_string(
            &classifier_to_json(&classifier_from_json(&once).unwrap()).unwrap(),
        );
        assert_eq!(once, twice);
    }

    fn opts() -> CsvOptions {
        CsvOptions::default()
    }

    #[test]
    fn csv_first_appearance() {
        let csv = "a,class,b\nhi,+1,x\nlo,-1,x\nhi,1,y\nlo,-1,y\n";
        let d = load_dataset(csv.as_bytes(), &opts()).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.domain().cardinalities(), &[2, 2]);
        assert_eq!(d.records()[1], (vec![1, 0], Class::Negative));
        assert_eq!(d.domain().labels().unwrap()[0], vec!["hi", "lo"]);
    }

    #[test]
    fn csv_zero_one_and_errors() {
        let csv = "a,y\n0,1\n1,0\n";
        let o = CsvOptions {
            class_col: "y".into(),
            encoding: ClassEncoding::ZeroOne,
            ..opts()
        };
        let d = load_dataset(csv.as_bytes(), &o).unwrap();
        assert_eq!(d.records()[1].1, Class::Negative);
        // Signed encoding rejects 0.
        let o2 = CsvOptions {
            class_col: "y".into(),
            ..opts()
        };
        assert!(load_dataset(csv.as_bytes(), &o2).is_err());
        // Missing class column.
        assert!(load_dataset(csv.as_bytes(), &opts()).is_err());
    }

    #[test]
    fn csv_labels_file() {
        let labels = labels_from_json(r#"{"a":["lo","hi"]}"#).unwrap();
        let o = CsvOptions {
            labels: Some(labels),
            ..opts()
        };
        let d = load_dataset("a,class\nhi,+1\nlo,-1\n".as_bytes(), &o).unwrap();
        assert_eq!(d.records()[0].0, vec![1]);
        let e = load_dataset("a,class\nmid,+1\n".as_bytes(), &o).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn csv_cardinality_hint() {
        let o = CsvOptions {
            cardinalities: Some(vec![3]),
            ..opts()
        };
        let d = load_dataset("a,class\nq,+1\n".as_bytes(), &o).unwrap();
        assert_eq!(d.domain().cardinalities(), &[3]);
        let o = CsvOptions {
            cardinalities: Some(vec![1]),
            ..opts()
        };
        assert!(load_dataset("a,class\nq,+1\nr,-1\n".as_bytes(), &o).is_err());
    }
}
