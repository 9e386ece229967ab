//! Canonical serialization and parsing shared by the library and the CLI.
//!
//! Every document is a JSON object with a mandatory `"schema"` version field
//! and a `"kind"` discriminator. Multiplication tables can also travel as CSV
//! with a leading `# key=value ...` metadata comment. Serialization is
//! canonical and deterministic: coefficient keys are emitted in the
//! enumeration order of their labels, rationals in lowest terms, and two
//! structurally equal values always produce byte-identical text.
//!
//! Text forms of the atoms:
//! - rational: `p/q` in lowest terms, `p` when the denominator is 1, sign on
//!   the numerator only;
//! - partition: `[3,1,1]` (weakly decreasing, no spaces);
//! - partition pair: `[[3,1],[2]]`;
//! - surface model: `{"alpha":1,"beta":2}` or `{"gamma":2}`.
//!
//! The parser accepts any valid JSON spelling (whitespace, key order) but
//! rejects malformed rationals, non-decreasing partitions, unknown basis or
//! kind tags, and invalid model parameters. Syntax errors carry the line and
//! column reported by the JSON parser; semantic errors name the offending
//! field or key.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::{FockState, HeisBasis, HeisenbergReport};
use crate::hilb::{
    ClassKey, EquivClass, HeisCombo, StructureTable, SurfaceModel, TableBasis, TableRow,
};
use crate::partition::{Bipartition, Partition};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::symfunc::{Basis, SymPoly, TensorPoly};

/// Version stamp carried by every document.
pub const SCHEMA_VERSION: &str = "1";

/// Output encodings. CSV applies to tables only.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
}

/// A parsed or serializable payload.
#[derive(Clone, PartialEq, Debug)]
pub enum Document {
    SymPoly(SymPoly),
    EquivClass(EquivClass),
    FockState(FockState),
    HeisCombo(HeisCombo),
    Table(StructureTable),
    Report(HeisenbergReport),
    /// A bare rational, e.g. the value of a pairing.
    Scalar(Rat),
}

/// Serializes a document in the requested format.
pub fn to_text(doc: &Document, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string(&to_value(doc)).expect("in-memory write")),
        Format::Csv => match doc {
            Document::Table(table) => table_to_csv(table),
            _ => Err(Error::Mismatch("only tables have a CSV form".into())),
        },
    }
}

/// Parses a document, auto-detecting JSON (`{...}`) or table CSV (`# ...`).
pub fn parse(text: &str) -> Result<Document> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        parse_json(text)
    } else if trimmed.starts_with('#') {
        Ok(Document::Table(table_from_csv(text)?))
    } else {
        Err(Error::Parse(
            "unrecognized document: expected a JSON object or a CSV table".into(),
        ))
    }
}

fn to_value(doc: &Document) -> Value {
    match doc {
        Document::SymPoly(f) => {
            let mut obj = header("sympoly");
            obj.insert("degree".into(), Value::from(f.degree() as u64));
            obj.insert("basis".into(), basis_value(f.basis()));
            let mut coeffs = Map::new();
            for (la, c) in f.iter() {
                coeffs.insert(la.to_string(), Value::from(format_rat(c)));
            }
            obj.insert("coeffs".into(), Value::Object(coeffs));
            Value::Object(obj)
        }
        Document::EquivClass(class) => {
            let mut obj = header("equivclass");
            obj.insert("n".into(), Value::from(class.n() as u64));
            obj.insert("model".into(), model_value(class.model()));
            obj.insert("basis".into(), Value::from("fixedpoint"));
            let mut coeffs = Map::new();
            for (key, c) in class.iter() {
                coeffs.insert(key.to_string(), Value::from(format_rat(c)));
            }
            obj.insert("coeffs".into(), Value::Object(coeffs));
            Value::Object(obj)
        }
        Document::FockState(state) => {
            let mut obj = header("fockstate");
            obj.insert("model".into(), model_value(state.model()));
            obj.insert("degree".into(), Value::from(state.degree() as u64));
            let mut terms = Vec::new();
            match state.model() {
                SurfaceModel::Plane { .. } => {
                    for (la, c) in state.as_sym().expect("plane state").iter() {
                        let mut term = Map::new();
                        term.insert("factor1".into(), Value::from(la.to_string()));
                        term.insert("coeff".into(), Value::from(format_rat(c)));
                        terms.push(Value::Object(term));
                    }
                }
                SurfaceModel::LineBundle { .. } => {
                    for (key, c) in state.as_tensor().expect("bundle state").iter() {
                        let mut term = Map::new();
                        term.insert("factor1".into(), Value::from(key.first.to_string()));
                        term.insert("factor2".into(), Value::from(key.second.to_string()));
                        term.insert("coeff".into(), Value::from(format_rat(c)));
                        terms.push(Value::Object(term));
                    }
                }
            }
            obj.insert("terms".into(), Value::Array(terms));
            Value::Object(obj)
        }
        Document::HeisCombo(combo) => {
            let mut obj = header("heiscombo");
            obj.insert("model".into(), model_value(combo.model()));
            obj.insert("n".into(), Value::from(combo.n() as u64));
            obj.insert("basis".into(), Value::from(heis_basis_tag(combo.basis())));
            let mut coeffs = Map::new();
            for (key, c) in combo.iter() {
                coeffs.insert(key.to_string(), Value::from(format_rat(c)));
            }
            obj.insert("coeffs".into(), Value::Object(coeffs));
            Value::Object(obj)
        }
        Document::Table(table) => {
            let mut obj = header("table");
            obj.insert("model".into(), model_value(&table.model));
            obj.insert("n".into(), Value::from(table.n as u64));
            obj.insert("basis".into(), Value::from(table_basis_tag(table.basis)));
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    let mut r = Map::new();
                    r.insert("left".into(), Value::from(row.left.to_string()));
                    r.insert("right".into(), Value::from(row.right.to_string()));
                    r.insert("term".into(), Value::from(row.term.to_string()));
                    r.insert("coeff".into(), Value::from(format_rat(&row.coeff)));
                    Value::Object(r)
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
            Value::Object(obj)
        }
        Document::Report(report) => {
            let mut obj = header("report");
            obj.insert("check".into(), Value::from("heisenberg"));
            obj.insert("model".into(), model_value(&report.model));
            obj.insert("maxdeg".into(), Value::from(report.max_degree as u64));
            obj.insert("cases".into(), Value::from(report.cases as u64));
            obj.insert("passed".into(), Value::Bool(report.passed));
            obj.insert("message".into(), Value::from(report.message.clone()));
            Value::Object(obj)
        }
        Document::Scalar(x) => {
            let mut obj = header("scalar");
            obj.insert("value".into(), Value::from(format_rat(x)));
            Value::Object(obj)
        }
    }
}

fn header(kind: &str) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    obj.insert("kind".into(), Value::from(kind));
    obj
}

fn parse_json(text: &str) -> Result<Document> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top-level JSON value must be an object".into()))?;
    let schema = get_str(obj, "schema")?;
    if schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version `{schema}` (expected `{SCHEMA_VERSION}`)"
        )));
    }
    match get_str(obj, "kind")? {
        "sympoly" => {
            let degree = get_usize(obj, "degree")?;
            let basis = parse_basis(get_field(obj, "basis")?)?;
            let mut coeffs = BTreeMap::new();
            for (key, val) in get_obj(obj, "coeffs")? {
                let la = parse_partition_text(key)?;
                coeffs.insert(la, rat_field(val, key)?);
            }
            Ok(Document::SymPoly(SymPoly::new(degree, basis, coeffs)?))
        }
        "equivclass" => {
            let model = parse_model(get_field(obj, "model")?)?;
            let n = get_usize(obj, "n")?;
            match get_str(obj, "basis")? {
                "fixedpoint" => {}
                other => return Err(Error::Parse(format!("unknown class basis tag `{other}`"))),
            }
            let mut coeffs = BTreeMap::new();
            for (key, val) in get_obj(obj, "coeffs")? {
                let class_key = match model {
                    SurfaceModel::Plane { .. } => ClassKey::Single(parse_partition_text(key)?),
                    SurfaceModel::LineBundle { .. } => ClassKey::Pair(parse_bipartition_text(key)?),
                };
                coeffs.insert(class_key, rat_field(val, key)?);
            }
            Ok(Document::EquivClass(EquivClass::new(n, model, coeffs)?))
        }
        "fockstate" => {
            let model = parse_model(get_field(obj, "model")?)?;
            let degree = get_usize(obj, "degree")?;
            let terms = get_arr(obj, "terms")?;
            match model {
                SurfaceModel::Plane { .. } => {
                    let mut coeffs = BTreeMap::new();
                    for term in terms {
                        let term = term
                            .as_object()
                            .ok_or_else(|| Error::Parse("each term must be an object".into()))?;
                        let la = parse_partition_text(get_str(term, "factor1")?)?;
                        coeffs.insert(la, rat_field(get_field(term, "coeff")?, "coeff")?);
                    }
                    let poly = SymPoly::new(degree, Basis::Power, coeffs)?;
                    Ok(Document::FockState(FockState::from_sym(&model, poly)?))
                }
                SurfaceModel::LineBundle { .. } => {
                    let mut coeffs = BTreeMap::new();
                    for term in terms {
                        let term = term
                            .as_object()
                            .ok_or_else(|| Error::Parse("each term must be an object".into()))?;
                        let first = parse_partition_text(get_str(term, "factor1")?)?;
                        let second = parse_partition_text(get_str(term, "factor2")?)?;
                        coeffs.insert(
                            Bipartition::new(first, second),
                            rat_field(get_field(term, "coeff")?, "coeff")?,
                        );
                    }
                    let poly = TensorPoly::new(degree, (Basis::Power, Basis::Power), coeffs)?;
                    Ok(Document::FockState(FockState::from_tensor(&model, poly)?))
                }
            }
        }
        "heiscombo" => {
            let model = parse_model(get_field(obj, "model")?)?;
            let n = get_usize(obj, "n")?;
            let basis = parse_heis_basis(get_str(obj, "basis")?)?;
            let mut coeffs = BTreeMap::new();
            for (key, val) in get_obj(obj, "coeffs")? {
                coeffs.insert(parse_bipartition_text(key)?, rat_field(val, key)?);
            }
            Ok(Document::HeisCombo(HeisCombo::new(
                model, basis, n, coeffs,
            )?))
        }
        "table" => {
            let model = parse_model(get_field(obj, "model")?)?;
            let n = get_usize(obj, "n")?;
            let basis = parse_table_basis(get_str(obj, "basis")?)?;
            let mut rows = Vec::new();
            for row in get_arr(obj, "rows")? {
                let row = row
                    .as_object()
                    .ok_or_else(|| Error::Parse("each row must be an object".into()))?;
                rows.push(TableRow {
                    left: parse_class_key(get_str(row, "left")?, &model)?,
                    right: parse_class_key(get_str(row, "right")?, &model)?,
                    term: parse_class_key(get_str(row, "term")?, &model)?,
                    coeff: rat_field(get_field(row, "coeff")?, "coeff")?,
                });
            }
            Ok(Document::Table(StructureTable {
                model,
                n,
                basis,
                rows,
            }))
        }
        "report" => {
            match get_str(obj, "check")? {
                "heisenberg" => {}
                other => return Err(Error::Parse(format!("unknown check tag `{other}`"))),
            }
            Ok(Document::Report(HeisenbergReport {
                model: parse_model(get_field(obj, "model")?)?,
                max_degree: get_usize(obj, "maxdeg")?,
                cases: get_usize(obj, "cases")?,
                passed: get_bool(obj, "passed")?,
                message: get_str(obj, "message")?.to_string(),
            }))
        }
        "scalar" => Ok(Document::Scalar(parse_rat(get_str(obj, "value")?)?)),
        other => Err(Error::Parse(format!("unknown document kind `{other}`"))),
    }
}

fn model_value(model: &SurfaceModel) -> Value {
    let mut obj = Map::new();
    match *model {
        SurfaceModel::Plane { alpha, beta } => {
            obj.insert("alpha".into(), Value::from(alpha));
            obj.insert("beta".into(), Value::from(beta));
        }
        SurfaceModel::LineBundle { gamma } => {
            obj.insert("gamma".into(), Value::from(gamma));
        }
    }
    Value::Object(obj)
}

fn parse_model(value: &Value) -> Result<SurfaceModel> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("model must be an object".into()))?;
    if obj.contains_key("gamma") {
        SurfaceModel::line_bundle(get_i64(obj, "gamma")?)
    } else {
        SurfaceModel::plane(get_i64(obj, "alpha")?, get_i64(obj, "beta")?)
    }
}

fn basis_value(basis: &Basis) -> Value {
    match basis {
        Basis::Monomial => Value::from("m"),
        Basis::Power => Value::from("p"),
        Basis::PowerNormalized => Value::from("pnorm"),
        Basis::Jack(r) => {
            let mut obj = Map::new();
            obj.insert("jack".into(), Value::from(format_rat(r)));
            Value::Object(obj)
        }
    }
}

fn parse_basis(value: &Value) -> Result<Basis> {
    match value {
        Value::String(tag) => match tag.as_str() {
            "m" => Ok(Basis::Monomial),
            "p" => Ok(Basis::Power),
            "pnorm" => Ok(Basis::PowerNormalized),
            other => Err(Error::Parse(format!("unknown basis tag `{other}`"))),
        },
        Value::Object(obj) => {
            let param = get_str(obj, "jack")?;
            Basis::jack(parse_rat(param)?)
        }
        _ => Err(Error::Parse(
            "basis must be a string tag or {\"jack\": ...}".into(),
        )),
    }
}

fn heis_basis_tag(basis: HeisBasis) -> &'static str {
    match basis {
        HeisBasis::ZeroSection => "zerosection",
        HeisBasis::Fiber => "fiber",
    }
}

fn parse_heis_basis(tag: &str) -> Result<HeisBasis> {
    match tag {
        "zerosection" => Ok(HeisBasis::ZeroSection),
        "fiber" => Ok(HeisBasis::Fiber),
        other => Err(Error::Parse(format!(
            "unknown monomial basis tag `{other}`"
        ))),
    }
}

fn table_basis_tag(basis: TableBasis) -> &'static str {
    match basis {
        TableBasis::FixedPoint => "fixedpoint",
        TableBasis::Graded => "graded",
    }
}

fn parse_table_basis(tag: &str) -> Result<TableBasis> {
    match tag {
        "fixedpoint" => Ok(TableBasis::FixedPoint),
        "graded" => Ok(TableBasis::Graded),
        other => Err(Error::Parse(format!("unknown table basis tag `{other}`"))),
    }
}

/// Parses `[3,1,1]` into a partition, rejecting non-decreasing sequences.
pub fn parse_partition_text(text: &str) -> Result<Partition> {
    let parts: Vec<u64> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed partition `{text}`: {e}")))?;
    Partition::new(parts.into_iter().map(|x| x as usize).collect())
}

/// Parses `[[3,1],[2]]` into a pair of partitions.
pub fn parse_bipartition_text(text: &str) -> Result<Bipartition> {
    let pair: Vec<Vec<u64>> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed partition pair `{text}`: {e}")))?;
    if pair.len() != 2 {
        return Err(Error::Parse(format!(
            "partition pair `{text}` must have exactly two entries"
        )));
    }
    let mut it = pair.into_iter();
    let first = Partition::new(it.next().unwrap().into_iter().map(|x| x as usize).collect())?;
    let second = Partition::new(it.next().unwrap().into_iter().map(|x| x as usize).collect())?;
    Ok(Bipartition::new(first, second))
}

fn parse_class_key(text: &str, model: &SurfaceModel) -> Result<ClassKey> {
    match model {
        SurfaceModel::Plane { .. } => Ok(ClassKey::Single(parse_partition_text(text)?)),
        SurfaceModel::LineBundle { .. } => Ok(ClassKey::Pair(parse_bipartition_text(text)?)),
    }
}

fn table_to_csv(table: &StructureTable) -> Result<String> {
    let mut meta = format!("# schema={SCHEMA_VERSION} kind=table model=");
    match table.model {
        SurfaceModel::Plane { alpha, beta } => {
            meta.push_str(&format!("plane alpha={alpha} beta={beta}"));
        }
        SurfaceModel::LineBundle { gamma } => {
            meta.push_str(&format!("linebundle gamma={gamma}"));
        }
    }
    meta.push_str(&format!(
        " n={} basis={}",
        table.n,
        table_basis_tag(table.basis)
    ));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["left", "right", "term", "coeff"])
        .map_err(|e| Error::Internal(format!("csv write: {e}")))?;
    for row in &table.rows {
        writer
            .write_record([
                row.left.to_string(),
                row.right.to_string(),
                row.term.to_string(),
                format_rat(&row.coeff),
            ])
            .map_err(|e| Error::Internal(format!("csv write: {e}")))?;
    }
    let body = String::from_utf8(
        writer
            .into_inner()
            .map_err(|e| Error::Internal(format!("csv write: {e}")))?,
    )
    .expect("csv output is UTF-8");
    Ok(format!("{meta}\n{body}"))
}

fn table_from_csv(text: &str) -> Result<StructureTable> {
    let (meta_line, body) = text
        .split_once('\n')
        .ok_or_else(|| Error::Parse("CSV table is missing its data rows".into()))?;
    let meta = parse_csv_meta(meta_line)?;
    let lookup = |key: &str| -> Result<&str> {
        meta.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Parse(format!("CSV metadata is missing `{key}`")))
    };
    if lookup("schema")? != SCHEMA_VERSION {
        return Err(Error::Parse(
            "unsupported schema version in CSV metadata".into(),
        ));
    }
    if lookup("kind")? != "table" {
        return Err(Error::Parse("CSV documents must have kind=table".into()));
    }
    let model = match lookup("model")? {
        "plane" => SurfaceModel::plane(
            parse_meta_int(lookup("alpha")?)?,
            parse_meta_int(lookup("beta")?)?,
        )?,
        "linebundle" => SurfaceModel::line_bundle(parse_meta_int(lookup("gamma")?)?)?,
        other => return Err(Error::Parse(format!("unknown model tag `{other}`"))),
    };
    let n = parse_meta_int(lookup("n")?)? as usize;
    let basis = parse_table_basis(lookup("basis")?)?;
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("CSV header: {e}")))?
        .clone();
    let expected = ["left", "right", "term", "coeff"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse(format!(
            "CSV header must be `left,right,term,coeff`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("CSV row: {e}")))?;
        if record.len() != 4 {
            return Err(Error::Parse(format!(
                "CSV row has {} fields, expected 4",
                record.len()
            )));
        }
        rows.push(TableRow {
            left: parse_class_key(&record[0], &model)?,
            right: parse_class_key(&record[1], &model)?,
            term: parse_class_key(&record[2], &model)?,
            coeff: parse_rat(&record[3])?,
        });
    }
    Ok(StructureTable {
        model,
        n,
        basis,
        rows,
    })
}

fn parse_csv_meta(line: &str) -> Result<Vec<(String, String)>> {
    let rest = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("CSV tables start with a `#` metadata line".into()))?;
    rest.split_whitespace()
        .map(|token| {
            token
                .split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("malformed metadata token `{token}`")))
        })
        .collect()
}

fn parse_meta_int(text: &str) -> Result<i64> {
    text.parse()
        .map_err(|_| Error::Parse(format!("malformed integer `{text}` in CSV metadata")))
}

fn get_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    get_field(obj, key)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be a string")))
}

fn get_obj<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    get_field(obj, key)?
        .as_object()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be an object")))
}

fn get_arr<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    get_field(obj, key)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be an array")))
}

fn get_bool(obj: &Map<String, Value>, key: &str) -> Result<bool> {
    get_field(obj, key)?
        .as_bool()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be a boolean")))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    get_field(obj, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be a nonnegative integer")))
}

fn get_i64(obj: &Map<String, Value>, key: &str) -> Result<i64> {
    get_field(obj, key)?
        .as_i64()
        .ok_or_else(|| Error::Parse(format!("field `{key}` must be an integer")))
}

fn rat_field(value: &Value, position: &str) -> Result<Rat> {
    let text = value
        .as_str()
        .ok_or_else(|| Error::Parse(format!("coefficient at `{position}` must be a string")))?;
    parse_rat(text)
}
