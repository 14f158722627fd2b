//! Reading documents from disk. String references inside a document
//! (`"source": "c4.json"`) resolve relative to that document's directory;
//! the names `T1`, `I2`, `C4`, `S3` refer to the built-in fixtures when no
//! such file exists.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use groupoid_cover::document::{groupoid_from_json, morphism_from_json};
use groupoid_cover::groupoid::{ArrId, ObjId};
use groupoid_cover::{fixtures, is_covering, Covering, FiniteGroupoid, GroupoidMorphism, Subgroup};
use serde_json::{json, Value};

use crate::error::CliError;

pub struct Document {
    pub value: Value,
    pub dir: PathBuf,
    pub label: String,
}

fn fixture(name: &str) -> Option<FiniteGroupoid> {
    fixtures::all()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, g)| g)
}

pub fn read(path: &Path) -> Result<Document, CliError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{label}: {e}")))?;
    let value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{label}: {e}")))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Document { value, dir, label })
}

fn in_doc<T>(doc: &Document, r: Result<T, groupoid_cover::DocumentError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", doc.label)))
}

/// Parses and validates; `check` off only for the `validate` command.
pub fn groupoid_value(value: &Value, label: &str, check: bool) -> Result<FiniteGroupoid, CliError> {
    let g = groupoid_from_json(value).map_err(|e| CliError::Input(format!("{label}: {e}")))?;
    if check {
        let report = g.validate();
        if !report.is_valid() {
            let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::Input(format!("{label}: not a groupoid: {}", v.join("; "))));
        }
    }
    Ok(g)
}

/// A groupoid argument: a file, or a fixture name.
pub fn groupoid_arg(arg: &str) -> Result<Arc<FiniteGroupoid>, CliError> {
    groupoid_ref(&Value::String(arg.into()), Path::new(""), "argument")
}

fn groupoid_ref(v: &Value, dir: &Path, label: &str) -> Result<Arc<FiniteGroupoid>, CliError> {
    match v {
        Value::String(s) => {
            let path = dir.join(s);
            if path.is_file() {
                let doc = read(&path)?;
                Ok(Arc::new(groupoid_value(&doc.value, &doc.label, true)?))
            } else if let Some(g) = fixture(s) {
                Ok(Arc::new(g))
            } else {
                Err(CliError::Input(format!("{label}: no file or fixture named \"{s}\"")))
            }
        }
        Value::Object(_) => Ok(Arc::new(groupoid_value(v, label, true)?)),
        _ => Err(CliError::Input(format!("{label}: expected a groupoid document or a file name"))),
    }
}

pub fn field<'a>(doc: &'a Document, key: &str) -> Result<&'a Value, CliError> {
    doc.value
        .get(key)
        .ok_or_else(|| CliError::Input(format!("{}: $: missing field \"{key}\"", doc.label)))
}

/// A groupoid referenced from a field of a document.
pub fn groupoid_field(doc: &Document, key: &str) -> Result<Arc<FiniteGroupoid>, CliError> {
    groupoid_ref(field(doc, key)?, &doc.dir, &format!("{}: $.{key}", doc.label))
}

pub fn morphism_doc(doc: &Document) -> Result<GroupoidMorphism, CliError> {
    let source = groupoid_field(doc, "source")?;
    let target = groupoid_field(doc, "target")?;
    in_doc(doc, morphism_from_json(&doc.value, source, target))
}

pub fn morphism_arg(path: &str) -> Result<GroupoidMorphism, CliError> {
    morphism_doc(&read(Path::new(path))?)
}

/// The star-defect report for a morphism that is not a covering.
pub fn not_covering_report(m: &GroupoidMorphism, nc: &groupoid_cover::covering::NotCovering) -> CliError {
    let s = m.source();
    let x = s.object_name(nc.object);
    CliError::negative(
        format!("not a covering at object {x}: star sizes {} vs {}", nc.total_star, nc.base_star),
        json!({
            "covering": false,
            "object": x,
            "total_star": nc.total_star,
            "base_star": nc.base_star,
            "reason": nc.to_string(),
        }),
    )
}

pub fn covering_of(m: GroupoidMorphism) -> Result<Covering, CliError> {
    is_covering(m.clone()).map_err(|nc| not_covering_report(&m, &nc))
}

pub fn covering_arg(path: &str) -> Result<Covering, CliError> {
    covering_of(morphism_arg(path)?)
}

pub fn object(g: &FiniteGroupoid, name: &str) -> Result<ObjId, CliError> {
    g.object_by_name(name)
        .ok_or_else(|| CliError::Input(format!("no object named \"{name}\"")))
}

pub fn arrow(g: &FiniteGroupoid, name: &str) -> Result<ArrId, CliError> {
    g.arrow_by_name(name)
        .ok_or_else(|| CliError::Input(format!("no arrow named \"{name}\"")))
}

pub fn object_or_first(g: &FiniteGroupoid, name: Option<&str>) -> Result<ObjId, CliError> {
    match name {
        Some(n) => object(g, n),
        None if g.object_count() > 0 => Ok(ObjId(0)),
        None => Err(CliError::Input("groupoid has no objects".into())),
    }
}

/// The subgroup of the vertex group at `x` generated by comma-separated loop names.
pub fn loop_subgroup(g: &FiniteGroupoid, x: ObjId, names: &str) -> Result<Subgroup, CliError> {
    let vg = g.vertex_group(x).map_err(|e| CliError::Input(e.to_string()))?;
    let mut gens = Vec::new();
    for n in names.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let a = arrow(g, n)?;
        let e = vg
            .element_of(a)
            .ok_or_else(|| CliError::Input(format!("arrow \"{n}\" is not a loop at {}", g.object_name(x))))?;
        gens.push(e);
    }
    vg.group
        .generated_subgroup(&gens)
        .map_err(|e| CliError::Input(e.to_string()))
}

pub fn loop_names(g: &FiniteGroupoid, x: ObjId, sub: &Subgroup) -> Result<Vec<String>, CliError> {
    let vg = g.vertex_group(x).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(sub
        .elements()
        .iter()
        .map(|&e| g.arrow_name(vg.arrow_of(e)).to_string())
        .collect())
}
