//! JSON documents for groupoids, morphisms, group actions and presheaves.
//!
//! Groupoid:
//! `{"objects": [..], "arrows": [{"name", "dom", "cod"}], "compose": [[f, h, f∘h], ..]}`
//! with optional `"inverse": [[a, a⁻¹], ..]`, or the one-object shorthand
//! `{"group_table": [[..]], "labels"?: [..], "object"?: "*"}`.
//!
//! Morphism: `{"source", "target", "objects": {name: name}, "arrows": {name: name}}`
//! where source and target are inline groupoid documents; loaders that read
//! files resolve string references before calling in here.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::construct::GroupAction;
use crate::covering::Covering;
use crate::error::{DocumentError, GroupoidError};
use crate::group::FiniteGroup;
use crate::groupoid::{arr, obj, ArrId, FiniteGroupoid, ObjId};
use crate::morphism::GroupoidMorphism;
use crate::topos::Presheaf;

type Res<T> = Result<T, DocumentError>;

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Res<&'a Value> {
    v.get(key)
        .ok_or_else(|| DocumentError::new(path, format!("missing field \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Res<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| DocumentError::new(path, "expected an array"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Res<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| DocumentError::new(path, "expected an object"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Res<&'a str> {
    v.as_str()
        .ok_or_else(|| DocumentError::new(path, "expected a string"))
}

fn as_index(v: &Value, path: &str) -> Res<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| DocumentError::new(path, "expected a non-negative integer"))
}

fn unique_names(names: &[String], path: &str) -> Res<HashMap<String, usize>> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(DocumentError::new(format!("{path}[{i}]"), format!("duplicate name \"{n}\"")));
        }
    }
    Ok(index)
}

/// Parses a groupoid document. Only the table shape is checked; call
/// `validate` for the laws.
pub fn groupoid_from_json(v: &Value) -> Res<FiniteGroupoid> {
    as_object(v, "$")?;
    if let Some(table) = v.get("group_table") {
        return group_table(v, table);
    }
    let objects: Vec<String> = as_array(field(v, "$", "objects")?, "$.objects")?
        .iter()
        .enumerate()
        .map(|(i, o)| as_str(o, &format!("$.objects[{i}]")).map(str::to_string))
        .collect::<Res<_>>()?;
    let obj_index = unique_names(&objects, "$.objects")?;
    let mut arrows = Vec::new();
    let mut names = Vec::new();
    for (i, a) in as_array(field(v, "$", "arrows")?, "$.arrows")?.iter().enumerate() {
        let p = format!("$.arrows[{i}]");
        let name = as_str(field(a, &p, "name")?, &format!("{p}.name"))?.to_string();
        let end = |key: &str| -> Res<ObjId> {
            let s = as_str(field(a, &p, key)?, &format!("{p}.{key}"))?;
            obj_index
                .get(s)
                .map(|&k| obj(k))
                .ok_or_else(|| DocumentError::new(format!("{p}.{key}"), format!("unknown object \"{s}\"")))
        };
        arrows.push((name.clone(), end("dom")?, end("cod")?));
        names.push(name);
    }
    let arr_index = unique_names(&names, "$.arrows")?;
    let lookup = |s: &str, path: &str| -> Res<ArrId> {
        arr_index
            .get(s)
            .map(|&k| arr(k))
            .ok_or_else(|| DocumentError::new(path, format!("unknown arrow \"{s}\"")))
    };
    let mut table: HashMap<(ArrId, ArrId), ArrId> = HashMap::new();
    for (i, row) in as_array(field(v, "$", "compose")?, "$.compose")?.iter().enumerate() {
        let p = format!("$.compose[{i}]");
        let row = as_array(row, &p)?;
        if row.len() != 3 {
            return Err(DocumentError::new(p, "expected [f, h, f∘h]"));
        }
        let ids: Vec<ArrId> = row
            .iter()
            .enumerate()
            .map(|(j, x)| lookup(as_str(x, &format!("{p}[{j}]"))?, &format!("{p}[{j}]")))
            .collect::<Res<_>>()?;
        let (f, h) = (ids[0], ids[1]);
        if arrows[f.index()].1 != arrows[h.index()].2 {
            return Err(DocumentError::new(p, "f and h are not composable"));
        }
        if table.insert((f, h), ids[2]).is_some() {
            return Err(DocumentError::new(p, "composite given twice"));
        }
    }
    let mut missing = None;
    let objects_copy = objects.clone();
    let g = FiniteGroupoid::build(objects, arrows.clone(), |f, h| {
        table.get(&(f, h)).copied().unwrap_or_else(|| {
            missing.get_or_insert((f, h));
            f
        })
    });
    if let Some((f, h)) = missing {
        return Err(DocumentError::new(
            "$.compose",
            format!("missing composite of \"{}\" and \"{}\"", arrows[f.index()].0, arrows[h.index()].0),
        ));
    }
    let g = g.map_err(|e| {
        let an = |a: ArrId| arrows[a.index()].0.as_str();
        let msg = match e {
            GroupoidError::NotInvertible { arrow } => format!("arrow \"{}\" has no inverse", an(arrow)),
            GroupoidError::MissingIdentity { object } => {
                format!("object \"{}\" has no identity arrow", objects_copy[object.index()])
            }
            GroupoidError::IllTypedComposite { f, h, result } => format!(
                "composite of \"{}\" and \"{}\" is \"{}\", which has the wrong endpoints",
                an(f),
                an(h),
                an(result)
            ),
            e => e.to_string(),
        };
        DocumentError::new("$.compose", msg)
    })?;
    if let Some(inv) = v.get("inverse") {
        for (i, row) in as_array(inv, "$.inverse")?.iter().enumerate() {
            let p = format!("$.inverse[{i}]");
            let row = as_array(row, &p)?;
            if row.len() != 2 {
                return Err(DocumentError::new(p, "expected [a, a⁻¹]"));
            }
            let a = lookup(as_str(&row[0], &p)?, &p)?;
            let b = lookup(as_str(&row[1], &p)?, &p)?;
            if g.inverse(a) != b {
                return Err(DocumentError::new(p, "stated inverse disagrees with the table"));
            }
        }
    }
    Ok(g)
}

fn group_table(v: &Value, table: &Value) -> Res<FiniteGroupoid> {
    let rows = as_array(table, "$.group_table")?;
    let n = rows.len();
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let p = format!("$.group_table[{i}]");
        let row = as_array(row, &p)?;
        if row.len() != n {
            return Err(DocumentError::new(p, format!("expected {n} entries")));
        }
        for (j, x) in row.iter().enumerate() {
            flat.push(as_index(x, &format!("{p}[{j}]"))?);
        }
    }
    let labels: Vec<String> = match v.get("labels") {
        Some(l) => as_array(l, "$.labels")?
            .iter()
            .enumerate()
            .map(|(i, s)| as_str(s, &format!("$.labels[{i}]")).map(str::to_string))
            .collect::<Res<_>>()?,
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    if labels.len() != n {
        return Err(DocumentError::new("$.labels", format!("expected {n} labels")));
    }
    unique_names(&labels, "$.labels")?;
    let name = match v.get("object") {
        Some(o) => as_str(o, "$.object")?,
        None => "*",
    };
    let group = FiniteGroup::from_table(n, flat, labels)
        .map_err(|e| DocumentError::new("$.group_table", e.to_string()))?;
    Ok(FiniteGroupoid::from_group(&group, name))
}

/// The full form of a groupoid document (every composable pair listed).
pub fn groupoid_to_json(g: &FiniteGroupoid) -> Value {
    let objects: Vec<&str> = g.objects().map(|x| g.object_name(x)).collect();
    let arrows: Vec<Value> = g
        .arrows()
        .map(|a| {
            json!({
                "name": g.arrow_name(a),
                "dom": g.object_name(g.dom(a)),
                "cod": g.object_name(g.cod(a)),
            })
        })
        .collect();
    let mut compose = Vec::new();
    for f in g.arrows() {
        for &h in g.star_slice(g.dom(f)) {
            compose.push(json!([g.arrow_name(f), g.arrow_name(h), g.arrow_name(g.compose(f, h))]));
        }
    }
    json!({"objects": objects, "arrows": arrows, "compose": compose})
}

fn name_map<'a, I, F>(v: &Value, path: &str, n: usize, source_lookup: I, target_lookup: F) -> Res<Vec<usize>>
where
    I: Fn(&str) -> Option<usize>,
    F: Fn(&str) -> Option<usize>,
{
    let map = as_object(v, path)?;
    let mut out = vec![usize::MAX; n];
    for (k, val) in map {
        let p = format!("{path}.{k}");
        let s = source_lookup(k).ok_or_else(|| DocumentError::new(&p, format!("unknown source name \"{k}\"")))?;
        let t = as_str(val, &p)?;
        out[s] = target_lookup(t).ok_or_else(|| DocumentError::new(&p, format!("unknown target name \"{t}\"")))?;
    }
    if let Some(i) = out.iter().position(|&x| x == usize::MAX) {
        return Err(DocumentError::new(path, format!("map is not total (entry {i} missing)")));
    }
    Ok(out)
}

/// A morphism document against already-loaded endpoints. Functoriality is
/// checked.
pub fn morphism_from_json(
    v: &Value,
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
) -> Res<GroupoidMorphism> {
    let objects = name_map(
        field(v, "$", "objects")?,
        "$.objects",
        source.object_count(),
        |s| source.object_by_name(s).map(ObjId::index),
        |t| target.object_by_name(t).map(ObjId::index),
    )?;
    let arrows = name_map(
        field(v, "$", "arrows")?,
        "$.arrows",
        source.arrow_count(),
        |s| source.arrow_by_name(s).map(ArrId::index),
        |t| target.arrow_by_name(t).map(ArrId::index),
    )?;
    GroupoidMorphism::new(
        source,
        target,
        objects.into_iter().map(obj).collect(),
        arrows.into_iter().map(arr).collect(),
    )
    .map_err(|e| DocumentError::new("$", e.to_string()))
}

/// A morphism document with inline source and target.
pub fn morphism_to_json(m: &GroupoidMorphism) -> Value {
    let (s, t) = (m.source(), m.target());
    let objects: BTreeMap<&str, &str> = s
        .objects()
        .map(|x| (s.object_name(x), t.object_name(m.map_object(x))))
        .collect();
    let arrows: BTreeMap<&str, &str> = s
        .arrows()
        .map(|a| (s.arrow_name(a), t.arrow_name(m.map_arrow(a))))
        .collect();
    json!({
        "source": groupoid_to_json(s),
        "target": groupoid_to_json(t),
        "objects": objects,
        "arrows": arrows,
    })
}

pub fn covering_to_json(p: &Covering) -> Value {
    morphism_to_json(p.morphism())
}

/// `{"space": .., "generators": [{"objects": .., "arrows": ..}, ..]}` with the
/// space already loaded.
pub fn action_from_json(v: &Value, space: Arc<FiniteGroupoid>) -> Res<GroupAction> {
    let gens = as_array(field(v, "$", "generators")?, "$.generators")?;
    let mut maps = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let m = morphism_from_json(g, space.clone(), space.clone())
            .map_err(|e| DocumentError::new(format!("$.generators[{i}]{}", &e.path[1..]), e.message))?;
        maps.push(m);
    }
    GroupAction::generated_by(space, maps).map_err(|e| DocumentError::new("$.generators", e.to_string()))
}

/// `{"base": .., "sets": {object: [elements]}, "maps": {arrow: {element: element}}}`
/// where the map of `g: D → C` sends elements over `C` to elements over `D`.
pub fn presheaf_from_json(v: &Value, base: Arc<FiniteGroupoid>) -> Res<Presheaf> {
    let sets_v = as_object(field(v, "$", "sets")?, "$.sets")?;
    let mut sets = vec![None; base.object_count()];
    for (k, elems) in sets_v {
        let p = format!("$.sets.{k}");
        let x = base
            .object_by_name(k)
            .ok_or_else(|| DocumentError::new(&p, format!("unknown object \"{k}\"")))?;
        let elems: Vec<String> = as_array(elems, &p)?
            .iter()
            .enumerate()
            .map(|(i, e)| as_str(e, &format!("{p}[{i}]")).map(str::to_string))
            .collect::<Res<_>>()?;
        unique_names(&elems, &p)?;
        sets[x.index()] = Some(elems);
    }
    let sets: Vec<Vec<String>> = sets
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| {
                DocumentError::new("$.sets", format!("no set for object \"{}\"", base.object_name(obj(i))))
            })
        })
        .collect::<Res<_>>()?;
    let maps_v = as_object(field(v, "$", "maps")?, "$.maps")?;
    let mut maps = vec![None; base.arrow_count()];
    for (k, m) in maps_v {
        let p = format!("$.maps.{k}");
        let g = base
            .arrow_by_name(k)
            .ok_or_else(|| DocumentError::new(&p, format!("unknown arrow \"{k}\"")))?;
        let (c, d) = (base.cod(g).index(), base.dom(g).index());
        let idx = |set: &Vec<String>, s: &str| set.iter().position(|e| e == s);
        let table = name_map(m, &p, sets[c].len(), |s| idx(&sets[c], s), |t| idx(&sets[d], t))?;
        maps[g.index()] = Some(table);
    }
    let maps: Vec<Vec<usize>> = maps
        .into_iter()
        .enumerate()
        .map(|(i, m)| match m {
            Some(m) => Ok(m),
            // identities may be omitted
            None if base.is_identity(arr(i)) => Ok((0..sets[base.cod(arr(i)).index()].len()).collect()),
            None => Err(DocumentError::new(
                "$.maps",
                format!("no map for arrow \"{}\"", base.arrow_name(arr(i))),
            )),
        })
        .collect::<Res<_>>()?;
    Presheaf::new(base, sets, maps).map_err(|e| DocumentError::new("$.maps", e.to_string()))
}

pub fn presheaf_to_json(f: &Presheaf) -> Value {
    let base = f.base();
    let sets: BTreeMap<&str, &[String]> = base.objects().map(|x| (base.object_name(x), f.set(x))).collect();
    let maps: BTreeMap<&str, BTreeMap<&str, &str>> = base
        .arrows()
        .map(|g| {
            let (c, d) = (base.cod(g), base.dom(g));
            let m = f
                .set(c)
                .iter()
                .enumerate()
                .map(|(i, e)| (e.as_str(), f.set(d)[f.apply(g, i)].as_str()))
                .collect();
            (base.arrow_name(g), m)
        })
        .collect();
    json!({"base": groupoid_to_json(base), "sets": sets, "maps": maps})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::topos::covering_to_presheaf;

    #[test]
    fn groupoids_round_trip() {
        for (_, g) in fixtures::all() {
            let back = groupoid_from_json(&groupoid_to_json(&g)).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn group_table_shorthand() {
        let v = json!({"group_table": [[0, 1], [1, 0]], "labels": ["e", "s"]});
        let g = groupoid_from_json(&v).unwrap();
        assert_eq!(g.arrow_count(), 2);
        assert!(g.validate().is_valid());
        let bad = json!({"group_table": [[0, 1], [0, 1]]});
        let e = groupoid_from_json(&bad).unwrap_err();
        assert_eq!(e.path, "$.group_table");
    }

    #[test]
    fn errors_carry_paths() {
        let v = json!({
            "objects": ["x"],
            "arrows": [{"name": "1", "dom": "x", "cod": "y"}],
            "compose": []
        });
        assert_eq!(groupoid_from_json(&v).unwrap_err().path, "$.arrows[0].cod");
        let v = json!({
            "objects": ["x"],
            "arrows": [{"name": "1", "dom": "x", "cod": "x"}],
            "compose": []
        });
        assert_eq!(groupoid_from_json(&v).unwrap_err().path, "$.compose");
        let v = json!({"objects": ["x", "x"], "arrows": [], "compose": []});
        assert_eq!(groupoid_from_json(&v).unwrap_err().path, "$.objects[1]");
    }

    #[test]
    fn morphisms_and_presheaves_round_trip() {
        let c4 = Arc::new(fixtures::c4());
        let id = GroupoidMorphism::identity(c4.clone());
        let v = morphism_to_json(&id);
        let m = morphism_from_json(&v, c4.clone(), c4.clone()).unwrap();
        assert!(m.same_maps(&id));
        let o = crate::topos::omega(c4.clone());
        let f = covering_to_presheaf(&o).unwrap();
        let back = presheaf_from_json(&presheaf_to_json(&f), c4).unwrap();
        assert_eq!(back, f);
    }
}
