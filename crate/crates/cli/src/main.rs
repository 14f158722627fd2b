mod dot;
mod error;
mod load;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use groupoid_cover::classify::{build_lattice, equivalent_coverings, pullback_covering, pushout_covering, GaloisLattice};
use groupoid_cover::construct::{covering_from_subgroup, orbit_groupoid, universal_cover};
use groupoid_cover::document::{
    action_from_json, covering_to_json, groupoid_to_json, morphism_to_json, presheaf_from_json,
    presheaf_to_json,
};
use groupoid_cover::groupoid::ObjId;
use groupoid_cover::selftest;
use groupoid_cover::topos::{
    adjunction_check, characteristic_morphism, covering_to_presheaf, exponential, omega,
    presheaf_to_covering, subobjects,
};
use groupoid_cover::transform::{cov_normalizer_iso, covering_transformations_at, is_regular};
use groupoid_cover::{Covering, FiniteGroupoid, GroupoidMorphism, Subgroup};

use error::CliError;
use load::{
    arrow, covering_arg, covering_of, groupoid_arg, loop_names, loop_subgroup, morphism_arg, object,
    object_or_first,
};

#[derive(Parser)]
#[command(name = "gcover", version, about = "Finite groupoids and their coverings")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid laws and report every violation.
    Validate { groupoid: String },
    /// Arrows into an object.
    Star {
        groupoid: String,
        #[arg(long)]
        object: String,
    },
    /// Connected components.
    Components { groupoid: String },
    /// The group of loops at an object.
    VertexGroup {
        groupoid: String,
        #[arg(long)]
        object: String,
    },
    /// Whether a morphism document is a covering; reports the first bad star.
    CheckCover { morphism: String },
    /// Objects and arrows of a covering over one base object.
    Fiber {
        covering: String,
        #[arg(long)]
        over: String,
    },
    /// The lift of a base arrow ending at a total object.
    LiftArrow {
        covering: String,
        #[arg(long)]
        arrow: String,
        #[arg(long)]
        at: String,
    },
    /// Lift a morphism into the base through the covering.
    LiftMorphism {
        covering: String,
        morphism: String,
        #[arg(long)]
        seed: String,
        #[arg(long)]
        at: String,
    },
    /// Number of sheets over a connected base.
    Fold { covering: String },
    /// Right action of the loops at a base object on its fiber.
    Monodromy {
        covering: String,
        #[arg(long)]
        over: String,
    },
    /// Coset covering of the subgroup generated by the given loops.
    BuildCover {
        groupoid: String,
        #[arg(long)]
        object: Option<String>,
        /// Comma-separated loop names; empty for the trivial subgroup.
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
    },
    /// Universal covering at an object.
    Universal {
        groupoid: String,
        #[arg(long)]
        object: Option<String>,
    },
    /// Quotient of a groupoid by a free group action.
    Orbit {
        #[arg(long)]
        action: String,
    },
    /// Covering transformations, named by where they send the marked object.
    CovGroup {
        covering: String,
        #[arg(long)]
        marked: Option<String>,
    },
    /// Whether a connected covering is regular.
    Regular { covering: String },
    /// The isomorphism from normalizer quotient to covering transformations.
    NormalizerIso {
        covering: String,
        #[arg(long)]
        at: String,
    },
    /// Search for an equivalence between two coverings.
    Equiv {
        first: String,
        second: String,
        /// Allow an automorphism of the base instead of the identity.
        #[arg(long)]
        any_base: bool,
    },
    /// Pull a covering back along a morphism into its base.
    Pullback { covering: String, morphism: String },
    /// Pushout of two intermediate covers of the universal cover.
    Pushout {
        groupoid: String,
        #[arg(long)]
        object: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// The lattice of connected coverings.
    Lattice {
        groupoid: String,
        #[arg(long)]
        object: Option<String>,
        /// Emit a DOT Hasse diagram.
        #[arg(long)]
        dot: bool,
    },
    /// The subobject classifier G ⊔ G.
    Omega { groupoid: String },
    /// Characteristic morphism of a union of components.
    Char {
        covering: String,
        /// Comma-separated objects of the total groupoid.
        #[arg(long, allow_hyphen_values = true)]
        sub: String,
    },
    /// Every subobject of a covering.
    Subobjects { covering: String },
    /// The exponential covering values^exponent.
    Expo { values: String, exponent: String },
    /// Enumerate both sides of the product-exponential adjunction.
    Adjunction {
        r: String,
        p: String,
        q: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: usize,
    },
    /// The presheaf of fibers of a covering.
    ToPresheaf { covering: String },
    /// The covering of a presheaf document.
    FromPresheaf { presheaf: String },
    /// Run the acceptance criteria.
    Selftest,
}

enum Output {
    Json(Value),
    Text(String),
}

fn names<I: IntoIterator<Item = ObjId>>(g: &FiniteGroupoid, xs: I) -> Vec<String> {
    xs.into_iter().map(|x| g.object_name(x).to_string()).collect()
}

fn with_marked(p: &Covering, marked: ObjId) -> Value {
    let mut v = covering_to_json(p);
    v["marked"] = json!(p.total().object_name(marked));
    v
}

fn negative_bool(key: &str, value: bool, mut report: Value) -> Result<Output, CliError> {
    report[key] = json!(value);
    if value {
        Ok(Output::Json(report))
    } else {
        Err(CliError::negative(format!("{key}: false"), report))
    }
}

/// Cov-subgroup of the universal cover corresponding to a loop subgroup.
fn cov_subgroup(l: &GaloisLattice, loops: &Subgroup) -> Result<Subgroup, CliError> {
    let u = &l.universal;
    let vg = l.base.vertex_group(l.base_object).map_err(|e| CliError::Input(e.to_string()))?;
    let mut elems = Vec::new();
    for &e in loops.elements() {
        let lifted = u.covering.lift_arrow(vg.arrow_of(e), u.marked)?;
        let y = u.covering.total().dom(lifted);
        elems.push(
            l.cov
                .element_sending_marked_to(y)
                .ok_or_else(|| CliError::Verification(format!("no transformation reaches {y}")))?,
        );
    }
    elems.sort_unstable();
    elems.dedup();
    l.cov.group.subgroup(&elems).map_err(|e| CliError::Verification(e.to_string()))
}

/// Loops at the base object whose lifts end in the orbit of the marked object.
fn loop_subgroup_of(l: &GaloisLattice, cov_sub: &Subgroup) -> Result<Vec<String>, CliError> {
    let u = &l.universal;
    let vg = l.base.vertex_group(l.base_object).map_err(|e| CliError::Input(e.to_string()))?;
    let orbit: Vec<ObjId> = cov_sub
        .elements()
        .iter()
        .map(|&h| l.cov.transformations[h].map_object(u.marked))
        .collect();
    let mut out = Vec::new();
    for &a in &vg.arrows {
        if orbit.contains(&u.covering.total().dom(u.covering.lift_arrow(a, u.marked)?)) {
            out.push(l.base.arrow_name(a).to_string());
        }
    }
    Ok(out)
}

fn run(cmd: Command) -> Result<Output, CliError> {
    use Command::*;
    Ok(match cmd {
        Validate { groupoid } => {
            let doc = load::read(Path::new(&groupoid))?;
            let g = load::groupoid_value(&doc.value, &doc.label, false)?;
            let report = g.validate();
            let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return negative_bool(
                "valid",
                report.is_valid(),
                json!({"objects": g.object_count(), "arrows": g.arrow_count(), "violations": violations}),
            );
        }
        Star { groupoid, object: x } => {
            let g = groupoid_arg(&groupoid)?;
            let o = object(&g, &x)?;
            let arrows: Vec<&str> = g.star_slice(o).iter().map(|&a| g.arrow_name(a)).collect();
            Output::Json(json!({"object": x, "size": arrows.len(), "arrows": arrows}))
        }
        Components { groupoid } => {
            let g = groupoid_arg(&groupoid)?;
            let comps: Vec<Vec<String>> = g.components().into_iter().map(|c| names(&g, c)).collect();
            Output::Json(json!({"count": comps.len(), "components": comps}))
        }
        VertexGroup { groupoid, object: x } => {
            let g = groupoid_arg(&groupoid)?;
            let vg = g.vertex_group(object(&g, &x)?).map_err(|e| CliError::Input(e.to_string()))?;
            let n = vg.group.order();
            let elements: Vec<&str> = vg.arrows.iter().map(|&a| g.arrow_name(a)).collect();
            let table: Vec<Vec<&str>> = (0..n)
                .map(|a| (0..n).map(|b| elements[vg.group.mul(a, b)]).collect())
                .collect();
            Output::Json(json!({
                "object": x,
                "order": n,
                "abelian": vg.group.is_abelian(),
                "elements": elements,
                "table": table,
            }))
        }
        CheckCover { morphism } => {
            let p = covering_of(morphism_arg(&morphism)?)?;
            let fold = if p.base().is_connected() { json!(p.fold()?) } else { Value::Null };
            Output::Json(json!({"covering": true, "fold": fold}))
        }
        Fiber { covering, over } => {
            let p = covering_arg(&covering)?;
            let f = p.fiber(object(p.base(), &over)?)?;
            let t = p.total();
            let arrows: Vec<&str> = f.arrows.iter().map(|&a| t.arrow_name(a)).collect();
            Output::Json(json!({"over": over, "objects": names(t, f.objects), "arrows": arrows}))
        }
        LiftArrow { covering, arrow: a, at } => {
            let p = covering_arg(&covering)?;
            let g = arrow(p.base(), &a)?;
            let x = object(p.total(), &at)?;
            let l = p.lift_arrow(g, x)?;
            let t = p.total();
            Output::Json(json!({
                "arrow": a,
                "at": at,
                "lift": t.arrow_name(l),
                "dom": t.object_name(t.dom(l)),
            }))
        }
        LiftMorphism { covering, morphism, seed, at } => {
            let p = covering_arg(&covering)?;
            let f = morphism_arg(&morphism)?;
            let s = object(f.source(), &seed)?;
            let x = object(p.total(), &at)?;
            match p.lift_morphism(&f, s, x)? {
                Some(l) => Output::Json(json!({"exists": true, "lift": morphism_to_json(&l)})),
                None => {
                    return Err(CliError::negative(
                        "no lift: the image of the loops is not inside the pushforward",
                        json!({"exists": false}),
                    ))
                }
            }
        }
        Fold { covering } => {
            let p = covering_arg(&covering)?;
            Output::Json(json!({"fold": p.fold()?}))
        }
        Monodromy { covering, over } => {
            let p = covering_arg(&covering)?;
            let m = p.monodromy(object(p.base(), &over)?)?;
            let (t, b) = (p.total(), p.base());
            let fiber = names(t, m.carrier.iter().copied());
            let action: BTreeMap<&str, Vec<&str>> = m
                .group
                .arrows
                .iter()
                .enumerate()
                .map(|(g, &a)| {
                    let images = (0..m.carrier.len()).map(|i| fiber[m.act(i, g)].as_str()).collect();
                    (b.arrow_name(a), images)
                })
                .collect();
            Output::Json(json!({
                "over": over,
                "fiber": fiber,
                "action": action,
                "transitive": m.is_transitive(),
                "free": m.is_free(),
            }))
        }
        BuildCover { groupoid, object: x, subgroup } => {
            let g = groupoid_arg(&groupoid)?;
            let o = object_or_first(&g, x.as_deref())?;
            let sub = loop_subgroup(&g, o, &subgroup)?;
            let m = covering_from_subgroup(g, o, &sub)?;
            Output::Json(with_marked(&m.covering, m.marked))
        }
        Universal { groupoid, object: x } => {
            let g = groupoid_arg(&groupoid)?;
            let o = object_or_first(&g, x.as_deref())?;
            let m = universal_cover(g, o)?;
            Output::Json(with_marked(&m.covering, m.marked))
        }
        Orbit { action } => {
            let doc = load::read(Path::new(&action))?;
            let space = load::groupoid_field(&doc, "space")?;
            let act = action_from_json(&doc.value, space).map_err(|e| CliError::Input(format!("{}: {e}", doc.label)))?;
            let o = orbit_groupoid(&act)?;
            Output::Json(json!({
                "quotient": groupoid_to_json(&o.quotient),
                "projection": morphism_to_json(&o.projection),
            }))
        }
        CovGroup { covering, marked } => {
            let p = covering_arg(&covering)?;
            let x = object_or_first(p.total(), marked.as_deref())?;
            let cov = covering_transformations_at(&p, x)?;
            let t = p.total();
            let elements: Vec<&str> = cov
                .transformations
                .iter()
                .map(|h| t.object_name(h.map_object(x)))
                .collect();
            let n = cov.order();
            let table: Vec<Vec<&str>> = (0..n)
                .map(|a| (0..n).map(|b| elements[cov.group.mul(a, b)]).collect())
                .collect();
            Output::Json(json!({
                "marked": t.object_name(x),
                "order": n,
                "elements": elements,
                "table": table,
                "transitive": cov.is_transitive_on_fiber(),
            }))
        }
        Regular { covering } => {
            let p = covering_arg(&covering)?;
            return negative_bool("regular", is_regular(&p)?, json!({}));
        }
        NormalizerIso { covering, at } => {
            let p = covering_arg(&covering)?;
            let x = object(p.total(), &at)?;
            let iso = cov_normalizer_iso(&p, x)?;
            let (b, t) = (p.base(), p.total());
            let bx = p.project_object(x);
            let map: BTreeMap<String, &str> = iso
                .quotient
                .cosets
                .iter()
                .zip(&iso.map)
                .map(|(coset, &h)| {
                    let reps: Vec<String> = coset
                        .iter()
                        .map(|&i| iso.normalizer.elements()[i])
                        .map(|e| b.arrow_name(iso_vertex_arrow(b, bx, e)).to_string())
                        .collect();
                    (reps.join(","), t.object_name(iso.cov.transformations[h].map_object(x)))
                })
                .collect();
            Output::Json(json!({
                "at": at,
                "pushforward": loop_names(b, bx, &iso.pushforward)?,
                "normalizer": loop_names(b, bx, &iso.normalizer)?,
                "cov_order": iso.cov.order(),
                "map": map,
            }))
        }
        Equiv { first, second, any_base } => {
            let (p, q) = (covering_arg(&first)?, covering_arg(&second)?);
            match equivalent_coverings(&p, &q, !any_base)? {
                Some(e) => Output::Json(json!({
                    "equivalent": true,
                    "total": morphism_to_json(&e.total_map),
                    "base": morphism_to_json(&e.base_map),
                })),
                None => return Err(CliError::negative("coverings are not equivalent", json!({"equivalent": false}))),
            }
        }
        Pullback { covering, morphism } => {
            let p = covering_arg(&covering)?;
            let f = morphism_arg(&morphism)?;
            let pb = pullback_covering(&p, &f)?;
            Output::Json(json!({
                "covering": covering_to_json(&pb.covering),
                "to_total": morphism_to_json(&pb.to_total),
                "components": pb.covering.total().components().len(),
            }))
        }
        Pushout { groupoid, object: x, left, right } => {
            let g = groupoid_arg(&groupoid)?;
            let o = object_or_first(&g, x.as_deref())?;
            let l = build_lattice(g.clone(), o)?;
            let node = |loops: &str| -> Result<usize, CliError> {
                let cs = cov_subgroup(&l, &loop_subgroup(&g, o, loops)?)?;
                l.class_of(&cs)
                    .ok_or_else(|| CliError::Verification("subgroup missing from the lattice".into()))
            };
            let (i, j) = (node(&left)?, node(&right)?);
            let po = pushout_covering(&l.classes[i].cover, &l.classes[j].cover)?;
            let k = l.join[i][j];
            Output::Json(json!({
                "covering": with_marked(&po.lower, po.marked),
                "fold": po.lower.fold()?,
                "subgroup": loop_subgroup_of(&l, &l.classes[k].subgroup)?,
            }))
        }
        Lattice { groupoid, object: x, dot } => {
            let g = groupoid_arg(&groupoid)?;
            let o = object_or_first(&g, x.as_deref())?;
            let l = build_lattice(g, o)?;
            let labels: Vec<Vec<String>> = l
                .classes
                .iter()
                .map(|c| loop_subgroup_of(&l, &c.subgroup))
                .collect::<Result<_, _>>()?;
            if dot {
                Output::Text(dot::lattice_dot(&l, &labels))
            } else {
                let nodes: Vec<Value> = l
                    .classes
                    .iter()
                    .zip(&labels)
                    .enumerate()
                    .map(|(i, (c, sub))| json!({"id": i, "fold": c.fold, "regular": c.regular, "subgroup": sub}))
                    .collect();
                Output::Json(json!({
                    "nodes": nodes,
                    "hasse": l.hasse_edges(),
                    "meet": l.meet,
                    "join": l.join,
                }))
            }
        }
        Omega { groupoid } => Output::Json(covering_to_json(&omega(groupoid_arg(&groupoid)?))),
        Char { covering, sub } => {
            let h = covering_arg(&covering)?;
            let t = h.total();
            let objs: Vec<ObjId> = sub
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| object(t, s))
                .collect::<Result<_, _>>()?;
            if let Some(a) = t.arrows().find(|&a| objs.contains(&t.dom(a)) != objs.contains(&t.cod(a))) {
                return Err(CliError::negative(
                    "the objects are not a union of components",
                    json!({"union_of_components": false, "crossing_arrow": t.arrow_name(a)}),
                ));
            }
            let s = t.full_subgroupoid(&objs);
            let inclusion = GroupoidMorphism::new(Arc::new(s.groupoid), t.clone(), s.objects, s.arrows)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            let ch = characteristic_morphism(&h, &inclusion)?;
            Output::Json(json!({
                "characteristic": morphism_to_json(&ch.classifying),
                "true_components": ch.true_components,
            }))
        }
        Subobjects { covering } => {
            let h = covering_arg(&covering)?;
            let lat = subobjects(&h)?;
            let comps: Vec<Vec<String>> = lat.components.iter().map(|c| names(h.total(), c.iter().copied())).collect();
            let members: Vec<&std::collections::BTreeSet<usize>> = lat.members.iter().map(|s| &s.components).collect();
            Output::Json(json!({"count": lat.len(), "components": comps, "subobjects": members}))
        }
        Expo { values, exponent } => {
            let (q, p) = (covering_arg(&values)?, covering_arg(&exponent)?);
            Output::Json(covering_to_json(&exponential(&q, &p)?.covering))
        }
        Adjunction { r, p, q, limit } => {
            let (r, p, q) = (covering_arg(&r)?, covering_arg(&p)?, covering_arg(&q)?);
            let rep = adjunction_check(&r, &p, &q, limit)?;
            Output::Json(json!({
                "product_to_values": rep.left.len(),
                "to_exponential": rep.right.len(),
                "bijection": true,
            }))
        }
        ToPresheaf { covering } => Output::Json(presheaf_to_json(&covering_to_presheaf(&covering_arg(&covering)?)?)),
        FromPresheaf { presheaf } => {
            let doc = load::read(Path::new(&presheaf))?;
            let base = load::groupoid_field(&doc, "base")?;
            let f = presheaf_from_json(&doc.value, base).map_err(|e| CliError::Input(format!("{}: {e}", doc.label)))?;
            Output::Json(covering_to_json(&presheaf_to_covering(&f)?))
        }
        Selftest => {
            let results = selftest::run_all();
            let mut text = String::new();
            for r in &results {
                text.push_str(&format!(
                    "criterion {:>2} {:<40} {}  {}\n",
                    r.number,
                    r.title,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail
                ));
            }
            if results.iter().any(|r| !r.passed) {
                emit(&Output::Text(text), None).ok();
                return Err(CliError::Verification("some acceptance criteria failed".into()));
            }
            Output::Text(text)
        }
    })
}

fn iso_vertex_arrow(g: &FiniteGroupoid, x: ObjId, e: usize) -> groupoid_cover::ArrId {
    g.vertex_group(x).expect("object").arrow_of(e)
}

fn emit(out: &Output, path: Option<&Path>) -> std::io::Result<()> {
    let text = match out {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Output::Text(t) => t.clone(),
    };
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli.command);
    let (output, code) = match result {
        Ok(o) => (Some(o), 0),
        Err(e) => {
            eprintln!("gcover: {e}");
            let code = e.exit_code();
            match e {
                CliError::Negative { report, .. } => (Some(Output::Json(report)), code),
                _ => (None, code),
            }
        }
    };
    if let Some(o) = output {
        if let Err(e) = emit(&o, out.as_deref()) {
            eprintln!("gcover: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
