//! Equivalence of coverings, pullbacks and pushouts, and the lattice of
//! intermediate coverings matched against subgroups of the transformation
//! group of the universal cover.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::construct::{
    covering_from_subgroup, orbit_groupoid, universal_cover, MarkedCovering, OrbitGroupoid,
};
use crate::covering::{is_covering, Covering};
use crate::error::CoverError;
use crate::group::{Subgroup, DEFAULT_SUBGROUP_BOUND};
use crate::groupoid::{arr, obj, ArrId, FiniteGroupoid, ObjId};
use crate::morphism::{enumerate_morphisms, fibered_product, same_groupoid, GroupoidMorphism};
use crate::transform::{covering_transformations_at, is_regular, CovGroup};

/// Isomorphisms `total_map` between totals and `base_map` between bases with
/// `q ∘ total_map = base_map ∘ p`.
#[derive(Clone, Debug)]
pub struct CoveringEquivalence {
    pub total_map: GroupoidMorphism,
    pub base_map: GroupoidMorphism,
}

fn check_connected(p: &Covering) -> Result<(), CoverError> {
    if p.is_connected() && p.base().is_connected() {
        Ok(())
    } else {
        Err(CoverError::Disconnected)
    }
}

/// Searches for an equivalence `p → q`. A candidate `total_map` is determined by the
/// image of one object, so for each base isomorphism only one fiber is tried.
pub fn equivalent_coverings(
    p: &Covering,
    q: &Covering,
    fixed_base: bool,
) -> Result<Option<CoveringEquivalence>, CoverError> {
    check_connected(p)?;
    check_connected(q)?;
    let (tp, tq) = (p.total(), q.total());
    if tp.object_count() != tq.object_count() || tp.arrow_count() != tq.arrow_count() {
        return Ok(None);
    }
    let psis = if fixed_base {
        if !same_groupoid(p.base(), q.base()) {
            return Err(CoverError::BaseMismatch);
        }
        vec![GroupoidMorphism::identity(q.base().clone())]
    } else {
        enumerate_morphisms(p.base(), q.base(), None, 1_000_000)?
            .into_iter()
            .filter(GroupoidMorphism::is_isomorphism)
            .collect()
    };
    if tp.is_empty() {
        return Ok(psis.into_iter().next().map(|base_map| CoveringEquivalence {
            total_map: GroupoidMorphism::new_unchecked(tp.clone(), tq.clone(), Vec::new(), Vec::new()),
            base_map,
        }));
    }
    let x = ObjId(0);
    for base_map in psis {
        let m = base_map.with_endpoints(p.base().clone(), q.base().clone()).after(p.morphism())?;
        let target = m.map_object(x);
        for y in tq.objects().filter(|&y| q.project_object(y) == target) {
            if let Some(total_map) = q.lift_morphism(&m, x, y)? {
                if total_map.is_isomorphism() {
                    return Ok(Some(CoveringEquivalence { total_map, base_map }));
                }
            }
        }
    }
    Ok(None)
}

/// The equivalence over a common base sending `x` to `y`, if any.
pub fn pointed_equivalence(
    p: &Covering,
    x: ObjId,
    q: &Covering,
    y: ObjId,
) -> Result<Option<GroupoidMorphism>, CoverError> {
    if !same_groupoid(p.base(), q.base()) {
        return Err(CoverError::BaseMismatch);
    }
    let m = p
        .morphism()
        .with_endpoints(p.total().clone(), q.base().clone());
    Ok(q.lift_morphism(&m, x, y)?.filter(|total_map| total_map.is_isomorphism()))
}

/// The pullback of a covering along `f`, with its map to the original total.
#[derive(Clone, Debug)]
pub struct PullbackCovering {
    pub covering: Covering,
    pub to_total: GroupoidMorphism,
}

pub fn pullback_covering(
    p: &Covering,
    f: &GroupoidMorphism,
) -> Result<PullbackCovering, CoverError> {
    if !same_groupoid(f.target(), p.base()) {
        return Err(CoverError::BaseMismatch);
    }
    let fp = fibered_product(f, p.morphism())?;
    let covering = is_covering(fp.left).map_err(|e| {
        CoverError::verification("pullback of a covering is a covering", e.to_string())
    })?;
    Ok(PullbackCovering {
        covering,
        to_total: fp.right,
    })
}

/// A covering `lower: H → G` under the universal cover, with `upper: U → H`,
/// `lower ∘ upper` the universal projection, and `marked` the image of the
/// marked universal object.
#[derive(Clone, Debug)]
pub struct IntermediateCover {
    pub upper: Covering,
    pub lower: Covering,
    pub marked: ObjId,
}

fn check_same_tower(a: &IntermediateCover, b: &IntermediateCover) -> Result<(), CoverError> {
    if !same_groupoid(a.upper.total(), b.upper.total()) {
        return Err(CoverError::UniversalMismatch);
    }
    if !same_groupoid(a.lower.base(), b.lower.base()) {
        return Err(CoverError::BaseMismatch);
    }
    Ok(())
}

/// The component of the fibered product `a ×_G b` containing the image of the
/// universal cover.
pub fn meet_covering(
    a: &IntermediateCover,
    b: &IntermediateCover,
    universal_marked: ObjId,
) -> Result<IntermediateCover, CoverError> {
    check_same_tower(a, b)?;
    let base = a.lower.base().clone();
    let fp = fibered_product(
        a.lower.morphism(),
        &b.lower.morphism().with_endpoints(b.lower.total().clone(), base.clone()),
    )?;
    let prod = &fp.groupoid;
    let obj_of: HashMap<(ObjId, ObjId), ObjId> = prod
        .objects()
        .map(|z| ((fp.left.map_object(z), fp.right.map_object(z)), z))
        .collect();
    let arr_of: HashMap<(ArrId, ArrId), ArrId> = prod
        .arrows()
        .map(|z| ((fp.left.map_arrow(z), fp.right.map_arrow(z)), z))
        .collect();
    let u = a.upper.total();
    let start = obj_of[&(
        a.upper.project_object(universal_marked),
        b.upper.project_object(universal_marked),
    )];
    let component_index = prod.component_index();
    let comp: Vec<ObjId> = prod
        .objects()
        .filter(|z| component_index[z.index()] == component_index[start.index()])
        .collect();
    let sub = prod.full_subgroupoid(&comp);
    let mut local_obj = vec![None; prod.object_count()];
    for (i, &z) in sub.objects.iter().enumerate() {
        local_obj[z.index()] = Some(obj(i));
    }
    let mut local_arr = vec![None; prod.arrow_count()];
    for (i, &z) in sub.arrows.iter().enumerate() {
        local_arr[z.index()] = Some(arr(i));
    }
    let total = Arc::new(sub.groupoid);
    let lower = GroupoidMorphism::new(
        total.clone(),
        base.clone(),
        sub.objects
            .iter()
            .map(|&z| a.lower.project_object(fp.left.map_object(z)))
            .collect(),
        sub.arrows
            .iter()
            .map(|&z| a.lower.project_arrow(fp.left.map_arrow(z)))
            .collect(),
    )?;
    let lost = || CoverError::verification("universal cover maps into one component", "image left the component");
    let upper = GroupoidMorphism::new(
        u.clone(),
        total.clone(),
        u.objects()
            .map(|x| {
                local_obj[obj_of[&(a.upper.project_object(x), b.upper.project_object(x))].index()]
                    .ok_or_else(lost)
            })
            .collect::<Result<_, _>>()?,
        u.arrows()
            .map(|x| {
                local_arr[arr_of[&(a.upper.project_arrow(x), b.upper.project_arrow(x))].index()]
                    .ok_or_else(lost)
            })
            .collect::<Result<_, _>>()?,
    )?;
    let as_cover = |m: GroupoidMorphism, what: &str| {
        is_covering(m).map_err(|e| CoverError::verification(what, e.to_string()))
    };
    Ok(IntermediateCover {
        marked: local_obj[start.index()].expect("start is in its component"),
        upper: as_cover(upper, "pullback component is covered by the universal cover")?,
        lower: as_cover(lower, "pullback component is a covering")?,
    })
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// The pushout of `a ← U → b` over the base: the fiberwise quotient of
/// `a ⊔ b` by the relation generated by `r_a(x) ~ r_b(x)`.
pub fn pushout_covering(
    a: &IntermediateCover,
    b: &IntermediateCover,
) -> Result<IntermediateCover, CoverError> {
    check_same_tower(a, b)?;
    let base = a.lower.base().clone();
    let (ha, hb) = (a.lower.total(), b.lower.total());
    let na = ha.object_count();
    let n = na + hb.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    let u = a.upper.total();
    for x in u.objects() {
        let l = find(&mut parent, a.upper.project_object(x).index());
        let r = find(&mut parent, na + b.upper.project_object(x).index());
        let (lo, hi) = (l.min(r), l.max(r));
        parent[hi] = lo;
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if class_of[root] == usize::MAX {
            class_of[root] = reps.len();
            reps.push(i);
        }
        class_of[i] = class_of[root];
    }
    let project = |i: usize| -> ObjId {
        if i < na {
            a.lower.project_object(obj(i))
        } else {
            b.lower.project_object(obj(i - na))
        }
    };
    let lift_dom = |g: ArrId, i: usize| -> usize {
        if i < na {
            ha.dom(a.lower.lift(g, obj(i))).index()
        } else {
            na + hb.dom(b.lower.lift(g, obj(i - na))).index()
        }
    };
    let obj_base: Vec<ObjId> = reps.iter().map(|&i| project(i)).collect();
    let mut offset = Vec::with_capacity(reps.len());
    let mut arrows = Vec::new();
    let mut arr_base = Vec::new();
    for (c, &rep) in reps.iter().enumerate() {
        offset.push(arrows.len());
        for &g in base.star_slice(obj_base[c]) {
            let d = class_of[lift_dom(g, rep)];
            for member in (0..n).filter(|&m| class_of[m] == c) {
                if class_of[lift_dom(g, member)] != d {
                    return Err(CoverError::verification(
                        "pushout relation is compatible with lifting",
                        format!("lifts of {} into class {c} leave different classes", base.arrow_name(g)),
                    ));
                }
            }
            arrows.push((format!("{}@c{c}", base.arrow_name(g)), obj(d), obj(c)));
            arr_base.push(g);
        }
    }
    let cod_class: Vec<usize> = arrows.iter().map(|t| t.2.index()).collect();
    let total = Arc::new(FiniteGroupoid::build(
        (0..reps.len()).map(|c| format!("c{c}")).collect(),
        arrows,
        |f, h| {
            let c = cod_class[f.index()];
            arr(offset[c] + base.star_position(base.compose(arr_base[f.index()], arr_base[h.index()])))
        },
    )?);
    let lower = GroupoidMorphism::new(total.clone(), base.clone(), obj_base, arr_base)?;
    let p_u = |x: ArrId| a.lower.project_arrow(a.upper.project_arrow(x));
    let upper = GroupoidMorphism::new(
        u.clone(),
        total.clone(),
        u.objects()
            .map(|x| obj(class_of[a.upper.project_object(x).index()]))
            .collect(),
        u.arrows()
            .map(|x| {
                let c = class_of[a.upper.project_object(u.cod(x)).index()];
                arr(offset[c] + base.star_position(p_u(x)))
            })
            .collect(),
    )
    .map_err(|e| CoverError::verification("universal cover maps to the pushout", e.to_string()))?;
    let as_cover = |m: GroupoidMorphism, what: &str| {
        is_covering(m).map_err(|e| CoverError::verification(what, e.to_string()))
    };
    Ok(IntermediateCover {
        marked: obj(class_of[a.marked.index()]),
        upper: as_cover(upper, "pushout is covered by the universal cover")?,
        lower: as_cover(lower, "pushout is a covering")?,
    })
}

/// One node of the lattice: the orbit covering `U/Π → G` for a subgroup `Π`
/// of the transformation group of the universal cover `U`.
#[derive(Clone, Debug)]
pub struct CoveringClass {
    pub subgroup: Subgroup,
    pub cover: IntermediateCover,
    pub orbit: OrbitGroupoid,
    pub fold: usize,
    pub regular: bool,
}

/// How the choice of `r: U → H` affects the subgroup attached to the coset
/// covering of a subgroup `Λ` of the base vertex group.
#[derive(Clone, Debug)]
pub struct MarkingChoiceReport {
    pub vertex_subgroup: Subgroup,
    /// Lattice nodes reached by all choices of `r`.
    pub classes: BTreeSet<usize>,
    /// The node reached by the canonical choice (marked object to marked object).
    pub canonical: usize,
}

#[derive(Clone, Debug)]
pub struct GaloisLattice {
    pub base: Arc<FiniteGroupoid>,
    pub base_object: ObjId,
    pub universal: MarkedCovering,
    pub cov: CovGroup,
    /// Ordered by (subgroup order, elements).
    pub classes: Vec<CoveringClass>,
    /// `precedes[i][j]`: there is a covering `s` from node `j` to node `i`
    /// with `s ∘ r_j = r_i`.
    pub precedes: Vec<Vec<bool>>,
    /// Node of the pullback component of nodes `i` and `j`.
    pub meet: Vec<Vec<usize>>,
    /// Node of the pushout of nodes `i` and `j`.
    pub join: Vec<Vec<usize>>,
    pub marking_choices: Vec<MarkingChoiceReport>,
}

impl GaloisLattice {
    pub fn class_of(&self, subgroup: &Subgroup) -> Option<usize> {
        self.classes.iter().position(|c| &c.subgroup == subgroup)
    }

    /// Covering relations `Π_i ⊂ Π_j` of the subgroup lattice.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.classes.len();
        let sub = |i: usize, j: usize| {
            i != j && self.classes[i].subgroup.is_subset_of(&self.classes[j].subgroup)
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if sub(i, j) && !(0..n).any(|k| sub(i, k) && sub(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// The subgroup of the transformation group `cov` formed by transformations of
/// `U` over the intermediate cover.
pub fn transformation_subgroup(cov: &CovGroup, upper: &Covering) -> Result<Subgroup, CoverError> {
    let sub = covering_transformations_at(upper, cov.marked)?;
    let mut elems = Vec::with_capacity(sub.order());
    for h in &sub.transformations {
        let i = cov.element_of(h).ok_or_else(|| {
            CoverError::verification(
                "transformations over H are transformations over G",
                "a transformation over the intermediate cover is missing from Cov",
            )
        })?;
        elems.push(i);
    }
    elems.sort_unstable();
    cov.group
        .subgroup(&elems)
        .map_err(|e| CoverError::verification("Cov(U/H) is a subgroup", e.to_string()))
}

fn node(
    universal: &MarkedCovering,
    action: &crate::construct::GroupAction,
    subgroup: Subgroup,
) -> Result<CoveringClass, CoverError> {
    let orbit = orbit_groupoid(&action.restrict(&subgroup))?;
    let upper = orbit.covering()?;
    let induced = orbit.factor(universal.covering.morphism())?.ok_or_else(|| {
        CoverError::verification("U/Π maps to the base", "projection is not constant on orbits")
    })?;
    let lower = is_covering(induced)
        .map_err(|e| CoverError::verification("U/Π → G is a covering", e.to_string()))?;
    let fold = lower.fold()?;
    let regular = is_regular(&lower)?;
    Ok(CoveringClass {
        subgroup,
        cover: IntermediateCover {
            marked: upper.project_object(universal.marked),
            upper,
            lower,
        },
        orbit,
        fold,
        regular,
    })
}

pub fn build_lattice(base: Arc<FiniteGroupoid>, base_object: ObjId) -> Result<GaloisLattice, CoverError> {
    let pi = base.vertex_group(base_object)?;
    if !base.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let vertex_subgroups = pi.group.subgroups_bounded(DEFAULT_SUBGROUP_BOUND)?;
    let universal = universal_cover(base.clone(), base_object)?;
    let cov = covering_transformations_at(&universal.covering, universal.marked)?;
    let action = cov.action()?;
    let subgroups = cov.group.subgroups_bounded(DEFAULT_SUBGROUP_BOUND)?;
    let classes = subgroups
        .into_iter()
        .map(|s| node(&universal, &action, s))
        .collect::<Result<Vec<_>, _>>()?;
    let n = classes.len();
    let g = &cov.group;

    for (i, c) in classes.iter().enumerate() {
        if c.fold != g.index(&c.subgroup) {
            return Err(CoverError::verification(
                "fold equals subgroup index",
                format!("node {i}: fold {} vs index {}", c.fold, g.index(&c.subgroup)),
            ));
        }
        if c.regular != g.is_normal(&c.subgroup) {
            return Err(CoverError::verification(
                "regular iff normal",
                format!("node {i}: regular {} vs normal {}", c.regular, g.is_normal(&c.subgroup)),
            ));
        }
        if transformation_subgroup(&cov, &c.cover.upper)? != c.subgroup {
            return Err(CoverError::verification(
                "subgroup of the cover of a subgroup is that subgroup",
                format!("node {i}: Cov(U/(U/Π)) differs from Π"),
            ));
        }
        check_vertex_group(&cov, c, i)?;
    }

    // geometric order against reverse inclusion
    let mut precedes = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (ci, cj) = (&classes[i].cover, &classes[j].cover);
            let down = cj
                .lower
                .morphism()
                .with_endpoints(cj.lower.total().clone(), ci.lower.base().clone());
            if let Some(s) = ci.lower.lift_morphism(&down, cj.marked, ci.marked)? {
                is_covering(s.clone()).map_err(|e| {
                    CoverError::verification("comparison maps are coverings", e.to_string())
                })?;
                if !s.after(cj.upper.morphism())?.same_maps(ci.upper.morphism()) {
                    return Err(CoverError::verification(
                        "comparison maps commute with the universal cover",
                        format!("nodes {i}, {j}"),
                    ));
                }
                precedes[i][j] = true;
            }
            if precedes[i][j] != classes[j].subgroup.is_subset_of(&classes[i].subgroup) {
                return Err(CoverError::verification(
                    "lattice order reverses subgroup inclusion",
                    format!("nodes {i}, {j}: geometric {} vs inclusion", precedes[i][j]),
                ));
            }
        }
    }

    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&classes[i], &classes[j]);
            let m = meet_covering(&a.cover, &b.cover, universal.marked)?;
            let k = locate(
                &classes,
                &g.intersection(&a.subgroup, &b.subgroup),
                &m,
                "pullback component is the cover of the intersection",
            )?;
            if transformation_subgroup(&cov, &m.upper)? != classes[k].subgroup {
                return Err(CoverError::verification(
                    "Cov of the pullback component is Cov ∩ Cov",
                    format!("nodes {i}, {j}"),
                ));
            }
            meet[i][j] = k;
            let p = pushout_covering(&a.cover, &b.cover)?;
            let k = locate(
                &classes,
                &g.join(&a.subgroup, &b.subgroup),
                &p,
                "pushout is the cover of the generated subgroup",
            )?;
            if transformation_subgroup(&cov, &p.upper)? != classes[k].subgroup {
                return Err(CoverError::verification(
                    "Cov of the pushout is the join of Cov groups",
                    format!("nodes {i}, {j}"),
                ));
            }
            join[i][j] = k;
        }
    }

    // every coset covering of the base, with every choice of r
    let mut marking_choices = Vec::new();
    for lambda in vertex_subgroups {
        let h = covering_from_subgroup(base.clone(), base_object, &lambda)?;
        let mut reached = BTreeSet::new();
        let mut canonical = None;
        let over = h.covering.project_object(h.marked);
        for y in h.covering.total().objects().filter(|&y| h.covering.project_object(y) == over) {
            let r = h
                .covering
                .lift_morphism(universal.covering.morphism(), universal.marked, y)?
                .ok_or_else(|| {
                    CoverError::verification("the universal cover maps to every covering", "no lift")
                })?;
            let r = is_covering(r)
                .map_err(|e| CoverError::verification("maps between coverings are coverings", e.to_string()))?;
            let cand = IntermediateCover {
                upper: r,
                lower: h.covering.clone(),
                marked: y,
            };
            let k = locate(
                &classes,
                &transformation_subgroup(&cov, &cand.upper)?,
                &cand,
                "cover of the subgroup of a cover is that cover",
            )?;
            reached.insert(k);
            if y == h.marked {
                canonical = Some(k);
            }
        }
        marking_choices.push(MarkingChoiceReport {
            vertex_subgroup: lambda,
            classes: reached,
            canonical: canonical.expect("marked object is in its fiber"),
        });
    }

    Ok(GaloisLattice {
        base,
        base_object,
        universal,
        cov,
        classes,
        precedes,
        meet,
        join,
        marking_choices,
    })
}

fn locate(
    classes: &[CoveringClass],
    subgroup: &Subgroup,
    cover: &IntermediateCover,
    clause: &str,
) -> Result<usize, CoverError> {
    let k = classes
        .iter()
        .position(|c| &c.subgroup == subgroup)
        .ok_or_else(|| CoverError::verification(clause, "subgroup has no node"))?;
    let c = &classes[k].cover;
    if pointed_equivalence(&cover.lower, cover.marked, &c.lower, c.marked)?.is_none() {
        return Err(CoverError::verification(
            clause,
            format!("constructed covering is not equivalent to node {k}"),
        ));
    }
    Ok(k)
}

/// `π(U/Π, o(U0)) ≅ Π` via `o(a) ↦ θ` where `a: θ(U0) → U0`.
fn check_vertex_group(cov: &CovGroup, c: &CoveringClass, i: usize) -> Result<(), CoverError> {
    let q = &c.orbit.quotient;
    let vg = q.vertex_group(c.cover.marked)?;
    let pi_group = cov.group.subgroup_as_group(&c.subgroup);
    let total = cov.covering.total();
    let mut map = Vec::with_capacity(vg.group.order());
    for &l in &vg.arrows {
        let a = c.orbit.arrow_orbits[l.index()]
            .iter()
            .copied()
            .find(|&a| total.cod(a) == cov.marked)
            .ok_or_else(|| CoverError::verification("π(U/Π) ≅ Π", "loop has no lift ending at U0"))?;
        let theta = cov
            .element_sending_marked_to(total.dom(a))
            .and_then(|t| c.subgroup.elements().binary_search(&t).ok())
            .ok_or_else(|| CoverError::verification("π(U/Π) ≅ Π", "loop does not come from Π"))?;
        map.push(theta);
    }
    if !vg.group.is_isomorphism(&pi_group, &map) {
        return Err(CoverError::verification(
            "π(U/Π) ≅ Π",
            format!("node {i}: loop map is not an isomorphism"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::FiniteGroup;
    use crate::morphism::Over;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    /// Exhaustive oracle: any isomorphism of totals over the base.
    fn brute_equivalent(p: &Covering, q: &Covering) -> bool {
        let idb = GroupoidMorphism::identity(q.base().clone());
        let pm = p.morphism().with_endpoints(p.total().clone(), q.base().clone());
        let _ = idb;
        enumerate_morphisms(
            p.total(),
            q.total(),
            Some(Over {
                source_map: &pm,
                target_map: q.morphism(),
            }),
            100_000,
        )
        .unwrap()
        .iter()
        .any(GroupoidMorphism::is_isomorphism)
    }

    #[test]
    fn equivalence_matches_exhaustive_search() {
        for g in [fixtures::c4(), fixtures::s3()] {
            let g = arc(g);
            let pi = g.vertex_group(ObjId(0)).unwrap().group;
            let covers: Vec<Covering> = pi
                .subgroups()
                .unwrap()
                .iter()
                .map(|h| covering_from_subgroup(g.clone(), ObjId(0), h).unwrap().covering)
                .collect();
            for p in &covers {
                for q in &covers {
                    if p.total().object_count() > 8 {
                        continue;
                    }
                    let fast = equivalent_coverings(p, q, true).unwrap().is_some();
                    assert_eq!(fast, brute_equivalent(p, q));
                    if let Some(e) = equivalent_coverings(p, q, false).unwrap() {
                        assert!(q
                            .morphism()
                            .after(&e.total_map)
                            .unwrap()
                            .same_maps(&e.base_map.after(p.morphism()).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_subgroups_give_equivalent_coverings() {
        let s3 = arc(fixtures::s3());
        let g = FiniteGroup::symmetric(3);
        let twos: Vec<_> = g
            .subgroups()
            .unwrap()
            .into_iter()
            .filter(|h| h.order() == 2)
            .map(|h| covering_from_subgroup(s3.clone(), ObjId(0), &h).unwrap())
            .collect();
        for a in &twos {
            for b in &twos {
                assert!(equivalent_coverings(&a.covering, &b.covering, true)
                    .unwrap()
                    .is_some());
            }
        }
        // but not as pointed coverings
        assert!(pointed_equivalence(&twos[0].covering, twos[0].marked, &twos[1].covering, twos[1].marked)
            .unwrap()
            .is_none());
    }

    #[test]
    fn fold_distinguishes() {
        let c4 = arc(fixtures::c4());
        let z4 = FiniteGroup::cyclic(4);
        let two = covering_from_subgroup(c4.clone(), ObjId(0), &z4.subgroup(&[0, 2]).unwrap()).unwrap();
        let four = universal_cover(c4, ObjId(0)).unwrap();
        assert!(equivalent_coverings(&two.covering, &four.covering, true).unwrap().is_none());
        assert!(equivalent_coverings(&two.covering, &two.covering, true).unwrap().is_some());
    }

    #[test]
    fn pullbacks() {
        let c4 = arc(fixtures::c4());
        let u = universal_cover(c4.clone(), ObjId(0)).unwrap().covering;
        let pb = pullback_covering(&u, u.morphism()).unwrap();
        assert_eq!(pb.covering.total().components().len(), 4);
        let id = GroupoidMorphism::identity(c4.clone());
        let pb = pullback_covering(&u, &id).unwrap();
        assert!(pb.to_total.is_isomorphism());
        assert!(equivalent_coverings(&pb.covering, &u, true).unwrap().is_some());
    }

    #[test]
    fn lattice_shapes() {
        let t1 = build_lattice(arc(fixtures::t1()), ObjId(0)).unwrap();
        assert_eq!(t1.classes.len(), 1);
        let c4 = build_lattice(arc(fixtures::c4()), ObjId(0)).unwrap();
        let folds: Vec<_> = c4.classes.iter().map(|c| c.fold).collect();
        assert_eq!(folds, vec![4, 2, 1]);
        assert!(c4.classes.iter().all(|c| c.regular));
        assert_eq!(c4.hasse_edges(), vec![(0, 1), (1, 2)]);
        let s3 = build_lattice(arc(fixtures::s3()), ObjId(0)).unwrap();
        let mut folds: Vec<_> = s3.classes.iter().map(|c| c.fold).collect();
        folds.sort_unstable();
        assert_eq!(folds, vec![1, 2, 3, 3, 3, 6]);
        let nonregular: Vec<_> = s3.classes.iter().filter(|c| !c.regular).map(|c| c.subgroup.order()).collect();
        assert_eq!(nonregular, vec![2, 2, 2]);
        // pairwise pullbacks of the order-2 nodes are universal
        for i in 1..4 {
            for j in 1..4 {
                if i != j {
                    assert_eq!(s3.meet[i][j], 0);
                    assert_eq!(s3.join[i][j], 5);
                }
            }
        }
        // marking choices: non-normal vertex subgroups reach three nodes
        for r in &s3.marking_choices {
            let expected = if r.vertex_subgroup.order() == 2 { 3 } else { 1 };
            assert_eq!(r.classes.len(), expected);
        }
    }

    #[test]
    fn i2_lattice_is_trivial() {
        let l = build_lattice(arc(fixtures::i2()), ObjId(0)).unwrap();
        assert_eq!(l.classes.len(), 1);
        assert_eq!(l.classes[0].fold, 1);
    }

    #[test]
    fn mismatched_towers() {
        let c4 = build_lattice(arc(fixtures::c4()), ObjId(0)).unwrap();
        let s3 = build_lattice(arc(fixtures::s3()), ObjId(0)).unwrap();
        assert_eq!(
            pushout_covering(&c4.classes[0].cover, &s3.classes[0].cover).unwrap_err(),
            CoverError::UniversalMismatch
        );
    }
}
