//! Builders: coverings from subgroups, universal covers, group actions and
//! orbit groupoids.

use std::collections::HashMap;
use std::sync::Arc;

use crate::covering::{is_covering, Covering};
use crate::error::CoverError;
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::{arr, obj, ArrId, FiniteGroupoid, ObjId};
use crate::morphism::{same_groupoid, GroupoidMorphism};
use crate::transform::{covering_transformations, is_regular, CovGroup};

/// A covering with a distinguished object of the total groupoid.
#[derive(Clone, Debug)]
pub struct MarkedCovering {
    pub covering: Covering,
    pub marked: ObjId,
}

/// The covering whose objects are the right cosets `Γa` of arrows `a` into
/// `base_object`, with one arrow `Γ(a∘g) → Γa` over every base arrow `g` into
/// `dom(a)`. The coset of the identity is marked, and the pushforward of its
/// vertex group is exactly `subgroup`.
///
/// `subgroup` is a subgroup of `base.vertex_group(base_object).group`.
pub fn covering_from_subgroup(
    base: Arc<FiniteGroupoid>,
    base_object: ObjId,
    subgroup: &Subgroup,
) -> Result<MarkedCovering, CoverError> {
    if !base.contains_object(base_object) {
        return Err(crate::error::GroupoidError::UnknownObject(base_object).into());
    }
    if !base.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let vg = base.vertex_group(base_object)?;
    let loops: Vec<ArrId> = vg
        .group
        .subgroup(subgroup.elements())
        .map_err(|_| CoverError::NotASubgroup)?
        .elements()
        .iter()
        .map(|&g| vg.arrow_of(g))
        .collect();

    // cosets of arrows into the base object, ordered by least member
    let into = base.star_slice(base_object);
    let mut coset_of: HashMap<ArrId, usize> = HashMap::new();
    let mut reps: Vec<ArrId> = Vec::new();
    for &a in into {
        if coset_of.contains_key(&a) {
            continue;
        }
        let k = reps.len();
        reps.push(a);
        for &l in &loops {
            coset_of.insert(base.compose(l, a), k);
        }
    }
    let obj_base: Vec<ObjId> = reps.iter().map(|&a| base.dom(a)).collect();
    let mut offset = Vec::with_capacity(reps.len());
    let mut arrows = Vec::new();
    let mut arr_base = Vec::new();
    for (k, &rep) in reps.iter().enumerate() {
        offset.push(arrows.len());
        for &g in base.star_slice(obj_base[k]) {
            let dom = coset_of[&base.compose(rep, g)];
            arrows.push((
                format!("{}@[{}]", base.arrow_name(g), base.arrow_name(rep)),
                obj(dom),
                obj(k),
            ));
            arr_base.push(g);
        }
    }
    let names = reps
        .iter()
        .map(|&a| format!("[{}]", base.arrow_name(a)))
        .collect();
    let total = FiniteGroupoid::build(names, arrows, |f, h| {
        // f = (g over cod k), h = (g' over cod dom(f)); composite is (g∘g' into k)
        let gf = arr_base[f.index()];
        let gh = arr_base[h.index()];
        let k = (0..offset.len())
            .rev()
            .find(|&k| offset[k] <= f.index())
            .expect("offset");
        arr(offset[k] + base.star_position(base.compose(gf, gh)))
    })?;
    let total = Arc::new(total);
    let morphism = GroupoidMorphism::new(total.clone(), base.clone(), obj_base, arr_base)?;
    let covering = is_covering(morphism)
        .map_err(|e| CoverError::verification("coset construction is a covering", e.to_string()))?;
    let marked = obj(coset_of[&base.identity(base_object)]);
    Ok(MarkedCovering { covering, marked })
}

/// The covering of a connected groupoid with trivial vertex groups.
pub fn universal_cover(
    base: Arc<FiniteGroupoid>,
    base_object: ObjId,
) -> Result<MarkedCovering, CoverError> {
    let trivial = base.vertex_group(base_object)?.group.trivial();
    covering_from_subgroup(base, base_object, &trivial)
}

/// A group acting on a groupoid by automorphisms: the map of a product is the composite of the maps.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    space: Arc<FiniteGroupoid>,
    maps: Vec<GroupoidMorphism>,
}

impl GroupAction {
    /// Checks that every `maps[g]` is an automorphism of `space`, that the identity
    /// acts trivially and that composition matches the group law.
    pub fn new(
        group: FiniteGroup,
        space: Arc<FiniteGroupoid>,
        maps: Vec<GroupoidMorphism>,
    ) -> Result<Self, CoverError> {
        if maps.len() != group.order() {
            return Err(CoverError::NotAnAction(format!(
                "{} maps for a group of order {}",
                maps.len(),
                group.order()
            )));
        }
        for (g, m) in maps.iter().enumerate() {
            if !same_groupoid(m.source(), &space) || !same_groupoid(m.target(), &space) {
                return Err(CoverError::NotAnAction(format!(
                    "map of {} is not an endomorphism of the space",
                    group.label(g)
                )));
            }
            if !m.is_isomorphism() {
                return Err(CoverError::NotAnAction(format!(
                    "{} does not act by an automorphism",
                    group.label(g)
                )));
            }
        }
        if !maps[group.identity()].same_maps(&GroupoidMorphism::identity(space.clone())) {
            return Err(CoverError::NotAnAction("identity acts nontrivially".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = maps[a].after(&maps[b])?;
                if !ab.same_maps(&maps[group.mul(a, b)]) {
                    return Err(CoverError::NotAnAction(format!(
                        "({}{})_* differs from {}_* ∘ {}_*",
                        group.label(a),
                        group.label(b),
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        Ok(GroupAction { group, space, maps })
    }

    /// The action of the automorphism group generated by `generators`.
    pub fn generated_by(
        space: Arc<FiniteGroupoid>,
        generators: Vec<GroupoidMorphism>,
    ) -> Result<Self, CoverError> {
        let mut elems = vec![GroupoidMorphism::identity(space.clone())];
        let mut i = 0;
        while i < elems.len() {
            for g in &generators {
                let h = elems[i].after(g)?;
                if !elems.iter().any(|e| e.same_maps(&h)) {
                    elems.push(h);
                }
            }
            i += 1;
            if elems.len() > 10_000 {
                return Err(CoverError::BoundExceeded("generated automorphism group".into()));
            }
        }
        let labels = (0..elems.len()).map(|i| format!("g{i}")).collect();
        let group = FiniteGroup::from_fn(elems.len(), labels, |a, b| {
            let ab = elems[a].after(&elems[b]).expect("endomorphisms");
            elems.iter().position(|e| e.same_maps(&ab)).expect("closed")
        })?;
        Self::new(group, space, elems)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &Arc<FiniteGroupoid> {
        &self.space
    }

    pub fn map(&self, g: usize) -> &GroupoidMorphism {
        &self.maps[g]
    }

    pub fn act_object(&self, g: usize, x: ObjId) -> ObjId {
        self.maps[g].map_object(x)
    }

    pub fn act_arrow(&self, g: usize, a: ArrId) -> ArrId {
        self.maps[g].map_arrow(a)
    }

    /// The first non-identity element fixing an object, if any.
    pub fn fixed_point(&self) -> Option<(usize, ObjId)> {
        let e = self.group.identity();
        self.group.elements().filter(|&g| g != e).find_map(|g| {
            self.space
                .objects()
                .find(|&x| self.act_object(g, x) == x)
                .map(|x| (g, x))
        })
    }

    pub fn is_free(&self) -> bool {
        self.fixed_point().is_none()
    }

    /// The action restricted to a subgroup; element `i` of the new group is
    /// `sub.elements()[i]`.
    pub fn restrict(&self, sub: &Subgroup) -> GroupAction {
        GroupAction {
            group: self.group.subgroup_as_group(sub),
            space: self.space.clone(),
            maps: sub.elements().iter().map(|&g| self.maps[g].clone()).collect(),
        }
    }
}

/// The quotient of a groupoid by a free action, with the orbit morphism.
#[derive(Clone, Debug)]
pub struct OrbitGroupoid {
    pub quotient: Arc<FiniteGroupoid>,
    pub projection: GroupoidMorphism,
    /// Object orbits, each sorted; orbit `i` is quotient object `i`.
    pub object_orbits: Vec<Vec<ObjId>>,
    /// Arrow orbits, each sorted; orbit `i` is quotient arrow `i`.
    pub arrow_orbits: Vec<Vec<ArrId>>,
}

/// Orbits of a set `0..n` under `act`, ordered by least member, plus the orbit
/// index of every element.
fn orbits<F: Fn(usize, usize) -> usize>(
    n: usize,
    group_order: usize,
    act: F,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut index = vec![usize::MAX; n];
    let mut out = Vec::new();
    for x in 0..n {
        if index[x] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = (0..group_order).map(|g| act(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            index[y] = out.len();
        }
        out.push(orbit);
    }
    (out, index)
}

/// `G/Γ` for a free action: objects are object orbits, arrows are arrow orbits,
/// and `o(a)∘o(b) = o(t(a)∘b)` for the unique element `t` with `t(dom a) = cod b`.
pub fn orbit_groupoid(action: &GroupAction) -> Result<OrbitGroupoid, CoverError> {
    if let Some((element, object)) = action.fixed_point() {
        return Err(CoverError::NotFree { element, object });
    }
    let space = action.space();
    let n = action.group().order();
    let (obj_orbits, obj_index) = orbits(space.object_count(), n, |g, x| {
        action.act_object(g, obj(x)).index()
    });
    let (arr_orbits, arr_index) = orbits(space.arrow_count(), n, |g, a| {
        action.act_arrow(g, arr(a)).index()
    });
    // the unique element carrying one object to another in the same orbit
    let carrier = |from: ObjId, to: ObjId| -> usize {
        action
            .group()
            .elements()
            .find(|&g| action.act_object(g, from) == to)
            .expect("same orbit")
    };
    let arrows = arr_orbits
        .iter()
        .map(|orbit| {
            let rep = arr(orbit[0]);
            (
                format!("o({})", space.arrow_name(rep)),
                obj(obj_index[space.dom(rep).index()]),
                obj(obj_index[space.cod(rep).index()]),
            )
        })
        .collect();
    let names = obj_orbits
        .iter()
        .map(|o| format!("o({})", space.object_name(obj(o[0]))))
        .collect();
    let quotient = FiniteGroupoid::build(names, arrows, |f, h| {
        let a = arr(arr_orbits[f.index()][0]);
        let b = arr(arr_orbits[h.index()][0]);
        let g = carrier(space.dom(a), space.cod(b));
        arr(arr_index[space.compose(action.act_arrow(g, a), b).index()])
    })?;
    let quotient = Arc::new(quotient);
    let projection = GroupoidMorphism::new(
        space.clone(),
        quotient.clone(),
        obj_index.iter().map(|&i| obj(i)).collect(),
        arr_index.iter().map(|&i| arr(i)).collect(),
    )?;
    Ok(OrbitGroupoid {
        quotient,
        projection,
        object_orbits: obj_orbits
            .into_iter()
            .map(|o| o.into_iter().map(obj).collect())
            .collect(),
        arrow_orbits: arr_orbits
            .into_iter()
            .map(|o| o.into_iter().map(arr).collect())
            .collect(),
    })
}

impl OrbitGroupoid {
    /// The orbit morphism as a covering projection.
    pub fn covering(&self) -> Result<Covering, CoverError> {
        is_covering(self.projection.clone()).map_err(|e| {
            CoverError::verification("orbit morphism of a free action is a covering", e.to_string())
        })
    }

    /// The unique `f*` with `f* ∘ p = f`, if `f` is constant on orbits.
    pub fn factor(&self, f: &GroupoidMorphism) -> Result<Option<GroupoidMorphism>, CoverError> {
        if !same_groupoid(f.source(), self.projection.source()) {
            return Err(CoverError::BaseMismatch);
        }
        let constant_on_orbits = self
            .object_orbits
            .iter()
            .all(|o| o.iter().all(|&x| f.map_object(x) == f.map_object(o[0])))
            && self
                .arrow_orbits
                .iter()
                .all(|o| o.iter().all(|&a| f.map_arrow(a) == f.map_arrow(o[0])));
        if !constant_on_orbits {
            return Ok(None);
        }
        let m = GroupoidMorphism::new(
            self.quotient.clone(),
            f.target().clone(),
            self.object_orbits.iter().map(|o| f.map_object(o[0])).collect(),
            self.arrow_orbits.iter().map(|o| f.map_arrow(o[0])).collect(),
        )?;
        Ok(Some(m))
    }
}

/// For a regular connected covering: the covering-transformation group, the
/// orbit groupoid `total/Cov`, and the comparison isomorphism `base → total/Cov` with
/// its composite with `p` equal to the orbit morphism.
#[derive(Clone, Debug)]
pub struct QuotientComparison {
    pub cov: CovGroup,
    pub orbit: OrbitGroupoid,
    pub comparison: GroupoidMorphism,
    pub orbit_covering: Covering,
}

pub fn quotient_comparison(p: &Covering) -> Result<QuotientComparison, CoverError> {
    if !p.is_connected() {
        return Err(CoverError::Disconnected);
    }
    if !is_regular(p)? {
        return Err(CoverError::NotRegular);
    }
    let cov = covering_transformations(p)?;
    let action = cov.action()?;
    let orbit = orbit_groupoid(&action)?;
    let orbit_covering = orbit.covering()?;
    let base = p.base();
    let total = p.total();
    // one total object over every base object
    let mut over = vec![None; base.object_count()];
    for x in total.objects() {
        over[p.project_object(x).index()].get_or_insert(x);
    }
    let over: Vec<ObjId> = over
        .into_iter()
        .map(|x| x.ok_or(CoverError::EmptyFiber(ObjId(0))))
        .collect::<Result<_, _>>()?;
    let q = &orbit.projection;
    let comparison = GroupoidMorphism::new(
        base.clone(),
        orbit.quotient.clone(),
        over.iter().map(|&x| q.map_object(x)).collect(),
        base.arrows()
            .map(|a| q.map_arrow(p.lift(a, over[base.cod(a).index()])))
            .collect(),
    )
    .map_err(|e| CoverError::verification("base ≅ total/Cov", e.to_string()))?;
    if !comparison.is_isomorphism() {
        return Err(CoverError::verification(
            "base ≅ total/Cov",
            "comparison map is not bijective",
        ));
    }
    if !comparison.after(p.morphism())?.same_maps(q) {
        return Err(CoverError::verification(
            "base ≅ total/Cov",
            "comparison after projection differs from the orbit morphism",
        ));
    }
    Ok(QuotientComparison {
        cov,
        orbit,
        comparison,
        orbit_covering,
    })
}
