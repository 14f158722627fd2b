//! Covering projections: morphisms that restrict to a bijection on every star.
//!
//! A [`Covering`] caches, for every object of the total groupoid, the inverse of
//! its star map, so lifting an arrow is a table lookup.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::CoverError;
use crate::group::Subgroup;
use crate::groupoid::{ArrId, FiniteGroupoid, ObjId, VertexGroup};
use crate::morphism::{same_groupoid, GroupoidMorphism};

#[derive(Clone, Debug)]
pub struct Covering {
    morphism: GroupoidMorphism,
    // lifts[x][k] is the arrow of star(x) over the k-th arrow of star(p x)
    lifts: Vec<Vec<ArrId>>,
}

/// Why a morphism fails to be a covering, at the first offending object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotCovering {
    pub object: ObjId,
    pub total_star: usize,
    pub base_star: usize,
    pub defect: StarDefect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarDefect {
    /// Two arrows of the star have the same image.
    NotInjective(ArrId, ArrId),
    /// An arrow of the base star has no preimage in the star.
    NotSurjective(ArrId),
}

impl fmt::Display for NotCovering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.defect {
            StarDefect::NotInjective(a, b) => format!("{a} and {b} have the same image"),
            StarDefect::NotSurjective(a) => format!("{a} of the base star is not hit"),
        };
        write!(
            f,
            "star map at {} is not a bijection (star sizes {} vs {}): {}",
            self.object, self.total_star, self.base_star, what
        )
    }
}

/// Tests the star-bijection condition object by object.
pub fn is_covering(f: GroupoidMorphism) -> Result<Covering, NotCovering> {
    let (total, base) = (f.source().clone(), f.target().clone());
    let mut lifts = Vec::with_capacity(total.object_count());
    for x in total.objects() {
        let px = f.map_object(x);
        let base_star = base.star_slice(px);
        let mut inverse = vec![None::<ArrId>; base_star.len()];
        let report = |defect| NotCovering {
            object: x,
            total_star: total.star_slice(x).len(),
            base_star: base_star.len(),
            defect,
        };
        for &a in total.star_slice(x) {
            let slot = &mut inverse[base.star_position(f.map_arrow(a))];
            if let Some(prev) = *slot {
                return Err(report(StarDefect::NotInjective(prev, a)));
            }
            *slot = Some(a);
        }
        let row = inverse
            .iter()
            .enumerate()
            .map(|(k, l)| l.ok_or_else(|| report(StarDefect::NotSurjective(base_star[k]))))
            .collect::<Result<Vec<_>, _>>()?;
        lifts.push(row);
    }
    Ok(Covering { morphism: f, lifts })
}

/// The objects of the total groupoid over one base object. Fibers of coverings
/// are discrete: the only arrow over an identity and into `x` is `1_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub over: ObjId,
    pub objects: Vec<ObjId>,
    pub arrows: Vec<ArrId>,
}

/// Transport between fibers along a base arrow `f: D → C`: the bijection
/// `fiber(C) → fiber(D)` sending `x` to the domain of the lift of `f` at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberTransport {
    pub arrow: ArrId,
    pub from: ObjId,
    pub to: ObjId,
    /// `(x, image of x)` for every `x` over `from`, sorted by `x`.
    pub object_map: Vec<(ObjId, ObjId)>,
}

impl FiberTransport {
    pub fn apply(&self, x: ObjId) -> Option<ObjId> {
        self.object_map
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.object_map[i].1)
    }
}

/// `p_*π(total, x)` as a subgroup of the base vertex group at `p x`.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub base_group: VertexGroup,
    pub subgroup: Subgroup,
}

/// The right action of `π(base, G)` on the objects of the fiber over `G`:
/// `x · g = dom(lift of g at x)`.
#[derive(Clone, Debug)]
pub struct MonodromyAction {
    pub base_object: ObjId,
    pub group: VertexGroup,
    pub carrier: Vec<ObjId>,
    table: Vec<usize>,
}

impl MonodromyAction {
    /// `carrier[i] · g` as an index into `carrier`.
    pub fn act(&self, i: usize, g: usize) -> usize {
        self.table[i * self.group.group.order() + g]
    }

    pub fn act_on(&self, x: ObjId, g: usize) -> Option<ObjId> {
        let i = self.carrier.binary_search(&x).ok()?;
        Some(self.carrier[self.act(i, g)])
    }

    pub fn orbit(&self, i: usize) -> BTreeSet<usize> {
        self.group.group.elements().map(|g| self.act(i, g)).collect()
    }

    pub fn stabilizer(&self, i: usize) -> Subgroup {
        let elems: Vec<usize> = self
            .group
            .group
            .elements()
            .filter(|&g| self.act(i, g) == i)
            .collect();
        self.group.group.subgroup(&elems).expect("stabilizers are subgroups")
    }

    pub fn is_transitive(&self) -> bool {
        self.carrier.is_empty() || self.orbit(0).len() == self.carrier.len()
    }

    pub fn is_free(&self) -> bool {
        (0..self.carrier.len()).all(|i| self.stabilizer(i).order() == 1)
    }
}

impl Covering {
    /// The identity covering of `g`.
    pub fn identity(g: Arc<FiniteGroupoid>) -> Covering {
        is_covering(GroupoidMorphism::identity(g)).expect("identity is a covering")
    }

    pub fn morphism(&self) -> &GroupoidMorphism {
        &self.morphism
    }

    pub fn into_morphism(self) -> GroupoidMorphism {
        self.morphism
    }

    pub fn total(&self) -> &Arc<FiniteGroupoid> {
        self.morphism.source()
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        self.morphism.target()
    }

    #[inline]
    pub fn project_object(&self, x: ObjId) -> ObjId {
        self.morphism.map_object(x)
    }

    #[inline]
    pub fn project_arrow(&self, a: ArrId) -> ArrId {
        self.morphism.map_arrow(a)
    }

    /// Lift without precondition checks; `cod(a)` must equal `p(at)`.
    #[inline]
    pub(crate) fn lift(&self, a: ArrId, at: ObjId) -> ArrId {
        debug_assert_eq!(self.base().cod(a), self.project_object(at));
        self.lifts[at.index()][self.base().star_position(a)]
    }

    /// The unique arrow into `at` over `a`.
    pub fn lift_arrow(&self, a: ArrId, at: ObjId) -> Result<ArrId, CoverError> {
        if !self.total().contains_object(at) {
            return Err(crate::error::GroupoidError::UnknownObject(at).into());
        }
        if !self.base().contains_arrow(a) {
            return Err(crate::error::GroupoidError::UnknownArrow(a).into());
        }
        if self.base().cod(a) != self.project_object(at) {
            return Err(CoverError::SeedMismatch(format!(
                "{at} lies over {} but {a} ends at {}",
                self.project_object(at),
                self.base().cod(a)
            )));
        }
        Ok(self.lift(a, at))
    }

    pub fn fiber(&self, over: ObjId) -> Result<Fiber, CoverError> {
        if !self.base().contains_object(over) {
            return Err(crate::error::GroupoidError::UnknownObject(over).into());
        }
        let total = self.total();
        let objects: Vec<ObjId> = total
            .objects()
            .filter(|&x| self.project_object(x) == over)
            .collect();
        let e = self.base().identity(over);
        let arrows = total
            .arrows()
            .filter(|&a| self.project_arrow(a) == e)
            .collect();
        Ok(Fiber {
            over,
            objects,
            arrows,
        })
    }

    /// The fiber over `over` as a groupoid, with its embedding.
    pub fn fiber_groupoid(&self, over: ObjId) -> Result<crate::groupoid::Subgroupoid, CoverError> {
        let fiber = self.fiber(over)?;
        let e = self.base().identity(over);
        Ok(self
            .total()
            .subgroupoid(&fiber.objects, |a| self.project_arrow(a) == e))
    }

    pub fn fiber_transport(&self, f: ArrId) -> Result<FiberTransport, CoverError> {
        let base = self.base();
        if !base.contains_arrow(f) {
            return Err(crate::error::GroupoidError::UnknownArrow(f).into());
        }
        let (d, c) = (base.dom(f), base.cod(f));
        let object_map = self
            .fiber(c)?
            .objects
            .into_iter()
            .map(|x| (x, self.total().dom(self.lift(f, x))))
            .collect();
        Ok(FiberTransport {
            arrow: f,
            from: c,
            to: d,
            object_map,
        })
    }

    /// The image of the loop group at `x` in the base vertex group at `p x`.
    /// Injectivity of the induced map is checked, not assumed.
    pub fn pushforward_vertex(&self, x: ObjId) -> Result<Pushforward, CoverError> {
        let total = self.total();
        if !total.contains_object(x) {
            return Err(crate::error::GroupoidError::UnknownObject(x).into());
        }
        let base_group = self.base().vertex_group(self.project_object(x))?;
        let mut seen: Vec<Option<ArrId>> = vec![None; base_group.group.order()];
        for a in total.hom(x, x) {
            let g = base_group
                .element_of(self.project_arrow(a))
                .expect("loops project to loops");
            if let Some(prev) = seen[g] {
                return Err(CoverError::PushforwardNotInjective {
                    object: x,
                    first: prev,
                    second: a,
                });
            }
            seen[g] = Some(a);
        }
        let elems: Vec<usize> = (0..seen.len()).filter(|&g| seen[g].is_some()).collect();
        let subgroup = base_group.group.subgroup(&elems)?;
        Ok(Pushforward {
            base_group,
            subgroup,
        })
    }

    /// The unique `f̃` with `p ∘ f̃ = f` and `f̃(seed) = at`, or `None` if it does
    /// not exist. Images are propagated along stars from the seed.
    pub fn lift_morphism(
        &self,
        f: &GroupoidMorphism,
        seed: ObjId,
        at: ObjId,
    ) -> Result<Option<GroupoidMorphism>, CoverError> {
        if !same_groupoid(f.target(), self.base()) {
            return Err(CoverError::BaseMismatch);
        }
        let src = f.source();
        if !src.contains_object(seed) {
            return Err(crate::error::GroupoidError::UnknownObject(seed).into());
        }
        if !self.total().contains_object(at) {
            return Err(crate::error::GroupoidError::UnknownObject(at).into());
        }
        if !src.is_connected() {
            return Err(CoverError::Disconnected);
        }
        if f.map_object(seed) != self.project_object(at) {
            return Err(CoverError::SeedMismatch(format!(
                "f({seed}) = {} but p({at}) = {}",
                f.map_object(seed),
                self.project_object(at)
            )));
        }
        Ok(self.propagate_lift(f, seed, at))
    }

    pub(crate) fn propagate_lift(
        &self,
        f: &GroupoidMorphism,
        seed: ObjId,
        at: ObjId,
    ) -> Option<GroupoidMorphism> {
        let src = f.source();
        let total = self.total();
        let mut obj_img: Vec<Option<ObjId>> = vec![None; src.object_count()];
        let mut arr_img: Vec<Option<ArrId>> = vec![None; src.arrow_count()];
        obj_img[seed.index()] = Some(at);
        let mut queue = vec![seed];
        while let Some(x) = queue.pop() {
            let xt = obj_img[x.index()].expect("visited");
            for &a in src.star_slice(x) {
                let l = self.lift(f.map_arrow(a), xt);
                arr_img[a.index()] = Some(l);
                let y = src.dom(a);
                match obj_img[y.index()] {
                    None => {
                        obj_img[y.index()] = Some(total.dom(l));
                        queue.push(y);
                    }
                    Some(prev) if prev != total.dom(l) => return None,
                    Some(_) => {}
                }
            }
        }
        let lifted = GroupoidMorphism::new(
            src.clone(),
            total.clone(),
            obj_img.into_iter().map(Option::unwrap).collect(),
            arr_img.into_iter().map(Option::unwrap).collect(),
        )
        .ok()?;
        Some(lifted)
    }

    pub fn monodromy(&self, over: ObjId) -> Result<MonodromyAction, CoverError> {
        let fiber = self.fiber(over)?;
        if fiber.objects.is_empty() {
            return Err(CoverError::EmptyFiber(over));
        }
        let group = self.base().vertex_group(over)?;
        let n = group.group.order();
        let mut table = Vec::with_capacity(fiber.objects.len() * n);
        for &x in &fiber.objects {
            for g in 0..n {
                let y = self.total().dom(self.lift(group.arrow_of(g), x));
                table.push(fiber.objects.binary_search(&y).expect("stays in fiber"));
            }
        }
        Ok(MonodromyAction {
            base_object: over,
            group,
            carrier: fiber.objects,
            table,
        })
    }

    /// Number of objects in each fiber. The base must be connected and nonempty
    /// and the fibers nonempty.
    pub fn fold(&self) -> Result<usize, CoverError> {
        let base = self.base();
        if base.is_empty() {
            return Err(CoverError::Disconnected);
        }
        if !base.is_connected() {
            return Err(CoverError::Disconnected);
        }
        let mut counts = vec![0usize; base.object_count()];
        for x in self.total().objects() {
            counts[self.project_object(x).index()] += 1;
        }
        if counts[0] == 0 {
            return Err(CoverError::EmptyFiber(ObjId(0)));
        }
        if let Some(i) = counts.iter().position(|&c| c != counts[0]) {
            return Err(CoverError::verification(
                "fibers over a connected base have one size",
                format!("fiber sizes {} and {} differ", counts[0], counts[i]),
            ));
        }
        Ok(counts[0])
    }

    pub fn is_connected(&self) -> bool {
        self.total().is_connected()
    }
}

/// A bijection on components together with isomorphisms on every vertex group.
pub fn is_weak_equivalence(f: &GroupoidMorphism) -> bool {
    let (s, t) = (f.source(), f.target());
    let t_index = t.component_index();
    let s_comps = s.components();
    let images: BTreeSet<usize> = s_comps
        .iter()
        .map(|c| t_index[f.map_object(c[0]).index()])
        .collect();
    if images.len() != s_comps.len() || images.len() != t.components().len() {
        return false;
    }
    s.objects().all(|x| {
        let vs = s.vertex_group(x).expect("object");
        let vt = t.vertex_group(f.map_object(x)).expect("object");
        vs.group.is_isomorphism(&vt.group, &f.vertex_map(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::covering_from_subgroup;
    use crate::fixtures;
    use crate::group::FiniteGroup;
    use crate::morphism::enumerate_morphisms;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    fn half_cover() -> Covering {
        let c4 = arc(fixtures::c4());
        let z4 = FiniteGroup::cyclic(4);
        let h = z4.subgroup(&[0, 2]).unwrap();
        covering_from_subgroup(c4, ObjId(0), &h).unwrap().covering
    }

    fn universal_c4() -> Covering {
        let c4 = arc(fixtures::c4());
        let z4 = FiniteGroup::cyclic(4);
        covering_from_subgroup(c4, ObjId(0), &z4.trivial())
            .unwrap()
            .covering
    }

    fn fold_map(g: &Arc<FiniteGroupoid>) -> GroupoidMorphism {
        let gg = arc(g.disjoint_union(g));
        let n_o = g.object_count();
        let n_a = g.arrow_count();
        GroupoidMorphism::new(
            gg.clone(),
            g.clone(),
            gg.objects().map(|x| ObjId((x.index() % n_o) as u32)).collect(),
            gg.arrows().map(|a| ArrId((a.index() % n_a) as u32)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_fold_are_coverings() {
        for (_, g) in fixtures::all() {
            let g = arc(g);
            let id = Covering::identity(g.clone());
            assert_eq!(id.fold().unwrap(), 1);
            let omega = is_covering(fold_map(&g)).unwrap();
            assert_eq!(omega.fold().unwrap(), 2);
        }
    }

    #[test]
    fn collapse_of_i2_is_not_a_covering() {
        let i2 = arc(fixtures::i2());
        let t1 = arc(fixtures::t1());
        let collapse = GroupoidMorphism::constant(i2, t1, ObjId(0));
        let err = is_covering(collapse).unwrap_err();
        assert_eq!(err.object, ObjId(0));
        assert_eq!((err.total_star, err.base_star), (2, 1));
        assert!(matches!(err.defect, StarDefect::NotInjective(_, _)));
    }

    #[test]
    fn fibers() {
        let c4 = arc(fixtures::c4());
        let id = Covering::identity(c4.clone());
        let f = id.fiber(ObjId(0)).unwrap();
        assert_eq!(f.objects, vec![ObjId(0)]);
        assert_eq!(f.arrows, vec![ArrId(0)]);

        let omega = is_covering(fold_map(&c4)).unwrap();
        let f = omega.fiber(ObjId(0)).unwrap();
        assert_eq!(f.objects.len(), 2);
        assert_eq!(f.arrows.len(), 2);
        let fg = omega.fiber_groupoid(ObjId(0)).unwrap();
        for x in fg.groupoid.objects() {
            assert_eq!(fg.groupoid.vertex_group(x).unwrap().group.order(), 1);
        }

        assert_eq!(half_cover().fiber(ObjId(0)).unwrap().objects.len(), 2);
        assert!(id.fiber(ObjId(3)).is_err());
    }

    #[test]
    fn transport_is_contravariant_and_invertible() {
        let u = universal_c4();
        let base = u.base().clone();
        let id = u.fiber_transport(base.identity(ObjId(0))).unwrap();
        assert!(id.object_map.iter().all(|(x, y)| x == y));
        let gen = u.fiber_transport(ArrId(1)).unwrap();
        // one 4-cycle
        let mut x = gen.object_map[0].0;
        let mut seen = BTreeSet::new();
        for _ in 0..4 {
            seen.insert(x);
            x = gen.apply(x).unwrap();
        }
        assert_eq!(seen.len(), 4);
        assert_eq!(x, gen.object_map[0].0);
        let inv = u.fiber_transport(ArrId(3)).unwrap();
        for &(x, y) in &gen.object_map {
            assert_eq!(inv.apply(y), Some(x));
        }
        // H_{fg} = H_g ∘ H_f
        for f in base.arrows() {
            for g in base.arrows() {
                let fg = u.fiber_transport(base.compose(f, g)).unwrap();
                let (hf, hg) = (u.fiber_transport(f).unwrap(), u.fiber_transport(g).unwrap());
                for &(x, y) in &fg.object_map {
                    assert_eq!(hg.apply(hf.apply(x).unwrap()), Some(y));
                }
            }
        }
    }

    #[test]
    fn lifting_arrows() {
        let u = universal_c4();
        for x in u.total().objects() {
            assert_eq!(u.lift_arrow(ArrId(0), x).unwrap(), u.total().identity(x));
        }
        // object k is the coset of element k; the generator lifts to k+1 -> k
        for k in 0..4u32 {
            let l = u.lift_arrow(ArrId(1), ObjId(k)).unwrap();
            assert_eq!(u.total().cod(l), ObjId(k));
            assert_eq!(u.total().dom(l), ObjId((k + 1) % 4));
        }
        let h = half_cover();
        for x in h.total().objects() {
            let l = h.lift_arrow(ArrId(2), x).unwrap();
            assert_eq!(h.total().dom(l), x);
        }
        let i2 = arc(fixtures::i2());
        let id = Covering::identity(i2.clone());
        let a = i2.arrow_by_name("a").unwrap();
        let y = i2.object_by_name("y").unwrap();
        assert!(matches!(id.lift_arrow(a, y), Err(CoverError::SeedMismatch(_))));
    }

    #[test]
    fn pushforwards() {
        let u = universal_c4();
        assert_eq!(u.pushforward_vertex(ObjId(0)).unwrap().subgroup.order(), 1);
        let c4 = arc(fixtures::c4());
        let id = Covering::identity(c4);
        assert_eq!(id.pushforward_vertex(ObjId(0)).unwrap().subgroup.order(), 4);
        let h = half_cover();
        for x in h.total().objects() {
            assert_eq!(h.pushforward_vertex(x).unwrap().subgroup.elements(), &[0, 2]);
        }
    }

    #[test]
    fn lifting_morphisms() {
        let u = universal_c4();
        let c4 = u.base().clone();
        let p = u.morphism().clone();
        let lifted = u.lift_morphism(&p, ObjId(2), ObjId(2)).unwrap().unwrap();
        assert!(lifted.same_maps(&GroupoidMorphism::identity(u.total().clone())));

        let t1 = arc(fixtures::t1());
        let point = GroupoidMorphism::constant(t1, c4.clone(), ObjId(0));
        for x in u.total().objects() {
            let l = u.lift_morphism(&point, ObjId(0), x).unwrap().unwrap();
            assert_eq!(l.map_object(ObjId(0)), x);
        }

        let h = half_cover();
        let id = GroupoidMorphism::identity(c4.clone());
        assert!(h.lift_morphism(&id, ObjId(0), ObjId(0)).unwrap().is_none());

        let two = arc(c4.disjoint_union(&c4));
        let from_two = GroupoidMorphism::new(
            two.clone(),
            c4.clone(),
            vec![ObjId(0), ObjId(0)],
            two.arrows().map(|a| ArrId((a.index() % 4) as u32)).collect(),
        )
        .unwrap();
        assert_eq!(
            u.lift_morphism(&from_two, ObjId(0), ObjId(0)).unwrap_err(),
            CoverError::Disconnected
        );
    }

    #[test]
    fn monodromy_actions() {
        let c4 = arc(fixtures::c4());
        let id = Covering::identity(c4.clone());
        let m = id.monodromy(ObjId(0)).unwrap();
        assert_eq!(m.carrier.len(), 1);
        assert_eq!(m.stabilizer(0).order(), 4);

        let u = universal_c4();
        let m = u.monodromy(ObjId(0)).unwrap();
        assert!(m.is_transitive());
        assert!(m.is_free());

        let h = half_cover();
        let m = h.monodromy(ObjId(0)).unwrap();
        assert_eq!(m.orbit(0).len(), 2);
        assert_eq!(m.stabilizer(0).elements(), &[0, 2]);

        // right action law: (x f) g = x (f g)
        for cov in [u, h] {
            let m = cov.monodromy(ObjId(0)).unwrap();
            let g = &m.group.group;
            for i in 0..m.carrier.len() {
                assert_eq!(m.act(i, g.identity()), i);
                for a in g.elements() {
                    for b in g.elements() {
                        assert_eq!(m.act(m.act(i, a), b), m.act(i, g.mul(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn folds_match_indices() {
        let h = half_cover();
        let pf = h.pushforward_vertex(ObjId(0)).unwrap();
        assert_eq!(h.fold().unwrap(), pf.base_group.group.index(&pf.subgroup));
        assert_eq!(h.fold().unwrap(), 2);
    }

    #[test]
    fn weak_equivalences() {
        let c4 = arc(fixtures::c4());
        assert!(is_weak_equivalence(&GroupoidMorphism::identity(c4.clone())));
        let u = universal_c4();
        assert!(!is_weak_equivalence(u.morphism()));
        let t1 = arc(fixtures::t1());
        let i2 = arc(fixtures::i2());
        let incl = GroupoidMorphism::new(t1, i2, vec![ObjId(0)], vec![ArrId(0)]).unwrap();
        assert!(is_weak_equivalence(&incl));
    }

    #[test]
    fn weak_equivalence_and_covering_iff_isomorphism() {
        for (_, g) in fixtures::all() {
            let g = arc(g);
            for (_, h) in fixtures::all() {
                let h = arc(h);
                for m in enumerate_morphisms(&g, &h, None, 1000).unwrap() {
                    let both = is_weak_equivalence(&m) && is_covering(m.clone()).is_ok();
                    assert_eq!(both, m.is_isomorphism());
                }
            }
        }
    }

    #[test]
    fn connected_coverings_are_epi() {
        // s ∘ p = t ∘ p implies s = t, over all morphisms into small targets
        let c4 = arc(fixtures::c4());
        let z4 = FiniteGroup::cyclic(4);
        for h in z4.subgroups().unwrap() {
            let p = covering_from_subgroup(c4.clone(), ObjId(0), &h).unwrap().covering;
            for (_, k) in fixtures::all() {
                let k = arc(k);
                let homs = enumerate_morphisms(&c4, &k, None, 1000).unwrap();
                for s in &homs {
                    for t in &homs {
                        let sp = s.after(p.morphism()).unwrap();
                        let tp = t.after(p.morphism()).unwrap();
                        assert_eq!(sp.same_maps(&tp), s.same_maps(t));
                    }
                }
            }
        }
    }

    #[test]
    fn maps_between_coverings_are_coverings() {
        // universal → half → base: the middle map is a covering
        let u = universal_c4();
        let h = half_cover();
        let lift = h
            .lift_morphism(u.morphism(), ObjId(0), ObjId(0))
            .unwrap()
            .unwrap();
        assert!(is_covering(lift).is_ok());
    }
}
