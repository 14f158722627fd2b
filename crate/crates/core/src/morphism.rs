//! Groupoid morphisms, fibered products and exhaustive morphism search.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{CoverError, MorphismError};
use crate::groupoid::{arr, obj, ArrId, FiniteGroupoid, ObjId};

/// A functor between finite groupoids, stored as object and arrow maps.
#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    obj_map: Vec<ObjId>,
    arr_map: Vec<ArrId>,
}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GroupoidMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.arr_map == other.arr_map
            && same_groupoid(&self.source, &other.source)
            && same_groupoid(&self.target, &other.target)
    }
}

impl Eq for GroupoidMorphism {}

impl GroupoidMorphism {
    /// Checks functoriality and builds the morphism.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrId>,
    ) -> Result<Self, MorphismError> {
        let m = GroupoidMorphism {
            source,
            target,
            obj_map,
            arr_map,
        };
        m.check_functorial()?;
        Ok(m)
    }

    /// Builds without checks; callers guarantee functoriality.
    pub(crate) fn new_unchecked(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrId>,
    ) -> Self {
        let m = GroupoidMorphism {
            source,
            target,
            obj_map,
            arr_map,
        };
        debug_assert_eq!(m.check_functorial(), Ok(()));
        m
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let obj_map = g.objects().collect();
        let arr_map = g.arrows().collect();
        GroupoidMorphism {
            source: g.clone(),
            target: g,
            obj_map,
            arr_map,
        }
    }

    /// The morphism sending everything to the single object of `target`
    /// (which must have trivial vertex group) or, generally, to `x` and its identity.
    pub fn constant(source: Arc<FiniteGroupoid>, target: Arc<FiniteGroupoid>, x: ObjId) -> Self {
        let e = target.identity(x);
        let obj_map = vec![x; source.object_count()];
        let arr_map = vec![e; source.arrow_count()];
        GroupoidMorphism {
            source,
            target,
            obj_map,
            arr_map,
        }
    }

    pub fn check_functorial(&self) -> Result<(), MorphismError> {
        let (s, t) = (&*self.source, &*self.target);
        if self.obj_map.len() != s.object_count() {
            return Err(MorphismError::ObjectMapSize {
                expected: s.object_count(),
                got: self.obj_map.len(),
            });
        }
        if self.arr_map.len() != s.arrow_count() {
            return Err(MorphismError::ArrowMapSize {
                expected: s.arrow_count(),
                got: self.arr_map.len(),
            });
        }
        for x in s.objects() {
            if !t.contains_object(self.obj_map[x.index()]) {
                return Err(MorphismError::ObjectOutOfRange(x));
            }
        }
        for a in s.arrows() {
            let b = self.arr_map[a.index()];
            if !t.contains_arrow(b) {
                return Err(MorphismError::ArrowOutOfRange(a));
            }
            if t.dom(b) != self.map_object(s.dom(a)) || t.cod(b) != self.map_object(s.cod(a)) {
                return Err(MorphismError::Endpoints(a));
            }
        }
        for x in s.objects() {
            if self.map_arrow(s.identity(x)) != t.identity(self.map_object(x)) {
                return Err(MorphismError::Identity(x));
            }
        }
        for f in s.arrows() {
            for &h in s.star_slice(s.dom(f)) {
                if self.map_arrow(s.compose(f, h)) != t.compose(self.map_arrow(f), self.map_arrow(h))
                {
                    return Err(MorphismError::Composition { f, h });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    #[inline]
    pub fn map_object(&self, x: ObjId) -> ObjId {
        self.obj_map[x.index()]
    }

    #[inline]
    pub fn map_arrow(&self, a: ArrId) -> ArrId {
        self.arr_map[a.index()]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn arrow_map(&self) -> &[ArrId] {
        &self.arr_map
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupoidMorphism) -> Result<GroupoidMorphism, MorphismError> {
        if !same_groupoid(&first.target, &self.source) {
            return Err(MorphismError::NotComposable);
        }
        Ok(GroupoidMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            obj_map: first.obj_map.iter().map(|&x| self.map_object(x)).collect(),
            arr_map: first.arr_map.iter().map(|&a| self.map_arrow(a)).collect(),
        })
    }

    /// Equal maps, ignoring whether the endpoint groupoids are shared.
    pub fn same_maps(&self, other: &GroupoidMorphism) -> bool {
        self.obj_map == other.obj_map && self.arr_map == other.arr_map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen_o = vec![false; self.target.object_count()];
        let mut seen_a = vec![false; self.target.arrow_count()];
        self.obj_map
            .iter()
            .all(|x| !std::mem::replace(&mut seen_o[x.index()], true))
            && self
                .arr_map
                .iter()
                .all(|a| !std::mem::replace(&mut seen_a[a.index()], true))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.object_count() == self.target.object_count()
            && self.source.arrow_count() == self.target.arrow_count()
            && self.is_injective()
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GroupoidMorphism> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut obj_map = vec![ObjId(0); self.target.object_count()];
        for (i, x) in self.obj_map.iter().enumerate() {
            obj_map[x.index()] = obj(i);
        }
        let mut arr_map = vec![ArrId(0); self.target.arrow_count()];
        for (i, a) in self.arr_map.iter().enumerate() {
            arr_map[a.index()] = arr(i);
        }
        Some(GroupoidMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            obj_map,
            arr_map,
        })
    }

    /// The induced map `π(source, x) → π(target, f x)` on vertex-group elements.
    pub fn vertex_map(&self, x: ObjId) -> Vec<usize> {
        let vs = self.source.vertex_group(x).expect("object of source");
        let vt = self
            .target
            .vertex_group(self.map_object(x))
            .expect("object of target");
        vs.arrows
            .iter()
            .map(|&a| vt.element_of(self.map_arrow(a)).expect("loops go to loops"))
            .collect()
    }

    /// Replaces the endpoint groupoids with structurally equal ones.
    pub(crate) fn with_endpoints(
        &self,
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
    ) -> GroupoidMorphism {
        debug_assert!(*source == *self.source && *target == *self.target);
        GroupoidMorphism {
            source,
            target,
            obj_map: self.obj_map.clone(),
            arr_map: self.arr_map.clone(),
        }
    }
}

/// `A ×_G B` for `f: A → G`, `g: B → G`, with both projections.
#[derive(Clone, Debug)]
pub struct FiberedProduct {
    pub groupoid: Arc<FiniteGroupoid>,
    pub left: GroupoidMorphism,
    pub right: GroupoidMorphism,
}

/// The pullback of `f` and `g` in groupoids: pairs of objects and of arrows
/// agreeing over the common target, composed componentwise. Objects and arrows
/// are ordered lexicographically by `(left, right)` id.
pub fn fibered_product(
    f: &GroupoidMorphism,
    g: &GroupoidMorphism,
) -> Result<FiberedProduct, MorphismError> {
    if !same_groupoid(f.target(), g.target()) {
        return Err(MorphismError::NotComposable);
    }
    let (a, b) = (f.source(), g.source());
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.map_object(x) == g.map_object(y) {
                obj_index.insert((x, y), objects.len());
                objects.push((x, y));
            }
        }
    }
    // group right arrows by image to avoid a quadratic scan
    let mut by_image: HashMap<ArrId, Vec<ArrId>> = HashMap::new();
    for beta in b.arrows() {
        by_image.entry(g.map_arrow(beta)).or_default().push(beta);
    }
    let mut arrows = Vec::new();
    let mut arr_index = HashMap::new();
    for alpha in a.arrows() {
        if let Some(betas) = by_image.get(&f.map_arrow(alpha)) {
            for &beta in betas {
                arr_index.insert((alpha, beta), arrows.len());
                arrows.push((alpha, beta));
            }
        }
    }
    let groupoid = FiniteGroupoid::build(
        objects
            .iter()
            .map(|&(x, y)| format!("({},{})", a.object_name(x), b.object_name(y)))
            .collect(),
        arrows
            .iter()
            .map(|&(alpha, beta)| {
                (
                    format!("({},{})", a.arrow_name(alpha), b.arrow_name(beta)),
                    obj(obj_index[&(a.dom(alpha), b.dom(beta))]),
                    obj(obj_index[&(a.cod(alpha), b.cod(beta))]),
                )
            })
            .collect(),
        |p, q| {
            let (a1, b1) = arrows[p.index()];
            let (a2, b2) = arrows[q.index()];
            arr(arr_index[&(a.compose(a1, a2), b.compose(b1, b2))])
        },
    )
    .expect("fibered product of groupoids");
    let groupoid = Arc::new(groupoid);
    let left = GroupoidMorphism::new_unchecked(
        groupoid.clone(),
        a.clone(),
        objects.iter().map(|p| p.0).collect(),
        arrows.iter().map(|p| p.0).collect(),
    );
    let right = GroupoidMorphism::new_unchecked(
        groupoid.clone(),
        b.clone(),
        objects.iter().map(|p| p.1).collect(),
        arrows.iter().map(|p| p.1).collect(),
    );
    Ok(FiberedProduct {
        groupoid,
        left,
        right,
    })
}

/// Restricts every morphism search to morphisms `m` with `over_target ∘ m = over_source`.
#[derive(Clone, Copy)]
pub struct Over<'a> {
    pub source_map: &'a GroupoidMorphism,
    pub target_map: &'a GroupoidMorphism,
}

/// Every groupoid morphism `source → target` (optionally over a common base),
/// found by backtracking over arrow images with propagation through
/// composition and inverses. Fails once more than `limit` morphisms are found.
///
/// This search does not use any covering structure, so it can serve as an
/// independent check of lifting-based constructions.
pub fn enumerate_morphisms(
    source: &Arc<FiniteGroupoid>,
    target: &Arc<FiniteGroupoid>,
    over: Option<Over<'_>>,
    limit: usize,
) -> Result<Vec<GroupoidMorphism>, CoverError> {
    let search = Search {
        s: source,
        t: target,
        over,
        costars: {
            let mut c = vec![Vec::new(); source.object_count()];
            for a in source.arrows() {
                c[source.dom(a).index()].push(a);
            }
            c
        },
    };
    let state = State {
        obj: vec![None; source.object_count()],
        arr: vec![None; source.arrow_count()],
    };
    let mut out = Vec::new();
    search.run(state, &mut out, limit)?;
    Ok(out
        .into_iter()
        .map(|(o, a)| GroupoidMorphism::new_unchecked(source.clone(), target.clone(), o, a))
        .collect())
}

#[derive(Clone)]
struct State {
    obj: Vec<Option<ObjId>>,
    arr: Vec<Option<ArrId>>,
}

struct Search<'a> {
    s: &'a FiniteGroupoid,
    t: &'a FiniteGroupoid,
    over: Option<Over<'a>>,
    costars: Vec<Vec<ArrId>>,
}

impl Search<'_> {
    fn run(
        &self,
        state: State,
        out: &mut Vec<(Vec<ObjId>, Vec<ArrId>)>,
        limit: usize,
    ) -> Result<(), CoverError> {
        // choose the unassigned arrow with the most assigned endpoints
        let next = self
            .s
            .arrows()
            .filter(|a| state.arr[a.index()].is_none())
            .max_by_key(|&a| {
                let d = state.obj[self.s.dom(a).index()].is_some() as u8;
                let c = state.obj[self.s.cod(a).index()].is_some() as u8;
                (d + c, std::cmp::Reverse(a))
            });
        let Some(a) = next else {
            if out.len() >= limit {
                return Err(CoverError::BoundExceeded(format!(
                    "more than {limit} morphisms"
                )));
            }
            out.push((
                state.obj.iter().map(|x| x.unwrap()).collect(),
                state.arr.iter().map(|x| x.unwrap()).collect(),
            ));
            return Ok(());
        };
        for cand in self.t.arrows() {
            if !self.compatible(&state, a, cand) {
                continue;
            }
            let mut next_state = state.clone();
            if self.assign(&mut next_state, a, cand) {
                self.run(next_state, out, limit)?;
            }
        }
        Ok(())
    }

    fn compatible(&self, st: &State, a: ArrId, t: ArrId) -> bool {
        let (s, tg) = (self.s, self.t);
        if let Some(o) = st.obj[s.dom(a).index()] {
            if tg.dom(t) != o {
                return false;
            }
        }
        if let Some(o) = st.obj[s.cod(a).index()] {
            if tg.cod(t) != o {
                return false;
            }
        }
        if s.dom(a) == s.cod(a) && tg.dom(t) != tg.cod(t) {
            return false;
        }
        if s.is_identity(a) && !tg.is_identity(t) {
            return false;
        }
        if let Some(ov) = self.over {
            if ov.target_map.map_arrow(t) != ov.source_map.map_arrow(a) {
                return false;
            }
        }
        true
    }

    fn assign(&self, st: &mut State, a: ArrId, t: ArrId) -> bool {
        let (s, tg) = (self.s, self.t);
        let mut work = vec![(a, t)];
        while let Some((a, t)) = work.pop() {
            if let Some(u) = st.arr[a.index()] {
                if u != t {
                    return false;
                }
                continue;
            }
            if !self.compatible(st, a, t) {
                return false;
            }
            st.arr[a.index()] = Some(t);
            for (x, y) in [(s.dom(a), tg.dom(t)), (s.cod(a), tg.cod(t))] {
                if st.obj[x.index()].is_none() {
                    st.obj[x.index()] = Some(y);
                    work.push((s.identity(x), tg.identity(y)));
                }
            }
            work.push((s.inverse(a), tg.inverse(t)));
            for &b in s.star_slice(s.dom(a)) {
                if let Some(u) = st.arr[b.index()] {
                    work.push((s.compose(a, b), tg.compose(t, u)));
                }
            }
            for &c in &self.costars[s.cod(a).index()] {
                if let Some(u) = st.arr[c.index()] {
                    work.push((s.compose(c, a), tg.compose(u, t)));
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::FiniteGroup;

    #[test]
    fn endomorphisms_of_c4_are_the_four_group_endomorphisms() {
        let c4 = Arc::new(fixtures::c4());
        let all = enumerate_morphisms(&c4, &c4, None, 100).unwrap();
        // Hom(Z4, Z4) has 4 elements (image of the generator)
        assert_eq!(all.len(), 4);
        for m in &all {
            m.check_functorial().unwrap();
        }
    }

    #[test]
    fn automorphisms_of_s3_groupoid() {
        let s3 = Arc::new(fixtures::s3());
        let autos: Vec<_> = enumerate_morphisms(&s3, &s3, None, 1000)
            .unwrap()
            .into_iter()
            .filter(GroupoidMorphism::is_isomorphism)
            .collect();
        assert_eq!(autos.len(), 6);
    }

    #[test]
    fn morphisms_from_i2() {
        let i2 = Arc::new(fixtures::i2());
        let c4 = Arc::new(fixtures::c4());
        // both objects go to the single object; the arrow y -> x can go anywhere
        assert_eq!(enumerate_morphisms(&i2, &c4, None, 100).unwrap().len(), 4);
        // into I2 itself: object maps (4) and then arrows forced
        assert_eq!(enumerate_morphisms(&i2, &i2, None, 100).unwrap().len(), 4);
    }

    #[test]
    fn functoriality_is_checked() {
        let c4 = Arc::new(fixtures::c4());
        let bad = GroupoidMorphism::new(
            c4.clone(),
            c4.clone(),
            vec![ObjId(0)],
            vec![ArrId(0), ArrId(2), ArrId(0), ArrId(0)],
        );
        assert!(matches!(bad, Err(MorphismError::Composition { .. })));
        let z2 = Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "*"));
        let ok = GroupoidMorphism::new(
            c4,
            z2,
            vec![ObjId(0)],
            vec![ArrId(0), ArrId(1), ArrId(0), ArrId(1)],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn fibered_product_sizes() {
        let c4 = Arc::new(fixtures::c4());
        let id = GroupoidMorphism::identity(c4.clone());
        let fp = fibered_product(&id, &id).unwrap();
        assert_eq!(fp.groupoid.object_count(), 1);
        assert_eq!(fp.groupoid.arrow_count(), 4);
        assert!(fp.groupoid.validate().is_valid());
        fp.left.check_functorial().unwrap();
    }

    #[test]
    fn inverse_of_isomorphism() {
        let s3 = Arc::new(fixtures::s3());
        let op = Arc::new(s3.opposite());
        let g = FiniteGroup::symmetric(3);
        let iso = GroupoidMorphism::new(
            s3.clone(),
            op,
            vec![ObjId(0)],
            s3.arrows().map(|a| ArrId(g.inverse(a.index()) as u32)).collect(),
        )
        .unwrap();
        let inv = iso.inverse().unwrap();
        assert!(inv.after(&iso).unwrap().same_maps(&GroupoidMorphism::identity(s3)));
    }
}
