//! Finite groupoids stored extensionally.
//!
//! Composition is written `compose(f, h) = f ∘ h` and is defined exactly when
//! `cod(h) == dom(f)`; the result runs from `dom(h)` to `cod(f)`. The star of an
//! object is the set of arrows *into* it.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::GroupoidError;
use crate::group::FiniteGroup;

/// Dense object identifier, local to one groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

/// Dense arrow identifier, local to one groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrId(pub u32);

impl ObjId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for ArrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

pub(crate) fn obj(i: usize) -> ObjId {
    ObjId(i as u32)
}

pub(crate) fn arr(i: usize) -> ArrId {
    ArrId(i as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ArrowData {
    name: String,
    dom: ObjId,
    cod: ObjId,
}

/// A finite groupoid with a full composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    obj_names: Vec<String>,
    arrows: Vec<ArrowData>,
    identity: Vec<ArrId>,
    inverse: Vec<ArrId>,
    stars: Vec<Vec<ArrId>>,
    star_pos: Vec<u32>,
    // compose[f][star_pos[h]] for every h in star(dom f)
    compose: Vec<Vec<ArrId>>,
}

/// The arrows with codomain `at`, ordered by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub at: ObjId,
    pub arrows: Vec<ArrId>,
}

/// A violated law, with the offending ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Associativity { f: ArrId, g: ArrId, h: ArrId },
    LeftIdentity { object: ObjId, arrow: ArrId },
    RightIdentity { object: ObjId, arrow: ArrId },
    Inverse { arrow: ArrId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { f: a, g, h } => {
                write!(f, "associativity fails on ({a}, {g}, {h})")
            }
            Violation::LeftIdentity { object, arrow } => {
                write!(f, "identity of {object} is not left neutral for {arrow}")
            }
            Violation::RightIdentity { object, arrow } => {
                write!(f, "identity of {object} is not right neutral for {arrow}")
            }
            Violation::Inverse { arrow } => write!(f, "inverse law fails for {arrow}"),
        }
    }
}

/// Every violated category or groupoid law; empty iff the groupoid is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteGroupoid {
    /// Builds a groupoid from object names, arrows `(name, dom, cod)` and a
    /// composition function queried on every composable pair.
    ///
    /// Only the table's shape is checked here (ids in range, composites with the
    /// right endpoints, existence of identities and inverses). Use
    /// [`FiniteGroupoid::validate`] for the algebraic laws, or
    /// [`FiniteGroupoid::build_validated`] for both.
    pub fn build<F>(
        obj_names: Vec<String>,
        arrows: Vec<(String, ObjId, ObjId)>,
        mut compose: F,
    ) -> Result<Self, GroupoidError>
    where
        F: FnMut(ArrId, ArrId) -> ArrId,
    {
        let n_obj = obj_names.len();
        let mut data = Vec::with_capacity(arrows.len());
        for (i, (name, dom, cod)) in arrows.into_iter().enumerate() {
            if dom.index() >= n_obj || cod.index() >= n_obj {
                return Err(GroupoidError::UnknownEndpoint { arrow: arr(i) });
            }
            data.push(ArrowData { name, dom, cod });
        }
        let mut stars = vec![Vec::new(); n_obj];
        let mut star_pos = vec![0u32; data.len()];
        for (i, a) in data.iter().enumerate() {
            star_pos[i] = stars[a.cod.index()].len() as u32;
            stars[a.cod.index()].push(arr(i));
        }
        let mut table = Vec::with_capacity(data.len());
        for (fi, f) in data.iter().enumerate() {
            let row_star = &stars[f.dom.index()];
            let mut row = Vec::with_capacity(row_star.len());
            for &h in row_star {
                let c = compose(arr(fi), h);
                let ok = data
                    .get(c.index())
                    .map(|cd| cd.dom == data[h.index()].dom && cd.cod == f.cod)
                    .unwrap_or(false);
                if !ok {
                    return Err(GroupoidError::IllTypedComposite {
                        f: arr(fi),
                        h,
                        result: c,
                    });
                }
                row.push(c);
            }
            table.push(row);
        }
        let mut g = FiniteGroupoid {
            obj_names,
            arrows: data,
            identity: Vec::new(),
            inverse: Vec::new(),
            stars,
            star_pos,
            compose: table,
        };
        g.identity = (0..n_obj)
            .map(|x| {
                g.stars[x]
                    .iter()
                    .copied()
                    .find(|&e| g.dom(e) == obj(x) && g.compose(e, e) == e)
                    .ok_or(GroupoidError::MissingIdentity { object: obj(x) })
            })
            .collect::<Result<_, _>>()?;
        g.inverse = (0..g.arrows.len())
            .map(|a| {
                let a = arr(a);
                let (x, y) = (g.dom(a), g.cod(a));
                g.stars[x.index()]
                    .iter()
                    .copied()
                    .find(|&b| {
                        g.dom(b) == y
                            && g.compose(a, b) == g.identity(y)
                            && g.compose(b, a) == g.identity(x)
                    })
                    .ok_or(GroupoidError::NotInvertible { arrow: a })
            })
            .collect::<Result<_, _>>()?;
        Ok(g)
    }

    /// [`FiniteGroupoid::build`] followed by a full law check.
    pub fn build_validated<F>(
        obj_names: Vec<String>,
        arrows: Vec<(String, ObjId, ObjId)>,
        compose: F,
    ) -> Result<Self, GroupoidError>
    where
        F: FnMut(ArrId, ArrId) -> ArrId,
    {
        let g = Self::build(obj_names, arrows, compose)?;
        let report = g.validate();
        if report.is_valid() {
            Ok(g)
        } else {
            Err(GroupoidError::Invalid(report))
        }
    }

    /// The empty groupoid.
    pub fn empty() -> Self {
        Self::build(Vec::new(), Vec::new(), |_, _| unreachable!()).expect("empty groupoid")
    }

    /// The one-object groupoid whose loops are the elements of `group`.
    pub fn from_group(group: &FiniteGroup, object_name: &str) -> Self {
        let arrows = (0..group.order())
            .map(|i| (group.label(i).to_string(), ObjId(0), ObjId(0)))
            .collect();
        Self::build(vec![object_name.to_string()], arrows, |f, h| {
            arr(group.mul(f.index(), h.index()))
        })
        .expect("group tables give groupoids")
    }

    /// The codiscrete groupoid on the given objects: one arrow between every
    /// ordered pair. Arrow `(y → x)` has id `x * n + y`.
    pub fn codiscrete(names: Vec<String>) -> Self {
        let n = names.len();
        let mut arrows = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                arrows.push((format!("{}<-{}", names[x], names[y]), obj(y), obj(x)));
            }
        }
        Self::build(names, arrows, |f, h| {
            // f: y -> x, h: z -> y gives z -> x
            let x = f.index() / n;
            let z = h.index() % n;
            arr(x * n + z)
        })
        .expect("codiscrete groupoid")
    }

    pub fn object_count(&self) -> usize {
        self.obj_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = ObjId> + '_ {
        (0..self.obj_names.len()).map(obj)
    }

    pub fn arrows(&self) -> impl ExactSizeIterator<Item = ArrId> + '_ {
        (0..self.arrows.len()).map(arr)
    }

    pub fn is_empty(&self) -> bool {
        self.obj_names.is_empty()
    }

    pub fn contains_object(&self, x: ObjId) -> bool {
        x.index() < self.obj_names.len()
    }

    pub fn contains_arrow(&self, a: ArrId) -> bool {
        a.index() < self.arrows.len()
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.obj_names[x.index()]
    }

    pub fn arrow_name(&self, a: ArrId) -> &str {
        &self.arrows[a.index()].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.obj_names.iter().position(|n| n == name).map(obj)
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrId> {
        self.arrows.iter().position(|a| a.name == name).map(arr)
    }

    #[inline]
    pub fn dom(&self, a: ArrId) -> ObjId {
        self.arrows[a.index()].dom
    }

    #[inline]
    pub fn cod(&self, a: ArrId) -> ObjId {
        self.arrows[a.index()].cod
    }

    #[inline]
    pub fn identity(&self, x: ObjId) -> ArrId {
        self.identity[x.index()]
    }

    #[inline]
    pub fn inverse(&self, a: ArrId) -> ArrId {
        self.inverse[a.index()]
    }

    pub fn is_identity(&self, a: ArrId) -> bool {
        self.identity[self.cod(a).index()] == a
    }

    /// Position of `a` inside `star(cod(a))`.
    #[inline]
    pub fn star_position(&self, a: ArrId) -> usize {
        self.star_pos[a.index()] as usize
    }

    /// `f ∘ h`. Panics unless `cod(h) == dom(f)`.
    #[inline]
    pub fn compose(&self, f: ArrId, h: ArrId) -> ArrId {
        assert_eq!(
            self.cod(h),
            self.dom(f),
            "compose({f}, {h}) is not composable"
        );
        self.compose[f.index()][self.star_pos[h.index()] as usize]
    }

    /// `f ∘ h` when composable.
    pub fn try_compose(&self, f: ArrId, h: ArrId) -> Option<ArrId> {
        (self.cod(h) == self.dom(f)).then(|| self.compose(f, h))
    }

    /// Overwrites one entry of the composition table. Meant for building
    /// deliberately broken tables in tests; the result is generally invalid.
    #[doc(hidden)]
    pub fn corrupt_composite(&mut self, f: ArrId, h: ArrId, result: ArrId) {
        assert_eq!(self.cod(h), self.dom(f));
        assert_eq!(self.dom(result), self.dom(h));
        assert_eq!(self.cod(result), self.cod(f));
        let p = self.star_pos[h.index()] as usize;
        self.compose[f.index()][p] = result;
    }

    /// The arrows into `x`, ordered by id.
    pub fn star_slice(&self, x: ObjId) -> &[ArrId] {
        &self.stars[x.index()]
    }

    pub fn star(&self, x: ObjId) -> Result<Star, GroupoidError> {
        if !self.contains_object(x) {
            return Err(GroupoidError::UnknownObject(x));
        }
        Ok(Star {
            at: x,
            arrows: self.stars[x.index()].clone(),
        })
    }

    /// Arrows `x → y`.
    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = ArrId> + '_ {
        self.stars[y.index()]
            .iter()
            .copied()
            .filter(move |&a| self.dom(a) == x)
    }

    /// The smallest sieve on `x` containing `seeds`: closed under precomposition.
    pub fn sieve_generated_by(&self, x: ObjId, seeds: &[ArrId]) -> BTreeSet<ArrId> {
        let mut sieve: BTreeSet<ArrId> = BTreeSet::new();
        let mut stack: Vec<ArrId> = seeds.to_vec();
        while let Some(a) = stack.pop() {
            assert_eq!(self.cod(a), x, "sieve seeds must have codomain {x}");
            if !sieve.insert(a) {
                continue;
            }
            for &h in self.star_slice(self.dom(a)) {
                let c = self.compose(a, h);
                if !sieve.contains(&c) {
                    stack.push(c);
                }
            }
        }
        sieve
    }

    /// Checks every category and groupoid law.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for x in self.objects() {
            let e = self.identity(x);
            for &a in self.star_slice(x) {
                if self.compose(e, a) != a {
                    violations.push(Violation::LeftIdentity {
                        object: x,
                        arrow: a,
                    });
                }
            }
            for a in self.arrows().filter(|&a| self.dom(a) == x) {
                if self.compose(a, e) != a {
                    violations.push(Violation::RightIdentity {
                        object: x,
                        arrow: a,
                    });
                }
            }
        }
        for f in self.arrows() {
            for &g in self.star_slice(self.dom(f)) {
                let fg = self.compose(f, g);
                for &h in self.star_slice(self.dom(g)) {
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)) {
                        violations.push(Violation::Associativity { f, g, h });
                    }
                }
            }
        }
        for a in self.arrows() {
            let b = self.inverse(a);
            if self.dom(b) != self.cod(a)
                || self.cod(b) != self.dom(a)
                || self.compose(a, b) != self.identity(self.cod(a))
                || self.compose(b, a) != self.identity(self.dom(a))
            {
                violations.push(Violation::Inverse { arrow: a });
            }
        }
        ValidationReport { violations }
    }

    /// Connected components, each sorted, blocks ordered by least object.
    pub fn components(&self) -> Vec<Vec<ObjId>> {
        let n = self.object_count();
        let mut comp = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = vec![obj(start)];
            comp[start] = id;
            let mut i = 0;
            while i < block.len() {
                let x = block[i];
                i += 1;
                for &a in self.star_slice(x) {
                    let y = self.dom(a);
                    if comp[y.index()] == usize::MAX {
                        comp[y.index()] = id;
                        block.push(y);
                    }
                }
            }
            block.sort();
            blocks.push(block);
        }
        blocks
    }

    /// Index of the component of every object, consistent with [`Self::components`].
    pub fn component_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.object_count()];
        for (i, block) in self.components().iter().enumerate() {
            for x in block {
                idx[x.index()] = i;
            }
        }
        idx
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The group of loops at `x`.
    pub fn vertex_group(&self, x: ObjId) -> Result<VertexGroup, GroupoidError> {
        if !self.contains_object(x) {
            return Err(GroupoidError::UnknownObject(x));
        }
        let loops: Vec<ArrId> = self.hom(x, x).collect();
        let pos = |a: ArrId| loops.binary_search(&a).expect("loops closed");
        let n = loops.len();
        let mut table = Vec::with_capacity(n * n);
        for &f in &loops {
            for &h in &loops {
                table.push(pos(self.compose(f, h)));
            }
        }
        let labels = loops
            .iter()
            .map(|&a| self.arrow_name(a).to_string())
            .collect();
        let group = FiniteGroup::from_table(n, table, labels)
            .expect("loops of a valid groupoid form a group");
        Ok(VertexGroup {
            object: x,
            group,
            arrows: loops,
        })
    }

    /// Coproduct with the two injections (objects and arrows of `self` first).
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let no = self.object_count() as u32;
        let na = self.arrow_count() as u32;
        let mut names = self.obj_names.clone();
        names.extend(other.obj_names.iter().cloned());
        let mut arrows: Vec<(String, ObjId, ObjId)> = self
            .arrows
            .iter()
            .map(|a| (a.name.clone(), a.dom, a.cod))
            .collect();
        arrows.extend(
            other
                .arrows
                .iter()
                .map(|a| (a.name.clone(), ObjId(a.dom.0 + no), ObjId(a.cod.0 + no))),
        );
        FiniteGroupoid::build(names, arrows, |f, h| {
            if f.0 < na {
                self.compose(f, h)
            } else {
                let c = other.compose(ArrId(f.0 - na), ArrId(h.0 - na));
                ArrId(c.0 + na)
            }
        })
        .expect("disjoint union of groupoids")
    }

    /// Same objects and arrows with dom/cod swapped; `compose_op(f, h) = compose(h, f)`.
    pub fn opposite(&self) -> FiniteGroupoid {
        let arrows = self
            .arrows
            .iter()
            .map(|a| (a.name.clone(), a.cod, a.dom))
            .collect();
        FiniteGroupoid::build(self.obj_names.clone(), arrows, |f, h| self.compose(h, f))
            .expect("opposite of a groupoid")
    }

    /// The subgroupoid on `objects` containing the arrows selected by `keep`
    /// (which must be closed under composition, inverse and contain identities).
    /// Returns the subgroupoid together with the embeddings of objects and arrows.
    pub fn subgroupoid<P>(&self, objects: &[ObjId], mut keep: P) -> Subgroupoid
    where
        P: FnMut(ArrId) -> bool,
    {
        let mut obj_index = vec![u32::MAX; self.object_count()];
        for (i, &x) in objects.iter().enumerate() {
            obj_index[x.index()] = i as u32;
        }
        let arrows: Vec<ArrId> = self
            .arrows()
            .filter(|&a| {
                obj_index[self.dom(a).index()] != u32::MAX
                    && obj_index[self.cod(a).index()] != u32::MAX
                    && keep(a)
            })
            .collect();
        let mut arr_index = vec![u32::MAX; self.arrow_count()];
        for (i, &a) in arrows.iter().enumerate() {
            arr_index[a.index()] = i as u32;
        }
        let groupoid = FiniteGroupoid::build(
            objects
                .iter()
                .map(|&x| self.object_name(x).to_string())
                .collect(),
            arrows
                .iter()
                .map(|&a| {
                    (
                        self.arrow_name(a).to_string(),
                        ObjId(obj_index[self.dom(a).index()]),
                        ObjId(obj_index[self.cod(a).index()]),
                    )
                })
                .collect(),
            |f, h| {
                let c = self.compose(arrows[f.index()], arrows[h.index()]);
                ArrId(arr_index[c.index()])
            },
        )
        .expect("selected arrows form a subgroupoid");
        Subgroupoid {
            groupoid,
            objects: objects.to_vec(),
            arrows,
        }
    }

    /// The full subgroupoid on `objects`.
    pub fn full_subgroupoid(&self, objects: &[ObjId]) -> Subgroupoid {
        self.subgroupoid(objects, |_| true)
    }

    /// Same groupoid with every object and arrow renamed.
    pub fn renamed<FO, FA>(&self, mut obj_name: FO, mut arr_name: FA) -> FiniteGroupoid
    where
        FO: FnMut(ObjId) -> String,
        FA: FnMut(ArrId) -> String,
    {
        let mut g = self.clone();
        for x in 0..g.obj_names.len() {
            g.obj_names[x] = obj_name(obj(x));
        }
        for a in 0..g.arrows.len() {
            g.arrows[a].name = arr_name(arr(a));
        }
        g
    }
}

/// A subgroupoid together with where its objects and arrows came from.
#[derive(Clone, Debug)]
pub struct Subgroupoid {
    pub groupoid: FiniteGroupoid,
    /// `objects[i]` is the ambient object behind local object `i`.
    pub objects: Vec<ObjId>,
    /// `arrows[i]` is the ambient arrow behind local arrow `i`.
    pub arrows: Vec<ArrId>,
}

/// A vertex group π(G, x) with its embedding back into the arrows of G.
#[derive(Clone, Debug)]
pub struct VertexGroup {
    pub object: ObjId,
    pub group: FiniteGroup,
    /// Element `i` of `group` is the loop `arrows[i]`; sorted by id.
    pub arrows: Vec<ArrId>,
}

impl VertexGroup {
    pub fn element_of(&self, a: ArrId) -> Option<usize> {
        self.arrows.binary_search(&a).ok()
    }

    pub fn arrow_of(&self, element: usize) -> ArrId {
        self.arrows[element]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trivial_groupoid_is_valid() {
        let t1 = fixtures::t1();
        assert!(t1.validate().is_valid());
        assert_eq!(t1.star(ObjId(0)).unwrap().arrows, vec![ArrId(0)]);
    }

    #[test]
    fn cyclic_four_passes_all_triples() {
        let c4 = fixtures::c4();
        assert!(c4.validate().is_valid());
        // 4^3 triples, every one composable
        let mut checked = 0;
        for f in c4.arrows() {
            for g in c4.arrows() {
                for h in c4.arrows() {
                    let lhs = c4.compose(c4.compose(f, g), h);
                    let rhs = c4.compose(f, c4.compose(g, h));
                    assert_eq!(lhs, rhs);
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 64);
        assert_eq!(c4.star(ObjId(0)).unwrap().arrows.len(), 4);
    }

    #[test]
    fn corrupted_table_names_the_triple() {
        let mut c4 = fixtures::c4();
        // 1 + 1 should be 2; make it 3. Then (1+1)+2 = 1 but 1+(1+2) = 0.
        c4.corrupt_composite(ArrId(1), ArrId(1), ArrId(3));
        let report = c4.validate();
        assert!(!report.is_valid());
        assert!(report.violations.contains(&Violation::Associativity {
            f: ArrId(1),
            g: ArrId(1),
            h: ArrId(2)
        }));
    }

    #[test]
    fn i2_star_and_components() {
        let i2 = fixtures::i2();
        let x = i2.object_by_name("x").unwrap();
        let y = i2.object_by_name("y").unwrap();
        let star = i2.star(x).unwrap();
        assert_eq!(star.arrows.len(), 2);
        let doms: BTreeSet<ObjId> = star.arrows.iter().map(|&a| i2.dom(a)).collect();
        assert_eq!(doms, [x, y].into_iter().collect());
        assert!(star.arrows.contains(&i2.identity(x)));
        assert_eq!(i2.components(), vec![vec![x, y]]);
        assert_eq!(i2.vertex_group(x).unwrap().group.order(), 1);
    }

    #[test]
    fn unknown_object_is_an_error() {
        let t1 = fixtures::t1();
        assert!(matches!(
            t1.star(ObjId(5)),
            Err(GroupoidError::UnknownObject(ObjId(5)))
        ));
        assert!(t1.vertex_group(ObjId(1)).is_err());
    }

    #[test]
    fn disjoint_unions_add_up() {
        let t1 = fixtures::t1();
        let tt = t1.disjoint_union(&t1);
        assert_eq!((tt.object_count(), tt.arrow_count()), (2, 2));
        let c4 = fixtures::c4();
        let cc = c4.disjoint_union(&c4);
        assert_eq!(cc.components().len(), 2);
        assert_eq!(cc.arrow_count(), 8);
        assert!(cc.validate().is_valid());
        assert_eq!(c4.disjoint_union(&FiniteGroupoid::empty()), c4);
    }

    #[test]
    fn opposite_is_an_involution() {
        for g in [fixtures::t1(), fixtures::i2(), fixtures::c4(), fixtures::s3()] {
            let op = g.opposite();
            assert!(op.validate().is_valid());
            assert_eq!(op.opposite(), g);
        }
    }

    #[test]
    fn vertex_group_of_c4_is_cyclic() {
        let c4 = fixtures::c4();
        let vg = c4.vertex_group(ObjId(0)).unwrap();
        assert_eq!(vg.group.order(), 4);
        assert_eq!(vg.group.element_order(1), 4);
    }

    #[test]
    fn nonempty_sieves_are_maximal() {
        for g in [fixtures::i2(), fixtures::c4(), fixtures::s3()] {
            for x in g.objects() {
                for &a in g.star_slice(x) {
                    let sieve = g.sieve_generated_by(x, &[a]);
                    let star: BTreeSet<ArrId> = g.star_slice(x).iter().copied().collect();
                    assert_eq!(sieve, star);
                }
            }
        }
    }
}
