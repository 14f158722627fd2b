//! The topos structure of coverings over a fixed base: subobject classifier,
//! characteristic maps, subobjects, exponentials, and the translation between
//! coverings and presheaves of finite sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::covering::{is_covering, Covering};
use crate::error::CoverError;
use crate::groupoid::{arr, obj, ArrId, FiniteGroupoid, ObjId};
use crate::morphism::{enumerate_morphisms, fibered_product, same_groupoid, GroupoidMorphism, Over};

/// Contravariant functor from the base to finite sets. For `g: D → C`,
/// `maps[g][i]` is the image in `sets[D]` of element `i` of `sets[C]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<FiniteGroupoid>,
    sets: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Checks sizes, bijectivity, identities and `F(g∘h) = F(h)∘F(g)`.
    pub fn new(
        base: Arc<FiniteGroupoid>,
        sets: Vec<Vec<String>>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        let bad = |m: String| Err(CoverError::NotFunctorial(m));
        if sets.len() != base.object_count() {
            return bad(format!(
                "{} sets for {} objects",
                sets.len(),
                base.object_count()
            ));
        }
        if maps.len() != base.arrow_count() {
            return bad(format!("{} maps for {} arrows", maps.len(), base.arrow_count()));
        }
        for g in base.arrows() {
            let (d, c) = (base.dom(g).index(), base.cod(g).index());
            let m = &maps[g.index()];
            if m.len() != sets[c].len() {
                return bad(format!("map of {} has the wrong size", base.arrow_name(g)));
            }
            let mut seen = vec![false; sets[d].len()];
            for &y in m {
                if y >= seen.len() || std::mem::replace(&mut seen[y], true) {
                    return bad(format!("map of {} is not a bijection", base.arrow_name(g)));
                }
            }
            if seen.iter().any(|&s| !s) {
                return bad(format!("map of {} is not a bijection", base.arrow_name(g)));
            }
            if base.is_identity(g) && m.iter().enumerate().any(|(i, &y)| i != y) {
                return bad(format!("identity {} acts nontrivially", base.arrow_name(g)));
            }
        }
        for g in base.arrows() {
            for &h in base.star_slice(base.dom(g)) {
                let gh = base.compose(g, h);
                for i in 0..sets[base.cod(g).index()].len() {
                    if maps[gh.index()][i] != maps[h.index()][maps[g.index()][i]] {
                        return bad(format!(
                            "F({} ∘ {}) differs from F({}) ∘ F({})",
                            base.arrow_name(g),
                            base.arrow_name(h),
                            base.arrow_name(h),
                            base.arrow_name(g)
                        ));
                    }
                }
            }
        }
        Ok(Presheaf { base, sets, maps })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn set(&self, x: ObjId) -> &[String] {
        &self.sets[x.index()]
    }

    pub fn size(&self, x: ObjId) -> usize {
        self.sets[x.index()].len()
    }

    pub fn map(&self, g: ArrId) -> &[usize] {
        &self.maps[g.index()]
    }

    pub fn apply(&self, g: ArrId, i: usize) -> usize {
        self.maps[g.index()][i]
    }

    /// `F(g)⁻¹` as a table.
    pub fn inverse_map(&self, g: ArrId) -> Vec<usize> {
        let m = &self.maps[g.index()];
        let mut inv = vec![0; m.len()];
        for (i, &y) in m.iter().enumerate() {
            inv[y] = i;
        }
        inv
    }
}

/// Fibers as sets, transport as the structure maps. Element `i` over `C` is
/// the `i`-th fiber object (by id).
pub fn covering_to_presheaf(p: &Covering) -> Result<Presheaf, CoverError> {
    let base = p.base();
    let total = p.total();
    let mut fibers: Vec<Vec<ObjId>> = vec![Vec::new(); base.object_count()];
    let mut position = vec![0; total.object_count()];
    for x in total.objects() {
        let f = &mut fibers[p.project_object(x).index()];
        position[x.index()] = f.len();
        f.push(x);
    }
    let maps = base
        .arrows()
        .map(|g| {
            fibers[base.cod(g).index()]
                .iter()
                .map(|&x| position[total.dom(p.lift(g, x)).index()])
                .collect()
        })
        .collect();
    let sets = fibers
        .iter()
        .map(|f| f.iter().map(|&x| total.object_name(x).to_string()).collect())
        .collect();
    Presheaf::new(base.clone(), sets, maps)
}

/// Objects `(C, x)` for `x ∈ F(C)`, ordered by `C` then `x`; one arrow
/// `(D, F(g)x) → (C, x)` over each `g: D → C`.
pub fn presheaf_to_covering(f: &Presheaf) -> Result<Covering, CoverError> {
    let base = f.base();
    let mut obj_offset = Vec::with_capacity(base.object_count());
    let mut names = Vec::new();
    let mut obj_base = Vec::new();
    for c in base.objects() {
        obj_offset.push(names.len());
        for e in f.set(c) {
            names.push(format!("{e}@{}", base.object_name(c)));
            obj_base.push(c);
        }
    }
    let mut arr_offset = Vec::with_capacity(names.len());
    let mut arrows = Vec::new();
    let mut arr_base = Vec::new();
    for (k, &c) in obj_base.iter().enumerate() {
        arr_offset.push(arrows.len());
        let i = k - obj_offset[c.index()];
        for &g in base.star_slice(c) {
            let d = base.dom(g);
            let dom = obj_offset[d.index()] + f.apply(g, i);
            arrows.push((format!("{}@{}", base.arrow_name(g), names[k]), obj(dom), obj(k)));
            arr_base.push(g);
        }
    }
    let cods: Vec<usize> = arrows.iter().map(|a| a.2.index()).collect();
    let total = FiniteGroupoid::build(names, arrows, |a, b| {
        let k = cods[a.index()];
        arr(arr_offset[k] + base.star_position(base.compose(arr_base[a.index()], arr_base[b.index()])))
    })?;
    let m = GroupoidMorphism::new(Arc::new(total), base.clone(), obj_base, arr_base)?;
    is_covering(m).map_err(|e| CoverError::verification("presheaf gives a covering", e.to_string()))
}

/// The isomorphism `presheaf_to_covering(covering_to_presheaf(p)) → p`,
/// verified to be an isomorphism over the base.
pub fn covering_round_trip(p: &Covering) -> Result<GroupoidMorphism, CoverError> {
    let f = covering_to_presheaf(p)?;
    let q = presheaf_to_covering(&f)?;
    let base = p.base();
    let mut fibers: Vec<Vec<ObjId>> = vec![Vec::new(); base.object_count()];
    for x in p.total().objects() {
        fibers[p.project_object(x).index()].push(x);
    }
    let qt = q.total();
    let obj_map: Vec<ObjId> = {
        let mut seen = vec![0usize; base.object_count()];
        qt.objects()
            .map(|z| {
                let c = q.project_object(z).index();
                seen[c] += 1;
                fibers[c][seen[c] - 1]
            })
            .collect()
    };
    let arr_map = qt
        .arrows()
        .map(|a| p.lift(q.project_arrow(a), obj_map[qt.cod(a).index()]))
        .collect();
    let m = GroupoidMorphism::new(qt.clone(), p.total().clone(), obj_map, arr_map)
        .map_err(|e| CoverError::verification("covering round trip", e.to_string()))?;
    if !m.is_isomorphism() || !p.morphism().after(&m)?.same_maps(q.morphism()) {
        return Err(CoverError::verification(
            "covering round trip",
            "comparison is not an isomorphism over the base",
        ));
    }
    Ok(m)
}

/// A natural isomorphism `F → G`, as a bijection per base object, if any.
/// Within a component it is fixed by its value at one object; there it must
/// commute with the loop actions, found by backtracking.
pub fn natural_isomorphism(f: &Presheaf, g: &Presheaf) -> Option<Vec<Vec<usize>>> {
    let base = f.base();
    if !same_groupoid(base, g.base()) {
        return None;
    }
    if base.objects().any(|c| f.size(c) != g.size(c)) {
        return None;
    }
    let mut eta: Vec<Vec<usize>> = base.objects().map(|c| vec![0; f.size(c)]).collect();
    for comp in base.components() {
        let root = comp[0];
        let loops: Vec<ArrId> = base.hom(root, root).collect();
        let n = f.size(root);
        let mut at_root = vec![usize::MAX; n];
        if !extend_root(f, g, &loops, &mut at_root, &mut vec![false; n]) {
            return None;
        }
        for &d in &comp {
            let a = base.hom(d, root).next().expect("connected");
            // η_D = G(a) ∘ η_root ∘ F(a)⁻¹
            let finv = f.inverse_map(a);
            for i in 0..f.size(d) {
                eta[d.index()][i] = g.apply(a, at_root[finv[i]]);
            }
        }
    }
    for a in base.arrows() {
        let (d, c) = (base.dom(a).index(), base.cod(a).index());
        for i in 0..f.size(base.cod(a)) {
            if eta[d][f.apply(a, i)] != g.apply(a, eta[c][i]) {
                return None;
            }
        }
    }
    Some(eta)
}

fn extend_root(
    f: &Presheaf,
    g: &Presheaf,
    loops: &[ArrId],
    eta: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(x) = eta.iter().position(|&v| v == usize::MAX) else {
        return true;
    };
    for y in 0..eta.len() {
        if used[y] {
            continue;
        }
        let (saved, saved_used) = (eta.clone(), used.clone());
        let mut ok = true;
        for &l in loops {
            let (fx, gy) = (f.apply(l, x), g.apply(l, y));
            if eta[fx] == usize::MAX && !used[gy] {
                eta[fx] = gy;
                used[gy] = true;
            } else if eta[fx] != gy {
                ok = false;
                break;
            }
        }
        if ok && extend_root(f, g, loops, eta, used) {
            return true;
        }
        *eta = saved;
        *used = saved_used;
    }
    false
}

/// `Ω = G ⊔ G` over `G` by the codiagonal; objects `i < n` are the "true"
/// copy and `n + i` the "false" copy.
pub fn omega(g: Arc<FiniteGroupoid>) -> Covering {
    let n = g.object_count();
    let na = g.arrow_count();
    let total = g.disjoint_union(&g).renamed(
        |x| {
            let (tag, i) = if x.index() < n { ("t", x.index()) } else { ("f", x.index() - n) };
            format!("{tag}:{}", g.object_name(obj(i)))
        },
        |a| {
            let (tag, i) = if a.index() < na { ("t", a.index()) } else { ("f", a.index() - na) };
            format!("{tag}:{}", g.arrow_name(arr(i)))
        },
    );
    let m = GroupoidMorphism::new_unchecked(
        Arc::new(total),
        g.clone(),
        (0..2 * n).map(|i| obj(i % n.max(1))).collect(),
        (0..2 * na).map(|i| arr(i % na.max(1))).collect(),
    );
    is_covering(m).expect("codiagonal is a covering")
}

/// The injection of `G` into one copy of `Ω`.
pub fn omega_injection(omega: &Covering, truth: bool) -> GroupoidMorphism {
    let g = omega.base();
    let (no, na) = if truth { (0, 0) } else { (g.object_count(), g.arrow_count()) };
    GroupoidMorphism::new_unchecked(
        g.clone(),
        omega.total().clone(),
        g.objects().map(|x| obj(x.index() + no)).collect(),
        g.arrows().map(|a| arr(a.index() + na)).collect(),
    )
}

/// The characteristic map of a monic `s: S → H` over the base, with the
/// inverse of the comparison `S → H ×_Ω G` (which is checked bijective).
#[derive(Clone, Debug)]
pub struct Characteristic {
    pub omega: Covering,
    pub classifying: GroupoidMorphism,
    /// Components of `H` (by `components()` index) in the image of `s`.
    pub true_components: BTreeSet<usize>,
}

fn forms_pullback(
    s: &GroupoidMorphism,
    h: &Covering,
    classifying: &GroupoidMorphism,
    truth: &GroupoidMorphism,
) -> Result<bool, CoverError> {
    let fp = fibered_product(classifying, truth)?;
    // square commutes
    let hs = h.morphism().after(s)?;
    if !classifying.after(s)?.same_maps(&truth.after(&hs)?) {
        return Ok(false);
    }
    // the induced S → H ×_Ω G is a bijection
    let pg = &fp.groupoid;
    if pg.object_count() != s.source().object_count() || pg.arrow_count() != s.source().arrow_count() {
        return Ok(false);
    }
    let mut hit = vec![false; pg.object_count()];
    for z in s.source().objects() {
        let (x, y) = (s.map_object(z), hs.map_object(z));
        match pg
            .objects()
            .find(|&w| fp.left.map_object(w) == x && fp.right.map_object(w) == y)
        {
            Some(w) if !hit[w.index()] => hit[w.index()] = true,
            _ => return Ok(false),
        }
    }
    let mut hit = vec![false; pg.arrow_count()];
    for a in s.source().arrows() {
        let (x, y) = (s.map_arrow(a), hs.map_arrow(a));
        match pg
            .arrows()
            .find(|&w| fp.left.map_arrow(w) == x && fp.right.map_arrow(w) == y)
        {
            Some(w) if !hit[w.index()] => hit[w.index()] = true,
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// The map `H → Ω` sending the components hit by `s` to the true copy. Checks that
/// the square with `true` is a pullback.
pub fn characteristic_morphism(
    h: &Covering,
    s: &GroupoidMorphism,
) -> Result<Characteristic, CoverError> {
    if !same_groupoid(s.target(), h.total()) {
        return Err(CoverError::BaseMismatch);
    }
    if !s.is_injective() {
        return Err(CoverError::NotMonic);
    }
    let total = h.total();
    let comp = total.component_index();
    let true_components: BTreeSet<usize> = s
        .source()
        .objects()
        .map(|z| comp[s.map_object(z).index()])
        .collect();
    let om = omega(h.base().clone());
    let (n, na) = (h.base().object_count(), h.base().arrow_count());
    let is_true = |x: ObjId| true_components.contains(&comp[x.index()]);
    let classifying = GroupoidMorphism::new(
        total.clone(),
        om.total().clone(),
        total
            .objects()
            .map(|x| obj(h.project_object(x).index() + if is_true(x) { 0 } else { n }))
            .collect(),
        total
            .arrows()
            .map(|a| arr(h.project_arrow(a).index() + if is_true(total.cod(a)) { 0 } else { na }))
            .collect(),
    )?;
    let truth = omega_injection(&om, true);
    if !forms_pullback(s, h, &classifying, &truth)? {
        return Err(CoverError::verification(
            "characteristic square is a pullback",
            "S is not the pullback of true along the classifying map",
        ));
    }
    Ok(Characteristic {
        omega: om,
        classifying,
        true_components,
    })
}

/// Every morphism `H → Ω` over the base whose pullback of `true` is `s`.
/// Exhaustive; used to confirm uniqueness of the characteristic map.
pub fn classifying_maps(
    h: &Covering,
    s: &GroupoidMorphism,
    limit: usize,
) -> Result<Vec<GroupoidMorphism>, CoverError> {
    let om = omega(h.base().clone());
    let truth = omega_injection(&om, true);
    let candidates = enumerate_morphisms(
        h.total(),
        om.total(),
        Some(Over {
            source_map: h.morphism(),
            target_map: om.morphism(),
        }),
        limit,
    )?;
    let mut out = Vec::new();
    for c in candidates {
        let c = c.with_endpoints(h.total().clone(), om.total().clone());
        if forms_pullback(s, h, &c, &truth)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// A subobject: a union of components, with its inclusion.
#[derive(Clone, Debug)]
pub struct Subobject {
    pub components: BTreeSet<usize>,
    pub covering: Covering,
    pub inclusion: GroupoidMorphism,
}

/// Subobjects of a covering, indexed by bitmask over its components.
#[derive(Clone, Debug)]
pub struct SubobjectLattice {
    pub components: Vec<Vec<ObjId>>,
    pub members: Vec<Subobject>,
}

impl SubobjectLattice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, a: usize, b: usize) -> usize {
        a | b
    }

    pub fn intersection(&self, a: usize, b: usize) -> usize {
        a & b
    }

    pub fn complement(&self, a: usize) -> usize {
        !a & (self.members.len() - 1)
    }

    pub fn top(&self) -> usize {
        self.members.len() - 1
    }

    pub fn bottom(&self) -> usize {
        0
    }
}

const MAX_COMPONENTS: usize = 16;
const MAX_OBJECT_SUBSETS: usize = 12;

/// The subobject lattice of `h`: unions of components, as a Boolean algebra.
/// For small totals, every subset of objects is tried and exactly the unions of
/// components must give monic coverings.
pub fn subobjects(h: &Covering) -> Result<SubobjectLattice, CoverError> {
    let total = h.total();
    let components = total.components();
    if components.len() > MAX_COMPONENTS {
        return Err(CoverError::BoundExceeded(format!(
            "{} components (at most {MAX_COMPONENTS})",
            components.len()
        )));
    }
    let mut members = Vec::with_capacity(1 << components.len());
    for mask in 0usize..(1 << components.len()) {
        let set: BTreeSet<usize> = (0..components.len()).filter(|i| mask >> i & 1 == 1).collect();
        let mut objs: Vec<ObjId> = set.iter().flat_map(|&i| components[i].iter().copied()).collect();
        objs.sort_unstable();
        let (covering, inclusion) = restrict(h, &objs)?
            .ok_or_else(|| CoverError::verification("components are subobjects", "restriction is not a covering"))?;
        members.push(Subobject {
            components: set,
            covering,
            inclusion,
        });
    }
    let lattice = SubobjectLattice { components, members };
    check_boolean(&lattice)?;
    if total.object_count() <= MAX_OBJECT_SUBSETS {
        let comp = total.component_index();
        for mask in 0usize..(1 << total.object_count()) {
            let objs: Vec<ObjId> = total.objects().filter(|x| mask >> x.index() & 1 == 1).collect();
            let closed = objs.iter().all(|x| {
                total.objects().all(|y| comp[y.index()] != comp[x.index()] || mask >> y.index() & 1 == 1)
            });
            if restrict(h, &objs)?.is_some() != closed {
                return Err(CoverError::verification(
                    "subobjects are unions of components",
                    format!("object subset {mask:#b}"),
                ));
            }
        }
    }
    Ok(lattice)
}

/// The full subgroupoid on `objs` with its inclusion, if the projection
/// restricted to it is a covering.
fn restrict(h: &Covering, objs: &[ObjId]) -> Result<Option<(Covering, GroupoidMorphism)>, CoverError> {
    let total = h.total();
    let sub = total.full_subgroupoid(objs);
    let g = Arc::new(sub.groupoid);
    let inclusion = GroupoidMorphism::new(g.clone(), total.clone(), sub.objects.clone(), sub.arrows.clone())?;
    let down = GroupoidMorphism::new(
        g,
        h.base().clone(),
        sub.objects.iter().map(|&x| h.project_object(x)).collect(),
        sub.arrows.iter().map(|&a| h.project_arrow(a)).collect(),
    )?;
    Ok(is_covering(down).ok().map(|c| (c, inclusion)))
}

fn check_boolean(l: &SubobjectLattice) -> Result<(), CoverError> {
    let n = l.len();
    let fail = |law: &str| Err(CoverError::verification("subobject lattice is Boolean", law.to_string()));
    for a in 0..n {
        let c = l.complement(a);
        if l.union(a, c) != l.top() || l.intersection(a, c) != l.bottom() {
            return fail("complement");
        }
        if l.complement(c) != a {
            return fail("involution");
        }
        for b in 0..n {
            if l.union(a, b) != l.union(b, a) || l.intersection(a, b) != l.intersection(b, a) {
                return fail("commutativity");
            }
            if l.union(a, l.intersection(a, b)) != a || l.intersection(a, l.union(a, b)) != a {
                return fail("absorption");
            }
            if l.complement(l.union(a, b)) != l.intersection(l.complement(a), l.complement(b)) {
                return fail("De Morgan");
            }
            for c in 0..n {
                if l.intersection(a, l.union(b, c))
                    != l.union(l.intersection(a, b), l.intersection(a, c))
                {
                    return fail("distributivity");
                }
                if l.union(a, l.union(b, c)) != l.union(l.union(a, b), c) {
                    return fail("associativity");
                }
            }
        }
    }
    // subset order matches the lattice order
    for a in 0..n {
        for b in 0..n {
            let sub = l.members[a].components.is_subset(&l.members[b].components);
            if sub != (l.intersection(a, b) == a) {
                return fail("order");
            }
        }
    }
    Ok(())
}

/// The exponential `Q^P` for coverings `q` (values) and `p` (exponent) over a
/// common base. Over `C` its objects are all maps `α: P(C) → Q(C)`; the arrow
/// over `g: D → C` into `α` starts at `Q(g) ∘ α ∘ P(g)⁻¹`.
#[derive(Clone, Debug)]
pub struct ExponentialCovering {
    pub covering: Covering,
    pub values: Presheaf,
    pub exponent: Presheaf,
    /// `maps[C][k]` is the `k`-th map over `C`, as a table `P(C) → Q(C)`.
    pub maps: Vec<Vec<Vec<usize>>>,
}

impl ExponentialCovering {
    /// The object over `c` for the map `alpha`.
    pub fn object_of(&self, c: ObjId, alpha: &[usize]) -> Option<ObjId> {
        let k = self.maps[c.index()].iter().position(|m| m == alpha)?;
        let offset: usize = (0..c.index()).map(|i| self.maps[i].len()).sum();
        Some(obj(offset + k))
    }
}

const MAX_EXPONENTIAL_FIBER: usize = 1 << 16;

fn all_maps(domain: usize, codomain: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..domain {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..codomain).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    out
}

pub fn exponential(q: &Covering, p: &Covering) -> Result<ExponentialCovering, CoverError> {
    if !same_groupoid(q.base(), p.base()) {
        return Err(CoverError::BaseMismatch);
    }
    let base = q.base();
    let values = covering_to_presheaf(q)?;
    let exponent = covering_to_presheaf(p)?;
    let mut maps = Vec::with_capacity(base.object_count());
    for c in base.objects() {
        let (d, v) = (exponent.size(c), values.size(c));
        let count = (v as f64).powi(d as i32);
        if count > MAX_EXPONENTIAL_FIBER as f64 {
            return Err(CoverError::BoundExceeded(format!(
                "exponential fiber {v}^{d} over {}",
                base.object_name(c)
            )));
        }
        maps.push(all_maps(d, v));
    }
    let names: Vec<Vec<String>> = base
        .objects()
        .map(|c| {
            maps[c.index()]
                .iter()
                .map(|m| {
                    let parts: Vec<&str> = m.iter().map(|&i| values.set(c)[i].as_str()).collect();
                    format!("[{}]", parts.join(","))
                })
                .collect()
        })
        .collect();
    let table = base
        .arrows()
        .map(|g| {
            let (c, d) = (base.cod(g), base.dom(g));
            let pinv = exponent.inverse_map(g);
            maps[c.index()]
                .iter()
                .map(|alpha| {
                    let moved: Vec<usize> = (0..exponent.size(d))
                        .map(|x| values.apply(g, alpha[pinv[x]]))
                        .collect();
                    maps[d.index()]
                        .iter()
                        .position(|m| *m == moved)
                        .expect("all maps enumerated")
                })
                .collect()
        })
        .collect();
    let presheaf = Presheaf::new(base.clone(), names, table)
        .map_err(|e| CoverError::verification("exponential presheaf is functorial", e.to_string()))?;
    let covering = presheaf_to_covering(&presheaf)?;
    for c in base.objects() {
        let expected = values.size(c).pow(exponent.size(c) as u32);
        if covering.fiber(c)?.objects.len() != expected {
            return Err(CoverError::verification(
                "exponential fiber size",
                format!("over {}", base.object_name(c)),
            ));
        }
    }
    Ok(ExponentialCovering {
        covering,
        values,
        exponent,
        maps,
    })
}

/// `(α·g)(x) = α(x·g⁻¹)·g` for a loop `g` at `C`, where `x·g = F(g)(x)`.
pub fn group_action_on_exponential(
    values: &Presheaf,
    exponent: &Presheaf,
    g: ArrId,
    alpha: &[usize],
) -> Result<Vec<usize>, CoverError> {
    let base = values.base();
    let c = base.cod(g);
    if base.dom(g) != c {
        return Err(CoverError::SeedMismatch(format!("{} is not a loop", base.arrow_name(g))));
    }
    if alpha.len() != exponent.size(c) || alpha.iter().any(|&v| v >= values.size(c)) {
        return Err(CoverError::SeedMismatch("map has the wrong shape".into()));
    }
    let ginv = base.inverse(g);
    Ok((0..exponent.size(c))
        .map(|x| values.apply(g, alpha[exponent.apply(ginv, x)]))
        .collect())
}

/// Two independent enumerations of `Hom(R ×_G P, Q)` and `Hom(R, Q^P)` and the
/// currying bijection between them: `bijection[i]` is the index on the right
/// of the curry of left morphism `i`.
#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub left: Vec<GroupoidMorphism>,
    pub right: Vec<GroupoidMorphism>,
    pub bijection: Vec<usize>,
}

pub fn adjunction_check(
    r: &Covering,
    p: &Covering,
    q: &Covering,
    limit: usize,
) -> Result<AdjunctionReport, CoverError> {
    if !same_groupoid(r.base(), p.base()) || !same_groupoid(r.base(), q.base()) {
        return Err(CoverError::BaseMismatch);
    }
    let base = r.base();
    let fp = fibered_product(r.morphism(), &p.morphism().with_endpoints(p.total().clone(), base.clone()))?;
    let rp = is_covering(r.morphism().after(&fp.left)?)
        .map_err(|e| CoverError::verification("products are coverings", e.to_string()))?;
    let q_on = q.morphism().with_endpoints(q.total().clone(), base.clone());
    let left = enumerate_morphisms(
        rp.total(),
        q.total(),
        Some(Over {
            source_map: rp.morphism(),
            target_map: &q_on,
        }),
        limit,
    )?;
    let expo = exponential(q, p)?;
    let e_on = expo
        .covering
        .morphism()
        .with_endpoints(expo.covering.total().clone(), base.clone());
    let right = enumerate_morphisms(
        r.total(),
        expo.covering.total(),
        Some(Over {
            source_map: r.morphism(),
            target_map: &e_on,
        }),
        limit,
    )?;
    // positions of fiber objects
    let pos = |c: &Covering| {
        let mut seen = vec![0usize; base.object_count()];
        c.total()
            .objects()
            .map(|x| {
                let k = c.project_object(x).index();
                seen[k] += 1;
                seen[k] - 1
            })
            .collect::<Vec<_>>()
    };
    let q_pos = pos(q);
    let mut p_fiber: Vec<Vec<ObjId>> = vec![Vec::new(); base.object_count()];
    for x in p.total().objects() {
        p_fiber[p.project_object(x).index()].push(x);
    }
    let pair = |a: ObjId, b: ObjId| {
        fp.groupoid
            .objects()
            .find(|&w| fp.left.map_object(w) == a && fp.right.map_object(w) == b)
    };
    let right_index: std::collections::HashMap<&[ObjId], usize> =
        right.iter().enumerate().map(|(i, m)| (m.object_map(), i)).collect();
    let mut bijection = Vec::with_capacity(left.len());
    let mut hit = vec![false; right.len()];
    for theta in &left {
        let curried: Vec<ObjId> = r
            .total()
            .objects()
            .map(|x| {
                let c = r.project_object(x);
                let alpha: Vec<usize> = p_fiber[c.index()]
                    .iter()
                    .map(|&y| q_pos[theta.map_object(pair(x, y).expect("same fiber")).index()])
                    .collect();
                expo.object_of(c, &alpha).expect("every map is an object")
            })
            .collect();
        let j = *right_index
            .get(curried.as_slice())
            .ok_or_else(|| {
                CoverError::verification("currying lands in Hom(R, Q^P)", "curried map is not a morphism")
            })?;
        if std::mem::replace(&mut hit[j], true) {
            return Err(CoverError::verification("currying is injective", format!("two maps curry to {j}")));
        }
        bijection.push(j);
    }
    if hit.iter().any(|&h| !h) {
        return Err(CoverError::verification(
            "currying is surjective",
            format!("{} vs {} morphisms", left.len(), right.len()),
        ));
    }
    Ok(AdjunctionReport {
        left,
        right,
        bijection,
    })
}

/// The presheaf of sieves: over `C`, the sets of arrows into `C` closed under
/// precomposition; `g*S = {h : g∘h ∈ S}`. Enumerates subsets of stars, so
/// stars must be small.
pub fn sieve_presheaf(g: &Arc<FiniteGroupoid>) -> Result<Presheaf, CoverError> {
    const MAX_STAR: usize = 16;
    let mut sieves: Vec<Vec<BTreeSet<ArrId>>> = Vec::new();
    for c in g.objects() {
        let star = g.star_slice(c);
        if star.len() > MAX_STAR {
            return Err(CoverError::BoundExceeded(format!("star of size {}", star.len())));
        }
        let mut here = Vec::new();
        for mask in 0usize..(1 << star.len()) {
            let s: BTreeSet<ArrId> = (0..star.len()).filter(|i| mask >> i & 1 == 1).map(|i| star[i]).collect();
            let closed = s
                .iter()
                .all(|&a| g.star_slice(g.dom(a)).iter().all(|&h| s.contains(&g.compose(a, h))));
            if closed {
                here.push(s);
            }
        }
        sieves.push(here);
    }
    let names = sieves
        .iter()
        .map(|ss| {
            ss.iter()
                .map(|s| if s.is_empty() { "empty".to_string() } else { format!("sieve{}", s.len()) })
                .collect()
        })
        .collect();
    let maps = g
        .arrows()
        .map(|a| {
            let d = g.dom(a);
            sieves[g.cod(a).index()]
                .iter()
                .map(|s| {
                    let pulled: BTreeSet<ArrId> =
                        g.star_slice(d).iter().copied().filter(|&h| s.contains(&g.compose(a, h))).collect();
                    sieves[d.index()].iter().position(|t| *t == pulled).expect("pullback is a sieve")
                })
                .collect()
        })
        .collect();
    Presheaf::new(g.clone(), names, maps)
}

/// Compares `Ω` with the presheaf of sieves: every object must have exactly
/// the empty and the maximal sieve, and true ↦ maximal, false ↦ empty must be
/// natural. Returns the comparison per object.
pub fn omega_sieve_comparison(g: &Arc<FiniteGroupoid>) -> Result<Vec<Vec<usize>>, CoverError> {
    let sieves = sieve_presheaf(g)?;
    let om = covering_to_presheaf(&omega(g.clone()))?;
    let mut eta = Vec::with_capacity(g.object_count());
    for c in g.objects() {
        let names = sieves.set(c);
        if names.len() != 2 {
            return Err(CoverError::verification(
                "sieves on a groupoid object are empty or maximal",
                format!("{} sieves on {}", names.len(), g.object_name(c)),
            ));
        }
        let empty = names.iter().position(|n| n == "empty").expect("empty sieve");
        // fiber of Ω over c: true copy first
        eta.push(vec![1 - empty, empty]);
    }
    for a in g.arrows() {
        let (d, c) = (g.dom(a).index(), g.cod(a).index());
        for i in 0..2 {
            if eta[d][om.apply(a, i)] != sieves.apply(a, eta[c][i]) {
                return Err(CoverError::verification(
                    "Ω corresponds to the sieve presheaf",
                    format!("naturality fails at {}", g.arrow_name(a)),
                ));
            }
        }
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{covering_from_subgroup, universal_cover};
    use crate::fixtures;
    use crate::group::FiniteGroup;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    fn discrete(base: &Arc<FiniteGroupoid>, n: usize) -> Covering {
        let sets = base.objects().map(|_| (0..n).map(|i| format!("e{i}")).collect()).collect();
        let maps = base.arrows().map(|_| (0..n).collect()).collect();
        presheaf_to_covering(&Presheaf::new(base.clone(), sets, maps).unwrap()).unwrap()
    }

    #[test]
    fn omega_shapes() {
        let t1 = arc(fixtures::t1());
        let o = omega(t1);
        assert_eq!(o.total().object_count(), 2);
        let c4 = arc(fixtures::c4());
        let o = omega(c4.clone());
        assert_eq!(o.fold().unwrap(), 2);
        assert_eq!(o.total().components().len(), 2);
        let f = covering_to_presheaf(&o).unwrap();
        assert!(c4.arrows().all(|a| f.map(a) == [0, 1]));
    }

    #[test]
    fn omega_matches_sieves() {
        for (_, g) in fixtures::all() {
            let g = arc(g);
            let sieves = sieve_presheaf(&g).unwrap();
            for c in g.objects() {
                assert_eq!(sieves.size(c), 2);
            }
            let om = covering_to_presheaf(&omega(g.clone())).unwrap();
            assert!(natural_isomorphism(&om, &sieves).is_some());
            let eta = omega_sieve_comparison(&g).unwrap();
            for c in g.objects() {
                assert_ne!(sieves.set(c)[eta[c.index()][0]], "empty");
            }
        }
    }

    #[test]
    fn characteristic_maps_are_unique() {
        let c4 = arc(fixtures::c4());
        let z4 = FiniteGroup::cyclic(4);
        let half = covering_from_subgroup(c4.clone(), ObjId(0), &z4.subgroup(&[0, 2]).unwrap()).unwrap();
        // H = half ⊔ id, two components
        let sets = vec![vec!["a".into(), "b".into(), "c".into()]];
        let base_h = covering_to_presheaf(&half.covering).unwrap();
        let maps = c4
            .arrows()
            .map(|g| {
                let mut m = base_h.map(g).to_vec();
                m.push(2);
                m
            })
            .collect();
        let h = presheaf_to_covering(&Presheaf::new(c4.clone(), sets, maps).unwrap()).unwrap();
        let subs = subobjects(&h).unwrap();
        assert_eq!(subs.len(), 4);
        for s in &subs.members {
            let ch = characteristic_morphism(&h, &s.inclusion).unwrap();
            let all = classifying_maps(&h, &s.inclusion, 10_000).unwrap();
            assert_eq!(all.len(), 1);
            assert!(all[0].same_maps(&ch.classifying));
        }
    }

    #[test]
    fn non_monic_is_rejected() {
        let c4 = arc(fixtures::c4());
        let u = universal_cover(c4, ObjId(0)).unwrap().covering;
        let h = Covering::identity(u.base().clone());
        assert_eq!(
            characteristic_morphism(&h, u.morphism()).unwrap_err(),
            CoverError::NotMonic
        );
    }

    #[test]
    fn subobject_counts() {
        let t1 = arc(fixtures::t1());
        assert_eq!(subobjects(&discrete(&t1, 0)).unwrap().len(), 1);
        assert_eq!(subobjects(&discrete(&t1, 3)).unwrap().len(), 8);
        let s3 = arc(fixtures::s3());
        let u = universal_cover(s3, ObjId(0)).unwrap().covering;
        assert_eq!(subobjects(&u).unwrap().len(), 2);
    }

    #[test]
    fn exponential_sizes() {
        let t1 = arc(fixtures::t1());
        let e = exponential(&discrete(&t1, 3), &discrete(&t1, 2)).unwrap();
        assert_eq!(e.covering.total().object_count(), 9);
        let e = exponential(&discrete(&t1, 3), &discrete(&t1, 0)).unwrap();
        assert_eq!(e.covering.total().object_count(), 1);
        for (_, g) in fixtures::all() {
            let g = arc(g);
            let id = Covering::identity(g.clone());
            let e = exponential(&id, &id).unwrap();
            assert!(e.covering.morphism().is_isomorphism());
        }
    }

    #[test]
    fn exponential_action_matches_arrows() {
        let c4 = arc(fixtures::c4());
        let u = universal_cover(c4.clone(), ObjId(0)).unwrap().covering;
        let e = exponential(&u, &u).unwrap();
        let mono = e.covering.monodromy(ObjId(0)).unwrap();
        for (k, alpha) in e.maps[0].iter().enumerate() {
            for g in c4.arrows() {
                let moved = group_action_on_exponential(&e.values, &e.exponent, g, alpha).unwrap();
                let via_arrow = mono.act(k, mono.group.element_of(g).unwrap());
                assert_eq!(e.maps[0][via_arrow], moved);
                // pointwise formula
                let ginv = c4.inverse(g);
                for x in 0..4 {
                    let pre = e.exponent.apply(ginv, x);
                    assert_eq!(moved[x], e.values.apply(g, alpha[pre]));
                }
            }
        }
        // identity map on the regular set moves to a conjugate-translate
        let ident: Vec<usize> = (0..4).collect();
        for g in c4.arrows() {
            let moved = group_action_on_exponential(&e.values, &e.exponent, g, &ident).unwrap();
            assert_eq!(moved, ident);
        }
    }

    #[test]
    fn presheaf_round_trips() {
        for (_, g) in fixtures::all() {
            let g = arc(g);
            let pi = g.vertex_group(ObjId(0)).unwrap().group;
            for h in pi.subgroups().unwrap() {
                let p = covering_from_subgroup(g.clone(), ObjId(0), &h).unwrap().covering;
                covering_round_trip(&p).unwrap();
                let f = covering_to_presheaf(&p).unwrap();
                let back = covering_to_presheaf(&presheaf_to_covering(&f).unwrap()).unwrap();
                assert!(natural_isomorphism(&f, &back).is_some());
            }
        }
    }

    #[test]
    fn non_functorial_presheaf() {
        let c4 = arc(fixtures::c4());
        let sets = vec![vec!["a".into(), "b".into()]];
        // generator swaps, but so does its square
        let maps = vec![vec![0, 1], vec![1, 0], vec![1, 0], vec![1, 0]];
        assert!(matches!(
            Presheaf::new(c4, sets, maps),
            Err(CoverError::NotFunctorial(_))
        ));
    }

    #[test]
    fn adjunction_small() {
        let t1 = arc(fixtures::t1());
        let r = discrete(&t1, 2);
        let rep = adjunction_check(&r, &r, &r, 100_000).unwrap();
        assert_eq!(rep.left.len(), 16);
        assert_eq!(rep.right.len(), 16);
        let one = discrete(&t1, 1);
        let rep = adjunction_check(&r, &r, &one, 100_000).unwrap();
        assert_eq!(rep.left.len(), 1);
    }
}
