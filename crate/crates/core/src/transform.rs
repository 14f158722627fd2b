//! Covering transformations, regularity and the normalizer isomorphism.

use std::sync::Arc;

use crate::construct::GroupAction;
use crate::covering::Covering;
use crate::error::CoverError;
use crate::group::{FiniteGroup, QuotientGroup, Subgroup};
use crate::groupoid::{FiniteGroupoid, ObjId};
use crate::morphism::{same_groupoid, GroupoidMorphism};

/// The automorphisms `h` of the total groupoid with `p ∘ h = p`.
///
/// Element 0 is the identity; the others are ordered by the image of the
/// marked object. The product is composition, `mul(a, b) = a ∘ b`.
#[derive(Clone, Debug)]
pub struct CovGroup {
    pub covering: Covering,
    pub marked: ObjId,
    pub transformations: Vec<GroupoidMorphism>,
    pub group: FiniteGroup,
}

impl CovGroup {
    pub fn order(&self) -> usize {
        self.transformations.len()
    }

    /// The element sending the marked object to `y`, if any.
    pub fn element_sending_marked_to(&self, y: ObjId) -> Option<usize> {
        self.transformations
            .iter()
            .position(|h| h.map_object(self.marked) == y)
    }

    /// The element whose maps equal `h`, if `h` is a transformation.
    pub fn element_of(&self, h: &GroupoidMorphism) -> Option<usize> {
        self.element_sending_marked_to(h.map_object(self.marked))
            .filter(|&i| self.transformations[i].same_maps(h))
    }

    /// The action of the group on the total groupoid.
    pub fn action(&self) -> Result<GroupAction, CoverError> {
        GroupAction::new(
            self.group.clone(),
            self.covering.total().clone(),
            self.transformations.clone(),
        )
    }

    /// Whether the group acts transitively on the fiber containing the marked
    /// object.
    pub fn is_transitive_on_fiber(&self) -> bool {
        let over = self.covering.project_object(self.marked);
        self.covering
            .total()
            .objects()
            .filter(|&x| self.covering.project_object(x) == over)
            .all(|x| self.element_sending_marked_to(x).is_some())
    }
}

pub fn covering_transformations(p: &Covering) -> Result<CovGroup, CoverError> {
    covering_transformations_at(p, ObjId(0))
}

/// Enumerates transformations by lifting `p` through itself from `marked` to
/// each object of its fiber with the same pushforward subgroup.
pub fn covering_transformations_at(p: &Covering, marked: ObjId) -> Result<CovGroup, CoverError> {
    let total = p.total();
    if !total.contains_object(marked) {
        return Err(crate::error::GroupoidError::UnknownObject(marked).into());
    }
    if !p.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let over = p.project_object(marked);
    let own = p.pushforward_vertex(marked)?.subgroup;
    let mut transformations = vec![GroupoidMorphism::identity(total.clone())];
    for y in total.objects() {
        if y == marked || p.project_object(y) != over {
            continue;
        }
        if p.pushforward_vertex(y)?.subgroup != own {
            continue;
        }
        let h = p.lift_morphism(p.morphism(), marked, y)?.ok_or_else(|| {
            CoverError::verification(
                "equal pushforwards give a transformation",
                format!("no lift sending {marked} to {y}"),
            )
        })?;
        if !h.is_isomorphism() {
            return Err(CoverError::verification(
                "transformations are automorphisms",
                format!("lift sending {marked} to {y} is not bijective"),
            ));
        }
        transformations.push(h);
    }
    let labels = transformations
        .iter()
        .map(|h| format!("h[{}]", total.object_name(h.map_object(marked))))
        .collect();
    let images: Vec<ObjId> = transformations.iter().map(|h| h.map_object(marked)).collect();
    let position = |y: ObjId| images.iter().position(|&z| z == y);
    let mut failure = None;
    let group = FiniteGroup::from_fn(transformations.len(), labels, |a, b| {
        let y = transformations[a].map_object(transformations[b].map_object(marked));
        position(y).unwrap_or_else(|| {
            failure.get_or_insert(y);
            0
        })
    });
    if let Some(y) = failure {
        return Err(CoverError::verification(
            "transformations are closed under composition",
            format!("composite sends {marked} to {y}, which is not in the list"),
        ));
    }
    let group =
        group.map_err(|e| CoverError::verification("transformations form a group", e.to_string()))?;
    Ok(CovGroup {
        covering: p.clone(),
        marked,
        transformations,
        group,
    })
}

/// Regularity, computed from normality of the pushforward and from
/// transitivity of the transformation group; the two must agree.
pub fn is_regular(p: &Covering) -> Result<bool, CoverError> {
    if !p.is_connected() {
        return Err(CoverError::Disconnected);
    }
    if p.total().is_empty() {
        return Ok(true);
    }
    let mut normal = true;
    for x in p.total().objects() {
        let pf = p.pushforward_vertex(x)?;
        if !pf.base_group.group.is_normal(&pf.subgroup) {
            normal = false;
            break;
        }
    }
    let transitive = covering_transformations(p)?.is_transitive_on_fiber();
    if normal != transitive {
        return Err(CoverError::verification(
            "regular iff Cov is transitive on fibers",
            format!("normal pushforward: {normal}, transitive: {transitive}"),
        ));
    }
    Ok(normal)
}

/// `N(P)/P ≅ Cov` where `P` is the pushforward at `at`. Element `i` of the
/// quotient maps to `cov` element `map[i]`: the transformation sending `at` to
/// `at·a` for any representative loop `a`.
#[derive(Clone, Debug)]
pub struct NormalizerIso {
    pub pushforward: Subgroup,
    pub normalizer: Subgroup,
    /// The normalizer as a group; element `i` is `normalizer.elements()[i]`.
    pub normalizer_group: FiniteGroup,
    pub quotient: QuotientGroup,
    pub cov: CovGroup,
    pub map: Vec<usize>,
}

pub fn cov_normalizer_iso(p: &Covering, at: ObjId) -> Result<NormalizerIso, CoverError> {
    let cov = covering_transformations_at(p, at)?;
    let pf = p.pushforward_vertex(at)?;
    let pi = &pf.base_group;
    let normalizer = pi.group.normalizer(&pf.subgroup);
    let normalizer_group = pi.group.subgroup_as_group(&normalizer);
    let local = |g: usize| normalizer.elements().binary_search(&g).expect("in normalizer");
    let inner: Vec<usize> = pf.subgroup.elements().iter().map(|&g| local(g)).collect();
    let inner = normalizer_group.subgroup(&inner)?;
    let quotient = normalizer_group.quotient(&inner)?;
    let mut map = Vec::with_capacity(quotient.cosets.len());
    for coset in &quotient.cosets {
        let a = normalizer.elements()[coset[0]];
        let moved = p.total().dom(p.lift(pi.arrow_of(a), at));
        let h = cov.element_sending_marked_to(moved).ok_or_else(|| {
            CoverError::verification(
                "normalizer quotient ≅ Cov",
                format!("no transformation sends {at} to {moved}"),
            )
        })?;
        map.push(h);
    }
    if !quotient.group.is_isomorphism(&cov.group, &map) {
        return Err(CoverError::verification(
            "normalizer quotient ≅ Cov",
            "map is not a bijective homomorphism",
        ));
    }
    Ok(NormalizerIso {
        pushforward: pf.subgroup,
        normalizer,
        normalizer_group,
        quotient,
        cov,
        map,
    })
}

/// For a regular connected covering: whether Cov acts freely and transitively
/// on the fibers, with `Cov ≅ π/p*π` checked along the way.
pub fn principal_action_check(p: &Covering) -> Result<bool, CoverError> {
    if !is_regular(p)? {
        return Err(CoverError::NotRegular);
    }
    if p.total().is_empty() {
        return Ok(true);
    }
    let iso = cov_normalizer_iso(p, ObjId(0))?;
    if iso.normalizer.order() != iso.quotient.cosets.len() * iso.pushforward.order()
        || iso.normalizer != iso.cov.covering.pushforward_vertex(ObjId(0))?.base_group.group.whole()
    {
        return Err(CoverError::verification(
            "Cov ≅ π/p*π for regular coverings",
            "normalizer is not the whole vertex group",
        ));
    }
    let cov = &iso.cov;
    let free = cov.transformations.iter().skip(1).all(|h| {
        p.total().objects().all(|x| h.map_object(x) != x)
    });
    Ok(free && cov.is_transitive_on_fiber())
}

fn is_universal(p: &Covering) -> bool {
    p.is_connected() && p.total().objects().all(|x| p.total().hom(x, x).count() == 1)
}

/// `f_#(g)`: the transformation of the upper covering with
/// `f_#(g) ∘ f̃ = f̃ ∘ g`, cross-checked against the route through the vertex
/// groups (`Cov ≅ π` on both sides and `f` on loops).
pub fn induced_transformation_map(
    f: &GroupoidMorphism,
    lower: &Covering,
    upper: &Covering,
    lifted: &GroupoidMorphism,
    g: &GroupoidMorphism,
) -> Result<GroupoidMorphism, CoverError> {
    if !same_groupoid(f.source(), lower.base()) || !same_groupoid(f.target(), upper.base()) {
        return Err(CoverError::BaseMismatch);
    }
    if !same_groupoid(lifted.source(), lower.total())
        || !same_groupoid(lifted.target(), upper.total())
    {
        return Err(CoverError::DoesNotCover);
    }
    if !is_universal(lower) || !is_universal(upper) {
        return Err(CoverError::NotCovering(
            "both coverings must be universal and connected".into(),
        ));
    }
    if !upper
        .morphism()
        .after(lifted)?
        .same_maps(&f.after(lower.morphism())?)
    {
        return Err(CoverError::DoesNotCover);
    }
    let lower_cov = covering_transformations(lower)?;
    let g_index = lower_cov.element_of(g).ok_or_else(|| {
        CoverError::NotCovering("g is not a transformation of the source covering".into())
    })?;
    let x = lower_cov.marked;
    let upper_cov = covering_transformations_at(upper, lifted.map_object(x))?;
    let start = lifted.map_object(x);
    let end = lifted.map_object(g.map_object(x));
    let h = upper
        .lift_morphism(upper.morphism(), start, end)?
        .ok_or_else(|| {
            CoverError::verification("f_# is well defined", "no transformation extends the seed")
        })?;
    if !h.after(lifted)?.same_maps(&lifted.after(g)?) {
        return Err(CoverError::verification(
            "f_#(g) ∘ f̃ = f̃ ∘ g",
            "lifted transformation does not intertwine",
        ));
    }

    // second route: g ↦ loop a at p(x) with x·a = g(x); f(a); the upper
    // transformation sending f̃(x) to f̃(x)·f(a)
    let base_x = lower.project_object(x);
    let pi_lower = lower.base().vertex_group(base_x)?;
    let a = pi_lower
        .arrows
        .iter()
        .copied()
        .find(|&a| lower.total().dom(lower.lift(a, x)) == g.map_object(x))
        .ok_or_else(|| CoverError::verification("Cov ≅ π", "no loop moves x to g(x)"))?;
    let fa = f.map_arrow(a);
    let moved = upper.total().dom(upper.lift(fa, start));
    let via_groups = upper_cov
        .element_sending_marked_to(moved)
        .ok_or_else(|| CoverError::verification("Cov ≅ π", "no transformation for f(a)"))?;
    if !upper_cov.transformations[via_groups].same_maps(&h) {
        return Err(CoverError::verification(
            "f_# agrees with f* under Cov ≅ π",
            format!("routes disagree for element {g_index}"),
        ));
    }
    Ok(h)
}

/// The transformations of the identity covering of `g`: just the identity.
pub fn trivial_cov(g: Arc<FiniteGroupoid>) -> Result<CovGroup, CoverError> {
    covering_transformations(&Covering::identity(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{covering_from_subgroup, universal_cover};
    use crate::fixtures;
    use crate::morphism::{enumerate_morphisms, Over};

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    fn all_covers() -> Vec<(String, Covering)> {
        let mut out = Vec::new();
        for (name, g) in fixtures::all() {
            let g = arc(g);
            let pi = g.vertex_group(ObjId(0)).unwrap().group;
            for h in pi.subgroups().unwrap() {
                let c = covering_from_subgroup(g.clone(), ObjId(0), &h).unwrap();
                out.push((format!("{name}/{:?}", h.elements()), c.covering));
            }
        }
        out
    }

    /// Brute force: all automorphisms of the total groupoid over the base.
    fn brute_cov(p: &Covering) -> usize {
        enumerate_morphisms(
            p.total(),
            p.total(),
            Some(Over {
                source_map: p.morphism(),
                target_map: p.morphism(),
            }),
            100_000,
        )
        .unwrap()
        .into_iter()
        .filter(|h| h.is_isomorphism())
        .count()
    }

    #[test]
    fn enumeration_is_complete() {
        for (name, p) in all_covers() {
            let cov = covering_transformations(&p).unwrap();
            assert_eq!(cov.order(), brute_cov(&p), "{name}");
        }
    }

    #[test]
    fn cov_orders() {
        let c4 = arc(fixtures::c4());
        let u = universal_cover(c4.clone(), ObjId(0)).unwrap().covering;
        let cov = covering_transformations(&u).unwrap();
        assert_eq!(cov.order(), 4);
        assert!(cov.group.find_isomorphism(&FiniteGroup::cyclic(4)).is_some());
        assert_eq!(trivial_cov(c4).unwrap().order(), 1);

        let s3 = arc(fixtures::s3());
        let g = FiniteGroup::symmetric(3);
        let t = g.generated_subgroup(&[g.element_by_label("(12)").unwrap()]).unwrap();
        let p = covering_from_subgroup(s3.clone(), ObjId(0), &t).unwrap().covering;
        assert_eq!(covering_transformations(&p).unwrap().order(), 1);
        assert!(!is_regular(&p).unwrap());
        let u = universal_cover(s3, ObjId(0)).unwrap().covering;
        let cov = covering_transformations(&u).unwrap();
        assert!(cov.group.find_isomorphism(&g).is_some());
    }

    #[test]
    fn transformations_are_free_and_determined_by_one_value() {
        for (name, p) in all_covers() {
            let cov = covering_transformations(&p).unwrap();
            for h in cov.transformations.iter().skip(1) {
                for x in p.total().objects() {
                    assert_ne!(h.map_object(x), x, "{name}");
                }
            }
            for (i, a) in cov.transformations.iter().enumerate() {
                for (j, b) in cov.transformations.iter().enumerate() {
                    for x in p.total().objects() {
                        if a.map_object(x) == b.map_object(x) {
                            assert_eq!(i, j);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normalizer_index_and_regularity() {
        for (name, p) in all_covers() {
            let iso = cov_normalizer_iso(&p, ObjId(0)).unwrap();
            assert_eq!(
                iso.cov.order(),
                iso.normalizer.order() / iso.pushforward.order(),
                "{name}"
            );
            if is_regular(&p).unwrap() {
                assert_eq!(iso.cov.order(), p.fold().unwrap());
                assert!(principal_action_check(&p).unwrap());
            } else {
                assert_eq!(principal_action_check(&p).unwrap_err(), CoverError::NotRegular);
            }
        }
    }

    #[test]
    fn normalizer_iso_examples() {
        let s3 = arc(fixtures::s3());
        let g = FiniteGroup::symmetric(3);
        let a3 = g.generated_subgroup(&[g.element_by_label("(123)").unwrap()]).unwrap();
        let p = covering_from_subgroup(s3, ObjId(0), &a3).unwrap().covering;
        let iso = cov_normalizer_iso(&p, ObjId(0)).unwrap();
        assert_eq!(iso.quotient.group.order(), 2);
        assert_eq!(iso.cov.order(), 2);
    }

    #[test]
    fn induced_transformation_maps() {
        let c4 = arc(fixtures::c4());
        let u = universal_cover(c4.clone(), ObjId(0)).unwrap().covering;
        let cov = covering_transformations(&u).unwrap();
        // identity
        let id = GroupoidMorphism::identity(c4.clone());
        let idt = GroupoidMorphism::identity(u.total().clone());
        for h in &cov.transformations {
            let fh = induced_transformation_map(&id, &u, &u, &idt, h).unwrap();
            assert!(fh.same_maps(h));
        }
        // inversion
        let neg = GroupoidMorphism::new(
            c4.clone(),
            c4.clone(),
            vec![ObjId(0)],
            (0..4u32).map(|i| crate::groupoid::ArrId((4 - i) % 4)).collect(),
        )
        .unwrap();
        let neg_t = u
            .lift_morphism(&neg.after(u.morphism()).unwrap(), ObjId(0), ObjId(0))
            .unwrap()
            .unwrap();
        for (i, h) in cov.transformations.iter().enumerate() {
            let fh = induced_transformation_map(&neg, &u, &u, &neg_t, h).unwrap();
            let j = cov.element_of(&fh).unwrap();
            assert_eq!(j, cov.group.inverse(i));
        }
        // collapse to T1
        let t1 = arc(fixtures::t1());
        let ut = universal_cover(t1.clone(), ObjId(0)).unwrap().covering;
        let collapse = GroupoidMorphism::constant(c4.clone(), t1.clone(), ObjId(0));
        let ct = ut
            .lift_morphism(&collapse.after(u.morphism()).unwrap(), ObjId(0), ObjId(0))
            .unwrap()
            .unwrap();
        for h in &cov.transformations {
            let fh = induced_transformation_map(&collapse, &u, &ut, &ct, h).unwrap();
            assert!(fh.is_isomorphism() && fh.same_maps(&GroupoidMorphism::identity(ut.total().clone())));
        }
        // a map that does not cover f
        let bad = GroupoidMorphism::constant(u.total().clone(), u.total().clone(), ObjId(1));
        assert_eq!(
            induced_transformation_map(&id, &u, &u, &bad, &cov.transformations[0]).unwrap_err(),
            CoverError::DoesNotCover
        );
    }
}
