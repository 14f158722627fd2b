//! Multiplication-table groups and their subgroup machinery.
//!
//! Elements are dense indices `0..order`. Cosets are right cosets `Hg`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::GroupError;

/// Default largest group order accepted by [`FiniteGroup::subgroups`].
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

/// A subgroup, stored as its sorted element list. The parent group is the one
/// the subgroup was produced by; operations take it explicitly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    /// Canonical sort key: order first, then elements.
    pub fn sort_key(&self) -> (usize, &[usize]) {
        (self.elements.len(), &self.elements)
    }

    fn from_set(set: BTreeSet<usize>) -> Self {
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }
}

/// The quotient `G/H` together with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: FiniteGroup,
    /// Coset `i` of the quotient, as a sorted element list.
    pub cosets: Vec<Vec<usize>>,
    /// `coset_of[g]` is the quotient element containing `g`.
    pub coset_of: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table `table[a * n + b] = a·b`, checking
    /// the group axioms.
    pub fn from_table(n: usize, table: Vec<usize>, labels: Vec<String>) -> Result<Self, GroupError> {
        if table.len() != n * n || labels.len() != n {
            return Err(GroupError::BadTable(n));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(GroupError::OutOfRange);
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("{} has no inverse", labels[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            labels,
        })
    }

    /// Builds a group from a multiplication function.
    pub fn from_fn<F>(n: usize, labels: Vec<String>, mut mul: F) -> Result<Self, GroupError>
    where
        F: FnMut(usize, usize) -> usize,
    {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b));
            }
        }
        Self::from_table(n, table, labels)
    }

    /// Integers mod `n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn(n, labels, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// All permutations of `{1..=n}`, composed as functions: `(σ·τ)(i) = σ(τ(i))`.
    /// Elements are listed in lexicographic order of their images, so element
    /// 0 is the identity. Labels use cycle notation.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_fn(perms.len(), labels, |a, b| {
            let composed: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index(&composed)
        })
        .expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g⁻¹ h g`.
    pub fn conjugate_element(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse(g), h), g)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: self.elements().collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    /// Checks that `elements` is a subgroup and returns it canonically sorted.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        if let Some(&bad) = elements.iter().find(|&&g| g >= self.order) {
            return Err(GroupError::UnknownElement(bad));
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        let closed = set.contains(&self.identity)
            && set.iter().all(|&a| {
                set.contains(&self.inverse(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            });
        if closed {
            Ok(Subgroup::from_set(set))
        } else {
            Err(GroupError::NotASubgroup)
        }
    }

    /// The least subgroup containing `generators`.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Result<Subgroup, GroupError> {
        if let Some(&bad) = generators.iter().find(|&&g| g >= self.order) {
            return Err(GroupError::UnknownElement(bad));
        }
        let mut set = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        // in a finite group, closing under right multiplication by generators suffices
        while let Some(x) = queue.pop_front() {
            for &s in generators {
                let y = self.mul(x, s);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup::from_set(set))
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup {
            elements: a
                .elements
                .iter()
                .copied()
                .filter(|&g| b.contains(g))
                .collect(),
        }
    }

    /// `⟨a ∪ b⟩`.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = a.elements.iter().chain(&b.elements).copied().collect();
        self.generated_subgroup(&gens).expect("elements of subgroups")
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup::from_set(
            h.elements
                .iter()
                .map(|&x| self.conjugate_element(x, g))
                .collect(),
        )
    }

    /// All subgroups, sorted by `(order, elements)`, using the default bound.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        self.subgroups_bounded(DEFAULT_SUBGROUP_BOUND)
    }

    /// All subgroups. Every subgroup is a join of cyclic subgroups, so the
    /// search starts from the cyclic ones and closes under joins with them.
    pub fn subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>, GroupError> {
        if self.order > bound {
            return Err(GroupError::BoundExceeded {
                order: self.order,
                bound,
            });
        }
        let cyclic: BTreeSet<Subgroup> = self
            .elements()
            .map(|g| self.generated_subgroup(&[g]).expect("element"))
            .collect();
        let mut found: BTreeSet<Subgroup> = cyclic.clone();
        let mut queue: VecDeque<Subgroup> = cyclic.iter().cloned().collect();
        while let Some(s) = queue.pop_front() {
            for c in &cyclic {
                if c.is_subset_of(&s) {
                    continue;
                }
                let j = self.join(&s, c);
                if !found.contains(&j) {
                    found.insert(j.clone());
                    queue.push_back(j);
                }
            }
        }
        let mut list: Vec<Subgroup> = found.into_iter().collect();
        list.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok(list)
    }

    /// The largest subgroup in which `h` is normal.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self
                .elements()
                .filter(|&g| &self.conjugate(h, g) == h)
                .collect(),
        }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| &self.conjugate(h, g) == h)
    }

    /// Right cosets `Hg`, each sorted, ordered by least element.
    pub fn right_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut cosets = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = h.elements.iter().map(|&x| self.mul(x, g)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    pub fn index(&self, h: &Subgroup) -> usize {
        self.order / h.order()
    }

    /// `G/H` for normal `H`, multiplying cosets by representatives.
    pub fn quotient(&self, h: &Subgroup) -> Result<QuotientGroup, GroupError> {
        if !self.is_normal(h) {
            return Err(GroupError::NotNormal);
        }
        let cosets = self.right_cosets(h);
        let mut coset_of = vec![0; self.order];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let labels = cosets
            .iter()
            .map(|c| format!("H{}", self.label(c[0])))
            .collect();
        let group = FiniteGroup::from_fn(cosets.len(), labels, |a, b| {
            coset_of[self.mul(cosets[a][0], cosets[b][0])]
        })?;
        Ok(QuotientGroup {
            group,
            cosets,
            coset_of,
        })
    }

    /// The subgroup `h` viewed as a group in its own right; element `i` is
    /// `h.elements()[i]`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> FiniteGroup {
        let pos = |g: usize| h.elements.binary_search(&g).expect("closed");
        let labels = h.elements.iter().map(|&g| self.labels[g].clone()).collect();
        FiniteGroup::from_fn(h.order(), labels, |a, b| {
            pos(self.mul(h.elements[a], h.elements[b]))
        })
        .expect("subgroup")
    }

    /// Whether `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| x < target.order)
            && self.elements().all(|a| {
                self.elements()
                    .all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    pub fn is_isomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        if self.order != target.order || !self.is_homomorphism(target, map) {
            return false;
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        image.len() == self.order
    }

    /// Searches for any isomorphism `self → other` by backtracking over images
    /// of a generating set. Meant for small groups.
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order != other.order {
            return None;
        }
        // greedy generating set
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for g in self.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = self.generated_subgroup(&gens).ok()?;
            }
        }
        let mut images = vec![0; gens.len()];
        self.search_iso(other, &gens, &mut images, 0)
    }

    fn search_iso(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        depth: usize,
    ) -> Option<Vec<usize>> {
        if depth == gens.len() {
            let map = self.extend_from_generators(other, gens, images)?;
            return self.is_isomorphism(other, &map).then_some(map);
        }
        for cand in other.elements() {
            if other.element_order(cand) != self.element_order(gens[depth]) {
                continue;
            }
            images[depth] = cand;
            if let Some(m) = self.search_iso(other, gens, images, depth + 1) {
                return Some(m);
            }
        }
        None
    }

    fn extend_from_generators(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in gens.iter().zip(images) {
                let y = self.mul(x, s);
                let img = other.mul(map[x], t);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        Some(map)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        s.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            s.push_str(&(i + 1).to_string());
            i = p[i];
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: test every subset for closure. Only viable for tiny groups.
    fn brute_force_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
        let n = g.order();
        let mut out: Vec<Subgroup> = (0u32..(1 << n))
            .filter_map(|mask| {
                let elems: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                g.subgroup(&elems).ok()
            })
            .collect();
        out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        out
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3)
    }

    fn el(g: &FiniteGroup, label: &str) -> usize {
        g.element_by_label(label).unwrap()
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        let trivial = FiniteGroup::cyclic(1);
        assert_eq!(trivial.subgroups().unwrap(), vec![trivial.trivial()]);

        let c4 = FiniteGroup::cyclic(4);
        let subs = c4.subgroups().unwrap();
        assert_eq!(subs, brute_force_subgroups(&c4));
        assert_eq!(subs.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 2, 4]);

        let g = s3();
        let subs = g.subgroups().unwrap();
        assert_eq!(subs, brute_force_subgroups(&g));
        assert_eq!(
            subs.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 2, 2, 2, 3, 6]
        );
    }

    #[test]
    fn bound_is_enforced() {
        let g = FiniteGroup::cyclic(70);
        assert_eq!(
            g.subgroups(),
            Err(GroupError::BoundExceeded { order: 70, bound: 64 })
        );
        assert_eq!(g.subgroups_bounded(80).unwrap().len(), 8);
    }

    #[test]
    fn normality_and_normalizers() {
        let c4 = FiniteGroup::cyclic(4);
        for h in c4.subgroups().unwrap() {
            assert!(c4.is_normal(&h));
        }
        let g = s3();
        let t = g.generated_subgroup(&[el(&g, "(12)")]).unwrap();
        assert!(!g.is_normal(&t));
        assert_eq!(g.normalizer(&t), t);
        let a3 = g.generated_subgroup(&[el(&g, "(123)")]).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(g.is_normal(&a3));
        assert_eq!(g.normalizer(&a3), g.whole());
    }

    #[test]
    fn cosets_and_quotients() {
        let c4 = FiniteGroup::cyclic(4);
        let whole = c4.whole();
        assert_eq!(c4.right_cosets(&whole).len(), 1);
        assert_eq!(c4.quotient(&whole).unwrap().group.order(), 1);

        let h = c4.subgroup(&[0, 2]).unwrap();
        assert_eq!(c4.index(&h), 2);
        assert_eq!(c4.right_cosets(&h), vec![vec![0, 2], vec![1, 3]]);
        let q = c4.quotient(&h).unwrap();
        assert_eq!(q.group.order(), 2);
        assert!(q.group.find_isomorphism(&FiniteGroup::cyclic(2)).is_some());

        let g = s3();
        let a3 = g.generated_subgroup(&[el(&g, "(123)")]).unwrap();
        assert_eq!(g.quotient(&a3).unwrap().group.order(), 2);
        let t = g.generated_subgroup(&[el(&g, "(12)")]).unwrap();
        assert_eq!(g.quotient(&t).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn generated_subgroups() {
        let c4 = FiniteGroup::cyclic(4);
        assert_eq!(c4.generated_subgroup(&[]).unwrap(), c4.trivial());
        assert_eq!(c4.generated_subgroup(&[1]).unwrap(), c4.whole());
        let g = s3();
        assert_eq!(
            g.generated_subgroup(&[el(&g, "(12)"), el(&g, "(123)")]).unwrap(),
            g.whole()
        );
    }

    #[test]
    fn symmetric_labels_and_identity() {
        let g = s3();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.label(0), "()");
        let mut labels: Vec<&str> = g.labels().iter().map(String::as_str).collect();
        labels.sort();
        assert_eq!(labels, vec!["()", "(12)", "(123)", "(13)", "(132)", "(23)"]);
        assert!(!g.is_abelian());
    }

    #[test]
    fn non_group_tables_are_rejected() {
        // constant table has no identity
        assert!(FiniteGroup::from_table(2, vec![0, 0, 0, 0], vec!["a".into(), "b".into()]).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1], vec!["a".into(), "b".into()]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lagrange_and_lattice_closure(n in 1usize..=12, use_s3 in any::<bool>()) {
                let g = if use_s3 { FiniteGroup::symmetric(3) } else { FiniteGroup::cyclic(n) };
                let subs = g.subgroups().unwrap();
                for h in &subs {
                    prop_assert_eq!(g.order() % h.order(), 0);
                    prop_assert_eq!(g.index(h) * h.order(), g.order());
                    let nh = g.normalizer(h);
                    prop_assert!(h.is_subset_of(&nh));
                    let inner = g.subgroup_as_group(&nh);
                    let pos: Vec<usize> = h.elements().iter().map(|&x| nh.elements().binary_search(&x).unwrap()).collect();
                    prop_assert!(inner.is_normal(&inner.subgroup(&pos).unwrap()));
                    for k in &subs {
                        prop_assert!(subs.contains(&g.intersection(h, k)));
                        prop_assert!(subs.contains(&g.join(h, k)));
                    }
                }
            }
        }
    }
}
