#![allow(dead_code)]

use std::collections::BTreeSet;

use groupoid_cover::{FiniteGroup, FiniteGroupoid, GroupoidMorphism};

/// Every subset closed under multiplication and containing the identity.
pub fn brute_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    assert!(n <= 16, "subset enumeration is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask & (1 << g.identity()) == 0 {
            continue;
        }
        let elems: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let closed = elems
            .iter()
            .all(|&a| elems.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0));
        if closed {
            out.insert(elems);
        }
    }
    out
}

/// Connected components by union-find over the arrows.
pub fn component_count(g: &FiniteGroupoid) -> usize {
    let mut parent: Vec<usize> = (0..g.object_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in g.arrows() {
        let (x, y) = (find(&mut parent, g.dom(a).index()), find(&mut parent, g.cod(a).index()));
        parent[x] = y;
    }
    (0..g.object_count()).filter(|&x| find(&mut parent, x) == x).count()
}

/// Stars by scanning every arrow: injective on each star, equal cardinalities.
pub fn naive_is_covering(m: &GroupoidMorphism) -> bool {
    let (s, t) = (m.source(), m.target());
    s.objects().all(|x| {
        let star: Vec<_> = s.arrows().filter(|&a| s.cod(a) == x).collect();
        let y = m.map_object(x);
        let target_star = t.arrows().filter(|&a| t.cod(a) == y).count();
        let images: BTreeSet<_> = star.iter().map(|&a| m.map_arrow(a)).collect();
        images.len() == star.len() && star.len() == target_star && images.iter().all(|&b| t.cod(b) == y)
    })
}
