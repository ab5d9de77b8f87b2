//! Subgroup lattice enumeration, conjugacy classes of subgroups and
//! permutability of subgroup pairs.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: BitSet,
    size: usize,
}

impl Subgroup {
    pub fn from_members(members: BitSet) -> Self {
        let size = members.count();
        Subgroup { members, size }
    }

    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        Subgroup::from_members(g.closure(gens))
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.size <= other.size && self.members.is_subset(&other.members)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    order: usize,
    subgroups: Vec<Subgroup>,
    normal: Vec<bool>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    index: HashMap<BitSet, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeEntry {
    pub size: usize,
    pub members: Vec<usize>,
    pub normal: bool,
    pub class_id: usize,
}

impl SubgroupLattice {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_count(&self) -> usize {
        self.normal.iter().filter(|&&n| n).count()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn index_of(&self, members: &BitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Indices of the subgroups contained in subgroup `i` (its own lattice).
    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let h = &self.subgroups[i];
        (0..=i).filter(move |&j| self.subgroups[j].is_subgroup_of(h))
    }

    /// Number of conjugacy classes of non-normal subgroups.
    pub fn gamma(&self) -> usize {
        self.classes.iter().filter(|c| c.len() >= 2).count()
    }

    /// Whether subgroups `i` and `j` permute, using normality as a shortcut.
    pub fn permutes(&self, g: &FiniteGroup, i: usize, j: usize) -> bool {
        if self.normal[i] || self.normal[j] {
            return true;
        }
        permutes(g, &self.subgroups[i], &self.subgroups[j])
    }

    /// `|C(H_i)|`: how many subgroups permute with subgroup `i`.
    pub fn permuting_count(&self, g: &FiniteGroup, i: usize) -> usize {
        if self.normal[i] {
            return self.len();
        }
        (0..self.len()).filter(|&j| self.permutes(g, i, j)).count()
    }

    pub fn dump(&self) -> Vec<LatticeEntry> {
        self.subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| LatticeEntry {
                size: h.size,
                members: h.members.to_vec(),
                normal: self.normal[i],
                class_id: self.class_of[i],
            })
            .collect()
    }
}

/// `{h·k : h ∈ H, k ∈ K}`
pub fn product_set(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> BitSet {
    let mut out = BitSet::new(g.order());
    let ks: Vec<usize> = k.elements().collect();
    for x in h.elements() {
        let row = g.row(x);
        for &y in &ks {
            out.insert(row[y] as usize);
        }
    }
    out
}

/// `HK = KH`, computed literally from both product sets.
pub fn permutes_by_definition(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> bool {
    product_set(g, h, k) == product_set(g, k, h)
}

/// `HK = KH`, with containment and Lagrange shortcuts.
pub fn permutes(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> bool {
    if h.is_subgroup_of(k) || k.is_subgroup_of(h) {
        return true;
    }
    let meet = h.members.intersection_count(&k.members);
    let hk_size = h.size * k.size / meet;
    // HK = KH iff HK is a subgroup, whose order must divide |G|.
    if !g.order().is_multiple_of(hk_size) {
        return false;
    }
    if hk_size == g.order() {
        return true;
    }
    let hk = product_set(g, h, k);
    let hs: Vec<usize> = h.elements().collect();
    // |KH| = |HK|, so KH ⊆ HK suffices
    k.elements()
        .all(|y| hs.iter().all(|&x| hk.contains(g.mul(y, x))))
}

/// Greedy generating set of `g`.
fn generators(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = g.closure(&[]);
    for x in (1..g.order()).rev() {
        if !span.contains(x) {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

/// Largest proper divisor of `n` (0 for n = 1).
fn largest_proper_divisor(n: usize) -> usize {
    (2..=n).find(|p| n.is_multiple_of(*p)).map_or(0, |p| n / p)
}

/// `⟨H, x⟩` by closing a union of left cosets of `H` under right
/// multiplication by `x`.
fn join_with(g: &FiniteGroup, h: &Subgroup, hs: &[usize], x: usize, bound: usize) -> BitSet {
    let mut k = h.members.clone();
    let mut count = h.size;
    let mut pending: Vec<usize> = hs.iter().map(|&z| g.mul(z, x)).collect();
    while let Some(y) = pending.pop() {
        if k.contains(y) {
            continue;
        }
        let row = g.row(y);
        for &z in hs {
            let w = row[z] as usize;
            k.insert(w);
            pending.push(g.mul(w, x));
        }
        count += hs.len();
        if count > bound {
            return BitSet::full(g.order());
        }
    }
    k
}

pub fn all_subgroups(g: &FiniteGroup) -> Result<SubgroupLattice> {
    all_subgroups_capped(g, DEFAULT_ORDER_CAP)
}

/// Every subgroup is a join of cyclic subgroups, so closing the set of cyclic
/// subgroups under joins with cyclic subgroups reaches the whole lattice.
pub fn all_subgroups_capped(g: &FiniteGroup, cap: usize) -> Result<SubgroupLattice> {
    let n = g.order();
    if n > cap {
        return Err(Error::OrderCapExceeded { order: n, cap });
    }
    let bound = largest_proper_divisor(n);

    let mut found: HashMap<BitSet, usize> = HashMap::new();
    let mut subs: Vec<Subgroup> = Vec::new();
    let mut cyclic_gens: Vec<usize> = Vec::new();
    for x in 0..n {
        let c = Subgroup::generated(g, &[x]);
        if !found.contains_key(&c.members) {
            found.insert(c.members.clone(), subs.len());
            subs.push(c);
            cyclic_gens.push(x);
        }
    }
    let cyclic_count = subs.len();

    let mut next = 0;
    while next < subs.len() {
        let h = subs[next].clone();
        let first = if next < cyclic_count { next + 1 } else { 0 };
        next += 1;
        if h.size == n {
            continue;
        }
        let hs: Vec<usize> = h.elements().collect();
        for &x in &cyclic_gens[first..] {
            if h.contains(x) {
                continue;
            }
            let k = join_with(g, &h, &hs, x, bound);
            if !found.contains_key(&k) {
                found.insert(k.clone(), subs.len());
                subs.push(Subgroup::from_members(k));
            }
        }
    }

    subs.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| a.members.cmp(&b.members)));
    let index: HashMap<BitSet, usize> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.members.clone(), i))
        .collect();

    let gens = generators(g);
    let mut class_of = vec![usize::MAX; subs.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subs.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[i] = id;
        let mut class = vec![i];
        let mut frontier = vec![i];
        while let Some(j) = frontier.pop() {
            for &s in &gens {
                let conj = BitSet::from_indices(n, subs[j].elements().map(|x| g.conjugate(x, s)));
                let c = index[&conj];
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    class.push(c);
                    frontier.push(c);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    let normal = class_of.iter().map(|&c| classes[c].len() == 1).collect();

    Ok(SubgroupLattice {
        order: n,
        subgroups: subs,
        normal,
        classes,
        class_of,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::group::cyclic;

    fn build(s: &str) -> FiniteGroup {
        s.parse::<FamilySpec>().unwrap().build().unwrap()
    }

    fn is_closed(g: &FiniteGroup, h: &Subgroup) -> bool {
        h.contains(0)
            && h.elements().all(|x| h.contains(g.inv(x)))
            && h.elements().all(|x| h.elements().all(|y| h.contains(g.mul(x, y))))
    }

    /// Subsets closed under products, by exhaustive search (tiny groups only).
    fn brute_force_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        (0u32..1 << n)
            .filter(|mask| mask & 1 == 1)
            .filter(|mask| {
                let has = |x: usize| mask >> x & 1 == 1;
                (0..n).all(|a| !has(a) || (0..n).all(|b| !has(b) || has(g.mul(a, b))))
            })
            .count()
    }

    #[test]
    fn s3_lattice() {
        let g = build("D(6)");
        let l = all_subgroups(&g).unwrap();
        let sizes: Vec<usize> = l.subgroups().iter().map(|h| h.size()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(l.normal_count(), 3);
        assert_eq!(l.gamma(), 1);
    }

    #[test]
    fn counts_match_exhaustive_search() {
        for s in ["D(6)", "D(8)", "Q(8)", "A4", "Z(12)", "prod(Z(2),Z(4))", "D(10)", "prod(Z(2),prod(Z(2),Z(2)))"] {
            let g = build(s);
            let l = all_subgroups(&g).unwrap();
            assert_eq!(l.len(), brute_force_subgroup_count(&g), "{s}");
            for h in l.subgroups() {
                assert!(is_closed(&g, h));
                assert_eq!(g.order() % h.size(), 0);
            }
        }
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(all_subgroups(&build("D(12)")).unwrap().len(), 16);
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(all_subgroups(&cyclic(p).unwrap()).unwrap().len(), 2);
        }
        let t = all_subgroups(&cyclic(1).unwrap()).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.is_normal(0));
    }

    #[test]
    fn canonical_order_and_classes() {
        let g = build("A4");
        let l = all_subgroups(&g).unwrap();
        assert_eq!(l.subgroup(0).size(), 1);
        assert_eq!(l.subgroup(l.len() - 1).size(), 12);
        for w in l.subgroups().windows(2) {
            assert!((w[0].size(), w[0].members()) < (w[1].size(), w[1].members()));
        }
        let mut seen = vec![false; l.len()];
        for (id, class) in l.classes().iter().enumerate() {
            for &i in class {
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(l.class_of(i), id);
                assert_eq!(l.subgroup(i).size(), l.subgroup(class[0]).size());
                assert_eq!(l.is_normal(i), class.len() == 1);
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(l.gamma(), 2);
    }

    #[test]
    fn normality_matches_definition() {
        for s in ["D(8)", "Q(16)", "T22.6", "prod(D(6),Z(3))", "A4"] {
            let g = build(s);
            let l = all_subgroups(&g).unwrap();
            for (i, h) in l.subgroups().iter().enumerate() {
                let normal = (0..g.order())
                    .all(|x| h.elements().all(|y| h.contains(g.conjugate(y, x))));
                assert_eq!(l.is_normal(i), normal, "{s} subgroup {i}");
            }
        }
    }

    #[test]
    fn product_set_examples() {
        let g = build("D(6)");
        let l = all_subgroups(&g).unwrap();
        let trivial = l.subgroup(0);
        let k = l.subgroup(4);
        assert_eq!(&product_set(&g, trivial, k), k.members());
        assert_eq!(&product_set(&g, k, k), k.members());
        let (a, b) = (l.subgroup(1), l.subgroup(2));
        let ab = product_set(&g, a, b);
        assert_eq!(ab.count(), 4);
        assert!(l.index_of(&ab).is_none());
        assert!(!permutes(&g, a, b));
    }

    /// D8 as Z4 ⋊ Z2: r = (1,0) at index 2, s = (0,1) at index 1.
    #[test]
    fn d8_reflections() {
        let g = build("D(8)");
        let r = 2;
        let s = 1;
        let rs = g.mul(r, s);
        let r2s = g.mul(g.mul(r, r), s);
        let hs = Subgroup::generated(&g, &[s]);
        assert!(!permutes_by_definition(&g, &hs, &Subgroup::generated(&g, &[rs])));
        assert!(!permutes(&g, &hs, &Subgroup::generated(&g, &[rs])));
        assert!(permutes_by_definition(&g, &hs, &Subgroup::generated(&g, &[r2s])));
        let l = all_subgroups(&g).unwrap();
        let i = l.index_of(hs.members()).unwrap();
        assert_eq!(l.permuting_count(&g, i), 8);
        let whole = l.len() - 1;
        assert!(l.permutes(&g, i, whole));
    }

    #[test]
    fn permuting_counts_in_s3() {
        let g = build("D(6)");
        let l = all_subgroups(&g).unwrap();
        assert_eq!(l.permuting_count(&g, 1), 4);
        assert_eq!(l.permuting_count(&g, 4), 6);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(all_subgroups(&build("D(8)")).unwrap().gamma(), 2);
        assert_eq!(all_subgroups(&build("prod(D(6),Z(3))")).unwrap().gamma(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let g = cyclic(20).unwrap();
        assert!(matches!(
            all_subgroups_capped(&g, 10),
            Err(Error::OrderCapExceeded { order: 20, cap: 10 })
        ));
    }

    #[test]
    fn dump_lists_members() {
        let l = all_subgroups(&build("D(6)")).unwrap();
        let d = l.dump();
        assert_eq!(d.len(), 6);
        assert_eq!(d[0].members, vec![0]);
        assert!(d[0].normal);
        assert_eq!(d[5].members, (0..6).collect::<Vec<_>>());
    }
}
