//! Finite permutation groups with fully materialized element tables.
//!
//! Every group this crate touches is small (default cap 400 elements), so we
//! trade memory for simplicity: the whole element list, the multiplication
//! table and the inverse table are built once at closure time. Subgroups are
//! bitsets over element indices and all structural computations run on the
//! index tables, never on the permutations themselves.

use crate::bitset::ElemSet;
use crate::perm::Perm;
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Index of an element in a group's element table.
pub type ElemId = u16;

/// Default ceiling on group order during closure.
pub const DEFAULT_ORDER_CAP: usize = 400;

/// A finite permutation group with closed element table.
///
/// Element 0 is always the identity; the element ordering is the
/// breadth-first closure order from the identity with the generator list
/// fixed, so two constructions from the same generators agree index by
/// index.
pub struct Group {
    name: String,
    degree: usize,
    perms: Vec<Perm>,
    index: HashMap<Perm, ElemId>,
    mul: Vec<ElemId>,
    inv: Vec<ElemId>,
    elem_order: Vec<u32>,
    generators: Vec<ElemId>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn perm(&self, e: ElemId) -> &Perm {
        &self.perms[e as usize]
    }

    /// Generator indices in the order they were supplied.
    pub fn generators(&self) -> &[ElemId] {
        &self.generators
    }

    pub fn index_of(&self, p: &Perm) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul[a as usize * self.perms.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: ElemId, x: ElemId) -> ElemId {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn elem_order(&self, e: ElemId) -> u32 {
        self.elem_order[e as usize]
    }

    /// Conjugacy classes of elements; classes sorted by smallest member,
    /// members ascending. Class 0 is always `{identity}`.
    pub fn element_classes(&self) -> Vec<Vec<ElemId>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<ElemId>> = Vec::new();
        for start in 0..n as ElemId {
            if class_of[start as usize] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start as usize] = id;
            let mut queue = vec![start];
            while let Some(x) = queue.pop() {
                for g in 0..n as ElemId {
                    let y = self.conj(g, x);
                    if class_of[y as usize] == usize::MAX {
                        class_of[y as usize] = id;
                        members.push(y);
                        queue.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut mask = ElemSet::empty(self.order());
        mask.insert(0);
        Subgroup { mask }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            mask: ElemSet::full(self.order()),
        }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {}, degree {})", self.name, self.order(), self.degree)
    }
}

/// A subgroup of some ambient [`Group`], stored as a membership bitset over
/// the ambient element table. The ambient group is carried by context, not
/// by the value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    mask: ElemSet,
}

impl Subgroup {
    pub fn from_mask(mask: ElemSet) -> Subgroup {
        Subgroup { mask }
    }

    pub fn mask(&self) -> &ElemSet {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.mask.count()
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.mask.contains(e as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.mask.iter().map(|i| i as ElemId)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

/// Closes a generator list into a full [`Group`] under the default order cap.
pub fn close_generators(degree: usize, generators: &[Perm]) -> Result<Group> {
    close_generators_capped(degree, generators, DEFAULT_ORDER_CAP)
}

/// Closes a generator list into a full [`Group`] under an explicit order cap.
pub fn close_generators_capped(degree: usize, generators: &[Perm], cap: usize) -> Result<Group> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::InvalidPermutation {
                degree,
                reason: format!("generator has degree {}", g.degree()),
            });
        }
    }

    // Breadth-first closure from the identity; right-multiplying by the
    // generators in their given order keeps the element indexing
    // deterministic.
    let mut perms: Vec<Perm> = vec![Perm::identity(degree)];
    let mut index: HashMap<Perm, ElemId> = HashMap::new();
    index.insert(perms[0].clone(), 0);
    let mut cursor = 0;
    while cursor < perms.len() {
        for g in generators {
            let next = g.compose(&perms[cursor]);
            if !index.contains_key(&next) {
                if perms.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.insert(next.clone(), perms.len() as ElemId);
                perms.push(next);
            }
        }
        cursor += 1;
    }

    let n = perms.len();
    let mut mul = vec![0 as ElemId; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = perms[a].compose(&perms[b]);
            mul[a * n + b] = index[&p];
        }
    }
    let mut inv = vec![0 as ElemId; n];
    for a in 0..n {
        inv[a] = index[&perms[a].inverse()];
    }
    let elem_order = perms.iter().map(|p| p.order()).collect();
    let generators = generators.iter().map(|g| index[g]).collect();

    Ok(Group {
        name: String::new(),
        degree,
        perms,
        index,
        mul,
        inv,
        elem_order,
        generators,
    })
}

/// The subgroup generated by the given element indices.
pub fn generated_subgroup(g: &Group, gens: &[ElemId]) -> Subgroup {
    let mut mask = ElemSet::empty(g.order());
    mask.insert(0);
    let mut members: Vec<ElemId> = vec![0];
    let mut cursor = 0;
    while cursor < members.len() {
        let x = members[cursor];
        for &gen in gens {
            let y = g.mul(x, gen);
            if !mask.contains(y as usize) {
                mask.insert(y as usize);
                members.push(y);
            }
        }
        cursor += 1;
    }
    Subgroup { mask }
}

/// Centralizer `{g : gs = sg for all s in S}`.
pub fn centralizer(g: &Group, s: &Subgroup) -> Subgroup {
    let mut mask = ElemSet::empty(g.order());
    'outer: for c in 0..g.order() as ElemId {
        for x in s.elements() {
            if g.mul(c, x) != g.mul(x, c) {
                continue 'outer;
            }
        }
        mask.insert(c as usize);
    }
    Subgroup { mask }
}

/// Normalizer `{g : gSg⁻¹ = S}`.
pub fn normalizer(g: &Group, s: &Subgroup) -> Subgroup {
    let mut mask = ElemSet::empty(g.order());
    'outer: for c in 0..g.order() as ElemId {
        for x in s.elements() {
            if !s.contains(g.conj(c, x)) {
                continue 'outer;
            }
        }
        mask.insert(c as usize);
    }
    Subgroup { mask }
}

pub fn center(g: &Group) -> Subgroup {
    centralizer(g, &g.full_subgroup())
}

/// Conjugate of a subgroup: `gSg⁻¹`.
pub fn conjugate_subgroup(g: &Group, s: &Subgroup, by: ElemId) -> Subgroup {
    let mut mask = ElemSet::empty(g.order());
    for x in s.elements() {
        mask.insert(g.conj(by, x) as usize);
    }
    Subgroup { mask }
}

pub fn is_normal(g: &Group, s: &Subgroup) -> bool {
    (0..g.order() as ElemId).all(|c| {
        s.elements().all(|x| s.contains(g.conj(c, x)))
    })
}

/// Subgroup generated by all commutators `[a, b]` with `a ∈ A`, `b ∈ B`.
pub fn commutator_subgroup(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens: Vec<ElemId> = Vec::new();
    let mut seen = ElemSet::empty(g.order());
    for x in a.elements() {
        for y in b.elements() {
            let c = g.commutator(x, y);
            if !seen.contains(c as usize) {
                seen.insert(c as usize);
                gens.push(c);
            }
        }
    }
    generated_subgroup(g, &gens)
}

/// All normal subgroups, enumerated directly from conjugacy classes: every
/// normal subgroup is a join of normal closures of element classes, so the
/// join fixpoint over those closures is complete. Sorted by (order, mask).
pub fn normal_subgroups_direct(g: &Group) -> Vec<Subgroup> {
    let classes = g.element_classes();
    // Normal closure of each class, with the class itself as generator list.
    let mut found: Vec<(Subgroup, Vec<ElemId>)> = Vec::new();
    let mut known: HashMap<ElemSet, usize> = HashMap::new();
    let trivial = g.trivial_subgroup();
    known.insert(trivial.mask().clone(), 0);
    found.push((trivial, Vec::new()));
    for class in &classes {
        let sub = generated_subgroup(g, class);
        if !known.contains_key(sub.mask()) {
            known.insert(sub.mask().clone(), found.len());
            found.push((sub, class.clone()));
        }
    }
    // Join fixpoint.
    let mut i = 0;
    while i < found.len() {
        for j in 0..found.len() {
            if i == j {
                continue;
            }
            if found[j].0.mask().is_subset(found[i].0.mask()) {
                continue;
            }
            let gens: Vec<ElemId> = found[i].1.iter().chain(found[j].1.iter()).copied().collect();
            let join = generated_subgroup(g, &gens);
            if !known.contains_key(join.mask()) {
                known.insert(join.mask().clone(), found.len());
                found.push((join, gens));
            }
        }
        i += 1;
    }
    let mut subs: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.mask().cmp(b.mask())));
    subs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> Group {
        let c = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        close_generators(5, &[c, t]).unwrap()
    }

    fn a5() -> Group {
        let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        close_generators(5, &[a, b]).unwrap()
    }

    /// Independent closure oracle: saturate under all pairwise products.
    fn naive_closure_order(degree: usize, gens: &[Perm]) -> usize {
        let mut elems: Vec<Perm> = vec![Perm::identity(degree)];
        for g in gens {
            if !elems.contains(g) {
                elems.push(g.clone());
            }
        }
        loop {
            let mut added = false;
            let snapshot = elems.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let p = a.compose(b);
                    if !elems.contains(&p) {
                        elems.push(p);
                        added = true;
                    }
                }
            }
            if !added {
                return elems.len();
            }
        }
    }

    #[test]
    fn cyclic_closure() {
        let c = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let g = close_generators(3, &[c]).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.perm(0).is_identity());
    }

    #[test]
    fn s5_closure_matches_naive_oracle() {
        let c = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        assert_eq!(naive_closure_order(5, &[c, t]), 120);
        assert_eq!(s5().order(), 120);
    }

    #[test]
    fn empty_generating_set_gives_trivial_group() {
        let g = close_generators(1, &[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let c = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        match close_generators_capped(5, &[c, t], 100) {
            Err(Error::CapExceeded { cap: 100 }) => {}
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn multiplication_table_consistent() {
        let g = s5();
        for a in (0..g.order() as ElemId).step_by(17) {
            for b in (0..g.order() as ElemId).step_by(13) {
                let expect = g.perm(a).compose(g.perm(b));
                assert_eq!(g.perm(g.mul(a, b)), &expect);
            }
        }
    }

    #[test]
    fn reclosing_element_table_is_idempotent() {
        let g = s5();
        let all: Vec<Perm> = (0..g.order() as ElemId).map(|e| g.perm(e).clone()).collect();
        let re = close_generators(5, &all).unwrap();
        assert_eq!(re.order(), g.order());
    }

    /// Brute-force commutation scan, independent of `centralizer`.
    fn centralizer_oracle(g: &Group, s: &Subgroup) -> Vec<ElemId> {
        (0..g.order() as ElemId)
            .filter(|&c| s.elements().all(|x| g.mul(c, x) == g.mul(x, c)))
            .collect()
    }

    #[test]
    fn centralizer_of_trivial_is_everything() {
        let g = s5();
        assert_eq!(centralizer(&g, &g.trivial_subgroup()).order(), 120);
    }

    #[test]
    fn centralizer_of_a5_inside_s5_is_trivial() {
        let g = s5();
        // A5 = elements that are even; carve it out as the squares' closure.
        let squares: Vec<ElemId> = (0..g.order() as ElemId).map(|e| g.mul(e, e)).collect();
        let a5 = generated_subgroup(&g, &squares);
        assert_eq!(a5.order(), 60);
        let c = centralizer(&g, &a5);
        assert_eq!(c.order(), 1);
        assert_eq!(centralizer_oracle(&g, &a5).len(), 1);
    }

    #[test]
    fn normalizer_examples() {
        // S3: an order-2 subgroup is self-normalizing.
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let s3 = close_generators(3, &[c3, t]).unwrap();
        let t_id = s3.index_of(&Perm::from_cycles(3, &[vec![0, 1]]).unwrap()).unwrap();
        let c2 = generated_subgroup(&s3, &[t_id]);
        assert_eq!(c2.order(), 2);
        let n = normalizer(&s3, &c2);
        assert_eq!(n, c2);
        assert_eq!(normalizer(&s3, &s3.full_subgroup()), s3.full_subgroup());

        // Brute conjugation scan agrees.
        let oracle: Vec<ElemId> = (0..s3.order() as ElemId)
            .filter(|&c| c2.elements().all(|x| c2.contains(s3.conj(c, x))))
            .collect();
        assert_eq!(oracle.len(), 2);
    }

    #[test]
    fn normal_subgroups_direct_of_s5() {
        let g = s5();
        let normals = normal_subgroups_direct(&g);
        let orders: Vec<usize> = normals.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 60, 120]);
        for n in &normals {
            assert!(is_normal(&g, n));
        }
    }

    #[test]
    fn normal_subgroups_direct_of_a5_show_simplicity() {
        let g = a5();
        let orders: Vec<usize> = normal_subgroups_direct(&g).iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 60]);
    }

    #[test]
    fn element_classes_of_s3() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let s3 = close_generators(3, &[c3, t]).unwrap();
        let mut sizes: Vec<usize> = s3.element_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }
}
