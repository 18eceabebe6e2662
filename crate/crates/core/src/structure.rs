//! Structural predicates and constructions: derived and lower central
//! series, p-cores, hypo-elementarity, and quotient groups via the coset
//! action.

use crate::group::{
    centralizer, close_generators_capped, commutator_subgroup, conjugate_subgroup,
    generated_subgroup, normalizer, ElemId, Group, Subgroup,
};
use crate::perm::Perm;
use crate::{Error, Result};
use std::sync::Arc;

/// Derived series `G ⊇ G′ ⊇ G″ ⊇ …` until it stabilizes.
pub fn derived_series(g: &Group) -> Vec<Subgroup> {
    let mut series = vec![g.full_subgroup()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(g, last, last);
        if &next == last {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &Group) -> bool {
    derived_series(g).last().unwrap().is_trivial()
}

/// Lower central series `γ₁ = G`, `γ_{k+1} = [γ_k, G]` until it stabilizes.
pub fn lower_central_series(g: &Group) -> Vec<Subgroup> {
    let full = g.full_subgroup();
    let mut series = vec![full.clone()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(g, last, &full);
        if &next == last {
            return series;
        }
        series.push(next);
    }
}

pub fn is_nilpotent(g: &Group) -> bool {
    lower_central_series(g).last().unwrap().is_trivial()
}

pub fn is_cyclic(g: &Group) -> bool {
    let n = g.order() as u32;
    (0..g.order() as ElemId).any(|e| g.elem_order(e) == n)
}

pub fn is_abelian(g: &Group) -> bool {
    let n = g.order() as ElemId;
    (0..n).all(|a| (0..n).all(|b| g.mul(a, b) == g.mul(b, a)))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// One Sylow p-subgroup, grown by repeated normalizer extension: a proper
/// p-subgroup always has a strictly larger p-subgroup inside its normalizer.
pub fn sylow_subgroup(g: &Group, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut target = g.order();
    let mut p_part = 1usize;
    while target % p as usize == 0 {
        target /= p as usize;
        p_part *= p as usize;
    }

    let mut current = g.trivial_subgroup();
    let mut gens: Vec<ElemId> = Vec::new();
    while current.order() < p_part {
        let norm = normalizer(g, &current);
        let next = norm
            .elements()
            .find(|&x| !current.contains(x) && is_p_power(g.elem_order(x) as u64, p));
        let x = next.expect("proper p-subgroup must extend inside its normalizer");
        gens.push(x);
        current = generated_subgroup(g, &gens);
    }
    Ok(current)
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// `O_p(G)`: the largest normal p-subgroup, as the intersection of all
/// conjugates of one Sylow p-subgroup.
pub fn p_core(g: &Group, p: u64) -> Result<Subgroup> {
    let sylow = sylow_subgroup(g, p)?;
    let mut mask = sylow.mask().clone();
    for c in 1..g.order() as ElemId {
        let conj = conjugate_subgroup(g, &sylow, c);
        let mut inter = crate::bitset::ElemSet::empty(g.order());
        for x in conj.elements() {
            if mask.contains(x as usize) {
                inter.insert(x as usize);
            }
        }
        mask = inter;
        if mask.count() == 1 {
            break;
        }
    }
    Ok(Subgroup::from_mask(mask))
}

/// Is the quotient `G/N` cyclic? Checked on coset orders without
/// materializing the quotient: the order of `gN` is the least `k` with
/// `g^k ∈ N`.
fn quotient_is_cyclic(g: &Group, n: &Subgroup) -> bool {
    let index = g.order() / n.order();
    if index == 1 {
        return true;
    }
    'outer: for e in 0..g.order() as ElemId {
        let mut acc = e;
        let mut k = 1usize;
        while !n.contains(acc) {
            acc = g.mul(acc, e);
            k += 1;
            if k > index {
                continue 'outer;
            }
        }
        if k == index {
            return true;
        }
    }
    false
}

/// Cyclic modulo p: `G/O_p(G)` is cyclic.
pub fn is_p_hypo_elementary(g: &Group, p: u64) -> Result<bool> {
    let core = p_core(g, p)?;
    Ok(quotient_is_cyclic(g, &core))
}

/// Scans every prime dividing the order (plus plain cyclicity) and reports a
/// witness prime. A cyclic group is cyclic modulo any prime; the smallest
/// prime divisor is reported, with 2 standing in for the trivial group.
pub fn hypo_elementary_witness(g: &Group) -> (bool, Option<u64>) {
    let order = g.order() as u64;
    if is_cyclic(g) {
        let p = (2..=order).find(|&p| order % p == 0 && is_prime(p)).unwrap_or(2);
        return (true, Some(p));
    }
    for p in 2..=order {
        if order % p == 0 && is_prime(p) && is_p_hypo_elementary(g, p).unwrap_or(false) {
            return (true, Some(p));
        }
    }
    (false, None)
}

/// A quotient group `G/N` realized as the permutation action of `G` on the
/// left cosets of `N`, together with the element-level projection.
pub struct Quotient {
    pub group: Arc<Group>,
    /// `projection[x]` is the quotient element index of the coset `xN`.
    pub projection: Vec<ElemId>,
    pub kernel: Subgroup,
}

impl Quotient {
    /// Image in the quotient of a subgroup of the parent (as a set image;
    /// the result is a subgroup of `G/N` whenever `H` is one of `G`).
    pub fn image_of(&self, h: &Subgroup) -> Subgroup {
        let mut mask = crate::bitset::ElemSet::empty(self.group.order());
        for x in h.elements() {
            mask.insert(self.projection[x as usize] as usize);
        }
        Subgroup::from_mask(mask)
    }
}

/// Builds `G/N`. Errors with [`Error::NotNormal`] if `N` is not normal.
pub fn quotient(g: &Group, n: &Subgroup) -> Result<Quotient> {
    for c in g.generators() {
        if conjugate_subgroup(g, n, *c).mask() != n.mask() {
            return Err(Error::NotNormal);
        }
    }

    // Left cosets in first-element order; coset 0 is N itself.
    let order = g.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut reps: Vec<ElemId> = Vec::new();
    for e in 0..order as ElemId {
        if coset_of[e as usize] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for x in n.elements() {
            coset_of[g.mul(e, x) as usize] = id;
        }
    }
    let num_cosets = reps.len();
    debug_assert_eq!(num_cosets * n.order(), order);

    let action_of = |x: ElemId| -> Perm {
        let images: Vec<u16> = reps
            .iter()
            .map(|&r| coset_of[g.mul(x, r) as usize] as u16)
            .collect();
        Perm::from_images(images).expect("coset action is a permutation")
    };

    let gen_perms: Vec<Perm> = g.generators().iter().map(|&c| action_of(c)).collect();
    let mut q = close_generators_capped(num_cosets, &gen_perms, order.max(1))?;
    if q.order() != num_cosets {
        // Kernel of the coset action is the core of N; for normal N it is N
        // itself, so the action image must have full index.
        return Err(Error::NotNormal);
    }
    q.set_name(format!("{}/[{}]", g.name(), n.order()));
    let group = Arc::new(q);

    let projection: Vec<ElemId> = (0..order as ElemId)
        .map(|x| {
            group
                .index_of(&action_of(x))
                .expect("projection image must exist in quotient")
        })
        .collect();
    debug_assert!((0..order as ElemId).all(|x| (projection[x as usize] == 0) == n.contains(x)));

    Ok(Quotient {
        group,
        projection,
        kernel: n.clone(),
    })
}

/// Materializes a subgroup as a standalone group on the same points.
pub fn subgroup_as_group(g: &Group, s: &Subgroup, name: impl Into<String>) -> Group {
    let gens = greedy_generating_set_in(g, s);
    let gen_perms: Vec<Perm> = gens.iter().map(|&e| g.perm(e).clone()).collect();
    let mut out = close_generators_capped(g.degree(), &gen_perms, s.order().max(1))
        .expect("subgroup closure stays within its own order");
    debug_assert_eq!(out.order(), s.order());
    out.set_name(name.into());
    out
}

/// Small generating set of a subgroup, grown greedily: each step adds the
/// element that maximizes the generated order (ties to the smallest index).
/// Each step at least doubles the order, so the result has at most
/// `log₂ |S|` members.
pub fn greedy_generating_set_in(g: &Group, s: &Subgroup) -> Vec<ElemId> {
    let mut gens: Vec<ElemId> = Vec::new();
    let mut current = g.trivial_subgroup();
    while current != *s {
        let mut best: Option<(usize, ElemId)> = None;
        for x in s.elements() {
            if current.contains(x) {
                continue;
            }
            gens.push(x);
            let size = generated_subgroup(g, &gens).order();
            gens.pop();
            if best.map_or(true, |(bs, _)| size > bs) {
                best = Some((size, x));
            }
        }
        let (_, x) = best.expect("proper subgroup always extends");
        gens.push(x);
        current = generated_subgroup(g, &gens);
    }
    gens
}

/// Greedy generating set of the whole group.
pub fn greedy_generating_set(g: &Group) -> Vec<ElemId> {
    greedy_generating_set_in(g, &g.full_subgroup())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_generators;

    fn from_cycles(degree: usize, gens: &[&[u16]]) -> Group {
        let perms: Vec<Perm> = gens
            .iter()
            .map(|c| Perm::from_cycles(degree, &[c.to_vec()]).unwrap())
            .collect();
        close_generators(degree, &perms).unwrap()
    }

    fn s5() -> Group {
        let c = Perm::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[vec![0, 1]]).unwrap();
        close_generators(5, &[c, t]).unwrap()
    }

    fn d8() -> Group {
        let r = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let f = Perm::from_images(vec![0, 3, 2, 1]).unwrap();
        close_generators(4, &[r, f]).unwrap()
    }

    /// Test-side commutator closure oracle using naive full-product closure.
    fn derived_subgroup_oracle(g: &Group) -> usize {
        let mut elems = vec![0 as ElemId];
        let mut mask = crate::bitset::ElemSet::empty(g.order());
        mask.insert(0);
        for a in 0..g.order() as ElemId {
            for b in 0..g.order() as ElemId {
                let c = g.commutator(a, b);
                if !mask.contains(c as usize) {
                    mask.insert(c as usize);
                    elems.push(c);
                }
            }
        }
        loop {
            let mut grew = false;
            let snapshot = elems.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let c = g.mul(a, b);
                    if !mask.contains(c as usize) {
                        mask.insert(c as usize);
                        elems.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return elems.len();
            }
        }
    }

    #[test]
    fn solvability_examples() {
        let c6 = from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert!(is_solvable(&c6));

        let g = s5();
        assert!(!is_solvable(&g));
        let series = derived_series(&g);
        assert_eq!(series.last().unwrap().order(), 60);
        assert_eq!(derived_subgroup_oracle(&g), 60);

        let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        let a5 = close_generators(5, &[a, b]).unwrap();
        assert!(!is_solvable(&a5));
        assert_eq!(derived_subgroup_oracle(&a5), 60); // perfect
    }

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&d8()));
        let c12 = from_cycles(12, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]]);
        assert!(is_nilpotent(&c12));

        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let s3 = close_generators(3, &[c3, t]).unwrap();
        assert!(!is_nilpotent(&s3));
        assert_eq!(lower_central_series(&s3).last().unwrap().order(), 3);
    }

    #[test]
    fn cyclicity_examples() {
        assert!(is_cyclic(&from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]])));
        let v4 = close_generators(
            4,
            &[
                Perm::from_cycles(4, &[vec![0, 1]]).unwrap(),
                Perm::from_cycles(4, &[vec![2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!is_cyclic(&v4));
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        assert!(!is_cyclic(&close_generators(3, &[c3, t]).unwrap()));
    }

    #[test]
    fn p_core_examples() {
        // C6: O_2 has order 2, O_3 order 3; quotients cyclic either way.
        let c6 = from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]);
        assert_eq!(p_core(&c6, 2).unwrap().order(), 2);
        assert_eq!(p_core(&c6, 3).unwrap().order(), 3);
        assert!(is_p_hypo_elementary(&c6, 2).unwrap());
        assert!(is_p_hypo_elementary(&c6, 5).unwrap());

        // D8 is a 2-group: O_2 = D8.
        let g = d8();
        assert_eq!(p_core(&g, 2).unwrap().order(), 8);
        assert!(is_p_hypo_elementary(&g, 2).unwrap());

        // A5 simple: every p-core is trivial and A5 is not cyclic.
        let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        let a5 = close_generators(5, &[a, b]).unwrap();
        for p in [2u64, 3, 5] {
            assert_eq!(p_core(&a5, p).unwrap().order(), 1);
            assert!(!is_p_hypo_elementary(&a5, p).unwrap());
        }
        assert_eq!(hypo_elementary_witness(&a5), (false, None));

        assert!(matches!(p_core(&c6, 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn sylow_orders() {
        let g = s5();
        assert_eq!(sylow_subgroup(&g, 2).unwrap().order(), 8);
        assert_eq!(sylow_subgroup(&g, 3).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&g, 5).unwrap().order(), 5);
        assert_eq!(sylow_subgroup(&g, 7).unwrap().order(), 1);
    }

    #[test]
    fn quotient_by_trivial_is_same_order() {
        let g = s5();
        let q = quotient(&g, &g.trivial_subgroup()).unwrap();
        assert_eq!(q.group.order(), 120);
    }

    #[test]
    fn quotient_s5_by_a5() {
        let g = s5();
        let squares: Vec<ElemId> = (0..g.order() as ElemId).map(|e| g.mul(e, e)).collect();
        let a5 = generated_subgroup(&g, &squares);
        let q = quotient(&g, &a5).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.kernel.order(), 60);
    }

    #[test]
    fn quotient_d8_by_center_is_v4() {
        let g = d8();
        let z = crate::group::center(&g);
        assert_eq!(z.order(), 2);
        let q = quotient(&g, &z).unwrap();
        assert_eq!(q.group.order(), 4);
        // Exponent 2 and order 4: that is V4, not C4.
        assert!((0..4).all(|e| q.group.elem_order(e) <= 2));
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let g = s5();
        let t = g
            .index_of(&Perm::from_cycles(5, &[vec![0, 1]]).unwrap())
            .unwrap();
        let c2 = generated_subgroup(&g, &[t]);
        assert!(matches!(quotient(&g, &c2), Err(Error::NotNormal)));
    }

    #[test]
    fn projection_is_homomorphism_on_all_pairs() {
        let g = d8();
        let z = crate::group::center(&g);
        let q = quotient(&g, &z).unwrap();
        for a in 0..g.order() as ElemId {
            for b in 0..g.order() as ElemId {
                let lhs = q.projection[g.mul(a, b) as usize];
                let rhs = q.group.mul(q.projection[a as usize], q.projection[b as usize]);
                assert_eq!(lhs, rhs);
            }
        }
        let kernel: Vec<ElemId> = (0..g.order() as ElemId)
            .filter(|&x| q.projection[x as usize] == 0)
            .collect();
        assert_eq!(kernel.len(), z.order());
        assert!(kernel.iter().all(|&x| z.contains(x)));
    }

    #[test]
    fn greedy_generators_are_small() {
        let g = s5();
        let gens = greedy_generating_set(&g);
        assert!(gens.len() <= 2, "S5 is 2-generated, greedy found {}", gens.len());
        assert_eq!(generated_subgroup(&g, &gens).order(), 120);
    }
}
