//! Exact isomorphism testing and composition factors.
//!
//! The isomorphism test first compares cheap invariants, then runs a
//! backtracking search that maps a small greedily-chosen generating set of
//! the first group onto candidate tuples in the second, pruning with partial
//! homomorphism checks at every depth.

use crate::group::{
    close_generators_capped, generated_subgroup, normal_subgroups_direct, ElemId, Group, Subgroup,
};
use crate::perm::Perm;
use crate::structure::{derived_series, greedy_generating_set, quotient, subgroup_as_group};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Isomorphism-invariant fingerprint used both for fast rejection and for
/// bucketing in catalogue deduplication.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fingerprint {
    pub order: usize,
    /// (element order, multiplicity), ascending.
    pub elem_orders: Vec<(u32, usize)>,
    /// (conjugacy class size, multiplicity), ascending.
    pub class_sizes: Vec<(usize, usize)>,
    pub center_order: usize,
    pub derived_orders: Vec<usize>,
    /// Element-order multiset of the abelianization, which pins the
    /// abelianization up to isomorphism.
    pub abelianization: Vec<(u32, usize)>,
}

fn multiset<T: Ord + Copy>(items: impl Iterator<Item = T>) -> Vec<(T, usize)> {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for item in items {
        *counts.entry(item).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    let elem_orders = multiset((0..g.order() as ElemId).map(|e| g.elem_order(e)));
    let class_sizes = multiset(g.element_classes().iter().map(|c| c.len()));
    let center_order = crate::group::center(g).order();
    let series = derived_series(g);
    let derived_orders: Vec<usize> = series.iter().map(|s| s.order()).collect();
    let derived = series.get(1).cloned().unwrap_or_else(|| g.trivial_subgroup());
    let ab = quotient(g, &derived).expect("derived subgroup is normal");
    let abelianization = multiset((0..ab.group.order() as ElemId).map(|e| ab.group.elem_order(e)));
    Fingerprint {
        order: g.order(),
        elem_orders,
        class_sizes,
        center_order,
        derived_orders,
        abelianization,
    }
}

/// Per-element invariants of the target group used to prune candidates.
struct TargetProfile {
    /// centralizer order per element (class size = order / this).
    centralizer_order: Vec<usize>,
}

fn target_profile(g: &Group) -> TargetProfile {
    let n = g.order() as ElemId;
    let centralizer_order = (0..n)
        .map(|x| (0..n).filter(|&c| g.mul(c, x) == g.mul(x, c)).count())
        .collect();
    TargetProfile { centralizer_order }
}

/// Decides isomorphism exactly.
pub fn is_isomorphic(a: &Group, b: &Group) -> bool {
    if a.order() != b.order() {
        return false;
    }
    if a.order() == 1 {
        return true;
    }
    if fingerprint(a) != fingerprint(b) {
        return false;
    }
    backtrack_isomorphic(a, b)
}

/// BFS listing of the subgroup generated by a generator prefix, with a
/// decomposition (parent element, generator position) for each non-identity
/// member.
struct PrefixLevel {
    elems: Vec<ElemId>,
    decomp: Vec<(ElemId, usize)>,
}

fn prefix_levels(a: &Group, gens: &[ElemId]) -> Vec<PrefixLevel> {
    (1..=gens.len())
        .map(|depth| {
            let active = &gens[..depth];
            let mut seen = vec![false; a.order()];
            seen[0] = true;
            let mut elems = vec![0 as ElemId];
            let mut decomp = vec![(0 as ElemId, 0usize)];
            let mut cursor = 0;
            while cursor < elems.len() {
                let x = elems[cursor];
                for (j, &gen) in active.iter().enumerate() {
                    let y = a.mul(x, gen);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        elems.push(y);
                        decomp.push((x, j));
                    }
                }
                cursor += 1;
            }
            PrefixLevel { elems, decomp }
        })
        .collect()
}

struct IsoSearch<'a> {
    a: &'a Group,
    b: &'a Group,
    gens: Vec<ElemId>,
    levels: Vec<PrefixLevel>,
    candidates: Vec<Vec<ElemId>>,
    images: Vec<ElemId>,
    phi: Vec<ElemId>,
}

impl IsoSearch<'_> {
    /// Rebuilds `phi` on the current prefix subgroup and verifies it is an
    /// injective homomorphism. Checking `phi(x·g_j) = phi(x)·phi(g_j)` for
    /// every member `x` and active generator `g_j` is enough: induction over
    /// the BFS decomposition extends it to all products.
    fn prefix_consistent(&mut self) -> bool {
        let depth = self.images.len();
        let level = &self.levels[depth - 1];
        let mut used = vec![false; self.b.order()];
        used[0] = true;
        self.phi[0] = 0;
        for (k, &x) in level.elems.iter().enumerate().skip(1) {
            let (parent, j) = level.decomp[k];
            let img = self.b.mul(self.phi[parent as usize], self.images[j]);
            if used[img as usize] {
                return false;
            }
            used[img as usize] = true;
            self.phi[x as usize] = img;
        }
        for &x in &level.elems {
            for j in 0..depth {
                let lhs = self.phi[self.a.mul(x, self.gens[j]) as usize];
                let rhs = self.b.mul(self.phi[x as usize], self.images[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self) -> bool {
        let depth = self.images.len();
        if depth > 0 && !self.prefix_consistent() {
            return false;
        }
        if depth == self.gens.len() {
            return true;
        }
        for i in 0..self.candidates[depth].len() {
            self.images.push(self.candidates[depth][i]);
            if self.extend() {
                return true;
            }
            self.images.pop();
        }
        false
    }
}

/// Isomorphism search once fingerprints already agree (used by callers that
/// bucket by fingerprint themselves).
pub fn backtrack_isomorphic(a: &Group, b: &Group) -> bool {
    let gens = greedy_generating_set(a);
    if gens.is_empty() {
        return b.order() == 1;
    }
    let levels = prefix_levels(a, &gens);

    let profile_a = target_profile(a);
    let profile_b = target_profile(b);
    let candidates: Vec<Vec<ElemId>> = gens
        .iter()
        .map(|&g1| {
            (0..b.order() as ElemId)
                .filter(|&h| {
                    b.elem_order(h) == a.elem_order(g1)
                        && profile_b.centralizer_order[h as usize]
                            == profile_a.centralizer_order[g1 as usize]
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(|c: &Vec<ElemId>| c.is_empty()) {
        return false;
    }

    let phi = vec![0 as ElemId; a.order()];
    let mut search = IsoSearch {
        a,
        b,
        gens,
        levels,
        candidates,
        images: Vec::new(),
        phi,
    };
    search.extend()
}

/// Label of a composition factor: cyclic of prime order, or one of the
/// catalogue's nonabelian simple groups.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SimpleFactor {
    Cyclic(u64),
    Named(&'static str),
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleFactor::Cyclic(p) => write!(f, "C{p}"),
            SimpleFactor::Named(n) => write!(f, "{n}"),
        }
    }
}

/// Reference copies of the nonabelian simple groups small enough for the
/// default order cap: A5 and A6.
pub fn reference_simple_groups() -> &'static [(&'static str, Arc<Group>)] {
    static REFS: OnceLock<Vec<(&'static str, Arc<Group>)>> = OnceLock::new();
    REFS.get_or_init(|| {
        let a5 = {
            let a = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
            let b = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
            let mut g = close_generators_capped(5, &[a, b], 60).unwrap();
            g.set_name("A5");
            g
        };
        let a6 = {
            let a = Perm::from_cycles(6, &[vec![0, 1, 2]]).unwrap();
            let b = Perm::from_cycles(6, &[vec![1, 2, 3, 4, 5]]).unwrap();
            let mut g = close_generators_capped(6, &[a, b], 360).unwrap();
            g.set_name("A6");
            g
        };
        vec![("A5", Arc::new(a5)), ("A6", Arc::new(a6))]
    })
}

fn identify_simple(g: &Group) -> Result<SimpleFactor> {
    if is_prime(g.order() as u64) {
        return Ok(SimpleFactor::Cyclic(g.order() as u64));
    }
    for (name, reference) in reference_simple_groups() {
        if is_isomorphic(g, reference) {
            return Ok(SimpleFactor::Named(name));
        }
    }
    let fp = fingerprint(g);
    Err(Error::UnidentifiedSimpleFactor {
        order: g.order(),
        invariants: format!(
            "element orders {:?}, class sizes {:?}",
            fp.elem_orders, fp.class_sizes
        ),
    })
}

fn is_prime(n: u64) -> bool {
    crate::structure::is_prime(n)
}

/// Composition factors as a sorted multiset of labels.
///
/// A composition series is walked by repeatedly splitting off a maximal
/// proper normal subgroup; the chosen subgroup is the one of largest order
/// (ties to the lexicographically smallest bitset), which pins the walk
/// deterministically — the factor multiset itself does not depend on the
/// choice and that independence is covered by tests.
pub fn composition_factors(g: &Group) -> Result<Vec<SimpleFactor>> {
    let mut factors = Vec::new();
    composition_factors_into(g, &mut factors)?;
    factors.sort();
    Ok(factors)
}

fn composition_factors_into(g: &Group, out: &mut Vec<SimpleFactor>) -> Result<()> {
    if g.order() == 1 {
        return Ok(());
    }
    let normals = normal_subgroups_direct(g);
    // Maximal proper normal subgroup of largest order: with the list sorted
    // by (order, mask), that is the last proper entry maximal under
    // inclusion; order-maximality implies inclusion-maximality here.
    let full_order = g.order();
    let max_normal = normals
        .iter()
        .filter(|n| n.order() < full_order)
        .max_by(|x, y| {
            x.order()
                .cmp(&y.order())
                .then_with(|| y.mask().cmp(x.mask()))
        })
        .cloned()
        .unwrap_or_else(|| g.trivial_subgroup());

    let q = quotient(g, &max_normal)?;
    out.push(identify_simple(&q.group)?);
    if !max_normal.is_trivial() {
        let sub = subgroup_as_group(g, &max_normal, format!("{}|{}", g.name(), max_normal.order()));
        composition_factors_into(&sub, out)?;
    }
    Ok(())
}
