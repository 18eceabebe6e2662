//! Complete subgroup lattices: every subgroup of a group (not just up to
//! conjugacy), the inclusion poset, conjugacy classes of subgroups, and the
//! Möbius function on lattice intervals.
//!
//! Enumeration seeds with all cyclic subgroups and closes under joins with
//! cyclic subgroups of prime-power order. Every subgroup is reachable that
//! way: each subgroup is generated by its prime-power cyclic subgroups, and
//! each prefix of such a generating chain is itself a subgroup, so the join
//! fixpoint lists everything.

use crate::bitset::ElemSet;
use crate::group::{generated_subgroup, ElemId, Group, Subgroup};
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// Default ceiling on the number of subgroups enumerated per group.
pub const DEFAULT_LATTICE_CAP: usize = 20_000;

/// The full subgroup lattice of a group.
pub struct SubgroupLattice {
    group: Arc<Group>,
    subs: Vec<Subgroup>,
    /// Row `i` is the bitset over subgroup indices `j` with `subs[i] ⊆ subs[j]`.
    above: Vec<Vec<u64>>,
    /// Row `j` is the bitset over subgroup indices `i` with `subs[i] ⊆ subs[j]`.
    below: Vec<Vec<u64>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    normal: Vec<bool>,
    index_by_mask: HashMap<ElemSet, usize>,
}

impl SubgroupLattice {
    /// Enumerates all subgroups under the default lattice cap.
    pub fn build(group: Arc<Group>) -> Result<SubgroupLattice> {
        Self::build_capped(group, DEFAULT_LATTICE_CAP)
    }

    pub fn build_capped(group: Arc<Group>, cap: usize) -> Result<SubgroupLattice> {
        let subs = enumerate_subgroups(&group, cap)?;
        Self::from_subgroups(group, subs)
    }

    /// Assembles a lattice from an already-complete subgroup list (used by
    /// the cache loader); recomputes poset, conjugacy and normality data.
    pub(crate) fn from_subgroups(group: Arc<Group>, mut subs: Vec<Subgroup>) -> Result<SubgroupLattice> {
        subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.mask().cmp(b.mask())));
        let n = subs.len();
        let words = n.div_ceil(64);

        let mut above = vec![vec![0u64; words]; n];
        let mut below = vec![vec![0u64; words]; n];
        for i in 0..n {
            for j in i..n {
                if subs[i].mask().is_subset(subs[j].mask()) {
                    above[i][j / 64] |= 1 << (j % 64);
                    below[j][i / 64] |= 1 << (i % 64);
                }
            }
        }

        let mut index_by_mask = HashMap::with_capacity(n);
        for (i, s) in subs.iter().enumerate() {
            index_by_mask.insert(s.mask().clone(), i);
        }

        // Conjugation orbits under the group generators.
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                for &g in group.generators() {
                    let conj = conjugate_mask(&group, subs[i].mask(), g);
                    let j = *index_by_mask
                        .get(&conj)
                        .expect("lattice must be closed under conjugation");
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                        queue.push(j);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let normal = (0..n).map(|i| classes[class_of[i]].len() == 1).collect();

        Ok(SubgroupLattice {
            group,
            subs,
            above,
            below,
            class_of,
            classes,
            normal,
            index_by_mask,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subs[i]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.index_by_mask.get(s.mask()).copied()
    }

    /// Inclusion test by lattice index.
    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.above[i][j / 64] >> (j % 64) & 1 == 1
    }

    /// Indices of subgroups containing `i`, as bitset words.
    pub(crate) fn above_words(&self, i: usize) -> &[u64] {
        &self.above[i]
    }

    /// Indices of subgroups contained in `j`, as bitset words.
    pub(crate) fn below_words(&self, j: usize) -> &[u64] {
        &self.below[j]
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.subs.len() - 1
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_members(&self, class: usize) -> &[usize] {
        &self.classes[class]
    }

    /// Smallest-index member, used as the class representative.
    pub fn class_rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.normal[i]).collect()
    }

    /// Nontrivial normal subgroups containing no smaller nontrivial normal
    /// subgroup.
    pub fn minimal_normal_indices(&self) -> Vec<usize> {
        let normals = self.normal_indices();
        normals
            .iter()
            .copied()
            .filter(|&i| i != self.trivial_index())
            .filter(|&i| {
                normals
                    .iter()
                    .all(|&j| j == i || j == self.trivial_index() || !self.leq(j, i))
            })
            .collect()
    }

    /// Proper normal subgroups with no normal subgroup strictly between them
    /// and the full group.
    pub fn maximal_proper_normal_indices(&self) -> Vec<usize> {
        let normals = self.normal_indices();
        let full = self.full_index();
        normals
            .iter()
            .copied()
            .filter(|&i| i != full)
            .filter(|&i| normals.iter().all(|&j| j == i || j == full || !self.leq(i, j)))
            .collect()
    }
}

fn conjugate_mask(g: &Group, mask: &ElemSet, by: ElemId) -> ElemSet {
    let mut out = ElemSet::empty(g.order());
    for x in mask.iter() {
        out.insert(g.conj(by, x as ElemId) as usize);
    }
    out
}

/// All subgroups of `g`, deterministically ordered by (order, mask).
fn enumerate_subgroups(g: &Group, cap: usize) -> Result<Vec<Subgroup>> {
    let order = g.order();

    // Cyclic seeds. Partner set: one generator per distinct prime-power
    // cyclic subgroup.
    let mut known: HashMap<ElemSet, usize> = HashMap::new();
    let mut found: Vec<(Subgroup, Vec<ElemId>)> = Vec::new();
    let mut partners: Vec<(ElemSet, ElemId)> = Vec::new();

    let mut push = |sub: Subgroup, gens: Vec<ElemId>,
                    known: &mut HashMap<ElemSet, usize>,
                    found: &mut Vec<(Subgroup, Vec<ElemId>)>|
     -> Result<usize> {
        if let Some(&i) = known.get(sub.mask()) {
            return Ok(i);
        }
        if found.len() >= cap {
            return Err(Error::LatticeTooLarge { cap });
        }
        known.insert(sub.mask().clone(), found.len());
        found.push((sub, gens));
        Ok(found.len() - 1)
    };

    push(g.trivial_subgroup(), Vec::new(), &mut known, &mut found)?;
    for x in 1..order as ElemId {
        let sub = generated_subgroup(g, &[x]);
        let is_new = !known.contains_key(sub.mask());
        let idx = push(sub, vec![x], &mut known, &mut found)?;
        if is_new && is_prime_power(g.elem_order(x) as u64) {
            partners.push((found[idx].0.mask().clone(), x));
        }
    }

    // Join fixpoint: worklist of subgroups, each joined against every
    // prime-power cyclic partner.
    let mut cursor = 0;
    while cursor < found.len() {
        for pi in 0..partners.len() {
            let (ref pmask, pgen) = partners[pi];
            if pmask.is_subset(found[cursor].0.mask()) {
                continue;
            }
            let mut gens = found[cursor].1.clone();
            gens.push(pgen);
            let join = generated_subgroup(g, &gens);
            push(join, gens, &mut known, &mut found)?;
        }
        cursor += 1;
    }

    Ok(found.into_iter().map(|(s, _)| s).collect())
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true
}

/// Möbius function of the subgroup poset, tabulated on every interval.
pub struct MobiusTable {
    n: usize,
    vals: Vec<i64>,
}

impl MobiusTable {
    /// `μ(X, Y)` by lattice indices; zero for incomparable pairs.
    #[inline]
    pub fn value(&self, x: usize, y: usize) -> i64 {
        self.vals[x * self.n + y]
    }
}

/// Tabulates `μ` by downward recursion: `μ(Y,Y) = 1` and for `X < Y`,
/// `μ(X,Y) = −Σ_{X < Z ≤ Y} μ(Z,Y)`.
pub fn mobius(lat: &SubgroupLattice) -> MobiusTable {
    let n = lat.len();
    let mut vals = vec![0i64; n * n];
    for y in 0..n {
        vals[y * n + y] = 1;
        // Scan X below Y in descending index order; strict containment
        // implies strictly larger index under the (order, mask) sort.
        let below = lat.below_words(y);
        for x in (0..y).rev() {
            if below[x / 64] >> (x % 64) & 1 == 0 {
                continue;
            }
            let mut sum: i64 = 0;
            let above_x = lat.above_words(x);
            for w in 0..below.len() {
                let mut both = above_x[w] & below[w];
                while both != 0 {
                    let z = w * 64 + both.trailing_zeros() as usize;
                    both &= both - 1;
                    if z > x && z <= y {
                        sum = sum
                            .checked_add(vals[z * n + y])
                            .expect("Möbius partial sum overflowed i64");
                    }
                }
            }
            vals[x * n + y] = -sum;
        }
    }
    MobiusTable { n, vals }
}
