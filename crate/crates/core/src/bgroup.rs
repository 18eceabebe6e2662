//! B-groups and the largest B-group quotient.
//!
//! A finite group is a B-group when the deflation number of every nontrivial
//! normal subgroup vanishes. `beta` constructs the largest B-group quotient
//! two independent ways — a direct scan over all normal subgroups and a
//! recursion through minimal normal subgroups with nonzero deflation number —
//! and insists the two agree up to isomorphism.

use crate::burnside::{deflation_number, Rational};
use crate::group::{centralizer, is_normal, normal_subgroups_direct, Group, Subgroup};
use crate::iso::{composition_factors, is_isomorphic, SimpleFactor};
use crate::lattice::{mobius, MobiusTable, SubgroupLattice};
use crate::structure::{
    is_nilpotent, is_p_hypo_elementary, is_solvable, quotient, subgroup_as_group,
};
use crate::{Error, Result};
use num::Zero;
use std::sync::Arc;

/// A group together with its subgroup lattice and Möbius table; the working
/// context for every B-group computation.
pub struct GroupData {
    group: Arc<Group>,
    lattice: SubgroupLattice,
    mobius: MobiusTable,
}

impl GroupData {
    pub fn new(group: Group) -> Result<GroupData> {
        Self::from_arc(Arc::new(group))
    }

    pub fn from_arc(group: Arc<Group>) -> Result<GroupData> {
        let lattice = SubgroupLattice::build(group.clone())?;
        Ok(Self::with_lattice(lattice))
    }

    /// Wraps a prebuilt lattice (for cache hits).
    pub fn with_lattice(lattice: SubgroupLattice) -> GroupData {
        let mobius = mobius(&lattice);
        GroupData {
            group: lattice.group().clone(),
            lattice,
            mobius,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn mobius(&self) -> &MobiusTable {
        &self.mobius
    }

    pub fn deflation_number(&self, n: &Subgroup) -> Result<Rational> {
        deflation_number(&self.lattice, &self.mobius, n)
    }

    /// All normal subgroups, ascending by (order, mask).
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.lattice
            .normal_indices()
            .into_iter()
            .map(|i| self.lattice.subgroup(i).clone())
            .collect()
    }

    pub fn minimal_normal_subgroups(&self) -> Vec<Subgroup> {
        self.lattice
            .minimal_normal_indices()
            .into_iter()
            .map(|i| self.lattice.subgroup(i).clone())
            .collect()
    }

    /// B-group test through minimal normal subgroups only; a vanishing
    /// deflation number on every minimal normal subgroup forces vanishing on
    /// all normal subgroups.
    pub fn is_b_group(&self) -> Result<bool> {
        for n in self.minimal_normal_subgroups() {
            if !self.deflation_number(&n)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Audit-mode B-group test over every nontrivial normal subgroup.
    pub fn is_b_group_audit(&self) -> Result<bool> {
        for n in self.normal_subgroups() {
            if n.is_trivial() {
                continue;
            }
            if !self.deflation_number(&n)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The largest B-group quotient, built both ways and cross-checked.
    pub fn beta(&self) -> Result<BetaResult> {
        // Direct construction: scan all normal subgroups, keep an
        // inclusion-maximal one with nonzero deflation number (largest
        // order, then lexicographically smallest mask).
        let mut certificate: Vec<(Subgroup, Rational)> = Vec::new();
        for n in self.normal_subgroups() {
            let m = self.deflation_number(&n)?;
            certificate.push((n, m));
        }
        let nonzero: Vec<Subgroup> = certificate
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(n, _)| n.clone())
            .collect();
        let mut kernel: Option<Subgroup> = None;
        for n in &nonzero {
            if nonzero.iter().any(|o| o != n && n.is_subgroup_of(o)) {
                continue; // not inclusion-maximal among the nonzero set
            }
            let better = match &kernel {
                None => true,
                Some(k) => {
                    n.order() > k.order() || (n.order() == k.order() && n.mask() < k.mask())
                }
            };
            if better {
                kernel = Some(n.clone());
            }
        }
        let kernel = kernel.expect("the trivial subgroup always has deflation number 1");
        let direct = quotient(&self.group, &kernel)?.group;

        // Recursive construction through minimal normal subgroups.
        let mut chain: Vec<BetaStep> = Vec::new();
        let recursive = self.beta_recursive(&mut chain)?;

        if !is_isomorphic(&direct, &recursive) {
            return Err(Error::Disagreement);
        }

        Ok(BetaResult {
            beta_group: direct,
            kernel,
            certificate,
            chain,
        })
    }

    fn beta_recursive(&self, chain: &mut Vec<BetaStep>) -> Result<Arc<Group>> {
        // Smallest minimal normal subgroup with nonzero deflation number
        // (order, then mask); none means the group is already a B-group.
        for n in self.minimal_normal_subgroups() {
            let m = self.deflation_number(&n)?;
            if m.is_zero() {
                continue;
            }
            chain.push(BetaStep {
                group_order: self.group.order(),
                kernel_order: n.order(),
                value: m,
            });
            let q = quotient(&self.group, &n)?;
            let child = GroupData::from_arc(q.group)?;
            return child.beta_recursive(chain);
        }
        Ok(self.group.clone())
    }

    /// Verifies that every inclusion-maximal normal subgroup with nonzero
    /// deflation number yields the same quotient up to isomorphism.
    pub fn beta_well_defined(&self) -> Result<bool> {
        let mut nonzero: Vec<Subgroup> = Vec::new();
        for n in self.normal_subgroups() {
            if !self.deflation_number(&n)?.is_zero() {
                nonzero.push(n);
            }
        }
        let maximal: Vec<&Subgroup> = nonzero
            .iter()
            .filter(|n| nonzero.iter().all(|o| o == *n || !n.is_subgroup_of(o)))
            .collect();
        let mut quotients = Vec::new();
        for n in &maximal {
            quotients.push(quotient(&self.group, n)?.group);
        }
        for a in &quotients {
            for b in &quotients {
                if !is_isomorphic(a, b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks, for one normal subgroup, that the deflation number is nonzero
    /// exactly when `beta(G)` and `beta(G/N)` are isomorphic, and that a
    /// nonzero number also exhibits `beta(G)` as a quotient of `G/N`.
    pub fn beta_quotient_equivalence(&self, n: &Subgroup) -> Result<bool> {
        if !is_normal(&self.group, n) {
            return Err(Error::NotNormal);
        }
        let m_nonzero = !self.deflation_number(n)?.is_zero();
        let beta_g = self.beta()?.beta_group;
        let q = quotient(&self.group, n)?;
        let q_data = GroupData::from_arc(q.group.clone())?;
        let beta_q = q_data.beta()?.beta_group;
        let betas_agree = is_isomorphic(&beta_g, &beta_q);
        if m_nonzero != betas_agree {
            return Ok(false);
        }
        if m_nonzero {
            // beta(G) must appear as a quotient of G/N.
            let mut witnessed = false;
            for k in q_data.normal_subgroups() {
                let qq = quotient(&q_data.group, &k)?;
                if is_isomorphic(&qq.group, &beta_g) {
                    witnessed = true;
                    break;
                }
            }
            if !witnessed {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(property(G), property(beta(G)))` pairs for the invariance sweeps.
    pub fn nilpotency_invariance(&self) -> Result<(bool, bool)> {
        let beta = self.beta()?;
        Ok((is_nilpotent(&self.group), is_nilpotent(&beta.beta_group)))
    }

    pub fn solvability_invariance(&self) -> Result<(bool, bool)> {
        let beta = self.beta()?;
        Ok((is_solvable(&self.group), is_solvable(&beta.beta_group)))
    }

    pub fn hypo_elementary_invariance(&self, p: u64) -> Result<(bool, bool)> {
        let beta = self.beta()?;
        Ok((
            is_p_hypo_elementary(&self.group, p)?,
            is_p_hypo_elementary(&beta.beta_group, p)?,
        ))
    }

    /// Report for a group with exactly one composition factor isomorphic to
    /// the named simple group: certifies that the largest B-group quotient
    /// is not solvable and classifies the centralizer of every minimal
    /// normal subgroup met along the recursive construction.
    pub fn unique_simple_factor_report(&self, label: &SimpleFactor) -> Result<SimpleFactorReport> {
        let factors = composition_factors(&self.group)?;
        let multiplicity = factors.iter().filter(|f| **f == *label).count();
        if multiplicity != 1 {
            return Err(Error::HypothesisViolated {
                label: label.to_string(),
                found: multiplicity,
            });
        }

        let reference: Option<&Arc<Group>> = match label {
            SimpleFactor::Named(name) => crate::iso::reference_simple_groups()
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, g)| g),
            SimpleFactor::Cyclic(_) => None,
        };

        let mut steps = Vec::new();
        let mut current = GroupDataOwned::Borrowed(self);
        let mut level = 0usize;
        let beta_group = loop {
            let data = current.get();
            let mut chosen: Option<Subgroup> = None;
            for n in data.minimal_normal_subgroups() {
                let is_s_copy = match reference {
                    Some(r) if n.order() == r.order() => {
                        let as_group =
                            subgroup_as_group(&data.group, &n, format!("minimal[{level}]"));
                        is_isomorphic(&as_group, r)
                    }
                    _ => false,
                };
                let cent = centralizer(&data.group, &n);
                steps.push(CentralizerStep {
                    level,
                    group_order: data.group.order(),
                    normal_order: n.order(),
                    centralizer_order: cent.order(),
                    is_factor_copy: is_s_copy,
                    case: if cent.order() == 1 {
                        // Trivial centralizer embeds the whole group into
                        // the automorphism group of this minimal normal
                        // subgroup.
                        CentralizerCase::TrivialEmbedsInAut
                    } else {
                        CentralizerCase::Nontrivial
                    },
                });
                if chosen.is_none() && !data.deflation_number(&n)?.is_zero() {
                    chosen = Some(n);
                }
            }
            match chosen {
                Some(n) => {
                    let q = quotient(&data.group, &n)?;
                    current = GroupDataOwned::Owned(GroupData::from_arc(q.group)?);
                    level += 1;
                }
                None => break data.group.clone(),
            }
        };

        let beta_solvable = is_solvable(&beta_group);
        Ok(SimpleFactorReport {
            group_name: self.group.name().to_string(),
            label: label.clone(),
            multiplicity,
            beta_order: beta_group.order(),
            beta_group,
            beta_solvable,
            steps,
        })
    }
}

enum GroupDataOwned<'a> {
    Borrowed(&'a GroupData),
    Owned(GroupData),
}

impl GroupDataOwned<'_> {
    fn get(&self) -> &GroupData {
        match self {
            GroupDataOwned::Borrowed(d) => d,
            GroupDataOwned::Owned(d) => d,
        }
    }
}

/// Result of the `beta` construction.
pub struct BetaResult {
    /// The largest B-group quotient, as a standalone permutation group.
    pub beta_group: Arc<Group>,
    /// Inclusion-maximal normal subgroup with nonzero deflation number
    /// chosen by the direct construction.
    pub kernel: Subgroup,
    /// Every normal subgroup with its deflation number.
    pub certificate: Vec<(Subgroup, Rational)>,
    /// Steps taken by the recursive construction.
    pub chain: Vec<BetaStep>,
}

/// One step of the recursive construction: the minimal normal subgroup
/// divided out at this level and its deflation number.
#[derive(Clone, Debug)]
pub struct BetaStep {
    pub group_order: usize,
    pub kernel_order: usize,
    pub value: Rational,
}

/// Case split on the centralizer of a minimal normal subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CentralizerCase {
    /// The centralizer is nontrivial, so the group modulo it is a proper
    /// quotient still carrying the simple factor.
    Nontrivial,
    /// Trivial centralizer: conjugation embeds the group into the
    /// automorphism group of the minimal normal subgroup.
    TrivialEmbedsInAut,
}

/// Centralizer classification of one minimal normal subgroup met during the
/// recursive construction.
#[derive(Clone, Debug)]
pub struct CentralizerStep {
    pub level: usize,
    pub group_order: usize,
    pub normal_order: usize,
    pub centralizer_order: usize,
    /// Whether this minimal normal subgroup is isomorphic to the designated
    /// simple factor.
    pub is_factor_copy: bool,
    pub case: CentralizerCase,
}

/// Report of `unique_simple_factor_report`.
pub struct SimpleFactorReport {
    pub group_name: String,
    pub label: SimpleFactor,
    pub multiplicity: usize,
    pub beta_group: Arc<Group>,
    pub beta_order: usize,
    pub beta_solvable: bool,
    pub steps: Vec<CentralizerStep>,
}

impl SimpleFactorReport {
    /// Centralizer steps for minimal normal subgroups isomorphic to the
    /// designated factor.
    pub fn factor_steps(&self) -> Vec<&CentralizerStep> {
        self.steps.iter().filter(|s| s.is_factor_copy).collect()
    }
}

/// Convenience check used by tests: the direct normal-subgroup enumeration
/// agrees with the lattice's normal subgroups.
pub fn normal_enumerations_agree(data: &GroupData) -> bool {
    let direct = normal_subgroups_direct(&data.group);
    let from_lattice = data.normal_subgroups();
    direct == from_lattice
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::ratio;
    use crate::group::close_generators;
    use crate::perm::Perm;

    fn data(degree: usize, gens: Vec<Perm>) -> GroupData {
        GroupData::new(close_generators(degree, &gens).unwrap()).unwrap()
    }

    fn cyclic_data(n: usize) -> GroupData {
        data(n, vec![Perm::from_cycles(n, &[(0..n as u16).collect()]).unwrap()])
    }

    fn s3_data() -> GroupData {
        data(
            3,
            vec![
                Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
                Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            ],
        )
    }

    fn v4_data() -> GroupData {
        data(
            4,
            vec![
                Perm::from_cycles(4, &[vec![0, 1]]).unwrap(),
                Perm::from_cycles(4, &[vec![2, 3]]).unwrap(),
            ],
        )
    }

    fn d8_data() -> GroupData {
        data(
            4,
            vec![
                Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap(),
                Perm::from_images(vec![0, 3, 2, 1]).unwrap(),
            ],
        )
    }

    fn a5_data() -> GroupData {
        data(
            5,
            vec![
                Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap(),
                Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap(),
            ],
        )
    }

    #[test]
    fn b_group_examples() {
        assert!(a5_data().is_b_group().unwrap());
        assert!(!cyclic_data(5).is_b_group().unwrap());
        assert!(!cyclic_data(7).is_b_group().unwrap());
        assert!(v4_data().is_b_group().unwrap());
        assert!(s3_data().is_b_group().unwrap());
    }

    #[test]
    fn audit_mode_agrees_with_minimal_mode() {
        for d in [cyclic_data(12), s3_data(), v4_data(), d8_data(), a5_data()] {
            assert_eq!(d.is_b_group().unwrap(), d.is_b_group_audit().unwrap());
        }
    }

    #[test]
    fn beta_of_cyclic_is_trivial() {
        for n in [2usize, 3, 6, 8, 12] {
            let b = cyclic_data(n).beta().unwrap();
            assert_eq!(b.beta_group.order(), 1, "beta(C{n}) must be trivial");
            assert_eq!(b.kernel.order(), n);
        }
    }

    #[test]
    fn beta_of_a_b_group_is_itself() {
        for d in [a5_data(), s3_data(), v4_data()] {
            let order = d.group().order();
            let b = d.beta().unwrap();
            assert_eq!(b.beta_group.order(), order);
            assert_eq!(b.kernel.order(), 1);
            assert!(b.chain.is_empty());
        }
    }

    #[test]
    fn beta_of_d8_is_v4() {
        let d = d8_data();
        let b = d.beta().unwrap();
        assert_eq!(b.beta_group.order(), 4);
        assert!(is_isomorphic(&b.beta_group, v4_data().group()));
        // Kernel is the center.
        assert_eq!(b.kernel.order(), 2);
        // Chain went D8 → V4 in one step with deflation number 1.
        assert_eq!(b.chain.len(), 1);
        assert_eq!(b.chain[0].value, ratio(1, 1));
    }

    #[test]
    fn well_definedness_small_cases() {
        for d in [cyclic_data(6), v4_data(), s3_data(), d8_data()] {
            assert!(d.beta_well_defined().unwrap());
        }
    }

    #[test]
    fn beta_quotient_equivalence_examples() {
        let d = d8_data();
        let z = crate::group::center(d.group());
        assert!(d.beta_quotient_equivalence(&z).unwrap());

        let s3 = s3_data();
        for n in s3.normal_subgroups() {
            assert!(s3.beta_quotient_equivalence(&n).unwrap());
        }
    }

    #[test]
    fn invariance_pairs() {
        assert_eq!(d8_data().nilpotency_invariance().unwrap(), (true, true));
        assert_eq!(s3_data().nilpotency_invariance().unwrap(), (false, false));
        assert_eq!(s3_data().solvability_invariance().unwrap(), (true, true));
        assert_eq!(d8_data().hypo_elementary_invariance(2).unwrap(), (true, true));
        assert_eq!(s3_data().hypo_elementary_invariance(3).unwrap(), (true, true));
        for p in [2u64, 3, 5] {
            assert_eq!(a5_data().hypo_elementary_invariance(p).unwrap(), (false, false));
        }
    }

    #[test]
    fn normal_enumeration_cross_check() {
        for d in [cyclic_data(12), s3_data(), v4_data(), d8_data(), a5_data()] {
            assert!(normal_enumerations_agree(&d));
        }
    }
}
