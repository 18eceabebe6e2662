//! Permutations on `{0, …, degree−1}` in one-line (image array) form.

use crate::{Error, Result};
use std::fmt;

/// A permutation of the points `0..degree`.
///
/// `images[i]` is the image of point `i`. Composition follows function
/// application order: `(a * b)(x) = a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from its image array, validating bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &img in &images {
            let img = img as usize;
            if img >= degree {
                return Err(Error::InvalidPermutation {
                    degree,
                    reason: format!("image {img} out of range"),
                });
            }
            if seen[img] {
                return Err(Error::InvalidPermutation {
                    degree,
                    reason: format!("image {img} repeated"),
                });
            }
            seen[img] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u16>]) -> Result<Perm> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                let pt = pt as usize;
                if pt >= degree {
                    return Err(Error::InvalidPermutation {
                        degree,
                        reason: format!("point {pt} out of range"),
                    });
                }
                if moved[pt] {
                    return Err(Error::InvalidPermutation {
                        degree,
                        reason: format!("point {pt} appears in two cycles"),
                    });
                }
                moved[pt] = true;
                images[pt] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&p| self.images[p as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u16;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u16 == img)
    }

    /// Multiplicative order, via the lcm of cycle lengths.
    pub fn order(&self) -> u32 {
        let mut seen = vec![false; self.degree()];
        let mut ord: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            ord = num::integer::lcm(ord, len);
        }
        ord as u32
    }

    /// Cycle decomposition, fixed points omitted; each cycle starts at its
    /// smallest point and cycles are sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u16);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Extends the permutation to a larger degree, fixing the new points.
    pub fn pad(&self, degree: usize) -> Perm {
        debug_assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u16..degree as u16);
        Perm { images }
    }

    /// Shifts every point up by `offset` inside a larger degree.
    pub fn shift(&self, offset: usize, degree: usize) -> Perm {
        debug_assert!(offset + self.degree() <= degree);
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for (i, &img) in self.images.iter().enumerate() {
            images[offset + i] = offset as u16 + img;
        }
        Perm { images }
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, pt) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3]).is_err());
        assert!(Perm::from_images(vec![1, 0, 2]).is_ok());
    }

    #[test]
    fn cycle_roundtrip() {
        let p = Perm::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(2), 0);
        assert_eq!(p.apply(4), 4);
        assert_eq!(p.order(), 3);
        assert_eq!(p.cycles(), vec![vec![0, 1, 2]]);
        assert_eq!(format!("{p}"), "(0 1 2)");
    }

    #[test]
    fn overlapping_cycles_rejected() {
        assert!(Perm::from_cycles(4, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    fn arb_perm(degree: usize) -> impl Strategy<Value = Perm> {
        Just(()).prop_perturb(move |_, mut rng| {
            let mut images: Vec<u16> = (0..degree as u16).collect();
            for i in (1..degree).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                images.swap(i, j);
            }
            Perm::from_images(images).unwrap()
        })
    }

    proptest! {
        #[test]
        fn composition_associative(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn inverse_cancels(a in arb_perm(9)) {
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.inverse().compose(&a).is_identity());
        }

        #[test]
        fn order_annihilates(a in arb_perm(7)) {
            let mut acc = Perm::identity(7);
            for _ in 0..a.order() {
                acc = acc.compose(&a);
            }
            prop_assert!(acc.is_identity());
        }
    }
}
