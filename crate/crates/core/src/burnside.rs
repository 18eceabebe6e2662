//! The exact rational Burnside-algebra layer: table of marks, the top
//! primitive idempotent, the deflation map to a quotient's algebra, and two
//! independent routes to the rational deflation number of a normal subgroup.
//!
//! Everything here is exact; there is no floating point anywhere. Vanishing
//! of a deflation number is a hard predicate, so coefficients are
//! arbitrary-precision rationals.

use crate::group::Subgroup;
use crate::lattice::{mobius, MobiusTable, SubgroupLattice};
use crate::structure::{quotient, Quotient};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

pub(crate) fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Table of marks over the conjugacy classes of subgroups: entry `(H, K)` is
/// the number of `H`-fixed points on the coset space `G/K`.
pub struct TableOfMarks {
    classes: usize,
    vals: Vec<i64>,
}

impl TableOfMarks {
    /// Number of fixed points of (a representative of) class `h` acting on
    /// `G/K` for `K` in class `k`.
    #[inline]
    pub fn mark(&self, h: usize, k: usize) -> i64 {
        self.vals[h * self.classes + k]
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }
}

/// Computes the table of marks by direct coset scan: `H` fixes the coset
/// `gK` exactly when `g⁻¹Hg ⊆ K`.
pub fn table_of_marks(lat: &SubgroupLattice) -> TableOfMarks {
    let g = lat.group();
    let classes = lat.class_count();
    let mut vals = vec![0i64; classes * classes];
    for kc in 0..classes {
        let k = lat.subgroup(lat.class_rep(kc));
        // Left coset representatives of K.
        let mut covered = crate::bitset::ElemSet::empty(g.order());
        let mut reps = Vec::new();
        for e in 0..g.order() as crate::group::ElemId {
            if covered.contains(e as usize) {
                continue;
            }
            reps.push(e);
            for x in k.elements() {
                covered.insert(g.mul(e, x) as usize);
            }
        }
        for hc in 0..classes {
            let h = lat.subgroup(lat.class_rep(hc));
            let mut fixed = 0i64;
            'coset: for &r in &reps {
                let rinv = g.inv(r);
                for x in h.elements() {
                    if !k.contains(g.conj(rinv, x)) {
                        continue 'coset;
                    }
                }
                fixed += 1;
            }
            vals[hc * classes + kc] = fixed;
        }
    }
    TableOfMarks { classes, vals }
}

/// An element of the rational Burnside algebra in the transitive basis,
/// one coefficient per conjugacy class of subgroups of the ambient lattice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BurnsideElement {
    coeffs: Vec<Rational>,
}

impl BurnsideElement {
    pub fn zero(classes: usize) -> Self {
        BurnsideElement {
            coeffs: vec![Rational::zero(); classes],
        }
    }

    pub fn coeff(&self, class: usize) -> &Rational {
        &self.coeffs[class]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BurnsideElement {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Mark vector: image under the ghost-ring embedding given by the table
    /// of marks.
    pub fn mark_vector(&self, marks: &TableOfMarks) -> Vec<Rational> {
        let n = marks.class_count();
        (0..n)
            .map(|kc| {
                (0..n)
                    .map(|hc| self.coeffs[hc].clone() * BigInt::from(marks.mark(kc, hc)))
                    .sum()
            })
            .collect()
    }
}

/// The top primitive idempotent `e = (1/|G|) Σ_X |X| μ(X, G) [G/X]`, folded
/// per conjugacy class. Its mark vector must be the indicator of the class
/// of `G`; that certificate is checked before returning.
pub fn top_idempotent(lat: &SubgroupLattice, mob: &MobiusTable) -> Result<BurnsideElement> {
    let order = lat.group().order() as i64;
    let full = lat.full_index();
    let mut coeffs = vec![Rational::zero(); lat.class_count()];
    for i in 0..lat.len() {
        let m = mob.value(i, full);
        if m == 0 {
            continue;
        }
        coeffs[lat.class_of(i)] += ratio(lat.subgroup(i).order() as i64 * m, order);
    }
    let elem = BurnsideElement { coeffs };

    let marks = table_of_marks(lat);
    let marks_vec = elem.mark_vector(&marks);
    let full_class = lat.class_of(full);
    for (kc, v) in marks_vec.iter().enumerate() {
        let expect = if kc == full_class {
            Rational::one()
        } else {
            Rational::zero()
        };
        if *v != expect {
            return Err(Error::MarkCheckFailed);
        }
    }
    Ok(elem)
}

/// Deflation along a normal subgroup: the basis rule sends the class of `H`
/// to the class of the image of `HN` in the quotient, adding coefficients
/// when classes collide.
pub fn deflate(
    lat: &SubgroupLattice,
    n: &Subgroup,
    x: &BurnsideElement,
    q: &Quotient,
    qlat: &SubgroupLattice,
) -> Result<BurnsideElement> {
    let g = lat.group();
    if !crate::group::is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let mut out = BurnsideElement::zero(qlat.class_count());
    for hc in 0..lat.class_count() {
        let coeff = x.coeff(hc);
        if coeff.is_zero() {
            continue;
        }
        let h = lat.subgroup(lat.class_rep(hc));
        // HN as a set; it is a subgroup because N is normal.
        let mut hn = crate::bitset::ElemSet::empty(g.order());
        for a in h.elements() {
            for b in n.elements() {
                hn.insert(g.mul(a, b) as usize);
            }
        }
        let image = q.image_of(&Subgroup::from_mask(hn));
        let qi = qlat
            .index_of(&image)
            .expect("image of a subgroup must lie in the quotient lattice");
        out.coeffs[qlat.class_of(qi)] += coeff;
    }
    Ok(out)
}

/// The rational deflation number of a normal subgroup, straight from its
/// definition: `(1/|G|) Σ_{XN = G} |X| μ(X, G)`, the sum running over all
/// subgroups `X` individually.
///
/// `XN = G` is tested by cardinality: `|XN| = |X||N| / |X ∩ N|` as a set,
/// so no closure is needed.
pub fn deflation_number(
    lat: &SubgroupLattice,
    mob: &MobiusTable,
    n: &Subgroup,
) -> Result<Rational> {
    let g = lat.group();
    if !crate::group::is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let order = g.order() as i64;
    let full = lat.full_index();
    let n_order = n.order() as u128;
    let mut numerator: i64 = 0;
    for i in 0..lat.len() {
        let x = lat.subgroup(i);
        let meet = x.mask().intersection_count(n.mask()) as u128;
        if (x.order() as u128) * n_order == (order as u128) * meet {
            numerator = numerator
                .checked_add(x.order() as i64 * mob.value(i, full))
                .expect("deflation-number numerator overflowed i64");
        }
    }
    Ok(ratio(numerator, order))
}

/// The same number computed the long way round: deflate the top idempotent
/// into the quotient's algebra and extract the unique scalar relating it to
/// the quotient's own top idempotent.
pub fn deflation_number_via_idempotents(
    lat: &SubgroupLattice,
    mob: &MobiusTable,
    n: &Subgroup,
) -> Result<Rational> {
    let g = lat.group();
    let e_top = top_idempotent(lat, mob)?;
    let q = quotient(g, n)?;
    let qlat = SubgroupLattice::build_capped(q.group.clone(), crate::lattice::DEFAULT_LATTICE_CAP)?;
    let qmob = mobius(&qlat);
    let e_q = top_idempotent(&qlat, &qmob)?;

    let deflated = deflate(lat, n, &e_top, &q, &qlat)?;

    // The coefficient of the full class in the quotient's top idempotent is
    // always 1 (only the full subgroup contributes there), so the scalar can
    // be read off at that class and then certified on the whole vector.
    let full_class = qlat.class_of(qlat.full_index());
    let scalar = deflated.coeff(full_class) / e_q.coeff(full_class);
    if deflated != e_q.scale(&scalar) {
        return Err(Error::NotProportional);
    }
    Ok(scalar)
}
