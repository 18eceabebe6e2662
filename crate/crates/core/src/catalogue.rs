//! Named group families, the textual group-spec DSL, and the catalogue
//! sweep.
//!
//! Grammar (whitespace-insensitive, family letters case-sensitive):
//!
//! ```text
//! spec    := term ( "x" term )*
//! term    := atom | "sd(" spec "," spec "," table ")"
//! atom    := C<n> | D<2n> | Q<4n> | S<n≤6> | A<n≤6> | E<p^k>
//! table   := perm ( ";" perm )*         one permutation per generator of H
//! perm    := "()" | cycle+              e.g. (1 3) or (0 1)(2 3)
//! ```
//!
//! `D<m>` is the dihedral group of order `m`, `Q<m>` the dicyclic group of
//! order `m`, `E<m>` the elementary abelian group of order `m`. In
//! `sd(N, H, table)` the table lists one permutation of N's points per
//! canonical generator of `H`; the listed permutations must normalize `N`
//! and generate a complement isomorphic to `H`.

use crate::group::{close_generators_capped, Group, DEFAULT_ORDER_CAP};
use crate::iso::{backtrack_isomorphic, fingerprint, Fingerprint};
use crate::perm::Perm;
use crate::structure::is_prime;
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Parsed group spec; `Display` renders the canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupSpec {
    Cyclic(u64),
    Dihedral(u64),
    Dicyclic(u64),
    Symmetric(u64),
    Alternating(u64),
    ElementaryAbelian(u64),
    Product(Vec<GroupSpec>),
    Semidirect {
        normal: Box<GroupSpec>,
        complement: Box<GroupSpec>,
        table: Vec<Perm>,
    },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Dicyclic(n) => write!(f, "Q{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::ElementaryAbelian(n) => write!(f, "E{n}"),
            GroupSpec::Product(factors) => {
                for (i, t) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            GroupSpec::Semidirect {
                normal,
                complement,
                table,
            } => {
                write!(f, "sd({normal}, {complement}, ")?;
                for (i, p) in table.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl GroupSpec {
    /// Group order, computed without constructing anything.
    pub fn order(&self) -> u64 {
        match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Dihedral(n) | GroupSpec::Dicyclic(n) | GroupSpec::ElementaryAbelian(n) => *n,
            GroupSpec::Symmetric(n) => factorial(*n),
            GroupSpec::Alternating(n) => {
                if *n <= 2 {
                    1
                } else {
                    factorial(*n) / 2
                }
            }
            GroupSpec::Product(fs) => fs.iter().map(|t| t.order()).product(),
            GroupSpec::Semidirect {
                normal, complement, ..
            } => normal.order() * complement.order(),
        }
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Family(char),
    Word(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Semi,
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(chars[i] as u64 - '0' as u64))
                    .ok_or_else(|| Error::Parse("number too large".into()))?;
                i += 1;
            }
            out.push(Token::Num(n));
        } else if c.is_ascii_alphabetic() {
            // Uppercase letters are single-character family names; lowercase
            // runs are operator words ("x", "sd"), so "C2xC3" lexes cleanly.
            if c.is_ascii_uppercase() {
                out.push(Token::Family(c));
                i += 1;
            } else {
                let mut word = String::new();
                while i < chars.len() && chars[i].is_ascii_lowercase() {
                    word.push(chars[i]);
                    i += 1;
                }
                out.push(Token::Word(word));
            }
        } else {
            match c {
                '(' => out.push(Token::LParen),
                ')' => out.push(Token::RParen),
                ',' => out.push(Token::Comma),
                ';' => out.push(Token::Semi),
                _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
            }
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn parse_spec(&mut self) -> Result<GroupSpec> {
        let mut factors = vec![self.parse_term()?];
        while matches!(self.peek(), Some(Token::Word(w)) if w == "x") {
            self.next();
            factors.push(self.parse_term()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(GroupSpec::Product(factors))
        }
    }

    fn parse_term(&mut self) -> Result<GroupSpec> {
        match self.next() {
            Some(Token::Family(letter)) => {
                let n = match self.next() {
                    Some(Token::Num(n)) => n,
                    other => {
                        return Err(Error::Parse(format!(
                            "family {letter} needs a numeric parameter, found {other:?}"
                        )))
                    }
                };
                atom(letter, n)
            }
            Some(Token::Word(w)) if w == "sd" => {
                self.expect(Token::LParen)?;
                let normal = self.parse_spec()?;
                self.expect(Token::Comma)?;
                let complement = self.parse_spec()?;
                self.expect(Token::Comma)?;
                let degree = spec_degree(&normal);
                let mut table = vec![self.parse_perm(degree)?];
                while matches!(self.peek(), Some(Token::Semi)) {
                    self.next();
                    table.push(self.parse_perm(degree)?);
                }
                self.expect(Token::RParen)?;
                Ok(GroupSpec::Semidirect {
                    normal: Box::new(normal),
                    complement: Box::new(complement),
                    table,
                })
            }
            other => Err(Error::Parse(format!("expected a group term, found {other:?}"))),
        }
    }

    fn parse_perm(&mut self, degree: usize) -> Result<Perm> {
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        loop {
            match self.peek() {
                Some(Token::LParen) => {
                    self.next();
                    let mut cycle = Vec::new();
                    loop {
                        match self.next() {
                            Some(Token::Num(n)) => cycle.push(n as u16),
                            Some(Token::RParen) => break,
                            other => {
                                return Err(Error::Parse(format!(
                                    "expected point or ')', found {other:?}"
                                )))
                            }
                        }
                    }
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                }
                _ => break,
            }
        }
        Perm::from_cycles(degree, &cycles)
    }
}

fn atom(letter: char, n: u64) -> Result<GroupSpec> {
    match letter {
        'C' if n >= 1 => Ok(GroupSpec::Cyclic(n)),
        'D' if n >= 2 && n % 2 == 0 => Ok(GroupSpec::Dihedral(n)),
        'Q' if n >= 8 && n % 4 == 0 => Ok(GroupSpec::Dicyclic(n)),
        'S' if (1..=6).contains(&n) => Ok(GroupSpec::Symmetric(n)),
        'A' if (1..=6).contains(&n) => Ok(GroupSpec::Alternating(n)),
        'E' if prime_power_base(n).is_some() => Ok(GroupSpec::ElementaryAbelian(n)),
        _ => Err(Error::Parse(format!("invalid family atom {letter}{n}"))),
    }
}

/// `Some(p)` when `n = p^k` for a prime `p` and `k ≥ 1`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= n {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { Some(p) } else { None };
        }
        p += 1;
    }
    Some(n) // n itself prime
}

/// Permutation degree a spec's construction will use.
fn spec_degree(spec: &GroupSpec) -> usize {
    match spec {
        GroupSpec::Cyclic(n) => *n as usize,
        GroupSpec::Dihedral(n) => match n {
            2 => 2,
            4 => 4,
            n => (*n as usize) / 2,
        },
        GroupSpec::Dicyclic(n) => *n as usize,
        GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) => *n as usize,
        GroupSpec::ElementaryAbelian(n) => {
            let p = prime_power_base(*n).expect("validated at parse time");
            let mut k = 0usize;
            let mut m = *n;
            while m > 1 {
                m /= p;
                k += 1;
            }
            p as usize * k
        }
        GroupSpec::Product(fs) => fs.iter().map(spec_degree).sum(),
        GroupSpec::Semidirect { normal, .. } => spec_degree(normal),
    }
}

pub fn parse_spec(input: &str) -> Result<GroupSpec> {
    let tokens = lex(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let spec = parser.parse_spec()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after spec: {:?}",
            &parser.tokens[parser.pos..]
        )));
    }
    Ok(spec)
}

/// Canonical form of a spec string.
pub fn canonical(input: &str) -> Result<String> {
    Ok(parse_spec(input)?.to_string())
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Canonical generator permutations for a spec.
fn generator_perms(spec: &GroupSpec) -> Result<Vec<Perm>> {
    let degree = spec_degree(spec);
    match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 1 {
                Ok(vec![])
            } else {
                Ok(vec![Perm::from_cycles(degree, &[(0..*n as u16).collect()])?])
            }
        }
        GroupSpec::Dihedral(n) => match n {
            2 => Ok(vec![Perm::from_cycles(2, &[vec![0, 1]])?]),
            4 => Ok(vec![
                Perm::from_cycles(4, &[vec![0, 1]])?,
                Perm::from_cycles(4, &[vec![2, 3]])?,
            ]),
            m => {
                let pts = (*m / 2) as u16;
                let rotation = Perm::from_cycles(degree, &[(0..pts).collect()])?;
                let reflection =
                    Perm::from_images((0..pts).map(|i| (pts - i) % pts).collect())?;
                Ok(vec![rotation, reflection])
            }
        },
        GroupSpec::Dicyclic(m) => {
            // Regular action of ⟨a, b | a^{2k} = 1, b² = a^k, bab⁻¹ = a⁻¹⟩,
            // elements encoded as a^i b^j ↦ i + 2k·j.
            let k = (*m / 4) as u16;
            let two_k = 2 * k;
            let encode = |i: u16, j: u16| (i % two_k) + two_k * j;
            let left_a = Perm::from_images(
                (0..*m as u16)
                    .map(|x| {
                        let (i, j) = (x % two_k, x / two_k);
                        encode(i + 1, j)
                    })
                    .collect(),
            )?;
            let left_b = Perm::from_images(
                (0..*m as u16)
                    .map(|x| {
                        let (i, j) = (x % two_k, x / two_k);
                        if j == 0 {
                            encode(two_k - i, 1)
                        } else {
                            encode(two_k - i + k, 0)
                        }
                    })
                    .collect(),
            )?;
            Ok(vec![left_a, left_b])
        }
        GroupSpec::Symmetric(n) => match n {
            1 => Ok(vec![]),
            2 => Ok(vec![Perm::from_cycles(2, &[vec![0, 1]])?]),
            n => Ok(vec![
                Perm::from_cycles(degree, &[(0..*n as u16).collect()])?,
                Perm::from_cycles(degree, &[vec![0, 1]])?,
            ]),
        },
        GroupSpec::Alternating(n) => match n {
            1 | 2 => Ok(vec![]),
            3 => Ok(vec![Perm::from_cycles(3, &[vec![0, 1, 2]])?]),
            n if n % 2 == 1 => Ok(vec![
                Perm::from_cycles(degree, &[vec![0, 1, 2]])?,
                Perm::from_cycles(degree, &[(0..*n as u16).collect()])?,
            ]),
            n => Ok(vec![
                Perm::from_cycles(degree, &[vec![0, 1, 2]])?,
                Perm::from_cycles(degree, &[(1..*n as u16).collect()])?,
            ]),
        },
        GroupSpec::ElementaryAbelian(m) => {
            let p = prime_power_base(*m).expect("validated at parse time");
            let k = degree / p as usize;
            (0..k)
                .map(|block| {
                    let start = (block * p as usize) as u16;
                    Perm::from_cycles(degree, &[(start..start + p as u16).collect()])
                })
                .collect()
        }
        GroupSpec::Product(fs) => {
            let mut gens = Vec::new();
            let mut offset = 0usize;
            for f in fs {
                let d = spec_degree(f);
                for p in generator_perms(f)? {
                    gens.push(p.shift(offset, degree));
                }
                offset += d;
            }
            Ok(gens)
        }
        GroupSpec::Semidirect { normal, table, .. } => {
            let mut gens = generator_perms(normal)?;
            gens.extend(table.iter().cloned());
            Ok(gens)
        }
    }
}

/// Constructs the group named by a spec string under the default order cap.
pub fn construct(input: &str) -> Result<Group> {
    construct_capped(input, DEFAULT_ORDER_CAP)
}

pub fn construct_capped(input: &str, cap: usize) -> Result<Group> {
    let spec = parse_spec(input)?;
    construct_spec(&spec, cap)
}

pub fn construct_spec(spec: &GroupSpec, cap: usize) -> Result<Group> {
    if spec.order() > cap as u64 {
        return Err(Error::CapExceeded { cap });
    }
    let gens = generator_perms(spec)?;
    let mut g = close_generators_capped(spec_degree(spec).max(1), &gens, cap)?;
    if g.order() as u64 != spec.order() {
        return Err(Error::Parse(format!(
            "constructed order {} does not match the advertised order {} of {spec}",
            g.order(),
            spec.order()
        )));
    }
    if let GroupSpec::Semidirect {
        normal, complement, table,
    } = spec
    {
        validate_semidirect(&g, normal, complement, table, cap)?;
    }
    g.set_name(spec.to_string());
    Ok(g)
}

/// The semidirect table must exhibit `N` as normal with the table closure as
/// a complement isomorphic to `H`.
fn validate_semidirect(
    g: &Group,
    normal: &GroupSpec,
    complement: &GroupSpec,
    table: &[Perm],
    cap: usize,
) -> Result<()> {
    let n_gens = generator_perms(normal)?;
    let n_ids: Vec<crate::group::ElemId> = n_gens
        .iter()
        .map(|p| {
            g.index_of(p)
                .ok_or_else(|| Error::Parse("normal part does not embed".into()))
        })
        .collect::<Result<_>>()?;
    let n_sub = crate::group::generated_subgroup(g, &n_ids);
    if n_sub.order() as u64 != normal.order() {
        return Err(Error::Parse("normal part has wrong order inside sd()".into()));
    }
    if !crate::group::is_normal(g, &n_sub) {
        return Err(Error::Parse("sd() table does not normalize the normal part".into()));
    }
    let t_ids: Vec<crate::group::ElemId> = table
        .iter()
        .map(|p| {
            g.index_of(p)
                .ok_or_else(|| Error::Parse("table permutation missing from closure".into()))
        })
        .collect::<Result<_>>()?;
    let t_sub = crate::group::generated_subgroup(g, &t_ids);
    if t_sub.order() as u64 != complement.order() {
        return Err(Error::Parse(format!(
            "sd() table generates order {}, complement wants {}",
            t_sub.order(),
            complement.order()
        )));
    }
    if t_sub.mask().intersection_count(n_sub.mask()) != 1 {
        return Err(Error::Parse("sd() complement meets the normal part".into()));
    }
    let t_group = crate::structure::subgroup_as_group(g, &t_sub, "sd-complement");
    let h = construct_spec(complement, cap)?;
    if !crate::iso::is_isomorphic(&t_group, &h) {
        return Err(Error::Parse(
            "sd() complement is not isomorphic to the stated group".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

/// Atom specs in canonical generation order, capped by order.
fn sweep_atoms(max_order: u64) -> Vec<GroupSpec> {
    let mut atoms = Vec::new();
    for n in 1..=max_order {
        atoms.push(GroupSpec::Cyclic(n));
    }
    for n in [4u64, 5, 6] {
        let spec = GroupSpec::Alternating(n);
        if spec.order() <= max_order {
            atoms.push(spec);
        }
    }
    for n in [3u64, 4, 5, 6] {
        let spec = GroupSpec::Symmetric(n);
        if spec.order() <= max_order {
            atoms.push(spec);
        }
    }
    let mut elementary: Vec<u64> = Vec::new();
    for p in 2..=max_order {
        if !is_prime(p) {
            continue;
        }
        let mut pk = p.saturating_mul(p);
        while pk <= max_order {
            elementary.push(pk);
            pk = pk.saturating_mul(p);
        }
    }
    elementary.sort_unstable();
    atoms.extend(elementary.into_iter().map(GroupSpec::ElementaryAbelian));
    for m in (6..=max_order).step_by(2) {
        atoms.push(GroupSpec::Dihedral(m));
    }
    for m in (8..=max_order).step_by(4) {
        atoms.push(GroupSpec::Dicyclic(m));
    }
    atoms
}

/// All stock-family groups and pairwise direct products of order at most
/// `max_order`, deduplicated up to isomorphism. This is deliberately not a
/// complete list of all groups of each order; it is the catalogue the
/// verification sweeps quantify over.
pub fn sweep(max_order: usize) -> Result<Vec<Arc<Group>>> {
    if max_order > DEFAULT_ORDER_CAP {
        return Err(Error::CapExceeded {
            cap: DEFAULT_ORDER_CAP,
        });
    }
    let max = max_order as u64;
    let atoms = sweep_atoms(max);
    let mut candidates: Vec<GroupSpec> = atoms
        .iter()
        .filter(|a| a.order() <= max)
        .cloned()
        .collect();
    for i in 0..atoms.len() {
        if atoms[i].order() < 2 {
            continue;
        }
        for j in i..atoms.len() {
            if atoms[j].order() < 2 {
                continue;
            }
            if atoms[i].order().saturating_mul(atoms[j].order()) <= max {
                candidates.push(GroupSpec::Product(vec![atoms[i].clone(), atoms[j].clone()]));
            }
        }
    }

    // Deduplicate up to isomorphism: bucket by fingerprint, then confirm by
    // backtracking inside each bucket. First spec in generation order wins.
    let mut kept: Vec<Arc<Group>> = Vec::new();
    let mut buckets: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
    for spec in &candidates {
        let g = Arc::new(construct_spec(spec, DEFAULT_ORDER_CAP)?);
        let bucket = buckets.entry(fingerprint(&g)).or_default();
        let duplicate = bucket
            .iter()
            .any(|&k| backtrack_isomorphic(&kept[k], &g));
        if !duplicate {
            bucket.push(kept.len());
            kept.push(g);
        }
    }

    kept.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.name().cmp(b.name()))
    });
    Ok(kept)
}

/// Catalogue name of a group, when it is isomorphic to a stock family or a
/// pairwise product; used to label `beta` results.
pub fn identify(g: &Group) -> Option<String> {
    let order = g.order() as u64;
    let atoms = sweep_atoms(order.min(DEFAULT_ORDER_CAP as u64));
    let mut candidates: Vec<GroupSpec> = Vec::new();
    for a in &atoms {
        if a.order() == order {
            candidates.push(a.clone());
        }
    }
    for i in 0..atoms.len() {
        if atoms[i].order() < 2 || order % atoms[i].order() != 0 {
            continue;
        }
        for j in i..atoms.len() {
            if atoms[i].order() * atoms[j].order() == order {
                candidates.push(GroupSpec::Product(vec![atoms[i].clone(), atoms[j].clone()]));
            }
        }
    }
    let fp = fingerprint(g);
    for spec in candidates {
        if let Ok(candidate) = construct_spec(&spec, DEFAULT_ORDER_CAP) {
            if fingerprint(&candidate) == fp && backtrack_isomorphic(&candidate, g) {
                return Some(spec.to_string());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;
    use proptest::prelude::*;

    #[test]
    fn construct_examples() {
        let c6 = construct("C6").unwrap();
        assert_eq!(c6.order(), 6);
        assert!(crate::structure::is_cyclic(&c6));

        let g = construct("A5 x C2").unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.degree(), 7);

        let s5 = construct("S5").unwrap();
        assert_eq!(s5.order(), 120);
        let factors = crate::iso::composition_factors(&s5).unwrap();
        assert_eq!(factors.len(), 2);
    }

    #[test]
    fn advertised_orders() {
        for (spec, order) in [
            ("C12", 12),
            ("D8", 8),
            ("D2", 2),
            ("D4", 4),
            ("Q8", 8),
            ("Q12", 12),
            ("S4", 24),
            ("A4", 12),
            ("A6", 360),
            ("E8", 8),
            ("E9", 9),
            ("C3 x C5", 15),
            ("C2 x C2 x C2", 8),
        ] {
            let g = construct(spec).unwrap();
            assert_eq!(g.order(), order, "order of {spec}");
        }
    }

    #[test]
    fn q8_is_the_quaternion_group() {
        let q8 = construct("Q8").unwrap();
        // Exactly one involution distinguishes Q8 from D8.
        let involutions = (0..8).filter(|&e| q8.elem_order(e) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!is_isomorphic(&q8, &construct("D8").unwrap()));
    }

    #[test]
    fn elementary_abelian_requires_prime_power() {
        assert!(construct("E6").is_err());
        assert!(construct("E1").is_err());
        assert_eq!(construct("E49").unwrap().order(), 49);
    }

    #[test]
    fn s6_exceeds_default_cap() {
        assert!(matches!(construct("S6"), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn semidirect_d8_from_c4_and_c2() {
        let g = construct("sd(C4, C2, (1 3))").unwrap();
        assert_eq!(g.order(), 8);
        assert!(is_isomorphic(&g, &construct("D8").unwrap()));
    }

    #[test]
    fn semidirect_rejects_bad_tables() {
        // (0 1) does not normalize C4's rotation subgroup... it does not even
        // keep the closure at order 8.
        assert!(construct("sd(C4, C2, (0 1))").is_err());
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        assert_eq!(canonical("A5xC2").unwrap(), "A5 x C2");
        assert_eq!(canonical("  C2  x  C3 ").unwrap(), "C2 x C3");
        assert_eq!(canonical("sd(C4,C2,(1 3))").unwrap(), "sd(C4, C2, (1 3))");
    }

    #[test]
    fn canonical_form_is_stable() {
        for spec in ["C6", "A5 x C2", "D8 x C3", "sd(C4, C2, (1 3))"] {
            let c = canonical(spec).unwrap();
            assert_eq!(canonical(&c).unwrap(), c);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(parse_spec("").is_err());
        assert!(parse_spec("C").is_err());
        assert!(parse_spec("B5").is_err());
        assert!(parse_spec("C6 x").is_err());
        assert!(parse_spec("D7").is_err());
        assert!(parse_spec("Q6").is_err());
        assert!(parse_spec("S7").is_err());
        assert!(parse_spec("C6 C7").is_err());
    }

    #[test]
    fn sweep_of_one_is_the_trivial_group() {
        let groups = sweep(1).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].order(), 1);
    }

    #[test]
    fn sweep_six_contains_the_expected_groups() {
        let groups = sweep(6).unwrap();
        let names: Vec<&str> = groups.iter().map(|g| g.name()).collect();
        for expected in ["C1", "C2", "C3", "C4", "E4", "C5", "C6", "S3"] {
            assert!(names.contains(&expected), "sweep(6) missing {expected}: {names:?}");
        }
        assert_eq!(groups.len(), 8);
    }

    #[test]
    fn sweep_sixty_contains_a5() {
        let groups = sweep(60).unwrap();
        assert!(groups.iter().any(|g| g.name() == "A5"));
    }

    #[test]
    fn sweep_is_isomorphism_deduplicated() {
        let groups = sweep(24).unwrap();
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                assert!(!is_isomorphic(a, b), "{} and {} are isomorphic", a.name(), b.name());
            }
        }
    }

    #[test]
    fn identify_names_v4_and_beta_targets() {
        let v4 = construct("E4").unwrap();
        assert_eq!(identify(&v4).unwrap(), "E4");
        let c6 = construct("C2 x C3").unwrap();
        assert_eq!(identify(&c6).unwrap(), "C6");
    }

    fn arb_spec() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            (1u64..16).prop_map(|n| format!("C{n}")),
            (1u64..8).prop_map(|n| format!("D{}", 2 * n + 4)),
            (2u64..5).prop_map(|n| format!("Q{}", 4 * n)),
            (1u64..5).prop_map(|n| format!("S{n}")),
            (1u64..5).prop_map(|n| format!("A{n}")),
            prop_oneof![Just(4u64), Just(8), Just(9), Just(16), Just(25), Just(27)]
                .prop_map(|n| format!("E{n}")),
        ];
        prop::collection::vec(atom, 1..3).prop_map(|parts| parts.join(" x "))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn canonicalization_round_trips(spec in arb_spec()) {
            let c = canonical(&spec).unwrap();
            prop_assert_eq!(canonical(&c).unwrap(), c.clone());
            // Same group either way.
            let g1 = construct(&spec);
            let g2 = construct(&c);
            match (g1, g2) {
                (Ok(g1), Ok(g2)) => prop_assert_eq!(g1.order(), g2.order()),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "construction parity broke"),
            }
        }
    }
}
