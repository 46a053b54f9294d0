//! Modular arithmetic on residues, unit groups, and orbits of multiplier
//! subgroups.
//!
//! Everything downstream works with subsets of `Z_v` that are unions of
//! orbits of a subgroup `H` of the units mod `v`, so this module provides the
//! three building blocks: validated moduli, subgroups of the unit group, and
//! the orbit table of such a subgroup acting on all of `Z_v` by
//! multiplication.

use std::fmt;

use thiserror::Error;

/// Largest supported modulus; products of two residues below this bound fit
/// comfortably in 64 bits.
pub const MAX_MODULUS: u32 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("modulus {v} out of range (need 2 <= v <= {MAX_MODULUS})")]
    InvalidModulus { v: u32 },
    #[error("{g} is not a unit mod {v}")]
    NonUnitGenerator { g: u32, v: u32 },
    #[error("set is not a subgroup of the units mod {v}: {reason}")]
    SubgroupNotClosed { v: u32, reason: String },
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ===== modulus =====

/// A validated modulus `v` with `2 <= v <= MAX_MODULUS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(v: u32) -> Result<Self, ResidueError> {
        if (2..=MAX_MODULUS).contains(&v) {
            Ok(Modulus(v))
        } else {
            Err(ResidueError::InvalidModulus { v })
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduce an arbitrary value into `[0, v)`.
    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % u64::from(self.0)) as u32
    }

    /// `a * b mod v` with the product taken in 64 bits.
    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        self.reduce(u64::from(a) * u64::from(b))
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        self.reduce(u64::from(a) + u64::from(b))
    }

    /// `a - b mod v` for residues already in range.
    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b % self.0))
    }

    /// Additive inverse of a residue.
    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn is_unit(self, a: u32) -> bool {
        gcd(a % self.0, self.0) == 1
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All units mod `v`, ascending.
pub fn unit_group(v: Modulus) -> Vec<u32> {
    (1..v.get()).filter(|&a| v.is_unit(a)).collect()
}

// ===== residue sets =====

/// A subset of `Z_v`, stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueSet {
    v: Modulus,
    elems: Vec<u32>,
}

impl ResidueSet {
    /// Build a set from arbitrary values, reducing mod `v` and normalizing.
    pub fn new(v: Modulus, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut elems: Vec<u32> = elems.into_iter().map(|x| x % v.get()).collect();
        elems.sort_unstable();
        elems.dedup();
        ResidueSet { v, elems }
    }

    pub fn empty(v: Modulus) -> Self {
        ResidueSet { v, elems: Vec::new() }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&(x % self.v.get())).is_ok()
    }

    /// `{-x : x in X}`.
    pub fn negate(&self) -> Self {
        ResidueSet::new(self.v, self.elems.iter().map(|&x| self.v.neg(x)))
    }

    /// A set equal to its own negation.
    pub fn is_symmetric(&self) -> bool {
        self.elems
            .iter()
            .all(|&x| self.contains(self.v.neg(x)))
    }

    /// `{x + g : x in X}`.
    pub fn translate(&self, g: u32) -> Self {
        ResidueSet::new(self.v, self.elems.iter().map(|&x| self.v.add(x, g)))
    }

    /// `{m * x : x in X}`. The map is a bijection only when `m` is a unit;
    /// callers that need an automorphism must check that themselves.
    pub fn scale(&self, m: u32) -> Self {
        ResidueSet::new(self.v, self.elems.iter().map(|&x| self.v.mul(x, m)))
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

// ===== multiplier subgroups =====

/// A subgroup of the unit group mod `v`, elements sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupH {
    v: Modulus,
    elems: Vec<u32>,
}

impl SubgroupH {
    /// The trivial subgroup `{1}`.
    pub fn trivial(v: Modulus) -> Self {
        SubgroupH { v, elems: vec![1] }
    }

    /// Close a generator list under multiplication mod `v`.
    pub fn generate(v: Modulus, generators: &[u32]) -> Result<Self, ResidueError> {
        for &g in generators {
            if !v.is_unit(g) {
                return Err(ResidueError::NonUnitGenerator { g, v: v.get() });
            }
        }
        let mut elems = vec![1u32];
        let mut frontier = vec![1u32];
        while let Some(a) = frontier.pop() {
            for &g in generators {
                let b = v.mul(a, g % v.get());
                if !elems.contains(&b) {
                    elems.push(b);
                    frontier.push(b);
                }
            }
        }
        elems.sort_unstable();
        Ok(SubgroupH { v, elems })
    }

    /// Validate an explicit element list as a subgroup of the units.
    pub fn from_elements(v: Modulus, elems: impl IntoIterator<Item = u32>) -> Result<Self, ResidueError> {
        let mut elems: Vec<u32> = elems.into_iter().map(|x| x % v.get()).collect();
        elems.sort_unstable();
        elems.dedup();
        if !elems.contains(&1) {
            return Err(ResidueError::SubgroupNotClosed {
                v: v.get(),
                reason: "missing the identity 1".into(),
            });
        }
        for &a in &elems {
            if !v.is_unit(a) {
                return Err(ResidueError::SubgroupNotClosed {
                    v: v.get(),
                    reason: format!("{a} is not a unit"),
                });
            }
        }
        for &a in &elems {
            for &b in &elems {
                let c = v.mul(a, b);
                if elems.binary_search(&c).is_err() {
                    return Err(ResidueError::SubgroupNotClosed {
                        v: v.get(),
                        reason: format!("{a}*{b} = {c} is missing"),
                    });
                }
            }
        }
        Ok(SubgroupH { v, elems })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    #[inline]
    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn contains(&self, a: u32) -> bool {
        self.elems.binary_search(&(a % self.v.get())).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }
}

impl fmt::Display for SubgroupH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

// ===== orbit tables =====

/// The orbits of a multiplier subgroup acting on all of `Z_v`, ordered by
/// their smallest element; every orbit's representative is that minimum.
///
/// `{0}` is always an orbit and always comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTable {
    subgroup: SubgroupH,
    orbits: Vec<Vec<u32>>,
    orbit_of: Vec<u32>,
}

impl OrbitTable {
    pub fn build(subgroup: SubgroupH) -> Self {
        let v = subgroup.modulus().get();
        let mut orbit_of = vec![u32::MAX; v as usize];
        let mut orbits = Vec::new();
        for r in 0..v {
            if orbit_of[r as usize] != u32::MAX {
                continue;
            }
            let idx = orbits.len() as u32;
            let mut orbit: Vec<u32> = subgroup
                .elements()
                .iter()
                .map(|&h| subgroup.modulus().mul(h, r))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                orbit_of[x as usize] = idx;
            }
            orbits.push(orbit);
        }
        OrbitTable { subgroup, orbits, orbit_of }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.subgroup.modulus()
    }

    #[inline]
    pub fn subgroup(&self) -> &SubgroupH {
        &self.subgroup
    }

    #[inline]
    pub fn num_orbits(&self) -> usize {
        self.orbits.len()
    }

    #[inline]
    pub fn orbit(&self, idx: usize) -> &[u32] {
        &self.orbits[idx]
    }

    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    /// Index of the orbit containing a residue.
    #[inline]
    pub fn orbit_index_of(&self, x: u32) -> usize {
        self.orbit_of[(x % self.modulus().get()) as usize] as usize
    }

    /// Canonical representative (minimum) of the orbit containing `x`.
    pub fn rep_of(&self, x: u32) -> u32 {
        self.orbits[self.orbit_index_of(x)][0]
    }

    /// All orbit representatives, ascending; starts with 0.
    pub fn reps(&self) -> impl Iterator<Item = u32> + '_ {
        self.orbits.iter().map(|o| o[0])
    }

    /// Index of the orbit `-O` for orbit index `i`; negation permutes orbits
    /// because `-(h*x) = h*(-x)`.
    pub fn negation_partner(&self, i: usize) -> usize {
        self.orbit_index_of(self.modulus().neg(self.orbits[i][0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u32) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn modulus_bounds() {
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(2).is_ok());
        assert!(Modulus::new(MAX_MODULUS).is_ok());
        assert!(Modulus::new(MAX_MODULUS + 1).is_err());
    }

    #[test]
    fn unit_group_small() {
        assert_eq!(unit_group(m(12)), vec![1, 5, 7, 11]);
        // order of the unit group mod 49, against a direct gcd scan
        let direct = (1..49).filter(|&a| gcd(a, 49) == 1).count();
        assert_eq!(unit_group(m(49)).len(), direct);
        assert_eq!(direct, 42);
    }

    #[test]
    fn generate_order_three_subgroup() {
        let h = SubgroupH::generate(m(67), &[29]).unwrap();
        assert_eq!(h.elements(), &[1, 29, 37]);
        let h = SubgroupH::generate(m(151), &[8]).unwrap();
        assert_eq!(h.elements(), &[1, 8, 19, 59, 64]);
    }

    #[test]
    fn generate_rejects_non_unit() {
        assert_eq!(
            SubgroupH::generate(m(49), &[7]),
            Err(ResidueError::NonUnitGenerator { g: 7, v: 49 })
        );
    }

    #[test]
    fn from_elements_checks_closure() {
        assert!(SubgroupH::from_elements(m(67), [1, 29, 37]).is_ok());
        let e = SubgroupH::from_elements(m(67), [1, 29]).unwrap_err();
        assert!(matches!(e, ResidueError::SubgroupNotClosed { .. }), "got {e:?}");
        assert!(SubgroupH::from_elements(m(67), [29, 37]).is_err(), "identity missing");
    }

    #[test]
    fn orbits_mod_seven() {
        let t = OrbitTable::build(SubgroupH::generate(m(7), &[2]).unwrap());
        assert_eq!(t.orbits(), &[vec![0], vec![1, 2, 4], vec![3, 5, 6]]);
        assert_eq!(t.rep_of(5), 3);
        assert_eq!(t.orbit_index_of(4), 1);
        assert_eq!(t.negation_partner(1), 2);
        assert_eq!(t.negation_partner(0), 0);
    }

    #[test]
    fn orbits_mod_fortynine() {
        // {0} plus 16 orbits of size 3
        let t = OrbitTable::build(SubgroupH::generate(m(49), &[18]).unwrap());
        assert_eq!(t.num_orbits(), 17);
        assert_eq!(t.orbit(0), &[0]);
        assert!(t.orbits()[1..].iter().all(|o| o.len() == 3));
    }

    #[test]
    fn orbits_mod_sixtyseven() {
        let t = OrbitTable::build(SubgroupH::generate(m(67), &[29]).unwrap());
        assert_eq!(t.num_orbits(), 23);
    }

    #[test]
    fn degenerate_orbits_for_composite_modulus() {
        // mod 21 the subgroup {1,4,16} fixes 7: 4*7 = 28 = 7
        let t = OrbitTable::build(SubgroupH::generate(m(21), &[4]).unwrap());
        assert_eq!(t.orbit(t.orbit_index_of(7)), &[7]);
    }

    #[test]
    fn negate_and_symmetry() {
        let x = ResidueSet::new(m(7), [1, 2, 4]);
        assert_eq!(x.negate().elements(), &[3, 5, 6]);
        assert!(!x.is_symmetric());
        let s = ResidueSet::new(m(7), [0, 1, 6]);
        assert!(s.is_symmetric());
        assert!(ResidueSet::empty(m(7)).is_symmetric());
    }

    #[test]
    fn residue_set_normalizes() {
        let x = ResidueSet::new(m(7), [9, 2, 2, 16]);
        assert_eq!(x.elements(), &[2]);
        assert!(x.contains(2));
        assert!(x.contains(9));
        assert!(!x.contains(3));
    }

    #[test]
    fn translate_and_scale() {
        let x = ResidueSet::new(m(13), [1, 3, 9]);
        assert_eq!(x.translate(4).elements(), &[0, 5, 7]);
        assert_eq!(x.scale(3).elements(), &[1, 3, 9], "invariant under its own subgroup");
        assert_eq!(x.scale(2).elements(), &[2, 5, 6]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn orbits_partition(v in 2u32..300, g in 1u32..300) {
                let v = m(v);
                prop_assume!(v.is_unit(g % v.get()) && g % v.get() != 0);
                let t = OrbitTable::build(SubgroupH::generate(v, &[g % v.get()]).unwrap());
                let mut seen = vec![0u32; v.get() as usize];
                for o in t.orbits() {
                    for &x in o {
                        seen[x as usize] += 1;
                    }
                }
                prop_assert!(seen.iter().all(|&c| c == 1), "orbits must partition Z_v");
            }

            #[test]
            fn orbit_closed_under_action(v in 2u32..300, g in 1u32..300, x in 0u32..300) {
                let v = m(v);
                let g = g % v.get();
                prop_assume!(g != 0 && v.is_unit(g));
                let x = x % v.get();
                let h = SubgroupH::generate(v, &[g]).unwrap();
                let t = OrbitTable::build(h.clone());
                for &a in h.elements() {
                    prop_assert_eq!(t.orbit_index_of(v.mul(a, x)), t.orbit_index_of(x));
                }
            }

            #[test]
            fn subgroup_order_divides_unit_group(v in 2u32..300, g in 1u32..300) {
                let v = m(v);
                let g = g % v.get();
                prop_assume!(g != 0 && v.is_unit(g));
                let h = SubgroupH::generate(v, &[g]).unwrap();
                prop_assert_eq!(unit_group(v).len() % h.order(), 0);
            }

            #[test]
            fn negate_is_involution(v in 2u32..300, elems in proptest::collection::vec(0u32..300, 0..12)) {
                let v = m(v);
                let x = ResidueSet::new(v, elems);
                prop_assert_eq!(x.negate().negate(), x);
            }
        }
    }
}
