//! Four-block difference families over `Z_v`, stored either as full residue
//! sets or compactly as orbit representatives under an invariance subgroup.
//!
//! A family `(X1, X2, X3, X4)` with sizes `(k1, k2, k3, k4)` is good here
//! when every nonzero difference `d` arises exactly `lambda` times among
//! ordered pairs within blocks:
//!
//! ```text
//! N(d) = sum_i |X_i ∩ (X_i + d)| = lambda   for all d != 0.
//! ```
//!
//! The propus shape additionally needs two equal blocks (taken as
//! `X2 = X3`) and one of the remaining blocks symmetric (`X = -X`), which
//! is what the block-matrix construction in [`crate::hadamard`] consumes.

use thiserror::Error;

use crate::params::{ParameterEquation, PropusParameterSet};
use crate::residues::{Modulus, OrbitTable, ResidueSet, SubgroupH};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("block {index} has {actual} elements, expected k{index} = {expected}")]
    BlockSizeMismatch { index: usize, expected: u32, actual: usize },
    #[error("{value} is not an orbit representative mod {v} (its orbit starts at {rep})")]
    NotARepresentative { value: u32, v: u32, rep: u32 },
    #[error("set is not invariant under the subgroup mod {v}: orbit of {witness} is partly outside")]
    NotInvariant { v: u32, witness: u32 },
    #[error("{m} is not a unit mod {v}")]
    NonUnit { m: u32, v: u32 },
}

// ===== block encoding =====

/// A block given by the minimal elements of the orbits it is built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockReps {
    reps: Vec<u32>,
}

impl BlockReps {
    /// Representatives are kept sorted and de-duplicated; validity against a
    /// particular orbit table is checked by [`expand_block`].
    pub fn new(reps: impl IntoIterator<Item = u32>) -> Self {
        let mut reps: Vec<u32> = reps.into_iter().collect();
        reps.sort_unstable();
        reps.dedup();
        BlockReps { reps }
    }

    #[inline]
    pub fn elements(&self) -> &[u32] {
        &self.reps
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

impl std::fmt::Display for BlockReps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.reps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// Union of the orbits named by `reps`. Fails if any listed element is not
/// the minimum of its orbit.
pub fn expand_block(table: &OrbitTable, reps: &BlockReps) -> Result<ResidueSet, FamilyError> {
    let v = table.modulus();
    let mut elems = Vec::new();
    for &r in reps.elements() {
        let r = v.reduce(u64::from(r));
        let idx = table.orbit_index_of(r);
        let orbit = table.orbit(idx);
        if orbit[0] != r {
            return Err(FamilyError::NotARepresentative { value: r, v: v.get(), rep: orbit[0] });
        }
        elems.extend_from_slice(orbit);
    }
    Ok(ResidueSet::new(v, elems))
}

/// Inverse of [`expand_block`]: the orbit minimums of an invariant set.
pub fn contract_block(table: &OrbitTable, set: &ResidueSet) -> Result<BlockReps, FamilyError> {
    let v = table.modulus();
    assert_eq!(v, set.modulus(), "orbit table and set moduli differ");
    let mut reps = Vec::new();
    let mut seen = vec![false; table.num_orbits()];
    for &x in set.elements() {
        let idx = table.orbit_index_of(x);
        if seen[idx] {
            continue;
        }
        seen[idx] = true;
        let orbit = table.orbit(idx);
        if !orbit.iter().all(|&y| set.contains(y)) {
            return Err(FamilyError::NotInvariant { v: v.get(), witness: x });
        }
        reps.push(orbit[0]);
    }
    Ok(BlockReps::new(reps))
}

// ===== families =====

/// A four-block family together with its declared parameters and the
/// subgroup its blocks are invariant under (trivial if none was used).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceFamily {
    params: PropusParameterSet,
    subgroup: SubgroupH,
    blocks: [ResidueSet; 4],
    reps: Option<[BlockReps; 3]>,
}

impl DifferenceFamily {
    /// Build from the three-block encoding `[r1, r2, r4]`; the third block
    /// is the duplicate of the second. Sizes are checked against `params`.
    pub fn from_reps(
        table: &OrbitTable,
        params: PropusParameterSet,
        reps: [BlockReps; 3],
    ) -> Result<Self, FamilyError> {
        assert_eq!(table.modulus(), params.modulus(), "orbit table and parameter moduli differ");
        let x1 = expand_block(table, &reps[0])?;
        let x2 = expand_block(table, &reps[1])?;
        let x4 = expand_block(table, &reps[2])?;
        let blocks = [x1, x2.clone(), x2, x4];
        let k = params.k();
        for (i, block) in blocks.iter().enumerate() {
            if block.len() != k[i] as usize {
                return Err(FamilyError::BlockSizeMismatch {
                    index: i + 1,
                    expected: k[i],
                    actual: block.len(),
                });
            }
        }
        Ok(DifferenceFamily {
            params,
            subgroup: table.subgroup().clone(),
            blocks,
            reps: Some(reps),
        })
    }

    /// Build from four explicit blocks. Only sizes are checked here; run
    /// [`verify_family`] for the difference counts.
    pub fn from_blocks(
        params: PropusParameterSet,
        subgroup: SubgroupH,
        blocks: [ResidueSet; 4],
    ) -> Result<Self, FamilyError> {
        assert_eq!(subgroup.modulus(), params.modulus(), "subgroup and parameter moduli differ");
        let k = params.k();
        for (i, block) in blocks.iter().enumerate() {
            assert_eq!(block.modulus(), params.modulus(), "block and parameter moduli differ");
            if block.len() != k[i] as usize {
                return Err(FamilyError::BlockSizeMismatch {
                    index: i + 1,
                    expected: k[i],
                    actual: block.len(),
                });
            }
        }
        Ok(DifferenceFamily { params, subgroup, blocks, reps: None })
    }

    #[inline]
    pub fn params(&self) -> &PropusParameterSet {
        &self.params
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.params.modulus()
    }

    #[inline]
    pub fn subgroup(&self) -> &SubgroupH {
        &self.subgroup
    }

    #[inline]
    pub fn blocks(&self) -> &[ResidueSet; 4] {
        &self.blocks
    }

    /// The three-block encoding, present when built via [`Self::from_reps`].
    #[inline]
    pub fn reps(&self) -> Option<&[BlockReps; 3]> {
        self.reps.as_ref()
    }
}

// ===== difference counting =====

/// `count(d)` over all ordered same-block pairs; index 0 holds the total
/// block size (pairs with both ends equal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceCountTable {
    v: Modulus,
    counts: Vec<u32>,
}

impl DifferenceCountTable {
    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn count(&self, d: u32) -> u32 {
        self.counts[self.v.reduce(u64::from(d)) as usize]
    }

    #[inline]
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// First nonzero difference whose count deviates from `lambda`, with the
    /// count found there.
    pub fn first_mismatch(&self, lambda: u32) -> Option<(u32, u32)> {
        (1..self.v.get()).find_map(|d| {
            let n = self.counts[d as usize];
            (n != lambda).then_some((d, n))
        })
    }
}

/// Tally `a - b` over ordered pairs within each of the given blocks.
///
/// Quadratic in the block sizes, which is fine for the intended range of
/// moduli (a few hundred).
pub fn difference_counts_of(v: Modulus, blocks: &[ResidueSet]) -> DifferenceCountTable {
    let mut counts = vec![0u32; v.get() as usize];
    for block in blocks {
        assert_eq!(block.modulus(), v, "block modulus differs from {v}");
        for &a in block.elements() {
            for &b in block.elements() {
                counts[v.sub(a, b) as usize] += 1;
            }
        }
    }
    DifferenceCountTable { v, counts }
}

/// Difference counts over the four blocks of a family.
pub fn difference_counts(family: &DifferenceFamily) -> DifferenceCountTable {
    difference_counts_of(family.modulus(), family.blocks())
}

// ===== verification =====

/// Everything [`verify_family`] determines about a family in one pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyVerdict {
    /// Parameters valid, sizes match, and every nonzero difference is
    /// covered exactly `lambda` times.
    pub is_gs: bool,
    /// `is_gs` plus an equal pair of blocks one of whose complementary
    /// blocks is symmetric.
    pub is_propus: bool,
    /// All pairs `(i, j)`, `i < j`, with `X_i = X_j` (1-based).
    pub equal_pairs: Vec<(u8, u8)>,
    /// All `i` with `X_i = -X_i` (1-based).
    pub symmetric_blocks: Vec<u8>,
    /// Parameter equations that fail on the declared header.
    pub violated_equations: Vec<ParameterEquation>,
    /// Blocks whose size disagrees with the declared `k_i` (1-based).
    pub size_mismatches: Vec<u8>,
    /// First `d != 0` with `N(d) != lambda`, as `(d, N(d))`.
    pub first_bad_difference: Option<(u32, u32)>,
}

/// Check a family against its declared parameters and classify its
/// propus-relevant structure.
pub fn verify_family(family: &DifferenceFamily) -> FamilyVerdict {
    let params = family.params();
    let check = params.validate();
    let k = params.k();

    let size_mismatches: Vec<u8> = (0..4)
        .filter(|&i| family.blocks()[i].len() != k[i] as usize)
        .map(|i| i as u8 + 1)
        .collect();

    let mut equal_pairs = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if family.blocks()[i] == family.blocks()[j] {
                equal_pairs.push((i as u8 + 1, j as u8 + 1));
            }
        }
    }
    let symmetric_blocks: Vec<u8> = (0..4)
        .filter(|&i| family.blocks()[i].is_symmetric())
        .map(|i| i as u8 + 1)
        .collect();

    let table = difference_counts(family);
    let first_bad_difference = table.first_mismatch(params.lambda());

    let is_gs =
        check.is_valid() && size_mismatches.is_empty() && first_bad_difference.is_none();
    let is_propus = is_gs
        && equal_pairs.iter().any(|&(i, j)| {
            symmetric_blocks.iter().any(|&s| s != i && s != j)
        });

    FamilyVerdict {
        is_gs,
        is_propus,
        equal_pairs,
        symmetric_blocks,
        violated_equations: check.violated,
        size_mismatches,
        first_bad_difference,
    }
}

/// Does multiplication by `m` fix every block up to a (per-block)
/// translation? `m` must be a unit.
pub fn is_multiplier(family: &DifferenceFamily, m: u32) -> Result<bool, FamilyError> {
    let v = family.modulus();
    let m = v.reduce(u64::from(m));
    if !v.is_unit(m) {
        return Err(FamilyError::NonUnit { m, v: v.get() });
    }
    Ok(family.blocks().iter().all(|block| {
        if block.is_empty() {
            return true;
        }
        let scaled = block.scale(m);
        let first = scaled.elements()[0];
        // A valid translate must send some element of the block to the
        // smallest element of the scaled block; try each candidate offset.
        block.elements().iter().any(|&x| {
            let g = v.sub(first, x);
            block.translate(g) == scaled
        })
    }))
}
