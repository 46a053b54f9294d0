//! ±1 indicator sequences of residue sets and their periodic
//! autocorrelation.
//!
//! A subset `X` of `Z_v` becomes the sequence `x_j = -1` for `j` in `X` and
//! `+1` otherwise. Its periodic autocorrelation at shift `s` is
//!
//! ```text
//! PAF(s) = sum_j x_j * x_{j+s}   (indices mod v),
//! ```
//!
//! which ties back to set intersections through
//! `PAF(s) = v - 4*(k - |X ∩ (X + s)|)` for `|X| = k`. In particular every
//! value is congruent to `v` mod 4.

use thiserror::Error;

use crate::residues::{Modulus, ResidueSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("shift {s} reduces to 0 mod {v}; autocorrelation needs a nonzero shift")]
    ZeroShift { s: u32, v: u32 },
}

/// A length-`v` sequence over {+1, -1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    v: Modulus,
    entries: Vec<i8>,
}

impl BinarySequence {
    /// Indicator sequence of a set: -1 on the set, +1 off it.
    pub fn from_set(set: &ResidueSet) -> Self {
        let v = set.modulus();
        let mut entries = vec![1i8; v.get() as usize];
        for &x in set.elements() {
            entries[x as usize] = -1;
        }
        BinarySequence { v, entries }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // a modulus is at least 2
    }

    #[inline]
    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Sum of the entries; `v - 2k` for the indicator sequence of a k-set.
    pub fn sum(&self) -> i64 {
        self.entries.iter().map(|&e| i64::from(e)).sum()
    }
}

/// Shorthand for [`BinarySequence::from_set`].
pub fn to_sequence(set: &ResidueSet) -> BinarySequence {
    BinarySequence::from_set(set)
}

/// `|X ∩ (X + s)|` for a nonzero shift.
pub fn set_autocorrelation(set: &ResidueSet, s: u32) -> Result<u32, SequenceError> {
    let v = set.modulus();
    let s = v.reduce(u64::from(s));
    if s == 0 {
        return Err(SequenceError::ZeroShift { s, v: v.get() });
    }
    Ok(set
        .elements()
        .iter()
        .filter(|&&x| set.contains(v.add(x, s)))
        .count() as u32)
}

// ===== autocorrelation profiles =====

/// The full periodic autocorrelation of a sequence, with its
/// classification flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PafProfile {
    values: Vec<i64>,
    sequence_sum: i64,
}

impl PafProfile {
    /// All values, indexed by shift; index 0 is the peak `v`.
    #[inline]
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn peak(&self) -> i64 {
        self.values[0]
    }

    /// Distinct values over nonzero shifts, descending.
    pub fn off_peak_levels(&self) -> Vec<i64> {
        let mut levels: Vec<i64> = self.values[1..].to_vec();
        levels.sort_unstable_by(|a, b| b.cmp(a));
        levels.dedup();
        levels
    }

    /// Distinct values over all shifts, peak included, descending.
    pub fn level_set(&self) -> Vec<i64> {
        let mut levels = self.off_peak_levels();
        if !levels.contains(&self.peak()) {
            levels.insert(0, self.peak());
        }
        levels
    }

    /// Exactly three distinct values over all shifts, peak included.
    pub fn three_level(&self) -> bool {
        self.level_set().len() == 3
    }

    /// Off-peak values drawn from {1, -3}. Only defined when the length is
    /// 1 mod 4 (otherwise those values cannot occur at all shifts), hence
    /// the absent flag for other lengths.
    pub fn optimal(&self) -> Option<bool> {
        let v = self.values.len() as i64;
        (v % 4 == 1).then(|| self.values[1..].iter().all(|&p| p == 1 || p == -3))
    }

    /// Entry sum of magnitude 1, i.e. as balanced as odd length allows.
    pub fn balanced(&self) -> bool {
        self.sequence_sum.abs() == 1
    }
}

/// Compute the full autocorrelation profile directly (quadratic; lengths
/// here are a few hundred at most).
pub fn paf(seq: &BinarySequence) -> PafProfile {
    let v = seq.len();
    let e = seq.entries();
    let values = (0..v)
        .map(|s| {
            (0..v)
                .map(|j| i64::from(e[j]) * i64::from(e[(j + s) % v]))
                .sum()
        })
        .collect();
    PafProfile { values, sequence_sum: seq.sum() }
}
