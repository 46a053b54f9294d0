//! Parameter sets `(v; k1, k2, k3, k4; lambda)` for four-block difference
//! families, their defining equations, and feasibility against an orbit
//! structure.
//!
//! A quadruple of block sizes is usable here when the three counting
//! identities hold:
//!
//! * sum of `k_i * (k_i - 1)` equals `lambda * (v - 1)` (every nonzero
//!   difference is covered `lambda` times),
//! * sum of `k_i` equals `lambda + v`,
//! * sum of `(v - 2*k_i)^2` equals `4*v` (the four-square form of the same
//!   conditions, which is what makes the associated matrix construction
//!   work out).
//!
//! The "propus" shape additionally requires the two middle sizes to agree,
//! `k2 = k3`, so that the corresponding blocks can be taken equal.

use thiserror::Error;

use crate::residues::{Modulus, OrbitTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("modulus {v} is even; block-size enumeration needs odd v")]
    EvenModulus { v: u32 },
    #[error("block size k{index} = {k} exceeds the modulus {v}")]
    BlockSizeOutOfRange { index: usize, k: u32, v: u32 },
}

/// The three defining identities, named for what they count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterEquation {
    /// `sum k_i (k_i - 1) = lambda (v - 1)`.
    DifferencePairCount,
    /// `sum k_i = lambda + v`.
    SizeSum,
    /// `sum (v - 2 k_i)^2 = 4 v`.
    FourSquare,
}

/// Outcome of checking a parameter set against the defining equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCheck {
    /// Equations that fail, in declaration order; empty means valid.
    pub violated: Vec<ParameterEquation>,
    /// Whether the middle sizes agree (`k2 = k3`), the propus condition.
    pub propus_pair: bool,
}

impl ParamCheck {
    pub fn is_valid(&self) -> bool {
        self.violated.is_empty()
    }
}

/// A `(v; k1, k2, k3, k4; lambda)` header. Construction only range-checks;
/// the equations are checked by [`PropusParameterSet::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropusParameterSet {
    v: Modulus,
    k: [u32; 4],
    lambda: u32,
}

impl PropusParameterSet {
    pub fn new(v: Modulus, k: [u32; 4], lambda: u32) -> Result<Self, ParamError> {
        for (i, &ki) in k.iter().enumerate() {
            if ki > v.get() {
                return Err(ParamError::BlockSizeOutOfRange { index: i + 1, k: ki, v: v.get() });
            }
        }
        Ok(PropusParameterSet { v, k, lambda })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn k(&self) -> [u32; 4] {
        self.k
    }

    #[inline]
    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// Check all three equations exactly (64-bit arithmetic throughout) and
    /// report the propus pair condition alongside.
    pub fn validate(&self) -> ParamCheck {
        let v = i64::from(self.v.get());
        let k = self.k.map(i64::from);
        let lambda = i64::from(self.lambda);
        let mut violated = Vec::new();
        if k.iter().map(|&ki| ki * (ki - 1)).sum::<i64>() != lambda * (v - 1) {
            violated.push(ParameterEquation::DifferencePairCount);
        }
        if k.iter().sum::<i64>() != lambda + v {
            violated.push(ParameterEquation::SizeSum);
        }
        if k.iter().map(|&ki| (v - 2 * ki) * (v - 2 * ki)).sum::<i64>() != 4 * v {
            violated.push(ParameterEquation::FourSquare);
        }
        ParamCheck { violated, propus_pair: self.k[1] == self.k[2] }
    }

    /// The normalized shape emitted by [`enumerate_propus_params`]:
    /// `2*k_i <= v`, `k2 = k3`, and `k1 >= k4`.
    pub fn is_normalized(&self) -> bool {
        self.k.iter().all(|&ki| 2 * ki <= self.v.get())
            && self.k[1] == self.k[2]
            && self.k[0] >= self.k[3]
    }

    /// Each `k_i` must be a sum of orbit sizes for an invariant block of that
    /// size to exist; checked independently per size by subset-sum over the
    /// orbit-size multiset.
    pub fn h_feasible(&self, table: &OrbitTable) -> bool {
        assert_eq!(
            table.modulus(),
            self.v,
            "orbit table modulus {} does not match parameter set modulus {}",
            table.modulus(),
            self.v
        );
        let reachable = subset_sums(table, self.v.get());
        self.k.iter().all(|&ki| reachable[ki as usize])
    }
}

impl std::fmt::Display for PropusParameterSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({};{},{},{},{};{})",
            self.v, self.k[0], self.k[1], self.k[2], self.k[3], self.lambda
        )
    }
}

/// Bitset of sums reachable from the orbit-size multiset, up to `cap`.
///
/// Sizes repeat heavily (they all divide the subgroup order), so the counts
/// are binary-split before the shift-or sweep.
fn subset_sums(table: &OrbitTable, cap: u32) -> Vec<bool> {
    let mut counts: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for orbit in table.orbits() {
        *counts.entry(orbit.len()).or_insert(0) += 1;
    }
    let words = (cap as usize + 64) / 64 + 1;
    let mut bits = vec![0u64; words];
    bits[0] = 1;
    let shift_or = |bits: &mut Vec<u64>, by: usize| {
        let word_shift = by / 64;
        let bit_shift = by % 64;
        for i in (word_shift..bits.len()).rev() {
            let mut w = bits[i - word_shift] << bit_shift;
            if bit_shift > 0 && i > word_shift {
                w |= bits[i - word_shift - 1] >> (64 - bit_shift);
            }
            bits[i] |= w;
        }
    };
    for (&size, &count) in &counts {
        let mut remaining = count;
        let mut chunk = 1usize;
        while remaining > 0 {
            let take = chunk.min(remaining);
            shift_or(&mut bits, size * take);
            remaining -= take;
            chunk *= 2;
        }
    }
    (0..=cap as usize).map(|s| bits[s / 64] >> (s % 64) & 1 == 1).collect()
}

/// All normalized propus parameter sets for an odd modulus, largest block
/// sizes first.
///
/// Iterates the odd complements `a_i = v - 2*k_i` with `a2 = a3` and
/// `a1 <= a4` over solutions of `a1^2 + 2*a2^2 + a4^2 = 4*v`.
pub fn enumerate_propus_params(v: Modulus) -> Result<Vec<PropusParameterSet>, ParamError> {
    if v.get().is_multiple_of(2) {
        return Err(ParamError::EvenModulus { v: v.get() });
    }
    let target = 4 * i64::from(v.get());
    let mut out = Vec::new();
    let mut a1: i64 = 1;
    while a1 * a1 <= target {
        let mut a2: i64 = 1;
        while a1 * a1 + 2 * a2 * a2 <= target {
            let rest = target - a1 * a1 - 2 * a2 * a2;
            let a4 = (rest as f64).sqrt().round() as i64;
            for c in [a4 - 1, a4, a4 + 1] {
                if c >= a1 && c % 2 == 1 && c * c == rest {
                    let k = |a: i64| ((i64::from(v.get()) - a) / 2) as u32;
                    let ks = [k(a1), k(a2), k(a2), k(c)];
                    let lambda = ks.iter().map(|&x| i64::from(x)).sum::<i64>() - i64::from(v.get());
                    if lambda >= 0 {
                        out.push(PropusParameterSet { v, k: ks, lambda: lambda as u32 });
                    }
                }
            }
            a2 += 2;
        }
        a1 += 2;
    }
    out.sort_by_key(|p| std::cmp::Reverse(p.k));
    out.dedup();
    Ok(out)
}
