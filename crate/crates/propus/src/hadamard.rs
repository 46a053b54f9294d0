//! Assembling four circulant ±1 blocks into a candidate symmetric Hadamard
//! matrix of order `4v`, and verifying the result exactly.
//!
//! The 4x4 block template uses a circulant `A_i` for each block of the
//! family and the back-diagonal permutation `R` (ones where
//! `i + j = v - 1`):
//!
//! ```text
//! [ -A1    A2*R  A3*R  A4*R ]
//! [  A3*R  R*A4  A1   -R*A2 ]
//! [  A2*R  A1   -R*A4  R*A3 ]
//! [  A4*R -R*A3  R*A2  A1   ]
//! ```
//!
//! For circulant `A`, both `A*R` and `R*A` are symmetric, and
//! `R*A*R = A^T`; the template is then symmetric as a whole exactly when
//! `A1` is symmetric and `A2 = A3`, and its Gram condition reduces to
//! `sum_i A_i * A_i^T = 4v * I`, which is the difference-family property.
//! Hence a verified propus family yields a symmetric Hadamard matrix.

use rayon::prelude::*;
use thiserror::Error;

use crate::families::DifferenceFamily;
use crate::residues::{Modulus, ResidueSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HadamardError {
    #[error("blocks have different orders: {a} vs {b}")]
    DimensionMismatch { a: u32, b: u32 },
    #[error("family admits no propus arrangement: {reason}")]
    NoValidArrangement { reason: String },
    #[error("not a square ±1 matrix: {reason}")]
    MalformedMatrix { reason: String },
}

// ===== circulants =====

/// A circulant ±1 matrix, stored by its first row: `entry(i, j) =
/// row[(j - i) mod v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulant {
    v: Modulus,
    first_row: Vec<i8>,
}

impl Circulant {
    /// Indicator circulant of a set: -1 at offsets in the set.
    pub fn from_set(set: &ResidueSet) -> Self {
        let v = set.modulus();
        let mut first_row = vec![1i8; v.get() as usize];
        for &x in set.elements() {
            first_row[x as usize] = -1;
        }
        Circulant { v, first_row }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    #[inline]
    pub fn first_row(&self) -> &[i8] {
        &self.first_row
    }

    #[inline]
    pub fn entry(&self, i: u32, j: u32) -> i8 {
        self.first_row[self.v.sub(j, i) as usize]
    }

    /// Symmetric as a matrix, i.e. the defining set is symmetric.
    pub fn is_symmetric(&self) -> bool {
        let v = self.v.get();
        (1..v).all(|d| self.first_row[d as usize] == self.first_row[(v - d) as usize])
    }
}

/// The back-diagonal permutation of order `v`: ones exactly where
/// `i + j = v - 1` (mod v). Conjugating a circulant by it transposes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackDiagonal(pub Modulus);

impl BackDiagonal {
    #[inline]
    pub fn entry(&self, i: u32, j: u32) -> i8 {
        let v = self.0.get();
        u8::from((i + j) % v == v - 1) as i8
    }
}

// ===== arrangement =====

/// The four blocks of a family assigned to template roles: `a[0]`
/// symmetric, `a[1] = a[2]` the equal pair, `a[3]` free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropusBlocks {
    a: [Circulant; 4],
}

impl PropusBlocks {
    /// Accepts an explicit role assignment; orders must agree, the first
    /// block must be symmetric, and the middle two equal.
    pub fn new(a: [Circulant; 4]) -> Result<Self, HadamardError> {
        let v = a[0].modulus();
        for c in &a[1..] {
            if c.modulus() != v {
                return Err(HadamardError::DimensionMismatch {
                    a: v.get(),
                    b: c.modulus().get(),
                });
            }
        }
        if !a[0].is_symmetric() {
            return Err(HadamardError::NoValidArrangement {
                reason: "first block is not symmetric".into(),
            });
        }
        if a[1] != a[2] {
            return Err(HadamardError::NoValidArrangement {
                reason: "middle blocks differ".into(),
            });
        }
        Ok(PropusBlocks { a })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.a[0].modulus()
    }

    #[inline]
    pub fn blocks(&self) -> &[Circulant; 4] {
        &self.a
    }
}

/// Pick a role assignment from a family: an equal pair of blocks goes in
/// the middle, and a symmetric one of the remaining blocks goes first.
///
/// Deterministic: pairs are scanned in index order, and the
/// lowest-indexed symmetric complement is taken.
pub fn arrange_for_propus(family: &DifferenceFamily) -> Result<PropusBlocks, HadamardError> {
    let blocks = family.blocks();
    let mut pairs = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if blocks[i] == blocks[j] {
                pairs.push((i, j));
            }
        }
    }
    if pairs.is_empty() {
        return Err(HadamardError::NoValidArrangement {
            reason: "no two blocks are equal".into(),
        });
    }
    for &(i, j) in &pairs {
        let rest: Vec<usize> = (0..4).filter(|&t| t != i && t != j).collect();
        for &s in &rest {
            if blocks[s].is_symmetric() {
                let f = rest.iter().copied().find(|&t| t != s).unwrap();
                return Ok(PropusBlocks {
                    a: [
                        Circulant::from_set(&blocks[s]),
                        Circulant::from_set(&blocks[i]),
                        Circulant::from_set(&blocks[j]),
                        Circulant::from_set(&blocks[f]),
                    ],
                });
            }
        }
    }
    Err(HadamardError::NoValidArrangement {
        reason: "no equal pair leaves a symmetric block for the corner role".into(),
    })
}

// ===== assembly =====

/// A square ±1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardCandidate {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardCandidate {
    /// Wrap explicit row-major entries; they must form a square ±1 matrix
    /// of the stated order.
    pub fn from_entries(order: usize, entries: Vec<i8>) -> Result<Self, HadamardError> {
        if entries.len() != order * order {
            return Err(HadamardError::MalformedMatrix {
                reason: format!("{} entries for order {order}", entries.len()),
            });
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(HadamardError::MalformedMatrix {
                reason: format!("entry {bad} is not ±1"),
            });
        }
        Ok(HadamardCandidate { order, entries })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks_exact(self.order)
    }
}

/// Block roles of the template, as functions of the defining first row.
#[derive(Clone, Copy)]
enum Form {
    /// `A`: `row[(j - i) mod v]`.
    Plain,
    /// `A*R`: `row[(v - 1 - i - j) mod v]`.
    TimesR,
    /// `R*A`: `row[(i + j + 1) mod v]`.
    RTimes,
}

/// The template: sign, source block (0-based), and form for each cell.
const TEMPLATE: [[(i8, usize, Form); 4]; 4] = [
    [(-1, 0, Form::Plain), (1, 1, Form::TimesR), (1, 2, Form::TimesR), (1, 3, Form::TimesR)],
    [(1, 2, Form::TimesR), (1, 3, Form::RTimes), (1, 0, Form::Plain), (-1, 1, Form::RTimes)],
    [(1, 1, Form::TimesR), (1, 0, Form::Plain), (-1, 3, Form::RTimes), (1, 2, Form::RTimes)],
    [(1, 3, Form::TimesR), (-1, 2, Form::RTimes), (1, 1, Form::RTimes), (1, 0, Form::Plain)],
];

/// Assemble the order-`4v` candidate from arranged blocks.
pub fn build_propus(blocks: &PropusBlocks) -> HadamardCandidate {
    let v = blocks.modulus().get() as usize;
    let order = 4 * v;
    let mut entries = vec![0i8; order * order];
    for (bi, brow) in TEMPLATE.iter().enumerate() {
        for (bj, &(sign, which, form)) in brow.iter().enumerate() {
            let row = blocks.blocks()[which].first_row();
            for i in 0..v {
                let out = &mut entries[(bi * v + i) * order + bj * v..][..v];
                for (j, slot) in out.iter_mut().enumerate() {
                    let idx = match form {
                        Form::Plain => (v + j - i) % v,
                        Form::TimesR => (2 * v - 1 - i - j) % v,
                        Form::RTimes => (i + j + 1) % v,
                    };
                    *slot = sign * row[idx];
                }
            }
        }
    }
    HadamardCandidate { order, entries }
}

// ===== verification =====

/// Exact structural checks on a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardReport {
    /// `H = H^T`.
    pub symmetric: bool,
    /// `H * H^T = n * I`, checked with exact integer arithmetic.
    pub orthogonal: bool,
}

impl HadamardReport {
    pub fn is_symmetric_hadamard(&self) -> bool {
        self.symmetric && self.orthogonal
    }
}

/// Full Gram check plus symmetry check; the Gram rows are processed in
/// parallel, each row early-exits on its first bad inner product.
pub fn verify_hadamard(h: &HadamardCandidate) -> HadamardReport {
    let n = h.order();
    let symmetric = (0..n).all(|i| (i + 1..n).all(|j| h.entry(i, j) == h.entry(j, i)));
    let orthogonal = (0..n).into_par_iter().all(|i| {
        let ri = h.row(i);
        (i..n).all(|j| {
            let dot: i64 = ri
                .iter()
                .zip(h.row(j))
                .map(|(&a, &b)| i64::from(a) * i64::from(b))
                .sum();
            dot == if i == j { n as i64 } else { 0 }
        })
    });
    HadamardReport { symmetric, orthogonal }
}

/// Do the four blocks' autocorrelations cancel:
/// `sum_i PAF_i(s) = 0` for every nonzero shift?
///
/// Equivalent to the difference-family condition when the parameter
/// equations hold, but computed on the sequence side.
pub fn gs_condition(blocks: &[ResidueSet; 4]) -> bool {
    use crate::sequences::{paf, to_sequence};
    let v = blocks[0].modulus();
    if blocks.iter().any(|b| b.modulus() != v) {
        return false;
    }
    let profiles: Vec<_> = blocks.iter().map(|b| paf(&to_sequence(b))).collect();
    (1..v.get() as usize)
        .all(|s| profiles.iter().map(|p| p.values()[s]).sum::<i64>() == 0)
}
