//! Equivalence of difference families and a canonical form that decides it.
//!
//! Two families over the same `Z_v` are equivalent when one becomes the
//! other by any combination of
//!
//! * reordering the four blocks,
//! * translating individual blocks (`X -> X + g`),
//! * negating individual blocks (`X -> -X`),
//! * scaling all blocks by one common unit (`X -> a * X`).
//!
//! All four moves preserve the difference-count property, so equivalence
//! classes are the meaningful unit when counting distinct families.
//!
//! The canonical form minimizes over every choice: for each unit `a`, each
//! block is replaced by the lexicographically least translate of
//! `a * X` or `-(a * X)`, the four results are sorted (by size, then
//! lexicographically), and the least of the resulting 4-tuples over all
//! `a` wins. Each elementary move permutes the candidate set it is
//! minimized over, so the form is invariant: equivalent families share it,
//! and inequivalent ones cannot, since the form is itself reachable by the
//! moves. The witness records how to reach the form from the input.

use rayon::prelude::*;

use crate::families::DifferenceFamily;
use crate::residues::{unit_group, Modulus, ResidueSet};

/// How one canonical block was obtained from the input family: take block
/// `source` (1-based), scale by the family-wide unit, negate if asked,
/// then translate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockChoice {
    pub source: u8,
    pub negated: bool,
    pub translate: u32,
}

/// The family-wide scaling unit and the per-block moves, in canonical
/// block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalWitness {
    pub scale: u32,
    pub choices: [BlockChoice; 4],
}

/// A family's canonical form under the equivalence moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    v: Modulus,
    blocks: [ResidueSet; 4],
    witness: CanonicalWitness,
}

impl CanonicalForm {
    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.v
    }

    /// Canonical blocks, sorted by (size, contents).
    #[inline]
    pub fn blocks(&self) -> &[ResidueSet; 4] {
        &self.blocks
    }

    #[inline]
    pub fn witness(&self) -> &CanonicalWitness {
        &self.witness
    }
}

/// Lexicographically least translate of a sorted element list, with the
/// offset that achieves it.
///
/// Candidates are compared lazily against the current best so the usual
/// cost per offset is O(1) rather than O(k).
fn min_translate(v: u32, elems: &[u32]) -> (Vec<u32>, u32) {
    let k = elems.len();
    if k == 0 {
        return (Vec::new(), 0);
    }
    let mut best: Vec<u32> = elems.to_vec();
    let mut best_g = 0u32;
    for g in 1..v {
        // translated-and-sorted candidate: elements >= v - g wrap to the front
        let p = elems.partition_point(|&x| x < v - g);
        let wrapped = k - p;
        let cand = |j: usize| -> u32 {
            if j < wrapped {
                elems[p + j] + g - v
            } else {
                elems[j - wrapped] + g
            }
        };
        let mut improves = false;
        for (j, b) in best.iter().enumerate() {
            match cand(j).cmp(b) {
                std::cmp::Ordering::Less => {
                    improves = true;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
        if improves {
            best = (0..k).map(cand).collect();
            best_g = g;
        }
    }
    (best, best_g)
}

struct Candidate {
    blocks: [ResidueSet; 4],
    choices: [BlockChoice; 4],
    scale: u32,
}

fn candidate_for(family: &DifferenceFamily, alpha: u32) -> Candidate {
    let v = family.modulus();
    let mut parts: Vec<(ResidueSet, BlockChoice)> = family
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let scaled = block.scale(alpha);
            let (plain, plain_g) = min_translate(v.get(), scaled.elements());
            let negated = scaled.negate();
            let (neg, neg_g) = min_translate(v.get(), negated.elements());
            let source = i as u8 + 1;
            if neg < plain {
                (
                    ResidueSet::new(v, neg),
                    BlockChoice { source, negated: true, translate: neg_g },
                )
            } else {
                (
                    ResidueSet::new(v, plain),
                    BlockChoice { source, negated: false, translate: plain_g },
                )
            }
        })
        .collect();
    // stable: equal blocks keep their original relative order
    parts.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut it = parts.into_iter();
    let mut next = || it.next().expect("exactly four parts");
    let (b0, c0) = next();
    let (b1, c1) = next();
    let (b2, c2) = next();
    let (b3, c3) = next();
    Candidate { blocks: [b0, b1, b2, b3], choices: [c0, c1, c2, c3], scale: alpha }
}

/// Compute the canonical form, minimizing over all units in parallel.
/// Ties between units resolve to the smallest unit, so the witness is
/// deterministic too.
pub fn canonical_form(family: &DifferenceFamily) -> CanonicalForm {
    let v = family.modulus();
    let units = unit_group(v);
    let best = units
        .into_par_iter()
        .map(|alpha| candidate_for(family, alpha))
        .reduce_with(|a, b| {
            if (&a.blocks, a.scale) <= (&b.blocks, b.scale) {
                a
            } else {
                b
            }
        })
        .expect("the unit group contains 1");
    CanonicalForm {
        v,
        blocks: best.blocks,
        witness: CanonicalWitness { scale: best.scale, choices: best.choices },
    }
}

/// Replay a witness against the family it was computed from; returns the
/// blocks in canonical order.
pub fn apply_witness(family: &DifferenceFamily, witness: &CanonicalWitness) -> [ResidueSet; 4] {
    witness.choices.map(|choice| {
        let block = &family.blocks()[usize::from(choice.source) - 1];
        let scaled = block.scale(witness.scale);
        let signed = if choice.negated { scaled.negate() } else { scaled };
        signed.translate(choice.translate)
    })
}

/// Are two families related by the equivalence moves?
pub fn equivalent(a: &DifferenceFamily, b: &DifferenceFamily) -> bool {
    if a.modulus() != b.modulus() {
        return false;
    }
    let sizes = |f: &DifferenceFamily| {
        let mut s: Vec<usize> = f.blocks().iter().map(|x| x.len()).collect();
        s.sort_unstable();
        s
    };
    if sizes(a) != sizes(b) {
        return false;
    }
    canonical_form(a).blocks() == canonical_form(b).blocks()
}
