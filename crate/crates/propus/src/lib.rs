//! Difference-family search and symmetric Hadamard matrix assembly over
//! cyclic groups.
//!
//! The pipeline, bottom to top:
//!
//! * [`residues`] — moduli, residue sets, multiplier subgroups and their
//!   orbits on `Z_v`;
//! * [`params`] — `(v; k1, k2, k3, k4; lambda)` parameter sets, their
//!   defining equations, enumeration, and orbit feasibility;
//! * [`families`] — four-block difference families, difference counting,
//!   verification, multipliers;
//! * [`sequences`] — the ±1 indicator sequence of a block and its periodic
//!   autocorrelation profile;
//! * [`hadamard`] — assembling four circulants into a candidate symmetric
//!   Hadamard matrix and verifying it;
//! * [`equivalence`] — canonical forms and equivalence of families under
//!   translation, negation, block reordering, and unit scaling;
//! * [`search`] — exhaustive orbit-based search for families with a given
//!   parameter set and invariance subgroup;
//! * [`format`] — the text and JSON interchange formats;
//! * [`corpus`] — the bundled reference collection of families.

pub mod corpus;
pub mod equivalence;
pub mod families;
pub mod format;
pub mod hadamard;
pub mod params;
pub mod residues;
pub mod search;
pub mod sequences;
