//! Exhaustive orbit-based search for propus difference families.
//!
//! Given a parameter set `(v; k1, k2, k2, k4; lambda)` and an invariance
//! subgroup `H`, the search space is triples `(X1, X2 = X3, X4)` of
//! H-invariant sets with the declared sizes, the declared role block
//! symmetric, and
//!
//! ```text
//! N_{X1}(s) + 2*N_{X2}(s) + N_{X4}(s) = lambda   for all s != 0,
//! ```
//!
//! the set-count form of the autocorrelation cancellation condition.
//!
//! Strategy: candidate blocks are unions of H-orbits, and for an invariant
//! block the count `N_X(s)` is constant on each H-orbit of shifts, so a
//! candidate compresses to a short vector of counts at the nontrivial
//! orbit representatives. The symmetric role's pool is small (symmetric
//! sets are unions of orbit negation-pairs); the unpaired role's pool is
//! indexed by compressed vector in a hash map, and each (symmetric, X2)
//! pair probes for its exact complement. The probe loop parallelizes over
//! the symmetric pool with per-worker result lists merged in order, so the
//! output is independent of the worker count.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::equivalence::canonical_form;
use crate::families::{BlockReps, DifferenceFamily};
use crate::params::PropusParameterSet;
use crate::residues::{OrbitTable, SubgroupH};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("parameter set {params} cannot be searched: {reason}")]
    InfeasibleParams { params: String, reason: String },
    #[error("modulus {v} is too large for compressed search vectors (need v < 65536)")]
    UnsupportedModulus { v: u32 },
}

/// Which block the symmetry requirement is placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricRole {
    /// `X1` must be symmetric.
    First,
    /// `X4` must be symmetric.
    Last,
    /// Union of both placements.
    Either,
}

/// A full search request.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub params: PropusParameterSet,
    pub subgroup: SubgroupH,
    pub symmetric_role: SymmetricRole,
    /// Drop equivalent duplicates from the output (costs one
    /// canonicalization per family found).
    pub dedupe: bool,
    /// Stop after this many raw matches; 0 means unlimited.
    pub limit: usize,
    /// Worker threads for the probe phase; `None` uses the ambient pool.
    pub threads: Option<usize>,
}

/// Search results plus bookkeeping.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub families: Vec<DifferenceFamily>,
    /// False when a limit cut the enumeration short.
    pub complete: bool,
    pub warnings: Vec<String>,
}

// ===== candidate pools =====

/// Block position a pool feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolRole {
    X1,
    X2,
    X4,
}

/// One candidate block: its orbit representatives and its compressed
/// count vector, one entry per nontrivial shift-orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolEntry {
    reps: BlockReps,
    nvec: Box<[u16]>,
}

impl PoolEntry {
    #[inline]
    pub fn reps(&self) -> &BlockReps {
        &self.reps
    }

    /// `N_X` at the nontrivial orbit representatives, in representative
    /// order.
    #[inline]
    pub fn nvec(&self) -> &[u16] {
        &self.nvec
    }
}

/// All candidate blocks for one role and cardinality.
#[derive(Debug, Clone)]
pub struct CandidatePool {
    role: PoolRole,
    k: u32,
    entries: Vec<PoolEntry>,
}

impl CandidatePool {
    #[inline]
    pub fn role(&self) -> PoolRole {
        self.role
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }
}

/// A selectable unit of orbits: a single orbit, or an orbit together with
/// its negation partner when enumerating symmetric sets.
struct Unit {
    orbits: Vec<u16>,
    weight: u32,
}

fn units_for(table: &OrbitTable, symmetric_only: bool) -> Vec<Unit> {
    let mut units = Vec::new();
    for i in 0..table.num_orbits() {
        if symmetric_only {
            let j = table.negation_partner(i);
            if j < i {
                continue; // partner already emitted this pair
            }
            let mut orbits = vec![i as u16];
            let mut weight = table.orbit(i).len() as u32;
            if j != i {
                orbits.push(j as u16);
                weight += table.orbit(j).len() as u32;
            }
            units.push(Unit { orbits, weight });
        } else {
            units.push(Unit { orbits: vec![i as u16], weight: table.orbit(i).len() as u32 });
        }
    }
    units
}

/// Depth-first enumeration of unit subsets hitting size `k` exactly,
/// maintaining the full difference-count vector incrementally.
struct Enumerator<'a> {
    table: &'a OrbitTable,
    units: Vec<Unit>,
    /// `suffix[i]` = total weight of units i.. (for the reachability cut).
    suffix: Vec<u32>,
    k: u32,
    /// Prune when `cap_scale * count > lambda` at any nontrivial
    /// representative; sound because counts only grow along a branch.
    cap: Option<(u32, u32)>,
    shift_reps: Vec<u32>,
    counts: Vec<u32>,
    elems: Vec<u32>,
    chosen: Vec<u16>,
}

impl<'a> Enumerator<'a> {
    fn new(table: &'a OrbitTable, k: u32, symmetric_only: bool, cap: Option<(u32, u32)>) -> Self {
        let units = units_for(table, symmetric_only);
        let mut suffix = vec![0u32; units.len() + 1];
        for i in (0..units.len()).rev() {
            suffix[i] = suffix[i + 1] + units[i].weight;
        }
        let shift_reps = table.reps().skip(1).collect();
        Enumerator {
            table,
            units,
            suffix,
            k,
            cap,
            shift_reps,
            counts: vec![0; table.modulus().get() as usize],
            elems: Vec::new(),
            chosen: Vec::new(),
        }
    }

    fn add_orbit(&mut self, idx: u16) {
        let v = self.table.modulus();
        for &x in self.table.orbit(idx as usize) {
            for &y in &self.elems {
                self.counts[v.sub(x, y) as usize] += 1;
                self.counts[v.sub(y, x) as usize] += 1;
            }
            self.counts[0] += 1;
            self.elems.push(x);
        }
        self.chosen.push(idx);
    }

    fn remove_orbit(&mut self) {
        let v = self.table.modulus();
        let idx = self.chosen.pop().expect("remove matches a prior add");
        for _ in self.table.orbit(idx as usize) {
            let x = self.elems.pop().expect("elements match chosen orbits");
            self.counts[0] -= 1;
            for &y in &self.elems {
                self.counts[v.sub(x, y) as usize] -= 1;
                self.counts[v.sub(y, x) as usize] -= 1;
            }
        }
    }

    fn cap_violated(&self) -> bool {
        match self.cap {
            None => false,
            Some((scale, lambda)) => self
                .shift_reps
                .iter()
                .any(|&r| scale * self.counts[r as usize] > lambda),
        }
    }

    fn run(&mut self, emit: &mut impl FnMut(&[u16], &[u32], &[u32])) {
        self.descend(0, 0, emit);
    }

    fn descend(&mut self, idx: usize, size: u32, emit: &mut impl FnMut(&[u16], &[u32], &[u32])) {
        if size == self.k {
            emit(&self.chosen, &self.counts, &self.shift_reps);
            return;
        }
        if idx == self.units.len() || size + self.suffix[idx] < self.k {
            return;
        }
        let weight = self.units[idx].weight;
        if size + weight <= self.k {
            let orbits = self.units[idx].orbits.clone();
            for &o in &orbits {
                self.add_orbit(o);
            }
            if !self.cap_violated() {
                self.descend(idx + 1, size + weight, emit);
            }
            for _ in &orbits {
                self.remove_orbit();
            }
        }
        self.descend(idx + 1, size, emit);
    }
}

fn build_pool(
    table: &OrbitTable,
    role: PoolRole,
    k: u32,
    symmetric_only: bool,
    cap: Option<(u32, u32)>,
) -> CandidatePool {
    let mut entries = Vec::new();
    let mut enumerator = Enumerator::new(table, k, symmetric_only, cap);
    enumerator.run(&mut |chosen, counts, shift_reps| {
        let mut reps: Vec<u32> = chosen.iter().map(|&i| table.orbit(i as usize)[0]).collect();
        reps.sort_unstable();
        let nvec: Box<[u16]> = shift_reps.iter().map(|&r| counts[r as usize] as u16).collect();
        entries.push(PoolEntry { reps: BlockReps::new(reps), nvec });
    });
    CandidatePool { role, k, entries }
}

/// All H-invariant subsets of size `k`, as representative lists; with
/// `symmetric_only`, only those closed under negation. Empty when the size
/// is not reachable.
pub fn enumerate_invariant_subsets(
    table: &OrbitTable,
    k: u32,
    symmetric_only: bool,
) -> Vec<BlockReps> {
    build_pool(table, PoolRole::X1, k, symmetric_only, None)
        .entries
        .into_iter()
        .map(|e| e.reps)
        .collect()
}

// ===== the join =====

struct Pass {
    triples: Vec<[BlockReps; 3]>,
    complete: bool,
}

fn run_pass(
    table: &OrbitTable,
    params: &PropusParameterSet,
    sym_first: bool,
    limit: usize,
) -> Pass {
    let k = params.k();
    let lambda = params.lambda();
    let (k_sym, k_free) = if sym_first { (k[0], k[3]) } else { (k[3], k[0]) };
    let sym_pool = build_pool(
        table,
        if sym_first { PoolRole::X1 } else { PoolRole::X4 },
        k_sym,
        true,
        Some((1, lambda)),
    );
    let pair_pool = build_pool(table, PoolRole::X2, k[1], false, Some((2, lambda)));
    let free_pool = build_pool(
        table,
        if sym_first { PoolRole::X4 } else { PoolRole::X1 },
        k_free,
        false,
        Some((1, lambda)),
    );

    let mut index: HashMap<&[u16], Vec<u32>> = HashMap::new();
    for (i, entry) in free_pool.entries().iter().enumerate() {
        index.entry(entry.nvec()).or_default().push(i as u32);
    }

    let emit_triple = |s: &PoolEntry, p: &PoolEntry, f: &PoolEntry| -> [BlockReps; 3] {
        if sym_first {
            [s.reps().clone(), p.reps().clone(), f.reps().clone()]
        } else {
            [f.reps().clone(), p.reps().clone(), s.reps().clone()]
        }
    };

    let m = sym_pool.entries().first().map_or(0, |e| e.nvec().len());
    if limit > 0 {
        // sequential so "the first `limit` matches" is well defined
        let mut triples = Vec::new();
        let mut needed = vec![0u16; m];
        'outer: for s in sym_pool.entries() {
            for p in pair_pool.entries() {
                if !complement_into(lambda, s.nvec(), p.nvec(), &mut needed) {
                    continue;
                }
                if let Some(hits) = index.get(needed.as_slice()) {
                    for &f in hits {
                        triples.push(emit_triple(s, p, &free_pool.entries()[f as usize]));
                        if triples.len() == limit {
                            break 'outer;
                        }
                    }
                }
            }
        }
        let complete = triples.len() < limit;
        Pass { triples, complete }
    } else {
        let per_sym: Vec<Vec<[BlockReps; 3]>> = sym_pool
            .entries()
            .par_iter()
            .map(|s| {
                let mut found = Vec::new();
                let mut needed = vec![0u16; m];
                for p in pair_pool.entries() {
                    if !complement_into(lambda, s.nvec(), p.nvec(), &mut needed) {
                        continue;
                    }
                    if let Some(hits) = index.get(needed.as_slice()) {
                        for &f in hits {
                            found.push(emit_triple(s, p, &free_pool.entries()[f as usize]));
                        }
                    }
                }
                found
            })
            .collect();
        Pass { triples: per_sym.into_iter().flatten().collect(), complete: true }
    }
}

/// `needed = lambda - s - 2*p` pointwise; false on underflow (no
/// complement can exist).
fn complement_into(lambda: u32, s: &[u16], p: &[u16], needed: &mut [u16]) -> bool {
    for i in 0..needed.len() {
        let used = u32::from(s[i]) + 2 * u32::from(p[i]);
        let rest = match lambda.checked_sub(used) {
            // counts never exceed u16, so larger remainders cannot match
            Some(rest) if rest <= u32::from(u16::MAX) => rest,
            _ => return false,
        };
        needed[i] = rest as u16;
    }
    true
}

// ===== the search =====

pub fn search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    match spec.threads {
        None => search_inner(spec),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("worker pool construction failed")
            .install(|| search_inner(spec)),
    }
}

fn search_inner(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let params = &spec.params;
    let v = params.modulus();
    assert_eq!(v, spec.subgroup.modulus(), "parameter and subgroup moduli differ");
    if v.get() >= u32::from(u16::MAX) {
        return Err(SearchError::UnsupportedModulus { v: v.get() });
    }
    let infeasible = |reason: String| SearchError::InfeasibleParams {
        params: params.to_string(),
        reason,
    };
    let check = params.validate();
    if !check.is_valid() {
        return Err(infeasible(format!("parameter equations fail: {:?}", check.violated)));
    }
    if !check.propus_pair {
        return Err(infeasible("middle block sizes differ (k2 != k3)".into()));
    }
    let table = OrbitTable::build(spec.subgroup.clone());
    if !params.h_feasible(&table) {
        return Err(infeasible(
            "some block size is not a sum of orbit sizes under this subgroup".into(),
        ));
    }

    let mut warnings = Vec::new();
    if spec.subgroup.is_trivial() {
        warnings.push(
            "trivial subgroup: candidate pools cover all subsets, expect exponential cost"
                .to_string(),
        );
    }

    let passes: Vec<bool> = match spec.symmetric_role {
        SymmetricRole::First => vec![true],
        SymmetricRole::Last => vec![false],
        SymmetricRole::Either => vec![true, false],
    };
    let mut triples: Vec<[BlockReps; 3]> = Vec::new();
    let mut complete = true;
    for sym_first in passes {
        let remaining = if spec.limit == 0 {
            0
        } else {
            let left = spec.limit.saturating_sub(triples.len());
            if left == 0 {
                complete = false;
                break;
            }
            left
        };
        let pass = run_pass(&table, params, sym_first, remaining);
        triples.extend(pass.triples);
        complete &= pass.complete;
    }
    if !complete {
        warnings.push(format!(
            "stopped at the limit of {} matches; output is not exhaustive",
            spec.limit
        ));
    }

    triples.sort();
    triples.dedup(); // both passes can find the same triple

    let mut families: Vec<DifferenceFamily> = triples
        .into_iter()
        .map(|reps| {
            DifferenceFamily::from_reps(&table, *params, reps)
                .expect("pool entries have the declared sizes")
        })
        .collect();

    if spec.dedupe {
        let canon: Vec<_> = families.par_iter().map(|f| canonical_form(f).blocks().clone()).collect();
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::new();
        for (fam, c) in families.into_iter().zip(canon) {
            if seen.insert(c) {
                kept.push(fam);
            }
        }
        families = kept;
    }

    Ok(SearchOutcome { families, complete, warnings })
}
