//! The project's go/no-go gate. Each test covers one release criterion
//! and prints a `[PASS]`/`[FAIL]` line for it (run with
//! `--nocapture` to see every line; a failing criterion also fails its
//! test the normal way).
//!
//! The corpus-wide checks lean on the bundled tables; the search checks
//! rediscover them from scratch. Two long searches (v = 61, v = 67) are
//! `#[ignore]`d by default and opt in via `cargo test -- --ignored`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use propus::corpus::{family_at, table, table_text};
use propus::equivalence::canonical_form;
use propus::families::{
    difference_counts_of, verify_family, DifferenceFamily,
};
use propus::format::{matrix_to_string, serialize_records};
use propus::hadamard::{arrange_for_propus, build_propus, gs_condition, verify_hadamard};
use propus::params::enumerate_propus_params;
use propus::residues::{unit_group, Modulus, OrbitTable, ResidueSet, SubgroupH};
use propus::search::{search, SearchSpec, SymmetricRole};
use propus::sequences::{paf, to_sequence};

// ===== reporting =====

fn criterion(label: &str, check: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(check));
    match &outcome {
        Ok(()) => println!("[PASS] {label}"),
        Err(_) => println!("[FAIL] {label}"),
    }
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

/// Every corpus family with a "table t record r family f" label.
fn corpus_families() -> Vec<(String, &'static DifferenceFamily)> {
    let mut out = Vec::new();
    for t in 1..=3 {
        for (r, rec) in table(t).iter().enumerate() {
            for (f, fam) in rec.families().iter().enumerate() {
                out.push((
                    format!("table {t} record {} family {} {}", r + 1, f + 1, rec.params()),
                    fam,
                ));
            }
        }
    }
    out
}

// ===== criterion 1: corpus verification =====

#[test]
fn criterion_1_corpus_verification() {
    criterion("criterion 1: every corpus family verifies exactly", || {
        for (label, fam) in corpus_families() {
            assert!(fam.params().validate().is_valid(), "{label}: header equations fail");
            let clock = Instant::now();
            let verdict = verify_family(fam);
            let spent = clock.elapsed();
            assert!(verdict.is_gs, "{label}: differences not flat");
            assert!(verdict.is_propus, "{label}: no symmetric propus pair");
            assert!(spent < Duration::from_secs(1), "{label}: verification took {spent:?}");
        }
        let count: usize = (1..=3).map(|t| table(t).iter().map(|r| r.families().len()).sum::<usize>()).sum();
        assert_eq!(count, 12 + 6 + 35, "corpus family count");
    });
}

// ===== criterion 2: Hadamard matrices of every promised order =====

#[test]
fn criterion_2_hadamard_orders() {
    criterion("criterion 2: corpus families assemble into symmetric Hadamard matrices", || {
        let mut orders = BTreeSet::new();
        for (label, fam) in corpus_families() {
            let clock = Instant::now();
            let blocks = arrange_for_propus(fam).unwrap_or_else(|e| panic!("{label}: {e}"));
            let h = build_propus(&blocks);
            let report = verify_hadamard(&h);
            let spent = clock.elapsed();
            assert!(report.symmetric, "{label}: matrix not symmetric");
            assert!(report.orthogonal, "{label}: Gram matrix is not nI");
            assert_eq!(h.order() as u32, 4 * fam.modulus().get(), "{label}: order");
            assert!(spent < Duration::from_secs(10), "{label}: took {spent:?} at order {}", h.order());
            orders.insert(h.order());
        }
        for promised in [268, 412, 436, 604, 28, 628, 1228] {
            assert!(orders.contains(&promised), "no matrix of order {promised}");
        }
        assert_eq!(orders.first(), Some(&28), "smallest corpus order");
        assert_eq!(orders.last(), Some(&1228), "largest corpus order");
    });
}

// ===== criterion 3: published autocorrelation facts =====

#[test]
fn criterion_3_autocorrelation_reproduction() {
    criterion("criterion 3: quoted autocorrelation values, levels, and classes", || {
        // first 49-run family, second block: the full half-spectrum
        let profile = paf(&to_sequence(&family_at(2, 1, 1).blocks()[1]));
        assert_eq!(
            profile.values()[..25],
            [49, 1, -3, -3, 1, -3, 1, 1, -3, -3, 1, -3, -3, -3, 1, -3, 1, -3, 1, 1, -3, 1, 1, 1, -3],
            "49-run spectrum, first family"
        );
        assert_eq!(profile.optimal(), Some(true));
        assert!(profile.balanced());

        // second 49-run record: optimal but not balanced
        let profile = paf(&to_sequence(&family_at(2, 2, 1).blocks()[1]));
        assert_eq!(
            profile.values()[..25],
            [49, 1, 1, 1, 1, 1, 1, -3, 1, -3, 1, 1, -3, 1, -3, -3, 1, -3, 1, 1, -3, -3, 1, 1, -3],
            "49-run spectrum, second record"
        );
        assert_eq!(profile.optimal(), Some(true));
        assert!(!profile.balanced());

        // 61-run record (61;25,30,30,25;49): optimal and balanced
        let fam = family_at(2, 3, 1);
        assert_eq!(fam.params().to_string(), "(61;25,30,30,25;49)");
        let profile = paf(&to_sequence(&fam.blocks()[1]));
        assert_eq!(
            profile.values()[..31],
            [
                61, 1, -3, -3, -3, -3, 1, 1, 1, -3, 1, -3, 1, 1, 1, 1, -3, 1, 1, -3, -3, -3, -3,
                1, 1, -3, -3, 1, -3, -3, 1
            ],
            "61-run spectrum"
        );
        assert_eq!(profile.optimal(), Some(true));
        assert!(profile.balanced());

        // (61;28,28,28,24;47): the four-level second block
        let fam = family_at(3, 20, 1);
        assert_eq!(fam.params().to_string(), "(61;28,28,28,24;47)");
        let profile = paf(&to_sequence(&fam.blocks()[1]));
        assert_eq!(profile.level_set(), [61, 1, -3, -11], "four-level spectrum");
    });
}

// ===== criterion 4: feasible parameter-set counts =====

#[test]
fn criterion_4_feasibility_count_49() {
    criterion("criterion 4a: three feasible parameter sets at v = 49", || {
        let v = Modulus::new(49).unwrap();
        let table = OrbitTable::build(SubgroupH::from_elements(v, [1, 18, 30]).unwrap());
        let feasible: Vec<_> = enumerate_propus_params(v)
            .unwrap()
            .into_iter()
            .filter(|p| p.h_feasible(&table))
            .collect();
        let shown: Vec<String> = feasible.iter().map(ToString::to_string).collect();
        assert_eq!(feasible.len(), 3, "feasible at v=49: {shown:?}");
        assert!(
            feasible.iter().any(|p| p.k() == [21, 21, 21, 21] && p.lambda() == 35),
            "all-21 set missing: {shown:?}"
        );
    });
}

#[test]
fn criterion_4_feasibility_count_67() {
    criterion("criterion 4b: three feasible parameter sets at v = 67", || {
        let v = Modulus::new(67).unwrap();
        let table = OrbitTable::build(SubgroupH::from_elements(v, [1, 29, 37]).unwrap());
        let feasible: Vec<_> = enumerate_propus_params(v)
            .unwrap()
            .into_iter()
            .filter(|p| p.h_feasible(&table))
            .collect();
        let shown: Vec<String> = feasible.iter().map(ToString::to_string).collect();
        // Orbit-size feasibility alone also admits (67;33,30,30,27;53),
        // whose sizes 33 and 27 can never be negation-closed under this
        // subgroup, so no symmetric end block — and no matrix — can come
        // of it. The published count of three anticipates that refinement;
        // plain feasibility as specified finds four.
        assert_eq!(feasible.len(), 3, "feasible at v=67: {shown:?}");
    });
}

// ===== criterion 5: search rediscovers the published families =====

fn rediscover(rec_label: &str, rec: &propus::format::ParsedRecord, threads: Option<usize>) {
    let spec = SearchSpec {
        params: *rec.params(),
        subgroup: rec.subgroup().clone(),
        symmetric_role: SymmetricRole::Either,
        dedupe: false,
        limit: 0,
        threads,
    };
    let outcome = search(&spec).unwrap_or_else(|e| panic!("{rec_label}: {e}"));
    assert!(outcome.complete, "{rec_label}: search did not finish");
    let found: BTreeSet<&[ResidueSet; 4]> =
        outcome.families.iter().map(|f| f.blocks()).collect();
    for (f, fam) in rec.families().iter().enumerate() {
        assert!(
            found.contains(fam.blocks()),
            "{rec_label} family {} not rediscovered ({} candidates found)",
            f + 1,
            outcome.families.len()
        );
    }
}

#[test]
fn criterion_5_search_rediscovery() {
    criterion("criterion 5: single-threaded search finds every published family (v <= 49)", || {
        let clock = Instant::now();
        for (r, rec) in table(3).iter().enumerate() {
            let v = rec.params().modulus().get();
            if ![7, 13, 19, 31, 37, 43, 49].contains(&v) {
                continue;
            }
            rediscover(&format!("table 3 record {} {}", r + 1, rec.params()), rec, Some(1));
        }
        let spent = clock.elapsed();
        assert!(spent < Duration::from_secs(300), "rediscovery took {spent:?}");
    });
}

#[test]
#[ignore = "long search; run with cargo test -- --ignored"]
fn criterion_5_search_rediscovery_extended() {
    criterion("criterion 5 (extended): searches at v = 61 and v = 67", || {
        let clock = Instant::now();
        for (r, rec) in table(3).iter().enumerate() {
            if rec.params().modulus().get() == 61 {
                rediscover(&format!("table 3 record {} {}", r + 1, rec.params()), rec, None);
            }
        }
        for (r, rec) in table(1).iter().enumerate() {
            if rec.params().modulus().get() == 67 {
                rediscover(&format!("table 1 record {} {}", r + 1, rec.params()), rec, None);
            }
        }
        let spent = clock.elapsed();
        assert!(spent < Duration::from_secs(7200), "extended rediscovery took {spent:?}");
    });
}

// ===== criterion 6: brute-force exhaustiveness oracle =====

/// All subgroup-invariant subsets of the given size: plain recursion over
/// the orbit list, no feasibility shortcuts.
fn invariant_subsets_brute(table: &OrbitTable, size: usize) -> Vec<ResidueSet> {
    fn go(
        table: &OrbitTable,
        idx: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ResidueSet>,
    ) {
        if left == 0 {
            let elems = chosen.iter().flat_map(|&i| table.orbit(i).iter().copied());
            out.push(ResidueSet::new(table.modulus(), elems));
            return;
        }
        if idx == table.num_orbits() {
            return;
        }
        go(table, idx + 1, left, chosen, out);
        let len = table.orbit(idx).len();
        if len <= left {
            chosen.push(idx);
            go(table, idx + 1, left - len, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    go(table, 0, size, &mut Vec::new(), &mut out);
    out
}

/// Every four-block family for the record's parameters, by trying every
/// triple of invariant blocks and testing the difference counts directly.
fn brute_force_families(rec: &propus::format::ParsedRecord) -> BTreeSet<[ResidueSet; 4]> {
    let params = rec.params();
    let v = params.modulus();
    let table = OrbitTable::build(rec.subgroup().clone());
    let k = params.k();
    let pool1 = invariant_subsets_brute(&table, k[0] as usize);
    let pool2 = invariant_subsets_brute(&table, k[1] as usize);
    let pool4 = invariant_subsets_brute(&table, k[3] as usize);
    let mut out = BTreeSet::new();
    for x1 in &pool1 {
        for x2 in &pool2 {
            for x4 in &pool4 {
                if !x1.is_symmetric() && !x4.is_symmetric() {
                    continue;
                }
                let blocks = [x1.clone(), x2.clone(), x2.clone(), x4.clone()];
                let counts = difference_counts_of(v, &blocks);
                if counts.first_mismatch(params.lambda()).is_none() {
                    out.insert(blocks);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_exhaustiveness_oracle() {
    criterion("criterion 6: pruned search equals the brute-force oracle (v = 7, 13, 19)", || {
        for (r, rec) in table(3).iter().enumerate() {
            if ![7, 13, 19].contains(&rec.params().modulus().get()) {
                continue;
            }
            let label = format!("table 3 record {} {}", r + 1, rec.params());
            let expected = brute_force_families(rec);
            let spec = SearchSpec {
                params: *rec.params(),
                subgroup: rec.subgroup().clone(),
                symmetric_role: SymmetricRole::Either,
                dedupe: false,
                limit: 0,
                threads: Some(1),
            };
            let outcome = search(&spec).unwrap_or_else(|e| panic!("{label}: {e}"));
            let got: BTreeSet<[ResidueSet; 4]> =
                outcome.families.iter().map(|f| f.blocks().clone()).collect();
            assert_eq!(got.len(), outcome.families.len(), "{label}: search emitted duplicates");
            assert_eq!(got, expected, "{label}: search and oracle disagree");
        }
    });
}

// ===== criterion 7: canonical forms =====

/// A random composition of the allowed family transformations:
/// per-block translations and negations, a global unit scaling, and
/// swaps of equal-size blocks.
fn scramble(rng: &mut ChaCha8Rng, fam: &DifferenceFamily) -> DifferenceFamily {
    let v = fam.modulus();
    let units = unit_group(v);
    let mut blocks = fam.blocks().clone();
    for _ in 0..8 {
        match rng.gen_range(0..4) {
            0 => {
                let i = rng.gen_range(0..4);
                let g = rng.gen_range(0..v.get());
                blocks[i] = blocks[i].translate(g);
            }
            1 => {
                let i = rng.gen_range(0..4);
                blocks[i] = blocks[i].negate();
            }
            2 => {
                let m = units[rng.gen_range(0..units.len())];
                for block in &mut blocks {
                    *block = block.scale(m);
                }
            }
            _ => {
                let i = rng.gen_range(0..4);
                let j = rng.gen_range(0..4);
                if blocks[i].len() == blocks[j].len() {
                    blocks.swap(i, j);
                }
            }
        }
    }
    DifferenceFamily::from_blocks(*fam.params(), fam.subgroup().clone(), blocks)
        .expect("transformations preserve block sizes")
}

#[test]
fn criterion_7_canonical_forms() {
    criterion("criterion 7: six distinct forms at v = 67; invariance under 100 transforms", || {
        // the six v=67 families are pairwise non-equivalent
        let mut forms = Vec::new();
        for r in 1..=3 {
            for f in 1..=2 {
                forms.push((r, f, canonical_form(family_at(1, r, f))));
            }
        }
        for a in 0..forms.len() {
            for b in a + 1..forms.len() {
                assert_ne!(
                    forms[a].2.blocks(),
                    forms[b].2.blocks(),
                    "record {} family {} and record {} family {} share a canonical form",
                    forms[a].0,
                    forms[a].1,
                    forms[b].0,
                    forms[b].1
                );
            }
        }

        // canonical_form is a class invariant on the whole corpus
        let mut rng = ChaCha8Rng::seed_from_u64(0x7072_6f70);
        for (label, fam) in corpus_families() {
            let reference = canonical_form(fam);
            for round in 0..100 {
                let shuffled = scramble(&mut rng, fam);
                let form = canonical_form(&shuffled);
                assert_eq!(
                    form.blocks(),
                    reference.blocks(),
                    "{label}: canonical form moved at round {round}"
                );
            }
        }
    });
}

// ===== criterion 8: the two verification routes agree =====

#[test]
fn criterion_8_dual_route_agreement() {
    criterion("criterion 8: difference counts and autocorrelation sums agree", || {
        let families = corpus_families();
        for (label, fam) in &families {
            let by_counts = verify_family(fam).is_gs;
            let by_paf = gs_condition(fam.blocks());
            assert!(by_counts && by_paf, "{label}: routes disagree or family broken");
        }

        // corrupt one entry of one block, 200 times; both routes must
        // still return the same verdict on every variant
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1ff5);
        let mut broken = 0usize;
        for round in 0..200 {
            let (label, fam) = &families[rng.gen_range(0..families.len())];
            let v = fam.modulus();
            let mut blocks = fam.blocks().clone();
            let b = rng.gen_range(0..4);
            let elems = blocks[b].elements();
            let out_idx = rng.gen_range(0..elems.len());
            let replacement = loop {
                let x = rng.gen_range(0..v.get());
                if !blocks[b].contains(x) {
                    break x;
                }
            };
            let mut new_elems: Vec<u32> = elems.to_vec();
            new_elems[out_idx] = replacement;
            blocks[b] = ResidueSet::new(v, new_elems);
            let mutant =
                DifferenceFamily::from_blocks(*fam.params(), fam.subgroup().clone(), blocks)
                    .expect("corruption preserves sizes");
            let by_counts = verify_family(&mutant).is_gs;
            let by_paf = gs_condition(mutant.blocks());
            assert_eq!(by_counts, by_paf, "{label}: routes disagree on corrupted round {round}");
            if !by_counts {
                broken += 1;
            }
        }
        assert!(broken > 150, "corruption barely ever broke a family ({broken}/200): suspicious");
    });
}

// ===== criterion 9: format fidelity =====

#[test]
fn criterion_9_format_fidelity() {
    criterion("criterion 9: corpus round-trips byte-for-byte; golden matrix is exact", || {
        for t in 1..=3 {
            assert_eq!(
                serialize_records(table(t)),
                table_text(t),
                "table {t} does not round-trip"
            );
        }

        let fam = family_at(3, 1, 1);
        let blocks = arrange_for_propus(fam).expect("the 7-run family arranges");
        let written = matrix_to_string(&build_propus(&blocks));
        assert_eq!(
            written,
            include_str!("golden/hadamard_order_28.txt"),
            "order-28 matrix file drifted"
        );
    });
}
