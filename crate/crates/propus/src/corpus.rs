//! The embedded corpus: three cleaned tables of published difference
//! families plus machine-readable annotations of the claims made about
//! them (symmetric blocks, autocorrelation values, inequivalence counts,
//! corrected headers).
//!
//! [`corpus_check`] re-derives every annotated claim from scratch and is
//! the library side of the `corpus-check` subcommand.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::equivalence::{canonical_form, CanonicalForm};
use crate::families::{verify_family, DifferenceFamily};
use crate::format::{parse_families, serialize_records, ParseMode, ParsedRecord};
use crate::hadamard::{arrange_for_propus, build_propus, verify_hadamard};
use crate::sequences::{paf, to_sequence};

// ===== embedded data =====

const TABLE_TEXTS: [&str; 3] = [
    include_str!("../corpus/table1.txt"),
    include_str!("../corpus/table2.txt"),
    include_str!("../corpus/table3.txt"),
];

const ANNOTATIONS_TEXT: &str = include_str!("../corpus/annotations.json");

/// Raw text of table 1, 2, or 3.
pub fn table_text(table: usize) -> &'static str {
    assert!((1..=3).contains(&table), "corpus has tables 1-3, asked for {table}");
    TABLE_TEXTS[table - 1]
}

/// Parsed records of table 1, 2, or 3.
pub fn table(table: usize) -> &'static [ParsedRecord] {
    static TABLES: [OnceLock<Vec<ParsedRecord>>; 3] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    assert!((1..=3).contains(&table), "corpus has tables 1-3, asked for {table}");
    TABLES[table - 1].get_or_init(|| {
        parse_families(table_text(table), ParseMode::Strict)
            .unwrap_or_else(|e| panic!("embedded table {table} must parse: {e}"))
            .records
    })
}

/// One family of the corpus by 1-based table, record, and family number.
pub fn family_at(table_no: usize, record: usize, family: usize) -> &'static DifferenceFamily {
    let records = table(table_no);
    let rec = records
        .get(record - 1)
        .unwrap_or_else(|| panic!("table {table_no} has {} records, asked for {record}", records.len()));
    rec.families()
        .get(family - 1)
        .unwrap_or_else(|| {
            panic!(
                "table {table_no} record {record} has {} families, asked for {family}",
                rec.families().len()
            )
        })
}

// ===== annotations =====

/// Address of one block inside the corpus (all components 1-based).
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BlockRef {
    pub table: usize,
    pub record: usize,
    pub family: usize,
    pub block: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PafValueClaim {
    #[serde(flatten)]
    pub at: BlockRef,
    /// Expected autocorrelation values at shifts `0..=(v-1)/2`.
    pub values_from_shift_zero: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LevelSetClaim {
    #[serde(flatten)]
    pub at: BlockRef,
    /// Expected distinct autocorrelation values, peak first.
    pub levels_with_peak: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ClassificationClaim {
    #[serde(flatten)]
    pub at: BlockRef,
    pub optimal: bool,
    pub balanced: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NonequivalentGroup {
    pub table: usize,
    /// 1-based records whose families form the group.
    pub records: Vec<usize>,
    /// How many pairwise inequivalent families the group must contain
    /// (equals the family count: all distinct).
    pub expected_distinct: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LambdaRepair {
    pub table: usize,
    pub record: usize,
    pub printed_lambda: u32,
    pub repaired_lambda: u32,
    pub note: String,
}

/// Everything `annotations.json` asserts about the tables.
#[derive(Debug, Clone, Deserialize)]
pub struct Annotations {
    pub symmetric_blocks: Vec<BlockRef>,
    pub paf_value_claims: Vec<PafValueClaim>,
    pub level_set_claims: Vec<LevelSetClaim>,
    pub classification_claims: Vec<ClassificationClaim>,
    pub nonequivalent_groups: Vec<NonequivalentGroup>,
    pub lambda_repairs: Vec<LambdaRepair>,
    pub notes: Vec<String>,
}

pub fn annotations() -> &'static Annotations {
    static ANNOTATIONS: OnceLock<Annotations> = OnceLock::new();
    ANNOTATIONS.get_or_init(|| {
        serde_json::from_str(ANNOTATIONS_TEXT)
            .unwrap_or_else(|e| panic!("embedded annotations must deserialize: {e}"))
    })
}

// ===== self-check =====

/// One labeled check of [`corpus_check`].
#[derive(Debug, Clone)]
pub struct CorpusCheck {
    pub label: String,
    pub passed: bool,
    /// What went wrong; empty on a pass.
    pub detail: String,
}

/// Outcome of the full corpus self-check.
#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub checks: Vec<CorpusCheck>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn block_of(at: BlockRef) -> &'static crate::residues::ResidueSet {
    &family_at(at.table, at.record, at.family).blocks()[at.block - 1]
}

fn push(checks: &mut Vec<CorpusCheck>, label: &str, failures: Vec<String>) {
    checks.push(CorpusCheck {
        label: label.to_string(),
        passed: failures.is_empty(),
        detail: failures.join("; "),
    });
}

/// Re-derive every claim the corpus makes about itself. Each check gets
/// one labeled pass/fail entry; a failing entry says where and why.
pub fn corpus_check() -> CorpusReport {
    let ann = annotations();
    let mut checks = Vec::new();

    // table shape: pinned record and family counts
    for (t, (nrec, nfam)) in [(6, 12), (3, 6), (29, 35)].into_iter().enumerate() {
        let t = t + 1;
        let records = table(t);
        let fams: usize = records.iter().map(|r| r.families().len()).sum();
        let mut failures = Vec::new();
        if records.len() != nrec {
            failures.push(format!("{} records, expected {nrec}", records.len()));
        }
        if fams != nfam {
            failures.push(format!("{fams} families, expected {nfam}"));
        }
        push(&mut checks, &format!("table {t}: {nrec} records, {nfam} families"), failures);
    }

    // every family satisfies the difference-count and equal-pair conditions
    for t in 1..=3 {
        let mut failures = Vec::new();
        for (r, rec) in table(t).iter().enumerate() {
            for (f, fam) in rec.families().iter().enumerate() {
                let verdict = verify_family(fam);
                if !verdict.is_propus {
                    failures.push(format!(
                        "record {} family {} of {} fails (gs: {})",
                        r + 1,
                        f + 1,
                        rec.params(),
                        verdict.is_gs
                    ));
                }
            }
        }
        push(&mut checks, &format!("table {t}: every family verifies"), failures);
    }

    // annotated symmetric blocks really are fixed by negation
    let mut failures = Vec::new();
    for &at in &ann.symmetric_blocks {
        if !block_of(at).is_symmetric() {
            failures.push(format!(
                "table {} record {} family {} block {} is not symmetric",
                at.table, at.record, at.family, at.block
            ));
        }
    }
    push(&mut checks, "annotations: symmetric blocks", failures);

    // annotated autocorrelation value lists
    let mut failures = Vec::new();
    for claim in &ann.paf_value_claims {
        let at = claim.at;
        let profile = paf(&to_sequence(block_of(at)));
        let half = profile.values().len().div_ceil(2);
        let got = &profile.values()[..half];
        if got != claim.values_from_shift_zero.as_slice() {
            failures.push(format!(
                "table {} record {} family {} block {}: values {:?} != claimed {:?}",
                at.table, at.record, at.family, at.block, got, claim.values_from_shift_zero
            ));
        }
    }
    push(&mut checks, "annotations: autocorrelation value lists", failures);

    // annotated level sets
    let mut failures = Vec::new();
    for claim in &ann.level_set_claims {
        let at = claim.at;
        let levels = paf(&to_sequence(block_of(at))).level_set();
        if levels != claim.levels_with_peak {
            failures.push(format!(
                "table {} record {} family {} block {}: levels {:?} != claimed {:?}",
                at.table, at.record, at.family, at.block, levels, claim.levels_with_peak
            ));
        }
    }
    push(&mut checks, "annotations: level sets", failures);

    // annotated optimal/balanced classifications
    let mut failures = Vec::new();
    for claim in &ann.classification_claims {
        let at = claim.at;
        let profile = paf(&to_sequence(block_of(at)));
        if profile.optimal() != Some(claim.optimal) || profile.balanced() != claim.balanced {
            failures.push(format!(
                "table {} record {} family {} block {}: optimal {:?} balanced {} != claimed {} {}",
                at.table,
                at.record,
                at.family,
                at.block,
                profile.optimal(),
                profile.balanced(),
                claim.optimal,
                claim.balanced
            ));
        }
    }
    push(&mut checks, "annotations: optimal/balanced classifications", failures);

    // annotated inequivalence: each group's families are pairwise distinct
    let mut failures = Vec::new();
    for group in &ann.nonequivalent_groups {
        let mut forms: Vec<CanonicalForm> = Vec::new();
        for &r in &group.records {
            for fam in table(group.table)[r - 1].families() {
                forms.push(canonical_form(fam));
            }
        }
        let total = forms.len();
        forms.sort_by(|a, b| a.blocks().cmp(b.blocks()));
        forms.dedup_by(|a, b| a.blocks() == b.blocks());
        if forms.len() != group.expected_distinct || total != group.expected_distinct {
            failures.push(format!(
                "table {} records {:?}: {} distinct of {} families, expected {}",
                group.table,
                group.records,
                forms.len(),
                total,
                group.expected_distinct
            ));
        }
    }
    push(&mut checks, "annotations: pairwise inequivalent groups", failures);

    // corrected headers: the repair is forced by the size-sum identity
    let mut failures = Vec::new();
    for repair in &ann.lambda_repairs {
        let params = *table(repair.table)[repair.record - 1].params();
        let k_sum: u32 = params.k().iter().sum();
        let forced = k_sum - params.modulus().get();
        if params.lambda() != repair.repaired_lambda
            || forced != repair.repaired_lambda
            || repair.printed_lambda == repair.repaired_lambda
            || !params.validate().is_valid()
        {
            failures.push(format!(
                "table {} record {} {}: repair {} -> {} is not forced",
                repair.table, repair.record, params, repair.printed_lambda, repair.repaired_lambda
            ));
        }
    }
    push(&mut checks, "annotations: corrected headers", failures);

    // every family yields a symmetric orthogonal matrix of order 4v
    let mut failures = Vec::new();
    for t in 1..=3 {
        for (r, rec) in table(t).iter().enumerate() {
            for (f, fam) in rec.families().iter().enumerate() {
                let outcome = arrange_for_propus(fam)
                    .map(|blocks| verify_hadamard(&build_propus(&blocks)));
                match outcome {
                    Ok(report) if report.is_symmetric_hadamard() => {}
                    Ok(report) => failures.push(format!(
                        "table {t} record {} family {}: symmetric {} orthogonal {}",
                        r + 1,
                        f + 1,
                        report.symmetric,
                        report.orthogonal
                    )),
                    Err(e) => failures.push(format!(
                        "table {t} record {} family {}: no arrangement ({e})",
                        r + 1,
                        f + 1
                    )),
                }
            }
        }
    }
    push(&mut checks, "hadamard: every family builds a symmetric orthogonal matrix", failures);

    // serializer inverts the parser byte-for-byte on the shipped files
    let mut failures = Vec::new();
    for t in 1..=3 {
        if serialize_records(table(t)) != table_text(t) {
            failures.push(format!("table {t} does not round-trip"));
        }
    }
    push(&mut checks, "format: tables round-trip byte-for-byte", failures);

    CorpusReport { checks }
}
