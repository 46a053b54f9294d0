//! `propus` — search for four-block difference families over `Z_v` and
//! assemble the symmetric Hadamard matrices they generate.
//!
//! Exit codes: 0 on success, 1 when a verification or verdict fails,
//! 2 on usage errors (bad flags, unreadable or malformed input).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use propus::corpus::corpus_check;
use propus::equivalence::equivalent;
use propus::families::{verify_family, DifferenceFamily, FamilyVerdict};
use propus::format::{
    family_to_json, matrix_to_string, parse_families, serialize_record, ParseMode, ParsedRecord,
};
use propus::hadamard::{arrange_for_propus, build_propus, verify_hadamard};
use propus::params::enumerate_propus_params;
use propus::residues::{Modulus, OrbitTable, ResidueSet, SubgroupH};
use propus::search::{search, SearchSpec, SymmetricRole};
use propus::sequences::{paf, to_sequence};

// ===== command line =====

#[derive(Parser)]
#[command(
    name = "propus",
    version,
    about = "Difference-family search and symmetric Hadamard matrix assembly over cyclic groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List feasible normalized parameter sets for a modulus and subgroup
    Params(GroupArgs),
    /// Print the orbits of the subgroup's multiplicative action
    Orbits(GroupArgs),
    /// Exhaustively search for families with the given block sizes
    Search(SearchArgs),
    /// Check every family in a file; nonzero exit if any fails
    Verify(FileArgs),
    /// Print each family with its blocks fully expanded
    Expand(FileArgs),
    /// Assemble the Hadamard matrix of one family
    Hadamard(HadamardArgs),
    /// Autocorrelation profile of one block or an explicit set
    Classify(ClassifyArgs),
    /// Decide whether two families are equivalent
    Equivalent(EquivalentArgs),
    /// Re-verify the bundled corpus end-to-end
    CorpusCheck,
}

#[derive(Args)]
struct GroupArgs {
    /// Modulus of the cyclic group
    #[arg(long)]
    v: u32,
    /// Generators of the multiplier subgroup, comma-separated
    #[arg(long = "h-gen", value_delimiter = ',', required = true)]
    h_gen: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymBlock {
    /// The first block must be symmetric
    First,
    /// The last block must be symmetric
    Last,
    /// Either end block may carry the symmetry
    Either,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Block sizes k1,k2,k3,k4
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u32>,
    /// Which block the symmetry requirement applies to
    #[arg(long = "sym-block", value_enum, default_value_t = SymBlock::Either)]
    sym_block: SymBlock,
    /// Drop equivalent duplicates from the output
    #[arg(long)]
    dedupe: bool,
    /// Stop after N matches; 0 means exhaustive
    #[arg(long, default_value_t = 0)]
    limit: usize,
    /// Worker threads (default: ambient pool / PROPUS_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// Write the resulting record here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FileArgs {
    /// Family file in the text format
    file: PathBuf,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Skip unrecognized lines with a warning instead of failing
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct HadamardArgs {
    /// Family file in the text format
    file: PathBuf,
    /// 1-based family number, counting across the whole file
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Write the matrix here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify symmetry and orthogonality of the result
    #[arg(long)]
    check: bool,
    /// Skip unrecognized lines with a warning instead of failing
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "set"]))]
struct ClassifyArgs {
    /// Family file to take the block from
    #[arg(long, requires = "block")]
    family: Option<PathBuf>,
    /// Which block of the family: 1, 2, or 4
    #[arg(long)]
    block: Option<u8>,
    /// 1-based family number, counting across the whole file
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Explicit residue set, comma-separated
    #[arg(long, requires = "v")]
    set: Option<String>,
    /// Modulus for --set
    #[arg(long)]
    v: Option<u32>,
    /// Skip unrecognized lines with a warning instead of failing
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct EquivalentArgs {
    /// First family file
    file_a: PathBuf,
    /// Second family file
    file_b: PathBuf,
    /// 1-based family number in the first file
    #[arg(long = "index-a", default_value_t = 1)]
    index_a: usize,
    /// 1-based family number in the second file
    #[arg(long = "index-b", default_value_t = 1)]
    index_b: usize,
    /// Skip unrecognized lines with a warning instead of failing
    #[arg(long)]
    lenient: bool,
}

// ===== outcomes =====

/// Errors that abort a command.
enum Failure {
    /// Bad invocation or unusable input: exit 2.
    Usage(String),
    /// The command ran and its check failed: exit 1.
    Check(String),
}

/// A command that ran to completion, with or without a clean verdict.
enum Outcome {
    Ok,
    /// Details already printed: exit 1.
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

/// `PROPUS_THREADS` resizes the ambient worker pool for everything that
/// fans out (search probing, Gram verification).
fn init_threads() -> Result<(), Failure> {
    match std::env::var("PROPUS_THREADS") {
        Err(_) => Ok(()),
        Ok(s) => {
            let n: usize = s
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Failure::Usage(format!("PROPUS_THREADS={s} is not a thread count")))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(format!("PROPUS_THREADS: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Params(args) => cmd_params(&args),
        Command::Orbits(args) => cmd_orbits(&args),
        Command::Search(args) => cmd_search(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Expand(args) => cmd_expand(&args),
        Command::Hadamard(args) => cmd_hadamard(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Equivalent(args) => cmd_equivalent(&args),
        Command::CorpusCheck => cmd_corpus_check(),
    }
}

// ===== shared helpers =====

fn group_of(args: &GroupArgs) -> Result<(Modulus, SubgroupH), Failure> {
    let v = Modulus::new(args.v).map_err(|e| Failure::Usage(format!("--v: {e}")))?;
    let h = SubgroupH::generate(v, &args.h_gen)
        .map_err(|e| Failure::Usage(format!("--h-gen: {e}")))?;
    Ok((v, h))
}

fn load(path: &Path, lenient: bool) -> Result<Vec<ParsedRecord>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mode = if lenient { ParseMode::Lenient } else { ParseMode::Strict };
    let parsed = parse_families(&text, mode)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("{}: line {}: {}", path.display(), w.line, w.text);
    }
    Ok(parsed.records)
}

/// The file's families in order, ignoring record boundaries.
fn flatten(records: &[ParsedRecord]) -> Vec<&DifferenceFamily> {
    records.iter().flat_map(|r| r.families()).collect()
}

fn family_at<'a>(
    records: &'a [ParsedRecord],
    index: usize,
    flag: &str,
) -> Result<&'a DifferenceFamily, Failure> {
    let all = flatten(records);
    if index == 0 || index > all.len() {
        return Err(Failure::Usage(format!(
            "{flag} {index} is out of range: the file has {} families",
            all.len()
        )));
    }
    Ok(all[index - 1])
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_array(parts: Vec<String>) -> String {
    let values: Vec<serde_json::Value> = parts
        .iter()
        .map(|s| serde_json::from_str(s).expect("library JSON is well-formed"))
        .collect();
    serde_json::to_string_pretty(&serde_json::Value::Array(values))
        .expect("array serialization cannot fail")
}

// ===== subcommands =====

fn cmd_params(args: &GroupArgs) -> Result<Outcome, Failure> {
    let (v, h) = group_of(args)?;
    let table = OrbitTable::build(h);
    let sets = enumerate_propus_params(v).map_err(|e| Failure::Usage(format!("--v: {e}")))?;
    for p in sets.iter().filter(|p| p.h_feasible(&table)) {
        println!("{p}");
    }
    Ok(Outcome::Ok)
}

fn cmd_orbits(args: &GroupArgs) -> Result<Outcome, Failure> {
    let (v, h) = group_of(args)?;
    let table = OrbitTable::build(h);
    println!(
        "v = {v}, H = {} (order {}), {} orbits",
        table.subgroup(),
        table.subgroup().order(),
        table.num_orbits()
    );
    for idx in 0..table.num_orbits() {
        let orbit = table.orbit(idx);
        let body = orbit.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        println!("{}: {{{body}}}", orbit[0]);
    }
    Ok(Outcome::Ok)
}

fn cmd_search(args: &SearchArgs) -> Result<Outcome, Failure> {
    let (v, h) = group_of(&args.group)?;
    let k: [u32; 4] = <[u32; 4]>::try_from(args.k.as_slice())
        .map_err(|_| Failure::Usage(format!("--k needs four sizes, got {}", args.k.len())))?;
    let k_sum: u32 = k.iter().sum();
    let lambda = k_sum
        .checked_sub(v.get())
        .ok_or_else(|| Failure::Check(format!("infeasible: sizes sum to {k_sum} < v = {v}")))?;
    let params = propus::params::PropusParameterSet::new(v, k, lambda)
        .map_err(|e| Failure::Usage(format!("--k: {e}")))?;
    let spec = SearchSpec {
        params,
        subgroup: h,
        symmetric_role: match args.sym_block {
            SymBlock::First => SymmetricRole::First,
            SymBlock::Last => SymmetricRole::Last,
            SymBlock::Either => SymmetricRole::Either,
        },
        dedupe: args.dedupe,
        limit: args.limit,
        threads: args.threads,
    };
    let outcome = search(&spec).map_err(|e| Failure::Check(format!("search: {e}")))?;
    for w in &outcome.warnings {
        eprintln!("search: {w}");
    }
    eprintln!(
        "search: {} families for {params}{}",
        outcome.families.len(),
        if outcome.complete { "" } else { " (incomplete)" }
    );
    if outcome.families.is_empty() {
        return Ok(Outcome::Ok);
    }
    let rep_lists = outcome
        .families
        .iter()
        .map(|f| f.reps().expect("search output carries representatives").clone())
        .collect();
    let record = ParsedRecord::assemble(params, spec.subgroup, rep_lists)
        .expect("search output sizes already checked");
    emit(args.out.as_deref(), &(serialize_record(&record) + "\n"))?;
    Ok(Outcome::Ok)
}

fn describe_verdict(verdict: &FamilyVerdict) -> String {
    if verdict.is_propus {
        let pairs = verdict
            .equal_pairs
            .iter()
            .map(|(i, j)| format!("X{i}=X{j}"))
            .collect::<Vec<_>>()
            .join(",");
        let sym = verdict
            .symmetric_blocks
            .iter()
            .map(|b| format!("X{b}"))
            .collect::<Vec<_>>()
            .join(",");
        return format!("ok ({pairs}; symmetric {sym})");
    }
    let mut reasons = Vec::new();
    if !verdict.violated_equations.is_empty() {
        reasons.push(format!("parameter equations violated: {:?}", verdict.violated_equations));
    }
    if !verdict.size_mismatches.is_empty() {
        reasons.push(format!("block sizes off at {:?}", verdict.size_mismatches));
    }
    if let Some((d, n)) = verdict.first_bad_difference {
        reasons.push(format!("N({d}) = {n}"));
    }
    if verdict.is_gs {
        reasons.push("no equal pair with a symmetric complementary block".to_string());
    }
    format!("FAIL ({})", reasons.join("; "))
}

fn cmd_verify(args: &FileArgs) -> Result<Outcome, Failure> {
    let records = load(&args.file, args.lenient)?;
    let mut failures = 0usize;
    let mut json_parts = Vec::new();
    for rec in &records {
        for (f, fam) in rec.families().iter().enumerate() {
            let verdict = verify_family(fam);
            if !verdict.is_propus {
                failures += 1;
            }
            if args.json {
                json_parts.push(family_to_json(fam, false, Some(&verdict)));
            } else {
                println!("{} family {}: {}", rec.params(), f + 1, describe_verdict(&verdict));
            }
        }
    }
    if args.json {
        println!("{}", json_array(json_parts));
    }
    if failures > 0 {
        eprintln!("{failures} families failed verification");
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Ok)
}

fn cmd_expand(args: &FileArgs) -> Result<Outcome, Failure> {
    let records = load(&args.file, args.lenient)?;
    let mut json_parts = Vec::new();
    let mut first = true;
    for rec in &records {
        for fam in rec.families() {
            if args.json {
                json_parts.push(family_to_json(fam, true, None));
                continue;
            }
            if !first {
                println!();
            }
            first = false;
            println!("{}, H={}", rec.params(), rec.subgroup());
            for (i, block) in fam.blocks().iter().enumerate() {
                println!("X{} = {block}", i + 1);
            }
        }
    }
    if args.json {
        println!("{}", json_array(json_parts));
    }
    Ok(Outcome::Ok)
}

fn cmd_hadamard(args: &HadamardArgs) -> Result<Outcome, Failure> {
    let records = load(&args.file, args.lenient)?;
    let fam = family_at(&records, args.index, "--index")?;
    let blocks = arrange_for_propus(fam).map_err(|e| Failure::Check(format!("{e}")))?;
    let h = build_propus(&blocks);
    emit(args.out.as_deref(), &matrix_to_string(&h))?;
    if args.check {
        let report = verify_hadamard(&h);
        eprintln!(
            "order {}: symmetric {}, orthogonal {}",
            h.order(),
            report.symmetric,
            report.orthogonal
        );
        if !report.is_symmetric_hadamard() {
            return Ok(Outcome::Failed);
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let set: ResidueSet = if let Some(file) = &args.family {
        let block = args.block.expect("clap enforces --block with --family");
        let slot = match block {
            1 => 0,
            2 => 1,
            4 => 3,
            other => {
                return Err(Failure::Usage(format!("--block must be 1, 2, or 4, got {other}")))
            }
        };
        let records = load(file, args.lenient)?;
        family_at(&records, args.index, "--index")?.blocks()[slot].clone()
    } else {
        let v = Modulus::new(args.v.expect("clap enforces --v with --set"))
            .map_err(|e| Failure::Usage(format!("--v: {e}")))?;
        let elems = args
            .set
            .as_deref()
            .expect("clap enforces the source group")
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Usage(format!("--set: {e}")))?;
        ResidueSet::new(v, elems)
    };

    let profile = paf(&to_sequence(&set));
    let v = set.modulus().get() as usize;
    let half = &profile.values()[..v.div_ceil(2)];
    let fmt_vals =
        |vals: &[i64]| vals.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
    println!("set: {set} (v = {v}, k = {})", set.len());
    println!("paf (shifts 0..{}): {}", half.len() - 1, fmt_vals(half));
    println!("levels: {}", fmt_vals(&profile.level_set()));
    println!("three-level: {}", if profile.three_level() { "yes" } else { "no" });
    let mut flags = Vec::new();
    match profile.optimal() {
        Some(true) => flags.push("optimal"),
        Some(false) => flags.push("not optimal"),
        None => {}
    }
    flags.push(if profile.balanced() { "balanced" } else { "not balanced" });
    println!("classification: {}", flags.join(", "));
    Ok(Outcome::Ok)
}

fn cmd_equivalent(args: &EquivalentArgs) -> Result<Outcome, Failure> {
    let records_a = load(&args.file_a, args.lenient)?;
    let records_b = load(&args.file_b, args.lenient)?;
    let a = family_at(&records_a, args.index_a, "--index-a")?;
    let b = family_at(&records_b, args.index_b, "--index-b")?;
    if equivalent(a, b) {
        println!("equivalent");
        Ok(Outcome::Ok)
    } else {
        println!("not equivalent");
        Ok(Outcome::Failed)
    }
}

fn cmd_corpus_check() -> Result<Outcome, Failure> {
    let report = corpus_check();
    for check in &report.checks {
        if check.passed {
            println!("[PASS] {}", check.label);
        } else {
            println!("[FAIL] {}: {}", check.label, check.detail);
        }
    }
    if report.passed() {
        println!("all families verified; all Hadamard matrices symmetric");
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Failed)
    }
}
