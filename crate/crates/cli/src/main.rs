use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pexc_core::catalog::{catalog_entries, named_perm_group, verify_entry, CatalogEntry, CatalogReport};
use pexc_core::constructions::{c4_pair_group, deleted_permutation_module, gamma_l1, torus, GammaL1Spec};
use pexc_core::formats::{to_canonical_json, BigCount, GroupFile, OrbitReport, PermFile};
use pexc_core::group::{DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_VECTORS};
use pexc_core::perm::{binom_p_valuation, binomial, SubsetWitness, DEFAULT_MAX_SUBSETS};
use pexc_core::{catalog, jordan_tensor, Error, FieldSpec, Limits, MatGroup, PermGroup, PexcVerdict};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pexc", version, about = "Orbit partitions and p-exceptionality of finite linear groups")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest vector space (number of points) an orbit computation may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VECTORS)]
    max_vectors: u64,
    /// Largest group an element enumeration may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock times in reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List or verify the stored examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Orbit sizes on all vectors.
    Orbits {
        #[command(flatten)]
        source: GroupSource,
        /// Also report the p-exceptionality verdict for this prime.
        #[arg(long)]
        p: Option<u32>,
    },
    /// p-exceptionality verdict; exits 1 unless the group is p-exceptional.
    Pexc {
        #[command(flatten)]
        source: GroupSource,
        /// The prime.
        #[arg(long)]
        p: u32,
    },
    /// Whether all orbits on nonzero vectors have equal size; exits 1 if not.
    Half {
        #[command(flatten)]
        source: GroupSource,
    },
    /// Orbits on subsets and the p-concealed verdict; exits 1 unless concealed.
    Concealed {
        /// Permutation group file, or a name such as `A8`, `S5` or `D10`.
        #[arg(long)]
        perm: String,
        /// The prime.
        #[arg(long)]
        p: u32,
    },
    /// Jordan type of the tensor product of unipotent blocks `J_a` and `J_b`.
    Jordan {
        /// Size of the first block.
        #[arg(long)]
        a: usize,
        /// Size of the second block.
        #[arg(long)]
        b: usize,
        /// Characteristic.
        #[arg(long)]
        p: u32,
    },
    /// p-adic valuation of a binomial coefficient.
    Binom {
        /// Top entry.
        #[arg(long)]
        n: u64,
        /// Bottom entry.
        #[arg(long)]
        k: u64,
        /// The prime.
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Group file in the GroupFile JSON format.
    #[arg(long)]
    group: Option<PathBuf>,
    /// A catalog entry name, or one of `c4_pair:Q`, `torus:Q`, `torus_frob:Q`,
    /// `gamma_l1:P,D,S,J`, `deleted:PERM:P`.
    #[arg(long)]
    builtin: Option<String>,
}

enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MismatchedProfile { .. } => Failure::Mismatch(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    seed: u64,
    limits: Limits,
    format: Format,
    out: Option<PathBuf>,
    timing: bool,
}

impl Ctx {
    fn emit(&self, json: &impl Serialize, table: impl FnOnce() -> String) -> Result<(), Failure> {
        let text = match self.format {
            Format::Json => to_canonical_json(json)?,
            Format::Table => table(),
        };
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        seed: cli.seed,
        limits: Limits { max_vectors: cli.max_vectors, max_elements: cli.max_elements },
        format: cli.format,
        out: cli.out,
        timing: cli.timing,
    };
    let outcome = match cli.command {
        Command::Catalog { action: CatalogAction::List } => cmd_catalog_list(&ctx),
        Command::Catalog { action: CatalogAction::Verify { name, all } } => cmd_catalog_verify(&ctx, name, all),
        Command::Orbits { source, p } => cmd_orbits(&ctx, &source, p),
        Command::Pexc { source, p } => cmd_orbits(&ctx, &source, Some(p)),
        Command::Half { source } => cmd_half(&ctx, &source),
        Command::Concealed { perm, p } => cmd_concealed(&ctx, &perm, p),
        Command::Jordan { a, b, p } => cmd_jordan(&ctx, a, b, p),
        Command::Binom { n, k, p } => cmd_binom(&ctx, n, k, p),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[derive(Serialize)]
struct ListRow<'a> {
    name: &'a str,
    field: String,
    dim: usize,
    p: u32,
    status: &'a str,
    citation: &'a str,
}

fn cmd_catalog_list(ctx: &Ctx) -> Outcome {
    let entries = catalog_entries()?;
    let rows: Vec<ListRow> = entries
        .iter()
        .map(|e| ListRow {
            name: &e.name,
            field: field_name(e.field.p, e.field.degree),
            dim: e.dim,
            p: e.p,
            status: e.expected_status.as_str(),
            citation: &e.citation,
        })
        .collect();
    ctx.emit(&rows, || {
        let mut s = String::new();
        for r in &rows {
            s += &format!("{:<28} {:>7} {:>3}  p={}  {}\n", r.name, r.field, r.dim, r.p, r.status);
        }
        s
    })?;
    Ok(true)
}

fn field_name(p: u32, degree: u32) -> String {
    format!("GF({})", (p as u64).pow(degree))
}

fn verify_all(entries: &[CatalogEntry], ctx: &Ctx) -> Result<Vec<CatalogReport>, Failure> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<pexc_core::Result<CatalogReport>>>> = Mutex::new(vec![None; entries.len()]);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(e) = entries.get(i) else { break };
                let r = verify_entry(e, ctx.seed, &ctx.limits);
                results.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    let mut reports = Vec::with_capacity(entries.len());
    for (e, r) in entries.iter().zip(results.into_inner().expect("no poisoned workers")) {
        let mut report = r.expect("every entry visited").map_err(|err| Failure::Usage(format!("{}: {err}", e.name)))?;
        if !ctx.timing {
            report.elapsed_ms = None;
        }
        reports.push(report);
    }
    Ok(reports)
}

fn cmd_catalog_verify(ctx: &Ctx, name: Option<String>, all: bool) -> Outcome {
    let entries = if all { catalog_entries()? } else { vec![catalog(name.as_deref().expect("clap requires a name"))?] };
    let reports = verify_all(&entries, ctx)?;
    let table = || {
        let mut s = String::new();
        for r in &reports {
            let sizes: Vec<String> = r
                .orbit_sizes
                .iter()
                .map(|(k, m)| if *m == 1 { k.to_string() } else { format!("{k}^{m}") })
                .collect();
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            s += &format!("{verdict} {:<28} {:<24} order {:<10} {{{}}}", r.name, r.status.as_str(), r.order.0, sizes.join(","));
            if let Some(ms) = r.elapsed_ms {
                s += &format!(" {ms} ms");
            }
            s.push('\n');
        }
        s
    };
    if all {
        ctx.emit(&reports, table)?;
    } else {
        ctx.emit(&reports[0], table)?;
    }
    let mut ok = true;
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!("mismatch in {}: {}", r.name, r.mismatches.join("; "));
        ok = false;
    }
    Ok(ok)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_group(source: &GroupSource, ctx: &Ctx) -> Result<MatGroup, Failure> {
    if let Some(path) = &source.group {
        let text = read(path)?;
        return GroupFile::parse(&text)
            .and_then(|f| f.to_group())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let spec = source.builtin.as_deref().expect("clap requires a source");
    Ok(builtin(spec, ctx)?)
}

fn builtin(spec: &str, ctx: &Ctx) -> pexc_core::Result<MatGroup> {
    let bad = || Error::InvalidSpec(format!("unrecognized builtin `{spec}`"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let (kind, args) = match spec.split_once(':') {
        Some(x) => x,
        None => return pexc_core::catalog::build(&catalog(spec)?.recipe, ctx.seed, &ctx.limits),
    };
    match kind {
        "c4_pair" => c4_pair_group(num(args)? as u32),
        "torus" | "torus_frob" => torus(&FieldSpec::of_order(num(args)? as u32)?, kind == "torus_frob"),
        "gamma_l1" => {
            let v: Vec<u64> = args.split(',').map(num).collect::<pexc_core::Result<_>>()?;
            let [p, d, s, j] = v[..] else { return Err(bad()) };
            gamma_l1(&GammaL1Spec::new(p as u32, d as u32, s as u32, j))
        }
        "deleted" => {
            let (perm, p) = args.rsplit_once(':').ok_or_else(bad)?;
            deleted_permutation_module(&named_perm_group(perm)?, num(p)? as u32)
        }
        _ => Err(bad()),
    }
}

fn orbit_table(r: &OrbitReport) -> String {
    let sizes: Vec<String> =
        r.orbit_sizes.iter().map(|(k, m)| if m.0 == 1 { k.to_string() } else { format!("{k}^{}", m.0) }).collect();
    let mut s = format!(
        "{}\n  field {}  dim {}\n  order {}\n  orbit sizes {{{}}}\n  half-transitive {}  transitive {}\n",
        r.label.as_deref().unwrap_or("(unnamed)"),
        field_name(r.field.p, r.field.degree),
        r.dim,
        r.order.map_or("-".to_string(), |o| o.0.to_string()),
        sizes.join(","),
        r.half_transitive,
        r.transitive,
    );
    if let Some(v) = &r.verdict {
        s += &format!("  p = {}: {}", r.p.unwrap_or(0), v.status.as_str());
        if let Some(w) = &v.witness {
            s += &format!(" (orbit of vector {} has size {})", w.representative.0, w.size.0);
        }
        s.push('\n');
    }
    if let Some(ms) = r.elapsed_ms {
        s += &format!("  {ms} ms\n");
    }
    s
}

fn orbit_report(ctx: &Ctx, g: &MatGroup, p: Option<u32>) -> Result<OrbitReport, Failure> {
    let start = Instant::now();
    let partition = g.orbit_partition(&ctx.limits)?;
    let order = g.order_with(&partition);
    let verdict = p.map(|p| PexcVerdict::evaluate(p, order, &partition));
    let mut report = OrbitReport::new(g, &partition, Some(order), verdict.as_ref());
    if ctx.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn cmd_orbits(ctx: &Ctx, source: &GroupSource, p: Option<u32>) -> Outcome {
    if let Some(p) = p {
        if !pexc_core::field::is_prime(p as u64) {
            return Err(Failure::Usage(format!("{p} is not prime")));
        }
    }
    let g = load_group(source, ctx)?;
    let report = orbit_report(ctx, &g, p)?;
    ctx.emit(&report, || orbit_table(&report))?;
    Ok(report.verdict.as_ref().is_none_or(|v| v.status == pexc_core::PexcStatus::PExceptional))
}

fn cmd_half(ctx: &Ctx, source: &GroupSource) -> Outcome {
    let g = load_group(source, ctx)?;
    let report = orbit_report(ctx, &g, None)?;
    ctx.emit(&report, || orbit_table(&report))?;
    Ok(report.half_transitive)
}

#[derive(Serialize)]
struct ConcealedReport {
    label: Option<String>,
    degree: usize,
    p: u32,
    order: BigCount,
    concealed: bool,
    witness: Option<SubsetWitness>,
    /// For each k, orbit size -> multiplicity on k-subsets.
    levels: Vec<std::collections::BTreeMap<u64, u64>>,
}

fn load_perm(arg: &str) -> Result<PermGroup, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let text = read(path)?;
        return PermFile::parse(&text)
            .and_then(|f| f.to_group())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    Ok(named_perm_group(stem)?)
}

fn cmd_concealed(ctx: &Ctx, perm: &str, p: u32) -> Outcome {
    let h = load_perm(perm)?;
    let r = h.subset_orbits(p, DEFAULT_MAX_SUBSETS)?;
    let report = ConcealedReport {
        label: h.label().map(str::to_string),
        degree: r.n,
        p,
        order: BigCount(r.order),
        concealed: r.concealed,
        witness: r.witness.clone(),
        levels: r.levels.clone(),
    };
    ctx.emit(&report, || {
        let mut s = format!(
            "{} of degree {} and order {}: {}p-concealed for p = {p}\n",
            report.label.as_deref().unwrap_or("group"),
            report.degree,
            report.order.0,
            if report.concealed { "" } else { "not " }
        );
        if let Some(w) = &report.witness {
            s += &format!("  subset {:?} has orbit size {}\n", w.subset, w.size);
        }
        s
    })?;
    Ok(report.concealed)
}

#[derive(Serialize)]
struct JordanReport {
    a: usize,
    b: usize,
    p: u32,
    blocks: Vec<usize>,
}

fn cmd_jordan(ctx: &Ctx, a: usize, b: usize, p: u32) -> Outcome {
    let t = jordan_tensor(a, b, p)?;
    let report = JordanReport { a, b, p, blocks: t.blocks.clone() };
    ctx.emit(&report, || format!("J_{a} (x) J_{b} in characteristic {p}: {t}\n"))?;
    Ok(true)
}

#[derive(Serialize)]
struct BinomReport {
    n: u64,
    k: u64,
    p: u64,
    valuation: u32,
}

fn cmd_binom(ctx: &Ctx, n: u64, k: u64, p: u64) -> Outcome {
    if k > n {
        return Err(Failure::Usage(format!("need k <= n, got k = {k}, n = {n}")));
    }
    if !pexc_core::field::is_prime(p) {
        return Err(Failure::Usage(format!("{p} is not prime")));
    }
    let valuation = binom_p_valuation(n, k, p);
    let report = BinomReport { n, k, p, valuation };
    ctx.emit(&report, || {
        let value = if n <= 120 { format!(" = {}", binomial(n, k)) } else { String::new() };
        format!("v_{p}(C({n},{k}){value}) = {valuation}\n")
    })?;
    Ok(true)
}
