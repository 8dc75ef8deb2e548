//! Command-line front end: verification, independence-system search, exponent
//! optimization, bound grids, and format dumps.
//!
//! Standard output carries machine-readable content only; progress notes go
//! to standard error. Exit codes: 0 success, 1 verification failure, 2
//! usage or parameter error. Identical invocations produce byte-identical
//! output files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use borderrank::constructions::{
    brute_force_m, build_summands, independence_system_even, verify_construction, witness_family,
    Construction, IndependenceSystem,
};
use borderrank::exponent::{
    format_significant, generate_grid, schonhage_omega, to_csv, to_ppm, GridFamily, GridSpec,
    RangeSpec,
};
use borderrank::limits::{
    expand_rank_one, generic_rank_estimate, parse_witness, verify_span_limit_witness,
    write_witness, SpanFamily,
};
use borderrank::tensor::{
    graph_tensor, mamu, triangle, unit_tensor, SparseTensor,
};
use borderrank::Error;

#[derive(Parser)]
#[command(name = "borderrank", version, about = "Exact border-rank workbench")]
struct Cli {
    /// Seed for the advisory fast pre-checks (reported on stderr only).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a construction; exit 0 iff the border-rank upper bound holds.
    Verify(VerifyArgs),
    /// Search for an independence system of a target size.
    #[command(name = "search-m")]
    SearchM(SearchArgs),
    /// Optimized exponent bound for square matrix multiplication.
    Omega(OmegaArgs),
    /// Evaluate a bound grid to CSV or a PPM heatmap.
    Grid(GridArgs),
    /// Print tensors or witness families in the exchange formats.
    Dump(DumpArgs),
}

#[derive(Args, Clone)]
struct ConstructionArgs {
    /// Order-4 spider plus half-size dangling matrix; sizes from --n n1,n2,n3.
    #[arg(long)]
    c1: bool,
    /// (2,2,a+2) spider absorbing an a×a matrix; size from --a.
    #[arg(long)]
    c2: bool,
    /// d-legged spider of weight n plus an n^d matrix; sizes from --d and --n.
    #[arg(long)]
    c3: bool,
    /// Order-4 spider absorbing a diagonal tensor; sizes from --n n1,n2,n3.
    #[arg(long)]
    c4: bool,
    /// Leg sizes: "n1,n2,n3" for --c1/--c4, a single n for --c3.
    #[arg(long)]
    n: Option<String>,
    /// Matrix size for --c2.
    #[arg(long)]
    a: Option<usize>,
    /// Leg count for --c3.
    #[arg(long)]
    d: Option<usize>,
}

impl ConstructionArgs {
    fn parse_spec(&self) -> Result<Construction, String> {
        let picked = [self.c1, self.c2, self.c3, self.c4]
            .iter()
            .filter(|&&b| b)
            .count();
        if picked != 1 {
            return Err("pick exactly one of --c1/--c2/--c3/--c4".into());
        }
        let triple = |text: &Option<String>| -> Result<[usize; 3], String> {
            let text = text.as_deref().ok_or("missing --n n1,n2,n3")?;
            let parts: Vec<usize> = text
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad size {p:?}")))
                .collect::<Result<_, _>>()?;
            match parts[..] {
                [n1, n2, n3] => Ok([n1, n2, n3]),
                _ => Err(format!("--n expects three sizes, got {text:?}")),
            }
        };
        if self.c1 {
            let [n1, n2, n3] = triple(&self.n)?;
            Ok(Construction::C1 { n1, n2, n3 })
        } else if self.c2 {
            Ok(Construction::C2 {
                a: self.a.ok_or("missing --a")?,
            })
        } else if self.c3 {
            let d = self.d.ok_or("missing --d")?;
            let n = self
                .n
                .as_deref()
                .ok_or("missing --n")?
                .trim()
                .parse::<usize>()
                .map_err(|_| "--c3 expects a single --n".to_string())?;
            Ok(Construction::C3 { d, n })
        } else {
            let [n1, n2, n3] = triple(&self.n)?;
            Ok(Construction::C4 { n1, n2, n3 })
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: ConstructionArgs,
    /// Verify this witness file against the construction's direct sum instead
    /// of the built-in family.
    #[arg(long)]
    witness_file: Option<PathBuf>,
    /// Report destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    n1: usize,
    n2: usize,
    n3: usize,
    /// Size of the system to search for.
    #[arg(long)]
    target: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OmegaArgs {
    /// Optimize the entropy bound for the pair with parameters N1 N2.
    #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
    schonhage: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// ext_mamu | multi_emamu_fixed_d | multi_emamu_p_of_d | dome
    #[arg(long)]
    family: String,
    /// Use the published figure ranges for the family.
    #[arg(long)]
    figure_defaults: bool,
    /// Range "lo..hi[:step]" per parameter slot.
    #[arg(long)]
    n3: Option<String>,
    #[arg(long)]
    n4: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    p: Option<String>,
    /// csv (default) or ppm.
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    /// Unit tensor "k,r".
    #[arg(long)]
    unit: Option<String>,
    /// Matrix multiplication tensor "m1,m2,m3".
    #[arg(long)]
    mamu: Option<String>,
    /// Triangle graph tensor "a,b,c".
    #[arg(long)]
    triangle: Option<String>,
    #[command(flatten)]
    spec: ConstructionArgs,
    /// text: tensor dump (for constructions, the direct sum);
    /// witness: the rank-one family in the witness exchange format.
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    ExitCode::from(code)
}

/// Parameter and usage problems exit 2; failed verifications exit 1.
fn exit_code_for(err: &CliError) -> u8 {
    match err {
        CliError::Usage(_) => 2,
        CliError::Lib(e) => match e {
            Error::InvalidParameter(_) | Error::Parse(_) | Error::SearchGuard { .. } => 2,
            _ => 1,
        },
        CliError::Io(_) => 1,
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args, cli.seed),
        Command::SearchM(args) => cmd_search_m(args),
        Command::Omega(args) => cmd_omega(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Dump(args) => cmd_dump(args),
    }
}

fn cmd_verify(args: VerifyArgs, seed: u64) -> Result<u8, CliError> {
    let spec = args.spec.parse_spec().map_err(CliError::Usage)?;
    let spec = spec.validated()?;
    eprintln!("verifying {spec}");

    let report = match &args.witness_file {
        None => {
            if !matches!(spec, Construction::C3 { .. }) {
                advisory_precheck(&spec, seed)?;
            }
            verify_construction(&spec)?
        }
        Some(path) => verify_external_witness(&spec, path)?,
    };

    emit(&args.out, &report.render())?;
    eprintln!("done: {}", spec);
    Ok(if report.border_rank_upper_confirmed { 0 } else { 1 })
}

/// Cheap seeded evaluation of the family's rank before the exact run.
fn advisory_precheck(spec: &Construction, seed: u64) -> Result<(), CliError> {
    let (ambient, family) = witness_family(spec)?;
    let dim = ambient.iter().product();
    let vectors = family
        .iter()
        .map(|z| expand_rank_one(z, &ambient))
        .collect::<Result<Vec<_>, _>>()?;
    let span = SpanFamily::new(dim, vectors)?;
    let estimate = generic_rank_estimate(&span, seed);
    eprintln!(
        "advisory: rank estimate {}/{} at seed {}",
        estimate,
        span.size(),
        seed
    );
    Ok(())
}

/// Runs the span-limit check on a user-supplied witness family.
fn verify_external_witness(
    spec: &Construction,
    path: &PathBuf,
) -> Result<borderrank::constructions::VerificationReport, CliError> {
    if matches!(spec, Construction::C3 { .. }) {
        return Err(CliError::Usage(
            "witness files apply to the span-limit constructions only".into(),
        ));
    }
    let text = fs::read_to_string(path)?;
    let (ambient, _, family) = parse_witness(&text)?;
    let (t1, t2) = build_summands(spec)?;
    let target = t1.direct_sum(&t2)?;
    let mode = target.order() - 1;
    if ambient != target.shape().without(mode) {
        return Err(CliError::Lib(Error::InvalidParameter(format!(
            "witness ambient {ambient:?} does not match construction ambient {:?}",
            target.shape().without(mode)
        ))));
    }
    let witness = verify_span_limit_witness(&target, &family, mode)?;
    let trivial_report = verify_construction(spec)?;
    let confirmed = witness.generic_rank_ok && witness.contained;
    Ok(borderrank::constructions::VerificationReport {
        construction: spec.label(),
        witness_size: witness.family_size,
        lower_bound: trivial_report.lower_bound,
        trivial_additive_bound: trivial_report.trivial_additive_bound,
        border_rank_upper_confirmed: confirmed,
        strict_subadditivity: confirmed
            && witness.family_size < trivial_report.trivial_additive_bound,
    })
}

fn render_system(sys: &IndependenceSystem) -> String {
    let fmt_triple = |t: &[usize; 3]| format!("({},{},{})", t[0], t[1], t[2]);
    let fmt_set = |set: &[[usize; 3]]| {
        set.iter().map(|t| fmt_triple(t)).collect::<Vec<_>>().join(" ")
    };
    let mut out = format!("J = {}\n", fmt_set(sys.j_set()));
    for i in 0..3 {
        out.push_str(&format!("K{} = {}\n", i + 1, fmt_set(sys.k_set(i))));
    }
    for i in 0..3 {
        let pairs: Vec<String> = sys
            .map(i)
            .iter()
            .map(|(j, k)| format!("{}->{}", fmt_triple(j), fmt_triple(k)))
            .collect();
        out.push_str(&format!("s{} = {}\n", i + 1, pairs.join(" ")));
    }
    out
}

fn cmd_search_m(args: SearchArgs) -> Result<u8, CliError> {
    let exists = brute_force_m(args.n1, args.n2, args.n3, args.target)?;
    let mut out = format!(
        "grid = {} {} {}\ntarget = {}\nexists = {}\n",
        args.n1, args.n2, args.n3, args.target, exists
    );
    if [args.n1, args.n2, args.n3].iter().all(|n| n % 2 == 0) {
        let sys = independence_system_even(args.n1, args.n2, args.n3)?;
        out.push_str(&format!("lemma_size = {}\n", sys.size()));
        out.push_str(&render_system(&sys));
    }
    emit(&args.out, &out)?;
    Ok(0)
}

fn cmd_omega(args: OmegaArgs) -> Result<u8, CliError> {
    if args.schonhage.len() != 2 {
        return Err(CliError::Usage("--schonhage expects two parameters".into()));
    }
    let (p_star, omega_star) = schonhage_omega(args.schonhage[0], args.schonhage[1])?;
    let out = format!(
        "p_star = {}\nomega_star = {}\n",
        format_significant(p_star),
        format_significant(omega_star)
    );
    emit(&args.out, &out)?;
    Ok(0)
}

fn cmd_grid(args: GridArgs) -> Result<u8, CliError> {
    let family = GridFamily::parse(&args.family)?;
    let spec = if args.figure_defaults {
        GridSpec::figure_defaults(family)
    } else {
        let parse = |slot: &Option<String>, name: &str| -> Result<RangeSpec, CliError> {
            let text = slot
                .as_deref()
                .ok_or_else(|| CliError::Usage(format!("missing --{name} range")))?;
            Ok(RangeSpec::parse(text)?)
        };
        let ranges = match family {
            GridFamily::ExtMamu => vec![parse(&args.n3, "n3")?, parse(&args.n4, "n4")?],
            GridFamily::MultiEmamuFixedD => vec![
                parse(&args.d, "d")?,
                parse(&args.n, "n")?,
                parse(&args.p, "p")?,
            ],
            GridFamily::MultiEmamuPOfD => vec![parse(&args.n, "n")?, parse(&args.d, "d")?],
            GridFamily::Dome => vec![parse(&args.n, "n")?, parse(&args.p, "p")?],
        };
        GridSpec::new(family, ranges)?
    };
    eprintln!("evaluating {} grid", family.name());
    let points = generate_grid(&spec)?;
    let content = match args.format.as_str() {
        "csv" => to_csv(family, &points),
        "ppm" => to_ppm(&spec, &points)?,
        other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn parse_sizes(text: &str, expect: usize) -> Result<Vec<usize>, CliError> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad size {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != expect {
        return Err(CliError::Usage(format!(
            "expected {expect} sizes, got {text:?}"
        )));
    }
    Ok(parts)
}

fn cmd_dump(args: DumpArgs) -> Result<u8, CliError> {
    let content = if let Some(text) = &args.unit {
        let s = parse_sizes(text, 2)?;
        if s[0] < 1 || s[1] < 1 {
            return Err(CliError::Usage("unit tensor needs k, r >= 1".into()));
        }
        unit_tensor(s[0], s[1]).dump()
    } else if let Some(text) = &args.mamu {
        let s = parse_sizes(text, 3)?;
        if s.iter().any(|&x| x < 1) {
            return Err(CliError::Usage("mamu needs sizes >= 1".into()));
        }
        mamu(s[0], s[1], s[2]).dump()
    } else if let Some(text) = &args.triangle {
        let s = parse_sizes(text, 3)?;
        let t: SparseTensor<_> = graph_tensor(&triangle(s[0], s[1], s[2]))?;
        t.dump()
    } else {
        let spec = args.spec.parse_spec().map_err(CliError::Usage)?;
        let spec = spec.validated()?;
        match args.format.as_str() {
            "text" => {
                let (t1, t2) = build_summands(&spec)?;
                t1.direct_sum(&t2)?.dump()
            }
            "witness" => {
                let (ambient, family) = witness_family(&spec)?;
                let mode = ambient.len(); // flattening mode: the dropped last factor
                write_witness(&ambient, mode, &family)
            }
            other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
        }
    };
    emit(&args.out, &content)?;
    Ok(0)
}
