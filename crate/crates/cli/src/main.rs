//! Command-line front end: construct varieties and families, build pivoted
//! counterexamples, compute spectra, and verify hyperplane families.
//!
//! Exit codes: 0 when the requested checks pass, 1 on a verification
//! failure, 2 on usage errors (bad parameters, malformed files, header
//! mismatches, exceeded enumeration ceilings).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgherm::error::{Error, Result};
use pgherm::files;
use pgherm::galois::{factor_prime_power, Field};
use pgherm::hermitian::{
    nontangent_family, variety_points, ExpectedCounts, HermitianForm, IncidenceCache,
};
use pgherm::projective::{EnumerationLimits, ProjectiveSpace};
use pgherm::quasi::{
    containment_spectrum, default_pivot, family_meeting_in, pivoted_set, seeded_pivot, PivotChoice,
    PivotSpec,
};
use pgherm::sets::SpectrumReport;
use pgherm::verifier::{certify, classify_points, lemma_suite, Codim2Mode};

#[derive(Parser)]
#[command(name = "pgherm", version, about = "Hermitian varieties in PG(s, q²): construction, spectra, verification")]
struct Cli {
    /// Worker threads for the counting kernels (0 = all cores). Output is
    /// identical for every thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Ceiling on the number of points θ(s).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_points: u64,
    /// Ceiling on streamed codimension-2 subspaces.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    max_codim2: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every closed-form count for PG(s, q²) as exact integers.
    Counts(ParamsArgs),
    /// Write the point set of the Hermitian variety.
    Variety(SetArgs),
    /// Write Ω, the family of non-tangent hyperplanes.
    Omega(SetArgs),
    /// Build a pivoted set and optionally its hyperplane family Π.
    Pivot(PivotArgs),
    /// Intersection or containment spectrum, as CSV.
    Spectrum(SpectrumArgs),
    /// Verify a hyperplane family and emit a certificate.
    Verify(VerifyArgs),
    /// Run only point classification and the black-point lemma checks.
    Lemmas(LemmasArgs),
}

#[derive(Args)]
struct ParamsArgs {
    /// Projective dimension s.
    #[arg(long)]
    s: usize,
    /// Prime power q (the field is GF(q²)).
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// Gram matrix file (defaults to the identity form).
    #[arg(long)]
    form: Option<PathBuf>,
    /// Output file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PivotArgs {
    #[command(flatten)]
    params: ParamsArgs,
    #[arg(long)]
    form: Option<PathBuf>,
    /// How to pick the replacement section.
    #[arg(long, value_enum, default_value_t = SwapMode::Default)]
    swap: SwapMode,
    /// Seed for `--swap seeded`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file for the pivoted point set S.
    #[arg(short, long)]
    output: PathBuf,
    /// Also write Π, the family of hyperplanes meeting S in m₁ points.
    #[arg(long)]
    family_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SwapMode {
    Default,
    Seeded,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// Point-set file: compute |X ∩ W| over subspaces W.
    #[arg(long, conflicts_with = "family")]
    points: Option<PathBuf>,
    /// Family file: compute the codimension-2 containment spectrum.
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long, value_enum)]
    against: AgainstArg,
    /// Output CSV (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AgainstArg {
    Hyperplanes,
    Codim2,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamsArgs,
    /// The hyperplane family to verify.
    #[arg(long)]
    family: PathBuf,
    /// Check codimension-2 subspaces exhaustively (the default).
    #[arg(long, conflicts_with = "sample")]
    full: bool,
    /// Sample N pencils instead of streaming all of them.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference form to compare the black set against:
    /// `identity`, `none`, or a Gram matrix file.
    #[arg(long, default_value = "identity")]
    reference: String,
    /// Certificate output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LemmasArgs {
    #[command(flatten)]
    params: ParamsArgs,
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let limits = EnumerationLimits {
        max_points: cli.max_points,
        max_codim2: cli.max_codim2,
    };
    match cli.command {
        Command::Counts(args) => {
            let (_, counts) = params(&args)?;
            println!("{}", serde_json::to_string_pretty(&counts).expect("json"));
            Ok(Outcome::Pass)
        }
        Command::Variety(args) => {
            let space = build_space(&args.params, limits)?;
            let form = load_form(&space, args.form.as_deref())?;
            let set = variety_points(&space, &form)?;
            with_output(&args.output, |out| files::write_point_set(out, &space, &set))?;
            eprintln!("wrote {} points to {}", set.len(), args.output.display());
            Ok(Outcome::Pass)
        }
        Command::Omega(args) => {
            let space = build_space(&args.params, limits)?;
            let form = load_form(&space, args.form.as_deref())?;
            let family = nontangent_family(&space, &form)?;
            with_output(&args.output, |out| files::write_family(out, &space, &family))?;
            eprintln!(
                "wrote {} hyperplanes to {}",
                family.len(),
                args.output.display()
            );
            Ok(Outcome::Pass)
        }
        Command::Pivot(args) => run_pivot(args, limits),
        Command::Spectrum(args) => run_spectrum(args, limits),
        Command::Verify(args) => run_verify(args, limits),
        Command::Lemmas(args) => run_lemmas(args, limits),
    }
}

fn params(args: &ParamsArgs) -> Result<((u64, u32), ExpectedCounts)> {
    if args.s < 1 {
        return Err(Error::DimensionTooSmall {
            min: 1,
            got: args.s,
        });
    }
    let (p, e) = factor_prime_power(args.q)?;
    let counts = ExpectedCounts::new(args.s as u64, args.q)?;
    Ok(((p, e), counts))
}

fn build_space(args: &ParamsArgs, limits: EnumerationLimits) -> Result<ProjectiveSpace> {
    let ((p, e), _) = params(args)?;
    let field = Field::new(p, e)?;
    ProjectiveSpace::with_limits(field, args.s, limits)
}

fn load_form(space: &ProjectiveSpace, path: Option<&Path>) -> Result<HermitianForm> {
    match path {
        None => Ok(HermitianForm::standard(space)),
        Some(path) => files::read_gram(open(path)?, space),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn with_output<F: FnOnce(&mut BufWriter<File>) -> Result<()>>(path: &Path, f: F) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    f(&mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PivotReport {
    choice: PivotChoice,
    vertex: usize,
    line_rows: Vec<Vec<u64>>,
    base: Vec<usize>,
    replacement: Vec<usize>,
    set_size: usize,
    family_size: Option<usize>,
}

fn run_pivot(args: PivotArgs, limits: EnumerationLimits) -> Result<Outcome> {
    let space = build_space(&args.params, limits)?;
    let form = load_form(&space, args.form.as_deref())?;
    let spec: PivotSpec = match args.swap {
        SwapMode::Default => default_pivot(&space, &form)?,
        SwapMode::Seeded => seeded_pivot(&space, &form, args.seed)?,
    };
    let pivoted = pivoted_set(&space, &form, &spec)?;
    with_output(&args.output, |out| {
        files::write_point_set(out, &space, &pivoted)
    })?;
    let mut family_size = None;
    if let Some(family_path) = &args.family_out {
        let counts = ExpectedCounts::new(args.params.s as u64, args.params.q)?;
        let cache = IncidenceCache::build(&space);
        let family = family_meeting_in(&space, &cache, &pivoted, counts.m1)?;
        with_output(family_path, |out| files::write_family(out, &space, &family))?;
        family_size = Some(family.len());
    }
    let (r0, r1) = spec.line.rows();
    let report = PivotReport {
        choice: spec.choice,
        vertex: spec.vertex,
        line_rows: vec![
            r0.iter().map(|c| c.encoding()).collect(),
            r1.iter().map(|c| c.encoding()).collect(),
        ],
        base: spec.base.clone(),
        replacement: spec.replacement.clone(),
        set_size: pivoted.len(),
        family_size,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(Outcome::Pass)
}

fn run_spectrum(args: SpectrumArgs, limits: EnumerationLimits) -> Result<Outcome> {
    let space = build_space(&args.params, limits)?;
    let report: SpectrumReport = match (&args.points, &args.family, args.against) {
        (Some(points_path), None, against) => {
            let set = files::read_point_set(open(points_path)?, &space)?;
            let cache = IncidenceCache::build(&space);
            let against = match against {
                AgainstArg::Hyperplanes => pgherm::hermitian::Against::Hyperplanes,
                AgainstArg::Codim2 => pgherm::hermitian::Against::Codim2,
            };
            pgherm::hermitian::spectrum(&space, &cache, &set, against)?
        }
        (None, Some(family_path), AgainstArg::Codim2) => {
            let family = files::read_family(open(family_path)?, &space)?;
            containment_spectrum(&space, &family)?
        }
        (None, Some(_), AgainstArg::Hyperplanes) => {
            return Err(Error::Malformed {
                line: 0,
                reason: "a family spectrum is only defined against codim2".to_string(),
            });
        }
        _ => {
            return Err(Error::Malformed {
                line: 0,
                reason: "exactly one of --points or --family is required".to_string(),
            });
        }
    };
    match &args.output {
        Some(path) => with_output(path, |out| files::write_spectrum_csv(out, &report))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            files::write_spectrum_csv(&mut lock, &report)?;
        }
    }
    Ok(Outcome::Pass)
}

fn parse_mode(sample: Option<u64>, seed: u64) -> Codim2Mode {
    match sample {
        Some(n) => Codim2Mode::Sample { n, seed },
        None => Codim2Mode::Full,
    }
}

fn run_verify(args: VerifyArgs, limits: EnumerationLimits) -> Result<Outcome> {
    let space = build_space(&args.params, limits)?;
    let family = files::read_family(open(&args.family)?, &space)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let reference = match args.reference.as_str() {
        "identity" => Some(HermitianForm::standard(&space)),
        "none" => None,
        path => Some(files::read_gram(open(Path::new(path))?, &space)?),
    };
    let cache = IncidenceCache::build(&space);
    let mode = parse_mode(args.sample, args.seed);
    let certificate = certify(&space, &cache, &family, mode, reference.as_ref())?;
    let rendered = serde_json::to_string_pretty(&certificate).expect("json");
    match &args.output {
        Some(path) => {
            with_output(path, |out| {
                writeln!(out, "{rendered}")?;
                Ok(())
            })?;
            println!(
                "conclusion: {} (property I {}, property II {}, lemmas {}, identities {})",
                certificate.conclusion,
                verdict(certificate.property_i.pass),
                verdict(certificate.property_ii.pass),
                verdict(certificate.lemmas.passes()),
                verdict(certificate.proof_identities.pass),
            );
        }
        None => println!("{rendered}"),
    }
    Ok(if certificate.conclusion {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn run_lemmas(args: LemmasArgs, limits: EnumerationLimits) -> Result<Outcome> {
    let space = build_space(&args.params, limits)?;
    let family = files::read_family(open(&args.family)?, &space)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let counts = ExpectedCounts::new(args.params.s as u64, args.params.q)?;
    let cache = IncidenceCache::build(&space);
    let classification = classify_points(&space, &cache, &family, &counts)?;
    let report = lemma_suite(
        &space,
        &cache,
        &family,
        &classification,
        &counts,
        parse_mode(args.sample, args.seed),
    )?;
    #[derive(Serialize)]
    struct LemmasOut<'a> {
        property_i_pass: bool,
        black: usize,
        white: usize,
        violators: usize,
        lemmas: &'a pgherm::verifier::LemmaSuiteReport,
    }
    let out = LemmasOut {
        property_i_pass: classification.passes(),
        black: classification.black.len(),
        white: classification.white.len(),
        violators: classification.violators.len(),
        lemmas: &report,
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(if classification.passes() && report.passes() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
