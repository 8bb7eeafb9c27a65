//! Command-line surface for the constructions, verifiers, and sequence
//! analysis. Reports go to standard output; machine-readable artefacts
//! only to files, written atomically.
//!
//! Exit codes: 0 all requested checks pass, 1 a verification failed,
//! 2 usage or file-format error, 3 size or time budget exceeded.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oddgirth::builder::{self, BuildError, RrcColouring};
use oddgirth::certify::{self, CertifyError};
use oddgirth::colouring::{self, Colouring, ColouringError};
use oddgirth::girth::{self, Budget, GirthError};
use oddgirth::product::{self, ProductError, WitnessOptions};
use oddgirth::schedule::{self, ScheduleError};
use oddgirth::FormatError;

const OUT_DIR_ENV: &str = "OGC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "oddgirth",
    version,
    about = "Colourings of complete graphs with no short monochromatic odd cycles: \
             constructions, certificates, and Ramsey lower-bound witnesses"
)]
struct Cli {
    /// Directory for output files (default: $OGC_OUT_DIR, else the working directory)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Wall-clock budget in seconds for exhaustive searches
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a colouring and write it (and its certificate) to files
    #[command(subcommand)]
    Construct(Construct),
    /// Combine two colouring files into a product colouring
    Product(ProductArgs),
    /// Check a colouring or certificate file
    #[command(subcommand)]
    Verify(Verify),
    /// Signature sequence and growth-constant analysis
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, ValueEnum)]
enum VerifyLevel {
    /// Certificate verification only
    CertOnly,
    /// Certificates plus exact odd girth per colour
    CertGirth,
    /// Certificates, odd girth, and exhaustive fixed-length cycle search
    ExhaustiveCr,
}

#[derive(Args)]
struct ConstructCommon {
    /// File stem for outputs (defaults to a name derived from the command)
    #[arg(long)]
    out: Option<String>,
    /// How much verification to run on the result
    #[arg(long, value_enum, default_value_t = VerifyLevel::CertGirth)]
    verify_level: VerifyLevel,
    /// Largest vertex count for which the odd-girth stage runs; larger
    /// builds print an explicit skip notice
    #[arg(long, default_value_t = 257)]
    girth_cap: usize,
}

#[derive(Subcommand)]
enum Construct {
    /// The 2-colouring of K5 whose colour classes are two 5-cycles
    Base {
        #[command(flatten)]
        common: ConstructCommon,
    },
    /// Iterated doubling: a (j+2)-colouring of K(2^(j+2)+1) after j steps
    Theorem1 {
        /// Number of doubling steps
        #[arg(long)]
        steps: Option<u32>,
        /// Iterate until the certified odd girth reaches this value
        #[arg(long, conflicts_with = "steps")]
        girth: Option<usize>,
        /// Print the signature without materialising the colouring
        #[arg(long)]
        signature_only: bool,
        #[command(flatten)]
        common: ConstructCommon,
    },
    /// The doubling construction: a C_r-free k-colouring of K((r-1)*2^(k-1))
    ErdosGraham {
        /// Odd cycle length to avoid
        #[arg(long = "r")]
        r: usize,
        /// Colour count
        #[arg(long)]
        colours: u32,
        #[command(flatten)]
        common: ConstructCommon,
    },
    /// The k-colouring of K(2^k) with every colour class bipartite
    Bipartite {
        /// Colour count
        #[arg(long)]
        colours: u32,
        #[command(flatten)]
        common: ConstructCommon,
    },
    /// Ramsey lower-bound witness: a k-colouring with no monochromatic C_r
    Witness {
        /// Odd cycle length to avoid
        #[arg(long = "r")]
        r: usize,
        /// Colour count
        #[arg(long)]
        colours: u32,
        /// Build the colouring itself (within the size cap), not just the report
        #[arg(long)]
        materialise: bool,
        #[command(flatten)]
        common: ConstructCommon,
    },
}

#[derive(Args)]
struct ProductArgs {
    /// OGC file for the first factor (its colours stay 1..j)
    #[arg(long)]
    a: PathBuf,
    /// OGC file for the second factor (its colours shift past the first's)
    #[arg(long)]
    b: PathBuf,
    /// Which member of the product family to emit
    #[arg(long, value_enum, default_value_t = Member::Star)]
    member: Member,
    /// Seed for the random member
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// File stem for the output
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Member {
    /// Every mixed edge takes the second factor's colour
    Star,
    /// Mixed edges choose a side by seeded coin
    Random,
}

#[derive(Subcommand)]
enum Verify {
    /// Exact odd girth per colour of an OGC file
    Girth {
        file: PathBuf,
        /// Also search every colour exhaustively for a cycle of this exact length
        #[arg(long)]
        exact_cr: Option<usize>,
    },
    /// Verify a certificate file against a colouring file
    Cert { file: PathBuf, certfile: PathBuf },
}

#[derive(Subcommand)]
enum Analyze {
    /// The signature sequence, its growth indices, and the growth constant
    Sequence {
        /// Print the sorted signature with this many entries
        #[arg(long)]
        j: Option<u64>,
        /// Check the sequence minimum at index p(t) against 2^t + 1
        #[arg(long)]
        t: Option<u32>,
        /// Print the growth constant to this many decimal places
        #[arg(long)]
        constant: Option<u32>,
    },
}

/// A run failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ColouringError> for Failure {
    fn from(e: ColouringError) -> Self {
        match e {
            ColouringError::TooManyVertices { .. } => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GirthError> for Failure {
    fn from(e: GirthError) -> Self {
        match e {
            GirthError::BudgetExceeded | GirthError::SearchCapExceeded { .. } => {
                Failure::budget(e.to_string())
            }
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ScheduleError> for Failure {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::WalkTooLong { .. } => Failure::budget(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::SizeCap { .. } => Failure::budget(e.to_string()),
            BuildError::CertificateRejected { .. } => Failure::check(e.to_string()),
            BuildError::Colouring(inner) => inner.into(),
            BuildError::Certify(inner) => inner.into(),
            BuildError::Schedule(inner) => inner.into(),
            BuildError::RootNotZero { .. } | BuildError::BadTarget { .. } => {
                Failure::usage(e.to_string())
            }
        }
    }
}

impl From<ProductError> for Failure {
    fn from(e: ProductError) -> Self {
        match e {
            ProductError::SizeCap { .. } | ProductError::Overflow => {
                Failure::budget(e.to_string())
            }
            ProductError::StructuralContradiction { .. } => Failure::check(e.to_string()),
            ProductError::Colouring(inner) => inner.into(),
            ProductError::Build(inner) => inner.into(),
            ProductError::Girth(inner) => inner.into(),
            ProductError::Schedule(inner) => inner.into(),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let budget = cli
        .budget
        .map_or_else(Budget::unlimited, Budget::from_secs);

    match cli.command {
        Command::Construct(c) => run_construct(c, &out_dir, &budget),
        Command::Product(p) => run_product(p, &out_dir),
        Command::Verify(v) => run_verify(v, &budget),
        Command::Analyze(a) => run_analyze(a),
    }
}

fn run_construct(cmd: Construct, dir: &Path, budget: &Budget) -> Result<(), Failure> {
    match cmd {
        Construct::Base { common } => {
            let build = builder::base_k5();
            emit_certified(&build, "base", dir, &common)
        }
        Construct::Theorem1 {
            steps,
            girth,
            signature_only,
            common,
        } => {
            let (steps, stem) = match (steps, girth) {
                (Some(s), None) => (s, format!("theorem1_s{s}")),
                (None, Some(g)) => (builder::steps_to_girth(g)?, format!("theorem1_g{g}")),
                _ => {
                    return Err(Failure::usage(
                        "construct theorem1 needs exactly one of --steps or --girth",
                    ))
                }
            };
            if signature_only {
                let colours = steps as u64 + 2;
                let signature = schedule::signature_at(colours)?;
                println!("steps {steps}");
                println!("colours {colours}");
                println!("vertices 2^{}+1", steps + 2);
                println!("signature (sorted) {signature}");
                return Ok(());
            }
            let build = builder::build_iterated(steps)?;
            emit_certified(&build, &stem, dir, &common)
        }
        Construct::ErdosGraham { r, colours, common } => {
            let c = product::erdos_graham_colouring(r, colours)?;
            let stem = common
                .out
                .clone()
                .unwrap_or_else(|| format!("erdos_graham_r{r}_k{colours}"));
            let path = write_atomic(dir, &format!("{stem}.ogc"), &colouring::write_colouring(&c))?;
            println!("wrote {} (n={} k={})", path.display(), c.n(), c.k());
            if common.verify_level >= VerifyLevel::CertGirth {
                girth_stage(&c, common.girth_cap, None)?;
            }
            if common.verify_level == VerifyLevel::ExhaustiveCr {
                exhaustive_stage(&c, r, budget)?;
            }
            Ok(())
        }
        Construct::Bipartite { colours, common } => {
            let c = product::bipartite_colouring(colours)?;
            let stem = common
                .out
                .clone()
                .unwrap_or_else(|| format!("bipartite_k{colours}"));
            let path = write_atomic(dir, &format!("{stem}.ogc"), &colouring::write_colouring(&c))?;
            println!("wrote {} (n={} k={})", path.display(), c.n(), c.k());
            if common.verify_level >= VerifyLevel::CertGirth {
                let report = girth_stage(&c, common.girth_cap, None)?;
                if let Some(report) = report {
                    if report.overall.is_some() {
                        return Err(Failure::check(
                            "a colour class of the bipartite colouring has an odd cycle",
                        ));
                    }
                    println!("bipartite check PASS (every colour class odd-girth inf)");
                }
            }
            Ok(())
        }
        Construct::Witness {
            r,
            colours,
            materialise,
            common,
        } => {
            if common.verify_level == VerifyLevel::ExhaustiveCr && !materialise {
                return Err(Failure::usage(
                    "exhaustive verification needs --materialise",
                ));
            }
            let opts = WitnessOptions {
                materialise,
                exhaustive: common.verify_level == VerifyLevel::ExhaustiveCr,
                budget: *budget,
            };
            let witness = product::ramsey_witness(r, colours, &opts)?;
            print!("{}", witness.report.render());
            if let Some(c) = &witness.colouring {
                let stem = common
                    .out
                    .clone()
                    .unwrap_or_else(|| format!("witness_r{r}_k{colours}"));
                let path =
                    write_atomic(dir, &format!("{stem}.ogc"), &colouring::write_colouring(c))?;
                println!("wrote {} (n={} k={})", path.display(), c.n(), c.k());
                if common.verify_level >= VerifyLevel::CertGirth {
                    girth_stage(c, common.girth_cap, None)?;
                }
            } else if materialise {
                return Err(Failure::budget(format!(
                    "witness needs {} vertices, beyond the cap of {}; report printed above",
                    witness.report.n,
                    colouring::MAX_VERTICES
                )));
            }
            Ok(())
        }
    }
}

/// Writes the OGC and certificate files for a certified build, re-verifies
/// the certificate, and runs the requested girth checks.
fn emit_certified(
    build: &RrcColouring,
    default_stem: &str,
    dir: &Path,
    common: &ConstructCommon,
) -> Result<(), Failure> {
    let stem = common.out.clone().unwrap_or_else(|| default_stem.to_string());
    let c = build.colouring();
    let ogc = write_atomic(dir, &format!("{stem}.ogc"), &colouring::write_colouring(c))?;
    println!("wrote {} (n={} k={})", ogc.display(), c.n(), c.k());
    let cert_path = write_atomic(
        dir,
        &format!("{stem}.ogcert"),
        &certify::write_certificate(build.certificate()),
    )?;
    println!(
        "wrote {} (root {}, signature {:?})",
        cert_path.display(),
        build.root(),
        build.signature()
    );

    let report = certify::verify_rrc(c, build.certificate())?;
    print!("{}", report.render());
    if !report.passed() {
        return Err(Failure::check("certificate verification failed"));
    }
    if common.verify_level >= VerifyLevel::CertGirth {
        girth_stage(c, common.girth_cap, Some(&build.signature()))?;
    }
    if common.verify_level == VerifyLevel::ExhaustiveCr {
        println!(
            "exhaustive stage: odd girths above are exact; no further search needed"
        );
    }
    Ok(())
}

/// Prints the exact odd girth report; when certified bounds are supplied,
/// confirms each colour meets its bound. Skips (with a notice) above the cap.
fn girth_stage(
    c: &Colouring,
    cap: usize,
    bounds: Option<&[usize]>,
) -> Result<Option<girth::GirthReport>, Failure> {
    if c.n() > cap {
        println!(
            "odd girth check skipped: n={} above --girth-cap {cap}",
            c.n()
        );
        return Ok(None);
    }
    let report = girth::colouring_odd_girth(c);
    print!("{}", report.render());
    if let Some(bounds) = bounds {
        for (&(colour, girth), &bound) in report.per_colour.iter().zip(bounds) {
            if girth.is_some_and(|g| g < bound) {
                return Err(Failure::check(format!(
                    "colour {colour} has odd girth {} below its certified bound {bound}",
                    girth.unwrap()
                )));
            }
        }
        println!("odd girth check PASS (every colour meets its certified bound)");
    }
    Ok(Some(report))
}

/// Exhaustive monochromatic C_r search over all colours; exit 1 on a hit.
fn exhaustive_stage(c: &Colouring, r: usize, budget: &Budget) -> Result<(), Failure> {
    match girth::is_cr_free(c, r, budget)? {
        girth::CrCheck::Free => {
            println!("exhaustive C_{r} check PASS (no monochromatic C_{r})");
            Ok(())
        }
        girth::CrCheck::Witness { colour, cycle } => {
            println!("colour {colour} contains C_{r}");
            println!("{}", girth::render_witness(&cycle));
            Err(Failure::check(format!(
                "monochromatic C_{r} found in colour {colour}"
            )))
        }
    }
}

fn run_product(args: ProductArgs, dir: &Path) -> Result<(), Failure> {
    let a = read_colouring_file(&args.a)?;
    let b = read_colouring_file(&args.b)?;
    let result = match args.member {
        Member::Star => product::product_star(&a, &b)?,
        Member::Random => product::random_product_member(&a, &b, args.seed)?,
    };
    debug_assert!(product::is_product_member(&result, &a, &b).unwrap_or(false));
    let stem = args.out.unwrap_or_else(|| "product".to_string());
    let path = write_atomic(
        dir,
        &format!("{stem}.ogc"),
        &colouring::write_colouring(&result),
    )?;
    println!(
        "wrote {} (n={} k={}, second factor colours shifted by {})",
        path.display(),
        result.n(),
        result.k(),
        a.k()
    );
    Ok(())
}

fn run_verify(cmd: Verify, budget: &Budget) -> Result<(), Failure> {
    match cmd {
        Verify::Girth { file, exact_cr } => {
            let c = read_colouring_file(&file)?;
            let report = girth::colouring_odd_girth(&c);
            print!("{}", report.render());
            if let Some(r) = exact_cr {
                let mut hit = false;
                if r > c.n() {
                    println!("cycle length {r} exceeds the vertex count; trivially absent");
                } else {
                    for i in 1..=c.k() as u32 {
                        let class = c.colour_class(i)?;
                        match girth::contains_cycle_of_length(&class, r, budget)? {
                            Some(cycle) => {
                                println!("colour {i} c{r} PRESENT");
                                println!("{}", girth::render_witness(&cycle));
                                hit = true;
                            }
                            None => println!("colour {i} c{r} absent"),
                        }
                    }
                }
                if hit {
                    return Err(Failure::check(format!("monochromatic C_{r} present")));
                }
                println!("exhaustive C_{r} check PASS");
            }
            Ok(())
        }
        Verify::Cert { file, certfile } => {
            let c = read_colouring_file(&file)?;
            let text = std::fs::read_to_string(&certfile)?;
            let cert = certify::read_certificate(&text)?;
            let report = certify::verify_rrc(&c, &cert)?;
            print!("{}", report.render());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::check("certificate verification failed"))
            }
        }
    }
}

fn run_analyze(cmd: Analyze) -> Result<(), Failure> {
    let Analyze::Sequence { j, t, constant } = cmd;
    let given = [j.is_some(), t.is_some(), constant.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given != 1 {
        return Err(Failure::usage(
            "analyze sequence needs exactly one of --j, --t, --constant",
        ));
    }
    if let Some(j) = j {
        let sig = schedule::signature_at(j)?;
        println!("r_{j} = {sig}");
        println!("entries {} min {}", sig.len(), sig.min());
        return Ok(());
    }
    if let Some(t) = t {
        let check = schedule::check_min_growth(t)?;
        let threshold = schedule::threshold_for_girth(t)?;
        let p = check.index;
        println!("t {t}");
        println!("p(t) {p}");
        println!("min(r_p) {} bound {}", check.min, check.bound);
        println!(
            "min growth {}",
            if check.pass { "PASS" } else { "FAIL" }
        );
        let below = (p as u128) <= threshold;
        println!("colour threshold {threshold}");
        println!(
            "p(t) <= threshold {}",
            if below { "PASS" } else { "FAIL" }
        );
        if !(check.pass && below) {
            return Err(Failure::check("sequence growth check failed"));
        }
        return Ok(());
    }
    let precision = constant.expect("validated above");
    let gc = schedule::growth_constant(precision)?;
    println!("growth constant {gc}");
    Ok(())
}

fn read_colouring_file(path: &Path) -> Result<Colouring, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(colouring::read_colouring(&text)?)
}

/// Write-then-rename so no partial file is ever visible.
fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    let path = dir.join(name);
    tmp.persist(&path)
        .map_err(|e| Failure::usage(format!("{}: {}", path.display(), e.error)))?;
    Ok(path)
}
