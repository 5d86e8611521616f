//! `bhd`: build Sidon sets, turn them into weighted projective 2-designs,
//! certify the designs, and tabulate design-size bounds.
//!
//! Exit codes: 0 success or certified, 1 property violated, 2 invalid
//! input, 3 resource cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sidon_designs::bh_design::{
    self, default_direct_tol, default_potential_tol, frame_potential_gram, verify_direct_with_cap, DesignError,
    FramePotentialReport, Reduction, WeightedDesign, DEFAULT_DENSE_CAP,
};
use sidon_designs::finite_field::{FieldError, DEFAULT_FIELD_CAP};
use sidon_designs::sidon::{self, m_exact_with_cap, m_known, Family, SidonError, SidonSet, DEFAULT_EXACT_CAP};
use sidon_designs::zauner_bounds::{
    self, asymptotic_check, SicDimensionData, TableFormat, DEFAULT_K_MAX, DEFAULT_TABLE_DMAX, SIC_DATA_ENV,
};

#[derive(Parser)]
#[command(name = "bhd", disable_version_flag = true, about = "Sidon sets, Bodmann-Haas designs and design-size bounds")]
struct Cli {
    /// Print the version; with --verbose also every default cap and tolerance.
    #[arg(short = 'V', long, global = true)]
    version: bool,
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Construct and check Sidon sets.
    #[command(subcommand)]
    Sidon(SidonCmd),
    /// Build and certify Bodmann-Haas designs.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Upper bounds on the smallest weighted 2-design.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Subcommand)]
enum SidonCmd {
    /// Build a family member and write it in the Sidon-set text format.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: u64,
        /// Drop the k largest elements.
        #[arg(long, default_value_t = 0)]
        remove: u64,
        /// For bose: the nonzero trace-zero level set instead of trace one.
        #[arg(long)]
        literal_paper: bool,
        #[arg(long, default_value_t = DEFAULT_FIELD_CAP)]
        field_cap: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the Sidon property of a set file.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Potential,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    Deterministic,
    Fast,
}

#[derive(Subcommand)]
enum DesignCmd {
    /// Apply the Bodmann-Haas construction to a Sidon-set file.
    Build {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Certify a design file against the symmetric projector.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    /// Tolerance for both methods (default: 1e-9 d direct, 1e-8 d^2 potential).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,
    #[arg(long, value_enum, default_value_t = ReductionArg::Deterministic)]
    reduction: ReductionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Comparison table for 2 <= d <= dmax.
    Table {
        #[arg(long, default_value_t = DEFAULT_TABLE_DMAX)]
        dmax: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Md)]
        format: FormatArg,
        /// Known-SIC dimension file (default: $BHD_SIC_DATA, else bundled).
        #[arg(long)]
        sic_data: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smallest known group holding a Sidon set of size d.
    Mdim {
        #[arg(long)]
        d: u64,
        /// Exhaustive search over all abelian groups instead.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        exact_cap: u64,
    },
    /// Growth of the Sidon bound above d^2.
    Asymptotic {
        #[arg(long, default_value_t = 2000)]
        dmax: u64,
    },
}

/// An error with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        Failure {
            code: exit_code_for(&err),
            err,
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<DesignError>() {
            if matches!(e, DesignError::DimensionTooLarge { .. }) {
                return 3;
            }
        }
        let field = cause
            .downcast_ref::<SidonError>()
            .and_then(|e| match e {
                SidonError::Field(f) => Some(f),
                _ => None,
            })
            .or_else(|| cause.downcast_ref::<FieldError>());
        if let Some(FieldError::FieldTooLarge { .. }) = field {
            return 3;
        }
        if let Some(SidonError::DTooLarge { .. }) = cause.downcast_ref::<SidonError>() {
            return 3;
        }
    }
    2
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.version {
        print_version(cli.verbose);
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    let result = match command {
        Command::Sidon(c) => run_sidon(c),
        Command::Design(c) => run_design(c),
        Command::Bounds(c) => run_bounds(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn print_version(verbose: bool) {
    println!("bhd {}", env!("CARGO_PKG_VERSION"));
    if verbose {
        println!("field cap: {DEFAULT_FIELD_CAP}");
        println!("dense cap: {DEFAULT_DENSE_CAP}");
        println!("direct tolerance: 1e-9 * d");
        println!("potential tolerance: 1e-8 * d^2");
        println!("pattern samples: {}", bh_design::DEFAULT_PATTERN_SAMPLES);
        println!("pattern seed: {:#x}", bh_design::DEFAULT_PATTERN_SEED);
        println!("exact m(d) cap: {DEFAULT_EXACT_CAP}");
        println!("bound (b) k max: {DEFAULT_K_MAX}");
        println!("table d max: {DEFAULT_TABLE_DMAX} (limit {})", zauner_bounds::MAX_TABLE_DMAX);
        println!("sic data env: {SIC_DATA_ENV}");
        println!("sic data sha256 (bundled): {}", SicDimensionData::bundled().sha256());
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run_sidon(cmd: SidonCmd) -> CmdResult {
    match cmd {
        SidonCmd::Gen {
            family,
            q,
            remove,
            literal_paper,
            field_cap,
            output,
        } => {
            let family: Family = family.parse().map_err(anyhow::Error::msg)?;
            let set = match family {
                Family::Bose if literal_paper => sidon::bose_trace_zero(q)?,
                _ => sidon::build_with_cap(family, q, field_cap)?,
            }
            .remove_points(remove)?;
            let (g, s) = set.parameters();
            match output {
                Some(path) => {
                    write(&path, &set.to_text())?;
                    println!("({g}, {s})");
                }
                None => {
                    print!("{}", set.to_text());
                    eprintln!("({g}, {s})");
                }
            }
            Ok(0)
        }
        SidonCmd::Verify { input } => {
            let set = SidonSet::from_text(&read(&input)?)?;
            match set.first_violation() {
                None => {
                    println!("SIDON");
                    Ok(0)
                }
                Some([a, b, c, d]) => {
                    println!("NOT SIDON: {a} + {b} = {c} + {d}");
                    Ok(1)
                }
            }
        }
    }
}

fn run_design(cmd: DesignCmd) -> CmdResult {
    match cmd {
        DesignCmd::Build { input, output } => {
            let set = SidonSet::from_text(&read(&input)?)?;
            let design = bh_design::bodmann_haas(&set)?;
            write(&output, &design.to_text())?;
            println!("dim {} with {} vectors", design.dim(), design.len());
            Ok(0)
        }
        DesignCmd::Verify(args) => verify_design(args),
    }
}

fn verify_design(args: VerifyArgs) -> CmdResult {
    let design = WeightedDesign::from_text(&read(&args.input)?)?;
    let d = design.dim();
    let mut certified = true;
    if matches!(args.method, Method::Direct | Method::Both) {
        let residual = verify_direct_with_cap(&design, args.dense_cap)?;
        let tol = args.tol.unwrap_or_else(|| default_direct_tol(d));
        let ok = residual <= tol;
        println!("direct: residual {residual:.6e} (tol {tol:.1e}) {}", verdict(ok));
        certified &= ok;
    }
    if matches!(args.method, Method::Potential | Method::Both) {
        let reduction = match args.reduction {
            ReductionArg::Deterministic => Reduction::Deterministic,
            ReductionArg::Fast => Reduction::Fast,
        };
        let tol = args.tol.unwrap_or_else(|| default_potential_tol(d));
        let (t, p) = frame_potential_gram(&design, reduction);
        let target = bh_design::symmetric_rank(d) as f64;
        let ok = (t - target).abs() <= tol && (p - target).abs() <= tol;
        let rep = FramePotentialReport {
            trace_m: t,
            potential: p,
            target,
            tol,
            certified: ok,
        };
        println!(
            "potential: trace {:.12} potential {:.12} target {} (tol {tol:.1e}) {}",
            rep.trace_m,
            rep.potential,
            rep.target,
            verdict(ok)
        );
        certified &= ok;
    }
    Ok(if certified { 0 } else { 1 })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "CERTIFIED"
    } else {
        "REJECTED"
    }
}

fn run_bounds(cmd: BoundsCmd) -> CmdResult {
    match cmd {
        BoundsCmd::Table {
            dmax,
            format,
            sic_data,
            kmax,
            output,
        } => {
            let data = match sic_data {
                Some(path) => SicDimensionData::load(&path)?,
                None => SicDimensionData::from_env()?,
            };
            let rows = zauner_bounds::table(dmax, &data, kmax)?;
            let format = match format {
                FormatArg::Csv => TableFormat::Csv,
                FormatArg::Md => TableFormat::Markdown,
            };
            let text = zauner_bounds::render(&rows, &data, format)?;
            match output {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        BoundsCmd::Mdim { d, exact, exact_cap } => {
            if d == 0 {
                return Err(anyhow::anyhow!("d must be at least 1").into());
            }
            if exact {
                println!("{} (exact)", m_exact_with_cap(d, exact_cap)?);
            } else {
                let m = m_known(d);
                println!("{} via {}", m.order, m.label());
            }
            Ok(0)
        }
        BoundsCmd::Asymptotic { dmax } => {
            let rep = asymptotic_check(dmax);
            println!("d_max: {}", rep.d_max);
            println!(
                "max (m_known(d) + d - d^2) / d^1.525: {:.6} at d = {}",
                rep.max_ratio, rep.argmax
            );
            println!("m_known(d) <= p(d)^2 violations: {:?}", rep.prime_square_violations);
            println!("m_known(d) + d >= d^2 + 1 violations: {:?}", rep.floor_violations);
            let ok = rep.prime_square_violations.is_empty() && rep.floor_violations.is_empty();
            Ok(if ok { 0 } else { 1 })
        }
    }
}
