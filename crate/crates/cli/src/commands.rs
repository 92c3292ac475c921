use std::fmt;
use std::fmt::Write as _;
use std::fs;

use schmidt_core::bounds::{
    bounds_grid, bounds_table, flanders_max_leq, max_dim_geq, mixed_state_report, random_comparison, render_bounds,
    westwick_range, BoundsTable,
};
use schmidt_core::construct::{
    antisymmetric_basis_3x3, construct_fixed_rank_subspace, construct_max_rank_leq_subspace,
    construct_min_rank_subspace, random_complex_subspace, AnyBasis, SubspaceBasis,
};
use schmidt_core::scalar::Rational;
use schmidt_core::verify::{
    gfp_exhaustive_min_rank, minimize_sigma_r, sample_verify_exact, structural_verify, RankClaim, SigmaOptions,
    Verdict, VerificationReport,
};
use schmidt_core::Error;
use serde::Serialize;

use crate::config::{path_string, RunConfig};
use crate::output::{emit, to_json, write_atomic};
use crate::{BoundsArgs, ConstructArgs, ConstructKind, Format, MixedArgs, Mode, RandomArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside an operation's domain; exit 2.
    Usage(String),
    /// Unreadable, unwritable or malformed files and numerical failures; exit 1.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Dimension(_) | Error::Domain(_) | Error::CapExceeded { .. } => CliError::Usage(e.to_string()),
            Error::Numeric(_) | Error::Internal(_) | Error::Format(_) => CliError::Runtime(e.to_string()),
        }
    }
}

fn required<T: Copy>(value: Option<T>, flag: &str, context: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {context}")))
}

fn require_value(value: Option<usize>, expected: usize, flag: &str, context: &str) -> Result<(), CliError> {
    match value {
        Some(v) if v != expected => Err(CliError::Usage(format!("{context} needs --{flag} {expected}, got {v}"))),
        _ => Ok(()),
    }
}

pub fn construct(args: &ConstructArgs) -> Result<u8, CliError> {
    let ctx = "this --kind";
    let (built, bound, r) = match args.kind {
        ConstructKind::MinRank | ConstructKind::Flanders => {
            let da = required(args.da, "da", ctx)?;
            let db = required(args.db, "db", ctx)?;
            let r = required(args.r, "r", ctx)?;
            if args.kind == ConstructKind::MinRank {
                (AnyBasis::Rational(construct_min_rank_subspace(da, db, r)?), max_dim_geq(da, db, r)?, r)
            } else {
                (AnyBasis::Rational(construct_max_rank_leq_subspace(da, db, r)?), flanders_max_leq(da, db, r)?, r)
            }
        }
        ConstructKind::Fixed => {
            let da = required(args.da, "da", ctx)?;
            let db = required(args.db, "db", ctx)?;
            require_value(args.r, da.min(db), "r", "--kind fixed")?;
            let basis = construct_fixed_rank_subspace(da, db)?;
            let r = basis.r;
            let w = westwick_range(da, db, r)?;
            (AnyBasis::Rational(basis), w.exact.unwrap_or(w.hi), r)
        }
        ConstructKind::Antisymmetric => {
            require_value(args.da, 3, "da", "--kind antisymmetric")?;
            require_value(args.db, 3, "db", "--kind antisymmetric")?;
            require_value(args.r, 2, "r", "--kind antisymmetric")?;
            let w = westwick_range(3, 3, 2)?;
            (AnyBasis::Rational(antisymmetric_basis_3x3()), w.exact.unwrap_or(w.hi), 2)
        }
        ConstructKind::Random => {
            let da = required(args.da, "da", ctx)?;
            let db = required(args.db, "db", ctx)?;
            let r = required(args.r, "r", ctx)?;
            let dim = required(args.dim, "dim", ctx)?;
            let bound = max_dim_geq(da, db, r)?;
            (AnyBasis::Complex(random_complex_subspace(da, db, dim, r, args.seed)?), bound, r)
        }
    };

    let (da, db, dim) = match &built {
        AnyBasis::Rational(b) => (b.da, b.db, b.dim()),
        AnyBasis::Complex(b) => (b.da, b.db, b.dim()),
    };
    let config = RunConfig {
        command: "construct",
        kind: Some(args.kind),
        da: Some(da),
        db: Some(db),
        r: Some(r),
        dim: (args.kind == ConstructKind::Random).then_some(dim),
        seed: Some(args.seed),
        output: Some(path_string(&args.out)),
        ..RunConfig::default()
    };
    let text = match &built {
        AnyBasis::Rational(b) => to_json(&config, b)?,
        AnyBasis::Complex(b) => to_json(&config, b)?,
    };
    write_atomic(&args.out, &text)?;
    println!("dim={dim} bound={bound}");
    Ok(0)
}

fn rational_only(basis: AnyBasis, mode: &str) -> Result<SubspaceBasis<Rational>, CliError> {
    match basis {
        AnyBasis::Rational(b) => Ok(b),
        AnyBasis::Complex(_) => Err(CliError::Usage(format!("--mode {mode} needs a rational basis"))),
    }
}

fn exit_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Consistent => 0,
        Verdict::Refuted => 3,
        Verdict::Inconclusive => 4,
    }
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn report_text(config: &RunConfig, report: &VerificationReport) -> String {
    let mut s = config.text_header();
    let _ = writeln!(s, "mode={}", snake(&report.mode));
    let _ = writeln!(s, "claim={} {}", snake(&report.claim.relation), report.claim.r);
    let _ = writeln!(s, "samples_or_points={}", report.samples_or_points);
    let _ = writeln!(s, "min_rank_observed={}", opt(report.min_rank_observed));
    let _ = writeln!(s, "max_rank_observed={}", opt(report.max_rank_observed));
    let _ = writeln!(s, "min_sigma_r={}", report.min_sigma_r.map_or_else(|| "-".to_string(), |x| format!("{x:e}")));
    let _ = writeln!(s, "witnesses={}", report.witnesses.len());
    let _ = writeln!(s, "verdict={}", snake(&report.verdict));
    s
}

pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", args.input.display())))?;
    let mut basis = AnyBasis::from_json(&text)?;
    let (da, db) = match &basis {
        AnyBasis::Rational(b) => (b.da, b.db),
        AnyBasis::Complex(b) => (b.da, b.db),
    };
    if let Some(r) = args.r {
        if r == 0 || r > da.min(db) {
            return Err(CliError::Usage(format!("r out of range: r={r} must satisfy 1 <= r <= {}", da.min(db))));
        }
        match &mut basis {
            AnyBasis::Rational(b) => b.r = r,
            AnyBasis::Complex(b) => b.r = r,
        }
    }
    let r = match &basis {
        AnyBasis::Rational(b) => b.r,
        AnyBasis::Complex(b) => b.r,
    };

    let mut config = RunConfig {
        command: "verify",
        mode: Some(args.mode),
        r: Some(r),
        input: Some(path_string(&args.input)),
        output: args.out.as_deref().map(path_string),
        format: Some(args.format),
        ..RunConfig::default()
    };
    let report = match args.mode {
        Mode::Sample => {
            let b = rational_only(basis, "sample")?;
            config.samples = Some(args.samples);
            config.seed = Some(args.seed);
            sample_verify_exact(&b, RankClaim::for_kind(b.kind, b.r), args.samples, args.seed)?
        }
        Mode::Structural => {
            let b = rational_only(basis, "structural")?;
            config.samples = Some(args.samples);
            config.seed = Some(args.seed);
            structural_verify(&b, args.samples, args.seed)?
        }
        Mode::Gfp => {
            let b = rational_only(basis, "gfp")?;
            let p = required(args.p, "p", "--mode gfp")?;
            config.p = Some(p);
            config.cap = Some(u64::try_from(args.cap).unwrap_or(u64::MAX));
            gfp_exhaustive_min_rank(&b, p, args.cap)?
        }
        Mode::Sigma => {
            let b = match basis {
                AnyBasis::Rational(b) => b.to_complex(),
                AnyBasis::Complex(b) => b,
            };
            config.restarts = Some(args.restarts);
            config.iters = Some(args.iters);
            config.tolerance = Some(args.tol);
            config.seed = Some(args.seed);
            let opts = SigmaOptions {
                restarts: args.restarts,
                iters: args.iters,
                tol: args.tol,
                seed: args.seed,
                ..SigmaOptions::default()
            };
            minimize_sigma_r(&b, r, &opts)?.report
        }
    };

    let body = match args.format {
        Format::Json => to_json(&config, &report)?,
        Format::Text => report_text(&config, &report),
    };
    emit(args.out.as_deref(), &body)?;
    if args.out.is_some() {
        println!(
            "verdict={} min_rank={} max_rank={}",
            snake(&report.verdict),
            opt(report.min_rank_observed),
            opt(report.max_rank_observed)
        );
    }
    Ok(exit_code(report.verdict))
}

#[derive(Serialize)]
struct Rows<'a> {
    rows: &'a [BoundsTable],
}

pub fn bounds(args: &BoundsArgs) -> Result<u8, CliError> {
    let rows = match args.r {
        Some(r) if !args.grid => vec![bounds_table(args.da, args.db, r)?],
        _ => bounds_grid(args.da, args.db)?,
    };
    let config = RunConfig {
        command: "bounds",
        da: Some(args.da),
        db: Some(args.db),
        r: args.r,
        grid: Some(args.grid),
        output: args.out.as_deref().map(path_string),
        format: Some(args.format),
        ..RunConfig::default()
    };
    let body = match args.format {
        Format::Json => to_json(&config, &Rows { rows: &rows })?,
        Format::Text => config.text_header() + &render_bounds(&rows),
    };
    emit(args.out.as_deref(), &body)?;
    Ok(0)
}

pub fn mixed(args: &MixedArgs) -> Result<u8, CliError> {
    let report = mixed_state_report(args.d, args.p)?;
    let config = RunConfig {
        command: "report mixed",
        d: Some(args.d),
        mixing: Some(args.p),
        output: args.out.as_deref().map(path_string),
        format: Some(args.format),
        ..RunConfig::default()
    };
    let body = match args.format {
        Format::Json => to_json(&config, &report)?,
        Format::Text => {
            let mut s = config.text_header();
            let _ = writeln!(s, "d={}", report.d);
            let _ = writeln!(s, "p={}", report.p);
            let _ = writeln!(s, "r={}", report.r);
            let _ = writeln!(s, "dim={}", report.dim);
            let _ = writeln!(s, "rank_lower_paper={}", report.rank_lower_paper);
            let _ = writeln!(s, "entropy_bits={}", report.entropy_bits);
            let _ = writeln!(s, "entropy_asymptotic_bits={}", report.entropy_asymptotic_bits);
            let _ = writeln!(s, "schmidt_measure_lb={}", report.schmidt_measure_lb);
            let _ = writeln!(s, "asymptotic_regime={}", report.asymptotic_regime);
            let _ = writeln!(s, "justification={}", report.justification);
            s
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(0)
}

pub fn random(args: &RandomArgs) -> Result<u8, CliError> {
    let report = random_comparison(args.da, args.db, args.k)?;
    let config = RunConfig {
        command: "report random",
        da: Some(args.da),
        db: Some(args.db),
        k: Some(args.k),
        output: args.out.as_deref().map(path_string),
        format: Some(args.format),
        ..RunConfig::default()
    };
    let body = match args.format {
        Format::Json => to_json(&config, &report)?,
        Format::Text => {
            let mut s = config.text_header();
            let _ = writeln!(s, "da={}", report.da);
            let _ = writeln!(s, "db={}", report.db);
            let _ = writeln!(s, "k={}", report.k);
            let _ = writeln!(s, "r={}", report.r);
            let _ = writeln!(s, "exact_dim={}", report.exact_dim);
            let _ = writeln!(s, "asymptotic={}", report.asymptotic);
            let _ = writeln!(s, "threshold_k={}", report.threshold_k);
            let _ = writeln!(s, "above_threshold={}", report.above_threshold);
            s
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(0)
}
