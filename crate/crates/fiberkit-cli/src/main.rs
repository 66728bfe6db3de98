//! Command-line front end: load JSON descriptors, run analyses, emit
//! JSON/CSV reports and self-contained SVG plots.
//!
//! Exit codes: 0 success, 2 analytic-negative verdict, 64 malformed input,
//! 70 internal error. Errors are machine readable on stderr as
//! `{"error": ...}`. All commands are deterministic given
//! `(input, seed, tol)`.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fiberkit::descriptor::{
    matrix_pairs, pair, GroupDescriptor, OperatorDescriptor, Pair, SpectrumDescriptor,
    SystemDescriptor,
};
use fiberkit::frames::{self, Verdict};
use fiberkit::group::CosetTransversal;
use fiberkit::zak::{Fiberization, TransversalDecomposition};
use fiberkit::{Complex64, Error as FkError};

#[derive(Parser)]
#[command(
    name = "fiberkit",
    version,
    about = "Frame and multiplication-invariant operator analysis on finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Analysis tolerance for verdicts and commutator checks
    #[arg(long, global = true, default_value_t = 1e-9, allow_negative_numbers = true)]
    tol: f64,
    /// Payload format on stdout (defaults to the command's natural format)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the data artifact (CSV or JSON) to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a self-contained SVG plot next to --out
    #[arg(long, global = true, default_value_t = false)]
    plot: bool,
    /// Seed for randomized self-checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluate per-fiber work in parallel (byte-identical output)
    #[arg(long, global = true, default_value_t = false)]
    parallel: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpectVerdict {
    Frame,
    Riesz,
    Tight,
    Parseval,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds and Gramian spectra of a generator system
    Analyze {
        system: PathBuf,
        /// Exit with status 2 unless the verdict is at least this strong
        #[arg(long, value_enum)]
        expect: Option<ExpectVerdict>,
    },
    /// Canonical dual (or tight) generators of a frame
    Dual {
        system: PathBuf,
        /// Emit the canonical Parseval (tight) generators instead
        #[arg(long, default_value_t = false)]
        tight: bool,
    },
    /// Classify a Gramian field, or test two systems for unitary equivalence
    Classify {
        system: PathBuf,
        other: Option<PathBuf>,
    },
    /// Harmonic frame of a finite abelian group from selected characters
    Harmonic {
        /// Group descriptor: inline JSON or a file path
        #[arg(long)]
        group: String,
        /// Comma-separated dual element indices, e.g. "0,1,3"
        #[arg(long)]
        rows: String,
    },
    /// Fiber spectra and essential range of a range operator
    Spectrum { operator: PathBuf },
    /// Zak transform of a function over a finite group with abelian subgroup
    Zak {
        /// Group descriptor file ({"cayley": ...} or {"abelian": ...})
        #[arg(long)]
        group: PathBuf,
        /// Subgroup as a JSON index list, e.g. "[0,2,4]" (overrides the file)
        #[arg(long)]
        subgroup: Option<String>,
        /// Function on the group: JSON array of [re, im] pairs
        #[arg(long)]
        input: PathBuf,
        /// Also run the fiberization route (abelian groups only)
        #[arg(long, default_value_t = false)]
        fiberize: bool,
    },
    /// Benedetto-Li profile of a sampled band-limited spectrum
    Sidemo {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 64,
            message: message.into(),
        }
    }

    fn negative(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<FkError> for Failure {
    fn from(e: FkError) -> Self {
        let code = match &e {
            FkError::InvalidInput(_)
            | FkError::InvalidElement(_)
            | FkError::InvalidSubgroup(_)
            | FkError::InvalidTable(_)
            | FkError::DomainMismatch(_)
            | FkError::DegenerateSpace => 64,
            FkError::NotAFrame(_)
            | FkError::NotMultiplicationInvariant { .. }
            | FkError::NotTranslationInvariant { .. }
            | FkError::NonInvertible { .. }
            | FkError::ContractViolation(_)
            | FkError::RangeLeak { .. }
            | FkError::NotPsd { .. }
            | FkError::ModeNotApplicable(_)
            | FkError::DimensionDeficit { .. } => 2,
            FkError::Numerical(_) => 70,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let payload = serde_json::json!({ "error": e.to_string() });
            eprintln!("{payload}");
            return ExitCode::from(64);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let payload = serde_json::json!({ "error": f.message });
            eprintln!("{payload}");
            ExitCode::from(f.code)
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(raw: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(raw).map_err(|e| Failure::input(format!("malformed {what}: {e}")))
}

fn write_artifact(cli: &Cli, contents: &str) -> Result<(), Failure> {
    if let Some(out) = &cli.out {
        fs::write(out, contents).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn write_plot(cli: &Cli, svg: &str) -> Result<(), Failure> {
    if !cli.plot {
        return Ok(());
    }
    let out = cli
        .out
        .as_ref()
        .ok_or_else(|| Failure::input("--plot requires --out"))?;
    let mut path = out.clone();
    path.set_extension("svg");
    fs::write(&path, svg).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure {
        code: 70,
        message: e.to_string(),
    })?;
    println!("{line}");
    Ok(())
}

fn verdict_rank(v: Verdict) -> u8 {
    match v {
        Verdict::Empty | Verdict::NotBessel => 0,
        Verdict::BesselOnly => 1,
        Verdict::Frame => 2,
        Verdict::Riesz | Verdict::Tight => 3,
        Verdict::Parseval => 4,
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::input("--tol must be positive"));
    }
    match &cli.command {
        Command::Analyze { system, expect } => cmd_analyze(cli, system, *expect),
        Command::Dual { system, tight } => cmd_dual(cli, system, *tight),
        Command::Classify { system, other } => cmd_classify(cli, system, other.as_deref()),
        Command::Harmonic { group, rows } => cmd_harmonic(cli, group, rows),
        Command::Spectrum { operator } => cmd_spectrum(cli, operator),
        Command::Zak {
            group,
            subgroup,
            input,
            fiberize,
        } => cmd_zak(cli, group, subgroup.as_deref(), input, *fiberize),
        Command::Sidemo { spec, grid } => cmd_sidemo(cli, spec, *grid),
    }
}

fn load_system(path: &Path) -> Result<frames::GeneratorSystem, Failure> {
    let raw = read_to_string(path)?;
    let desc: SystemDescriptor = parse_json(&raw, "system descriptor")?;
    Ok(desc.to_system()?)
}

fn gramian_csv(system: &frames::GeneratorSystem, parallel: bool) -> Result<String, Failure> {
    let gramian = if parallel {
        frames::pointwise_gramian_par(system)?
    } else {
        frames::pointwise_gramian(system)?
    };
    let mut csv = String::from("atom,index,eigenvalue\n");
    for x in 0..system.space().len() {
        for (i, v) in gramian.fiber_eigenvalues(x)?.iter().enumerate() {
            csv.push_str(&format!("{},{},{}\n", system.space().atom(x), i, v));
        }
    }
    Ok(csv)
}

fn cmd_analyze(cli: &Cli, path: &Path, expect: Option<ExpectVerdict>) -> Result<(), Failure> {
    let system = load_system(path)?;
    let report = frames::frame_bounds(&system, cli.tol)?;
    let csv = gramian_csv(&system, cli.parallel)?;
    write_artifact(cli, &csv)?;
    if cli.plot {
        let gramian = frames::pointwise_gramian(&system)?;
        let points: Vec<(f64, f64)> = (0..system.space().len())
            .flat_map(|x| {
                gramian
                    .fiber_eigenvalues(x)
                    .unwrap_or_default()
                    .into_iter()
                    .map(move |v| (x as f64, v))
            })
            .collect();
        write_plot(cli, &svg::scatter(&points, "Gramian fiber eigenvalues"))?;
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => print_json(&report)?,
        Format::Csv => print!("{csv}"),
    }
    if let Some(exp) = expect {
        let need = match exp {
            ExpectVerdict::Frame => 2,
            ExpectVerdict::Riesz | ExpectVerdict::Tight => 3,
            ExpectVerdict::Parseval => 4,
        };
        let have = verdict_rank(report.verdict).max(if report.riesz { 3 } else { 0 });
        if have < need {
            return Err(Failure::negative(format!(
                "verdict {:?} does not meet the expectation",
                report.verdict
            )));
        }
    }
    Ok(())
}

fn cmd_dual(cli: &Cli, path: &Path, tight: bool) -> Result<(), Failure> {
    let system = load_system(path)?;
    let dual = if tight {
        frames::canonical_tight(&system)?
    } else {
        frames::canonical_dual(&system)?
    };
    let desc = SystemDescriptor::from_system(&dual);
    let artifact = serde_json::to_string(&desc).map_err(|e| Failure {
        code: 70,
        message: e.to_string(),
    })?;
    write_artifact(cli, &artifact)?;
    print_json(&desc)
}

fn cmd_classify(cli: &Cli, path: &Path, other: Option<&Path>) -> Result<(), Failure> {
    let system = load_system(path)?;
    match other {
        None => {
            let gramian = if cli.parallel {
                frames::pointwise_gramian_par(&system)?
            } else {
                frames::pointwise_gramian(&system)?
            };
            let classification = frames::classify_gramian(&gramian, cli.tol)?;
            print_json(&classification)
        }
        Some(second) => {
            let rhs = load_system(second)?;
            let equivalent = frames::unitarily_equivalent(&system, &rhs, cli.tol)?;
            print_json(&serde_json::json!({ "equivalent": equivalent }))?;
            if equivalent {
                Ok(())
            } else {
                Err(Failure::negative("systems are not unitarily equivalent"))
            }
        }
    }
}

fn cmd_harmonic(cli: &Cli, group: &str, rows: &str) -> Result<(), Failure> {
    let raw = if group.trim_start().starts_with('{') {
        group.to_string()
    } else {
        read_to_string(Path::new(group))?
    };
    let desc: GroupDescriptor = parse_json(&raw, "group descriptor")?;
    let g = desc.abelian_group()?;
    let e: Vec<usize> = rows
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("bad row index {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let phi = fiberkit::rep::harmonic_frame(&g, &e)?;
    let gram = &phi * phi.adjoint();
    let defect = (gram - fiberkit::DMatrix::<Complex64>::identity(e.len(), e.len())).norm();
    let payload = serde_json::json!({
        "rows": e.len(),
        "cols": g.order(),
        "matrix": matrix_pairs(&phi),
        "parseval_defect": defect,
    });
    write_artifact(cli, &payload.to_string())?;
    print_json(&payload)
}

fn spectra_csv(op: &fiberkit::RangeOperator) -> Result<String, Failure> {
    let spectra = op.fiber_spectra()?;
    let mut csv = String::from("atom,re,im\n");
    for (x, evs) in spectra.per_atom.iter().enumerate() {
        for ev in evs {
            csv.push_str(&format!(
                "{},{},{}\n",
                op.domain().space().atom(x),
                ev.re,
                ev.im
            ));
        }
    }
    for ev in &spectra.essential_range {
        csv.push_str(&format!("essran,{},{}\n", ev.re, ev.im));
    }
    Ok(csv)
}

fn cmd_spectrum(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let raw = read_to_string(path)?;
    let desc: OperatorDescriptor = parse_json(&raw, "operator descriptor")?;
    let op = desc.to_range_operator()?;
    let spectra = op.fiber_spectra()?;
    let csv = spectra_csv(&op)?;
    write_artifact(cli, &csv)?;
    let points: Vec<(f64, f64)> = spectra
        .per_atom
        .iter()
        .flat_map(|evs| evs.iter().map(|z| (z.re, z.im)))
        .collect();
    write_plot(cli, &svg::scatter(&points, "fiber spectra"))?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => print!("{csv}"),
        Format::Json => {
            let payload = serde_json::json!({
                "per_atom": spectra
                    .per_atom
                    .iter()
                    .map(|evs| evs.iter().map(|&z| pair(z)).collect::<Vec<Pair>>())
                    .collect::<Vec<_>>(),
                "essential_range": spectra
                    .essential_range
                    .iter()
                    .map(|&z| pair(z))
                    .collect::<Vec<Pair>>(),
            });
            print_json(&payload)?;
        }
    }
    Ok(())
}

fn parse_function(raw: &str) -> Result<Vec<Complex64>, Failure> {
    let pairs: Vec<Pair> = parse_json(raw, "function (array of [re, im] pairs)")?;
    Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

fn lcg_complex(state: &mut u64) -> Complex64 {
    let mut next = || {
        *state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((*state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    };
    let re = next();
    let im = next();
    Complex64::new(re, im)
}

fn cmd_zak(
    cli: &Cli,
    group: &Path,
    subgroup: Option<&str>,
    input: &Path,
    fiberize: bool,
) -> Result<(), Failure> {
    let raw = read_to_string(group)?;
    let desc: GroupDescriptor = parse_json(&raw, "group descriptor")?;
    let override_elems: Option<Vec<usize>> = match subgroup {
        Some(s) => Some(parse_json(s, "subgroup index list")?),
        None => None,
    };
    let sub = desc.subgroup_embedding(override_elems.as_deref())?;
    let table = sub.parent().clone();
    let transversal = CosetTransversal::canonical(&sub);
    let dec = TransversalDecomposition::new(table, sub, Some(transversal))?;
    let f = parse_function(&read_to_string(input)?)?;
    let z = dec.zak_transform(&f)?;
    let report = dec.ti_frame_test(&[f.clone()], cli.tol)?;
    // randomized self-checks, deterministic under --seed
    let mut state = cli.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(7);
    let mut unitarity =
        (z.norm().powi(2) - f.iter().map(|v| v.norm_sqr()).sum::<f64>()).abs();
    for _ in 0..4 {
        let g: Vec<Complex64> = (0..dec.big().order())
            .map(|_| lcg_complex(&mut state))
            .collect();
        let zg = dec.zak_transform(&g)?;
        unitarity = unitarity
            .max((zg.norm().powi(2) - g.iter().map(|v| v.norm_sqr()).sum::<f64>()).abs());
    }
    let intertwining = dec
        .sub()
        .elements()
        .iter()
        .map(|&x| dec.zak_intertwining_residual(x, 2, cli.seed))
        .collect::<fiberkit::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    let fibers: Vec<Vec<Pair>> = (0..dec.dual_space().len())
        .map(|alpha| z.value(alpha).iter().map(|&v| pair(v)).collect())
        .collect();
    let mut payload = serde_json::json!({
        "dual_atoms": dec.dual_space().atoms(),
        "dual_mass": 1.0 / dec.sub_order() as f64,
        "transversal": dec.transversal().reps(),
        "fibers": fibers,
        "report": report,
        "unitarity_residual": unitarity,
        "intertwining_residual": intertwining,
    });
    if fiberize {
        let g = desc
            .abelian_group()
            .map_err(|_| Failure::input("--fiberize requires an abelian group descriptor"))?;
        let fib = Fiberization::new(g, dec.sub().elements())?;
        let tfield = fib.fiberize(&f)?;
        let freport = fib.frame_test(&[f.clone()], cli.tol)?;
        let pairing = fib.section_model_pairing(&dec)?;
        payload["fiberization"] = serde_json::json!({
            "section": fib.section(),
            "annihilator": fib.annihilator(),
            "section_model_pairing": pairing,
            "fibers": (0..fib.space().len())
                .map(|s| tfield.value(s).iter().map(|&v| pair(v)).collect::<Vec<Pair>>())
                .collect::<Vec<_>>(),
            "report": freport,
        });
    }
    write_artifact(cli, &payload.to_string())?;
    print_json(&payload)
}

fn cmd_sidemo(cli: &Cli, spec: &Path, grid: Option<usize>) -> Result<(), Failure> {
    let raw = read_to_string(spec)?;
    let desc: SpectrumDescriptor = parse_json(&raw, "spectrum descriptor")?;
    let spectrum = desc.to_spectrum(grid)?;
    let profile = spectrum.bl_profile();
    let report = spectrum.si_frame_bounds();
    let mut csv = String::from("xi,profile\n");
    for (j, p) in profile.iter().enumerate() {
        csv.push_str(&format!("{}/{},{}\n", j, spectrum.grid(), p));
    }
    write_artifact(cli, &csv)?;
    write_plot(cli, &svg::profile(&profile, "Benedetto-Li profile"))?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => print_json(&report)?,
        Format::Csv => print!("{csv}"),
    }
    Ok(())
}
