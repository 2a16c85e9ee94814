//! `spineforge`: decompose closed triangulations into a cell and a spine,
//! check the homology oracle, deform tensor fields and export meshes.
//!
//! Exit codes: 0 success, 1 falsified check, 2 invalid input or domain,
//! 3 I/O failure.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use spineforge_core::census;
use spineforge_core::chart::CellChart;
use spineforge_core::complex::tri::{read_tri, TriError};
use spineforge_core::complex::validate_closed_manifold;
use spineforge_core::export::{
    complex_off, forward_grid_off, retraction_rows, root_grid, spine_off, ExportError,
};
use spineforge_core::fields::{
    black_hole_region, continuity_report, deform_tensor, deformation_rows, extend_frame,
    FieldError, FieldSpec,
};
use spineforge_core::homology::{compare_with_punctured, homology_groups, punctured_complex};
use spineforge_core::spine::spine_connected;
use spineforge_core::{
    build_chart, decompose, Decomposition, Metric, SimplicialComplex, Strategy, GEOMETRIC_TOL,
};

#[derive(Parser)]
#[command(name = "spineforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow the cell from a root and print the decomposition.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        growth: Growth,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare spine homology with the punctured complex over many seeds.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100)]
        runs: u64,
        /// Fixed root; by default run `s` uses root `s mod |tops|`.
        #[arg(long)]
        root: Option<usize>,
        #[arg(long, default_value = "random")]
        strategy: StrategyArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reclassify one gate as spine before checking.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Deform a field toward the spine and check its seams.
    Deform {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        growth: Growth,
        /// `.fld` file; defaults to the constant scalar 1.
        #[arg(long)]
        field: Option<PathBuf>,
        /// ε as a fraction of ε_max.
        #[arg(long, default_value_t = 0.25)]
        eps_frac: f64,
        /// Random lines checked, besides one per gate.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Rows written per line.
        #[arg(long, default_value_t = 8)]
        per_line: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the retraction onto the spine as CSV.
    Retract {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        growth: Growth,
        /// Lattice denominator for the sampled root points.
        #[arg(long, default_value_t = 6)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the integer homology of the complex.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an OFF mesh.
    ExportOff {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        growth: Growth,
        #[arg(long, default_value = "complex")]
        subject: Subject,
        /// Lattice denominator for `samples`.
        #[arg(long, default_value_t = 12)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Built-in complex name.
    #[arg(long, conflicts_with = "path")]
    census: Option<String>,
    /// A `.tri` file.
    #[arg(required_unless_present = "census")]
    path: Option<PathBuf>,
}

#[derive(Args)]
struct Growth {
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long, default_value = "bfs")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Bfs,
    Dfs,
    Random,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Bfs => Strategy::Bfs,
            StrategyArg::Dfs => Strategy::Dfs,
            StrategyArg::Random => Strategy::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Subject {
    Complex,
    Spine,
    /// Forward images of a lattice in the root simplex.
    Samples,
}

enum Failure {
    Falsified(String),
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Falsified(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Falsified(m) | Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Io(m) => Failure::Io(m),
            other => invalid(other),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        invalid(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("spineforge: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn tolerance() -> Result<f64> {
    match std::env::var("SPINEFORGE_TOL") {
        Err(_) => Ok(GEOMETRIC_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(invalid(format!(
                "SPINEFORGE_TOL must be a positive number, got `{s}`"
            ))),
        },
    }
}

fn load(input: &Input) -> Result<(String, SimplicialComplex)> {
    if let Some(name) = &input.census {
        let entry = census::lookup(name).ok_or_else(|| {
            let known: Vec<_> = census::names().collect();
            invalid(format!(
                "unknown census complex `{name}` (known: {})",
                known.join(", ")
            ))
        })?;
        return Ok((name.clone(), entry.build_checked().map_err(invalid)?));
    }
    let path = input.path.as_ref().expect("clap requires an input");
    let c = read_tri(path).map_err(|e| match e {
        TriError::Io(e) => Failure::Io(format!("{}: {e}", path.display())),
        other => invalid(format!("{}: {other}", path.display())),
    })?;
    let report = validate_closed_manifold(&c);
    if let Some(r) = report.ridge_violations.first() {
        return Err(invalid(format!(
            "{}: ridge {:?} has {} cofacets, expected 2",
            path.display(),
            r.vertices,
            r.cofacets
        )));
    }
    if let Some(l) = report.link_violations.first() {
        return Err(invalid(format!(
            "{}: link of vertex {} {}",
            path.display(),
            l.vertex,
            l.reason
        )));
    }
    if report.components != 1 {
        return Err(invalid(format!(
            "{}: dual graph has {} components",
            path.display(),
            report.components
        )));
    }
    Ok((path.display().to_string(), c))
}

fn grow(c: &SimplicialComplex, g: &Growth) -> Result<Decomposition> {
    decompose(c, g.root, g.strategy.into(), g.seed).map_err(invalid)
}

fn chart(c: &SimplicialComplex, d: &Decomposition) -> Result<CellChart> {
    let m = Metric::from_complex(c).map_err(invalid)?;
    build_chart(c, d, &m).map_err(invalid)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Decompose { input, growth, out } => {
            let (name, c) = load(&input)?;
            let d = grow(&c, &growth)?;
            let decomposition: Value =
                serde_json::from_str(&d.to_json(&c)).expect("decomposition JSON");
            let report = json!({
                "complex": name,
                "decomposition": decomposition,
                "summary": {
                    "tops": c.num_tops(),
                    "gates": d.gates.len(),
                    "spine": d.spine.len(),
                    "spine_connected": spine_connected(&c, &d).map_err(invalid)?,
                },
            });
            emit(&out, &pretty(&report))
        }
        Command::Verify {
            input,
            runs,
            root,
            strategy,
            out,
            inject_fault,
        } => verify(&input, runs, root, strategy.into(), &out, inject_fault),
        Command::Deform {
            input,
            growth,
            field,
            eps_frac,
            samples,
            per_line,
            out,
        } => {
            let (_, c) = load(&input)?;
            let tol = tolerance()?;
            let d = grow(&c, &growth)?;
            let ch = Arc::new(chart(&c, &d)?);
            let frame = Arc::new(extend_frame(&ch)?);
            let spec = match &field {
                Some(p) => FieldSpec::read(p)?,
                None => FieldSpec::Constant {
                    r: 0,
                    s: 0,
                    values: vec![1.0],
                },
            };
            let k = spec.build(&c, frame)?;
            let epsilon_max = spineforge_core::fields::admissible_epsilon(&ch)?;
            let hole = black_hole_region(&ch, eps_frac * epsilon_max)?;
            let deformed = deform_tensor(&k, ch, hole)?;
            let report = continuity_report(&deformed, samples)?;
            let rows = deformation_rows(&deformed, samples, per_line)?;

            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["line".to_string(), "s_y".into(), "case".into()];
            header.extend((0..k.component_count()).map(|i| format!("k{i}")));
            w.write_record(&header)
                .map_err(|e| Failure::Io(e.to_string()))?;
            for row in &rows {
                let mut rec = vec![row.line.to_string(), row.s_y.to_string()];
                rec.push(
                    serde_json::to_value(row.case)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                );
                rec.extend(row.components.iter().map(f64::to_string));
                w.write_record(&rec)
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            emit(&out, &String::from_utf8(bytes).expect("csv is utf-8"))?;
            eprint!("{}", pretty(&report));

            if report.boundary_mismatch > tol {
                return Err(Failure::Falsified(format!(
                    "hole boundary mismatch {:e} exceeds {tol:e}",
                    report.boundary_mismatch
                )));
            }
            if let Some(f) = report.faults.first() {
                return Err(Failure::Falsified(format!(
                    "{} seam fault(s); first on line {} at arc {} with jump {:e}",
                    report.faults.len(),
                    f.line,
                    f.arc,
                    f.limit_jump
                )));
            }
            Ok(())
        }
        Command::Retract {
            input,
            growth,
            grid,
            steps,
            out,
        } => {
            let (_, c) = load(&input)?;
            let d = grow(&c, &growth)?;
            let ch = chart(&c, &d)?;
            let points = root_grid(c.dim(), grid)
                .iter()
                .map(|p| ch.forward_map(p))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(invalid)?;
            let rows = retraction_rows(&ch, &points, steps).map_err(invalid)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["sample".to_string(), "t".into(), "top".into()];
            header.extend((0..=c.dim()).map(|i| format!("b{i}")));
            w.write_record(&header)
                .map_err(|e| Failure::Io(e.to_string()))?;
            for r in &rows {
                let mut rec = vec![
                    r.sample.to_string(),
                    r.t.to_string(),
                    r.point.top.to_string(),
                ];
                rec.extend(r.point.bary.iter().map(f64::to_string));
                w.write_record(&rec)
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            emit(&out, &String::from_utf8(bytes).expect("csv is utf-8"))
        }
        Command::Homology { input, out } => {
            let (name, c) = load(&input)?;
            let h = homology_groups(&c);
            let report = json!({
                "complex": name,
                "f_vector": c.f_vector(),
                "euler_characteristic": c.euler_characteristic(),
                "homology": h,
            });
            emit(&out, &pretty(&report))
        }
        Command::ExportOff {
            input,
            growth,
            subject,
            grid,
            out,
        } => {
            let (_, c) = load(&input)?;
            let text = match subject {
                Subject::Complex => complex_off(&c)?,
                Subject::Spine => spine_off(&c, &grow(&c, &growth)?)?,
                Subject::Samples => {
                    if c.coords().is_none() {
                        return Err(ExportError::NoCoordinates.into());
                    }
                    let d = grow(&c, &growth)?;
                    forward_grid_off(&chart(&c, &d)?, grid)?
                }
            };
            emit(&out, &text)
        }
    }
}

#[derive(Serialize)]
struct RunOutcome {
    seed: u64,
    root: usize,
    homology_equal: bool,
    spine_connected: bool,
}

fn verify(
    input: &Input,
    runs: u64,
    root: Option<usize>,
    strategy: Strategy,
    out: &Option<PathBuf>,
    inject_fault: bool,
) -> Result<()> {
    let (name, c) = load(input)?;
    let tops = c.num_tops();
    if let Some(r) = root.filter(|&r| r >= tops) {
        return Err(invalid(format!(
            "root {r} is not a top simplex id ({tops} tops)"
        )));
    }
    let roots: Vec<usize> = match root {
        Some(r) => vec![r],
        None => (0..tops).collect(),
    };
    let punctured = roots
        .par_iter()
        .map(|&r| punctured_complex(&c, r).map(|p| (r, homology_groups(&p))))
        .collect::<std::result::Result<std::collections::BTreeMap<_, _>, _>>()
        .map_err(invalid)?;

    let outcomes = (0..runs)
        .into_par_iter()
        .map(|seed| {
            let r = root.unwrap_or((seed % tops as u64) as usize);
            let mut d = decompose(&c, r, strategy, seed).map_err(invalid)?;
            if inject_fault {
                d = d.with_misclassified_gate();
            }
            let report = compare_with_punctured(&c, &d, punctured[&r].clone());
            Ok((
                RunOutcome {
                    seed,
                    root: r,
                    homology_equal: report.holds(),
                    spine_connected: spine_connected(&c, &d).unwrap_or(false),
                },
                report.spine,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let failures: Vec<&RunOutcome> = outcomes
        .iter()
        .map(|(o, _)| o)
        .filter(|o| !(o.homology_equal && o.spine_connected))
        .collect();
    let report = json!({
        "complex": name,
        "runs": runs,
        "strategy": strategy.to_string(),
        "fault_injected": inject_fault,
        "passed": failures.is_empty(),
        "spine_homology": outcomes.first().map(|(_, h)| h),
        "punctured_homology": punctured,
        "failures": failures,
    });
    emit(out, &pretty(&report))?;
    match failures.first() {
        None => Ok(()),
        Some(f) => Err(Failure::Falsified(format!(
            "{} of {runs} runs failed; reproduce with `decompose --root {} --strategy {strategy} --seed {}`",
            failures.len(),
            f.root,
            f.seed
        ))),
    }
}
