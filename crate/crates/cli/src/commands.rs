//! Subcommand implementations. Every command reads and writes through the
//! plain-text graph formats and emits JSON or CSV; nothing here depends on
//! wall-clock time, so identical configurations produce identical bytes.

use std::fmt;
use std::fs;
use std::path::Path;

use planegap::cylinder::{self, PipelineReport};
use planegap::graph::{validate_sphere_triangulation, DiameterMode, Graph};
use planegap::io;
use planegap::profile::{critical_values, distance_density};
use planegap::spectral;
use planegap::upper_bound::verify_gap_bound;
use planegap::walk::{self, NoBcMember, NoBcReport, StartPolicy};
use serde::Serialize;

use crate::{DensityArgs, Format, GenArgs, Method, MixingArgs, Policy, SpectrumArgs, VerifyArgs};

/// Largest accepted sandwich constant; one fitted C must cover both sides.
const SANDWICH_LIMIT: f64 = 100.0;
/// Band ratio cap for lambda1 * (diam / ln diam)^2 across a family.
const THM2_BAND_LIMIT: f64 = 50.0;
/// Band ratio cap for lambda1(X) / lambda1(Y) across a family.
const TRANSFER_BAND_LIMIT: f64 = 25.0;

/// Command failure carrying its process exit code. Configuration problems
/// exit 1, failed mathematical checks exit 2, file problems exit 3; library
/// errors are classified by variant.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Check(String),
    Io(String),
    Core(planegap::Error),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) => 1,
            CmdError::Check(_) => 2,
            CmdError::Io(_) => 3,
            CmdError::Core(e) => core_exit_code(e),
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Config(s) => write!(f, "configuration error: {s}"),
            CmdError::Check(s) => write!(f, "verification failed: {s}"),
            CmdError::Io(s) => write!(f, "{s}"),
            CmdError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<planegap::Error> for CmdError {
    fn from(e: planegap::Error) -> CmdError {
        CmdError::Core(e)
    }
}

/// Sorts library errors into the documented exit classes: bad inputs and
/// out-of-range parameters are configuration errors, everything that means
/// "a mathematical claim did not hold on this data" is a check failure.
fn core_exit_code(e: &planegap::Error) -> u8 {
    use planegap::Error as E;
    match e {
        E::Io(_) | E::Parse { .. } => 3,
        E::BadRegularOrder(_)
        | E::ZeroSubdivision
        | E::BadGridStep(_)
        | E::TooFewMembers { .. }
        | E::WalkCapExceeded { .. }
        | E::BadPiecewise
        | E::NodesNotIncreasing
        | E::DimensionMismatch { .. }
        | E::ZeroVector
        | E::GraphTooLarge { .. }
        | E::DenseCapExceeded { .. }
        | E::EmptyGraph
        | E::VertexOutOfRange { .. } => 1,
        _ => 2,
    }
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CmdError> {
    fs::write(path, text).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CmdError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Reads any of the three on-disk formats, keyed off the trailer line.
/// Returns the graph and the recorded root, if the file had one.
fn read_any(text: &str, path: &Path) -> Result<(Graph, Option<usize>), CmdError> {
    let wrap = |e: planegap::Error| CmdError::Io(format!("{}: {e}", path.display()));
    if text.lines().any(|l| l.split_whitespace().next() == Some("faces")) {
        let t = io::read_triangulation(text).map_err(wrap)?;
        Ok((t.graph, None))
    } else if text.lines().any(|l| l.split_whitespace().next() == Some("root")) {
        let (g, root) = io::read_rooted(text).map_err(wrap)?;
        Ok((g, Some(root)))
    } else {
        Ok((io::read_edge_list(text).map_err(wrap)?, None))
    }
}

pub fn gen(args: &GenArgs) -> Result<(), CmdError> {
    fs::create_dir_all(&args.out)
        .map_err(|e| CmdError::Io(format!("{}: {e}", args.out.display())))?;
    for &n in &args.n {
        let p = cylinder::build_xn(n, args.alpha, args.eps, args.seed)?;
        write_file(&args.out.join(format!("y{n}.g")), &io::write_rooted(&p.y.graph, p.y.root))?;
        write_file(
            &args.out.join(format!("y{n}.provenance.json")),
            &to_pretty(&p.y.provenance),
        )?;
        write_file(&args.out.join(format!("x{n}.t")), &io::write_triangulation(&p.triangulation))?;
        write_file(&args.out.join(format!("x{n}.report.json")), &to_pretty(&p.report))?;
        println!(
            "n={n}: wrote y{n}.g y{n}.provenance.json x{n}.t x{n}.report.json ({} vertices)",
            p.report.vol / 3 + 2
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct MemberReport {
    label: String,
    vertices: usize,
    edges: usize,
    checks: Vec<CheckResult>,
}

#[derive(Serialize)]
struct BandCheck {
    name: &'static str,
    min: f64,
    max: f64,
    ratio: f64,
    limit: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    tol: f64,
    members: Vec<MemberReport>,
    bands: Vec<BandCheck>,
    /// Trend data for the diameter-squared mixing statistic; null when
    /// fewer than three members supplied walk data.
    nobc: Option<NoBcReport>,
    checks_total: usize,
    checks_failed: usize,
    pass: bool,
}

fn push_check(checks: &mut Vec<CheckResult>, name: &'static str, r: planegap::Result<(bool, String)>) {
    let (pass, detail) = match r {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, e.to_string()),
    };
    checks.push(CheckResult { name, pass, detail });
}

fn band_check(name: &'static str, values: &[f64], limit: f64) -> BandCheck {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ratio = if min > 0.0 { max / min } else { f64::INFINITY };
    BandCheck { name, min, max, ratio, limit, pass: ratio.is_finite() && ratio <= limit }
}

fn finish_report(
    mode: &'static str,
    tol: f64,
    members: Vec<MemberReport>,
    bands: Vec<BandCheck>,
    nobc: Option<NoBcReport>,
) -> VerifyReport {
    let checks_total =
        members.iter().map(|m| m.checks.len()).sum::<usize>() + bands.len();
    let checks_failed = members.iter().flat_map(|m| &m.checks).filter(|c| !c.pass).count()
        + bands.iter().filter(|b| !b.pass).count();
    VerifyReport { mode, tol, members, bands, nobc, checks_total, checks_failed, pass: checks_failed == 0 }
}

pub fn verify(args: &VerifyArgs) -> Result<(), CmdError> {
    if args.in_dir.is_some() && !args.graphs.is_empty() {
        return Err(CmdError::Config("pass either --in with --n or --graphs, not both".into()));
    }
    let report = if let Some(dir) = &args.in_dir {
        if args.n.is_empty() {
            return Err(CmdError::Config("--in needs --n with the base orders to verify".into()));
        }
        verify_family(dir, &args.n, args.tol)?
    } else if !args.graphs.is_empty() {
        if !args.n.is_empty() {
            return Err(CmdError::Config("--n only applies to --in directories".into()));
        }
        verify_controls(&args.graphs)?
    } else {
        return Err(CmdError::Config(
            "nothing to verify: pass --in DIR --n LIST or --graphs FILES".into(),
        ));
    };
    emit(args.out.as_deref(), &to_pretty(&report))?;
    if report.checks_failed > 0 {
        return Err(CmdError::Check(format!(
            "{} of {} checks failed",
            report.checks_failed, report.checks_total
        )));
    }
    Ok(())
}

/// Re-checks generated artifacts: the sphere validator, the recorded
/// report against recomputation, the diameter-gap certificate, the rooted
/// graph's density postconditions, and the mixing sandwich. Family-level
/// bands and the mixing trend are appended after all members load.
fn verify_family(dir: &Path, ns: &[usize], tol: f64) -> Result<VerifyReport, CmdError> {
    let mut members = Vec::new();
    let mut ratios = Vec::new();
    let mut transfers = Vec::new();
    let mut nobc_members = Vec::new();
    for &n in ns {
        let tri_path = dir.join(format!("x{n}.t"));
        let tri = io::read_triangulation(&read_file(&tri_path)?)
            .map_err(|e| CmdError::Io(format!("{}: {e}", tri_path.display())))?;
        let rep_path = dir.join(format!("x{n}.report.json"));
        let rep: PipelineReport = serde_json::from_str(&read_file(&rep_path)?)
            .map_err(|e| CmdError::Io(format!("{}: {e}", rep_path.display())))?;
        let y_path = dir.join(format!("y{n}.g"));
        let (y, y_root) = io::read_rooted(&read_file(&y_path)?)
            .map_err(|e| CmdError::Io(format!("{}: {e}", y_path.display())))?;
        let g = &tri.graph;
        let mut checks = Vec::new();

        let val = validate_sphere_triangulation(&tri, cylinder::DEGREE_CAP);
        checks.push(CheckResult {
            name: "validator",
            pass: val.pass && rep.validator.pass,
            detail: format!("rerun pass={}, recorded pass={}", val.pass, rep.validator.pass),
        });

        push_check(&mut checks, "report_consistency", (|| {
            let lambda = spectral::lambda1_auto(g, spectral::DEFAULT_TOL, 0)?.lambda1;
            let diam = g.diameter(DiameterMode::Exact)?.value;
            let rel = (lambda - rep.lambda1).abs() / rep.lambda1.max(f64::MIN_POSITIVE);
            let pass = rep.n == n
                && rep.vol == g.vol()
                && rep.diam == diam
                && rep.degree_max == g.max_degree()
                && rel <= tol;
            Ok((pass, format!("lambda1 rel diff {rel:.2e}, diam {diam}, vol {}", g.vol())))
        })());

        push_check(&mut checks, "y_gap_recompute", (|| {
            let lambda = spectral::lambda1_auto(&y, spectral::DEFAULT_TOL, 0)?.lambda1;
            let rel = (lambda - rep.lambda1_y).abs() / rep.lambda1_y.max(f64::MIN_POSITIVE);
            Ok((rel <= tol, format!("lambda1(Y) rel diff {rel:.2e}")))
        })());

        push_check(&mut checks, "y_density_good", (|| {
            let rho = distance_density(&y, y_root)?;
            let exact = rho.integral_twice() == 2 * y.edge_count() as i64;
            let positive = rho.min_value() >= 1;
            let good = critical_values(&rho).iter().all(|cv| cv.good);
            Ok((
                exact && positive && good,
                format!("integral exact {exact}, min >= 1 {positive}, jumps good {good}"),
            ))
        })());

        push_check(&mut checks, "thm1_gap_bound", (|| {
            let r = verify_gap_bound(g, cylinder::DEGREE_CAP)?;
            Ok((true, format!("branch {:?}, ratio {:.4}, bound {:.4e}", r.branch, r.ratio, r.bound_value)))
        })());

        let v = g.vertex_count();
        match walk::verify_mixing_sandwich_with(g, StartPolicy::Heuristic(vec![v - 2, v - 1])) {
            Ok(s) => {
                checks.push(CheckResult {
                    name: "mixing_sandwich",
                    pass: s.c_fit <= SANDWICH_LIMIT,
                    detail: format!("tau {}, c_fit {:.3}", s.tau, s.c_fit),
                });
                nobc_members.push(NoBcMember { label: format!("x{n}"), tau: s.tau, diam: rep.diam });
            }
            Err(e) => checks.push(CheckResult {
                name: "mixing_sandwich",
                pass: false,
                detail: e.to_string(),
            }),
        }

        ratios.push(rep.ratio_thm2);
        transfers.push(rep.lambda1 / rep.lambda1_y);
        members.push(MemberReport {
            label: format!("x{n}"),
            vertices: v,
            edges: g.edge_count(),
            checks,
        });
    }
    let bands = vec![
        band_check("thm2_ratio_band", &ratios, THM2_BAND_LIMIT),
        band_check("gap_transfer_band", &transfers, TRANSFER_BAND_LIMIT),
    ];
    let nobc =
        if nobc_members.len() >= 3 { Some(walk::verify_nobc(&nobc_members)?) } else { None };
    Ok(finish_report("family", tol, members, bands, nobc))
}

/// Runs the diameter-gap certificate and the mixing sandwich on plain
/// graphs, cycles and paths being the intended controls. No bands: the
/// interesting control output is the mixing trend, which grows where the
/// family's stays flat.
fn verify_controls(paths: &[std::path::PathBuf]) -> Result<VerifyReport, CmdError> {
    let mut members = Vec::new();
    let mut nobc_members = Vec::new();
    for path in paths {
        let (g, _) = read_any(&read_file(path)?, path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let mut checks = Vec::new();

        push_check(&mut checks, "thm1_gap_bound", (|| {
            let r = verify_gap_bound(&g, g.max_degree())?;
            Ok((true, format!("branch {:?}, ratio {:.4}, bound {:.4e}", r.branch, r.ratio, r.bound_value)))
        })());

        match walk::verify_mixing_sandwich(&g) {
            Ok(s) => {
                checks.push(CheckResult {
                    name: "mixing_sandwich",
                    pass: s.c_fit <= SANDWICH_LIMIT,
                    detail: format!("tau {}, c_fit {:.3}", s.tau, s.c_fit),
                });
                if let Ok(d) = g.diameter(DiameterMode::Exact) {
                    nobc_members.push(NoBcMember { label: label.clone(), tau: s.tau, diam: d.value });
                }
            }
            Err(e) => checks.push(CheckResult {
                name: "mixing_sandwich",
                pass: false,
                detail: e.to_string(),
            }),
        }

        members.push(MemberReport {
            label,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            checks,
        });
    }
    let nobc =
        if nobc_members.len() >= 3 { Some(walk::verify_nobc(&nobc_members)?) } else { None };
    Ok(finish_report("controls", 0.0, members, Vec::new(), nobc))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CmdError> {
    let (g, _) = read_any(&read_file(&args.input)?, &args.input)?;
    let res = match args.method {
        Method::Auto => spectral::lambda1_auto(&g, args.tol, args.seed)?,
        Method::Dense => spectral::lambda1_dense(&g)?,
        Method::Iterative => spectral::lambda1_iterative(&g, args.tol, args.seed)?,
    };
    let method = match res.method {
        spectral::SolveMethod::Dense => "dense",
        spectral::SolveMethod::Iterative => "iterative",
    };
    let text = match args.format {
        Format::Json => to_pretty(&serde_json::json!({
            "lambda1": res.lambda1,
            "method": method,
            "iterations": res.iterations,
            "residual": res.residual,
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
        })),
        Format::Csv => format!(
            "lambda1,method,iterations,residual,vertices,edges\n{},{},{},{},{},{}\n",
            res.lambda1,
            method,
            res.iterations,
            res.residual,
            g.vertex_count(),
            g.edge_count()
        ),
    };
    emit(args.out.as_deref(), &text)
}

pub fn mixing(args: &MixingArgs) -> Result<(), CmdError> {
    let (g, _) = read_any(&read_file(&args.input)?, &args.input)?;
    let policy = match args.policy {
        Policy::WorstExact => {
            if !args.starts.is_empty() {
                return Err(CmdError::Config("--starts only applies to --policy heuristic".into()));
            }
            StartPolicy::WorstExact
        }
        Policy::Heuristic => StartPolicy::Heuristic(args.starts.clone()),
    };
    let res = walk::mixing_time(&g, policy)?;
    let text = match args.format {
        Format::Json => to_pretty(&res),
        Format::Csv => io::tv_csv(&res.tv_curve),
    };
    emit(args.out.as_deref(), &text)
}

pub fn density(args: &DensityArgs) -> Result<(), CmdError> {
    let (g, file_root) = read_any(&read_file(&args.input)?, &args.input)?;
    let root = match args.root.or(file_root) {
        Some(r) => r,
        None => {
            return Err(CmdError::Config("the file records no root; pass --root".into()));
        }
    };
    let rho = distance_density(&g, root)?;
    let text = match args.format {
        Format::Csv => io::step_function_csv(&rho),
        Format::Json => {
            let pieces: Vec<serde_json::Value> = rho
                .pieces()
                .map(|(a, b, v)| {
                    serde_json::json!({
                        "t_start": a as f64 / 2.0,
                        "t_end": b as f64 / 2.0,
                        "value": v,
                    })
                })
                .collect();
            to_pretty(&serde_json::json!({
                "root": root,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "integral": rho.integral_twice() / 2,
                "pieces": pieces,
                "critical_values": critical_values(&rho),
            }))
        }
    };
    emit(args.out.as_deref(), &text)
}
