//! Batch front end: spectra, verification campaigns, the K_n table, the
//! dumbbell sharpness sweep, and mesh import/export.
//!
//! Exit codes: 0 ok, 1 inconclusive, 2 solver error, 3 config error,
//! 4 violation.

mod parse;

use clap::{Args, Parser, Subcommand};
use eigenlab::eigensolve::{analytic_spectrum, fem_spectrum};
use eigenlab::geometry::{export_mesh, generate_mesh, import_mesh, DomainSpec};
use eigenlab::specfun::kn_constant;
use eigenlab::sphere::ConformalFactor;
use eigenlab::verify::{
    emit_report, run_campaign, sharpness_sweep, verify_corollary, verify_sphere_pair,
    verify_theorem_domain, verify_wang_xia, DomainRunOptions, ReportFormat, SphereRunOptions,
    Verdict, VerificationRecord,
};
use eigenlab::Error;
use parse::{parse_domain, parse_number};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_VIOLATED: u8 = 4;

#[derive(Parser)]
#[command(name = "eigenlab", about = "Reciprocal eigenvalue sum verification laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker pool size for campaigns.
    #[arg(long)]
    jobs: Option<usize>,
    /// Deterministic seed for solver starts.
    #[arg(long)]
    seed: Option<u64>,
    /// Eigensolver residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Include wall-clock timings in reports (breaks byte determinism).
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a Neumann spectrum and write it as JSON.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Domain, e.g. rectangle:3.14159,1.570796 or disk:1.
        #[arg(long)]
        domain: Option<String>,
        /// Number of eigenvalues.
        #[arg(long)]
        k: Option<usize>,
        /// Mesh size: forces the finite-element path on 2D families.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Run a verification suite and emit a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// One of: domain, wangxia, corollary, sphere1, sphere2, sphere.
        #[arg(long)]
        theorem: Option<String>,
        /// Domain spec (repeatable).
        #[arg(long = "spec")]
        specs: Vec<String>,
        /// Conformal factor JSON file (repeatable).
        #[arg(long = "metric")]
        metrics: Vec<PathBuf>,
        /// Harmonic truncation degree for sphere checks.
        #[arg(long = "L")]
        degree: Option<usize>,
        /// Mesh size for FEM domains.
        #[arg(long)]
        h: Option<f64>,
        /// Report format: json or csv.
        #[arg(long)]
        format: Option<String>,
    },
    /// Print the K_n table for a range of dimensions.
    Kn { from: Option<usize>, to: Option<usize> },
    /// Dumbbell sharpness sweep toward the two-disk limit.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated neck half-widths.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        lobe_radius: Option<f64>,
        #[arg(long)]
        neck_length: Option<f64>,
        /// Base mesh size (tightened automatically for thin necks).
        #[arg(long)]
        h: Option<f64>,
        /// Report format: json or csv.
        #[arg(long)]
        format: Option<String>,
    },
    /// Mesh file utilities.
    Mesh {
        #[command(subcommand)]
        action: MeshAction,
    },
}

#[derive(Subcommand)]
enum MeshAction {
    /// Triangulate a domain and write the mesh file.
    Export {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read and validate a mesh file (optionally rewrite it).
    Import {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Range(_) | Error::Domain(_) | Error::Config(_) | Error::Parse { .. } | Error::Io(_) => {
            EXIT_CONFIG
        }
        Error::Solver { .. } | Error::Precondition(_) | Error::Mesh(_) => EXIT_SOLVER,
    }
}

/// Config file section for this subcommand; flags override these values.
fn config_section(path: &Option<PathBuf>, section: &str) -> Result<serde_json::Value, Error> {
    let Some(p) = path else {
        return Ok(serde_json::json!({}));
    };
    let text = std::fs::read_to_string(p)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("bad config file: {e}")))?;
    Ok(v.get(section).cloned().unwrap_or(serde_json::json!({})))
}

fn cfg_f64(section: &serde_json::Value, key: &str) -> Option<f64> {
    section.get(key).and_then(|v| v.as_f64())
}

fn cfg_u64(section: &serde_json::Value, key: &str) -> Option<u64> {
    section.get(key).and_then(|v| v.as_u64())
}

fn cfg_str(section: &serde_json::Value, key: &str) -> Option<String> {
    section.get(key).and_then(|v| v.as_str()).map(String::from)
}

fn parse_format(s: Option<String>) -> Result<ReportFormat, Error> {
    match s.as_deref() {
        None | Some("json") => Ok(ReportFormat::Json),
        Some("csv") => Ok(ReportFormat::Csv),
        Some(other) => Err(Error::Config(format!("unknown format `{other}`"))),
    }
}

fn is_analytic(spec: &DomainSpec) -> bool {
    match spec {
        DomainSpec::Disk { .. }
        | DomainSpec::Rectangle { .. }
        | DomainSpec::Ball3 { .. }
        | DomainSpec::Box3 { .. } => true,
        DomainSpec::DisjointUnion { components } => components.iter().all(|c| is_analytic(&c.spec)),
        _ => false,
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn summarize(records: &[VerificationRecord]) -> u8 {
    let mut code = EXIT_OK;
    for r in records {
        eprintln!(
            "{:>18}  {:<28}  margin {:+.6e}  uncertainty {:.2e}  {:?}",
            r.theorem_id, r.input, r.margin, r.uncertainty, r.verdict
        );
        match r.verdict {
            Verdict::Violated => return EXIT_VIOLATED,
            Verdict::Inconclusive => code = code.max(EXIT_INCONCLUSIVE),
            Verdict::Holds => {}
        }
    }
    code
}

fn emit_records(
    records: &[VerificationRecord],
    out: &Option<PathBuf>,
    format: ReportFormat,
    timings: bool,
) -> Result<(), Error> {
    if let Some(path) = out {
        emit_report(records, path, format, timings)
    } else {
        let text = match format {
            ReportFormat::Json => eigenlab::verify::records_to_json(records, timings),
            ReportFormat::Csv => eigenlab::verify::records_to_csv(records, timings),
        };
        println!("{text}");
        Ok(())
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Spectrum { common, domain, k, h } => {
            let section = config_section(&common.config, "spectrum")?;
            let domain = domain
                .or_else(|| cfg_str(&section, "domain"))
                .ok_or_else(|| Error::Config("spectrum needs --domain".into()))?;
            let k = k
                .or_else(|| cfg_u64(&section, "k").map(|v| v as usize))
                .unwrap_or(5);
            let h = h.or_else(|| cfg_f64(&section, "h"));
            let tol = common.tol.or_else(|| cfg_f64(&section, "tol")).unwrap_or(1e-6);
            let seed = common.seed.or_else(|| cfg_u64(&section, "seed")).unwrap_or(0);
            let spec = parse_domain(&domain)?;
            let result = if h.is_none() && is_analytic(&spec) {
                analytic_spectrum(&spec, k)?
            } else {
                if spec.dim() != 2 {
                    return Err(Error::Config(
                        "finite elements cover 2D families only; 3D is analytic".into(),
                    ));
                }
                let mesh = generate_mesh(&spec, h.unwrap_or(0.03))?;
                fem_spectrum(&mesh, k, tol, seed)?
            };
            let text = serde_json::to_string_pretty(&result.to_report())
                .expect("spectrum report serializes");
            write_or_print(&common.out, &text)?;
            Ok(EXIT_OK)
        }

        Command::Verify { common, theorem, specs, metrics, degree, h, format } => {
            let section = config_section(&common.config, "verify")?;
            let theorem = theorem
                .or_else(|| cfg_str(&section, "theorem"))
                .ok_or_else(|| Error::Config("verify needs --theorem".into()))?;
            let format = parse_format(format.or_else(|| cfg_str(&section, "format")))?;
            let jobs = common
                .jobs
                .or_else(|| cfg_u64(&section, "jobs").map(|v| v as usize))
                .unwrap_or(2);
            let seed = common.seed.or_else(|| cfg_u64(&section, "seed")).unwrap_or(0x5eed);
            let opts = DomainRunOptions {
                target_h: h.or_else(|| cfg_f64(&section, "h")).unwrap_or(0.03),
                eigen_tol: common.tol.or_else(|| cfg_f64(&section, "tol")).unwrap_or(1e-6),
                seed,
                with_certificate: true,
            };

            let records: Vec<VerificationRecord> = match theorem.as_str() {
                "domain" | "wangxia" | "corollary" => {
                    if specs.is_empty() {
                        return Err(Error::Config("verify needs at least one --spec".into()));
                    }
                    let parsed: Result<Vec<DomainSpec>, Error> =
                        specs.iter().map(|s| parse_domain(s)).collect();
                    let parsed = parsed?;
                    let results = run_campaign(parsed, jobs, |spec| match theorem.as_str() {
                        "domain" => verify_theorem_domain(spec, &opts),
                        "wangxia" => verify_wang_xia(spec, &opts),
                        _ => verify_corollary(spec, &opts),
                    });
                    results.into_iter().collect::<Result<Vec<_>, _>>()?
                }
                "sphere" | "sphere1" | "sphere2" => {
                    if metrics.is_empty() {
                        return Err(Error::Config("verify needs at least one --metric file".into()));
                    }
                    let sopts = SphereRunOptions {
                        degree: degree
                            .or_else(|| cfg_u64(&section, "L").map(|v| v as usize))
                            .unwrap_or(20),
                    };
                    let mut all = Vec::new();
                    for path in &metrics {
                        let u = ConformalFactor::load(path)?;
                        let label = path
                            .file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_else(|| path.display().to_string());
                        let pair = verify_sphere_pair(&u, &label, &sopts)?;
                        match theorem.as_str() {
                            "sphere1" => all.push(pair.into_iter().next().expect("first record")),
                            "sphere2" => all.push(pair.into_iter().nth(1).expect("second record")),
                            _ => all.extend(pair),
                        }
                    }
                    all
                }
                other => {
                    return Err(Error::Config(format!(
                        "unknown theorem `{other}` (expected domain, wangxia, corollary, sphere1, sphere2, sphere)"
                    )))
                }
            };

            emit_records(&records, &common.out, format, common.timings)?;
            Ok(summarize(&records))
        }

        Command::Kn { from, to } => {
            let (from, to) = match (from, to) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Config("usage: kn <from> <to>".into())),
            };
            if from < 2 || to < from {
                return Err(Error::Config(format!("empty or invalid range [{from}, {to}]")));
            }
            for n in from..=to {
                println!("K_{n} = {:.12}", kn_constant(n)?);
            }
            Ok(EXIT_OK)
        }

        Command::Sweep { common, eps, lobe_radius, neck_length, h, format } => {
            let section = config_section(&common.config, "sweep")?;
            let format = parse_format(format.or_else(|| cfg_str(&section, "format")))?;
            let eps_text = eps
                .or_else(|| cfg_str(&section, "eps"))
                .unwrap_or_else(|| "0.5,0.2,0.1,0.05".into());
            let eps_list: Result<Vec<f64>, Error> =
                eps_text.split(',').map(parse_number).collect();
            let eps_list = eps_list?;
            let opts = DomainRunOptions {
                target_h: h.or_else(|| cfg_f64(&section, "h")).unwrap_or(0.035),
                eigen_tol: common.tol.or_else(|| cfg_f64(&section, "tol")).unwrap_or(1e-6),
                seed: common.seed.or_else(|| cfg_u64(&section, "seed")).unwrap_or(0x5eed),
                with_certificate: false,
            };
            let records = sharpness_sweep(
                lobe_radius.or_else(|| cfg_f64(&section, "lobe_radius")).unwrap_or(1.0),
                neck_length.or_else(|| cfg_f64(&section, "neck_length")).unwrap_or(0.5),
                &eps_list,
                &opts,
            )?;
            emit_records(&records, &common.out, format, common.timings)?;
            Ok(summarize(&records))
        }

        Command::Mesh { action } => match action {
            MeshAction::Export { domain, h, out } => {
                let spec = parse_domain(&domain)?;
                let mesh = generate_mesh(&spec, h)?;
                export_mesh(&mesh, &out)?;
                eprintln!(
                    "wrote {} vertices, {} triangles to {}",
                    mesh.num_vertices(),
                    mesh.num_triangles(),
                    out.display()
                );
                Ok(EXIT_OK)
            }
            MeshAction::Import { path, out } => {
                let mesh = import_mesh(&path)?;
                eprintln!(
                    "valid mesh: {} vertices, {} triangles, {} boundary edges, h = {:.6}",
                    mesh.num_vertices(),
                    mesh.num_triangles(),
                    mesh.boundary_edges.len(),
                    mesh.h
                );
                if let Some(out) = out {
                    export_mesh(&mesh, &out)?;
                }
                Ok(EXIT_OK)
            }
        },
    }
}
