mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qsiegel_core::catalog;
use qsiegel_core::certifier::{certify_all, check_orbit_multiplicity, CertifyConfig};
use qsiegel_core::domain::SiegelPoint;
use qsiegel_core::integrals::{bergman_kernel, Method};
use qsiegel_core::json::PointJson;
use qsiegel_core::kernel::{build_kernel_params, gram_psd_report, lambda_status, LambdaStatus};
use qsiegel_core::linalg::{CVec, RVec};
use qsiegel_core::sampling::{domain_point, stream_rng};
use qsiegel_core::spaces::BaseSpaces;
use qsiegel_core::specfile::{DomainSpecFile, Loaded};
use qsiegel_core::Tolerances;

/// Multiplicity-freeness certificates and invariant kernels on
/// quasi-symmetric Siegel domains.
#[derive(Parser)]
#[command(name = "qsiegel", version)]
struct Cli {
    /// Tolerance override KEY=VALUE (keys: zero, rank, cone, sub, psd, eig); repeatable.
    #[arg(long, global = true, value_parser = parse::tolerance)]
    tol: Vec<(String, f64)>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run all certifiers on W and check that they agree.
    Check {
        /// Spec file, or `@entry[:variant]` for a catalog entry.
        spec: String,
        /// Samples for the metric proportionality estimate (0 skips it).
        #[arg(long, default_value_t = 200_000)]
        metric_samples: usize,
    },
    /// Gram matrix of the extremal kernel L^{x,χ} at random points.
    Kernels {
        spec: String,
        /// Comma-separated coordinates of x in U.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Character in real V-coordinates; projected onto S.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Bergman kernel K(p1, p2); points are z coordinates followed by v.
    Bergman {
        spec: String,
        /// Comma-separated complex numbers such as `i,0` or `1+2i,0.5-i`.
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Orbit multiplicity-one test at x.
    Orbit {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// List catalog entries, or export one as a spec file.
    Catalog {
        /// `entry[:variant]`
        #[arg(long)]
        export: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Quadrature,
    Mc,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Mc => Method::MonteCarlo,
        }
    }
}

/// Input problems exit with 1, certifier disagreement with 2.
struct Outcome {
    report: Value,
    inconsistent: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // exit status 2 is reserved for disagreeing certifiers
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report).expect("reports serialize") + "\n";
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if out.inconsistent {
                eprintln!("error: certifiers disagree");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn tolerances(cli: &Cli, base: Option<Tolerances>) -> Result<Option<Tolerances>> {
    if cli.tol.is_empty() {
        return Ok(base);
    }
    let mut t = base.unwrap_or_default();
    for (k, v) in &cli.tol {
        let slot = match k.as_str() {
            "zero" => &mut t.zero,
            "rank" => &mut t.rank,
            "cone" => &mut t.cone,
            "sub" => &mut t.sub,
            "psd" => &mut t.psd,
            "eig" => &mut t.eig,
            other => bail!("unknown tolerance '{other}'"),
        };
        *slot = *v;
    }
    Ok(Some(t))
}

fn read_spec(arg: &str) -> Result<DomainSpecFile> {
    if let Some(id) = arg.strip_prefix('@') {
        let (entry, variant) = catalog::resolve(id)?;
        return Ok(DomainSpecFile::from_catalog(&entry, &variant));
    }
    let text = std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?;
    Ok(DomainSpecFile::from_json(&text)?)
}

fn load(cli: &Cli, arg: &str) -> Result<Loaded> {
    let spec = read_spec(arg)?;
    let tol = tolerances(cli, spec.tolerances)?;
    Ok(spec.load(tol)?)
}

fn seed(cli: &Cli, loaded: &Loaded) -> u64 {
    cli.seed.or(loaded.sampling.and_then(|s| s.seed)).unwrap_or(0)
}

fn samples(cli: &Cli, loaded: &Loaded) -> Option<usize> {
    cli.samples.or(loaded.sampling.and_then(|s| s.samples))
}

fn element(s: &str, dim: usize, what: &str) -> Result<RVec> {
    let v = parse::real_list(s).with_context(|| format!("parsing {what}"))?;
    if v.len() != dim {
        bail!("{what} needs {dim} coordinates, got {}", v.len());
    }
    Ok(RVec::from_vec(v))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let report = match &cli.cmd {
        Cmd::Check { spec, metric_samples } => {
            let l = load(cli, spec)?;
            let mut cfg = CertifyConfig { seed: seed(cli, &l), metric_samples: *metric_samples, ..Default::default() };
            if let Some(n) = samples(cli, &l) {
                if n == 0 {
                    bail!("--samples must be positive");
                }
                cfg.coisotropic_samples = n;
                cfg.orthocomplement_samples = n;
                cfg.orbit_samples = n;
            }
            let r = certify_all(&l.domain, &l.w, &cfg)?;
            let inconsistent = !r.consistent;
            return Ok(Outcome { report: serde_json::to_value(&r)?, inconsistent });
        }
        Cmd::Kernels { spec, x, chi, points } => {
            let l = load(cli, spec)?;
            let dom = &l.domain;
            let x = element(x, dom.dim_u(), "--x")?;
            let m = 2 * dom.n();
            let chi = match chi {
                Some(c) => element(c, m, "--chi")?,
                None => RVec::zeros(m),
            };
            let s = BaseSpaces::new(dom, &l.w).s;
            let chi = s.project(&chi);
            let k = match lambda_status(dom, &l.w, &x)? {
                LambdaStatus::In { k } => k,
                other => bail!("x is not in Λ: {other:?}"),
            };
            let params = build_kernel_params(dom, &l.w, &x, &chi)?;
            let seed = seed(cli, &l);
            let pts: Vec<SiegelPoint> = (0..*points).map(|i| domain_point(dom, &mut stream_rng(seed, i as u64))).collect();
            let gram = gram_psd_report(dom, &params, &pts)?;
            json!({
                "x": x.as_slice(),
                "k": k,
                "chi": chi.as_slice(),
                "seed": seed,
                "gram": gram,
                "verdict": if gram.psd { "PSD" } else { "not PSD" },
            })
        }
        Cmd::Bergman { spec, p1, p2, method } => {
            let l = load(cli, spec)?;
            let dom = &l.domain;
            let point = |s: &str, name: &str| -> Result<SiegelPoint> {
                let p = parse::complex_list(s).with_context(|| format!("parsing {name}"))?;
                let nn = dom.dim_u();
                if p.len() != nn + dom.n() {
                    bail!("{name} needs {} complex coordinates (z then v), got {}", nn + dom.n(), p.len());
                }
                let pt = SiegelPoint::new(CVec::from_column_slice(&p[..nn]), CVec::from_column_slice(&p[nn..]));
                if !dom.contains(&pt) {
                    return Err(anyhow!("{name} is not in the domain"));
                }
                Ok(pt)
            };
            let (a, b) = (point(p1, "--p1")?, point(p2, "--p2")?);
            let est = bergman_kernel(dom, &a, &b, (*method).into(), samples(cli, &l).unwrap_or(1_000_000), seed(cli, &l))?;
            json!({ "p1": PointJson::from(&a), "p2": PointJson::from(&b), "kernel": est })
        }
        Cmd::Orbit { spec, x } => {
            let l = load(cli, spec)?;
            let x = element(x, l.domain.dim_u(), "--x")?;
            let c = check_orbit_multiplicity(&l.domain, &l.w, &x)?;
            json!({ "multiplicity_one": c.verdict, "certificate": c })
        }
        Cmd::Catalog { export: Some(id) } => {
            let (entry, variant) = catalog::resolve(id)?;
            serde_json::to_value(DomainSpecFile::from_catalog(&entry, &variant))?
        }
        Cmd::Catalog { export: None } => {
            let mut entries = Vec::new();
            for name in catalog::catalog_list() {
                let e = catalog::catalog_get(name)?;
                let vars: Vec<Value> = e
                    .variants
                    .iter()
                    .map(|v| json!({ "name": v.name, "basis": v.basis, "expected_mf": v.expected_mf, "note": v.note }))
                    .collect();
                entries.push(json!({ "name": e.name, "algebra": format!("{:?}", e.algebra), "variants": vars }));
            }
            Value::Array(entries)
        }
    };
    Ok(Outcome { report, inconsistent: false })
}
