//! Batch verification runs over the process catalog.
//!
//! Subcommands:
//!   run <config>       execute the selected checks, write manifest,
//!                      reports, tables, and optional plots
//!   catalog            print the growth-function and moderate catalogs
//!   replay <manifest>  re-run a finished run from its manifest alone

mod config;
mod jobs;
mod outputs;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::RunConfig;
use jobs::{build_jobs, exit_code, verdict_summary};
use outputs::{canonical_json, csv_table, envelope_svg, write_atomic};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use suprema::verify::CheckReport;

#[derive(Parser)]
#[command(
    name = "suprema",
    version,
    about = "growth-envelope verification harness for diffusion maxima"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks selected in a config file
    Run {
        config: PathBuf,
        /// override the master seed
        #[arg(long)]
        seed: Option<u64>,
        /// override the worker count (0 = library default)
        #[arg(long)]
        workers: Option<usize>,
        /// override the output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// override the path count
        #[arg(long)]
        n_paths: Option<usize>,
    },
    /// Print the process growth catalog and moderate descriptors
    Catalog,
    /// Re-run from a manifest; outputs are byte-identical to the original
    Replay {
        manifest: PathBuf,
        /// output directory for the replayed run
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    version: String,
    resolved_config: RunConfig,
    check_names: Vec<String>,
    verdicts: BTreeMap<String, String>,
    exit_code: i32,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            out,
            n_paths,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(n) = n_paths {
                cfg.n_paths = n;
            }
            if let Some(o) = out {
                cfg.out_dir = Some(o.to_string_lossy().into_owned());
            }
            cfg.validate()?;
            execute(cfg)
        }
        Command::Catalog => {
            print!("{}", catalog_text());
            Ok(0)
        }
        Command::Replay { manifest, out } => {
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("cannot read manifest {}", manifest.display()))?;
            let m: Manifest = serde_json::from_str(&text).context("manifest parse error")?;
            let mut cfg = m.resolved_config;
            let out_dir = out.unwrap_or_else(|| {
                PathBuf::from(format!("{}-replay", cfg.resolve_out_dir().display()))
            });
            cfg.out_dir = Some(out_dir.to_string_lossy().into_owned());
            cfg.validate()?;
            execute(cfg)
        }
    }
}

fn execute(cfg: RunConfig) -> Result<i32> {
    let out_dir = cfg.resolve_out_dir();
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("output directory {} not writable", out_dir.display()))?;

    let jobs = build_jobs(&cfg);
    let check_names: Vec<String> = jobs.iter().map(|j| j.name.clone()).collect();

    // independent jobs on a dedicated pool; output writing stays on this
    // thread afterwards, in deterministic order
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .context("worker pool")?;
    let results: Vec<Result<Vec<CheckReport>>> = pool.install(|| {
        use rayon::prelude::*;
        jobs.into_par_iter().map(|j| j.execute()).collect()
    });
    let mut reports: Vec<CheckReport> = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name));

    for report in &reports {
        let safe = sanitize(&report.name);
        write_atomic(
            &out_dir.join("reports").join(format!("{safe}.json")),
            &canonical_json(report)?,
        )?;
        for table in &report.tables {
            write_atomic(
                &out_dir
                    .join("tables")
                    .join(format!("{}.csv", sanitize(&table.name))),
                &csv_table(&table.columns, &table.rows),
            )?;
        }
        if cfg.plots {
            write_plots(&out_dir, report)?;
        }
        let verdict = match report.verdict {
            suprema::verify::Verdict::Pass => "pass",
            suprema::verify::Verdict::Fail => "FAIL",
            suprema::verify::Verdict::Inconclusive => "inconclusive",
        };
        println!("{:<55} {}", report.name, verdict);
    }

    let code = exit_code(&reports);
    // worker count and output location are outside the determinism
    // contract: estimates are invariant to both, so the manifest normalizes
    // them away and artifacts are byte-identical across pool sizes and
    // directories
    let mut manifest_cfg = cfg;
    manifest_cfg.workers = 0;
    manifest_cfg.out_dir = None;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        resolved_config: manifest_cfg,
        check_names,
        verdicts: verdict_summary(&reports),
        exit_code: code,
    };
    write_atomic(&out_dir.join("manifest.json"), &canonical_json(&manifest)?)?;
    Ok(code)
}

/// Envelope tables carry one block per moderate function; plot each block.
fn write_plots(out_dir: &Path, report: &CheckReport) -> Result<()> {
    if !report.name.starts_with("two_sided.") {
        return Ok(());
    }
    for table in &report.tables {
        // columns: moderate, t, ratio, ci_lo, ci_hi, mean_f_sup, se, f_of_g
        let mut by_f: BTreeMap<u64, Vec<suprema::montecarlo::EnvelopePoint>> = BTreeMap::new();
        for row in &table.rows {
            by_f.entry(row[0] as u64)
                .or_default()
                .push(suprema::montecarlo::EnvelopePoint {
                    t: row[1],
                    ratio: row[2],
                    ci_lo: row[3],
                    ci_hi: row[4],
                    mean_f_sup: row[5],
                    se: row[6],
                    f_of_g: row[7],
                });
        }
        for (fi, points) in by_f {
            let name = format!("{}_f{}", sanitize(&table.name), fi);
            let svg = envelope_svg(&format!("{} (moderate #{fi})", table.name), &points);
            write_atomic(&out_dir.join("plots").join(format!("{name}.svg")), &svg)?;
        }
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn catalog_text() -> String {
    use suprema::analytic::{Growth, GrowthKind};
    let entries: Vec<(&str, GrowthKind, &str)> = vec![
        ("OU", GrowthKind::Ou { alpha: 1.0 }, "ou-envelope"),
        (
            "BMDrift",
            GrowthKind::BmDriftLog { mu: 1.0 },
            "drifted-bm-envelope",
        ),
        (
            "ReflectedBMDrift",
            GrowthKind::BmDriftLog { mu: 1.0 },
            "reflected-drifted-bm-envelope",
        ),
        (
            "CIR",
            GrowthKind::Cir {
                a: 1.0,
                b: -1.0,
                c: 1.0,
            },
            "cir-envelope",
        ),
        ("BESQ", GrowthKind::Besq, "squared-bessel-envelope"),
        ("Bessel", GrowthKind::Bessel, "bessel-envelope"),
        (
            "RadialOU",
            GrowthKind::RadialOu { ab: 1.0 },
            "radial-ou-envelope",
        ),
        (
            "ComplexOU",
            GrowthKind::ComplexOu { a: 1.0 },
            "complex-ou-envelope",
        ),
        ("ComplexBM", GrowthKind::ComplexBm, "complex-bm-envelope"),
        (
            "ComplexBM (normalized)",
            GrowthKind::ComplexBmNormalized,
            "complex-bm-normalized-envelope",
        ),
    ];
    let mut out = String::from("Process growth catalog:\n");
    for (name, kind, tag) in entries {
        let formula = Growth::new(kind).formula();
        // parameter symbols in display form
        let formula = formula.replace("αt", "αt").replace("μ√t", "μ√t");
        out.push_str(&format!("  {name}: g(t) = {formula}   [{tag}]\n"));
    }
    out.push_str("\nModerate function descriptors:\n");
    out.push_str("  pow:p       F(x) = x^p, p > 0            (example: pow:2)\n");
    out.push_str("  powlog:p,q  F(x) = x^p log^q(1+x)        (example: powlog:1,1)\n");
    out.push_str("\nBuilt-in moderate catalog:\n");
    for f in suprema::moderate::catalog() {
        let c = f.certificate();
        out.push_str(&format!(
            "  {:<14} doubling ratio at beta=2: {:.6}\n",
            f.descriptor(),
            c.sup_ratio
        ));
    }
    out
}
