//! Scenario execution: binds validated configs to the core library and
//! writes the per-command artifacts plus a checksummed manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;

use sim_core::{
    branch_probability_sum_brute_force_with_cap, collapse_decay_curve, compress_branches_with_cap,
    holographic_ratio, infinite_product_classify, particle_horizon, simulate_finite_collapse,
    solve_scale_factor, born_convergence_table, BranchError, RngStream,
};

use crate::config::{Payload, Scenario, SumMethod};
use crate::output::{fmt_f64, CsvBuilder, Manifest, OutputDir, OutputError};

/// Default output directory when neither --out, the config, nor
/// [`OUTPUT_DIR_ENV`] provides one.
pub const DEFAULT_OUTPUT_DIR: &str = "sim-out";

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SIM_OUTPUT_DIR";

#[derive(Debug)]
pub enum RunError {
    /// A module reported a numeric/domain failure.
    Numeric(String),
    /// Filesystem failure.
    Io(OutputError),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            Self::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<OutputError> for RunError {
    fn from(e: OutputError) -> Self {
        Self::Io(e)
    }
}

fn numeric(e: impl std::fmt::Display) -> RunError {
    RunError::Numeric(e.to_string())
}

/// Everything a finished run leaves behind.
#[derive(Debug)]
pub struct ReportBundle {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
}

/// Resolves the effective output directory from override, config, then
/// environment, then the default.
pub fn resolve_output_dir(scenario: &Scenario, out_override: Option<&Path>) -> PathBuf {
    if let Some(dir) = out_override {
        return dir.to_path_buf();
    }
    if let Some(dir) = &scenario.output_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(DEFAULT_OUTPUT_DIR)
}

/// Runs a validated scenario. Deterministic given (scenario, seed): reruns
/// produce byte-identical artifacts.
pub fn run_scenario(scenario: &Scenario, output_dir: &Path) -> Result<ReportBundle, RunError> {
    let mut out = OutputDir::create(output_dir)?;
    match &scenario.payload {
        Payload::Horizon { model, range } => {
            let curve = solve_scale_factor(
                model,
                range.t_i,
                range.t_f,
                range.a_i,
                scenario.tolerances.grid,
            )
            .map_err(numeric)?;
            write_curve_csv(&mut out, &curve)?;

            let mut csv = CsvBuilder::new(&["t", "R_P", "chi", "err_est"]);
            for &t in &range.times {
                let h = particle_horizon(&curve, t).map_err(numeric)?;
                csv.row(&[
                    fmt_f64(t),
                    fmt_f64(h.proper_radius),
                    fmt_f64(h.comoving_radius),
                    fmt_f64(h.quadrature_error_estimate),
                ]);
            }
            out.write("horizon.csv", &csv.into_string())?;
        }
        Payload::Bound {
            model,
            range,
            entropy_density,
            planck_length,
        } => {
            let curve = solve_scale_factor(
                model,
                range.t_i,
                range.t_f,
                range.a_i,
                scenario.tolerances.grid,
            )
            .map_err(numeric)?;
            write_curve_csv(&mut out, &curve)?;

            let mut csv = CsvBuilder::new(&["t", "R_P", "ratio", "satisfied"]);
            for &t in &range.times {
                let h = particle_horizon(&curve, t).map_err(numeric)?;
                let ratio = holographic_ratio(&curve, t, *entropy_density, *planck_length)
                    .map_err(numeric)?;
                csv.row(&[
                    fmt_f64(t),
                    fmt_f64(h.proper_radius),
                    fmt_f64(ratio),
                    if ratio <= 1.0 { "1".into() } else { "0".into() },
                ]);
            }
            out.write("bound.csv", &csv.into_string())?;
        }
        Payload::Branches { state, n, method } => {
            let caps = &scenario.tolerances;
            let brute = match method {
                SumMethod::Compressed => None,
                SumMethod::BruteForce | SumMethod::Auto => {
                    match branch_probability_sum_brute_force_with_cap(
                        state,
                        *n,
                        caps.enumeration_cap,
                    ) {
                        Ok(total) => Some(total),
                        Err(BranchError::EnumerationTooLarge { .. })
                            if *method == SumMethod::Auto =>
                        {
                            None
                        }
                        Err(e) => return Err(numeric(e)),
                    }
                }
            };
            let ensemble =
                compress_branches_with_cap(state, *n as u64, caps.table_cap).map_err(numeric)?;

            let k = state.dimension();
            let mut header: Vec<String> = (1..=k).map(|i| format!("c_{i}")).collect();
            header.push("log_multiplicity".into());
            header.push("log_prob".into());
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut csv = CsvBuilder::new(&header_refs);
            for entry in ensemble.entries() {
                let mut row: Vec<String> =
                    entry.counts.iter().map(|c| c.to_string()).collect();
                row.push(fmt_f64(entry.log_multiplicity));
                row.push(fmt_f64(entry.log_probability));
                csv.row(&row);
            }
            out.write("ensemble.csv", &csv.into_string())?;

            #[derive(Serialize)]
            struct BranchSummary {
                n: u64,
                k: usize,
                table_entries: usize,
                probability_sum_compressed: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                probability_sum_brute_force: Option<f64>,
            }
            let summary = BranchSummary {
                n: *n as u64,
                k,
                table_entries: ensemble.len(),
                probability_sum_compressed: ensemble.total_probability(),
                probability_sum_brute_force: brute,
            };
            out.write(
                "summary.json",
                &format!("{}\n", serde_json::to_string_pretty(&summary).unwrap()),
            )?;
        }
        Payload::Decay { state, n_list } => {
            let rows = collapse_decay_curve(state, n_list);
            let mut csv = CsvBuilder::new(&["N", "log10_max_branch_prob"]);
            for (n, log10_p) in rows {
                csv.row(&[n.to_string(), fmt_f64(log10_p)]);
            }
            out.write("decay.csv", &csv.into_string())?;
        }
        Payload::CollapseSim { state, n, mode } => {
            let mut rng = RngStream::new(scenario.seed);
            let outcomes = simulate_finite_collapse(state, *n, &mut rng, *mode);
            let mut csv = CsvBuilder::new(&["observer", "outcome"]);
            for (i, o) in outcomes.iter().enumerate() {
                csv.row(&[(i + 1).to_string(), o.to_string()]);
            }
            out.write("outcomes.csv", &csv.into_string())?;

            let mut counts = vec![0u64; state.dimension()];
            for &o in &outcomes {
                counts[o as usize - 1] += 1;
            }
            #[derive(Serialize)]
            struct CollapseSummary {
                mode: &'static str,
                n: usize,
                seed: u64,
                counts: Vec<u64>,
            }
            let summary = CollapseSummary {
                mode: match mode {
                    sim_core::CollapseMode::Correlated => "correlated",
                    sim_core::CollapseMode::Independent => "independent",
                },
                n: *n,
                seed: scenario.seed,
                counts,
            };
            out.write(
                "summary.json",
                &format!("{}\n", serde_json::to_string_pretty(&summary).unwrap()),
            )?;
        }
        Payload::Frequency {
            state,
            outcome,
            n_list,
            trials,
        } => {
            let mut rng = RngStream::new(scenario.seed);
            let rows = born_convergence_table(state, *outcome, n_list, *trials, &mut rng)
                .map_err(numeric)?;
            let mut csv = CsvBuilder::new(&["N", "analytic_var", "empirical_var", "trials", "seed"]);
            for row in rows {
                csv.row(&[
                    row.observers.to_string(),
                    fmt_f64(row.analytic_variance),
                    fmt_f64(row.empirical_variance),
                    row.trials.to_string(),
                    scenario.seed.to_string(),
                ]);
            }
            out.write("convergence.csv", &csv.into_string())?;
        }
        Payload::Products { sequence, cutoff_j } => {
            let analysis = infinite_product_classify(sequence, *cutoff_j).map_err(numeric)?;

            let mut csv = CsvBuilder::new(&["j", "partial_log_product"]);
            for (j, lp) in analysis.partial_log_products.iter().enumerate() {
                csv.row(&[(j + 1).to_string(), fmt_f64(*lp)]);
            }
            out.write("partial_products.csv", &csv.into_string())?;

            #[derive(Serialize)]
            struct ProductReport {
                verdict: &'static str,
                cutoff: usize,
                tail_statistic: f64,
                final_partial_log_product: f64,
            }
            let report = ProductReport {
                verdict: analysis.verdict.as_str(),
                cutoff: analysis.cutoff,
                tail_statistic: analysis.tail_test_statistic,
                final_partial_log_product: analysis.final_partial_log_product(),
            };
            out.write(
                "analysis.json",
                &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
            )?;
        }
    }

    let manifest = out.finish(&scenario.name, scenario.command.as_str(), scenario.seed)?;
    Ok(ReportBundle {
        output_dir: output_dir.to_path_buf(),
        manifest,
    })
}

fn write_curve_csv(out: &mut OutputDir, curve: &sim_core::ScaleFactorCurve) -> Result<(), RunError> {
    let model = curve.model();
    let mut csv = CsvBuilder::new(&["t", "a", "H"]);
    for (t, a, _dadt) in curve.knots() {
        let h = model.hubble_rate(a).map_err(numeric)?;
        csv.row(&[fmt_f64(t), fmt_f64(a), fmt_f64(h)]);
    }
    out.write("curve.csv", &csv.into_string())?;
    Ok(())
}
