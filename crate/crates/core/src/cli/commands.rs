use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::config::{Command, Format, RunConfig};
use super::CliError;
use crate::dynamics::{evolve_states, linear_grid, trace_evolution, tracked_populations, Engine};
use crate::model::{dressed_spectrum, local_spectrum, mirrored_resonance_frequency, resonance_frequency, rwa_validity};
use crate::protocol::{
    efficiency, mirrored_efficiency, mirrored_plan, plan, run_planned, sweep_theta,
};

pub const EVOLVE_HEADER: &str =
    "t_in_1_over_g,p_00dd,p_00uu,p_01uu,concurrence,conditional_concurrence";
pub const COMPARE_HEADER: &str = "t,pop_error_max,leakage,eta34";
pub const SWEEP_HEADER: &str = "theta_over_pi,C_initial,c_bar_analytic,c_bar_mc,std_error,efficiency";

/// Rendered artifact plus an optional one-line summary for the terminal.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub content: String,
    pub summary: Option<String>,
    pub compare: Option<CompareSummary>,
}

impl Report {
    fn plain(content: String) -> Self {
        Self {
            content,
            summary: None,
            compare: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompareSummary {
    pub max_pop_error: f64,
    pub max_leakage: f64,
    pub eta34: Option<f64>,
}

/// Fixed 9-decimal rendering; `-0` prints as `0`.
pub fn fmt_fixed(x: f64) -> String {
    let s = format!("{:.9}", x);
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn ensure_finite(values: &[f64], what: &str) -> Result<(), CliError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("non-finite value in {what}")))
    }
}

fn csv_line(out: &mut String, values: &[f64]) {
    let cells: Vec<String> = values.iter().map(|&v| fmt_fixed(v)).collect();
    out.push_str(&cells.join(","));
    out.push('\n');
}

fn to_json(value: &serde_json::Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Grid in units of 1/g mapped to physical times (identity when g = 0).
fn physical_times(grid: &[f64], g: f64) -> Vec<f64> {
    if g > 0.0 {
        grid.iter().map(|x| x / g).collect()
    } else {
        grid.to_vec()
    }
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Rwa => "rwa",
        Engine::Exact => "exact",
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let eps = local_spectrum(p);
    let (dressed, eta12, eta34, valid) = match dressed_spectrum(p) {
        Ok(d) => {
            let v = rwa_validity(p)?;
            (Some(d.energies().to_vec()), Some(d.eta12), Some(d.eta34), Some(v.valid))
        }
        Err(crate::Error::DegeneratePulse) => (None, None, None, None),
        Err(e) => return Err(e.into()),
    };
    let mut numbers = eps.as_array().to_vec();
    numbers.extend(dressed.iter().flatten());
    numbers.extend(eta12.iter().chain(eta34.iter()));
    ensure_finite(&numbers, "spectrum")?;
    let value = json!({
        "params": p,
        "eps": eps.as_array(),
        "omega_res": resonance_frequency(p),
        "omega_res_mirrored": mirrored_resonance_frequency(p),
        "dressed_energies": dressed,
        "eta12": eta12,
        "eta34": eta34,
        "rwa_valid": valid,
    });
    Ok(Report::plain(to_json(&value)?))
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let grid = linear_grid(cfg.t_max.unwrap_or(2.0 * PI), cfg.points.unwrap_or(201));
    let times = physical_times(&grid, p.g);
    let trace = trace_evolution(p, &times, cfg.engine, cfg.dt)?;
    let rows: Vec<[f64; 6]> = grid
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let [dd, uu, ud] = trace.populations[k];
            [x, dd, uu, ud, trace.concurrence[k], trace.conditional_concurrence[k]]
        })
        .collect();
    ensure_finite(&rows.concat(), "evolution trace")?;
    let content = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{EVOLVE_HEADER}").unwrap();
            for r in &rows {
                csv_line(&mut out, r);
            }
            out
        }
        Format::Json => {
            let names: Vec<&str> = EVOLVE_HEADER.split(',').collect();
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::Value::Object(
                        names.iter().zip(r).map(|(n, v)| (n.to_string(), json!(v))).collect(),
                    )
                })
                .collect();
            to_json(&json!({
                "command": "evolve",
                "engine": engine_name(cfg.engine),
                "params": p,
                "rows": json_rows,
            }))?
        }
    };
    Ok(Report::plain(content))
}

pub fn cmd_compare_rwa(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let grid = linear_grid(cfg.t_max.unwrap_or(PI), cfg.points.unwrap_or(101));
    let times = physical_times(&grid, p.g);
    let rwa = evolve_states(p, &times, Engine::Rwa, None)?;
    let exact = evolve_states(p, &times, Engine::Exact, cfg.dt)?;
    let eta34 = if p.g > 0.0 { Some(rwa_validity(p)?.eta34) } else { None };

    let mut rows = Vec::with_capacity(grid.len());
    let mut summary = CompareSummary {
        max_pop_error: 0.0,
        max_leakage: 0.0,
        eta34,
    };
    for (k, &x) in grid.iter().enumerate() {
        let a = tracked_populations(&rwa[k]);
        let b = tracked_populations(&exact[k]);
        let err = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        let leakage = (1.0 - b.iter().sum::<f64>()).max(0.0);
        summary.max_pop_error = summary.max_pop_error.max(err);
        summary.max_leakage = summary.max_leakage.max(leakage);
        rows.push((x, err, leakage));
    }
    let flat: Vec<f64> = rows.iter().flat_map(|r| [r.0, r.1, r.2]).collect();
    ensure_finite(&flat, "comparison")?;

    let content = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{COMPARE_HEADER}").unwrap();
            let eta = eta34.map(fmt_fixed).unwrap_or_default();
            for (x, err, leak) in &rows {
                writeln!(out, "{},{},{},{}", fmt_fixed(*x), fmt_fixed(*err), fmt_fixed(*leak), eta).unwrap();
            }
            out
        }
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(x, err, leak)| json!({"t": x, "pop_error_max": err, "leakage": leak, "eta34": eta34}))
                .collect();
            to_json(&json!({
                "command": "compare-rwa",
                "params": p,
                "summary": summary,
                "rows": json_rows,
            }))?
        }
    };
    let line = format!(
        "max population discrepancy {:.3e} (max leakage {:.3e}, eta34 {})",
        summary.max_pop_error,
        summary.max_leakage,
        eta34.map_or_else(|| "undefined".to_string(), |e| format!("{e}"))
    );
    Ok(Report {
        content,
        summary: Some(line),
        compare: Some(summary),
    })
}

pub fn cmd_distill(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = &cfg.params;
    let theta = p.theta;
    let mirrored = cfg.mirror && theta > FRAC_PI_4 + 1e-15;
    let (pl, eff) = if mirrored {
        (mirrored_plan(theta, p.g)?, mirrored_efficiency(theta)?)
    } else {
        (plan(theta, p.g)?, efficiency(theta)?)
    };
    let stats = run_planned(p, &pl, cfg.n_pairs, cfg.seed, cfg.engine)?;
    let c_initial = (2.0 * theta).sin();
    ensure_finite(
        &[pl.t_star, pl.success_probability, stats.c_bar, stats.std_error, eff, c_initial],
        "distillation report",
    )?;
    let content = match cfg.format_or(Format::Json) {
        Format::Json => to_json(&json!({
            "theta": theta,
            "g": pl.g,
            "t_star": pl.t_star,
            "t_star_in_1_over_g": pl.g * pl.t_star,
            "mirrored": mirrored,
            "engine": engine_name(cfg.engine),
            "C_initial": c_initial,
            "success_probability": pl.success_probability,
            "c_bar_analytic": pl.expected_c_bar,
            "efficiency": eff,
            "n_pairs": stats.n_pairs,
            "n_success": stats.n_success,
            "n_maximal": stats.n_maximal,
            "c_bar": stats.c_bar,
            "std_error": stats.std_error,
            "seed": stats.seed,
        }))?,
        Format::Csv => {
            let mut out = String::from(
                "theta,t_star_in_1_over_g,C_initial,c_bar_analytic,c_bar_mc,std_error,efficiency,n_pairs,n_success\n",
            );
            let nums = [theta, pl.g * pl.t_star, c_initial, pl.expected_c_bar, stats.c_bar, stats.std_error, eff];
            let cells: Vec<String> = nums.iter().map(|&v| fmt_fixed(v)).collect();
            writeln!(out, "{},{},{}", cells.join(","), stats.n_pairs, stats.n_success).unwrap();
            out
        }
    };
    let line = format!(
        "{} of {} pairs distilled (c_bar = {:.6} +- {:.6}, expected {:.6})",
        stats.n_success, stats.n_pairs, stats.c_bar, stats.std_error, pl.expected_c_bar
    );
    Ok(Report {
        content,
        summary: Some(line),
        compare: None,
    })
}

/// Default θ grid: 20 evenly spaced points on (0, π/4].
pub fn default_theta_grid() -> Vec<f64> {
    (1..=20).map(|k| FRAC_PI_4 * k as f64 / 20.0).collect()
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let grid = cfg.theta_grid.clone().unwrap_or_else(default_theta_grid);
    let rows = sweep_theta(&grid, &cfg.params, cfg.n_pairs, cfg.seed, cfg.mirror)?;
    let table: Vec<[f64; 6]> = rows
        .iter()
        .map(|r| [r.theta / PI, r.c_initial, r.c_bar_analytic, r.c_bar_mc, r.std_error, r.efficiency])
        .collect();
    ensure_finite(&table.concat(), "sweep")?;
    let content = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "{SWEEP_HEADER}").unwrap();
            for r in &table {
                csv_line(&mut out, r);
            }
            out
        }
        Format::Json => to_json(&json!({
            "command": "sweep",
            "seed": cfg.seed,
            "n_pairs": cfg.n_pairs,
            "rows": rows,
        }))?,
    };
    Ok(Report::plain(content))
}

/// Runs the configured command and returns its rendered output.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::CompareRwa => cmd_compare_rwa(cfg),
        Command::Distill => cmd_distill(cfg),
        Command::Sweep => cmd_sweep(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_formatting() {
        assert_eq!(fmt_fixed(0.0), "0.000000000");
        assert_eq!(fmt_fixed(-0.0), "0.000000000");
        assert_eq!(fmt_fixed(-1e-12), "0.000000000");
        assert_eq!(fmt_fixed(0.8660254037844386), "0.866025404");
        assert_eq!(fmt_fixed(-20.0), "-20.000000000");
        assert_eq!(fmt_fixed(1234567.5), "1234567.500000000");
    }

    #[test]
    fn default_grid_ends_at_quarter_pi() {
        let g = default_theta_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(*g.last().unwrap(), FRAC_PI_4);
        assert!(g[0] > 0.0);
    }
}
