//! The standard experiment suite behind the command-line driver.
//!
//! Each command takes a resolved [`ExperimentConfig`], runs one slice of
//! the laboratory, writes its outputs atomically into a directory, and
//! reports whether its own checks passed. `selftest` runs every command in
//! a fixed order. Outputs are deterministic given the configuration: rerun
//! the same command into two directories and the files agree byte for
//! byte.
//!
//! Every run writes `config.resolved`, the configuration echo with all
//! defaults expanded, so an output directory is self-describing.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::barycenter::log_moment_gradient;
use crate::config::ExperimentConfig;
use crate::contraction::{contraction_check, gap_check};
use crate::csvout::{flag_cell, float_cell, write_atomic, CsvTable};
use crate::dominance::{dominance_margins, sweep_window, window_level_grid};
use crate::error::{Error, Result};
use crate::geometry::model_volume;
use crate::hardy::{chain_check, hardy_limit_sweep};
use crate::hinge::{
    hinge_margins, knot_hinges, random_convex_family, uniform_knots, HingeTransform, ModelHinge,
    SymbolHinge,
};
use crate::holo::{bergman_norm, hardy_norm, Poly};
use crate::levels::{extract_level_set, level_flux, level_perimeter};
use crate::setup::{verify_setup, SetupGrid};
use crate::sphere::{build_volume_corrected_graph, fuglede_deficit};
use crate::symbol::WeightedSymbol;
use crate::{barycenter, hardy};

/// Commands in the order `selftest` runs them.
pub const COMMANDS: &[&str] = &[
    "norms",
    "levelsets",
    "verify-setup",
    "dominance",
    "fuglede",
    "gap",
    "chain",
    "hardy-limit",
    "convex-order",
];

/// Result of one command run.
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    /// All checks of the command held.
    pub pass: bool,
    /// Files the command wrote.
    pub files: Vec<PathBuf>,
    /// One status line per command for the terminal.
    pub summary: String,
}

/// Runs a command by name into `dir`.
pub fn run_command(
    command: &str,
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<CommandOutcome> {
    match command {
        "norms" => run_norms(config, dir),
        "levelsets" => run_levelsets(config, dir),
        "dominance" => run_dominance(config, dir),
        "fuglede" => run_fuglede(config, dir),
        "gap" => run_gap(config, dir),
        "chain" => run_chain(config, dir),
        "hardy-limit" => run_hardy_limit(config, dir),
        "convex-order" => run_convex_order(config, dir),
        "verify-setup" => run_verify_setup(config, dir),
        "selftest" => run_selftest(config, dir),
        other => Err(Error::Config(format!("unknown command `{other}`"))),
    }
}

/// Runs every command of [`COMMANDS`] into `dir`; passes when all pass.
pub fn run_selftest(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for &command in COMMANDS {
        let outcome = run_command(command, config, dir)?;
        pass &= outcome.pass;
        files.extend(outcome.files);
        lines.push(format!(
            "[{}] {}: {}",
            if outcome.pass { "pass" } else { "FAIL" },
            command,
            outcome.summary
        ));
    }
    let report = lines.join("\n") + "\n";
    let report_path = dir.join("selftest.txt");
    write_atomic(&report_path, &report)?;
    files.push(report_path);
    Ok(CommandOutcome {
        pass,
        files,
        summary: format!(
            "{} of {} commands passed",
            COMMANDS.len() - lines.iter().filter(|l| l.starts_with("[FAIL")).count(),
            COMMANDS.len()
        ),
    })
}

fn echo_config(config: &ExperimentConfig, dir: &Path) -> Result<PathBuf> {
    let path = dir.join("config.resolved");
    write_atomic(&path, &config.resolved_text())?;
    Ok(path)
}

fn poly_of(config: &ExperimentConfig) -> Poly {
    Poly::new(config.coeffs.clone())
}

fn setup_grid(config: &ExperimentConfig) -> SetupGrid {
    SetupGrid {
        level_count: config.level_count,
        n_rays: config.n_rays,
        order: config.order,
        n_circ: config.n_circ,
    }
}

/// Gate shared by the commands that require the certified regime.
fn setup_gate(config: &ExperimentConfig, dir: &Path, files: &mut Vec<PathBuf>) -> Result<bool> {
    let f = poly_of(config);
    let cert = verify_setup(
        &f,
        config.params,
        config.radius_bound,
        config.deviation_bound,
        &setup_grid(config),
    )?;
    let path = dir.join("setup.json");
    write_json(&path, &cert)?;
    files.push(path);
    Ok(cert.pass)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidArgument(format!("json encoding failed: {e}")))?;
    write_atomic(path, &(text + "\n"))
}

fn run_norms(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let f = poly_of(config);
    let p = config.params;
    let base = bergman_norm(&f, p.p, p.alpha, config.order, config.n_circ)?;
    let lifted = bergman_norm(&f, config.line.q, config.line.beta, config.order, config.n_circ)?;
    let boundary = hardy_norm(&f, p.p, hardy::BOUNDARY_CIRC);
    let mut table = CsvTable::new(&["quantity", "value"]);
    table.push_row(vec!["bergman_base".into(), float_cell(base)])?;
    table.push_row(vec!["bergman_lifted".into(), float_cell(lifted)])?;
    table.push_row(vec!["hardy_boundary".into(), float_cell(boundary)])?;
    let path = dir.join("norms.csv");
    table.write(&path)?;
    Ok(CommandOutcome {
        pass: true,
        files: vec![echo_config(config, dir)?, path],
        summary: format!(
            "base {base:.10}, lifted {lifted:.10}, boundary {boundary:.10}"
        ),
    })
}

fn run_levelsets(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let f = poly_of(config);
    let symbol = WeightedSymbol::normalized(&f as &dyn crate::holo::Holo, config.params, config.order, config.n_circ)?;
    let levels = window_level_grid(config.params.alpha, config.level_count)?;
    let mut table = CsvTable::new(&[
        "t",
        "mu",
        "mu_star",
        "perimeter",
        "J",
        "regular_flag",
        "bar_re",
        "bar_im",
        "grad0_norm",
    ]);
    let mut regular = 0usize;
    for &t in &levels {
        let mu_star = model_volume(t, &config.params)?;
        let row = match level_row(&symbol, t, config) {
            Ok((mu, perimeter, flux, bar, grad0)) => {
                regular += 1;
                vec![
                    float_cell(t),
                    float_cell(mu),
                    float_cell(mu_star),
                    float_cell(perimeter),
                    float_cell(flux),
                    flag_cell(true),
                    float_cell(bar.re),
                    float_cell(bar.im),
                    float_cell(grad0),
                ]
            }
            Err(_) => vec![
                float_cell(t),
                String::new(),
                float_cell(mu_star),
                String::new(),
                String::new(),
                flag_cell(false),
                String::new(),
                String::new(),
                String::new(),
            ],
        };
        table.push_row(row)?;
    }
    let path = dir.join("levels.csv");
    table.write(&path)?;
    Ok(CommandOutcome {
        pass: regular == levels.len(),
        files: vec![echo_config(config, dir)?, path],
        summary: format!("{regular} of {} levels regular", levels.len()),
    })
}

type LevelRow = (f64, f64, f64, Complex64, f64);

fn level_row(
    symbol: &dyn crate::symbol::LevelSymbol,
    t: f64,
    config: &ExperimentConfig,
) -> Result<LevelRow> {
    let window = sweep_window();
    let graph = extract_level_set(symbol, t, config.n_rays, &window)?;
    let perimeter = level_perimeter(&graph, symbol)?;
    let flux = level_flux(&graph, symbol)?;
    let bar = barycenter::hyperbolic_barycenter(&graph)?;
    let grad0 = log_moment_gradient(&graph, Complex64::new(0.0, 0.0))?.norm();
    Ok((graph.volume, perimeter, flux, bar.point, grad0))
}

#[derive(Serialize)]
struct DominanceSummary {
    anchor_index: usize,
    anchor_level: f64,
    min_post_anchor_margin: f64,
    max_margin: f64,
    setup_pass: bool,
    pass: bool,
}

fn run_dominance(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    let setup_pass = setup_gate(config, dir, &mut files)?;
    let f = poly_of(config);
    let symbol = WeightedSymbol::normalized(
        &f as &dyn crate::holo::Holo,
        config.params,
        config.order,
        config.n_circ,
    )?;
    let levels = window_level_grid(config.params.alpha, config.level_count)?;
    let report = dominance_margins(&symbol, &levels, config.n_rays, &sweep_window())?;

    let mut table = CsvTable::new(&["t", "mu", "mu_star", "margin", "g_margin"]);
    for i in 0..report.levels.len() {
        table.push_row(vec![
            float_cell(report.levels[i]),
            float_cell(report.volumes[i]),
            float_cell(report.model_volumes[i]),
            float_cell(report.margins[i]),
            float_cell(report.g_margins[i]),
        ])?;
    }
    let csv_path = dir.join("dominance.csv");
    table.write(&csv_path)?;
    files.push(csv_path);

    let tol = 1e-6 * config.tolerance_scale;
    let pass = setup_pass && report.min_post_anchor_margin >= -tol;
    let summary = DominanceSummary {
        anchor_index: report.anchor_index,
        anchor_level: report.anchor_level,
        min_post_anchor_margin: report.min_post_anchor_margin,
        max_margin: report.margins.iter().cloned().fold(f64::MIN, f64::max),
        setup_pass,
        pass,
    };
    let json_path = dir.join("dominance.json");
    write_json(&json_path, &summary)?;
    files.push(json_path);
    Ok(CommandOutcome {
        pass,
        files,
        summary: format!(
            "anchor at level {:.6}, min post-anchor margin {:.3e}",
            summary.anchor_level, summary.min_post_anchor_margin
        ),
    })
}

fn run_fuglede(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    let mut pass = true;
    let mut notes = Vec::new();
    for &k in &config.fuglede_harmonics {
        let mut table = CsvTable::new(&["level", "deficit", "w12sq", "ratio"]);
        let mut normalized = Vec::new();
        // The zero-amplitude set must have zero deficit.
        let (ball, _) = build_volume_corrected_graph(config.fuglede_radius, k, 0.0, config.n_rays)?;
        let ball_report = fuglede_deficit(&ball, config.deviation_bound)?;
        pass &= ball_report.deficit.abs() <= 1e-8 * config.tolerance_scale;
        table.push_row(vec![
            float_cell(0.0),
            float_cell(ball_report.deficit),
            float_cell(ball_report.w12_sq),
            float_cell(ball_report.ratio),
        ])?;
        for &eps in &config.fuglede_eps {
            let (graph, _) = build_volume_corrected_graph(config.fuglede_radius, k, eps, config.n_rays)?;
            let report = fuglede_deficit(&graph, config.deviation_bound)?;
            pass &= report.deficit >= 0.0;
            normalized.push(report.deficit / (eps * eps));
            table.push_row(vec![
                float_cell(eps),
                float_cell(report.deficit),
                float_cell(report.w12_sq),
                float_cell(report.ratio),
            ])?;
        }
        for pair in normalized.windows(2) {
            pass &= (pair[1] / pair[0] - 1.0).abs() <= 0.10 * config.tolerance_scale;
        }
        let path = dir.join(format!("fuglede_k{k}.csv"));
        table.write(&path)?;
        files.push(path);
        notes.push(format!(
            "k={k} deficit/eps^2 -> {:.6}",
            normalized.last().copied().unwrap_or(f64::NAN)
        ));
    }
    Ok(CommandOutcome {
        pass,
        files,
        summary: notes.join(", "),
    })
}

#[derive(Serialize)]
struct GapFlags {
    ratios_positive: bool,
    ratios_stable: bool,
    deficit_slope_near_two: bool,
    shape_slope_near_two: bool,
    pass: bool,
}

#[derive(Serialize)]
struct GapSummary {
    eps: Vec<f64>,
    deficit: Vec<f64>,
    shape_integral: Vec<f64>,
    c_observed: Vec<f64>,
    deficit_slopes: Vec<f64>,
    shape_slopes: Vec<f64>,
    max_first_harmonic_share: f64,
    pass_flags: GapFlags,
}

fn run_gap(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    if config.gap_eps.len() < 2 {
        return Err(Error::Config(
            "gap.eps needs at least two amplitudes for the scaling check".into(),
        ));
    }
    let mut table = CsvTable::new(&[
        "eps",
        "deficit",
        "shape_integral",
        "ratio",
        "max_first_harmonic_share",
    ]);
    let mut summary = GapSummary {
        eps: config.gap_eps.clone(),
        deficit: Vec::new(),
        shape_integral: Vec::new(),
        c_observed: Vec::new(),
        deficit_slopes: Vec::new(),
        shape_slopes: Vec::new(),
        max_first_harmonic_share: 0.0,
        pass_flags: GapFlags {
            ratios_positive: true,
            ratios_stable: true,
            deficit_slope_near_two: true,
            shape_slope_near_two: true,
            pass: false,
        },
    };
    for &eps in &config.gap_eps {
        let f = Poly::new(vec![Complex64::new(1.0, 0.0), Complex64::new(eps, 0.0)]);
        let report = gap_check(
            &f,
            &config.line,
            config.level_count,
            config.n_rays,
            config.order,
            config.n_circ,
        )?;
        let ratio = report.ratio.unwrap_or(f64::NAN);
        summary.deficit.push(report.deficit);
        summary.shape_integral.push(report.shape_integral);
        summary.c_observed.push(ratio);
        summary.max_first_harmonic_share = summary
            .max_first_harmonic_share
            .max(report.max_first_harmonic_share);
        table.push_row(vec![
            float_cell(eps),
            float_cell(report.deficit),
            float_cell(report.shape_integral),
            float_cell(ratio),
            float_cell(report.max_first_harmonic_share),
        ])?;
    }
    for i in 0..config.gap_eps.len() - 1 {
        let h = (config.gap_eps[i] / config.gap_eps[i + 1]).ln();
        summary
            .deficit_slopes
            .push((summary.deficit[i] / summary.deficit[i + 1]).ln() / h);
        summary
            .shape_slopes
            .push((summary.shape_integral[i] / summary.shape_integral[i + 1]).ln() / h);
    }
    let flags = &mut summary.pass_flags;
    let scale = config.tolerance_scale;
    flags.ratios_positive = summary.c_observed.iter().all(|&c| c > 0.0);
    flags.ratios_stable = summary
        .c_observed
        .windows(2)
        .all(|w| (w[1] / w[0] - 1.0).abs() <= 0.20 * scale);
    flags.deficit_slope_near_two = summary
        .deficit_slopes
        .iter()
        .all(|&s| (s - 2.0).abs() <= 0.1 * scale);
    flags.shape_slope_near_two = summary
        .shape_slopes
        .iter()
        .all(|&s| (s - 2.0).abs() <= 0.1 * scale);
    flags.pass = flags.ratios_positive
        && flags.ratios_stable
        && flags.deficit_slope_near_two
        && flags.shape_slope_near_two;

    let csv_path = dir.join("gap.csv");
    table.write(&csv_path)?;
    files.push(csv_path);
    let json_path = dir.join("gap.json");
    let pass = summary.pass_flags.pass;
    let line = format!(
        "ratio {:.4} -> {:.4}, deficit slopes {:?}",
        summary.c_observed.first().copied().unwrap_or(f64::NAN),
        summary.c_observed.last().copied().unwrap_or(f64::NAN),
        summary
            .deficit_slopes
            .iter()
            .map(|s| (s * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );
    write_json(&json_path, &summary)?;
    files.push(json_path);
    Ok(CommandOutcome {
        pass,
        files,
        summary: line,
    })
}

fn run_chain(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    let setup_pass = setup_gate(config, dir, &mut files)?;
    let f = poly_of(config);
    let report = chain_check(&f, &config.line, config.order, config.n_circ)?;
    let contraction = contraction_check(&f, &config.line, config.order, config.n_circ)?;
    let mut table = CsvTable::new(&["quantity", "value"]);
    table.push_row(vec!["base_norm".into(), float_cell(report.base_norm)])?;
    table.push_row(vec!["lifted_ratio".into(), float_cell(report.lifted_ratio)])?;
    table.push_row(vec!["hardy_ratio".into(), float_cell(report.hardy_ratio)])?;
    table.push_row(vec![
        "contraction_deficit".into(),
        float_cell(contraction.deficit),
    ])?;
    let path = dir.join("chain.csv");
    table.write(&path)?;
    files.push(path);
    let tol = 1e-8 * config.tolerance_scale;
    let pass = setup_pass
        && report.lifted_ratio <= 1.0 + tol
        && report.hardy_ratio >= 1.0 - tol
        && contraction.deficit >= -tol;
    Ok(CommandOutcome {
        pass,
        files,
        summary: format!(
            "lifted ratio {:.10} <= 1 <= hardy ratio {:.10}",
            report.lifted_ratio, report.hardy_ratio
        ),
    })
}

#[derive(Serialize)]
struct HardyFlags {
    gaps_decrease: bool,
    final_gap_small: bool,
    kernel_bounded_near_endpoint: bool,
    kernel_decreasing: bool,
    pass: bool,
}

#[derive(Serialize)]
struct HardySummary {
    r: f64,
    hardy_norm: f64,
    gammas: Vec<f64>,
    flags: HardyFlags,
}

fn run_hardy_limit(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    let f = poly_of(config);
    let sweep = hardy_limit_sweep(&f, config.hardy_r, &config.gammas, config.order, config.n_circ)?;
    let mut table = CsvTable::new(&["gamma", "a_norm", "k_gamma", "hardy_norm", "gap"]);
    for point in &sweep {
        table.push_row(vec![
            float_cell(point.gamma),
            float_cell(point.weighted_norm),
            float_cell(point.kernel_constant),
            float_cell(point.hardy_norm),
            float_cell(point.gap),
        ])?;
    }
    let csv_path = dir.join("hardy.csv");
    table.write(&csv_path)?;
    files.push(csv_path);

    let boundary = sweep[0].hardy_norm;
    let flags = HardyFlags {
        gaps_decrease: sweep.windows(2).all(|w| w[1].gap <= w[0].gap + 1e-15),
        final_gap_small: sweep.last().unwrap().gap
            < 0.02 * config.tolerance_scale * boundary.max(f64::MIN_POSITIVE),
        kernel_bounded_near_endpoint: sweep.last().unwrap().kernel_constant
            < 1.1 * config.tolerance_scale,
        kernel_decreasing: sweep
            .windows(2)
            .all(|w| w[1].kernel_constant <= w[0].kernel_constant + 1e-12),
        pass: false,
    };
    let pass = flags.gaps_decrease
        && flags.final_gap_small
        && flags.kernel_bounded_near_endpoint
        && flags.kernel_decreasing;
    let summary = HardySummary {
        r: config.hardy_r,
        hardy_norm: boundary,
        gammas: config.gammas.clone(),
        flags: HardyFlags { pass, ..flags },
    };
    let json_path = dir.join("hardy.json");
    write_json(&json_path, &summary)?;
    files.push(json_path);
    Ok(CommandOutcome {
        pass,
        files,
        summary: format!(
            "final gap {:.3e}, kernel at endpoint {:.4}",
            sweep.last().unwrap().gap,
            sweep.last().unwrap().kernel_constant
        ),
    })
}

fn run_convex_order(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let mut files = vec![echo_config(config, dir)?];
    let setup_pass = setup_gate(config, dir, &mut files)?;
    let f = poly_of(config);
    let symbol = WeightedSymbol::normalized(
        &f as &dyn crate::holo::Holo,
        config.params,
        config.order,
        config.n_circ,
    )?;
    let symbol_hinge = SymbolHinge::new(&symbol, config.n_rays, config.order, config.n_circ)?;
    let model_hinge = ModelHinge::new(config.params)?;
    let knots = uniform_knots(config.knot_count)?;
    let symbol_table = knot_hinges(&symbol_hinge, &knots)?;
    let model_table = knot_hinges(&model_hinge, &knots)?;
    let margins = hinge_margins(&symbol_hinge, &model_hinge, &knots)?;

    let mut hinge_csv = CsvTable::new(&["knot", "symbol_hinge", "model_hinge", "margin"]);
    for i in 0..knots.len() {
        hinge_csv.push_row(vec![
            float_cell(knots[i]),
            float_cell(symbol_table[i]),
            float_cell(model_table[i]),
            float_cell(margins[i]),
        ])?;
    }
    let hinge_path = dir.join("hinges.csv");
    hinge_csv.write(&hinge_path)?;
    files.push(hinge_path);

    let tol = 1e-8 * config.tolerance_scale;
    let mean_gap = (symbol_hinge.mean() - model_hinge.mean()).abs();
    let mut pass = setup_pass && mean_gap <= tol && margins.iter().all(|&m| m >= -tol);

    let family = random_convex_family(config.convex_count, &knots, config.seed)?;
    let mut phi_csv = CsvTable::new(&["phi_index", "lhs", "rhs", "margin"]);
    let mut min_margin = f64::INFINITY;
    for (i, phi) in family.iter().enumerate() {
        let lhs = phi.pairing(&symbol_table)?;
        let rhs = phi.pairing(&model_table)?;
        let margin = rhs - lhs;
        min_margin = min_margin.min(margin);
        pass &= margin >= -tol;
        phi_csv.push_row(vec![
            i.to_string(),
            float_cell(lhs),
            float_cell(rhs),
            float_cell(margin),
        ])?;
    }
    let phi_path = dir.join("convex.csv");
    phi_csv.write(&phi_path)?;
    files.push(phi_path);
    Ok(CommandOutcome {
        pass,
        files,
        summary: format!(
            "mean gap {mean_gap:.3e}, min margin over {} test functions {min_margin:.3e}",
            family.len()
        ),
    })
}

fn run_verify_setup(config: &ExperimentConfig, dir: &Path) -> Result<CommandOutcome> {
    let f = poly_of(config);
    let cert = verify_setup(
        &f,
        config.params,
        config.radius_bound,
        config.deviation_bound,
        &setup_grid(config),
    )?;
    let path = dir.join("setup.json");
    write_json(&path, &cert)?;
    Ok(CommandOutcome {
        pass: cert.pass,
        files: vec![echo_config(config, dir)?, path],
        summary: match &cert.reason {
            None => format!("{} levels certified", cert.levels_in_regime),
            Some(reason) => format!(
                "{} of {} levels in regime; first failure: {reason}",
                cert.levels_in_regime,
                cert.levels.len()
            ),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn test_config(extra: &str) -> ExperimentConfig {
        // Small grids keep the suite tests quick; the defaults are for
        // real runs.
        let text = format!(
            "[grid]\nlevels = 8\nrays = 96\n\n[fuglede]\neps = 0.02, 0.01\n\n[gap]\neps = 0.05, 0.025\n\n[convex]\nknots = 12\nfunctions = 20\n{extra}"
        );
        ExperimentConfig::from_sources(&text, |_| None).unwrap()
    }

    fn out_dir(tag: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("suite-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn norms_and_levelsets_emit_expected_tables() {
        let config = test_config("");
        let dir = out_dir("norms");
        let outcome = run_command("norms", &config, &dir).unwrap();
        assert!(outcome.pass);
        let text = std::fs::read_to_string(dir.join("norms.csv")).unwrap();
        assert!(text.starts_with("quantity,value\n"));
        assert_eq!(text.lines().count(), 4);
        assert!(dir.join("config.resolved").exists());

        let outcome = run_command("levelsets", &config, &dir).unwrap();
        assert!(outcome.pass);
        let text = std::fs::read_to_string(dir.join("levels.csv")).unwrap();
        assert!(text.starts_with("t,mu,mu_star,perimeter,J,regular_flag,bar_re,bar_im,grad0_norm\n"));
        assert_eq!(text.lines().count(), 9);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn dominance_command_passes_on_the_default_family() {
        let config = test_config("");
        let dir = out_dir("dominance");
        let outcome = run_command("dominance", &config, &dir).unwrap();
        assert!(outcome.pass, "{}", outcome.summary);
        assert!(dir.join("dominance.csv").exists());
        assert!(dir.join("dominance.json").exists());
        assert!(dir.join("setup.json").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn gap_command_reports_honest_quartic_slopes() {
        let config = test_config("");
        let dir = out_dir("gap");
        let outcome = run_command("gap", &config, &dir).unwrap();
        // The deficit scales like eps^4 along this family, so the
        // slope-two flags fail by design while the ratio flags hold.
        assert!(!outcome.pass);
        let json = std::fs::read_to_string(dir.join("gap.json")).unwrap();
        assert!(json.contains("\"ratios_positive\": true"));
        assert!(json.contains("\"deficit_slope_near_two\": false"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_command_is_a_config_error() {
        let config = test_config("");
        let dir = out_dir("unknown");
        let err = run_command("frobnicate", &config, &dir).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
