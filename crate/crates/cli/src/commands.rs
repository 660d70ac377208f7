//! Subcommand implementations.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use lambda_sta::metrics::MetricsReport;
use lambda_sta::presets;
use lambda_sta::protocols::{validate_boundary_conditions, BoundaryCheck, Design};
use lambda_sta::run::{simulate, RunResult, RunSpec};
use lambda_sta::sweep::{linspace, sweep, SweepAxis, SweepTable};
use lambda_sta::units::to_two_pi_mhz;
use lambda_sta::{Mode, PulseSchedule};
use serde::Serialize;

use crate::config::{Format, Resolved, RunConfig};
use crate::error::CliError;
use crate::output::{OutputDir, Table};

#[derive(Serialize)]
struct BoundaryDocument<'a> {
    config: &'a RunConfig,
    passed: bool,
    max_residual: f64,
    checks: &'a [BoundaryCheck],
}

#[derive(Serialize)]
struct MetricsDocument<'a> {
    config: &'a RunConfig,
    metrics: MetricsReport,
}

fn pulse_table(pulses: &PulseSchedule, samples: usize) -> Table {
    let mut table = Table::new(&[
        "t_us",
        "omega_p_rad_per_us",
        "omega_s_rad_per_us",
        "omega_p_two_pi_mhz",
        "omega_s_two_pi_mhz",
    ]);
    for (t, p, s) in pulses.sample(samples) {
        table.push(vec![t, p, s, to_two_pi_mhz(p), to_two_pi_mhz(s)]);
    }
    table
}

fn trajectory_table(run: &RunResult) -> Table {
    let mut table = Table::new(&[
        "t_us", "re_c1", "im_c1", "re_c2", "im_c2", "re_c3", "im_c3", "p1", "p2", "p3",
    ]);
    let traj = &run.trajectory;
    for ((t, psi), p) in traj.times.iter().zip(&traj.states).zip(&traj.populations) {
        let c = psi.amplitudes();
        table.push(vec![
            *t, c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, p[0], p[1], p[2],
        ]);
    }
    table
}

fn modes_table(run: &RunResult) -> Table {
    let mut table = Table::new(&[
        "t_us",
        "abs_c0",
        "abs_cplus",
        "abs_cminus",
        "arg_cplus",
        "alpha_plus",
        "alpha_minus",
    ]);
    for ((t, m), a) in run.trajectory.times.iter().zip(&run.modes).zip(&run.phases) {
        table.push(vec![
            *t,
            m.get(Mode::Zero).norm(),
            m.get(Mode::Plus).norm(),
            m.get(Mode::Minus).norm(),
            m.get(Mode::Plus).arg(),
            a[Mode::Plus.index()],
            a[Mode::Minus.index()],
        ]);
    }
    table
}

fn samples(run: &RunSpec) -> usize {
    run.steps() / run.stride() + 1
}

fn write_design(
    out: &mut OutputDir,
    config: &RunConfig,
    run: &RunSpec,
    design: &Design,
    format: Format,
) -> Result<(), CliError> {
    out.table("pulses", &pulse_table(&design.pulses, samples(run)), format)?;
    let report = validate_boundary_conditions(&design.angles, &design.spec);
    out.json(
        "boundary_report.json",
        &BoundaryDocument {
            config,
            passed: report.passed(),
            max_residual: report.max_residual(),
            checks: &report.checks,
        },
    )?;
    let failures: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Boundary {
            failed: failures.len(),
            names: failures.join(", "),
        })
    }
}

fn write_simulation(
    out: &mut OutputDir,
    config: &RunConfig,
    run: &RunSpec,
    format: Format,
) -> Result<(), CliError> {
    let result = simulate(run)?;
    out.table("trajectory", &trajectory_table(&result), format)?;
    out.table("modes", &modes_table(&result), format)?;
    out.json(
        "metrics.json",
        &MetricsDocument {
            config,
            metrics: result.metrics.report(),
        },
    )
}

pub fn design(resolved: &Resolved, out: &mut OutputDir) -> Result<(), CliError> {
    let design = resolved.run.design()?;
    write_design(
        out,
        &resolved.config,
        &resolved.run,
        &design,
        resolved.format,
    )
}

pub fn simulate_cmd(resolved: &Resolved, out: &mut OutputDir) -> Result<(), CliError> {
    write_simulation(out, &resolved.config, &resolved.run, resolved.format)
}

/// Parses `start:stop:n` into `n` evenly spaced values.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, n] = parts.as_slice() else {
        return Err(format!("expected start:stop:n, got {s:?}"));
    };
    let start: f64 = start
        .trim()
        .parse()
        .map_err(|e| format!("range start: {e}"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .map_err(|e| format!("range stop: {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("range count: {e}"))?;
    if n == 0 {
        return Err("range count must be positive".into());
    }
    Ok(linspace(start, stop, n))
}

fn checked_sweep(
    template: &RunSpec,
    axis: SweepAxis,
    values: &[f64],
) -> Result<SweepTable, CliError> {
    // reject out-of-range rows before spending time on the others
    for &v in values {
        let spec = axis.apply(template, v);
        spec.protocol.validate()?;
        spec.grid()?;
    }
    Ok(sweep(template, axis, values)?)
}

fn require_rows(table: &SweepTable) -> Result<(), CliError> {
    match table.failed_rows() {
        0 => Ok(()),
        failed => Err(CliError::SweepRows {
            failed,
            total: table.rows.len(),
        }),
    }
}

pub fn sweep_cmd(
    resolved: &Resolved,
    axis: SweepAxis,
    values: &[f64],
    out: &mut OutputDir,
) -> Result<(), CliError> {
    let table = checked_sweep(&resolved.run, axis, values)?;
    out.sweep("sweep", &table, resolved.format)?;
    out.json("sweep_config.json", &resolved.config)?;
    require_rows(&table)
}

pub fn reproduce_figure(figure: u8, format: Format, root: &Path) -> Result<OutputDir, CliError> {
    let mut out = OutputDir::create(root)?;
    match figure {
        2 | 3 | 6 => {
            let run = match figure {
                2 => presets::figure2()?,
                3 => presets::figure3()?,
                _ => presets::figure6()?,
            };
            let config = RunConfig::describe(&run, format);
            let design = run.design()?;
            write_design(&mut out, &config, &run, &design, format)?;
            write_simulation(&mut out, &config, &run, format)?;
        }
        4 => {
            let deltas = presets::figure4_deltas();
            debug_assert_eq!(deltas.last(), Some(&FRAC_PI_2));
            let mut failed = None;
            for eps in presets::FIGURE4_EPSILONS {
                let table =
                    checked_sweep(&presets::figure4_template(eps)?, SweepAxis::Delta, &deltas)?;
                out.sweep(&format!("figure4_eps_{eps}"), &table, format)?;
                failed = failed.or(require_rows(&table).err());
            }
            if let Some(e) = failed {
                return Err(e);
            }
        }
        5 => {
            let (p3, p2) = presets::figure5_templates()?;
            let eps = presets::figure5_epsilons();
            let t3 = checked_sweep(&p3, SweepAxis::Epsilon, &eps)?;
            let t2 = checked_sweep(&p2, SweepAxis::Epsilon, &eps)?;
            out.sweep("figure5_protocol1_pulses", &t3, format)?;
            out.sweep("figure5_protocol2_pulses", &t2, format)?;
            require_rows(&t3)?;
            require_rows(&t2)?;
        }
        other => {
            return Err(CliError::Usage(format!(
                "no preset for figure {other}; choose 2, 3, 4, 5 or 6"
            )))
        }
    }
    Ok(out)
}
