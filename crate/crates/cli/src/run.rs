//! Experiment drivers. Each returns the paths it wrote, in a fixed order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hme_core::dvm::{self, KineticField, VelocityGrid, DEFAULT_NODES};
use hme_core::hme::{eigen_structure, field_character, FieldCharacter};
use hme_core::moment::{scan_hyperbolicity_region, MomentState, RegionBounds};
use hme_core::solver::{self, Boundary, Field, SolverConfig};

use crate::config::{Mode, RunConfig};
use crate::CliError;

pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&cfg.output).map_err(|source| io_error(&cfg.output, source))?;
    match cfg.mode {
        Mode::ShockTube => shock_tube(cfg),
        Mode::HypRegion => hyp_region(cfg),
        Mode::MConvergence => m_convergence(cfg),
        Mode::EigenReport => eigen_report(cfg),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write(
    dir: &Path,
    name: &str,
    contents: &str,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| io_error(&path, source))?;
    written.push(path);
    Ok(())
}

fn solver_config(cfg: &RunConfig, m: usize) -> SolverConfig {
    SolverConfig {
        m,
        kn: cfg.kn,
        cfl: cfg.cfl,
        cells: cfg.cells,
        t_end: cfg.t_end,
        x_min: cfg.x_min,
        x_max: cfg.x_max,
        boundary: Boundary::Copy,
    }
}

fn final_density(cfg: &RunConfig, m: usize) -> Result<(Field, Vec<f64>), CliError> {
    let (l, r) = (cfg.left_state(m)?, cfg.right_state(m)?);
    let run = solver::run_shock_tube(&solver_config(cfg, m), &l, &r, &[])?;
    let rho = run.final_field.density();
    Ok((run.final_field, rho))
}

fn kinetic_reference(
    cfg: &RunConfig,
    l: &MomentState,
    r: &MomentState,
) -> Result<KineticField, CliError> {
    let grid = VelocityGrid::covering(
        &[(l.rho(), l.u(), l.theta()), (r.rho(), r.u(), r.theta())],
        DEFAULT_NODES,
    )?;
    Ok(KineticField::riemann(
        cfg.cells, cfg.x_min, cfg.x_max, l, r, grid,
    )?)
}

fn shock_tube(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let (l, r) = (cfg.left_state(cfg.m)?, cfg.right_state(cfg.m)?);
    let run = solver::run_shock_tube(&solver_config(cfg, cfg.m), &l, &r, &cfg.snapshots)?;
    for field in &run.snapshots {
        let name = format!("shocktube_M{}_t{}.csv", cfg.m, field.t);
        write(&cfg.output, &name, &field.to_csv()?, &mut written)?;
    }
    if cfg.reference {
        let mut kinetic = kinetic_reference(cfg, &l, &r)?;
        for &t in &cfg.snapshots {
            kinetic = dvm::run_to(kinetic, t, cfg.kn, cfg.cfl)?;
            write(
                &cfg.output,
                &format!("dvm_t{t}.csv"),
                &kinetic.to_csv()?,
                &mut written,
            )?;
        }
    }
    Ok(written)
}

fn hyp_region(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let grid = scan_hyperbolicity_region(
        cfg.m,
        RegionBounds::centered(cfg.half_width),
        cfg.resolution,
    )?;
    write(
        &cfg.output,
        &format!("hypregion_M{}.csv", cfg.m),
        &grid.to_csv(),
        &mut written,
    )?;
    Ok(written)
}

fn m_convergence(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let dx = (cfg.x_max - cfg.x_min) / cfg.cells as f64;
    let profiles = (cfg.m_min..=cfg.m_max)
        .map(|m| final_density(cfg, m).map(|(_, rho)| (m, rho)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = String::from("M,M_next,l1_rho\n");
    for pair in profiles.windows(2) {
        let d = solver::l1_distance(&pair[0].1, &pair[1].1, dx);
        let _ = writeln!(table, "{},{},{d:.16e}", pair[0].0, pair[1].0);
    }
    write(&cfg.output, "mconvergence.csv", &table, &mut written)?;

    if cfg.reference {
        let (l, r) = (cfg.left_state(cfg.m_max)?, cfg.right_state(cfg.m_max)?);
        let kinetic = dvm::run_to(kinetic_reference(cfg, &l, &r)?, cfg.t_end, cfg.kn, cfg.cfl)?;
        let rho: Vec<f64> = dvm::kinetic_moments(&kinetic)?
            .iter()
            .map(|m| m.rho)
            .collect();
        let mut table = String::from("M,l1_rho_dvm\n");
        for (m, profile) in &profiles {
            let _ = writeln!(table, "{m},{:.16e}", solver::l1_distance(profile, &rho, dx));
        }
        write(&cfg.output, "mconvergence_dvm.csv", &table, &mut written)?;
    }
    Ok(written)
}

fn eigen_report(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    let w = cfg.analysed_state()?;
    let es = eigen_structure(&w)?;
    let mut table = String::from("j,c_j,s_j,character,grad_s_dot_r\n");
    for (i, (c, s)) in es.roots.iter().zip(&es.speeds).enumerate() {
        let (character, value) = field_character(i + 1, &w)?;
        let label = match character {
            FieldCharacter::GenuinelyNonlinear => "genuinely_nonlinear",
            FieldCharacter::LinearlyDegenerate => "linearly_degenerate",
        };
        let _ = writeln!(table, "{},{c:.16e},{s:.16e},{label},{value:.16e}", i + 1);
    }
    write(
        &cfg.output,
        &format!("eigenreport_M{}.csv", cfg.m),
        &table,
        &mut written,
    )?;
    Ok(written)
}
