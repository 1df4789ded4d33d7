//! Discrete-velocity BGK solver used as a kinetic reference for the moment
//! models: first-order upwind transport per velocity node followed by an
//! exact relaxation toward the local discrete Maxwellian.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::moment::MomentState;

/// Standard deviations covered on each side of the velocity grid.
pub const SPREAD: f64 = 8.0;
pub const DEFAULT_NODES: usize = 129;

/// Uniform, symmetric velocity grid with an odd node count so that 0 is a node.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    nodes: Vec<f64>,
    weight: f64,
}

impl VelocityGrid {
    pub fn new(count: usize, v_max: f64) -> Result<Self> {
        if count < 3 || count.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "velocity node count must be odd and at least 3, got {count}"
            )));
        }
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(Error::Config(format!("invalid velocity bound {v_max}")));
        }
        let half = (count / 2) as f64;
        let weight = v_max / half;
        let nodes = (0..count).map(|a| (a as f64 - half) * weight).collect();
        Ok(Self { nodes, weight })
    }

    /// Grid wide enough for every state: `v_max = 8 sqrt(max θ) + max |u|`.
    pub fn covering(states: &[(f64, f64, f64)], count: usize) -> Result<Self> {
        let theta = states.iter().map(|s| s.2).fold(0.0f64, f64::max);
        let speed = states.iter().map(|s| s.1.abs()).fold(0.0f64, f64::max);
        Self::new(count, SPREAD * theta.sqrt() + speed)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn v_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }
}

/// Gaussian sampled at the nodes and rescaled so the discrete mass is exactly `rho`.
pub fn discrete_maxwellian(rho: f64, u: f64, theta: f64, grid: &VelocityGrid) -> Vec<f64> {
    let mut f: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&xi| rho / (2.0 * PI * theta).sqrt() * (-(xi - u).powi(2) / (2.0 * theta)).exp())
        .collect();
    let mass: f64 = f.iter().sum::<f64>() * grid.weight;
    let scale = rho / mass;
    f.iter_mut().for_each(|v| *v *= scale);
    f
}

/// Macroscopic quantities of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Macroscopic {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
}

impl Macroscopic {
    pub fn pressure(&self) -> f64 {
        self.rho * self.theta
    }
}

fn cell_moments(f: &[f64], grid: &VelocityGrid) -> (f64, f64, f64) {
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for (&v, &xi) in f.iter().zip(&grid.nodes) {
        m0 += v;
        m1 += v * xi;
        m2 += v * xi * xi;
    }
    (m0 * grid.weight, m1 * grid.weight, m2 * grid.weight)
}

/// Distribution values on a uniform spatial grid, stored cell-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticField {
    pub values: Vec<f64>,
    pub grid: VelocityGrid,
    pub cells: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub t: f64,
}

impl KineticField {
    /// Maxwellian Riemann data; only `(ρ, u, θ)` of the states are used.
    pub fn riemann(
        cells: usize,
        x_min: f64,
        x_max: f64,
        left: &MomentState,
        right: &MomentState,
        grid: VelocityGrid,
    ) -> Result<Self> {
        if cells < 2 || !(x_max > x_min) {
            return Err(Error::Config(format!(
                "invalid kinetic grid: {cells} cells on [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / cells as f64;
        let fl = discrete_maxwellian(left.rho(), left.u(), left.theta(), &grid);
        let fr = discrete_maxwellian(right.rho(), right.u(), right.theta(), &grid);
        let mut values = Vec::with_capacity(cells * grid.len());
        for i in 0..cells {
            let x = x_min + (i as f64 + 0.5) * dx;
            values.extend_from_slice(if x < 0.0 { &fl } else { &fr });
        }
        Ok(Self {
            values,
            grid,
            cells,
            x_min,
            x_max,
            dx,
            t: 0.0,
        })
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Discrete mass, momentum and energy `Σ_i ∫ (1, ξ, ξ²/2) f dξ dx`.
    pub fn totals(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..self.cells {
            let (m0, m1, m2) = cell_moments(self.cell(i), &self.grid);
            out[0] += m0 * self.dx;
            out[1] += m1 * self.dx;
            out[2] += 0.5 * m2 * self.dx;
        }
        out
    }

    /// Profile CSV with columns `x,rho,u,theta,p`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("x,rho,u,theta,p\n");
        for (i, m) in kinetic_moments(self)?.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.center(i),
                m.rho,
                m.u,
                m.theta,
                m.pressure()
            );
        }
        Ok(out)
    }
}

pub fn kinetic_moments(field: &KineticField) -> Result<Vec<Macroscopic>> {
    (0..field.cells)
        .map(|i| {
            let (m0, m1, m2) = cell_moments(field.cell(i), &field.grid);
            let theta = if m0 > 0.0 {
                m2 / m0 - (m1 / m0).powi(2)
            } else {
                f64::NAN
            };
            if !(m0 > 0.0 && theta > 0.0) {
                return Err(Error::InvalidCell {
                    index: i,
                    rho: m0,
                    theta,
                    time: field.t,
                });
            }
            Ok(Macroscopic {
                rho: m0,
                u: m1 / m0,
                theta,
            })
        })
        .collect()
}

/// Largest time step allowed by the transport CFL condition.
pub fn stable_dt(field: &KineticField, cfl: f64) -> f64 {
    cfl * field.dx / field.grid.v_max()
}

/// Upwind transport over `dt` followed by exact BGK relaxation with
/// `τ = Kn/ρ` from the transported moments. Zero-gradient boundaries.
pub fn dvm_step(field: &KineticField, dt: f64, kn: f64) -> Result<KineticField> {
    let nu = dt / field.dx;
    if nu * field.grid.v_max() > 1.0 + 1e-12 {
        return Err(Error::Config(format!(
            "transport CFL number {} exceeds 1",
            nu * field.grid.v_max()
        )));
    }
    let n = field.grid.len();
    let nc = field.cells;
    let mut next = field.values.clone();
    for (a, &xi) in field.grid.nodes.iter().enumerate() {
        let at = |i: usize| field.values[i * n + a];
        for i in 0..nc {
            let diff = if xi > 0.0 {
                at(i) - at(i.saturating_sub(1))
            } else {
                at((i + 1).min(nc - 1)) - at(i)
            };
            next[i * n + a] -= nu * xi * diff;
        }
    }
    let mut out = KineticField {
        values: next,
        t: field.t + dt,
        ..field.clone()
    };
    let moments = kinetic_moments(&out)?;
    if kn.is_finite() {
        for (i, m) in moments.iter().enumerate() {
            let keep = (-dt * m.rho / kn).exp();
            let eq = discrete_maxwellian(m.rho, m.u, m.theta, &out.grid);
            for (v, e) in out.values[i * n..(i + 1) * n].iter_mut().zip(eq) {
                *v = keep * *v + (1.0 - keep) * e;
            }
        }
    }
    Ok(out)
}

/// Evolves `field` to `t_end` with CFL-limited steps, landing on `t_end` exactly.
pub fn run_to(mut field: KineticField, t_end: f64, kn: f64, cfl: f64) -> Result<KineticField> {
    let dt = stable_dt(&field, cfl);
    while field.t < t_end {
        let h = dt.min(t_end - field.t);
        field = dvm_step(&field, h, kn)?;
        if (t_end - field.t).abs() <= 1e-12 * t_end.max(1.0) {
            field.t = t_end;
        }
    }
    Ok(field)
}
