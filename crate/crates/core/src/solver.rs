//! First-order path-conservative HLL solver for the regularized moment
//! system in balance-law form,
//!
//! ```text
//! ∂q_j/∂t + (j+1) ∂q_{j+1}/∂x = 0,            j = 0..M-1
//! ∂q_M/∂t + ∂F(q)/∂x - R_M = -(1/τ) P_M(q)
//! ```
//!
//! The only nonconservative product is `R_M` in the last row; its jump
//! across an interface is integrated along the straight segment joining
//! the two states. BGK relaxation (`τ = Kn/ρ`) acts only on `f_3..f_M` and is
//! solved exactly in a Strang splitting.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hermite::largest_root;
use crate::moment::{
    closure_flux, conserved_to_primitive, primitive_to_conserved, ConservedMoments, MomentState,
};

/// Boundary treatment at both ends of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Zero-gradient ghost cells.
    #[default]
    Copy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Highest moment order `M`.
    pub m: usize,
    /// Knudsen number; `f64::INFINITY` switches collisions off.
    pub kn: f64,
    pub cfl: f64,
    pub cells: usize,
    pub t_end: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub boundary: Boundary,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            m: 4,
            kn: 0.05,
            cfl: 0.5,
            cells: 400,
            t_end: 0.3,
            x_min: -2.0,
            x_max: 2.0,
            boundary: Boundary::Copy,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(crate::moment::MIN_ORDER..=crate::moment::MAX_ORDER).contains(&self.m) {
            return Err(Error::Config(format!(
                "unsupported moment order M = {}",
                self.m
            )));
        }
        if !(self.kn > 0.0) {
            return Err(Error::Config(format!(
                "Kn must be positive, got {}",
                self.kn
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Config(format!(
                "cfl must lie in (0, 1), got {}",
                self.cfl
            )));
        }
        if self.cells < 2 {
            return Err(Error::Config(format!(
                "need at least 2 cells, got {}",
                self.cells
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("invalid final time {}", self.t_end)));
        }
        if !(self.x_max > self.x_min) {
            return Err(Error::Config(format!(
                "empty domain [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }
}

/// Quadrature on `[0, 1]` for the path integral of the nonconservative product.
#[derive(Debug, Clone, PartialEq)]
pub struct PathIntegralRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PathIntegralRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::Config(
                "path rule needs matching nodes and weights".into(),
            ));
        }
        if nodes.iter().any(|&s| !(0.0..=1.0).contains(&s)) {
            return Err(Error::Config("path rule nodes must lie in [0, 1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(Error::Config(format!(
                "path rule weights sum to {total}, not 1"
            )));
        }
        Ok(Self { nodes, weights })
    }

    /// Three-point Gauss-Legendre rule mapped to `[0, 1]`.
    pub fn gauss3() -> Self {
        let h = 0.5 * (0.6f64).sqrt();
        Self {
            nodes: vec![0.5 - h, 0.5, 0.5 + h],
            weights: vec![5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0],
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Default for PathIntegralRule {
    fn default() -> Self {
        Self::gauss3()
    }
}

/// Flux of the conservative part: `(j+1) q_{j+1}` for `j < M` and `F(q)` in the last row.
pub fn conservative_flux(q: &ConservedMoments) -> Result<Vec<f64>> {
    let w = conserved_to_primitive(q)?;
    Ok(flux_with(q.as_slice(), w.u(), w.theta()))
}

fn flux_with(q: &[f64], u: f64, theta: f64) -> Vec<f64> {
    let m = q.len() - 1;
    let mut flux: Vec<f64> = (0..m).map(|j| (j + 1) as f64 * q[j + 1]).collect();
    flux.push(closure_flux(q, u, theta));
    flux
}

/// Jump of the nonconservative product across the straight path from `ql`
/// to `qr`: `-∫ R_M dν`, expressed through `du/dν` and `dθ/dν`.
pub fn path_jump(
    ql: &ConservedMoments,
    qr: &ConservedMoments,
    rule: &PathIntegralRule,
) -> Result<f64> {
    let m = ql.order();
    if m < 3 {
        // f_{M-1} = f_M = 0 structurally
        return Ok(0.0);
    }
    let (a, b) = (ql.as_slice(), qr.as_slice());
    let dq: Vec<f64> = a.iter().zip(b).map(|(l, r)| r - l).collect();
    let mut q = vec![0.0; m + 1];
    let mut total = 0.0;
    for (&s, &wt) in rule.nodes.iter().zip(&rule.weights) {
        for i in 0..=m {
            q[i] = a[i] + s * dq[i];
        }
        let w = conserved_to_primitive(&ConservedMoments::new(q.clone())?)?;
        let u = w.u();
        let du = (dq[1] - u * dq[0]) / q[0];
        let dtheta = 2.0 * (dq[2] - q[2] / q[0] * dq[0]) / q[0] - 2.0 * u * du;
        let r = 0.5 * (m + 1) as f64 * (2.0 * w.coeff(m) * du + w.coeff(m - 1) * dtheta);
        total += wt * r;
    }
    Ok(-total)
}

/// Interface fluctuations: `left` updates the cell left of the interface,
/// `right` the cell to its right. They sum to `F(q_R) - F(q_L)` plus the
/// path jump of the nonconservative product.
#[derive(Debug, Clone, PartialEq)]
pub struct Fluctuations {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// HLL wave-speed bounds using the largest Gauss-Hermite point.
pub fn wave_speed_bounds(wl: &MomentState, wr: &MomentState) -> Result<(f64, f64)> {
    let c = largest_root(wl.order() + 1)?;
    let (al, ar) = (c * wl.theta().sqrt(), c * wr.theta().sqrt());
    Ok((
        (wl.u() - al).min(wr.u() - ar),
        (wl.u() + al).max(wr.u() + ar),
    ))
}

pub fn hll_fluctuations(ql: &ConservedMoments, qr: &ConservedMoments) -> Result<Fluctuations> {
    let wl = conserved_to_primitive(ql)?;
    let wr = conserved_to_primitive(qr)?;
    hll_fluctuations_with(ql, qr, &wl, &wr, &PathIntegralRule::gauss3())
}

fn hll_fluctuations_with(
    ql: &ConservedMoments,
    qr: &ConservedMoments,
    wl: &MomentState,
    wr: &MomentState,
    rule: &PathIntegralRule,
) -> Result<Fluctuations> {
    let m = ql.order();
    if qr.order() != m {
        return Err(Error::InvalidState(format!(
            "moment orders differ across interface ({m} vs {})",
            qr.order()
        )));
    }
    let (a, b) = (ql.as_slice(), qr.as_slice());
    let fl = flux_with(a, wl.u(), wl.theta());
    let fr = flux_with(b, wr.u(), wr.theta());
    let mut jump: Vec<f64> = fr.iter().zip(&fl).map(|(r, l)| r - l).collect();
    jump[m] += path_jump(ql, qr, rule)?;

    let (sl, sr) = wave_speed_bounds(wl, wr)?;
    assert!(sl < sr, "HLL speed bounds collapsed: {sl} >= {sr}");
    let zeros = vec![0.0; m + 1];
    if sl >= 0.0 {
        return Ok(Fluctuations {
            left: zeros,
            right: jump,
        });
    }
    if sr <= 0.0 {
        return Ok(Fluctuations {
            left: jump,
            right: zeros,
        });
    }
    let inv = 1.0 / (sr - sl);
    let mut left = Vec::with_capacity(m + 1);
    let mut right = Vec::with_capacity(m + 1);
    // middle state q* = (sR qR - sL qL - jump)/(sR - sL), written relative
    // to each side so equal states give exactly zero
    for i in 0..=m {
        let dq = b[i] - a[i];
        left.push(sl * (sr * dq - jump[i]) * inv);
        right.push(sr * (jump[i] - sl * dq) * inv);
    }
    Ok(Fluctuations { left, right })
}

/// Exact solution of the BGK relaxation `f_k' = -f_k/τ`, `τ = Kn/ρ`, over `dt`.
pub fn bgk_relax(w: &MomentState, dt: f64, kn: f64) -> MomentState {
    let mut out = w.clone();
    let decay = (-dt * w.rho() / kn).exp();
    out.higher_mut().iter_mut().for_each(|f| *f *= decay);
    out
}

/// Cell averages of the conserved moments on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub cells: Vec<ConservedMoments>,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub t: f64,
    /// Time-integrated net flux leaving through the two boundaries, per row.
    /// Only the conservative rows `0..M` are meaningful.
    pub boundary_outflow: Vec<f64>,
}

impl Field {
    /// Piecewise-constant data: `left` for cell centres `x < 0`, `right` otherwise.
    pub fn riemann(config: &SolverConfig, left: &MomentState, right: &MomentState) -> Result<Self> {
        config.validate()?;
        if left.order() != config.m || right.order() != config.m {
            return Err(Error::Config(format!(
                "initial states have orders {} / {} but M = {}",
                left.order(),
                right.order(),
                config.m
            )));
        }
        let (ql, qr) = (primitive_to_conserved(left), primitive_to_conserved(right));
        let dx = config.dx();
        let cells = (0..config.cells)
            .map(|i| {
                let x = config.x_min + (i as f64 + 0.5) * dx;
                if x < 0.0 {
                    ql.clone()
                } else {
                    qr.clone()
                }
            })
            .collect();
        Ok(Self {
            cells,
            x_min: config.x_min,
            x_max: config.x_max,
            dx,
            t: 0.0,
            boundary_outflow: vec![0.0; config.m + 1],
        })
    }

    pub fn from_states(states: &[MomentState], x_min: f64, x_max: f64) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::Config("empty field".into()))?;
        let m = first.order();
        if states.iter().any(|w| w.order() != m) {
            return Err(Error::Config("mixed moment orders in field".into()));
        }
        Ok(Self {
            cells: states.iter().map(primitive_to_conserved).collect(),
            x_min,
            x_max,
            dx: (x_max - x_min) / states.len() as f64,
            t: 0.0,
            boundary_outflow: vec![0.0; m + 1],
        })
    }

    pub fn order(&self) -> usize {
        self.cells[0].order()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Primitive state of every cell; the first inadmissible cell is reported.
    pub fn primitives(&self) -> Result<Vec<MomentState>> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, q)| {
                conserved_to_primitive(q).map_err(|_| {
                    let (_, theta) = q.velocity_temperature();
                    Error::InvalidCell {
                        index: i,
                        rho: q.as_slice()[0],
                        theta,
                        time: self.t,
                    }
                })
            })
            .collect()
    }

    /// `Σ_i q_j dx` for each row.
    pub fn totals(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.order() + 1];
        for q in &self.cells {
            for (o, v) in out.iter_mut().zip(q.as_slice()) {
                *o += v * self.dx;
            }
        }
        out
    }

    /// Density profile.
    pub fn density(&self) -> Vec<f64> {
        self.cells.iter().map(|q| q.as_slice()[0]).collect()
    }

    /// Snapshot CSV: `x,rho,u,theta,p,f3,...,fM`, 17 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let prims = self.primitives()?;
        let m = self.order();
        let mut out = String::from("x,rho,u,theta,p");
        for k in 3..=m {
            let _ = write!(out, ",f{k}");
        }
        out.push('\n');
        for (i, w) in prims.iter().enumerate() {
            let _ = write!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.center(i),
                w.rho(),
                w.u(),
                w.theta(),
                w.pressure()
            );
            for f in w.higher() {
                let _ = write!(out, ",{f:.16e}");
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Largest stable time step, `cfl dx / max_j |s_j|`.
pub fn stable_dt(prims: &[MomentState], dx: f64, cfl: f64) -> Result<f64> {
    let m = prims[0].order();
    let c = largest_root(m + 1)?;
    let smax = prims
        .iter()
        .map(|w| w.u().abs() + c * w.theta().sqrt())
        .fold(0.0f64, f64::max);
    Ok(cfl * dx / smax)
}

/// One Strang-split step with the CFL time step.
pub fn step(field: &Field, config: &SolverConfig) -> Result<Field> {
    step_limited(field, config, f64::INFINITY)
}

/// One Strang-split step with `dt = min(CFL step, dt_max)`: half-step BGK,
/// HLL update, half-step BGK.
pub fn step_limited(field: &Field, config: &SolverConfig, dt_max: f64) -> Result<Field> {
    let n = field.len();
    let m = field.order();
    let prims = field.primitives()?;
    let dt = stable_dt(&prims, field.dx, config.cfl)?.min(dt_max);
    let ratio = dt / field.dx;

    let relax = |w: &MomentState| bgk_relax(w, 0.5 * dt, config.kn);
    let stage_prims: Vec<MomentState> = prims.iter().map(relax).collect();
    let stage: Vec<ConservedMoments> = stage_prims.iter().map(primitive_to_conserved).collect();

    let rule = PathIntegralRule::gauss3();
    let mut updated = stage.clone();
    for i in 1..n {
        let fl = hll_fluctuations_with(
            &stage[i - 1],
            &stage[i],
            &stage_prims[i - 1],
            &stage_prims[i],
            &rule,
        )?;
        for k in 0..=m {
            updated[i - 1].as_mut_slice()[k] -= ratio * fl.left[k];
            updated[i].as_mut_slice()[k] -= ratio * fl.right[k];
        }
    }
    match config.boundary {
        // zero-gradient ghosts: boundary interfaces carry no fluctuation
        Boundary::Copy => {}
    }

    let mut boundary_outflow = field.boundary_outflow.clone();
    let f_first = flux_with(
        stage[0].as_slice(),
        stage_prims[0].u(),
        stage_prims[0].theta(),
    );
    let f_last = flux_with(
        stage[n - 1].as_slice(),
        stage_prims[n - 1].u(),
        stage_prims[n - 1].theta(),
    );
    for k in 0..=m {
        boundary_outflow[k] += dt * (f_last[k] - f_first[k]);
    }

    let t = field.t + dt;
    let cells = updated
        .into_iter()
        .enumerate()
        .map(|(i, q)| {
            let w = conserved_to_primitive(&q).map_err(|_| {
                let (_, theta) = q.velocity_temperature();
                Error::InvalidCell {
                    index: i,
                    rho: q.as_slice()[0],
                    theta,
                    time: t,
                }
            })?;
            Ok(primitive_to_conserved(&relax(&w)))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Field {
        cells,
        x_min: field.x_min,
        x_max: field.x_max,
        dx: field.dx,
        t,
        boundary_outflow,
    })
}

/// Final field plus snapshots at the requested times.
#[derive(Debug, Clone)]
pub struct ShockTubeRun {
    pub snapshots: Vec<Field>,
    pub final_field: Field,
    pub steps: usize,
}

/// Evolves the Riemann problem `(left | right)` to `config.t_end`, landing
/// exactly on each requested snapshot time.
pub fn run_shock_tube(
    config: &SolverConfig,
    left: &MomentState,
    right: &MomentState,
    snapshot_times: &[f64],
) -> Result<ShockTubeRun> {
    let field = Field::riemann(config, left, right)?;
    evolve(field, config, snapshot_times)
}

/// Advances `field` to `config.t_end`.
pub fn evolve(
    mut field: Field,
    config: &SolverConfig,
    snapshot_times: &[f64],
) -> Result<ShockTubeRun> {
    let mut times: Vec<f64> = snapshot_times.to_vec();
    if times.iter().any(|&t| !(t >= 0.0) || t > config.t_end) {
        return Err(Error::Config(format!(
            "snapshot times must lie in [0, {}]",
            config.t_end
        )));
    }
    times.sort_by(f64::total_cmp);
    times.dedup();

    let mut snapshots = Vec::with_capacity(times.len());
    let mut pending = times.into_iter().peekable();
    let mut steps = 0;
    loop {
        while let Some(&ts) = pending.peek() {
            if ts <= field.t {
                snapshots.push(field.clone());
                pending.next();
            } else {
                break;
            }
        }
        if field.t >= config.t_end {
            break;
        }
        let target = pending.peek().copied().unwrap_or(config.t_end);
        field = step_limited(&field, config, target - field.t)?;
        // absorb round-off so the target is hit exactly
        if (target - field.t).abs() <= 1e-12 * target.abs().max(1.0) {
            field.t = target;
        }
        steps += 1;
    }
    Ok(ShockTubeRun {
        snapshots,
        final_field: field,
        steps,
    })
}

/// `Σ |a_i - b_i| dx` over two profiles on the same grid.
pub fn l1_distance(a: &[f64], b: &[f64], dx: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx
}
