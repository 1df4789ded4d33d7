//! Moment-state representations and the Grad flux Jacobian.
//!
//! A state of the `(M+1)`-moment system is stored in primitive form
//! `w = (rho, u, theta, f_3, ..., f_M)`, where `f_k` are the coefficients of
//! the Hermite expansion of the distribution around the local Maxwellian.
//! The structural coefficients `f_0 = rho`, `f_1 = f_2 = 0` are never stored,
//! and the Grad closure sets `f_{M+1} = 0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hermite::{factorial, hermite_eval};
use crate::poly::Polynomial;

/// Smallest and largest supported moment order.
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = crate::hermite::MAX_DEGREE - 1;

fn check_order(m: usize) -> Result<()> {
    if (MIN_ORDER..=MAX_ORDER).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidState(format!(
            "moment order M = {m} outside {MIN_ORDER}..={MAX_ORDER}"
        )))
    }
}

/// Primitive moment vector `w_M = (rho, u, theta, f_3, ..., f_M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentState {
    rho: f64,
    u: f64,
    theta: f64,
    f: Vec<f64>,
}

impl MomentState {
    /// Builds a state of order `M = f.len() + 2`.
    pub fn new(rho: f64, u: f64, theta: f64, f: Vec<f64>) -> Result<Self> {
        check_order(f.len() + 2)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidState(format!(
                "density must be positive, got {rho}"
            )));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidState(format!(
                "temperature must be positive, got {theta}"
            )));
        }
        if !u.is_finite() || f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite component".into()));
        }
        Ok(Self { rho, u, theta, f })
    }

    /// Local Maxwellian of order `m` (all `f_k = 0`).
    pub fn equilibrium(m: usize, rho: f64, u: f64, theta: f64) -> Result<Self> {
        check_order(m)?;
        Self::new(rho, u, theta, vec![0.0; m - 2])
    }

    /// From the flat vector `(rho, u, theta, f_3, ..., f_M)`.
    pub fn from_vector(w: &[f64]) -> Result<Self> {
        if w.len() < 3 {
            return Err(Error::InvalidState(format!(
                "state vector needs at least 3 components, got {}",
                w.len()
            )));
        }
        Self::new(w[0], w[1], w[2], w[3..].to_vec())
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.len());
        w.extend([self.rho, self.u, self.theta]);
        w.extend_from_slice(&self.f);
        w
    }

    /// Highest moment order `M`.
    pub fn order(&self) -> usize {
        self.f.len() + 2
    }

    /// Number of unknowns, `M + 1`.
    pub fn len(&self) -> usize {
        self.f.len() + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Stored coefficients `f_3, ..., f_M`.
    pub fn higher(&self) -> &[f64] {
        &self.f
    }

    pub fn higher_mut(&mut self) -> &mut [f64] {
        &mut self.f
    }

    /// `f_i` including the structural values: `f_0 = rho`, `f_1 = f_2 = 0`,
    /// and zero above `M`.
    pub fn coeff(&self, i: usize) -> f64 {
        match i {
            0 => self.rho,
            1 | 2 => 0.0,
            _ => self.f.get(i - 3).copied().unwrap_or(0.0),
        }
    }

    /// `f_i` for a possibly negative index, zero below 0.
    pub(crate) fn coeff_signed(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.coeff(i as usize)
        }
    }

    pub fn pressure(&self) -> f64 {
        self.rho * self.theta
    }

    /// Heat flux `q = 3 f_3`.
    pub fn heat_flux(&self) -> f64 {
        3.0 * self.coeff(3)
    }

    /// `g_j = f_j / (rho theta^{j/2})` for `j = 3..=M`.
    pub fn dimensionless(&self) -> DimensionlessCoeffs {
        let g = self
            .f
            .iter()
            .enumerate()
            .map(|(i, &fj)| fj / (self.rho * self.theta.powf((i + 3) as f64 / 2.0)))
            .collect();
        DimensionlessCoeffs { g }
    }
}

/// Dimensionless coefficients `g_3, ..., g_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessCoeffs {
    g: Vec<f64>,
}

impl DimensionlessCoeffs {
    pub fn new(m: usize, g: Vec<f64>) -> Result<Self> {
        check_order(m)?;
        if g.len() != m - 2 {
            return Err(Error::InvalidState(format!(
                "expected {} coefficients g_3..g_M, got {}",
                m - 2,
                g.len()
            )));
        }
        Ok(Self { g })
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(m, vec![0.0; m.saturating_sub(2)])
    }

    pub fn order(&self) -> usize {
        self.g.len() + 2
    }

    /// `g_i` with `g_0 = 1`, `g_1 = g_2 = 0` and zero above `M`.
    pub fn coeff(&self, i: usize) -> f64 {
        match i {
            0 => 1.0,
            1 | 2 => 0.0,
            _ => self.g.get(i - 3).copied().unwrap_or(0.0),
        }
    }

    /// `(g_{M-1}, g_M)`, structurally zero where they refer to `g_1`, `g_2`.
    pub fn last_two(&self) -> (f64, f64) {
        let m = self.order();
        (self.coeff(m - 1), self.coeff(m))
    }
}

/// Raw moments `q_j = (1/j!) int xi^j f dxi`, `j = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedMoments {
    q: Vec<f64>,
}

impl ConservedMoments {
    /// Wraps a moment vector; requires `M >= 2` but does not check positivity
    /// (see [`conserved_to_primitive`]).
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.len() < MIN_ORDER + 1 {
            return Err(Error::InvalidState(format!(
                "need at least 3 moments, got {}",
                q.len()
            )));
        }
        check_order(q.len() - 1)?;
        Ok(Self { q })
    }

    pub fn order(&self) -> usize {
        self.q.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.q
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.q
    }

    /// `(u, theta)` from the first three moments.
    pub fn velocity_temperature(&self) -> (f64, f64) {
        let u = self.q[1] / self.q[0];
        (u, 2.0 * self.q[2] / self.q[0] - u * u)
    }
}

/// Dense square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl JacobianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Zero-based entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Scaled Hermite values `h_n = theta^{n/2} He_n(x / sqrt(theta))`, `n = 0..=k`.
pub(crate) fn scaled_hermite(k: usize, x: f64, theta: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(k + 1);
    h.push(1.0);
    if k >= 1 {
        h.push(x);
    }
    for n in 2..=k {
        let next = x * h[n - 1] - (n - 1) as f64 * theta * h[n - 2];
        h.push(next);
    }
    h
}

/// Coefficients `a_n = (-1)^n theta^{n/2} He_n(u/sqrt(theta)) / n!` of the
/// triangular map between raw moments and Hermite coefficients.
fn shift_coefficients(k: usize, u: f64, theta: f64) -> Vec<f64> {
    let h = scaled_hermite(k, u, theta);
    let mut fact = 1.0;
    h.iter()
        .enumerate()
        .map(|(n, &hn)| {
            if n > 1 {
                fact *= n as f64;
            }
            if n % 2 == 0 {
                hn / fact
            } else {
                -hn / fact
            }
        })
        .collect()
}

pub fn primitive_to_conserved(w: &MomentState) -> ConservedMoments {
    let m = w.order();
    let a = shift_coefficients(m, w.u, w.theta);
    let mut q = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let lower: f64 = (0..j).map(|k| a[j - k] * q[k]).sum();
        q.push(w.coeff(j) - lower);
    }
    ConservedMoments { q }
}

pub fn conserved_to_primitive(q: &ConservedMoments) -> Result<MomentState> {
    let qs = &q.q;
    let rho = qs[0];
    if !(rho > 0.0) {
        return Err(Error::InvalidState(format!(
            "density must be positive, got {rho}"
        )));
    }
    let (u, theta) = q.velocity_temperature();
    if !(theta > 0.0) {
        return Err(Error::InvalidState(format!(
            "temperature must be positive, got {theta}"
        )));
    }
    let m = q.order();
    let a = shift_coefficients(m, u, theta);
    let f = (3..=m)
        .map(|j| (0..=j).map(|k| a[j - k] * qs[k]).sum())
        .collect();
    MomentState::new(rho, u, theta, f)
}

/// Closure flux `F(q) = (M+1) q_{M+1}` with `q_{M+1}` fixed by `f_{M+1} = 0`.
pub(crate) fn closure_flux(q: &[f64], u: f64, theta: f64) -> f64 {
    let m = q.len() - 1;
    let a = shift_coefficients(m + 1, u, theta);
    let s: f64 = (0..=m).map(|k| a[m + 1 - k] * q[k]).sum();
    -((m + 1) as f64) * s
}

/// The Grad flux Jacobian `A_M` in primitive variables.
pub fn assemble_grad_jacobian(w: &MomentState) -> JacobianMatrix {
    let m = w.order();
    let (rho, u, theta) = (w.rho, w.u, w.theta);
    let mut a = JacobianMatrix::zeros(m + 1);
    // mass, momentum, energy
    a.set(0, 0, u);
    a.set(0, 1, rho);
    a.set(1, 0, theta / rho);
    a.set(1, 1, u);
    a.set(1, 2, 1.0);
    a.set(2, 1, 2.0 * theta);
    a.set(2, 2, u);
    if m >= 3 {
        a.set(2, 3, 6.0 / rho);
    }
    // f_k equations, row k, column of f_i is i
    for k in 3..=m {
        let ki = k as isize;
        let kf = k as f64;
        a.add(k, 0, -w.coeff_signed(ki - 1) * theta / rho);
        a.add(k, 1, (kf + 1.0) * w.coeff(k));
        a.add(
            k,
            2,
            0.5 * theta * w.coeff_signed(ki - 3) + 0.5 * (kf - 1.0) * w.coeff_signed(ki - 1),
        );
        a.add(k, 3, -3.0 / rho * w.coeff_signed(ki - 2));
        if k >= 4 {
            a.add(k, k - 1, theta);
        }
        a.add(k, k, u);
        if k < m {
            a.add(k, k + 1, kf + 1.0);
        }
    }
    a
}

/// The dimensionless Jacobian `Ã_M`, with `A_M = u I + sqrt(theta) Λ^{-1} Ã_M Λ`.
pub fn assemble_dimensionless_jacobian(g: &DimensionlessCoeffs) -> JacobianMatrix {
    let m = g.order();
    let mut a = JacobianMatrix::zeros(m + 1);
    for r in 0..m {
        a.set(r + 1, r, 1.0);
        a.set(r, r + 1, (r + 1) as f64);
    }
    for k in 3..=m {
        let kf = k as f64;
        a.add(k, 0, -g.coeff(k - 1));
        a.add(k, 1, (kf + 1.0) * g.coeff(k));
        // g_{k-3} with g_0 = 1 is the subdiagonal entry already placed for k = 3
        let g_km3 = if k >= 4 { g.coeff(k - 3) } else { 0.0 };
        a.add(k, 2, (kf - 1.0) * g.coeff(k - 1) + g_km3);
        a.add(k, 3, -3.0 * g.coeff(k - 2));
    }
    a
}

/// Characteristic polynomial of `Ã_M` at `lambda`.
pub fn char_poly_tilde(m: usize, g_m1: f64, g_m: f64, lambda: f64) -> f64 {
    hermite_eval(m + 1, lambda)
        - 0.5 * factorial(m + 1) * ((lambda * lambda - 1.0) * g_m1 + 2.0 * lambda * g_m)
}

/// Characteristic polynomial `det(lambda I - A_M)`.
pub fn char_poly_full(w: &MomentState, lambda: f64) -> f64 {
    let m = w.order();
    let x = lambda - w.u;
    let leading = scaled_hermite(m + 1, x, w.theta)[m + 1];
    leading
        - factorial(m + 1) / (2.0 * w.rho)
            * ((x * x - w.theta) * w.coeff(m - 1) + 2.0 * x * w.coeff(m))
}

/// The characteristic polynomial of `Ã_M` in the monomial basis.
pub fn grad_char_polynomial(m: usize, g_m1: f64, g_m: f64) -> Polynomial {
    let mut p = Polynomial::hermite(m + 1);
    let c = 0.5 * factorial(m + 1);
    p.add_scaled(&Polynomial::new(vec![-g_m1, 2.0 * g_m, g_m1]), -c);
    p
}

/// Whether Grad's system is strictly hyperbolic at `(g_{M-1}, g_M)`: the
/// characteristic polynomial has `M + 1` distinct real roots.
pub fn is_hyperbolic_grad(m: usize, g_m1: f64, g_m: f64) -> bool {
    grad_char_polynomial(m, g_m1, g_m).is_real_rooted()
}

/// Rectangle in the `(g_{M-1}, g_M)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    pub g_m1: (f64, f64),
    pub g_m: (f64, f64),
}

impl RegionBounds {
    /// Square box `[-h, h]^2`.
    pub fn centered(half_width: f64) -> Self {
        Self {
            g_m1: (-half_width, half_width),
            g_m: (-half_width, half_width),
        }
    }
}

/// Cell-centred sampling of the hyperbolicity region. Cells are stored
/// row-major with rows indexing `g_M` and columns indexing `g_{M-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityGrid {
    pub m: usize,
    pub bounds: RegionBounds,
    pub resolution: usize,
    pub cells: Vec<bool>,
}

impl HyperbolicityGrid {
    /// Cell-centre coordinates `(g_{M-1}, g_M)` of cell `(row, col)`.
    pub fn center(&self, row: usize, col: usize) -> (f64, f64) {
        let n = self.resolution as f64;
        let (x0, x1) = self.bounds.g_m1;
        let (y0, y1) = self.bounds.g_m;
        (
            x0 + (col as f64 + 0.5) * (x1 - x0) / n,
            y0 + (row as f64 + 0.5) * (y1 - y0) / n,
        )
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.resolution + col]
    }

    pub fn hyperbolic_fraction(&self) -> f64 {
        self.cells.iter().filter(|&&c| c).count() as f64 / self.cells.len() as f64
    }

    /// The cell whose centre lies closest to the origin.
    pub fn nearest_origin(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut dist = f64::INFINITY;
        for row in 0..self.resolution {
            for col in 0..self.resolution {
                let (x, y) = self.center(row, col);
                let d = x * x + y * y;
                if d < dist {
                    dist = d;
                    best = (row, col);
                }
            }
        }
        best
    }

    /// Number of 4-connected components of hyperbolic cells.
    pub fn component_count(&self) -> usize {
        let n = self.resolution;
        let mut seen = vec![false; n * n];
        let mut count = 0;
        for start in 0..n * n {
            if !self.cells[start] || seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(idx) = stack.pop() {
                let (r, c) = (idx / n, idx % n);
                let mut visit = |rr: usize, cc: usize| {
                    let j = rr * n + cc;
                    if self.cells[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                };
                if r > 0 {
                    visit(r - 1, c);
                }
                if r + 1 < n {
                    visit(r + 1, c);
                }
                if c > 0 {
                    visit(r, c - 1);
                }
                if c + 1 < n {
                    visit(r, c + 1);
                }
            }
        }
        count
    }

    /// CSV with header `gM1,gM,hyperbolic`, one row per cell in row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gM1,gM,hyperbolic\n");
        for row in 0..self.resolution {
            for col in 0..self.resolution {
                let (x, y) = self.center(row, col);
                let _ = writeln!(out, "{x:.16e},{y:.16e},{}", u8::from(self.get(row, col)));
            }
        }
        out
    }
}

pub fn scan_hyperbolicity_region(
    m: usize,
    bounds: RegionBounds,
    resolution: usize,
) -> Result<HyperbolicityGrid> {
    check_order(m)?;
    if resolution < 2 {
        return Err(Error::Config(format!(
            "resolution must be >= 2, got {resolution}"
        )));
    }
    let mut grid = HyperbolicityGrid {
        m,
        bounds,
        resolution,
        cells: Vec::with_capacity(resolution * resolution),
    };
    for row in 0..resolution {
        for col in 0..resolution {
            let (x, y) = grid.center(row, col);
            grid.cells.push(is_hyperbolic_grad(m, x, y));
        }
    }
    Ok(grid)
}
