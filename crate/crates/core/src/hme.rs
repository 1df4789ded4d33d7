//! The hyperbolic regularization of Grad's system and its wave structure.
//!
//! Replacing `∂f_{M+1}/∂x` in the last moment equation by
//! `-(f_M ∂u/∂x + f_{M-1} ∂θ/∂x / 2)` turns the characteristic polynomial
//! into `θ^{(M+1)/2} He_{M+1}((λ - u)/√θ)` for every state. The characteristic
//! speeds are then `u + c_j √θ` with `c_j` the Gauss-Hermite points, and the
//! eigenvectors, integral curves and Riemann invariants have closed forms.
//!
//! Wave families are indexed `1..=M+1` in increasing order of speed.

use crate::error::{Error, Result};
use crate::hermite::{factorial, hermite_eval_all, hermite_roots};
use crate::moment::{assemble_grad_jacobian, JacobianMatrix, MomentState};
use crate::ode;

const REL_TOL: f64 = 1e-9;
const ABS_FLOOR: f64 = 1e-12;
const SINGULAR_GUARD: f64 = 1e-12;
const CURVE_TOL: f64 = 1e-10;

/// Equality on physical quantities: relative 1e-9 with an absolute floor of 1e-12.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= (REL_TOL * a.abs().max(b.abs())).max(ABS_FLOOR)
}

/// `R_M = (M+1)/2 (2 f_M ∂u/∂x + f_{M-1} ∂θ/∂x)`.
pub fn regularization_term(w: &MomentState, du_dx: f64, dtheta_dx: f64) -> f64 {
    let m = w.order();
    0.5 * (m + 1) as f64 * (2.0 * w.coeff(m) * du_dx + w.coeff(m - 1) * dtheta_dx)
}

/// `Â_M`: the Grad Jacobian with the last row corrected so that the
/// characteristic speeds are independent of `f_3, ..., f_M`.
pub fn assemble_regularized_jacobian(w: &MomentState) -> JacobianMatrix {
    let m = w.order();
    let mut a = assemble_grad_jacobian(w);
    let scale = (m + 1) as f64;
    a.add(m, 1, -scale * w.coeff(m));
    a.add(m, 2, -0.5 * scale * w.coeff(m - 1));
    a
}

/// Characteristic speeds and right eigenvectors of `Â_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure {
    /// `s_j = u + c_j √θ`, increasing.
    pub speeds: Vec<f64>,
    /// `r_j`, one per speed.
    pub vectors: Vec<Vec<f64>>,
    /// Roots `c_j` of `He_{M+1}`.
    pub roots: Vec<f64>,
}

/// Right eigenvector of `Â_M` for the scaled speed `c` (a root of `He_{M+1}`).
pub fn eigenvector(w: &MomentState, c: f64) -> Vec<f64> {
    let m = w.order();
    let (rho, theta) = (w.rho(), w.theta());
    let sq = theta.sqrt();
    let he = hermite_eval_all(m, c);
    let mut r = Vec::with_capacity(m + 1);
    r.extend([rho, c * sq, (c * c - 1.0) * theta]);
    // component for f_i, i = 3..=M
    let mut theta_pow = theta * sq;
    for i in 3..=m {
        r.push(
            he[i] / factorial(i) * rho * theta_pow
                - 0.5 * (c * c - 1.0) * theta * w.coeff(i - 2)
                - c * sq * w.coeff(i - 1),
        );
        theta_pow *= sq;
    }
    r
}

pub fn eigen_structure(w: &MomentState) -> Result<EigenStructure> {
    let m = w.order();
    let roots = hermite_roots(m + 1)?.to_vec();
    let sq = w.theta().sqrt();
    let speeds = roots.iter().map(|c| w.u() + c * sq).collect();
    let vectors = roots.iter().map(|&c| eigenvector(w, c)).collect();
    Ok(EigenStructure {
        speeds,
        vectors,
        roots,
    })
}

/// Scaled speed `c_j` of family `j` (1-based).
pub fn family_root(m: usize, family: usize) -> Result<f64> {
    let roots = hermite_roots(m + 1)?;
    if family == 0 || family > roots.len() {
        return Err(Error::FamilyOutOfRange {
            family,
            count: roots.len(),
        });
    }
    Ok(roots[family - 1])
}

/// Characteristic speed `u + c_j √θ` of family `j`.
pub fn family_speed(w: &MomentState, family: usize) -> Result<f64> {
    Ok(w.u() + family_root(w.order(), family)? * w.theta().sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldCharacter {
    GenuinelyNonlinear,
    LinearlyDegenerate,
}

/// Character of family `j` together with `∇s_j · r_j = c_j (c_j² + 1) √θ / 2`.
pub fn field_character(family: usize, w: &MomentState) -> Result<(FieldCharacter, f64)> {
    let c = family_root(w.order(), family)?;
    let value = 0.5 * c * (c * c + 1.0) * w.theta().sqrt();
    let character = if c == 0.0 {
        FieldCharacter::LinearlyDegenerate
    } else {
        FieldCharacter::GenuinelyNonlinear
    };
    Ok((character, value))
}

fn nonlinear_root(m: usize, family: usize) -> Result<f64> {
    let c = family_root(m, family)?;
    if c == 0.0 {
        return Err(Error::LinearlyDegenerate { family });
    }
    if (c * c - 1.0).abs() < SINGULAR_GUARD {
        return Err(Error::SingularRecursion { k: 1, c });
    }
    Ok(c)
}

/// Point at parameter `zeta` on the `j`-integral curve through `w0`.
///
/// Density, velocity and temperature follow closed forms; the higher
/// coefficients solve the explicit cascade `f_i' = r_{j,i}` numerically.
pub fn rarefaction_curve(w0: &MomentState, family: usize, zeta: f64) -> Result<MomentState> {
    let m = w0.order();
    let c = nonlinear_root(m, family)?;
    let c2m1 = c * c - 1.0;
    let (rho0, u0, theta0) = (w0.rho(), w0.u(), w0.theta());
    let rho_at = |z: f64| rho0 * z.exp();
    let theta_at = |z: f64| theta0 * (c2m1 * z).exp();
    let u = u0 + 2.0 * c / c2m1 * theta0.sqrt() * ((0.5 * c2m1 * zeta).exp() - 1.0);

    let f = if m >= 3 {
        let he = hermite_eval_all(m, c);
        let weights: Vec<f64> = (0..=m).map(|i| he[i] / factorial(i)).collect();
        ode::integrate(
            |z, f, df| {
                let (rho, theta) = (rho_at(z), theta_at(z));
                let sq = theta.sqrt();
                // f holds f_3..f_M; f_1 = f_2 = 0
                let get = |i: usize| if i >= 3 { f[i - 3] } else { 0.0 };
                for i in 3..=m {
                    df[i - 3] = weights[i] * rho * theta.powf(0.5 * i as f64)
                        - 0.5 * c2m1 * theta * get(i - 2)
                        - c * sq * get(i - 1);
                }
            },
            0.0,
            zeta,
            w0.higher(),
            CURVE_TOL,
        )?
    } else {
        Vec::new()
    };
    MomentState::new(rho_at(zeta), u, theta_at(zeta), f)
}

/// The `M` Riemann invariants of family `j`: `R_1 = ρ θ^{-1/(c²-1)}`,
/// `R_2 = u - 2c/(c²-1) √θ`, and `R_k`, `k = 3..=M`, from the `C_{k,i}`
/// recursion.
pub fn riemann_invariants(w: &MomentState, family: usize) -> Result<Vec<f64>> {
    let m = w.order();
    let c = family_root(m, family)?;
    let c2m1 = c * c - 1.0;
    if c2m1.abs() < SINGULAR_GUARD {
        return Err(Error::SingularRecursion { k: 1, c });
    }
    let ratio = 2.0 * c / c2m1;
    let (rho, theta) = (w.rho(), w.theta());
    let sq = theta.sqrt();
    let he = hermite_eval_all(m, c);

    let mut out = Vec::with_capacity(m);
    out.push(rho * theta.powf(-1.0 / c2m1));
    out.push(w.u() - ratio * sq);
    for k in 3..=m {
        let coeffs = invariant_coefficients(k, c, &he)?;
        let mut value = coeffs[0] * rho * theta.powf(0.5 * k as f64);
        for (i, &ck) in coeffs.iter().enumerate().skip(3) {
            value += ck * w.coeff(i) * theta.powf(0.5 * (k - i) as f64);
        }
        out.push(value);
    }
    Ok(out)
}

/// `C_{k,i}` for `i = 0, 3..=k` (entries 1 and 2 unused, left zero).
fn invariant_coefficients(k: usize, c: f64, he: &[f64]) -> Result<Vec<f64>> {
    let c2m1 = c * c - 1.0;
    let ratio = 2.0 * c / c2m1;
    let mut coeffs = vec![0.0; k + 1];
    coeffs[k] = 1.0;
    if k >= 4 {
        coeffs[k - 1] = ratio;
    }
    for i in (3..k.saturating_sub(1)).rev() {
        coeffs[i] = (coeffs[i + 2] + coeffs[i + 1] * ratio) / (k - i) as f64;
    }
    let denom = -c2m1 * k as f64 - 2.0;
    if denom.abs() < SINGULAR_GUARD {
        return Err(Error::SingularRecursion { k, c });
    }
    let sum: f64 = (3..=k).map(|i| he[i] / factorial(i) * coeffs[i]).sum();
    coeffs[0] = 2.0 / denom * sum;
    Ok(coeffs)
}

/// Shock speed from the mass jump, with the momentum-jump speed alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSpeed {
    /// `(ρ^L u^L - ρ^R u^R) / (ρ^L - ρ^R)`.
    pub speed: f64,
    /// `(ρ^L u^L² + p^L - ρ^R u^R² - p^R) / (ρ^L u^L - ρ^R u^R)`; NaN when
    /// the mass fluxes coincide.
    pub momentum_speed: f64,
}

impl ShockSpeed {
    /// Disagreement between the two Rankine-Hugoniot speeds.
    pub fn residual(&self) -> f64 {
        self.speed - self.momentum_speed
    }
}

pub fn shock_speed(left: &MomentState, right: &MomentState) -> Result<ShockSpeed> {
    let (rl, rr) = (left.rho(), right.rho());
    if approx_eq(rl, rr) {
        return Err(Error::DegenerateJump(format!(
            "equal densities on both sides ({rl})"
        )));
    }
    let (ml, mr) = (rl * left.u(), rr * right.u());
    let speed = (ml - mr) / (rl - rr);
    let momentum_speed = if ml == mr {
        f64::NAN
    } else {
        (ml * left.u() + left.pressure() - mr * right.u() - right.pressure()) / (ml - mr)
    };
    Ok(ShockSpeed {
        speed,
        momentum_speed,
    })
}

/// Lax entropy condition `s_j(L) > S > s_j(R)`.
pub fn check_entropy(
    left: &MomentState,
    right: &MomentState,
    family: usize,
    speed: f64,
) -> Result<bool> {
    let sl = family_speed(left, family)?;
    let sr = family_speed(right, family)?;
    Ok(sl > speed && speed > sr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Contact,
    Rarefaction,
    Shock,
    NotElementary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveClassification {
    pub family: usize,
    pub kind: WaveKind,
    pub c: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub p_left: f64,
    pub p_right: f64,
}

/// Type of the elementary `j`-wave joining `left` to `right`, from the sign
/// of `c_j` and the velocity jump, cross-checked against the pressure jump.
pub fn classify_wave(
    left: &MomentState,
    right: &MomentState,
    family: usize,
) -> Result<WaveClassification> {
    let c = family_root(left.order(), family)?;
    let (ul, ur) = (left.u(), right.u());
    let (pl, pr) = (left.pressure(), right.pressure());
    let kind = if c == 0.0 {
        if approx_eq(ul, ur) && approx_eq(pl, pr) && approx_eq(left.coeff(3), right.coeff(3)) {
            WaveKind::Contact
        } else {
            WaveKind::NotElementary
        }
    } else if approx_eq(ul, ur) {
        WaveKind::NotElementary
    } else {
        let velocity_kind = if ul < ur {
            WaveKind::Rarefaction
        } else {
            WaveKind::Shock
        };
        // p rises across a rarefaction with c_j > 0 and across a shock with c_j < 0
        let expect_rise = (ul < ur) == (c > 0.0);
        if !approx_eq(pl, pr) && (pr > pl) == expect_rise {
            velocity_kind
        } else {
            WaveKind::NotElementary
        }
    };
    Ok(WaveClassification {
        family,
        kind,
        c,
        u_left: ul,
        u_right: ur,
        p_left: pl,
        p_right: pr,
    })
}
