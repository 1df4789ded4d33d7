//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical kernels except to build inputs.

#![allow(dead_code, clippy::needless_range_loop)]

use hme_core::moment::{JacobianMatrix, MomentState};
use nalgebra::linalg::Schur;
use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ρ ∈ [0.1, 10], u ∈ [-3, 3], θ ∈ [0.1, 5], f_k ∈ [-1, 1].
pub fn random_state(rng: &mut ChaCha8Rng, m: usize) -> MomentState {
    let rho = rng.gen_range(0.1..=10.0);
    let u = rng.gen_range(-3.0..=3.0);
    let theta = rng.gen_range(0.1..=5.0);
    let f = (3..=m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    MomentState::new(rho, u, theta, f).unwrap()
}

pub fn dense(a: &JacobianMatrix) -> DMatrix<f64> {
    let n = a.order();
    DMatrix::from_row_slice(n, n, a.entries())
}

/// `det(λI - A)` by LU factorisation.
pub fn char_det(a: &DMatrix<f64>, lambda: f64) -> f64 {
    let n = a.nrows();
    (DMatrix::identity(n, n) * lambda - a).lu().determinant()
}

/// Parlett-Reinsch balancing with powers of two, so eigenvalues are unchanged exactly.
pub fn balance(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut b = a.clone();
    let n = b.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| b[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| b[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / 2.0 {
                f *= 2.0;
                c *= 4.0;
            }
            while c > r * 2.0 {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
        if done {
            return b;
        }
    }
}

/// Eigenvalues by a real Schur decomposition of the balanced matrix. Spectra
/// symmetric about zero can stall the QR iteration, so a failed attempt is
/// retried on a shifted copy.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let b = balance(a);
    let n = b.nrows();
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for shift in [0.0, 0.2913, -0.577, 1.13] {
        let shifted = &b + DMatrix::identity(n, n) * (shift * scale);
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, 10_000) {
            return schur
                .complex_eigenvalues()
                .iter()
                .map(|z| z - shift * scale)
                .collect();
        }
    }
    panic!("Schur iteration failed for every shift");
}

/// Largest distance after greedily pairing each `a` with its nearest unused `b`.
pub fn multiset_distance(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Probabilists' Hermite polynomial by its three-term recurrence.
pub fn he(k: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if k == 0 {
        return a;
    }
    for n in 1..k {
        let c = x * b - n as f64 * a;
        a = b;
        b = c;
    }
    b
}

pub fn fact(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Gauss rule for the standard normal measure from the Jacobi matrix
/// (Golub-Welsch). Weights sum to one.
pub fn golub_welsch(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jm = DMatrix::zeros(k, k);
    for i in 1..k {
        let b = (i as f64).sqrt();
        jm[(i, i - 1)] = b;
        jm[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `q_j = (1/j!) ∫ ξ^j f dξ`, `j = 0..=upto`, for the truncated Hermite
/// expansion of `w`, by Gauss quadrature in the standardised velocity.
/// Also returns the sum of absolute contributions as an error scale.
pub fn raw_moments(w: &MomentState, upto: usize) -> (Vec<f64>, Vec<f64>) {
    let m = w.order();
    let (nodes, weights) = golub_welsch((upto + m) / 2 + 2);
    let (u, theta) = (w.u(), w.theta());
    let sq = theta.sqrt();
    let mut q = vec![0.0; upto + 1];
    let mut scale = vec![0.0; upto + 1];
    for (x, wt) in nodes.iter().zip(&weights) {
        let xi = u + sq * x;
        // density of the expansion relative to the Gaussian measure
        let mut dens = 0.0;
        let mut dens_abs = 0.0;
        for k in 0..=m {
            let t = w.coeff(k) * theta.powf(-0.5 * k as f64) * he(k, *x);
            dens += t;
            dens_abs += t.abs();
        }
        for j in 0..=upto {
            let p = xi.powi(j as i32) / fact(j);
            q[j] += wt * p * dens;
            scale[j] += wt * p.abs() * dens_abs;
        }
    }
    (q, scale)
}

/// Classical RK4 with a fixed number of steps.
pub fn rk4<F>(mut rhs: F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<f64>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    for _ in 0..steps {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(&axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(&axpy(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Fourth-order central difference of `g` at `x` along `dir`.
pub fn directional_derivative<G>(g: G, x: &[f64], dir: &[f64], h: f64) -> f64
where
    G: Fn(&[f64]) -> f64,
{
    let at = |s: f64| {
        let p: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + s * d).collect();
        g(&p)
    };
    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
}

/// Collisionless Euler equations with γ = 3, conservative variables
/// `(ρ, ρu, E)`, first-order HLL with zero-gradient boundaries.
pub struct Euler3 {
    pub cells: Vec<[f64; 3]>,
    pub dx: f64,
}

impl Euler3 {
    fn pressure(q: &[f64; 3]) -> f64 {
        2.0 * (q[2] - 0.5 * q[1] * q[1] / q[0])
    }

    fn flux(q: &[f64; 3]) -> [f64; 3] {
        let u = q[1] / q[0];
        let p = Self::pressure(q);
        [q[1], q[1] * u + p, u * (q[2] + p)]
    }

    fn sound(q: &[f64; 3]) -> f64 {
        (3.0 * Self::pressure(q) / q[0]).sqrt()
    }

    fn hll(l: &[f64; 3], r: &[f64; 3]) -> [f64; 3] {
        let (ul, ur) = (l[1] / l[0], r[1] / r[0]);
        let (cl, cr) = (Self::sound(l), Self::sound(r));
        let sl = (ul - cl).min(ur - cr);
        let sr = (ul + cl).max(ur + cr);
        let (fl, fr) = (Self::flux(l), Self::flux(r));
        if sl >= 0.0 {
            return fl;
        }
        if sr <= 0.0 {
            return fr;
        }
        std::array::from_fn(|i| (sr * fl[i] - sl * fr[i] + sl * sr * (r[i] - l[i])) / (sr - sl))
    }

    pub fn step(&mut self, cfl: f64) -> f64 {
        let smax = self
            .cells
            .iter()
            .map(|q| (q[1] / q[0]).abs() + Self::sound(q))
            .fold(0.0f64, f64::max);
        let dt = cfl * self.dx / smax;
        let n = self.cells.len();
        let flux: Vec<[f64; 3]> = (0..=n)
            .map(|i| {
                let l = &self.cells[i.saturating_sub(1)];
                let r = &self.cells[i.min(n - 1)];
                Self::hll(l, r)
            })
            .collect();
        for i in 0..n {
            for k in 0..3 {
                self.cells[i][k] -= dt / self.dx * (flux[i + 1][k] - flux[i][k]);
            }
        }
        dt
    }
}
