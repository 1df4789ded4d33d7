//! Probabilists' Hermite polynomials.
//!
//! `He_0 = 1`, `He_1 = x`, `He_k = x He_{k-1} - (k-1) He_{k-2}`. The roots of
//! `He_{M+1}` are the scaled characteristic speeds of the regularized moment
//! system, so they are cached per degree after the first request.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest degree for which roots are computed.
pub const MAX_DEGREE: usize = 30;

const BISECTION_CAP: usize = 200;
const NEWTON_POLISH_STEPS: usize = 2;

/// Evaluates `He_k(x)` by the three-term recurrence.
pub fn hermite_eval(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return prev;
    }
    for j in 2..=k {
        let next = x * cur - (j - 1) as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Returns `[He_0(x), ..., He_k(x)]`.
pub fn hermite_eval_all(k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k >= 1 {
        out.push(x);
    }
    for j in 2..=k {
        let next = x * out[j - 1] - (j - 1) as f64 * out[j - 2];
        out.push(next);
    }
    out
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Per-degree cache of Gauss-Hermite points.
///
/// Each slot is written at most once, so concurrent readers only ever see a
/// fully computed root set.
pub struct HermiteTable {
    slots: [OnceLock<Vec<f64>>; MAX_DEGREE + 1],
}

impl HermiteTable {
    pub const fn new() -> Self {
        Self {
            slots: [const { OnceLock::new() }; MAX_DEGREE + 1],
        }
    }

    /// The process-wide table used by [`hermite_roots`].
    pub fn global() -> &'static HermiteTable {
        static TABLE: HermiteTable = HermiteTable::new();
        &TABLE
    }

    /// Sorted roots of `He_k`.
    pub fn roots(&self, k: usize) -> Result<&[f64]> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(k));
        }
        let slot = &self.slots[k];
        if let Some(roots) = slot.get() {
            return Ok(roots);
        }
        let computed = compute_roots(k)?;
        // A racing thread may have filled the slot first; both results are identical.
        let _ = slot.set(computed);
        Ok(slot.get().expect("slot initialized above"))
    }

    /// Number of degrees whose roots are currently cached.
    pub fn cached_degrees(&self) -> usize {
        self.slots.iter().filter(|s| s.get().is_some()).count()
    }
}

impl Default for HermiteTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Sorted roots of `He_k`, `1 <= k <= MAX_DEGREE`, from the global cache.
pub fn hermite_roots(k: usize) -> Result<&'static [f64]> {
    HermiteTable::global().roots(k)
}

/// Largest root of `He_k`.
pub fn largest_root(k: usize) -> Result<f64> {
    Ok(*hermite_roots(k)?.last().expect("k >= 1 roots"))
}

/// Eigenvalues of the Jacobi matrix (zero diagonal, off-diagonal `sqrt(1..k-1)`)
/// by Sturm-count bisection, then Newton polish on the recurrence.
fn compute_roots(k: usize) -> Result<Vec<f64>> {
    // Squared off-diagonal entries: b_i^2 = i.
    let bound = 2.0 * (k as f64).sqrt() + 1.0;
    let mut roots = Vec::with_capacity(k);
    for idx in 0..k {
        let (mut lo, mut hi) = (-bound, bound);
        let mut converged = false;
        for _ in 0..BISECTION_CAP {
            let mid = 0.5 * (lo + hi);
            if count_below(k, mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                degree: k,
                iterations: BISECTION_CAP,
            });
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..NEWTON_POLISH_STEPS {
            let derivative = k as f64 * hermite_eval(k - 1, x);
            if derivative != 0.0 {
                x -= hermite_eval(k, x) / derivative;
            }
        }
        roots.push(x);
    }
    // Exact zero for the middle root of odd degree.
    if k % 2 == 1 {
        roots[k / 2] = 0.0;
    }
    Ok(roots)
}

/// Number of eigenvalues of the k x k Jacobi matrix strictly below `x`.
fn count_below(k: usize, x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut d = -x;
    for i in 0..k {
        if i > 0 {
            d = -x - i as f64 / d;
        }
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_values() {
        assert_eq!(hermite_eval(0, 5.0), 1.0);
        assert_eq!(hermite_eval(2, 2.0), 3.0);
        assert_eq!(hermite_eval(4, 1.0), -2.0);
        assert_eq!(hermite_eval_all(4, 1.0), vec![1.0, 1.0, 0.0, -2.0, -2.0]);
    }

    #[test]
    fn small_root_sets() {
        assert_eq!(hermite_roots(1).unwrap(), &[0.0]);
        let r3 = hermite_roots(3).unwrap();
        let s3 = 3f64.sqrt();
        assert!((r3[0] + s3).abs() < 1e-15);
        assert_eq!(r3[1], 0.0);
        assert!((r3[2] - s3).abs() < 1e-15);
    }

    #[test]
    fn residual_bound_up_to_max_degree() {
        for k in 1..=MAX_DEGREE {
            let roots = hermite_roots(k).unwrap();
            assert_eq!(roots.len(), k);
            for w in roots.windows(2) {
                assert!(w[0] < w[1], "degree {k} not strictly increasing");
            }
            for &r in roots {
                assert!(
                    hermite_eval(k, r).abs() <= 1e-10 * factorial(k),
                    "k={k} r={r}"
                );
            }
        }
    }

    #[test]
    fn degree_limits() {
        assert_eq!(hermite_roots(0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(
            hermite_roots(MAX_DEGREE + 1),
            Err(Error::DegreeOutOfRange(MAX_DEGREE + 1))
        );
    }

    #[test]
    fn interlacing() {
        for k in 1..MAX_DEGREE {
            let lower = hermite_roots(k).unwrap();
            let upper = hermite_roots(k + 1).unwrap();
            for (i, pair) in upper.windows(2).enumerate() {
                assert!(pair[0] < lower[i] && lower[i] < pair[1], "k={k} i={i}");
            }
        }
    }

    #[test]
    fn local_table_caches() {
        let table = HermiteTable::new();
        assert_eq!(table.cached_degrees(), 0);
        let a = table.roots(7).unwrap().to_vec();
        let b = table.roots(7).unwrap().to_vec();
        assert_eq!(a, b);
        assert_eq!(table.cached_degrees(), 1);
    }
}
