//! Dense real polynomials and Sturm-sequence root counting.

/// Relative size below which a remainder coefficient is treated as zero.
const ZERO_GUARD: f64 = 1e-11;

/// A polynomial with coefficients in increasing degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    /// `He_k` in the monomial basis.
    pub fn hermite(k: usize) -> Self {
        let mut prev = vec![1.0];
        if k == 0 {
            return Self::new(prev);
        }
        let mut cur = vec![0.0, 1.0];
        for j in 2..=k {
            let mut next = vec![0.0; j + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= (j - 1) as f64 * c;
            }
            prev = cur;
            cur = next;
        }
        Self::new(cur)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap_or(&0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![0.0]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    /// Adds `scale * other` in place.
    pub fn add_scaled(&mut self, other: &Polynomial, scale: f64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += scale * b;
        }
        self.trim(0.0);
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops leading coefficients with magnitude `<= tol`, keeping at least one.
    fn trim(&mut self, tol: f64) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.abs() <= tol) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    fn normalized(mut self) -> Self {
        let m = self.max_abs();
        if m > 0.0 {
            self.coeffs.iter_mut().for_each(|c| *c /= m);
        }
        self
    }

    /// Remainder of polynomial long division by `divisor`.
    pub fn rem(&self, divisor: &Polynomial) -> Polynomial {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lead = divisor.leading();
        let mut r = self.coeffs.clone();
        while r.len() > dd && r.len() > 1 {
            let shift = r.len() - 1 - dd;
            let factor = r[r.len() - 1] / lead;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= factor * d;
            }
            r.pop();
        }
        if dd == 0 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(r)
    }

    /// The Sturm chain `p, p', -rem(p, p'), ...`, each member rescaled to unit
    /// max-norm. A remainder whose coefficients all fall below the guard
    /// (relative to its dividend) ends the chain.
    pub fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut chain = vec![self.clone().normalized()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d.normalized());
        loop {
            let n = chain.len();
            if chain[n - 1].degree() == 0 {
                break;
            }
            let mut r = chain[n - 2].rem(&chain[n - 1]);
            r.coeffs.iter_mut().for_each(|c| *c = -*c);
            r.trim(ZERO_GUARD);
            if r.max_abs() <= ZERO_GUARD {
                break;
            }
            chain.push(r.normalized());
        }
        chain
    }

    /// Number of distinct real roots, from sign variations of the Sturm
    /// chain at minus and plus infinity.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.sturm_sequence();
        let at_pos: Vec<f64> = chain.iter().map(|p| p.leading().signum()).collect();
        let at_neg: Vec<f64> = chain
            .iter()
            .map(|p| {
                let s = p.leading().signum();
                if p.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        sign_variations(&at_neg).saturating_sub(sign_variations(&at_pos))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots_in(&self, a: f64, b: f64) -> usize {
        let chain = self.sturm_sequence();
        let va: Vec<f64> = chain.iter().map(|p| p.eval(a)).collect();
        let vb: Vec<f64> = chain.iter().map(|p| p.eval(b)).collect();
        sign_variations(&va).saturating_sub(sign_variations(&vb))
    }

    /// True when all roots are real and simple.
    pub fn is_real_rooted(&self) -> bool {
        self.degree() > 0 && self.count_real_roots() == self.degree()
    }
}

fn sign_variations(values: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}
