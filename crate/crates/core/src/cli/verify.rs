//! Identity suites run by `secant-dyn verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::focal::PairDerivatives;
use crate::poly::{Factor, Polynomial};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    /// Largest error relative to the suite's tolerance scale.
    pub worst: f64,
    pub tolerance: f64,
    pub failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            checks: 0,
            worst: 0.0,
            tolerance,
            failure: None,
        }
    }

    fn record(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.worst = self.worst.max(err);
        if err > self.tolerance && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!(
                "PASS {} ({} checks, worst {:.2e} <= {:.0e})",
                self.name, self.checks, self.worst, self.tolerance
            ),
            Some(why) => format!("FAIL {}: {why}", self.name),
        }
    }
}

/// `(x+2) x (x-1)^d`
fn family(d: usize) -> Polynomial {
    Polynomial::from_factored(&[(-2.0, 1), (0.0, 1), (1.0, d)], &[]).expect("family is valid")
}

pub fn default_library() -> Vec<Polynomial> {
    let mut lib: Vec<Polynomial> = (2..=5).map(family).collect();
    for (factors, residual) in [
        (vec![(-1.0, 1), (1.0, 1)], vec![]),
        (vec![(1.0, 2), (-2.0, 1)], vec![]),
        (vec![(0.0, 1), (1.0, 3), (3.0, 1)], vec![]),
        (vec![(0.5, 1), (-1.5, 1)], vec![1.0, 0.0, 1.0]),
    ] {
        lib.push(Polynomial::from_factored(&factors, &residual).expect("library entry is valid"));
    }
    lib
}

fn random_monic(rng: &mut ChaCha8Rng, degree: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..degree).map(|_| rng.random_range(-2.0..2.0)).collect();
    c.push(1.0);
    c
}

/// `Σ |a_m| r^m` with `r = max(|x|, |y|, 1)`.
fn magnitude(coeffs: &[f64], x: f64, y: f64) -> f64 {
    let r = x.abs().max(y.abs()).max(1.0);
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
}

/// `|p(x) - p(y) - (x - y) q(x, y)|` for random polynomials and points.
pub fn divided_difference(rng: &mut ChaCha8Rng, polys: usize, points: usize) -> SuiteResult {
    let mut s = SuiteResult::new("divided_difference", 1e-9);
    for _ in 0..polys {
        let degree = rng.random_range(2..=8);
        let coeffs = random_monic(rng, degree);
        // only q is exercised, so no roots are claimed
        let p = Polynomial::with_roots(&coeffs, &[]).expect("monic with finite coefficients");
        for _ in 0..points {
            let x = rng.random_range(-2.0..2.0);
            let y = rng.random_range(-2.0..2.0);
            let r = p.eval(x) - p.eval(y) - (x - y) * p.q(x, y);
            let scale = magnitude(&coeffs, x, y);
            s.record(r.abs() / scale, || {
                format!("p = {p}, (x, y) = ({x}, {y}), residual {r:e}")
            });
        }
    }
    s
}

/// `N = α D + N₁` at every multiple root of every polynomial.
pub fn taylor_decomposition(rng: &mut ChaCha8Rng, polys: &[Polynomial], points: usize) -> SuiteResult {
    let mut s = SuiteResult::new("taylor_decomposition", 1e-9);
    for p in polys {
        for root in p.roots().iter().filter(|r| r.multiplicity() >= 2) {
            let a = root.alpha();
            for _ in 0..points {
                let x = a + rng.random_range(-1.0..1.0);
                let y = a + rng.random_range(-1.0..1.0);
                let (n, d) = p.n_d(x, y);
                let n1 = p.n1(root, x, y).expect("multiple root");
                let d_taylor = p.taylor_d(root, x, y).expect("multiple root");
                let scale = magnitude(p.coeffs(), x, y) * (1.0 + x.abs().max(y.abs()));
                let r = (n - (a * d + n1)).abs().max((d - d_taylor).abs());
                s.record(r / scale, || {
                    format!("p = {p}, α = {a}, (x, y) = ({x}, {y}), residual {r:e}")
                });
            }
        }
    }
    s
}

/// Taylor coefficients of `p` at `alpha` by repeated synthetic division.
pub fn taylor_shift(coeffs: &[f64], alpha: f64) -> Vec<f64> {
    let mut b = coeffs.to_vec();
    let k = b.len() - 1;
    for i in 0..k {
        for j in (i..k).rev() {
            b[j] += alpha * b[j + 1];
        }
    }
    b
}

/// `λ_m(α)` against the shifted polynomial's coefficients.
pub fn lambda_shift(rng: &mut ChaCha8Rng, polys: &[Polynomial], points: usize) -> SuiteResult {
    let mut s = SuiteResult::new("lambda_shift", 1e-9);
    for p in polys {
        let mut centres: Vec<f64> = p.roots().iter().map(|r| r.alpha()).collect();
        centres.extend((0..points).map(|_| rng.random_range(-3.0..3.0)));
        for a in centres {
            let oracle = taylor_shift(p.coeffs(), a);
            let scale = magnitude(p.coeffs(), a, a);
            for (m, &want) in oracle.iter().enumerate() {
                let got = p.lambda_m(a, m);
                s.record((got - want).abs() / scale, || {
                    format!("p = {p}, λ_{m}({a}) = {got:e}, shifted coefficient {want:e}")
                });
            }
        }
    }
    s
}

/// Mixed partial `∂^m f / ∂x^(m-l) ∂y^l` at `(x, y)` by tensor central
/// differences refined with Richardson extrapolation in `h²`.
pub fn finite_difference(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, m: usize, l: usize) -> f64 {
    let weights = |order: usize| -> Vec<(f64, f64)> {
        // (offset in units of h, weight) for the central stencil of this order
        let mut binom = 1.0;
        (0..=order)
            .map(|i| {
                let w = if i % 2 == 0 { binom } else { -binom };
                binom = binom * (order - i) as f64 / (i + 1) as f64;
                (order as f64 / 2.0 - i as f64, w)
            })
            .collect()
    };
    let (wx, wy) = (weights(m - l), weights(l));
    let stencil = |h: f64| -> f64 {
        let mut s = 0.0;
        for &(ox, a) in &wx {
            for &(oy, b) in &wy {
                s += a * b * f(x + ox * h, y + oy * h);
            }
        }
        s / h.powi(m as i32)
    };
    let levels = 5;
    let mut table: Vec<f64> = (0..levels).map(|i| stencil(0.5f64.powi(i as i32))).collect();
    for j in 1..levels {
        let factor = 4f64.powi(j as i32);
        for i in (j..levels).rev() {
            table[i] = (factor * table[i] - table[i - 1]) / (factor - 1.0);
        }
    }
    table[levels - 1]
}

/// Pair recursions for `q` and `N` against finite differences, over all
/// ordered pairs of distinct roots.
pub fn pair_recursions(polys: &[Polynomial], max_order: usize) -> SuiteResult {
    let mut s = SuiteResult::new("pair_recursions", 1e-6);
    for p in polys {
        let roots: Vec<f64> = p.roots().iter().map(|r| r.alpha()).collect();
        for &a1 in &roots {
            for &a2 in &roots {
                if a1 == a2 {
                    continue;
                }
                let pd = PairDerivatives::new(p, a1, a2, max_order).expect("validated roots");
                let q = |x: f64, y: f64| p.q(x, y);
                let n = |x: f64, y: f64| p.n_d(x, y).0;
                for m in 0..=max_order {
                    for l in 0..=m {
                        for (label, got, f) in [
                            ("q", pd.q(m, l), &q as &dyn Fn(f64, f64) -> f64),
                            ("N", pd.n(m, l), &n),
                        ] {
                            let want = finite_difference(f, a1, a2, m, l);
                            let err = (got - want).abs() / want.abs().max(1.0);
                            s.record(err, || {
                                format!(
                                    "p = {p}, ∂{label}[{m}][{l}] at ({a1}, {a2}): recursion {got:e}, oracle {want:e}"
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    s
}

/// Claimed roots must validate against the coefficients.
pub fn root_validation(coeffs: &[f64], claim: &[(f64, usize)]) -> SuiteResult {
    let mut s = SuiteResult::new("root_validation", 0.0);
    s.checks = claim.len();
    if let Err(e) = Polynomial::with_roots(coeffs, claim) {
        s.failure = Some(e.to_string());
        s.worst = f64::INFINITY;
    }
    s
}

/// Runs every suite. With `target` the identity suites run on it alone,
/// otherwise on the default library.
pub fn run_all(
    rng_seed: u64,
    trials: usize,
    target: Option<&Polynomial>,
    claim: Option<(&[f64], &[Factor])>,
) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let polys = match target {
        Some(p) => vec![p.clone()],
        None => default_library(),
    };
    let mut out = vec![
        divided_difference(&mut rng, trials, 50),
        taylor_decomposition(&mut rng, &polys, 200),
        lambda_shift(&mut rng, &polys, 20),
        pair_recursions(&polys, 4),
    ];
    if let Some((coeffs, claim)) = claim {
        out.push(root_validation(coeffs, claim));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        for s in run_all(7, 20, None, None) {
            assert!(s.passed(), "{}", s.line());
            assert!(s.checks > 0, "{}", s.name);
        }
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        // x² - 1 around 1: (u + 1)² - 1 = 2u + u²
        assert_eq!(taylor_shift(&[-1.0, 0.0, 1.0], 1.0), vec![0.0, 2.0, 1.0]);
    }

    #[test]
    fn finite_difference_is_exact_on_polynomials() {
        let f = |x: f64, y: f64| x.powi(3) * y * y + x * y.powi(4);
        // ∂³/∂x²∂y = 12 x y at (1, 2)
        let d = finite_difference(&f, 1.0, 2.0, 3, 1);
        assert!((d - 24.0).abs() < 1e-8, "{d}");
    }

    #[test]
    fn corrupted_coefficient_is_named() {
        let s = root_validation(&[1.001, -2.0, 1.0], &[(1.0, 2)]);
        assert!(!s.passed());
        assert!(s.line().starts_with("FAIL root_validation"));
    }

    #[test]
    fn randomized_run_is_reproducible() {
        assert_eq!(run_all(3, 10, None, None), run_all(3, 10, None, None));
    }
}
