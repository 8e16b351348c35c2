#![allow(dead_code)]

use secant_dyn::{Factor, Polynomial};

/// `(x+2) x (x-1)^d`
pub fn family(d: usize) -> Polynomial {
    Polynomial::from_factored(&[(-2.0, 1), (0.0, 1), (1.0, d)], &[]).unwrap()
}

/// Ten factored polynomials mixing simple and multiple real roots.
pub fn library() -> Vec<Polynomial> {
    let entries: [(&[Factor], &[f64]); 10] = [
        (&[(-2.0, 1), (0.0, 1), (1.0, 2)], &[]),
        (&[(-2.0, 1), (0.0, 1), (1.0, 3)], &[]),
        (&[(-2.0, 1), (0.0, 1), (1.0, 4)], &[]),
        (&[(-2.0, 1), (0.0, 1), (1.0, 5)], &[]),
        (&[(-1.0, 1), (1.0, 1)], &[]),
        (&[(0.0, 1), (1.0, 2)], &[]),
        (&[(-0.5, 2), (2.0, 1)], &[]),
        (&[(-1.5, 3), (0.25, 1), (1.0, 1)], &[]),
        (&[(0.5, 2), (-1.0, 2)], &[]),
        (&[(0.0, 2), (3.0, 1)], &[1.0, 0.0, 1.0]),
    ];
    entries
        .into_iter()
        .map(|(f, r)| Polynomial::from_factored(f, r).unwrap())
        .collect()
}

/// Coefficients `a_0..a_k` of `p(x) = Π (x - α)^d · residual(x)`, expanded
/// independently of the library.
pub fn expand(factors: &[(f64, usize)]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &(a, d) in factors {
        for _ in 0..d {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= a * ci;
            }
            c = next;
        }
    }
    c
}

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(i, a)| a * x.powi(i as i32)).sum()
}

/// `p^(m)(α) / m!` as the `m`-th coefficient of `p(α + u)` via the binomial
/// theorem.
pub fn shifted_coefficient(c: &[f64], alpha: f64, m: usize) -> f64 {
    let mut sum = 0.0;
    for (i, &a) in c.iter().enumerate().skip(m) {
        let mut binom = 1.0;
        for j in 0..m {
            binom = binom * (i - j) as f64 / (j + 1) as f64;
        }
        sum += a * binom * alpha.powi((i - m) as i32);
    }
    sum
}

/// Mixed partial `∂^m f / ∂x^(m-l) ∂y^l` by tensor-product central
/// differences with Richardson refinement in `h²`; exact up to rounding for
/// polynomials of low degree.
pub fn mixed_partial(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64, m: usize, l: usize) -> f64 {
    fn stencil(order: usize) -> Vec<(f64, f64)> {
        let mut binom = 1.0;
        let mut out = Vec::new();
        for i in 0..=order {
            let w = if i % 2 == 0 { binom } else { -binom };
            out.push((order as f64 / 2.0 - i as f64, w));
            binom = binom * (order - i) as f64 / (i + 1) as f64;
        }
        out
    }
    let (sx, sy) = (stencil(m - l), stencil(l));
    let at = |h: f64| {
        let mut s = 0.0;
        for &(ox, wx) in &sx {
            for &(oy, wy) in &sy {
                s += wx * wy * f(x + ox * h, y + oy * h);
            }
        }
        s / h.powi(m as i32)
    };
    let mut t: Vec<f64> = (0..5).map(|i| at(1.0 / 2f64.powi(i))).collect();
    for j in 1..t.len() {
        let f4 = 4f64.powi(j as i32);
        for i in (j..t.len()).rev() {
            t[i] = (f4 * t[i] - t[i - 1]) / (f4 - 1.0);
        }
    }
    *t.last().unwrap()
}
