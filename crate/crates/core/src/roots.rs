//! Real root location for polynomials given only by coefficients.
//!
//! Roots of `p` are isolated between consecutive real roots of `p'`
//! (found recursively) and refined by bisection. Critical points where
//! `p` itself vanishes are kept as roots of even multiplicity.

use crate::poly::{derivative_coeffs, horner, ROOT_TOLERANCE};

/// Real roots of `coeffs` with the multiplicity picked by the same
/// derivative test used for root validation.
pub(crate) fn real_roots_with_multiplicity(coeffs: &[f64]) -> Vec<(f64, usize)> {
    let degree = coeffs.len() - 1;
    let mut out: Vec<(f64, usize)> = Vec::new();
    for x in real_zeros(coeffs) {
        let mut d = 0;
        while d < degree {
            let dj = derivative_coeffs(coeffs, d);
            let scale = dj.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
            if horner(&dj, x).abs() > ROOT_TOLERANCE * scale {
                break;
            }
            d += 1;
        }
        if d > 0 {
            out.push((x, d));
        }
    }
    out
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

fn real_zeros(coeffs: &[f64]) -> Vec<f64> {
    let c = trim(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    if c.len() == 2 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[c.len() - 1];
    let bound = 1.0
        + c[..c.len() - 1]
            .iter()
            .fold(0.0_f64, |m, a| m.max((a / lead).abs()));

    let crit = real_zeros(&derivative_coeffs(c, 1));
    let mut knots = vec![-bound];
    knots.extend(crit.iter().copied().filter(|x| x.abs() < bound));
    knots.push(bound);

    let mut zeros = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner(c, a), horner(c, b));
        if fa == 0.0 {
            zeros.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            zeros.push(bisect(c, a, b, fa));
        }
    }
    let last = *knots.last().unwrap();
    if horner(c, last) == 0.0 {
        zeros.push(last);
    }

    let mag = |x: f64| -> f64 {
        c.iter()
            .enumerate()
            .map(|(i, a)| a.abs() * x.abs().powi(i as i32))
            .sum()
    };
    for &x in &crit {
        if horner(c, x).abs() <= ROOT_TOLERANCE * mag(x).max(f64::MIN_POSITIVE) {
            zeros.push(x);
        }
    }

    zeros.sort_by(f64::total_cmp);
    let dc = derivative_coeffs(c, 1);
    let mut merged: Vec<f64> = Vec::new();
    for x in zeros {
        match merged.last_mut() {
            Some(prev) if (x - *prev).abs() <= 1e-7 * x.abs().max(1.0) => {
                // keep the candidate closer to a critical point
                if horner(&dc, x).abs() < horner(&dc, *prev).abs() {
                    *prev = x;
                }
            }
            _ => merged.push(x),
        }
    }
    merged
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = horner(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
