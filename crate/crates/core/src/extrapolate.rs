//! Richardson extrapolation of `f(t) → L` as `t → 0` from samples on a
//! geometric schedule `t_j = t_0 · r^j`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub t0: f64,
    pub ratio: f64,
    pub levels: usize,
    /// Number of error terms `t, t², ...` eliminated.
    pub order: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            t0: 1e-2,
            ratio: 0.5,
            levels: 10,
            order: 4,
        }
    }
}

impl Schedule {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.levels).map(move |j| self.t0 * self.ratio.powi(j as i32))
    }

    pub fn is_valid(&self) -> bool {
        self.t0 > 0.0
            && self.t0.is_finite()
            && self.ratio > 0.0
            && self.ratio < 1.0
            && self.levels >= 2
            && self.order >= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    /// `|T[n-1][o] - T[n-2][o]|` for the highest column `o` used.
    pub error: f64,
}

/// Extrapolates samples `f(t_0 r^j)` assuming an error expansion in integer
/// powers of `t`.
pub fn richardson(samples: &[f64], ratio: f64, order: usize) -> Extrapolated {
    let n = samples.len();
    assert!(n >= 2, "need at least two samples");
    let order = order.min(n - 2);
    let mut table: Vec<Vec<f64>> = samples.iter().map(|&s| vec![s]).collect();
    for i in 1..=order {
        let factor = ratio.powi(-(i as i32)) - 1.0;
        for j in i..n {
            let prev = table[j][i - 1];
            let step = (prev - table[j - 1][i - 1]) / factor;
            table[j].push(prev + step);
        }
    }
    let value = table[n - 1][order];
    let error = (value - table[n - 2][order]).abs();
    Extrapolated { value, error }
}

/// True when the tail of the samples grows like a pole in `t`.
pub fn looks_divergent(samples: &[f64], ratio: f64) -> bool {
    if samples.iter().any(|s| !s.is_finite()) {
        return true;
    }
    let n = samples.len();
    if n < 4 {
        return false;
    }
    let tail: Vec<f64> = samples[n - 4..].iter().map(|s| s.abs()).collect();
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    increasing && tail[3] > tail[0] * ratio.powf(-1.5) && tail[3] > 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree() {
        let f = |t: f64| 2.0 + 3.0 * t - t * t + 0.5 * t.powi(3);
        let s = Schedule::default();
        let samples: Vec<f64> = s.points().map(f).collect();
        let e = richardson(&samples, s.ratio, s.order);
        assert!((e.value - 2.0).abs() < 1e-13, "{e:?}");
    }

    #[test]
    fn rational_limit() {
        // (1 + t) / (2 - t) → 1/2
        let s = Schedule::default();
        let samples: Vec<f64> = s.points().map(|t| (1.0 + t) / (2.0 - t)).collect();
        let e = richardson(&samples, s.ratio, s.order);
        assert!((e.value - 0.5).abs() < 1e-12);
        assert!(e.error < 1e-10);
        assert!(!looks_divergent(&samples, s.ratio));
    }

    #[test]
    fn pole_flagged() {
        let s = Schedule::default();
        let samples: Vec<f64> = s.points().map(|t| 1.0 / t).collect();
        assert!(looks_divergent(&samples, s.ratio));
    }
}
