//! The secant step, orbit iteration and orbit classification.
//!
//! The second coordinate of `S` is evaluated as `N / D` with `D = q(x, y)`.
//! Inside a small box around `(α, α)` for a root of multiplicity `d >= 2`
//! the step switches to root-centred coordinates, `α + N₁ / D` with
//! `D = Σ λ_m q_m(x - α, y - α)`; both are the same polynomial identity, the
//! second one keeps relative accuracy where `D` vanishes to order `d - 1`.

use std::fmt;

use crate::poly::{divided_sum, divided_sum_abs, n1_local, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for PlanePoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Finite-horizon stand-ins for the limits in the basin definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitLimits {
    pub max_iter: usize,
    pub conv_tol: f64,
    pub conv_streak: usize,
    pub escape_radius: f64,
    pub pole_guard: f64,
}

impl OrbitLimits {
    /// Defaults for basin rendering (shorter horizon).
    pub fn basin() -> Self {
        Self {
            max_iter: 100,
            ..Self::default()
        }
    }
}

impl Default for OrbitLimits {
    fn default() -> Self {
        Self {
            max_iter: 200,
            conv_tol: 1e-8,
            conv_streak: 3,
            escape_radius: 1e8,
            pole_guard: 1e-12,
        }
    }
}

/// Why a single step could not produce a usable point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSignal {
    /// `D` is indistinguishable from zero at this point.
    NearPole { at: PlanePoint },
    /// The image left the escape radius (or overflowed).
    Escaped { to: PlanePoint },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Converged(usize),
    NearPole,
    Escaped,
    NonConvergent,
}

impl Classification {
    pub fn root(self) -> Option<usize> {
        match self {
            Classification::Converged(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Converged(i) => write!(f, "converged:{i}"),
            Classification::NearPole => f.write_str("near_pole"),
            Classification::Escaped => f.write_str("escaped"),
            Classification::NonConvergent => f.write_str("non_convergent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub classification: Classification,
    /// Number of steps taken.
    pub iterations: usize,
    /// Iterates `0..=iterations` when requested.
    pub trace: Option<Vec<PlanePoint>>,
}

/// Membership test for the pole curve `δ_S = {D = 0}`.
///
/// A point is on the curve when `|D| <= guard · scale`, with `scale` the
/// summed magnitude of the terms that make up `D` there, i.e. when `D`
/// cannot be told apart from rounding.
#[derive(Debug, Clone, Copy)]
pub struct PoleSet<'a> {
    poly: &'a Polynomial,
    guard: f64,
}

impl<'a> PoleSet<'a> {
    pub fn new(poly: &'a Polynomial, guard: f64) -> Self {
        Self { poly, guard }
    }

    /// `(D, scale)` at `pt`.
    pub fn denominator(&self, pt: PlanePoint) -> (f64, f64) {
        match local_frame(self.poly, pt) {
            Some(root) => {
                let l = self.poly.roots()[root].taylor_coeffs();
                let alpha = self.poly.roots()[root].alpha();
                let (u, v) = (pt.x - alpha, pt.y - alpha);
                (divided_sum(l, u, v), divided_sum_abs(l, u, v))
            }
            None => (self.poly.q(pt.x, pt.y), self.poly.q_scale(pt.x, pt.y)),
        }
    }

    pub fn contains(&self, pt: PlanePoint) -> bool {
        let (d, scale) = self.denominator(pt);
        d.abs() <= self.guard * scale || d == 0.0
    }
}

/// Root whose local box contains `pt`, for roots of multiplicity >= 2.
fn local_frame(p: &Polynomial, pt: PlanePoint) -> Option<usize> {
    p.roots().iter().position(|r| {
        r.multiplicity() >= 2
            && (pt.x - r.alpha()).abs() <= r.frame_radius()
            && (pt.y - r.alpha()).abs() <= r.frame_radius()
    })
}

/// One application of the secant map.
pub fn secant_step(p: &Polynomial, pt: PlanePoint, limits: &OrbitLimits) -> Result<PlanePoint, StepSignal> {
    let y_next = match local_frame(p, pt) {
        Some(i) => {
            let root = &p.roots()[i];
            let alpha = root.alpha();
            let (u, v) = (pt.x - alpha, pt.y - alpha);
            if u == 0.0 && v == 0.0 {
                return Ok(pt);
            }
            let l = root.taylor_coeffs();
            let d = divided_sum(l, u, v);
            if d == 0.0 || d.abs() <= limits.pole_guard * divided_sum_abs(l, u, v) {
                return Err(StepSignal::NearPole { at: pt });
            }
            alpha + n1_local(l, u, v) / d
        }
        None => {
            let d = p.q(pt.x, pt.y);
            if d == 0.0 || d.abs() <= limits.pole_guard * p.q_scale(pt.x, pt.y) {
                return Err(StepSignal::NearPole { at: pt });
            }
            let n = pt.y * d - p.eval(pt.y);
            n / d
        }
    };
    let next = PlanePoint::new(pt.y, y_next);
    if !y_next.is_finite() || y_next.abs() > limits.escape_radius {
        return Err(StepSignal::Escaped { to: next });
    }
    Ok(next)
}

/// Nearest root `i` with `(α_i, α_i)` within `tol` in both coordinates.
pub fn match_root(p: &Polynomial, pt: PlanePoint, tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in p.roots().iter().enumerate() {
        let dx = (pt.x - r.alpha()).abs();
        let dy = (pt.y - r.alpha()).abs();
        if dx <= tol && dy <= tol {
            let dist = dx.max(dy);
            if best.is_none_or(|(_, b)| dist < b) {
                best = Some((i, dist));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Iterates `S` from `seed` and classifies the orbit.
///
/// Checks run in this order on every iterate: exact fixed point, convergence
/// streak, iteration cap, then the step itself (which may signal a pole or an
/// escape).
pub fn iterate_orbit(
    p: &Polynomial,
    seed: PlanePoint,
    limits: &OrbitLimits,
    record_trace: bool,
) -> OrbitResult {
    let mut trace = record_trace.then(|| vec![seed]);
    let mut pt = seed;
    let mut streak = 0;
    let mut iter = 0;

    let classification = loop {
        if !pt.is_finite() {
            break Classification::Escaped;
        }
        match match_root(p, pt, limits.conv_tol) {
            Some(i) => {
                let alpha = p.roots()[i].alpha();
                streak += 1;
                if (pt.x == alpha && pt.y == alpha) || streak >= limits.conv_streak {
                    break Classification::Converged(i);
                }
            }
            None => streak = 0,
        }
        if iter >= limits.max_iter {
            break Classification::NonConvergent;
        }
        match secant_step(p, pt, limits) {
            Ok(next) => {
                pt = next;
                iter += 1;
                if let Some(t) = trace.as_mut() {
                    t.push(pt);
                }
            }
            Err(StepSignal::NearPole { .. }) => break Classification::NearPole,
            Err(StepSignal::Escaped { .. }) => {
                iter += 1;
                break Classification::Escaped;
            }
        }
    };

    OrbitResult {
        classification,
        iterations: iter,
        trace,
    }
}

/// The diagonal fixed points `(α, α)`, one per validated real root.
pub fn fixed_points(p: &Polynomial) -> Vec<(PlanePoint, usize)> {
    p.roots()
        .iter()
        .enumerate()
        .map(|(i, r)| (PlanePoint::new(r.alpha(), r.alpha()), i))
        .collect()
}
