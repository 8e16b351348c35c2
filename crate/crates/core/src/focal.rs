//! Focal points of the secant map and the landing maps through them.
//!
//! A focal point `Q` is a point where both `N` and `D` vanish. Curves through
//! `Q` are sent by `S` to curves through points of the prefocal line
//! `x = Q.y`, and where they land depends on the geometry of the curve at `Q`.
//! For a root `α` of multiplicity `d`:
//!
//! * `d` odd: every curve through `(α, α)` lands at `(α, α)`.
//! * `d` even: curves of slope `m ≠ -1` land at `(α, α)`; curves of slope
//!   `-1` and curvature `κ` land at `(α, y_κ)` with
//!   `y_κ = α - λ_d / C(κ)`, `C(κ) = d λ_d (κ + 1) / 4 + λ_{d+1}`.
//!
//! [`numeric_curve_limit`] computes landings directly from `N / D` along a
//! probe curve, independent of the closed forms.

use thiserror::Error;

use crate::extrapolate::{looks_divergent, richardson, Schedule};
use crate::poly::{divided_sum, horner, n1_local, PolyError, Polynomial, RootSpec};
use crate::secmap::PlanePoint;

/// Relative threshold on `N_x D_y - N_y D_x` separating simple from
/// non-simple focal points.
pub const SIMPLE_FOCAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FocalError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("curve limit diverges (last sample {last:e})")]
    Divergent { last: f64 },
    #[error("curvature {kappa} sends the landing point to infinity")]
    SingularCurvature { kappa: f64 },
    #[error("landing map needs an even multiplicity, root {alpha} has {multiplicity}")]
    OddMultiplicity { alpha: f64, multiplicity: usize },
    #[error("no finite curvature lands exactly at the root {0}")]
    LandingAtRoot(f64),
    #[error("the two roots of a pair must differ")]
    SamePair,
    #[error("invalid extrapolation schedule")]
    InvalidSchedule,
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FocalKind {
    Simple,
    NonSimple,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalPoint {
    pub location: PlanePoint,
    pub kind: FocalKind,
    /// The prefocal line is `x = prefocal_x`; for the secant map this is `Q.y`.
    pub prefocal_x: f64,
    pub grad_n: (f64, f64),
    pub grad_d: (f64, f64),
    /// Indices of the roots `(α_i, α_j)` forming the point.
    pub roots: (usize, usize),
}

/// `(∇N, ∇D)` at `pt` from exact partial derivatives of the polynomials
/// `D = Σ a_{i+j+1} x^i y^j` and `N = y D - p(y)`.
pub fn gradients(p: &Polynomial, pt: PlanePoint) -> ((f64, f64), (f64, f64)) {
    let a = p.coeffs();
    let k = p.degree();
    let (x, y) = (pt.x, pt.y);
    let mut d = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..k {
        for j in 0..(k - i) {
            let c = a[i + j + 1];
            let xi = x.powi(i as i32);
            let yj = y.powi(j as i32);
            d += c * xi * yj;
            if i > 0 {
                dx += c * i as f64 * x.powi(i as i32 - 1) * yj;
            }
            if j > 0 {
                dy += c * j as f64 * xi * y.powi(j as i32 - 1);
            }
        }
    }
    let dp = horner(&p.derivative(1), y);
    ((y * dx, d + y * dy - dp), (dx, dy))
}

fn classify(grad_n: (f64, f64), grad_d: (f64, f64)) -> FocalKind {
    let det = grad_n.0 * grad_d.1 - grad_n.1 * grad_d.0;
    let gn = grad_n.0.abs().max(grad_n.1.abs());
    let gd = grad_d.0.abs().max(grad_d.1.abs());
    let scale = (gn * gd).max(1.0);
    if det.abs() > SIMPLE_FOCAL_TOLERANCE * scale {
        FocalKind::Simple
    } else {
        FocalKind::NonSimple
    }
}

/// All focal points built from validated real roots: `(α_i, α_j)` for
/// `i ≠ j`, and `(α, α)` for every root of multiplicity at least two.
pub fn focal_points(p: &Polynomial) -> Vec<FocalPoint> {
    let roots = p.roots();
    let mut out = Vec::new();
    for (i, ri) in roots.iter().enumerate() {
        for (j, rj) in roots.iter().enumerate() {
            if i == j && ri.multiplicity() < 2 {
                continue;
            }
            let location = PlanePoint::new(ri.alpha(), rj.alpha());
            let (grad_n, grad_d) = gradients(p, location);
            out.push(FocalPoint {
                location,
                kind: classify(grad_n, grad_d),
                prefocal_x: location.y,
                grad_n,
                grad_d,
                roots: (i, j),
            });
        }
    }
    out
}

/// `G_d(m) = 1 + m + ... + m^(d-1)`.
pub fn g_d(m: f64, d: usize) -> f64 {
    if (1.0 - m).abs() < 1e-6 {
        let mut sum = 0.0;
        let mut pow = 1.0;
        for _ in 0..d {
            sum += pow;
            pow *= m;
        }
        sum
    } else {
        (1.0 - m.powi(d as i32)) / (1.0 - m)
    }
}

/// Probe curve `base + (ξ(t), μ(t))` with the quartic jets
/// `ξ = t + t²/2 + t³/6 + t⁴/24` and
/// `μ = m t + κ t²/2 + τ t³/6 + σ t⁴/24`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSpec {
    pub slope: f64,
    pub curvature: f64,
    pub torsion: f64,
    pub sigma: f64,
    pub base: PlanePoint,
}

impl CurveSpec {
    pub fn new(base: PlanePoint, slope: f64, curvature: f64) -> Self {
        Self {
            slope,
            curvature,
            torsion: 0.0,
            sigma: 0.0,
            base,
        }
    }

    /// `(ξ(t), μ(t))`.
    pub fn offsets(&self, t: f64) -> (f64, f64) {
        let xi = t * (1.0 + t * (0.5 + t * (1.0 / 6.0 + t / 24.0)));
        let mu =
            t * (self.slope + t * (self.curvature / 2.0 + t * (self.torsion / 6.0 + t * self.sigma / 24.0)));
        (xi, mu)
    }
}

pub fn curve_point(c: &CurveSpec, t: f64) -> PlanePoint {
    let (xi, mu) = c.offsets(t);
    PlanePoint::new(c.base.x + xi, c.base.y + mu)
}

/// `N` and `D` written in coordinates centred at a base point `(x0, y0)`,
/// using the shifted expansions `p(x0 + u) = Σ c_m u^m`.
///
/// Shifted coefficients at a validated root carry exact zeros below its
/// multiplicity, so the vanishing orders at focal points are exact.
struct LocalFrame<'a> {
    poly: &'a Polynomial,
    x0: f64,
    y0: f64,
    cx: Vec<f64>,
    cy: Vec<f64>,
}

impl<'a> LocalFrame<'a> {
    fn new(poly: &'a Polynomial, base: PlanePoint) -> Self {
        Self {
            poly,
            x0: base.x,
            y0: base.y,
            cx: shifted(poly, base.x),
            cy: shifted(poly, base.y),
        }
    }

    fn n_d(&self, u: f64, v: f64) -> (f64, f64) {
        let gap = self.x0 - self.y0;
        if gap == 0.0 {
            let d = divided_sum(&self.cx, u, v);
            let n = self.x0 * d + n1_local(&self.cx, u, v) - self.cx[0];
            (n, d)
        } else if gap.abs() > 1e-3 * self.x0.abs().max(self.y0.abs()).max(1.0) {
            let px = horner(&self.cx, u);
            let py = horner(&self.cy, v);
            let d = (px - py) / (gap + (u - v));
            ((self.y0 + v) * d - py, d)
        } else {
            self.poly.n_d(self.x0 + u, self.y0 + v)
        }
    }
}

fn shifted(p: &Polynomial, at: f64) -> Vec<f64> {
    match p.root_index(at) {
        Some(i) => p.roots()[i].taylor_coeffs().to_vec(),
        None => (0..=p.degree()).map(|m| p.lambda_m(at, m)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveLimit {
    /// `(Q.y, lim N/D)`, a point of the prefocal line.
    pub point: PlanePoint,
    /// Difference between the last two extrapolation levels.
    pub error: f64,
}

/// Limit of `S(Γ(t))` as `t → 0`, by Richardson extrapolation of the second
/// coordinate over the schedule's geometric sequence of `t`.
pub fn numeric_curve_limit(
    p: &Polynomial,
    c: &CurveSpec,
    schedule: &Schedule,
) -> Result<CurveLimit, FocalError> {
    if !schedule.is_valid() {
        return Err(FocalError::InvalidSchedule);
    }
    let frame = LocalFrame::new(p, c.base);
    let samples: Vec<f64> = schedule
        .points()
        .map(|t| {
            let (u, v) = c.offsets(t);
            let (n, d) = frame.n_d(u, v);
            n / d
        })
        .collect();
    if looks_divergent(&samples, schedule.ratio) {
        return Err(FocalError::Divergent {
            last: *samples.last().unwrap(),
        });
    }
    let e = richardson(&samples, schedule.ratio, schedule.order);
    if !e.value.is_finite() {
        return Err(FocalError::Divergent { last: e.value });
    }
    Ok(CurveLimit {
        point: PlanePoint::new(c.base.y, e.value),
        error: e.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Data of the curvature-to-landing correspondence at `(α, α)` for a root
/// of multiplicity `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandingMap {
    pub alpha: f64,
    pub multiplicity: usize,
    pub lambda_d: f64,
    pub lambda_d1: f64,
    pub parity: Parity,
}

impl LandingMap {
    pub fn new(root: &RootSpec) -> Result<Self, FocalError> {
        let d = root.multiplicity();
        if d < 2 {
            return Err(PolyError::NotMultiple {
                alpha: root.alpha(),
                multiplicity: d,
            }
            .into());
        }
        Ok(Self {
            alpha: root.alpha(),
            multiplicity: d,
            lambda_d: root.lambda(d),
            lambda_d1: root.lambda(d + 1),
            parity: if d.is_multiple_of(2) {
                Parity::Even
            } else {
                Parity::Odd
            },
        })
    }

    fn require_even(&self) -> Result<(), FocalError> {
        match self.parity {
            Parity::Even => Ok(()),
            Parity::Odd => Err(FocalError::OddMultiplicity {
                alpha: self.alpha,
                multiplicity: self.multiplicity,
            }),
        }
    }

    /// `C(κ) = d λ_d (κ + 1) / 4 + λ_{d+1}`.
    pub fn c_of(&self, kappa: f64) -> f64 {
        self.multiplicity as f64 * self.lambda_d / 4.0 * (kappa + 1.0) + self.lambda_d1
    }

    /// The curvature at which `C(κ) = 0`.
    pub fn singular_curvature(&self) -> f64 {
        -1.0 - 4.0 * self.lambda_d1 / (self.multiplicity as f64 * self.lambda_d)
    }
}

/// `y_κ = α - λ_d / C(κ)`.
pub fn curvature_to_landing(lm: &LandingMap, kappa: f64) -> Result<f64, FocalError> {
    lm.require_even()?;
    let c = lm.c_of(kappa);
    if c.abs() <= 1e-12 * lm.lambda_d.abs() {
        return Err(FocalError::SingularCurvature { kappa });
    }
    Ok(lm.alpha - lm.lambda_d / c)
}

/// Inverse of [`curvature_to_landing`].
pub fn landing_to_curvature(lm: &LandingMap, y: f64) -> Result<f64, FocalError> {
    lm.require_even()?;
    if y == lm.alpha {
        return Err(FocalError::LandingAtRoot(y));
    }
    let d = lm.multiplicity as f64;
    Ok(-1.0 + 4.0 / (d * lm.lambda_d) * (lm.lambda_d / (lm.alpha - y) - lm.lambda_d1))
}

/// Landing point on `x = β` of the curve through `(α, β)` with slope 0 and
/// curvature `κ`, where `α` is a double root and `β` a simple root:
/// `(β, (β p''(α) - α p'(β) κ) / (p''(α) - p'(β) κ))`.
pub fn mixed_focal_landing(
    p: &Polynomial,
    alpha: f64,
    beta: f64,
    kappa: f64,
) -> Result<PlanePoint, FocalError> {
    if alpha == beta {
        return Err(FocalError::SamePair);
    }
    let ra = p.find_root(alpha)?;
    let rb = p.find_root(beta)?;
    if !rb.is_simple() {
        return Err(FocalError::Unsupported(format!(
            "β = {beta} must be a simple root (multiplicity {})",
            rb.multiplicity()
        )));
    }
    if ra.multiplicity() != 2 {
        return Err(FocalError::Unsupported(format!(
            "closed form needs α = {alpha} of multiplicity 2 (got {}); use numeric_curve_limit",
            ra.multiplicity()
        )));
    }
    let p2a = 2.0 * ra.lambda(2);
    let p1b = rb.lambda(1);
    let den = p2a - p1b * kappa;
    if den.abs() <= 1e-12 * (p2a.abs() + (p1b * kappa).abs()) {
        return Err(FocalError::SingularCurvature { kappa });
    }
    Ok(PlanePoint::new(beta, (beta * p2a - alpha * p1b * kappa) / den))
}

/// Mixed partial derivatives of `q` and `N` at a pair of distinct roots
/// `(α₁, α₂)`, built bottom-up from `q(α₁, α₂) = 0` and the identity
/// `(x - y) q = p(x) - p(y)` differentiated term by term.
///
/// `q(m, l)` is `∂^m q / ∂x^(m-l) ∂y^l`.
#[derive(Debug, Clone)]
pub struct PairDerivatives {
    alpha1: f64,
    alpha2: f64,
    q: Vec<Vec<f64>>,
    /// `p^(m)(α₂)`
    dp2: Vec<f64>,
}

impl PairDerivatives {
    pub fn new(p: &Polynomial, alpha1: f64, alpha2: f64, max_order: usize) -> Result<Self, FocalError> {
        if alpha1 == alpha2 {
            return Err(FocalError::SamePair);
        }
        let r1 = p.find_root(alpha1)?;
        let r2 = p.find_root(alpha2)?;
        let fact = |m: usize| -> f64 { (1..=m).map(|f| f as f64).product() };
        let dp1: Vec<f64> = (0..=max_order).map(|m| r1.lambda(m) * fact(m)).collect();
        let dp2: Vec<f64> = (0..=max_order).map(|m| r2.lambda(m) * fact(m)).collect();
        let gap = alpha1 - alpha2;

        let mut q: Vec<Vec<f64>> = vec![vec![0.0]];
        for m in 1..=max_order {
            let prev = &q[m - 1];
            let mf = m as f64;
            let mut row = vec![0.0; m + 1];
            row[0] = (dp1[m] - mf * prev[0]) / gap;
            row[m] = (mf * prev[m - 1] - dp2[m]) / gap;
            for l in 1..m {
                row[l] = (l as f64 * prev[l - 1] - (m - l) as f64 * prev[l]) / gap;
            }
            q.push(row);
        }
        Ok(Self {
            alpha1,
            alpha2,
            q,
            dp2,
        })
    }

    pub fn max_order(&self) -> usize {
        self.q.len() - 1
    }

    pub fn pair(&self) -> (f64, f64) {
        (self.alpha1, self.alpha2)
    }

    pub fn q(&self, m: usize, l: usize) -> f64 {
        assert!(l <= m && m <= self.max_order(), "order ({m}, {l}) out of range");
        self.q[m][l]
    }

    /// `∂^m N / ∂x^(m-l) ∂y^l` at the pair, with `N = y q - p(y)`.
    pub fn n(&self, m: usize, l: usize) -> f64 {
        assert!(l <= m && m <= self.max_order(), "order ({m}, {l}) out of range");
        let a2 = self.alpha2;
        if m == 0 {
            0.0
        } else if l == 0 {
            a2 * self.q[m][0]
        } else if l == m {
            m as f64 * self.q[m - 1][m - 1] + a2 * self.q[m][m] - self.dp2[m]
        } else {
            l as f64 * self.q[m - 1][l - 1] + a2 * self.q[m][l]
        }
    }
}

pub fn deriv_q_at_pair(
    p: &Polynomial,
    alpha1: f64,
    alpha2: f64,
    m: usize,
    l: usize,
) -> Result<f64, FocalError> {
    check_order(m, l)?;
    Ok(PairDerivatives::new(p, alpha1, alpha2, m)?.q(m, l))
}

pub fn deriv_n_at_pair(
    p: &Polynomial,
    alpha1: f64,
    alpha2: f64,
    m: usize,
    l: usize,
) -> Result<f64, FocalError> {
    check_order(m, l)?;
    Ok(PairDerivatives::new(p, alpha1, alpha2, m)?.n(m, l))
}

fn check_order(m: usize, l: usize) -> Result<(), FocalError> {
    if l > m {
        return Err(FocalError::Unsupported(format!("order l = {l} exceeds m = {m}")));
    }
    Ok(())
}

/// One row of a curvature sweep at a root of even multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_error: f64,
}

/// Closed-form landing `y_κ` next to the numeric limit along
/// `Γ_{-1, κ, 0, 0}` through `(α, α)`, for each curvature.
pub fn landing_sweep(
    p: &Polynomial,
    root: &RootSpec,
    kappas: &[f64],
    schedule: &Schedule,
) -> Result<Vec<SweepRow>, FocalError> {
    let lm = LandingMap::new(root)?;
    let base = PlanePoint::new(root.alpha(), root.alpha());
    kappas
        .iter()
        .map(|&kappa| {
            let closed_form = curvature_to_landing(&lm, kappa)?;
            let numeric = numeric_curve_limit(p, &CurveSpec::new(base, -1.0, kappa), schedule)?
                .point
                .y;
            Ok(SweepRow {
                kappa,
                closed_form,
                numeric,
                abs_error: (closed_form - numeric).abs(),
            })
        })
        .collect()
}
