//! Real monic polynomials with known real roots, and the divided-difference
//! forms `q`, `N`, `D`, `N₁` that the secant map is built from.
//!
//! Every evaluation of `q(x, y) = (p(x) - p(y)) / (x - y)` goes through the
//! expansion `Σ a_m q_m(x, y)` with `q_m(x, y) = Σ_ℓ x^(m-1-ℓ) y^ℓ`, so the
//! quotient is never formed and the diagonal `x = y` needs no special case.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::roots;

/// Relative threshold for `|p^(j)(α)|` when validating a root and its multiplicity.
pub const ROOT_TOLERANCE: f64 = 1e-8;

/// Relative tolerance on the deflation remainder when factors are checked
/// against a coefficient list.
pub const FACTOR_TOLERANCE: f64 = 1e-10;

/// Distinct roots closer than this cannot be told apart by orbit classification.
pub const MIN_ROOT_SEPARATION: f64 = 2e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial must have degree at least 2 (got {0})")]
    DegreeTooLow(usize),
    #[error("polynomial must be monic, leading coefficient is {0}")]
    NotMonic(f64),
    #[error("coefficient {0} is not finite")]
    NonFinite(usize),
    #[error("root multiplicities sum to {total}, more than the degree {degree}")]
    TooManyRoots { total: usize, degree: usize },
    #[error("root {alpha} fails validation as a root of multiplicity {multiplicity}: {reason}")]
    InvalidRoot {
        alpha: f64,
        multiplicity: usize,
        reason: String,
    },
    #[error("roots {0} and {1} are not separated")]
    RootsTooClose(f64, f64),
    #[error("factors do not divide the coefficients (relative remainder {0:e})")]
    FactorMismatch(f64),
    #[error("root {alpha} has multiplicity {multiplicity}, at least 2 is required")]
    NotMultiple { alpha: f64, multiplicity: usize },
    #[error("{0} is not a validated root of the polynomial")]
    UnknownRoot(f64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// A validated real root `α` of multiplicity `d`, carrying the normalized
/// Taylor coefficients `λ_m = p^(m)(α) / m!`.
///
/// `taylor_coeffs()[m]` is `λ_m` for `m = 0..=k`; entries below `d` are exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSpec {
    alpha: f64,
    multiplicity: usize,
    lambdas: Vec<f64>,
    frame_radius: f64,
}

impl RootSpec {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// `λ_m`, zero for `m` below the multiplicity or above the degree.
    pub fn lambda(&self, m: usize) -> f64 {
        self.lambdas.get(m).copied().unwrap_or(0.0)
    }

    /// `λ_d .. λ_k`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas[self.multiplicity..]
    }

    /// The full shifted coefficient list `λ_0 .. λ_k` of `p(α + s)`.
    pub fn taylor_coeffs(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }

    /// Half-width of the box around `(α, α)` inside which the secant step is
    /// evaluated in root-centred coordinates.
    pub(crate) fn frame_radius(&self) -> f64 {
        self.frame_radius
    }
}

/// A root `α` with its multiplicity `d`, i.e. the factor `(x - α)^d`.
pub type Factor = (f64, usize);

/// Real monic polynomial `p(x) = a_0 + a_1 x + ... + x^k`, `k >= 2`, together
/// with its validated real roots sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    roots: Vec<RootSpec>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients `a_0..a_k` and locates its real
    /// roots numerically. Multiplicities found this way are only as good as
    /// the floating-point root finder; prefer [`Polynomial::from_factored`]
    /// whenever multiplicities matter.
    pub fn from_coeffs(coeffs: &[f64]) -> Result<Self, PolyError> {
        check_coeffs(coeffs)?;
        let found = roots::real_roots_with_multiplicity(coeffs);
        Self::with_roots(coeffs, &found)
    }

    /// Builds `Π (x - α_i)^(d_i) · r(x)` where `r` is a monic residual factor
    /// given by its coefficients (pass `&[1.0]` or `&[]` for none).
    /// Multiplicities are taken as exact.
    pub fn from_factored(factors: &[(f64, usize)], residual: &[f64]) -> Result<Self, PolyError> {
        let mut coeffs = if residual.is_empty() {
            vec![1.0]
        } else {
            residual.to_vec()
        };
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(PolyError::NonFinite(i));
        }
        let lead = *coeffs.last().unwrap();
        if lead != 1.0 {
            return Err(PolyError::NotMonic(lead));
        }
        for &(alpha, d) in factors {
            if !alpha.is_finite() {
                return Err(PolyError::Parse(format!("root {alpha} is not finite")));
            }
            if d == 0 {
                return Err(PolyError::InvalidRoot {
                    alpha,
                    multiplicity: 0,
                    reason: "multiplicity must be at least 1".into(),
                });
            }
            for _ in 0..d {
                coeffs = mul_linear(&coeffs, alpha);
            }
        }
        check_coeffs(&coeffs)?;
        Self::with_roots(&coeffs, factors)
    }

    /// Attaches the given roots to a coefficient list after validating each
    /// root, its multiplicity, and that the factors divide the polynomial.
    pub fn with_roots(coeffs: &[f64], roots: &[(f64, usize)]) -> Result<Self, PolyError> {
        check_coeffs(coeffs)?;
        let degree = coeffs.len() - 1;
        let total: usize = roots.iter().map(|r| r.1).sum();
        if total > degree {
            return Err(PolyError::TooManyRoots { total, degree });
        }

        let mut sorted = roots.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in sorted.windows(2) {
            if (w[1].0 - w[0].0).abs() <= MIN_ROOT_SEPARATION {
                return Err(PolyError::RootsTooClose(w[0].0, w[1].0));
            }
        }

        let mut specs = Vec::with_capacity(sorted.len());
        for (i, &(alpha, d)) in sorted.iter().enumerate() {
            validate_root(coeffs, alpha, d)?;
            let mut lambdas: Vec<f64> = (0..=degree).map(|m| lambda_m(coeffs, alpha, m)).collect();
            lambdas[..d].iter_mut().for_each(|l| *l = 0.0);

            let mut gap = f64::INFINITY;
            if i > 0 {
                gap = gap.min(alpha - sorted[i - 1].0);
            }
            if i + 1 < sorted.len() {
                gap = gap.min(sorted[i + 1].0 - alpha);
            }
            specs.push(RootSpec {
                alpha,
                multiplicity: d,
                lambdas,
                frame_radius: (0.25 * gap).min(0.5),
            });
        }

        // deflate by the product of factors; the remainder must vanish
        let mut factor = vec![1.0];
        for &(alpha, d) in &sorted {
            for _ in 0..d {
                factor = mul_linear(&factor, alpha);
            }
        }
        let (_, rem) = div_rem(coeffs, &factor);
        let scale = coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        let rel = rem.iter().fold(0.0_f64, |m, c| m.max(c.abs())) / scale;
        if rel > FACTOR_TOLERANCE {
            return Err(PolyError::FactorMismatch(rel));
        }

        Ok(Self {
            coeffs: coeffs.to_vec(),
            roots: specs,
        })
    }

    /// Parses `coeffs: a0 a1 ... ak` or `factored: (alpha d)(alpha d)... [r0 r1 ...]`.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let text = text.trim();
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| PolyError::Parse("expected `coeffs:` or `factored:` prefix".into()))?;
        match kind.trim() {
            "coeffs" => Self::from_coeffs(&parse_numbers(body)?),
            "factored" => {
                let (factors, residual) = parse_factored(body)?;
                Self::from_factored(&factors, &residual)
            }
            other => Err(PolyError::Parse(format!("unknown polynomial kind `{other}`"))),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn roots(&self) -> &[RootSpec] {
        &self.roots
    }

    pub fn root(&self, index: usize) -> Option<&RootSpec> {
        self.roots.get(index)
    }

    /// Index of the validated root equal to `alpha`, if any.
    pub fn root_index(&self, alpha: f64) -> Option<usize> {
        self.roots.iter().position(|r| r.alpha == alpha)
    }

    pub fn find_root(&self, alpha: f64) -> Result<&RootSpec, PolyError> {
        self.roots
            .iter()
            .find(|r| r.alpha == alpha)
            .ok_or(PolyError::UnknownRoot(alpha))
    }

    /// `p(x)` by Horner's scheme.
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    /// Coefficients of `p^(order)`; empty once `order` exceeds the degree.
    pub fn derivative(&self, order: usize) -> Vec<f64> {
        derivative_coeffs(&self.coeffs, order)
    }

    /// `p^(m)(α) / m!`.
    pub fn lambda_m(&self, alpha: f64, m: usize) -> f64 {
        lambda_m(&self.coeffs, alpha, m)
    }

    /// `q(x, y) = Σ a_m q_m(x, y)`.
    pub fn q(&self, x: f64, y: f64) -> f64 {
        divided_sum(&self.coeffs, x, y)
    }

    /// `Σ |a_m| q_m(|x|, |y|)`, the magnitude of the terms summed by [`Polynomial::q`].
    pub(crate) fn q_scale(&self, x: f64, y: f64) -> f64 {
        divided_sum_abs(&self.coeffs, x, y)
    }

    /// `(N, D) = (y q(x, y) - p(y), q(x, y))`.
    pub fn n_d(&self, x: f64, y: f64) -> (f64, f64) {
        let d = self.q(x, y);
        (y * d - self.eval(y), d)
    }

    /// `N₁(x, y)` in the decomposition `N = α D + N₁` around a root of
    /// multiplicity at least two.
    pub fn n1(&self, root: &RootSpec, x: f64, y: f64) -> Result<f64, PolyError> {
        require_multiple(root)?;
        Ok(n1_local(root.taylor_coeffs(), x - root.alpha, y - root.alpha))
    }

    /// `D(x, y)` from its Taylor expansion `Σ_{m>=d} λ_m q_m(x - α, y - α)`.
    pub fn taylor_d(&self, root: &RootSpec, x: f64, y: f64) -> Result<f64, PolyError> {
        require_multiple(root)?;
        Ok(divided_sum(root.taylor_coeffs(), x - root.alpha, y - root.alpha))
    }
}

impl FromStr for Polynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coeffs:")?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

fn require_multiple(root: &RootSpec) -> Result<(), PolyError> {
    if root.multiplicity < 2 {
        return Err(PolyError::NotMultiple {
            alpha: root.alpha,
            multiplicity: root.multiplicity,
        });
    }
    Ok(())
}

fn check_coeffs(coeffs: &[f64]) -> Result<(), PolyError> {
    if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
        return Err(PolyError::NonFinite(i));
    }
    if coeffs.len() < 3 {
        return Err(PolyError::DegreeTooLow(coeffs.len().saturating_sub(1)));
    }
    let lead = *coeffs.last().unwrap();
    if lead != 1.0 {
        return Err(PolyError::NotMonic(lead));
    }
    Ok(())
}

fn validate_root(coeffs: &[f64], alpha: f64, d: usize) -> Result<(), PolyError> {
    let invalid = |reason: String| PolyError::InvalidRoot {
        alpha,
        multiplicity: d,
        reason,
    };
    if d == 0 {
        return Err(invalid("multiplicity must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(invalid("root is not finite".into()));
    }
    for j in 0..=d {
        let dj = derivative_coeffs(coeffs, j);
        if dj.is_empty() {
            return Err(invalid(format!(
                "multiplicity exceeds degree {}",
                coeffs.len() - 1
            )));
        }
        let value = horner(&dj, alpha);
        let bound = ROOT_TOLERANCE * dj.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if j < d && value.abs() > bound {
            return Err(invalid(format!("p^({j})({alpha}) = {value:e} does not vanish")));
        }
        if j == d && value.abs() <= bound {
            return Err(invalid(format!("p^({d})({alpha}) = {value:e} vanishes too")));
        }
    }
    Ok(())
}

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of the `order`-th derivative.
pub fn derivative_coeffs(coeffs: &[f64], order: usize) -> Vec<f64> {
    if order >= coeffs.len() {
        return Vec::new();
    }
    (order..coeffs.len())
        .map(|i| {
            let falling: f64 = ((i - order + 1)..=i).map(|f| f as f64).product();
            falling * coeffs[i]
        })
        .collect()
}

/// `p^(m)(α) / m!` by differentiating and evaluating.
pub fn lambda_m(coeffs: &[f64], alpha: f64, m: usize) -> f64 {
    let dm = derivative_coeffs(coeffs, m);
    let fact: f64 = (1..=m).map(|f| f as f64).product();
    horner(&dm, alpha) / fact
}

/// `q_m(x, y) = Σ_{ℓ=0}^{m-1} x^(m-1-ℓ) y^ℓ`; zero for `m = 0`.
pub fn q_m(m: usize, x: f64, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut yl = 1.0;
    for l in 0..m {
        sum += x.powi((m - 1 - l) as i32) * yl;
        yl *= y;
    }
    sum
}

/// `Σ_{m>=1} c_m q_m(x, y)`, regrouped as `Σ_j b_j y^j` with
/// `b_j = Σ_{m>j} c_m x^(m-1-j)` so that both Horner passes run together.
pub(crate) fn divided_sum(c: &[f64], x: f64, y: f64) -> f64 {
    let mut b = 0.0;
    let mut acc = 0.0;
    for j in (0..c.len().saturating_sub(1)).rev() {
        b = c[j + 1] + x * b;
        acc = acc * y + b;
    }
    acc
}

/// [`divided_sum`] with every term replaced by its magnitude.
pub(crate) fn divided_sum_abs(c: &[f64], x: f64, y: f64) -> f64 {
    let (x, y) = (x.abs(), y.abs());
    let mut b = 0.0;
    let mut acc = 0.0;
    for j in (0..c.len().saturating_sub(1)).rev() {
        b = c[j + 1].abs() + x * b;
        acc = acc * y + b;
    }
    acc
}

/// `N₁` at root-centred offsets `(u, v)`: `u v Σ_m λ_m q_{m-1}(u, v)`.
pub(crate) fn n1_local(lambdas: &[f64], u: f64, v: f64) -> f64 {
    if lambdas.len() < 2 {
        return 0.0;
    }
    u * v * divided_sum(&lambdas[1..], u, v)
}

/// Multiplies a coefficient list by `(x - alpha)`.
pub(crate) fn mul_linear(c: &[f64], alpha: f64) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (i, &ci) in c.iter().enumerate() {
        out[i + 1] += ci;
        out[i] -= alpha * ci;
    }
    out
}

/// Long division of `num` by a monic `den`.
pub(crate) fn div_rem(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dn = den.len() - 1;
    if num.len() <= dn {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0.0; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn] / den[dn];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    rem.truncate(dn);
    (quot, rem)
}

fn parse_numbers(body: &str) -> Result<Vec<f64>, PolyError> {
    body.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| PolyError::Parse(format!("`{t}` is not a number")))
        })
        .collect()
}

/// Splits `(alpha d)(alpha d)... [r0 r1 ...]` into factors and residual coefficients.
pub fn parse_factored(body: &str) -> Result<(Vec<Factor>, Vec<f64>), PolyError> {
    let mut factors = Vec::new();
    let mut rest = body.trim();
    while let Some(stripped) = rest.strip_prefix('(') {
        let close = stripped
            .find(')')
            .ok_or_else(|| PolyError::Parse("unclosed `(`".into()))?;
        let inner = parse_numbers(&stripped[..close])?;
        let [alpha, d] = inner[..] else {
            return Err(PolyError::Parse(format!(
                "factor `({})` needs a root and a multiplicity",
                &stripped[..close]
            )));
        };
        if d < 1.0 || d.fract() != 0.0 {
            return Err(PolyError::Parse(format!(
                "multiplicity `{d}` is not a positive integer"
            )));
        }
        factors.push((alpha, d as usize));
        rest = stripped[close + 1..].trim_start();
    }
    if factors.is_empty() {
        return Err(PolyError::Parse(
            "factored form needs at least one `(root multiplicity)`".into(),
        ));
    }
    let residual_text = rest.trim().trim_start_matches('[').trim_end_matches(']');
    let residual = parse_numbers(residual_text)?;
    Ok((factors, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_family(d: usize) -> Polynomial {
        Polynomial::from_factored(&[(-2.0, 1), (0.0, 1), (1.0, d)], &[]).unwrap()
    }

    fn central_diff(f: impl Fn(f64) -> f64, x: f64, order: usize) -> f64 {
        // Richardson-refined central differences, exact for low-degree polynomials
        let stencil = |h: f64| -> f64 {
            let mut s = 0.0;
            let mut binom = 1.0;
            for i in 0..=order {
                let offset = (order as f64 / 2.0 - i as f64) * h;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * binom * f(x + offset);
                binom = binom * (order - i) as f64 / (i + 1) as f64;
            }
            s / h.powi(order as i32)
        };
        let h = 0.25;
        let a = stencil(h);
        let b = stencil(h / 2.0);
        let c = stencil(h / 4.0);
        let ab = (4.0 * b - a) / 3.0;
        let bc = (4.0 * c - b) / 3.0;
        (16.0 * bc - ab) / 15.0
    }

    #[test]
    fn eval_examples() {
        let p = Polynomial::from_coeffs(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.eval(2.0), 3.0);
        let p2 = p_family(2);
        assert_eq!(p2.eval(1.0), 0.0);
        assert_eq!(p2.eval(-2.0), 0.0);
    }

    #[test]
    fn derivative_examples() {
        let cube = Polynomial::from_factored(&[(0.0, 3)], &[]).unwrap();
        assert_eq!(cube.derivative(2), vec![0.0, 6.0]);
        let p = Polynomial::from_coeffs(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.derivative(0), vec![-1.0, 0.0, 1.0]);
        assert!(p.derivative(3).is_empty());

        let p2 = p_family(2);
        let fd = central_diff(|x| p2.eval(x), 1.0, 2);
        assert!((fd - 6.0).abs() < 1e-9, "oracle {fd}");
        assert_eq!(horner(&p2.derivative(2), 1.0), 6.0);
    }

    #[test]
    fn lambda_examples() {
        let p2 = p_family(2);
        let oracle2 = central_diff(|x| p2.eval(x), 1.0, 2) / 2.0;
        let oracle3 = central_diff(|x| p2.eval(x), 1.0, 3) / 6.0;
        assert!((oracle2 - 3.0).abs() < 1e-9);
        assert!((oracle3 - 4.0).abs() < 1e-9);
        assert!((p2.lambda_m(1.0, 2) - 3.0).abs() < 1e-12);
        assert!((p2.lambda_m(1.0, 3) - 4.0).abs() < 1e-12);
        let root = p2.find_root(1.0).unwrap();
        assert_eq!(root.lambda(0), 0.0);
        assert_eq!(root.lambda(1), 0.0);
        assert_eq!(root.lambdas(), &[3.0, 4.0, 1.0]);
    }

    #[test]
    fn q_m_examples() {
        assert_eq!(q_m(2, 1.0, 2.0), 3.0);
        assert_eq!(q_m(3, 1.0, 1.0), 3.0);
        let oracle = (2f64.powi(4) - (-1f64).powi(4)) / (2.0 - (-1.0));
        assert_eq!(oracle, 5.0);
        assert_eq!(q_m(4, 2.0, -1.0), 5.0);
        assert_eq!(q_m(0, 3.0, 4.0), 0.0);
    }

    #[test]
    fn q_examples() {
        let sq = Polynomial::from_factored(&[(0.0, 2)], &[]).unwrap();
        for &(x, y) in &[(0.3, -1.2), (2.0, 2.0), (-4.0, 7.5)] {
            assert_eq!(sq.q(x, y), x + y);
        }
        let p = Polynomial::from_coeffs(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.q(1.0, 1.0), 3.0);
    }

    #[test]
    fn n_d_examples() {
        let p = Polynomial::from_coeffs(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.n_d(0.0, 2.0), (1.0, 2.0));

        let p2 = p_family(2);
        assert_eq!(p2.n_d(1.0, 1.0), (0.0, 0.0));
        let (n, d) = p2.n_d(0.4, 0.0);
        assert_eq!(n, 0.0 * d);
        let (n, d) = p2.n_d(-0.7, -2.0);
        assert!((n / d + 2.0).abs() < 1e-14);
    }

    #[test]
    fn n1_and_taylor_d_examples() {
        let p2 = p_family(2);
        let root = p2.find_root(1.0).unwrap().clone();
        assert_eq!(p2.n1(&root, 1.0, 0.3).unwrap(), 0.0);
        assert_eq!(p2.n1(&root, -0.4, 1.0).unwrap(), 0.0);
        let (n, d) = p2.n_d(1.1, 1.2);
        let n1 = p2.n1(&root, 1.1, 1.2).unwrap();
        assert!((n - (d + n1)).abs() <= 1e-10 * n.abs().max(1e-300));

        assert_eq!(p2.taylor_d(&root, 1.0, 1.0).unwrap(), 0.0);
        let td = p2.taylor_d(&root, 1.1, 1.0).unwrap();
        assert!((td - p2.q(1.1, 1.0)).abs() <= 1e-10 * td.abs());

        let p3 = p_family(3);
        let r3 = p3.find_root(1.0).unwrap().clone();
        let td = p3.taylor_d(&r3, 0.9, 1.05).unwrap();
        assert!((td - p3.q(0.9, 1.05)).abs() <= 1e-10 * td.abs());
    }

    #[test]
    fn simple_root_rejected_for_taylor_forms() {
        let p2 = p_family(2);
        let simple = p2.find_root(0.0).unwrap().clone();
        assert!(matches!(
            p2.n1(&simple, 0.1, 0.2),
            Err(PolyError::NotMultiple { .. })
        ));
        assert!(matches!(
            p2.taylor_d(&simple, 0.1, 0.2),
            Err(PolyError::NotMultiple { .. })
        ));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Polynomial::from_coeffs(&[1.0, 1.0]),
            Err(PolyError::DegreeTooLow(1))
        ));
        assert!(matches!(
            Polynomial::from_coeffs(&[1.0, 0.0, 2.0]),
            Err(PolyError::NotMonic(_))
        ));
        assert!(matches!(
            Polynomial::from_coeffs(&[f64::NAN, 0.0, 1.0]),
            Err(PolyError::NonFinite(0))
        ));
        // claimed double root that is simple
        let c = [-1.0, 0.0, 1.0];
        assert!(matches!(
            Polynomial::with_roots(&c, &[(1.0, 2)]),
            Err(PolyError::InvalidRoot { .. })
        ));
        // not a root at all
        assert!(matches!(
            Polynomial::with_roots(&c, &[(0.5, 1)]),
            Err(PolyError::InvalidRoot { .. })
        ));
        assert!(matches!(
            Polynomial::with_roots(&c, &[(1.0, 1), (-1.0, 1), (1.0, 1)]),
            Err(PolyError::TooManyRoots { .. }) | Err(PolyError::RootsTooClose(..))
        ));
        // corrupted coefficient
        let mut bad = p_family(2).coeffs().to_vec();
        bad[1] += 1e-3;
        assert!(Polynomial::with_roots(&bad, &[(-2.0, 1), (0.0, 1), (1.0, 2)]).is_err());
    }

    #[test]
    fn parse_forms() {
        let p = Polynomial::parse("factored: (-2 1)(0 1)(1 2)").unwrap();
        assert_eq!(p, p_family(2));
        let q = Polynomial::parse("coeffs: -1 0 1").unwrap();
        assert_eq!(q.roots().len(), 2);
        assert_eq!(q.roots()[0].alpha(), -1.0);
        let r = Polynomial::parse("factored: (1 2) [1 0 1]").unwrap();
        assert_eq!(r.degree(), 4);
        assert_eq!(r.roots().len(), 1);
        let r2 = Polynomial::parse("factored: (1 2) 1 0 1").unwrap();
        assert_eq!(r, r2);
        assert!(Polynomial::parse("roots: 1 2").is_err());
        assert!(Polynomial::parse("factored: (1 2.5)").is_err());
        assert!(Polynomial::parse("factored: (1)").is_err());
        assert!(Polynomial::parse("coeffs: 1 x 1").is_err());
    }

    #[test]
    fn coeffs_discover_multiple_roots() {
        for d in 2..=5 {
            let factored = p_family(d);
            let found = Polynomial::from_coeffs(factored.coeffs()).unwrap();
            let got: Vec<(f64, usize)> = found
                .roots()
                .iter()
                .map(|r| (r.alpha(), r.multiplicity()))
                .collect();
            assert_eq!(got.len(), 3, "d = {d}: {got:?}");
            assert_eq!(got[2].1, d);
            assert!((got[2].0 - 1.0).abs() < 1e-6);
        }
    }
}
