//! Basins of attraction on a pixel grid, image output, and the parity
//! experiment around a multiple root.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::focal::{curve_point, landing_to_curvature, CurveSpec, FocalError, LandingMap};
use crate::poly::Polynomial;
use crate::secmap::{iterate_orbit, secant_step, Classification, OrbitLimits, PlanePoint, PoleSet};

#[derive(Debug, Error)]
pub enum BasinError {
    #[error("invalid window: {0}")]
    Window(String),
    #[error("root index {0} out of range")]
    NoSuchRoot(usize),
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Focal(#[from] FocalError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to encode {path}: {message}")]
    Encode { path: String, message: String },
}

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
const MULTIPLE_COLORS: [Rgb; 3] = [[255, 0, 0], [160, 0, 0], [255, 128, 128]];
const SIMPLE_COLORS: [Rgb; 7] = [
    [0, 255, 0],
    [0, 0, 255],
    [255, 255, 0],
    [255, 0, 255],
    [0, 255, 255],
    [255, 128, 0],
    [128, 0, 255],
];

/// Rectangle of the plane sampled at the centres of `width × height` cells.
/// Row 0 is the top of the picture (largest `y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: usize,
    pub height: usize,
}

impl Window {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        width: usize,
        height: usize,
    ) -> Result<Self, BasinError> {
        let w = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
        };
        w.validate()?;
        Ok(w)
    }

    /// Square window of half-width `half` around `center`.
    pub fn around(center: PlanePoint, half: f64, pixels: usize) -> Result<Self, BasinError> {
        Self::new(
            center.x - half,
            center.x + half,
            center.y - half,
            center.y + half,
            pixels,
            pixels,
        )
    }

    pub fn validate(&self) -> Result<(), BasinError> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(BasinError::Window("bounds must be finite".into()));
        }
        if !(self.x_min < self.x_max && self.y_min < self.y_max) {
            return Err(BasinError::Window(format!(
                "need x_min < x_max and y_min < y_max, got [{}, {}] x [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(BasinError::Window("size must be positive".into()));
        }
        Ok(())
    }

    /// Centre of cell `(col, row)`.
    ///
    /// Offsets are taken from the window midpoint in half-integer multiples
    /// of the cell size, so mirrored cells of a symmetric window get exactly
    /// negated coordinates.
    pub fn cell_center(&self, col: usize, row: usize) -> PlanePoint {
        let dx = (self.x_max - self.x_min) / self.width as f64;
        let dy = (self.y_max - self.y_min) / self.height as f64;
        let mid_x = 0.5 * (self.x_min + self.x_max);
        let mid_y = 0.5 * (self.y_min + self.y_max);
        let ox = (col as f64 + 0.5) - 0.5 * self.width as f64;
        let oy = 0.5 * self.height as f64 - (row as f64 + 0.5);
        PlanePoint::new(mid_x + ox * dx, mid_y + oy * dy)
    }
}

/// Colours by root index: roots of multiplicity >= 2 in reds, simple roots
/// in green, blue, then further hues in ascending order of the root.
pub fn default_palette(p: &Polynomial) -> Vec<Rgb> {
    let mut multiple = MULTIPLE_COLORS.iter().cycle();
    let mut simple = SIMPLE_COLORS.iter().cycle();
    p.roots()
        .iter()
        .map(|r| {
            if r.multiplicity() >= 2 {
                *multiple.next().unwrap()
            } else {
                *simple.next().unwrap()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub window: Window,
    /// Row-major, top row first.
    pub cells: Vec<Classification>,
    pub palette: Vec<Rgb>,
    pub limits: OrbitLimits,
}

impl BasinGrid {
    pub fn cell(&self, col: usize, row: usize) -> Classification {
        self.cells[row * self.window.width + col]
    }

    pub fn color(&self, c: Classification) -> Rgb {
        match c {
            Classification::Converged(i) => self.palette.get(i).copied().unwrap_or(WHITE),
            _ => WHITE,
        }
    }

    /// RGB bytes, row-major, top row first.
    pub fn rgb_buffer(&self) -> Vec<u8> {
        self.cells.iter().flat_map(|&c| self.color(c)).collect()
    }

    /// Binary PPM (`P6`, maxval 255).
    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.window.width, self.window.height).into_bytes();
        out.extend(self.rgb_buffer());
        out
    }

    pub fn histogram(&self) -> BTreeMap<Classification, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.cells {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    /// Roots reached from cells whose centre lies within `radius` of `center`.
    pub fn converged_roots_in_disc(&self, center: PlanePoint, radius: f64) -> BTreeSet<usize> {
        let w = &self.window;
        let mut roots = BTreeSet::new();
        for row in 0..w.height {
            for col in 0..w.width {
                if w.cell_center(col, row).dist(center) <= radius {
                    if let Classification::Converged(i) = self.cell(col, row) {
                        roots.insert(i);
                    }
                }
            }
        }
        roots
    }
}

/// Classifies every cell centre of `w` in the current rayon pool. Cells are
/// independent, so the grid does not depend on the number of workers.
pub fn render_basin(p: &Polynomial, w: &Window, limits: &OrbitLimits) -> BasinGrid {
    let mut cells = vec![Classification::NonConvergent; w.width * w.height];
    cells.par_chunks_mut(w.width).enumerate().for_each(|(row, out)| {
        for (col, cell) in out.iter_mut().enumerate() {
            *cell = iterate_orbit(p, w.cell_center(col, row), limits, false).classification;
        }
    });
    BasinGrid {
        window: *w,
        cells,
        palette: default_palette(p),
        limits: *limits,
    }
}

/// [`render_basin`] on a dedicated pool of `threads` workers.
pub fn render_basin_with_threads(
    p: &Polynomial,
    w: &Window,
    limits: &OrbitLimits,
    threads: usize,
) -> Result<BasinGrid, BasinError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| BasinError::Pool(e.to_string()))?;
    Ok(pool.install(|| render_basin(p, w, limits)))
}

/// Writes PNG when the path ends in `.png`, binary PPM otherwise.
pub fn write_image(g: &BasinGrid, path: impl AsRef<Path>) -> Result<(), BasinError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let is_png = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if is_png {
        image::save_buffer(
            path,
            &g.rgb_buffer(),
            g.window.width as u32,
            g.window.height as u32,
            image::ExtendedColorType::Rgb8,
        )
        .map_err(|e| BasinError::Encode {
            path: name,
            message: e.to_string(),
        })
    } else {
        fs::write(path, g.ppm_bytes()).map_err(|source| BasinError::Io { path: name, source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub root: usize,
    pub seed: PlanePoint,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    pub root_index: usize,
    pub alpha: f64,
    pub multiplicity: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub rng_seed: u64,
    pub quadrant_only: bool,
    pub counts: BTreeMap<Classification, usize>,
    /// Even multiplicity only: seeds near `(α, α)` reaching simple roots.
    pub witnesses: Vec<Witness>,
}

impl ParityReport {
    pub fn count(&self, c: Classification) -> usize {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    /// Fraction of samples converging to the root under study.
    pub fn fraction_to_root(&self) -> f64 {
        self.count(Classification::Converged(self.root_index)) as f64 / self.samples as f64
    }

    pub fn counts_csv(&self) -> String {
        let mut s = String::from("classification,count\n");
        for (c, n) in &self.counts {
            let _ = writeln!(s, "{c},{n}");
        }
        s
    }

    pub fn witnesses_csv(&self) -> String {
        let mut s = String::from("root,x,y,iterations\n");
        for w in &self.witnesses {
            let _ = writeln!(s, "{},{:e},{:e},{}", w.root, w.seed.x, w.seed.y, w.iterations);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityOptions {
    pub limits: OrbitLimits,
    /// Sample only `{x >= α, y >= α}`.
    pub quadrant_only: bool,
    /// Search for witnesses along slope `-1` curves (even multiplicity only).
    pub witnesses: bool,
}

impl Default for ParityOptions {
    fn default() -> Self {
        Self {
            limits: OrbitLimits::default(),
            quadrant_only: false,
            witnesses: true,
        }
    }
}

/// Samples `n` seeds uniformly in the disc of radius `epsilon` around
/// `(α, α)` (rejection from the bounding square, ChaCha8 seeded with
/// `rng_seed`; points on the pole curve are redrawn) and classifies each
/// orbit. For even multiplicity it also looks for seeds reaching every simple
/// root along slope `-1` curves aimed by the landing map.
pub fn parity_experiment(
    p: &Polynomial,
    root_index: usize,
    epsilon: f64,
    n: usize,
    rng_seed: u64,
    opts: &ParityOptions,
) -> Result<ParityReport, BasinError> {
    let root = p.root(root_index).ok_or(BasinError::NoSuchRoot(root_index))?;
    if root.multiplicity() < 2 {
        return Err(BasinError::Parameter(format!(
            "root {} is simple; the experiment needs multiplicity >= 2",
            root.alpha()
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(BasinError::Parameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if n == 0 {
        return Err(BasinError::Parameter("sample count must be positive".into()));
    }
    let alpha = root.alpha();
    let poles = PoleSet::new(p, opts.limits.pole_guard);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let lo = if opts.quadrant_only { 0.0 } else { -1.0 };

    let mut seeds = Vec::with_capacity(n);
    while seeds.len() < n {
        let u: f64 = rng.random_range(lo..1.0);
        let v: f64 = rng.random_range(lo..1.0);
        if u * u + v * v >= 1.0 {
            continue;
        }
        let seed = PlanePoint::new(alpha + epsilon * u, alpha + epsilon * v);
        if poles.contains(seed) {
            continue;
        }
        seeds.push(seed);
    }

    let classes: Vec<Classification> = seeds
        .par_iter()
        .map(|&s| iterate_orbit(p, s, &opts.limits, false).classification)
        .collect();
    let mut counts = BTreeMap::new();
    for c in classes {
        *counts.entry(c).or_insert(0) += 1;
    }

    let mut witnesses = Vec::new();
    if opts.witnesses && root.multiplicity() % 2 == 0 {
        for (j, other) in p.roots().iter().enumerate() {
            if other.is_simple() {
                if let Some(w) = find_witness(p, root_index, j, epsilon, &opts.limits)? {
                    witnesses.push(w);
                }
            }
        }
    }

    Ok(ParityReport {
        root_index,
        alpha,
        multiplicity: root.multiplicity(),
        epsilon,
        samples: n,
        rng_seed,
        quadrant_only: opts.quadrant_only,
        counts,
        witnesses,
    })
}

/// Lines scanned by [`find_witness`] before giving up.
pub const WITNESS_LINES: usize = 1 << 22;

/// Pole guard for witness orbits: the rounding level of `D`.
///
/// A witness orbit passes next to `(α, β)`, where `D ≈ p(y₀) / (α - β)`
/// is of order `|y₀ - α|^d`; for `d = 4` and `ε = 10⁻³` that is below
/// `10⁻¹²` although `D` is still resolved to about three digits.
pub const WITNESS_POLE_GUARD: f64 = 4.0 * f64::EPSILON;

/// Looks for a seed within `epsilon` of `(α, α)` whose orbit converges to
/// root `target`.
///
/// The landing map gives the curvature `κ` whose slope `-1` curve
/// `Γ_{-1, κ, 0, 0}` lands on `(α, β)`, and the search starts on that curve
/// at the largest `t` inside the disc. On each vertical line through the
/// curve, the ordinate where the first image crosses `y = β` is located down
/// to adjacent doubles. Only images within roughly `|p(y₀)| / |p'(β)(α - β)|`
/// of `β` go on to `β`, a window that shrinks like `|y₀ - α|^d` and for
/// larger `d` falls below the spacing of first images between neighbouring
/// seeds. Lines are therefore stepped one double at a time towards `α`,
/// each giving a fresh residue, until a crossing is close enough.
pub fn find_witness(
    p: &Polynomial,
    root_index: usize,
    target: usize,
    epsilon: f64,
    limits: &OrbitLimits,
) -> Result<Option<Witness>, BasinError> {
    let root = p.root(root_index).ok_or(BasinError::NoSuchRoot(root_index))?;
    let beta = p.root(target).ok_or(BasinError::NoSuchRoot(target))?.alpha();
    let alpha = root.alpha();
    let limits = &OrbitLimits {
        pole_guard: limits.pole_guard.min(WITNESS_POLE_GUARD),
        ..*limits
    };
    let lm = LandingMap::new(root)?;
    let kappa = landing_to_curvature(&lm, beta)?;
    let curve = CurveSpec::new(PlanePoint::new(alpha, alpha), -1.0, kappa);

    let slope_beta = p.lambda_m(beta, 1).abs() * (alpha - beta).abs();
    let gap = p
        .roots()
        .iter()
        .map(|r| (r.alpha() - beta).abs())
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    let ulp_beta = beta.abs().max(f64::MIN_POSITIVE).next_up() - beta.abs().max(f64::MIN_POSITIVE);

    let miss = |x: f64, y: f64| -> Option<f64> {
        secant_step(p, PlanePoint::new(x, y), limits)
            .ok()
            .map(|s| s.y - beta)
    };
    let try_seed = |x: f64, y: f64| -> Option<Witness> {
        let seed = PlanePoint::new(x, y);
        let g = miss(x, y)?;
        let window = 25.0 * gap * p.eval(y).abs() / slope_beta;
        if seed.dist(curve.base) >= epsilon || g.abs() > window.max(4.0 * ulp_beta) {
            return None;
        }
        let r = iterate_orbit(p, seed, limits, false);
        (r.classification == Classification::Converged(target)).then_some(Witness {
            root: target,
            seed,
            iterations: r.iterations,
        })
    };

    let mut t = epsilon;
    while curve_point(&curve, t).dist(curve.base) >= epsilon {
        t *= 0.95;
    }
    let aim = curve_point(&curve, t);
    let Some(g0) = miss(aim.x, aim.y) else {
        return Ok(None);
    };

    // initial bracket on the first line, widened around the curve
    let mut width = 1e-6 * t * t;
    let mut bracket = None;
    while bracket.is_none() && width < t {
        for y in [aim.y - width, aim.y + width] {
            if miss(aim.x, y).is_some_and(|g| g.signum() != g0.signum()) {
                bracket = Some(if y < aim.y { (y, aim.y) } else { (aim.y, y) });
                break;
            }
        }
        width *= 2.0;
    }
    let Some((lo, hi)) = bracket else { return Ok(None) };
    // sign of the miss below the crossing; locally monotone in y
    let below_positive = miss(aim.x, lo).is_some_and(|g| g > 0.0);

    // bisects a sign change of the miss on the line `x` down to adjacent doubles
    let refine = |x: f64, mut lo: f64, mut hi: f64| -> Option<(f64, f64)> {
        while lo.next_up() < hi {
            let mid = 0.5 * (lo + hi);
            if (miss(x, mid)? > 0.0) == below_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((lo, hi))
    };
    // gallops from `guess` to a sign change, then refines it
    let locate = |x: f64, guess: f64| -> Option<(f64, f64)> {
        let up = (miss(x, guess)? > 0.0) == below_positive;
        let mut from = guess;
        let mut step = f64::EPSILON * guess.abs().max(1e-300);
        for _ in 0..80 {
            let to = if up { from + step } else { from - step };
            if ((miss(x, to)? > 0.0) == below_positive) != up {
                return if up {
                    refine(x, from, to)
                } else {
                    refine(x, to, from)
                };
            }
            from = to;
            step *= 2.0;
        }
        None
    };

    let (mut lo, mut hi) = match refine(aim.x, lo, hi) {
        Some(b) => b,
        None => return Ok(None),
    };
    let mut x = aim.x;
    let inward = alpha < x;
    for _ in 0..WITNESS_LINES {
        for y in [lo, hi] {
            if let Some(w) = try_seed(x, y) {
                return Ok(Some(w));
            }
        }
        x = if inward { x.next_down() } else { x.next_up() };
        match locate(x, lo) {
            Some(b) => (lo, hi) = b,
            None => return Ok(None),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(d: usize) -> Polynomial {
        Polynomial::from_factored(&[(-2.0, 1), (0.0, 1), (1.0, d)], &[]).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(1.0, 0.0, 0.0, 1.0, 2, 2).is_err());
        assert!(Window::new(0.0, 1.0, 0.0, 1.0, 0, 2).is_err());
        assert!(Window::new(0.0, f64::NAN, 0.0, 1.0, 2, 2).is_err());
        let w = Window::new(-3.0, 3.0, -3.0, 3.0, 6, 6).unwrap();
        assert_eq!(w.cell_center(0, 0), PlanePoint::new(-2.5, 2.5));
        assert_eq!(w.cell_center(5, 5), PlanePoint::new(2.5, -2.5));
    }

    #[test]
    fn ppm_single_pixel() {
        let g = BasinGrid {
            window: Window::new(0.0, 1.0, 0.0, 1.0, 1, 1).unwrap(),
            cells: vec![Classification::Converged(0)],
            palette: vec![[255, 0, 0]],
            limits: OrbitLimits::default(),
        };
        assert_eq!(g.ppm_bytes(), b"P6\n1 1\n255\n\xff\x00\x00".to_vec());
    }

    #[test]
    fn ppm_two_pixels() {
        let g = BasinGrid {
            window: Window::new(0.0, 1.0, 0.0, 1.0, 2, 1).unwrap(),
            cells: vec![Classification::Converged(0), Classification::Converged(1)],
            palette: vec![[255, 0, 0], [0, 0, 255]],
            limits: OrbitLimits::default(),
        };
        let mut expect = b"P6\n2 1\n255\n".to_vec();
        expect.extend([0xff, 0, 0, 0, 0, 0xff]);
        assert_eq!(g.ppm_bytes(), expect);
    }

    #[test]
    fn palette_follows_figure_convention() {
        let pal = default_palette(&family(2));
        assert_eq!(pal, vec![[0, 255, 0], [0, 0, 255], [255, 0, 0]]);
    }

    #[test]
    fn fixed_point_cell_converges() {
        let p = Polynomial::from_coeffs(&[-1.0, 0.0, 1.0]).unwrap();
        // the middle cell of a 5x5 grid on [-1, 3]^2 is centred on (1, 1)
        let w = Window::new(-1.0, 3.0, -1.0, 3.0, 5, 5).unwrap();
        assert_eq!(w.cell_center(2, 2), PlanePoint::new(1.0, 1.0));
        let g = render_basin(&p, &w, &OrbitLimits::basin());
        assert_eq!(g.cell(2, 2), Classification::Converged(1));
    }

    #[test]
    fn parity_rejects_bad_input() {
        let p = family(2);
        let o = ParityOptions::default();
        assert!(parity_experiment(&p, 0, 1e-3, 10, 1, &o).is_err());
        assert!(parity_experiment(&p, 7, 1e-3, 10, 1, &o).is_err());
        assert!(parity_experiment(&p, 2, -1.0, 10, 1, &o).is_err());
        assert!(parity_experiment(&p, 2, 1e-3, 0, 1, &o).is_err());
    }

    #[test]
    fn parity_report_is_reproducible() {
        let p = family(3);
        let o = ParityOptions::default();
        let a = parity_experiment(&p, 2, 1e-3, 200, 42, &o).unwrap();
        let b = parity_experiment(&p, 2, 1e-3, 200, 42, &o).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<usize>(), 200);
        assert!(a.witnesses.is_empty());
        assert!(a.counts_csv().starts_with("classification,count\n"));
    }
}
