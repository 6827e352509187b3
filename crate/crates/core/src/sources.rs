//! Volumic sources, their tangential Fourier modes and wall traces.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::fem1d::QuadGrid;
use crate::frame::FrameVec;
use crate::geometry::{SeparableGeometry, WallId};
use crate::params::MaterialParams;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Modal energy fraction of the highest retained mode above which the
/// truncation is reported as too coarse.
pub const ALIASING_TOLERANCE: f64 = 1e-8;

/// Value, gradient and Hessian of a Cartesian vector field at a point.
/// `grad[c][d] = ∂_d f_c`, `hess[c][d][e] = ∂_d ∂_e f_c`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet {
    pub value: [C64; 2],
    pub grad: [[C64; 2]; 2],
    pub hess: [[[C64; 2]; 2]; 2],
}

impl FieldJet {
    /// Scalar curl `∂_x f_y - ∂_y f_x`.
    pub fn curl(&self) -> C64 {
        self.grad[1][0] - self.grad[0][1]
    }

    /// Vector curl of the scalar curl: `(∂_y curl f, -∂_x curl f)`.
    pub fn curlcurl(&self) -> [C64; 2] {
        [
            self.hess[1][0][1] - self.hess[0][1][1],
            -self.hess[1][0][0] + self.hess[0][0][1],
        ]
    }

    fn accumulate(&mut self, o: &FieldJet) {
        for c in 0..2 {
            self.value[c] += o.value[c];
            for d in 0..2 {
                self.grad[c][d] += o.grad[c][d];
                for e in 0..2 {
                    self.hess[c][d][e] += o.hess[c][d][e];
                }
            }
        }
    }
}

/// A smooth Cartesian vector field, periodic in the tangential direction of
/// the geometry it is used with.
pub trait SourceField: Send + Sync + fmt::Debug {
    fn jet(&self, x: [f64; 2]) -> FieldJet;
}

/// Gradient of the Gaussian `exp(-|x - x0|²/width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianGradient {
    pub center: [f64; 2],
    pub width: f64,
}

impl GaussianGradient {
    /// The reference source: centre (0.75, 0.5), width 0.005.
    pub fn reference() -> Self {
        GaussianGradient { center: [0.75, 0.5], width: 0.005 }
    }

    /// Peak magnitude of the gradient, `√(2/width)·e^{-1/2}`.
    pub fn peak(&self) -> f64 {
        (2.0 / self.width).sqrt() * (-0.5f64).exp()
    }

    /// Gradient magnitude at distance `d` from the centre.
    pub fn magnitude_at(&self, d: f64) -> f64 {
        2.0 * d / self.width * (-d * d / self.width).exp()
    }
}

impl SourceField for GaussianGradient {
    fn jet(&self, x: [f64; 2]) -> FieldJet {
        let d = [x[0] - self.center[0], x[1] - self.center[1]];
        let w = self.width;
        let g = (-(d[0] * d[0] + d[1] * d[1]) / w).exp();
        let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let mut jet = FieldJet::default();
        for i in 0..2 {
            jet.value[i] = C64::new(-2.0 * d[i] / w * g, 0.0);
            for j in 0..2 {
                let gij = (-2.0 * delta(i, j) / w + 4.0 * d[i] * d[j] / (w * w)) * g;
                jet.grad[i][j] = C64::new(gij, 0.0);
                for k in 0..2 {
                    let gijk = 4.0 * (delta(i, k) * d[j] + delta(j, k) * d[i]) / (w * w) * g
                        + (-2.0 * delta(i, j) / w + 4.0 * d[i] * d[j] / (w * w)) * (-2.0 * d[k] / w) * g;
                    jet.hess[i][j][k] = C64::new(gijk, 0.0);
                }
            }
        }
        jet
    }
}

/// Frame components `(a, u)` of a single-mode profile with their first two
/// derivatives in the wall-normal coordinate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProfileJet {
    pub a: [C64; 3],
    pub u: [C64; 3],
}

/// Wall-normal profile of a single tangential mode.
pub trait ModalProfile: Send + Sync + fmt::Debug {
    fn jet(&self, y: f64) -> ProfileJet;
}

/// Profile given by a closure.
pub struct FnProfile<F>(pub F);

impl<F> fmt::Debug for FnProfile<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnProfile")
    }
}

impl<F: Fn(f64) -> ProfileJet + Send + Sync> ModalProfile for FnProfile<F> {
    fn jet(&self, y: f64) -> ProfileJet {
        (self.0)(y)
    }
}

/// Natural cubic spline through complex samples.
#[derive(Debug, Clone)]
struct ComplexSpline {
    x: Vec<f64>,
    y: Vec<C64>,
    m: Vec<C64>,
}

impl ComplexSpline {
    fn new(x: Vec<f64>, y: Vec<C64>) -> Self {
        let n = x.len();
        let mut m = vec![ZERO; n];
        if n > 2 {
            // Thomas algorithm for the interior second derivatives.
            let mut diag = vec![0.0; n];
            let mut rhs = vec![ZERO; n];
            let mut upper = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0) * 6.0;
                if i > 1 {
                    let f = h0 / diag[i - 1];
                    diag[i] -= f * upper[i - 1];
                    rhs[i] = rhs[i] - rhs[i - 1] * f;
                }
            }
            for i in (1..n - 1).rev() {
                let next = if i + 1 < n - 1 { m[i + 1] * upper[i] } else { ZERO };
                m[i] = (rhs[i] - next) / diag[i];
            }
        }
        ComplexSpline { x, y, m }
    }

    fn eval(&self, t: f64) -> [C64; 3] {
        let n = self.x.len();
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (y0, y1, m0, m1) = (self.y[i], self.y[i + 1], self.m[i], self.m[i + 1]);
        let v = y0 * a + y1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let d = (y1 - y0) / h + (m1 * (3.0 * b * b - 1.0) - m0 * (3.0 * a * a - 1.0)) * (h / 6.0);
        let dd = m0 * a + m1 * b;
        [v, d, dd]
    }
}

/// Profile interpolated by natural cubic splines from tabulated samples.
#[derive(Debug, Clone)]
pub struct TabulatedProfile {
    a: ComplexSpline,
    u: ComplexSpline,
}

impl TabulatedProfile {
    pub fn new(y: Vec<f64>, a: Vec<C64>, u: Vec<C64>) -> Result<Self> {
        if y.len() < 2 || a.len() != y.len() || u.len() != y.len() {
            return Err(Error::Parse("profile needs at least two samples per column".into()));
        }
        if !y.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parse("profile abscissae must be strictly increasing".into()));
        }
        Ok(TabulatedProfile { a: ComplexSpline::new(y.clone(), a), u: ComplexSpline::new(y, u) })
    }

    /// Read CSV rows `y, Re a, Im a, Re u, Im u`, where `a` is the wall-normal
    /// and `u` the tangential component. Lines starting with `#` are ignored,
    /// as is a non-numeric header row.
    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let (mut y, mut a, mut u) = (Vec::new(), Vec::new(), Vec::new());
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            let vals = match parsed {
                Ok(v) => v,
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("row {}: {e}", line + 1))),
            };
            if vals.len() != 5 {
                return Err(Error::Parse(format!("row {}: expected 5 columns, found {}", line + 1, vals.len())));
            }
            y.push(vals[0]);
            a.push(C64::new(vals[1], vals[2]));
            u.push(C64::new(vals[3], vals[4]));
        }
        Self::new(y, a, u)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }
}

impl ModalProfile for TabulatedProfile {
    fn jet(&self, y: f64) -> ProfileJet {
        ProfileJet { a: self.a.eval(y), u: self.u.eval(y) }
    }
}

/// Description of the volumic source.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    /// Gaussian gradient; periodized with the nearest images on the strip.
    GaussianGradient(GaussianGradient),
    /// Arbitrary smooth field, assumed periodic in the tangential direction.
    Field(Arc<dyn SourceField>),
    /// A single tangential mode with a given wall-normal profile.
    ModalManufactured { k: i64, profile: Arc<dyn ModalProfile> },
}

impl SourceSpec {
    pub fn reference() -> Self {
        SourceSpec::GaussianGradient(GaussianGradient::reference())
    }

    /// Check the source against a geometry. Gaussians must lie inside the
    /// domain with negligible magnitude on the walls.
    pub fn validate(&self, geom: &SeparableGeometry) -> Result<()> {
        if let SourceSpec::GaussianGradient(g) = self {
            if !(g.width.is_finite() && g.width > 0.0) {
                return Err(Error::invalid("width", format!("must be > 0, got {}", g.width)));
            }
            let (lo, hi) = geom.normal_interval();
            let yc = if geom.is_strip() { g.center[1] } else { g.center[0].hypot(g.center[1]) };
            if !(yc > lo && yc < hi) {
                return Err(Error::invalid("center", "Gaussian centre lies outside the domain"));
            }
            let d = (yc - lo).min(hi - yc);
            // Beyond the maximum of the radial profile the magnitude decreases.
            let wall = if d * d > g.width / 2.0 { g.magnitude_at(d) } else { g.peak() };
            if wall > 1e-10 * g.peak() {
                return Err(Error::invalid("center", format!("Gaussian is not localized away from the walls (relative wall value {:.2e})", wall / g.peak())));
            }
        }
        if let SourceSpec::ModalManufactured { .. } = self {
            return Ok(());
        }
        Ok(())
    }

    fn cartesian_jet(&self, geom: &SeparableGeometry, p: [f64; 2]) -> FieldJet {
        match self {
            SourceSpec::GaussianGradient(g) => {
                if let SeparableGeometry::StripTorus { period, .. } = *geom {
                    let mut jet = FieldJet::default();
                    for m in -1..=1 {
                        jet.accumulate(&g.jet([p[0] - m as f64 * period, p[1]]));
                    }
                    jet
                } else {
                    g.jet(p)
                }
            }
            SourceSpec::Field(f) => f.jet(p),
            SourceSpec::ModalManufactured { .. } => unreachable!("modal sources have no Cartesian jet"),
        }
    }

    /// Source value and its curl–curl, in frame components, at tangential
    /// parameter `x` and wall-normal coordinate `y`.
    pub fn eval(&self, geom: &SeparableGeometry, x: f64, y: f64) -> (FrameVec, FrameVec) {
        match self {
            SourceSpec::ModalManufactured { k, profile } => {
                let phase = C64::from_polar(1.0, geom.mode_wavenumber(*k) * x);
                let (f, cc) = modal_curlcurl(geom, *k, y, &profile.jet(y));
                (f * phase, cc * phase)
            }
            _ => {
                let jet = self.cartesian_jet(geom, geom.point(x, y));
                let (ea, eu) = geom.frame(x);
                let cc = jet.curlcurl();
                let proj = |v: [C64; 2], e: [f64; 2]| v[0] * e[0] + v[1] * e[1];
                (
                    FrameVec::new(proj(jet.value, ea), proj(jet.value, eu)),
                    FrameVec::new(proj(cc, ea), proj(cc, eu)),
                )
            }
        }
    }
}

/// Frame value and curl–curl of mode `k` from its profile jet.
pub fn modal_curlcurl(geom: &SeparableGeometry, k: i64, y: f64, p: &ProfileJet) -> (FrameVec, FrameVec) {
    let t = geom.tangential(y, k);
    let dt = geom.tangential_dy(y, k);
    let c = geom.metric(y);
    let dc = geom.metric_dy(y);
    let [a, da, _] = p.a;
    let [u, du, ddu] = p.u;
    let psi = du + u * c - t * a;
    let dpsi = ddu + u * dc + du * c - dt * a - t * da;
    (FrameVec::new(a, u), FrameVec::new(t * psi, -dpsi))
}

/// Evaluates modal coefficients of a source at arbitrary wall-normal positions.
#[derive(Clone)]
struct Sampler {
    spec: SourceSpec,
    geom: SeparableGeometry,
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sampler").field("spec", &self.spec).field("samples", &self.n).finish()
    }
}

/// Normalized DFT coefficients of `(f_a, f_u, cc_a, cc_u)` at one `y`.
type Coefficients = [Vec<C64>; 4];

impl Sampler {
    fn coefficients(&self, y: f64) -> Coefficients {
        let n = self.n;
        let mut out: Coefficients = std::array::from_fn(|_| vec![ZERO; n]);
        let period = self.geom.tangential_period();
        for j in 0..n {
            let x = period * j as f64 / n as f64;
            let (f, cc) = self.spec.eval(&self.geom, x, y);
            out[0][j] = f.a;
            out[1][j] = f.u;
            out[2][j] = cc.a;
            out[3][j] = cc.u;
        }
        let scale = 1.0 / n as f64;
        for v in out.iter_mut() {
            self.fft.process(v);
            v.iter_mut().for_each(|z| *z *= scale);
        }
        out
    }

    fn mode_from(&self, c: &Coefficients, k: i64) -> (FrameVec, FrameVec) {
        let idx = k.rem_euclid(self.n as i64) as usize;
        (FrameVec::new(c[0][idx], c[1][idx]), FrameVec::new(c[2][idx], c[3][idx]))
    }

    fn mode_at(&self, k: i64, y: f64) -> (FrameVec, FrameVec) {
        match &self.spec {
            SourceSpec::ModalManufactured { k: km, profile } => {
                if *km == k {
                    modal_curlcurl(&self.geom, k, y, &profile.jet(y))
                } else {
                    (FrameVec::ZERO, FrameVec::ZERO)
                }
            }
            _ => {
                // Single-frequency DFT.
                let n = self.n;
                let period = self.geom.tangential_period();
                let mut f = FrameVec::ZERO;
                let mut cc = FrameVec::ZERO;
                for j in 0..n {
                    let x = period * j as f64 / n as f64;
                    let (fj, ccj) = self.spec.eval(&self.geom, x, y);
                    let w = C64::from_polar(1.0 / n as f64, -2.0 * std::f64::consts::PI * (k * j as i64) as f64 / n as f64);
                    f += fj * w;
                    cc += ccj * w;
                }
                (f, cc)
            }
        }
    }
}

/// Wall values of one source mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallTrace {
    pub wall: WallId,
    /// `f·n`.
    pub normal: C64,
    /// `f·n⊥`.
    pub perp: C64,
    /// `∂_Γ(f·n⊥)`.
    pub d_perp: C64,
    /// `∂_Γ(κ f·n⊥)`.
    pub d_kappa_perp: C64,
    /// `(curl curl f)·n`.
    pub curlcurl_normal: C64,
}

/// One tangential Fourier mode of the source sampled on a quadrature grid.
#[derive(Debug, Clone)]
pub struct ModalSource {
    pub k: i64,
    /// Source values at the grid points.
    pub f: Vec<FrameVec>,
    /// Curl–curl of the source at the grid points.
    pub curlcurl: Vec<FrameVec>,
    pub traces: [WallTrace; 2],
    /// `∫ |f̂|² dμ` over the wall-normal interval.
    pub energy: f64,
    sampler: Arc<Sampler>,
}

impl ModalSource {
    /// Source value and curl–curl of this mode at an arbitrary `y`.
    pub fn eval(&self, y: f64) -> (FrameVec, FrameVec) {
        self.sampler.mode_at(self.k, y)
    }

    pub fn grid_len(&self) -> usize {
        self.f.len()
    }

    /// Single-mode source from a wall-normal profile, sampled on `grid`.
    pub fn manufactured(geom: &SeparableGeometry, grid: &QuadGrid, k: i64, profile: Arc<dyn ModalProfile>) -> Result<Self> {
        let set = project_to_modes(&SourceSpec::ModalManufactured { k, profile }, geom, grid, k.unsigned_abs() as usize)?;
        Ok(set.mode(k).expect("mode within truncation").clone())
    }
}

/// Outcome of the modal projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionReport {
    pub samples: usize,
    /// Energy of the sampled 2D field.
    pub energy_2d: f64,
    /// Energy carried by the retained modes.
    pub energy_modes: f64,
    /// Largest energy fraction of the modes `±K`.
    pub top_mode_fraction: f64,
    pub aliasing_warning: bool,
}

impl ProjectionReport {
    /// Relative Parseval defect `|E_2D - E_modes| / E_2D`.
    pub fn parseval_defect(&self) -> f64 {
        if self.energy_2d == 0.0 {
            0.0
        } else {
            (self.energy_2d - self.energy_modes).abs() / self.energy_2d
        }
    }
}

/// All modes `-K..=K` of a source.
#[derive(Debug, Clone)]
pub struct ModalSourceSet {
    pub truncation: usize,
    pub modes: Vec<ModalSource>,
    pub report: ProjectionReport,
}

impl ModalSourceSet {
    pub fn mode(&self, k: i64) -> Option<&ModalSource> {
        let idx = k + self.truncation as i64;
        if idx < 0 {
            return None;
        }
        self.modes.get(idx as usize)
    }

    /// Source and curl–curl of every retained mode at `y`, indexed like
    /// [`ModalSourceSet::modes`]. One tangential transform serves all modes.
    pub fn eval_modes(&self, y: f64) -> Vec<(FrameVec, FrameVec)> {
        let Some(first) = self.modes.first() else { return Vec::new() };
        let sampler = &first.sampler;
        let kmax = self.truncation as i64;
        if matches!(sampler.spec, SourceSpec::ModalManufactured { .. }) {
            (-kmax..=kmax).map(|k| sampler.mode_at(k, y)).collect()
        } else {
            let c = sampler.coefficients(y);
            (-kmax..=kmax).map(|k| sampler.mode_from(&c, k)).collect()
        }
    }

    /// Modes whose energy exceeds `rel_threshold` times the largest one, in
    /// increasing order of `k`.
    pub fn active(&self, rel_threshold: f64) -> Vec<&ModalSource> {
        let emax = self.modes.iter().map(|m| m.energy).fold(0.0, f64::max);
        if emax == 0.0 {
            return Vec::new();
        }
        self.modes.iter().filter(|m| m.energy > rel_threshold * emax).collect()
    }
}

fn wall_trace(geom: &SeparableGeometry, wall: WallId, k: i64, f: FrameVec, cc: FrameVec) -> WallTrace {
    let w = geom.wall(wall);
    let tau = geom.tangential_symbol(wall, k);
    let perp = f.u * geom.perp_sign(wall);
    WallTrace {
        wall,
        normal: f.a * w.orientation,
        perp,
        d_perp: tau * perp,
        d_kappa_perp: tau * perp * w.curvature,
        curlcurl_normal: cc.a * w.orientation,
    }
}

/// Project a source onto the tangential modes `|k| ≤ K`, sampled at the points
/// of `grid` and at both walls.
///
/// Coefficients are computed with an FFT over `max(4K+4, 16)` equispaced
/// tangential samples. A warning is logged when the highest retained mode
/// carries more than [`ALIASING_TOLERANCE`] of the energy.
pub fn project_to_modes(spec: &SourceSpec, geom: &SeparableGeometry, grid: &QuadGrid, truncation: usize) -> Result<ModalSourceSet> {
    spec.validate(geom)?;
    let kmax = truncation as i64;
    if let SourceSpec::ModalManufactured { k, .. } = spec {
        if k.abs() > kmax {
            return Err(Error::invalid("truncation", format!("mode {k} exceeds the truncation {truncation}")));
        }
    }
    let n = (4 * truncation + 4).max(16);
    let fft = FftPlanner::new().plan_fft_forward(n);
    let sampler = Arc::new(Sampler { spec: spec.clone(), geom: *geom, n, fft });
    let nk = 2 * truncation + 1;
    let np = grid.points().len();
    let mut f = vec![Vec::with_capacity(np); nk];
    let mut cc = vec![Vec::with_capacity(np); nk];
    let mut energy = vec![0.0; nk];
    let mut energy_2d = 0.0;
    let modal = matches!(spec, SourceSpec::ModalManufactured { .. });
    for (&y, &w) in grid.points().iter().zip(grid.weights()) {
        let dm = w * geom.measure(y);
        if modal {
            for (i, k) in (-kmax..=kmax).enumerate() {
                let (fv, cv) = sampler.mode_at(k, y);
                energy[i] += dm * fv.norm_sqr();
                energy_2d += dm * fv.norm_sqr();
                f[i].push(fv);
                cc[i].push(cv);
            }
        } else {
            let c = sampler.coefficients(y);
            energy_2d += dm * (c[0].iter().map(|z| z.norm_sqr()).sum::<f64>() + c[1].iter().map(|z| z.norm_sqr()).sum::<f64>());
            for (i, k) in (-kmax..=kmax).enumerate() {
                let (fv, cv) = sampler.mode_from(&c, k);
                energy[i] += dm * fv.norm_sqr();
                f[i].push(fv);
                cc[i].push(cv);
            }
        }
    }
    let (y0, y1) = geom.normal_interval();
    let walls: Vec<Vec<(FrameVec, FrameVec)>> = [y0, y1]
        .iter()
        .map(|&y| {
            if modal {
                (-kmax..=kmax).map(|k| sampler.mode_at(k, y)).collect()
            } else {
                let c = sampler.coefficients(y);
                (-kmax..=kmax).map(|k| sampler.mode_from(&c, k)).collect()
            }
        })
        .collect();
    let energy_modes: f64 = energy.iter().sum();
    let top = energy[0].max(energy[nk - 1]);
    let top_mode_fraction = if energy_modes > 0.0 { top / energy_modes } else { 0.0 };
    let aliasing_warning = truncation > 0 && top_mode_fraction > ALIASING_TOLERANCE;
    if aliasing_warning {
        log::warn!("mode truncation K = {truncation} is too small: the top mode carries {top_mode_fraction:.2e} of the source energy");
    }
    let parseval = geom.parseval_factor();
    let report = ProjectionReport {
        samples: n,
        energy_2d: energy_2d * parseval,
        energy_modes: energy_modes * parseval,
        top_mode_fraction,
        aliasing_warning,
    };
    let mut modes = Vec::with_capacity(nk);
    for (i, ((fi, ci), ei)) in f.into_iter().zip(cc).zip(energy).enumerate() {
        let k = i as i64 - kmax;
        let traces = [
            wall_trace(geom, WallId::Lower, k, walls[0][i].0, walls[0][i].1),
            wall_trace(geom, WallId::Upper, k, walls[1][i].0, walls[1][i].1),
        ];
        modes.push(ModalSource { k, f: fi, curlcurl: ci, traces, energy: ei, sampler: sampler.clone() });
    }
    Ok(ModalSourceSet { truncation, modes, report })
}

/// Source term `M_j` of the velocity expansion: `(iω/ρ0c²)(-i/2 curl curl)^{j/2} f`
/// on the grid, for `j ∈ {0, 2}`.
pub fn curlcurl_iterate(ms: &ModalSource, params: &MaterialParams, j: u32) -> Result<Vec<FrameVec>> {
    let scale = I * (params.omega / (params.rho0 * params.c * params.c));
    match j {
        0 => Ok(ms.f.iter().map(|v| *v * scale).collect()),
        2 => {
            let s = scale * (-0.5 * I);
            Ok(ms.curlcurl.iter().map(|v| *v * s).collect())
        }
        _ if j % 2 == 1 => Err(Error::invalid("j", format!("odd orders vanish identically, got {j}"))),
        _ => Err(Error::Unsupported(format!("curl-curl iterate of order {j} (only 0 and 2 are available)"))),
    }
}

/// Wall trace record of a source mode.
pub fn boundary_traces(ms: &ModalSource, wall: WallId) -> WallTrace {
    ms.traces[wall.index()]
}
