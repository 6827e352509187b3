//! Modelling errors away from the walls, slope fits and parameter sweeps.
//!
//! Errors are measured on `Ω_δ`, the domain without a `δ`-neighbourhood of the
//! walls, in the norms
//!
//! ```text
//! ‖p‖²_{H¹} = ∫ |p|² + |∇p|²,    ‖v‖²_{H(div)} = ∫ |v|² + |div v|²
//! ```
//!
//! computed mode by mode and summed (Parseval). The combined relative error
//! of a model is the sum of the relative pressure and velocity errors.

use std::ops::Range;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::discretization::{Discretization, DiscretizationSpec};
use crate::error::{Error, Result};
use crate::exact::solve_exact_mode;
use crate::fem1d::{GaussLegendre, Mesh1D};
use crate::frame::FrameVec;
use crate::geometry::{CutoffSpec, SeparableGeometry, WallId};
use crate::nearfield::{build_phi, BoundaryLayerProfile, ProfileVariant};
use crate::params::{MaterialParams, ModelOrder};
use crate::pressure::solve_pressure_model;
use crate::sample::ModalField;
use crate::sources::{project_to_modes, ModalSource, ModalSourceSet, SourceSpec};
use crate::velocity::solve_velocity_model;

/// Modes with less than this fraction of the largest modal source energy are
/// skipped.
pub const DEFAULT_ENERGY_THRESHOLD: f64 = 1e-24;

/// Default mode truncation for the Gaussian source.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Interior region `Ω_δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisRegion {
    pub delta: f64,
}

impl Default for AnalysisRegion {
    fn default() -> Self {
        AnalysisRegion { delta: 0.2 }
    }
}

impl AnalysisRegion {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::invalid("delta", format!("must be > 0, got {delta}")));
        }
        Ok(AnalysisRegion { delta })
    }

    /// Wall-normal extent of the region.
    pub fn interval(&self, geom: &SeparableGeometry) -> Result<(f64, f64)> {
        let (a, b) = geom.normal_interval();
        let (lo, hi) = (a + self.delta, b - self.delta);
        if !(self.delta > 0.0) || lo >= hi {
            return Err(Error::EmptyRegion);
        }
        Ok((lo, hi))
    }

    /// Gauss rule on the region, split at the mesh nodes so that piecewise
    /// polynomial fields are integrated element by element. Weights include the
    /// measure `dy` or `r dr`.
    pub fn quadrature(&self, geom: &SeparableGeometry, mesh: &Mesh1D, points: usize) -> Result<RegionQuadrature> {
        let (lo, hi) = self.interval(geom)?;
        let rule = GaussLegendre::new(points);
        let mut out = RegionQuadrature { points: Vec::new(), weights: Vec::new() };
        for e in 0..mesh.n_elements() {
            let (a, b) = mesh.element(e);
            let (a, b) = (a.max(lo), b.min(hi));
            if b <= a {
                continue;
            }
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (&x, &w) in rule.points.iter().zip(&rule.weights) {
                let y = mid + half * x;
                out.points.push(y);
                out.weights.push(w * half * geom.measure(y));
            }
        }
        Ok(out)
    }
}

/// Quadrature points and weights on an analysis region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionQuadrature {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Absolute and relative errors of one approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRecord {
    pub err_p_h1: f64,
    pub err_v_hdiv: f64,
    pub err_total: f64,
    /// `‖p - p_appr‖_{H¹(Ω_δ)}`.
    pub abs_p_h1: f64,
    /// `‖v - v_appr‖_{H(div, Ω_δ)}`.
    pub abs_v_hdiv: f64,
    pub norm_p_h1: f64,
    pub norm_v_hdiv: f64,
}

impl ErrorRecord {
    fn from_sums(diff_p: f64, diff_v: f64, ref_p: f64, ref_v: f64) -> Self {
        let (abs_p_h1, abs_v_hdiv) = (diff_p.sqrt(), diff_v.sqrt());
        let (norm_p_h1, norm_v_hdiv) = (ref_p.sqrt(), ref_v.sqrt());
        let rel = |a: f64, n: f64| if n > 0.0 { a / n } else if a == 0.0 { 0.0 } else { f64::INFINITY };
        let (err_p_h1, err_v_hdiv) = (rel(abs_p_h1, norm_p_h1), rel(abs_v_hdiv, norm_v_hdiv));
        ErrorRecord { err_p_h1, err_v_hdiv, err_total: err_p_h1 + err_v_hdiv, abs_p_h1, abs_v_hdiv, norm_p_h1, norm_v_hdiv }
    }
}

/// Squared region norms `(‖p‖²_{H¹}, ‖v‖²_{H(div)})` of a set of modal fields.
pub fn region_norms(
    geom: &SeparableGeometry,
    quad: &RegionQuadrature,
    set: &ModalSourceSet,
    fields: &[&dyn ModalField],
) -> Result<(f64, f64)> {
    let (mut p, mut v) = (0.0, 0.0);
    for (&y, &w) in quad.points.iter().zip(&quad.weights) {
        let src = set.eval_modes(y);
        for field in fields {
            let (f, cc) = source_at(set, &src, field.mode())?;
            let s = field.sample(y, f, cc);
            p += w * s.h1_sqr();
            v += w * s.hdiv_sqr();
        }
    }
    let scale = geom.parseval_factor();
    Ok((p * scale, v * scale))
}

fn source_at(set: &ModalSourceSet, src: &[(FrameVec, FrameVec)], k: i64) -> Result<(FrameVec, FrameVec)> {
    let idx = k + set.truncation as i64;
    if idx < 0 || idx as usize >= src.len() {
        return Err(Error::ModeMismatch(format!("mode {k} exceeds the source truncation {}", set.truncation)));
    }
    Ok(src[idx as usize])
}

/// Relative modelling error of `appr` against `exact` on the region, summed
/// over modes. Both slices must list the same modes in the same order.
pub fn modelling_error(
    geom: &SeparableGeometry,
    quad: &RegionQuadrature,
    set: &ModalSourceSet,
    exact: &[&dyn ModalField],
    appr: &[&dyn ModalField],
) -> Result<ErrorRecord> {
    if quad.points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if exact.len() != appr.len() {
        return Err(Error::ModeMismatch(format!("{} exact modes against {} approximate modes", exact.len(), appr.len())));
    }
    for (e, a) in exact.iter().zip(appr) {
        if e.mode() != a.mode() {
            return Err(Error::ModeMismatch(format!("mode {} paired with mode {}", e.mode(), a.mode())));
        }
    }
    let (mut dp, mut dv, mut rp, mut rv) = (0.0, 0.0, 0.0, 0.0);
    for (&y, &w) in quad.points.iter().zip(&quad.weights) {
        let src = set.eval_modes(y);
        for (e, a) in exact.iter().zip(appr) {
            let (f, cc) = source_at(set, &src, e.mode())?;
            let se = e.sample(y, f, cc);
            let d = se.sub(&a.sample(y, f, cc));
            dp += w * d.h1_sqr();
            dv += w * d.hdiv_sqr();
            rp += w * se.h1_sqr();
            rv += w * se.hdiv_sqr();
        }
    }
    let scale = geom.parseval_factor();
    Ok(ErrorRecord::from_sums(dp * scale, dv * scale, rp * scale, rv * scale))
}

/// Least-squares fit of `log(error)` against `log(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
}

/// Fit a power law `error ≈ C x^slope` to all samples.
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<LineFit> {
    if samples.len() < 2 {
        return Err(Error::invalid("samples", format!("need at least 2 samples, got {}", samples.len())));
    }
    for (i, &(x, e)) in samples.iter().enumerate() {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::NonPositiveError { index: i, value: e });
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid("samples", format!("abscissa {x} at index {i} must be > 0")));
        }
    }
    let n = samples.len() as f64;
    let lx: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ly: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("samples", "all abscissae coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(LineFit { slope, intercept, residual: (ss / n).sqrt() })
}

/// Least-squares slope of `log(error)` against `log(x)` over `window`, which
/// must hold at least 3 samples.
pub fn fit_slope(samples: &[(f64, f64)], window: Range<usize>) -> Result<f64> {
    if window.end > samples.len() || window.len() < 3 {
        return Err(Error::invalid("window", format!("{window:?} must hold at least 3 of the {} samples", samples.len())));
    }
    Ok(fit_power_law(&samples[window])?.slope)
}

/// Relative tolerance on local slopes in [`auto_window`].
pub const WINDOW_TOLERANCE: f64 = 0.15;

/// Longest contiguous run of at least 3 samples (in the given order) on which
/// every slope between neighbours is within 15% of the run's fitted slope.
/// Ties go to the smaller fit residual. Samples with non-positive or
/// non-finite errors break runs.
pub fn auto_window(samples: &[(f64, f64)]) -> Option<Range<usize>> {
    let valid = |i: usize| {
        let (x, e) = samples[i];
        x > 0.0 && x.is_finite() && e > 0.0 && e.is_finite()
    };
    let local = |i: usize| {
        let (a, b) = (samples[i], samples[i + 1]);
        (b.1.ln() - a.1.ln()) / (b.0.ln() - a.0.ln())
    };
    let mut best: Option<(Range<usize>, f64)> = None;
    for start in 0..samples.len() {
        for end in (start + 3)..=samples.len() {
            if !(start..end).all(valid) {
                break;
            }
            let Ok(fit) = fit_power_law(&samples[start..end]) else { continue };
            let stable = (start..end - 1).all(|i| {
                let l = local(i);
                l.is_finite() && (l - fit.slope).abs() <= WINDOW_TOLERANCE * fit.slope.abs()
            });
            if !stable {
                continue;
            }
            let better = match &best {
                None => true,
                Some((r, res)) => end - start > r.len() || (end - start == r.len() && fit.residual < *res),
            };
            if better {
                best = Some((start..end, fit.residual));
            }
        }
    }
    best.map(|b| b.0)
}

/// `ω_{k,m} = π√(k² + 4m²)`, the Neumann eigenfrequencies of the unit strip
/// torus (`c = 1`): `k` counts half-waves across the channel and `m` full waves
/// along the period.
pub fn eigenfrequency(k: u32, m: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    let (k, m) = (k as f64, m as f64);
    Ok(std::f64::consts::PI * (k * k + 4.0 * m * m).sqrt())
}

/// All Neumann eigenfrequencies of the strip `[0, period] × [0, height]` in
/// `[0, omega_max]` for sound speed `c`, sorted, including the zero frequency.
pub fn strip_eigenfrequencies(period: f64, height: f64, c: f64, omega_max: f64) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    let nmax = (omega_max * height / (pi * c)).floor() as i64;
    let mmax = (omega_max * period / (2.0 * pi * c)).floor() as i64;
    for n in 0..=nmax {
        for m in 0..=mmax {
            let w = c * ((n as f64 * pi / height).powi(2) + (2.0 * pi * m as f64 / period).powi(2)).sqrt();
            if w <= omega_max {
                out.push(w);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// `n` equispaced frequencies on `[lo, hi]`, each moved away from the listed
/// resonances until it is at least `gap` from all of them.
pub fn frequency_grid(lo: f64, hi: f64, n: usize, resonances: &[f64], gap: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::invalid("frequency_grid", format!("need 0 < lo < hi and n ≥ 2, got [{lo}, {hi}], n = {n}")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    if gap >= 0.5 * step {
        return Err(Error::invalid("gap", format!("{gap} must be below half the grid step {step}")));
    }
    Ok((0..n)
        .map(|i| {
            let mut w = lo + step * i as f64;
            for _ in 0..4 {
                if let Some(&r) = resonances.iter().find(|&&r| (w - r).abs() < gap) {
                    w = if w >= r { r + gap } else { r - gap };
                }
            }
            w
        })
        .collect())
}

/// Which route computes the approximate fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Pressure models, velocity reconstructed from the pressure.
    #[default]
    Pressure,
    /// Velocity models, pressure recovered from the divergence.
    Velocity,
}

/// Parameter swept by [`run_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Eta,
    Omega,
}

/// Everything a sweep needs.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: MaterialParams,
    pub orders: Vec<ModelOrder>,
    pub geometry: SeparableGeometry,
    pub source: SourceSpec,
    pub discretization: DiscretizationSpec,
    pub truncation: usize,
    pub region: AnalysisRegion,
    pub energy_threshold: f64,
    pub route: Route,
}

impl SweepSpec {
    /// Sweep with default settings for the reference source on the unit strip.
    pub fn new(axis: SweepAxis, values: Vec<f64>, base: MaterialParams) -> Self {
        SweepSpec {
            axis,
            values,
            base,
            orders: ModelOrder::ALL.to_vec(),
            geometry: SeparableGeometry::unit_strip(),
            source: SourceSpec::reference(),
            discretization: DiscretizationSpec::default(),
            truncation: DEFAULT_TRUNCATION,
            region: AnalysisRegion::default(),
            energy_threshold: DEFAULT_ENERGY_THRESHOLD,
            route: Route::Pressure,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("values", "sweep needs at least one sample"));
        }
        if self.orders.is_empty() {
            return Err(Error::invalid("orders", "sweep needs at least one model order"));
        }
        self.base.validate()?;
        self.geometry.validate()?;
        self.source.validate(&self.geometry)?;
        self.discretization.validate()?;
        self.region.interval(&self.geometry)?;
        for &v in &self.values {
            self.params_at(v)?;
        }
        if !(self.energy_threshold >= 0.0 && self.energy_threshold < 1.0) {
            return Err(Error::invalid("energy_threshold", format!("must lie in [0, 1), got {}", self.energy_threshold)));
        }
        Ok(())
    }

    /// Material parameters of one sample.
    pub fn params_at(&self, value: f64) -> Result<MaterialParams> {
        let p = match self.axis {
            SweepAxis::Eta => self.base.with_eta(value),
            SweepAxis::Omega => self.base.with_omega(value),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Outcome of one order at one sample.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleStatus {
    Ok,
    Failed(String),
}

impl SampleStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, SampleStatus::Ok)
    }

    pub fn label(&self) -> String {
        match self {
            SampleStatus::Ok => "ok".to_string(),
            SampleStatus::Failed(r) => format!("failed: {r}"),
        }
    }
}

/// Errors of one model order at one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub eta: f64,
    pub omega: f64,
    pub order: ModelOrder,
    pub errors: Option<ErrorRecord>,
    pub status: SampleStatus,
}

impl SampleRecord {
    /// Combined relative error, or `NaN` for failed samples.
    pub fn total(&self) -> f64 {
        self.errors.map_or(f64::NAN, |e| e.err_total)
    }
}

/// Fitted convergence slope of one order.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub order: ModelOrder,
    /// `None` when no window of at least 3 stable samples exists.
    pub slope: Option<f64>,
    /// Window in the list of samples sorted by increasing `√η`.
    pub window: Option<Range<usize>>,
    /// `√η` range of the window.
    pub window_sqrt_eta: Option<(f64, f64)>,
    pub residual: Option<f64>,
    pub samples: usize,
}

/// Results of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub axis: SweepAxis,
    pub records: Vec<SampleRecord>,
    /// Slope fits, for η sweeps only.
    pub slopes: Vec<SlopeFit>,
}

impl ErrorReport {
    /// Records of one order in sweep order.
    pub fn series(&self, order: ModelOrder) -> Vec<&SampleRecord> {
        self.records.iter().filter(|r| r.order == order).collect()
    }

    pub fn slope(&self, order: ModelOrder) -> Option<f64> {
        self.slopes.iter().find(|s| s.order == order).and_then(|s| s.slope)
    }
}

/// Solutions of all modes of one model.
pub type ModeFields = Vec<Box<dyn ModalField>>;

/// Solve the approximate model of one order for every listed mode.
pub fn solve_model(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    route: Route,
    modes: &[&ModalSource],
    disc: &Discretization,
) -> Result<ModeFields> {
    modes
        .par_iter()
        .map(|ms| -> Result<Box<dyn ModalField>> {
            Ok(match route {
                Route::Pressure => Box::new(solve_pressure_model(params, geom, order, ms, disc)?),
                Route::Velocity => Box::new(solve_velocity_model(params, geom, order, ms, disc)?),
            })
        })
        .collect()
}

/// Solve the viscous model for every listed mode.
pub fn solve_exact(params: &MaterialParams, geom: &SeparableGeometry, modes: &[&ModalSource], disc: &Discretization) -> Result<ModeFields> {
    modes
        .par_iter()
        .map(|ms| -> Result<Box<dyn ModalField>> { Ok(Box::new(solve_exact_mode(params, geom, ms, disc)?)) })
        .collect()
}

fn as_refs(fields: &ModeFields) -> Vec<&dyn ModalField> {
    fields.iter().map(|b| b.as_ref()).collect()
}

/// Errors of every requested order at one parameter set.
pub fn evaluate_sample(spec: &SweepSpec, params: &MaterialParams) -> Result<Vec<SampleRecord>> {
    let geom = &spec.geometry;
    let disc = Discretization::for_params(geom, params, &spec.discretization)?;
    let set = project_to_modes(&spec.source, geom, &disc.grid, spec.truncation)?;
    let modes = set.active(spec.energy_threshold);
    let quad = spec.region.quadrature(geom, disc.mesh(), disc.degree + 4)?;
    let record = |order, errors, status| SampleRecord { eta: params.eta, omega: params.omega, order, errors, status };
    let exact = match solve_exact(params, geom, &modes, &disc) {
        Ok(e) => e,
        Err(e) if e.is_near_singular() => {
            return Ok(spec.orders.iter().map(|&o| record(o, None, SampleStatus::Failed(format!("viscous model: {e}")))).collect())
        }
        Err(e) => return Err(e),
    };
    let exact_refs = as_refs(&exact);
    let mut out = Vec::with_capacity(spec.orders.len());
    for &order in &spec.orders {
        match solve_model(params, geom, order, spec.route, &modes, &disc) {
            Ok(appr) => {
                let err = modelling_error(geom, &quad, &set, &exact_refs, &as_refs(&appr))?;
                out.push(record(order, Some(err), SampleStatus::Ok));
            }
            Err(e) if e.is_near_singular() => {
                log::warn!("order {order} at eta = {:.3e}, omega = {:.4}: {e}", params.eta, params.omega);
                out.push(record(order, None, SampleStatus::Failed(e.to_string())));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Run a sweep sample by sample; modes within a sample are solved in
/// parallel on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<ErrorReport> {
    spec.validate()?;
    let mut records = Vec::new();
    for &value in &spec.values {
        let params = spec.params_at(value)?;
        log::info!("sample eta = {:.3e}, omega = {:.4}", params.eta, params.omega);
        records.extend(evaluate_sample(spec, &params)?);
    }
    let slopes = match spec.axis {
        SweepAxis::Eta => spec.orders.iter().map(|&o| fit_order(&records, o)).collect(),
        SweepAxis::Omega => Vec::new(),
    };
    Ok(ErrorReport { axis: spec.axis, records, slopes })
}

/// Slope of the combined error of one order against `√η` on the automatic
/// window. Failed samples break windows.
pub fn fit_order(records: &[SampleRecord], order: ModelOrder) -> SlopeFit {
    let mut pts: Vec<(f64, f64)> = records.iter().filter(|r| r.order == order).map(|r| (r.eta.sqrt(), r.total())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let window = auto_window(&pts);
    let fit = window.clone().and_then(|w| fit_power_law(&pts[w]).ok());
    SlopeFit {
        order,
        slope: fit.map(|f| f.slope),
        window_sqrt_eta: window.clone().map(|w| (pts[w.start].0, pts[w.end - 1].0)),
        window,
        residual: fit.map(|f| f.residual),
        samples: pts.len(),
    }
}

/// Far field, corrector and viscous solution of one mode near the walls.
pub struct NearWallMode {
    pub k: i64,
    pub far: Box<dyn ModalField>,
    pub exact: Box<dyn ModalField>,
    pub profiles: [BoundaryLayerProfile; 2],
}

/// Solve the viscous model and the order-`N` velocity model for every mode and
/// build the boundary-layer profiles on both walls.
pub fn near_wall_modes(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    set: &ModalSourceSet,
    threshold: f64,
    disc: &Discretization,
    cutoff: CutoffSpec,
    variant: ProfileVariant,
) -> Result<Vec<NearWallMode>> {
    geom.check_cutoff(&cutoff)?;
    set.active(threshold)
        .par_iter()
        .map(|ms| {
            let exact = solve_exact_mode(params, geom, ms, disc)?;
            let far = solve_velocity_model(params, geom, order, ms, disc)?;
            let profile = |wall: WallId| {
                let y = geom.wall(wall).coordinate;
                let trace = far.velocity(y).u * geom.perp_sign(wall);
                build_phi(order, trace, wall, ms.k, geom, params, cutoff, variant)
            };
            let profiles = [profile(WallId::Lower)?, profile(WallId::Upper)?];
            Ok(NearWallMode { k: ms.k, far: Box::new(far), exact: Box::new(exact), profiles })
        })
        .collect()
}

/// Maximum over `s ∈ [0, s1]` and both walls of the tangential defect
/// `‖(v_N + w - v)·n⊥‖_{L²(Γ_s)}`, relative to the far-field wall slip
/// `‖v_N·n⊥‖_{L²(Γ)}`. `samples` points are taken across each layer.
pub fn near_wall_defect(geom: &SeparableGeometry, modes: &[NearWallMode], samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::invalid("samples", "need at least 2 points across the layer"));
    }
    let mut worst: f64 = 0.0;
    for wall in WallId::BOTH {
        let w = geom.wall(wall);
        let ps = geom.perp_sign(wall);
        let slip: f64 = modes.iter().map(|m| m.profiles[wall.index()].trace.norm_sqr()).sum();
        if slip == 0.0 {
            continue;
        }
        let Some(first) = modes.first() else { return Ok(0.0) };
        let s1 = first.profiles[wall.index()].cutoff.s1;
        for i in 0..samples {
            let s = s1 * i as f64 / (samples - 1) as f64;
            let y = w.coordinate - w.orientation * s;
            let d: f64 = modes
                .iter()
                .map(|m| {
                    let far = m.far.sample(y, FrameVec::ZERO, FrameVec::ZERO).v.u;
                    let ex = m.exact.sample(y, FrameVec::ZERO, FrameVec::ZERO).v.u;
                    ((far + m.profiles[wall.index()].eval_corrector(y).u - ex) * ps).norm_sqr()
                })
                .sum();
            worst = worst.max((d / slip).sqrt());
        }
    }
    Ok(worst)
}

/// One row of a side-view profile of the tangential velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub y: f64,
    /// Distance to the nearest wall.
    pub s: f64,
    pub exact: C64,
    pub far: C64,
    pub near: C64,
}

impl ProfileRow {
    pub fn sum(&self) -> C64 {
        self.far + self.near
    }
}

/// Tangential velocity along the wall-normal line at tangential parameter `x`.
pub fn side_view(geom: &SeparableGeometry, modes: &[NearWallMode], x: f64, ys: &[f64]) -> Vec<ProfileRow> {
    let (lo, hi) = geom.normal_interval();
    ys.iter()
        .map(|&y| {
            let mut row = ProfileRow { y, s: (y - lo).min(hi - y), exact: C64::new(0.0, 0.0), far: C64::new(0.0, 0.0), near: C64::new(0.0, 0.0) };
            for m in modes {
                let phase = C64::from_polar(1.0, geom.mode_wavenumber(m.k) * x);
                row.exact += m.exact.sample(y, FrameVec::ZERO, FrameVec::ZERO).v.u * phase;
                row.far += m.far.sample(y, FrameVec::ZERO, FrameVec::ZERO).v.u * phase;
                row.near += (m.profiles[0].eval_corrector(y).u + m.profiles[1].eval_corrector(y).u) * phase;
            }
            row
        })
        .collect()
}

/// Largest source magnitude on the line at tangential parameter `x`, relative
/// to the largest magnitude anywhere, estimated on `n` points per direction.
pub fn slice_source_fraction(spec: &SourceSpec, geom: &SeparableGeometry, x: f64, n: usize) -> f64 {
    let (lo, hi) = geom.normal_interval();
    let period = geom.tangential_period();
    let line = |x: f64| (0..=n).map(|j| spec.eval(geom, x, lo + (hi - lo) * j as f64 / n as f64).0.norm()).fold(0.0, f64::max);
    let peak = (0..n).map(|i| line(period * i as f64 / n as f64)).fold(line(x), f64::max);
    if peak == 0.0 {
        0.0
    } else {
        line(x) / peak
    }
}
