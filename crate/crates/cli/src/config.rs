//! Run configuration read from a TOML file.
//!
//! Every field has a default, so an empty file (or no file) describes the
//! reference experiment: unit strip, ω = 15, η = 1.6e-3, Gaussian source at
//! (0.75, 0.5). Fields only needed by one command (the slice position of
//! `nearfield`, the profile file of a modal source) are checked when that
//! command runs.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use viscoacoustic::analysis::{AnalysisRegion, Route, DEFAULT_ENERGY_THRESHOLD, DEFAULT_TRUNCATION};
use viscoacoustic::nearfield::ProfileVariant;
use viscoacoustic::sources::{GaussianGradient, SourceSpec, TabulatedProfile};
use viscoacoustic::{CutoffSpec, DiscretizationSpec, MaterialParams, ModelOrder, SeparableGeometry};

/// A configuration problem, reported with exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub material: MaterialConfig,
    pub source: SourceConfig,
    pub discretization: DiscretizationConfig,
    pub models: ModelsConfig,
    pub analysis: AnalysisConfig,
    pub sweep: SweepConfig,
    pub solve: SolveConfig,
    pub nearfield: NearfieldConfig,
    pub run: RunSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Strip,
    Annulus,
}

/// `kind = "strip"` uses `period` and `height`, `kind = "annulus"` uses
/// `r_inner` and `r_outer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    pub period: f64,
    pub height: f64,
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { kind: GeometryKind::Strip, period: 1.0, height: 1.0, r_inner: 0.5, r_outer: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    pub omega: f64,
    pub c: f64,
    pub rho0: f64,
    pub eta: f64,
    pub eta_prime: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        let p = MaterialParams::reference();
        MaterialConfig { omega: p.omega, c: p.c, rho0: p.rho0, eta: p.eta, eta_prime: p.eta_prime }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Gaussian,
    Profile,
}

/// `kind = "gaussian"`: gradient of `exp(-|x - center|²/width)`.
/// `kind = "profile"`: single mode `k` with a wall-normal profile read from the
/// CSV file `path` (columns `y, a_re, a_im, u_re, u_im`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceConfig {
    pub kind: SourceKind,
    pub center: [f64; 2],
    pub width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl Default for SourceConfig {
    fn default() -> Self {
        let g = GaussianGradient::reference();
        SourceConfig { kind: SourceKind::Gaussian, center: g.center, width: g.width, k: None, path: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscretizationConfig {
    /// Uniform elements before wall refinement.
    pub n_interior: usize,
    /// Geometric ratio of the wall refinement.
    pub ratio: f64,
    /// Refinement layers per wall; by default enough to make the wall element
    /// at most `wall_fraction·ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    pub wall_fraction: f64,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_points: Option<usize>,
    /// Highest tangential mode `K`; modes `-K..=K` are retained.
    pub truncation: usize,
    /// Modes below this fraction of the largest modal energy are skipped.
    pub energy_threshold: f64,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        let d = DiscretizationSpec::default();
        DiscretizationConfig {
            n_interior: d.n_interior,
            ratio: d.ratio,
            layers: d.layers,
            wall_fraction: d.wall_fraction,
            degree: d.degree,
            quad_points: d.quad_points,
            truncation: DEFAULT_TRUNCATION,
            energy_threshold: DEFAULT_ENERGY_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteConfig {
    Pressure,
    Velocity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelsConfig {
    pub orders: Vec<u32>,
    pub route: RouteConfig,
}

impl Default for ModelsConfig {
    fn default() -> Self {
        ModelsConfig { orders: vec![0, 1, 2], route: RouteConfig::Pressure }
    }
}

/// Errors are measured at distance at least `delta` from the walls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub delta: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { delta: AnalysisRegion::default().delta }
    }
}

/// `converge` sweeps `eta`; `sweep-omega` uses `omega_values` when given and
/// otherwise `omega_n` points on `[omega_from, omega_to]` kept `omega_gap` away
/// from the eigenfrequencies of the strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_values: Option<Vec<f64>>,
    pub omega_from: f64,
    pub omega_to: f64,
    pub omega_n: usize,
    pub omega_gap: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            eta: vec![1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5],
            omega_values: None,
            omega_from: 2.0,
            omega_to: 17.0,
            omega_n: 61,
            omega_gap: 0.02,
        }
    }
}

/// Tensor grid of the field exports of `solve`: `nx` tangential by `ny`
/// wall-normal points, walls included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub nx: usize,
    pub ny: usize,
    pub exact: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { nx: 64, ny: 65, exact: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantConfig {
    WallConsistent,
    Printed,
}

/// Side view at tangential parameter `x`. The cutoff defaults to a plateau of
/// `0.1·height` and support `0.2·height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NearfieldConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub order: u32,
    pub variant: VariantConfig,
    pub points: usize,
    pub force: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
}

impl Default for NearfieldConfig {
    fn default() -> Self {
        NearfieldConfig { x: None, order: 2, variant: VariantConfig::WallConsistent, points: 401, force: false, s1: None, s0: None }
    }
}

/// Settings that do not change results. Excluded from the config hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub out: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Write a `# generated` line with the wall-clock time.
    pub timestamp: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { out: PathBuf::from("out"), jobs: None, timestamp: true }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| invalid(format!("config: {}", e.message())))
    }

    pub fn geometry(&self) -> anyhow::Result<SeparableGeometry> {
        let g = &self.geometry;
        Ok(match g.kind {
            GeometryKind::Strip => SeparableGeometry::strip(g.period, g.height)?,
            GeometryKind::Annulus => SeparableGeometry::annulus(g.r_inner, g.r_outer)?,
        })
    }

    pub fn params(&self) -> anyhow::Result<MaterialParams> {
        let m = &self.material;
        Ok(MaterialParams::new(m.omega, m.c, m.rho0, m.eta, m.eta_prime)?)
    }

    pub fn source(&self) -> anyhow::Result<SourceSpec> {
        let s = &self.source;
        Ok(match s.kind {
            SourceKind::Gaussian => SourceSpec::GaussianGradient(GaussianGradient { center: s.center, width: s.width }),
            SourceKind::Profile => {
                let k = s.k.ok_or_else(|| invalid("missing field `source.k` (required for a profile source)"))?;
                let path = s.path.as_ref().ok_or_else(|| invalid("missing field `source.path` (required for a profile source)"))?;
                let profile = TabulatedProfile::from_path(path)?;
                SourceSpec::ModalManufactured { k, profile: Arc::new(profile) }
            }
        })
    }

    pub fn discretization(&self) -> DiscretizationSpec {
        let d = &self.discretization;
        DiscretizationSpec {
            n_interior: d.n_interior,
            ratio: d.ratio,
            layers: d.layers,
            wall_fraction: d.wall_fraction,
            degree: d.degree,
            quad_points: d.quad_points,
        }
    }

    pub fn orders(&self) -> anyhow::Result<Vec<ModelOrder>> {
        if self.models.orders.is_empty() {
            return Err(invalid("invalid field `models.orders`: list at least one order"));
        }
        self.models
            .orders
            .iter()
            .map(|&n| ModelOrder::try_from(n).map_err(|_| invalid(format!("invalid field `models.orders`: order {n} is not 0, 1 or 2"))))
            .collect()
    }

    pub fn route(&self) -> Route {
        match self.models.route {
            RouteConfig::Pressure => Route::Pressure,
            RouteConfig::Velocity => Route::Velocity,
        }
    }

    pub fn region(&self) -> anyhow::Result<AnalysisRegion> {
        Ok(AnalysisRegion::new(self.analysis.delta)?)
    }

    pub fn variant(&self) -> ProfileVariant {
        match self.nearfield.variant {
            VariantConfig::WallConsistent => ProfileVariant::WallConsistent,
            VariantConfig::Printed => ProfileVariant::Printed,
        }
    }

    pub fn cutoff(&self, geom: &SeparableGeometry) -> anyhow::Result<CutoffSpec> {
        let d = geom.default_cutoff();
        let c = CutoffSpec::new(self.nearfield.s1.unwrap_or(d.s1), self.nearfield.s0.unwrap_or(d.s0))?;
        geom.check_cutoff(&c)?;
        Ok(c)
    }

    /// Check everything shared by all commands before any solve.
    pub fn validate(&self) -> anyhow::Result<()> {
        let geom = self.geometry()?;
        self.params()?;
        self.source()?.validate(&geom)?;
        self.discretization().validate()?;
        self.orders()?;
        self.region()?.interval(&geom)?;
        let d = &self.discretization;
        if d.truncation == 0 && self.source.kind == SourceKind::Gaussian {
            return Err(invalid("invalid field `discretization.truncation`: must be at least 1 for a Gaussian source"));
        }
        if !(d.energy_threshold >= 0.0 && d.energy_threshold < 1.0) {
            return Err(invalid(format!("invalid field `discretization.energy_threshold`: must lie in [0, 1), got {}", d.energy_threshold)));
        }
        if self.solve.nx == 0 || self.solve.ny < 2 {
            return Err(invalid("invalid field `solve.nx`/`solve.ny`: need nx ≥ 1 and ny ≥ 2"));
        }
        if self.nearfield.points < 2 {
            return Err(invalid("invalid field `nearfield.points`: need at least 2"));
        }
        if self.run.jobs == Some(0) {
            return Err(invalid("invalid field `run.jobs`: must be at least 1"));
        }
        Ok(())
    }

    /// SHA-256 of the canonical TOML form of every setting that affects
    /// results, i.e. everything except the `[run]` section.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.run = RunSection::default();
        let text = toml::to_string(&canonical).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_reference() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c, RunConfig::default());
        c.validate().unwrap();
        assert_eq!(c.params().unwrap(), MaterialParams::reference());
    }

    #[test]
    fn unknown_field_is_named() {
        let e = RunConfig::parse("[material]\nomgea = 3.0\n").unwrap_err().to_string();
        assert!(e.contains("omgea"), "{e}");
    }

    #[test]
    fn hash_ignores_run_section() {
        let a = RunConfig::parse("[run]\nout = \"x\"\njobs = 3\n").unwrap();
        let b = RunConfig::default();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::parse("[material]\neta = 1e-4\n").unwrap();
        assert_ne!(c.hash(), b.hash());
        assert_eq!(b.hash().len(), 64);
    }

    #[test]
    fn profile_source_needs_mode() {
        let c = RunConfig::parse("[source]\nkind = \"profile\"\npath = \"p.csv\"\n").unwrap();
        let e = c.source().unwrap_err().to_string();
        assert!(e.contains("source.k"), "{e}");
    }

    #[test]
    fn annulus_geometry() {
        let c = RunConfig::parse("[geometry]\nkind = \"annulus\"\nr_inner = 1.0\nr_outer = 2.0\n").unwrap();
        assert_eq!(c.geometry().unwrap(), SeparableGeometry::annulus(1.0, 2.0).unwrap());
    }
}
