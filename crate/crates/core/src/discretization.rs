//! Wall-normal discretization shared by every modal solver.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem1d::{build_graded_mesh, layers_for, Basis1D, Mesh1D, QuadGrid, Space, Tabulation};
use crate::geometry::SeparableGeometry;
use crate::params::MaterialParams;

/// Mesh and polynomial settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationSpec {
    /// Number of uniform elements before wall refinement.
    pub n_interior: usize,
    /// Geometric ratio of the wall refinement.
    pub ratio: f64,
    /// Number of refinement layers at each wall; `None` picks the smallest count
    /// giving a wall element of at most `wall_fraction·ε`.
    pub layers: Option<usize>,
    pub wall_fraction: f64,
    /// Polynomial degree of continuous fields.
    pub degree: usize,
    /// Gauss points per element; `None` means `2·(degree + 2)`.
    pub quad_points: Option<usize>,
}

impl Default for DiscretizationSpec {
    fn default() -> Self {
        DiscretizationSpec { n_interior: 20, ratio: 0.25, layers: None, wall_fraction: 0.25, degree: 12, quad_points: None }
    }
}

impl DiscretizationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_interior == 0 {
            return Err(Error::invalid("n_interior", "must be at least 1"));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::invalid("ratio", format!("must lie in (0, 1), got {}", self.ratio)));
        }
        if !(self.wall_fraction > 0.0 && self.wall_fraction.is_finite()) {
            return Err(Error::invalid("wall_fraction", format!("must be > 0, got {}", self.wall_fraction)));
        }
        if self.degree < 2 {
            return Err(Error::invalid("degree", format!("must be at least 2, got {}", self.degree)));
        }
        if let Some(q) = self.quad_points {
            if q < self.degree + 2 {
                return Err(Error::invalid("quad_points", format!("must be at least degree + 2 = {}, got {q}", self.degree + 2)));
            }
        }
        Ok(())
    }

    /// Graded mesh for the given geometry and boundary-layer thickness.
    pub fn mesh(&self, geom: &SeparableGeometry, eps: f64) -> Result<Mesh1D> {
        self.validate()?;
        let interval = geom.normal_interval();
        let h = geom.height() / self.n_interior as f64;
        let layers = self.layers.unwrap_or_else(|| layers_for(h, self.ratio, self.wall_fraction * eps));
        build_graded_mesh(interval, self.n_interior, self.ratio, layers, (true, true))
    }
}

/// A finite element space with its tabulation on the shared grid.
#[derive(Debug, Clone)]
pub struct FemSpace {
    pub space: Space,
    pub tab: Tabulation,
}

impl FemSpace {
    fn new(mesh: &Mesh1D, grid: &QuadGrid, fields: &[Basis1D]) -> Arc<Self> {
        let space = Space::new(mesh, fields);
        let tab = Tabulation::new(&space, grid);
        Arc::new(FemSpace { space, tab })
    }
}

/// Mesh, quadrature grid and the finite element spaces of all models.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub degree: usize,
    pub grid: QuadGrid,
    /// Two continuous fields `(a, u)` for the viscous model.
    pub exact: Arc<FemSpace>,
    /// One continuous field for the pressure models.
    pub pressure: Arc<FemSpace>,
    /// Continuous `a` of degree `p` and discontinuous `u` of degree `p - 1`.
    pub velocity: Arc<FemSpace>,
}

impl Discretization {
    pub fn new(mesh: &Mesh1D, degree: usize, quad_points: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::invalid("degree", format!("must be at least 2, got {degree}")));
        }
        if quad_points < degree + 2 {
            return Err(Error::invalid("quad_points", format!("must be at least degree + 2 = {}, got {quad_points}", degree + 2)));
        }
        let grid = QuadGrid::new(mesh, quad_points);
        let c = Basis1D::continuous(degree);
        let d = Basis1D::discontinuous(degree - 1);
        Ok(Discretization {
            degree,
            exact: FemSpace::new(mesh, &grid, &[c, c]),
            pressure: FemSpace::new(mesh, &grid, &[c]),
            velocity: FemSpace::new(mesh, &grid, &[c, d]),
            grid,
        })
    }

    /// Discretization adapted to the boundary layer of `params`.
    pub fn for_params(geom: &SeparableGeometry, params: &MaterialParams, spec: &DiscretizationSpec) -> Result<Self> {
        let mesh = spec.mesh(geom, params.epsilon())?;
        Self::new(&mesh, spec.degree, spec.quad_points.unwrap_or(2 * (spec.degree + 2)))
    }

    pub fn mesh(&self) -> &Mesh1D {
        self.grid.mesh()
    }
}
