//! Wall-normal 1D high-order finite elements.

mod assemble;
mod banded;
mod basis;
mod mesh;
mod quadrature;
mod space;

pub use assemble::{assemble, LocalMatrix};
pub use banded::{solve_banded, BandedLu, BandedMatrix, SINGULAR_PIVOT_TOL};
pub use basis::{legendre_table, Basis1D, BasisKind};
pub use mesh::{build_graded_mesh, layers_for, Grading, Mesh1D};
pub use quadrature::GaussLegendre;
pub use space::{PointBasis, QuadGrid, Space, Tabulation};
