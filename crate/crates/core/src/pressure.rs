//! Impedance models of order 0, 1 and 2 in pressure form.
//!
//! All orders are instances of the canonical system
//!
//! ```text
//! div(α∇p) + (ω²/c²) p = div g                      in Ω
//! α∇p·n + ∂_Γ(β ∂_Γ p) = g·n + ∂_Γ h + e            on ∂Ω
//! ```
//!
//! with `g = f` and, on each wall,
//!
//! | order | α                      | β                        | h       | e                    |
//! |-------|------------------------|--------------------------|---------|----------------------|
//! | 0     | 1                      | 0                        | 0       | 0                    |
//! | 1     | 1                      | β₁ = (1+i)√(η/2ωρ0)      | -β f·n⊥ | 0                    |
//! | 2     | 1 - iω(η+η′)/(ρ0c²)    | β₁ + iηκ/(2ωρ0)          | -β f·n⊥ | -iη/(ωρ0) (curl curl f)·n |
//!
//! Its weak form, with test functions conjugated, is
//!
//! ```text
//! ∫ α∇p·∇q̄ - (ω²/c²) p q̄ - ∮ β ∂_Γp ∂_Γq̄ = ∫ g·∇q̄ - ∮ h ∂_Γq̄ + ∮ e q̄
//! ```
//!
//! For one mode the Wentzell term is the scalar `-β|τ|²` added to the wall
//! value of `p`, where `τ` is the tangential symbol of the wall.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::discretization::{Discretization, FemSpace};
use crate::error::Result;
use crate::exact::check_grid;
use crate::fem1d::{BandedMatrix, LocalMatrix};
use crate::frame::FrameVec;
use crate::geometry::{SeparableGeometry, WallId};
use crate::params::{pressure_coeffs, CanonicalPressureCoeffs, MaterialParams, ModelOrder};
use crate::sample::{FieldSample, ModalField};
use crate::sources::ModalSource;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Data of the canonical system on one wall for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureWallData {
    pub wall: WallId,
    /// Wall coefficient β (zero for order 0).
    pub beta: C64,
    /// Tangential symbol τ of the wall for this mode.
    pub tau: C64,
    /// Tangential data `h`, entering as `∂_Γ h`.
    pub h: C64,
    /// Normal data `e`.
    pub e: C64,
    /// Line-measure factor of the wall.
    pub measure: f64,
    pub orientation: f64,
}

/// Canonical pressure system of one mode.
#[derive(Debug, Clone)]
pub struct CanonicalPressureProblem {
    pub order: ModelOrder,
    pub k: i64,
    pub alpha: C64,
    pub walls: [PressureWallData; 2],
    /// Volumic data `g` on the quadrature grid.
    pub g: Vec<FrameVec>,
    /// Wall values of `g·n`.
    pub g_normal: [C64; 2],
}

impl CanonicalPressureProblem {
    /// Coefficients (α, β) on a wall; β = 0 for order 0.
    pub fn coeffs(&self, wall: WallId) -> CanonicalPressureCoeffs {
        CanonicalPressureCoeffs { alpha: self.alpha, beta: self.walls[wall.index()].beta }
    }
}

/// Fill the canonical system of the given order from a source mode.
pub fn build_pressure_problem(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    ms: &ModalSource,
) -> CanonicalPressureProblem {
    let walls = WallId::BOTH.map(|id| {
        let w = geom.wall(id);
        let tr = ms.traces[id.index()];
        let tau = geom.tangential_symbol(id, ms.k);
        let (beta, h, e) = match order {
            ModelOrder::Zero => (ZERO, ZERO, ZERO),
            _ => {
                let beta = pressure_coeffs(params, order, w.curvature).expect("order 1 or 2").beta;
                let e = if order == ModelOrder::Two {
                    -I * (params.eta / (params.omega * params.rho0)) * tr.curlcurl_normal
                } else {
                    ZERO
                };
                (beta, -beta * tr.perp, e)
            }
        };
        PressureWallData { wall: id, beta, tau, h, e, measure: w.measure, orientation: w.orientation }
    });
    CanonicalPressureProblem {
        order,
        k: ms.k,
        alpha: params.alpha(order),
        walls,
        g: ms.f.clone(),
        g_normal: [ms.traces[0].normal, ms.traces[1].normal],
    }
}

/// Discrete pressure of one mode for one model order.
#[derive(Debug, Clone)]
pub struct ModalPressureSolution {
    pub k: i64,
    pub order: ModelOrder,
    pub coeffs: Vec<C64>,
    pub alpha: C64,
    fs: Arc<FemSpace>,
    geom: SeparableGeometry,
    params: MaterialParams,
}

/// Assemble the banded system of a canonical problem.
pub fn assemble_pressure_mode(
    prob: &CanonicalPressureProblem,
    params: &MaterialParams,
    geom: &SeparableGeometry,
    disc: &Discretization,
) -> (BandedMatrix, Vec<C64>) {
    let fs = &disc.pressure;
    let space = &fs.space;
    let mesh = space.mesh();
    let grid = &disc.grid;
    let n = space.n_local();
    let bw = space.bandwidth();
    let mut mat = BandedMatrix::zeros(space.n_dofs(), bw, bw);
    let mut rhs = vec![ZERO; space.n_dofs()];
    let k2 = C64::new(params.k2(), 0.0);
    let mut local = LocalMatrix::new(n);
    let (mut grad_a, mut grad_u, mut val) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    for e in 0..mesh.n_elements() {
        let (lo, hi) = mesh.element(e);
        local.clear();
        let mut lrhs = vec![ZERO; n];
        for (q, gi) in grid.element_range(e).enumerate() {
            let y = grid.points()[gi];
            let w = grid.weights()[gi] * geom.measure(y);
            let pb = fs.tab.at(q, hi - lo);
            let t = geom.tangential(y, prob.k);
            for l in 0..n {
                grad_a[l] = C64::new(pb.d1(l), 0.0);
                grad_u[l] = t * pb.val[l];
                val[l] = C64::new(pb.val[l], 0.0);
            }
            local.add_product(prob.alpha * w, &grad_a, &grad_a);
            local.add_product(prob.alpha * w, &grad_u, &grad_u);
            local.add_product(-k2 * w, &val, &val);
            let g = prob.g[gi];
            for l in 0..n {
                lrhs[l] += (g.a * grad_a[l].conj() + g.u * grad_u[l].conj()) * w;
            }
        }
        let dofs = space.element_dofs(e);
        mat.add_local(dofs, &local.data);
        for (l, &g) in dofs.iter().enumerate() {
            rhs[g] += lrhs[l];
        }
    }
    for wd in &prob.walls {
        let i = space.end_dof(0, wd.wall == WallId::Upper);
        mat.add(i, i, -wd.beta * wd.tau.norm_sqr() * wd.measure);
        rhs[i] += (-wd.h * wd.tau.conj() + wd.e) * wd.measure;
    }
    (mat, rhs)
}

/// Solve the canonical pressure system of one mode.
pub fn solve_pressure_mode(
    prob: &CanonicalPressureProblem,
    params: &MaterialParams,
    geom: &SeparableGeometry,
    disc: &Discretization,
) -> Result<ModalPressureSolution> {
    if prob.g.len() != disc.grid.points().len() {
        return Err(crate::Error::ModeMismatch("problem data and grid differ in length".into()));
    }
    let (mat, rhs) = assemble_pressure_mode(prob, params, geom, disc);
    let coeffs = mat.factor()?.solve(&rhs);
    Ok(ModalPressureSolution {
        k: prob.k,
        order: prob.order,
        coeffs,
        alpha: prob.alpha,
        fs: disc.pressure.clone(),
        geom: *geom,
        params: *params,
    })
}

/// Build and solve the pressure model of the given order for one source mode.
pub fn solve_pressure_model(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    ms: &ModalSource,
    disc: &Discretization,
) -> Result<ModalPressureSolution> {
    check_grid(ms, disc)?;
    let prob = build_pressure_problem(params, geom, order, ms);
    solve_pressure_mode(&prob, params, geom, disc)
}

impl ModalPressureSolution {
    /// `p`, `p'`, `p''` at `y`.
    pub fn pressure_jet(&self, y: f64) -> [C64; 3] {
        self.fs.space.eval_field(&self.coeffs, 0, y)
    }

    pub fn pressure(&self, y: f64) -> C64 {
        self.pressure_jet(y)[0]
    }

    /// Modal gradient `(p', τ p)`.
    pub fn gradient(&self, y: f64) -> FrameVec {
        let [p, dp, _] = self.pressure_jet(y);
        FrameVec::new(dp, self.geom.tangential(y, self.k) * p)
    }

    /// Residual of the modal wall condition
    /// `α∂_n p - β|τ|² p - (g·n + τ h + e)` on a wall.
    pub fn wall_residual(&self, prob: &CanonicalPressureProblem, wall: WallId) -> C64 {
        let wd = &prob.walls[wall.index()];
        let y = self.geom.wall(wall).coordinate;
        let [p, dp, _] = self.pressure_jet(y);
        let dn = dp * wd.orientation;
        self.alpha * dn - wd.beta * wd.tau.norm_sqr() * p - (prob.g_normal[wall.index()] + wd.tau * wd.h + wd.e)
    }

    /// Imaginary part of the Wentzell form `Σ_walls m (-β)|τ p|²`; negative
    /// whenever the wall traces have tangential variation.
    pub fn boundary_form(&self, prob: &CanonicalPressureProblem) -> C64 {
        prob.walls
            .iter()
            .map(|wd| {
                let y = self.geom.wall(wd.wall).coordinate;
                -wd.beta * (wd.tau * self.pressure(y)).norm_sqr() * wd.measure
            })
            .sum()
    }
}

/// Far-field velocity reconstructed from the pressure:
/// `v = (i/ρ0ω)(f - α∇p) + δ_{N=2} (η/ρ0²ω²) curl curl f`.
pub fn velocity_from_pressure(sol: &ModalPressureSolution, params: &MaterialParams, y: f64, f: FrameVec, cc: FrameVec) -> FrameVec {
    let s = I / (params.rho0 * params.omega);
    let mut v = f * s - sol.gradient(y) * (s * sol.alpha);
    if sol.order == ModelOrder::Two {
        v += cc * (params.eta / (params.rho0 * params.rho0 * params.omega * params.omega));
    }
    v
}

impl ModalField for ModalPressureSolution {
    fn mode(&self) -> i64 {
        self.k
    }

    /// The divergence of the reconstructed velocity is `iωp/(ρ0c²)`, which
    /// follows from the volumic equation.
    fn sample(&self, y: f64, f: FrameVec, cc: FrameVec) -> FieldSample {
        let [p, dp, _] = self.pressure_jet(y);
        let grad_p = FrameVec::new(dp, self.geom.tangential(y, self.k) * p);
        let v = velocity_from_pressure(self, &self.params, y, f, cc);
        let div_v = p * (I * self.params.omega / (self.params.rho0 * self.params.c * self.params.c));
        FieldSample { p, grad_p, v, div_v }
    }
}
