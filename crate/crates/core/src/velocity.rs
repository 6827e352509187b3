//! Impedance models of order 0, 1 and 2 in velocity form.
//!
//! Eliminating the pressure from the pressure models gives
//!
//! ```text
//! α∇div v + (ω²/c²) v = g                          in Ω
//! v·n + α⁻¹ ∂_Γ(β_v ∂_Γ λ) = ∂_Γ h,  λ = α div v    on ∂Ω
//! ```
//!
//! with `g = (iω/ρ0c²) f + δ_{N=2} (η/ρ0²c²) curl curl f`, `β_v = (c²/ω²) β`
//! and `h = -(i/ρ0ω) h_p` where `h_p` is the tangential data of the pressure
//! model. The weak form keeps the wall value `λ` as a multiplier:
//!
//! ```text
//! α∫div v div v̄′ - (ω²/c²)∫v·v̄′ - ∮ λ v̄′·n = -∫g·v̄′
//! v·n + α⁻¹β_v|τ|² λ = τ h                       for each mode, on each wall
//! ```
//!
//! Per mode the multiplier is a scalar on each wall and is eliminated into the
//! wall value of the normal component. When `β_v τ` vanishes (order 0, or the
//! mode `k = 0` on the strip) the wall condition degenerates to `v·n = 0`,
//! imposed essentially.
//!
//! The normal component is continuous of degree `p` and the tangential one is
//! discontinuous of degree `p - 1`, so that `div v` is square integrable
//! without forcing tangential continuity.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::discretization::{Discretization, FemSpace};
use crate::error::Result;
use crate::exact::{check_grid, pressure_factor};
use crate::fem1d::{BandedMatrix, LocalMatrix};
use crate::frame::FrameVec;
use crate::geometry::{SeparableGeometry, WallId};
use crate::params::{MaterialParams, ModelOrder};
use crate::pressure::build_pressure_problem;
use crate::sample::{FieldSample, ModalField};
use crate::sources::ModalSource;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Below this value of `|β_v τ²|` the wall condition is imposed as `v·n = 0`.
const DEGENERATE_WALL: f64 = 1e-300;

/// Data of the velocity system on one wall for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityWallData {
    pub wall: WallId,
    /// `β_v = (c²/ω²) β`.
    pub beta: C64,
    pub tau: C64,
    pub h: C64,
    pub measure: f64,
    pub orientation: f64,
}

impl VelocityWallData {
    /// `β_v |τ|²`, or `None` when the condition degenerates to `v·n = 0`.
    pub fn stiffness(&self) -> Option<C64> {
        let s = self.beta * self.tau.norm_sqr();
        (s.norm() > DEGENERATE_WALL).then_some(s)
    }
}

/// Velocity system of one mode.
#[derive(Debug, Clone)]
pub struct CanonicalVelocityProblem {
    pub order: ModelOrder,
    pub k: i64,
    pub alpha: C64,
    pub walls: [VelocityWallData; 2],
    /// Volumic data `g` on the quadrature grid.
    pub g: Vec<FrameVec>,
}

/// Fill the velocity system of the given order from a source mode.
pub fn build_velocity_problem(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    ms: &ModalSource,
) -> CanonicalVelocityProblem {
    let pp = build_pressure_problem(params, geom, order, ms);
    let scale_beta = params.c * params.c / (params.omega * params.omega);
    let scale_h = -I / (params.rho0 * params.omega);
    let walls = pp.walls.map(|w| VelocityWallData {
        wall: w.wall,
        beta: w.beta * scale_beta,
        tau: w.tau,
        h: w.h * scale_h,
        measure: w.measure,
        orientation: w.orientation,
    });
    let sf = I * (params.omega / (params.rho0 * params.c * params.c));
    let scc = if order == ModelOrder::Two { params.eta / (params.rho0 * params.rho0 * params.c * params.c) } else { 0.0 };
    let g = ms.f.iter().zip(&ms.curlcurl).map(|(f, cc)| *f * sf + *cc * scc).collect();
    CanonicalVelocityProblem { order, k: ms.k, alpha: pp.alpha, walls, g }
}

/// Discrete velocity of one mode for one model order.
#[derive(Debug, Clone)]
pub struct MixedModalSolution {
    pub k: i64,
    pub order: ModelOrder,
    pub coeffs: Vec<C64>,
    /// Wall multipliers `λ = α div v`, one per wall.
    pub lambda: [C64; 2],
    fs: Arc<FemSpace>,
    geom: SeparableGeometry,
    params: MaterialParams,
}

/// Assemble the banded system of a velocity problem with the wall multipliers
/// eliminated.
pub fn assemble_velocity_mode(
    prob: &CanonicalVelocityProblem,
    params: &MaterialParams,
    geom: &SeparableGeometry,
    disc: &Discretization,
) -> (BandedMatrix, Vec<C64>) {
    let fs = &disc.velocity;
    let space = &fs.space;
    let mesh = space.mesh();
    let grid = &disc.grid;
    let n = space.n_local();
    let (ra, ru) = (space.field_range(0), space.field_range(1));
    let bw = space.bandwidth();
    let mut mat = BandedMatrix::zeros(space.n_dofs(), bw, bw);
    let mut rhs = vec![ZERO; space.n_dofs()];
    let k2 = C64::new(params.k2(), 0.0);
    let mut local = LocalMatrix::new(n);
    let (mut div, mut va, mut vu) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    for e in 0..mesh.n_elements() {
        let (lo, hi) = mesh.element(e);
        local.clear();
        let mut lrhs = vec![ZERO; n];
        for (q, gi) in grid.element_range(e).enumerate() {
            let y = grid.points()[gi];
            let w = grid.weights()[gi] * geom.measure(y);
            let pb = fs.tab.at(q, hi - lo);
            let t = geom.tangential(y, prob.k);
            let c = geom.metric(y);
            for l in ra.clone() {
                let (v, d) = (pb.val[l], pb.d1(l));
                div[l] = C64::new(d + c * v, 0.0);
                va[l] = C64::new(v, 0.0);
                vu[l] = ZERO;
            }
            for l in ru.clone() {
                div[l] = t * pb.val[l];
                va[l] = ZERO;
                vu[l] = C64::new(pb.val[l], 0.0);
            }
            local.add_product(prob.alpha * w, &div, &div);
            local.add_product(-k2 * w, &va, &va);
            local.add_product(-k2 * w, &vu, &vu);
            let g = prob.g[gi];
            for l in ra.clone() {
                lrhs[l] -= g.a * (w * pb.val[l]);
            }
            for l in ru.clone() {
                lrhs[l] -= g.u * (w * pb.val[l]);
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
        match wd.stiffness() {
            Some(s) => {
                mat.add(i, i, prob.alpha / s * wd.measure);
                rhs[i] += prob.alpha * wd.tau * wd.h / s * (wd.orientation * wd.measure);
            }
            None => {
                mat.set_identity_row(i);
                rhs[i] = ZERO;
            }
        }
    }
    (mat, rhs)
}

/// Solve the velocity system of one mode.
pub fn solve_velocity_mode(
    prob: &CanonicalVelocityProblem,
    params: &MaterialParams,
    geom: &SeparableGeometry,
    disc: &Discretization,
) -> Result<MixedModalSolution> {
    if prob.g.len() != disc.grid.points().len() {
        return Err(crate::Error::ModeMismatch("problem data and grid differ in length".into()));
    }
    let (mat, rhs) = assemble_velocity_mode(prob, params, geom, disc);
    let coeffs = mat.factor()?.solve(&rhs);
    let mut sol = MixedModalSolution {
        k: prob.k,
        order: prob.order,
        coeffs,
        lambda: [ZERO; 2],
        fs: disc.velocity.clone(),
        geom: *geom,
        params: *params,
    };
    for wd in &prob.walls {
        let y = geom.wall(wd.wall).coordinate;
        sol.lambda[wd.wall.index()] = match wd.stiffness() {
            Some(s) => prob.alpha * (wd.tau * wd.h - sol.velocity(y).a * wd.orientation) / s,
            None => prob.alpha * sol.divergence(y).0,
        };
    }
    Ok(sol)
}

/// Build and solve the velocity model of the given order for one source mode.
pub fn solve_velocity_model(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    order: ModelOrder,
    ms: &ModalSource,
    disc: &Discretization,
) -> Result<MixedModalSolution> {
    check_grid(ms, disc)?;
    let prob = build_velocity_problem(params, geom, order, ms);
    solve_velocity_mode(&prob, params, geom, disc)
}

impl MixedModalSolution {
    pub fn velocity_jet(&self, y: f64) -> ([C64; 3], [C64; 3]) {
        let s = &self.fs.space;
        (s.eval_field(&self.coeffs, 0, y), s.eval_field(&self.coeffs, 1, y))
    }

    pub fn velocity(&self, y: f64) -> FrameVec {
        let (a, u) = self.velocity_jet(y);
        FrameVec::new(a[0], u[0])
    }

    /// Modal divergence and its wall-normal derivative (inside an element).
    pub fn divergence(&self, y: f64) -> (C64, C64) {
        let (a, u) = self.velocity_jet(y);
        let g = &self.geom;
        let (t, dt, c, dc) = (g.tangential(y, self.k), g.tangential_dy(y, self.k), g.metric(y), g.metric_dy(y));
        (a[1] + a[0] * c + t * u[0], a[2] + a[0] * dc + a[1] * c + dt * u[0] + t * u[1])
    }

    /// `p = -(iρ0c²/ω) div v`.
    pub fn pressure(&self, y: f64) -> C64 {
        pressure_from_velocity(self, y)
    }
}

/// Pressure recovered from the velocity through the continuity equation.
pub fn pressure_from_velocity(sol: &MixedModalSolution, y: f64) -> C64 {
    sol.divergence(y).0 * pressure_factor(&sol.params)
}

impl ModalField for MixedModalSolution {
    fn mode(&self) -> i64 {
        self.k
    }

    fn sample(&self, y: f64, _f: FrameVec, _cc: FrameVec) -> FieldSample {
        let (div, ddiv) = self.divergence(y);
        let pf = pressure_factor(&self.params);
        let t = self.geom.tangential(y, self.k);
        FieldSample { p: div * pf, grad_p: FrameVec::new(ddiv * pf, t * div * pf), v: self.velocity(y), div_v: div }
    }
}
