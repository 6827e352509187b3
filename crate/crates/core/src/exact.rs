//! Reference solver for the viscous model with no-slip walls.
//!
//! The pressure is eliminated through `p = -(iρ0c²/ω) div v`, and the vector
//! Laplacian is split as `∫∇v:∇v̄′ = ∫ div v div v̄′ + curl v curl v̄′` (valid for
//! fields vanishing on the walls), giving for each mode
//!
//! ```text
//! ∫ [-iωρ0 v·v̄′ + η curl v curl v̄′ + (iρ0c²/ω + η + η′) div v div v̄′] dμ = ∫ f·v̄′ dμ
//! ```
//!
//! with `dμ = dy` on the strip and `r dr` on the annulus, so that the polar
//! coupling terms of the vector Laplacian enter through the metric terms of the
//! modal `div` and `curl`.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::discretization::{Discretization, FemSpace};
use crate::error::{Error, Result};
use crate::fem1d::{BandedMatrix, LocalMatrix};
use crate::frame::FrameVec;
use crate::geometry::SeparableGeometry;
use crate::params::MaterialParams;
use crate::sample::{FieldSample, ModalField};
use crate::sources::ModalSource;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Discrete solution of one mode of the viscous model.
#[derive(Debug, Clone)]
pub struct ModalExactSolution {
    pub k: i64,
    pub coeffs: Vec<C64>,
    fs: Arc<FemSpace>,
    geom: SeparableGeometry,
    params: MaterialParams,
}

pub(crate) fn check_grid(ms: &ModalSource, disc: &Discretization) -> Result<()> {
    if ms.grid_len() != disc.grid.points().len() {
        return Err(Error::ModeMismatch(format!(
            "source sampled on {} points, discretization grid has {}",
            ms.grid_len(),
            disc.grid.points().len()
        )));
    }
    Ok(())
}

pub(crate) fn warn_unresolved(params: &MaterialParams, disc: &Discretization) {
    let h = disc.mesh().min_size();
    if h > params.epsilon() {
        log::warn!("wall element {h:.3e} exceeds the boundary-layer thickness {:.3e}; the viscous layer is unresolved", params.epsilon());
    }
}

/// Assemble the banded system of one mode (walls included as identity rows).
pub fn assemble_exact_mode(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    ms: &ModalSource,
    disc: &Discretization,
) -> Result<(BandedMatrix, Vec<C64>)> {
    check_grid(ms, disc)?;
    let fs = &disc.exact;
    let space = &fs.space;
    let mesh = space.mesh();
    let grid = &disc.grid;
    let n = space.n_local();
    let (ra, ru) = (space.field_range(0), space.field_range(1));
    let bw = space.bandwidth();
    let mut mat = BandedMatrix::zeros(space.n_dofs(), bw, bw);
    let mut rhs = vec![ZERO; space.n_dofs()];
    let mass = -I * (params.omega * params.rho0);
    let grad_div = I * (params.rho0 * params.c * params.c / params.omega) + (params.eta + params.eta_prime);
    let eta = C64::new(params.eta, 0.0);
    let mut local = LocalMatrix::new(n);
    let (mut div, mut curl, mut va, mut vu) = (vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]);
    let k = ms.k;
    for e in 0..mesh.n_elements() {
        let (lo, hi) = mesh.element(e);
        local.clear();
        let mut lrhs = vec![ZERO; n];
        for (q, gi) in grid.element_range(e).enumerate() {
            let y = grid.points()[gi];
            let w = grid.weights()[gi] * geom.measure(y);
            let pb = fs.tab.at(q, hi - lo);
            let t = geom.tangential(y, k);
            let c = geom.metric(y);
            for l in ra.clone() {
                let (v, d) = (pb.val[l], pb.d1(l));
                div[l] = C64::new(d + c * v, 0.0);
                curl[l] = -t * v;
                va[l] = C64::new(v, 0.0);
                vu[l] = ZERO;
            }
            for l in ru.clone() {
                let (v, d) = (pb.val[l], pb.d1(l));
                div[l] = t * v;
                curl[l] = C64::new(d + c * v, 0.0);
                va[l] = ZERO;
                vu[l] = C64::new(v, 0.0);
            }
            local.add_product(mass * w, &va, &va);
            local.add_product(mass * w, &vu, &vu);
            local.add_product(eta * w, &curl, &curl);
            local.add_product(grad_div * w, &div, &div);
            let f = ms.f[gi];
            for l in ra.clone() {
                lrhs[l] += f.a * (w * pb.val[l]);
            }
            for l in ru.clone() {
                lrhs[l] += f.u * (w * pb.val[l]);
            }
        }
        let dofs = space.element_dofs(e);
        mat.add_local(dofs, &local.data);
        for (l, &g) in dofs.iter().enumerate() {
            rhs[g] += lrhs[l];
        }
    }
    for field in 0..2 {
        for upper in [false, true] {
            let i = space.end_dof(field, upper);
            mat.set_identity_row(i);
            rhs[i] = ZERO;
        }
    }
    Ok((mat, rhs))
}


/// Solve one mode of the viscous model with no-slip walls.
pub fn solve_exact_mode(
    params: &MaterialParams,
    geom: &SeparableGeometry,
    ms: &ModalSource,
    disc: &Discretization,
) -> Result<ModalExactSolution> {
    warn_unresolved(params, disc);
    let (mat, rhs) = assemble_exact_mode(params, geom, ms, disc)?;
    let coeffs = mat.factor()?.solve(&rhs);
    Ok(ModalExactSolution { k: ms.k, coeffs, fs: disc.exact.clone(), geom: *geom, params: *params })
}

impl ModalExactSolution {
    /// Velocity components with first and second wall-normal derivatives.
    pub fn velocity_jet(&self, y: f64) -> ([C64; 3], [C64; 3]) {
        let s = &self.fs.space;
        (s.eval_field(&self.coeffs, 0, y), s.eval_field(&self.coeffs, 1, y))
    }

    pub fn velocity(&self, y: f64) -> FrameVec {
        let (a, u) = self.velocity_jet(y);
        FrameVec::new(a[0], u[0])
    }

    /// Modal divergence and its wall-normal derivative.
    pub fn divergence(&self, y: f64) -> (C64, C64) {
        let (a, u) = self.velocity_jet(y);
        let g = &self.geom;
        let (t, dt, c, dc) = (g.tangential(y, self.k), g.tangential_dy(y, self.k), g.metric(y), g.metric_dy(y));
        let div = a[1] + a[0] * c + t * u[0];
        let ddiv = a[2] + a[0] * dc + a[1] * c + dt * u[0] + t * u[1];
        (div, ddiv)
    }

    /// Modal scalar curl of the velocity.
    pub fn curl(&self, y: f64) -> C64 {
        let (a, u) = self.velocity_jet(y);
        let g = &self.geom;
        (u[1] + u[0] * g.metric(y) - g.tangential(y, self.k) * a[0]) * g.handedness()
    }

    pub fn pressure(&self, y: f64) -> C64 {
        self.divergence(y).0 * pressure_factor(&self.params)
    }

    /// Pointwise residual of the momentum equation,
    /// `-iωρ0 v + ∇p + η curl curl v - (η + η′)∇ div v - f`, using the
    /// decomposition `-Δ = curl curl - ∇ div`.
    pub fn momentum_residual(&self, y: f64, f: FrameVec) -> FrameVec {
        let g = &self.geom;
        let k = self.k;
        let p = &self.params;
        let (a, u) = self.velocity_jet(y);
        let (t, dt, c, dc) = (g.tangential(y, k), g.tangential_dy(y, k), g.metric(y), g.metric_dy(y));
        let (div, ddiv) = self.divergence(y);
        let psi = u[1] + u[0] * c - t * a[0];
        let dpsi = u[2] + u[0] * dc + u[1] * c - dt * a[0] - t * a[1];
        let cc = FrameVec::new(t * psi, -dpsi);
        let pf = pressure_factor(p);
        let grad_div = FrameVec::new(ddiv, t * div);
        let v = FrameVec::new(a[0], u[0]);
        v * (-I * p.omega * p.rho0) + grad_div * pf + cc * p.eta - grad_div * (p.eta + p.eta_prime) - f
    }
}

/// `-iρ0c²/ω`, the factor mapping `div v` to `p`.
pub fn pressure_factor(params: &MaterialParams) -> C64 {
    -I * (params.rho0 * params.c * params.c / params.omega)
}

impl ModalField for ModalExactSolution {
    fn mode(&self) -> i64 {
        self.k
    }

    fn sample(&self, y: f64, _f: FrameVec, _cc: FrameVec) -> FieldSample {
        let (a, u) = self.velocity_jet(y);
        let (div, ddiv) = self.divergence(y);
        let pf = pressure_factor(&self.params);
        let t = self.geom.tangential(y, self.k);
        FieldSample {
            p: div * pf,
            grad_p: FrameVec::new(ddiv * pf, t * div * pf),
            v: FrameVec::new(a[0], u[0]),
            div_v: div,
        }
    }
}
