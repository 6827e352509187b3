//! Boundary-layer corrector restoring the no-slip condition near walls.
//!
//! Close to a wall the far field velocity `v` of order `N` is completed by
//!
//! ```text
//! w = ε curl(φ χ),    φ(t, s) = φ̃(t, s/ε),
//! φ̃(t, S) = ½(1+i) e^{-(1-i)S} Σ_{ℓ≤N} ε^ℓ E_ℓ(v·n⊥)(t, S)
//! ```
//!
//! where `s` is the distance to the wall, `ε = √(2η/ωρ0)` and `χ` is a cutoff
//! equal to one near the wall. Each `E_ℓ` is a polynomial in `S` whose
//! coefficients are tangential differential operators applied to the wall trace
//! of `v·n⊥`; per mode the tangential derivative is the symbol `τ` of the wall.
//!
//! Two sets of `E_ℓ` are provided. [`ProfileVariant::Printed`] follows the
//! commonly quoted closed forms. [`ProfileVariant::WallConsistent`] is chosen
//! so that `∂_S φ̃(0) = -v·n⊥` holds exactly at every order, which is the
//! condition for the composite field to satisfy no-slip at the wall. The two
//! coincide for `N = 0`, and for `N = 1` on straight walls.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::frame::FrameVec;
use crate::geometry::{CutoffSpec, SeparableGeometry, WallId};
use crate::params::{MaterialParams, ModelOrder};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Which closed forms of `E_1`, `E_2` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProfileVariant {
    /// `E_1 = ¼(3+i)κSv`, and `E_2` with the constant `i(1+γ′)ω²/(2c²)v`.
    Printed,
    /// `E_1 = κv((1+i)/4 + S/2)`, and `E_2` without the constant term.
    #[default]
    WallConsistent,
}

/// Coefficients of `E_ℓ(v)` as a polynomial in `S` (lowest degree first).
///
/// `tau` is the tangential symbol of the wall, so that `∂_t² v = τ² v`.
pub fn e_coefficients(
    ell: usize,
    v: C64,
    kappa: f64,
    tau: C64,
    params: &MaterialParams,
    variant: ProfileVariant,
) -> Result<Vec<C64>> {
    let quarter = C64::new(0.25, 0.0);
    match ell {
        0 => Ok(vec![v]),
        1 => Ok(match variant {
            ProfileVariant::Printed => vec![ZERO, (C64::new(3.0, 1.0) * quarter) * kappa * v],
            ProfileVariant::WallConsistent => vec![C64::new(1.0, 1.0) * quarter * kappa * v, C64::new(0.5 * kappa, 0.0) * v],
        }),
        2 => {
            let x = (0.75 * kappa * kappa + tau * tau) * v;
            let c0 = match variant {
                ProfileVariant::Printed => {
                    I * ((1.0 + params.gamma_prime()) * params.omega * params.omega / (2.0 * params.c * params.c)) * v
                }
                ProfileVariant::WallConsistent => ZERO,
            };
            Ok(vec![c0 + I * quarter * x, C64::new(1.0, 1.0) * quarter * x, C64::new(0.375 * kappa * kappa, 0.0) * v])
        }
        _ => Err(Error::Unsupported(format!("E_{ell}: closed forms exist up to order 2"))),
    }
}

/// Value of `E_ℓ(v)` at the stretched distance `s`.
pub fn eval_e(
    ell: usize,
    v: C64,
    s: f64,
    kappa: f64,
    tau: C64,
    params: &MaterialParams,
    variant: ProfileVariant,
) -> Result<C64> {
    Ok(poly_jet(&e_coefficients(ell, v, kappa, tau, params, variant)?, s)[0])
}

/// Value and first two derivatives of a polynomial.
fn poly_jet(c: &[C64], s: f64) -> [C64; 3] {
    let mut out = [ZERO; 3];
    for &a in c.iter().rev() {
        out[2] = out[2] * s + out[1] * 2.0;
        out[1] = out[1] * s + out[0];
        out[0] = out[0] * s + a;
    }
    out
}

/// Boundary-layer profile of one mode at one wall.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLayerProfile {
    pub wall: WallId,
    pub k: i64,
    pub order: ModelOrder,
    pub variant: ProfileVariant,
    /// Far-field trace `v·n⊥` the profile was built from.
    pub trace: C64,
    /// Coefficients of the polynomial multiplying `e^{-(1-i)S}`, including
    /// the factor `½(1+i)` and the powers of `ε`.
    pub poly: Vec<C64>,
    pub eps: f64,
    pub cutoff: CutoffSpec,
    geom: SeparableGeometry,
}

/// Build the profile of order `N` from the modal far-field trace `v·n⊥` on a
/// wall.
pub fn build_phi(
    order: ModelOrder,
    trace: C64,
    wall: WallId,
    k: i64,
    geom: &SeparableGeometry,
    params: &MaterialParams,
    cutoff: CutoffSpec,
    variant: ProfileVariant,
) -> Result<BoundaryLayerProfile> {
    cutoff.validate()?;
    let eps = params.epsilon();
    let w = geom.wall(wall);
    let tau = geom.tangential_symbol(wall, k);
    let half = C64::new(0.5, 0.5);
    let mut poly = vec![ZERO; 3];
    for ell in 0..=order.index() {
        let scale = eps.powi(ell as i32);
        for (n, c) in e_coefficients(ell, trace, w.curvature, tau, params, variant)?.into_iter().enumerate() {
            poly[n] += half * c * scale;
        }
    }
    while poly.len() > 1 && poly.last() == Some(&ZERO) {
        poly.pop();
    }
    Ok(BoundaryLayerProfile { wall, k, order, variant, trace, poly, eps, cutoff, geom: *geom })
}

impl BoundaryLayerProfile {
    /// `φ̃`, `∂_S φ̃`, `∂_S² φ̃` at stretched distance `s`.
    pub fn phi_jet(&self, s: f64) -> [C64; 3] {
        let [p, dp, ddp] = poly_jet(&self.poly, s);
        let m = C64::new(-1.0, 1.0);
        let e = (m * s).exp();
        [e * p, e * (dp + m * p), e * (ddp + m * dp * 2.0 + m * m * p)]
    }

    /// Distance to the wall of the point at wall-normal coordinate `y`.
    pub fn distance(&self, y: f64) -> f64 {
        let w = self.geom.wall(self.wall);
        w.orientation * (w.coordinate - y)
    }

    /// Stream function `ψ = φχ` and its first two derivatives in `y`.
    pub fn stream_jet(&self, y: f64) -> [C64; 3] {
        let s = self.distance(y);
        if s >= self.cutoff.s0 {
            return [ZERO; 3];
        }
        let [f, fs, fss] = self.phi_jet(s / self.eps);
        let c = &self.cutoff;
        let (x, dx, ddx) = (c.eval(s), c.derivative(s), c.second_derivative(s));
        let e = self.eps;
        let psi = f * x;
        let psi_s = fs * (x / e) + f * dx;
        let psi_ss = fss * (x / (e * e)) + fs * (2.0 * dx / e) + f * ddx;
        let ds_dy = -self.geom.wall(self.wall).orientation;
        [psi, psi_s * ds_dy, psi_ss]
    }

    /// Corrector velocity `ε curl ψ` with its first `y`-derivative, as
    /// `(w, w′)` in the frame.
    pub fn corrector_jet(&self, y: f64) -> (FrameVec, FrameVec) {
        let [p, dp, ddp] = self.stream_jet(y);
        let h = self.geom.handedness() * self.eps;
        let t = self.geom.tangential(y, self.k);
        let dt = self.geom.tangential_dy(y, self.k);
        let w = FrameVec::new(t * p * h, -dp * h);
        let dw = FrameVec::new((dt * p + t * dp) * h, -ddp * h);
        (w, dw)
    }

    /// Corrector velocity at wall-normal coordinate `y`.
    pub fn eval_corrector(&self, y: f64) -> FrameVec {
        self.corrector_jet(y).0
    }

    /// Modal divergence of the corrector, computed from its components.
    pub fn divergence(&self, y: f64) -> C64 {
        let (w, dw) = self.corrector_jet(y);
        dw.a + w.a * self.geom.metric(y) + self.geom.tangential(y, self.k) * w.u
    }

    /// Component `w·n⊥` of the corrector.
    pub fn tangential(&self, y: f64) -> C64 {
        self.eval_corrector(y).u * self.geom.perp_sign(self.wall)
    }
}

/// Evaluate the corrector of a profile at `y`.
pub fn eval_corrector(profile: &BoundaryLayerProfile, y: f64) -> FrameVec {
    profile.eval_corrector(y)
}
