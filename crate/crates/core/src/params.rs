//! Physical parameters and the coefficient tables of the impedance models.
//!
//! All quantities are dimensionless by default. The reference experiment
//! (ω = 15, c = 1, ρ0 = 1, η = 1.6e-3) corresponds, for instance, to air at
//! roughly 400 Hz in a channel of a few centimetres once lengths are scaled by
//! the channel height and times by height / c.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const I: C64 = C64::new(0.0, 1.0);

/// Physical constants of the viscous gas and the driving frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub omega: f64,
    pub c: f64,
    pub rho0: f64,
    pub eta: f64,
    pub eta_prime: f64,
}

impl MaterialParams {
    pub fn new(omega: f64, c: f64, rho0: f64, eta: f64, eta_prime: f64) -> Result<Self> {
        let p = MaterialParams { omega, c, rho0, eta, eta_prime };
        p.validate()?;
        Ok(p)
    }

    /// Reference setting: ω = 15, c = ρ0 = 1, η = 1.6e-3, η′ = 0.
    pub fn reference() -> Self {
        MaterialParams { omega: 15.0, c: 1.0, rho0: 1.0, eta: 1.6e-3, eta_prime: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        positive("omega", self.omega)?;
        positive("c", self.c)?;
        positive("rho0", self.rho0)?;
        positive("eta", self.eta)?;
        if !(self.eta_prime.is_finite() && self.eta_prime >= 0.0) {
            return Err(Error::invalid("eta_prime", format!("must be finite and >= 0, got {}", self.eta_prime)));
        }
        Ok(())
    }

    pub fn with_eta(self, eta: f64) -> Self {
        MaterialParams { eta, ..self }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        MaterialParams { omega, ..self }
    }

    /// Small parameter ε = √(2η/(ωρ0)), also the boundary-layer thickness.
    pub fn epsilon(&self) -> f64 {
        (2.0 * self.eta / (self.omega * self.rho0)).sqrt()
    }

    /// Ratio γ′ = η′/η of second to dynamic viscosity.
    pub fn gamma_prime(&self) -> f64 {
        if self.eta_prime == 0.0 {
            0.0
        } else {
            self.eta_prime / self.eta
        }
    }

    /// Squared acoustic wavenumber ω²/c².
    pub fn k2(&self) -> f64 {
        (self.omega / self.c).powi(2)
    }

    /// √(η/(2ωρ0)) = ε/2, the scale of the first-order wall admittance.
    pub fn half_epsilon(&self) -> f64 {
        (self.eta / (2.0 * self.omega * self.rho0)).sqrt()
    }

    /// Volumic coefficient α of the model of the given order.
    pub fn alpha(&self, order: ModelOrder) -> C64 {
        match order {
            ModelOrder::Two => C64::new(1.0, -self.omega * (self.eta + self.eta_prime) / (self.rho0 * self.c * self.c)),
            _ => C64::new(1.0, 0.0),
        }
    }
}

/// Free-function form of [`MaterialParams::epsilon`].
pub fn epsilon(params: &MaterialParams) -> f64 {
    params.epsilon()
}

/// Order of an approximative model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelOrder {
    Zero,
    One,
    Two,
}

impl ModelOrder {
    pub const ALL: [ModelOrder; 3] = [ModelOrder::Zero, ModelOrder::One, ModelOrder::Two];

    pub fn index(self) -> usize {
        match self {
            ModelOrder::Zero => 0,
            ModelOrder::One => 1,
            ModelOrder::Two => 2,
        }
    }
}

impl TryFrom<u32> for ModelOrder {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        match n {
            0 => Ok(ModelOrder::Zero),
            1 => Ok(ModelOrder::One),
            2 => Ok(ModelOrder::Two),
            _ => Err(Error::invalid("order", format!("must be 0, 1 or 2, got {n}"))),
        }
    }
}

impl std::fmt::Display for ModelOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Volumic and wall coefficients of the canonical pressure system.
///
/// `beta` is the tabulated wall coefficient, which enters the Wentzell condition
/// `α ∂_n p = ... + ∂_t(β ∂_t p)`. Its imaginary part is positive; the dissipative
/// form used in stability arguments is `-β` (see [`Self::dissipative_beta`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPressureCoeffs {
    pub alpha: C64,
    pub beta: C64,
}

impl CanonicalPressureCoeffs {
    /// Coefficient of the boundary form `∫ β̃ ∂_t p ∂_t q̄` once the Wentzell term
    /// is moved to the left of the weak form; satisfies `Im β̃ ≤ -c|β̃|`.
    pub fn dissipative_beta(&self) -> C64 {
        -self.beta
    }
}

/// Volumic and wall coefficients of the canonical velocity system.
///
/// The tabulated `beta` equals the pressure coefficient scaled by c²/ω².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalVelocityCoeffs {
    pub alpha: C64,
    pub beta: C64,
}

impl CanonicalVelocityCoeffs {
    /// Velocity counterpart of [`CanonicalPressureCoeffs::dissipative_beta`].
    pub fn dissipative_beta(&self) -> C64 {
        -self.beta
    }
}

/// Wall coefficient shared by both tables before the c²/ω² scaling.
fn wall_beta(params: &MaterialParams, order: ModelOrder, kappa: f64) -> C64 {
    let b1 = C64::new(1.0, 1.0) * params.half_epsilon();
    match order {
        ModelOrder::Two => b1 + I * (params.eta / (2.0 * params.omega * params.rho0) * kappa),
        _ => b1,
    }
}

fn reject_order_zero(order: ModelOrder) -> Result<()> {
    if order == ModelOrder::Zero {
        return Err(Error::invalid(
            "order",
            "order 0 has no canonical wall coefficient (its wall condition is plain Neumann / no-penetration)",
        ));
    }
    Ok(())
}

/// Coefficients (α, β) of the pressure model of order 1 or 2 on a wall of
/// signed curvature `kappa`.
pub fn pressure_coeffs(params: &MaterialParams, order: ModelOrder, kappa: f64) -> Result<CanonicalPressureCoeffs> {
    reject_order_zero(order)?;
    Ok(CanonicalPressureCoeffs { alpha: params.alpha(order), beta: wall_beta(params, order, kappa) })
}

/// Coefficients (α, β) of the velocity model of order 1 or 2.
pub fn velocity_coeffs(params: &MaterialParams, order: ModelOrder, kappa: f64) -> Result<CanonicalVelocityCoeffs> {
    reject_order_zero(order)?;
    let scale = params.c * params.c / (params.omega * params.omega);
    Ok(CanonicalVelocityCoeffs { alpha: params.alpha(order), beta: wall_beta(params, order, kappa) * scale })
}
