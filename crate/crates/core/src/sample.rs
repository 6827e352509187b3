//! Pointwise evaluation of modal solutions.

use num_complex::Complex64 as C64;

use crate::frame::FrameVec;

/// Pressure, pressure gradient, velocity and velocity divergence of one mode
/// at one wall-normal position.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub p: C64,
    pub grad_p: FrameVec,
    pub v: FrameVec,
    pub div_v: C64,
}

impl FieldSample {
    pub fn sub(&self, o: &FieldSample) -> FieldSample {
        FieldSample { p: self.p - o.p, grad_p: self.grad_p - o.grad_p, v: self.v - o.v, div_v: self.div_v - o.div_v }
    }

    pub fn scale(&self, s: C64) -> FieldSample {
        FieldSample { p: self.p * s, grad_p: self.grad_p * s, v: self.v * s, div_v: self.div_v * s }
    }

    /// `|p|² + |∇p|²`.
    pub fn h1_sqr(&self) -> f64 {
        self.p.norm_sqr() + self.grad_p.norm_sqr()
    }

    /// `|v|² + |div v|²`.
    pub fn hdiv_sqr(&self) -> f64 {
        self.v.norm_sqr() + self.div_v.norm_sqr()
    }
}

/// A solution of one tangential mode that can be sampled anywhere across the
/// channel. `f` and `cc` are the source and its curl–curl at `y`, needed by
/// models whose velocity is reconstructed from the pressure.
pub trait ModalField: Send + Sync {
    fn mode(&self) -> i64;
    fn sample(&self, y: f64, f: FrameVec, cc: FrameVec) -> FieldSample;
}
