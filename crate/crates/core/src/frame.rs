//! Vectors in the modal frame `(a, u)` of a separable geometry.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

/// Modal vector: `a` along the wall-normal coordinate, `u` along the
/// tangential one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameVec {
    pub a: C64,
    pub u: C64,
}

impl FrameVec {
    pub const ZERO: FrameVec = FrameVec { a: C64::new(0.0, 0.0), u: C64::new(0.0, 0.0) };

    pub fn new(a: C64, u: C64) -> Self {
        FrameVec { a, u }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.u.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

impl Add for FrameVec {
    type Output = FrameVec;
    fn add(self, o: FrameVec) -> FrameVec {
        FrameVec { a: self.a + o.a, u: self.u + o.u }
    }
}

impl AddAssign for FrameVec {
    fn add_assign(&mut self, o: FrameVec) {
        self.a += o.a;
        self.u += o.u;
    }
}

impl Sub for FrameVec {
    type Output = FrameVec;
    fn sub(self, o: FrameVec) -> FrameVec {
        FrameVec { a: self.a - o.a, u: self.u - o.u }
    }
}

impl Neg for FrameVec {
    type Output = FrameVec;
    fn neg(self) -> FrameVec {
        FrameVec { a: -self.a, u: -self.u }
    }
}

impl Mul<C64> for FrameVec {
    type Output = FrameVec;
    fn mul(self, s: C64) -> FrameVec {
        FrameVec { a: self.a * s, u: self.u * s }
    }
}

impl Mul<f64> for FrameVec {
    type Output = FrameVec;
    fn mul(self, s: f64) -> FrameVec {
        FrameVec { a: self.a * s, u: self.u * s }
    }
}
