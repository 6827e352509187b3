//! Separable domains: a strip periodic in x (a flat torus) and an annulus.
//!
//! Fields are expanded in tangential Fourier modes and carried as two
//! components in the local frame `(a, u)`: `a` along the wall-normal coordinate
//! (`y` or `r`) and `u` along the tangential one (`x` or `θ`). For one mode the
//! planar operators reduce to
//!
//! ```text
//! div v  = a' + c a + T u
//! curl v = h (u' + c u - T a)
//! curl ψ = (h T ψ, -h ψ')
//! grad p = (p', T p)
//! ```
//!
//! where `T` is [`SeparableGeometry::tangential`], `c` the metric term and `h` the
//! handedness of the frame. Each wall carries its outward normal `n`, the
//! tangent `n⊥` obtained by rotating `n` by +90°, and the signed curvature κ,
//! positive on convex parts of the boundary.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Which of the two walls of a separable domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WallId {
    /// `y = 0` on the strip, the inner circle on the annulus.
    Lower,
    /// `y = height` on the strip, the outer circle on the annulus.
    Upper,
}

impl WallId {
    pub const BOTH: [WallId; 2] = [WallId::Lower, WallId::Upper];

    pub fn index(self) -> usize {
        match self {
            WallId::Lower => 0,
            WallId::Upper => 1,
        }
    }
}

/// One wall of a separable domain with its orientation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryComponent {
    pub id: WallId,
    pub name: &'static str,
    /// Wall-normal coordinate of the wall (`y` or `r`).
    pub coordinate: f64,
    /// Signed curvature, positive where the domain is convex.
    pub curvature: f64,
    /// `+1` if the outward normal points towards increasing `y`/`r`, `-1` otherwise.
    pub orientation: f64,
    /// Length of the wall over one period.
    pub circumference: f64,
    /// Line-measure factor of the modal reduction: 1 on the strip, `r` on the annulus.
    pub measure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeparableGeometry {
    StripTorus { period: f64, height: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

impl SeparableGeometry {
    pub fn strip(period: f64, height: f64) -> Result<Self> {
        let g = SeparableGeometry::StripTorus { period, height };
        g.validate()?;
        Ok(g)
    }

    pub fn annulus(r_inner: f64, r_outer: f64) -> Result<Self> {
        let g = SeparableGeometry::Annulus { r_inner, r_outer };
        g.validate()?;
        Ok(g)
    }

    /// Unit strip torus `[0,1]×[0,1]`.
    pub fn unit_strip() -> Self {
        SeparableGeometry::StripTorus { period: 1.0, height: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        match *self {
            SeparableGeometry::StripTorus { period, height } => {
                positive("period", period)?;
                positive("height", height)
            }
            SeparableGeometry::Annulus { r_inner, r_outer } => {
                positive("r_inner", r_inner)?;
                positive("r_outer", r_outer)?;
                if r_inner >= r_outer {
                    return Err(Error::invalid("r_outer", format!("must exceed r_inner ({r_inner}), got {r_outer}")));
                }
                Ok(())
            }
        }
    }

    pub fn is_strip(&self) -> bool {
        matches!(self, SeparableGeometry::StripTorus { .. })
    }

    /// Wall-normal interval `(lower, upper)`.
    pub fn normal_interval(&self) -> (f64, f64) {
        match *self {
            SeparableGeometry::StripTorus { height, .. } => (0.0, height),
            SeparableGeometry::Annulus { r_inner, r_outer } => (r_inner, r_outer),
        }
    }

    /// Wall-to-wall distance.
    pub fn height(&self) -> f64 {
        let (a, b) = self.normal_interval();
        b - a
    }

    /// Range of the tangential parameter (`x` on the strip, `θ` on the annulus).
    pub fn tangential_period(&self) -> f64 {
        match *self {
            SeparableGeometry::StripTorus { period, .. } => period,
            SeparableGeometry::Annulus { .. } => 2.0 * PI,
        }
    }

    /// Wavenumber in the tangential parameter: mode `k` varies as `exp(i q x)`.
    pub fn mode_wavenumber(&self, k: i64) -> f64 {
        2.0 * PI * k as f64 / self.tangential_period()
    }

    /// Orientation sign `h` of the `(a, u)` frame relative to the Cartesian one.
    pub fn handedness(&self) -> f64 {
        if self.is_strip() {
            -1.0
        } else {
            1.0
        }
    }

    /// Weight of the area element per unit tangential parameter: 1 or `r`.
    pub fn measure(&self, y: f64) -> f64 {
        if self.is_strip() {
            1.0
        } else {
            y
        }
    }

    /// Metric term `c(y)`: 0 on the strip, `1/r` on the annulus.
    pub fn metric(&self, y: f64) -> f64 {
        if self.is_strip() {
            0.0
        } else {
            1.0 / y
        }
    }

    pub fn metric_dy(&self, y: f64) -> f64 {
        if self.is_strip() {
            0.0
        } else {
            -1.0 / (y * y)
        }
    }

    /// Multiplier of the unit-speed derivative along `u` for mode `k` at `y`:
    /// `i 2πk/period` on the strip, `i k/r` on the annulus.
    pub fn tangential(&self, y: f64, k: i64) -> C64 {
        match *self {
            SeparableGeometry::StripTorus { .. } => C64::new(0.0, self.mode_wavenumber(k)),
            SeparableGeometry::Annulus { .. } => C64::new(0.0, k as f64 / y),
        }
    }

    pub fn tangential_dy(&self, y: f64, k: i64) -> C64 {
        match *self {
            SeparableGeometry::StripTorus { .. } => C64::new(0.0, 0.0),
            SeparableGeometry::Annulus { .. } => C64::new(0.0, -(k as f64) / (y * y)),
        }
    }

    /// Parseval factor: the 2D L² norm squared equals this times the sum of the
    /// modal norms squared.
    pub fn parseval_factor(&self) -> f64 {
        self.tangential_period()
    }

    pub fn wall(&self, id: WallId) -> BoundaryComponent {
        let (y0, y1) = self.normal_interval();
        let (coordinate, orientation) = match id {
            WallId::Lower => (y0, -1.0),
            WallId::Upper => (y1, 1.0),
        };
        match *self {
            SeparableGeometry::StripTorus { period, .. } => BoundaryComponent {
                id,
                name: if id == WallId::Lower { "lower" } else { "upper" },
                coordinate,
                curvature: 0.0,
                orientation,
                circumference: period,
                measure: 1.0,
            },
            SeparableGeometry::Annulus { .. } => BoundaryComponent {
                id,
                name: if id == WallId::Lower { "inner" } else { "outer" },
                coordinate,
                curvature: orientation / coordinate,
                orientation,
                circumference: 2.0 * PI * coordinate,
                measure: coordinate,
            },
        }
    }

    pub fn walls(&self) -> [BoundaryComponent; 2] {
        [self.wall(WallId::Lower), self.wall(WallId::Upper)]
    }

    /// Look a wall up by name (`lower`/`upper` on the strip, `inner`/`outer` on
    /// the annulus; `lower`/`upper` are accepted for both).
    pub fn boundary(&self, name: &str) -> Result<BoundaryComponent> {
        let id = match (name, self.is_strip()) {
            ("lower", _) | ("inner", false) => WallId::Lower,
            ("upper", _) | ("outer", false) => WallId::Upper,
            _ => return Err(Error::UnknownBoundary(name.to_string())),
        };
        Ok(self.wall(id))
    }

    /// Signed curvature of the named wall.
    pub fn curvature(&self, name: &str) -> Result<f64> {
        Ok(self.boundary(name)?.curvature)
    }

    /// Symbol of the tangential derivative `∂_Γ` along `n⊥` on a wall: applying
    /// `∂_Γ` to the trace of mode `k` multiplies its coefficient by this value.
    pub fn tangential_symbol(&self, id: WallId, k: i64) -> C64 {
        let w = self.wall(id);
        self.tangential(w.coordinate, k) * (w.orientation * self.handedness())
    }

    /// Sign `s` such that `f·n⊥ = s f_u` on the wall.
    pub fn perp_sign(&self, id: WallId) -> f64 {
        self.wall(id).orientation * self.handedness()
    }

    /// Cartesian position of the point with tangential parameter `x` and
    /// wall-normal coordinate `y`.
    pub fn point(&self, x: f64, y: f64) -> [f64; 2] {
        if self.is_strip() {
            [x, y]
        } else {
            [y * x.cos(), y * x.sin()]
        }
    }

    /// Cartesian unit vectors `(e_a, e_u)` of the frame at tangential parameter `x`.
    pub fn frame(&self, x: f64) -> ([f64; 2], [f64; 2]) {
        if self.is_strip() {
            ([0.0, 1.0], [1.0, 0.0])
        } else {
            let (s, c) = x.sin_cos();
            ([c, s], [-s, c])
        }
    }

    /// Local boundary coordinates of a point relative to a wall.
    pub fn local_coords(&self, id: WallId, x: f64, y: f64, eps: f64) -> LocalCoords {
        let w = self.wall(id);
        let s = (y - w.coordinate).abs();
        let along = if self.is_strip() { x } else { w.coordinate * x };
        LocalCoords::new(self.perp_sign(id) * along, s, eps)
    }

    /// Default cutoff: plateau `0.1·height`, support `0.2·height`.
    pub fn default_cutoff(&self) -> CutoffSpec {
        let s1 = 0.1 * self.height();
        CutoffSpec { s1, s0: 2.0 * s1 }
    }

    /// Check a cutoff against this geometry: the two wall neighbourhoods must be
    /// disjoint and stay within half the radius of curvature.
    pub fn check_cutoff(&self, spec: &CutoffSpec) -> Result<()> {
        spec.validate()?;
        if spec.s0 >= 0.5 * self.height() {
            return Err(Error::invalid("s0", format!("must be below half the height ({}), got {}", 0.5 * self.height(), spec.s0)));
        }
        let kmax = self.walls().iter().map(|w| w.curvature.abs()).fold(0.0, f64::max);
        if kmax > 0.0 && spec.s0 >= 0.5 / kmax {
            return Err(Error::invalid("s0", format!("must be below half the smallest radius of curvature ({}), got {}", 0.5 / kmax, spec.s0)));
        }
        Ok(())
    }
}

/// Arclength `t` along a wall (in the direction of `n⊥`), distance `s` into the
/// domain and stretched distance `S = s/ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalCoords {
    pub t: f64,
    pub s: f64,
    pub stretched: f64,
}

impl LocalCoords {
    pub fn new(t: f64, s: f64, eps: f64) -> Self {
        LocalCoords { t, s, stretched: s / eps }
    }
}

/// Smooth monotone cutoff: 1 for `s ≤ s1`, 0 for `s ≥ s0`.
///
/// The transition is `g(1-u) / (g(1-u) + g(u))` with `g(t) = exp(-1/t)` and
/// `u = (s - s1)/(s0 - s1)`; every derivative vanishes at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub s1: f64,
    pub s0: f64,
}

fn bump_tail(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl CutoffSpec {
    pub fn new(s1: f64, s0: f64) -> Result<Self> {
        let c = CutoffSpec { s1, s0 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s1.is_finite() && self.s1 > 0.0) {
            return Err(Error::invalid("s1", format!("must be > 0, got {}", self.s1)));
        }
        if !(self.s0.is_finite() && self.s0 > self.s1) {
            return Err(Error::invalid("s0", format!("must exceed s1 ({}), got {}", self.s1, self.s0)));
        }
        Ok(())
    }

    fn normalized(&self, s: f64) -> f64 {
        (s - self.s1) / (self.s0 - self.s1)
    }

    /// Value of the cutoff at distance `s` from the wall.
    pub fn eval(&self, s: f64) -> f64 {
        let u = self.normalized(s);
        if u <= 0.0 {
            return 1.0;
        }
        if u >= 1.0 {
            return 0.0;
        }
        let a = bump_tail(1.0 - u);
        let b = bump_tail(u);
        a / (a + b)
    }

    /// Derivative of the cutoff with respect to `s`.
    pub fn derivative(&self, s: f64) -> f64 {
        let u = self.normalized(s);
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let a = bump_tail(1.0 - u);
        let b = bump_tail(u);
        let sum = a + b;
        let du = -(a / sum) * (b / sum) * (1.0 / ((1.0 - u) * (1.0 - u)) + 1.0 / (u * u));
        du / (self.s0 - self.s1)
    }

    /// Second derivative of the cutoff with respect to `s`.
    pub fn second_derivative(&self, s: f64) -> f64 {
        let u = self.normalized(s);
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let a = bump_tail(1.0 - u);
        let b = bump_tail(u);
        let f = a / (a + b);
        let (v, w) = (u, 1.0 - u);
        let dl = 1.0 / (v * v) + 1.0 / (w * w);
        let ddl = -2.0 / (v * v * v) + 2.0 / (w * w * w);
        let df = -f * (1.0 - f) * dl;
        let ddf = -df * (1.0 - 2.0 * f) * dl - f * (1.0 - f) * ddl;
        let l = self.s0 - self.s1;
        ddf / (l * l)
    }
}

/// Free-function form of [`CutoffSpec::eval`].
pub fn cutoff_eval(spec: &CutoffSpec, s: f64) -> f64 {
    spec.eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn curvatures() {
        let s = SeparableGeometry::unit_strip();
        assert_eq!(s.curvature("lower").unwrap(), 0.0);
        assert_eq!(s.curvature("upper").unwrap(), 0.0);
        assert!(s.curvature("outer").is_err());
        let a = SeparableGeometry::annulus(0.25, 0.5).unwrap();
        assert_relative_eq!(a.curvature("outer").unwrap(), 2.0);
        assert_relative_eq!(a.curvature("inner").unwrap(), -4.0);
        assert!(matches!(a.curvature("left"), Err(Error::UnknownBoundary(_))));
    }

    #[test]
    fn symbols() {
        let s = SeparableGeometry::unit_strip();
        assert_eq!(s.tangential_symbol(WallId::Lower, 0), C64::new(0.0, 0.0));
        assert_relative_eq!(s.tangential_symbol(WallId::Lower, 1).im, 2.0 * PI);
        assert_relative_eq!(s.tangential_symbol(WallId::Upper, 1).im, -2.0 * PI);
        let a = SeparableGeometry::annulus(0.25, 0.5).unwrap();
        assert_relative_eq!(a.tangential_symbol(WallId::Upper, 3).im, 6.0);
        assert_relative_eq!(a.tangential_symbol(WallId::Lower, 3).im, -12.0);
    }

    #[test]
    fn perp_is_normal_rotated() {
        for g in [SeparableGeometry::unit_strip(), SeparableGeometry::annulus(0.3, 1.1).unwrap()] {
            for id in WallId::BOTH {
                let w = g.wall(id);
                let x = 0.7;
                let (ea, eu) = g.frame(x);
                let n = [w.orientation * ea[0], w.orientation * ea[1]];
                let rot = [-n[1], n[0]];
                let s = g.perp_sign(id);
                assert_relative_eq!(rot[0], s * eu[0], epsilon = 1e-15);
                assert_relative_eq!(rot[1], s * eu[1], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn invalid_geometries() {
        assert!(SeparableGeometry::strip(0.0, 1.0).is_err());
        assert!(SeparableGeometry::annulus(0.5, 0.5).is_err());
        let a = SeparableGeometry::annulus(0.25, 1.0).unwrap();
        assert!(a.check_cutoff(&CutoffSpec::new(0.1, 0.2).unwrap()).is_err());
        assert!(a.check_cutoff(&CutoffSpec::new(0.05, 0.1).unwrap()).is_ok());
        assert!(CutoffSpec::new(0.2, 0.1).is_err());
    }

    #[test]
    fn cutoff_examples() {
        let c = SeparableGeometry::unit_strip().default_cutoff();
        assert_eq!(cutoff_eval(&c, c.s1 / 2.0), 1.0);
        assert_eq!(cutoff_eval(&c, 2.0 * c.s0), 0.0);
        assert_relative_eq!(c.eval(0.5 * (c.s0 + c.s1)), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cutoff_derivatives_vanish_at_ends() {
        let c = CutoffSpec::new(0.1, 0.2).unwrap();
        let h = 1e-4;
        for &s in &[c.s1, c.s0] {
            let d1 = (c.eval(s + h) - c.eval(s - h)) / (2.0 * h);
            let d2 = (c.eval(s + h) - 2.0 * c.eval(s) + c.eval(s - h)) / (h * h);
            // Scale: plateau value 1 over the transition width.
            let w = c.s0 - c.s1;
            assert!(d1.abs() * w < 1e-6, "first derivative {d1} at {s}");
            assert!(d2.abs() * w * w < 1e-6, "second derivative {d2} at {s}");
            assert!(c.derivative(s).abs() < 1e-12);
        }
    }

    #[test]
    fn cutoff_derivative_matches_difference_quotient() {
        let c = CutoffSpec::new(0.1, 0.25).unwrap();
        for i in 1..30 {
            let s = 0.1 + 0.15 * i as f64 / 30.0;
            let h = 1e-6;
            let fd = (c.eval(s + h) - c.eval(s - h)) / (2.0 * h);
            assert_relative_eq!(c.derivative(s), fd, epsilon = 1e-6, max_relative = 1e-6);
            let fd2 = (c.derivative(s + h) - c.derivative(s - h)) / (2.0 * h);
            assert_relative_eq!(c.second_derivative(s), fd2, epsilon = 1e-4, max_relative = 1e-5);
        }
    }

    #[test]
    fn local_coordinates() {
        let g = SeparableGeometry::unit_strip();
        let lc = g.local_coords(WallId::Upper, 0.25, 0.9, 0.01);
        assert_relative_eq!(lc.s, 0.1, epsilon = 1e-15);
        assert_relative_eq!(lc.stretched, 10.0, epsilon = 1e-12);
        assert_relative_eq!(lc.t, -0.25);
    }

    proptest! {
        #[test]
        fn symbol_is_odd_and_imaginary(k in -200i64..200, r0 in 0.1f64..1.0, gap in 0.05f64..2.0, period in 0.1f64..5.0) {
            for g in [SeparableGeometry::strip(period, gap).unwrap(), SeparableGeometry::annulus(r0, r0 + gap).unwrap()] {
                for id in WallId::BOTH {
                    let a = g.tangential_symbol(id, k);
                    let b = g.tangential_symbol(id, -k);
                    prop_assert_eq!(a.re, 0.0);
                    prop_assert!((a + b).norm() <= 1e-12 * (1.0 + a.norm()));
                    prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
                }
            }
        }

        #[test]
        fn cutoff_monotone(sa in 0.0f64..0.5, sb in 0.0f64..0.5) {
            let c = CutoffSpec::new(0.1, 0.2).unwrap();
            let (lo, hi) = if sa < sb { (sa, sb) } else { (sb, sa) };
            prop_assert!(c.eval(lo) >= c.eval(hi));
            prop_assert!((0.0..=1.0).contains(&c.eval(lo)));
        }

        #[test]
        fn curvature_constant_along_wall(r0 in 0.1f64..1.0, gap in 0.05f64..2.0) {
            let g = SeparableGeometry::annulus(r0, r0 + gap).unwrap();
            // Curvature is a property of the component, independent of position.
            for id in WallId::BOTH {
                let w = g.wall(id);
                prop_assert!((w.curvature.abs() * w.coordinate - 1.0).abs() < 1e-14);
            }
        }
    }
}
