//! Brute-force reference for the per-mode solvers: the strong form of each
//! model is discretized with second-order finite differences on uniform grids,
//! solved by dense Gaussian elimination, and extrapolated with one Richardson
//! step. Coefficients and source data are recomputed here from the profile
//! jets in polar or Cartesian components.

#![allow(dead_code)]

use std::sync::Arc;

use viscoacoustic::exact::solve_exact_mode;
use viscoacoustic::pressure::solve_pressure_model;
use viscoacoustic::sources::{FnProfile, ModalSource, ProfileJet};
use viscoacoustic::velocity::solve_velocity_model;
use viscoacoustic::{Discretization, DiscretizationSpec, MaterialParams, ModelOrder, SeparableGeometry, C64};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);
pub const TOL: f64 = 1e-5;
const N_COARSE: usize = 320;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn params() -> MaterialParams {
    MaterialParams::new(3.0, 1.0, 1.2, 0.05, 0.02).unwrap()
}

pub fn strip() -> SeparableGeometry {
    SeparableGeometry::strip(4.0, 1.0).unwrap()
}

pub fn annulus() -> SeparableGeometry {
    SeparableGeometry::annulus(1.0, 2.0).unwrap()
}

type Jet = fn(f64) -> [C64; 3];

#[derive(Clone, Copy)]
struct Case {
    k: i64,
    a: Jet,
    u: Jet,
}

fn cases() -> [Case; 3] {
    [
        Case {
            k: 1,
            a: |y| [c((2.0 * y).sin() + 0.3), c(2.0 * (2.0 * y).cos()), c(-4.0 * (2.0 * y).sin())],
            u: |y| {
                let s = C64::new(1.0, 0.5);
                [s * y.cos(), -s * y.sin(), -s * y.cos()]
            },
        },
        Case {
            k: 2,
            a: |y| [c(y * y.exp()), c((1.0 + y) * y.exp()), c((2.0 + y) * y.exp())],
            u: |y| [I * y * y, I * 2.0 * y, I * 2.0],
        },
        Case {
            k: 0,
            a: |y| [c((3.0 * y).cos()), c(-3.0 * (3.0 * y).sin()), c(-9.0 * (3.0 * y).cos())],
            u: |y| [c(1.0 + y), c(1.0), ZERO],
        },
    ]
}

/// Source jets and the derived quantities needed by the strong forms.
struct Local {
    f: [C64; 2],
    div_f: C64,
    cc: [C64; 2],
    /// Wall-normal coordinate, tangential symbol ∂_x or r⁻¹∂_θ of the mode.
    t: C64,
    /// `1/r` on the annulus, 0 on the strip.
    m: f64,
}

fn wavenumber(geom: &SeparableGeometry, k: i64) -> f64 {
    match *geom {
        SeparableGeometry::StripTorus { period, .. } => 2.0 * std::f64::consts::PI * k as f64 / period,
        SeparableGeometry::Annulus { .. } => k as f64,
    }
}

fn local(geom: &SeparableGeometry, case: &Case, y: f64) -> Local {
    let a = (case.a)(y);
    let u = (case.u)(y);
    let q = wavenumber(geom, case.k);
    if geom.is_strip() {
        // Cartesian: a is the y component, u the x component, ∂_x = iq.
        let div_f = a[1] + I * q * u[0];
        let ddiv = a[2] + I * q * u[1];
        let lap_a = a[2] - q * q * a[0];
        let lap_u = u[2] - q * q * u[0];
        Local { f: [a[0], u[0]], div_f, cc: [ddiv - lap_a, I * q * div_f - lap_u], t: I * q, m: 0.0 }
    } else {
        // Polar: a radial, u angular, ∂_θ = ik.
        let r = y;
        let k = q;
        let div_f = a[1] + a[0] / r + I * k * u[0] / r;
        let ddiv = a[2] + a[1] / r - a[0] / (r * r) + I * k * u[1] / r - I * k * u[0] / (r * r);
        let lap = |s: [C64; 3]| s[2] + s[1] / r - k * k * s[0] / (r * r);
        let vlap_r = lap(a) - a[0] / (r * r) - 2.0 * I * k * u[0] / (r * r);
        let vlap_t = lap(u) - u[0] / (r * r) + 2.0 * I * k * a[0] / (r * r);
        Local { f: [a[0], u[0]], div_f, cc: [ddiv - vlap_r, I * k * div_f / r - vlap_t], t: I * k / r, m: 1.0 / r }
    }
}

/// One equation: `Σ coef[field][d] ∂^d field = rhs` at a node.
struct Row {
    coef: [[C64; 3]; 2],
    rhs: C64,
}

#[derive(Clone, Copy, PartialEq)]
enum Node {
    Lower,
    Interior,
    Upper,
}

fn dense_solve(mut a: Vec<Vec<C64>>, mut b: Vec<C64>) -> Vec<C64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        assert!(a[piv][col].norm() > 1e-300, "singular oracle system");
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == ZERO {
                continue;
            }
            for j in col..n {
                let v = a[col][j];
                a[row][j] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![ZERO; n];
    for i in (0..n).rev() {
        let s: C64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Finite-difference solve of `nf` coupled fields on `n` uniform intervals.
/// `rows(node, y, eq)` gives equation `eq` at a node; boundary rows may use
/// first derivatives only, approximated one-sided to second order.
fn fd_solve(nf: usize, (y0, y1): (f64, f64), n: usize, rows: &dyn Fn(Node, f64, usize) -> Row) -> Vec<Vec<C64>> {
    let h = (y1 - y0) / n as f64;
    let dim = nf * (n + 1);
    let mut mat = vec![vec![ZERO; dim]; dim];
    let mut rhs = vec![ZERO; dim];
    for i in 0..=n {
        let node = if i == 0 {
            Node::Lower
        } else if i == n {
            Node::Upper
        } else {
            Node::Interior
        };
        let y = y0 + i as f64 * h;
        for eq in 0..nf {
            let r = rows(node, y, eq);
            let row = eq * (n + 1) + i;
            rhs[row] = r.rhs;
            for field in 0..nf {
                let stencils: Vec<(isize, f64, usize)> = match node {
                    Node::Interior => vec![(0, 1.0, 0), (-1, -0.5 / h, 1), (1, 0.5 / h, 1), (-1, 1.0 / (h * h), 2), (0, -2.0 / (h * h), 2), (1, 1.0 / (h * h), 2)],
                    Node::Lower => vec![(0, 1.0, 0), (0, -1.5 / h, 1), (1, 2.0 / h, 1), (2, -0.5 / h, 1)],
                    Node::Upper => vec![(0, 1.0, 0), (0, 1.5 / h, 1), (-1, -2.0 / h, 1), (-2, 0.5 / h, 1)],
                };
                if node != Node::Interior {
                    assert_eq!(r.coef[field][2], ZERO, "second derivative in a boundary row");
                }
                for (off, w, d) in stencils {
                    let j = (i as isize + off) as usize;
                    mat[row][field * (n + 1) + j] += r.coef[field][d] * w;
                }
            }
        }
    }
    let x = dense_solve(mat, rhs);
    (0..nf).map(|f| x[f * (n + 1)..(f + 1) * (n + 1)].to_vec()).collect()
}

/// Richardson-extrapolated nodal values on the coarse grid.
fn reference(nf: usize, interval: (f64, f64), rows: &dyn Fn(Node, f64, usize) -> Row) -> (Vec<f64>, Vec<Vec<C64>>) {
    let coarse = fd_solve(nf, interval, N_COARSE, rows);
    let fine = fd_solve(nf, interval, 2 * N_COARSE, rows);
    let h = (interval.1 - interval.0) / N_COARSE as f64;
    let ys = (0..=N_COARSE).map(|i| interval.0 + i as f64 * h).collect();
    let vals = (0..nf).map(|f| (0..=N_COARSE).map(|i| (4.0 * fine[f][2 * i] - coarse[f][i]) / 3.0).collect()).collect();
    (ys, vals)
}

fn rel_max_diff(reference: &[C64], computed: &[C64]) -> f64 {
    let scale = reference.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = reference.iter().zip(computed).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    diff / scale
}

fn setup(geom: &SeparableGeometry, p: &MaterialParams, case: &Case) -> (Discretization, ModalSource) {
    let disc = Discretization::for_params(geom, p, &DiscretizationSpec::default()).unwrap();
    let (fa, fu) = (case.a, case.u);
    let profile = FnProfile(move |y| ProfileJet { a: fa(y), u: fu(y) });
    let ms = ModalSource::manufactured(geom, &disc.grid, case.k, Arc::new(profile)).unwrap();
    (disc, ms)
}

fn zero_row() -> [[C64; 3]; 2] {
    [[ZERO; 3]; 2]
}

/// `σ_n` (outward sign), `|∂_Γ|²` symbol, signed curvature and `T f_u` at a wall.
fn wall_data(geom: &SeparableGeometry, case: &Case, node: Node, y: f64) -> (f64, f64, f64) {
    let sigma = if node == Node::Lower { -1.0 } else { 1.0 };
    let kappa = if geom.is_strip() { 0.0 } else { sigma / y };
    let t2 = local(geom, case, y).t.norm_sqr();
    (sigma, t2, kappa)
}

fn beta(p: &MaterialParams, order: ModelOrder, kappa: f64) -> C64 {
    let b1 = C64::new(1.0, 1.0) * (p.eta / (2.0 * p.omega * p.rho0)).sqrt();
    match order {
        ModelOrder::Zero => ZERO,
        ModelOrder::One => b1,
        ModelOrder::Two => b1 + I * p.eta * kappa / (2.0 * p.omega * p.rho0),
    }
}

fn alpha(p: &MaterialParams, order: ModelOrder) -> C64 {
    if order == ModelOrder::Two {
        1.0 - I * p.omega * (p.eta + p.eta_prime) / (p.rho0 * p.c * p.c)
    } else {
        c(1.0)
    }
}

/// Relative gaps `(a, u)` of the viscous solver for each manufactured case.
pub fn exact_gaps(geom: SeparableGeometry) -> Vec<(i64, f64)> {
    let mut out = Vec::new();
    let p = params();
    let g = p.eta_prime + I * p.rho0 * p.c * p.c / p.omega;
    for case in cases() {
        let rows = |node: Node, y: f64, eq: usize| -> Row {
            let mut coef = zero_row();
            if node != Node::Interior {
                coef[eq][0] = c(1.0);
                return Row { coef, rhs: ZERO };
            }
            let l = local(&geom, &case, y);
            let q = wavenumber(&geom, case.k);
            // -iωρ0 v - η Δv - G ∇div v = f
            let mass = -I * p.omega * p.rho0;
            if geom.is_strip() {
                if eq == 0 {
                    coef[0] = [mass + p.eta * q * q, ZERO, c(-p.eta) - g];
                    coef[1] = [ZERO, -g * I * q, ZERO];
                } else {
                    coef[0] = [ZERO, -g * I * q, ZERO];
                    coef[1] = [mass + p.eta * q * q - g * (I * q) * (I * q), ZERO, c(-p.eta)];
                }
            } else {
                let r = y;
                let k = q;
                if eq == 0 {
                    // -η(Δa - a/r² - 2ik u/r²) - G(a'' + a'/r - a/r² + ik u'/r - ik u/r²)
                    coef[0] = [
                        mass - p.eta * (-k * k / (r * r) - 1.0 / (r * r)) + g / (r * r),
                        c(-p.eta / r) - g / r,
                        c(-p.eta) - g,
                    ];
                    coef[1] = [2.0 * I * k * p.eta / (r * r) + g * I * k / (r * r), -g * I * k / r, ZERO];
                } else {
                    // -η(Δu - u/r² + 2ik a/r²) - G (ik/r)(a' + a/r + ik u/r)
                    coef[0] = [-2.0 * I * k * p.eta / (r * r) - g * I * k / (r * r), -g * I * k / r, ZERO];
                    coef[1] = [
                        mass - p.eta * (-k * k / (r * r) - 1.0 / (r * r)) + g * k * k / (r * r),
                        c(-p.eta / r),
                        c(-p.eta),
                    ];
                }
            }
            Row { coef, rhs: l.f[eq] }
        };
        let (ys, refv) = reference(2, geom.normal_interval(), &rows);
        let (disc, ms) = setup(&geom, &p, &case);
        let sol = solve_exact_mode(&p, &geom, &ms, &disc).unwrap();
        let a: Vec<C64> = ys.iter().map(|&y| sol.velocity(y).a).collect();
        let u: Vec<C64> = ys.iter().map(|&y| sol.velocity(y).u).collect();
        let (ea, eu) = (rel_max_diff(&refv[0], &a), rel_max_diff(&refv[1], &u));
        out.push((case.k, ea.max(eu)));
    }
    out
}

/// Relative pressure gaps of one pressure model for each manufactured case.
pub fn pressure_gaps(geom: SeparableGeometry, order: ModelOrder) -> Vec<(i64, f64)> {
    let mut out = Vec::new();
    let p = params();
    let al = alpha(&p, order);
    let k2 = p.omega * p.omega / (p.c * p.c);
    let two = if order == ModelOrder::Two { 1.0 } else { 0.0 };
    for case in cases() {
        let rows = |node: Node, y: f64, _eq: usize| -> Row {
            let l = local(&geom, &case, y);
            let mut coef = zero_row();
            if node == Node::Interior {
                // α Δp + k² p = div f
                coef[0] = [al * l.t * l.t + k2, al * l.m, al];
                return Row { coef, rhs: l.div_f };
            }
            // α ∂_n p - β|∂_Γ|² p = f·n - β ∂_Γ(f·n⊥) - (iη/ωρ0) (curl curl f)·n
            let (sigma, t2, kappa) = wall_data(&geom, &case, node, y);
            let b = beta(&p, order, kappa);
            coef[0] = [-b * t2, al * sigma, ZERO];
            let rhs = sigma * l.f[0] - b * l.t * l.f[1] - two * I * p.eta / (p.omega * p.rho0) * sigma * l.cc[0];
            Row { coef, rhs }
        };
        let (ys, refv) = reference(1, geom.normal_interval(), &rows);
        let (disc, ms) = setup(&geom, &p, &case);
        let sol = solve_pressure_model(&p, &geom, order, &ms, &disc).unwrap();
        let pv: Vec<C64> = ys.iter().map(|&y| sol.pressure(y)).collect();
        let e = rel_max_diff(&refv[0], &pv);
        out.push((case.k, e));
    }
    out
}

/// Relative velocity gaps of one velocity model for each manufactured case.
pub fn velocity_gaps(geom: SeparableGeometry, order: ModelOrder) -> Vec<(i64, f64)> {
    let mut out = Vec::new();
    let p = params();
    let al = alpha(&p, order);
    let k2 = p.omega * p.omega / (p.c * p.c);
    let two = if order == ModelOrder::Two { 1.0 } else { 0.0 };
    for case in cases() {
        let kk = wavenumber(&geom, case.k);
        let rows = |node: Node, y: f64, eq: usize| -> Row {
            let l = local(&geom, &case, y);
            // g = (iω/ρ0c²) f + η/(ρ0²c²) curl curl f (order 2)
            let gv = |i: usize| I * p.omega / (p.rho0 * p.c * p.c) * l.f[i] + two * p.eta / (p.rho0 * p.rho0 * p.c * p.c) * l.cc[i];
            let mut coef = zero_row();
            // div v = a' + m a + t u
            let div = [[c(l.m), c(1.0), ZERO], [l.t, ZERO, ZERO]];
            if eq == 0 && node != Node::Interior {
                // σ_n a + β_v |∂_Γ|² div v = (i/ρ0ω) β ∂_Γ(f·n⊥)
                let (sigma, t2, kappa) = wall_data(&geom, &case, node, y);
                let b = beta(&p, order, kappa);
                let bv = b * p.c * p.c / (p.omega * p.omega);
                for f in 0..2 {
                    for d in 0..3 {
                        coef[f][d] = bv * t2 * div[f][d];
                    }
                }
                coef[0][0] += sigma;
                return Row { coef, rhs: I / (p.rho0 * p.omega) * b * l.t * l.f[1] };
            }
            if eq == 0 {
                // α (div v)' + k² a = g_a
                if geom.is_strip() {
                    coef[0] = [c(k2), ZERO, al];
                    coef[1] = [ZERO, al * l.t, ZERO];
                } else {
                    let r = y;
                    coef[0] = [k2 - al / (r * r), al / r, al];
                    coef[1] = [-al * I * kk / (r * r), al * I * kk / r, ZERO];
                }
                Row { coef, rhs: gv(0) }
            } else {
                // α T div v + k² u = g_u
                for f in 0..2 {
                    for d in 0..3 {
                        coef[f][d] = al * l.t * div[f][d];
                    }
                }
                coef[1][0] += k2;
                Row { coef, rhs: gv(1) }
            }
        };
        let (ys, refv) = reference(2, geom.normal_interval(), &rows);
        let (disc, ms) = setup(&geom, &p, &case);
        let sol = solve_velocity_model(&p, &geom, order, &ms, &disc).unwrap();
        let a: Vec<C64> = ys.iter().map(|&y| sol.velocity(y).a).collect();
        let u: Vec<C64> = ys.iter().map(|&y| sol.velocity(y).u).collect();
        let (ea, eu) = (rel_max_diff(&refv[0], &a), rel_max_diff(&refv[1], &u));
        assert!(ea < TOL && eu < TOL, "velocity order {order}, k = {}: rel diff a {ea:.2e}, u {eu:.2e}", case.k);
        out.push((case.k, ea.max(eu)));
    }
    out
}
