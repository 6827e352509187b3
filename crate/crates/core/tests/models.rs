//! Structural properties of the modal solvers: wall conditions, multipliers,
//! agreement of the pressure and velocity routes, degenerate modes, energy
//! balance and the small-viscosity limit.

use std::sync::Arc;

use proptest::prelude::*;
use viscoacoustic::exact::solve_exact_mode;
use viscoacoustic::pressure::{build_pressure_problem, solve_pressure_model, solve_pressure_mode};
use viscoacoustic::sources::{FnProfile, ModalSource, ProfileJet};
use viscoacoustic::velocity::solve_velocity_model;
use viscoacoustic::{Discretization, DiscretizationSpec, MaterialParams, ModelOrder, SeparableGeometry, WallId, C64};

const I: C64 = C64::new(0.0, 1.0);

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn params() -> MaterialParams {
    MaterialParams::new(3.0, 1.0, 1.2, 0.01, 0.005).unwrap()
}

fn geometries() -> [SeparableGeometry; 2] {
    [SeparableGeometry::strip(4.0, 1.0).unwrap(), SeparableGeometry::annulus(1.0, 2.0).unwrap()]
}

/// Smooth single-mode profile; `scale = 0` gives the zero source.
fn profile(scale: f64) -> FnProfile<impl Fn(f64) -> ProfileJet + Send + Sync> {
    FnProfile(move |y: f64| {
        let s = C64::new(scale, 0.3 * scale);
        ProfileJet {
            a: [s * (2.0 * y).sin(), s * 2.0 * (2.0 * y).cos(), -s * 4.0 * (2.0 * y).sin()],
            u: [c(scale) * y.exp(), c(scale) * y.exp(), c(scale) * y.exp()],
        }
    })
}

fn setup(geom: &SeparableGeometry, p: &MaterialParams, k: i64, scale: f64) -> (Discretization, ModalSource) {
    let disc = Discretization::for_params(geom, p, &DiscretizationSpec::default()).unwrap();
    let ms = ModalSource::manufactured(geom, &disc.grid, k, Arc::new(profile(scale))).unwrap();
    (disc, ms)
}

fn interior_points(geom: &SeparableGeometry) -> Vec<f64> {
    let (a, b) = geom.normal_interval();
    (1..40).map(|i| a + (b - a) * (i as f64 + 0.37) / 41.0).collect()
}

#[test]
fn pressure_wall_condition_holds() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 2, 1.0);
        for order in ModelOrder::ALL {
            let prob = build_pressure_problem(&p, &geom, order, &ms);
            let sol = solve_pressure_mode(&prob, &p, &geom, &disc).unwrap();
            for wall in WallId::BOTH {
                let wd = prob.walls[wall.index()];
                let scale = 1.0 + prob.g_normal[wall.index()].norm() + (wd.tau * wd.h).norm() + wd.e.norm();
                let r = sol.wall_residual(&prob, wall).norm() / scale;
                assert!(r < 1e-8, "order {order}, {wall:?}: residual {r:.2e}");
            }
        }
    }
}

#[test]
fn velocity_multiplier_is_wall_divergence() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 1, 1.0);
        for order in [ModelOrder::One, ModelOrder::Two] {
            let sol = solve_velocity_model(&p, &geom, order, &ms, &disc).unwrap();
            let alpha = p.alpha(order);
            for wall in WallId::BOTH {
                let y = geom.wall(wall).coordinate;
                let want = alpha * sol.divergence(y).0;
                let got = sol.lambda[wall.index()];
                assert!((got - want).norm() <= 1e-7 * want.norm().max(1.0), "order {order}, {wall:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn pressure_and_velocity_routes_agree() {
    let p = params();
    for geom in geometries() {
        for k in [0, 1, 3] {
            let (disc, ms) = setup(&geom, &p, k, 1.0);
            for order in ModelOrder::ALL {
                let ps = solve_pressure_model(&p, &geom, order, &ms, &disc).unwrap();
                let vs = solve_velocity_model(&p, &geom, order, &ms, &disc).unwrap();
                let pts = interior_points(&geom);
                let scale = pts.iter().map(|&y| ps.pressure(y).norm()).fold(0.0, f64::max);
                for &y in &pts {
                    let d = (ps.pressure(y) - vs.pressure(y)).norm() / scale;
                    assert!(d < 1e-8, "order {order}, k = {k}, y = {y}: relative gap {d:.2e}");
                }
            }
        }
    }
}

#[test]
fn mode_zero_order_one_reduces_to_order_zero() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 0, 1.0);
        let p0 = solve_pressure_model(&p, &geom, ModelOrder::Zero, &ms, &disc).unwrap();
        let p1 = solve_pressure_model(&p, &geom, ModelOrder::One, &ms, &disc).unwrap();
        let v0 = solve_velocity_model(&p, &geom, ModelOrder::Zero, &ms, &disc).unwrap();
        let v1 = solve_velocity_model(&p, &geom, ModelOrder::One, &ms, &disc).unwrap();
        for y in interior_points(&geom) {
            assert!((p0.pressure(y) - p1.pressure(y)).norm() <= 1e-12 * p0.pressure(y).norm().max(1.0));
            assert!((v0.velocity(y) - v1.velocity(y)).norm() <= 1e-12 * v0.velocity(y).norm().max(1.0));
        }
    }
}

#[test]
fn zero_source_gives_zero_fields() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 1, 0.0);
        let ex = solve_exact_mode(&p, &geom, &ms, &disc).unwrap();
        assert!(ex.coeffs.iter().all(|z| *z == C64::new(0.0, 0.0)));
        for order in ModelOrder::ALL {
            let ps = solve_pressure_model(&p, &geom, order, &ms, &disc).unwrap();
            let vs = solve_velocity_model(&p, &geom, order, &ms, &disc).unwrap();
            assert!(ps.coeffs.iter().all(|z| z.norm() == 0.0));
            assert!(vs.coeffs.iter().all(|z| z.norm() == 0.0));
        }
    }
}

#[test]
fn exact_momentum_equation_holds_inside() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 2, 1.0);
        let sol = solve_exact_mode(&p, &geom, &ms, &disc).unwrap();
        for y in interior_points(&geom) {
            let (f, _) = ms.eval(y);
            let r = sol.momentum_residual(y, f).norm();
            assert!(r < 1e-6 * f.norm().max(1.0), "y = {y}: residual {r:.2e}");
        }
    }
}

/// `Re ∫ f·v̄ dμ` against the viscous dissipation `η‖curl v‖² + (η+η′)‖div v‖²`.
fn power_balance(p: &MaterialParams, geom: &SeparableGeometry, k: i64) -> (f64, f64) {
    let (disc, ms) = setup(geom, p, k, 1.0);
    let sol = solve_exact_mode(p, geom, &ms, &disc).unwrap();
    let (mut power, mut dissipation) = (0.0, 0.0);
    for ((&y, &w), f) in disc.grid.points().iter().zip(disc.grid.weights()).zip(&ms.f) {
        let v = sol.velocity(y);
        let m = geom.measure(y) * w;
        power += m * (f.a * v.a.conj() + f.u * v.u.conj()).re;
        dissipation += m * (p.eta * sol.curl(y).norm_sqr() + (p.eta + p.eta_prime) * sol.divergence(y).0.norm_sqr());
    }
    (power, dissipation)
}

#[test]
fn exact_power_equals_dissipation() {
    let p = params();
    for geom in geometries() {
        for k in [0, 1, 2] {
            let (power, dissipation) = power_balance(&p, &geom, k);
            assert!(dissipation > 0.0);
            assert!((power - dissipation).abs() <= 1e-8 * dissipation, "k = {k}: {power} vs {dissipation}");
        }
    }
}

#[test]
fn wall_form_is_dissipative() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 1, 1.0);
        for order in [ModelOrder::One, ModelOrder::Two] {
            let prob = build_pressure_problem(&p, &geom, order, &ms);
            let sol = solve_pressure_mode(&prob, &p, &geom, &disc).unwrap();
            assert!(sol.boundary_form(&prob).im < 0.0, "order {order}");
        }
    }
}

#[test]
fn velocity_curl_is_independent_of_low_orders() {
    let p = params();
    for geom in geometries() {
        let (disc, ms) = setup(&geom, &p, 1, 1.0);
        let curl = |order| {
            let s = solve_velocity_model(&p, &geom, order, &ms, &disc).unwrap();
            move |y: f64| {
                let (a, u) = s.velocity_jet(y);
                u[1] + u[0] * geom.metric(y) - geom.tangential(y, 1) * a[0]
            }
        };
        let (c0, c1) = (curl(ModelOrder::Zero), curl(ModelOrder::One));
        for y in interior_points(&geom) {
            let (x0, x1) = (c0(y), c1(y));
            assert!((x0 - x1).norm() <= 1e-6 * x0.norm().max(1e-3), "y = {y}: {x0} vs {x1}");
        }
    }
}

/// Largest pressure gap between two orders at interior points.
fn order_gap(p: &MaterialParams, lo: ModelOrder, hi: ModelOrder) -> f64 {
    let geom = SeparableGeometry::strip(4.0, 1.0).unwrap();
    let (disc, ms) = setup(&geom, p, 1, 1.0);
    let a = solve_pressure_model(p, &geom, lo, &ms, &disc).unwrap();
    let b = solve_pressure_model(p, &geom, hi, &ms, &disc).unwrap();
    interior_points(&geom).iter().map(|&y| (a.pressure(y) - b.pressure(y)).norm()).fold(0.0, f64::max)
}

#[test]
fn impedance_corrections_vanish_at_expected_rates() {
    let at = |eta: f64| MaterialParams::new(3.0, 1.0, 1.2, eta, 0.5 * eta).unwrap();
    let (big, small) = (at(1e-4), at(1e-6));
    // Order 1 departs from order 0 by O(√η), order 2 from order 1 by O(η).
    let r1 = order_gap(&big, ModelOrder::Zero, ModelOrder::One) / order_gap(&small, ModelOrder::Zero, ModelOrder::One);
    let r2 = order_gap(&big, ModelOrder::One, ModelOrder::Two) / order_gap(&small, ModelOrder::One, ModelOrder::Two);
    assert!((r1 / 10.0 - 1.0).abs() < 0.1, "order 1 gap ratio {r1}");
    assert!((r2 / 100.0 - 1.0).abs() < 0.1, "order 2 gap ratio {r2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn viscous_power_is_nonnegative(eta in 1e-4f64..1e-1, eta_prime in 0.0f64..0.1, omega in 1.0f64..8.0, k in 0i64..4) {
        let p = MaterialParams::new(omega, 1.0, 1.0, eta, eta_prime).unwrap();
        let geom = SeparableGeometry::strip(4.0, 1.0).unwrap();
        let (power, dissipation) = power_balance(&p, &geom, k);
        prop_assert!(dissipation > 0.0);
        prop_assert!((power - dissipation).abs() <= 1e-7 * dissipation);
    }

    #[test]
    fn impedance_wall_forms_dissipate(eta in 1e-6f64..1e-2, omega in 1.0f64..20.0, k in 1i64..6) {
        let p = MaterialParams::new(omega, 1.0, 1.0, eta, 0.0).unwrap();
        for geom in geometries() {
            let (disc, ms) = setup(&geom, &p, k, 1.0);
            for order in [ModelOrder::One, ModelOrder::Two] {
                let prob = build_pressure_problem(&p, &geom, order, &ms);
                let sol = solve_pressure_mode(&prob, &p, &geom, &disc).unwrap();
                prop_assert!(sol.boundary_form(&prob).im <= 0.0);
            }
        }
    }
}

#[test]
fn second_order_volume_coefficient() {
    let p = params();
    let want = 1.0 - I * p.omega * (p.eta + p.eta_prime) / (p.rho0 * p.c * p.c);
    assert!((p.alpha(ModelOrder::Two) - want).norm() < 1e-15);
}
