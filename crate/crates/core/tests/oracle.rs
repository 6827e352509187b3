//! Every per-mode solver against the finite-difference reference.

mod common;

use common::{annulus, exact_gaps, pressure_gaps, strip, velocity_gaps, TOL};
use viscoacoustic::ModelOrder;

fn check(what: &str, gaps: Vec<(i64, f64)>) {
    for (k, gap) in gaps {
        assert!(gap < TOL, "{what}, k = {k}: relative gap {gap:.2e}");
    }
}

#[test]
fn exact_strip_matches_finite_differences() {
    check("viscous model on the strip", exact_gaps(strip()));
}

#[test]
fn exact_annulus_matches_finite_differences() {
    check("viscous model on the annulus", exact_gaps(annulus()));
}

#[test]
fn pressure_models_match_finite_differences() {
    for geom in [strip(), annulus()] {
        for order in ModelOrder::ALL {
            check(&format!("pressure order {order}"), pressure_gaps(geom, order));
        }
    }
}

#[test]
fn velocity_models_match_finite_differences() {
    for geom in [strip(), annulus()] {
        for order in ModelOrder::ALL {
            check(&format!("velocity order {order}"), velocity_gaps(geom, order));
        }
    }
}
