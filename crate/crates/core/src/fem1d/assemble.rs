use num_complex::Complex64 as C64;

use super::banded::BandedMatrix;
use super::basis::Basis1D;
use super::mesh::Mesh1D;
use super::space::{QuadGrid, Space, Tabulation};

/// Dense local matrix accumulated from products of linear functionals.
#[derive(Debug, Clone)]
pub struct LocalMatrix {
    n: usize,
    pub data: Vec<C64>,
}

impl LocalMatrix {
    pub fn new(n: usize) -> Self {
        LocalMatrix { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
    }

    /// `M[i][j] += w · trial[j] · conj(test[i])`.
    #[inline]
    pub fn add_product(&mut self, w: C64, trial: &[C64], test: &[C64]) {
        for (i, t) in test.iter().enumerate() {
            if *t == C64::new(0.0, 0.0) {
                continue;
            }
            let wt = w * t.conj();
            let row = &mut self.data[i * self.n..(i + 1) * self.n];
            for (m, s) in row.iter_mut().zip(trial) {
                *m += wt * s;
            }
        }
    }
}

/// Scalar form `(i, j) ↦ ∫ weight · D^a φ_j · D^b φ_i` on a one-field space.
///
/// `quad_points` Gauss points are used per element; exactness holds for
/// polynomial integrands up to degree `2·quad_points - 1`.
pub fn assemble(
    mesh: &Mesh1D,
    basis: Basis1D,
    weight: impl Fn(f64) -> C64,
    orders: (usize, usize),
    quad_points: usize,
) -> (Space, BandedMatrix) {
    assert!(orders.0 <= 2 && orders.1 <= 2, "derivative orders above two are not tabulated");
    let space = Space::new(mesh, &[basis]);
    let grid = QuadGrid::new(mesh, quad_points);
    let tab = Tabulation::new(&space, &grid);
    let bw = space.bandwidth();
    let mut a = BandedMatrix::zeros(space.n_dofs(), bw, bw);
    let n = space.n_local();
    let mut local = LocalMatrix::new(n);
    let mut trial = vec![C64::new(0.0, 0.0); n];
    let mut test = vec![C64::new(0.0, 0.0); n];
    for e in 0..mesh.n_elements() {
        let (lo, hi) = mesh.element(e);
        local.clear();
        for (q, gi) in grid.element_range(e).enumerate() {
            let pb = tab.at(q, hi - lo);
            let d = |l: usize, k: usize| match k {
                0 => pb.val[l],
                1 => pb.d1(l),
                _ => pb.d2(l),
            };
            for l in 0..n {
                trial[l] = C64::new(d(l, orders.0), 0.0);
                test[l] = C64::new(d(l, orders.1), 0.0);
            }
            let y = grid.points()[gi];
            local.add_product(weight(y) * grid.weights()[gi], &trial, &test);
        }
        a.add_local(space.element_dofs(e), &local.data);
    }
    (space, a)
}
