use super::basis::{Basis1D, BasisKind};
use super::mesh::Mesh1D;
use super::quadrature::GaussLegendre;

/// Finite element space made of one or more fields on a shared mesh.
///
/// Degrees of freedom are numbered element by element (shared vertex values of
/// continuous fields first, then interior values of every field) so that the
/// bandwidth stays proportional to the number of local functions.
#[derive(Debug, Clone)]
pub struct Space {
    mesh: Mesh1D,
    fields: Vec<Basis1D>,
    /// Global indices per element, concatenated over fields in local order.
    elem_dofs: Vec<Vec<usize>>,
    /// Local offset of each field inside an element's dof list.
    offsets: Vec<usize>,
    n_dofs: usize,
    bandwidth: usize,
}

impl Space {
    pub fn new(mesh: &Mesh1D, fields: &[Basis1D]) -> Self {
        assert!(!fields.is_empty(), "a space needs at least one field");
        let ne = mesh.n_elements();
        let mut offsets = Vec::with_capacity(fields.len());
        let mut acc = 0;
        for f in fields {
            offsets.push(acc);
            acc += f.n_local();
        }
        let n_local = acc;
        let mut elem_dofs = vec![vec![usize::MAX; n_local]; ne];
        let mut next = 0;
        let mut carry: Vec<usize> = Vec::new();
        for e in 0..ne {
            // Left vertices.
            let mut ci = 0;
            for (f, b) in fields.iter().enumerate() {
                if b.kind == BasisKind::Continuous {
                    let g = if e == 0 {
                        next += 1;
                        next - 1
                    } else {
                        carry[ci]
                    };
                    elem_dofs[e][offsets[f]] = g;
                    ci += 1;
                }
            }
            // Interior functions.
            for (f, b) in fields.iter().enumerate() {
                let range = match b.kind {
                    BasisKind::Continuous => 1..b.degree,
                    BasisKind::Discontinuous => 0..b.n_local(),
                };
                for l in range {
                    elem_dofs[e][offsets[f] + l] = next;
                    next += 1;
                }
            }
            // Right vertices, carried over to the next element.
            carry.clear();
            for (f, b) in fields.iter().enumerate() {
                if b.kind == BasisKind::Continuous {
                    elem_dofs[e][offsets[f] + b.degree] = next;
                    carry.push(next);
                    next += 1;
                }
            }
        }
        let bandwidth = elem_dofs
            .iter()
            .map(|d| d.iter().max().unwrap() - d.iter().min().unwrap())
            .max()
            .unwrap_or(0);
        Space { mesh: mesh.clone(), fields: fields.to_vec(), elem_dofs, offsets, n_dofs: next, bandwidth }
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn fields(&self) -> &[Basis1D] {
        &self.fields
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    /// Half bandwidth of any matrix assembled on this space.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn n_local(&self) -> usize {
        self.elem_dofs.first().map_or(0, |d| d.len())
    }

    pub fn element_dofs(&self, e: usize) -> &[usize] {
        &self.elem_dofs[e]
    }

    /// Local index range of field `f` inside an element.
    pub fn field_range(&self, f: usize) -> std::ops::Range<usize> {
        self.offsets[f]..self.offsets[f] + self.fields[f].n_local()
    }

    /// Global index of the value of continuous field `f` at the lower (`false`)
    /// or upper (`true`) end of the mesh.
    pub fn end_dof(&self, f: usize, upper: bool) -> usize {
        assert_eq!(self.fields[f].kind, BasisKind::Continuous, "only continuous fields have end values");
        if upper {
            let e = self.mesh.n_elements() - 1;
            self.elem_dofs[e][self.offsets[f] + self.fields[f].degree]
        } else {
            self.elem_dofs[0][self.offsets[f]]
        }
    }

    /// Value and first two derivatives of field `f` at `y` for the given
    /// coefficient vector.
    pub fn eval_field<T>(&self, coeffs: &[T], f: usize, y: f64) -> [T; 3]
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    {
        let e = self.mesh.locate(y);
        let (a, b) = self.mesh.element(e);
        let jac = 0.5 * (b - a);
        let xi = ((y - a) / jac - 1.0).clamp(-1.0, 1.0);
        let basis = self.fields[f];
        let n = basis.n_local();
        let (mut v, mut d1, mut d2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        basis.eval(xi, &mut v, &mut d1, &mut d2);
        let dofs = &self.elem_dofs[e][self.offsets[f]..self.offsets[f] + n];
        let mut out = [T::default(); 3];
        for (l, &g) in dofs.iter().enumerate() {
            let c = coeffs[g];
            out[0] = out[0] + c * v[l];
            out[1] = out[1] + c * (d1[l] / jac);
            out[2] = out[2] + c * (d2[l] / (jac * jac));
        }
        out
    }
}

/// Quadrature points of a mesh, element by element.
#[derive(Debug, Clone)]
pub struct QuadGrid {
    mesh: Mesh1D,
    rule: GaussLegendre,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadGrid {
    pub fn new(mesh: &Mesh1D, n_points: usize) -> Self {
        let rule = GaussLegendre::new(n_points);
        let mut points = Vec::with_capacity(mesh.n_elements() * n_points);
        let mut weights = Vec::with_capacity(points.capacity());
        for e in 0..mesh.n_elements() {
            let (a, b) = mesh.element(e);
            let jac = 0.5 * (b - a);
            for (x, w) in rule.points.iter().zip(&rule.weights) {
                points.push(a + jac * (x + 1.0));
                weights.push(w * jac);
            }
        }
        QuadGrid { mesh: mesh.clone(), rule, points, weights }
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    pub fn per_element(&self) -> usize {
        self.rule.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn element_range(&self, e: usize) -> std::ops::Range<usize> {
        let n = self.rule.len();
        e * n..(e + 1) * n
    }
}

/// Reference-element tabulation of a [`Space`] on a [`QuadGrid`].
#[derive(Debug, Clone)]
pub struct Tabulation {
    n_local: usize,
    n_points: usize,
    val: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

/// Basis values of all local functions of one element at one point, with
/// derivatives taken in physical coordinates.
#[derive(Debug, Clone, Copy)]
pub struct PointBasis<'a> {
    pub val: &'a [f64],
    d1_ref: &'a [f64],
    d2_ref: &'a [f64],
    inv_jac: f64,
}

impl PointBasis<'_> {
    #[inline]
    pub fn d1(&self, l: usize) -> f64 {
        self.d1_ref[l] * self.inv_jac
    }

    #[inline]
    pub fn d2(&self, l: usize) -> f64 {
        self.d2_ref[l] * self.inv_jac * self.inv_jac
    }
}

impl Tabulation {
    pub fn new(space: &Space, grid: &QuadGrid) -> Self {
        let n_local = space.n_local();
        let n_points = grid.per_element();
        let mut val = vec![0.0; n_local * n_points];
        let mut d1 = vec![0.0; n_local * n_points];
        let mut d2 = vec![0.0; n_local * n_points];
        for (q, &xi) in grid.rule().points.iter().enumerate() {
            for (f, b) in space.fields().iter().enumerate() {
                let r = space.field_range(f);
                let s = q * n_local;
                b.eval(
                    xi,
                    &mut val[s + r.start..s + r.end],
                    &mut d1[s + r.start..s + r.end],
                    &mut d2[s + r.start..s + r.end],
                );
            }
        }
        Tabulation { n_local, n_points, val, d1, d2 }
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Basis data at local point `q` of an element of size `h`.
    pub fn at(&self, q: usize, h: f64) -> PointBasis<'_> {
        let s = q * self.n_local;
        let e = s + self.n_local;
        PointBasis { val: &self.val[s..e], d1_ref: &self.d1[s..e], d2_ref: &self.d2[s..e], inv_jac: 2.0 / h }
    }
}
