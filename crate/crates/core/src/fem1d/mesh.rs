use crate::error::{Error, Result};

/// Geometric refinement descriptor of a [`Mesh1D`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grading {
    pub n_interior: usize,
    pub ratio: f64,
    pub layers: usize,
    pub refine_ends: (bool, bool),
}

/// Breakpoints of a 1D mesh over the wall-normal interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    grading: Option<Grading>,
}

impl Mesh1D {
    pub fn from_breakpoints(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("mesh", "needs at least two breakpoints"));
        }
        if !nodes.iter().all(|x| x.is_finite()) || !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("mesh", "breakpoints must be finite and strictly increasing"));
        }
        Ok(Mesh1D { nodes, grading: None })
    }

    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        build_graded_mesh((a, b), n, 0.5, 0, (false, false))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Option<Grading> {
        self.grading
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn min_size(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Sizes of the first and last elements.
    pub fn end_sizes(&self) -> (f64, f64) {
        let n = self.nodes.len();
        (self.nodes[1] - self.nodes[0], self.nodes[n - 1] - self.nodes[n - 2])
    }

    /// Index of the element containing `y` (clamped to the mesh).
    pub fn locate(&self, y: f64) -> usize {
        let n = self.n_elements();
        match self.nodes.binary_search_by(|x| x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 1),
        }
    }
}

/// Uniform mesh of `n_interior` elements in which each flagged end element is
/// further split at distances `h·ratio^j`, `j = 1..=layers`, from the wall.
/// The smallest element then has size `h·ratio^layers`.
pub fn build_graded_mesh(
    interval: (f64, f64),
    n_interior: usize,
    ratio: f64,
    layers: usize,
    refine_ends: (bool, bool),
) -> Result<Mesh1D> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::invalid("interval", format!("degenerate interval [{a}, {b}]")));
    }
    if n_interior == 0 {
        return Err(Error::invalid("n_interior", "must be at least 1"));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid("ratio", format!("must lie in (0, 1), got {ratio}")));
    }
    let h = (b - a) / n_interior as f64;
    let mut nodes: Vec<f64> = (0..=n_interior).map(|i| a + h * i as f64).collect();
    nodes[n_interior] = b;
    for j in 1..=layers {
        let d = h * ratio.powi(j as i32);
        if refine_ends.0 {
            nodes.push(a + d);
        }
        if refine_ends.1 {
            nodes.push(b - d);
        }
    }
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let tol = 1e-12 * (b - a);
    nodes.dedup_by(|x, y| (*x - *y).abs() <= tol);
    let mut mesh = Mesh1D::from_breakpoints(nodes)?;
    mesh.grading = Some(Grading { n_interior, ratio, layers, refine_ends });
    Ok(mesh)
}

/// Number of geometric layers needed so that the wall element is at most
/// `target` when the uniform element size is `h`.
pub fn layers_for(h: f64, ratio: f64, target: f64) -> usize {
    if target >= h {
        return 0;
    }
    ((target / h).ln() / ratio.ln()).ceil().max(0.0) as usize
}
