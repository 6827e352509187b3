/// Legendre polynomials `L_0..=L_n` and their first derivatives at `x`.
pub fn legendre_table(n: usize, x: f64, vals: &mut [f64], ders: &mut [f64]) {
    vals[0] = 1.0;
    ders[0] = 0.0;
    if n == 0 {
        return;
    }
    vals[1] = x;
    ders[1] = 1.0;
    for k in 1..n {
        let kf = k as f64;
        vals[k + 1] = ((2.0 * kf + 1.0) * x * vals[k] - kf * vals[k - 1]) / (kf + 1.0);
        // L'_{k+1} = L'_{k-1} + (2k+1) L_k, stable up to the endpoints.
        ders[k + 1] = ders[k - 1] + (2.0 * kf + 1.0) * vals[k];
    }
}

/// Shape-function family on one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Integrated Legendre: two vertex functions plus `p - 1` interior bubbles.
    /// Local ordering is left vertex, bubbles, right vertex.
    Continuous,
    /// Orthonormal Legendre polynomials, no inter-element continuity.
    Discontinuous,
}

/// Polynomial space of degree `degree` on each element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis1D {
    pub degree: usize,
    pub kind: BasisKind,
}

impl Basis1D {
    pub fn continuous(degree: usize) -> Self {
        assert!(degree >= 1, "continuous elements need degree >= 1");
        Basis1D { degree, kind: BasisKind::Continuous }
    }

    pub fn discontinuous(degree: usize) -> Self {
        Basis1D { degree, kind: BasisKind::Discontinuous }
    }

    pub fn n_local(&self) -> usize {
        self.degree + 1
    }

    /// Values and first/second derivatives with respect to the reference
    /// coordinate `ξ ∈ [-1, 1]`.
    pub fn eval(&self, xi: f64, val: &mut [f64], d1: &mut [f64], d2: &mut [f64]) {
        let p = self.degree;
        let mut l = vec![0.0; p + 1];
        let mut dl = vec![0.0; p + 1];
        legendre_table(p, xi, &mut l, &mut dl);
        match self.kind {
            BasisKind::Continuous => {
                val[0] = 0.5 * (1.0 - xi);
                d1[0] = -0.5;
                d2[0] = 0.0;
                val[p] = 0.5 * (1.0 + xi);
                d1[p] = 0.5;
                d2[p] = 0.0;
                for n in 2..=p {
                    let nf = n as f64;
                    let s = ((2.0 * nf - 1.0) / 2.0).sqrt();
                    val[n - 1] = (l[n] - l[n - 2]) / (2.0 * (2.0 * nf - 1.0)).sqrt();
                    d1[n - 1] = s * l[n - 1];
                    d2[n - 1] = s * dl[n - 1];
                }
            }
            BasisKind::Discontinuous => {
                // Second derivatives need L'' which follows from Legendre's equation
                // away from the endpoints; evaluate it by the derivative recurrence.
                let mut ddl = vec![0.0; p + 1];
                for k in 1..p {
                    let kf = k as f64;
                    ddl[k + 1] = ddl[k - 1] + (2.0 * kf + 1.0) * dl[k];
                }
                for n in 0..=p {
                    let s = ((2.0 * n as f64 + 1.0) / 2.0).sqrt();
                    val[n] = s * l[n];
                    d1[n] = s * dl[n];
                    d2[n] = s * ddl[n];
                }
            }
        }
    }
}
