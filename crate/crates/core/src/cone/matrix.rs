use nalgebra::{DMatrix, DVector};

use super::{ConeError, Field, Tolerance};
use crate::graph::Graph;

/// A Hermitian matrix with zeros off the diagonal at the non-edges of its
/// pattern graph. Entries are stored exactly Hermitian with exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternMatrix<T: Field> {
    pattern: Graph,
    x: DMatrix<T>,
}

impl<T: Field> PatternMatrix<T> {
    /// Validates Hermitian symmetry and the zero pattern within
    /// `tol.pattern * max(1, |x|)`, then stores the cleaned matrix.
    pub fn new(pattern: Graph, x: DMatrix<T>, tol: &Tolerance) -> Result<Self, ConeError> {
        let n = pattern.n();
        if x.nrows() != n || x.ncols() != n {
            return Err(ConeError::Shape(format!("matrix is {}x{}, pattern has {n} vertices", x.nrows(), x.ncols())));
        }
        if x.iter().any(|v| !v.real().is_finite() || !v.imaginary().is_finite()) {
            return Err(ConeError::Shape("matrix has non-finite entries".into()));
        }
        let bound = tol.pattern * frobenius(&x).max(1.0);
        for i in 0..n {
            for j in i..n {
                let d = (x[(i, j)] - x[(j, i)].conjugate()).modulus();
                if d > bound {
                    return Err(ConeError::NotHermitian { i: i + 1, j: j + 1, residual: d });
                }
                if i != j && !pattern.has_edge(i, j) && x[(i, j)].modulus() > bound {
                    return Err(ConeError::PatternViolation { i: i + 1, j: j + 1, value: x[(i, j)].modulus() });
                }
            }
        }
        Ok(Self::from_raw(pattern, x))
    }

    /// Hermitizes and zeros the non-edges without checking.
    pub fn from_raw(pattern: Graph, mut x: DMatrix<T>) -> Self {
        hermitize(&mut x);
        for (i, j) in pattern.non_edges() {
            x[(i, j)] = T::zero();
            x[(j, i)] = T::zero();
        }
        PatternMatrix { pattern, x }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.x
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.x
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        frobenius(&self.x)
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigen(&self.x).0
    }

    pub fn check_psd(&self, tol: &Tolerance) -> Result<(), ConeError> {
        let ev = self.eigenvalues();
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        let threshold = -tol.psd * hi.max(1.0);
        if lo < threshold {
            return Err(ConeError::Indefinite { lambda_min: lo, threshold });
        }
        Ok(())
    }

    /// Number of eigenvalues above `tol.rank * max(1, lambda_max)`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let ev = self.eigenvalues();
        let cut = tol.rank * ev[ev.len() - 1].max(1.0);
        ev.iter().filter(|&&l| l > cut).count()
    }
}

pub(crate) fn frobenius<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.modulus_squared()).sum::<f64>().sqrt()
}

pub(crate) fn hermitize<T: Field>(m: &mut DMatrix<T>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = T::from_real(m[(i, i)].real());
        for j in i + 1..n {
            let v = (m[(i, j)] + m[(j, i)].conjugate()).unscale(2.0);
            m[(i, j)] = v;
            m[(j, i)] = v.conjugate();
        }
    }
}

/// Eigenvalues (increasing) and matching orthonormal eigenvectors of the
/// Hermitian part of `m`.
pub(crate) fn hermitian_eigen<T: Field>(m: &DMatrix<T>) -> (DVector<f64>, DMatrix<T>) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let mut h = m.clone();
    hermitize(&mut h);
    // entries far below rounding of the largest one can underflow the
    // iteration into NaN; flushing them changes nothing at working precision
    let flush = f64::EPSILON * f64::EPSILON * frobenius(&h);
    h.apply(|v| {
        if v.modulus() < flush {
            *v = T::zero();
        }
    });
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

/// Thin singular value decomposition `m V = U diag(sigma)`, singular values
/// in decreasing order. Columns of `U` for zero singular values are zero.
pub(crate) struct Svd<T: Field> {
    pub u: DMatrix<T>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<T>,
}

/// One-sided Jacobi SVD. Accurate for clustered singular values.
pub(crate) fn svd<T: Field>(m: &DMatrix<T>) -> Svd<T> {
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    // columns below this are numerically zero and left alone
    let floor = (f64::EPSILON * frobenius(m)).powi(2);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.modulus();
                if alpha <= floor || beta <= floor || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for r in 0..mat.nrows() {
                        let xp = mat[(r, p)];
                        let xq = mat[(r, q)] * phase.conjugate();
                        mat[(r, p)] = xp.scale(c) - xq.scale(s);
                        mat[(r, q)] = xp.scale(s) + xq.scale(c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|k| a.column(k).norm()).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let u = DMatrix::from_fn(rows, n, |r, c| {
        let k = idx[c];
        if norms[k] > 0.0 { a[(r, k)].unscale(norms[k]) } else { T::zero() }
    });
    let v = DMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    Svd { u, sigma: idx.iter().map(|&k| norms[k]).collect(), v }
}

/// Orthogonal projection onto the span of the orthonormal columns of `b`.
pub(crate) fn projector<T: Field>(b: &DMatrix<T>) -> DMatrix<T> {
    b * b.adjoint()
}
