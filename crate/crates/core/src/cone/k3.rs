//! Explicit perturbations for `K_3` patterns (three pairs of single vertices).
//!
//! For `p = 3` the unknowns of a Hermitian `B` are written out directly
//! (`r_1..r_3` real, `c_1..c_3` in the field) and each non-edge `(x_i, y_i)`
//! contributes the real and imaginary parts of `w_{x_i}* B w_{y_i} = 0`. For
//! `p >= 4` a unit vector orthogonal to the three `w_{x_i}` gives `R = vv*`.

use nalgebra::{DMatrix, DVector};

use super::matrix::frobenius;
use super::perturb::null_space;
use super::{ConeError, Field, GramFactor, Tolerance};
use crate::recognize::FDecomposition;

#[derive(Debug, Clone, PartialEq)]
pub struct K3Perturbation<T: Field> {
    /// Hermitian, trace zero, unit Frobenius norm.
    pub b: DMatrix<T>,
    /// Real dimension of the solution space of the constraint system.
    pub dimension: usize,
    /// Largest `|w_{x_i}* B w_{y_i}|`.
    pub residual: f64,
}

/// The three `(x_i, y_i)` vertex pairs of a `K_3` decomposition.
fn k3_pairs(f: &FDecomposition) -> Result<[(usize, usize); 3], ConeError> {
    if f.k() != 3 || f.pairs.iter().any(|(a, b)| a.len() != 1 || b.len() != 1) {
        return Err(ConeError::PatternMismatch(format!("expected three pairs of single vertices, found sizes {:?}", f.pair_sizes())));
    }
    let v: Vec<(usize, usize)> = f.pairs.iter().map(|(a, b)| (a.as_slice()[0], b.as_slice()[0])).collect();
    Ok([v[0], v[1], v[2]])
}

/// Coordinates `r_1, r_2, r_3, c_1, c_2, c_3` (real parts then imaginary
/// parts over the complex field) as a Hermitian matrix.
fn b_from_unknowns<T: Field>(u: &[f64]) -> DMatrix<T> {
    let complex = T::TAG == super::FieldTag::Complex;
    let c = |k: usize| T::from_parts(u[3 + k], if complex { u[6 + k] } else { 0.0 });
    let mut b = DMatrix::zeros(3, 3);
    for k in 0..3 {
        b[(k, k)] = T::from_real(u[k]);
    }
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        b[(i, j)] = c(k);
        b[(j, i)] = c(k).conjugate();
    }
    b
}

fn unknowns<T: Field>() -> usize {
    if T::TAG == super::FieldTag::Complex {
        9
    } else {
        6
    }
}

fn constraint_residual<T: Field>(w: &GramFactor<T>, pairs: &[(usize, usize); 3], b: &DMatrix<T>) -> f64 {
    pairs
        .iter()
        .map(|&(x, y)| (w.column(x).adjoint() * b * w.column(y))[(0, 0)].modulus())
        .fold(0.0, f64::max)
}

/// A trace-free Hermitian `B` with `w_{x_i}* B w_{y_i} = 0` for `i = 1, 2, 3`.
pub fn k3_perturbation<T: Field>(
    w: &GramFactor<T>,
    f: &FDecomposition,
    tol: &Tolerance,
) -> Result<K3Perturbation<T>, ConeError> {
    if w.p() != 3 {
        return Err(ConeError::Dimension(format!("rank is {}; the explicit system needs p = 3", w.p())));
    }
    let pairs = k3_pairs(f)?;
    let nvars = unknowns::<T>();
    let complex = T::TAG == super::FieldTag::Complex;
    let mut rows = Vec::new();
    for &(x, y) in &pairs {
        let (a, c) = (w.column(x), w.column(y));
        let coeffs: Vec<T> = (0..nvars)
            .map(|t| {
                let mut u = vec![0.0; nvars];
                u[t] = 1.0;
                (a.adjoint() * b_from_unknowns::<T>(&u) * &c)[(0, 0)]
            })
            .collect();
        rows.push(coeffs.iter().map(|v| v.real()).collect());
        if complex {
            rows.push(coeffs.iter().map(|v| v.imaginary()).collect());
        }
    }
    let (null, _, _) = null_space(&rows, nvars, tol.null_space, 0.0);
    let dimension = null.ncols();
    // pick the null vector whose trace-free part is largest
    let trace_free = |k: usize| {
        let b = b_from_unknowns::<T>(null.column(k).as_slice());
        let shift = b.trace().unscale(3.0);
        b - DMatrix::identity(3, 3) * shift
    };
    let best = (0..dimension)
        .map(|k| (k, frobenius(&trace_free(k))))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .filter(|&(_, n)| n > tol.null_space)
        .ok_or_else(|| ConeError::Numerical("constraint system admits only multiples of I".into()))?;
    let b = trace_free(best.0).unscale(best.1);
    let residual = constraint_residual(w, &pairs, &b);
    Ok(K3Perturbation { b, dimension, residual })
}

/// `R = vv*` with `v` a unit vector orthogonal to `w_{x_1}, w_{x_2}, w_{x_3}`, for `p >= 4`.
pub fn k3_rank_one_perturbation<T: Field>(
    w: &GramFactor<T>,
    f: &FDecomposition,
    tol: &Tolerance,
) -> Result<DMatrix<T>, ConeError> {
    let p = w.p();
    if p < 4 {
        return Err(ConeError::Dimension(format!("rank is {p}; the rank-one construction needs p >= 4")));
    }
    let pairs = k3_pairs(f)?;
    let mut a = DMatrix::<T>::zeros(3, p);
    for (r, &(x, _)) in pairs.iter().enumerate() {
        a.set_row(r, &w.column(x).adjoint());
    }
    // null space of the 3 x p system via the Hermitian Gram matrix
    let (vals, vecs) = super::matrix::hermitian_eigen(&(a.adjoint() * &a));
    let top = vals[p - 1].max(1.0);
    if vals[0] > tol.null_space * top {
        return Err(ConeError::Numerical("no vector orthogonal to the three columns".into()));
    }
    let v: DVector<T> = vecs.column(0).into_owned();
    Ok(&v * v.adjoint())
}
