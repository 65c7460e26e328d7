use nalgebra::{DMatrix, DVector};

use super::matrix::{hermitian_eigen, svd};
use super::{ConeError, Field, FieldTag, PatternMatrix, Tolerance};
use crate::graph::Graph;

/// `X = W* W` with `W` of full row rank `p`; column `i` of `W` is the vector
/// attached to vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramFactor<T: Field> {
    w: DMatrix<T>,
}

impl<T: Field> GramFactor<T> {
    pub fn from_matrix(w: DMatrix<T>) -> Self {
        GramFactor { w }
    }

    pub fn w(&self) -> &DMatrix<T> {
        &self.w
    }

    /// Rank, the number of rows of `W`.
    pub fn p(&self) -> usize {
        self.w.nrows()
    }

    pub fn n(&self) -> usize {
        self.w.ncols()
    }

    pub fn column(&self, i: usize) -> DVector<T> {
        self.w.column(i).into_owned()
    }

    /// `W* W`.
    pub fn reconstruct(&self) -> DMatrix<T> {
        self.w.adjoint() * &self.w
    }
}

/// Largest column norm of `w`.
pub(crate) fn column_scale<T: Field>(w: &DMatrix<T>) -> f64 {
    (0..w.ncols()).map(|i| w.column(i).norm()).fold(0.0, f64::max)
}

/// Largest `|w_i* w_j|` over the non-edges.
pub(crate) fn pattern_violation<T: Field>(w: &DMatrix<T>, g: &Graph) -> f64 {
    g.non_edges().map(|(i, j)| w.column(i).dotc(&w.column(j)).modulus()).fold(0.0, f64::max)
}

/// Moves `w` by Gauss-Newton steps onto `w_i* w_j = 0` for every non-edge.
/// A piece split off a much larger parent meets the constraints only to the
/// parent's absolute rounding level; this restores them relative to its own
/// scale before non-edge entries are zeroed. The same holds after rank
/// truncation. Steps that would move `W* W` by more than `budget` are refused.
pub(crate) fn polish_factor<T: Field>(gram: GramFactor<T>, g: &Graph, budget: f64) -> GramFactor<T> {
    let mut w = gram.w().clone();
    let (p, n) = w.shape();
    let target = 16.0 * f64::EPSILON * column_scale(&w).powi(2);
    let complex = T::TAG == FieldTag::Complex;
    let parts = if complex { 2 } else { 1 };
    let units: Vec<T> = if complex { vec![T::one(), T::from_parts(0.0, 1.0)] } else { vec![T::one()] };
    let pairs: Vec<(usize, usize)> = g.non_edges().collect();
    for _ in 0..4 {
        if pattern_violation(&w, g) <= target {
            break;
        }
        // unknown (a, c, part): entry w[a, c] moved along units[part]
        let nvars = p * n * parts;
        let var = |a: usize, c: usize, part: usize| (c * p + a) * parts + part;
        let mut jac = DMatrix::<f64>::zeros(pairs.len() * parts, nvars);
        let mut rhs = DVector::<f64>::zeros(pairs.len() * parts);
        for (e, &(i, j)) in pairs.iter().enumerate() {
            let value = w.column(i).dotc(&w.column(j));
            rhs[e * parts] = -value.real();
            if complex {
                rhs[e * parts + 1] = -value.imaginary();
            }
            for a in 0..p {
                for (part, &u) in units.iter().enumerate() {
                    // d(w_i* w_j) = conj(dw_i) w_j + conj(w_i) dw_j
                    let di = u.conjugate() * w[(a, j)];
                    let dj = w[(a, i)].conjugate() * u;
                    for (col, d) in [(var(a, i, part), di), (var(a, j, part), dj)] {
                        jac[(e * parts, col)] += d.real();
                        if complex {
                            jac[(e * parts + 1, col)] += d.imaginary();
                        }
                    }
                }
            }
        }
        let dec = svd(&jac);
        let top = dec.sigma.first().copied().unwrap_or(0.0);
        let mut step = DVector::<f64>::zeros(nvars);
        for k in 0..dec.sigma.len() {
            if dec.sigma[k] > 1e-8 * top {
                let coef = dec.u.column(k).dot(&rhs) / dec.sigma[k];
                step += dec.v.column(k) * coef;
            }
        }
        // a correction is a rounding-level move; anything larger is not one
        if 2.0 * step.norm() * w.norm() > budget {
            break;
        }
        let mut next = w.clone();
        for c in 0..n {
            for a in 0..p {
                for (part, &u) in units.iter().enumerate() {
                    next[(a, c)] += u.scale(step[var(a, c, part)]);
                }
            }
        }
        if pattern_violation(&next, g) >= pattern_violation(&w, g) {
            break;
        }
        w = next;
    }
    GramFactor::from_matrix(w)
}

/// Factors `x` through its eigendecomposition, keeping eigenvalues above
/// `tol.rank * max(1, lambda_max)`. Dropping the small eigenvalues moves the
/// non-edge entries slightly; the factor is polished back onto the pattern
/// within the same budget.
pub fn gram_factor<T: Field>(x: &PatternMatrix<T>, tol: &Tolerance) -> Result<GramFactor<T>, ConeError> {
    let (vals, vecs) = hermitian_eigen(x.matrix());
    let n = vals.len();
    let top = vals[n - 1].max(1.0);
    if vals[0] < -tol.psd * top {
        return Err(ConeError::Indefinite { lambda_min: vals[0], threshold: -tol.psd * top });
    }
    let cut = tol.rank * top;
    let keep: Vec<usize> = (0..n).rev().filter(|&i| vals[i] > cut).collect();
    let w = DMatrix::from_fn(keep.len(), n, |r, c| vecs[(c, keep[r])].conjugate().scale(vals[keep[r]].sqrt()));
    Ok(polish_factor(GramFactor { w }, x.pattern(), cut))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use nalgebra::Complex;
    use rand::SeedableRng;

    #[test]
    fn identity_has_full_rank() {
        let x = PatternMatrix::<f64>::new(Graph::empty(3).unwrap(), DMatrix::identity(3, 3), &Tolerance::default()).unwrap();
        let w = gram_factor(&x, &Tolerance::default()).unwrap();
        assert_eq!(w.p(), 3);
        assert!((w.reconstruct() - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn diag_two_zero() {
        let x = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let x = PatternMatrix::new(Graph::complete(2).unwrap(), x, &Tolerance::default()).unwrap();
        let w = gram_factor(&x, &Tolerance::default()).unwrap();
        assert_eq!(w.p(), 1);
        assert!((w.w()[(0, 0)].abs() - 2f64.sqrt()).abs() < 1e-12);
        assert!(w.w()[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn random_rank_three_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let v = DMatrix::<Complex<f64>>::from_fn(3, 6, |_, _| Complex::<f64>::sample(&mut rng));
        let x = PatternMatrix::new(Graph::complete(6).unwrap(), v.adjoint() * &v, &Tolerance::default()).unwrap();
        let w = gram_factor(&x, &Tolerance::default()).unwrap();
        assert_eq!(w.p(), 3);
        assert!((w.reconstruct() - x.matrix()).norm() < 1e-10 * x.norm());
    }

    #[test]
    fn indefinite_rejected() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let x = PatternMatrix::new(Graph::complete(2).unwrap(), x, &Tolerance::default()).unwrap();
        assert!(matches!(gram_factor(&x, &Tolerance::default()), Err(ConeError::Indefinite { .. })));
    }
}
