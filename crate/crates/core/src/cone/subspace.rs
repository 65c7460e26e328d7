//! A two-dimensional subspace splitting over two orthogonal decompositions
//! `F^p = X1 + X2 = Y1 + Y2` at once.
//!
//! Nontrivial intersections `X_i ∩ Y_j` are peeled off first (found from
//! principal angles). Once all four intersections are trivial every part has
//! dimension `h/2`; in orthonormal `X` coordinates `Y_2` is the graph of a map
//! `U: X2 -> X1`, and for an eigenvector `v` of `U*U` the span of `(Uv, 0)`
//! and `(0, v)` splits over both decompositions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::matrix::{frobenius, hermitian_eigen, projector, svd};
use super::{ConeError, Field, Tolerance};

/// Two orthogonal decompositions of `F^p`, each part given by orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDecompositionProblem<T: Field> {
    pub x1: DMatrix<T>,
    pub x2: DMatrix<T>,
    pub y1: DMatrix<T>,
    pub y2: DMatrix<T>,
}

impl<T: Field> TwoDecompositionProblem<T> {
    /// Checks shapes, orthonormality and `X1 ⊥ X2`, `Y1 ⊥ Y2` spanning `F^p`.
    pub fn new(x1: DMatrix<T>, x2: DMatrix<T>, y1: DMatrix<T>, y2: DMatrix<T>, tol: &Tolerance) -> Result<Self, ConeError> {
        let p = x1.nrows();
        for m in [&x1, &x2, &y1, &y2] {
            if m.nrows() != p {
                return Err(ConeError::Shape("all bases must live in the same F^p".into()));
            }
        }
        if x1.ncols() + x2.ncols() != p || y1.ncols() + y2.ncols() != p {
            return Err(ConeError::Dimension("each decomposition must have dimensions summing to p".into()));
        }
        let check = |a: &DMatrix<T>, b: &DMatrix<T>| {
            let mut m = DMatrix::zeros(p, a.ncols() + b.ncols());
            m.view_mut((0, 0), (p, a.ncols())).copy_from(a);
            m.view_mut((0, a.ncols()), (p, b.ncols())).copy_from(b);
            frobenius(&(m.adjoint() * &m - DMatrix::identity(p, p)))
        };
        let worst = check(&x1, &x2).max(check(&y1, &y2));
        if worst > 1e3 * tol.angle.max(1e-12) {
            return Err(ConeError::Numerical(format!("bases are not orthonormal (residual {worst:.3e})")));
        }
        Ok(TwoDecompositionProblem { x1, x2, y1, y2 })
    }

    pub fn p(&self) -> usize {
        self.x1.nrows()
    }

    /// The `+1` and `-1` eigenspaces of two signature matrices.
    pub fn from_signatures(j1: &DMatrix<T>, j2: &DMatrix<T>, tol: &Tolerance) -> Result<Self, ConeError> {
        let split = |j: &DMatrix<T>| {
            let (vals, vecs) = hermitian_eigen(j);
            let p = vals.len();
            let neg: Vec<usize> = (0..p).filter(|&k| vals[k] < 0.0).collect();
            let pos: Vec<usize> = (0..p).filter(|&k| vals[k] >= 0.0).collect();
            let pick = |idx: &[usize]| DMatrix::from_fn(p, idx.len(), |r, c| vecs[(r, idx[c])]);
            (pick(&pos), pick(&neg))
        };
        let (x1, x2) = split(j1);
        let (y1, y2) = split(j2);
        Self::new(x1, x2, y1, y2, tol)
    }

    /// Random instance: two Haar-like unitaries cut at random positions.
    pub fn random<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Self {
        let cut = |q: DMatrix<T>, a: usize| (q.columns(0, a).into_owned(), q.columns(a, p - a).into_owned());
        let a = rng.random_range(0..=p);
        let b = rng.random_range(0..=p);
        let (x1, x2) = cut(random_unitary(p, rng), a);
        let (y1, y2) = cut(random_unitary(p, rng), b);
        TwoDecompositionProblem { x1, x2, y1, y2 }
    }
}

/// Orthonormalized Gaussian matrix.
pub fn random_unitary<T: Field, R: Rng + ?Sized>(p: usize, rng: &mut R) -> DMatrix<T> {
    let g = DMatrix::<T>::from_fn(p, p, |_, _| T::sample(rng));
    g.qr().q()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitExit {
    /// Two dimensions inside one intersection `X_i ∩ Y_j`.
    InsideIntersection,
    /// A line was peeled from a plane; the plane itself splits.
    WholeAmbient,
    /// All intersections trivial; built from an eigenvector of `U*U`.
    Generic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCertificate<T: Field> {
    /// Orthonormal basis of `Z`, `p x 2`.
    pub z: DMatrix<T>,
    /// Intersections peeled in order, each one-dimensional.
    pub peeled: Vec<DMatrix<T>>,
    pub exit: SplitExit,
    /// Present for the generic exit.
    pub u: Option<DMatrix<T>>,
    pub v: Option<DVector<T>>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitResiduals {
    pub dim: usize,
    /// Largest `|P_Z P_S - P_S P_Z|` over the four parts.
    pub commutator: f64,
    /// `|P_Z - P_{Z∩X1} - P_{Z∩X2}|`.
    pub x_split: f64,
    /// `|P_Z - P_{Z∩Y1} - P_{Z∩Y2}|`.
    pub y_split: f64,
}

impl SplitResiduals {
    pub fn worst(&self) -> f64 {
        self.commutator.max(self.x_split).max(self.y_split)
    }
}

/// Orthonormal basis of `span(a) ∩ span(b)` from the principal angles with
/// cosine at least `1 - tol.angle`.
pub fn intersect<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>, tol: &Tolerance) -> DMatrix<T> {
    let p = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return DMatrix::zeros(p, 0);
    }
    let dec = svd(&(b.adjoint() * a));
    let count = dec.sigma.iter().filter(|&&s| s >= 1.0 - tol.angle).count();
    a * dec.v.columns(0, count)
}

/// Orthonormal basis of `span(a) ⊖ span(k)` for `span(k) ⊆ span(a)`.
fn remove<T: Field>(a: &DMatrix<T>, k: &DMatrix<T>) -> DMatrix<T> {
    let ak = a.adjoint() * k;
    let g = DMatrix::identity(a.ncols(), a.ncols()) - &ak * ak.adjoint();
    let (vals, vecs) = hermitian_eigen(&g);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
    a * DMatrix::from_fn(a.ncols(), keep.len(), |r, c| vecs[(r, keep[c])])
}

pub fn subspace_split_2d<T: Field>(prob: &TwoDecompositionProblem<T>, tol: &Tolerance) -> Result<SplitCertificate<T>, ConeError> {
    let p = prob.p();
    if p < 2 {
        return Err(ConeError::Dimension(format!("p = {p}; a two-dimensional splitting needs p >= 2")));
    }
    let mut h = DMatrix::<T>::identity(p, p);
    let mut xs = [prob.x1.clone(), prob.x2.clone()];
    let mut ys = [prob.y1.clone(), prob.y2.clone()];
    let mut peeled = Vec::new();
    let done = |z: DMatrix<T>, exit, peeled| Ok(SplitCertificate { z, peeled, exit, u: None, v: None, lambda: None });

    // Part 1: peel intersections
    'peel: loop {
        #[allow(clippy::needless_range_loop)] // both lists are rewritten in place
        for i in 0..2 {
            for j in 0..2 {
                let k = intersect(&xs[i], &ys[j], tol);
                match k.ncols() {
                    0 => continue,
                    1 if h.ncols() == 2 => return done(h, SplitExit::WholeAmbient, peeled),
                    1 => {
                        xs[i] = remove(&xs[i], &k);
                        ys[j] = remove(&ys[j], &k);
                        h = remove(&h, &k);
                        peeled.push(k);
                        continue 'peel;
                    }
                    _ => return done(k.columns(0, 2).into_owned(), SplitExit::InsideIntersection, peeled),
                }
            }
        }
        break;
    }

    // Part 2: every part has half the dimension
    let dim = h.ncols();
    if dim % 2 != 0 || xs.iter().chain(&ys).any(|m| m.ncols() * 2 != dim) {
        let dims: Vec<usize> = xs.iter().chain(&ys).map(|m| m.ncols()).collect();
        return Err(ConeError::Numerical(format!(
            "after peeling, ambient dimension {dim} with part dimensions {dims:?}; expected all equal to half"
        )));
    }

    // Part 3: U = T12 T22^{-1} in orthonormal X coordinates
    let t12 = xs[0].adjoint() * &ys[1];
    let t22 = xs[1].adjoint() * &ys[1];
    let inv = t22
        .clone()
        .try_inverse()
        .ok_or_else(|| ConeError::Numerical("T22 is singular although X2 ∩ Y1 is trivial".into()))?;
    let u = t12 * inv;
    let (vals, vecs) = hermitian_eigen(&(u.adjoint() * &u));
    let top = vals.len() - 1;
    let v: DVector<T> = vecs.column(top).into_owned();
    let a = &xs[0] * (&u * &v);
    let b = &xs[1] * &v;
    let mut z = DMatrix::zeros(p, 2);
    z.set_column(0, &a.unscale(a.norm()));
    z.set_column(1, &b.unscale(b.norm()));
    Ok(SplitCertificate { z, peeled, exit: SplitExit::Generic, u: Some(u), v: Some(v), lambda: Some(vals[top]) })
}

impl<T: Field> SplitCertificate<T> {
    /// Re-checks the splitting with intersections recomputed independently.
    pub fn residuals(&self, prob: &TwoDecompositionProblem<T>, tol: &Tolerance) -> SplitResiduals {
        let pz = projector(&self.z);
        let commutator = [&prob.x1, &prob.x2, &prob.y1, &prob.y2]
            .iter()
            .map(|s| {
                let ps = projector(s);
                frobenius(&(&pz * &ps - &ps * &pz))
            })
            .fold(0.0, f64::max);
        let split = |a: &DMatrix<T>, b: &DMatrix<T>| {
            let pa = projector(&intersect(&self.z, a, tol));
            let pb = projector(&intersect(&self.z, b, tol));
            frobenius(&(&pz - pa - pb))
        };
        SplitResiduals {
            dim: self.z.ncols(),
            commutator,
            x_split: split(&prob.x1, &prob.x2),
            y_split: split(&prob.y1, &prob.y2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;
    use rand::SeedableRng;

    #[test]
    fn axes_equal_whole_plane() {
        let tol = Tolerance::default();
        let e = DMatrix::<f64>::identity(2, 2);
        let (a, b) = (e.columns(0, 1).into_owned(), e.columns(1, 1).into_owned());
        let prob = TwoDecompositionProblem::new(a.clone(), b.clone(), a, b, &tol).unwrap();
        let cert = subspace_split_2d(&prob, &tol).unwrap();
        assert_eq!(cert.exit, SplitExit::WholeAmbient);
        assert!(cert.residuals(&prob, &tol).worst() < 1e-12);
    }

    #[test]
    fn rotated_axes_generic() {
        let tol = Tolerance::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x1 = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let x2 = DMatrix::from_column_slice(2, 1, &[0.0, 1.0]);
        let y1 = DMatrix::from_column_slice(2, 1, &[s, s]);
        let y2 = DMatrix::from_column_slice(2, 1, &[-s, s]);
        let prob = TwoDecompositionProblem::new(x1, x2, y1, y2, &tol).unwrap();
        let cert = subspace_split_2d(&prob, &tol).unwrap();
        assert_eq!(cert.exit, SplitExit::Generic);
        assert_eq!(cert.u.as_ref().unwrap().shape(), (1, 1));
        assert!(cert.residuals(&prob, &tol).worst() < 1e-12);
    }

    #[test]
    fn random_p8_both_fields() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let prob = TwoDecompositionProblem::<Complex<f64>>::random(8, &mut rng);
            let c = subspace_split_2d(&prob, &tol).unwrap();
            let r = c.residuals(&prob, &tol);
            assert_eq!(r.dim, 2);
            assert!(r.worst() <= 1e-10, "{r:?} {:?}", c.exit);
            let prob = TwoDecompositionProblem::<f64>::random(8, &mut rng);
            let c = subspace_split_2d(&prob, &tol).unwrap();
            let r = c.residuals(&prob, &tol);
            assert!(r.worst() <= 1e-10, "{r:?} {:?}", c.exit);
        }
    }

    #[test]
    fn p_one_rejected() {
        let tol = Tolerance::default();
        let one = DMatrix::<f64>::identity(1, 1);
        let none = DMatrix::<f64>::zeros(1, 0);
        let prob = TwoDecompositionProblem::new(one.clone(), none.clone(), one, none, &tol).unwrap();
        assert!(matches!(subspace_split_2d(&prob, &tol), Err(ConeError::Dimension(_))));
    }
}
