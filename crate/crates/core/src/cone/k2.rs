//! Rank-two splitting for `K_2` patterns.
//!
//! After normalization `x = [[I, C], [C*, I]]` with `C` unitary factors as
//! `[I; C*] [I, C]`. A two-dimensional subspace splitting over the
//! eigenspaces of `J1 = diag(I, -I)` and `J2 = C J2' C*` gives a projection
//! `Q` with `X1 = [I; C*] Q [I, C]` in the cone.

use nalgebra::DMatrix;

use super::matrix::{frobenius, projector};
use super::normalize::normalize;
use super::subspace::{subspace_split_2d, SplitCertificate, TwoDecompositionProblem};
use super::{ConeError, Field, PatternMatrix, Tolerance};
use crate::recognize::f_decompose;

/// Signature matrices of the two decompositions and the projection onto `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignaturePair<T: Field> {
    pub j1: DMatrix<T>,
    pub j2: DMatrix<T>,
    pub j2_prime: DMatrix<T>,
    pub q: DMatrix<T>,
}

impl<T: Field> SignaturePair<T> {
    /// Largest of `|J_i Q J_i - Q|`, `|J_i^2 - I|`, `|J_i - J_i*|`.
    pub fn residual(&self) -> f64 {
        let p = self.q.nrows();
        let id = DMatrix::<T>::identity(p, p);
        [&self.j1, &self.j2, &self.j2_prime]
            .iter()
            .map(|j| frobenius(&(*j * *j - &id)).max(frobenius(&(*j - j.adjoint()))))
            .chain([&self.j1, &self.j2].iter().map(|j| frobenius(&(*j * &self.q * *j - &self.q))))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct K2Split<T: Field> {
    pub x1: PatternMatrix<T>,
    pub x2: PatternMatrix<T>,
    pub signature: SignaturePair<T>,
    pub problem: TwoDecompositionProblem<T>,
    pub certificate: SplitCertificate<T>,
}

fn signature<T: Field>(plus: usize, minus: usize) -> DMatrix<T> {
    DMatrix::from_fn(plus + minus, plus + minus, |r, c| {
        if r != c {
            T::zero()
        } else if r < plus {
            T::one()
        } else {
            -T::one()
        }
    })
}

pub fn k2_split<T: Field>(x: &PatternMatrix<T>, tol: &Tolerance) -> Result<K2Split<T>, ConeError> {
    let f = f_decompose(x.pattern())
        .decomposition()
        .cloned()
        .ok_or_else(|| ConeError::PatternMismatch("pattern is not in F".into()))?;
    if f.k() != 2 || !f.z.is_empty() {
        return Err(ConeError::PatternMismatch(format!("expected two pairs and empty Z, found k = {}, |Z| = {}", f.k(), f.z.len())));
    }
    let (xhat, form) = normalize(x, &f, tol)?;
    let [s1, s2] = [form.sizes[0], form.sizes[1]];
    let (p1, p2) = (s1[0] + s1[1], s2[0] + s2[1]);
    let c = xhat.matrix().view((0, p1), (p1, p2)).into_owned();
    let unitary_residual = frobenius(&(c.adjoint() * &c - DMatrix::identity(p2, p2)))
        .max(frobenius(&(&c * c.adjoint() - DMatrix::identity(p1, p1))));
    if p1 == p2 && p1 % 2 == 1 {
        return Err(ConeError::OddDimension(p1));
    }
    if p1 != p2 || unitary_residual > tol.unitary {
        return Err(ConeError::NotUnitary { residual: unitary_residual });
    }
    let p = p1;
    let j1 = signature::<T>(s1[0], s1[1]);
    let j2_prime = signature::<T>(s2[0], s2[1]);
    let j2 = &c * &j2_prime * c.adjoint();
    let problem = TwoDecompositionProblem::from_signatures(&j1, &j2, tol)?;
    let certificate = subspace_split_2d(&problem, tol)?;
    let q = projector(&certificate.z);

    let mut y1 = DMatrix::zeros(2 * p, 2 * p);
    let qc = &q * &c;
    y1.view_mut((0, 0), (p, p)).copy_from(&q);
    y1.view_mut((0, p), (p, p)).copy_from(&qc);
    y1.view_mut((p, 0), (p, p)).copy_from(&qc.adjoint());
    y1.view_mut((p, p), (p, p)).copy_from(&(c.adjoint() * &qc));
    let x1 = PatternMatrix::from_raw(x.pattern().clone(), form.pull_back(&y1));
    let x2 = PatternMatrix::from_raw(x.pattern().clone(), x.matrix() - x1.matrix());
    Ok(K2Split { x1, x2, signature: SignaturePair { j1, j2, j2_prime, q }, problem, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_family, FamilySpec};
    use crate::cone::random_unitary;
    use nalgebra::Complex;
    use rand::SeedableRng;

    /// `[[I, C], [C*, I]]` on the `K_2` member with all sides `s`.
    fn block_matrix<T: Field>(c: &DMatrix<T>, s: usize, tol: &Tolerance) -> PatternMatrix<T> {
        let fam = build_family(&FamilySpec::F { x: vec![s, s], y: vec![s, s], z: 0 }).unwrap();
        let p = 2 * s;
        let mut x = DMatrix::identity(2 * p, 2 * p);
        x.view_mut((0, p), (p, p)).copy_from(c);
        x.view_mut((p, 0), (p, p)).copy_from(&c.adjoint());
        PatternMatrix::new(fam.graph, x, tol).unwrap()
    }

    #[test]
    fn c4_is_already_rank_two() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let c = random_unitary::<Complex<f64>, _>(2, &mut rng);
        let x = block_matrix(&c, 1, &tol);
        let split = k2_split(&x, &tol).unwrap();
        assert!((&split.signature.q - DMatrix::identity(2, 2)).norm() < 1e-10);
        assert!((split.x1.matrix() - x.matrix()).norm() < 1e-10);
        assert!(split.x2.norm() < 1e-10);
    }

    #[test]
    fn p4_splits_into_rank_two_pieces() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let c = random_unitary::<Complex<f64>, _>(4, &mut rng);
            let x = block_matrix(&c, 2, &tol);
            let split = k2_split(&x, &tol).unwrap();
            assert_eq!(split.x1.rank(&tol), 2);
            assert_eq!(split.x2.rank(&tol), 2);
            split.x1.check_psd(&tol).unwrap();
            split.x2.check_psd(&tol).unwrap();
            assert!((split.x1.matrix() + split.x2.matrix() - x.matrix()).norm() < 1e-10);
            assert!(split.signature.residual() < 1e-9);
        }
    }

    #[test]
    fn real_field_split() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let c = random_unitary::<f64, _>(4, &mut rng);
        let x = block_matrix(&c, 2, &tol);
        let split = k2_split(&x, &tol).unwrap();
        assert_eq!(split.x1.rank(&tol), 2);
        assert!((split.x1.matrix() + split.x2.matrix() - x.matrix()).norm() < 1e-10);
    }

    #[test]
    fn contraction_rejected() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let c = random_unitary::<f64, _>(4, &mut rng).scale(0.9);
        let x = block_matrix(&c, 2, &tol);
        assert!(matches!(k2_split(&x, &tol), Err(ConeError::NotUnitary { .. })));
    }

    #[test]
    fn odd_dimension_rejected() {
        let tol = Tolerance::default();
        let fam = build_family(&FamilySpec::F { x: vec![1, 2], y: vec![2, 1], z: 0 }).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let c = random_unitary::<f64, _>(3, &mut rng);
        let mut x = DMatrix::identity(6, 6);
        x.view_mut((0, 3), (3, 3)).copy_from(&c);
        x.view_mut((3, 0), (3, 3)).copy_from(&c.transpose());
        let x = PatternMatrix::new(fam.graph, x, &tol).unwrap();
        assert!(matches!(k2_split(&x, &tol), Err(ConeError::OddDimension(3))));
    }
}
