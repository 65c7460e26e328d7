//! The perturbation-space extremality test and the splitting recursion.
//!
//! With `X = W* W` and `W` of full row rank, every `X'` in the cone with
//! range inside that of `X` is `W* R W` for a Hermitian `R`. `X` is extremal
//! exactly when the only Hermitian `R` keeping `W* R W` inside the pattern are
//! the real multiples of the identity, i.e. when the real solution space of
//! `w_i* R w_j = 0` (non-edges `ij`) has dimension one.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::gram::{column_scale, gram_factor, polish_factor, GramFactor};
use super::matrix::{hermitian_eigen, svd};
use super::{ConeError, Field, FieldTag, PatternMatrix, Tolerance};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Elem {
    Diag(usize),
    /// `(E_ab + E_ba) / sqrt 2`
    Sym(usize, usize),
    /// `i (E_ab - E_ba) / sqrt 2`
    Anti(usize, usize),
}

/// Orthonormal basis (real trace inner product) of the `p x p` Hermitian
/// matrices: diagonal units, then symmetric pairs, then (complex only)
/// antisymmetric imaginary pairs.
fn elements<T: Field>(p: usize) -> Vec<Elem> {
    let mut e: Vec<Elem> = (0..p).map(Elem::Diag).collect();
    for a in 0..p {
        for b in a + 1..p {
            e.push(Elem::Sym(a, b));
        }
    }
    if T::TAG == FieldTag::Complex {
        for a in 0..p {
            for b in a + 1..p {
                e.push(Elem::Anti(a, b));
            }
        }
    }
    e
}

/// Real dimension of the `p x p` Hermitian matrices over `T`.
pub fn hermitian_dim<T: Field>(p: usize) -> usize {
    match T::TAG {
        FieldTag::Real => p * (p + 1) / 2,
        FieldTag::Complex => p * p,
    }
}

/// Hermitian matrix with the given coordinates in the basis of [`elements`].
pub fn hermitian_from_coords<T: Field>(coords: &[f64], p: usize) -> DMatrix<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<T>::zeros(p, p);
    for (e, &c) in elements::<T>(p).iter().zip(coords) {
        match *e {
            Elem::Diag(a) => m[(a, a)] += T::from_real(c),
            Elem::Sym(a, b) => {
                m[(a, b)] += T::from_real(c * s);
                m[(b, a)] += T::from_real(c * s);
            }
            Elem::Anti(a, b) => {
                m[(a, b)] += T::from_parts(0.0, c * s);
                m[(b, a)] += T::from_parts(0.0, -c * s);
            }
        }
    }
    m
}

/// Coordinates of a Hermitian matrix in the basis of [`elements`].
pub fn coords_from_hermitian<T: Field>(m: &DMatrix<T>) -> Vec<f64> {
    let r2 = std::f64::consts::SQRT_2;
    elements::<T>(m.nrows())
        .iter()
        .map(|e| match *e {
            Elem::Diag(a) => m[(a, a)].real(),
            Elem::Sym(a, b) => r2 * m[(a, b)].real(),
            Elem::Anti(a, b) => r2 * m[(a, b)].imaginary(),
        })
        .collect()
}

/// `u* E v` for a basis element `E`.
fn bilinear<T: Field>(e: Elem, u: &DVector<T>, v: &DVector<T>) -> T {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match e {
        Elem::Diag(a) => u[a].conjugate() * v[a],
        Elem::Sym(a, b) => (u[a].conjugate() * v[b] + u[b].conjugate() * v[a]).scale(s),
        Elem::Anti(a, b) => {
            let i = T::from_parts(0.0, 1.0);
            (u[a].conjugate() * v[b] - u[b].conjugate() * v[a]).scale(s) * i
        }
    }
}

/// Real solution space of the homogeneous pattern constraints on `R`.
#[derive(Debug, Clone)]
pub struct PerturbationSpace<T: Field> {
    /// Orthonormal basis, one coordinate column per solution.
    pub coords: DMatrix<f64>,
    /// The same basis as Hermitian matrices.
    pub basis: Vec<DMatrix<T>>,
    /// Real dimension `d`.
    pub dim: usize,
    pub p: usize,
    /// Number of real equations assembled.
    pub equations: usize,
    /// Largest singular value treated as zero and smallest one kept, relative
    /// to the largest; their ratio indicates how clear-cut the verdict is.
    pub largest_null: f64,
    pub smallest_kept: Option<f64>,
}


/// Rounding noise inherited from an input whose largest column norm is 1.
const NOISE: f64 = 1e3 * f64::EPSILON;

/// Largest move of a piece, relative to the squared input scale, that
/// polishing may make to restore the pattern after a split.
const ROUNDING_MOVE: f64 = 1e-10;

/// Columns of `w` that are numerically zero: `|w_i|` at most
/// `tol.rank * max_j |w_j|` or the noise level of `reference`.
fn zero_columns<T: Field>(w: &DMatrix<T>, tol: &Tolerance, reference: f64) -> Vec<bool> {
    let cut = (tol.rank * column_scale(w)).max(NOISE * reference);
    (0..w.ncols()).map(|i| w.column(i).norm() <= cut).collect()
}

/// The factor with its numerically zero columns set to zero, so the
/// constraints skipped for them hold exactly.
fn clear_zero_columns<T: Field>(gram: GramFactor<T>, tol: &Tolerance, reference: f64) -> GramFactor<T> {
    let zero = zero_columns(gram.w(), tol, reference);
    if !zero.iter().any(|&z| z) {
        return gram;
    }
    let mut w = gram.w().clone();
    for (i, _) in zero.iter().enumerate().filter(|(_, &z)| z) {
        w.column_mut(i).fill(T::zero());
    }
    GramFactor::from_matrix(w)
}

/// Assembles `w_i* R w_j = 0` for every non-edge as real equations (one per
/// non-edge over the reals, two over the complexes) and extracts the null
/// space by SVD. Cutoffs are relative to the factor's own scale.
pub fn perturbation_space<T: Field>(w: &GramFactor<T>, g: &Graph, tol: &Tolerance) -> PerturbationSpace<T> {
    perturbation_space_at(w, g, tol, column_scale(w.w()))
}

/// As [`perturbation_space`], additionally treating anything at the rounding
/// noise of `reference` (the largest column norm of the root of a recursion)
/// as zero. Small pieces of a large input carry the input's absolute noise.
pub fn perturbation_space_at<T: Field>(w: &GramFactor<T>, g: &Graph, tol: &Tolerance, reference: f64) -> PerturbationSpace<T> {
    let p = w.p();
    let elems = elements::<T>(p);
    let nvars = elems.len();
    let zero = zero_columns(w.w(), tol, reference);
    let complex = T::TAG == FieldTag::Complex;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, j) in g.non_edges() {
        if zero[i] || zero[j] {
            continue;
        }
        let (wi, wj) = (w.column(i), w.column(j));
        let coeffs: Vec<T> = elems.iter().map(|&e| bilinear(e, &wi, &wj)).collect();
        rows.push(coeffs.iter().map(|c| c.real()).collect());
        if complex {
            rows.push(coeffs.iter().map(|c| c.imaginary()).collect());
        }
    }
    let equations = rows.len();
    let floor = NOISE * reference * reference;
    let (coords, largest_null, smallest_kept) = null_space(&rows, nvars, tol.null_space, floor);
    let dim = coords.ncols();
    let basis = (0..dim).map(|k| hermitian_from_coords::<T>(coords.column(k).as_slice(), p)).collect();
    PerturbationSpace { coords, basis, dim, p, equations, largest_null, smallest_kept }
}

/// Null space of the `rows x nvars` system as orthonormal columns, plus the
/// largest relative singular value declared null and the smallest kept.
/// A singular value is null when it is at most `cut * sigma_max` or at most `floor`.
pub(crate) fn null_space(rows: &[Vec<f64>], nvars: usize, cut: f64, floor: f64) -> (DMatrix<f64>, f64, Option<f64>) {
    if nvars == 0 {
        return (DMatrix::zeros(0, 0), 0.0, None);
    }
    if rows.is_empty() {
        return (DMatrix::identity(nvars, nvars), 0.0, None);
    }
    let a = DMatrix::from_fn(rows.len(), nvars, |r, c| rows[r][c]);
    let dec = svd(&a);
    let sigma = &dec.sigma;
    let top = sigma.iter().copied().fold(0.0, f64::max);
    let mut null = Vec::new();
    let mut largest_null: f64 = 0.0;
    let mut smallest_kept: Option<f64> = None;
    for (k, &s) in sigma.iter().enumerate() {
        let rel = if top > 0.0 { s / top } else { 0.0 };
        if rel <= cut || s <= floor {
            null.push(k);
            largest_null = largest_null.max(rel);
        } else {
            smallest_kept = Some(smallest_kept.map_or(rel, |s: f64| s.min(rel)));
        }
    }
    // fixed order: by singular value, then index
    null.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]).then(a.cmp(&b)));
    let coords = DMatrix::from_fn(nvars, null.len(), |r, c| dec.v[(r, null[c])]);
    (coords, largest_null, smallest_kept)
}

/// Outcome of the extremality test.
#[derive(Debug, Clone)]
pub struct ExtremalityReport<T: Field> {
    pub gram: GramFactor<T>,
    pub space: PerturbationSpace<T>,
    pub extremal: bool,
    /// Trace-orthogonal to `I`, unit Frobenius norm; present when not extremal.
    pub direction: Option<DMatrix<T>>,
}

/// Serializable summary of an [`ExtremalityReport`].
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalitySummary {
    pub rank: usize,
    pub dimension: usize,
    pub extremal: bool,
    pub equations: usize,
    pub largest_null: f64,
    pub smallest_kept: Option<f64>,
}

impl<T: Field> ExtremalityReport<T> {
    pub fn summary(&self) -> ExtremalitySummary {
        ExtremalitySummary {
            rank: self.gram.p(),
            dimension: self.space.dim,
            extremal: self.extremal,
            equations: self.space.equations,
            largest_null: self.space.largest_null,
            smallest_kept: self.space.smallest_kept,
        }
    }
}

/// Runs the extremality test on a known Gram factor.
pub fn analyze_factor<T: Field>(gram: GramFactor<T>, g: &Graph, tol: &Tolerance) -> Result<ExtremalityReport<T>, ConeError> {
    let reference = column_scale(gram.w());
    analyze_factor_at(gram, g, tol, reference)
}

/// As [`analyze_factor`] with cutoffs relative to `reference` (see
/// [`perturbation_space_at`]). Numerically zero columns are cleared first.
pub fn analyze_factor_at<T: Field>(
    gram: GramFactor<T>,
    g: &Graph,
    tol: &Tolerance,
    reference: f64,
) -> Result<ExtremalityReport<T>, ConeError> {
    if gram.p() == 0 {
        return Err(ConeError::ZeroMatrix);
    }
    let gram = clear_zero_columns(gram, tol, reference);
    let space = perturbation_space_at(&gram, g, tol, reference);
    let p = gram.p();
    match space.dim {
        0 => Err(ConeError::Numerical(
            "identity not found in the perturbation space; the pattern constraints are not met".into(),
        )),
        1 => Ok(ExtremalityReport { gram, space, extremal: true, direction: None }),
        _ => {
            let ident = coords_from_hermitian(&DMatrix::<T>::identity(p, p)).into_iter().map(|c| c / (p as f64).sqrt());
            let ident = DVector::from_iterator(space.coords.nrows(), ident);
            let best = (0..space.dim)
                .map(|k| {
                    let c = space.coords.column(k);
                    c - &ident * ident.dot(&c)
                })
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .expect("dim >= 2");
            let b = best.unscale(best.norm());
            let direction = hermitian_from_coords::<T>(b.as_slice(), p);
            Ok(ExtremalityReport { gram, space, extremal: false, direction: Some(direction) })
        }
    }
}

pub fn is_extremal<T: Field>(x: &PatternMatrix<T>, tol: &Tolerance) -> Result<ExtremalityReport<T>, ConeError> {
    let gram = gram_factor(x, tol)?;
    analyze_factor(gram, x.pattern(), tol)
}

/// Splits a factor along `b`: `R1 = (rho I + B)/(rho + sigma)` and
/// `R2 = (sigma I - B)/(rho + sigma)` sum to `I` and are both singular, so the
/// factors `sqrt(R_k) W` have strictly fewer rows than `W`.
pub fn split_factor<T: Field>(
    gram: &GramFactor<T>,
    b: &DMatrix<T>,
    tol: &Tolerance,
) -> Result<(GramFactor<T>, GramFactor<T>), ConeError> {
    let (vals, vecs) = hermitian_eigen(b);
    let p = vals.len();
    let (rho, sigma) = (-vals[0], vals[p - 1]);
    if !(rho > 0.0 && sigma > 0.0) {
        return Err(ConeError::Numerical(format!("direction is not trace-free (eigenvalues {:.3e}..{:.3e})", vals[0], vals[p - 1])));
    }
    let span = rho + sigma;
    let child = |mu: &dyn Fn(f64) -> f64| {
        let keep: Vec<(usize, f64)> = (0..p).map(|k| (k, mu(vals[k]) / span)).filter(|&(_, m)| m > tol.rank).collect();
        let vw = vecs.adjoint() * gram.w();
        let w = DMatrix::from_fn(keep.len(), gram.n(), |r, c| vw[(keep[r].0, c)].scale(keep[r].1.sqrt()));
        GramFactor::from_matrix(w)
    };
    let w1 = child(&|l| rho + l);
    let w2 = child(&|l| sigma - l);
    if w1.p() >= p || w2.p() >= p {
        return Err(ConeError::Numerical("split did not reduce the rank".into()));
    }
    Ok((w1, w2))
}

/// `x = X1 + X2` with `X1 = W*(rho I + B)W/(rho+sigma)`, `X2 = W*(sigma I - B)W/(rho+sigma)`.
pub fn split_step<T: Field>(
    x: &PatternMatrix<T>,
    report: &ExtremalityReport<T>,
    tol: &Tolerance,
) -> Result<(PatternMatrix<T>, PatternMatrix<T>), ConeError> {
    let b = report.direction.as_ref().ok_or(ConeError::AlreadyExtremal)?;
    let (w1, w2) = split_factor(&report.gram, b, tol)?;
    let g = x.pattern();
    let budget = ROUNDING_MOVE * column_scale(report.gram.w()).powi(2);
    let piece = |w: GramFactor<T>| PatternMatrix::from_raw(g.clone(), polish_factor(w, g, budget).reconstruct());
    Ok((piece(w1), piece(w2)))
}

/// Orthogonal rows spanning the row space of `w`, keeping directions whose
/// eigenvalue in `W* W` is above `cut`.
fn truncate_rank<T: Field>(w: &GramFactor<T>, cut: f64) -> GramFactor<T> {
    let (vals, vecs) = hermitian_eigen(&(w.w() * w.w().adjoint()));
    let keep: Vec<usize> = (0..vals.len()).rev().filter(|&k| vals[k] > cut).collect();
    let rows = vecs.adjoint() * w.w();
    GramFactor::from_matrix(DMatrix::from_fn(keep.len(), w.n(), |r, c| rows[(keep[r], c)]))
}

/// One extremal summand with its certificate.
#[derive(Debug, Clone)]
pub struct Summand<T: Field> {
    pub matrix: PatternMatrix<T>,
    pub rank: usize,
    /// Perturbation-space dimension (always 1 for a returned summand).
    pub dimension: usize,
}

/// Splits recursively until every piece is extremal. Depth is bounded by
/// the rank since both children of a split lose rank.
pub fn decompose_extremal<T: Field>(x: &PatternMatrix<T>, tol: &Tolerance) -> Result<Vec<Summand<T>>, ConeError> {
    let gram = gram_factor(x, tol)?;
    if gram.p() == 0 {
        return Ok(Vec::new());
    }
    let g = x.pattern();
    let reference = column_scale(gram.w());
    let mut out = Vec::new();
    let mut stack = vec![gram];
    while let Some(w) = stack.pop() {
        // directions at the input's rounding level are noise; pieces below
        // the input's rank cut are rounding debris of the parent
        let w = truncate_rank(&w, NOISE * reference * reference);
        if w.p() == 0 || column_scale(w.w()).powi(2) <= tol.rank * reference * reference {
            continue;
        }
        let w = polish_factor(w, g, ROUNDING_MOVE * reference * reference);
        let report = analyze_factor_at(w, g, tol, reference)?;
        match &report.direction {
            None => out.push(Summand {
                matrix: PatternMatrix::from_raw(g.clone(), report.gram.reconstruct()),
                rank: report.gram.p(),
                dimension: report.space.dim,
            }),
            Some(b) => {
                let (w1, w2) = split_factor(&report.gram, b, tol)?;
                stack.push(w2);
                stack.push(w1);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle};
    use nalgebra::Complex;
    use rand::SeedableRng;

    type C = Complex<f64>;

    #[test]
    fn coordinates_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m = DMatrix::<C>::from_fn(4, 4, |_, _| C::sample(&mut rng));
        let mut h = &m + m.adjoint();
        super::super::matrix::hermitize(&mut h);
        let c = coords_from_hermitian(&h);
        assert_eq!(c.len(), 16);
        assert!((hermitian_from_coords::<C>(&c, 4) - &h).norm() < 1e-12);
        // orthonormality: the coordinate norm equals the Frobenius norm
        let fro = h.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!((c.iter().map(|v| v * v).sum::<f64>().sqrt() - fro).abs() < 1e-12);
    }

    #[test]
    fn complete_pattern_has_full_space() {
        let tol = Tolerance::default();
        let x = PatternMatrix::<C>::new(complete(3).unwrap(), DMatrix::identity(3, 3), &tol).unwrap();
        let r = is_extremal(&x, &tol).unwrap();
        assert_eq!(r.space.dim, 9);
        let xr = PatternMatrix::<f64>::new(complete(3).unwrap(), DMatrix::identity(3, 3), &tol).unwrap();
        assert_eq!(is_extremal(&xr, &tol).unwrap().space.dim, 6);
    }

    #[test]
    fn rank_one_is_extremal() {
        let tol = Tolerance::default();
        let v = DVector::from_vec(vec![1.0, 2.0, -1.0]);
        let x = PatternMatrix::<f64>::new(complete(3).unwrap(), &v * v.transpose(), &tol).unwrap();
        let r = is_extremal(&x, &tol).unwrap();
        assert!(r.extremal);
        assert_eq!(r.space.dim, 1);
    }

    #[test]
    fn identity_two_splits_into_units() {
        let tol = Tolerance::default();
        let x = PatternMatrix::<f64>::new(complete(2).unwrap(), DMatrix::identity(2, 2), &tol).unwrap();
        let r = is_extremal(&x, &tol).unwrap();
        assert!(!r.extremal);
        let b = r.direction.clone().unwrap();
        assert!(b.trace().abs() < 1e-12);
        let (x1, x2) = split_step(&x, &r, &tol).unwrap();
        assert_eq!(x1.rank(&tol), 1);
        assert_eq!(x2.rank(&tol), 1);
        assert!((x1.matrix() + x2.matrix() - x.matrix()).norm() < 1e-12);
        // the explicit direction diag(1,-1) gives the coordinate projections
        let mut r = r;
        r.direction = Some(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let (x1, x2) = split_step(&x, &r, &tol).unwrap();
        let e1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let e2 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let close = |a: &DMatrix<f64>, b: &DMatrix<f64>| (a - b).norm() < 1e-12;
        assert!(
            (close(x1.matrix(), &e1) && close(x2.matrix(), &e2)) || (close(x1.matrix(), &e2) && close(x2.matrix(), &e1))
        );
    }

    #[test]
    fn extremal_refuses_split() {
        let tol = Tolerance::default();
        let v = DVector::from_vec(vec![1.0, 1.0]);
        let x = PatternMatrix::<f64>::new(complete(2).unwrap(), &v * v.transpose(), &tol).unwrap();
        let r = is_extremal(&x, &tol).unwrap();
        assert!(matches!(split_step(&x, &r, &tol), Err(ConeError::AlreadyExtremal)));
    }

    #[test]
    fn zero_rejected() {
        let tol = Tolerance::default();
        let x = PatternMatrix::<f64>::new(complete(2).unwrap(), DMatrix::zeros(2, 2), &tol).unwrap();
        assert!(matches!(is_extremal(&x, &tol), Err(ConeError::ZeroMatrix)));
    }

    #[test]
    fn c4_unitary_block_is_extremal() {
        let tol = Tolerance::default();
        let (c, s) = (0.6, 0.8);
        let u = DMatrix::<C>::from_row_slice(2, 2, &[C::new(c, 0.0), C::new(0.0, s), C::new(0.0, s), C::new(c, 0.0)]);
        // C4 labels 1-2-3-4: pairs {1,3} and {2,4}
        let w = DMatrix::<C>::from_fn(2, 4, |r, col| match col {
            0 => if r == 0 { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) },
            2 => if r == 1 { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) },
            1 => u[(r, 0)],
            _ => u[(r, 1)],
        });
        let x = PatternMatrix::new(cycle(4).unwrap(), w.adjoint() * &w, &tol).unwrap();
        let r = is_extremal(&x, &tol).unwrap();
        assert_eq!(r.gram.p(), 2);
        assert!(r.extremal, "d = {}", r.space.dim);
    }
}
