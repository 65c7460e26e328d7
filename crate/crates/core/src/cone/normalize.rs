//! Block normalization for patterns in `F_k` with empty `Z`.
//!
//! Vertices are reordered `X_1, Y_1, X_2, Y_2, ...`. Each diagonal block
//! `M_{i,l}` is compressed to the orthogonal complement of its kernel and
//! then whitened, so the result has identity diagonal blocks and the
//! off-diagonal blocks `C_{i,j}` are contractions.

use nalgebra::DMatrix;

use super::matrix::hermitian_eigen;
use super::{ConeError, Field, PatternMatrix, Tolerance};
use crate::graph::{Graph, VertexSet};
use crate::recognize::FDecomposition;

/// Off-diagonal block `C_{i,j}` (pairs `i < j`, 0-based) of the normalized matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CBlock<T: Field> {
    pub i: usize,
    pub j: usize,
    pub c: DMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm<T: Field> {
    /// `(p_{i,1}, p_{i,2})` after compression.
    pub sizes: Vec<[usize; 2]>,
    /// `(|X_i|, |Y_i|)` before compression.
    pub original_sizes: Vec<[usize; 2]>,
    pub c_blocks: Vec<CBlock<T>>,
    /// `perm[k]` is the original vertex at position `k` of the block order.
    pub perm: Vec<usize>,
    /// Congruence `n x r` in block order: normalized = `T* X T`.
    pub t: DMatrix<T>,
    /// Left inverse transform, `X = L Xhat L*` in block order.
    pub l: DMatrix<T>,
    /// Decomposition of the normalized pattern. Pairs that lost a side
    /// contribute their other side to `Z`.
    pub decomposition: FDecomposition,
}

impl<T: Field> BlockForm<T> {
    /// Offset of pair `i` in the normalized matrix.
    pub fn offset(&self, i: usize) -> usize {
        self.sizes[..i].iter().map(|s| s[0] + s[1]).sum()
    }

    /// `C_{i,j}`, `i < j`.
    pub fn c(&self, i: usize, j: usize) -> &DMatrix<T> {
        &self.c_blocks.iter().find(|b| b.i == i && b.j == j).expect("i < j < k").c
    }

    /// Maps a matrix in normalized coordinates back to the original vertex
    /// order: `X = L Y L*`, un-permuted.
    pub fn pull_back(&self, y: &DMatrix<T>) -> DMatrix<T> {
        let z = &self.l * y * self.l.adjoint();
        let n = self.perm.len();
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                out[(self.perm[a], self.perm[b])] = z[(a, b)];
            }
        }
        out
    }
}

/// Compresses and whitens one diagonal block: returns `(T_b, L_b)` with
/// `T_b* M T_b = I` and `L_b T_b* ` the projection onto the range of `M`.
fn whiten<T: Field>(m: &DMatrix<T>, cut: f64, tol: &Tolerance) -> (DMatrix<T>, DMatrix<T>) {
    let s = m.nrows();
    let off_diag = (0..s).flat_map(|a| (0..s).filter(move |&b| b != a).map(move |b| (a, b)));
    let diagonal = off_diag.clone().all(|(a, b)| m[(a, b)].modulus() <= tol.pattern * cut.max(1.0));
    let (vals, vecs): (Vec<f64>, DMatrix<T>) = if diagonal {
        // keep coordinate axes so already-diagonal blocks are only rescaled
        ((0..s).map(|a| m[(a, a)].real()).collect(), DMatrix::identity(s, s))
    } else {
        let (v, u) = hermitian_eigen(m);
        (v.iter().copied().collect(), u)
    };
    let keep: Vec<usize> = (0..s).filter(|&k| vals[k] > cut).collect();
    let t = DMatrix::from_fn(s, keep.len(), |r, c| vecs[(r, keep[c])].unscale(vals[keep[c]].sqrt()));
    let l = DMatrix::from_fn(s, keep.len(), |r, c| vecs[(r, keep[c])].scale(vals[keep[c]].sqrt()));
    (t, l)
}

/// Graph of `F_k` with side sizes `sizes`, laid out pair by pair.
fn f_graph(sizes: &[[usize; 2]]) -> (Graph, FDecomposition) {
    let n: usize = sizes.iter().map(|s| s[0] + s[1]).sum();
    let mut g = Graph::complete(n).expect("n >= 1");
    let mut pairs = Vec::new();
    let mut z = Vec::new();
    let mut next = 0;
    for s in sizes {
        let xs: Vec<usize> = (next..next + s[0]).collect();
        let ys: Vec<usize> = (next + s[0]..next + s[0] + s[1]).collect();
        for &u in &xs {
            for &v in &ys {
                g.remove_edge(u, v);
            }
        }
        if xs.is_empty() || ys.is_empty() {
            z.extend(xs.iter().chain(&ys));
        } else {
            pairs.push((VertexSet::new(xs), VertexSet::new(ys)));
        }
        next += s[0] + s[1];
    }
    (g, FDecomposition { n, pairs, z: VertexSet::new(z) })
}

/// Normalizes `x` against the decomposition `f` of its pattern.
pub fn normalize<T: Field>(
    x: &PatternMatrix<T>,
    f: &FDecomposition,
    tol: &Tolerance,
) -> Result<(PatternMatrix<T>, BlockForm<T>), ConeError> {
    if !f.z.is_empty() {
        return Err(ConeError::PatternMismatch("the unpaired clique Z must be empty".into()));
    }
    f.validate(x.pattern()).map_err(ConeError::PatternMismatch)?;
    let (evals, _) = hermitian_eigen(x.matrix());
    let top = evals[evals.len() - 1];
    let cut = tol.rank * top.max(1.0);

    let blocks: Vec<&VertexSet> = f.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
    let perm: Vec<usize> = blocks.iter().flat_map(|b| b.iter()).collect();
    let n = perm.len();
    let mut pieces = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let idx = b.as_slice();
        let m = DMatrix::from_fn(idx.len(), idx.len(), |r, c| x.matrix()[(idx[r], idx[c])]);
        pieces.push(whiten(&m, cut, tol));
    }
    let r: usize = pieces.iter().map(|(t, _)| t.ncols()).sum();
    if r == 0 {
        return Err(ConeError::ZeroMatrix);
    }
    let mut t = DMatrix::zeros(n, r);
    let mut l = DMatrix::zeros(n, r);
    let (mut row, mut col) = (0, 0);
    for (tb, lb) in &pieces {
        t.view_mut((row, col), (tb.nrows(), tb.ncols())).copy_from(tb);
        l.view_mut((row, col), (lb.nrows(), lb.ncols())).copy_from(lb);
        row += tb.nrows();
        col += tb.ncols();
    }
    let xp = DMatrix::from_fn(n, n, |a, b| x.matrix()[(perm[a], perm[b])]);
    let xhat = t.adjoint() * xp * &t;

    let sizes: Vec<[usize; 2]> = pieces.chunks(2).map(|c| [c[0].0.ncols(), c[1].0.ncols()]).collect();
    let original_sizes: Vec<[usize; 2]> = f.pairs.iter().map(|(a, b)| [a.len(), b.len()]).collect();
    let (g, decomposition) = f_graph(&sizes);
    let out = PatternMatrix::from_raw(g, xhat);
    let mut form = BlockForm { sizes, original_sizes, c_blocks: Vec::new(), perm, t, l, decomposition };
    let k = form.sizes.len();
    for i in 0..k {
        for j in i + 1..k {
            let (oi, oj) = (form.offset(i), form.offset(j));
            let (si, sj) = (form.sizes[i][0] + form.sizes[i][1], form.sizes[j][0] + form.sizes[j][1]);
            let c = out.matrix().view((oi, oj), (si, sj)).into_owned();
            form.c_blocks.push(CBlock { i, j, c });
        }
    }
    Ok((out, form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_family, FamilySpec};

    fn c4_family() -> (Graph, FDecomposition) {
        let fam = build_family(&FamilySpec::F { x: vec![1, 1], y: vec![1, 1], z: 0 }).unwrap();
        (fam.graph, fam.decomposition.unwrap())
    }

    #[test]
    fn identity_blocks_unchanged() {
        let tol = Tolerance::default();
        let (g, f) = c4_family();
        // layout X1=0, Y1=1, X2=2, Y2=3
        let x = DMatrix::from_row_slice(4, 4, &[1.0, 0.0, 0.3, 0.2, 0.0, 1.0, 0.1, -0.4, 0.3, 0.1, 1.0, 0.0, 0.2, -0.4, 0.0, 1.0]);
        let pm = PatternMatrix::new(g, x.clone(), &tol).unwrap();
        let (xhat, form) = normalize(&pm, &f, &tol).unwrap();
        assert!((form.t.clone() - DMatrix::identity(4, 4)).norm() < 1e-15);
        assert!((xhat.matrix() - &x).norm() < 1e-15);
        assert!((form.pull_back(xhat.matrix()) - &x).norm() < 1e-14);
    }

    #[test]
    fn diagonal_block_rescaled() {
        let tol = Tolerance::default();
        let fam = build_family(&FamilySpec::F { x: vec![1, 1], y: vec![1, 1], z: 0 }).unwrap();
        let (g, f) = (fam.graph, fam.decomposition.unwrap());
        // M_1 = diag(4, 1)
        let x = DMatrix::from_row_slice(4, 4, &[4.0, 0.0, 0.6, 0.4, 0.0, 1.0, 0.1, -0.4, 0.6, 0.1, 1.0, 0.0, 0.4, -0.4, 0.0, 1.0]);
        let pm = PatternMatrix::new(g, x, &tol).unwrap();
        let (xhat, form) = normalize(&pm, &f, &tol).unwrap();
        let c = form.c(0, 1);
        assert!((c[(0, 0)] - 0.3).abs() < 1e-14 && (c[(0, 1)] - 0.2).abs() < 1e-14);
        assert!((c[(1, 0)] - 0.1).abs() < 1e-14 && (c[(1, 1)] + 0.4).abs() < 1e-14);
        assert!((xhat.matrix()[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn z_must_be_empty() {
        let tol = Tolerance::default();
        let fam = build_family(&FamilySpec::F { x: vec![1, 1], y: vec![1, 1], z: 1 }).unwrap();
        let pm = PatternMatrix::<f64>::new(fam.graph, DMatrix::identity(5, 5), &tol).unwrap();
        assert!(matches!(normalize(&pm, &fam.decomposition.unwrap(), &tol), Err(ConeError::PatternMismatch(_))));
    }
}
