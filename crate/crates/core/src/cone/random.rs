//! Seeded generators: random elements of `PSD_G` and certified extremals.
//!
//! Vectors are drawn one vertex at a time and projected orthogonal to the
//! vectors already drawn for the vertex's non-neighbors, so `W* W` respects the
//! pattern by construction. Extremal candidates are accepted only when the
//! perturbation-space test returns dimension one at the requested rank.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{is_extremal, ConeError, Field, PatternMatrix, Tolerance};
use crate::catalog::{build_family, cycle, d_block, random_chordal, random_clique, FamilySpec};
use crate::graph::Graph;

/// Bound on candidates tried by [`random_extremal`].
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum ExtremalClass {
    /// `vv*` on a random maximal clique of a random chordal graph.
    ChordalRank1 { n: usize },
    /// Rank two on the `K_2` member with all four sides of size `side`.
    K2Unitary { side: usize },
    /// Rank two on the six-vertex cocktail-party graph.
    K3Rank2,
    /// Rank three on the cycle `C_n`.
    CycleRank3 { n: usize },
    /// Rank three on `D_j`.
    DRank3 { j: usize },
}

impl ExtremalClass {
    pub fn target_rank(&self) -> usize {
        match self {
            ExtremalClass::ChordalRank1 { .. } => 1,
            ExtremalClass::K2Unitary { .. } | ExtremalClass::K3Rank2 => 2,
            ExtremalClass::CycleRank3 { .. } | ExtremalClass::DRank3 { .. } => 3,
        }
    }
}

impl fmt::Display for ExtremalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalClass::ChordalRank1 { n } => write!(f, "chordal-rank1:{n}"),
            ExtremalClass::K2Unitary { side } => write!(f, "k2-unitary:{side}"),
            ExtremalClass::K3Rank2 => write!(f, "k3-rank2"),
            ExtremalClass::CycleRank3 { n } => write!(f, "c{n}-rank3"),
            ExtremalClass::DRank3 { j } => write!(f, "d{j}-rank3"),
        }
    }
}

impl FromStr for ExtremalClass {
    type Err = String;

    /// `chordal-rank1[:n]`, `k2-unitary[:side]`, `k3-rank2`, `c<n>-rank3`, `d<j>-rank3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        let (tag, arg) = lower.split_once(':').unwrap_or((&lower, ""));
        let num = |t: &str, default: usize| -> Result<usize, String> {
            if t.is_empty() {
                Ok(default)
            } else {
                t.parse().map_err(|_| format!("bad size \"{t}\" in \"{s}\""))
            }
        };
        let class = match tag {
            "chordal-rank1" => ExtremalClass::ChordalRank1 { n: num(arg, 6)? },
            "k2-unitary" => ExtremalClass::K2Unitary { side: num(arg, 1)? },
            "k3-rank2" => ExtremalClass::K3Rank2,
            _ => {
                let body = tag.strip_suffix("-rank3").ok_or_else(|| format!("unknown extremal class \"{s}\""))?;
                if let Some(n) = body.strip_prefix('c') {
                    ExtremalClass::CycleRank3 { n: num(n, 5)? }
                } else if let Some(j) = body.strip_prefix('d') {
                    ExtremalClass::DRank3 { j: num(j, 1)? }
                } else {
                    return Err(format!("unknown extremal class \"{s}\""));
                }
            }
        };
        match class {
            ExtremalClass::ChordalRank1 { n: 0 } | ExtremalClass::K2Unitary { side: 0 } => Err(format!("size must be positive in \"{s}\"")),
            ExtremalClass::CycleRank3 { n } if n < 5 => Err(format!("cycles need n >= 5 for rank 3, got {n}")),
            ExtremalClass::DRank3 { j } if !(1..=6).contains(&j) => Err(format!("D-blocks are D1..D6, got D{j}")),
            c => Ok(c),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomExtremal<T: Field> {
    pub matrix: PatternMatrix<T>,
    /// Candidates drawn, including the accepted one.
    pub attempts: usize,
    pub rank: usize,
    pub dimension: usize,
}

/// `p x n` factor with `w_i` orthogonal to `w_j` for every non-edge `ij`;
/// vertices are visited in a random order.
pub fn sequential_factor<T: Field, R: Rng + ?Sized>(g: &Graph, p: usize, rng: &mut R) -> DMatrix<T> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut w = DMatrix::<T>::zeros(p, n);
    let mut done: Vec<usize> = Vec::with_capacity(n);
    for &v in &order {
        let mut x = DVector::<T>::from_fn(p, |_, _| T::sample(rng));
        // Gram-Schmidt against the span of the earlier non-neighbors, twice for stability
        let others: Vec<DVector<T>> = done.iter().filter(|&&u| !g.has_edge(u, v)).map(|&u| w.column(u).into_owned()).collect();
        let basis = orthonormalize(&others);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&x);
                x -= b * c;
            }
        }
        w.set_column(v, &x);
        done.push(v);
    }
    w
}

fn orthonormalize<T: Field>(vs: &[DVector<T>]) -> Vec<DVector<T>> {
    let mut out: Vec<DVector<T>> = Vec::new();
    for v in vs {
        let mut x = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = b.dotc(&x);
                x -= b * c;
            }
        }
        let norm = x.norm();
        if norm > 1e-10 * v.norm().max(1e-300) {
            out.push(x.unscale(norm));
        }
    }
    out
}

/// Random element of `PSD_G`: two sequential factors of random rank plus a
/// rank-one term on a random clique.
pub fn random_psd<T: Field, R: Rng>(g: &Graph, rng: &mut R) -> PatternMatrix<T> {
    let n = g.n();
    let mut x = DMatrix::<T>::zeros(n, n);
    for _ in 0..2 {
        let p = rng.random_range(1..=n.min(4));
        let w = sequential_factor::<T, R>(g, p, rng);
        x += w.adjoint() * &w;
    }
    let clique = random_clique(g, n, rng);
    if !clique.is_empty() {
        let mut v = DVector::<T>::zeros(n);
        for &c in &clique {
            v[c] = T::sample(rng);
        }
        x += &v * v.adjoint();
    }
    PatternMatrix::from_raw(g.clone(), x)
}

/// Unit vector and a unit vector orthogonal to it in `F^2`.
fn unit_pair<T: Field, R: Rng + ?Sized>(rng: &mut R) -> (DVector<T>, DVector<T>) {
    let u = DVector::<T>::from_fn(2, |_, _| T::sample(rng));
    let u = u.unscale(u.norm());
    let perp = DVector::from_vec(vec![-u[1].conjugate(), u[0].conjugate()]);
    (u, perp)
}

/// Rank-two factor on an `F_k` pattern: pair `i` uses the lines spanned by a
/// random `u_i` and its orthogonal complement.
fn pair_lines_factor<T: Field, R: Rng + ?Sized>(
    n: usize,
    pairs: &[(Vec<usize>, Vec<usize>)],
    rng: &mut R,
) -> DMatrix<T> {
    let mut w = DMatrix::<T>::zeros(2, n);
    for (xs, ys) in pairs {
        let (u, perp) = unit_pair::<T, R>(rng);
        for &v in xs {
            w.set_column(v, &(&u * T::sample(rng)));
        }
        for &v in ys {
            w.set_column(v, &(&perp * T::sample(rng)));
        }
    }
    w
}

/// The pattern a class lives on, drawn from `rng` where it is random.
fn class_pattern<R: Rng>(class: ExtremalClass, rng: &mut R) -> Result<Graph, ConeError> {
    let err = |e: crate::catalog::CatalogError| ConeError::Dimension(e.to_string());
    Ok(match class {
        ExtremalClass::ChordalRank1 { n } => random_chordal(n, 4, rng),
        ExtremalClass::K2Unitary { side } => {
            build_family(&FamilySpec::F { x: vec![side, side], y: vec![side, side], z: 0 }).map_err(err)?.graph
        }
        ExtremalClass::K3Rank2 => build_family(&FamilySpec::K3 { z: 0 }).map_err(err)?.graph,
        ExtremalClass::CycleRank3 { n } => cycle(n).map_err(err)?,
        ExtremalClass::DRank3 { j } => d_block(j).map_err(err)?,
    })
}

fn candidate<T: Field, R: Rng>(class: ExtremalClass, g: &Graph, rng: &mut R) -> DMatrix<T> {
    let n = g.n();
    match class {
        ExtremalClass::ChordalRank1 { .. } => {
            let mut clique = random_clique(g, n, rng);
            // extend to a maximal clique
            for v in 0..n {
                if !clique.contains(&v) && clique.iter().all(|&c| g.has_edge(c, v)) {
                    clique.push(v);
                }
            }
            let mut w = DMatrix::<T>::zeros(1, n);
            for &c in &clique {
                w[(0, c)] = T::sample(rng);
            }
            w
        }
        ExtremalClass::K2Unitary { side } => {
            let s = side;
            let pairs = vec![((0..s).collect(), (s..2 * s).collect()), ((2 * s..3 * s).collect(), (3 * s..4 * s).collect())];
            pair_lines_factor::<T, R>(n, &pairs, rng)
        }
        ExtremalClass::K3Rank2 => {
            let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..3).map(|i| (vec![2 * i], vec![2 * i + 1])).collect();
            pair_lines_factor::<T, R>(n, &pairs, rng)
        }
        ExtremalClass::CycleRank3 { .. } | ExtremalClass::DRank3 { .. } => sequential_factor::<T, R>(g, 3, rng),
    }
}

/// A certified extremal of `class`, deterministic in `seed`.
pub fn random_extremal<T: Field>(class: ExtremalClass, seed: u64, tol: &Tolerance) -> Result<RandomExtremal<T>, ConeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = class_pattern(class, &mut rng)?;
    let target = class.target_rank();
    for attempt in 1..=MAX_ATTEMPTS {
        let w = candidate::<T, _>(class, &g, &mut rng);
        let x = PatternMatrix::from_raw(g.clone(), w.adjoint() * &w);
        if x.norm() == 0.0 {
            continue;
        }
        let report = match is_extremal(&x, tol) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if report.extremal && report.gram.p() == target {
            return Ok(RandomExtremal { matrix: x, attempts: attempt, rank: target, dimension: report.space.dim });
        }
    }
    Err(ConeError::SearchFailed { attempts: MAX_ATTEMPTS })
}
