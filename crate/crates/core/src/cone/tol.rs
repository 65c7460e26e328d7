use serde::Serialize;

/// Every numerical cutoff used by the cone routines.
///
/// Relative thresholds are applied as `value * max(1, scale)` where the scale
/// is the relevant norm or largest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    /// Eigenvalues at or below `rank * max(1, lambda_max)` count as zero.
    pub rank: f64,
    /// Allowed asymmetry and allowed magnitude at non-edges, relative to the norm.
    pub pattern: f64,
    /// Allowed negative eigenvalue, relative to `max(1, lambda_max)`.
    pub psd: f64,
    /// Singular values below `null_space * sigma_max` span the null space.
    /// Rounding in the constraint systems sits near `1e-14`; genuine
    /// constraints of small pieces can sit near `1e-10`, hence the lower default.
    pub null_space: f64,
    /// Principal-angle cosines at or above `1 - angle` mark an intersection.
    pub angle: f64,
    /// Allowed `|C* C - I|` for a block to count as unitary.
    pub unitary: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank: 1e-9, pattern: 1e-9, psd: 1e-9, null_space: 1e-12, angle: 1e-10, unitary: 1e-8 }
    }
}

impl Tolerance {
    /// Uses `tol` for the rank, pattern and PSD cutoffs and `tol / 1000` for
    /// the null-space cutoff; keeps the angle and unitarity defaults.
    pub fn with_base(tol: f64) -> Self {
        Tolerance { rank: tol, pattern: tol, psd: tol, null_space: tol * 1e-3, ..Tolerance::default() }
    }
}
