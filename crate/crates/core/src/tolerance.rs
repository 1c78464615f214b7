//! Central tolerance settings.

/// Absolute tolerances used by predicates and constructors.
///
/// The defaults are tuned for `f64` at composite dimensions up to 64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max `|A[r][c] - conj(A[c][r])|` accepted as Hermitian.
    pub hermitian: f64,
    /// Reconstruction and orthonormality tolerance of spectral decompositions.
    pub spectral: f64,
    /// Eigenvalues above `-positivity` count as nonnegative.
    pub positivity: f64,
    /// `|tr - 1|` accepted for density operators.
    pub trace: f64,
    /// `|norm - 1|` accepted for pure state vectors.
    pub norm: f64,
    /// Relative eigenvalue cutoff used for numerical rank.
    pub rank: f64,
    /// Kraus normalization tolerance, Frobenius norm of `sum K^+K - Id`.
    pub kraus: f64,
    /// Residual above which the lifting analyzer reports an inconclusive verdict.
    pub residual: f64,
}

pub const DEFAULT: Tolerances = Tolerances {
    hermitian: 1e-9,
    spectral: 1e-9,
    positivity: 1e-9,
    trace: 1e-9,
    norm: 1e-9,
    rank: 1e-12,
    kraus: 1e-9,
    residual: 1e-8,
};

impl Default for Tolerances {
    fn default() -> Self {
        DEFAULT
    }
}
