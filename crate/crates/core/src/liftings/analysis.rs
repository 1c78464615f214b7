use super::{
    check_hermiticity_preserving, extract_reference, factorization_residual,
    positivity_witness_search, trace_constraint_report, LiftingMap, Witness, WitnessConfig,
};
use crate::scalar::Real;
use crate::states::{BasisLabel, Density};
use crate::tolerance::{Tolerances, DEFAULT};

/// Thresholds for [`analyze`].
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeConfig {
    /// Max `||F(g) - F(g)^+||_F` accepted as Hermiticity preserving.
    pub hermiticity: f64,
    /// Max `||tr_E F(g) - g||_1` accepted as a right inverse of the partial trace.
    pub trace: f64,
    /// Eigenvalues of images above `-positivity` count as nonnegative.
    pub positivity: f64,
    /// Factorization residual above which the verdict is inconclusive.
    pub residual: f64,
    pub witness: WitnessConfig,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self::from_tolerances(&DEFAULT)
    }
}

impl AnalyzeConfig {
    pub fn from_tolerances(tol: &Tolerances) -> Self {
        Self {
            hermiticity: tol.hermitian,
            trace: tol.trace,
            positivity: tol.positivity,
            residual: tol.residual,
            witness: WitnessConfig::default(),
        }
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }
}

/// Outcome of [`analyze`].
#[derive(Clone, Debug)]
pub enum AnalysisVerdict<T: Real> {
    /// `F(rho) = rho (x) reference` up to `residual`.
    Product {
        reference: Density<T>,
        residual: T,
    },
    /// `tr_E F(g) != g` for the basis input `witness`.
    ViolatesTrace {
        max_deviation: T,
        witness: BasisLabel,
    },
    ViolatesHermiticity {
        max_deviation: T,
    },
    /// `F(witness.state)` has a negative eigenvalue.
    ViolatesPositivity(Witness<T>),
    /// Every hypothesis check passed yet the map does not factorize within
    /// tolerance. Only numerical trouble can produce this.
    Inconclusive {
        residual: T,
    },
}

impl<T: Real> AnalysisVerdict<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisVerdict::Product { .. } => "product",
            AnalysisVerdict::ViolatesTrace { .. } => "violates_trace",
            AnalysisVerdict::ViolatesHermiticity { .. } => "violates_hermiticity",
            AnalysisVerdict::ViolatesPositivity(_) => "violates_positivity",
            AnalysisVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, AnalysisVerdict::Product { .. })
    }

    /// True when one of the hypotheses (Hermiticity, trace, positivity) fails.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            AnalysisVerdict::ViolatesTrace { .. }
                | AnalysisVerdict::ViolatesHermiticity { .. }
                | AnalysisVerdict::ViolatesPositivity(_)
        )
    }
}

/// Hermiticity check, trace check, witness search, then reference extraction
/// and factorization residual.
pub fn analyze<T: Real>(f: &LiftingMap<T>, cfg: &AnalyzeConfig) -> AnalysisVerdict<T> {
    let herm = check_hermiticity_preserving(f);
    if herm > T::lit(cfg.hermiticity) {
        return AnalysisVerdict::ViolatesHermiticity {
            max_deviation: herm,
        };
    }
    let (trace_dev, label) = trace_constraint_report(f);
    if trace_dev > T::lit(cfg.trace) {
        return AnalysisVerdict::ViolatesTrace {
            max_deviation: trace_dev,
            witness: label,
        };
    }
    if let Some(w) = positivity_witness_search(f, T::lit(cfg.positivity), &cfg.witness) {
        return AnalysisVerdict::ViolatesPositivity(w);
    }
    let reference = extract_reference(f);
    let residual = factorization_residual(f, &reference);
    if residual <= T::lit(cfg.residual) {
        AnalysisVerdict::Product {
            reference: Density::new_unchecked(reference.hermitian_part()),
            residual,
        }
    } else {
        AnalysisVerdict::Inconclusive { residual }
    }
}
