//! Linear liftings `L(C^ds) -> L(C^ds (x) C^de)`: construction, constraint
//! checks and the factorization analyzer.
//!
//! A lifting that maps states to states and is a right inverse of the
//! partial trace always has the form `rho -> rho (x) D`. The analyzer makes
//! that constructive: it checks each hypothesis, searches the positive
//! inputs `g^kk`, `g^kl`, `g*^kl` and the boundary families
//! `g^kl + t g^kk + p g^ll`, `(1 + t)(1 + p) = 1`, for a negative image, and
//! otherwise extracts the reference state from the `(0,0)`-component of
//! `F(g^00)`.

mod analysis;
mod components;
mod diagnostics;
pub mod nogo;
mod pq;
mod witness;

pub use analysis::{analyze, AnalysisVerdict, AnalyzeConfig};
pub use components::Components;
pub use diagnostics::{proof_step_diagnostics, PairDiagnostics, StepReport};
pub use pq::{brute_force_pq, lemma_pq, PqGrid};
pub use witness::{positivity_witness_search, Witness, WitnessConfig, WitnessInput};

use crate::error::{Error, Result};
use crate::operators::{kron, partial_trace_env, trace_norm, Matrix};
use crate::scalar::{Real, C};
use crate::states::{hermitian_basis, BasisLabel, Density};
use crate::superop::SuperOp;
use crate::tolerance::Tolerances;

/// Linear map `L(C^ds) -> L(C^ds (x) C^de)` on column-stacked operators.
#[derive(Clone, PartialEq)]
pub struct LiftingMap<T> {
    ds: usize,
    de: usize,
    op: SuperOp<T>,
}

impl<T: Real> LiftingMap<T> {
    pub fn from_superop(ds: usize, de: usize, op: SuperOp<T>) -> Result<Self> {
        if op.din() != ds || op.dout() != ds * de {
            return Err(Error::dims(format!(
                "superoperator {} -> {} does not match lifting dims {ds}, {de}",
                op.din(),
                op.dout()
            )));
        }
        Ok(Self { ds, de, op })
    }

    /// Tabulates an arbitrary linear map.
    pub fn from_map(ds: usize, de: usize, f: impl FnMut(&Matrix<T>) -> Matrix<T>) -> Self {
        Self {
            ds,
            de,
            op: SuperOp::from_map(ds, ds * de, f),
        }
    }

    pub fn ds(&self) -> usize {
        self.ds
    }

    pub fn de(&self) -> usize {
        self.de
    }

    pub fn superop(&self) -> &SuperOp<T> {
        &self.op
    }

    pub fn into_superop(self) -> SuperOp<T> {
        self.op
    }

    pub fn apply(&self, x: &Matrix<T>) -> Matrix<T> {
        self.op.apply(x)
    }

    /// Components of `F(x)`.
    pub fn components(&self, x: &Matrix<T>) -> Components<T> {
        Components::split(&self.apply(x), self.ds, self.de)
            .expect("lifting output has composite dim")
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            ds: self.ds,
            de: self.de,
            op: self.op.scale(C::new(s, T::zero())),
        }
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &Self, alpha: T) -> Self {
        assert!(
            self.ds == other.ds && self.de == other.de,
            "lifting dims differ"
        );
        let a = self.op.scale(C::new(alpha, T::zero()));
        let b = other.op.scale(C::new(T::one() - alpha, T::zero()));
        Self {
            ds: self.ds,
            de: self.de,
            op: &a + &b,
        }
    }

    /// `self + eps * delta`, where `delta` shares the lifting dims.
    pub fn perturbed(&self, delta: &SuperOp<T>, eps: T) -> Self {
        Self {
            ds: self.ds,
            de: self.de,
            op: &self.op + &delta.scale(C::new(eps, T::zero())),
        }
    }
}

impl<T: Real> std::fmt::Debug for LiftingMap<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LiftingMap(ds = {}, de = {}, {:?})",
            self.ds, self.de, self.op
        )
    }
}

/// `rho -> rho (x) D`.
pub fn product_lifting<T: Real>(reference: &Density<T>, ds: usize) -> LiftingMap<T> {
    let d = reference.matrix().clone();
    LiftingMap::from_map(ds, reference.dim(), |x| kron(x, &d))
}

/// `rho -> sum_n K_n (rho (x) D) K_n^+`, requiring `sum_n K_n^+ K_n = Id`.
pub fn kraus_lifting<T: Real>(
    kraus: &[Matrix<T>],
    reference: &Density<T>,
    ds: usize,
    tol: &Tolerances,
) -> Result<LiftingMap<T>> {
    let de = reference.dim();
    let n = ds * de;
    if kraus.is_empty() {
        return Err(Error::InvalidArgument("empty Kraus family".into()));
    }
    if let Some(k) = kraus.iter().find(|k| k.dim() != n) {
        return Err(Error::dims(format!(
            "Kraus operator of dim {} on a {n}-dim space",
            k.dim()
        )));
    }
    let mut sum = Matrix::zeros(n);
    for k in kraus {
        sum += &(&k.adjoint() * k);
    }
    let deviation = (&sum - &Matrix::identity(n)).frobenius_norm();
    if deviation > T::lit(tol.kraus) {
        return Err(Error::KrausNormalization {
            deviation: deviation.to_f64().unwrap(),
        });
    }
    let d = reference.matrix().clone();
    let adj: Vec<Matrix<T>> = kraus.iter().map(Matrix::adjoint).collect();
    Ok(LiftingMap::from_map(ds, de, |x| {
        let w = kron(x, &d);
        let mut out = Matrix::zeros(n);
        for (k, kd) in kraus.iter().zip(&adj) {
            out += &(&(k * &w) * kd);
        }
        out
    }))
}

/// Worst trace-constraint violation over the basis inputs, with the offending input.
pub fn trace_constraint_report<T: Real>(f: &LiftingMap<T>) -> (T, BasisLabel) {
    let mut worst = (T::zero(), BasisLabel::G(0, 0));
    for (label, g) in hermitian_basis::<T>(f.ds) {
        let reduced = partial_trace_env(&f.apply(&g), f.ds, f.de).expect("composite dim");
        let dev = trace_norm(&(&reduced - &g));
        if dev > worst.0 {
            worst = (dev, label);
        }
    }
    worst
}

/// `max_g || tr_E F(g) - g ||_1` over the basis `{g^kl, g*^kl}`.
pub fn check_trace_constraint<T: Real>(f: &LiftingMap<T>) -> T {
    trace_constraint_report(f).0
}

/// `max_g || F(g) - F(g)^+ ||_F` over the (Hermitian) basis inputs.
pub fn check_hermiticity_preserving<T: Real>(f: &LiftingMap<T>) -> T {
    hermitian_basis::<T>(f.ds)
        .iter()
        .map(|(_, g)| {
            let w = f.apply(g);
            (&w - &w.adjoint()).frobenius_norm()
        })
        .fold(T::zero(), T::max)
}

/// The `(0,0)`-component of `F(g^00)`.
pub fn extract_reference<T: Real>(f: &LiftingMap<T>) -> Matrix<T> {
    let g00 = crate::states::basis_g::<T>(0, 0, f.ds).expect("ds >= 1");
    f.components(&g00).block(0, 0).clone()
}

/// `max_g || F(g) - g (x) D ||_F` over the basis inputs.
pub fn factorization_residual<T: Real>(f: &LiftingMap<T>, reference: &Matrix<T>) -> T {
    hermitian_basis::<T>(f.ds)
        .iter()
        .map(|(_, g)| (&f.apply(g) - &kron(g, reference)).frobenius_norm())
        .fold(T::zero(), T::max)
}
