//! Randomized search for a counterexample to the factorization of liftings.
//!
//! Each trial perturbs a random product lifting `F_D` by `eps * Delta`, where
//! `Delta` preserves Hermiticity and is annihilated by the partial trace, so
//! `F_D + eps * Delta` keeps every hypothesis except possibly positivity.
//! The analyzer must then either find a positivity witness or report a
//! product; an inconclusive verdict is a falsifier.

use rand::Rng;
use rayon::prelude::*;

use super::{analyze, product_lifting, AnalysisVerdict, AnalyzeConfig, LiftingMap};
use crate::operators::{kron, partial_trace_env, Matrix};
use crate::rng::{random_matrix, stream};
use crate::scalar::{Real, C};
use crate::states::random_density_with;
use crate::superop::SuperOp;

/// A random Hermiticity-preserving map with `tr_E Delta(X) = 0`, unit Frobenius norm
/// (zero when `de == 1`).
///
/// `Delta_0(X) = sum_j s_j K_j (X (x) Id) K_j^+` with Ginibre `K_j` and signs
/// alternating, then `Delta(X) = Delta_0(X) - tr_E Delta_0(X) (x) Id / de`.
pub fn trace_annihilated_perturbation<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    ds: usize,
    de: usize,
    terms: usize,
) -> SuperOp<T> {
    let n = ds * de;
    let ks: Vec<Matrix<T>> = (0..terms).map(|_| random_matrix(rng, n)).collect();
    let id_e = Matrix::<T>::identity(de);
    let inv_de = T::one() / T::count(de);
    let op = SuperOp::from_map(ds, n, |x| {
        let w = kron(x, &id_e);
        let mut out = Matrix::zeros(n);
        for (j, k) in ks.iter().enumerate() {
            let term = &(k * &w) * &k.adjoint();
            if j % 2 == 0 {
                out += &term;
            } else {
                out = &out - &term;
            }
        }
        let reduced = partial_trace_env(&out, ds, de).expect("composite dim");
        &out - &kron(&reduced, &id_e).scale_real(inv_de)
    });
    let norm = op.frobenius_norm();
    if norm == T::zero() {
        return op;
    }
    op.scale(C::new(T::one() / norm, T::zero()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NogoConfig {
    pub ds: usize,
    pub de: usize,
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    /// Number of `K_j` terms in each perturbation.
    pub terms: usize,
    pub analyze: AnalyzeConfig,
}

impl NogoConfig {
    pub fn new(ds: usize, de: usize, trials: usize, eps: f64, seed: u64) -> Self {
        Self {
            ds,
            de,
            trials,
            eps,
            seed,
            terms: 4,
            analyze: AnalyzeConfig::default(),
        }
    }
}

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct NogoTrial {
    pub index: usize,
    pub verdict: &'static str,
    /// Violation size: min eigenvalue, trace or Hermiticity deviation, or residual.
    pub value: f64,
    /// Description of the positivity witness, when one was found.
    pub witness: Option<String>,
    /// Whether the witness belongs to the structured family.
    pub structured_witness: bool,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct NogoSummary {
    pub trials: Vec<NogoTrial>,
    pub product: usize,
    pub violates_trace: usize,
    pub violates_hermiticity: usize,
    pub violates_positivity: usize,
    /// Inconclusive verdicts: every check passed but the map did not factorize.
    pub falsifiers: usize,
}

/// Builds the lifting for trial `index`.
pub fn nogo_trial_lifting<T: Real>(cfg: &NogoConfig, index: usize) -> LiftingMap<T> {
    let mut rng = stream(cfg.seed, index as u64);
    let d = random_density_with::<T, _>(&mut rng, cfg.de, cfg.de).expect("full rank");
    let base = product_lifting(&d, cfg.ds);
    let delta = trace_annihilated_perturbation::<T, _>(&mut rng, cfg.ds, cfg.de, cfg.terms);
    base.perturbed(&delta, T::lit(cfg.eps))
}

pub fn run_nogo<T: Real>(cfg: &NogoConfig) -> NogoSummary {
    let trials: Vec<NogoTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|index| {
            let f = nogo_trial_lifting::<T>(cfg, index);
            let verdict = analyze(&f, &cfg.analyze);
            let to64 = |x: T| x.to_f64().unwrap();
            let (value, witness, structured_witness) = match &verdict {
                AnalysisVerdict::Product { residual, .. } => (to64(*residual), None, false),
                AnalysisVerdict::ViolatesTrace { max_deviation, .. }
                | AnalysisVerdict::ViolatesHermiticity { max_deviation } => {
                    (to64(*max_deviation), None, false)
                }
                AnalysisVerdict::ViolatesPositivity(w) => (
                    to64(w.min_eigenvalue),
                    Some(w.input.to_string()),
                    w.input.is_structured(),
                ),
                AnalysisVerdict::Inconclusive { residual } => (to64(*residual), None, false),
            };
            NogoTrial {
                index,
                verdict: verdict.kind(),
                value,
                witness,
                structured_witness,
            }
        })
        .collect();

    let mut summary = NogoSummary::default();
    for t in &trials {
        match t.verdict {
            "product" => summary.product += 1,
            "violates_trace" => summary.violates_trace += 1,
            "violates_hermiticity" => summary.violates_hermiticity += 1,
            "violates_positivity" => summary.violates_positivity += 1,
            _ => summary.falsifiers += 1,
        }
    }
    summary.trials = trials;
    summary
}
