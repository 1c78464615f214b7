use super::ProductMeasure;
use crate::error::{Error, Result};
use crate::operators::{kron, spectral, Matrix};
use crate::scalar::{Real, C};
use crate::states::{Density, Pure};
use crate::tolerance::Tolerances;

/// A finitely supported measure on pure states: `sum_i w_i P_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorMixture<T> {
    entries: Vec<(T, Pure<T>)>,
}

impl<T: Real> ProjectorMixture<T> {
    /// Requires nonnegative weights summing to 1 within `1e-12` and a common dimension.
    pub fn new(entries: Vec<(T, Pure<T>)>) -> Result<Self> {
        let tol = T::lit(1e-12);
        let d = entries
            .first()
            .map(|(_, p)| p.dim())
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        if entries.iter().any(|(_, p)| p.dim() != d) {
            return Err(Error::dims("projectors of different dimensions"));
        }
        if let Some((w, _)) = entries.iter().find(|(w, _)| !(*w >= T::zero())) {
            return Err(Error::Constraint(format!("negative weight {w}")));
        }
        let total: T = entries.iter().map(|(w, _)| *w).sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::NotNormalized {
                trace: total.to_f64().unwrap(),
            });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(T, Pure<T>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }
}

/// Eigen-decomposition of `W` as a mixture of its eigenprojectors with weight `> tol.rank`.
pub fn choquet_spectral<T: Real>(w: &Density<T>, tol: &Tolerances) -> ProjectorMixture<T> {
    let sp = spectral(w.hermitian());
    let cutoff = T::lit(tol.rank);
    let entries = sp
        .eigenvalues
        .iter()
        .zip(sp.eigenvectors)
        .filter(|(l, _)| **l > cutoff)
        .map(|(l, v)| (*l, Pure::new_unchecked(v)))
        .collect();
    ProjectorMixture { entries }
}

/// `sum_i w_i P_i`.
pub fn choquet_reconstruct<T: Real>(mu: &ProjectorMixture<T>) -> Density<T> {
    let mut out = Matrix::zeros(mu.dim());
    for (w, p) in &mu.entries {
        out += &p.projector().scale_real(*w);
    }
    Density::new_unchecked(out)
}

/// `P(e0), P(e1), P(e+), P(e-)` in `C^2` with coefficients `(1, 1, -1, -1)` of their vanishing combination.
pub fn dependent_projectors<T: Real>() -> ([Pure<T>; 4], [T; 4]) {
    let h = T::FRAC_1_SQRT_2();
    let c = |x: T| C::new(x, T::zero());
    let states = [
        Pure::basis(2, 0),
        Pure::basis(2, 1),
        Pure::new_unchecked(vec![c(h), c(h)]),
        Pure::new_unchecked(vec![c(h), c(-h)]),
    ];
    (states, [T::one(), T::one(), -T::one(), -T::one()])
}

/// One state with two Choquet measures on disjoint atoms.
#[derive(Clone, Debug)]
pub struct NonaffineWitness<T: Real> {
    pub state: Density<T>,
    pub first: ProjectorMixture<T>,
    pub second: ProjectorMixture<T>,
}

/// `Id/2 = (P0 + P1)/2 = (P+ + P-)/2`.
pub fn nonaffine_witness<T: Real>() -> NonaffineWitness<T> {
    let ([p0, p1, pp, pm], _) = dependent_projectors::<T>();
    let half = T::lit(0.5);
    NonaffineWitness {
        state: Density::maximally_mixed(2),
        first: ProjectorMixture {
            entries: vec![(half, p0), (half, p1)],
        },
        second: ProjectorMixture {
            entries: vec![(half, pp), (half, pm)],
        },
    }
}

/// `W = sum sigma[s][e] P_S^(s) (x) P_E^(e)`.
pub fn measure_lift_state<T: Real>(
    sigma: &ProductMeasure<T>,
    system: &[Pure<T>],
    environment: &[Pure<T>],
) -> Result<Density<T>> {
    if sigma.q() != system.len() || sigma.p() != environment.len() {
        return Err(Error::dims(format!(
            "{}x{} measure over {} system and {} environment projectors",
            sigma.q(),
            sigma.p(),
            system.len(),
            environment.len()
        )));
    }
    let (ds, de) = match (system.first(), environment.first()) {
        (Some(s), Some(e)) => (s.dim(), e.dim()),
        _ => return Err(Error::InvalidArgument("empty projector family".into())),
    };
    if system.iter().any(|s| s.dim() != ds) || environment.iter().any(|e| e.dim() != de) {
        return Err(Error::dims("projector families of mixed dimension"));
    }
    let ps: Vec<Matrix<T>> = system.iter().map(Pure::projector).collect();
    let pe: Vec<Matrix<T>> = environment.iter().map(Pure::projector).collect();
    let mut out = Matrix::zeros(ds * de);
    for (s, a) in ps.iter().enumerate() {
        for (e, b) in pe.iter().enumerate() {
            let w = *sigma.get(s, e);
            if w != T::zero() {
                out += &kron(a, b).scale_real(w);
            }
        }
    }
    Ok(Density::new_unchecked(out))
}
