//! Measures: finite classical measures and their liftings, Choquet
//! decompositions of states, and Gaussian measures on `C^d`.

mod choquet;
mod gaussian;

pub use choquet::{
    choquet_reconstruct, choquet_spectral, dependent_projectors, measure_lift_state,
    nonaffine_witness, NonaffineWitness, ProjectorMixture,
};
pub use gaussian::{
    empirical_state, estimate_expectation, pushforward_phi, sample_ratios, Estimate,
    GaussianSampler, RatioEstimate, CHUNK,
};

use std::fmt::Debug;

use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::operators::Matrix;
use crate::scalar::C;

/// Weight type of a discrete measure: any exact or floating number type.
pub trait Weight: Num + Clone + PartialOrd + ToPrimitive + Debug {}

impl<W: Num + Clone + PartialOrd + ToPrimitive + Debug> Weight for W {}

/// Tolerance for the probability and marginal checks.
pub const MEASURE_TOL: f64 = 1e-12;

fn to_f64<W: Weight>(w: &W) -> f64 {
    w.to_f64().unwrap_or(f64::NAN)
}

fn check_finite<W: Weight>(weights: &[W]) -> Result<()> {
    match weights.iter().position(|w| !to_f64(w).is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

fn check_probability<W: Weight>(weights: &[W]) -> Result<()> {
    if let Some(i) = weights.iter().position(|w| to_f64(w) < -MEASURE_TOL) {
        return Err(Error::Constraint(format!(
            "negative weight {:?} at index {i}",
            weights[i]
        )));
    }
    let total: f64 = weights.iter().map(to_f64).sum();
    if (total - 1.0).abs() > MEASURE_TOL {
        return Err(Error::NotNormalized { trace: total });
    }
    Ok(())
}

fn sum<W: Weight>(it: impl Iterator<Item = W>) -> W {
    it.fold(W::zero(), |a, b| a + b)
}

/// A signed measure on `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<W> {
    weights: Vec<W>,
}

impl<W: Weight> DiscreteMeasure<W> {
    /// Signed measure with finite weights.
    pub fn signed(weights: Vec<W>) -> Result<Self> {
        check_finite(&weights)?;
        Ok(Self { weights })
    }

    /// Probability measure: weights `>= -1e-12` summing to 1 within `1e-12`.
    pub fn probability(weights: Vec<W>) -> Result<Self> {
        check_finite(&weights)?;
        check_probability(&weights)?;
        Ok(Self { weights })
    }

    pub fn dirac(n: usize, q: usize) -> Self {
        let mut weights = vec![W::zero(); n];
        weights[q] = W::one();
        Self { weights }
    }

    pub fn uniform(n: usize) -> Self {
        let count = sum((0..n).map(|_| W::one()));
        Self {
            weights: vec![W::one() / count; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn total(&self) -> W {
        sum(self.weights.iter().cloned())
    }

    pub fn is_probability(&self) -> bool {
        check_probability(&self.weights).is_ok()
    }

    /// Largest absolute weight difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| to_f64(&(a.clone() - b.clone())).abs())
            .fold(0.0, f64::max)
    }
}

/// A signed measure on `Q x P`, stored row-major as a `q x p` table.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMeasure<W> {
    q: usize,
    p: usize,
    weights: Vec<W>,
}

impl<W: Weight> ProductMeasure<W> {
    pub fn signed(q: usize, p: usize, weights: Vec<W>) -> Result<Self> {
        if weights.len() != q * p {
            return Err(Error::dims(format!(
                "{} weights for a {q}x{p} table",
                weights.len()
            )));
        }
        check_finite(&weights)?;
        Ok(Self { q, p, weights })
    }

    pub fn probability(q: usize, p: usize, weights: Vec<W>) -> Result<Self> {
        let m = Self::signed(q, p, weights)?;
        check_probability(&m.weights)?;
        Ok(m)
    }

    pub fn dirac(q: usize, p: usize, at: (usize, usize)) -> Self {
        let mut weights = vec![W::zero(); q * p];
        weights[at.0 * p + at.1] = W::one();
        Self { q, p, weights }
    }

    /// `upsilon x chi`.
    pub fn product(upsilon: &DiscreteMeasure<W>, chi: &DiscreteMeasure<W>) -> Self {
        let weights = upsilon
            .weights
            .iter()
            .flat_map(|a| chi.weights.iter().map(move |b| a.clone() * b.clone()))
            .collect();
        Self {
            q: upsilon.len(),
            p: chi.len(),
            weights,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn get(&self, q: usize, p: usize) -> &W {
        &self.weights[q * self.p + p]
    }

    /// Image under the projection onto `Q`.
    pub fn marginal(&self) -> DiscreteMeasure<W> {
        let weights = (0..self.q)
            .map(|i| sum((0..self.p).map(|j| self.get(i, j).clone())))
            .collect();
        DiscreteMeasure { weights }
    }

    /// Image under the projection onto `P`.
    pub fn marginal_p(&self) -> DiscreteMeasure<W> {
        let weights = (0..self.p)
            .map(|j| sum((0..self.q).map(|i| self.get(i, j).clone())))
            .collect();
        DiscreteMeasure { weights }
    }

    /// Numerical rank of the weight table (singular values above `1e-10 * sigma_max`);
    /// the measure is a product iff this is at most 1.
    pub fn product_rank(&self) -> usize {
        let (q, p) = (self.q, self.p);
        let dilation = Matrix::from_fn(q + p, |i, j| {
            let w = match (i < q, j < q) {
                (true, false) => to_f64(self.get(i, j - q)),
                (false, true) => to_f64(self.get(j, i - q)),
                _ => 0.0,
            };
            C::new(w, 0.0)
        });
        let sv: Vec<f64> = crate::operators::spectral_of(&dilation)
            .eigenvalues
            .into_iter()
            .filter(|&l| l > 0.0)
            .collect();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > 1e-10 * top).count()
    }

    pub fn is_product(&self) -> bool {
        self.product_rank() <= 1
    }

    fn add_scaled(&mut self, other: &Self, s: &W) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            *a = a.clone() + s.clone() * b.clone();
        }
    }
}

/// A map `q -> f(q)` with `marginal(f(q)) = delta_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftTable<W> {
    q: usize,
    p: usize,
    entries: Vec<ProductMeasure<W>>,
}

impl<W: Weight> LiftTable<W> {
    /// Validates every entry's marginal against `delta_q`.
    pub fn new(entries: Vec<ProductMeasure<W>>) -> Result<Self> {
        let q = entries.len();
        let p = entries.first().map_or(0, |e| e.p);
        for (i, e) in entries.iter().enumerate() {
            if e.q != q || e.p != p {
                return Err(Error::dims(format!(
                    "lift entry {i} is a {}x{} table, expected {q}x{p}",
                    e.q, e.p
                )));
            }
            let deviation = e.marginal().distance(&DiscreteMeasure::dirac(q, i));
            if deviation > MEASURE_TOL {
                return Err(Error::BadLiftEntry { q: i, deviation });
            }
        }
        Ok(Self { q, p, entries })
    }

    /// `f(q) = F(delta_q)` for a linear map `F` on measures over `Q`.
    pub fn from_linear_map(
        q: usize,
        f: impl Fn(&DiscreteMeasure<W>) -> ProductMeasure<W>,
    ) -> Result<Self> {
        Self::new((0..q).map(|i| f(&DiscreteMeasure::dirac(q, i))).collect())
    }

    /// `f(q) = delta_q x chi`.
    pub fn product(q: usize, chi: &DiscreteMeasure<W>) -> Self {
        let entries = (0..q)
            .map(|i| ProductMeasure::product(&DiscreteMeasure::dirac(q, i), chi))
            .collect();
        Self {
            q,
            p: chi.len(),
            entries,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn entries(&self) -> &[ProductMeasure<W>] {
        &self.entries
    }
}

/// `sum_q upsilon[q] f(q)`.
pub fn classical_lift<W: Weight>(
    f: &LiftTable<W>,
    upsilon: &DiscreteMeasure<W>,
) -> Result<ProductMeasure<W>> {
    if upsilon.len() != f.q {
        return Err(Error::dims(format!(
            "measure on {} points for a table over {}",
            upsilon.len(),
            f.q
        )));
    }
    let mut out = ProductMeasure {
        q: f.q,
        p: f.p,
        weights: vec![W::zero(); f.q * f.p],
    };
    for (entry, w) in f.entries.iter().zip(&upsilon.weights) {
        out.add_scaled(entry, w);
    }
    Ok(out)
}

/// `f(q) = delta_(q, p1)` on `q1_mask`, `delta_(q, p2)` elsewhere.
pub fn split_lift<W: Weight>(
    q1_mask: &[bool],
    p: usize,
    p1: usize,
    p2: usize,
) -> Result<LiftTable<W>> {
    if p1 == p2 {
        return Err(Error::InvalidArgument("split points must differ".into()));
    }
    if p1 >= p || p2 >= p {
        return Err(Error::IndexOutOfRange(format!(
            "split points ({p1}, {p2}) in a space of size {p}"
        )));
    }
    if !q1_mask.iter().any(|&b| b) || q1_mask.iter().all(|&b| b) {
        return Err(Error::InvalidArgument(
            "split mask must be nonempty and proper".into(),
        ));
    }
    let q = q1_mask.len();
    let entries = q1_mask
        .iter()
        .enumerate()
        .map(|(i, &first)| ProductMeasure::dirac(q, p, (i, if first { p1 } else { p2 })))
        .collect();
    Ok(LiftTable { q, p, entries })
}

#[cfg(test)]
mod tests;
