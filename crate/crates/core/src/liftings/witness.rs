use rayon::prelude::*;

use super::LiftingMap;
use crate::operators::{spectral_of, Matrix};
use crate::rng::stream;
use crate::scalar::{Real, C};
use crate::states::{basis_labels, random_density_with, BasisLabel, Density};

/// Search grid for [`positivity_witness_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessConfig {
    /// Points of the boundary grid per pair `k < l`.
    pub t_points: usize,
    /// Smallest `1 + t`; the grid runs over `t` in `[-1 + t_offset, t_max]`.
    pub t_offset: f64,
    pub t_max: f64,
    /// Seeded random states tried after the structured family.
    pub extra: usize,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            t_points: 40,
            t_offset: 1e-3,
            t_max: 1e3,
            extra: 100,
            seed: 0x5eed,
        }
    }
}

impl WitnessConfig {
    /// `t` values, logarithmic in `1 + t`.
    pub fn t_grid(&self) -> Vec<f64> {
        let lo = self.t_offset.ln();
        let hi = (1.0 + self.t_max).ln();
        let n = self.t_points.max(2);
        (0..n)
            .map(|i| {
                let u = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
                u - 1.0
            })
            .collect()
    }
}

/// A positive input tried by the witness search.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessInput {
    /// One of `g^kl`, `g*^kl`.
    Basis(BasisLabel),
    /// `g^kl + t g^kk + p g^ll` (`star = false`) or `g*^kl + t g^kk + p g^ll`,
    /// with `p = 1 / (1 + t) - 1`.
    Boundary {
        k: usize,
        l: usize,
        t: f64,
        p: f64,
        star: bool,
    },
    /// The `index`-th seeded random state.
    Random { index: usize },
}

impl WitnessInput {
    /// True for inputs drawn from the structured family (basis and boundary curves).
    pub fn is_structured(&self) -> bool {
        !matches!(self, WitnessInput::Random { .. })
    }
}

impl std::fmt::Display for WitnessInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessInput::Basis(lab) => write!(f, "{lab}"),
            WitnessInput::Boundary { k, l, t, p, star } => {
                let g = if *star { "g*" } else { "g" };
                write!(f, "{g}({k},{l}) + {t:e} g({k},{k}) + {p:e} g({l},{l})")
            }
            WitnessInput::Random { index } => write!(f, "random#{index}"),
        }
    }
}

/// A state whose image under the lifting is not positive.
#[derive(Clone, Debug)]
pub struct Witness<T: Real> {
    pub input: WitnessInput,
    /// The normalized input `x / tr(x)`.
    pub state: Density<T>,
    /// Smallest eigenvalue of the (Hermitian part of the) image.
    pub min_eigenvalue: T,
    pub eigenvector: Vec<C<T>>,
}

fn boundary_input<T: Real>(
    d: usize,
    k: usize,
    l: usize,
    t: f64,
    star: bool,
) -> (WitnessInput, Matrix<T>) {
    let p = 1.0 / (1.0 + t) - 1.0;
    let base = if star {
        BasisLabel::GStar(k, l)
    } else {
        BasisLabel::G(k, l)
    };
    let mut x: Matrix<T> = base.matrix(d).expect("k < l < d");
    x[(k, k)] += C::new(T::lit(t), T::zero());
    x[(l, l)] += C::new(T::lit(p), T::zero());
    (WitnessInput::Boundary { k, l, t, p, star }, x)
}

/// Candidate inputs in canonical order.
fn candidates<T: Real>(d: usize, cfg: &WitnessConfig) -> Vec<(WitnessInput, Matrix<T>)> {
    let mut out: Vec<(WitnessInput, Matrix<T>)> = basis_labels(d)
        .into_iter()
        .map(|lab| {
            (
                WitnessInput::Basis(lab),
                lab.matrix(d).expect("canonical label"),
            )
        })
        .collect();
    let grid = cfg.t_grid();
    for k in 0..d {
        for l in (k + 1)..d {
            for &t in &grid {
                out.push(boundary_input(d, k, l, t, false));
                out.push(boundary_input(d, k, l, t, true));
            }
        }
    }
    let mut rng = stream(cfg.seed, 0);
    for index in 0..cfg.extra {
        let rank = 1 + index % d;
        let rho = random_density_with::<T, _>(&mut rng, d, rank).expect("rank in range");
        out.push((WitnessInput::Random { index }, rho.into_matrix()));
    }
    out
}

/// First input (in canonical order) whose normalized image has an eigenvalue below `-tol`.
///
/// The structured inputs are all `g^kk`, `g^kl`, `g*^kl`, then for each pair
/// `k < l` the curves `g^kl + t g^kk + p g^ll` and `g*^kl + t g^kk + p g^ll`
/// on the boundary `(1 + t)(1 + p) = 1`, then `cfg.extra` random states.
/// Evaluation runs in parallel; the reported witness does not depend on
/// scheduling.
pub fn positivity_witness_search<T: Real>(
    f: &LiftingMap<T>,
    tol: T,
    cfg: &WitnessConfig,
) -> Option<Witness<T>> {
    let cands = candidates::<T>(f.ds(), cfg);
    cands.into_par_iter().find_map_first(|(input, x)| {
        let tr = x.trace().re;
        let image = f.apply(&x).scale_real(T::one() / tr);
        let sp = spectral_of(&image);
        let min = sp.min_eigenvalue();
        if min < -tol {
            Some(Witness {
                input,
                state: Density::new_unchecked(x.scale_real(T::one() / tr)),
                min_eigenvalue: min,
                eigenvector: sp.eigenvectors.last().cloned().unwrap_or_default(),
            })
        } else {
            None
        }
    })
}
