use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operators::{check_psd, spectral, vec_inner, Hermitian, Matrix};
use crate::rng::{complex_normal_vec, stream};
use crate::scalar::{Real, C};
use crate::states::{Density, Pure};
use crate::tolerance::Tolerances;

/// Draws per substream. Chunk `j` always uses substream `j` of the seed.
pub const CHUNK: usize = 4096;

/// Zero-mean Gaussian vectors `z = M g` with `M M^+ = B` and `g` standard complex Gaussian.
#[derive(Clone)]
pub struct GaussianSampler<T: Real> {
    factor: Matrix<T>,
    seed: u64,
}

impl<T: Real> GaussianSampler<T> {
    pub fn new(b: &Density<T>, seed: u64) -> Self {
        Self {
            factor: sqrt_factor(b.hermitian()),
            seed,
        }
    }

    /// Accepts any PSD correlation operator.
    pub fn from_correlation(b: &Matrix<T>, seed: u64, tol: &Tolerances) -> Result<Self> {
        let h = Hermitian::new(b.clone(), T::lit(tol.hermitian))?;
        let check = check_psd(h.matrix(), T::lit(tol.positivity))?;
        if !check.is_psd {
            return Err(Error::NotPositive {
                min_eigenvalue: check.min_eigenvalue.to_f64().unwrap(),
            });
        }
        Ok(Self {
            factor: sqrt_factor(&h),
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.factor.dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn factor(&self) -> &Matrix<T> {
        &self.factor
    }

    /// Runs `f` on each chunk of the first `n` draws, in parallel; results in chunk order.
    pub fn map_chunks<R: Send>(&self, n: usize, f: impl Fn(&[Vec<C<T>>]) -> R + Sync) -> Vec<R> {
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|j| {
                let len = CHUNK.min(n - j * CHUNK);
                let mut rng = stream(self.seed, j as u64);
                let draws: Vec<Vec<C<T>>> = (0..len)
                    .map(|_| {
                        self.factor
                            .mat_vec(&complex_normal_vec(&mut rng, self.dim()))
                    })
                    .collect();
                f(&draws)
            })
            .collect()
    }

    /// The first `n` draws.
    pub fn draw(&self, n: usize) -> Vec<Vec<C<T>>> {
        self.map_chunks(n, <[Vec<C<T>>]>::to_vec).concat()
    }
}

impl<T: Real> std::fmt::Debug for GaussianSampler<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GaussianSampler(seed = {}, M = {:?})",
            self.seed, self.factor
        )
    }
}

/// `B^{1/2}`, dropping eigenvalues below `1e-12 * lambda_max`.
fn sqrt_factor<T: Real>(b: &Hermitian<T>) -> Matrix<T> {
    let sp = spectral(b);
    let cutoff = T::lit(1e-12) * sp.max_eigenvalue().max(T::zero());
    sp.map(|l| C::new(if l > cutoff { l.sqrt() } else { T::zero() }, T::zero()))
}

/// Self-normalized estimate `sum <z,Az> / sum ||z||^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEstimate<T> {
    pub mean: T,
    pub stderr: T,
}

/// Monte-Carlo estimate of `tr(A B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    /// Mean of `<z, A z>`.
    pub mean: T,
    /// Sample standard deviation over `sqrt(n)`.
    pub stderr: T,
    pub n: usize,
    pub seed: u64,
    pub ratio: RatioEstimate<T>,
}

fn check_dims<T: Real>(b: &Density<T>, a: &Hermitian<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dims(format!(
            "observable of dim {} for a state of dim {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

pub fn estimate_expectation<T: Real>(
    b: &Density<T>,
    a: &Hermitian<T>,
    n: usize,
    seed: u64,
) -> Result<Estimate<T>> {
    check_dims(b, a)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let sampler = GaussianSampler::new(b, seed);
    let pairs: Vec<(T, T)> = sampler
        .map_chunks(n, |zs| {
            zs.iter()
                .map(|z| (a.matrix().quadratic_form(z).re, vec_inner(z, z).re))
                .collect::<Vec<_>>()
        })
        .concat();
    let nf = T::count(n);
    let mean = pairs.iter().map(|p| p.0).sum::<T>() / nf;
    let var = pairs.iter().map(|p| (p.0 - mean).powi(2)).sum::<T>() / T::count(n - 1);
    let total_w = pairs.iter().map(|p| p.1).sum::<T>();
    let total_x = pairs.iter().map(|p| p.0).sum::<T>();
    let ratio = total_x / total_w;
    let ratio_var = pairs.iter().map(|p| (p.0 - ratio * p.1).powi(2)).sum::<T>();
    Ok(Estimate {
        mean,
        stderr: (var / nf).sqrt(),
        n,
        seed,
        ratio: RatioEstimate {
            mean: ratio,
            stderr: ratio_var.sqrt() / total_w,
        },
    })
}

/// Single-sample values `<z, A z> / ||z||^2`, skipping `z = 0`.
pub fn sample_ratios<T: Real>(
    b: &Density<T>,
    a: &Hermitian<T>,
    n: usize,
    seed: u64,
) -> Result<Vec<T>> {
    check_dims(b, a)?;
    let sampler = GaussianSampler::new(b, seed);
    Ok(sampler
        .map_chunks(n, |zs| {
            zs.iter()
                .filter_map(|z| {
                    let w = vec_inner(z, z).re;
                    (w > T::zero()).then(|| a.matrix().quadratic_form(z).re / w)
                })
                .collect::<Vec<_>>()
        })
        .concat())
}

/// `z -> P_{z / ||z||}`.
pub fn pushforward_phi<T: Real>(z: &[C<T>]) -> Result<Pure<T>> {
    Pure::normalized(z)
}

/// `(1/n) sum z z^+`, renormalized to unit trace.
pub fn empirical_state<T: Real>(b: &Density<T>, n: usize, seed: u64) -> Result<Density<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least 1 sample".into()));
    }
    let sampler = GaussianSampler::new(b, seed);
    let d = b.dim();
    let partial = sampler.map_chunks(n, |zs| {
        let mut acc = Matrix::zeros(d);
        for z in zs {
            acc += &Matrix::outer(z, z);
        }
        acc
    });
    let mut sum = Matrix::zeros(d);
    for m in &partial {
        sum += m;
    }
    let tr = sum.trace().re;
    if !(tr > T::zero()) {
        return Err(Error::NotNormalized { trace: 0.0 });
    }
    Ok(Density::new_unchecked(
        sum.scale_real(T::one() / tr).hermitian_part(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{pairing, spectral_of, trace_norm};
    use crate::rng::{random_hermitian, seeded};
    use crate::states::random_density;
    use crate::tolerance::DEFAULT;

    fn correlation(zs: &[Vec<C<f64>>]) -> Matrix<f64> {
        let mut acc = Matrix::zeros(zs[0].len());
        for z in zs {
            acc += &Matrix::outer(z, z);
        }
        acc.scale_real(1.0 / zs.len() as f64)
    }

    #[test]
    fn factor_squares_to_correlation() {
        let b = random_density::<f64>(4, 2, 1).unwrap();
        let s = GaussianSampler::new(&b, 0);
        let m = s.factor();
        assert!((&(m * &m.adjoint()) - b.matrix()).frobenius_norm() <= 1e-9);
    }

    #[test]
    fn rejects_indefinite_correlation() {
        let b = Matrix::from_real_diagonal(&[1.2, -0.2]);
        assert!(matches!(
            GaussianSampler::from_correlation(&b, 0, &DEFAULT),
            Err(Error::NotPositive { .. })
        ));
        let ok = Matrix::from_real_diagonal(&[2.0, 0.0]);
        assert!(GaussianSampler::from_correlation(&ok, 0, &DEFAULT).is_ok());
    }

    #[test]
    fn draws_are_deterministic_and_prefix_stable() {
        let b = random_density::<f64>(3, 3, 2).unwrap();
        let s = GaussianSampler::new(&b, 42);
        let a = s.draw(5000);
        assert_eq!(a, s.draw(5000));
        assert_eq!(&a[..100], &s.draw(100)[..]);
        assert_ne!(a[0], GaussianSampler::new(&b, 43).draw(1)[0]);
    }

    #[test]
    fn isotropic_mean_norm() {
        let s = GaussianSampler::new(&Density::<f64>::maximally_mixed(3), 3);
        let zs = s.draw(50_000);
        let mean: f64 = zs.iter().map(|z| vec_inner(z, z).re).sum::<f64>() / zs.len() as f64;
        assert!((mean - 1.0).abs() < 0.02);
    }

    #[test]
    fn empirical_correlation_converges() {
        let b = random_density::<f64>(4, 4, 4).unwrap();
        let zs = GaussianSampler::new(&b, 5).draw(100_000);
        assert!((&correlation(&zs) - b.matrix()).frobenius_norm() <= 0.02);
    }

    #[test]
    fn rank_one_draws_are_parallel() {
        let v = Pure::<f64>::normalized(&[C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(0.5, -0.5)])
            .unwrap();
        let b = Density::from_pure(&v);
        for z in GaussianSampler::new(&b, 6).draw(200) {
            let overlap = vec_inner(v.vector(), &z).norm_sqr();
            assert!((overlap - vec_inner(&z, &z).re).abs() <= 1e-12 * (1.0 + overlap));
        }
    }

    #[test]
    fn isotropic_estimate() {
        let a = random_hermitian::<f64, _>(&mut seeded(7), 3);
        let est = estimate_expectation(&Density::maximally_mixed(3), &a, 20_000, 8).unwrap();
        let exact = a.matrix().trace().re / 3.0;
        assert!((est.mean - exact).abs() <= 5.0 * est.stderr);
        assert!((est.ratio.mean - exact).abs() <= 5.0 * est.ratio.stderr);
    }

    #[test]
    fn identity_observable_gives_norm() {
        let b = random_density::<f64>(4, 4, 9).unwrap();
        let id = Hermitian::new(Matrix::identity(4), 1e-12).unwrap();
        let est = estimate_expectation(&b, &id, 50_000, 10).unwrap();
        assert!((est.mean - 1.0).abs() <= 5.0 * est.stderr);
        assert!((est.ratio.mean - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_estimate_matches_trace() {
        let b = random_density::<f64>(4, 4, 11).unwrap();
        let a = random_hermitian::<f64, _>(&mut seeded(12), 4);
        let est = estimate_expectation(&b, &a, 100_000, 13).unwrap();
        let exact = pairing(a.matrix(), b.matrix()).re;
        assert!((est.mean - exact).abs() <= 5.0 * est.stderr);
        assert_eq!(est.n, 100_000);
        assert!(
            estimate_expectation(&b, &random_hermitian::<f64, _>(&mut seeded(1), 3), 10, 0)
                .is_err()
        );
    }

    #[test]
    fn sample_ratios_bounded_by_spectrum() {
        let b = random_density::<f64>(4, 2, 14).unwrap();
        let a = random_hermitian::<f64, _>(&mut seeded(15), 4);
        let sp = spectral_of(a.matrix());
        let (lo, hi) = (sp.min_eigenvalue(), sp.max_eigenvalue());
        let r = sample_ratios(&b, &a, 10_000, 16).unwrap();
        assert_eq!(r.len(), 10_000);
        assert!(r.iter().all(|&x| x >= lo - 1e-12 && x <= hi + 1e-12));
    }

    #[test]
    fn pushforward_is_projective() {
        let e0 = pushforward_phi::<f64>(&[C::new(1.0, 0.0), C::new(0.0, 0.0)]).unwrap();
        assert_eq!(e0.projector(), Pure::basis(2, 0).projector());
        let z = [C::new(0.3, -1.0), C::new(2.0, 0.5)];
        let lam = C::new(-1.7, 0.4);
        let scaled: Vec<C<f64>> = z.iter().map(|x| x * lam).collect();
        let (p, q) = (
            pushforward_phi(&z).unwrap(),
            pushforward_phi(&scaled).unwrap(),
        );
        assert!((&p.projector() - &q.projector()).max_abs() <= 1e-14);
        assert!(pushforward_phi::<f64>(&[C::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn empirical_state_close_to_diagonal() {
        let b = Density::<f64>::new(Matrix::from_real_diagonal(&[0.7, 0.3]), &DEFAULT).unwrap();
        let e = empirical_state(&b, 100_000, 17).unwrap();
        assert!(trace_norm(&(e.matrix() - b.matrix())) <= 0.02);
        assert!((e.matrix().trace().re - 1.0).abs() <= 1e-12);
        assert!(check_psd(e.matrix(), 1e-12).unwrap().is_psd);
    }
}
