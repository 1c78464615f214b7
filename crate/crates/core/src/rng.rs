//! Seeded random generation.
//!
//! All randomness flows through ChaCha20 (`rand_chacha::ChaCha20Rng`), a
//! counter-based generator whose output for a given `(seed, stream)` pair is
//! identical on every platform. Independent substreams are obtained with
//! [`stream`], which selects the ChaCha stream id instead of reseeding.
//! Variates are drawn in `f64` and then cast, so `f32` and `f64` runs see
//! the same underlying samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::operators::{spectral, Hermitian, Matrix};
use crate::scalar::{Real, C};

pub type Rng64 = ChaCha20Rng;

/// Generator for `seed`, stream 0.
pub fn seeded(seed: u64) -> Rng64 {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Substream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> Rng64 {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Standard complex Gaussian: real and imaginary parts independent with variance 1/2.
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C::new(T::lit(re * s), T::lit(im * s))
}

pub fn complex_normal_vec<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C<T>> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix<T> {
    Matrix::from_fn(dim, |_, _| complex_normal(rng))
}

/// Hermitian part of a Ginibre matrix.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Hermitian<T> {
    Hermitian::from_hermitian_part(&random_matrix(rng, dim))
}

/// `exp(-i H)` for a random Hermitian `H`.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix<T> {
    let h = random_hermitian::<T, R>(rng, dim);
    let pi = T::PI();
    spectral(&h).map(|l| {
        let a = l * pi;
        C::new(a.cos(), -a.sin())
    })
}

/// Uniform real in `[lo, hi)`.
pub fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}
