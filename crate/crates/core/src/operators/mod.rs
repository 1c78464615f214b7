//! Dense complex linear algebra on composite Hilbert spaces.
//!
//! Composite indices are system-major: the basis vector `e_s (x) f_e` of
//! `H_S (x) H_E` sits at index `s * dE + e`, which matches [`kron`] with the
//! system factor on the left.

mod eigen;
mod matrix;

pub use matrix::Matrix;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};
use crate::tolerance::DEFAULT;

/// A matrix known to be Hermitian within the tolerance it was checked against.
#[derive(Clone, PartialEq)]
pub struct Hermitian<T> {
    inner: Matrix<T>,
}

impl<T: Real> std::fmt::Debug for Hermitian<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian({:?})", self.inner)
    }
}

impl<T: Real> Hermitian<T> {
    /// Accepts `m` when `max |m[r][c] - conj(m[c][r])| <= tol`.
    pub fn new(m: Matrix<T>, tol: T) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if dev > tol || !dev.is_finite() {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { inner: m })
    }

    /// Checks against the default Hermiticity tolerance.
    pub fn try_from_matrix(m: Matrix<T>) -> Result<Self> {
        Self::new(m, T::lit(DEFAULT.hermitian))
    }

    /// Projects onto the Hermitian part without checking.
    pub fn from_hermitian_part(m: &Matrix<T>) -> Self {
        Self {
            inner: m.hermitian_part(),
        }
    }

    pub(crate) fn new_unchecked(m: Matrix<T>) -> Self {
        Self { inner: m }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }
}

impl<T> AsRef<Matrix<T>> for Hermitian<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.inner
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is scaled so
/// its largest-modulus component (the first one, on ties) is real positive.
#[derive(Clone, Debug)]
pub struct Spectral<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<Vec<C<T>>>,
}

impl<T: Real> Spectral<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_i f(lambda_i) v_i v_i^+`.
    pub fn map(&self, mut f: impl FnMut(T) -> C<T>) -> Matrix<T> {
        let n = self.dim();
        let mut out = Matrix::zeros(n);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(*lam);
            for r in 0..n {
                let vr = v[r] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[c].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map(|l| C::new(l, T::zero()))
    }

    pub fn min_eigenvalue(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// Number of eigenvalues above `rel * max(|lambda|)`.
    pub fn rank(&self, rel: T) -> usize {
        let top = self
            .eigenvalues
            .iter()
            .fold(T::zero(), |m, l| m.max(l.abs()));
        if top == T::zero() {
            return 0;
        }
        self.eigenvalues.iter().filter(|&&l| l > rel * top).count()
    }

    /// Largest deviation of `<v_i, v_j>` from `delta_ij`.
    pub fn orthonormality_error(&self) -> T {
        let mut err = T::zero();
        for (i, vi) in self.eigenvectors.iter().enumerate() {
            for (j, vj) in self.eigenvectors.iter().enumerate() {
                let ip = vec_inner(vi, vj);
                let target = if i == j { T::one() } else { T::zero() };
                err = err.max((ip - C::new(target, T::zero())).norm());
            }
        }
        err
    }
}

/// Spectral decomposition of a Hermitian operator.
pub fn spectral<T: Real>(a: &Hermitian<T>) -> Spectral<T> {
    spectral_of(a.matrix())
}

/// Spectral decomposition of the Hermitian part of `m`.
pub(crate) fn spectral_of<T: Real>(m: &Matrix<T>) -> Spectral<T> {
    let (values, mut vectors) = eigen::jacobi_hermitian(m);
    let pivots: Vec<usize> = vectors.iter_mut().map(|v| fix_phase(v)).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        values[j]
            .partial_cmp(&values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(pivots[i].cmp(&pivots[j]))
    });
    Spectral {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: order.iter().map(|&i| vectors[i].clone()).collect(),
    }
}

/// Rotates `v` so its largest-modulus component is real positive; returns that index.
fn fix_phase<T: Real>(v: &mut [C<T>]) -> usize {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if max == T::zero() {
        return 0;
    }
    let slack = max * T::epsilon().sqrt();
    let pivot = v.iter().position(|z| z.norm() >= max - slack).unwrap_or(0);
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
    v[pivot] = C::new(v[pivot].norm(), T::zero());
    pivot
}

/// Tensor product `A (x) B` with `A` on the leading factor.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (m, n) = (a.dim(), b.dim());
    Matrix::from_fn(m * n, |r, c| a[(r / n, c / n)] * b[(r % n, c % n)])
}

/// Kronecker product of two vectors, system-major.
pub fn kron_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

fn check_composite<T: Real>(w: &Matrix<T>, ds: usize, de: usize) -> Result<()> {
    if ds == 0 || de == 0 || w.dim() != ds * de {
        return Err(Error::dims(format!(
            "operator of dim {} does not factor as {ds} x {de}",
            w.dim()
        )));
    }
    Ok(())
}

/// Partial trace over the environment factor: `out[k][l] = sum_i W[k*dE+i][l*dE+i]`.
pub fn partial_trace_env<T: Real>(w: &Matrix<T>, ds: usize, de: usize) -> Result<Matrix<T>> {
    check_composite(w, ds, de)?;
    Ok(Matrix::from_fn(ds, |k, l| {
        (0..de).fold(czero(), |acc, i| acc + w[(k * de + i, l * de + i)])
    }))
}

/// Partial trace over the system factor: `out[i][j] = sum_k W[k*dE+i][k*dE+j]`.
pub fn partial_trace_sys<T: Real>(w: &Matrix<T>, ds: usize, de: usize) -> Result<Matrix<T>> {
    check_composite(w, ds, de)?;
    Ok(Matrix::from_fn(de, |i, j| {
        (0..ds).fold(czero(), |acc, k| acc + w[(k * de + i, k * de + j)])
    }))
}

/// Outcome of a positivity test.
#[derive(Clone, Debug)]
pub struct PsdCheck<T> {
    pub is_psd: bool,
    pub min_eigenvalue: T,
    /// Unit eigenvector for `min_eigenvalue`.
    pub witness: Vec<C<T>>,
}

/// Tests `lambda_min(A) >= -tol`.
pub fn is_psd<T: Real>(a: &Hermitian<T>, tol: T) -> PsdCheck<T> {
    let sp = spectral(a);
    let min_eigenvalue = sp.min_eigenvalue();
    PsdCheck {
        is_psd: min_eigenvalue >= -tol,
        min_eigenvalue,
        witness: sp.eigenvectors.last().cloned().unwrap_or_default(),
    }
}

/// Same as [`is_psd`] for a raw matrix, failing when it is not Hermitian within `DEFAULT.hermitian`.
pub fn check_psd<T: Real>(m: &Matrix<T>, tol: T) -> Result<PsdCheck<T>> {
    let h = Hermitian::new(m.clone(), T::lit(DEFAULT.hermitian))?;
    Ok(is_psd(&h, tol))
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.dim();
    let scale = a.max_abs();
    if a.hermitian_deviation() <= T::epsilon() * scale {
        return spectral_of(a).eigenvalues.iter().map(|l| l.abs()).sum();
    }
    // Hermitian dilation [[0, A], [A^+, 0]] has eigenvalues +-sigma_i.
    let dil = Matrix::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, false) => a[(r, c - n)],
        (false, true) => a[(c, r - n)].conj(),
        _ => czero(),
    });
    let s: T = spectral_of(&dil).eigenvalues.iter().map(|l| l.abs()).sum();
    s / T::lit(2.0)
}

/// Duality pairing `<A, W> = tr(A W)`, bilinear.
pub fn pairing<T: Real>(a: &Matrix<T>, w: &Matrix<T>) -> C<T> {
    a.check_same_dim(w);
    let n = a.dim();
    let mut acc = czero();
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * w[(c, r)];
        }
    }
    acc
}

/// `<u, v>`, antilinear in `u`.
pub fn vec_inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter()
        .zip(v)
        .fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn vec_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

#[cfg(test)]
mod tests;
