//! Density operators, pure states, the positive operator basis
//! `{g^kl, g*^kl}` and purification.

use crate::error::{Error, Result};
use crate::operators::{is_psd, kron_vec, spectral, vec_norm, Hermitian, Matrix};
use crate::rng::{complex_normal, seeded};
use crate::scalar::{ci, cone, czero, Real, C};
use crate::tolerance::{Tolerances, DEFAULT};

/// Positive semidefinite operator of unit trace.
#[derive(Clone, PartialEq)]
pub struct Density<T> {
    inner: Hermitian<T>,
}

impl<T: Real> Density<T> {
    /// Validates Hermiticity, positivity and unit trace against `tol`.
    pub fn new(m: Matrix<T>, tol: &Tolerances) -> Result<Self> {
        let h = Hermitian::new(m, T::lit(tol.hermitian))?;
        let chk = is_psd(&h, T::lit(tol.positivity));
        if !chk.is_psd {
            return Err(Error::NotPositive {
                min_eigenvalue: chk.min_eigenvalue.to_f64().unwrap(),
            });
        }
        let tr = h.matrix().trace();
        if (tr - cone()).norm() > T::lit(tol.trace) {
            return Err(Error::NotNormalized {
                trace: tr.re.to_f64().unwrap(),
            });
        }
        Ok(Self { inner: h })
    }

    pub fn try_from_matrix(m: Matrix<T>) -> Result<Self> {
        Self::new(m, &DEFAULT)
    }

    pub(crate) fn new_unchecked(m: Matrix<T>) -> Self {
        Self {
            inner: Hermitian::new_unchecked(m),
        }
    }

    /// Maximally mixed state `Id / d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::new_unchecked(Matrix::identity(d).scale_real(T::one() / T::count(d)))
    }

    pub fn from_pure(p: &Pure<T>) -> Self {
        Self::new_unchecked(p.projector())
    }

    pub fn matrix(&self) -> &Matrix<T> {
        self.inner.matrix()
    }

    pub fn hermitian(&self) -> &Hermitian<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner.into_matrix()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        self.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl<T: Real> std::fmt::Debug for Density<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Density({:?})", self.matrix())
    }
}

impl<T> AsRef<Matrix<T>> for Density<T> {
    fn as_ref(&self) -> &Matrix<T> {
        self.inner.as_ref()
    }
}

/// Unit vector representing the pure state `P_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pure<T> {
    vector: Vec<C<T>>,
}

impl<T: Real> Pure<T> {
    /// Accepts `v` when `| ||v|| - 1 | <= tol.norm`.
    pub fn new(vector: Vec<C<T>>, tol: &Tolerances) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::dims("pure state of dimension 0"));
        }
        let n = vec_norm(&vector);
        if !n.is_finite() || (n - T::one()).abs() > T::lit(tol.norm) {
            return Err(Error::InvalidArgument(format!("state vector has norm {n}")));
        }
        Ok(Self { vector })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(v: &[C<T>]) -> Result<Self> {
        let n = vec_norm(v);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            vector: v.iter().map(|&z| z / n).collect(),
        })
    }

    /// Canonical basis vector `e_i` in `C^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut vector = vec![czero(); d];
        vector[i] = cone();
        Self { vector }
    }

    pub(crate) fn new_unchecked(vector: Vec<C<T>>) -> Self {
        Self { vector }
    }

    pub fn vector(&self) -> &[C<T>] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn projector(&self) -> Matrix<T> {
        Matrix::outer(&self.vector, &self.vector)
    }
}

/// Label of an element of the positive operator basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `g^kl`, `k <= l`.
    G(usize, usize),
    /// `g*^kl`, `k < l`.
    GStar(usize, usize),
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisLabel::G(k, l) => write!(f, "g({k},{l})"),
            BasisLabel::GStar(k, l) => write!(f, "g*({k},{l})"),
        }
    }
}

impl BasisLabel {
    pub fn matrix<T: Real>(&self, d: usize) -> Result<Matrix<T>> {
        match *self {
            BasisLabel::G(k, l) => basis_g(k, l, d),
            BasisLabel::GStar(k, l) => basis_g_star(k, l, d),
        }
    }
}

/// `g^kl = (e_k + e_l)(e_k + e_l)^+` for `k < l`, `E_kk` for `k == l` (0-based).
pub fn basis_g<T: Real>(k: usize, l: usize, d: usize) -> Result<Matrix<T>> {
    if k > l || l >= d {
        return Err(Error::IndexOutOfRange(format!(
            "g({k},{l}) needs k <= l < d = {d}"
        )));
    }
    let mut m = Matrix::zeros(d);
    m[(k, k)] = cone();
    m[(l, l)] = cone();
    m[(k, l)] = cone();
    m[(l, k)] = cone();
    Ok(m)
}

/// `g*^kl = (e_k - i e_l)(e_k - i e_l)^+`, `k < l` (0-based).
pub fn basis_g_star<T: Real>(k: usize, l: usize, d: usize) -> Result<Matrix<T>> {
    if k >= l || l >= d {
        return Err(Error::IndexOutOfRange(format!(
            "g*({k},{l}) needs k < l < d = {d}"
        )));
    }
    let mut m = Matrix::zeros(d);
    m[(k, k)] = cone();
    m[(l, l)] = cone();
    m[(k, l)] = ci();
    m[(l, k)] = -ci::<T>();
    Ok(m)
}

/// Labels of the `d^2` basis elements in canonical order:
/// for each `k <= l`, `g^kl` followed by `g*^kl` when `k < l`.
pub fn basis_labels(d: usize) -> Vec<BasisLabel> {
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in k..d {
            out.push(BasisLabel::G(k, l));
            if k < l {
                out.push(BasisLabel::GStar(k, l));
            }
        }
    }
    out
}

/// The full basis `{g^kl, g*^kl}` of Hermitian `d x d` matrices.
pub fn hermitian_basis<T: Real>(d: usize) -> Vec<(BasisLabel, Matrix<T>)> {
    basis_labels(d)
        .into_iter()
        .map(|lab| (lab, lab.matrix(d).expect("canonical labels are in range")))
        .collect()
}

/// Real coefficients of a Hermitian matrix in the `{g, g*}` basis, canonical order.
///
/// Solves the triangular system directly: off-diagonal entries fix the
/// `g^kl` and `g*^kl` coefficients, the diagonal absorbs the remainder.
pub fn expand_in_basis<T: Real>(h: &Matrix<T>) -> Vec<T> {
    let d = h.dim();
    let mut diag: Vec<T> = (0..d).map(|i| h[(i, i)].re).collect();
    let mut pair = std::collections::HashMap::new();
    for k in 0..d {
        for l in (k + 1)..d {
            // g^kl contributes 1 at (k,l); g*^kl contributes i.
            let z = h[(k, l)];
            pair.insert((k, l), (z.re, z.im));
            diag[k] -= z.re + z.im;
            diag[l] -= z.re + z.im;
        }
    }
    basis_labels(d)
        .into_iter()
        .map(|lab| match lab {
            BasisLabel::G(k, l) if k == l => diag[k],
            BasisLabel::G(k, l) => pair[&(k, l)].0,
            BasisLabel::GStar(k, l) => pair[&(k, l)].1,
        })
        .collect()
}

/// Random rank-`rank` state `M M^+ / tr(M M^+)` with `M` a `d x rank` complex Gaussian factor.
pub fn random_density<T: Real>(d: usize, rank: usize, seed: u64) -> Result<Density<T>> {
    let mut rng = seeded(seed);
    random_density_with(&mut rng, d, rank)
}

/// As [`random_density`], drawing from an existing generator.
pub fn random_density_with<T: Real, R: rand::Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rank: usize,
) -> Result<Density<T>> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} is not in 1..={d}"
        )));
    }
    let factor: Vec<Vec<C<T>>> = (0..d)
        .map(|_| (0..rank).map(|_| complex_normal(rng)).collect())
        .collect();
    let mut m = Matrix::from_fn(d, |r, c| {
        factor[r]
            .iter()
            .zip(&factor[c])
            .fold(czero(), |acc, (&a, &b)| acc + a * b.conj())
    });
    let tr = m.trace().re;
    m = m.scale_real(T::one() / tr);
    Ok(Density::new_unchecked(m.hermitian_part()))
}

/// Purification `a = sum_i sqrt(lambda_i) u_i (x) f_i` of `s` in `C^ds (x) C^de`.
///
/// `(lambda_i, u_i)` are the spectral pairs of `s` with the phase convention
/// of [`spectral`], `f_i` the canonical environment basis in descending
/// eigenvalue order.
pub fn purify<T: Real>(s: &Density<T>, de: usize) -> Result<Pure<T>> {
    let ds = s.dim();
    let sp = spectral(s.hermitian());
    let rank = sp.rank(T::lit(DEFAULT.rank));
    if de < rank || de == 0 {
        return Err(Error::InsufficientEnvironment { de, rank });
    }
    let mut a = vec![czero(); ds * de];
    for (i, (lam, u)) in sp
        .eigenvalues
        .iter()
        .zip(&sp.eigenvectors)
        .take(rank)
        .enumerate()
    {
        let mut f = vec![czero(); de];
        f[i] = C::new(lam.max(T::zero()).sqrt(), T::zero());
        for (acc, z) in a.iter_mut().zip(kron_vec(u, &f)) {
            *acc += z;
        }
    }
    Ok(Pure::new_unchecked(a))
}

/// Environment blocks `f_a(k) = (a[k*de + i])_i` of a composite vector.
pub fn environment_blocks<T: Real>(a: &[C<T>], ds: usize, de: usize) -> Result<Vec<Vec<C<T>>>> {
    if a.len() != ds * de {
        return Err(Error::dims(format!(
            "vector of length {} is not {ds} x {de}",
            a.len()
        )));
    }
    Ok(a.chunks(de).map(|c| c.to_vec()).collect())
}

/// `G[k][l] = sum_i f_a(k)_i conj(f_a(l)_i)`, the Gram matrix of the
/// environment blocks (inner product linear in the first slot). Equals the
/// reduced state `tr_E P_a`.
pub fn gram_matrix<T: Real>(a: &[C<T>], ds: usize, de: usize) -> Result<Matrix<T>> {
    let blocks = environment_blocks(a, ds, de)?;
    Ok(Matrix::from_fn(ds, |k, l| {
        blocks[k]
            .iter()
            .zip(&blocks[l])
            .fold(czero(), |acc, (&x, &y)| acc + x * y.conj())
    }))
}
