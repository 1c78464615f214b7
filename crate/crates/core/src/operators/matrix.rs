use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

/// Dense square complex matrix, row-major.
///
/// Entry `(r, c)` is `<basis_r, A basis_c>`.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![czero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dims("matrix dimension must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::dims(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C::new(d, T::zero());
        }
        m
    }

    /// Matrix unit `E_{rc}` with a single one at `(r, c)`.
    pub fn unit(dim: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(r, c)] = C::new(T::one(), T::zero());
        m
    }

    /// Outer product `v w^+`.
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        assert_eq!(
            v.len(),
            w.len(),
            "outer product of vectors of different length"
        );
        Self::from_fn(v.len(), |r, c| v[r] * w[c].conj())
    }

    /// Rank-one projector `v v^+ / <v, v>`.
    pub fn projector(v: &[C<T>]) -> Self {
        let n = super::vec_norm(v);
        let n2 = n * n;
        Self::from_fn(v.len(), |r, c| v[r] * v[c].conj() / n2)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C<T>> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(czero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `max |A[r][c] - conj(A[c][r])|`.
    pub fn hermitian_deviation(&self) -> T {
        let mut dev = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(A + A^+) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |r, c| (self[(r, c)] + self[(c, r)].conj()) * half)
    }

    pub fn mat_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter().zip(v).fold(czero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// `<v, A v>`, antilinear in the first slot.
    pub fn quadratic_form(&self, v: &[C<T>]) -> C<T> {
        let av = self.mat_vec(v);
        super::vec_inner(v, &av)
    }

    /// Principal `n x n` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, n: usize) -> Self {
        Self::from_fn(n, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn cast<U: Real>(&self) -> Matrix<U> {
        let f = |x: T| U::from_f64(x.to_f64().unwrap()).unwrap();
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| C::new(f(z.re), f(z.im))).collect(),
        }
    }

    pub(crate) fn check_same_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.dim + c]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.check_same_dim(rhs);
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.check_same_dim(rhs);
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> AddAssign<&Matrix<T>> for Matrix<T> {
    fn add_assign(&mut self, rhs: &Matrix<T>) {
        self.check_same_dim(rhs);
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| -a).collect(),
        }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.check_same_dim(rhs);
        let n = self.dim;
        let mut out = vec![czero::<T>(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Matrix { dim: n, data: out }
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
