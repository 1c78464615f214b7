//! Linear maps between operator spaces, stored as dense matrices on
//! column-stacked operators: `vec(X)[c * d + r] = X[r][c]`.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::operators::Matrix;
use crate::scalar::{czero, Real, C};

/// Column-stacking vectorization.
pub fn vectorize<T: Real>(x: &Matrix<T>) -> Vec<C<T>> {
    let d = x.dim();
    (0..d * d).map(|k| x[(k % d, k / d)]).collect()
}

/// Inverse of [`vectorize`].
pub fn unvectorize<T: Real>(v: &[C<T>], d: usize) -> Matrix<T> {
    assert_eq!(v.len(), d * d, "vector length is not d^2");
    Matrix::from_fn(d, |r, c| v[c * d + r])
}

/// Matrix of a linear map `L(C^din) -> L(C^dout)`, shape `dout^2 x din^2`, row-major.
#[derive(Clone, PartialEq)]
pub struct SuperOp<T> {
    din: usize,
    dout: usize,
    data: Vec<C<T>>,
}

impl<T: Real> SuperOp<T> {
    pub fn zeros(din: usize, dout: usize) -> Self {
        Self {
            din,
            dout,
            data: vec![czero(); din * din * dout * dout],
        }
    }

    /// Tabulates `f` on the matrix units `E_rc`.
    pub fn from_map(din: usize, dout: usize, mut f: impl FnMut(&Matrix<T>) -> Matrix<T>) -> Self {
        let cols = din * din;
        let mut out = Self::zeros(din, dout);
        for col in 0..cols {
            let unit = Matrix::unit(din, col % din, col / din);
            let image = f(&unit);
            assert_eq!(
                image.dim(),
                dout,
                "map produced an operator of the wrong dimension"
            );
            for (row, z) in vectorize(&image).into_iter().enumerate() {
                out.data[row * cols + col] = z;
            }
        }
        out
    }

    /// Wraps row-major entries of shape `dout^2 x din^2`.
    pub fn from_entries(din: usize, dout: usize, data: Vec<C<T>>) -> Result<Self> {
        if din == 0 || dout == 0 {
            return Err(Error::dims("superoperator dimensions must be positive"));
        }
        let expected = din * din * dout * dout;
        if data.len() != expected {
            return Err(Error::dims(format!(
                "expected {expected} entries for a {}x{} superoperator, got {}",
                dout * dout,
                din * din,
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { din, dout, data })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_map(d, d, |x| x.clone())
    }

    #[inline]
    pub fn din(&self) -> usize {
        self.din
    }

    #[inline]
    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn rows(&self) -> usize {
        self.dout * self.dout
    }

    pub fn cols(&self) -> usize {
        self.din * self.din
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.data[row * self.cols() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, z: C<T>) {
        let cols = self.cols();
        self.data[row * cols + col] = z;
    }

    pub fn apply(&self, x: &Matrix<T>) -> Matrix<T> {
        assert_eq!(x.dim(), self.din, "input operator has the wrong dimension");
        let v = vectorize(x);
        let cols = self.cols();
        let out: Vec<C<T>> = (0..self.rows())
            .map(|r| {
                self.data[r * cols..(r + 1) * cols]
                    .iter()
                    .zip(&v)
                    .fold(czero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect();
        unvectorize(&out, self.dout)
    }

    /// `self o other` (apply `other` first).
    pub fn compose(&self, other: &SuperOp<T>) -> SuperOp<T> {
        assert_eq!(other.dout, self.din, "composition dimension mismatch");
        let (n, k, m) = (self.rows(), self.cols(), other.cols());
        let mut data = vec![czero(); n * m];
        for r in 0..n {
            for j in 0..k {
                let a = self.data[r * k + j];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..m {
                    data[r * m + c] += a * other.data[j * m + c];
                }
            }
        }
        SuperOp {
            din: other.din,
            dout: self.dout,
            data,
        }
    }

    /// Map `Y -> tr(Y F(.))`-transpose: the unique `G` with `tr(A F(X)) = tr(G(A) X)`.
    pub fn pairing_adjoint(&self) -> SuperOp<T> {
        let (din, dout) = (self.din, self.dout);
        let t_in = |idx: usize| (idx % din) * din + idx / din;
        let t_out = |idx: usize| (idx % dout) * dout + idx / dout;
        let mut out = SuperOp::zeros(dout, din);
        for i in 0..din * din {
            for j in 0..dout * dout {
                out.set(i, j, self.get(t_out(j), t_in(i)));
            }
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            din: self.din,
            dout: self.dout,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.din == other.din && self.dout == other.dout,
            "superoperator shapes differ"
        );
    }
}

impl<T: Real> Add for &SuperOp<T> {
    type Output = SuperOp<T>;
    fn add(self, rhs: &SuperOp<T>) -> SuperOp<T> {
        self.check_same_shape(rhs);
        SuperOp {
            din: self.din,
            dout: self.dout,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &SuperOp<T> {
    type Output = SuperOp<T>;
    fn sub(self, rhs: &SuperOp<T>) -> SuperOp<T> {
        self.check_same_shape(rhs);
        SuperOp {
            din: self.din,
            dout: self.dout,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> std::fmt::Debug for SuperOp<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SuperOp({}x{} on dims {} -> {})",
            self.rows(),
            self.cols(),
            self.din,
            self.dout
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{kron, pairing};
    use crate::rng::{random_matrix, seeded};

    #[test]
    fn vectorization_is_column_stacking() {
        let x = Matrix::<f64>::from_fn(2, |r, c| C::new((10 * r + c) as f64, 0.0));
        let v = vectorize(&x);
        assert_eq!(
            v.iter().map(|z| z.re).collect::<Vec<_>>(),
            vec![0.0, 10.0, 1.0, 11.0]
        );
        assert_eq!(unvectorize(&v, 2), x);
    }

    #[test]
    fn tabulated_map_reproduces_action() {
        let mut rng = seeded(11);
        let d: Matrix<f64> = random_matrix(&mut rng, 2);
        let op = SuperOp::from_map(3, 6, |x| kron(x, &d));
        let x: Matrix<f64> = random_matrix(&mut rng, 3);
        assert!((&op.apply(&x) - &kron(&x, &d)).max_abs() < 1e-13);
        assert_eq!(op.rows(), 36);
        assert_eq!(op.cols(), 9);
    }

    #[test]
    fn pairing_adjoint_satisfies_duality_and_is_involutive() {
        let mut rng = seeded(12);
        let k: Matrix<f64> = random_matrix(&mut rng, 6);
        let op = SuperOp::from_map(3, 6, |x| {
            let w = kron(x, &Matrix::identity(2));
            &(&k * &w) * &k.adjoint()
        });
        let adj = op.pairing_adjoint();
        for _ in 0..10 {
            let a: Matrix<f64> = random_matrix(&mut rng, 6);
            let x: Matrix<f64> = random_matrix(&mut rng, 3);
            let lhs = pairing(&a, &op.apply(&x));
            let rhs = pairing(&adj.apply(&a), &x);
            assert!((lhs - rhs).norm() < 1e-11);
        }
        assert_eq!(adj.pairing_adjoint(), op);
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(SuperOp::<f64>::from_entries(2, 2, vec![czero(); 15]).is_err());
    }
}
