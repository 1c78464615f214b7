use crate::error::{Error, Result};
use crate::operators::Matrix;
use crate::scalar::Real;

/// The `(k, l)`-components of an operator on `C^ds (x) C^de`:
/// `block(k, l)[i][j] = <e_k (x) f_i, W (e_l (x) f_j)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Components<T: Real> {
    ds: usize,
    de: usize,
    blocks: Vec<Matrix<T>>,
}

impl<T: Real> Components<T> {
    pub fn split(w: &Matrix<T>, ds: usize, de: usize) -> Result<Self> {
        if w.dim() != ds * de {
            return Err(Error::dims(format!(
                "operator of dim {} is not {ds} x {de}",
                w.dim()
            )));
        }
        let blocks = (0..ds * ds)
            .map(|kl| w.block((kl / ds) * de, (kl % ds) * de, de))
            .collect();
        Ok(Self { ds, de, blocks })
    }

    #[inline]
    pub fn block(&self, k: usize, l: usize) -> &Matrix<T> {
        &self.blocks[k * self.ds + l]
    }

    pub fn ds(&self) -> usize {
        self.ds
    }

    pub fn de(&self) -> usize {
        self.de
    }

    pub fn reassemble(&self) -> Matrix<T> {
        let (ds, de) = (self.ds, self.de);
        Matrix::from_fn(ds * de, |r, c| self.block(r / de, c / de)[(r % de, c % de)])
    }

    /// Frobenius norm of all components outside `support`.
    pub fn mass_outside(&self, support: &[(usize, usize)]) -> T {
        let mut acc = T::zero();
        for k in 0..self.ds {
            for l in 0..self.ds {
                if !support.contains(&(k, l)) {
                    let n = self.block(k, l).frobenius_norm();
                    acc += n * n;
                }
            }
        }
        acc.sqrt()
    }
}
