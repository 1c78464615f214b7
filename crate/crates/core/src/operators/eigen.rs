//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use super::Matrix;
use crate::scalar::{czero, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted) and eigenvectors as columns of the returned unitary.
pub(crate) fn jacobi_hermitian<T: Real>(input: &Matrix<T>) -> (Vec<T>, Vec<Vec<C<T>>>) {
    let n = input.dim();
    // Work on the exact Hermitian part so round-off in the input does not leak in.
    let herm = input.hermitian_part();
    let mut a: Vec<C<T>> = herm.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i].im = T::zero();
    }
    let mut v: Vec<C<T>> = Matrix::<T>::identity(n).into_vec();

    let scale = herm.frobenius_norm();
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * n + c].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i].re).collect();
    let vectors = (0..n)
        .map(|c| (0..n).map(|r| v[r * n + c]).collect())
        .collect();
    (values, vectors)
}

fn rotate<T: Real>(a: &mut [C<T>], v: &mut [C<T>], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / r;

    let two = T::lit(2.0);
    let theta = (aqq - app) / (two * r);
    let t = if theta >= T::zero() {
        T::one() / (theta + theta.hypot(T::one()))
    } else {
        -T::one() / (-theta + theta.hypot(T::one()))
    };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;

    // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    let ph = phase.conj();
    let g00 = C::new(c, T::zero());
    let g01 = C::new(s, T::zero());
    let g10 = ph * (-s);
    let g11 = ph * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g00 + akq * g10;
        a[k * n + q] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g00.conj() * apk + g10.conj() * aqk;
        a[q * n + k] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[p * n + q] = czero();
    a[q * n + p] = czero();
    a[p * n + p].im = T::zero();
    a[q * n + q].im = T::zero();

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * g00 + vkq * g10;
        v[k * n + q] = vkp * g01 + vkq * g11;
    }
}
