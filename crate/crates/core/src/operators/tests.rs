use super::*;
use crate::rng::{random_hermitian, random_matrix, seeded};
use crate::scalar::cone;
use proptest::prelude::*;

type M = Matrix<f64>;

fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

fn bell_projector() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
    M::outer(&v, &v)
}

fn close(a: &M, b: &M, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

#[test]
fn kron_identities_give_identity() {
    assert_eq!(kron(&M::identity(2), &M::identity(3)), M::identity(6));
}

#[test]
fn kron_of_diagonals() {
    let a = M::from_real_diagonal(&[1.0, 2.0]);
    let b = M::from_real_diagonal(&[3.0, 4.0]);
    assert_eq!(kron(&a, &b), M::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]));
}

#[test]
fn kron_index_layout_and_trace() {
    let mut rng = seeded(1);
    let a: M = random_matrix(&mut rng, 3);
    let b: M = random_matrix(&mut rng, 2);
    let k = kron(&a, &b);
    for ra in 0..3 {
        for ca in 0..3 {
            for rb in 0..2 {
                for cb in 0..2 {
                    assert_eq!(k[(ra * 2 + rb, ca * 2 + cb)], a[(ra, ca)] * b[(rb, cb)]);
                }
            }
        }
    }
    assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
}

#[test]
fn partial_trace_of_product() {
    let mut rng = seeded(2);
    let rho: M = random_matrix(&mut rng, 3);
    let d: M = random_matrix(&mut rng, 2);
    let w = kron(&rho, &d);
    let env = partial_trace_env(&w, 3, 2).unwrap();
    let sys = partial_trace_sys(&w, 3, 2).unwrap();
    assert!(close(&env, &rho.scale(d.trace()), 1e-12));
    assert!(close(&sys, &d.scale(rho.trace()), 1e-12));
}

#[test]
fn partial_trace_of_bell_projector() {
    let half = M::identity(2).scale_real(0.5);
    assert!(close(
        &partial_trace_env(&bell_projector(), 2, 2).unwrap(),
        &half,
        1e-15
    ));
    assert!(close(
        &partial_trace_sys(&bell_projector(), 2, 2).unwrap(),
        &half,
        1e-15
    ));
}

#[test]
fn partial_trace_of_identity() {
    let id = M::identity(6);
    assert_eq!(
        partial_trace_env(&id, 2, 3).unwrap(),
        M::identity(2).scale_real(3.0)
    );
    assert_eq!(
        partial_trace_sys(&id, 2, 3).unwrap(),
        M::identity(3).scale_real(2.0)
    );
}

#[test]
fn partial_trace_rejects_bad_dims() {
    let w = M::identity(6);
    assert!(matches!(
        partial_trace_env(&w, 4, 2),
        Err(Error::DimensionMismatch(_))
    ));
    assert!(matches!(
        partial_trace_sys(&w, 5, 1),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn psd_examples() {
    let a = Hermitian::try_from_matrix(M::from_real_diagonal(&[1.0, 0.0])).unwrap();
    let chk = is_psd(&a, 1e-9);
    assert!(chk.is_psd);
    assert_eq!(chk.min_eigenvalue, 0.0);

    let b = Hermitian::try_from_matrix(M::from_real_diagonal(&[1.0, -0.1])).unwrap();
    let chk = is_psd(&b, 1e-9);
    assert!(!chk.is_psd);
    assert!((chk.min_eigenvalue + 0.1).abs() < 1e-15);
    assert_eq!(chk.witness, vec![c(0.0, 0.0), c(1.0, 0.0)]);

    // (e_1 + e_2)(e_1 + e_2)^+ in C^3, eigenvalues {2, 0, 0}
    let mut g = M::zeros(3);
    for (r, cc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        g[(r, cc)] = cone();
    }
    let h = Hermitian::try_from_matrix(g).unwrap();
    let sp = spectral(&h);
    assert!((sp.eigenvalues[0] - 2.0).abs() < 1e-14);
    assert!(sp.eigenvalues[1].abs() < 1e-14 && sp.eigenvalues[2].abs() < 1e-14);
    assert_eq!(sp.rank(1e-12), 1);
    assert!(is_psd(&h, 1e-9).is_psd);
}

#[test]
fn psd_rejects_non_hermitian() {
    let m = M::from_fn(2, |r, cc| {
        if r == 0 && cc == 1 {
            cone()
        } else {
            c(0.0, 0.0)
        }
    });
    assert!(matches!(
        check_psd(&m, 1e-9),
        Err(Error::NotHermitian { .. })
    ));
}

#[test]
fn spectral_examples() {
    let sp = spectral(&Hermitian::try_from_matrix(M::identity(2)).unwrap());
    assert_eq!(sp.eigenvalues, vec![1.0, 1.0]);

    let sp = spectral(&Hermitian::try_from_matrix(M::from_real_diagonal(&[1.0, 3.0])).unwrap());
    assert_eq!(sp.eigenvalues, vec![3.0, 1.0]);
    assert_eq!(sp.eigenvectors[0], vec![c(0.0, 0.0), c(1.0, 0.0)]);
    assert_eq!(sp.eigenvectors[1], vec![c(1.0, 0.0), c(0.0, 0.0)]);
}

#[test]
fn spectral_random_reconstruction_and_phase_convention() {
    let mut rng = seeded(3);
    for dim in [1, 2, 3, 5, 8, 16, 32] {
        let h: Hermitian<f64> = random_hermitian(&mut rng, dim);
        let sp = spectral(&h);
        let err = (&sp.reconstruct() - h.matrix()).frobenius_norm();
        assert!(err <= 1e-10, "dim {dim}: reconstruction error {err:e}");
        assert!(sp.orthonormality_error() <= 1e-10);
        assert!(sp.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for v in &sp.eigenvectors {
            let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = v.iter().find(|z| z.norm() >= max - 1e-8).unwrap();
            assert_eq!(pivot.im, 0.0);
            assert!(pivot.re > 0.0);
        }
    }
}

#[test]
fn spectral_is_deterministic() {
    let mut rng = seeded(4);
    let h: Hermitian<f64> = random_hermitian(&mut rng, 6);
    let a = spectral(&h);
    let b = spectral(&h);
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.eigenvectors, b.eigenvectors);
}

#[test]
fn spectral_in_single_precision() {
    let mut rng = seeded(5);
    let h: Hermitian<f32> = random_hermitian(&mut rng, 6);
    let sp = spectral(&h);
    let err = (&sp.reconstruct() - h.matrix()).frobenius_norm();
    assert!(err <= 1e-4, "f32 reconstruction error {err:e}");
}

#[test]
fn trace_norm_examples() {
    let rho = M::from_real_diagonal(&[0.25, 0.75]);
    assert!((trace_norm(&rho) - 1.0).abs() < 1e-15);
    assert!((trace_norm(&M::from_real_diagonal(&[1.0, -1.0])) - 2.0).abs() < 1e-15);
}

fn to_nalgebra(m: &M) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
    nalgebra::DMatrix::from_fn(m.dim(), m.dim(), |r, cc| {
        let z = m[(r, cc)];
        nalgebra::Complex::new(z.re, z.im)
    })
}

#[test]
fn trace_norm_matches_svd_oracle() {
    let mut rng = seeded(6);
    for _ in 0..20 {
        let a: M = random_matrix(&mut rng, 4);
        let oracle: f64 = to_nalgebra(&a).singular_values().iter().sum();
        assert!((trace_norm(&a) - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }
    // rank-deficient, non-Hermitian
    let u = vec![c(1.0, 0.5), c(0.0, -1.0), c(2.0, 0.0)];
    let v = vec![c(0.0, 1.0), c(1.0, 1.0), c(-1.0, 0.0)];
    let a = M::outer(&u, &v);
    let oracle: f64 = to_nalgebra(&a).singular_values().iter().sum();
    assert!((trace_norm(&a) - oracle).abs() <= 1e-12 * oracle);
}

#[test]
fn pairing_examples() {
    let mut rng = seeded(7);
    let w: M = random_matrix(&mut rng, 3);
    assert!((pairing(&M::identity(3), &w) - w.trace()).norm() < 1e-14);

    let p = M::projector(&[c(0.6, 0.0), c(0.0, 0.8)]);
    assert!((pairing(&p, &p) - cone()).norm() < 1e-14);

    // pairing(A, rho (x) D) = pairing(tr_E(A (Id (x) D)), rho)
    let a: M = random_matrix(&mut rng, 6);
    let rho: M = random_matrix(&mut rng, 3);
    let d: M = random_matrix(&mut rng, 2);
    let lhs = pairing(&a, &kron(&rho, &d));
    let reduced = partial_trace_env(&(&a * &kron(&M::identity(3), &d)), 3, 2).unwrap();
    let rhs = pairing(&reduced, &rho);
    assert!((lhs - rhs).norm() < 1e-12);
}

/// Faddeev-LeVerrier coefficients of det(x Id - A), lowest degree first.
fn char_poly(a: &M) -> Vec<C<f64>> {
    let n = a.dim();
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    coeffs[n] = cone();
    let mut mk = M::zeros(n);
    for k in 1..=n {
        let mut next = a * &mk;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        mk = next;
        coeffs[n - k] = -(a * &mk).trace() / (k as f64);
    }
    coeffs
}

/// A real-rooted polynomial has only nonnegative roots iff its coefficients alternate in sign.
fn charpoly_psd(a: &M) -> bool {
    let cs = char_poly(a);
    let n = a.dim();
    cs.iter().enumerate().all(|(k, ck)| {
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * ck.re >= -1e-12
    })
}

#[test]
fn is_psd_agrees_with_charpoly_oracle() {
    let mut rng = seeded(8);
    let mut checked = 0;
    for dim in 1..=4 {
        for trial in 0..200 {
            let u = crate::rng::random_unitary::<f64, _>(&mut rng, dim);
            let mut eig: Vec<f64> = (0..dim)
                .map(|_| crate::rng::uniform::<f64, _>(&mut rng, 0.05, 2.0))
                .collect();
            if trial % 2 == 0 {
                eig[0] = -crate::rng::uniform::<f64, _>(&mut rng, 0.05, 1.0);
            }
            let a = &(&u * &M::from_real_diagonal(&eig)) * &u.adjoint();
            let h = Hermitian::from_hermitian_part(&a);
            assert_eq!(is_psd(&h, 1e-9).is_psd, charpoly_psd(h.matrix()));
            checked += 1;
        }
    }
    assert_eq!(checked, 800);
}

fn arb_matrix(dim: usize) -> impl Strategy<Value = M> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        M::from_row_major(dim, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn partial_trace_is_linear_and_trace_preserving(
        w1 in arb_matrix(6), w2 in arb_matrix(6), a in -2.0f64..2.0, b in -2.0f64..2.0
    ) {
        let combo = &w1.scale_real(a) + &w2.scale_real(b);
        let lhs = partial_trace_env(&combo, 2, 3).unwrap();
        let rhs = &partial_trace_env(&w1, 2, 3).unwrap().scale_real(a)
            + &partial_trace_env(&w2, 2, 3).unwrap().scale_real(b);
        prop_assert!(close(&lhs, &rhs, 1e-12));
        prop_assert!((lhs.trace() - combo.trace()).norm() <= 1e-12);
    }

    #[test]
    fn pairing_with_system_operator_reduces(b in arb_matrix(3), w in arb_matrix(6)) {
        let lhs = pairing(&kron(&b, &M::identity(2)), &w);
        let rhs = pairing(&b, &partial_trace_env(&w, 3, 2).unwrap());
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn trace_of_product_partial_trace(rho in arb_matrix(2), d in arb_matrix(3)) {
        let env = partial_trace_env(&kron(&rho, &d), 2, 3).unwrap();
        prop_assert!(close(&env, &rho.scale(d.trace()), 1e-12));
    }
}
