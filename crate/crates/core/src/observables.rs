//! Observables on the composite system and their reduction to `H_S`.
//!
//! A lifting acts on states; its adjoint under the pairing `tr(A W)` acts on
//! observables. Linear maps between finite-dimensional spaces are continuous
//! in every vector topology, so no continuity check is performed.

use crate::error::{Error, Result};
use crate::liftings::LiftingMap;
use crate::operators::{kron, partial_trace_env, Matrix};
use crate::scalar::Real;
use crate::states::{hermitian_basis, Density};
use crate::superop::SuperOp;

/// A linear map `L(H_S (x) H_E) -> L(H_S)`, stored as an explicit matrix.
#[derive(Clone, PartialEq)]
pub struct Reduction<T> {
    ds: usize,
    de: usize,
    op: SuperOp<T>,
}

impl<T: Real> Reduction<T> {
    pub fn from_superop(ds: usize, de: usize, op: SuperOp<T>) -> Result<Self> {
        if op.din() != ds * de || op.dout() != ds {
            return Err(Error::dims(format!(
                "reduction map {}x{} does not act from dim {} to dim {ds}",
                op.rows(),
                op.cols(),
                ds * de
            )));
        }
        Ok(Self { ds, de, op })
    }

    pub fn ds(&self) -> usize {
        self.ds
    }

    pub fn de(&self) -> usize {
        self.de
    }

    pub fn superop(&self) -> &SuperOp<T> {
        &self.op
    }

    pub fn apply(&self, a: &Matrix<T>) -> Matrix<T> {
        self.op.apply(a)
    }

    /// The lifting this map is the adjoint of.
    pub fn pre_adjoint(&self) -> LiftingMap<T> {
        LiftingMap::from_superop(self.ds, self.de, self.op.pairing_adjoint()).expect("shape")
    }
}

impl<T: Real> std::fmt::Debug for Reduction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Reduction(ds = {}, de = {}, {:?})",
            self.ds, self.de, self.op
        )
    }
}

/// `F*` with `tr(A F(rho)) = tr(F*(A) rho)`.
pub fn adjoint_lifting<T: Real>(f: &LiftingMap<T>) -> Reduction<T> {
    Reduction {
        ds: f.ds(),
        de: f.de(),
        op: f.superop().pairing_adjoint(),
    }
}

/// `max_B || R(B (x) Id) - B ||_F` over the basis `{g^kl, g*^kl}`.
pub fn check_unit_reduction<T: Real>(r: &Reduction<T>) -> T {
    let id = Matrix::identity(r.de);
    hermitian_basis::<T>(r.ds)
        .iter()
        .map(|(_, b)| (&r.apply(&kron(b, &id)) - b).frobenius_norm())
        .fold(T::zero(), T::max)
}

/// `tr_E(A (Id (x) D))`.
pub fn reduce_observable<T: Real>(a: &Matrix<T>, d: &Density<T>) -> Result<Matrix<T>> {
    let de = d.dim();
    if de == 0 || !a.dim().is_multiple_of(de) {
        return Err(Error::dims(format!(
            "observable of dim {} over environment dim {de}",
            a.dim()
        )));
    }
    let ds = a.dim() / de;
    partial_trace_env(&(a * &kron(&Matrix::identity(ds), d.matrix())), ds, de)
}

/// [`reduce_observable`] as an explicit map.
pub fn reduction_for<T: Real>(d: &Density<T>, ds: usize) -> Reduction<T> {
    let de = d.dim();
    let op = SuperOp::from_map(ds * de, ds, |a| reduce_observable(a, d).expect("dims"));
    Reduction { ds, de, op }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::liftings::{analyze, check_trace_constraint, product_lifting, AnalyzeConfig};
    use crate::operators::{check_psd, pairing};
    use crate::rng::{random_hermitian, random_matrix, random_unitary, seeded};
    use crate::states::random_density;

    fn perturbed_trace(ds: usize, de: usize, eps: f64, seed: u64) -> LiftingMap<f64> {
        let d = random_density::<f64>(de, de, seed).unwrap();
        let bump = random_hermitian::<f64, _>(&mut seeded(seed + 1), ds * de).into_matrix();
        LiftingMap::from_map(ds, de, |x| {
            &kron(x, d.matrix()) + &bump.scale(x.trace() * eps)
        })
    }

    #[test]
    fn pairing_identity_on_random_pairs() {
        let mut rng = seeded(1);
        let f = crate::liftings::nogo::nogo_trial_lifting::<f64>(
            &crate::liftings::nogo::NogoConfig::new(2, 3, 1, 0.2, 1),
            0,
        );
        let r = adjoint_lifting(&f);
        for _ in 0..100 {
            let a = random_matrix::<f64, _>(&mut rng, 6);
            let rho = random_matrix::<f64, _>(&mut rng, 2);
            let lhs = pairing(&a, &f.apply(&rho));
            let rhs = pairing(&r.apply(&a), &rho);
            assert!((lhs - rhs).norm() <= 1e-10);
        }
    }

    #[test]
    fn adjoint_of_product_is_unital() {
        let d = random_density::<f64>(3, 3, 2).unwrap();
        let r = adjoint_lifting(&product_lifting(&d, 2));
        let b = random_hermitian::<f64, _>(&mut seeded(3), 2).into_matrix();
        assert!((&r.apply(&kron(&b, &Matrix::identity(3))) - &b).max_abs() <= 1e-12);
        assert!(check_unit_reduction(&r) <= 1e-12);
    }

    #[test]
    fn adjoint_involution() {
        let f = perturbed_trace(2, 2, 0.1, 4);
        let back = adjoint_lifting(&f).pre_adjoint();
        let x = random_hermitian::<f64, _>(&mut seeded(5), 2).into_matrix();
        assert!((&back.apply(&x) - &f.apply(&x)).max_abs() <= 1e-14);
    }

    #[test]
    fn trace_defect_shows_on_both_sides() {
        let f = perturbed_trace(2, 3, 1e-3, 6);
        assert!(check_trace_constraint(&f) > 0.0);
        assert!(check_unit_reduction(&adjoint_lifting(&f)) > 0.0);
    }

    #[test]
    fn unit_deviation_is_linear_in_defect() {
        let base = check_unit_reduction(&adjoint_lifting(&perturbed_trace(2, 2, 1e-4, 7)));
        for k in [2.0, 5.0, 10.0, 100.0] {
            let dev = check_unit_reduction(&adjoint_lifting(&perturbed_trace(2, 2, 1e-4 * k, 7)));
            assert!((dev / base - k).abs() <= 1e-6 * k, "{dev} {base} {k}");
        }
    }

    #[test]
    fn lemma_equivalence_both_directions() {
        for (i, eps) in [0.0, 1e-12, 1e-6, 1e-2].into_iter().enumerate() {
            let f = perturbed_trace(3, 2, eps, 10 + i as u64);
            let trace_ok = check_trace_constraint(&f) <= 1e-9;
            let unit_ok = check_unit_reduction(&adjoint_lifting(&f)) <= 1e-9;
            assert_eq!(trace_ok, unit_ok, "eps = {eps}");
        }
    }

    #[test]
    fn reduce_identity_and_product() {
        let d = random_density::<f64>(2, 2, 20).unwrap();
        let id = reduce_observable(&Matrix::identity(6), &d).unwrap();
        assert!((&id - &Matrix::identity(3)).max_abs() <= 1e-14);
        let b = random_matrix::<f64, _>(&mut seeded(21), 3);
        let rb = reduce_observable(&kron(&b, &Matrix::identity(2)), &d).unwrap();
        assert!((&rb - &b).max_abs() <= 1e-13);
        assert!(reduce_observable(&Matrix::identity(5), &d).is_err());
    }

    #[test]
    fn reduce_matches_adjoint_of_product() {
        let d = random_density::<f64>(3, 2, 22).unwrap();
        let r = adjoint_lifting(&product_lifting(&d, 2));
        let mut rng = seeded(23);
        for _ in 0..100 {
            let a = random_matrix::<f64, _>(&mut rng, 6);
            assert!((&r.apply(&a) - &reduce_observable(&a, &d).unwrap()).max_abs() <= 1e-10);
        }
        assert!((r.superop() - reduction_for(&d, 2).superop()).max_abs() <= 1e-12);
    }

    #[test]
    fn product_verdict_implies_reduction_formula() {
        let (d1, d2) = (
            random_density::<f64>(2, 2, 24).unwrap(),
            random_density::<f64>(2, 1, 25).unwrap(),
        );
        let f = product_lifting(&d1, 2).mix(&product_lifting(&d2, 2), 0.4);
        let u = random_unitary::<f64, _>(&mut seeded(26), 2);
        let f = f.mix(
            &LiftingMap::from_map(2, 2, |x| kron(x, &(&(&u * d2.matrix()) * &u.adjoint()))),
            0.5,
        );
        match analyze(&f, &AnalyzeConfig::default()) {
            crate::liftings::AnalysisVerdict::Product { reference, .. } => {
                let diff = adjoint_lifting(&f).superop() - reduction_for(&reference, 2).superop();
                assert!(diff.max_abs() <= 1e-8);
            }
            v => panic!("unexpected verdict {}", v.kind()),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduction_preserves_hermiticity(seed in 0u64..10_000, ds in 1usize..4, de in 1usize..4) {
            let d = random_density::<f64>(de, 1 + seed as usize % de, seed).unwrap();
            let a = random_matrix::<f64, _>(&mut seeded(seed), ds * de);
            let lhs = reduce_observable(&a.adjoint(), &d).unwrap();
            let rhs = reduce_observable(&a, &d).unwrap().adjoint();
            prop_assert!((&lhs - &rhs).max_abs() <= 1e-12);
        }

        #[test]
        fn reduction_preserves_positivity(seed in 0u64..10_000, ds in 1usize..4, de in 1usize..4) {
            let d = random_density::<f64>(de, 1 + seed as usize % de, seed).unwrap();
            let m = random_matrix::<f64, _>(&mut seeded(seed), ds * de);
            let a = &m * &m.adjoint();
            let out = reduce_observable(&a, &d).unwrap();
            prop_assert!(check_psd(&out, 1e-9).unwrap().is_psd);
        }

        #[test]
        fn duality_holds(seed in 0u64..10_000) {
            let f = perturbed_trace(2, 2, 0.3, seed);
            let mut rng = seeded(seed);
            let a = random_matrix::<f64, _>(&mut rng, 4);
            let rho = random_matrix::<f64, _>(&mut rng, 2);
            let diff = pairing(&a, &f.apply(&rho)) - pairing(&adjoint_lifting(&f).apply(&a), &rho);
            prop_assert!(diff.norm() <= 1e-10);
        }
    }
}
