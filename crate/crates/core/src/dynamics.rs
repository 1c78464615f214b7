//! Unitary evolution of the composite system and the reduced dynamics it
//! induces on `H_S` through a lifting (`hbar = 1`).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liftings::{check_trace_constraint, product_lifting, LiftingMap};
use crate::operators::{
    check_psd, kron, partial_trace_env, partial_trace_sys, spectral, Hermitian, Matrix,
};
use crate::scalar::{Real, C};
use crate::states::Density;
use crate::superop::{vectorize, SuperOp};
use crate::tolerance::Tolerances;

/// `U(t) = exp(-i t H)`.
#[derive(Clone)]
pub struct UnitaryEvolution<T: Real> {
    pub u: Matrix<T>,
    pub hamiltonian: Hermitian<T>,
    pub time: T,
}

impl<T: Real> UnitaryEvolution<T> {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// `|| U^+ U - Id ||_F`.
    pub fn unitarity_error(&self) -> T {
        (&(&self.u.adjoint() * &self.u) - &Matrix::identity(self.dim())).frobenius_norm()
    }
}

impl<T: Real> std::fmt::Debug for UnitaryEvolution<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UnitaryEvolution(t = {}, U = {:?})", self.time, self.u)
    }
}

pub fn unitary_from_hamiltonian<T: Real>(h: &Hermitian<T>, t: T) -> UnitaryEvolution<T> {
    let u = spectral(h).map(|w| C::new(T::zero(), -t * w).exp());
    UnitaryEvolution {
        u,
        hamiltonian: h.clone(),
        time: t,
    }
}

/// `U W U^+`.
pub fn evolve<T: Real>(w: &Density<T>, u: &UnitaryEvolution<T>) -> Result<Density<T>> {
    if w.dim() != u.dim() {
        return Err(Error::dims(format!(
            "state of dim {} under a unitary of dim {}",
            w.dim(),
            u.dim()
        )));
    }
    let out = &(&u.u * w.matrix()) * &u.u.adjoint();
    Ok(Density::new_unchecked(out.hermitian_part()))
}

/// A linear map `L(H_S) -> L(H_S)`.
#[derive(Clone, PartialEq)]
pub struct Channel<T> {
    d: usize,
    op: SuperOp<T>,
}

impl<T: Real> Channel<T> {
    pub fn from_superop(op: SuperOp<T>) -> Result<Self> {
        if op.din() != op.dout() {
            return Err(Error::dims(format!(
                "channel from dim {} to dim {}",
                op.din(),
                op.dout()
            )));
        }
        Ok(Self { d: op.din(), op })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            op: SuperOp::identity(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn superop(&self) -> &SuperOp<T> {
        &self.op
    }

    pub fn apply(&self, rho: &Matrix<T>) -> Matrix<T> {
        self.op.apply(rho)
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            d: self.d,
            op: self.op.compose(&other.op),
        }
    }
}

impl<T: Real> std::fmt::Debug for Channel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Channel(d = {}, {:?})", self.d, self.op)
    }
}

/// `rho -> tr_E(U F(rho) U^+)` tabulated on the matrix units.
fn assemble<T: Real>(f: &LiftingMap<T>, u: &Matrix<T>) -> Channel<T> {
    let (ds, de) = (f.ds(), f.de());
    let ud = u.adjoint();
    let columns: Vec<Vec<C<T>>> = (0..ds * ds)
        .into_par_iter()
        .map(|col| {
            let (c, r) = (col / ds, col % ds);
            let w = &(u * &f.apply(&Matrix::unit(ds, r, c))) * &ud;
            vectorize(&partial_trace_env(&w, ds, de).expect("composite dim"))
        })
        .collect();
    let n = ds * ds;
    let mut op = SuperOp::zeros(ds, ds);
    for (col, v) in columns.iter().enumerate() {
        for (row, z) in v.iter().enumerate().take(n) {
            op.set(row, col, *z);
        }
    }
    Channel { d: ds, op }
}

/// `Lambda_t(rho) = tr_E(U(t) (rho (x) D) U(t)^+)`.
pub fn reduced_dynamics_map<T: Real>(h: &Hermitian<T>, d: &Density<T>, t: T) -> Result<Channel<T>> {
    let de = d.dim();
    if de == 0 || !h.dim().is_multiple_of(de) {
        return Err(Error::dims(format!(
            "Hamiltonian of dim {} over environment dim {de}",
            h.dim()
        )));
    }
    let u = unitary_from_hamiltonian(h, t);
    Ok(assemble(&product_lifting(d, h.dim() / de), &u.u))
}

/// Reduced dynamics through an arbitrary lifting.
///
/// Liftings that are not right inverses of the partial trace are refused
/// unless `allow_non_right_inverse` is set.
pub fn reduced_dynamics_with<T: Real>(
    f: &LiftingMap<T>,
    u: &UnitaryEvolution<T>,
    allow_non_right_inverse: bool,
    tol: &Tolerances,
) -> Result<Channel<T>> {
    if u.dim() != f.ds() * f.de() {
        return Err(Error::dims(format!(
            "unitary of dim {} for a lifting into dim {}",
            u.dim(),
            f.ds() * f.de()
        )));
    }
    if !allow_non_right_inverse {
        let dev = check_trace_constraint(f);
        if dev > T::lit(tol.trace) {
            return Err(Error::Constraint(format!(
                "lifting is not a right inverse of the partial trace (deviation {:e})",
                dev.to_f64().unwrap()
            )));
        }
    }
    Ok(assemble(f, &u.u))
}

/// `sum_rc Lambda(E_rc) (x) E_rc`, the Choi matrix for `Omega = sum_i e_i (x) e_i`.
pub fn choi_matrix<T: Real>(ch: &Channel<T>) -> Matrix<T> {
    let d = ch.d;
    let mut out = Matrix::zeros(d * d);
    for r in 0..d {
        for c in 0..d {
            let e = Matrix::unit(d, r, c);
            out += &kron(&ch.apply(&e), &e);
        }
    }
    out
}

/// Max over the units `E_rr` and `E_rc` of `|tr Lambda(E_rc) - delta_rc|`.
pub fn trace_preservation_error<T: Real>(ch: &Channel<T>) -> T {
    let choi = choi_matrix(ch);
    let reduced = partial_trace_sys(&choi, ch.d, ch.d).expect("square");
    (&reduced - &Matrix::identity(ch.d)).max_abs()
}

/// Choi matrix PSD within `tol` and output partial trace equal to `Id` within `tol`.
pub fn is_cptp<T: Real>(ch: &Channel<T>, tol: T) -> bool {
    let choi = choi_matrix(ch);
    let psd = check_psd(&choi, tol).map(|c| c.is_psd).unwrap_or(false);
    psd && trace_preservation_error(ch) <= tol
}
