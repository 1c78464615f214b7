use super::{Components, LiftingMap};
use crate::operators::Matrix;
use crate::scalar::{ci, Real};
use crate::states::{basis_g, basis_g_star};

/// Component diagnostics for one index pair `(k, l)`, `k <= l`.
///
/// All quantities are Frobenius norms of component blocks and vanish for
/// every lifting of the form `rho -> rho (x) D`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDiagnostics<T> {
    pub k: usize,
    pub l: usize,
    /// Mass of `F(g^kl)` (and of `F(g*^kl)` when `k < l`) outside the components
    /// `(k,k), (k,l), (l,k), (l,l)`.
    pub off_support: T,
    /// Spread among the four nonzero components of `F(g^kl)` (zero for `k == l`).
    pub equal_components: T,
    /// Deviation from `F(g*)^kk = -i F(g*)^kl = i F(g*)^lk = F(g*)^ll` (zero for `k == l`).
    pub phase_relations: T,
    /// Largest distance of the normalized components of `F(g^kl)` from `F(g^00)^00`.
    pub cross_g: T,
    /// Same for the phase-normalized components of `F(g*^kl)` (zero for `k == l`).
    pub cross_g_star: T,
}

/// Maxima over all index pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport<T> {
    /// `F(g^kk)` has only the `(k,k)`-component.
    pub diagonal_off_support: T,
    /// `F(g^kl)`, `F(g*^kl)` have only `(k,k), (k,l), (l,k), (l,l)`-components.
    pub pair_off_support: T,
    /// The nonzero components of `F(g^kl)` are equal.
    pub equal_components: T,
    /// The nonzero components of `F(g*^kl)` satisfy the `+-i` phase relations.
    pub phase_relations: T,
    /// Components of `F(g^kl)` all equal `F(g^00)^00`.
    pub g_cross: T,
    /// Phase-normalized components of `F(g*^kl)` all equal `F(g^00)^00`.
    pub g_star_cross: T,
    pub pairs: Vec<PairDiagnostics<T>>,
}

impl<T: Real> StepReport<T> {
    pub fn max_deviation(&self) -> T {
        [
            self.diagonal_off_support,
            self.pair_off_support,
            self.equal_components,
            self.phase_relations,
            self.g_cross,
            self.g_star_cross,
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }

    /// `(name, value)` rows in derivation order.
    pub fn rows(&self) -> [(&'static str, T); 6] {
        [
            ("diagonal_off_support", self.diagonal_off_support),
            ("pair_off_support", self.pair_off_support),
            ("equal_components", self.equal_components),
            ("phase_relations", self.phase_relations),
            ("g_cross", self.g_cross),
            ("g_star_cross", self.g_star_cross),
        ]
    }
}

fn dist<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> T {
    (a - b).frobenius_norm()
}

/// Evaluates the structural identities used to derive `F(rho) = rho (x) D`.
pub fn proof_step_diagnostics<T: Real>(f: &LiftingMap<T>) -> StepReport<T> {
    let ds = f.ds();
    let i = ci::<T>();
    let minus_i = -i;
    let g00 = basis_g::<T>(0, 0, ds).expect("ds >= 1");
    let a = f.components(&g00).block(0, 0).clone();

    let mut report = StepReport {
        diagonal_off_support: T::zero(),
        pair_off_support: T::zero(),
        equal_components: T::zero(),
        phase_relations: T::zero(),
        g_cross: T::zero(),
        g_star_cross: T::zero(),
        pairs: Vec::new(),
    };

    for k in 0..ds {
        for l in k..ds {
            let support = [(k, k), (k, l), (l, k), (l, l)];
            let cg: Components<T> = f.components(&basis_g(k, l, ds).expect("k <= l"));
            let mut pair = PairDiagnostics {
                k,
                l,
                off_support: cg.mass_outside(&support),
                equal_components: T::zero(),
                phase_relations: T::zero(),
                cross_g: T::zero(),
                cross_g_star: T::zero(),
            };
            if k == l {
                pair.cross_g = dist(cg.block(k, k), &a);
                report.diagonal_off_support = report.diagonal_off_support.max(pair.off_support);
            } else {
                let four = [
                    cg.block(k, k),
                    cg.block(k, l),
                    cg.block(l, k),
                    cg.block(l, l),
                ];
                pair.equal_components = four[1..]
                    .iter()
                    .map(|b| dist(b, four[0]))
                    .fold(T::zero(), T::max);
                pair.cross_g = four.iter().map(|b| dist(b, &a)).fold(T::zero(), T::max);

                let cs = f.components(&basis_g_star(k, l, ds).expect("k < l"));
                pair.off_support = pair.off_support.max(cs.mass_outside(&support));
                let normalized = [
                    cs.block(k, k).clone(),
                    cs.block(k, l).scale(minus_i),
                    cs.block(l, k).scale(i),
                    cs.block(l, l).clone(),
                ];
                pair.phase_relations = normalized[1..]
                    .iter()
                    .map(|b| dist(b, &normalized[0]))
                    .fold(T::zero(), T::max);
                pair.cross_g_star = normalized
                    .iter()
                    .map(|b| dist(b, &a))
                    .fold(T::zero(), T::max);

                report.pair_off_support = report.pair_off_support.max(pair.off_support);
                report.equal_components = report.equal_components.max(pair.equal_components);
                report.phase_relations = report.phase_relations.max(pair.phase_relations);
                report.g_star_cross = report.g_star_cross.max(pair.cross_g_star);
            }
            report.g_cross = report.g_cross.max(pair.cross_g);
            report.pairs.push(pair);
        }
    }
    report
}
