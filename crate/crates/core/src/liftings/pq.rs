//! The two-parameter inclusion used to equate diagonal components:
//! for `a, b, c >= 0`,
//! `{(1+t)(1+p) >= 1, t >= -1} ⊂ {(b+at)(b+cp) >= b^2, b+at >= 0}` iff `a = c <= b`.

use crate::error::{Error, Result};

const EXACT_TOL: f64 = 1e-12;

fn check_nonneg(a: f64, b: f64, c: f64) -> Result<()> {
    if [a, b, c].iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "({a}, {b}, {c}) must be finite and nonnegative"
        )));
    }
    Ok(())
}

/// Closed-form side of the inclusion: `a == c` and `a <= b`, both within `1e-12`.
///
/// For `b = 0` the inclusion actually holds whenever `a = 0`, whatever `c`;
/// that degenerate face lies on `a = b` and is not treated specially.
pub fn lemma_pq(a: f64, b: f64, c: f64) -> Result<bool> {
    check_nonneg(a, b, c)?;
    Ok((a - c).abs() <= EXACT_TOL && a <= b + EXACT_TOL)
}

/// Sampling grid for [`brute_force_pq`].
///
/// `t` runs over `±10^s` and `-1 + 10^s` with `s` stepped by `resolution`
/// between `10^min_exp` and the region's extent (`t <= 10^max_exp`), plus
/// `t = 0`. For each `t`, `p` takes the region boundary `1/(1+t) - 1` and
/// the interior offsets in `p_offsets` (relative to `1 + |p|`).
#[derive(Clone, Debug, PartialEq)]
pub struct PqGrid {
    pub resolution: f64,
    pub min_exp: f64,
    pub max_exp: f64,
    pub p_offsets: Vec<f64>,
}

impl Default for PqGrid {
    fn default() -> Self {
        Self {
            resolution: 1e-3,
            min_exp: -12.0,
            max_exp: 3.0,
            p_offsets: vec![0.0, 1e-3, 1.0],
        }
    }
}

impl PqGrid {
    pub fn t_values(&self) -> Vec<f64> {
        let steps = |lo: f64, hi: f64| {
            let n = ((hi - lo) / self.resolution).round() as usize;
            (0..=n).map(move |i| 10f64.powf(lo + i as f64 * self.resolution))
        };
        let mut ts = vec![0.0];
        ts.extend(steps(self.min_exp, self.max_exp));
        // (-1, 0): approach 0 from below and -1 from above.
        ts.extend(steps(self.min_exp, 0.0).filter(|&x| x < 1.0).map(|x| -x));
        ts.extend(
            steps(self.min_exp, 0.0)
                .filter(|&x| x < 1.0)
                .map(|x| -1.0 + x),
        );
        ts
    }
}

/// Checks the inclusion pointwise on `grid`; `true` when no sampled point of
/// the left-hand region violates the right-hand conditions.
pub fn brute_force_pq(a: f64, b: f64, c: f64, grid: &PqGrid) -> Result<bool> {
    check_nonneg(a, b, c)?;
    let ts = grid.t_values();
    Ok(brute_force_on(a, b, c, &ts, &grid.p_offsets))
}

pub(crate) fn brute_force_on(a: f64, b: f64, c: f64, ts: &[f64], offsets: &[f64]) -> bool {
    let b2 = b * b;
    for &t in ts {
        if t <= -1.0 {
            continue;
        }
        let x = b + a * t;
        let slack = 1e-12 * (b + a * t.abs());
        if x < -slack {
            return false;
        }
        let p_boundary = 1.0 / (1.0 + t) - 1.0;
        for &off in offsets {
            let p = p_boundary + off * (1.0 + p_boundary.abs());
            if (1.0 + t) * (1.0 + p) < 1.0 {
                continue;
            }
            let y = b + c * p;
            let lhs = x * y;
            let tol = 1e-12 * (x.abs() * (b + c * p.abs()) + b2);
            if lhs < b2 - tol {
                return false;
            }
        }
    }
    true
}
