//! CHSH combination of χ correlations and an exhaustive settings search.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{chi, ModelKind};
use crate::scalar::Scalar;
use crate::types::Angle;

/// Analyzer settings `(a, a′)` for channel 1 and `(b, b′)` for channel 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings<T> {
    pub a: Angle<T>,
    pub a_prime: Angle<T>,
    pub b: Angle<T>,
    pub b_prime: Angle<T>,
}

impl<T: Scalar> ChshSettings<T> {
    pub fn new(a: T, a_prime: T, b: T, b_prime: T) -> Result<Self> {
        Ok(ChshSettings {
            a: Angle::new(a)?,
            a_prime: Angle::new(a_prime)?,
            b: Angle::new(b)?,
            b_prime: Angle::new(b_prime)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshResult<T> {
    pub s: T,
    pub settings: ChshSettings<T>,
    pub model: ModelKind,
}

/// Local-realist bound on `s`.
pub const CLASSICAL_BOUND: f64 = 2.0;

fn combine<T: Scalar>(ab: T, ab_p: T, a_p_b: T, a_p_b_p: T) -> T {
    (ab - ab_p).abs() + (a_p_b + a_p_b_p).abs()
}

/// `s = |χ(a,b) − χ(a,b′)| + |χ(a′,b) + χ(a′,b′)|`.
pub fn chsh_statistic<T: Scalar>(settings: ChshSettings<T>, model: ModelKind) -> ChshResult<T> {
    let ChshSettings {
        a,
        a_prime,
        b,
        b_prime,
    } = settings;
    let s = combine(
        chi(a, b, model),
        chi(a, b_prime, model),
        chi(a_prime, b, model),
        chi(a_prime, b_prime, model),
    );
    ChshResult { s, settings, model }
}

/// Grid coordinates `k · step` for all `k` with `k · step < π`.
fn grid_points<T: Scalar>(step: T) -> Vec<T> {
    let pi = T::PI();
    (0usize..)
        .map(|k| T::from_usize(k).expect("grid index representable") * step)
        .take_while(|&x| x < pi)
        .collect()
}

/// Exhaustive maximization of the CHSH statistic over `{0, step, …} ∩ [0, π)`
/// in each of the four settings.
///
/// Ties resolve to the lexicographically smallest `(a, a′, b, b′)` index
/// tuple, matching a sequential scan that only accepts strict improvements.
pub fn maximize_chsh<T: Scalar>(model: ModelKind, grid_step: Angle<T>) -> Result<ChshResult<T>> {
    let step = grid_step.radians();
    if step.is_nan() || step <= T::zero() || step > T::FRAC_PI_8() {
        return Err(Error::domain(format!(
            "grid step must lie in (0, π/8], got {step}"
        )));
    }
    let points = grid_points(step);
    let angles: Vec<Angle<T>> = points
        .iter()
        .map(|&x| Angle::new(x))
        .collect::<Result<_>>()?;
    let n = angles.len();
    let table: Vec<T> = angles
        .iter()
        .flat_map(|&t1| angles.iter().map(move |&t2| chi(t1, t2, model)))
        .collect();
    let e = |i: usize, j: usize| table[i * n + j];

    // Per `a`: best (s, (a, a', b, b')) found by a lexicographic strict-improvement scan.
    let best = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best: Option<(T, [usize; 4])> = None;
            for ap in 0..n {
                for b in 0..n {
                    for bp in 0..n {
                        let s = combine(e(a, b), e(a, bp), e(ap, b), e(ap, bp));
                        if best.is_none_or(|(bs, _)| s > bs) {
                            best = Some((s, [a, ap, b, bp]));
                        }
                    }
                }
            }
            best.expect("grid is non-empty")
        })
        .reduce_with(|x, y| {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }
        })
        .expect("grid is non-empty");

    let [a, ap, b, bp] = best.1;
    Ok(ChshResult {
        s: best.0,
        settings: ChshSettings {
            a: angles[a],
            a_prime: angles[ap],
            b: angles[b],
            b_prime: angles[bp],
        },
        model,
    })
}
