//! Randomness certifiable from a CHSH value when only no-signalling is
//! assumed.
//!
//! The polytope's extreme points are the 16 deterministic behaviors and the
//! 8 PR boxes. Maximizing one probability `p(ab|uv)` subject to a fixed
//! canonical CHSH value is a linear program with two equality rows, so some
//! optimum is supported on at most two vertices; scanning all vertex pairs
//! solves it exactly. The simplex solver gives an independent check.

use rayon::prelude::*;

use crate::bell::BellExpression;
use crate::correlations::{deterministic_vertices, pr_boxes, Behavior, PolytopeVertex};
use crate::error::{Error, Result};
use crate::randomness::{CurvePoint, GuessContext, GuessingBound};
use crate::simplex::{self, LpOutcome};

pub const NS_CURVE_HEADER: &str = "I,G_ns,min_entropy_bits";

/// Tolerance for matching a single vertex's CHSH value to the target.
const CHSH_MATCH_TOL: f64 = 1e-12;

/// Deterministic vertices followed by PR boxes (24 in total).
pub fn ns_vertices() -> Vec<PolytopeVertex> {
    let mut v = deterministic_vertices();
    v.extend(pr_boxes());
    v
}

/// One outcome pair `(a, b)` for settings `(u, v)`, all 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Target {
    pub a: usize,
    pub b: usize,
    pub u: usize,
    pub v: usize,
}

impl Target {
    /// All 16 targets in `(u, v, a, b)` lexicographic order.
    pub fn all() -> impl Iterator<Item = Target> {
        (0..16).map(|i| Target {
            u: i >> 3 & 1,
            v: i >> 2 & 1,
            a: i >> 1 & 1,
            b: i & 1,
        })
    }

    fn prob(&self, beh: &Behavior) -> f64 {
        beh.prob(self.u, self.v, self.a, self.b)
    }
}

/// Convex weights over [`ns_vertices`].
#[derive(Debug, Clone, PartialEq)]
pub struct NsDecomposition {
    pub weights: Vec<f64>,
}

impl NsDecomposition {
    pub fn behavior(&self) -> Result<Behavior> {
        let parts: Vec<(f64, Behavior)> = self
            .weights
            .iter()
            .zip(ns_vertices())
            .map(|(&w, v)| (w, v.behavior))
            .collect();
        Behavior::mixture(&parts)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsGuess {
    pub g: f64,
    pub target: Target,
    pub witness: NsDecomposition,
}

fn check_range(chsh: f64) -> Result<()> {
    if (2.0..=4.0).contains(&chsh) {
        Ok(())
    } else {
        Err(Error::Domain(format!("CHSH value must lie in [2, 4], got {chsh}")))
    }
}

fn vertex_data() -> (Vec<f64>, Vec<Behavior>) {
    let chsh = BellExpression::chsh();
    ns_vertices()
        .into_iter()
        .map(|v| (chsh.evaluate(&v.behavior.correlators()), v.behavior))
        .unzip()
}

/// Largest `p(ab|uv)` over no-signalling behaviors with canonical CHSH value
/// `chsh`, by exhaustive scan of single vertices and vertex pairs.
pub fn ns_max_guessing(chsh: f64, target: Target) -> Result<NsGuess> {
    check_range(chsh)?;
    let (values, behaviors) = vertex_data();
    let t: Vec<f64> = behaviors.iter().map(|b| target.prob(b)).collect();
    let n = values.len();

    let mut best: Option<(f64, usize, usize, f64)> = None;
    let mut consider = |g: f64, i: usize, j: usize, lambda: f64| {
        if best.is_none_or(|(bg, ..)| g > bg) {
            best = Some((g, i, j, lambda));
        }
    };
    for i in 0..n {
        if (values[i] - chsh).abs() <= CHSH_MATCH_TOL {
            consider(t[i], i, i, 1.0);
        }
        for j in 0..n {
            if values[i] < chsh && chsh < values[j] {
                let lambda = (values[j] - chsh) / (values[j] - values[i]);
                consider(lambda * t[i] + (1.0 - lambda) * t[j], i, j, lambda);
            }
        }
    }
    let (_, i, j, lambda) = best.expect("the CHSH range [2, 4] is covered by vertex pairs");
    let mut weights = vec![0.0; n];
    weights[i] += lambda;
    weights[j] += 1.0 - lambda;
    let witness = NsDecomposition { weights };
    let g = target.prob(&witness.behavior()?);
    Ok(NsGuess { g, target, witness })
}

/// The same optimum computed by the simplex solver over all 24 weights.
pub fn ns_max_guessing_lp(chsh: f64, target: Target) -> Result<f64> {
    check_range(chsh)?;
    let (values, behaviors) = vertex_data();
    let objective: Vec<f64> = behaviors.iter().map(|b| target.prob(b)).collect();
    let a_eq = vec![vec![1.0; values.len()], values];
    match simplex::maximize(&objective, &a_eq, &[1.0, chsh]) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::Validation(format!("unexpected LP outcome {other:?}"))),
    }
}

/// Best target at CHSH value `chsh`; ties go to the first target in
/// [`Target::all`] order.
pub fn ns_best_guess(chsh: f64) -> Result<NsGuess> {
    let mut best: Option<NsGuess> = None;
    for target in Target::all() {
        let g = ns_max_guessing(chsh, target)?;
        if best.as_ref().is_none_or(|b| g.g > b.g) {
            best = Some(g);
        }
    }
    Ok(best.expect("16 targets"))
}

/// Best no-signalling guessing probability at each grid point.
pub fn ns_curve(grid: &[f64]) -> Vec<CurvePoint> {
    grid.par_iter()
        .map(|&violation| CurvePoint {
            violation,
            bound: ns_best_guess(violation).ok().map(|best| {
                let t = best.target;
                GuessingBound::new(GuessContext::Pair { u: t.u, v: t.v }, (1.0, 0.0), violation, best.g)
            }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn endpoint_values() {
        let g4 = ns_best_guess(4.0).unwrap();
        assert_eq!(g4.g, 0.5);
        let g2 = ns_best_guess(2.0).unwrap();
        assert_eq!(g2.g, 1.0);
        let g3 = ns_best_guess(3.0).unwrap();
        assert_eq!(g3.g, 0.75);
        // half PR box, half aligned deterministic vertex
        let nz: Vec<f64> = g3.witness.weights.iter().copied().filter(|&w| w > 0.0).collect();
        assert_eq!(nz, vec![0.5, 0.5]);
    }

    #[test]
    fn tsirelson_comparison_row() {
        let g = ns_best_guess(2.0 * SQRT_2).unwrap();
        close(g.g, 1.5 - SQRT_2 / 2.0, 1e-12);
        close(g.g, 0.7928932, 1e-7);
    }

    #[test]
    fn witness_reconstructs() {
        for &i in &[2.0, 2.3, 2.0 * SQRT_2, 3.5, 4.0] {
            for target in Target::all() {
                let r = ns_max_guessing(i, target).unwrap();
                let beh = r.witness.behavior().unwrap();
                let chsh = BellExpression::chsh().evaluate(&beh.correlators());
                close(chsh, i, 1e-9);
                assert_eq!(target.prob(&beh), r.g);
                assert_eq!(r.witness.weights.len(), 24);
            }
        }
    }

    #[test]
    fn scan_matches_simplex() {
        for &i in &[2.0, 2.5, 3.0, 3.7, 4.0] {
            for target in Target::all() {
                let scan = ns_max_guessing(i, target).unwrap().g;
                let lp = ns_max_guessing_lp(i, target).unwrap();
                close(scan, lp, 1e-9);
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(ns_max_guessing(1.9, Target::all().next().unwrap()), Err(Error::Domain(_))));
        assert!(ns_best_guess(4.1).is_err());
        let pts = ns_curve(&[1.5, 2.0, 4.0]);
        assert!(pts[0].bound.is_none());
        assert_eq!(pts[2].bound.unwrap().hmin, 1.0);
    }
}
