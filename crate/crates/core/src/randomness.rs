//! Guessing probabilities and min-entropy bounds.

use std::io::Write;

use rayon::prelude::*;

use crate::correlations::Behavior;
use crate::error::{Error, Result};
use crate::numeric::{fmt_sig, min_entropy_bits};
use crate::qubit::{optimal_realization, OptimalParams, QubitRealization};

/// Slack allowed above the quantum maximum before a violation is rejected.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Which outcome(s) a guessing probability refers to. Settings are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuessContext {
    /// Alice's outcome for setting `u`.
    Single { u: usize },
    /// The pair of outcomes for settings `(u, v)`.
    Pair { u: usize, v: usize },
    /// Alice's unprimed setting `u` with Bob's primed setting `v` in the
    /// four-measurement construction.
    CrossPair { u: usize, v: usize },
}

impl GuessContext {
    /// Smallest guessing probability the context allows.
    pub fn floor(&self) -> f64 {
        match self {
            GuessContext::Single { .. } => 0.5,
            GuessContext::Pair { .. } | GuessContext::CrossPair { .. } => 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessingBound {
    pub context: GuessContext,
    /// `(α, β)` of the inequality the bound is derived from.
    pub inequality: (f64, f64),
    pub violation: f64,
    pub g: f64,
    /// `−log₂ g`.
    pub hmin: f64,
    /// False when the violation is too small to certify anything (`g = 1`).
    pub certified: bool,
}

impl GuessingBound {
    pub(crate) fn new(context: GuessContext, inequality: (f64, f64), violation: f64, g: f64) -> Self {
        let g = g.clamp(context.floor(), 1.0);
        Self {
            context,
            inequality,
            violation,
            g,
            hmin: min_entropy_bits(g).max(0.0),
            certified: g < 1.0,
        }
    }
}

/// `max_{ab} p(ab|uv)`.
pub fn guessing_pair(beh: &Behavior, u: usize, v: usize) -> f64 {
    (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .map(|(a, b)| beh.prob(u, v, a, b))
        .fold(0.0, f64::max)
}

/// `max_a p(a|u)`.
pub fn guessing_single(beh: &Behavior, u: usize) -> f64 {
    beh.alice_marginal(u, 0).max(beh.alice_marginal(u, 1))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")))
    }
}

/// `2√(1 + α²)`, the largest quantum value of `I_α`.
pub fn ialpha_quantum_max(alpha: f64) -> f64 {
    2.0 * (1.0 + alpha * alpha).sqrt()
}

/// Upper bound `½ + ½√(1 + α² − I²/4)` on Alice's guessing probability for
/// setting 1, given an observed `I_α` value `violation`.
pub fn certified_single_bound(alpha: f64, violation: f64) -> Result<GuessingBound> {
    check_alpha(alpha)?;
    if !violation.is_finite() || violation > ialpha_quantum_max(alpha) + VIOLATION_TOL {
        return Err(Error::Domain(format!(
            "I = {violation} exceeds the quantum maximum {} of I_alpha at alpha = {alpha}",
            ialpha_quantum_max(alpha)
        )));
    }
    let radicand = (1.0 + alpha * alpha - violation * violation / 4.0).max(0.0);
    let g = 0.5 + 0.5 * radicand.sqrt();
    Ok(GuessingBound::new(GuessContext::Single { u: 0 }, (alpha, 0.0), violation, g))
}

/// Realization for which [`guessing_single`] meets [`certified_single_bound`]:
/// the saturating point with `sin²2θ = I²/4 − α²`.
pub fn tightness_witness(alpha: f64, violation: f64) -> Result<QubitRealization> {
    check_alpha(alpha)?;
    let max = ialpha_quantum_max(alpha);
    if !(violation >= 2.0 * alpha && violation <= max + VIOLATION_TOL) {
        return Err(Error::Domain(format!(
            "I = {violation} outside [{}, {max}]",
            2.0 * alpha
        )));
    }
    let sin2_sq = (violation * violation / 4.0 - alpha * alpha).clamp(0.0, 1.0);
    let theta = 0.5 * sin2_sq.sqrt().asin();
    optimal_realization(alpha, theta, &OptimalParams::canonical(alpha, theta))
}

/// Pair guessing probability `¼(1 + 1/√(α²+1))` for settings `(2, v)` at the
/// maximal violation of `I_α`.
pub fn global_guessing_at_max(alpha: f64) -> Result<GuessingBound> {
    check_alpha(alpha)?;
    let g = 0.25 * (1.0 + 1.0 / (alpha * alpha + 1.0).sqrt());
    Ok(GuessingBound::new(
        GuessContext::Pair { u: 1, v: 0 },
        (alpha, 0.0),
        ialpha_quantum_max(alpha),
        g,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub violation: f64,
    pub bound: Option<GuessingBound>,
}

/// [`certified_single_bound`] over a grid; out-of-domain points carry `None`.
pub fn curve(alpha: f64, grid: &[f64]) -> Vec<CurvePoint> {
    grid.par_iter()
        .map(|&violation| CurvePoint {
            violation,
            bound: certified_single_bound(alpha, violation).ok(),
        })
        .collect()
}

/// Evenly spaced grid of `steps` points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Writes `header` then one `I,g,hmin` row per point with 9 significant
/// digits; invalid points become `I,NaN,NaN`.
pub fn write_curve_csv<W: Write>(out: &mut W, header: &str, points: &[CurvePoint]) -> std::io::Result<()> {
    writeln!(out, "{header}")?;
    for p in points {
        let (g, h) = match &p.bound {
            Some(b) => (fmt_sig(b.g, 9), fmt_sig(b.hmin, 9)),
            None => ("NaN".to_string(), "NaN".to_string()),
        };
        writeln!(out, "{},{g},{h}", fmt_sig(p.violation, 9))?;
    }
    Ok(())
}

pub const CURVE_HEADER: &str = "I,G_bound,min_entropy_bits";
