//! Multistart derivative-free maximization of a Bell expression over
//! two-qubit realizations.
//!
//! Each measurement direction is two spherical angles; θ is a ninth
//! coordinate unless fixed. Every restart runs a compass search (try ±step
//! along each coordinate, halve the step when no move improves) from a
//! seeded uniform starting point.

use std::f64::consts::{FRAC_PI_4, TAU};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{correlators_of, QubitRealization};
use crate::bell::BellExpression;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    /// The search stops once the step has shrunk below this.
    pub min_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 42,
            initial_step: 0.3,
            min_step: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    pub realization: QubitRealization,
    /// Index of the restart that produced the result.
    pub restart: usize,
}

const MAX_SWEEPS: usize = 200_000;

fn direction(polar: f64, azimuth: f64) -> Vector3<f64> {
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    Vector3::new(sp * ca, sp * sa, cp)
}

struct Objective<'a> {
    expr: &'a BellExpression,
    fixed_theta: Option<f64>,
}

impl Objective<'_> {
    fn dims(&self) -> usize {
        if self.fixed_theta.is_some() {
            8
        } else {
            9
        }
    }

    fn realization(&self, x: &[f64]) -> QubitRealization {
        let theta = match self.fixed_theta {
            Some(t) => t,
            None => x[8].clamp(0.0, FRAC_PI_4),
        };
        QubitRealization {
            theta,
            a: [direction(x[0], x[1]), direction(x[2], x[3])],
            b: [direction(x[4], x[5]), direction(x[6], x[7])],
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.expr.evaluate(&correlators_of(&self.realization(x)))
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dims());
        for _ in 0..4 {
            // uniform on the sphere
            let cos_polar: f64 = rng.random_range(-1.0..=1.0);
            x.push(cos_polar.acos());
            x.push(rng.random_range(0.0..TAU));
        }
        if self.fixed_theta.is_none() {
            x.push(rng.random_range(0.0..=FRAC_PI_4));
        }
        x
    }

    fn compass_search(&self, mut x: Vec<f64>, opts: &SearchOptions) -> (f64, Vec<f64>) {
        let mut best = self.value(&x);
        let mut step = opts.initial_step;
        let mut sweeps = 0;
        while step >= opts.min_step && sweeps < MAX_SWEEPS {
            sweeps += 1;
            let mut improved = false;
            for i in 0..x.len() {
                for dir in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + dir * step;
                    let v = self.value(&x);
                    if v > best {
                        best = v;
                        improved = true;
                        break;
                    }
                    x[i] = old;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (best, x)
    }
}

/// Best value of `expr` found over `opts.restarts` seeded restarts.
///
/// Restarts run in parallel; the winner is the largest value, with exact
/// ties going to the lowest restart index, so the result depends only on
/// the inputs and the seed.
pub fn numeric_maximize(expr: &BellExpression, fix_theta: Option<f64>, opts: &SearchOptions) -> SearchResult {
    let restarts = opts.restarts.max(1);
    let fixed_theta = fix_theta.map(|t| t.clamp(0.0, FRAC_PI_4));
    let objective = Objective { expr, fixed_theta };
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let start = objective.random_start(&mut rng);
            objective.compass_search(start, opts)
        })
        .collect();

    let (restart, (value, x)) = runs
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1 .0 > best.1 .0 { cur } else { best })
        .expect("at least one restart");
    let mut realization = objective.realization(&x);
    for v in realization.a.iter_mut().chain(realization.b.iter_mut()) {
        *v = v.normalize();
    }
    SearchResult {
        value,
        realization,
        restart,
    }
}
