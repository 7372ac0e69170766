//! Four measurements per party: `I_α^β` on `(A_1, A_2, B_1, B_2)` and its
//! role-reversed copy `I'_α^β` on `(A'_1, A'_2, B'_1, B'_2)`, both maximally
//! violated on one weakly entangled state.
//!
//! `A_2` and `B'_2` both lie in the x–y plane, so their outcomes become
//! nearly independent uniform bits as the state approaches `|00⟩`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bell::{i_alpha_beta, BellExpression};
use crate::error::{Error, Result};
use crate::numeric::min_entropy_bits;
use crate::qubit::{
    correlators_of, joint_expectation, local_expectation, max_violation_ialphabeta, QubitRealization,
};
use crate::randomness::{GuessContext, GuessingBound};

#[derive(Debug, Clone, PartialEq)]
pub struct DoubledRealization {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    /// Measurements entering `I_α^β`.
    pub unprimed: QubitRealization,
    /// `a` holds `A'_1, A'_2` and `b` holds `B'_1, B'_2`; Bob's primed
    /// measurements follow Alice's unprimed pattern and vice versa.
    pub primed: QubitRealization,
}

impl DoubledRealization {
    pub fn expression(&self) -> BellExpression {
        i_alpha_beta(self.alpha, self.beta).expect("parameters checked at construction")
    }

    /// `I'_α^β`: `I_α^β` with the parties exchanged.
    pub fn primed_expression(&self) -> BellExpression {
        self.expression().swap_parties()
    }

    pub fn unprimed_value(&self) -> f64 {
        self.expression().evaluate(&correlators_of(&self.unprimed))
    }

    pub fn primed_value(&self) -> f64 {
        self.primed_expression().evaluate(&correlators_of(&self.primed))
    }

    /// `(⟨A_2⟩, ⟨B'_2⟩)`.
    pub fn cross_marginals(&self) -> (f64, f64) {
        (
            local_expectation(self.theta, &self.unprimed.a[1]),
            local_expectation(self.theta, &self.primed.b[1]),
        )
    }
}

/// Builds the doubled construction for `α ≥ 1`, `β > 0`, `αβ < 2`.
pub fn build_doubled(alpha: f64, beta: f64) -> Result<DoubledRealization> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
    }
    let max = max_violation_ialphabeta(alpha, beta)?;
    let unprimed = max.realization;
    let primed = QubitRealization::new(max.theta_star, unprimed.b, unprimed.a)?;
    Ok(DoubledRealization {
        alpha,
        beta,
        theta: max.theta_star,
        unprimed,
        primed,
    })
}

/// `⟨A_2 B'_2⟩` on the shared two-qubit state.
pub fn correlator_a2_bprime2(dr: &DoubledRealization) -> f64 {
    joint_expectation(dr.theta, &dr.unprimed.a[1], &dr.primed.b[1])
}

/// Guessing probability of the outcome pair of `A_2` and `B'_2`.
pub fn guessing_22prime(alpha: f64, beta: f64) -> Result<GuessingBound> {
    let dr = build_doubled(alpha, beta)?;
    let (ma, mb) = dr.cross_marginals();
    let c = correlator_a2_bprime2(&dr);
    let g = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .iter()
        .map(|(a, b)| 0.25 * (1.0 + a * ma + b * mb + a * b * c))
        .fold(0.0, f64::max);
    Ok(GuessingBound {
        context: GuessContext::CrossPair { u: 1, v: 1 },
        inequality: (alpha, beta),
        violation: dr.unprimed_value(),
        g,
        hmin: min_entropy_bits(g),
        certified: g < 1.0,
    })
}

/// Summary emitted by the `doubled` CLI command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubledReport {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    #[serde(rename = "I_value")]
    pub i_value: f64,
    #[serde(rename = "Iprime_value")]
    pub iprime_value: f64,
    pub corr_a2_bp2: f64,
    pub g_22p: f64,
    pub hmin_bits: f64,
}

pub fn doubled_report(alpha: f64, beta: f64) -> Result<DoubledReport> {
    let dr = build_doubled(alpha, beta)?;
    let g = guessing_22prime(alpha, beta)?;
    Ok(DoubledReport {
        alpha,
        beta,
        theta: dr.theta,
        i_value: dr.unprimed_value(),
        iprime_value: dr.primed_value(),
        corr_a2_bp2: correlator_a2_bprime2(&dr),
        g_22p: g.g,
        hmin_bits: g.hmin,
    })
}

const UNITARY_TOL: f64 = 1e-12;

/// One degenerate Schmidt block of dimension `2d ⊗ 2d`.
///
/// The state is `(1/√d) Σ_l (cosθ|0_l 0_l⟩ + sinθ|1_l 1_l⟩)`. Bob's primed
/// basis is `|0'_l⟩ = Σ_m conj(V_ml)|0_m⟩` and `|1'_l⟩ = Σ_m conj(S_ml)|1_m⟩`.
/// In terms of the unitaries `W` (with `|0'_l⟩ = Σ_m W_lm|0_m⟩`) and `R`
/// (with `|1'_l⟩ = Σ_m (WR)_lm|1_m⟩`) this is `W = V†` and `R = V S†`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockInstance {
    d: usize,
    theta: f64,
    v: DMatrix<Complex64>,
    s: DMatrix<Complex64>,
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let id = DMatrix::<Complex64>::identity(n, n);
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl BlockInstance {
    pub fn new(d: usize, theta: f64, v: DMatrix<Complex64>, s: DMatrix<Complex64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("block degeneracy must be >= 1".into()));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("theta must be finite, got {theta}")));
        }
        for m in [&v, &s] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
            let defect = unitarity_defect(m);
            if defect > UNITARY_TOL {
                return Err(Error::Validation(format!(
                    "basis change is not unitary (max |UU† - I| = {defect:e})"
                )));
            }
        }
        Ok(Self { d, theta, v, s })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The normalized state vector, indexed `i·2d + j` with `|0_l⟩ = l` and
    /// `|1_l⟩ = d + l` on each side.
    pub fn state(&self) -> Vec<Complex64> {
        let n = 2 * self.d;
        let norm = (self.d as f64).sqrt();
        let mut psi = vec![Complex64::new(0.0, 0.0); n * n];
        for l in 0..self.d {
            psi[l * n + l] = Complex64::new(self.theta.cos() / norm, 0.0);
            psi[(self.d + l) * n + self.d + l] = Complex64::new(self.theta.sin() / norm, 0.0);
        }
        psi
    }

    /// `A_2 = Σ_l (|0_l⟩⟨1_l| + |1_l⟩⟨0_l|)` on Alice's side.
    pub fn a2(&self) -> DMatrix<Complex64> {
        let n = 2 * self.d;
        let mut a = DMatrix::zeros(n, n);
        for l in 0..self.d {
            a[(l, self.d + l)] = Complex64::new(1.0, 0.0);
            a[(self.d + l, l)] = Complex64::new(1.0, 0.0);
        }
        a
    }

    /// `B'_2 = Σ_l (|0'_l⟩⟨1'_l| + |1'_l⟩⟨0'_l|)` on Bob's side.
    pub fn bprime2(&self) -> DMatrix<Complex64> {
        let n = 2 * self.d;
        let mut b = DMatrix::zeros(n, n);
        for l in 0..self.d {
            let mut zero = DMatrix::<Complex64>::zeros(n, 1);
            let mut one = DMatrix::<Complex64>::zeros(n, 1);
            for m in 0..self.d {
                zero[m] = self.v[(m, l)].conj();
                one[self.d + m] = self.s[(m, l)].conj();
            }
            b += &zero * one.adjoint() + &one * zero.adjoint();
        }
        b
    }
}

/// `⟨Ψ|A_2 ⊗ B'_2|Ψ⟩` computed with explicit `4d² × 4d²` operators.
pub fn block_correlator(bi: &BlockInstance) -> f64 {
    let op = bi.a2().kronecker(&bi.bprime2());
    let psi = DMatrix::from_vec(op.nrows(), 1, bi.state());
    let value = psi.adjoint() * &op * &psi;
    value[(0, 0)].re
}

/// `(sin2θ/d)·Re tr(V S†)`.
pub fn block_correlator_formula(bi: &BlockInstance) -> f64 {
    let tr = (&bi.v * bi.s.adjoint()).trace();
    (2.0 * bi.theta).sin() / bi.d as f64 * tr.re
}

/// Haar-distributed `d × d` unitary: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}
