//! Pure two-qubit realizations `cosθ|00⟩ + sinθ|11⟩` measured with Pauli
//! observables `a⃗·σ⃗` and `b⃗·σ⃗`, and the maximal values of `I_α` and
//! `I_α^β` they reach.
//!
//! The state's correlation matrix is `T = diag(sin2θ, −sin2θ, 1)` and both
//! local Bloch vectors are `cos2θ·ẑ`, so every expectation value is a short
//! closed form in the measurement directions.

mod search;

pub use search::{numeric_maximize, SearchOptions, SearchResult};

use std::f64::consts::FRAC_PI_4;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::bell::BellExpression;
use crate::correlations::CorrelatorVector;
use crate::error::{Error, Result};

pub const REALIZATION_FORMAT: &str = "qubit-real/v1";

const NORM_TOL: f64 = 1e-12;

/// Schmidt angle plus the Bloch directions of `A_1, A_2, B_1, B_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitRealization {
    theta: f64,
    pub a: [Vector3<f64>; 2],
    pub b: [Vector3<f64>; 2],
}

impl QubitRealization {
    pub fn new(theta: f64, a: [Vector3<f64>; 2], b: [Vector3<f64>; 2]) -> Result<Self> {
        if !(theta.is_finite() && (-NORM_TOL..=FRAC_PI_4 + NORM_TOL).contains(&theta)) {
            return Err(Error::Validation(format!("theta {theta} outside [0, pi/4]")));
        }
        for (name, v) in ["a1", "a2", "b1", "b2"].iter().zip(a.iter().chain(b.iter())) {
            if !v.iter().all(|c| c.is_finite()) || (v.norm() - 1.0).abs() > NORM_TOL {
                return Err(Error::Validation(format!(
                    "measurement vector {name} has norm {}, expected 1",
                    v.norm()
                )));
            }
        }
        Ok(Self {
            theta: theta.clamp(0.0, FRAC_PI_4),
            a,
            b,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn correlators(&self) -> CorrelatorVector {
        correlators_of(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: RealizationFile = serde_json::from_str(text)?;
        if f.format != REALIZATION_FORMAT {
            return Err(Error::Validation(format!(
                "unsupported format tag {:?}, expected {REALIZATION_FORMAT:?}",
                f.format
            )));
        }
        let v = |x: [f64; 3]| Vector3::from(x);
        Self::new(f.theta, [v(f.a1), v(f.a2)], [v(f.b1), v(f.b2)])
    }

    pub fn to_json(&self) -> String {
        let v = |x: &Vector3<f64>| [x.x, x.y, x.z];
        let f = RealizationFile {
            format: REALIZATION_FORMAT.to_string(),
            theta: self.theta,
            a1: v(&self.a[0]),
            a2: v(&self.a[1]),
            b1: v(&self.b[0]),
            b2: v(&self.b[1]),
        };
        serde_json::to_string_pretty(&f).expect("realization serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationFile {
    pub format: String,
    pub theta: f64,
    pub a1: [f64; 3],
    pub a2: [f64; 3],
    pub b1: [f64; 3],
    pub b2: [f64; 3],
}

/// `T = diag(sin2θ, −sin2θ, 1)`.
pub fn correlation_matrix(theta: f64) -> Matrix3<f64> {
    let s = (2.0 * theta).sin();
    Matrix3::from_diagonal(&Vector3::new(s, -s, 1.0))
}

/// `⟨(a⃗·σ⃗) ⊗ (b⃗·σ⃗)⟩` on `cosθ|00⟩ + sinθ|11⟩`.
pub fn joint_expectation(theta: f64, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let s = (2.0 * theta).sin();
    s * (a.x * b.x - a.y * b.y) + a.z * b.z
}

/// `⟨a⃗·σ⃗⟩` on either reduced state, which is `cos2θ·a_z`.
pub fn local_expectation(theta: f64, a: &Vector3<f64>) -> f64 {
    (2.0 * theta).cos() * a.z
}

pub fn correlators_of(r: &QubitRealization) -> CorrelatorVector {
    let mut cv = CorrelatorVector::default();
    for u in 0..2 {
        cv.alice[u] = local_expectation(r.theta, &r.a[u]);
        cv.bob[u] = local_expectation(r.theta, &r.b[u]);
        for v in 0..2 {
            cv.joint[u][v] = joint_expectation(r.theta, &r.a[u], &r.b[v]);
        }
    }
    cv
}

/// Free parameters of the two saturating points of `I_α ≤ 2√(α² + sin²2θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalParams {
    /// `tan μ = sin2θ / α`, `μ ∈ [0, π/2]`.
    pub mu: f64,
    /// Common azimuth of the x–y components, in `[0, 2π)`.
    pub phi: f64,
    /// `+1` or `-1`; which of the two saturating points.
    pub sign: f64,
}

impl OptimalParams {
    pub fn new(alpha: f64, theta: f64, phi: f64, sign: f64) -> Self {
        Self {
            mu: ((2.0 * theta).sin() / alpha).atan(),
            phi: phi.rem_euclid(std::f64::consts::TAU),
            sign: if sign < 0.0 { -1.0 } else { 1.0 },
        }
    }

    /// The canonical point: `φ = 0`, `+` sign.
    pub fn canonical(alpha: f64, theta: f64) -> Self {
        Self::new(alpha, theta, 0.0, 1.0)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")))
    }
}

/// Measurements saturating the fixed-θ bound on `I_α`:
/// `A_1 = ±σ_z`, `A_2 = cosφ σ_x + sinφ σ_y`,
/// `B_{1,2} = ±cosμ σ_z ± sinμ (cosφ σ_x − sinφ σ_y)`.
pub fn optimal_realization(alpha: f64, theta: f64, params: &OptimalParams) -> Result<QubitRealization> {
    check_alpha(alpha)?;
    if !(theta > 0.0 && theta <= FRAC_PI_4 + NORM_TOL) {
        return Err(Error::Domain(format!("theta must lie in (0, pi/4], got {theta}")));
    }
    let s = params.sign;
    let (sin_mu, cos_mu) = params.mu.sin_cos();
    let (sin_phi, cos_phi) = params.phi.sin_cos();
    let z = Vector3::z();
    let xy = Vector3::new(cos_phi, -sin_phi, 0.0);
    QubitRealization::new(
        theta.min(FRAC_PI_4),
        [s * z, Vector3::new(cos_phi, sin_phi, 0.0)],
        [s * cos_mu * z + sin_mu * xy, s * cos_mu * z - sin_mu * xy],
    )
}

/// `2√(α² + sin²2θ)`, the largest `I_α` value on a state with Schmidt angle θ.
pub fn tsirelson_ialpha_fixed_theta(alpha: f64, theta: f64) -> f64 {
    let s = (2.0 * theta).sin();
    2.0 * (alpha * alpha + s * s).sqrt()
}

/// The unique correlations reaching `2√(α² + 1)`.
///
/// Marginals vanish, `⟨A_1B_v⟩ = α/√(1+α²)` and
/// `⟨A_2B_1⟩ = −⟨A_2B_2⟩ = 1/√(1+α²)`.
pub fn max_violation_ialpha(alpha: f64) -> Result<(f64, CorrelatorVector)> {
    check_alpha(alpha)?;
    let n = (1.0 + alpha * alpha).sqrt();
    let cv = CorrelatorVector::from_flat([0.0; 2], [0.0; 2], [alpha / n, alpha / n, 1.0 / n, -1.0 / n]);
    Ok((2.0 * n, cv))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IAlphaBetaMaximum {
    pub value: f64,
    pub theta_star: f64,
    pub realization: QubitRealization,
}

/// `sin2θ*` at which `I_α^β` is maximal; requires `αβ < 2`.
pub fn optimal_sin_2theta(alpha: f64, beta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    if alpha * beta >= 2.0 {
        return Err(Error::Infeasible(format!(
            "alpha*beta = {} >= 2: no quantum value exceeds the local bound {}",
            alpha * beta,
            beta + 2.0 * alpha
        )));
    }
    let q = beta * beta / 4.0;
    Ok(((1.0 - alpha * alpha * q) / (1.0 + q)).sqrt())
}

/// Maximal quantum value `2√((1+α²)(1+β²/4))` of `I_α^β` and a realization
/// attaining it.
pub fn max_violation_ialphabeta(alpha: f64, beta: f64) -> Result<IAlphaBetaMaximum> {
    let sin2t = optimal_sin_2theta(alpha, beta)?;
    let theta_star = 0.5 * sin2t.min(1.0).asin();
    let realization = optimal_realization(alpha, theta_star, &OptimalParams::canonical(alpha, theta_star))?;
    let value = 2.0 * ((1.0 + alpha * alpha) * (1.0 + beta * beta / 4.0)).sqrt();
    Ok(IAlphaBetaMaximum {
        value,
        theta_star,
        realization,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorodeckiMaximum {
    /// `2√(α²|Tc⃗_1|² + |Tc⃗_2|²)`.
    pub value: f64,
    pub realization: QubitRealization,
    pub mu: f64,
    pub c1: Vector3<f64>,
    pub c2: Vector3<f64>,
}

/// Maximizes `I_α` over all Pauli measurements for a fixed state.
///
/// Writing `b⃗_1 ± b⃗_2 = 2cosμ c⃗_1, 2sinμ c⃗_2` with `c⃗_1 ⊥ c⃗_2`, the value is
/// `2α cosμ (a⃗_1·Tc⃗_1) + 2 sinμ (a⃗_2·Tc⃗_2)`. It is maximal for
/// `a⃗_u = Tc⃗_u/|Tc⃗_u|`, `tan μ = |Tc⃗_2|/(α|Tc⃗_1|)`, and with `c⃗_1`, `c⃗_2`
/// along the two largest singular directions of `T` (`α ≥ 1` weights `c⃗_1`).
pub fn horodecki_maximize(alpha: f64, theta: f64) -> Result<HorodeckiMaximum> {
    check_alpha(alpha)?;
    if !(theta > 0.0 && theta <= FRAC_PI_4 + NORM_TOL) {
        return Err(Error::Domain(format!("theta must lie in (0, pi/4], got {theta}")));
    }
    let theta = theta.min(FRAC_PI_4);
    let t = correlation_matrix(theta);

    // T is diagonal: singular directions are the axes. Prefer z, then x, on ties.
    let mut axes = [2usize, 0, 1];
    axes.sort_by(|&i, &j| t[(j, j)].abs().total_cmp(&t[(i, i)].abs()));
    let c1 = Vector3::ith(axes[0], 1.0);
    let c2 = Vector3::ith(axes[1], 1.0);

    let tc1 = t * c1;
    let tc2 = t * c2;
    let (n1, n2) = (tc1.norm(), tc2.norm());
    let mu = n2.atan2(alpha * n1);
    let (sin_mu, cos_mu) = mu.sin_cos();
    let realization = QubitRealization::new(
        theta,
        [tc1 / n1, tc2 / n2],
        [cos_mu * c1 + sin_mu * c2, cos_mu * c1 - sin_mu * c2],
    )?;
    Ok(HorodeckiMaximum {
        value: 2.0 * (alpha * alpha * n1 * n1 + n2 * n2).sqrt(),
        realization,
        mu,
        c1,
        c2,
    })
}

/// Evaluates an expression on a realization.
pub fn realization_value(expr: &BellExpression, r: &QubitRealization) -> f64 {
    expr.evaluate(&correlators_of(r))
}
