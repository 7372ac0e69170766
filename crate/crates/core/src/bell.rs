//! Bell expressions in correlator form and their local bounds.

use serde::{Deserialize, Serialize};

use crate::correlations::{outcome_sign, strategy_correlators, CorrelatorVector};
use crate::error::{Error, Result};
use crate::numeric::fsum;

pub const EXPRESSION_FORMAT: &str = "bell-expr/v1";

/// Linear functional `g_A·⟨A⟩ + g_B·⟨B⟩ + Σ g_C[u][v]·⟨A_u B_v⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
    pub joint: [[f64; 2]; 2],
    pub name: Option<String>,
}

impl BellExpression {
    pub fn new(alice: [f64; 2], bob: [f64; 2], joint: [[f64; 2]; 2]) -> Self {
        Self {
            alice,
            bob,
            joint,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn chsh() -> Self {
        Self::new([0.0; 2], [0.0; 2], [[1.0, 1.0], [1.0, -1.0]]).named("CHSH")
    }

    pub fn joint_flat(&self) -> [f64; 4] {
        [self.joint[0][0], self.joint[0][1], self.joint[1][0], self.joint[1][1]]
    }

    pub fn evaluate(&self, cv: &CorrelatorVector) -> f64 {
        let j = self.joint_flat();
        let c = cv.joint_flat();
        fsum(&[
            self.alice[0] * cv.alice[0],
            self.alice[1] * cv.alice[1],
            self.bob[0] * cv.bob[0],
            self.bob[1] * cv.bob[1],
            j[0] * c[0],
            j[1] * c[1],
            j[2] * c[2],
            j[3] * c[3],
        ])
    }

    /// Maximum over the 16 local deterministic strategies.
    pub fn local_bound(&self) -> BoundReport {
        let values: Vec<f64> = (0..16)
            .map(|i| self.evaluate(&strategy_correlators(i)))
            .collect();
        let local_bound = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let attaining_strategies = (0..16).filter(|&i| values[i] == local_bound).collect();
        BoundReport {
            local_bound,
            attaining_strategies,
        }
    }

    /// The same inequality with Alice and Bob exchanged.
    pub fn swap_parties(&self) -> Self {
        Self {
            alice: self.bob,
            bob: self.alice,
            joint: [
                [self.joint[0][0], self.joint[1][0]],
                [self.joint[0][1], self.joint[1][1]],
            ],
            name: self.name.as_ref().map(|n| format!("{n}'")),
        }
    }

    pub fn relabel(&self, r: &Relabelling) -> Self {
        let cv = r.apply(&CorrelatorVector::new(self.alice, self.bob, self.joint));
        Self {
            alice: cv.alice,
            bob: cv.bob,
            joint: cv.joint,
            name: self.name.clone(),
        }
    }

    /// Converts `Σ I_{abuv} P(ab|uv)` into correlator form.
    ///
    /// `coeffs` uses the behavior table layout: rows `(u,v)` in order
    /// 11, 12, 21, 22 and columns `++, +-, -+, --`. Returns the expression and
    /// the constant offset `¼ Σ I_{abuv}`, which correlator form cannot carry.
    pub fn from_probability_coefficients(coeffs: &[[f64; 4]; 4]) -> (Self, f64) {
        let mut expr = Self::new([0.0; 2], [0.0; 2], [[0.0; 2]; 2]);
        let mut offset = 0.0;
        for u in 0..2 {
            for v in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let c = 0.25 * coeffs[2 * u + v][2 * a + b];
                        let (sa, sb) = (outcome_sign(a), outcome_sign(b));
                        offset += c;
                        expr.alice[u] += sa * c;
                        expr.bob[v] += sb * c;
                        expr.joint[u][v] += sa * sb * c;
                    }
                }
            }
        }
        (expr, offset)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ExpressionFile = serde_json::from_str(text)?;
        if file.format != EXPRESSION_FORMAT {
            return Err(Error::Validation(format!(
                "unsupported format tag {:?}, expected {EXPRESSION_FORMAT:?}",
                file.format
            )));
        }
        let all = file.g_a.iter().chain(&file.g_b).chain(&file.g_c);
        if all.clone().any(|c| !c.is_finite()) {
            return Err(Error::Validation("coefficients must be finite".into()));
        }
        let mut expr = Self::new(
            file.g_a,
            file.g_b,
            [[file.g_c[0], file.g_c[1]], [file.g_c[2], file.g_c[3]]],
        );
        expr.name = file.name;
        Ok(expr)
    }

    pub fn to_json(&self) -> String {
        let file = ExpressionFile {
            format: EXPRESSION_FORMAT.to_string(),
            g_a: self.alice,
            g_b: self.bob,
            g_c: self.joint_flat(),
            name: self.name.clone(),
        };
        serde_json::to_string_pretty(&file).expect("expression serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpressionFile {
    pub format: String,
    #[serde(rename = "gA")]
    pub g_a: [f64; 2],
    #[serde(rename = "gB")]
    pub g_b: [f64; 2],
    #[serde(rename = "gC")]
    pub g_c: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub local_bound: f64,
    /// Every maximizing strategy index (see
    /// [`strategy_signs`](crate::correlations::strategy_signs)), ascending.
    pub attaining_strategies: Vec<usize>,
}

/// `β⟨A_1⟩ + α⟨A_1B_1⟩ + α⟨A_1B_2⟩ + ⟨A_2B_1⟩ − ⟨A_2B_2⟩` for `α ≥ 1`, `β ≥ 0`.
pub fn i_alpha_beta(alpha: f64, beta: f64) -> Result<BellExpression> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::Domain(format!("alpha must be >= 1, got {alpha}")));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let name = if alpha == 1.0 && beta == 0.0 {
        "CHSH".to_string()
    } else {
        format!("I_alpha^beta(alpha={alpha}, beta={beta})")
    };
    Ok(BellExpression::new([beta, 0.0], [0.0; 2], [[alpha, alpha], [1.0, -1.0]]).named(name))
}

/// `I_α = I_α^0`.
pub fn i_alpha(alpha: f64) -> Result<BellExpression> {
    i_alpha_beta(alpha, 0.0)
}

/// Relabelling of settings and outcomes, acting identically on correlators
/// and on expression coefficients so that values are preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Relabelling {
    pub swap_alice_settings: bool,
    pub swap_bob_settings: bool,
    /// Flip Alice's outcome for setting `u` (applied after any swap).
    pub flip_alice: [bool; 2],
    pub flip_bob: [bool; 2],
}

impl Relabelling {
    /// All 64 relabellings.
    pub fn all() -> impl Iterator<Item = Relabelling> {
        (0..64u32).map(|m| Relabelling {
            swap_alice_settings: m & 1 != 0,
            swap_bob_settings: m & 2 != 0,
            flip_alice: [m & 4 != 0, m & 8 != 0],
            flip_bob: [m & 16 != 0, m & 32 != 0],
        })
    }

    pub fn apply(&self, cv: &CorrelatorVector) -> CorrelatorVector {
        let pa = |u: usize| if self.swap_alice_settings { 1 - u } else { u };
        let pb = |v: usize| if self.swap_bob_settings { 1 - v } else { v };
        let sa = |u: usize| if self.flip_alice[u] { -1.0 } else { 1.0 };
        let sb = |v: usize| if self.flip_bob[v] { -1.0 } else { 1.0 };
        let mut out = CorrelatorVector::default();
        for u in 0..2 {
            out.alice[u] = sa(u) * cv.alice[pa(u)];
            out.bob[u] = sb(u) * cv.bob[pb(u)];
            for v in 0..2 {
                out.joint[u][v] = sa(u) * sb(v) * cv.joint[pa(u)][pb(v)];
            }
        }
        out
    }
}
