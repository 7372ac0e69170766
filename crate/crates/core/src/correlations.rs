//! Bipartite behaviors with two binary measurements per party.
//!
//! Settings and outcomes are 0-based indices throughout: setting index `0`
//! is the first measurement (u = 1), and outcome index `0` is the `+1`
//! result, index `1` the `-1` result. Probability tables are stored as four
//! rows ordered `(u,v) = (1,1), (1,2), (2,1), (2,2)`, each row holding
//! `[p(++), p(+-), p(-+), p(--)]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex;

/// Absolute tolerance for every probability-level check.
pub const PROB_TOL: f64 = 1e-9;

/// Tolerance on the reconstruction residual of a local decomposition.
pub const LP_TOL: f64 = 1e-7;

pub const BEHAVIOR_FORMAT: &str = "behavior-2222/v1";

/// Sign of an outcome index: `0 -> +1`, `1 -> -1`.
#[inline]
pub fn outcome_sign(index: usize) -> f64 {
    if index == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn row_index(u: usize, v: usize) -> usize {
    2 * u + v
}

#[inline]
fn col_index(a: usize, b: usize) -> usize {
    2 * a + b
}

/// Expectation values `⟨A_u⟩`, `⟨B_v⟩` and `⟨A_u B_v⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorrelatorVector {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
    /// `joint[u][v] = ⟨A_u B_v⟩`.
    pub joint: [[f64; 2]; 2],
}

impl CorrelatorVector {
    pub fn new(alice: [f64; 2], bob: [f64; 2], joint: [[f64; 2]; 2]) -> Self {
        Self { alice, bob, joint }
    }

    /// Builds from the flat ordering `(⟨A_1B_1⟩, ⟨A_1B_2⟩, ⟨A_2B_1⟩, ⟨A_2B_2⟩)`.
    pub fn from_flat(alice: [f64; 2], bob: [f64; 2], joint: [f64; 4]) -> Self {
        Self::new(alice, bob, [[joint[0], joint[1]], [joint[2], joint[3]]])
    }

    pub fn joint_flat(&self) -> [f64; 4] {
        [self.joint[0][0], self.joint[0][1], self.joint[1][0], self.joint[1][1]]
    }

    /// Exchanges the roles of Alice and Bob.
    pub fn swap_parties(&self) -> Self {
        Self {
            alice: self.bob,
            bob: self.alice,
            joint: [
                [self.joint[0][0], self.joint[1][0]],
                [self.joint[0][1], self.joint[1][1]],
            ],
        }
    }

    /// `p(ab|uv)` as given by the correlator expansion, without validation.
    pub fn probability(&self, u: usize, v: usize, a: usize, b: usize) -> f64 {
        let (sa, sb) = (outcome_sign(a), outcome_sign(b));
        0.25 * (1.0 + sa * self.alice[u] + sb * self.bob[v] + sa * sb * self.joint[u][v])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self.alice.iter().zip(&other.alice);
        let b = self.bob.iter().zip(&other.bob);
        let j = self.joint_flat();
        let k = other.joint_flat();
        a.chain(b)
            .chain(j.iter().zip(k.iter()))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// A no-signalling probability table `P(ab|uv)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Behavior {
    table: [[f64; 4]; 4],
}

impl Behavior {
    /// Validates a raw table against positivity, normalization and
    /// no-signalling at [`PROB_TOL`].
    pub fn new(table: [[f64; 4]; 4]) -> Result<Self> {
        for (r, row) in table.iter().enumerate() {
            for &p in row {
                if !p.is_finite() || !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
                    return Err(Error::Validation(format!(
                        "entry {p} in row {r} is not a probability"
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::Validation(format!("row {r} sums to {sum}, not 1")));
            }
        }
        let report = check_no_signalling(&table, PROB_TOL);
        if let Some(first) = report.violations.first() {
            return Err(Error::Validation(format!("signalling behavior: {first}")));
        }
        Ok(Self { table })
    }

    pub fn uniform() -> Self {
        Self {
            table: [[0.25; 4]; 4],
        }
    }

    pub fn table(&self) -> &[[f64; 4]; 4] {
        &self.table
    }

    /// `p(ab|uv)` with 0-based indices.
    pub fn prob(&self, u: usize, v: usize, a: usize, b: usize) -> f64 {
        self.table[row_index(u, v)][col_index(a, b)]
    }

    /// Alice's marginal `p(a|u)`, read from the `v = 1` row.
    pub fn alice_marginal(&self, u: usize, a: usize) -> f64 {
        self.prob(u, 0, a, 0) + self.prob(u, 0, a, 1)
    }

    /// Bob's marginal `p(b|v)`, read from the `u = 1` row.
    pub fn bob_marginal(&self, v: usize, b: usize) -> f64 {
        self.prob(0, v, 0, b) + self.prob(0, v, 1, b)
    }

    pub fn correlators(&self) -> CorrelatorVector {
        let mut cv = CorrelatorVector::default();
        for u in 0..2 {
            cv.alice[u] = self.alice_marginal(u, 0) - self.alice_marginal(u, 1);
            cv.bob[u] = self.bob_marginal(u, 0) - self.bob_marginal(u, 1);
            for v in 0..2 {
                cv.joint[u][v] = (0..2)
                    .flat_map(|a| (0..2).map(move |b| (a, b)))
                    .map(|(a, b)| outcome_sign(a) * outcome_sign(b) * self.prob(u, v, a, b))
                    .sum();
            }
        }
        cv
    }

    /// Convex combination `Σ w_i P_i`. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, Behavior)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < -PROB_TOL) || (total - 1.0).abs() > PROB_TOL {
            return Err(Error::Validation("mixture weights must form a distribution".into()));
        }
        let mut table = [[0.0; 4]; 4];
        for (w, beh) in parts {
            for (row, src) in table.iter_mut().zip(beh.table.iter()) {
                for (p, q) in row.iter_mut().zip(src) {
                    *p += w * q;
                }
            }
        }
        Self::new(table)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.table
            .iter()
            .flatten()
            .zip(other.table.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BehaviorFile = serde_json::from_str(text)?;
        if file.format != BEHAVIOR_FORMAT {
            return Err(Error::Validation(format!(
                "unsupported format tag {:?}, expected {BEHAVIOR_FORMAT:?}",
                file.format
            )));
        }
        Self::new(file.p)
    }

    pub fn to_json(&self) -> String {
        let file = BehaviorFile {
            format: BEHAVIOR_FORMAT.to_string(),
            p: self.table,
        };
        serde_json::to_string_pretty(&file).expect("behavior serializes")
    }
}

/// On-disk form of a behavior.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BehaviorFile {
    pub format: String,
    pub p: [[f64; 4]; 4],
}

pub fn behavior_from_correlators(cv: &CorrelatorVector) -> Result<Behavior> {
    let mut table = [[0.0; 4]; 4];
    for u in 0..2 {
        for v in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let p = cv.probability(u, v, a, b);
                    if !p.is_finite() || p < -PROB_TOL {
                        return Err(Error::Validation(format!(
                            "correlators give p = {p} at (u,v,a,b) = ({},{},{},{})",
                            u + 1,
                            v + 1,
                            a,
                            b
                        )));
                    }
                    table[row_index(u, v)][col_index(a, b)] = p;
                }
            }
        }
    }
    // Entries are non-negative, sum to one and no-signalling by construction.
    Ok(Behavior { table })
}

pub fn correlators_from_behavior(beh: &Behavior) -> CorrelatorVector {
    beh.correlators()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// A marginal that depends on the remote party's setting.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalViolation {
    pub party: Party,
    /// Local setting index (0-based).
    pub setting: usize,
    /// Local outcome index (0 is `+1`).
    pub outcome: usize,
    /// Marginal under remote setting 1 and remote setting 2.
    pub values: [f64; 2],
}

impl std::fmt::Display for MarginalViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (who, remote) = match self.party {
            Party::Alice => ("Alice", "Bob"),
            Party::Bob => ("Bob", "Alice"),
        };
        write!(
            f,
            "{who}'s marginal for setting {} outcome {} is {} or {} depending on {remote}'s setting",
            self.setting + 1,
            if self.outcome == 0 { '+' } else { '-' },
            self.values[0],
            self.values[1]
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoSignallingReport {
    pub violations: Vec<MarginalViolation>,
}

impl NoSignallingReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every marginal-consistency equality of a raw table within `tol`.
pub fn check_no_signalling(table: &[[f64; 4]; 4], tol: f64) -> NoSignallingReport {
    let p = |u: usize, v: usize, a: usize, b: usize| table[row_index(u, v)][col_index(a, b)];
    let mut violations = Vec::new();
    for s in 0..2 {
        for o in 0..2 {
            let alice = [p(s, 0, o, 0) + p(s, 0, o, 1), p(s, 1, o, 0) + p(s, 1, o, 1)];
            if (alice[0] - alice[1]).abs() > tol {
                violations.push(MarginalViolation {
                    party: Party::Alice,
                    setting: s,
                    outcome: o,
                    values: alice,
                });
            }
            let bob = [p(0, s, 0, o) + p(0, s, 1, o), p(1, s, 0, o) + p(1, s, 1, o)];
            if (bob[0] - bob[1]).abs() > tol {
                violations.push(MarginalViolation {
                    party: Party::Bob,
                    setting: s,
                    outcome: o,
                    values: bob,
                });
            }
        }
    }
    NoSignallingReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// Outputs `alice[u]` for setting `u` and `bob[v]` for setting `v`, as ±1.
    Deterministic { alice: [i8; 2], bob: [i8; 2] },
    /// PR box maximizing CHSH symmetry `k` (see [`chsh_symmetries`]).
    PrBox(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytopeVertex {
    pub behavior: Behavior,
    pub kind: VertexKind,
}

/// Output assignment of deterministic strategy `index` in `0..16`.
///
/// Bits from most to least significant select `α_1, α_2, β_1, β_2`; a clear
/// bit means `+1`. Strategy 0 outputs `+1` everywhere.
pub fn strategy_signs(index: usize) -> ([i8; 2], [i8; 2]) {
    let s = |bit: usize| if index >> bit & 1 == 0 { 1 } else { -1 };
    ([s(3), s(2)], [s(1), s(0)])
}

/// Correlators of deterministic strategy `index`.
pub fn strategy_correlators(index: usize) -> CorrelatorVector {
    let (alice, bob) = strategy_signs(index);
    let a = [f64::from(alice[0]), f64::from(alice[1])];
    let b = [f64::from(bob[0]), f64::from(bob[1])];
    CorrelatorVector::new(a, b, [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]])
}

/// The 16 local deterministic behaviors, in strategy-index order.
pub fn deterministic_vertices() -> Vec<PolytopeVertex> {
    (0..16)
        .map(|i| {
            let (alice, bob) = strategy_signs(i);
            let behavior = behavior_from_correlators(&strategy_correlators(i))
                .expect("deterministic correlators are a behavior");
            PolytopeVertex {
                behavior,
                kind: VertexKind::Deterministic { alice, bob },
            }
        })
        .collect()
}

/// Decodes CHSH symmetry index `k` into the `(u,v)` position carrying the
/// minus sign and the global sign.
///
/// Bit 2 swaps Alice's settings, bit 1 swaps Bob's settings and bit 0 flips
/// the overall sign (an outcome relabelling on one side). Symmetry 0 is
/// `⟨A1B1⟩ + ⟨A1B2⟩ + ⟨A2B1⟩ − ⟨A2B2⟩`.
pub fn chsh_symmetry(k: usize) -> ((usize, usize), f64) {
    assert!(k < 8, "CHSH symmetry index out of range");
    let minus = (1 - (k >> 2 & 1), 1 - (k >> 1 & 1));
    let sign = if k & 1 == 0 { 1.0 } else { -1.0 };
    (minus, sign)
}

/// Coefficients `[[c11, c12], [c21, c22]]` of CHSH symmetry `k`.
pub fn chsh_coefficients(k: usize) -> [[f64; 2]; 2] {
    let ((mu, mv), sign) = chsh_symmetry(k);
    let mut c = [[sign; 2]; 2];
    c[mu][mv] = -sign;
    c
}

pub fn chsh_value(cv: &CorrelatorVector, k: usize) -> f64 {
    let c = chsh_coefficients(k);
    c[0][0] * cv.joint[0][0] + c[0][1] * cv.joint[0][1] + c[1][0] * cv.joint[1][0]
        + c[1][1] * cv.joint[1][1]
}

/// Values of the eight relabelled CHSH expressions, indexed as in
/// [`chsh_symmetry`].
pub fn chsh_symmetries(beh: &Behavior) -> [f64; 8] {
    let cv = beh.correlators();
    std::array::from_fn(|k| chsh_value(&cv, k))
}

/// Largest CHSH symmetry value and the first index attaining it.
pub fn max_chsh(beh: &Behavior) -> (usize, f64) {
    chsh_symmetries(beh)
        .into_iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, v)| if v > best.1 { (k, v) } else { best })
}

/// The 8 PR boxes; variant `k` reaches 4 on CHSH symmetry `k`.
pub fn pr_boxes() -> Vec<PolytopeVertex> {
    (0..8u8)
        .map(|k| {
            let cv = CorrelatorVector::new([0.0; 2], [0.0; 2], chsh_coefficients(k as usize));
            PolytopeVertex {
                behavior: behavior_from_correlators(&cv).expect("PR box is a behavior"),
                kind: VertexKind::PrBox(k),
            }
        })
        .collect()
}

/// Outcome of the locality test.
#[derive(Debug, Clone, PartialEq)]
pub enum Locality {
    /// Weights over [`deterministic_vertices`] reproducing the behavior.
    Local { weights: [f64; 16] },
    /// No local model; `symmetry` is the CHSH symmetry with the largest value.
    NonLocal { symmetry: usize, value: f64 },
}

impl Locality {
    pub fn is_local(&self) -> bool {
        matches!(self, Locality::Local { .. })
    }
}

/// Decides locality by LP feasibility over the 16 deterministic vertices.
///
/// This does not rely on the CHSH criterion, so it serves as the independent
/// check for [`is_local_by_chsh`].
pub fn local_decomposition(beh: &Behavior) -> Locality {
    let vertices = deterministic_vertices();
    let mut a_eq = Vec::with_capacity(17);
    let mut b_eq = Vec::with_capacity(17);
    for r in 0..4 {
        for c in 0..4 {
            a_eq.push(vertices.iter().map(|v| v.behavior.table[r][c]).collect());
            b_eq.push(beh.table[r][c]);
        }
    }
    a_eq.push(vec![1.0; 16]);
    b_eq.push(1.0);

    let nonlocal = || {
        let (symmetry, value) = max_chsh(beh);
        Locality::NonLocal { symmetry, value }
    };
    let Some(x) = simplex::feasible_point(&a_eq, &b_eq) else {
        return nonlocal();
    };
    let mut weights = [0.0; 16];
    weights.copy_from_slice(&x);
    let mut rebuilt = [[0.0; 4]; 4];
    for (w, v) in weights.iter().zip(&vertices) {
        for (row, src) in rebuilt.iter_mut().zip(v.behavior.table.iter()) {
            for (p, q) in row.iter_mut().zip(src) {
                *p += w * q;
            }
        }
    }
    let residual = rebuilt
        .iter()
        .flatten()
        .zip(beh.table.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let total: f64 = weights.iter().sum();
    if residual > LP_TOL || (total - 1.0).abs() > LP_TOL {
        return nonlocal();
    }
    Locality::Local { weights }
}

/// Locality via Fine's criterion: every CHSH symmetry is at most 2.
pub fn is_local_by_chsh(beh: &Behavior) -> bool {
    max_chsh(beh).1 <= 2.0 + PROB_TOL
}

/// Average classical communication needed to simulate `beh`.
pub fn communication_cost(beh: &Behavior) -> f64 {
    (max_chsh(beh).1 / 2.0 - 1.0).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn tsirelson_point() -> Behavior {
        let cv = CorrelatorVector::from_flat(
            [0.0; 2],
            [0.0; 2],
            [INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2],
        );
        behavior_from_correlators(&cv).unwrap()
    }

    #[test]
    fn zero_correlators_give_uniform_table() {
        let beh = behavior_from_correlators(&CorrelatorVector::default()).unwrap();
        assert!(beh.table().iter().flatten().all(|&p| p == 0.25));
        assert_eq!(beh, Behavior::uniform());
        assert_eq!(beh.correlators(), CorrelatorVector::default());
    }

    #[test]
    fn tsirelson_point_probabilities() {
        let beh = tsirelson_point();
        assert!((beh.prob(1, 1, 0, 0) - 0.25 * (1.0 - INV_SQRT2)).abs() < 1e-15);
        assert!((beh.prob(1, 1, 0, 1) - 0.25 * (1.0 + INV_SQRT2)).abs() < 1e-15);
        assert!((beh.prob(1, 1, 0, 1) - 0.4267767).abs() < 1e-7);
        assert!((beh.prob(1, 1, 0, 0) - 0.0732233).abs() < 1e-7);
    }

    #[test]
    fn deterministic_all_plus() {
        let cv = CorrelatorVector::from_flat([1.0; 2], [1.0; 2], [1.0; 4]);
        let beh = behavior_from_correlators(&cv).unwrap();
        for u in 0..2 {
            for v in 0..2 {
                assert_eq!(beh.prob(u, v, 0, 0), 1.0);
            }
        }
        assert_eq!(beh.correlators(), cv);
    }

    #[test]
    fn rejects_non_positive_correlators() {
        let cv = CorrelatorVector::from_flat([1.0, 0.0], [0.0; 2], [-1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(behavior_from_correlators(&cv), Err(Error::Validation(_))));
    }

    #[test]
    fn constructor_rejects_invalid_tables() {
        let mut t = [[0.25; 4]; 4];
        t[0][0] = 0.3;
        assert!(Behavior::new(t).is_err());
        let mut t = [[0.25; 4]; 4];
        t[0] = [0.5, -0.25, 0.5, 0.25];
        assert!(Behavior::new(t).is_err());
        let mut t = [[0.25; 4]; 4];
        t[0][0] = f64::NAN;
        assert!(Behavior::new(t).is_err());
    }

    #[test]
    fn signalling_table_is_flagged() {
        // p(++|11) = 1 and p(+-|12) = 1 keep Alice's marginal fixed but not Bob's;
        // p(--|21) = 1 with p(++|22) = 1 then breaks Alice's setting-2 marginal.
        let mut t = [[0.0; 4]; 4];
        t[0][0] = 1.0;
        t[1][1] = 1.0;
        t[2][3] = 1.0;
        t[3][0] = 1.0;
        let report = check_no_signalling(&t, 0.0);
        assert!(!report.holds());
        assert!(report.violations.iter().any(|v| v.party == Party::Alice));
        assert!(report.violations.iter().any(|v| v.party == Party::Bob));
        assert!(Behavior::new(t).is_err());
    }

    #[test]
    fn vertices_are_no_signalling_and_well_formed() {
        let det = deterministic_vertices();
        assert_eq!(det.len(), 16);
        for v in &det {
            assert!(check_no_signalling(v.behavior.table(), 0.0).holds());
            assert!(v.behavior.table().iter().flatten().all(|&p| p == 0.0 || p == 1.0));
            let (_, m) = max_chsh(&v.behavior);
            assert_eq!(m, 2.0);
            for k in 0..8 {
                assert!(chsh_symmetries(&v.behavior)[k].abs() == 2.0);
            }
        }
        for i in 0..16 {
            for j in 0..i {
                assert_ne!(det[i].behavior, det[j].behavior);
            }
        }
        assert!(det[0].behavior.table().iter().all(|row| row[0] == 1.0));

        let pr = pr_boxes();
        assert_eq!(pr.len(), 8);
        for (k, v) in pr.iter().enumerate() {
            assert!(check_no_signalling(v.behavior.table(), 0.0).holds());
            assert!(v.behavior.table().iter().flatten().all(|&p| p == 0.0 || p == 0.5));
            assert_eq!(chsh_symmetries(&v.behavior)[k], 4.0);
            assert_eq!(communication_cost(&v.behavior), 1.0);
        }
    }

    #[test]
    fn canonical_pr_box() {
        let pr0 = pr_boxes()[0].behavior;
        let cv = pr0.correlators();
        assert_eq!(cv.alice, [0.0; 2]);
        assert_eq!(cv.bob, [0.0; 2]);
        assert_eq!(cv.joint_flat(), [1.0, 1.0, 1.0, -1.0]);
        assert_eq!(pr0.alice_marginal(0, 0), 0.5);
        // a·b = −1 exactly when u = v = 2
        assert_eq!(pr0.prob(1, 1, 0, 1), 0.5);
        assert_eq!(pr0.prob(1, 1, 0, 0), 0.0);
        assert_eq!(pr0.prob(0, 1, 1, 1), 0.5);
        assert_eq!(max_chsh(&pr0), (0, 4.0));
    }

    #[test]
    fn locality_examples() {
        for (i, v) in deterministic_vertices().iter().enumerate() {
            match local_decomposition(&v.behavior) {
                Locality::Local { weights } => {
                    assert!((weights[i] - 1.0).abs() < 1e-9, "vertex {i}: {weights:?}")
                }
                other => panic!("vertex {i} reported {other:?}"),
            }
        }
        assert!(local_decomposition(&Behavior::uniform()).is_local());
        match local_decomposition(&tsirelson_point()) {
            Locality::NonLocal { symmetry, value } => {
                assert_eq!(symmetry, 0);
                assert!((value - 2.0 * 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn communication_cost_examples() {
        assert_eq!(communication_cost(&Behavior::uniform()), 0.0);
        let c = communication_cost(&tsirelson_point());
        assert!((c - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((c - 0.4142136).abs() < 1e-7);
    }

    #[test]
    fn json_round_trip_and_format_tag() {
        let beh = pr_boxes()[3].behavior;
        assert_eq!(Behavior::from_json(&beh.to_json()).unwrap(), beh);
        let bad = beh.to_json().replace(BEHAVIOR_FORMAT, "behavior/v0");
        assert!(matches!(Behavior::from_json(&bad), Err(Error::Validation(_))));
        assert!(matches!(Behavior::from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn swap_parties_transposes() {
        let cv = CorrelatorVector::from_flat([0.1, 0.2], [0.3, 0.4], [0.5, 0.6, 0.7, 0.8]);
        let s = cv.swap_parties();
        assert_eq!(s.alice, [0.3, 0.4]);
        assert_eq!(s.joint_flat(), [0.5, 0.7, 0.6, 0.8]);
        assert_eq!(s.swap_parties(), cv);
    }
}
