//! Dense two-phase simplex for small equality-form linear programs.
//!
//! Solves `max c·x  s.t.  A x = b, x ≥ 0`. Problems here have at most a few
//! dozen variables, so a dense tableau with Bland's anti-cycling rule is
//! plenty and keeps pivoting deterministic.

const PIVOT_EPS: f64 = 1e-11;

/// Phase-one residual above which a system is declared infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&[f64], f64)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, *value)),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds minus the current objective value.
    reduced: Vec<f64>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn price(&mut self, cost: &[f64]) {
        let rhs = self.rhs();
        let mut r = vec![0.0; rhs + 1];
        r[..cost.len()].copy_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (rj, tj) in r.iter_mut().zip(row) {
                    *rj -= cb * tj;
                }
            }
        }
        self.reduced = r;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let p = self.rows[pr][pc];
        for v in self.rows[pr].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[pr].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            let f = row[pc];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[pc] = 0.0;
            }
        }
        let f = self.reduced[pc];
        if f != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.reduced[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Runs Bland-rule iterations over columns `0..allowed`. Returns false if
    /// the objective is unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let entering = (0..allowed).find(|&j| self.reduced[j] > PIVOT_EPS);
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col] > PIVOT_EPS {
                    let ratio = row[rhs] / row[col];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-14
                                || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn value(&self) -> f64 {
        -self.reduced[self.rhs()]
    }
}

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`.
///
/// Rows of `a_eq` must all have length `c.len()`. Redundant equality rows are
/// detected and dropped after phase one.
pub fn maximize(c: &[f64], a_eq: &[Vec<f64>], b_eq: &[f64]) -> LpOutcome {
    let n = c.len();
    let m = a_eq.len();
    assert_eq!(m, b_eq.len(), "row count of A and length of b differ");
    assert!(a_eq.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // Phase one: artificial column n+i for each row, with b made non-negative.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, &b)) in a_eq.iter().zip(b_eq).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let mut t = vec![0.0; width + 1];
        for (tj, aj) in t.iter_mut().zip(row) {
            *tj = sign * aj;
        }
        t[n + i] = 1.0;
        t[width] = sign * b;
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        reduced: Vec::new(),
        width,
    };
    let mut phase_one_cost = vec![0.0; width];
    for v in &mut phase_one_cost[n..] {
        *v = -1.0;
    }
    tab.price(&phase_one_cost);
    tab.optimize(width);
    if -tab.value() > FEASIBILITY_TOL {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis, dropping redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            let col = (0..n)
                .filter(|&j| tab.rows[i][j].abs() > 1e-9)
                .max_by(|&a, &b| tab.rows[i][a].abs().total_cmp(&tab.rows[i][b].abs()));
            match col {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase two on the original columns.
    tab.price(c);
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    let rhs = tab.rhs();
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[rhs].max(0.0);
        }
    }
    let value = tab.value();
    LpOutcome::Optimal { x, value }
}

/// Finds some `x ≥ 0` with `A x = b`, if one exists.
pub fn feasible_point(a_eq: &[Vec<f64>], b_eq: &[f64]) -> Option<Vec<f64>> {
    let n = a_eq.first().map_or(0, Vec::len);
    match maximize(&vec![0.0; n], a_eq, b_eq) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
