//! A small exact two-phase simplex with Bland's rule.
//!
//! All variables are non-negative. Infeasible problems come back with a
//! Farkas certificate that has been checked before it is returned.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row<S> {
    /// Sparse coefficients `(variable, value)`.
    pub coeffs: Vec<(usize, S)>,
    pub kind: RowKind,
    pub rhs: S,
}

/// Maximise `objective · x` subject to `rows`, `x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lp<S> {
    pub vars: usize,
    pub objective: Vec<(usize, S)>,
    pub rows: Vec<Row<S>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<S> {
    Optimal { x: Vec<S>, value: S },
    /// Row multipliers `y` with `y_i >= 0` on `<=` rows, `y_i <= 0` on
    /// `>=` rows, `yᵀA >= 0` and `yᵀb < 0`.
    Infeasible { farkas: Vec<S> },
    Unbounded,
}

impl<S: Scalar> Lp<S> {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            objective: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, S)>, kind: RowKind, rhs: S) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    /// Checks a Farkas certificate against the problem.
    pub fn certifies_infeasible(&self, y: &[S]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let mut combo = vec![S::zero(); self.vars];
        let mut rhs = S::zero();
        for (row, yi) in self.rows.iter().zip(y) {
            let sign_ok = match row.kind {
                RowKind::Le => *yi >= S::zero(),
                RowKind::Ge => *yi <= S::zero(),
                RowKind::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            if yi.is_zero() {
                continue;
            }
            for (j, a) in &row.coeffs {
                combo[*j] = combo[*j].clone() + yi.clone() * a.clone();
            }
            rhs = rhs + yi.clone() * row.rhs.clone();
        }
        combo.iter().all(|c| *c >= S::zero()) && rhs < S::zero()
    }

    /// Whether `x` satisfies every row and `x >= 0`.
    pub fn satisfies(&self, x: &[S]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| *v >= S::zero())
            && self.rows.iter().all(|row| {
                let lhs = row
                    .coeffs
                    .iter()
                    .fold(S::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone());
                match row.kind {
                    RowKind::Le => lhs <= row.rhs,
                    RowKind::Ge => lhs >= row.rhs,
                    RowKind::Eq => lhs == row.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome<S> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau<S> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<S>>,
    basis: Vec<usize>,
    cols: usize,
    /// Column of the slack or artificial that started basic in each row.
    initial: Vec<usize>,
    artificial_from: usize,
    /// Rows multiplied by -1 to make the right-hand side non-negative.
    flipped: Vec<bool>,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &Lp<S>) -> Self {
        let m = lp.rows.len();
        let mut flipped = vec![false; m];
        let mut kinds = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            let neg = row.rhs < S::zero();
            flipped[i] = neg;
            kinds.push(match (row.kind, neg) {
                (RowKind::Le, true) => RowKind::Ge,
                (RowKind::Ge, true) => RowKind::Le,
                (k, _) => k,
            });
        }
        let slack_count = kinds.iter().filter(|k| **k != RowKind::Eq).count();
        let art_count = kinds.iter().filter(|k| **k != RowKind::Le).count();
        let artificial_from = lp.vars + slack_count;
        let cols = artificial_from + art_count;
        let mut t = vec![vec![S::zero(); cols + 1]; m];
        let mut basis = vec![0; m];
        let mut initial = vec![0; m];
        let (mut slack, mut art) = (lp.vars, artificial_from);
        for (i, row) in lp.rows.iter().enumerate() {
            let sign = if flipped[i] { -S::one() } else { S::one() };
            for (j, a) in &row.coeffs {
                t[i][*j] = t[i][*j].clone() + sign.clone() * a.clone();
            }
            t[i][cols] = sign * row.rhs.clone();
            match kinds[i] {
                RowKind::Le => {
                    t[i][slack] = S::one();
                    basis[i] = slack;
                    initial[i] = slack;
                    slack += 1;
                }
                RowKind::Ge => {
                    t[i][slack] = -S::one();
                    slack += 1;
                    t[i][art] = S::one();
                    basis[i] = art;
                    initial[i] = art;
                    art += 1;
                }
                RowKind::Eq => {
                    t[i][art] = S::one();
                    basis[i] = art;
                    initial[i] = art;
                    art += 1;
                }
            }
        }
        Self {
            t,
            basis,
            cols,
            initial,
            artificial_from,
            flipped,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        if !p.is_one() {
            for v in self.t[r].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() / p.clone();
                }
            }
        }
        let pivot_row = self.t[r].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex on `cost` (maximise), restricted to columns
    /// `< limit`. Returns false when unbounded.
    fn optimise(&mut self, cost: &[S], limit: usize) -> bool {
        loop {
            // reduced cost c_j - c_B B⁻¹ A_j, from the current tableau
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut z = S::zero();
                for (i, row) in self.t.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        z = z + cb.clone() * row[j].clone();
                    }
                }
                if cost[j].clone() - z > S::zero() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[c] > S::zero() {
                    let ratio = row[self.cols].clone() / row[c].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn solve(mut self, lp: &Lp<S>) -> LpOutcome<S> {
        let m = self.t.len();
        if self.artificial_from < self.cols {
            let mut phase1 = vec![S::zero(); self.cols];
            for c in phase1.iter_mut().skip(self.artificial_from) {
                *c = -S::one();
            }
            self.optimise(&phase1, self.cols);
            let infeasibility = (0..m)
                .filter(|&i| self.basis[i] >= self.artificial_from)
                .fold(S::zero(), |acc, i| acc + self.t[i][self.cols].clone());
            if infeasibility > S::zero() {
                // y = c_Bᵀ B⁻¹ for the minimisation form; B⁻¹ sits in the
                // columns that started as the identity
                let y: Vec<S> = (0..m)
                    .map(|k| {
                        let col = self.initial[k];
                        let v = (0..m)
                            .filter(|&i| self.basis[i] >= self.artificial_from)
                            .fold(S::zero(), |acc, i| acc + self.t[i][col].clone());
                        // negate for the certificate, undo row flips
                        if self.flipped[k] {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                debug_assert!(lp.certifies_infeasible(&y));
                return LpOutcome::Infeasible { farkas: y };
            }
            // drive zero-level artificials out of the basis where possible
            for i in 0..m {
                if self.basis[i] >= self.artificial_from {
                    if let Some(c) = (0..self.artificial_from).find(|&j| !self.t[i][j].is_zero()) {
                        self.pivot(i, c);
                    }
                }
            }
            // rows still carrying an artificial are redundant; freeze them
            for i in 0..m {
                if self.basis[i] >= self.artificial_from {
                    for j in 0..self.artificial_from {
                        self.t[i][j] = S::zero();
                    }
                }
            }
        }
        let mut cost = vec![S::zero(); self.cols];
        for (j, c) in &lp.objective {
            cost[*j] = cost[*j].clone() + c.clone();
        }
        if !self.optimise(&cost, self.artificial_from) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![S::zero(); lp.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.vars {
                x[b] = self.t[i][self.cols].clone();
            }
        }
        let value = lp
            .objective
            .iter()
            .fold(S::zero(), |acc, (j, c)| acc + c.clone() * x[*j].clone());
        debug_assert!(lp.satisfies(&x));
        LpOutcome::Optimal { x, value }
    }
}
