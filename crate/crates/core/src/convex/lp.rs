//! Dense revised simplex with two phases, dual values and Farkas certificates.
//!
//! Rows are stored sparse by column, the basis inverse is dense and updated by
//! product-form pivots with periodic refactorization. Pricing is Dantzig until
//! a run of degenerate pivots, then Bland's rule until progress resumes.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNeg,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
    #[error("basis matrix became singular")]
    Singular,
    #[error("coefficient refers to variable {0} but only {1} exist")]
    BadIndex(usize, usize),
    #[error("non-finite coefficient in LP data")]
    NonFinite,
}

/// Base tolerance for feasibility and optimality tests. `POLYSWAP_LP_TOL`
/// overrides the default of 1e-9.
pub fn lp_tol() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("POLYSWAP_LP_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(1e-9)
    })
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    cmp: Cmp,
    rhs: f64,
}

#[derive(Clone, Debug)]
pub struct Lp {
    sense: Sense,
    objective: Vec<f64>,
    kinds: Vec<VarKind>,
    rows: Vec<Row>,
}

/// Result of a solve.
///
/// `duals` follow the convention `c_j - sum_i duals[i] * a_ij` is the reduced
/// cost of column j and `value == sum_i duals[i] * rhs_i` at an optimum.
/// On infeasibility `farkas` holds y with y <= 0 on Le rows, y >= 0 on Ge
/// rows, `sum_i y_i a_ij` <= 0 for NonNeg and == 0 for Free variables, and
/// `sum_i y_i rhs_i > 0`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub x: Vec<f64>,
    pub duals: Vec<f64>,
    pub farkas: Option<Vec<f64>>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl Lp {
    pub fn new(sense: Sense) -> Self {
        Lp { sense, objective: Vec::new(), kinds: Vec::new(), rows: Vec::new() }
    }

    /// Adds `n` variables and returns the index of the first.
    pub fn add_vars(&mut self, n: usize, kind: VarKind) -> usize {
        let start = self.kinds.len();
        self.kinds.extend(std::iter::repeat_n(kind, n));
        self.objective.extend(std::iter::repeat_n(0.0, n));
        start
    }

    pub fn set_objective(&mut self, var: usize, c: f64) {
        self.objective[var] = c;
    }

    pub fn add_objective(&mut self, var: usize, c: f64) {
        self.objective[var] += c;
    }

    /// Adds a row; duplicate variable entries are summed. Returns the row index.
    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) -> usize {
        self.rows.push(Row { coeffs, cmp, rhs });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Simplex::build(self)?.run(self)
    }

    /// Checks an infeasibility certificate. Returns `sum_i y_i rhs_i` minus
    /// the worst sign or column violation, positive when `y` is a valid proof.
    pub fn farkas_margin(&self, y: &[f64]) -> f64 {
        if y.len() != self.rows.len() {
            return f64::NEG_INFINITY;
        }
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut col = vec![0.0; self.kinds.len()];
        let mut bad: f64 = 0.0;
        let mut rhs = 0.0;
        for (r, yi) in self.rows.iter().zip(y) {
            let yi = yi / scale;
            match r.cmp {
                Cmp::Le => bad = bad.max(yi),
                Cmp::Ge => bad = bad.max(-yi),
                Cmp::Eq => {}
            }
            rhs += yi * r.rhs;
            for &(j, a) in &r.coeffs {
                col[j] += yi * a;
            }
        }
        for (c, k) in col.iter().zip(&self.kinds) {
            bad = bad.max(match k {
                VarKind::NonNeg => *c,
                VarKind::Free => c.abs(),
            });
        }
        rhs - bad
    }
}

struct Simplex {
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    b: Vec<f64>,
    row_sign: Vec<f64>,
    /// Maps each original variable to (plus column, optional minus column).
    var_cols: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// The other half of a split free variable.
    mirror: Vec<Option<usize>>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    tol: f64,
}

const PIVOT_TOL: f64 = 1e-10;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_BEFORE_BLAND: usize = 40;

impl Simplex {
    fn build(lp: &Lp) -> Result<Self, LpError> {
        let m = lp.rows.len();
        let n = lp.kinds.len();
        let tol = lp_tol();
        for c in &lp.objective {
            if !c.is_finite() {
                return Err(LpError::NonFinite);
            }
        }
        // Row-major normalized rows with duplicates merged.
        let mut row_sign = vec![1.0; m];
        let mut b = vec![0.0; m];
        let mut merged: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::NonFinite);
            }
            let mut coeffs = row.coeffs.clone();
            for &(j, a) in &coeffs {
                if j >= n {
                    return Err(LpError::BadIndex(j, n));
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite);
                }
            }
            coeffs.sort_by_key(|e| e.0);
            let mut out: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
            for (j, a) in coeffs {
                match out.last_mut() {
                    Some(last) if last.0 == j => last.1 += a,
                    _ => out.push((j, a)),
                }
            }
            out.retain(|e| e.1 != 0.0);
            if row.rhs < 0.0 {
                row_sign[i] = -1.0;
            }
            b[i] = row.rhs * row_sign[i];
            merged.push(out);
        }

        let mut cols: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut cost = Vec::new();
        let obj_sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
        let mut var_cols = Vec::with_capacity(n);
        for j in 0..n {
            let plus = cols.len();
            cols.push(Vec::new());
            cost.push(obj_sign * lp.objective[j]);
            let minus = if lp.kinds[j] == VarKind::Free {
                cols.push(Vec::new());
                cost.push(-obj_sign * lp.objective[j]);
                Some(plus + 1)
            } else {
                None
            };
            var_cols.push((plus, minus));
        }
        for (i, row) in merged.iter().enumerate() {
            for &(j, a) in row {
                let (p, mi) = var_cols[j];
                cols[p].push((i, a * row_sign[i]));
                if let Some(mi) = mi {
                    cols[mi].push((i, -a * row_sign[i]));
                }
            }
        }
        let mut basis = vec![usize::MAX; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let coef = match row.cmp {
                Cmp::Le => 1.0,
                Cmp::Ge => -1.0,
                Cmp::Eq => continue,
            } * row_sign[i];
            let c = cols.len();
            cols.push(vec![(i, coef)]);
            cost.push(0.0);
            if coef > 0.0 {
                basis[i] = c;
            }
        }
        let first_artificial = cols.len();
        for (i, slot) in basis.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = cols.len();
                cols.push(vec![(i, 1.0)]);
                cost.push(0.0);
            }
        }
        let mut mirror = vec![None; cols.len()];
        for &(p, mi) in &var_cols {
            if let Some(mi) = mi {
                mirror[p] = Some(mi);
                mirror[mi] = Some(p);
            }
        }
        let mut is_basic = vec![false; cols.len()];
        for &c in &basis {
            is_basic[c] = true;
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let xb = b.clone();
        Ok(Simplex { m, cols, cost, b, row_sign, var_cols, first_artificial, basis, is_basic, mirror, binv, xb, tol })
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yj, r) in y.iter_mut().zip(row) {
                    *yj += cb * r;
                }
            }
        }
        y
    }

    fn column_image(&self, k: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(r, a) in &self.cols[k] {
            for (i, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[i * m + r] * a;
            }
        }
        alpha
    }

    fn pivot(&mut self, r: usize, k: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        let theta = self.xb[r] / piv;
        for v in &mut self.binv[r * m..(r + 1) * m] {
            *v /= piv;
        }
        let pivot_row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            let row = &mut self.binv[i * m..(i + 1) * m];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.xb[i] -= theta * f;
        }
        self.xb[r] = theta;
        self.is_basic[self.basis[r]] = false;
        self.basis[r] = k;
        self.is_basic[k] = true;
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for (j, &c) in self.basis.iter().enumerate() {
            for &(r, a) in &self.cols[c] {
                bmat[r * m + j] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut best = col;
            for r in col + 1..m {
                if bmat[r * m + col].abs() > bmat[best * m + col].abs() {
                    best = r;
                }
            }
            if bmat[best * m + col].abs() < 1e-13 {
                return Err(LpError::Singular);
            }
            if best != col {
                for j in 0..m {
                    bmat.swap(best * m + j, col * m + j);
                    inv.swap(best * m + j, col * m + j);
                }
            }
            let p = bmat[col * m + col];
            for j in 0..m {
                bmat[col * m + j] /= p;
                inv[col * m + j] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = bmat[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..m {
                    bmat[r * m + j] -= f * bmat[col * m + j];
                    inv[r * m + j] -= f * inv[col * m + j];
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let v: f64 = row.iter().zip(&self.b).map(|(a, b)| a * b).sum();
            self.xb[i] = if v.abs() < 1e-12 { 0.0 } else { v };
        }
        Ok(())
    }

    /// Runs simplex iterations for the given cost vector. Returns false when
    /// the problem is unbounded along some column.
    fn optimize(&mut self, cost: &[f64], allow_artificial: bool, iters: &mut usize) -> Result<bool, LpError> {
        let limit = 50 * (self.m + self.cols.len()) + 10_000;
        let mut degenerate_run = 0usize;
        let mut since_refactor = 0usize;
        loop {
            if *iters >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
            }
            let y = self.duals(cost);
            let bland = degenerate_run >= DEGENERATE_BEFORE_BLAND;
            let mut entering = None;
            let mut best = -self.tol;
            let ncols = if allow_artificial { self.cols.len() } else { self.first_artificial };
            for k in 0..ncols {
                if self.is_basic[k] || self.mirror[k].is_some_and(|c| self.is_basic[c]) {
                    continue;
                }
                let d = cost[k] - self.cols[k].iter().map(|&(r, a)| y[r] * a).sum::<f64>();
                if d < best {
                    entering = Some(k);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(k) = entering else { return Ok(true) };
            let alpha = self.column_image(k);
            // Two passes: the minimum ratio, then among rows within a small
            // tolerance of it the largest pivot (lowest basis index under Bland).
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.m {
                if alpha[i] > PIVOT_TOL {
                    best_ratio = best_ratio.min(self.xb[i].max(0.0) / alpha[i]);
                }
            }
            let slack = 1e-9 * (1.0 + best_ratio);
            let mut leave: Option<usize> = None;
            for i in 0..self.m {
                if alpha[i] > PIVOT_TOL && self.xb[i].max(0.0) / alpha[i] <= best_ratio + slack {
                    let better = match leave {
                        None => true,
                        Some(l) if bland => self.basis[i] < self.basis[l],
                        Some(l) => alpha[i] > alpha[l],
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            let Some(r) = leave else { return Ok(false) };
            if best_ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, k, &alpha);
            *iters += 1;
            since_refactor += 1;
        }
    }

    fn run(mut self, lp: &Lp) -> Result<LpSolution, LpError> {
        let m = self.m;
        let n_orig = lp.kinds.len();
        let mut iters = 0usize;
        let has_artificial = self.first_artificial < self.cols.len();
        if has_artificial {
            let mut phase1 = vec![0.0; self.cols.len()];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            self.optimize(&phase1, true, &mut iters)?;
            self.refactor()?;
            let infeas: f64 = (0..m).filter(|&i| self.basis[i] >= self.first_artificial).map(|i| self.xb[i]).sum();
            let scale = 1.0 + self.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if infeas > self.tol * scale {
                let y = self.duals(&phase1);
                let farkas: Vec<f64> = y.iter().zip(&self.row_sign).map(|(v, s)| v * s).collect();
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    value: f64::NAN,
                    x: vec![0.0; n_orig],
                    duals: vec![0.0; m],
                    farkas: Some(farkas),
                    iterations: iters,
                });
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..m {
                if self.basis[r] < self.first_artificial {
                    continue;
                }
                let mut found = None;
                for k in 0..self.first_artificial {
                    if self.is_basic[k] || self.mirror[k].is_some_and(|c| self.is_basic[c]) {
                        continue;
                    }
                    let alpha = self.column_image(k);
                    if alpha[r].abs() > 1e-8 {
                        found = Some((k, alpha));
                        break;
                    }
                }
                if let Some((k, alpha)) = found {
                    self.xb[r] = 0.0;
                    self.pivot(r, k, &alpha);
                }
            }
            self.refactor()?;
        }
        let cost = self.cost.clone();
        let bounded = self.optimize(&cost, false, &mut iters)?;
        self.refactor()?;
        let mut col_val = vec![0.0; self.cols.len()];
        for i in 0..m {
            col_val[self.basis[i]] = self.xb[i].max(0.0);
        }
        let x: Vec<f64> = self.var_cols.iter().map(|&(p, mi)| col_val[p] - mi.map_or(0.0, |c| col_val[c])).collect();
        let value: f64 = x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum();
        let obj_sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
        let duals: Vec<f64> = self.duals(&cost).iter().zip(&self.row_sign).map(|(v, s)| v * s * obj_sign).collect();
        Ok(LpSolution {
            status: if bounded { LpStatus::Optimal } else { LpStatus::Unbounded },
            value: if bounded {
                value
            } else if lp.sense == Sense::Maximize {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            x,
            duals,
            farkas: None,
            iterations: iters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_max_problem() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = Lp::new(Sense::Maximize);
        let x = lp.add_vars(2, VarKind::NonNeg);
        lp.set_objective(x, 3.0);
        lp.set_objective(x + 1, 2.0);
        lp.add_row(vec![(x, 1.0), (x + 1, 1.0)], Cmp::Le, 4.0);
        lp.add_row(vec![(x, 1.0), (x + 1, 3.0)], Cmp::Le, 6.0);
        lp.add_row(vec![(x, 1.0)], Cmp::Le, 3.0);
        let s = lp.solve().unwrap();
        assert!(s.is_optimal());
        assert!((s.value - 11.0).abs() < 1e-9);
        assert!((s.x[0] - 3.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
        let dual_obj: f64 = s.duals.iter().zip([4.0, 6.0, 3.0]).map(|(y, b)| y * b).sum();
        assert!((dual_obj - 11.0).abs() < 1e-9);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x - y s.t. x + y = 1, x - y >= -3, -2 <= x <= 2 via rows
        let mut lp = Lp::new(Sense::Minimize);
        let x = lp.add_vars(2, VarKind::Free);
        lp.set_objective(x, 1.0);
        lp.set_objective(x + 1, -1.0);
        lp.add_row(vec![(x, 1.0), (x + 1, 1.0)], Cmp::Eq, 1.0);
        lp.add_row(vec![(x, 1.0), (x + 1, -1.0)], Cmp::Ge, -3.0);
        lp.add_row(vec![(x, 1.0)], Cmp::Le, 2.0);
        lp.add_row(vec![(x, 1.0)], Cmp::Ge, -2.0);
        let s = lp.solve().unwrap();
        assert!(s.is_optimal());
        assert!((s.value + 3.0).abs() < 1e-9, "{}", s.value);
    }

    #[test]
    fn infeasible_gives_farkas() {
        let mut lp = Lp::new(Sense::Minimize);
        let x = lp.add_vars(1, VarKind::NonNeg);
        lp.add_row(vec![(x, 1.0)], Cmp::Ge, 2.0);
        lp.add_row(vec![(x, 1.0)], Cmp::Le, 1.0);
        let s = lp.solve().unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let y = s.farkas.unwrap();
        assert!(y[0] >= -1e-12 && y[1] <= 1e-12);
        assert!(y[0] + y[1] <= 1e-12);
        assert!(2.0 * y[0] + y[1] > 0.0);
        assert!(lp.farkas_margin(&y) > 0.0);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = Lp::new(Sense::Maximize);
        let x = lp.add_vars(2, VarKind::NonNeg);
        lp.set_objective(x, 1.0);
        lp.add_row(vec![(x, 1.0), (x + 1, -1.0)], Cmp::Le, 1.0);
        assert_eq!(lp.solve().unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(Sense::Maximize);
        let x = lp.add_vars(3, VarKind::NonNeg);
        lp.set_objective(x + 2, 1.0);
        lp.add_row(vec![(x, 1.0), (x + 1, 1.0), (x + 2, 1.0)], Cmp::Eq, 1.0);
        lp.add_row(vec![(x, 2.0), (x + 1, 2.0), (x + 2, 2.0)], Cmp::Eq, 2.0);
        lp.add_row(vec![(x + 2, 1.0)], Cmp::Le, 0.5);
        let s = lp.solve().unwrap();
        assert!(s.is_optimal());
        assert!((s.value - 0.5).abs() < 1e-12);
    }
}
