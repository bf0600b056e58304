//! Bilinear minimax over two polytopes as a single LP.

use serde::{Deserialize, Serialize};

use super::lp::{Cmp, Lp, LpStatus, Sense, VarKind};
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// `u(x, y) = <h, x y^T> - b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiaffinePayoff {
    pub h: Mat,
    pub b: f64,
}

impl BiaffinePayoff {
    pub fn new(h: Mat, b: f64) -> Self {
        BiaffinePayoff { h, b }
    }

    pub fn constant(d_l: usize, d_o: usize, value: f64) -> Self {
        BiaffinePayoff { h: Mat::zeros(d_l, d_o), b: -value }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.h.bilinear(x, y) - self.b
    }

    /// `<h, phi> - b`, the payoff of a correlated profile.
    pub fn eval_csp(&self, phi: &Mat) -> f64 {
        self.h.frob(phi) - self.b
    }

    pub fn h_norm(&self) -> f64 {
        self.h.norm()
    }

    /// Flattened `(h, b)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.h.data.clone();
        v.push(self.b);
        v
    }

    pub fn from_vec(rows: usize, cols: usize, v: &[f64]) -> Self {
        BiaffinePayoff { h: Mat { rows, cols, data: v[..rows * cols].to_vec() }, b: v[rows * cols] }
    }
}

#[derive(Clone, Debug)]
pub struct Minimax {
    pub value: f64,
    pub x_witness: Vec<f64>,
    pub y_witness: Vec<f64>,
}

/// `min_{x in X} max_{y in Y} u(x, y)` with the inner maximization dualized,
/// returning the optimal x and the LP value.
fn min_max(h: &Mat, b: f64, xs: &Polytope, ys: &Polytope) -> Result<(f64, Vec<f64>)> {
    let (dl, dox) = (xs.dim(), ys.dim());
    if h.rows != dl || h.cols != dox {
        return Err(Error::Dimension(format!("payoff is {}x{}, sets are {dl} and {dox}", h.rows, h.cols)));
    }
    let mut lp = Lp::new(Sense::Minimize);
    let x = lp.add_vars(dl, VarKind::Free);
    let mu = lp.add_vars(ys.ineq().len(), VarKind::NonNeg);
    let nu = lp.add_vars(ys.eq().len(), VarKind::Free);
    for (i, (_, bi)) in ys.ineq().iter().enumerate() {
        lp.set_objective(mu + i, *bi);
    }
    for (j, (_, fj)) in ys.eq().iter().enumerate() {
        lp.set_objective(nu + j, *fj);
    }
    for (a, bi) in xs.ineq() {
        lp.add_row(row(a, x), Cmp::Le, *bi);
    }
    for (a, bi) in xs.eq() {
        lp.add_row(row(a, x), Cmp::Eq, *bi);
    }
    for k in 0..dox {
        let mut r: Vec<(usize, f64)> = Vec::new();
        for (i, (a, _)) in ys.ineq().iter().enumerate() {
            if a[k] != 0.0 {
                r.push((mu + i, a[k]));
            }
        }
        for (j, (a, _)) in ys.eq().iter().enumerate() {
            if a[k] != 0.0 {
                r.push((nu + j, a[k]));
            }
        }
        for l in 0..dl {
            let v = h.get(l, k);
            if v != 0.0 {
                r.push((x + l, -v));
            }
        }
        lp.add_row(r, Cmp::Eq, 0.0);
    }
    let s = lp.solve()?;
    if s.status != LpStatus::Optimal {
        return Err(Error::InvalidPolytope(format!("minimax LP returned {:?}", s.status)));
    }
    Ok((s.value - b, s.x[x..x + dl].to_vec()))
}

fn row(a: &[f64], off: usize) -> Vec<(usize, f64)> {
    a.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (off + i, *v)).collect()
}

/// Value and witnesses of `min_x max_y u(x, y)`.
pub fn minimax_bilinear(u: &BiaffinePayoff, xs: &Polytope, ys: &Polytope) -> Result<Minimax> {
    let (v, x) = min_max(&u.h, u.b, xs, ys)?;
    let (w, y) = min_max(&u.h.transpose().scale(-1.0), -u.b, ys, xs)?;
    Ok(Minimax { value: 0.5 * (v - w), x_witness: x, y_witness: y })
}

/// Only the min-max side: value and x witness.
pub fn minimax_x(u: &BiaffinePayoff, xs: &Polytope, ys: &Polytope) -> Result<(f64, Vec<f64>)> {
    min_max(&u.h, u.b, xs, ys)
}

/// `max_{y in Y} u(x, y)` for fixed x.
pub fn max_over_y(u: &BiaffinePayoff, x: &[f64], ys: &Polytope) -> Result<f64> {
    let c = u.h.tmul_vec(x);
    Ok(ys.maximize(&c)?.0 - u.b)
}

/// `min_{x in X} u(x, y)` for fixed y.
pub fn min_over_x(u: &BiaffinePayoff, y: &[f64], xs: &Polytope) -> Result<f64> {
    let c: Vec<f64> = u.h.mul_vec(y).iter().map(|v| -v).collect();
    Ok(-xs.maximize(&c)?.0 - u.b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pennies() {
        let d2 = Polytope::simplex(2);
        let u = BiaffinePayoff::new(Mat::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap(), 0.0);
        let m = minimax_bilinear(&u, &d2, &d2).unwrap();
        assert!(m.value.abs() < 1e-9);
        assert!((m.x_witness[0] - 0.5).abs() < 1e-9);
        assert!((m.y_witness[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn constant_payoff() {
        let d2 = Polytope::simplex(2);
        let u = BiaffinePayoff::new(Mat::zeros(2, 2), 0.75);
        let m = minimax_bilinear(&u, &d2, &d2).unwrap();
        assert!((m.value + 0.75).abs() < 1e-12);
    }

    #[test]
    fn witnesses_certify_value() {
        let xs = Polytope::product_of_simplices(&[2, 2]);
        let ys = Polytope::hypercube_lifted(2);
        let h = Mat::from_fn(4, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0 - 0.4);
        let u = BiaffinePayoff::new(h, 0.1);
        let m = minimax_bilinear(&u, &xs, &ys).unwrap();
        assert!(max_over_y(&u, &m.x_witness, &ys).unwrap() <= m.value + 1e-7);
        assert!(min_over_x(&u, &m.y_witness, &xs).unwrap() >= m.value - 1e-7);
    }
}
