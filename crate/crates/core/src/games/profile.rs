use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::game::{Perspective, PolytopeGame};
use crate::convex::Polytope;
use crate::error::{Error, Result};
use crate::linalg::{axpy, Mat};

/// Correlated strategy profile: an element of the tensor hull of X and Y.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Csp {
    pub matrix: Mat,
    pub horizon: Option<usize>,
}

impl Csp {
    pub fn new(matrix: Mat) -> Self {
        Csp { matrix, horizon: None }
    }

    pub fn product(x: &[f64], y: &[f64]) -> Self {
        Csp { matrix: Mat::outer(x, y), horizon: Some(1) }
    }

    /// Marginal on Y, read through the X-set's unit functional.
    pub fn marginal_y(&self, x_set: &Polytope) -> Result<Vec<f64>> {
        Ok(self.matrix.tmul_vec(&x_set.unit_functional()?))
    }

    /// Marginal on X, read through the Y-set's unit functional.
    pub fn marginal_x(&self, y_set: &Polytope) -> Result<Vec<f64>> {
        Ok(self.matrix.mul_vec(&y_set.unit_functional()?))
    }

    pub fn oriented(&self, p: Perspective) -> Csp {
        match p {
            Perspective::Learner => self.clone(),
            Perspective::Optimizer => Csp { matrix: self.matrix.transpose(), horizon: self.horizon },
        }
    }

    pub fn transpose(&self) -> Csp {
        Csp { matrix: self.matrix.transpose(), horizon: self.horizon }
    }

    /// Checks both marginals against their action sets.
    pub fn check_marginals(&self, g: &PolytopeGame, tol: f64) -> Result<()> {
        let x = self.marginal_x(&g.y_set)?;
        let y = self.marginal_y(&g.x_set)?;
        if !g.x_set.contains(&x, tol) || !g.y_set.contains(&y, tol) {
            return Err(Error::InvalidGame("CSP marginals fall outside the action sets".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
}

impl Transcript {
    pub fn new(xs: Vec<Vec<f64>>, ys: Vec<Vec<f64>>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Dimension(format!("{} x-rounds vs {} y-rounds", xs.len(), ys.len())));
        }
        Ok(Transcript { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn push(&mut self, x: Vec<f64>, y: Vec<f64>) {
        self.xs.push(x);
        self.ys.push(y);
    }

    pub fn mirrored(&self) -> Transcript {
        Transcript { xs: self.ys.clone(), ys: self.xs.clone() }
    }

    pub fn oriented(&self, p: Perspective) -> Transcript {
        match p {
            Perspective::Learner => self.clone(),
            Perspective::Optimizer => self.mirrored(),
        }
    }

    pub fn check_feasible(&self, g: &PolytopeGame, tol: f64) -> Result<()> {
        for (t, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            if x.len() != g.d_l() || y.len() != g.d_o() {
                return Err(Error::Dimension(format!("round {t} has wrong action lengths")));
            }
            if !g.x_set.contains(x, tol) {
                return Err(Error::InvalidGame(format!("x at round {t} is infeasible")));
            }
            if !g.y_set.contains(y, tol) {
                return Err(Error::InvalidGame(format!("y at round {t} is infeasible")));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let dl = self.xs.first().map_or(0, |v| v.len());
        let d_o = self.ys.first().map_or(0, |v| v.len());
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend((0..dl).map(|i| format!("x_{i}")));
        header.extend((0..d_o).map(|i| format!("y_{i}")));
        wr.write_record(&header).map_err(csv_err)?;
        for (t, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
            let mut rec = vec![(t + 1).to_string()];
            rec.extend(x.iter().chain(y.iter()).map(|v| fmt_f64(*v)));
            wr.write_record(&rec).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii csv")
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers().map_err(csv_err)?.clone();
        let cols: Vec<&str> = header.iter().collect();
        if cols.first() != Some(&"t") {
            return Err(Error::Parse("transcript header must start with t".into()));
        }
        let xi: Vec<usize> = (0..cols.len()).filter(|&i| cols[i].starts_with("x_")).collect();
        let yi: Vec<usize> = (0..cols.len()).filter(|&i| cols[i].starts_with("y_")).collect();
        if xi.len() + yi.len() + 1 != cols.len() {
            return Err(Error::Parse("transcript header must be t,x_0..,y_0..".into()));
        }
        let mut out = Transcript::default();
        for (line, rec) in rd.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad number in column {}", line + 2, cols[i])))
            };
            let x = xi.iter().map(|&i| parse(i)).collect::<Result<Vec<_>>>()?;
            let y = yi.iter().map(|&i| parse(i)).collect::<Result<Vec<_>>>()?;
            out.push(x, y);
        }
        Ok(out)
    }
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn csp_of_transcript(t: &Transcript) -> Result<Csp> {
    if t.is_empty() {
        return Err(Error::InvalidGame("empty transcript".into()));
    }
    let mut m = Mat::zeros(t.xs[0].len(), t.ys[0].len());
    for (x, y) in t.xs.iter().zip(&t.ys) {
        for (i, xi) in x.iter().enumerate() {
            if *xi != 0.0 {
                axpy(&mut m.data[i * m.cols..(i + 1) * m.cols], *xi, y);
            }
        }
    }
    let n = t.len() as f64;
    m.data.iter_mut().for_each(|v| *v /= n);
    Ok(Csp { matrix: m, horizon: Some(t.len()) })
}

/// Distribution over (x-vertex, y-vertex) index pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexCsp {
    pub weights: Mat,
}

impl VertexCsp {
    pub fn new(weights: Mat) -> Result<Self> {
        let total: f64 = weights.data.iter().sum();
        if weights.data.iter().any(|w| *w < -1e-12) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidGame(format!(
                "vertex CSP weights must be nonnegative and sum to 1 (sum {total})"
            )));
        }
        Ok(VertexCsp { weights })
    }

    pub fn point_mass(nx: usize, ny: usize, v: usize, w: usize) -> Self {
        let mut m = Mat::zeros(nx, ny);
        m.set(v, w, 1.0);
        VertexCsp { weights: m }
    }

    pub fn transpose(&self) -> VertexCsp {
        VertexCsp { weights: self.weights.transpose() }
    }
}

/// `sum_{v,w} weights(v, w) v w^T`.
pub fn project_vertex_csp(vcsp: &VertexCsp, g: &PolytopeGame) -> Result<Csp> {
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    if vcsp.weights.rows != vx.len() || vcsp.weights.cols != vy.len() {
        return Err(Error::Dimension("vertex CSP shape does not match the vertex counts".into()));
    }
    let mut m = Mat::zeros(g.d_l(), g.d_o());
    for (i, v) in vx.iter().enumerate() {
        for (j, w) in vy.iter().enumerate() {
            let p = vcsp.weights.get(i, j);
            if p != 0.0 {
                m.add_scaled(p, &Mat::outer(v, w));
            }
        }
    }
    Ok(Csp::new(m))
}

/// Learner actions paired with linear reward functionals `r_t(x) = g_t . x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardTranscript {
    pub xs: Vec<Vec<f64>>,
    pub rs: Vec<Vec<f64>>,
}

impl RewardTranscript {
    pub fn new(xs: Vec<Vec<f64>>, rs: Vec<Vec<f64>>) -> Result<Self> {
        if xs.len() != rs.len() {
            return Err(Error::Dimension("reward transcript lengths differ".into()));
        }
        Ok(RewardTranscript { xs, rs })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Checks `|r_t(v)| <= bound` at every vertex of `x_set`.
    pub fn check_bounded(&self, x_set: &Polytope, bound: f64) -> Result<()> {
        let vs = x_set.vertices()?;
        for (t, r) in self.rs.iter().enumerate() {
            for v in vs {
                if crate::linalg::dot(r, v).abs() > bound + 1e-9 {
                    return Err(Error::InvalidGame(format!("reward at round {t} exceeds {bound} on a vertex")));
                }
            }
        }
        Ok(())
    }
}
