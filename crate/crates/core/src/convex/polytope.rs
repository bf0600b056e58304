use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lp::{lp_tol, Cmp, Lp, LpStatus, Sense, VarKind};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// Slack allowed by membership tests.
pub const MEMBER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Simplex(usize),
    /// Product of simplices with the given block sizes.
    ProductOfSimplices(Vec<usize>),
    /// `[0,1]^n x {1}`.
    HypercubeLifted(usize),
    Explicit,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Simplex(m) => write!(f, "simplex({m})"),
            Structure::ProductOfSimplices(sizes) => {
                if sizes.iter().all(|s| *s == sizes[0]) {
                    write!(f, "product_of_simplices({},{})", sizes[0], sizes.len())
                } else {
                    let s: Vec<String> = sizes.iter().map(|v| v.to_string()).collect();
                    write!(f, "product_of_simplices[{}]", s.join(","))
                }
            }
            Structure::HypercubeLifted(_) => write!(f, "hypercube_lifted"),
            Structure::Explicit => write!(f, "explicit"),
        }
    }
}

impl Structure {
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let s = s.trim();
        let args = |inner: &str| -> Result<Vec<usize>> {
            inner
                .split(',')
                .map(|a| {
                    a.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad structure argument in {s:?}")))
                })
                .collect()
        };
        if s == "explicit" {
            return Ok(Structure::Explicit);
        }
        if s == "hypercube_lifted" {
            return if dim >= 1 {
                Ok(Structure::HypercubeLifted(dim - 1))
            } else {
                Err(Error::Parse("hypercube_lifted needs dim >= 1".into()))
            };
        }
        if let Some(inner) = s.strip_prefix("hypercube_lifted(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Structure::HypercubeLifted(args(inner)?[0]));
        }
        if let Some(inner) = s.strip_prefix("simplex(").and_then(|r| r.strip_suffix(')')) {
            let a = args(inner)?;
            return if a.len() == 1 {
                Ok(Structure::Simplex(a[0]))
            } else {
                Err(Error::Parse(format!("simplex takes one argument: {s:?}")))
            };
        }
        if let Some(inner) = s.strip_prefix("product_of_simplices(").and_then(|r| r.strip_suffix(')')) {
            let a = args(inner)?;
            if a.len() != 2 {
                return Err(Error::Parse(format!("product_of_simplices(m,c) takes two arguments: {s:?}")));
            }
            return Ok(Structure::ProductOfSimplices(vec![a[0]; a[1]]));
        }
        if let Some(inner) = s.strip_prefix("product_of_simplices[").and_then(|r| r.strip_suffix(']')) {
            return Ok(Structure::ProductOfSimplices(args(inner)?));
        }
        Err(Error::Parse(format!("unknown structure tag {s:?}")))
    }
}

/// Bounded polytope `{x : ineq rows a.x <= b, eq rows a.x = b}`.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    ineq: Vec<(Vec<f64>, f64)>,
    eq: Vec<(Vec<f64>, f64)>,
    vertices: Option<Vec<Vec<f64>>>,
    radius_bound: f64,
    structure: Structure,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub ineq: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub vertices: Option<Vec<Vec<f64>>>,
    pub structure: String,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
    pub dual: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeparationResult {
    Inside,
    /// `direction . x <= offset` holds on the set and fails at the query.
    Separated {
        direction: Vec<f64>,
        offset: f64,
        row: usize,
    },
}

/// Descending lexicographic order, so that `e_1` precedes `e_2` in a simplex.
pub fn canonical_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.partial_cmp(x) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

fn sort_canonical(vs: &mut Vec<Vec<f64>>) {
    vs.sort_by(|a, b| canonical_cmp(a, b));
    vs.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= 1e-12));
}

impl Polytope {
    pub fn new(
        dim: usize,
        ineq: Vec<(Vec<f64>, f64)>,
        eq: Vec<(Vec<f64>, f64)>,
        vertices: Option<Vec<Vec<f64>>>,
        structure: Structure,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPolytope("dim must be positive".into()));
        }
        for (a, b) in ineq.iter().chain(eq.iter()) {
            if a.len() != dim {
                return Err(Error::InvalidPolytope(format!("row of length {} in dimension {dim}", a.len())));
            }
            if !b.is_finite() || a.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPolytope("non-finite constraint data".into()));
            }
        }
        let mut p = Polytope {
            dim,
            ineq,
            eq,
            vertices: None,
            radius_bound: 0.0,
            structure,
            lower: vec![0.0; dim],
            upper: vec![0.0; dim],
        };
        for k in 0..dim {
            let mut c = vec![0.0; dim];
            c[k] = 1.0;
            for sense in [Sense::Maximize, Sense::Minimize] {
                let r = p.lp(&c, sense)?;
                match r.status {
                    LpStatus::Infeasible => return Err(Error::InvalidPolytope("empty polytope".into())),
                    LpStatus::Unbounded => {
                        return Err(Error::InvalidPolytope(format!("unbounded along coordinate {k}")))
                    }
                    LpStatus::Optimal => {}
                }
                if sense == Sense::Maximize {
                    p.upper[k] = r.value;
                } else {
                    p.lower[k] = r.value;
                }
            }
        }
        let vertices = match vertices {
            Some(v) => Some(v),
            None => p.structured_vertices(),
        };
        if let Some(mut vs) = vertices {
            for v in &vs {
                if v.len() != dim {
                    return Err(Error::InvalidPolytope("vertex of wrong length".into()));
                }
                if !p.contains(v, MEMBER_TOL) {
                    return Err(Error::InvalidPolytope(format!("listed vertex {v:?} violates the constraints")));
                }
            }
            sort_canonical(&mut vs);
            if p.structure == Structure::Explicit {
                check_extreme(&vs)?;
            } else if let Some(expected) = p.structured_count() {
                if vs.len() != expected {
                    return Err(Error::InvalidPolytope(format!(
                        "structure {} expects {expected} vertices, got {}",
                        p.structure,
                        vs.len()
                    )));
                }
            }
            p.radius_bound = vs.iter().map(|v| norm(v)).fold(0.0, f64::max);
            p.vertices = Some(vs);
        } else {
            p.radius_bound =
                p.lower.iter().zip(&p.upper).map(|(l, u)| l.abs().max(u.abs()).powi(2)).sum::<f64>().sqrt();
        }
        if p.radius_bound <= 0.0 {
            p.radius_bound = f64::MIN_POSITIVE;
        }
        Ok(p)
    }

    pub fn simplex(m: usize) -> Self {
        Self::product_of_simplices(&[m])
    }

    pub fn product_of_simplices(sizes: &[usize]) -> Self {
        let dim: usize = sizes.iter().sum();
        let mut ineq = Vec::new();
        for i in 0..dim {
            let mut a = vec![0.0; dim];
            a[i] = -1.0;
            ineq.push((a, 0.0));
        }
        let mut eq = Vec::new();
        let mut off = 0;
        for &s in sizes {
            let mut a = vec![0.0; dim];
            a[off..off + s].iter_mut().for_each(|v| *v = 1.0);
            eq.push((a, 1.0));
            off += s;
        }
        let structure =
            if sizes.len() == 1 { Structure::Simplex(sizes[0]) } else { Structure::ProductOfSimplices(sizes.to_vec()) };
        Polytope::new(dim, ineq, eq, None, structure).expect("product of simplices is a valid polytope")
    }

    /// `[0,1]^n x {1}`.
    pub fn hypercube_lifted(n: usize) -> Self {
        let dim = n + 1;
        let mut ineq = Vec::new();
        for i in 0..n {
            let mut a = vec![0.0; dim];
            a[i] = -1.0;
            ineq.push((a.clone(), 0.0));
            a[i] = 1.0;
            ineq.push((a, 1.0));
        }
        let mut e = vec![0.0; dim];
        e[n] = 1.0;
        Polytope::new(dim, ineq, vec![(e, 1.0)], None, Structure::HypercubeLifted(n)).expect("lifted cube is valid")
    }

    /// `prod_i [lo_i, hi_i] x {1}` as an explicit polytope with its vertex list.
    pub fn box_lifted(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        let dim = n + 1;
        let mut ineq = Vec::new();
        for i in 0..n {
            let mut a = vec![0.0; dim];
            a[i] = -1.0;
            ineq.push((a.clone(), -lo[i]));
            a[i] = 1.0;
            ineq.push((a, hi[i]));
        }
        let mut e = vec![0.0; dim];
        e[n] = 1.0;
        let mut vertices = Vec::new();
        for mask in 0..(1usize << n) {
            let mut v: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect();
            v.push(1.0);
            vertices.push(v);
        }
        Polytope::new(dim, ineq, vec![(e, 1.0)], Some(vertices), Structure::Explicit)
    }

    fn structured_count(&self) -> Option<usize> {
        match &self.structure {
            Structure::Simplex(m) => Some(*m),
            Structure::ProductOfSimplices(s) => Some(s.iter().product()),
            Structure::HypercubeLifted(n) => Some(1usize << n),
            Structure::Explicit => None,
        }
    }

    fn structured_vertices(&self) -> Option<Vec<Vec<f64>>> {
        match &self.structure {
            Structure::Simplex(m) => Some(product_vertices(&[*m])),
            Structure::ProductOfSimplices(s) => Some(product_vertices(s)),
            Structure::HypercubeLifted(n) => {
                let n = *n;
                Some(
                    (0..(1usize << n))
                        .map(|mask| {
                            let mut v: Vec<f64> = (0..n).map(|i| (mask >> i & 1) as f64).collect();
                            v.push(1.0);
                            v
                        })
                        .collect(),
                )
            }
            Structure::Explicit => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineq(&self) -> &[(Vec<f64>, f64)] {
        &self.ineq
    }

    pub fn eq(&self) -> &[(Vec<f64>, f64)] {
        &self.eq
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn radius_bound(&self) -> f64 {
        self.radius_bound
    }

    pub fn coordinate_bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    pub fn has_vertices(&self) -> bool {
        self.vertices.is_some()
    }

    /// Complete vertex list in canonical order.
    pub fn vertices(&self) -> Result<&[Vec<f64>]> {
        self.vertices.as_deref().ok_or_else(|| {
            Error::Unsupported(format!(
                "vertex enumeration is not available for structure {}; supply the vertex list explicitly",
                self.structure
            ))
        })
    }

    pub fn enumerate_vertices(&self) -> Result<Vec<Vec<f64>>> {
        self.vertices().map(|v| v.to_vec())
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self.structure, Structure::Simplex(_))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim
            && self.ineq.iter().all(|(a, b)| dot(a, x) <= b + tol)
            && self.eq.iter().all(|(a, b)| (dot(a, x) - b).abs() <= tol)
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let a = self.ineq.iter().map(|(a, b)| dot(a, x) - b).fold(0.0, f64::max);
        let e = self.eq.iter().map(|(a, b)| (dot(a, x) - b).abs()).fold(0.0, f64::max);
        a.max(e)
    }

    /// Linear functional equal to 1 on the affine hull, read off an equality row
    /// with nonzero right-hand side (the dummy coordinate when present).
    pub fn unit_functional(&self) -> Result<Vec<f64>> {
        let (a, b) =
            self.eq.iter().filter(|(_, b)| b.abs() > 1e-12).max_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).ok_or_else(
                || Error::InvalidGame("action set needs an equality row with nonzero right-hand side".into()),
            )?;
        Ok(a.iter().map(|v| v / b).collect())
    }

    pub fn barycenter(&self) -> Result<Vec<f64>> {
        let vs = self.vertices()?;
        Ok(crate::linalg::mean_of(vs))
    }

    fn lp(&self, objective: &[f64], sense: Sense) -> Result<LpResult> {
        let mut lp = Lp::new(sense);
        let x = lp.add_vars(self.dim, VarKind::Free);
        for (k, c) in objective.iter().enumerate() {
            lp.set_objective(x + k, *c);
        }
        for (a, b) in &self.ineq {
            lp.add_row(sparse(a, x), Cmp::Le, *b);
        }
        for (a, b) in &self.eq {
            lp.add_row(sparse(a, x), Cmp::Eq, *b);
        }
        let s = lp.solve()?;
        Ok(LpResult { status: s.status, value: s.value, point: s.x, dual: s.duals })
    }

    /// Optimizes a linear objective with the simplex method.
    pub fn solve_lp(&self, objective: &[f64], sense: Sense) -> Result<LpResult> {
        if objective.len() != self.dim {
            return Err(Error::Dimension(format!("objective length {} vs dim {}", objective.len(), self.dim)));
        }
        let r = self.lp(objective, sense)?;
        match r.status {
            LpStatus::Optimal => Ok(r),
            s => Err(Error::InvalidPolytope(format!("LP over a validated polytope returned {s:?}"))),
        }
    }

    /// `max_{x in P} c.x`, returning the value and a maximizing point. With a
    /// vertex list this scans vertices and keeps the first maximizer in
    /// canonical order; otherwise it solves an LP.
    pub fn maximize(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        if let Some(vs) = &self.vertices {
            let (i, v) = argmax_first(vs.iter().map(|v| dot(c, v)));
            Ok((v, vs[i].clone()))
        } else {
            let r = self.solve_lp(c, Sense::Maximize)?;
            Ok((r.value, r.point))
        }
    }

    pub fn separate(&self, q: &[f64]) -> SeparationResult {
        let mut best: Option<(f64, Vec<f64>, f64, usize)> = None;
        let mut consider = |viol: f64, a: Vec<f64>, b: f64, row: usize| {
            if viol > MEMBER_TOL && best.as_ref().is_none_or(|bst| viol > bst.0) {
                best = Some((viol, a, b, row));
            }
        };
        for (i, (a, b)) in self.ineq.iter().enumerate() {
            consider(dot(a, q) - b, a.clone(), *b, i);
        }
        for (j, (a, b)) in self.eq.iter().enumerate() {
            let r = dot(a, q) - b;
            let row = self.ineq.len() + j;
            if r > 0.0 {
                consider(r, a.clone(), *b, row);
            } else {
                consider(-r, a.iter().map(|v| -v).collect(), -b, row);
            }
        }
        match best {
            None => SeparationResult::Inside,
            Some((_, direction, offset, row)) => SeparationResult::Separated { direction, offset, row },
        }
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            ineq: self.ineq.clone(),
            eq: self.eq.clone(),
            vertices: if self.structure == Structure::Explicit { self.vertices.clone() } else { None },
            structure: self.structure.to_string(),
        }
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self> {
        let structure = Structure::parse(&j.structure, j.dim)?;
        Polytope::new(j.dim, j.ineq.clone(), j.eq.clone(), j.vertices.clone(), structure)
    }

    /// Canonical vertex decomposition of `x`: greedily maximizes the weight of
    /// each vertex in canonical order. Returns weights indexed like `vertices()`.
    pub fn vertex_weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        let vs = self.vertices()?;
        let n = vs.len();
        let mut fixed: Vec<Option<f64>> = vec![None; n];
        let mut weights = vec![0.0; n];
        let mut remaining = 1.0;
        for k in 0..n {
            if remaining <= 1e-12 {
                fixed[k] = Some(0.0);
                continue;
            }
            let mut lp = Lp::new(Sense::Maximize);
            let w = lp.add_vars(n, VarKind::NonNeg);
            lp.set_objective(w + k, 1.0);
            lp.add_row((0..n).map(|i| (w + i, 1.0)).collect(), Cmp::Eq, 1.0);
            for d in 0..self.dim {
                lp.add_row((0..n).map(|i| (w + i, vs[i][d])).collect(), Cmp::Eq, x[d]);
            }
            for (i, f) in fixed.iter().enumerate().take(k) {
                if let Some(v) = f {
                    lp.add_row(vec![(w + i, 1.0)], Cmp::Eq, *v);
                }
            }
            let s = lp.solve()?;
            if s.status != LpStatus::Optimal {
                return Err(Error::Infeasible(format!("point {x:?} is not in the vertex hull")));
            }
            let v = if s.value.abs() < lp_tol() { 0.0 } else { s.value.max(0.0) };
            fixed[k] = Some(v);
            weights[k] = v;
            remaining -= v;
        }
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            weights.iter_mut().for_each(|w| *w /= total);
        }
        Ok(weights)
    }
}

fn sparse(a: &[f64], offset: usize) -> Vec<(usize, f64)> {
    a.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (offset + i, *v)).collect()
}

/// Index and value of the first maximum, treating values within 1e-12
/// (relative) as ties.
pub fn argmax_first(vals: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, v) in vals.enumerate() {
        if i == 0 || v > best.1 + 1e-12 * (1.0 + best.1.abs()) {
            best = (i, v);
        }
    }
    best
}

fn product_vertices(sizes: &[usize]) -> Vec<Vec<f64>> {
    let dim: usize = sizes.iter().sum();
    let mut out = vec![vec![0.0; dim]];
    let mut off = 0;
    for &s in sizes {
        let mut next = Vec::with_capacity(out.len() * s);
        for v in &out {
            for i in 0..s {
                let mut w = v.clone();
                w[off + i] = 1.0;
                next.push(w);
            }
        }
        out = next;
        off += s;
    }
    out
}

fn check_extreme(vs: &[Vec<f64>]) -> Result<()> {
    for (i, v) in vs.iter().enumerate() {
        for (a, va) in vs.iter().enumerate() {
            if a == i {
                continue;
            }
            for (b, vb) in vs.iter().enumerate().skip(a + 1) {
                if b == i {
                    continue;
                }
                if va.iter().zip(vb).zip(v).all(|((x, y), z)| (0.5 * (x + y) - z).abs() <= 1e-9) {
                    return Err(Error::InvalidPolytope(format!("listed vertex {v:?} is a midpoint of two others")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_lp_examples() {
        let p = Polytope::simplex(2);
        let r = p.solve_lp(&[1.0, 0.0], Sense::Maximize).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.point[0] - 1.0).abs() < 1e-12);
        let r = p.solve_lp(&[0.3, 0.7], Sense::Maximize).unwrap();
        assert!((r.value - 0.7).abs() < 1e-12);
        assert!((r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_vertex_orders() {
        assert_eq!(
            Polytope::simplex(3).vertices().unwrap(),
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
        );
        let p = Polytope::product_of_simplices(&[2, 2]);
        let v = p.vertices().unwrap();
        assert_eq!(v[0], vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(v[1], vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(v[2], vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(v[3], vec![0.0, 1.0, 0.0, 1.0]);
        let sq = Polytope::hypercube_lifted(2);
        let mut expect = vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0], vec![1.0, 0.0, 1.0]];
        expect.sort_by(|a, b| canonical_cmp(a, b));
        assert_eq!(sq.vertices().unwrap(), expect.as_slice());
    }

    #[test]
    fn separation_rules() {
        let p = Polytope::simplex(2);
        assert_eq!(p.separate(&[0.5, 0.5]), SeparationResult::Inside);
        assert_eq!(p.separate(&[1.0, 0.0]), SeparationResult::Inside);
        match p.separate(&[2.0, 0.0]) {
            SeparationResult::Separated { direction, offset, .. } => {
                assert!(dot(&direction, &[2.0, 0.0]) > offset);
                assert!(dot(&direction, &[1.0, 0.0]) <= offset + 1e-12);
            }
            SeparationResult::Inside => panic!("expected a cut"),
        }
    }

    #[test]
    fn rejects_unbounded_and_empty() {
        let unb =
            Polytope::new(2, vec![(vec![-1.0, 0.0], 0.0)], vec![(vec![0.0, 1.0], 1.0)], None, Structure::Explicit);
        assert!(unb.is_err());
        let empty = Polytope::new(1, vec![(vec![1.0], -1.0), (vec![-1.0], 0.0)], vec![], None, Structure::Explicit);
        assert!(empty.is_err());
    }

    #[test]
    fn rejects_non_extreme_vertex() {
        let r = Polytope::new(
            1,
            vec![(vec![1.0], 1.0), (vec![-1.0], 0.0)],
            vec![],
            Some(vec![vec![0.0], vec![0.5], vec![1.0]]),
            Structure::Explicit,
        );
        assert!(r.is_err());
    }

    #[test]
    fn explicit_without_vertices_is_unsupported() {
        let p = Polytope::new(1, vec![(vec![1.0], 1.0), (vec![-1.0], 0.0)], vec![], None, Structure::Explicit).unwrap();
        assert!(matches!(p.enumerate_vertices(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn json_roundtrip() {
        for p in [Polytope::simplex(3), Polytope::product_of_simplices(&[2, 2, 4]), Polytope::hypercube_lifted(2)] {
            let j = serde_json::to_string(&p.to_json()).unwrap();
            let back = Polytope::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
            assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), j);
            assert_eq!(back.vertices().unwrap(), p.vertices().unwrap());
        }
    }

    #[test]
    fn greedy_decomposition_is_lexicographic() {
        let p = Polytope::hypercube_lifted(2);
        let w = p.vertex_weights(&[0.5, 0.5, 1.0]).unwrap();
        // [1,1,1] first takes the maximal weight 1/2, then [0,0,1] remains.
        let vs = p.vertices().unwrap();
        let recon: Vec<f64> = (0..3).map(|d| vs.iter().zip(&w).map(|(v, wi)| v[d] * wi).sum()).collect();
        assert!(crate::linalg::max_abs_diff(&recon, &[0.5, 0.5, 1.0]) < 1e-9);
        assert!((w[0] - 0.5).abs() < 1e-9);
    }
}
