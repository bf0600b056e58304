use crate::error::{Error, Result};
use crate::games::Transcript;
use crate::regret::Decomposition;

/// A periodic play schedule whose every full period has a prescribed CSP.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub period: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.period.is_empty()
    }

    pub fn action(&self, t: usize) -> &(Vec<f64>, Vec<f64>) {
        &self.period[t % self.period.len()]
    }

    pub fn transcript(&self, horizon: usize) -> Transcript {
        let mut out = Transcript::default();
        for t in 0..horizon {
            let (x, y) = self.action(t);
            out.push(x.clone(), y.clone());
        }
        out
    }
}

/// Plays part j for `k_j = w_j N` consecutive rounds of each period of `n`.
pub fn schedule_from_decomposition(decomp: &Decomposition, n: usize) -> Result<Schedule> {
    if n == 0 {
        return Err(Error::InvalidGame("period must be positive".into()));
    }
    let mut period = Vec::with_capacity(n);
    for p in &decomp.parts {
        let k = p.weight * n as f64;
        let kr = k.round();
        if (k - kr).abs() > 1e-9 * n as f64 || kr < 0.0 {
            return Err(Error::InvalidGame(format!("weight {} is not a multiple of 1/{n}", p.weight)));
        }
        for _ in 0..kr as usize {
            period.push((p.x.clone(), p.y.clone()));
        }
    }
    if period.len() != n {
        return Err(Error::InvalidGame(format!("weights cover {} of {n} rounds", period.len())));
    }
    Ok(Schedule { period })
}
