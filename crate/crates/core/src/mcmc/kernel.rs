//! Sparse row-stochastic kernels with a known stationary vector: flow across
//! cuts, total-variation mixing times, and spectral bounds for small chains.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Compressed-row transition matrix plus stationary distribution `pi`.
#[derive(Clone, Debug)]
pub struct Kernel {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    pub pi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutReport {
    pub size: usize,
    pub phi: f64,
    pub pi_s: f64,
    pub pi_complement: f64,
    /// `1 / (4 phi)`; `None` unless `pi(S) <= 1/2`.
    pub mixing_lower_bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixingTime {
    pub steps: usize,
    /// `steps` is only a lower bound: some start had not mixed when the step
    /// cap was reached.
    pub capped: bool,
}

impl Kernel {
    /// Builds from per-row `(column, probability)` lists, each sorted by
    /// column without repeats.
    pub fn from_rows(rows: Vec<Vec<(u32, f64)>>, pi: Vec<f64>) -> Result<Self> {
        if rows.len() != pi.len() {
            return Err(Error::InvalidArgument(format!(
                "{} kernel rows but {} stationary entries",
                rows.len(),
                pi.len()
            )));
        }
        let mut k = Kernel {
            row_ptr: vec![0],
            cols: Vec::new(),
            vals: Vec::new(),
            pi,
        };
        for row in rows {
            k.push_row(row);
        }
        Ok(k)
    }

    pub(crate) fn with_capacity(states: usize, nnz: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(states + 1);
        row_ptr.push(0);
        Kernel {
            row_ptr,
            cols: Vec::with_capacity(nnz),
            vals: Vec::with_capacity(nnz),
            pi: Vec::new(),
        }
    }

    pub(crate) fn push_row(&mut self, row: Vec<(u32, f64)>) {
        for (c, v) in row {
            self.cols.push(c);
            self.vals.push(v);
        }
        self.row_ptr.push(self.cols.len());
    }

    /// Dense matrix input, mostly for tests and toy chains.
    pub fn from_dense(p: &[Vec<f64>], pi: Vec<f64>) -> Result<Self> {
        let rows = p
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(j, &v)| (j as u32, v))
                    .collect()
            })
            .collect();
        Kernel::from_rows(rows, pi)
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&(j as u32)) {
            Ok(p) => self.vals[r.start + p],
            Err(_) => 0.0,
        }
    }

    /// `max_i |sum_j P(i, j) - 1|`.
    pub fn row_sum_error(&self) -> f64 {
        (0..self.len())
            .map(|i| (compensated_sum(self.row(i).map(|(_, v)| v)) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest relative violation of `pi(x) P(x, y) = pi(y) P(y, x)`.
    pub fn detailed_balance_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for (j, p) in self.row(i) {
                if j <= i {
                    continue;
                }
                let f = self.pi[i] * p;
                let b = self.pi[j] * self.get(j, i);
                let scale = f.max(b);
                if scale > 0.0 {
                    worst = worst.max((f - b).abs() / scale);
                }
            }
        }
        worst
    }

    /// `P(x, y) == P(y, x)` bit for bit.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| self.row(i).all(|(j, p)| self.get(j, i) == p))
    }

    /// `x P` for a row vector `x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                for (j, p) in self.row(i) {
                    y[j] += xi * p;
                }
            }
        }
        y
    }

    /// One power-iteration step from `pi`: `max_i |(pi P)_i - pi_i| / pi_i`.
    pub fn stationarity_residual(&self) -> f64 {
        let next = self.apply(&self.pi);
        next.iter()
            .zip(&self.pi)
            .map(|(a, b)| if *b > 0.0 { (a - b).abs() / b } else { a.abs() })
            .fold(0.0, f64::max)
    }

    /// Conductance `Phi(S) = sum_{x in S, y not in S} pi(x) P(x, y) / pi(S)`.
    pub fn conductance(&self, in_s: &[bool]) -> Result<CutReport> {
        if in_s.len() != self.len() {
            return Err(Error::InvalidCut(format!(
                "membership vector has {} entries for {} states",
                in_s.len(),
                self.len()
            )));
        }
        let size = in_s.iter().filter(|&&b| b).count();
        if size == 0 || size == self.len() {
            return Err(Error::InvalidCut("S must be a nonempty proper subset".into()));
        }
        let pi_s = compensated_sum((0..self.len()).filter(|&i| in_s[i]).map(|i| self.pi[i]));
        let pi_c = compensated_sum((0..self.len()).filter(|&i| !in_s[i]).map(|i| self.pi[i]));
        let flow = compensated_sum((0..self.len()).filter(|&i| in_s[i]).flat_map(|i| {
            self.row(i)
                .filter(|&(j, _)| !in_s[j])
                .map(move |(_, p)| self.pi[i] * p)
        }));
        let phi = (flow / pi_s).clamp(0.0, 1.0);
        let mixing_lower_bound = (pi_s <= 0.5 + 1e-12).then(|| 1.0 / (4.0 * phi));
        Ok(CutReport {
            size,
            phi,
            pi_s,
            pi_complement: pi_c,
            mixing_lower_bound,
        })
    }

    /// Total-variation distance to `pi`.
    pub fn tv_to_stationary(&self, x: &[f64]) -> f64 {
        0.5 * compensated_sum(x.iter().zip(&self.pi).map(|(a, b)| (a - b).abs()))
    }

    /// Worst-start mixing time: the largest, over start states, of the first
    /// `t` with `d_TV(P^t(i, .), pi) <= delta`.
    pub fn mixing_time(&self, delta: f64, max_steps: usize) -> MixingTime {
        let mut worst = MixingTime {
            steps: 0,
            capped: false,
        };
        for start in 0..self.len() {
            let mut x = vec![0.0; self.len()];
            x[start] = 1.0;
            let mut t = 0;
            while self.tv_to_stationary(&x) > delta {
                if t == max_steps {
                    return MixingTime {
                        steps: max_steps,
                        capped: true,
                    };
                }
                x = self.apply(&x);
                t += 1;
            }
            worst.steps = worst.steps.max(t);
        }
        worst
    }

    /// Relaxation-time bounds on the `delta`-mixing time of a reversible
    /// chain, `(t_rel - 1) ln(1/(2 delta))` and `t_rel ln(1/(delta pi_min))`,
    /// with `t_rel = 1 / (1 - lambda_*)`. `None` above `max_states` or when
    /// `lambda_* = 1`.
    pub fn spectral_bounds(&self, delta: f64, max_states: usize) -> Option<(f64, f64)> {
        let n = self.len();
        if n > max_states || n < 2 {
            return None;
        }
        let sq: Vec<f64> = self.pi.iter().map(|p| p.sqrt()).collect();
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for (j, p) in self.row(i) {
                a[(i, j)] = sq[i] * p / sq[j];
            }
        }
        let a = (&a + a.transpose()) * 0.5;
        let mut eig: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let lambda = eig[1..].iter().map(|l| l.abs()).fold(0.0, f64::max);
        if lambda >= 1.0 - 1e-12 {
            return None;
        }
        let t_rel = 1.0 / (1.0 - lambda);
        let pi_min = self.pi.iter().copied().fold(f64::INFINITY, f64::min);
        Some((
            (t_rel - 1.0) * (1.0 / (2.0 * delta)).ln(),
            t_rel * (1.0 / (delta * pi_min)).ln(),
        ))
    }
}
