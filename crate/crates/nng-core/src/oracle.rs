//! Brute-force ground truth on small state spaces: the full transition
//! matrix, its exact stationary distribution, detailed-balance residuals and
//! absorption statistics.
//!
//! Everything here is deliberately exhaustive; the guards refuse anything
//! beyond desk scale rather than approximating.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::Configuration;
use crate::dynamics::{chain_rng, Kernel};
use crate::error::{Error, Result};
use crate::gibbs::DEFAULT_STATE_GUARD;
use crate::linalg;
use crate::localspec::{EpsilonMode, ReceiveProbs};
use crate::statespace::StateSpace;

pub const POWER_MAX_ITERATIONS: usize = 1_000_000;
pub const POWER_TOLERANCE: f64 = 1e-13;
/// Power-iteration budget before handing over to the dense solve; slowly
/// mixing chains (small noise) would otherwise dominate the runtime.
const POWER_FALLBACK_BUDGET: usize = 20_000;
/// Largest state count for the dense linear-solve fallback.
pub const DENSE_SOLVE_LIMIT: usize = 2000;

/// The exhaustively materialized one-step kernel, row-sparse.
#[derive(Debug, Clone)]
pub struct FullKernelMatrix {
    space: StateSpace,
    /// `rows[g]` holds `(g2, P(g, g2))` with `g2` ascending.
    rows: Vec<Vec<(usize, f64)>>,
    epsilon: f64,
}

impl FullKernelMatrix {
    /// Build the matrix by enumerating (listener, word) outcomes per state;
    /// entries match `Kernel::transition_probability` exactly.
    pub fn build(kernel: &Kernel) -> Result<Self> {
        Self::build_guarded(kernel, DEFAULT_STATE_GUARD)
    }

    pub fn build_guarded(kernel: &Kernel, guard: usize) -> Result<Self> {
        let graph = kernel.graph();
        let alphabet = kernel.alphabet();
        let space = StateSpace::new(graph.len(), alphabet, guard)?;
        let mode = EpsilonMode::Finite(kernel.epsilon());
        let mut rows = Vec::with_capacity(space.len());
        for g in space.iter() {
            let mut entries: Vec<(usize, f64)> = Vec::new();
            for site in 0..graph.len() {
                let q = kernel.listener_weights()[site];
                let rp = ReceiveProbs::compute(graph, site, &g, alphabet, mode)?;
                let from = g.label(site);
                for w in alphabet.words() {
                    let to = from.receive(w);
                    let mut g2 = g.clone();
                    g2.set_label(site, to);
                    let idx = space.index(&g2);
                    match entries.iter_mut().find(|(i, _)| *i == idx) {
                        Some((_, p)) => *p += q * rp.prob(w),
                        None => entries.push((idx, q * rp.prob(w))),
                    }
                }
            }
            entries.sort_by_key(|&(i, _)| i);
            rows.push(entries);
        }
        Ok(FullKernelMatrix { space, rows, epsilon: kernel.epsilon() })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn entry(&self, g: usize, g2: usize) -> f64 {
        self.rows[g]
            .binary_search_by_key(&g2, |&(i, _)| i)
            .map_or(0.0, |pos| self.rows[g][pos].1)
    }

    pub fn row(&self, g: usize) -> &[(usize, f64)] {
        &self.rows[g]
    }

    /// Maximum deviation of any row sum from 1.
    pub fn row_sum_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `x -> x P` (left multiplication by a measure).
    fn propagate(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (g, row) in self.rows.iter().enumerate() {
            let mass = x[g];
            if mass == 0.0 {
                continue;
            }
            for &(g2, p) in row {
                out[g2] += mass * p;
            }
        }
        out
    }

    /// True iff the transition graph is strongly connected and aperiodic.
    pub fn is_irreducible_aperiodic(&self) -> bool {
        let n = self.len();
        let forward: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|row| row.iter().filter(|&&(_, p)| p > 0.0).map(|&(j, _)| j).collect())
            .collect();
        let mut backward: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, row) in forward.iter().enumerate() {
            for &j in row {
                backward[j].push(i);
            }
        }
        if !reaches_all(&forward, n) || !reaches_all(&backward, n) {
            return false;
        }
        // period = gcd over edges of (level(u) + 1 - level(v)) on a BFS tree
        let mut level = vec![usize::MAX; n];
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        level[0] = 0;
        let mut period: i64 = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &forward[u] {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    let d = level[u] as i64 + 1 - level[v] as i64;
                    period = gcd_i64(period, d.abs());
                }
            }
        }
        period == 1
    }

    /// Exact stationary distribution: power iteration from the uniform
    /// start, with a dense linear-solve fallback on small noisy chains.
    ///
    /// At `epsilon = 0` the chain is reducible and the result is the
    /// absorbed mixture reached from the uniform start, which is what the
    /// transience analysis wants to see.
    pub fn stationary_distribution(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let dense_available = self.epsilon > 0.0 && n <= DENSE_SOLVE_LIMIT;
        let mut x = vec![1.0 / n as f64; n];
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        for it in 0..POWER_MAX_ITERATIONS {
            let next = self.propagate(&x);
            residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            x = next;
            iterations = it + 1;
            if residual < POWER_TOLERANCE {
                let total: f64 = x.iter().sum();
                for p in x.iter_mut() {
                    *p /= total;
                }
                return Ok(x);
            }
            if dense_available && iterations >= POWER_FALLBACK_BUDGET {
                break;
            }
        }
        if dense_available {
            if let Some(pi) = self.dense_stationary() {
                return Ok(pi);
            }
        }
        Err(Error::NonConvergence { residual, iterations })
    }

    /// Direct dense solve of `pi P = pi`, usable as an independent
    /// cross-check of the power iteration.
    pub fn dense_stationary(&self) -> Option<Vec<f64>> {
        let n = self.len();
        if n > DENSE_SOLVE_LIMIT {
            return None;
        }
        let mut t = vec![vec![0.0; n]; n];
        for (g, row) in self.rows.iter().enumerate() {
            for &(g2, p) in row {
                t[g][g2] = p;
            }
        }
        linalg::stationary_dense(&t)
    }

    /// L1 residual `|pi P - pi|` of a candidate invariant measure.
    pub fn invariance_residual(&self, pi: &[f64]) -> f64 {
        let next = self.propagate(pi);
        pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum()
    }
}

fn reaches_all(adj: &[Vec<usize>], n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut queue = alloc::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd_i64(b, a % b)
    }
}

/// Distance / residual report for two distributions over one state space.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionComparison {
    /// Total variation distance `0.5 * sum |p - q|`.
    pub tv: f64,
    /// `max |p(g) P(g,g2) - p(g2) P(g2,g)|` over all pairs, when a kernel
    /// matrix is supplied.
    pub max_db_residual: Option<f64>,
    /// `max_g |sum_g2 p(g2) P(g2,g) - p(g)|`: the largest one-step change of
    /// the measure `p`.
    pub max_delta_pi: Option<f64>,
    pub states: usize,
}

/// Compare `p` against `q`; with a kernel matrix also measure how far `p` is
/// from being a reversible invariant measure of it.
pub fn compare_distributions(
    p: &[f64],
    q: &[f64],
    m: Option<&FullKernelMatrix>,
) -> Result<DistributionComparison> {
    if p.len() != q.len() {
        return Err(Error::MismatchedStateSpaces { left: p.len(), right: q.len() });
    }
    if let Some(m) = m {
        if m.len() != p.len() {
            return Err(Error::MismatchedStateSpaces { left: p.len(), right: m.len() });
        }
    }
    let tv = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let (mut max_db, mut max_delta) = (None, None);
    if let Some(m) = m {
        let mut db: f64 = 0.0;
        for g in 0..m.len() {
            for &(g2, pf) in m.row(g) {
                let back = m.entry(g2, g);
                db = db.max((p[g] * pf - p[g2] * back).abs());
            }
        }
        let next = m.propagate(p);
        let delta = p.iter().zip(&next).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
        max_db = Some(db);
        max_delta = Some(delta);
    }
    Ok(DistributionComparison {
        tv,
        max_db_residual: max_db,
        max_delta_pi: max_delta,
        states: p.len(),
    })
}

/// Empirical absorption statistics of the noiseless game.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionReport {
    pub trials: usize,
    pub absorbed: usize,
    pub max_steps: usize,
    /// Mean steps to absorption over the absorbed trials.
    pub mean_steps: f64,
}

impl AbsorptionReport {
    pub fn fraction(&self) -> f64 {
        self.absorbed as f64 / self.trials as f64
    }
}

/// Run `trials` independent chains from random starts and count how many hit
/// a single-name state within `max_steps`. Requires `epsilon = 0`.
pub fn absorption_analysis(
    kernel: &Kernel,
    trials: usize,
    max_steps: usize,
    seed: u64,
) -> Result<AbsorptionReport> {
    if kernel.epsilon() != 0.0 {
        return Err(Error::NoiseMustBeZero);
    }
    if trials == 0 {
        return Err(Error::EmptyExperiment);
    }
    let n = kernel.graph().len();
    let mut absorbed = 0usize;
    let mut total_steps = 0u64;
    for trial in 0..trials {
        let mut rng = chain_rng(seed, trial as u64);
        let mut c = Configuration::random(kernel.alphabet(), n, &mut rng);
        if c.single_name().is_some() {
            absorbed += 1;
            continue;
        }
        for step in 1..=max_steps {
            kernel.step(&mut c, &mut rng);
            if c.single_name().is_some() {
                absorbed += 1;
                total_steps += step as u64;
                break;
            }
        }
    }
    let mean_steps = if absorbed > 0 { total_steps as f64 / absorbed as f64 } else { f64::NAN };
    Ok(AbsorptionReport { trials, absorbed, max_steps, mean_steps })
}
