//! Receive probabilities and the local conditional distribution of a single
//! site with a frozen neighborhood.
//!
//! For a site `i` with noise level `eps` and `k` words, the probability of
//! receiving word `w` in one step is
//!
//! ```text
//! p(w) = eps/k + (1 - eps) * (1/deg(i)) * sum_{j in N(i)} [w in X(j)] / |X(j)|
//! ```
//!
//! Limit mode evaluates the same expression at `eps = 0`. The local
//! distribution `f_i` is the stationary distribution of the single-site chain
//! whose moves are the listener rule with words drawn from `p`; for two words
//! it has the closed form `f(A) : f(B) : f(AB) = p_A^2 : p_B^2 : p_A p_B`,
//! for larger alphabets it is solved numerically.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg;
use crate::word::{Alphabet, Word, WordList};

/// Noise regime for receive probabilities and everything derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonMode {
    Finite(f64),
    Limit,
}

impl EpsilonMode {
    pub fn epsilon(self) -> f64 {
        match self {
            EpsilonMode::Finite(e) => e,
            EpsilonMode::Limit => 0.0,
        }
    }

    pub fn validate(self) -> Result<Self> {
        if let EpsilonMode::Finite(e) = self {
            if !(0.0..=1.0).contains(&e) || e.is_nan() {
                return Err(Error::BadEpsilon);
            }
        }
        Ok(self)
    }
}

/// Common denominator for exact neighbor counts: lcm(1..=16), so that the
/// contribution `1/|X(j)|` of every neighbor is integral after scaling.
pub(crate) const COUNT_SCALE: u64 = 720_720;

/// Per-word receive probabilities of one site under a fixed neighborhood.
#[derive(Debug, Clone)]
pub struct ReceiveProbs {
    p: Vec<f64>,
    /// `COUNT_SCALE`-scaled integer neighbor counts, before noise mixing.
    scaled_counts: Vec<u64>,
    mode: EpsilonMode,
}

impl ReceiveProbs {
    /// Evaluate the receive formula for `site` given the labels of its
    /// neighbors in `config`. Sites outside `N(site)` are ignored.
    pub fn compute(
        graph: &Graph,
        site: usize,
        config: &Configuration,
        alphabet: Alphabet,
        mode: EpsilonMode,
    ) -> Result<Self> {
        if site >= graph.len() {
            return Err(Error::SiteOutOfRange { site, n: graph.len() });
        }
        if config.len() != graph.len() {
            return Err(Error::WrongSiteCount { expected: graph.len(), got: config.len() });
        }
        mode.validate()?;
        let k = alphabet.len();
        let deg = graph.degree(site) as u64;
        let mut scaled_counts = vec![0u64; k];
        for &j in graph.neighbors(site) {
            let label = config.label(j);
            let share = COUNT_SCALE / label.len() as u64;
            for w in label.words() {
                scaled_counts[w.index()] += share;
            }
        }
        let eps = mode.epsilon();
        let denom = (deg * COUNT_SCALE) as f64;
        let p = scaled_counts
            .iter()
            .map(|&c| eps / k as f64 + (1.0 - eps) * c as f64 / denom)
            .collect();
        Ok(ReceiveProbs { p, scaled_counts, mode })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, w: Word) -> f64 {
        self.p[w.index()]
    }

    pub fn mode(&self) -> EpsilonMode {
        self.mode
    }

    /// Exact `p(a) / p(b)` as a reduced rational, available in limit mode
    /// where the probabilities are ratios of integer counts.
    pub fn limit_ratio(&self, a: Word, b: Word) -> Result<(u64, u64)> {
        debug_assert!(matches!(self.mode, EpsilonMode::Limit));
        let (num, den) = (self.scaled_counts[a.index()], self.scaled_counts[b.index()]);
        if den == 0 {
            return Err(Error::LimitModeDivergence);
        }
        if num == 0 {
            return Ok((0, 1));
        }
        let g = gcd(num, den);
        Ok((num / g, den / g))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The local conditional distribution over all nonempty word lists.
#[derive(Debug, Clone)]
pub struct LocalDistribution {
    /// Indexed by `word list bits - 1`.
    f: Vec<f64>,
    normalizer: f64,
}

impl LocalDistribution {
    pub fn prob(&self, label: WordList) -> f64 {
        self.f[label.bits() as usize - 1]
    }

    pub fn probs(&self) -> &[f64] {
        &self.f
    }

    /// `Z_l` before normalization (meaningful for the two-word closed form).
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }
}

/// Stationary distribution of the single-site chain driven by `rp`.
///
/// Two words use the closed form; larger alphabets solve the
/// `(2^k - 1)`-state chain directly, which requires every receive
/// probability to be positive.
pub fn local_spec(rp: &ReceiveProbs, alphabet: Alphabet) -> Result<LocalDistribution> {
    let k = alphabet.len();
    if k == 2 {
        let (pa, pb) = (rp.p[0], rp.p[1]);
        let raw = [pa * pa, pb * pb, pa * pb];
        let z: f64 = raw.iter().sum();
        if z <= 0.0 {
            return Err(Error::LimitModeDivergence);
        }
        return Ok(LocalDistribution { f: raw.iter().map(|v| v / z).collect(), normalizer: z });
    }
    if rp.p.iter().any(|&p| p <= 0.0) {
        return Err(Error::LimitModeDivergence);
    }
    let m = alphabet.num_word_lists();
    let mut t = vec![vec![0.0; m]; m];
    for x in alphabet.word_lists() {
        for w in alphabet.words() {
            let y = x.receive(w);
            t[x.bits() as usize - 1][y.bits() as usize - 1] += rp.prob(w);
        }
    }
    let f = linalg::stationary_dense(&t).ok_or(Error::LimitModeDivergence)?;
    Ok(LocalDistribution { f, normalizer: 1.0 })
}

/// L1 residual of `f` under one step of the single-site chain; a direct
/// stationarity check used by tests and diagnostics.
pub fn stationarity_residual(rp: &ReceiveProbs, f: &LocalDistribution, alphabet: Alphabet) -> f64 {
    let m = alphabet.num_word_lists();
    let mut next = vec![0.0; m];
    for x in alphabet.word_lists() {
        for w in alphabet.words() {
            let y = x.receive(w);
            next[y.bits() as usize - 1] += f.prob(x) * rp.prob(w);
        }
    }
    (0..m).map(|i| (next[i] - f.f[i]).abs()).sum()
}
