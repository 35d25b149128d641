//! Long-run occupation measurement and community detection by energy
//! ranking of partial-consensus states.
//!
//! A multi-name state read as "which sites strictly hold which single word"
//! is a candidate partition of the graph; states are collected from NNG
//! runs, scored by their exact Gibbs energy, and ranked ascending. Boundary
//! sites (multi-word lists) are reported separately and excluded from
//! pair-counting similarity.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::config::Configuration;
use crate::dynamics::{chain_rng, Kernel};
use crate::error::{Error, Result};
use crate::gibbs::EnergyContext;
use crate::localspec::EpsilonMode;
use crate::statespace::StateSpace;
use crate::word::Word;

/// Bound on distinct histogram bins / distinct visited states.
pub const DEFAULT_VISIT_GUARD: usize = 1_000_000;
/// At most this many distinct states get an (expensive) exact energy score;
/// kept are the most frequently visited ones.
pub const DEFAULT_SCORE_CAP: usize = 10_000;

/// What a long run records at every thinned step.
#[derive(Debug, Clone)]
pub enum Projector {
    /// Number of sites strictly in `{w}`.
    StrictCount(Word),
    /// The full configuration, indexed through the given state space.
    FullState(StateSpace),
    /// The Gibbs energy, binned by `floor(H / width)`.
    Energy { ctx: EnergyContext, width: f64 },
}

impl Projector {
    pub fn id(&self) -> String {
        match self {
            Projector::StrictCount(w) => alloc::format!("strict-count({})", w.letter()),
            Projector::FullState(_) => String::from("full-state"),
            Projector::Energy { width, .. } => alloc::format!("energy(width={width})"),
        }
    }

    fn bin(&self, config: &Configuration) -> Result<i64> {
        Ok(match self {
            Projector::StrictCount(w) => config.strict_count(*w) as i64,
            Projector::FullState(space) => space.index(config) as i64,
            Projector::Energy { ctx, width } => {
                let h = ctx.gibbs_energy(config)?;
                libm::floor(h / width) as i64
            }
        })
    }
}

/// Visit counts of projector bins over a thinned trajectory tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationHistogram {
    projector_id: String,
    counts: BTreeMap<i64, u64>,
    steps: usize,
    burnin: usize,
    thin: usize,
}

impl OccupationHistogram {
    pub fn projector_id(&self) -> &str {
        &self.projector_id
    }

    /// Bin -> visit count, bins ascending.
    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn burnin(&self) -> usize {
        self.burnin
    }

    pub fn thin(&self) -> usize {
        self.thin
    }

    /// Total samples: `(steps - burnin) / thin` per contributing chain.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn probability(&self, bin: i64) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        *self.counts.get(&bin).unwrap_or(&0) as f64 / total as f64
    }

    /// Merge another histogram recorded with the same projector and
    /// schedule; counts add, steps accumulate.
    pub fn merge(&mut self, other: &OccupationHistogram) -> Result<()> {
        if self.projector_id != other.projector_id
            || self.burnin != other.burnin
            || self.thin != other.thin
        {
            return Err(Error::MismatchedUniverses);
        }
        for (&bin, &count) in &other.counts {
            *self.counts.entry(bin).or_insert(0) += count;
        }
        self.steps += other.steps;
        Ok(())
    }
}

/// Run the chain for `steps` steps and record the projector value every
/// `thin` steps after `burnin`; exactly `(steps - burnin) / thin` samples.
pub fn simulate_occupation(
    kernel: &Kernel,
    c0: &Configuration,
    steps: usize,
    burnin: usize,
    thin: usize,
    seed: u64,
    chain: u64,
    projector: &Projector,
) -> Result<OccupationHistogram> {
    if steps <= burnin {
        return Err(Error::StepsNotAboveBurnin);
    }
    if thin == 0 {
        return Err(Error::BadThinning);
    }
    if c0.len() != kernel.graph().len() {
        return Err(Error::WrongSiteCount { expected: kernel.graph().len(), got: c0.len() });
    }
    let mut rng = chain_rng(seed, chain);
    let mut config = c0.clone();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for step in 1..=steps {
        kernel.step(&mut config, &mut rng);
        if step > burnin && (step - burnin) % thin == 0 {
            let bin = projector.bin(&config)?;
            if !counts.contains_key(&bin) && counts.len() >= DEFAULT_VISIT_GUARD {
                return Err(Error::RecorderGuardExceeded {
                    requested: counts.len() + 1,
                    guard: DEFAULT_VISIT_GUARD,
                });
            }
            *counts.entry(bin).or_insert(0) += 1;
        }
    }
    Ok(OccupationHistogram { projector_id: projector.id(), counts, steps, burnin, thin })
}

/// A multi-name state read as a partition: per-word strict blocks plus the
/// multi-word boundary, with its exact energy and visit frequency.
#[derive(Debug, Clone)]
pub struct PartitionCandidate {
    state: Configuration,
    blocks: Vec<Vec<usize>>,
    boundary: Vec<usize>,
    energy: f64,
    frequency: u64,
}

impl PartitionCandidate {
    pub fn from_configuration(
        config: Configuration,
        ctx: &EnergyContext,
        frequency: u64,
    ) -> Result<Self> {
        let energy = ctx.gibbs_energy(&config)?;
        let alphabet = ctx.alphabet();
        let mut blocks = alloc::vec![Vec::new(); alphabet.len()];
        let mut boundary = Vec::new();
        for site in 0..config.len() {
            let label = config.label(site);
            match label.as_singleton() {
                Some(w) => blocks[w.index()].push(site),
                None => boundary.push(site),
            }
        }
        Ok(PartitionCandidate { state: config, blocks, boundary, energy, frequency })
    }

    pub fn state(&self) -> &Configuration {
        &self.state
    }

    /// Per-word strict site blocks, indexed by word; may contain empty
    /// blocks for unused words.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn frequency(&self) -> u64 {
        self.frequency
    }

    fn block_of(&self, site: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&site).is_ok())
    }
}

/// Margin defining the consensus basin. A state where all but at most this
/// many sites strictly hold one and the same word is a consensus
/// fluctuation, not a candidate partition: such states sit inside the
/// occupation peaks at full consensus and their energies undercut every
/// genuine multi-block state, so ranking them would always bury the
/// community structure.
pub fn consensus_margin(sites: usize) -> usize {
    (sites / 20).max(1)
}

/// True when `config` lies in the consensus basin: some word is strictly
/// held by all but at most `consensus_margin` sites. Full consensus itself
/// is the margin-0 case.
pub fn in_consensus_basin(config: &Configuration, alphabet: crate::word::Alphabet) -> bool {
    let margin = consensus_margin(config.len());
    alphabet.words().any(|w| config.len() - config.strict_count(w) <= margin)
}

/// Run `chains` NNG chains from random starts, collect the distinct visited
/// multi-name states, score the most frequent ones by exact energy, and
/// return the `top_m` lowest-energy candidates (visit frequency breaks
/// ties).
///
/// States in the consensus basin (see [`consensus_margin`]) are discounted:
/// they always dominate the invariant measure and carry no partition
/// information.
#[allow(clippy::too_many_arguments)]
pub fn detect_communities(
    kernel: &Kernel,
    steps: usize,
    burnin: usize,
    thin: usize,
    seed: u64,
    chains: u64,
    top_m: usize,
) -> Result<Vec<PartitionCandidate>> {
    if steps <= burnin {
        return Err(Error::StepsNotAboveBurnin);
    }
    if thin == 0 {
        return Err(Error::BadThinning);
    }
    if chains == 0 {
        return Err(Error::EmptyExperiment);
    }
    let alphabet = kernel.alphabet();
    let n = kernel.graph().len();
    let mut visits: BTreeMap<String, (Configuration, u64)> = BTreeMap::new();
    for chain in 0..chains {
        let mut rng = chain_rng(seed, chain);
        let mut config = Configuration::random(alphabet, n, &mut rng);
        for step in 1..=steps {
            kernel.step(&mut config, &mut rng);
            if step <= burnin || (step - burnin) % thin != 0 {
                continue;
            }
            if in_consensus_basin(&config, alphabet) {
                continue;
            }
            let key = config.encode(alphabet);
            match visits.get_mut(&key) {
                Some(entry) => entry.1 += 1,
                None => {
                    if visits.len() >= DEFAULT_VISIT_GUARD {
                        evict_least_frequent(&mut visits);
                    }
                    visits.insert(key, (config.clone(), 1));
                }
            }
        }
    }
    if visits.is_empty() {
        return Err(Error::NoCandidateStates);
    }

    // score only the most visited states; the exact energy is the expensive part
    let mut by_frequency: Vec<(Configuration, u64)> = visits.into_values().collect();
    by_frequency.sort_by(|a, b| b.1.cmp(&a.1));
    by_frequency.truncate(DEFAULT_SCORE_CAP);

    let ctx = EnergyContext::new(
        kernel.graph().clone(),
        alphabet,
        EpsilonMode::Finite(kernel.epsilon()),
    )?;
    let mut candidates = Vec::with_capacity(by_frequency.len());
    for (config, frequency) in by_frequency {
        candidates.push(PartitionCandidate::from_configuration(config, &ctx, frequency)?);
    }
    candidates.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .expect("energies are finite")
            .then_with(|| b.frequency.cmp(&a.frequency))
            .then_with(|| a.state.encode(ctx.alphabet()).cmp(&b.state.encode(ctx.alphabet())))
    });
    candidates.truncate(top_m);
    Ok(candidates)
}

fn evict_least_frequent(visits: &mut BTreeMap<String, (Configuration, u64)>) {
    if let Some(key) = visits
        .iter()
        .min_by_key(|(_, (_, count))| *count)
        .map(|(k, _)| k.clone())
    {
        visits.remove(&key);
    }
}

/// Pair-counting (Rand) similarity between a candidate and a reference
/// partition, over the candidate's non-boundary sites only. 1 iff the
/// partitions agree up to relabeling; label-permutation invariant by
/// construction.
pub fn partition_similarity(
    candidate: &PartitionCandidate,
    reference: &[Vec<usize>],
) -> Result<f64> {
    let n = candidate.state.len();
    let mut ref_block = alloc::vec![usize::MAX; n];
    let mut covered = 0usize;
    for (b, block) in reference.iter().enumerate() {
        for &site in block {
            if site >= n {
                return Err(Error::MismatchedUniverses);
            }
            if ref_block[site] != usize::MAX {
                return Err(Error::BadReferencePartition);
            }
            ref_block[site] = b;
            covered += 1;
        }
    }
    if covered != n {
        return Err(Error::BadReferencePartition);
    }
    let sites: Vec<usize> =
        (0..n).filter(|&s| candidate.boundary.binary_search(&s).is_err()).collect();
    let mut agree = 0u64;
    let mut total = 0u64;
    for (i, &u) in sites.iter().enumerate() {
        for &v in &sites[i + 1..] {
            let same_cand = candidate.block_of(u) == candidate.block_of(v);
            let same_ref = ref_block[u] == ref_block[v];
            total += 1;
            if same_cand == same_ref {
                agree += 1;
            }
        }
    }
    if total == 0 {
        return Ok(1.0);
    }
    Ok(agree as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::word::Alphabet;

    fn fig2_kernel(eps: f64) -> Kernel {
        Kernel::new(Graph::builtin("fig2").unwrap(), Alphabet::new(2).unwrap(), eps).unwrap()
    }

    fn fig2_candidate(state: &str) -> PartitionCandidate {
        let a2 = Alphabet::new(2).unwrap();
        let ctx = EnergyContext::new(
            Graph::builtin("fig2").unwrap(),
            a2,
            EpsilonMode::Finite(0.01),
        )
        .unwrap();
        let config = Configuration::decode(state, a2, 6).unwrap();
        PartitionCandidate::from_configuration(config, &ctx, 1).unwrap()
    }

    #[test]
    fn histogram_schedule_contract() {
        let kernel = fig2_kernel(0.05);
        let a2 = kernel.alphabet();
        let c0 = Configuration::uniform(a2.full_list(), 6);
        let w = a2.word(0).unwrap();
        let h = simulate_occupation(&kernel, &c0, 1000, 100, 6, 9, 0, &Projector::StrictCount(w))
            .unwrap();
        assert_eq!(h.total(), 150);
        assert_eq!(h.projector_id(), "strict-count(A)");
        assert!(h.counts().keys().all(|&bin| (0..=6).contains(&bin)));
        // determinism
        let h2 = simulate_occupation(&kernel, &c0, 1000, 100, 6, 9, 0, &Projector::StrictCount(w))
            .unwrap();
        assert_eq!(h, h2);
        // schedule errors
        assert!(matches!(
            simulate_occupation(&kernel, &c0, 100, 100, 1, 9, 0, &Projector::StrictCount(w)),
            Err(Error::StepsNotAboveBurnin)
        ));
        assert!(matches!(
            simulate_occupation(&kernel, &c0, 200, 100, 0, 9, 0, &Projector::StrictCount(w)),
            Err(Error::BadThinning)
        ));
    }

    #[test]
    fn histograms_merge_across_chains() {
        let kernel = fig2_kernel(0.05);
        let a2 = kernel.alphabet();
        let c0 = Configuration::uniform(a2.full_list(), 6);
        let w = a2.word(0).unwrap();
        let proj = Projector::StrictCount(w);
        let mut h0 = simulate_occupation(&kernel, &c0, 500, 100, 2, 9, 0, &proj).unwrap();
        let h1 = simulate_occupation(&kernel, &c0, 500, 100, 2, 9, 1, &proj).unwrap();
        assert_ne!(h0, h1);
        h0.merge(&h1).unwrap();
        assert_eq!(h0.total(), 400);
        let different = simulate_occupation(&kernel, &c0, 500, 100, 5, 9, 2, &proj).unwrap();
        assert!(matches!(h0.merge(&different), Err(Error::MismatchedUniverses)));
    }

    #[test]
    fn candidate_reads_blocks_and_boundary() {
        let cand = fig2_candidate("A-A-AB-B-B-B");
        assert_eq!(cand.blocks()[0], alloc::vec![0, 1]);
        assert_eq!(cand.blocks()[1], alloc::vec![3, 4, 5]);
        assert_eq!(cand.boundary(), &[2]);
    }

    #[test]
    fn similarity_basics() {
        let cand = fig2_candidate("A-A-A-B-B-B");
        let planted = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![3, 4, 5]];
        assert_eq!(partition_similarity(&cand, &planted).unwrap(), 1.0);
        // swapped labels are the same partition
        let swapped = fig2_candidate("B-B-B-A-A-A");
        assert_eq!(partition_similarity(&swapped, &planted).unwrap(), 1.0);
        // boundary sites are excluded from pair counting
        let with_boundary = fig2_candidate("A-A-AB-B-B-B");
        assert_eq!(partition_similarity(&with_boundary, &planted).unwrap(), 1.0);
        // bad references
        assert!(matches!(
            partition_similarity(&cand, &[alloc::vec![0, 1, 2]]),
            Err(Error::BadReferencePartition)
        ));
        assert!(matches!(
            partition_similarity(&cand, &[alloc::vec![0, 1, 2], alloc::vec![3, 4, 9]]),
            Err(Error::MismatchedUniverses)
        ));
    }

    #[test]
    fn similarity_zero_for_fully_disagreeing_pairs() {
        // one block vs per-site singletons: every pair disagrees
        let a2 = Alphabet::new(2).unwrap();
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap();
        let ctx = EnergyContext::new(g, a2, EpsilonMode::Finite(0.01)).unwrap();
        let config = Configuration::decode("A-A-A-A", a2, 4).unwrap();
        let cand = PartitionCandidate::from_configuration(config, &ctx, 1).unwrap();
        let singletons: Vec<Vec<usize>> = (0..4).map(|s| alloc::vec![s]).collect();
        assert_eq!(partition_similarity(&cand, &singletons).unwrap(), 0.0);
    }

    #[test]
    fn detects_fig2_triangles() {
        let kernel = fig2_kernel(0.01);
        let candidates = detect_communities(&kernel, 200_000, 1_000, 6, 17, 8, 5).unwrap();
        assert!(!candidates.is_empty());
        // ranking is ascending in energy and every candidate is multi-name
        for pair in candidates.windows(2) {
            assert!(pair[0].energy() <= pair[1].energy());
        }
        for c in &candidates {
            assert!(c.state().single_name().is_none());
        }
        let planted = alloc::vec![alloc::vec![0, 1, 2], alloc::vec![3, 4, 5]];
        let sim = partition_similarity(&candidates[0], &planted).unwrap();
        assert_eq!(sim, 1.0, "top candidate {:?}", candidates[0].state());
    }

    #[test]
    fn degenerate_budget_reports_no_candidates() {
        // epsilon 0 from a consensus start never leaves consensus
        let kernel = fig2_kernel(0.0);
        let err = detect_communities(&kernel, 10, 0, 1, 3, 1, 5);
        // random starts may or may not visit multi-name states in 10 steps;
        // the error surface we pin down is the schedule validation
        let _ = err;
        assert!(matches!(
            detect_communities(&kernel, 10, 10, 1, 3, 1, 5),
            Err(Error::StepsNotAboveBurnin)
        ));
        assert!(matches!(
            detect_communities(&kernel, 10, 0, 1, 3, 0, 5),
            Err(Error::EmptyExperiment)
        ));
    }
}
