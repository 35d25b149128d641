//! Clique potentials, Gibbs energy and the Gibbs distribution of the noisy
//! dynamics.
//!
//! The construction assigns the full word list as the "0 local state". For a
//! clique subset `E` with everything outside at 0, `F(x(E))` is the product
//! of local-distribution ratios obtained by switching the members of `E`
//! from 0 to their target labels one at a time. The clique potential is the
//! inclusion-exclusion (Moebius) combination of `ln F` over subsets, and the
//! energy `H` of a configuration sums clique potentials over the whole
//! clique inventory. All accumulation happens in the log domain.
//!
//! The product is evaluated in a fixed canonical site order (fewest
//! neighbors outside the subset first). The value genuinely depends on that
//! order on graphs with unequal degrees; see `ln_f_ordered` and the
//! property tests for the measured behavior.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::clique::{enumerate_cliques, CliqueInventory, DEFAULT_CLIQUE_GUARD};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::localspec::{local_spec, EpsilonMode, ReceiveProbs};
use crate::statespace::StateSpace;
use crate::word::{Alphabet, WordList};

pub const DEFAULT_STATE_GUARD: usize = 10_000_000;

/// Immutable context for energy evaluation: graph, clique inventory,
/// alphabet and noise regime.
///
/// When the inventory is closed under subsets (always true for the default
/// unbounded enumeration) the Moebius expansion of every clique potential is
/// precompiled into signed references to shared `ln F` slots, so one energy
/// evaluation computes each clique's `ln F` exactly once.
#[derive(Debug, Clone)]
pub struct EnergyContext {
    graph: Graph,
    alphabet: Alphabet,
    inventory: CliqueInventory,
    mode: EpsilonMode,
    /// Net Moebius coefficient of each clique's `ln F` in the total energy,
    /// summed over all inventory cliques containing it; empty when the
    /// inventory is not subset-closed.
    net_coefficient: Vec<f64>,
}

impl EnergyContext {
    pub fn new(graph: Graph, alphabet: Alphabet, mode: EpsilonMode) -> Result<Self> {
        mode.validate()?;
        let inventory = enumerate_cliques(&graph, None, DEFAULT_CLIQUE_GUARD)?;
        Ok(Self::assemble(graph, alphabet, mode, inventory))
    }

    pub fn with_inventory(
        graph: Graph,
        alphabet: Alphabet,
        mode: EpsilonMode,
        inventory: CliqueInventory,
    ) -> Result<Self> {
        mode.validate()?;
        Ok(Self::assemble(graph, alphabet, mode, inventory))
    }

    fn assemble(
        graph: Graph,
        alphabet: Alphabet,
        mode: EpsilonMode,
        inventory: CliqueInventory,
    ) -> Self {
        let by_members: BTreeMap<&[usize], u32> = inventory
            .cliques()
            .iter()
            .enumerate()
            .map(|(i, c)| (c.members(), i as u32))
            .collect();
        let mut net_coefficient = alloc::vec![0.0; inventory.len()];
        let mut closed = true;
        'outer: for clique in inventory.cliques() {
            let members = clique.members();
            let m = members.len();
            for mask in 1u32..(1 << m) {
                let sub: Vec<usize> =
                    (0..m).filter(|i| mask & (1 << i) != 0).map(|i| members[i]).collect();
                match by_members.get(sub.as_slice()) {
                    Some(&idx) => {
                        let sign = if (m - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
                        net_coefficient[idx as usize] += sign;
                    }
                    None => {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
        if !closed {
            net_coefficient.clear();
        }
        EnergyContext { graph, alphabet, inventory, mode, net_coefficient }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn inventory(&self) -> &CliqueInventory {
        &self.inventory
    }

    pub fn mode(&self) -> EpsilonMode {
        self.mode
    }

    /// The reference label: the whole word list.
    pub fn zero_state(&self) -> WordList {
        self.alphabet.full_list()
    }

    /// Canonical evaluation order for a subset: members with fewer
    /// neighbors outside the subset first, ties by site id.
    pub fn canonical_order(&self, members: &[usize]) -> Vec<usize> {
        let mut order: Vec<usize> = members.to_vec();
        order.sort_by_key(|&s| {
            let outside =
                self.graph.neighbors(s).iter().filter(|t| !members.contains(t)).count();
            (outside, s)
        });
        order
    }

    /// `ln f_s(target) - ln f_s(0)` for one site under the labels currently
    /// held in `scratch`.
    fn ln_local_ratio(&self, site: usize, target: WordList, scratch: &Configuration) -> Result<f64> {
        let zero = self.zero_state();
        if target == zero {
            return Ok(0.0);
        }
        let rp = ReceiveProbs::compute(&self.graph, site, scratch, self.alphabet, self.mode)?;
        if self.alphabet.len() == 2 {
            // f(A)/f(AB) = p_A/p_B and symmetrically for B
            let (pa, pb) = (rp.probs()[0], rp.probs()[1]);
            let (num, den) = if target.bits() == 1 { (pa, pb) } else { (pb, pa) };
            if num <= 0.0 || den <= 0.0 {
                return Err(Error::LimitModeDivergence);
            }
            return Ok(libm::log(num) - libm::log(den));
        }
        let f = local_spec(&rp, self.alphabet)?;
        let (num, den) = (f.prob(target), f.prob(zero));
        if num <= 0.0 || den <= 0.0 {
            return Err(Error::LimitModeDivergence);
        }
        Ok(libm::log(num) - libm::log(den))
    }

    /// `ln F(x(E) | 0(N(E)))` in the canonical order.
    pub fn ln_f(&self, members: &[usize], labels: &[WordList]) -> Result<f64> {
        let order = self.canonical_order(members);
        self.ln_f_ordered(members, labels, &order)
    }

    /// `ln F` evaluated with an explicit site order. Exposed so the order
    /// sensitivity of the product can be measured directly.
    pub fn ln_f_ordered(
        &self,
        members: &[usize],
        labels: &[WordList],
        order: &[usize],
    ) -> Result<f64> {
        debug_assert_eq!(members.len(), labels.len());
        debug_assert_eq!(order.len(), members.len());
        let mut scratch = Configuration::uniform(self.zero_state(), self.graph.len());
        let mut total = 0.0;
        for &site in order {
            let pos = members.iter().position(|&m| m == site).ok_or(Error::NotAClique)?;
            total += self.ln_local_ratio(site, labels[pos], &scratch)?;
            scratch.set_label(site, labels[pos]);
        }
        Ok(total)
    }

    /// `F(x(E) | 0(N(E)))` as a plain value.
    pub fn f_value(&self, members: &[usize], labels: &[WordList]) -> Result<f64> {
        Ok(libm::exp(self.ln_f(members, labels)?))
    }

    /// Exact rational `F` for two-word limit mode, where every local ratio
    /// is a ratio of integer neighbor counts.
    pub fn f_rational(&self, members: &[usize], labels: &[WordList]) -> Result<(u128, u128)> {
        if self.alphabet.len() != 2 || !matches!(self.mode, EpsilonMode::Limit) {
            return Err(Error::FiniteModeRequired);
        }
        let order = self.canonical_order(members);
        let zero = self.zero_state();
        let (word_a, word_b) = (self.alphabet.word(0)?, self.alphabet.word(1)?);
        let mut scratch = Configuration::uniform(zero, self.graph.len());
        let (mut num, mut den) = (1u128, 1u128);
        for &site in &order {
            let pos = members.iter().position(|&m| m == site).ok_or(Error::NotAClique)?;
            let target = labels[pos];
            if target != zero {
                let rp =
                    ReceiveProbs::compute(&self.graph, site, &scratch, self.alphabet, self.mode)?;
                let (a, b) = if target.bits() == 1 { (word_a, word_b) } else { (word_b, word_a) };
                let (rn, rd) = rp.limit_ratio(a, b)?;
                num *= rn as u128;
                den *= rd as u128;
                let g = gcd128(num.max(1), den);
                num /= g;
                den /= g;
            }
            scratch.set_label(site, target);
        }
        if num == 0 {
            return Err(Error::LimitModeDivergence);
        }
        Ok((num, den))
    }

    /// Moebius clique potential
    /// `V(x(L)) = -sum_{E subset L} (-1)^{|L - E|} ln F(x(E) | 0(N(E)))`.
    pub fn clique_potential(&self, members: &[usize], labels: &[WordList]) -> Result<f64> {
        let mut cache = BTreeMap::new();
        self.clique_potential_cached(members, labels, &mut cache)
    }

    fn clique_potential_cached(
        &self,
        members: &[usize],
        labels: &[WordList],
        cache: &mut BTreeMap<Vec<usize>, f64>,
    ) -> Result<f64> {
        let m = members.len();
        debug_assert!(m < 32);
        let mut total = 0.0;
        for mask in 1u32..(1 << m) {
            let sub_members: Vec<usize> =
                (0..m).filter(|i| mask & (1 << i) != 0).map(|i| members[i]).collect();
            let ln_f = match cache.get(&sub_members) {
                Some(&v) => v,
                None => {
                    let sub_labels: Vec<WordList> =
                        (0..m).filter(|i| mask & (1 << i) != 0).map(|i| labels[i]).collect();
                    let v = self.ln_f(&sub_members, &sub_labels)?;
                    cache.insert(sub_members, v);
                    v
                }
            };
            let sign = if (m - mask.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * ln_f;
        }
        Ok(-total)
    }

    /// Sum of `V` over the subset plus all its sub-cliques, which telescopes
    /// to `-ln F(x(L) | 0(N(L)))`. This is the per-clique quantity the
    /// worked tables report.
    pub fn net_clique_potential(&self, members: &[usize], labels: &[WordList]) -> Result<f64> {
        Ok(-self.ln_f(members, labels)?)
    }

    /// Gibbs energy: clique potentials summed over the whole inventory.
    pub fn gibbs_energy(&self, config: &Configuration) -> Result<f64> {
        if config.len() != self.graph.len() {
            return Err(Error::WrongSiteCount { expected: self.graph.len(), got: config.len() });
        }
        if !self.net_coefficient.is_empty() {
            // fast path: each clique's ln F exactly once, weighted by its
            // precompiled net Moebius coefficient
            let mut total = 0.0;
            let mut labels: Vec<WordList> = Vec::new();
            for (clique, &coeff) in self.inventory.cliques().iter().zip(&self.net_coefficient) {
                if coeff == 0.0 {
                    continue;
                }
                labels.clear();
                labels.extend(clique.members().iter().map(|&s| config.label(s)));
                total -= coeff * self.ln_f(clique.members(), &labels)?;
            }
            return Ok(total);
        }
        let mut cache: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        let mut total = 0.0;
        for clique in self.inventory.cliques() {
            let labels: Vec<WordList> =
                clique.members().iter().map(|&s| config.label(s)).collect();
            total += self.clique_potential_cached(clique.members(), &labels, &mut cache)?;
        }
        Ok(total)
    }

    /// Materialize `H`, `Z` and the normalized Gibbs distribution over the
    /// whole configuration space. Finite noise only.
    pub fn exact_distribution(&self, guard: usize) -> Result<EnergyTable> {
        match self.mode {
            EpsilonMode::Finite(e) if e > 0.0 => {}
            _ => return Err(Error::FiniteModeRequired),
        }
        let space = StateSpace::new(self.graph.len(), self.alphabet, guard)?;
        let mut energies = Vec::with_capacity(space.len());
        for config in space.iter() {
            energies.push(self.gibbs_energy(&config)?);
        }
        let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = energies.iter().map(|&h| libm::exp(min - h)).collect();
        let scaled_z: f64 = weights.iter().sum();
        let pi = weights.iter().map(|w| w / scaled_z).collect();
        // undo the overflow shift: Z = e^{-min} * scaled_z
        let z = libm::exp(-min) * scaled_z;
        Ok(EnergyTable { space, energies, z, pi })
    }

    /// True iff every single-site replacement strictly increases the energy.
    pub fn is_local_minimum(&self, config: &Configuration) -> Result<bool> {
        match self.mode {
            EpsilonMode::Finite(e) if e > 0.0 => {}
            _ => return Err(Error::FiniteModeRequired),
        }
        let h0 = self.gibbs_energy(config)?;
        let mut probe = config.clone();
        for site in 0..config.len() {
            let original = config.label(site);
            for label in self.alphabet.word_lists() {
                if label == original {
                    continue;
                }
                probe.set_label(site, label);
                let h = self.gibbs_energy(&probe)?;
                if h <= h0 {
                    return Ok(false);
                }
            }
            probe.set_label(site, original);
        }
        Ok(true)
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Exhaustive energy table: `pi(x) = exp(-H(x)) / Z` over `Gamma^S`.
#[derive(Debug, Clone)]
pub struct EnergyTable {
    space: StateSpace,
    energies: Vec<f64>,
    z: f64,
    pi: Vec<f64>,
}

impl EnergyTable {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn partition_function(&self) -> f64 {
        self.z
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.pi
    }

    pub fn energy(&self, config: &Configuration) -> f64 {
        self.energies[self.space.index(config)]
    }

    pub fn probability(&self, config: &Configuration) -> f64 {
        self.pi[self.space.index(config)]
    }
}

// unit tests live in tests/gibbs_tables.rs next to the table reproductions
