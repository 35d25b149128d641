//! Mixed-radix indexing of the full configuration space `Gamma^S`.
//!
//! Site 0 is the most significant digit; per-site digits run over the
//! nonempty word lists in ascending bit-set order. This fixes one iteration
//! order for every exhaustive table in the crate.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::word::{Alphabet, WordList};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSpace {
    sites: usize,
    base: usize,
    len: usize,
}

impl StateSpace {
    pub fn new(sites: usize, alphabet: Alphabet, guard: usize) -> Result<Self> {
        let base = alphabet.num_word_lists();
        let mut len: u128 = 1;
        for _ in 0..sites {
            len = len.saturating_mul(base as u128);
            if len > guard as u128 {
                return Err(Error::StateSpaceTooLarge { states: len, guard });
            }
        }
        Ok(StateSpace { sites, base, len: len as usize })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn index(&self, config: &Configuration) -> usize {
        debug_assert_eq!(config.len(), self.sites);
        let mut idx = 0usize;
        for site in 0..self.sites {
            idx = idx * self.base + (config.label(site).bits() as usize - 1);
        }
        idx
    }

    pub fn config(&self, mut index: usize) -> Configuration {
        debug_assert!(index < self.len);
        let mut labels = alloc::vec![WordList::from_bits(1).expect("nonzero"); self.sites];
        for site in (0..self.sites).rev() {
            let digit = index % self.base;
            index /= self.base;
            labels[site] = WordList::from_bits(digit as u16 + 1).expect("digit in range");
        }
        Configuration::new(labels)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len).map(|i| self.config(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_sizes() {
        let a2 = Alphabet::new(2).unwrap();
        let space = StateSpace::new(2, a2, 1_000_000).unwrap();
        assert_eq!(space.len(), 9);
        for i in 0..space.len() {
            assert_eq!(space.index(&space.config(i)), i);
        }
        let space6 = StateSpace::new(6, a2, 1_000_000).unwrap();
        assert_eq!(space6.len(), 729);
    }

    #[test]
    fn guard_trips() {
        let a2 = Alphabet::new(2).unwrap();
        assert!(matches!(
            StateSpace::new(60, a2, 10_000_000),
            Err(Error::StateSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn site_zero_is_most_significant() {
        let a2 = Alphabet::new(2).unwrap();
        let space = StateSpace::new(2, a2, 100).unwrap();
        let c = Configuration::decode("B-A", a2, 2).unwrap();
        // digits: site0 = 1 ({B}=bits 2), site1 = 0 ({A}=bits 1)
        assert_eq!(space.index(&c), 3);
    }
}
