//! Network configurations: one word list per site, plus the text codec used
//! by the CLI and the JSON reports.
//!
//! The codec writes per-site labels joined by `-`, each label being the
//! sorted concatenation of the present words, e.g. `A-AB-B`.

use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word, WordList};

/// The network state: a word list assigned to every site.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    labels: Vec<WordList>,
}

impl Configuration {
    pub fn new(labels: Vec<WordList>) -> Self {
        debug_assert!(!labels.is_empty());
        Configuration { labels }
    }

    /// Every site holding the same label.
    pub fn uniform(label: WordList, n: usize) -> Self {
        Configuration { labels: alloc::vec![label; n] }
    }

    /// Each site drawn uniformly from the nonempty word lists.
    pub fn random(alphabet: Alphabet, n: usize, rng: &mut impl Rng) -> Self {
        let m = alphabet.num_word_lists() as u16;
        let labels = (0..n)
            .map(|_| WordList::from_bits(rng.random_range(1..=m)).expect("nonzero bits"))
            .collect();
        Configuration { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, site: usize) -> WordList {
        self.labels[site]
    }

    pub fn set_label(&mut self, site: usize, label: WordList) {
        self.labels[site] = label;
    }

    pub fn labels(&self) -> &[WordList] {
        &self.labels
    }

    /// Union of all site word lists.
    pub fn support(&self) -> WordList {
        let bits = self.labels.iter().fold(0u16, |acc, l| acc | l.bits());
        WordList::from_bits(bits).expect("configurations are never empty")
    }

    /// `Some(w)` iff this is the single-name state for `w`.
    pub fn single_name(&self) -> Option<Word> {
        self.support().as_singleton().filter(|w| {
            self.labels.iter().all(|l| *l == WordList::singleton(*w))
        })
    }

    /// Number of sites whose word list is exactly `{w}`.
    pub fn strict_count(&self, w: Word) -> usize {
        let target = WordList::singleton(w);
        self.labels.iter().filter(|l| **l == target).count()
    }

    pub fn encode(&self, alphabet: Alphabet) -> String {
        let mut out = String::new();
        for (i, label) in self.labels.iter().enumerate() {
            if i > 0 {
                out.push('-');
            }
            for w in alphabet.words() {
                if label.contains(w) {
                    out.push(w.letter());
                }
            }
        }
        out
    }

    pub fn decode(text: &str, alphabet: Alphabet, expected_sites: usize) -> Result<Self> {
        let mut labels = Vec::new();
        for part in text.split('-') {
            if part.is_empty() {
                return Err(Error::EmptyLabel);
            }
            let mut bits = 0u16;
            for c in part.chars() {
                bits |= 1 << alphabet.word_from_letter(c)?.index();
            }
            labels.push(WordList::from_bits(bits)?);
        }
        if labels.len() != expected_sites {
            return Err(Error::WrongSiteCount { expected: expected_sites, got: labels.len() });
        }
        Ok(Configuration { labels })
    }
}
