//! The word set, word lists (nonempty subsets of it) and the listener rule.
//!
//! Words are named `A`, `B`, `C`, ... in order. A word list is stored as a
//! bit set over the alphabet, which bounds the alphabet at 16 words; that is
//! far beyond anything the dynamics can exhaustively handle anyway.

use crate::error::{Error, Result};

pub const MAX_WORDS: usize = 16;

/// A single word, identified by its index in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(u8);

impl Word {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> char {
        (b'A' + self.0) as char
    }

    fn bit(self) -> u16 {
        1 << self.0
    }
}

/// The fixed set of allowed words. All word lists of a run reference one
/// alphabet; it is never mutated after construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    k: u8,
}

impl Alphabet {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=MAX_WORDS).contains(&k) {
            return Err(Error::BadAlphabetSize(k));
        }
        Ok(Alphabet { k: k as u8 })
    }

    pub fn len(self) -> usize {
        self.k as usize
    }

    pub fn word(self, index: usize) -> Result<Word> {
        if index < self.len() {
            Ok(Word(index as u8))
        } else {
            Err(Error::WordOutOfRange(index))
        }
    }

    pub fn words(self) -> impl Iterator<Item = Word> {
        (0..self.k).map(Word)
    }

    pub fn word_from_letter(self, letter: char) -> Result<Word> {
        let off = (letter as i64) - ('A' as i64);
        if (0..self.len() as i64).contains(&off) {
            Ok(Word(off as u8))
        } else {
            Err(Error::UnknownLetter(letter))
        }
    }

    /// The full word list `Name`, used as the reference "0 local state".
    pub fn full_list(self) -> WordList {
        WordList(((1u32 << self.k) - 1) as u16)
    }

    /// All nonempty word lists, in ascending bit-set order.
    pub fn word_lists(self) -> impl Iterator<Item = WordList> {
        (1..(1u32 << self.k) as u16).map(WordList)
    }

    /// Number of nonempty word lists, i.e. local states per site.
    pub fn num_word_lists(self) -> usize {
        (1usize << self.k) - 1
    }
}

/// A nonempty subset of the alphabet: the local state of one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordList(u16);

impl WordList {
    pub fn singleton(w: Word) -> Self {
        WordList(w.bit())
    }

    /// Build from a raw bit set; rejects the empty set.
    pub fn from_bits(bits: u16) -> Result<Self> {
        if bits == 0 {
            Err(Error::EmptyWordList)
        } else {
            Ok(WordList(bits))
        }
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, w: Word) -> bool {
        self.0 & w.bit() != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn words(self) -> impl Iterator<Item = Word> {
        let bits = self.0;
        (0..MAX_WORDS as u8).filter(move |i| bits & (1 << i) != 0).map(Word)
    }

    /// If the list holds exactly one word, return it.
    pub fn as_singleton(self) -> Option<Word> {
        if self.len() == 1 {
            Some(Word(self.0.trailing_zeros() as u8))
        } else {
            None
        }
    }

    /// The listener rule: receiving `w` collapses the list to `{w}` when the
    /// word is already present, otherwise adds it.
    pub fn receive(self, w: Word) -> WordList {
        if self.contains(w) {
            WordList(w.bit())
        } else {
            WordList(self.0 | w.bit())
        }
    }
}
