//! Alphabets closed under formal inversion, and words over them.
//!
//! Letters are opaque identifiers. A [`Word`] stores letter indices into an
//! [`InvolutiveAlphabet`]; the alphabet owns the names and the inverse
//! pairing. Index order is declaration order, which is the order ShortLex
//! uses.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::error::WordError;

/// Index of a letter inside its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite sequence of letters. `Ord` is ShortLex with respect to letter
/// index (shorter first, then lexicographic).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Contiguous factor `[start, start + len)`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Suffix of length `n`, or the whole word when it is shorter.
    pub fn suffix(&self, n: usize) -> Word {
        let n = n.min(self.len());
        Word(self.0[self.len() - n..].to_vec())
    }

    /// Prefix of length `n`, or the whole word when it is shorter.
    pub fn prefix(&self, n: usize) -> Word {
        let n = n.min(self.len());
        Word(self.0[..n].to_vec())
    }

    /// All contiguous factors of length `1..=max_len`, grouped by length and
    /// ordered by start position within each length.
    pub fn subwords(&self, max_len: usize) -> Vec<Word> {
        let n = self.len();
        let mut out = Vec::new();
        for len in 1..=max_len.min(n) {
            for start in 0..=n - len {
                out.push(self.factor(start, len));
            }
        }
        out
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Letters with a total involutive pairing `inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveAlphabet {
    names: Vec<String>,
    inverses: Vec<Letter>,
    by_name: HashMap<String, Letter>,
}

impl InvolutiveAlphabet {
    /// Build from `(name, inverse name)` pairs in declaration order.
    pub fn new<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self, WordError> {
        let mut by_name = HashMap::new();
        let mut names = Vec::with_capacity(pairs.len());
        for (i, (name, _)) in pairs.iter().enumerate() {
            let name = name.as_ref();
            validate_name(name)?;
            if by_name.insert(name.to_string(), Letter(i as u32)).is_some() {
                return Err(WordError::DuplicateLetter(name.to_string()));
            }
            names.push(name.to_string());
        }
        let mut inverses = Vec::with_capacity(pairs.len());
        for (_, inv) in pairs {
            let inv = inv.as_ref();
            let l = *by_name
                .get(inv)
                .ok_or_else(|| WordError::UnknownLetter(inv.to_string()))?;
            inverses.push(l);
        }
        let alphabet = InvolutiveAlphabet {
            names,
            inverses,
            by_name,
        };
        for (i, &j) in alphabet.inverses.iter().enumerate() {
            if alphabet.inverses[j.index()].index() != i {
                return Err(WordError::NotInvolution(alphabet.names[i].clone()));
            }
        }
        Ok(alphabet)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u32).map(Letter)
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.by_name.get(name).copied()
    }

    pub fn inv(&self, x: Letter) -> Letter {
        self.inverses[x.index()]
    }

    pub fn contains(&self, x: Letter) -> bool {
        x.index() < self.names.len()
    }

    /// Reverse `w` and invert each letter.
    pub fn formal_inverse(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&x| self.inv(x)).collect())
    }

    pub fn shortlex_compare(&self, u: &Word, v: &Word) -> Result<Ordering, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.cmp(v))
    }

    /// Ensure every letter of `w` belongs to this alphabet.
    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.0.iter().find(|x| !self.contains(**x)) {
            Some(x) => Err(WordError::ForeignLetter(x.0)),
            None => Ok(()),
        }
    }

    /// Parse whitespace-separated letter names; the empty string is ε.
    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        text.split_whitespace()
            .map(|tok| {
                self.lookup(tok)
                    .ok_or_else(|| WordError::UnknownLetter(tok.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word: w }
    }

    /// Restrict to the letters named in `keep`, preserving declaration order.
    /// Fails unless the kept set is closed under `inv`.
    pub fn restrict(&self, keep: &[Letter]) -> Result<(InvolutiveAlphabet, Vec<Letter>), WordError> {
        let mut kept: Vec<Letter> = keep.to_vec();
        kept.sort();
        kept.dedup();
        let pairs: Vec<(String, String)> = kept
            .iter()
            .map(|&x| (self.name(x).to_string(), self.name(self.inv(x)).to_string()))
            .collect();
        let sub = InvolutiveAlphabet::new(&pairs)?;
        Ok((sub, kept))
    }

    /// A uniformly random word of length exactly `len`.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        Word(
            (0..len)
                .map(|_| Letter(rng.gen_range(0..self.names.len() as u32)))
                .collect(),
        )
    }
}

fn validate_name(name: &str) -> Result<(), WordError> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        Err(WordError::BadLetterName(name.to_string()))
    } else {
        Ok(())
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a InvolutiveAlphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &x) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(x))?;
        }
        Ok(())
    }
}
