//! The minimal group interface the oracle and rewriting engine need, and
//! generating sets that pair an alphabet with element images.

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::WordError;
use crate::words::{InvolutiveAlphabet, Letter, Word};

/// A group with decidable equality through canonical element values.
pub trait Group {
    type Element: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;
    fn invert(&self, x: &Self::Element) -> Self::Element;

    fn is_identity(&self, x: &Self::Element) -> bool {
        *x == self.identity()
    }
}

/// An inverse-closed generating set: each letter carries its group element.
#[derive(Clone, Debug)]
pub struct GeneratingSet<E> {
    alphabet: InvolutiveAlphabet,
    images: Vec<E>,
}

impl<E: Clone> GeneratingSet<E> {
    pub fn new(alphabet: InvolutiveAlphabet, images: Vec<E>) -> Self {
        assert_eq!(alphabet.len(), images.len(), "one image per letter");
        GeneratingSet { alphabet, images }
    }

    pub fn alphabet(&self) -> &InvolutiveAlphabet {
        &self.alphabet
    }

    pub fn image(&self, x: Letter) -> &E {
        &self.images[x.index()]
    }

    /// Keep only the named letters (must stay inverse-closed).
    pub fn restrict(&self, names: &[&str]) -> Result<GeneratingSet<E>, WordError> {
        let keep = names
            .iter()
            .map(|n| {
                self.alphabet
                    .lookup(n)
                    .ok_or_else(|| WordError::UnknownLetter(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let (alphabet, kept) = self.alphabet.restrict(&keep)?;
        let images = kept.iter().map(|&x| self.images[x.index()].clone()).collect();
        Ok(GeneratingSet { alphabet, images })
    }

    /// Product of the letters of `w`, left to right.
    pub fn evaluate<G: Group<Element = E>>(&self, group: &G, w: &Word) -> E {
        w.letters()
            .iter()
            .fold(group.identity(), |acc, &x| group.multiply(&acc, self.image(x)))
    }
}
