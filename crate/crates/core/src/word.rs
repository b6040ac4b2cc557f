//! Letters, words and alphabets.
//!
//! A [`Letter`] is an index into an [`Alphabet`]; the alphabet owns the
//! printable token of every letter. Tokens may be longer than one character,
//! which is how simplification introduces fresh letters such as `x1`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> Word {
        let mut out = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            out.extend_from_slice(&self.0);
        }
        Word(out)
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(other);
        Word(out)
    }

    pub fn is_factor_of(&self, haystack: &[Letter]) -> bool {
        self.0.is_empty() || haystack.windows(self.0.len()).any(|w| w == &self.0[..])
    }
}

impl Deref for Word {
    type Target = Vec<Letter>;
    fn deref(&self) -> &Vec<Letter> {
        &self.0
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Smallest p ≥ 1 such that `w[i] = w[i + p]` wherever both sides exist
/// (failure-function computation). Returns 0 for the empty word.
pub fn minimal_period<T: PartialEq>(w: &[T]) -> usize {
    if w.is_empty() {
        return 0;
    }
    let mut border = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    w.len() - border[w.len() - 1]
}

/// Ordered set of letter tokens. Order is significant: it is the letter order
/// used for enumeration, tie-breaking and serialization.
#[derive(Debug, Clone)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Alphabet {}

pub(crate) fn valid_token(tok: &str) -> bool {
    !tok.is_empty()
        && !tok.chars().any(char::is_whitespace)
        && !tok.contains("->")
        && !tok.contains(':')
        && !tok.starts_with('#')
}

impl Alphabet {
    /// Builds an alphabet; tokens must be distinct and well formed.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out = Alphabet {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.into();
            if !valid_token(&name) {
                return Err(Error::InvalidWord(name));
            }
            if out.index.contains_key(&name) {
                return Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("duplicate letter `{name}`"),
                });
            }
            out.index.insert(name.clone(), Letter(out.names.len() as u32));
            out.names.push(name);
        }
        Ok(out)
    }

    /// Alphabet `x1, x2, …, xn`.
    pub fn fresh(n: usize) -> Self {
        Alphabet::new((1..=n).map(|i| format!("x{i}"))).expect("fresh names are valid")
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

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a word: letters are concatenated when every token is a single
    /// character, otherwise separated by spaces.
    pub fn render(&self, w: &[Letter]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        w.iter()
            .map(|&a| self.name(a))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word written as whitespace-separated tokens. A chunk that is
    /// not itself a token is split into characters when every token is a
    /// single character (so `abca` reads as four letters).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            self.push_chunk(chunk, &mut out)
                .map_err(|_| Error::InvalidWord(text.to_string()))?;
        }
        Ok(Word(out))
    }

    /// Splits one chunk into letters; on failure returns the offending token
    /// and its character offset within the chunk.
    pub(crate) fn push_chunk(
        &self,
        chunk: &str,
        out: &mut Vec<Letter>,
    ) -> std::result::Result<(), (String, usize)> {
        if let Some(a) = self.get(chunk) {
            out.push(a);
            return Ok(());
        }
        if !self.single_char() {
            return Err((chunk.to_string(), 0));
        }
        for (offset, ch) in chunk.chars().enumerate() {
            let mut buf = [0u8; 4];
            match self.get(ch.encode_utf8(&mut buf)) {
                Some(a) => out.push(a),
                None => return Err((ch.to_string(), offset)),
            }
        }
        Ok(())
    }
}

/// Display adaptor pairing a word with its alphabet.
pub struct Rendered<'a>(pub &'a Alphabet, pub &'a [Letter]);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}
