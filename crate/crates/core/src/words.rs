//! Signed words over named generators: parsing, free reduction, evaluation
//! to total or partial maps, and depth-first enumeration of reduced words.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pl::{PLMap, PartialPLMap, PlElement, WordOrder, WORD_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub inverted: bool,
}

impl Letter {
    pub fn new(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverted: false,
        }
    }

    pub fn inv(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverted: true,
        }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            name: self.name.clone(),
            inverted: !self.inverted,
        }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.name == other.name && self.inverted != other.inverted
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// A word `l_1 l_2 ... l_k`, each letter a generator or its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenWord {
    letters: Vec<Letter>,
}

impl GenWord {
    pub fn empty() -> Self {
        GenWord::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        GenWord { letters }
    }

    /// Whitespace-separated letters, each optionally suffixed by `^-1` or `^1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split_whitespace() {
            let pos = offset + text[offset..].find(token).expect("token comes from text");
            offset = pos + token.len();
            let (name, inverted) = match token.rsplit_once('^') {
                None => (token, false),
                Some((name, "-1")) => (name, true),
                Some((name, "1" | "+1")) => (name, false),
                Some((name, _)) => {
                    return Err(Error::parse(
                        pos + name.len() + 1,
                        "exponent must be 1 or -1",
                    ))
                }
            };
            if name.is_empty() {
                return Err(Error::parse(pos, "missing generator name"));
            }
            letters.push(Letter {
                name: name.to_string(),
                inverted,
            });
        }
        Ok(GenWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn inverse(&self) -> GenWord {
        GenWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Written concatenation `self other`.
    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GenWord { letters }
    }

    /// The word acting as `self` followed by `next`.
    pub fn then(&self, next: &GenWord) -> GenWord {
        match WORD_ORDER {
            WordOrder::RightmostFirst => next.concat(self),
            WordOrder::LeftmostFirst => self.concat(next),
        }
    }

    /// Letters in the order they act on a point.
    pub fn action_order(&self) -> Box<dyn Iterator<Item = &Letter> + '_> {
        match WORD_ORDER {
            WordOrder::RightmostFirst => Box::new(self.letters.iter().rev()),
            WordOrder::LeftmostFirst => Box::new(self.letters.iter()),
        }
    }

    /// `u^-1 v^-1 u v`.
    pub fn commutator(u: &GenWord, v: &GenWord) -> GenWord {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Free reduction: cancels adjacent inverse pairs until none remain.
    pub fn reduce(&self) -> GenWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for letter in &self.letters {
            if out.last().is_some_and(|last| last.cancels(letter)) {
                out.pop();
            } else {
                out.push(letter.clone());
            }
        }
        GenWord { letters: out }
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromStr for GenWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GenWord::parse(s)
    }
}

impl Serialize for GenWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.letters.iter().map(|l| (&l.name, l.exponent())))
    }
}

impl<'de> Deserialize<'de> for GenWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(String, i8)> = Vec::deserialize(deserializer)?;
        let letters = raw
            .into_iter()
            .map(|(name, exp)| match exp {
                1 => Ok(Letter::new(name)),
                -1 => Ok(Letter::inv(name)),
                other => Err(D::Error::custom(format!("exponent {other} is not 1 or -1"))),
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(GenWord { letters })
    }
}

/// Named generators with cached inverses, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet<M> {
    names: Vec<String>,
    maps: Vec<M>,
    inverses: Vec<M>,
}

impl<M: PlElement> Alphabet<M> {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, M)>) -> Result<Self> {
        let mut alphabet = Alphabet {
            names: Vec::new(),
            maps: Vec::new(),
            inverses: Vec::new(),
        };
        for (name, map) in entries {
            let name = name.into();
            if alphabet.names.contains(&name) {
                return Err(Error::InvalidParameters(format!(
                    "duplicate letter `{name}`"
                )));
            }
            alphabet.inverses.push(map.inverse());
            alphabet.maps.push(map);
            alphabet.names.push(name);
        }
        Ok(alphabet)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn map(&self, index: usize) -> &M {
        &self.maps[index]
    }

    pub fn maps(&self) -> &[M] {
        &self.maps
    }

    pub fn letter_map(&self, letter: IndexLetter) -> &M {
        if letter.inverted {
            &self.inverses[letter.generator]
        } else {
            &self.maps[letter.generator]
        }
    }

    pub fn get(&self, letter: &Letter) -> Result<&M> {
        let index = self
            .index_of(&letter.name)
            .ok_or_else(|| Error::UnboundLetter(letter.name.clone()))?;
        Ok(self.letter_map(IndexLetter {
            generator: index,
            inverted: letter.inverted,
        }))
    }

    pub fn word_from_indices(&self, letters: &[IndexLetter]) -> GenWord {
        GenWord {
            letters: letters
                .iter()
                .map(|l| Letter {
                    name: self.names[l.generator].clone(),
                    inverted: l.inverted,
                })
                .collect(),
        }
    }
}

/// Appends the action of `next` to an accumulated word value.
fn extend_value<M: PlElement>(acc: &M, next: &M) -> M {
    match WORD_ORDER {
        WordOrder::RightmostFirst => acc.compose(next),
        WordOrder::LeftmostFirst => next.compose(acc),
    }
}

pub fn evaluate_in<M: PlElement>(w: &GenWord, alphabet: &Alphabet<M>) -> Result<M> {
    let mut acc = M::identity();
    for letter in w.letters() {
        acc = extend_value(&acc, alphabet.get(letter)?);
    }
    Ok(acc)
}

/// The map a word denotes under [`WORD_ORDER`].
pub fn evaluate(w: &GenWord, alphabet: &Alphabet<PLMap>) -> Result<PLMap> {
    evaluate_in(w, alphabet)
}

/// Like [`evaluate`] over partial maps; the domain may shrink to a point or vanish.
pub fn evaluate_partial(w: &GenWord, alphabet: &Alphabet<PartialPLMap>) -> Result<PartialPLMap> {
    evaluate_in(w, alphabet)
}

/// A letter addressed by generator index, for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexLetter {
    pub generator: usize,
    pub inverted: bool,
}

impl IndexLetter {
    /// Position in the enumeration order `g0, g0^-1, g1, g1^-1, ...`.
    pub fn code(self) -> usize {
        2 * self.generator + usize::from(self.inverted)
    }

    pub fn from_code(code: usize) -> Self {
        IndexLetter {
            generator: code / 2,
            inverted: code % 2 == 1,
        }
    }

    pub fn cancels(self, other: IndexLetter) -> bool {
        self.generator == other.generator && self.inverted != other.inverted
    }
}

/// Number of reduced words of length exactly `len` over `s` generators.
pub fn count_reduced(s: usize, len: usize) -> u128 {
    match len {
        0 => 1,
        _ => 2 * s as u128 * (2 * s as u128 - 1).pow(len as u32 - 1),
    }
}

/// Number of reduced words of length `1..=max_len` whose first letter is fixed.
pub fn count_reduced_with_prefix(s: usize, prefix_len: usize, max_len: usize) -> u128 {
    (0..=max_len.saturating_sub(prefix_len))
        .map(|extra| (2 * s as u128 - 1).pow(extra as u32))
        .sum()
}

/// Every reduced word of length `1..=max_len`, depth-first in lexicographic
/// order of letter codes; a word is followed by its extensions.
#[derive(Debug, Clone)]
pub struct ReducedWords {
    codes: usize,
    max_len: usize,
    floor: usize,
    stack: Vec<IndexLetter>,
    started: bool,
    done: bool,
}

pub fn enumerate_reduced(alphabet_size: usize, max_len: usize) -> ReducedWords {
    ReducedWords {
        codes: 2 * alphabet_size,
        max_len,
        floor: 0,
        stack: Vec::with_capacity(max_len),
        started: false,
        done: alphabet_size == 0 || max_len == 0,
    }
}

/// The words of [`enumerate_reduced`] that begin with `first`; partitions the stream.
pub fn enumerate_reduced_from(
    alphabet_size: usize,
    max_len: usize,
    first: IndexLetter,
) -> ReducedWords {
    ReducedWords {
        codes: 2 * alphabet_size,
        max_len,
        floor: 1,
        stack: vec![first],
        started: false,
        done: max_len == 0 || first.generator >= alphabet_size,
    }
}

impl ReducedWords {
    fn next_code_after(&self, code: usize) -> Option<usize> {
        let top = self.stack.last().copied();
        (code..self.codes).find(|&c| !top.is_some_and(|t| t.cancels(IndexLetter::from_code(c))))
    }
}

impl Iterator for ReducedWords {
    type Item = Vec<IndexLetter>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.stack.is_empty() {
                self.stack.push(IndexLetter::from_code(0));
            }
            return Some(self.stack.clone());
        }
        if self.stack.len() < self.max_len {
            let code = self.next_code_after(0).expect("2s-1 >= 1 continuations");
            self.stack.push(IndexLetter::from_code(code));
            return Some(self.stack.clone());
        }
        loop {
            if self.stack.len() <= self.floor {
                self.done = true;
                return None;
            }
            let last = self.stack.pop().expect("nonempty");
            if let Some(code) = self.next_code_after(last.code() + 1) {
                self.stack.push(IndexLetter::from_code(code));
                return Some(self.stack.clone());
            }
        }
    }
}

/// Depth-first walk over reduced words with prefix-shared evaluation.
///
/// `visit` sees each word of length `1..=max_len` (beginning with `first`
/// when given) together with its value, in the order of
/// [`enumerate_reduced`]. Returning `false` skips the word's extensions.
pub fn sweep_reduced<M, F>(
    alphabet: &Alphabet<M>,
    max_len: usize,
    first: Option<IndexLetter>,
    mut visit: F,
) where
    M: PlElement,
    F: FnMut(&[IndexLetter], &M) -> bool,
{
    fn walk<M: PlElement, F: FnMut(&[IndexLetter], &M) -> bool>(
        alphabet: &Alphabet<M>,
        max_len: usize,
        word: &mut Vec<IndexLetter>,
        value: &M,
        visit: &mut F,
    ) {
        for code in 0..2 * alphabet.len() {
            let letter = IndexLetter::from_code(code);
            if word.last().is_some_and(|l| l.cancels(letter)) {
                continue;
            }
            let next = extend_value(value, alphabet.letter_map(letter));
            word.push(letter);
            if visit(word, &next) && word.len() < max_len {
                walk(alphabet, max_len, word, &next, visit);
            }
            word.pop();
        }
    }

    if max_len == 0 {
        return;
    }
    let mut word = Vec::with_capacity(max_len);
    match first {
        None => walk(alphabet, max_len, &mut word, &M::identity(), &mut visit),
        Some(letter) => {
            let value = extend_value(&M::identity(), alphabet.letter_map(letter));
            word.push(letter);
            if visit(&word, &value) && max_len > 1 {
                walk(alphabet, max_len, &mut word, &value, &mut visit);
            }
        }
    }
}
