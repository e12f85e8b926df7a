//! Letters over `Z^m`, alphabets, finite words and the generators of the
//! infinite words the rest of the crate analyses.
//!
//! A [`WordSource`] is an immutable description of an infinite (or, for
//! explicit words, finite) word. [`WordSource::prefix`] materializes
//! `x_1 ... x_n` as a [`FiniteWord`]; repeated calls always agree on their
//! overlap.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Vec<i64>);

impl Letter {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidAlphabet(
                "a letter needs at least one coordinate".into(),
            ));
        }
        Ok(Letter(coords))
    }

    pub fn scalar(value: i64) -> Self {
        Letter(vec![value])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The single coordinate of a letter of `Z`.
    pub fn as_scalar(&self) -> Option<i64> {
        match self.0.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_scalar() {
            Some(v) => write!(f, "{v}"),
            None => {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Letter {
    fn from(value: i64) -> Self {
        Letter::scalar(value)
    }
}

// Letters of Z are written as bare integers, letters of Z^m (m > 1) as arrays.
impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_scalar() {
            Some(v) => serializer.serialize_i64(v),
            None => self.0.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(i64),
            Vector(Vec<i64>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Scalar(v) => Ok(Letter::scalar(v)),
            Repr::Vector(v) => Letter::new(v).map_err(serde::de::Error::custom),
        }
    }
}

/// A finite set of letters of a common dimension, kept in ascending
/// lexicographic order. The position of a letter in this order is its
/// symbol index and indexes Parikh vector coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Letter>,
    dim: usize,
}

impl Alphabet {
    /// Builds an alphabet from distinct letters; duplicates are rejected.
    pub fn new(mut letters: Vec<Letter>) -> Result<Self> {
        let Some(first) = letters.first() else {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        };
        let dim = first.dim();
        if let Some(bad) = letters.iter().find(|l| l.dim() != dim) {
            return Err(Error::InvalidAlphabet(format!(
                "letter {bad} has dimension {}, expected {dim}",
                bad.dim()
            )));
        }
        letters.sort();
        if let Some(w) = letters.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidAlphabet(format!("letter {} repeated", w[0])));
        }
        Ok(Alphabet { letters, dim })
    }

    /// The distinct letters of `letters`, in alphabet order.
    pub fn spanning<'a>(letters: impl IntoIterator<Item = &'a Letter>) -> Result<Self> {
        let mut distinct: Vec<Letter> = letters.into_iter().cloned().collect();
        distinct.sort();
        distinct.dedup();
        Alphabet::new(distinct)
    }

    pub fn from_scalars(values: &[i64]) -> Result<Self> {
        Alphabet::new(values.iter().copied().map(Letter::scalar).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, symbol: usize) -> &Letter {
        &self.letters[symbol]
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        self.letters.binary_search(letter).ok()
    }

    fn require(&self, letter: &Letter) -> Result<u32> {
        self.index_of(letter).map(|i| i as u32).ok_or_else(|| {
            Error::InvalidAlphabet(format!("letter {letter} is not in the alphabet"))
        })
    }
}

/// A finite word stored as symbol indices into its alphabet.
///
/// External positions are 1-based: `factor(a, len)` is `x_a ... x_{a+len-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteWord {
    alphabet: Alphabet,
    symbols: Vec<u32>,
}

impl FiniteWord {
    /// A word over the alphabet spanned by its own letters.
    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let alphabet = Alphabet::spanning(letters)?;
        FiniteWord::with_alphabet(alphabet, letters)
    }

    pub fn from_scalars(values: &[i64]) -> Result<Self> {
        let letters: Vec<Letter> = values.iter().copied().map(Letter::scalar).collect();
        FiniteWord::from_letters(&letters)
    }

    pub fn with_alphabet(alphabet: Alphabet, letters: &[Letter]) -> Result<Self> {
        let symbols = letters
            .iter()
            .map(|l| alphabet.require(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteWord { alphabet, symbols })
    }

    pub(crate) fn from_symbols(alphabet: Alphabet, symbols: Vec<u32>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.len()));
        FiniteWord { alphabet, symbols }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.alphabet.dim()
    }

    /// The letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> &Letter {
        assert!(
            i >= 1 && i <= self.len(),
            "position {i} outside 1..={}",
            self.len()
        );
        self.alphabet.letter(self.symbols[i - 1] as usize)
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = &Letter> + '_ {
        self.symbols
            .iter()
            .map(|&s| self.alphabet.letter(s as usize))
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        self.letters().cloned().collect()
    }

    /// Scalar values of a word over `Z`.
    pub fn to_scalars(&self) -> Option<Vec<i64>> {
        self.letters().map(Letter::as_scalar).collect()
    }

    /// `x_start ... x_{start+len-1}`, keeping the alphabet.
    pub fn factor(&self, start: usize, len: usize) -> Result<FiniteWord> {
        if start == 0 || len == 0 || start - 1 + len > self.len() {
            return Err(Error::FactorOutOfRange {
                start,
                len,
                available: self.len(),
            });
        }
        Ok(FiniteWord {
            alphabet: self.alphabet.clone(),
            symbols: self.symbols[start - 1..start - 1 + len].to_vec(),
        })
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Letter-to-word map used by morphisms and block codes.
pub type LetterMap = BTreeMap<Letter, Vec<Letter>>;

#[derive(Clone, Debug, PartialEq)]
pub enum SourceKind {
    Periodic(Vec<Letter>),
    Explicit(Vec<Letter>),
    /// Fixed point of a prolongable morphism starting with `seed`.
    Morphic {
        rules: LetterMap,
        seed: Letter,
    },
    /// Concatenated binary representations of 0, 1, 2, ...
    ChampernowneBinary,
    BlockCoded {
        base: Box<WordSource>,
        code: LetterMap,
    },
    /// Letter `a_j` of the base alphabet becomes `a_j e_j` in `Z^m`.
    Lifted {
        base: Box<WordSource>,
    },
}

/// Deterministic generator of the prefixes of a word.
#[derive(Clone, Debug, PartialEq)]
pub struct WordSource {
    kind: SourceKind,
    alphabet: Alphabet,
}

impl WordSource {
    pub fn periodic(pattern: Vec<Letter>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("periodic pattern is empty".into()));
        }
        let alphabet = Alphabet::spanning(&pattern)?;
        Ok(WordSource {
            kind: SourceKind::Periodic(pattern),
            alphabet,
        })
    }

    pub fn periodic_scalars(pattern: &[i64]) -> Result<Self> {
        WordSource::periodic(pattern.iter().copied().map(Letter::scalar).collect())
    }

    pub fn explicit(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("explicit word is empty".into()));
        }
        let alphabet = Alphabet::spanning(&letters)?;
        Ok(WordSource {
            kind: SourceKind::Explicit(letters),
            alphabet,
        })
    }

    pub fn explicit_scalars(letters: &[i64]) -> Result<Self> {
        WordSource::explicit(letters.iter().copied().map(Letter::scalar).collect())
    }

    /// The fixed point of `rules` beginning with `seed`. The image of `seed`
    /// must start with `seed` and have length at least two, and every letter
    /// of every image must itself have an image.
    pub fn morphic(rules: LetterMap, seed: Letter) -> Result<Self> {
        let alphabet = Alphabet::new(rules.keys().cloned().collect())?;
        for (from, image) in &rules {
            if image.is_empty() {
                return Err(Error::InvalidArgument(format!("image of {from} is empty")));
            }
            if let Some(bad) = image.iter().find(|l| alphabet.index_of(l).is_none()) {
                return Err(Error::InvalidArgument(format!(
                    "image of {from} contains {bad}, which has no image"
                )));
            }
        }
        let Some(seed_image) = rules.get(&seed) else {
            return Err(Error::NotProlongable {
                seed,
                reason: "seed has no image".into(),
            });
        };
        if seed_image.len() < 2 || seed_image[0] != seed {
            return Err(Error::NotProlongable {
                seed,
                reason: "seed image must start with the seed and have length >= 2".into(),
            });
        }
        Ok(WordSource {
            kind: SourceKind::Morphic { rules, seed },
            alphabet,
        })
    }

    pub fn morphic_scalars(rules: &[(i64, &[i64])], seed: i64) -> Result<Self> {
        WordSource::morphic(scalar_map(rules), Letter::scalar(seed))
    }

    pub fn champernowne() -> Self {
        WordSource {
            kind: SourceKind::ChampernowneBinary,
            alphabet: Alphabet::from_scalars(&[0, 1]).expect("two distinct letters"),
        }
    }

    /// Replaces each letter `a` of `base` by the word `code[a]`.
    pub fn block_code(base: WordSource, code: LetterMap) -> Result<Self> {
        for letter in base.alphabet.letters() {
            match code.get(letter) {
                None => return Err(Error::MissingCode(letter.clone())),
                Some(image) if image.is_empty() => {
                    return Err(Error::InvalidArgument(format!(
                        "code image of {letter} is empty"
                    )))
                }
                Some(_) => {}
            }
        }
        let alphabet =
            Alphabet::spanning(base.alphabet.letters().iter().flat_map(|l| code[l].iter()))?;
        Ok(WordSource {
            kind: SourceKind::BlockCoded {
                base: Box::new(base),
                code,
            },
            alphabet,
        })
    }

    /// Lifts a word over `S = {a_1 < ... < a_m}` in `Z` to `Z^m`, sending
    /// `a_j` to the vector with `a_j` in coordinate `j` and zeros elsewhere.
    pub fn lift(base: WordSource) -> Result<Self> {
        if base.alphabet.dim() != 1 {
            return Err(Error::Lift(format!(
                "base alphabet has dimension {}, expected 1",
                base.alphabet.dim()
            )));
        }
        if base.alphabet.letters().iter().any(Letter::is_zero) {
            return Err(Error::Lift(
                "0 in the alphabet would make the lifted letters dependent".into(),
            ));
        }
        let m = base.alphabet.len();
        let lifted = base
            .alphabet
            .letters()
            .iter()
            .enumerate()
            .map(|(j, a)| lift_letter(a, j, m))
            .collect();
        let alphabet = Alphabet::new(lifted)?;
        Ok(WordSource {
            kind: SourceKind::Lifted {
                base: Box::new(base),
            },
            alphabet,
        })
    }

    /// Dekking's fixed point of `0 -> 011`, `1 -> 0001`.
    pub fn dekking() -> Self {
        WordSource::morphic_scalars(&[(0, &[0, 1, 1]), (1, &[0, 0, 0, 1])], 0)
            .expect("Dekking morphism is prolongable")
    }

    /// The Dekking word with `1 -> 12` and `0 -> 03` applied.
    pub fn dekking_coded() -> Self {
        WordSource::block_code(
            WordSource::dekking(),
            scalar_map(&[(0, &[0, 3]), (1, &[1, 2])]),
        )
        .expect("code covers {0, 1}")
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.dim()
    }

    /// Number of letters available, `None` for infinite words.
    pub fn available(&self) -> Option<usize> {
        match &self.kind {
            SourceKind::Explicit(letters) => Some(letters.len()),
            SourceKind::Lifted { base } => base.available(),
            SourceKind::BlockCoded { base, code } => base.available().map(|n| {
                let word = base.prefix(n).expect("available prefix");
                word.letters().map(|l| code[l].len()).sum()
            }),
            _ => None,
        }
    }

    /// `x_1 ... x_n`.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "prefix length must be positive".into(),
            ));
        }
        let symbols = self.symbols(n)?;
        Ok(FiniteWord::from_symbols(self.alphabet.clone(), symbols))
    }

    /// The prefix of length `min(n, available)`.
    pub fn prefix_up_to(&self, n: usize) -> Result<FiniteWord> {
        self.prefix(self.available().map_or(n, |a| a.min(n)))
    }

    fn symbols(&self, n: usize) -> Result<Vec<u32>> {
        let alphabet = &self.alphabet;
        match &self.kind {
            SourceKind::Periodic(pattern) => {
                let pattern: Vec<u32> = pattern
                    .iter()
                    .map(|l| alphabet.require(l))
                    .collect::<Result<_>>()?;
                Ok(pattern.iter().copied().cycle().take(n).collect())
            }
            SourceKind::Explicit(letters) => {
                if letters.len() < n {
                    return Err(Error::ExplicitTooShort {
                        requested: n,
                        available: letters.len(),
                    });
                }
                letters[..n].iter().map(|l| alphabet.require(l)).collect()
            }
            SourceKind::Morphic { rules, seed } => {
                let images: Vec<Vec<u32>> = alphabet
                    .letters()
                    .iter()
                    .map(|l| rules[l].iter().map(|x| alphabet.require(x)).collect())
                    .collect::<Result<_>>()?;
                let seed = alphabet.require(seed)? as usize;
                // u = images(u_1) images(u_2) ...; u_1 = seed and |images(seed)| >= 2,
                // so the letter being expanded is always already written.
                let mut out = images[seed].clone();
                let mut read = 1;
                while out.len() < n {
                    let next = out[read] as usize;
                    out.extend_from_slice(&images[next]);
                    read += 1;
                }
                out.truncate(n);
                Ok(out)
            }
            SourceKind::ChampernowneBinary => {
                let mut out = Vec::with_capacity(n + 64);
                let mut i: u64 = 0;
                while out.len() < n {
                    let bits = 64 - i.leading_zeros().min(63);
                    for b in (0..bits).rev() {
                        out.push(((i >> b) & 1) as u32);
                    }
                    i += 1;
                }
                out.truncate(n);
                Ok(out)
            }
            SourceKind::BlockCoded { base, code } => {
                // Every image is nonempty, so n base letters always suffice.
                let base_len = base.available().map_or(n, |a| a.min(n));
                let base_word = base.prefix(base_len)?;
                let table: Vec<Vec<u32>> = base
                    .alphabet
                    .letters()
                    .iter()
                    .map(|l| code[l].iter().map(|x| alphabet.require(x)).collect())
                    .collect::<Result<_>>()?;
                let mut out = Vec::with_capacity(n + 8);
                for &s in base_word.symbols() {
                    if out.len() >= n {
                        break;
                    }
                    out.extend_from_slice(&table[s as usize]);
                }
                if out.len() < n {
                    return Err(Error::ExplicitTooShort {
                        requested: n,
                        available: out.len(),
                    });
                }
                out.truncate(n);
                Ok(out)
            }
            SourceKind::Lifted { base } => {
                let m = base.alphabet.len();
                let table: Vec<u32> = base
                    .alphabet
                    .letters()
                    .iter()
                    .enumerate()
                    .map(|(j, a)| alphabet.require(&lift_letter(a, j, m)))
                    .collect::<Result<_>>()?;
                Ok(base
                    .symbols(n)?
                    .into_iter()
                    .map(|s| table[s as usize])
                    .collect())
            }
        }
    }
}

fn lift_letter(a: &Letter, j: usize, m: usize) -> Letter {
    let mut coords = vec![0; m];
    coords[j] = a.coords()[0];
    Letter(coords)
}

/// Builds a [`LetterMap`] over `Z` from `(letter, image)` pairs.
pub fn scalar_map(pairs: &[(i64, &[i64])]) -> LetterMap {
    pairs
        .iter()
        .map(|(from, to)| {
            (
                Letter::scalar(*from),
                to.iter().copied().map(Letter::scalar).collect(),
            )
        })
        .collect()
}
