//! Additive morphisms `mu: S+ -> Z^t` (sums, Parikh vectors, arbitrary
//! letter images) and prefix tables giving O(1) factor values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, FiniteWord, Letter};

/// Prefix values are kept within this magnitude so that every difference of
/// two of them (every factor value), and every difference of two factor
/// values, is an exact `i64`.
const PREFIX_LIMIT: i64 = 1 << 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MuKind {
    /// `mu(B) = sum of B`.
    Additive,
    /// `mu(B) = Parikh vector of B`.
    Parikh,
    Custom,
}

/// A 1-based factor reference `x_start ... x_{start+len-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub start: usize,
    pub len: usize,
}

impl Factor {
    pub fn new(start: usize, len: usize) -> Self {
        Factor { start, len }
    }

    /// 1-based index of the last letter.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }
}

/// A morphism from the free semigroup on an alphabet into `Z^t`, given by
/// its letter images and extended additively.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismMu {
    kind: MuKind,
    target_dim: usize,
    images: BTreeMap<Letter, Vec<i64>>,
}

impl MorphismMu {
    /// Every letter is its own image.
    pub fn additive(alphabet: &Alphabet) -> Self {
        MorphismMu {
            kind: MuKind::Additive,
            target_dim: alphabet.dim(),
            images: alphabet
                .letters()
                .iter()
                .map(|l| (l.clone(), l.coords().to_vec()))
                .collect(),
        }
    }

    /// The i-th letter in alphabet order maps to the i-th unit vector.
    pub fn parikh(alphabet: &Alphabet) -> Self {
        let t = alphabet.len();
        MorphismMu {
            kind: MuKind::Parikh,
            target_dim: t,
            images: alphabet
                .letters()
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let mut e = vec![0; t];
                    e[i] = 1;
                    (l.clone(), e)
                })
                .collect(),
        }
    }

    pub fn custom(images: BTreeMap<Letter, Vec<i64>>) -> Result<Self> {
        let Some(first) = images.values().next() else {
            return Err(Error::InvalidArgument(
                "morphism has no letter images".into(),
            ));
        };
        let target_dim = first.len();
        if target_dim == 0 {
            return Err(Error::InvalidArgument(
                "morphism images must be nonempty vectors".into(),
            ));
        }
        if let Some(v) = images.values().find(|v| v.len() != target_dim) {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: v.len(),
            });
        }
        Ok(MorphismMu {
            kind: MuKind::Custom,
            target_dim,
            images,
        })
    }

    /// Sends every letter of `alphabet` to the zero vector of `Z^t`.
    pub fn zero(alphabet: &Alphabet, t: usize) -> Result<Self> {
        MorphismMu::custom(
            alphabet
                .letters()
                .iter()
                .map(|l| (l.clone(), vec![0; t]))
                .collect(),
        )
    }

    pub fn kind(&self) -> MuKind {
        self.kind
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn images(&self) -> &BTreeMap<Letter, Vec<i64>> {
        &self.images
    }

    pub fn image(&self, letter: &Letter) -> Option<&[i64]> {
        self.images.get(letter).map(Vec::as_slice)
    }

    /// Whether every letter of `alphabet` has an image.
    pub fn covers(&self, alphabet: &Alphabet) -> Result<()> {
        match alphabet
            .letters()
            .iter()
            .find(|l| !self.images.contains_key(*l))
        {
            Some(l) => Err(Error::MissingImage(l.clone())),
            None => Ok(()),
        }
    }

    /// `mu(B)` by direct summation of letter images.
    pub fn value_of<'a>(&self, letters: impl IntoIterator<Item = &'a Letter>) -> Result<Vec<i64>> {
        let mut acc = vec![0i64; self.target_dim];
        for l in letters {
            let img = self
                .image(l)
                .ok_or_else(|| Error::MissingImage(l.clone()))?;
            add_checked(&mut acc, img)?;
        }
        Ok(acc)
    }

    /// Images indexed by the symbols of `word`'s alphabet. Letters without an
    /// image are an error only if they occur in `word`.
    pub fn symbol_images(&self, word: &FiniteWord) -> Result<SymbolImages> {
        let alphabet = word.alphabet();
        let t = self.target_dim;
        let mut flat = vec![0; alphabet.len() * t];
        let mut missing = vec![false; alphabet.len()];
        for (i, l) in alphabet.letters().iter().enumerate() {
            match self.image(l) {
                Some(img) => flat[i * t..(i + 1) * t].copy_from_slice(img),
                None => missing[i] = true,
            }
        }
        let mut occurs = vec![false; alphabet.len()];
        for &s in word.symbols() {
            occurs[s as usize] = true;
        }
        if let Some(i) = (0..alphabet.len()).find(|&i| missing[i] && occurs[i]) {
            return Err(Error::MissingImage(alphabet.letter(i).clone()));
        }
        Ok(SymbolImages {
            dim: t,
            flat,
            occurs,
        })
    }
}

/// Letter images laid out by symbol index.
#[derive(Clone, Debug)]
pub struct SymbolImages {
    dim: usize,
    flat: Vec<i64>,
    occurs: Vec<bool>,
}

impl SymbolImages {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, symbol: u32) -> &[i64] {
        let s = symbol as usize;
        &self.flat[s * self.dim..(s + 1) * self.dim]
    }

    /// Per-coordinate `(min, max)` over the images of letters that occur.
    pub fn extremes(&self) -> Vec<(i64, i64)> {
        let mut out = vec![(i64::MAX, i64::MIN); self.dim];
        for s in (0..self.occurs.len()).filter(|&s| self.occurs[s]) {
            for (j, &v) in self.get(s as u32).iter().enumerate() {
                out[j].0 = out[j].0.min(v);
                out[j].1 = out[j].1.max(v);
            }
        }
        out
    }
}

/// `P(0) = 0` and `P(i) = mu(x_1 ... x_i)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulativeTable {
    dim: usize,
    len: usize,
    values: Vec<i64>,
}

impl CumulativeTable {
    /// Single left-to-right pass over `word`.
    pub fn accumulate(mu: &MorphismMu, word: &FiniteWord) -> Result<Self> {
        let images = mu.symbol_images(word)?;
        Self::from_images(&images, word.symbols())
    }

    pub(crate) fn from_images(images: &SymbolImages, symbols: &[u32]) -> Result<Self> {
        let t = images.dim();
        let mut values: Vec<i64> = Vec::with_capacity((symbols.len() + 1) * t);
        values.resize(t, 0);
        for (i, &s) in symbols.iter().enumerate() {
            for (j, &v) in images.get(s).iter().enumerate() {
                let next = values[i * t + j]
                    .checked_add(v)
                    .filter(|x| x.abs() <= PREFIX_LIMIT)
                    .ok_or(Error::Overflow("accumulating prefix values"))?;
                values.push(next);
            }
        }
        Ok(CumulativeTable {
            dim: t,
            len: symbols.len(),
            values,
        })
    }

    /// Stacks per-coordinate tables of equal length into one table.
    pub(crate) fn zip(tables: &[CumulativeTable]) -> Result<Self> {
        let Some(first) = tables.first() else {
            return Err(Error::InvalidArgument("no tables to combine".into()));
        };
        let len = first.len;
        if let Some(t) = tables.iter().find(|t| t.len != len) {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: t.len,
            });
        }
        let dim: usize = tables.iter().map(|t| t.dim).sum();
        let mut values = Vec::with_capacity((len + 1) * dim);
        for i in 0..=len {
            for t in tables {
                values.extend_from_slice(t.prefix(i));
            }
        }
        Ok(CumulativeTable { dim, len, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of letters `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `P(i)` for `0 <= i <= N`.
    pub fn prefix(&self, i: usize) -> &[i64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// `mu(x_{a+1} ... x_b)` written into `out`, for `a <= b <= N` (0-based cut points).
    #[inline]
    pub(crate) fn between(&self, a: usize, b: usize, out: &mut [i64]) {
        let (pa, pb) = (self.prefix(a), self.prefix(b));
        for j in 0..self.dim {
            out[j] = pb[j] - pa[j];
        }
    }

    /// Whether `mu(x_{a+1..b}) == mu(x_{c+1..d})`.
    #[inline]
    pub(crate) fn same_value(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let (pa, pb, pc, pd) = (
            self.prefix(a),
            self.prefix(b),
            self.prefix(c),
            self.prefix(d),
        );
        (0..self.dim).all(|j| pb[j] - pa[j] == pd[j] - pc[j])
    }

    pub fn factor_value(&self, f: Factor) -> Result<Vec<i64>> {
        if f.start == 0 || f.len == 0 || f.end() > self.len {
            return Err(Error::FactorOutOfRange {
                start: f.start,
                len: f.len,
                available: self.len,
            });
        }
        let mut out = vec![0; self.dim];
        self.between(f.start - 1, f.end(), &mut out);
        Ok(out)
    }

    /// Coordinate-wise residues of `P(0), ..., P(N)` (row-major).
    pub fn residues(&self, modulus: &[i64]) -> Vec<i64> {
        assert_eq!(modulus.len(), self.dim);
        self.values
            .chunks_exact(self.dim)
            .flat_map(|row| row.iter().zip(modulus).map(|(v, m)| v.rem_euclid(*m)))
            .collect()
    }
}

pub(crate) fn add_checked(acc: &mut [i64], v: &[i64]) -> Result<()> {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a
            .checked_add(*b)
            .ok_or(Error::Overflow("summing letter images"))?;
    }
    Ok(())
}

pub(crate) fn sub_checked(acc: &mut [i64], v: &[i64]) -> Result<()> {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a
            .checked_sub(*b)
            .ok_or(Error::Overflow("summing letter images"))?;
    }
    Ok(())
}
