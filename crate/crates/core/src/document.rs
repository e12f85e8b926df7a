//! JSON descriptions of words and of letter-image maps.
//!
//! ```json
//! {"kind": "periodic", "pattern": [0, 1]}
//! {"kind": "explicit", "letters": [[1, 0], [0, 2]]}
//! {"kind": "morphic", "rules": {"0": [0, 1, 1], "1": [0, 0, 0, 1]}, "seed": 0}
//! {"kind": "morphic", "preset": "dekking"}
//! {"kind": "champernowne"}
//! {"kind": "block_coded", "base": {...}, "code": {"0": [0, 3], "1": [1, 2]}}
//! {"kind": "lifted", "base": {...}}
//! ```
//!
//! Map keys are letters written as JSON (`"3"` or `"[1,0]"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::MorphismMu;
use crate::words::{Letter, LetterMap, SourceKind, WordSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Dekking,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordDocument {
    Periodic {
        pattern: Vec<Letter>,
    },
    Explicit {
        letters: Vec<Letter>,
    },
    Morphic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<Preset>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rules: Option<BTreeMap<String, Vec<Letter>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<Letter>,
    },
    Champernowne,
    BlockCoded {
        base: Box<WordDocument>,
        code: BTreeMap<String, Vec<Letter>>,
    },
    Lifted {
        base: Box<WordDocument>,
    },
}

fn parse_key(key: &str) -> Result<Letter> {
    serde_json::from_str(key)
        .map_err(|e| Error::WordDocument(format!("bad letter key {key:?}: {e}")))
}

fn key_of(letter: &Letter) -> String {
    serde_json::to_string(letter).expect("letters serialize")
}

fn letter_map(raw: &BTreeMap<String, Vec<Letter>>) -> Result<LetterMap> {
    raw.iter()
        .map(|(k, v)| Ok((parse_key(k)?, v.clone())))
        .collect()
}

fn raw_map(map: &LetterMap) -> BTreeMap<String, Vec<Letter>> {
    map.iter().map(|(k, v)| (key_of(k), v.clone())).collect()
}

impl WordDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::WordDocument(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn build(&self) -> Result<WordSource> {
        match self {
            WordDocument::Periodic { pattern } => WordSource::periodic(pattern.clone()),
            WordDocument::Explicit { letters } => WordSource::explicit(letters.clone()),
            WordDocument::Morphic {
                preset,
                rules,
                seed,
            } => match (preset, rules, seed) {
                (Some(Preset::Dekking), None, None) => Ok(WordSource::dekking()),
                (None, Some(rules), Some(seed)) => {
                    WordSource::morphic(letter_map(rules)?, seed.clone())
                }
                (None, Some(rules), None) => {
                    let rules = letter_map(rules)?;
                    let seed = rules
                        .keys()
                        .next()
                        .cloned()
                        .ok_or_else(|| Error::WordDocument("morphism has no rules".into()))?;
                    WordSource::morphic(rules, seed)
                }
                _ => Err(Error::WordDocument(
                    "morphic words need either \"preset\" or \"rules\" (with optional \"seed\")"
                        .into(),
                )),
            },
            WordDocument::Champernowne => Ok(WordSource::champernowne()),
            WordDocument::BlockCoded { base, code } => {
                WordSource::block_code(base.build()?, letter_map(code)?)
            }
            WordDocument::Lifted { base } => WordSource::lift(base.build()?),
        }
    }

    /// Describes `source` so that `build` reproduces it.
    pub fn describe(source: &WordSource) -> Self {
        match source.kind() {
            SourceKind::Periodic(p) => WordDocument::Periodic { pattern: p.clone() },
            SourceKind::Explicit(l) => WordDocument::Explicit { letters: l.clone() },
            SourceKind::Morphic { rules, seed } => WordDocument::Morphic {
                preset: None,
                rules: Some(raw_map(rules)),
                seed: Some(seed.clone()),
            },
            SourceKind::ChampernowneBinary => WordDocument::Champernowne,
            SourceKind::BlockCoded { base, code } => WordDocument::BlockCoded {
                base: Box::new(Self::describe(base)),
                code: raw_map(code),
            },
            SourceKind::Lifted { base } => WordDocument::Lifted {
                base: Box::new(Self::describe(base)),
            },
        }
    }
}

pub fn parse_word(text: &str) -> Result<WordSource> {
    WordDocument::parse(text)?.build()
}

/// A map from letters to words, `{"0": [0, 1, 1], "1": [0, 0, 0, 1]}`.
pub fn parse_letter_map(text: &str) -> Result<LetterMap> {
    let raw: BTreeMap<String, Vec<Letter>> =
        serde_json::from_str(text).map_err(|e| Error::WordDocument(format!("letter map: {e}")))?;
    letter_map(&raw)
}

/// A letter-image map `{"0": [1, 0], "1": [0, 1]}`.
pub fn parse_mu_map(text: &str) -> Result<MorphismMu> {
    let raw: BTreeMap<String, Vec<i64>> = serde_json::from_str(text)
        .map_err(|e| Error::WordDocument(format!("letter-image map: {e}")))?;
    let images = raw
        .iter()
        .map(|(k, v)| Ok((parse_key(k)?, v.clone())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    MorphismMu::custom(images)
}

pub fn mu_map_json(mu: &MorphismMu) -> String {
    let raw: BTreeMap<String, &Vec<i64>> =
        mu.images().iter().map(|(k, v)| (key_of(k), v)).collect();
    serde_json::to_string(&raw).expect("maps serialize")
}
