//! Text front end: pronouncing-dictionary parsing, text normalization,
//! phone transcription, and pinyin syllable segmentation.
//!
//! Everything here is pure and immutable after construction; a parsed
//! [`PronouncingDictionary`] can be shared freely across threads.

mod arpabet;
mod cmudict;
mod normalize;
mod pinyin;

pub use arpabet::{arpabet_inventory, is_arpabet_symbol, is_arpabet_vowel};
pub use cmudict::parse_pronouncing_dict;
pub use normalize::{normalize_text, NormalizedText};
pub use pinyin::{
    bundled_syllables, pinyin_finals, pinyin_initials, pinyin_inventory, pinyin_to_units,
    segment_pinyin, PinyinSyllable,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors produced by the text front end.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    DictLine { line: usize, message: String },
    #[error("unknown phone symbol {symbol:?}")]
    UnknownPhone { symbol: String },
    #[error("phone {symbol:?}: {message}")]
    InvalidStress { symbol: String, message: String },
    #[error("word {word:?} not found in pronouncing dictionary")]
    OutOfVocabulary { word: String },
    #[error("invalid pinyin syllable {syllable:?}: {message}")]
    InvalidSyllable { syllable: String, message: String },
}

/// Lexical stress level carried by ARPABET vowels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stress {
    Unstressed,
    Primary,
    Secondary,
}

impl Stress {
    pub fn digit(self) -> char {
        match self {
            Stress::Unstressed => '0',
            Stress::Primary => '1',
            Stress::Secondary => '2',
        }
    }

    pub fn from_digit(d: char) -> Option<Self> {
        match d {
            '0' => Some(Stress::Unstressed),
            '1' => Some(Stress::Primary),
            '2' => Some(Stress::Secondary),
            _ => None,
        }
    }
}

/// A key of the phoneme-pose dictionary: an ARPABET phone with stress, a
/// pinyin initial or final, or a silence marker.
///
/// The string form is unambiguous across kinds: ARPABET symbols are
/// uppercase ("IY1", "M"), pinyin units lowercase ("zh", "uang"), and
/// silence is "SIL".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhoneUnit {
    Arpabet {
        symbol: String,
        stress: Option<Stress>,
    },
    PinyinInitial {
        symbol: String,
    },
    PinyinFinal {
        symbol: String,
    },
    Silence,
}

impl PhoneUnit {
    /// Builds an ARPABET unit, enforcing that stress is present exactly on
    /// the 15 vowel symbols.
    pub fn arpabet(symbol: &str, stress: Option<Stress>) -> Result<Self, LexiconError> {
        if !arpabet::is_arpabet_symbol(symbol) {
            return Err(LexiconError::UnknownPhone {
                symbol: symbol.to_string(),
            });
        }
        let vowel = arpabet::is_arpabet_vowel(symbol);
        if vowel && stress.is_none() {
            return Err(LexiconError::InvalidStress {
                symbol: symbol.to_string(),
                message: "vowel requires a stress digit".into(),
            });
        }
        if !vowel && stress.is_some() {
            return Err(LexiconError::InvalidStress {
                symbol: symbol.to_string(),
                message: "consonant must not carry a stress digit".into(),
            });
        }
        Ok(PhoneUnit::Arpabet {
            symbol: symbol.to_string(),
            stress,
        })
    }

    /// Parses an ARPABET token with an optional trailing stress digit,
    /// e.g. "IY1" or "M".
    pub fn parse_arpabet(token: &str) -> Result<Self, LexiconError> {
        let (symbol, stress) = match token.chars().last() {
            Some(last) if last.is_ascii_digit() => {
                let stress =
                    Stress::from_digit(last).ok_or_else(|| LexiconError::InvalidStress {
                        symbol: token.to_string(),
                        message: format!("stress digit must be 0, 1, or 2, got {last}"),
                    })?;
                (&token[..token.len() - 1], Some(stress))
            }
            _ => (token, None),
        };
        PhoneUnit::arpabet(symbol, stress)
    }

    pub fn pinyin_initial(symbol: &str) -> Result<Self, LexiconError> {
        if !pinyin::pinyin_initials().contains(&symbol) {
            return Err(LexiconError::UnknownPhone {
                symbol: symbol.to_string(),
            });
        }
        Ok(PhoneUnit::PinyinInitial {
            symbol: symbol.to_string(),
        })
    }

    pub fn pinyin_final(symbol: &str) -> Result<Self, LexiconError> {
        if !pinyin::pinyin_finals().contains(&symbol) {
            return Err(LexiconError::UnknownPhone {
                symbol: symbol.to_string(),
            });
        }
        Ok(PhoneUnit::PinyinFinal {
            symbol: symbol.to_string(),
        })
    }

    pub fn is_silence(&self) -> bool {
        matches!(self, PhoneUnit::Silence)
    }

    pub fn is_vowel(&self) -> bool {
        matches!(self, PhoneUnit::Arpabet { symbol, .. } if arpabet::is_arpabet_vowel(symbol))
    }

    pub fn stress(&self) -> Option<Stress> {
        match self {
            PhoneUnit::Arpabet { stress, .. } => *stress,
            _ => None,
        }
    }

    /// Same unit with a different stress level; only meaningful for vowels.
    pub fn with_stress(&self, stress: Stress) -> Option<Self> {
        match self {
            PhoneUnit::Arpabet {
                symbol,
                stress: Some(_),
            } => Some(PhoneUnit::Arpabet {
                symbol: symbol.clone(),
                stress: Some(stress),
            }),
            _ => None,
        }
    }

    /// True when both units share kind and symbol, ignoring stress.
    pub fn same_base(&self, other: &PhoneUnit) -> bool {
        match (self, other) {
            (PhoneUnit::Arpabet { symbol: a, .. }, PhoneUnit::Arpabet { symbol: b, .. }) => a == b,
            (PhoneUnit::PinyinInitial { symbol: a }, PhoneUnit::PinyinInitial { symbol: b }) => {
                a == b
            }
            (PhoneUnit::PinyinFinal { symbol: a }, PhoneUnit::PinyinFinal { symbol: b }) => a == b,
            (PhoneUnit::Silence, PhoneUnit::Silence) => true,
            _ => false,
        }
    }
}

impl fmt::Display for PhoneUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhoneUnit::Arpabet { symbol, stress } => {
                f.write_str(symbol)?;
                if let Some(s) = stress {
                    write!(f, "{}", s.digit())?;
                }
                Ok(())
            }
            PhoneUnit::PinyinInitial { symbol } | PhoneUnit::PinyinFinal { symbol } => {
                f.write_str(symbol)
            }
            PhoneUnit::Silence => f.write_str("SIL"),
        }
    }
}

impl FromStr for PhoneUnit {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "SIL" {
            return Ok(PhoneUnit::Silence);
        }
        if s.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            return PhoneUnit::parse_arpabet(s);
        }
        if pinyin::pinyin_initials().contains(&s) {
            return Ok(PhoneUnit::PinyinInitial { symbol: s.into() });
        }
        if pinyin::pinyin_finals().contains(&s) {
            return Ok(PhoneUnit::PinyinFinal { symbol: s.into() });
        }
        Err(LexiconError::UnknownPhone { symbol: s.into() })
    }
}

impl Serialize for PhoneUnit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhoneUnit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// One pronunciation: a non-empty phone sequence.
pub type Pronunciation = Vec<PhoneUnit>;

/// Word-to-pronunciations map parsed from CMU-dict formatted text.
/// Keys are uppercase; variant pronunciations keep their source order.
#[derive(Debug, Clone, Default)]
pub struct PronouncingDictionary {
    entries: HashMap<String, Vec<Pronunciation>>,
}

impl PronouncingDictionary {
    pub(crate) fn insert(&mut self, word: String, pron: Pronunciation) {
        self.entries.entry(word).or_default().push(pron);
    }

    /// All pronunciation variants for a word, in source order.
    pub fn variants(&self, word: &str) -> Option<&[Pronunciation]> {
        self.entries.get(word).map(|v| v.as_slice())
    }

    /// First-variant pronunciation, the one transcription uses.
    pub fn first(&self, word: &str) -> Option<&Pronunciation> {
        self.entries.get(word).and_then(|v| v.first())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A unit of normalized input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Word(String),
    Pause,
}

/// Maps each Word token to its first-variant pronunciation and each Pause
/// to one Silence unit, preserving token order.
pub fn transcribe(
    tokens: &[Token],
    dict: &PronouncingDictionary,
) -> Result<Vec<PhoneUnit>, LexiconError> {
    let mut phones = Vec::new();
    for token in tokens {
        match token {
            Token::Word(word) => {
                let pron = dict
                    .first(word)
                    .ok_or_else(|| LexiconError::OutOfVocabulary { word: word.clone() })?;
                phones.extend(pron.iter().cloned());
            }
            Token::Pause => phones.push(PhoneUnit::Silence),
        }
    }
    Ok(phones)
}
