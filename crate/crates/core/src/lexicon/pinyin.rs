//! Pinyin syllable segmentation into initials and finals.
//!
//! Syllables arrive as lowercase ASCII with an optional trailing tone
//! digit ("zhuang1"). Segmentation takes the longest matching initial from
//! the 21-initial table; the remainder must be a known final. Zero-initial
//! syllables keep their orthographic form ("yi", "wu", "er") as the final
//! so that initial + final always reconcatenates to the toneless input.

use std::collections::HashSet;
use std::sync::LazyLock;

use super::{LexiconError, PhoneUnit};

/// The 21 standard initials, two-character ones first so a plain table
/// scan can double as a longest-prefix match.
pub const INITIALS: [&str; 21] = [
    "zh", "ch", "sh", "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "j", "q", "x", "r",
    "z", "c", "s",
];

/// Finals reachable after an initial, plus the orthographic zero-initial
/// syllable forms (y-/w- spellings and the bare vowel syllables).
/// "v" stands in for u-umlaut, as in "lv" and "nve".
pub const FINALS: [&str; 57] = [
    // plain finals as combined with initials
    "a", "o", "e", "i", "u", "v", "ai", "ei", "ao", "ou", "an", "en", "ang", "eng", "ong", "er",
    "ia", "ie", "iao", "iu", "ian", "in", "iang", "ing", "iong", "ua", "uo", "uai", "ui", "uan",
    "un", "uang", "ue", "ve", // zero-initial orthographic forms
    "yi", "ya", "ye", "yao", "you", "yan", "yin", "yang", "ying", "yong", "wu", "wa", "wo", "wai",
    "wei", "wan", "wen", "wang", "weng", "yu", "yue", "yuan", "yun",
];

static FINALS_SET: LazyLock<HashSet<&'static str>> =
    LazyLock::new(|| FINALS.iter().copied().collect());

static SYLLABLES: LazyLock<Vec<&'static str>> = LazyLock::new(|| {
    include_str!("../../data/pinyin_syllables.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
});

pub fn pinyin_initials() -> &'static [&'static str] {
    &INITIALS
}

pub fn pinyin_finals() -> &'static HashSet<&'static str> {
    &FINALS_SET
}

/// The bundled standard syllable table (toneless, one per line).
pub fn bundled_syllables() -> &'static [&'static str] {
    &SYLLABLES
}

/// All initials and finals as dictionary units.
pub fn pinyin_inventory() -> Vec<PhoneUnit> {
    let mut units: Vec<PhoneUnit> = INITIALS
        .iter()
        .map(|s| PhoneUnit::PinyinInitial {
            symbol: (*s).to_string(),
        })
        .collect();
    units.extend(FINALS.iter().map(|s| PhoneUnit::PinyinFinal {
        symbol: (*s).to_string(),
    }));
    units
}

/// A segmented pinyin syllable. `final_part` is the pinyin final (rhyme);
/// concatenating `initial` + `final_part` reproduces the toneless input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinyinSyllable {
    pub initial: Option<String>,
    pub final_part: String,
    pub tone: Option<u8>,
}

impl PinyinSyllable {
    /// The toneless spelling this syllable was segmented from.
    pub fn spelling(&self) -> String {
        match &self.initial {
            Some(i) => format!("{i}{}", self.final_part),
            None => self.final_part.clone(),
        }
    }

    /// Dictionary units for this syllable: the initial (when present)
    /// followed by the final. Tone does not participate in pose lookup.
    pub fn to_units(&self) -> Vec<PhoneUnit> {
        let mut units = Vec::with_capacity(2);
        if let Some(i) = &self.initial {
            units.push(PhoneUnit::PinyinInitial { symbol: i.clone() });
        }
        units.push(PhoneUnit::PinyinFinal {
            symbol: self.final_part.clone(),
        });
        units
    }
}

/// Splits a toneless or tone-numbered syllable into initial and final by
/// longest-prefix match against the initial table.
pub fn segment_pinyin(syllable: &str) -> Result<PinyinSyllable, LexiconError> {
    let invalid = |message: &str| LexiconError::InvalidSyllable {
        syllable: syllable.to_string(),
        message: message.to_string(),
    };

    let (body, tone) = match syllable.chars().last() {
        Some(d) if d.is_ascii_digit() => {
            let tone = d.to_digit(10).unwrap() as u8;
            if tone > 4 {
                return Err(invalid("tone digit must be 0-4"));
            }
            (&syllable[..syllable.len() - 1], Some(tone))
        }
        _ => (syllable, None),
    };
    if body.is_empty() {
        return Err(invalid("empty syllable"));
    }
    if !body.chars().all(|c| c.is_ascii_lowercase()) {
        return Err(invalid("syllable must be lowercase ASCII letters"));
    }

    // INITIALS lists two-character initials first, so the first hit is the
    // longest prefix.
    let initial = INITIALS.iter().find(|i| body.starts_with(**i)).copied();
    let final_part = match initial {
        Some(i) => &body[i.len()..],
        None => body,
    };
    if final_part.is_empty() {
        return Err(invalid("initial with no final"));
    }
    if !FINALS_SET.contains(final_part) {
        return Err(invalid(&format!("unknown final {final_part:?}")));
    }

    Ok(PinyinSyllable {
        initial: initial.map(str::to_string),
        final_part: final_part.to_string(),
        tone,
    })
}

/// Converts a whitespace-separated pinyin utterance into dictionary units.
/// Sentence punctuation becomes Silence; anything else must be a valid
/// syllable with an optional tone digit.
pub fn pinyin_to_units(input: &str) -> Result<Vec<PhoneUnit>, LexiconError> {
    const PAUSE_CHARS: [char; 6] = ['.', ',', '!', '?', ';', ':'];
    let mut units = Vec::new();
    let mut syllable = String::new();
    let flush = |syllable: &mut String, units: &mut Vec<PhoneUnit>| {
        if syllable.is_empty() {
            return Ok(());
        }
        let seg = segment_pinyin(syllable)?;
        units.extend(seg.to_units());
        syllable.clear();
        Ok(())
    };
    for c in input.chars() {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            syllable.push(c);
        } else if c.is_ascii_uppercase() {
            syllable.push(c.to_ascii_lowercase());
        } else if PAUSE_CHARS.contains(&c) {
            flush(&mut syllable, &mut units)?;
            units.push(PhoneUnit::Silence);
        } else if c.is_whitespace() {
            flush(&mut syllable, &mut units)?;
        } else {
            return Err(LexiconError::InvalidSyllable {
                syllable: input.to_string(),
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    flush(&mut syllable, &mut units)?;
    Ok(units)
}
