//! Parser for CMU-dict formatted pronouncing dictionaries.
//!
//! Line grammar: `WORD[(n)]  PH1 PH2 ...`; lines starting with `;;;` are
//! comments; phones are ARPABET symbols with an optional trailing stress
//! digit on vowels.

use super::{LexiconError, PhoneUnit, PronouncingDictionary};

pub fn parse_pronouncing_dict(text: &str) -> Result<PronouncingDictionary, LexiconError> {
    let mut dict = PronouncingDictionary::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with(";;;") {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word_field = fields.next().expect("non-empty line has a first field");
        let phones: Vec<&str> = fields.collect();
        if phones.is_empty() {
            return Err(LexiconError::DictLine {
                line: line_no,
                message: format!("no phones for {word_field:?}"),
            });
        }
        let word = strip_variant_suffix(word_field).to_ascii_uppercase();
        if word.is_empty() {
            return Err(LexiconError::DictLine {
                line: line_no,
                message: format!("empty word field {word_field:?}"),
            });
        }
        let mut pron = Vec::with_capacity(phones.len());
        for token in phones {
            let unit = PhoneUnit::parse_arpabet(token).map_err(|e| LexiconError::DictLine {
                line: line_no,
                message: e.to_string(),
            })?;
            pron.push(unit);
        }
        dict.insert(word, pron);
    }
    Ok(dict)
}

/// Drops a trailing `(n)` variant marker: `READ(1)` -> `READ`.
fn strip_variant_suffix(word_field: &str) -> &str {
    if let Some(open) = word_field.rfind('(') {
        let tail = &word_field[open..];
        if tail.ends_with(')') && tail[1..tail.len() - 1].chars().all(|c| c.is_ascii_digit()) {
            return &word_field[..open];
        }
    }
    word_field
}
