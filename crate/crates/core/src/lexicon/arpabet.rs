//! The 39-phone CMU ARPABET inventory.

use super::{PhoneUnit, Stress};

/// The 15 ARPABET vowels; these carry lexical stress digits.
pub const VOWELS: [&str; 15] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW",
];

/// The 24 ARPABET consonants.
pub const CONSONANTS: [&str; 24] = [
    "B", "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M", "N", "NG", "P", "R", "S", "SH", "T",
    "TH", "V", "W", "Y", "Z", "ZH",
];

pub fn is_arpabet_vowel(symbol: &str) -> bool {
    VOWELS.contains(&symbol)
}

pub fn is_arpabet_symbol(symbol: &str) -> bool {
    VOWELS.contains(&symbol) || CONSONANTS.contains(&symbol)
}

/// The full 39-unit base inventory. Vowels are listed at primary stress;
/// coverage checks treat stress variants of a vowel as the same base phone.
pub fn arpabet_inventory() -> Vec<PhoneUnit> {
    let mut units = Vec::with_capacity(39);
    for v in VOWELS {
        units.push(PhoneUnit::Arpabet {
            symbol: v.to_string(),
            stress: Some(Stress::Primary),
        });
    }
    for c in CONSONANTS {
        units.push(PhoneUnit::Arpabet {
            symbol: c.to_string(),
            stress: None,
        });
    }
    units
}
