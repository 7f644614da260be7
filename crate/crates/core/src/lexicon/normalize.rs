//! Input text normalization: uppercasing, tokenization into words and
//! pauses, and integer-numeral expansion into English number words.

use super::Token;

/// Sentence punctuation that maps to a pause.
const PAUSE_CHARS: [char; 6] = ['.', ',', '!', '?', ';', ':'];

/// Normalization result: the token stream plus a count of characters that
/// had to be dropped because they fit no rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    pub tokens: Vec<Token>,
    pub dropped_chars: usize,
}

/// Uppercases letters into Word tokens, turns sentence punctuation into
/// Pause tokens, and expands integer numerals into English number words.
/// Characters matching no rule are dropped and counted.
pub fn normalize_text(input: &str) -> NormalizedText {
    let mut tokens = Vec::new();
    let mut dropped = 0usize;
    let mut word = String::new();
    let mut digits = String::new();

    let mut chars = input.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_ascii_alphabetic() {
            flush_digits(&mut digits, &mut tokens);
            word.push(c.to_ascii_uppercase());
        } else if c == '\''
            && !word.is_empty()
            && chars.peek().is_some_and(|n| n.is_ascii_alphabetic())
        {
            // interior apostrophe stays part of the word (DON'T)
            word.push('\'');
        } else if c.is_ascii_digit() {
            flush_word(&mut word, &mut tokens);
            digits.push(c);
        } else if PAUSE_CHARS.contains(&c) {
            flush_word(&mut word, &mut tokens);
            flush_digits(&mut digits, &mut tokens);
            tokens.push(Token::Pause);
        } else if c.is_whitespace() {
            flush_word(&mut word, &mut tokens);
            flush_digits(&mut digits, &mut tokens);
        } else {
            flush_word(&mut word, &mut tokens);
            flush_digits(&mut digits, &mut tokens);
            dropped += 1;
        }
    }
    flush_word(&mut word, &mut tokens);
    flush_digits(&mut digits, &mut tokens);

    NormalizedText {
        tokens,
        dropped_chars: dropped,
    }
}

fn flush_word(word: &mut String, tokens: &mut Vec<Token>) {
    if !word.is_empty() {
        tokens.push(Token::Word(std::mem::take(word)));
    }
}

fn flush_digits(digits: &mut String, tokens: &mut Vec<Token>) {
    if !digits.is_empty() {
        for w in spell_digit_run(digits) {
            tokens.push(Token::Word(w));
        }
        digits.clear();
    }
}

const ONES: [&str; 20] = [
    "ZERO",
    "ONE",
    "TWO",
    "THREE",
    "FOUR",
    "FIVE",
    "SIX",
    "SEVEN",
    "EIGHT",
    "NINE",
    "TEN",
    "ELEVEN",
    "TWELVE",
    "THIRTEEN",
    "FOURTEEN",
    "FIFTEEN",
    "SIXTEEN",
    "SEVENTEEN",
    "EIGHTEEN",
    "NINETEEN",
];

const TENS: [&str; 10] = [
    "", "", "TWENTY", "THIRTY", "FORTY", "FIFTY", "SIXTY", "SEVENTY", "EIGHTY", "NINETY",
];

/// Expands one run of ASCII digits. Values up to 999,999 are spelled as
/// number words; anything larger is read digit by digit.
fn spell_digit_run(digits: &str) -> Vec<String> {
    debug_assert!(digits.chars().all(|c| c.is_ascii_digit()));
    match digits.parse::<u64>() {
        Ok(value) if value <= 999_999 => spell_integer(value),
        _ => digits
            .chars()
            .map(|c| ONES[c.to_digit(10).unwrap() as usize].to_string())
            .collect(),
    }
}

/// Spells 0..=999,999 as a sequence of uppercase words.
pub(crate) fn spell_integer(value: u64) -> Vec<String> {
    assert!(value <= 999_999);
    if value == 0 {
        return vec!["ZERO".to_string()];
    }
    let mut words = Vec::new();
    let thousands = value / 1000;
    let rest = value % 1000;
    if thousands > 0 {
        spell_below_1000(thousands, &mut words);
        words.push("THOUSAND".to_string());
    }
    if rest > 0 {
        spell_below_1000(rest, &mut words);
    }
    words
}

fn spell_below_1000(value: u64, words: &mut Vec<String>) {
    debug_assert!((1..1000).contains(&value));
    let hundreds = value / 100;
    let rest = value % 100;
    if hundreds > 0 {
        words.push(ONES[hundreds as usize].to_string());
        words.push("HUNDRED".to_string());
    }
    if rest == 0 {
        return;
    }
    if rest < 20 {
        words.push(ONES[rest as usize].to_string());
    } else {
        words.push(TENS[(rest / 10) as usize].to_string());
        if !rest.is_multiple_of(10) {
            words.push(ONES[(rest % 10) as usize].to_string());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(tokens: &[Token]) -> Vec<String> {
        tokens
            .iter()
            .map(|t| match t {
                Token::Word(w) => w.clone(),
                Token::Pause => "<pause>".to_string(),
            })
            .collect()
    }

    #[test]
    fn hello_world_example() {
        let out = normalize_text("Hello, world.");
        assert_eq!(words(&out.tokens), ["HELLO", "<pause>", "WORLD", "<pause>"]);
        assert_eq!(out.dropped_chars, 0);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        let out = normalize_text("");
        assert!(out.tokens.is_empty());
        assert_eq!(out.dropped_chars, 0);
    }

    #[test]
    fn numbers_expand_to_words() {
        assert_eq!(words(&normalize_text("25").tokens), ["TWENTY", "FIVE"]);
        assert_eq!(words(&normalize_text("0").tokens), ["ZERO"]);
        assert_eq!(
            words(&normalize_text("105").tokens),
            ["ONE", "HUNDRED", "FIVE"]
        );
    }

    #[test]
    fn huge_numbers_read_digit_by_digit() {
        assert_eq!(
            words(&normalize_text("1000000").tokens),
            ["ONE", "ZERO", "ZERO", "ZERO", "ZERO", "ZERO", "ZERO"]
        );
    }

    #[test]
    fn unknown_characters_are_dropped_and_counted() {
        let out = normalize_text("a#b");
        assert_eq!(words(&out.tokens), ["A", "B"]);
        assert_eq!(out.dropped_chars, 1);
    }

    #[test]
    fn interior_apostrophe_kept() {
        assert_eq!(
            words(&normalize_text("don't stop").tokens),
            ["DON'T", "STOP"]
        );
        // trailing apostrophe is dropped
        let out = normalize_text("dogs'");
        assert_eq!(words(&out.tokens), ["DOGS"]);
        assert_eq!(out.dropped_chars, 1);
    }

    #[test]
    fn every_sentence_punctuation_char_pauses() {
        let out = normalize_text("a. b, c! d? e; f:");
        let pauses = out.tokens.iter().filter(|t| **t == Token::Pause).count();
        assert_eq!(pauses, 6);
        assert_eq!(out.dropped_chars, 0);
    }

    #[test]
    fn idempotent_on_word_outputs() {
        let out = normalize_text("Don't stop, 42 times!");
        for token in &out.tokens {
            if let Token::Word(w) = token {
                let again = normalize_text(w);
                assert_eq!(again.tokens, vec![Token::Word(w.clone())]);
                assert_eq!(again.dropped_chars, 0);
            }
        }
    }

    /// Independent reference speller used to freeze expected values: builds
    /// the word list from digit positions without sharing code with the
    /// production speller.
    fn reference_spell(n: u64) -> Vec<String> {
        fn two_digits(n: u64) -> Vec<&'static str> {
            const UNDER20: [&str; 20] = [
                "ZERO",
                "ONE",
                "TWO",
                "THREE",
                "FOUR",
                "FIVE",
                "SIX",
                "SEVEN",
                "EIGHT",
                "NINE",
                "TEN",
                "ELEVEN",
                "TWELVE",
                "THIRTEEN",
                "FOURTEEN",
                "FIFTEEN",
                "SIXTEEN",
                "SEVENTEEN",
                "EIGHTEEN",
                "NINETEEN",
            ];
            const TENS_WORDS: [&str; 8] = [
                "TWENTY", "THIRTY", "FORTY", "FIFTY", "SIXTY", "SEVENTY", "EIGHTY", "NINETY",
            ];
            if n < 20 {
                vec![UNDER20[n as usize]]
            } else {
                let mut v = vec![TENS_WORDS[(n / 10 - 2) as usize]];
                if !n.is_multiple_of(10) {
                    v.push(UNDER20[(n % 10) as usize]);
                }
                v
            }
        }
        fn three_digits(n: u64) -> Vec<&'static str> {
            let mut v = Vec::new();
            if n >= 100 {
                v.extend(two_digits(n / 100));
                v.push("HUNDRED");
            }
            if !n.is_multiple_of(100) {
                v.extend(two_digits(n % 100));
            }
            v
        }
        if n == 0 {
            return vec!["ZERO".to_string()];
        }
        let mut v: Vec<&'static str> = Vec::new();
        if n >= 1000 {
            v.extend(three_digits(n / 1000));
            v.push("THOUSAND");
        }
        if !n.is_multiple_of(1000) {
            v.extend(three_digits(n % 1000));
        }
        v.into_iter().map(str::to_string).collect()
    }

    #[test]
    fn speller_matches_reference_for_0_to_10000() {
        for n in 0..=10_000u64 {
            assert_eq!(spell_integer(n), reference_spell(n), "mismatch at {n}");
        }
    }
}
