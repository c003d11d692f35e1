//! Rule-list suffix stemmer.
//!
//! The stemmer walks [`RULES`] in order and acts on the first rule whose
//! suffix matches the word. If that rule is a strip rule and enough of the
//! word remains, the suffix is replaced and the scan starts over on the
//! result; otherwise the word is final. Every strip rule shortens the word,
//! so the loop terminates, and the result is a fixed point: stemming a stem
//! returns it unchanged.
//!
//! Strip rules flagged `tidy` repair the bare stem afterwards, in order:
//! a trailing double consonant other than `l`, `s`, `z` loses one letter;
//! a stem ending in `at`, `bl` or `iz` gains an `e`; a stem ending
//! consonant-vowel-consonant (last letter not `w`, `x`, `y`) gains an `e`.
//! So "definition" and "defined" both become "define".

use alloc::string::String;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleAction {
    /// Word is final.
    Keep,
    Strip {
        replacement: &'static str,
        /// Minimum stem length in characters, excluding the replacement.
        min_stem: usize,
        tidy: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: &'static str,
    pub action: RuleAction,
}

const fn strip(
    suffix: &'static str,
    replacement: &'static str,
    min_stem: usize,
    tidy: bool,
) -> SuffixRule {
    SuffixRule {
        suffix,
        action: RuleAction::Strip {
            replacement,
            min_stem,
            tidy,
        },
    }
}

const fn keep(suffix: &'static str) -> SuffixRule {
    SuffixRule {
        suffix,
        action: RuleAction::Keep,
    }
}

pub const RULES: &[SuffixRule] = &[
    strip("sses", "ss", 1, false),
    strip("ies", "y", 2, false),
    keep("ss"),
    keep("us"),
    keep("is"),
    strip("ational", "ate", 2, false),
    strip("ization", "ize", 2, false),
    strip("ition", "", 3, true),
    strip("ation", "", 3, true),
    strip("ness", "", 3, false),
    strip("ment", "", 4, false),
    strip("ing", "", 3, true),
    strip("ed", "", 3, true),
    strip("ly", "", 3, false),
    strip("s", "", 3, false),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn is_consonant(c: char) -> bool {
    c.is_alphabetic() && !is_vowel(c)
}

fn tidy(stem: &mut String) {
    let mut tail = stem.chars().rev();
    let (Some(c1), Some(c2)) = (tail.next(), tail.next()) else {
        return;
    };
    let c3 = tail.next();
    if c1 == c2 && is_consonant(c1) && !matches!(c1, 'l' | 's' | 'z') {
        stem.pop();
    } else if stem.ends_with("at") || stem.ends_with("bl") || stem.ends_with("iz") {
        stem.push('e');
    } else if let Some(c3) = c3 {
        if is_consonant(c3) && is_vowel(c2) && is_consonant(c1) && !matches!(c1, 'w' | 'x' | 'y') {
            stem.push('e');
        }
    }
}

/// Stems one lowercase token.
pub fn stem(word: &str) -> String {
    let mut current = String::from(word);
    'outer: loop {
        for rule in RULES {
            let Some(base) = current.strip_suffix(rule.suffix) else {
                continue;
            };
            match rule.action {
                RuleAction::Keep => break 'outer,
                RuleAction::Strip {
                    replacement,
                    min_stem,
                    tidy: tidy_after,
                } => {
                    if base.chars().count() < min_stem {
                        break 'outer;
                    }
                    let mut next = String::from(base);
                    next.push_str(replacement);
                    if tidy_after {
                        tidy(&mut next);
                    }
                    current = next;
                    continue 'outer;
                }
            }
        }
        break;
    }
    current
}
