//! English Snowball (Porter2) stemming.
//!
//! Maps inflected word forms onto a shared stem so the vocabulary groups
//! tokens of similar meaning ("running", "runs" -> "run"). Only purely
//! alphabetic lowercase words are stemmed; numeric and mixed tokens pass
//! through unchanged.

use std::borrow::Cow;

/// Stem a lowercase word with the Snowball English (Porter2) algorithm.
///
/// Words shorter than three letters and words containing anything other
/// than `a-z` are returned unchanged.
pub fn stem(word: &str) -> Cow<'_, str> {
    if word.len() < 3 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return Cow::Borrowed(word);
    }
    if let Some(fixed) = exceptional_form(word) {
        return Cow::Borrowed(fixed);
    }
    let mut st = Stemmer::new(word);
    st.step_1a();
    if !st.is_post_1a_exception() {
        st.step_1b();
        st.step_1c();
        st.step_2();
        st.step_3();
        st.step_4();
        st.step_5();
    }
    // postlude: consonant-marked Y back to y
    for b in &mut st.w {
        if *b == b'Y' {
            *b = b'y';
        }
    }
    Cow::Owned(String::from_utf8(st.w).expect("stemmer operates on ASCII"))
}

/// Whole-word irregular forms handled before the rule cascade.
fn exceptional_form(word: &str) -> Option<&'static str> {
    Some(match word {
        "skis" => "ski",
        "skies" => "sky",
        "dying" => "die",
        "lying" => "lie",
        "tying" => "tie",
        "idly" => "idl",
        "gently" => "gentl",
        "ugly" => "ugli",
        "early" => "earli",
        "only" => "onli",
        "singly" => "singl",
        "sky" => "sky",
        "news" => "news",
        "howe" => "howe",
        "atlas" => "atlas",
        "cosmos" => "cosmos",
        "bias" => "bias",
        "andes" => "andes",
        _ => return None,
    })
}

const DOUBLES: [&[u8]; 9] = [
    b"bb", b"dd", b"ff", b"gg", b"mm", b"nn", b"pp", b"rr", b"tt",
];

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

// Vowels plus w, x and the consonant marker Y; used by the short-syllable test.
fn is_vowel_wxy(b: u8) -> bool {
    is_vowel(b) || matches!(b, b'w' | b'x' | b'Y')
}

fn valid_li_ending(b: u8) -> bool {
    matches!(b, b'c' | b'd' | b'e' | b'g' | b'h' | b'k' | b'm' | b'n' | b'r' | b't')
}

struct Stemmer {
    w: Vec<u8>,
    /// Start of region R1: after the first non-vowel that follows a vowel.
    p1: usize,
    /// Start of region R2: same rule applied again inside R1.
    p2: usize,
}

impl Stemmer {
    fn new(word: &str) -> Self {
        let mut w = word.as_bytes().to_vec();
        // prelude: mark consonant y's as Y (word-initial, or following a vowel)
        if w[0] == b'y' {
            w[0] = b'Y';
        }
        for i in 1..w.len() {
            if w[i] == b'y' && is_vowel(w[i - 1]) {
                w[i] = b'Y';
            }
        }
        let p1 = ["gener", "commun", "arsen"]
            .iter()
            .find(|pre| w.starts_with(pre.as_bytes()))
            .map(|pre| pre.len())
            .or_else(|| after_vowel_nonvowel(&w, 0))
            .unwrap_or(w.len());
        let p2 = after_vowel_nonvowel(&w, p1).unwrap_or(w.len());
        Stemmer { w, p1, p2 }
    }

    fn ends(&self, suffix: &[u8]) -> bool {
        self.w.ends_with(suffix)
    }

    /// True when a suffix of the given length lies entirely inside R1.
    fn in_r1(&self, suffix_len: usize) -> bool {
        self.w.len() - suffix_len >= self.p1
    }

    fn in_r2(&self, suffix_len: usize) -> bool {
        self.w.len() - suffix_len >= self.p2
    }

    fn truncate_by(&mut self, n: usize) {
        let keep = self.w.len() - n;
        self.w.truncate(keep);
    }

    fn replace_suffix(&mut self, suffix_len: usize, with: &[u8]) {
        self.truncate_by(suffix_len);
        self.w.extend_from_slice(with);
    }

    /// Does the prefix of length `pos` end in a short syllable?
    fn short_syllable_at(&self, pos: usize) -> bool {
        if pos >= 3
            && !is_vowel(self.w[pos - 3])
            && is_vowel(self.w[pos - 2])
            && !is_vowel_wxy(self.w[pos - 1])
        {
            return true;
        }
        pos == 2 && is_vowel(self.w[0]) && !is_vowel(self.w[1])
    }

    /// "sses", "ied"/"ies" and plural "s" endings.
    fn step_1a(&mut self) {
        let n = self.w.len();
        if self.ends(b"sses") {
            self.truncate_by(2);
        } else if self.ends(b"ied") || self.ends(b"ies") {
            // keep "ie" when only one letter precedes the suffix
            if n > 4 {
                self.truncate_by(2);
            } else {
                self.truncate_by(1);
            }
        } else if self.ends(b"us") || self.ends(b"ss") {
            // explicitly left alone
        } else if self.ends(b"s") {
            // delete only if a vowel occurs before the penultimate letter
            if self.w[..n.saturating_sub(2)].iter().copied().any(is_vowel) {
                self.truncate_by(1);
            }
        }
    }

    fn is_post_1a_exception(&self) -> bool {
        matches!(
            self.w.as_slice(),
            b"inning" | b"outing" | b"canning" | b"herring" | b"earring" | b"proceed"
                | b"exceed" | b"succeed"
        )
    }

    fn step_1b(&mut self) {
        if self.ends(b"eedly") {
            if self.in_r1(5) {
                self.truncate_by(3);
            }
            return;
        }
        if self.ends(b"eed") {
            if self.in_r1(3) {
                self.truncate_by(1);
            }
            return;
        }
        let suffix_len = if self.ends(b"ingly") {
            5
        } else if self.ends(b"edly") {
            4
        } else if self.ends(b"ing") {
            3
        } else if self.ends(b"ed") {
            2
        } else {
            return;
        };
        let stem_part = &self.w[..self.w.len() - suffix_len];
        if !stem_part.iter().copied().any(is_vowel) {
            return;
        }
        self.truncate_by(suffix_len);
        if self.ends(b"at") || self.ends(b"bl") || self.ends(b"iz") {
            self.w.push(b'e');
        } else if DOUBLES.iter().any(|d| self.ends(d)) {
            self.truncate_by(1);
        } else if self.w.len() == self.p1 && self.short_syllable_at(self.w.len()) {
            self.w.push(b'e');
        }
    }

    /// Final y preceded by a non-vowel (not the first letter) becomes i.
    fn step_1c(&mut self) {
        let n = self.w.len();
        if n >= 3
            && matches!(self.w[n - 1], b'y' | b'Y')
            && !is_vowel(self.w[n - 2])
        {
            self.w[n - 1] = b'i';
        }
    }

    fn step_2(&mut self) {
        // longest suffix first; the R1 test applies to the longest match only
        const RULES: [(&[u8], &[u8]); 24] = [
            (b"ational", b"ate"),
            (b"fulness", b"ful"),
            (b"iveness", b"ive"),
            (b"ization", b"ize"),
            (b"ousness", b"ous"),
            (b"biliti", b"ble"),
            (b"lessli", b"less"),
            (b"tional", b"tion"),
            (b"alism", b"al"),
            (b"aliti", b"al"),
            (b"ation", b"ate"),
            (b"entli", b"ent"),
            (b"fulli", b"ful"),
            (b"iviti", b"ive"),
            (b"ousli", b"ous"),
            (b"abli", b"able"),
            (b"anci", b"ance"),
            (b"ator", b"ate"),
            (b"enci", b"ence"),
            (b"izer", b"ize"),
            (b"alli", b"al"),
            (b"bli", b"ble"),
            (b"ogi", b"og"),
            (b"li", b""),
        ];
        for (suffix, replacement) in RULES {
            if !self.ends(suffix) {
                continue;
            }
            if self.in_r1(suffix.len()) {
                let before = self.w.len() - suffix.len();
                match suffix {
                    b"ogi" => {
                        if before > 0 && self.w[before - 1] == b'l' {
                            self.replace_suffix(suffix.len(), replacement);
                        }
                    }
                    b"li" => {
                        if before > 0 && valid_li_ending(self.w[before - 1]) {
                            self.truncate_by(2);
                        }
                    }
                    _ => self.replace_suffix(suffix.len(), replacement),
                }
            }
            return;
        }
    }

    fn step_3(&mut self) {
        const RULES: [(&[u8], &[u8]); 9] = [
            (b"ational", b"ate"),
            (b"tional", b"tion"),
            (b"alize", b"al"),
            (b"icate", b"ic"),
            (b"iciti", b"ic"),
            (b"ative", b""),
            (b"ical", b"ic"),
            (b"ness", b""),
            (b"ful", b""),
        ];
        for (suffix, replacement) in RULES {
            if !self.ends(suffix) {
                continue;
            }
            if self.in_r1(suffix.len()) {
                // "ative" is deleted only when the whole suffix also sits in R2
                if suffix != b"ative" || self.in_r2(suffix.len()) {
                    self.replace_suffix(suffix.len(), replacement);
                }
            }
            return;
        }
    }

    fn step_4(&mut self) {
        const SUFFIXES: [&[u8]; 18] = [
            b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ant", b"ent",
            b"ion", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize", b"al", b"er",
            b"ic",
        ];
        for suffix in SUFFIXES {
            if !self.ends(suffix) {
                continue;
            }
            if self.in_r2(suffix.len()) {
                let before = self.w.len() - suffix.len();
                if suffix == b"ion" {
                    if before > 0 && matches!(self.w[before - 1], b's' | b't') {
                        self.truncate_by(3);
                    }
                } else {
                    self.truncate_by(suffix.len());
                }
            }
            return;
        }
    }

    fn step_5(&mut self) {
        let n = self.w.len();
        if n == 0 {
            return;
        }
        if self.w[n - 1] == b'e' {
            if self.in_r2(1) || (self.in_r1(1) && !self.short_syllable_at(n - 1)) {
                self.truncate_by(1);
            }
        } else if self.w[n - 1] == b'l' && self.in_r2(1) && n >= 2 && self.w[n - 2] == b'l' {
            self.truncate_by(1);
        }
    }
}

/// Position just past the first non-vowel that follows a vowel, scanning
/// from `from`.
fn after_vowel_nonvowel(w: &[u8], from: usize) -> Option<usize> {
    let v = (from..w.len()).find(|&i| is_vowel(w[i]))?;
    let c = (v + 1..w.len()).find(|&i| !is_vowel(w[i]))?;
    Some(c + 1)
}
