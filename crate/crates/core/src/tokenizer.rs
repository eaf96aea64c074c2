//! Plaintext to token sequence conversion.
//!
//! The text is lowercased and restricted to a 61-character alphabet (the
//! characters RFC 3986 allows in a URL, plus the quote character and
//! whitespace). URLs, www-prefixed addresses, email addresses and runs of
//! three or more special characters collapse to single tokens; nine
//! designated punctuation characters become single-character tokens; every
//! other retained punctuation character acts as a word separator. The
//! sequence is wrapped in `<s>` / `<e>` delimiters.

use std::fmt;

/// The nine punctuation characters that map to their own tokens. Other
/// retained punctuation is treated as a word separator.
pub const CHAR_TOKENS: [(char, SpecialToken); 9] = [
    ('.', SpecialToken::Dot),
    ('"', SpecialToken::Quote),
    ('!', SpecialToken::Bang),
    ('?', SpecialToken::QMark),
    ('$', SpecialToken::Dollar),
    ('@', SpecialToken::At),
    ('/', SpecialToken::Slash),
    (':', SpecialToken::Colon),
    ('%', SpecialToken::Pct),
];

/// Retained non-alphanumeric, non-whitespace characters (24 of them; with
/// `a-z`, `0-9` and whitespace the alphabet has 61 characters).
const RETAINED_PUNCT: &str = "-._~:/?#[]@!$&'()*+,;=%\"";

/// Closed set of non-word tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialToken {
    /// Sequence start delimiter `<s>`.
    Start,
    /// Sequence end delimiter `<e>`.
    End,
    /// A URL beginning with `http://` or `https://`.
    Url,
    /// A URL beginning with the informal `www.`.
    Www,
    /// An email address.
    Email,
    /// Three or more consecutive special characters, possibly
    /// whitespace-separated.
    ThreeSpecial,
    Dot,
    Quote,
    Bang,
    QMark,
    Dollar,
    At,
    Slash,
    Colon,
    Pct,
    /// Start-of-cut glue token introduced by pruning.
    CutStart,
    /// End-of-cut glue token introduced by pruning.
    CutEnd,
}

impl SpecialToken {
    /// All special tokens the tokenizer itself can emit, plus the pruning
    /// glue tokens; this is the always-in-vocabulary set.
    pub const ALL: [SpecialToken; 17] = [
        SpecialToken::Start,
        SpecialToken::End,
        SpecialToken::Url,
        SpecialToken::Www,
        SpecialToken::Email,
        SpecialToken::ThreeSpecial,
        SpecialToken::Dot,
        SpecialToken::Quote,
        SpecialToken::Bang,
        SpecialToken::QMark,
        SpecialToken::Dollar,
        SpecialToken::At,
        SpecialToken::Slash,
        SpecialToken::Colon,
        SpecialToken::Pct,
        SpecialToken::CutStart,
        SpecialToken::CutEnd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpecialToken::Start => "<s>",
            SpecialToken::End => "<e>",
            SpecialToken::Url => "<url>",
            SpecialToken::Www => "<www>",
            SpecialToken::Email => "<email>",
            SpecialToken::ThreeSpecial => "<threespecial>",
            SpecialToken::Dot => "<dot>",
            SpecialToken::Quote => "<quote>",
            SpecialToken::Bang => "<bang>",
            SpecialToken::QMark => "<qmark>",
            SpecialToken::Dollar => "<dollar>",
            SpecialToken::At => "<at>",
            SpecialToken::Slash => "<slash>",
            SpecialToken::Colon => "<colon>",
            SpecialToken::Pct => "<pct>",
            SpecialToken::CutStart => "<cuts>",
            SpecialToken::CutEnd => "<cute>",
        }
    }

    pub fn from_str(s: &str) -> Option<SpecialToken> {
        SpecialToken::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

/// One token: a word or a member of the closed special-token set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Word(String),
    Special(SpecialToken),
}

impl Token {
    pub fn text(&self) -> &str {
        match self {
            Token::Word(w) => w,
            Token::Special(s) => s.as_str(),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

/// An email rendered as an ordered token sequence, delimited by `<s>`/`<e>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSeq {
    pub tokens: Vec<Token>,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn is_retained_punct(c: char) -> bool {
    RETAINED_PUNCT.contains(c)
}

fn char_token(c: char) -> Option<SpecialToken> {
    CHAR_TOKENS.iter().find(|(ch, _)| *ch == c).map(|(_, t)| *t)
}

/// Lowercase and restrict to the 61-character alphabet: characters outside
/// it become spaces, whitespace runs collapse to a single space, and the
/// result is trimmed.
pub fn normalize(text: &str) -> String {
    let lowered = text.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    let mut pending_space = false;
    for c in lowered.chars() {
        let keep = c.is_ascii_lowercase() || c.is_ascii_digit() || is_retained_punct(c);
        if keep {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

// Intermediate form: chunk-level replacements already applied, character
// material still raw.
enum Piece {
    Tok(SpecialToken),
    Raw(String),
    Gap,
}

/// Tokenize raw text (normalization is applied internally).
pub fn tokenize(text: &str) -> TokenSeq {
    let norm = normalize(text);
    let mut pieces = Vec::new();
    for chunk in norm.split(' ') {
        if chunk.is_empty() {
            continue;
        }
        split_chunk(chunk, &mut pieces);
        pieces.push(Piece::Gap);
    }

    let mut tokens = vec![Token::Special(SpecialToken::Start)];
    emit_tokens(&pieces, &mut tokens);
    tokens.push(Token::Special(SpecialToken::End));
    TokenSeq { tokens }
}

/// Apply the URL / www / email rules to one whitespace-delimited chunk.
/// A match consumes the maximal non-whitespace run from its prefix; any
/// leading material survives as raw text.
fn split_chunk(chunk: &str, out: &mut Vec<Piece>) {
    if let Some(pos) = chunk.find("http://").or_else(|| chunk.find("https://")) {
        if pos > 0 {
            out.push(Piece::Raw(chunk[..pos].to_string()));
        }
        out.push(Piece::Tok(SpecialToken::Url));
        return;
    }
    if let Some(pos) = find_www(chunk) {
        if pos > 0 {
            out.push(Piece::Raw(chunk[..pos].to_string()));
        }
        out.push(Piece::Tok(SpecialToken::Www));
        return;
    }
    if is_email(chunk) {
        out.push(Piece::Tok(SpecialToken::Email));
        return;
    }
    out.push(Piece::Raw(chunk.to_string()));
}

/// `www.` at the chunk start, or right after a non-alphanumeric character.
fn find_www(chunk: &str) -> Option<usize> {
    let bytes = chunk.as_bytes();
    chunk.match_indices("www.").find_map(|(pos, _)| {
        if pos == 0 || !bytes[pos - 1].is_ascii_alphanumeric() {
            Some(pos)
        } else {
            None
        }
    })
}

/// Exactly one `@` with non-empty sides, and a dot somewhere after the `@`.
fn is_email(chunk: &str) -> bool {
    let mut parts = chunk.splitn(2, '@');
    let local = parts.next().unwrap_or("");
    let Some(domain) = parts.next() else {
        return false;
    };
    !local.is_empty() && !domain.is_empty() && !domain.contains('@') && domain.contains('.')
}

/// Second pass: group runs of three or more special characters (possibly
/// whitespace-separated) into `<threespecial>`, map the nine designated
/// characters to their tokens, use everything else as a word separator.
fn emit_tokens(pieces: &[Piece], out: &mut Vec<Token>) {
    // Flatten into a character stream where chunk-level tokens break runs.
    #[derive(Clone)]
    enum Atom {
        Char(char),
        Space,
        Tok(SpecialToken),
    }
    let mut atoms = Vec::new();
    for piece in pieces {
        match piece {
            Piece::Tok(t) => atoms.push(Atom::Tok(*t)),
            Piece::Raw(s) => atoms.extend(s.chars().map(Atom::Char)),
            Piece::Gap => atoms.push(Atom::Space),
        }
    }

    let mut word = String::new();
    let mut i = 0;
    while i < atoms.len() {
        match &atoms[i] {
            Atom::Tok(t) => {
                flush_word(&mut word, out);
                out.push(Token::Special(*t));
                i += 1;
            }
            Atom::Space => {
                flush_word(&mut word, out);
                i += 1;
            }
            Atom::Char(c) if c.is_ascii_alphanumeric() => {
                word.push(*c);
                i += 1;
            }
            Atom::Char(_) => {
                // maximal run of special characters and interior whitespace
                flush_word(&mut word, out);
                let mut j = i;
                let mut specials = 0usize;
                let mut end = i; // last index holding a special char, + 1
                while j < atoms.len() {
                    match &atoms[j] {
                        Atom::Char(c) if !c.is_ascii_alphanumeric() => {
                            specials += 1;
                            end = j + 1;
                            j += 1;
                        }
                        Atom::Space => j += 1,
                        _ => break,
                    }
                }
                if specials >= 3 {
                    out.push(Token::Special(SpecialToken::ThreeSpecial));
                    i = end;
                } else {
                    // short run: emit the designated single-character tokens
                    for atom in &atoms[i..end] {
                        if let Atom::Char(c) = atom {
                            if let Some(t) = char_token(*c) {
                                out.push(Token::Special(t));
                            }
                        }
                    }
                    i = end;
                }
            }
        }
    }
    flush_word(&mut word, out);
}

fn flush_word(word: &mut String, out: &mut Vec<Token>) {
    if !word.is_empty() {
        out.push(Token::Word(std::mem::take(word)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpecialToken::*;

    fn toks(text: &str) -> Vec<String> {
        tokenize(text).tokens.iter().map(|t| t.text().to_string()).collect()
    }

    #[test]
    fn alphabet_has_61_characters() {
        // 26 letters + 10 digits + 24 retained punctuation + whitespace
        assert_eq!(RETAINED_PUNCT.chars().count(), 24);
        let unique: std::collections::HashSet<char> = RETAINED_PUNCT.chars().collect();
        assert_eq!(unique.len(), 24);
        assert_eq!(26 + 10 + 24 + 1, 61);
    }

    #[test]
    fn normalize_lowercases() {
        assert_eq!(normalize("HeLLo"), "hello");
    }

    #[test]
    fn normalize_replaces_foreign_chars_and_collapses() {
        assert_eq!(normalize("win £100 now"), "win 100 now");
    }

    #[test]
    fn normalize_collapses_whitespace() {
        assert_eq!(normalize("a\tb\n\nc"), "a b c");
    }

    #[test]
    fn empty_input_yields_delimiters_only() {
        assert_eq!(toks(""), vec!["<s>", "<e>"]);
    }

    #[test]
    fn url_token() {
        assert_eq!(
            toks("visit http://x.com/a?b=1 today"),
            vec!["<s>", "visit", "<url>", "today", "<e>"]
        );
    }

    #[test]
    fn https_url_token() {
        assert_eq!(toks("see https://a.example now"), vec!["<s>", "see", "<url>", "now", "<e>"]);
    }

    #[test]
    fn www_token() {
        assert_eq!(toks("go to www.example.com please"), vec!["<s>", "go", "to", "<www>", "please", "<e>"]);
    }

    #[test]
    fn email_token() {
        assert_eq!(
            toks("reply to bob@corp.example"),
            vec!["<s>", "reply", "to", "<email>", "<e>"]
        );
    }

    #[test]
    fn three_special_token() {
        assert_eq!(toks("act now !!!"), vec!["<s>", "act", "now", "<threespecial>", "<e>"]);
    }

    #[test]
    fn three_special_spans_whitespace() {
        assert_eq!(toks("act ! ! ! now"), vec!["<s>", "act", "<threespecial>", "now", "<e>"]);
    }

    #[test]
    fn single_char_tokens() {
        assert_eq!(toks("end."), vec!["<s>", "end", "<dot>", "<e>"]);
        assert_eq!(toks("price: $10"), vec!["<s>", "price", "<colon>", "<dollar>", "10", "<e>"]);
    }

    #[test]
    fn url_precedence_over_three_special() {
        let t = tokenize("http://a.b/???");
        assert_eq!(
            t.tokens,
            vec![Token::Special(Start), Token::Special(Url), Token::Special(End)]
        );
    }

    #[test]
    fn separator_punct_splits_words() {
        assert_eq!(toks("他ello re-send a_b it's"), vec!["<s>", "ello", "re", "send", "a", "b", "it", "s", "<e>"]);
    }

    #[test]
    fn url_with_leading_bracket() {
        assert_eq!(toks("(http://x.com)"), vec!["<s>", "<url>", "<e>"]);
    }

    #[test]
    fn www_not_matched_inside_word() {
        assert_eq!(toks("awww.shucks"), vec!["<s>", "awww", "<dot>", "shucks", "<e>"]);
    }
}
