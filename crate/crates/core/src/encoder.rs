//! Dictionary construction, index encoding and cutout pruning.
//!
//! The vocabulary holds the most common stems of the training and
//! validation emails (document frequency: one count per email containing
//! the stem) plus a fixed set of always-present tokens: the tokenizer's
//! special tokens, the pruning glue tokens and the three unknown-word
//! classes `<unkalpha>`, `<unknum>` and `<unk>`.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::Error;
use crate::stem::stem;
use crate::tokenizer::{SpecialToken, Token, TokenSeq};
use crate::Result;

/// Stems ranked below the always-present tokens in the default dictionary
/// (total size 20 + 4980 would undershoot the nominal 5000, so the word
/// budget counts every selected token; see [`build_vocab`]).
pub const DEFAULT_WORD_TARGET: usize = 4995;

/// Default pruning threshold in tokens.
pub const DEFAULT_PRUNE_THRESHOLD: usize = 1000;

/// Unknown-word class tokens, in index order.
const UNKNOWN_TOKENS: [&str; 3] = ["<unkalpha>", "<unknum>", "<unk>"];

const VOCAB_MAGIC: &str = "phishscreen-vocab";
const VOCAB_VERSION: u32 = 1;

/// Immutable stem -> index dictionary with build-time document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: HashMap<String, u32>,
    special: [u32; SpecialToken::ALL.len()],
    unk_alpha: u32,
    unk_num: u32,
    unk: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabEntry {
    pub text: String,
    pub doc_freq: u64,
}

/// An email as a sequence of dictionary indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSeq {
    pub indices: Vec<u32>,
    /// Token count before pruning.
    pub original_len: usize,
}

impl Vocabulary {
    fn from_entries(entries: Vec<VocabEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.text.clone(), i as u32).is_some() {
                return Err(Error::BadFormat(format!("duplicate vocabulary entry {:?}", e.text)));
            }
        }
        let lookup = |text: &str| -> Result<u32> {
            index
                .get(text)
                .copied()
                .ok_or_else(|| Error::BadFormat(format!("vocabulary missing required token {text:?}")))
        };
        let mut special = [0u32; SpecialToken::ALL.len()];
        for (slot, tok) in special.iter_mut().zip(SpecialToken::ALL) {
            *slot = lookup(tok.as_str())?;
        }
        let unk_alpha = lookup(UNKNOWN_TOKENS[0])?;
        let unk_num = lookup(UNKNOWN_TOKENS[1])?;
        let unk = lookup(UNKNOWN_TOKENS[2])?;
        Ok(Vocabulary { entries, index, special, unk_alpha, unk_num, unk })
    }

    /// Effective dictionary size V.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn index_of(&self, text: &str) -> Option<u32> {
        self.index.get(text).copied()
    }

    pub fn special_index(&self, tok: SpecialToken) -> u32 {
        let pos = SpecialToken::ALL.iter().position(|t| *t == tok).expect("closed set");
        self.special[pos]
    }

    /// Index a single token, falling back to the unknown-word classes.
    pub fn encode_token(&self, token: &Token) -> u32 {
        match token {
            Token::Special(s) => self.special_index(*s),
            Token::Word(w) => {
                let stemmed = stem(w);
                if let Some(i) = self.index.get(stemmed.as_ref()) {
                    *i
                } else if w.bytes().all(|b| b.is_ascii_alphabetic()) {
                    self.unk_alpha
                } else if w.bytes().all(|b| b.is_ascii_digit()) {
                    self.unk_num
                } else {
                    self.unk
                }
            }
        }
    }
}

/// Build the dictionary from the training + validation token sequences.
///
/// Counts document frequency of each stem (presence per email, not
/// occurrences), keeps the `word_target` most frequent tokens with ties at
/// the cutoff broken towards the lexicographically smaller stem, and adds
/// the always-present token set. With a rich corpus and the default target
/// of 4,995 the effective size is 5,000.
pub fn build_vocab(corpus: &[TokenSeq], word_target: usize) -> Vocabulary {
    let mut doc_freq: HashMap<String, u64> = HashMap::new();
    for seq in corpus {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let stems: Vec<String> = seq
            .tokens
            .iter()
            .map(|t| match t {
                Token::Special(s) => s.as_str().to_string(),
                Token::Word(w) => stem(w).into_owned(),
            })
            .collect();
        for s in &stems {
            seen.insert(s);
        }
        for s in seen {
            *doc_freq.entry(s.to_string()).or_insert(0) += 1;
        }
    }

    // rank by frequency, ties by stem text
    let mut ranked: Vec<(&String, &u64)> = doc_freq.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(word_target);

    let mut mandatory: Vec<&str> = UNKNOWN_TOKENS.to_vec();
    mandatory.extend(SpecialToken::ALL.iter().map(|t| t.as_str()));

    let mut entries: Vec<VocabEntry> = mandatory
        .iter()
        .map(|text| VocabEntry {
            text: text.to_string(),
            doc_freq: doc_freq.get(*text).copied().unwrap_or(0),
        })
        .collect();
    for (text, freq) in ranked {
        if !mandatory.contains(&text.as_str()) {
            entries.push(VocabEntry { text: text.clone(), doc_freq: *freq });
        }
    }
    Vocabulary::from_entries(entries).expect("construction produces unique entries")
}

/// Encode a token sequence against a vocabulary. Output length equals
/// input length; unknown words map to their class token.
pub fn encode(seq: &TokenSeq, vocab: &Vocabulary) -> IndexSeq {
    let indices: Vec<u32> = seq.tokens.iter().map(|t| vocab.encode_token(t)).collect();
    let original_len = indices.len();
    IndexSeq { indices, original_len }
}

/// Prune an over-long sequence to its beginning, most middle and ending
/// parts, joined by the `<cuts>`/`<cute>` glue tokens.
///
/// Sequences of at most `threshold` tokens pass through unchanged; longer
/// ones come out at exactly `threshold + 2` tokens: the first third, the
/// middle third centred at the sequence midpoint, and the last third.
pub fn cutout_prune(seq: &IndexSeq, threshold: usize, vocab: &Vocabulary) -> IndexSeq {
    assert!(threshold >= 9, "prune threshold must be at least 9");
    let n = seq.indices.len();
    if n <= threshold {
        return seq.clone();
    }
    let side = threshold / 3;
    let mid_len = threshold - 2 * side;
    let mid_start = n / 2 - mid_len / 2;

    let mut indices = Vec::with_capacity(threshold + 2);
    indices.extend_from_slice(&seq.indices[..side]);
    indices.push(vocab.special_index(SpecialToken::CutStart));
    indices.extend_from_slice(&seq.indices[mid_start..mid_start + mid_len]);
    indices.push(vocab.special_index(SpecialToken::CutEnd));
    indices.extend_from_slice(&seq.indices[n - side..]);
    IndexSeq { indices, original_len: seq.original_len }
}

/// Write the vocabulary file: a header with the format version and
/// effective V, then one tab-separated line per entry (index, token text,
/// document frequency). LF line endings, stable order, bit-exact across
/// platforms.
pub fn write_vocab(vocab: &Vocabulary, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    write!(out, "{VOCAB_MAGIC}\t{VOCAB_VERSION}\t{}\n", vocab.len()).expect("vec write");
    for (i, e) in vocab.entries.iter().enumerate() {
        write!(out, "{i}\t{}\t{}\n", e.text, e.doc_freq).expect("vec write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_vocab(path: &Path) -> Result<Vocabulary> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::BadFormat("empty vocabulary file".into()))?
        .map_err(|e| Error::io(path, e))?;
    let mut parts = header.split('\t');
    if parts.next() != Some(VOCAB_MAGIC) {
        return Err(Error::BadFormat("not a vocabulary file".into()));
    }
    let version: u32 = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::BadFormat("bad vocabulary header".into()))?;
    if version != VOCAB_VERSION {
        return Err(Error::BadFormat(format!("unsupported vocabulary version {version}")));
    }
    let count: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::BadFormat("bad vocabulary header".into()))?;

    let mut entries = Vec::with_capacity(count);
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let idx: usize = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::BadFormat(format!("bad index on line {}", lineno + 2)))?;
        let text = fields
            .next()
            .ok_or_else(|| Error::BadFormat(format!("missing token on line {}", lineno + 2)))?;
        let doc_freq: u64 = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::BadFormat(format!("bad frequency on line {}", lineno + 2)))?;
        if idx != entries.len() {
            return Err(Error::BadFormat(format!(
                "non-contiguous index {idx} on line {}",
                lineno + 2
            )));
        }
        entries.push(VocabEntry { text: text.to_string(), doc_freq });
    }
    if entries.len() != count {
        return Err(Error::BadFormat(format!(
            "vocabulary header claims {count} entries, file has {}",
            entries.len()
        )));
    }
    Vocabulary::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::tokenize;

    fn seq_of(words: &[&str]) -> TokenSeq {
        tokenize(&words.join(" "))
    }

    fn tiny_vocab() -> Vocabulary {
        build_vocab(&[seq_of(&["pay", "now", "urgent", "offer"])], 50)
    }

    #[test]
    fn doc_frequency_counts_presence_not_occurrences() {
        let vocab = build_vocab(&[seq_of(&["pay", "pay", "now"])], 7);
        let pay = vocab.index_of("pay").expect("pay in vocab");
        assert_eq!(vocab.entries()[pay as usize].doc_freq, 1);
        assert!(vocab.index_of("now").is_some());
    }

    #[test]
    fn empty_corpus_keeps_mandatory_tokens_only() {
        let vocab = build_vocab(&[], DEFAULT_WORD_TARGET);
        assert_eq!(vocab.len(), 20);
        for tok in SpecialToken::ALL {
            assert!(vocab.index_of(tok.as_str()).is_some());
        }
        for tok in UNKNOWN_TOKENS {
            assert!(vocab.index_of(tok).is_some());
        }
    }

    #[test]
    fn cutoff_tie_broken_lexicographically() {
        // two candidate stems with equal frequency competing for one slot
        let corpus = vec![seq_of(&["zebra", "apple"])];
        // word_target large enough for specials observed + one word slot:
        // <s>, <e> appear in the email; budget 3 leaves room for one stem
        let vocab = build_vocab(&corpus, 3);
        assert!(vocab.index_of("appl").is_some(), "lexicographically smaller stem kept");
        assert!(vocab.index_of("zebra").is_none());
    }

    #[test]
    fn indices_are_a_bijection() {
        let vocab = tiny_vocab();
        let mut seen = std::collections::HashSet::new();
        for e in vocab.entries() {
            let idx = vocab.index_of(&e.text).unwrap();
            assert!(seen.insert(idx));
            assert!((idx as usize) < vocab.len());
        }
        assert_eq!(seen.len(), vocab.len());
    }

    #[test]
    fn encode_known_tokens() {
        let vocab = tiny_vocab();
        let seq = seq_of(&["pay"]);
        let enc = encode(&seq, &vocab);
        assert_eq!(
            enc.indices,
            vec![
                vocab.special_index(SpecialToken::Start),
                vocab.index_of("pay").unwrap(),
                vocab.special_index(SpecialToken::End),
            ]
        );
        assert_eq!(enc.original_len, 3);
    }

    #[test]
    fn unknown_word_classes() {
        let vocab = tiny_vocab();
        let enc = encode(&seq_of(&["zxqv", "77345", "x9z7"]), &vocab);
        assert_eq!(enc.indices[1], vocab.index_of("<unkalpha>").unwrap());
        assert_eq!(enc.indices[2], vocab.index_of("<unknum>").unwrap());
        assert_eq!(enc.indices[3], vocab.index_of("<unk>").unwrap());
    }

    #[test]
    fn encode_stems_before_lookup() {
        let vocab = build_vocab(&[seq_of(&["running"])], 5);
        assert!(vocab.index_of("run").is_some());
        let enc = encode(&seq_of(&["runs"]), &vocab);
        assert_eq!(enc.indices[1], vocab.index_of("run").unwrap());
    }

    fn identity_seq(n: usize) -> IndexSeq {
        IndexSeq { indices: (0..n as u32).collect(), original_len: n }
    }

    #[test]
    fn prune_below_and_at_threshold_unchanged() {
        let vocab = tiny_vocab();
        for n in [3, 999, 1000] {
            let seq = identity_seq(n);
            assert_eq!(cutout_prune(&seq, 1000, &vocab), seq);
        }
    }

    #[test]
    fn prune_1500_at_threshold_1000() {
        let vocab = tiny_vocab();
        let out = cutout_prune(&identity_seq(1500), 1000, &vocab);
        assert_eq!(out.indices.len(), 1002);
        // frozen segment arithmetic: [0..333), <cuts>, [583..917), <cute>, [1167..1500)
        let cuts = vocab.special_index(SpecialToken::CutStart);
        let cute = vocab.special_index(SpecialToken::CutEnd);
        assert_eq!(&out.indices[..333], &(0..333u32).collect::<Vec<_>>()[..]);
        assert_eq!(out.indices[333], cuts);
        assert_eq!(&out.indices[334..668], &(583..917u32).collect::<Vec<_>>()[..]);
        assert_eq!(out.indices[668], cute);
        assert_eq!(&out.indices[669..], &(1167..1500u32).collect::<Vec<_>>()[..]);
        assert_eq!(out.original_len, 1500);
    }

    #[test]
    fn prune_just_over_threshold() {
        let vocab = tiny_vocab();
        let out = cutout_prune(&identity_seq(1001), 1000, &vocab);
        assert_eq!(out.indices.len(), 1002);
        assert_eq!(&out.indices[..333], &(0..333u32).collect::<Vec<_>>()[..]);
        assert_eq!(&out.indices[334..668], &(333..667u32).collect::<Vec<_>>()[..]);
        assert_eq!(&out.indices[669..], &(668..1001u32).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn prune_preserves_delimiters() {
        let vocab = tiny_vocab();
        let seq = encode(&tokenize(&vec!["word"; 2000].join(" ")), &vocab);
        let out = cutout_prune(&seq, 999, &vocab);
        assert_eq!(out.indices.len(), 999 + 2);
        assert_eq!(out.indices[0], vocab.special_index(SpecialToken::Start));
        assert_eq!(*out.indices.last().unwrap(), vocab.special_index(SpecialToken::End));
    }

    #[test]
    fn vocab_file_round_trip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.vocab");
        let b = dir.path().join("b.vocab");

        let corpus1 = vec![seq_of(&["pay", "now"]), seq_of(&["act", "fast", "pay"])];
        let corpus2 = vec![seq_of(&["act", "fast", "pay"]), seq_of(&["pay", "now"])];
        write_vocab(&build_vocab(&corpus1, 100), &a).unwrap();
        write_vocab(&build_vocab(&corpus2, 100), &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

        let loaded = read_vocab(&a).unwrap();
        assert_eq!(loaded, build_vocab(&corpus1, 100));
    }
}
