use std::path::PathBuf;

/// Errors produced by the classification pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input byte sequence was empty.
    #[error("empty input: no bytes to parse")]
    EmptyInput,

    /// An index sequence refers to a token outside the model vocabulary.
    #[error("index {index} out of vocabulary (V = {vocab_size})")]
    IndexOutOfVocab { index: usize, vocab_size: usize },

    /// Model and vocabulary disagree on the vocabulary size.
    #[error("vocabulary mismatch: model expects V = {model}, vocabulary has {vocab} entries")]
    VocabMismatch { model: usize, vocab: usize },

    /// Training diverged.
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    /// A split cannot be formed because one class has no samples.
    #[error("cannot split: class {class:?} has no samples")]
    EmptyClass { class: crate::corpus::Label },

    /// Prediction and label lists differ in length.
    #[error("length mismatch: {predictions} predictions vs {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },

    /// Configuration value failed validation.
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// A model or vocabulary file is malformed.
    #[error("bad file format: {0}")]
    BadFormat(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn invalid_config(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig { field: field.to_string(), reason: reason.into() }
    }
}
