//! Dataset manifest reading and the normalized corpus file.
//!
//! The manifest lists one record per email source: a path (an .eml file or
//! an mbox containing many messages), a label, and an optional timestamp
//! override. Ingestion produces the normalized corpus: one CSV record per
//! email with source id, label, received time (ISO-8601 or empty) and the
//! extracted plaintext escaped onto a single line.

use std::fmt;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ingest::{extract_plaintext, looks_like_mbox, parse_email, split_mbox, PlainEmail};
use crate::Result;

/// Class label; phish is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Ham,
    Phish,
}

impl Label {
    pub fn parse(s: &str) -> Result<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ham" => Ok(Label::Ham),
            "phish" | "phishing" => Ok(Label::Phish),
            other => Err(Error::BadFormat(format!("unknown label {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Ham => "ham",
            Label::Phish => "phish",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One labeled, extracted email.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRecord {
    pub source_id: String,
    pub label: Label,
    pub received_at: Option<i64>,
    pub text: String,
}

/// One manifest row.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
    pub timestamp_override: Option<i64>,
}

/// Outcome of ingesting a manifest: the corpus plus per-record warnings
/// for sources that could not be read.
#[derive(Debug)]
pub struct IngestReport {
    pub records: Vec<CorpusRecord>,
    pub warnings: Vec<String>,
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::BadFormat(format!("cannot read manifest {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::BadFormat(format!("manifest row {}: {e}", i + 2)))?;
        let file = row
            .get(0)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::BadFormat(format!("manifest row {}: missing path", i + 2)))?;
        let label = Label::parse(row.get(1).unwrap_or(""))
            .map_err(|e| Error::BadFormat(format!("manifest row {}: {e}", i + 2)))?;
        let timestamp_override = match row.get(2).map(str::trim) {
            None | Some("") => None,
            Some(ts) => Some(parse_iso8601(ts).ok_or_else(|| {
                Error::BadFormat(format!("manifest row {}: bad timestamp {ts:?}", i + 2))
            })?),
        };
        // relative paths resolve against the manifest location
        let file_path = {
            let p = Path::new(file);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                path.parent().unwrap_or_else(|| Path::new(".")).join(p)
            }
        };
        entries.push(ManifestEntry { path: file_path, label, timestamp_override });
    }
    Ok(entries)
}

/// Ingest every source named by the manifest. Unreadable sources become
/// warnings rather than failures; the error case is a manifest whose
/// records all fail.
pub fn ingest_manifest(manifest_path: &Path, include_subject: bool) -> Result<IngestReport> {
    let entries = read_manifest(manifest_path)?;
    if entries.is_empty() {
        return Err(Error::BadFormat(format!(
            "manifest {} lists no records",
            manifest_path.display()
        )));
    }
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for entry in &entries {
        let bytes = match std::fs::read(&entry.path) {
            Ok(b) => b,
            Err(e) => {
                warnings.push(format!("{}: {e}", entry.path.display()));
                continue;
            }
        };
        if looks_like_mbox(&bytes) {
            for (offset, message) in split_mbox(&bytes) {
                let source_id = format!("{}:{offset}", entry.path.display());
                match email_record(message, &source_id, entry, include_subject) {
                    Ok(r) => records.push(r),
                    Err(e) => warnings.push(format!("{source_id}: {e}")),
                }
            }
        } else {
            let source_id = entry.path.display().to_string();
            match email_record(&bytes, &source_id, entry, include_subject) {
                Ok(r) => records.push(r),
                Err(e) => warnings.push(format!("{source_id}: {e}")),
            }
        }
    }
    if records.is_empty() {
        return Err(Error::BadFormat(format!(
            "no record of manifest {} could be ingested",
            manifest_path.display()
        )));
    }
    Ok(IngestReport { records, warnings })
}

fn email_record(
    bytes: &[u8],
    source_id: &str,
    entry: &ManifestEntry,
    include_subject: bool,
) -> Result<CorpusRecord> {
    let raw = parse_email(bytes, source_id)?;
    let PlainEmail { text, received_at, .. } = extract_plaintext(&raw, include_subject);
    Ok(CorpusRecord {
        source_id: source_id.to_string(),
        label: entry.label,
        received_at: entry.timestamp_override.or(received_at),
        text,
    })
}

pub fn write_corpus(records: &[CorpusRecord], path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::BadFormat(format!("cannot write corpus {}: {e}", path.display())))?;
    writer
        .write_record(["source_id", "label", "received_at", "text"])
        .map_err(|e| Error::BadFormat(e.to_string()))?;
    for r in records {
        let ts = r.received_at.map(format_iso8601).unwrap_or_default();
        writer
            .write_record([&r.source_id, r.label.as_str(), &ts, &escape_text(&r.text)])
            .map_err(|e| Error::BadFormat(e.to_string()))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_corpus(path: &Path) -> Result<Vec<CorpusRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::BadFormat(format!("cannot read corpus {}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::BadFormat(format!("corpus row {}: {e}", i + 2)))?;
        if row.len() < 4 {
            return Err(Error::BadFormat(format!("corpus row {}: expected 4 fields", i + 2)));
        }
        let received_at = match row.get(2).unwrap_or("") {
            "" => None,
            ts => Some(parse_iso8601(ts).ok_or_else(|| {
                Error::BadFormat(format!("corpus row {}: bad timestamp {ts:?}", i + 2))
            })?),
        };
        records.push(CorpusRecord {
            source_id: row.get(0).unwrap_or("").to_string(),
            label: Label::parse(row.get(1).unwrap_or(""))?,
            received_at,
            text: unescape_text(row.get(3).unwrap_or("")),
        });
    }
    Ok(records)
}

pub fn format_iso8601(ts: i64) -> String {
    DateTime::<Utc>::from_timestamp(ts, 0)
        .map(|dt| dt.format("%Y-%m-%dT%H:%M:%SZ").to_string())
        .unwrap_or_default()
}

pub fn parse_iso8601(s: &str) -> Option<i64> {
    DateTime::parse_from_rfc3339(s.trim())
        .ok()
        .map(|dt| dt.timestamp())
}

/// Escape text onto a single line: backslash, newline, carriage return and
/// tab get backslash escapes.
fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}
