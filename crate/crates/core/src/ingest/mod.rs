//! Email parsing: raw bytes to decoded parts, plaintext extraction and
//! received-timestamp extraction.

mod html;
mod mbox;

pub use html::html_to_text;
pub use mbox::split_mbox;

use chrono::DateTime;
use mailparse::MailHeaderMap;

use crate::error::Error;
use crate::Result;

/// A parsed message: ordered headers plus fully decoded body parts.
#[derive(Debug, Clone)]
pub struct RawEmail {
    /// Header (name, value) pairs in original order. Lookups are
    /// case-insensitive; values have RFC 2047 encoded words decoded.
    pub headers: Vec<(String, String)>,
    pub parts: Vec<BodyPart>,
    pub source_id: String,
}

/// One leaf MIME part with its transfer encoding already undone.
#[derive(Debug, Clone)]
pub struct BodyPart {
    /// Lowercased mime type without parameters, e.g. `text/plain`.
    pub content_type: String,
    /// Lowercased Content-Transfer-Encoding value, empty if absent.
    pub transfer_encoding: String,
    /// Declared charset, if any.
    pub charset: Option<String>,
    /// Body bytes after quoted-printable / base64 decoding.
    pub decoded: Vec<u8>,
}

/// The extracted view the tokenizer consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlainEmail {
    pub text: String,
    /// Seconds since the Unix epoch, UTC.
    pub received_at: Option<i64>,
    pub label: Option<crate::corpus::Label>,
    pub source_id: String,
}

impl RawEmail {
    /// First header with the given name, case-insensitive.
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

/// Parse raw message bytes. Inputs need not be standards-conformant:
/// anything mailparse rejects degrades to a single text/plain part holding
/// the whole input. Only empty input is an error.
pub fn parse_email(bytes: &[u8], source_id: &str) -> Result<RawEmail> {
    if bytes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let parsed = match mailparse::parse_mail(bytes) {
        Ok(p) => p,
        Err(_) => {
            return Ok(RawEmail {
                headers: Vec::new(),
                parts: vec![BodyPart {
                    content_type: "text/plain".into(),
                    transfer_encoding: String::new(),
                    charset: None,
                    decoded: bytes.to_vec(),
                }],
                source_id: source_id.to_string(),
            })
        }
    };

    let headers = parsed
        .headers
        .iter()
        .map(|h| (h.get_key(), h.get_value()))
        .collect();

    let mut parts = Vec::new();
    collect_leaf_parts(&parsed, &mut parts);

    Ok(RawEmail { headers, parts, source_id: source_id.to_string() })
}

fn collect_leaf_parts(mail: &mailparse::ParsedMail<'_>, out: &mut Vec<BodyPart>) {
    if mail.subparts.is_empty() {
        let transfer_encoding = mail
            .get_headers()
            .get_first_value("Content-Transfer-Encoding")
            .map(|v| v.to_ascii_lowercase())
            .unwrap_or_default();
        // raw bytes as a last resort if the declared encoding fails to decode
        let decoded = mail
            .get_body_raw()
            .unwrap_or_else(|_| mail.raw_bytes.to_vec());
        out.push(BodyPart {
            content_type: mail.ctype.mimetype.to_ascii_lowercase(),
            transfer_encoding,
            charset: Some(mail.ctype.charset.to_ascii_lowercase()),
            decoded,
        });
    } else {
        for sub in &mail.subparts {
            collect_leaf_parts(sub, out);
        }
    }
}

/// Decode part bytes to text: UTF-8 when declared or valid, otherwise
/// latin-1 (total, never fails).
fn decode_text(part: &BodyPart) -> String {
    let charset_utf8 = part
        .charset
        .as_deref()
        .map(|c| c.contains("utf-8") || c.contains("utf8"))
        .unwrap_or(false);
    if charset_utf8 || std::str::from_utf8(&part.decoded).is_ok() {
        String::from_utf8_lossy(&part.decoded).into_owned()
    } else {
        part.decoded.iter().map(|&b| b as char).collect()
    }
}

/// Extract the email text: the Subject header (when present and enabled)
/// and the body, preferring text/plain parts. When only text/html parts
/// exist, tags are stripped and entities decoded. Non-text parts are
/// dropped. An email with no text yields an empty string.
pub fn extract_plaintext(raw: &RawEmail, include_subject: bool) -> PlainEmail {
    let plain: Vec<String> = raw
        .parts
        .iter()
        .filter(|p| p.content_type == "text/plain")
        .map(|p| normalize_newlines(&decode_text(p)))
        .collect();
    let body = if plain.is_empty() {
        raw.parts
            .iter()
            .filter(|p| p.content_type == "text/html")
            .map(|p| html_to_text(&decode_text(p)))
            .collect::<Vec<_>>()
            .join("\n")
    } else {
        plain.join("\n")
    };

    let mut text = String::new();
    if include_subject {
        if let Some(subject) = raw.header("Subject") {
            text.push_str(subject.trim());
        }
    }
    let body = body.trim_end();
    if !body.is_empty() {
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(body);
    }

    PlainEmail {
        text,
        received_at: extract_received_time(raw),
        label: None,
        source_id: raw.source_id.clone(),
    }
}

fn normalize_newlines(s: &str) -> String {
    s.replace("\r\n", "\n")
}

/// Latest timestamp over all `Received` / `Received-Date` headers.
/// Unparseable dates are skipped; absent if none parse.
pub fn extract_received_time(raw: &RawEmail) -> Option<i64> {
    raw.headers
        .iter()
        .filter(|(n, _)| {
            n.eq_ignore_ascii_case("Received") || n.eq_ignore_ascii_case("Received-Date")
        })
        .filter_map(|(n, v)| {
            let date_part = if n.eq_ignore_ascii_case("Received") {
                v.rsplit(';').next().unwrap_or(v)
            } else {
                v.as_str()
            };
            parse_rfc2822_date(date_part)
        })
        .max()
}

/// Parse an RFC 2822 date, tolerating surrounding comments and whitespace.
fn parse_rfc2822_date(s: &str) -> Option<i64> {
    let cleaned = strip_comments(s);
    let cleaned = cleaned.split_whitespace().collect::<Vec<_>>().join(" ");
    if cleaned.is_empty() {
        return None;
    }
    DateTime::parse_from_rfc2822(&cleaned)
        .ok()
        .map(|dt| dt.timestamp())
}

fn strip_comments(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse_email(b"", "x"), Err(Error::EmptyInput)));
    }

    #[test]
    fn single_part_plain_body() {
        let raw = parse_email(b"Subject: t\r\n\r\nhello", "x").unwrap();
        assert_eq!(raw.parts.len(), 1);
        assert_eq!(raw.parts[0].decoded, b"hello");
    }

    #[test]
    fn quoted_printable_is_decoded() {
        let eml = b"Content-Type: text/plain\r\nContent-Transfer-Encoding: quoted-printable\r\n\r\n=41=42";
        let raw = parse_email(eml, "x").unwrap();
        assert_eq!(raw.parts[0].decoded, b"AB");
    }

    #[test]
    fn multipart_alternative_decodes_both_parts() {
        let eml = b"MIME-Version: 1.0\r\n\
Content-Type: multipart/alternative; boundary=\"b\"\r\n\r\n\
--b\r\nContent-Type: text/plain\r\nContent-Transfer-Encoding: quoted-printable\r\n\r\npay =6Eow\r\n\
--b\r\nContent-Type: text/html\r\nContent-Transfer-Encoding: base64\r\n\r\nPHA+cGF5IG5vdzwvcD4=\r\n\
--b--\r\n";
        let raw = parse_email(eml, "x").unwrap();
        assert_eq!(raw.parts.len(), 2);
        assert_eq!(raw.parts[0].content_type, "text/plain");
        assert_eq!(raw.parts[0].decoded, b"pay now\r\n");
        assert_eq!(raw.parts[1].content_type, "text/html");
        assert_eq!(raw.parts[1].decoded, b"<p>pay now</p>");
    }

    #[test]
    fn subject_prepended_to_body() {
        let raw = parse_email(b"Subject: Hi\r\n\r\npay now\r\n", "x").unwrap();
        let plain = extract_plaintext(&raw, true);
        assert_eq!(plain.text, "Hi\npay now");
    }

    #[test]
    fn subject_flag_off_keeps_body_only() {
        let raw = parse_email(b"Subject: Hi\r\n\r\npay now\r\n", "x").unwrap();
        let plain = extract_plaintext(&raw, false);
        assert_eq!(plain.text, "pay now");
    }

    #[test]
    fn html_only_body_is_stripped() {
        let eml = b"Content-Type: text/html\r\n\r\n<p>Click <b>here</b></p>";
        let raw = parse_email(eml, "x").unwrap();
        assert_eq!(extract_plaintext(&raw, true).text, "Click here");
    }

    #[test]
    fn attachment_only_email_yields_subject_only() {
        let eml = b"Subject: Hi\r\nMIME-Version: 1.0\r\n\
Content-Type: multipart/mixed; boundary=\"b\"\r\n\r\n\
--b\r\nContent-Type: image/png\r\nContent-Transfer-Encoding: base64\r\n\r\naWhhdGVwbmdz\r\n\
--b--\r\n";
        let raw = parse_email(eml, "x").unwrap();
        assert_eq!(extract_plaintext(&raw, true).text, "Hi");
    }

    #[test]
    fn received_time_takes_the_maximum() {
        let eml = b"Received: from a by b; Mon, 1 Jan 2007 00:00:00 +0000\r\n\
Received: from c by d; Mon, 5 Mar 2007 10:00:00 +0000\r\n\r\nbody";
        let raw = parse_email(eml, "x").unwrap();
        let expected = DateTime::parse_from_rfc2822("Mon, 5 Mar 2007 10:00:00 +0000")
            .unwrap()
            .timestamp();
        assert_eq!(extract_received_time(&raw), Some(expected));
    }

    #[test]
    fn no_received_headers_is_absent() {
        let raw = parse_email(b"Subject: t\r\n\r\nbody", "x").unwrap();
        assert_eq!(extract_received_time(&raw), None);
    }

    #[test]
    fn malformed_dates_are_skipped() {
        let eml = b"Received: from a by b; not a date at all\r\n\
Received: from c by d; Tue, 6 Mar 2007 10:00:00 +0000\r\n\r\nbody";
        let raw = parse_email(eml, "x").unwrap();
        let expected = DateTime::parse_from_rfc2822("Tue, 6 Mar 2007 10:00:00 +0000")
            .unwrap()
            .timestamp();
        assert_eq!(extract_received_time(&raw), Some(expected));
    }

    #[test]
    fn received_date_with_comment_parses() {
        let eml = b"Received: by mail.example (Postfix); Tue, 6 Mar 2007 10:00:00 +0000 (GMT)\r\n\r\nx";
        let raw = parse_email(eml, "x").unwrap();
        assert!(extract_received_time(&raw).is_some());
    }

    #[test]
    fn extraction_is_idempotent() {
        let eml = b"Subject: s\r\n\r\nsome body text";
        let a = extract_plaintext(&parse_email(eml, "x").unwrap(), true);
        let b = extract_plaintext(&parse_email(eml, "x").unwrap(), true);
        assert_eq!(a, b);
    }
}
