//! Minimal HTML to text conversion for email bodies.
//!
//! Tags are dropped; block-level tags become a single space so word
//! boundaries survive, inline tags vanish so words split across markup
//! stay whole. Script, style and comment contents are removed. Character
//! entities are decoded. The result has collapsed whitespace.

/// Tags that do not break words when removed.
const INLINE_TAGS: [&str; 22] = [
    "a", "abbr", "acronym", "b", "bdo", "big", "cite", "code", "em", "font", "i", "ins",
    "kbd", "label", "q", "s", "small", "span", "strike", "strong", "sub", "sup",
];

pub fn html_to_text(html: &str) -> String {
    let mut out = String::with_capacity(html.len() / 2);
    let mut rest = html;
    while let Some(c) = rest.chars().next() {
        match c {
            '<' => {
                if starts_with_ci(rest, "<script") {
                    rest = skip_past_ci(rest, "</script>");
                    out.push(' ');
                } else if starts_with_ci(rest, "<style") {
                    rest = skip_past_ci(rest, "</style>");
                    out.push(' ');
                } else if rest.starts_with("<!--") {
                    rest = skip_past_ci(rest, "-->");
                    out.push(' ');
                } else if let Some(end) = rest.find('>') {
                    if !is_inline_tag(&rest[1..end]) {
                        out.push(' ');
                    }
                    rest = &rest[end + 1..];
                } else {
                    break; // unterminated tag: drop the rest
                }
            }
            '&' => {
                let (text, consumed) = decode_entity(rest);
                out.push_str(text.as_ref());
                rest = &rest[consumed..];
            }
            c => {
                out.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_inline_tag(tag: &str) -> bool {
    let name: String = tag
        .trim_start_matches('/')
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    INLINE_TAGS.contains(&name.as_str())
}

fn starts_with_ci(s: &str, prefix: &str) -> bool {
    s.len() >= prefix.len()
        && s.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes())
}

/// Skip past the next case-insensitive occurrence of `close` (an ASCII
/// marker, so byte positions stay on char boundaries).
fn skip_past_ci<'a>(s: &'a str, close: &str) -> &'a str {
    let hay = s.as_bytes();
    let needle = close.as_bytes();
    let mut i = 0;
    while i + needle.len() <= hay.len() {
        if hay[i..i + needle.len()].eq_ignore_ascii_case(needle) {
            return &s[i + needle.len()..];
        }
        i += 1;
    }
    ""
}

/// Decode one entity at the start of `s` (which begins with `&`). Returns
/// the replacement text and the number of bytes consumed; undecodable
/// input passes the ampersand through.
fn decode_entity(s: &str) -> (std::borrow::Cow<'static, str>, usize) {
    use std::borrow::Cow;
    let semi = s.bytes().take(12).position(|b| b == b';');
    let Some(semi) = semi else {
        return (Cow::Borrowed("&"), 1);
    };
    let name = &s[1..semi];
    let decoded = match name {
        "amp" => Some('&'),
        "lt" => Some('<'),
        "gt" => Some('>'),
        "quot" => Some('"'),
        "apos" => Some('\''),
        "nbsp" => Some(' '),
        "copy" => Some('\u{a9}'),
        "reg" => Some('\u{ae}'),
        "trade" => Some('\u{2122}'),
        "pound" => Some('\u{a3}'),
        "euro" => Some('\u{20ac}'),
        "yen" => Some('\u{a5}'),
        "cent" => Some('\u{a2}'),
        "mdash" => Some('\u{2014}'),
        "ndash" => Some('\u{2013}'),
        "hellip" => Some('\u{2026}'),
        "lsquo" => Some('\u{2018}'),
        "rsquo" => Some('\u{2019}'),
        "ldquo" => Some('\u{201c}'),
        "rdquo" => Some('\u{201d}'),
        "middot" => Some('\u{b7}'),
        "bull" => Some('\u{2022}'),
        _ => decode_numeric_entity(name),
    };
    match decoded {
        Some(c) => (Cow::Owned(c.to_string()), semi + 1),
        None => (Cow::Borrowed("&"), 1),
    }
}

fn decode_numeric_entity(name: &str) -> Option<char> {
    let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
        u32::from_str_radix(hex, 16).ok()?
    } else if let Some(dec) = name.strip_prefix('#') {
        dec.parse().ok()?
    } else {
        return None;
    };
    char::from_u32(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_simple_markup() {
        assert_eq!(html_to_text("<p>Click <b>here</b></p>"), "Click here");
    }

    #[test]
    fn inline_tags_do_not_split_words() {
        assert_eq!(html_to_text("ver<b>i</b>fy"), "verify");
    }

    #[test]
    fn block_tags_separate_words() {
        assert_eq!(html_to_text("<div>one</div><div>two</div>"), "one two");
        assert_eq!(html_to_text("line<br>break"), "line break");
    }

    #[test]
    fn entities_are_decoded() {
        assert_eq!(html_to_text("a &amp; b &lt;now&gt;"), "a & b <now>");
        assert_eq!(html_to_text("&#65;&#x42;"), "AB");
        assert_eq!(html_to_text("&bogus; stays"), "&bogus; stays");
    }

    #[test]
    fn script_and_style_contents_removed() {
        assert_eq!(
            html_to_text("<p>hi</p><script>var x = 1;</script><style>p{}</style>bye"),
            "hi bye"
        );
    }

    #[test]
    fn unterminated_tag_drops_tail() {
        assert_eq!(html_to_text("ok <a href="), "ok");
    }

    #[test]
    fn multibyte_text_survives() {
        assert_eq!(html_to_text("<p>prix : 100\u{20ac}</p>"), "prix : 100\u{20ac}");
    }
}
