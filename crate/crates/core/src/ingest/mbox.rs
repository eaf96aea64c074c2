//! mbox splitting: messages are delimited by "From " at the start of a
//! line. The envelope line itself is not part of the message.

/// Split an mbox file into its messages, returning each message's byte
/// offset (of its envelope line) and content. Input that does not start
/// with an envelope line is treated as a single message at offset 0.
pub fn split_mbox(bytes: &[u8]) -> Vec<(usize, &[u8])> {
    if !bytes.starts_with(b"From ") {
        return if bytes.is_empty() { Vec::new() } else { vec![(0, bytes)] };
    }
    let mut starts = vec![0usize];
    for i in 0..bytes.len() {
        if bytes[i] == b'\n' && bytes[i + 1..].starts_with(b"From ") {
            starts.push(i + 1);
        }
    }
    starts.push(bytes.len());

    let mut out = Vec::with_capacity(starts.len() - 1);
    for w in starts.windows(2) {
        let (begin, end) = (w[0], w[1]);
        let chunk = &bytes[begin..end];
        // drop the "From ..." envelope line
        let body_start = chunk
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| p + 1)
            .unwrap_or(chunk.len());
        let body = &chunk[body_start..];
        if !body.is_empty() {
            out.push((begin, body));
        }
    }
    out
}

/// True when the bytes look like an mbox file rather than a single
/// message: mbox files open with an envelope line.
pub fn looks_like_mbox(bytes: &[u8]) -> bool {
    bytes.starts_with(b"From ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MBOX: &[u8] = b"From alice@example Mon Jan  1 00:00:00 2007\n\
Subject: one\n\nfirst body\n\
From bob@example Tue Jan  2 00:00:00 2007\n\
Subject: two\n\nsecond body\n";

    #[test]
    fn splits_messages_on_envelope_lines() {
        let msgs = split_mbox(MBOX);
        assert_eq!(msgs.len(), 2);
        assert!(msgs[0].1.starts_with(b"Subject: one"));
        assert!(msgs[1].1.starts_with(b"Subject: two"));
        assert_eq!(msgs[0].0, 0);
        assert!(msgs[1].0 > 0);
    }

    #[test]
    fn non_mbox_input_is_one_message() {
        let msgs = split_mbox(b"Subject: x\n\nbody");
        assert_eq!(msgs.len(), 1);
        assert_eq!(msgs[0].0, 0);
    }

    #[test]
    fn from_inside_body_does_not_split() {
        let mbox = b"From a@b Mon Jan  1 00:00:00 2007\nSubject: s\n\nquote: From my desk\n";
        // "From " mid-line must not split; only line-initial "From " does
        let msgs = split_mbox(mbox);
        assert_eq!(msgs.len(), 1);
    }

    #[test]
    fn empty_input_has_no_messages() {
        assert!(split_mbox(b"").is_empty());
    }
}
