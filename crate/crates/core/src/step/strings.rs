//! String escapes of the clear text encoding.

use super::StepError;

/// Decode the text between the quotes of a STEP string.
///
/// Handles `''`, `\\`, `\X\hh`, `\X2\…\X0\`, `\X4\…\X0\`, `\S\c` and the
/// `\PA\` page directive. Other code pages are rejected because their
/// tables are not carried here.
pub fn decode_string(raw: &str) -> Result<String, StepError> {
    let bytes = raw.as_bytes();
    let mut out = String::with_capacity(raw.len());
    let mut i = 0;
    let bad = |esc: &str| StepError::BadEscape(esc.to_string());
    while i < bytes.len() {
        match bytes[i] {
            b'\'' => {
                if bytes.get(i + 1) == Some(&b'\'') {
                    out.push('\'');
                    i += 2;
                } else {
                    return Err(bad("'"));
                }
            }
            b'\\' => {
                let rest = &raw[i..];
                if rest.starts_with("\\\\") {
                    out.push('\\');
                    i += 2;
                } else if let Some(hex) = rest.strip_prefix("\\X\\") {
                    let h = hex.get(..2).ok_or_else(|| bad(&head(rest, 5)))?;
                    let v = u8::from_str_radix(h, 16).map_err(|_| bad(&format!("\\X\\{h}")))?;
                    out.push(v as char);
                    i += 5;
                } else if let Some(body) = rest.strip_prefix("\\X2\\") {
                    let end = body
                        .find("\\X0\\")
                        .ok_or_else(|| bad("\\X2\\ without \\X0\\"))?;
                    out.push_str(
                        &decode_utf16_hex(&body[..end])
                            .ok_or_else(|| bad(&format!("\\X2\\{}", &body[..end])))?,
                    );
                    i += 4 + end + 4;
                } else if let Some(body) = rest.strip_prefix("\\X4\\") {
                    let end = body
                        .find("\\X0\\")
                        .ok_or_else(|| bad("\\X4\\ without \\X0\\"))?;
                    out.push_str(
                        &decode_ucs4_hex(&body[..end])
                            .ok_or_else(|| bad(&format!("\\X4\\{}", &body[..end])))?,
                    );
                    i += 4 + end + 4;
                } else if let Some(after) = rest.strip_prefix("\\S\\") {
                    let c = after.as_bytes().first().ok_or_else(|| bad("\\S\\"))?;
                    if !(0x20..0x7F).contains(c) {
                        return Err(bad("\\S\\"));
                    }
                    out.push(char::from(c + 0x80));
                    i += 4;
                } else if rest.starts_with("\\PA\\") {
                    i += 4;
                } else if rest.len() >= 4
                    && rest.as_bytes()[1] == b'P'
                    && rest.as_bytes()[3] == b'\\'
                {
                    return Err(bad(&rest[..4]));
                } else {
                    return Err(bad(&head(rest, 4)));
                }
            }
            _ => {
                let c = raw[i..].chars().next().expect("char boundary");
                out.push(c);
                i += c.len_utf8();
            }
        }
    }
    Ok(out)
}

fn head(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}

fn decode_utf16_hex(hex: &str) -> Option<String> {
    if !hex.len().is_multiple_of(4) || hex.is_empty() {
        return None;
    }
    let units: Option<Vec<u16>> = (0..hex.len())
        .step_by(4)
        .map(|k| u16::from_str_radix(hex.get(k..k + 4)?, 16).ok())
        .collect();
    char::decode_utf16(units?)
        .collect::<Result<String, _>>()
        .ok()
}

fn decode_ucs4_hex(hex: &str) -> Option<String> {
    if !hex.len().is_multiple_of(8) || hex.is_empty() {
        return None;
    }
    (0..hex.len())
        .step_by(8)
        .map(|k| char::from_u32(u32::from_str_radix(hex.get(k..k + 8)?, 16).ok()?))
        .collect()
}

/// Encode text so that [`decode_string`] returns it unchanged. The result
/// is plain ASCII.
pub fn encode_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut wide: Vec<u16> = Vec::new();
    let flush = |wide: &mut Vec<u16>, out: &mut String| {
        if !wide.is_empty() {
            out.push_str("\\X2\\");
            for u in wide.drain(..) {
                out.push_str(&format!("{u:04X}"));
            }
            out.push_str("\\X0\\");
        }
    };
    for c in text.chars() {
        if (c as u32) > 0xFF {
            let mut buf = [0u16; 2];
            wide.extend_from_slice(c.encode_utf16(&mut buf));
            continue;
        }
        flush(&mut wide, &mut out);
        match c {
            '\'' => out.push_str("''"),
            '\\' => out.push_str("\\\\"),
            ' '..='~' => out.push(c),
            _ => out.push_str(&format!("\\X\\{:02X}", c as u32)),
        }
    }
    flush(&mut wide, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latin1_escape() {
        assert_eq!(
            decode_string("Mur par d\\X\\E9faut").unwrap(),
            "Mur par défaut"
        );
        assert_eq!(decode_string("").unwrap(), "");
        assert_eq!(decode_string("it''s \\\\ ok").unwrap(), "it's \\ ok");
    }

    #[test]
    fn wide_escapes() {
        assert_eq!(decode_string("\\X2\\53C2\\X0\\").unwrap(), "参");
        assert_eq!(decode_string("\\X2\\D83DDE00\\X0\\").unwrap(), "😀");
        assert_eq!(decode_string("\\X4\\0001F600\\X0\\").unwrap(), "😀");
        assert_eq!(decode_string("\\S\\i").unwrap(), "é");
    }

    #[test]
    fn malformed_escapes_named() {
        for raw in [
            "\\X\\G1",
            "\\X2\\53C",
            "\\X2\\53C2",
            "\\Q\\",
            "\\PB\\x",
            "\\X2\\D83D\\X0\\",
        ] {
            let err = decode_string(raw).unwrap_err();
            assert!(matches!(err, StepError::BadEscape(_)), "{raw}: {err:?}");
        }
    }

    #[test]
    fn encode_is_ascii_and_inverts() {
        let s = "Mur par défaut 参照記号 😀 it's \\ \u{7}";
        let e = encode_string(s);
        assert!(e.is_ascii());
        assert_eq!(decode_string(&e).unwrap(), s);
    }
}
