use super::ExpressError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Punct(char),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is_kw(&self, kw: &str) -> bool {
        matches!(&self.tok, Tok::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.tok == Tok::Punct(c)
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ExpressError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'*') {
            let (start_line, start_col) = (line, col);
            let mut depth = 0usize;
            loop {
                if i >= chars.len() {
                    return Err(ExpressError::Syntax {
                        line: start_line,
                        column: start_col,
                        message: "unterminated remark".into(),
                    });
                }
                if chars[i] == '(' && chars.get(i + 1) == Some(&'*') {
                    depth += 1;
                    advance!();
                    advance!();
                } else if chars[i] == '*' && chars.get(i + 1) == Some(&')') {
                    depth -= 1;
                    advance!();
                    advance!();
                    if depth == 0 {
                        break;
                    }
                } else {
                    advance!();
                }
            }
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let (tl, tc) = (line, col);
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                advance!();
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: tl,
                column: tc,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '.') {
                s.push(chars[i]);
                advance!();
            }
            out.push(Token {
                tok: Tok::Number(s),
                line: tl,
                column: tc,
            });
        } else if c == '\'' {
            advance!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(ExpressError::Syntax {
                        line: tl,
                        column: tc,
                        message: "unterminated string".into(),
                    });
                }
                if chars[i] == '\'' {
                    if chars.get(i + 1) == Some(&'\'') {
                        s.push('\'');
                        advance!();
                        advance!();
                        continue;
                    }
                    advance!();
                    break;
                }
                s.push(chars[i]);
                advance!();
            }
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                column: tc,
            });
        } else {
            out.push(Token {
                tok: Tok::Punct(c),
                line: tl,
                column: tc,
            });
            advance!();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remarks_and_strings() {
        let toks = tokenize("ENTITY (* a (* nested *) remark *) A; -- tail\n 'it''s' 1.5").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("ENTITY".into()),
                Tok::Ident("A".into()),
                Tok::Punct(';'),
                Tok::Str("it's".into()),
                Tok::Number("1.5".into()),
            ]
        );
        assert_eq!(toks[3].line, 2);
    }

    #[test]
    fn unterminated_remark() {
        assert!(tokenize("(* never closed").is_err());
    }
}
