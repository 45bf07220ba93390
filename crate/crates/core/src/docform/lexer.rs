use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Hex(String),
    Num(u64),
    Str(String),
    LParen,
    RParen,
    Colon,
    Define,
    FatArrow,
    Arrow,
    Comma,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Hex(_) => "hex id".into(),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Str(_) => "string".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Define => "`:=`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let err = |line, col, expected: &str| ParseError::Syntax { line, col, expected: expected.into() };
    while i < chars.len() {
        let c = chars[i];
        let (sl, sc) = (line, col);
        let mut adv = |n: usize, i: &mut usize| {
            *i += n;
            col += n as u32;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                adv(1, &mut i);
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                adv(2, &mut i);
                out.push(Spanned { tok: Tok::Arrow, line: sl, col: sc });
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                adv(2, &mut i);
                out.push(Spanned { tok: Tok::FatArrow, line: sl, col: sc });
            }
            ':' if chars.get(i + 1) == Some(&'=') => {
                adv(2, &mut i);
                out.push(Spanned { tok: Tok::Define, line: sl, col: sc });
            }
            '(' | ')' | ':' | ',' | '=' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                };
                adv(1, &mut i);
                out.push(Spanned { tok, line: sl, col: sc });
            }
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_hexdigit() {
                    j += 1;
                }
                if j - start != 64 {
                    return Err(err(sl, sc, "64 hex digits after `#`"));
                }
                let s: String = chars[start..j].iter().collect();
                adv(j - i, &mut i);
                out.push(Spanned { tok: Tok::Hex(s.to_ascii_lowercase()), line: sl, col: sc });
            }
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    s.push(chars[j]);
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '"' {
                    return Err(err(sl, sc, "closing `\"`"));
                }
                adv(j + 1 - i, &mut i);
                out.push(Spanned { tok: Tok::Str(s), line: sl, col: sc });
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s.parse().map_err(|_| err(sl, sc, "number below 2^64"))?;
                adv(j - i, &mut i);
                out.push(Spanned { tok: Tok::Num(n), line: sl, col: sc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || matches!(chars[j], '_' | '\'' | '.'))
                {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                adv(j - i, &mut i);
                out.push(Spanned { tok: Tok::Ident(s), line: sl, col: sc });
            }
            _ => return Err(err(sl, sc, "a token")),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
