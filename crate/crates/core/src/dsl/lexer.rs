use std::fmt;

use thiserror::Error;

/// A source location. Lines and columns count from 1; columns count chars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
    pub offset: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1, offset: 0 };
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Open,
    Fun,
    Val,
    Let,
    In,
    End,
    If,
    Then,
    Else,
    AndAlso,
    OrElse,
    Div,
    Mod,
    True,
    False,
}

impl Keyword {
    pub const ALL: [Keyword; 15] = [
        Self::Open,
        Self::Fun,
        Self::Val,
        Self::Let,
        Self::In,
        Self::End,
        Self::If,
        Self::Then,
        Self::Else,
        Self::AndAlso,
        Self::OrElse,
        Self::Div,
        Self::Mod,
        Self::True,
        Self::False,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Open => "open",
            Self::Fun => "fun",
            Self::Val => "val",
            Self::Let => "let",
            Self::In => "in",
            Self::End => "end",
            Self::If => "if",
            Self::Then => "then",
            Self::Else => "else",
            Self::AndAlso => "andalso",
            Self::OrElse => "orelse",
            Self::Div => "div",
            Self::Mod => "mod",
            Self::True => "true",
            Self::False => "false",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Punct {
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Tilde,
}

impl Punct {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LParen => "(",
            Self::RParen => ")",
            Self::Comma => ",",
            Self::Semi => ";",
            Self::Eq => "=",
            Self::Ne => "<>",
            Self::Lt => "<",
            Self::Le => "<=",
            Self::Gt => ">",
            Self::Ge => ">=",
            Self::Plus => "+",
            Self::Minus => "-",
            Self::Star => "*",
            Self::Tilde => "~",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    /// Magnitude only; `~` is a separate token so `~9223372036854775808`
    /// can still be represented.
    Int(u64),
    Str(String),
    Punct(Punct),
}

/// Coarse token classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenClass {
    Keyword,
    Identifier,
    Integer,
    Punct,
    String,
}

impl TokenKind {
    pub fn class(&self) -> TokenClass {
        match self {
            Self::Keyword(_) => TokenClass::Keyword,
            Self::Ident(_) => TokenClass::Identifier,
            Self::Int(_) => TokenClass::Integer,
            Self::Str(_) => TokenClass::String,
            Self::Punct(_) => TokenClass::Punct,
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Keyword(k) => write!(f, "`{}`", k.as_str()),
            Self::Ident(s) => write!(f, "identifier `{s}`"),
            Self::Int(n) => write!(f, "integer `{n}`"),
            Self::Str(_) => f.write_str("string literal"),
            Self::Punct(p) => write!(f, "`{}`", p.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexErrorKind {
    #[error("unterminated comment")]
    UnterminatedComment,
    #[error("unterminated string literal")]
    UnterminatedString,
    #[error("invalid escape sequence in string literal")]
    BadEscape,
    #[error("integer literal `{0}` is too large")]
    IntOverflow(String),
    #[error("illegal character {0:?}")]
    IllegalChar(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct LexError {
    pub pos: Pos,
    pub kind: LexErrorKind,
}

struct Cursor<'a> {
    src: &'a str,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }

    fn skip_comment(&mut self, start: Pos) -> Result<(), LexError> {
        self.bump();
        self.bump();
        let mut depth = 1u32;
        while depth > 0 {
            match self.bump() {
                None => return Err(LexError { pos: start, kind: LexErrorKind::UnterminatedComment }),
                Some('(') if self.peek() == Some('*') => {
                    self.bump();
                    depth += 1;
                }
                Some('*') if self.peek() == Some(')') => {
                    self.bump();
                    depth -= 1;
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn string(&mut self, start: Pos) -> Result<String, LexError> {
        self.bump();
        let mut out = String::new();
        loop {
            let here = self.pos;
            match self.bump() {
                None | Some('\n') => return Err(LexError { pos: start, kind: LexErrorKind::UnterminatedString }),
                Some('"') => return Ok(out),
                Some('\\') => {
                    let bad = LexError { pos: here, kind: LexErrorKind::BadEscape };
                    match self.bump() {
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('\\') => out.push('\\'),
                        Some('"') => out.push('"'),
                        Some(d) if d.is_ascii_digit() => {
                            let mut code = d.to_digit(10).unwrap();
                            for _ in 0..2 {
                                let d = self.bump().and_then(|c| c.to_digit(10)).ok_or(bad.clone())?;
                                code = code * 10 + d;
                            }
                            out.push(char::from_u32(code).filter(|c| c.is_ascii()).ok_or(bad)?);
                        }
                        _ => return Err(bad),
                    }
                }
                Some(c) => out.push(c),
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits source text into tokens, dropping whitespace and comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { src, pos: Pos::START };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '(' if cur.peek2() == Some('*') => {
                cur.skip_comment(start)?;
                continue;
            }
            '"' => TokenKind::Str(cur.string(start)?),
            c if c.is_ascii_digit() => {
                cur.eat_while(|c| c.is_ascii_digit());
                let digits = &src[start.offset..cur.pos.offset];
                let n = digits
                    .parse()
                    .map_err(|_| LexError { pos: start, kind: LexErrorKind::IntOverflow(digits.to_string()) })?;
                TokenKind::Int(n)
            }
            c if is_ident_start(c) => {
                cur.eat_while(is_ident_char);
                let word = &src[start.offset..cur.pos.offset];
                Keyword::from_word(word).map_or_else(|| TokenKind::Ident(word.to_string()), TokenKind::Keyword)
            }
            _ => {
                cur.bump();
                let next = cur.peek();
                let p = match (c, next) {
                    ('<', Some('>')) => Punct::Ne,
                    ('<', Some('=')) => Punct::Le,
                    ('>', Some('=')) => Punct::Ge,
                    ('(', _) => Punct::LParen,
                    (')', _) => Punct::RParen,
                    (',', _) => Punct::Comma,
                    (';', _) => Punct::Semi,
                    ('=', _) => Punct::Eq,
                    ('<', _) => Punct::Lt,
                    ('>', _) => Punct::Gt,
                    ('+', _) => Punct::Plus,
                    ('-', _) => Punct::Minus,
                    ('*', _) => Punct::Star,
                    ('~', _) => Punct::Tilde,
                    _ => return Err(LexError { pos: start, kind: LexErrorKind::IllegalChar(c) }),
                };
                if p.as_str().len() == 2 {
                    cur.bump();
                }
                TokenKind::Punct(p)
            }
        };
        tokens.push(Token { kind, lexeme: src[start.offset..cur.pos.offset].to_string(), pos: start });
    }
    Ok(tokens)
}

/// Position just past the last character, used for end-of-input errors.
pub fn end_pos(src: &str) -> Pos {
    let mut cur = Cursor { src, pos: Pos::START };
    while cur.bump().is_some() {}
    cur.pos
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn put_call() {
        let toks = tokenize("put2D (37,28) RED (0,0);").unwrap();
        assert_eq!(toks.len(), 13);
        assert_eq!(toks.last().unwrap().kind, TokenKind::Punct(Punct::Semi));
        assert_eq!(toks[0].kind, TokenKind::Ident("put2D".into()));
        assert_eq!(toks[2].kind, TokenKind::Int(37));
        assert_eq!(toks[6].pos, Pos { line: 1, column: 15, offset: 14 });
    }

    #[test]
    fn comments_vanish_and_nest() {
        assert!(kinds("(* generated by Bricklayer Lite version 0.9 *)").is_empty());
        assert_eq!(kinds("(* a (* b *) c *) x"), vec![TokenKind::Ident("x".into())]);
    }

    #[test]
    fn unterminated_comment() {
        let err = tokenize("(* unterminated").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::UnterminatedComment);
        assert_eq!(err.pos.line, 1);
        let err = tokenize("x\n  (* (* *)").unwrap_err();
        assert_eq!((err.pos.line, err.pos.column), (2, 3));
    }

    #[test]
    fn strings() {
        assert_eq!(kinds(r#""fl\"ag\n\065""#), vec![TokenKind::Str("fl\"ag\nA".into())]);
        assert_eq!(tokenize("\"open").unwrap_err().kind, LexErrorKind::UnterminatedString);
        assert_eq!(tokenize(r#""\q""#).unwrap_err().kind, LexErrorKind::BadEscape);
    }

    #[test]
    fn operators_and_keywords() {
        use Punct::*;
        assert_eq!(
            kinds("a<>b<=c>=d<e>f~1 andalso x div y"),
            vec![
                TokenKind::Ident("a".into()),
                TokenKind::Punct(Ne),
                TokenKind::Ident("b".into()),
                TokenKind::Punct(Le),
                TokenKind::Ident("c".into()),
                TokenKind::Punct(Ge),
                TokenKind::Ident("d".into()),
                TokenKind::Punct(Lt),
                TokenKind::Ident("e".into()),
                TokenKind::Punct(Gt),
                TokenKind::Ident("f".into()),
                TokenKind::Punct(Tilde),
                TokenKind::Int(1),
                TokenKind::Keyword(Keyword::AndAlso),
                TokenKind::Ident("x".into()),
                TokenKind::Keyword(Keyword::Div),
                TokenKind::Ident("y".into()),
            ]
        );
    }

    #[test]
    fn illegal_character_position() {
        let err = tokenize("build2D (64,64);\nput2D # x").unwrap_err();
        assert_eq!(err.kind, LexErrorKind::IllegalChar('#'));
        assert_eq!((err.pos.line, err.pos.column), (2, 7));
    }

    #[test]
    fn positions_strictly_increase() {
        let src = "(* c *) open Level_3;\nfun flag (x,z) =\n\t(put2D (37,28) RED (0,0));";
        let toks = tokenize(src).unwrap();
        assert!(toks.windows(2).all(|w| w[0].pos < w[1].pos));
        assert!(toks.iter().all(|t| src[t.pos.offset..].starts_with(&t.lexeme)));
    }

    #[test]
    fn int_overflow() {
        assert!(matches!(tokenize("99999999999999999999999").unwrap_err().kind, LexErrorKind::IntOverflow(_)));
    }
}
