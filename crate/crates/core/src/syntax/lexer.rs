use crate::span::SourceSpan;

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Dot,
    /// `->`
    Arrow,
    /// `-[`
    StereoOpen,
    /// `]`
    RBracket,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

impl Token {
    /// Lexeme as shown in error messages.
    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Eof => "end of input".to_owned(),
            _ => format!("`{}`", self.text),
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Ident && self.text == kw
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "and", "block", "complete", "def", "env", "ext", "fault", "feature", "features", "for",
    "generic", "initial", "mode", "modes", "net", "not", "or", "use", "uses", "variant",
    "variants", "view", "when",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Splits `text` into tokens. Lexical errors are collected and the offending
/// input skipped; the token stream always ends with `Eof`.
pub(crate) fn tokenize(file: &str, text: &str) -> (Vec<Token>, Vec<ParseError>) {
    let mut lexer = Lexer {
        file,
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        tokens: Vec::new(),
        errors: Vec::new(),
    };
    lexer.run();
    (lexer.tokens, lexer.errors)
}

struct Lexer<'a> {
    file: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
    tokens: Vec<Token>,
    errors: Vec<ParseError>,
}

impl Lexer<'_> {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self, line: u32, column: u32, length: usize) -> SourceSpan {
        SourceSpan::new(self.file, line, column, length as u32)
    }

    fn push(&mut self, kind: TokenKind, text: String, line: u32, column: u32) {
        let span = self.span(line, column, text.chars().count());
        self.tokens.push(Token { kind, text, span });
    }

    fn run(&mut self) {
        while let Some(c) = self.peek(0) {
            let (line, column) = (self.line, self.column);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '/' if self.peek(1) == Some('/') => {
                    while !matches!(self.peek(0), None | Some('\n')) {
                        self.bump();
                    }
                }
                '/' if self.peek(1) == Some('*') => {
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek(0) {
                            None => {
                                self.errors.push(ParseError {
                                    span: self.span(line, column, 2),
                                    expected: "`*/` closing the comment".to_owned(),
                                    found: "end of input".to_owned(),
                                });
                                break;
                            }
                            Some('*') if self.peek(1) == Some('/') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                        }
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    let mut text = String::new();
                    while let Some(c) = self
                        .peek(0)
                        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
                    {
                        text.push(c);
                        self.bump();
                    }
                    self.push(TokenKind::Ident, text, line, column);
                }
                '-' if self.peek(1) == Some('>') => {
                    self.bump();
                    self.bump();
                    self.push(TokenKind::Arrow, "->".into(), line, column);
                }
                '-' if self.peek(1) == Some('[') => {
                    self.bump();
                    self.bump();
                    self.push(TokenKind::StereoOpen, "-[".into(), line, column);
                }
                '{' | '}' | '(' | ')' | ';' | ':' | '.' | ']' => {
                    self.bump();
                    let kind = match c {
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        '(' => TokenKind::LParen,
                        ')' => TokenKind::RParen,
                        ';' => TokenKind::Semi,
                        ':' => TokenKind::Colon,
                        '.' => TokenKind::Dot,
                        _ => TokenKind::RBracket,
                    };
                    self.push(kind, c.to_string(), line, column);
                }
                other => {
                    // Unicode letters land here too: identifiers are ASCII only.
                    let mut text = String::new();
                    if other.is_ascii() {
                        text.push(other);
                        self.bump();
                    } else {
                        while let Some(c) = self.peek(0).filter(|c| !c.is_ascii()) {
                            text.push(c);
                            self.bump();
                        }
                    }
                    self.errors.push(ParseError {
                        span: self.span(line, column, text.chars().count()),
                        expected: "an ASCII identifier or punctuation".to_owned(),
                        found: format!("`{text}`"),
                    });
                }
            }
        }
        let (line, column) = (self.line, self.column);
        self.push(TokenKind::Eof, String::new(), line, column);
    }
}
