//! Lexer and recursive-descent parser for the rule DSL.
//!
//! ```text
//! file        := (frame_decl | map_decl | rule_stmt | evidence_decl)* ;
//! frame_decl  := "frame" IDENT "=" ( "{" IDENT ("," IDENT)* "}" | IDENT ("*" IDENT)+ ) ;
//! map_decl    := "map" IDENT ":" IDENT "->" IDENT "{" rule_stmt+ "}" ;
//! rule_stmt   := ["rule"] antecedent "->" term ("," term)* ";" ;
//! antecedent  := IDENT | "{" IDENT ("," IDENT)* "}" ;
//! term        := target ":" NUMBER ;
//! target      := "{" IDENT ("," IDENT)* "}" | IDENT | "*" ;
//! evidence_decl := "evidence" "on" IDENT "{" term (";" term)* [";"] "}" ;
//! ```
//!
//! `IDENT` may start with `!` (synthesized complement elements) and may be a
//! parenthesized tuple `(a1,b2)` naming an element of a product frame.
//! `#` starts a comment that runs to the end of the line.

use crate::error::{Error, Location, Result};

/// Digits allowed after the decimal point.
pub const MAX_FRACTION_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    Arrow,
    Eq,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

fn syntax(location: Location, message: impl Into<String>) -> Error {
    Error::Syntax {
        location,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn here(&self) -> Location {
        Location {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if !is_ident_char(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn plain_ident(&mut self) -> Result<String> {
        self.skip_trivia();
        let at = self.here();
        match self.chars.peek() {
            Some(&c) if is_ident_start(c) => Ok(self.word()),
            _ => Err(syntax(at, "expected an identifier")),
        }
    }

    /// `(a,b,...)` with the opening paren already peeked.
    fn tuple(&mut self) -> Result<String> {
        let open = self.here();
        self.bump();
        let mut parts = vec![self.plain_ident()?];
        loop {
            self.skip_trivia();
            let at = self.here();
            match self.bump() {
                Some(',') => parts.push(self.plain_ident()?),
                Some(')') => break,
                Some(c) => return Err(syntax(at, format!("unexpected `{c}` in tuple label"))),
                None => return Err(syntax(open, "unterminated tuple label")),
            }
        }
        Ok(format!("({})", parts.join(",")))
    }

    fn next(&mut self) -> Result<(Tok, Location)> {
        self.skip_trivia();
        let at = self.here();
        let Some(&c) = self.chars.peek() else {
            return Ok((Tok::Eof, at));
        };
        let tok = match c {
            '{' => {
                self.bump();
                Tok::LBrace
            }
            '}' => {
                self.bump();
                Tok::RBrace
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            ':' => {
                self.bump();
                Tok::Colon
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            '=' => {
                self.bump();
                Tok::Eq
            }
            '*' => {
                self.bump();
                Tok::Star
            }
            '-' => {
                self.bump();
                if self.chars.peek() == Some(&'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    return Err(syntax(at, "expected `->`"));
                }
            }
            '!' => {
                self.bump();
                match self.chars.peek() {
                    Some(&'(') => Tok::Ident(format!("!{}", self.tuple()?)),
                    Some(&c) if is_ident_start(c) => Tok::Ident(format!("!{}", self.word())),
                    _ => return Err(syntax(at, "`!` must be followed by a label")),
                }
            }
            '(' => Tok::Ident(self.tuple()?),
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_digit() || c == '.' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Number(s)
            }
            c if is_ident_start(c) => Tok::Ident(self.word()),
            other => return Err(syntax(at, format!("unexpected character `{other}`"))),
        };
        Ok((tok, at))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Label {
    pub name: String,
    pub at: Location,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum FrameBody {
    Labels(Vec<Label>),
    Product(Vec<Label>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FrameDeclAst {
    pub name: Label,
    pub body: FrameBody,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TargetAst {
    Whole,
    Labels(Vec<Label>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TermAst {
    pub target: TargetAst,
    pub value: f64,
    pub at: Location,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RuleAst {
    pub antecedent: Vec<Label>,
    pub terms: Vec<TermAst>,
    pub at: Location,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MapAst {
    pub name: Label,
    pub source: Label,
    pub target: Label,
    pub rules: Vec<RuleAst>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct EvidenceAst {
    pub frame: Label,
    pub terms: Vec<TermAst>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Item {
    Frame(FrameDeclAst),
    Map(MapAst),
    Rule(RuleAst),
    Evidence(EvidenceAst),
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (Tok, Location),
    lookahead: Option<(Tok, Location)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut lexer = Lexer::new(text);
        let current = lexer.next()?;
        Ok(Parser {
            lexer,
            current,
            lookahead: None,
        })
    }

    fn advance(&mut self) -> Result<(Tok, Location)> {
        let next = match self.lookahead.take() {
            Some(t) => t,
            None => self.lexer.next()?,
        };
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn peek_second(&mut self) -> Result<&Tok> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lexer.next()?);
        }
        Ok(&self.lookahead.as_ref().expect("filled above").0)
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        Err(syntax(
            self.current.1,
            format!("expected {wanted}, found {}", self.current.0.describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<Location> {
        if self.current.0 == tok {
            Ok(self.advance()?.1)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self) -> Result<Label> {
        match &self.current.0 {
            Tok::Ident(_) => {
                let (tok, at) = self.advance()?;
                let Tok::Ident(name) = tok else {
                    unreachable!()
                };
                Ok(Label { name, at })
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn is_keyword(&mut self, word: &str) -> Result<bool> {
        if matches!(&self.current.0, Tok::Ident(s) if s == word) {
            // `frame -> x: 1;` is a rule about an element called `frame`
            Ok(*self.peek_second()? != Tok::Arrow)
        } else {
            Ok(false)
        }
    }

    fn label_list(&mut self) -> Result<Vec<Label>> {
        self.expect(Tok::LBrace)?;
        let mut labels = vec![self.ident()?];
        while self.current.0 == Tok::Comma {
            self.advance()?;
            labels.push(self.ident()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(labels)
    }

    fn number(&mut self) -> Result<f64> {
        let Tok::Number(text) = &self.current.0 else {
            return self.unexpected("a number");
        };
        let at = self.current.1;
        let text = text.clone();
        let (int, frac) = match text.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (text.as_str(), None),
        };
        if int.is_empty() || frac.is_some_and(|f| f.is_empty() || f.contains('.')) {
            return Err(syntax(at, format!("malformed number `{text}`")));
        }
        if frac.is_some_and(|f| f.len() > MAX_FRACTION_DIGITS) {
            return Err(syntax(
                at,
                format!("`{text}` has more than {MAX_FRACTION_DIGITS} fractional digits"),
            ));
        }
        let value: f64 = text
            .parse()
            .map_err(|_| syntax(at, format!("malformed number `{text}`")))?;
        self.advance()?;
        Ok(value)
    }

    fn term(&mut self) -> Result<TermAst> {
        let at = self.current.1;
        let target = match &self.current.0 {
            Tok::Star => {
                self.advance()?;
                TargetAst::Whole
            }
            Tok::LBrace => TargetAst::Labels(self.label_list()?),
            Tok::Ident(_) => TargetAst::Labels(vec![self.ident()?]),
            _ => return self.unexpected("a conclusion (`*`, a label or `{...}`)"),
        };
        self.expect(Tok::Colon)?;
        let value = self.number()?;
        Ok(TermAst { target, value, at })
    }

    fn rule(&mut self) -> Result<RuleAst> {
        if self.is_keyword("rule")? {
            self.advance()?;
        }
        let at = self.current.1;
        let antecedent = match &self.current.0 {
            Tok::LBrace => self.label_list()?,
            Tok::Ident(_) => vec![self.ident()?],
            _ => return self.unexpected("a rule antecedent"),
        };
        self.expect(Tok::Arrow)?;
        let mut terms = vec![self.term()?];
        while self.current.0 == Tok::Comma {
            self.advance()?;
            terms.push(self.term()?);
        }
        self.expect(Tok::Semi)?;
        Ok(RuleAst {
            antecedent,
            terms,
            at,
        })
    }

    fn frame_decl(&mut self) -> Result<FrameDeclAst> {
        self.advance()?;
        let name = self.ident()?;
        self.expect(Tok::Eq)?;
        let body = match &self.current.0 {
            Tok::LBrace => FrameBody::Labels(self.label_list()?),
            Tok::Ident(_) => {
                let mut parts = vec![self.ident()?];
                while self.current.0 == Tok::Star {
                    self.advance()?;
                    parts.push(self.ident()?);
                }
                if parts.len() < 2 {
                    return self.unexpected("`*` in a product frame declaration");
                }
                FrameBody::Product(parts)
            }
            _ => return self.unexpected("`{` or a frame name"),
        };
        Ok(FrameDeclAst { name, body })
    }

    fn map_decl(&mut self) -> Result<MapAst> {
        self.advance()?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let source = self.ident()?;
        self.expect(Tok::Arrow)?;
        let target = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut rules = vec![self.rule()?];
        while self.current.0 != Tok::RBrace {
            if self.current.0 == Tok::Eof {
                return self.unexpected("`}`");
            }
            rules.push(self.rule()?);
        }
        self.advance()?;
        Ok(MapAst {
            name,
            source,
            target,
            rules,
        })
    }

    fn evidence_decl(&mut self) -> Result<EvidenceAst> {
        self.advance()?;
        match &self.current.0 {
            Tok::Ident(s) if s == "on" => {
                self.advance()?;
            }
            _ => return self.unexpected("`on`"),
        }
        let frame = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut terms = vec![self.term()?];
        loop {
            match self.current.0 {
                Tok::Semi => {
                    self.advance()?;
                    if self.current.0 == Tok::RBrace {
                        break;
                    }
                    terms.push(self.term()?);
                }
                Tok::RBrace => break,
                _ => return self.unexpected("`;` or `}`"),
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(EvidenceAst { frame, terms })
    }

    fn file(&mut self) -> Result<Vec<Item>> {
        let mut items = Vec::new();
        while self.current.0 != Tok::Eof {
            let item = if self.is_keyword("frame")? {
                Item::Frame(self.frame_decl()?)
            } else if self.is_keyword("map")? {
                Item::Map(self.map_decl()?)
            } else if self.is_keyword("evidence")? {
                Item::Evidence(self.evidence_decl()?)
            } else {
                Item::Rule(self.rule()?)
            };
            items.push(item);
        }
        Ok(items)
    }
}

pub(crate) fn parse_items(text: &str) -> Result<Vec<Item>> {
    Parser::new(text)?.file()
}
