//! The structure file format: a sequence of named declarations.
//!
//! ```text
//! # comment
//! lattice L3 {
//!   elements 0 h 1;
//!   order (0,h) (h,1);
//! }
//! quantale L3 over L3 {
//!   mul {
//!     0 0 0;
//!     0 0 h;
//!     0 h 1;
//!   }
//!   unit 1;
//! }
//! module L3l over L3 on L3 {
//!   side left;
//!   action {
//!     0 0 0;
//!     0 0 h;
//!     0 h 1;
//!   }
//! }
//! kernel K over B2 {
//!   rows x y;
//!   cols x y;
//!   side left;
//!   entries {
//!     ⊤ ⊤;
//!     ⊥ ⊥;
//!   }
//! }
//! relation R over L3 {
//!   pairs (0,h);
//! }
//! ```
//!
//! Names are bare words (any characters other than whitespace and
//! `{ } ; ( ) , # "`) or double-quoted strings with `\"` and `\\` escapes.
//! Order pairs `(a,b)` mean `a ≤ b`; the reflexive-transitive closure is taken.
//! Table rows are indexed by scalars and columns by carrier elements, both
//! in declaration order.

use std::fmt::Write as _;

use quantale::module::Handedness;
use quantale::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Lattice(LatticeDecl),
    Quantale(QuantaleDecl),
    Module(ModuleDecl),
    Kernel(KernelDecl),
    Relation(RelationDecl),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Lattice,
    Quantale,
    Module,
    Kernel,
    Relation,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Lattice => "lattice",
            Kind::Quantale => "quantale",
            Kind::Module => "module",
            Kind::Kernel => "kernel",
            Kind::Relation => "relation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDecl {
    pub name: String,
    pub elements: Vec<String>,
    pub order: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantaleDecl {
    pub name: String,
    pub lattice: String,
    pub mul: Vec<Vec<String>>,
    pub unit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub quantale: String,
    pub lattice: String,
    pub side: Handedness,
    pub action: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDecl {
    pub name: String,
    pub quantale: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub side: Handedness,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDecl {
    pub name: String,
    pub quantale: String,
    pub pairs: Vec<(String, String)>,
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Lattice(d) => &d.name,
            Item::Quantale(d) => &d.name,
            Item::Module(d) => &d.name,
            Item::Kernel(d) => &d.name,
            Item::Relation(d) => &d.name,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Item::Lattice(_) => Kind::Lattice,
            Item::Quantale(_) => Kind::Quantale,
            Item::Module(_) => Kind::Module,
            Item::Kernel(_) => Kind::Kernel,
            Item::Relation(_) => Kind::Relation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Open,
    Close,
    Semi,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | ';' | '(' | ')' | ',' | '#' | '"')
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let simple = match c {
            '{' => Some(Tok::Open),
            '}' => Some(Tok::Close),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            bump(&mut chars);
            out.push(Spanned { tok, line: l, column: col });
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c == '"' {
            bump(&mut chars);
            let mut word = String::new();
            loop {
                match bump(&mut chars) {
                    None => return Err(parse_error(l, col, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => match bump(&mut chars) {
                        Some(e @ ('"' | '\\')) => word.push(e),
                        _ => return Err(parse_error(l, col, "bad escape in string")),
                    },
                    Some(ch) => word.push(ch),
                }
            }
            if word.is_empty() {
                return Err(parse_error(l, col, "empty name"));
            }
            out.push(Spanned {
                tok: Tok::Word(word),
                line: l,
                column: col,
            });
        } else {
            let mut word = String::new();
            while chars.peek().is_some_and(|&c| is_word_char(c)) {
                word.push(bump(&mut chars).expect("peeked"));
            }
            out.push(Spanned {
                tok: Tok::Word(word),
                line: l,
                column: col,
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(parse_error(l, c, message))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w == kw)
    }

    /// Words up to `;`.
    fn words(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while let Some(Tok::Word(_)) = self.peek() {
            out.push(self.word("name")?);
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(out)
    }

    /// `(a,b) (c,d) ... ;`
    fn pairs(&mut self) -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        while self.peek() == Some(&Tok::LParen) {
            self.next();
            let a = self.word("element name")?;
            self.expect(Tok::Comma, "`,`")?;
            let b = self.word("element name")?;
            self.expect(Tok::RParen, "`)`")?;
            out.push((a, b));
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(out)
    }

    /// `{ row; row; ... }`
    fn table(&mut self) -> Result<Vec<Vec<String>>> {
        self.expect(Tok::Open, "`{`")?;
        let mut rows = Vec::new();
        while self.peek() != Some(&Tok::Close) {
            if self.peek().is_none() {
                return self.fail("unterminated table");
            }
            rows.push(self.words()?);
        }
        self.next();
        Ok(rows)
    }

    fn side(&mut self) -> Result<Handedness> {
        self.keyword("side")?;
        let s = match self.word("`left` or `right`")?.as_str() {
            "left" => Handedness::Left,
            "right" => Handedness::Right,
            _ => {
                self.pos -= 1;
                return self.fail("expected `left` or `right`");
            }
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok(s)
    }

    fn item(&mut self) -> Result<Item> {
        let kw = self.word("a declaration keyword")?;
        match kw.as_str() {
            "lattice" => {
                let name = self.word("lattice name")?;
                self.expect(Tok::Open, "`{`")?;
                self.keyword("elements")?;
                let elements = self.words()?;
                let order = if self.at_keyword("order") {
                    self.next();
                    self.pairs()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Close, "`}`")?;
                Ok(Item::Lattice(LatticeDecl { name, elements, order }))
            }
            "quantale" => {
                let name = self.word("quantale name")?;
                self.keyword("over")?;
                let lattice = self.word("lattice name")?;
                self.expect(Tok::Open, "`{`")?;
                self.keyword("mul")?;
                let mul = self.table()?;
                let unit = if self.at_keyword("unit") {
                    self.next();
                    let u = self.word("unit element")?;
                    self.expect(Tok::Semi, "`;`")?;
                    Some(u)
                } else {
                    None
                };
                self.expect(Tok::Close, "`}`")?;
                Ok(Item::Quantale(QuantaleDecl {
                    name,
                    lattice,
                    mul,
                    unit,
                }))
            }
            "module" => {
                let name = self.word("module name")?;
                self.keyword("over")?;
                let quantale = self.word("quantale name")?;
                self.keyword("on")?;
                let lattice = self.word("lattice name")?;
                self.expect(Tok::Open, "`{`")?;
                let side = if self.at_keyword("side") { self.side()? } else { Handedness::Left };
                self.keyword("action")?;
                let action = self.table()?;
                self.expect(Tok::Close, "`}`")?;
                Ok(Item::Module(ModuleDecl {
                    name,
                    quantale,
                    lattice,
                    side,
                    action,
                }))
            }
            "kernel" => {
                let name = self.word("kernel name")?;
                self.keyword("over")?;
                let quantale = self.word("quantale name")?;
                self.expect(Tok::Open, "`{`")?;
                self.keyword("rows")?;
                let rows = self.words()?;
                self.keyword("cols")?;
                let cols = self.words()?;
                let side = if self.at_keyword("side") { self.side()? } else { Handedness::Left };
                self.keyword("entries")?;
                let entries = self.table()?;
                self.expect(Tok::Close, "`}`")?;
                Ok(Item::Kernel(KernelDecl {
                    name,
                    quantale,
                    rows,
                    cols,
                    side,
                    entries,
                }))
            }
            "relation" => {
                let name = self.word("relation name")?;
                self.keyword("over")?;
                let quantale = self.word("quantale name")?;
                self.expect(Tok::Open, "`{`")?;
                let pairs = if self.at_keyword("pairs") {
                    self.next();
                    self.pairs()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Close, "`}`")?;
                Ok(Item::Relation(RelationDecl { name, quantale, pairs }))
            }
            other => {
                self.pos -= 1;
                self.fail(format!("unknown declaration `{other}`"))
            }
        }
    }
}

/// Parses a document. A document without declarations is an error.
pub fn parse(src: &str) -> Result<Document> {
    let toks = lex(src)?;
    let lines = src.split('\n').count();
    let last = src.rsplit('\n').next().map_or(0, |l| l.chars().count());
    let mut p = Parser {
        toks,
        pos: 0,
        end: (lines, last + 1),
    };
    let mut items = Vec::new();
    while p.peek().is_some() {
        items.push(p.item()?);
    }
    if items.is_empty() {
        return Err(parse_error(p.end.0, p.end.1, "no declarations"));
    }
    let mut seen = std::collections::HashSet::new();
    for it in &items {
        if !seen.insert((it.kind(), it.name().to_owned())) {
            return Err(Error::DuplicateElement(format!("{} {}", it.kind().keyword(), it.name())));
        }
    }
    Ok(Document { items })
}

/// Quotes a name unless it is a bare word.
pub fn quote(name: &str) -> String {
    if !name.is_empty() && name.chars().all(is_word_char) {
        name.to_owned()
    } else {
        let mut s = String::from("\"");
        for c in name.chars() {
            if c == '"' || c == '\\' {
                s.push('\\');
            }
            s.push(c);
        }
        s.push('"');
        s
    }
}

fn join_words(words: &[String]) -> String {
    words.iter().map(|w| quote(w)).collect::<Vec<_>>().join(" ")
}

fn join_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("({},{})", quote(a), quote(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn side_word(s: Handedness) -> &'static str {
    match s {
        Handedness::Left => "left",
        Handedness::Right => "right",
    }
}

fn write_table(out: &mut String, key: &str, rows: &[Vec<String>]) {
    let _ = writeln!(out, "  {key} {{");
    for r in rows {
        let _ = writeln!(out, "    {};", join_words(r));
    }
    out.push_str("  }\n");
}

impl Item {
    /// Canonical text of a single declaration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Item::Lattice(d) => {
                let _ = writeln!(out, "lattice {} {{", quote(&d.name));
                let _ = writeln!(out, "  elements {};", join_words(&d.elements));
                if !d.order.is_empty() {
                    let _ = writeln!(out, "  order {};", join_pairs(&d.order));
                }
            }
            Item::Quantale(d) => {
                let _ = writeln!(out, "quantale {} over {} {{", quote(&d.name), quote(&d.lattice));
                write_table(&mut out, "mul", &d.mul);
                if let Some(u) = &d.unit {
                    let _ = writeln!(out, "  unit {};", quote(u));
                }
            }
            Item::Module(d) => {
                let _ = writeln!(
                    out,
                    "module {} over {} on {} {{",
                    quote(&d.name),
                    quote(&d.quantale),
                    quote(&d.lattice)
                );
                let _ = writeln!(out, "  side {};", side_word(d.side));
                write_table(&mut out, "action", &d.action);
            }
            Item::Kernel(d) => {
                let _ = writeln!(out, "kernel {} over {} {{", quote(&d.name), quote(&d.quantale));
                let _ = writeln!(out, "  rows {};", join_words(&d.rows));
                let _ = writeln!(out, "  cols {};", join_words(&d.cols));
                let _ = writeln!(out, "  side {};", side_word(d.side));
                write_table(&mut out, "entries", &d.entries);
            }
            Item::Relation(d) => {
                let _ = writeln!(out, "relation {} over {} {{", quote(&d.name), quote(&d.quantale));
                if !d.pairs.is_empty() {
                    let _ = writeln!(out, "  pairs {};", join_pairs(&d.pairs));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Document {
    /// Canonical text: declarations in file order separated by blank lines,
    /// two-space indentation, comments dropped, names quoted only when needed.
    pub fn to_text(&self) -> String {
        self.items
            .iter()
            .map(Item::to_text)
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn find(&self, kind: Kind, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.kind() == kind && i.name() == name)
    }
}
