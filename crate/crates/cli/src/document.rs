//! The model file format: named blocks of `key: values;` entries.
//!
//! ```text
//! # comment
//! kripke-frame K {
//!   worlds: w1 w2;
//!   rel: w1->w2;
//!   closure: refl-trans
//! }
//! ```
//!
//! Atoms are whitespace-separated words or braced sets `{a,b}`. A key may span
//! several words (`step s0: s1 s2;`). The final `;` before `}` is optional.

use std::collections::HashSet;
use std::fmt;

use crate::error::CliError;

const RESERVED: &[char] = &['{', '}', ':', ';', '#', ','];

/// Whether `s` can be written as a bare word.
pub fn is_word(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Word(String),
    Set(Vec<String>),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Word(w) => f.write_str(w),
            Atom::Set(items) => write!(f, "{{{}}}", items.join(",")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: Vec<String>,
    pub values: Vec<Atom>,
    pub line: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.values == other.values
    }
}

impl Eq for Entry {}

impl Entry {
    pub fn new(key: &[&str], values: Vec<Atom>) -> Entry {
        Entry {
            key: key.iter().map(|s| s.to_string()).collect(),
            values,
            line: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub kind: String,
    pub name: String,
    pub entries: Vec<Entry>,
    pub line: usize,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.name == other.name && self.entries == other.entries
    }
}

impl Eq for Block {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    /// Parses a document, rejecting syntax errors and repeated block names.
    pub fn parse(text: &str) -> Result<Document, CliError> {
        let doc = Parser::new(text).document()?;
        let mut seen = HashSet::new();
        for b in &doc.blocks {
            if !seen.insert(b.name.as_str()) {
                return Err(CliError::Duplicate {
                    name: b.name.clone(),
                    line: b.line,
                });
            }
        }
        Ok(doc)
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{} {} {{", b.kind, b.name)?;
            for e in &b.entries {
                write!(f, "  {}:", e.key.join(" "))?;
                for v in &e.values {
                    write!(f, " {v}")?;
                }
                writeln!(f, ";")?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), CliError> {
        self.skip_trivia();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, CliError> {
        self.skip_trivia();
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || RESERVED.contains(&c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        if out.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected {what}, found `{c}`")),
                None => self.error(format!("expected {what}, found end of input")),
            });
        }
        Ok(out)
    }

    fn set(&mut self) -> Result<Atom, CliError> {
        self.expect('{')?;
        let mut items = Vec::new();
        self.skip_trivia();
        if self.peek() == Some('}') {
            self.bump();
            return Ok(Atom::Set(items));
        }
        loop {
            items.push(self.word("a set member")?);
            self.skip_trivia();
            match self.bump() {
                Some(',') => continue,
                Some('}') => return Ok(Atom::Set(items)),
                _ => return Err(self.error("expected `,` or `}` in set")),
            }
        }
    }

    fn entry(&mut self) -> Result<Entry, CliError> {
        self.skip_trivia();
        let line = self.line;
        let mut key = vec![self.word("a key")?];
        loop {
            self.skip_trivia();
            if self.peek() == Some(':') {
                self.bump();
                break;
            }
            key.push(self.word("`:` after key")?);
        }
        let mut values = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                Some(';') => {
                    self.bump();
                    break;
                }
                Some('}') => break,
                Some('{') => values.push(self.set()?),
                None => return Err(self.error("unterminated block")),
                Some(_) => values.push(Atom::Word(self.word("a value")?)),
            }
        }
        Ok(Entry { key, values, line })
    }

    fn block(&mut self) -> Result<Block, CliError> {
        let line = self.line;
        let kind = self.word("a block kind")?;
        let name = self.word("a block name")?;
        self.expect('{')?;
        let mut entries = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    break;
                }
                None => return Err(self.error(format!("block `{name}` is not closed"))),
                Some(_) => entries.push(self.entry()?),
            }
        }
        Ok(Block {
            kind,
            name,
            entries,
            line,
        })
    }

    fn document(&mut self) -> Result<Document, CliError> {
        let mut blocks = Vec::new();
        loop {
            self.skip_trivia();
            if self.peek().is_none() {
                return Ok(Document { blocks });
            }
            blocks.push(self.block()?);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        assert_eq!(Document::parse("").unwrap(), Document::default());
        assert_eq!(Document::parse("  # only a comment\n").unwrap(), Document::default());
    }

    #[test]
    fn frame_block() {
        let doc = Document::parse("kripke-frame K { worlds: w1 w2; rel: w1->w2; closure: refl-trans }").unwrap();
        let b = &doc.blocks[0];
        assert_eq!((b.kind.as_str(), b.name.as_str()), ("kripke-frame", "K"));
        assert_eq!(b.entries.len(), 3);
        assert_eq!(b.entries[1].values, vec![Atom::Word("w1->w2".into())]);
    }

    #[test]
    fn sets_and_multiword_keys() {
        let doc = Document::parse("coalgebra M {\n  step s0: s1 s2;\n  step s2: ;\n}\nquery q { alpha: {s0, s1} {}; }").unwrap();
        assert_eq!(doc.blocks[0].entries[0].key, vec!["step", "s0"]);
        assert!(doc.blocks[0].entries[1].values.is_empty());
        assert_eq!(
            doc.blocks[1].entries[0].values,
            vec![Atom::Set(vec!["s0".into(), "s1".into()]), Atom::Set(vec![])]
        );
    }

    #[test]
    fn errors_carry_positions() {
        match Document::parse("poset P {\n  elements a b;\n}") {
            Err(CliError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Document::parse("poset P { a: b;"), Err(CliError::Syntax { .. })));
        assert!(matches!(Document::parse("poset P { a: {b; }"), Err(CliError::Syntax { .. })));
        match Document::parse("poset P {}\nposet P {}") {
            Err(CliError::Duplicate { name, line }) => assert_eq!((name.as_str(), line), ("P", 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn serialize_round_trip() {
        let text = "poset P { elements: a b; leq: a->b }\n# c\nquery q { alpha: {x,y}; expect: {} }";
        let doc = Document::parse(text).unwrap();
        let out = doc.to_string();
        assert_eq!(Document::parse(&out).unwrap(), doc);
        assert!(out.contains("  alpha: {x,y};"));
    }
}
