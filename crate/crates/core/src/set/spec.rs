//! Textual set descriptions.
//!
//! ```text
//! periodic p=<int> pos={r,…} neg={r,…} [m=<int>] [add={…}] [remove={…}]
//! finite [Z|Z2|F2] {g,…}
//! gen <name>            gen fg_xSy(a,B)
//! union(<spec>;<spec>)  diff(<spec>;<spec>)
//! translate <g> (<spec>)
//! product {g,…} (<spec>)
//! inverse (<spec>)
//! ```
//!
//! Elements are integers, pairs `(x,y)`, or reduced words over `a A b B`
//! (`e` is the empty word). Printing a [`SetRepr`] yields a description that
//! parses back to an equal value.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use super::{Enumerated, FiniteSet, Generator, Periodic, SetRepr};
use crate::error::{Error, ParseError};
use crate::group::{Element, Group, Letter, Word};

/// Parse a set description.
pub fn parse_set_spec(text: &str) -> Result<SetRepr, Error> {
    let mut p = Parser { src: text, pos: 0 };
    let set = p.spec()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(set)
}

impl core::str::FromStr for SetRepr {
    type Err = Error;

    fn from_str(s: &str) -> Result<SetRepr, Error> {
        parse_set_spec(s)
    }
}

/// Parse an element of any shipped group.
pub(crate) fn parse_element(text: &str) -> Result<Element, Error> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let g = p.element()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(g)
}

impl core::str::FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Element, Error> {
        parse_element(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse(ParseError {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !(c.is_ascii_alphanumeric() || c == '_') {
                break;
            }
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<u64, Error> {
        self.skip_ws();
        let start = self.pos;
        let v = self.int()?;
        u64::try_from(v).map_err(|_| {
            self.pos = start;
            self.error("expected a non-negative integer")
        })
    }

    fn element(&mut self) -> Result<Element, Error> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let x = self.int()?;
                self.expect(',')?;
                let y = self.int()?;
                self.expect(')')?;
                Ok(Element::Pair(x, y))
            }
            Some(c) if c == '-' || c.is_ascii_digit() => Ok(Element::Int(self.int()?)),
            Some('e') => {
                self.pos += 1;
                Ok(Element::Word(Word::identity()))
            }
            Some(c) if Letter::from_char(c).is_some() => {
                let mut letters = Vec::new();
                while let Some(l) = self.peek().and_then(Letter::from_char) {
                    letters.push(l);
                    self.pos += 1;
                }
                Ok(Element::Word(Word::new(letters)))
            }
            _ => Err(self.error("expected a group element")),
        }
    }

    fn braced<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, Error>) -> Result<Vec<T>, Error> {
        self.expect('{')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or '}'")),
            }
        }
    }

    fn elements(&mut self, group: Option<Group>) -> Result<FiniteSet, Error> {
        let start = self.pos;
        let elems = self.braced(|p| p.element())?;
        let group = match group {
            Some(g) => g,
            None => elems.first().map_or(Group::Z, Element::group),
        };
        FiniteSet::new(group, elems).map_err(|e| {
            self.pos = start;
            match e {
                Error::GroupMismatch { .. } => self.error("elements from different groups"),
                other => other,
            }
        })
    }

    fn parenthesized(&mut self) -> Result<SetRepr, Error> {
        self.expect('(')?;
        let s = self.spec()?;
        self.expect(')')?;
        Ok(s)
    }

    fn pair(&mut self) -> Result<(SetRepr, SetRepr), Error> {
        self.expect('(')?;
        let a = self.spec()?;
        self.expect(';')?;
        let b = self.spec()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn at(&mut self, start: usize, r: Result<SetRepr, Error>) -> Result<SetRepr, Error> {
        r.map_err(|e| match e {
            Error::Parse(_) => e,
            other => {
                self.pos = start;
                self.error(&other.to_string())
            }
        })
    }

    fn spec(&mut self) -> Result<SetRepr, Error> {
        self.skip_ws();
        let start = self.pos;
        match self.ident() {
            "periodic" => self.periodic(start),
            "finite" => {
                self.skip_ws();
                let save = self.pos;
                let tag = self.ident();
                let group = match tag {
                    "" => {
                        self.pos = save;
                        None
                    }
                    t => Some(t.parse::<Group>().map_err(|_| {
                        self.pos = save;
                        self.error("unknown group tag")
                    })?),
                };
                Ok(SetRepr::Finite(self.elements(group)?))
            }
            "gen" => {
                self.skip_ws();
                let name_at = self.pos;
                let name = self.ident().to_string();
                let args = if self.peek() == Some('(') {
                    self.pos += 1;
                    self.skip_ws();
                    let x = self.letter()?;
                    self.expect(',')?;
                    self.skip_ws();
                    let y = self.letter()?;
                    self.expect(')')?;
                    Some((x, y))
                } else {
                    None
                };
                Generator::by_name(&name, args).map(SetRepr::generator).ok_or_else(|| {
                    self.pos = name_at;
                    self.error("unknown generator")
                })
            }
            "union" => {
                let (a, b) = self.pair()?;
                let r = a.union(&b);
                self.at(start, r)
            }
            "diff" => {
                let (a, b) = self.pair()?;
                let r = a.difference(&b);
                self.at(start, r)
            }
            "translate" => {
                let g = self.element()?;
                let a = self.parenthesized()?;
                let r = a.translate(&g);
                self.at(start, r)
            }
            "product" => {
                let f = self.elements(None)?;
                let a = self.parenthesized()?;
                let r = SetRepr::product(f.elements(), &a);
                self.at(start, r)
            }
            "inverse" => {
                let a = self.parenthesized()?;
                let r = a.inverse();
                self.at(start, r)
            }
            _ => {
                self.pos = start;
                Err(self.error("expected periodic, finite, gen, union, diff, translate, product or inverse"))
            }
        }
    }

    fn letter(&mut self) -> Result<Letter, Error> {
        let l = self
            .peek()
            .and_then(Letter::from_char)
            .ok_or_else(|| self.error("expected a letter a, A, b or B"))?;
        self.pos += 1;
        Ok(l)
    }

    fn periodic(&mut self, start: usize) -> Result<SetRepr, Error> {
        let mut p = None;
        let mut pos = None;
        let mut neg = None;
        let mut m = 0;
        let mut add = Vec::new();
        let mut remove = Vec::new();
        loop {
            self.skip_ws();
            let key_at = self.pos;
            let key = self.ident();
            if key.is_empty() {
                break;
            }
            let key = key.to_string();
            self.expect('=')?;
            match key.as_str() {
                "p" => p = Some(self.uint()?),
                "m" => m = self.uint()?,
                "pos" => pos = Some(self.braced(|s| s.uint())?),
                "neg" => neg = Some(self.braced(|s| s.uint())?),
                "add" => add = self.braced(|s| s.int())?,
                "remove" => remove = self.braced(|s| s.int())?,
                _ => {
                    self.pos = key_at;
                    return Err(self.error("unknown periodic field"));
                }
            }
        }
        let (Some(p), Some(pos), Some(neg)) = (p, pos, neg) else {
            return Err(self.error("periodic needs p, pos and neg"));
        };
        let r = Periodic::new(p, &pos, &neg, m, &add, &remove).map(SetRepr::Periodic);
        self.at(start, r)
    }
}

fn braces<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl IntoIterator<Item = T>) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Periodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "periodic p={} pos=", self.modulus())?;
        braces(f, self.pos_residues())?;
        f.write_str(" neg=")?;
        braces(f, self.neg_residues())?;
        if self.tail_start() != 0 {
            write!(f, " m={}", self.tail_start())?;
        }
        if !self.add().is_empty() {
            f.write_str(" add=")?;
            braces(f, self.add())?;
        }
        if !self.remove().is_empty() {
            f.write_str(" remove=")?;
            braces(f, self.remove())?;
        }
        Ok(())
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("finite ")?;
        if self.group() != Group::Z {
            write!(f, "{} ", self.group())?;
        }
        braces(f, self.elements())
    }
}

impl fmt::Display for SetRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRepr::Finite(s) => write!(f, "{s}"),
            SetRepr::Periodic(p) => write!(f, "{p}"),
            SetRepr::Enumerated(e) => match e {
                Enumerated::Gen(g) => write!(f, "gen {g}"),
                Enumerated::Union(a, b) => write!(f, "union({a};{b})"),
                Enumerated::Diff(a, b) => write!(f, "diff({a};{b})"),
                Enumerated::Translate(g, a) => write!(f, "translate {g} ({a})"),
                Enumerated::Product(s, a) => {
                    f.write_str("product ")?;
                    braces(f, s.elements())?;
                    write!(f, " ({a})")
                }
                Enumerated::Inverse(a) => write!(f, "inverse ({a})"),
            },
        }
    }
}
