//! The three concrete infinite groups: (ℤ,+), (ℤ²,+) and the free group F(a,b).
//!
//! Every element carries its group, has a canonical total order (ℤ by |x| then
//! sign, ℤ² by max-norm then lexicographic, F(a,b) shortlex) and a norm used to
//! define balls. All searches in this crate walk balls in canonical order.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Which group an element or set lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// The integers under addition.
    Z,
    /// The integer lattice ℤ² under addition.
    Z2,
    /// The free group on two generators a, b.
    F2,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::Z, Group::Z2, Group::F2];

    pub fn tag(self) -> &'static str {
        match self {
            Group::Z => "Z",
            Group::Z2 => "Z2",
            Group::F2 => "F2",
        }
    }

    pub fn identity(self) -> Element {
        match self {
            Group::Z => Element::Int(0),
            Group::Z2 => Element::Pair(0, 0),
            Group::F2 => Element::Word(Word::identity()),
        }
    }

    /// Generators used by ball enumeration (inverses included).
    pub fn generators(self) -> Vec<Element> {
        match self {
            Group::Z => vec![Element::Int(-1), Element::Int(1)],
            Group::Z2 => vec![
                Element::Pair(-1, 0),
                Element::Pair(0, -1),
                Element::Pair(0, 1),
                Element::Pair(1, 0),
            ],
            Group::F2 => Letter::ALL.iter().map(|&l| Element::Word(Word::letter(l))).collect(),
        }
    }

    /// Checked group product `g·h`.
    pub fn combine(self, g: &Element, h: &Element) -> Result<Element, Error> {
        self.expect(g)?;
        self.expect(h)?;
        Ok(g.mul(h))
    }

    pub fn invert(self, g: &Element) -> Result<Element, Error> {
        self.expect(g)?;
        Ok(g.inv())
    }

    pub fn expect(self, g: &Element) -> Result<(), Error> {
        if g.group() == self {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: self,
                found: g.group(),
            })
        }
    }

    /// Every element of norm at most `radius`, canonically sorted.
    pub fn ball(self, radius: u64) -> Vec<Element> {
        match self {
            Group::Z => {
                let r = radius as i64;
                let mut out = Vec::with_capacity(2 * radius as usize + 1);
                out.push(Element::Int(0));
                for k in 1..=r {
                    out.push(Element::Int(-k));
                    out.push(Element::Int(k));
                }
                out
            }
            Group::Z2 => {
                let r = radius as i64;
                let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
                for x in -r..=r {
                    for y in -r..=r {
                        out.push(Element::Pair(x, y));
                    }
                }
                out.sort();
                out
            }
            Group::F2 => Word::ball(radius as usize).into_iter().map(Element::Word).collect(),
        }
    }

    /// Closed-form size of `ball(radius)`.
    pub fn ball_size(self, radius: u64) -> u128 {
        let r = radius as u128;
        match self {
            Group::Z => 2 * r + 1,
            Group::Z2 => (2 * r + 1) * (2 * r + 1),
            Group::F2 => 1 + 2 * (3u128.pow(radius as u32) - 1),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" => Ok(Group::Z),
            "Z2" => Ok(Group::Z2),
            "F2" => Ok(Group::F2),
            _ => Err(Error::UnknownGroup),
        }
    }
}

/// A letter of F(a,b). Order is a < A < b < B, where capitals are inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// A freely reduced word. The constructor reduces eagerly, so no value of
/// this type ever contains an adjacent `x x⁻¹` pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut buf: Vec<Letter> = Vec::new();
        for l in letters {
            if buf.last() == Some(&l.inverse()) {
                buf.pop();
            } else {
                buf.push(l);
            }
        }
        Word(buf)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut buf = self.0.clone();
        let mut rest = other.0.as_slice();
        while let (Some(&l), Some(&r)) = (buf.last(), rest.first()) {
            if l.inverse() != r {
                break;
            }
            buf.pop();
            rest = &rest[1..];
        }
        buf.extend_from_slice(rest);
        Word(buf)
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// All reduced words of length at most `radius` in shortlex order.
    pub fn ball(radius: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..radius {
            let mut next = Vec::with_capacity(layer.len() * 3 + 1);
            for w in &layer {
                for l in Letter::ALL {
                    if w.last() == Some(l.inverse()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// An element of one of the shipped groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Int(i64),
    Pair(i64, i64),
    Word(Word),
}

impl Element {
    pub fn group(&self) -> Group {
        match self {
            Element::Int(_) => Group::Z,
            Element::Pair(..) => Group::Z2,
            Element::Word(_) => Group::F2,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Int(x) => *x == 0,
            Element::Pair(x, y) => *x == 0 && *y == 0,
            Element::Word(w) => w.is_empty(),
        }
    }

    /// ℤ: |x|; ℤ²: max-norm; F(a,b): word length.
    pub fn norm(&self) -> u64 {
        match self {
            Element::Int(x) => x.unsigned_abs(),
            Element::Pair(x, y) => x.unsigned_abs().max(y.unsigned_abs()),
            Element::Word(w) => w.len() as u64,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(x) => Some(*x),
            _ => None,
        }
    }

    /// Group product. Panics on mixed groups; use [`Group::combine`] for a
    /// checked version.
    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (Element::Pair(a, b), Element::Pair(c, d)) => Element::Pair(a + c, b + d),
            (Element::Word(u), Element::Word(v)) => Element::Word(u.mul(v)),
            _ => panic!("product of elements from different groups"),
        }
    }

    pub fn inv(&self) -> Element {
        match self {
            Element::Int(a) => Element::Int(-a),
            Element::Pair(a, b) => Element::Pair(-a, -b),
            Element::Word(w) => Element::Word(w.inv()),
        }
    }

    /// `self⁻¹ · other`.
    pub fn left_div(&self, other: &Element) -> Element {
        self.inv().mul(other)
    }
}

fn rank(g: &Element) -> u8 {
    match g {
        Element::Int(_) => 0,
        Element::Pair(..) => 1,
        Element::Word(_) => 2,
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Element::Int(a), Element::Int(b)) => int_order(*a, *b),
            (Element::Pair(a, b), Element::Pair(c, d)) => {
                self.norm().cmp(&other.norm()).then_with(|| (a, b).cmp(&(c, d)))
            }
            (Element::Word(u), Element::Word(v)) => u.cmp(v),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

/// Canonical order on ℤ: 0, −1, 1, −2, 2, …
pub fn int_order(a: i64, b: i64) -> Ordering {
    a.unsigned_abs()
        .cmp(&b.unsigned_abs())
        .then_with(|| (a > 0).cmp(&(b > 0)))
}

/// ℤ in canonical order up to radius `r`, lazily.
pub fn canonical_ints(r: u64) -> impl Iterator<Item = i64> {
    (0..=r).flat_map(|k| {
        let k = k as i64;
        let first = if k == 0 { 0 } else { -k };
        core::iter::once(first).chain((k != 0).then_some(k))
    })
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(x) => write!(f, "{x}"),
            Element::Pair(x, y) => write!(f, "({x},{y})"),
            Element::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Truncation radius for evidence computations: the interval [−R, R] in ℤ,
/// the max-norm ball in ℤ², words of length ≤ R in F(a,b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window(pub u64);

impl Window {
    pub fn radius(self) -> u64 {
        self.0
    }

    pub fn contains(self, g: &Element) -> bool {
        g.norm() <= self.0
    }

    pub fn doubled(self) -> Window {
        Window(self.0.saturating_mul(2))
    }

    pub fn shrink(self, by: u64) -> Window {
        Window(self.0.saturating_sub(by))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sort canonically and drop duplicates.
pub fn canonicalize(mut v: Vec<Element>) -> Vec<Element> {
    v.sort();
    v.dedup();
    v
}

/// The finite product set `F·G = {f g}`, canonically sorted.
pub fn product_set(f: &[Element], g: &[Element]) -> Vec<Element> {
    let mut out = Vec::with_capacity(f.len() * g.len());
    for a in f {
        for b in g {
            out.push(a.mul(b));
        }
    }
    canonicalize(out)
}
