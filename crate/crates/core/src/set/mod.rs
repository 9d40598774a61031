//! Subsets of the shipped groups.
//!
//! Three representations: explicit finite sets, eventually periodic subsets of
//! ℤ (exact), and enumerated sets built from the named generators with union,
//! difference, translation, finite products and inversion. Membership is
//! decidable for all of them; enumeration inside a window is exact.

mod lacunary;
mod periodic;
mod spec;

use alloc::boxed::Box;
use alloc::vec::Vec;

pub(crate) use lacunary::Lacunary;
pub use lacunary::{Generator, MAX_BLOCK, MAX_Z_RADIUS};
pub(crate) use periodic::lcm;
pub use periodic::{Periodic, MAX_BOUND, MAX_MODULUS};
pub use spec::parse_set_spec;

use crate::cert::Verdict;
use crate::error::Error;
use crate::group::{canonicalize, product_set, Element, Group, Window};

/// Largest translating set accepted by [`SetRepr::product`].
pub const MAX_PRODUCT: usize = 64;
/// Largest interval scanned densely when enumerating ℤ.
pub const MAX_DENSE_SPAN: u64 = 1 << 27;
/// Largest ball materialized in ℤ² or F(a,b).
pub const MAX_BALL: u128 = 1 << 22;

/// A finite, canonically sorted, duplicate-free set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    group: Group,
    elements: Vec<Element>,
}

impl FiniteSet {
    pub fn new(group: Group, elements: Vec<Element>) -> Result<FiniteSet, Error> {
        for g in &elements {
            group.expect(g)?;
        }
        Ok(FiniteSet {
            group,
            elements: canonicalize(elements),
        })
    }

    pub fn ints(values: &[i64]) -> FiniteSet {
        FiniteSet {
            group: Group::Z,
            elements: canonicalize(values.iter().map(|&v| Element::Int(v)).collect()),
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    fn ints_sorted(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.elements.iter().filter_map(Element::as_int).collect();
        v.sort_unstable();
        v
    }
}

/// Composite and generator-backed sets; evidence-only for derivations
/// unless a closed form is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumerated {
    Gen(Generator),
    Union(Box<SetRepr>, Box<SetRepr>),
    Diff(Box<SetRepr>, Box<SetRepr>),
    Translate(Element, Box<SetRepr>),
    Product(FiniteSet, Box<SetRepr>),
    Inverse(Box<SetRepr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRepr {
    Finite(FiniteSet),
    Periodic(Periodic),
    Enumerated(Enumerated),
}

/// Outcome of a symmetry check. `witness` is an element of `A⁻¹ \ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryCheck {
    pub verdict: Verdict,
    pub witness: Option<Element>,
}

impl SetRepr {
    pub fn finite(group: Group, elements: Vec<Element>) -> Result<SetRepr, Error> {
        Ok(SetRepr::Finite(FiniteSet::new(group, elements)?))
    }

    pub fn ints(values: &[i64]) -> SetRepr {
        SetRepr::Finite(FiniteSet::ints(values))
    }

    pub fn generator(g: Generator) -> SetRepr {
        SetRepr::Enumerated(Enumerated::Gen(g))
    }

    pub fn group(&self) -> Group {
        match self {
            SetRepr::Finite(f) => f.group,
            SetRepr::Periodic(_) => Group::Z,
            SetRepr::Enumerated(e) => match e {
                Enumerated::Gen(g) => {
                    if g.is_free_group() {
                        Group::F2
                    } else {
                        Group::Z
                    }
                }
                Enumerated::Union(a, _)
                | Enumerated::Diff(a, _)
                | Enumerated::Product(_, a)
                | Enumerated::Inverse(a) => a.group(),
                Enumerated::Translate(g, _) => g.group(),
            },
        }
    }

    /// The exact ℤ representation, when there is one.
    pub fn exact(&self) -> Option<Periodic> {
        match self {
            SetRepr::Periodic(p) => Some(p.clone()),
            SetRepr::Finite(f) if f.group == Group::Z => Some(Periodic::finite(&f.ints_sorted()).expect("finite set")),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    pub fn contains(&self, g: &Element) -> bool {
        match self {
            SetRepr::Finite(f) => f.contains(g),
            SetRepr::Periodic(p) => g.as_int().is_some_and(|x| p.contains(x)),
            SetRepr::Enumerated(e) => match e {
                Enumerated::Gen(gen) => gen.contains(g),
                Enumerated::Union(a, b) => a.contains(g) || b.contains(g),
                Enumerated::Diff(a, b) => a.contains(g) && !b.contains(g),
                Enumerated::Translate(t, a) => t.group() == g.group() && a.contains(&t.left_div(g)),
                Enumerated::Product(f, a) => {
                    f.group == g.group() && f.elements.iter().any(|t| a.contains(&t.left_div(g)))
                }
                Enumerated::Inverse(a) => a.contains(&g.inv()),
            },
        }
    }

    /// `A ∩ ball(W)`, canonically sorted.
    pub fn enumerate(&self, window: Window) -> Result<Vec<Element>, Error> {
        match self.group() {
            Group::Z => {
                let r = z_radius(window)?;
                let mut v: Vec<Element> = self.members_z(-r, r)?.into_iter().map(Element::Int).collect();
                v.sort();
                Ok(v)
            }
            group => {
                if let SetRepr::Finite(f) = self {
                    return Ok(f.elements.iter().filter(|g| window.contains(g)).cloned().collect());
                }
                if group.ball_size(window.radius().min(64)) > MAX_BALL || window.radius() > 64 {
                    return Err(Error::WindowTooLarge(window.radius()));
                }
                Ok(group
                    .ball(window.radius())
                    .into_iter()
                    .filter(|g| self.contains(g))
                    .collect())
            }
        }
    }

    /// Members of a subset of ℤ inside `[lo, hi]`, ascending.
    pub fn members_z(&self, lo: i64, hi: i64) -> Result<Vec<i64>, Error> {
        if self.group() != Group::Z {
            return Err(Error::NotIntegers);
        }
        if lo > hi {
            return Ok(Vec::new());
        }
        match self {
            SetRepr::Finite(f) => Ok(f.ints_sorted().into_iter().filter(|x| (lo..=hi).contains(x)).collect()),
            SetRepr::Periodic(p) => {
                if !p.is_finite() && hi.abs_diff(lo) > MAX_DENSE_SPAN {
                    return Err(Error::WindowTooLarge(hi.abs_diff(lo)));
                }
                Ok(p.members_in(lo, hi))
            }
            SetRepr::Enumerated(e) => match e {
                Enumerated::Gen(g) => Ok(g.lacunary().ok_or(Error::NotIntegers)?.members(lo, hi)),
                Enumerated::Union(a, b) => {
                    let mut v = a.members_z(lo, hi)?;
                    v.extend(b.members_z(lo, hi)?);
                    v.sort_unstable();
                    v.dedup();
                    Ok(v)
                }
                Enumerated::Diff(a, b) => Ok(a
                    .members_z(lo, hi)?
                    .into_iter()
                    .filter(|&x| !b.contains(&Element::Int(x)))
                    .collect()),
                Enumerated::Translate(t, a) => {
                    let g = t.as_int().ok_or(Error::NotIntegers)?;
                    shifted_members(a, g, lo, hi)
                }
                Enumerated::Product(f, a) => {
                    let mut v = Vec::new();
                    for g in f.ints_sorted() {
                        v.extend(shifted_members(a, g, lo, hi)?);
                    }
                    v.sort_unstable();
                    v.dedup();
                    Ok(v)
                }
                Enumerated::Inverse(a) => {
                    let mut v: Vec<i64> = a
                        .members_z(hi.saturating_neg(), lo.saturating_neg())?
                        .into_iter()
                        .map(|x| -x)
                        .collect();
                    v.reverse();
                    Ok(v)
                }
            },
        }
    }

    /// `A ∪ B`, kept exact when both sides are.
    pub fn union(&self, other: &SetRepr) -> Result<SetRepr, Error> {
        self.same_group(other)?;
        if let (SetRepr::Finite(a), SetRepr::Finite(b)) = (self, other) {
            let mut v = a.elements.clone();
            v.extend(b.elements.iter().cloned());
            return SetRepr::finite(a.group, v);
        }
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return Ok(SetRepr::Periodic(a.union(&b)?));
        }
        Ok(SetRepr::Enumerated(Enumerated::Union(
            Box::new(self.clone()),
            Box::new(other.clone()),
        )))
    }

    /// `A \ B`.
    pub fn difference(&self, other: &SetRepr) -> Result<SetRepr, Error> {
        self.same_group(other)?;
        if let SetRepr::Finite(a) = self {
            let v = a.elements.iter().filter(|g| !other.contains(g)).cloned().collect();
            return SetRepr::finite(a.group, v);
        }
        if let (Some(a), Some(b)) = (self.exact(), other.exact()) {
            return Ok(SetRepr::Periodic(a.difference(&b)?));
        }
        Ok(SetRepr::Enumerated(Enumerated::Diff(
            Box::new(self.clone()),
            Box::new(other.clone()),
        )))
    }

    /// `gA`.
    pub fn translate(&self, g: &Element) -> Result<SetRepr, Error> {
        self.group().expect(g)?;
        match self {
            SetRepr::Finite(f) => SetRepr::finite(f.group, f.elements.iter().map(|a| g.mul(a)).collect()),
            SetRepr::Periodic(p) => Ok(SetRepr::Periodic(p.translate(g.as_int().expect("integer"))?)),
            SetRepr::Enumerated(_) => Ok(SetRepr::Enumerated(Enumerated::Translate(
                g.clone(),
                Box::new(self.clone()),
            ))),
        }
    }

    /// `FA` for a finite `F` with at most [`MAX_PRODUCT`] elements.
    pub fn product(shifts: &[Element], set: &SetRepr) -> Result<SetRepr, Error> {
        if shifts.len() > MAX_PRODUCT {
            return Err(Error::ProductTooLarge(shifts.len()));
        }
        if shifts.is_empty() {
            return Err(Error::InvalidArgument("empty translating set"));
        }
        let group = set.group();
        let fs = FiniteSet::new(group, shifts.to_vec())?;
        match set {
            SetRepr::Finite(a) => SetRepr::finite(group, product_set(&fs.elements, &a.elements)),
            SetRepr::Periodic(p) => Ok(SetRepr::Periodic(p.product(&fs.ints_sorted())?)),
            SetRepr::Enumerated(_) => Ok(SetRepr::Enumerated(Enumerated::Product(fs, Box::new(set.clone())))),
        }
    }

    /// `A⁻¹`.
    pub fn inverse(&self) -> Result<SetRepr, Error> {
        match self {
            SetRepr::Finite(f) => SetRepr::finite(f.group, f.elements.iter().map(Element::inv).collect()),
            SetRepr::Periodic(p) => Ok(SetRepr::Periodic(p.negate()?)),
            SetRepr::Enumerated(_) => Ok(SetRepr::Enumerated(Enumerated::Inverse(Box::new(self.clone())))),
        }
    }

    /// `A = A⁻¹`: exact on finite and periodic sets, otherwise refuted by a
    /// found counterexample or supported as evidence on the window.
    pub fn is_symmetric(&self, window: Window) -> Result<SymmetryCheck, Error> {
        if let SetRepr::Finite(f) = self {
            let witness = f.elements.iter().find(|g| !f.contains(&g.inv())).map(Element::inv);
            return Ok(SymmetryCheck {
                verdict: if witness.is_some() {
                    Verdict::Refuted
                } else {
                    Verdict::Proven
                },
                witness,
            });
        }
        if let Some(p) = self.exact() {
            let n = p.negate()?;
            if n == p {
                return Ok(SymmetryCheck {
                    verdict: Verdict::Proven,
                    witness: None,
                });
            }
            let w = p
                .first_canonical(|x| n.contains(x) != p.contains(x))
                .ok_or(Error::Invariant("asymmetric set without witness"))?;
            let witness = if p.contains(w) { -w } else { w };
            return Ok(SymmetryCheck {
                verdict: Verdict::Refuted,
                witness: Some(Element::Int(witness)),
            });
        }
        let witness = self
            .enumerate(window)?
            .into_iter()
            .find(|g| !self.contains(&g.inv()))
            .map(|g| g.inv());
        Ok(SymmetryCheck {
            verdict: if witness.is_some() {
                Verdict::Refuted
            } else {
                Verdict::Evidence { window, threshold: 1 }
            },
            witness,
        })
    }

    fn same_group(&self, other: &SetRepr) -> Result<(), Error> {
        if self.group() == other.group() {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: self.group(),
                found: other.group(),
            })
        }
    }

    /// Block structure when the set is a finite perturbation of a lacunary
    /// union, with `Some(None)` standing for a finite set.
    pub(crate) fn lacunary(&self) -> Option<Option<Lacunary>> {
        if self.group() != Group::Z {
            return None;
        }
        match self {
            SetRepr::Finite(_) => Some(None),
            SetRepr::Periodic(p) => p.is_finite().then_some(None),
            SetRepr::Enumerated(e) => match e {
                Enumerated::Gen(g) => Some(Some(g.lacunary()?)),
                Enumerated::Union(a, b) => match (a.lacunary()?, b.lacunary()?) {
                    (Some(x), Some(y)) => Some(Some(x.union(y))),
                    (Some(x), None) | (None, Some(x)) => Some(Some(x)),
                    (None, None) => Some(None),
                },
                Enumerated::Diff(a, b) => match (a.lacunary()?, b.lacunary()?) {
                    (None, _) => Some(None),
                    (Some(mut x), None) => {
                        x.removals = true;
                        Some(Some(x))
                    }
                    (Some(_), Some(_)) => None,
                },
                Enumerated::Translate(t, a) => match a.lacunary()? {
                    None => Some(None),
                    Some(x) => Some(Some(x.translated(t.as_int()?)?)),
                },
                Enumerated::Product(f, a) => match a.lacunary()? {
                    None => Some(None),
                    Some(x) => {
                        let mut acc: Option<Lacunary> = None;
                        for g in f.ints_sorted() {
                            let t = x.translated(g)?;
                            acc = Some(match acc {
                                None => t,
                                Some(prev) => prev.union(t),
                            });
                        }
                        Some(acc)
                    }
                },
                Enumerated::Inverse(a) => match a.lacunary()? {
                    None => Some(None),
                    Some(x) => Some(Some(x.negated())),
                },
            },
        }
    }

    /// Finite, or sparse enough that enumeration beats a dense scan.
    pub(crate) fn is_sparse(&self) -> bool {
        match self {
            SetRepr::Finite(_) => true,
            SetRepr::Periodic(p) => p.is_finite(),
            SetRepr::Enumerated(_) => self.lacunary().is_some(),
        }
    }
}

fn shifted_members(a: &SetRepr, g: i64, lo: i64, hi: i64) -> Result<Vec<i64>, Error> {
    Ok(a.members_z(lo.saturating_sub(g), hi.saturating_sub(g))?
        .into_iter()
        .filter_map(|x| x.checked_add(g))
        .filter(|x| (lo..=hi).contains(x))
        .collect())
}

pub(crate) fn z_radius(window: Window) -> Result<i64, Error> {
    if window.radius() > MAX_Z_RADIUS {
        return Err(Error::WindowTooLarge(window.radius()));
    }
    Ok(window.radius() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Letter, Word};

    fn ints(v: &[Element]) -> Vec<i64> {
        v.iter().map(|g| g.as_int().unwrap()).collect()
    }

    fn evens() -> SetRepr {
        SetRepr::Periodic(Periodic::classes(2, &[0]).unwrap())
    }

    fn zero_odds() -> SetRepr {
        SetRepr::Periodic(Periodic::new(2, &[1], &[1], 1, &[0], &[]).unwrap())
    }

    #[test]
    fn contains_examples() {
        assert!(zero_odds().contains(&Element::Int(7)));
        assert!(!zero_odds().contains(&Element::Int(4)));
        assert!(SetRepr::generator(Generator::Pow10).contains(&Element::Int(1000)));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            ints(&zero_odds().enumerate(Window(5)).unwrap()),
            [0, -1, 1, -3, 3, -5, 5]
        );
        assert_eq!(
            ints(&SetRepr::generator(Generator::Pow10).enumerate(Window(10_000)).unwrap()),
            [10, 100, 1000, 10_000]
        );
        assert_eq!(ints(&SetRepr::ints(&[2, 9]).enumerate(Window(5)).unwrap()), [2]);
    }

    #[test]
    fn algebra_examples() {
        let odds = SetRepr::Periodic(Periodic::classes(2, &[1]).unwrap());
        assert_eq!(evens().translate(&Element::Int(1)).unwrap(), odds);
        let all = SetRepr::product(&[Element::Int(0), Element::Int(1)], &evens()).unwrap();
        assert_eq!(all, SetRepr::Periodic(Periodic::integers()));
        assert_eq!(zero_odds().inverse().unwrap(), zero_odds());
    }

    #[test]
    fn product_limit() {
        let big: Vec<Element> = (0..65).map(Element::Int).collect();
        assert_eq!(SetRepr::product(&big, &evens()), Err(Error::ProductTooLarge(65)));
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(zero_odds().is_symmetric(Window(100)).unwrap().verdict, Verdict::Proven);
        assert_eq!(evens().is_symmetric(Window(100)).unwrap().verdict, Verdict::Proven);
        let p = SetRepr::generator(Generator::Pow10).is_symmetric(Window(1000)).unwrap();
        assert_eq!(p.verdict, Verdict::Refuted);
        assert_eq!(p.witness, Some(Element::Int(-10)));
        let half = SetRepr::Periodic(Periodic::new(3, &[0], &[], 0, &[], &[]).unwrap());
        let c = half.is_symmetric(Window(10)).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.witness, Some(Element::Int(-3)));
    }

    #[test]
    fn composite_enumeration() {
        let pow = SetRepr::generator(Generator::Pow10);
        let t = pow.translate(&Element::Int(-10)).unwrap();
        assert_eq!(ints(&t.enumerate(Window(100)).unwrap()), [0, 90]);
        let inv = pow.inverse().unwrap();
        assert_eq!(ints(&inv.enumerate(Window(100)).unwrap()), [-10, -100]);
        let prod = SetRepr::product(&[Element::Int(0), Element::Int(1)], &pow).unwrap();
        assert_eq!(ints(&prod.enumerate(Window(101)).unwrap()), [10, 11, 100, 101]);
        let co = SetRepr::Periodic(Periodic::integers()).difference(&pow).unwrap();
        assert!(!co.contains(&Element::Int(100)));
        assert_eq!(co.enumerate(Window(12)).unwrap().len(), 24);
    }

    #[test]
    fn free_group_generator() {
        let a = SetRepr::generator(Generator::WordsStartEnd(Letter::A, Letter::B));
        assert_eq!(a.group(), Group::F2);
        let ab = Element::Word(Word::new([Letter::A, Letter::B]));
        assert!(a.contains(&ab));
        let single = SetRepr::generator(Generator::WordsStartEnd(Letter::A, Letter::A));
        assert!(single.contains(&Element::Word(Word::letter(Letter::A))));
        // Words of length 2 starting with a and ending with b: only "ab".
        assert_eq!(a.enumerate(Window(2)).unwrap(), vec![ab]);
    }

    #[test]
    fn mixed_groups_rejected() {
        let f = SetRepr::generator(Generator::WordsStartEnd(Letter::A, Letter::B));
        assert!(evens().union(&f).is_err());
    }
}
