//! Built-in enumerators and their block structure.
//!
//! The integer generators are lacunary: they are unions of components, each
//! contributing one element `±10ᵏ + offset(k)` to block `k` (block 0 sits at
//! the origin). Offsets grow far slower than the gaps between blocks, so a
//! difference arising between two blocks recurs only finitely often. This
//! gives closed forms for the infinitely recurring differences (the
//! derivation) and for the within-block differences (a lower bound on the
//! full difference set).

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::group::{Element, Letter};
use crate::sequence::schedule_index;
use crate::set::periodic::Periodic;

/// Last block whose base `10ᵏ` is representable.
pub const MAX_BLOCK: u32 = 18;
/// Largest integer window radius supported by enumeration.
pub const MAX_Z_RADIUS: u64 = 1_000_000_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// {10ⁿ : n ≥ 1}
    Pow10,
    /// {10ⁿ, 10ⁿ + n : n ≥ 1}
    Pow10PlusN,
    /// {10ⁿ + o(n)} with offsets 1; 1,2; 1,2,3; …
    Pow10Staircase,
    /// {0, 1} ∪ {10ⁿ, 10ⁿ + o(n)} with odd offsets 1; 1,3; 1,3,5; … (the
    /// pair at the origin takes the first offset).
    NablaExample,
    /// Reduced words of F(a,b) starting with the first letter and ending with
    /// the second. A single-letter word `x` belongs to `xSx`.
    WordsStartEnd(Letter, Letter),
}

impl Generator {
    pub fn by_name(name: &str, args: Option<(Letter, Letter)>) -> Option<Generator> {
        match (name, args) {
            ("pow10", None) => Some(Generator::Pow10),
            ("pow10_plus_n", None) => Some(Generator::Pow10PlusN),
            ("pow10_staircase", None) => Some(Generator::Pow10Staircase),
            ("nabla_example", None) => Some(Generator::NablaExample),
            ("fg_xSy", Some((x, y))) => Some(Generator::WordsStartEnd(x, y)),
            _ => None,
        }
    }

    pub fn is_free_group(&self) -> bool {
        matches!(self, Generator::WordsStartEnd(..))
    }

    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (Generator::WordsStartEnd(x, y), Element::Word(w)) => w.first() == Some(*x) && w.last() == Some(*y),
            (Generator::WordsStartEnd(..), _) => false,
            (_, Element::Int(v)) => self.lacunary().expect("integer generator").contains(*v),
            _ => false,
        }
    }

    /// Block structure of the integer generators.
    pub(crate) fn lacunary(&self) -> Option<Lacunary> {
        let aff = |first_block, coef, constant| Component {
            sign: 1,
            first_block,
            rule: OffsetRule::Affine { coef, constant },
        };
        let components = match self {
            Generator::Pow10 => alloc::vec![aff(1, 0, 0)],
            Generator::Pow10PlusN => alloc::vec![aff(1, 0, 0), aff(1, 1, 0)],
            Generator::Pow10Staircase => alloc::vec![Component {
                sign: 1,
                first_block: 1,
                rule: OffsetRule::Triangular {
                    scale: 1,
                    shift: 0,
                    lag: 0,
                },
            }],
            Generator::NablaExample => alloc::vec![
                aff(0, 0, 0),
                Component {
                    sign: 1,
                    first_block: 0,
                    rule: OffsetRule::Triangular {
                        scale: 2,
                        shift: -1,
                        lag: 1,
                    },
                },
            ],
            Generator::WordsStartEnd(..) => return None,
        };
        Some(Lacunary {
            components,
            removals: false,
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Pow10 => f.write_str("pow10"),
            Generator::Pow10PlusN => f.write_str("pow10_plus_n"),
            Generator::Pow10Staircase => f.write_str("pow10_staircase"),
            Generator::NablaExample => f.write_str("nabla_example"),
            Generator::WordsStartEnd(x, y) => {
                write!(f, "fg_xSy({},{})", x.as_char(), y.as_char())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum OffsetRule {
    /// `coef·k + constant`
    Affine { coef: i64, constant: i64 },
    /// `scale·j + shift` where `j = schedule_index(k + lag)`.
    Triangular { scale: i64, shift: i64, lag: u64 },
}

impl OffsetRule {
    fn at(&self, k: u32) -> Option<i64> {
        match *self {
            OffsetRule::Affine { coef, constant } => coef.checked_mul(k as i64)?.checked_add(constant),
            OffsetRule::Triangular { scale, shift, lag } => {
                let j = schedule_index(k as u64 + lag) as i64;
                scale.checked_mul(j)?.checked_add(shift)
            }
        }
    }

    fn shifted(&self, g: i64) -> Option<OffsetRule> {
        Some(match *self {
            OffsetRule::Affine { coef, constant } => OffsetRule::Affine {
                coef,
                constant: constant.checked_add(g)?,
            },
            OffsetRule::Triangular { scale, shift, lag } => OffsetRule::Triangular {
                scale,
                shift: shift.checked_add(g)?,
                lag,
            },
        })
    }

    fn negated(&self) -> OffsetRule {
        match *self {
            OffsetRule::Affine { coef, constant } => OffsetRule::Affine {
                coef: -coef,
                constant: -constant,
            },
            OffsetRule::Triangular { scale, shift, lag } => OffsetRule::Triangular {
                scale: -scale,
                shift: -shift,
                lag,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Component {
    pub sign: i64,
    pub first_block: u32,
    pub rule: OffsetRule,
}

fn base(k: u32) -> i64 {
    if k == 0 {
        0
    } else {
        10i64.pow(k)
    }
}

impl Component {
    fn value(&self, k: u32) -> Option<i64> {
        if k < self.first_block {
            return None;
        }
        (self.sign * base(k)).checked_add(self.rule.at(k)?)
    }
}

/// Image of a progression `{start + step·j : j ≥ 0}` (a single point when
/// `step = 0`).
fn ray(step: i64, start: i64) -> Result<Periodic, Error> {
    if step == 0 {
        return Periodic::finite(&[start]);
    }
    if step < 0 {
        return ray(-step, -start)?.negate();
    }
    let p = step as u64;
    let r = start.rem_euclid(step) as u64;
    if start >= 0 {
        Periodic::new(p, &[r], &[], start as u64, &[], &[])
    } else {
        let below: Vec<i64> = (0..).map(|j| start + step * j).take_while(|&x| x < 0).collect();
        Periodic::new(p, &[r], &[], 0, &below, &[])
    }
}

/// Differences `c₁(k) − c₂(k)` inside one block, for two same-sign components.
struct PairDiff {
    /// Values taken infinitely often.
    recurring: Option<Periodic>,
    /// Values taken at least once from block `from` on.
    realized: Option<Periodic>,
}

fn pair_diff(a: &Component, b: &Component) -> Result<Option<PairDiff>, Error> {
    let from = a.first_block.max(b.first_block) as i64;
    use OffsetRule::*;
    let out = match (&a.rule, &b.rule) {
        (Affine { coef: a1, constant: c1 }, Affine { coef: a2, constant: c2 }) => {
            let step = a1 - a2;
            let c = c1 - c2;
            if step == 0 {
                let p = Periodic::finite(&[c])?;
                PairDiff {
                    recurring: Some(p.clone()),
                    realized: Some(p),
                }
            } else {
                PairDiff {
                    recurring: None,
                    realized: Some(ray(step, step * from + c)?),
                }
            }
        }
        (
            Triangular {
                scale: s1,
                shift: h1,
                lag: l1,
            },
            Triangular {
                scale: s2,
                shift: h2,
                lag: l2,
            },
        ) => {
            if l1 != l2 {
                return Ok(None);
            }
            let step = s1 - s2;
            let p = ray(step, step + (h1 - h2))?;
            PairDiff {
                recurring: Some(p.clone()),
                realized: Some(p),
            }
        }
        (Affine { coef, constant }, Triangular { scale, shift, .. }) => {
            if *coef != 0 {
                PairDiff {
                    recurring: None,
                    realized: None,
                }
            } else {
                let p = ray(-scale, constant - scale - shift)?;
                PairDiff {
                    recurring: Some(p.clone()),
                    realized: Some(p),
                }
            }
        }
        (Triangular { .. }, Affine { .. }) => {
            return Ok(pair_diff(b, a)?.map(|d| {
                let neg = |p: Option<Periodic>| p.map(|p| p.negate().expect("negation in range"));
                PairDiff {
                    recurring: neg(d.recurring),
                    realized: neg(d.realized),
                }
            }))
        }
    };
    Ok(Some(out))
}

/// A union of block components, possibly perturbed by finitely many points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Lacunary {
    pub components: Vec<Component>,
    /// Finitely many points were removed; the realized-difference bound is
    /// then unavailable.
    pub removals: bool,
}

impl Lacunary {
    pub fn contains(&self, x: i64) -> bool {
        self.components
            .iter()
            .any(|c| (c.first_block..=MAX_BLOCK).any(|k| c.value(k) == Some(x)))
    }

    pub fn members(&self, lo: i64, hi: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .components
            .iter()
            .flat_map(|c| (c.first_block..=MAX_BLOCK).filter_map(move |k| c.value(k)))
            .filter(|v| (lo..=hi).contains(v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn union(mut self, other: Lacunary) -> Lacunary {
        for c in other.components {
            if !self.components.contains(&c) {
                self.components.push(c);
            }
        }
        self.removals |= other.removals;
        self
    }

    pub fn translated(&self, g: i64) -> Option<Lacunary> {
        let components = self
            .components
            .iter()
            .map(|c| {
                Some(Component {
                    sign: c.sign,
                    first_block: c.first_block,
                    rule: c.rule.shifted(g)?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Lacunary {
            components,
            removals: self.removals,
        })
    }

    pub fn negated(&self) -> Lacunary {
        Lacunary {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    sign: -c.sign,
                    first_block: c.first_block,
                    rule: c.rule.negated(),
                })
                .collect(),
            removals: self.removals,
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (&Component, &Component)> {
        self.components.iter().flat_map(move |a| {
            self.components
                .iter()
                .filter(move |b| b.sign == a.sign)
                .map(move |b| (a, b))
        })
    }

    /// The differences recurring infinitely often, i.e. the derivation of
    /// the set. `None` when the components are outside the supported shapes.
    pub fn recurring_differences(&self) -> Result<Option<Periodic>, Error> {
        if self.components.is_empty() {
            return Ok(Some(Periodic::empty()));
        }
        let mut acc = Periodic::finite(&[0])?;
        for (a, b) in self.pairs() {
            match pair_diff(a, b)? {
                None => return Ok(None),
                Some(d) => {
                    if let Some(r) = d.recurring {
                        acc = acc.union(&r)?;
                    }
                }
            }
        }
        Ok(Some(acc))
    }

    /// A subset of the full difference set `A − A`, from within-block pairs.
    pub fn realized_differences(&self) -> Result<Option<Periodic>, Error> {
        if self.removals {
            return Ok(None);
        }
        let mut acc = if self.components.is_empty() {
            Periodic::empty()
        } else {
            Periodic::finite(&[0])?
        };
        for (a, b) in self.pairs() {
            match pair_diff(a, b)? {
                None => return Ok(None),
                Some(d) => {
                    if let Some(r) = d.realized {
                        acc = acc.union(&r)?;
                    }
                }
            }
        }
        Ok(Some(acc))
    }
}
