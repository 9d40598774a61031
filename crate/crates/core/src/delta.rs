//! Derivations: exact on eventually periodic sets, closed forms for the
//! lacunary generators, windowed evidence everywhere else.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cert::Verdict;
use crate::error::Error;
use crate::group::{Element, Group, Window};
use crate::set::{z_radius, FiniteSet, Periodic, SetRepr, MAX_DENSE_SPAN};

/// Runs independent evaluations; results come back in input order.
pub trait Executor: Sync {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// In-thread executor.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

/// Largest `|A ∩ ball(W)|²` for which the full pair table is built.
pub const MAX_PAIRS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Pairwise differences of an explicit element list.
    Sparse,
    /// Shifted AND of a bitset over the ℤ window.
    Bitset,
    /// Per-candidate membership counting.
    Generic,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Sparse => "sparse",
            Strategy::Bitset => "bitset",
            Strategy::Generic => "generic",
        })
    }
}

enum Backend {
    Dense {
        len: usize,
        bits: Vec<u64>,
    },
    Listed {
        elems: Vec<Element>,
        set: BTreeSet<Element>,
    },
}

/// Windowed multiplicity `count(g) = |gA_W ∩ A_W|` where `A_W = A ∩ ball(W)`.
pub struct Multiplicity {
    window: Window,
    size: u64,
    backend: Backend,
}

fn word_at(bits: &[u64], pos: usize) -> u64 {
    let (w, off) = (pos / 64, pos % 64);
    let lo = bits.get(w).copied().unwrap_or(0) >> off;
    if off == 0 {
        lo
    } else {
        lo | (bits.get(w + 1).copied().unwrap_or(0) << (64 - off))
    }
}

impl Multiplicity {
    pub fn new(set: &SetRepr, window: Window) -> Result<Multiplicity, Error> {
        if set.group() == Group::Z && !set.is_sparse() {
            let r = z_radius(window)?;
            let len = 2 * r as u64 + 1;
            if len > MAX_DENSE_SPAN {
                return Err(Error::WindowTooLarge(window.radius()));
            }
            let mut bits = vec![0u64; (len as usize).div_ceil(64)];
            let mut size = 0;
            for x in set.members_z(-r, r)? {
                let i = (x + r) as usize;
                bits[i / 64] |= 1 << (i % 64);
                size += 1;
            }
            return Ok(Multiplicity {
                window,
                size,
                backend: Backend::Dense {
                    len: len as usize,
                    bits,
                },
            });
        }
        let elems = set.enumerate(window)?;
        let set: BTreeSet<Element> = elems.iter().cloned().collect();
        Ok(Multiplicity {
            window,
            size: elems.len() as u64,
            backend: Backend::Listed { elems, set },
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// `|A ∩ ball(W)|`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn strategy(&self) -> Strategy {
        match self.backend {
            Backend::Dense { .. } => Strategy::Bitset,
            Backend::Listed { .. } if self.size * self.size <= MAX_PAIRS => Strategy::Sparse,
            Backend::Listed { .. } => Strategy::Generic,
        }
    }

    pub fn count(&self, g: &Element) -> u64 {
        match &self.backend {
            Backend::Dense { len, bits } => {
                let Some(s) = g.as_int() else { return 0 };
                let s = s.unsigned_abs();
                if s >= *len as u64 {
                    return 0;
                }
                let s = s as usize;
                bits.iter()
                    .enumerate()
                    .map(|(w, &b)| (b & word_at(bits, w * 64 + s)).count_ones() as u64)
                    .sum()
            }
            Backend::Listed { elems, set } => {
                if g.group() != elems.first().map_or(g.group(), Element::group) {
                    return 0;
                }
                if g.norm() > 2 * self.window.radius() {
                    return 0;
                }
                elems
                    .iter()
                    .filter(|a| {
                        let b = g.mul(a);
                        self.window.contains(&b) && set.contains(&b)
                    })
                    .count() as u64
            }
        }
    }

    /// All nonzero counts, from the pair table. `None` when the table would
    /// be too large or the backend is a bitset.
    pub fn table(&self) -> Option<BTreeMap<Element, u64>> {
        let Backend::Listed { elems, .. } = &self.backend else {
            return None;
        };
        if self.size * self.size > MAX_PAIRS {
            return None;
        }
        let mut t = BTreeMap::new();
        for a in elems {
            for b in elems {
                *t.entry(a.mul(&b.inv())).or_insert(0) += 1;
            }
        }
        Some(t)
    }
}

/// Windowed evidence for membership in a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub window: Window,
    pub threshold: u64,
    pub members: Vec<Element>,
}

impl Evidence {
    pub fn verdict(&self) -> Verdict {
        Verdict::evidence(self.window, self.threshold)
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.members.binary_search(g).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaResult {
    Exact(SetRepr),
    Evidence(Evidence),
}

impl DeltaResult {
    pub fn verdict(&self) -> Verdict {
        match self {
            DeltaResult::Exact(_) => Verdict::Proven,
            DeltaResult::Evidence(e) => e.verdict(),
        }
    }

    pub fn contains(&self, g: &Element) -> bool {
        match self {
            DeltaResult::Exact(s) => s.contains(g),
            DeltaResult::Evidence(e) => e.contains(g),
        }
    }

    pub fn exact(&self) -> Option<&SetRepr> {
        match self {
            DeltaResult::Exact(s) => Some(s),
            DeltaResult::Evidence(_) => None,
        }
    }
}

/// `|gA ∩ A ∩ ball(W)|` in the truncated sense of [`Multiplicity`].
pub fn multiplicity(set: &SetRepr, g: &Element, window: Window) -> Result<u64, Error> {
    set.group().expect(g)?;
    Ok(Multiplicity::new(set, window)?.count(g))
}

/// Exact derivation: residues `(R⁺ − R⁺) ∪ (R⁻ − R⁻)` on both tails.
pub fn delta_exact(set: &Periodic) -> Periodic {
    let p = set.modulus();
    let mut hit = vec![false; p as usize];
    for side in [set.pos_residues(), set.neg_residues()] {
        for &a in &side {
            for &b in &side {
                hit[((a + p - b) % p) as usize] = true;
            }
        }
    }
    let residues: Vec<u64> = (0..p).filter(|&r| hit[r as usize]).collect();
    Periodic::classes(p, &residues).expect("residues in range")
}

/// The derivation in closed form, when one is known: eventually periodic
/// sets, finite sets in any group, and finite perturbations of the lacunary
/// generators and their translates, unions and inverses.
pub fn delta_closed_form(set: &SetRepr) -> Result<Option<SetRepr>, Error> {
    if let SetRepr::Finite(f) = set {
        return Ok(Some(empty_like(f.group())));
    }
    if let Some(p) = set.exact() {
        return Ok(Some(SetRepr::Periodic(delta_exact(&p))));
    }
    match set.lacunary() {
        Some(None) => Ok(Some(empty_like(set.group()))),
        Some(Some(l)) => Ok(l.recurring_differences()?.map(SetRepr::Periodic)),
        None => Ok(None),
    }
}

fn empty_like(group: Group) -> SetRepr {
    match group {
        Group::Z => SetRepr::Periodic(Periodic::empty()),
        g => SetRepr::finite(g, Vec::new()).expect("empty"),
    }
}

/// `{g ∈ ball(W) : count(g) ≥ t}`.
pub fn delta_window<E: Executor>(set: &SetRepr, window: Window, threshold: u64, exec: &E) -> Result<Evidence, Error> {
    delta_window_within(set, window, threshold, window, exec)
}

fn candidates(group: Group, region: Window) -> Result<Vec<Element>, Error> {
    match group {
        Group::Z => {
            let r = z_radius(region)?;
            if 2 * r as u64 + 1 > MAX_DENSE_SPAN {
                return Err(Error::WindowTooLarge(region.radius()));
            }
            let mut v: Vec<Element> = (-r..=r).map(Element::Int).collect();
            v.sort();
            Ok(v)
        }
        g => {
            if region.radius() > 16 {
                return Err(Error::WindowTooLarge(region.radius()));
            }
            Ok(g.ball(region.radius()))
        }
    }
}

/// [`delta_window`] with candidates restricted to `ball(region)`.
pub fn delta_window_within<E: Executor>(
    set: &SetRepr,
    window: Window,
    threshold: u64,
    region: Window,
    exec: &E,
) -> Result<Evidence, Error> {
    if threshold == 0 {
        return Err(Error::InvalidArgument("threshold must be at least 1"));
    }
    let oracle = Multiplicity::new(set, window)?;
    let region = region.min(window);
    let mut members: Vec<Element> = match oracle.table() {
        Some(t) => t
            .into_iter()
            .filter(|(g, c)| *c >= threshold && region.contains(g))
            .map(|(g, _)| g)
            .collect(),
        None => {
            let cands = candidates(set.group(), region)?;
            let counts = exec.map(&cands, |g| oracle.count(g));
            cands
                .into_iter()
                .zip(counts)
                .filter(|(_, c)| *c >= threshold)
                .map(|(g, _)| g)
                .collect()
        }
    };
    members.sort();
    Ok(Evidence {
        window,
        threshold,
        members,
    })
}

/// Windowed derivation with an annulus test: `g` is kept when both
/// `count_W(g) ≥ t` and `count_2W(g) − count_W(g) ≥ t`, so overlaps confined
/// near the origin drop out. Candidates range over `ball(region)`.
pub fn delta_stabilized<E: Executor>(
    set: &SetRepr,
    window: Window,
    threshold: u64,
    region: Window,
    exec: &E,
) -> Result<Evidence, Error> {
    if threshold == 0 {
        return Err(Error::InvalidArgument("threshold must be at least 1"));
    }
    let inner = Multiplicity::new(set, window)?;
    let outer = Multiplicity::new(set, window.doubled())?;
    let cands = candidates(set.group(), region.min(window))?;
    let keep = exec.map(&cands, |g| {
        let a = inner.count(g);
        let b = outer.count(g);
        a >= threshold && b - a >= threshold
    });
    let members = cands
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    Ok(Evidence {
        window,
        threshold,
        members,
    })
}

/// Windowed evidence checked against the closed form: every evidence member
/// must lie in the closed form, which is then returned.
pub fn handoff<E: Executor>(
    set: &SetRepr,
    window: Window,
    threshold: u64,
    exec: &E,
) -> Result<(Evidence, SetRepr), Error> {
    let closed = delta_closed_form(set)?.ok_or(Error::NotExact)?;
    let ev = delta_window(set, window, threshold, exec)?;
    if let Some(g) = ev.members.iter().find(|g| !closed.contains(g)) {
        return Err(Error::HandoffMismatch(g.clone()));
    }
    Ok((ev, closed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterMode {
    Exact,
    Window {
        window: Window,
        threshold: u64,
    },
    /// First step windowed and checked against the closed form, then exact.
    Handoff {
        window: Window,
        threshold: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// `steps[k]` is `Δ^(k+1)(A)`.
    pub steps: Vec<DeltaResult>,
    /// The first `n` with `Δⁿ(A) = Δⁿ⁻¹(A)`.
    pub fixed_point: Option<usize>,
    /// Evidence consumed by a hand-off.
    pub handoff: Option<Evidence>,
}

fn exact_start(set: &SetRepr) -> Result<SetRepr, Error> {
    match set {
        SetRepr::Finite(f) if f.group() != Group::Z => Ok(set.clone()),
        _ => set.exact().map(SetRepr::Periodic).ok_or(Error::NotExact),
    }
}

fn exact_step(set: &SetRepr) -> SetRepr {
    match set {
        SetRepr::Periodic(p) => SetRepr::Periodic(delta_exact(p)),
        other => empty_like(other.group()),
    }
}

/// `Δ¹(A), …, Δⁿ(A)`, stopping at the first fixed point.
pub fn iterate_delta<E: Executor>(set: &SetRepr, n: usize, mode: IterMode, exec: &E) -> Result<Trace, Error> {
    let mut trace = Trace {
        steps: Vec::new(),
        fixed_point: None,
        handoff: None,
    };
    match mode {
        IterMode::Window { window, threshold } => {
            let mut cur = set.clone();
            let mut prev: Option<Vec<Element>> = None;
            for k in 1..=n {
                let ev = delta_window(&cur, window, threshold, exec)?;
                cur = SetRepr::Finite(FiniteSet::new(set.group(), ev.members.clone())?);
                let fixed = prev.as_ref() == Some(&ev.members);
                prev = Some(ev.members.clone());
                trace.steps.push(DeltaResult::Evidence(ev));
                if fixed {
                    trace.fixed_point = Some(k);
                    break;
                }
            }
        }
        IterMode::Exact | IterMode::Handoff { .. } => {
            let mut cur = match mode {
                IterMode::Handoff { window, threshold } if n > 0 => {
                    let (ev, closed) = handoff(set, window, threshold, exec)?;
                    trace.handoff = Some(ev);
                    trace.steps.push(DeltaResult::Exact(closed.clone()));
                    if set.exact().map(SetRepr::Periodic).as_ref() == Some(&closed) {
                        trace.fixed_point = Some(1);
                        return Ok(trace);
                    }
                    closed
                }
                _ => exact_start(set)?,
            };
            for k in trace.steps.len() + 1..=n {
                let next = exact_step(&cur);
                let fixed = next == cur;
                trace.steps.push(DeltaResult::Exact(next.clone()));
                if fixed {
                    trace.fixed_point = Some(k);
                    break;
                }
                cur = next;
            }
        }
    }
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationCheck {
    /// `Δ(F + A)`.
    pub lhs: Periodic,
    /// `Δ(A)`.
    pub rhs: Periodic,
    pub holds: bool,
}

/// Compares `Δ(F + A)` with `Δ(A)` exactly.
pub fn conjugation_check(shifts: &[Element], set: &Periodic) -> Result<ConjugationCheck, Error> {
    let prod = SetRepr::product(shifts, &SetRepr::Periodic(set.clone()))?;
    let lhs = delta_exact(&prod.exact().ok_or(Error::NotExact)?);
    let rhs = delta_exact(set);
    Ok(ConjugationCheck {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// The full difference set `A − A`, exactly.
pub fn difference_set(set: &Periodic) -> Result<Periodic, Error> {
    let p = set.modulus() as i64;
    let m = set.bound() as i64;
    let k = 2 * m + 3 * p;
    let l = m + p + k;
    let span = (2 * l + 1) as usize;
    if span as u64 > MAX_DENSE_SPAN {
        return Err(Error::WindowTooLarge(l as u64));
    }
    let mut bits = vec![0u64; span.div_ceil(64)];
    for x in set.members_in(-l, l) {
        let i = (x + l) as usize;
        bits[i / 64] |= 1 << (i % 64);
    }
    let hit: Vec<bool> = (0..=k as usize)
        .map(|s| {
            bits.iter()
                .enumerate()
                .any(|(w, &b)| b & word_at(&bits, w * 64 + s) != 0)
        })
        .collect();
    let member = |x: i64| hit[x.unsigned_abs() as usize];
    let pos: Vec<bool> = (0..p)
        .map(|r| {
            let x = (k - p + 1..=k).find(|x| x.rem_euclid(p) == r).expect("full period");
            member(x)
        })
        .collect();
    let neg: Vec<bool> = (0..p).map(|r| pos[((p - r) % p) as usize]).collect();
    Periodic::build(pos, neg, k as u64, member)
}

/// `(A_W · A_W⁻¹) ∩ ball(W)`, the windowed difference set.
pub fn windowed_differences(set: &SetRepr, window: Window) -> Result<Vec<Element>, Error> {
    let oracle = Multiplicity::new(set, window)?;
    if let Some(t) = oracle.table() {
        return Ok(t.into_keys().filter(|g| window.contains(g)).collect());
    }
    let cands = candidates(set.group(), window)?;
    Ok(cands.into_iter().filter(|g| oracle.count(g) > 0).collect())
}
