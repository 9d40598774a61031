//! Eventually periodic subsets of ℤ.
//!
//! A value denotes `({x ≥ m : x mod p ∈ R⁺} ∪ {x ≤ −m : x mod p ∈ R⁻} ∪ add) \ remove`.
//! Every constructor normalizes, so two values compare equal exactly when they
//! denote the same set:
//!
//! * `p` is the least common period of the two tails,
//! * `m` minimizes `|add| + |remove|` (smallest such `m` on ties),
//! * `add` lies outside the tail set and `remove` inside it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Largest modulus produced by set algebra.
pub const MAX_MODULUS: u64 = 1 << 16;
/// Largest exception radius scanned during normalization.
pub const MAX_BOUND: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Periodic {
    pub(crate) modulus: u64,
    pub(crate) pos: Vec<bool>,
    pub(crate) neg: Vec<bool>,
    pub(crate) tail_start: u64,
    pub(crate) add: Vec<i64>,
    pub(crate) remove: Vec<i64>,
}

pub(crate) fn residue(x: i64, p: u64) -> usize {
    x.rem_euclid(p as i64) as usize
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> Result<u64, Error> {
    let l = a / gcd(a, b) * b;
    if l > MAX_MODULUS {
        return Err(Error::InvalidPeriodic("combined modulus too large"));
    }
    Ok(l)
}

fn min_period(pattern: &[bool]) -> u64 {
    let p = pattern.len();
    (1..=p)
        .filter(|d| p.is_multiple_of(*d))
        .find(|&d| (0..p).all(|i| pattern[i] == pattern[i % d]))
        .unwrap_or(p) as u64
}

impl Periodic {
    /// Validating constructor from the raw textual fields.
    pub fn new(
        modulus: u64,
        pos: &[u64],
        neg: &[u64],
        tail_start: u64,
        add: &[i64],
        remove: &[i64],
    ) -> Result<Periodic, Error> {
        if modulus == 0 {
            return Err(Error::InvalidPeriodic("modulus must be at least 1"));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::InvalidPeriodic("modulus too large"));
        }
        let mut pos_v = vec![false; modulus as usize];
        let mut neg_v = vec![false; modulus as usize];
        for (src, dst) in [(pos, &mut pos_v), (neg, &mut neg_v)] {
            for &r in src {
                if r >= modulus {
                    return Err(Error::InvalidPeriodic("residue out of range"));
                }
                dst[r as usize] = true;
            }
        }
        if add.iter().any(|x| remove.contains(x)) {
            return Err(Error::InvalidPeriodic("add and remove overlap"));
        }
        let m = tail_start as i64;
        let in_tail = |x: i64| (x >= m && pos_v[residue(x, modulus)]) || (x <= -m && neg_v[residue(x, modulus)]);
        if remove.iter().any(|&x| !in_tail(x)) {
            return Err(Error::InvalidPeriodic("removed element is not in the tail set"));
        }
        let bound = add
            .iter()
            .chain(remove)
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
            .max(tail_start);
        let member = |x: i64| (in_tail(x) || add.contains(&x)) && !remove.contains(&x);
        Periodic::build(pos_v.clone(), neg_v.clone(), bound, member)
    }

    /// A finite set.
    pub fn finite(elements: &[i64]) -> Result<Periodic, Error> {
        Periodic::new(1, &[], &[], 0, elements, &[])
    }

    /// The full residue classes `{x : x mod p ∈ residues}` on both tails.
    pub fn classes(modulus: u64, residues: &[u64]) -> Result<Periodic, Error> {
        Periodic::new(modulus, residues, residues, 0, &[], &[])
    }

    pub fn integers() -> Periodic {
        Periodic::classes(1, &[0]).expect("valid")
    }

    pub fn empty() -> Periodic {
        Periodic::finite(&[]).expect("valid")
    }

    /// Normalizing builder. `pos`/`neg` describe membership for `x > bound`
    /// and `x < −bound`; `member` is queried on `[−bound, bound]` only.
    pub(crate) fn build(
        pos: Vec<bool>,
        neg: Vec<bool>,
        bound: u64,
        member: impl Fn(i64) -> bool,
    ) -> Result<Periodic, Error> {
        debug_assert_eq!(pos.len(), neg.len());
        if bound > MAX_BOUND {
            return Err(Error::WindowTooLarge(bound));
        }
        let q = {
            let a = min_period(&pos);
            let b = min_period(&neg);
            a / gcd(a, b) * b
        };
        let pos: Vec<bool> = pos[..q as usize].to_vec();
        let neg: Vec<bool> = neg[..q as usize].to_vec();
        let b = bound as i64;
        let tp = |x: i64| pos[residue(x, q)];
        let tn = |x: i64| neg[residue(x, q)];
        let s: Vec<bool> = (-b..=b).map(&member).collect();
        let at = |x: i64| s[(x + b) as usize];

        // cost(0), then cost(m) for m = 1..=b+1 incrementally.
        let mut mismatch_tail = 0u64;
        for k in 1..=b {
            mismatch_tail += (at(k) != tp(k)) as u64 + (at(-k) != tn(-k)) as u64;
        }
        let s0 = at(0);
        let mut best_m = 0i64;
        let mut best = mismatch_tail + (s0 != (tp(0) || tn(0))) as u64;
        let mut cost = s0 as u64 + mismatch_tail;
        for m in 1..=b + 1 {
            if cost < best {
                best = cost;
                best_m = m;
            }
            if m <= b {
                cost = cost + at(m) as u64 + at(-m) as u64 - ((at(m) != tp(m)) as u64 + (at(-m) != tn(-m)) as u64);
            }
        }
        let m = best_m;
        let tail = |x: i64| (x >= m && tp(x)) || (x <= -m && tn(x));
        let mut add = Vec::new();
        let mut remove = Vec::new();
        for x in -b..=b {
            match (at(x), tail(x)) {
                (true, false) => add.push(x),
                (false, true) => remove.push(x),
                _ => {}
            }
        }
        Ok(Periodic {
            modulus: q,
            pos,
            neg,
            tail_start: m as u64,
            add,
            remove,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pos_residues(&self) -> Vec<u64> {
        ones(&self.pos)
    }

    pub fn neg_residues(&self) -> Vec<u64> {
        ones(&self.neg)
    }

    pub fn tail_start(&self) -> u64 {
        self.tail_start
    }

    pub fn add(&self) -> &[i64] {
        &self.add
    }

    pub fn remove(&self) -> &[i64] {
        &self.remove
    }

    pub(crate) fn pos_at(&self, r: i64) -> bool {
        self.pos[residue(r, self.modulus)]
    }

    pub(crate) fn neg_at(&self, r: i64) -> bool {
        self.neg[residue(r, self.modulus)]
    }

    fn in_tail(&self, x: i64) -> bool {
        let m = self.tail_start as i64;
        (x >= m && self.pos_at(x)) || (x <= -m && self.neg_at(x))
    }

    pub fn contains(&self, x: i64) -> bool {
        if self.add.binary_search(&x).is_ok() {
            return true;
        }
        self.in_tail(x) && self.remove.binary_search(&x).is_err()
    }

    /// Beyond this radius membership follows the tail residues.
    pub fn bound(&self) -> u64 {
        self.add
            .iter()
            .chain(&self.remove)
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
            .max(self.tail_start)
    }

    pub fn is_finite(&self) -> bool {
        !self.pos.iter().any(|&b| b) && !self.neg.iter().any(|&b| b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.add.is_empty()
    }

    pub fn is_integers(&self) -> bool {
        *self == Periodic::integers()
    }

    /// Elements of a finite set, ascending. `None` if infinite.
    pub fn finite_elements(&self) -> Option<&[i64]> {
        self.is_finite().then_some(self.add.as_slice())
    }

    /// Ascending members of `[lo, hi]`.
    pub fn members_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        if lo > hi {
            return Vec::new();
        }
        if self.is_finite() {
            return self.add.iter().copied().filter(|x| (lo..=hi).contains(x)).collect();
        }
        (lo..=hi).filter(|&x| self.contains(x)).collect()
    }

    pub fn translate(&self, g: i64) -> Result<Periodic, Error> {
        let p = self.modulus;
        let shifted = |v: &Vec<bool>| -> Vec<bool> { (0..p as i64).map(|r| v[residue(r - g, p)]).collect() };
        let bound = self
            .bound()
            .checked_add(g.unsigned_abs())
            .ok_or(Error::WindowTooLarge(u64::MAX))?;
        Periodic::build(shifted(&self.pos), shifted(&self.neg), bound, |x| self.contains(x - g))
    }

    /// `{−x : x ∈ self}`.
    pub fn negate(&self) -> Result<Periodic, Error> {
        let p = self.modulus;
        let flip = |v: &Vec<bool>| -> Vec<bool> { (0..p as i64).map(|r| v[residue(-r, p)]).collect() };
        Periodic::build(flip(&self.neg), flip(&self.pos), self.bound(), |x| self.contains(-x))
    }

    fn combine(&self, other: &Periodic, op: impl Fn(bool, bool) -> bool) -> Result<Periodic, Error> {
        let q = lcm(self.modulus, other.modulus)?;
        let mix = |a: &Vec<bool>, b: &Vec<bool>| -> Vec<bool> {
            (0..q as usize).map(|r| op(a[r % a.len()], b[r % b.len()])).collect()
        };
        Periodic::build(
            mix(&self.pos, &other.pos),
            mix(&self.neg, &other.neg),
            self.bound().max(other.bound()),
            |x| op(self.contains(x), other.contains(x)),
        )
    }

    pub fn union(&self, other: &Periodic) -> Result<Periodic, Error> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Periodic) -> Result<Periodic, Error> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Periodic) -> Result<Periodic, Error> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Result<Periodic, Error> {
        let not = |v: &Vec<bool>| v.iter().map(|b| !b).collect::<Vec<_>>();
        Periodic::build(not(&self.pos), not(&self.neg), self.bound(), |x| !self.contains(x))
    }

    /// `F + A` for a finite translating set.
    pub fn product(&self, shifts: &[i64]) -> Result<Periodic, Error> {
        let p = self.modulus;
        let spread = |v: &Vec<bool>| -> Vec<bool> {
            (0..p as i64)
                .map(|r| shifts.iter().any(|&f| v[residue(r - f, p)]))
                .collect()
        };
        let reach = shifts.iter().map(|f| f.unsigned_abs()).max().unwrap_or(0);
        Periodic::build(
            spread(&self.pos),
            spread(&self.neg),
            self.bound().saturating_add(reach),
            |x| shifts.iter().any(|&f| self.contains(x - f)),
        )
    }

    /// Canonically least `x` (order 0, −1, 1, …) with `pred(x)`, scanning
    /// far enough that a periodic predicate must have shown every class.
    pub fn first_canonical(&self, pred: impl Fn(i64) -> bool) -> Option<i64> {
        let reach = self.bound() + 2 * self.modulus + 1;
        crate::group::canonical_ints(reach).find(|&x| pred(x))
    }
}

fn ones(v: &[bool]) -> Vec<u64> {
    v.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> Periodic {
        Periodic::classes(2, &[0]).unwrap()
    }

    fn odds() -> Periodic {
        Periodic::classes(2, &[1]).unwrap()
    }

    fn zero_and_odds() -> Periodic {
        Periodic::new(2, &[1], &[1], 1, &[0], &[]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let a = zero_and_odds();
        assert!(a.contains(7));
        assert!(a.contains(0));
        assert!(a.contains(-3));
        assert!(!a.contains(4));
    }

    #[test]
    fn normal_form_is_extensional() {
        // Same set written three ways.
        let a = Periodic::new(4, &[0, 2], &[0, 2], 6, &[0, 2, 4, -2, -4], &[]).unwrap();
        let b = Periodic::new(2, &[0], &[0], 0, &[], &[]).unwrap();
        let c = Periodic::new(6, &[0, 2, 4], &[0, 2, 4], 3, &[-2, 0, 2], &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(b.modulus(), 2);
        assert_eq!(b.tail_start(), 0);
    }

    #[test]
    fn remove_survives_normalization() {
        let a = Periodic::new(1, &[0], &[0], 0, &[], &[5]).unwrap();
        assert_eq!(a.remove(), &[5]);
        assert!(a.add().is_empty());
        assert!(!a.contains(5));
        assert!(a.contains(4) && a.contains(6) && a.contains(-5));
    }

    #[test]
    fn validation_errors() {
        assert!(Periodic::new(0, &[], &[], 0, &[], &[]).is_err());
        assert!(Periodic::new(2, &[2], &[], 0, &[], &[]).is_err());
        assert!(Periodic::new(2, &[0], &[0], 0, &[4], &[4]).is_err());
        assert!(Periodic::new(2, &[0], &[0], 0, &[], &[3]).is_err());
    }

    #[test]
    fn translate_evens_is_odds() {
        assert_eq!(evens().translate(1).unwrap(), odds());
        assert_eq!(evens().translate(-7).unwrap(), odds());
        assert_eq!(evens().translate(10).unwrap(), evens());
    }

    #[test]
    fn product_with_two_shifts_is_everything() {
        let p = evens().product(&[0, 1]).unwrap();
        assert!(p.is_integers());
        for x in -100..=100 {
            assert!(p.contains(x));
        }
    }

    #[test]
    fn negate_symmetric_set() {
        assert_eq!(zero_and_odds().negate().unwrap(), zero_and_odds());
        let pos_evens = Periodic::new(2, &[0], &[], 0, &[], &[]).unwrap();
        let neg = pos_evens.negate().unwrap();
        assert!(neg.contains(-4) && !neg.contains(4));
    }

    #[test]
    fn boolean_algebra() {
        let e = evens();
        let o = odds();
        assert!(e.union(&o).unwrap().is_integers());
        assert!(e.intersect(&o).unwrap().is_empty());
        assert_eq!(Periodic::integers().difference(&e).unwrap(), o);
        assert_eq!(e.complement().unwrap(), o);
    }

    #[test]
    fn finite_sets() {
        let f = Periodic::finite(&[3, -1, 3]).unwrap();
        assert!(f.is_finite());
        assert_eq!(f.finite_elements().unwrap(), &[-1, 3]);
        assert_eq!(f.members_in(0, 10), vec![3]);
    }

    #[test]
    fn first_canonical_scans_in_order() {
        let o = odds();
        assert_eq!(o.first_canonical(|x| !o.contains(x)), Some(0));
        assert_eq!(o.first_canonical(|x| o.contains(x)), Some(-1));
    }
}
