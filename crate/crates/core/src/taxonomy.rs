//! Witness searches for the smallness properties and the sparse / ∇-thin
//! analysis.

use alloc::vec;
use alloc::vec::Vec;

use crate::cert::Verdict;
use crate::cover::DeltaOracle;
use crate::delta::{
    delta_closed_form, delta_exact, delta_window, difference_set, iterate_delta, DeltaResult, Executor, IterMode,
    Multiplicity, Trace,
};
use crate::error::Error;
use crate::group::{canonical_ints, Element, Group, Window};
use crate::set::{FiniteSet, Periodic, SetRepr};

/// Largest window from which candidate elements of a set are read.
const CANDIDATE_RADIUS: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found {
        witness: Vec<Element>,
        verdict: Verdict,
    },
    /// `Refuted` when the absence is exact, evidence otherwise.
    NotFound {
        verdict: Verdict,
    },
}

impl Search {
    pub fn witness(&self) -> Option<&[Element]> {
        match self {
            Search::Found { witness, .. } => Some(witness),
            Search::NotFound { .. } => None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            Search::Found { verdict, .. } | Search::NotFound { verdict } => *verdict,
        }
    }
}

fn candidates(group: Group, window: Window) -> Result<Vec<Element>, Error> {
    match group {
        Group::Z => Ok(canonical_ints(window.radius()).map(Element::Int).collect()),
        g => {
            if window.radius() > 16 {
                return Err(Error::WindowTooLarge(window.radius()));
            }
            Ok(g.ball(window.radius()))
        }
    }
}

/// Greedy in canonical order: keep `g` when `ok(f⁻¹g)` for every kept `f`.
fn greedy(cands: &[Element], n: usize, ok: impl Fn(&Element) -> bool) -> Option<Vec<Element>> {
    let mut out: Vec<Element> = Vec::new();
    for g in cands {
        if out.iter().all(|f| ok(&f.left_div(g))) {
            out.push(g.clone());
            if out.len() == n {
                return Some(out);
            }
        }
    }
    None
}

/// `n` translates with pairwise empty intersections.
pub fn weakly_p_small_witness(set: &SetRepr, n: usize, window: Window) -> Result<Search, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two translates"));
    }
    let group = set.group();
    if let Some(p) = set.exact() {
        let d = difference_set(&p)?;
        let scan = Window(window.radius().min(CANDIDATE_RADIUS));
        let cands = candidates(group, scan)?;
        if let Some(w) = greedy(&cands, n, |h| !d.contains(h.as_int().expect("integer"))) {
            return Ok(Search::Found {
                witness: w,
                verdict: Verdict::Proven,
            });
        }
        let verdict = if d.is_integers() {
            Verdict::Refuted
        } else {
            Verdict::evidence(scan, 1)
        };
        return Ok(Search::NotFound { verdict });
    }
    if let Some(Some(l)) = set.lacunary() {
        if let Some(r) = l.realized_differences()? {
            if r.is_integers() {
                return Ok(Search::NotFound {
                    verdict: Verdict::Refuted,
                });
            }
        }
    }
    let oracle = Multiplicity::new(set, window)?;
    let scan = Window(window.radius().min(CANDIDATE_RADIUS));
    let cands = candidates(group, scan)?;
    let verdict = Verdict::evidence(window, 1);
    Ok(match greedy(&cands, n, |h| oracle.count(h) == 0) {
        Some(w) => Search::Found { witness: w, verdict },
        None => Search::NotFound { verdict },
    })
}

/// Whether membership of a nonzero difference in `d` depends only on its
/// residue, and which residues are members.
fn residue_pattern(d: &Periodic) -> Option<Vec<u64>> {
    let r = d.pos_residues();
    if r != d.neg_residues() {
        return None;
    }
    let full = Periodic::classes(d.modulus(), &r)
        .ok()?
        .union(&Periodic::finite(&[0]).ok()?)
        .ok()?;
    let with_zero = d.union(&Periodic::finite(&[0]).ok()?).ok()?;
    (full == with_zero).then_some(r)
}

fn clique(reps: &[i64], delta: &Periodic, k: usize, chosen: &mut Vec<i64>, start: usize) -> bool {
    if chosen.len() == k {
        return true;
    }
    for i in start..reps.len() {
        let g = reps[i];
        if chosen.iter().all(|&f| !delta.contains(g - f)) {
            chosen.push(g);
            if clique(reps, delta, k, chosen, i + 1) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// `k` translates with pairwise almost-disjoint intersections.
pub fn almost_p_small_witness(set: &SetRepr, k: usize, threshold: u64, window: Window) -> Result<Search, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two translates"));
    }
    let group = set.group();
    let oracle = DeltaOracle::new(set, window, threshold)?;
    if let DeltaOracle::Exact(SetRepr::Periodic(d)) = &oracle {
        if let Some(r) = residue_pattern(d) {
            let q = d.modulus();
            if !r.contains(&0) {
                // Elements of one residue class are pairwise compatible.
                let w: Vec<Element> = canonical_ints(u64::MAX)
                    .filter(|x| x.rem_euclid(q as i64) == 0)
                    .take(k)
                    .map(Element::Int)
                    .collect();
                let w = greedy(&w, k, |h| !oracle.contains(h)).ok_or(Error::Invariant("class family"))?;
                return Ok(Search::Found {
                    witness: w,
                    verdict: Verdict::Proven,
                });
            }
            let reps: Vec<i64> = canonical_ints(q).take(q as usize).collect();
            let mut chosen = Vec::new();
            return Ok(if clique(&reps, d, k, &mut chosen, 0) {
                Search::Found {
                    witness: chosen.into_iter().map(Element::Int).collect(),
                    verdict: Verdict::Proven,
                }
            } else {
                Search::NotFound {
                    verdict: Verdict::Refuted,
                }
            });
        }
    }
    let scan = Window(window.radius().min(CANDIDATE_RADIUS));
    let cands = candidates(group, scan)?;
    Ok(match greedy(&cands, k, |h| !oracle.contains(h)) {
        Some(w) => Search::Found {
            witness: w,
            verdict: oracle.verdict(true),
        },
        None => Search::NotFound {
            verdict: match oracle {
                DeltaOracle::Exact(_) => Verdict::evidence(scan, threshold),
                other => other.verdict(false),
            },
        },
    })
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] + k - i < n {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Residues mod `p` of the elements of `x`, as canonically least
/// representatives in `x`, in canonical order.
fn residue_reps(x: &Periodic, p: u64) -> Result<Vec<i64>, Error> {
    let l = crate::set::lcm(x.modulus(), p)?;
    let r = (x.bound() + 2 * l) as i64;
    let mut seen = vec![false; p as usize];
    let mut out = Vec::new();
    for v in canonical_ints(r as u64) {
        if x.contains(v) {
            let c = v.rem_euclid(p as i64) as usize;
            if !seen[c] {
                seen[c] = true;
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// A nonempty finite `F ⊆ X` with `⋂_{g∈F} gA` finite.
pub fn sparse_witness_search(set: &SetRepr, x: &SetRepr, max_f: usize, window: Window) -> Result<Search, Error> {
    if max_f == 0 || max_f > 6 {
        return Err(Error::InvalidArgument("|F| must be between 1 and 6"));
    }
    if let (Some(a), Some(px)) = (set.exact(), x.exact()) {
        return sparse_exact(&a, &px, max_f);
    }
    let scan = Window(window.radius().min(CANDIDATE_RADIUS));
    let xs = x.enumerate(scan)?;
    if xs.is_empty() {
        return Ok(Search::NotFound {
            verdict: Verdict::evidence(scan, 1),
        });
    }
    if let Some(d) = delta_closed_form(set)? {
        if d.exact().is_some_and(|p| p.is_empty()) {
            return Ok(Search::Found {
                witness: vec![xs[0].clone()],
                verdict: Verdict::Proven,
            });
        }
        // |xA ∩ yA| is finite exactly when x⁻¹y ∉ Δ(A).
        for (i, a) in xs.iter().enumerate() {
            if let Some(b) = xs[i + 1..].iter().find(|b| !d.contains(&a.left_div(b))) {
                return Ok(Search::Found {
                    witness: vec![a.clone(), b.clone()],
                    verdict: Verdict::Proven,
                });
            }
        }
        if max_f == 2 {
            return Ok(Search::NotFound {
                verdict: Verdict::evidence(scan, 1),
            });
        }
    }
    let oracle = Multiplicity::new(set, window)?;
    sparse_windowed(set, &xs, max_f, window, oracle.size())
}

fn sparse_exact(a: &Periodic, x: &Periodic, max_f: usize) -> Result<Search, Error> {
    if x.is_empty() {
        return Ok(Search::NotFound {
            verdict: Verdict::Refuted,
        });
    }
    let p = a.modulus();
    let reps = residue_reps(x, p)?;
    if a.is_finite() {
        return Ok(Search::Found {
            witness: vec![Element::Int(reps[0])],
            verdict: Verdict::Proven,
        });
    }
    let pos = a.pos_residues();
    let neg = a.neg_residues();
    let empty_tail = |chosen: &[i64], tail: &[u64]| {
        (0..p).all(|r| {
            !chosen
                .iter()
                .all(|&s| tail.contains(&(((r as i64 - s).rem_euclid(p as i64)) as u64)))
        })
    };
    for k in 1..=max_f.min(reps.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let chosen: Vec<i64> = idx.iter().map(|&i| reps[i]).collect();
            if empty_tail(&chosen, &pos) && empty_tail(&chosen, &neg) {
                return Ok(Search::Found {
                    witness: chosen.into_iter().map(Element::Int).collect(),
                    verdict: Verdict::Proven,
                });
            }
            if !next_combination(&mut idx, reps.len()) {
                break;
            }
        }
    }
    Ok(Search::NotFound {
        verdict: Verdict::Refuted,
    })
}

fn sparse_windowed(set: &SetRepr, xs: &[Element], max_f: usize, window: Window, size: u64) -> Result<Search, Error> {
    // Finite at window scale: the intersection keeps fewer than a tenth of
    // the window's points, with at least one point lost.
    let members = set.enumerate(window)?;
    let limit = (size / 10).max(1);
    let n = xs.len().min(64);
    for k in 1..=max_f.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let f: Vec<&Element> = idx.iter().map(|&i| &xs[i]).collect();
            let kept = members
                .iter()
                .filter(|m| {
                    f.iter().all(|g| {
                        let v = g.left_div(m);
                        window.contains(&v) && set.contains(&v)
                    })
                })
                .count() as u64;
            if kept < limit {
                return Ok(Search::Found {
                    witness: f.into_iter().cloned().collect(),
                    verdict: Verdict::evidence(window, limit),
                });
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(Search::NotFound {
        verdict: Verdict::evidence(window, limit),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThinOutcome {
    /// `Δⁿ(A) = {e}` (`n = 0` for a finite set).
    ThinAt(usize),
    /// The trace reaches a fixed point other than `{e}` from step `from`.
    Stabilized {
        set: DeltaResult,
        from: usize,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinTrace {
    pub trace: Trace,
    pub outcome: ThinOutcome,
    pub verdict: Verdict,
}

fn is_identity_only(r: &DeltaResult, group: Group) -> bool {
    let e = group.identity();
    match r {
        DeltaResult::Exact(SetRepr::Periodic(p)) => p.finite_elements() == Some(&[0][..]),
        DeltaResult::Exact(SetRepr::Finite(f)) => f.elements() == [e],
        DeltaResult::Exact(_) => false,
        DeltaResult::Evidence(ev) => ev.members == [e],
    }
}

/// Iterates the derivation looking for a collapse to `{e}`.
pub fn nabla_thin_trace<E: Executor>(
    set: &SetRepr,
    max_iter: usize,
    mode: IterMode,
    exec: &E,
) -> Result<ThinTrace, Error> {
    let group = set.group();
    let finite = matches!(set, SetRepr::Finite(_)) || set.exact().is_some_and(|p| p.is_finite());
    if finite && !matches!(mode, IterMode::Window { .. }) {
        return Ok(ThinTrace {
            trace: Trace {
                steps: Vec::new(),
                fixed_point: None,
                handoff: None,
            },
            outcome: ThinOutcome::ThinAt(0),
            verdict: Verdict::Proven,
        });
    }
    let trace = iterate_delta(set, max_iter, mode, exec)?;
    let verdict = trace.steps.iter().fold(Verdict::Proven, |v, s| v.and(s.verdict()));
    if let Some(n) = trace.steps.iter().position(|s| is_identity_only(s, group)) {
        return Ok(ThinTrace {
            outcome: ThinOutcome::ThinAt(n + 1),
            trace,
            verdict,
        });
    }
    let outcome = match trace.fixed_point {
        Some(k) => {
            let last = trace.steps[k - 1].clone();
            let from = trace.steps.iter().position(|s| *s == last).unwrap_or(k - 1) + 1;
            ThinOutcome::Stabilized { set: last, from }
        }
        None => ThinOutcome::Inconclusive,
    };
    let verdict = match outcome {
        ThinOutcome::Stabilized { .. } if verdict == Verdict::Proven => Verdict::Refuted,
        _ => verdict,
    };
    Ok(ThinTrace {
        trace,
        outcome,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionCheck {
    pub holds: bool,
    pub counterexample: Option<Element>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationReport {
    /// `X⁻¹X ⊆ Δ(A)`.
    pub differences_in_delta: InclusionCheck,
    /// `X⁻¹X ⊆ Δ(X⁻¹X)`.
    pub differences_self: InclusionCheck,
}

fn inclusion_exact(sub: &Periodic, sup: &Periodic) -> Result<InclusionCheck, Error> {
    let diff = sub.difference(sup)?;
    let cex = diff.first_canonical(|v| diff.contains(v));
    Ok(InclusionCheck {
        holds: cex.is_none(),
        counterexample: cex.map(Element::Int),
        verdict: if cex.is_none() {
            Verdict::Proven
        } else {
            Verdict::Refuted
        },
    })
}

/// Checks the two inclusions that keep every iterate of `Δ(A)` large when
/// `X` witnesses non-sparseness.
pub fn non_sparse_propagation<E: Executor>(
    set: &SetRepr,
    x: &SetRepr,
    window: Window,
    threshold: u64,
    exec: &E,
) -> Result<PropagationReport, Error> {
    if let Some(px) = x.exact() {
        if let Some(SetRepr::Periodic(da)) = delta_closed_form(set)? {
            let d = difference_set(&px)?;
            return Ok(PropagationReport {
                differences_in_delta: inclusion_exact(&d, &da)?,
                differences_self: inclusion_exact(&d, &delta_exact(&d))?,
            });
        }
    }
    let scan = Window(window.radius().min(CANDIDATE_RADIUS));
    let xs = x.enumerate(scan)?;
    let mut diffs: Vec<Element> = Vec::new();
    for a in &xs {
        for b in &xs {
            let d = a.left_div(b);
            if scan.contains(&d) {
                diffs.push(d);
            }
        }
    }
    diffs.sort();
    diffs.dedup();
    let oracle = DeltaOracle::new(set, window, threshold)?;
    let cex = diffs.iter().find(|d| !oracle.contains(d)).cloned();
    let a_check = InclusionCheck {
        holds: cex.is_none(),
        verdict: oracle.verdict(cex.is_none()),
        counterexample: cex,
    };
    let dset = SetRepr::Finite(FiniteSet::new(x.group(), diffs.clone())?);
    let ev = delta_window(&dset, scan, threshold.min(xs.len().max(1) as u64), exec)?;
    let cex = diffs
        .iter()
        .filter(|d| d.norm() * 2 <= scan.radius())
        .find(|d| !ev.contains(d))
        .cloned();
    Ok(PropagationReport {
        differences_in_delta: a_check,
        differences_self: InclusionCheck {
            holds: cex.is_none(),
            counterexample: cex,
            verdict: ev.verdict(),
        },
    })
}
