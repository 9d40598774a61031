//! The split step, the recursive search for a Δ-large part, and the
//! largeness of complements.

use alloc::vec::Vec;

use crate::cert::Verdict;
use crate::cover::{delta_large_from_cofinite, verify_cover, CoverCheck, CoverOutcome, DeltaLargeCert, DeltaOracle};
use crate::error::Error;
use crate::group::{canonical_ints, canonicalize, product_set, Element, Group, Window};
use crate::set::SetRepr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    /// `F·Δ(A)` covers.
    CoverCert(DeltaLargeCert),
    /// `g ∉ F·Δ(A)`; then `(g⁻¹F ∪ {e})·B` covers `X` up to `residual`.
    Shifted {
        g: Element,
        cover: Vec<Element>,
        residual: Vec<Element>,
        verdict: Verdict,
    },
}

fn ball_elements(group: Group, window: Window) -> Result<Vec<Element>, Error> {
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

/// `A ∪ B = X`, exactly when all three are periodic.
fn check_union(x: &SetRepr, a: &SetRepr, b: &SetRepr, window: Window) -> Result<Verdict, Error> {
    if let (Some(px), Some(pa), Some(pb)) = (x.exact(), a.exact(), b.exact()) {
        let u = pa.union(&pb)?;
        if u == px {
            return Ok(Verdict::Proven);
        }
        let d = u.difference(&px)?.union(&px.difference(&u)?)?;
        let g = d
            .first_canonical(|v| d.contains(v))
            .ok_or(Error::Invariant("distinct sets without a difference"))?;
        return Err(Error::PartitionMismatch(Element::Int(g)));
    }
    for g in ball_elements(x.group(), window)? {
        if x.contains(&g) != (a.contains(&g) || b.contains(&g)) {
            return Err(Error::PartitionMismatch(g));
        }
    }
    Ok(Verdict::evidence(window, 1))
}

fn require_cofinite(shifts: &[Element], x: &SetRepr, window: Window) -> Result<CoverCheck, Error> {
    let c = verify_cover(shifts, x, window)?;
    match c.outcome {
        CoverOutcome::FailsAt(g) => Err(Error::CoverNotEstablished(g)),
        _ => Ok(c),
    }
}

/// One split of `X = A ∪ B` under a cofinite cover `F·X`.
pub fn split_step(
    x: &SetRepr,
    shifts: &[Element],
    a: &SetRepr,
    b: &SetRepr,
    window: Window,
    threshold: u64,
) -> Result<SplitOutcome, Error> {
    let union = check_union(x, a, b, window)?;
    require_cofinite(shifts, x, window)?;
    let shifts = canonicalize(shifts.to_vec());
    let oracle = DeltaOracle::new(a, window, threshold)?;
    let scan = oracle.scan_window(window);
    let hit = ball_elements(x.group(), scan)?
        .into_iter()
        .find(|g| shifts.iter().all(|f| !oracle.contains(&f.left_div(g))));
    let Some(g) = hit else {
        let verdict = if oracle.is_exact() {
            // The scan covered a full residue system of Δ(A).
            Verdict::Proven.and(union)
        } else {
            oracle.verdict(true).and(union)
        };
        let delta = match oracle {
            DeltaOracle::Exact(d) => Some(d),
            DeltaOracle::Window(..) => None,
        };
        return Ok(SplitOutcome::CoverCert(DeltaLargeCert { shifts, delta, verdict }));
    };
    let ginv = g.inv();
    let mut cover: Vec<Element> = shifts.iter().map(|f| ginv.mul(f)).collect();
    cover.push(x.group().identity());
    let cover = canonicalize(cover);
    let (residual, verdict) = shifted_residual(x, b, &cover, &g, &shifts, window)?;
    Ok(SplitOutcome::Shifted {
        g,
        cover,
        residual,
        verdict: oracle.verdict(true).and(union).and(verdict),
    })
}

/// `X \ C·B`: exact on periodic sets, otherwise on the interior window
/// `W − |g| − max|f|`.
fn shifted_residual(
    x: &SetRepr,
    b: &SetRepr,
    cover: &[Element],
    g: &Element,
    shifts: &[Element],
    window: Window,
) -> Result<(Vec<Element>, Verdict), Error> {
    if let (Some(px), Some(pb)) = (x.exact(), b.exact()) {
        let ints: Vec<i64> = cover.iter().filter_map(Element::as_int).collect();
        let cb = if pb.is_empty() { pb } else { pb.product(&ints)? };
        let h = px.difference(&cb)?;
        let Some(h) = h.finite_elements() else {
            return Err(Error::Invariant("shifted cover leaves an infinite residual"));
        };
        return Ok((
            canonicalize(h.iter().map(|&v| Element::Int(v)).collect()),
            Verdict::Proven,
        ));
    }
    let reach = shifts.iter().map(Element::norm).max().unwrap_or(0);
    let interior = window.shrink(g.norm() + reach);
    let residual = ball_elements(x.group(), interior)?
        .into_iter()
        .filter(|h| x.contains(h) && !cover.iter().any(|c| b.contains(&c.left_div(h))))
        .collect();
    Ok((residual, Verdict::evidence(interior, 1)))
}

/// `|F|·(|F| + 1)^(2^(n−1) − 1)`.
pub fn partition_bound(n: usize, f_size: u128) -> Result<u128, Error> {
    if n == 0 || f_size == 0 {
        return Err(Error::InvalidArgument("bound needs n ≥ 1 and |F| ≥ 1"));
    }
    if n > 7 {
        return Err(Error::BoundOverflow(n));
    }
    let e = (1u32 << (n - 1)) - 1;
    (f_size + 1)
        .checked_pow(e)
        .and_then(|v| v.checked_mul(f_size))
        .ok_or(Error::BoundOverflow(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCert {
    /// 1-based index of the Δ-large part.
    pub index: usize,
    pub shifts: Vec<Element>,
    /// `None` when the closed form overflows.
    pub bound: Option<u128>,
    pub trace: Vec<SplitOutcome>,
    /// Residual of the cover `F·Y` at each recursion level.
    pub residuals: Vec<Vec<Element>>,
    pub verdict: Verdict,
}

/// Finds a part `A_i` and `F′` with `F′Δ(A_i)` covering.
pub fn find_delta_large_part(
    x: &SetRepr,
    shifts: &[Element],
    parts: &[SetRepr],
    window: Window,
    threshold: u64,
) -> Result<PartitionCert, Error> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("at least one part is required"));
    }
    let n = parts.len();
    let bound = partition_bound(n, shifts.len() as u128).ok();
    let mut cur_x = x.clone();
    let mut cur_f = canonicalize(shifts.to_vec());
    let mut trace = Vec::new();
    let mut residuals = Vec::new();
    let mut verdict = Verdict::Proven;
    for (i, a) in parts.iter().enumerate() {
        let check = require_cofinite(&cur_f, &cur_x, window)?;
        residuals.push(check.residual().to_vec());
        verdict = verdict.and(check.verdict);
        if i + 1 == n {
            check_union(&cur_x, a, a, window)?;
            let cert = delta_large_from_cofinite(&cur_f, a, window, threshold)?;
            verdict = verdict.and(cert.verdict);
            return finish(i + 1, cert.shifts, bound, trace, residuals, verdict);
        }
        let rest = union_all(&parts[i + 1..])?;
        let outcome = split_step(&cur_x, &cur_f, a, &rest, window, threshold)?;
        match &outcome {
            SplitOutcome::CoverCert(c) => {
                verdict = verdict.and(c.verdict);
                let shifts = c.shifts.clone();
                trace.push(outcome);
                return finish(i + 1, shifts, bound, trace, residuals, verdict);
            }
            SplitOutcome::Shifted { cover, verdict: v, .. } => {
                verdict = verdict.and(*v);
                cur_f = product_set(&cur_f, cover);
                cur_x = rest;
            }
        }
        trace.push(outcome);
    }
    unreachable!("the last part always ends the recursion")
}

fn finish(
    index: usize,
    shifts: Vec<Element>,
    bound: Option<u128>,
    trace: Vec<SplitOutcome>,
    residuals: Vec<Vec<Element>>,
    verdict: Verdict,
) -> Result<PartitionCert, Error> {
    if let Some(b) = bound {
        if shifts.len() as u128 > b {
            return Err(Error::Invariant("certificate exceeds the closed-form bound"));
        }
    }
    Ok(PartitionCert {
        index,
        shifts,
        bound,
        trace,
        residuals,
        verdict,
    })
}

fn union_all(parts: &[SetRepr]) -> Result<SetRepr, Error> {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.union(p)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetAnalysis {
    DeltaLarge(DeltaLargeCert),
    /// `L \ A` is large: `cover·(L \ A) = G`.
    LargeWitness {
        complement: SetRepr,
        cover: Vec<Element>,
        verdict: Verdict,
    },
}

/// For `A ⊆ L` with `L` large: either `A` is Δ-large or `L \ A` is large.
pub fn analyze_subset_of_large(
    l: &SetRepr,
    shifts: &[Element],
    a: &SetRepr,
    window: Window,
    threshold: u64,
) -> Result<SubsetAnalysis, Error> {
    let b = l.difference(a)?;
    let l_check = require_cofinite(shifts, l, window)?;
    match split_step(l, shifts, a, &b, window, threshold)? {
        SplitOutcome::CoverCert(c) => Ok(SubsetAnalysis::DeltaLarge(c)),
        SplitOutcome::Shifted { cover: c, verdict, .. } => {
            let mut cover = product_set(&canonicalize(shifts.to_vec()), &c);
            let check = verify_cover(&cover, &b, window)?;
            let leftover: Vec<Element> = match &check.outcome {
                CoverOutcome::Covers => Vec::new(),
                CoverOutcome::CofiniteWithResidual(h) => h.clone(),
                CoverOutcome::FailsAt(g) => return Err(Error::CoverNotEstablished(g.clone())),
            };
            if !leftover.is_empty() {
                let b0 = first_member(&b, window)?.ok_or(Error::Invariant("empty complement"))?;
                let b0inv = b0.inv();
                cover.extend(leftover.iter().map(|h| h.mul(&b0inv)));
                cover = canonicalize(cover);
            }
            let fin = verify_cover(&cover, &b, window)?;
            if fin.outcome != CoverOutcome::Covers {
                return Err(Error::Invariant("absorbed cover is incomplete"));
            }
            Ok(SubsetAnalysis::LargeWitness {
                complement: b,
                cover,
                verdict: verdict.and(l_check.verdict).and(fin.verdict),
            })
        }
    }
}

fn first_member(set: &SetRepr, window: Window) -> Result<Option<Element>, Error> {
    if let Some(p) = set.exact() {
        return Ok(p.first_canonical(|v| p.contains(v)).map(Element::Int));
    }
    Ok(set.enumerate(window)?.into_iter().next())
}
