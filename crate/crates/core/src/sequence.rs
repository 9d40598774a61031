//! Greedy construction of `Y ⊆ A` with `Δ(Y) = X`.
//!
//! Targets `x₁, x₂, …` are scheduled along the triangular pattern
//! `x₁; x₁, x₂; x₁, x₂, x₃; …`. Step `i` places a pair `{z, wᵢz}` with `z`
//! canonically least such that the pair avoids `Y·Y⁻¹·Y`. When the target
//! is `{e}` single points are placed under the same rule, and additionally
//! every difference they introduce must be new and pairwise distinct.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::cert::Verdict;
use crate::delta::{delta_closed_form, Multiplicity};
use crate::error::Error;
use crate::group::{Element, Group, Window};
use crate::set::SetRepr;

/// The `j` with `wᵢ = x_j`: for `n(n−1)/2 < i ≤ n(n+1)/2`, `j = i − n(n−1)/2`.
pub fn schedule_index(i: u64) -> u64 {
    assert!(i >= 1, "schedule indices start at 1");
    // Largest n with n(n−1)/2 < i.
    let mut n = (8 * i + 1).isqrt().div_ceil(2);
    while n * (n - 1) / 2 >= i {
        n -= 1;
    }
    while (n + 1) * n / 2 < i {
        n += 1;
    }
    i - n * (n - 1) / 2
}

/// Representatives `x₁, …, x_k` and the truncated schedule over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    reps: Vec<Element>,
}

impl Schedule {
    pub fn new(reps: Vec<Element>) -> Schedule {
        Schedule { reps }
    }

    /// One representative per `{x, x⁻¹}`, canonically least, identity
    /// excluded; listed in canonical order.
    pub fn from_elements(elements: &[Element]) -> Schedule {
        let mut reps: Vec<Element> = elements
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| core::cmp::min(g.clone(), g.inv()))
            .collect();
        reps.sort();
        reps.dedup();
        Schedule { reps }
    }

    pub fn reps(&self) -> &[Element] {
        &self.reps
    }

    /// Indices into [`Schedule::reps`] for the first `m` placements. Entries
    /// of the triangular pattern beyond the last representative are skipped.
    pub fn placements(&self, m: usize) -> Vec<usize> {
        let k = self.reps.len() as u64;
        if k == 0 {
            return Vec::new();
        }
        (1u64..)
            .map(schedule_index)
            .filter(|&j| j <= k)
            .take(m)
            .map(|j| (j - 1) as usize)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub steps: usize,
    /// Points are drawn from `A ∩ ball(window)`.
    pub window: Window,
    /// Window and threshold for checking scheduled targets against `Δ(A)`
    /// when no closed form is available.
    pub evidence_window: Window,
    pub threshold: u64,
    /// Window used to read off a target set that is not finite.
    pub target_window: Window,
}

impl BuildConfig {
    pub fn new(steps: usize, window: Window) -> BuildConfig {
        BuildConfig {
            steps,
            window,
            evidence_window: Window(window.radius().min(crate::DEFAULT_WINDOW_Z)),
            threshold: crate::DEFAULT_THRESHOLD,
            target_window: Window(100),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    /// The scheduled target, `None` for a single point.
    pub shift: Option<Element>,
    /// `z`, then `wz` for a pair.
    pub points: Vec<Element>,
    /// `|Y·Y⁻¹·Y|` bound before this placement: `|D|·|Y|`.
    pub forbidden_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildState {
    pub group: Group,
    /// `X ∩ ball(target_window)` (all of `X` when finite).
    pub target: Vec<Element>,
    pub schedule: Schedule,
    pub placements: Vec<Placement>,
    /// Verdict on the hypothesis that every scheduled target lies in `Δ(A)`.
    pub hypothesis: Verdict,
}

impl BuildState {
    pub fn points(&self) -> Vec<Element> {
        self.placements.iter().flat_map(|p| p.points.iter().cloned()).collect()
    }

    pub fn step(&self) -> usize {
        self.placements.len()
    }
}

enum Candidates {
    Canonical { count: u64 },
    Listed(Vec<Element>),
}

impl Candidates {
    fn new(set: &SetRepr, window: Window) -> Result<Candidates, Error> {
        if set.group() == Group::Z && !set.is_sparse() {
            let r = window.radius();
            return Ok(Candidates::Canonical {
                count: r.checked_mul(2).ok_or(Error::WindowTooLarge(r))? + 1,
            });
        }
        let mut v = set.enumerate(window)?;
        v.sort();
        Ok(Candidates::Listed(v))
    }

    fn get(&self, i: u64) -> Option<Element> {
        match self {
            Candidates::Canonical { count } => (i < *count).then(|| {
                let k = i.div_ceil(2) as i64;
                Element::Int(if i % 2 == 1 { -k } else { k })
            }),
            Candidates::Listed(v) => v.get(i as usize).cloned(),
        }
    }
}

struct Differences {
    /// Ordered-pair differences `a·b⁻¹` including `e`.
    table: BTreeMap<Element, u64>,
    points: Vec<Element>,
}

impl Differences {
    fn forbidden(&self, q: &Element) -> bool {
        self.points.iter().any(|y| self.table.contains_key(&q.mul(&y.inv())))
    }

    /// Cross and own differences of the new points. With `strict`, `None` if
    /// the cross differences repeat each other or hit the own differences.
    fn fresh(&self, new: &[Element], strict: bool) -> Option<Vec<Element>> {
        let mut own = Vec::new();
        for a in new {
            for b in new {
                if a != b {
                    own.push(a.mul(&b.inv()));
                }
            }
        }
        let mut cross = Vec::with_capacity(2 * new.len() * self.points.len());
        for q in new {
            for y in &self.points {
                cross.push(q.mul(&y.inv()));
                cross.push(y.mul(&q.inv()));
            }
        }
        if strict {
            let mut sorted = cross.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            if own.iter().any(|d| sorted.binary_search(d).is_ok()) {
                return None;
            }
        }
        cross.extend(own);
        Some(cross)
    }

    fn insert(&mut self, new: Vec<Element>, diffs: Vec<Element>) {
        for d in diffs {
            *self.table.entry(d).or_insert(0) += 1;
        }
        *self.table.entry(new[0].mul(&new[0].inv())).or_insert(0) += new.len() as u64;
        self.points.extend(new);
    }

    fn forbidden_size(&self) -> usize {
        let mut f: Vec<Element> = Vec::new();
        for d in self.table.keys() {
            for y in &self.points {
                f.push(d.mul(y));
            }
        }
        f.sort();
        f.dedup();
        f.len()
    }
}

fn target_elements(target: &SetRepr, window: Window) -> Result<Vec<Element>, Error> {
    match target {
        SetRepr::Finite(f) => Ok(f.elements().to_vec()),
        _ => target.enumerate(window),
    }
}

/// Runs the greedy construction for `cfg.steps` placements.
pub fn build_subset(ambient: &SetRepr, target: &SetRepr, cfg: &BuildConfig) -> Result<BuildState, Error> {
    let group = ambient.group();
    if target.group() != group {
        return Err(Error::GroupMismatch {
            expected: group,
            found: target.group(),
        });
    }
    if !target.contains(&group.identity()) {
        return Err(Error::InvalidArgument("target must contain the identity"));
    }
    if target.is_symmetric(cfg.target_window)?.verdict == Verdict::Refuted {
        return Err(Error::InvalidArgument("target must be symmetric"));
    }
    let elements = target_elements(target, cfg.target_window)?;
    let schedule = Schedule::from_elements(&elements);
    let hypothesis = check_hypothesis(ambient, schedule.reps(), cfg)?;

    let cands = Candidates::new(ambient, cfg.window)?;
    let mut state = Differences {
        table: BTreeMap::new(),
        points: Vec::new(),
    };
    let mut placements = Vec::with_capacity(cfg.steps);
    let shifts: Vec<Option<Element>> = if schedule.reps().is_empty() {
        (0..cfg.steps).map(|_| None).collect()
    } else {
        let idx = schedule.placements(cfg.steps);
        idx.into_iter().map(|j| Some(schedule.reps()[j].clone())).collect()
    };
    let mut cursor = 0u64;
    for (step, shift) in shifts.into_iter().enumerate() {
        let bound = state.table.len() * state.points.len();
        let mut i = cursor;
        let mut prefix = true;
        let found = loop {
            let Some(z) = cands.get(i) else { break None };
            i += 1;
            if !ambient.contains(&z) || state.forbidden(&z) {
                if prefix {
                    cursor = i;
                }
                continue;
            }
            prefix = false;
            let new = match &shift {
                None => alloc::vec![z],
                Some(w) => {
                    let wz = w.mul(&z);
                    if !cfg.window.contains(&wz) || !ambient.contains(&wz) || state.forbidden(&wz) {
                        continue;
                    }
                    alloc::vec![z, wz]
                }
            };
            if let Some(diffs) = state.fresh(&new, shift.is_none()) {
                break Some((new, diffs));
            }
        };
        let Some((new, diffs)) = found else {
            return Err(Error::WindowExhausted {
                step: step + 1,
                forbidden: state.forbidden_size(),
            });
        };
        placements.push(Placement {
            shift,
            points: new.clone(),
            forbidden_bound: bound,
        });
        state.insert(new, diffs);
    }
    Ok(BuildState {
        group,
        target: elements,
        schedule,
        placements,
        hypothesis,
    })
}

fn check_hypothesis(ambient: &SetRepr, reps: &[Element], cfg: &BuildConfig) -> Result<Verdict, Error> {
    if reps.is_empty() {
        return Ok(Verdict::Proven);
    }
    if let Some(d) = delta_closed_form(ambient)? {
        if let Some(x) = reps.iter().find(|x| !d.contains(x)) {
            return Err(Error::HypothesisFailed(x.clone()));
        }
        return Ok(Verdict::Proven);
    }
    let oracle = Multiplicity::new(ambient, cfg.evidence_window)?;
    if let Some(x) = reps.iter().find(|x| oracle.count(x) < cfg.threshold) {
        return Err(Error::HypothesisFailed(x.clone()));
    }
    Ok(Verdict::evidence(cfg.evidence_window, cfg.threshold))
}

/// Per-target line of an audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduledCount {
    pub target: Element,
    pub issued: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub points: usize,
    pub scheduled: Vec<ScheduledCount>,
    /// Largest multiplicity of a difference outside the target set.
    pub max_off_target: u64,
    /// Number of distinct non-identity differences.
    pub distinct_differences: usize,
}

/// Recomputes the difference table of the built set from scratch.
pub fn audit(state: &BuildState) -> Result<AuditReport, Error> {
    let points = state.points();
    let mut seen: BTreeMap<&Element, usize> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = seen.insert(p, i) {
            return Err(Error::AuditFailure {
                at: format!("points {j} and {i}"),
                reason: format!("{p} placed twice"),
            });
        }
    }
    let mut table: BTreeMap<Element, (u64, usize, usize)> = BTreeMap::new();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate() {
            if i != j {
                let e = table.entry(a.mul(&b.inv())).or_insert((0, i, j));
                e.0 += 1;
            }
        }
    }
    let mut target = state.target.clone();
    target.sort();
    let mut max_off_target = 0;
    for (g, &(c, i, j)) in &table {
        if target.binary_search(g).is_err() {
            if c > 1 {
                return Err(Error::AuditFailure {
                    at: format!("({},{})", points[i], points[j]),
                    reason: format!("difference {g} occurs {c} times"),
                });
            }
            max_off_target = max_off_target.max(c);
        }
    }
    let mut scheduled = Vec::new();
    for x in state.schedule.reps() {
        let issued = state.placements.iter().filter(|p| p.shift.as_ref() == Some(x)).count();
        let multiplicity = table.get(x).map_or(0, |e| e.0);
        if multiplicity < issued as u64 {
            return Err(Error::AuditFailure {
                at: x.to_string(),
                reason: format!("scheduled {issued} times but realized {multiplicity} times"),
            });
        }
        scheduled.push(ScheduledCount {
            target: x.clone(),
            issued,
            multiplicity,
        });
    }
    Ok(AuditReport {
        points: points.len(),
        scheduled,
        max_off_target,
        distinct_differences: table.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{Generator, Periodic};

    #[test]
    fn schedule_examples() {
        let got: Vec<u64> = (1..=10).map(schedule_index).collect();
        assert_eq!(got, [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]);
        assert_eq!(schedule_index(6), 3);
        assert_eq!(schedule_index(10), 4);
    }

    #[test]
    fn schedule_oracle() {
        let mut expected = Vec::new();
        for n in 1..=200u64 {
            expected.extend(1..=n);
        }
        for (i, &j) in expected.iter().enumerate() {
            assert_eq!(schedule_index(i as u64 + 1), j);
        }
    }

    #[test]
    fn truncated_schedule() {
        let s = Schedule::from_elements(&[
            Element::Int(0),
            Element::Int(3),
            Element::Int(-3),
            Element::Int(5),
            Element::Int(-5),
        ]);
        assert_eq!(s.reps(), [Element::Int(-3), Element::Int(-5)]);
        assert_eq!(s.placements(6), [0, 0, 1, 0, 1, 0]);
    }

    fn z() -> SetRepr {
        SetRepr::Periodic(Periodic::integers())
    }

    fn brute_table(pts: &[Element]) -> BTreeMap<Element, u64> {
        let mut t = BTreeMap::new();
        for a in pts {
            for b in pts {
                if a != b {
                    *t.entry(a.mul(&b.inv())).or_insert(0) += 1;
                }
            }
        }
        t
    }

    #[test]
    fn pair_build() {
        let x = SetRepr::ints(&[0, 3, -3]);
        let s = build_subset(&z(), &x, &BuildConfig::new(6, Window(1_000_000))).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 12);
        let t = brute_table(&pts);
        assert!(t[&Element::Int(-3)] >= 6);
        // Translates of a fixed pair share their cross differences in Z.
        let (a, b) = (pts[0].as_int().unwrap(), pts[2].as_int().unwrap());
        assert!(t[&Element::Int(b - a)] >= 2);
        assert!(matches!(audit(&s), Err(Error::AuditFailure { .. })));
    }

    #[test]
    fn pair_build_in_free_group() {
        let ambient: SetRepr = "gen fg_xSy(a,a)".parse().unwrap();
        let x: SetRepr = "finite F2 {e, aBA, abA}".parse().unwrap();
        let s = build_subset(&ambient, &x, &BuildConfig::new(4, Window(8))).unwrap();
        assert_eq!(s.points().len(), 8);
        assert!(s.points().iter().all(|p| ambient.contains(p)));
        let r = audit(&s).unwrap();
        assert_eq!(r.scheduled[0].issued, 4);
        assert!(r.max_off_target <= 1);
    }

    #[test]
    fn singleton_builds() {
        let e = SetRepr::ints(&[0]);
        let s = build_subset(&z(), &e, &BuildConfig::new(10, Window(1_000_000))).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 10);
        let mut d: Vec<i64> = Vec::new();
        for a in &pts {
            for b in &pts {
                if a != b {
                    d.push(a.as_int().unwrap() - b.as_int().unwrap());
                }
            }
        }
        let n = d.len();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), n);

        let a = SetRepr::generator(Generator::Pow10PlusN);
        let s = build_subset(&a, &e, &BuildConfig::new(5, Window(1_000_000_000))).unwrap();
        assert_eq!(s.points().len(), 5);
        assert!(s.points().iter().all(|p| a.contains(p)));
        assert_eq!(audit(&s).unwrap().max_off_target, 1);
    }

    #[test]
    fn audit_controls() {
        let x = SetRepr::ints(&[0, 3, -3]);
        let mut s = build_subset(&z(), &x, &BuildConfig::new(1, Window(1000))).unwrap();
        assert_eq!(audit(&s).unwrap().points, 2);
        let empty = BuildState {
            placements: Vec::new(),
            ..s.clone()
        };
        assert_eq!(audit(&empty).unwrap().points, 0);
        let dup = s.placements[0].clone();
        s.placements.push(dup);
        assert!(matches!(audit(&s), Err(Error::AuditFailure { .. })));
    }

    #[test]
    fn precondition_errors() {
        let evens = SetRepr::Periodic(Periodic::classes(2, &[0]).unwrap());
        let r = build_subset(&evens, &SetRepr::ints(&[0, 1, -1]), &BuildConfig::new(2, Window(100)));
        assert_eq!(r, Err(Error::HypothesisFailed(Element::Int(-1))));
        let r = build_subset(&z(), &SetRepr::ints(&[0, 1]), &BuildConfig::new(2, Window(100)));
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
        let r = build_subset(&z(), &SetRepr::ints(&[0]), &BuildConfig::new(10, Window(5)));
        assert!(matches!(r, Err(Error::WindowExhausted { .. })));
    }
}
