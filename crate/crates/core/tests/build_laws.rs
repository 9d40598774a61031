mod common;

use std::collections::BTreeMap;

use common::classes;
use delta_core::delta::IterMode;
use delta_core::delta::{delta_exact, Serial};
use delta_core::sequence::{audit, build_subset, schedule_index, BuildConfig, Schedule};
use delta_core::taxonomy::{nabla_thin_trace, non_sparse_propagation, sparse_witness_search, Search, ThinOutcome};
use delta_core::{Element, Group, Periodic, SetRepr, Window};
use proptest::prelude::*;

fn table(points: &[Element]) -> BTreeMap<Element, u64> {
    let mut t = BTreeMap::new();
    for a in points {
        for b in points {
            if a != b {
                *t.entry(a.mul(&b.inv())).or_insert(0) += 1;
            }
        }
    }
    t
}

proptest! {
    #[test]
    fn schedule_visits_every_index_in_blocks(i in 1u64..200_000) {
        let j = schedule_index(i);
        prop_assert!(j >= 1);
        // Position within its block: the previous index is j − 1 or a block end.
        if j > 1 {
            prop_assert_eq!(schedule_index(i - 1), j - 1);
        }
        if i > 1 && j == 1 {
            let prev = schedule_index(i - 1);
            prop_assert_eq!(schedule_index(i - prev), 1);
        }
    }

    #[test]
    fn truncated_schedule_counts(k in 1usize..6, m in 0usize..200) {
        let reps: Vec<Element> = (1..=k as i64).map(Element::Int).collect();
        let s = Schedule::new(reps);
        let idx = s.placements(m);
        prop_assert_eq!(idx.len(), m);
        for j in 1..k {
            let before = idx.iter().filter(|&&x| x == j - 1).count();
            let after = idx.iter().filter(|&&x| x == j).count();
            prop_assert!(before >= after);
        }
    }

    #[test]
    fn singleton_builds_are_sidon(a in classes(), steps in 1usize..25) {
        prop_assume!(!a.is_empty());
        let s = SetRepr::Periodic(a.clone());
        let st = build_subset(&s, &SetRepr::ints(&[0]), &BuildConfig::new(steps, Window(1_000_000))).unwrap();
        let pts = st.points();
        prop_assert_eq!(pts.len(), steps);
        prop_assert!(pts.iter().all(|p| s.contains(p)));
        prop_assert!(table(&pts).values().all(|&c| c == 1));
        prop_assert_eq!(audit(&st).unwrap().max_off_target, 1.min(steps as u64 - 1));
    }

    #[test]
    fn pair_builds_avoid_earlier_differences(t in 1i64..8, steps in 1usize..20) {
        let z = SetRepr::Periodic(Periodic::integers());
        let x = SetRepr::ints(&[0, t, -t]);
        let st = build_subset(&z, &x, &BuildConfig::new(steps, Window(1_000_000))).unwrap();
        let mut y: Vec<Element> = Vec::new();
        for p in &st.placements {
            let old = table(&y);
            for q in &p.points {
                prop_assert!(!y.contains(q));
                for v in &y {
                    prop_assert!(!old.contains_key(&q.mul(&v.inv())));
                    prop_assert!(!old.contains_key(&v.mul(&q.inv())));
                }
            }
            y.extend(p.points.iter().cloned());
        }
        prop_assert!(table(&y).get(&Element::Int(-t)).copied().unwrap_or(0) >= steps as u64);
    }

    #[test]
    fn non_sparse_pairs_propagate(a in classes(), x in classes()) {
        prop_assume!(!x.is_finite());
        let sa = SetRepr::Periodic(a.clone());
        let sx = SetRepr::Periodic(x.clone());
        let s = sparse_witness_search(&sa, &sx, 3, Window(100)).unwrap();
        if let Search::NotFound { verdict } = s {
            prop_assert!(verdict.is_exact());
            let r = non_sparse_propagation(&sa, &sx, Window(100), 20, &Serial).unwrap();
            prop_assert!(r.differences_in_delta.holds);
            prop_assert!(r.differences_self.holds);
            let t = nabla_thin_trace(&sa, 5, IterMode::Exact, &Serial).unwrap();
            prop_assert!(!matches!(t.outcome, ThinOutcome::ThinAt(_)));
        }
    }

    #[test]
    fn thin_sets_are_sparse(a in classes(), x in classes()) {
        prop_assume!(!x.is_finite());
        let sa = SetRepr::Periodic(a.clone());
        let t = nabla_thin_trace(&sa, 5, IterMode::Exact, &Serial).unwrap();
        if matches!(t.outcome, ThinOutcome::ThinAt(_)) {
            let s = sparse_witness_search(&sa, &SetRepr::Periodic(x), 3, Window(100)).unwrap();
            prop_assert!(s.witness().is_some());
        }
        let d = delta_exact(&a);
        prop_assert!(a.is_empty() || d.contains(0));
    }
}

#[test]
fn free_group_pair_build_passes_audit() {
    let a: SetRepr = "gen fg_xSy(b,b)".parse().unwrap();
    let x: SetRepr = "finite F2 {e, bab, BAB}".parse().unwrap();
    let st = build_subset(&a, &x, &BuildConfig::new(5, Window(9))).unwrap();
    assert_eq!(st.group, Group::F2);
    let r = audit(&st).unwrap();
    assert_eq!(r.points, 10);
    assert!(r.scheduled.iter().all(|c| c.multiplicity >= c.issued as u64));
}
