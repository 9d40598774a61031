mod common;

use common::{classes, in_delta, in_differences, periodic};
use delta_core::delta::{
    delta_exact, delta_stabilized, delta_window, difference_set, multiplicity, Multiplicity, Serial,
};
use delta_core::{Element, Group, Periodic, SetRepr, Window};
use proptest::prelude::*;

fn naive_count(a: &Periodic, g: i64, w: i64) -> u64 {
    (-w..=w)
        .filter(|&x| a.contains(x) && (-w..=w).contains(&(x + g)) && a.contains(x + g))
        .count() as u64
}

proptest! {
    #[test]
    fn exact_delta_matches_tail_oracle(a in periodic()) {
        let d = delta_exact(&a);
        for g in -40..=40 {
            prop_assert_eq!(d.contains(g), in_delta(&a, g), "g = {}", g);
        }
    }

    #[test]
    fn delta_is_symmetric_and_contains_zero_iff_infinite(a in periodic()) {
        let d = delta_exact(&a);
        for g in -40..=40 {
            prop_assert_eq!(d.contains(g), d.contains(-g));
        }
        prop_assert_eq!(d.contains(0), !a.is_finite());
    }

    #[test]
    fn delta_ignores_translation_and_finite_changes(a in periodic(), t in -15i64..=15, x in -20i64..=20) {
        let d = delta_exact(&a);
        prop_assert_eq!(delta_exact(&a.translate(t).unwrap()), d.clone());
        let bumped = a.union(&Periodic::finite(&[x]).unwrap()).unwrap();
        prop_assert_eq!(delta_exact(&bumped), d);
    }

    #[test]
    fn delta_is_monotone(a in periodic(), b in periodic()) {
        let da = delta_exact(&a);
        let du = delta_exact(&a.union(&b).unwrap());
        for g in -30..=30 {
            prop_assert!(!da.contains(g) || du.contains(g));
        }
    }

    #[test]
    fn delta_lies_inside_the_difference_set(a in periodic()) {
        let d = delta_exact(&a);
        let diff = difference_set(&a).unwrap();
        for g in -60..=60 {
            prop_assert_eq!(diff.contains(g), in_differences(&a, g), "g = {}", g);
            prop_assert!(!d.contains(g) || diff.contains(g));
        }
    }

    #[test]
    fn multiplicity_matches_naive_count(a in periodic(), w in 0u64..60, g in -70i64..=70) {
        let s = SetRepr::Periodic(a.clone());
        prop_assert_eq!(multiplicity(&s, &Element::Int(g), Window(w)).unwrap(), naive_count(&a, g, w as i64));
    }

    #[test]
    fn pair_table_matches_counts(values in prop::collection::btree_set(-50i64..=50, 0..25)) {
        let v: Vec<i64> = values.into_iter().collect();
        let s = SetRepr::ints(&v);
        let m = Multiplicity::new(&s, Window(50)).unwrap();
        let table = m.table().unwrap();
        for g in -100..=100 {
            let c = m.count(&Element::Int(g));
            prop_assert_eq!(table.get(&Element::Int(g)).copied().unwrap_or(0), c);
        }
    }

    #[test]
    fn stabilized_window_matches_exact(a in classes()) {
        let s = SetRepr::Periodic(a.clone());
        let ev = delta_stabilized(&s, Window(10_000), 20, Window(100), &Serial).unwrap();
        let d = delta_exact(&a);
        let want: Vec<Element> = (-100..=100).filter(|&g| d.contains(g)).map(Element::Int).collect();
        let mut got = ev.members.clone();
        got.sort_by_key(|g| g.as_int());
        prop_assert_eq!(got, want);
    }
}

#[test]
fn windowed_delta_in_free_group_is_symmetric() {
    let s: SetRepr = "gen fg_xSy(a,a)".parse().unwrap();
    let ev = delta_window(&s, Window(7), 5, &Serial).unwrap();
    assert!(ev.contains(&Group::F2.identity()));
    for g in &ev.members {
        assert!(ev.contains(&g.inv()), "{g}");
    }
}
