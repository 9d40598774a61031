mod common;

use common::{classes, periodic};
use delta_core::cover::{
    cover_search, delta_large_from_cofinite, maximal_almost_disjoint, verify_cover, CoverOutcome, CoverSearch,
    MaximalOutcome,
};
use delta_core::delta::delta_exact;
use delta_core::partition::{analyze_subset_of_large, find_delta_large_part, partition_bound, SubsetAnalysis};
use delta_core::{Element, Periodic, SetRepr, Verdict, Window};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Element> {
    v.iter().copied().map(Element::Int).collect()
}

/// `F + A` misses only finitely many integers: check two far periods.
fn cofinite_oracle(a: &Periodic, f: &[i64]) -> bool {
    let p = a.modulus() as i64;
    let t = a.bound() as i64 + f.iter().map(|x| x.abs()).max().unwrap_or(0) + 1;
    (t..t + p)
        .chain(-t - p..-t)
        .all(|x| f.iter().any(|s| a.contains(x - s)))
}

/// Some `k` residues mod `p` give a cofinite cover.
fn any_cover(a: &Periodic, p: i64, k: usize) -> bool {
    fn go(a: &Periodic, p: i64, k: usize, from: i64, f: &mut Vec<i64>) -> bool {
        if f.len() == k {
            return k > 0 && cofinite_oracle(a, f);
        }
        (from..p).any(|r| {
            f.push(r);
            let hit = go(a, p, k, r + 1, f);
            f.pop();
            hit
        })
    }
    go(a, p, k, 0, &mut Vec::new())
}

fn covers_z(d: &Periodic, f: &[Element]) -> bool {
    let p = d.modulus() as i64;
    let t = d.bound() as i64 + 2 * p + 10;
    (-t..=t).all(|x| f.iter().any(|s| d.contains(x - s.as_int().unwrap())))
}

proptest! {
    #[test]
    fn exact_cover_check_matches_oracle(a in periodic(), f in prop::collection::btree_set(-8i64..=8, 1..5)) {
        let f: Vec<i64> = f.into_iter().collect();
        let c = verify_cover(&ints(&f), &SetRepr::Periodic(a.clone()), Window(100)).unwrap();
        prop_assert_eq!(c.verdict, Verdict::Proven);
        prop_assert_eq!(c.is_cofinite(), cofinite_oracle(&a, &f));
        if let CoverOutcome::FailsAt(g) = &c.outcome {
            let g = g.as_int().unwrap();
            prop_assert!(!f.iter().any(|s| a.contains(g - s)));
        }
        for h in c.residual() {
            let h = h.as_int().unwrap();
            prop_assert!(!f.iter().any(|s| a.contains(h - s)));
        }
    }

    #[test]
    fn cofinite_covers_make_delta_large(a in periodic(), f in prop::collection::btree_set(-8i64..=8, 1..5)) {
        let f: Vec<i64> = f.into_iter().collect();
        let s = SetRepr::Periodic(a.clone());
        match delta_large_from_cofinite(&ints(&f), &s, Window(100), 20) {
            Ok(cert) => {
                prop_assert!(cofinite_oracle(&a, &f));
                prop_assert_eq!(cert.verdict, Verdict::Proven);
                prop_assert!(covers_z(&delta_exact(&a), &cert.shifts));
            }
            Err(_) => prop_assert!(!cofinite_oracle(&a, &f)),
        }
    }

    #[test]
    fn cover_search_returns_a_minimal_cover(a in classes()) {
        let s = SetRepr::Periodic(a.clone());
        let p = a.modulus() as i64;
        match cover_search(&s, 4, Window(100)).unwrap() {
            CoverSearch::Found(w) => {
                let f: Vec<i64> = w.shifts.iter().map(|g| g.as_int().unwrap()).collect();
                prop_assert!(cofinite_oracle(&a, &f));
                prop_assert!(!any_cover(&a, p, f.len() - 1));
            }
            CoverSearch::NotFound { complete, .. } => {
                prop_assert!(complete);
                prop_assert!(!any_cover(&a, p, 4.min(p as usize)));
            }
        }
    }

    #[test]
    fn saturated_families_cover(a in classes()) {
        let s = SetRepr::Periodic(a.clone());
        match maximal_almost_disjoint(&s, Window(200), 20, 16).unwrap() {
            MaximalOutcome::Cert(c) => prop_assert!(covers_z(&delta_exact(&a), &c.shifts)),
            MaximalOutcome::Exhausted { family, .. } => {
                let d = delta_exact(&a);
                for (i, x) in family.iter().enumerate() {
                    for y in &family[i + 1..] {
                        prop_assert!(!d.contains(y.as_int().unwrap() - x.as_int().unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn partitions_have_a_delta_large_part(
        p in 1u64..=12,
        n in 2usize..=4,
        labels in prop::collection::vec(0usize..4, 12),
    ) {
        let parts: Vec<SetRepr> = (0..n)
            .map(|i| {
                let r: Vec<u64> = (0..p).filter(|&r| labels[r as usize] % n == i).collect();
                SetRepr::Periodic(Periodic::classes(p, &r).unwrap())
            })
            .collect();
        let z = SetRepr::Periodic(Periodic::integers());
        let cert = find_delta_large_part(&z, &ints(&[0]), &parts, Window(100), 20).unwrap();
        let bound = partition_bound(n, 1).unwrap();
        prop_assert!(cert.shifts.len() as u128 <= bound);
        prop_assert_eq!(cert.verdict, Verdict::Proven);
        let a = parts[cert.index - 1].exact().unwrap();
        prop_assert!(covers_z(&delta_exact(&a), &cert.shifts));
    }

    #[test]
    fn subsets_of_large_sets(a in classes(), b in classes()) {
        let l = a.union(&b).unwrap();
        prop_assume!(!l.is_empty());
        let f: Vec<Element> = ints(&(0..l.modulus() as i64).collect::<Vec<_>>());
        let ls = SetRepr::Periodic(l.clone());
        prop_assume!(verify_cover(&f, &ls, Window(100)).unwrap().is_cofinite());
        match analyze_subset_of_large(&ls, &f, &SetRepr::Periodic(a.clone()), Window(100), 20).unwrap() {
            SubsetAnalysis::DeltaLarge(c) => prop_assert!(covers_z(&delta_exact(&a), &c.shifts)),
            SubsetAnalysis::LargeWitness { complement, cover, .. } => {
                let c = complement.exact().unwrap();
                let t = c.bound() as i64 + 3 * c.modulus() as i64;
                for x in -t..=t {
                    prop_assert!(cover.iter().any(|s| c.contains(x - s.as_int().unwrap())));
                }
            }
        }
    }
}

#[test]
fn bound_closed_form() {
    assert_eq!(partition_bound(1, 3).unwrap(), 3);
    assert_eq!(partition_bound(2, 1).unwrap(), 2);
    assert_eq!(partition_bound(3, 1).unwrap(), 8);
    assert_eq!(partition_bound(4, 1).unwrap(), 128);
    assert_eq!(partition_bound(3, 2).unwrap(), 54);
    assert!(partition_bound(8, 1).is_err());
}
