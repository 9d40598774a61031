#![allow(dead_code)]

use delta_core::Periodic;
use proptest::prelude::*;

fn residues(mask: u32, p: u64) -> Vec<u64> {
    (0..p).filter(|r| mask >> r & 1 == 1).collect()
}

/// Eventually periodic sets with small moduli, tails and exceptions.
pub fn periodic() -> impl Strategy<Value = Periodic> {
    (
        1u64..=8,
        any::<u32>(),
        any::<u32>(),
        0u64..6,
        prop::collection::vec(-12i64..=12, 0..4),
        prop::collection::vec(-12i64..=12, 0..4),
    )
        .prop_map(|(p, pm, nm, m, add, remove)| {
            let pos = residues(pm, p);
            let neg = residues(nm, p);
            let mi = m as i64;
            let in_tail = |x: i64| {
                (x >= mi && pos.contains(&(x.rem_euclid(p as i64) as u64)))
                    || (x <= -mi && neg.contains(&(x.rem_euclid(p as i64) as u64)))
            };
            let remove: Vec<i64> = remove.into_iter().filter(|&x| in_tail(x)).collect();
            let add: Vec<i64> = add.into_iter().filter(|x| !remove.contains(x)).collect();
            Periodic::new(p, &pos, &neg, m, &add, &remove).expect("generated set is valid")
        })
}

/// Purely periodic sets given by residue masks on both tails.
pub fn classes() -> impl Strategy<Value = Periodic> {
    (1u64..=12, any::<u32>(), any::<u32>())
        .prop_map(|(p, pm, nm)| Periodic::new(p, &residues(pm, p), &residues(nm, p), 0, &[], &[]).expect("valid"))
}

/// Independent membership test for `Δ(A)`: some full period far out on a
/// tail contains `x` with `x, x + g ∈ A`.
pub fn in_delta(a: &Periodic, g: i64) -> bool {
    let p = a.modulus() as i64;
    let t = a.bound() as i64 + g.abs() + 1;
    (t..t + p).any(|x| a.contains(x) && a.contains(x + g)) || (-t - p..-t).any(|x| a.contains(x) && a.contains(x + g))
}

/// Brute-force `x ∈ A − A`.
pub fn in_differences(a: &Periodic, x: i64) -> bool {
    let r = a.bound() as i64 + 2 * a.modulus() as i64 + x.abs() + 1;
    (-r..=r).any(|y| a.contains(y) && a.contains(y + x))
}
