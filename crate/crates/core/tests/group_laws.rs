use delta_core::group::{canonical_ints, canonicalize, int_order};
use delta_core::{Element, Group, Letter, Word};
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn word() -> impl Strategy<Value = Element> {
    prop::collection::vec(letter(), 0..10).prop_map(|ls| Element::Word(Word::new(ls)))
}

fn element(group: Group) -> BoxedStrategy<Element> {
    match group {
        Group::Z => (-1000i64..=1000).prop_map(Element::Int).boxed(),
        Group::Z2 => (-50i64..=50, -50i64..=50)
            .prop_map(|(x, y)| Element::Pair(x, y))
            .boxed(),
        Group::F2 => word().boxed(),
    }
}

fn triple() -> impl Strategy<Value = (Element, Element, Element)> {
    prop::sample::select(Group::ALL.to_vec()).prop_flat_map(|g| (element(g), element(g), element(g)))
}

proptest! {
    #[test]
    fn group_axioms((a, b, c) in triple()) {
        let e = a.group().identity();
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&e), a.clone());
        prop_assert_eq!(e.mul(&a), a.clone());
        prop_assert_eq!(a.mul(&a.inv()), e.clone());
        prop_assert_eq!(a.inv().inv(), a.clone());
        prop_assert_eq!(a.mul(&b).inv(), b.inv().mul(&a.inv()));
        prop_assert_eq!(a.mul(&a.left_div(&b)), b);
    }

    #[test]
    fn words_stay_reduced(a in word(), b in word()) {
        let Element::Word(w) = a.mul(&b) else { unreachable!() };
        prop_assert!(w.letters().windows(2).all(|p| p[0].inverse() != p[1]));
        prop_assert_eq!(a.mul(&b).norm(), w.len() as u64);
    }

    #[test]
    fn element_text_round_trips((a, _, _) in triple()) {
        let back: Element = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn canonical_order_on_integers(xs in prop::collection::vec(-100i64..=100, 0..20)) {
        let sorted = canonicalize(xs.iter().copied().map(Element::Int).collect());
        let mut want = xs.clone();
        want.sort_by(|a, b| int_order(*a, *b));
        want.dedup();
        let got: Vec<i64> = sorted.iter().map(|g| g.as_int().unwrap()).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn canonical_integers_start_at_the_origin() {
    let v: Vec<i64> = canonical_ints(3).collect();
    assert_eq!(v, [0, -1, 1, -2, 2, -3, 3]);
}

#[test]
fn balls_have_closed_form_sizes() {
    for r in 0..=6u64 {
        for g in Group::ALL {
            let ball = g.ball(r);
            assert_eq!(ball.len() as u128, g.ball_size(r), "{g:?} r={r}");
            assert!(ball.iter().all(|x| x.norm() <= r));
            let mut s = ball.clone();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), ball.len());
        }
    }
    assert_eq!(Group::F2.ball(6).len(), 1 + 2 * (3usize.pow(6) - 1));
}

#[test]
fn shortlex_order_on_words() {
    let ball = Group::F2.ball(2);
    let text: Vec<String> = ball.iter().map(|g| g.to_string()).collect();
    assert_eq!(text[..5], ["e", "a", "A", "b", "B"]);
    assert_eq!(text[5..8], ["aa", "ab", "aB"]);
}
