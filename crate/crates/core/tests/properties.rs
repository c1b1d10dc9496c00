use proptest::collection::vec;
use proptest::prelude::*;

use kiselman::enumerate::DEFAULT_ELEMENT_CAP;
use kiselman::stochastic::{
    eventual_value, exact_hitting_pmf, partial_products, transition_matrix, ProbabilityVector,
    SequenceSpec,
};
use kiselman::{
    annihilation_depth, apply_endomorphism, ball, delete, deletion_matrix, distance, dn_member,
    dn_product, enumerate, idempotent, is_canonical, level_by_definition, level_by_recursion,
    level_sets, reduce, sphere, word_delete, BoolMatrix, Element, IndexSet, Word,
};

fn word_of(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    vec(1..=n, 0..=max_len).prop_map(move |l| Word::new(n, &l).unwrap())
}

fn rank_and_words(k: usize) -> impl Strategy<Value = (usize, Vec<Word>)> {
    (2usize..=5).prop_flat_map(move |n| (Just(n), vec(word_of(n, 14), k)))
}

fn set_of(n: usize) -> impl Strategy<Value = IndexSet> {
    (0u32..1 << n).prop_map(move |b| IndexSet::from_bits(n, b).unwrap())
}

fn el(w: &Word) -> Element {
    reduce(w)
}

fn dn_matrix(n: usize) -> impl Strategy<Value = BoolMatrix> {
    vec(vec(any::<bool>(), n), n)
        .prop_map(|rows| BoolMatrix::from_rows(&rows).unwrap())
        .prop_filter("member of D_n", dn_member)
}

fn probability(n_max: usize) -> impl Strategy<Value = ProbabilityVector> {
    (2usize..=n_max)
        .prop_flat_map(|n| vec(0.05f64..1.0, n))
        .prop_map(|w| {
            let total: f64 = w.iter().sum();
            ProbabilityVector::new(w.iter().map(|x| x / total).collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_is_canonical_and_stable((_n, ws) in rank_and_words(1)) {
        let x = el(&ws[0]);
        prop_assert!(is_canonical(x.canonical()));
        prop_assert_eq!(reduce(&x.word()), x.clone());
        prop_assert!(x.canonical().len() <= ws[0].len());
    }

    #[test]
    fn multiplication_is_associative((_n, ws) in rank_and_words(3)) {
        let (x, y, z) = (el(&ws[0]), el(&ws[1]), el(&ws[2]));
        prop_assert_eq!(
            x.multiply(&y).unwrap().multiply(&z).unwrap(),
            x.multiply(&y.multiply(&z).unwrap()).unwrap()
        );
        // multiplication is reduction of the concatenation
        prop_assert_eq!(x.multiply(&y).unwrap(), reduce(&ws[0].concat(&ws[1]).unwrap()));
    }

    #[test]
    fn unit_and_zero((n, ws) in rank_and_words(1)) {
        let x = el(&ws[0]);
        let e = Element::identity(n).unwrap();
        let f = Element::zero(n).unwrap();
        prop_assert_eq!(e.multiply(&x).unwrap(), x.clone());
        prop_assert_eq!(x.multiply(&e).unwrap(), x.clone());
        prop_assert!(f.multiply(&x).unwrap().is_zero());
        prop_assert!(x.multiply(&f).unwrap().is_zero());
    }

    #[test]
    fn tau_is_an_involutive_antiautomorphism((_n, ws) in rank_and_words(2)) {
        let (x, y) = (el(&ws[0]), el(&ws[1]));
        prop_assert_eq!(x.tau().tau(), x.clone());
        prop_assert_eq!(x.multiply(&y).unwrap().tau(), y.tau().multiply(&x.tau()).unwrap());
    }

    #[test]
    fn content_is_representative_independent_and_additive((_n, ws) in rank_and_words(2)) {
        let (x, y) = (el(&ws[0]), el(&ws[1]));
        prop_assert_eq!(x.content(), ws[0].occurrences());
        prop_assert_eq!(x.multiply(&y).unwrap().content(), x.content().union(&y.content()));
    }

    #[test]
    fn powers_reach_the_content_idempotent((_n, ws) in rank_and_words(1), extra in 0u64..3) {
        let x = el(&ws[0]);
        let c = x.content();
        let k = (c.len() as u64).max(1) + extra;
        prop_assert_eq!(x.power(k).unwrap(), idempotent(&c).unwrap());
    }

    #[test]
    fn deletion_is_representative_independent(
        (w, xs) in (2usize..=5).prop_flat_map(|n| (word_of(n, 14), set_of(n)))
    ) {
        let x = el(&w);
        prop_assert_eq!(reduce(&word_delete(&xs, &w)), delete(&xs, &x).unwrap());
        prop_assert_eq!(deletion_matrix(&xs).apply(&x).unwrap(), delete(&xs, &x).unwrap());
    }

    #[test]
    fn deletions_commute_and_compose(
        (w, a, b) in (2usize..=5).prop_flat_map(|n| (word_of(n, 14), set_of(n), set_of(n)))
    ) {
        let x = el(&w);
        let ab = delete(&a, &delete(&b, &x).unwrap()).unwrap();
        let ba = delete(&b, &delete(&a, &x).unwrap()).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab, delete(&a.union(&b), &x).unwrap());
    }

    #[test]
    fn word_deletion_distributes_over_concatenation(
        (u, v, s) in (2usize..=5).prop_flat_map(|n| (word_of(n, 10), word_of(n, 10), set_of(n)))
    ) {
        prop_assert_eq!(
            word_delete(&s, &u.concat(&v).unwrap()),
            word_delete(&s, &u).concat(&word_delete(&s, &v)).unwrap()
        );
    }

    #[test]
    fn dn_is_closed_and_acts_by_endomorphisms(
        (a, b, u, v) in (2usize..=3).prop_flat_map(|n| (dn_matrix(n), dn_matrix(n), word_of(n, 10), word_of(n, 10)))
    ) {
        prop_assert!(dn_member(&dn_product(&a, &b).unwrap()));
        let (x, y) = (el(&u), el(&v));
        let xy = x.multiply(&y).unwrap();
        prop_assert_eq!(
            apply_endomorphism(&a, &xy).unwrap(),
            apply_endomorphism(&a, &x).unwrap().multiply(&apply_endomorphism(&a, &y).unwrap()).unwrap()
        );
    }

    #[test]
    fn diagonal_products_intersect((a, b) in (2usize..=6).prop_flat_map(|n| (set_of(n), set_of(n)))) {
        prop_assert_eq!(
            dn_product(&BoolMatrix::diagonal(&a), &BoolMatrix::diagonal(&b)).unwrap(),
            BoolMatrix::diagonal(&a.intersection(&b))
        );
    }

    #[test]
    fn level_routes_agree((_n, ws) in rank_and_words(1)) {
        let x = el(&ws[0]);
        let l = level_by_definition(&x);
        prop_assert_eq!(level_by_recursion(&ws[0]), l);
        prop_assert_eq!(annihilation_depth(&x), l);
        let sets = level_sets(&x);
        prop_assert_eq!(sets.by_deletion, sets.by_annihilation);
    }

    #[test]
    fn level_laws((n, ws) in rank_and_words(2), i in 1usize..=5) {
        let (x, y) = (el(&ws[0]), el(&ws[1]));
        let (lx, ly) = (level_by_definition(&x), level_by_definition(&y));
        prop_assert!(level_by_definition(&x.multiply(&y).unwrap()) <= lx.min(ly));
        let i = (i - 1) % n + 1;
        let xi = x.multiply(&Element::gen(n, i).unwrap()).unwrap();
        prop_assert_eq!(level_by_definition(&xi), if i == lx { lx - 1 } else { lx });
        if i < n {
            let ix = Element::gen(n, i).unwrap().multiply(&x).unwrap();
            prop_assert_eq!(level_by_definition(&ix), lx);
        }
        let lower = IndexSet::prefix(n, n - 1).unwrap();
        prop_assert_eq!(lx == n, x.content().is_subset(&lower));
        prop_assert_eq!(lx == 0, x.is_zero());
    }

    #[test]
    fn distance_is_an_ultrametric((n, ws) in rank_and_words(3)) {
        let (x, y, z) = (el(&ws[0]), el(&ws[1]), el(&ws[2]));
        let d = |a: &Element, b: &Element| distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &y) == 0, x == y);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &y) <= d(&x, &z).max(d(&z, &y)));
        prop_assert_eq!(d(&x, &Element::zero(n).unwrap()), level_by_definition(&x));
    }

    #[test]
    fn periodic_sequences_stabilize(
        (pre, cyc) in (2usize..=5).prop_flat_map(|n| (word_of(n, 4), word_of(n, 6).prop_filter("nonempty", |w| !w.is_empty())))
    ) {
        let seq = SequenceSpec::periodic(pre, cyc).unwrap();
        let trace = partial_products(&seq, 100_000).unwrap();
        let value = trace.eventual().expect("certified");
        let last = trace.products.last().unwrap();
        prop_assert_eq!(value, last);
        if seq.occurring() == seq.recurring().unwrap() {
            prop_assert_eq!(value, &eventual_value(&seq).unwrap());
        }
    }

    #[test]
    fn chain_and_convolution_agree(p in probability(6)) {
        let pmf = exact_hitting_pmf(&p, None).unwrap();
        let chain = transition_matrix(&p).absorption_cdf(pmf.k_max());
        for (a, b) in pmf.cdf().iter().zip(&chain) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!(pmf.pmf[..p.rank()].iter().all(|&v| v == 0.0));
        let total: f64 = pmf.pmf.iter().sum::<f64>() + pmf.tail;
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let target: f64 = p.as_slice().iter().map(|x| 1.0 / x).sum();
        prop_assert!((pmf.mean_with_tail_correction() - target).abs() <= 1e-9 * target.max(1.0));
    }
}

#[test]
fn balls_around_every_center() {
    for n in 2..=3 {
        let u = enumerate(n, DEFAULT_ELEMENT_CAP).unwrap();
        for c in u.iter() {
            assert_eq!(sphere(c, 0, &u).unwrap(), vec![c.clone()]);
            assert_eq!(ball(c, n, &u).unwrap(), u.elements());
            let mut shells = Vec::new();
            for r in 0..=n {
                shells.extend(sphere(c, r, &u).unwrap());
                let b = ball(c, r, &u).unwrap();
                let mut sorted = shells.clone();
                sorted.sort_by_key(|x| u.iter().position(|y| y == x).unwrap());
                assert_eq!(b, sorted, "rank {n}, center [{c}], r {r}");
                // every point of an ultrametric ball is a center of it
                for y in &b {
                    assert_eq!(ball(y, r, &u).unwrap(), b);
                }
            }
        }
    }
}
