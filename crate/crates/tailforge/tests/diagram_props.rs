use proptest::prelude::*;
use tailforge::algebra::LaurentPoly;
use tailforge::bstate::{adequacy_report, b_reduce, b_state, framing_relation_check};
use tailforge::corpus::bundled;
use tailforge::diagram::{braid_closure, parse_pd, BraidWord, LinkDiagram};
use tailforge::jones::{bracket_state_sum, kauffman_bracket};

fn word(neg_only: bool) -> impl Strategy<Value = BraidWord> {
    (2u32..5, prop::collection::vec((1i32..4, any::<bool>()), 0..11)).prop_map(move |(s, ls)| {
        let letters = ls
            .into_iter()
            .map(|(i, neg)| {
                let i = 1 + (i - 1) % (s as i32 - 1);
                if neg || neg_only { -i } else { i }
            })
            .collect();
        BraidWord::new(s, letters).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn pd_round_trip(w in word(false)) {
        let d = braid_closure(&w);
        let back = parse_pd(&d.render_pd()).unwrap();
        prop_assert!(back.same_up_to_labels(&d));
    }

    #[test]
    fn conjugation_keeps_components(w in word(false), i in 1i32..4) {
        let i = 1 + (i - 1) % (w.strands as i32 - 1);
        let mut letters = vec![i];
        letters.extend(&w.letters);
        letters.push(-i);
        let c = braid_closure(&BraidWord::new(w.strands, letters).unwrap());
        prop_assert_eq!(c.component_count(), braid_closure(&w).component_count());
    }

    #[test]
    fn negative_closures_are_adequate(w in word(true)) {
        let d = braid_closure(&w);
        prop_assert!(adequacy_report(&b_state(&d)).is_b_adequate);
        let (r, _) = b_reduce(&d).unwrap();
        let (r2, log2) = b_reduce(&r).unwrap();
        prop_assert!(log2.is_empty());
        prop_assert!(r2.same_up_to_labels(&r));
        prop_assert!(b_state(&r).isomorphic(&b_state(&d).reduced()));
    }

    #[test]
    fn state_graph_counts(w in word(false)) {
        let d = braid_closure(&w);
        let g = b_state(&d);
        prop_assert_eq!(g.struts.len(), d.n());
        let incid: usize = (0..g.circles).map(|c| g.degree(c)).sum();
        prop_assert_eq!(incid, 2 * d.n());
        prop_assert!(g.circles >= 1);
    }
}

#[test]
fn corpus_round_trip_and_state_counts() {
    for e in bundled() {
        let d = &e.diagram;
        let back = parse_pd(&d.render_pd()).unwrap();
        assert!(back.same_up_to_labels(d), "{}", e.name);
        let g = b_state(d);
        assert_eq!(g.struts.len(), d.n());
        assert_eq!((0..g.circles).map(|c| g.degree(c)).sum::<usize>(), 2 * d.n());
    }
}

#[test]
fn cabling_composes() {
    for e in bundled().into_iter().filter(|e| e.diagram.n() <= 4) {
        let d = &e.diagram;
        for a in 1..=3u32 {
            for b in 1..=2u32 {
                let twice = d.cable(a).cable(b);
                let once = d.cable(a * b);
                assert_eq!(twice.n(), once.n(), "{} {a} {b}", e.name);
                assert_eq!(twice.component_count(), once.component_count());
            }
        }
        assert!(d.cable(1).same_up_to_labels(d));
    }
}

#[test]
fn kinks_scale_the_bracket() {
    let f = LaurentPoly::monomial(-1, 3);
    for e in bundled().into_iter().filter(|e| e.diagram.n() <= 6) {
        let d = &e.diagram;
        let b = kauffman_bracket(d).unwrap();
        for c in 0..d.component_count() {
            let k = d.add_kink(c, 1).unwrap();
            assert_eq!(kauffman_bracket(&k).unwrap(), &f * &b, "{}", e.name);
            assert_eq!(k.add_kink(c, -1).unwrap().writhe(), d.writhe());
        }
        assert_eq!(b, bracket_state_sum(d), "{}", e.name);
    }
}

#[test]
fn framing_relation_for_adequate_kinks() {
    for e in bundled() {
        let d = &e.diagram;
        for c in 0..d.component_count() {
            let k = d.add_kink(c, -1).unwrap();
            let f = framing_relation_check(d, &k);
            assert!(f.holds && (f.dn, f.dg, f.dphi) == (1, 1, -1), "{}", e.name);
        }
        assert!(framing_relation_check(d, d).holds);
    }
    let u = LinkDiagram::unknot();
    assert!(!framing_relation_check(&u, &u.add_kink(0, 1).unwrap()).holds);
}
