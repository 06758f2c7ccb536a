use super::*;

const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

/// Label rule of public knot tables, valid when labels increase along each
/// component: X[i,j,k,l] is positive iff i == j, k == l, j - l == 1 or l - j > 1.
fn table_sign(c: [u32; 4]) -> i8 {
    let [i, j, k, l] = c.map(|v| v as i64);
    if i == j || k == l || j - l == 1 || l - j > 1 {
        1
    } else {
        -1
    }
}

#[test]
fn trefoil_parses() {
    let d = parse_pd(TREFOIL).unwrap();
    assert_eq!(d.n(), 3);
    assert_eq!(d.component_count(), 1);
    assert_eq!(d.writhe(), -3);
    assert_eq!(d.components()[0].edges.len(), 6);
}

#[test]
fn signs_agree_with_label_oracle() {
    for text in [TREFOIL, "X[1,1,2,2]", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"] {
        let d = parse_pd(text).unwrap();
        for c in d.crossings() {
            assert_eq!(c.sign, table_sign(c.slots), "{text}");
        }
    }
}

#[test]
fn kinks_have_both_signs() {
    assert_eq!(parse_pd("X[1,1,2,2]").unwrap().writhe(), 1);
    assert_eq!(parse_pd("X[1,2,2,1]").unwrap().writhe(), -1);
}

#[test]
fn unknot_token() {
    let d = parse_pd("U").unwrap();
    assert_eq!((d.n(), d.component_count(), d.writhe()), (0, 1, 0));
    let two = parse_pd("U U # two circles").unwrap();
    assert_eq!(two.component_count(), 2);
}

#[test]
fn crossed_up_code_is_rejected() {
    // every pair of the three two-edge loops would cross an odd number of times
    let e = parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").unwrap_err();
    assert!(matches!(e, Error::Parse { .. }), "{e}");
}

#[test]
fn label_errors_carry_position() {
    match parse_pd("X[1,1,2,2]\n  X[3,3,4,5]").unwrap_err() {
        Error::Parse { line, col, .. } => assert_eq!((line, col), (2, 3)),
        e => panic!("{e}"),
    }
    assert!(parse_pd("").is_err());
    assert!(parse_pd("# nothing").is_err());
    assert!(parse_pd("X[1,2,3]").is_err());
    assert!(parse_pd("Y[1,2,3,4]").is_err());
}

#[test]
fn pd_wrapper_accepted() {
    let d = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
    assert_eq!(d, parse_pd(TREFOIL).unwrap());
}

#[test]
fn braid_closures() {
    let t = braid_closure(&parse_braid("s:2 -1 -1 -1").unwrap());
    assert_eq!((t.n(), t.component_count(), t.writhe()), (3, 1, -3));
    // σ1 σ1^-1 has trivial permutation, so its closure has two components
    let u = braid_closure(&parse_braid("s:2 1 -1").unwrap());
    assert_eq!((u.n(), u.component_count(), u.writhe()), (2, 2, 0));
    let v = braid_closure(&parse_braid("s:3 1 -2").unwrap());
    assert_eq!((v.n(), v.component_count(), v.writhe()), (2, 1, 0));
    let h = braid_closure(&parse_braid("s:2 -1 -1").unwrap());
    assert_eq!((h.n(), h.component_count(), h.writhe()), (2, 2, -2));
    let free = braid_closure(&parse_braid("s:3 1").unwrap());
    assert_eq!((free.n(), free.component_count(), free.unknot_count()), (1, 2, 1));
}

#[test]
fn cabling_counts() {
    let t = parse_pd(TREFOIL).unwrap();
    let c2 = t.cable(2);
    assert_eq!(c2.n(), 12);
    assert_eq!(c2.component_count(), 2);
    assert!(c2.crossings().iter().all(|c| c.sign == -1));
    assert!(t.cable(1).same_up_to_labels(&t));
    assert_eq!(LinkDiagram::unknot().cable(3).component_count(), 3);
    assert_eq!(t.cable(2).cable(2).n(), t.cable(4).n());
}

#[test]
fn kinks_change_writhe() {
    let t = parse_pd(TREFOIL).unwrap();
    let k = t.add_kink(0, 1).unwrap();
    assert_eq!((k.n(), k.writhe()), (4, -2));
    let kk = k.add_kink(0, -1).unwrap();
    assert_eq!(kk.writhe(), t.writhe());
    let u = LinkDiagram::unknot().add_kink(0, 1).unwrap();
    assert_eq!((u.n(), u.writhe(), u.component_count()), (1, 1, 1));
    assert!(t.add_kink(1, 1).is_err());
}

#[test]
fn render_roundtrip() {
    for text in [TREFOIL, "X[1,1,2,2] U", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"] {
        let d = parse_pd(text).unwrap();
        assert_eq!(parse_pd(&d.render_pd()).unwrap(), d);
        assert!(d.relabeled().same_up_to_labels(&d));
    }
}

#[test]
fn mirror_flips_writhe() {
    let t = parse_pd(TREFOIL).unwrap();
    let m = t.mirror();
    assert_eq!(m.writhe(), 3);
    assert!(m.mirror().same_up_to_labels(&t));
}

#[test]
fn strut_double_adds_same_sign() {
    for text in [TREFOIL, "X[1,1,2,2]"] {
        let d = parse_pd(text).unwrap();
        let s = d.strut_double(0);
        assert_eq!(s.n(), d.n() + 1);
        assert_eq!(s.writhe(), d.writhe() + d.crossings()[0].sign as i64);
    }
}

#[test]
fn splices() {
    let t = parse_pd(TREFOIL).unwrap();
    // B-splicing a negative crossing is the oriented smoothing: T(2,-3) -> T(2,-2)
    let b = t.b_splice(0);
    assert_eq!((b.n(), b.component_count()), (2, 2));
    let a = t.a_splice(0);
    assert_eq!((a.n(), a.component_count()), (2, 1));
    let k = parse_pd("X[1,1,2,2]").unwrap();
    assert_eq!(k.b_splice(0).unknot_count(), 1);
    assert_eq!(k.a_splice(0).unknot_count(), 2);
}

#[test]
fn strut_double_reorients_when_needed() {
    for d in crate::corpus::bundled().into_iter().map(|e| e.diagram).filter(|d| d.n() > 0) {
        for x in 0..d.n() {
            let s = d.strut_double(x);
            assert_eq!(s.n(), d.n() + 1);
            let g = crate::bstate::b_state(&d);
            let gs = crate::bstate::b_state(&s);
            assert_eq!((gs.circles, gs.struts.len()), (g.circles, g.struts.len() + 1));
        }
    }
}
