//! Network builders for brackets and cabled evaluations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::LaurentPoly;
use crate::diagram::LinkDiagram;
use crate::planar::{evaluate, matching, Network};
use crate::tl::{jw_cleared, TLTangle};
use crate::{Error, Result};

/// A-smoothing `(a,b)(c,d)` with `q^(1/2)`, B-smoothing `(a,d)(b,c)` with `q^(-1/2)`.
pub(crate) fn crossing_terms() -> Vec<(Vec<u16>, LaurentPoly)> {
    vec![
        (matching(4, &[(0, 1), (2, 3)]), LaurentPoly::monomial(1, 1)),
        (matching(4, &[(0, 3), (1, 2)]), LaurentPoly::monomial(1, -1)),
    ]
}

pub(crate) fn bracket_network(d: &LinkDiagram) -> Network {
    let mut net = Network::default();
    for _ in 0..d.n() {
        net.add_node(4, crossing_terms(), None);
    }
    for x in 0..d.n() {
        for s in 0..4u8 {
            let (y, t) = d.neighbor(x, s);
            net.wire((x, s as usize), (y, t as usize));
        }
    }
    net
}

/// The crossingless `4N`-leg tangle with `k` arcs at the south-east and
/// north-west corners and `N-k` at the other two. Legs run counterclockwise:
/// side `s` (slot `s` of the crossing) holds legs `sN..sN+N`.
pub(crate) fn t_matching(n: usize, k: usize) -> Vec<u16> {
    let mut arcs = vec![];
    for side in 0..4 {
        let next = (side + 1) % 4;
        // corners 0-1 (SE) and 2-3 (NW) carry k arcs
        let count = if side % 2 == 0 { k } else { n - k };
        for t in 0..count {
            arcs.push((side * n + n - 1 - t, next * n + t));
        }
    }
    matching(4 * n, &arcs)
}

/// Grid node index and leg for leg `i` of side `s` of an `N x N` cable grid.
/// Columns `x` run west to east, rows `y` south to north; node `(x, y)` is `y*N + x`.
fn grid_leg(n: usize, s: usize, i: usize) -> (usize, usize) {
    match s {
        0 => (i, 0),
        1 => ((i) * n + n - 1, 1),
        2 => ((n - 1) * n + (n - 1 - i), 2),
        _ => ((n - 1 - i) * n, 3),
    }
}

/// Adds the `N^2` crossings of one cable grid; returns the first node index.
fn add_grid(net: &mut Network, n: usize) -> usize {
    let base = net.nodes.len();
    for _ in 0..n * n {
        net.add_node(4, crossing_terms(), None);
    }
    for y in 0..n {
        for x in 0..n {
            let v = base + y * n + x;
            if x + 1 < n {
                net.wire((v, 1), (v + 1, 3));
            }
            if y + 1 < n {
                net.wire((v, 2), (v + n, 0));
            }
        }
    }
    base
}

/// Coefficients of `T_0..T_N` in the `N`-cabled crossing with projectors
/// pending on all four sides, by contracting the grid.
pub(crate) fn grid_block(n: usize) -> Result<Arc<Vec<LaurentPoly>>> {
    static M: OnceLock<Mutex<HashMap<usize, Arc<Vec<LaurentPoly>>>>> = OnceLock::new();
    let memo = M.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = memo.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let mut net = Network::default();
    let base = add_grid(&mut net, n);
    for s in 0..4 {
        for i in 0..n {
            let (v, l) = grid_leg(n, s, i);
            net.open((base + v, l), Some(s));
        }
    }
    let ev = evaluate(&net)?;
    let mut coeffs = vec![LaurentPoly::zero(); n + 1];
    for (m, c) in ev {
        let k = (0..=n)
            .find(|&k| t_matching(n, k) == m)
            .ok_or_else(|| Error::Internal("cable grid produced a matching outside T_0..T_N".into()))?;
        coeffs[k] = c;
    }
    let v = Arc::new(coeffs);
    memo.lock().unwrap().insert(n, v.clone());
    Ok(v)
}

/// Projector terms on `2N` legs in counterclockwise order: bottom points
/// `0..N` left to right, then top points right to left.
fn projector_terms(n: usize) -> Result<(Vec<(Vec<u16>, LaurentPoly)>, LaurentPoly)> {
    let cl = jw_cleared(n as u32)?;
    let ccw = |p: usize| if p < n { p } else { 3 * n - 1 - p };
    let terms = cl
        .0
        .iter()
        .map(|(t, c): &(TLTangle, LaurentPoly)| {
            let mut m = vec![0u16; 2 * n];
            for p in 0..2 * n {
                m[ccw(p)] = ccw(t.partner(p)) as u16;
            }
            (m, c.clone())
        })
        .collect();
    Ok((terms, cl.1.clone()))
}

/// How the cable strands of one diagram edge are joined.
pub(crate) enum EdgeMode {
    Direct,
    Projector,
}

/// Builds a closed network for the `N`-cable of `d`. Each crossing becomes
/// either one block node with the given `T_k` coefficients or the full grid
/// of unit crossings; `edge_mode` chooses, per edge label, whether a projector
/// sits on the edge. Returns the network and the number of projectors.
pub(crate) fn cable_network(
    d: &LinkDiagram,
    n: usize,
    block: Option<&[LaurentPoly]>,
    edge_mode: &dyn Fn(u32) -> EdgeMode,
) -> Result<(Network, usize)> {
    let mut net = Network::default();
    // (crossing, side, leg) -> (node, leg)
    let mut port: Vec<Box<dyn Fn(usize, usize) -> (usize, usize)>> = vec![];
    for _ in 0..d.n() {
        match block {
            Some(b) => {
                let terms = (0..=n)
                    .filter(|&k| !b[k].is_zero())
                    .map(|k| (t_matching(n, k), b[k].clone()))
                    .collect();
                let v = net.add_node(4 * n, terms, None);
                port.push(Box::new(move |s, i| (v, s * n + i)));
            }
            None => {
                let base = add_grid(&mut net, n);
                port.push(Box::new(move |s, i| {
                    let (v, l) = grid_leg(n, s, i);
                    (base + v, l)
                }));
            }
        }
    }
    let (pterms, _) = if d.n() > 0 && n > 1 { projector_terms(n)? } else { (vec![], LaurentPoly::one()) };
    let mut projectors = 0;
    for e in d.edge_labels().collect::<Vec<_>>() {
        let ends = d.edge_ends(e).unwrap();
        let (x, s) = (ends.tail.0, ends.tail.1 as usize);
        let (y, t) = (ends.head.0, ends.head.1 as usize);
        match edge_mode(e) {
            EdgeMode::Projector if n > 1 => {
                let sides = (0..2 * n).map(|l| (l >= n) as u8).collect();
                let p = net.add_node(2 * n, pterms.clone(), Some(sides));
                projectors += 1;
                for i in 0..n {
                    net.wire(port[x](s, i), (p, n - 1 - i));
                    net.wire((p, n + i), port[y](t, n - 1 - i));
                }
            }
            _ => {
                for i in 0..n {
                    net.wire(port[x](s, i), port[y](t, n - 1 - i));
                }
            }
        }
    }
    Ok((net, projectors))
}

/// Value of a closed network with `projectors` cleared projector denominators.
pub(crate) fn closed_value(net: &Network, n: usize, projectors: usize) -> Result<LaurentPoly> {
    let ev = evaluate(net)?;
    let v = match ev.as_slice() {
        [] => LaurentPoly::zero(),
        [(m, c)] if m.is_empty() => c.clone(),
        _ => return Err(Error::Internal("closed network left open legs".into())),
    };
    if projectors == 0 || n <= 1 {
        return Ok(v);
    }
    let den = jw_cleared(n as u32)?.1.pow(projectors as u32);
    v.div_exact(&den)
        .ok_or_else(|| Error::Internal("colored evaluation did not clear its denominators".into()))
}
