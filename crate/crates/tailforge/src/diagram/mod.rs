//! Framed link diagrams in PD notation.
//!
//! A crossing `X[a,b,c,d]` lists its four edge labels counterclockwise,
//! starting from the incoming under-strand, so the under-strand runs a -> c
//! and the over-strand joins b and d. The crossing is positive when the
//! over-strand runs d -> b.

mod braid;
mod parse;

pub use braid::{braid_closure, parse_braid, BraidWord};
pub use parse::parse_pd;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub slots: [u32; 4],
    pub sign: i8,
}

/// One link component that passes through at least one crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Edge labels in traversal order.
    pub edges: Vec<u32>,
    /// `(crossing, entry slot)` in traversal order; entering through `edges[i]`.
    pub passages: Vec<(usize, u8)>,
}

/// Tail and head of an oriented edge as `(crossing, slot)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEnds {
    pub tail: (usize, u8),
    pub head: (usize, u8),
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    unknots: usize,
    components: Vec<Component>,
    edges: BTreeMap<u32, EdgeEnds>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramStats {
    pub n: usize,
    pub writhe: i64,
    pub components: usize,
    pub crossing_weight: usize,
    pub user_n_min: Option<usize>,
}

/// How [`LinkDiagram::from_raw`] treats under-strands that disagree on direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orient {
    /// Reject inconsistent input.
    Strict,
    /// Re-root crossings so every under-strand agrees with its component.
    Repair,
}

impl LinkDiagram {
    pub fn unknot() -> Self {
        Self::from_raw(vec![], 1, Orient::Strict).unwrap()
    }

    pub fn empty() -> Self {
        Self::from_raw(vec![], 0, Orient::Strict).unwrap()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    pub fn unknot_count(&self) -> usize {
        self.unknots
    }

    /// Components that meet a crossing, in discovery order.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Crossing components followed by crossing-free circles.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.unknots
    }

    pub fn edge_ends(&self, label: u32) -> Option<EdgeEnds> {
        self.edges.get(&label).copied()
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.keys().copied()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn stats(&self) -> DiagramStats {
        DiagramStats {
            n: self.n(),
            writhe: self.writhe(),
            components: self.component_count(),
            crossing_weight: self.n(),
            user_n_min: None,
        }
    }

    /// The other end of the edge leaving crossing `x` through `slot`.
    pub fn neighbor(&self, x: usize, slot: u8) -> (usize, u8) {
        let e = self.edges[&self.crossings[x].slots[slot as usize]];
        if e.tail == (x, slot) {
            e.head
        } else {
            e.tail
        }
    }

    pub fn raw(&self) -> Vec<[u32; 4]> {
        self.crossings.iter().map(|c| c.slots).collect()
    }

    pub fn from_raw(raw: Vec<[u32; 4]>, unknots: usize, mode: Orient) -> Result<Self> {
        let mut raw = raw;
        let occ = occurrences(&raw)?;
        if mode == Orient::Repair {
            let flips = repair_plan(&raw, &occ);
            for x in flips {
                raw[x].rotate_left(2);
            }
        }
        let occ = occurrences(&raw)?;
        let n = raw.len();
        let mut seen = vec![[false; 2]; n];
        let mut components = Vec::new();
        let mut edges = BTreeMap::new();
        let mut over_entry = vec![None::<u8>; n];
        for x in 0..n {
            for parity in 0..2 {
                if seen[x][parity] {
                    continue;
                }
                let comp = oriented_trace(&raw, &occ, x, parity);
                let mut dir_ok = true;
                for &(y, s) in &comp {
                    seen[y][(s % 2) as usize] = true;
                    if s == 2 {
                        dir_ok = false;
                    }
                }
                if !dir_ok {
                    let (y, _) = comp.iter().find(|p| p.1 == 2).unwrap();
                    return Err(Error::Domain(format!(
                        "under-strands of one component disagree in direction (crossing {})",
                        y + 1
                    )));
                }
                let ci = components.len();
                let mut comp_edges = Vec::with_capacity(comp.len());
                let m = comp.len();
                for i in 0..m {
                    let (y, s) = comp[i];
                    let (py, ps) = comp[(i + m - 1) % m];
                    let exit = (ps + 2) % 4;
                    let label = raw[py][exit as usize];
                    comp_edges.push(label);
                    edges.insert(label, EdgeEnds { tail: (py, exit), head: (y, s), component: ci });
                    if s % 2 == 1 {
                        over_entry[y] = Some(s);
                    }
                }
                components.push(Component { edges: comp_edges, passages: comp });
            }
        }
        let crossings = raw
            .iter()
            .enumerate()
            .map(|(x, s)| Crossing {
                slots: *s,
                sign: if over_entry[x] == Some(3) { 1 } else { -1 },
            })
            .collect();
        let d = LinkDiagram { crossings, unknots, components, edges };
        d.check_planar()?;
        Ok(d)
    }

    /// Euler-characteristic test on the rotation system: every connected piece
    /// of the 4-valent graph must embed in a sphere.
    fn check_planar(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Ok(());
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges.values() {
            let a = find(&mut parent, e.tail.0);
            let b = find(&mut parent, e.head.0);
            parent[a] = b;
        }
        let pieces = (0..n).filter(|&x| find(&mut parent, x) == x).count();
        let mut seen = vec![false; 4 * n];
        let mut faces = 0;
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                let (y, t) = self.neighbor(h / 4, (h % 4) as u8);
                h = y * 4 + ((t as usize + 1) % 4);
            }
        }
        if faces != n + 2 * pieces {
            return Err(Error::Domain(format!(
                "crossing data is not planar: {faces} faces for {n} crossings in {pieces} connected pieces"
            )));
        }
        Ok(())
    }

    /// `X[a,b,c,d] ...` followed by one `U` per crossing-free circle.
    pub fn render_pd(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X[{},{},{},{}]", c.slots[0], c.slots[1], c.slots[2], c.slots[3]))
            .collect();
        parts.extend(std::iter::repeat_n("U".to_string(), self.unknots));
        parts.join(" ")
    }

    /// Relabels edges 1, 2, ... in order of first appearance.
    pub fn relabeled(&self) -> LinkDiagram {
        let mut map = HashMap::new();
        let mut next = 1u32;
        let raw: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|c| {
                c.slots.map(|l| {
                    *map.entry(l).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
            })
            .collect();
        LinkDiagram::from_raw(raw, self.unknots, Orient::Strict).expect("relabeling keeps validity")
    }

    /// Equality up to edge relabeling.
    pub fn same_up_to_labels(&self, o: &LinkDiagram) -> bool {
        let a = self.relabeled();
        let b = o.relabeled();
        a.crossings == b.crossings && a.unknots == b.unknots
    }

    fn max_label(&self) -> u32 {
        self.edges.keys().next_back().copied().unwrap_or(0)
    }

    /// Mirror image: every crossing changes over/under, orientation kept.
    pub fn mirror(&self) -> LinkDiagram {
        let raw = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.slots;
                if c.sign > 0 {
                    [d, a, b, cc]
                } else {
                    [b, cc, d, a]
                }
            })
            .collect();
        LinkDiagram::from_raw(raw, self.unknots, Orient::Strict).expect("mirror keeps validity")
    }

    pub fn disjoint_union(&self, o: &LinkDiagram) -> LinkDiagram {
        let off = self.max_label();
        let mut raw = self.raw();
        raw.extend(o.raw().into_iter().map(|s| s.map(|l| l + off)));
        LinkDiagram::from_raw(raw, self.unknots + o.unknots, Orient::Strict)
            .expect("disjoint union keeps validity")
    }

    /// Blackboard N-cable: each crossing becomes an N x N grid of crossings
    /// of the same sign and each component becomes N parallel ones.
    pub fn cable(&self, n: u32) -> LinkDiagram {
        assert!(n >= 1, "cable needs N >= 1");
        let n = n as usize;
        let mut next = 1u32;
        let mut fresh = || {
            next += 1;
            next - 1
        };
        // strand k of an edge is the k-th from the right when travelling along it
        let mut strand: HashMap<(u32, usize), u32> = HashMap::new();
        for &e in self.edges.keys() {
            for k in 0..n {
                strand.insert((e, k), fresh());
            }
        }
        let mut raw = Vec::with_capacity(n * n * self.n());
        for c in &self.crossings {
            let [ea, eb, ec, ed] = c.slots;
            // columns x from west to east carry under strand k = n-1-x
            let mut v = vec![vec![0u32; n + 1]; n];
            for (x, col) in v.iter_mut().enumerate() {
                let k = n - 1 - x;
                col[0] = strand[&(ea, k)];
                col[n] = strand[&(ec, k)];
                for seg in col.iter_mut().take(n).skip(1) {
                    *seg = fresh();
                }
            }
            // rows y from south to north carry over strand m
            let mut h = vec![vec![0u32; n + 1]; n];
            for (y, row) in h.iter_mut().enumerate() {
                let m = if c.sign > 0 { y } else { n - 1 - y };
                row[0] = strand[&(ed, m)];
                row[n] = strand[&(eb, m)];
                for seg in row.iter_mut().take(n).skip(1) {
                    *seg = fresh();
                }
            }
            for y in 0..n {
                for x in 0..n {
                    raw.push([v[x][y], h[y][x + 1], v[x][y + 1], h[y][x]]);
                }
            }
        }
        LinkDiagram::from_raw(raw, self.unknots * n, Orient::Strict).expect("cable keeps validity")
    }

    /// Adds a Reidemeister-1 kink of the given sign on component `comp`.
    pub fn add_kink(&self, comp: usize, sign: i8) -> Result<LinkDiagram> {
        if comp >= self.component_count() {
            return Err(Error::Domain(format!(
                "component {comp} out of range ({} components)",
                self.component_count()
            )));
        }
        let base = self.max_label();
        let (l, e_in, e_out) = (base + 1, base + 2, base + 3);
        let mut raw = self.raw();
        let mut unknots = self.unknots;
        let (ein, eout) = if comp < self.components.len() {
            let e = self.components[comp].edges[0];
            let (hx, hs) = self.edges[&e].head;
            raw[hx][hs as usize] = e_out;
            (e, e_out)
        } else {
            unknots -= 1;
            (e_in, e_in)
        };
        raw.push(if sign > 0 { [l, l, eout, ein] } else { [l, ein, eout, l] });
        LinkDiagram::from_raw(raw, unknots, Orient::Strict)
    }

    /// Removes crossing `x`, joining its slots in the two given pairs.
    /// A pair whose two slots carry the same edge closes into a free circle
    /// unless `drop_loops` is set, in which case it disappears.
    pub fn splice_raw(
        raw: &mut Vec<[u32; 4]>,
        unknots: &mut usize,
        x: usize,
        pairs: [(usize, usize); 2],
        drop_loops: bool,
    ) {
        let slots = raw.remove(x);
        let mut lab = slots;
        for (s1, s2) in pairs {
            let (l1, l2) = (lab[s1], lab[s2]);
            if l1 == l2 {
                if !drop_loops {
                    *unknots += 1;
                }
                continue;
            }
            for c in raw.iter_mut() {
                for l in c.iter_mut() {
                    if *l == l2 {
                        *l = l1;
                    }
                }
            }
            for l in lab.iter_mut() {
                if *l == l2 {
                    *l = l1;
                }
            }
        }
    }

    /// Smooths crossing `x` the B way: a joins d, b joins c.
    pub fn b_splice(&self, x: usize) -> LinkDiagram {
        let mut raw = self.raw();
        let mut u = self.unknots;
        Self::splice_raw(&mut raw, &mut u, x, [(0, 3), (1, 2)], false);
        LinkDiagram::from_raw(raw, u, Orient::Repair).expect("splicing keeps validity")
    }

    /// Smooths crossing `x` the A way: a joins b, c joins d.
    pub fn a_splice(&self, x: usize) -> LinkDiagram {
        let mut raw = self.raw();
        let mut u = self.unknots;
        Self::splice_raw(&mut raw, &mut u, x, [(0, 1), (2, 3)], false);
        LinkDiagram::from_raw(raw, u, Orient::Repair).expect("splicing keeps validity")
    }

    /// Undoes the Reidemeister-1 kink at `x` whose loop joins `loop_slots`.
    pub fn remove_kink(&self, x: usize, loop_slots: (usize, usize)) -> LinkDiagram {
        let c = self.crossings[x].slots;
        assert_eq!(c[loop_slots.0], c[loop_slots.1], "not a kink");
        let rest: Vec<usize> = (0..4).filter(|s| *s != loop_slots.0 && *s != loop_slots.1).collect();
        let mut raw = self.raw();
        let mut u = self.unknots;
        // the loop vanishes; the two remaining ends join up
        let lab = raw.remove(x);
        let (l1, l2) = (lab[rest[0]], lab[rest[1]]);
        if l1 == l2 {
            u += 1;
        } else {
            for cr in raw.iter_mut() {
                for l in cr.iter_mut() {
                    if *l == l2 {
                        *l = l1;
                    }
                }
            }
        }
        LinkDiagram::from_raw(raw, u, Orient::Repair).expect("kink removal keeps validity")
    }

    /// Replaces crossing `x` by two crossings forming a twist whose B-smoothings
    /// are parallel, so the B-state gains a second strut beside the first.
    /// The twist reconnects the ends like the B-smoothing, which can pair two
    /// incoming ends; crossings are then re-rooted along the new components.
    pub fn strut_double(&self, x: usize) -> LinkDiagram {
        let base = self.max_label();
        let (e_c, e_d) = (base + 1, base + 2);
        let c = self.crossings[x];
        let [a, b, cc, d] = c.slots;
        let mut raw = self.raw();
        raw[x] = [a, b, e_c, e_d];
        raw.push(if c.sign > 0 { [cc, d, e_d, e_c] } else { [e_d, e_c, cc, d] });
        LinkDiagram::from_raw(raw.clone(), self.unknots, Orient::Strict)
            .or_else(|_| LinkDiagram::from_raw(raw, self.unknots, Orient::Repair))
            .expect("strut doubling keeps validity")
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() && self.unknots == 0 {
            return f.write_str("(empty)");
        }
        f.write_str(&self.render_pd())
    }
}

type Occ = HashMap<u32, Vec<(usize, usize)>>;

fn occurrences(raw: &[[u32; 4]]) -> Result<Occ> {
    let mut occ: Occ = HashMap::new();
    for (x, c) in raw.iter().enumerate() {
        for (s, &l) in c.iter().enumerate() {
            occ.entry(l).or_default().push((x, s));
        }
    }
    let mut bad: Vec<(u32, usize)> = occ
        .iter()
        .filter(|(_, v)| v.len() != 2)
        .map(|(l, v)| (*l, v.len()))
        .collect();
    bad.sort();
    if let Some((l, k)) = bad.first() {
        return Err(Error::Domain(format!("edge label {l} occurs {k} times (expected 2)")));
    }
    Ok(occ)
}

fn other_end(raw: &[[u32; 4]], occ: &Occ, x: usize, s: usize) -> (usize, usize) {
    let o = &occ[&raw[x][s]];
    if o[0] == (x, s) {
        o[1]
    } else {
        o[0]
    }
}

/// Passages of the component through strand `parity` of crossing `x`,
/// oriented by its under-passages, or by the label rule of public tables
/// when it only passes over.
fn oriented_trace(raw: &[[u32; 4]], occ: &Occ, x: usize, parity: usize) -> Vec<(usize, u8)> {
    let other = |y: usize, s: usize| other_end(raw, occ, y, s);
    let t = trace(&other, x, parity as u8);
    match t.iter().find(|p| p.1 % 2 == 0) {
        Some(&(_, 2)) => trace(&other, x, parity as u8 + 2),
        Some(_) => t,
        None => {
            let [_, j, _, l] = raw[x];
            let positive = (j as i64 - l as i64 == 1) || (l as i64 - j as i64 > 1);
            trace(&other, x, if positive { 3 } else { 1 })
        }
    }
}

/// Passages `(crossing, entry slot)` of the strand entering `x` at `s`.
fn trace(other: &dyn Fn(usize, usize) -> (usize, usize), x: usize, s: u8) -> Vec<(usize, u8)> {
    let mut out = vec![];
    let (mut y, mut t) = (x, s);
    loop {
        out.push((y, t));
        let (ny, nt) = other(y, ((t + 2) % 4) as usize);
        y = ny;
        t = nt as u8;
        if (y, t) == (x, s) {
            break;
        }
    }
    out
}

/// Crossings whose slots must be rotated by two so that every component's
/// under-passages run a -> c.
fn repair_plan(raw: &[[u32; 4]], occ: &Occ) -> Vec<usize> {
    let n = raw.len();
    let mut seen = vec![[false; 2]; n];
    let mut flips = vec![];
    for x in 0..n {
        for parity in 0..2 {
            if seen[x][parity] {
                continue;
            }
            let comp = oriented_trace(raw, occ, x, parity);
            for &(y, s) in &comp {
                seen[y][(s % 2) as usize] = true;
                if s == 2 {
                    flips.push(y);
                }
            }
        }
    }
    flips
}

#[cfg(test)]
mod tests;
