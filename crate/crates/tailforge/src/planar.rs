//! Planar contraction of flat-tangle networks.
//!
//! A network is a set of nodes, each a disk with legs in counterclockwise
//! order and a value given as a combination of crossingless matchings of
//! its legs. Legs are wired pairwise or left open. Contraction grows a disk
//! region one node at a time; the region state maps boundary matchings to
//! coefficients. Closed circles get the value `-(q + q^-1)`.
//!
//! Nodes marked as projectors let the region drop every matching with an
//! arc between two legs wired to the same side of a projector that has not
//! been absorbed yet, since the projector kills such turnbacks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{circle_value, LaurentPoly};
use crate::{Error, Result};

pub(crate) trait Coef: Clone + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Coef for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

/// Dense Laurent polynomial on doubled exponents: `c[i]` multiplies `q^((lo+i)/2)`.
#[derive(Clone, Debug)]
pub(crate) struct DPoly<C> {
    lo: i64,
    c: Vec<C>,
}

impl<C: Coef> DPoly<C> {
    fn zero() -> Self {
        DPoly { lo: 0, c: vec![] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn from_laurent(p: &LaurentPoly) -> Option<Self> {
        let (Some(lo), Some(hi)) = (p.min_exp2(), p.max_exp2()) else {
            return Some(Self::zero());
        };
        let mut c = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, v) in p.terms() {
            c[(e - lo) as usize] = C::from_big(v)?;
        }
        Some(DPoly { lo, c })
    }

    fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.c
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (self.lo + i as i64, v.to_big())),
        )
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|v| v.is_zero()) {
            self.c.pop();
        }
        let k = self.c.iter().take_while(|v| v.is_zero()).count();
        if k == self.c.len() {
            self.c.clear();
            self.lo = 0;
        } else if k > 0 {
            self.c.drain(..k);
            self.lo += k as i64;
        }
    }

    fn add_assign(&mut self, o: &Self) -> Option<()> {
        if o.is_zero() {
            return Some(());
        }
        if self.is_zero() {
            *self = o.clone();
            return Some(());
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.c.len() as i64).max(o.lo + o.c.len() as i64);
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            let mut v = vec![C::zero(); pad];
            v.append(&mut self.c);
            self.c = v;
            self.lo = lo;
        }
        self.c.resize((hi - lo) as usize, C::zero());
        let off = (o.lo - self.lo) as usize;
        for (i, v) in o.c.iter().enumerate() {
            self.c[off + i] = self.c[off + i].add(v)?;
        }
        self.trim();
        Some(())
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        if self.is_zero() || o.is_zero() {
            return Some(Self::zero());
        }
        let mut c = vec![C::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b)?)?;
            }
        }
        let mut r = DPoly { lo: self.lo + o.lo, c };
        r.trim();
        Some(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LegEnd {
    Wire(usize, usize),
    Open(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub legs: Vec<LegEnd>,
    /// Matchings as partner arrays over the legs, with coefficients.
    pub terms: Vec<(Vec<u16>, LaurentPoly)>,
    /// For projector nodes, the side (0 or 1) of each leg.
    pub sides: Option<Vec<u8>>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Network {
    pub nodes: Vec<Node>,
    /// Turnback class of each open leg; open legs sharing a class may not be joined.
    pub open_class: Vec<Option<usize>>,
}

impl Network {
    pub fn add_node(&mut self, legs: usize, terms: Vec<(Vec<u16>, LaurentPoly)>, sides: Option<Vec<u8>>) -> usize {
        self.nodes.push(Node { legs: vec![LegEnd::Open(usize::MAX); legs], terms, sides });
        self.nodes.len() - 1
    }

    pub fn wire(&mut self, a: (usize, usize), b: (usize, usize)) {
        self.nodes[a.0].legs[a.1] = LegEnd::Wire(b.0, b.1);
        self.nodes[b.0].legs[b.1] = LegEnd::Wire(a.0, a.1);
    }

    pub fn open(&mut self, a: (usize, usize), class: Option<usize>) -> usize {
        let id = self.open_class.len();
        self.open_class.push(class);
        self.nodes[a.0].legs[a.1] = LegEnd::Open(id);
        id
    }

    fn validate(&self) -> Result<()> {
        for (x, n) in self.nodes.iter().enumerate() {
            for (l, e) in n.legs.iter().enumerate() {
                match *e {
                    LegEnd::Wire(y, m) => {
                        if self.nodes[y].legs[m] != LegEnd::Wire(x, l) {
                            return Err(Error::Internal(format!("wire ({x},{l}) is not symmetric")));
                        }
                    }
                    LegEnd::Open(o) if o == usize::MAX => {
                        return Err(Error::Internal(format!("leg ({x},{l}) left unconnected")));
                    }
                    LegEnd::Open(_) => {}
                }
            }
            for (m, _) in &n.terms {
                if m.len() != n.legs.len() {
                    return Err(Error::Internal(format!("node {x} has a matching of the wrong size")));
                }
            }
        }
        Ok(())
    }
}

/// Result of a contraction: matchings on the open legs (indexed by open id)
/// with their coefficients. A closed network gives one entry with the empty matching.
pub(crate) type Evaluation = Vec<(Vec<u16>, LaurentPoly)>;

/// Contracts the network exactly, with i128 coefficients and a big-integer
/// rerun when they overflow.
pub(crate) fn evaluate(net: &Network) -> Result<Evaluation> {
    net.validate()?;
    if let Some(r) = contract::<i128>(net)? {
        return Ok(r);
    }
    contract::<BigInt>(net)?.ok_or_else(|| Error::Internal("big-integer contraction overflowed".into()))
}

struct Plan {
    /// Boundary after the attach, as positions in the concatenated sequence.
    keep: Vec<usize>,
    /// Joined pairs of positions in the concatenated sequence.
    joins: Vec<(usize, usize)>,
    region_rot: usize,
    node_rot: usize,
}

type Pos = (usize, usize);

fn far(net: &Network, p: Pos) -> LegEnd {
    net.nodes[p.0].legs[p.1]
}

/// Plans attaching node `y` to a region with boundary `bd`.
fn plan_attach(net: &Network, bd: &[Pos], y: usize) -> Option<Plan> {
    let len = bd.len();
    let touches: Vec<bool> = bd.iter().map(|&p| matches!(far(net, p), LegEnd::Wire(z, _) if z == y)).collect();
    let k = touches.iter().filter(|t| **t).count();
    if k == 0 && len > 0 {
        return None;
    }
    // rotate the region so that the touching interval is a suffix
    let region_rot = if k == 0 || k == len {
        0
    } else {
        let start = (0..len).find(|&i| touches[i] && !touches[(i + len - 1) % len])?;
        if (0..k).any(|j| !touches[(start + j) % len]) {
            return None;
        }
        (start + k) % len
    };
    let rbd: Vec<Pos> = (0..len).map(|i| bd[(region_rot + i) % len]).collect();
    let legs = net.nodes[y].legs.len();
    let node_rot = match rbd.last().map(|&p| far(net, p)) {
        Some(LegEnd::Wire(z, m)) if z == y => m,
        _ => 0,
    };
    let mut seq: Vec<Pos> = rbd;
    seq.extend((0..legs).map(|i| (y, (node_rot + i) % legs)));
    // contract adjacent wired pairs until none are left
    let mut alive: Vec<usize> = (0..seq.len()).collect();
    let mut joins = vec![];
    let wired = |a: Pos, b: Pos| far(net, a) == LegEnd::Wire(b.0, b.1);
    let mut changed = true;
    while changed && !alive.is_empty() {
        changed = false;
        let n = alive.len();
        for i in 0..n {
            if n < 2 {
                break;
            }
            let (a, b) = (alive[i], alive[(i + 1) % n]);
            if a != b && wired(seq[a], seq[b]) {
                joins.push((a, b));
                if i + 1 < n {
                    alive.drain(i..i + 2);
                } else {
                    alive.pop();
                    alive.remove(0);
                }
                changed = true;
                break;
            }
        }
    }
    // the region must stay a disk: nothing on the boundary may be wired to the boundary
    let inside = |p: Pos| -> bool {
        alive.iter().any(|&j| match far(net, p) {
            LegEnd::Wire(z, m) => seq[j] == (z, m),
            LegEnd::Open(_) => false,
        })
    };
    if alive.iter().any(|&j| inside(seq[j])) {
        return None;
    }
    Some(Plan { keep: alive, joins, region_rot, node_rot })
}

/// Applies the joins to a concatenated matching; returns the kept matching
/// (on plan positions) and the number of closed circles, or `None` when a
/// pruned turnback appears.
fn apply_plan(m: &[u16], plan: &Plan, join_of: &[u16], new_idx: &[u16], class: &[i64]) -> Option<(Vec<u16>, usize)> {
    let n = m.len();
    let mut out = vec![0u16; plan.keep.len()];
    let mut seen = vec![false; n];
    for (ni, &x) in plan.keep.iter().enumerate() {
        seen[x] = true;
        let mut y = m[x] as usize;
        while join_of[y] != u16::MAX {
            seen[y] = true;
            let z = join_of[y] as usize;
            seen[z] = true;
            y = m[z] as usize;
        }
        let nj = new_idx[y] as usize;
        if ni < nj && class[ni] >= 0 && class[ni] == class[nj] {
            return None;
        }
        out[ni] = nj as u16;
    }
    let mut loops = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut y = s;
        loop {
            seen[y] = true;
            let z = m[y] as usize;
            seen[z] = true;
            y = join_of[z] as usize;
            if y == s {
                break;
            }
        }
    }
    Some((out, loops))
}

fn class_of(net: &Network, in_region: &[bool], p: Pos) -> i64 {
    match far(net, p) {
        LegEnd::Open(o) => net.open_class[o].map(|c| -2 - c as i64).unwrap_or(-1),
        LegEnd::Wire(z, m) => match &net.nodes[z].sides {
            Some(s) if !in_region[z] => (2 * z + s[m] as usize) as i64,
            _ => -1,
        },
    }
}

fn prune_ok(m: &[u16], class: &[i64]) -> bool {
    m.iter().enumerate().all(|(i, &j)| {
        let j = j as usize;
        class[i] == -1 || class[i] != class[j]
    })
}

fn contract<C: Coef>(net: &Network) -> Result<Option<Evaluation>> {
    let nn = net.nodes.len();
    let mut in_region = vec![false; nn];
    let mut scalar = DPoly::<C>::from_laurent(&LaurentPoly::one()).unwrap();
    let d = circle_value();
    let mut dpow: Vec<DPoly<C>> = vec![];
    let mut done = 0;
    let mut result: Option<(Vec<Pos>, HashMap<Vec<u16>, DPoly<C>>)> = None;
    while done < nn {
        // start a region at the lowest free node
        let start = (0..nn).find(|&x| !in_region[x]).unwrap();
        in_region[start] = true;
        done += 1;
        let plan = plan_attach(net, &[], start).expect("an empty region accepts any node");
        let Some((mut bd, mut states)) = attach::<C>(net, &in_region, &[], &[(vec![], one::<C>())], start, &plan, &d, &mut dpow)? else {
            return Ok(None);
        };
        loop {
            let mut best: Option<(usize, usize, Plan)> = None;
            for y in 0..nn {
                if in_region[y] {
                    continue;
                }
                if let Some(p) = plan_attach(net, &bd, y) {
                    let score = p.keep.len();
                    if best.as_ref().is_none_or(|b| score < b.0) {
                        best = Some((score, y, p));
                    }
                }
            }
            let Some((_, y, plan)) = best else {
                let touching = bd.iter().any(|&p| matches!(far(net, p), LegEnd::Wire(z, _) if !in_region[z]));
                if touching {
                    return Err(Error::Resource("no planar contraction order keeps the region a disk".into()));
                }
                break;
            };
            in_region[y] = true;
            done += 1;
            let cur: Vec<(Vec<u16>, DPoly<C>)> = states.drain().collect();
            let Some((bd2, st)) = attach::<C>(net, &in_region, &bd, &cur, y, &plan, &d, &mut dpow)? else {
                return Ok(None);
            };
            bd = bd2;
            states = st;
        }
        if bd.iter().all(|&p| matches!(far(net, p), LegEnd::Open(_))) && !bd.is_empty() {
            if result.is_some() {
                return Err(Error::Internal("open legs spread over several regions".into()));
            }
            result = Some((bd, states));
        } else {
            let v = states.remove(&Vec::new()).unwrap_or_else(DPoly::zero);
            let Some(s) = scalar.mul(&v) else { return Ok(None) };
            scalar = s;
        }
    }
    let (bd, states) = result.unwrap_or((vec![], HashMap::from([(vec![], one::<C>())])));
    // reindex by open id
    let ids: Vec<usize> = bd
        .iter()
        .map(|&p| match far(net, p) {
            LegEnd::Open(o) => o,
            LegEnd::Wire(..) => unreachable!(),
        })
        .collect();
    let mut out = vec![];
    for (m, c) in states {
        let Some(c) = c.mul(&scalar) else { return Ok(None) };
        if c.is_zero() {
            continue;
        }
        let mut mm = vec![0u16; ids.len()];
        for (i, &j) in m.iter().enumerate() {
            mm[ids[i]] = ids[j as usize] as u16;
        }
        out.push((mm, c.to_laurent()));
    }
    out.sort();
    Ok(Some(out))
}

fn one<C: Coef>() -> DPoly<C> {
    DPoly::from_laurent(&LaurentPoly::one()).unwrap()
}

type Attached<C> = Option<(Vec<Pos>, HashMap<Vec<u16>, DPoly<C>>)>;

#[allow(clippy::too_many_arguments)]
fn attach<C: Coef>(
    net: &Network,
    in_region: &[bool],
    bd: &[Pos],
    states: &[(Vec<u16>, DPoly<C>)],
    y: usize,
    plan: &Plan,
    d: &LaurentPoly,
    dpow: &mut Vec<DPoly<C>>,
) -> Result<Attached<C>> {
    let len = bd.len();
    let legs = net.nodes[y].legs.len();
    let total = len + legs;
    let mut seq: Vec<Pos> = (0..len).map(|i| bd[(plan.region_rot + i) % len]).collect();
    seq.extend((0..legs).map(|i| (y, (plan.node_rot + i) % legs)));
    let mut join_of = vec![u16::MAX; total];
    for &(a, b) in &plan.joins {
        join_of[a] = b as u16;
        join_of[b] = a as u16;
    }
    let mut new_idx = vec![u16::MAX; total];
    for (i, &p) in plan.keep.iter().enumerate() {
        new_idx[p] = i as u16;
    }
    let new_bd: Vec<Pos> = plan.keep.iter().map(|&p| seq[p]).collect();
    let class: Vec<i64> = new_bd.iter().map(|&p| class_of(net, in_region, p)).collect();
    // node terms rotated into sequence order, pruned by the classes they see
    let node_terms: Vec<(Vec<u16>, DPoly<C>)> = {
        let mut v = vec![];
        for (m, c) in &net.nodes[y].terms {
            let Some(dc) = DPoly::from_laurent(c) else { return Ok(None) };
            let rot: Vec<u16> = (0..legs)
                .map(|i| {
                    let l = (plan.node_rot + i) % legs;
                    ((m[l] as usize + legs - plan.node_rot) % legs) as u16
                })
                .collect();
            v.push((rot, dc));
        }
        v
    };
    let mut out: HashMap<Vec<u16>, DPoly<C>> = HashMap::new();
    let mut m = vec![0u16; total];
    for (rm, rc) in states {
        // rotate the region matching
        for i in 0..len {
            let j = (plan.region_rot + i) % len;
            m[i] = ((rm[j] as usize + len - plan.region_rot) % len) as u16;
        }
        let mut local: HashMap<Vec<u16>, DPoly<C>> = HashMap::new();
        for (nm, nc) in &node_terms {
            for i in 0..legs {
                m[len + i] = (len + nm[i] as usize) as u16;
            }
            let Some((k, loops)) = apply_plan(&m, plan, &join_of, &new_idx, &class) else { continue };
            if !prune_ok(&k, &class) {
                continue;
            }
            while dpow.len() <= loops {
                let Some(p) = DPoly::from_laurent(&d.pow(dpow.len() as u32)) else { return Ok(None) };
                dpow.push(p);
            }
            let Some(v) = nc.mul(&dpow[loops]) else { return Ok(None) };
            let e = local.entry(k).or_insert_with(DPoly::zero);
            if e.add_assign(&v).is_none() {
                return Ok(None);
            }
        }
        for (k, v) in local {
            if v.is_zero() {
                continue;
            }
            let Some(p) = v.mul(rc) else { return Ok(None) };
            let e = out.entry(k).or_insert_with(DPoly::zero);
            if e.add_assign(&p).is_none() {
                return Ok(None);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(Some((new_bd, out)))
}

/// Partner array of a node value given as arcs over its legs.
pub(crate) fn matching(legs: usize, arcs: &[(usize, usize)]) -> Vec<u16> {
    let mut m = vec![u16::MAX; legs];
    for &(a, b) in arcs {
        m[a] = b as u16;
        m[b] = a as u16;
    }
    debug_assert!(!m.contains(&u16::MAX));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crossing_terms() -> Vec<(Vec<u16>, LaurentPoly)> {
        vec![
            (matching(4, &[(0, 1), (2, 3)]), LaurentPoly::monomial(1, 1)),
            (matching(4, &[(0, 3), (1, 2)]), LaurentPoly::monomial(1, -1)),
        ]
    }

    #[test]
    fn single_kink() {
        // X[1,1,2,2]: legs 0,1 joined and legs 2,3 joined
        let mut net = Network::default();
        let x = net.add_node(4, crossing_terms(), None);
        net.wire((x, 0), (x, 1));
        net.wire((x, 2), (x, 3));
        let r = evaluate(&net).unwrap();
        let d = circle_value();
        let want = &(&LaurentPoly::monomial(1, 1) * &(&d * &d)) + &(&LaurentPoly::monomial(1, -1) * &d);
        assert_eq!(r, vec![(vec![], want)]);
    }

    #[test]
    fn open_crossing() {
        let mut net = Network::default();
        let x = net.add_node(4, crossing_terms(), None);
        for l in 0..4 {
            net.open((x, l), None);
        }
        let r = evaluate(&net).unwrap();
        assert_eq!(r.len(), 2);
        let mut net2 = net.clone();
        net2.open_class = vec![Some(0), Some(0), Some(1), Some(1)];
        let r2 = evaluate(&net2).unwrap();
        assert_eq!(r2, vec![(matching(4, &[(0, 3), (1, 2)]), LaurentPoly::monomial(1, -1))]);
    }

    #[test]
    fn dense_overflow_is_detected() {
        let p = DPoly::<i128>::from_laurent(&LaurentPoly::monomial(BigInt::from(i128::MAX), 0)).unwrap();
        assert!(p.mul(&p).is_none());
        let big = LaurentPoly::monomial(BigInt::from(i128::MAX) * 4, 0);
        assert!(DPoly::<i128>::from_laurent(&big).is_none());
    }
}
