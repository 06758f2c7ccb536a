//! Tangle-by-tangle Khovanov complexes in the dotted cobordism category
//! (dot squared zero, handle equal to twice a dot), with delooping and
//! Gaussian elimination after every crossing.
//!
//! Objects are crossingless matchings of the current boundary points; they
//! need not be planar, since the relations only see abstract surfaces. A
//! morphism `X -> Z` is a combination of basis cobordisms: one disk per cycle
//! of `X ∪ Z`, each dotted or not. Cycles are numbered by their smallest
//! point and a basis element is the bit mask of its dotted cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::field::Field;
use crate::diagram::LinkDiagram;
use crate::{Error, Result};

type Mask = u64;

/// Widest boundary the bit masks can describe.
pub(crate) const MAX_WIDTH: usize = 120;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Mor<F> {
    terms: Vec<(Mask, F)>,
}

impl<F: Field> Mor<F> {
    fn from_map(m: BTreeMap<Mask, F>) -> Self {
        Mor { terms: m.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub(crate) fn scalar(c: F) -> Self {
        Mor { terms: if c.is_zero() { vec![] } else { vec![(0, c)] } }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient `c` when the morphism is `c` times an identity-shaped cobordism.
    fn iso_coef(&self) -> Option<&F> {
        match self.terms.as_slice() {
            [(0, c)] => Some(c),
            _ => None,
        }
    }

    pub(crate) fn scalar_part(&self) -> F {
        self.terms.iter().find(|t| t.0 == 0).map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    /// `self -= o * c`.
    fn sub_scaled(&mut self, o: &Mor<F>, c: &F) -> Option<()> {
        let mut m: BTreeMap<Mask, F> = self.terms.drain(..).collect();
        for (k, v) in &o.terms {
            let t = v.mul(c)?;
            let e = m.entry(*k).or_insert_with(F::zero);
            *e = e.sub(&t)?;
        }
        *self = Mor::from_map(m);
        Some(())
    }
}

/// Cycle index of every point in the union of two matchings, cycles numbered
/// in order of their smallest point.
fn cycles(x: &[u16], z: &[u16]) -> (Vec<u16>, usize) {
    let m = x.len();
    let mut cyc = vec![u16::MAX; m];
    let mut k = 0u16;
    for p in 0..m {
        if cyc[p] != u16::MAX {
            continue;
        }
        let mut cur = p;
        loop {
            cyc[cur] = k;
            let a = x[cur] as usize;
            cyc[a] = k;
            cur = z[a] as usize;
            if cur == p {
                break;
            }
        }
        k += 1;
    }
    (cyc, k as usize)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// A surface assembled from disks glued along intervals (`joins`) and whole
/// circles (`attach`), with boundary made of `outer` cycles.
#[derive(Debug)]
struct Gluing {
    comp_disks: Vec<u128>,
    genus: Vec<u32>,
    outer: Vec<Mask>,
}

impl Gluing {
    fn build(n_disks: usize, joins: &[(usize, usize)], attach: &[(usize, usize)], outer_disk: &[usize]) -> Result<Gluing> {
        if n_disks > 128 || outer_disk.len() > 64 {
            return Err(Error::Resource("tangle boundary too wide for the cobordism masks".into()));
        }
        let mut dsu = Dsu::new(n_disks);
        for &(a, b) in joins.iter().chain(attach) {
            dsu.union(a, b);
        }
        let mut comp_of = BTreeMap::new();
        let mut comp = vec![0usize; n_disks];
        for (d, c) in comp.iter_mut().enumerate() {
            let r = dsu.find(d);
            let next = comp_of.len();
            *c = *comp_of.entry(r).or_insert(next);
        }
        let nc = comp_of.len();
        let mut chi = vec![0i64; nc];
        let mut comp_disks = vec![0u128; nc];
        for (d, &c) in comp.iter().enumerate() {
            chi[c] += 1;
            comp_disks[c] |= 1u128 << d;
        }
        for &(a, _) in joins {
            chi[comp[a]] -= 1;
        }
        let mut outer = vec![0 as Mask; nc];
        for (k, &d) in outer_disk.iter().enumerate() {
            outer[comp[d]] |= 1 << k;
        }
        let mut genus = vec![0u32; nc];
        for c in 0..nc {
            let g2 = 2 - outer[c].count_ones() as i64 - chi[c];
            if g2 < 0 || g2 % 2 != 0 {
                return Err(Error::Internal(format!("glued surface has Euler characteristic {}", chi[c])));
            }
            genus[c] = (g2 / 2) as u32;
        }
        Ok(Gluing { comp_disks, genus, outer })
    }

    /// Adds `coef` times the reduced surface with the given dotted disks to `out`.
    fn eval<F: Field>(&self, dots: u128, coef: &F, out: &mut BTreeMap<Mask, F>) -> Option<()> {
        let mut terms: Vec<Mask> = vec![0];
        let mut factor = 0u32;
        for c in 0..self.comp_disks.len() {
            let d = self.genus[c] + (dots & self.comp_disks[c]).count_ones();
            if d >= 2 {
                return Some(());
            }
            let o = self.outer[c];
            if o == 0 {
                if d != 1 {
                    return Some(());
                }
                factor += self.genus[c];
            } else if d == 1 {
                factor += self.genus[c];
                for t in terms.iter_mut() {
                    *t |= o;
                }
            } else {
                let mut next = Vec::with_capacity(terms.len() * o.count_ones() as usize);
                for &t in &terms {
                    let mut rest = o;
                    while rest != 0 {
                        let bit = rest & rest.wrapping_neg();
                        rest &= rest - 1;
                        next.push(t | (o & !bit));
                    }
                }
                terms = next;
            }
        }
        let c = if factor == 0 { coef.clone() } else { coef.mul(&F::from_i64(1i64 << factor))? };
        for t in terms {
            let e = out.entry(t).or_insert_with(F::zero);
            *e = e.add(&c)?;
        }
        Some(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Obj {
    pub m: u32,
    pub r: i32,
    pub q: i32,
}

/// A complex over the current tangle boundary.
pub(crate) struct Cx<F> {
    width: usize,
    matchings: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, u32>,
    pub objs: Vec<Obj>,
    alive: Vec<bool>,
    pub out: Vec<BTreeMap<usize, Mor<F>>>,
    inc: Vec<BTreeSet<usize>>,
    compose_cache: HashMap<(u32, u32, u32), Arc<Gluing>>,
}

/// Result of an arithmetic step: `None` signals fixed-width overflow.
pub(crate) type Step<T> = Option<Result<T>>;

impl<F: Field> Cx<F> {
    pub(crate) fn new(width: usize) -> Self {
        Cx {
            width,
            matchings: vec![],
            index: HashMap::new(),
            objs: vec![],
            alive: vec![],
            out: vec![],
            inc: vec![],
            compose_cache: HashMap::new(),
        }
    }

    pub(crate) fn intern(&mut self, m: Vec<u16>) -> u32 {
        if let Some(&i) = self.index.get(&m) {
            return i;
        }
        let i = self.matchings.len() as u32;
        self.matchings.push(m.clone());
        self.index.insert(m, i);
        i
    }

    pub(crate) fn push(&mut self, o: Obj) -> usize {
        self.objs.push(o);
        self.alive.push(true);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeSet::new());
        self.objs.len() - 1
    }

    pub(crate) fn set(&mut self, a: usize, b: usize, f: Mor<F>) {
        if f.is_zero() {
            self.out[a].remove(&b);
            self.inc[b].remove(&a);
        } else {
            self.out[a].insert(b, f);
            self.inc[b].insert(a);
        }
    }

    pub(crate) fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.objs.len()).filter(|&i| self.alive[i])
    }

    fn gluing_for_compose(&mut self, mx: u32, my: u32, mz: u32) -> Result<Arc<Gluing>> {
        if let Some(g) = self.compose_cache.get(&(mx, my, mz)) {
            return Ok(g.clone());
        }
        let (x, y, z) = (
            &self.matchings[mx as usize],
            &self.matchings[my as usize],
            &self.matchings[mz as usize],
        );
        let (cxy, a) = cycles(x, y);
        let (cyz, b) = cycles(y, z);
        let (cxz, c) = cycles(x, z);
        let mut joins = vec![];
        for p in 0..y.len() {
            if p < y[p] as usize {
                joins.push((cxy[p] as usize, a + cyz[p] as usize));
            }
        }
        let mut outer_disk = vec![usize::MAX; c];
        for p in 0..x.len() {
            let k = cxz[p] as usize;
            if outer_disk[k] == usize::MAX {
                outer_disk[k] = cxy[p] as usize;
            }
        }
        let g = Arc::new(Gluing::build(a + b, &joins, &[], &outer_disk)?);
        self.compose_cache.insert((mx, my, mz), g.clone());
        Ok(g)
    }

    /// `g ∘ f` for `f: x -> y` and `g: y' -> z` where `y` and `y'` share a matching.
    fn compose(&mut self, mx: u32, my: u32, mz: u32, f: &Mor<F>, g: &Mor<F>) -> Step<Mor<F>> {
        let gl = match self.gluing_for_compose(mx, my, mz) {
            Ok(gl) => gl,
            Err(e) => return Some(Err(e)),
        };
        let a = cycles(&self.matchings[mx as usize], &self.matchings[my as usize]).1;
        let mut out = BTreeMap::new();
        for (mf, cf) in &f.terms {
            for (mg, cg) in &g.terms {
                let c = cf.mul(cg)?;
                gl.eval((*mf as u128) | ((*mg as u128) << a), &c, &mut out)?;
            }
        }
        Some(Ok(Mor::from_map(out)))
    }

    fn kill(&mut self, b: usize) {
        self.alive[b] = false;
        for y in std::mem::take(&mut self.out[b]).into_keys() {
            self.inc[y].remove(&b);
        }
        for x in std::mem::take(&mut self.inc[b]) {
            self.out[x].remove(&b);
        }
    }

    /// Cancels the isomorphism `b1 -> b2` with coefficient `c`.
    fn eliminate(&mut self, b1: usize, b2: usize, c: &F) -> Step<()> {
        let ins: Vec<(usize, Mor<F>)> = self.inc[b2]
            .iter()
            .filter(|&&x| x != b1)
            .map(|&x| (x, self.out[x][&b2].clone()))
            .collect();
        let outs: Vec<(usize, Mor<F>)> =
            self.out[b1].iter().filter(|(y, _)| **y != b2).map(|(y, f)| (*y, f.clone())).collect();
        let inv = F::from_i64(1).div(c)?;
        let mid = self.objs[b1].m;
        for (x, delta) in &ins {
            for (y, gamma) in &outs {
                let (mx, mz) = (self.objs[*x].m, self.objs[*y].m);
                let comp = match self.compose(mx, mid, mz, delta, gamma)? {
                    Ok(v) => v,
                    Err(e) => return Some(Err(e)),
                };
                if comp.is_zero() {
                    continue;
                }
                let mut cur = self.out[*x].get(y).cloned().unwrap_or(Mor { terms: vec![] });
                cur.sub_scaled(&comp, &inv)?;
                self.set(*x, *y, cur);
            }
        }
        self.kill(b1);
        self.kill(b2);
        Some(Ok(()))
    }

    /// Gaussian elimination until no isomorphism is left. Candidate sources
    /// are visited in `order`; each picks its lowest-index partner.
    pub(crate) fn reduce(&mut self, order: &[usize]) -> Step<usize> {
        let mut removed = 0;
        loop {
            let mut changed = false;
            for &b1 in order {
                if !self.alive[b1] {
                    continue;
                }
                let o1 = self.objs[b1];
                let pick = self.out[b1].iter().find_map(|(b2, f)| {
                    let o2 = self.objs[*b2];
                    if o2.m == o1.m && o2.q == o1.q {
                        f.iso_coef().map(|c| (*b2, c.clone()))
                    } else {
                        None
                    }
                });
                if let Some((b2, c)) = pick {
                    if let Err(e) = self.eliminate(b1, b2, &c)? {
                        return Some(Err(e));
                    }
                    removed += 2;
                    changed = true;
                }
            }
            if !changed {
                return Some(Ok(removed));
            }
        }
    }

    /// Checks that the differential squares to zero.
    pub(crate) fn check_dd(&mut self) -> Step<bool> {
        let live: Vec<usize> = self.live().collect();
        for x in live {
            let mut acc: BTreeMap<usize, Mor<F>> = BTreeMap::new();
            let firsts: Vec<(usize, Mor<F>)> = self.out[x].iter().map(|(y, f)| (*y, f.clone())).collect();
            for (y, f) in firsts {
                let seconds: Vec<(usize, Mor<F>)> = self.out[y].iter().map(|(z, g)| (*z, g.clone())).collect();
                for (z, g) in seconds {
                    let (mx, my, mz) = (self.objs[x].m, self.objs[y].m, self.objs[z].m);
                    let c = match self.compose(mx, my, mz, &f, &g)? {
                        Ok(c) => c,
                        Err(e) => return Some(Err(e)),
                    };
                    let e = acc.entry(z).or_insert(Mor { terms: vec![] });
                    e.sub_scaled(&c, &F::from_i64(-1))?;
                }
            }
            if acc.values().any(|m| !m.is_zero()) {
                return Some(Ok(false));
            }
        }
        Some(Ok(true))
    }

    /// Drops dead objects and renumbers.
    pub(crate) fn compact(self) -> Cx<F> {
        let mut next = Cx::new(self.width);
        next.matchings = self.matchings;
        next.index = self.index;
        next.compose_cache = self.compose_cache;
        let mut map = vec![usize::MAX; self.objs.len()];
        for (i, o) in self.objs.iter().enumerate() {
            if self.alive[i] {
                map[i] = next.push(*o);
            }
        }
        for (i, outs) in self.out.into_iter().enumerate() {
            if map[i] == usize::MAX {
                continue;
            }
            for (j, f) in outs {
                next.set(map[i], map[j], f);
            }
        }
        next
    }
}

/// Greedy crossing order: always take the crossing with the most legs wired
/// to the current boundary, ties by lowest index.
pub(crate) fn scan_order(d: &LinkDiagram) -> Vec<usize> {
    let n = d.n();
    let mut used = vec![false; n];
    let mut open: HashMap<usize, usize> = HashMap::new(); // crossing -> legs touching the boundary
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&x| !used[x])
            .max_by_key(|&x| (open.get(&x).copied().unwrap_or(0), std::cmp::Reverse(x)))
            .unwrap();
        used[best] = true;
        order.push(best);
        open.remove(&best);
        for s in 0..4u8 {
            let (y, _) = d.neighbor(best, s);
            if !used[y] {
                *open.entry(y).or_insert(0) += 1;
            }
        }
    }
    order
}

const SMOOTH: [[usize; 4]; 2] = [[1, 0, 3, 2], [3, 2, 1, 0]];
/// Disk of each leg under the identity cobordism of a smoothing.
const ARC_ID: [[usize; 4]; 2] = [[0, 0, 1, 1], [0, 1, 1, 0]];

/// Glued object: new matching plus the closed loops, each as its smallest point.
struct Glued {
    m: Vec<u16>,
    loops: Vec<usize>,
}

struct Step1<'a> {
    width: usize,
    joined: Vec<Option<usize>>,
    newidx: Vec<usize>,
    new_width: usize,
    matchings: &'a [Vec<u16>],
}

impl Step1<'_> {
    fn arc(&self, x: &[u16], s: usize, p: usize) -> usize {
        if p < self.width {
            x[p] as usize
        } else {
            self.width + SMOOTH[s][p - self.width]
        }
    }

    fn glue(&self, mo: u32, s: usize) -> Glued {
        let x = &self.matchings[mo as usize];
        let total = self.width + 4;
        let mut seen = vec![false; total];
        let mut m = vec![0u16; self.new_width];
        for p in 0..total {
            if self.joined[p].is_some() || seen[p] {
                continue;
            }
            seen[p] = true;
            let mut a = self.arc(x, s, p);
            while let Some(b) = self.joined[a] {
                seen[a] = true;
                seen[b] = true;
                a = self.arc(x, s, b);
            }
            seen[a] = true;
            m[self.newidx[p]] = self.newidx[a] as u16;
            m[self.newidx[a]] = self.newidx[p] as u16;
        }
        let mut loops = vec![];
        for p in 0..total {
            if seen[p] {
                continue;
            }
            loops.push(p);
            let mut cur = p;
            loop {
                seen[cur] = true;
                let a = self.arc(x, s, cur);
                seen[a] = true;
                cur = self.joined[a].unwrap();
                if cur == p {
                    break;
                }
            }
        }
        Glued { m, loops }
    }
}

/// Glues crossing `x` onto the complex. `bd` holds the global legs `4y+t` of
/// the boundary points and is updated in place.
fn add_crossing<F: Field>(cx: Cx<F>, bd: &mut Vec<usize>, d: &LinkDiagram, x: usize) -> Step<Cx<F>> {
    let width = bd.len();
    let pos: HashMap<usize, usize> = bd.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let total = width + 4;
    let mut joined = vec![None; total];
    let mut joins = vec![];
    for s in 0..4u8 {
        let (y, t) = d.neighbor(x, s);
        let p = width + s as usize;
        if y == x {
            let q = width + t as usize;
            joined[p] = Some(q);
            if p < q {
                joins.push((p, q));
            }
        } else if let Some(&i) = pos.get(&(4 * y + t as usize)) {
            joined[p] = Some(i);
            joined[i] = Some(p);
            joins.push((i, p));
        }
    }
    let mut newidx = vec![usize::MAX; total];
    let mut new_bd = vec![];
    for p in 0..total {
        if joined[p].is_none() {
            newidx[p] = new_bd.len();
            new_bd.push(if p < width { bd[p] } else { 4 * x + (p - width) });
        }
    }
    let new_width = new_bd.len();
    if new_width > MAX_WIDTH {
        return Some(Err(Error::Resource(format!("tangle boundary of {new_width} points"))));
    }
    let step = Step1 { width, joined, newidx: newidx.clone(), new_width, matchings: &cx.matchings };

    let mut next: Cx<F> = Cx::new(new_width);
    let live: Vec<usize> = cx.live().collect();
    let mut glued: HashMap<(u32, usize), Arc<Glued>> = HashMap::new();
    // (old object, smoothing) -> (first new index, glued shape)
    let mut place: HashMap<(usize, usize), (usize, Arc<Glued>)> = HashMap::new();
    for &o in &live {
        let ob = cx.objs[o];
        for s in 0..2 {
            let g = glued.entry((ob.m, s)).or_insert_with(|| Arc::new(step.glue(ob.m, s))).clone();
            let mid = next.intern(g.m.clone());
            let first = next.objs.len();
            for lab in 0..(1u32 << g.loops.len()) {
                let eps: i32 = (0..g.loops.len()).map(|i| if lab >> i & 1 == 0 { 1 } else { -1 }).sum();
                next.push(Obj { m: mid, r: ob.r + s as i32, q: ob.q + s as i32 + eps });
            }
            place.insert((o, s), (first, g));
        }
    }

    let disk_of = |c12: &[u16], a: usize, legdisk: &[usize; 4], p: usize| -> usize {
        if p < width {
            c12[p] as usize
        } else {
            a + legdisk[p - width]
        }
    };
    // Builds the surface for (old morphism shape) ⊗ (crossing cobordism).
    let build = |x1: &[u16], x2: &[u16], legdisk: &[usize; 4], ng: usize, g1: &Glued, g2: &Glued| -> Result<(Gluing, usize)> {
        let (c12, a) = cycles(x1, x2);
        let n_disks = a + ng + g1.loops.len() + g2.loops.len();
        let mut jn = vec![];
        for &(u, v) in &joins {
            jn.push((disk_of(&c12, a, legdisk, u), disk_of(&c12, a, legdisk, v)));
        }
        let mut at = vec![];
        for (i, &p) in g1.loops.iter().enumerate() {
            at.push((a + ng + i, disk_of(&c12, a, legdisk, p)));
        }
        for (i, &p) in g2.loops.iter().enumerate() {
            at.push((a + ng + g1.loops.len() + i, disk_of(&c12, a, legdisk, p)));
        }
        let (cout, nout) = cycles(&g1.m, &g2.m);
        let mut outer_disk = vec![usize::MAX; nout];
        for p in 0..total {
            if newidx[p] == usize::MAX {
                continue;
            }
            let k = cout[newidx[p]] as usize;
            if outer_disk[k] == usize::MAX {
                outer_disk[k] = disk_of(&c12, a, legdisk, p);
            }
        }
        Ok((Gluing::build(n_disks, &jn, &at, &outer_disk)?, a))
    };

    let emit = |next: &mut Cx<F>,
                    src: (usize, &Glued),
                    tgt: (usize, &Glued),
                    gl: &Gluing,
                    a: usize,
                    ng: usize,
                    f: &Mor<F>,
                    sign: i64|
     -> Option<()> {
        let (l1, l2) = (src.1.loops.len(), tgt.1.loops.len());
        let sgn = F::from_i64(sign);
        for lab1 in 0..(1u32 << l1) {
            for lab2 in 0..(1u32 << l2) {
                let mut extra: u128 = 0;
                for i in 0..l1 {
                    // source loops are capped by cups, dotted for the q^-1 copy
                    if lab1 >> i & 1 == 1 {
                        extra |= 1u128 << (a + ng + i);
                    }
                }
                for i in 0..l2 {
                    // target loops are closed by caps, dotted for the q^+1 copy
                    if lab2 >> i & 1 == 0 {
                        extra |= 1u128 << (a + ng + l1 + i);
                    }
                }
                let mut out = BTreeMap::new();
                for (mk, c) in &f.terms {
                    let c = c.mul(&sgn)?;
                    gl.eval(*mk as u128 | extra, &c, &mut out)?;
                }
                let mor = Mor::from_map(out);
                if !mor.is_zero() {
                    let (s, t) = (src.0 + lab1 as usize, tgt.0 + lab2 as usize);
                    debug_assert!(mor.terms.iter().all(|(mk, _)| {
                        let ncyc = cycles(&next.matchings[next.objs[s].m as usize], &next.matchings[next.objs[t].m as usize]).1 as i32;
                        ncyc - (next.width as i32) / 2 - 2 * mk.count_ones() as i32 == next.objs[s].q - next.objs[t].q
                    }));
                    next.set(s, t, mor);
                }
            }
        }
        Some(())
    };

    // old differentials tensored with the identity of each smoothing
    let mut cache: HashMap<(u32, u32, usize), Arc<(Gluing, usize)>> = HashMap::new();
    for &o1 in &live {
        for (&o2, f) in &cx.out[o1] {
            for s in 0..2 {
                let (m1, m2) = (cx.objs[o1].m, cx.objs[o2].m);
                let (p1, g1) = place[&(o1, s)].clone();
                let (p2, g2) = place[&(o2, s)].clone();
                let gl = match cache.get(&(m1, m2, s)) {
                    Some(g) => g.clone(),
                    None => {
                        let legdisk = [ARC_ID[s][0], ARC_ID[s][1], ARC_ID[s][2], ARC_ID[s][3]];
                        match build(&cx.matchings[m1 as usize], &cx.matchings[m2 as usize], &legdisk, 2, &g1, &g2) {
                            Ok(g) => {
                                let g = Arc::new(g);
                                cache.insert((m1, m2, s), g.clone());
                                g
                            }
                            Err(e) => return Some(Err(e)),
                        }
                    }
                };
                emit(&mut next, (p1, &g1), (p2, &g2), &gl.0, gl.1, 2, f, 1)?;
            }
        }
    }
    // the saddle of the new crossing, signed by the old homological degree
    let mut saddle_cache: HashMap<u32, Arc<(Gluing, usize)>> = HashMap::new();
    for &o in &live {
        let ob = cx.objs[o];
        let (p1, g1) = place[&(o, 0)].clone();
        let (p2, g2) = place[&(o, 1)].clone();
        let gl = match saddle_cache.get(&ob.m) {
            Some(g) => g.clone(),
            None => {
                let xm = &cx.matchings[ob.m as usize];
                match build(xm, xm, &[0, 0, 0, 0], 1, &g1, &g2) {
                    Ok(g) => {
                        let g = Arc::new(g);
                        saddle_cache.insert(ob.m, g.clone());
                        g
                    }
                    Err(e) => return Some(Err(e)),
                }
            }
        };
        let sign = if ob.r % 2 == 0 { 1 } else { -1 };
        emit(&mut next, (p1, &g1), (p2, &g2), &gl.0, gl.1, 1, &Mor::scalar(F::from_i64(1)), sign)?;
    }
    *bd = new_bd;
    Some(Ok(next))
}

/// Surviving generators `(r, q)` after scanning every crossing of `d`,
/// ignoring crossing-free circles.
pub(crate) fn scan_generators<F: Field>(d: &LinkDiagram, check_dd: bool) -> Step<Vec<(i32, i32)>> {
    let mut cx: Cx<F> = Cx::new(0);
    let m0 = cx.intern(vec![]);
    cx.push(Obj { m: m0, r: 0, q: 0 });
    let mut bd: Vec<usize> = vec![];
    for x in scan_order(d) {
        cx = match add_crossing(cx, &mut bd, d, x)? {
            Ok(c) => c,
            Err(e) => return Some(Err(e)),
        };
        let order: Vec<usize> = (0..cx.objs.len()).collect();
        if let Err(e) = cx.reduce(&order)? {
            return Some(Err(e));
        }
        if check_dd {
            match cx.check_dd()? {
                Ok(true) => {}
                Ok(false) => return Some(Err(Error::Internal(format!("d∘d != 0 after crossing {x}")))),
                Err(e) => return Some(Err(e)),
            }
        }
        cx = cx.compact();
    }
    if cx.live().any(|i| !cx.out[i].is_empty()) {
        return Some(Err(Error::Internal("closed complex kept a nonzero differential".into())));
    }
    Some(Ok(cx.live().map(|i| (cx.objs[i].r, cx.objs[i].q)).collect()))
}
