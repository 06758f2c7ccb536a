//! Temperley-Lieb category with circle value `-(q + q^-1)` and Jones-Wenzl projectors.
//!
//! A tangle of type `(a, b)` has bottom points `0..a` and top points
//! `a..a+b`, both numbered left to right. Morphisms compose bottom to top:
//! `tl_compose(f, g)` stacks `g` on top of `f`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{circle_value, poly_gcd, LaurentPoly, RatFunc};
use crate::{Error, Result};

pub const DEFAULT_CAP: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLTangle {
    a: u16,
    b: u16,
    partner: Vec<u16>,
}

impl TLTangle {
    /// Builds a tangle from its arcs; checks that the matching is perfect and planar.
    pub fn new(a: usize, b: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let n = a + b;
        let mut partner = vec![u16::MAX; n];
        for &(x, y) in arcs {
            if x >= n || y >= n || x == y || partner[x] != u16::MAX || partner[y] != u16::MAX {
                return Err(Error::Domain(format!("bad arc ({x}, {y}) for a ({a}, {b}) tangle")));
            }
            partner[x] = y as u16;
            partner[y] = x as u16;
        }
        if partner.contains(&u16::MAX) {
            return Err(Error::Domain("matching is not perfect".into()));
        }
        let t = TLTangle { a: a as u16, b: b as u16, partner };
        if !t.is_planar() {
            return Err(Error::Domain("matching is not planar".into()));
        }
        Ok(t)
    }

    pub fn identity(n: usize) -> Self {
        let arcs: Vec<_> = (0..n).map(|i| (i, n + i)).collect();
        TLTangle::new(n, n, &arcs).unwrap()
    }

    /// The generator `e_i` on `n` strands: cap on bottom `i, i+1`, cup on top.
    pub fn e(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut arcs = vec![(i, i + 1), (n + i, n + i + 1)];
        arcs.extend((0..n).filter(|&k| k != i && k != i + 1).map(|k| (k, n + k)));
        TLTangle::new(n, n, &arcs).unwrap()
    }

    /// `(n, n-2)`: bottom points `i, i+1` joined, the rest pass through.
    pub fn cap(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut arcs = vec![(i, i + 1)];
        let mut top = n;
        for k in (0..n).filter(|&k| k != i && k != i + 1) {
            arcs.push((k, top));
            top += 1;
        }
        TLTangle::new(n, n - 2, &arcs).unwrap()
    }

    /// `(n-2, n)`: top points `i, i+1` joined.
    pub fn cup(n: usize, i: usize) -> Self {
        Self::cap(n, i).flip()
    }

    /// Upside-down reflection.
    pub fn flip(&self) -> Self {
        let (a, b) = (self.a as usize, self.b as usize);
        let map = |p: usize| if p < a { b + p } else { p - a };
        let mut partner = vec![0u16; a + b];
        for p in 0..a + b {
            partner[map(p)] = map(self.partner[p] as usize) as u16;
        }
        TLTangle { a: self.b, b: self.a, partner }
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.a as usize, self.b as usize)
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p] as usize
    }

    /// Arcs `(x, y)` with `x < y`, in increasing order of `x`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&p| p < self.partner[p] as usize)
            .map(|p| (p, self.partner[p] as usize))
            .collect()
    }

    /// Number of through-strands.
    pub fn width(&self) -> usize {
        let a = self.a as usize;
        (0..a).filter(|&p| self.partner[p] as usize >= a).count()
    }

    pub fn width_deficit(&self) -> usize {
        (self.a as usize - self.width()) / 2
    }

    /// Position of a point on the boundary circle: bottom left to right, then top right to left.
    fn cyclic(&self, p: usize) -> usize {
        let (a, b) = (self.a as usize, self.b as usize);
        if p < a {
            p
        } else {
            a + (b - 1 - (p - a))
        }
    }

    fn is_planar(&self) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .arcs()
            .into_iter()
            .map(|(x, y)| {
                let (u, v) = (self.cyclic(x), self.cyclic(y));
                (u.min(v), u.max(v))
            })
            .collect();
        arcs.iter().all(|&(x1, y1)| {
            arcs.iter().all(|&(x2, y2)| !(x1 < x2 && x2 < y1 && y1 < y2))
        })
    }

    pub fn tensor(&self, o: &TLTangle) -> TLTangle {
        let (a1, b1) = self.arity();
        let (a2, b2) = o.arity();
        let (a, b) = (a1 + a2, b1 + b2);
        let m1 = |p: usize| if p < a1 { p } else { a + (p - a1) };
        let m2 = |p: usize| if p < a2 { a1 + p } else { a + b1 + (p - a2) };
        let mut partner = vec![0u16; a + b];
        for p in 0..a1 + b1 {
            partner[m1(p)] = m1(self.partner[p] as usize) as u16;
        }
        for p in 0..a2 + b2 {
            partner[m2(p)] = m2(o.partner[p] as usize) as u16;
        }
        TLTangle { a: a as u16, b: b as u16, partner }
    }

    /// Stacks `g` on top of `self`; returns the tangle and the number of closed circles.
    pub fn then(&self, g: &TLTangle) -> (TLTangle, usize) {
        let (a, b) = self.arity();
        let (b2, c) = g.arity();
        assert_eq!(b, b2, "arity mismatch");
        // nodes: bottom 0..a, middle a..a+b, top a+b..a+b+c
        let f_node = |p: usize| p; // f's points are already bottom then middle
        let g_node = |p: usize| a + p;
        let mut fp = vec![usize::MAX; a + b + c];
        let mut gp = vec![usize::MAX; a + b + c];
        for p in 0..a + b {
            fp[f_node(p)] = f_node(self.partner[p] as usize);
        }
        for p in 0..b + c {
            gp[g_node(p)] = g_node(g.partner[p] as usize);
        }
        let mut partner = vec![0u16; a + c];
        let mut seen = vec![false; a + b];
        let outer = |v: usize| v < a || v >= a + b;
        let out_idx = |v: usize| if v < a { v } else { v - b };
        for start in (0..a).chain(a + b..a + b + c) {
            // outer nodes have exactly one incident arc
            let mut v = start;
            let mut use_f = start < a;
            loop {
                let w = if use_f { fp[v] } else { gp[v] };
                if outer(w) {
                    partner[out_idx(start)] = out_idx(w) as u16;
                    break;
                }
                seen[w] = true;
                v = w;
                use_f = !use_f;
            }
        }
        let mut loops = 0;
        for m in a..a + b {
            if seen[m] {
                continue;
            }
            loops += 1;
            let mut v = m;
            let mut use_f = true;
            loop {
                seen[v] = true;
                v = if use_f { fp[v] } else { gp[v] };
                use_f = !use_f;
                if v == m {
                    break;
                }
            }
        }
        (TLTangle { a: a as u16, b: c as u16, partner }, loops)
    }

    /// Closes the rightmost `k` strands around the right side.
    pub fn partial_trace(&self, k: usize) -> (TLTangle, usize) {
        let (a, b) = self.arity();
        assert!(k <= a && k <= b, "cannot close {k} strands of a ({a}, {b}) tangle");
        // join top point a+b-1-i with bottom point a-1-i via a closing arc
        let close = |p: usize| -> Option<usize> {
            if p < a && p >= a - k {
                Some(a + b - 1 - (a - 1 - p))
            } else if p >= a + b - k {
                Some(a - 1 - (a + b - 1 - p))
            } else {
                None
            }
        };
        let keep_bottom = a - k;
        let keep_top = b - k;
        let new_idx = |p: usize| if p < a { p } else { keep_bottom + (p - a) };
        let mut partner = vec![0u16; keep_bottom + keep_top];
        let mut seen = vec![false; a + b];
        let kept = (0..keep_bottom).chain(a..a + keep_top);
        for start in kept {
            let mut v = self.partner[start] as usize;
            seen[start] = true;
            while let Some(w) = close(v) {
                seen[v] = true;
                seen[w] = true;
                v = self.partner[w] as usize;
            }
            seen[v] = true;
            partner[new_idx(start)] = new_idx(v) as u16;
        }
        let mut loops = 0;
        for p in 0..a + b {
            if seen[p] {
                continue;
            }
            loops += 1;
            let mut v = p;
            loop {
                seen[v] = true;
                let w = self.partner[v] as usize;
                seen[w] = true;
                v = close(w).expect("closed strands only");
                if v == p {
                    break;
                }
            }
        }
        (TLTangle { a: keep_bottom as u16, b: keep_top as u16, partner }, loops)
    }
}

impl fmt::Display for TLTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)?;
        for (x, y) in self.arcs() {
            write!(f, " {x}-{y}")?;
        }
        Ok(())
    }
}

/// Formal combination of `(a, b)` tangles with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLMorphism {
    a: usize,
    b: usize,
    terms: BTreeMap<TLTangle, RatFunc>,
}

impl TLMorphism {
    pub fn zero(a: usize, b: usize) -> Self {
        TLMorphism { a, b, terms: BTreeMap::new() }
    }

    pub fn from_tangle(t: TLTangle, c: RatFunc) -> Self {
        let (a, b) = t.arity();
        let mut m = Self::zero(a, b);
        m.add_term(t, &c);
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_tangle(TLTangle::identity(n), RatFunc::one())
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLTangle, &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &TLTangle) -> RatFunc {
        self.terms.get(t).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_term(&mut self, t: TLTangle, c: &RatFunc) {
        assert_eq!(t.arity(), (self.a, self.b), "arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&t) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&t);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(t, c.clone());
            }
        }
    }

    pub fn add(&self, o: &TLMorphism) -> TLMorphism {
        let mut r = self.clone();
        for (t, c) in &o.terms {
            r.add_term(t.clone(), c);
        }
        r
    }

    pub fn scale(&self, c: &RatFunc) -> TLMorphism {
        let mut r = Self::zero(self.a, self.b);
        for (t, v) in &self.terms {
            r.add_term(t.clone(), &(v * c));
        }
        r
    }

    pub fn tensor(&self, o: &TLMorphism) -> TLMorphism {
        let mut r = Self::zero(self.a + o.a, self.b + o.b);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &o.terms {
                r.add_term(t1.tensor(t2), &(c1 * c2));
            }
        }
        r
    }

    /// Common denominator and numerators, so that `self = Σ num_t t / den`.
    pub fn cleared(&self) -> (Vec<(TLTangle, LaurentPoly)>, LaurentPoly) {
        let mut den = LaurentPoly::one();
        for c in self.terms.values() {
            den = poly_lcm(&den, c.den());
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| {
                let f = den.div_exact(c.den()).expect("lcm is a multiple");
                (t.clone(), c.num() * &f)
            })
            .collect();
        (terms, den)
    }
}

impl fmt::Display for TLMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 in TL({},{})", self.a, self.b);
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{c}] {t}")?;
        }
        Ok(())
    }
}

pub fn poly_lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if b.len() <= 1 {
        return a.clone();
    }
    if a.len() <= 1 {
        return b.clone();
    }
    let g = poly_gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides the product")
}

fn circle_power(k: usize) -> LaurentPoly {
    circle_value().pow(k as u32)
}

/// Stacks `g` on top of `f`. Coefficients are accumulated over a common
/// denominator and reduced once per output tangle.
pub fn tl_compose(f: &TLMorphism, g: &TLMorphism) -> Result<TLMorphism> {
    if f.b != g.a {
        return Err(Error::Domain(format!(
            "cannot compose TL({},{}) with TL({},{})",
            f.a, f.b, g.a, g.b
        )));
    }
    let (ft, fd) = f.cleared();
    let (gt, gd) = g.cleared();
    let mut acc: HashMap<TLTangle, LaurentPoly> = HashMap::new();
    let mut powers: Vec<LaurentPoly> = vec![];
    for (t1, c1) in &ft {
        for (t2, c2) in &gt {
            let (t, loops) = t1.then(t2);
            while powers.len() <= loops {
                powers.push(circle_power(powers.len()));
            }
            let v = &(c1 * c2) * &powers[loops];
            *acc.entry(t).or_insert_with(LaurentPoly::zero) += &v;
        }
    }
    let den = &fd * &gd;
    let mut r = TLMorphism::zero(f.a, g.b);
    for (t, v) in acc {
        if !v.is_zero() {
            r.terms.insert(t, RatFunc::new(v, den.clone()));
        }
    }
    Ok(r)
}

/// Closes the rightmost `k` strands of an `(a, a)` morphism.
pub fn partial_trace(f: &TLMorphism, k: usize) -> Result<TLMorphism> {
    if k > f.a || k > f.b {
        return Err(Error::Domain(format!("cannot close {k} strands of TL({},{})", f.a, f.b)));
    }
    let mut r = TLMorphism::zero(f.a - k, f.b - k);
    for (t, c) in &f.terms {
        let (s, loops) = t.partial_trace(k);
        r.add_term(s, &(c * &RatFunc::from_poly(circle_power(loops))));
    }
    Ok(r)
}

/// Markov closure of an `(a, a)` morphism.
pub fn close_trace(f: &TLMorphism) -> Result<RatFunc> {
    if f.a != f.b {
        return Err(Error::Domain(format!("trace needs an (a,a) morphism, got ({},{})", f.a, f.b)));
    }
    let r = partial_trace(f, f.a)?;
    Ok(r.coeff(&TLTangle::identity(0)))
}

/// `(-1)^n [n+1]`, the closure of the n-th projector.
pub fn delta(n: u32) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for k in 0..=n as i64 {
        p.add_term(2 * (n as i64 - 2 * k), 1.into());
    }
    if n % 2 == 1 {
        -p
    } else {
        p
    }
}

type Memo = Mutex<HashMap<u32, Arc<OnceLock<Arc<TLMorphism>>>>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn jw_projector(a: u32) -> Result<Arc<TLMorphism>> {
    jw_projector_capped(a, DEFAULT_CAP)
}

/// Jones-Wenzl projector by the Wenzl recursion
/// `p_{n+1} = p_n ⊗ 1 - (Δ_{n-1}/Δ_n) (p_n ⊗ 1) e_n (p_n ⊗ 1)`.
pub fn jw_projector_capped(a: u32, cap: u32) -> Result<Arc<TLMorphism>> {
    if a == 0 {
        return Err(Error::Domain("projector needs at least one strand".into()));
    }
    if a > cap {
        return Err(Error::Resource(format!("projector on {a} strands exceeds the TL cap {cap}")));
    }
    let cell = {
        let mut m = memo().lock().unwrap();
        m.entry(a).or_default().clone()
    };
    if let Some(p) = cell.get() {
        return Ok(p.clone());
    }
    let value = if a == 1 {
        TLMorphism::identity(1)
    } else {
        let n = a as usize - 1;
        let prev = jw_projector_capped(a - 1, cap)?;
        let pe = prev.tensor(&TLMorphism::identity(1));
        let e = TLMorphism::from_tangle(TLTangle::e(n + 1, n - 1), RatFunc::one());
        let mid = tl_compose(&tl_compose(&pe, &e)?, &pe)?;
        let ratio = RatFunc::new(delta(n as u32 - 1), delta(n as u32));
        pe.add(&mid.scale(&-&ratio))
    };
    Ok(cell.get_or_init(|| Arc::new(value)).clone())
}

/// Projector numerators over a common denominator, memoized.
pub fn jw_cleared(a: u32) -> Result<Arc<(Vec<(TLTangle, LaurentPoly)>, LaurentPoly)>> {
    type CMemo = Mutex<HashMap<u32, Arc<(Vec<(TLTangle, LaurentPoly)>, LaurentPoly)>>>;
    static M: OnceLock<CMemo> = OnceLock::new();
    let m = M.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = m.lock().unwrap().get(&a) {
        return Ok(v.clone());
    }
    let v = Arc::new(jw_projector(a)?.cleared());
    m.lock().unwrap().insert(a, v.clone());
    Ok(v)
}

/// Bracket expansion of a crossing between two upward strands.
/// The positive crossing is `q^(1/2) id + q^(-1/2) e`.
pub fn crossing_expand(sign: i8) -> TLMorphism {
    let (ci, ce) = if sign > 0 { (1, -1) } else { (-1, 1) };
    let mut m = TLMorphism::from_tangle(TLTangle::identity(2), RatFunc::from_poly(LaurentPoly::monomial(1, ci)));
    m.add_term(TLTangle::e(2, 0), &RatFunc::from_poly(LaurentPoly::monomial(1, ce)));
    m
}

/// Whether `p_a ∘ (p_b ⊗ id_{a-b}) = p_a`.
pub fn absorb_check(a: u32, b: u32) -> Result<bool> {
    if b == 0 || b >= a {
        return Err(Error::Domain(format!("absorb_check needs 1 <= b < a, got a={a}, b={b}")));
    }
    let pa = jw_projector(a)?;
    let pb = jw_projector(b)?;
    let small = pb.tensor(&TLMorphism::identity((a - b) as usize));
    Ok(tl_compose(&small, &pa)? == *pa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e2: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, e2)
    }

    #[test]
    fn tangle_basics() {
        assert!(TLTangle::new(2, 2, &[(0, 3), (1, 2)]).is_err());
        let e = TLTangle::e(2, 0);
        assert_eq!(e.width(), 0);
        assert_eq!(e.width_deficit(), 1);
        assert_eq!(TLTangle::identity(3).width_deficit(), 0);
        let (t, loops) = e.then(&e);
        assert_eq!((t, loops), (e.clone(), 1));
        let (s, l) = TLTangle::cup(2, 0).then(&TLTangle::cap(2, 0));
        assert_eq!((s.arity(), l), ((0, 0), 1));
    }

    #[test]
    fn e_squared() {
        let e = TLMorphism::from_tangle(TLTangle::e(2, 0), RatFunc::one());
        assert_eq!(tl_compose(&e, &e).unwrap(), e.scale(&RatFunc::from_poly(circle_value())));
        let cup = TLMorphism::from_tangle(TLTangle::cup(2, 0), RatFunc::one());
        let cap = TLMorphism::from_tangle(TLTangle::cap(2, 0), RatFunc::one());
        let s = tl_compose(&cup, &cap).unwrap();
        assert_eq!(s.coeff(&TLTangle::identity(0)), RatFunc::from_poly(circle_value()));
        let id = TLMorphism::identity(3);
        assert_eq!(tl_compose(&id, &id).unwrap(), id);
        assert!(tl_compose(&id, &TLMorphism::identity(2)).is_err());
    }

    #[test]
    fn p2_closed_form() {
        let p2 = jw_projector(2).unwrap();
        let inv = RatFunc::from_poly(q(2) + q(-2)).inv();
        let mut want = TLMorphism::identity(2);
        want.add_term(TLTangle::e(2, 0), &inv);
        assert_eq!(*p2, want);
    }

    #[test]
    fn traces() {
        assert_eq!(close_trace(&TLMorphism::identity(1)).unwrap(), RatFunc::from_poly(circle_value()));
        let t2 = close_trace(&jw_projector(2).unwrap()).unwrap();
        assert_eq!(t2, RatFunc::from_poly(q(4) + q(0) + q(-4)));
        let e = TLMorphism::from_tangle(TLTangle::e(2, 0), RatFunc::one());
        // one circle: cap, closing arc, cup, closing arc
        assert_eq!(close_trace(&e).unwrap(), RatFunc::from_poly(circle_value()));
        let id2 = close_trace(&TLMorphism::identity(2)).unwrap();
        assert_eq!(id2, RatFunc::from_poly((q(2) + q(-2)).pow(2)));
    }

    #[test]
    fn crossing_inverse_and_kink() {
        let c = tl_compose(&crossing_expand(1), &crossing_expand(-1)).unwrap();
        assert_eq!(c, TLMorphism::identity(2));
        let k = partial_trace(&crossing_expand(1), 1).unwrap();
        assert_eq!(k, TLMorphism::identity(1).scale(&RatFunc::from_poly(LaurentPoly::monomial(-1, 3))));
    }

    #[test]
    fn small_absorption() {
        assert!(absorb_check(2, 1).unwrap());
        assert!(absorb_check(3, 2).unwrap());
        assert!(absorb_check(1, 1).is_err());
    }

    #[test]
    fn cap_limit() {
        assert!(matches!(jw_projector(7), Err(Error::Resource(_))));
        assert!(jw_projector(0).is_err());
    }
}
