//! Kauffman bracket, colored Jones polynomials and their stable tails.

mod network;
mod tail;

pub use tail::{reduction_tail_check, tail_extract, TailCheck};

use serde::{Deserialize, Serialize};

use crate::algebra::{brace_poly, circle_value, LaurentPoly};
use crate::bstate::{b_state, state_circles};
use crate::diagram::LinkDiagram;
use crate::tl::{delta, DEFAULT_CAP};
use crate::{Error, Result};

use network::{bracket_network, cable_network, closed_value, grid_block, EdgeMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Blocks from contracting each cabled crossing, projectors on every edge.
    TlContraction,
    /// Blocks from the closed multi-cone formula.
    Multicone,
    /// Full cable, one projector per component.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEvaluation {
    pub diagram: String,
    pub color: u32,
    pub value: LaurentPoly,
    pub method: Method,
}

/// Kauffman bracket with circle value `-(q + q^-1)`; the empty diagram has bracket 1.
pub fn kauffman_bracket(d: &LinkDiagram) -> Result<LaurentPoly> {
    let v = closed_value(&bracket_network(d), 1, 0)?;
    Ok(&v * &circle_value().pow(d.unknot_count() as u32))
}

/// The bracket as a sum over all `2^n` states. Exponential; meant as an oracle.
pub fn bracket_state_sum(d: &LinkDiagram) -> LaurentPoly {
    let n = d.n();
    assert!(n <= 24, "state sum over 2^{n} states refused");
    let dv = circle_value();
    let mut acc = LaurentPoly::zero();
    for mask in 0u64..(1u64 << n) {
        let (_, circles) = state_circles(d, |x| mask >> x & 1 == 1);
        let b = mask.count_ones() as i64;
        let a = n as i64 - b;
        acc += &(&LaurentPoly::monomial(1, a - b) * &dv.pow(circles as u32));
    }
    if n == 0 && d.unknot_count() == 0 {
        return LaurentPoly::one();
    }
    acc
}

fn check_color(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("color must be at least 1".into()));
    }
    if n > DEFAULT_CAP {
        return Err(Error::Resource(format!("color {n} needs projectors on {n} strands, above the TL cap {DEFAULT_CAP}")));
    }
    Ok(())
}

fn colored_with_block(d: &LinkDiagram, n: u32, block: &[LaurentPoly]) -> Result<LaurentPoly> {
    let nu = n as usize;
    let (net, p) = cable_network(d, nu, Some(block), &|_| EdgeMode::Projector)?;
    let v = closed_value(&net, nu, p)?;
    Ok(&v * &delta(n).pow(d.unknot_count() as u32))
}

/// Coefficients of `T_0..T_N` in the multi-cone formula:
/// `q^(-N^2/2) q^(k^2) {N k}` with the brace polynomial evaluated at `q`.
pub fn multicone_block(n: u32) -> Result<Vec<LaurentPoly>> {
    (0..=n)
        .map(|k| Ok(brace_poly(n, k)?.shift(2 * (k * k) as i64 - (n * n) as i64)))
        .collect()
}

/// Coefficients of `T_0..T_N` obtained by contracting the cabled crossing.
pub fn contracted_block(n: u32) -> Result<Vec<LaurentPoly>> {
    check_color(n)?;
    Ok(grid_block(n as usize)?.to_vec())
}

/// N-colored Jones polynomial of the framed diagram (unnormalized, unknot
/// `(-1)^N [N+1]`). Each crossing is contracted as a cabled block with
/// projectors on every edge; a single projector per component gives the
/// same value, which [`colored_jones_literal`] computes directly.
pub fn colored_jones(d: &LinkDiagram, n: u32) -> Result<ColoredEvaluation> {
    check_color(n)?;
    let value = if n == 1 {
        kauffman_bracket(d)?
    } else {
        colored_with_block(d, n, &grid_block(n as usize)?)?
    };
    Ok(ColoredEvaluation { diagram: d.render_pd(), color: n, value, method: Method::TlContraction })
}

pub fn multicone_colored_jones(d: &LinkDiagram, n: u32) -> Result<ColoredEvaluation> {
    check_color(n)?;
    let value = colored_with_block(d, n, &multicone_block(n)?)?;
    Ok(ColoredEvaluation { diagram: d.render_pd(), color: n, value, method: Method::Multicone })
}

/// Full N-cable with one projector on the first edge of every component.
pub fn colored_jones_literal(d: &LinkDiagram, n: u32) -> Result<ColoredEvaluation> {
    check_color(n)?;
    let firsts: Vec<u32> = d.components().iter().map(|c| c.edges[0]).collect();
    let mode = |e: u32| if firsts.contains(&e) { EdgeMode::Projector } else { EdgeMode::Direct };
    let (net, p) = cable_network(d, n as usize, None, &mode)?;
    let v = closed_value(&net, n as usize, p)?;
    let value = &v * &delta(n).pow(d.unknot_count() as u32);
    Ok(ColoredEvaluation { diagram: d.render_pd(), color: n, value, method: Method::Literal })
}

/// `q^(n N^2 / 2 + g N) J_N`, which must lie in `Z[q^(±2)]`.
pub fn shifted_colored_jones(d: &LinkDiagram, n: u32) -> Result<LaurentPoly> {
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let j = colored_jones(d, n)?.value;
    let g = b_state(d).circles as i64;
    let s = j.shift(d.n() as i64 * (n * n) as i64 + 2 * g * n as i64);
    if !s.in_q_squared() {
        return Err(Error::Internal(format!(
            "shifted color-{n} polynomial {} is not in Z[q^±2]; grading conventions disagree",
            s.render()
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests;
