//! Exact coefficient arithmetic, bigraded tables and small combinatorial helpers.

mod laurent;
mod ratfunc;
mod table;

pub use laurent::{circle_value, lp_arith, LaurentPoly, LpOp};
pub use ratfunc::{poly_gcd, RatFunc};
pub use table::{decat_substitute, euler_char, KhTable, TailSeries};

use crate::Error;

/// The brace polynomial `{i j}_x`:
/// prod_{m=0}^{j-1} (1 - x^{2(i-m)}) / prod_{m=1}^{j} (1 - x^{2m}).
///
/// Returned with the doubled-exponent store, so `x^k` sits at key `2k`.
pub fn brace_poly(i: u32, j: u32) -> Result<LaurentPoly, Error> {
    if j > i {
        return Err(Error::Domain(format!("brace_poly({i}, {j}) needs j <= i")));
    }
    let one_minus = |k: u32| LaurentPoly::from_terms([(0i64, 1i64), (2 * 2 * k as i64, -1)]);
    let mut acc = LaurentPoly::one();
    for m in 1..=j {
        let num = &acc * &one_minus(i - m + 1);
        acc = num
            .div_exact(&one_minus(m))
            .ok_or_else(|| Error::Internal(format!("brace_poly({i}, {j}) left a remainder")))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(ks: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(ks.iter().map(|&(k, c)| (2 * k, c)))
    }

    #[test]
    fn brace_small() {
        assert_eq!(brace_poly(5, 0).unwrap(), LaurentPoly::one());
        assert_eq!(brace_poly(1, 1).unwrap(), LaurentPoly::one());
        assert_eq!(brace_poly(3, 1).unwrap(), x(&[(0, 1), (2, 1), (4, 1)]));
        assert!(brace_poly(2, 3).is_err());
    }

    #[test]
    fn brace_four_two() {
        // Gaussian binomial [4 choose 2] in x^2.
        assert_eq!(
            brace_poly(4, 2).unwrap(),
            x(&[(0, 1), (2, 1), (4, 2), (6, 1), (8, 1)])
        );
    }
}
