//! Exact closed forms for `m = 3, 4, 5`, evaluated with integer recurrences.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `x_{n+1} = a x_n - b x_{n-1}` over the integers; the sequences used here
/// stay positive, so the subtraction never underflows.
fn recurrence(a: u32, b: u32, x0: u32, x1: u32, n: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::from(x0), BigUint::from(x1));
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &cur * a - &prev * b;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `Phi(F(m,k))` for `m` in `{3, 4, 5}`:
///
/// * `3^{k+2} + 1`
/// * `2(2+√2)^{k+1} + 2(2-√2)^{k+1} + 2^{k+3} + 1`, the irrational pair being
///   `u_k` with `u_{n+1} = 4u_n - 2u_{n-1}`, `u_0 = 8`, `u_1 = 24`
/// * `5^{k+2} + 5 v_k + 1` with `v_k = ((5+√5)/2)^k + ((5-√5)/2)^k`,
///   `v_{n+1} = 5v_n - 5v_{n-1}`, `v_0 = 2`, `v_1 = 5`
pub fn closed_form_345(m: usize, k: usize) -> Result<BigUint> {
    let pow = |base: u32, e: usize| -> BigUint {
        (0..e).fold(BigUint::one(), |acc, _| acc * base)
    };
    let one = BigUint::one();
    match m {
        3 => Ok(pow(3, k + 2) + one),
        4 => Ok(recurrence(4, 2, 8, 24, k) + pow(2, k + 3) + one),
        5 => Ok(pow(5, k + 2) + recurrence(5, 5, 2, 5, k) * 5u32 + one),
        _ => Err(Error::UnsupportedM(m)),
    }
}

/// Sector decomposition of the same closed forms, `(p, count)` pairs.
pub fn closed_form_sectors(m: usize, k: usize) -> Result<Vec<(usize, BigUint)>> {
    let total = closed_form_345(m, k)?;
    let pow = |base: u32, e: usize| -> BigUint {
        (0..e).fold(BigUint::one(), |acc, _| acc * base)
    };
    let one = BigUint::one();
    Ok(match m {
        3 => vec![(1, pow(3, k + 2)), (3, one)],
        4 => vec![(0, pow(2, k + 3)), (2, recurrence(4, 2, 8, 24, k)), (4, one)],
        5 => {
            let leading = pow(5, k + 2);
            let middle = &total - &leading - &one;
            debug_assert!(!middle.is_zero());
            vec![(1, leading), (3, middle), (5, one)]
        }
        _ => unreachable!(),
    })
}
