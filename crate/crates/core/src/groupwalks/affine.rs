use num_bigint::BigInt;
use num_rational::BigRational;

use super::table::{WalkMethod, WalkReturnTable};
use crate::error::{invalid, Result};

/// Largest walk length for exhaustive enumeration (`4^{n2}` words).
pub const AFFINE_BRUTE_MAX: u32 = 10;
/// Largest walk length for the bridge formula (`binom(n2, n2/2)` bridges).
pub const AFFINE_BRIDGE_MAX: u32 = 26;

fn check(n2: u32, max: u32) -> Result<()> {
    if n2 % 2 == 1 {
        return Err(invalid("affine walks return only after an even number of steps"));
    }
    if n2 > max {
        return Err(crate::Error::TooLarge(format!("n2 = {n2} exceeds {max}")));
    }
    Ok(())
}

fn dyadic(count: u128, n2: u32) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(1) << (2 * n2 as usize))
}

/// Exhaustive `P{g_{n2} = I}` for the affine walk with steps `(ε, δ̃)`
/// uniform on `{±1}²`.
///
/// A step from level `S` to `S ± 1` adds `δ̃ e^{s}` to the translation part,
/// where `s = max(S, S ± 1)` labels the crossed edge. Since the `e^s` are
/// rationally independent, `g = I` holds iff the final level is 0 and the
/// signed sum of `δ̃` over the crossings of every edge vanishes.
pub fn affine_return_bruteforce(n2: u32) -> Result<BigRational> {
    check(n2, AFFINE_BRUTE_MAX)?;
    let n = n2 as usize;
    let offset = n as i64;
    let mut sums = vec![0i64; 2 * n + 2];
    let mut hits: u128 = 0;
    for word in 0u64..(1u64 << (2 * n)) {
        sums.iter_mut().for_each(|v| *v = 0);
        let mut s = 0i64;
        for k in 0..n {
            let bits = word >> (2 * k);
            let up = bits & 1 == 1;
            let sign = if bits & 2 == 2 { 1 } else { -1 };
            let edge = if up { s + 1 } else { s };
            sums[(edge + offset) as usize] += sign;
            s += if up { 1 } else { -1 };
        }
        if s == 0 && sums.iter().all(|&v| v == 0) {
            hits += 1;
        }
    }
    Ok(dyadic(hits, n2))
}

fn central_binomial(m: u32) -> u128 {
    // binom(2m, m) by the exact recurrence binom(2j, j) = binom(2j-2, j-1)·(4j-2)/j.
    (1..=m as u128).fold(1u128, |acc, j| acc * (4 * j - 2) / j)
}

/// `P{g_{n2} = I}` by the local-time formula: averaging over the ε-bridges,
/// each edge crossed `2τ` times contributes `binom(2τ, τ) 4^{-τ}`, so
/// `P = 4^{-n2} Σ_bridges Π_s binom(2τ_s, τ_s)` in exact integer arithmetic.
pub fn affine_return_bridge(n2: u32) -> Result<BigRational> {
    check(n2, AFFINE_BRIDGE_MAX)?;
    let n = n2 as usize;
    let binom: Vec<u128> = (0..=n as u32).map(central_binomial).collect();
    let mut crossings = vec![0u32; 2 * n + 2];
    let mut total: u128 = 0;
    bridge_dfs(n, 0, n as i64, &mut crossings, &binom, &mut total);
    Ok(dyadic(total, n2))
}

fn bridge_dfs(left: usize, s: i64, offset: i64, crossings: &mut [u32], binom: &[u128], total: &mut u128) {
    if left == 0 {
        // Every edge of a bridge is crossed an even number of times.
        *total += crossings.iter().map(|&c| binom[(c / 2) as usize]).product::<u128>();
        return;
    }
    for step in [1i64, -1] {
        let s1 = s + step;
        if s1.unsigned_abs() as usize > left - 1 {
            continue;
        }
        let edge = (s.max(s1) + offset) as usize;
        crossings[edge] += 1;
        bridge_dfs(left - 1, s1, offset, crossings, binom, total);
        crossings[edge] -= 1;
    }
}

/// Table of `π̃(n2)` for `n2 = 0, 2, …, max_n2` by the chosen exact method.
pub fn affine_return_table(max_n2: u32, method: WalkMethod) -> Result<WalkReturnTable> {
    let f: fn(u32) -> Result<BigRational> = match method {
        WalkMethod::BruteForce => affine_return_bruteforce,
        WalkMethod::BridgeFormula => affine_return_bridge,
        _ => return Err(invalid("affine tables use brute_force or bridge_formula")),
    };
    let values = (0..=max_n2 / 2).map(|k| f(2 * k)).collect::<Result<Vec<_>>>()?;
    WalkReturnTable::from_rationals(method, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_steps_give_one_quarter() {
        let q = BigRational::new(1.into(), 4.into());
        assert_eq!(affine_return_bruteforce(2).unwrap(), q);
        assert_eq!(affine_return_bridge(2).unwrap(), q);
    }

    #[test]
    fn central_binomials() {
        assert_eq!(central_binomial(0), 1);
        assert_eq!(central_binomial(3), 20);
        assert_eq!(central_binomial(13), 10_400_600);
    }

    #[test]
    fn odd_lengths_rejected() {
        assert!(affine_return_bruteforce(3).is_err());
        assert!(affine_return_bridge(5).is_err());
        assert!(affine_return_bruteforce(12).is_err());
    }
}
