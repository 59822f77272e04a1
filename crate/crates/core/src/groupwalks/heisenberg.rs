use super::table::{WalkMethod, WalkReturnTable};
use crate::error::{invalid, Result};

/// Largest walk length accepted by [`heisenberg_return_dp`].
pub const HEISENBERG_MAX_STEPS: usize = 60;

/// Coordinate bounds of the `r`-step ball: `|x|, |y| ≤ r` and
/// `|z| ≤ ⌊r²/4⌋ + r`, since `z` moves by `±x` on `a_{±2}` steps (at most
/// `ab ≤ r²/4` in total with `a` moves of `x` and `b` of `y`) and by `±1` otherwise.
fn ball(r: usize) -> (usize, usize) {
    (r, r * r / 4 + r)
}

/// DP result with its mass accounting.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergDp {
    pub table: WalkReturnTable,
    /// Mass moved out of the states that can still return by the final step.
    pub discarded: Vec<f64>,
    /// `max_k |kept_k + discarded_k - 1|`.
    pub max_mass_error: f64,
}

/// Exact distribution of the discrete-time walk on `ZH³` driven by the six
/// generators `a_{±1}, a_{±2}, a_{±3}` (probability 1/6 each), with
/// right-multiplication `(x, y, z)·a_{±1} = (x ± 1, y, z)`,
/// `·a_{±2} = (x, y ± 1, z ± x)`, `·a_{±3} = (x, y, z ± 1)`.
///
/// At step `k` only states in `B_k ∩ B_{n-k}` are kept (`B_r` the `r`-step
/// ball, which is symmetric because the generator set is), so every return
/// probability up to `n_max` is exact; the dropped mass is accounted for.
pub fn heisenberg_return_dp_detailed(n_max: usize) -> Result<HeisenbergDp> {
    if n_max % 2 == 1 {
        return Err(invalid("Heisenberg walk length must be even"));
    }
    if n_max > HEISENBERG_MAX_STEPS {
        return Err(crate::Error::TooLarge(format!("n_max = {n_max} exceeds {HEISENBERG_MAX_STEPS}")));
    }
    let (bx, bz) = ball(n_max / 2);
    let (nx, nz) = (2 * bx + 1, 2 * bz + 1);
    let idx = |x: i64, y: i64, z: i64| -> usize {
        (((x + bx as i64) as usize * nx) + (y + bx as i64) as usize) * nz + (z + bz as i64) as usize
    };
    let limits = |k: usize| -> (i64, i64) {
        let (fx, fz) = ball(k);
        let (gx, gz) = ball(n_max - k);
        (fx.min(gx) as i64, fz.min(gz) as i64)
    };
    let mut cur = vec![0.0_f64; nx * nx * nz];
    let mut next = vec![0.0_f64; nx * nx * nz];
    cur[idx(0, 0, 0)] = 1.0;
    let mut returns = vec![1.0];
    let mut discarded_total = 0.0;
    let mut discarded = vec![0.0];
    let mut max_err = 0.0_f64;
    for k in 0..n_max {
        let (ax, az) = limits(k);
        let (ax1, az1) = limits(k + 1);
        next.iter_mut().for_each(|v| *v = 0.0);
        let mut lost = 0.0;
        for x in -ax..=ax {
            for y in -ax..=ax {
                for z in -az..=az {
                    let p = cur[idx(x, y, z)];
                    if p == 0.0 {
                        continue;
                    }
                    let q = p / 6.0;
                    for (x1, y1, z1) in
                        [(x + 1, y, z), (x - 1, y, z), (x, y + 1, z + x), (x, y - 1, z - x), (x, y, z + 1), (x, y, z - 1)]
                    {
                        if x1.abs() <= ax1 && y1.abs() <= ax1 && z1.abs() <= az1 {
                            next[idx(x1, y1, z1)] += q;
                        } else {
                            lost += q;
                        }
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        discarded_total += lost;
        discarded.push(discarded_total);
        let kept: f64 = cur.iter().sum();
        max_err = max_err.max((kept + discarded_total - 1.0).abs());
        if (k + 1) % 2 == 0 {
            returns.push(cur[idx(0, 0, 0)]);
        }
    }
    let table = WalkReturnTable::from_values(WalkMethod::Dp, returns)?;
    Ok(HeisenbergDp { table, discarded, max_mass_error: max_err })
}

/// Return probabilities `P{g_{2n} = I}` for `2n ≤ n_max` (see
/// [`heisenberg_return_dp_detailed`]).
pub fn heisenberg_return_dp(n_max: usize) -> Result<WalkReturnTable> {
    Ok(heisenberg_return_dp_detailed(n_max)?.table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_steps_return_with_probability_one_sixth() {
        let t = heisenberg_return_dp(2).unwrap();
        assert!((t.probability(2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn four_steps_match_enumeration() {
        // Enumerate all 6⁴ words with the group law.
        let gens: [(i64, i64, i64); 6] = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)];
        let mut hits = 0;
        for w in 0..6usize.pow(4) {
            let (mut x, mut y, mut z) = (0i64, 0i64, 0i64);
            let mut c = w;
            for _ in 0..4 {
                let (dx, dy, dz) = gens[c % 6];
                c /= 6;
                z += dz + x * dy;
                x += dx;
                y += dy;
            }
            if (x, y, z) == (0, 0, 0) {
                hits += 1;
            }
        }
        let t = heisenberg_return_dp(4).unwrap();
        assert!((t.probability(4).unwrap() - hits as f64 / 1296.0).abs() < 1e-15);
    }

    #[test]
    fn odd_and_oversized_requests_rejected() {
        assert!(heisenberg_return_dp(3).is_err());
        assert!(heisenberg_return_dp(62).is_err());
    }
}
