use crate::error::{invalid, Error, Result};
use crate::groupwalks::WalkReturnTable;
use crate::stochastics::{poisson_pmf, poisson_tail_bound};

/// Subordinated diagonal with its certified truncation remainder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubordinatedValue {
    pub value: f64,
    /// Upper bound on the omitted terms: `P{ν_t > max_steps}` since `π̃ ≤ 1`.
    pub tail_bound: f64,
}

/// Step count the table must reach for mean `λ`: `⌈λ + 12√λ⌉`.
pub fn required_steps(lambda: f64) -> u64 {
    (lambda + 12.0 * lambda.sqrt()).ceil() as u64
}

/// `π(t) = Σ_n π̃(2n) P{ν_t = 2n}` for a Poisson clock `ν_t` of intensity `rate`.
pub fn subordinated_pi_with_tail(table: &WalkReturnTable, rate: f64, t: f64) -> Result<SubordinatedValue> {
    if !(rate > 0.0) || !rate.is_finite() || !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("subordination needs rate > 0 and t >= 0"));
    }
    let lambda = rate * t;
    let need = required_steps(lambda);
    if table.max_steps() < need {
        return Err(Error::InsufficientRange(format!(
            "table reaches {} steps, N_max = {need} required for rate*t = {lambda}",
            table.max_steps()
        )));
    }
    let mut value = 0.0;
    for e in table.entries() {
        value += e.value * poisson_pmf(lambda, e.steps);
    }
    let m = table.max_steps();
    let tail_bound = if lambda < m as f64 + 2.0 { poisson_tail_bound(lambda, m) } else { 1.0 };
    Ok(SubordinatedValue { value, tail_bound })
}

pub fn subordinated_pi(table: &WalkReturnTable, rate: f64, t: f64) -> Result<f64> {
    subordinated_pi_with_tail(table, rate, t).map(|v| v.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatkernels::lattice_pi;

    #[test]
    fn z1_identity() {
        let table = WalkReturnTable::z1_simple_walk(200);
        for t in [0.5, 1.0, 2.0, 5.0] {
            let s = subordinated_pi(&table, 2.0, t).unwrap();
            assert!((s - lattice_pi(1, t)).abs() < 1e-10);
        }
        assert_eq!(subordinated_pi(&table, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn short_table_rejected() {
        let table = WalkReturnTable::z1_simple_walk(10);
        let err = subordinated_pi(&table, 2.0, 5.0).unwrap_err();
        assert!(matches!(err, Error::InsufficientRange(ref m) if m.contains("N_max = 48")), "{err}");
    }
}
