use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// How a return-probability table was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMethod {
    BruteForce,
    BridgeFormula,
    Dp,
    /// Closed form, e.g. `binom(2n, n) 4^{-n}` for the simple walk on `Z`.
    ClosedForm,
}

impl WalkMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            WalkMethod::BruteForce => "brute_force",
            WalkMethod::BridgeFormula => "bridge_formula",
            WalkMethod::Dp => "dp",
            WalkMethod::ClosedForm => "closed_form",
        }
    }
}

/// Return probability after `steps` (even) steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkReturnEntry {
    pub steps: u64,
    pub value: f64,
    /// Exact value as decimal numerator and denominator strings, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<(String, String)>,
}

/// Table `2n ↦ π̃(2n)` for `2n = 0, 2, …, max_steps`. Odd step counts are
/// absent because returns after an odd number of steps are impossible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct WalkReturnTable {
    method: WalkMethod,
    entries: Vec<WalkReturnEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    method: WalkMethod,
    entries: Vec<WalkReturnEntry>,
}

impl TryFrom<RawTable> for WalkReturnTable {
    type Error = crate::Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        Self::from_entries(raw.method, raw.entries)
    }
}

impl From<WalkReturnTable> for RawTable {
    fn from(t: WalkReturnTable) -> Self {
        RawTable { method: t.method, entries: t.entries }
    }
}

impl WalkReturnTable {
    pub fn from_entries(method: WalkMethod, entries: Vec<WalkReturnEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid("walk table needs at least the entry for 0 steps"));
        }
        for (k, e) in entries.iter().enumerate() {
            if e.steps != 2 * k as u64 {
                return Err(invalid(format!("entry {k} has {} steps, expected {}", e.steps, 2 * k)));
            }
            if !(0.0..=1.0).contains(&e.value) {
                return Err(invalid(format!("probability {} at {} steps is outside [0, 1]", e.value, e.steps)));
            }
        }
        if entries[0].value != 1.0 {
            return Err(invalid("a walk starts at the identity: the 0-step entry must be 1"));
        }
        Ok(Self { method, entries })
    }

    /// Table from floating values indexed by `n` (entry `n` is `π̃(2n)`).
    pub fn from_values(method: WalkMethod, values: Vec<f64>) -> Result<Self> {
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(k, value)| WalkReturnEntry { steps: 2 * k as u64, value, exact: None })
            .collect();
        Self::from_entries(method, entries)
    }

    /// Table from exact rationals indexed by `n`.
    pub fn from_rationals(method: WalkMethod, values: &[BigRational]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(k, q)| WalkReturnEntry {
                steps: 2 * k as u64,
                value: rational_to_f64(q),
                exact: Some((q.numer().to_string(), q.denom().to_string())),
            })
            .collect();
        Self::from_entries(method, entries)
    }

    /// Simple walk on `Z`: `π̃(2n) = binom(2n, n) 4^{-n}`.
    pub fn z1_simple_walk(max_steps: u64) -> Self {
        let mut values = vec![1.0];
        let mut p = 1.0;
        for n in 1..=max_steps / 2 {
            // binom(2n,n)/4^n = binom(2n-2,n-1)/4^{n-1} · (2n-1)/(2n).
            p *= (2 * n - 1) as f64 / (2 * n) as f64;
            values.push(p);
        }
        Self::from_values(WalkMethod::ClosedForm, values).expect("closed form is a valid table")
    }

    pub fn method(&self) -> WalkMethod {
        self.method
    }

    pub fn entries(&self) -> &[WalkReturnEntry] {
        &self.entries
    }

    pub fn max_steps(&self) -> u64 {
        2 * (self.entries.len() as u64 - 1)
    }

    /// `π̃(steps)`; zero for odd counts, `None` beyond the table.
    pub fn probability(&self, steps: u64) -> Option<f64> {
        if steps % 2 == 1 {
            return (steps <= self.max_steps() + 1).then_some(0.0);
        }
        self.entries.get((steps / 2) as usize).map(|e| e.value)
    }

    /// Writes `n,probability_numerator,probability_denominator,float_value,method` rows.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "probability_numerator", "probability_denominator", "float_value", "method"])?;
        for e in &self.entries {
            let (num, den) = e.exact.clone().unwrap_or_default();
            wr.write_record([
                e.steps.to_string(),
                num,
                den,
                format!("{:.17e}", e.value),
                self.method.as_str().to_string(),
            ])?;
        }
        wr.flush()
    }
}

/// Nearest double to a non-negative rational, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.numer().is_zero() {
        return 0.0;
    }
    let shift = q.denom().bits() as i64 - q.numer().bits() as i64 + 64;
    let scaled: BigInt = if shift >= 0 {
        (q.numer() << shift as usize) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z1_values() {
        let t = WalkReturnTable::z1_simple_walk(6);
        assert_eq!(t.probability(0), Some(1.0));
        assert_eq!(t.probability(2), Some(0.5));
        assert_eq!(t.probability(4), Some(0.375));
        assert_eq!(t.probability(3), Some(0.0));
        assert_eq!(t.probability(8), None);
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(WalkReturnTable::from_values(WalkMethod::Dp, vec![0.5]).is_err());
        assert!(WalkReturnTable::from_values(WalkMethod::Dp, vec![1.0, 1.5]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let q = vec![BigRational::from_integer(1.into()), BigRational::new(1.into(), 4.into())];
        let t = WalkReturnTable::from_rationals(WalkMethod::BridgeFormula, &q).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: WalkReturnTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rational_conversion() {
        let q = BigRational::new(BigInt::from(1) << 300usize, (BigInt::from(3)) << 301usize);
        assert!((rational_to_f64(&q) - 1.0 / 6.0).abs() < 1e-17);
    }
}
