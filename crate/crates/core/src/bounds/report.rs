use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A bound value: a finite non-negative number or the explicit state `+∞`.
///
/// Serializes as a JSON number, or as the string `"+inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    Infinite,
}

impl BoundValue {
    /// Maps non-finite or overflowing inputs to `Infinite`; clamps tiny
    /// negative round-off to zero.
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Self::Finite(x.max(0.0))
        } else {
            Self::Infinite
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(x) => x,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x:.12e}"),
            Self::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => s.serialize_f64(*x),
            Self::Infinite => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BoundValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BoundValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative number or \"+inf\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<BoundValue, E> {
                if x >= 0.0 && x.is_finite() {
                    Ok(BoundValue::Finite(x))
                } else {
                    Err(E::custom(format!("bound value {x} is not a finite non-negative number")))
                }
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<BoundValue, E> {
                Ok(BoundValue::Finite(x as f64))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> Result<BoundValue, E> {
                self.visit_f64(x as f64)
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<BoundValue, E> {
                if s == "+inf" {
                    Ok(BoundValue::Infinite)
                } else {
                    Err(E::custom(format!("unexpected bound value string {s:?}")))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// One labelled partial sum of a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPart {
    pub label: String,
    pub value: BoundValue,
}

/// Result of a bound evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Name of the evaluator, e.g. `clr_hinge`.
    pub bound: String,
    pub value: BoundValue,
    pub decomposition: Vec<BoundPart>,
    /// Echo of the parameters (σ, h, A, γ_moment, derived constants).
    pub parameters: BTreeMap<String, f64>,
    /// Number of sites in the high set `W > 1/h`, for split bounds.
    pub n_high: Option<u64>,
    /// True when every tail was bounded rigorously.
    pub certified: bool,
    pub diagnostics: Vec<String>,
}

impl BoundReport {
    pub(crate) fn new(bound: &str, value: f64) -> Self {
        Self {
            bound: bound.to_string(),
            value: BoundValue::from_f64(value),
            decomposition: Vec::new(),
            parameters: BTreeMap::new(),
            n_high: None,
            certified: true,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn part(mut self, label: &str, value: f64) -> Self {
        self.decomposition.push(BoundPart { label: label.to_string(), value: BoundValue::from_f64(value) });
        self
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    /// The value as `f64`, `+∞` for the infinite state.
    pub fn value_f64(&self) -> f64 {
        self.value.as_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}
