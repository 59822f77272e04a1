use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// How the site weights relate to the underlying measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// Counting measure on a discrete space; every weight is 1.
    DiscreteCounting,
    /// Cells of a continuum; weights are cell volumes.
    CellDiscretized,
}

/// One site: measure weight and the negative part `W = max(-V, 0)` there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub id: u64,
    pub weight: f64,
    pub w: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    kind: FieldKind,
    sites: Vec<Site>,
    #[serde(default)]
    dropped_positive: usize,
}

/// Negative part of a potential over weighted sites.
///
/// Invariant: every `W` is finite and `≥ 0`, every weight is finite and
/// `> 0`, and weights are exactly 1 for the counting kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField")]
pub struct PotentialField {
    kind: FieldKind,
    sites: Vec<Site>,
    /// Sites whose potential was positive; only `W = 0` is kept for them.
    dropped_positive: usize,
}

impl TryFrom<RawField> for PotentialField {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        let mut f = Self::from_w(raw.kind, raw.sites.into_iter().map(|s| (s.id, s.weight, s.w)))?;
        f.dropped_positive = raw.dropped_positive;
        Ok(f)
    }
}

fn check_weight(kind: FieldKind, id: u64, weight: f64) -> Result<()> {
    match kind {
        FieldKind::DiscreteCounting if weight != 1.0 => {
            Err(invalid(format!("site {id}: counting fields need weight 1, got {weight}")))
        }
        _ if !(weight > 0.0 && weight.is_finite()) => {
            Err(invalid(format!("site {id}: weight must be finite and > 0, got {weight}")))
        }
        _ => Ok(()),
    }
}

impl PotentialField {
    /// Ingests a potential `V`; positive parts are dropped and counted.
    pub fn from_potential(kind: FieldKind, entries: impl IntoIterator<Item = (u64, f64, f64)>) -> Result<Self> {
        let mut sites = Vec::new();
        let mut dropped = 0;
        for (id, weight, v) in entries {
            check_weight(kind, id, weight)?;
            if !v.is_finite() {
                return Err(invalid(format!("site {id}: potential must be finite, got {v}")));
            }
            if v > 0.0 {
                dropped += 1;
            }
            sites.push(Site { id, weight, w: (-v).max(0.0) });
        }
        Ok(Self { kind, sites, dropped_positive: dropped })
    }

    /// Builds the field from `W ≥ 0` directly.
    pub fn from_w(kind: FieldKind, entries: impl IntoIterator<Item = (u64, f64, f64)>) -> Result<Self> {
        let mut sites = Vec::new();
        for (id, weight, w) in entries {
            check_weight(kind, id, weight)?;
            if !(w >= 0.0 && w.is_finite()) {
                return Err(invalid(format!("site {id}: W must be finite and >= 0, got {w}")));
            }
            sites.push(Site { id, weight, w });
        }
        Ok(Self { kind, sites, dropped_positive: 0 })
    }

    /// Counting field with ids `0, 1, …` and the given `W` values.
    pub fn discrete(w: &[f64]) -> Result<Self> {
        Self::from_w(FieldKind::DiscreteCounting, w.iter().enumerate().map(|(i, &w)| (i as u64, 1.0, w)))
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn dropped_positive(&self) -> usize {
        self.dropped_positive
    }

    /// Ingestion note for the dropped positive parts, if any.
    pub fn note(&self) -> Option<String> {
        (self.dropped_positive > 0)
            .then(|| format!("{} sites with positive potential entered as W = 0", self.dropped_positive))
    }

    /// The sites satisfying `keep`, same kind.
    pub fn filtered(&self, keep: impl Fn(&Site) -> bool) -> Self {
        Self { kind: self.kind, sites: self.sites.iter().copied().filter(|s| keep(s)).collect(), dropped_positive: 0 }
    }

    /// The same sites with `W` multiplied by `factor ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0 && factor.is_finite()) {
            return Err(invalid("scale factor must be finite and >= 0"));
        }
        let mut f = self.clone();
        for s in &mut f.sites {
            s.w *= factor;
        }
        Ok(f)
    }

    /// `W` values in site order.
    pub fn w_values(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.w).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_parts_are_dropped_and_counted() {
        let f = PotentialField::from_potential(FieldKind::DiscreteCounting, [(0, 1.0, -2.0), (1, 1.0, 3.0), (2, 1.0, 0.0)])
            .unwrap();
        assert_eq!(f.w_values(), vec![2.0, 0.0, 0.0]);
        assert_eq!(f.dropped_positive(), 1);
        assert!(f.note().unwrap().contains('1'));
    }

    #[test]
    fn counting_weights_must_be_one() {
        assert!(PotentialField::from_w(FieldKind::DiscreteCounting, [(0, 0.5, 1.0)]).is_err());
        assert!(PotentialField::from_w(FieldKind::CellDiscretized, [(0, 0.5, 1.0)]).is_ok());
        assert!(PotentialField::from_w(FieldKind::CellDiscretized, [(0, 0.5, -1.0)]).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let f = PotentialField::discrete(&[1.0, 2.5]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<PotentialField>(&s).unwrap(), f);
        let bad = r#"{"kind":"discrete_counting","sites":[{"id":0,"weight":1.0,"w":-1.0}]}"#;
        assert!(serde_json::from_str::<PotentialField>(bad).is_err());
    }
}
