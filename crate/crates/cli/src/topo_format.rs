//! JSON description of a one-dimensional point set.
//!
//! ```json
//! {"pieces": [{"lo": "0", "hi": "1", "loClosed": true, "hiClosed": true, "carrier": "continuum"}],
//!  "isolated": ["2"],
//!  "excluded": [{"c": "1", "b": "1", "r": "1/2", "side": "left", "includeAccumulation": false}]}
//! ```
//!
//! Numbers are exact: either JSON integers or strings such as `"1/2"`.

use std::path::Path;

use anyhow::Result;
use bolzano_core::topology::{Carrier, FamilySide, GeometricFamily, Piece, PointSet1D};
use bolzano_core::{presets, Rational};
use serde::{Deserialize, Serialize};

use crate::input::InputError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::integer(*n)),
            Number::Text(t) => crate::input::rational(t),
        }
    }

    fn of(r: &Rational) -> Self {
        Number::Text(r.to_string())
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CarrierName {
    Continuum,
    Rationals,
    Dyadics,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Left,
    Right,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PieceSpec {
    pub lo: Number,
    pub hi: Number,
    #[serde(default = "yes")]
    pub lo_closed: bool,
    #[serde(default = "yes")]
    pub hi_closed: bool,
    #[serde(default = "continuum")]
    pub carrier: CarrierName,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FamilySpec {
    pub c: Number,
    pub b: Number,
    pub r: Number,
    pub side: SideName,
    #[serde(default)]
    pub include_accumulation: bool,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub pieces: Vec<PieceSpec>,
    #[serde(default)]
    pub isolated: Vec<Number>,
    #[serde(default)]
    pub excluded: Vec<FamilySpec>,
}

fn yes() -> bool {
    true
}

fn continuum() -> CarrierName {
    CarrierName::Continuum
}

impl SetSpec {
    pub fn build(&self) -> Result<PointSet1D> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece {
                    lo: p.lo.value()?,
                    hi: p.hi.value()?,
                    lo_closed: p.lo_closed,
                    hi_closed: p.hi_closed,
                    carrier: match p.carrier {
                        CarrierName::Continuum => Carrier::Continuum,
                        CarrierName::Rationals => Carrier::Rationals,
                        CarrierName::Dyadics => Carrier::Dyadics,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let isolated = self.isolated.iter().map(Number::value).collect::<Result<Vec<_>>>()?;
        let excluded = self
            .excluded
            .iter()
            .map(|f| {
                Ok(GeometricFamily {
                    accumulation: f.c.value()?,
                    scale: f.b.value()?,
                    ratio: f.r.value()?,
                    side: match f.side {
                        SideName::Left => FamilySide::Left,
                        SideName::Right => FamilySide::Right,
                    },
                    include_accumulation: f.include_accumulation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet1D::new(pieces, isolated, excluded)?)
    }

    pub fn describe(set: &PointSet1D) -> Self {
        SetSpec {
            pieces: set
                .pieces()
                .iter()
                .map(|p| PieceSpec {
                    lo: Number::of(&p.lo),
                    hi: Number::of(&p.hi),
                    lo_closed: p.lo_closed,
                    hi_closed: p.hi_closed,
                    carrier: match p.carrier {
                        Carrier::Continuum => CarrierName::Continuum,
                        Carrier::Rationals => CarrierName::Rationals,
                        Carrier::Dyadics => CarrierName::Dyadics,
                    },
                })
                .collect(),
            isolated: set.isolated().iter().map(Number::of).collect(),
            excluded: set
                .excluded()
                .iter()
                .map(|f| FamilySpec {
                    c: Number::of(&f.accumulation),
                    b: Number::of(&f.scale),
                    r: Number::of(&f.ratio),
                    side: match f.side {
                        FamilySide::Left => SideName::Left,
                        FamilySide::Right => SideName::Right,
                    },
                    include_accumulation: f.include_accumulation,
                })
                .collect(),
        }
    }
}

/// A preset name, a path to a description, or the description inline.
pub fn load(source: &str) -> Result<PointSet1D> {
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or(source);
    let path = Path::new(source);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {source}: {e}")))?
    } else if source.trim_start().starts_with('{') {
        source.to_string()
    } else if let Some(set) = presets::point_set(stem) {
        // `pu41-with-z.json` names the preset even when no such file exists
        return Ok(set);
    } else {
        return Err(InputError(format!(
            "`{source}` is neither a file, inline JSON nor one of the presets {}",
            presets::POINT_SETS.join(", ")
        ))
        .into());
    };
    let spec: SetSpec = serde_json::from_str(&text).map_err(|e| InputError(format!("bad point set description: {e}")))?;
    spec.build()
}
