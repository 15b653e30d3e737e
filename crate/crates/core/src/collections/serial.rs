//! JSON form of a collection: `{space: {d, L}, sets: [[[a, b], ...], ...]}`
//! with optional `gamma`, `portions` and shear metadata.

use serde::{Deserialize, Serialize};

use crate::collections::{MeasSet, SparseCollection};
use crate::error::{Error, Result};
use crate::space::DyadicSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearMeta {
    /// Numerator `a` of the slope `a / 2^L`.
    pub slope: i64,
    pub swap: bool,
    pub band: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortionDoc {
    pub units_per_cell: u128,
    pub pieces: Vec<(u32, u128)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionDoc {
    pub space: DyadicSpace,
    pub sets: Vec<Vec<(u32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portions: Option<Vec<PortionDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear: Option<ShearMeta>,
}

impl CollectionDoc {
    pub fn from_collection(space: DyadicSpace, c: &SparseCollection, with_portions: bool) -> Self {
        CollectionDoc {
            space,
            sets: c.sets().iter().map(MeasSet::ranges).collect(),
            gamma: Some((*c.gamma().numer(), *c.gamma().denom())),
            portions: with_portions.then(|| {
                c.portions()
                    .iter()
                    .map(|p| PortionDoc {
                        units_per_cell: p.units_per_cell(),
                        pieces: p.pieces().to_vec(),
                    })
                    .collect()
            }),
            shear: None,
        }
    }

    /// Rebuilds and re-certifies the collection. Recorded `gamma` and
    /// `portions` must match the recomputed certificate.
    pub fn to_collection(&self) -> Result<SparseCollection> {
        let space = DyadicSpace::new(self.space.dim(), self.space.depth())?;
        let sets = self
            .sets
            .iter()
            .map(|r| MeasSet::from_ranges(&space, r))
            .collect::<Result<Vec<_>>>()?;
        let c = SparseCollection::from_sets(sets)?;
        if let Some((a, b)) = self.gamma {
            if b == 0 || (a, b) != (*c.gamma().numer(), *c.gamma().denom()) {
                return Err(Error::Serialization(format!(
                    "recorded gamma {a}/{b} differs from certified {}",
                    c.gamma()
                )));
            }
        }
        if let Some(portions) = &self.portions {
            let same = portions.len() == c.len()
                && portions
                    .iter()
                    .zip(c.portions())
                    .all(|(d, p)| d.units_per_cell == p.units_per_cell() && d.pieces == p.pieces());
            if !same {
                return Err(Error::Serialization("recorded portions differ from the certificate".into()));
            }
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("collection documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
