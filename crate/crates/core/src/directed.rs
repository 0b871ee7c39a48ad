//! Distance-based Chatterjee correlation in both directions and the
//! RECI causal-direction statistics built from it.

use serde::{Deserialize, Serialize};

use crate::data::SampleSet;
use crate::error::{Error, Result};
use crate::ranks::{ranking, Ranking, TiePolicy};
use crate::seed::tag;
use crate::transform::{distance_transform, DistanceVector};
use crate::xi::{rank_gap_sum, xi_from_gap_sum};

/// Directed correlations and causal deltas for one paired dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DchResult {
    /// How well Y is predicted by X.
    pub dch_y_given_x: f64,
    /// How well X is predicted by Y.
    pub dch_x_given_y: f64,
    pub delta_x_to_y: f64,
    pub delta_y_to_x: f64,
}

impl DchResult {
    pub fn from_directed(dch_y_given_x: f64, dch_x_given_y: f64) -> Self {
        DchResult {
            dch_y_given_x,
            dch_x_given_y,
            delta_x_to_y: dch_y_given_x - dch_x_given_y,
            delta_y_to_x: dch_x_given_y - dch_y_given_x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalVerdict {
    XCausesY,
    YCausesX,
    Undetermined,
}

impl std::fmt::Display for CausalVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CausalVerdict::XCausesY => "X causes Y",
            CausalVerdict::YCausesX => "Y causes X",
            CausalVerdict::Undetermined => "undetermined",
        })
    }
}

/// Distance vectors of both sides, each ranked once.
///
/// Tie breaking for a side depends only on that side, so both directions
/// see the same orderings.
#[derive(Debug, Clone)]
pub struct RankedTransforms {
    pub x: Ranking,
    pub y: Ranking,
}

impl RankedTransforms {
    pub fn new(x: &SampleSet, y: &SampleSet, policy: TiePolicy) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::ShapeMismatch(format!(
                "X has {} samples, Y has {}",
                x.n(),
                y.n()
            )));
        }
        let dx = distance_transform(x)?;
        let dy = distance_transform(y)?;
        Self::from_vectors(&dx, &dy, policy)
    }

    pub fn from_vectors(
        dx: &DistanceVector,
        dy: &DistanceVector,
        policy: TiePolicy,
    ) -> Result<Self> {
        Ok(RankedTransforms {
            x: ranking(dx.as_slice(), policy.child(tag::TIES_X))?,
            y: ranking(dy.as_slice(), policy.child(tag::TIES_Y))?,
        })
    }

    pub fn len(&self) -> usize {
        self.x.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.ranks.is_empty()
    }

    pub fn dch_y_given_x(&self) -> f64 {
        xi_from_gap_sum(rank_gap_sum(&self.x.order, &self.y.ranks), self.len())
    }

    pub fn dch_x_given_y(&self) -> f64 {
        xi_from_gap_sum(rank_gap_sum(&self.y.order, &self.x.ranks), self.len())
    }

    pub fn result(&self) -> DchResult {
        DchResult::from_directed(self.dch_y_given_x(), self.dch_x_given_y())
    }
}

/// How well Y is predicted by X.
pub fn dch_y_given_x(x: &SampleSet, y: &SampleSet, policy: TiePolicy) -> Result<f64> {
    Ok(RankedTransforms::new(x, y, policy)?.dch_y_given_x())
}

/// How well X is predicted by Y.
pub fn dch_x_given_y(x: &SampleSet, y: &SampleSet, policy: TiePolicy) -> Result<f64> {
    Ok(RankedTransforms::new(x, y, policy)?.dch_x_given_y())
}

pub fn causal_deltas(x: &SampleSet, y: &SampleSet, policy: TiePolicy) -> Result<DchResult> {
    Ok(RankedTransforms::new(x, y, policy)?.result())
}

pub fn reci_verdict(r: &DchResult) -> CausalVerdict {
    if r.delta_x_to_y > 0.0 {
        CausalVerdict::XCausesY
    } else if r.delta_x_to_y < 0.0 {
        CausalVerdict::YCausesX
    } else {
        CausalVerdict::Undetermined
    }
}
