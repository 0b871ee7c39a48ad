//! Distance-based Chatterjee correlation for paired samples of real or
//! complex vectors, with causal-direction inference, synchronized
//! permutation tests and a Monte-Carlo power harness.

pub mod data;
pub mod dcor;
pub mod directed;
pub mod error;
pub mod generators;
pub mod io;
pub mod permutation;
pub mod power;
pub mod ranks;
pub mod reproduce;
pub mod seed;
pub mod transform;
pub mod xi;

pub use data::{PairedData, SampleSet};
pub use dcor::{distance_correlation, DcorStatistic};
pub use directed::{
    causal_deltas, dch_x_given_y, dch_y_given_x, reci_verdict, CausalVerdict, DchResult,
};
pub use error::{Error, Result};
pub use generators::{generate, inject_outliers, GeneratorSpec, Model, OutlierSpec};
pub use permutation::{
    pvalue, synchronized_test, AssociationReport, Hypothesis, PValueRule, PValues, Statistics,
    TestConfig,
};
pub use power::{estimate_power, power_curve, Axis, PowerCurve, PowerPoint, PowerSettings};
pub use ranks::TiePolicy;
pub use transform::{
    centered_distances, distance_transform, CenteredDistanceMatrix, DistanceVector,
};
pub use xi::{chatterjee_xi, XiStatistic};
