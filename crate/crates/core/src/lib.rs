//! Joint edge–cloud inference planning for a UAV link.
//!
//! A UAV splits its frames between a cloud model (fed by features plus
//! quantized residual data on the uplink) and an onboard edge model (improved
//! by model updates on the downlink). This crate picks the split, the
//! bandwidth division and the residual quantization that maximize the joint
//! mAP, and provides an exhaustive-search oracle to check the result.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::field_reassign_with_default))]

pub mod allocator;
mod columns;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod pr_metrics;
pub mod quantization;
pub mod response;
pub mod scenario;

pub use allocator::{
    edge_update_from_downlink, evaluate, objective, solve, solve_cloud_only, solve_edge_only,
    theorem7_residual, AllocationPlan, Slack, SolverSettings, Stationarity, StationarityResidual,
    StreamRates,
};
pub use error::{Error, Result};
pub use oracle::{exhaustive_search, OracleGrid, MAX_COMBINATIONS};
pub use pr_metrics::{
    delta_gap, fuse_precision, fuse_recall, joint_map_exact, joint_map_lower_bound, map_from_curve,
    FusionWeights, PrCurve, PrPoint,
};
pub use quantization::{
    discretize, equal_bits_relaxed, frame_average_map, greedy_heuristic, residual_budget,
    solve_data_stream, LevelCount, QuantizationLadder, QuantizationPlan,
};
pub use response::{Breakpoints, CloudResponseModel, CloudShape, EdgeResponseModel, EdgeShape};
pub use scenario::Scenario;
