//! Gaussian-variogram distances and kernels on time-evolving graphs whose
//! edges are treated as Euclidean segments.

pub mod bessel;
pub mod error;
pub mod figures;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod kernels;
pub mod lifespan;
pub mod metric;
pub mod sampling;
pub mod spectral;
pub mod temporal;

pub use error::{Error, Result};
pub use graph::{
    EdgeId, EquivalentSimpleGraph, GraphPoint, Layer, Location, TemporalPolicy,
    TimeEvolvingGraph, TimeModel, VertexId,
};
pub use kernels::{gram_matrix, kernel_compose, pd_check, CompletelyMonotone, PdClass};
pub use metric::{DistanceResult, Metric, MetricParams};
