//! Clan embeddings of metric spaces into ultrametrics and of graphs into
//! spanning trees, small uniform distributions of them via multiplicative
//! weights, and a compact routing simulator on top of a sampled tree.
//!
//! Everything is generic over a floating point [`Scalar`]; the `*F64` and
//! `*F32` aliases fix the common choices.

pub mod error;
pub mod graph;
pub mod host;
pub mod io;
pub mod measure;
pub mod metric;
pub mod mwu;
pub mod rng;
pub mod routing;
pub mod scalar;
pub mod spanning;
pub mod ultra;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, ShortestPaths, WeightedGraph};
pub use host::{ClanEmbedding, SpanningTree, UltraNode, Ultrametric};
pub use measure::{Measure, MeasureKind};
pub use metric::{DiameterMode, Extent, MetricSpace};
pub use mwu::{build_distribution, sample, EmbeddingDistribution};
pub use scalar::Scalar;
pub use spanning::{hierarchical_petal_decomposition, spanning_clan_embed, SpanParams};
pub use ultra::{clan_embed_probability, clan_embed_ultrametric, ClanParams, Mode, Variant};

pub type WeightedGraphF64 = WeightedGraph<f64>;
pub type MetricSpaceF64 = MetricSpace<f64>;
pub type MeasureF64 = Measure<f64>;
pub type UltrametricF64 = Ultrametric<f64>;
pub type SpanningTreeF64 = SpanningTree<f64>;
pub type EmbeddingDistributionF64 = EmbeddingDistribution<f64>;

pub type WeightedGraphF32 = WeightedGraph<f32>;
pub type MetricSpaceF32 = MetricSpace<f32>;
pub type MeasureF32 = Measure<f32>;
pub type UltrametricF32 = Ultrametric<f32>;
pub type SpanningTreeF32 = SpanningTree<f32>;
