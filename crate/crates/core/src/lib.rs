//! Multilabel prototype generation for k-nearest-neighbour classification.
//!
//! The crate provides the dataset model and corpus loaders ([`mldata`], [`corpus`]),
//! the space-partitioning engine ([`splitter`]) and the reducers built on it
//! ([`reducers`]: MChen, MRSP1, MRSP2, MRSP3, plus the MRHC baseline and the ALL
//! identity), three multilabel kNN classifiers ([`classifiers`]), label-swap noise
//! ([`noise`]) and the evaluation tooling ([`evaluation`]): Hamming loss, Pareto
//! fronts and the Wilcoxon signed-rank test.

pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod mldata;
pub mod noise;
pub mod reducers;
pub mod splitter;

pub use classifiers::{Classifier, ClassifierKind, MlknnModel};
pub use error::{Error, Result};
pub use evaluation::{EvalRecord, ParetoPoint};
pub use mldata::{describe, CorpusDescriptor, Labelset, MultilabelDataset};
pub use noise::{induce_noise, NoiseSpec};
pub use reducers::{reduce, Method, ReducerSpec, ReductionResult};
pub use splitter::{Cluster, Partitioner, SelectionRule, StoppingRule};
