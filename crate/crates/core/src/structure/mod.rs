//! Polynomial rank, regularity of factor sets, iterative regularization and
//! compression of a polynomial to a function of few inputs.

mod bias;
mod compress;
mod decomposition;
mod rank;
mod regularity;
mod regularize;

pub use bias::{
    bias_rank_scan, BiasRow, BiasScan, BiasScanDocument, Threshold, ThresholdTable, SCAN_OPS,
};
pub use compress::{compress, compress_with_table, CompressFailure, Compression, CompressionDocument};
pub use decomposition::Decomposition;
pub use rank::{invariance_subspace, rank, rank_with, RankResult, RankStatus, RankStrategy, RankValue};
pub use regularity::{is_regular_set, CombinationRecord, Outcome, RegularityCertificate, Verdict};
pub use regularize::{regularize, Regularization};
