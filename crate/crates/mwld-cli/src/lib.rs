//! IO companion for `mwld-core`: netpbm codecs, frame-sequence ingestion,
//! JSON/CSV wire formats and the parallel detection driver.

pub mod corpus;
pub mod formats;
pub mod pipeline;
pub mod pnm;
pub mod sequence;
