//! Operational surface: the document schema, sampling of random pairs,
//! point enumeration over prime fields, batch statistics and constructed
//! instances violating each condition.

pub mod constructions;
mod enumerate;
mod sample;
mod schema;
mod stats;
mod tasks;

pub use enumerate::{enumerate_points, PointEnumeration};
pub use sample::{
    monomials_of_degree, sample_pair, sample_pair_at, sample_points, SampleSpec, SampledPair,
};
pub use schema::{dispatch, FieldTask, GbDocument, PairDocument, Term, SCHEMA};
pub use stats::{empirical_stats, run_pairs, PairRun, RunReport};
pub use tasks::{check_document, classify_document, gb_document, ClassifiedPoint, GbReport};
