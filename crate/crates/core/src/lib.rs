//! Resource matchmaking over uncertain descriptions using dynamic rough sets.
//!
//! Advertised resources form an [`InformationTable`] in which unknown property
//! values are `Null`. A request with weighted properties selects an initial
//! candidate set, which is inflated by high-priority properties and contracted
//! by low-priority ones ([`dynamic`]); the survivors are scored against the
//! request through a class taxonomy ([`ontology`], [`matchmaker`]) and ranked.
//! [`discovery`] ties the steps together, and [`registry`] persists the
//! advertised resources.

pub mod discovery;
pub mod dynamic;
mod error;
pub mod matchmaker;
pub mod ontology;
pub mod registry;
pub mod table;
mod value;

pub use discovery::{discover, discover_timed, optimize_candidates, Algorithm, CandidateReport, Discovery};
pub use dynamic::{DynamicSetBundle, TransferCoefficient, TransferStandard};
pub use error::{Error, Result, TaxonomyErrorKind};
pub use matchmaker::{aggregate_match, property_match_degree, MatchResult, ResourceRequest, WeightedProperty};
pub use ontology::{MatchRelation, Taxonomy};
pub use registry::{Repository, ResourceRecord};
pub use table::{AttributeId, InformationTable, ObjectId, ObjectSet, Partition};
pub use value::{AttributeValue, ValueType};
