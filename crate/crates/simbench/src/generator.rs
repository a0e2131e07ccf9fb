//! Synthetic resources and requests drawn from a taxonomy.
//!
//! Every resource advertises every taxonomy property. Values come from small
//! per-type pools so that equal values recur across resources:
//!
//! | type   | pool                                 |
//! |--------|--------------------------------------|
//! | `text` | `<property>-0` … `<property>-4`      |
//! | `int`  | 1, 2, 4, … 64                        |
//! | `long` | 256, 512, … 32768                    |
//! | `real` | 0.5, 1.0, … 4.0                      |
//!
//! Draw order: resources in order, properties in taxonomy order, one draw
//! each from the values stream. Masking consumes one `unit()` per value in the
//! same order and hides the value when it falls below `1 − certainty`.
//! A query draws its size `2 + below(5)` (capped at the property count), then
//! picks properties by partial Fisher–Yates over the taxonomy order, and for
//! each picked property a weight `(1 + below(10)) / 10` followed, for numeric
//! properties, by a requested value from the pool.

use drsrd_core::ontology::PropertyDef;
use drsrd_core::{AttributeValue, Repository, ResourceRecord, ResourceRequest, Taxonomy, ValueType, WeightedProperty};

use crate::rng::{self, Stream};
use crate::{Result, SimError};

const TEXT_CHOICES: u64 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub resource_count: usize,
    pub certainty: f64,
    pub query_count: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resource_count == 0 {
            return Err(SimError::Config("resource count must be positive".into()));
        }
        if self.query_count == 0 {
            return Err(SimError::Config("query count must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.certainty) {
            return Err(SimError::Config(format!("certainty {} outside [0, 1]", self.certainty)));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(SimError::Config(format!("threshold {} outside [0, 1]", self.threshold)));
        }
        Ok(())
    }
}

fn draw(def: &PropertyDef, rng: &mut Stream) -> AttributeValue {
    match def.value_type {
        ValueType::Text => AttributeValue::text(format!("{}-{}", def.name, rng.below(TEXT_CHOICES))),
        ValueType::Int => AttributeValue::Int(1 << rng.below(7)),
        ValueType::Long => AttributeValue::Long(256 << rng.below(8)),
        ValueType::Real => AttributeValue::Real(0.5 * (1 + rng.below(8)) as f64),
    }
}

pub fn resource_id(i: usize) -> String {
    format!("r{i:06}")
}

/// Ground-truth resources and their masked copy.
pub fn generate_resources(tax: &Taxonomy, config: &GeneratorConfig) -> Result<(Repository, Repository)> {
    let mut values = Stream::new(config.seed, rng::VALUES);
    let mut masking = Stream::new(config.seed, rng::MASKING);
    let hide_below = 1.0 - config.certainty;
    let mut truth = Vec::with_capacity(config.resource_count);
    let mut masked = Vec::with_capacity(config.resource_count);
    for i in 0..config.resource_count {
        let full: Vec<(&str, AttributeValue)> = tax
            .properties()
            .iter()
            .map(|def| (def.name.as_str(), draw(def, &mut values)))
            .collect();
        let hidden: Vec<(&str, AttributeValue)> = full
            .iter()
            .map(|(name, v)| {
                let v = if masking.unit() < hide_below { AttributeValue::Null } else { v.clone() };
                (*name, v)
            })
            .collect();
        truth.push(ResourceRecord::new(resource_id(i), full)?);
        masked.push(ResourceRecord::new(resource_id(i), hidden)?);
    }
    Ok((Repository::in_memory(truth)?, Repository::in_memory(masked)?))
}

pub fn generate_queries(tax: &Taxonomy, config: &GeneratorConfig) -> Result<Vec<ResourceRequest>> {
    let mut rng = Stream::new(config.seed, rng::QUERIES);
    let defs = tax.properties();
    let mut queries = Vec::with_capacity(config.query_count);
    for _ in 0..config.query_count {
        let size = (2 + rng.below(5) as usize).min(defs.len());
        let mut order: Vec<usize> = (0..defs.len()).collect();
        let mut props = Vec::with_capacity(size);
        for k in 0..size {
            let j = k + rng.below((defs.len() - k) as u64) as usize;
            order.swap(k, j);
            let def = &defs[order[k]];
            let weight = (1 + rng.below(10)) as f64 / 10.0;
            let mut p = WeightedProperty::new(def.name.clone(), weight);
            if def.value_type.is_numeric() {
                let v = draw(def, &mut rng).as_f64().expect("numeric pool value");
                p = p.with_value(v);
            }
            props.push(p);
        }
        queries.push(ResourceRequest::new(props)?);
    }
    Ok(queries)
}
