//! Match degrees between requested and advertised properties, the weighted
//! aggregate over a whole resource, and ranking.
//!
//! Per-property degrees:
//!
//! | advertised vs requested                | degree                  |
//! |----------------------------------------|-------------------------|
//! | advertised value is `Null`             | 0.5                     |
//! | no subsumption between the classes     | 0.0                     |
//! | text, exact or plug-in at distance 1   | 1.0                     |
//! | text, plug-in at distance `d` in 2..=5 | 1 − (d − 1) × 0.1       |
//! | text, subsume at distance `d` in 1..=3 | 0.8 − (d − 1) × 0.1     |
//! | text, deeper plug-in or subsume        | 0.5                     |
//! | numeric of the same type, `ρ ≤ 5`      | 1 − ρ × 0.1             |
//! | numeric of the same type, `ρ > 5`      | 0.5                     |
//! | anything else                          | 0.0                     |
//!
//! where `ρ = advertised / requested`. Note that the numeric rule scores an
//! exact value match at 0.9 and a smaller-than-requested value above that; the
//! formula is applied as written.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ontology::{MatchRelation, PropertyId, Taxonomy};
use crate::registry::ResourceRecord;
use crate::table::ObjectId;
use crate::value::{AttributeValue, ValueType};

/// Degree given to an advertised property whose value is unknown.
pub const NULL_DEGREE: f64 = 0.5;

/// One requested property with its priority weight in `(0, 1]` and, for
/// numeric properties, the requested value.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProperty {
    pub name: String,
    pub weight: f64,
    pub value: Option<f64>,
}

impl WeightedProperty {
    pub fn new(name: impl Into<String>, weight: f64) -> Self {
        WeightedProperty {
            name: name.into(),
            weight,
            value: None,
        }
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.value = Some(value);
        self
    }
}

/// A validated, non-empty request.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceRequest {
    properties: Vec<WeightedProperty>,
}

impl ResourceRequest {
    pub fn new(properties: Vec<WeightedProperty>) -> Result<Self> {
        if properties.is_empty() {
            return Err(Error::EmptyRequest);
        }
        for (i, p) in properties.iter().enumerate() {
            if !(p.weight > 0.0 && p.weight <= 1.0) {
                return Err(Error::InvalidWeight {
                    name: p.name.clone(),
                    weight: p.weight,
                });
            }
            if let Some(v) = p.value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidRequestedValue {
                        name: p.name.clone(),
                        value: v,
                    });
                }
            }
            if properties[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::DuplicateRequestedProperty(p.name.clone()));
            }
        }
        Ok(ResourceRequest { properties })
    }

    pub fn properties(&self) -> &[WeightedProperty] {
        &self.properties
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.properties.iter().map(|p| p.name.as_str())
    }

    /// Parses a request document: one `<property> weight <w> [value <v>]` per
    /// line; blank lines and `#` comments are ignored.
    pub fn parse(source: &str) -> Result<Self> {
        let mut props = Vec::new();
        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |message: String| Error::RequestSyntax { line, message };
            let words: Vec<&str> = text.split_whitespace().collect();
            let (name, weight, value) = match words.as_slice() {
                [name, "weight", w] => (*name, *w, None),
                [name, "weight", w, "value", v] => (*name, *w, Some(*v)),
                _ => {
                    return Err(err(format!(
                        "expected `<property> weight <w> [value <v>]`, got `{text}`"
                    )))
                }
            };
            let weight: f64 = weight
                .parse()
                .map_err(|_| err(format!("invalid weight `{weight}`")))?;
            let value = value
                .map(|v| v.parse::<f64>().map_err(|_| err(format!("invalid value `{v}`"))))
                .transpose()?;
            props.push(WeightedProperty {
                name: name.to_owned(),
                weight,
                value,
            });
        }
        ResourceRequest::new(props)
    }

    pub fn to_document(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&format!("{} weight {}", p.name, p.weight));
            if let Some(v) = p.value {
                out.push_str(&format!(" value {v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// A ranked hit.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub resource: ObjectId,
    pub degree: f64,
    pub rank: usize,
}

fn text_degree(relation: MatchRelation) -> f64 {
    match relation {
        MatchRelation::Exact | MatchRelation::PlugIn(1) => 1.0,
        MatchRelation::PlugIn(d) if d <= 5 => 1.0 - (d - 1) as f64 * 0.1,
        MatchRelation::Subsume(d) if d <= 3 => 0.8 - (d - 1) as f64 * 0.1,
        MatchRelation::PlugIn(_) | MatchRelation::Subsume(_) => 0.5,
        MatchRelation::NoMatch => 0.0,
    }
}

fn ratio_degree(ratio: f64) -> f64 {
    if ratio <= 5.0 {
        // non-positive advertised values would push this past 1
        (1.0 - ratio * 0.1).min(1.0)
    } else {
        0.5
    }
}

/// Degree for one (requested, advertised) pair once the relation is known.
/// A numeric requested property without a value scores 0 against a value.
fn pair_degree(
    relation: MatchRelation,
    requested_type: ValueType,
    requested_value: Option<f64>,
    advertised: &AttributeValue,
) -> f64 {
    if advertised.is_null() {
        return NULL_DEGREE;
    }
    if relation == MatchRelation::NoMatch {
        return 0.0;
    }
    match (requested_type, advertised.value_type()) {
        (ValueType::Text, Some(ValueType::Text)) => text_degree(relation),
        (rt, Some(at)) if rt == at => match (advertised.as_f64(), requested_value) {
            (Some(a), Some(r)) => ratio_degree(a / r),
            _ => 0.0,
        },
        _ => 0.0,
    }
}

fn check_value_type(tax: &Taxonomy, id: PropertyId, value: &AttributeValue) -> Result<()> {
    let def = tax.property_def(id);
    match value.value_type() {
        Some(t) if t != def.value_type => Err(Error::TypeMismatch {
            name: def.name.clone(),
            expected: def.value_type.to_string(),
            found: value.type_name().to_owned(),
        }),
        _ => Ok(()),
    }
}

/// `m(q, r)` for an advertised property/value and a requested property.
pub fn property_match_degree(
    tax: &Taxonomy,
    advertised: (&str, &AttributeValue),
    requested: (&str, Option<f64>),
) -> Result<f64> {
    let (adv_name, adv_value) = advertised;
    let (req_name, req_value) = requested;
    let a = tax.property(adv_name)?;
    let r = tax.property(req_name)?;
    check_value_type(tax, a, adv_value)?;
    let relation = tax.relation_of(r, a);
    let req_type = tax.property_def(r).value_type;
    if let Some(v) = req_value {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidRequestedValue {
                name: req_name.to_owned(),
                value: v,
            });
        }
    }
    let numeric_pair = !adv_value.is_null()
        && relation != MatchRelation::NoMatch
        && req_type.is_numeric()
        && adv_value.value_type() == Some(req_type);
    if numeric_pair && req_value.is_none() {
        return Err(Error::MissingRequestedValue(req_name.to_owned()));
    }
    Ok(pair_degree(relation, req_type, req_value, adv_value))
}

#[derive(Debug, Clone)]
struct PlanItem {
    weight: f64,
    value: Option<f64>,
    value_type: ValueType,
}

/// A request compiled against a taxonomy: relations between every requested
/// property and every taxonomy property are resolved once, so scoring a
/// resource only touches its values.
#[derive(Debug, Clone)]
pub struct MatchPlan<'t> {
    tax: &'t Taxonomy,
    items: Vec<PlanItem>,
    /// `relations[i * property_count + p]`
    relations: Vec<MatchRelation>,
    relevant: Vec<bool>,
    total_weight: f64,
}

impl<'t> MatchPlan<'t> {
    /// Fails if a requested property is unknown or a numeric one has no value.
    pub fn new(tax: &'t Taxonomy, request: &ResourceRequest) -> Result<Self> {
        let property_count = tax.properties().len();
        let mut items = Vec::with_capacity(request.properties().len());
        let mut relations = Vec::with_capacity(request.properties().len() * property_count);
        let mut relevant = vec![false; property_count];
        for p in request.properties() {
            let id = tax.property(&p.name)?;
            let value_type = tax.property_def(id).value_type;
            if value_type.is_numeric() && p.value.is_none() {
                return Err(Error::MissingRequestedValue(p.name.clone()));
            }
            items.push(PlanItem {
                weight: p.weight,
                value: p.value,
                value_type,
            });
            for (a, flag) in relevant.iter_mut().enumerate() {
                let rel = tax.relation_of(id, PropertyId::from_index(a));
                *flag |= rel != MatchRelation::NoMatch;
                relations.push(rel);
            }
        }
        let total_weight = items.iter().map(|i| i.weight).sum();
        Ok(MatchPlan {
            tax,
            items,
            relations,
            relevant,
            total_weight,
        })
    }

    pub fn taxonomy(&self) -> &'t Taxonomy {
        self.tax
    }

    /// Whether `property` survives irrelevant-property pruning for this request.
    pub fn is_relevant(&self, property: PropertyId) -> bool {
        self.relevant[property.index()]
    }

    pub fn relation(&self, item: usize, property: PropertyId) -> MatchRelation {
        self.relations[item * self.relevant.len() + property.index()]
    }

    /// Best degree per requested property over the relevant advertised
    /// properties; 0 where nothing relevant is advertised.
    pub fn best_degrees<'v, I>(&self, advertised: I) -> Vec<f64>
    where
        I: IntoIterator<Item = (PropertyId, &'v AttributeValue)>,
    {
        let mut best = vec![0.0f64; self.items.len()];
        for (p, value) in advertised {
            if !self.is_relevant(p) {
                continue;
            }
            for (i, item) in self.items.iter().enumerate() {
                let m = pair_degree(self.relation(i, p), item.value_type, item.value, value);
                if m > best[i] {
                    best[i] = m;
                }
            }
        }
        best
    }

    /// Weighted mean of the best per-property degrees.
    pub fn score<'v, I>(&self, advertised: I) -> f64
    where
        I: IntoIterator<Item = (PropertyId, &'v AttributeValue)>,
    {
        self.weighted(&self.best_degrees(advertised))
    }

    pub(crate) fn weighted(&self, best: &[f64]) -> f64 {
        let sum: f64 = best.iter().zip(&self.items).map(|(m, i)| m * i.weight).sum();
        sum / self.total_weight
    }
}

/// Weighted aggregate match of a resource against a request.
pub fn aggregate_match(tax: &Taxonomy, request: &ResourceRequest, resource: &ResourceRecord) -> Result<f64> {
    let plan = MatchPlan::new(tax, request)?;
    let mut advertised = Vec::with_capacity(resource.values().len());
    for (name, value) in resource.values() {
        let id = tax.property(name)?;
        check_value_type(tax, id, value)?;
        advertised.push((id, value));
    }
    Ok(plan.score(advertised))
}

/// Sorts by descending degree, ties by ascending id, and numbers from 1.
pub fn rank(results: Vec<(ObjectId, f64)>) -> Vec<MatchResult> {
    let mut results = results;
    results.sort_by(|(a_id, a), (b_id, b)| match b.total_cmp(a) {
        Ordering::Equal => a_id.cmp(b_id),
        other => other,
    });
    results
        .into_iter()
        .enumerate()
        .map(|(i, (resource, degree))| MatchResult {
            resource,
            degree,
            rank: i + 1,
        })
        .collect()
}
