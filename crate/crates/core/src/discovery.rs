//! The discovery pipeline: prune irrelevant properties, optimise the candidate
//! set with two-direction dynamic rough sets, then match and rank.
//!
//! Requested properties are split by weight. High-priority ones (`w ≥ 0.5`)
//! inflate the candidate set, low-priority ones contract it, and the transfer
//! standards are the mean weights of each side. An empty side transfers
//! nothing.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::dynamic::{contracted_main_in, inflated_main_in, TransferStandard};
use crate::error::{Error, Result};
use crate::matchmaker::{rank, MatchPlan, MatchResult, ResourceRequest, WeightedProperty};
use crate::ontology::{PropertyId, Taxonomy};
use crate::table::{InformationTable, ObjectSet};

/// Weight at or above which a requested property counts as high priority.
pub const HIGH_PRIORITY_WEIGHT: f64 = 0.5;

/// Retrieval cutoff used when none is given.
pub const DEFAULT_THRESHOLD: f64 = 0.8;

/// Ratio above which the exact baseline rejects a numeric value.
const EXACT_MAX_RATIO: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSplit {
    /// `T`: properties with `w ≥ 0.5`.
    pub high: Vec<WeightedProperty>,
    /// `T'`: properties with `w < 0.5`.
    pub low: Vec<WeightedProperty>,
}

impl WeightSplit {
    pub fn high_names(&self) -> Vec<&str> {
        self.high.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn low_names(&self) -> Vec<&str> {
        self.low.iter().map(|p| p.name.as_str()).collect()
    }
}

pub fn split_by_weight(request: &ResourceRequest) -> WeightSplit {
    let (high, low) = request
        .properties()
        .iter()
        .cloned()
        .partition(|p| p.weight >= HIGH_PRIORITY_WEIGHT);
    WeightSplit { high, low }
}

fn mean_weight(props: &[WeightedProperty]) -> TransferStandard {
    let weights: Vec<f64> = props.iter().map(|p| p.weight).collect();
    TransferStandard::mean(&weights)
        .expect("request weights lie in (0, 1]")
        .unwrap_or(TransferStandard::NO_TRANSFER)
}

/// `d⁺`: mean weight of the high-priority side, or no transfer when it is empty.
pub fn inward_standard(high: &[WeightedProperty]) -> TransferStandard {
    mean_weight(high)
}

/// `d⁻`: mean weight of the low-priority side, or no transfer when it is empty.
pub fn outward_standard(low: &[WeightedProperty]) -> TransferStandard {
    mean_weight(low)
}

/// Objects with the largest number of non-`Null` values among `requested`.
/// Empty when no object has any.
pub fn initial_candidates<S: AsRef<str>>(table: &InformationTable, requested: &[S]) -> Result<ObjectSet> {
    let cols = requested
        .iter()
        .map(|r| table.attribute_index(r.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let coverage: Vec<usize> = (0..table.universe_len())
        .map(|o| cols.iter().filter(|&&c| !table.value(o, c).is_null()).count())
        .collect();
    let best = coverage.iter().copied().max().unwrap_or(0);
    let mut set = ObjectSet::empty(table.universe_len());
    if best > 0 {
        for (o, &k) in coverage.iter().enumerate() {
            if k == best {
                set.insert(o);
            }
        }
    }
    Ok(set)
}

/// Every intermediate of candidate optimisation, so the result can be
/// recomputed and audited from its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateReport {
    pub initial: ObjectSet,
    pub split: WeightSplit,
    pub d_plus: TransferStandard,
    pub d_minus: TransferStandard,
    pub inflated_main: ObjectSet,
    pub contracted_main: ObjectSet,
    pub two_direction: ObjectSet,
    /// D-lower approximation of `two_direction` under all requested properties.
    pub final_set: ObjectSet,
}

/// Candidate optimisation: standards, transfer sets, two-direction set and its
/// D-lower approximation.
pub fn optimize_candidates(table: &InformationTable, request: &ResourceRequest) -> Result<CandidateReport> {
    let names: Vec<&str> = request.names().collect();
    let initial = initial_candidates(table, &names)?;
    let split = split_by_weight(request);
    let d_plus = inward_standard(&split.high);
    let d_minus = outward_standard(&split.low);
    let universe = table.universe_len();

    let inflated_main = if split.high.is_empty() {
        ObjectSet::empty(universe)
    } else {
        inflated_main_in(&table.partition(&split.high_names())?, &initial, d_plus)
    };
    let contracted_main = if split.low.is_empty() {
        ObjectSet::empty(universe)
    } else {
        contracted_main_in(&table.partition(&split.low_names())?, &initial, d_minus)
    };
    let two_direction = initial.difference(&contracted_main).union(&inflated_main);
    let final_set = table.partition(&names)?.lower(&two_direction);

    Ok(CandidateReport {
        initial,
        split,
        d_plus,
        d_minus,
        inflated_main,
        contracted_main,
        two_direction,
        final_set,
    })
}

/// Which candidate selection precedes matchmaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Two-direction dynamic rough-set candidates.
    Drsrd,
    /// Classical lower approximation of the initial candidates.
    Classic,
    /// No candidate optimisation and no tolerance for unknown values: every
    /// requested property must be present with a numeric ratio of at most 5.
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Drsrd, Algorithm::Classic, Algorithm::Exact];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Drsrd => "drsrd",
            Algorithm::Classic => "classic",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drsrd" => Ok(Algorithm::Drsrd),
            "classic" => Ok(Algorithm::Classic),
            "exact" => Ok(Algorithm::Exact),
            other => Err(Error::UnknownAlgorithm(other.to_owned())),
        }
    }
}

/// Outcome of one discovery run.
#[derive(Debug, Clone)]
pub struct Discovery {
    pub results: Vec<MatchResult>,
    /// Number of resources handed to matchmaking.
    pub candidates: usize,
    /// Wall-clock time of candidate selection.
    pub optimize_time: Duration,
    /// Wall-clock time of matchmaking: scoring, cutoff and ranking.
    pub match_time: Duration,
}

/// Runs `algorithm` and returns the ranked resources whose degree reaches
/// `threshold`.
pub fn discover(
    tax: &Taxonomy,
    table: &InformationTable,
    request: &ResourceRequest,
    algorithm: Algorithm,
    threshold: f64,
) -> Result<Vec<MatchResult>> {
    discover_timed(tax, table, request, algorithm, threshold).map(|d| d.results)
}

/// [`discover`] plus candidate counts and phase timings.
pub fn discover_timed(
    tax: &Taxonomy,
    table: &InformationTable,
    request: &ResourceRequest,
    algorithm: Algorithm,
    threshold: f64,
) -> Result<Discovery> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let plan = MatchPlan::new(tax, request)?;
    let columns = table
        .attributes()
        .iter()
        .map(|a| tax.property(a.as_str()))
        .collect::<Result<Vec<PropertyId>>>()?;
    // irrelevant advertised properties never reach matchmaking
    let relevant: Vec<(usize, PropertyId)> = columns
        .iter()
        .enumerate()
        .filter(|(_, &p)| plan.is_relevant(p))
        .map(|(c, &p)| (c, p))
        .collect();
    let names: Vec<&str> = request.names().collect();
    let requested_cols = names
        .iter()
        .map(|n| table.attribute_index(n))
        .collect::<Result<Vec<_>>>()?;

    let started = Instant::now();
    let candidates = match algorithm {
        Algorithm::Drsrd => optimize_candidates(table, request)?.final_set,
        Algorithm::Classic => {
            let initial = initial_candidates(table, &names)?;
            table.partition(&names)?.lower(&initial)
        }
        Algorithm::Exact => table.full_set(),
    };
    let optimize_time = started.elapsed();

    let started = Instant::now();
    let mut scored = Vec::new();
    for o in candidates.iter() {
        if algorithm == Algorithm::Exact && !exact_admits(table, request, &requested_cols, o) {
            continue;
        }
        let row = table.row(o);
        let degree = plan.score(relevant.iter().map(|&(c, p)| (p, &row[c])));
        if degree >= threshold {
            scored.push((table.objects()[o].clone(), degree));
        }
    }
    let results = rank(scored);
    let match_time = started.elapsed();

    Ok(Discovery {
        results,
        candidates: candidates.len(),
        optimize_time,
        match_time,
    })
}

fn exact_admits(table: &InformationTable, request: &ResourceRequest, cols: &[usize], object: usize) -> bool {
    request.properties().iter().zip(cols).all(|(p, &c)| {
        let v = table.value(object, c);
        if v.is_null() {
            return false;
        }
        match (v.as_f64(), p.value) {
            (Some(a), Some(r)) => a / r <= EXACT_MAX_RATIO,
            _ => true,
        }
    })
}
