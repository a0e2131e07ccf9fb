//! Precision and matching-time trials on masked repositories.
//!
//! A retrieved resource is correct when its unmasked record reaches the same
//! threshold that was used for retrieval.

use std::io::Write;
use std::time::Duration;

use drsrd_core::matchmaker::MatchPlan;
use drsrd_core::{discover_timed, Algorithm, ObjectSet, Repository, ResourceRequest, Taxonomy};

use crate::generator::{generate_queries, generate_resources, GeneratorConfig};
use crate::{Result, SimError};

pub const CSV_HEADER: [&str; 8] = [
    "algorithm",
    "certainty",
    "resources",
    "query_id",
    "retrieved",
    "correct",
    "precision",
    "match_time_ns",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub algorithm: Algorithm,
    pub query_id: usize,
    pub retrieved: usize,
    pub correct: usize,
    /// `correct / retrieved`, or 1.0 when nothing was retrieved.
    pub precision: f64,
    pub zero_retrieved: bool,
    pub match_time: Duration,
}

impl TrialOutcome {
    fn new(algorithm: Algorithm, query_id: usize, retrieved: usize, correct: usize, match_time: Duration) -> Self {
        let zero_retrieved = retrieved == 0;
        let precision = if zero_retrieved { 1.0 } else { correct as f64 / retrieved as f64 };
        TrialOutcome {
            algorithm,
            query_id,
            retrieved,
            correct,
            precision,
            zero_retrieved,
            match_time,
        }
    }
}

/// Per-algorithm totals over all queries of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithm: Algorithm,
    pub retrieved: usize,
    pub correct: usize,
    pub mean_precision: f64,
    pub mean_match_time: Duration,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub certainty: f64,
    pub resources: usize,
    pub algorithms: Vec<Algorithm>,
    /// Ordered by query, then by position in `algorithms`.
    pub trials: Vec<TrialOutcome>,
}

impl ExperimentReport {
    pub fn summary(&self, algorithm: Algorithm) -> Summary {
        let mine: Vec<&TrialOutcome> = self.trials.iter().filter(|t| t.algorithm == algorithm).collect();
        let n = mine.len().max(1);
        let total_ns: u128 = mine.iter().map(|t| t.match_time.as_nanos()).sum();
        Summary {
            algorithm,
            retrieved: mine.iter().map(|t| t.retrieved).sum(),
            correct: mine.iter().map(|t| t.correct).sum(),
            mean_precision: mine.iter().map(|t| t.precision).sum::<f64>() / n as f64,
            mean_match_time: Duration::from_nanos((total_ns / n as u128) as u64),
        }
    }

    pub fn summaries(&self) -> Vec<Summary> {
        self.algorithms.iter().map(|&a| self.summary(a)).collect()
    }
}

/// Writes the CSV header and, for each report, its per-query rows (when
/// `per_query`) followed by one `ALL` row per algorithm.
pub fn write_csv<W: Write>(out: W, reports: &[ExperimentReport], per_query: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for report in reports {
        let certainty = format!("{:.6}", report.certainty);
        let resources = report.resources.to_string();
        if per_query {
            for t in &report.trials {
                w.write_record([
                    t.algorithm.as_str(),
                    &certainty,
                    &resources,
                    &t.query_id.to_string(),
                    &t.retrieved.to_string(),
                    &t.correct.to_string(),
                    &format!("{:.6}", t.precision),
                    &t.match_time.as_nanos().to_string(),
                ])?;
            }
        }
        for s in report.summaries() {
            w.write_record([
                s.algorithm.as_str(),
                &certainty,
                &resources,
                "ALL",
                &s.retrieved.to_string(),
                &s.correct.to_string(),
                &format!("{:.6}", s.mean_precision),
                &s.mean_match_time.as_nanos().to_string(),
            ])?;
        }
    }
    w.flush().map_err(|source| SimError::Io {
        context: "writing CSV".into(),
        source,
    })
}

/// Resources, by position in `truth`, whose unmasked aggregate match reaches
/// `threshold`.
pub fn ground_truth_relevant(
    tax: &Taxonomy,
    truth: &Repository,
    request: &ResourceRequest,
    threshold: f64,
) -> Result<ObjectSet> {
    let plan = MatchPlan::new(tax, request)?;
    let mut relevant = ObjectSet::empty(truth.len());
    for (i, record) in truth.records().iter().enumerate() {
        let values = record
            .values()
            .iter()
            .map(|(name, v)| Ok((tax.property(name)?, v)))
            .collect::<Result<Vec<_>, drsrd_core::Error>>()?;
        if plan.score(values) >= threshold {
            relevant.insert(i);
        }
    }
    Ok(relevant)
}

/// Runs every query under every algorithm against `masked`, judging
/// correctness on `truth`. Both repositories must list the same resources in
/// the same order.
pub fn run_trials(
    tax: &Taxonomy,
    truth: &Repository,
    masked: &Repository,
    queries: &[ResourceRequest],
    algorithms: &[Algorithm],
    certainty: f64,
    threshold: f64,
) -> Result<ExperimentReport> {
    if algorithms.is_empty() {
        return Err(SimError::NoAlgorithms);
    }
    let same_order = truth.len() == masked.len()
        && truth.records().iter().zip(masked.records()).all(|(a, b)| a.id() == b.id());
    if !same_order {
        return Err(SimError::Config("ground truth and masked repositories list different resources".into()));
    }
    let properties: Vec<&str> = tax.properties().iter().map(|p| p.name.as_str()).collect();
    let table = masked.to_information_table(&properties)?;
    let mut trials = Vec::with_capacity(queries.len() * algorithms.len());
    for (query_id, request) in queries.iter().enumerate() {
        let relevant = ground_truth_relevant(tax, truth, request, threshold)?;
        for &algorithm in algorithms {
            let run = discover_timed(tax, &table, request, algorithm, threshold)?;
            let mut correct = 0;
            for r in &run.results {
                if relevant.contains(table.object_index(r.resource.as_str())?) {
                    correct += 1;
                }
            }
            trials.push(TrialOutcome::new(algorithm, query_id, run.results.len(), correct, run.match_time));
        }
    }
    Ok(ExperimentReport {
        certainty,
        resources: truth.len(),
        algorithms: algorithms.to_vec(),
        trials,
    })
}

/// Generates resources and queries from `config` and runs [`run_trials`].
pub fn run_precision_experiment(
    tax: &Taxonomy,
    config: &GeneratorConfig,
    algorithms: &[Algorithm],
) -> Result<ExperimentReport> {
    if algorithms.is_empty() {
        return Err(SimError::NoAlgorithms);
    }
    config.validate()?;
    let (truth, masked) = generate_resources(tax, config)?;
    let queries = generate_queries(tax, config)?;
    run_trials(tax, &truth, &masked, &queries, algorithms, config.certainty, config.threshold)
}
