//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.
//!
//! `cargo test -p drsrd-simbench --test acceptance`

use std::time::{Duration, Instant};

use drsrd_core::dynamic::{
    contracted_assistant_set, contracted_main_set, contracted_set, d_lower_approx, d_upper_approx,
    inflated_assistant_set, inflated_main_set, inflated_set, inward_coefficient, outward_coefficient,
    two_direction_set,
};
use drsrd_core::matchmaker::MatchPlan;
use drsrd_core::{
    aggregate_match, property_match_degree, Algorithm, AttributeValue, InformationTable, ObjectSet, ResourceRequest,
    Taxonomy, TransferStandard, WeightedProperty,
};
use drsrd_simbench::experiment::{run_precision_experiment, write_csv, ExperimentReport};
use drsrd_simbench::generator::{generate_queries, generate_resources, GeneratorConfig};
use drsrd_simbench::rng::Stream;

const THRESHOLD: f64 = 0.8;
const QUERIES: usize = 50;
const SEEDS: u64 = 20;

struct Verdict {
    pass: bool,
    detail: String,
}

fn experiment(n: usize, certainty: f64, seed: u64, algorithms: &[Algorithm]) -> ExperimentReport {
    let tax = Taxonomy::grid_fixture();
    let cfg = GeneratorConfig {
        resource_count: n,
        certainty,
        query_count: QUERIES,
        seed,
        threshold: THRESHOLD,
    };
    run_precision_experiment(&tax, &cfg, algorithms).unwrap()
}

/// Mean over seeds of each algorithm's mean precision, seeds run in parallel.
fn seed_mean_precision(n: usize, certainty: f64) -> Vec<f64> {
    let threads = std::thread::available_parallelism().map_or(4, |p| p.get()).min(SEEDS as usize);
    let mut sums = vec![0.0; Algorithm::ALL.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|t| {
                s.spawn(move || {
                    let mut part = vec![0.0; Algorithm::ALL.len()];
                    for seed in (t..SEEDS).step_by(threads) {
                        let report = experiment(n, certainty, seed, &Algorithm::ALL);
                        for (k, summary) in report.summaries().iter().enumerate() {
                            part[k] += summary.mean_precision;
                        }
                    }
                    part
                })
            })
            .collect();
        for h in handles {
            for (k, v) in h.join().unwrap().into_iter().enumerate() {
                sums[k] += v;
            }
        }
    });
    sums.into_iter().map(|s| s / SEEDS as f64).collect()
}

fn full_certainty() -> Verdict {
    let start = Instant::now();
    let report = experiment(1000, 1.0, 7, &[Algorithm::Drsrd, Algorithm::Exact]);
    let p: Vec<f64> = report.summaries().iter().map(|s| s.mean_precision).collect();
    let took = start.elapsed();
    Verdict {
        pass: p.iter().all(|&x| x == 1.0) && took < Duration::from_secs(60),
        detail: format!("drsrd={:.6} exact={:.6} in {took:.2?}", p[0], p[1]),
    }
}

fn uncertainty_ordering() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut cells = Vec::new();
    for certainty in [0.3, 0.5, 0.8] {
        for n in [500, 1000, 2000] {
            let m = seed_mean_precision(n, certainty);
            pass &= m[0] >= m[1] && m[0] >= m[2];
            cells.push(format!("c={certainty} n={n}: {:.4}/{:.4}/{:.4}", m[0], m[1], m[2]));
        }
    }
    let took = start.elapsed();
    Verdict {
        pass: pass && took < Duration::from_secs(600),
        detail: format!("drsrd/classic/exact {} in {took:.2?}", cells.join("; ")),
    }
}

fn certainty_trend() -> Verdict {
    let start = Instant::now();
    let means: Vec<f64> = [0.3, 0.5, 0.8, 1.0]
        .iter()
        .map(|&c| seed_mean_precision(1000, c)[0])
        .collect();
    let drops: Vec<f64> = means.windows(2).map(|w| w[0] - w[1]).filter(|&d| d > 0.0).collect();
    let took = start.elapsed();
    Verdict {
        pass: drops.len() <= 1 && drops.iter().all(|&d| d <= 0.02) && took < Duration::from_secs(300),
        detail: format!("drsrd precision over certainty 0.3..1.0 = {means:.4?} in {took:.2?}"),
    }
}

fn matching_time() -> Verdict {
    let start = Instant::now();
    let mut totals = [Duration::ZERO; 3];
    let runs = 5;
    for seed in 0..runs {
        let report = experiment(2000, 0.5, seed, &Algorithm::ALL);
        for (k, s) in report.summaries().iter().enumerate() {
            totals[k] += s.mean_match_time;
        }
    }
    let mean: Vec<Duration> = totals.iter().map(|t| *t / runs as u32).collect();
    let took = start.elapsed();
    Verdict {
        pass: mean[0] < mean[1] && took < Duration::from_secs(300),
        detail: format!(
            "n=2000 certainty=0.5: drsrd {:?} < classic {:?} (exact {:?}, not ordered) in {took:.2?}",
            mean[0], mean[1], mean[2]
        ),
    }
}

// ---- brute-force oracle over random small tables ----

type Rows = Vec<Vec<AttributeValue>>;

fn class(rows: &Rows, cols: &[usize], x: usize) -> Vec<usize> {
    (0..rows.len()).filter(|&y| cols.iter().all(|&c| rows[x][c] == rows[y][c])).collect()
}

fn lower(rows: &Rows, cols: &[usize], set: &[bool]) -> Vec<bool> {
    (0..rows.len()).map(|x| class(rows, cols, x).iter().all(|&y| set[y])).collect()
}

fn upper(rows: &Rows, cols: &[usize], set: &[bool]) -> Vec<bool> {
    (0..rows.len()).map(|x| class(rows, cols, x).iter().any(|&y| set[y])).collect()
}

fn positive(rows: &Rows, c: &[usize], d: &[usize]) -> Vec<bool> {
    (0..rows.len())
        .map(|x| {
            let dc = class(rows, d, x);
            class(rows, c, x).iter().all(|y| dc.contains(y))
        })
        .collect()
}

/// `(|[x] ∩ X|, |[x]|)`
fn inside(rows: &Rows, cols: &[usize], set: &[bool], x: usize) -> (usize, usize) {
    let c = class(rows, cols, x);
    (c.iter().filter(|&&y| set[y]).count(), c.len())
}

fn bools(s: &ObjectSet) -> Vec<bool> {
    (0..s.universe()).map(|i| s.contains(i)).collect()
}

fn subset(rng: &mut Stream, p: usize) -> Vec<usize> {
    loop {
        let v: Vec<usize> = (0..p).filter(|_| rng.below(2) == 1).collect();
        if !v.is_empty() {
            return v;
        }
    }
}

/// Returns the first mismatch found on one random table, if any.
fn oracle_case(rng: &mut Stream) -> Option<String> {
    let n = rng.below(13) as usize;
    let p = 1 + rng.below(4) as usize;
    let rows: Rows = (0..n)
        .map(|_| {
            (0..p)
                .map(|_| match rng.below(4) {
                    3 => AttributeValue::Null,
                    v => AttributeValue::Int(v as i32),
                })
                .collect()
        })
        .collect();
    let names: Vec<String> = (0..p).map(|i| format!("p{i}")).collect();
    let table = InformationTable::from_rows(
        &names,
        rows.iter().enumerate().map(|(i, r)| (format!("u{i}"), r.clone())).collect(),
    )
    .unwrap();
    let xb: Vec<bool> = (0..n).map(|_| rng.below(2) == 1).collect();
    let x = ObjectSet::from_indices(n, (0..n).filter(|&i| xb[i]));
    let (t, t2, q) = (subset(rng, p), subset(rng, p), subset(rng, p));
    let attr = |cols: &[usize]| cols.iter().map(|&c| names[c].clone()).collect::<Vec<_>>();
    let (tn, t2n, qn) = (attr(&t), attr(&t2), attr(&q));
    let (dp, dm) = (rng.below(11) as usize, rng.below(11) as usize);
    let std = |k: usize| TransferStandard::new(k as f64 / 10.0).unwrap();
    // k/10 ≤ a/b
    let reaches = |k: usize, a: usize, b: usize| k * b <= 10 * a;

    macro_rules! check {
        ($what:expr, $got:expr, $want:expr) => {
            if $got != $want {
                return Some(format!("{} differs on {:?}", $what, rows));
            }
        };
    }

    let part = table.partition(&tn).unwrap();
    for o in 0..n {
        check!("partition", part.class_of(o).to_vec(), class(&rows, &t, o));
    }
    check!("lower", bools(&table.lower_approx(&tn, &x).unwrap()), lower(&rows, &t, &xb));
    check!("upper", bools(&table.upper_approx(&tn, &x).unwrap()), upper(&rows, &t, &xb));
    let pos = positive(&rows, &t, &t2);
    check!("positive region", bools(&table.positive_region(&tn, &t2n).unwrap()), pos);
    if n > 0 {
        let gamma = pos.iter().filter(|&&b| b).count() as f64 / n as f64;
        check!("dependency", table.dependency_degree(&tn, &t2n).unwrap(), gamma);
    }
    if p >= 2 {
        let mut kept: Vec<usize> = (0..p).collect();
        for pos in (0..p).rev() {
            if kept.len() < 2 {
                break;
            }
            let rest: Vec<usize> = kept.iter().copied().filter(|&c| c != kept[pos]).collect();
            if positive(&rows, &rest, &[kept[pos]]).iter().all(|&b| b) {
                kept.remove(pos);
            }
        }
        let got: Vec<String> = table
            .reduce_dependent_attributes(&names)
            .unwrap()
            .iter()
            .map(|a| a.to_string())
            .collect();
        check!("reduction", got, attr(&kept));
    }

    for o in 0..n {
        let id = format!("u{o}");
        let (i, s) = inside(&rows, &t, &xb, o);
        let got = if xb[o] {
            outward_coefficient(&table, &tn, &x, &id).map(|c| (c.numerator(), c.denominator()))
        } else {
            inward_coefficient(&table, &tn, &x, &id).map(|c| (c.numerator(), c.denominator()))
        };
        let want = if xb[o] { (s - i, s) } else { (i, s) };
        check!("coefficient", got.ok(), Some(want));
    }

    let m_plus: Vec<bool> = (0..n)
        .map(|o| {
            let (i, s) = inside(&rows, &t, &xb, o);
            !xb[o] && reaches(dp, i, s) && i < s
        })
        .collect();
    let a_plus: Vec<bool> = (0..n)
        .map(|o| {
            let (i, s) = inside(&rows, &t, &xb, o);
            !xb[o] && !reaches(dp, i, s)
        })
        .collect();
    let m_minus: Vec<bool> = (0..n)
        .map(|o| {
            let (i, s) = inside(&rows, &t2, &xb, o);
            xb[o] && reaches(dm, s - i, s) && s - i < s
        })
        .collect();
    let a_minus: Vec<bool> = (0..n)
        .map(|o| {
            let (i, s) = inside(&rows, &t2, &xb, o);
            xb[o] && !reaches(dm, s - i, s)
        })
        .collect();
    check!("inflated main", bools(&inflated_main_set(&table, &tn, &x, std(dp)).unwrap()), m_plus);
    check!("inflated assistant", bools(&inflated_assistant_set(&table, &tn, &x, std(dp)).unwrap()), a_plus);
    check!("contracted main", bools(&contracted_main_set(&table, &t2n, &x, std(dm)).unwrap()), m_minus);
    check!("contracted assistant", bools(&contracted_assistant_set(&table, &t2n, &x, std(dm)).unwrap()), a_minus);
    let grown: Vec<bool> = (0..n).map(|o| xb[o] || m_plus[o]).collect();
    check!("inflated set", bools(&inflated_set(&table, &tn, &x, std(dp)).unwrap()), grown);
    let shrunk: Vec<bool> = (0..n).map(|o| xb[o] && !m_minus[o]).collect();
    check!("contracted set", bools(&contracted_set(&table, &t2n, &x, std(dm)).unwrap()), shrunk);
    let star: Vec<bool> = (0..n).map(|o| (xb[o] && !m_minus[o]) || m_plus[o]).collect();
    let x_star = two_direction_set(&table, &tn, std(dp), &t2n, std(dm), &x).unwrap();
    check!("two-direction set", bools(&x_star), star.clone());
    check!("D-lower", bools(&d_lower_approx(&table, &qn, &x_star).unwrap()), lower(&rows, &q, &star));
    check!("D-upper", bools(&d_upper_approx(&table, &qn, &x_star).unwrap()), upper(&rows, &q, &star));
    None
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let cases = 2000;
    let mut rng = Stream::new(0x5eed, 9);
    let failure = (0..cases).find_map(|_| oracle_case(&mut rng));
    let took = start.elapsed();
    Verdict {
        pass: failure.is_none() && took < Duration::from_secs(120),
        detail: match failure {
            None => format!("{cases} random tables agree in {took:.2?}"),
            Some(f) => f,
        },
    }
}

// ---- match degrees ----

fn match_degrees() -> Verdict {
    let tax = Taxonomy::parse(
        "class R\nclass A parent R\nclass B parent A\nclass C parent B\nclass N parent R\n\
         property r type text class R\nproperty a type text class A\nproperty c type text class C\n\
         property mem type long class N\n",
    )
    .unwrap();
    let text = AttributeValue::text("v");
    let m = |adv: (&str, &AttributeValue), req: (&str, Option<f64>)| property_match_degree(&tax, adv, req).unwrap();
    let table = [
        ("exact text", m(("a", &text), ("a", None)), 1.0),
        ("plug-in d=3", m(("r", &text), ("c", None)), 0.8),
        ("subsume d=2", m(("c", &text), ("a", None)), 0.7),
        ("numeric 200 vs 100", m(("mem", &AttributeValue::Long(200)), ("mem", Some(100.0))), 0.8),
        ("numeric ratio 6", m(("mem", &AttributeValue::Long(600)), ("mem", Some(100.0))), 0.5),
        ("null", m(("mem", &AttributeValue::Null), ("mem", Some(100.0))), 0.5),
    ];
    let mut bad: Vec<String> = table
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > 1e-12)
        .map(|(name, got, want)| format!("{name}: {got} != {want}"))
        .collect();

    let grid = Taxonomy::grid_fixture();
    let instances = 1000;
    let cfg = GeneratorConfig {
        resource_count: instances,
        certainty: 0.5,
        query_count: instances,
        seed: 2024,
        threshold: THRESHOLD,
    };
    let (_, masked) = generate_resources(&grid, &cfg).unwrap();
    let queries = generate_queries(&grid, &cfg).unwrap();
    let mut rng = Stream::new(2024, 10);
    let (mut invariance, mut monotone) = (0, 0);
    for (record, query) in masked.records().iter().zip(&queries) {
        let base = aggregate_match(&grid, query, record).unwrap();
        let scale = (1 + rng.below(10)) as f64 / 10.0;
        let scaled = ResourceRequest::new(
            query
                .properties()
                .iter()
                .map(|p| WeightedProperty { weight: p.weight * scale, ..p.clone() })
                .collect(),
        )
        .unwrap();
        if (aggregate_match(&grid, &scaled, record).unwrap() - base).abs() > 1e-12 {
            invariance += 1;
        }

        let plan = MatchPlan::new(&grid, query).unwrap();
        let values: Vec<_> = record.values().iter().map(|(k, v)| (grid.property(k).unwrap(), v)).collect();
        let best = plan.best_degrees(values.iter().map(|(p, v)| (*p, *v)));
        let weights: Vec<f64> = query.properties().iter().map(|p| p.weight).collect();
        let agg = |b: &[f64]| b.iter().zip(&weights).map(|(m, w)| m * w).sum::<f64>() / weights.iter().sum::<f64>();
        let mut raised = best.clone();
        let i = rng.below(best.len() as u64) as usize;
        raised[i] = raised[i] + (1.0 - raised[i]) * rng.unit();
        if (agg(&best) - base).abs() > 1e-12 || agg(&raised) < agg(&best) {
            monotone += 1;
        }
    }
    if invariance > 0 {
        bad.push(format!("{invariance} scale-invariance violations"));
    }
    if monotone > 0 {
        bad.push(format!("{monotone} monotonicity violations"));
    }
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("6 table values within 1e-12; invariance and monotonicity on {instances} instances")
        } else {
            bad.join("; ")
        },
    }
}

fn determinism() -> Verdict {
    let csv = || {
        let mut reports = Vec::new();
        for (n, c) in [(500, 0.3), (1000, 0.8)] {
            reports.push(experiment(n, c, 11, &Algorithm::ALL));
        }
        let mut out = Vec::new();
        write_csv(&mut out, &reports, true).unwrap();
        String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let (a, b) = (csv(), csv());
    Verdict {
        pass: a == b,
        detail: format!("{} rows identical without the timing column", a.lines().count()),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 7] = [
        ("1 full-certainty precision", full_certainty),
        ("2 uncertainty ordering", uncertainty_ordering),
        ("3 monotone certainty trend", certainty_trend),
        ("4 matching-time ordering", matching_time),
        ("5 oracle equivalence", oracle_equivalence),
        ("6 match-degree table", match_degrees),
        ("7 deterministic CSV", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += !v.pass as usize;
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
