//! The `drsrd` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use drsrd_core::discovery::DEFAULT_THRESHOLD;
use drsrd_core::{discover, Algorithm, Repository, ResourceRecord, ResourceRequest, Taxonomy};

use crate::experiment::{run_precision_experiment, write_csv};
use crate::generator::GeneratorConfig;
use crate::{Result, SimError};

#[derive(Debug, Parser)]
#[command(name = "drsrd", version, about = "Resource discovery over uncertain descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank the resources of a repository against a request.
    Match(MatchArgs),
    /// Add a resource to a repository file, creating the file if needed.
    Register(RegisterArgs),
    /// Remove a resource from a repository file.
    Deregister(DeregisterArgs),
    /// Precision experiment on synthetic resources and queries.
    Simulate(SimulateArgs),
    /// Summary rows of the precision experiment for several repository sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct TaxonomyArg {
    /// Taxonomy file; the built-in grid taxonomy when omitted.
    #[arg(long)]
    taxonomy: Option<PathBuf>,
}

impl TaxonomyArg {
    fn load(&self) -> Result<Taxonomy> {
        Ok(match &self.taxonomy {
            Some(path) => Taxonomy::load(path)?,
            None => Taxonomy::grid_fixture(),
        })
    }
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    #[arg(long)]
    repo: PathBuf,
    /// Request document: one `<property> weight <w> [value <v>]` per line.
    #[arg(long)]
    request: PathBuf,
    #[arg(long, default_value = "drsrd", value_parser = parse_algorithm)]
    algo: Algorithm,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegisterArgs {
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    #[arg(long)]
    repo: PathBuf,
    #[arg(long)]
    id: String,
    /// `property=value`; an empty value records the property as unknown.
    #[arg(long = "value")]
    values: Vec<String>,
}

#[derive(Debug, Args)]
struct DeregisterArgs {
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    #[arg(long)]
    repo: PathBuf,
    #[arg(long)]
    id: String,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[command(flatten)]
    taxonomy: TaxonomyArg,
    #[arg(long, default_value_t = 1.0)]
    certainty: f64,
    #[arg(long, default_value_t = 50)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_delimiter = ',', default_value = "drsrd,classic,exact", value_parser = parse_algorithm)]
    algos: Vec<Algorithm>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 1000)]
    resources: usize,
    #[command(flatten)]
    common: ExperimentArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "500,1000,2000")]
    resources: Vec<usize>,
    #[command(flatten)]
    common: ExperimentArgs,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: drsrd_core::Error| e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|source| SimError::Io {
            context: format!("creating {}", p.display()),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| SimError::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

fn run_match(args: MatchArgs) -> Result<()> {
    let tax = args.taxonomy.load()?;
    let repo = Repository::load(&args.repo, &tax)?;
    let request = ResourceRequest::parse(&read_to_string(&args.request)?)?;
    let properties: Vec<&str> = tax.properties().iter().map(|p| p.name.as_str()).collect();
    let table = repo.to_information_table(&properties)?;
    let results = discover(&tax, &table, &request, args.algo, args.threshold)?;
    let mut w = csv::Writer::from_writer(output(args.out.as_deref())?);
    w.write_record(["rank", "resource", "degree"])?;
    for r in results {
        w.write_record([r.rank.to_string(), r.resource.to_string(), format!("{:.6}", r.degree)])?;
    }
    w.flush().map_err(|source| SimError::Io {
        context: "writing results".into(),
        source,
    })
}

fn run_register(args: RegisterArgs) -> Result<()> {
    let tax = args.taxonomy.load()?;
    let mut values = Vec::with_capacity(args.values.len());
    for pair in &args.values {
        let (name, raw) = pair
            .split_once('=')
            .ok_or_else(|| SimError::Config(format!("expected property=value, got {pair:?}")))?;
        let def = tax.property_def(tax.property(name)?);
        let value = def
            .value_type
            .parse_value(raw)
            .map_err(|e| SimError::Config(format!("{name}: {e}")))?;
        values.push((name.to_owned(), value));
    }
    let record = ResourceRecord::new(args.id, values)?;
    Repository::open_or_create(&args.repo, &tax)?.register(&tax, record)?;
    Ok(())
}

fn run_deregister(args: DeregisterArgs) -> Result<()> {
    let tax = args.taxonomy.load()?;
    Repository::load(&args.repo, &tax)?.deregister(&tax, &args.id)?;
    Ok(())
}

fn config(resources: usize, common: &ExperimentArgs) -> GeneratorConfig {
    GeneratorConfig {
        resource_count: resources,
        certainty: common.certainty,
        query_count: common.queries,
        seed: common.seed,
        threshold: common.threshold,
    }
}

fn run_experiments(sizes: &[usize], common: &ExperimentArgs, per_query: bool) -> Result<()> {
    let tax = common.taxonomy.load()?;
    let reports = sizes
        .iter()
        .map(|&n| run_precision_experiment(&tax, &config(n, common), &common.algos))
        .collect::<Result<Vec<_>>>()?;
    write_csv(output(common.out.as_deref())?, &reports, per_query)
}

/// Parses `argv` (including the program name) and runs the command. Returns
/// the process exit status; diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Match(a) => run_match(a),
        Command::Register(a) => run_register(a),
        Command::Deregister(a) => run_deregister(a),
        Command::Simulate(a) => run_experiments(&[a.resources], &a.common, true),
        Command::Bench(a) => run_experiments(&a.resources, &a.common, false),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("drsrd: {e}");
            1
        }
    }
}
