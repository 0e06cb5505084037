//! `lrc`: construct, verify and transform locally repairable codes from the
//! command line. Codes travel between subcommands as JSON code files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lrc_core::code_core::{BUDGET_MESSAGES_ENV, BUDGET_SUBSETS_ENV};
use lrc_core::construct::{greedy_lrc_with_plan, write_monte_carlo_csv};
use lrc_core::{
    compute_z, d_opt, distance_bound, enlarge, has_all_symbol_locality, minimum_distance, monte_carlo,
    partition_lengths, puncture, random_lrc, Budget, CodeDocument, Construction, ConstructionConfig, DeepHoleStrategy,
    EnlargeOptions, FieldSpec, GroupPlan, LrcParams,
};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "lrc",
    version,
    about = "Linear locally repairable codes: construction, verification, transforms"
)]
pub struct Cli {
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Most messages enumerated for a minimum distance.
    #[arg(long, global = true, env = BUDGET_MESSAGES_ENV)]
    pub budget_messages: Option<u64>,
    /// Most subsets enumerated by locality and selection checks.
    #[arg(long, global = true, env = BUDGET_SUBSETS_ENV)]
    pub budget_subsets: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let default = Budget::default();
        Budget {
            messages: self.budget_messages.unwrap_or(default.messages),
            subsets: self.budget_subsets.unwrap_or(default.subsets),
        }
    }
}

#[derive(Debug, Args)]
pub struct CodeParams {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub delta: usize,
    /// Group sizes; defaults to full groups plus a remainder group.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
}

impl CodeParams {
    fn params(&self) -> lrc_core::Result<LrcParams> {
        LrcParams::new(self.n, self.k, self.r, self.delta)
    }

    /// Sizes summing to less than `n` leave the rest as zero columns, which
    /// must number fewer than `delta`.
    fn plan(&self) -> lrc_core::Result<GroupPlan> {
        let Some(sizes) = &self.sizes else {
            return partition_lengths(self.n, self.k, self.r, self.delta);
        };
        let total: usize = sizes.iter().sum();
        if total > self.n || self.n - total >= self.delta {
            return Err(lrc_core::Error::InvalidParameters(format!(
                "sizes sum to {total}; need n = {} or within delta - 1 below it",
                self.n
            )));
        }
        GroupPlan::new(sizes.clone(), self.r, self.delta, self.k, self.n - total)
    }
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub code: CodeParams,
    /// Field order, a prime power.
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub max_retries: u32,
    /// Code file to write.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Report file; defaults to the output path with extension `report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random generator with repair columns, retried until verified.
    ConstructRandom(ConstructArgs),
    /// Column-by-column construction keeping capped selections independent.
    ConstructGreedy {
        #[command(flatten)]
        args: ConstructArgs,
        /// Candidate draws per column before an attempt is abandoned.
        #[arg(long, default_value_t = 1_000_000)]
        candidate_limit: u32,
    },
    /// Print n, k, distance, locality and optimality of a code file.
    Verify {
        input: PathBuf,
        /// Locality to check; defaults to the value in the file.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
    },
    /// Print the minimum distance of a code file.
    Distance { input: PathBuf },
    /// Print d_opt and the construction bound for a group plan.
    Bound(CodeParams),
    /// Add one coordinate and one dimension, keeping the distance.
    Enlarge {
        input: PathBuf,
        /// Locality of the input; defaults to the value in the file.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scan every vector for a deep hole instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Keep the subcode vanishing at a coordinate and delete it.
    Puncture {
        input: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Monte Carlo success rates of the random construction per field.
    Experiment {
        #[command(flatten)]
        code: CodeParams,
        /// Field orders.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV file to write.
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] lrc_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.category(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "invalid-parameters",
        }
    }

    /// Distinct per category; 2 is left to argument parsing.
    pub fn exit_code(&self) -> u8 {
        match self.category() {
            "parse" => 2,
            "invalid-parameters" => 3,
            "invalid-input" => 4,
            "budget-exceeded" => 5,
            "retries-exhausted" => 6,
            "verification-failed" => 7,
            "not-found" => 8,
            _ => 9,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_doc(path: &Path) -> Result<CodeDocument, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(CodeDocument::from_text(&text)?)
}

fn write_out(out: &mut dyn Write, text: std::fmt::Arguments) -> Result<(), CliError> {
    out.write_fmt(text).map_err(io_err(Path::new("<stdout>")))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        write_out($out, format_args!("{}\n", format_args!($($arg)*)))?
    };
}

fn list(values: &[usize]) -> String {
    format!(
        "[{}]",
        values.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
    )
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let budget = cli.budget.budget();
    match cli.command {
        Command::ConstructRandom(args) => construct(&args, None, &budget, out),
        Command::ConstructGreedy { args, candidate_limit } => construct(&args, Some(candidate_limit), &budget, out),
        Command::Verify { input, r, delta } => verify(&input, r, delta, &budget, out),
        Command::Distance { input } => {
            let doc = read_doc(&input)?;
            say!(out, "d = {}", minimum_distance(&doc.code, &budget)?);
            Ok(())
        }
        Command::Bound(code) => bound(&code, out),
        Command::Enlarge {
            input,
            r,
            seed,
            exhaustive,
            output,
        } => {
            let doc = read_doc(&input)?;
            let r = r
                .or(doc.r)
                .ok_or_else(|| CliError::Usage("no r in the file; pass --r".into()))?;
            if doc.delta.is_some_and(|d| d != 2) {
                return Err(CliError::Usage("enlarging needs delta = 2".into()));
            }
            let options = EnlargeOptions {
                strategy: exhaustive.then_some(DeepHoleStrategy::Exhaustive),
                seed,
                hint: doc.structure.clone().filter(|s| s.r == r),
                budget,
            };
            let (code, report) = enlarge(&doc.code, r, &options)?;
            let mut result = CodeDocument::new(code);
            result.r = Some(report.r);
            result.delta = Some(2);
            result.write(&output).map_err(io_err(&output))?;
            say!(out, "n = {}", report.n);
            say!(out, "k = {}", report.k);
            say!(out, "d = {}", report.distance);
            say!(out, "r = {}", report.r);
            say!(out, "wrote {}", output.display());
            Ok(())
        }
        Command::Puncture { input, coord, output } => {
            let doc = read_doc(&input)?;
            let code = puncture(&doc.code, coord)?;
            say!(out, "n = {}", code.n());
            say!(out, "k = {}", code.k());
            match minimum_distance(&code, &budget) {
                Ok(d) => say!(out, "d = {d}"),
                Err(e @ lrc_core::Error::BudgetExceeded { .. }) => say!(out, "d = not computed ({e})"),
                Err(e) => return Err(e.into()),
            }
            let mut result = CodeDocument::new(code);
            result.r = doc.r;
            result.delta = doc.delta;
            result.write(&output).map_err(io_err(&output))?;
            say!(out, "wrote {}", output.display());
            Ok(())
        }
        Command::Experiment {
            code,
            q,
            trials,
            seed,
            output,
        } => {
            let params = code.params()?;
            let plan = code.plan()?;
            let fields = q
                .iter()
                .map(|&q| FieldSpec::with_order(q))
                .collect::<lrc_core::Result<Vec<_>>>()?;
            let rows = monte_carlo(&params, &plan, &fields, trials, seed, &budget)?;
            let file = fs::File::create(&output).map_err(io_err(&output))?;
            write_monte_carlo_csv(&rows, io::BufWriter::new(file)).map_err(io_err(&output))?;
            for row in &rows {
                say!(
                    out,
                    "q = {}: {}/{} successes, rate {:.4}",
                    row.q,
                    row.successes,
                    row.trials,
                    row.rate
                );
            }
            say!(out, "wrote {}", output.display());
            Ok(())
        }
    }
}

fn construct(
    args: &ConstructArgs,
    candidate_limit: Option<u32>,
    budget: &Budget,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = args.code.params()?;
    let plan = args.code.plan()?;
    let field = FieldSpec::with_order(args.q)?;
    let mut config = ConstructionConfig {
        seed: args.seed,
        max_retries: args.max_retries,
        budget: *budget,
        ..Default::default()
    };
    let Construction {
        code,
        structure,
        report,
    } = match candidate_limit {
        None => random_lrc(&params, &plan, &field, &config)?,
        Some(limit) => {
            config.candidate_limit = limit;
            greedy_lrc_with_plan(&params, &plan, &field, &config)?
        }
    };
    CodeDocument::with_structure(code, structure)
        .write(&args.output)
        .map_err(io_err(&args.output))?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| args.output.with_extension("report.json"));
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    fs::write(&report_path, json).map_err(io_err(&report_path))?;
    say!(out, "method = {}", report.method);
    say!(out, "plan = {}", list(&report.group_sizes));
    say!(out, "d = {}", report.achieved_distance);
    say!(out, "bound = {}", report.distance_bound);
    say!(out, "d_opt = {}", report.d_opt);
    say!(out, "optimal = {}", report.is_optimal);
    say!(out, "attempts = {}", report.attempts);
    say!(out, "wrote {} and {}", args.output.display(), report_path.display());
    Ok(())
}

fn bound(code: &CodeParams, out: &mut dyn Write) -> Result<(), CliError> {
    code.params()?;
    let plan = code.plan()?;
    let z = compute_z(&plan, code.k).z;
    say!(out, "d_opt = {}", d_opt(code.n, code.k, code.r, code.delta)?);
    say!(out, "plan = {}", list(plan.sizes()));
    if plan.zero_columns() > 0 {
        say!(out, "zero_columns = {}", plan.zero_columns());
    }
    say!(out, "z = {z}");
    say!(
        out,
        "bound = {}",
        distance_bound(plan.coded_length(), code.k, code.delta, z)
    );
    Ok(())
}

fn verify(
    input: &Path,
    r: Option<usize>,
    delta: Option<usize>,
    budget: &Budget,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = read_doc(input)?;
    let code = &doc.code;
    say!(out, "field = {}", code.field());
    say!(out, "n = {}", code.n());
    say!(out, "k = {}", code.k());
    let distance = match minimum_distance(code, budget) {
        Ok(d) => {
            say!(out, "d = {d}");
            Some(d)
        }
        Err(e @ lrc_core::Error::BudgetExceeded { .. }) => {
            say!(out, "d = not computed ({e})");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let (Some(r), Some(delta)) = (r.or(doc.r), delta.or(doc.delta)) else {
        say!(out, "locality = not checked (no r and delta)");
        return Ok(());
    };
    let hint = doc.structure.as_ref().filter(|s| s.r == r && s.delta == delta);
    let verdict = has_all_symbol_locality(code, r, delta, hint, budget)?;
    let how = if hint.is_some() { "stored groups" } else { "search" };
    say!(
        out,
        "locality ({r}, {delta}) = {} ({how})",
        if verdict.holds { "holds" } else { "violated" }
    );
    let bound = d_opt(code.n(), code.k(), r.min(code.k()), delta)?;
    say!(out, "d_opt = {bound}");
    if let Some(d) = distance {
        let gap = bound - d as i64;
        say!(out, "gap = {gap}");
        say!(out, "optimal = {}", gap == 0);
    }
    if let Some(s) = hint {
        let plan = GroupPlan::new(s.group_sizes(), r, delta, code.k(), s.zero_columns.len())?;
        let z = compute_z(&plan, code.k()).z;
        let construction_bound = distance_bound(plan.coded_length(), code.k(), delta, z);
        say!(out, "construction bound = {construction_bound}");
        if let Some(d) = distance {
            say!(out, "construction bound holds = {}", d as i64 >= construction_bound);
        }
    }
    Ok(())
}
