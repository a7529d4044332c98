use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crossworld::config::{load_config, OutputFormat, RunConfig};
use crossworld::core::bounds::{bounds_from_data, compute_nde_bounds};
use crossworld::core::gformula::{cell_statistics, gformula_from_cells, gformula_standard_errors};
use crossworld::core::grid::{evaluate_quadrature, figure5_for_grid, summarize_bias, GridMethod, GridSpec, EXTREME_PARAMETERS};
use crossworld::core::lsem::{fit_lsem, lsem_effects};
use crossworld::core::model::{
    mc_interventional_effects, mc_separable_effects, project_factual, simulate_units, ModelConfig, OutcomeKind,
};
use crossworld::core::oracle::{bounds_input_from_report, Oracle};
use crossworld::{io, report, runner, CliError, Result};

#[derive(Parser)]
#[command(name = "crossworld", version, about = "Natural effects, g-formula bias and bounds under cross-world confounding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Input data file.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Sample size, or units per setting for Monte Carlo grids.
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Random seed, or base seed for grids.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    method: Option<Method>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json-lines.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quadrature,
    MonteCarlo,
    Interventional,
    Separable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Outcome {
    Binary,
    Continuous,
}

impl From<Outcome> for OutcomeKind {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Binary => OutcomeKind::Binary,
            Outcome::Continuous => OutcomeKind::Continuous,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a factual dataset from the model (or LSEM) in the config.
    Simulate {
        /// Append simulation-only cf_ columns.
        #[arg(long)]
        counterfactuals: bool,
    },
    /// Population effects of the configured model.
    Truth,
    /// Mediational g-formula estimates from --data or a simulated sample.
    Estimate,
    /// NDE bounds from binary --data or from the configured population.
    Bounds,
    /// Fit the linear structural model and report its effects.
    Lsem,
    /// Audit the identification assumptions on simulated counterfactuals.
    Audit,
    /// Evaluate a parameter grid and write one row per setting.
    Grid {
        /// Default grid to use when the config has no grid section.
        #[arg(long, value_enum)]
        outcome: Option<Outcome>,
    },
    /// Summarise grid rows from --data, with the worst-case table.
    Summarize {
        #[arg(long, value_enum)]
        outcome: Option<Outcome>,
        /// Re-evaluate the k most biased settings by Monte Carlo.
        #[arg(long)]
        confirm: Option<usize>,
    },
    /// Bias along a beta5 sweep at the worst-case setting of --data rows.
    Figure5 {
        #[arg(long, value_enum)]
        outcome: Option<Outcome>,
        /// Sweep points.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

struct Ctx {
    config: RunConfig,
    data: Option<PathBuf>,
    n: Option<u64>,
    seed: Option<u64>,
    method: Option<Method>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    format: OutputFormat,
}

impl Ctx {
    fn new(common: Common) -> Result<Self> {
        let config = match &common.config {
            Some(p) => load_config(p)?,
            None => RunConfig::default(),
        };
        let format = match &common.format {
            Some(f) => f.parse()?,
            None => config.run.format,
        };
        let ctx = Ctx {
            data: common.data.or_else(|| config.run.data.clone()),
            n: common.n.or(config.run.n),
            seed: common.seed.or(config.run.seed),
            method: common.method,
            jobs: common.jobs.or(config.run.jobs),
            out: common.out.or_else(|| config.run.out.clone()),
            format,
            config,
        };
        if let Some(p) = &ctx.data {
            if !p.exists() {
                return Err(CliError::MissingPath(p.clone()));
            }
        }
        Ok(ctx)
    }

    fn model(&self) -> Result<ModelConfig> {
        self.config.model.ok_or_else(|| CliError::Usage("this command needs a \"model\" section in --config".into()))
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn jobs(&self) -> usize {
        self.jobs.unwrap_or(0)
    }

    fn n_or(&self, default: u64) -> u64 {
        self.n.unwrap_or(default)
    }

    fn output(&self) -> Result<Box<dyn Write>> {
        io::open_output(self.out.as_deref())
    }

    fn grid_spec(&self, outcome: Option<Outcome>, fallback: OutcomeKind) -> Result<GridSpec> {
        let mut spec = match (&self.config.grid, outcome) {
            (Some(g), None) => g.clone(),
            (Some(g), Some(o)) if g.outcome_kind() == OutcomeKind::from(o) => g.clone(),
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--outcome disagrees with the grid section of --config".into()))
            }
            (None, o) => GridSpec::default_for(o.map_or(fallback, Into::into)),
        };
        match self.method {
            Some(Method::Quadrature) => spec.method = GridMethod::Quadrature,
            Some(Method::MonteCarlo) => spec.method = GridMethod::MonteCarlo,
            Some(_) => return Err(CliError::Usage("grids support --method quadrature or monte-carlo".into())),
            None => {}
        }
        if let Some(n) = self.n {
            spec.mc_n = n;
        }
        if let Some(seed) = self.seed {
            spec.base_seed = seed;
        }
        if let Some(jobs) = self.jobs {
            spec.parallelism = jobs;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn simulate(ctx: &Ctx, counterfactuals: bool) -> Result<()> {
    let n = ctx.n_or(10_000);
    let counterfactuals = counterfactuals || ctx.config.run.counterfactuals;
    let mut out = ctx.output()?;
    if ctx.config.model.is_none() {
        if let Some(lsem) = &ctx.config.lsem {
            return io::write_lsem_dataset(&mut out, &lsem.simulate(n, ctx.seed()), ctx.format);
        }
    }
    let cfg = ctx.model()?;
    let units = simulate_units(&cfg, n, ctx.seed());
    let a = crossworld::core::model::assignments(n, ctx.seed());
    let rows: Vec<_> = units.iter().zip(&a).map(|(u, &a)| project_factual(u, a)).collect();
    io::write_dataset(&mut out, &rows, counterfactuals.then_some(&units[..]), ctx.format)
}

fn truth(ctx: &Ctx) -> Result<()> {
    let cfg = ctx.model()?;
    let mut out = ctx.output()?;
    match ctx.method.unwrap_or(Method::Quadrature) {
        Method::Quadrature => report::write_oracle(&mut out, &Oracle::default().report(&cfg)?)?,
        Method::MonteCarlo => {
            let (truth, _) = runner::simulate(&cfg, ctx.n_or(1_000_000), ctx.seed(), ctx.jobs())?;
            report::write_effects(&mut out, &truth)?;
        }
        Method::Interventional => {
            let e = mc_interventional_effects(&cfg, ctx.n_or(1_000_000), ctx.seed())?;
            report::write_interventional(&mut out, &e)?;
        }
        Method::Separable => {
            let n = ctx.n_or(1_000_000);
            for a_y in 0..2u8 {
                for a_m in 0..2u8 {
                    let v = mc_separable_effects(&cfg, a_y, a_m, n, ctx.seed())?;
                    writeln!(out, "ey_ay{a_y}_am{a_m}={v}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn estimate(ctx: &Ctx) -> Result<()> {
    let cells = match &ctx.data {
        Some(p) => cell_statistics(&io::read_dataset(p)?)?,
        None => runner::simulate(&ctx.model()?, ctx.n_or(1_000_000), ctx.seed(), ctx.jobs())?.1,
    };
    let mut est = gformula_from_cells(&cells)?;
    est.mc_se = Some(gformula_standard_errors(&cells)?);
    let mut out = ctx.output()?;
    report::write_effects(&mut out, &est)?;
    report::write_cells(&mut out, &cells)?;
    out.flush()?;
    Ok(())
}

fn bounds(ctx: &Ctx) -> Result<()> {
    let mut out = ctx.output()?;
    match &ctx.data {
        Some(p) => report::write_bounds(&mut out, &bounds_from_data(&io::read_dataset(p)?)?)?,
        None => {
            let cfg = ctx.model()?;
            let r = Oracle::default().report(&cfg)?;
            let b = compute_nde_bounds(&bounds_input_from_report(&cfg, &r)?)?;
            report::write_bounds(&mut out, &b)?;
            writeln!(out, "true_nde={}", r.truth.nde)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn lsem(ctx: &Ctx) -> Result<()> {
    let mut out = ctx.output()?;
    let (data, model) = match &ctx.data {
        Some(p) => (io::read_lsem_dataset(p)?, None),
        None => {
            let model = ctx
                .config
                .lsem
                .ok_or_else(|| CliError::Usage("lsem needs --data or an \"lsem\" section in --config".into()))?;
            (model.simulate(ctx.n_or(100_000), ctx.seed()), Some(model))
        }
    };
    let coef = fit_lsem(&data)?;
    report::write_lsem(&mut out, &coef, &lsem_effects(&coef, 1.0, 0.0))?;
    if let Some(model) = model {
        let mc = model.mc_effects(ctx.n_or(100_000), ctx.seed())?;
        writeln!(out, "simulated_nde={}", mc.nde)?;
        writeln!(out, "simulated_nie={}", mc.nie)?;
    }
    out.flush()?;
    Ok(())
}

fn audit(ctx: &Ctx) -> Result<()> {
    let r = runner::audit(&ctx.model()?, ctx.n_or(1_000_000), ctx.seed(), ctx.jobs())?;
    let mut out = ctx.output()?;
    report::write_audit(&mut out, &r)?;
    out.flush()?;
    Ok(())
}

fn grid(ctx: &Ctx, outcome: Option<Outcome>) -> Result<()> {
    let spec = ctx.grid_spec(outcome, OutcomeKind::Binary)?;
    eprintln!("evaluating {} settings by {}", spec.size(), spec.method.as_str());
    let start = Instant::now();
    let rows = runner::run_grid(&spec)?;
    eprintln!("done in {:.1} s", start.elapsed().as_secs_f64());
    let mut out = ctx.output()?;
    io::write_grid_rows(&mut out, &rows, ctx.format)
}

fn rows_kind(rows: &[crossworld::core::grid::GridResultRow]) -> OutcomeKind {
    if rows.iter().any(|r| r.bounds_lower.is_some()) {
        OutcomeKind::Binary
    } else {
        OutcomeKind::Continuous
    }
}

fn read_rows(ctx: &Ctx) -> Result<Vec<crossworld::core::grid::GridResultRow>> {
    let path = ctx.data.as_ref().ok_or_else(|| CliError::Usage("--data must name a grid rows CSV".into()))?;
    io::read_grid_rows(path)
}

fn summarize(ctx: &Ctx, outcome: Option<Outcome>, confirm: Option<usize>) -> Result<()> {
    let rows = read_rows(ctx)?;
    let spec = ctx.grid_spec(outcome, rows_kind(&rows))?;
    let summary = summarize_bias(&rows)?;
    let extreme = match spec.outcome_kind() {
        OutcomeKind::Binary => {
            let mut cfg = ModelConfig::from_params(OutcomeKind::Binary, EXTREME_PARAMETERS);
            cfg.u_mean = spec.base.u_mean;
            cfg.u_sd = spec.base.u_sd;
            let oracle = Oracle::new(spec.quadrature_nodes)?;
            Some(evaluate_quadrature(&oracle, &cfg, 0)?)
        }
        OutcomeKind::Continuous => None,
    };
    let k = confirm.unwrap_or(ctx.config.confirm_top_k);
    let confirmations = if k > 0 {
        let mut mc_spec = spec.clone();
        mc_spec.method = GridMethod::MonteCarlo;
        eprintln!("confirming {k} settings by simulation at n={}", mc_spec.mc_n);
        let evals = runner::confirm_top_k(&mc_spec, &rows, k)?;
        runner::top_k_indices(&rows, k).into_iter().map(|i| rows[i]).zip(evals).collect()
    } else {
        Vec::new()
    };
    let mut out = ctx.output()?;
    report::write_summary(&mut out, &summary, extreme.as_ref(), &confirmations)?;
    out.flush()?;
    Ok(())
}

fn figure5(ctx: &Ctx, outcome: Option<Outcome>, points: usize) -> Result<()> {
    let rows = read_rows(ctx)?;
    let spec = ctx.grid_spec(outcome, rows_kind(&rows))?;
    let summary = summarize_bias(&rows)?;
    let pts = figure5_for_grid(&spec, &summary, points)?;
    let mut out = ctx.output()?;
    io::write_figure5(&mut out, &pts, ctx.format)
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx::new(cli.common)?;
    match cli.command {
        Command::Simulate { counterfactuals } => simulate(&ctx, counterfactuals),
        Command::Truth => truth(&ctx),
        Command::Estimate => estimate(&ctx),
        Command::Bounds => bounds(&ctx),
        Command::Lsem => lsem(&ctx),
        Command::Audit => audit(&ctx),
        Command::Grid { outcome } => grid(&ctx, outcome),
        Command::Summarize { outcome, confirm } => summarize(&ctx, outcome, confirm),
        Command::Figure5 { outcome, points } => figure5(&ctx, outcome, points),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
