use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ldwait::exactseries;
use ldwait::laplace;
use ldwait::objective::DEFAULT_BETA;
use ldwait::process::{self, ProcessParams};
use ldwait::rate::{self, RatePoint};

mod output;

use output::{Cell, Format, OutputRecord, Schema};

/// Upper end of the accepted q range.
const Q_LIMIT: f64 = 1e4;
/// Refuse q grids that would print more rows than this.
const MAX_ROWS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "ldwait",
    version,
    about = "Waiting-time ratio large deviations for Bernoulli processes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rate function I_p(q) and its derivatives at one q or over a grid.
    Rate(RateArgs),
    /// Rate curves for several p, as plotted against q.
    PlotData(PlotArgs),
    /// Exact ln P(z_{n+1}/Z_n > q) from the series.
    Exact(ExactArgs),
    /// a_n = -ln P_n / n for n = 1..n_max against I_p(q).
    Converge(ConvergeArgs),
    /// Monte Carlo estimate next to the exact probability.
    Mc(McArgs),
    /// Laplace approximation of the smooth series.
    Laplace(LaplaceArgs),
}

#[derive(Args, Debug)]
struct QGrid {
    /// Single value of q.
    #[arg(long, conflicts_with_all = ["q_min", "q_max", "step"])]
    q: Option<f64>,
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    #[command(flatten)]
    grid: QGrid,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_probability, default_value = "0.1,0.3,0.5,0.7")]
    p_list: Vec<f64>,
    /// Defaults to the step.
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long, default_value_t = 8.0)]
    q_max: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    n_max: u64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Probability of the marked symbol (geometric waiting times).
    #[arg(long, value_parser = parse_probability, required_unless_present = "alphabet")]
    p: Option<f64>,
    /// Full probability vector; waits are measured between occurrences of --marked.
    #[arg(long, value_delimiter = ',', conflicts_with = "p", requires = "marked")]
    alphabet: Option<Vec<f64>>,
    #[arg(long, requires = "alphabet")]
    marked: Option<usize>,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of independent RNG streams; fixes the result regardless of thread count.
    #[arg(long, default_value_t = 64)]
    streams: u32,
}

#[derive(Args, Debug)]
struct LaplaceArgs {
    #[arg(long, value_parser = parse_probability)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(format!("p must lie in (0, 1), got {s}"))
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(ldwait::Error),
    Io(io::Error),
}

impl From<ldwait::Error> for Failure {
    fn from(e: ldwait::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(ldwait::Error::Domain(_) | ldwait::Error::NoInteriorMaximum(_)) => 2,
            Failure::Lib(_) | Failure::Io(_) => 3,
        }
    }
}

fn check_q(q: f64) -> Result<(), Failure> {
    if q.is_finite() && q > 0.0 && q <= Q_LIMIT {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "q must lie in (0, {Q_LIMIT}], got {q}"
        )))
    }
}

fn q_values(q_min: f64, q_max: f64, step: f64) -> Result<Vec<f64>, Failure> {
    check_q(q_min)?;
    check_q(q_max)?;
    if q_min > q_max {
        return Err(Failure::Usage(format!(
            "--q-min {q_min} exceeds --q-max {q_max}"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Failure::Usage(format!(
            "--step must be positive, got {step}"
        )));
    }
    // tolerate rounding in (q_max - q_min) / step so the end point is kept
    let count = ((q_max - q_min) / step + 1e-9).floor() + 1.0;
    if count > MAX_ROWS as f64 {
        return Err(Failure::Usage(format!(
            "grid has {count} points, limit is {MAX_ROWS}"
        )));
    }
    Ok((0..count as usize)
        .map(|i| q_min + i as f64 * step)
        .collect())
}

fn grid_values(grid: &QGrid) -> Result<Vec<f64>, Failure> {
    match (grid.q, grid.q_min, grid.q_max, grid.step) {
        (Some(q), ..) => {
            check_q(q)?;
            Ok(vec![q])
        }
        (None, Some(lo), Some(hi), Some(step)) => q_values(lo, hi, step),
        _ => Err(Failure::Usage(
            "give either --q or all of --q-min, --q-max and --step".into(),
        )),
    }
}

fn rate_rows(rec: &mut OutputRecord, p: f64, qs: &[f64]) -> Result<(), Failure> {
    for &q in qs {
        let ev = rate::evaluate(RatePoint::new(p, q)?);
        let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
        rec.push(vec![
            p.into(),
            q.into(),
            opt(ev.big_c).into(),
            ev.rate.into(),
            opt(ev.rate_prime).into(),
            opt(ev.rate_second).into(),
            ev.asymptote.into(),
        ]);
    }
    Ok(())
}

fn convergence_row(p: f64, q: f64, n: u64, log_prob: f64) -> Result<Vec<Cell>, Failure> {
    let i = rate::rate_i(RatePoint::new(p, q)?);
    let a_n = -log_prob / n as f64;
    Ok(vec![
        n.into(),
        log_prob.into(),
        a_n.into(),
        i.into(),
        (a_n - i).into(),
    ])
}

fn run(command: Command) -> Result<OutputRecord, Failure> {
    match command {
        Command::Rate(a) => {
            let qs = grid_values(&a.grid)?;
            let mut rec = OutputRecord::new(Schema::RateCurve);
            rate_rows(&mut rec, a.p, &qs)?;
            Ok(rec)
        }
        Command::PlotData(a) => {
            let qs = q_values(a.q_min.unwrap_or(a.step), a.q_max, a.step)?;
            let mut rec = OutputRecord::new(Schema::RateCurve);
            for &p in &a.p_list {
                rate_rows(&mut rec, p, &qs)?;
            }
            Ok(rec)
        }
        Command::Exact(a) => {
            check_q(a.q)?;
            let res = exactseries::exact_log_prob(a.p, a.q, a.n, a.rel_tol)?;
            if !res.converged {
                return Err(ldwait::Error::Numerical(format!(
                    "series stopped after {} terms without reaching rel_tol {}",
                    res.terms_used, a.rel_tol
                ))
                .into());
            }
            let mut rec = OutputRecord::new(Schema::Convergence);
            rec.push(convergence_row(a.p, a.q, a.n, res.log_prob)?);
            Ok(rec)
        }
        Command::Converge(a) => {
            check_q(a.q)?;
            let table = exactseries::convergence_table(a.p, a.q, a.n_max, a.rel_tol)?;
            let mut rec = OutputRecord::new(Schema::Convergence);
            for row in table {
                rec.push(convergence_row(a.p, a.q, row.n, row.log_prob)?);
            }
            Ok(rec)
        }
        Command::Mc(a) => {
            check_q(a.q)?;
            let params = match (a.p, a.alphabet) {
                (Some(p), None) => ProcessParams::geometric(p)?,
                (None, Some(probs)) => ProcessParams::alphabet(probs, a.marked.unwrap_or(0))?,
                _ => {
                    return Err(Failure::Usage(
                        "give exactly one of --p and --alphabet".into(),
                    ))
                }
            };
            let p = params.p();
            let est = process::estimate(&params, a.q, a.n, a.samples, a.seed, a.streams)?;
            let exact = exactseries::exact_log_prob(p, a.q, a.n, 1e-12)?;
            let mut rec = OutputRecord::new(Schema::McVsExact);
            rec.push(vec![
                p.into(),
                a.q.into(),
                a.n.into(),
                est.samples.into(),
                est.hits.into(),
                est.estimate.into(),
                est.ci_low.into(),
                est.ci_high.into(),
                exact.log_prob.exp().into(),
                est.seed.into(),
                u64::from(est.streams).into(),
            ]);
            Ok(rec)
        }
        Command::Laplace(a) => {
            check_q(a.q)?;
            let approx = laplace::approx_objective(a.p, a.q, a.n, a.beta)?;
            if let Some(w) = &approx.laplace.warning {
                eprintln!("warning: {w}");
            }
            let series = exactseries::smooth_log_prob(a.p, a.q, a.n, 1e-13)?;
            let l = &approx.laplace;
            let mut rec = OutputRecord::new(Schema::LaplaceCheck);
            rec.push(vec![
                l.x_star.into(),
                l.sigma.into(),
                l.delta.into(),
                approx.log_value.into(),
                series.log_prob.into(),
                (approx.log_value - series.log_prob).exp().into(),
            ]);
            Ok(rec)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("LDWAIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "LDWAIT_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Lib(ldwait::Error::Numerical(format!("thread pool: {e}"))))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads()
        .and_then(|()| run(cli.command))
        .and_then(|rec| {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            rec.write(cli.format, &mut out)
                .and_then(|()| out.flush())
                .map_err(Failure::Io)
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: writing output: {e}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
