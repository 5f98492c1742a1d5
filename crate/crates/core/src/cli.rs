//! The `womkit` command line.
//!
//! Every command builds one or more [`OutputTable`]s; the binary only
//! parses arguments, calls [`run`] and writes the result.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::{
    capacity, capacity_ratio_limit, compose_density, mutual_info, optimal_output_density,
    optimal_punch, shrinkage,
};
use crate::equivalence::{
    effective_capacity, incremental_plan, mu_family_curve, run_ledger, EffectiveState,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::game::{equilibrium, race};
use crate::mcsim::{derive_seed, run_stages_from, sample_tape};
use crate::numeric::linspace;
use crate::output::{Cell, Format, OutputTable, Units};
use crate::specialfn::{InfoQuantity, Probability};

fn parse_probability(s: &str) -> std::result::Result<Probability, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    Probability::new(v).map_err(|_| format!("`{s}` is not a probability in [0, 1]"))
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite and positive"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "womkit", version, about = "Capacity of used write-once tape")]
pub struct Cli {
    /// Units for information-valued columns.
    #[arg(long, global = true, value_enum, default_value_t = Units::Bits)]
    pub units: Units,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Digits after the decimal point.
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u8).range(0..=17))]
    pub precision: u8,

    /// Base seed for simulations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Output hole density p′ = 1 − (1−p)(1−q).
    Compose {
        #[arg(value_parser = parse_probability)]
        p: Probability,
        #[arg(value_parser = parse_probability)]
        q: Probability,
    },
    /// Mutual information of one stage at hole density p and punch density q.
    Mi {
        #[arg(value_parser = parse_probability)]
        p: Probability,
        #[arg(value_parser = parse_probability)]
        q: Probability,
    },
    /// Channel capacity at hole density p.
    Capacity {
        #[arg(value_parser = parse_probability)]
        p: Probability,
    },
    /// Capacity-achieving punch density.
    Qhat {
        #[arg(value_parser = parse_probability)]
        p: Probability,
    },
    /// Output density after capacity-achieving use.
    Popt {
        #[arg(value_parser = parse_probability)]
        p: Probability,
    },
    /// Capacity shrinkage after one full-capacity use.
    Shrink {
        #[arg(value_parser = parse_probability)]
        p: Probability,
    },
    /// Effective capacity Li₂(1 − p).
    Effective {
        #[arg(value_parser = parse_probability)]
        p: Probability,
    },
    /// Heavy-use limit of ΔI/C as a function of q.
    RatioLimit {
        #[arg(value_parser = parse_probability)]
        q: Probability,
    },
    /// Curve tables for plotting.
    Curve(CurveArgs),
    /// Selfish-reuse arms race and its equilibrium.
    Wars(WarsArgs),
    /// Monte Carlo run of blind punching stages.
    Simulate(SimulateArgs),
    /// Effective-length bookkeeping over a sequence of stages.
    Ledger(LedgerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Mi,
    Capacity,
    Qhat,
    Shrink,
    Effective,
    Mufam,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(value_enum)]
    pub kind: CurveKind,

    /// Hole densities for the `mi` and `mufam` families (comma separated or repeated).
    #[arg(long = "p", value_delimiter = ',', value_parser = parse_probability)]
    pub p_values: Vec<Probability>,

    /// Grid points along the running parameter.
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..=10_000_000))]
    pub samples: u32,
}

#[derive(Debug, Args)]
pub struct WarsArgs {
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
    pub tol: f64,

    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iters: u32,

    /// Starting punch density of the race.
    #[arg(long, default_value = "0.5", value_parser = parse_probability)]
    pub p0: Probability,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Cells on the simulated tape.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..=1_000_000_000))]
    pub n: u64,

    /// Initial hole density.
    #[arg(long, default_value = "0", value_parser = parse_probability)]
    pub p: Probability,

    /// Punch density of each stage (comma separated or repeated).
    #[arg(long = "q", value_delimiter = ',', value_parser = parse_probability)]
    pub q_list: Vec<Probability>,
}

#[derive(Debug, Args)]
pub struct LedgerArgs {
    /// Tape length in cells.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub length: u64,

    /// Initial hole density.
    #[arg(long, default_value = "0", value_parser = parse_probability)]
    pub p: Probability,

    /// Punch density of each stage (comma separated or repeated).
    #[arg(long = "q", value_delimiter = ',', value_parser = parse_probability, conflicts_with = "target")]
    pub q_list: Vec<Probability>,

    /// Final hole density of an incremental plan.
    #[arg(long, value_parser = parse_probability, requires = "steps")]
    pub target: Option<Probability>,

    /// Equal hole-density steps of the incremental plan.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10_000_000), requires = "target")]
    pub steps: Option<u32>,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Vec<OutputTable>> {
    let u = cli.units;
    match &cli.command {
        Command::Compose { p, q } => point(
            u,
            "compose",
            &["p", "q", "p_out"],
            vec![(*p).into(), (*q).into(), compose_density(*p, *q).into()],
        ),
        Command::Mi { p, q } => point(
            u,
            "mi",
            &["p", "q", &u.column("mi")],
            vec![
                (*p).into(),
                (*q).into(),
                u.scale(mutual_info(*p, *q)).into(),
            ],
        ),
        Command::Capacity { p } => point(
            u,
            "capacity",
            &["p", &u.column("capacity")],
            vec![(*p).into(), u.scale(capacity(*p)).into()],
        ),
        Command::Qhat { p } => point(
            u,
            "qhat",
            &["p", "qhat"],
            vec![(*p).into(), optimal_punch(*p).into()],
        ),
        Command::Popt { p } => point(
            u,
            "popt",
            &["p", "p_out_opt"],
            vec![(*p).into(), optimal_output_density(*p).into()],
        ),
        Command::Shrink { p } => point(
            u,
            "shrink",
            &["p", "shrinkage"],
            vec![(*p).into(), shrinkage(*p).into()],
        ),
        Command::Effective { p } => point(
            u,
            "effective",
            &["p", &u.column("effective_capacity")],
            vec![(*p).into(), u.scale(effective_capacity(*p)).into()],
        ),
        Command::RatioLimit { q } => point(
            u,
            "ratio-limit",
            &["q", "ratio_limit"],
            vec![(*q).into(), capacity_ratio_limit(*q).into()],
        ),
        Command::Curve(args) => curve(u, args),
        Command::Wars(args) => wars(u, args),
        Command::Simulate(args) => simulate(u, cli.seed, args),
        Command::Ledger(args) => ledger(u, args),
    }
}

fn point(u: Units, name: &str, columns: &[&str], row: Vec<Cell>) -> Result<Vec<OutputTable>> {
    let mut t = OutputTable::new(name, columns.iter().copied(), u);
    t.push(row)?;
    Ok(vec![t])
}

fn prob(x: f64) -> Probability {
    Probability::saturating(x)
}

/// Grid on `[0, 1]` with `extra` merged in, ascending. Returns the grid and
/// which entries came from `extra`.
fn grid_with_marks(samples: usize, extra: &[f64]) -> Vec<(f64, bool)> {
    let mut pts: Vec<(f64, bool)> = linspace(0.0, 1.0, samples)
        .into_iter()
        .map(|x| (x, false))
        .collect();
    for &m in extra {
        match pts.iter_mut().find(|(x, _)| (x - m).abs() <= 1e-12) {
            Some(hit) => hit.1 = true,
            None => pts.push((m, true)),
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

fn curve(u: Units, args: &CurveArgs) -> Result<Vec<OutputTable>> {
    let samples = args.samples as usize;
    let exec = Exec::default();
    let ps = linspace(0.0, 1.0, samples);
    let table = match args.kind {
        CurveKind::Capacity => {
            let mut t =
                OutputTable::new("curve-capacity", ["p".to_string(), u.column("capacity")], u);
            for c in exec
                .map(&ps, |&p| u.scale(capacity(prob(p))))
                .into_iter()
                .zip(&ps)
            {
                t.push(vec![(*c.1).into(), c.0.into()])?;
            }
            t
        }
        CurveKind::Qhat => {
            let mut t = OutputTable::new("curve-qhat", ["p", "qhat", "p_out_opt"], u);
            for &p in &ps {
                let p = prob(p);
                t.push(vec![
                    p.into(),
                    optimal_punch(p).into(),
                    optimal_output_density(p).into(),
                ])?;
            }
            t
        }
        CurveKind::Shrink => {
            let mut t = OutputTable::new("curve-shrink", ["p", "shrinkage"], u);
            for (s, &p) in exec.map(&ps, |&p| shrinkage(prob(p))).into_iter().zip(&ps) {
                t.push(vec![p.into(), s.into()])?;
            }
            t
        }
        CurveKind::Effective => {
            let mut t = OutputTable::new(
                "curve-effective",
                [
                    "p".to_string(),
                    u.column("effective_capacity"),
                    u.column("capacity"),
                ],
                u,
            );
            for &p in &ps {
                let p = prob(p);
                t.push(vec![
                    p.into(),
                    u.scale(effective_capacity(p)).into(),
                    u.scale(capacity(p)).into(),
                ])?;
            }
            t
        }
        CurveKind::Mi => {
            let family = family_or(&args.p_values, &[0.0, 0.25, 0.5, 0.75, 1.0]);
            let mut t = OutputTable::new(
                "curve-mi",
                [
                    "p".to_string(),
                    "q".into(),
                    "p_out".into(),
                    u.column("mi"),
                    "is_max".into(),
                ],
                u,
            )
            .meta("samples", samples);
            for p in family {
                let grid = grid_with_marks(samples, &[optimal_punch(p).get()]);
                let infos = exec.map(&grid, |&(q, _)| u.scale(mutual_info(p, prob(q))));
                for (&(q, marked), info) in grid.iter().zip(infos) {
                    t.push(vec![
                        p.into(),
                        q.into(),
                        compose_density(p, prob(q)).into(),
                        info.into(),
                        marked.into(),
                    ])?;
                }
            }
            t
        }
        CurveKind::Mufam => {
            let family = family_or(&args.p_values, &[0.0, 0.5, 0.75, 1.0]);
            let mut t = OutputTable::new("curve-mufam", ["p", "q", "sigma", "mu", "is_max"], u)
                .meta("samples", samples);
            for p in family {
                let grid = grid_with_marks(samples, &[optimal_punch(p).get()]);
                let qs: Vec<f64> = grid.iter().map(|g| g.0).collect();
                for (s, &(_, marked)) in mu_family_curve(p, &qs, exec).into_iter().zip(&grid) {
                    t.push(vec![
                        p.into(),
                        s.q.into(),
                        s.sigma.into(),
                        s.mu.into(),
                        marked.into(),
                    ])?;
                }
            }
            t
        }
    };
    Ok(vec![table])
}

fn family_or(given: &[Probability], default: &[f64]) -> Vec<Probability> {
    let mut ps: Vec<Probability> = if given.is_empty() {
        default.iter().map(|&p| prob(p)).collect()
    } else {
        given.to_vec()
    };
    ps.sort_by(|a, b| a.get().total_cmp(&b.get()));
    ps.dedup();
    ps
}

fn wars(u: Units, args: &WarsArgs) -> Result<Vec<OutputTable>> {
    let tr = race(args.p0, args.max_iters as usize, args.tol)?;
    let eq = equilibrium(args.tol)?;
    let mut traj = OutputTable::new("trajectory", ["iter", "density", "response"], u)
        .meta("p0", args.p0)
        .meta("tol", args.tol)
        .meta("converged", tr.converged);
    for (i, &x) in tr.densities.iter().enumerate() {
        traj.push(vec![i.into(), x.into(), optimal_punch(x).into()])?;
    }
    let mut report = OutputTable::new(
        "equilibrium",
        [
            "density".to_string(),
            u.column("per_party_rate"),
            u.column("total_rate"),
            "stability_slope".into(),
            "race_converged".into(),
            "race_final".into(),
        ],
        u,
    );
    report.push(vec![
        eq.density.into(),
        u.scale(eq.per_party_rate).into(),
        u.scale(eq.total_rate).into(),
        eq.stability_slope.into(),
        tr.converged.into(),
        tr.equilibrium.into(),
    ])?;
    Ok(vec![traj, report])
}

fn simulate(u: Units, seed: u64, args: &SimulateArgs) -> Result<Vec<OutputTable>> {
    let n = args.n as usize;
    let exec = Exec::default();
    let tape = sample_tape(n, args.p, derive_seed(seed, 0))?;
    let initial = tape.hole_fraction();
    let (_, observations) = run_stages_from(tape, &args.q_list, seed, exec);
    let mut t = OutputTable::new(
        "simulate",
        [
            "stage".to_string(),
            "q".into(),
            "p_in_analytic".into(),
            "p_out_analytic".into(),
            "p_out_empirical".into(),
            u.column("mi_analytic"),
            u.column("mi_empirical"),
            "deviation_sd".into(),
        ],
        u,
    )
    .meta("n", n)
    .meta("p", args.p)
    .meta("seed", seed)
    .meta("initial_empirical_density", initial);
    let mut p_in = args.p;
    for (k, (&q, obs)) in args.q_list.iter().zip(&observations).enumerate() {
        let p_out = compose_density(p_in, q);
        let sd = (p_out.get() * (1.0 - p_out.get()) / n as f64).sqrt();
        let dev = obs.empirical_p_out - p_out.get();
        let dev_sd = if sd > 0.0 { dev / sd } else { 0.0 };
        t.push(vec![
            (k + 1).into(),
            q.into(),
            p_in.into(),
            p_out.into(),
            obs.empirical_p_out.into(),
            u.scale(mutual_info(p_in, q)).into(),
            u.scale(InfoQuantity::from_nats(obs.empirical_mi)).into(),
            dev_sd.into(),
        ])?;
        p_in = p_out;
    }
    Ok(vec![t])
}

fn ledger(u: Units, args: &LedgerArgs) -> Result<Vec<OutputTable>> {
    let plan = match (args.target, args.steps) {
        (Some(target), Some(steps)) => incremental_plan(args.p, target, steps as usize)?,
        _ => args.q_list.clone(),
    };
    let start = EffectiveState::new(args.length, args.p)?;
    let ledger = run_ledger(start, &plan);
    let len = args.length as f64;
    let mut stages = OutputTable::new(
        "stages",
        [
            "stage".to_string(),
            "p_before".into(),
            "q".into(),
            "p_after".into(),
            u.column("info_per_cell"),
            u.column("consumed_per_cell"),
            u.column("waste_per_cell"),
            u.column("info_tape"),
            u.column("waste_tape"),
        ],
        u,
    )
    .meta("length", args.length)
    .meta("p", args.p);
    for (k, s) in ledger.stages.iter().enumerate() {
        stages.push(vec![
            (k + 1).into(),
            s.p_before.into(),
            s.q.into(),
            s.p_after.into(),
            u.scale(s.info_sent).into(),
            u.scale(s.capacity_consumed).into(),
            u.scale(s.waste).into(),
            u.scale(s.info_sent * len).into(),
            u.scale(s.waste * len).into(),
        ])?;
    }
    let lambda0 = ledger.initial.effective_length;
    let lambda1 = ledger.final_state.effective_length;
    let mut totals = OutputTable::new(
        "totals",
        [
            "stages".to_string(),
            "p_final".into(),
            u.column("initial_effective_length"),
            u.column("total_info"),
            u.column("total_waste"),
            u.column("final_effective_length"),
            "effective_shrinkage".into(),
        ],
        u,
    );
    let ratio = if lambda0.nats() > 0.0 {
        lambda1.nats() / lambda0.nats()
    } else {
        0.0
    };
    totals.push(vec![
        ledger.stages.len().into(),
        ledger.final_state.hole_density.into(),
        u.scale(lambda0).into(),
        u.scale(ledger.total_info()).into(),
        u.scale(ledger.total_waste()).into(),
        u.scale(lambda1).into(),
        ratio.into(),
    ])?;
    Ok(vec![stages, totals])
}

/// Process exit status for an error returned by [`run`].
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Output(_) => 1,
        _ => 2,
    }
}
