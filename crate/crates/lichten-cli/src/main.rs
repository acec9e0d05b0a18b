//! Command-line driver for the exact twisted-cohomology engine.
//!
//! Every computing subcommand accepts either a built-in `--fixture` or
//! explicit `--model`/`--f`/`--theta` expressions, and an optional
//! `--config` file whose fields fill in flags left unset. Reports are
//! deterministic TOML on stdout (or `--out`). Exit codes: 0 all checks
//! pass, 1 a mathematical check failed, 2 bad configuration or input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use lichten::engine::{cohomology_dims, TwistKind, TwistedComplex};
use lichten::fixtures;
use lichten::lck::{bott_chern_dim, hat_cohomology_and_delta, LckFixture};
use lichten::parse::parse_form;
use lichten::relative::RelativeComplex;
use lichten::report::{
    self, degree_sections, suite_sections, DegreeSection, JobConfig, Report, RunRow,
};
use lichten::twist::TwistData;
use lichten::verify::run_suite;
use lichten::{Error, Result};

#[derive(Parser)]
#[command(name = "lichten", version, about = "Exact cohomology of twisted differentials on flat tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized identity suite with exact arithmetic.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Dimension tables for one operator over a cutoff schedule.
    Cohomology {
        #[command(flatten)]
        model: ModelOpts,
        /// One of d, d_theta, d_f, d_f_theta, d_theta_f.
        #[arg(long)]
        operator: Option<String>,
        #[command(flatten)]
        sched: ScheduleOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Mapping-cone dimension tables for an affine torus self- or cross-map.
    Relative {
        #[command(flatten)]
        model: ModelOpts,
        /// Map in "A;b" notation: rows comma-separated, entries by
        /// whitespace, optional translation after the semicolon.
        #[arg(long)]
        map: Option<String>,
        #[command(flatten)]
        sched: ScheduleOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Coupled-pair tables: both strands, the coupled complex, connecting
    /// ranks and the dimension identity between them.
    Lck {
        #[command(flatten)]
        model: ModelOpts,
        /// Coupling 2-form expression.
        #[arg(long)]
        omega: Option<String>,
        /// Rational weight m (strand twists are m*theta and (m+1)*theta).
        #[arg(long)]
        m: Option<String>,
        /// Also compute the two-sided quotient at this bidegree, e.g. 1,1.
        #[arg(long)]
        bc: Option<String>,
        #[command(flatten)]
        sched: ScheduleOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// Kernel-over-image-in-kernel tables for the non-squaring operator.
    Twisted {
        #[command(flatten)]
        model: ModelOpts,
        /// Optional closed form: certify its three induced images and test
        /// ideal membership at the top cutoff.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        sched: ScheduleOpts,
        #[command(flatten)]
        io: IoOpts,
    },
    /// List the built-in fixtures.
    Fixtures,
}

#[derive(Args, Clone, Default)]
struct ModelOpts {
    /// Built-in fixture name (see `lichten fixtures`).
    #[arg(long)]
    fixture: Option<String>,
    /// Torus model, e.g. t2.
    #[arg(long)]
    model: Option<String>,
    /// Function expression, e.g. "cos(t1)".
    #[arg(long)]
    f: Option<String>,
    /// Closed 1-form expression; "0" for the untwisted operator.
    #[arg(long)]
    theta: Option<String>,
}

#[derive(Args, Clone, Default)]
struct ScheduleOpts {
    /// Comma-separated degrees, e.g. 0,1,2. Default: every degree the
    /// complex can carry.
    #[arg(long)]
    degrees: Option<String>,
    #[arg(long = "Dmin")]
    dmin: Option<i64>,
    #[arg(long = "Dmax")]
    dmax: Option<i64>,
    /// Consecutive equal values required to call a dimension stable.
    #[arg(long)]
    stability: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct IoOpts {
    /// Config file supplying any flags left unset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Verify { suite, trials, seed, io } => {
            let cfg = load(&io, "verify")?;
            let suite = suite.or(cfg.suite).unwrap_or_else(|| "all".to_string());
            let trials = trials.or(cfg.trials).unwrap_or(100);
            let seed = seed.or(cfg.seed).unwrap_or(7);

            let vr = run_suite(&suite, trials, seed)?;
            let mut rep = Report::new("verify");
            rep.seed = Some(seed);
            rep.param("suite", &suite).param("trials", trials);
            rep.suites = suite_sections(&vr);
            for o in &vr.outcomes {
                if o.failures > 0 {
                    rep.fail(format!("suite {}: {} of {} trials failed", o.name, o.failures, o.trials));
                }
            }
            emit(&io, rep)
        }
        Command::Cohomology { model, operator, sched, io } => {
            let cfg = load(&io, "cohomology")?;
            let (tw, mut rep) = resolve_model(&model, &cfg, "cohomology")?;
            let kind = TwistKind::parse(
                operator.or_else(|| cfg.operator.clone()).as_deref().unwrap_or("d_f_theta"),
            )?;
            rep.param("operator", kind.label());
            let (degrees, schedule, stability) =
                resolve_schedule(&sched, &cfg, &mut rep, 0..=tw.dim())?;

            let family = TwistedComplex::new(tw, kind);
            let table = cohomology_dims(&family, &degrees, &schedule, stability)?;
            rep.degrees = degree_sections("H", &table);
            note_unstable(&mut rep);
            emit(&io, rep)
        }
        Command::Relative { model, map, sched, io } => {
            let cfg = load(&io, "relative")?;
            let fixture = fixture_of(&model, &cfg)?;
            let (tw, mut rep) = resolve_model(&model, &cfg, "relative")?;
            let map_src = map
                .or_else(|| cfg.map.clone())
                .or_else(|| fixture.as_ref().and_then(|fx| fx.spec().map.map(String::from)))
                .ok_or_else(|| {
                    Error::Config("relative needs --map or a fixture with one".into())
                })?;
            rep.param("map", &map_src);
            let map = fixtures::parse_affine_map(&map_src)?;
            let complex = RelativeComplex::new(map, tw)?;
            let top = complex.source().dim().max(complex.target().dim()) + 1;
            let (degrees, schedule, stability) =
                resolve_schedule(&sched, &cfg, &mut rep, 0..=top)?;

            let table = cohomology_dims(&complex, &degrees, &schedule, stability)?;
            rep.degrees = degree_sections("rel H", &table);
            note_unstable(&mut rep);
            emit(&io, rep)
        }
        Command::Lck { model, omega, m, bc, sched, io } => {
            let cfg = load(&io, "lck")?;
            let fixture = fixture_of(&model, &cfg)?;
            let (tw, mut rep) = resolve_model(&model, &cfg, "lck")?;
            let fx = match (&fixture, omega.or_else(|| cfg.omega.clone()), m.or_else(|| cfg.m.clone())) {
                (_, Some(omega_src), Some(m_src)) => {
                    rep.param("omega", &omega_src).param("m", &m_src);
                    LckFixture::new(
                        tw,
                        parse_form(&omega_src, rep_dim(&rep)?)?,
                        fixtures::parse_ratio(&m_src)?,
                    )?
                }
                (Some(fx), None, None) => fx.lck()?,
                _ => {
                    return Err(Error::Config(
                        "lck needs --omega and --m, or a fixture that carries them".into(),
                    ))
                }
            };
            let top = fx.twist().dim() + 1;
            let (degrees, schedule, stability) =
                resolve_schedule(&sched, &cfg, &mut rep, 0..=top)?;

            let hat = hat_cohomology_and_delta(&fx, &degrees, &schedule, stability)?;
            rep.degrees = degree_sections("hat H", &hat.hat);
            rep.degrees.extend(degree_sections("strand1 H", &hat.strand1));
            rep.degrees.extend(degree_sections("strand0 H", &hat.strand0));
            for (r, rows) in &hat.delta {
                let ranks: Vec<String> =
                    rows.iter().map(|(d, rank)| format!("D{d}: {rank}")).collect();
                let verdict = match hat.delta_rank(*r, stability) {
                    Some(rank) => format!("stabilized at {rank}"),
                    None => "not stabilized".to_string(),
                };
                rep.notes.push(format!("delta^{r} ranks: {} ({verdict})", ranks.join(", ")));
            }
            for (r, verdict) in &hat.identity {
                match verdict {
                    Some(true) => rep.notes.push(format!(
                        "degree {r}: coupled dimension identity holds at stabilized values"
                    )),
                    Some(false) => rep.fail(format!("degree {r}: coupled dimension identity violated")),
                    None => rep.notes.push(format!(
                        "degree {r}: identity not decided (some table did not stabilize)"
                    )),
                }
            }
            if let Some(bc_src) = bc.as_deref() {
                let (p, q) = parse_bidegree(bc_src)?;
                let bcr = bott_chern_dim(fx.twist(), p, q, &schedule, stability)?;
                rep.degrees.push(DegreeSection {
                    label: format!("BC^{{{p},{q}}}"),
                    degree: p + q,
                    stabilized: bcr.stabilized,
                    dim: bcr.stabilized_dim,
                    rows: bcr
                        .runs
                        .iter()
                        .map(|run| RunRow {
                            cutoff: run.cutoff,
                            kernel: run.joint_kernel,
                            image: run.image_rank,
                            dim: run.dim,
                        })
                        .collect(),
                });
            }
            note_unstable(&mut rep);
            emit(&io, rep)
        }
        Command::Twisted { model, phi, sched, io } => {
            let cfg = load(&io, "twisted")?;
            let (tw, mut rep) = resolve_model(&model, &cfg, "twisted")?;
            let (degrees, schedule, stability) =
                resolve_schedule(&sched, &cfg, &mut rep, 0..=tw.dim())?;

            let family = TwistedComplex::new(tw.clone(), TwistKind::DThetaF);
            let table = cohomology_dims(&family, &degrees, &schedule, stability)?;
            rep.degrees = degree_sections("tw H", &table);

            if let Some(phi_src) = phi {
                rep.param("phi", &phi_src);
                let phi = parse_form(&phi_src, tw.dim())?;
                let images = lichten::constructions::twisted_homs(&tw, &phi)?;
                rep.notes.push(format!(
                    "phi is closed; its images under the three induced maps are certified (connecting image {})",
                    images.c_image
                ));
                let top = *schedule.last().expect("schedule nonempty");
                let inside = lichten::constructions::ideal_membership(&tw, &phi, top)?;
                rep.notes.push(if inside {
                    format!("phi lies in the multiplied ideal at cutoff {top}")
                } else {
                    format!("phi is not in the multiplied ideal within cutoff {top}")
                });
            }
            note_unstable(&mut rep);
            emit(&io, rep)
        }
        Command::Fixtures => {
            for spec in fixtures::catalogue() {
                let mut extras = Vec::new();
                if let Some(omega) = spec.omega {
                    extras.push(format!("omega = {omega}"));
                }
                if let Some(m) = spec.m {
                    extras.push(format!("m = {m}"));
                }
                if let Some(map) = spec.map {
                    extras.push(format!("map = {map:?}"));
                }
                if let Some(p) = spec.partition {
                    extras.push(format!("partition = {p}"));
                }
                let extras =
                    if extras.is_empty() { String::new() } else { format!(" [{}]", extras.join(", ")) };
                println!(
                    "{:<20} t{}  f = {}, theta = {}{}  — {}",
                    spec.name, spec.dim, spec.f, spec.theta, extras, spec.summary
                );
            }
            Ok(0)
        }
    }
}

fn load(io: &IoOpts, command: &str) -> Result<JobConfig> {
    let Some(path) = &io.config else {
        return Ok(JobConfig::default());
    };
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = report::load_config(&src)?;
    if !cfg.command.is_empty() && cfg.command != command {
        return Err(Error::Config(format!(
            "config file is for command {:?}, not {command:?}",
            cfg.command
        )));
    }
    Ok(cfg)
}

fn fixture_of(model: &ModelOpts, cfg: &JobConfig) -> Result<Option<fixtures::Fixture>> {
    match model.fixture.as_deref().or(cfg.fixture.as_deref()) {
        Some(name) => Ok(Some(fixtures::resolve(name)?)),
        None => Ok(None),
    }
}

/// Twist data plus a report pre-filled with the model parameters.
fn resolve_model(model: &ModelOpts, cfg: &JobConfig, command: &str) -> Result<(TwistData, Report)> {
    let mut rep = Report::new(command);
    let tw = if let Some(fx) = fixture_of(model, cfg)? {
        let spec = fx.spec();
        rep.fixture = Some(spec.name.to_string());
        rep.param("model", format!("t{}", spec.dim));
        rep.param("f", spec.f);
        rep.param("theta", spec.theta);
        fx.twist().clone()
    } else {
        let model_src = model
            .model
            .clone()
            .or(cfg.model.clone())
            .ok_or_else(|| Error::Config(format!("{command} needs --model or --fixture")))?;
        let dim = report::parse_model(&model_src)?;
        let f_src = model.f.clone().or(cfg.f.clone()).unwrap_or_else(|| "1".to_string());
        let theta_src = model.theta.clone().or(cfg.theta.clone()).unwrap_or_else(|| "0".to_string());
        rep.param("model", &model_src);
        rep.param("f", &f_src);
        rep.param("theta", &theta_src);
        fixtures::twist_from_exprs(dim, &f_src, &theta_src)?
    };
    Ok((tw, rep))
}

fn rep_dim(rep: &Report) -> Result<usize> {
    let model = rep.params.get("model").expect("model recorded");
    report::parse_model(model)
}

fn resolve_schedule(
    sched: &ScheduleOpts,
    cfg: &JobConfig,
    rep: &mut Report,
    default_degrees: std::ops::RangeInclusive<usize>,
) -> Result<(Vec<usize>, Vec<i64>, usize)> {
    let degrees = match sched.degrees.as_deref().or(cfg.degrees.as_deref()) {
        Some(src) => report::parse_degrees(src)?,
        None => default_degrees.collect(),
    };
    let dmin = sched.dmin.or(cfg.dmin).unwrap_or(2);
    let dmax = sched.dmax.or(cfg.dmax).unwrap_or(8);
    let stability = sched.stability.or(cfg.stability).unwrap_or(3);
    let schedule = report::schedule(dmin, dmax)?;
    rep.param(
        "degrees",
        degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
    );
    rep.param("Dmin", dmin).param("Dmax", dmax).param("stability", stability);
    Ok((degrees, schedule, stability))
}

fn parse_bidegree(src: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("bad bidegree {src:?}; expected p,q"));
    let (p, q) = src.split_once(',').ok_or_else(bad)?;
    Ok((
        p.trim().parse().map_err(|_| bad())?,
        q.trim().parse().map_err(|_| bad())?,
    ))
}

fn note_unstable(rep: &mut Report) {
    let mut notes: Vec<String> = rep
        .degrees
        .iter()
        .filter(|s| !s.stabilized)
        .map(|s| format!("{} did not stabilize over the schedule", s.label))
        .collect();
    rep.notes.append(&mut notes);
}

fn emit(io: &IoOpts, rep: Report) -> Result<i32> {
    let body = rep.to_toml()?;
    match &io.out {
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(if rep.passed() { 0 } else { 1 })
}
