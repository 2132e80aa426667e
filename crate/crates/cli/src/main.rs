//! `grassfiber`: JSON certificates and reports for moment maps on G(n,2).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grassfiber::acceptance;
use grassfiber::exactgeom::{arrangement_for_n, sign_vector, RationalVector};
use grassfiber::fibers4::{
    bundle_transition, chart_point, curve_pprime_residual, jacobian, jacobian_rank, mq5_fiber_circles,
    phase_closure_residual, random_mq5_via_f, sample_certificates, solve_triangle_p, ChamberOrbit, FiberKind,
    TorusElement, TransitionDirection, TransitionMatrix,
};
use grassfiber::moment::{a_map, mu_hat, mu_tilde};
use grassfiber::plucker::{n_from_coord_count, ProjectivePoint};
use grassfiber::regularity::{
    enumerate_chambers, is_regular_mu, orbit_label, s4_chamber_orbits, MuTildeRegularity, MU_TILDE_MAX_N,
};
use grassfiber::tolerances::{DEFAULT_SAMPLES, DEFAULT_SEED, SVD_RANK};
use grassfiber::Error;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "grassfiber", version, about = "Moment maps, regular values and explicit fibers on G(n,2)")]
struct Cli {
    /// Also write the JSON output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orbit {
    Minus,
    Plus,
}

impl From<Orbit> for ChamberOrbit {
    fn from(o: Orbit) -> Self {
        match o {
            Orbit::Minus => ChamberOrbit::Minus,
            Orbit::Plus => ChamberOrbit::Plus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mq7,
    Mq5,
    M2,
    M3,
}

impl From<Kind> for FiberKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Mq7 => FiberKind::Mq7,
            Kind::Mq5 => FiberKind::Mq5,
            Kind::M2 => FiberKind::M2,
            Kind::M3 => FiberKind::M3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    #[value(name = "0to1")]
    ZeroToOne,
    #[value(name = "1to0")]
    OneToZero,
}

#[derive(Subcommand)]
enum Command {
    /// Chambers of Delta_{4,2}, or the chamber and regularity of one point.
    Chambers {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// A point as comma-separated rationals, e.g. 1/3,5/9,5/9,5/9.
        #[arg(long, allow_hyphen_values = true)]
        classify: Option<String>,
    },
    /// Regularity of a point for both moment maps, with a singular witness.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Moment maps of a point of CP^N given as re or re:im entries.
    Moment {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Seeded fiber certificates.
    Fiber {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "minus")]
        orbit: Orbit,
    },
    /// Jacobian ranks of the complete intersection on fiber samples.
    Jacobian {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "minus")]
        orbit: Orbit,
        /// Relative singular value threshold.
        #[arg(long, default_value_t = SVD_RANK)]
        tol: f64,
    },
    /// Applies the bundle transition to a T^3 element given by angles.
    Transition {
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        angles: String,
        #[arg(long, value_enum, default_value = "0to1")]
        direction: Direction,
    },
    /// Exact vertices, edges and curve points of the triangle P.
    Triangle,
    /// Residuals of the curve equation and of the phase closure at (x0, x1).
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: f64,
    },
    /// Runs the acceptance criteria.
    Report {
        /// Criterion names or numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Outcome of a command: the JSON document and whether every check passed.
struct Outcome {
    value: Value,
    pass: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, pass: true }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_point(s: &str, n: usize) -> Result<RationalVector, Error> {
    let x = RationalVector::parse_list(s)?;
    if x.len() != n {
        return Err(usage(format!("expected {n} coordinates, got {}", x.len())));
    }
    Ok(x)
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let bad = || usage(format!("cannot parse {s:?} as re or re:im"));
    let mut parts = s.trim().splitn(2, ':');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_floats(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("cannot parse {t:?} as a number"))))
        .collect()
}

fn classify(x: &RationalVector, n: usize) -> Result<Value, Error> {
    let mu = is_regular_mu(x, n)?;
    let tilde = if n <= MU_TILDE_MAX_N { Some(MuTildeRegularity::new(n)?.is_regular(x)?) } else { None };
    let id = sign_vector(x, &arrangement_for_n(n)?)?;
    let mut out = json!({
        "point": x,
        "n": n,
        "id": id,
        "regular_mu": mu,
        "regular_mu_tilde": tilde,
    });
    if n == 4 && id.is_strict() {
        out["orbit"] = json!(orbit_label(&id));
    }
    Ok(out)
}

fn chambers(n: usize, point: Option<&str>) -> Result<Outcome, Error> {
    if let Some(p) = point {
        if n > MU_TILDE_MAX_N {
            return Err(Error::Unsupported(format!("classification supports n <= {MU_TILDE_MAX_N}")));
        }
        return Ok(Outcome::ok(classify(&parse_point(p, n)?, n)?));
    }
    let chambers = enumerate_chambers(n)?;
    let orbits = s4_chamber_orbits()?;
    Ok(Outcome::ok(json!({
        "n": n,
        "count": chambers.len(),
        "chambers": chambers,
        "orbits": orbits,
    })))
}

fn regular(n: usize, point: &str) -> Result<Outcome, Error> {
    let x = parse_point(point, n)?;
    let mut out = classify(&x, n)?;
    if n <= MU_TILDE_MAX_N {
        out["singular_witness"] = json!(MuTildeRegularity::new(n)?.singular_witness(&x)?);
    }
    Ok(Outcome::ok(out))
}

fn moment(z: &str) -> Result<Outcome, Error> {
    let coords = z.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
    let n = n_from_coord_count(coords.len())?;
    let p = ProjectivePoint::new(coords)?;
    let hat = mu_hat(&p);
    let tilde = mu_tilde(&p, n)?;
    let composed = a_map(&hat, n)?;
    Ok(Outcome::ok(json!({
        "n": n,
        "point": p,
        "mu_hat": hat.0,
        "mu_tilde": tilde.0,
        "a_of_mu_hat": composed.0,
    })))
}

fn fiber(kind: Kind, samples: usize, seed: u64, orbit: Orbit) -> Result<Outcome, Error> {
    let summary = sample_certificates(kind.into(), samples, seed, orbit.into())?;
    let pass = summary.all_pass;
    let mut value = serde_json::to_value(&summary).expect("serializable");
    if let Some(bad) = summary.first_failure() {
        value["first_failure"] = serde_json::to_value(bad).expect("serializable");
    }
    Ok(Outcome { value, pass })
}

fn jacobians(samples: usize, seed: u64, orbit: Orbit, tol: f64) -> Result<Outcome, Error> {
    let orbit: ChamberOrbit = orbit.into();
    let mut points = mq5_fiber_circles()
        .iter()
        .map(|c| c.base_point(orbit))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        points.push(random_mq5_via_f(&mut rng, orbit)?.2);
    }
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            let (u, v) = chart_point(p).split();
            json!({ "u": u, "v": v, "rank": jacobian_rank(&u, &v, tol), "jacobian": jacobian(&u, &v) })
        })
        .collect();
    let pass = rows.iter().all(|r| r["rank"] == 3);
    Ok(Outcome {
        value: json!({ "orbit": orbit.label(), "tol": tol, "points": rows, "all_rank_3": pass }),
        pass,
    })
}

fn transition(angles: &str, direction: Direction) -> Result<Outcome, Error> {
    let a = parse_floats(angles)?;
    if a.len() != 3 {
        return Err(usage("transition takes three angles"));
    }
    let t = TorusElement::from_angles(&a);
    let (dir, back) = match direction {
        Direction::ZeroToOne => (TransitionDirection::ZeroToOne, TransitionDirection::OneToZero),
        Direction::OneToZero => (TransitionDirection::OneToZero, TransitionDirection::ZeroToOne),
    };
    let image = bundle_transition(&t, dir)?;
    let cocycle = bundle_transition(&image, back)?.max_diff(&t);
    let m = TransitionMatrix::standard();
    let pass = m.det().abs() == 1 && cocycle <= 1e-12;
    Ok(Outcome {
        value: json!({
            "input": t,
            "output": image,
            "matrix": m,
            "determinant": m.det(),
            "inverse": m.inverse()?,
            "cocycle_deviation": cocycle,
        }),
        pass,
    })
}

fn triangle() -> Result<Outcome, Error> {
    let t = solve_triangle_p()?;
    let edges: Vec<Value> = t
        .edges
        .iter()
        .map(|e| json!({ "index": e.index, "endpoints": e.endpoints, "curve_point": e.curve_point }))
        .collect();
    Ok(Outcome::ok(json!({
        "q": ChamberOrbit::Minus.q(),
        "free_coordinates": t.solution.free,
        "particular": t.solution.particular,
        "directions": t.solution.directions,
        "vertices": t.vertices,
        "edges": edges,
    })))
}

fn curve(x0: f64, x1: f64) -> Result<Outcome, Error> {
    Ok(Outcome::ok(json!({
        "x0": x0,
        "x1": x1,
        "curve_residual": curve_pprime_residual(x0, x1)?,
        "phase_closure_residual": phase_closure_residual(x0, x1)?,
    })))
}

fn report(only: &[String], seed: u64) -> Result<Outcome, Error> {
    if let Some(bad) = only.iter().find(|o| !acceptance::is_known(o)) {
        return Err(usage(format!("unknown criterion {bad:?}")));
    }
    let results = acceptance::run(seed, only);
    let pass = results.iter().all(|r| r.pass);
    let total: f64 = results.iter().map(|r| r.millis).sum();
    Ok(Outcome {
        value: json!({ "seed": seed, "all_pass": pass, "total_millis": total, "criteria": results }),
        pass,
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Chambers { n, classify } => chambers(*n, classify.as_deref()),
        Command::Regular { n, point } => regular(*n, point),
        Command::Moment { z } => moment(z),
        Command::Fiber { kind, samples, seed, orbit } => fiber(*kind, *samples, *seed, *orbit),
        Command::Jacobian { samples, seed, orbit, tol } => jacobians(*samples, *seed, *orbit, *tol),
        Command::Transition { angles, direction } => transition(angles, *direction),
        Command::Triangle => triangle(),
        Command::Curve { x0, x1 } => curve(*x0, *x1),
        Command::Report { only, seed } => report(only, *seed),
    }
}

/// Writes one document to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let code = if matches!(e, Error::Certificate(_) | Error::Sampling(_)) { 1 } else { 2 };
            emit(&json!({ "error": e.to_string() }).to_string());
            return ExitCode::from(code);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.value).expect("serializable");
    emit(&text);
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
