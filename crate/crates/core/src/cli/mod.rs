//! Command-line front end: subcommands, JSON configuration and CSV/JSON emitters.
//!
//! Exit codes: `0` success, `1` failed validation or computation, `2` usage error.

pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::abel::{spherical_transform_radial, AbelProfile, InversionCalibration, RadialFunction};
use crate::deconvolve::{demo, radial_residual_at, DemoSettings};
use crate::error::{Error, Result};
use crate::htype::{build_htype, HTypeAlgebra};
use crate::meanvalue::{oscillatory_report, ZonalSphereRule};
use crate::nagroup::{
    cayley, cayley_inverse, distance, distance_to_origin, geodesic_inversion, inverse, multiply, BallPoint, NAPoint,
};
use crate::slowdecrease::{
    check_slow_decrease, find_witness, phi_k_target, spherical_phi_target, EntireFn, SlowDecreaseWitness,
    WitnessGrid,
};
use crate::spherical::{koornwinder_phi, spherical_phi, spherical_phi_integral, JacobiParams};

pub use config::{GridSpec, OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "harmonic-na", version, about = "Harmonic analysis on harmonic NA groups")]
struct Cli {
    /// JSON configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized sphere rules and sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
struct AlgebraArgs {
    /// Center dimension.
    #[arg(long)]
    k: Option<usize>,
    /// Number of irreducible Clifford modules.
    #[arg(long)]
    b: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebra summary as JSON.
    Htype(AlgebraArgs),
    /// Group operations on points `[X…, Z…, t]`.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Tables of spherical functions
    Spherical {
        #[command(subcommand)]
        cmd: SphericalCmd,
    },
    /// Abel transform checks
    Abel {
        #[command(subcommand)]
        cmd: AbelCmd,
    },
    /// Mean-value operator asymptotics
    Meanvalue {
        #[command(subcommand)]
        cmd: MeanValueCmd,
    },
    /// Slow-decrease witness checks
    Slowdecrease {
        #[command(subcommand)]
        cmd: SlowDecreaseCmd,
    },
    /// Mean-value deconvolution
    Deconvolve {
        #[command(subcommand)]
        cmd: DeconvolveCmd,
    },
    /// Runs every acceptance check and prints a JSON summary.
    VerifyAll {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Restrict to these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

#[derive(Debug, Subcommand)]
enum GroupOp {
    Multiply {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    Inverse {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        p: String,
    },
    /// Geodesic distance to `q`, or to the identity.
    Distance {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: Option<String>,
    },
    /// Ball coordinates `[X'…, Z'…, l']`.
    Cayley {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        p: String,
    },
    CayleyInverse {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        ball: String,
    },
    /// Geodesic inversion.
    Inversion {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Subcommand)]
enum SphericalCmd {
    /// `φ_λ(r)` with the deviations of the integral and Koornwinder routes.
    Table {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// `start:stop:count` or a comma-separated list.
        #[arg(long)]
        lambda_grid: Option<String>,
        #[arg(long)]
        r_grid: Option<String>,
        /// Imaginary part added to every `λ`.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda_imag: f64,
    },
}

#[derive(Debug, Subcommand)]
enum AbelCmd {
    /// Fourier transform of the Abel transform against the spherical transform.
    Slice {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Bump radius.
        #[arg(long, default_value_t = 1.0)]
        bump: f64,
        #[arg(long)]
        lambda_grid: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum MeanValueCmd {
    /// `Ĩ_ν(λ, t)` against its leading term.
    Asymptotics {
        #[arg(long)]
        nu: u32,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 50.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 400.0)]
        lambda_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// `λ ↦ φ_λ(t)` on the algebra.
    Phi,
    /// `λ ↦ Φ_k(λ)` with Jacobi orders from `(n, k)`.
    Phik,
    /// Exponential sum read from `--file`.
    File,
}

#[derive(Debug, Subcommand)]
enum SlowDecreaseCmd {
    Check {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Real dimension for `--target phik`.
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        xi_min: f64,
        #[arg(long, default_value_t = 200.0)]
        xi_max: f64,
        /// `A,B,C,D`; searched on a default grid when absent.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum DeconvolveCmd {
    /// Recovers a bump from its sphere mean.
    Demo {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Bump radius.
        #[arg(long = "R", default_value_t = 1.0)]
        big_r: f64,
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        lambda_max: Option<f64>,
        /// JSON summary path (standard error when absent).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

/// A CSV/JSON table of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Full-precision CSV (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, v)| (h.to_string(), json!(v)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        json!(rows)
    }
}

/// `F(ζ) = Σ c_j e^{i ω_j ζ}`, the file format of `slowdecrease check --target file`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentialSum {
    pub terms: Vec<ExponentialTerm>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentialTerm {
    /// `[re, im]`.
    pub coef: [f64; 2],
    /// `[re, im]`.
    pub freq: [f64; 2],
}

impl ExponentialSum {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let c = Complex64::new(t.coef[0], t.coef[1]);
                let w = Complex64::new(t.freq[0], t.freq[1]);
                c * (Complex64::i() * w * z).exp()
            })
            .sum()
    }
}

/// Parses `start:stop:count` or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |e: &dyn std::fmt::Display| Error::Config(format!("bad grid '{s}': {e}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let start = parts[0].trim().parse::<f64>().map_err(|e| bad(&e))?;
        let stop = parts[1].trim().parse::<f64>().map_err(|e| bad(&e))?;
        let count = parts[2].trim().parse::<usize>().map_err(|e| bad(&e))?;
        return GridSpec { start, stop, count }.points();
    }
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| bad(&e)))
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(bad(&"empty"));
    }
    Ok(v)
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    serde_json::from_str::<Vec<f64>>(s).map_err(|e| Error::Config(format!("bad JSON array '{s}': {e}")))
}

enum Failure {
    Usage(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Usage(m),
            other => Failure::Validation(other.to_string()),
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    seed: u64,
    format: OutputFormat,
    output: Option<PathBuf>,
}

impl Ctx {
    fn algebra(&self, a: AlgebraArgs) -> Result<HTypeAlgebra> {
        build_htype(a.k.unwrap_or(self.cfg.algebra.k), a.b.unwrap_or(self.cfg.algebra.b))
    }

    fn grid(&self, flag: &Option<String>, fallback: Option<GridSpec>, default: GridSpec) -> Result<Vec<f64>> {
        match flag {
            Some(s) => parse_grid(s),
            None => fallback.unwrap_or(default).points(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            2
        }
        Err(Failure::Validation(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn emit(ctx: &Ctx, out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    match &ctx.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Validation(format!("cannot write output: {e}"))),
    }
}

fn emit_json(ctx: &Ctx, out: &mut dyn Write, v: &serde_json::Value) -> std::result::Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Validation(e.to_string()))?;
    s.push('\n');
    emit(ctx, out, &s)
}

fn emit_table(ctx: &Ctx, out: &mut dyn Write, t: &Table) -> std::result::Result<(), Failure> {
    match ctx.format {
        OutputFormat::Csv => emit(ctx, out, &t.to_csv()),
        OutputFormat::Json => emit_json(ctx, out, &t.to_json()),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<bool, Failure> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx {
        seed: cli.seed.or(cfg.seed).unwrap_or(cfg.quadrature.seed),
        format: cli.format.unwrap_or(cfg.output.format),
        output: cli.output.clone().or_else(|| cfg.output.path.clone()),
        cfg,
    };
    let spec = crate::quad::QuadratureSpec {
        seed: ctx.seed,
        ..ctx.cfg.quadrature.clone()
    };
    match cli.command {
        Command::Htype(a) => {
            let alg = ctx.algebra(a)?;
            emit_json(&ctx, out, &json!(alg.summary()))?;
        }
        Command::Group { op } => emit_json(&ctx, out, &group_op(&ctx, op)?)?,
        Command::Spherical {
            cmd: SphericalCmd::Table { alg, lambda_grid, r_grid, lambda_imag },
        } => {
            let alg = ctx.algebra(alg)?;
            let lambdas = ctx.grid(&lambda_grid, ctx.cfg.grids.lambda, GridSpec { start: 0.0, stop: 10.0, count: 11 })?;
            let rs = ctx.grid(&r_grid, ctx.cfg.grids.r, GridSpec { start: 0.5, stop: 2.0, count: 4 })?;
            let mut rows = Vec::new();
            for &l in &lambdas {
                let lam = Complex64::new(l, lambda_imag);
                for &r in &rs {
                    let phi = spherical_phi(&alg, lam, r)?;
                    let y = NAPoint::on_axis(&alg, r.exp())?;
                    let d_int = (spherical_phi_integral(&alg, lam, &y, &spec)? - phi).norm();
                    let d_koo = if r > 0.0 {
                        (koornwinder_phi(&alg, lam, r, &spec)? - phi).norm()
                    } else {
                        0.0
                    };
                    rows.push(vec![l, r, phi.re, phi.im, d_int, d_koo]);
                }
            }
            let header = vec!["lambda", "r", "re", "im", "delta_integral", "delta_koornwinder"];
            emit_table(&ctx, out, &Table { header, rows })?;
        }
        Command::Abel {
            cmd: AbelCmd::Slice { alg, bump, lambda_grid },
        } => {
            let alg = ctx.algebra(alg)?;
            let lambdas = ctx.grid(&lambda_grid, ctx.cfg.grids.lambda, GridSpec { start: 0.0, stop: 20.0, count: 41 })?;
            let f = RadialFunction::bump(bump)?;
            let lmax = lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
            let profile = AbelProfile::new(&alg, &f, lmax, &spec)?;
            let mut rows = Vec::new();
            for &l in &lambdas {
                let a = profile.fourier_real(l);
                let s = spherical_transform_radial(&alg, &f, Complex64::new(l, 0.0), &spec)?.re;
                rows.push(vec![l, a, s, (a - s).abs()]);
            }
            let header = vec!["lambda", "ft_abel", "spherical_ft", "delta"];
            emit_table(&ctx, out, &Table { header, rows })?;
        }
        Command::Meanvalue {
            cmd: MeanValueCmd::Asymptotics { nu, t, lambda_min, lambda_max },
        } => {
            let rep = oscillatory_report(nu, t, lambda_min, lambda_max)?;
            let rows = (0..rep.lambda_grid.len())
                .map(|i| vec![rep.lambda_grid[i], rep.values[i], rep.leading[i], rep.remainder_scaled[i]])
                .collect();
            let header = vec!["lambda", "quadrature", "leading", "remainder_scaled"];
            emit_table(&ctx, out, &Table { header, rows })?;
            let _ = writeln!(
                err,
                "fitted remainder exponent {:.4}, stated {:.4}",
                rep.fitted_slope, rep.stated_slope
            );
        }
        Command::Slowdecrease {
            cmd: SlowDecreaseCmd::Check { target, t, alg, n, xi_min, xi_max, witness, file },
        } => return slow_decrease_check(&ctx, out, &spec, target, t, alg, n, (xi_min, xi_max), witness, file),
        Command::Deconvolve {
            cmd: DeconvolveCmd::Demo { t, big_r, alg, lambda_max, summary },
        } => {
            let alg = ctx.algebra(alg)?;
            let mut settings = DemoSettings {
                t,
                bump_radius: big_r,
                ..DemoSettings::default()
            };
            if let Some(l) = lambda_max {
                settings.lambda_max = l;
            }
            let cal = InversionCalibration::analytic(&alg, settings.lambda_max);
            let rule = ZonalSphereRule::new(&alg, 160, 32)?;
            let rep = demo(&alg, settings, &cal, &spec, &rule)?;
            let f0 = RadialFunction::bump(big_r)?;
            let pointwise = radial_residual_at(&alg, &rep, &f0, &rule)?;
            let rows = (0..rep.solution.r_grid.len())
                .map(|i| vec![rep.solution.r_grid[i], rep.f_true[i], rep.solution.f_rec[i], pointwise[i]])
                .collect();
            let header = vec!["r", "f_true", "f_rec", "abs_mt_f_rec_minus_g"];
            emit_table(&ctx, out, &Table { header, rows })?;
            let pass = rep.residual.relative_residual < verify::TOL_DECONVOLUTION;
            let s = json!({
                "t": t,
                "R": big_r,
                "lambda_max": settings.lambda_max,
                "relative_residual": rep.residual.relative_residual,
                "recovery_error": rep.recovery_error,
                "min_zero_distance": rep.solution.min_zero_distance,
                "max_division_gain": rep.solution.max_division_gain,
                "zeros_below_lambda_max": rep.solution.zeros.len(),
                "pass": pass,
            });
            let text = serde_json::to_string_pretty(&s).map_err(|e| Failure::Validation(e.to_string()))? + "\n";
            match summary {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", p.display())))?,
                None => {
                    let _ = err.write_all(text.as_bytes());
                }
            }
            return Ok(pass);
        }
        Command::VerifyAll { alg, only } => {
            let vctx = verify::VerifyContext::new(
                alg.k.unwrap_or(ctx.cfg.algebra.k),
                alg.b.unwrap_or(ctx.cfg.algebra.b),
                spec.clone(),
                ctx.seed,
            )?;
            let ids: Vec<u32> = match only {
                Some(v) => v,
                None => verify::CRITERIA.iter().map(|c| c.0).collect(),
            };
            let mut checks = Vec::new();
            for id in ids {
                let c = verify::run_check(&vctx, id);
                let _ = writeln!(err, "[{}] {:>2} {} ({:.1} s)", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.seconds);
                checks.push(c);
            }
            let all = checks.iter().all(|c| c.pass);
            emit_json(
                &ctx,
                out,
                &json!({ "seed": ctx.seed, "k": vctx.alg.k(), "b": ctx.cfg.algebra.b, "all_pass": all, "checks": checks }),
            )?;
            return Ok(all);
        }
    }
    Ok(true)
}

fn point(alg: &HTypeAlgebra, s: &str) -> Result<NAPoint> {
    NAPoint::from_flat(alg, &parse_floats(s)?)
}

fn group_op(ctx: &Ctx, op: GroupOp) -> Result<serde_json::Value> {
    Ok(match op {
        GroupOp::Multiply { alg, p, q } => {
            let alg = ctx.algebra(alg)?;
            json!(multiply(&alg, &point(&alg, &p)?, &point(&alg, &q)?)?)
        }
        GroupOp::Inverse { alg, p } => {
            let alg = ctx.algebra(alg)?;
            json!(inverse(&alg, &point(&alg, &p)?)?)
        }
        GroupOp::Distance { alg, p, q } => {
            let alg = ctx.algebra(alg)?;
            let p = point(&alg, &p)?;
            json!(match q {
                Some(q) => distance(&alg, &p, &point(&alg, &q)?)?,
                None => distance_to_origin(&alg, &p)?,
            })
        }
        GroupOp::Cayley { alg, p } => {
            let alg = ctx.algebra(alg)?;
            json!(cayley(&alg, &point(&alg, &p)?)?.to_flat())
        }
        GroupOp::CayleyInverse { alg, ball } => {
            let alg = ctx.algebra(alg)?;
            json!(cayley_inverse(&alg, &BallPoint::from_flat(&alg, &parse_floats(&ball)?)?)?)
        }
        GroupOp::Inversion { alg, p } => {
            let alg = ctx.algebra(alg)?;
            json!(geodesic_inversion(&alg, &point(&alg, &p)?)?)
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn slow_decrease_check(
    ctx: &Ctx,
    out: &mut dyn Write,
    spec: &crate::quad::QuadratureSpec,
    target: Target,
    t: f64,
    alg: AlgebraArgs,
    n: usize,
    xi_range: (f64, f64),
    witness: Option<String>,
    file: Option<PathBuf>,
) -> std::result::Result<bool, Failure> {
    let given = match &witness {
        Some(s) => {
            let v: Vec<f64> = s
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Failure::Usage(format!("bad witness '{s}': {e}")))?;
            if v.len() != 4 {
                return Err(Failure::Usage(format!("witness needs four numbers A,B,C,D, got '{s}'")));
            }
            Some(SlowDecreaseWitness::new(v[0], v[1], v[2], v[3], xi_range.0, xi_range.1)?)
        }
        None => None,
    };
    let grid = WitnessGrid::default();
    let a_max = match &given {
        Some(w) => w.a,
        None => grid.a.iter().cloned().fold(0.0, f64::max),
    };
    let reach = xi_range.1 + a_max * (2.0 + xi_range.1).ln() + 1.0;
    let f: Box<EntireFn<'static>> = match target {
        Target::Phi => {
            let alg = ctx.algebra(alg)?;
            Box::new(spherical_phi_target(&JacobiParams::from_algebra(&alg), t, reach)?)
        }
        Target::Phik => {
            let params = JacobiParams::from_nk(n, alg.k.unwrap_or(4))?;
            Box::new(phi_k_target(&params, t, reach, spec)?)
        }
        Target::File => {
            let path = file.ok_or_else(|| Failure::Usage("--target file needs --file".into()))?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let sum: ExponentialSum =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad target file: {e}")))?;
            Box::new(move |z: Complex64| Ok(sum.eval(z)))
        }
    };
    let (witness, status) = match given {
        Some(w) => (Some(w), Some(check_slow_decrease(f.as_ref(), &w)?)),
        None => match find_witness(f.as_ref(), xi_range, &grid)? {
            Some(w) => (Some(w), Some(check_slow_decrease(f.as_ref(), &w)?)),
            None => (None, None),
        },
    };
    let pass = status.as_ref().is_some_and(|s| s.pass);
    let v = match &status {
        Some(s) => json!({
            "status": if s.pass { "pass" } else { "fail" },
            "worst_xi": s.worst_xi,
            "margin": s.margin,
            "xi_checked": s.xi_checked,
            "sampling": s.sampling,
            "witness": witness,
        }),
        None => json!({ "status": "no witness found", "worst_xi": null, "margin": null, "witness": null }),
    };
    emit_json(ctx, out, &v)?;
    Ok(pass)
}
