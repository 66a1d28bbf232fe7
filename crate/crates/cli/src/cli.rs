use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use ttdesign::designs::{self, DesignReport};
use ttdesign::moments;
use ttdesign::polyspace;
use ttdesign::projective::{regular_scheme_check, RegularScheme};
use ttdesign::search::{minimize, SearchOptions};
use ttdesign::{hilbert, Field};

use crate::format::{self, ReportDoc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_DESIGN: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ttdesign",
    version,
    about = "Spherical (t,t)-designs in R^d, C^d and H^d"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Table, global = true)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CatalogKind {
    Onb,
    Mub,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// c_t, b_{t,m}, dim Hom(t,t) and the potential bound.
    Constants {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        t: u32,
        /// Number of vectors for the bound c_t n^2.
        #[arg(long)]
        n: Option<u64>,
    },
    /// dim Hom(t,t) in closed form, optionally also by kernel Gram rank.
    Dim {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        by_rank: bool,
        /// Sample count for the rank (default: closed-form dimension plus a margin).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a configuration file as a (t,t)-design.
    Verify {
        config: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = designs::CATALOG_TOL)]
        tol: f64,
        /// Exit with status 2 when the configuration is not a design.
        #[arg(long)]
        expect_design: bool,
    },
    /// Minimize the frame potential over n unit vectors.
    Search {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
        /// Write the best configuration JSON here.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Write (iteration, potential) CSV here.
        #[arg(long)]
        emit_trajectory: Option<PathBuf>,
        #[arg(long)]
        expect_design: bool,
    },
    /// Emit a closed-form configuration as JSON.
    Catalog {
        #[arg(value_enum)]
        kind: CatalogKind,
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
    },
    /// Check 1 + Σ α^r d_α = n c_r for a regular scheme, r = 1..t.
    Hoggar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        field: Field,
        #[arg(long)]
        t: u32,
        /// Comma-separated angles; `g+` and `g-` stand for (3 ± √5)/8.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        counts: Vec<usize>,
        #[arg(long, default_value_t = designs::CATALOG_TOL)]
        tol: f64,
        #[arg(long)]
        expect_design: bool,
    },
    /// Reproducing-kernel and plane-wave checks on random vectors.
    KernelTest {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Outcome of a command that ran to completion.
struct Outcome {
    text: String,
    verified: bool,
    expect_design: bool,
}

impl Outcome {
    fn plain(text: String) -> Self {
        Outcome {
            text,
            verified: true,
            expect_design: false,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let _ = if code == EXIT_OK {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.expect_design && !o.verified {
                let _ = writeln!(err, "error: verification failed");
                EXIT_NOT_DESIGN
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INVALID
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let json_out = cli.output == Output::Json;
    match &cli.command {
        Command::Constants { field, dim, t, n } => {
            validate(*dim, *t)?;
            constants(*field, *dim, *t, *n, json_out).map(Outcome::plain)
        }
        Command::Dim {
            field,
            dim,
            t,
            by_rank,
            samples,
            seed,
        } => {
            validate(*dim, *t)?;
            dim_cmd(*field, *dim, *t, *by_rank, *samples, *seed, json_out).map(Outcome::plain)
        }
        Command::Verify {
            config,
            t,
            tol,
            expect_design,
        } => {
            validate_tol(*tol)?;
            if *t < 1 {
                bail!("--t must be at least 1");
            }
            let cfg = format::read_configuration(config)?;
            let report = designs::verify(&cfg, *t, *tol)?;
            Ok(Outcome {
                text: render_report(&report, json_out),
                verified: report.is_design,
                expect_design: *expect_design,
            })
        }
        Command::Search {
            field,
            dim,
            n,
            t,
            restarts,
            seed,
            max_iters,
            save,
            emit_trajectory,
            expect_design,
        } => {
            validate(*dim, *t)?;
            if *n < 1 || *restarts < 1 {
                bail!("--n and --restarts must be positive");
            }
            let opts = SearchOptions {
                restarts: *restarts,
                seed: *seed,
                max_iters: *max_iters,
                ..SearchOptions::new(*field, *dim, *n, *t)
            };
            let res = minimize(&opts)?;
            if let Some(path) = save {
                format::write_text(path, &format::configuration_json(&res.best))?;
            }
            if let Some(path) = emit_trajectory {
                let mut buf = Vec::new();
                format::write_trajectory(&mut buf, &res.trajectory)?;
                std::fs::write(path, buf)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let text = if json_out {
                let doc = json!({
                    "configuration": format::ConfigDoc::from_configuration(&res.best),
                    "report": ReportDoc::from(&res.report),
                    "restart_index": res.restart_index,
                    "iterations": res.iterations,
                    "converged": res.converged,
                    "seed": seed,
                });
                serde_json::to_string_pretty(&doc)? + "\n"
            } else {
                format!(
                    "best restart {} after {} iterations (converged: {})\n{}",
                    res.restart_index,
                    res.iterations,
                    res.converged,
                    format::report_table(&res.report)
                )
            };
            Ok(Outcome {
                text,
                verified: res.report.is_design,
                expect_design: *expect_design,
            })
        }
        Command::Catalog { kind, field, dim } => {
            if *dim < 1 {
                bail!("--dim must be positive");
            }
            let cfg = match kind {
                CatalogKind::Onb => designs::onb(*field, *dim)?,
                CatalogKind::Mub => designs::mub_family(*field, *dim)?,
            };
            Ok(Outcome::plain(format::configuration_json(&cfg)))
        }
        Command::Hoggar {
            n,
            dim,
            field,
            t,
            angles,
            counts,
            tol,
            expect_design,
        } => {
            validate(*dim, *t)?;
            validate_tol(*tol)?;
            let angles = angles
                .iter()
                .map(|a| parse_angle(a))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let scheme = RegularScheme::new(*n, angles, counts.clone())?;
            let (text, ok) = hoggar(&scheme, *field, *dim, *t, *tol, json_out)?;
            Ok(Outcome {
                text,
                verified: ok,
                expect_design: *expect_design,
            })
        }
        Command::KernelTest {
            field,
            dim,
            t,
            pairs,
            seed,
        } => {
            validate(*dim, *t)?;
            polyspace::check_envelope(field.m() * dim, 2 * t)?;
            kernel_test(*field, *dim, *t, *pairs, *seed, json_out).map(Outcome::plain)
        }
    }
}

fn validate(dim: usize, t: u32) -> anyhow::Result<()> {
    if dim < 1 {
        bail!("--dim must be positive");
    }
    if t < 1 {
        bail!("--t must be at least 1");
    }
    Ok(())
}

fn validate_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be a positive number");
    }
    Ok(())
}

/// Decimal angle, or `g+` / `g-` for (3 ± √5)/8.
pub fn parse_angle(s: &str) -> anyhow::Result<f64> {
    let s = s.trim();
    let root5 = 5f64.sqrt();
    match s {
        "g+" => Ok((3.0 + root5) / 8.0),
        "g-" | "g\u{2212}" => Ok((3.0 - root5) / 8.0),
        _ => s
            .parse::<f64>()
            .with_context(|| format!("invalid angle {s:?}")),
    }
}

fn render_report(r: &DesignReport, json_out: bool) -> String {
    if json_out {
        serde_json::to_string_pretty(&ReportDoc::from(r)).expect("plain data") + "\n"
    } else {
        format::report_table(r)
    }
}

fn constants(
    field: Field,
    d: usize,
    t: u32,
    n: Option<u64>,
    json_out: bool,
) -> anyhow::Result<String> {
    let (num, den) = moments::c_t_ratio(field, d, t);
    let c = moments::c_t(field, d, t);
    let b = moments::b_const(t, field.m());
    let dim = moments::dim_homtt(field, d, t);
    let bound = n.map(|n| c * (n * n) as f64);
    Ok(if json_out {
        serde_json::to_string_pretty(&json!({
            "field": field.name(),
            "dim": d,
            "t": t,
            "c_t": c,
            "c_t_fraction": format!("{num}/{den}"),
            "b": b.to_string(),
            "dim_homtt": dim.to_string(),
            "n": n,
            "bound": bound,
        }))? + "\n"
    } else {
        let mut s = format!(
            "c_{t}({field}^{d}) = {num}/{den} = {c}\nb_{{{t},{}}} = {b}\ndim Hom(t,t) = {dim}\n",
            field.m()
        );
        if let (Some(n), Some(bound)) = (n, bound) {
            s += &format!("bound c_t n^2 (n = {n}) = {bound}\n");
        }
        s
    })
}

fn dim_cmd(
    field: Field,
    d: usize,
    t: u32,
    by_rank: bool,
    samples: Option<usize>,
    seed: u64,
    json_out: bool,
) -> anyhow::Result<String> {
    let closed = moments::dim_homtt(field, d, t);
    let rank = if by_rank {
        let samples = samples.unwrap_or(closed as usize + polyspace::RANK_SAMPLE_MARGIN);
        if samples > 2000 {
            bail!("{samples} samples exceed the supported Gram size of 2000");
        }
        Some(polyspace::homtt_dim_by_rank(field, d, t, samples, seed))
    } else {
        None
    };
    Ok(if json_out {
        serde_json::to_string_pretty(&json!({
            "field": field.name(),
            "dim": d,
            "t": t,
            "dim_homtt": closed.to_string(),
            "dim_hom_2t": moments::dim_hom_r(field, d, 2 * t).to_string(),
            "rank": rank.as_ref().map(|r| r.rank),
            "samples": rank.as_ref().map(|r| r.samples),
            "insufficient_samples": rank.as_ref().map(|r| r.insufficient_samples),
        }))? + "\n"
    } else {
        let mut s = format!(
            "dim Hom(t,t) = {closed}\ndim Hom_2t = {}\n",
            moments::dim_hom_r(field, d, 2 * t)
        );
        if let Some(r) = rank {
            s += &format!("Gram rank = {} from {} samples", r.rank, r.samples);
            if r.insufficient_samples {
                s += " (too few samples; rank may undercount)";
            }
            s += "\n";
        }
        s
    })
}

fn hoggar(
    scheme: &RegularScheme,
    field: Field,
    d: usize,
    t: u32,
    tol: f64,
    json_out: bool,
) -> anyhow::Result<(String, bool)> {
    let rows: Vec<(u32, f64, f64, bool)> = (1..=t)
        .map(|r| {
            let (lhs, rhs) = regular_scheme_check(scheme, field, d, r);
            (r, lhs, rhs, (lhs - rhs).abs() <= tol * rhs.abs())
        })
        .collect();
    let ok = rows.iter().all(|r| r.3);
    let text = if json_out {
        let rows: Vec<_> = rows
            .iter()
            .map(|(r, l, h, p)| json!({"r": r, "lhs": l, "rhs": h, "pass": p}))
            .collect();
        serde_json::to_string_pretty(&json!({"checks": rows, "pass": ok}))? + "\n"
    } else {
        let mut s = String::from("  r  1 + Σ α^r d_α      n c_r              \n");
        for (r, l, h, p) in &rows {
            s += &format!(
                "  {r:<2} {l:<18.12} {h:<18.12} {}\n",
                if *p { "pass" } else { "FAIL" }
            );
        }
        s
    };
    Ok((text, ok))
}

fn kernel_test(
    field: Field,
    d: usize,
    t: u32,
    pairs: usize,
    seed: u64,
    json_out: bool,
) -> anyhow::Result<String> {
    let m = field.m();
    let vs = polyspace::random_unit_vectors(field, d, 2 * pairs, seed);
    let mut apolar_err = 0.0f64;
    let mut lemma_err = 0.0f64;
    for pair in vs.chunks(2) {
        let (v, w) = (&pair[0], &pair[1]);
        let kv = polyspace::kernel(v, field, t)?;
        let kw = polyspace::kernel(w, field, t)?;
        let expect = hilbert::abs_ip_sq(v, w)?.powi(t as i32);
        let got = polyspace::apolar(&kv, &kw, t, m)?;
        apolar_err = apolar_err.max((got - expect).abs() / expect.max(f64::MIN_POSITIVE));
        lemma_err = lemma_err.max(polyspace::plane_wave_lemma_residual(v, w, field, t)?);
    }
    Ok(if json_out {
        serde_json::to_string_pretty(&json!({
            "field": field.name(),
            "dim": d,
            "t": t,
            "pairs": pairs,
            "seed": seed,
            "apolar_max_relative_error": apolar_err,
            "plane_wave_max_coefficient_error": lemma_err,
        }))? + "\n"
    } else {
        format!(
            "{pairs} pairs in {field}^{d}, t = {t}\n<K_v,K_w> vs |<v,w>|^2t: max relative error {apolar_err:.3e}\nplane-wave lemma: max coefficient error {lemma_err:.3e}\n"
        )
    })
}
