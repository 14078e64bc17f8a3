//! `tvar <subcommand> [--config FILE] [--set KEY=VALUE]... --out DIR`
//!
//! Every subcommand writes its CSV files and a `manifest.json` into `--out`.
//! `tvar replay --manifest FILE --out DIR` regenerates a directory from its
//! manifest. Exit codes: 0 on success, 2 for rejected configuration or input,
//! 1 for any other failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tvar_core::estimator::{estimate, make_schedule, KernelSpec};
use tvar_core::mc::{
    clt_diagnostic, efficiency, lan_diagnostic, lemma_checks, mc_risk, rate_fit, Executor,
};
use tvar_core::{simulate, NoiseDensity};

use crate::config::RunConfig;
use crate::formats;
use crate::manifest::{sha256_hex, FileDigest, Manifest};
use crate::{Error, Parallel, Result};

#[derive(Debug, Parser)]
#[command(
    name = "tvar",
    version,
    about = "Kernel estimation for time-varying AR(1) models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Replace a top-level config key (value parsed as JSON, else as a string).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory, created if absent.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one trajectory (first coefficient, noise and n; seed = root_seed).
    Simulate(Common),
    /// Estimate S(z0) from a trajectory CSV.
    Estimate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trajectory: PathBuf,
    },
    /// Monte Carlo risk over the noise panel.
    Risk(Common),
    /// Risk plus a log-log rate fit per coefficient.
    Rate(Common),
    /// Normalized risk against the efficiency constant.
    Efficiency(Common),
    /// Moments of the standardized stochastic term.
    Clt(Common),
    /// Fourth-moment, concentration and threshold checks.
    Lemmas(Common),
    /// LAN statistics under the null.
    Lan(Common),
    /// Regenerate an output directory from its manifest.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `argv` (program name first), runs it and returns the exit code.
/// Errors are reported on stderr as a single line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = Parallel::from_env()
        .map_err(Failure::Run)
        .and_then(|exec| run_with(argv, &exec));
    match outcome {
        Ok(()) => 0,
        Err(Failure::Clap(e)) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = e.print();
            } else {
                let text = e.render().to_string();
                eprintln!(
                    "tvar: {}",
                    text.lines()
                        .find(|l| !l.trim().is_empty())
                        .unwrap_or("usage error")
                );
            }
            code
        }
        Err(Failure::Run(e)) => {
            eprintln!("tvar: error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Usage error or help/version request.
    Clap(clap::Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// [`run`] with an explicit executor and structured errors.
pub fn run_with<I, T, E>(argv: I, exec: &E) -> std::result::Result<(), Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    E: Executor,
{
    let cli = Cli::try_parse_from(argv).map_err(Failure::Clap)?;
    let (name, common, trajectory) = match &cli.command {
        Command::Simulate(c) => ("simulate", c, None),
        Command::Estimate { common, trajectory } => {
            ("estimate", common, Some(trajectory.as_path()))
        }
        Command::Risk(c) => ("risk", c, None),
        Command::Rate(c) => ("rate", c, None),
        Command::Efficiency(c) => ("efficiency", c, None),
        Command::Clt(c) => ("clt", c, None),
        Command::Lemmas(c) => ("lemmas", c, None),
        Command::Lan(c) => ("lan", c, None),
        Command::Replay { manifest, out } => {
            replay(manifest, out, exec)?;
            return Ok(());
        }
    };
    let config = RunConfig::load(common.config.as_deref(), &common.overrides)?;
    produce(name, &config, trajectory, &common.out, exec)?;
    Ok(())
}

/// Reruns the subcommand recorded in `manifest` into `out`. Declared inputs
/// must still hash to their recorded digests.
pub fn replay<E: Executor>(manifest: &Path, out: &Path, exec: &E) -> Result<Manifest> {
    let m = Manifest::read(manifest)?;
    let trajectory = match m.inputs.as_slice() {
        [] => None,
        [input] => {
            let path = Path::new(&input.path);
            let bytes = std::fs::read(path).map_err(Error::io(path))?;
            if sha256_hex(&bytes) != input.sha256 {
                return Err(Error::invalid(format!(
                    "{}: contents changed since the manifest was written",
                    input.path
                )));
            }
            Some(path)
        }
        _ => return Err(Error::invalid("manifest: at most one input is supported")),
    };
    produce(&m.subcommand, &m.config, trajectory, out, exec)
}

/// Runs subcommand `name`, writes its outputs and manifest into `out`.
pub fn produce<E: Executor>(
    name: &str,
    config: &RunConfig,
    trajectory: Option<&Path>,
    out: &Path,
    exec: &E,
) -> Result<Manifest> {
    let mut manifest = Manifest::new(name, config);
    let exp = config.experiment();
    let mut files = Files::default();

    if name != "estimate" {
        config.validate()?;
    }
    match name {
        "simulate" => {
            let (noise_id, n) =
                match (&exp.coef_ids[..], &exp.noise_ids[..], &exp.n_grid[..]) {
                    ([_], [p], [n]) => (p, *n),
                    _ => return Err(Error::invalid(
                        "simulate: coef_ids, noise_ids and n_grid must each hold exactly one entry",
                    )),
                };
            let coef = exp.coefs(n)?.remove(0);
            let noise = NoiseDensity::from_id(noise_id, exp.sigma_star)?;
            let t = simulate(&coef, &noise, n, exp.y0, exp.root_seed)?;
            files.emit("trajectory.csv", |w| formats::write_trajectory(w, &t))?;
        }
        "estimate" => {
            let path =
                trajectory.ok_or_else(|| Error::invalid("estimate: --trajectory is required"))?;
            let bytes = std::fs::read(path).map_err(Error::io(path))?;
            manifest.inputs.push(FileDigest {
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            });
            let t = formats::read_trajectory(bytes.as_slice())?;
            let sched = make_schedule(t.n(), exp.beta, exp.z0, exp.gamma)?;
            let kernel = KernelSpec::by_id(&exp.kernel_id)?;
            let e = estimate(&t, &kernel, &sched)?;
            files.emit("estimate.csv", |w| formats::write_estimate(w, &e, &sched))?;
        }
        "risk" => {
            let r = mc_risk(&exp, exec)?;
            files.emit("risk.csv", |w| formats::write_risk(w, &r))?;
            files.emit("panel.csv", |w| formats::write_panel(w, &r))?;
        }
        "rate" => {
            if exp.n_grid.len() < 4 {
                return Err(Error::invalid(format!(
                    "n_grid: a rate fit needs at least 4 sample sizes (got {})",
                    exp.n_grid.len()
                )));
            }
            let r = mc_risk(&exp, exec)?;
            let fits = exp
                .coef_ids
                .iter()
                .map(|id| rate_fit(&r, id))
                .collect::<tvar_core::Result<Vec<_>>>()?;
            files.emit("risk.csv", |w| formats::write_risk(w, &r))?;
            files.emit("panel.csv", |w| formats::write_panel(w, &r))?;
            files.emit("rate.csv", |w| formats::write_rate(w, &fits))?;
        }
        "efficiency" => {
            let r = efficiency(&exp, exec)?;
            files.emit("risk.csv", |w| formats::write_risk(w, &r.risk))?;
            files.emit("panel.csv", |w| formats::write_panel(w, &r.risk))?;
            files.emit("efficiency.csv", |w| formats::write_efficiency(w, &r.rows))?;
        }
        "clt" => {
            let r = clt_diagnostic(&exp, exec)?;
            files.emit("clt.csv", |w| formats::write_clt(w, &r))?;
        }
        "lemmas" => {
            let r = lemma_checks(&exp, exec)?;
            files.emit("lemmas.csv", |w| formats::write_lemmas(w, &r))?;
        }
        "lan" => {
            let r = lan_diagnostic(&exp, exec)?;
            files.emit("lan.csv", |w| formats::write_lan(w, &r))?;
        }
        other => return Err(Error::invalid(format!("unknown subcommand `{other}`"))),
    }

    std::fs::create_dir_all(out).map_err(Error::io(out))?;
    for (file, bytes) in &files.0 {
        let path = out.join(file);
        std::fs::write(&path, bytes).map_err(Error::io(&path))?;
        manifest.outputs.push(FileDigest {
            path: file.to_string(),
            sha256: sha256_hex(bytes),
        });
    }
    manifest.write(out)?;
    Ok(manifest)
}

#[derive(Default)]
struct Files(Vec<(&'static str, Vec<u8>)>);

impl Files {
    fn emit(
        &mut self,
        name: &'static str,
        write: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    ) -> Result<()> {
        let mut bytes = Vec::new();
        write(&mut bytes)?;
        self.0.push((name, bytes));
        Ok(())
    }
}
