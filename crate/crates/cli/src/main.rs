mod config;
mod csv;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use excirot_core::designer::{design_detuning, max_rotation_angle, DesignTarget};
use excirot_core::experiment::{normalized_difference, sweep_delay, sweep_detuning, ExperimentConfig};
use excirot_core::rosenzener::transferred_fraction;
use excirot_core::specfun::Lanczos;
use excirot_core::verify;

use config::{grid_points, ControlPolarization, MethodName, RunConfig};
use csv::{format_number, format_optional, Table};
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "excirot",
    version,
    about = "Optical rotation of a quantum-dot exciton spin by detuned sech pulses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P_XX, I_H, I_V and the normalized D_VH against pulse delay.
    SweepDelay(CommonArgs),
    /// P_XX, D⁰_VH and θ against control-pulse detuning.
    SweepDetuning(CommonArgs),
    /// Detuning that produces a target rotation angle.
    Design(CommonArgs),
    /// Self-check of the special functions and the analytic map against the propagator.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to `output_path` from the config, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for symmetry with the other commands; verify always runs both methods.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Analytic,
    Numeric,
}

impl From<MethodArg> for MethodName {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Analytic => MethodName::Analytic,
            MethodArg::Numeric => MethodName::Numeric,
        }
    }
}

fn destination(out: &Option<PathBuf>, cfg: Option<&RunConfig>) -> Option<PathBuf> {
    out.clone().or_else(|| cfg.and_then(|c| c.output_path.clone()))
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn experiment(cfg: &RunConfig, method: Option<MethodArg>) -> Result<ExperimentConfig, CliError> {
    Ok(ExperimentConfig {
        dot: cfg.dot()?,
        first_pol: cfg.first_pol(),
        pulse: cfg.pulse()?,
        method: cfg.method(method.map(Into::into)),
        settings: cfg.settings()?,
    })
}

fn cmd_sweep_delay(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    if cfg.control()?.polarization == ControlPolarization::Both {
        return Err(CliError::Config(
            "[control_pulse] polarization = \"both\" is only supported by sweep-detuning".into(),
        ));
    }
    let grid = cfg
        .delay_ps
        .ok_or_else(|| CliError::Config("missing section [delay_ps]".into()))?;
    let taus = grid_points("delay_ps", grid.start, grid.stop, grid.step)?;
    let exp = experiment(&cfg, args.method)?;
    let series = normalized_difference(&sweep_delay(&exp, &taus)?)?;
    let mut table = Table::new(&["tau_ps", "p_xx", "i_h", "i_v", "d_vh_norm"]);
    for (tau, o) in &series.points {
        table.row(&[tau, &o.p_xx, &o.i_h, &o.i_v, &o.d_vh].map(|v| format_number(*v)));
    }
    emit(&table.finish(), destination(&args.out, Some(&cfg)).as_deref())
}

fn cmd_sweep_detuning(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let grid = cfg
        .detuning_uev
        .ok_or_else(|| CliError::Config("missing section [detuning_ueV]".into()))?;
    let deltas = grid_points("detuning_ueV", grid.start, grid.stop, grid.step)?;
    let exp = experiment(&cfg, args.method)?;
    let both = cfg.control()?.polarization == ControlPolarization::Both;

    let mut runs = vec![("co", exp)];
    if both {
        let cross = ExperimentConfig {
            pulse: exp.pulse.with_pol(exp.first_pol.opposite()),
            ..exp
        };
        runs.push(("cross", cross));
    }
    let mut header = vec!["delta_ueV", "delta_over_sigma", "p_xx", "d0_vh", "theta_rad"];
    if both {
        header.insert(0, "relative_pol");
    }
    let mut table = Table::new(&header);
    for (label, run) in runs {
        let series = sweep_detuning(&run, &deltas, grid.tau_ps)?;
        for (delta, o) in &series.points {
            let mut row = vec![
                format_number(*delta),
                format_number(delta / run.pulse.bandwidth_uev),
                format_number(o.p_xx),
                format_number(o.d0_vh),
                format_optional(o.theta_rad),
            ];
            if both {
                row.insert(0, label.to_string());
            }
            table.row(&row);
        }
    }
    emit(&table.finish(), destination(&args.out, Some(&cfg)).as_deref())
}

fn cmd_design(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let pulse = cfg.pulse()?;
    let (theta, sign_preference) = cfg.sign_preference()?;
    let target = DesignTarget {
        theta_rad: theta,
        alpha: pulse.alpha,
        bandwidth_uev: pulse.bandwidth_uev,
        sign_preference,
    };
    let peak = max_rotation_angle(target.alpha, target.bandwidth_uev)?;
    let result = design_detuning(&target)?;
    let designed = result.pulse(&target);

    eprintln!("target theta      {} rad", format_number(theta));
    eprintln!("rabi ratio        {}", format_number(target.alpha));
    eprintln!("bandwidth         {} ueV", format_number(target.bandwidth_uev));
    eprintln!(
        "theta_max         {} rad at {} ueV",
        format_number(peak.theta_max),
        format_number(peak.delta_star_uev)
    );
    eprintln!(
        "detuning          {} ueV (delta/sigma = {})",
        format_number(result.detuning_uev),
        format_number(designed.reduced_detuning())
    );
    eprintln!("achieved theta    {} rad", format_number(result.achieved_theta));
    eprintln!("residual P_XX     {}", format_number(transferred_fraction(&designed)));
    eprintln!("iterations        {}", result.iterations);

    let mut table = Table::new(&[
        "theta_target_rad",
        "rabi_ratio",
        "bandwidth_ueV",
        "delta_ueV",
        "delta_over_sigma",
        "theta_achieved_rad",
        "residual_p_xx",
        "theta_max_rad",
    ]);
    table.row(
        &[
            theta,
            target.alpha,
            target.bandwidth_uev,
            result.detuning_uev,
            designed.reduced_detuning(),
            result.achieved_theta,
            result.residual_p_xx,
            peak.theta_max,
        ]
        .map(format_number),
    );
    emit(&table.finish(), destination(&args.out, Some(&cfg)).as_deref())
}

fn lanczos_from(cfg: Option<&RunConfig>) -> Result<Lanczos, CliError> {
    let Some(section) = cfg.and_then(|c| c.verify.as_ref()) else {
        return Ok(Lanczos::GODFREY);
    };
    let g = section.lanczos_g.unwrap_or(Lanczos::GODFREY.g);
    let coefficients = match &section.lanczos_coefficients {
        None => Lanczos::GODFREY.coefficients,
        Some(v) => v.as_slice().try_into().map_err(|_| {
            CliError::Config(format!(
                "[verify] lanczos_coefficients needs {} values, got {}",
                Lanczos::GODFREY.coefficients.len(),
                v.len()
            ))
        })?,
    };
    Ok(Lanczos::with_coefficients(g, coefficients))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = args.config.as_deref().map(RunConfig::load).transpose()?;
    let lanczos = lanczos_from(cfg.as_ref())?;
    let mut grid = verify::VerifyGrid::default();
    if let Some(c) = &cfg {
        if c.propagation.is_some() {
            grid.settings = c.settings()?;
        }
    }
    let report = verify::run_with_grid(&lanczos, &grid);
    let text = format!("{report}\n");
    match destination(&args.out, cfg.as_ref()) {
        Some(p) => {
            std::fs::write(&p, &text)?;
            print!("{text}");
        }
        None => print!("{text}"),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::SweepDelay(a) => cmd_sweep_delay(a),
        Command::SweepDetuning(a) => cmd_sweep_detuning(a),
        Command::Design(a) => cmd_design(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("excirot: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
