use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nhqsd::discrimination::{
    contextuality, mcd_classical_bound, mcd_closed_form_as_printed, mcd_confidence,
    med_classical_bound, med_closed_form_as_printed, med_optimal, SolverOpts,
};
use nhqsd::sweep::{
    analyze_series, format_sig9, group_by_nh, read_records, reproduce_figure, run_time_sweep,
    write_records, ConfigOverrides, FigureId, FigureOptions, DEFAULT_FIGURE_NH,
};
use nhqsd::{Ensemble, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "nhqsd", version, about = "Contextuality witnesses for qubits under PT / anti-PT dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a time sweep and write one record per (nh, t) sample.
    Sweep(SweepArgs),
    /// Write the three panel CSVs of figure 1-4.
    Figure(FigureArgs),
    /// Summarize each nh curve of a sweep file: period, plateau, recovery.
    Analyze {
        /// CSV or JSON written by `sweep`.
        file: PathBuf,
    },
    /// Print closed-form, certified and classical values for the mirror ensemble.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// 1-based state heralded by the MCD outcome.
        #[arg(long, default_value_t = 1)]
        target: usize,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    t_start: Option<String>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    t_end: Option<String>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    t_step: Option<String>,
    /// adaptive | fixed
    #[arg(long)]
    mode: Option<String>,
    /// fixed | reweighted
    #[arg(long)]
    priors: Option<String>,
    /// 1-based MCD target (1..3).
    #[arg(long)]
    target: Option<String>,
}

impl GridArgs {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("t-start", &self.t_start),
            ("t-end", &self.t_end),
            ("t-step", &self.t_step),
            ("mode", &self.mode),
            ("priors", &self.priors),
            ("target", &self.target),
        ]
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// `key = value` file with the same keys as the flags; flags win.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// pt | apt
    #[arg(long)]
    kind: Option<String>,
    /// med | mcd
    #[arg(long)]
    scenario: Option<String>,
    /// Comma-separated non-Hermiticity values.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    nh: Option<String>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, value_name = "REAL", allow_hyphen_values = true)]
    theta: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure number: 1 PT/MED, 2 APT/MED, 3 PT/MCD, 4 APT/MCD.
    id: String,
    /// Comma-separated non-Hermiticity values (default 0.2,0.5,0.8,1.5,2).
    #[arg(long, value_name = "LIST")]
    nh: Option<String>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        2
    } else if e.is_non_convergence() {
        3
    } else {
        1
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Sweep(args) => sweep(args),
        Command::Figure(args) => figure(args),
        Command::Analyze { file } => analyze(&file),
        Command::Bounds { p, theta, target } => bounds(p, theta, target),
    }
}

fn apply_all<'a>(
    overrides: &mut ConfigOverrides,
    pairs: impl IntoIterator<Item = (&'static str, &'a Option<String>)>,
) -> Result<()> {
    for (key, value) in pairs {
        if let Some(v) = value {
            overrides
                .apply(key, v)
                .map_err(|e| Error::Config(format!("--{key}: {}", strip_config(e))))?;
        }
    }
    Ok(())
}

fn strip_config(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => ConfigOverrides::from_file(path)?,
        None => ConfigOverrides::default(),
    };
    let mut flags = ConfigOverrides::default();
    apply_all(
        &mut flags,
        [
            ("kind", &args.kind),
            ("scenario", &args.scenario),
            ("nh", &args.nh),
            ("p", &args.p),
            ("theta", &args.theta),
            ("out", &args.out),
            ("format", &args.format),
        ],
    )?;
    apply_all(&mut flags, args.grid.pairs())?;
    let config = file.merge(flags).into_config()?;
    let records = run_time_sweep(&config)?;
    write_records(&records, config.output.as_deref(), config.format)
}

fn figure(args: FigureArgs) -> Result<()> {
    let id: FigureId = args.id.parse()?;
    let mut o = ConfigOverrides::default();
    apply_all(&mut o, [("nh", &args.nh)])?;
    apply_all(&mut o, args.grid.pairs())?;
    let nh_set = o.nh_values.clone().unwrap_or_else(|| DEFAULT_FIGURE_NH.to_vec());
    // validate the grid through the ordinary sweep path
    let base = ConfigOverrides {
        nh_values: Some(nh_set.clone()),
        ..o
    }
    .into_config()?;
    let opts = FigureOptions {
        t_start: base.t_start,
        t_end: base.t_end,
        t_step: base.t_step,
        measurement_mode: base.measurement_mode,
        prior_handling: base.prior_handling,
        mcd_target: base.mcd_target,
        solver: base.solver,
    };
    for path in reproduce_figure(id, &nh_set, &args.out_dir, &opts)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn analyze(file: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(file).map_err(|source| Error::Io {
        path: file.clone(),
        source,
    })?;
    let records = read_records(&text)?;
    if records.is_empty() {
        return Err(Error::Parse(format!("{}: no records", file.display())));
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), format_sig9);
    println!("nh\tregime\tperiod\tplateau\tplateau_t\tmin\tmax\trecovery");
    for (nh, group) in group_by_nh(&records) {
        let a = analyze_series(&group)?;
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            format_sig9(nh),
            group[0].regime,
            opt(a.period_estimate),
            opt(a.plateau_value),
            opt(a.plateau_time),
            format_sig9(a.min_value),
            format_sig9(a.max_value),
            a.recovery_exceeds_initial,
        );
    }
    Ok(())
}

fn bounds(p: f64, theta: f64, target: usize) -> Result<()> {
    let ensemble = Ensemble::mirror(p, theta)?;
    if !(1..=ensemble.len()).contains(&target) {
        return Err(Error::Config(format!("target must be 1, 2 or 3, got {target}")));
    }
    let med = med_optimal(&ensemble, &SolverOpts::default())?;
    let mcd = mcd_confidence(&ensemble, target - 1)?;
    let med_classical = med_classical_bound(p, theta);
    let mcd_classical = mcd_classical_bound(p, theta);
    let med_report = contextuality(med.success, med_classical);
    let mcd_report = contextuality(mcd.confidence, mcd_classical);
    let f = |x: f64| format!("{:<16}", format_sig9(x));

    println!("p = {}, theta = {}", format_sig9(p), format_sig9(theta));
    println!("{:<8}{:<16}{:<16}{:<16}{:<16}witnessed", "", "closed-form", "certified", "classical", "gap");
    println!(
        "{:<8}{}{}{}{}{}",
        "MED",
        f(med_closed_form_as_printed(p, theta)),
        f(med.success),
        f(med_classical),
        f(med_report.gap),
        med_report.witnessed
    );
    println!(
        "{:<8}{}{}{}{}{}",
        "MCD",
        f(mcd_closed_form_as_printed(p, theta)),
        f(mcd.confidence),
        f(mcd_classical),
        f(mcd_report.gap),
        mcd_report.witnessed
    );
    println!(
        "MED certificate residual {:.3e}; MCD target {target} (closed-form MCD value is for state 1)",
        med.certificate_residual
    );
    Ok(())
}
