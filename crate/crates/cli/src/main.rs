mod args;
mod config;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use hslab_core::experiments::{ExperimentReport, Verdict};
use hslab_core::io::write_reports;
use hslab_core::rng::entropy_seed;

use args::{Cli, Command};
use config::{load_file, merge, CliResult};

fn write_csv(path: &std::path::Path, reports: &[ExperimentReport]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
    w.write_record(["name", "estimate", "stderr", "bound", "comparison", "verdict", "replicas", "seed"])
        .map_err(|e| e.to_string())?;
    for r in reports {
        let cmp = serde_json::to_value(r.comparison).map_err(|e| e.to_string())?;
        w.write_record([
            r.name.clone(),
            r.estimate.to_string(),
            r.stderr.to_string(),
            r.bound.to_string(),
            cmp.as_str().unwrap_or_default().to_string(),
            r.verdict.to_string(),
            r.replicas.to_string(),
            r.seed.to_string(),
        ])
        .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn execute(cli: Cli) -> CliResult<bool> {
    let file = load_file(cli.common.config.as_deref())?;
    let seed = match cli.common.seed.or(file.seed) {
        Some(s) => s,
        None => entropy_seed(),
    };
    let output = cli.common.output.clone().or(file.output.clone());
    let csv_path = cli.common.csv.clone().or(file.csv.clone());
    let timestamp = cli.common.timestamp || file.timestamp.unwrap_or(false);

    let outcome = match &cli.command {
        Command::Bounds(a) => run::bounds(&merge(a, file.bounds.as_ref(), "bounds")?)?,
        cmd => {
            eprintln!("seed = {seed}");
            match cmd {
                Command::Bounds(_) => unreachable!(),
                Command::Sample(a) => run::sample(&merge(a, file.sample.as_ref(), "sample")?, seed)?,
                Command::Chain(a) => run::chain(&merge(a, file.chain.as_ref(), "chain")?, seed)?,
                Command::Contraction(a) => run::contraction(&merge(a, file.contraction.as_ref(), "contraction")?, seed)?,
                Command::Disagreement(a) => {
                    run::disagreement(&merge(a, file.disagreement.as_ref(), "disagreement")?, seed)?
                }
                Command::Density(a) => run::density(&merge(a, file.density.as_ref(), "density")?, seed)?,
                Command::Stationarity(a) => {
                    run::stationarity(&merge(a, file.stationarity.as_ref(), "stationarity")?, seed)?
                }
                Command::SsmScan(a) => run::ssm_scan(&merge(a, file.ssm_scan.as_ref(), "ssm-scan")?, seed)?,
                Command::FreeVolume(a) => {
                    run::free_volume(&merge(a, file.free_volume.as_ref(), "free-volume")?, seed)?
                }
            }
        }
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    out.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string())?;
    if !outcome.reports.is_empty() {
        let ts = timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        match &output {
            Some(p) => {
                let f = File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?;
                write_reports(BufWriter::new(f), &outcome.reports, ts).map_err(|e| e.to_string())?;
            }
            None => write_reports(&mut out, &outcome.reports, ts).map_err(|e| e.to_string())?,
        }
        if let Some(p) = &csv_path {
            write_csv(p, &outcome.reports)?;
        }
    }
    for r in &outcome.reports {
        eprintln!("{}: {} ({} {} {})", r.name, r.verdict, r.estimate, serde_json::to_value(r.comparison).unwrap_or_default().as_str().unwrap_or(""), r.bound);
    }
    Ok(outcome.reports.iter().all(|r| r.verdict != Verdict::Fail))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
