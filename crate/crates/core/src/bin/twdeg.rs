//! `twdeg`: runs the subdegree table checks and named lemma checks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twdeg::verify::{
    certificates_of, replay_certificates, run_named, CheckResult, Context, Format, Report,
    RunConfig, Status, LEMMA_IDS,
};
use twdeg::wreath::certificate::SubdegreeCertificate;
use twdeg::{Error, Result};

#[derive(Parser)]
#[command(
    name = "twdeg",
    version,
    about = "Subdegree verifier for twisted wreath groups over PSL(2,q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Subdegrees of G(m,q) from conjugacy classes and named subgroups.
    Table1,
    /// Pairs (r, d) of subdegrees with gcd checks.
    Table2,
    /// Point stabilizers H_f, H_g for m = 2 and their indices.
    Table4,
    /// One named lemma check; `twdeg lemma list` prints the ids.
    Lemma { id: String },
    /// Every table and lemma check.
    Report,
    /// Replays certificates from a report or a certificate list.
    Replay { file: PathBuf },
}

#[derive(Args)]
struct Opts {
    /// Field orders, comma separated (default: per command).
    #[arg(long, global = true, value_delimiter = ',')]
    q: Vec<u32>,
    /// Degrees m, comma separated, 2..=6 (default: per command).
    #[arg(long, global = true, value_delimiter = ',')]
    m: Vec<usize>,
    /// Include the long-running checks.
    #[arg(long, global = true)]
    long: bool,
    /// Worker threads.
    #[arg(long, global = true, env = "TWDEG_WORKERS")]
    workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Witness cache file, read and updated.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Write the subdegree certificates of the run to this file.
    #[arg(long, global = true)]
    certs: Option<PathBuf>,
}

fn config(opts: &Opts) -> Result<RunConfig> {
    let mut c = RunConfig {
        q: opts.q.clone(),
        m: opts.m.clone(),
        long_running: opts.long,
        workers: opts.workers,
        out: opts.out.clone(),
        format: opts.format,
        cache: opts.cache.clone(),
        aliases: Vec::new(),
    };
    c.normalize()?;
    Ok(c)
}

fn load_certificates(file: &PathBuf) -> Result<Vec<SubdegreeCertificate>> {
    let text = std::fs::read_to_string(file)?;
    if let Ok(report) = Report::from_json(&text) {
        return Ok(certificates_of(&report.results));
    }
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))
}

fn run(cli: Cli) -> Result<i32> {
    if let Command::Lemma { id } = &cli.command {
        if id == "list" {
            for id in LEMMA_IDS {
                println!("{id}");
            }
            return Ok(0);
        }
    }
    let cfg = config(&cli.opts)?;
    let ctx = Context::new(cfg.clone())?;
    let results: Vec<CheckResult> = match &cli.command {
        Command::Table1 => run_named(&ctx, "table1")?,
        Command::Table2 => run_named(&ctx, "table2")?,
        Command::Table4 => run_named(&ctx, "table4")?,
        Command::Report => run_named(&ctx, "report")?,
        Command::Lemma { id }
            if ["table1", "table2", "table4", "report"].contains(&id.as_str()) =>
        {
            return Err(Error::UnknownLemma(id.clone()))
        }
        Command::Lemma { id } => run_named(&ctx, id)?,
        Command::Replay { file } => {
            let certs = load_certificates(file)?;
            replay_certificates(&certs, |q| ctx.psl(q))
        }
    };
    ctx.save_cache()?;
    let report = Report::new(cfg.clone(), results);
    if let Some(path) = &cli.opts.certs {
        std::fs::write(
            path,
            serde_json::to_string_pretty(&certificates_of(&report.results))?,
        )?;
    }
    for r in &report.results {
        eprintln!(
            "{:<13} {:>7}ms  {}",
            r.status.as_str(),
            r.runtime_ms,
            r.check_id
        );
        if r.status == Status::Fail {
            eprintln!("    expected: {}\n    actual:   {}", r.expected, r.actual);
        }
    }
    for (from, to) in &cfg.aliases {
        eprintln!(
            "note: q = {from} ran as q = {to} (PSL(2,{from}) and PSL(2,{to}) are isomorphic)"
        );
    }
    eprintln!(
        "{} passed, {} failed, {} skipped (long)",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::SkippedLong)
    );
    match &cfg.out {
        Some(path) => report.write(path, cfg.format)?,
        None => {
            let text = report.render(cfg.format)?;
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("twdeg: {e}");
            ExitCode::from(2)
        }
    }
}
