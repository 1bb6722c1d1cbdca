//! Command-line front end: argument handling, experiment runners and report
//! serialization for the `hilab` binary.

pub mod args;
pub mod config;
pub mod experiments;
pub mod report;

use std::path::Path;

use clap::Parser;
use serde_json::json;

use args::Cli;
use experiments::Failure;

pub const WORKERS_VAR: &str = "HILAB_WORKERS";

fn error_record(experiment: Option<&str>, code: u8, kind: &str, message: &str) -> String {
    let record = json!({
        "error": { "exit_code": code, "kind": kind, "message": message },
        "experiment": experiment,
        "status": "error",
    });
    serde_json::to_string_pretty(&record).unwrap() + "\n"
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("{WORKERS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Runs the CLI on `argv` and returns the exit code, the text for stdout and
/// the text for stderr.
pub fn execute(argv: Vec<String>) -> (u8, String, String) {
    let argv = match config::expand_args(argv) {
        Ok(a) => a,
        Err(e) => return (2, error_record(None, 2, "config", &e), format!("error: {e}\n")),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    (if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 }, text, String::new())
                }
                _ => (2, error_record(None, 2, "usage", text.lines().next().unwrap_or("usage error")), text),
            };
        }
    };
    let name = cli.command.name();
    if let Err(e) = configure_workers() {
        return (2, error_record(Some(name), 2, "config", &e), format!("error: {e}\n"));
    }
    let report = experiments::run(&cli.command).and_then(|r| {
        if let Some(dir) = output_dir(&cli.command) {
            r.write(Path::new(dir)).map_err(|e| Failure::Io(format!("cannot write {dir}: {e}")))?;
        }
        Ok(r)
    });
    match report {
        Ok(r) => (if r.passed() { 0 } else { 1 }, r.summary_text(), String::new()),
        Err(f) => {
            let code = f.exit_code();
            let msg = f.message();
            (code, error_record(Some(name), code, f.kind(), &msg), format!("error: {msg}\n"))
        }
    }
}

fn output_dir(cmd: &args::Command) -> Option<&str> {
    use args::Command::*;
    let out = match cmd {
        SimplexVolume(a) => &a.output,
        CocycleEval(a) => &a.output,
        CocycleCheck(a) => &a.output,
        GrowthProfile(a) => &a.output,
        VanestRoundtrip(a) => &a.output,
        ConvPairing(a) => &a.output,
        FourierCheck(a) => &a.output,
        MoritaCheck(a) => &a.output,
        FredholmDemo(a) => &a.output,
        IndexRhs(a) => &a.output,
    };
    out.out.as_deref()
}
