//! Command-line front end: `proreg run <manifest>` executes the declared
//! tasks and writes digest-sealed certificate files; `proreg verify <file>`
//! replays one certificate. Exit codes: 0 all determined and verified,
//! 2 some task undetermined at its bound, 1 errors.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use proreg::cert::{seal, verify_file, CertificateFile};
use proreg::error::Result;
use proreg::manifest::{
    execute_task, parse_manifest, resolve, Overrides, TaskResult, TaskStatus,
};

#[derive(Parser)]
#[command(name = "proreg", version, about = "Koszul towers, adic functors, and replayable weak-proregularity certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute the tasks of a manifest and write certificate files.
    Run {
        manifest: PathBuf,
        /// Number of concurrent task workers.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output directory for certificate files (created if missing).
        #[arg(long, default_value = "certificates")]
        out: PathBuf,
        /// Override every task's bound.
        #[arg(long)]
        bound: Option<usize>,
        /// Override every task's precision.
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Replay a certificate file.
    Verify { certificate: PathBuf },
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn run(
    manifest_path: &Path,
    jobs: usize,
    out_dir: &Path,
    overrides: Overrides,
) -> Result<i32> {
    let src = std::fs::read_to_string(manifest_path)?;
    let manifest = parse_manifest(&src)?;
    let resolved = resolve(&manifest)?;
    std::fs::create_dir_all(out_dir)?;

    let n = manifest.tasks.len();
    let mut slots: Vec<Option<Result<TaskResult>>> = Vec::with_capacity(n);
    slots.resize_with(n, || None);
    let slots = Mutex::new(slots);
    let next = Mutex::new(0usize);
    let workers = jobs.max(1).min(n.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    if *guard >= n {
                        return;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let result = execute_task(&resolved, &manifest.tasks[idx], overrides);
                slots.lock().unwrap()[idx] = Some(result);
            });
        }
    });

    let mut exit = 0;
    for (task, slot) in manifest.tasks.iter().zip(slots.into_inner().unwrap()) {
        let result = slot.expect("every task executed");
        match result {
            Ok(TaskResult { echo, status, payload }) => {
                let mut line = match &status {
                    TaskStatus::Determined => format!("task {} [{}]: determined", echo.name, echo.kind),
                    TaskStatus::Undetermined(reason) => {
                        exit = exit.max(2);
                        format!("task {} [{}]: undetermined ({reason})", echo.name, echo.kind)
                    }
                };
                if let Some(payload) = payload {
                    let cf = seal(echo.clone(), payload);
                    // self-check before write: every emitted certificate verifies
                    if let Err(e) = verify_file(&cf) {
                        println!("task {} [{}]: error (self-verification: {e})", echo.name, echo.kind);
                        exit = 1;
                        continue;
                    }
                    let path = out_dir.join(format!("{}.json", sanitize(&echo.name)));
                    let body = serde_json::to_string_pretty(&cf).expect("serializable payload");
                    if let Err(e) = write_atomic(&path, &body) {
                        println!("task {} [{}]: error (write: {e})", echo.name, echo.kind);
                        exit = 1;
                        continue;
                    }
                    line.push_str(&format!(" -> {}", path.display()));
                }
                println!("{line}");
            }
            Err(e) => {
                println!("task {} [{}]: error ({e})", task.name, task.kind);
                exit = 1;
            }
        }
    }
    Ok(exit)
}

fn verify(path: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let cf: CertificateFile =
        serde_json::from_str(&text).map_err(proreg::error::Error::from)?;
    match verify_file(&cf) {
        Ok(()) => {
            println!("certificate {} [{}]: verified", cf.task.name, cf.task.kind);
            Ok(0)
        }
        Err(e) => {
            println!("certificate {} [{}]: REJECTED ({e})", cf.task.name, cf.task.kind);
            Ok(1)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Run { manifest, jobs, out, bound, precision } => run(
            manifest,
            *jobs,
            out,
            Overrides { bound: *bound, precision: *precision },
        ),
        Cmd::Verify { certificate } => verify(certificate),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
