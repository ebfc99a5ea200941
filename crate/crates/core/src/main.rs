use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::Parser;
use wcalc::cli::{render, run, Cli};
use wcalc::Error;

/// Caps the global rayon pool at WCALC_THREADS.
fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("WCALC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("WCALC_THREADS='{v}' is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(e.to_string()))
}

fn execute(cli: &Cli) -> Result<(), Error> {
    configure_threads()?;
    let outcome = run(cli)?;
    let (text, side) = render(cli, &outcome)?;
    let write = |path: &std::path::Path, body: &str| {
        std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    };
    match &cli.out {
        Some(path) => write(path, &text)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => return Err(Error::Io(e.to_string())),
                _ => {}
            }
        }
    }
    for (path, body) in side {
        write(&path, &body)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
