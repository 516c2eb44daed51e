//! `crate2bib`: print BibTeX entries for a crates.io package.
//!
//! Exit codes: 0 success, 1 package or version not found, 2 usage error,
//! 3 network failure (including an offline cache miss).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use crate2bib::http::{DEFAULT_REGISTRY, DEFAULT_USER_AGENT};
use crate2bib::{
    gather_candidates, render_candidates, Cache, CacheMode, Client, ClientConfig, Error,
    GatherOptions, VersionRequest,
};

#[derive(Debug, Parser)]
#[command(name = "crate2bib", version, about = "Generate BibTeX entries for a crates.io package")]
struct Cli {
    /// Package name on the registry.
    package: String,

    /// `latest`, a major (`1`), a major.minor (`1.2`) or an exact version.
    #[arg(value_name = "VERSION", default_value = "latest")]
    requested: String,

    /// Write entries to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Do not look for CITATION.cff in the repository.
    #[arg(long)]
    no_cff: bool,

    /// Probe this branch before `main` and `master`. Repeatable.
    #[arg(long, value_name = "NAME")]
    branch: Vec<String>,

    #[arg(long, value_name = "STRING", default_value = DEFAULT_USER_AGENT)]
    user_agent: String,

    /// Use cached responses only; never touch the network.
    #[arg(long)]
    offline: bool,

    /// Defaults to $CRATE2BIB_CACHE_DIR, then the platform cache directory.
    #[arg(long, value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    /// Lifetime of cached responses.
    #[arg(long, value_name = "SECONDS", default_value_t = 86_400)]
    ttl: u64,

    /// Registry base URL.
    #[arg(long, value_name = "URL", default_value = DEFAULT_REGISTRY)]
    registry: String,
}

const EXIT_NOT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NETWORK: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        "NotFound" | "NoMatch" | "AllYanked" => EXIT_NOT_FOUND,
        "InvalidName" | "InvalidVersionRequest" | "Config" => EXIT_USAGE,
        _ => EXIT_NETWORK,
    }
}

fn open_cache(cli: &Cli) -> Cache {
    let mode = if cli.offline {
        CacheMode::Offline
    } else {
        CacheMode::Online
    };
    let cache = match Cache::resolve_dir(cli.cache_dir.as_deref()) {
        Some(dir) => Cache::open(&dir).unwrap_or_else(|e| {
            eprintln!("warning: cache disabled: {e}");
            Cache::disabled()
        }),
        None => Cache::disabled(),
    };
    cache.with_ttl(Duration::from_secs(cli.ttl)).with_mode(mode)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let config = ClientConfig::new(&cli.user_agent)?.with_base_url(&cli.registry)?;
    let request: VersionRequest = cli.requested.parse()?;
    let client = Client::new(config, open_cache(cli))?;
    let options = GatherOptions {
        probe_cff: !cli.no_cff,
        extra_branches: cli.branch.clone(),
    };

    let candidates = gather_candidates(&client, &cli.package, &request, &options)?;
    for warning in candidates.iter().flat_map(|c| &c.warnings) {
        eprintln!("warning: {warning}");
    }

    let output = render_candidates(&candidates);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output).map_err(|e| (path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| ("stdout".to_string(), e))
        }
    };
    if let Err((target, e)) = written {
        eprintln!("error: writing {target}: {e}");
        std::process::exit(EXIT_NETWORK.into());
    }
    Ok(())
}
