use std::io::Write;
use std::net::IpAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use voxfeed_cli::serve::{self, ServeOptions};
use voxfeed_cli::{compile, fetch_output, render_output, CliError, FeedSource, RenderFormat, Repl};
use voxfeed_portal::FetchConfig;

/// Feeds as voice dialogs.
#[derive(Debug, Parser)]
#[command(name = "voxfeed", version)]
struct Cli {
    /// More log output on stderr (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Source {
    /// Feed URL (http, https or file) or a local path.
    url: String,
    #[arg(long)]
    user: Option<String>,
    #[arg(long)]
    pass: Option<String>,
    /// Seconds allowed for the whole fetch.
    #[arg(long, default_value_t = 30)]
    fetch_timeout: u64,
}

impl Source {
    fn feed(&self) -> Result<FeedSource, CliError> {
        FeedSource::new(&self.url, self.user.as_deref(), self.pass.as_deref())
    }

    fn fetch_config(&self) -> FetchConfig {
        let total = Duration::from_secs(self.fetch_timeout.max(1));
        FetchConfig {
            connect_timeout: FetchConfig::default().connect_timeout.min(total),
            total_timeout: total,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print the normalized feed as JSON.
    Fetch(Source),
    /// Print a dialog document or the item grammar.
    Render {
        #[command(flatten)]
        source: Source,
        /// vxml, xv or jsgf.
        #[arg(long)]
        format: String,
        /// Node to render (vxml only; defaults to the channel menu).
        #[arg(long)]
        node: Option<String>,
    },
    /// Walk the feed's dialog from the terminal.
    Navigate(Source),
    /// Run the portal service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        #[arg(long, env = "VOXFEED_STATE", default_value = "voxfeed-state.json")]
        state_file: PathBuf,
        /// Directory served under /ui/.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        /// Submit target for VoiceXML forms; `{node_id}` is substituted.
        #[arg(long)]
        postback_url: Option<String>,
        #[arg(long, default_value_t = 30)]
        fetch_timeout: u64,
    },
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::INFO,
        2 => tracing::Level::DEBUG,
        _ => tracing::Level::TRACE,
    };
    tracing_subscriber::fmt()
        .with_max_level(level)
        .with_writer(std::io::stderr)
        .init();
}

fn emit(bytes: &[u8]) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Fetch(source) => {
            let doc = source.feed()?.load(source.fetch_config())?;
            emit(&fetch_output(&doc))
        }
        Cmd::Render { source, format, node } => {
            let format: RenderFormat = format.parse()?;
            let doc = source.feed()?.load(source.fetch_config())?;
            let (tree, _) = compile(doc)?;
            emit(&render_output(&tree, format, node.as_deref())?)
        }
        Cmd::Navigate(source) => {
            let doc = source.feed()?.load(source.fetch_config())?;
            let (tree, index) = compile(doc)?;
            Repl::new(&tree, &index).run(std::io::stdin().lock(), std::io::stdout().lock())?;
            Ok(())
        }
        Cmd::Serve { port, bind, state_file, ui_dir, postback_url, fetch_timeout } => serve::run(ServeOptions {
            bind,
            port,
            state_file,
            ui_dir,
            postback_url,
            fetch: FetchConfig {
                total_timeout: Duration::from_secs(fetch_timeout.max(1)),
                ..FetchConfig::default()
            },
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("voxfeed: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
