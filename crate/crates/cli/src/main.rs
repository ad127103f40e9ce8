mod args;
mod input;
mod report;

use std::fmt;
use std::net::SocketAddr;
use std::process::ExitCode;

use anyhow::{Context, Result};
use attnscope_core::index::write_atomic;
use attnscope_core::render::{
    render_comparison_svg, render_matrix_text, render_record_svg, RenderOptions,
};
use attnscope_core::{pair_datasets, save_index, save_paired_index, Index, ScoredDataset, SortKey};
use attnscope_service::ServiceConfig;
use clap::Parser;

use args::{Cli, Command, CompareArgs, RenderArgs, ScoreArgs, ServeArgs, SystemArg, TopArgs};

/// A command line that parsed but cannot be carried out as given.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Score(args) => score(args),
        Command::Top(args) => top(args),
        Command::Render(args) => render(args),
        Command::Serve(args) => serve(args),
        Command::Compare(args) => compare(args),
    }
}

fn score(args: ScoreArgs) -> Result<()> {
    let scored = input::load_input(&args.input, &args.input_args, args.system.as_deref())?;
    save_index(&scored, &args.output)
        .with_context(|| format!("writing {}", args.output.display()))?;
    print!("{}", report::score_summary(&scored));
    println!("wrote {}", args.output.display());
    Ok(())
}

fn pick(index: &Index, system: SystemArg) -> Result<&ScoredDataset> {
    match (index, system) {
        (Index::Single(d), SystemArg::A) | (Index::Paired(d, _), SystemArg::A) => Ok(d),
        (Index::Paired(_, d), SystemArg::B) => Ok(d),
        (Index::Single(_), SystemArg::B) => Err(usage("--system b needs a paired index")),
    }
}

fn top(args: TopArgs) -> Result<()> {
    let index = input::load_source(&args.source, &args.input_args)?;
    let scored = pick(&index, args.system)?;
    let key = SortKey::new(args.sort.into(), args.dir.into());
    let positions: Vec<usize> = scored
        .sort_indices(key)?
        .into_iter()
        .filter(|&p| !args.flagged_only || !scored.scores()[p].flags.is_empty())
        .take(args.count)
        .collect();
    print!("{}", report::top_table(scored, &positions));
    Ok(())
}

fn render(args: RenderArgs) -> Result<()> {
    let index = input::load_source(&args.source, &args.input_args)?;
    let not_found = || anyhow::anyhow!("no record with id {:?}", args.id);
    let output = match &index {
        Index::Single(scored) => {
            let position = scored
                .dataset()
                .position_of(&args.id)
                .ok_or_else(not_found)?;
            let (record, scores) = scored.get(position).expect("position from lookup");
            if args.svg.is_some() {
                render_record_svg(record, scores)
            } else {
                let options = RenderOptions {
                    max_width: args.width,
                    color: args.color,
                    ..RenderOptions::default()
                };
                render_matrix_text(record, &options)
            }
        }
        Index::Paired(a, b) => {
            let position = a
                .dataset()
                .position_of(&args.id)
                .or_else(|| b.dataset().position_of(&args.id))
                .ok_or_else(not_found)?;
            let pairs = pair_datasets(a, b)?;
            let pair = &pairs[position];
            if args.svg.is_some() {
                render_comparison_svg(pair, [a.system_name(), b.system_name()])
            } else {
                let options = RenderOptions {
                    max_width: args.width,
                    color: args.color,
                    ..RenderOptions::default()
                };
                format!(
                    "{}\n{}\n{}\n{}",
                    a.system_name(),
                    render_matrix_text(pair.record_a, &options),
                    b.system_name(),
                    render_matrix_text(pair.record_b, &options)
                )
            }
        }
    };
    match &args.svg {
        Some(path) => {
            write_atomic(path, output.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{output}"),
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let index = match (&args.index, args.input.as_slice()) {
        (Some(path), _) => input::load_index_file(path, &args.input_args)?,
        (None, [one]) => Index::Single(input::load_input(one, &args.input_args, None)?),
        (None, [a, b]) => {
            let a = input::load_input(a, &args.input_args, None)?;
            let b = input::load_input(b, &args.input_args, None)?;
            Index::paired(a, b)?
        }
        (None, _) => return Err(usage("serve takes one --input, or two for comparison mode")),
    };
    let config = ServiceConfig {
        ui_dir: args.ui_dir.clone(),
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let runtime = tokio::runtime::Runtime::new().context("starting the async runtime")?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        let local = listener.local_addr()?;
        let mode = if matches!(index, Index::Paired(..)) {
            "comparison"
        } else {
            "single"
        };
        println!("serving {mode} index on http://{local}/");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        attnscope_service::serve(
            listener,
            attnscope_service::router(index, &config),
            shutdown,
        )
        .await
        .context("server failed")
    })
}

fn compare(args: CompareArgs) -> Result<()> {
    let [name_a, name_b] = match &args.names {
        Some(names) => [Some(names[0].as_str()), Some(names[1].as_str())],
        None => [None, None],
    };
    let a = input::load_input(&args.input_a, &args.input_args, name_a)?;
    let b = input::load_input(&args.input_b, &args.input_args, name_b)?;
    let pairs = pair_datasets(&a, &b)?;
    print!("{}", report::compare_summary(&a, &b, &pairs));
    save_paired_index(&a, &b, &args.output)
        .with_context(|| format!("writing {}", args.output.display()))?;
    println!("wrote {}", args.output.display());
    Ok(())
}
