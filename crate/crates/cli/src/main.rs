use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use opsets_core::activation::strong_locality_over;
use opsets_core::measurement::EnumerationConfig;
use opsets_core::{
    corpus, is_activable, is_strongly_local, is_upb, parse_pvm, parse_state_set, render_tiling,
    report, search_protocol, serialize_state_set, Bipartition, Error, StateSet, TilingFormat,
    DEFAULT_MAX_DEPTH,
};

#[derive(Parser)]
#[command(
    name = "opsets",
    version,
    about = "Exact analysis of orthogonal product state sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonality, completeness class and local redundancy.
    Analyze { input: String },
    /// Orthogonality-preserving constraint space and PVMs per party.
    Constraints {
        input: String,
        #[arg(long)]
        party: Option<usize>,
    },
    /// Apply a PVM literal and report each outcome.
    Measure {
        input: String,
        #[arg(long)]
        pvm: String,
    },
    /// Search for a projective LPCC discrimination protocol.
    Distinguish {
        input: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        depth: usize,
    },
    /// Decide whether the set is an unextendible product basis.
    Upb { input: String },
    /// Search for a local activation witness.
    Activate {
        input: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        depth: usize,
    },
    /// Activability across every bipartition, or the one given.
    StrongLocal {
        input: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        depth: usize,
        #[arg(long)]
        bipartition: Option<String>,
    },
    /// Tiling diagram of a bipartite set.
    Render {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// PVM literal whose element is highlighted.
        #[arg(long)]
        pvm: Option<String>,
        #[arg(long, default_value_t = 0)]
        element: usize,
    },
    /// List bundled sets, or print one in canonical form.
    Corpus { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

/// Property violations found in otherwise well-formed input.
struct Violation(String);

fn load(input: &str) -> anyhow::Result<StateSet> {
    if Path::new(input).exists() {
        let text = fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        return parse_state_set(&text).with_context(|| format!("in {input}"));
    }
    corpus::by_name(input).ok_or_else(|| {
        anyhow!(
            "{input}: no such file, and not a bundled set ({})",
            corpus::NAMES.join(", ")
        )
    })
}

fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<Option<Violation>> {
    let text = match cli.command {
        Command::Analyze { input } => {
            let s = load(&input)?;
            let v = report::analyze(&s)?;
            let violation = v
                .get("violation")
                .map(|pair| Violation(format!("states {pair} are not orthogonal")));
            write!(out, "{}", report::to_text(&v))?;
            return Ok(violation);
        }
        Command::Constraints { input, party } => {
            let s = load(&input)?;
            let party = party
                .map(|p| p.checked_sub(1).ok_or(Error::InvalidParty(0)))
                .transpose()?;
            report::to_text(&report::constraints(&s, party)?)
        }
        Command::Measure { input, pvm } => {
            let s = load(&input)?;
            let text = fs::read_to_string(&pvm).with_context(|| format!("reading {pvm}"))?;
            let m = parse_pvm(&text, s.dims()).with_context(|| format!("in {pvm}"))?;
            report::to_text(&report::measurement(&s, &m)?)
        }
        Command::Distinguish { input, depth } => {
            let s = load(&input)?;
            report::to_text(&report::distinguish(&search_protocol(&s, depth)?))
        }
        Command::Upb { input } => {
            let s = load(&input)?;
            report::to_text(&report::upb(&is_upb(&s)?))
        }
        Command::Activate { input, depth } => {
            let s = load(&input)?;
            report::to_text(&report::activate(&is_activable(&s, depth)?))
        }
        Command::StrongLocal {
            input,
            depth,
            bipartition,
        } => {
            let s = load(&input)?;
            let r = match bipartition {
                Some(b) => {
                    let b = Bipartition::parse(&b, s.num_parties())?;
                    strong_locality_over(&s, &[b], depth, &EnumerationConfig::default())?
                }
                None => is_strongly_local(&s, depth)?,
            };
            report::to_text(&report::strong_local(&r))
        }
        Command::Render {
            input,
            format,
            pvm,
            element,
        } => {
            let s = load(&input)?;
            let highlight = match pvm {
                Some(path) => {
                    let text =
                        fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
                    let m = parse_pvm(&text, s.dims()).with_context(|| format!("in {path}"))?;
                    let Some(e) = m.elements().get(element) else {
                        bail!("--element {element}: the PVM has {} elements", m.len());
                    };
                    Some(e.clone())
                }
                None => None,
            };
            let format = match format {
                Format::Ascii => TilingFormat::Ascii,
                Format::Svg => TilingFormat::Svg,
            };
            render_tiling(&s, format, highlight.as_ref())?
        }
        Command::Corpus { name } => match name {
            None => corpus::NAMES.iter().map(|n| format!("{n}\n")).collect(),
            Some(n) => {
                let s = corpus::by_name(&n).ok_or_else(|| anyhow!("{n}: not a bundled set"))?;
                serialize_state_set(&s)
            }
        },
    };
    write!(out, "{text}")?;
    Ok(None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Violation(msg))) => {
            eprintln!("opsets: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("opsets: {e:#}");
            let violation = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::NotOrthogonal(..))));
            ExitCode::from(if violation { 2 } else { 1 })
        }
    }
}
