//! `rasmi`: convert informal Persian, and build and evaluate a parallel
//! corpus from the command line.

mod commands;

use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use rasmi_core::converter::DataPaths;

#[derive(Parser)]
#[command(name = "rasmi", version, about = "Informal-to-formal Persian conversion and corpus tools")]
struct Cli {
    #[command(flatten)]
    data: DataArgs,
    #[command(subcommand)]
    command: Command,
}

/// Replacements for the built-in data files.
#[derive(Args, Debug, Clone, Default)]
struct DataArgs {
    /// Rule file
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_RULES")]
    rules: Option<PathBuf>,
    /// Phrase lexicon (TSV)
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Formal vocabulary (TSV)
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_VOCAB")]
    vocab: Option<PathBuf>,
    /// Verb lexicon (TSV)
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_VERBS")]
    verbs: Option<PathBuf>,
    /// Suffix ambiguity table (TSV)
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_AMBIGUITY")]
    ambiguity: Option<PathBuf>,
    /// Idiom list
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_IDIOMS")]
    idioms: Option<PathBuf>,
    /// Destination nouns list
    #[arg(long, global = true, help_heading = "Data files", env = "RASMI_DESTINATIONS")]
    destinations: Option<PathBuf>,
}

impl From<DataArgs> for DataPaths {
    fn from(a: DataArgs) -> Self {
        DataPaths {
            lexicon: a.lexicon,
            vocabulary: a.vocab,
            rules: a.rules,
            verbs: a.verbs,
            ambiguity: a.ambiguity,
            idioms: a.idioms,
            destinations: a.destinations,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Convert informal text to formal text, one sentence per line
    Convert {
        /// Text to convert; read from --input or stdin when absent
        text: Option<String>,
        /// Input file; stdin when absent
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Output file; stdout when absent
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print alignment links after each sentence
        #[arg(long)]
        emit_links: bool,
        /// Print the rule trace after each sentence
        #[arg(long)]
        emit_trace: bool,
        /// One JSON conversion result per line
        #[arg(long)]
        json: bool,
    },
    /// Keep sentences of 26 to 40 tokens with at least 4 informal words
    Filter {
        /// Input file; stdin when absent
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Output file; stdout when absent
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Validate a corpus file; exits non-zero if any record has errors
    Check {
        /// Corpus file (JSON lines); stdin when absent
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Also print warnings
        #[arg(long)]
        warnings: bool,
    },
    /// Corpus statistics
    Stats {
        /// Corpus file (JSON lines); stdin when absent
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Print JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Extract the informal-to-formal dictionary from a corpus
    ExtractDict {
        /// Corpus file (JSON lines); stdin when absent
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Output file (TSV); stdout when absent
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// BLEU of hypotheses against references, one sentence per line
    Eval {
        /// Hypothesis sentences
        #[arg(long, required_unless_present = "informal")]
        hyp: Option<PathBuf>,
        /// Informal sentences to convert and score
        #[arg(long, conflicts_with = "hyp")]
        informal: Option<PathBuf>,
        /// Reference sentences
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Score only pairs whose reference has at least this many tokens
        #[arg(long)]
        min_len: Option<usize>,
        /// Score only pairs whose reference has at most this many tokens
        #[arg(long)]
        max_len: Option<usize>,
        /// Write the JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the text summary
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP API
    Serve {
        /// Listen address
        #[arg(long, env = "RASMI_ADDR", default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Corpus and history directory; in memory when absent
        #[arg(long, env = "RASMI_DATA_DIR")]
        data_dir: Option<PathBuf>,
        /// TOKEN=ANNOTATOR:ROLE, repeatable; role is annotator or leader
        #[arg(long = "session", env = "RASMI_SESSIONS", value_delimiter = ',')]
        sessions: Vec<String>,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        // a closed stdout (`rasmi convert ... | head`) is not an error
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            Ok(())
        }
        other => other,
    }
}

fn run(cli: Cli) -> Result<()> {
    let paths: DataPaths = cli.data.into();
    match cli.command {
        Command::Convert { text, input, output, emit_links, emit_trace, json } => {
            commands::convert(&paths, text, input, output, commands::ConvertOutput { emit_links, emit_trace, json })
        }
        Command::Filter { input, output } => commands::filter(&paths, input, output),
        Command::Check { input, warnings } => commands::check(input, warnings),
        Command::Stats { input, json } => commands::stats(input, json),
        Command::ExtractDict { input, output } => commands::extract_dict(input, output),
        Command::Eval { hyp, informal, reference, min_len, max_len, report, json } => {
            commands::eval(&paths, commands::EvalArgs { hyp, informal, reference, min_len, max_len, report, json })
        }
        Command::Serve { addr, data_dir, sessions } => commands::serve(paths, addr, data_dir, sessions),
    }
}
