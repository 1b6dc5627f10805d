//! `nvk`: twisted Betti numbers, jump loci and deformation spectral
//! sequences from JSON documents.
//!
//! Exit codes: 0 success, 1 domain invariant failure, 2 parse or schema
//! error, 3 resource limit.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;

#[derive(Parser)]
#[command(name = "nvk", version, about = "Exact twisted Betti numbers, jump loci and deformation spectral sequences")]
struct Cli {
    /// Print one machine-readable JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document: schema, then ∂∘∂ = 0 or the model identities.
    Validate { file: PathBuf },

    /// Betti numbers of a complex, optionally specialized along p or ξ.
    Betti {
        file: PathBuf,
        /// Integer matrix `p: Z^n → Z^m`, rows separated by `;`, entries by `,`. The empty string is `m = 0`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "xi")]
        p: Option<String>,
        /// Real class `ξ` as rows `label:c1,…,cn` separated by `;`, e.g. `1:1,0;sqrt2:0,1`.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },

    /// The jump locus `{p : b_k(p) ≥ b_k + q}` as a family of subgroups.
    Jumploci {
        file: PathBuf,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(short = 'q', value_parser = clap::value_parser!(u64).range(1..))]
        q: Option<u64>,
    },

    /// Pages of the deformation spectral sequence of a model.
    Specseq {
        file: PathBuf,
        /// Last page to print.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_page: Option<u64>,
    },

    /// Betti numbers of a complex specialized along p against the limit of a model.
    Compare {
        complex: PathBuf,
        model: PathBuf,
        /// As for `betti`; defaults to the query in the complex file, then to the identity.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => commands::validate(file),
        Command::Betti { file, p, xi } => commands::betti(file, p.as_deref(), xi.as_deref()),
        Command::Jumploci { file, k, q } => commands::jumploci(file, *k, q.map(|q| q as usize)),
        Command::Specseq { file, max_page } => commands::specseq(file, max_page.map(|r| r as usize)),
        Command::Compare { complex, model, p } => commands::compare(complex, model, p.as_deref()),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                let v = serde_json::json!({"ok": false, "error": {"kind": f.kind(), "message": f.message()}});
                println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
            }
            eprintln!("nvk: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Invariant(_) => "invariant",
            Failure::Parse(_) => "parse",
            Failure::Resource(_) => "resource_limit",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invariant(m) | Failure::Parse(m) | Failure::Resource(m) => m,
        }
    }
}
