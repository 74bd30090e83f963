//! Batch front end for the poset-algebra library. Reads a poset from JSON,
//! then describes it, verifies its block algebra, or draws the order
//! reconstructed from that algebra.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use poset_algebra::indexing::Base;
use poset_algebra::poset::{PolarizedPoset, PosetDoc, PosetError};
use poset_algebra::report;
use poset_algebra::ring::{RingContext, RingError};
use poset_algebra::verify::{verify_poset, VerifyConfig};

#[derive(Parser)]
#[command(name = "posetalg", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Digit base for interval indices.
    #[arg(long, global = true, default_value_t = 3)]
    base: u64,

    /// Prime modulus for block scalars.
    #[arg(long, global = true, default_value_t = 5)]
    prime: u64,

    /// Seed for the sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count per randomized check.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Directory for artifacts; everything goes to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Element-count bound for upper-set enumeration.
    #[arg(long, global = true, default_value_t = 12)]
    max_upper_sets: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a poset: layers, chains, components, predicates, Hasse DOT.
    Analyze { input: PathBuf },
    /// Run the verification suite and report every check.
    Verify { input: PathBuf },
    /// Rebuild the order from its algebra and draw it.
    Simp { input: PathBuf },
}

enum Failure {
    Verification(String),
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Resource(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.base < 2 {
        return Err(Failure::Input(format!(
            "--base must be at least 2, got {}",
            cli.base
        )));
    }
    if !is_prime(cli.prime) {
        return Err(Failure::Input(format!(
            "--prime must be a prime, got {}",
            cli.prime
        )));
    }
    if cli.samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    if cli.max_upper_sets == 0 {
        return Err(Failure::Input("--max-upper-sets must be at least 1".into()));
    }
    match &cli.command {
        Command::Analyze { input } => analyze(cli, input),
        Command::Verify { input } => verify(cli, input),
        Command::Simp { input } => simp(cli, input),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn load_poset(path: &Path) -> Result<PolarizedPoset, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc: PosetDoc = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    PolarizedPoset::from_doc(&doc).map_err(|e| match e {
        PosetError::TooLarge(_) | PosetError::ResourceBound { .. } => {
            Failure::Resource(e.to_string())
        }
        other => Failure::Input(other.to_string()),
    })
}

fn classify_ring_error(e: RingError) -> Failure {
    match e {
        RingError::Poset(PosetError::TooLarge(_))
        | RingError::Poset(PosetError::ResourceBound { .. }) => Failure::Resource(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

/// Write `content` into the output directory under `name`, or print it.
fn emit(cli: &Cli, name: &str, content: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            let path = dir.join(name);
            fs::write(&path, content)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn mask_names(poset: &PolarizedPoset, mask: u64) -> Vec<String> {
    poset
        .iter_mask(mask)
        .map(|i| poset.names()[i].clone())
        .collect()
}

fn analyze(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let poset = load_poset(input)?;
    let names = poset.names();
    let lambda: serde_json::Map<String, serde_json::Value> = (0..poset.n())
        .map(|i| (names[i].clone(), json!(poset.lambda_canonical(i))))
        .collect();
    let layers: Vec<Vec<String>> = poset
        .layers()
        .iter()
        .map(|layer| layer.iter().map(|&i| names[i].clone()).collect())
        .collect();
    let chains = poset.maximal_chains();
    let maximal_chains: Vec<Vec<String>> = (0..chains.len())
        .map(|c| chains.chain(c).iter().map(|&i| names[i].clone()).collect())
        .collect();
    let components: Vec<Vec<String>> = poset
        .connected_components()
        .iter()
        .map(|&mask| mask_names(&poset, mask))
        .collect();
    let polar = mask_names(&poset, poset.polar_mask());
    let report = json!({
        "elements": names,
        "xi": poset.xi(),
        "lambda": lambda,
        "layers": layers,
        "maximal_chains": maximal_chains,
        "components": components,
        "polarization": {
            "polar": polar,
            "count": polar.len(),
        },
        "flags": {
            "is_chain": poset.is_chain(),
            "is_antichain": poset.is_antichain(),
            "is_forest_of_chains": poset.is_forest_of_chains(),
            "is_finitely_sheltered": poset.is_finitely_sheltered(poset.full_mask()),
        },
    });
    let pretty = serde_json::to_string_pretty(&report).expect("report serializes");
    emit(cli, "analyze.json", &pretty)?;
    emit(cli, "hasse.dot", &poset.to_dot())
}

fn verify(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let poset = load_poset(input)?;
    let cfg = VerifyConfig {
        base: cli.base,
        prime: cli.prime,
        seed: cli.seed,
        samples: cli.samples,
        max_upper_sets: cli.max_upper_sets,
    };
    let instance = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());
    let reports = verify_poset(&poset, &instance, &cfg).map_err(classify_ring_error)?;
    eprint!("{}", report::render_lines(&reports));
    let pretty =
        serde_json::to_string_pretty(&report::to_json(&reports)).expect("report serializes");
    emit(cli, "verify.json", &pretty)?;
    if report::all_passed(&reports) {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} of {} checks failed on {instance}",
            report::failures(&reports).len(),
            reports.len()
        )))
    }
}

fn simp(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let poset = load_poset(input)?;
    let ctx =
        RingContext::new(poset, Base::Finite(cli.base), cli.prime).map_err(classify_ring_error)?;
    if !ctx.simp_matches() {
        return Err(Failure::Verification(
            "reconstructed order differs from the input".into(),
        ));
    }
    eprintln!("reconstructed order is isomorphic to the input");
    emit(cli, "simp.dot", &ctx.simp_poset().to_dot())
}
