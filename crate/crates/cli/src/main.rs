//! `gog` - command-line front end for graph products of finite groups.
//!
//! Reads `.gog` documents (see [`document`]), runs the word problem,
//! parabolic lattice, Remak refinement, canonical certificates and the
//! isomorphism decision, and executes the theorem self-check suites.
//! Exit codes: 0 = success / yes, 1 = no, 2 = error.

mod document;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gog_core::lattice::spherical_classes;
use gog_core::rigidity::{
    canonicalize, decide_graph_product_isomorphism, gog_isomorphic, obfuscate, remak_refine,
};
use gog_core::{Caps, GraphOfGroups};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Labeled, human-oriented output.
    Text,
    /// Bare values only (certificates, words).
    Raw,
}

#[derive(Parser)]
#[command(name = "gog", version, about = "Graph products of finite groups")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report orders, cliques, modules and separation properties.
    Info { file: String },
    /// List the maximal cliques.
    Cliques { file: String },
    /// Group vertices indistinguishable by cliques and print the quotient.
    T0Quotient { file: String },
    /// Canonical normal form of a word (syntax: `a b^2 c`).
    NormalForm { file: String, word: String },
    /// Decide whether two words denote the same element (exit 0 = yes, 1 = no).
    Equal {
        file: String,
        word1: String,
        word2: String,
    },
    /// Retract a word onto the standard subgroup over a comma-separated
    /// vertex set.
    Retract {
        file: String,
        vertices: String,
        word: String,
    },
    /// Print the poset of parabolic classes as a Hasse cover list.
    Lattice { file: String },
    /// Remak-factorize every vertex group.
    Remak { file: String },
    /// Refine every vertex into its Remak factors; prints the refined
    /// document.
    Refine { file: String },
    /// Print the canonical certificate as uppercase hex.
    Canonicalize { file: String },
    /// Decide isomorphism of two graph products (exit 0 = yes, 1 = no).
    Iso { file1: String, file2: String },
    /// Re-present the graph product by seeded merges and relabelings.
    Obfuscate {
        file: String,
        #[arg(long)]
        seed: u64,
    },
    /// Run the theorem self-check suites.
    Selfcheck {
        /// Scale of the randomized suites; 200 reproduces the acceptance
        /// numbers.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    // die quietly when a pipe closes early instead of panicking
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &str) -> Result<GraphOfGroups> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read `{file}`"))?;
    document::parse_gog(&text).with_context(|| format!("in `{file}`"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let caps = Caps::default();
    let raw = cli.format == Format::Raw;
    match cli.command {
        Command::Info { file } => {
            let gog = load(&file)?;
            let g = gog.graph();
            println!("vertices: {}", g.vertex_count());
            for v in 0..g.vertex_count() {
                let grp = gog.group(v);
                let name = grp.name().unwrap_or("table");
                println!("  {}: order {} ({})", g.id_of(v), grp.order(), name);
            }
            println!("edges: {}", g.edge_count());
            for (u, v) in g.edges() {
                println!("  {} {}", g.id_of(u), g.id_of(v));
            }
            println!("cliques:");
            for c in g.cliques() {
                println!("  {}", g.ids_of(&c).join(" "));
            }
            println!("t0: {}", g.is_t0());
            println!("t1: {}", g.is_t1());
            let comp = g.components();
            println!("components: {}", comp.blocks().len());
            for b in comp.blocks() {
                println!("  {}", g.ids_of(b).join(" "));
            }
            let co = g.co_components();
            println!("co-components: {}", co.blocks().len());
            for b in co.blocks() {
                println!("  {}", g.ids_of(b).join(" "));
            }
        }
        Command::Cliques { file } => {
            let gog = load(&file)?;
            for c in gog.graph().cliques() {
                println!("{}", gog.graph().ids_of(&c).join(" "));
            }
        }
        Command::T0Quotient { file } => {
            let gog = load(&file)?;
            let g = gog.graph();
            let (partition, quotient) = g.t0_quotient();
            if !raw {
                for b in partition.blocks() {
                    println!("block: {}", g.ids_of(b).join(" "));
                }
            }
            println!("quotient vertices: {}", quotient.vertex_ids().join(" "));
            let edges: Vec<String> = quotient
                .edges()
                .into_iter()
                .map(|(u, v)| format!("{}-{}", quotient.id_of(u), quotient.id_of(v)))
                .collect();
            println!("quotient edges: {}", edges.join(" "));
        }
        Command::NormalForm { file, word } => {
            let gog = load(&file)?;
            let w = gog.parse_word(&word)?;
            let nf = gog.normal_form(&w)?;
            println!("{}", gog.format_word(&nf));
        }
        Command::Equal { file, word1, word2 } => {
            let gog = load(&file)?;
            let u = gog.parse_word(&word1)?;
            let v = gog.parse_word(&word2)?;
            let equal = gog.words_equal(&u, &v)?;
            if !raw {
                println!("{}", if equal { "equal" } else { "not equal" });
            }
            return Ok(ExitCode::from(u8::from(!equal)));
        }
        Command::Retract {
            file,
            vertices,
            word,
        } => {
            let gog = load(&file)?;
            let ids: Vec<&str> = vertices
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let set: BTreeSet<usize> = gog.graph().resolve(ids)?;
            let w = gog.parse_word(&word)?;
            let r = gog.retraction(&set, &w)?;
            println!("{}", gog.format_word(&r));
        }
        Command::Lattice { file } => {
            let gog = load(&file)?;
            let g = gog.graph();
            let classes = spherical_classes(g);
            let show = |c: &gog_core::SphericalClass| -> String {
                if c.carrier().is_empty() {
                    "{}".to_string()
                } else {
                    format!("{{{}}}", g.ids_of(c.carrier()).join(" "))
                }
            };
            for x in &classes {
                for y in &classes {
                    // covers: one extra vertex
                    if x.leq(y).unwrap() && y.carrier().len() == x.carrier().len() + 1 {
                        println!("{} < {}", show(x), show(y));
                    }
                }
            }
        }
        Command::Remak { file } => {
            let gog = load(&file)?;
            for v in 0..gog.vertex_count() {
                let grp = gog.group(v);
                let factors = grp.remak_decomposition(&caps)?;
                let orders: Vec<String> =
                    factors.iter().map(|f| f.order().to_string()).collect();
                println!(
                    "{}: order {} = {}",
                    gog.graph().id_of(v),
                    grp.order(),
                    orders.join(" x ")
                );
            }
        }
        Command::Refine { file } => {
            let gog = load(&file)?;
            let (refined, _) = remak_refine(&gog, &caps)?;
            println!("{}", document::serialize_gog(&refined));
        }
        Command::Canonicalize { file } => {
            let gog = load(&file)?;
            let cert = canonicalize(&gog, &caps)?;
            println!("{}", cert.to_hex());
        }
        Command::Iso { file1, file2 } => {
            let x = load(&file1)?;
            let y = load(&file2)?;
            let same = decide_graph_product_isomorphism(&x, &y, &caps)?;
            if !raw {
                println!("{}", if same { "isomorphic" } else { "not isomorphic" });
                if gog_isomorphic(&x, &y).is_some() {
                    println!("presentations already match vertexwise");
                }
            }
            return Ok(ExitCode::from(u8::from(!same)));
        }
        Command::Obfuscate { file, seed } => {
            let gog = load(&file)?;
            let alt = obfuscate(&gog, seed, &caps)?;
            println!("{}", document::serialize_gog(&alt));
        }
        Command::Selfcheck { trials, seed } => {
            let reports = gog_core::selfcheck::run_all(trials, seed);
            let mut all_ok = true;
            for r in &reports {
                if r.passed() {
                    println!("{}: PASS ({} checks)", r.name, r.checked);
                } else {
                    all_ok = false;
                    println!("{}: FAIL ({} of {} checks failed)", r.name, r.failed, r.checked);
                    for f in &r.failures {
                        println!("  {f}");
                    }
                }
            }
            return Ok(ExitCode::from(u8::from(!all_ok)));
        }
    }
    Ok(ExitCode::SUCCESS)
}
