use clap::{Parser, Subcommand};
use cpht::arrangement::SignVector;
use cpht::pipeline::FieldConfig;
use cpht::transform::{
    compute_transform, oracle_sample_check, verify_transform, vineyard, OracleOptions,
};
use cpht::{io, render};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cpht",
    version,
    about = "Exact persistent homology transform of embedded simplicial complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the cells of the sphere of directions
    Cells {
        /// Input complex JSON
        input: PathBuf,
        /// Extend a non-essential arrangement with kernel normals
        #[arg(long)]
        augment: bool,
        /// List every cell with its height order and witness direction
        #[arg(long)]
        verbose: bool,
        /// Write a transform skeleton (cells and face data, no diagrams)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute diagrams for every cell and write the transform as JSON
    Transform {
        /// Input complex JSON
        input: PathBuf,
        /// Homological dimensions, comma separated; all by default
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Prime order of the coefficient field
        #[arg(long, default_value_t = 2)]
        field: u64,
        /// Extend a non-essential arrangement with kernel normals
        #[arg(long)]
        augment: bool,
        /// Output path; stdout when omitted
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-check every gluing axiom of a stored transform
    Verify {
        /// Transform JSON produced by the transform subcommand
        transform: PathBuf,
    },
    /// Vines: connected components of charged intervals across the sphere
    Vineyard {
        transform: PathBuf,
        /// Homological dimension
        #[arg(long, default_value_t = 0)]
        dim: usize,
        /// Also write the vineyard graph as DOT
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Compare stored diagrams against freshly sampled directions
    Oracle {
        /// Input complex JSON the transform claims to describe
        input: PathBuf,
        transform: PathBuf,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Direction coordinates are drawn from [-bound, bound]
        #[arg(long, default_value_t = 1000)]
        bound: i64,
    },
    /// Draw a one-dimensional arrangement as an SVG circle
    Svg {
        transform: PathBuf,
        /// Output path
        #[arg(short, long)]
        out: PathBuf,
    },
    /// DOT of one cell's stage chain or interval poset with charges
    Poset {
        transform: PathBuf,
        /// Sign vector of the cell, e.g. +0-
        #[arg(long)]
        cell: String,
        /// Render the interval poset instead of the stage chain
        #[arg(long)]
        intervals: bool,
    },
}

fn run() -> cpht::Result<u8> {
    match Cli::parse().command {
        Command::Cells {
            input,
            augment,
            verbose,
            out,
        } => {
            let gc = io::load_complex(&input)?;
            let t = compute_transform(&gc, &[], FieldConfig::default(), augment)?;
            let cellulation = t.cellulation();
            let counts: Vec<String> = cellulation
                .counts_by_dim()
                .into_iter()
                .map(|(d, n)| format!("{d}-cells: {n}"))
                .collect();
            println!("{}", counts.join(", "));
            if verbose {
                for cell in cellulation.cells() {
                    println!(
                        "{}  dim {}  {}  witness ({})",
                        cell.sign,
                        cell.dim,
                        render::order_label(cell),
                        cpht::rational::format_vector(cell.witness.coords()).join(", ")
                    );
                }
            }
            if let Some(path) = &out {
                fs::write(path, io::transform_to_json(&t)?)?;
            }
            Ok(0)
        }
        Command::Transform {
            input,
            dims,
            field,
            augment,
            out,
        } => {
            let gc = io::load_complex(&input)?;
            let dims = dims.unwrap_or_else(|| (0..=gc.complex().dim().unwrap_or(0)).collect());
            let t = compute_transform(&gc, &dims, FieldConfig::new(field)?, augment)?;
            let text = io::transform_to_json(&t)?;
            if let Some(path) = &out {
                fs::write(path, &text)?;
                println!(
                    "wrote {} cells, {} covering pairs to {}",
                    t.cellulation().cells().len(),
                    t.cellulation().covering().len(),
                    path.display()
                );
            } else {
                print!("{text}");
            }
            Ok(0)
        }
        Command::Verify { transform } => {
            let t = io::load_transform(&transform)?;
            let report = verify_transform(&t);
            for check in &report.checks {
                if check.passed() {
                    println!("ok   {}", check.name);
                } else {
                    println!("FAIL {} ({} failures)", check.name, check.failures.len());
                    for failure in &check.failures {
                        println!("     {failure}");
                    }
                }
            }
            if report.all_passed() {
                println!("all checks passed");
                Ok(0)
            } else {
                println!("verification failed");
                Ok(1)
            }
        }
        Command::Vineyard {
            transform,
            dim,
            dot,
        } => {
            let t = io::load_transform(&transform)?;
            let graph = vineyard(&t, dim)?;
            if let Some(path) = &dot {
                fs::write(path, render::vineyard_dot(&t, &graph))?;
            }
            println!(
                "dimension {dim}: {} charged intervals, {} edges, {} vines",
                graph.nodes.len(),
                graph.edges.len(),
                graph.components.len()
            );
            for (i, component) in graph.components.iter().enumerate() {
                let charges: Vec<String> = component.charges.iter().map(i64::to_string).collect();
                println!(
                    "vine {i}: charge {}, spans {} cells, {} intervals",
                    charges.join("|"),
                    component.cell_totals.len(),
                    component.nodes.len()
                );
            }
            if graph.is_consistent() {
                Ok(0)
            } else {
                println!("inconsistent vineyard: some vine has no single charge");
                Ok(1)
            }
        }
        Command::Oracle {
            input,
            transform,
            trials,
            seed,
            bound,
        } => {
            let gc = io::load_complex(&input)?;
            let t = io::load_transform(&transform)?;
            if t.geometry() != &gc {
                return Err(cpht::Error::MismatchedEmbeddings);
            }
            let report = oracle_sample_check(
                &t,
                &OracleOptions {
                    trials,
                    seed,
                    bound,
                },
            )?;
            println!("trials: {}, matches: {}", report.trials, report.matches);
            for mismatch in &report.mismatches {
                println!("mismatch: {mismatch}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Svg { transform, out } => {
            let t = io::load_transform(&transform)?;
            fs::write(&out, render::svg_circle(&t)?)?;
            Ok(0)
        }
        Command::Poset {
            transform,
            cell,
            intervals,
        } => {
            let t = io::load_transform(&transform)?;
            let idx = t.cellulation().index_of_sign(&SignVector::parse(&cell)?)?;
            let text = if intervals {
                render::interval_poset_dot(&t, idx)?
            } else {
                render::chain_dot(&t, idx)?
            };
            print!("{text}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
