//! `cubefold` command-line tool.
//!
//! Exit codes: 0 success (and FOLDABLE for `classify`), 1 NOT_FOLDABLE (`classify` only),
//! 2 usage or input error, 3 UNKNOWN or an exhausted budget or search limit.

use std::fs;
use std::io::Read;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cubefold::classify::{budget_from_env, classify, Certificate, Status};
use cubefold::cube::{for_each_consistent_mapping, EnumerateOptions, Quotient};
use cubefold::enumerate::{
    cube_nets, enumerate_family, minimal_foldable_from, verify_counts, FamilySpec, DEFAULT_MAX_AREA,
};
use cubefold::grid::{parse_polyomino, Polyomino};
use cubefold::layers::{count_layer_maps, stamp_fold_count, SearchLimits};
use cubefold::render::{nth_mapping, render, Format};
use cubefold::solve::{solve, SolveOptions, SolveOutcome};

#[derive(Parser)]
#[command(name = "cubefold", version, about = "Decide whether polyominoes fold onto the unit cube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a verdict with its certificate. Budget: CUBEFOLD_BUDGET_MS (default 60000).
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a folding, or count layer maps per surjective mapping.
    Solve {
        file: PathBuf,
        #[arg(long)]
        count_layer_maps: bool,
        /// Node limit of the layer search.
        #[arg(long, value_name = "N")]
        limit: Option<u64>,
    },
    /// Enumerate tree-shaped polyominoes of an exact bounding size.
    Enumerate {
        #[arg(long, required = true)]
        tree: bool,
        #[arg(long, value_name = "HxW", value_parser = parse_bbox)]
        bbox: (usize, usize),
        /// Keep only the minimal foldable ones.
        #[arg(long)]
        minimal_foldable: bool,
        /// Exclude trees that leave an adjacency unglued.
        #[arg(long)]
        slit_free: bool,
        /// Write each shape to DIR/NNNN.poly.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Print the eleven cube nets.
    Nets,
    /// Count flat foldings of a 1 x K strip of stamps.
    Stamp { k: usize },
    /// Recompute the reference counts and print a JSON report.
    VerifyCounts,
    /// Draw a polyomino, optionally labelled with a mapping.
    Render {
        file: PathBuf,
        /// Index among surjective mappings up to cube isometry.
        #[arg(long, value_name = "IDX")]
        mapping: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Ascii)]
        format: OutputFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Ascii,
    Svg,
}

fn parse_bbox(s: &str) -> Result<(usize, usize), String> {
    let (h, w) = s.split_once(['x', 'X']).ok_or("expected HxW")?;
    let h: usize = h.parse().map_err(|_| "bad height")?;
    let w: usize = w.parse().map_err(|_| "bad width")?;
    if h == 0 || w == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((h, w))
}

/// Failure carrying its exit code.
struct Fail(u8, String);

fn read_polyomino(path: &Path) -> Result<Polyomino, Fail> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Fail(2, format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?
    };
    parse_polyomino(&text).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.command {
        Command::Classify { file, json } => {
            let p = read_polyomino(&file)?;
            let v = classify(&p, budget_from_env());
            if json {
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("{}", v.verdict);
                match &v.certificate {
                    Certificate::Theorem { theorem, hypothesis, witness, .. } => {
                        println!("theorem: {}", serde_json::to_value(theorem).unwrap().as_str().unwrap());
                        println!("hypothesis: {hypothesis}");
                        if let Some(w) = witness {
                            print!("witness:\n{w}");
                        }
                    }
                    Certificate::PseudoFolding { folding } => print!("pseudo-folding:\n{folding}"),
                    Certificate::Plan { plan, .. } => print!("plan:\n{plan}"),
                    Certificate::Obstruction { exhaustive, record, candidate } => {
                        println!("exhaustive: {exhaustive}");
                        println!("search: {}", serde_json::to_string(record).unwrap());
                        if let Some(c) = candidate {
                            print!("candidate:\n{c}");
                        }
                    }
                }
            }
            Ok(match v.verdict {
                Status::Foldable => 0,
                Status::NotFoldable => 1,
                Status::Unknown => 3,
            })
        }
        Command::Solve { file, count_layer_maps: count, limit } => {
            let p = read_polyomino(&file)?;
            let limits = limit.map(|max_nodes| SearchLimits { max_nodes }).unwrap_or_default();
            if count {
                return count_maps(&p, limits);
            }
            match solve(&p, SolveOptions { deadline: None, limits }) {
                SolveOutcome::Folded(pf) => {
                    print!("FOLDED\n{}", pf.to_text());
                    Ok(0)
                }
                SolveOutcome::Exhausted(record) => {
                    println!("NO_FOLDING\n{}", serde_json::to_string(&record).unwrap());
                    Ok(0)
                }
                SolveOutcome::Undecided { candidate, record, budget_exhausted } => {
                    println!("UNDECIDED\n{}", serde_json::to_string(&record).unwrap());
                    if let Some(pf) = candidate {
                        print!("candidate:\n{}", pf.to_text());
                    }
                    Ok(if budget_exhausted { 3 } else { 0 })
                }
            }
        }
        Command::Enumerate { tree: _, bbox, minimal_foldable, slit_free, out } => {
            let spec = if slit_free { FamilySpec::tree(bbox.0, bbox.1) } else { FamilySpec::tree_with_slits(bbox.0, bbox.1) };
            if bbox.0 * bbox.1 > DEFAULT_MAX_AREA {
                return Err(Fail(2, format!("bounding box area above {DEFAULT_MAX_AREA}")));
            }
            let family = enumerate_family(spec).map_err(|e| Fail(3, e.to_string()))?;
            let shapes = if minimal_foldable { minimal_foldable_from(&family) } else { family };
            println!("{}", shapes.len());
            if let Some(dir) = out {
                fs::create_dir_all(&dir).map_err(|e| Fail(2, format!("{}: {e}", dir.display())))?;
                for (k, p) in shapes.iter().enumerate() {
                    let path = dir.join(format!("{k:04}.poly"));
                    fs::write(&path, p.to_text()).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
                }
            }
            Ok(0)
        }
        Command::Nets => {
            for (k, net) in cube_nets().iter().enumerate() {
                if k > 0 {
                    println!();
                }
                println!("net {} type {}", k + 1, net.net_type.name());
                print!("{}", render(&net.polyomino, None, Format::Ascii));
            }
            Ok(0)
        }
        Command::Stamp { k } => {
            if k == 0 {
                return Err(Fail(2, "K must be positive".into()));
            }
            println!("{}", stamp_fold_count(k));
            Ok(0)
        }
        Command::VerifyCounts => {
            let report = verify_counts();
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(0)
        }
        Command::Render { file, mapping, format } => {
            let p = read_polyomino(&file)?;
            let m = match mapping {
                Some(idx) => Some(nth_mapping(&p, idx).map_err(|e| Fail(2, e.to_string()))?),
                None => None,
            };
            let format = match format {
                OutputFormat::Ascii => Format::Ascii,
                OutputFormat::Svg => Format::Svg,
            };
            print!("{}", render(&p, m.as_ref(), format));
            Ok(0)
        }
    }
}

fn count_maps(p: &Polyomino, limits: SearchLimits) -> Result<u8, Fail> {
    let mut code = 0;
    let mut total = 0u64;
    let mut k = 0;
    let opts = EnumerateOptions { surjective_only: true, quotient: Quotient::Isometries };
    for_each_consistent_mapping(p, opts, |m| {
        match count_layer_maps(p, m, limits) {
            Ok(n) => {
                println!("mapping {k}: {n}");
                total += n;
            }
            Err(e) => {
                println!("mapping {k}: {e}");
                code = 3;
            }
        }
        k += 1;
        ControlFlow::Continue(())
    });
    println!("total: {total}");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
