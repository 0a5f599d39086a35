//! `meshpat` — command-line interface to the mesh-pattern classification
//! library: counting, sweeping, the classification pipeline, transforms,
//! formula verification, OEIS lookup and table reproduction.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use meshpat::classify::{
    build_partition, emit_report, proven_merges, sequence_grouping, PartitionState, ReportFormat,
    Stage,
};
use meshpat::engine::{count_avoiders, sweep_all_length2, SweepResult, ENGINE_VERSION};
use meshpat::formulas::{verify_formula, FormulaId};
use meshpat::oeis::{bundled_snapshot, fetch_remote, load_stripped, match_sequence, OeisEntry};
use meshpat::transform::{
    coincidence_neighbors, d8_orbit, shading_candidates, switch_op, symmetry, toric_shift,
    up_shift, PartOp, SymmetryWord,
};
use meshpat::{Error, MeshPattern};

#[derive(Parser)]
#[command(name = "meshpat", version, about, disable_help_subcommand = true)]
struct Cli {
    /// Size of the rayon thread pool (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for sweep cache files (falls back to $MESHPAT_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format
    #[arg(long, default_value = "md")]
    format: String,

    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print |S_1(p)|, ..., |S_N(p)| for one pattern
    Count {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Run the full length-2 sweep and store it in the cache
    Sweep {
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
    /// Run the classification pipeline and report components
    Classify {
        #[arg(long, default_value_t = 2)]
        length: usize,
        /// Comma-separated stages, applied in order
        #[arg(long, default_value = "d8,shade,shift")]
        stages: String,
        /// Also apply the proven cross-stage merges (65 -> 56)
        #[arg(long)]
        proven: bool,
        /// Also group the components by counting sequence (conjectural)
        #[arg(long)]
        group: bool,
        /// Emit a full per-component report (needs a sweep)
        #[arg(long)]
        report: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply one transform to a pattern and print the result
    Transform {
        #[arg(long)]
        pattern: String,
        /// One of: a symmetry word (e, r, c, i, rc, ri, ci, rci), up, toric,
        /// or switch:<a>,<b>,<d> with a,b in {id,r} and d in {0,1}
        #[arg(long)]
        op: String,
    },
    /// List shading-lemma steps and coincident neighbors of a pattern
    Shade {
        #[arg(long)]
        pattern: String,
    },
    /// Print the d8 symmetry orbit of a pattern
    Orbit {
        #[arg(long)]
        pattern: String,
    },
    /// Check the closed formulas against engine counts
    Verify {
        /// Formula identifier, or "all"
        #[arg(long, default_value = "all")]
        prop: String,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
    /// Match a pattern's counting sequence against an OEIS snapshot
    Oeis {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        /// Path to a stripped-format file (default: bundled snapshot)
        #[arg(long)]
        stripped: Option<PathBuf>,
        /// Also query the public OEIS search endpoint (advisory)
        #[arg(long)]
        online: bool,
    },
    /// Reproduce the published subclass tables from cache or a fresh sweep
    Tables {
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code: u8 = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure the thread pool");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Input-shaped problems are usage errors (2); runtime failures and
/// verification mismatches exit 1.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::NotAPermutation(_)
        | Error::BoxOutOfRange { .. }
        | Error::DuplicateBox { .. }
        | Error::NOutOfRange { .. }
        | Error::EmptyPattern(_)
        | Error::BelowFloor { .. }
        | Error::UnknownFormula(_) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Count { pattern, max_n } => {
            let p: MeshPattern = pattern.parse()?;
            let counts: Result<Vec<String>, Error> = (1..=*max_n)
                .map(|n| count_avoiders(&p, n).map(|c| c.to_string()))
                .collect();
            println!("{}", counts?.join(","));
            Ok(0)
        }
        Command::Sweep { max_n } => {
            let sweep = cached_sweep(cli, *max_n)?;
            println!(
                "sweep complete: 1024 patterns, n = 1..{} (engine v{})",
                sweep.max_n(),
                ENGINE_VERSION
            );
            Ok(0)
        }
        Command::Classify {
            length,
            stages,
            proven,
            group,
            report,
            output,
        } => {
            let stages = parse_stages(stages)?;
            let mut state = build_partition(*length, &stages)?;
            println!("components: {}", cascade(&state));
            let mut code = checkpoint_code(*length, &stages, &mut state);
            if *proven {
                proven_merges(&mut state)?;
                let count = state.component_count();
                println!("proven merges: {count} components");
                if count != 56 {
                    code = 1;
                }
            }
            if *group || *report {
                let sweep = cached_sweep(cli, 9)?;
                if *group {
                    let groups = sequence_grouping(&mut state, &sweep)?;
                    println!("sequence groups: {} (conjectural)", groups.len());
                    for g in &groups {
                        let mark = if g.conjectural { " (conjectural)" } else { "" };
                        println!("  {}{mark}", g.representatives.join(" = "));
                    }
                }
                if *report {
                    let format: ReportFormat = output.format.parse()?;
                    let db = bundled_snapshot();
                    let text = emit_report(&mut state, &sweep, format, Some(&db))?;
                    write_output(output.out.as_deref(), &text)?;
                }
            }
            Ok(code)
        }
        Command::Transform { pattern, op } => {
            let p: MeshPattern = pattern.parse()?;
            let q = apply_op(&p, op)?;
            println!("{q}");
            Ok(0)
        }
        Command::Shade { pattern } => {
            let p: MeshPattern = pattern.parse()?;
            for step in shading_candidates(&p) {
                println!(
                    "point {} {} -> box {}",
                    step.point_index, step.direction, step.boxed
                );
            }
            for q in coincidence_neighbors(&p) {
                println!("neighbor {q}");
            }
            Ok(0)
        }
        Command::Orbit { pattern } => {
            let p: MeshPattern = pattern.parse()?;
            for q in d8_orbit(&p) {
                println!("{q}");
            }
            Ok(0)
        }
        Command::Verify { prop, max_n } => {
            let ids: Vec<FormulaId> = if prop == "all" {
                FormulaId::ALL.to_vec()
            } else {
                vec![parse_formula_id(prop)?]
            };
            let mut code = 0;
            for id in ids {
                let report = verify_formula(id, *max_n)?;
                print!("{}", report.to_text());
                // DSUM16's mismatch with the engine is documented and
                // expected; anything else failing (or DSUM16 suddenly
                // agreeing) is a real verification failure
                let expected = id != FormulaId::DSUM16 || *max_n < 3;
                if report.all_match != expected {
                    code = 1;
                }
            }
            Ok(code)
        }
        Command::Oeis {
            pattern,
            max_n,
            stripped,
            online,
        } => {
            let p: MeshPattern = pattern.parse()?;
            let seq: Result<Vec<u64>, Error> = (1..=*max_n)
                .map(|n| {
                    count_avoiders(&p, n).map(|c| {
                        u64::try_from(&c).expect("counts at n <= 10 fit in u64")
                    })
                })
                .collect();
            let seq = seq?;
            let db: Vec<OeisEntry> = match stripped {
                Some(path) => {
                    let (entries, issues) = load_stripped(path, false)?;
                    for issue in &issues {
                        eprintln!("warning: {}: {issue}", path.display());
                    }
                    entries
                }
                None => bundled_snapshot(),
            };
            for m in match_sequence(&seq, &db, 3) {
                println!(
                    "{} (dropped {} leading terms of the sequence, {} of the entry)",
                    m.id, m.seq_shift, m.entry_shift
                );
            }
            if *online {
                match fetch_remote(&seq) {
                    Ok(ids) => {
                        for id in ids {
                            println!("online: {id}");
                        }
                    }
                    Err(e) => eprintln!("warning: online lookup failed: {e}"),
                }
            }
            Ok(0)
        }
        Command::Tables { output } => {
            let sweep = cached_sweep(cli, 9)?;
            let mut state =
                build_partition(2, &[Stage::D8, Stage::Shading, Stage::Shifts])?;
            let format: ReportFormat = output.format.parse()?;
            let db = bundled_snapshot();
            let text = emit_report(&mut state, &sweep, format, Some(&db))?;
            write_output(output.out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn parse_stages(text: &str) -> Result<Vec<Stage>, Error> {
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn parse_formula_id(name: &str) -> Result<FormulaId, Error> {
    FormulaId::ALL
        .into_iter()
        .find(|id| id.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownFormula(name.to_string()))
}

fn cascade(state: &PartitionState) -> String {
    // the trailing fixed-point count merely repeats the last stage
    let counts = state.stage_counts();
    let shown = &counts[..counts.len().saturating_sub(1).max(1)];
    shown
        .iter()
        .map(|(_, c)| c.to_string())
        .collect::<Vec<_>>()
        .join(" \u{2192} ")
}

/// The published checkpoints for the full pipeline; exit 1 when they are
/// missed.
fn checkpoint_code(length: usize, stages: &[Stage], state: &mut PartitionState) -> u8 {
    if stages != [Stage::D8, Stage::Shading, Stage::Shifts] {
        return 0;
    }
    let expected: &[usize] = match length {
        1 => &[16, 6, 4, 4, 4],
        2 => &[1024, 168, 87, 65, 65],
        _ => return 0,
    };
    let got: Vec<usize> = state.stage_counts().iter().map(|(_, c)| *c).collect();
    if got == expected {
        0
    } else {
        eprintln!("checkpoint mismatch: expected {expected:?}, got {got:?}");
        1
    }
}

fn apply_op(p: &MeshPattern, op: &str) -> Result<MeshPattern, Error> {
    match op {
        "up" => Ok(up_shift(p)),
        "toric" => toric_shift(p),
        _ => {
            if let Some(spec) = op.strip_prefix("switch:") {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("expected switch:<a>,<b>,<d>, got {op:?}"),
                    });
                }
                let a: PartOp = parts[0].parse()?;
                let b: PartOp = parts[1].parse()?;
                let d = match parts[2] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(Error::Parse {
                            pos: 0,
                            msg: format!("switch flag d must be 0 or 1, got {other:?}"),
                        })
                    }
                };
                return switch_op(p, a, b, d);
            }
            let w: SymmetryWord = if op == "e" { "".parse()? } else { op.parse()? };
            Ok(symmetry(p, &w))
        }
    }
}

fn cached_sweep(cli: &Cli, max_n: usize) -> Result<SweepResult, Error> {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("MESHPAT_CACHE_DIR").map(PathBuf::from));
    if let Some(dir) = &dir {
        let path = cache_path(dir, max_n);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Some(sweep) = SweepResult::from_json(&text, max_n)? {
                return Ok(sweep);
            }
            // stale engine version or short coverage: recompute, never migrate
        }
    }
    let sweep = sweep_all_length2(max_n)?;
    if let Some(dir) = &dir {
        fs::create_dir_all(dir)?;
        fs::write(cache_path(dir, max_n), sweep.to_json()?)?;
    }
    Ok(sweep)
}

fn cache_path(dir: &Path, max_n: usize) -> PathBuf {
    dir.join(format!("sweep-v{ENGINE_VERSION}-n{max_n}.json"))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
