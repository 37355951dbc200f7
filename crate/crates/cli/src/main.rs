use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use permpat::bench::{parse_config, success_curve, write_outputs};
use permpat::distance::{deletion_distance_exact, distance_bounds, DEFAULT_NODE_BUDGET};
use permpat::entangling::entangling_number;
use permpat::forge::{
    forge_far_instance, forge_free_instance, forge_reduction_pair, forge_template_search, planted_count,
    snap_far_parameters, FarInstanceSpec, TemplateSearchInstance,
};
use permpat::oracle::{AccessMode, QueryOracle, TemplateOracle};
use permpat::partition::{max_adjacent_gap, uspn};
use permpat::seqio::{read_sequence, write_sequence};
use permpat::template::{template_binary_search, template_r_round_solver};
use permpat::testers::{interval_test, sampler_test, IntervalConfig, SamplerConfig};
use permpat::{Error, Permutation};

#[derive(Parser)]
#[command(name = "permpat", version, about = "Pattern-freeness testers, structure analysis and instance generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure quantities of a permutation.
    Analyze {
        perm: Permutation,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Distance to pattern-freeness of a sequence file.
    Dist {
        file: PathBuf,
        perm: Permutation,
        /// Run the exact branch and bound regardless of length.
        #[arg(long)]
        exact: bool,
        /// Node budget of the exact search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        nodes: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run a one-sided tester on a sequence file. Exit code 0 accepts, 1 rejects.
    Test(TestArgs),
    /// Template-search solvers.
    Template {
        #[command(subcommand)]
        action: TemplateAction,
    },
    /// Run a sweep described by a config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides out_dir from the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write a gnuplot script.
        #[arg(long)]
        gnuplot: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum GenKind {
    /// A far instance built from the largest unique signed partition.
    Far {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Move (n, eps) to the nearest conforming pair instead of failing.
        #[arg(long)]
        snap: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// A monotone sequence avoiding the pattern.
    Free {
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes S.seq, T.seq and the ground truth delta.txt into a directory.
    Template {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes yes.seq and no.seq (length 5m) plus the template files into a directory.
    Reduction {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TesterKind {
    Sampler,
    Interval,
}

#[derive(Args)]
struct TestArgs {
    file: PathBuf,
    #[arg(long)]
    perm: Permutation,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum)]
    tester: TesterKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planned query budget: sampler size q, or interval inclusion q/(3n).
    #[arg(long)]
    budget: Option<usize>,
    /// Write the (round, position, value) transcript as CSV.
    #[arg(long)]
    emit_transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Binary,
    Grid,
}

#[derive(Subcommand)]
enum TemplateAction {
    /// Recover the offset from a directory written by `gen template`.
    Solve {
        dir: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Compare against delta.txt after solving.
        #[arg(long)]
        verify: bool,
    },
}

fn emit(format: Format, text: String, record: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::JsonLines => println!("{record}"),
    }
}

fn cap_line(format: Format, quantity: &str, e: &Error) {
    emit(format, format!("{quantity}: not computed ({e})"), json!({"quantity": quantity, "value": null, "note": e.to_string()}));
}

fn analyze(pi: &Permutation, format: Format) -> Result<()> {
    let k = pi.len();
    emit(format, format!("k: {k}"), json!({"quantity": "k", "value": k}));
    match max_adjacent_gap(pi) {
        Ok(m) => emit(format, format!("m: {m}"), json!({"quantity": "m", "value": m})),
        Err(e) => emit(format, format!("m: n/a ({e})"), json!({"quantity": "m", "value": null, "note": e.to_string()})),
    }
    match entangling_number(pi) {
        Ok(d) => {
            let w = d.witness.as_ref().map(|e| e.render(pi));
            emit(
                format,
                format!("d: {} entangling {}", d.value, w.as_deref().unwrap_or("none")),
                json!({"quantity": "d", "value": d.value, "witness": w}),
            );
        }
        Err(e @ Error::CapExceeded { .. }) => cap_line(format, "d", &e),
        Err(e) => return Err(e.into()),
    }
    match uspn(pi) {
        Ok(u) => emit(
            format,
            format!("u: {} partition {}", u.value, u.witness.render(pi)),
            json!({"quantity": "u", "value": u.value, "witness": u.witness.render(pi)}),
        ),
        Err(e @ Error::CapExceeded { .. }) => cap_line(format, "u", &e),
        Err(e) => return Err(e.into()),
    }
    let adj = pi.extremes_adjacent();
    emit(format, format!("extremes adjacent: {adj}"), json!({"quantity": "extremes_adjacent", "value": adj}));
    Ok(())
}

fn dist(file: &Path, pi: &Permutation, exact: bool, nodes: u64, format: Format) -> Result<()> {
    let f = read_sequence(file).with_context(|| format!("reading {}", file.display()))?;
    let mut rep = distance_bounds(&f, pi);
    let mut note = None;
    if exact {
        match deletion_distance_exact(&f, pi, Some(nodes)) {
            Ok(sol) => rep.exact = Some(sol.distance),
            Err(Error::BudgetExceeded(b)) => note = Some(format!("exact search exceeded {b} nodes")),
            Err(e) => return Err(e.into()),
        }
    }
    let exact_text = rep.exact.map_or_else(|| note.clone().unwrap_or_else(|| "not computed".into()), |d| d.to_string());
    emit(
        format,
        format!("n: {}\nlower: {}\nupper: {}\nexact: {exact_text}", f.len(), rep.lower, rep.upper),
        json!({"n": f.len(), "lower": rep.lower, "upper": rep.upper, "exact": rep.exact, "note": note}),
    );
    Ok(())
}

fn gen(kind: GenKind) -> Result<()> {
    match kind {
        GenKind::Far { perm, n, eps, seed, snap, out } => {
            let k = perm.len();
            let (n, eps) = if snap {
                let (n2, e2) = snap_far_parameters(k, n, eps)?;
                if (n2, e2) != (n, eps) {
                    eprintln!("snapped to n = {n2}, eps = {e2}");
                }
                (n2, e2)
            } else {
                if let Err(e) = planted_count(k, n, eps) {
                    let hint = snap_far_parameters(k, n, eps)
                        .map(|(a, b)| format!(" (nearest conforming pair: n = {a}, eps = {b}; pass --snap)"))
                        .unwrap_or_default();
                    bail!("{e}{hint}");
                }
                (n, eps)
            };
            let partition = uspn(&perm)?.witness;
            let header = format!("far instance pattern={perm} n={n} eps={eps} seed={seed} partition={}", partition.render(&perm));
            let inst = forge_far_instance(&FarInstanceSpec { pi: perm, partition, n, eps, seed })?;
            write_sequence(&out, &inst.sequence, Some(&header))?;
        }
        GenKind::Free { perm, n, seed, out } => {
            let f = forge_free_instance(&perm, n, seed)?;
            write_sequence(&out, &f, Some(&format!("free instance pattern={perm} n={n} seed={seed}")))?;
        }
        GenKind::Template { m, seed, out } => {
            let inst = forge_template_search(m, seed)?;
            write_template(&inst, &out, seed)?;
        }
        GenKind::Reduction { m, seed, out } => {
            let inst = forge_template_search(m, seed)?;
            let pair = forge_reduction_pair(&inst)?;
            write_template(&inst, &out, seed)?;
            write_sequence(out.join("yes.seq"), &pair.f_yes, Some(&format!("reduction yes instance m={m} seed={seed}")))?;
            write_sequence(out.join("no.seq"), &pair.f_no, Some(&format!("reduction no instance m={m} seed={seed}")))?;
        }
    }
    Ok(())
}

fn write_template(inst: &TemplateSearchInstance, dir: &Path, seed: u64) -> Result<()> {
    fs::create_dir_all(dir)?;
    let m = inst.m();
    write_sequence(dir.join("S.seq"), inst.s(), Some(&format!("template S m={m} seed={seed}")))?;
    write_sequence(dir.join("T.seq"), inst.t(), Some(&format!("template T m={m} seed={seed}")))?;
    fs::write(dir.join("delta.txt"), format!("{}\n", inst.delta()))?;
    Ok(())
}

fn test(args: TestArgs) -> Result<bool> {
    let f = read_sequence(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let mut oracle = QueryOracle::new(&f, AccessMode::NonAdaptive);
    let verdict = match args.tester {
        TesterKind::Sampler => {
            let cfg = SamplerConfig { constant: None, queries: args.budget };
            sampler_test(&mut oracle, &args.perm, args.eps, args.seed, &cfg)?
        }
        TesterKind::Interval => {
            let inclusion = args.budget.map(|q| q as f64 / (3.0 * f.len().max(1) as f64));
            let cfg = IntervalConfig { c: None, inclusion, fallback_constant: None };
            interval_test(&mut oracle, &args.perm, args.eps, args.seed, &cfg)?
        }
    };
    if let Some(path) = &args.emit_transcript {
        let mut csv = String::from("round,position,value\n");
        for r in oracle.transcript() {
            csv.push_str(&format!("{},{},{:?}\n", r.round, r.position, r.value));
        }
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    for w in &verdict.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", serde_json::to_string(&verdict)?);
    Ok(verdict.rejected())
}

fn template_solve(dir: &Path, algo: Algo, rounds: usize, budget: usize, verify: bool) -> Result<()> {
    let s = read_sequence(dir.join("S.seq"))?;
    let t = read_sequence(dir.join("T.seq"))?;
    let inst = TemplateSearchInstance::from_arrays(s, t)?;
    let rep = match algo {
        Algo::Binary => template_binary_search(&mut TemplateOracle::new(&inst, AccessMode::Adaptive))?,
        Algo::Grid => {
            let mut o = TemplateOracle::new(&inst, AccessMode::Rounds(rounds)).with_budget(budget);
            template_r_round_solver(&mut o, rounds, budget)?
        }
    };
    let mut record = json!({
        "estimate": rep.estimate,
        "queries_used": rep.queries_used,
        "rounds_used": rep.rounds_used,
        "candidates_left": rep.candidates_left,
    });
    if verify {
        let truth: usize = fs::read_to_string(dir.join("delta.txt"))?
            .trim()
            .parse()
            .map_err(|_| anyhow!("delta.txt does not hold an integer"))?;
        record["correct"] = json!(truth == rep.estimate);
    }
    println!("{record}");
    Ok(())
}

fn bench(config: &Path, out_dir: Option<PathBuf>, gnuplot: bool) -> Result<()> {
    let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg = parse_config(&text)?;
    if let Some(d) = out_dir {
        cfg.out_dir = d;
    }
    let res = success_curve(&cfg)?;
    for p in &res.points {
        if let Some(reason) = &p.point.skipped {
            eprintln!("point {} skipped: {reason}", p.point.index);
        }
    }
    for path in write_outputs(&cfg, &res, &cfg.out_dir, gnuplot)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { perm, format } => analyze(&perm, format)?,
        Command::Dist { file, perm, exact, nodes, format } => dist(&file, &perm, exact, nodes, format)?,
        Command::Gen { kind } => gen(kind)?,
        Command::Test(args) => {
            let rejected = test(args)?;
            return Ok(if rejected { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
        Command::Template { action: TemplateAction::Solve { dir, algo, rounds, budget, verify } } => {
            template_solve(&dir, algo, rounds, budget, verify)?
        }
        Command::Bench { config, out_dir, gnuplot } => bench(&config, out_dir, gnuplot)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
