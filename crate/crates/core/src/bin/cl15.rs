use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cl15::bitstring::Bitstring;
use cl15::calculus::{check_proof, Proof};
use cl15::cirquent::{Cirquent, CirquentGame};
use cl15::formula::parse_formula;
use cl15::fusion::{defuse_n, free_positions, fuse_n};
use cl15::game::{AtomLibrary, Game, Interp, Labmove, Player, Run};
use cl15::harness::library::standard_library;
use cl15::harness::{play, run_corpus, settle, Arena, CorpusOptions, EnvPolicy, HarnessError};
use cl15::strategy::{compile, CompiledStrategy};

/// Largest number of unconstrained positions `fuse` will enumerate.
const FUSION_FREE_CAP: usize = 20;

#[derive(Parser)]
#[command(name = "cl15", version, about = "Check cirquent proofs, play the strategies they yield, and evaluate games")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvKind {
    Random,
    Spoiler,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file.
    Check { proof: PathBuf },
    /// Compile a proof into a strategy bundle.
    Compile {
        proof: PathBuf,
        /// Write the bundle here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Play a proof's strategy against a simulated environment.
    Play {
        proof: PathBuf,
        #[arg(long)]
        atoms: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        env: EnvKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total labmove budget.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Lookahead of the spoiler environment.
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Legality and winner of a run of a formula's or cirquent's game.
    Eval {
        /// A formula.
        #[arg(long, conflicts_with = "cirquent", required_unless_present = "cirquent")]
        game: Option<String>,
        /// A cirquent, `{ oformulas: [...]; under: [...]; over: [...] }`.
        #[arg(long)]
        cirquent: Option<String>,
        /// Labmoves, `T:move, B:move, ...`.
        #[arg(long, default_value = "")]
        run: String,
        /// Atom game file; the built-in library when absent.
        #[arg(long)]
        atoms: Option<PathBuf>,
        /// Game denoted by atoms that are neither bound nor named after a game.
        #[arg(long)]
        default_game: Option<String>,
        /// Cap on thread-class vectors for cirquent evaluation.
        #[arg(long, default_value_t = 100_000)]
        class_cap: usize,
    },
    /// All fusions of the given bitstrings.
    Fuse {
        #[arg(required = true)]
        parts: Vec<String>,
    },
    /// The n-defusion of a bitstring.
    Defuse {
        z: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Run the regression corpus.
    Corpus {
        #[arg(env = "CL15_CORPUS", default_value = "corpus")]
        dir: PathBuf,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Play a proof's strategy with you as the environment.
    Repl {
        proof: PathBuf,
        #[arg(long)]
        atoms: PathBuf,
        #[arg(long, default_value_t = 256)]
        budget: usize,
    },
}

enum Failure {
    /// Bad input or a negative verdict.
    Failed(String),
    /// An internal cap was exceeded.
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Failed(_) => 1,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Failed(e.to_string())
        }
    }
}

fn fail(e: impl ToString) -> Failure {
    Failure::Failed(e.to_string())
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<Proof, Failure> {
    Proof::parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_library(path: &Path) -> Result<AtomLibrary, Failure> {
    AtomLibrary::parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn emit(json: bool, value: &impl Serialize, text: impl FnOnce() -> String) {
    if json {
        say(&(serde_json::to_string_pretty(value).expect("serializable") + "\n"));
    } else {
        say(&text());
    }
}

fn cmd_check(json: bool, path: &Path) -> Outcome {
    let (report, ok) = match Proof::parse(&read(path)?) {
        Err(e) => (json!({ "valid": false, "formula": null, "steps": 0, "error": { "step": e.step(), "message": e.to_string() } }), false),
        Ok(p) => match check_proof(&p) {
            Ok(()) => (
                json!({ "valid": true, "formula": p.formula().map(|f| f.to_string()), "steps": p.steps.len(), "error": null }),
                true,
            ),
            Err(e) => (
                json!({ "valid": false, "formula": null, "steps": p.steps.len(), "error": { "step": e.step(), "message": e.to_string() } }),
                false,
            ),
        },
    };
    emit(json, &report, || match (ok, &report["formula"]) {
        (true, serde_json::Value::String(f)) => format!("ok: {f} ({} steps)\n", report["steps"]),
        (true, _) => format!("ok: {} steps, no single-formula conclusion\n", report["steps"]),
        (false, _) => format!("invalid: {}\n", report["error"]["message"].as_str().unwrap_or_default()),
    });
    Ok(ok)
}

fn cmd_compile(path: &Path, output: Option<&Path>) -> Outcome {
    let s = compile(&load_proof(path)?).map_err(fail)?;
    let text = s.to_json();
    match output {
        Some(out) => fs::write(out, text + "\n").map_err(|e| fail(format!("{}: {e}", out.display())))?,
        None => say(&(text + "\n")),
    }
    Ok(true)
}

fn strategy_and_arena(proof: &Path, atoms: &Path) -> Result<(CompiledStrategy, Arena), Failure> {
    let s = compile(&load_proof(proof)?).map_err(fail)?;
    let lib = load_library(atoms)?;
    let arena = Arena::formula(&s.formula, &lib.interp())?;
    Ok((s, arena))
}

fn cmd_play(json: bool, proof: &Path, atoms: &Path, env: EnvKind, seed: u64, budget: usize, depth: usize) -> Outcome {
    let (s, arena) = strategy_and_arena(proof, atoms)?;
    let policy = match env {
        EnvKind::Random => EnvPolicy::Random { seed, move_budget: budget },
        EnvKind::Spoiler => EnvPolicy::Spoiler {
            depth,
            move_budget: budget,
            seed,
        },
    };
    let rep = play(s.instantiate(), &policy, &arena, budget)?;
    emit(json, &rep, || {
        format!(
            "run: {}\nverdict: {}\noffender: {}\nsteps: {}\ninconclusive: {}\n",
            rep.run,
            rep.verdict,
            rep.offender.map_or("none".into(), |p| p.to_string()),
            rep.steps,
            rep.inconclusive
        )
    });
    Ok(rep.top_won())
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    json: bool,
    game: Option<&str>,
    cirquent: Option<&str>,
    run: &str,
    atoms: Option<&Path>,
    default_game: Option<&str>,
    class_cap: usize,
) -> Outcome {
    let lib = match atoms {
        Some(p) => load_library(p)?,
        None => standard_library(),
    };
    let mut interp = lib.interp();
    if let Some(name) = default_game {
        let g = lib.get(name).ok_or_else(|| fail(format!("no game named {name:?}")))?;
        interp = Interp::uniform(g.clone());
        for (atom, game) in &lib.bindings {
            interp = interp.bind(atom, lib.get(game).expect("bindings are resolved").clone());
        }
    }
    let run: Run = run.parse().map_err(fail)?;
    let arena = match (game, cirquent) {
        (Some(text), _) => Arena::Formula(Game::from_formula(&parse_formula(text).map_err(fail)?, &interp).map_err(fail)?),
        (None, Some(text)) => {
            let c = Cirquent::parse(text).map_err(fail)?;
            Arena::Cirquent(CirquentGame::new(&c, &interp).map_err(fail)?.with_cap(class_cap))
        }
        (None, None) => return Err(fail("one of --game and --cirquent is required")),
    };
    let legal = arena.legal(&run).map_err(HarnessError::from)?;
    let offender = arena.first_offender(&run).map_err(HarnessError::from)?;
    let winner = arena.winner(&run).map_err(HarnessError::from)?;
    let report = json!({ "run": run, "legal": legal, "offender": offender, "winner": winner });
    emit(json, &report, || {
        format!(
            "legal: {legal}\noffender: {}\nwinner: {winner}\n",
            offender.map_or("none".into(), |p: Player| p.to_string())
        )
    });
    Ok(true)
}

fn bitstring(s: &str) -> Result<Bitstring, Failure> {
    s.parse().map_err(|e| fail(format!("{s:?}: {e}")))
}

fn show(b: &Bitstring) -> String {
    if b.is_empty() {
        "ε".into()
    } else {
        b.to_string()
    }
}

fn cmd_fuse(json: bool, parts: &[String]) -> Outcome {
    let xs = parts.iter().map(|p| bitstring(p)).collect::<Result<Vec<_>, _>>()?;
    let free = free_positions(&xs);
    if free > FUSION_FREE_CAP {
        return Err(Failure::Cap(format!(
            "{free} unconstrained positions exceed the cap of {FUSION_FREE_CAP}"
        )));
    }
    let zs = fuse_n(&xs).map_err(fail)?;
    let strs: Vec<String> = zs.iter().map(ToString::to_string).collect();
    emit(json, &json!({ "inputs": parts, "fusions": strs }), || {
        zs.iter().map(|z| show(z) + "\n").collect()
    });
    Ok(true)
}

fn cmd_defuse(json: bool, z: &str, n: usize) -> Outcome {
    let parts = defuse_n(&bitstring(z)?, n).map_err(fail)?;
    let strs: Vec<String> = parts.iter().map(ToString::to_string).collect();
    emit(json, &json!({ "input": z, "n": n, "components": strs }), || {
        parts.iter().map(show).collect::<Vec<_>>().join(" ") + "\n"
    });
    Ok(true)
}

fn cmd_corpus(json: bool, dir: &Path, seeds: u64, budget: usize) -> Outcome {
    let rep = run_corpus(dir, &CorpusOptions { seeds, budget })?;
    emit(json, &rep, || rep.to_text());
    Ok(rep.all_pass())
}

/// Polls the machine until it goes quiet, printing what it plays.
fn machine_turn(t: &mut Box<dyn cl15::strategy::Transducer>, run: &mut Run, budget: usize, out: &mut impl Write) -> io::Result<bool> {
    let before = run.len();
    let quiet = settle(t, run, budget).is_some();
    for m in &run.0[before..] {
        writeln!(out, "  {m}")?;
    }
    Ok(quiet)
}

fn cmd_repl(proof: &Path, atoms: &Path, budget: usize) -> Outcome {
    let (s, arena) = strategy_and_arena(proof, atoms)?;
    let mut t = s.instantiate();
    let mut run = Run::new();
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let io_err = |e: io::Error| fail(e);
    writeln!(out, "game: {}", s.formula).map_err(io_err)?;
    writeln!(out, "enter B moves separated by spaces; an empty line passes; `quit` ends").map_err(io_err)?;
    let mut lines = stdin.lock().lines();
    loop {
        if !machine_turn(&mut t, &mut run, budget, &mut out).map_err(io_err)? {
            writeln!(out, "budget of {budget} labmoves reached").map_err(io_err)?;
            break;
        }
        writeln!(out, "position: ⟨{run}⟩").map_err(io_err)?;
        write!(out, "B> ").map_err(io_err)?;
        out.flush().map_err(io_err)?;
        let Some(line) = lines.next() else { break };
        let line = line.map_err(io_err)?;
        let line = line.trim();
        if line == "quit" {
            break;
        }
        for mv in line.split_whitespace() {
            let next = run.extended(Labmove::bot(mv));
            match arena.first_offender(&next).map_err(HarnessError::from)? {
                Some(Player::Bot) if arena.first_offender(&run).map_err(HarnessError::from)?.is_none() => {
                    writeln!(
                        out,
                        "rejected {mv:?}: B would be the first offender at labmove {} of ⟨{next}⟩",
                        next.len()
                    )
                    .map_err(io_err)?;
                }
                _ if run.len() >= budget => writeln!(out, "budget reached, {mv:?} dropped").map_err(io_err)?,
                _ => run = next,
            }
        }
    }
    let winner = arena.winner(&run).map_err(HarnessError::from)?;
    writeln!(out, "final: ⟨{run}⟩\nwinner: {winner}").map_err(io_err)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match &cli.cmd {
        Cmd::Check { proof } => cmd_check(json, proof),
        Cmd::Compile { proof, output } => cmd_compile(proof, output.as_deref()),
        Cmd::Play {
            proof,
            atoms,
            env,
            seed,
            budget,
            depth,
        } => cmd_play(json, proof, atoms, *env, *seed, *budget, *depth),
        Cmd::Eval {
            game,
            cirquent,
            run,
            atoms,
            default_game,
            class_cap,
        } => cmd_eval(
            json,
            game.as_deref(),
            cirquent.as_deref(),
            run,
            atoms.as_deref(),
            default_game.as_deref(),
            *class_cap,
        ),
        Cmd::Fuse { parts } => cmd_fuse(json, parts),
        Cmd::Defuse { z, n } => cmd_defuse(json, z, *n),
        Cmd::Corpus { dir, seeds, budget } => cmd_corpus(json, dir, *seeds, *budget),
        Cmd::Repl { proof, atoms, budget } => cmd_repl(proof, atoms, *budget),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (Failure::Failed(msg) | Failure::Cap(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
