//! C ABI over the `cl15` library.
//!
//! Every fallible function returns a [`Cl15Status`]; on anything other than
//! `CL15_STATUS_OK` a message is available from [`cl15_last_error`] on the
//! same thread. Strings handed out by this library are NUL-terminated UTF-8
//! and must be released with [`cl15_string_free`]. Handles are opaque and
//! released with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cl15::bitstring::Bitstring;
use cl15::calculus::{check_proof, Proof};
use cl15::formula::parse_formula;
use cl15::fusion::{defuse_n, free_positions, fuse_n};
use cl15::game::{AtomLibrary, Game, Player, Run};
use cl15::harness::library::standard_library;
use cl15::harness::{play, Arena, EnvPolicy};
use cl15::strategy::{compile, CompiledStrategy, Transducer};

/// Largest number of unconstrained positions [`cl15_fuse`] will enumerate.
pub const CL15_FUSION_FREE_CAP: usize = 20;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cl15Status {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// Text failed to parse.
    ParseError = 3,
    /// A proof failed to check.
    CheckFailed = 4,
    /// A game could not be evaluated, e.g. an atom had no interpretation.
    EvalError = 5,
    /// An internal cap was exceeded.
    CapExceeded = 6,
    /// An argument was out of range.
    InvalidArgument = 7,
    /// The library panicked; this is a bug.
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cl15Player {
    Top = 0,
    Bot = 1,
}

impl From<Player> for Cl15Player {
    fn from(p: Player) -> Self {
        match p {
            Player::Top => Cl15Player::Top,
            Player::Bot => Cl15Player::Bot,
        }
    }
}

/// A parsed proof.
pub struct Cl15Proof {
    proof: Proof,
}

/// A compiled strategy together with a running machine instance.
pub struct Cl15Strategy {
    compiled: CompiledStrategy,
    machine: Box<dyn Transducer>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Error(Cl15Status, String);

fn err(status: Cl15Status, msg: impl ToString) -> Error {
    Error(status, msg.to_string())
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording its error message and containing panics.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> Cl15Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            Cl15Status::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            Cl15Status::Panic
        }
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string valid for reads.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(err(Cl15Status::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| err(Cl15Status::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    if out.is_null() {
        return Err(err(Cl15Status::NullArgument, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| err(Cl15Status::InvalidArgument, "output contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn give<T>(out: *mut *mut T, value: T) -> Result<(), Error> {
    if out.is_null() {
        return Err(err(Cl15Status::NullArgument, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    p.as_ref().ok_or_else(|| err(Cl15Status::NullArgument, format!("{what} is null")))
}

fn library(atoms: Option<&str>) -> Result<AtomLibrary, Error> {
    match atoms {
        Some(t) => AtomLibrary::parse(t).map_err(|e| err(Cl15Status::ParseError, e)),
        None => Ok(standard_library()),
    }
}

/// The message for the last failed call on this thread, or null. The
/// pointer stays valid until the next call into this library on the same
/// thread and must not be freed.
#[no_mangle]
pub extern "C" fn cl15_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl15_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses proof text into a new handle at `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_proof_parse(text: *const c_char, out: *mut *mut Cl15Proof) -> Cl15Status {
    guard(|| {
        let proof = Proof::parse(self::text(text, "text")?).map_err(|e| err(Cl15Status::ParseError, e))?;
        give(out, Cl15Proof { proof })
    })
}

/// # Safety
/// `p` must be null or a handle from [`cl15_proof_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl15_proof_free(p: *mut Cl15Proof) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `CL15_STATUS_OK` if the proof checks, `CL15_STATUS_CHECK_FAILED` with a
/// diagnosis otherwise.
///
/// # Safety
/// `p` must be a live proof handle.
#[no_mangle]
pub unsafe extern "C" fn cl15_proof_check(p: *const Cl15Proof) -> Cl15Status {
    guard(|| {
        let p = borrow(p, "proof")?;
        check_proof(&p.proof).map_err(|e| err(Cl15Status::CheckFailed, e))
    })
}

/// Number of steps in the proof.
///
/// # Safety
/// `p` must be a live proof handle.
#[no_mangle]
pub unsafe extern "C" fn cl15_proof_steps(p: *const Cl15Proof) -> usize {
    p.as_ref().map_or(0, |p| p.proof.steps.len())
}

/// Checks and compiles a proof into a new strategy handle at `*out`.
///
/// # Safety
/// `p` must be a live proof handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_compile(p: *const Cl15Proof, out: *mut *mut Cl15Strategy) -> Cl15Status {
    guard(|| {
        let p = borrow(p, "proof")?;
        let compiled = compile(&p.proof).map_err(|e| err(Cl15Status::CheckFailed, e))?;
        let machine = compiled.instantiate();
        give(out, Cl15Strategy { compiled, machine })
    })
}

/// Loads a strategy bundle in the JSON format of
/// [`cl15_strategy_to_json`], rechecking its proof.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_from_json(json: *const c_char, out: *mut *mut Cl15Strategy) -> Cl15Status {
    guard(|| {
        let compiled = CompiledStrategy::from_json(text(json, "json")?).map_err(|e| err(Cl15Status::ParseError, e))?;
        let machine = compiled.instantiate();
        give(out, Cl15Strategy { compiled, machine })
    })
}

/// # Safety
/// `s` must be null or a strategy handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_free(s: *mut Cl15Strategy) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// The strategy bundle as JSON.
///
/// # Safety
/// `s` must be a live strategy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_to_json(s: *const Cl15Strategy, out: *mut *mut c_char) -> Cl15Status {
    guard(|| give_string(out, borrow(s, "strategy")?.compiled.to_json()))
}

/// The formula the strategy plays.
///
/// # Safety
/// `s` must be a live strategy handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_formula(s: *const Cl15Strategy, out: *mut *mut c_char) -> Cl15Status {
    guard(|| give_string(out, borrow(s, "strategy")?.compiled.formula.to_string()))
}

/// Restarts the strategy's machine from the empty run.
///
/// # Safety
/// `s` must be a live strategy handle.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_reset(s: *mut Cl15Strategy) -> Cl15Status {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| err(Cl15Status::NullArgument, "strategy is null"))?;
        s.machine = s.compiled.instantiate();
        Ok(())
    })
}

/// Shows the machine the run so far (`T:move, B:move, ...`) and writes the
/// block of moves it makes in response, as a JSON array of strings. The run
/// passed on each call must extend the previous one by the machine's own
/// moves and the environment's replies.
///
/// # Safety
/// `s` must be a live strategy handle; `run` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_step(s: *mut Cl15Strategy, run: *const c_char, out: *mut *mut c_char) -> Cl15Status {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| err(Cl15Status::NullArgument, "strategy is null"))?;
        let run: Run = text(run, "run")?.parse().map_err(|e| err(Cl15Status::ParseError, e))?;
        let block = s.machine.step(&run);
        give_string(out, serde_json::to_string(&block).expect("strings serialize"))
    })
}

/// Plays a fresh copy of the strategy against a seeded random environment
/// under the interpretation in `atoms` (the built-in library when null) and
/// writes the play report as JSON.
///
/// # Safety
/// `s` must be a live strategy handle; `atoms` null or a NUL-terminated
/// string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_strategy_play(
    s: *const Cl15Strategy,
    atoms: *const c_char,
    seed: u64,
    budget: usize,
    out: *mut *mut c_char,
) -> Cl15Status {
    guard(|| {
        let s = borrow(s, "strategy")?;
        let atoms = if atoms.is_null() { None } else { Some(text(atoms, "atoms")?) };
        let lib = library(atoms)?;
        let arena = Arena::formula(&s.compiled.formula, &lib.interp()).map_err(|e| err(Cl15Status::EvalError, e))?;
        let env = EnvPolicy::Random { seed, move_budget: budget };
        let rep = play(s.compiled.instantiate(), &env, &arena, budget).map_err(|e| {
            let status = if e.is_cap() { Cl15Status::CapExceeded } else { Cl15Status::EvalError };
            err(status, e)
        })?;
        give_string(out, serde_json::to_string(&rep).expect("report serializes"))
    })
}

/// Legality and winner of `run` in the game of `formula` under `atoms` (the
/// built-in library when null). Either output pointer may be null.
///
/// # Safety
/// `formula` and `run` must be NUL-terminated strings, `atoms` null or one;
/// non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_eval(
    formula: *const c_char,
    atoms: *const c_char,
    run: *const c_char,
    legal: *mut bool,
    winner: *mut Cl15Player,
) -> Cl15Status {
    guard(|| {
        let f = parse_formula(text(formula, "formula")?).map_err(|e| err(Cl15Status::ParseError, e))?;
        let run: Run = text(run, "run")?.parse().map_err(|e| err(Cl15Status::ParseError, e))?;
        let atoms = if atoms.is_null() { None } else { Some(text(atoms, "atoms")?) };
        let g = Game::from_formula(&f, &library(atoms)?.interp()).map_err(|e| err(Cl15Status::EvalError, e))?;
        if !legal.is_null() {
            *legal = g.legal(&run);
        }
        if !winner.is_null() {
            *winner = g.winner(&run).into();
        }
        Ok(())
    })
}

fn bitstring(s: &str) -> Result<Bitstring, Error> {
    s.parse().map_err(|e| err(Cl15Status::ParseError, e))
}

/// All fusions of the `n` bitstrings in `parts`, one per line.
///
/// # Safety
/// `parts` must point to `n` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_fuse(parts: *const *const c_char, n: usize, out: *mut *mut c_char) -> Cl15Status {
    guard(|| {
        if parts.is_null() {
            return Err(err(Cl15Status::NullArgument, "parts is null"));
        }
        if n == 0 {
            return Err(err(Cl15Status::InvalidArgument, "fusion needs at least one bitstring"));
        }
        let xs = std::slice::from_raw_parts(parts, n)
            .iter()
            .map(|&p| text(p, "part").and_then(bitstring))
            .collect::<Result<Vec<_>, _>>()?;
        let free = free_positions(&xs);
        if free > CL15_FUSION_FREE_CAP {
            return Err(err(
                Cl15Status::CapExceeded,
                format!("{free} unconstrained positions exceed the cap of {CL15_FUSION_FREE_CAP}"),
            ));
        }
        let zs = fuse_n(&xs).map_err(|e| err(Cl15Status::InvalidArgument, e))?;
        give_string(out, zs.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
    })
}

/// The `n`-defusion of `z`, one component per line.
///
/// # Safety
/// `z` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl15_defuse(z: *const c_char, n: usize, out: *mut *mut c_char) -> Cl15Status {
    guard(|| {
        let parts = defuse_n(&bitstring(text(z, "z")?)?, n).map_err(|e| err(Cl15Status::InvalidArgument, e))?;
        give_string(out, parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
    })
}
