#ifndef CL15_H
#define CL15_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Largest number of unconstrained positions [`cl15_fuse`] will enumerate.
#define CL15_FUSION_FREE_CAP 20

typedef enum Cl15Player {
  CL15_PLAYER_TOP = 0,
  CL15_PLAYER_BOT = 1,
} Cl15Player;

typedef enum Cl15Status {
  CL15_STATUS_OK = 0,
  // A required pointer argument was null.
  CL15_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not UTF-8.
  CL15_STATUS_INVALID_UTF8 = 2,
  // Text failed to parse.
  CL15_STATUS_PARSE_ERROR = 3,
  // A proof failed to check.
  CL15_STATUS_CHECK_FAILED = 4,
  // A game could not be evaluated, e.g. an atom had no interpretation.
  CL15_STATUS_EVAL_ERROR = 5,
  // An internal cap was exceeded.
  CL15_STATUS_CAP_EXCEEDED = 6,
  // An argument was out of range.
  CL15_STATUS_INVALID_ARGUMENT = 7,
  // The library panicked; this is a bug.
  CL15_STATUS_PANIC = 8,
} Cl15Status;

// A parsed proof.
typedef struct Cl15Proof Cl15Proof;

// A compiled strategy together with a running machine instance.
typedef struct Cl15Strategy Cl15Strategy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message for the last failed call on this thread, or null. The
// pointer stays valid until the next call into this library on the same
// thread and must not be freed.
const char *cl15_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string obtained from this library, not yet freed.
void cl15_string_free(char *s);

// Parses proof text into a new handle at `*out`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum Cl15Status cl15_proof_parse(const char *text, struct Cl15Proof **out);

// # Safety
// `p` must be null or a handle from [`cl15_proof_parse`], not yet freed.
void cl15_proof_free(struct Cl15Proof *p);

// `CL15_STATUS_OK` if the proof checks, `CL15_STATUS_CHECK_FAILED` with a
// diagnosis otherwise.
//
// # Safety
// `p` must be a live proof handle.
enum Cl15Status cl15_proof_check(const struct Cl15Proof *p);

// Number of steps in the proof.
//
// # Safety
// `p` must be a live proof handle.
size_t cl15_proof_steps(const struct Cl15Proof *p);

// Checks and compiles a proof into a new strategy handle at `*out`.
//
// # Safety
// `p` must be a live proof handle; `out` must be writable.
enum Cl15Status cl15_strategy_compile(const struct Cl15Proof *p, struct Cl15Strategy **out);

// Loads a strategy bundle in the JSON format of
// [`cl15_strategy_to_json`], rechecking its proof.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum Cl15Status cl15_strategy_from_json(const char *json, struct Cl15Strategy **out);

// # Safety
// `s` must be null or a strategy handle, not yet freed.
void cl15_strategy_free(struct Cl15Strategy *s);

// The strategy bundle as JSON.
//
// # Safety
// `s` must be a live strategy handle; `out` must be writable.
enum Cl15Status cl15_strategy_to_json(const struct Cl15Strategy *s, char **out);

// The formula the strategy plays.
//
// # Safety
// `s` must be a live strategy handle; `out` must be writable.
enum Cl15Status cl15_strategy_formula(const struct Cl15Strategy *s, char **out);

// Restarts the strategy's machine from the empty run.
//
// # Safety
// `s` must be a live strategy handle.
enum Cl15Status cl15_strategy_reset(struct Cl15Strategy *s);

// Shows the machine the run so far (`T:move, B:move, ...`) and writes the
// block of moves it makes in response, as a JSON array of strings. The run
// passed on each call must extend the previous one by the machine's own
// moves and the environment's replies.
//
// # Safety
// `s` must be a live strategy handle; `run` a NUL-terminated string; `out`
// writable.
enum Cl15Status cl15_strategy_step(struct Cl15Strategy *s, const char *run, char **out);

// Plays a fresh copy of the strategy against a seeded random environment
// under the interpretation in `atoms` (the built-in library when null) and
// writes the play report as JSON.
//
// # Safety
// `s` must be a live strategy handle; `atoms` null or a NUL-terminated
// string; `out` writable.
enum Cl15Status cl15_strategy_play(const struct Cl15Strategy *s,
                                   const char *atoms,
                                   uint64_t seed,
                                   size_t budget,
                                   char **out);

// Legality and winner of `run` in the game of `formula` under `atoms` (the
// built-in library when null). Either output pointer may be null.
//
// # Safety
// `formula` and `run` must be NUL-terminated strings, `atoms` null or one;
// non-null outputs must be writable.
enum Cl15Status cl15_eval(const char *formula,
                          const char *atoms,
                          const char *run,
                          bool *legal,
                          enum Cl15Player *winner);

// All fusions of the `n` bitstrings in `parts`, one per line.
//
// # Safety
// `parts` must point to `n` NUL-terminated strings; `out` must be writable.
enum Cl15Status cl15_fuse(const char *const *parts, size_t n, char **out);

// The `n`-defusion of `z`, one component per line.
//
// # Safety
// `z` must be a NUL-terminated string; `out` must be writable.
enum Cl15Status cl15_defuse(const char *z, size_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CL15_H */
