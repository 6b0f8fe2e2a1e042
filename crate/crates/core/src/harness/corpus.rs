//! Regression corpus: `<dir>/<case>/{proof.cl15, atoms.game, expect.json}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calculus::{check_proof, Proof};
use crate::formula::Formula;
use crate::game::{AtomLibrary, Interp};
use crate::strategy::compile;

use super::{rollouts, Arena, EnvPolicy, HarnessError};

/// What a case's `expect.json` promises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    /// The proved formula.
    pub formula: Formula,
    /// Whether the proof should pass the checker.
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusOptions {
    pub seeds: u64,
    pub budget: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { seeds: 50, budget: 64 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub checked: bool,
    pub error: Option<String>,
    pub rollouts: usize,
    pub wins: usize,
    pub inconclusive: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub cases: Vec<CaseReport>,
}

impl CorpusReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{verdict} {:<16} checked={} wins={}/{} inconclusive={}",
                c.name, c.checked, c.wins, c.rollouts, c.inconclusive
            ));
            if let Some(e) = &c.error {
                out.push_str(&format!(" error={e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Interpretations to roll out under: each library game for every atom,
/// plus the library's own bindings.
pub fn interpretations(lib: &AtomLibrary) -> Vec<Interp> {
    let mut out: Vec<Interp> = lib.games.values().map(|g| Interp::uniform(g.clone())).collect();
    if !lib.bindings.is_empty() {
        out.push(lib.interp());
    }
    out
}

fn run_case(dir: &Path, opts: &CorpusOptions) -> CaseReport {
    let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut rep = CaseReport {
        name,
        ..CaseReport::default()
    };
    let result = (|| -> Result<(), String> {
        let expect: Expectation =
            serde_json::from_str(&read(&dir.join("expect.json"))?).map_err(|e| format!("expect.json: {e}"))?;
        let proof = Proof::parse(&read(&dir.join("proof.cl15"))?).map_err(|e| e.to_string());
        let checked = proof.as_ref().map_err(Clone::clone).and_then(|p| check_proof(p).map_err(|e| e.to_string()));
        rep.checked = checked.is_ok();
        if !expect.valid {
            rep.pass = !rep.checked;
            return match checked {
                Ok(()) => Err("proof checks but was expected to fail".into()),
                Err(e) => {
                    rep.error = Some(e);
                    Ok(())
                }
            };
        }
        checked?;
        let proof = proof?;
        let strategy = compile(&proof).map_err(|e| e.to_string())?;
        if strategy.formula != expect.formula {
            return Err(format!("proof concludes {}, expected {}", strategy.formula, expect.formula));
        }
        let lib = AtomLibrary::parse(&read(&dir.join("atoms.game"))?).map_err(|e| e.to_string())?;
        let t = strategy.instantiate();
        let envs: Vec<EnvPolicy> = (0..opts.seeds)
            .map(|seed| EnvPolicy::Random {
                seed,
                move_budget: opts.budget,
            })
            .collect();
        for interp in interpretations(&lib) {
            let arena = Arena::formula(&strategy.formula, &interp).map_err(|e| e.to_string())?;
            for r in rollouts(&t, &arena, &envs, opts.budget).map_err(|e: HarnessError| e.to_string())? {
                rep.rollouts += 1;
                rep.wins += usize::from(r.top_won());
                rep.inconclusive += usize::from(r.inconclusive);
            }
        }
        rep.pass = rep.wins == rep.rollouts;
        Ok(())
    })();
    if let Err(e) = result {
        rep.pass = false;
        rep.error = Some(e);
    }
    rep
}

/// Checks, compiles and rolls out every case directory under `dir`, in name
/// order. A case passes if it meets its expectation.
pub fn run_corpus(dir: &Path, opts: &CorpusOptions) -> Result<CorpusReport, HarnessError> {
    let entries = fs::read_dir(dir).map_err(|e| HarnessError::Corpus(format!("{}: {e}", dir.display())))?;
    let mut dirs: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(CorpusReport {
        cases: dirs.iter().map(|d| run_case(d, opts)).collect(),
    })
}
