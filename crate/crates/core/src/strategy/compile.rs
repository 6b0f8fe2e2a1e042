use serde::{Deserialize, Serialize};

use crate::calculus::{check_proof, premise_of, CheckError, Proof, RuleApp};
use crate::formula::Formula;

use super::{axiom_strategy, brec_to_plain, club_to_brec, Simulator, Transducer, Translation};

/// Identifies the serialized form of [`CompiledStrategy`].
pub const FORMAT: &str = "cl15-strategy/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("proof does not check: {0}")]
    Unchecked(#[from] CheckError),
    #[error("proof does not conclude a one-oformula cirquent")]
    NotClub,
    #[error("step {0} is out of range")]
    NoSuchStep(usize),
    #[error("unknown strategy format {0:?}")]
    Format(String),
    #[error("{0}")]
    Inconsistent(String),
}

/// One layer of a compiled strategy, innermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Stage {
    Copycat { diamonds: usize },
    Rule { step: usize, rule: String },
    ClubToBrec,
    BrecToPlain,
}

/// A strategy obtained from a proof. It stores the proof and the order of
/// layers rather than machine code, and depends on no interpretation of the
/// atoms: the same value plays every instance of the formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledStrategy {
    pub format: String,
    pub formula: Formula,
    pub proof: Proof,
    pub stages: Vec<Stage>,
}

/// Checks `proof` and lays out the strategy for its conclusion formula.
pub fn compile(proof: &Proof) -> Result<CompiledStrategy, StrategyError> {
    check_proof(proof)?;
    let formula = proof.formula().ok_or(StrategyError::NotClub)?.clone();
    let mut stages = vec![Stage::Copycat {
        diamonds: proof.steps[0].cirquent.k() / 2,
    }];
    for (i, s) in proof.steps.iter().enumerate().skip(1) {
        stages.push(Stage::Rule {
            step: i + 1,
            rule: s.app.name().to_string(),
        });
    }
    stages.push(Stage::ClubToBrec);
    stages.push(Stage::BrecToPlain);
    Ok(CompiledStrategy {
        format: FORMAT.to_string(),
        formula,
        proof: proof.clone(),
        stages,
    })
}

impl CompiledStrategy {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("strategy serializes")
    }

    pub fn from_json(s: &str) -> Result<CompiledStrategy, StrategyError> {
        let c: CompiledStrategy = serde_json::from_str(s).map_err(|e| StrategyError::Format(e.to_string()))?;
        if c.format != FORMAT {
            return Err(StrategyError::Format(c.format));
        }
        check_proof(&c.proof)?;
        Ok(c)
    }

    /// A fresh transducer playing the formula.
    pub fn instantiate(&self) -> Box<dyn Transducer> {
        let m = self.instantiate_prefix(self.proof.steps.len()).expect("last step exists");
        brec_to_plain(club_to_brec(m))
    }

    /// A fresh transducer playing the cirquent of step `k` (1-based).
    pub fn instantiate_prefix(&self, k: usize) -> Result<Box<dyn Transducer>, StrategyError> {
        strategy_for_step(&self.proof, k)
    }
}

/// The transducer for the cirquent at step `k` of a checked proof.
pub fn strategy_for_step(proof: &Proof, k: usize) -> Result<Box<dyn Transducer>, StrategyError> {
    if k == 0 || k > proof.steps.len() {
        return Err(StrategyError::NoSuchStep(k));
    }
    let mut m = axiom_strategy(&proof.steps[0].cirquent);
    for i in 1..k {
        let step = &proof.steps[i];
        m = transform(&step.app, &proof.steps[i - 1].cirquent, &step.cirquent, m)?;
    }
    Ok(m)
}

/// Turns a strategy for `premise` into one for `conclusion`, where
/// `conclusion` follows from `premise` by `app`.
pub fn transform(
    app: &RuleApp,
    premise: &crate::cirquent::Cirquent,
    conclusion: &crate::cirquent::Cirquent,
    m: Box<dyn Transducer>,
) -> Result<Box<dyn Transducer>, StrategyError> {
    let expected = premise_of(conclusion, app).map_err(|e| StrategyError::Inconsistent(e.to_string()))?;
    if &expected != premise {
        return Err(StrategyError::Inconsistent(format!(
            "{} does not derive {} from {}",
            app.name(),
            conclusion.body_text(),
            premise.body_text()
        )));
    }
    let t = Translation::for_rule(app, premise, conclusion)?;
    Ok(Box::new(Simulator::new(m, t)))
}
