//! The rules of the calculus, proofs, and the proof checker.
//!
//! Rules are stated in the conclusion-to-premise direction: given a
//! conclusion and the rule's parameters, [`premise_of`] computes the unique
//! premise. Proofs are written top-down, axiom first, and the checker
//! verifies that each step's premise is the cirquent right before it.
//!
//! All indices in parameters are 1-based and refer to the conclusion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cirquent::{Cirquent, CirquentError};
use crate::formula::Formula;
use crate::syntax::{Cursor, SyntaxError};

/// A rule together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleApp {
    /// Introduces one diamond `¬F, F` per formula.
    Axiom { formulas: Vec<Formula> },
    /// Swaps undergroups `position` and `position + 1`.
    UnderExchange { position: usize },
    /// Swaps oformulas `position` and `position + 1`.
    OformulaExchange { position: usize },
    /// Swaps overgroups `position` and `position + 1`.
    OverExchange { position: usize },
    /// Removes `oformula` from `undergroup`, cascading deletions.
    Weakening { undergroup: usize, oformula: usize },
    /// Splits a `?F` oformula into two adjacent copies.
    Contraction { oformula: usize },
    /// Undergroups `undergroup` and `undergroup + 1` are equal; keeps one.
    UnderDuplication { undergroup: usize },
    /// Overgroups `overgroup` and `overgroup + 1` are equal; keeps one.
    OverDuplication { overgroup: usize },
    /// Splits overgroup `overgroup` into `left` and `right`, whose union it is.
    Merging {
        overgroup: usize,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    /// Replaces `E | F` by `E, F`.
    DisjIntro { oformula: usize },
    /// Replaces `E & F` by `E, F`, splitting undergroups.
    ConjIntro { oformula: usize },
    /// Replaces `!F` by `F` and inserts the overgroup `{oformula}` at `position`
    /// of the premise's overgroup list.
    RecIntro { oformula: usize, position: usize },
    /// Replaces `?F` by `F`, adding it to the listed overgroups.
    CorecIntro { oformula: usize, overgroups: Vec<usize> },
}

impl RuleApp {
    pub fn name(&self) -> &'static str {
        match self {
            RuleApp::Axiom { .. } => "axiom",
            RuleApp::UnderExchange { .. } => "under_exchange",
            RuleApp::OformulaExchange { .. } => "oformula_exchange",
            RuleApp::OverExchange { .. } => "over_exchange",
            RuleApp::Weakening { .. } => "weakening",
            RuleApp::Contraction { .. } => "contraction",
            RuleApp::UnderDuplication { .. } => "under_duplication",
            RuleApp::OverDuplication { .. } => "over_duplication",
            RuleApp::Merging { .. } => "merging",
            RuleApp::DisjIntro { .. } => "disj_intro",
            RuleApp::ConjIntro { .. } => "conj_intro",
            RuleApp::RecIntro { .. } => "rec_intro",
            RuleApp::CorecIntro { .. } => "corec_intro",
        }
    }

    /// The `params: { ... }` body in proof-file syntax.
    pub fn params_text(&self) -> String {
        fn list(v: &[usize]) -> String {
            format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        }
        match self {
            RuleApp::Axiom { formulas } => format!(
                "{{ formulas: [{}] }}",
                formulas.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
            ),
            RuleApp::UnderExchange { position } | RuleApp::OformulaExchange { position } | RuleApp::OverExchange { position } => {
                format!("{{ position: {position} }}")
            }
            RuleApp::Weakening { undergroup, oformula } => format!("{{ undergroup: {undergroup}; oformula: {oformula} }}"),
            RuleApp::Contraction { oformula } | RuleApp::DisjIntro { oformula } | RuleApp::ConjIntro { oformula } => {
                format!("{{ oformula: {oformula} }}")
            }
            RuleApp::UnderDuplication { undergroup } => format!("{{ undergroup: {undergroup} }}"),
            RuleApp::OverDuplication { overgroup } => format!("{{ overgroup: {overgroup} }}"),
            RuleApp::Merging { overgroup, left, right } => {
                format!("{{ overgroup: {overgroup}; left: {}; right: {} }}", list(left), list(right))
            }
            RuleApp::RecIntro { oformula, position } => format!("{{ oformula: {oformula}; position: {position} }}"),
            RuleApp::CorecIntro { oformula, overgroups } => {
                format!("{{ oformula: {oformula}; overgroups: {} }}", list(overgroups))
            }
        }
    }

    fn parse(cur: &mut Cursor<'_>, name: &str) -> Result<RuleApp, SyntaxError> {
        #[derive(Default)]
        struct P {
            formulas: Option<Vec<Formula>>,
            nums: std::collections::BTreeMap<String, usize>,
            lists: std::collections::BTreeMap<String, Vec<usize>>,
        }
        let mut p = P::default();
        cur.expect('{')?;
        while !cur.eat('}') {
            let key = cur.word()?;
            cur.expect(':')?;
            match key.as_str() {
                "formulas" => p.formulas = Some(cur.formula_list()?),
                "left" | "right" | "overgroups" => {
                    p.lists.insert(key, cur.number_list()?);
                }
                _ => {
                    p.nums.insert(key, cur.number()?);
                }
            }
            cur.eat(';');
        }
        let num = |k: &str| p.nums.get(k).copied().ok_or_else(|| cur.err(format!("rule {name} needs parameter `{k}`")));
        let list = |k: &str| p.lists.get(k).cloned().ok_or_else(|| cur.err(format!("rule {name} needs parameter `{k}`")));
        Ok(match name {
            "axiom" => RuleApp::Axiom {
                formulas: p.formulas.clone().ok_or_else(|| cur.err("axiom needs `formulas`"))?,
            },
            "under_exchange" => RuleApp::UnderExchange { position: num("position")? },
            "oformula_exchange" => RuleApp::OformulaExchange { position: num("position")? },
            "over_exchange" => RuleApp::OverExchange { position: num("position")? },
            "weakening" => RuleApp::Weakening {
                undergroup: num("undergroup")?,
                oformula: num("oformula")?,
            },
            "contraction" => RuleApp::Contraction { oformula: num("oformula")? },
            "under_duplication" => RuleApp::UnderDuplication { undergroup: num("undergroup")? },
            "over_duplication" => RuleApp::OverDuplication { overgroup: num("overgroup")? },
            "merging" => RuleApp::Merging {
                overgroup: num("overgroup")?,
                left: list("left")?,
                right: list("right")?,
            },
            "disj_intro" => RuleApp::DisjIntro { oformula: num("oformula")? },
            "conj_intro" => RuleApp::ConjIntro { oformula: num("oformula")? },
            "rec_intro" => RuleApp::RecIntro {
                oformula: num("oformula")?,
                position: num("position")?,
            },
            "corec_intro" => RuleApp::CorecIntro {
                oformula: num("oformula")?,
                overgroups: list("overgroups")?,
            },
            other => return Err(cur.err(format!("unknown rule `{other}`"))),
        })
    }
}

impl fmt::Display for RuleApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.params_text())
    }
}

/// Why a rule cannot be applied to a conclusion.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{rule}: {message}")]
pub struct RuleError {
    pub rule: &'static str,
    pub message: String,
}

/// One diamond `¬F_i, F_i` per formula, each its own undergroup and overgroup.
pub fn axiom(formulas: &[Formula]) -> Result<Cirquent, RuleError> {
    if formulas.is_empty() {
        return Err(RuleError {
            rule: "axiom",
            message: "needs at least one formula".into(),
        });
    }
    let oformulas = formulas.iter().flat_map(|f| [f.negate(), f.clone()]).collect();
    let diamonds: Vec<Vec<usize>> = (1..=formulas.len()).map(|i| vec![2 * i - 1, 2 * i]).collect();
    Ok(Cirquent {
        oformulas,
        under: diamonds.clone(),
        over: diamonds,
    })
}

fn remap(groups: &[Vec<usize>], f: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    groups
        .iter()
        .map(|g| {
            let mut out: Vec<usize> = g.iter().flat_map(|&a| f(a)).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// Oformula `a` becomes `a, a+1`; later oformulas shift right.
fn split_index(a: usize) -> impl Fn(usize) -> Vec<usize> {
    move |b| match b.cmp(&a) {
        std::cmp::Ordering::Less => vec![b],
        std::cmp::Ordering::Equal => vec![a, a + 1],
        std::cmp::Ordering::Greater => vec![b + 1],
    }
}

fn split_oformula(c: &Cirquent, a: usize, left: Formula, right: Formula) -> Vec<Formula> {
    let mut fs = c.oformulas.clone();
    fs[a - 1] = left;
    fs.insert(a, right);
    fs
}

/// The premise of `conclusion` under `app`.
pub fn premise_of(conclusion: &Cirquent, app: &RuleApp) -> Result<Cirquent, RuleError> {
    let rule = app.name();
    let fail = |message: String| RuleError { rule, message };
    let c = conclusion;
    let (k, m, n) = (c.k(), c.m(), c.n());
    let oformula_in_range = |a: usize| {
        if (1..=k).contains(&a) {
            Ok(())
        } else {
            Err(fail(format!("oformula #{a} out of range 1..={k}")))
        }
    };
    let premise = match app {
        RuleApp::Axiom { .. } => return Err(fail("the axiom has no premise".into())),
        RuleApp::UnderExchange { position: i } | RuleApp::OverExchange { position: i } => {
            let is_under = matches!(app, RuleApp::UnderExchange { .. });
            let len = if is_under { m } else { n };
            if *i == 0 || i + 1 > len {
                return Err(fail(format!("position {i} needs groups {i} and {} among {len}", i + 1)));
            }
            let mut p = c.clone();
            let groups = if is_under { &mut p.under } else { &mut p.over };
            groups.swap(i - 1, *i);
            p
        }
        RuleApp::OformulaExchange { position: i } => {
            if *i == 0 || i + 1 > k {
                return Err(fail(format!("position {i} needs oformulas {i} and {} among {k}", i + 1)));
            }
            let i = *i;
            let swap = |b: usize| {
                vec![if b == i {
                    i + 1
                } else if b == i + 1 {
                    i
                } else {
                    b
                }]
            };
            let mut fs = c.oformulas.clone();
            fs.swap(i - 1, i);
            Cirquent {
                oformulas: fs,
                under: remap(&c.under, swap),
                over: remap(&c.over, swap),
            }
        }
        RuleApp::Weakening { undergroup: u, oformula: o } => {
            if *u == 0 || *u > m {
                return Err(fail(format!("undergroup #{u} out of range 1..={m}")));
            }
            let group = &c.under[u - 1];
            if !group.contains(o) {
                return Err(fail(format!("undergroup #{u} does not contain oformula #{o}")));
            }
            if group.len() < 2 {
                return Err(fail(format!("undergroup #{u} has fewer than two oformulas")));
            }
            let mut p = c.clone();
            p.under[u - 1].retain(|a| a != o);
            if p.under.iter().all(|g| !g.contains(o)) {
                let o = *o;
                p.oformulas.remove(o - 1);
                let drop = |b: usize| match b.cmp(&o) {
                    std::cmp::Ordering::Less => vec![b],
                    std::cmp::Ordering::Equal => vec![],
                    std::cmp::Ordering::Greater => vec![b - 1],
                };
                p.under = remap(&p.under, drop);
                p.over = remap(&p.over, drop);
                p.over.retain(|g| !g.is_empty());
            }
            p
        }
        RuleApp::Contraction { oformula: a } => {
            oformula_in_range(*a)?;
            let f = c.formula(*a);
            if !matches!(f, Formula::Cobrec(_)) {
                return Err(fail(format!("oformula #{a} is {f}, not a ?-formula")));
            }
            let split = split_index(*a);
            Cirquent {
                oformulas: split_oformula(c, *a, f.clone(), f.clone()),
                under: remap(&c.under, &split),
                over: remap(&c.over, &split),
            }
        }
        RuleApp::UnderDuplication { undergroup: i } | RuleApp::OverDuplication { overgroup: i } => {
            let is_under = matches!(app, RuleApp::UnderDuplication { .. });
            let len = if is_under { m } else { n };
            if *i == 0 || i + 1 > len {
                return Err(fail(format!("group {i} has no right neighbour among {len}")));
            }
            let mut p = c.clone();
            let groups = if is_under { &mut p.under } else { &mut p.over };
            if groups[i - 1] != groups[*i] {
                return Err(fail(format!("groups {i} and {} differ", i + 1)));
            }
            groups.remove(*i);
            p
        }
        RuleApp::Merging { overgroup: j, left, right } => {
            if *j == 0 || *j > n {
                return Err(fail(format!("overgroup #{j} out of range 1..={n}")));
            }
            let norm = |v: &Vec<usize>| {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            };
            let (l, r) = (norm(left), norm(right));
            if l.is_empty() || r.is_empty() {
                return Err(fail("both parts must be nonempty".into()));
            }
            let mut union: Vec<usize> = l.iter().chain(&r).copied().collect();
            union.sort_unstable();
            union.dedup();
            if union != c.over[j - 1] {
                return Err(fail(format!("parts {l:?} and {r:?} do not make up overgroup #{j} = {:?}", c.over[j - 1])));
            }
            let mut p = c.clone();
            p.over[j - 1] = l;
            p.over.insert(*j, r);
            p
        }
        RuleApp::DisjIntro { oformula: a } | RuleApp::ConjIntro { oformula: a } => {
            oformula_in_range(*a)?;
            let is_conj = matches!(app, RuleApp::ConjIntro { .. });
            let (e, f) = match (c.formula(*a), is_conj) {
                (Formula::Or(e, f), false) | (Formula::And(e, f), true) => ((**e).clone(), (**f).clone()),
                (other, _) => {
                    let want = if is_conj { "conjunction" } else { "disjunction" };
                    return Err(fail(format!("oformula #{a} is {other}, not a {want}")));
                }
            };
            let a = *a;
            let split = split_index(a);
            let under = if is_conj {
                let mut out = Vec::new();
                for g in remap(&c.under, &split) {
                    if g.contains(&a) {
                        out.push(g.iter().copied().filter(|&b| b != a + 1).collect());
                        out.push(g.iter().copied().filter(|&b| b != a).collect());
                    } else {
                        out.push(g);
                    }
                }
                out
            } else {
                remap(&c.under, &split)
            };
            Cirquent {
                oformulas: split_oformula(c, a, e, f),
                under,
                over: remap(&c.over, &split),
            }
        }
        RuleApp::RecIntro { oformula: a, position: p } => {
            oformula_in_range(*a)?;
            let body = match c.formula(*a) {
                Formula::Brec(f) => (**f).clone(),
                other => return Err(fail(format!("oformula #{a} is {other}, not a !-formula"))),
            };
            if *p == 0 || *p > n + 1 {
                return Err(fail(format!("position {p} out of range 1..={}", n + 1)));
            }
            let mut prem = c.clone();
            prem.oformulas[a - 1] = body;
            prem.over.insert(p - 1, vec![*a]);
            prem
        }
        RuleApp::CorecIntro { oformula: a, overgroups } => {
            oformula_in_range(*a)?;
            let body = match c.formula(*a) {
                Formula::Cobrec(f) => (**f).clone(),
                other => return Err(fail(format!("oformula #{a} is {other}, not a ?-formula"))),
            };
            let mut prem = c.clone();
            prem.oformulas[a - 1] = body;
            let mut seen = Vec::new();
            for &j in overgroups {
                if j == 0 || j > n {
                    return Err(fail(format!("overgroup #{j} out of range 1..={n}")));
                }
                if seen.contains(&j) {
                    return Err(fail(format!("overgroup #{j} listed twice")));
                }
                if c.over[j - 1].contains(a) {
                    return Err(fail(format!("oformula #{a} already belongs to overgroup #{j}")));
                }
                seen.push(j);
                prem.over[j - 1].push(*a);
                prem.over[j - 1].sort_unstable();
            }
            prem
        }
    };
    premise.validate().map_err(|e| fail(format!("premise would be malformed: {e}")))?;
    Ok(premise)
}

/// A proof step: the rule used and the cirquent it concludes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub app: RuleApp,
    pub cirquent: Cirquent,
}

/// A top-down sequence of steps, the first an axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("step {step}: {source}")]
    Cirquent { step: usize, source: CirquentError },
    #[error("step {found} is out of sequence; expected step {expected}")]
    Numbering { expected: usize, found: usize },
}

impl ProofParseError {
    /// The step the error was found in, when known.
    pub fn step(&self) -> Option<usize> {
        match self {
            ProofParseError::Syntax(_) => None,
            ProofParseError::Cirquent { step, .. } => Some(*step),
            ProofParseError::Numbering { found, .. } => Some(*found),
        }
    }
}

impl Proof {
    /// Builds a proof backwards from `conclusion`, applying `apps` from the
    /// last step upwards. The cirquent reached must be an axiom instance.
    pub fn derive(conclusion: Cirquent, apps: &[RuleApp]) -> Result<Proof, RuleError> {
        let mut steps = Vec::with_capacity(apps.len() + 1);
        let mut cur = conclusion;
        for app in apps {
            let premise = premise_of(&cur, app)?;
            steps.push(Step {
                app: app.clone(),
                cirquent: cur,
            });
            cur = premise;
        }
        let formulas: Vec<Formula> = cur.oformulas.iter().skip(1).step_by(2).cloned().collect();
        let top = axiom(&formulas).ok().filter(|ax| *ax == cur).ok_or_else(|| RuleError {
            rule: "axiom",
            message: format!("{} is not an axiom instance", cur.body_text()),
        })?;
        steps.push(Step {
            app: RuleApp::Axiom { formulas },
            cirquent: top,
        });
        steps.reverse();
        Ok(Proof { steps })
    }

    pub fn conclusion(&self) -> Option<&Cirquent> {
        self.steps.last().map(|s| &s.cirquent)
    }

    /// The formula `F` if the proof concludes `F`'s one-oformula cirquent.
    pub fn formula(&self) -> Option<&Formula> {
        self.conclusion().and_then(Cirquent::as_club)
    }

    pub fn parse(text: &str) -> Result<Proof, ProofParseError> {
        let mut cur = Cursor::new(text);
        let mut steps = Vec::new();
        while !cur.at_end() {
            cur.keyword("step")?;
            let number = cur.number()?;
            if number != steps.len() + 1 {
                return Err(ProofParseError::Numbering {
                    expected: steps.len() + 1,
                    found: number,
                });
            }
            cur.expect('{')?;
            let (mut rule, mut params_at, mut cirquent) = (None, None, None);
            while !cur.eat('}') {
                let key = cur.word()?;
                cur.expect(':')?;
                match key.as_str() {
                    "rule" => rule = Some(cur.word()?),
                    "params" => {
                        let name = rule.clone().ok_or_else(|| cur.err("`rule` must come before `params`"))?;
                        params_at = Some(RuleApp::parse(&mut cur, &name)?);
                    }
                    "cirquent" => {
                        cirquent = Some(Cirquent::parse_body(&mut cur).map_err(|e| match e {
                            CirquentError::Syntax(s) => ProofParseError::Syntax(s),
                            other => ProofParseError::Cirquent {
                                step: number,
                                source: other,
                            },
                        })?)
                    }
                    other => return Err(cur.err(format!("unknown step field `{other}`")).into()),
                }
                cur.eat(';');
            }
            let app = params_at.ok_or_else(|| cur.err(format!("step {number} has no `params`")))?;
            let cirquent = cirquent.ok_or_else(|| cur.err(format!("step {number} has no `cirquent`")))?;
            steps.push(Step { app, cirquent });
        }
        Ok(Proof { steps })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {} {{\n  rule: {};\n  params: {};\n  cirquent: {};\n}}\n",
                i + 1,
                s.app.name(),
                s.app.params_text(),
                s.cirquent.body_text()
            ));
        }
        out
    }
}

impl FromStr for Proof {
    type Err = ProofParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Proof::parse(s)
    }
}

/// Where and why a proof fails to check.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum CheckError {
    #[error("the proof has no steps")]
    Empty,
    #[error("step 1 must be an axiom, found {0}")]
    FirstNotAxiom(String),
    #[error("step {step}: {message}")]
    Rule { step: usize, message: String },
    #[error("step {step}: the premise computed from this step is {expected}, but step {prev} is {found}", prev = step - 1)]
    Mismatch {
        step: usize,
        expected: String,
        found: String,
    },
}

impl CheckError {
    /// The 1-based step the error is reported at.
    pub fn step(&self) -> usize {
        match self {
            CheckError::Empty | CheckError::FirstNotAxiom(_) => 1,
            CheckError::Rule { step, .. } | CheckError::Mismatch { step, .. } => *step,
        }
    }
}

pub fn check_proof(p: &Proof) -> Result<(), CheckError> {
    let first = p.steps.first().ok_or(CheckError::Empty)?;
    let RuleApp::Axiom { formulas } = &first.app else {
        return Err(CheckError::FirstNotAxiom(first.app.name().into()));
    };
    let ax = axiom(formulas).map_err(|e| CheckError::Rule {
        step: 1,
        message: e.to_string(),
    })?;
    if ax != first.cirquent {
        return Err(CheckError::Rule {
            step: 1,
            message: format!("axiom instance is {}, not {}", ax.body_text(), first.cirquent.body_text()),
        });
    }
    for (i, pair) in p.steps.windows(2).enumerate() {
        let step = i + 2;
        let (prev, cur) = (&pair[0], &pair[1]);
        if matches!(cur.app, RuleApp::Axiom { .. }) {
            return Err(CheckError::Rule {
                step,
                message: "the axiom may only open a proof".into(),
            });
        }
        cur.cirquent.validate().map_err(|e| CheckError::Rule {
            step,
            message: e.to_string(),
        })?;
        let premise = premise_of(&cur.cirquent, &cur.app).map_err(|e| CheckError::Rule {
            step,
            message: e.to_string(),
        })?;
        if premise != prev.cirquent {
            return Err(CheckError::Mismatch {
                step,
                expected: premise.body_text(),
                found: prev.cirquent.body_text(),
            });
        }
    }
    Ok(())
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..(1 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &x)| x).collect())
        .collect()
}

/// Largest group size for which merging splits and corecurrence targets are
/// enumerated by [`infer_rule`].
const INFER_LIMIT: usize = 10;

/// Every rule application turning `next` into `prev`.
pub fn infer_rule(prev: &Cirquent, next: &Cirquent) -> Vec<RuleApp> {
    let (k, m, n) = (next.k(), next.m(), next.n());
    let mut cands = Vec::new();
    for i in 1..m {
        cands.push(RuleApp::UnderExchange { position: i });
        cands.push(RuleApp::UnderDuplication { undergroup: i });
    }
    for i in 1..k {
        cands.push(RuleApp::OformulaExchange { position: i });
    }
    for j in 1..n {
        cands.push(RuleApp::OverExchange { position: j });
        cands.push(RuleApp::OverDuplication { overgroup: j });
    }
    for (u, g) in next.under.iter().enumerate() {
        for &o in g {
            cands.push(RuleApp::Weakening { undergroup: u + 1, oformula: o });
        }
    }
    for (j, g) in next.over.iter().enumerate() {
        if g.len() > INFER_LIMIT {
            continue;
        }
        // each member goes left, right, or both
        let total = 3usize.pow(g.len() as u32);
        for code in 0..total {
            let (mut l, mut r, mut c) = (Vec::new(), Vec::new(), code);
            for &a in g {
                match c % 3 {
                    0 => l.push(a),
                    1 => r.push(a),
                    _ => {
                        l.push(a);
                        r.push(a);
                    }
                }
                c /= 3;
            }
            if !l.is_empty() && !r.is_empty() {
                cands.push(RuleApp::Merging {
                    overgroup: j + 1,
                    left: l,
                    right: r,
                });
            }
        }
    }
    for a in 1..=k {
        match next.formula(a) {
            Formula::Or(..) => cands.push(RuleApp::DisjIntro { oformula: a }),
            Formula::And(..) => cands.push(RuleApp::ConjIntro { oformula: a }),
            Formula::Brec(_) => {
                for p in 1..=n + 1 {
                    cands.push(RuleApp::RecIntro { oformula: a, position: p });
                }
            }
            Formula::Cobrec(_) => {
                cands.push(RuleApp::Contraction { oformula: a });
                let free: Vec<usize> = (1..=n).filter(|&j| !next.over[j - 1].contains(&a)).collect();
                if free.len() <= INFER_LIMIT {
                    for s in subsets(&free) {
                        cands.push(RuleApp::CorecIntro { oformula: a, overgroups: s });
                    }
                }
            }
            Formula::Pos(_) | Formula::Neg(_) => {}
        }
    }
    cands
        .into_iter()
        .filter(|app| premise_of(next, app).as_ref() == Ok(prev))
        .collect()
}
