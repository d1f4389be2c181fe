//! Scenario files: a family, a sample plan, chains, and a list of checks or
//! refuters with the verdict each one is expected to reach.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, DecreasingChain, ParamExpr};
use crate::error::{Error, Result};
use crate::harness::{self, CheckReport, SamplePlan};
use crate::numeric::{rational_str, Mode, Rational, Scalar};
use crate::refute::{self, RefutationResult, SorgenfreyBudget, Verdict};
use crate::space::SpaceId;
use crate::stratification::{stratification_to_approximation, FamilyLabel, QGrid, Stratification, UserTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Named(FamilyLabel),
    Table { user_table: UserTable },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    Fail,
    Refuted,
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    #[serde(rename = "condition_1")]
    Condition1 { expect: Expect },
    #[serde(rename = "condition_2")]
    Condition2 { expect: Expect },
    #[serde(rename = "condition_3")]
    Condition3 { expect: Expect },
    ConditionsAbc { expect: Expect },
    #[serde(rename = "condition_4")]
    Condition4 { chain: usize, expect: Expect },
    ConditionD { chain: usize, expect: Expect },
    /// `pass` means the (4) and (d) verdicts agree.
    #[serde(rename = "bridge_4_iff_d")]
    Bridge4IffD { chain: usize, expect: Expect },
    HausdorffWitness { expect: Expect },
    SeparateRegularClosed { expect: Expect },
    RefuteGExtend { n: u64, expect: Expect },
    RefuteNiemytzkiStrat { a: Scalar, n: u64, m: u64, k: u64, expect: Expect },
    RefuteDoublearrowD {
        x_k: ParamExpr,
        #[serde(with = "rational_str")]
        p: Rational,
        #[serde(with = "rational_str")]
        q: Rational,
        k: u64,
        expect: Expect,
    },
    RefuteSorgenfreyA {
        candidate: String,
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(default)]
        budget: SorgenfreyBudget,
        expect: Expect,
    },
}

impl CheckSpec {
    pub fn expect(&self) -> Expect {
        match self {
            CheckSpec::Condition1 { expect }
            | CheckSpec::Condition2 { expect }
            | CheckSpec::Condition3 { expect }
            | CheckSpec::ConditionsAbc { expect }
            | CheckSpec::Condition4 { expect, .. }
            | CheckSpec::ConditionD { expect, .. }
            | CheckSpec::Bridge4IffD { expect, .. }
            | CheckSpec::HausdorffWitness { expect }
            | CheckSpec::SeparateRegularClosed { expect }
            | CheckSpec::RefuteGExtend { expect, .. }
            | CheckSpec::RefuteNiemytzkiStrat { expect, .. }
            | CheckSpec::RefuteDoublearrowD { expect, .. }
            | CheckSpec::RefuteSorgenfreyA { expect, .. } => *expect,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub space: SpaceId,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub plan: SamplePlan,
    #[serde(default)]
    pub chains: Vec<ChainSpec>,
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub outputs: Option<Outputs>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// Structural checks beyond the serde schema: chain indices, spaces.
    pub fn validate(&self) -> Result<()> {
        for c in &self.chains {
            if c.space != self.space {
                return Err(Error::Schema(format!("chain in {} inside a {} scenario", c.space, self.space)));
            }
        }
        for check in &self.checks {
            if let CheckSpec::Condition4 { chain, .. } | CheckSpec::ConditionD { chain, .. } | CheckSpec::Bridge4IffD { chain, .. } =
                check
            {
                if *chain >= self.chains.len() {
                    return Err(Error::Schema(format!("chain index {chain} out of range")));
                }
            }
        }
        if let Some(FamilySpec::Named(label)) = &self.family {
            if label.space() != Some(self.space) {
                return Err(Error::Schema(format!("family {label} does not live on {}", self.space)));
            }
        }
        Ok(())
    }

    pub fn stratification(&self) -> Result<Stratification> {
        let s = match &self.family {
            None => return Err(Error::Schema("this check needs a family".into())),
            Some(FamilySpec::Named(label)) => Stratification::named(*label)?,
            Some(FamilySpec::Table { user_table }) => Stratification::from_table(user_table.clone())?,
        };
        Ok(s.with_mode(self.mode.unwrap_or(Mode::Exact)))
    }

    fn chain(&self, i: usize) -> Result<DecreasingChain> {
        let spec = self.chains.get(i).ok_or_else(|| Error::Schema(format!("chain index {i} out of range")))?;
        DecreasingChain::try_from(spec.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Check(CheckReport),
    Refutation(Box<RefutationResult>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemResult {
    pub id: String,
    pub expected: Expect,
    pub observed: Expect,
    pub matched: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub space: SpaceId,
    pub seed: u64,
    pub all_matched: bool,
    pub items: Vec<ItemResult>,
}

impl ScenarioReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} on {} (seed {})", self.name, self.space, self.seed);
        for item in &self.items {
            let mark = if item.matched { "ok" } else { "UNEXPECTED" };
            let _ = writeln!(out, "[{mark}] {} expected {:?}, observed {:?}", item.id, item.expected, item.observed);
            let body = match &item.outcome {
                Outcome::Check(r) => r.to_text(),
                Outcome::Refutation(r) => r.to_text(),
            };
            for line in body.lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        let _ = writeln!(out, "{}", if self.all_matched { "all verdicts as expected" } else { "some verdicts unexpected" });
        out
    }
}

fn check_outcome(r: CheckReport) -> (Expect, Outcome) {
    (if r.passed { Expect::Pass } else { Expect::Fail }, Outcome::Check(r))
}

fn refutation_outcome(r: RefutationResult) -> Result<(Expect, Outcome)> {
    if r.is_refuted() && !refute::reverify(&r)? {
        return Err(Error::Precondition(format!("{} bundle failed to re-verify", r.claim)));
    }
    let e = match r.verdict {
        Verdict::Refuted => Expect::Refuted,
        Verdict::NotFoundAtBudget => Expect::NotFound,
    };
    Ok((e, Outcome::Refutation(Box::new(r))))
}

fn run_check(sc: &Scenario, check: &CheckSpec) -> Result<(String, Expect, Outcome)> {
    let plan = &sc.plan;
    let id = serde_json::to_value(check)
        .ok()
        .and_then(|v| v.get("check").and_then(|c| c.as_str()).map(String::from))
        .unwrap_or_default();
    let (observed, outcome) = match check {
        CheckSpec::Condition1 { .. } => check_outcome(harness::check_condition_1(&sc.stratification()?, plan)?),
        CheckSpec::Condition2 { .. } => check_outcome(harness::check_condition_2(&sc.stratification()?, plan)?),
        CheckSpec::Condition3 { .. } => {
            let s = sc.stratification()?;
            let cases = harness::certified_cases(&s, plan)?;
            check_outcome(harness::check_condition_3(&s, &cases, plan)?)
        }
        CheckSpec::ConditionsAbc { .. } => {
            let a = stratification_to_approximation(&sc.stratification()?, QGrid::new(plan.grid_depth));
            check_outcome(harness::check_conditions_abc(&a, plan)?)
        }
        CheckSpec::Condition4 { chain, .. } => {
            let ch = sc.chain(*chain)?;
            let pts = harness::chain_points(&ch, plan)?;
            check_outcome(harness::check_condition_4(&sc.stratification()?, &ch, &pts, plan)?)
        }
        CheckSpec::ConditionD { chain, .. } => {
            let ch = sc.chain(*chain)?;
            let pts = harness::chain_points(&ch, plan)?;
            let a = stratification_to_approximation(&sc.stratification()?, QGrid::new(plan.grid_depth));
            check_outcome(harness::check_condition_d(&a, &ch, &pts, plan)?)
        }
        CheckSpec::Bridge4IffD { chain, .. } => {
            check_outcome(harness::bridge_4_iff_d(&sc.stratification()?, &sc.chain(*chain)?, plan)?)
        }
        CheckSpec::HausdorffWitness { .. } => check_outcome(harness::check_hausdorff(&sc.stratification()?, plan)?),
        CheckSpec::SeparateRegularClosed { .. } => {
            check_outcome(harness::check_separation(&sc.stratification()?, plan)?)
        }
        CheckSpec::RefuteGExtend { n, .. } => refutation_outcome(refute::g_family_not_extendable(*n)?)?,
        CheckSpec::RefuteNiemytzkiStrat { a, n, m, k, .. } => {
            refutation_outcome(refute::niemytzki_not_stratifiable(a.clone(), *n, *m, *k)?)?
        }
        CheckSpec::RefuteDoublearrowD { x_k, p, q, k, .. } => {
            refutation_outcome(refute::doublearrow_not_kappa(x_k, p, q, *k)?)?
        }
        CheckSpec::RefuteSorgenfreyA { candidate, a, budget, .. } => {
            let c = refute::candidate_by_name(candidate)
                .ok_or_else(|| Error::Schema(format!("unknown candidate {candidate}")))?;
            let r = refute::refute_sorgenfrey_a(c.as_ref(), a, *budget)?;
            if let Some(b) = &r.bundle {
                if !refute::reverify_sorgenfrey(c.as_ref(), b, *budget)? {
                    return Err(Error::Precondition("sorgenfrey bundle failed to re-verify".into()));
                }
            }
            let e = if r.is_refuted() { Expect::Refuted } else { Expect::NotFound };
            (e, Outcome::Refutation(Box::new(r)))
        }
    };
    Ok((id, observed, outcome))
}

/// Runs every check in order. Errors are internal failures (a bundle that
/// does not re-verify, an invalid certificate), not unexpected verdicts.
pub fn run_scenario(sc: &Scenario) -> Result<ScenarioReport> {
    sc.validate()?;
    let mut items = Vec::new();
    for (i, check) in sc.checks.iter().enumerate() {
        let (id, observed, outcome) = run_check(sc, check)?;
        let expected = check.expect();
        items.push(ItemResult { id: format!("{i:02}-{id}"), expected, observed, matched: expected == observed, outcome });
    }
    Ok(ScenarioReport {
        name: sc.name.clone(),
        space: sc.space,
        seed: sc.plan.seed,
        all_matched: items.iter().all(|i| i.matched),
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"name":"x","space":"sorgenfrey","checks":[],"colour":1}"#;
        assert!(matches!(Scenario::from_json(text), Err(Error::Schema(_))));
        assert!(matches!(Scenario::from_json("{not json"), Err(Error::Schema(_))));
    }

    #[test]
    fn chain_index_is_checked() {
        let text = r#"{"name":"x","space":"double_arrow","family":"DoubleArrowRO",
            "checks":[{"check":"condition_4","chain":0,"expect":"fail"}]}"#;
        assert!(Scenario::from_json(text).is_err());
    }

    #[test]
    fn refuter_only_scenario_runs() {
        let text = r#"{"name":"g","space":"niemytzki",
            "checks":[{"check":"refute_g_extend","n":1,"expect":"refuted"},
                      {"check":"refute_sorgenfrey_a","candidate":"clopen_only","a":"0","expect":"not_found"}]}"#;
        let sc = Scenario::from_json(text).unwrap();
        let r = run_scenario(&sc).unwrap();
        assert!(r.all_matched, "{}", r.to_text());
    }
}
