//! Sampled checkers for conditions (1)-(4), (a)-(d), the (4)/(d) bridge and
//! the two separation constructions.
//!
//! Samples are drawn sequentially from a seeded generator and evaluated in
//! parallel with an order-preserving collect, so reports depend only on the
//! plan.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{decreasing_chain_interior, DecreasingChain};
use crate::error::{Error, Result};
use crate::numeric::{int, to_f64, Rational, Scalar};
use crate::roset::{RegularOpenSet, SetSpec};
use crate::sampler::{SetPolicy, Sampler};
use crate::space::{verify_convergence, ConvergenceCertificate, Point, SpaceId};
use crate::stratification::{Approximation, FamilyLabel, QGrid, Stratification};

pub const TOL_CONT: f64 = 1e-3;
pub const TOL_INF: f64 = 1e-3;
/// Slack for float comparisons of values that should be ordered.
pub const SLACK: f64 = 1e-9;
const MAX_WITNESSES: usize = 8;
const POINTS_PER_SET: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplePlan {
    pub seed: u64,
    pub n_points: usize,
    pub n_set_pairs: usize,
    pub n_sequences: usize,
    /// Depth `m` of the dyadic grid for approximations.
    pub grid_depth: u32,
    /// Depth `N` of evaluated chain indices (far indices are added on top).
    pub chain_depth: u64,
    pub pair_grid_depth: u32,
    pub tail_start: u64,
    pub sequence_len: u64,
    pub chain_points: usize,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            seed: 0,
            n_points: 10_000,
            n_set_pairs: 200,
            n_sequences: 100,
            grid_depth: 10,
            chain_depth: 64,
            pair_grid_depth: 10,
            tail_start: 100,
            sequence_len: 200,
            chain_points: 48,
        }
    }
}

impl SamplePlan {
    pub fn with_seed(seed: u64) -> SamplePlan {
        SamplePlan { seed, ..SamplePlan::default() }
    }

    fn sub_seed(&self, salt: &str) -> u64 {
        salt.bytes().fold(self.seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<Point>,
    pub sets: Vec<SetSpec>,
    pub values: BTreeMap<String, Scalar>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ConvergenceCertificate>,
}

impl Witness {
    fn new(point: Option<&Point>, sets: &[&RegularOpenSet], detail: impl Into<String>) -> Witness {
        Witness {
            point: point.cloned(),
            sets: sets.iter().map(|s| s.to_spec()).collect(),
            values: BTreeMap::new(),
            detail: detail.into(),
            certificate: None,
        }
    }

    fn value(mut self, name: &str, v: Scalar) -> Witness {
        self.values.insert(name.into(), v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub family: String,
    pub space: SpaceId,
    pub samples: usize,
    pub violations: usize,
    pub passed: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    fn from_outcomes(check: &str, s: &Stratification, outcomes: Vec<Option<Witness>>) -> CheckReport {
        let samples = outcomes.len();
        let failures: Vec<Witness> = outcomes.into_iter().flatten().collect();
        CheckReport {
            check: check.into(),
            family: s.name().into(),
            space: s.space(),
            samples,
            violations: failures.len(),
            passed: failures.is_empty(),
            tolerances: BTreeMap::new(),
            witnesses: failures.into_iter().take(MAX_WITNESSES).collect(),
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    fn tolerance(mut self, name: &str, v: f64) -> CheckReport {
        self.tolerances.insert(name.into(), v);
        self
    }

    /// One summary line, then one line per witness and per part.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = write!(
            out,
            "{verdict} {} [{} on {}] samples={} violations={}",
            self.check, self.family, self.space, self.samples, self.violations
        );
        for (k, v) in &self.tolerances {
            let _ = write!(out, " {k}={v:e}");
        }
        out.push('\n');
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        for w in &self.witnesses {
            let point = w.point.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
            let values: Vec<String> = w.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "  witness at {point}: {} ({})", w.detail, values.join(", "));
        }
        for part in &self.parts {
            for line in part.to_text().lines() {
                let _ = writeln!(out, "  | {line}");
            }
        }
        out
    }
}

fn policy_for(s: &Stratification) -> SetPolicy {
    match s.label() {
        FamilyLabel::GFamily => SetPolicy::TangentOnly,
        _ => SetPolicy::WithUnions,
    }
}

fn positive(v: &Scalar) -> bool {
    match v {
        Scalar::Exact(q) => *q > int(0),
        Scalar::Float(f) => *f > 0.0,
    }
}

fn in_unit_interval(v: &Scalar) -> bool {
    match v {
        Scalar::Exact(q) => *q >= int(0) && *q <= int(1),
        Scalar::Float(f) => (-SLACK..=1.0 + SLACK).contains(f),
    }
}

fn abs_diff(a: &Scalar, b: &Scalar) -> f64 {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => to_f64(&(x - y)).abs(),
        _ => (a.to_f64() - b.to_f64()).abs(),
    }
}

/// Draws `(U, p)` samples for `s`, a fresh set every few points.
fn set_point_samples(s: &Stratification, plan: &SamplePlan, salt: &str, n: usize) -> Vec<(RegularOpenSet, Point)> {
    let mut sampler = Sampler::new(plan.sub_seed(salt), s.space(), policy_for(s));
    let table_sets = s.table().map(|t| t.sets());
    let mut out = Vec::with_capacity(n);
    let mut current = None;
    for i in 0..n {
        if i % POINTS_PER_SET == 0 || current.is_none() {
            current = Some(match &table_sets {
                Some(sets) => sets[sampler.rng().random_range(0..sets.len())].clone(),
                None => sampler.set(),
            });
        }
        let u = current.clone().expect("set drawn");
        let p = sampler.point_for(&u);
        out.push((u, p));
    }
    out
}

fn nested_samples(s: &Stratification, plan: &SamplePlan, salt: &str, n: usize) -> Vec<(RegularOpenSet, RegularOpenSet, Point)> {
    let mut sampler = Sampler::new(plan.sub_seed(salt), s.space(), policy_for(s));
    let mut out = Vec::with_capacity(n);
    let mut pair = None;
    for i in 0..n {
        if i % POINTS_PER_SET == 0 || pair.is_none() {
            pair = Some(sampler.nested_pair());
        }
        let (u, v) = pair.clone().expect("pair drawn");
        let p = if i % 2 == 0 { sampler.point_for(&u) } else { sampler.point_for(&v) };
        out.push((u, v, p));
    }
    out
}

fn run<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Option<Witness>> + Sync + Send) -> Result<Vec<Option<Witness>>> {
    items.par_iter().map(f).collect()
}

/// Condition (1): `U = f_U^{-1}((0,1])`, plus values in `[0,1]`.
pub fn check_condition_1(s: &Stratification, plan: &SamplePlan) -> Result<CheckReport> {
    let samples = set_point_samples(s, plan, "condition-1", plan.n_points);
    check_condition_1_on(s, &samples)
}

pub fn check_condition_1_on(s: &Stratification, samples: &[(RegularOpenSet, Point)]) -> Result<CheckReport> {
    let outcomes = run(samples, |(u, p)| {
        let member = u.member(p)?;
        let f = s.eval(u, p)?;
        let w = if member != positive(&f) {
            let why = if member { "p in U but f_U(p) = 0" } else { "p outside U but f_U(p) > 0" };
            Some(Witness::new(Some(p), &[u], why).value("f_U", f))
        } else if !in_unit_interval(&f) {
            Some(Witness::new(Some(p), &[u], "f_U(p) outside [0,1]").value("f_U", f))
        } else {
            None
        };
        Ok(w)
    })?;
    Ok(CheckReport::from_outcomes("condition_1", s, outcomes))
}

/// Condition (2): `U ⊆ V` implies `f_U <= f_V` pointwise.
pub fn check_condition_2(s: &Stratification, plan: &SamplePlan) -> Result<CheckReport> {
    let samples = nested_samples(s, plan, "condition-2", plan.n_points);
    check_condition_2_on(s, &samples)
}

pub fn check_condition_2_on(
    s: &Stratification,
    samples: &[(RegularOpenSet, RegularOpenSet, Point)],
) -> Result<CheckReport> {
    let outcomes = run(samples, |(u, v, p)| {
        let (fu, fv) = (s.eval(u, p)?, s.eval(v, p)?);
        Ok(fu.cmp_with_slack(&fv, SLACK).is_gt().then(|| {
            Witness::new(Some(p), &[u, v], "f_U(p) > f_V(p) although U is inside V").value("f_U", fu).value("f_V", fv)
        }))
    })?;
    Ok(CheckReport::from_outcomes("condition_2", s, outcomes).tolerance("slack", SLACK))
}

/// A set paired with a certified sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedCase {
    pub set: RegularOpenSet,
    pub certificate: ConvergenceCertificate,
}

pub fn certified_cases(s: &Stratification, plan: &SamplePlan) -> Result<Vec<CertifiedCase>> {
    let mut sampler = Sampler::new(plan.sub_seed("condition-3"), s.space(), policy_for(s));
    let table_sets = s.table().map(|t| t.sets());
    let mut out = Vec::with_capacity(plan.n_sequences);
    for _ in 0..plan.n_sequences {
        let set = match &table_sets {
            Some(sets) => sets[sampler.rng().random_range(0..sets.len())].clone(),
            None => sampler.set(),
        };
        let certificate = sampler.certified_sequence(&set, plan.sequence_len)?;
        out.push(CertifiedCase { set, certificate });
    }
    Ok(out)
}

/// Condition (3) along certified sequences: the tail deviation from the
/// limit value, over indices `n >= tail_start` (1-based), is at most
/// [`TOL_CONT`].
pub fn check_condition_3(s: &Stratification, cases: &[CertifiedCase], plan: &SamplePlan) -> Result<CheckReport> {
    for case in cases {
        if !verify_convergence(&case.certificate)? {
            return Err(Error::MalformedCertificate(format!(
                "certificate towards {} does not certify convergence",
                case.certificate.limit
            )));
        }
    }
    let start = plan.tail_start.max(1) as usize;
    let outcomes = run(cases, |case| {
        let cert = &case.certificate;
        let at_limit = s.eval(&case.set, &cert.limit)?;
        let mut worst: Option<(usize, Scalar, f64)> = None;
        for (i, p) in cert.sequence.iter().enumerate().skip(start - 1) {
            let v = s.eval(&case.set, p)?;
            let d = abs_diff(&v, &at_limit);
            if worst.as_ref().is_none_or(|w| d > w.2) {
                worst = Some((i + 1, v, d));
            }
        }
        let Some((index, value, dev)) = worst else {
            return Ok(Some(Witness::new(Some(&cert.limit), &[&case.set], "sequence shorter than the tail start")));
        };
        Ok((dev > TOL_CONT).then(|| {
            let mut w = Witness::new(Some(&cert.limit), &[&case.set], format!("tail deviation {dev:e} at index {index}"))
                .value("f_limit", at_limit)
                .value("f_tail", value)
                .value("index", Scalar::Exact(int(index as i64)));
            w.certificate = Some(cert.clone());
            w
        }))
    })?;
    Ok(CheckReport::from_outcomes("condition_3", s, outcomes)
        .tolerance("tol_cont", TOL_CONT)
        .tolerance("tail_start", plan.tail_start as f64))
}

/// Points worth testing against a chain: critical points of the first
/// member and of the interior of the intersection, plus biased samples.
pub fn chain_points(chain: &DecreasingChain, plan: &SamplePlan) -> Result<Vec<Point>> {
    let mut sampler = Sampler::new(plan.sub_seed("chain-points"), chain.space(), SetPolicy::BaseOnly);
    let w = decreasing_chain_interior(chain)?;
    let first = chain.at(1)?;
    let mut pts = sampler.critical_points(&w);
    pts.extend(sampler.critical_points(&first));
    for comp in chain.components() {
        if let Some(limit) = comp.limit() {
            pts.extend(sampler.critical_points(&RegularOpenSet::basic(limit)?));
        }
    }
    for i in 0..plan.chain_points {
        let base = if i % 2 == 0 { &w } else { &first };
        pts.push(sampler.point_for(base));
    }
    let mut seen = Vec::new();
    pts.retain(|p| {
        if seen.contains(p) {
            false
        } else {
            seen.push(p.clone());
            true
        }
    });
    Ok(pts)
}

fn chain_members(chain: &DecreasingChain) -> Result<Vec<(u64, RegularOpenSet)>> {
    chain.indices().into_iter().map(|n| Ok((n, chain.at(n)?))).collect()
}

/// Condition (4): `f_W(p) = inf_n f_{U^n}(p)` with `W = int ⋂ U^n`, within
/// [`TOL_INF`]. The infimum runs over the evaluated indices, far indices
/// included.
pub fn check_condition_4(
    s: &Stratification,
    chain: &DecreasingChain,
    points: &[Point],
    _plan: &SamplePlan,
) -> Result<CheckReport> {
    let w = decreasing_chain_interior(chain)?;
    let members = chain_members(chain)?;
    let outcomes = run(points, |p| {
        let fw = s.eval(&w, p)?;
        let mut inf: Option<(u64, Scalar)> = None;
        for (n, u) in &members {
            let v = s.eval(u, p)?;
            inf = Some(match inf {
                None => (*n, v),
                Some((m, cur)) => {
                    if v.cmp_with_slack(&cur, 0.0).is_lt() {
                        (*n, v)
                    } else {
                        (m, cur)
                    }
                }
            });
        }
        let (at, inf) = inf.expect("chains have members");
        let dev = abs_diff(&fw, &inf);
        Ok((dev > TOL_INF).then(|| {
            Witness::new(Some(p), &[&w], format!("f_W(p) differs from the chain infimum by {dev:e}"))
                .value("f_W", fw)
                .value("inf", inf)
                .value("attained_at", Scalar::Exact(int(at.min(i64::MAX as u64) as i64)))
        }))
    })?;
    Ok(CheckReport::from_outcomes("condition_4", s, outcomes).tolerance("tol_inf", TOL_INF))
}

fn draw_level(rng: &mut impl Rng, grid: QGrid) -> i64 {
    rng.random_range(1..grid.denominator())
}

/// Conditions (a)-(c) of an approximation, each on a third of the samples.
///
/// (a) is tested with levels `2^-k` for `k` up to 60 beyond the grid,
/// since `U_q` grows as `q` falls and `U` is the union over all rationals.
pub fn check_conditions_abc(a: &Approximation, plan: &SamplePlan) -> Result<CheckReport> {
    let s = a.stratification();
    let grid = a.grid();
    let n = (plan.n_points / 10).max(3);
    let mut rng = Sampler::new(plan.sub_seed("abc-levels"), s.space(), SetPolicy::BaseOnly);
    let sa = set_point_samples(s, plan, "condition-a", n / 3);
    let sb: Vec<_> = nested_samples(s, plan, "condition-b", n / 3)
        .into_iter()
        .map(|t| (t, grid.value(draw_level(rng.rng(), grid))))
        .collect();
    let sc: Vec<_> = set_point_samples(s, plan, "condition-c", n / 3)
        .into_iter()
        .map(|t| {
            let (i, j) = (draw_level(rng.rng(), grid), draw_level(rng.rng(), grid));
            let (lo, hi) = if i < j { (i, j) } else if j < i { (j, i) } else { (i.max(2) - 1, i.max(2)) };
            (t, grid.value(lo), grid.value(hi))
        })
        .collect();
    let level_a = grid.value(draw_level(rng.rng(), grid));
    let out_a = run(&sa, |(u, p)| {
        let member = u.member(p)?;
        if a.member(u, &level_a, p)? && !member {
            return Ok(Some(Witness::new(Some(p), &[u], "(a): p in U_q but not in U").value("q", level_a.clone().into())));
        }
        if member {
            let mut q = Rational::from_integer(1.into());
            for _ in 0..60 {
                q /= int(2);
                if a.member(u, &q, p)? {
                    return Ok(None);
                }
            }
            return Ok(Some(Witness::new(Some(p), &[u], "(a): p in U but in no U_q down to 2^-60")));
        }
        Ok(None)
    })?;
    let out_b = run(&sb, |((u, v, p), q)| {
        Ok((a.member(u, q, p)? && !a.member(v, q, p)?).then(|| {
            Witness::new(Some(p), &[u, v], "(b): p in U_q but not in V_q").value("q", q.clone().into())
        }))
    })?;
    let out_c = run(&sc, |((u, p), lo, hi)| {
        Ok((a.closure_member(u, hi, p)? && !a.member(u, lo, p)?).then(|| {
            Witness::new(Some(p), &[u], "(c): p in cl(U_q) but not in U_p")
                .value("p", lo.clone().into())
                .value("q", hi.clone().into())
        }))
    })?;
    let counts = [out_a.iter().flatten().count(), out_b.iter().flatten().count(), out_c.iter().flatten().count()];
    let mut report = CheckReport::from_outcomes("conditions_abc", s, out_a.into_iter().chain(out_b).chain(out_c).collect())
        .tolerance("grid_depth", grid.depth as f64);
    report.notes.push(format!("violations (a)={} (b)={} (c)={}", counts[0], counts[1], counts[2]));
    Ok(report)
}

/// Condition (d): for each sampled `x` and grid levels `p < q`, if `x` is in
/// `cl(U^n_q)` for every evaluated `n` then `x ∈ W_p`.
///
/// The set of levels `q` passing the premise shrinks as `q` grows, so only
/// its largest member and the grid level just below it need testing; a
/// violation at any pair implies one there.
pub fn check_condition_d(
    a: &Approximation,
    chain: &DecreasingChain,
    points: &[Point],
    plan: &SamplePlan,
) -> Result<CheckReport> {
    let s = a.stratification();
    let grid = QGrid::new(plan.pair_grid_depth);
    let w = decreasing_chain_interior(chain)?;
    let mut members = chain_members(chain)?;
    members.reverse();
    let outcomes = run(points, |x| {
        let premise = |k: i64| -> Result<bool> {
            let q = grid.value(k);
            for (_, u) in &members {
                if !a.closure_member(u, &q, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if !premise(1)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (1i64, grid.denominator());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if premise(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo < 2 {
            return Ok(None);
        }
        let (p, q) = (grid.value(lo - 1), grid.value(lo));
        Ok((!a.member(&w, &p, x)?).then(|| {
            Witness::new(Some(x), &[&w], "(d): x in every cl(U^n_q) but not in W_p")
                .value("p", p.into())
                .value("q", q.into())
                .value("f_W", s.eval(&w, x).unwrap_or(Scalar::Float(f64::NAN)))
        }))
    })?;
    Ok(CheckReport::from_outcomes("condition_d", s, outcomes).tolerance("pair_grid_depth", grid.depth as f64))
}

/// Runs (4) on `s` and (d) on its approximation over the same points; the
/// report passes when the verdicts agree.
pub fn bridge_4_iff_d(s: &Stratification, chain: &DecreasingChain, plan: &SamplePlan) -> Result<CheckReport> {
    let points = chain_points(chain, plan)?;
    let a = crate::stratification::stratification_to_approximation(s, QGrid::new(plan.grid_depth));
    let r4 = check_condition_4(s, chain, &points, plan)?;
    let rd = check_condition_d(&a, chain, &points, plan)?;
    let agree = r4.passed == rd.passed;
    Ok(CheckReport {
        check: "bridge_4_iff_d".into(),
        family: s.name().into(),
        space: s.space(),
        samples: points.len(),
        violations: usize::from(!agree),
        passed: agree,
        tolerances: BTreeMap::new(),
        witnesses: Vec::new(),
        notes: vec![format!(
            "condition_4 {}, condition_d {}",
            if r4.passed { "passes" } else { "fails" },
            if rd.passed { "passes" } else { "fails" }
        )],
        parts: vec![r4, rd],
    })
}

/// `t = f_U(x)/2` splits `x` and `y` into `f_U > t` and `f_U < t`.
#[derive(Debug, Clone)]
pub struct HausdorffWitness {
    strat: Stratification,
    set: RegularOpenSet,
    pub threshold: Scalar,
    pub fx: Scalar,
    pub fy: Scalar,
}

impl HausdorffWitness {
    pub fn in_upper(&self, p: &Point) -> Result<bool> {
        Ok(self.strat.eval(&self.set, p)?.cmp_with_slack(&self.threshold, 0.0).is_gt())
    }

    pub fn in_lower(&self, p: &Point) -> Result<bool> {
        Ok(self.strat.eval(&self.set, p)?.cmp_with_slack(&self.threshold, 0.0).is_lt())
    }
}

pub fn hausdorff_witness(s: &Stratification, x: &Point, y: &Point, u: &RegularOpenSet) -> Result<HausdorffWitness> {
    if x == y {
        return Err(Error::Precondition("x and y must differ".into()));
    }
    let fx = s.eval(u, x)?;
    let fy = s.eval(u, y)?;
    if !positive(&fx) {
        return Err(Error::Precondition(format!("f_U(x) = {fx} is not positive")));
    }
    if positive(&fy) {
        return Err(Error::Precondition(format!("f_U(y) = {fy} is not zero")));
    }
    let threshold = match &fx {
        Scalar::Exact(q) => Scalar::Exact(q / int(2)),
        Scalar::Float(f) => Scalar::Float(f / 2.0),
    };
    let w = HausdorffWitness { strat: s.clone(), set: u.clone(), threshold, fx, fy };
    if !w.in_upper(x)? || !w.in_lower(y)? {
        return Err(Error::Precondition("threshold does not separate x and y".into()));
    }
    Ok(w)
}

pub fn check_hausdorff(s: &Stratification, plan: &SamplePlan) -> Result<CheckReport> {
    let mut sampler = Sampler::new(plan.sub_seed("hausdorff"), s.space(), policy_for(s));
    let mut configs = Vec::new();
    while configs.len() < plan.n_set_pairs {
        let u = sampler.set();
        let x = sampler.point_for(&u);
        let y = sampler.uniform_point();
        if !u.member(&x)? || u.closure_member(&y)? {
            continue;
        }
        let probes: Vec<Point> = (0..16).map(|i| if i % 2 == 0 { sampler.point_for(&u) } else { sampler.uniform_point() }).collect();
        configs.push((u, x, y, probes));
    }
    let outcomes = run(&configs, |(u, x, y, probes)| {
        let w = hausdorff_witness(s, x, y, u)?;
        for p in probes.iter().chain([x, y]) {
            if w.in_upper(p)? && w.in_lower(p)? {
                return Ok(Some(Witness::new(Some(p), &[u], "point in both preimages").value("t", w.threshold.clone())));
            }
        }
        Ok(None)
    })?;
    Ok(CheckReport::from_outcomes("hausdorff_witness", s, outcomes))
}

/// `h = f / (f + g)`; `F = f^{-1}(0)` lies in `h < 1/2` and `G = g^{-1}(0)`
/// in `h > 1/2`.
pub struct Separation<F, G> {
    f: F,
    g: G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationStats {
    pub f_zeros: usize,
    pub g_zeros: usize,
    pub misplaced: usize,
    pub overlaps: usize,
}

impl<F, G> Separation<F, G>
where
    F: Fn(&Point) -> Result<Scalar>,
    G: Fn(&Point) -> Result<Scalar>,
{
    pub fn h(&self, p: &Point) -> Result<f64> {
        let (f, g) = ((self.f)(p)?, (self.g)(p)?);
        if !positive(&f) && !positive(&g) {
            return Err(Error::Precondition(format!("f and g both vanish at {p}; the closed sets meet")));
        }
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (&f, &g) {
            return Ok(to_f64(&(a / (a + b))));
        }
        Ok(f.to_f64() / (f.to_f64() + g.to_f64()))
    }

    pub fn near_f(&self, p: &Point) -> Result<bool> {
        Ok(self.h(p)? < 0.5)
    }

    pub fn near_g(&self, p: &Point) -> Result<bool> {
        Ok(self.h(p)? > 0.5)
    }

    pub fn verify(&self, samples: &[Point]) -> Result<SeparationStats> {
        let mut stats = SeparationStats { f_zeros: 0, g_zeros: 0, misplaced: 0, overlaps: 0 };
        for p in samples {
            let (f, g) = ((self.f)(p)?, (self.g)(p)?);
            let (lo, hi) = (self.near_f(p)?, self.near_g(p)?);
            if lo && hi {
                stats.overlaps += 1;
            }
            if !positive(&f) {
                stats.f_zeros += 1;
                stats.misplaced += usize::from(!lo);
            }
            if !positive(&g) {
                stats.g_zeros += 1;
                stats.misplaced += usize::from(!hi);
            }
        }
        Ok(stats)
    }
}

pub fn separate_regular_closed<F, G>(f: F, g: G, samples: &[Point]) -> Result<(Separation<F, G>, SeparationStats)>
where
    F: Fn(&Point) -> Result<Scalar>,
    G: Fn(&Point) -> Result<Scalar>,
{
    let sep = Separation { f, g };
    let stats = sep.verify(samples)?;
    Ok((sep, stats))
}

/// Separation of `F = X \ U` and `G = X \ V` by `f_U / (f_U + f_V)`, with
/// samples drawn from `U ∪ V` so that `F` and `G` are disjoint on them.
pub fn check_separation(s: &Stratification, plan: &SamplePlan) -> Result<CheckReport> {
    let mut sampler = Sampler::new(plan.sub_seed("separation"), s.space(), policy_for(s));
    let mut configs = Vec::new();
    while configs.len() < plan.n_set_pairs {
        let (u, v) = (sampler.set(), sampler.set());
        let mut pts = Vec::new();
        for i in 0..40 {
            let p = if i % 2 == 0 { sampler.point_for(&u) } else { sampler.point_for(&v) };
            if u.member(&p)? || v.member(&p)? {
                pts.push(p);
            }
        }
        configs.push((u, v, pts));
    }
    let outcomes = run(&configs, |(u, v, pts)| {
        let (_, stats) = separate_regular_closed(|p: &Point| s.eval(u, p), |p: &Point| s.eval(v, p), pts)?;
        Ok((stats.misplaced + stats.overlaps > 0).then(|| {
            Witness::new(None, &[u, v], format!("{} misplaced, {} overlapping samples", stats.misplaced, stats.overlaps))
        }))
    })?;
    Ok(CheckReport::from_outcomes("separate_regular_closed", s, outcomes))
}
