//! Executable versions of the negative results. Each refuter builds a
//! concrete witness bundle and checks it; failing to find one yields
//! `NotFoundAtBudget`, never a positive claim.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basic::BasicOpenSet;
use crate::chain::{decreasing_chain_interior, DecreasingChain, ParamBasic, ParamExpr};
use crate::error::{Error, Result};
use crate::numeric::{int, rat, Rational, Scalar, EPS};
use crate::roset::{RegularOpenSet, SetSpec};
use crate::space::{lex_less, verify_convergence, ConvergenceCertificate, Point};
use crate::stratification::{doublearrow_f, g_family, niemytzki_basic_f};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Refuted,
    NotFoundAtBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

/// One evaluated link `lhs REL rhs` of a witness chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub lhs: Scalar,
    pub relation: Relation,
    pub rhs: Scalar,
}

impl Inequality {
    pub fn new(label: impl Into<String>, lhs: impl Into<Scalar>, relation: Relation, rhs: impl Into<Scalar>) -> Self {
        Inequality { label: label.into(), lhs: lhs.into(), relation, rhs: rhs.into() }
    }

    /// Exact when both sides are exact; float sides get `EPS` in the
    /// direction that makes the claim harder to satisfy.
    pub fn holds(&self) -> bool {
        let slack = if matches!((&self.lhs, &self.rhs), (Scalar::Exact(_), Scalar::Exact(_))) { 0.0 } else { EPS };
        let strict = self.lhs.cmp_with_slack(&self.rhs, 0.0);
        let loose = self.lhs.cmp_with_slack(&self.rhs, slack);
        match self.relation {
            Relation::Lt => strict == Ordering::Less && loose == Ordering::Less,
            Relation::Gt => strict == Ordering::Greater && loose == Ordering::Greater,
            Relation::Le => strict != Ordering::Greater,
            Relation::Ge => strict != Ordering::Less,
            Relation::Eq => loose == Ordering::Equal,
            Relation::Ne => loose != Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Point>,
    pub params: BTreeMap<String, Scalar>,
    pub sets: Vec<SetSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ConvergenceCertificate>,
    pub chain: Vec<Inequality>,
    /// Which step of the argument the evaluated chain contradicts.
    pub breaks: String,
}

impl Bundle {
    fn new(breaks: impl Into<String>) -> Bundle {
        Bundle { witness: None, params: BTreeMap::new(), sets: Vec::new(), certificate: None, chain: Vec::new(), breaks: breaks.into() }
    }

    fn param(&mut self, name: &str, v: impl Into<Scalar>) {
        self.params.insert(name.into(), v.into());
    }

    fn push(&mut self, i: Inequality) {
        self.chain.push(i);
    }

    fn set(&mut self, b: &BasicOpenSet) -> Result<()> {
        self.sets.push(RegularOpenSet::basic(b.clone())?.to_spec());
        Ok(())
    }

    /// Every link holds and the certificate, if any, certifies convergence.
    pub fn links_hold(&self) -> Result<bool> {
        if !self.chain.iter().all(Inequality::holds) {
            return Ok(false);
        }
        match &self.certificate {
            Some(c) => verify_convergence(c),
            None => Ok(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationResult {
    pub claim: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bundle: Option<Bundle>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl RefutationResult {
    fn refuted(claim: &str, bundle: Bundle) -> Result<RefutationResult> {
        if !bundle.links_hold()? {
            return Err(Error::Precondition(format!("{claim}: assembled bundle does not verify")));
        }
        Ok(RefutationResult { claim: claim.into(), verdict: Verdict::Refuted, bundle: Some(bundle), notes: Vec::new() })
    }

    fn not_found(claim: &str, note: impl Into<String>) -> RefutationResult {
        RefutationResult { claim: claim.into(), verdict: Verdict::NotFoundAtBudget, bundle: None, notes: vec![note.into()] }
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:?} {}\n", self.verdict, self.claim);
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        if let Some(b) = &self.bundle {
            if let Some(w) = &b.witness {
                out.push_str(&format!("  witness {w}; breaks {}\n", b.breaks));
            } else {
                out.push_str(&format!("  breaks {}\n", b.breaks));
            }
            for i in &b.chain {
                let rel = serde_json::to_value(i.relation).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                out.push_str(&format!("  {}: {} {rel} {}\n", i.label, i.lhs, i.rhs));
            }
        }
        out
    }
}

fn param_scalar(b: &Bundle, name: &str) -> Result<Scalar> {
    b.params.get(name).cloned().ok_or_else(|| Error::MalformedCertificate(format!("bundle lacks parameter {name}")))
}

fn param_exact(b: &Bundle, name: &str) -> Result<Rational> {
    param_scalar(b, name)?
        .as_exact()
        .cloned()
        .ok_or_else(|| Error::MalformedCertificate(format!("parameter {name} is not exact")))
}

fn param_u64(b: &Bundle, name: &str) -> Result<u64> {
    let q = param_exact(b, name)?;
    u64::try_from(q.to_integer()).map_err(|_| Error::MalformedCertificate(format!("parameter {name} out of range")))
}

pub const G_EXTEND: &str = "g_family_not_extendable";
pub const NIEMYTZKI_STRAT: &str = "niemytzki_not_stratifiable";
pub const DOUBLEARROW_KAPPA: &str = "doublearrow_not_kappa";
pub const SORGENFREY_A: &str = "refute_sorgenfrey_A";

/// Number of further scales in the 𝒢 bundle's convergence certificate.
const G_TAIL: u64 = 32;

/// The 𝒢 family on tangent discs cannot be extended to `V = {x > 0}` while
/// keeping conditions (1)-(3): points `(1/(3n), 1/(6n))` lie in
/// `B*(1/(3n), 1/(3n)) ⊆ V`, where `g > 1/2`, and converge to `(0,0)`,
/// where `g_V` must vanish.
pub fn g_family_not_extendable(n: u64) -> Result<RefutationResult> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let mut b = Bundle::new("continuity of g_V at (0,0), where condition (1) forces g_V = 0");
    b.param("n", int(n as i64));
    let mut seq = Vec::new();
    let mut wit = Vec::new();
    for (step, k) in (n..n + G_TAIL).enumerate() {
        let k_r = int(k as i64);
        let r = rat(1, 3) / &k_r;
        let p = Point::niemytzki_exact(r.clone(), r.clone() / int(2))?;
        let outer = BasicOpenSet::tangent_disc(int(0).into(), (int(1) / &k_r).into())?;
        let small = BasicOpenSet::tangent_disc(r.clone().into(), r.clone().into())?;
        let (x, y) = (r.clone(), &r / int(2));
        if step == 0 {
            b.witness = Some(p.clone());
            b.set(&outer)?;
            b.set(&small)?;
            let d2 = &x * &x + (&y - int(1) / &k_r) * (&y - int(1) / &k_r);
            b.push(Inequality::new("|p - (0, 1/n)|^2 < (1/n)^2", d2, Relation::Lt, int(1) / (&k_r * &k_r)));
            let d2s = (&y - &r) * (&y - &r);
            b.push(Inequality::new("|p - (1/(3n), 1/(3n))|^2 < (1/(3n))^2", d2s, Relation::Lt, &r * &r));
            b.push(Inequality::new("y < r (lower half of the small disc)", y.clone(), Relation::Lt, r.clone()));
            b.push(Inequality::new("axis point 1/(3n) > 0", r.clone(), Relation::Gt, int(0)));
            let cx = r.clone();
            b.push(Inequality::new("cx - r >= 0 (small disc inside x > 0)", &cx - &r, Relation::Ge, int(0)));
        }
        if !outer.contains(&p)? || !small.contains(&p)? {
            return Ok(RefutationResult::not_found(G_EXTEND, format!("membership fails at scale {k}")));
        }
        let g = g_family(&small, &p)?;
        b.push(Inequality::new(format!("g_B*(1/(3k),1/(3k))(p_k) > 1/2 at k = {k}"), g, Relation::Gt, rat(1, 2)));
        seq.push(p);
        wit.push(outer);
    }
    b.certificate = Some(ConvergenceCertificate::new(seq, Point::niemytzki_exact(int(0), int(0))?, wit));
    RefutationResult::refuted(G_EXTEND, b)
}

/// Replays a 𝒢 bundle from its parameter.
pub fn reverify_g(b: &Bundle) -> Result<bool> {
    let fresh = g_family_not_extendable(param_u64(b, "n")?)?;
    Ok(b.links_hold()? && fresh.bundle.as_ref() == Some(b))
}

/// No stratification of the Niemytzki plane covers `L \ {(a,0)}`:
/// `(x_k, c_k) = (a + 1/(2mk), 1/(2mk))` lies in `B*(a, 1/k)` and in
/// `B*(x_k, 1) ⊆ L \ {(a,0)}` with `f = 1 > 1/n` there, so condition (2)
/// keeps `f_{L∖{(a,0)}}` above `1/n` along a sequence converging to `(a,0)`,
/// where condition (1) forces zero.
pub fn niemytzki_not_stratifiable(a: Scalar, n: u64, m: u64, k_depth: u64) -> Result<RefutationResult> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("n and m must be positive".into()));
    }
    if k_depth == 0 {
        return Ok(RefutationResult::not_found(NIEMYTZKI_STRAT, "no sequence terms at depth 0"));
    }
    let level = rat(1, n as i64);
    let mut b = Bundle::new("continuity of f_{L \\ {(a,0)}} at (a,0), where condition (1) forces 0");
    b.param("a", a.clone());
    b.param("n", int(n as i64));
    b.param("m", int(m as i64));
    b.param("K", int(k_depth as i64));
    let zero = Scalar::zero(a.mode());
    let lift = |q: Rational| -> Scalar {
        match &a {
            Scalar::Exact(_) => Scalar::Exact(q),
            Scalar::Float(_) => Scalar::Float(crate::numeric::to_f64(&q)),
        }
    };
    let limit = Point::niemytzki(a.clone(), zero.clone())?;
    b.witness = Some(limit.clone());
    let mut seq = Vec::new();
    let mut wit = Vec::new();
    for k in 1..=k_depth {
        let c = rat(1, 2 * (m * k) as i64);
        let x = a.try_add(&lift(c.clone()))?;
        let p = Point::niemytzki(x.clone(), lift(c.clone()))?;
        let near = BasicOpenSet::tangent_disc(a.clone(), lift(rat(1, k as i64)))?;
        let cover = BasicOpenSet::tangent_disc(x.clone(), lift(int(1)))?;
        if !near.contains(&p)? {
            return Ok(RefutationResult::not_found(NIEMYTZKI_STRAT, format!("(x_{k}, c_{k}) left B*(a, 1/{k})")));
        }
        let value = niemytzki_basic_f(&cover, &p)?;
        b.push(Inequality::new(format!("c_{k} < 1/m"), c.clone(), Relation::Lt, rat(1, m as i64)));
        b.push(Inequality::new(format!("x_{k} != a (so B*(x_{k},1) misses (a,0))"), x.clone(), Relation::Ne, a.clone()));
        b.push(Inequality::new(format!("f_B*(x_{k},1)(x_{k}, c_{k}) > 1/n"), value, Relation::Gt, level.clone()));
        if k == 1 {
            b.set(&cover)?;
        }
        seq.push(p);
        wit.push(near);
    }
    b.certificate = Some(ConvergenceCertificate::new(seq, limit, wit));
    if !b.links_hold()? {
        return Ok(RefutationResult::not_found(NIEMYTZKI_STRAT, format!("base values do not exceed 1/{n}")));
    }
    RefutationResult::refuted(NIEMYTZKI_STRAT, b)
}

pub fn reverify_niemytzki(b: &Bundle) -> Result<bool> {
    let fresh = niemytzki_not_stratifiable(
        param_scalar(b, "a")?,
        param_u64(b, "n")?,
        param_u64(b, "m")?,
        param_u64(b, "K")?,
    )?;
    Ok(b.links_hold()? && fresh.bundle.as_ref() == Some(b))
}

/// The double arrow stratification violates condition (d): with
/// `U^k = [(x_k,1),(1/5,0)]` and `x_k ↑ x`, the point `(x,0)` lies in
/// every `cl(U^k_q)` but not in `W_p` for `W = int ⋂ U^k`.
pub fn doublearrow_not_kappa(x_seq: &ParamExpr, p: &Rational, q: &Rational, k_depth: u64) -> Result<RefutationResult> {
    let x = x_seq.limit();
    let fifth = rat(1, 5);
    if x < int(0) || x > rat(1, 10) {
        return Err(Error::Precondition(format!("limit {x} outside [0, 1/10]")));
    }
    if p >= q || *p <= int(0) {
        return Err(Error::Precondition("need 0 < p < q".into()));
    }
    if *q >= &fifth - &x {
        return Err(Error::Precondition(format!("q = {q} must be below 1/5 - x = {}", &fifth - &x)));
    }
    for k in 1..=k_depth.max(1) {
        let xk = x_seq.at(k);
        if xk < int(0) || xk > x {
            return Err(Error::Precondition(format!("x_{k} = {xk} outside [0, x]")));
        }
    }
    let chain = DecreasingChain::single(
        ParamBasic::ClopenInterval {
            a: x_seq.clone(),
            b: ParamExpr::constant(fifth.clone()),
            include_left_extreme: false,
            include_right_extreme: false,
        },
        k_depth.max(1),
    )?;
    let w = decreasing_chain_interior(&chain)?;
    let witness = Point::double_arrow(x.clone(), 0)?;
    let mut b = Bundle::new("condition (d): (x,0) lies in every cl(U^k_q) but not in W_p");
    b.witness = Some(witness.clone());
    b.param("p", p.clone());
    b.param("q", q.clone());
    b.param("K", int(k_depth as i64));
    b.params.insert("x_base".into(), Scalar::Exact(x.clone()));
    if let ParamExpr::Harmonic { coef, shift, .. } = x_seq {
        b.param("x_coef", coef.clone());
        b.param("x_shift", int(*shift as i64));
    }
    b.sets.push(w.to_spec());
    let top = Point::double_arrow(fifth.clone(), 0)?;
    for k in 1..=k_depth {
        let uk = chain.at(k)?;
        let left = Point::double_arrow(x_seq.at(k), 1)?;
        // U^k is clopen and U^k_q = U^k while q < length(U^k), so membership
        // in the closure is membership in U^k with f above q.
        if !lex_less(&left, &witness)? || !uk.member(&witness)? {
            return Ok(RefutationResult::not_found(DOUBLEARROW_KAPPA, format!("(x,0) is not in U^{k}")));
        }
        let fk = doublearrow_f(&uk, &witness)?;
        b.push(Inequality::new(format!("f_U^{k}((x,0)) = 1/5 - x_{k} > q"), fk, Relation::Gt, q.clone()));
        b.push(Inequality::new(format!("(x_{k},1) < (x,0): x_{k} < x"), x_seq.at(k), Relation::Lt, x.clone()));
    }
    if !lex_less(&witness, &top)? {
        return Ok(RefutationResult::not_found(DOUBLEARROW_KAPPA, "(x,0) is not below (1/5,0)"));
    }
    let fw = doublearrow_f(&w, &witness)?;
    b.push(Inequality::new("f_W((x,0)) <= p, so (x,0) is not in W_p", fw, Relation::Le, p.clone()));
    if k_depth == 0 || !b.links_hold()? {
        return Ok(RefutationResult::not_found(DOUBLEARROW_KAPPA, "no violation at this depth"));
    }
    RefutationResult::refuted(DOUBLEARROW_KAPPA, b)
}

pub fn reverify_doublearrow(b: &Bundle) -> Result<bool> {
    let base = param_exact(b, "x_base")?;
    let seq = match (b.params.get("x_coef"), b.params.get("x_shift")) {
        (Some(c), Some(_)) => ParamExpr::harmonic(
            base,
            c.as_exact().cloned().ok_or_else(|| Error::MalformedCertificate("x_coef".into()))?,
            param_u64(b, "x_shift")?,
        ),
        _ => ParamExpr::constant(base),
    };
    let fresh = doublearrow_not_kappa(&seq, &param_exact(b, "p")?, &param_exact(b, "q")?, param_u64(b, "K")?)?;
    Ok(b.links_hold()? && fresh.bundle.as_ref() == Some(b))
}

/// A candidate stratification of the Sorgenfrey line over
/// `{[x,x+1)} ∪ {(x,y)}` with rational endpoints.
pub trait SorgenfreyACandidate: Sync {
    fn name(&self) -> String;
    /// `f_{[x,x+1)}(t)`.
    fn half_open(&self, x: &Rational, t: &Rational) -> Scalar;
    /// `f_{(x,y)}(t)`, or `None` when the family has no open intervals.
    fn open(&self, x: &Rational, y: &Rational, t: &Rational) -> Option<Scalar>;
}

/// Characteristic functions of every member.
pub struct CharacteristicCandidate;
/// Distance to the complement in the Euclidean sense, capped at one.
pub struct EuclideanCandidate;
/// Open intervals get `1/(1 + length)`, so bigger sets get smaller values.
pub struct ShrinkingCandidate;
/// Characteristic functions of `[x,x+1)` only; no open intervals at all.
pub struct ClopenOnlyCandidate;

fn indicator(inside: bool) -> Scalar {
    Scalar::Exact(if inside { int(1) } else { int(0) })
}

fn in_half_open(x: &Rational, t: &Rational) -> bool {
    x <= t && *t < x + int(1)
}

fn in_open(x: &Rational, y: &Rational, t: &Rational) -> bool {
    x < t && t < y
}

impl SorgenfreyACandidate for CharacteristicCandidate {
    fn name(&self) -> String {
        "characteristic".into()
    }
    fn half_open(&self, x: &Rational, t: &Rational) -> Scalar {
        indicator(in_half_open(x, t))
    }
    fn open(&self, x: &Rational, y: &Rational, t: &Rational) -> Option<Scalar> {
        Some(indicator(in_open(x, y, t)))
    }
}

impl SorgenfreyACandidate for EuclideanCandidate {
    fn name(&self) -> String {
        "euclidean".into()
    }
    fn half_open(&self, x: &Rational, t: &Rational) -> Scalar {
        Scalar::Exact(if in_half_open(x, t) { x + int(1) - t } else { int(0) })
    }
    fn open(&self, x: &Rational, y: &Rational, t: &Rational) -> Option<Scalar> {
        Some(Scalar::Exact(if in_open(x, y, t) { (t - x).min(y - t).min(int(1)) } else { int(0) }))
    }
}

impl SorgenfreyACandidate for ShrinkingCandidate {
    fn name(&self) -> String {
        "shrinking".into()
    }
    fn half_open(&self, x: &Rational, t: &Rational) -> Scalar {
        indicator(in_half_open(x, t))
    }
    fn open(&self, x: &Rational, y: &Rational, t: &Rational) -> Option<Scalar> {
        Some(Scalar::Exact(if in_open(x, y, t) { int(1) / (int(1) + (y - x)) } else { int(0) }))
    }
}

impl SorgenfreyACandidate for ClopenOnlyCandidate {
    fn name(&self) -> String {
        "clopen_only".into()
    }
    fn half_open(&self, x: &Rational, t: &Rational) -> Scalar {
        indicator(in_half_open(x, t))
    }
    fn open(&self, _: &Rational, _: &Rational, _: &Rational) -> Option<Scalar> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SorgenfreyBudget {
    /// Grid points per unit interval: `2^grid_bits`.
    pub grid_bits: u32,
    pub max_n: u32,
    /// Candidate subintervals have length `2^-level` for `level` up to this.
    pub max_level: u32,
    pub sequence_len: u32,
}

impl Default for SorgenfreyBudget {
    fn default() -> Self {
        SorgenfreyBudget { grid_bits: 12, max_n: 64, max_level: 8, sequence_len: 40 }
    }
}

fn positive(v: &Scalar) -> bool {
    v.cmp_with_slack(&Scalar::Exact(int(0)), 0.0).is_gt()
}

/// Checks condition (1) on both kinds and condition (2) among open
/// intervals, on a coarse grid of `(a, a+2)`.
fn sorgenfrey_prechecks(c: &dyn SorgenfreyACandidate, a: &Rational) -> Option<Bundle> {
    let offsets: Vec<Rational> = (-2..=18).map(|j| rat(j, 16)).collect();
    for i in 0..16 {
        let x = a + rat(i, 8);
        for d in &offsets {
            let t = &x + d;
            let v = c.half_open(&x, &t);
            if in_half_open(&x, &t) != positive(&v) {
                let mut b = Bundle::new("condition (1) for [x, x+1)");
                b.witness = Some(Point::sorgenfrey(t.clone()));
                b.param("x", x.clone());
                let rel = if in_half_open(&x, &t) { Relation::Le } else { Relation::Gt };
                b.push(Inequality::new("f_[x,x+1)(t) against membership", v, rel, Scalar::Exact(int(0))));
                return Some(b);
            }
            let y = &x + rat(3, 4);
            if let Some(v) = c.open(&x, &y, &t) {
                if in_open(&x, &y, &t) != positive(&v) {
                    let mut b = Bundle::new("condition (1) for (x, y)");
                    b.witness = Some(Point::sorgenfrey(t.clone()));
                    b.param("x", x.clone());
                    b.param("y", y.clone());
                    let rel = if in_open(&x, &y, &t) { Relation::Le } else { Relation::Gt };
                    b.push(Inequality::new("f_(x,y)(t) against membership", v, rel, Scalar::Exact(int(0))));
                    return Some(b);
                }
            }
        }
    }
    for i in 0..16 {
        let x = a + rat(i, 8);
        let (inner_x, inner_y, outer_y) = (&x + rat(1, 8), &x + rat(1, 2), &x + rat(3, 2));
        for j in 1..16 {
            let t = &x + rat(j, 16);
            let (Some(inner), Some(outer)) = (c.open(&inner_x, &inner_y, &t), c.open(&x, &outer_y, &t)) else {
                continue;
            };
            if inner.cmp_with_slack(&outer, EPS).is_gt() {
                let mut b = Bundle::new("condition (2) for nested open intervals");
                b.witness = Some(Point::sorgenfrey(t.clone()));
                for (k, v) in [("x_inner", &inner_x), ("y_inner", &inner_y), ("x_outer", &x), ("y_outer", &outer_y)] {
                    b.param(k, v.clone());
                }
                b.push(Inequality::new("f_inner(t) > f_outer(t) for inner ⊆ outer", inner, Relation::Gt, outer));
                return Some(b);
            }
        }
    }
    None
}

/// Searches for the contradiction in the proof that the Sorgenfrey line has
/// no stratification over `{[x,x+1)} ∪ {(x,y)}`.
///
/// `R_n` is the set of grid points `x ∈ (a, a+2)` with
/// `f_{[x,x+1)}(x) > 1/n`. The search looks for the smallest `n` and a dyadic
/// subinterval of `(a, a+1)` on which `R_n` holds at every grid point, takes
/// its left endpoint `x` and `x_k = x + L 2^-k` inside it (checked on demand
/// past the grid), and evaluates
/// `f_{(x,a+2)}(x_k) >= f_{[x_k,x_k+1)}(x_k) > 1/n` against
/// `f_{(x,a+2)}(x) = 0`. The bundle names whichever link fails: condition (1)
/// at `x`, condition (2) at some `k`, or otherwise continuity at `x`.
pub fn refute_sorgenfrey_a(
    c: &dyn SorgenfreyACandidate,
    a: &Rational,
    budget: SorgenfreyBudget,
) -> Result<RefutationResult> {
    let claim = SORGENFREY_A;
    if let Some(mut b) = sorgenfrey_prechecks(c, a) {
        b.param("a", a.clone());
        return RefutationResult::refuted(claim, b);
    }
    let per_unit = 1i64 << budget.grid_bits.min(30);
    let grid = |j: i64| a + rat(j, per_unit);
    let h: Vec<Scalar> = (1..2 * per_unit).map(|j| c.half_open(&grid(j), &grid(j))).collect();
    for n in 1..=budget.max_n as i64 {
        let level_n = rat(1, n);
        let in_r: Vec<bool> = h.iter().map(|v| v.cmp_with_slack(&Scalar::Exact(level_n.clone()), 0.0).is_gt()).collect();
        for level in 1..=budget.max_level.min(budget.grid_bits) {
            let width = per_unit >> level;
            // Dyadic subintervals [lo, lo + width) of (a, a+1), in grid steps.
            let mut start = width;
            while start + width <= per_unit {
                let dense = (start..start + width).all(|j| in_r[(j - 1) as usize]);
                if dense {
                    if let Some(result) = sorgenfrey_chain(c, a, n, start, width, per_unit, budget)? {
                        return Ok(result);
                    }
                }
                start += width;
            }
        }
    }
    Ok(RefutationResult::not_found(claim, format!("no grid-dense R_n for n <= {} at 2^{} points per unit", budget.max_n, budget.grid_bits)))
}

fn sorgenfrey_chain(
    c: &dyn SorgenfreyACandidate,
    a: &Rational,
    n: i64,
    start: i64,
    width: i64,
    per_unit: i64,
    budget: SorgenfreyBudget,
) -> Result<Option<RefutationResult>> {
    let level_n = rat(1, n);
    let x = a + rat(start, per_unit);
    let len = rat(width, per_unit);
    let right = a + int(2);
    let Some(at_x) = c.open(&x, &right, &x) else {
        return Ok(Some(RefutationResult::not_found(
            SORGENFREY_A,
            format!("R_{n} is grid-dense near {x}, but the candidate has no open intervals to close the argument"),
        )));
    };
    let mut seq = Vec::new();
    let mut wit = Vec::new();
    let mut links = Vec::new();
    let mut broken: Option<u32> = None;
    for k in 1..=budget.sequence_len {
        let step = &len / Rational::from_integer(num_bigint::BigInt::from(1u8) << k);
        let xk = &x + &step;
        let hk = c.half_open(&xk, &xk);
        if !hk.cmp_with_slack(&Scalar::Exact(level_n.clone()), 0.0).is_gt() {
            // Not dense after all once refined past the grid.
            return Ok(None);
        }
        let ek = c.open(&x, &right, &xk).unwrap_or(Scalar::Exact(int(0)));
        if broken.is_none() && ek.cmp_with_slack(&hk, EPS).is_lt() {
            broken = Some(k);
        }
        links.push((k, xk.clone(), hk, ek));
        seq.push(Point::sorgenfrey(xk));
        wit.push(BasicOpenSet::half_open(x.clone(), &x + &step * int(2))?);
    }
    let mut b = Bundle::new("");
    b.witness = Some(Point::sorgenfrey(x.clone()));
    b.param("a", a.clone());
    b.param("n", int(n));
    b.param("x", x.clone());
    b.param("interval_length", len.clone());
    b.sets.push(RegularOpenSet::basic(BasicOpenSet::half_open(x.clone(), &x + &len)?)?.to_spec());
    if positive(&at_x) {
        b.breaks = "condition (1): x is not in (x, a+2) but f_(x,a+2)(x) > 0".into();
        b.push(Inequality::new("f_(x,a+2)(x) > 0", at_x, Relation::Gt, int(0)));
        return RefutationResult::refuted(SORGENFREY_A, b).map(Some);
    }
    if let Some(k) = broken {
        let (_, xk, hk, ek) = links[(k - 1) as usize].clone();
        b.breaks = format!("condition (2): [x_k, x_k+1) ⊆ (x, a+2) but f_(x,a+2)(x_k) < f_[x_k,x_k+1)(x_k) at k = {k}");
        b.param("x_k", xk.clone());
        b.push(Inequality::new("x < x_k", x.clone(), Relation::Lt, xk.clone()));
        b.push(Inequality::new("x_k + 1 <= a + 2", &xk + int(1), Relation::Le, right.clone()));
        b.push(Inequality::new("f_[x_k,x_k+1)(x_k) > 1/n", hk.clone(), Relation::Gt, level_n.clone()));
        b.push(Inequality::new("f_(x,a+2)(x_k) < f_[x_k,x_k+1)(x_k)", ek, Relation::Lt, hk));
        return RefutationResult::refuted(SORGENFREY_A, b).map(Some);
    }
    b.breaks = "condition (3): f_(x,a+2) stays above 1/n along x_k -> x but vanishes at x".into();
    b.push(Inequality::new("f_(x,a+2)(x) = 0", at_x, Relation::Eq, int(0)));
    for (k, _, hk, ek) in links {
        b.push(Inequality::new(format!("f_(x,a+2)(x_{k}) >= f_[x_{k},x_{k}+1)(x_{k})"), ek, Relation::Ge, hk.clone()));
        b.push(Inequality::new(format!("f_[x_{k},x_{k}+1)(x_{k}) > 1/n"), hk, Relation::Gt, level_n.clone()));
    }
    b.certificate = Some(ConvergenceCertificate::new(seq, Point::sorgenfrey(x.clone()), wit));
    RefutationResult::refuted(SORGENFREY_A, b).map(Some)
}

/// Re-runs the search for `c` with the bundle's `a` and checks that the same
/// bundle comes back and that every link holds.
pub fn reverify_sorgenfrey(c: &dyn SorgenfreyACandidate, b: &Bundle, budget: SorgenfreyBudget) -> Result<bool> {
    let fresh = refute_sorgenfrey_a(c, &param_exact(b, "a")?, budget)?;
    Ok(b.links_hold()? && fresh.bundle.as_ref() == Some(b))
}

/// Dispatches on the claim id.
pub fn reverify(result: &RefutationResult) -> Result<bool> {
    let Some(b) = &result.bundle else {
        return Ok(result.verdict == Verdict::NotFoundAtBudget);
    };
    match result.claim.as_str() {
        G_EXTEND => reverify_g(b),
        NIEMYTZKI_STRAT => reverify_niemytzki(b),
        DOUBLEARROW_KAPPA => reverify_doublearrow(b),
        _ => b.links_hold(),
    }
}

pub fn candidate_by_name(name: &str) -> Option<Box<dyn SorgenfreyACandidate>> {
    match name {
        "characteristic" => Some(Box::new(CharacteristicCandidate)),
        "euclidean" => Some(Box::new(EuclideanCandidate)),
        "shrinking" => Some(Box::new(ShrinkingCandidate)),
        "clopen_only" => Some(Box::new(ClopenOnlyCandidate)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_bundle_for_n_one() {
        let r = g_family_not_extendable(1).unwrap();
        assert!(r.is_refuted());
        let b = r.bundle.as_ref().unwrap();
        // Oracle: (1/3)^2 + (1/6 - 1)^2 = 1/9 + 25/36 = 29/36.
        assert_eq!(b.chain[0].lhs, Scalar::Exact(rat(29, 36)));
        assert_eq!(b.chain[0].rhs, Scalar::Exact(int(1)));
        let g = b.chain.iter().find(|i| i.label.contains("k = 1")).unwrap();
        assert_eq!(g.lhs, Scalar::Exact(rat(2, 3)));
        assert!(reverify(&r).unwrap());
    }

    #[test]
    fn g_bundle_for_n_ten() {
        let r = g_family_not_extendable(10).unwrap();
        let b = r.bundle.as_ref().unwrap();
        let g = b.chain.iter().find(|i| i.label.contains("k = 10")).unwrap();
        assert_eq!(g.lhs, Scalar::Exact(rat(1, 2) + rat(1, 60)));
        assert!(reverify(&r).unwrap());
    }

    #[test]
    fn niemytzki_bundle() {
        let r = niemytzki_not_stratifiable(Scalar::Exact(int(0)), 2, 10, 50).unwrap();
        assert!(r.is_refuted());
        let b = r.bundle.as_ref().unwrap();
        assert!(b.chain.iter().filter(|i| i.label.starts_with("f_B*")).all(|i| i.lhs == Scalar::Exact(int(1))));
        assert!(reverify(&r).unwrap());
        let f = niemytzki_not_stratifiable(Scalar::Float(std::f64::consts::SQRT_2), 2, 10, 50).unwrap();
        assert!(f.is_refuted());
        assert!(reverify(&f).unwrap());
        assert_eq!(niemytzki_not_stratifiable(Scalar::Exact(int(0)), 2, 10, 0).unwrap().verdict, Verdict::NotFoundAtBudget);
        assert_eq!(niemytzki_not_stratifiable(Scalar::Exact(int(0)), 1, 10, 5).unwrap().verdict, Verdict::NotFoundAtBudget);
    }

    fn tenth_sequence() -> ParamExpr {
        ParamExpr::harmonic(rat(1, 10), rat(-1, 10), 1)
    }

    #[test]
    fn double_arrow_bundle() {
        let r = doublearrow_not_kappa(&tenth_sequence(), &rat(1, 20), &rat(1, 15), 40).unwrap();
        assert!(r.is_refuted());
        assert_eq!(r.bundle.as_ref().unwrap().witness, Some(Point::double_arrow(rat(1, 10), 0).unwrap()));
        assert!(reverify(&r).unwrap());
        let deeper = doublearrow_not_kappa(&tenth_sequence(), &rat(1, 20), &rat(1, 15), 200).unwrap();
        assert_eq!(deeper.bundle.unwrap().witness, r.bundle.unwrap().witness);
        assert!(doublearrow_not_kappa(&tenth_sequence(), &rat(1, 20), &rat(1, 10), 40).is_err());
        let flat = doublearrow_not_kappa(&ParamExpr::constant(rat(1, 10)), &rat(1, 20), &rat(1, 15), 40).unwrap();
        assert_eq!(flat.verdict, Verdict::NotFoundAtBudget);
    }

    #[test]
    fn sorgenfrey_candidates() {
        let budget = SorgenfreyBudget::default();
        let a = int(0);
        let r = refute_sorgenfrey_a(&CharacteristicCandidate, &a, budget).unwrap();
        assert!(r.is_refuted());
        assert!(r.bundle.as_ref().unwrap().breaks.starts_with("condition (3)"));
        assert!(reverify_sorgenfrey(&CharacteristicCandidate, r.bundle.as_ref().unwrap(), budget).unwrap());
        let r = refute_sorgenfrey_a(&EuclideanCandidate, &a, budget).unwrap();
        assert!(r.is_refuted());
        assert!(r.bundle.as_ref().unwrap().breaks.starts_with("condition (2)"));
        let r = refute_sorgenfrey_a(&ShrinkingCandidate, &a, budget).unwrap();
        assert!(r.is_refuted());
        assert!(r.bundle.as_ref().unwrap().breaks.contains("nested open"));
        let r = refute_sorgenfrey_a(&ClopenOnlyCandidate, &a, budget).unwrap();
        assert_eq!(r.verdict, Verdict::NotFoundAtBudget);
    }

    #[test]
    fn euclidean_chain_by_hand() {
        // a = 0, x = 1/2, x_k = 1/2 + 1/k: f_[x_k,x_k+1)(x_k) = 1 while
        // f_(1/2, 2)(x_k) = min(1/k, 3/2 - 1/k) = 1/k, below 1 for k >= 2.
        let c = EuclideanCandidate;
        for k in 2..20 {
            let xk = rat(1, 2) + rat(1, k);
            assert_eq!(c.half_open(&xk, &xk), Scalar::Exact(int(1)));
            assert_eq!(c.open(&rat(1, 2), &int(2), &xk), Some(Scalar::Exact(rat(1, k))));
        }
    }
}
