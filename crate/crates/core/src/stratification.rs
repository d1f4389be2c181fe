//! Function families `{f_U}` on regular open sets, the q-indexed
//! approximations they induce, and the transforms between the two.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basic::BasicOpenSet;
use crate::error::{Error, Result};
use crate::geometry::{depth_in_union, largest_tangent_radius, Disc, Shape};
use crate::numeric::{int, rat, to_f64, Mode, Rational, Scalar, EPS};
use crate::roset::RegularOpenSet;
use crate::space::{ensure_space, Point, SpaceId};

/// Default number of refinement rounds for [`niemytzki_union_f`].
pub const DEFAULT_UNION_BUDGET: u32 = 6;
/// Default depth of the dyadic grid standing in for `(0,1) ∩ Q`.
pub const DEFAULT_GRID_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyLabel {
    SorgenfreyKappa,
    DoubleArrowRO,
    NiemytzkiKappa,
    GFamily,
    UserSupplied,
}

impl FamilyLabel {
    pub fn space(&self) -> Option<SpaceId> {
        match self {
            FamilyLabel::SorgenfreyKappa => Some(SpaceId::Sorgenfrey),
            FamilyLabel::DoubleArrowRO => Some(SpaceId::DoubleArrow),
            FamilyLabel::NiemytzkiKappa | FamilyLabel::GFamily => Some(SpaceId::Niemytzki),
            FamilyLabel::UserSupplied => None,
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `f_U(x) = sup{q - x : [x,q) ⊆ U ∩ [x,x+1)}` on `U`, zero elsewhere.
pub fn sorgenfrey_f(u: &RegularOpenSet, p: &Point) -> Result<Rational> {
    ensure_space(SpaceId::Sorgenfrey, u.space())?;
    let Point::Sorgenfrey { x } = p else {
        return Err(Error::SpaceMismatch { expected: SpaceId::Sorgenfrey, found: p.space() });
    };
    for c in u.components() {
        if let BasicOpenSet::HalfOpen { a, b } = c {
            if a <= x && x < b {
                let cap = x + Rational::one();
                let right = if *b < cap { b.clone() } else { cap };
                return Ok(right - x);
            }
        }
    }
    Ok(Rational::zero())
}

/// `b - a` on the component `[(a,1),(b,0)]`, one on the extreme points.
pub fn doublearrow_f(u: &RegularOpenSet, p: &Point) -> Result<Rational> {
    ensure_space(SpaceId::DoubleArrow, u.space())?;
    ensure_space(SpaceId::DoubleArrow, p.space())?;
    let Point::DoubleArrow { t, side } = p else { unreachable!() };
    for c in u.components() {
        if let BasicOpenSet::ClopenInterval { a, b, include_left_extreme, include_right_extreme } = c {
            if (*include_left_extreme && t.is_zero() && *side == 0) || (*include_right_extreme && t.is_one() && *side == 1) {
                return Ok(Rational::one());
            }
            if c.contains(p)? {
                return Ok(b - a);
            }
        }
    }
    Ok(Rational::zero())
}

fn eval_shape(
    u: &BasicOpenSet,
    p: &Point,
    exact: impl Fn(&Shape<Rational>, &Rational, &Rational) -> Option<Rational>,
    float: impl Fn(&Shape<f64>, &f64, &f64) -> Option<f64>,
) -> Result<Scalar> {
    ensure_space(SpaceId::Niemytzki, p.space())?;
    if let (Some(shape), Some((x, y))) = (u.shape_exact(), p.niemytzki_rational()) {
        if let Some(v) = exact(&shape, x, y) {
            return Ok(Scalar::Exact(v));
        }
    }
    let shape = u.shape_f64().ok_or(Error::SpaceMismatch { expected: SpaceId::Niemytzki, found: u.space() })?;
    let (x, y) = p.niemytzki_f64().expect("niemytzki point");
    Ok(Scalar::Float(float(&shape, &x, &y).unwrap_or(0.0)))
}

/// The kappa-metric value of a single Niemytzki base set.
pub fn niemytzki_basic_f(u: &BasicOpenSet, p: &Point) -> Result<Scalar> {
    ensure_space(SpaceId::Niemytzki, u.space())?;
    eval_shape(u, p, |s, x, y| s.kappa(x, y), |s, x, y| s.kappa(x, y))
}

/// The `g` family on tangent discs: like the kappa-metric, but scaled by
/// `((r-1)y + r)/r^2` below the center and equal to one at the axis point.
pub fn g_family(u: &BasicOpenSet, p: &Point) -> Result<Scalar> {
    if !matches!(u, BasicOpenSet::TangentDisc { .. }) {
        return Err(Error::FamilyMismatch("the g family is indexed by tangent discs only".into()));
    }
    eval_shape(u, p, |s, x, y| s.g(x, y).flatten(), |s, x, y| s.g(x, y).flatten())
}

/// `f_V(p) = sup{f_U(p) : U base set, U ⊆ V}` for a finite union `V`.
///
/// Single-component sets return the base formula. Otherwise the value is
/// the best of three candidate families through `p`: the components of `V`
/// holding `p`; the largest interior disc centered at `p` (any disc
/// `B(c,r) ⊆ V` gives `f ≤` the depth of `p` in `V`, which the centered disc
/// attains); and, for each axis point of `V`, the largest tangent disc there,
/// found by bisection. `budget` rounds of eight halvings go into each
/// bisection, so the result never decreases as the budget grows.
pub fn niemytzki_union_f(v: &RegularOpenSet, p: &Point, budget: u32) -> Result<Scalar> {
    ensure_space(SpaceId::Niemytzki, v.space())?;
    ensure_space(SpaceId::Niemytzki, p.space())?;
    if let Some(only) = v.single() {
        return niemytzki_basic_f(only, p);
    }
    if !v.member(p)? {
        return Ok(Scalar::zero(p.mode()));
    }
    let (x, y) = p.niemytzki_f64().expect("niemytzki point");
    let discs: Vec<Disc> = v.components().iter().filter_map(BasicOpenSet::euclid_disc).collect();
    let mut best = 0.0f64;
    for c in v.components() {
        if c.contains(p)? {
            best = best.max(niemytzki_basic_f(c, p)?.to_f64());
        }
    }
    if y > 0.0 {
        best = best.max(depth_in_union(&discs, x, y).min(y).min(1.0));
    }
    let mut tangents: Vec<(f64, f64)> = Vec::new();
    for c in v.components() {
        if let BasicOpenSet::TangentDisc { a, r } = c {
            let (a, r) = (a.to_f64(), r.to_f64());
            match tangents.iter_mut().find(|(ta, _)| *ta == a) {
                Some(entry) => entry.1 = entry.1.max(r),
                None => tangents.push((a, r)),
            }
        }
    }
    for (a, r) in tangents {
        let radius = largest_tangent_radius(&discs, a, r, budget);
        let value = Shape::Tangent { a, r: radius }.kappa(&x, &y).unwrap_or(0.0);
        best = best.max(value);
    }
    Ok(Scalar::Float(best))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Exact(bool),
    Sampled(bool),
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Exact(true) | Containment::Sampled(true))
    }
}

pub const BOUNDARY_SAMPLES: usize = 720;

/// Whether a candidate base set lies inside `V`.
///
/// Exact against a single base set. Against a union, the candidate's
/// boundary is sampled at [`BOUNDARY_SAMPLES`] angles just inside the
/// circle, plus a polar interior grid; each sample must sit in some
/// component's open disc.
pub fn disc_in_union(candidate: &BasicOpenSet, v: &RegularOpenSet) -> Result<Containment> {
    ensure_space(SpaceId::Niemytzki, candidate.space())?;
    ensure_space(SpaceId::Niemytzki, v.space())?;
    if let Some(only) = v.single() {
        return Ok(Containment::Exact(candidate.subset_of(only)?));
    }
    if v.is_empty() {
        return Ok(Containment::Exact(false));
    }
    if let BasicOpenSet::TangentDisc { a, .. } = candidate {
        let axis = Point::niemytzki(a.clone(), Scalar::zero(a.mode()))?;
        if !v.member(&axis)? {
            return Ok(Containment::Sampled(false));
        }
    }
    let d = candidate.euclid_disc().expect("niemytzki candidate");
    let discs: Vec<Disc> = v.components().iter().filter_map(BasicOpenSet::euclid_disc).collect();
    let covered = |x: f64, y: f64| discs.iter().any(|o| (x - o.cx).hypot(y - o.cy) < o.r);
    for k in 0..BOUNDARY_SAMPLES {
        let t = std::f64::consts::TAU * k as f64 / BOUNDARY_SAMPLES as f64;
        let rr = d.r * (1.0 - 1e-9);
        if !covered(d.cx + rr * t.cos(), d.cy + rr * t.sin()) {
            return Ok(Containment::Sampled(false));
        }
    }
    for i in 0..8 {
        let rr = d.r * i as f64 / 8.0;
        for k in 0..32 {
            let t = std::f64::consts::TAU * k as f64 / 32.0;
            if !covered(d.cx + rr * t.cos(), d.cy + rr * t.sin()) {
                return Ok(Containment::Sampled(false));
            }
        }
    }
    Ok(Containment::Sampled(true))
}

/// A tabulated family: for each listed set, values at sample points, read
/// back with nearest-sample semantics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserTable {
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub set: RegularOpenSet,
    pub samples: Vec<TableSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSample {
    pub point: Point,
    pub value: Scalar,
}

fn point_gap(a: &Point, b: &Point) -> f64 {
    match (a, b) {
        (Point::Sorgenfrey { x: x1 }, Point::Sorgenfrey { x: x2 }) => to_f64(&(x1 - x2)).abs(),
        (Point::DoubleArrow { t: t1, side: s1 }, Point::DoubleArrow { t: t2, side: s2 }) => {
            to_f64(&(t1 - t2)).abs() + if s1 == s2 { 0.0 } else { 1e-12 }
        }
        _ => {
            let (x1, y1) = a.niemytzki_f64().unwrap_or_default();
            let (x2, y2) = b.niemytzki_f64().unwrap_or_default();
            (x1 - x2).hypot(y1 - y2)
        }
    }
}

impl UserTable {
    pub fn space(&self) -> Option<SpaceId> {
        self.entries.first().map(|e| e.set.space())
    }

    pub fn eval(&self, u: &RegularOpenSet, p: &Point) -> Result<Scalar> {
        let entry = self
            .entries
            .iter()
            .find(|e| &e.set == u)
            .ok_or_else(|| Error::FamilyMismatch(format!("set {:?} is not tabulated", u.to_spec())))?;
        let mut best: Option<(&TableSample, f64)> = None;
        for s in &entry.samples {
            ensure_space(u.space(), s.point.space())?;
            let gap = point_gap(&s.point, p);
            if best.is_none_or(|(_, g)| gap < g) {
                best = Some((s, gap));
            }
        }
        best.map(|(s, _)| s.value.clone())
            .ok_or_else(|| Error::FamilyMismatch("tabulated set has no samples".into()))
    }

    pub fn sets(&self) -> Vec<RegularOpenSet> {
        self.entries.iter().map(|e| e.set.clone()).collect()
    }
}

type EvalFn = dyn Fn(&RegularOpenSet, &Point) -> Result<Scalar> + Send + Sync;

#[derive(Clone)]
enum Source {
    Named,
    Table(Arc<UserTable>),
    Function(Arc<EvalFn>),
}

/// A family `{f_U}` keyed by regular open sets.
#[derive(Clone)]
pub struct Stratification {
    space: SpaceId,
    label: FamilyLabel,
    name: String,
    source: Source,
    union_budget: u32,
    float_points: bool,
}

impl fmt::Debug for Stratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Stratification")
            .field("space", &self.space)
            .field("label", &self.label)
            .field("name", &self.name)
            .finish()
    }
}

impl Stratification {
    pub fn named(label: FamilyLabel) -> Result<Stratification> {
        let space = label
            .space()
            .ok_or_else(|| Error::FamilyMismatch("user-supplied families need a table or evaluator".into()))?;
        Ok(Stratification { space, label, name: label.to_string(), source: Source::Named, union_budget: DEFAULT_UNION_BUDGET, float_points: false })
    }

    pub fn sorgenfrey_kappa() -> Stratification {
        Stratification::named(FamilyLabel::SorgenfreyKappa).expect("named")
    }

    pub fn double_arrow_ro() -> Stratification {
        Stratification::named(FamilyLabel::DoubleArrowRO).expect("named")
    }

    pub fn niemytzki_kappa() -> Stratification {
        Stratification::named(FamilyLabel::NiemytzkiKappa).expect("named")
    }

    pub fn g() -> Stratification {
        Stratification::named(FamilyLabel::GFamily).expect("named")
    }

    pub fn from_table(table: UserTable) -> Result<Stratification> {
        let space = table.space().ok_or_else(|| Error::Schema("user table has no entries".into()))?;
        Ok(Stratification {
            space,
            label: FamilyLabel::UserSupplied,
            name: "user_table".into(),
            source: Source::Table(Arc::new(table)),
            union_budget: DEFAULT_UNION_BUDGET,
            float_points: false,
        })
    }

    pub fn from_fn(
        space: SpaceId,
        name: impl Into<String>,
        f: impl Fn(&RegularOpenSet, &Point) -> Result<Scalar> + Send + Sync + 'static,
    ) -> Stratification {
        Stratification {
            space,
            label: FamilyLabel::UserSupplied,
            name: name.into(),
            source: Source::Function(Arc::new(f)),
            union_budget: DEFAULT_UNION_BUDGET,
            float_points: false,
        }
    }

    /// Characteristic functions `1_U`; continuous exactly when `U` is clopen.
    pub fn characteristic(space: SpaceId) -> Stratification {
        Stratification::from_fn(space, "characteristic", |u, p| {
            Ok(Scalar::Exact(if u.member(p)? { int(1) } else { int(0) }))
        })
    }

    /// In float mode Niemytzki points are converted to floats before
    /// evaluation. The interval spaces are exact by construction and ignore it.
    pub fn with_mode(mut self, mode: Mode) -> Stratification {
        self.float_points = mode == Mode::Float && self.space == SpaceId::Niemytzki;
        self
    }

    pub fn mode(&self) -> Mode {
        if self.float_points { Mode::Float } else { Mode::Exact }
    }

    pub fn with_union_budget(mut self, budget: u32) -> Stratification {
        self.union_budget = budget;
        self
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn label(&self) -> FamilyLabel {
        self.label
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> Option<&UserTable> {
        match &self.source {
            Source::Table(t) => Some(t),
            _ => None,
        }
    }

    /// `f_U(p)`.
    pub fn eval(&self, u: &RegularOpenSet, p: &Point) -> Result<Scalar> {
        ensure_space(self.space, u.space())?;
        ensure_space(self.space, p.space())?;
        if self.float_points && p.mode() == Mode::Exact {
            return self.eval(u, &p.to_float());
        }
        match &self.source {
            Source::Table(t) => t.eval(u, p),
            Source::Function(f) => f(u, p),
            Source::Named => match self.label {
                FamilyLabel::SorgenfreyKappa => sorgenfrey_f(u, p).map(Scalar::Exact),
                FamilyLabel::DoubleArrowRO => doublearrow_f(u, p).map(Scalar::Exact),
                FamilyLabel::NiemytzkiKappa => {
                    if u.is_empty() {
                        Ok(Scalar::zero(p.mode()))
                    } else {
                        niemytzki_union_f(u, p, self.union_budget)
                    }
                }
                FamilyLabel::GFamily => match u.single() {
                    Some(b) => g_family(b, p),
                    None if u.is_empty() => Ok(Scalar::zero(p.mode())),
                    None => Err(Error::FamilyMismatch("the g family has no member for unions".into())),
                },
                FamilyLabel::UserSupplied => unreachable!("user families carry a source"),
            },
        }
    }

    /// Membership in the closure of `U_q = f_U^{-1}((q,1])`.
    ///
    /// Sorgenfrey and double arrow sublevel sets of the named families are
    /// clopen, so the closure adds nothing. Named Niemytzki families are
    /// continuous with no plateaus, so the closure is `{f_U >= q}`. For
    /// user families a basic neighborhood of `p` is probed.
    pub fn sublevel_closure_member(&self, u: &RegularOpenSet, q: &Rational, p: &Point) -> Result<bool> {
        let value = self.eval(u, p)?;
        let above = value.gt_exact_or_float(q);
        match (&self.source, self.label) {
            (Source::Named, FamilyLabel::SorgenfreyKappa | FamilyLabel::DoubleArrowRO) => Ok(above),
            (Source::Named, _) => {
                if above {
                    return Ok(true);
                }
                // `U_q` is empty once q reaches the largest value, which for a
                // base set is its radius (or one, for g at the axis point).
                let qf = to_f64(q);
                let top = match (self.label, u.single()) {
                    (FamilyLabel::GFamily, _) => 1.0,
                    (_, Some(b)) => b.euclid_disc().map_or(0.0, |d| d.r),
                    _ => 1.0,
                };
                Ok(qf > 0.0 && top > qf && value.to_f64() >= qf - EPS)
            }
            _ => {
                if above {
                    return Ok(true);
                }
                for probe in neighborhood_probes(p)? {
                    if self.eval(u, &probe)?.gt_exact_or_float(q) {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// A handful of points inside a small basic neighborhood of `p`.
pub fn neighborhood_probes(p: &Point) -> Result<Vec<Point>> {
    let delta = rat(1, 1 << 20);
    Ok(match p {
        Point::Sorgenfrey { x } => (1..=8).map(|k| Point::sorgenfrey(x + &delta * int(k) / int(8))).collect(),
        Point::DoubleArrow { t, side } => {
            let mut out = Vec::new();
            for k in 1..=8 {
                let step = &delta * int(k) / int(8);
                let tt = if *side == 1 { t + &step } else { t - &step };
                if let Ok(q) = Point::double_arrow(tt, *side) {
                    out.push(q);
                }
            }
            out
        }
        Point::Niemytzki { .. } => {
            let (x, y) = p.niemytzki_f64().expect("niemytzki point");
            let rad = 1e-6;
            let (cx, cy) = if y == 0.0 { (x, rad) } else { (x, y) };
            let rr = if y == 0.0 || y > rad { rad } else { y * 0.5 };
            (0..16)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / 16.0;
                    Point::niemytzki_float(cx + 0.9 * rr * t.cos(), (cy + 0.9 * rr * t.sin()).max(0.0))
                })
                .collect::<Result<Vec<_>>>()?
        }
    })
}

/// The dyadic grid `{k / 2^m : 0 < k < 2^m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QGrid {
    pub depth: u32,
}

impl Default for QGrid {
    fn default() -> Self {
        QGrid { depth: DEFAULT_GRID_DEPTH }
    }
}

impl QGrid {
    pub fn new(depth: u32) -> QGrid {
        QGrid { depth: depth.clamp(1, 40) }
    }

    pub fn denominator(&self) -> i64 {
        1i64 << self.depth
    }

    pub fn resolution(&self) -> Rational {
        rat(1, self.denominator())
    }

    pub fn value(&self, k: i64) -> Rational {
        rat(k, self.denominator())
    }

    pub fn values(&self) -> impl Iterator<Item = Rational> + '_ {
        (1..self.denominator()).map(|k| self.value(k))
    }

    pub fn len(&self) -> usize {
        (self.denominator() - 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The q-indexed family `U ↦ {U_q}` with `U_q = f_U^{-1}((q,1])`.
#[derive(Debug, Clone)]
pub struct Approximation {
    source: Stratification,
    grid: QGrid,
}

impl Approximation {
    pub fn space(&self) -> SpaceId {
        self.source.space()
    }

    pub fn grid(&self) -> QGrid {
        self.grid
    }

    pub fn stratification(&self) -> &Stratification {
        &self.source
    }

    pub fn member(&self, u: &RegularOpenSet, q: &Rational, p: &Point) -> Result<bool> {
        Ok(self.source.eval(u, p)?.gt_exact_or_float(q))
    }

    pub fn closure_member(&self, u: &RegularOpenSet, q: &Rational, p: &Point) -> Result<bool> {
        self.source.sublevel_closure_member(u, q, p)
    }
}

/// Sets `U_q = f_U^{-1}((q,1])`.
pub fn stratification_to_approximation(s: &Stratification, grid: QGrid) -> Approximation {
    Approximation { source: s.clone(), grid }
}

/// Recovers `f_U(p) = sup{q : p ∈ U_q}` on `U` and zero off `U`.
///
/// The supremum is read off the grid by bisection over `q`, which is valid
/// because `U_q` shrinks as `q` grows. It is reported as the first grid
/// value (or one) at which `p` leaves `U_q`, which is the supremum over all
/// rationals whenever that supremum is a grid value, and is within one grid
/// step of it otherwise.
pub fn approximation_to_stratification(a: &Approximation, grid: QGrid) -> Stratification {
    let approx = a.clone();
    Stratification::from_fn(a.space(), format!("roundtrip({})", a.source.name()), move |u, p| {
        if !u.member(p)? {
            return Ok(Scalar::Exact(int(0)));
        }
        let (mut lo, mut hi) = (0i64, grid.denominator());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if approx.member(u, &grid.value(mid), p)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Scalar::Exact(grid.value(hi)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn so(a: Rational, b: Rational) -> RegularOpenSet {
        RegularOpenSet::basic(BasicOpenSet::half_open(a, b).unwrap()).unwrap()
    }

    fn npt(x: Rational, y: Rational) -> Point {
        Point::niemytzki_exact(x, y).unwrap()
    }

    /// Oracle: scan q over a fine grid and keep the largest q with
    /// `[x, q) ⊆ U ∩ [x, x+1)`, checked pointwise on the interval grid.
    fn sorgenfrey_scan(u: &RegularOpenSet, x: &Rational) -> Rational {
        let step = rat(1, 64);
        let mut best = int(0);
        if !u.member(&Point::sorgenfrey(x.clone())).unwrap() {
            return best;
        }
        let mut q = x + &step;
        while q <= x + int(1) {
            let mut t = x.clone();
            let mut inside = true;
            while t < q {
                if !u.member(&Point::sorgenfrey(t.clone())).unwrap() {
                    inside = false;
                    break;
                }
                t += &step / int(4);
            }
            if !inside {
                break;
            }
            best = &q - x;
            q += &step;
        }
        best
    }

    #[test]
    fn sorgenfrey_examples_match_scan() {
        let u = so(int(0), int(1));
        assert_eq!(sorgenfrey_f(&u, &Point::sorgenfrey(int(0))).unwrap(), int(1));
        assert_eq!(sorgenfrey_scan(&u, &int(0)), int(1));
        let v = so(int(0), int(3));
        assert_eq!(sorgenfrey_f(&v, &Point::sorgenfrey(rat(1, 2))).unwrap(), int(1));
        assert_eq!(sorgenfrey_scan(&v, &rat(1, 2)), int(1));
        assert_eq!(sorgenfrey_f(&u, &Point::sorgenfrey(int(1))).unwrap(), int(0));
        for k in 0..16 {
            let x = rat(k, 8);
            assert_eq!(sorgenfrey_f(&u, &Point::sorgenfrey(x.clone())).unwrap(), sorgenfrey_scan(&u, &x));
        }
    }

    #[test]
    fn double_arrow_examples() {
        let u = RegularOpenSet::basic(BasicOpenSet::clopen(rat(1, 4), rat(1, 2)).unwrap()).unwrap();
        assert_eq!(doublearrow_f(&u, &Point::double_arrow(rat(1, 3), 0).unwrap()).unwrap(), rat(1, 4));
        assert_eq!(doublearrow_f(&u, &Point::double_arrow(rat(3, 4), 0).unwrap()).unwrap(), int(0));
        let e = RegularOpenSet::basic(BasicOpenSet::clopen_with_extremes(int(0), rat(1, 2), true, false).unwrap()).unwrap();
        assert_eq!(doublearrow_f(&e, &Point::double_arrow(int(0), 0).unwrap()).unwrap(), int(1));
        assert_eq!(doublearrow_f(&e, &Point::double_arrow(int(0), 1).unwrap()).unwrap(), rat(1, 2));
    }

    #[test]
    fn niemytzki_basic_examples() {
        let t = BasicOpenSet::tangent_disc(int(0).into(), int(1).into()).unwrap();
        assert_eq!(niemytzki_basic_f(&t, &npt(int(0), int(0))).unwrap(), Scalar::Exact(int(1)));
        assert_eq!(niemytzki_basic_f(&t, &npt(int(0), rat(1, 2))).unwrap(), Scalar::Exact(int(1)));
        let d = BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap();
        assert_eq!(niemytzki_basic_f(&d, &npt(int(0), rat(3, 2))).unwrap(), Scalar::Exact(rat(1, 2)));
    }

    #[test]
    fn g_examples() {
        let u = BasicOpenSet::tangent_disc(rat(1, 3).into(), rat(1, 3).into()).unwrap();
        assert_eq!(g_family(&u, &npt(rat(1, 3), rat(1, 6))).unwrap(), Scalar::Exact(rat(2, 3)));
        assert_eq!(g_family(&u, &npt(rat(1, 3), int(0))).unwrap(), Scalar::Exact(int(1)));
        assert_eq!(g_family(&u, &npt(int(2), int(2))).unwrap(), Scalar::Exact(int(0)));
        let f = niemytzki_basic_f(&u, &npt(rat(1, 3), int(0))).unwrap();
        assert_eq!(f, Scalar::Exact(rat(1, 3)));
        let d = BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap();
        assert!(g_family(&d, &npt(int(0), int(2))).is_err());
    }

    #[test]
    fn union_of_stacked_discs_beats_components() {
        let v = crate::roset::validate_regular_open(
            SpaceId::Niemytzki,
            vec![
                BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap(),
                BasicOpenSet::interior_disc(int(0).into(), int(3).into(), int(1).into()).unwrap(),
            ],
        )
        .unwrap();
        let p = npt(int(0), rat(5, 2));
        let value = niemytzki_union_f(&v, &p, DEFAULT_UNION_BUDGET).unwrap().to_f64();
        assert!(value > 0.5);
        // Oracle: grid search over centers on the segment x = 0, largest radius
        // by exact containment in one of the discs or by the lens geometry.
        let mut oracle: f64 = 0.0;
        for k in 0..=2000 {
            let cy = 2.0 + k as f64 / 2000.0;
            // Largest disc centered at (0, cy) inside the union: limited by the
            // lens corners (±sqrt(3)/2, 5/2) and by the far caps.
            let corner = (0.75f64 + (cy - 2.5).powi(2)).sqrt();
            let caps = (4.0 - cy).min(cy - 1.0);
            let r = corner.min(caps).min(1.0);
            oracle = oracle.max(r - (cy - 2.5).abs());
        }
        assert!((value - oracle).abs() < 1e-4, "{value} vs {oracle}");
        let single = RegularOpenSet::basic(BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap()).unwrap();
        let q = npt(rat(1, 3), int(2));
        assert_eq!(niemytzki_union_f(&single, &q, 1).unwrap(), niemytzki_basic_f(single.single().unwrap(), &q).unwrap());
        assert!(niemytzki_union_f(&v, &npt(int(5), int(5)), 6).unwrap().is_zero());
    }

    #[test]
    fn disc_containment_examples() {
        let outer = RegularOpenSet::basic(BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap()).unwrap();
        let inner = BasicOpenSet::interior_disc(int(0).into(), int(2).into(), rat(1, 2).into()).unwrap();
        assert_eq!(disc_in_union(&inner, &outer).unwrap(), Containment::Exact(true));
        assert_eq!(disc_in_union(outer.single().unwrap(), &outer).unwrap(), Containment::Exact(true));
        let up = RegularOpenSet::basic(BasicOpenSet::interior_disc(int(0).into(), int(3).into(), int(1).into()).unwrap()).unwrap();
        assert_eq!(disc_in_union(outer.single().unwrap(), &up).unwrap(), Containment::Exact(false));
    }

    #[test]
    fn sublevel_membership_examples() {
        let s = Stratification::from_fn(SpaceId::Sorgenfrey, "const", |_, _| Ok(Scalar::Float(0.7)));
        let a = stratification_to_approximation(&s, QGrid::default());
        let u = so(int(0), int(1));
        let p = Point::sorgenfrey(int(0));
        assert!(a.member(&u, &rat(1, 2), &p).unwrap());
        assert!(!a.member(&u, &rat(3, 4), &p).unwrap());
        let zero = Stratification::from_fn(SpaceId::Sorgenfrey, "zero", |_, _| Ok(Scalar::Exact(int(0))));
        let az = stratification_to_approximation(&zero, QGrid::default());
        assert!(QGrid::new(4).values().all(|q| !az.member(&u, &q, &p).unwrap()));
    }

    #[test]
    fn roundtrip_recovers_quarter_threshold() {
        // U_q = U for q < 1/4, empty otherwise.
        let s = Stratification::from_fn(SpaceId::Sorgenfrey, "quarter", |u, p| {
            Ok(Scalar::Exact(if u.member(p)? { rat(1, 4) } else { int(0) }))
        });
        let grid = QGrid::new(10);
        let back = approximation_to_stratification(&stratification_to_approximation(&s, grid), grid);
        let u = so(int(0), int(1));
        let v = back.eval(&u, &Point::sorgenfrey(rat(1, 2))).unwrap();
        // Direct scan: the last dyadic q with p in U_q is 1/4 - 2^-10.
        let scan = grid.values().filter(|q| q < &rat(1, 4)).max().unwrap();
        assert_eq!(scan, rat(1, 4) - grid.resolution());
        assert_eq!(v, Scalar::Exact(rat(1, 4)));
        assert_eq!(back.eval(&u, &Point::sorgenfrey(int(2))).unwrap(), Scalar::Exact(int(0)));
    }

    #[test]
    fn user_table_nearest_sample() {
        let u = so(int(0), int(1));
        let table = UserTable {
            entries: vec![TableEntry {
                set: u.clone(),
                samples: vec![
                    TableSample { point: Point::sorgenfrey(int(0)), value: Scalar::Exact(int(1)) },
                    TableSample { point: Point::sorgenfrey(int(1)), value: Scalar::Exact(int(0)) },
                ],
            }],
        };
        let s = Stratification::from_table(table).unwrap();
        assert_eq!(s.eval(&u, &Point::sorgenfrey(rat(1, 4))).unwrap(), Scalar::Exact(int(1)));
        assert_eq!(s.eval(&u, &Point::sorgenfrey(rat(3, 4))).unwrap(), Scalar::Exact(int(0)));
        assert!(s.eval(&so(int(0), int(2)), &Point::sorgenfrey(int(0))).is_err());
    }
}
