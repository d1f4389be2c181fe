//! Seeded generators for sets, points, nested pairs, certified sequences
//! and parametric chains. Everything is drawn with small rational
//! denominators so exact mode stays exact where the formulas allow it.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basic::BasicOpenSet;
use crate::chain::{DecreasingChain, ParamBasic, ParamExpr};
use crate::error::Result;
use crate::numeric::{int, rat, Rational, Scalar};
use crate::roset::{validate_regular_open, RegularOpenSet};
use crate::space::{ConvergenceCertificate, Point, SpaceId};

const DENOMINATORS: [i64; 10] = [1, 2, 3, 4, 5, 6, 8, 10, 12, 16];
/// Directions `(u, v)` with `u^2 + v^2 = 1`, so boundary points stay rational.
const UNIT_DIRECTIONS: [(i64, i64, i64); 8] =
    [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (3, 4, 5), (-4, 3, 5), (5, -12, 13), (-8, -15, 17)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetPolicy {
    BaseOnly,
    WithUnions,
    TangentOnly,
}

pub struct Sampler {
    rng: ChaCha8Rng,
    space: SpaceId,
    policy: SetPolicy,
}

impl Sampler {
    pub fn new(seed: u64, space: SpaceId, policy: SetPolicy) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), space, policy }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational in `[lo, hi]` with a small denominator.
    pub fn rational(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let den = DENOMINATORS[self.rng.random_range(0..DENOMINATORS.len())];
        let lo_n = (lo * int(den)).ceil().to_integer();
        let hi_n = (hi * int(den)).floor().to_integer();
        if lo_n > hi_n {
            return lo.clone();
        }
        let lo_i: i64 = lo_n.try_into().unwrap_or(0);
        let hi_i: i64 = hi_n.try_into().unwrap_or(0);
        rat(self.rng.random_range(lo_i..=hi_i), den)
    }

    fn positive(&mut self, hi: &Rational) -> Rational {
        loop {
            let v = self.rational(&Rational::zero(), hi);
            if v.is_positive() {
                return v;
            }
        }
    }

    pub fn basic(&mut self) -> BasicOpenSet {
        loop {
            let made = match self.space {
                SpaceId::Sorgenfrey => {
                    let a = self.rational(&int(-2), &int(2));
                    let len = self.positive(&int(2));
                    BasicOpenSet::half_open(a.clone(), a + len)
                }
                SpaceId::DoubleArrow => {
                    let a = if self.rng.random_bool(0.2) { int(0) } else { self.rational(&int(0), &rat(15, 16)) };
                    let b = if self.rng.random_bool(0.2) { int(1) } else { self.rational(&a, &int(1)) };
                    let left = a.is_zero() && self.rng.random_bool(0.5);
                    let right = b.is_one() && self.rng.random_bool(0.5);
                    BasicOpenSet::clopen_with_extremes(a, b, left, right)
                }
                SpaceId::Niemytzki => {
                    if self.policy == SetPolicy::TangentOnly || self.rng.random_bool(0.5) {
                        let a = self.rational(&int(-2), &int(2));
                        let r = self.positive(&int(1));
                        BasicOpenSet::tangent_disc(a.into(), r.into())
                    } else {
                        let cx = self.rational(&int(-2), &int(2));
                        let cy = self.positive(&int(3));
                        let top = if cy < int(1) { cy.clone() } else { int(1) };
                        let r = self.positive(&top);
                        BasicOpenSet::interior_disc(cx.into(), cy.into(), r.into())
                    }
                }
            };
            if let Ok(b) = made {
                return b;
            }
        }
    }

    /// A base set near `anchor`, so unions overlap more often than not.
    fn basic_near(&mut self, anchor: &BasicOpenSet) -> BasicOpenSet {
        let shift = self.rational(&rat(-1, 1), &int(1));
        let moved = match (self.basic(), anchor) {
            (BasicOpenSet::HalfOpen { b, a }, BasicOpenSet::HalfOpen { a: x, .. }) => {
                BasicOpenSet::half_open(x + &shift, x + &shift + (b - a))
            }
            (BasicOpenSet::TangentDisc { r, .. }, BasicOpenSet::TangentDisc { a, .. } | BasicOpenSet::InteriorDisc { cx: a, .. }) => {
                BasicOpenSet::tangent_disc(Scalar::Exact(a.as_exact().cloned().unwrap_or_default() + &shift), r)
            }
            (BasicOpenSet::InteriorDisc { cy, r, .. }, BasicOpenSet::TangentDisc { a, .. } | BasicOpenSet::InteriorDisc { cx: a, .. }) => {
                BasicOpenSet::interior_disc(Scalar::Exact(a.as_exact().cloned().unwrap_or_default() + &shift), cy, r)
            }
            (other, _) => Ok(other),
        };
        moved.unwrap_or_else(|_| self.basic())
    }

    pub fn set(&mut self) -> RegularOpenSet {
        loop {
            let k = match self.policy {
                SetPolicy::WithUnions => self.rng.random_range(1..=3usize),
                _ => 1,
            };
            let first = self.basic();
            let mut comps = vec![first.clone()];
            while comps.len() < k {
                let next = self.basic_near(&first);
                comps.push(next);
            }
            if let Ok(s) = validate_regular_open(self.space, comps) {
                return s;
            }
        }
    }

    /// `(U, V)` with `U ⊆ V`: every component is enlarged, and sometimes an
    /// extra component is added.
    pub fn nested_pair(&mut self) -> (RegularOpenSet, RegularOpenSet) {
        loop {
            let u = self.set();
            let mut comps: Vec<BasicOpenSet> = u.components().iter().map(|c| self.enlarge(c)).collect();
            if self.policy == SetPolicy::WithUnions && self.rng.random_bool(0.3) {
                comps.push(self.basic());
            }
            if let Ok(v) = validate_regular_open(self.space, comps) {
                return (u, v);
            }
        }
    }

    fn enlarge(&mut self, c: &BasicOpenSet) -> BasicOpenSet {
        let s = self.rational(&int(0), &rat(1, 2));
        let t = self.rational(&int(0), &rat(1, 2));
        let bigger = match c {
            BasicOpenSet::HalfOpen { a, b } => BasicOpenSet::half_open(a - &s, b + &t),
            BasicOpenSet::ClopenInterval { a, b, include_left_extreme, include_right_extreme } => {
                let na = if a - &s < int(0) { int(0) } else { a - &s };
                let nb = if b + &t > int(1) { int(1) } else { b + &t };
                BasicOpenSet::clopen_with_extremes(
                    na.clone(),
                    nb.clone(),
                    *include_left_extreme || (na.is_zero() && self.rng.random_bool(0.5)),
                    *include_right_extreme || (nb.is_one() && self.rng.random_bool(0.5)),
                )
            }
            BasicOpenSet::InteriorDisc { cx, cy, r } => {
                let cap = cy.as_exact().cloned().unwrap_or_else(|| int(1)).min(int(1));
                let grown = (r.as_exact().cloned().unwrap_or_default() + &s).min(cap);
                BasicOpenSet::interior_disc(cx.clone(), cy.clone(), grown.into())
            }
            BasicOpenSet::TangentDisc { a, r } => {
                let grown = (r.as_exact().cloned().unwrap_or_default() + &s).min(int(1));
                BasicOpenSet::tangent_disc(a.clone(), grown.into())
            }
            BasicOpenSet::Open { .. } => Ok(c.clone()),
        };
        bigger.unwrap_or_else(|_| c.clone())
    }

    /// Points where the families change behavior: endpoints, both sides of
    /// double arrow endpoints, axis points, centers and rational boundary
    /// points of discs.
    pub fn critical_points(&self, u: &RegularOpenSet) -> Vec<Point> {
        let mut out = Vec::new();
        let step = rat(1, 64);
        for c in u.components() {
            match c {
                BasicOpenSet::HalfOpen { a, b } | BasicOpenSet::Open { a, b } => {
                    for x in [a.clone(), b.clone(), a - &step, b - &step] {
                        out.push(Point::sorgenfrey(x));
                    }
                }
                BasicOpenSet::ClopenInterval { a, b, .. } => {
                    for t in [a, b] {
                        for side in [0, 1] {
                            out.extend(Point::double_arrow(t.clone(), side));
                        }
                    }
                }
                BasicOpenSet::InteriorDisc { cx, cy, r } => {
                    if let (Some(cx), Some(cy), Some(r)) = (cx.as_exact(), cy.as_exact(), r.as_exact()) {
                        out.extend(Point::niemytzki_exact(cx.clone(), cy.clone()));
                        for (u, v, w) in UNIT_DIRECTIONS {
                            out.extend(Point::niemytzki_exact(cx + r * rat(u, w), cy + r * rat(v, w)));
                        }
                    }
                }
                BasicOpenSet::TangentDisc { a, r } => {
                    if let (Some(a), Some(r)) = (a.as_exact(), r.as_exact()) {
                        out.extend(Point::niemytzki_exact(a.clone(), int(0)));
                        out.extend(Point::niemytzki_exact(a + &step, int(0)));
                        out.extend(Point::niemytzki_exact(a.clone(), r / int(2)));
                        out.extend(Point::niemytzki_exact(a.clone(), r.clone()));
                        for (u, v, w) in UNIT_DIRECTIONS {
                            out.extend(Point::niemytzki_exact(a + r * rat(u, w), r + r * rat(v, w)));
                        }
                    }
                }
            }
        }
        out
    }

    fn inside_point(&mut self, c: &BasicOpenSet) -> Option<Point> {
        let u = self.rational(&rat(-7, 10), &rat(7, 10));
        let v = self.rational(&rat(-7, 10), &rat(7, 10));
        match c {
            BasicOpenSet::HalfOpen { a, b } | BasicOpenSet::Open { a, b } => {
                let s = self.rational(&int(0), &int(1));
                Some(Point::sorgenfrey(a + (b - a) * s))
            }
            BasicOpenSet::ClopenInterval { a, b, .. } => {
                let s = self.rational(&int(0), &int(1));
                Point::double_arrow(a + (b - a) * s, self.rng.random_range(0..=1)).ok()
            }
            BasicOpenSet::InteriorDisc { cx, cy, r } => {
                let (cx, cy, r) = (cx.as_exact()?, cy.as_exact()?, r.as_exact()?);
                Point::niemytzki_exact(cx + r * u, cy + r * v).ok()
            }
            BasicOpenSet::TangentDisc { a, r } => {
                let (a, r) = (a.as_exact()?, r.as_exact()?);
                Point::niemytzki_exact(a + r * u, r + r * v).ok()
            }
        }
    }

    pub fn uniform_point(&mut self) -> Point {
        match self.space {
            SpaceId::Sorgenfrey => Point::sorgenfrey(self.rational(&int(-3), &int(3))),
            SpaceId::DoubleArrow => {
                let t = self.rational(&int(0), &int(1));
                Point::double_arrow(t, self.rng.random_range(0..=1)).expect("t in [0,1]")
            }
            SpaceId::Niemytzki => {
                let x = self.rational(&int(-3), &int(3));
                let y = if self.rng.random_bool(0.2) { int(0) } else { self.rational(&int(0), &int(4)) };
                Point::niemytzki_exact(x, y).expect("y >= 0")
            }
        }
    }

    /// A point biased towards `u`: uniform, inside a component, or critical.
    pub fn point_for(&mut self, u: &RegularOpenSet) -> Point {
        let roll: f64 = self.rng.random();
        if roll < 0.3 || u.is_empty() {
            return self.uniform_point();
        }
        if roll < 0.7 {
            let c = u.components()[self.rng.random_range(0..u.components().len())].clone();
            if let Some(p) = self.inside_point(&c) {
                return p;
            }
        }
        let crit = self.critical_points(u);
        if crit.is_empty() {
            return self.uniform_point();
        }
        crit[self.rng.random_range(0..crit.len())].clone()
    }

    /// A limit point for `u` and a certificate of a sequence converging to
    /// it. Sorgenfrey and off-axis sequences close in at rate `c/n^2`; axis
    /// limits approach through tangent discs of radius `c/n^4`.
    pub fn certified_sequence(&mut self, u: &RegularOpenSet, len: u64) -> Result<ConvergenceCertificate> {
        let limit = loop {
            let p = if self.rng.random_bool(0.5) { self.point_for(u) } else {
                let crit = self.critical_points(u);
                if crit.is_empty() { self.uniform_point() } else { crit[self.rng.random_range(0..crit.len())].clone() }
            };
            if !is_isolated(&p) {
                break p;
            }
        };
        let c = self.rational(&rat(1, 4), &int(1));
        certificate_towards(&limit, &c, len)
    }

    /// A single-component decreasing chain whose limit is a base set.
    pub fn chain(&mut self, depth: u64) -> DecreasingChain {
        loop {
            let shift = self.rng.random_range(1..=4u64);
            let comp = match self.space {
                SpaceId::Sorgenfrey => {
                    let a = self.rational(&int(-2), &int(1));
                    let b = &a + self.rational(&rat(1, 4), &int(1));
                    let gap = self.rational(&rat(1, 10), &int(1));
                    if self.rng.random_bool(0.5) {
                        ParamBasic::HalfOpen { a: ParamExpr::constant(a), b: ParamExpr::harmonic(b, gap, shift) }
                    } else {
                        ParamBasic::HalfOpen { a: ParamExpr::harmonic(a, -gap, shift), b: ParamExpr::constant(b) }
                    }
                }
                SpaceId::DoubleArrow => {
                    let a = self.rational(&rat(1, 8), &rat(1, 2));
                    let b = &a + self.rational(&rat(1, 8), &rat(3, 8));
                    let gap = self.rational(&rat(1, 16), &rat(1, 8));
                    if self.rng.random_bool(0.5) {
                        ParamBasic::ClopenInterval {
                            a: ParamExpr::harmonic(a, -gap, shift),
                            b: ParamExpr::constant(b),
                            include_left_extreme: false,
                            include_right_extreme: false,
                        }
                    } else {
                        ParamBasic::ClopenInterval {
                            a: ParamExpr::constant(a),
                            b: ParamExpr::harmonic(b, gap, shift),
                            include_left_extreme: false,
                            include_right_extreme: false,
                        }
                    }
                }
                SpaceId::Niemytzki => {
                    let r = self.rational(&rat(1, 8), &rat(3, 4));
                    let gap = self.rational(&rat(1, 16), &rat(1, 4));
                    let radius = ParamExpr::harmonic(r, gap, shift);
                    if self.rng.random_bool(0.5) {
                        ParamBasic::TangentDisc { a: ParamExpr::constant(self.rational(&int(-1), &int(1))), r: radius }
                    } else {
                        ParamBasic::InteriorDisc {
                            cx: ParamExpr::constant(self.rational(&int(-1), &int(1))),
                            cy: ParamExpr::constant(self.rational(&int(1), &int(2))),
                            r: radius,
                        }
                    }
                }
            };
            if let Ok(ch) = DecreasingChain::single(comp, depth) {
                return ch;
            }
        }
    }
}

fn is_isolated(p: &Point) -> bool {
    matches!(p, Point::DoubleArrow { t, side } if (t.is_zero() && *side == 0) || (t.is_one() && *side == 1))
}

/// A certified sequence `s_1, ..., s_len` converging to `limit`, with gap
/// scale `c` (`0 < c <= 1`).
pub fn certificate_towards(limit: &Point, c: &Rational, len: u64) -> Result<ConvergenceCertificate> {
    let mut seq = Vec::new();
    let mut wit = Vec::new();
    for n in 1..=len.max(1) {
        let n2 = int(n as i64) * int(n as i64);
        let d = c / &n2;
        match limit {
            Point::Sorgenfrey { x } => {
                seq.push(Point::sorgenfrey(x + &d));
                wit.push(BasicOpenSet::half_open(x.clone(), x + &d * int(2))?);
            }
            Point::DoubleArrow { t, side } => {
                let room = if *side == 1 { int(1) - t } else { t.clone() };
                let d = &d * room / int(4);
                if *side == 1 {
                    seq.push(Point::double_arrow(t + &d, (n % 2) as u8)?);
                    wit.push(BasicOpenSet::clopen(t.clone(), t + &d * int(2))?);
                } else {
                    seq.push(Point::double_arrow(t - &d, (n % 2) as u8)?);
                    wit.push(BasicOpenSet::clopen(t - &d * int(2), t.clone())?);
                }
            }
            Point::Niemytzki { x, y } => {
                let (Some(x), Some(y)) = (x.as_exact(), y.as_exact()) else {
                    return Err(crate::error::Error::Precondition("certificates are built for exact limits".into()));
                };
                if y.is_zero() {
                    let rho = &d / &n2 / int(2);
                    seq.push(Point::niemytzki_exact(x + &rho / int(2), rho.clone())?);
                    wit.push(BasicOpenSet::tangent_disc(x.clone().into(), (&rho * int(2)).into())?);
                } else {
                    let scale = if y < &int(1) { y / int(2) } else { rat(1, 2) };
                    let d = &d * &scale;
                    let (u, v, w) = UNIT_DIRECTIONS[(n % 8) as usize];
                    seq.push(Point::niemytzki_exact(x + &d * rat(u, w), y + &d * rat(v, w))?);
                    wit.push(BasicOpenSet::interior_disc(x.clone().into(), y.clone().into(), (&d * int(2)).into())?);
                }
            }
        }
    }
    Ok(ConvergenceCertificate::new(seq, limit.clone(), wit))
}
