//! Parametric base elements of the three topologies.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Disc, Shape};
use crate::numeric::{rational_str, Rational, Scalar, EPS};
use crate::space::{ensure_space, lex_less, Point, SpaceId};

/// A base element.
///
/// * `HalfOpen` `[a,b)` and `Open` `(a,b)` live on the Sorgenfrey line.
/// * `ClopenInterval` is `[(a,1),(b,0)]` in the double arrow space. The
///   extreme flags add the isolated end points `(0,0)` (needs `a = 0`) and
///   `(1,1)` (needs `b = 1`).
/// * `InteriorDisc` is `B((cx,cy),r)` with `0 < r <= cy`, `r <= 1`.
/// * `TangentDisc` is `B*(a,r) = {(a,0)} U B((a,r),r)` with `0 < r <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawBasic")]
pub enum BasicOpenSet {
    HalfOpen {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    Open {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    ClopenInterval {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        include_left_extreme: bool,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        include_right_extreme: bool,
    },
    InteriorDisc {
        cx: Scalar,
        cy: Scalar,
        r: Scalar,
    },
    TangentDisc {
        a: Scalar,
        r: Scalar,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawBasic {
    HalfOpen {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    Open {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
    },
    ClopenInterval {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
        #[serde(default)]
        include_left_extreme: bool,
        #[serde(default)]
        include_right_extreme: bool,
    },
    InteriorDisc {
        cx: Scalar,
        cy: Scalar,
        r: Scalar,
    },
    TangentDisc {
        a: Scalar,
        r: Scalar,
    },
}

impl TryFrom<RawBasic> for BasicOpenSet {
    type Error = Error;

    fn try_from(raw: RawBasic) -> Result<BasicOpenSet> {
        match raw {
            RawBasic::HalfOpen { a, b } => BasicOpenSet::half_open(a, b),
            RawBasic::Open { a, b } => BasicOpenSet::open(a, b),
            RawBasic::ClopenInterval { a, b, include_left_extreme, include_right_extreme } => {
                BasicOpenSet::clopen_with_extremes(a, b, include_left_extreme, include_right_extreme)
            }
            RawBasic::InteriorDisc { cx, cy, r } => BasicOpenSet::interior_disc(cx, cy, r),
            RawBasic::TangentDisc { a, r } => BasicOpenSet::tangent_disc(a, r),
        }
    }
}

fn scalar_le(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x <= y,
        _ => a.to_f64() <= b.to_f64() + EPS,
    }
}

fn scalar_positive(a: &Scalar) -> bool {
    match a {
        Scalar::Exact(x) => x > &Rational::zero(),
        Scalar::Float(v) => *v > 0.0,
    }
}

impl BasicOpenSet {
    pub fn half_open(a: Rational, b: Rational) -> Result<BasicOpenSet> {
        if a >= b {
            return Err(Error::InvalidSet(format!("[{a}, {b}) needs a < b")));
        }
        Ok(BasicOpenSet::HalfOpen { a, b })
    }

    pub fn open(a: Rational, b: Rational) -> Result<BasicOpenSet> {
        if a >= b {
            return Err(Error::InvalidSet(format!("({a}, {b}) needs a < b")));
        }
        Ok(BasicOpenSet::Open { a, b })
    }

    pub fn clopen(a: Rational, b: Rational) -> Result<BasicOpenSet> {
        BasicOpenSet::clopen_with_extremes(a, b, false, false)
    }

    pub fn clopen_with_extremes(a: Rational, b: Rational, left: bool, right: bool) -> Result<BasicOpenSet> {
        if a < Rational::zero() || b > Rational::one() || a >= b {
            return Err(Error::InvalidSet(format!("[({a},1), ({b},0)] needs 0 <= a < b <= 1")));
        }
        if left && !a.is_zero() {
            return Err(Error::InvalidSet("left extreme (0,0) needs a = 0".into()));
        }
        if right && !b.is_one() {
            return Err(Error::InvalidSet("right extreme (1,1) needs b = 1".into()));
        }
        Ok(BasicOpenSet::ClopenInterval { a, b, include_left_extreme: left, include_right_extreme: right })
    }

    pub fn interior_disc(cx: Scalar, cy: Scalar, r: Scalar) -> Result<BasicOpenSet> {
        if cx.mode() != cy.mode() || cy.mode() != r.mode() {
            return Err(Error::ModeMismatch);
        }
        let one = unit_like(&r);
        if !scalar_positive(&r) || !scalar_le(&r, &cy) || !scalar_le(&r, &one) || !cx.to_f64().is_finite() {
            return Err(Error::InvalidSet(format!("B(({cx},{cy}),{r}) needs 0 < r <= cy and r <= 1")));
        }
        Ok(BasicOpenSet::InteriorDisc { cx, cy, r })
    }

    pub fn tangent_disc(a: Scalar, r: Scalar) -> Result<BasicOpenSet> {
        if a.mode() != r.mode() {
            return Err(Error::ModeMismatch);
        }
        let one = unit_like(&r);
        if !scalar_positive(&r) || !scalar_le(&r, &one) || !a.to_f64().is_finite() {
            return Err(Error::InvalidSet(format!("B*({a},{r}) needs 0 < r <= 1")));
        }
        Ok(BasicOpenSet::TangentDisc { a, r })
    }

    pub fn space(&self) -> SpaceId {
        match self {
            BasicOpenSet::HalfOpen { .. } | BasicOpenSet::Open { .. } => SpaceId::Sorgenfrey,
            BasicOpenSet::ClopenInterval { .. } => SpaceId::DoubleArrow,
            BasicOpenSet::InteriorDisc { .. } | BasicOpenSet::TangentDisc { .. } => SpaceId::Niemytzki,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.shape_exact().is_some() || !matches!(self.space(), SpaceId::Niemytzki)
    }

    /// Left parameter used for canonical ordering.
    pub fn left_key(&self) -> f64 {
        match self {
            BasicOpenSet::HalfOpen { a, .. } | BasicOpenSet::Open { a, .. } | BasicOpenSet::ClopenInterval { a, .. } => {
                crate::numeric::to_f64(a)
            }
            BasicOpenSet::InteriorDisc { cx, r, .. } => cx.to_f64() - r.to_f64(),
            BasicOpenSet::TangentDisc { a, r } => a.to_f64() - r.to_f64(),
        }
    }

    pub fn shape_exact(&self) -> Option<Shape<Rational>> {
        match self {
            BasicOpenSet::InteriorDisc { cx: Scalar::Exact(cx), cy: Scalar::Exact(cy), r: Scalar::Exact(r) } => {
                Some(Shape::Disc { cx: cx.clone(), cy: cy.clone(), r: r.clone() })
            }
            BasicOpenSet::TangentDisc { a: Scalar::Exact(a), r: Scalar::Exact(r) } => {
                Some(Shape::Tangent { a: a.clone(), r: r.clone() })
            }
            _ => None,
        }
    }

    pub fn shape_f64(&self) -> Option<Shape<f64>> {
        match self {
            BasicOpenSet::InteriorDisc { cx, cy, r } => Some(Shape::Disc { cx: cx.to_f64(), cy: cy.to_f64(), r: r.to_f64() }),
            BasicOpenSet::TangentDisc { a, r } => Some(Shape::Tangent { a: a.to_f64(), r: r.to_f64() }),
            _ => None,
        }
    }

    pub fn euclid_disc(&self) -> Option<Disc> {
        let (cx, cy, r) = self.shape_f64()?.euclid();
        Some(Disc { cx, cy, r })
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        ensure_space(self.space(), p.space())?;
        Ok(match (self, p) {
            (BasicOpenSet::HalfOpen { a, b }, Point::Sorgenfrey { x }) => a <= x && x < b,
            (BasicOpenSet::Open { a, b }, Point::Sorgenfrey { x }) => a < x && x < b,
            (
                BasicOpenSet::ClopenInterval { a, b, include_left_extreme, include_right_extreme },
                Point::DoubleArrow { t, side },
            ) => {
                let lo = Point::DoubleArrow { t: a.clone(), side: 1 };
                let hi = Point::DoubleArrow { t: b.clone(), side: 0 };
                let inside = !lex_less(p, &lo)? && !lex_less(&hi, p)?;
                inside
                    || (*include_left_extreme && t.is_zero() && *side == 0)
                    || (*include_right_extreme && t.is_one() && *side == 1)
            }
            _ => self.niemytzki_eval(p, |s, x, y| s.contains(x, y), |s, x, y| s.contains(x, y)),
        })
    }

    /// Membership in the closure of this single base set.
    pub fn closure_contains(&self, p: &Point) -> Result<bool> {
        ensure_space(self.space(), p.space())?;
        Ok(match (self, p) {
            (BasicOpenSet::HalfOpen { a, b } | BasicOpenSet::Open { a, b }, Point::Sorgenfrey { x }) => a <= x && x < b,
            (BasicOpenSet::ClopenInterval { .. }, _) => self.contains(p)?,
            _ => self.niemytzki_eval(p, |s, x, y| s.closure_contains(x, y), |s, x, y| s.closure_contains(x, y)),
        })
    }

    /// Runs a Niemytzki predicate exactly when set and point are both exact,
    /// otherwise in float mode.
    fn niemytzki_eval(
        &self,
        p: &Point,
        exact: impl Fn(&Shape<Rational>, &Rational, &Rational) -> bool,
        float: impl Fn(&Shape<f64>, &f64, &f64) -> bool,
    ) -> bool {
        if let (Some(shape), Some((x, y))) = (self.shape_exact(), p.niemytzki_rational()) {
            return exact(&shape, x, y);
        }
        let shape = self.shape_f64().expect("niemytzki set");
        let (x, y) = p.niemytzki_f64().expect("niemytzki point");
        float(&shape, &x, &y)
    }

    /// Inclusion between base sets of one space, decided by parameters.
    pub fn subset_of(&self, other: &BasicOpenSet) -> Result<bool> {
        ensure_space(other.space(), self.space())?;
        Ok(match (self, other) {
            (
                BasicOpenSet::HalfOpen { a: a1, b: b1 } | BasicOpenSet::Open { a: a1, b: b1 },
                BasicOpenSet::HalfOpen { a: a2, b: b2 },
            ) => a2 <= a1 && b1 <= b2,
            (BasicOpenSet::HalfOpen { a: a1, b: b1 }, BasicOpenSet::Open { a: a2, b: b2 }) => a2 < a1 && b1 <= b2,
            (BasicOpenSet::Open { a: a1, b: b1 }, BasicOpenSet::Open { a: a2, b: b2 }) => a2 <= a1 && b1 <= b2,
            (
                BasicOpenSet::ClopenInterval { a: a1, b: b1, include_left_extreme: l1, include_right_extreme: r1 },
                BasicOpenSet::ClopenInterval { a: a2, b: b2, include_left_extreme: l2, include_right_extreme: r2 },
            ) => a2 <= a1 && b1 <= b2 && (!l1 || *l2) && (!r1 || *r2),
            _ => {
                if let (Some(s), Some(o)) = (self.shape_exact(), other.shape_exact()) {
                    s.subset_of(&o)
                } else {
                    let s = self.shape_f64().expect("niemytzki set");
                    let o = other.shape_f64().expect("niemytzki set");
                    s.subset_of(&o)
                }
            }
        })
    }
}

fn unit_like(s: &Scalar) -> Scalar {
    match s {
        Scalar::Exact(_) => Scalar::Exact(Rational::one()),
        Scalar::Float(_) => Scalar::Float(1.0),
    }
}
