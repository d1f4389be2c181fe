//! Points of the three spaces, the double arrow order, Euclidean distance
//! on the Niemytzki plane, and convergence certificates.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::basic::BasicOpenSet;
use crate::error::{Error, Result};
use crate::numeric::{exact_sqrt, rational_str, Mode, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceId {
    Sorgenfrey,
    DoubleArrow,
    Niemytzki,
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceId::Sorgenfrey => "sorgenfrey",
            SpaceId::DoubleArrow => "double_arrow",
            SpaceId::Niemytzki => "niemytzki",
        })
    }
}

pub fn ensure_space(expected: SpaceId, found: SpaceId) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { expected, found })
    }
}

/// A point of the Sorgenfrey line, the double arrow space `[0,1] x {0,1}`,
/// or the Niemytzki half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case", try_from = "RawPoint")]
pub enum Point {
    Sorgenfrey {
        #[serde(with = "rational_str")]
        x: Rational,
    },
    DoubleArrow {
        #[serde(with = "rational_str")]
        t: Rational,
        side: u8,
    },
    Niemytzki {
        x: Scalar,
        y: Scalar,
    },
}

#[derive(Deserialize)]
#[serde(tag = "space", rename_all = "snake_case", deny_unknown_fields)]
enum RawPoint {
    Sorgenfrey {
        #[serde(with = "rational_str")]
        x: Rational,
    },
    DoubleArrow {
        #[serde(with = "rational_str")]
        t: Rational,
        side: u8,
    },
    Niemytzki {
        x: Scalar,
        y: Scalar,
    },
}

impl TryFrom<RawPoint> for Point {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Point> {
        match raw {
            RawPoint::Sorgenfrey { x } => Ok(Point::sorgenfrey(x)),
            RawPoint::DoubleArrow { t, side } => Point::double_arrow(t, side),
            RawPoint::Niemytzki { x, y } => Point::niemytzki(x, y),
        }
    }
}

impl Point {
    pub fn sorgenfrey(x: Rational) -> Point {
        Point::Sorgenfrey { x }
    }

    pub fn double_arrow(t: Rational, side: u8) -> Result<Point> {
        if t.is_negative() || t > Rational::from_integer(1.into()) {
            return Err(Error::InvalidPoint(format!("double arrow coordinate {t} outside [0,1]")));
        }
        if side > 1 {
            return Err(Error::InvalidPoint(format!("double arrow side {side} is not 0 or 1")));
        }
        Ok(Point::DoubleArrow { t, side })
    }

    pub fn niemytzki(x: Scalar, y: Scalar) -> Result<Point> {
        if x.mode() != y.mode() {
            return Err(Error::ModeMismatch);
        }
        let negative = match &y {
            Scalar::Exact(q) => q.is_negative(),
            Scalar::Float(v) => *v < 0.0 || !v.is_finite(),
        };
        if negative || !x.to_f64().is_finite() {
            return Err(Error::InvalidPoint(format!("niemytzki point ({x}, {y}) is not in the closed upper half-plane")));
        }
        Ok(Point::Niemytzki { x, y })
    }

    pub fn niemytzki_exact(x: Rational, y: Rational) -> Result<Point> {
        Point::niemytzki(Scalar::Exact(x), Scalar::Exact(y))
    }

    pub fn niemytzki_float(x: f64, y: f64) -> Result<Point> {
        Point::niemytzki(Scalar::Float(x), Scalar::Float(y))
    }

    pub fn space(&self) -> SpaceId {
        match self {
            Point::Sorgenfrey { .. } => SpaceId::Sorgenfrey,
            Point::DoubleArrow { .. } => SpaceId::DoubleArrow,
            Point::Niemytzki { .. } => SpaceId::Niemytzki,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Point::Niemytzki { x, .. } => x.mode(),
            _ => Mode::Exact,
        }
    }

    /// Exact Niemytzki coordinates, if the point is in exact mode.
    pub fn niemytzki_rational(&self) -> Option<(&Rational, &Rational)> {
        match self {
            Point::Niemytzki { x: Scalar::Exact(x), y: Scalar::Exact(y) } => Some((x, y)),
            _ => None,
        }
    }

    pub fn niemytzki_f64(&self) -> Option<(f64, f64)> {
        match self {
            Point::Niemytzki { x, y } => Some((x.to_f64(), y.to_f64())),
            _ => None,
        }
    }

    /// Promotes Niemytzki coordinates to float mode; other points are unchanged.
    pub fn to_float(&self) -> Point {
        match self {
            Point::Niemytzki { x, y } => Point::Niemytzki { x: x.to_float(), y: y.to_float() },
            other => other.clone(),
        }
    }

    pub fn is_on_axis(&self) -> bool {
        matches!(self, Point::Niemytzki { y, .. } if y.is_zero())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Sorgenfrey { x } => write!(f, "{}", Scalar::Exact(x.clone())),
            Point::DoubleArrow { t, side } => write!(f, "({}, {side})", Scalar::Exact(t.clone())),
            Point::Niemytzki { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Strict lexicographic order on the double arrow space.
pub fn lex_less(a: &Point, b: &Point) -> Result<bool> {
    match (a, b) {
        (Point::DoubleArrow { t: ta, side: sa }, Point::DoubleArrow { t: tb, side: sb }) => {
            Ok(ta < tb || (ta == tb && sa < sb))
        }
        (Point::DoubleArrow { .. }, other) | (other, _) => {
            Err(Error::SpaceMismatch { expected: SpaceId::DoubleArrow, found: other.space() })
        }
    }
}

/// Squared Euclidean distance between exact Niemytzki points.
pub fn euclid_dist2_exact(p: &Point, q: &Point) -> Option<Rational> {
    let (px, py) = p.niemytzki_rational()?;
    let (qx, qy) = q.niemytzki_rational()?;
    let dx = px - qx;
    let dy = py - qy;
    Some(&dx * &dx + &dy * &dy)
}

/// Euclidean distance on the Niemytzki plane. Exact when both points are
/// exact and the squared distance is a rational square.
pub fn euclid_dist(p: &Point, q: &Point) -> Result<Scalar> {
    ensure_space(SpaceId::Niemytzki, p.space())?;
    ensure_space(SpaceId::Niemytzki, q.space())?;
    if let Some(d2) = euclid_dist2_exact(p, q) {
        if let Some(d) = exact_sqrt(&d2) {
            return Ok(Scalar::Exact(d));
        }
    }
    let (px, py) = p.niemytzki_f64().expect("niemytzki point");
    let (qx, qy) = q.niemytzki_f64().expect("niemytzki point");
    Ok(Scalar::Float((px - qx).hypot(py - qy)))
}

/// A sequence together with shrinking basic neighborhoods of its limit.
///
/// Witness `n` must contain the limit and every sequence member with index
/// at least `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub space: SpaceId,
    pub sequence: Vec<Point>,
    pub limit: Point,
    pub witnesses: Vec<BasicOpenSet>,
}

impl ConvergenceCertificate {
    pub fn new(sequence: Vec<Point>, limit: Point, witnesses: Vec<BasicOpenSet>) -> Self {
        ConvergenceCertificate { space: limit.space(), sequence, limit, witnesses }
    }
}

/// Checks the containment and shrinking conditions of a certificate.
///
/// `Ok(false)` means the data do not certify convergence; `Err` means the
/// witnesses have the wrong shape for the limit's position.
pub fn verify_convergence(cert: &ConvergenceCertificate) -> Result<bool> {
    if cert.sequence.is_empty() {
        return Err(Error::MalformedCertificate("empty sequence".into()));
    }
    if cert.witnesses.is_empty() {
        return Err(Error::MalformedCertificate("no witnesses".into()));
    }
    ensure_space(cert.space, cert.limit.space())?;
    for p in &cert.sequence {
        ensure_space(cert.space, p.space())?;
    }
    for w in &cert.witnesses {
        ensure_space(cert.space, w.space())?;
        check_witness_shape(&cert.limit, w)?;
    }
    for w in &cert.witnesses {
        if !w.contains(&cert.limit)? {
            return Ok(false);
        }
    }
    for pair in cert.witnesses.windows(2) {
        if !pair[1].subset_of(&pair[0])? {
            return Ok(false);
        }
    }
    for (n, w) in cert.witnesses.iter().enumerate() {
        for p in cert.sequence.iter().skip(n) {
            if !w.contains(p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_witness_shape(limit: &Point, w: &BasicOpenSet) -> Result<()> {
    let bad = |why: &str| Err(Error::MalformedCertificate(format!("witness {w:?} for limit {limit}: {why}")));
    match (limit, w) {
        (Point::Sorgenfrey { x }, BasicOpenSet::HalfOpen { a, .. }) => {
            if a == x {
                Ok(())
            } else {
                bad("sorgenfrey witnesses must be [x, x + d)")
            }
        }
        (Point::Sorgenfrey { .. }, _) => bad("sorgenfrey witnesses must be half-open intervals"),
        (Point::DoubleArrow { t, side }, BasicOpenSet::ClopenInterval { a, b, .. }) => {
            let anchored = if *side == 1 { a == t } else { b == t };
            if anchored {
                Ok(())
            } else {
                bad("double arrow witnesses must be anchored at the limit")
            }
        }
        (Point::DoubleArrow { .. }, _) => bad("double arrow witnesses must be clopen intervals"),
        (Point::Niemytzki { x, y }, BasicOpenSet::TangentDisc { a, .. }) => {
            if y.is_zero() && x.cmp_with_slack(a, 0.0).is_eq() {
                Ok(())
            } else {
                bad("tangent-disc witnesses are only for their own axis point")
            }
        }
        (Point::Niemytzki { y, .. }, BasicOpenSet::InteriorDisc { .. }) => {
            if y.is_zero() {
                bad("axis limits need tangent-disc witnesses")
            } else {
                Ok(())
            }
        }
        (Point::Niemytzki { .. }, _) => bad("niemytzki witnesses must be discs"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn da(t: Rational, side: u8) -> Point {
        Point::double_arrow(t, side).unwrap()
    }

    #[test]
    fn lex_order_examples() {
        assert!(lex_less(&da(rat(1, 4), 1), &da(rat(1, 2), 0)).unwrap());
        assert!(lex_less(&da(rat(1, 2), 0), &da(rat(1, 2), 1)).unwrap());
        assert!(!lex_less(&da(rat(1, 2), 1), &da(rat(1, 2), 1)).unwrap());
        assert!(lex_less(&da(rat(1, 2), 1), &Point::sorgenfrey(int(0))).is_err());
    }

    #[test]
    fn lex_order_is_strict_total_on_a_grid() {
        let pts: Vec<Point> = (0..=8).flat_map(|k| [da(rat(k, 8), 0), da(rat(k, 8), 1)]).collect();
        for a in &pts {
            assert!(!lex_less(a, a).unwrap());
            for b in &pts {
                let (ab, ba) = (lex_less(a, b).unwrap(), lex_less(b, a).unwrap());
                assert!(!(ab && ba));
                assert!(a == b || ab || ba);
                for c in &pts {
                    if ab && lex_less(b, c).unwrap() {
                        assert!(lex_less(a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let p = |x, y| Point::niemytzki_exact(x, y).unwrap();
        assert_eq!(euclid_dist(&p(int(0), int(2)), &p(int(0), int(2))).unwrap(), Scalar::Exact(int(0)));
        assert_eq!(euclid_dist(&p(int(0), int(0)), &p(int(3), int(4))).unwrap(), Scalar::Exact(int(5)));
        let a = p(rat(1, 3), rat(1, 6));
        let b = p(int(0), int(1));
        assert_eq!(euclid_dist2_exact(&a, &b), Some(rat(29, 36)));
        let d = euclid_dist(&a, &b).unwrap().to_f64();
        assert!((d - 29f64.sqrt() / 6.0).abs() < 1e-12);
        assert!((d - 0.89753).abs() < 1e-5);
    }

    #[test]
    fn rejects_points_off_the_half_plane() {
        assert!(Point::niemytzki_exact(int(0), rat(-1, 2)).is_err());
        assert!(Point::niemytzki(Scalar::Exact(int(0)), Scalar::Float(1.0)).is_err());
        assert!(Point::double_arrow(rat(3, 2), 0).is_err());
        assert!(Point::double_arrow(rat(1, 2), 2).is_err());
    }

    #[test]
    fn niemytzki_axis_convergence() {
        let seq = (1..=40)
            .map(|n| Point::niemytzki_exact(rat(1, 3 * n), rat(1, 6 * n)).unwrap())
            .collect();
        let witnesses = (1..=40).map(|n| BasicOpenSet::tangent_disc(int(0).into(), rat(1, n).into()).unwrap()).collect();
        let cert = ConvergenceCertificate::new(seq, Point::niemytzki_exact(int(0), int(0)).unwrap(), witnesses);
        assert!(verify_convergence(&cert).unwrap());
    }

    #[test]
    fn sorgenfrey_right_and_left_approach() {
        let x = rat(1, 3);
        let ws: Vec<_> = (1..=30).map(|n| BasicOpenSet::half_open(x.clone(), &x + rat(2, n)).unwrap()).collect();
        let right = (1..=30).map(|n| Point::sorgenfrey(&x + rat(1, n))).collect();
        let left = (1..=30).map(|n| Point::sorgenfrey(&x - rat(1, n))).collect();
        let ok = ConvergenceCertificate::new(right, Point::sorgenfrey(x.clone()), ws.clone());
        let bad = ConvergenceCertificate::new(left, Point::sorgenfrey(x.clone()), ws);
        assert!(verify_convergence(&ok).unwrap());
        assert!(!verify_convergence(&bad).unwrap());
    }

    #[test]
    fn wrong_witness_shape_is_malformed() {
        let limit = Point::niemytzki_exact(int(0), int(0)).unwrap();
        let w = BasicOpenSet::interior_disc(int(0).into(), int(1).into(), rat(1, 2).into()).unwrap();
        let cert = ConvergenceCertificate::new(vec![limit.clone()], limit, vec![w]);
        assert!(matches!(verify_convergence(&cert), Err(Error::MalformedCertificate(_))));
    }
}
