//! Regular open sets as canonical finite unions of base elements.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::basic::BasicOpenSet;
use crate::error::{Error, Result};
use crate::numeric::{Mode, Rational, Scalar};
use crate::space::{ensure_space, Point, SpaceId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    ValidatedExact,
    ValidatedSampled { n_samples: usize },
}

/// Wire form of a set: `{"space": ..., "components": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub space: SpaceId,
    pub components: Vec<BasicOpenSet>,
}

/// A validated regular open set in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetSpec")]
pub struct RegularOpenSet {
    space: SpaceId,
    components: Vec<BasicOpenSet>,
    #[serde(skip_serializing_if = "is_exact_certificate")]
    certificate: Certificate,
}

fn is_exact_certificate(c: &Certificate) -> bool {
    *c == Certificate::ValidatedExact
}

impl TryFrom<SetSpec> for RegularOpenSet {
    type Error = Error;

    fn try_from(spec: SetSpec) -> Result<RegularOpenSet> {
        validate_regular_open(spec.space, spec.components)
    }
}

impl RegularOpenSet {
    pub fn empty(space: SpaceId) -> RegularOpenSet {
        RegularOpenSet { space, components: Vec::new(), certificate: Certificate::ValidatedExact }
    }

    /// A single base set. Sorgenfrey open intervals are rejected.
    pub fn basic(set: BasicOpenSet) -> Result<RegularOpenSet> {
        validate_regular_open(set.space(), vec![set])
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn components(&self) -> &[BasicOpenSet] {
        &self.components
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn single(&self) -> Option<&BasicOpenSet> {
        match self.components.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn to_spec(&self) -> SetSpec {
        SetSpec { space: self.space, components: self.components.clone() }
    }

    pub fn member(&self, p: &Point) -> Result<bool> {
        ensure_space(self.space, p.space())?;
        for c in &self.components {
            if c.contains(p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Membership in the closure, in the set's own topology.
    pub fn closure_member(&self, p: &Point) -> Result<bool> {
        ensure_space(self.space, p.space())?;
        for c in &self.components {
            if c.closure_contains(p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Membership in `int cl S`.
    ///
    /// Exact on the Sorgenfrey line and the double arrow space, where the
    /// closure of a finite union of base sets is clopen. On the Niemytzki
    /// plane a basic neighborhood of radius `probe` is sampled.
    pub fn interior_closure_member(&self, p: &Point, probe: f64) -> Result<bool> {
        ensure_space(self.space, p.space())?;
        match self.space {
            SpaceId::Sorgenfrey | SpaceId::DoubleArrow => self.closure_member(p),
            SpaceId::Niemytzki => {
                let (x, y) = p.niemytzki_f64().expect("niemytzki point");
                let closed = |px: f64, py: f64| -> Result<bool> {
                    let q = Point::niemytzki_float(px, py.max(0.0))?;
                    self.closure_member(&q)
                };
                if !closed(x, y)? {
                    return Ok(false);
                }
                let (cx, cy, rad) = if y > probe { (x, y, probe) } else if y == 0.0 { (x, probe, probe) } else { return Ok(false) };
                for k in 0..64 {
                    let t = std::f64::consts::TAU * k as f64 / 64.0;
                    let (px, py) = (cx + 0.999 * rad * t.cos(), cy + 0.999 * rad * t.sin());
                    if !closed(px, py)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Niemytzki axis points that belong to the set.
    pub fn tangency_points(&self) -> Vec<Scalar> {
        self.components
            .iter()
            .filter_map(|c| match c {
                BasicOpenSet::TangentDisc { a, .. } => Some(a.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Validates a candidate finite union and returns its canonical form.
///
/// Sorgenfrey unions are normalized to disjoint `[a,b)` pieces with
/// adjacencies merged; an open left end that survives merging is the
/// rejection witness, because `int cl (a,b) = [a,b)`. Double arrow unions
/// of clopen intervals are always clopen. Niemytzki unions of base discs
/// are accepted; no boundary point of such a union becomes interior to its
/// closure.
pub fn validate_regular_open(space: SpaceId, components: Vec<BasicOpenSet>) -> Result<RegularOpenSet> {
    for c in &components {
        ensure_space(space, c.space())?;
    }
    let (components, certificate) = match space {
        SpaceId::Sorgenfrey => (canonical_sorgenfrey(components)?, Certificate::ValidatedExact),
        SpaceId::DoubleArrow => (canonical_double_arrow(components), Certificate::ValidatedExact),
        SpaceId::Niemytzki => canonical_niemytzki(components)?,
    };
    Ok(RegularOpenSet { space, components, certificate })
}

fn canonical_sorgenfrey(components: Vec<BasicOpenSet>) -> Result<Vec<BasicOpenSet>> {
    let mut pieces: Vec<(Rational, Rational, bool)> = components
        .into_iter()
        .map(|c| match c {
            BasicOpenSet::HalfOpen { a, b } => (a, b, true),
            BasicOpenSet::Open { a, b } => (a, b, false),
            _ => unreachable!("space checked"),
        })
        .collect();
    pieces.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| y.2.cmp(&x.2)));
    let mut merged: Vec<(Rational, Rational, bool)> = Vec::new();
    for (a, b, closed) in pieces {
        if let Some(last) = merged.last_mut() {
            if a < last.1 || (a == last.1 && closed) {
                if b > last.1 {
                    last.1 = b;
                }
                continue;
            }
            if a == last.1 {
                return Err(Error::NotRegularOpen { witness: Box::new(Point::sorgenfrey(a)) });
            }
        }
        merged.push((a, b, closed));
    }
    merged
        .into_iter()
        .map(|(a, b, closed)| {
            if closed {
                BasicOpenSet::half_open(a, b)
            } else {
                Err(Error::NotRegularOpen { witness: Box::new(Point::sorgenfrey(a)) })
            }
        })
        .collect()
}

fn canonical_double_arrow(components: Vec<BasicOpenSet>) -> Vec<BasicOpenSet> {
    let mut pieces: Vec<(Rational, Rational, bool, bool)> = components
        .into_iter()
        .map(|c| match c {
            BasicOpenSet::ClopenInterval { a, b, include_left_extreme, include_right_extreme } => {
                (a, b, include_left_extreme, include_right_extreme)
            }
            _ => unreachable!("space checked"),
        })
        .collect();
    pieces.sort_by(|x, y| x.0.cmp(&y.0));
    let mut merged: Vec<(Rational, Rational, bool, bool)> = Vec::new();
    for (a, b, l, r) in pieces {
        if let Some(last) = merged.last_mut() {
            if a <= last.1 {
                if b > last.1 {
                    last.1 = b;
                }
                last.2 |= l;
                last.3 |= r;
                continue;
            }
        }
        merged.push((a, b, l, r));
    }
    merged
        .into_iter()
        .map(|(a, b, l, r)| BasicOpenSet::ClopenInterval { a, b, include_left_extreme: l, include_right_extreme: r })
        .collect()
}

fn canonical_niemytzki(components: Vec<BasicOpenSet>) -> Result<(Vec<BasicOpenSet>, Certificate)> {
    let modes: Vec<Mode> = components.iter().map(|c| if c.is_exact() { Mode::Exact } else { Mode::Float }).collect();
    let mut kept: Vec<BasicOpenSet> = Vec::new();
    for (i, c) in components.iter().enumerate() {
        let mut redundant = false;
        for (j, other) in components.iter().enumerate() {
            if i == j {
                continue;
            }
            if c.subset_of(other)? && (!other.subset_of(c)? || j < i) {
                redundant = true;
                break;
            }
        }
        if !redundant {
            kept.push(c.clone());
        }
    }
    kept.sort_by(|x, y| {
        x.left_key()
            .partial_cmp(&y.left_key())
            .unwrap_or(Ordering::Equal)
            .then_with(|| format!("{x:?}").cmp(&format!("{y:?}")))
    });
    let certificate = if modes.iter().all(|m| *m == Mode::Exact) {
        Certificate::ValidatedExact
    } else {
        Certificate::ValidatedSampled { n_samples: SAMPLED_VALIDATION_POINTS }
    };
    if let Certificate::ValidatedSampled { .. } = certificate {
        let set = RegularOpenSet { space: SpaceId::Niemytzki, components: kept.clone(), certificate: certificate.clone() };
        sampled_regularity_check(&set)?;
    }
    Ok((kept, certificate))
}

pub const SAMPLED_VALIDATION_POINTS: usize = 256;

/// Compares `S` with `int cl S` at points spread just inside and just
/// outside every component boundary.
fn sampled_regularity_check(set: &RegularOpenSet) -> Result<()> {
    let per = (SAMPLED_VALIDATION_POINTS / set.components.len().max(1)).max(8);
    for c in &set.components {
        let d = c.euclid_disc().expect("niemytzki component");
        for k in 0..per {
            let t = std::f64::consts::TAU * (k as f64 + 0.5) / per as f64;
            for scale in [0.99, 1.01] {
                let (x, y) = (d.cx + scale * d.r * t.cos(), d.cy + scale * d.r * t.sin());
                if y < 0.0 {
                    continue;
                }
                let p = Point::niemytzki_float(x, y)?;
                let probe = (d.r * 1e-3).min(y.max(1e-6) * 0.5);
                if set.interior_closure_member(&p, probe)? && !set.member(&p)? {
                    return Err(Error::NotRegularOpen { witness: Box::new(p) });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn ho(a: Rational, b: Rational) -> BasicOpenSet {
        BasicOpenSet::half_open(a, b).unwrap()
    }

    #[test]
    fn open_interval_is_rejected_with_left_end_witness() {
        let err = validate_regular_open(SpaceId::Sorgenfrey, vec![BasicOpenSet::open(int(0), int(1)).unwrap()]).unwrap_err();
        assert_eq!(err, Error::NotRegularOpen { witness: Box::new(Point::sorgenfrey(int(0))) });
    }

    #[test]
    fn adjacent_half_open_intervals_merge() {
        let s = validate_regular_open(SpaceId::Sorgenfrey, vec![ho(int(1), int(2)), ho(int(0), int(1))]).unwrap();
        assert_eq!(s.components(), &[ho(int(0), int(2))]);
        assert_eq!(s.certificate(), &Certificate::ValidatedExact);
    }

    #[test]
    fn punctured_union_is_rejected() {
        let err = validate_regular_open(
            SpaceId::Sorgenfrey,
            vec![ho(int(0), int(1)), BasicOpenSet::open(int(1), int(2)).unwrap()],
        )
        .unwrap_err();
        assert_eq!(err, Error::NotRegularOpen { witness: Box::new(Point::sorgenfrey(int(1))) });
    }

    #[test]
    fn open_interval_absorbed_by_half_open_is_fine() {
        let s = validate_regular_open(
            SpaceId::Sorgenfrey,
            vec![ho(int(0), int(2)), BasicOpenSet::open(int(1), int(3)).unwrap()],
        )
        .unwrap();
        assert_eq!(s.components(), &[ho(int(0), int(3))]);
    }

    #[test]
    fn disjoint_tangent_discs_are_exact() {
        let s = validate_regular_open(
            SpaceId::Niemytzki,
            vec![
                BasicOpenSet::tangent_disc(int(0).into(), int(1).into()).unwrap(),
                BasicOpenSet::tangent_disc(int(1).into(), int(1).into()).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.components().len(), 2);
        assert_eq!(s.certificate(), &Certificate::ValidatedExact);
    }

    #[test]
    fn float_niemytzki_union_gets_sampled_certificate() {
        let s = validate_regular_open(
            SpaceId::Niemytzki,
            vec![
                BasicOpenSet::tangent_disc(Scalar::Float(0.0), Scalar::Float(0.5)).unwrap(),
                BasicOpenSet::interior_disc(Scalar::Float(0.3), Scalar::Float(0.8), Scalar::Float(0.4)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.certificate(), &Certificate::ValidatedSampled { n_samples: SAMPLED_VALIDATION_POINTS });
    }

    #[test]
    fn contained_components_are_dropped() {
        let s = validate_regular_open(
            SpaceId::Niemytzki,
            vec![
                BasicOpenSet::interior_disc(int(0).into(), int(2).into(), rat(1, 2).into()).unwrap(),
                BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap(),
                BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn closure_examples() {
        let x_k = rat(1, 20);
        let d = RegularOpenSet::basic(BasicOpenSet::clopen(x_k, rat(1, 5)).unwrap()).unwrap();
        assert!(d.closure_member(&Point::double_arrow(rat(1, 10), 0).unwrap()).unwrap());
        let open = BasicOpenSet::open(int(0), int(1)).unwrap();
        assert!(open.closure_contains(&Point::sorgenfrey(int(0))).unwrap());
        assert!(!open.closure_contains(&Point::sorgenfrey(int(1))).unwrap());
        let disc = RegularOpenSet::basic(BasicOpenSet::interior_disc(int(0).into(), int(1).into(), int(1).into()).unwrap()).unwrap();
        let origin = Point::niemytzki_exact(int(0), int(0)).unwrap();
        assert!(disc.closure_member(&origin).unwrap());
        assert!(!disc.member(&origin).unwrap());
    }

    #[test]
    fn closure_of_sorgenfrey_open_interval_by_neighborhood_scan() {
        // Oracle: x is in cl (0,1) iff every [x, x + d) meets (0,1).
        let meets = |x: Rational| (1..=64).all(|k| {
            let right = &x + rat(1, k);
            right > int(0) && x < int(1)
        });
        let open = BasicOpenSet::open(int(0), int(1)).unwrap();
        for num in -8..=16 {
            let x = rat(num, 8);
            assert_eq!(open.closure_contains(&Point::sorgenfrey(x.clone())).unwrap(), meets(x));
        }
    }

    #[test]
    fn tangent_point_of_disc_is_in_closure_by_intersection() {
        // Oracle: B*(0, 1/2) meets B((0,1),1), e.g. at (0, 1/2).
        let witness = Point::niemytzki_exact(int(0), rat(1, 2)).unwrap();
        let nbhd = BasicOpenSet::tangent_disc(int(0).into(), rat(1, 2).into()).unwrap();
        let disc = BasicOpenSet::interior_disc(int(0).into(), int(1).into(), int(1).into()).unwrap();
        assert!(nbhd.contains(&witness).unwrap() && disc.contains(&witness).unwrap());
    }

    #[test]
    fn deserialization_validates() {
        let ok: RegularOpenSet =
            serde_json::from_str(r#"{"space":"sorgenfrey","components":[{"kind":"half_open","a":"0","b":"1"}]}"#).unwrap();
        assert_eq!(ok.components().len(), 1);
        let bad = serde_json::from_str::<RegularOpenSet>(r#"{"space":"sorgenfrey","components":[{"kind":"open","a":"0","b":"1"}]}"#);
        assert!(bad.is_err());
        let mismatch = serde_json::from_str::<RegularOpenSet>(
            r#"{"space":"double_arrow","components":[{"kind":"half_open","a":"0","b":"1"}]}"#,
        );
        assert!(mismatch.is_err());
    }
}
