//! Countable parametric chains of base sets.
//!
//! Every parameter is `base + coef / (n + shift)` for `n = 1, 2, ...`, so its
//! limit is exactly `base` and any chain built from such parameters has an
//! exact declared limit. Chains are evaluated at `n = 1..=depth` and, past
//! the depth, at the powers of two up to `2^60`; the far indices stand in
//! for the tail of the chain when infima are taken.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::basic::BasicOpenSet;
use crate::error::{Error, Result};
use crate::numeric::{rational_str, Rational, Scalar};
use crate::roset::{validate_regular_open, RegularOpenSet, SetSpec};
use crate::space::{ensure_space, SpaceId};

pub const DEFAULT_DEPTH: u64 = 64;
const FAR_INDEX_MAX_EXP: u32 = 60;

/// `base + coef / (n + shift)`. A bare `"p/q"` string is a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamExpr {
    Const(#[serde(with = "rational_str")] Rational),
    Harmonic {
        #[serde(with = "rational_str")]
        base: Rational,
        #[serde(with = "rational_str")]
        coef: Rational,
        #[serde(default)]
        shift: u64,
    },
}

impl ParamExpr {
    pub fn constant(v: Rational) -> ParamExpr {
        ParamExpr::Const(v)
    }

    pub fn harmonic(base: Rational, coef: Rational, shift: u64) -> ParamExpr {
        ParamExpr::Harmonic { base, coef, shift }
    }

    pub fn at(&self, n: u64) -> Rational {
        match self {
            ParamExpr::Const(v) => v.clone(),
            ParamExpr::Harmonic { base, coef, shift } => {
                base + coef / Rational::from_integer((n + shift).into())
            }
        }
    }

    pub fn limit(&self) -> Rational {
        match self {
            ParamExpr::Const(v) => v.clone(),
            ParamExpr::Harmonic { base, .. } => base.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            ParamExpr::Const(_) => true,
            ParamExpr::Harmonic { coef, .. } => coef.is_zero(),
        }
    }
}

/// A base set whose parameters depend on the chain index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamBasic {
    HalfOpen {
        a: ParamExpr,
        b: ParamExpr,
    },
    ClopenInterval {
        a: ParamExpr,
        b: ParamExpr,
        #[serde(default)]
        include_left_extreme: bool,
        #[serde(default)]
        include_right_extreme: bool,
    },
    InteriorDisc {
        cx: ParamExpr,
        cy: ParamExpr,
        r: ParamExpr,
    },
    TangentDisc {
        a: ParamExpr,
        r: ParamExpr,
    },
}

impl ParamBasic {
    pub fn space(&self) -> SpaceId {
        match self {
            ParamBasic::HalfOpen { .. } => SpaceId::Sorgenfrey,
            ParamBasic::ClopenInterval { .. } => SpaceId::DoubleArrow,
            _ => SpaceId::Niemytzki,
        }
    }

    fn build(&self, value: impl Fn(&ParamExpr) -> Rational) -> Result<BasicOpenSet> {
        match self {
            ParamBasic::HalfOpen { a, b } => BasicOpenSet::half_open(value(a), value(b)),
            ParamBasic::ClopenInterval { a, b, include_left_extreme, include_right_extreme } => {
                BasicOpenSet::clopen_with_extremes(value(a), value(b), *include_left_extreme, *include_right_extreme)
            }
            ParamBasic::InteriorDisc { cx, cy, r } => {
                BasicOpenSet::interior_disc(value(cx).into(), value(cy).into(), value(r).into())
            }
            ParamBasic::TangentDisc { a, r } => BasicOpenSet::tangent_disc(value(a).into(), value(r).into()),
        }
    }

    pub fn at(&self, n: u64) -> Result<BasicOpenSet> {
        self.build(|e| e.at(n))
    }

    /// The base set with every parameter replaced by its limit, or `None`
    /// when the limit parameters degenerate (empty interval, zero radius).
    pub fn limit(&self) -> Option<BasicOpenSet> {
        self.build(ParamExpr::limit).ok()
    }
}

/// Evaluation indices: `1..=depth`, then powers of two beyond the depth.
pub fn sample_indices(depth: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=depth.max(1)).collect();
    for k in 0..=FAR_INDEX_MAX_EXP {
        let n = 1u64 << k;
        if n > depth {
            out.push(n);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMeta {
    #[serde(default = "default_param")]
    pub param: String,
    #[serde(default = "default_depth")]
    pub depth: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<SetSpec>,
}

fn default_param() -> String {
    "n".into()
}

fn default_depth() -> u64 {
    DEFAULT_DEPTH
}

/// Wire form: `{"space", "components": [param sets], "chain": {"param", "depth", "limit"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub space: SpaceId,
    pub components: Vec<ParamBasic>,
    pub chain: ChainMeta,
}

/// A decreasing sequence of regular open sets `n -> U^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainSpec", into = "ChainSpec")]
pub struct DecreasingChain {
    space: SpaceId,
    components: Vec<ParamBasic>,
    depth: u64,
    declared_limit: Option<RegularOpenSet>,
}

impl TryFrom<ChainSpec> for DecreasingChain {
    type Error = Error;

    fn try_from(spec: ChainSpec) -> Result<DecreasingChain> {
        if spec.chain.param != "n" {
            return Err(Error::Schema(format!("chain parameter must be \"n\", got {:?}", spec.chain.param)));
        }
        let declared = spec
            .chain
            .limit
            .map(|s| validate_regular_open(s.space, s.components))
            .transpose()?;
        DecreasingChain::new(spec.space, spec.components, spec.chain.depth, declared)
    }
}

impl From<DecreasingChain> for ChainSpec {
    fn from(c: DecreasingChain) -> ChainSpec {
        ChainSpec {
            space: c.space,
            components: c.components,
            chain: ChainMeta { param: "n".into(), depth: c.depth, limit: c.declared_limit.map(|s| s.to_spec()) },
        }
    }
}

impl DecreasingChain {
    /// Builds the chain and checks that it decreases on every evaluated index.
    pub fn new(
        space: SpaceId,
        components: Vec<ParamBasic>,
        depth: u64,
        declared_limit: Option<RegularOpenSet>,
    ) -> Result<DecreasingChain> {
        if components.is_empty() {
            return Err(Error::UnsupportedChain("a chain needs at least one component".into()));
        }
        for c in &components {
            ensure_space(space, c.space())?;
        }
        if let Some(l) = &declared_limit {
            ensure_space(space, l.space())?;
        }
        let chain = DecreasingChain { space, components, depth: depth.max(1), declared_limit };
        chain.check_monotone()?;
        Ok(chain)
    }

    pub fn single(component: ParamBasic, depth: u64) -> Result<DecreasingChain> {
        DecreasingChain::new(component.space(), vec![component], depth, None)
    }

    pub fn with_declared_limit(mut self, limit: RegularOpenSet) -> Result<DecreasingChain> {
        ensure_space(self.space, limit.space())?;
        self.declared_limit = Some(limit);
        Ok(self)
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn components(&self) -> &[ParamBasic] {
        &self.components
    }

    pub fn declared_limit(&self) -> Option<&RegularOpenSet> {
        self.declared_limit.as_ref()
    }

    pub fn indices(&self) -> Vec<u64> {
        sample_indices(self.depth)
    }

    pub fn at(&self, n: u64) -> Result<RegularOpenSet> {
        let comps = self.components.iter().map(|c| c.at(n)).collect::<Result<Vec<_>>>()?;
        validate_regular_open(self.space, comps)
    }

    fn check_monotone(&self) -> Result<()> {
        let idx = self.indices();
        for w in idx.windows(2) {
            for c in &self.components {
                let (outer, inner) = (c.at(w[0])?, c.at(w[1])?);
                if !inner.subset_of(&outer)? {
                    return Err(Error::NonMonotoneChain { index: w[1] });
                }
            }
            self.at(w[0])?;
        }
        Ok(())
    }
}

/// `W = int (intersection of U^n)` in closed form.
///
/// Per shape: Sorgenfrey `[a_n, b_n)` gives `[sup a_n, inf b_n)`; double
/// arrow `[(a_n,1),(b_n,0)]` gives `[(lim a,1),(lim b,0)]`, since the extra
/// point `(lim a, 0)` that the intersection may pick up is never interior;
/// tangent discs keep their axis point and shrink to `B*(a, lim r)`; interior
/// discs shrink to `B(lim c, lim r)`. Degenerate limits give the empty set.
pub fn decreasing_chain_interior(chain: &DecreasingChain) -> Result<RegularOpenSet> {
    let [component] = chain.components() else {
        return Err(Error::UnsupportedChain(
            "interior of an intersection is computed in closed form for single-component chains".into(),
        ));
    };
    if let ParamBasic::TangentDisc { a, .. } = component {
        if !a.is_constant() {
            return Err(Error::NonMonotoneChain { index: 1 });
        }
    }
    let w = match component.limit() {
        Some(limit) => RegularOpenSet::basic(limit)?,
        None => RegularOpenSet::empty(chain.space()),
    };
    if let Some(declared) = chain.declared_limit() {
        if declared != &w {
            return Err(Error::Precondition(format!(
                "declared chain limit {declared:?} differs from the computed interior {w:?}"
            )));
        }
    }
    Ok(w)
}

/// An increasing chain of Niemytzki base sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncreasingChain {
    pub component: ParamBasic,
    #[serde(default = "default_depth")]
    pub depth: u64,
}

/// Limit of an increasing chain of base sets: the base set with the limit
/// parameters, which contains every evaluated member.
pub fn increasing_union_limit(chain: &IncreasingChain) -> Result<BasicOpenSet> {
    ensure_space(SpaceId::Niemytzki, chain.component.space())?;
    let idx = sample_indices(chain.depth);
    let members = idx.iter().map(|n| chain.component.at(*n)).collect::<Result<Vec<_>>>()?;
    for (w, n) in members.windows(2).zip(idx.iter().skip(1)) {
        if !w[0].subset_of(&w[1])? {
            return Err(Error::NonMonotoneChain { index: *n });
        }
    }
    let limit = chain
        .component
        .limit()
        .ok_or_else(|| Error::OscillatingChain("limit parameters do not form a base set".into()))?;
    for (m, n) in members.iter().zip(&idx) {
        if !m.subset_of(&limit)? {
            return Err(Error::OscillatingChain(format!("member {n} is not inside the limit set")));
        }
    }
    Ok(limit)
}

/// Convenience: `1 - 1/n`-style radius expressions used across tests and scenarios.
pub fn approach_from_below(target: Rational, gap: Rational) -> ParamExpr {
    ParamExpr::harmonic(target, -gap, 0)
}

pub fn approach_from_above(target: Rational, gap: Rational) -> ParamExpr {
    ParamExpr::harmonic(target, gap, 0)
}

pub fn scalar_limit(e: &ParamExpr) -> Scalar {
    Scalar::Exact(e.limit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};
    use crate::space::Point;

    fn c(v: Rational) -> ParamExpr {
        ParamExpr::constant(v)
    }

    #[test]
    fn increasing_discs_converge_to_radius_one() {
        let chain = IncreasingChain {
            component: ParamBasic::InteriorDisc { cx: c(int(0)), cy: c(int(1)), r: approach_from_below(int(1), int(1)) },
            depth: 64,
        };
        // r_n = 1 - 1/n starts at 0 for n = 1, which is not a base set.
        assert!(increasing_union_limit(&chain).is_err());
        let chain = IncreasingChain {
            component: ParamBasic::InteriorDisc { cx: c(int(0)), cy: c(int(1)), r: ParamExpr::harmonic(int(1), int(-1), 1) },
            depth: 64,
        };
        let limit = increasing_union_limit(&chain).unwrap();
        assert_eq!(limit, BasicOpenSet::interior_disc(int(0).into(), int(1).into(), int(1).into()).unwrap());
    }

    #[test]
    fn increasing_tangent_discs_and_constant_chain() {
        let chain = IncreasingChain {
            component: ParamBasic::TangentDisc { a: c(int(0)), r: ParamExpr::harmonic(int(1), int(-1), 1) },
            depth: 16,
        };
        assert_eq!(
            increasing_union_limit(&chain).unwrap(),
            BasicOpenSet::tangent_disc(int(0).into(), int(1).into()).unwrap()
        );
        let constant = IncreasingChain {
            component: ParamBasic::InteriorDisc { cx: c(int(0)), cy: c(int(2)), r: c(int(1)) },
            depth: 8,
        };
        assert_eq!(
            increasing_union_limit(&constant).unwrap(),
            BasicOpenSet::interior_disc(int(0).into(), int(2).into(), int(1).into()).unwrap()
        );
    }

    #[test]
    fn shrinking_chain_is_not_increasing() {
        let chain = IncreasingChain {
            component: ParamBasic::TangentDisc { a: c(int(0)), r: approach_from_above(rat(1, 2), rat(1, 2)) },
            depth: 8,
        };
        assert!(matches!(increasing_union_limit(&chain), Err(Error::NonMonotoneChain { .. })));
    }

    #[test]
    fn decreasing_tangent_chain_interior() {
        let chain = DecreasingChain::single(
            ParamBasic::TangentDisc { a: c(int(0)), r: approach_from_above(rat(1, 2), rat(1, 2)) },
            64,
        )
        .unwrap();
        let w = decreasing_chain_interior(&chain).unwrap();
        assert_eq!(w.single().unwrap(), &BasicOpenSet::tangent_disc(int(0).into(), rat(1, 2).into()).unwrap());
        // Boundary oracle: (0,1) is on the circle of B((0,1/2),1/2), so it is
        // outside W but inside every U_n.
        let top = Point::niemytzki_exact(int(0), int(1)).unwrap();
        assert!(!w.member(&top).unwrap());
        assert!(chain.indices().iter().all(|n| chain.at(*n).unwrap().member(&top).unwrap()));
        assert!(w.member(&Point::niemytzki_exact(int(0), rat(99, 100)).unwrap()).unwrap());
    }

    #[test]
    fn vanishing_radii_give_empty_interior() {
        let chain = DecreasingChain::single(
            ParamBasic::TangentDisc { a: c(int(0)), r: ParamExpr::harmonic(int(0), int(1), 0) },
            64,
        )
        .unwrap();
        assert!(decreasing_chain_interior(&chain).unwrap().is_empty());
    }

    #[test]
    fn double_arrow_chain_interior_excludes_the_limit_point() {
        let x_k = ParamExpr::harmonic(rat(1, 10), rat(-1, 10), 1);
        let chain = DecreasingChain::single(
            ParamBasic::ClopenInterval { a: x_k, b: c(rat(1, 5)), include_left_extreme: false, include_right_extreme: false },
            64,
        )
        .unwrap();
        let w = decreasing_chain_interior(&chain).unwrap();
        let witness = Point::double_arrow(rat(1, 10), 0).unwrap();
        assert!(!w.member(&witness).unwrap());
        assert!(w.member(&Point::double_arrow(rat(1, 10), 1).unwrap()).unwrap());
        assert!(chain.indices().iter().all(|n| chain.at(*n).unwrap().closure_member(&witness).unwrap()));
    }

    #[test]
    fn growing_chain_is_rejected() {
        let chain = DecreasingChain::single(
            ParamBasic::HalfOpen { a: c(int(0)), b: ParamExpr::harmonic(int(2), int(-1), 0) },
            8,
        );
        assert!(matches!(chain, Err(Error::NonMonotoneChain { .. })));
    }

    #[test]
    fn chain_json_round_trip_and_declared_limit() {
        let json = r#"{"space":"niemytzki","components":[{"kind":"tangent_disc","a":"0","r":{"base":"1/2","coef":"1","shift":1}}],
            "chain":{"param":"n","depth":32,"limit":{"space":"niemytzki","components":[{"kind":"tangent_disc","a":"0","r":"1/2"}]}}}"#;
        let chain: DecreasingChain = serde_json::from_str(json).unwrap();
        assert_eq!(chain.depth(), 32);
        assert!(decreasing_chain_interior(&chain).is_ok());
        let back: DecreasingChain = serde_json::from_str(&serde_json::to_string(&chain).unwrap()).unwrap();
        assert_eq!(back, chain);
        let wrong = json.replace(r#""r":"1/2""#, r#""r":"1/3""#);
        let chain: DecreasingChain = serde_json::from_str(&wrong).unwrap();
        assert!(decreasing_chain_interior(&chain).is_err());
    }
}
