//! Niemytzki plane geometry kernel.
//!
//! `Shape<N>` is a base set of the plane (an interior disc `B((cx,cy),r)` or
//! a tangent disc `B*(a,r)`) over any [`Field`]. The exact instantiation
//! returns `None` from evaluators whenever an irrational square root would
//! be needed; callers then fall back to `f64`.

use crate::numeric::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape<N> {
    Disc { cx: N, cy: N, r: N },
    Tangent { a: N, r: N },
}

fn two<N: Field>() -> N {
    N::from_int(1) + N::from_int(1)
}

fn sq<N: Field>(v: &N) -> N {
    v.clone() * v.clone()
}

impl<N: Field> Shape<N> {
    /// Center and radius of the open Euclidean disc underlying the set.
    pub fn euclid(&self) -> (N, N, N) {
        match self {
            Shape::Disc { cx, cy, r } => (cx.clone(), cy.clone(), r.clone()),
            Shape::Tangent { a, r } => (a.clone(), r.clone(), r.clone()),
        }
    }

    pub fn radius(&self) -> &N {
        match self {
            Shape::Disc { r, .. } | Shape::Tangent { r, .. } => r,
        }
    }

    fn dist2_to_center(&self, x: &N, y: &N) -> N {
        let (cx, cy, _) = self.euclid();
        sq(&(x.clone() - cx)) + sq(&(y.clone() - cy))
    }

    pub fn is_tangency_point(&self, x: &N, y: &N) -> bool {
        match self {
            Shape::Tangent { a, .. } => x.same(a) && y.same(&N::from_int(0)),
            Shape::Disc { .. } => false,
        }
    }

    pub fn contains(&self, x: &N, y: &N) -> bool {
        if self.is_tangency_point(x, y) {
            return true;
        }
        N::dist_lt(&self.dist2_to_center(x, y), self.radius())
    }

    /// Membership in the closure taken in the Niemytzki topology.
    ///
    /// For both shapes this is the closed Euclidean disc: an interior disc
    /// with `r = cy` picks up its tangency point, a tangent disc already
    /// owns it, and no other axis point is reachable.
    pub fn closure_contains(&self, x: &N, y: &N) -> bool {
        N::dist_le(&self.dist2_to_center(x, y), self.radius())
    }

    /// The kappa-metric value `f_U(x, y)`.
    pub fn kappa(&self, x: &N, y: &N) -> Option<N> {
        if !self.contains(x, y) {
            return Some(N::from_int(0));
        }
        match self {
            Shape::Disc { r, .. } => {
                let d = self.dist2_to_center(x, y).sqrt()?;
                Some(clamp_zero(r.clone() - d))
            }
            Shape::Tangent { a, r } => {
                if self.is_tangency_point(x, y) {
                    return Some(r.clone());
                }
                if r <= y {
                    let d = self.dist2_to_center(x, y).sqrt()?;
                    return Some(clamp_zero(r.clone() - d));
                }
                let shrink = lateral_ratio(a, r, x, y)?;
                Some(clamp_zero(r.clone() - r.clone() * shrink))
            }
        }
    }

    /// The `g` family value for a tangent disc; `None` for interior discs.
    pub fn g(&self, x: &N, y: &N) -> Option<Option<N>> {
        let Shape::Tangent { a, r } = self else {
            return None;
        };
        if self.is_tangency_point(x, y) {
            return Some(Some(N::from_int(1)));
        }
        if !self.contains(x, y) {
            return Some(Some(N::from_int(0)));
        }
        if r <= y {
            let d = match self.dist2_to_center(x, y).sqrt() {
                Some(d) => d,
                None => return Some(None),
            };
            return Some(Some(clamp_zero(r.clone() - d)));
        }
        let shrink = match lateral_ratio(a, r, x, y) {
            Some(s) => s,
            None => return Some(None),
        };
        let base = r.clone() - r.clone() * shrink;
        let scale = ((r.clone() - N::from_int(1)) * y.clone() + r.clone()) / (r.clone() * r.clone());
        Some(Some(clamp_zero(base * scale)))
    }

    /// Exact containment of one base set in another.
    pub fn subset_of(&self, other: &Shape<N>) -> bool {
        match (self, other) {
            (Shape::Tangent { a: a1, r: r1 }, Shape::Tangent { a: a2, r: r2 }) => a1.same(a2) && r1.le_slack(r2),
            (Shape::Tangent { .. }, Shape::Disc { .. }) => false,
            (_, _) => {
                let (x1, y1, r1) = self.euclid();
                let (x2, y2, r2) = other.euclid();
                if !r1.le_slack(&r2) {
                    return false;
                }
                let d2 = sq(&(x1 - x2)) + sq(&(y1 - y2));
                let slack = r2 - r1;
                N::dist_le(&d2, &if slack < N::from_int(0) { N::from_int(0) } else { slack })
            }
        }
    }
}

/// `|x - a| / sqrt(2yr - y^2)` for `0 < y < r`, skipping the root when the
/// numerator vanishes.
fn lateral_ratio<N: Field>(a: &N, r: &N, x: &N, y: &N) -> Option<N> {
    let dx = (x.clone() - a.clone()).abs();
    if dx == N::from_int(0) {
        return Some(N::from_int(0));
    }
    let h = (two::<N>() * y.clone() * r.clone() - y.clone() * y.clone()).sqrt()?;
    Some(dx / h)
}

fn clamp_zero<N: Field>(v: N) -> N {
    if v < N::from_int(0) {
        N::from_int(0)
    } else {
        v
    }
}

/// Open Euclidean disc in the plane, used by the union kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Disc {
    fn strictly_inside(&self, x: f64, y: f64) -> bool {
        let d = (x - self.cx).hypot(y - self.cy);
        d < self.r - 1e-12
    }
}

/// Euclidean distance from `(px, py)` to the complement of the union of the
/// open discs. Zero when the point is outside every disc.
///
/// The nearest complement point lies on an arc of some circle that no
/// other disc covers. Along a circle the distance to a fixed point is
/// unimodal, so on each arc the minimum sits at the radial projection or at
/// an arc endpoint, which is a pairwise circle intersection.
pub fn depth_in_union(discs: &[Disc], px: f64, py: f64) -> f64 {
    if !discs.iter().any(|d| d.strictly_inside(px, py)) {
        return 0.0;
    }
    let uncovered = |i: usize, j: Option<usize>, x: f64, y: f64| {
        discs
            .iter()
            .enumerate()
            .all(|(k, d)| k == i || Some(k) == j || !d.strictly_inside(x, y))
    };
    let mut best = f64::INFINITY;
    for (i, d) in discs.iter().enumerate() {
        let (vx, vy) = (px - d.cx, py - d.cy);
        let len = vx.hypot(vy);
        let (qx, qy) = if len > 1e-15 {
            (d.cx + d.r * vx / len, d.cy + d.r * vy / len)
        } else {
            (d.cx + d.r, d.cy)
        };
        if uncovered(i, None, qx, qy) {
            best = best.min((qx - px).hypot(qy - py));
        }
    }
    for i in 0..discs.len() {
        for j in (i + 1)..discs.len() {
            for (qx, qy) in circle_intersections(&discs[i], &discs[j]) {
                if uncovered(i, Some(j), qx, qy) {
                    best = best.min((qx - px).hypot(qy - py));
                }
            }
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

pub fn circle_intersections(a: &Disc, b: &Disc) -> Vec<(f64, f64)> {
    let (dx, dy) = (b.cx - a.cx, b.cy - a.cy);
    let d = dx.hypot(dy);
    if d < 1e-15 || d > a.r + b.r + 1e-12 || d < (a.r - b.r).abs() - 1e-12 {
        return Vec::new();
    }
    let along = (a.r * a.r - b.r * b.r + d * d) / (2.0 * d);
    let h = (a.r * a.r - along * along).max(0.0).sqrt();
    let (mx, my) = (a.cx + along * dx / d, a.cy + along * dy / d);
    if h == 0.0 {
        return vec![(mx, my)];
    }
    let (ox, oy) = (-dy * h / d, dx * h / d);
    vec![(mx + ox, my + oy), (mx - ox, my - oy)]
}

/// Largest `r` in `[lo, 1]` with `B((a, r), r)` inside the union, by
/// bisection. `lo` must already be feasible. The bracket always starts at
/// `[0, 1]`, so the result grows with the union as well as with `rounds`
/// (blocks of eight halvings).
pub fn largest_tangent_radius(discs: &[Disc], a: f64, lo: f64, rounds: u32) -> f64 {
    let feasible = |r: f64| depth_in_union(discs, a, r) >= r - 1e-13;
    if feasible(1.0) {
        return 1.0;
    }
    let (mut inside, mut outside) = (0.0, 1.0);
    for _ in 0..rounds.saturating_mul(8) {
        let mid = 0.5 * (inside + outside);
        if feasible(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    lo.max(inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, Rational};

    fn tangent(a: Rational, r: Rational) -> Shape<Rational> {
        Shape::Tangent { a, r }
    }

    #[test]
    fn tangent_value_at_axis_point_is_radius() {
        let u = tangent(rat(0, 1), rat(1, 1));
        assert_eq!(u.kappa(&rat(0, 1), &rat(0, 1)), Some(rat(1, 1)));
        assert_eq!(u.kappa(&rat(0, 1), &rat(1, 2)), Some(rat(1, 1)));
    }

    #[test]
    fn disc_value_is_depth() {
        let u = Shape::Disc { cx: rat(0, 1), cy: rat(2, 1), r: rat(1, 1) };
        assert_eq!(u.kappa(&rat(0, 1), &rat(3, 2)), Some(rat(1, 2)));
        assert_eq!(u.kappa(&rat(0, 1), &rat(9, 10)), Some(rat(0, 1)));
    }

    #[test]
    fn irrational_root_falls_back() {
        let u = Shape::Disc { cx: rat(0, 1), cy: rat(2, 1), r: rat(1, 1) };
        assert_eq!(u.kappa(&rat(1, 3), &rat(2, 1)), Some(rat(2, 3)));
        assert_eq!(u.kappa(&rat(1, 2), &rat(5, 2)), None);
    }

    #[test]
    fn g_value_on_vertical_segment() {
        let u = tangent(rat(1, 3), rat(1, 3));
        assert_eq!(u.g(&rat(1, 3), &rat(1, 6)), Some(Some(rat(2, 3))));
        assert_eq!(u.g(&rat(1, 3), &rat(0, 1)), Some(Some(rat(1, 1))));
    }

    #[test]
    fn subset_rules() {
        let big = Shape::Disc { cx: rat(0, 1), cy: rat(2, 1), r: rat(1, 1) };
        let small = Shape::Disc { cx: rat(0, 1), cy: rat(2, 1), r: rat(1, 2) };
        let up = Shape::Disc { cx: rat(0, 1), cy: rat(3, 1), r: rat(1, 1) };
        assert!(small.subset_of(&big));
        assert!(big.subset_of(&big));
        assert!(!big.subset_of(&up));
        assert!(!tangent(rat(0, 1), rat(1, 2)).subset_of(&big));
        assert!(tangent(rat(0, 1), rat(1, 2)).subset_of(&tangent(rat(0, 1), rat(1, 1))));
        assert!(!tangent(rat(1, 10), rat(1, 2)).subset_of(&tangent(rat(0, 1), rat(1, 1))));
    }

    #[test]
    fn depth_of_two_overlapping_discs() {
        let discs = [Disc { cx: 0.0, cy: 2.0, r: 1.0 }, Disc { cx: 0.0, cy: 3.0, r: 1.0 }];
        let d = depth_in_union(&discs, 0.0, 2.5);
        assert!((d - 0.75f64.sqrt()).abs() < 1e-12);
        assert_eq!(depth_in_union(&discs, 5.0, 5.0), 0.0);
        let single = depth_in_union(&discs[..1], 0.25, 2.0);
        assert!((single - 0.75).abs() < 1e-12);
    }

    #[test]
    fn tangent_radius_grows_into_covering_disc() {
        let discs = [Disc { cx: 0.0, cy: 0.25, r: 0.25 }, Disc { cx: 0.0, cy: 0.5, r: 0.5 }];
        let r = largest_tangent_radius(&discs, 0.0, 0.25, 6);
        assert!((r - 0.5).abs() < 1e-12);
    }
}
