//! Newton polygons over exact rationals.
//!
//! The polygon of `Σ c_i z^i` is the lower convex hull of the points
//! `(i, v(c_i))`; a hull segment of slope `s` and horizontal width `w`
//! accounts for exactly `w` roots of valuation `-s`. Points with `v = ∞`
//! never constrain the hull; an infinite run of them at the low end of the
//! coefficient list records roots at zero.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::valuation::{rat_int, serde_rat, serde_rat_vec, Rat, ValExt};

/// One hull segment: slope and horizontal width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "serde_rat")]
    pub slope: Rat,
    pub width: u32,
}

/// Lower convex hull of a finite point set with integer abscissae.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Hull vertices, abscissa strictly increasing. Collinear interior points
    /// are not vertices: slopes strictly increase segment to segment.
    #[serde(with = "serde_vertices")]
    pub vertices: Vec<(u32, Rat)>,
    pub segments: Vec<Segment>,
}

mod serde_vertices {
    use crate::valuation::{parse_rat, rat_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[(u32, Rat)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(x, y)| (*x, rat_string(y))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(u32, Rat)>, D::Error> {
        let v = Vec::<(u32, String)>::deserialize(d)?;
        v.into_iter()
            .map(|(x, y)| Ok((x, parse_rat(&y).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

/// Lower convex hull of `(x, v)` points; `v = ∞` entries are ignored.
///
/// Requires at least two finite points and pairwise distinct abscissae.
pub fn lower_hull(points: &[(u32, ValExt)]) -> Result<NewtonPolygon> {
    let mut finite: Vec<(u32, Rat)> = Vec::with_capacity(points.len());
    for (x, v) in points {
        if let ValExt::Finite(r) = v {
            finite.push((*x, r.clone()));
        }
    }
    finite.sort_by_key(|(x, _)| *x);
    for w in finite.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateAbscissa(w[0].0));
        }
    }
    if finite.len() < 2 {
        return Err(Error::FewerThanTwoFinitePoints);
    }

    // Monotone chain. A middle vertex survives only on a strict right turn,
    // so collinear points are dropped and slopes end up strictly increasing.
    let mut hull: Vec<(u32, Rat)> = Vec::with_capacity(finite.len());
    for (x, y) in finite {
        let x = i64::from(x);
        while hull.len() >= 2 {
            let (x1, y1) = {
                let p = &hull[hull.len() - 2];
                (i64::from(p.0), p.1.clone())
            };
            let (x2, y2) = {
                let p = &hull[hull.len() - 1];
                (i64::from(p.0), p.1.clone())
            };
            // slope(p1,p2) >= slope(p2,p3)  <=>  (y2-y1)(x3-x2) >= (y3-y2)(x2-x1)
            let lhs = (&y2 - &y1) * rat_int(x - x2);
            let rhs = (&y - &y2) * rat_int(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x as u32, y));
    }

    let segments = hull
        .windows(2)
        .map(|w| {
            let run = i64::from(w[1].0) - i64::from(w[0].0);
            Segment {
                slope: (&w[1].1 - &w[0].1) / rat_int(run),
                width: run as u32,
            }
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// Multiset of valuation values with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValMultiset(BTreeMap<ValExt, u64>);

impl ValMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: ValExt, mult: u64) {
        if mult > 0 {
            *self.0.entry(v).or_insert(0) += mult;
        }
    }

    pub fn get(&self, v: &ValExt) -> u64 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn contains(&self, v: &ValExt) -> bool {
        self.get(v) > 0
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ValExt, u64)> {
        self.0.iter().map(|(v, m)| (v, *m))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total multiplicity of entries strictly greater than `v`.
    pub fn count_above(&self, v: &ValExt) -> u64 {
        self.0
            .iter()
            .filter(|(k, _)| *k > v)
            .map(|(_, m)| m)
            .sum()
    }

    /// Total multiplicity of entries strictly less than `v`.
    pub fn count_below(&self, v: &ValExt) -> u64 {
        self.0
            .iter()
            .filter(|(k, _)| *k < v)
            .map(|(_, m)| m)
            .sum()
    }
}

impl FromIterator<(ValExt, u64)> for ValMultiset {
    fn from_iter<I: IntoIterator<Item = (ValExt, u64)>>(iter: I) -> Self {
        let mut ms = ValMultiset::new();
        for (v, m) in iter {
            ms.add(v, m);
        }
        ms
    }
}

impl std::fmt::Display for ValMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: x{m}")?;
        }
        write!(f, "}}")
    }
}

/// Root-valuation readout of a coefficient-valuation list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootValuations {
    /// Roots at zero: one per leading `∞`-valuation run entry at indices
    /// `0..zero_roots` of the coefficient list.
    pub zero_roots: u32,
    /// Finite root valuations from hull segments (`-slope`, multiplicity = width).
    pub finite: ValMultiset,
    /// Valuations carried by width-1 segments; such a root is rational over
    /// the coefficient field.
    #[serde(with = "serde_rat_vec")]
    pub ground_field: Vec<Rat>,
}

/// Root valuations of a polynomial given as `(i, v(c_i))` for `i = 0..=deg`.
///
/// The leading coefficient must have finite valuation. Returns `deg` root
/// valuations in total: `zero_roots` at `∞` plus the hull multiset.
pub fn root_valuations(points: &[(u32, ValExt)]) -> Result<RootValuations> {
    if points.is_empty() || points.iter().all(|(_, v)| v.is_infinite()) {
        return Err(Error::ZeroPolynomial);
    }
    let deg = points.iter().map(|(x, _)| *x).max().unwrap();
    let lead = points.iter().find(|(x, _)| *x == deg).unwrap();
    if lead.1.is_infinite() {
        return Err(Error::InfiniteLeadingCoefficient);
    }
    let low = points
        .iter()
        .filter(|(_, v)| !v.is_infinite())
        .map(|(x, _)| *x)
        .min()
        .unwrap();

    if low == deg {
        // Monomial times a unit: every root sits at zero.
        return Ok(RootValuations {
            zero_roots: deg,
            finite: ValMultiset::new(),
            ground_field: Vec::new(),
        });
    }

    let hull = lower_hull(points)?;
    let mut finite = ValMultiset::new();
    let mut ground_field = Vec::new();
    for seg in &hull.segments {
        let val = -seg.slope.clone();
        finite.add(ValExt::Finite(val.clone()), u64::from(seg.width));
        if seg.width == 1 {
            ground_field.push(val);
        }
    }
    Ok(RootValuations { zero_roots: low, finite, ground_field })
}

impl RootValuations {
    /// Full multiset including the `∞` entries for roots at zero.
    pub fn multiset(&self) -> ValMultiset {
        let mut ms = self.finite.clone();
        ms.add(ValExt::Infinity, u64::from(self.zero_roots));
        ms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::rat;
    use proptest::prelude::*;

    fn pts(raw: &[(u32, (i64, i64))]) -> Vec<(u32, ValExt)> {
        raw.iter()
            .map(|(x, (n, d))| (*x, ValExt::Finite(rat(*n, *d))))
            .collect()
    }

    #[test]
    fn hull_examples() {
        // Three points, two segments of slopes -1 and 0.
        let h = lower_hull(&pts(&[(0, (1, 1)), (1, (0, 1)), (2, (0, 1))])).unwrap();
        assert_eq!(
            h.vertices,
            vec![(0, rat_int(1)), (1, rat_int(0)), (2, rat_int(0))]
        );
        assert_eq!(
            h.segments,
            vec![
                Segment { slope: rat_int(-1), width: 1 },
                Segment { slope: rat_int(0), width: 1 }
            ]
        );

        // Middle point above the chord contributes nothing.
        let h = lower_hull(&pts(&[(0, (0, 1)), (1, (5, 1)), (3, (-1, 1))])).unwrap();
        assert_eq!(h.vertices, vec![(0, rat_int(0)), (3, rat_int(-1))]);
        assert_eq!(h.segments, vec![Segment { slope: rat(-1, 3), width: 3 }]);

        // Infinite points are ignored entirely.
        let mut with_inf = pts(&[(0, (2, 1)), (3, (0, 1))]);
        with_inf.insert(1, (1, ValExt::Infinity));
        with_inf.insert(2, (2, ValExt::Infinity));
        let h = lower_hull(&with_inf).unwrap();
        assert_eq!(h.vertices.len(), 2);
        assert_eq!(h.segments, vec![Segment { slope: rat(-2, 3), width: 3 }]);

        // Collinear interior points are not vertices.
        let h = lower_hull(&pts(&[(0, (2, 1)), (1, (1, 1)), (2, (0, 1))])).unwrap();
        assert_eq!(h.vertices, vec![(0, rat_int(2)), (2, rat_int(0))]);

        assert!(matches!(
            lower_hull(&[(0, ValExt::Infinity), (1, ValExt::Finite(rat_int(0)))]),
            Err(Error::FewerThanTwoFinitePoints)
        ));
        assert!(matches!(
            lower_hull(&pts(&[(1, (0, 1)), (1, (2, 1)), (2, (0, 1))])),
            Err(Error::DuplicateAbscissa(1))
        ));
    }

    #[test]
    fn root_valuation_examples() {
        // z^2 + 2yz - d with v(y) = -1, v(d) = 1 over Q_2:
        // hull of (0,1),(1,0),(2,0); both segments width 1.
        let rv = root_valuations(&pts(&[(0, (1, 1)), (1, (0, 1)), (2, (0, 1))])).unwrap();
        assert_eq!(rv.zero_roots, 0);
        assert_eq!(rv.finite.get(&ValExt::Finite(rat_int(1))), 1);
        assert_eq!(rv.finite.get(&ValExt::Finite(rat_int(0))), 1);
        assert_eq!(rv.ground_field, vec![rat_int(1), rat_int(0)]);

        // x^p - x - c with v(c) = -p/(p-1), p = 2: hull of (0,-2),(1,0),(2,0)
        // is one segment of slope 1; both roots have valuation -1.
        let rv = root_valuations(&pts(&[(0, (-2, 1)), (1, (0, 1)), (2, (0, 1))])).unwrap();
        assert_eq!(rv.finite.get(&ValExt::Finite(rat_int(-1))), 2);
        assert!(rv.ground_field.is_empty());

        // Trailing zero coefficients: z^4 - 2z^2 over Q_2 has points
        // (0,inf),(1,inf),(2,1),(3,inf),(4,0): two roots at zero, two of v 1/2.
        let points = vec![
            (0, ValExt::Infinity),
            (1, ValExt::Infinity),
            (2, ValExt::Finite(rat_int(1))),
            (3, ValExt::Infinity),
            (4, ValExt::Finite(rat_int(0))),
        ];
        let rv = root_valuations(&points).unwrap();
        assert_eq!(rv.zero_roots, 2);
        assert_eq!(rv.finite.get(&ValExt::Finite(rat(1, 2))), 2);
        let ms = rv.multiset();
        assert_eq!(ms.get(&ValExt::Infinity), 2);
        assert_eq!(ms.total(), 4);

        // Monomial: all roots at zero.
        let rv = root_valuations(&[
            (0, ValExt::Infinity),
            (1, ValExt::Infinity),
            (2, ValExt::Finite(rat_int(3))),
        ])
        .unwrap();
        assert_eq!(rv.zero_roots, 2);
        assert!(rv.finite.is_empty());

        assert!(matches!(
            root_valuations(&[(0, ValExt::Infinity), (1, ValExt::Infinity)]),
            Err(Error::ZeroPolynomial)
        ));
        let bad = vec![(0, ValExt::Finite(rat_int(0))), (2, ValExt::Infinity)];
        assert!(matches!(
            root_valuations(&bad),
            Err(Error::InfiniteLeadingCoefficient)
        ));
    }

    fn arb_points() -> impl Strategy<Value = Vec<(u32, ValExt)>> {
        prop::collection::vec((-40i64..40, 1i64..12, prop::bool::ANY), 2..10).prop_map(|raw| {
            raw.into_iter()
                .enumerate()
                .map(|(i, (n, d, inf))| {
                    let v = if inf && i > 0 && i + 1 < 9 {
                        ValExt::Infinity
                    } else {
                        ValExt::Finite(rat(n, d))
                    };
                    (i as u32, v)
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        // Every finite input point lies on or above the hull, and feeding the
        // vertices back in reproduces the hull.
        #[test]
        fn hull_supports_and_idempotent(points in arb_points()) {
            let Ok(h) = lower_hull(&points) else { return Ok(()) };
            for (x, v) in &points {
                let ValExt::Finite(y) = v else { continue };
                // Find hull value at x by walking segments.
                let (x0, y0) = h.vertices.first().unwrap();
                let (xk, _) = h.vertices.last().unwrap();
                prop_assert!(x >= x0 && x <= xk);
                let mut hull_y = y0.clone();
                let mut cx = i64::from(*x0);
                for (seg, vtx) in h.segments.iter().zip(h.vertices.windows(2)) {
                    let nx = i64::from(vtx[1].0);
                    let upto = nx.min(i64::from(*x));
                    hull_y += seg.slope.clone() * rat_int(upto - cx);
                    cx = upto;
                    if cx == i64::from(*x) { break; }
                }
                prop_assert!(*y >= hull_y);
            }
            let again = lower_hull(
                &h.vertices.iter().map(|(x, y)| (*x, ValExt::Finite(y.clone()))).collect::<Vec<_>>()
            ).unwrap();
            prop_assert_eq!(&again.vertices, &h.vertices);

            // Slopes strictly increase.
            for w in h.segments.windows(2) {
                prop_assert!(w[0].slope < w[1].slope);
            }
            // Widths sum to the horizontal extent.
            let extent = h.vertices.last().unwrap().0 - h.vertices.first().unwrap().0;
            let width_sum: u32 = h.segments.iter().map(|s| s.width).sum();
            prop_assert_eq!(width_sum, extent);
        }
    }
}
