//! Harder-Narasimhan polygons: concave integer lattice paths from `(0, 0)`
//! to `(r, d)`, compared under the "lies on or above" order.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::BundleInvariants;
use crate::rational::Rational;

pub type Vertex = (i64, i64);

/// Canonical form: starts at the origin, `x` strictly increasing, segment
/// slopes strictly decreasing (no three collinear vertices), at least two
/// vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HNPolygon {
    vertices: Vec<Vertex>,
}

fn segment_slope(a: Vertex, b: Vertex) -> Result<Rational> {
    let dy = b.1.checked_sub(a.1).ok_or(Error::Overflow("segment slope"))?;
    let dx = b.0.checked_sub(a.0).ok_or(Error::Overflow("segment slope"))?;
    Rational::new(dy, dx)
}

impl HNPolygon {
    /// Validates and canonicalizes. `(0, 0)` is prepended when the first
    /// point lies strictly to the right of the origin.
    pub fn from_vertices(points: &[Vertex]) -> Result<Self> {
        let mut pts: Vec<Vertex> = Vec::with_capacity(points.len() + 1);
        match points.first() {
            None => return Err(Error::BadEndpoints("no vertices".into())),
            Some(&(0, 0)) => {}
            Some(&(x, _)) if x > 0 => pts.push((0, 0)),
            Some(&first) => return Err(Error::BadEndpoints(format!("first vertex {first:?} is not (0, 0)"))),
        }
        pts.extend_from_slice(points);
        if pts.len() < 2 {
            return Err(Error::BadEndpoints("polygon needs a positive-rank endpoint".into()));
        }
        if let Some(w) = pts.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::BadEndpoints(format!(
                "x not strictly increasing at {:?} -> {:?}",
                w[0], w[1]
            )));
        }

        let mut canonical = vec![pts[0]];
        let mut last_slope: Option<Rational> = None;
        for &next in &pts[1..] {
            let tail = *canonical.last().expect("non-empty");
            let s = segment_slope(tail, next)?;
            match last_slope {
                Some(prev) if s > prev => {
                    return Err(Error::NotConvex(format!("slope rises from {prev} to {s} at {tail:?}")));
                }
                Some(prev) if s == prev => {
                    // collinear: drop the interior vertex
                    canonical.pop();
                }
                _ => {}
            }
            canonical.push(next);
            last_slope = Some(segment_slope(canonical[canonical.len() - 2], next)?);
        }
        Ok(HNPolygon { vertices: canonical })
    }

    /// The chord `[(0, 0), (r, d)]`, i.e. the polygon of a semistable bundle.
    pub fn straight(r: i64, d: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidRank(r));
        }
        Ok(HNPolygon {
            vertices: vec![(0, 0), (r, d)],
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn rank(&self) -> i64 {
        self.vertices.last().expect("canonical polygon").0
    }

    pub fn degree(&self) -> i64 {
        self.vertices.last().expect("canonical polygon").1
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_straight(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Segment slopes in order; strictly decreasing.
    pub fn slopes(&self) -> Vec<Rational> {
        self.vertices
            .windows(2)
            // vertices are canonical, and a slope between two stored
            // vertices was already computed once during construction
            .map(|w| segment_slope(w[0], w[1]).expect("validated on construction"))
            .collect()
    }

    /// Segment widths (ranks of the graded pieces).
    pub fn widths(&self) -> Vec<i64> {
        self.vertices.windows(2).map(|w| w[1].0 - w[0].0).collect()
    }

    /// Piecewise-linear height at `x ∈ [0, r]`.
    pub fn height_at(&self, x: i64) -> Result<Rational> {
        if x < 0 || x > self.rank() {
            return Err(Error::BadEndpoints(format!(
                "abscissa {x} outside [0, {}]",
                self.rank()
            )));
        }
        let idx = self.vertices.partition_point(|v| v.0 < x);
        let (x1, y1) = self.vertices[idx];
        if x1 == x {
            return Ok(Rational::from_integer(y1));
        }
        let (x0, y0) = self.vertices[idx - 1];
        let offset = segment_slope((x0, y0), (x1, y1))?.checked_mul_int(x - x0)?;
        Rational::from_integer(y0).checked_add(&offset)
    }

    /// Polygon JSON: `{"r": .., "d": .., "vertices": [[x, y], ...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polygon serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("polygon JSON: {e}")))
    }
}

impl fmt::Debug for HNPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[(0,0),(1,1),(2,0)]`
impl fmt::Display for HNPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({x},{y})")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    r: i64,
    d: i64,
    vertices: Vec<Vertex>,
}

impl Serialize for HNPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonJson {
            r: self.rank(),
            d: self.degree(),
            vertices: self.vertices.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HNPolygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolygonJson::deserialize(deserializer)?;
        let poly = HNPolygon::from_vertices(&raw.vertices).map_err(D::Error::custom)?;
        if (poly.rank(), poly.degree()) != (raw.r, raw.d) {
            return Err(D::Error::custom(format!(
                "declared endpoint ({}, {}) differs from last vertex ({}, {})",
                raw.r,
                raw.d,
                poly.rank(),
                poly.degree()
            )));
        }
        Ok(poly)
    }
}

pub fn polygon_from_vertices(points: &[Vertex]) -> Result<HNPolygon> {
    HNPolygon::from_vertices(points)
}

/// Polygon of a filtration given smallest-rank subobject first, ending with
/// the whole bundle. The induced gradeds must have strictly decreasing
/// slopes.
pub fn polygon_from_filtration(subobjects: &[BundleInvariants]) -> Result<HNPolygon> {
    if subobjects.is_empty() {
        return Err(Error::BadEndpoints("empty filtration".into()));
    }
    let mut pts = vec![(0i64, 0i64)];
    pts.extend(subobjects.iter().map(|s| (s.rank(), s.degree())));
    if let Some(w) = pts.windows(2).find(|w| w[1].0 <= w[0].0) {
        return Err(Error::BadEndpoints(format!(
            "ranks not strictly increasing at {:?} -> {:?}",
            w[0], w[1]
        )));
    }
    let slopes = pts
        .windows(2)
        .map(|w| segment_slope(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = slopes.windows(2).position(|s| s[1] >= s[0]) {
        return Err(Error::NotConvex(format!(
            "graded slopes {} then {} are not strictly decreasing",
            slopes[i],
            slopes[i + 1]
        )));
    }
    Ok(HNPolygon { vertices: pts })
}

/// Polygon with vertices `(i, i d/r + i (r - i)(g - 1))`, `0 ≤ i ≤ r`.
pub fn oper_polygon(r: i64, d: i64, g: i64) -> Result<HNPolygon> {
    if r < 1 {
        return Err(Error::InvalidRank(r));
    }
    if g < 0 {
        return Err(Error::NegativeGenus(g));
    }
    if d % r != 0 {
        return Err(Error::IndivisibleDegree { r, d });
    }
    let mu = d / r;
    let overflow = || Error::Overflow("oper polygon vertex");
    let pts = (0..=r)
        .map(|i| {
            let bulge = i
                .checked_mul(r - i)
                .and_then(|v| v.checked_mul(g - 1))
                .ok_or_else(overflow)?;
            let y = i
                .checked_mul(mu)
                .and_then(|v| v.checked_add(bulge))
                .ok_or_else(overflow)?;
            Ok((i, y))
        })
        .collect::<Result<Vec<_>>>()?;
    HNPolygon::from_vertices(&pts)
}

/// `p ≽ q`: `p` lies on or above `q` over `[0, r]`.
///
/// Both are piecewise linear, so it suffices to compare at the union of
/// their vertex abscissae.
pub fn dominates(p: &HNPolygon, q: &HNPolygon) -> Result<bool> {
    if (p.rank(), p.degree()) != (q.rank(), q.degree()) {
        return Err(Error::EndpointMismatch(p.rank(), p.degree(), q.rank(), q.degree()));
    }
    let mut xs: Vec<i64> = p.vertices.iter().chain(&q.vertices).map(|v| v.0).collect();
    xs.sort_unstable();
    xs.dedup();
    for x in xs {
        if p.height_at(x)? < q.height_at(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(μ_max, μ_min)`: slopes of the first and last segments.
pub fn mu_extremes(p: &HNPolygon) -> (Rational, Rational) {
    let slopes = p.slopes();
    (slopes[0], *slopes.last().expect("at least one segment"))
}

/// `μ_max - μ_min`.
pub fn slope_gap(p: &HNPolygon) -> Result<Rational> {
    let (hi, lo) = mu_extremes(p);
    hi.checked_sub(&lo)
}

/// Whether `p` has the shape of a type-1 oper: unit-width segments whose
/// successive slopes drop by exactly `2g - 2`.
pub fn is_oper_shape(p: &HNPolygon, g: i64) -> Result<bool> {
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if p.widths().iter().any(|&w| w != 1) {
        return Ok(false);
    }
    let step = Rational::from_integer(2 * g - 2);
    let slopes = p.slopes();
    for w in slopes.windows(2) {
        if w[0].checked_sub(&w[1])? != step {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(v: &[Vertex]) -> HNPolygon {
        HNPolygon::from_vertices(v).unwrap()
    }

    fn inv(r: i64, d: i64) -> BundleInvariants {
        BundleInvariants::new(r, d).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(poly(&[(0, 0), (1, 1), (2, 0)]).vertices(), &[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(
            poly(&[(0, 0), (1, 1), (2, 2), (3, 0)]).vertices(),
            &[(0, 0), (2, 2), (3, 0)]
        );
        assert!(matches!(
            polygon_from_vertices(&[(0, 0), (1, 0), (2, 1)]),
            Err(Error::NotConvex(_))
        ));
        // implicit origin
        assert_eq!(poly(&[(1, 1), (2, 0)]).vertices(), &[(0, 0), (1, 1), (2, 0)]);
        // long collinear run collapses to the chord
        assert_eq!(poly(&[(1, 3), (2, 6), (3, 9)]).vertices(), &[(0, 0), (3, 9)]);
    }

    #[test]
    fn construction_errors() {
        for bad in [
            vec![],
            vec![(0, 0)],
            vec![(0, 1), (1, 1)],
            vec![(-1, 0), (1, 0)],
            vec![(0, 0), (2, 0), (2, 1)],
        ] {
            assert!(
                matches!(polygon_from_vertices(&bad), Err(Error::BadEndpoints(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn filtration_polygons() {
        assert_eq!(
            polygon_from_filtration(&[inv(1, 2), inv(2, 2)]).unwrap(),
            poly(&[(0, 0), (1, 2), (2, 2)])
        );
        assert_eq!(
            polygon_from_filtration(&[inv(4, 7)]).unwrap(),
            HNPolygon::straight(4, 7).unwrap()
        );
        assert!(matches!(
            polygon_from_filtration(&[inv(1, 0), inv(2, 3)]),
            Err(Error::NotConvex(_))
        ));
        assert!(matches!(
            polygon_from_filtration(&[inv(2, 0), inv(2, 3)]),
            Err(Error::BadEndpoints(_))
        ));
        // equal graded slopes are not a Harder-Narasimhan filtration
        assert!(matches!(
            polygon_from_filtration(&[inv(1, 1), inv(2, 2)]),
            Err(Error::NotConvex(_))
        ));
    }

    #[test]
    fn oper_polygons() {
        assert_eq!(oper_polygon(2, 0, 2).unwrap().vertices(), &[(0, 0), (1, 1), (2, 0)]);
        assert_eq!(
            oper_polygon(3, 3, 2).unwrap().vertices(),
            &[(0, 0), (1, 3), (2, 4), (3, 3)]
        );
        assert_eq!(oper_polygon(5, 10, 1).unwrap().vertices(), &[(0, 0), (5, 10)]);
        assert_eq!(oper_polygon(2, 1, 2), Err(Error::IndivisibleDegree { r: 2, d: 1 }));
        assert_eq!(oper_polygon(1, 7, 3).unwrap(), HNPolygon::straight(1, 7).unwrap());
        // genus 0 bends the other way
        assert!(matches!(oper_polygon(3, 0, 0), Err(Error::NotConvex(_))));
    }

    #[test]
    fn dominance_examples() {
        let oper = oper_polygon(2, 0, 2).unwrap();
        let chord = HNPolygon::straight(2, 0).unwrap();
        assert!(dominates(&oper, &chord).unwrap());
        assert!(!dominates(&chord, &oper).unwrap());
        assert!(dominates(&poly(&[(0, 0), (1, 2), (2, 0)]), &poly(&[(0, 0), (1, 1), (2, 0)])).unwrap());
        assert_eq!(
            dominates(&oper, &HNPolygon::straight(2, 1).unwrap()),
            Err(Error::EndpointMismatch(2, 0, 2, 1))
        );
    }

    #[test]
    fn dominance_between_vertices() {
        // [(0,0),(2,2),(4,0)] vs [(0,0),(1,1),(3,2),(4,0)]: at x=3 heights 1 < 2
        let a = poly(&[(0, 0), (2, 2), (4, 0)]);
        let b = poly(&[(0, 0), (1, 1), (3, 2), (4, 0)]);
        assert!(!dominates(&a, &b).unwrap());
        assert!(!dominates(&b, &a).unwrap());
        assert_eq!(b.height_at(2).unwrap(), q(3, 2));
    }

    #[test]
    fn extremes() {
        let (hi, lo) = mu_extremes(&poly(&[(0, 0), (1, 2), (2, 0)]));
        assert_eq!((hi, lo), (q(2, 1), q(-2, 1)));
        let (hi, lo) = mu_extremes(&HNPolygon::straight(3, 2).unwrap());
        assert_eq!((hi, lo), (q(2, 3), q(2, 3)));
        for (p, g, d) in [(2, 2, 0), (3, 2, 1), (5, 3, -2), (7, 2, 3)] {
            let oper = oper_polygon(p, p * d, g).unwrap();
            assert_eq!(slope_gap(&oper).unwrap(), Rational::from_integer((p - 1) * (2 * g - 2)));
        }
    }

    #[test]
    fn oper_shape() {
        assert!(is_oper_shape(&oper_polygon(3, 0, 2).unwrap(), 2).unwrap());
        assert!(!is_oper_shape(&HNPolygon::straight(2, 0).unwrap(), 2).unwrap());
        assert!(!is_oper_shape(&poly(&[(0, 0), (1, 2), (2, 0)]), 2).unwrap());
        assert_eq!(
            is_oper_shape(&HNPolygon::straight(2, 0).unwrap(), 1),
            Err(Error::GenusTooSmall(1))
        );
    }

    #[test]
    fn json_schema() {
        let p = oper_polygon(2, 0, 2).unwrap();
        assert_eq!(p.to_json(), r#"{"r":2,"d":0,"vertices":[[0,0],[1,1],[2,0]]}"#);
        assert_eq!(HNPolygon::from_json(&p.to_json()).unwrap(), p);
        assert!(HNPolygon::from_json(r#"{"r":2,"d":1,"vertices":[[0,0],[1,1],[2,0]]}"#).is_err());
        assert!(HNPolygon::from_json(r#"{"r":2,"d":1,"vertices":[[0,0],[1,0],[2,1]]}"#).is_err());
    }

    /// Random concave polygon from a width/slope-drop description.
    fn concave() -> impl Strategy<Value = HNPolygon> {
        (-6i64..6, prop::collection::vec((1i64..3, 1i64..4), 0..4)).prop_map(|(s0, steps)| {
            let mut pts = vec![(0, 0)];
            let (mut x, mut y, mut s) = (0, 0, s0);
            let mut widths = vec![1];
            widths.extend(steps.iter().map(|&(w, _)| w));
            for (i, w) in widths.into_iter().enumerate() {
                if i > 0 {
                    s -= steps[i - 1].1;
                }
                x += w;
                y += s * w;
                pts.push((x, y));
            }
            HNPolygon::from_vertices(&pts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn canonicalization_idempotent(p in concave()) {
            prop_assert_eq!(HNPolygon::from_vertices(p.vertices()).unwrap(), p.clone());
            prop_assert!(p.slopes().windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn chord_is_minimal(p in concave()) {
            let chord = HNPolygon::straight(p.rank(), p.degree()).unwrap();
            prop_assert!(dominates(&p, &chord).unwrap());
            prop_assert!(dominates(&p, &p).unwrap());
        }

        #[test]
        fn oper_identity(r in 1i64..6, k in -3i64..4, g in 2i64..5, p in concave()) {
            let d = r * k;
            let oper = oper_polygon(r, d, g).unwrap();
            prop_assert!(is_oper_shape(&oper, g).unwrap());
            let expected = p.degree() % p.rank() == 0 && p == oper_polygon(p.rank(), p.degree(), g).unwrap();
            prop_assert_eq!(is_oper_shape(&p, g).unwrap(), expected);
        }

        #[test]
        fn filtration_endpoint_conservation(p in concave()) {
            let subs: Vec<BundleInvariants> = p.vertices()[1..].iter().map(|&(x, y)| inv(x, y)).collect();
            let rebuilt = polygon_from_filtration(&subs).unwrap();
            prop_assert_eq!((rebuilt.rank(), rebuilt.degree()), (subs.last().unwrap().rank(), subs.last().unwrap().degree()));
        }
    }
}
