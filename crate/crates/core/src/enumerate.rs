//! Exhaustive enumeration of concave lattice polygons under slope-gap and
//! slope-window constraints.
//!
//! The search walks vertices left to right. Each new segment must have a
//! slope strictly below the previous one, at most `max_gap` below it, and
//! inside the slope window. A partial path is pruned once the endpoint
//! `(r, d)` can no longer be reached with smaller slopes that stay above
//! the window floor.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::CurveContext;
use crate::polygon::{HNPolygon, Vertex};
use crate::rational::Rational;

/// Default number of lattice extensions a single enumeration may perform.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityConstraints {
    /// Largest allowed drop between consecutive segment slopes.
    pub max_gap: Rational,
    /// Inclusive `(lower, upper)` bounds on every segment slope.
    pub slope_window: (Rational, Rational),
    /// Cap on the number of vertices, endpoints included.
    pub max_vertices: usize,
}

impl AdmissibilityConstraints {
    pub fn new(max_gap: Rational, lower: Rational, upper: Rational, max_vertices: usize) -> Self {
        AdmissibilityConstraints {
            max_gap,
            slope_window: (lower, upper),
            max_vertices,
        }
    }

    /// Checks well-formedness against the target endpoint `(r, d)`.
    pub fn validate(&self, r: i64, d: i64) -> Result<()> {
        if r < 1 {
            return Err(Error::InvalidRank(r));
        }
        if self.max_gap.is_negative() {
            return Err(Error::InvalidConstraints(format!(
                "max_gap {} is negative",
                self.max_gap
            )));
        }
        let mu = Rational::new(d, r)?;
        let (lo, hi) = self.slope_window;
        if !(lo <= mu && mu <= hi) {
            return Err(Error::InvalidConstraints(format!(
                "slope window [{lo}, {hi}] does not contain d/r = {mu}"
            )));
        }
        if self.max_vertices < 2 {
            return Err(Error::InvalidConstraints("max_vertices must be at least 2".into()));
        }
        Ok(())
    }
}

/// Constraints modeling Harder-Narasimhan polygons of semistable local
/// systems of rank `r` and degree `d` on a curve of genus `g ≥ 2`.
///
/// Consecutive graded slopes differ by at most `2g - 2`. A polygon has at
/// most `r` segments, so `μ_max - μ_min ≤ (r - 1)(2g - 2)`. The rank-weighted
/// mean slope is `d / r`, which lies in `[μ_min, μ_max]`; hence every slope
/// is within `(r - 1)(2g - 2)` of `d / r`. That window bounds the search.
pub fn admissible_constraints(r: i64, d: i64, ctx: CurveContext) -> Result<AdmissibilityConstraints> {
    ctx.require_genus_at_least_two()?;
    if r < 1 {
        return Err(Error::InvalidRank(r));
    }
    let gap = Rational::from_integer(ctx.canonical_degree());
    let mu = Rational::new(d, r)?;
    let radius = gap.checked_mul_int(r - 1)?;
    let max_vertices = usize::try_from(r).map_err(|_| Error::Overflow("vertex cap"))? + 1;
    Ok(AdmissibilityConstraints::new(
        gap,
        mu.checked_sub(&radius)?,
        mu.checked_add(&radius)?,
        max_vertices,
    ))
}

/// Output of a budgeted enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Lexicographically sorted by vertex list.
    pub polygons: Vec<HNPolygon>,
    /// Lattice extensions visited.
    pub nodes: u64,
}

pub fn enumerate_polygons(r: i64, d: i64, c: &AdmissibilityConstraints) -> Result<Vec<HNPolygon>> {
    enumerate_with_cap(r, d, c, DEFAULT_NODE_CAP).map(|e| e.polygons)
}

pub fn enumerate_with_cap(r: i64, d: i64, c: &AdmissibilityConstraints, node_cap: u64) -> Result<Enumeration> {
    c.validate(r, d)?;
    let search = Search {
        r,
        d,
        c,
        node_cap,
        nodes: AtomicU64::new(0),
    };

    let first = search.extensions((0, 0), None, 1)?;
    let branches = first
        .into_par_iter()
        .map(|(v, s)| {
            let mut path = vec![(0, 0), v];
            let mut out = Vec::new();
            search.descend(&mut path, s, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut polygons: Vec<HNPolygon> = branches.into_iter().flatten().collect();
    polygons.sort();
    Ok(Enumeration {
        polygons,
        nodes: search.nodes.load(Ordering::Relaxed),
    })
}

pub fn admissible_polygons(r: i64, d: i64, ctx: CurveContext) -> Result<Vec<HNPolygon>> {
    admissible_with_cap(r, d, ctx, DEFAULT_NODE_CAP).map(|e| e.polygons)
}

pub fn admissible_with_cap(r: i64, d: i64, ctx: CurveContext, node_cap: u64) -> Result<Enumeration> {
    enumerate_with_cap(r, d, &admissible_constraints(r, d, ctx)?, node_cap)
}

struct Search<'a> {
    r: i64,
    d: i64,
    c: &'a AdmissibilityConstraints,
    node_cap: u64,
    nodes: AtomicU64,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.node_cap {
            return Err(Error::BudgetExceeded(self.node_cap));
        }
        Ok(())
    }

    /// Next vertices reachable from `from`, paired with the new segment
    /// slope. `count` is the number of vertices already on the path.
    fn extensions(&self, from: Vertex, prev: Option<Rational>, count: usize) -> Result<Vec<(Vertex, Rational)>> {
        let (lo, hi) = self.c.slope_window;
        let lower = match prev {
            Some(s) => lo.max(s.checked_sub(&self.c.max_gap)?),
            None => lo,
        };
        let upper = match prev {
            Some(s) => hi.min(s),
            None => hi,
        };
        if lower > upper {
            return Ok(Vec::new());
        }
        // room for the interior vertex plus the endpoint
        let interior_allowed = count + 2 <= self.c.max_vertices;

        let mut out = Vec::new();
        for x in from.0 + 1..=self.r {
            let dx = x - from.0;
            let base = Rational::from_integer(from.1);
            let (y_min, y_max) = if x == self.r {
                (self.d, self.d)
            } else if interior_allowed {
                (
                    base.checked_add(&lower.checked_mul_int(dx)?)?.ceil(),
                    base.checked_add(&upper.checked_mul_int(dx)?)?.floor(),
                )
            } else {
                continue;
            };
            for y in y_min..=y_max {
                let s = Rational::new(y - from.1, dx)?;
                if s < lower || s > upper || prev.is_some_and(|p| s >= p) {
                    continue;
                }
                if x < self.r && !self.can_finish((x, y), s)? {
                    continue;
                }
                self.tick()?;
                out.push(((x, y), s));
            }
        }
        Ok(out)
    }

    /// Remaining slopes lie in `[lo, s)`, so the remaining rise over width
    /// `w` lies in `[lo w, s w)`.
    fn can_finish(&self, at: Vertex, s: Rational) -> Result<bool> {
        let w = self.r - at.0;
        let rise = Rational::from_integer(self.d - at.1);
        let floor = self.c.slope_window.0.checked_mul_int(w)?;
        let ceiling = s.checked_mul_int(w)?;
        Ok(floor <= rise && rise < ceiling)
    }

    fn descend(&self, path: &mut Vec<Vertex>, slope: Rational, out: &mut Vec<HNPolygon>) -> Result<()> {
        let tail = *path.last().expect("path starts at origin");
        if tail.0 == self.r {
            debug_assert_eq!(tail.1, self.d);
            out.push(HNPolygon::from_vertices(path)?);
            return Ok(());
        }
        for (v, s) in self.extensions(tail, Some(slope), path.len())? {
            path.push(v);
            self.descend(path, s, out)?;
            path.pop();
        }
        Ok(())
    }
}
