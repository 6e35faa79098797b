//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use frobstrat::enumerate::AdmissibilityConstraints;
use frobstrat::{HNPolygon, Rational};

/// Generate-and-filter oracle: every choice of at most one vertex per
/// interior abscissa inside a bounding box, kept when the path is strictly
/// concave and meets the gap, window and vertex constraints. Slopes are
/// compared by cross-multiplication in i128, independently of `Rational`.
pub fn brute_force_family(r: i64, d: i64, c: &AdmissibilityConstraints) -> Vec<Vec<(i64, i64)>> {
    let (lo, hi) = c.slope_window;
    let gap = c.max_gap;
    let y_min = r * lo.floor().min(0);
    let y_max = r * hi.ceil().max(0);
    let choices: Vec<i64> = (y_min..=y_max).collect();

    let interior = (r - 1) as usize;
    // None = no vertex at that abscissa
    let mut picks: Vec<Option<usize>> = vec![None; interior];
    let mut out = Vec::new();
    loop {
        let mut path = vec![(0i64, 0i64)];
        for (i, pick) in picks.iter().enumerate() {
            if let Some(k) = pick {
                path.push((i as i64 + 1, choices[*k]));
            }
        }
        path.push((r, d));
        if admissible_path(&path, gap, lo, hi, c.max_vertices) {
            out.push(path);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == interior {
                out.sort();
                return out;
            }
            picks[i] = match picks[i] {
                None => Some(0),
                Some(k) if k + 1 < choices.len() => Some(k + 1),
                Some(_) => None,
            };
            if picks[i].is_some() {
                break;
            }
            i += 1;
        }
    }
}

pub fn admissible_path(path: &[(i64, i64)], gap: Rational, lo: Rational, hi: Rational, max_vertices: usize) -> bool {
    if path.len() > max_vertices {
        return false;
    }
    let segs: Vec<(i128, i128)> = path
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) as i128, (w[1].0 - w[0].0) as i128))
        .collect();
    let (ln, ld) = (lo.numer() as i128, lo.denom() as i128);
    let (hn, hd) = (hi.numer() as i128, hi.denom() as i128);
    let (gn, gd) = (gap.numer() as i128, gap.denom() as i128);
    for &(dy, dx) in &segs {
        // lo <= dy/dx <= hi
        if ln * dx > dy * ld || dy * hd > hn * dx {
            return false;
        }
    }
    for w in segs.windows(2) {
        let ((dy1, dx1), (dy2, dx2)) = (w[0], w[1]);
        let drop = dy1 * dx2 - dy2 * dx1; // (s1 - s2) * dx1 * dx2
        if drop <= 0 || drop * gd > gn * dx1 * dx2 {
            return false;
        }
    }
    true
}

/// Height of `p` at integer `x` as an exact fraction `(num, den)`, den > 0.
pub fn height(p: &HNPolygon, x: i64) -> (i128, i128) {
    let v = p.vertices();
    let i = v.iter().position(|&(vx, _)| vx >= x).expect("x within [0, r]");
    if v[i].0 == x {
        return (v[i].1 as i128, 1);
    }
    let ((x0, y0), (x1, y1)) = (v[i - 1], v[i]);
    let den = (x1 - x0) as i128;
    (y0 as i128 * den + (y1 - y0) as i128 * (x - x0) as i128, den)
}

/// Dominance checked at every integer abscissa.
pub fn dominates_dense(a: &HNPolygon, b: &HNPolygon) -> bool {
    (0..=a.rank()).all(|x| {
        let ((an, ad), (bn, bd)) = (height(a, x), height(b, x));
        an * bd >= bn * ad
    })
}
