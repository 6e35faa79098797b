//! Symbolic determinant of a pushforward along a finite morphism of curves.
//!
//! For `f: X → Y` finite and `E` on `X` with `det E = O_X(Σ n_i P_i)`,
//! `det f_* E = det(f_* O_X)^{rk E} ⊗ O_Y(Σ n_i f(P_i))`. Points are opaque
//! tokens and `f` is given by its action on tokens.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `det(f_* O_X)^power ⊗ O_Y(Σ mult · point)` in canonical form: zero
/// multiplicities never appear in `pushed_points`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FormalDivisorExpr {
    pub det_structure_power: u64,
    pub pushed_points: BTreeMap<String, i64>,
}

impl fmt::Display for FormalDivisorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "det(f_*O_X)^{}", self.det_structure_power)?;
        if !self.pushed_points.is_empty() {
            f.write_str(" ⊗ O_Y(")?;
            for (i, (pt, n)) in self.pushed_points.iter().enumerate() {
                match (i, *n < 0) {
                    (0, false) => write!(f, "{n}*{pt}")?,
                    (_, true) => write!(f, "-{}*{pt}", n.unsigned_abs())?,
                    (_, false) => write!(f, "+{n}*{pt}")?,
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Pushes the determinant divisor forward. Entries may repeat a point; their
/// multiplicities are summed, as are those of points with a common image.
pub fn pushforward_determinant<I, T, F>(rank: i64, det_divisor: I, point_map: F) -> Result<FormalDivisorExpr>
where
    I: IntoIterator<Item = (T, i64)>,
    T: AsRef<str>,
    F: Fn(&str) -> Option<String>,
{
    if rank < 1 {
        return Err(Error::InvalidRank(rank));
    }
    let mut pushed: BTreeMap<String, i64> = BTreeMap::new();
    for (point, mult) in det_divisor {
        let point = point.as_ref();
        let image = point_map(point).ok_or_else(|| Error::PointNotMapped(point.to_string()))?;
        let slot = pushed.entry(image).or_insert(0);
        *slot = slot.checked_add(mult).ok_or(Error::Overflow("divisor multiplicity"))?;
    }
    pushed.retain(|_, n| *n != 0);
    Ok(FormalDivisorExpr {
        det_structure_power: rank as u64,
        pushed_points: pushed,
    })
}

/// Convenience form taking the point map as a lookup table.
pub fn pushforward_determinant_with_table<I, T>(
    rank: i64,
    det_divisor: I,
    table: &BTreeMap<String, String>,
) -> Result<FormalDivisorExpr>
where
    I: IntoIterator<Item = (T, i64)>,
    T: AsRef<str>,
{
    pushforward_determinant(rank, det_divisor, |pt| table.get(pt).cloned())
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

fn check_token(tok: &str, ctx: &str) -> Result<()> {
    if tok.is_empty() || !tok.chars().all(is_token_char) {
        return Err(Error::Parse(format!("bad point token {tok:?} in {ctx:?}")));
    }
    Ok(())
}

/// Parses `[+|-]n*P ((+|-)n*P)*`, e.g. `2*P1-1*P2`. The empty string is the
/// zero divisor. Repeated points are kept as separate entries.
pub fn parse_divisor(s: &str) -> Result<Vec<(String, i64)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |why: &str| Error::Parse(format!("divisor {s:?}: {why}"));

    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if first => (false, rest),
            _ => return Err(bad("expected '+' or '-' between terms")),
        };
        first = false;
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (coeff, token) = term
            .split_once('*')
            .ok_or_else(|| bad("term must be coefficient*token"))?;
        let coeff: i64 = coeff.parse().map_err(|_| bad("coefficient is not an integer"))?;
        check_token(token, s)?;
        terms.push((token.to_string(), if negative { -coeff } else { coeff }));
        rest = tail;
    }
    Ok(terms)
}

/// Parses `P1:Q1,P2:Q2`.
pub fn parse_point_map(s: &str) -> Result<BTreeMap<String, String>> {
    let mut table = BTreeMap::new();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (from, to) = pair
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("point map entry {pair:?} must be SRC:DST")))?;
        let (from, to) = (from.trim(), to.trim());
        check_token(from, s)?;
        check_token(to, s)?;
        if let Some(prev) = table.insert(from.to_string(), to.to_string()) {
            if prev != to {
                return Err(Error::Parse(format!("point {from} mapped twice")));
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(pt: &str) -> Option<String> {
        Some(format!("f({pt})"))
    }

    #[test]
    fn basic_pushforward() {
        let e = pushforward_determinant(3, [("P1", 2), ("P2", -1)], f).unwrap();
        assert_eq!(e.det_structure_power, 3);
        assert_eq!(
            e.pushed_points,
            BTreeMap::from([("f(P1)".into(), 2), ("f(P2)".into(), -1)])
        );
        assert_eq!(e.to_string(), "det(f_*O_X)^3 ⊗ O_Y(2*f(P1)-1*f(P2))");
    }

    #[test]
    fn empty_divisor() {
        let e = pushforward_determinant(1, Vec::<(String, i64)>::new(), f).unwrap();
        assert_eq!(
            e,
            FormalDivisorExpr {
                det_structure_power: 1,
                pushed_points: BTreeMap::new()
            }
        );
        assert_eq!(e.to_string(), "det(f_*O_X)^1");
    }

    #[test]
    fn collisions_sum_and_cancel() {
        let table = parse_point_map("P1:Q,P2:Q,P3:R").unwrap();
        let e = pushforward_determinant_with_table(2, [("P1", 3), ("P2", -3), ("P3", 1)], &table).unwrap();
        assert_eq!(e.pushed_points, BTreeMap::from([("R".into(), 1)]));
    }

    #[test]
    fn unmapped_point_and_bad_rank() {
        let table = parse_point_map("P1:Q").unwrap();
        assert_eq!(
            pushforward_determinant_with_table(1, [("P2", 1)], &table),
            Err(Error::PointNotMapped("P2".into()))
        );
        assert_eq!(pushforward_determinant(0, [("P1", 1)], f), Err(Error::InvalidRank(0)));
    }

    #[test]
    fn divisor_grammar() {
        assert_eq!(
            parse_divisor("2*P1-1*P2").unwrap(),
            vec![("P1".into(), 2), ("P2".into(), -1)]
        );
        assert_eq!(
            parse_divisor("-3*A + 4*B").unwrap(),
            vec![("A".into(), -3), ("B".into(), 4)]
        );
        assert_eq!(parse_divisor("").unwrap(), vec![]);
        assert!(parse_divisor("2P1").is_err());
        assert!(parse_divisor("2*").is_err());
        assert!(parse_divisor("x*P").is_err());
        assert!(parse_point_map("P1-Q1").is_err());
        assert!(parse_point_map("P1:Q1,P1:Q2").is_err());
    }

    proptest! {
        #[test]
        fn splitting_and_reordering_invariance(
            entries in prop::collection::vec((0usize..5, -4i64..5), 0..8),
            rank in 1i64..5,
        ) {
            let names = ["A", "B", "C", "D", "E"];
            let table = parse_point_map("A:X,B:Y,C:X,D:Z,E:Y").unwrap();
            let base: Vec<(&str, i64)> = entries.iter().map(|&(i, n)| (names[i], n)).collect();
            let reference = pushforward_determinant_with_table(rank, base.clone(), &table).unwrap();

            let mut reversed = base.clone();
            reversed.reverse();
            prop_assert_eq!(&pushforward_determinant_with_table(rank, reversed, &table).unwrap(), &reference);

            let split: Vec<(&str, i64)> = base
                .iter()
                .flat_map(|&(pt, n)| std::iter::repeat_n((pt, n.signum()), n.unsigned_abs() as usize))
                .collect();
            prop_assert_eq!(&pushforward_determinant_with_table(rank, split, &table).unwrap(), &reference);
            prop_assert!(reference.pushed_points.values().all(|&n| n != 0));
        }
    }
}
