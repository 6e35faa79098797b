//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (its name is printed on
//! stderr), 2 on a usage error. All numbers are printed exactly; rationals
//! appear as `"a/b"` strings.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::divisor::{parse_divisor, parse_point_map, pushforward_determinant_with_table};
use crate::enumerate::{admissible_constraints, enumerate_with_cap, AdmissibilityConstraints, DEFAULT_NODE_CAP};
use crate::error::Error;
use crate::invariants::{
    canonical_filtration_profile, pullback_invariants, pushforward_invariants, pushforward_slope, BundleInvariants,
    CurveContext,
};
use crate::polygon::{
    dominates, is_oper_shape, mu_extremes, oper_polygon, polygon_from_filtration, polygon_from_vertices, slope_gap,
    HNPolygon,
};
use crate::poset::build_poset;
use crate::rational::Rational;
use crate::verify::{Claim, GridPoint, ParameterGrid, Verifier};

/// Environment variable overriding the default enumeration budget.
pub const NODE_CAP_ENV: &str = "FROBSTRAT_NODE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "frobstrat",
    version,
    about = "Exact Frobenius pushforward invariants and Harder-Narasimhan polygon tools"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; `dot` is only meaningful for `poset`.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Enumeration budget; overrides FROBSTRAT_NODE_CAP.
    #[arg(long = "node-cap", global = true)]
    pub node_cap: Option<u64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BundleArgs {
    #[arg(long = "p")]
    pub p: i64,
    #[arg(long = "g")]
    pub g: i64,
    #[arg(long = "r")]
    pub r: i64,
    #[arg(long = "d")]
    pub d: i64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FamilyArgs {
    #[arg(long = "r")]
    pub r: i64,
    #[arg(long = "d")]
    pub d: i64,
    /// Genus; selects the admissible family (gap 2g-2 and its slope window).
    #[arg(long = "g", conflicts_with_all = ["max_gap", "lo", "hi"])]
    pub g: Option<i64>,
    /// Characteristic used to validate the curve context (does not change
    /// the family).
    #[arg(long = "p", default_value_t = 2)]
    pub p: i64,
    #[arg(long = "max-gap", allow_hyphen_values = true, requires_all = ["lo", "hi"])]
    pub max_gap: Option<Rational>,
    #[arg(long = "lo", allow_hyphen_values = true, requires_all = ["max_gap", "hi"])]
    pub lo: Option<Rational>,
    #[arg(long = "hi", allow_hyphen_values = true, requires_all = ["max_gap", "lo"])]
    pub hi: Option<Rational>,
    /// Vertex cap for explicit constraints (defaults to r + 1).
    #[arg(long = "max-vertices")]
    pub max_vertices: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_claim)]
    pub claim: Claim,
    #[arg(long = "p")]
    pub p: Option<i64>,
    #[arg(long = "g")]
    pub g: Option<i64>,
    #[arg(long = "r")]
    pub r: Option<i64>,
    #[arg(long = "d")]
    pub d: Option<i64>,
    /// Run over a parameter grid instead of a single point.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "grid")]
    pub ps: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "grid")]
    pub gs: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "grid")]
    pub ds: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "grid")]
    pub rs: Option<Vec<i64>>,
}

fn parse_claim(s: &str) -> Result<Claim, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Claim::ALL.iter().map(|c| c.id()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants and slope of the Frobenius pushforward of (r, d).
    Push(BundleArgs),
    /// Invariants of the Frobenius pullback of (r, d).
    #[command(allow_negative_numbers = true)]
    Pull {
        #[arg(long = "p")]
        p: i64,
        #[arg(long = "g", default_value_t = 0)]
        g: i64,
        #[arg(long = "r")]
        r: i64,
        #[arg(long = "d")]
        d: i64,
    },
    /// Gradeds of the canonical filtration of F^*F_*(r, d).
    Canfil(BundleArgs),
    /// Slope d/r.
    #[command(allow_negative_numbers = true)]
    Slope {
        #[arg(long = "r")]
        r: i64,
        #[arg(long = "d")]
        d: i64,
    },
    /// Oper polygon with vertices (i, i d/r + i(r-i)(g-1)).
    #[command(allow_negative_numbers = true)]
    Oper {
        #[arg(long = "r")]
        r: i64,
        #[arg(long = "d")]
        d: i64,
        #[arg(long = "g")]
        g: i64,
    },
    /// Canonical polygon from vertices ("0,0;1,1;2,0") or a filtration
    /// ("1,2;2,2", subobject (rank,degree) pairs smallest first).
    #[command(allow_negative_numbers = true)]
    Polygon {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "filtration",
            required_unless_present = "filtration"
        )]
        vertices: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        filtration: Option<String>,
    },
    /// Whether polygon P1 lies on or above P2.
    Dominates {
        #[arg(long = "p1")]
        p1: String,
        #[arg(long = "p2")]
        p2: String,
    },
    /// μ_max, μ_min and their gap; with --g also the oper-shape test.
    Extremes {
        #[arg(long)]
        polygon: String,
        #[arg(long = "g")]
        g: Option<i64>,
    },
    /// All admissible polygons, as a JSON array.
    Enumerate(FamilyArgs),
    /// Dominance poset of the admissible family.
    Poset(FamilyArgs),
    /// Check a claim and emit a verification report.
    Verify(VerifyArgs),
    /// Symbolic determinant of a pushforward.
    Detpush {
        #[arg(long)]
        rank: i64,
        /// e.g. "2*P1-1*P2"
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        divisor: String,
        /// e.g. "P1:Q1,P2:Q2"
        #[arg(long, default_value = "")]
        map: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `argv` (program name first) and runs it against the process's
/// standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with_io(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    match execute(&config, stdin) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            let _ = stdout.write_all(out.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "{}: {e}", e.name());
            1
        }
    }
}

fn node_cap(config: &CliConfig) -> CliResult<u64> {
    if let Some(cap) = config.node_cap {
        return Ok(cap);
    }
    match std::env::var(NODE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{NODE_CAP_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_NODE_CAP),
    }
}

#[derive(Serialize)]
struct InvariantsOut {
    rank: i64,
    degree: i64,
    slope: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

impl InvariantsOut {
    fn new(inv: BundleInvariants) -> Self {
        InvariantsOut {
            rank: inv.rank(),
            degree: inv.degree(),
            slope: inv.slope(),
            warning: None,
        }
    }

    fn text(&self) -> String {
        let mut s = format!("rank={} degree={} slope={}", self.rank, self.degree, self.slope);
        if let Some(w) = &self.warning {
            s.push_str(&format!(" warning={w:?}"));
        }
        s
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("CLI output serialization is infallible")
}

fn no_dot(config: &CliConfig) -> CliResult<()> {
    if config.format == OutputFormat::Dot {
        return Err(Failure::Usage("--format dot is only supported by `poset`".into()));
    }
    Ok(())
}

fn parse_pairs(s: &str, what: &str) -> CliResult<Vec<(i64, i64)>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once(',')
                .ok_or_else(|| Failure::Usage(format!("--{what}: {t:?} is not an x,y pair")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| Failure::Usage(format!("--{what}: {v:?} is not an integer")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

/// Polygon source: `-` for stdin, inline JSON, or a file path.
fn read_source(src: &str, stdin: &mut dyn Read) -> CliResult<String> {
    if src == "-" {
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else if src.trim_start().starts_with('{') {
        Ok(src.to_string())
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Usage(format!("reading {src}: {e}")))
    }
}

/// All polygons in a text: a stream of polygon objects and/or arrays.
fn parse_polygons(text: &str) -> Result<Vec<HNPolygon>, Error> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(HNPolygon),
        Many(Vec<HNPolygon>),
    }
    let mut out = Vec::new();
    for item in serde_json::Deserializer::from_str(text).into_iter::<OneOrMany>() {
        match item.map_err(|e| Error::Parse(format!("polygon JSON: {e}")))? {
            OneOrMany::One(p) => out.push(p),
            OneOrMany::Many(ps) => out.extend(ps),
        }
    }
    Ok(out)
}

fn single_polygon(text: &str) -> Result<HNPolygon, Error> {
    let mut ps = parse_polygons(text)?;
    match ps.len() {
        1 => Ok(ps.remove(0)),
        n => Err(Error::Parse(format!("expected one polygon, found {n}"))),
    }
}

fn family(args: &FamilyArgs, cap: u64) -> CliResult<(Vec<HNPolygon>, u64)> {
    let constraints = match (args.g, args.max_gap, args.lo, args.hi) {
        (Some(g), ..) => admissible_constraints(args.r, args.d, CurveContext::new(args.p, g)?)?,
        (None, Some(gap), Some(lo), Some(hi)) => {
            let max_vertices = match args.max_vertices {
                Some(v) => v,
                None => usize::try_from(args.r).map_err(|_| Error::InvalidRank(args.r))? + 1,
            };
            AdmissibilityConstraints::new(gap, lo, hi, max_vertices)
        }
        _ => return Err(Failure::Usage("give either --g or all of --max-gap, --lo, --hi".into())),
    };
    let e = enumerate_with_cap(args.r, args.d, &constraints, cap)?;
    Ok((e.polygons, e.nodes))
}

fn execute(config: &CliConfig, stdin: &mut dyn Read) -> CliResult<String> {
    let text = config.format == OutputFormat::Text;
    if !matches!(config.command, Command::Poset(_)) {
        no_dot(config)?;
    }
    match &config.command {
        Command::Push(a) => {
            let ctx = CurveContext::new(a.p, a.g)?;
            let pushed = pushforward_invariants(BundleInvariants::new(a.r, a.d)?, ctx)?;
            let mut out = InvariantsOut::new(pushed);
            out.slope = pushforward_slope(BundleInvariants::new(a.r, a.d)?, ctx)?;
            if a.g == 0 {
                out.warning = Some("genus 0: stability statements require g >= 1".into());
            }
            Ok(if text { out.text() } else { json(&out) })
        }
        Command::Pull { p, g, r, d } => {
            let ctx = CurveContext::new(*p, *g)?;
            let out = InvariantsOut::new(pullback_invariants(BundleInvariants::new(*r, *d)?, ctx)?);
            Ok(if text { out.text() } else { json(&out) })
        }
        Command::Canfil(a) => {
            let ctx = CurveContext::new(a.p, a.g)?;
            let profile = canonical_filtration_profile(BundleInvariants::new(a.r, a.d)?, ctx)?;
            let rows: Vec<InvariantsOut> = profile.into_iter().map(InvariantsOut::new).collect();
            Ok(if text {
                rows.iter().map(InvariantsOut::text).collect::<Vec<_>>().join("\n")
            } else {
                json(&rows)
            })
        }
        Command::Slope { r, d } => {
            let out = InvariantsOut::new(BundleInvariants::new(*r, *d)?);
            Ok(if text { out.text() } else { json(&out) })
        }
        Command::Oper { r, d, g } => {
            let poly = oper_polygon(*r, *d, *g)?;
            Ok(if text { poly.to_string() } else { poly.to_json() })
        }
        Command::Polygon { vertices, filtration } => {
            let poly = match (vertices, filtration) {
                (Some(v), _) => polygon_from_vertices(&parse_pairs(v, "vertices")?)?,
                (None, Some(f)) => {
                    let subs = parse_pairs(f, "filtration")?
                        .into_iter()
                        .map(|(r, d)| BundleInvariants::new(r, d))
                        .collect::<Result<Vec<_>, _>>()?;
                    polygon_from_filtration(&subs)?
                }
                (None, None) => return Err(Failure::Usage("give --vertices or --filtration".into())),
            };
            Ok(if text { poly.to_string() } else { poly.to_json() })
        }
        Command::Dominates { p1, p2 } => {
            let (a, b) = if p1 == "-" && p2 == "-" {
                let mut ps = parse_polygons(&read_source("-", stdin)?)?;
                match ps.len() {
                    1 => (ps[0].clone(), ps.remove(0)),
                    2 => {
                        let b = ps.pop().expect("two polygons");
                        (ps.pop().expect("two polygons"), b)
                    }
                    n => return Err(Error::Parse(format!("expected one or two polygons on stdin, found {n}")).into()),
                }
            } else {
                (
                    single_polygon(&read_source(p1, stdin)?)?,
                    single_polygon(&read_source(p2, stdin)?)?,
                )
            };
            let result = dominates(&a, &b)?;
            Ok(if text {
                result.to_string()
            } else {
                json(&BTreeMap::from([("dominates", result)]))
            })
        }
        Command::Extremes { polygon, g } => {
            let poly = single_polygon(&read_source(polygon, stdin)?)?;
            let (hi, lo) = mu_extremes(&poly);
            #[derive(Serialize)]
            struct Out {
                mu_max: Rational,
                mu_min: Rational,
                gap: Rational,
                #[serde(skip_serializing_if = "Option::is_none")]
                oper_shape: Option<bool>,
            }
            let out = Out {
                mu_max: hi,
                mu_min: lo,
                gap: slope_gap(&poly)?,
                oper_shape: g.map(|g| is_oper_shape(&poly, g)).transpose()?,
            };
            Ok(if text {
                let mut s = format!("mu_max={} mu_min={} gap={}", out.mu_max, out.mu_min, out.gap);
                if let Some(b) = out.oper_shape {
                    s.push_str(&format!(" oper_shape={b}"));
                }
                s
            } else {
                json(&out)
            })
        }
        Command::Enumerate(args) => {
            let (polys, _) = family(args, node_cap(config)?)?;
            Ok(if text {
                polys.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
            } else {
                json(&polys)
            })
        }
        Command::Poset(args) => {
            let (polys, _) = family(args, node_cap(config)?)?;
            let poset = build_poset(&polys)?;
            Ok(match config.format {
                OutputFormat::Json => poset.to_json(),
                OutputFormat::Dot => poset.to_dot(),
                OutputFormat::Text => {
                    let mut lines: Vec<String> = poset
                        .elements
                        .iter()
                        .enumerate()
                        .map(|(i, p)| format!("{i}: {p}"))
                        .collect();
                    lines.extend(poset.covers.iter().map(|(i, j)| format!("{i} > {j}")));
                    lines.join("\n")
                }
            })
        }
        Command::Verify(args) => verify(args, Verifier::new(node_cap(config)?), text),
        Command::Detpush { rank, divisor, map } => {
            let terms = parse_divisor(divisor)?;
            let table = parse_point_map(map)?;
            let expr = pushforward_determinant_with_table(*rank, terms, &table)?;
            Ok(if text { expr.to_string() } else { json(&expr) })
        }
    }
}

fn verify(args: &VerifyArgs, verifier: Verifier, text: bool) -> CliResult<String> {
    let render = |reports: &[crate::verify::VerificationReport], many: bool| -> String {
        if text {
            reports
                .iter()
                .map(|r| {
                    let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!(
                        "{} {} {}",
                        r.claim,
                        params.join(" "),
                        if r.passed { "PASS" } else { "FAIL" }
                    )
                })
                .collect::<Vec<_>>()
                .join("\n")
        } else if many {
            json(&reports)
        } else {
            json(&reports[0])
        }
    };

    if args.grid {
        let defaults = ParameterGrid::default();
        let grid = ParameterGrid {
            ps: args.ps.clone().unwrap_or(defaults.ps),
            gs: args.gs.clone().unwrap_or(defaults.gs),
            ds: args.ds.clone().unwrap_or(defaults.ds),
            rs: args.rs.clone().unwrap_or(defaults.rs),
        };
        let reports = verifier.run_grid(args.claim, &grid)?;
        return Ok(render(&reports, true));
    }

    let need = |v: Option<i64>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--claim {} requires --{flag}", args.claim)))
    };
    let point = match args.claim {
        Claim::OperDominance => GridPoint {
            p: args.p.unwrap_or(2),
            g: need(args.g, "g")?,
            r: need(args.r, "r")?,
            d: need(args.d, "d")?,
        },
        _ => {
            let p = need(args.p, "p")?;
            GridPoint {
                p,
                g: need(args.g, "g")?,
                r: p,
                d: need(args.d, "d")?,
            }
        }
    };
    let report = verifier.run(args.claim, &point)?;
    Ok(render(&[report], false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut argv = vec!["frobstrat"];
        argv.extend_from_slice(args);
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_io(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn push_example() {
        let (code, out, _) = run_str(&["push", "--p", "2", "--g", "2", "--r", "1", "--d", "0"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "{\"rank\":2,\"degree\":1,\"slope\":\"1/2\"}\n");
    }

    #[test]
    fn negative_degrees_parse() {
        let (code, out, _) = run_str(&["slope", "--r", "1", "--d", "-3"], "");
        assert_eq!(code, 0);
        assert!(out.contains("\"-3/1\""));
    }

    #[test]
    fn domain_and_usage_errors() {
        let (code, _, err) = run_str(&["oper", "--r", "2", "--d", "1", "--g", "2"], "");
        assert_eq!(code, 1);
        assert!(err.starts_with("IndivisibleDegree"));
        let (code, _, err) = run_str(&["push", "--p", "4", "--g", "2", "--r", "1", "--d", "0"], "");
        assert_eq!((code, err.starts_with("NonPrimeCharacteristic")), (1, true));
        let (code, _, err) = run_str(&["push", "--p", "2"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--g"));
        let (code, _, _) = run_str(&["oper", "--r", "2", "--d", "0", "--g", "2", "--format", "dot"], "");
        assert_eq!(code, 2);
        let (code, _, err) = run_str(&["verify", "--claim", "gap-equivalence", "--g", "2", "--d", "0"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--p"));
    }

    #[test]
    fn dominates_from_stdin() {
        let a = oper_polygon(2, 0, 2).unwrap().to_json();
        let b = HNPolygon::straight(2, 0).unwrap().to_json();
        let (code, out, _) = run_str(&["dominates", "--p1", "-", "--p2", "-"], &format!("{a}\n{b}"));
        assert_eq!((code, out.as_str()), (0, "{\"dominates\":true}\n"));
        let (code, out, _) = run_str(&["dominates", "--p1", &b, "--p2", &a, "--format", "text"], "");
        assert_eq!((code, out.as_str()), (0, "false\n"));
    }

    #[test]
    fn detpush_grammar() {
        let (code, out, _) = run_str(
            &[
                "detpush",
                "--rank",
                "3",
                "--divisor",
                "2*P1-1*P2",
                "--map",
                "P1:Q1,P2:Q2",
            ],
            "",
        );
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "{\"det_structure_power\":3,\"pushed_points\":{\"Q1\":2,\"Q2\":-1}}\n"
        );
        let (code, _, err) = run_str(&["detpush", "--rank", "1", "--divisor", "1*P3", "--map", "P1:Q1"], "");
        assert_eq!(code, 1);
        assert!(err.starts_with("PointNotMapped"));
    }

    #[test]
    fn node_cap_flag() {
        let (code, _, err) = run_str(
            &["enumerate", "--r", "4", "--d", "0", "--g", "2", "--node-cap", "2"],
            "",
        );
        assert_eq!(code, 1);
        assert!(err.starts_with("BudgetExceeded"));
    }
}
