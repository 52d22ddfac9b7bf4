//! Measure descriptions and their compact text syntax.
//!
//! ```text
//! simrank | rvs | psimrank | simrankstar | psimrankstar
//! prank:lambda=0.4
//! convex:[simrank@0.5,simrankstar@0.5]
//! product:simrank,rvs   (or product:[simrank,rvs])
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance on the weight sum of a convex combination.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    SimRank,
    RvsSimRank,
    /// `lambda` is the probability of stepping both surfers backward.
    PRank {
        lambda: f64,
    },
    PSimRank,
    SimRankStar,
    PSimRankStar,
    Convex(Vec<(MeasureSpec, f64)>),
    /// Independent per-surfer steps; each side must be `SimRank` (backward) or `RvsSimRank` (forward).
    Product(Box<MeasureSpec>, Box<MeasureSpec>),
}

impl MeasureSpec {
    /// SimRank, rvs-SimRank, P-Rank(`lambda`), PSimRank, SimRank* and PSimRank*.
    pub fn builtin(prank_lambda: f64) -> Vec<MeasureSpec> {
        vec![
            MeasureSpec::SimRank,
            MeasureSpec::RvsSimRank,
            MeasureSpec::PRank {
                lambda: prank_lambda,
            },
            MeasureSpec::PSimRank,
            MeasureSpec::SimRankStar,
            MeasureSpec::PSimRankStar,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::PRank { lambda } => {
                if !(0.0..=1.0).contains(lambda) {
                    return Err(Error::InvalidSpec(format!(
                        "prank lambda must lie in [0,1], got {lambda}"
                    )));
                }
            }
            MeasureSpec::Convex(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidSpec("convex combination is empty".into()));
                }
                let mut total = 0.0;
                for (member, weight) in members {
                    if !weight.is_finite() || *weight < 0.0 {
                        return Err(Error::InvalidSpec(format!(
                            "convex weight must be nonnegative, got {weight}"
                        )));
                    }
                    total += weight;
                    member.validate()?;
                }
                if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(Error::InvalidSpec(format!(
                        "convex weights sum to {total}, expected 1"
                    )));
                }
            }
            MeasureSpec::Product(first, second) => {
                for side in [first, second] {
                    if !matches!(**side, MeasureSpec::SimRank | MeasureSpec::RvsSimRank) {
                        return Err(Error::InvalidSpec(format!(
                            "product marginals must be simrank or rvs, got {side}"
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::SimRank => f.write_str("simrank"),
            MeasureSpec::RvsSimRank => f.write_str("rvs"),
            MeasureSpec::PRank { lambda } => write!(f, "prank:lambda={lambda}"),
            MeasureSpec::PSimRank => f.write_str("psimrank"),
            MeasureSpec::SimRankStar => f.write_str("simrankstar"),
            MeasureSpec::PSimRankStar => f.write_str("psimrankstar"),
            MeasureSpec::Convex(members) => {
                f.write_str("convex:[")?;
                for (i, (member, weight)) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{member}@{weight}")?;
                }
                f.write_str("]")
            }
            MeasureSpec::Product(first, second) => write!(f, "product:[{first},{second}]"),
        }
    }
}

/// Splits on commas that are not nested inside brackets.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::InvalidSpec(format!("unbalanced ']' in '{s}'")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::InvalidSpec(format!("unbalanced '[' in '{s}'")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidSpec(format!("bad {what} '{s}'")))
}

impl FromStr for MeasureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h.trim().to_ascii_lowercase(), Some(a.trim())),
            None => (s.to_ascii_lowercase(), None),
        };
        let spec = match (head.as_str(), args) {
            ("simrank", None) => MeasureSpec::SimRank,
            ("rvs" | "rvssimrank" | "rvs-simrank", None) => MeasureSpec::RvsSimRank,
            ("psimrank", None) => MeasureSpec::PSimRank,
            ("simrankstar" | "simrank*", None) => MeasureSpec::SimRankStar,
            ("psimrankstar" | "psimrank*", None) => MeasureSpec::PSimRankStar,
            ("prank", Some(args)) => {
                let value = args.strip_prefix("lambda=").ok_or_else(|| {
                    Error::InvalidSpec(format!("expected lambda=<x>, got '{args}'"))
                })?;
                MeasureSpec::PRank {
                    lambda: parse_number(value, "lambda")?,
                }
            }
            ("convex", Some(args)) => {
                let inner = args
                    .strip_prefix('[')
                    .and_then(|a| a.strip_suffix(']'))
                    .ok_or_else(|| {
                        Error::InvalidSpec(format!("expected [..] after convex:, got '{args}'"))
                    })?;
                let mut members = Vec::new();
                for part in split_top_level(inner)? {
                    let (member, weight) = part.rsplit_once('@').ok_or_else(|| {
                        Error::InvalidSpec(format!("convex member '{part}' lacks @weight"))
                    })?;
                    members.push((member.parse()?, parse_number(weight, "weight")?));
                }
                MeasureSpec::Convex(members)
            }
            ("product", Some(args)) => {
                let args = args
                    .strip_prefix('[')
                    .and_then(|a| a.strip_suffix(']'))
                    .unwrap_or(args);
                let parts = split_top_level(args)?;
                if parts.len() != 2 {
                    return Err(Error::InvalidSpec(format!(
                        "product takes two marginals, got '{args}'"
                    )));
                }
                MeasureSpec::Product(Box::new(parts[0].parse()?), Box::new(parts[1].parse()?))
            }
            _ => return Err(Error::InvalidSpec(format!("unknown measure '{s}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// One line per accepted form, for `grsp kernels`.
pub const SYNTAX_HELP: &[(&str, &str)] = &[
    ("simrank", "both surfers step to uniform in-neighbors"),
    (
        "rvs",
        "rvs-SimRank: both surfers step to uniform out-neighbors",
    ),
    (
        "prank:lambda=<x>",
        "P-Rank: backward with probability x, forward otherwise",
    ),
    (
        "psimrank",
        "PSimRank: meet at a common in-neighbor with Jaccard probability",
    ),
    (
        "simrankstar",
        "SimRank*: a fair coin picks one surfer to step backward",
    ),
    (
        "psimrankstar",
        "PSimRank*: Jaccard meeting, otherwise SimRank* single steps",
    ),
    (
        "convex:[<m>@<w>,...]",
        "convex combination of transition kernels, weights sum to 1",
    ),
    (
        "product:[<m1>,<m2>]",
        "independent surfers; marginals are simrank or rvs",
    ),
];
