//! Constant profiles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    PaperTheorem,
    PaperAlgorithm,
    Relaxed,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-theorem" => Ok(Profile::PaperTheorem),
            "paper-algorithm" => Ok(Profile::PaperAlgorithm),
            "relaxed" => Ok(Profile::Relaxed),
            _ => input(format!("unknown profile `{s}`")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::PaperTheorem => "paper-theorem",
            Profile::PaperAlgorithm => "paper-algorithm",
            Profile::Relaxed => "relaxed",
        })
    }
}

/// Every size threshold used by the pipeline. Large values saturate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub t: usize,
    pub r: usize,
    pub profile: Profile,
    /// Number of dispersed paths that forces a minor.
    pub k: u128,
    /// Number of semi-dispersed paths searched for before giving up.
    pub k0: u128,
    /// Radius of the fully dispersed search.
    pub l_full: usize,
    /// Radius of the semi-dispersed search.
    pub l_semi: usize,
    /// Paths of a strip.
    pub strip_height: usize,
    /// Side of each candidate subwall.
    pub subwall_size: usize,
    /// Required distance between candidate subwalls.
    pub gap: usize,
    /// Paths of the strip (and columns of the wall) kept clear on each side.
    pub margin: usize,
    /// Paths removed from each side of a candidate subwall in the flat branch.
    pub trim: usize,
    /// Size of the input wall the profile asks for.
    pub wall_size: u128,
    /// Bound on the apex set of the flat branch.
    pub apex_bound: u128,
    /// Lemma-level bounds for the blocker (|Z| ≤ 3k−3, strict radius).
    pub strict: bool,
}

fn pow(base: u128, e: u32) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..e {
        out = out.saturating_mul(base);
    }
    out
}

impl Config {
    pub fn new(t: usize, r: usize, profile: Profile) -> Result<Self> {
        if t < 2 {
            return input("t must be at least 2");
        }
        if r < 2 {
            return input("r must be at least 2");
        }
        let tt = t * (t - 1);
        let tt128 = tt as u128;
        let t128 = t as u128;
        let k = pow(tt128, 6).saturating_mul(32);
        let k0 = pow(tt128, 12).saturating_mul(12288);
        let cfg = match profile {
            Profile::PaperTheorem => Config {
                t,
                r,
                profile,
                k,
                k0,
                l_full: 2 * tt,
                l_semi: 10 * tt,
                strip_height: 40 * tt + r,
                subwall_size: 20 * tt + r,
                gap: 10 * tt,
                margin: 10 * tt,
                trim: 10 * tt,
                wall_size: pow(t128, 24)
                    .saturating_mul(49152)
                    .saturating_mul(40 * t128 * t128 + r as u128),
                apex_bound: pow(t128, 24).saturating_mul(12288),
                strict: false,
            },
            Profile::PaperAlgorithm => Config {
                t,
                r,
                profile,
                k,
                k0,
                l_full: 2 * tt,
                l_semi: 10 * tt,
                strip_height: 60 * tt + r,
                subwall_size: 40 * tt + r,
                gap: 20 * tt,
                margin: 10 * tt,
                trim: 20 * tt,
                wall_size: pow(t128, 24)
                    .saturating_mul(49152)
                    .saturating_mul(60 * t128 * t128 + r as u128),
                apex_bound: pow(t128, 24).saturating_mul(12288),
                strict: false,
            },
            Profile::Relaxed => {
                let l = 2;
                // the crossing construction needs t(t-1)/2 rows on each side
                let margin = l.max(tt / 2);
                let mut c = Config {
                    t,
                    r,
                    profile,
                    k: 4 * tt128,
                    k0: 4 * tt128,
                    l_full: l,
                    l_semi: l,
                    strip_height: 4 * l + r + 2 * margin,
                    subwall_size: 4 * l + r,
                    gap: 2 * l,
                    margin,
                    trim: 2 * l,
                    wall_size: 0,
                    apex_bound: 0,
                    strict: false,
                };
                c.derive_relaxed();
                c
            }
        };
        Ok(cfg)
    }

    /// Recomputes the derived relaxed sizes after an override.
    fn derive_relaxed(&mut self) {
        let tt = self.t * (self.t - 1);
        let cols = 2 * self.margin + tt * self.subwall_size + (tt - 1) * self.gap;
        self.wall_size = cols.max(self.strip_height) as u128;
        self.apex_bound = self.k0.saturating_sub(1);
    }

    /// Applies `key=value` overrides. Only the relaxed profile accepts them.
    pub fn apply_overrides(&mut self, pairs: &BTreeMap<String, String>) -> Result<()> {
        if pairs.is_empty() {
            return Ok(());
        }
        if self.profile != Profile::Relaxed {
            return input(format!(
                "constants can only be overridden under the relaxed profile (got {})",
                self.profile
            ));
        }
        let mut explicit_wall = None;
        let mut explicit_apex = None;
        for (key, value) in pairs {
            let bad = || Error::Input(format!("constant `{key}`: cannot parse `{value}`"));
            let n: u128 = if key == "strict" {
                match value.as_str() {
                    "true" | "1" => 1,
                    "false" | "0" => 0,
                    _ => return Err(bad()),
                }
            } else {
                value.parse().map_err(|_| bad())?
            };
            let small = || usize::try_from(n).map_err(|_| bad());
            match key.as_str() {
                "k" => self.k = n,
                "k0" => self.k0 = n,
                "l_full" => self.l_full = small()?,
                "l_semi" => self.l_semi = small()?,
                "strip_height" => self.strip_height = small()?,
                "subwall_size" => self.subwall_size = small()?,
                "gap" => self.gap = small()?,
                "margin" => self.margin = small()?,
                "trim" => self.trim = small()?,
                "wall_size" => explicit_wall = Some(n),
                "apex_bound" => explicit_apex = Some(n),
                "strict" => self.strict = n == 1,
                _ => return input(format!("unknown constant `{key}`")),
            }
        }
        if self.k == 0 || self.k0 == 0 || self.l_full == 0 || self.l_semi == 0 {
            return input("k, k0, l_full and l_semi must be positive");
        }
        if self.subwall_size < self.r + 2 * self.trim {
            return input("subwall_size must be at least r + 2*trim");
        }
        if self.strip_height < self.subwall_size + 2 * self.margin {
            return input("strip_height must be at least subwall_size + 2*margin");
        }
        self.derive_relaxed();
        if let Some(w) = explicit_wall {
            self.wall_size = w;
        }
        if let Some(a) = explicit_apex {
            self.apex_bound = a;
        }
        Ok(())
    }

    /// Parses a `key=value` file; `#` starts a comment.
    pub fn parse_constants(text: &str) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return input(format!("constants line {}: expected key=value", no + 1));
            };
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    pub fn tt(&self) -> usize {
        self.t * (self.t - 1)
    }

    /// Errors unless a wall of the given size meets the profile requirement.
    pub fn check_wall(&self, size: usize) -> Result<()> {
        if (size as u128) < self.wall_size {
            return Err(Error::Capacity(format!(
                "wall has {size} paths but profile {} requires R = {}",
                self.profile, self.wall_size
            )));
        }
        Ok(())
    }
}
