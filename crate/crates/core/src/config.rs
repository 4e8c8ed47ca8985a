//! Size caps and run configuration shared by every entry point.

use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bounds that keep every exhaustive computation at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest group produced by generator closure.
    pub group_order: usize,
    /// Largest group for which the full automorphism group is searched.
    pub aut_search_order: usize,
    /// Largest automorphism group produced by closure.
    pub aut_group_order: usize,
    /// Largest tuple space `|G|^n` enumerated by the solver.
    pub enumeration: u64,
    /// Solution sets above this size are counted, not stored.
    pub materialize: u64,
    /// Largest clone of term functions before giving up on saturation.
    pub clone_size: usize,
    /// Clone tier is used when `|G|^n` is at most this.
    pub clone_points: u64,
    /// Default literal budget for bounded syntactic closure.
    pub closure_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group_order: 10_000,
            aut_search_order: 60,
            aut_group_order: 100_000,
            enumeration: 100_000_000,
            materialize: 1_000_000,
            clone_size: 50_000,
            clone_points: 16,
            closure_budget: 4,
        }
    }
}

impl Caps {
    /// Named cap profiles, selectable through `AUTGEO_CAP_PROFILE`.
    pub fn profile(name: &str) -> Result<Caps> {
        let base = Caps::default();
        match name {
            "default" => Ok(base),
            "small" => Ok(Caps {
                group_order: 1_000,
                aut_search_order: 24,
                enumeration: 1_000_000,
                materialize: 100_000,
                clone_size: 5_000,
                ..base
            }),
            "large" => Ok(Caps {
                group_order: 100_000,
                aut_search_order: 200,
                aut_group_order: 1_000_000,
                enumeration: 10_000_000_000,
                materialize: 10_000_000,
                clone_size: 500_000,
                ..base
            }),
            other => Err(Error::validation(
                "cap profile",
                format!("unknown profile `{other}` (expected small, default or large)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub caps: Caps,
    /// Worker threads; 0 means the rayon default.
    pub workers: usize,
    pub format: ReportFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            caps: Caps::default(),
            workers: 0,
            format: ReportFormat::Text,
            seed: 0x5eed,
        }
    }
}
