use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PExponent;
use crate::trig::OVERSAMPLING;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    E9,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::E1,
        ExperimentId::E2,
        ExperimentId::E3,
        ExperimentId::E4,
        ExperimentId::E5,
        ExperimentId::E6,
        ExperimentId::E7,
        ExperimentId::E8,
        ExperimentId::E9,
    ];

    pub fn index(self) -> u64 {
        self as u64 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::E1 => "delta_schatten",
            ExperimentId::E2 => "delta_multiplier_lower",
            ExperimentId::E3 => "band_hankel",
            ExperimentId::E4 => "weak_type",
            ExperimentId::E5 => "fejer_log",
            ExperimentId::E6 => "riesz_jump",
            ExperimentId::E7 => "dirichlet_besov",
            ExperimentId::E8 => "projection_sp_bound",
            ExperimentId::E9 => "delta_schatten_p_gt_1",
        }
    }

    pub(crate) fn defaults(self) -> Defaults {
        let d = |p, k_min, k_max, samples| Defaults {
            p,
            k_min,
            k_max,
            samples,
        };
        match self {
            ExperimentId::E1 => d(0.5, 4, 11, 1),
            ExperimentId::E2 => d(0.5, 4, 9, 1),
            ExperimentId::E3 => d(0.5, 2, 9, 20),
            ExperimentId::E4 => d(1.0, 5, 9, 20),
            ExperimentId::E5 => d(1.0, 4, 11, 1),
            ExperimentId::E6 => d(0.5, 3, 10, 1),
            ExperimentId::E7 => d(0.5, 3, 10, 1),
            ExperimentId::E8 => d(0.5, 4, 9, 4),
            ExperimentId::E9 => d(2.0, 4, 11, 1),
        }
    }

    /// Admissible `k` range (inclusive).
    fn k_bounds(self) -> (u32, u32) {
        match self {
            ExperimentId::E1 | ExperimentId::E9 => (0, 12),
            ExperimentId::E2 => (1, 11),
            ExperimentId::E3 => (1, 11),
            ExperimentId::E4 | ExperimentId::E8 => (0, 11),
            ExperimentId::E5 | ExperimentId::E6 | ExperimentId::E7 => (0, 20),
        }
    }

    fn check_p(self, p: PExponent) -> Result<()> {
        let bad = |why: &str| Err(Error::Config(format!("{self}: p = {p} {why}")));
        match self {
            ExperimentId::E4 | ExperimentId::E5 if p.get() != 1.0 => bad("is fixed at 1"),
            ExperimentId::E2 | ExperimentId::E6 | ExperimentId::E8 if p.get() > 1.0 => {
                bad("must be at most 1")
            }
            ExperimentId::E9 if p.get() <= 1.0 => bad("must exceed 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| s.eq_ignore_ascii_case(&id.to_string()) || s == id.name())
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}` (expected E1..E9)")))
    }
}

pub(crate) struct Defaults {
    p: f64,
    k_min: u32,
    k_max: u32,
    samples: usize,
}

/// Experiment configuration document; absent fields take per-experiment defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    /// Explicit sizes; replaces `k_min..=k_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_list: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Quadrature oversampling factor, at least the default 16.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oversampling: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        ExperimentConfig {
            experiment,
            p: None,
            k_min: None,
            k_max: None,
            k_list: None,
            samples: None,
            seed: None,
            oversampling: None,
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_range(mut self, k_min: u32, k_max: u32) -> Self {
        self.k_min = Some(k_min);
        self.k_max = Some(k_max);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = Some(samples);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>) -> Self {
        self.output = Some(path.into());
        self
    }

    /// Fills defaults and validates.
    pub fn resolve(&self) -> Result<Plan> {
        let id = self.experiment;
        let d = id.defaults();
        let p = PExponent::new(self.p.unwrap_or(d.p)).map_err(|e| Error::Config(e.to_string()))?;
        id.check_p(p)?;

        let ks = match &self.k_list {
            Some(list) => {
                if self.k_min.is_some() || self.k_max.is_some() {
                    return Err(Error::Config("k_list excludes k_min/k_max".into()));
                }
                let mut ks = list.clone();
                ks.sort_unstable();
                ks.dedup();
                ks
            }
            None => {
                let (lo, hi) = (self.k_min.unwrap_or(d.k_min), self.k_max.unwrap_or(d.k_max));
                if lo > hi {
                    return Err(Error::Config(format!("k_min = {lo} exceeds k_max = {hi}")));
                }
                (lo..=hi).collect()
            }
        };
        if ks.len() < 3 {
            return Err(Error::Config(format!(
                "{id}: a scaling fit needs at least 3 sizes, got {}",
                ks.len()
            )));
        }
        let (lo, hi) = id.k_bounds();
        if let Some(k) = ks.iter().find(|&&k| k < lo || k > hi) {
            return Err(Error::Config(format!("{id}: k = {k} outside {lo}..={hi}")));
        }

        let samples = self.samples.unwrap_or(d.samples);
        if samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        let oversampling = self.oversampling.unwrap_or(OVERSAMPLING);
        if oversampling < OVERSAMPLING {
            return Err(Error::Config(format!(
                "oversampling must be at least {OVERSAMPLING}"
            )));
        }
        Ok(Plan {
            id,
            p,
            ks,
            samples,
            seed: self.seed.unwrap_or(0),
            oversampling,
            output: self.output.clone(),
        })
    }
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub id: ExperimentId,
    pub p: PExponent,
    pub ks: Vec<u32>,
    pub samples: usize,
    pub seed: u64,
    pub oversampling: usize,
    pub output: Option<PathBuf>,
}
