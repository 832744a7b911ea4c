//! State partitions of the real line and of the angular domain `(-π, π]`.
//!
//! A [`StatePartition`] is an ordered list of intervals that must be pairwise
//! disjoint and cover every finite real. Validation enumerates every finite
//! endpoint, the midpoints between consecutive endpoints and points beyond
//! the extremes; membership is constant between consecutive endpoints, so
//! these probes are exhaustive for interval partitions.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign of a real number with exact comparison against zero.
pub fn sign_of(value: f64) -> i8 {
    if value > 0.0 {
        1
    } else if value < 0.0 {
        -1
    } else {
        0
    }
}

/// One interval state `B_k` of a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalState {
    pub name: String,
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_bound")]
    pub lower: f64,
    #[serde(serialize_with = "ser_bound", deserialize_with = "de_bound")]
    pub upper: f64,
    /// Bounds are open unless stated otherwise.
    #[serde(default)]
    pub lower_inclusive: bool,
    #[serde(default)]
    pub upper_inclusive: bool,
}

impl IntervalState {
    pub fn new(
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        lower_inclusive: bool,
        upper_inclusive: bool,
    ) -> Self {
        Self {
            name: name.into(),
            lower,
            upper,
            lower_inclusive,
            upper_inclusive,
        }
    }

    /// The degenerate state `{value}`.
    pub fn point(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, value, true, true)
    }

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lower_inclusive {
            v >= self.lower
        } else {
            v > self.lower
        };
        let below = if self.upper_inclusive {
            v <= self.upper
        } else {
            v < self.upper
        };
        above && below
    }

    fn check_shape(&self) -> Result<()> {
        if self.lower.is_nan() || self.upper.is_nan() {
            return Err(Error::InvalidPartition(format!(
                "state '{}' has a NaN bound",
                self.name
            )));
        }
        let ok = self.lower < self.upper
            || (self.lower == self.upper
                && self.lower_inclusive
                && self.upper_inclusive
                && self.lower.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPartition(format!(
                "state '{}' is empty: {}",
                self.name, self
            )))
        }
    }
}

impl fmt::Display for IntervalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower == self.upper {
            return write!(f, "{{{}}}", fmt_bound(self.lower));
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lower_inclusive { '[' } else { '(' },
            fmt_bound(self.lower),
            fmt_bound(self.upper),
            if self.upper_inclusive { ']' } else { ')' }
        )
    }
}

fn fmt_bound(b: f64) -> String {
    if b == f64::INFINITY {
        "inf".to_string()
    } else if b == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{b}")
    }
}

fn ser_bound<S: Serializer>(b: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if b.is_infinite() {
        s.serialize_str(&fmt_bound(*b))
    } else {
        s.serialize_f64(*b)
    }
}

fn de_bound<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Str(s) => match s.trim() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!(
                "expected a number, \"inf\" or \"-inf\", got \"{other}\""
            ))),
        },
    }
}

/// Probe values for a set of interval endpoints: every finite endpoint, the
/// midpoints between consecutive endpoints and points beyond both extremes.
fn probes(endpoints: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = endpoints
        .into_iter()
        .filter(|v| v.is_finite() && *v >= lo && *v <= hi)
        .collect();
    pts.push(0.0f64.clamp(lo, hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = pts.clone();
    for w in pts.windows(2) {
        out.push(w[0] + (w[1] - w[0]) / 2.0);
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if lo == f64::NEG_INFINITY {
        out.push(first - 1.0);
        out.push(first - 1.0e6 * (1.0 + first.abs()));
        out.push(-f64::MAX);
    } else if first > lo {
        out.push(lo + (first - lo) / 2.0);
    }
    if hi == f64::INFINITY {
        out.push(last + 1.0);
        out.push(last + 1.0e6 * (1.0 + last.abs()));
        out.push(f64::MAX);
    } else if last < hi {
        out.push(last + (hi - last) / 2.0);
    }
    out
}

fn check_exact_cover(states: &[IntervalState], probe_values: &[f64]) -> Result<()> {
    for &v in probe_values {
        let hits: Vec<&str> = states
            .iter()
            .filter(|s| s.contains(v))
            .map(|s| s.name.as_str())
            .collect();
        match hits.len() {
            1 => {}
            0 => {
                return Err(Error::InvalidPartition(format!(
                    "value {v} is not covered by any state"
                )))
            }
            _ => {
                return Err(Error::InvalidPartition(format!(
                    "value {v} lies in several states: {}",
                    hits.join(", ")
                )))
            }
        }
    }
    Ok(())
}

/// A validated partition of the real line into `K >= 2` interval states.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePartition {
    states: Vec<IntervalState>,
    neutral: Option<usize>,
    id: String,
}

#[derive(Serialize, Deserialize)]
struct PartitionConfig {
    states: Vec<IntervalState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neutral: Option<usize>,
}

impl StatePartition {
    pub fn new(states: Vec<IntervalState>, neutral: Option<usize>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 states, got {}",
                states.len()
            )));
        }
        if let Some(n) = neutral {
            if n >= states.len() {
                return Err(Error::InvalidPartition(format!(
                    "neutral index {n} out of range for {} states",
                    states.len()
                )));
            }
        }
        for s in &states {
            s.check_shape()?;
        }
        let probe_values = probes(
            states.iter().flat_map(|s| [s.lower, s.upper]),
            f64::NEG_INFINITY,
            f64::INFINITY,
        );
        check_exact_cover(&states, &probe_values)?;
        let id = states
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("|");
        Ok(Self {
            states,
            neutral,
            id,
        })
    }

    /// Two states `(0, ∞)` and `(-∞, 0]`: the sign-split partition, zero
    /// going to the nonpositive state.
    pub fn sign_split() -> Self {
        Self::new(
            vec![
                IntervalState::new("positive", 0.0, f64::INFINITY, false, false),
                IntervalState::new("nonpositive", f64::NEG_INFINITY, 0.0, false, true),
            ],
            None,
        )
        .expect("sign-split partition is valid")
    }

    /// Five return regimes around an exact-zero neutral state:
    /// `{0}`, `(τ, ∞)`, `(0, τ]`, `[-τ, 0)`, `(-∞, -τ)`.
    pub fn financial_five(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        Self::new(
            vec![
                IntervalState::point("neutral", 0.0),
                IntervalState::new("large profit", tau, f64::INFINITY, false, false),
                IntervalState::new("small profit", 0.0, tau, false, true),
                IntervalState::new("small loss", -tau, 0.0, true, false),
                IntervalState::new("large loss", f64::NEG_INFINITY, -tau, false, false),
            ],
            Some(0),
        )
    }

    /// Five states with a neutral band `[-η, η]` and a materiality threshold
    /// `τ`: neutral, large loss `(-∞, -τ]`, small loss `(-τ, -η)`, small gain
    /// `(η, τ]`, large gain `(τ, ∞)`.
    pub fn banded_five(eta: f64, tau: f64) -> Result<Self> {
        if !(eta > 0.0 && tau > eta && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < eta < tau, got eta={eta}, tau={tau}"
            )));
        }
        Self::new(
            vec![
                IntervalState::new("neutral", -eta, eta, true, true),
                IntervalState::new("large loss", f64::NEG_INFINITY, -tau, false, true),
                IntervalState::new("small loss", -tau, -eta, false, false),
                IntervalState::new("small gain", eta, tau, false, true),
                IntervalState::new("large gain", tau, f64::INFINITY, false, false),
            ],
            Some(0),
        )
    }

    /// Neutral band `[-η, η]`, positive `(η, ∞)`, negative `(-∞, -η)`.
    pub fn banded_three(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        Self::new(
            vec![
                IntervalState::new("neutral", -eta, eta, true, true),
                IntervalState::new("positive", eta, f64::INFINITY, false, false),
                IntervalState::new("negative", f64::NEG_INFINITY, -eta, false, false),
            ],
            Some(0),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PartitionConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidPartition(format!("bad partition config: {e}")))?;
        Self::new(cfg.states, cfg.neutral)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PartitionConfig {
            states: self.states.clone(),
            neutral: self.neutral,
        })
        .expect("partition serializes")
    }

    pub fn states(&self) -> &[IntervalState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn neutral(&self) -> Option<usize> {
        self.neutral
    }

    /// Canonical description of the states, used to tag embeddings.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn classify(&self, value: f64) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s.contains(value))
            .ok_or(Error::UnreachableState(value))
    }

    /// Merges the states of each group into one interval. Only groups whose
    /// intervals are adjacent on the real line can be merged into a single
    /// interval state.
    pub fn coarsen(&self, map: &CoarseningMap) -> Result<Self> {
        if map.fine_len() != self.len() {
            return Err(Error::InvalidGrouping(format!(
                "map covers {} states, partition has {}",
                map.fine_len(),
                self.len()
            )));
        }
        let mut merged = Vec::with_capacity(map.coarse_len());
        for g in 0..map.coarse_len() {
            let mut members: Vec<&IntervalState> = map
                .members(g)
                .iter()
                .map(|&k| &self.states[k])
                .collect();
            members.sort_by(|a, b| {
                a.lower
                    .total_cmp(&b.lower)
                    .then(b.lower_inclusive.cmp(&a.lower_inclusive))
            });
            for w in members.windows(2) {
                let touching = w[0].upper == w[1].lower && (w[0].upper_inclusive ^ w[1].lower_inclusive);
                if !touching {
                    return Err(Error::InvalidGrouping(format!(
                        "states {} and {} in group '{}' are not adjacent",
                        w[0],
                        w[1],
                        map.name(g)
                    )));
                }
            }
            let (first, last) = (members[0], members[members.len() - 1]);
            merged.push(IntervalState::new(
                map.name(g),
                first.lower,
                last.upper,
                first.lower_inclusive,
                last.upper_inclusive,
            ));
        }
        let neutral = self.neutral.map(|k| map.group_of(k));
        Self::new(merged, neutral)
    }
}

impl fmt::Display for StatePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// A half-open or closed arc of `(-π, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    #[serde(default)]
    pub lower_inclusive: bool,
    #[serde(default = "yes")]
    pub upper_inclusive: bool,
}

fn yes() -> bool {
    true
}

impl Sector {
    /// Left-open, right-closed arc `(lower, upper]`.
    pub fn new(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            lower,
            upper,
            lower_inclusive: false,
            upper_inclusive: true,
        }
    }

    fn as_interval(&self) -> IntervalState {
        IntervalState::new(
            self.name.clone(),
            self.lower,
            self.upper,
            self.lower_inclusive,
            self.upper_inclusive,
        )
    }
}

/// Principal argument in `(-π, π]`; `-π` is mapped to `π`.
pub fn canonical_angle(angle: f64) -> f64 {
    if angle <= -PI {
        PI
    } else {
        angle
    }
}

/// A validated partition of `(-π, π]` into `K >= 1` angular sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularPartition {
    sectors: Vec<Sector>,
    intervals: Vec<IntervalState>,
    id: String,
}

#[derive(Serialize, Deserialize)]
struct AngularConfig {
    sectors: Vec<Sector>,
}

impl AngularPartition {
    pub fn new(sectors: Vec<Sector>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::InvalidPartition("no sectors".into()));
        }
        let intervals: Vec<IntervalState> = sectors.iter().map(Sector::as_interval).collect();
        for (s, iv) in sectors.iter().zip(&intervals) {
            iv.check_shape()?;
            if s.lower < -PI || s.upper > PI {
                return Err(Error::InvalidPartition(format!(
                    "sector '{}' leaves [-pi, pi]",
                    s.name
                )));
            }
        }
        let probe_values: Vec<f64> = probes(
            intervals.iter().flat_map(|s| [s.lower, s.upper]).chain([PI]),
            -PI,
            PI,
        )
        .into_iter()
        .filter(|&a| a > -PI)
        .collect();
        check_exact_cover(&intervals, &probe_values)?;
        let id = format!(
            "angular:{}",
            intervals
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join("|")
        );
        Ok(Self {
            sectors,
            intervals,
            id,
        })
    }

    /// `(0, π/2]`, `(π/2, π]`, `(-π, -π/2]`, `(-π/2, 0]`.
    pub fn quadrants() -> Self {
        Self::new(vec![
            Sector::new("Q1", 0.0, PI / 2.0),
            Sector::new("Q2", PI / 2.0, PI),
            Sector::new("Q3", -PI, -PI / 2.0),
            Sector::new("Q4", -PI / 2.0, 0.0),
        ])
        .expect("quadrant partition is valid")
    }

    /// `k` equal left-open/right-closed sectors starting at `-π`.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("sector count must be positive".into()));
        }
        let width = 2.0 * PI / k as f64;
        let sectors = (0..k)
            .map(|j| {
                let lower = -PI + width * j as f64;
                let upper = if j + 1 == k { PI } else { -PI + width * (j + 1) as f64 };
                Sector::new(format!("S{}", j + 1), lower, upper)
            })
            .collect();
        Self::new(sectors)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: AngularConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidPartition(format!("bad sector config: {e}")))?;
        Self::new(cfg.sectors)
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn classify_angle(&self, angle: f64) -> Result<usize> {
        let a = canonical_angle(angle);
        self.intervals
            .iter()
            .position(|s| s.contains(a))
            .ok_or(Error::UnreachableState(angle))
    }
}

/// Map from fine state indices to coarse group indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseningMap {
    group_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl CoarseningMap {
    /// `groups` must partition `0..fine_len`. Group names default to `G0, G1, ...`.
    pub fn new(fine_len: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let names = (0..groups.len()).map(|g| format!("G{g}")).collect();
        Self::named(fine_len, groups, names)
    }

    pub fn named(fine_len: usize, groups: &[Vec<usize>], names: Vec<String>) -> Result<Self> {
        if names.len() != groups.len() {
            return Err(Error::InvalidGrouping("one name per group required".into()));
        }
        let mut group_of = vec![usize::MAX; fine_len];
        for (g, members) in groups.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidGrouping(format!("group '{}' is empty", names[g])));
            }
            for &k in members {
                if k >= fine_len {
                    return Err(Error::InvalidGrouping(format!(
                        "state index {k} out of range for {fine_len} states"
                    )));
                }
                if group_of[k] != usize::MAX {
                    return Err(Error::InvalidGrouping(format!(
                        "state {k} appears in more than one group"
                    )));
                }
                group_of[k] = g;
            }
        }
        if let Some(k) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::InvalidGrouping(format!("state {k} is not in any group")));
        }
        let mut members: Vec<Vec<usize>> = groups.to_vec();
        for m in &mut members {
            m.sort_unstable();
        }
        Ok(Self {
            group_of,
            members,
            names,
        })
    }

    /// Groups given by state name, e.g. `gain -> ["small gain", "large gain"]`.
    pub fn by_names(partition: &StatePartition, groups: &[(String, Vec<String>)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(groups.len());
        for (g, states) in groups {
            let mut ks = Vec::with_capacity(states.len());
            for s in states {
                ks.push(partition.index_of(s).ok_or_else(|| {
                    Error::InvalidGrouping(format!("group '{g}' names unknown state '{s}'"))
                })?);
            }
            idx.push(ks);
        }
        let names = groups.iter().map(|(g, _)| g.clone()).collect();
        Self::named(partition.len(), &idx, names)
    }

    pub fn identity(k: usize) -> Self {
        let groups: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        Self::new(k, &groups).expect("identity grouping is valid")
    }

    pub fn constant(k: usize) -> Self {
        Self::new(k, &[(0..k).collect()]).expect("single group is valid")
    }

    pub fn group_of(&self, fine: usize) -> usize {
        self.group_of[fine]
    }

    pub fn members(&self, group: usize) -> &[usize] {
        &self.members[group]
    }

    pub fn name(&self, group: usize) -> &str {
        &self.names[group]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn fine_len(&self) -> usize {
        self.group_of.len()
    }

    pub fn coarse_len(&self) -> usize {
        self.members.len()
    }

    pub fn describe(&self) -> String {
        self.members
            .iter()
            .zip(&self.names)
            .map(|(m, n)| {
                format!(
                    "{n}:{}",
                    m.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("+")
                )
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}
