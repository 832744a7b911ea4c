//! Nonnegative coordinate–state mass embeddings of real and complex signals.
//!
//! Every embedding is an `n × K` tensor stored sparsely as `(coordinate,
//! state) -> mass` entries sorted by atom. Zero masses are never stored.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{AngularPartition, StatePartition};

/// A finite real-valued signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
    id: Option<String>,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSignal("signal has no coordinates".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "coordinate {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self { values, id: None })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// `alpha * self`; fails if the product overflows.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        let mut s = Self::new(self.values.iter().map(|v| v * alpha).collect())?;
        s.id = self.id.clone();
        Ok(s)
    }
}

/// A finite complex-valued signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    values: Vec<Complex64>,
    id: Option<String>,
}

impl ComplexSignal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSignal("signal has no coordinates".into()));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidSignal(format!(
                "coordinate {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self { values, id: None })
    }

    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    SignSplit,
    Multistate,
    ComplexCartesian,
    ComplexPolar,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SignSplit => "sign_split",
            Self::Multistate => "multistate",
            Self::ComplexCartesian => "complex_cartesian",
            Self::ComplexPolar => "complex_polar",
        })
    }
}

/// One `(coordinate, state)` cell of the embedding space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub coord: usize,
    pub state: usize,
}

impl Atom {
    pub fn new(coord: usize, state: usize) -> Self {
        Self { coord, state }
    }
}

pub const SIGN_SPLIT_ID: &str = "sign-split";
pub const CARTESIAN_ID: &str = "cartesian:re+,re-,im+,im-";

/// Sparse nonnegative `n × K` mass tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct MassEmbedding {
    n: usize,
    k: usize,
    kind: EmbeddingKind,
    partition_id: String,
    entries: Vec<(Atom, f64)>,
}

/// JSON wire form: `{n, K, kind, partition_id, entries: [[i, k, mass], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub kind: EmbeddingKind,
    pub partition_id: String,
    pub entries: Vec<(usize, usize, f64)>,
}

impl MassEmbedding {
    /// Builds an embedding from arbitrary entries; zero masses are dropped and
    /// entries are sorted. Negative, non-finite, out-of-range or repeated
    /// atoms are rejected.
    pub fn from_entries(
        n: usize,
        k: usize,
        kind: EmbeddingKind,
        partition_id: impl Into<String>,
        entries: impl IntoIterator<Item = (Atom, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(Atom, f64)> = entries.into_iter().filter(|(_, m)| *m != 0.0).collect();
        for (a, m) in &entries {
            if !(m.is_finite() && *m > 0.0) {
                return Err(Error::InvalidSignal(format!("mass {m} at {a:?} is not a positive finite value")));
            }
            if a.coord >= n || a.state >= k {
                return Err(Error::ShapeMismatch(format!("atom {a:?} outside {n}x{k}")));
            }
        }
        entries.sort_by_key(|(a, _)| *a);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSignal("repeated atom".into()));
        }
        Ok(Self {
            n,
            k,
            kind,
            partition_id: partition_id.into(),
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn partition_id(&self) -> &str {
        &self.partition_id
    }

    /// Nonzero entries sorted by atom.
    pub fn entries(&self) -> &[(Atom, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, coord: usize, state: usize) -> f64 {
        let key = Atom::new(coord, state);
        self.entries
            .binary_search_by_key(&key, |(a, _)| *a)
            .map(|idx| self.entries[idx].1)
            .unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Row-major dense copy (`n * K` values).
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.k];
        for (a, m) in &self.entries {
            out[a.coord * self.k + a.state] = *m;
        }
        out
    }

    /// Fails unless both embeddings live in the same `n × K` space under the
    /// same partition.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.k, other.n, other.k
            )));
        }
        if self.kind != other.kind {
            return Err(Error::ShapeMismatch(format!(
                "embedding kinds differ ({} vs {})",
                self.kind, other.kind
            )));
        }
        if self.partition_id != other.partition_id {
            return Err(Error::PartitionMismatch {
                left: self.partition_id.clone(),
                right: other.partition_id.clone(),
            });
        }
        Ok(())
    }

    pub fn to_record(&self, id: Option<&str>) -> EmbeddingRecord {
        EmbeddingRecord {
            id: id.map(str::to_string),
            n: self.n,
            k: self.k,
            kind: self.kind,
            partition_id: self.partition_id.clone(),
            entries: self
                .entries
                .iter()
                .map(|(a, m)| (a.coord, a.state, *m))
                .collect(),
        }
    }

    pub fn from_record(rec: &EmbeddingRecord) -> Result<Self> {
        Self::from_entries(
            rec.n,
            rec.k,
            rec.kind,
            rec.partition_id.clone(),
            rec.entries.iter().map(|&(i, k, m)| (Atom::new(i, k), m)),
        )
    }

    pub(crate) fn with_shape(
        n: usize,
        k: usize,
        kind: EmbeddingKind,
        partition_id: String,
        entries: Vec<(Atom, f64)>,
    ) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            n,
            k,
            kind,
            partition_id,
            entries,
        }
    }
}

/// Sign-split embedding: row `i` is `(x_i⁺, x_i⁻)`.
pub fn sign_split(signal: &Signal) -> MassEmbedding {
    let entries = signal
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, &x)| (Atom::new(i, if x > 0.0 { 0 } else { 1 }), x.abs()))
        .collect();
    MassEmbedding::with_shape(
        signal.len(),
        2,
        EmbeddingKind::SignSplit,
        SIGN_SPLIT_ID.to_string(),
        entries,
    )
}

/// Multistate embedding: `|x_i|` placed in the state containing `x_i`.
pub fn multistate(signal: &Signal, partition: &StatePartition) -> Result<MassEmbedding> {
    let mut entries = Vec::with_capacity(signal.len());
    for (i, &x) in signal.values().iter().enumerate() {
        let k = partition.classify(x)?;
        if x != 0.0 {
            entries.push((Atom::new(i, k), x.abs()));
        }
    }
    Ok(MassEmbedding::with_shape(
        signal.len(),
        partition.len(),
        EmbeddingKind::Multistate,
        partition.id().to_string(),
        entries,
    ))
}

/// Cartesian embedding with channels `(a⁺, a⁻, b⁺, b⁻)` per coordinate.
pub fn complex_cartesian(signal: &ComplexSignal) -> MassEmbedding {
    let mut entries = Vec::with_capacity(2 * signal.len());
    for (i, z) in signal.values().iter().enumerate() {
        for (offset, part) in [(0, z.re), (2, z.im)] {
            if part > 0.0 {
                entries.push((Atom::new(i, offset), part));
            } else if part < 0.0 {
                entries.push((Atom::new(i, offset + 1), -part));
            }
        }
    }
    MassEmbedding::with_shape(
        signal.len(),
        4,
        EmbeddingKind::ComplexCartesian,
        CARTESIAN_ID.to_string(),
        entries,
    )
}

/// Polar embedding: modulus `r_i` placed in the sector of the principal argument.
pub fn complex_polar(signal: &ComplexSignal, sectors: &AngularPartition) -> Result<MassEmbedding> {
    let mut entries = Vec::with_capacity(signal.len());
    for (i, z) in signal.values().iter().enumerate() {
        if z.re == 0.0 && z.im == 0.0 {
            continue;
        }
        let k = sectors.classify_angle(z.im.atan2(z.re))?;
        entries.push((Atom::new(i, k), z.norm()));
    }
    Ok(MassEmbedding::with_shape(
        signal.len(),
        sectors.len(),
        EmbeddingKind::ComplexPolar,
        sectors.id().to_string(),
        entries,
    ))
}
