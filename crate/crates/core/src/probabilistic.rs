//! Embeddings read as finite measures on coordinate–state atoms, their
//! normalizations, total variation and coarsening pushforwards.
//!
//! For measures with totals `M_A`, `M_B` and total variation `TV`,
//! `Σ min = (M_A + M_B)/2 − TV` and `Σ max = (M_A + M_B)/2 + TV`, so the
//! Tanimoto similarity is `(M_A + M_B − 2TV) / (M_A + M_B + 2TV)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embeddings::{self, Atom, EmbeddingKind, MassEmbedding, Signal};
use crate::error::{Error, Result};
use crate::pairwise::tanimoto;
use crate::partitions::{CoarseningMap, StatePartition};

/// Agreement required between the direct and TV routes to the similarity.
pub const ROUTE_TOLERANCE: f64 = 1e-12;

/// A finite measure on the atoms of an embedding; the embedding itself,
/// viewed as a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomMeasure(MassEmbedding);

impl AtomMeasure {
    pub fn embedding(&self) -> &MassEmbedding {
        &self.0
    }

    pub fn into_embedding(self) -> MassEmbedding {
        self.0
    }

    pub fn total_mass(&self) -> f64 {
        self.0.total_mass()
    }

    pub fn mass(&self, atom: Atom) -> f64 {
        self.0.get(atom.coord, atom.state)
    }

    pub fn atoms(&self) -> &[(Atom, f64)] {
        self.0.entries()
    }
}

pub fn measure_of(embedding: MassEmbedding) -> AtomMeasure {
    AtomMeasure(embedding)
}

/// A probability distribution on atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDistribution {
    n: usize,
    k: usize,
    partition_id: String,
    probabilities: Vec<(Atom, f64)>,
}

impl AtomDistribution {
    pub fn probabilities(&self) -> &[(Atom, f64)] {
        &self.probabilities
    }

    pub fn prob(&self, atom: Atom) -> f64 {
        self.probabilities
            .binary_search_by_key(&atom, |(a, _)| *a)
            .map(|i| self.probabilities[i].1)
            .unwrap_or(0.0)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.k)
    }

    pub fn partition_id(&self) -> &str {
        &self.partition_id
    }
}

pub fn normalize(measure: &AtomMeasure) -> Result<AtomDistribution> {
    let total = measure.total_mass();
    if total <= 0.0 {
        return Err(Error::Vacuum);
    }
    let e = measure.embedding();
    Ok(AtomDistribution {
        n: e.n(),
        k: e.k(),
        partition_id: e.partition_id().to_string(),
        probabilities: e.entries().iter().map(|&(a, m)| (a, m / total)).collect(),
    })
}

/// Half the absolute difference summed over atoms; absent atoms count as zero.
fn half_l1<'a>(a: &'a [(Atom, f64)], b: &'a [(Atom, f64)]) -> f64 {
    let mut diff: BTreeMap<Atom, f64> = BTreeMap::new();
    for &(atom, m) in a {
        *diff.entry(atom).or_default() += m;
    }
    for &(atom, m) in b {
        *diff.entry(atom).or_default() -= m;
    }
    0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
}

pub fn total_variation(mu: &AtomMeasure, nu: &AtomMeasure) -> Result<f64> {
    mu.0.check_compatible(&nu.0)?;
    Ok(half_l1(mu.atoms(), nu.atoms()))
}

/// Total variation between two distributions on the same atom space.
pub fn distribution_tv(p: &AtomDistribution, q: &AtomDistribution) -> Result<f64> {
    if p.shape() != q.shape() || p.partition_id != q.partition_id {
        return Err(Error::ShapeMismatch("distributions live on different atom spaces".into()));
    }
    Ok(half_l1(&p.probabilities, &q.probabilities))
}

/// Both routes to the similarity of a pair, with the normalized discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvConsistency {
    pub mass_a: f64,
    pub mass_b: f64,
    pub tv: f64,
    /// `TV / ((M_A + M_B)/2)`; `None` for the vacuum pair.
    pub delta: Option<f64>,
    pub j_direct: f64,
    pub j_via_tv: f64,
    pub d_direct: f64,
    pub d_via_tv: f64,
    pub residual: f64,
}

/// Similarity of two measures computed from their total variation.
pub fn similarity_from_tv(mass_a: f64, mass_b: f64, tv: f64) -> f64 {
    let s = mass_a + mass_b;
    if s == 0.0 {
        1.0
    } else {
        (s - 2.0 * tv) / (s + 2.0 * tv)
    }
}

/// Compares the Tanimoto route with the TV route on two embeddings and fails
/// if they disagree by more than [`ROUTE_TOLERANCE`].
pub fn tv_consistency_embedded(a: &MassEmbedding, b: &MassEmbedding) -> Result<TvConsistency> {
    let direct = tanimoto(a, b)?;
    let (mass_a, mass_b) = (a.total_mass(), b.total_mass());
    let tv = half_l1(a.entries(), b.entries());
    let (delta, j_via_tv, d_via_tv) = if mass_a + mass_b == 0.0 {
        (None, 1.0, 0.0)
    } else {
        // TV <= (M_A + M_B)/2; clamp rounding spill above 1
        let delta = (tv / (0.5 * (mass_a + mass_b))).min(1.0);
        (
            Some(delta),
            similarity_from_tv(mass_a, mass_b, tv),
            2.0 * delta / (1.0 + delta),
        )
    };
    let residual = (direct.similarity - j_via_tv).abs().max((direct.distance - d_via_tv).abs());
    if residual > ROUTE_TOLERANCE {
        return Err(Error::InvariantViolation(format!(
            "direct similarity {} and TV route {j_via_tv} differ by {residual:e}",
            direct.similarity
        )));
    }
    Ok(TvConsistency {
        mass_a,
        mass_b,
        tv,
        delta,
        j_direct: direct.similarity,
        j_via_tv,
        d_direct: direct.distance,
        d_via_tv,
        residual,
    })
}

pub fn tv_consistency(a: &Signal, b: &Signal, partition: &StatePartition) -> Result<TvConsistency> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "signal lengths differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    tv_consistency_embedded(
        &embeddings::multistate(a, partition)?,
        &embeddings::multistate(b, partition)?,
    )
}

/// Pushforward of a measure along a state coarsening: atom `(i, k)` maps to
/// `(i, π(k))`. Total mass is preserved.
pub fn pushforward(measure: &AtomMeasure, map: &CoarseningMap) -> Result<AtomMeasure> {
    let e = measure.embedding();
    if map.fine_len() != e.k() {
        return Err(Error::InvalidGrouping(format!(
            "map covers {} states, measure has {}",
            map.fine_len(),
            e.k()
        )));
    }
    let mut coarse: BTreeMap<Atom, f64> = BTreeMap::new();
    for &(a, m) in e.entries() {
        *coarse.entry(Atom::new(a.coord, map.group_of(a.state))).or_default() += m;
    }
    let kind = match e.kind() {
        EmbeddingKind::SignSplit => EmbeddingKind::Multistate,
        other => other,
    };
    let id = format!("{}/{}", e.partition_id(), map.describe());
    Ok(AtomMeasure(MassEmbedding::from_entries(
        e.n(),
        map.coarse_len(),
        kind,
        id,
        coarse,
    )?))
}
