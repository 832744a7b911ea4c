//! Pairwise Tanimoto measures on mass embeddings, the peak-to-peak distance
//! on raw signals, the radial kernel family and Gram matrices.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::{self, ComplexSignal, MassEmbedding, Signal};
use crate::error::{Error, Result};
use crate::partitions::{sign_of, AngularPartition, StatePartition};

/// Relative tolerance on negative Gram eigenvalues.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Gram matrices larger than this are not eigen-checked.
pub const MAX_EIGEN_CHECK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairwiseResult {
    pub intersection: f64,
    pub union: f64,
    pub similarity: f64,
    pub distance: f64,
    pub degenerate: bool,
}

impl PairwiseResult {
    fn from_sums(intersection: f64, union: f64) -> Self {
        if union == 0.0 {
            return Self {
                intersection,
                union,
                similarity: 1.0,
                distance: 0.0,
                degenerate: true,
            };
        }
        let similarity = intersection / union;
        Self {
            intersection,
            union,
            similarity,
            distance: 1.0 - similarity,
            degenerate: false,
        }
    }
}

/// Min–max (Tanimoto) similarity of two embeddings over the same atom space.
pub fn tanimoto(u: &MassEmbedding, v: &MassEmbedding) -> Result<PairwiseResult> {
    u.check_compatible(v)?;
    let (a, b) = (u.entries(), v.entries());
    let (mut i, mut j) = (0, 0);
    let (mut inter, mut union) = (0.0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                union += a[i].1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                union += b[j].1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                inter += a[i].1.min(b[j].1);
                union += a[i].1.max(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    // accumulate tails one atom at a time so the union is summed in atom order
    for (_, m) in a[i..].iter().chain(&b[j..]) {
        union += m;
    }
    Ok(PairwiseResult::from_sums(inter, union))
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch(format!("signal lengths differ ({a} vs {b})")));
    }
    Ok(())
}

/// Sign-aware intersection: `Σ min(|a_i|, |b_i|)` over coordinates where both
/// signals carry the same nonzero sign.
pub fn sign_aware_intersection(a: &Signal, b: &Signal) -> Result<f64> {
    check_lengths(a.len(), b.len())?;
    Ok(a.values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| sign_of(**x) == sign_of(**y) && sign_of(**x) != 0)
        .map(|(x, y)| x.abs().min(y.abs()))
        .sum())
}

/// Peak-to-peak union: `Σ max(a_i⁺, b_i⁺) + max(a_i⁻, b_i⁻)`.
pub fn peak_union(a: &Signal, b: &Signal) -> Result<f64> {
    check_lengths(a.len(), b.len())?;
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.max(0.0).max(y.max(0.0)) + (-x).max(0.0).max((-y).max(0.0)))
        .sum())
}

/// Peak-to-peak distance on raw signals via the sign-split embedding. The
/// intersection is also evaluated coordinatewise and the two must agree.
pub fn d_peak(a: &Signal, b: &Signal) -> Result<PairwiseResult> {
    check_lengths(a.len(), b.len())?;
    let r = tanimoto(&embeddings::sign_split(a), &embeddings::sign_split(b))?;
    let direct = sign_aware_intersection(a, b)?;
    if (direct - r.intersection).abs() > 1e-12 * (1.0 + r.union) {
        return Err(Error::InvariantViolation(format!(
            "coordinatewise intersection {direct} differs from embedded {}",
            r.intersection
        )));
    }
    Ok(r)
}

/// Tanimoto distance of the multistate embeddings under `partition`.
pub fn d_multi(a: &Signal, b: &Signal, partition: &StatePartition) -> Result<PairwiseResult> {
    check_lengths(a.len(), b.len())?;
    tanimoto(
        &embeddings::multistate(a, partition)?,
        &embeddings::multistate(b, partition)?,
    )
}

#[derive(Debug, Clone, Copy)]
pub enum ComplexMode<'a> {
    Cartesian,
    Polar(&'a AngularPartition),
}

impl ComplexMode<'_> {
    pub fn embed(&self, z: &ComplexSignal) -> Result<MassEmbedding> {
        match self {
            ComplexMode::Cartesian => Ok(embeddings::complex_cartesian(z)),
            ComplexMode::Polar(sectors) => embeddings::complex_polar(z, sectors),
        }
    }
}

pub fn d_complex(a: &ComplexSignal, b: &ComplexSignal, mode: ComplexMode<'_>) -> Result<PairwiseResult> {
    check_lengths(a.len(), b.len())?;
    tanimoto(&mode.embed(a)?, &mode.embed(b)?)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be a positive finite number, got {lambda}"
        )));
    }
    Ok(())
}

/// `exp(-λ · d_peak(a, b))`.
pub fn radial_kernel(a: &Signal, b: &Signal, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok((-lambda * d_peak(a, b)?.distance).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelKind {
    /// The similarity itself, `J_peak`.
    Peak,
    /// `exp(-λ d)`.
    Radial { lambda: f64 },
}

impl KernelKind {
    fn value(&self, r: &PairwiseResult) -> f64 {
        match self {
            KernelKind::Peak => r.similarity,
            KernelKind::Radial { lambda } => (-lambda * r.distance).exp(),
        }
    }
}

/// Symmetric kernel matrix with its PSD diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramMatrix {
    pub m: usize,
    pub kernel: KernelKind,
    /// Row-major `m × m` values.
    pub values: Vec<f64>,
    /// `None` when `m` exceeds [`MAX_EIGEN_CHECK`].
    pub min_eigenvalue: Option<f64>,
    pub max_eigenvalue: Option<f64>,
}

impl GramMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    /// `Some(true)` when the smallest eigenvalue is at least
    /// `-PSD_TOLERANCE * max(1, λ_max)`; `None` when not checked.
    pub fn is_psd(&self) -> Option<bool> {
        let (lo, hi) = (self.min_eigenvalue?, self.max_eigenvalue?);
        Some(lo >= -PSD_TOLERANCE * hi.abs().max(1.0))
    }
}

/// Extreme eigenvalues of a symmetric row-major matrix.
pub fn eigen_extremes(m: usize, values: &[f64]) -> (f64, f64) {
    let mat = DMatrix::from_row_slice(m, m, values);
    let eig = mat.symmetric_eigenvalues();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Fills a row-major `m × m` matrix from the upper triangle, pairs in parallel.
fn symmetric_matrix(embeddings: &[MassEmbedding], cell: impl Fn(&PairwiseResult) -> f64 + Sync) -> Result<Vec<f64>> {
    let m = embeddings.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let cells: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| tanimoto(&embeddings[i], &embeddings[j]).map(|r| cell(&r)))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; m * m];
    for (&(i, j), v) in pairs.iter().zip(cells) {
        values[i * m + j] = v;
        values[j * m + i] = v;
    }
    Ok(values)
}

/// Row-major matrix of pairwise Tanimoto distances.
pub fn distance_matrix(embeddings: &[MassEmbedding]) -> Result<Vec<f64>> {
    for e in embeddings.iter().skip(1) {
        embeddings[0].check_compatible(e)?;
    }
    symmetric_matrix(embeddings, |r| r.distance)
}

/// Per-coordinate `(intersection, union)` contributions; summing them gives
/// the totals behind [`tanimoto`].
pub fn coordinate_envelopes(u: &MassEmbedding, v: &MassEmbedding) -> Result<Vec<(f64, f64)>> {
    u.check_compatible(v)?;
    let mut out = vec![(0.0, 0.0); u.n()];
    for (atom, mass) in u.entries() {
        let other = v.get(atom.coord, atom.state);
        out[atom.coord].0 += mass.min(other);
        out[atom.coord].1 += mass.max(other);
    }
    for (atom, mass) in v.entries() {
        if u.get(atom.coord, atom.state) == 0.0 {
            out[atom.coord].1 += mass;
        }
    }
    Ok(out)
}

/// Gram matrix over precomputed embeddings. Pairs of the upper triangle are
/// evaluated in parallel; each cell is written exactly once.
pub fn gram_from_embeddings(embeddings: &[MassEmbedding], kernel: KernelKind) -> Result<GramMatrix> {
    if embeddings.is_empty() {
        return Err(Error::InvalidParameter("gram matrix needs at least one signal".into()));
    }
    if let KernelKind::Radial { lambda } = kernel {
        check_lambda(lambda)?;
    }
    for e in &embeddings[1..] {
        embeddings[0].check_compatible(e)?;
    }
    let m = embeddings.len();
    let values = symmetric_matrix(embeddings, |r| kernel.value(r))?;
    let (min_eigenvalue, max_eigenvalue) = if m <= MAX_EIGEN_CHECK {
        let (lo, hi) = eigen_extremes(m, &values);
        (Some(lo), Some(hi))
    } else {
        (None, None)
    };
    Ok(GramMatrix {
        m,
        kernel,
        values,
        min_eigenvalue,
        max_eigenvalue,
    })
}

/// Gram matrix of real signals, embedded by `partition` or by the sign split
/// when no partition is given.
pub fn gram(signals: &[Signal], kernel: KernelKind, partition: Option<&StatePartition>) -> Result<GramMatrix> {
    if signals.is_empty() {
        return Err(Error::InvalidParameter("gram matrix needs at least one signal".into()));
    }
    for s in &signals[1..] {
        check_lengths(signals[0].len(), s.len())?;
    }
    let embedded: Vec<MassEmbedding> = signals
        .par_iter()
        .map(|s| match partition {
            Some(p) => embeddings::multistate(s, p),
            None => Ok(embeddings::sign_split(s)),
        })
        .collect::<Result<_>>()?;
    gram_from_embeddings(&embedded, kernel)
}
