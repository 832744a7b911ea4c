//! Multi-signal analysis: cumulative coalition intersections `N(S)`, exclusive
//! budgets `Ñ(S)` by Möbius inversion over the Boolean lattice, budget closure,
//! post-intersection state aggregation and the grand-coalition coherence
//! profile.
//!
//! Coalitions are bitmasks over the signal indices. Member lists in reports
//! are 1-based (`"1,3"` is the coalition of the first and third signals).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::embeddings::{self, Atom, MassEmbedding, Signal};
use crate::error::{Error, Result};
use crate::partitions::{CoarseningMap, StatePartition};

/// Default ceiling on the number of signals in a full coalition analysis.
pub const DEFAULT_COALITION_CAP: usize = 20;

/// Hard ceiling imposed by the 64-bit coalition mask.
pub const MAX_SIGNALS: usize = 63;

/// Relative closure tolerance `|‖A_j‖₁ − Σ_{S∋j} Ñ(S)| ≤ tol · ‖A_j‖₁`.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

/// Slack on negative exclusive budgets, relative to the largest `N(S)`.
pub const NONNEGATIVITY_SLACK: f64 = 1e-9;

/// Exclusive budgets below this magnitude print as zero in text tables.
pub const DISPLAY_ZERO: f64 = 1e-12;

/// A nonempty subset of the signals, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(u64);

impl Coalition {
    pub fn from_mask(mask: u64) -> Result<Self> {
        if mask == 0 {
            return Err(Error::InvalidParameter("coalition must be nonempty".into()));
        }
        Ok(Self(mask))
    }

    /// From 0-based member indices.
    pub fn from_indices(members: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &j in members {
            if j >= MAX_SIGNALS {
                return Err(Error::InvalidParameter(format!("member index {j} too large")));
            }
            mask |= 1 << j;
        }
        Self::from_mask(mask)
    }

    /// Parses a 1-based member list such as `"1,3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut idx = Vec::new();
        for part in text.split(',') {
            let j: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad coalition member '{part}'")))?;
            if j == 0 {
                return Err(Error::InvalidParameter("coalition members are 1-based".into()));
            }
            idx.push(j - 1);
        }
        Self::from_indices(&idx)
    }

    pub fn full(m: usize) -> Self {
        Self(full_mask(m))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn order(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, j: usize) -> bool {
        j < 64 && self.0 & (1 << j) != 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based member indices in increasing order.
    pub fn members(self) -> Vec<usize> {
        (0..64).filter(|&j| self.contains(j)).collect()
    }

    /// Sort key: by order, then by member list.
    pub fn display_key(self) -> (u32, Vec<usize>) {
        (self.order(), self.members())
    }

    fn highest(self) -> usize {
        63 - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|j| (j + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Which coalitions to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum Which {
    /// Every nonempty subset; subject to the coalition cap.
    All,
    /// Every coalition with at most `r` members. No inversion is possible
    /// from such a table, since exclusive budgets need all supersets.
    UpToOrder(usize),
    Explicit(Vec<Coalition>),
}

/// Limits on full coalition enumeration, whose cost is `O(2^m nK)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoalitionLimits {
    pub cap: usize,
    /// Allow `m` beyond `cap` (still bounded by [`MAX_SIGNALS`]).
    pub force: bool,
}

impl Default for CoalitionLimits {
    fn default() -> Self {
        Self {
            cap: DEFAULT_COALITION_CAP,
            force: false,
        }
    }
}

impl CoalitionLimits {
    fn check(&self, m: usize) -> Result<()> {
        if m > MAX_SIGNALS || (m > self.cap && !self.force) {
            return Err(Error::CoalitionCapExceeded {
                m,
                cap: if m > MAX_SIGNALS { MAX_SIGNALS } else { self.cap },
            });
        }
        Ok(())
    }
}

fn check_batch(embeddings: &[MassEmbedding]) -> Result<()> {
    let first = embeddings
        .first()
        .ok_or_else(|| Error::InvalidParameter("no signals supplied".into()))?;
    for e in &embeddings[1..] {
        first.check_compatible(e)?;
    }
    if embeddings.len() > MAX_SIGNALS {
        return Err(Error::CoalitionCapExceeded {
            m: embeddings.len(),
            cap: MAX_SIGNALS,
        });
    }
    Ok(())
}

/// Calls `visit(atom, min)` for every atom occupied by all members of
/// `coalition`, with the coalition-wide minimum mass. Atoms missing from any
/// member contribute zero and are skipped.
fn for_each_shared_atom(
    embeddings: &[MassEmbedding],
    coalition: Coalition,
    mut visit: impl FnMut(Atom, f64),
) {
    let members = coalition.members();
    let pivot = *members
        .iter()
        .min_by_key(|&&j| embeddings[j].nnz())
        .expect("coalition is nonempty");
    'atoms: for &(atom, mass) in embeddings[pivot].entries() {
        let mut lo = mass;
        for &j in &members {
            if j == pivot {
                continue;
            }
            let v = embeddings[j].get(atom.coord, atom.state);
            if v == 0.0 {
                continue 'atoms;
            }
            lo = lo.min(v);
        }
        visit(atom, lo);
    }
}

fn coalition_intersection(embeddings: &[MassEmbedding], coalition: Coalition) -> f64 {
    let mut total = 0.0;
    for_each_shared_atom(embeddings, coalition, |_, v| total += v);
    total
}

/// All masks over `m` bits with between 1 and `r` bits set, by increasing
/// order (Gosper's hack within each order).
fn masks_up_to_order(m: usize, r: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let limit = full_mask(m);
    for k in 1..=r.min(m) {
        let mut x: u64 = (1u64 << k) - 1;
        loop {
            out.push(x);
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 || r > limit {
                break;
            }
            let next = (((r ^ x) >> 2) / c) | r;
            if next > limit {
                break;
            }
            x = next;
        }
    }
    out
}

fn resolve(which: &Which, m: usize, limits: &CoalitionLimits) -> Result<Vec<Coalition>> {
    match which {
        Which::All => {
            limits.check(m)?;
            Ok((1..=full_mask(m)).map(Coalition).collect())
        }
        Which::UpToOrder(r) => Ok(masks_up_to_order(m, *r).into_iter().map(Coalition).collect()),
        Which::Explicit(list) => {
            for c in list {
                if c.highest() >= m {
                    return Err(Error::InvalidParameter(format!(
                        "coalition {c} refers to a signal beyond the {m} supplied"
                    )));
                }
            }
            Ok(list.clone())
        }
    }
}

/// Cumulative intersections `N(S) = Σ_atoms min_{j∈S} mass_j(atom)`.
pub fn cumulative_intersections(
    embeddings: &[MassEmbedding],
    which: &Which,
    limits: &CoalitionLimits,
) -> Result<BTreeMap<Coalition, f64>> {
    check_batch(embeddings)?;
    let coalitions = resolve(which, embeddings.len(), limits)?;
    Ok(coalitions
        .par_iter()
        .map(|&c| (c, coalition_intersection(embeddings, c)))
        .collect())
}

/// Exclusive budgets `Ñ(S) = Σ_{T ⊇ S} (−1)^{|T|−|S|} N(T)` for every
/// nonempty `S ⊆ [m]`, by the in-place superset Möbius transform.
pub fn mobius_invert(cumulative: &BTreeMap<Coalition, f64>, m: usize) -> Result<BTreeMap<Coalition, f64>> {
    let table = dense_table(cumulative, m)?;
    let inverted = superset_mobius(table, m);
    Ok((1..inverted.len())
        .map(|mask| (Coalition(mask as u64), inverted[mask]))
        .collect())
}

fn dense_table(cumulative: &BTreeMap<Coalition, f64>, m: usize) -> Result<Vec<f64>> {
    if m == 0 || m > MAX_SIGNALS || m >= usize::BITS as usize {
        return Err(Error::InvalidParameter(format!("cannot invert over {m} signals")));
    }
    let size = 1usize << m;
    let mut table = vec![f64::NAN; size];
    table[0] = 0.0;
    for (&c, &v) in cumulative {
        if (c.0 as usize) < size {
            table[c.0 as usize] = v;
        }
    }
    if let Some(mask) = table.iter().position(|v| v.is_nan()) {
        return Err(Error::MissingCoalition(Coalition(mask as u64).to_string()));
    }
    Ok(table)
}

fn superset_mobius(mut f: Vec<f64>, m: usize) -> Vec<f64> {
    for bit in 0..m {
        let b = 1usize << bit;
        for mask in 1..f.len() {
            if mask & b == 0 {
                f[mask] -= f[mask | b];
            }
        }
    }
    f
}

/// Per-group cumulative intersections, summing per-atom minima after the
/// minimum is taken. Each vector is indexed by coarse group.
pub fn aggregate_post_intersection(
    embeddings: &[MassEmbedding],
    groups: &CoarseningMap,
    which: &Which,
    limits: &CoalitionLimits,
) -> Result<BTreeMap<Coalition, Vec<f64>>> {
    check_batch(embeddings)?;
    if groups.fine_len() != embeddings[0].k() {
        return Err(Error::InvalidGrouping(format!(
            "grouping covers {} states, embeddings have {}",
            groups.fine_len(),
            embeddings[0].k()
        )));
    }
    let coalitions = resolve(which, embeddings.len(), limits)?;
    Ok(coalitions
        .par_iter()
        .map(|&c| {
            let mut per_group = vec![0.0; groups.coarse_len()];
            for_each_shared_atom(embeddings, c, |atom, v| per_group[groups.group_of(atom.state)] += v);
            (c, per_group)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupBreakdown {
    pub names: Vec<String>,
    pub cumulative: BTreeMap<Coalition, Vec<f64>>,
    pub exclusive: BTreeMap<Coalition, Vec<f64>>,
}

/// Full coalition budget decomposition of `m` signals.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionReport {
    pub m: usize,
    pub ids: Vec<String>,
    pub norms: Vec<f64>,
    pub cumulative: BTreeMap<Coalition, f64>,
    pub exclusive: BTreeMap<Coalition, f64>,
    /// `‖A_j‖₁ − Σ_{S∋j} Ñ(S)` per signal.
    pub closure_residuals: Vec<f64>,
    pub groups: Option<GroupBreakdown>,
}

impl CoalitionReport {
    /// Closure, nonnegativity and monotonicity checks; returns every violation found.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (j, (&r, &norm)) in self.closure_residuals.iter().zip(&self.norms).enumerate() {
            // written so that a NaN residual counts as a violation
            let within = r.abs() <= CLOSURE_TOLERANCE * norm.max(f64::MIN_POSITIVE);
            if !within && r != 0.0 {
                out.push(format!("closure residual {r:e} for signal {}", j + 1));
            }
        }
        let peak = self.cumulative.values().fold(0.0f64, |a, &b| a.max(b));
        for (c, &v) in &self.exclusive {
            if v < -NONNEGATIVITY_SLACK * peak {
                out.push(format!("negative exclusive budget {v:e} for {{{c}}}"));
            }
        }
        for (&s, &ns) in &self.cumulative {
            for b in 0..self.m {
                let t = Coalition(s.0 | (1 << b));
                if t == s {
                    continue;
                }
                if let Some(&nt) = self.cumulative.get(&t) {
                    if nt > ns {
                        out.push(format!("N({{{t}}}) = {nt} exceeds N({{{s}}}) = {ns}"));
                    }
                }
            }
        }
        out
    }

    fn sorted_coalitions(&self) -> Vec<Coalition> {
        let mut keys: Vec<Coalition> = self.cumulative.keys().copied().collect();
        keys.sort_by_key(|c| c.display_key());
        keys
    }

    /// Machine form; coalitions keyed by 1-based member lists, values exact.
    pub fn to_json(&self) -> Value {
        let keys = self.sorted_coalitions();
        let coalitions: Vec<Value> = keys
            .iter()
            .map(|c| {
                let mut v = json!({
                    "coalition": c.to_string(),
                    "members": c.members().iter().map(|j| self.ids[*j].clone()).collect::<Vec<_>>(),
                    "order": c.order(),
                    "cumulative": self.cumulative[c],
                    "exclusive": self.exclusive[c],
                });
                if let Some(g) = &self.groups {
                    let per: serde_json::Map<String, Value> = g
                        .names
                        .iter()
                        .enumerate()
                        .map(|(idx, name)| {
                            (
                                name.clone(),
                                json!({
                                    "cumulative": g.cumulative[c][idx],
                                    "exclusive": g.exclusive[c][idx],
                                }),
                            )
                        })
                        .collect();
                    v["groups"] = Value::Object(per);
                }
                v
            })
            .collect();
        json!({
            "m": self.m,
            "signals": self.ids.iter().zip(&self.norms).zip(&self.closure_residuals).map(|((id, n), r)| json!({
                "id": id, "l1_norm": n, "closure_residual": r,
            })).collect::<Vec<_>>(),
            "coalitions": coalitions,
        })
    }

    /// Flat CSV: `coalition,order,cumulative,exclusive` plus per-group columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("coalition,order,cumulative,exclusive");
        if let Some(g) = &self.groups {
            for name in &g.names {
                out.push_str(&format!(",cumulative[{name}],exclusive[{name}]"));
            }
        }
        out.push('\n');
        for c in self.sorted_coalitions() {
            out.push_str(&format!(
                "\"{c}\",{},{:?},{:?}",
                c.order(),
                self.cumulative[&c],
                self.exclusive[&c]
            ));
            if let Some(g) = &self.groups {
                for idx in 0..g.names.len() {
                    out.push_str(&format!(",{:?},{:?}", g.cumulative[&c][idx], g.exclusive[&c][idx]));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Text table for people; tiny exclusive budgets print as zero.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<24} {:>5} {:>16} {:>16}\n", "coalition", "order", "N(S)", "exclusive");
        for c in self.sorted_coalitions() {
            let ex = self.exclusive[&c];
            let ex = if ex.abs() < DISPLAY_ZERO { 0.0 } else { ex };
            out.push_str(&format!(
                "{:<24} {:>5} {:>16.6} {:>16.6}\n",
                format!("{{{c}}}"),
                c.order(),
                self.cumulative[&c],
                ex
            ));
        }
        out
    }
}

/// Builds the full report without checking it.
pub fn build_report(
    embeddings: &[MassEmbedding],
    ids: &[String],
    groups: Option<&CoarseningMap>,
    limits: &CoalitionLimits,
) -> Result<CoalitionReport> {
    check_batch(embeddings)?;
    let m = embeddings.len();
    limits.check(m)?;
    if ids.len() != m {
        return Err(Error::ShapeMismatch(format!("{} ids for {m} signals", ids.len())));
    }
    let cumulative = cumulative_intersections(embeddings, &Which::All, limits)?;
    let exclusive = mobius_invert(&cumulative, m)?;
    let norms: Vec<f64> = embeddings.iter().map(MassEmbedding::total_mass).collect();
    let closure_residuals = closure_residuals(&exclusive, &norms);
    let groups = match groups {
        None => None,
        Some(map) => {
            let cum = aggregate_post_intersection(embeddings, map, &Which::All, limits)?;
            let mut exclusive_by_group: BTreeMap<Coalition, Vec<f64>> =
                cum.keys().map(|&c| (c, vec![0.0; map.coarse_len()])).collect();
            for g in 0..map.coarse_len() {
                let slice: BTreeMap<Coalition, f64> = cum.iter().map(|(&c, v)| (c, v[g])).collect();
                for (c, v) in mobius_invert(&slice, m)? {
                    exclusive_by_group.get_mut(&c).expect("same coalitions")[g] = v;
                }
            }
            Some(GroupBreakdown {
                names: map.names().to_vec(),
                cumulative: cum,
                exclusive: exclusive_by_group,
            })
        }
    };
    Ok(CoalitionReport {
        m,
        ids: ids.to_vec(),
        norms,
        cumulative,
        exclusive,
        closure_residuals,
        groups,
    })
}

/// `‖A_j‖₁ − Σ_{S∋j} Ñ(S)` for each signal.
pub fn closure_residuals(exclusive: &BTreeMap<Coalition, f64>, norms: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; norms.len()];
    for (c, &v) in exclusive {
        for j in c.members() {
            if j < sums.len() {
                sums[j] += v;
            }
        }
    }
    norms.iter().zip(sums).map(|(n, s)| n - s).collect()
}

/// Embeds `signals` under `partition`, builds the report and fails if closure,
/// nonnegativity or monotonicity is violated.
pub fn budget_report(
    signals: &[Signal],
    partition: &StatePartition,
    limits: &CoalitionLimits,
) -> Result<CoalitionReport> {
    let embedded: Vec<MassEmbedding> = signals
        .iter()
        .map(|s| embeddings::multistate(s, partition))
        .collect::<Result<_>>()?;
    let ids: Vec<String> = signals
        .iter()
        .enumerate()
        .map(|(j, s)| s.id().map(str::to_string).unwrap_or_else(|| format!("A{}", j + 1)))
        .collect();
    let report = build_report(&embedded, &ids, None, limits)?;
    let problems = report.violations();
    if !problems.is_empty() {
        return Err(Error::InvariantViolation(problems.join("; ")));
    }
    Ok(report)
}

/// Grand-coalition agreement and per-coordinate disagreement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceProfile {
    pub m: usize,
    pub grand_intersection: f64,
    pub grand_union: f64,
    pub grand_similarity: f64,
    pub grand_distance: f64,
    /// `M_i = Σ_k (max_j − min_j)` for each coordinate.
    pub per_index_incoherence: Vec<f64>,
    /// Coordinates by decreasing incoherence (ties by index).
    pub ranked_indices: Vec<usize>,
}

impl CoherenceProfile {
    pub fn top_k(&self, k: usize) -> &[usize] {
        &self.ranked_indices[..k.min(self.ranked_indices.len())]
    }
}

/// Single pass over all atoms, `O(m · nnz)`.
pub fn coherence(embeddings: &[MassEmbedding]) -> Result<CoherenceProfile> {
    check_batch(embeddings)?;
    let m = embeddings.len();
    if m < 2 {
        return Err(Error::InvalidParameter("coherence needs at least two signals".into()));
    }
    let n = embeddings[0].n();
    // atom -> (members present, min, max)
    let mut atoms: BTreeMap<Atom, (usize, f64, f64)> = BTreeMap::new();
    for e in embeddings {
        for &(a, v) in e.entries() {
            let slot = atoms.entry(a).or_insert((0, f64::INFINITY, 0.0));
            slot.0 += 1;
            slot.1 = slot.1.min(v);
            slot.2 = slot.2.max(v);
        }
    }
    let mut inter = 0.0;
    let mut union = 0.0;
    let mut per_index = vec![0.0; n];
    for (a, (count, lo, hi)) in atoms {
        let lo = if count == m { lo } else { 0.0 };
        inter += lo;
        union += hi;
        per_index[a.coord] += hi - lo;
    }
    let similarity = if union == 0.0 { 1.0 } else { inter / union };
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&x, &y| per_index[y].total_cmp(&per_index[x]).then(x.cmp(&y)));
    Ok(CoherenceProfile {
        m,
        grand_intersection: inter,
        grand_union: union,
        grand_similarity: similarity,
        grand_distance: 1.0 - similarity,
        per_index_incoherence: per_index,
        ranked_indices: ranked,
    })
}
