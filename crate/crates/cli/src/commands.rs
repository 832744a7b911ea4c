use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use peakjac::coalitions::{
    aggregate_post_intersection, build_report, coherence, cumulative_intersections, Coalition, CoalitionLimits,
    Which, DEFAULT_COALITION_CAP,
};
use peakjac::embeddings::{complex_cartesian, complex_polar, multistate, sign_split};
use peakjac::pairwise::{coordinate_envelopes, d_peak, distance_matrix, gram_from_embeddings, KernelKind};
use peakjac::probabilistic::tv_consistency_embedded;
use peakjac::synthetic::{pearson, phase_shifted_pair};
use peakjac::{AngularPartition, MassEmbedding, StatePartition};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::{load_complex_signals, load_groups, load_partition, load_sectors, load_signals};
use crate::output::{emit, json_document, matrix_csv, matrix_rows, num, CsvText};

#[derive(Debug, Parser)]
#[command(name = "peakjac", version, about = "Sign-aware peak-to-peak similarity, kernels and coalition budgets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplexMode {
    Cartesian,
    Polar,
}

#[derive(Debug, Clone, Args)]
pub struct Sink {
    /// Output file (written atomically); stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit the generation timestamp so reruns are byte-identical.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Signals as CSV (`id,v1,v2,...`) or JSON (`.json`).
    #[arg(long)]
    pub input: PathBuf,
    /// State partition JSON; the two-state sign split when omitted.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Treat the input as complex signals.
    #[arg(long, value_enum)]
    pub complex: Option<ComplexMode>,
    /// Angular sectors for polar mode (JSON file or inline); quadrants by default.
    #[arg(long)]
    pub sectors: Option<String>,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mass embeddings of every signal.
    Embed(Common),
    /// Pairwise distance matrix.
    Dist(Common),
    /// Similarity Gram matrix with its eigenvalue range.
    Gram(Common),
    /// Radial kernel matrix exp(-λ d) with its eigenvalue range.
    Kernel {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: f64,
    },
    /// Cumulative and exclusive coalition budgets.
    Budgets {
        #[command(flatten)]
        common: Common,
        /// Largest number of signals for full enumeration.
        #[arg(long, default_value_t = DEFAULT_COALITION_CAP)]
        max_coalition: usize,
        /// Enumerate all coalitions even beyond --max-coalition.
        #[arg(long)]
        force: bool,
        /// Only coalitions with at most this many members; cumulative values only.
        #[arg(long)]
        max_order: Option<usize>,
        /// State groups `{"name": [states...]}` (JSON file or inline).
        #[arg(long)]
        groups: Option<String>,
    },
    /// Grand-coalition similarity and per-coordinate incoherence.
    Coherence {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Similarity computed directly and through total variation, per pair.
    Tvcheck(Common),
    /// Phase-shifted sinusoid pair with per-sample overlap envelopes.
    Casestudy {
        /// Time shift Δt, in the units of --period.
        #[arg(long, default_value_t = 0.25)]
        shift: f64,
        #[arg(long, default_value_t = 1.0)]
        period: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[command(flatten)]
        sink: Sink,
    },
}

/// Embedded batch shared by the commands.
struct Batch {
    ids: Vec<String>,
    embeddings: Vec<MassEmbedding>,
    partition: Option<StatePartition>,
}

impl Batch {
    fn partition_id(&self) -> &str {
        self.embeddings[0].partition_id()
    }

    fn m(&self) -> usize {
        self.embeddings.len()
    }
}

fn load_batch(c: &Common) -> CliResult<Batch> {
    if c.sectors.is_some() && c.complex != Some(ComplexMode::Polar) {
        return Err(CliError::Usage("--sectors requires --complex polar".into()));
    }
    match c.complex {
        None => {
            let set = load_signals(&c.input)?;
            let partition = c.partition.as_deref().map(load_partition).transpose()?;
            let embeddings = set
                .signals
                .iter()
                .map(|s| match &partition {
                    Some(p) => multistate(s, p),
                    None => Ok(sign_split(s)),
                })
                .collect::<peakjac::Result<_>>()?;
            Ok(Batch {
                ids: set.ids,
                embeddings,
                partition,
            })
        }
        Some(mode) => {
            if c.partition.is_some() {
                return Err(CliError::Usage(
                    "--partition applies to real signals; use --sectors with complex input".into(),
                ));
            }
            let set = load_complex_signals(&c.input)?;
            let embeddings = match mode {
                ComplexMode::Cartesian => set.signals.iter().map(complex_cartesian).collect(),
                ComplexMode::Polar => {
                    let sectors = match &c.sectors {
                        Some(arg) => load_sectors(arg)?,
                        None => AngularPartition::quadrants(),
                    };
                    set.signals
                        .iter()
                        .map(|z| complex_polar(z, &sectors))
                        .collect::<peakjac::Result<_>>()?
                }
            };
            Ok(Batch {
                ids: set.ids,
                embeddings,
                partition: None,
            })
        }
    }
}

fn check_lengths(batch: &Batch) -> CliResult<()> {
    let n = batch.embeddings[0].n();
    for (id, e) in batch.ids.iter().zip(&batch.embeddings) {
        if e.n() != n {
            return Err(peakjac::Error::ShapeMismatch(format!("signal '{id}' has {} values, expected {n}", e.n())).into());
        }
    }
    Ok(())
}

fn write(sink: &Sink, default: Format, csv: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> CliResult<()> {
    let text = match sink.format.unwrap_or(default) {
        Format::Csv => csv(),
        Format::Json => json_document(json(), sink.reproducible),
    };
    emit(sink.output.as_deref(), &text)
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Embed(c) => embed(&c),
        Command::Dist(c) => dist(&c),
        Command::Gram(c) => kernel_matrix(&c, KernelKind::Peak),
        Command::Kernel { common, lambda } => kernel_matrix(&common, KernelKind::Radial { lambda }),
        Command::Budgets {
            common,
            max_coalition,
            force,
            max_order,
            groups,
        } => budgets(
            &common,
            CoalitionLimits {
                cap: max_coalition,
                force,
            },
            max_order,
            groups.as_deref(),
        ),
        Command::Coherence { common, top_k } => coherence_profile(&common, top_k),
        Command::Tvcheck(c) => tvcheck(&c),
        Command::Casestudy {
            shift,
            period,
            samples,
            sink,
        } => casestudy(shift, period, samples, &sink),
    }
}

fn embed(c: &Common) -> CliResult<()> {
    let b = load_batch(c)?;
    write(
        &c.sink,
        Format::Json,
        || {
            let mut w = CsvText::default();
            w.record(["id", "coordinate", "state", "mass"]);
            for (id, e) in b.ids.iter().zip(&b.embeddings) {
                for (atom, mass) in e.entries() {
                    w.record([id.clone(), atom.coord.to_string(), atom.state.to_string(), num(*mass)]);
                }
            }
            w.finish()
        },
        || {
            let records: Vec<Value> = b
                .ids
                .iter()
                .zip(&b.embeddings)
                .map(|(id, e)| serde_json::to_value(e.to_record(Some(id))).expect("records serialize"))
                .collect();
            json!({ "embeddings": records })
        },
    )
}

fn dist(c: &Common) -> CliResult<()> {
    let b = load_batch(c)?;
    check_lengths(&b)?;
    let d = distance_matrix(&b.embeddings)?;
    write(
        &c.sink,
        Format::Csv,
        || matrix_csv(&b.ids, &d).finish(),
        || {
            json!({
                "partition_id": b.partition_id(),
                "ids": b.ids,
                "distance": matrix_rows(b.m(), &d),
            })
        },
    )
}

fn kernel_matrix(c: &Common, kernel: KernelKind) -> CliResult<()> {
    let b = load_batch(c)?;
    check_lengths(&b)?;
    let g = gram_from_embeddings(&b.embeddings, kernel)?;
    let psd = g.is_psd();
    let eig = |v: Option<f64>| v.map_or_else(|| "unchecked".to_string(), num);
    write(
        &c.sink,
        Format::Csv,
        || {
            let mut text = matrix_csv(&b.ids, &g.values).finish();
            text.push_str(&format!("# min_eigenvalue={}\n", eig(g.min_eigenvalue)));
            text.push_str(&format!("# max_eigenvalue={}\n", eig(g.max_eigenvalue)));
            text
        },
        || {
            json!({
                "partition_id": b.partition_id(),
                "kernel": g.kernel,
                "ids": b.ids,
                "matrix": matrix_rows(g.m, &g.values),
                "min_eigenvalue": g.min_eigenvalue,
                "max_eigenvalue": g.max_eigenvalue,
                "psd": psd,
            })
        },
    )?;
    match psd {
        Some(false) => Err(CliError::NotPsd(format!(
            "min eigenvalue {} with max {}",
            eig(g.min_eigenvalue),
            eig(g.max_eigenvalue)
        ))),
        Some(true) => Ok(()),
        None => {
            eprintln!("warning: eigenvalue check skipped for {} signals", g.m);
            Ok(())
        }
    }
}

fn budgets(c: &Common, limits: CoalitionLimits, max_order: Option<usize>, groups: Option<&str>) -> CliResult<()> {
    let b = load_batch(c)?;
    check_lengths(&b)?;
    let map = groups
        .map(|g| load_groups(g, b.embeddings[0].k(), b.partition.as_ref()))
        .transpose()?;

    if let Some(r) = max_order {
        return low_order_budgets(&b, &limits, r, map.as_ref(), &c.sink);
    }

    let report = build_report(&b.embeddings, &b.ids, map.as_ref(), &limits)?;
    write(&c.sink, Format::Json, || report.to_csv(), || {
        let mut doc = report.to_json();
        doc["partition_id"] = Value::from(b.partition_id());
        doc
    })?;
    let problems = report.violations();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(peakjac::Error::InvariantViolation(problems.join("; ")).into())
    }
}

/// Cumulative intersections for small coalitions only. Exclusive budgets
/// need every superset, so none are reported.
fn low_order_budgets(
    b: &Batch,
    limits: &CoalitionLimits,
    r: usize,
    map: Option<&peakjac::CoarseningMap>,
    sink: &Sink,
) -> CliResult<()> {
    if r == 0 {
        return Err(CliError::Usage("--max-order must be at least 1".into()));
    }
    let which = Which::UpToOrder(r);
    let cumulative = cumulative_intersections(&b.embeddings, &which, limits)?;
    let per_group = map
        .map(|m| aggregate_post_intersection(&b.embeddings, m, &which, limits))
        .transpose()?;
    let mut keys: Vec<Coalition> = cumulative.keys().copied().collect();
    keys.sort_by_key(|c| c.display_key());
    write(
        sink,
        Format::Json,
        || {
            let mut w = CsvText::default();
            let mut header = vec!["coalition".to_string(), "order".into(), "cumulative".into()];
            if let Some(m) = map {
                header.extend(m.names().iter().map(|n| format!("cumulative[{n}]")));
            }
            w.record(header);
            for c in &keys {
                let mut row = vec![c.to_string(), c.order().to_string(), num(cumulative[c])];
                if let Some(g) = &per_group {
                    row.extend(g[c].iter().map(|&v| num(v)));
                }
                w.record(row);
            }
            w.finish()
        },
        || {
            let coalitions: Vec<Value> = keys
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "coalition": c.to_string(),
                        "members": c.members().iter().map(|&j| b.ids[j].clone()).collect::<Vec<_>>(),
                        "order": c.order(),
                        "cumulative": cumulative[c],
                    });
                    if let (Some(m), Some(g)) = (map, &per_group) {
                        v["groups"] = m
                            .names()
                            .iter()
                            .zip(&g[c])
                            .map(|(n, &x)| (n.clone(), json!({ "cumulative": x })))
                            .collect::<serde_json::Map<_, _>>()
                            .into();
                    }
                    v
                })
                .collect();
            json!({
                "m": b.m(),
                "max_order": r,
                "partition_id": b.partition_id(),
                "signals": b.ids.iter().zip(&b.embeddings).map(|(id, e)| json!({
                    "id": id, "l1_norm": e.total_mass(),
                })).collect::<Vec<_>>(),
                "coalitions": coalitions,
            })
        },
    )
}

fn coherence_profile(c: &Common, top_k: Option<usize>) -> CliResult<()> {
    let b = load_batch(c)?;
    check_lengths(&b)?;
    let p = coherence(&b.embeddings)?;
    let top = p.top_k(top_k.unwrap_or(p.ranked_indices.len()));
    write(
        &c.sink,
        Format::Json,
        || {
            let mut w = CsvText::default();
            w.record(["rank", "coordinate", "incoherence"]);
            for (rank, &i) in top.iter().enumerate() {
                w.record([(rank + 1).to_string(), i.to_string(), num(p.per_index_incoherence[i])]);
            }
            w.finish()
        },
        || {
            let mut doc = serde_json::to_value(&p).expect("profile serializes");
            doc["ids"] = json!(b.ids);
            doc["partition_id"] = Value::from(b.partition_id());
            doc["top_k"] = top
                .iter()
                .enumerate()
                .map(|(rank, &i)| json!({ "rank": rank + 1, "coordinate": i, "incoherence": p.per_index_incoherence[i] }))
                .collect::<Vec<_>>()
                .into();
            doc
        },
    )
}

fn tvcheck(c: &Common) -> CliResult<()> {
    let b = load_batch(c)?;
    check_lengths(&b)?;
    if b.m() < 2 {
        return Err(peakjac::Error::InvalidParameter("tvcheck needs at least two signals".into()).into());
    }
    let mut pairs = Vec::new();
    for i in 0..b.m() {
        for j in i + 1..b.m() {
            pairs.push((i, j, tv_consistency_embedded(&b.embeddings[i], &b.embeddings[j])?));
        }
    }
    write(
        &c.sink,
        Format::Json,
        || {
            let mut w = CsvText::default();
            w.record([
                "a", "b", "mass_a", "mass_b", "tv", "delta", "j_direct", "j_via_tv", "d_direct", "d_via_tv", "residual",
            ]);
            for (i, j, r) in &pairs {
                w.record([
                    b.ids[*i].clone(),
                    b.ids[*j].clone(),
                    num(r.mass_a),
                    num(r.mass_b),
                    num(r.tv),
                    r.delta.map_or_else(String::new, num),
                    num(r.j_direct),
                    num(r.j_via_tv),
                    num(r.d_direct),
                    num(r.d_via_tv),
                    num(r.residual),
                ]);
            }
            w.finish()
        },
        || {
            let rows: Vec<Value> = pairs
                .iter()
                .map(|(i, j, r)| {
                    let mut v = json!({ "a": b.ids[*i], "b": b.ids[*j] });
                    if let (Value::Object(dst), Value::Object(src)) =
                        (&mut v, serde_json::to_value(r).expect("serializes"))
                    {
                        dst.extend(src);
                    }
                    v
                })
                .collect();
            json!({ "partition_id": b.partition_id(), "pairs": rows })
        },
    )
}

fn casestudy(shift: f64, period: f64, samples: usize, sink: &Sink) -> CliResult<()> {
    let (a, b) = phase_shifted_pair(samples, period, shift)?;
    let r = d_peak(&a, &b)?;
    let env = coordinate_envelopes(&sign_split(&a), &sign_split(&b))?;
    let rho = pearson(a.values(), b.values());
    let times: Vec<f64> = (0..samples).map(|i| i as f64 * period / samples as f64).collect();
    write(
        sink,
        Format::Csv,
        || {
            let mut w = CsvText::default();
            w.record(["t", "a", "b", "intersection", "union"]);
            for i in 0..samples {
                w.record([
                    num(times[i]),
                    num(a.values()[i]),
                    num(b.values()[i]),
                    num(env[i].0),
                    num(env[i].1),
                ]);
            }
            w.finish()
        },
        || {
            json!({
                "samples": samples,
                "period": period,
                "shift": shift,
                "j_peak": r.similarity,
                "d_peak": r.distance,
                "pearson": rho,
                "cos_phase": (2.0 * PI * shift / period).cos(),
                "t": times,
                "a": a.values(),
                "b": b.values(),
                "intersection": env.iter().map(|e| e.0).collect::<Vec<_>>(),
                "union": env.iter().map(|e| e.1).collect::<Vec<_>>(),
            })
        },
    )
}
