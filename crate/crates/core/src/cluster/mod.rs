//! Rough clustering: candidate clusters from seeds, the cover and disclusion conditions,
//! scoring and selection, and the band-data pipeline.

mod data;
mod score;

pub use data::{load_dataset, step1_relation, ColumnRoles, Dataset, Metric, Threshold};
pub use score::{nasd_pairs, score_clusters, score_rows, ClusterScore, ComponentScore, ScoreMetric, ScoreTable};

use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::Float;
use serde::Serialize;

use crate::cud::{CudSpace, Flavor, RoughTuple, UpperMode};
use crate::error::{Error, Result};
use crate::grpd::{build_updir_groupoid, ChoiceStrategy, Groupoid};
use crate::piappr::PiSpace;
use crate::relsys::{BasicApprox, NeighborhoodKind, RelationalSystem};
use crate::set::ElementSet;

/// A rough tuple together with the set it approximates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub id: usize,
    pub source: ElementSet,
    pub tuple: RoughTuple,
}

#[derive(Clone, Debug)]
pub struct ClusterSet {
    pub system: RelationalSystem,
    pub groupoid: Option<Groupoid>,
    pub flavor: Flavor,
    pub clusters: Vec<Cluster>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedKind {
    /// `[x]` for every element.
    #[default]
    Neighborhood,
    /// Minimal granules through every element.
    Granule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DisclusionReason {
    Inclusion,
    RoughEquality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisclusionPair {
    pub first: usize,
    pub second: usize,
    pub reason: DisclusionReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub covers: bool,
    pub disclusion_pairs: Vec<DisclusionPair>,
    pub valid: bool,
}

/// Computes rough tuples of one flavor.
pub(crate) enum Approximator<'a> {
    Cud(CudSpace<'a>),
    Pi(PiSpace<'a>),
    Basic(&'a RelationalSystem),
}

impl<'a> Approximator<'a> {
    pub fn new(sys: &'a RelationalSystem, g: Option<&'a Groupoid>, flavor: Flavor, cap: usize) -> Result<Self> {
        Ok(match flavor {
            Flavor::Cud => Approximator::Cud(CudSpace::new(sys, cap)?),
            Flavor::Pi => {
                let g = g.ok_or_else(|| Error::InvalidParameter("pi flavor needs a groupoid".into()))?;
                if g.len() != sys.len() {
                    return Err(Error::UniverseMismatch {
                        left: sys.len(),
                        right: g.len(),
                    });
                }
                if g.len() <= cap {
                    Approximator::Pi(PiSpace::new(g, cap)?)
                } else {
                    Approximator::Pi(PiSpace::local(g))
                }
            }
            Flavor::Basic => Approximator::Basic(sys),
        })
    }

    pub fn tuple(&self, a: &ElementSet) -> RoughTuple {
        match self {
            Approximator::Cud(sp) => sp.tuple(a, UpperMode::Pointwise),
            Approximator::Pi(sp) => sp.rough_tuple(a),
            Approximator::Basic(sys) => RoughTuple::new(
                sys.approx_basic(a, BasicApprox::Lower),
                sys.approx_basic(a, BasicApprox::Upper),
                Flavor::Basic,
            ),
        }
    }

    fn granule_seeds(&self, sys: &RelationalSystem, x: usize) -> Vec<ElementSet> {
        match self {
            Approximator::Cud(sp) => sp.minimal_granules(x).to_vec(),
            Approximator::Pi(sp) => vec![sp.groupoid().generate(&ElementSet::singleton(sys.len(), x))],
            Approximator::Basic(_) => vec![sys.neighborhood(x, NeighborhoodKind::Direct).expect("valid id")],
        }
    }
}

/// Connected components of the relation read as an undirected graph.
fn components(sys: &RelationalSystem) -> Vec<ElementSet> {
    let n = sys.len();
    let mut comp_of: Vec<Option<usize>> = vec![None; n];
    let mut comps: Vec<ElementSet> = Vec::new();
    for start in 0..n {
        if comp_of[start].is_some() {
            continue;
        }
        let id = comps.len();
        let mut comp = ElementSet::singleton(n, start);
        let mut stack = vec![start];
        comp_of[start] = Some(id);
        while let Some(x) = stack.pop() {
            for y in sys.successors(x).union(sys.predecessors(x)).iter() {
                if comp_of[y].is_none() {
                    comp_of[y] = Some(id);
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        comps.push(comp);
    }
    let mut per_element = vec![ElementSet::empty(n); n];
    for c in &comps {
        for x in c {
            per_element[x] = c.clone();
        }
    }
    per_element
}

/// Candidates from seeds and their connected components, deduplicated up to rough equality,
/// then chosen greedily (largest lower first) to cover the universe without breaking
/// disclusion. Uncovered elements are returned, not patched.
pub fn propose_clusters(
    sys: &RelationalSystem,
    g: Option<&Groupoid>,
    flavor: Flavor,
    seeds: SeedKind,
    cap: usize,
) -> Result<(ClusterSet, ElementSet)> {
    let approx = Approximator::new(sys, g, flavor, cap)?;
    let comp = components(sys);
    let mut sources: Vec<ElementSet> = Vec::new();
    let mut seen = HashSet::new();
    for x in sys.elements() {
        let base = match seeds {
            SeedKind::Neighborhood => vec![sys.neighborhood(x, NeighborhoodKind::Direct)?],
            SeedKind::Granule => approx.granule_seeds(sys, x),
        };
        for s in base {
            let mut grown = s.clone();
            for y in &s {
                grown.union_with(&comp[y]);
            }
            if grown.is_empty() {
                grown = comp[x].clone();
            }
            for cand in [s, grown] {
                if !cand.is_empty() && seen.insert(cand.clone()) {
                    sources.push(cand);
                }
            }
        }
    }
    let mut candidates: Vec<(ElementSet, RoughTuple)> = Vec::new();
    for s in sources {
        let t = approx.tuple(&s);
        if !t.lower.is_empty() && !candidates.iter().any(|(_, u)| u.roughly_equal(&t)) {
            candidates.push((s, t));
        }
    }
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        candidates[j]
            .1
            .lower
            .len()
            .cmp(&candidates[i].1.lower.len())
            .then_with(|| candidates[i].0.canonical_cmp(&candidates[j].0))
    });
    let mut chosen: Vec<Cluster> = Vec::new();
    let mut covered = sys.empty_set();
    for i in order {
        if covered.is_full() {
            break;
        }
        let (source, tuple) = &candidates[i];
        if tuple.lower.is_subset(&covered) {
            continue;
        }
        if chosen.iter().any(|c| disclusion_reason(c, source, tuple).is_some()) {
            continue;
        }
        covered.union_with(&tuple.lower);
        chosen.push(Cluster {
            id: chosen.len(),
            source: source.clone(),
            tuple: tuple.clone(),
        });
    }
    let uncovered = covered.complement();
    Ok((
        ClusterSet {
            system: sys.clone(),
            groupoid: g.cloned(),
            flavor,
            clusters: chosen,
        },
        uncovered,
    ))
}

fn disclusion_reason(c: &Cluster, source: &ElementSet, tuple: &RoughTuple) -> Option<DisclusionReason> {
    if c.tuple.roughly_equal(tuple) {
        Some(DisclusionReason::RoughEquality)
    } else if c.source.is_subset(source) || source.is_subset(&c.source) {
        Some(DisclusionReason::Inclusion)
    } else {
        None
    }
}

/// Re-derives every tuple from its source, then checks cover and disclusion.
pub fn validate_clustering(cs: &ClusterSet, cap: usize) -> Result<ValidityReport> {
    let approx = Approximator::new(&cs.system, cs.groupoid.as_ref(), cs.flavor, cap)?;
    let mut covered = cs.system.empty_set();
    for c in &cs.clusters {
        if c.tuple.flavor != cs.flavor || !c.tuple.satisfies_invariants() || approx.tuple(&c.source) != c.tuple {
            return Err(Error::TupleNotReproducible(c.id));
        }
        covered.union_with(&c.tuple.lower);
    }
    let mut disclusion_pairs = Vec::new();
    for (i, x) in cs.clusters.iter().enumerate() {
        for y in &cs.clusters[i + 1..] {
            if let Some(reason) = disclusion_reason(x, &y.source, &y.tuple) {
                disclusion_pairs.push(DisclusionPair {
                    first: x.id,
                    second: y.id,
                    reason,
                });
            }
        }
    }
    let covers = covered.is_full();
    Ok(ValidityReport {
        covers,
        valid: covers && disclusion_pairs.is_empty(),
        disclusion_pairs,
    })
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub clusters: ClusterSet,
    /// `(cluster id, weighted score)`, best first.
    pub ranking: Vec<(usize, f64)>,
    /// More than `k` clusters were needed to keep the cover.
    pub exceeded_k: bool,
}

/// Ranks by weighted lower-component score (ties by id), keeps what the cover needs in rank
/// order, then fills up to `k`. Kept clusters stay in id order.
pub fn select_clusters(cs: &ClusterSet, scores: &ScoreTable, weights: &[f64], k: usize) -> Result<Selection> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(Error::InvalidParameter("weights must be non-negative".into()));
    }
    let mut ranking: Vec<(usize, f64)> = cs
        .clusters
        .iter()
        .map(|c| {
            let s = scores
                .scores
                .iter()
                .find(|s| s.cluster == c.id)
                .map_or(f64::INFINITY, |s| s.weighted(weights));
            (c.id, s)
        })
        .collect();
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let by_id = |id: usize| cs.clusters.iter().find(|c| c.id == id).expect("ranked id");
    let mut target = cs.system.empty_set();
    for c in &cs.clusters {
        target.union_with(&c.tuple.lower);
    }
    let mut kept: Vec<usize> = Vec::new();
    let mut covered = cs.system.empty_set();
    for &(id, _) in &ranking {
        if covered == target {
            break;
        }
        let lower = &by_id(id).tuple.lower;
        if !lower.is_subset(&covered) {
            covered.union_with(lower);
            kept.push(id);
        }
    }
    let exceeded_k = kept.len() > k;
    for &(id, _) in &ranking {
        if kept.len() >= k {
            break;
        }
        if !kept.contains(&id) {
            kept.push(id);
        }
    }
    let clusters = cs
        .clusters
        .iter()
        .filter(|c| kept.contains(&c.id))
        .cloned()
        .collect();
    Ok(Selection {
        clusters: ClusterSet {
            clusters,
            ..cs.clone()
        },
        ranking,
        exceeded_k,
    })
}

/// What to do when the induced relation is not up-directed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectednessPolicy {
    /// Fail.
    #[default]
    Require,
    /// Fall back to neighborhood approximations.
    Basic,
    /// Add a synthetic row above every row.
    AugmentTop,
}

pub const TOP_LABEL: &str = "⊤";

#[derive(Clone, Debug)]
pub struct PipelineConfig<T> {
    pub rho: Metric,
    pub eps: Threshold<T>,
    pub flavor: Flavor,
    pub policy: DirectednessPolicy,
    pub seeds: SeedKind,
    pub strategy: ChoiceStrategy,
    pub cap: usize,
    pub metric: ScoreMetric,
    pub weights: Vec<f64>,
    pub k: Option<usize>,
}

impl<T: Float> PipelineConfig<T> {
    pub fn new(eps: T) -> Self {
        PipelineConfig {
            rho: Metric::Euclidean,
            eps: Threshold::Global(eps),
            flavor: Flavor::Cud,
            policy: DirectednessPolicy::Require,
            seeds: SeedKind::Neighborhood,
            strategy: ChoiceStrategy::new(crate::grpd::ChoiceMode::MinIndex),
            cap: crate::relsys::DEFAULT_CAP,
            metric: ScoreMetric::Nasd,
            weights: Vec::new(),
            k: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub up_directed: bool,
    pub augmented: bool,
    pub flavor: Flavor,
    pub proposed: ClusterSet,
    pub uncovered: ElementSet,
    pub validity: ValidityReport,
    pub scores: ScoreTable,
    pub selection: Selection,
    pub selection_validity: ValidityReport,
}

/// The induced system after the directedness policy, with its groupoid for the pi flavor.
#[derive(Clone, Debug)]
pub struct PreparedSystem {
    pub system: RelationalSystem,
    pub groupoid: Option<Groupoid>,
    pub flavor: Flavor,
    pub up_directed: bool,
    pub augmented: bool,
}

pub fn prepare_system<T: Float>(ds: &Dataset<T>, cfg: &PipelineConfig<T>) -> Result<PreparedSystem> {
    let base = step1_relation(ds, cfg.rho, &cfg.eps)?;
    let up_directed = base.is_up_directed();
    let (system, flavor, augmented) = if up_directed {
        (base, cfg.flavor, false)
    } else {
        match cfg.policy {
            DirectednessPolicy::Require => {
                let (a, b) = base.non_directed_witness().expect("not up-directed");
                return Err(Error::NotUpDirected {
                    a: base.label(a).to_string(),
                    b: base.label(b).to_string(),
                });
            }
            DirectednessPolicy::Basic => (base, Flavor::Basic, false),
            DirectednessPolicy::AugmentTop => (base.with_top(TOP_LABEL)?, cfg.flavor, true),
        }
    };
    let groupoid = match flavor {
        Flavor::Pi => Some(build_updir_groupoid(&system, &cfg.strategy)?),
        _ => None,
    };
    Ok(PreparedSystem {
        system,
        groupoid,
        flavor,
        up_directed,
        augmented,
    })
}

/// Clusters approximating the given sources, in order.
pub fn clusters_from_sources(
    sys: &RelationalSystem,
    g: Option<&Groupoid>,
    flavor: Flavor,
    sources: Vec<ElementSet>,
    cap: usize,
) -> Result<ClusterSet> {
    let approx = Approximator::new(sys, g, flavor, cap)?;
    let clusters = sources
        .into_iter()
        .enumerate()
        .map(|(id, source)| {
            if source.universe_size() != sys.len() {
                return Err(Error::UniverseMismatch {
                    left: sys.len(),
                    right: source.universe_size(),
                });
            }
            let tuple = approx.tuple(&source);
            Ok(Cluster { id, source, tuple })
        })
        .collect::<Result<_>>()?;
    Ok(ClusterSet {
        system: sys.clone(),
        groupoid: g.cloned(),
        flavor,
        clusters,
    })
}

/// Relation, candidate clusters, validation, scoring and selection.
pub fn run_pipeline<T: Float>(ds: &Dataset<T>, cfg: &PipelineConfig<T>) -> Result<PipelineOutput> {
    let PreparedSystem {
        system: sys,
        groupoid,
        flavor,
        up_directed,
        augmented,
    } = prepare_system(ds, cfg)?;
    let (proposed, uncovered) = propose_clusters(&sys, groupoid.as_ref(), flavor, cfg.seeds, cfg.cap)?;
    let validity = validate_clustering(&proposed, cfg.cap)?;
    let scores = score_clusters(ds, &proposed, cfg.metric)?;
    let k = cfg.k.unwrap_or(proposed.clusters.len().max(1));
    let selection = select_clusters(&proposed, &scores, &cfg.weights, k)?;
    let selection_validity = validate_clustering(&selection.clusters, cfg.cap)?;
    Ok(PipelineOutput {
        up_directed,
        augmented,
        flavor,
        proposed,
        uncovered,
        validity,
        scores,
        selection,
        selection_validity,
    })
}

/// `row,cluster` lines: the first cluster whose lower holds the row, else `boundary` or
/// `unassigned`.
pub fn segmentation_csv<T: Float>(ds: &Dataset<T>, cs: &ClusterSet) -> String {
    let mut out = String::from("row,cluster\n");
    for (i, id) in ds.ids().iter().enumerate() {
        let label = match cs.clusters.iter().find(|c| c.tuple.lower.contains(i)) {
            Some(c) => c.id.to_string(),
            None if cs.clusters.iter().any(|c| c.tuple.boundary.contains(i)) => "boundary".into(),
            None => "unassigned".into(),
        };
        let _ = writeln!(out, "{id},{label}");
    }
    out
}
