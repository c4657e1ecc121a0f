use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dirough::acp::{AcpAlgebra, CarrierMode};
use dirough::audit::{audit_claims, AuditConfig, ClaimStatus, TierFilter};
use dirough::cluster::{
    load_dataset, prepare_system, propose_clusters, run_pipeline, score_clusters, segmentation_csv,
    validate_clustering, ClusterSet, ColumnRoles, Dataset, DirectednessPolicy, Metric, PipelineConfig,
    PreparedSystem, ScoreMetric, ScoreTable, SeedKind, Threshold, ValidityReport,
};
use dirough::cud::{cud_family, CudSpace, Flavor, UpperMode};
use dirough::fixture::{self, CheckStatus};
use dirough::grpd::{check_laws, is_pi_constrained, law_ids, verify_b_of_s, LawVerdict};
use dirough::piappr::PiSpace;
use dirough::regions::{RegionKind, Regions};
use dirough::relsys::{to_dot, BasicApprox, SpaceProfile};
use dirough::verdict::{Verdict, Witness, WitnessValue};
use dirough::{ElementSet, RelationalSystem};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::*;
use crate::inputs::{self, Loaded};
use crate::UsageError;

/// A rendered result: JSON value, text form and exit status.
pub struct Out {
    pub json: Value,
    pub text: String,
    pub status: u8,
}

impl Out {
    fn ok(json: Value, text: String) -> Self {
        Out { json, text, status: 0 }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn labels(sys: &RelationalSystem, s: &ElementSet) -> Vec<String> {
    sys.labels_of(s)
}

fn witness_value(v: &WitnessValue) -> String {
    let set = |s: &[String]| format!("{{{}}}", s.join(","));
    match v {
        WitnessValue::Element(e) => e.clone(),
        WitnessValue::Set(s) => set(s),
        WitnessValue::Pair(a, b) => format!("({},{})", set(a), set(b)),
    }
}

fn witness_text(w: &Witness) -> String {
    w.iter()
        .map(|(k, v)| format!("{k}={}", witness_value(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Holds => "holds".into(),
        Verdict::Fails { witness } => format!("fails  {}", witness_text(witness)),
    }
}

pub fn run(cli: &Cli) -> Result<Out> {
    let cap = cli.cap;
    match &cli.command {
        Command::Relation(RelationCmd::Check { file, input }) => relation_check(&inputs::relation(input, file.as_deref())?),
        Command::Relation(RelationCmd::Dot { file, input }) => {
            let l = inputs::relation(input, file.as_deref())?;
            let dot = to_dot(&l.sys);
            Ok(Out::ok(json!({ "dot": dot }), dot))
        }
        Command::Approx(a) => approx(a, cap),
        Command::Granules(a) => granules(a, cap),
        Command::Groupoid(GroupoidCmd::Build { input, groupoid }) => groupoid_build(input, groupoid),
        Command::Groupoid(GroupoidCmd::Laws { input, groupoid, laws }) => groupoid_laws(input, groupoid, laws.as_deref()),
        Command::Acp(AcpCmd::Audit { input, groupoid, mode }) => acp_audit(input, groupoid, *mode, cap),
        Command::Regions(a) => regions(a),
        Command::Cluster(c) => cluster(c, cap),
        Command::Fixture(FixtureCmd::Section6) => section6(),
        Command::Audit(AuditCmd::Claims {
            input,
            groupoid,
            tier,
            instances,
            seed,
        }) => audit(input, groupoid, *tier, *instances, *seed, cap),
    }
}

fn relation_check(l: &Loaded) -> Result<Out> {
    let sys = &l.sys;
    let profile: SpaceProfile = sys.classify();
    let witness = sys
        .non_directed_witness()
        .map(|(a, b)| vec![sys.label(a).to_string(), sys.label(b).to_string()]);
    let json = json!({
        "elements": sys.labels(),
        "pairs": sys.pair_count(),
        "profile": profile,
        "non_directed_witness": witness,
    });
    let mut text = String::new();
    let _ = writeln!(text, "elements: {}", sys.labels().join(" "));
    let _ = writeln!(text, "pairs: {}", sys.pair_count());
    for (name, v) in [
        ("up_directed", profile.up_directed),
        ("reflexive", profile.reflexive),
        ("antisymmetric", profile.antisymmetric),
        ("symmetric", profile.symmetric),
        ("transitive", profile.transitive),
    ] {
        let _ = writeln!(text, "{name}: {v}");
    }
    if let Some(w) = witness {
        let _ = writeln!(text, "non_directed_witness: {} {}  (no common successor)", w[0], w[1]);
    }
    Ok(Out::ok(json, text))
}

fn approx(a: &ApproxArgs, cap: usize) -> Result<Out> {
    let l = inputs::relation(&a.input, None)?;
    let sys = &l.sys;
    let set = sys.parse_set(&a.set)?;
    let mut fields: Vec<(&str, ElementSet)> = Vec::new();
    let mut json = json!({ "set": labels(sys, &set) });
    match a.kind {
        ApproxKind::Nbd => {
            json["kind"] = json!("nbd");
            fields.push(("lower", sys.approx_basic(&set, BasicApprox::Lower)));
            fields.push(("upper", sys.approx_basic(&set, BasicApprox::Upper)));
        }
        ApproxKind::Cud => {
            let mode = match a.mode {
                UpperModeArg::Pointwise => UpperMode::Pointwise,
                UpperModeArg::Collection => UpperMode::Collection,
            };
            json["kind"] = json!("cud");
            json["mode"] = to_json(&mode);
            let t = CudSpace::new(sys, cap)?.tuple(&set, mode);
            fields.push(("lower", t.lower));
            fields.push(("upper", t.upper));
            fields.push(("boundary", t.boundary));
        }
        ApproxKind::Pi => {
            let g = inputs::groupoid(&l, &a.groupoid)?;
            let space = PiSpace::new(&g, cap)?;
            let t = space.pg_tuple(&set);
            json["kind"] = json!("pi");
            fields.push(("lower", t.lower));
            fields.push(("generated_lower", t.generated_lower));
            fields.push(("upper", t.upper));
            fields.push(("anti_lower_upper", space.anti_lower(&set)));
        }
    }
    let mut text = format!("set: {}\n", sys.format_set(&set));
    if let Some(m) = json.get("mode").and_then(Value::as_str) {
        let _ = writeln!(text, "mode: {m}");
    }
    for (name, s) in &fields {
        json[*name] = json!(labels(sys, s));
        let _ = writeln!(text, "{name}: {}", sys.format_set(s));
    }
    Ok(Out::ok(json, text))
}

fn granules(a: &GranulesArgs, cap: usize) -> Result<Out> {
    let l = inputs::relation(&a.input, None)?;
    let (kind, family) = match a.which {
        GranuleKind::Cud => ("cud", cud_family(&l.sys, cap)?),
        GranuleKind::Subgroupoid => ("subgroupoid", inputs::groupoid(&l, &a.groupoid)?.subgroupoids(cap)?),
    };
    let sets: Vec<Vec<String>> = family.members().iter().map(|s| labels(&l.sys, s)).collect();
    let mut text = format!("{kind} granules: {}\n", sets.len());
    for s in family.members() {
        let _ = writeln!(text, "{}", l.sys.format_set(s));
    }
    Ok(Out::ok(json!({ "kind": kind, "count": sets.len(), "granules": sets }), text))
}

fn groupoid_build(input: &RelationInput, gi: &GroupoidInput) -> Result<Out> {
    let l = inputs::relation(input, None)?;
    let g = inputs::groupoid(&l, gi)?;
    let n = g.len();
    let table: Vec<Vec<&str>> = (0..n)
        .map(|a| (0..n).map(|b| g.labels()[g.mul(a, b)].as_str()).collect())
        .collect();
    let json = json!({
        "labels": g.labels(),
        "table": table,
        "b_of_s": verify_b_of_s(&l.sys, &g)?,
        "pi_constrained": is_pi_constrained(&l.sys, &g),
    });
    Ok(Out::ok(json, g.to_csv()))
}

fn groupoid_laws(input: &RelationInput, gi: &GroupoidInput, laws: Option<&[String]>) -> Result<Out> {
    let l = inputs::relation(input, None)?;
    let g = inputs::groupoid(&l, gi)?;
    let ids: Vec<String> = match laws {
        Some(ids) => ids.to_vec(),
        None => law_ids().into_iter().map(String::from).collect(),
    };
    let report = check_laws(&g, &ids)?;
    let mut text = String::new();
    for id in &ids {
        let v: &LawVerdict = &report[id];
        match &v.witness {
            None => {
                let _ = writeln!(text, "{id}: holds");
            }
            Some(w) => {
                let w: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(text, "{id}: fails  {}", w.join(" "));
            }
        }
    }
    let laws: Vec<Value> = ids
        .iter()
        .map(|id| {
            let mut v = to_json(&report[id]);
            v["law"] = json!(id);
            v
        })
        .collect();
    Ok(Out::ok(json!({ "laws": laws }), text))
}

fn acp_audit(input: &RelationInput, gi: &GroupoidInput, mode: CarrierArg, cap: usize) -> Result<Out> {
    let l = inputs::relation(input, None)?;
    let g = inputs::groupoid(&l, gi)?;
    let mode = match mode {
        CarrierArg::Formal => CarrierMode::Formal,
        CarrierArg::Realized => CarrierMode::Realized,
    };
    let alg = AcpAlgebra::new(&g, cap)?;
    let carrier = alg.carrier(mode).len();
    let report = alg.audit(mode);
    let mut text = format!("mode: {}\ncarrier: {carrier}\n", to_json(&mode).as_str().unwrap_or_default());
    for e in &report.entries {
        let _ = writeln!(text, "{} (tier {}): {}", e.law, e.tier, verdict_text(&e.verdict));
    }
    let mut json = to_json(&report);
    json["carrier_size"] = json!(carrier);
    Ok(Out::ok(json, text))
}

fn regions(a: &RegionsArgs) -> Result<Out> {
    if a.set.len() != 2 {
        return Err(UsageError(format!("regions takes two --set values, found {}", a.set.len())).into());
    }
    let l = inputs::relation(&a.input, None)?;
    let sys = &l.sys;
    let g = inputs::groupoid(&l, &a.groupoid)?;
    let sa = sys.parse_set(&a.set[0])?;
    let sb = sys.parse_set(&a.set[1])?;
    let all = Regions::new(&g, sys)?.all(&sa, &sb);
    let width = RegionKind::ALL.iter().map(|k| k.name().len()).max().unwrap_or(0);
    let mut text = format!("A: {}\nB: {}\n", sys.format_set(&sa), sys.format_set(&sb));
    let mut rows = Vec::new();
    for (k, s) in &all {
        let _ = writeln!(text, "{:<width$}  {}", k.name(), sys.format_set(s));
        rows.push(json!({ "region": k.name(), "members": labels(sys, s) }));
    }
    Ok(Out::ok(
        json!({ "a": labels(sys, &sa), "b": labels(sys, &sb), "regions": rows }),
        text,
    ))
}

fn pipeline_config(d: &DataArgs, cap: usize) -> Result<PipelineConfig<f64>> {
    let eps = match (&d.class_eps, d.eps) {
        (Some(list), _) => {
            let mut map = BTreeMap::new();
            for item in list {
                let (class, v) = item
                    .split_once('=')
                    .ok_or_else(|| UsageError(format!("expected class=eps, found `{item}`")))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| UsageError(format!("`{v}` is not a number")))?;
                map.insert(class.trim().to_string(), v);
            }
            Threshold::PerClass(map)
        }
        (None, Some(e)) => Threshold::Global(e),
        (None, None) => return Err(UsageError("--eps or --class-eps is required".into()).into()),
    };
    let mut cfg = PipelineConfig::new(0.0);
    cfg.eps = eps;
    cfg.rho = match d.rho {
        RhoArg::L2 => Metric::Euclidean,
        RhoArg::Linf => Metric::Chebyshev,
    };
    cfg.flavor = match d.kind {
        FlavorArg::Cud => Flavor::Cud,
        FlavorArg::Pi => Flavor::Pi,
    };
    cfg.policy = match d.policy {
        PolicyArg::Require => DirectednessPolicy::Require,
        PolicyArg::Basic => DirectednessPolicy::Basic,
        PolicyArg::AugmentTop => DirectednessPolicy::AugmentTop,
    };
    cfg.seeds = match d.seeds {
        SeedsArg::Neighborhood => SeedKind::Neighborhood,
        SeedsArg::Granule => SeedKind::Granule,
    };
    cfg.metric = match d.metric {
        MetricArg::Nasd => ScoreMetric::Nasd,
        MetricArg::BandVariance => ScoreMetric::BandVariance,
    };
    cfg.cap = cap;
    cfg.weights = d.weights.clone().unwrap_or_default();
    cfg.k = d.k;
    Ok(cfg)
}

fn dataset(d: &DataArgs) -> Result<Dataset<f64>> {
    load_dataset(&d.data, &ColumnRoles::conventional()).with_context(|| format!("in {}", d.data.display()))
}

fn clusters_json(cs: &ClusterSet) -> Value {
    let sys = &cs.system;
    let list: Vec<Value> = cs
        .clusters
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "source": labels(sys, &c.source),
                "lower": labels(sys, &c.tuple.lower),
                "upper": labels(sys, &c.tuple.upper),
                "boundary": labels(sys, &c.tuple.boundary),
            })
        })
        .collect();
    json!(list)
}

fn clusters_text(out: &mut String, title: &str, cs: &ClusterSet) {
    let sys = &cs.system;
    let _ = writeln!(out, "{title}: {}", cs.clusters.len());
    for c in &cs.clusters {
        let _ = writeln!(
            out,
            "  #{}  lower {}  upper {}  boundary {}",
            c.id,
            sys.format_set(&c.tuple.lower),
            sys.format_set(&c.tuple.upper),
            sys.format_set(&c.tuple.boundary)
        );
    }
}

fn validity_text(out: &mut String, title: &str, v: &ValidityReport) {
    let _ = writeln!(out, "{title}: valid={} covers={} disclusion_pairs={}", v.valid, v.covers, v.disclusion_pairs.len());
    for p in &v.disclusion_pairs {
        let _ = writeln!(out, "  #{} #{} {}", p.first, p.second, to_json(&p.reason).as_str().unwrap_or_default());
    }
}

fn num(x: f64) -> String {
    format!("{x:.6}")
}

fn scores_text(out: &mut String, t: &ScoreTable) {
    let _ = writeln!(out, "scores ({}):", to_json(&t.metric).as_str().unwrap_or_default());
    let comp = |c: &Option<dirough::cluster::ComponentScore>| c.as_ref().map_or("-".to_string(), |c| num(c.value));
    for s in &t.scores {
        let _ = writeln!(
            out,
            "  #{}  lower {}  upper {}  boundary {}",
            s.cluster,
            comp(&s.lower),
            comp(&s.upper),
            comp(&s.boundary)
        );
    }
}

fn prepared_json(p: &PreparedSystem) -> Value {
    json!({ "up_directed": p.up_directed, "augmented": p.augmented, "flavor": p.flavor })
}

fn prepared_text(out: &mut String, p: &PreparedSystem) {
    let _ = writeln!(
        out,
        "up_directed: {}\naugmented: {}\nflavor: {}",
        p.up_directed,
        p.augmented,
        to_json(&p.flavor).as_str().unwrap_or_default()
    );
}

/// Clusters from a `--clusters` file (one set of row ids per line), else the proposed ones.
fn given_or_proposed(p: &PreparedSystem, file: Option<&Path>, cap: usize, seeds: SeedKind) -> Result<ClusterSet> {
    let g = p.groupoid.as_ref();
    match file {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let sources = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| p.system.parse_set(l))
                .collect::<dirough::Result<Vec<_>>>()
                .with_context(|| format!("in {}", path.display()))?;
            Ok(dirough::cluster::clusters_from_sources(&p.system, g, p.flavor, sources, cap)?)
        }
        None => Ok(propose_clusters(&p.system, g, p.flavor, seeds, cap)?.0),
    }
}

fn cluster(c: &ClusterCmd, cap: usize) -> Result<Out> {
    match c {
        ClusterCmd::Run { data, segmentation } => cluster_run(data, segmentation.as_ref(), cap),
        ClusterCmd::Validate { data, clusters } => {
            let cfg = pipeline_config(data, cap)?;
            let ds = dataset(data)?;
            let p = prepare_system(&ds, &cfg)?;
            let cs = given_or_proposed(&p, clusters.as_deref(), cap, cfg.seeds)?;
            let v = validate_clustering(&cs, cap)?;
            let mut json = prepared_json(&p);
            json["clusters"] = clusters_json(&cs);
            json["validity"] = to_json(&v);
            let mut text = String::new();
            prepared_text(&mut text, &p);
            clusters_text(&mut text, "clusters", &cs);
            validity_text(&mut text, "validity", &v);
            Ok(Out::ok(json, text))
        }
        ClusterCmd::Score { data, clusters } => {
            let cfg = pipeline_config(data, cap)?;
            let ds = dataset(data)?;
            let p = prepare_system(&ds, &cfg)?;
            let cs = given_or_proposed(&p, clusters.as_deref(), cap, cfg.seeds)?;
            let t = score_clusters(&ds, &cs, cfg.metric)?;
            let mut json = prepared_json(&p);
            json["clusters"] = clusters_json(&cs);
            json["scores"] = to_json(&t);
            let mut text = String::new();
            prepared_text(&mut text, &p);
            clusters_text(&mut text, "clusters", &cs);
            scores_text(&mut text, &t);
            Ok(Out::ok(json, text))
        }
    }
}

fn cluster_run(data: &DataArgs, segmentation: Option<&PathBuf>, cap: usize) -> Result<Out> {
    let cfg = pipeline_config(data, cap)?;
    let ds = dataset(data)?;
    let out = run_pipeline(&ds, &cfg)?;
    if let Some(path) = segmentation {
        fs::write(path, segmentation_csv(&ds, &out.selection.clusters))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let sys = &out.proposed.system;
    let kept: Vec<usize> = out.selection.clusters.clusters.iter().map(|c| c.id).collect();
    let ranking: Vec<Value> = out
        .selection
        .ranking
        .iter()
        .map(|(id, s)| json!({ "cluster": id, "score": s }))
        .collect();
    let json = json!({
        "up_directed": out.up_directed,
        "augmented": out.augmented,
        "flavor": out.flavor,
        "proposed": clusters_json(&out.proposed),
        "uncovered": labels(sys, &out.uncovered),
        "validity": out.validity,
        "scores": out.scores,
        "selection": {
            "kept": kept,
            "ranking": ranking,
            "exceeded_k": out.selection.exceeded_k,
        },
        "selection_validity": out.selection_validity,
    });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "up_directed: {}\naugmented: {}\nflavor: {}",
        out.up_directed,
        out.augmented,
        to_json(&out.flavor).as_str().unwrap_or_default()
    );
    clusters_text(&mut text, "proposed", &out.proposed);
    let _ = writeln!(text, "uncovered: {}", sys.format_set(&out.uncovered));
    validity_text(&mut text, "validity", &out.validity);
    scores_text(&mut text, &out.scores);
    let ranked: Vec<String> = out.selection.ranking.iter().map(|(id, s)| format!("#{id}={}", num(*s))).collect();
    let _ = writeln!(text, "ranking: {}", ranked.join(" "));
    let kept: Vec<String> = kept.iter().map(|id| format!("#{id}")).collect();
    let _ = writeln!(text, "selected: {}  exceeded_k={}", kept.join(" "), out.selection.exceeded_k);
    validity_text(&mut text, "selection validity", &out.selection_validity);
    Ok(Out::ok(json, text))
}

fn section6() -> Result<Out> {
    let r = fixture::section6();
    let mut text = String::new();
    let count = |s: CheckStatus| r.checks.iter().filter(|c| c.status == s).count();
    let _ = writeln!(
        text,
        "checks: {}  match: {}  erratum: {}  undocumented: {}",
        r.checks.len(),
        count(CheckStatus::Match),
        count(CheckStatus::Erratum),
        count(CheckStatus::Undocumented)
    );
    let _ = writeln!(text, "table2 in B(S): {}", r.table2_is_b_of_s);
    for c in r.checks.iter().filter(|c| c.status != CheckStatus::Match) {
        let status = to_json(&c.status);
        let _ = writeln!(text, "{}  {}  printed {}  oracle {}", status.as_str().unwrap_or_default(), c.key, c.printed, c.oracle);
    }
    let _ = writeln!(text, "errata:");
    for e in &r.errata {
        let _ = writeln!(
            text,
            "  {}  printed {}  oracle {}  reproduced={}  ({})",
            e.key, e.printed, e.oracle, e.reproduced, e.forcing
        );
    }
    let ok = r.ok();
    let _ = writeln!(text, "ok: {ok}");
    let mut json = to_json(&r);
    json["ok"] = json!(ok);
    Ok(Out {
        json,
        text,
        status: if ok { 0 } else { 1 },
    })
}

fn audit(input: &RelationInput, gi: &GroupoidInput, tier: TierArg, instances: usize, seed: u64, cap: usize) -> Result<Out> {
    let loaded = inputs::try_relation(input, None)?;
    let g = match &loaded {
        Some(l) => inputs::optional_groupoid(l, gi)?,
        None if gi.strategy.is_some() || gi.pi => {
            return Err(UsageError("--strategy and --pi need a relation".into()).into());
        }
        None => None,
    };
    let cfg = AuditConfig {
        tier: match tier {
            TierArg::One => TierFilter::One,
            TierArg::Two => TierFilter::Two,
            TierArg::All => TierFilter::All,
        },
        random_instances: instances,
        seed,
        cap,
        ..AuditConfig::default()
    };
    let report = audit_claims(loaded.as_ref().map(|l| &l.sys), g.as_ref(), &cfg)?;
    let mut text = String::new();
    let holds = report.claims.iter().filter(|c| c.status.holds()).count();
    let fails = report.failures().count();
    let _ = writeln!(
        text,
        "instances: {}  claims: {}  holds: {holds}  fails: {fails}  skipped: {}",
        report.instances,
        report.claims.len(),
        report.claims.len() - holds - fails
    );
    for c in &report.claims {
        let verdict = match &c.status {
            ClaimStatus::Holds => "holds".to_string(),
            ClaimStatus::Fails { witness } => format!("fails  {}", witness_text(witness)),
            ClaimStatus::Skipped { reason } => format!("skipped  {reason}"),
        };
        let _ = writeln!(text, "[{}] {}/{} ({} checked): {verdict}", c.tier, c.group, c.id, c.checked);
    }
    Ok(Out::ok(to_json(&report), text))
}
