use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use curvmorse::banchoff::{
    combinatorial_curvature, critical_point_theorem, defect_field, egregium_report, gauss_bonnet, index_report,
    CombinatorialConvention, HeightOrder,
};
use curvmorse::bloch::{classify_strata, generalized_angle_defect, stratified_cpt, stratified_egregium_all};
use curvmorse::forman::{forman_gap_report, genus_relation_report, ricci_field, scalar_field};
use curvmorse::geometry::{height_field, is_allowable, is_general, Direction, DirectionSampler, Embedding, Tolerances};
use curvmorse::io::{parse_path, ComplexDocument};
use curvmorse::persistence::{
    bottleneck_distance, compute_persistence, edge_filtration, lower_star_filtration, EdgeValues, Filtration,
    FiltrationSource, VertexRule,
};
use curvmorse::{Error, Result, Simplex, SimplicialComplex};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{DirectionSpec, RunConfig};
use crate::{Common, CurvatureKindArg, FiltrationArg, Suite, VertexRuleArg};

/// Output text plus an optional pass/fail verdict for the exit code.
pub struct Artifact {
    pub text: String,
    pub verdict: Option<bool>,
}

struct Loaded {
    doc: ComplexDocument,
    complex: SimplicialComplex,
    embedding: Option<Embedding>,
}

impl Loaded {
    fn embedding(&self) -> Result<&Embedding> {
        self.embedding
            .as_ref()
            .ok_or_else(|| Error::Precondition("this command needs vertex coordinates".into()))
    }
}

fn load(common: &Common, input: &Path) -> Result<Loaded> {
    let doc = parse_path(input, common.format)?;
    let complex = doc.complex();
    let embedding = doc.embedding(&complex)?;
    Ok(Loaded {
        doc,
        complex,
        embedding,
    })
}

fn tolerances(common: &Common) -> Tolerances {
    Tolerances {
        general_rel: common.eps_general,
        allowable: common.eps_allow,
    }
}

fn config(common: &Common, command: &str, input: &Path) -> RunConfig {
    RunConfig {
        command: command.to_string(),
        input: input.display().to_string(),
        seed: common.seed,
        samples: common.samples,
        tolerances: tolerances(common),
        filtration: None,
        direction: None,
        options: BTreeMap::new(),
    }
}

fn json_artifact(config: &RunConfig, body: impl Serialize, verdict: Option<bool>) -> Artifact {
    let mut value = serde_json::to_value(body).expect("results serialize");
    let config = serde_json::to_value(config).expect("config serializes");
    match &mut value {
        Value::Object(map) => {
            map.insert("config".into(), config);
        }
        other => value = json!({ "config": config, "result": other.take() }),
    }
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    Artifact { text, verdict }
}

fn csv_artifact(config: &RunConfig, header: &str, rows: impl IntoIterator<Item = String>) -> Artifact {
    let mut text = format!(
        "# run_config: {}\n{header}\n",
        serde_json::to_string(config).expect("config serializes")
    );
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    Artifact { text, verdict: None }
}

/// The flag spelling of a value-enum variant.
fn flag_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn simplex_cell(s: &Simplex) -> String {
    let ids: Vec<String> = s.vertices().iter().map(u32::to_string).collect();
    ids.join(" ")
}

fn rational(r: &Rational64) -> String {
    curvmorse::serde_rational::to_string(r)
}

fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn explicit_direction(v: &[f64], e: &Embedding) -> Result<Direction> {
    if v.len() != e.ambient_dim() {
        return Err(Error::InvalidEmbedding(format!(
            "direction has {} components, coordinates have {}",
            v.len(),
            e.ambient_dim()
        )));
    }
    Direction::new(v.to_vec())
}

pub fn curvature(
    common: &Common,
    input: &Path,
    kind: CurvatureKindArg,
    radians: bool,
    third: bool,
) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let c = &loaded.complex;
    let mut cfg = config(common, "curvature", input).option("kind", flag_name(kind));
    let rows: Vec<String> = match kind {
        CurvatureKindArg::Defect => {
            cfg = cfg.option("radians", radians);
            let field = defect_field(c, loaded.embedding()?, !radians)?;
            field.values.iter().map(|(v, x)| format!("{v},{x}")).collect()
        }
        CurvatureKindArg::Combinatorial => {
            let convention = if third {
                CombinatorialConvention::PaperThird
            } else {
                CombinatorialConvention::NormalizedSixth
            };
            cfg = cfg.option("convention", if third { "third" } else { "sixth" });
            c.vertices()
                .map(|v| Ok(format!("{v},{}", rational(&combinatorial_curvature(c, v, convention)?))))
                .collect::<Result<_>>()?
        }
        CurvatureKindArg::FormanRicci => ricci_field(c)?
            .values
            .iter()
            .map(|(e, r)| format!("{},{}", simplex_cell(e), rational(r)))
            .collect(),
        CurvatureKindArg::FormanScalar => scalar_field(c)?
            .values
            .iter()
            .map(|(v, r)| format!("{v},{}", rational(r)))
            .collect(),
        CurvatureKindArg::StratifiedDefect => {
            let e = loaded.embedding()?;
            let report = classify_strata(c)?;
            c.simplices()
                .iter()
                .filter(|s| s.dim() + 2 <= report.n)
                .map(|s| {
                    Ok(format!(
                        "{},{}",
                        simplex_cell(s),
                        generalized_angle_defect(c, e, &report, s)?
                    ))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(csv_artifact(&cfg, "simplex,value", rows))
}

pub fn index(common: &Common, input: &Path, spec: Option<DirectionSpec>, jitter: bool) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let (c, e) = (&loaded.complex, loaded.embedding()?);
    let tol = tolerances(common);
    let spec = spec.ok_or_else(|| Error::Precondition("index needs --direction or --random".into()))?;
    let directions = match &spec {
        DirectionSpec::Explicit(v) => vec![explicit_direction(v, e)?],
        DirectionSpec::Random(k) => {
            let sampler = DirectionSampler::new(common.seed, *k);
            if jitter {
                sampler.sample(e.ambient_dim())?
            } else {
                sampler.sample_filtered(e.ambient_dim(), |d| is_general(c, e, d, &tol))?
            }
        }
    };
    let mut reports = Vec::with_capacity(directions.len());
    for d in directions {
        let order = HeightOrder::from_direction(c, e, &d, &tol, jitter)?;
        reports.push(index_report(c, &order, Some(d))?);
    }
    let all_hold = reports.iter().all(|r| r.holds);
    let mut cfg = config(common, "index", input).option("jitter", jitter);
    cfg.direction = Some(spec);
    Ok(json_artifact(
        &cfg,
        json!({ "reports": reports, "all_hold": all_hold }),
        None,
    ))
}

#[derive(Serialize)]
struct CptCheck {
    direction: Direction,
    sum: String,
    euler: i64,
    holds: bool,
    surface_agrees: Option<bool>,
}

pub fn verify(common: &Common, input: &Path, suite: Suite) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let c = &loaded.complex;
    let tol = tolerances(common);
    let default_samples = match suite {
        Suite::Cpt => 100,
        Suite::StratifiedCpt => 50,
        Suite::Egregium | Suite::StratifiedEgregium => 10_000,
        Suite::GaussBonnet | Suite::OpenStar | Suite::Forman => 0,
    };
    let samples = common.samples.unwrap_or(default_samples);
    let mut cfg = config(common, "verify", input).option("suite", flag_name(suite));
    cfg.samples = (default_samples > 0).then_some(samples);
    let (body, holds): (Value, bool) = match suite {
        Suite::Cpt => {
            let e = loaded.embedding()?;
            let dirs = DirectionSampler::new(common.seed, samples)
                .sample_filtered(e.ambient_dim(), |d| is_general(c, e, d, &tol))?;
            let mut checks = Vec::with_capacity(dirs.len());
            for d in dirs {
                let r = critical_point_theorem(c, e, &d, &tol)?;
                checks.push(CptCheck {
                    direction: d,
                    sum: rational(&r.sum),
                    euler: r.euler,
                    holds: r.holds && r.surface_agrees != Some(false),
                    surface_agrees: r.surface_agrees,
                });
            }
            let holds = checks.iter().all(|k| k.holds);
            (json!({ "checks": checks, "holds": holds }), holds)
        }
        Suite::GaussBonnet => {
            let r = gauss_bonnet(c, loaded.embedding()?)?;
            let holds = r
                .holds
                .ok_or_else(|| Error::Precondition("Gauss-Bonnet needs a closed surface".into()))?;
            (serde_json::to_value(r).expect("report serializes"), holds)
        }
        Suite::Egregium => {
            let r = egregium_report(c, loaded.embedding()?, common.seed, samples, &tol)?;
            let holds = r.holds;
            (serde_json::to_value(r).expect("report serializes"), holds)
        }
        Suite::StratifiedCpt => {
            let e = loaded.embedding()?;
            let strata = classify_strata(c)?;
            let dirs = DirectionSampler::new(common.seed, samples)
                .sample_filtered(e.ambient_dim(), |d| is_allowable(c, e, d, &tol).unwrap_or(false))?;
            let mut checks = Vec::with_capacity(dirs.len());
            for d in dirs {
                let r = stratified_cpt(c, e, &strata, &d, &tol)?;
                checks.push(
                    json!({ "direction": d, "lhs": rational(&r.lhs), "rhs": rational(&r.rhs), "holds": r.holds }),
                );
            }
            let holds = checks.iter().all(|k| k["holds"] == Value::Bool(true));
            (
                json!({ "chi_s": rational(&strata.stratified_euler()), "checks": checks, "holds": holds }),
                holds,
            )
        }
        Suite::StratifiedEgregium => {
            let strata = classify_strata(c)?;
            let sampler = DirectionSampler::new(common.seed, samples);
            let rows = stratified_egregium_all(c, loaded.embedding()?, &strata, &sampler, &tol)?;
            let holds = rows.iter().all(|r| r.holds_within_4sigma);
            (json!({ "rows": rows, "holds": holds }), holds)
        }
        Suite::OpenStar => {
            let r = c.open_star_euler_identity();
            let holds = r.holds;
            (serde_json::to_value(r).expect("report serializes"), holds)
        }
        Suite::Forman => {
            let gap = forman_gap_report(c)?;
            let genus = if c.is_closed_surface() {
                Some(genus_relation_report(c)?)
            } else {
                None
            };
            let holds = gap.closed_forms_agree;
            (
                json!({ "gap_report": gap, "genus_relation": genus, "holds": holds }),
                holds,
            )
        }
    };
    Ok(json_artifact(&cfg, body, Some(holds)))
}

pub fn stratify(common: &Common, input: &Path) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let report = classify_strata(&loaded.complex)?;
    Ok(json_artifact(&config(common, "stratify", input), report, None))
}

fn build_filtration(
    common: &Common,
    loaded: &Loaded,
    kind: FiltrationArg,
    direction: &DirectionSpec,
    negate: bool,
    rule: VertexRuleArg,
) -> Result<Filtration> {
    let c = &loaded.complex;
    let sign = if negate { -1.0 } else { 1.0 };
    let vertex_field =
        |values: BTreeMap<u32, f64>| -> BTreeMap<u32, f64> { values.into_iter().map(|(v, x)| (v, sign * x)).collect() };
    match kind {
        FiltrationArg::Height => {
            let e = loaded.embedding()?;
            let d = match direction {
                DirectionSpec::Explicit(v) => explicit_direction(v, e)?,
                DirectionSpec::Random(k) => DirectionSampler::new(common.seed, (*k).max(1))
                    .sample(e.ambient_dim())?
                    .remove(0),
            };
            let field = vertex_field(height_field(c, e, &d)?);
            lower_star_filtration(c, &field, FiltrationSource::Height)
        }
        FiltrationArg::Defect => {
            let field = vertex_field(defect_field(c, loaded.embedding()?, true)?.values);
            lower_star_filtration(c, &field, FiltrationSource::Defect)
        }
        FiltrationArg::FormanScalar => {
            let values = scalar_field(c)?.values.iter().map(|(&v, r)| (v, to_f64(r))).collect();
            lower_star_filtration(c, &vertex_field(values), FiltrationSource::FormanScalar)
        }
        FiltrationArg::FormanRicci => {
            let values: EdgeValues = ricci_field(c)?
                .values
                .iter()
                .map(|(e, r)| (e.clone(), sign * to_f64(r)))
                .collect();
            let rule = match rule {
                VertexRuleArg::MinIncident => VertexRule::MinIncident,
                VertexRuleArg::Zero => VertexRule::Zero,
            };
            edge_filtration(c, &values, rule, FiltrationSource::FormanRicciEdge)
        }
    }
}

pub fn ph(
    common: &Common,
    input: &Path,
    kind: FiltrationArg,
    direction: Option<DirectionSpec>,
    negate: bool,
    rule: VertexRuleArg,
) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let direction = direction.unwrap_or(DirectionSpec::Random(1));
    let f = build_filtration(common, &loaded, kind, &direction, negate, rule)?;
    let diagram = compute_persistence(&f);
    let mut cfg = config(common, "ph", input)
        .option("negate", negate)
        .option("vertex_rule", flag_name(rule));
    cfg.filtration = Some(flag_name(kind));
    if kind == FiltrationArg::Height {
        cfg.direction = Some(direction);
    }
    let betti: Vec<String> = diagram.betti.values().map(usize::to_string).collect();
    cfg = cfg.option("betti", betti.join(","));
    let csv = diagram.to_csv();
    let mut lines = csv.lines();
    let header = lines.next().expect("csv has a header");
    Ok(csv_artifact(
        &cfg,
        header,
        lines.map(str::to_string).collect::<Vec<_>>(),
    ))
}

pub fn compare(
    common: &Common,
    input: &Path,
    kinds: &[FiltrationArg],
    dim: usize,
    direction: Option<DirectionSpec>,
    rule: VertexRuleArg,
) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let direction = direction.unwrap_or(DirectionSpec::Random(1));
    let diagrams = kinds
        .iter()
        .map(|&k| {
            Ok(compute_persistence(&build_filtration(
                common, &loaded, k, &direction, false, rule,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let result = bottleneck_distance(&diagrams[0], &diagrams[1], dim);
    let names: Vec<String> = kinds.iter().map(|&k| flag_name(k)).collect();
    let mut cfg = config(common, "compare", input)
        .option("dim", dim)
        .option("vertex_rule", flag_name(rule));
    cfg.filtration = Some(names.join(","));
    if kinds.contains(&FiltrationArg::Height) {
        cfg.direction = Some(direction);
    }
    Ok(json_artifact(
        &cfg,
        json!({
            "filtrations": names,
            "dim": dim,
            "distance": serde_json::to_value(result).expect("distance serializes")["distance"],
            "essential_count_mismatch": result.essential_count_mismatch,
        }),
        None,
    ))
}

pub fn subdivide(common: &Common, input: &Path) -> Result<Artifact> {
    let loaded = load(common, input)?;
    let sd = loaded.complex.barycentric_subdivision();
    let embedding = loaded.embedding.as_ref().map(|e| e.subdivided(&sd)).transpose()?;
    let mut doc = ComplexDocument::from_complex(&sd.complex, embedding.as_ref());
    let original = &loaded.doc.labels;
    doc.labels = Some(
        sd.barycenter
            .iter()
            .map(|(s, &v)| {
                let name = match (s.dim(), original) {
                    (0, Some(labels)) => labels.get(&s.vertices()[0]).cloned().unwrap_or_else(|| s.to_string()),
                    _ => s.to_string(),
                };
                (v, name)
            })
            .collect(),
    );
    doc.run_config = Some(serde_json::to_value(config(common, "subdivide", input)).expect("config serializes"));
    Ok(Artifact {
        text: doc.to_complex_json(),
        verdict: None,
    })
}
