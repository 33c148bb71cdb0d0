//! Task orchestration: load and validate inputs, run the computation with
//! the window/budget from the command line, emit reports.
//!
//! A `--max-degree N` run builds complexes with validity window `N - 1`
//! (levels `0..=N-1` and their differentials), so homology is reported for
//! degrees `<= N - 2` and every figure carries that window.

use serde::Serialize;
use thiserror::Error;

use hochbar_core::algebra::{drinfeld_double, hochschild_complex, Bimodule};
use hochbar_core::chains::normalized_chains;
use hochbar_core::gpd;
use hochbar_core::hca;
use hochbar_core::lincat;
use hochbar_core::schema::{
    homology_rows, ActionSchema, AlgebraSchema, CategorySchema, ExtensionSchema,
    GradedCategorySchema, GroupSchema, GroupoidSchema, HomologyRow, ProjectivesSchema,
    TwistTaskSchema,
};
use hochbar_core::verlinde;
use hochbar_core::{Error, ScalarField};

use crate::report::Emitter;

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("bad input: {0}")]
    Parse(String),
}

pub enum Outcome {
    Ok,
    VerificationFailed(String),
}

pub struct TaskOptions {
    pub field: String,
    pub max_degree: usize,
    pub budget: usize,
    pub output: String,
    pub out_dir: String,
}

impl TaskOptions {
    /// The module-level validity window for this run. Builders need a
    /// window of at least 2, so the smallest legal max-degree still
    /// computes one spare level.
    pub fn window(&self) -> usize {
        (self.max_degree - 1).max(2)
    }

    pub fn valid_to(&self) -> usize {
        self.max_degree - 2
    }

    pub fn parse_field(&self) -> Result<ScalarField, TaskError> {
        Ok(ScalarField::parse(&self.field)?)
    }
}

fn parse_json<'a, T: serde::Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, TaskError> {
    serde_json::from_str(text).map_err(|e| TaskError::Parse(format!("{what}: {e}")))
}

#[derive(Serialize)]
struct HomologyReport {
    command: String,
    field: String,
    max_degree: usize,
    rows: Vec<HomologyRow>,
}

fn homology_csv(em: &mut Emitter, name: &str, rows: &[HomologyRow]) -> Result<(), TaskError> {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{}", r.degree, r.dim, r.window))
        .collect();
    em.write_csv(name, "degree,dim,window", &lines)
}

pub fn run_hh(opts: &TaskOptions, algebra: &str) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "hh");
    let text = em.read_input(algebra)?;
    let schema: AlgebraSchema = parse_json(&text, "algebra schema")?;
    let a = schema.to_algebra()?;
    let m = Bimodule::regular(&a);
    let h = hochschild_complex(&a, &m, opts.window(), opts.budget)?;
    let dims = h.complex().homology_dims()?;
    let rows = homology_rows(&dims[..=opts.valid_to()], opts.valid_to());
    let report = HomologyReport {
        command: "hh".into(),
        field: a.field.to_string(),
        max_degree: opts.max_degree,
        rows: rows.clone(),
    };
    em.write_json("hh.json", &report)?;
    if em.want_csv() {
        homology_csv(&mut em, "hh.csv", &rows)?;
    }
    em.finish()?;
    Ok(Outcome::Ok)
}

pub fn run_hm(opts: &TaskOptions, category: &str) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "hm");
    let text = em.read_input(category)?;
    let schema: CategorySchema = parse_json(&text, "category schema")?;
    let c = schema.to_category()?;
    let f = lincat::hom_bimodule(&c);
    let hm = lincat::hm_complex(&c, &f, opts.window(), opts.budget)?;
    let dims = hm.complex().homology_dims()?;
    let rows = homology_rows(&dims[..=opts.valid_to()], opts.valid_to());
    let report = HomologyReport {
        command: "hm".into(),
        field: c.field.to_string(),
        max_degree: opts.max_degree,
        rows: rows.clone(),
    };
    em.write_json("hm.json", &report)?;
    if em.want_csv() {
        homology_csv(&mut em, "hm.csv", &rows)?;
    }
    em.finish()?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct DoubleReport {
    command: String,
    field: String,
    group_order: usize,
    double: AlgebraSchema,
    rows: Vec<HomologyRow>,
}

pub fn run_double(opts: &TaskOptions, group: &str) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "double");
    let field = opts.parse_field()?;
    let text = em.read_input(group)?;
    let schema: GroupSchema = parse_json(&text, "group schema")?;
    let g = schema.to_group()?;
    let d = drinfeld_double(field, &g);
    let m = Bimodule::regular(&d);
    let h = hochschild_complex(&d, &m, opts.window(), opts.budget)?;
    let dims = h.complex().homology_dims()?;
    let rows = homology_rows(&dims[..=opts.valid_to()], opts.valid_to());
    let report = DoubleReport {
        command: "double".into(),
        field: field.to_string(),
        group_order: g.order(),
        double: AlgebraSchema::from_algebra(&d),
        rows: rows.clone(),
    };
    em.write_json("double.json", &report)?;
    if em.want_csv() {
        homology_csv(&mut em, "double.csv", &rows)?;
    }
    em.finish()?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct LoopGpdReport {
    command: String,
    field: String,
    loop_groupoid: GroupoidSchema,
    nerve_rows: Vec<HomologyRow>,
    iso_levels_match: bool,
    iso_failures: usize,
}

pub fn run_loopgpd(
    opts: &TaskOptions,
    groupoid: Option<&str>,
    group: Option<&str>,
    model: &str,
) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "loopgpd");
    let field = opts.parse_field()?;
    let base = match (groupoid, group) {
        (Some(path), None) => {
            let text = em.read_input(path)?;
            let schema: GroupoidSchema = parse_json(&text, "groupoid schema")?;
            schema.to_groupoid()?
        }
        (None, Some(path)) => {
            let text = em.read_input(path)?;
            let schema: GroupSchema = parse_json(&text, "group schema")?;
            let g = schema.to_group()?;
            match model {
                "conj" => gpd::conjugation_groupoid(&g),
                "bg" => gpd::FinGroupoid::from_group(&g),
                other => {
                    return Err(TaskError::Parse(format!(
                        "unknown model {other:?}, expected conj or bg"
                    )))
                }
            }
        }
        _ => {
            return Err(TaskError::Parse(
                "exactly one of --groupoid or --group is required".into(),
            ))
        }
    };
    let lg = gpd::loop_groupoid(&base);
    let nerve = gpd::nerve_simplicial(&lg.groupoid, field, opts.window(), opts.budget)?;
    let n = normalized_chains(&nerve)?;
    let dims = n.complex.homology_dims()?;
    let rows = homology_rows(&dims[..=opts.valid_to()], opts.valid_to());
    let iso = gpd::loop_bar_iso(&base, field, opts.window(), opts.budget)?;
    let report = LoopGpdReport {
        command: "loopgpd".into(),
        field: field.to_string(),
        loop_groupoid: GroupoidSchema::from_groupoid(&lg.groupoid),
        nerve_rows: rows.clone(),
        iso_levels_match: iso.nerve.levels == iso.loops.levels,
        iso_failures: iso.report.failures.len(),
    };
    em.write_json("loopgpd.json", &report)?;
    if em.want_csv() {
        homology_csv(&mut em, "loopgpd.csv", &rows)?;
    }
    em.finish()?;
    if !iso.report.verified() {
        return Ok(Outcome::VerificationFailed(
            "loop-to-bar isomorphism check failed".into(),
        ));
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct AgreementReport {
    command: String,
    field: String,
    chain_map_verified: bool,
    quasi_isomorphism: bool,
    cone_dims: Vec<usize>,
    hochschild_rows: Vec<HomologyRow>,
    hm_rows: Vec<HomologyRow>,
}

pub fn run_agreement(
    opts: &TaskOptions,
    algebra: &str,
    projectives: &str,
) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "agreement");
    let atext = em.read_input(algebra)?;
    let ptext = em.read_input(projectives)?;
    let aschema: AlgebraSchema = parse_json(&atext, "algebra schema")?;
    let a = aschema.to_algebra()?;
    let pschema: ProjectivesSchema = parse_json(&ptext, "projectives schema")?;
    let presentations = pschema.to_presentations(&a)?;
    let data = lincat::agreement_map(&a, &presentations, opts.max_degree, opts.budget)?;
    let report = AgreementReport {
        command: "agreement".into(),
        field: a.field.to_string(),
        chain_map_verified: data.chain_map_report.verified(),
        quasi_isomorphism: data.quasi_iso(),
        cone_dims: data.cone_dims.clone(),
        hochschild_rows: homology_rows(
            &data.hochschild_dims[..=opts.valid_to()],
            opts.valid_to(),
        ),
        hm_rows: homology_rows(&data.hm_dims[..=opts.valid_to()], opts.valid_to()),
    };
    em.write_json("agreement.json", &report)?;
    if em.want_csv() {
        let rows: Vec<String> = (0..=opts.valid_to())
            .map(|n| {
                format!(
                    "{n},{},{},{},valid <= {}",
                    data.hochschild_dims[n],
                    data.hm_dims[n],
                    data.cone_dims[n],
                    opts.valid_to()
                )
            })
            .collect();
        em.write_csv(
            "agreement.csv",
            "degree,hochschild_dim,hm_dim,cone_dim,window",
            &rows,
        )?;
    }
    em.finish()?;
    if !data.quasi_iso() {
        return Ok(Outcome::VerificationFailed(
            "agreement map is not a quasi-isomorphism in the window".into(),
        ));
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ProductTableReport {
    command: String,
    field: String,
    dim: usize,
    labels: Vec<String>,
    /// Rows `(i, j, coefficient list over the basis)`.
    products: Vec<(usize, usize, Vec<(usize, String)>)>,
}

fn default_simples(cat: &verlinde::GradedVectCategory) -> Vec<verlinde::ObjTuple> {
    (0..cat.group.order()).map(|g| vec![g]).collect()
}

pub fn run_verlinde(
    opts: &TaskOptions,
    category: &str,
    objects: Option<&str>,
) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "verlinde");
    let text = em.read_input(category)?;
    let schema: GradedCategorySchema = parse_json(&text, "graded category schema")?;
    let cat = schema.to_category()?;
    let objs: Vec<verlinde::ObjTuple> = match objects {
        Some(path) => {
            let otext = em.read_input(path)?;
            parse_json(&otext, "object list")?
        }
        None => default_simples(&cat),
    };
    // The degree-zero table needs levels 0 and 1 plus the first
    // differential; window 2 keeps a margin.
    let ls = verlinde::loop_operator(&cat, &objs, 2, opts.budget)?;
    let table = verlinde::h0_product_table(&cat, &ls)?;
    let mut products = Vec::new();
    for i in 0..table.dim {
        for j in 0..table.dim {
            products.push((
                i,
                j,
                table.table[i][j]
                    .iter()
                    .map(|(k, c)| (*k, c.to_text()))
                    .collect(),
            ));
        }
    }
    let report = ProductTableReport {
        command: "verlinde".into(),
        field: cat.field.to_string(),
        dim: table.dim,
        labels: table.labels.clone(),
        products,
    };
    em.write_json("verlinde.json", &report)?;
    if em.want_csv() {
        let rows: Vec<String> = report
            .products
            .iter()
            .map(|(i, j, v)| {
                let terms: Vec<String> =
                    v.iter().map(|(k, c)| format!("{c}*u{k}")).collect();
                format!(
                    "{i},{j},\"{}\",\"{}\",{}",
                    report.labels[*i],
                    report.labels[*j],
                    terms.join("+")
                )
            })
            .collect();
        em.write_csv("verlinde.csv", "i,j,label_i,label_j,product", &rows)?;
    }
    em.finish()?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct SectorsReport {
    command: String,
    field: String,
    z: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_scalar: Option<String>,
    sector_h0: Vec<(String, usize)>,
    /// Product table over the sector H_0 classes, one per group element.
    products: Vec<(String, String, String, String)>,
    grading_respected: bool,
}

pub fn run_sectors(
    opts: &TaskOptions,
    category: &str,
    z: &str,
    z_scalar: Option<&str>,
) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "sectors");
    let text = em.read_input(category)?;
    let schema: GradedCategorySchema = parse_json(&text, "graded category schema")?;
    let cat = schema.to_category()?;
    let zi = if z.is_empty() {
        cat.group.identity
    } else {
        cat.group
            .index_of(z)
            .ok_or_else(|| TaskError::Parse(format!("unknown group element {z:?}")))?
    };
    let omega = z_scalar
        .map(|s| cat.field.parse_scalar(s))
        .transpose()?;
    let mut sector_h0 = Vec::new();
    for g in 0..cat.group.order() {
        let h0 = match &omega {
            Some(w) => verlinde::twisted_sector_h0(&cat, g, zi, w)?,
            None => {
                let (_, n) =
                    verlinde::sector_complex(&cat, g, zi, &[vec![g]], 2, opts.budget)?;
                n.complex.homology_dim(0)?
            }
        };
        sector_h0.push((cat.group.labels[g].clone(), h0));
    }
    let mut products = Vec::new();
    let mut grading = true;
    let one = cat.field.one();
    for g1 in 0..cat.group.order() {
        for g2 in 0..cat.group.order() {
            let x = verlinde::LoopChain::single(verlinde::Loop::identity_at(g1), one.clone());
            let y = verlinde::LoopChain::single(verlinde::Loop::identity_at(g2), one.clone());
            let (prod, target) =
                verlinde::sector_product(&cat, &x, 0, g1, &y, 0, g2, zi, zi)?;
            if target != cat.group.mul(g1, g2) {
                grading = false;
            }
            let desc = prod
                .terms
                .iter()
                .map(|(l, c)| {
                    format!(
                        "{}*u[{}]",
                        c.to_text(),
                        cat.group.labels[l.objects[0][0]].clone()
                    )
                })
                .collect::<Vec<_>>()
                .join("+");
            products.push((
                cat.group.labels[g1].clone(),
                cat.group.labels[g2].clone(),
                cat.group.labels[target].clone(),
                desc,
            ));
        }
    }
    let report = SectorsReport {
        command: "sectors".into(),
        field: cat.field.to_string(),
        z: cat.group.labels[zi].clone(),
        z_scalar: omega.as_ref().map(|w| w.to_text()),
        sector_h0,
        products,
        grading_respected: grading,
    };
    em.write_json("sectors.json", &report)?;
    if em.want_csv() {
        let rows: Vec<String> = report
            .products
            .iter()
            .map(|(a, b, t, d)| format!("{a},{b},{t},{d}"))
            .collect();
        em.write_csv("sectors.csv", "g1,g2,sector,product", &rows)?;
    }
    em.finish()?;
    if !grading {
        return Ok(Outcome::VerificationFailed(
            "sector product violates the grading".into(),
        ));
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct OrbitRow {
    representative: String,
    orbit_id: usize,
    orbit_size: usize,
}

#[derive(Serialize)]
struct Sl2zReport {
    command: String,
    classes: usize,
    orbits: Vec<OrbitRow>,
    relations_hold: bool,
}

pub fn run_sl2z_orbits(opts: &TaskOptions, group: &str) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "sl2z-orbits");
    let text = em.read_input(group)?;
    let schema: GroupSchema = parse_json(&text, "group schema")?;
    let g = schema.to_group()?;
    let classes = gpd::iso_classes(&g);
    let orbits = gpd::sl2z_orbits(&g);
    // The presentation relations as exact permutation identities.
    use gpd::Sl2zGen::*;
    let s4 = gpd::Sl2zWord::new(vec![S, S, S, S]);
    let st3 = gpd::Sl2zWord::new(vec![S, T, S, T, S, T]);
    let s2 = gpd::Sl2zWord::new(vec![S, S]);
    let mut relations_hold = true;
    for p in gpd::commuting_pairs_set(&g) {
        if gpd::sl2z_act(&g, &s4, p) != p
            || gpd::sl2z_act(&g, &st3, p) != gpd::sl2z_act(&g, &s2, p)
        {
            relations_hold = false;
        }
    }
    let rows: Vec<OrbitRow> = orbits
        .iter()
        .enumerate()
        .map(|(id, o)| OrbitRow {
            representative: format!(
                "({},{})",
                g.labels[o.representative.g], g.labels[o.representative.h]
            ),
            orbit_id: id,
            orbit_size: o.class_indices.len(),
        })
        .collect();
    let report = Sl2zReport {
        command: "sl2z-orbits".into(),
        classes: classes.len(),
        orbits: rows,
        relations_hold,
    };
    em.write_json("sl2z-orbits.json", &report)?;
    // Orbit reports also go out as CSV per the interface contract.
    let rows: Vec<String> = report
        .orbits
        .iter()
        .map(|o| format!("{},{},{}", o.representative, o.orbit_id, o.orbit_size))
        .collect();
    em.write_csv("sl2z-orbits.csv", "class_representative,orbit_id,orbit_size", &rows)?;
    em.finish()?;
    if !report.relations_hold {
        return Ok(Outcome::VerificationFailed(
            "SL(2,Z) presentation relations failed".into(),
        ));
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct CertificateRow {
    simplex: String,
    check: String,
    status: bool,
    #[serde(rename = "residual-norm-is-zero")]
    residual_norm_is_zero: bool,
}

#[derive(Serialize)]
struct CoherenceReport {
    command: String,
    field: String,
    words_checked: usize,
    failures: usize,
    certificates: Vec<CertificateRow>,
}

fn words_up_to(n_letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..n_letters {
                let mut ww = w.clone();
                ww.push(l);
                out.push(ww.clone());
                next.push(ww);
            }
        }
        frontier = next;
    }
    out
}

fn block_splits(word: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if word.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for cut in 1..=word.len() {
        for rest in block_splits(&word[cut..]) {
            let mut v = vec![word[..cut].to_vec()];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

pub fn run_verify_coherence(
    opts: &TaskOptions,
    extension: &str,
    action: &str,
    max_len: usize,
) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "verify-coherence");
    let etext = em.read_input(extension)?;
    let atext = em.read_input(action)?;
    let eschema: ExtensionSchema = parse_json(&etext, "extension schema")?;
    let ext = eschema.to_extension()?;
    let field = ScalarField::parse(&eschema.field)?;
    let aschema: ActionSchema = parse_json(&atext, "action schema")?;
    let act = aschema.to_action(field)?;
    let ev = hca::DescentEvaluator::new(&ext, &act)?;
    let mut certificates = Vec::new();
    let mut failures = 0usize;
    let mut words_checked = 0usize;
    for word in words_up_to(ext.quotient.order(), max_len) {
        for blocks in block_splits(&word) {
            words_checked += 1;
            let rep = ev.verify_depth1(&blocks);
            let label = blocks
                .iter()
                .map(|b| {
                    format!(
                        "({})",
                        b.iter()
                            .map(|h| ext.quotient.labels[*h].clone())
                            .collect::<Vec<_>>()
                            .join(")(")
                    )
                })
                .collect::<Vec<_>>()
                .join("");
            if !rep.verified() {
                failures += 1;
            }
            certificates.push(CertificateRow {
                simplex: label,
                check: "depth-1 chain homotopy".into(),
                status: rep.verified(),
                residual_norm_is_zero: rep.verified(),
            });
            let cert = ev.depth2_certificate(&blocks);
            if !cert.status {
                failures += 1;
            }
            certificates.push(CertificateRow {
                simplex: cert.simplex,
                check: cert.check,
                status: cert.status,
                residual_norm_is_zero: cert.residual_is_zero,
            });
        }
    }
    let report = CoherenceReport {
        command: "verify-coherence".into(),
        field: field.to_string(),
        words_checked,
        failures,
        certificates,
    };
    em.write_json("verify-coherence.json", &report)?;
    em.finish()?;
    if failures > 0 {
        return Ok(Outcome::VerificationFailed(format!(
            "{failures} descent certificates failed"
        )));
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct TwistReport {
    command: String,
    field: String,
    identities_verified: bool,
    failures: usize,
}

pub fn run_twist_homotopy(opts: &TaskOptions, task: &str) -> Result<Outcome, TaskError> {
    let mut em = Emitter::new(opts, "twist-homotopy");
    let text = em.read_input(task)?;
    let schema: TwistTaskSchema = parse_json(&text, "twist task schema")?;
    let cat = schema.category.to_category()?;
    let lin = cat.linear_category(&schema.objects)?;
    if schema.target >= schema.objects.len() || schema.unit_object >= schema.objects.len() {
        return Err(TaskError::Parse("object index out of range".into()));
    }
    let twist = hca::TwistData {
        theta: schema
            .objects
            .iter()
            .map(|t| cat.twist_of(t))
            .collect::<Result<_, _>>()?,
        unit_object: schema.unit_object,
    };
    let data = hca::twist_homotopy(
        &lin,
        &twist,
        schema.target,
        opts.window().min(3),
        opts.budget,
    )?;
    let report = TwistReport {
        command: "twist-homotopy".into(),
        field: cat.field.to_string(),
        identities_verified: data.report.verified(),
        failures: data.report.failures.len(),
    };
    em.write_json("twist-homotopy.json", &report)?;
    em.finish()?;
    if !data.report.verified() {
        return Ok(Outcome::VerificationFailed(
            "twist homotopy identities failed".into(),
        ));
    }
    Ok(Outcome::Ok)
}
