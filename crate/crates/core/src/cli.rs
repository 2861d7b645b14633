//! Command-line front end.
//!
//! Settings come from flags, then a TOML config file (`--config`), then
//! defaults. Exit codes: 0 success, 2 bad input, 3 cap exceeded, 4 failed
//! verification.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::Value;

use crate::catalog;
use crate::cherednik::{rank1_center_relation, Cherednik, Mode};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::groups;
use crate::leaves::{leaf_dims, LeafAtlas};
use crate::linalg::Matrix;
use crate::par;
use crate::refgroup::{self, ParameterK, ReflectionGroup};
use crate::report::{Format, Report, Table};
use crate::tau::{make_full, TauContext, TauSpec};
use crate::verify::{self, CherednikSample, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "leafatlas", version, about = "Symplectic leaf combinatorics for reflection groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Group name (B2, D4, G(4,2,2), dihedral5, G4, cyclic3) or a JSON group file.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// identity, t, s1, -1, zeta:N/e, inline JSON or a JSON file.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Parameter values: residues separated by ',', orbits by ';', or "zero".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Group-order cap (also LEAFATLAS_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Run the invariant suite and exit 4 if anything fails.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Replace tau by the first `w tau` with maximal fixed space.
    #[arg(long, global = true)]
    pub make_full: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflections and reflecting hyperplanes.
    Reflections,
    /// Conjugacy classes of parabolic subgroups with normalizer quotients.
    Parabolics,
    /// The group W_tau acting on V^tau.
    LehrerSpringer,
    /// tau-split parabolic subgroups.
    TauSplit,
    /// Leaves of the tau-fixed locus at k = 0.
    LeavesZero,
    /// Type B leaf table for b/a = m.
    #[command(name = "catalog-B")]
    CatalogB {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        m: u64,
        /// Report smoothness for this b/a instead of m.
        #[arg(long, allow_hyphen_values = true)]
        ratio: Option<String>,
        /// Compare normalizer orders against enumeration (n <= 4).
        #[arg(long)]
        cross_check: bool,
    },
    /// Type D leaf table; with --tau t, the t-fixed picture.
    #[command(name = "catalog-D")]
    CatalogD {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        cross_check: bool,
    },
    /// Equal-parameter dihedral record for tau = s_1.
    #[command(name = "catalog-dihedral")]
    CatalogDihedral {
        #[arg(long)]
        d: u32,
    },
    /// Rank-one quadric (cyclic2) or sampled PBW checks (other groups).
    CherednikCheck {
        #[arg(long, default_value_t = 50)]
        triples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Poisson bracket of two elements, given in the literal syntax.
    Poisson {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    group: Option<String>,
    tau: Option<String>,
    k: Option<String>,
    format: Option<Format>,
    output: Option<PathBuf>,
    threads: Option<usize>,
    cap: Option<usize>,
    verify: Option<bool>,
    make_full: Option<bool>,
}

/// Settings after merging flags, config file and defaults.
#[derive(Debug)]
pub struct Settings {
    pub group: Option<String>,
    pub tau: String,
    pub k: String,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub cap: Option<usize>,
    pub verify: bool,
    pub make_full: bool,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self> {
        let cfg = match &cli.config {
            Some(p) => {
                let text = read_file(p)?;
                toml::from_str::<Config>(&text).map_err(|e| Error::Parse(format!("config {}: {e}", p.display())))?
            }
            None => Config::default(),
        };
        Ok(Settings {
            group: cli.group.clone().or(cfg.group),
            tau: cli.tau.clone().or(cfg.tau).unwrap_or_else(|| "identity".into()),
            k: cli.k.clone().or(cfg.k).unwrap_or_else(|| "zero".into()),
            format: cli.format.or(cfg.format).unwrap_or(Format::Json),
            output: cli.output.clone().or(cfg.output),
            threads: cli.threads.or(cfg.threads).unwrap_or(0),
            cap: cli.cap.or(cfg.cap),
            verify: cli.verify || cfg.verify.unwrap_or(false),
            make_full: cli.make_full || cfg.make_full.unwrap_or(false),
        })
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::BoundTooLarge(_) => EXIT_CAP,
        Error::Verification(_) => EXIT_VERIFY,
        _ => EXIT_SPEC,
    }
}

fn read_file(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

// ---- input parsing ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    name: Option<String>,
    generators: Option<Vec<Vec<Vec<Value>>>>,
}

fn parse_scalar(v: &Value) -> Result<CycNum> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n
            .as_i64()
            .map(CycNum::from_int)
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; write fractions as strings"))),
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

fn parse_matrix(rows: &[Vec<Value>]) -> Result<Matrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrices must be square and nonempty".into()));
    }
    let rows = rows.iter().map(|r| r.iter().map(parse_scalar).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows))
}

/// A catalog name, or a JSON file `{"name": .., "generators": [[[..]]]}`.
pub fn load_group(spec: &str) -> Result<ReflectionGroup> {
    let path = Path::new(spec);
    if !path.is_file() {
        return groups::by_name(spec);
    }
    let text = read_file(path)?;
    let file: GroupFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("group file {spec}: {e}")))?;
    match (file.name, file.generators) {
        (name, Some(gens)) => {
            let mats = gens.iter().map(|g| parse_matrix(g)).collect::<Result<Vec<_>>>()?;
            let dim = mats.first().map(Matrix::rows).ok_or_else(|| Error::Parse("no generators".into()))?;
            if mats.iter().any(|m| m.rows() != dim) {
                return Err(Error::Parse("generators of different sizes".into()));
            }
            let name = name.unwrap_or_else(|| "custom".into());
            let w = ReflectionGroup::close(&name, dim, mats, refgroup::default_cap())?;
            if !w.is_generated_by_reflections() {
                return Err(Error::Invalid(format!("{name} is not generated by reflections")));
            }
            Ok(w)
        }
        (Some(name), None) => groups::by_name(&name),
        (None, None) => Err(Error::Parse("group file needs a name or generators".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TauFile {
    word: Option<Vec<usize>>,
    zeta: Option<String>,
    matrix: Option<Vec<Vec<Value>>>,
}

fn parse_zeta(s: &str) -> Result<(u32, i64)> {
    let bad = || Error::Parse(format!("root of unity must be N/e, got {s:?}"));
    let (n, e) = s.split_once('/').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?))
}

fn dihedral_order(w: &ReflectionGroup) -> Option<u32> {
    w.name().strip_prefix("dihedral").and_then(|d| d.parse().ok())
}

/// Named, inline-JSON or file-based automorphism specification.
pub fn parse_tau(spec: &str, w: &ReflectionGroup) -> Result<TauSpec> {
    let s = spec.trim();
    match s {
        "identity" | "id" => return Ok(TauSpec::Identity),
        "t" => return Ok(TauSpec::Matrix(groups::first_diag(w.dim(), &CycNum::from_int(-1)))),
        "-1" => return Ok(TauSpec::Matrix(Matrix::scalar(w.dim(), &CycNum::from_int(-1)))),
        "s1" => {
            let d = dihedral_order(w).ok_or_else(|| Error::Invalid("tau = s1 needs a dihedral group".into()))?;
            return Ok(TauSpec::Matrix(groups::dihedral_reflection(d, 1)));
        }
        _ => {}
    }
    if let Some(z) = s.strip_prefix("zeta:") {
        let (n, e) = parse_zeta(z)?;
        return Ok(TauSpec::Word { word: Vec::new(), zeta: (n, e) });
    }
    let text = if s.starts_with('{') {
        s.to_string()
    } else if Path::new(s).is_file() {
        read_file(Path::new(s))?
    } else {
        return Err(Error::Parse(format!("unknown tau {s:?}")));
    };
    let file: TauFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("tau: {e}")))?;
    match (file.word, file.matrix) {
        (Some(word), None) => {
            let zeta = file.zeta.as_deref().map(parse_zeta).transpose()?.unwrap_or((1, 0));
            Ok(TauSpec::Word { word, zeta })
        }
        (None, Some(m)) if file.zeta.is_none() => Ok(TauSpec::Matrix(parse_matrix(&m)?)),
        _ => Err(Error::Parse("tau needs exactly one of word (with optional zeta) or matrix".into())),
    }
}

/// `zero`, or values per orbit: `0,1;0,2` gives orbit 0 `(0,1)`, orbit 1 `(0,2)`.
pub fn parse_k(spec: &str, w: &ReflectionGroup) -> Result<ParameterK> {
    let s = spec.trim();
    if s == "zero" || s == "0" {
        return Ok(ParameterK::zero(w));
    }
    let s = if Path::new(s).is_file() { read_file(Path::new(s))? } else { s.to_string() };
    let values = s
        .trim()
        .split(';')
        .map(|orbit| orbit.split(',').map(|v| v.trim().parse::<CycNum>()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ParameterK::new(w, values)
}

// ---- commands ----

struct Job<'a> {
    settings: &'a Settings,
}

impl Job<'_> {
    fn group(&self) -> Result<Arc<ReflectionGroup>> {
        let name = self.settings.group.as_deref().ok_or_else(|| Error::Invalid("--group is required".into()))?;
        Ok(Arc::new(load_group(name)?))
    }

    fn context(&self, w: Arc<ReflectionGroup>) -> Result<TauContext> {
        let mut tau = parse_tau(&self.settings.tau, &w)?.resolve(&w)?;
        if self.settings.make_full {
            tau = make_full(&w, &tau)?;
        }
        TauContext::build(w, tau, refgroup::default_cap())
    }

    fn header(&self, report: &mut Report, w: &ReflectionGroup) {
        report.set("group", w.name());
        report.set("order", w.order());
        report.set("rank", w.dim());
    }

    fn maybe_verify(&self, report: &mut Report, ctx: Option<&TauContext>, k: Option<&ParameterK>) -> Result<()> {
        if !self.settings.verify {
            return Ok(());
        }
        let checks: Vec<Check> = match ctx {
            Some(ctx) => {
                let zero = ParameterK::zero(ctx.group());
                let sample = CherednikSample { triples: 20, ..Default::default() };
                verify::suite(ctx, k.unwrap_or(&zero), &sample)?
            }
            None => Vec::new(),
        };
        push_checks(report, checks);
        Ok(())
    }
}

fn push_checks(report: &mut Report, mut checks: Vec<Check>) {
    if let Some(Value::Array(existing)) = report.get("verification") {
        let mut old: Vec<Check> = existing
            .iter()
            .map(|v| Check {
                id: v["id"].as_str().unwrap_or_default().into(),
                pass: v["pass"].as_bool().unwrap_or(false),
                detail: v.get("detail").and_then(Value::as_str).unwrap_or_default().into(),
            })
            .collect();
        old.append(&mut checks);
        checks = old;
    }
    report.set("verification_passed", verify::all_pass(&checks));
    report.set("verification", checks);
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
}

fn vector_strings(v: &[CycNum]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn reflections(job: &Job) -> Result<Report> {
    let w = job.group()?;
    let mut r = Report::new("reflections", "reflection-enumeration");
    job.header(&mut r, &w);
    let mut table = Table::new("reflections", &["element", "word", "hyperplane", "det"]);
    let mut refl = Vec::new();
    for &s in w.reflections() {
        let h = w.hyperplane_of(s).expect("reflection has a hyperplane");
        table.push(vec![s.to_string(), w.word_label(s), h.to_string(), w.det(s).to_string()]);
        refl.push(serde_json::json!({
            "element": s,
            "word": w.word_label(s),
            "hyperplane": h,
            "det": w.det(s).to_string(),
            "matrix": matrix_strings(w.matrix(s)),
        }));
    }
    let hyps: Vec<Value> = w
        .hyperplanes()
        .iter()
        .map(|h| {
            serde_json::json!({
                "alpha": vector_strings(&h.alpha),
                "alpha_vee": vector_strings(&h.alpha_vee),
                "e": h.e,
                "orbit": h.orbit,
            })
        })
        .collect();
    r.set("reflection_count", w.reflections().len());
    r.set("hyperplane_count", w.hyperplanes().len());
    r.set("orbit_count", w.orbit_count());
    r.set("reflections", refl);
    r.set("hyperplanes", hyps);
    r.table = Some(table);
    let ctx = job.context(w)?;
    job.maybe_verify(&mut r, Some(&ctx), None)?;
    Ok(r)
}

fn parabolics(job: &Job) -> Result<Report> {
    let w = job.group()?;
    let mut r = Report::new("parabolics", "parabolic-classes");
    job.header(&mut r, &w);
    let mut table = Table::new("classes", &["class", "order", "fixed_dim", "class_size", "normalizer_quotient"]);
    let classes = w.parabolic_classes();
    let rows: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let nq = w.normalizer(&c.rep).quotient_order();
            table.push(vec![
                i.to_string(),
                c.rep.order().to_string(),
                c.rep.fixed_space.dim().to_string(),
                c.flats.len().to_string(),
                nq.to_string(),
            ]);
            serde_json::json!({
                "class": i,
                "order": c.rep.order(),
                "fixed_dim": c.rep.fixed_space.dim(),
                "class_size": c.flats.len(),
                "normalizer_quotient": nq,
                "fixed_space": c.rep.fixed_space.basis().iter().map(|b| vector_strings(b)).collect::<Vec<_>>(),
                "witness": vector_strings(&c.rep.witness),
            })
        })
        .collect();
    r.set("class_count", classes.len());
    r.set("classes", rows);
    r.table = Some(table);
    let ctx = job.context(w)?;
    job.maybe_verify(&mut r, Some(&ctx), None)?;
    Ok(r)
}

fn tau_header(r: &mut Report, ctx: &TauContext) {
    r.set("tau", matrix_strings(ctx.tau()));
    r.set("tau_order", ctx.order());
    r.set("v_tau_dim", ctx.v_tau().dim());
    r.set("delta", ctx.delta());
    r.set("full", ctx.is_full());
    r.set("regular", ctx.is_regular());
    r.set("w_tau_order", ctx.w_tau().order());
}

fn lehrer_springer(job: &Job) -> Result<Report> {
    let w = job.group()?;
    let ctx = job.context(w.clone())?;
    let mut r = Report::new("lehrer-springer", "lehrer-springer");
    job.header(&mut r, &w);
    tau_header(&mut r, &ctx);
    let wt = ctx.w_tau();
    r.set("w_tau_reflections", wt.reflections().len());
    r.set("w_tau_hyperplanes", wt.hyperplanes().len());
    r.set("w_tau_generated_by_reflections", wt.is_generated_by_reflections());
    r.set("hyperplane_traces_match", ctx.hyperplane_traces_match());
    r.set("v_tau_basis", ctx.v_tau().basis().iter().map(|b| vector_strings(b)).collect::<Vec<_>>());
    job.maybe_verify(&mut r, Some(&ctx), None)?;
    Ok(r)
}

fn tau_split(job: &Job) -> Result<Report> {
    let w = job.group()?;
    let ctx = job.context(w.clone())?;
    ctx.require_full()?;
    let mut r = Report::new("tau-split", "split-parabolic-bijection");
    job.header(&mut r, &w);
    tau_header(&mut r, &ctx);
    let splits = ctx.split_parabolics()?;
    let mut table = Table::new("split_parabolics", &["index", "order", "fixed_dim", "p_tau_order", "tau_rank", "normalizer_tau"]);
    let rows: Vec<Value> = splits
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let n = ctx.normalizer_tau(s);
            table.push(vec![
                i.to_string(),
                s.parabolic.order().to_string(),
                s.parabolic.fixed_space.dim().to_string(),
                s.p_tau.order().to_string(),
                s.tau_rank.to_string(),
                n.order.to_string(),
            ]);
            serde_json::json!({
                "index": i,
                "order": s.parabolic.order(),
                "fixed_dim": s.parabolic.fixed_space.dim(),
                "p_tau_order": s.p_tau.order(),
                "tau_rank": s.tau_rank,
                "normalizer_tau": n.order,
                "vptau": ctx.vptau_holds(s),
            })
        })
        .collect();
    r.set("split_count", splits.len());
    r.set("w_tau_parabolic_count", ctx.w_tau().all_parabolics().len());
    r.set("split_parabolics", rows);
    r.table = Some(table);
    job.maybe_verify(&mut r, Some(&ctx), None)?;
    Ok(r)
}

fn leaves_zero(job: &Job) -> Result<Report> {
    let w = job.group()?;
    let ctx = job.context(w.clone())?;
    let atlas = LeafAtlas::new(&ctx)?;
    let leaves = atlas.leaves_zero_tau();
    let mut r = Report::new("leaves-zero", "leaves-at-zero");
    job.header(&mut r, &w);
    tau_header(&mut r, &ctx);
    let mut table = Table::new(
        "leaves",
        &["p_class", "p_tau_class", "twist_class", "dim", "cuspidal_point", "model_dim", "model_normalizer", "model_parameter"],
    );
    for l in &leaves {
        table.push(vec![
            l.p_class.to_string(),
            l.p_tau_class.to_string(),
            l.twist_class.to_string(),
            l.dim.to_string(),
            l.cuspidal_point.clone(),
            l.conj_b_model.space_dim.to_string(),
            l.conj_b_model.normalizer_order.to_string(),
            l.conj_b_model.parameter.clone(),
        ]);
    }
    r.set("leaf_count", leaves.len());
    r.set("dims", leaf_dims(&leaves));
    r.set("leaves", &leaves);
    r.table = Some(table);
    job.maybe_verify(&mut r, Some(&ctx), None)?;
    Ok(r)
}

fn catalog_b(job: &Job, n: u64, m: u64, ratio: Option<&str>, cross: bool) -> Result<Report> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let mut r = Report::new("catalog-B", "type-B-leaves");
    r.set("source", catalog::SOURCE);
    r.set("n", n);
    let m = match ratio {
        Some(s) => {
            let q = catalog::parse_ratio(s)?;
            let smooth = catalog::smooth_b(n, &q);
            r.set("ratio", q.to_string());
            r.set("smooth", smooth);
            r.set("smoothness_formula", "type-B-smoothness");
            if smooth {
                None
            } else {
                Some(q.to_integer().magnitude().try_into().unwrap_or(u64::MAX))
            }
        }
        None => Some(m),
    };
    if let Some(m) = m {
        let rows = catalog::leaves_b(n, m);
        let mut table = Table::new("leaves", &["n", "m", "r", "dim", "cuspidal_point", "normalizer", "conjB_model"]);
        for l in &rows {
            table.push(vec![
                l.n.to_string(),
                l.m.to_string(),
                l.r.to_string(),
                l.dim.to_string(),
                l.cuspidal_point.clone(),
                l.normalizer.clone(),
                l.conj_b_model.clone(),
            ]);
        }
        r.set("m", m);
        r.set("has_cuspidal_point", catalog::has_cuspidal_b(n, m));
        r.set("leaves", &rows);
        r.table = Some(table);
        if cross {
            let checks = catalog::cross_check_normalizers_b(n, m)?;
            let all = checks.iter().all(|c| c.equal);
            r.set("normalizer_checks", &checks);
            if job.settings.verify {
                push_checks(&mut r, vec![Check::new("catalog.normalizers", all)]);
                let degenerate = catalog::degenerates_consistently(n, m)?;
                push_checks(&mut r, vec![Check::new("catalog.k-zero-degeneration", degenerate)]);
            }
        }
        if job.settings.verify {
            let parity = rows.iter().all(|l| l.dim % 2 == 0 && l.dim <= 2 * n);
            push_checks(&mut r, vec![Check::new("catalog.dimension-parity", parity)]);
        }
    }
    Ok(r)
}

fn catalog_d(job: &Job, n: u64, cross: bool) -> Result<Report> {
    let tau = job.settings.tau.trim();
    let mut r;
    match tau {
        "identity" | "id" => {
            r = Report::new("catalog-D", "type-D-leaves");
            let rows = catalog::leaves_d(n)?;
            let mut table = Table::new("leaves", &["n", "r", "dim", "cuspidal_point", "b_leaves", "t_action", "conjB_model"]);
            for l in &rows {
                let b: Vec<String> = l.b_leaves.iter().map(ToString::to_string).collect();
                table.push(vec![
                    l.n.to_string(),
                    l.r.to_string(),
                    l.dim.to_string(),
                    l.cuspidal_point.clone(),
                    b.join(" "),
                    l.t_action.clone(),
                    l.conj_b_model.clone(),
                ]);
            }
            r.set("leaves", &rows);
            r.table = Some(table);
        }
        "t" => {
            r = Report::new("catalog-D", "type-D-fixed-by-t");
            let rep = catalog::leaves_d_tau_t(n)?;
            let mut table = Table::new("tau_leaves", &["n", "r", "tau_parabolic_rank", "dim", "normalizer"]);
            for l in &rep.tau_leaves {
                table.push(vec![
                    l.n.to_string(),
                    l.r.to_string(),
                    l.tau_parabolic_rank.to_string(),
                    l.dim.to_string(),
                    l.normalizer.clone(),
                ]);
            }
            if job.settings.verify {
                push_checks(&mut r, vec![Check::new("catalog.d-b-compatibility", rep.dims_match_w_tau_labels)]);
            }
            r.set("tau_leaves", &rep.tau_leaves);
            r.set("leaves", &rep.leaves);
            r.set("quotient", &rep.quotient);
            r.set("fixed_locus", &rep.fixed_locus);
            r.set("w_tau", &rep.w_tau);
            r.table = Some(table);
        }
        other => return Err(Error::Invalid(format!("catalog-D supports tau identity or t, got {other:?}"))),
    }
    r.set("source", catalog::SOURCE);
    r.set("n", n);
    r.set("tau_name", tau);
    if cross {
        let (plain, twisted) = catalog::cross_check_normalizers_d(n)?;
        let all = plain.iter().chain(&twisted).all(|c| c.equal);
        r.set("normalizer_checks", &plain);
        r.set("normalizer_checks_tau_t", &twisted);
        if job.settings.verify {
            push_checks(&mut r, vec![Check::new("catalog.normalizers", all)]);
        }
    }
    Ok(r)
}

fn catalog_dihedral(job: &Job, d: u32) -> Result<Report> {
    let rec = catalog::dihedral_record(d)?;
    let mut r = Report::new("catalog-dihedral", "dihedral-equal-parameters");
    r.set("source", catalog::SOURCE);
    r.set("record", &rec);
    let note = catalog::smooth_fixed_points_note(&format!("dihedral{d}"), &CycNum::one())?;
    r.set("smooth_fixed_points", &note);
    if job.settings.verify {
        let w = Arc::new(groups::dihedral(d));
        let ctx = TauContext::build(w, groups::dihedral_reflection(d, 1), refgroup::default_cap())?;
        let mut checks = verify::tau_checks(&ctx)?;
        checks.extend(verify::leaf_checks(&ctx)?);
        push_checks(&mut r, checks);
    }
    Ok(r)
}

fn cherednik_check(job: &Job, triples: usize, seed: u64) -> Result<Report> {
    let w = job.group()?;
    let k = parse_k(&job.settings.k, &w)?;
    let mut r = Report::new("cherednik-check", "");
    job.header(&mut r, &w);
    r.set("k", k.values().iter().map(|v| vector_strings(v)).collect::<Vec<_>>());
    let checks = if w.dim() == 1 && w.order() == 2 {
        r.set("formula", "rank-one-quadric");
        let rel = rank1_center_relation(w.clone(), k.clone())?;
        let eng = Cherednik::new(w.clone(), k.clone(), Mode::TZero)?;
        r.set("z", eng.format(&rel.z));
        r.set("gamma", rel.gamma.to_string());
        r.set("b", rel.b.as_ref().map(ToString::to_string));
        let diff = k.get(0, 0) - k.get(0, 1);
        let ratio = match (&rel.b, diff.is_zero()) {
            (Some(b), false) => Some(CycNum::from_rat(b.clone()).try_div(&diff)?.to_string()),
            _ => None,
        };
        r.set("b_over_k0_minus_k1", ratio);
        verify::quadric_checks(&k)?
    } else {
        r.set("formula", "pbw-relations");
        let sample = CherednikSample { triples, seed, ..Default::default() };
        verify::cherednik_checks(w.clone(), &k, &sample)?
    };
    push_checks(&mut r, checks);
    Ok(r)
}

fn poisson(job: &Job, a: &str, b: &str) -> Result<Report> {
    let w = job.group()?;
    let k = parse_k(&job.settings.k, &w)?;
    let eng = Cherednik::new(w.clone(), k, Mode::TDeform)?;
    let (za, zb) = (eng.parse(a)?, eng.parse(b)?);
    let p = eng.poisson_bracket(&za, &zb)?;
    let mut r = Report::new("poisson", "poisson-bracket-limit");
    job.header(&mut r, &w);
    r.set("a", eng.format(&za));
    r.set("b", eng.format(&zb));
    r.set("bracket", eng.format(&p));
    r.set("z_degree", p.euler_degree());
    r.set("filtration_degree", p.filtration_degree());
    if job.settings.verify {
        let tzero = eng.with_mode(Mode::TZero)?;
        let checks = vec![
            Check::new("poisson.inputs-central", tzero.is_central(&za) && tzero.is_central(&zb)),
            Check::new("poisson.central", tzero.is_central(&p)),
        ];
        push_checks(&mut r, checks);
    }
    Ok(r)
}

fn dispatch(cli: &Cli, settings: &Settings) -> Result<Report> {
    let job = Job { settings };
    match &cli.command {
        Command::Reflections => reflections(&job),
        Command::Parabolics => parabolics(&job),
        Command::LehrerSpringer => lehrer_springer(&job),
        Command::TauSplit => tau_split(&job),
        Command::LeavesZero => leaves_zero(&job),
        Command::CatalogB { n, m, ratio, cross_check } => catalog_b(&job, *n, *m, ratio.as_deref(), *cross_check),
        Command::CatalogD { n, cross_check } => catalog_d(&job, *n, *cross_check),
        Command::CatalogDihedral { d } => catalog_dihedral(&job, *d),
        Command::CherednikCheck { triples, seed } => cherednik_check(&job, *triples, *seed),
        Command::Poisson { a, b } => poisson(&job, a, b),
    }
}

/// A finished run: the rendered report, whether it went to a file, and the exit code.
pub struct Outcome {
    pub text: String,
    pub written: bool,
    pub code: i32,
}

/// Run a parsed command line.
pub fn execute(cli: &Cli) -> std::result::Result<Outcome, (Error, i32)> {
    let fail = |e: Error| {
        let code = exit_code(&e);
        (e, code)
    };
    let settings = Settings::resolve(cli).map_err(fail)?;
    refgroup::set_cap(settings.cap.unwrap_or(0));
    let report = par::with_threads(settings.threads, || dispatch(cli, &settings)).map_err(fail)?;
    let text = report.render(settings.format).map_err(fail)?;
    if let Some(path) = &settings.output {
        std::fs::write(path, &text).map_err(|e| fail(Error::Io(format!("{}: {e}", path.display()))))?;
    }
    let failed = matches!(report.get("verification_passed"), Some(Value::Bool(false)));
    Ok(Outcome { text, written: settings.output.is_some(), code: if failed { EXIT_VERIFY } else { EXIT_OK } })
}

/// Entry point for the binary: parse, run, print, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SPEC } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if !out.written {
                let _ = std::io::stdout().lock().write_all(out.text.as_bytes());
            }
            if out.code == EXIT_VERIFY {
                eprintln!("error: verification failed");
            }
            out.code
        }
        Err((e, code)) => {
            eprintln!("error: {e}");
            code
        }
    }
}
