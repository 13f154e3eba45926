//! Command line front end: argument model, report rendering and the
//! diagnostic SVG dump.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::braid::{parse_braid, BraidWord, RandomKnots};
use crate::error::{Error, Result};
use crate::filtered::{is_rho_degenerate, Page, PageEntry};
use crate::grading::{Graded, GradingRow, GradingTable};
use crate::pipeline::{analyze, check_move, grade, Analysis, MoveReport, MoveSpec};
use crate::Rat;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct BraidArgs {
    /// Number of strands (even).
    #[arg(short = 'n', long = "strands")]
    pub strands: usize,
    /// Braid word such as "s2^3" or "s1 s3^-1"; empty for the identity.
    pub braid: String,
}

impl BraidArgs {
    pub fn word(&self) -> Result<BraidWord> {
        parse_braid(&self.braid, self.strands)
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Task {
    /// List the intersection points and the Bigelow generators.
    Generators(BraidArgs),
    /// Q*, P*, T, Q, P, R̃ and R distributions.
    Gradings(BraidArgs),
    /// Differential, Spin^c classes, homology and spectral pages.
    Homology {
        #[command(flatten)]
        braid: BraidArgs,
        /// Restrict the report to one Spin^c class.
        #[arg(long)]
        class: Option<usize>,
    },
    /// Compare gradings and page fingerprints across a move.
    CheckMove {
        #[command(flatten)]
        braid: BraidArgs,
        /// A, B, C<i> (optionally with ^-1), stab, destab or mirror.
        #[arg(long = "move")]
        mv: String,
    },
    /// Parity and stability checks over a seeded random knot corpus.
    Survey {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of knots drawn.
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Strand counts to draw from.
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6])]
        strands: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

#[derive(Clone, Debug, Parser)]
#[command(name = "platfloer", version, about = "Bigelow generators, R gradings and ρ-filtered hat-Floer complexes of plat-closed braids")]
pub struct RunConfig {
    #[command(subcommand)]
    pub task: Task,
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,
    /// Write an SVG picture of the fork diagram of the input braid.
    #[arg(long, global = true)]
    pub dump_svg: Option<PathBuf>,
    /// Stage timings on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

struct Timer {
    on: bool,
    t: Instant,
}

impl Timer {
    fn new(verbosity: u8) -> Self {
        Timer { on: verbosity > 0, t: Instant::now() }
    }

    fn lap(&mut self, what: &str) {
        if self.on {
            eprintln!("[{:>8.1} ms] {what}", self.t.elapsed().as_secs_f64() * 1e3);
        }
        self.t = Instant::now();
    }
}

/// Runs one command and returns what goes to stdout.
pub fn run(cfg: &RunConfig) -> Result<String> {
    let mut timer = Timer::new(cfg.verbose);
    if let (Some(path), Some(args)) = (&cfg.dump_svg, braid_args(&cfg.task)) {
        let g = Graded::<Rat>::new(&args.word()?)?;
        std::fs::write(path, fork_svg(&g)).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
        timer.lap("svg");
    }
    match &cfg.task {
        Task::Generators(a) => {
            let b = a.word()?;
            let g = Graded::<Rat>::new(&b)?;
            timer.lap("fork diagram");
            Ok(render_generators(&b, &g, cfg.format))
        }
        Task::Gradings(a) => {
            let b = a.word()?;
            let (g, t) = grade(&b)?;
            timer.lap("gradings");
            Ok(render_gradings(&b, &g, &t, cfg.format))
        }
        Task::Homology { braid, class } => {
            let b = braid.word()?;
            let an = analyze(&b)?;
            timer.lap("analysis");
            if let Some(c) = class {
                if *c >= an.differential.classes.len() {
                    return Err(Error::Parse(format!("class {c} out of range: {} classes", an.differential.classes.len())));
                }
            }
            Ok(render_homology(&an, *class, cfg.format))
        }
        Task::CheckMove { braid, mv } => {
            let b = braid.word()?;
            let mv: MoveSpec = mv.parse()?;
            let r = check_move(&b, mv)?;
            timer.lap("move check");
            Ok(render_move(&r, cfg.format))
        }
        Task::Survey { seed, count, strands, max_len } => {
            let knots: Vec<BraidWord> = RandomKnots::new(*seed, strands, *max_len)?.take(*count).collect();
            let rows = knots.iter().map(survey_row).collect::<Result<Vec<_>>>()?;
            timer.lap("survey");
            Ok(render_survey(*seed, &rows, cfg.format))
        }
    }
}

fn braid_args(t: &Task) -> Option<&BraidArgs> {
    match t {
        Task::Generators(a) | Task::Gradings(a) => Some(a),
        Task::Homology { braid, .. } | Task::CheckMove { braid, .. } => Some(braid),
        Task::Survey { .. } => None,
    }
}

fn schema(name: &str) -> String {
    format!("platfloer/{name}/{SCHEMA_VERSION}")
}

fn json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn md_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
}

fn braid_text(b: &BraidWord) -> String {
    if b.is_empty() {
        "identity".into()
    } else {
        b.to_string()
    }
}

// generators

#[derive(Serialize)]
struct PointDoc {
    id: usize,
    label: String,
    tine: usize,
    eight: usize,
    primed: Option<bool>,
    leg: usize,
}

#[derive(Serialize)]
struct GeneratorsDoc {
    schema: String,
    braid: String,
    strands: usize,
    points: Vec<PointDoc>,
    generators: Vec<String>,
}

fn point_kind(p: Option<bool>) -> &'static str {
    match p {
        None => "puncture",
        Some(false) => "e",
        Some(true) => "e'",
    }
}

fn render_generators(b: &BraidWord, g: &Graded<Rat>, f: Format) -> String {
    let gens = g.generators();
    let names: Vec<String> = gens.iter().map(|x| g.name(x)).collect();
    match f {
        Format::Json => json(&GeneratorsDoc {
            schema: schema("generators"),
            braid: b.to_string(),
            strands: b.strands,
            points: g.z.iter().map(|z| PointDoc { id: z.id, label: z.label.clone(), tine: z.tine, eight: z.eight, primed: z.primed, leg: z.leg }).collect(),
            generators: names,
        }),
        Format::Csv => csv_text(
            &["index", "generator", "points"],
            &gens.iter().zip(&names).enumerate().map(|(i, (x, n))| vec![i.to_string(), n.clone(), x.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")]).collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# Bigelow generators of {} on {} strands\n", braid_text(b), b.strands);
            let _ = writeln!(out, "## Intersection points ({})\n", g.z.len());
            let rows: Vec<Vec<String>> = g
                .z
                .iter()
                .map(|z| vec![z.id.to_string(), z.label.clone(), z.tine.to_string(), z.eight.to_string(), point_kind(z.primed).into()])
                .collect();
            md_table(&mut out, &["id", "label", "tine", "figure-eight", "kind"], &rows);
            let _ = writeln!(out, "\n## Generators ({})\n", names.len());
            let rows: Vec<Vec<String>> = names.iter().enumerate().map(|(i, n)| vec![i.to_string(), n.clone()]).collect();
            md_table(&mut out, &["#", "generator"], &rows);
            out
        }
    }
}

// gradings

#[derive(Serialize)]
struct PointGradingDoc {
    label: String,
    q_star: i64,
    p_star: i64,
}

#[derive(Serialize)]
struct GradingsDoc<'a> {
    schema: String,
    braid: String,
    strands: usize,
    #[serde(serialize_with = "crate::grading::ser_rat")]
    s_r: Rat,
    points: Vec<PointGradingDoc>,
    generators: &'a [GradingRow],
}

/// Rows `value | elements` in increasing value, as in a distribution table.
fn distribution<K: Ord + Clone + std::fmt::Display>(items: impl Iterator<Item = (K, String)>) -> Vec<Vec<String>> {
    let mut m: std::collections::BTreeMap<K, Vec<String>> = std::collections::BTreeMap::new();
    for (k, name) in items {
        m.entry(k).or_default().push(name);
    }
    m.into_iter().map(|(k, v)| vec![k.to_string(), v.join(", ")]).collect()
}

fn render_gradings(b: &BraidWord, g: &Graded<Rat>, t: &GradingTable, f: Format) -> String {
    match f {
        Format::Json => json(&GradingsDoc {
            schema: schema("gradings"),
            braid: b.to_string(),
            strands: b.strands,
            s_r: t.s_r.clone(),
            points: g
                .z
                .iter()
                .enumerate()
                .map(|(i, z)| PointGradingDoc { label: z.label.clone(), q_star: t.q_star[i], p_star: t.p_star[i] })
                .collect(),
            generators: &t.rows,
        }),
        Format::Csv => csv_text(
            &["generator", "Q", "P", "T", "R_tilde", "R"],
            &t.rows.iter().map(|r| vec![r.name.clone(), r.q.to_string(), r.p.to_string(), r.t.to_string(), r.r_tilde.to_string(), r.r.to_string()]).collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# Gradings of {} on {} strands\n", braid_text(b), b.strands);
            let _ = writeln!(out, "s_R = {}\n", t.s_r);
            let gen_items = |f: fn(&GradingRow) -> i64| t.rows.iter().map(move |r| (f(r), r.name.clone()));
            let point_items = |v: &[i64]| v.iter().zip(&t.z_labels).map(|(k, l)| (*k, l.clone())).collect::<Vec<_>>();
            let sections: Vec<(&str, &str, Vec<Vec<String>>)> = vec![
                ("T", "generators", distribution(gen_items(|r| r.t))),
                ("P*", "points", distribution(point_items(&t.p_star).into_iter())),
                ("P", "generators", distribution(gen_items(|r| r.p))),
                ("Q*", "points", distribution(point_items(&t.q_star).into_iter())),
                ("Q", "generators", distribution(gen_items(|r| r.q))),
                ("R̃", "generators", distribution(gen_items(|r| r.r_tilde))),
                ("R", "generators", distribution(t.rows.iter().map(|r| (r.r.clone(), r.name.clone())))),
            ];
            for (i, (name, what, rows)) in sections.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                md_table(&mut out, &[name, what], rows);
            }
            out
        }
    }
}

// homology

#[derive(Serialize)]
struct GeneratorDoc {
    name: String,
    class: usize,
    #[serde(serialize_with = "crate::grading::ser_rat")]
    r: Rat,
    #[serde(serialize_with = "crate::grading::ser_rat")]
    rho: Rat,
    boundary: Vec<String>,
}

#[derive(Serialize)]
struct ClassDoc {
    id: usize,
    members: Vec<String>,
    homology: usize,
    degenerate: bool,
    stabilization: usize,
    pages: Vec<Page>,
}

#[derive(Serialize)]
struct HomologyDoc {
    schema: String,
    braid: String,
    strands: usize,
    nice: bool,
    generators: Vec<GeneratorDoc>,
    classes: Vec<ClassDoc>,
    homology: usize,
    homology_by_r: Vec<PageEntry>,
    degenerate: bool,
}

fn class_of(an: &Analysis) -> Vec<usize> {
    let mut c = vec![0; an.generator_count()];
    for k in &an.differential.classes {
        for &m in &k.members {
            c[m] = k.id;
        }
    }
    c
}

fn homology_doc(an: &Analysis, only: Option<usize>) -> HomologyDoc {
    let names: Vec<&String> = an.table.rows.iter().map(|r| &r.name).collect();
    let cls = class_of(an);
    let keep = |i: usize| only.is_none_or(|c| cls[i] == c);
    let generators = (0..an.generator_count())
        .filter(|&i| keep(i))
        .map(|i| GeneratorDoc {
            name: names[i].clone(),
            class: cls[i],
            r: an.table.rows[i].r.clone(),
            rho: an.rho[i].clone(),
            boundary: an.differential.d[i].iter().map(|&y| names[y].clone()).collect(),
        })
        .collect();
    let classes = an
        .differential
        .classes
        .iter()
        .zip(&an.rho_pages)
        .filter(|(c, _)| only.is_none_or(|o| o == c.id))
        .map(|(c, ss)| ClassDoc {
            id: c.id,
            members: c.members.iter().map(|&m| names[m].clone()).collect(),
            homology: ss.infinity().total(),
            degenerate: is_rho_degenerate(ss),
            stabilization: ss.stabilization,
            pages: ss.pages.clone(),
        })
        .collect();
    HomologyDoc {
        schema: schema("homology"),
        braid: an.braid.to_string(),
        strands: an.braid.strands,
        nice: true,
        generators,
        classes,
        homology: an.homology_dim(),
        homology_by_r: an.r_pages.infinity().entries.clone(),
        degenerate: an.degenerate(),
    }
}

fn entries_text(e: &[PageEntry]) -> String {
    if e.is_empty() {
        return "0".into();
    }
    e.iter().map(|x| format!("{}:{}", x.level, x.dim)).collect::<Vec<_>>().join(", ")
}

fn render_homology(an: &Analysis, only: Option<usize>, f: Format) -> String {
    let doc = homology_doc(an, only);
    match f {
        Format::Json => json(&doc),
        Format::Csv => csv_text(
            &["generator", "class", "R", "rho", "boundary"],
            &doc.generators.iter().map(|g| vec![g.name.clone(), g.class.to_string(), g.r.to_string(), g.rho.to_string(), g.boundary.join("; ")]).collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# Filtered hat-Floer complex of {} on {} strands\n", braid_text(&an.braid), an.braid.strands);
            let _ = writeln!(out, "generators: {}", an.generator_count());
            let _ = writeln!(out, "Spin^c classes: {}", an.differential.classes.len());
            let _ = writeln!(out, "homology: {}", doc.homology);
            let _ = writeln!(out, "ρ-degenerate: {}", doc.degenerate);
            if let Some(c) = only {
                let _ = writeln!(out, "showing class {c}");
            }
            let _ = writeln!(out, "\n## Differential\n");
            let rows: Vec<Vec<String>> = doc
                .generators
                .iter()
                .map(|g| vec![g.name.clone(), g.class.to_string(), g.r.to_string(), g.rho.to_string(), if g.boundary.is_empty() { "0".into() } else { g.boundary.join(" + ") }])
                .collect();
            md_table(&mut out, &["generator", "class", "R", "ρ", "∂"], &rows);
            let _ = writeln!(out, "\n## Spin^c classes\n");
            let rows: Vec<Vec<String>> = doc
                .classes
                .iter()
                .map(|c| vec![c.id.to_string(), c.members.len().to_string(), c.homology.to_string(), c.degenerate.to_string(), c.members.join(", ")])
                .collect();
            md_table(&mut out, &["class", "size", "homology", "degenerate", "members"], &rows);
            if only.is_none() {
                let _ = writeln!(out, "\n## Homology by R\n");
                let rows: Vec<Vec<String>> = doc.homology_by_r.iter().map(|e| vec![e.level.to_string(), e.dim.to_string()]).collect();
                md_table(&mut out, &["R", "dim"], &rows);
            }
            let _ = writeln!(out, "\n## ρ pages\n");
            let mut rows = Vec::new();
            for c in &doc.classes {
                let last = c.pages.len() - 1;
                for p in &c.pages {
                    let name = if p.index == last { format!("E_{} = E_∞", p.index) } else { format!("E_{}", p.index) };
                    rows.push(vec![c.id.to_string(), name, entries_text(&p.entries), p.rank.to_string()]);
                }
            }
            md_table(&mut out, &["class", "page", "level:dim", "rank of ∂"], &rows);
            out
        }
    }
}

// check-move

#[derive(Serialize)]
struct MoveDoc<'a> {
    schema: String,
    report: &'a MoveReport,
    summary: String,
}

fn opt_shift(s: Option<i64>) -> String {
    s.map_or_else(|| "not a shift".into(), |k| if k == 0 { "0".into() } else { format!("{k:+}") })
}

fn fp_text(f: &crate::pipeline::FingerprintOutcome) -> String {
    match f {
        crate::pipeline::FingerprintOutcome::Computed(s) => s.clone(),
        crate::pipeline::FingerprintOutcome::NotNice(c) => format!("not nice ({c})"),
    }
}

fn render_move(r: &MoveReport, f: Format) -> String {
    let fields: Vec<(&str, String)> = vec![
        ("braid", r.braid.clone()),
        ("move", r.mv.clone()),
        ("moved braid", r.moved.clone()),
        ("generators", format!("{} → {}", r.generators.0, r.generators.1)),
        ("Q shift", opt_shift(r.q_shift)),
        ("P shift", opt_shift(r.p_shift)),
        ("T shift", opt_shift(r.t_shift)),
        ("s_R", format!("{} → {}", r.s_r.0, r.s_r.1)),
        ("R preserved", r.r_preserved.to_string()),
        ("R negated", r.r_negated.to_string()),
        ("R contained", r.r_contained.to_string()),
        ("fingerprint before", fp_text(&r.fingerprints.0)),
        ("fingerprint after", fp_text(&r.fingerprints.1)),
        ("fingerprints equal", r.fingerprints_equal.map_or_else(|| "skipped".into(), |b| b.to_string())),
    ];
    match f {
        Format::Json => json(&MoveDoc { schema: schema("check-move"), report: r, summary: r.summary() }),
        Format::Csv => csv_text(&["field", "value"], &fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect::<Vec<_>>()),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# Move {} on {}\n", r.mv, if r.braid.is_empty() { "identity" } else { &r.braid });
            md_table(&mut out, &["field", "value"], &fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect::<Vec<_>>());
            let _ = writeln!(out, "\n{}", r.summary());
            out
        }
    }
}

// survey

#[derive(Clone, Debug, Serialize)]
pub struct SurveyRow {
    pub braid: String,
    pub strands: usize,
    pub generators: usize,
    /// Region census when the diagram is not nice.
    pub not_nice: Option<String>,
    pub homology: Option<usize>,
    pub degenerate: Option<bool>,
    pub differential_pairs: usize,
    pub parity_violations: Vec<String>,
    pub stability_violations: Vec<String>,
}

pub fn survey_row(b: &BraidWord) -> Result<SurveyRow> {
    let (g, t) = grade(b)?;
    let stability_violations = crate::pipeline::stability_violations(&g, &t);
    let mut row = SurveyRow {
        braid: b.to_string(),
        strands: b.strands,
        generators: t.rows.len(),
        not_nice: None,
        homology: None,
        degenerate: None,
        differential_pairs: 0,
        parity_violations: Vec::new(),
        stability_violations,
    };
    match analyze(b) {
        Ok(an) => {
            let checks = an.pair_checks();
            row.differential_pairs = checks.len();
            row.parity_violations = checks.iter().filter(|c| !c.ok()).map(|c| format!("{} → {}", c.from, c.to)).collect();
            row.homology = Some(an.homology_dim());
            row.degenerate = Some(an.degenerate());
        }
        Err(Error::NotNice(c)) => row.not_nice = Some(c),
        Err(e) => return Err(e),
    }
    Ok(row)
}

#[derive(Serialize)]
struct SurveyDoc<'a> {
    schema: String,
    seed: u64,
    knots: usize,
    nice: usize,
    parity_violations: usize,
    stability_violations: usize,
    rows: &'a [SurveyRow],
}

fn render_survey(seed: u64, rows: &[SurveyRow], f: Format) -> String {
    let nice = rows.iter().filter(|r| r.not_nice.is_none()).count();
    let parity: usize = rows.iter().map(|r| r.parity_violations.len()).sum();
    let stab: usize = rows.iter().map(|r| r.stability_violations.len()).sum();
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    match f {
        Format::Json => json(&SurveyDoc { schema: schema("survey"), seed, knots: rows.len(), nice, parity_violations: parity, stability_violations: stab, rows }),
        Format::Csv => csv_text(
            &["braid", "strands", "generators", "nice", "homology", "degenerate", "pairs", "parity_violations", "stability_violations"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.braid.clone(),
                        r.strands.to_string(),
                        r.generators.to_string(),
                        r.not_nice.is_none().to_string(),
                        opt(r.homology.map(|h| h.to_string())),
                        opt(r.degenerate.map(|d| d.to_string())),
                        r.differential_pairs.to_string(),
                        r.parity_violations.len().to_string(),
                        r.stability_violations.len().to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "# Random knot survey, seed {seed}\n");
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.braid.clone(),
                        r.strands.to_string(),
                        r.generators.to_string(),
                        r.not_nice.clone().map_or_else(|| "yes".into(), |c| format!("no ({c})")),
                        opt(r.homology.map(|h| h.to_string())),
                        opt(r.degenerate.map(|d| d.to_string())),
                        r.differential_pairs.to_string(),
                        r.parity_violations.len().to_string(),
                        r.stability_violations.len().to_string(),
                    ]
                })
                .collect();
            md_table(&mut out, &["braid", "strands", "generators", "nice", "homology", "degenerate", "∂ pairs", "parity", "stability"], &table);
            let _ = writeln!(out, "\nknots: {}, nice: {nice}, parity violations: {parity}, stability violations: {stab}", rows.len());
            out
        }
    }
}

// svg

/// Fork diagram picture: axis, punctures, figure-eight legs, handles and
/// the intersection points on the tines.
pub fn fork_svg(g: &Graded<Rat>) -> String {
    use num_traits::ToPrimitive;
    let f = |r: &Rat| r.to_f64().unwrap_or(0.0);
    let scale = 80.0;
    let h = f(&g.geo.h);
    let width = (2 * g.n + 1) as f64;
    let (px, py) = (|x: f64| x * scale + 20.0, move |y: f64| (h - y) * scale + 20.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="sans-serif" font-size="11">"#,
        width * scale + 40.0,
        2.0 * h * scale + 40.0
    );
    let _ = writeln!(out, r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#999"/>"##, px(0.0), py(h), width * scale, 2.0 * h * scale);
    let _ = writeln!(out, r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#ccc"/>"##, px(0.0), py(0.0), px(width), py(0.0));
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (j, legs) in g.geo.legs.iter().enumerate() {
        let c = colors[j % colors.len()];
        for (li, leg) in legs.iter().enumerate() {
            let pts: Vec<String> = leg.iter().map(|p| format!("{:.2},{:.2}", px(f(&p.x)), py(f(&p.y)))).collect();
            let dash = if li == 2 { r#" stroke-dasharray="4 3""# } else { "" };
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{c}"{dash}/>"#, pts.join(" "));
        }
    }
    for k in 1..=2 * g.n {
        let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="black"/>"#, px(k as f64), py(0.0));
    }
    for z in &g.z {
        let (x, y) = (px(f(&z.base)), py(0.0));
        let dy = match z.primed {
            Some(true) => 14.0,
            _ => -6.0,
        };
        let _ = writeln!(out, r##"<circle cx="{x:.1}" cy="{y:.1}" r="2.5" fill="#444"/><text x="{x:.1}" y="{:.1}">{}</text>"##, y + dy, z.label);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("platfloer").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn identity_lists_two_generators() {
        let out = run(&cfg(&["generators", "-n", "2", ""])).unwrap();
        assert!(out.contains("## Generators (2)"), "{out}");
    }

    #[test]
    fn unlink_is_rejected() {
        let e = run(&cfg(&["generators", "-n", "4", ""])).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn bad_braid_is_a_parse_error() {
        let e = run(&cfg(&["gradings", "-n", "4", "s9"])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&cfg(&["check-move", "-n", "4", "s2^3", "--move", "Z"])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn distribution_rows_are_sorted() {
        let rows = distribution(vec![(2, "b".to_string()), (0, "a".into()), (2, "c".into())].into_iter());
        assert_eq!(rows, vec![vec!["0".to_string(), "a".into()], vec!["2".into(), "b, c".into()]]);
    }
}
