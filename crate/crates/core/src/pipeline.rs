//! End-to-end analysis of one braid and comparison across moves.

use serde::Serialize;

use crate::braid::{birman_move, mirror_braid, BraidWord, Move};
use crate::cover::{nabla_count, Differential, HeegaardDiagram};
use crate::error::{Error, Result};
use crate::filtered::{fingerprint, fingerprint_string, is_rho_degenerate, ClassFingerprint, FilteredComplex, PageReport, SpectralSequence};
use crate::grading::{Graded, GradingTable};
use crate::Rat;

pub struct Analysis {
    pub braid: BraidWord,
    pub graded: Graded<Rat>,
    pub table: GradingTable,
    pub heegaard: HeegaardDiagram,
    pub differential: Differential,
    /// Relative Maslov grading, zero at each class representative.
    pub gr: Vec<Rat>,
    pub rho: Vec<Rat>,
    /// ρ-filtered spectral sequence per class.
    pub rho_pages: Vec<SpectralSequence>,
    /// R-filtered spectral sequence of the whole complex.
    pub r_pages: SpectralSequence,
}

/// One counted differential entry with its anti-diagonal count.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub from: String,
    pub to: String,
    #[serde(serialize_with = "crate::grading::ser_rat")]
    pub r_drop: Rat,
    pub nabla: Option<i64>,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.nabla.is_some_and(|k| k >= 0)
    }
}

/// Gradings only; does not need a nice diagram.
pub fn grade(b: &BraidWord) -> Result<(Graded<Rat>, GradingTable)> {
    let g = Graded::<Rat>::new(b)?;
    let t = g.table()?;
    Ok((g, t))
}

pub fn analyze(b: &BraidWord) -> Result<Analysis> {
    let (graded, table) = grade(b)?;
    let heegaard = HeegaardDiagram::build(&graded)?;
    let differential = heegaard.differential()?;
    let gr = heegaard.relative_maslov(&differential.classes)?;
    let rho: Vec<Rat> = table.rows.iter().zip(&gr).map(|(row, g)| &row.r - g).collect();
    let labels = heegaard.names.clone();
    let rho_complex = FilteredComplex::new(labels.clone(), rho.clone(), differential.d.clone());
    rho_complex.verify()?;
    let mut rho_pages = Vec::new();
    for c in &differential.classes {
        rho_pages.push(rho_complex.restrict(&c.members)?.pages());
    }
    let r_complex = FilteredComplex::new(labels, table.rows.iter().map(|r| r.r.clone()).collect(), differential.d.clone());
    r_complex.verify()?;
    let r_pages = r_complex.pages();
    if r_pages.infinity().total() != r_complex.homology_dim() {
        return Err(Error::InternalInconsistency("E_∞ disagrees with homology".into()));
    }
    Ok(Analysis { braid: b.clone(), graded, table, heegaard, differential, gr, rho, rho_pages, r_pages })
}

impl Analysis {
    pub fn generator_count(&self) -> usize {
        self.table.rows.len()
    }

    pub fn homology_dim(&self) -> usize {
        self.r_pages.infinity().total()
    }

    pub fn degenerate(&self) -> bool {
        self.rho_pages.iter().all(is_rho_degenerate)
    }

    /// Every counted entry of `∂` with its R drop and anti-diagonal count.
    pub fn pair_checks(&self) -> Vec<PairCheck> {
        let mut out = Vec::new();
        for (x, ys) in self.differential.d.iter().enumerate() {
            for &y in ys {
                let dom = &self.differential.domains[&(x, y)][0];
                let mu = self.heegaard.maslov_index(dom, x, y);
                let (rx, ry) = (&self.table.rows[x].r, &self.table.rows[y].r);
                out.push(PairCheck {
                    from: self.table.rows[x].name.clone(),
                    to: self.table.rows[y].name.clone(),
                    r_drop: rx - ry,
                    nabla: nabla_count(rx, ry, &mu).ok(),
                });
            }
        }
        out
    }

    /// Generators whose `R` differs from the one with `e_x` and `e'_x`
    /// exchanged.
    pub fn stability_violations(&self) -> Vec<String> {
        stability_violations(&self.graded, &self.table)
    }

    pub fn fingerprint(&self) -> Vec<ClassFingerprint> {
        fingerprint(&self.rho_pages)
    }

    pub fn page_reports(&self) -> Vec<PageReport> {
        self.rho_pages
            .iter()
            .enumerate()
            .map(|(i, ss)| PageReport { class: i, pages: ss.pages.clone(), degenerate: is_rho_degenerate(ss) })
            .collect()
    }

    /// Checks that surviving classes have R differences equal to their
    /// relative Maslov differences whenever the class is degenerate.
    pub fn check_maslov_lift(&self) -> Result<()> {
        for (c, ss) in self.differential.classes.iter().zip(&self.rho_pages) {
            if !is_rho_degenerate(ss) {
                continue;
            }
            let surv: Vec<usize> = ss.survivors.iter().map(|&i| c.members[i]).collect();
            for w in surv.windows(2) {
                let dr = &self.table.rows[w[0]].r - &self.table.rows[w[1]].r;
                let dg = &self.gr[w[0]] - &self.gr[w[1]];
                if dr != dg {
                    return Err(Error::InternalInconsistency(format!("R does not lift gr on class {}", c.id)));
                }
            }
        }
        Ok(())
    }
}

pub fn stability_violations(g: &Graded<Rat>, t: &GradingTable) -> Vec<String> {
    let mut bad = Vec::new();
    for (gen, row) in t.generators.iter().zip(&t.rows) {
        for (k, &id) in gen.iter().enumerate() {
            let z = &g.z[id];
            let Some(pr) = z.primed else { continue };
            let twin = g.z.iter().find(|w| w.primed == Some(!pr) && w.base == z.base).expect("doubled point has a twin");
            let mut other = gen.clone();
            other[k] = twin.id;
            match t.r_of(&other) {
                Some(r) if *r == row.r => {}
                _ => bad.push(row.name.clone()),
            }
        }
    }
    bad
}

/// Sorted multiset `after` equals sorted `before` shifted by a constant.
pub fn multiset_shift(before: &[i64], after: &[i64]) -> Option<i64> {
    if before.len() != after.len() || before.is_empty() {
        return None;
    }
    let (mut a, mut b) = (before.to_vec(), after.to_vec());
    a.sort();
    b.sort();
    let s = b[0] - a[0];
    a.iter().zip(&b).all(|(x, y)| y - x == s).then_some(s)
}

fn sorted_r(t: &GradingTable) -> Vec<Rat> {
    let mut v: Vec<Rat> = t.rows.iter().map(|r| r.r.clone()).collect();
    v.sort();
    v
}

fn sub_multiset(small: &[Rat], big: &[Rat]) -> bool {
    let mut rest = big.to_vec();
    for r in small {
        match rest.iter().position(|x| x == r) {
            Some(i) => {
                rest.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Fingerprint or the reason none was computed.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum FingerprintOutcome {
    Computed(String),
    NotNice(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct MoveReport {
    pub braid: String,
    pub moved: String,
    #[serde(rename = "move")]
    pub mv: String,
    pub generators: (usize, usize),
    pub q_shift: Option<i64>,
    pub p_shift: Option<i64>,
    pub t_shift: Option<i64>,
    #[serde(serialize_with = "ser_pair")]
    pub s_r: (Rat, Rat),
    pub r_preserved: bool,
    pub r_negated: bool,
    /// The smaller R multiset is contained in the larger one.
    pub r_contained: bool,
    pub fingerprints: (FingerprintOutcome, FingerprintOutcome),
    pub fingerprints_equal: Option<bool>,
}

fn ser_pair<S: serde::Serializer>(p: &(Rat, Rat), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&p.0.to_string())?;
    t.serialize_element(&p.1.to_string())?;
    t.end()
}

/// A move or the mirror, as accepted by `check-move`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveSpec {
    Birman(Move),
    Mirror,
}

impl std::str::FromStr for MoveSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "mirror" {
            Ok(MoveSpec::Mirror)
        } else {
            s.parse().map(MoveSpec::Birman)
        }
    }
}

impl std::fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveSpec::Birman(m) => write!(f, "{m}"),
            MoveSpec::Mirror => write!(f, "mirror"),
        }
    }
}

impl MoveSpec {
    pub fn apply(&self, b: &BraidWord) -> Result<BraidWord> {
        match self {
            MoveSpec::Birman(m) => birman_move(b, *m),
            MoveSpec::Mirror => Ok(mirror_braid(b)),
        }
    }
}

fn fingerprint_outcome(b: &BraidWord, g: Graded<Rat>) -> Result<(FingerprintOutcome, Option<Vec<ClassFingerprint>>)> {
    let h = HeegaardDiagram::build(&g)?;
    if !h.is_nice() {
        return Ok((FingerprintOutcome::NotNice(h.census_string()), None));
    }
    let a = analyze(b)?;
    let fp = a.fingerprint();
    Ok((FingerprintOutcome::Computed(fingerprint_string(&fp)), Some(fp)))
}

pub fn check_move(b: &BraidWord, mv: MoveSpec) -> Result<MoveReport> {
    let b2 = mv.apply(b)?;
    let (g1, t1) = grade(b)?;
    let (g2, t2) = grade(&b2)?;
    let col = |t: &GradingTable, f: fn(&crate::grading::GradingRow) -> i64| t.rows.iter().map(f).collect::<Vec<i64>>();
    let (r1, r2) = (sorted_r(&t1), sorted_r(&t2));
    let mut neg: Vec<Rat> = r1.iter().map(|r| -r.clone()).collect();
    neg.sort();
    let (f1, fp1) = fingerprint_outcome(b, g1)?;
    let (f2, fp2) = fingerprint_outcome(&b2, g2)?;
    let fingerprints_equal = match (&fp1, &fp2) {
        (Some(a), Some(b)) => Some(if mv == MoveSpec::Mirror { crate::filtered::reflect(a) == *b } else { a == b }),
        _ => None,
    };
    Ok(MoveReport {
        braid: b.to_string(),
        moved: b2.to_string(),
        mv: mv.to_string(),
        generators: (t1.rows.len(), t2.rows.len()),
        q_shift: multiset_shift(&col(&t1, |r| r.q), &col(&t2, |r| r.q)),
        p_shift: multiset_shift(&col(&t1, |r| r.p), &col(&t2, |r| r.p)),
        t_shift: multiset_shift(&col(&t1, |r| r.t), &col(&t2, |r| r.t)),
        s_r: (t1.s_r.clone(), t2.s_r.clone()),
        r_preserved: r1 == r2,
        r_negated: neg == r2,
        r_contained: if r1.len() <= r2.len() { sub_multiset(&r1, &r2) } else { sub_multiset(&r2, &r1) },
        fingerprints: (f1, f2),
        fingerprints_equal,
    })
}

impl MoveReport {
    /// One-line verdict.
    pub fn summary(&self) -> String {
        let shift = |name: &str, s: Option<i64>| match s {
            Some(0) => format!("{name} same"),
            Some(k) => format!("{name}{k:+}"),
            None => format!("{name} not a shift"),
        };
        let ds = &self.s_r.1 - &self.s_r.0;
        let mut parts = vec![shift("Q", self.q_shift), shift("P", self.p_shift), shift("T", self.t_shift)];
        parts.push(if ds == Rat::from_integer(0.into()) { "s_R equal".into() } else { format!("s_R{}{ds}", if ds > Rat::from_integer(0.into()) { "+" } else { "" }) });
        parts.push(
            if self.r_preserved {
                "R multiset preserved"
            } else if self.r_negated {
                "R multiset negated"
            } else if self.r_contained {
                "R multiset extended"
            } else {
                "R multiset changed"
            }
            .into(),
        );
        parts.push(match self.fingerprints_equal {
            Some(true) => "fingerprints equal".into(),
            Some(false) => "fingerprints differ".into(),
            None => "fingerprints skipped (diagram not nice)".into(),
        });
        parts.join("; ")
    }
}
