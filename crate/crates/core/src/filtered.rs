//! F₂ filtered chain complexes and their spectral sequences.
//!
//! Pages are read off a persistence pairing: reducing the boundary matrix
//! with the basis ordered by level pairs each killed element with the
//! element whose boundary kills it. A pair whose levels differ by `m` grid
//! steps survives to `E_m` and is gone from `E_{m+1}`; unpaired elements
//! span `E_∞`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::F2Matrix;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    pub labels: Vec<String>,
    pub levels: Vec<Rat>,
    /// `d[x]` lists the basis elements with coefficient one in `∂x`.
    pub d: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    #[serde(serialize_with = "crate::grading::ser_rat")]
    pub level: Rat,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    pub index: usize,
    pub entries: Vec<PageEntry>,
    /// Rank of the differential `∂_index` on this page.
    pub rank: usize,
}

impl Page {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.dim).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralSequence {
    /// `E_0, …, E_s` with `E_s = E_∞`.
    pub pages: Vec<Page>,
    /// First page equal to `E_∞`.
    pub stabilization: usize,
    /// Unpaired basis elements, one per homology class.
    #[serde(skip)]
    pub survivors: Vec<usize>,
    #[serde(skip)]
    pub pairs: Vec<(usize, usize, usize)>,
}

impl SpectralSequence {
    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }
}

fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    let den = a.denom().lcm(b.denom());
    let na = a.numer() * (&den / a.denom());
    let nb = b.numer() * (&den / b.denom());
    Rat::new(na.gcd(&nb), den)
}

impl FilteredComplex {
    pub fn new(labels: Vec<String>, levels: Vec<Rat>, d: Vec<Vec<usize>>) -> Self {
        FilteredComplex { labels, levels, d }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Restriction to a subset closed under `∂`.
    pub fn restrict(&self, members: &[usize]) -> Result<Self> {
        let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut d = Vec::new();
        for &m in members {
            let row: Option<Vec<usize>> = self.d[m].iter().map(|y| pos.get(y).copied()).collect();
            d.push(row.ok_or_else(|| Error::InternalInconsistency(format!("∂{} leaves the subcomplex", self.labels[m])))?);
        }
        Ok(FilteredComplex {
            labels: members.iter().map(|&m| self.labels[m].clone()).collect(),
            levels: members.iter().map(|&m| self.levels[m].clone()).collect(),
            d,
        })
    }

    fn matrix(&self) -> F2Matrix {
        let mut m = F2Matrix::zeros(self.len(), self.len());
        for (x, ys) in self.d.iter().enumerate() {
            for &y in ys {
                m.set(y, x, !m.get(y, x));
            }
        }
        m
    }

    pub fn verify(&self) -> Result<()> {
        for (x, ys) in self.d.iter().enumerate() {
            for &y in ys {
                if self.levels[y] > self.levels[x] {
                    return Err(Error::FiltrationViolation(format!(
                        "∂{} contains {} at a higher level ({} > {})",
                        self.labels[x], self.labels[y], self.levels[y], self.levels[x]
                    )));
                }
            }
        }
        let m = self.matrix();
        if !m.mul(&m).is_zero() {
            return Err(Error::NotADifferential("∂∘∂ ≠ 0".into()));
        }
        Ok(())
    }

    /// Common step of the level set: the gcd of all level gaps.
    pub fn grid(&self) -> Rat {
        let set: BTreeSet<&Rat> = self.levels.iter().collect();
        let v: Vec<&Rat> = set.into_iter().collect();
        let mut g = Rat::zero();
        for w in v.windows(2) {
            g = rat_gcd(&g, &(w[1] - w[0]));
        }
        if g.is_zero() {
            Rat::from_integer(1.into())
        } else {
            g
        }
    }

    fn steps(&self, x: usize, y: usize, grid: &Rat) -> usize {
        ((&self.levels[x] - &self.levels[y]) / grid).to_integer().to_usize().expect("level drop is a whole number of steps")
    }

    /// `∂ = Σ ∂_m` with `∂_m` dropping the level by exactly `m` grid steps.
    pub fn decompose(&self) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let grid = self.grid();
        let mut out: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, ys) in self.d.iter().enumerate() {
            for &y in ys {
                out.entry(self.steps(x, y, &grid)).or_default().push((x, y));
            }
        }
        out
    }

    pub fn pages(&self) -> SpectralSequence {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| self.levels[*a].cmp(&self.levels[*b]).then(a.cmp(b)));
        let mut rank_of = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank_of[i] = r;
        }
        let mut cols: Vec<BTreeSet<usize>> = order
            .iter()
            .map(|&x| {
                let mut s = BTreeSet::new();
                for &y in &self.d[x] {
                    if !s.remove(&rank_of[y]) {
                        s.insert(rank_of[y]);
                    }
                }
                s
            })
            .collect();
        let mut low_owner: BTreeMap<usize, usize> = BTreeMap::new();
        for j in 0..n {
            while let Some(&low) = cols[j].iter().next_back() {
                match low_owner.get(&low) {
                    Some(&k) => {
                        let other = cols[k].clone();
                        for r in other {
                            if !cols[j].remove(&r) {
                                cols[j].insert(r);
                            }
                        }
                    }
                    None => {
                        low_owner.insert(low, j);
                        break;
                    }
                }
            }
        }
        let grid = self.grid();
        let mut paired = vec![false; n];
        let mut pairs = Vec::new();
        for (&low, &j) in &low_owner {
            let (y, x) = (order[low], order[j]);
            paired[x] = true;
            paired[y] = true;
            pairs.push((x, y, self.steps(x, y, &grid)));
        }
        pairs.sort();
        let survivors: Vec<usize> = (0..n).filter(|&i| !paired[i]).collect();
        let stabilization = pairs.iter().map(|p| p.2 + 1).max().unwrap_or(0);
        let mut pages = Vec::new();
        for r in 0..=stabilization {
            let mut dims: BTreeMap<Rat, usize> = BTreeMap::new();
            for &i in &survivors {
                *dims.entry(self.levels[i].clone()).or_insert(0) += 1;
            }
            for &(x, y, m) in &pairs {
                if m >= r {
                    *dims.entry(self.levels[x].clone()).or_insert(0) += 1;
                    *dims.entry(self.levels[y].clone()).or_insert(0) += 1;
                }
            }
            let rank = pairs.iter().filter(|p| p.2 == r).count();
            pages.push(Page { index: r, entries: dims.into_iter().map(|(level, dim)| PageEntry { level, dim }).collect(), rank });
        }
        SpectralSequence { pages, stabilization, survivors, pairs }
    }

    /// `dim H(C, ∂)` by Gaussian elimination.
    pub fn homology_dim(&self) -> usize {
        self.len() - 2 * self.matrix().rank()
    }
}

/// Collapse at `E_1` with all of `E_∞` at a single level.
pub fn is_rho_degenerate(ss: &SpectralSequence) -> bool {
    ss.stabilization <= 1 && ss.infinity().entries.len() <= 1
}

/// Pages `E_1, …, E_∞` of one class with levels measured from the lowest
/// occupied level of `E_1`.
pub type ClassFingerprint = Vec<Vec<(Rat, usize)>>;

pub fn class_fingerprint(ss: &SpectralSequence) -> ClassFingerprint {
    let from = std::cmp::min(1, ss.pages.len() - 1);
    let pages = &ss.pages[from..];
    let Some(base) = pages[0].entries.first().map(|e| e.level.clone()) else { return Vec::new() };
    pages.iter().map(|p| p.entries.iter().map(|e| (&e.level - &base, e.dim)).collect()).collect()
}

/// Sorted multiset of the nonzero class fingerprints.
pub fn fingerprint(classes: &[SpectralSequence]) -> Vec<ClassFingerprint> {
    let mut v: Vec<ClassFingerprint> = classes.iter().map(class_fingerprint).filter(|f| !f.is_empty()).collect();
    v.sort();
    v
}

/// Fingerprint of the complex with all levels negated.
pub fn reflect(fp: &[ClassFingerprint]) -> Vec<ClassFingerprint> {
    let mut out: Vec<ClassFingerprint> = fp
        .iter()
        .map(|c| {
            let top = c[0].iter().map(|(l, _)| l.clone()).max().unwrap_or_else(Rat::zero);
            c.iter()
                .map(|p| {
                    let mut v: Vec<(Rat, usize)> = p.iter().map(|(l, d)| (&top - l, *d)).collect();
                    v.sort();
                    v
                })
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Stable text form of a fingerprint.
pub fn fingerprint_string(fp: &[ClassFingerprint]) -> String {
    fp.iter()
        .map(|c| {
            c.iter()
                .map(|p| p.iter().map(|(l, d)| format!("{l}:{d}")).collect::<Vec<_>>().join(","))
                .collect::<Vec<_>>()
                .join(" | ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// JSON page report of one class.
#[derive(Clone, Debug, Serialize)]
pub struct PageReport {
    pub class: usize,
    pub pages: Vec<Page>,
    pub degenerate: bool,
}

/// Levels spread of the surviving classes, for reporting.
pub fn level_span(ss: &SpectralSequence) -> Rat {
    let e = &ss.infinity().entries;
    match (e.first(), e.last()) {
        (Some(a), Some(b)) => (&b.level - &a.level).abs(),
        _ => Rat::zero(),
    }
}
