//! Heegaard diagram of the branched double cover.
//!
//! The downstairs cell structure has the punctures and the tine crossings
//! of the β legs as vertices, tine subsegments and β subarcs as edges.
//! Each bounded face lifts to two regions, one per sheet; the unbounded
//! face lifts to a single tube region containing the basepoint `z`.
//! Sheets swap when a curve passes through a tine, which is where the
//! branch cuts sit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::curve::Pt;
use crate::error::{Error, Result};
use crate::grading::{Graded, GradingTable};
use crate::linalg::IntSolver;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// Puncture `μ_j`.
    P(i64),
    /// Interior crossing of a β leg with a tine.
    X(Rat),
}

impl Vertex {
    pub fn x(&self) -> Rat {
        match self {
            Vertex::P(j) => Rat::from_integer((*j).into()),
            Vertex::X(x) => x.clone(),
        }
    }
}

/// Point of `α̂ ∩ β̂`: a branch point, or one of the two lifts of a crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverPoint {
    pub vertex: Vertex,
    pub sheet: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Alpha,
    Beta,
}

#[derive(Clone, Debug)]
struct Edge {
    fam: Family,
    idx: usize,
    u: Vertex,
    v: Vertex,
    poly: Vec<Pt<Rat>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Region {
    /// Downstairs face, `None` for the basepoint tube.
    pub face: Option<usize>,
    pub sheet: u8,
    pub corners: usize,
    #[serde(serialize_with = "crate::grading::ser_rat")]
    pub euler: Rat,
}

/// A lifted curve as its cyclic sequence of edges, each with the regions
/// on its left and right and the intersection point it ends at.
#[derive(Clone, Debug)]
pub struct CurveRun {
    pub fam: Family,
    pub idx: usize,
    pub seq: Vec<(usize, usize, CoverPoint)>,
}

/// Integer multiplicities on the regions other than the basepoint tube.
pub type Domain = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpincClass {
    pub id: usize,
    pub members: Vec<usize>,
    pub representative: usize,
}

const DIRS: [(i64, i64); 4] = [(0, 1), (1, 0), (0, -1), (-1, 0)];

fn dir_of(a: &Pt<Rat>, b: &Pt<Rat>) -> Result<usize> {
    let d = b.sub(a);
    let s = |v: &Rat| if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
    let key = (s(&d.x), s(&d.y));
    if key.0 != 0 && key.1 != 0 {
        return Err(Error::DegenerateInput(format!("oblique edge at {a}")));
    }
    Ok(DIRS.iter().position(|&k| k == key).expect("nonzero step"))
}

fn tine_of(x: &Rat) -> Option<usize> {
    let j = x.floor().to_integer().to_i64().expect("small coordinate");
    if x.is_integer() {
        return Some(((j + 1) / 2) as usize);
    }
    (j.rem_euclid(2) == 1).then_some(((j + 1) / 2) as usize)
}

pub struct HeegaardDiagram {
    pub n: usize,
    pub regions: Vec<Region>,
    /// Index of the basepoint region (always the last one).
    pub z: usize,
    pub curves: Vec<CurveRun>,
    /// Corner counts of the downstairs faces and the index of the outer face.
    pub faces: Vec<usize>,
    pub outer: usize,
    quad: BTreeMap<CoverPoint, Vec<usize>>,
    row_vertex: Vec<(CoverPoint, i64)>,
    rows: Vec<Vec<i64>>,
    solver: IntSolver,
    /// Lifted generators, aligned with the Bigelow generators.
    pub generators: Vec<Vec<CoverPoint>>,
    pub names: Vec<String>,
}

impl HeegaardDiagram {
    /// Diagram with the default sheet convention (`e_x` on sheet 0).
    pub fn build(g: &Graded<Rat>) -> Result<Self> {
        Self::with_convention(g, &vec![false; g.n])
    }

    /// `swap[i]` exchanges the lifts assigned to `e_x` and `e'_x` on tine `i+1`.
    pub fn with_convention(g: &Graded<Rat>, swap: &[bool]) -> Result<Self> {
        let n = g.n;
        let mut edges: Vec<Edge> = Vec::new();
        let mut crossings: BTreeSet<Rat> = BTreeSet::new();
        for (j, legs) in g.geo.legs.iter().enumerate() {
            let mut path: Vec<Pt<Rat>> = legs[0].iter().rev().cloned().collect();
            path.extend(legs[1][1..].iter().cloned());
            let vkey = |p: &Pt<Rat>| {
                if p.x.is_integer() {
                    Vertex::P(p.x.to_integer().to_i64().expect("small"))
                } else {
                    Vertex::X(p.x.clone())
                }
            };
            let mut cur = vec![path[0].clone()];
            let mut last = vkey(&path[0]);
            for p in &path[1..] {
                cur.push(p.clone());
                if p.y.is_zero() && tine_of(&p.x).is_some() {
                    let key = vkey(p);
                    if let Vertex::X(x) = &key {
                        crossings.insert(x.clone());
                    }
                    edges.push(Edge { fam: Family::Beta, idx: j, u: last, v: key.clone(), poly: std::mem::take(&mut cur) });
                    last = key;
                    cur.push(p.clone());
                }
            }
        }
        for i in 1..=n {
            let mut vs = vec![Vertex::P(2 * i as i64 - 1)];
            vs.extend(crossings.iter().filter(|x| tine_of(x) == Some(i)).map(|x| Vertex::X(x.clone())));
            vs.push(Vertex::P(2 * i as i64));
            for w in vs.windows(2) {
                let poly = vec![Pt::new(w[0].x(), Rat::zero()), Pt::new(w[1].x(), Rat::zero())];
                edges.push(Edge { fam: Family::Alpha, idx: i - 1, u: w[0].clone(), v: w[1].clone(), poly });
            }
        }

        let mut out: BTreeMap<Vertex, [Option<(usize, bool)>; 4]> = BTreeMap::new();
        for (ei, e) in edges.iter().enumerate() {
            let m = e.poly.len();
            for (v, d, fw) in [(&e.u, dir_of(&e.poly[0], &e.poly[1])?, true), (&e.v, dir_of(&e.poly[m - 1], &e.poly[m - 2])?, false)] {
                let slot = &mut out.entry(v.clone()).or_default()[d];
                if slot.is_some() {
                    return Err(Error::DegenerateInput(format!("two edges leave {v:?} in one direction")));
                }
                *slot = Some((ei, fw));
            }
        }

        // faces on the left of each half edge
        let mut face_of: BTreeMap<(usize, bool), usize> = BTreeMap::new();
        let mut faces: Vec<Vec<(usize, bool)>> = Vec::new();
        for ei in 0..edges.len() {
            for fw in [true, false] {
                if face_of.contains_key(&(ei, fw)) {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut h = (ei, fw);
                while !face_of.contains_key(&h) {
                    face_of.insert(h, faces.len());
                    cyc.push(h);
                    let e = &edges[h.0];
                    let m = e.poly.len();
                    let (v, din) = if h.1 { (&e.v, dir_of(&e.poly[m - 1], &e.poly[m - 2])?) } else { (&e.u, dir_of(&e.poly[0], &e.poly[1])?) };
                    let slots = &out[v];
                    h = (1..=4).find_map(|s| slots[(din + s) % 4]).expect("vertex has an edge");
                }
                faces.push(cyc);
            }
        }
        let area = |cyc: &[(usize, bool)]| {
            let mut pts: Vec<Pt<Rat>> = Vec::new();
            for &(ei, fw) in cyc {
                let p = &edges[ei].poly;
                if fw {
                    pts.extend(p[..p.len() - 1].iter().cloned());
                } else {
                    pts.extend(p[1..].iter().rev().cloned());
                }
            }
            let m = pts.len();
            (0..m).map(|k| pts[k].x.clone() * pts[(k + 1) % m].y.clone() - pts[(k + 1) % m].x.clone() * pts[k].y.clone()).sum::<Rat>()
        };
        let outer: Vec<usize> = (0..faces.len()).filter(|&f| area(&faces[f]).is_negative()).collect();
        if outer.len() != 1 {
            return Err(Error::InternalInconsistency(format!("{} unbounded faces", outer.len())));
        }
        let outer = outer[0];

        let mut regions: Vec<Region> = Vec::new();
        let mut ridx: BTreeMap<(usize, u8), usize> = BTreeMap::new();
        for (f, cyc) in faces.iter().enumerate() {
            if f == outer {
                continue;
            }
            for s in 0..2u8 {
                ridx.insert((f, s), regions.len());
                regions.push(Region { face: Some(f), sheet: s, corners: cyc.len(), euler: Rat::one() - Rat::new(cyc.len().into(), 4.into()) });
            }
        }
        let z = regions.len();
        regions.push(Region { face: None, sheet: 0, corners: faces[outer].len(), euler: -Rat::new(faces[outer].len().into(), 2.into()) });
        let reg = |f: usize, s: u8| if f == outer { z } else { ridx[&(f, s)] };

        let mut quad: BTreeMap<CoverPoint, Vec<usize>> = BTreeMap::new();
        for (v, slots) in &out {
            let secs: Vec<(usize, bool)> = slots
                .iter()
                .enumerate()
                .filter_map(|(d, h)| h.map(|h| (face_of[&h], d == 0 || d == 1)))
                .collect();
            match v {
                Vertex::X(_) => {
                    for s in 0..2u8 {
                        let q = secs.iter().map(|&(f, up)| reg(f, if up { s } else { 1 - s })).collect();
                        quad.insert(CoverPoint { vertex: v.clone(), sheet: Some(s) }, q);
                    }
                }
                Vertex::P(_) => {
                    let q = secs.iter().flat_map(|&(f, _)| [reg(f, 0), reg(f, 1)]).collect();
                    quad.insert(CoverPoint { vertex: v.clone(), sheet: None }, q);
                }
            }
        }

        let point = |v: &Vertex, s: u8| CoverPoint { vertex: v.clone(), sheet: matches!(v, Vertex::X(_)).then_some(s) };
        let mut curves = Vec::new();
        for i in 0..n {
            let mut eis: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].fam == Family::Alpha && edges[e].idx == i).collect();
            eis.sort_by_key(|&e| edges[e].u.x());
            let mut seq = Vec::new();
            for &e in &eis {
                let (up, lo) = (face_of[&(e, true)], face_of[&(e, false)]);
                seq.push((reg(up, 0), reg(lo, 1), point(&edges[e].v, 0)));
            }
            for &e in eis.iter().rev() {
                let (up, lo) = (face_of[&(e, true)], face_of[&(e, false)]);
                seq.push((reg(lo, 0), reg(up, 1), point(&edges[e].u, 1)));
            }
            curves.push(CurveRun { fam: Family::Alpha, idx: i, seq });
        }
        for j in 0..n {
            let eis: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].fam == Family::Beta && edges[e].idx == j).collect();
            let crossings = eis.iter().filter(|&&e| matches!(edges[e].v, Vertex::X(_))).count() as u8;
            let mut seq = Vec::new();
            for rnd in 0..2u8 {
                // the return copy starts on the sheet opposite to where the first one ended
                let mut s = if rnd == 0 { 0 } else { 1 - crossings % 2 };
                let order: Vec<usize> = if rnd == 0 { eis.clone() } else { eis.iter().rev().cloned().collect() };
                for e in order {
                    let fw = rnd == 0;
                    let (fl, fr) = (face_of[&(e, true)], face_of[&(e, false)]);
                    let (l, r) = if fw { (reg(fl, s), reg(fr, s)) } else { (reg(fr, s), reg(fl, s)) };
                    let ed = &edges[e];
                    let (v, before) = if fw { (&ed.v, &ed.poly[ed.poly.len() - 2]) } else { (&ed.u, &ed.poly[1]) };
                    match v {
                        Vertex::X(_) => {
                            let sig = if before.y.is_positive() { s } else { 1 - s };
                            seq.push((l, r, point(v, sig)));
                            s = 1 - s;
                        }
                        Vertex::P(_) => seq.push((l, r, point(v, 0))),
                    }
                }
            }
            curves.push(CurveRun { fam: Family::Beta, idx: j, seq });
        }

        let nr = regions.len() - 1;
        let mut rows = Vec::new();
        let mut row_vertex = Vec::new();
        for c in &curves {
            let m = c.seq.len();
            for k in 0..m {
                let (lp, rp, v) = &c.seq[(k + m - 1) % m];
                let (l, r, _) = &c.seq[k];
                let mut row = vec![0i64; nr];
                for (rg, sg) in [(lp, 1), (rp, -1), (l, -1), (r, 1)] {
                    if *rg != z {
                        row[*rg] += sg;
                    }
                }
                rows.push(row);
                row_vertex.push((v.clone(), if c.fam == Family::Alpha { 1 } else { -1 }));
            }
        }
        let solver = IntSolver::new(&rows, nr);

        let mut on_a: BTreeMap<CoverPoint, usize> = BTreeMap::new();
        let mut on_b: BTreeMap<CoverPoint, usize> = BTreeMap::new();
        for c in &curves {
            for (_, _, p) in &c.seq {
                if c.fam == Family::Alpha { on_a.insert(p.clone(), c.idx) } else { on_b.insert(p.clone(), c.idx) };
            }
        }
        let gens = g.generators();
        let mut generators = Vec::new();
        for gen in &gens {
            let mut pts = Vec::new();
            for &id in gen {
                let zp = &g.z[id];
                let p = match zp.primed {
                    None => point(&Vertex::P(zp.base.to_integer().to_i64().expect("small")), 0),
                    Some(pr) => point(&Vertex::X(zp.base.clone()), (pr ^ swap[zp.tine - 1]) as u8),
                };
                if on_a.get(&p) != Some(&(zp.tine - 1)) || on_b.get(&p) != Some(&(zp.eight - 1)) {
                    return Err(Error::InternalInconsistency(format!("{} does not lift to α̂{} ∩ β̂{}", zp.label, zp.tine, zp.eight)));
                }
                pts.push(p);
            }
            generators.push(pts);
        }
        let h = HeegaardDiagram {
            n,
            regions,
            z,
            curves,
            faces: faces.iter().map(|c| c.len()).collect(),
            outer,
            quad,
            row_vertex,
            rows,
            solver,
            generators,
            names: gens.iter().map(|x| g.name(x)).collect(),
        };
        let count = h.count_intersection_tuples(&on_a, &on_b);
        if count != h.generators.len() {
            return Err(Error::InternalInconsistency(format!("{count} tuples upstairs, {} Bigelow generators", h.generators.len())));
        }
        Ok(h)
    }

    fn count_intersection_tuples(&self, on_a: &BTreeMap<CoverPoint, usize>, on_b: &BTreeMap<CoverPoint, usize>) -> usize {
        let mut by_a: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (p, &i) in on_a {
            if let Some(&j) = on_b.get(p) {
                by_a[i].push(j);
            }
        }
        fn go(k: usize, used: &mut Vec<bool>, by_a: &[Vec<usize>]) -> usize {
            if k == by_a.len() {
                return 1;
            }
            let mut t = 0;
            for &j in &by_a[k] {
                if !used[j] {
                    used[j] = true;
                    t += go(k + 1, used, by_a);
                    used[j] = false;
                }
            }
            t
        }
        go(0, &mut vec![false; self.n], &by_a)
    }

    pub fn num_regions(&self) -> usize {
        self.regions.len() - 1
    }

    pub fn is_nice(&self) -> bool {
        self.regions[..self.z].iter().all(|r| r.corners == 2 || r.corners == 4)
    }

    /// Number of non-basepoint regions by corner count.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for r in &self.regions[..self.z] {
            *m.entry(r.corners).or_insert(0) += 1;
        }
        m
    }

    pub fn census_string(&self) -> String {
        self.census().iter().map(|(k, v)| format!("{v}×{k}-gon")).collect::<Vec<_>>().join(", ")
    }

    pub fn require_nice(&self) -> Result<()> {
        if self.is_nice() {
            Ok(())
        } else {
            Err(Error::NotNice(self.census_string()))
        }
    }

    pub fn euler_total(&self) -> Rat {
        self.regions.iter().map(|r| r.euler.clone()).sum()
    }

    fn rhs(&self, x: &[CoverPoint], y: &[CoverPoint]) -> Vec<BigInt> {
        self.row_vertex
            .iter()
            .map(|(v, sg)| BigInt::from(sg * (y.contains(v) as i64 - x.contains(v) as i64)))
            .collect()
    }

    /// A domain from `x` to `y` avoiding `z`, if one exists.
    pub fn connecting_domain(&self, x: usize, y: usize) -> Result<Option<Domain>> {
        let b = self.rhs(&self.generators[x], &self.generators[y]);
        match self.solver.solve(&b) {
            None => Ok(None),
            Some(c) => Ok(Some(to_i64(&c)?)),
        }
    }

    /// Basis of the periodic domains avoiding `z`.
    pub fn periodic_domains(&self) -> Result<Vec<Domain>> {
        self.solver.kernel().iter().map(|v| to_i64(v)).collect()
    }

    /// Checks that `d` has boundary running from `x` to `y`.
    pub fn check_corners(&self, d: &Domain, x: usize, y: usize) -> Result<()> {
        let b = self.rhs(&self.generators[x], &self.generators[y]);
        for (row, bi) in self.rows.iter().zip(&b) {
            let s: i64 = row.iter().zip(d).map(|(a, c)| a * c).sum();
            if BigInt::from(s) != *bi {
                return Err(Error::ConventionViolation(format!("domain corners do not match {} → {}", self.names[x], self.names[y])));
            }
        }
        Ok(())
    }

    fn point_measure(&self, d: &Domain, p: &CoverPoint) -> Rat {
        let q = &self.quad[p];
        let s: i64 = q.iter().filter(|&&r| r != self.z).map(|&r| d[r]).sum();
        Rat::new(s.into(), (q.len() as i64).into())
    }

    /// `e(D) + μ_x(D) + μ_y(D)` for a domain with corners `x`, `y`.
    pub fn maslov_index(&self, d: &Domain, x: usize, y: usize) -> Rat {
        let mut m: Rat = d.iter().zip(&self.regions).map(|(c, r)| r.euler.clone() * Rat::from_integer((*c).into())).sum();
        for p in self.generators[x].iter().chain(&self.generators[y]) {
            m += self.point_measure(d, p);
        }
        m
    }

    /// Partition of the generators by existence of a connecting domain.
    pub fn spinc_partition(&self) -> Result<Vec<SpincClass>> {
        let none: Vec<CoverPoint> = Vec::new();
        let mut classes: Vec<SpincClass> = Vec::new();
        let mut by_residue: HashMap<Vec<BigInt>, usize> = HashMap::new();
        for (y, g) in self.generators.iter().enumerate() {
            let key = self.solver.residue(&self.rhs(&none, g));
            match by_residue.get(&key) {
                Some(&c) => classes[c].members.push(y),
                None => {
                    by_residue.insert(key, classes.len());
                    classes.push(SpincClass { id: classes.len(), members: vec![y], representative: y });
                }
            }
        }
        Ok(classes)
    }

    /// Non-negative domains `D0 + Σ t_k P_k` from `x` to `y`.
    fn positive_domains(&self, d0: &Domain, periodic: &[Domain]) -> Result<Vec<Domain>> {
        match periodic.len() {
            0 => Ok(if d0.iter().all(|&c| c >= 0) { vec![d0.clone()] } else { vec![] }),
            1 => {
                let p = &periodic[0];
                let (mut lo, mut hi) = (i64::MIN, i64::MAX);
                for (&d, &pk) in d0.iter().zip(p) {
                    if pk > 0 {
                        lo = lo.max(num_integer::Integer::div_ceil(&-d, &pk));
                    } else if pk < 0 {
                        hi = hi.min(num_integer::Integer::div_floor(&-d, &pk));
                    } else if d < 0 {
                        return Ok(vec![]);
                    }
                }
                if lo == i64::MIN || hi == i64::MAX {
                    return Err(Error::InternalInconsistency("periodic domain of one sign: diagram not weakly admissible".into()));
                }
                Ok((lo..=hi).map(|t| d0.iter().zip(p).map(|(a, b)| a + t * b).collect()).collect())
            }
            k => Err(Error::InternalInconsistency(format!("periodic domain rank {k}, expected at most 1"))),
        }
    }

    /// Domains from each class representative to each member.
    pub fn anchor_domains(&self, classes: &[SpincClass]) -> Result<BTreeMap<usize, Domain>> {
        let mut out = BTreeMap::new();
        for c in classes {
            for &y in &c.members {
                let d = self.connecting_domain(c.representative, y)?.ok_or_else(|| Error::InternalInconsistency("class member without domain".into()))?;
                out.insert(y, d);
            }
        }
        Ok(out)
    }

    /// Hat differential by counting positive index-one domains mod 2.
    pub fn differential(&self) -> Result<Differential> {
        self.require_nice()?;
        let classes = self.spinc_partition()?;
        let anchor = self.anchor_domains(&classes)?;
        let periodic = self.periodic_domains()?;
        let mut class_of = vec![0; self.generators.len()];
        for c in &classes {
            for &m in &c.members {
                class_of[m] = c.id;
            }
        }
        let mut d = vec![Vec::new(); self.generators.len()];
        let mut domains = BTreeMap::new();
        for x in 0..self.generators.len() {
            for y in 0..self.generators.len() {
                if x == y || class_of[x] != class_of[y] {
                    continue;
                }
                let moved = self.generators[x].iter().filter(|p| !self.generators[y].contains(p)).count();
                if moved > 2 {
                    continue;
                }
                let d0: Domain = anchor[&y].iter().zip(&anchor[&x]).map(|(a, b)| a - b).collect();
                let mut count = 0;
                for dom in self.positive_domains(&d0, &periodic)? {
                    if self.maslov_index(&dom, x, y) == Rat::one() {
                        count += 1;
                        domains.entry((x, y)).or_insert_with(Vec::new).push(dom);
                    }
                }
                if count % 2 == 1 {
                    d[x].push(y);
                }
            }
        }
        let out = Differential { d, classes, domains };
        out.check_square()?;
        Ok(out)
    }

    /// Relative Maslov grading per class, anchored at the class representative.
    pub fn relative_maslov(&self, classes: &[SpincClass]) -> Result<Vec<Rat>> {
        for p in self.periodic_domains()? {
            for c in classes {
                let r = c.representative;
                let m = self.maslov_index(&p, r, r);
                if !m.is_zero() {
                    return Err(Error::GradingIndeterminate(format!("periodic domain of index {m}")));
                }
            }
        }
        let anchor = self.anchor_domains(classes)?;
        let mut gr = vec![Rat::zero(); self.generators.len()];
        for c in classes {
            for &y in &c.members {
                gr[y] = -self.maslov_index(&anchor[&y], c.representative, y);
            }
        }
        Ok(gr)
    }

    /// `ρ = R − gr` per generator, up to one rational shift per class.
    pub fn relative_rho(&self, classes: &[SpincClass], table: &GradingTable) -> Result<Vec<Rat>> {
        let gr = self.relative_maslov(classes)?;
        Ok(table.rows.iter().zip(gr).map(|(row, g)| row.r.clone() - g).collect())
    }
}

/// `k = (R(x) − R(y) − μ)/2`, the intersection number with the
/// anti-diagonal.
pub fn nabla_count(rx: &Rat, ry: &Rat, mu: &Rat) -> Result<i64> {
    let k = (rx - ry - mu) / Rat::from_integer(2.into());
    if !k.is_integer() {
        return Err(Error::InternalInconsistency(format!("non-integral anti-diagonal count {k}")));
    }
    k.to_integer().to_i64().ok_or_else(|| Error::InternalInconsistency("anti-diagonal count overflow".into()))
}

fn to_i64(v: &[BigInt]) -> Result<Domain> {
    v.iter().map(|c| c.to_i64().ok_or_else(|| Error::InternalInconsistency("domain multiplicity overflow".into()))).collect()
}

#[derive(Clone, Debug)]
pub struct Differential {
    /// `d[x]` lists the `y` with coefficient one in `∂x`.
    pub d: Vec<Vec<usize>>,
    pub classes: Vec<SpincClass>,
    /// Every positive index-one domain found, including pairs that cancel.
    pub domains: BTreeMap<(usize, usize), Vec<Domain>>,
}

impl Differential {
    pub fn check_square(&self) -> Result<()> {
        for (x, ys) in self.d.iter().enumerate() {
            let mut acc: BTreeMap<usize, bool> = BTreeMap::new();
            for &y in ys {
                for &w in &self.d[y] {
                    let e = acc.entry(w).or_insert(false);
                    *e = !*e;
                }
            }
            if let Some((w, _)) = acc.iter().find(|(_, &v)| v) {
                return Err(Error::NotADifferential(format!("∂² of generator {x} hits {w}")));
            }
        }
        Ok(())
    }
}

/// Planar 3-gon domain for checking the triangle index formula.
///
/// Each piece is a polygon listed counter-clockwise with a coefficient;
/// edge `k` runs from vertex `k` to vertex `k+1` and is tagged with the
/// curve family it lies on (0 = α, 1 = β, 2 = γ). Corners between α and β
/// edges are the `x` components, between β and γ edges the `y` components.
#[derive(Clone, Debug)]
pub struct TrigonFixture {
    pub genus: usize,
    pub pieces: Vec<(Vec<Pt<Rat>>, Vec<u8>, i64)>,
    pub x: Vec<Pt<Rat>>,
    pub y: Vec<Pt<Rat>>,
}

impl TrigonFixture {
    pub fn new(genus: usize, pieces: Vec<(Vec<Pt<Rat>>, Vec<u8>, i64)>) -> Self {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for (poly, tags, _) in &pieces {
            let m = poly.len();
            for k in 0..m {
                let mut pair = [tags[(k + m - 1) % m], tags[k]];
                pair.sort();
                match pair {
                    [0, 1] => x.push(poly[k].clone()),
                    [1, 2] => y.push(poly[k].clone()),
                    _ => {}
                }
            }
        }
        TrigonFixture { genus, pieces, x, y }
    }
}

fn inside(poly: &[Pt<Rat>], p: &Pt<Rat>) -> bool {
    crate::curve::winding_at(poly, p).map(|w| w != 0).unwrap_or(false)
}

/// `e + μ_x + μ_y + a.c − g/2`.
pub fn trigon_index(f: &TrigonFixture) -> Result<Rat> {
    let quarter = |k: i64| Rat::new(k.into(), 4.into());
    let int = |k: i64| Rat::from_integer(k.into());
    let mut e = Rat::zero();
    let mut scale = Rat::one();
    for (poly, _, c) in &f.pieces {
        let m = poly.len();
        let (mut convex, mut reflex) = (0, 0);
        for k in 0..m {
            let t = crate::curve::cross(&poly[(k + m - 1) % m], &poly[k], &poly[(k + 1) % m]);
            if t.is_positive() {
                convex += 1;
            } else if t.is_negative() {
                reflex += 1;
            }
            for w in [&poly[(k + 1) % m].x - &poly[k].x, &poly[(k + 1) % m].y - &poly[k].y] {
                if !w.is_zero() && w.abs() < scale {
                    scale = w.abs();
                }
            }
        }
        e += (Rat::one() - quarter(convex) + quarter(reflex)) * int(*c);
    }
    let eps = scale / int(64);
    let small = |v: &Pt<Rat>| {
        let norm = std::cmp::max(v.x.abs(), v.y.abs());
        v.scale(&(eps.clone() / norm))
    };
    let signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

    // quadrants around a corner are cut out by its two incident edges
    let mut mu = Rat::zero();
    for p in f.x.iter().chain(&f.y) {
        let frame = f.pieces.iter().find_map(|(poly, _, _)| {
            let m = poly.len();
            let k = poly.iter().position(|q| q == p)?;
            Some((small(&poly[(k + 1) % m].sub(p)), small(&poly[(k + m - 1) % m].sub(p))))
        });
        let (d1, d2) = frame.unwrap_or_else(|| (Pt::new(eps.clone(), Rat::zero()), Pt::new(Rat::zero(), eps.clone())));
        for (s1, s2) in signs {
            let q = p.add(&d1.scale(&int(s1))).add(&d2.scale(&int(s2)));
            for (poly, _, c) in &f.pieces {
                if inside(poly, &q) {
                    mu += quarter(*c);
                }
            }
        }
    }

    let chain = |fam: u8| -> Vec<(Pt<Rat>, Pt<Rat>, i64)> {
        let mut out = Vec::new();
        for (poly, tags, c) in &f.pieces {
            let m = poly.len();
            for k in 0..m {
                if tags[k] == fam {
                    out.push((poly[k].clone(), poly[(k + 1) % m].clone(), *c));
                }
            }
        }
        out
    };
    let (a, cc) = (chain(0), chain(2));
    // translate c diagonally in the frame of the two curves, four ways
    let mut ac = Rat::zero();
    for (r0, s0, cg) in &cc {
        let tc = small(&s0.sub(r0)).scale(&quarter(1));
        for (p, q, ca) in &a {
            let mut ta = small(&q.sub(p)).scale(&quarter(1));
            if crate::curve::cross(&Pt::new(Rat::zero(), Rat::zero()), &ta, &tc).is_zero() {
                ta = Pt::new(-tc.y.clone(), tc.x.clone());
            }
            for (s1, s2) in signs {
                let delta = ta.scale(&int(s1)).add(&tc.scale(&int(s2)));
                let (r, s) = (r0.add(&delta), s0.add(&delta));
                let d1 = crate::curve::cross(p, q, &r);
                let d2 = crate::curve::cross(p, q, &s);
                let d3 = crate::curve::cross(&r, &s, p);
                let d4 = crate::curve::cross(&r, &s, q);
                if [&d1, &d2, &d3, &d4].iter().any(|d| d.is_zero()) {
                    return Err(Error::DegenerateInput("translated γ chain meets α at an endpoint".into()));
                }
                if d1.is_positive() != d2.is_positive() && d3.is_positive() != d4.is_positive() {
                    let u = q.sub(p);
                    let v = s.sub(&r);
                    let sign = if (&u.x * &v.y - &u.y * &v.x).is_positive() { 1 } else { -1 };
                    ac += quarter(sign * ca * cg);
                }
            }
        }
    }
    Ok(e + mu + ac - Rat::new((f.genus as i64).into(), 2.into()))
}

/// Serializable snapshot of the diagram and its differential.
#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub genus: usize,
    pub regions: Vec<Region>,
    pub curves: Vec<CurveWord>,
    pub generators: Vec<String>,
    pub differential: Vec<(usize, usize)>,
    pub classes: Vec<SpincClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveWord {
    pub family: Family,
    pub index: usize,
    /// Left and right regions of each edge in order.
    pub edges: Vec<(usize, usize)>,
}

impl HeegaardDiagram {
    pub fn report(&self, d: &Differential) -> CoverReport {
        CoverReport {
            genus: self.n,
            regions: self.regions.clone(),
            curves: self.curves.iter().map(|c| CurveWord { family: c.fam, index: c.idx + 1, edges: c.seq.iter().map(|(l, r, _)| (*l, *r)).collect() }).collect(),
            generators: self.names.clone(),
            differential: d.d.iter().enumerate().flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y))).collect(),
            classes: d.classes.clone(),
        }
    }
}
