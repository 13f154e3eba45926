//! Doubled intersection points, Bigelow generators and the gradings
//! `Q`, `P`, `T` and `R`.
//!
//! Each β leg is thickened to a thin ribbon loop (out along one side, round
//! the end puncture, back along the other). The ribbons of the two β legs
//! of a fork together form the figure-eight `bE_j`. An interior crossing of
//! a leg with a tine is met twice by the ribbon, giving the pair
//! `e_x, e'_x`; the end puncture is met once.

use std::collections::HashMap;

use serde::Serialize;

use crate::braid::{shift_sr, BraidWord};
use crate::curve::{dedupe, pair_halfturns, pairwise_winding, turning_half_revolutions, winding_at, Pt};
use crate::error::{Error, Result};
use crate::fork::{ForkDiagram, ForkGeometry, HANDLE_SIDE};
use crate::scalar::Scalar;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoint<S> {
    pub id: usize,
    /// Tine index `i` (1-based) of the host tine `α_i`.
    pub tine: usize,
    /// Figure-eight index `j` (1-based).
    pub eight: usize,
    /// x coordinate of the underlying crossing or puncture.
    pub base: S,
    /// `None` for punctures, `Some(false)` for `e_x`, `Some(true)` for `e'_x`.
    pub primed: Option<bool>,
    pub leg: usize,
    pub label: String,
    ribbon: usize,
    hit_index: usize,
    hit_x: S,
}

impl<S> ZPoint<S> {
    pub fn is_puncture(&self) -> bool {
        self.primed.is_none()
    }
}

/// A Bigelow generator: one 𝒵 point per tine, listed in tine order.
pub type Generator = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingRow {
    pub name: String,
    pub q: i64,
    pub p: i64,
    pub t: i64,
    pub r_tilde: i64,
    #[serde(serialize_with = "ser_rat")]
    pub r: Rat,
}

pub(crate) fn ser_rat<Ser: serde::Serializer>(r: &Rat, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&r.to_string())
}

pub struct Graded<S> {
    pub braid: BraidWord,
    pub n: usize,
    pub fork: ForkDiagram<S>,
    pub geo: ForkGeometry<S>,
    pub eps: S,
    pub z: Vec<ZPoint<S>>,
    ribbons: Vec<Vec<Pt<S>>>,
}

fn unit<S: Scalar>(a: &Pt<S>, b: &Pt<S>) -> (i64, i64) {
    let d = b.sub(a);
    let sg = |v: &S| if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
    (sg(&d.x), sg(&d.y))
}

/// Offset a rectilinear polyline by `eps` to its right (`side = 1`) or
/// left (`side = -1`), starting with a diagonal step off `poly[0]`.
fn offset<S: Scalar>(poly: &[Pt<S>], eps: &S, side: i64) -> (Vec<Pt<S>>, (i64, i64), (i64, i64)) {
    let ds: Vec<(i64, i64)> = poly.windows(2).map(|w| unit(&w[0], &w[1])).collect();
    let ns: Vec<(i64, i64)> = ds.iter().map(|d| (d.1 * side, -d.0 * side)).collect();
    let shift = |v: &Pt<S>, a: (i64, i64)| Pt::new(v.x.clone() + eps.clone() * S::int(a.0), v.y.clone() + eps.clone() * S::int(a.1));
    let mut out = vec![poly[0].clone(), shift(&poly[0], (ds[0].0 + ns[0].0, ds[0].1 + ns[0].1))];
    for i in 1..poly.len() - 1 {
        if ns[i - 1] == ns[i] {
            continue;
        }
        out.push(shift(&poly[i], (ns[i - 1].0 + ns[i].0, ns[i - 1].1 + ns[i].1)));
    }
    (out, ds[ds.len() - 1], ns[ns.len() - 1])
}

fn tine_of<S: Scalar>(x: &S) -> Option<usize> {
    let j = x.floor_i64();
    if x.is_integer() {
        return Some(((j + 1) / 2) as usize);
    }
    if j.rem_euclid(2) == 1 {
        Some(((j + 1) / 2) as usize)
    } else {
        None
    }
}

impl<S: Scalar> Graded<S> {
    pub fn new(b: &BraidWord) -> Result<Self> {
        let comps = crate::braid::plat_closure(b).components;
        if comps != 1 {
            return Err(Error::NotAKnot(comps));
        }
        let fork = ForkDiagram::<S>::build(b)?;
        let geo = fork.realize();
        let mut maxden = S::one();
        for legs in &geo.legs {
            for pl in legs {
                for p in pl {
                    maxden = std::cmp::max(maxden, std::cmp::max(p.x.den(), p.y.den()));
                }
            }
        }
        let eps = S::one() / (S::int(8) * maxden.clone() * maxden);
        let mut g = Graded { braid: b.clone(), n: b.n(), fork, geo, eps, z: Vec::new(), ribbons: Vec::new() };
        g.build_z()?;
        Ok(g)
    }

    fn build_z(&mut self) -> Result<()> {
        let eps = self.eps.clone();
        let mut zs: Vec<ZPoint<S>> = Vec::new();
        let blank = |tine, eight, base, primed, leg, ribbon, hit: (usize, S)| ZPoint {
            id: 0,
            tine,
            eight,
            base,
            primed,
            leg,
            label: String::new(),
            ribbon,
            hit_index: hit.0,
            hit_x: hit.1,
        };
        for j in 0..self.geo.legs.len() {
            for li in 0..2 {
                let pl = self.geo.legs[j][li].clone();
                let outside = if li == 0 { -1 } else { 1 };
                let (outp, dl, nl) = offset(&pl, &eps, outside);
                let (backp, _, _) = offset(&pl, &eps, -outside);
                let end = &pl[pl.len() - 1];
                let cap = |a: i64| Pt::new(end.x.clone() + eps.clone() * S::int(a * nl.0 + dl.0), end.y.clone() + eps.clone() * S::int(a * nl.1 + dl.1));
                let mut lp = outp;
                lp.push(cap(1));
                lp.push(cap(-1));
                lp.extend(backp[1..].iter().rev().cloned());
                let ribbon = self.ribbons.len();
                let crosses = |i: usize, target: &S, strict: bool| {
                    let (a, b) = (&lp[i], &lp[i + 1]);
                    if a.x != b.x || a.x != *target {
                        return false;
                    }
                    if strict {
                        a.y.is_positive() != b.y.is_positive()
                    } else {
                        std::cmp::min(&a.y, &b.y) <= &S::zero() && &S::zero() <= std::cmp::max(&a.y, &b.y)
                    }
                };
                let mut xs: Vec<S> = pl[1..pl.len() - 1].iter().filter(|v| v.y.is_zero()).map(|v| v.x.clone()).collect();
                xs.dedup();
                for x in xs {
                    let Some(i) = tine_of(&x) else { continue };
                    let hits: Vec<(usize, S)> = (0..lp.len() - 1)
                        .filter_map(|k| {
                            let ax = lp[k].x.clone();
                            let on = (ax.clone() - x.clone()).abs() == eps && crosses(k, &ax, true);
                            on.then_some((k, ax))
                        })
                        .collect();
                    if hits.len() != 2 {
                        return Err(Error::InternalInconsistency(format!("ribbon meets crossing {x} {} times", hits.len())));
                    }
                    let (e, ep) = if li == 1 { (0, 1) } else { (1, 0) };
                    zs.push(blank(i, j + 1, x.clone(), Some(false), li, ribbon, hits[e].clone()));
                    zs.push(blank(i, j + 1, x.clone(), Some(true), li, ribbon, hits[ep].clone()));
                }
                let p = end.x.floor_i64();
                let side_x = if p % 2 == 1 { end.x.clone() + eps.clone() } else { end.x.clone() - eps.clone() };
                let hit = (0..lp.len() - 1)
                    .find(|&k| crosses(k, &side_x, false))
                    .ok_or_else(|| Error::InternalInconsistency(format!("ribbon misses puncture {p}")))?;
                zs.push(blank(((p + 1) / 2) as usize, j + 1, end.x.clone(), None, li, ribbon, (hit, side_x)));
                self.ribbons.push(lp);
            }
        }
        zs.sort_by_key(|a| (a.hit_x.clone(), a.tine));
        let mut bases: Vec<S> = zs.iter().filter(|z| !z.is_puncture()).map(|z| z.base.clone()).collect();
        bases.sort();
        bases.dedup();
        for (id, z) in zs.iter_mut().enumerate() {
            z.id = id;
            z.label = match z.primed {
                None => format!("p{}", z.base.floor_i64()),
                Some(pr) => {
                    let r = bases.binary_search(&z.base).expect("known base") + 1;
                    format!("c{r}{}", if pr { "'" } else { "" })
                }
            };
        }
        self.z = zs;
        Ok(())
    }

    fn mpos(i: usize) -> S {
        S::ratio(4 * i as i64 - 1, 2)
    }

    fn bottom(&self) -> S {
        S::int(HANDLE_SIDE as i64) * self.geo.h.clone()
    }

    /// Handle of fork `j` traversed from the boundary to the centre.
    fn handle_path(&self, j: usize) -> Vec<Pt<S>> {
        self.geo.legs[j - 1][2].iter().rev().cloned().collect()
    }

    /// Handle followed by the ribbon up to the point.
    pub fn z_path(&self, z: &ZPoint<S>) -> Vec<Pt<S>> {
        let mut path = self.handle_path(z.eight);
        let lp = &self.ribbons[z.ribbon];
        path.extend(lp[1..=z.hit_index].iter().cloned());
        path.push(Pt::new(z.hit_x.clone(), S::zero()));
        path
    }

    /// Winding number about all punctures of the loop from `m_j` on the
    /// bottom edge, up the handle, along the ribbon to the point, along the
    /// tine to `m_i` and straight back down.
    pub fn q_star(&self, z: &ZPoint<S>) -> Result<i64> {
        let bottom = self.bottom();
        let mut lp = vec![Pt::new(Self::mpos(z.eight), bottom.clone())];
        lp.extend(self.z_path(z));
        lp.push(Pt::new(Self::mpos(z.tine), S::zero()));
        lp.push(Pt::new(Self::mpos(z.tine), bottom));
        let lp = dedupe(&lp);
        let mut w = 0;
        for p in 1..=2 * self.n as i64 {
            w += winding_at(&lp, &Pt::int(p, 0))?;
        }
        // the path into the left lobe passes the right lobe first
        Ok(w + if z.leg == 0 { 1 } else { 0 })
    }

    /// Tangent turning along the handle and ribbon, offset so the
    /// straight path scores zero.
    pub fn p_star(&self, z: &ZPoint<S>) -> Result<i64> {
        Ok(1 - turning_half_revolutions(&self.z_path(z))?)
    }

    /// Winding about the end puncture of the loop running from `e_x` to
    /// `e'_x` along the ribbon through the cap and back along the tine.
    pub fn prime_loop_winding(&self, e: &ZPoint<S>, ep: &ZPoint<S>) -> Result<i64> {
        let lp = &self.ribbons[e.ribbon];
        let (a, b) = (e.hit_index, ep.hit_index);
        let mut path = vec![Pt::new(e.hit_x.clone(), S::zero())];
        if a < b {
            path.extend(lp[a + 1..=b].iter().cloned());
        } else {
            path.extend(lp[b + 1..=a].iter().rev().cloned());
        }
        path.push(Pt::new(ep.hit_x.clone(), S::zero()));
        let end = self.geo.legs[e.eight - 1][e.leg].last().expect("leg").clone();
        winding_at(&dedupe(&path), &end)
    }

    /// Phases of the path used for `T`: bottom edge, handle, β leg to
    /// the point, tine to `m_i`, then down to the bottom edge.
    fn gamma_tilde(&self, z: &ZPoint<S>) -> Vec<Vec<Pt<S>>> {
        let bottom = self.bottom();
        let leg = &self.geo.legs[z.eight - 1][z.leg];
        let k = (1..leg.len()).find(|&t| leg[t].y.is_zero() && leg[t].x == z.base).expect("crossing on leg");
        let ph = self.handle_path(z.eight);
        // feet keep the order of the m_j, so a single straight run along the
        // bottom edge per point never collides
        let run = vec![Pt::new(Self::mpos(z.eight), bottom.clone()), ph[0].clone()];
        let mi = Self::mpos(z.tine);
        vec![
            run,
            dedupe(&ph),
            dedupe(&leg[..=k]),
            dedupe(&[Pt::new(z.base.clone(), S::zero()), Pt::new(mi.clone(), S::zero())]),
            vec![Pt::new(mi.clone(), S::zero()), Pt::new(mi, bottom)],
        ]
    }

    pub fn t_grade(&self, g: &Generator) -> Result<i64> {
        let paths: Vec<_> = g.iter().map(|&id| self.gamma_tilde(&self.z[id])).collect();
        pairwise_winding(&paths)
    }

    /// All Bigelow generators, each listed in tine order, sorted.
    pub fn generators(&self) -> Vec<Generator> {
        let n = self.n;
        let mut table = vec![vec![Vec::new(); n]; n];
        for z in &self.z {
            table[z.tine - 1][z.eight - 1].push(z.id);
        }
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut acc: Vec<Generator> = vec![Vec::new()];
            for (i, &j) in p.iter().enumerate() {
                let mut next = Vec::new();
                for a in &acc {
                    for &id in &table[i][j] {
                        let mut b = a.clone();
                        b.push(id);
                        next.push(b);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        });
        out.sort();
        out
    }

    /// Number of 𝒵 points on each (tine, figure-eight) pair.
    pub fn pair_counts(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for z in &self.z {
            m[z.tine - 1][z.eight - 1] += 1;
        }
        m
    }

    pub fn name(&self, g: &Generator) -> String {
        g.iter().map(|&id| self.z[id].label.as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn table(&self) -> Result<GradingTable> {
        let s_r = shift_sr(&self.braid)?;
        let mut q_star = Vec::new();
        let mut p_star = Vec::new();
        for z in &self.z {
            q_star.push(self.q_star(z)?);
            p_star.push(self.p_star(z)?);
        }
        let gens = self.generators();
        let paths: Vec<_> = self.z.iter().map(|z| self.gamma_tilde(z)).collect();
        let mut pair_t: HashMap<(usize, usize), i64> = HashMap::new();
        let mut rows = Vec::new();
        for g in &gens {
            let q: i64 = g.iter().map(|&i| q_star[i]).sum();
            let p: i64 = g.iter().map(|&i| p_star[i]).sum();
            let mut t = 0;
            for (k, &a) in g.iter().enumerate() {
                for &b in &g[k + 1..] {
                    let key = (a.min(b), a.max(b));
                    t += match pair_t.get(&key) {
                        Some(&v) => v,
                        None => {
                            let v = pair_halfturns(&paths[key.0], &paths[key.1])?;
                            pair_t.insert(key, v);
                            v
                        }
                    };
                }
            }
            let r_tilde = p - q + t;
            rows.push(GradingRow { name: self.name(g), q, p, t, r_tilde, r: Rat::from_integer(r_tilde.into()) + s_r.clone() });
        }
        Ok(GradingTable {
            z_labels: self.z.iter().map(|z| z.label.clone()).collect(),
            q_star,
            p_star,
            generators: gens,
            rows,
            s_r,
        })
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingTable {
    pub z_labels: Vec<String>,
    pub q_star: Vec<i64>,
    pub p_star: Vec<i64>,
    pub generators: Vec<Generator>,
    pub rows: Vec<GradingRow>,
    #[serde(serialize_with = "ser_rat")]
    pub s_r: Rat,
}

impl GradingTable {
    pub fn r_of(&self, g: &Generator) -> Option<&Rat> {
        self.generators.iter().position(|h| h == g).map(|i| &self.rows[i].r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use num_traits::Signed;

    fn graded(strands: usize, text: &str) -> Graded<Rat> {
        Graded::new(&parse_braid(text, strands).unwrap()).unwrap()
    }

    #[test]
    fn identity_has_two_generators() {
        let g = graded(2, "");
        assert_eq!(g.z.len(), 2);
        assert_eq!(g.generators().len(), 2);
        let t = g.table().unwrap();
        let (a, b) = (&t.rows[0].r, &t.rows[1].r);
        let d = (a - b).abs();
        assert!(d.is_integer() && d.numer() % 2 == 1.into());
    }

    #[test]
    fn trefoil_counts() {
        let g = graded(4, "s2^3");
        assert_eq!(g.z.len(), 12);
        assert_eq!(g.z.iter().filter(|z| z.is_puncture()).count(), 4);
        assert_eq!(g.generators().len(), 18);
    }

    #[test]
    fn link_rejected() {
        assert!(matches!(Graded::<Rat>::new(&parse_braid("", 4).unwrap()), Err(Error::NotAKnot(2))));
    }

    #[test]
    fn prime_loop_winds_once() {
        let g = graded(4, "s2^3 s1^-1 s3");
        for e in g.z.iter().filter(|z| z.primed == Some(false)) {
            let ep = g.z.iter().find(|w| w.primed == Some(true) && w.base == e.base).unwrap();
            assert_eq!(g.prime_loop_winding(e, ep).unwrap(), 1);
        }
    }

    #[test]
    fn trefoil_tables() {
        let g = graded(4, "s2^3");
        let t = g.table().unwrap();
        let names = ["x1", "s", "s'", "t", "t'", "x2", "x3", "u'", "u", "v'", "v", "x4"];
        let of = |w: &str| names.iter().position(|n| *n == w).unwrap();
        let q_star = [("x1", 0), ("v", 0), ("x4", 0), ("v'", 1), ("x3", 2), ("t", 2), ("u", 2), ("s", 2), ("t'", 3), ("u'", 3), ("s'", 3), ("x2", 4)];
        let p_star = [("x1", 0), ("x4", 0), ("s", 1), ("v", 1), ("s'", 2), ("t", 2), ("u", 2), ("v'", 2), ("t'", 3), ("x2", 3), ("x3", 3), ("u'", 3)];
        for (w, v) in q_star {
            assert_eq!(t.q_star[of(w)], v, "Q* {w}");
        }
        for (w, v) in p_star {
            assert_eq!(t.p_star[of(w)], v, "P* {w}");
        }
        let t_rows = [
            (0, vec![("x1", "x4"), ("x1", "u"), ("x1", "u'"), ("t", "x4"), ("t'", "x4")]),
            (1, vec![("x2", "v"), ("x2", "v'"), ("s", "x3"), ("s'", "x3"), ("s", "v"), ("s'", "v"), ("s", "v'"), ("s'", "v'")]),
            (2, vec![("t", "u"), ("t'", "u"), ("t", "u'"), ("t'", "u'")]),
            (3, vec![("x2", "x3")]),
        ];
        let mut seen = 0;
        for (tv, gens) in t_rows {
            for (a, b) in gens {
                let gen = vec![of(a), of(b)];
                let i = t.generators.iter().position(|h| *h == gen).unwrap();
                assert_eq!(t.rows[i].t, tv, "T {a}{b}");
                assert_eq!(t.rows[i].r_tilde, tv);
                assert_eq!(t.rows[i].r, Rat::ratio(2 * tv + 1, 2));
                seen += 1;
            }
        }
        assert_eq!(seen, t.rows.len());
    }
}
