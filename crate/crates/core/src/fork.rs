//! Fork diagrams: the images of the standard tines and handles under a
//! braid, kept in minimal position with respect to the real axis.
//!
//! Each fork is a tripod. Its centre lies off the axis (on side `side`),
//! legs 0 and 1 end at punctures and leg 2 (the handle) ends on the bottom
//! edge of the disk. A leg is stored as the ordered list of x coordinates
//! where it crosses the axis between punctures; the planar curve is
//! reconstructed from this data by [`ForkDiagram::realize`].

use crate::braid::BraidWord;
use crate::curve::Pt;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::twist::TwistMap;

/// Handles leave the disk through the bottom edge.
pub const HANDLE_SIDE: i32 = -1;

const DEFAULT_ITER_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LegEnd {
    Puncture(usize),
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leg<S> {
    pub xs: Vec<S>,
    pub end: LegEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fork<S> {
    pub side: i32,
    pub legs: [Leg<S>; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkDiagram<S> {
    pub n: usize,
    pub forks: Vec<Fork<S>>,
}

/// Planar realization: per fork, the centre and one polyline per leg
/// starting at the centre.
#[derive(Clone, Debug)]
pub struct ForkGeometry<S> {
    pub h: S,
    pub centers: Vec<Pt<S>>,
    pub legs: Vec<[Vec<Pt<S>>; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
enum Node<S> {
    X(S),
    P(usize),
    D,
}

impl<S: Scalar> Node<S> {
    fn x(&self) -> Option<S> {
        match self {
            Node::X(x) => Some(x.clone()),
            Node::P(p) => Some(S::int(*p as i64)),
            Node::D => None,
        }
    }
}

fn nodes<S: Scalar>(leg: &Leg<S>) -> Vec<Node<S>> {
    let mut v: Vec<Node<S>> = leg.xs.iter().cloned().map(Node::X).collect();
    v.push(match leg.end {
        LegEnd::Puncture(p) => Node::P(p),
        LegEnd::Boundary => Node::D,
    });
    v
}

struct Comp<S> {
    side: i32,
    touch: Vec<S>,
    level: usize,
    h: S,
}

/// Iteration cap for tightening, overridable through `PLATFLOER_ITER_CAP`.
pub fn iter_cap() -> usize {
    std::env::var("PLATFLOER_ITER_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_ITER_CAP)
}

fn interval<S: Scalar>(x: &S) -> Option<i64> {
    if x.is_integer() {
        None
    } else {
        Some(x.floor_i64())
    }
}

#[derive(Clone)]
enum First<S> {
    X(S),
    P(S),
}

impl<S: Scalar> First<S> {
    fn x(&self) -> &S {
        match self {
            First::X(x) | First::P(x) => x,
        }
    }
    fn is_x(&self) -> bool {
        matches!(self, First::X(_))
    }
}

impl<S: Scalar> ForkDiagram<S> {
    pub fn standard(n: usize) -> Self {
        let forks = (1..=n)
            .map(|k| Fork {
                side: HANDLE_SIDE,
                legs: [
                    Leg { xs: Vec::new(), end: LegEnd::Puncture(2 * k - 1) },
                    Leg { xs: Vec::new(), end: LegEnd::Puncture(2 * k) },
                    Leg { xs: Vec::new(), end: LegEnd::Boundary },
                ],
            })
            .collect();
        ForkDiagram { n, forks }
    }

    /// Push the standard fork through every letter of `b`.
    pub fn build(b: &BraidWord) -> Result<Self> {
        let mut d = Self::standard(b.n());
        for &(k, s) in &b.letters {
            d.apply(k, s)?;
        }
        Ok(d)
    }

    pub fn height(&self) -> S {
        S::int(self.n as i64 + 1)
    }

    pub fn realize(&self) -> ForkGeometry<S> {
        let h_edge = S::int(HANDLE_SIDE as i64) * self.height();
        let mut comps: Vec<Comp<S>> = Vec::new();
        let mut star_of = Vec::new();
        // arc_of[f][l][i]: component of the i-th arc along leg l of fork f
        let mut arc_of: Vec<[Vec<usize>; 3]> = Vec::new();
        for fk in &self.forks {
            let mut branches = Vec::new();
            let mut arcs: [Vec<usize>; 3] = Default::default();
            for (li, leg) in fk.legs.iter().enumerate() {
                let nd = nodes(leg);
                branches.push(nd[0].x());
                let mut side = -fk.side;
                for w in nd.windows(2) {
                    let touch: Vec<S> = [w[0].x(), w[1].x()].into_iter().flatten().collect();
                    arcs[li].push(comps.len());
                    comps.push(Comp { side, touch, level: 0, h: S::zero() });
                    side = -side;
                }
            }
            star_of.push(comps.len());
            comps.push(Comp { side: fk.side, touch: branches.into_iter().flatten().collect(), level: 0, h: S::zero() });
            arc_of.push(arcs);
        }
        for c in comps.iter_mut() {
            c.touch.sort();
        }
        for s in [1, -1] {
            let mut ids: Vec<usize> = (0..comps.len()).filter(|&i| comps[i].side == s).collect();
            let width = |c: &Comp<S>| c.touch[c.touch.len() - 1].clone() - c.touch[0].clone();
            ids.sort_by(|&a, &b| width(&comps[a]).cmp(&width(&comps[b])));
            let mut done: Vec<usize> = Vec::new();
            for &i in &ids {
                let (lo, hi) = (comps[i].touch[0].clone(), comps[i].touch[comps[i].touch.len() - 1].clone());
                let mut lv = 0;
                for &d in &done {
                    let dc = &comps[d];
                    if lo < dc.touch[0] && dc.touch[dc.touch.len() - 1] < hi {
                        lv = lv.max(dc.level);
                    }
                }
                comps[i].level = lv + 1;
                done.push(i);
            }
            let maxlv = ids.iter().map(|&i| comps[i].level).max().unwrap_or(1);
            let u = S::ratio(1, maxlv as i64 + 1);
            for &i in &ids {
                comps[i].h = S::int(s as i64) * S::int(comps[i].level as i64) * u.clone();
            }
        }
        let mut centers = Vec::new();
        let mut legs_out = Vec::new();
        for (fi, fk) in self.forks.iter().enumerate() {
            let star = &comps[star_of[fi]];
            let h = star.h.clone();
            let t = &star.touch;
            let cx = if t.len() == 3 { t[1].clone() } else { (t[0].clone() + t[1].clone()) / S::int(2) };
            let center = Pt::new(cx.clone(), h.clone());
            let mut legs: [Vec<Pt<S>>; 3] = Default::default();
            for (li, leg) in fk.legs.iter().enumerate() {
                let nd = nodes(leg);
                let mut poly = vec![center.clone()];
                match nd[0].x() {
                    None => poly.push(Pt::new(cx.clone(), h_edge.clone())),
                    Some(x0) => {
                        if x0 != cx {
                            poly.push(Pt::new(x0.clone(), h.clone()));
                        }
                        poly.push(Pt::new(x0, S::zero()));
                    }
                }
                for (ai, w) in nd.windows(2).enumerate() {
                    let arc = &comps[arc_of[fi][li][ai]];
                    let xa = w[0].x().expect("interior node on the axis");
                    match w[1].x() {
                        None => poly.push(Pt::new(xa, h_edge.clone())),
                        Some(xb) => {
                            poly.push(Pt::new(xa, arc.h.clone()));
                            poly.push(Pt::new(xb.clone(), arc.h.clone()));
                            poly.push(Pt::new(xb, S::zero()));
                        }
                    }
                }
                legs[li] = poly;
            }
            centers.push(center);
            legs_out.push(legs);
        }
        ForkGeometry { h: self.height(), centers, legs: legs_out }
    }

    /// Apply the half twist `σ_k^{sign}` and return to minimal position.
    pub fn apply(&mut self, k: usize, sign: i32) -> Result<()> {
        if k == 0 || k >= 2 * self.n {
            return Err(Error::Parse(format!("generator index {k} out of range")));
        }
        let geo = self.realize();
        let m = TwistMap::<S>::new(k, sign);
        let h_edge = S::int(HANDLE_SIDE as i64) * self.height();
        let mut forks = Vec::new();
        for (center, legs) in geo.centers.iter().zip(&geo.legs) {
            let mut center = center.clone();
            let mut legs = legs.clone();
            let mut mc = m.map_point(&center);
            if mc.y.is_zero() {
                let (c2, l2) = perturb_center(&center, &legs, &m)?;
                center = c2;
                legs = l2;
                mc = m.map_point(&center);
            }
            let _ = center;
            let side = if mc.y.is_positive() { 1 } else { -1 };
            let mut new_legs = Vec::new();
            for pl in &legs {
                let img = m.map_polyline(pl);
                let (xs, end) = readback(&img, &h_edge)?;
                new_legs.push(Leg { xs, end });
            }
            let legs: [Leg<S>; 3] = new_legs.try_into().expect("three legs");
            forks.push(Fork { side, legs });
        }
        self.forks = forks;
        self.tighten()?;
        self.normalize();
        Ok(())
    }

    fn axis_points(&self) -> Vec<S> {
        let mut pts: Vec<S> = self.forks.iter().flat_map(|f| f.legs.iter().flat_map(|l| l.xs.iter().cloned())).collect();
        pts.sort();
        pts
    }

    fn between_empty(a: &S, b: &S, pts: &[S]) -> bool {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        // pts is sorted
        let i = pts.partition_point(|p| p <= lo);
        i == pts.len() || pts[i] >= *hi
    }

    fn near_puncture(c: &S, p: &S) -> bool {
        let pi = p.floor_i64();
        matches!(interval(c), Some(j) if j == pi - 1 || j == pi)
    }

    fn adjacent(a: &First<S>, b: &First<S>, pts: &[S]) -> bool {
        match (a, b) {
            (First::P(_), First::P(_)) => false,
            (First::P(p), First::X(c)) | (First::X(c), First::P(p)) => {
                Self::near_puncture(c, p) && Self::between_empty(c, p, pts)
            }
            (First::X(x), First::X(y)) => interval(x) == interval(y) && Self::between_empty(x, y, pts),
        }
    }

    /// Remove bigons with the axis until none remain.
    pub fn tighten(&mut self) -> Result<()> {
        let cap = iter_cap();
        let mut guard = 0;
        while self.tighten_step() {
            guard += 1;
            if guard >= cap {
                return Err(Error::DegenerateInput(format!("tightening exceeded {cap} iterations")));
            }
        }
        Ok(())
    }

    fn tighten_step(&mut self) -> bool {
        let pts = self.axis_points();
        for fk in self.forks.iter_mut() {
            for leg in fk.legs.iter_mut() {
                let xs = &mut leg.xs;
                // bigon between consecutive crossings of one leg
                for i in 0..xs.len().saturating_sub(1) {
                    if interval(&xs[i]) == interval(&xs[i + 1]) && Self::between_empty(&xs[i], &xs[i + 1], &pts) {
                        xs.drain(i..i + 2);
                        return true;
                    }
                }
                // half bigon next to the end puncture
                if let (Some(c), LegEnd::Puncture(p)) = (xs.last(), &leg.end) {
                    let p = S::int(*p as i64);
                    if Self::near_puncture(c, &p) && Self::between_empty(c, &p, &pts) {
                        xs.pop();
                        return true;
                    }
                }
            }
            let firsts: Vec<(usize, First<S>)> = fk
                .legs
                .iter()
                .enumerate()
                .filter_map(|(li, leg)| match (leg.xs.first(), &leg.end) {
                    (Some(x), _) => Some((li, First::X(x.clone()))),
                    (None, LegEnd::Puncture(p)) => Some((li, First::P(S::int(*p as i64)))),
                    (None, LegEnd::Boundary) => None,
                })
                .collect();
            // all three legs leave through one wedge: the centre swaps sides
            if firsts.len() == 3 && firsts.iter().any(|(_, f)| f.is_x()) {
                let mut fs = firsts.clone();
                fs.sort_by(|a, b| a.1.x().cmp(b.1.x()));
                let ok = fs[1].1.is_x() && fs.windows(2).all(|w| Self::adjacent(&w[0].1, &w[1].1, &pts));
                if ok {
                    for (l, f) in &firsts {
                        if f.is_x() {
                            fk.legs[*l].xs.remove(0);
                        }
                    }
                    fk.side = -fk.side;
                    return true;
                }
            }
            // two legs leave through one wedge: pull the centre across
            for a in 0..firsts.len() {
                for b in a + 1..firsts.len() {
                    let (la, fa) = &firsts[a];
                    let (lb, fb) = &firsts[b];
                    match (fa, fb) {
                        (First::P(_), First::P(_)) => continue,
                        (First::P(p), First::X(c)) | (First::X(c), First::P(p)) => {
                            if *la == 2 || *lb == 2 || !Self::near_puncture(c, p) {
                                continue;
                            }
                        }
                        (First::X(x), First::X(y)) => {
                            if interval(x) != interval(y) {
                                continue;
                            }
                        }
                    }
                    if !Self::between_empty(fa.x(), fb.x(), &pts) {
                        continue;
                    }
                    let third = 3 - la - lb;
                    let mid = (fa.x().clone() + fb.x().clone()) / S::int(2);
                    for (l, f) in [(la, fa), (lb, fb)] {
                        if f.is_x() {
                            fk.legs[*l].xs.remove(0);
                        }
                    }
                    fk.legs[third].xs.insert(0, mid);
                    fk.side = -fk.side;
                    return true;
                }
            }
        }
        false
    }

    /// Respace the crossings inside each unit interval to `j + r/(m+1)`.
    pub fn normalize(&mut self) {
        let pts = self.axis_points();
        let mut remap: Vec<(S, S)> = Vec::new();
        let mut i = 0;
        while i < pts.len() {
            let j = pts[i].floor_i64();
            let mut e = i;
            while e < pts.len() && pts[e].floor_i64() == j {
                e += 1;
            }
            let m = (e - i) as i64;
            for (r, p) in pts[i..e].iter().enumerate() {
                remap.push((p.clone(), S::int(j) + S::ratio(r as i64 + 1, m + 1)));
            }
            i = e;
        }
        for fk in self.forks.iter_mut() {
            for leg in fk.legs.iter_mut() {
                for x in leg.xs.iter_mut() {
                    let k = remap.binary_search_by(|(p, _)| p.cmp(x)).expect("known axis point");
                    *x = remap[k].1.clone();
                }
            }
        }
    }

    /// Crossings of the two β legs with tine interiors.
    pub fn tine_crossings(&self) -> usize {
        self.forks
            .iter()
            .flat_map(|f| f.legs[..2].iter())
            .flat_map(|l| l.xs.iter())
            .filter(|x| x.floor_i64().rem_euclid(2) == 1)
            .count()
    }

    /// Components of the union of the tines and the β arcs.
    pub fn component_count(&self) -> usize {
        let n2 = 2 * self.n;
        let mut parent: Vec<usize> = (0..=n2).collect();
        fn find(p: &mut [usize], a: usize) -> usize {
            let mut a = a;
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        };
        for k in 1..=self.n {
            union(2 * k - 1, 2 * k);
        }
        for fk in &self.forks {
            if let (LegEnd::Puncture(a), LegEnd::Puncture(b)) = (&fk.legs[0].end, &fk.legs[1].end) {
                union(*a, *b);
            }
        }
        let mut roots: Vec<usize> = (1..=n2).map(|j| find(&mut parent, j)).collect();
        roots.sort();
        roots.dedup();
        roots.len()
    }
}

/// Read an image polyline back into axis crossings and an end tag.
fn readback<S: Scalar>(poly: &[Pt<S>], h_edge: &S) -> Result<(Vec<S>, LegEnd)> {
    let mut xs = Vec::new();
    let mut side = 0;
    let mut pending: Option<S> = None;
    for (i, p) in poly.iter().enumerate() {
        if i == poly.len() - 1 && p.y.is_zero() {
            break;
        }
        if p.y.is_zero() {
            if pending.is_none() {
                pending = Some(p.x.clone());
            }
            continue;
        }
        let sg = if p.y.is_positive() { 1 } else { -1 };
        if side != 0 && sg != side {
            match pending.take() {
                Some(x) => xs.push(x),
                None => {
                    let a = &poly[i - 1];
                    xs.push(a.x.clone() + (p.x.clone() - a.x.clone()) * a.y.clone() / (a.y.clone() - p.y.clone()));
                }
            }
        }
        pending = None;
        side = sg;
    }
    let last = &poly[poly.len() - 1];
    if last.y == *h_edge {
        return Ok((xs, LegEnd::Boundary));
    }
    if last.y.is_zero() && last.x.is_integer() {
        return Ok((xs, LegEnd::Puncture(last.x.floor_i64() as usize)));
    }
    Err(Error::InternalInconsistency(format!("leg ends at {last}")))
}

/// Move the centre a little along one leg so neither it nor its image lies
/// on the axis.
fn perturb_center<S: Scalar>(center: &Pt<S>, legs: &[Vec<Pt<S>>; 3], m: &TwistMap<S>) -> Result<(Pt<S>, [Vec<Pt<S>>; 3])> {
    for d in 3..64 {
        for li in 0..3 {
            let p1 = &legs[li][1];
            let c2 = center.add(&p1.sub(center).scale(&S::ratio(1, d)));
            if c2.y.is_zero() || m.map_point(&c2).y.is_zero() {
                continue;
            }
            let mut out: [Vec<Pt<S>>; 3] = Default::default();
            for (l, pl) in legs.iter().enumerate() {
                let mut v = vec![c2.clone()];
                if l == li {
                    v.extend(pl[1..].iter().cloned());
                } else {
                    v.extend(pl.iter().cloned());
                }
                out[l] = v;
            }
            return Ok((c2, out));
        }
    }
    Err(Error::DegenerateInput("no admissible centre perturbation".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{parse_braid, plat_closure};
    use crate::Rat;

    fn build(strands: usize, text: &str) -> ForkDiagram<Rat> {
        ForkDiagram::build(&parse_braid(text, strands).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_standard() {
        let d = build(2, "");
        assert_eq!(d, ForkDiagram::standard(1));
        let g = d.realize();
        assert_eq!(g.centers[0], Pt::new(Rat::ratio(3, 2), Rat::ratio(-1, 2)));
    }

    #[test]
    fn trefoil_crossings() {
        let d = build(4, "s2^3");
        assert_eq!(d.tine_crossings(), 4);
    }

    #[test]
    fn inverse_letters_cancel() {
        assert_eq!(build(4, "s2 s2^-1"), ForkDiagram::standard(2));
        assert_eq!(build(4, "s1 s3 s2^-1 s2 s3^-1 s1^-1"), ForkDiagram::standard(2));
    }

    #[test]
    fn braid_relation() {
        assert_eq!(build(4, "s1 s2 s1"), build(4, "s2 s1 s2"));
        assert_eq!(build(4, "s2^-1 s3^-1 s2^-1"), build(4, "s3^-1 s2^-1 s3^-1"));
        assert_eq!(build(4, "s1 s3^-1"), build(4, "s3^-1 s1"));
    }

    #[test]
    fn components_match_closure() {
        for (s, t) in [(4, "s2^3"), (4, ""), (4, "s2^2"), (6, "s2 s4^-1 s3"), (2, "s1^5")] {
            let b = parse_braid(t, s).unwrap();
            let d = ForkDiagram::<Rat>::build(&b).unwrap();
            assert_eq!(d.component_count(), plat_closure(&b).components, "{t}");
        }
    }

    #[test]
    fn small_and_big_rationals_agree() {
        let b = parse_braid("s2^3 s1^-1 s3", 4).unwrap();
        let a = ForkDiagram::<Rat>::build(&b).unwrap();
        let c = ForkDiagram::<num_rational::Ratio<i128>>::build(&b).unwrap();
        let fa: Vec<String> = a.forks.iter().flat_map(|f| f.legs.iter().flat_map(|l| l.xs.iter().map(|x| x.to_string()))).collect();
        let fc: Vec<String> = c.forks.iter().flat_map(|f| f.legs.iter().flat_map(|l| l.xs.iter().map(|x| x.to_string()))).collect();
        assert_eq!(fa, fc);
    }
}
