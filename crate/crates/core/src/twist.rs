//! Piecewise-linear half twist about the segment joining two adjacent
//! punctures.
//!
//! The support is a stack of concentric L-infinity squares around
//! `(k + 1/2, 0)`. The innermost square is rotated rigidly by a half turn;
//! each annulus between consecutive squares is triangulated and its inner
//! ring is rotated one sector (an eighth of a turn) further than its outer
//! ring, so the map is the identity on the outermost square.

use crate::curve::{cross, dedupe, seg_params, Pt};
use crate::scalar::Scalar;

const RADII: [(i64, i64); 5] = [(3, 4), (7, 8), (1, 1), (9, 8), (5, 4)];

fn ring_vertex<S: Scalar>(c: &Pt<S>, rho: &S, i: i64) -> Pt<S> {
    let (dx, dy) = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)][i.rem_euclid(8) as usize];
    Pt::new(c.x.clone() + rho.clone() * S::int(dx), c.y.clone() + rho.clone() * S::int(dy))
}

type Tri<S> = [Pt<S>; 3];

pub struct TwistMap<S> {
    c: Pt<S>,
    radii: Vec<S>,
    tris: Vec<(Tri<S>, Tri<S>)>,
    edges: Vec<(Pt<S>, Pt<S>)>,
}

impl<S: Scalar> TwistMap<S> {
    /// Counter-clockwise half twist exchanging punctures `k` and `k+1` when
    /// `sign > 0`, its inverse otherwise.
    pub fn new(k: usize, sign: i32) -> Self {
        let c = Pt::new(S::ratio(2 * k as i64 + 1, 2), S::zero());
        let radii: Vec<S> = RADII.iter().map(|&(a, b)| S::ratio(a, b)).collect();
        let last = radii.len() as i64 - 1;
        let shift: Vec<i64> = (0..=last).map(|l| sign as i64 * (last - l)).collect();
        let mut tris = Vec::new();
        for l in 0..last as usize {
            let (rin, rout) = (&radii[l], &radii[l + 1]);
            for i in 0..8 {
                let i0 = ring_vertex(&c, rin, i);
                let i1 = ring_vertex(&c, rin, i + 1);
                let o0 = ring_vertex(&c, rout, i);
                let o1 = ring_vertex(&c, rout, i + 1);
                let j0 = ring_vertex(&c, rin, i + shift[l]);
                let j1 = ring_vertex(&c, rin, i + 1 + shift[l]);
                let p0 = ring_vertex(&c, rout, i + shift[l + 1]);
                let p1 = ring_vertex(&c, rout, i + 1 + shift[l + 1]);
                if sign > 0 {
                    tris.push(([i0.clone(), o0.clone(), o1.clone()], [j0.clone(), p0.clone(), p1.clone()]));
                    tris.push(([i0, o1, i1], [j0, p1, j1]));
                } else {
                    tris.push(([i0.clone(), o0.clone(), i1.clone()], [j0.clone(), p0.clone(), j1.clone()]));
                    tris.push(([i1, o0, o1], [j1, p0, p1]));
                }
            }
        }
        let mut edges: Vec<(Pt<S>, Pt<S>)> = Vec::new();
        for (a, _) in &tris {
            for (p, q) in [(&a[0], &a[1]), (&a[1], &a[2]), (&a[2], &a[0])] {
                let e = if p < q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        TwistMap { c, radii, tris, edges }
    }

    fn rho(&self, p: &Pt<S>) -> S {
        std::cmp::max((p.x.clone() - self.c.x.clone()).abs(), (p.y.clone() - self.c.y.clone()).abs())
    }

    pub fn map_point(&self, p: &Pt<S>) -> Pt<S> {
        let r = self.rho(p);
        if r >= *self.radii.last().unwrap() {
            return p.clone();
        }
        if r <= self.radii[0] {
            let two = S::int(2);
            return Pt::new(two.clone() * self.c.x.clone() - p.x.clone(), two * self.c.y.clone() - p.y.clone());
        }
        let ring = (0..self.radii.len() - 1).rev().find(|&l| self.radii[l] <= r).expect("inside the support");
        let oct = octant(&(p.x.clone() - self.c.x.clone()), &(p.y.clone() - self.c.y.clone()));
        // two triangles per sector, sixteen per ring
        let near = [oct + 7, oct, oct + 1].map(|i| ring * 16 + 2 * (i % 8));
        for (a, b) in near.iter().flat_map(|&i| &self.tris[i..i + 2]) {
            if let Some(l) = bary(a, p) {
                return Pt::new(
                    l[0].clone() * b[0].x.clone() + l[1].clone() * b[1].x.clone() + l[2].clone() * b[2].x.clone(),
                    l[0].clone() * b[0].y.clone() + l[1].clone() * b[1].y.clone() + l[2].clone() * b[2].y.clone(),
                );
            }
        }
        unreachable!("triangulation covers the annulus")
    }

    /// Image of a polyline, subdivided at every triangulation edge so the
    /// image is again a polyline. Redundant collinear vertices are dropped.
    pub fn map_polyline(&self, poly: &[Pt<S>]) -> Vec<Pt<S>> {
        let outer = self.radii.last().unwrap().clone();
        let (lo_x, hi_x) = (self.c.x.clone() - outer.clone(), self.c.x.clone() + outer.clone());
        let (lo_y, hi_y) = (self.c.y.clone() - outer.clone(), self.c.y.clone() + outer);
        let mut out = vec![self.map_point(&poly[0])];
        for w in poly.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let (bx, by) = (bbox(&p.x, &q.x), bbox(&p.y, &q.y));
            if *bx.1 <= lo_x || *bx.0 >= hi_x || *by.1 <= lo_y || *by.0 >= hi_y {
                out.push(q.clone());
                continue;
            }
            let mut ts: Vec<S> = Vec::new();
            for (a, b) in &self.edges {
                let (ex, ey) = (bbox(&a.x, &b.x), bbox(&a.y, &b.y));
                if ex.1 < bx.0 || ex.0 > bx.1 || ey.1 < by.0 || ey.0 > by.1 {
                    continue;
                }
                for t in seg_params(p, q, a, b) {
                    if t.is_positive() && t < S::one() {
                        ts.push(t);
                    }
                }
            }
            ts.sort();
            ts.dedup();
            for t in ts {
                out.push(self.map_point(&p.lerp(q, &t)));
            }
            out.push(self.map_point(q));
        }
        let res = dedupe(&out);
        let mut kept = vec![res[0].clone()];
        for i in 1..res.len() - 1 {
            let (a, b, c) = (kept.last().unwrap(), &res[i], &res[i + 1]);
            let forward = (b.x.clone() - a.x.clone()) * (c.x.clone() - b.x.clone())
                + (b.y.clone() - a.y.clone()) * (c.y.clone() - b.y.clone());
            if cross(a, b, c).is_zero() && forward.is_positive() {
                continue;
            }
            kept.push(b.clone());
        }
        kept.push(res[res.len() - 1].clone());
        kept
    }
}

/// Index of the eighth of a turn containing the direction `(dx, dy)`.
fn octant<S: Scalar>(dx: &S, dy: &S) -> usize {
    let (mx, my) = (-dx.clone(), -dy.clone());
    if !dy.is_negative() {
        if dx > dy {
            0
        } else if dx.is_positive() {
            1
        } else if mx < *dy {
            2
        } else {
            3
        }
    } else if dx < dy {
        4
    } else if dx.is_negative() {
        5
    } else if *dx < my {
        6
    } else {
        7
    }
}

fn bbox<'a, S: Scalar>(a: &'a S, b: &'a S) -> (&'a S, &'a S) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn bary<S: Scalar>(t: &Tri<S>, p: &Pt<S>) -> Option<[S; 3]> {
    let [a, b, c] = t;
    let d = (b.y.clone() - c.y.clone()) * (a.x.clone() - c.x.clone()) + (c.x.clone() - b.x.clone()) * (a.y.clone() - c.y.clone());
    let n1 = (b.y.clone() - c.y.clone()) * (p.x.clone() - c.x.clone()) + (c.x.clone() - b.x.clone()) * (p.y.clone() - c.y.clone());
    let n2 = (c.y.clone() - a.y.clone()) * (p.x.clone() - c.x.clone()) + (a.x.clone() - c.x.clone()) * (p.y.clone() - c.y.clone());
    let n3 = d.clone() - n1.clone() - n2.clone();
    let pos = d.is_positive();
    let outside = |n: &S| if pos { n.is_negative() } else { n.is_positive() };
    if outside(&n1) || outside(&n2) || outside(&n3) {
        return None;
    }
    let (l1, l2) = (n1 / d.clone(), n2 / d);
    let l3 = S::one() - l1.clone() - l2.clone();
    Some([l1, l2, l3])
}
