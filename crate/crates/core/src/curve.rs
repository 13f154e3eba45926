//! Exact piecewise-linear curves in the punctured disk.
//!
//! The disk is the rectangle `[0, 2n+1] x [-H, H]` with `H = n + 1` and
//! punctures at `(j, 0)` for `j = 1..=2n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Pt<S> {
    pub fn new(x: S, y: S) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Pt { x: S::int(x), y: S::int(y) }
    }

    pub fn sub(&self, o: &Pt<S>) -> Pt<S> {
        Pt { x: self.x.clone() - o.x.clone(), y: self.y.clone() - o.y.clone() }
    }

    pub fn add(&self, o: &Pt<S>) -> Pt<S> {
        Pt { x: self.x.clone() + o.x.clone(), y: self.y.clone() + o.y.clone() }
    }

    pub fn scale(&self, t: &S) -> Pt<S> {
        Pt { x: self.x.clone() * t.clone(), y: self.y.clone() * t.clone() }
    }

    pub fn lerp(&self, o: &Pt<S>, t: &S) -> Pt<S> {
        self.add(&o.sub(self).scale(t))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl<S: fmt::Debug> fmt::Debug for Pt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl<S: fmt::Display> fmt::Display for Pt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross<S: Scalar>(o: &Pt<S>, a: &Pt<S>, b: &Pt<S>) -> S {
    (a.x.clone() - o.x.clone()) * (b.y.clone() - o.y.clone()) - (a.y.clone() - o.y.clone()) * (b.x.clone() - o.x.clone())
}

fn det<S: Scalar>(a: &Pt<S>, b: &Pt<S>) -> S {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

fn dot<S: Scalar>(a: &Pt<S>, b: &Pt<S>) -> S {
    a.x.clone() * b.x.clone() + a.y.clone() * b.y.clone()
}

/// Parameters `t` on segment `pq` where it meets the closed segment `ab`.
/// For collinear overlaps both endpoints of `ab` are projected.
pub fn seg_params<S: Scalar>(p: &Pt<S>, q: &Pt<S>, a: &Pt<S>, b: &Pt<S>) -> Vec<S> {
    let r = q.sub(p);
    let s = b.sub(a);
    let den = det(&r, &s);
    let ap = a.sub(p);
    if den.is_zero() {
        if !det(&ap, &r).is_zero() {
            return Vec::new();
        }
        let rr = dot(&r, &r);
        return [a, b].iter().map(|v| dot(&v.sub(p), &r) / rr.clone()).collect();
    }
    let t = det(&ap, &s) / den.clone();
    let u = det(&ap, &r) / den;
    if !u.is_negative() && u <= S::one() {
        vec![t]
    } else {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndTag {
    Puncture(usize),
    Boundary,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Arc,
    Loop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarCurve<S> {
    pub vertices: Vec<Pt<S>>,
    pub kind: CurveKind,
    pub ends: [EndTag; 2],
}

impl<S: Scalar> PlanarCurve<S> {
    pub fn arc(vertices: Vec<Pt<S>>, start: EndTag, end: EndTag) -> Self {
        PlanarCurve { vertices, kind: CurveKind::Arc, ends: [start, end] }
    }

    pub fn closed(vertices: Vec<Pt<S>>) -> Self {
        PlanarCurve { vertices, kind: CurveKind::Loop, ends: [EndTag::Free, EndTag::Free] }
    }

    pub fn segments(&self) -> Vec<(Pt<S>, Pt<S>)> {
        let v = &self.vertices;
        let mut out: Vec<_> = v.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        if self.kind == CurveKind::Loop && v.len() > 1 {
            out.push((v[v.len() - 1].clone(), v[0].clone()));
        }
        out
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        let [a, b] = self.ends.clone();
        PlanarCurve { vertices, kind: self.kind, ends: [b, a] }
    }

    /// Concatenate two loops based at the same first vertex.
    pub fn concat_loop(&self, other: &Self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.push(self.vertices[0].clone());
        vertices.extend(other.vertices.iter().skip(1).cloned());
        PlanarCurve::closed(dedupe(&vertices))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionRecord<S> {
    pub point: Pt<S>,
    pub index_a: usize,
    pub index_b: usize,
    /// Segment index plus parameter along each curve.
    pub order_a: (usize, S),
    pub order_b: (usize, S),
    /// Sign of `det(dir_a, dir_b)`.
    pub sign: i32,
}

/// All transverse crossings between two curves, by brute force over
/// segment pairs. Shared segment endpoints are reported once per segment
/// pair touching them.
pub fn intersections<S: Scalar>(
    a: &PlanarCurve<S>,
    ia: usize,
    b: &PlanarCurve<S>,
    ib: usize,
) -> Result<Vec<IntersectionRecord<S>>> {
    let mut out = Vec::new();
    let sa = a.segments();
    let sb = b.segments();
    for (i, (p, q)) in sa.iter().enumerate() {
        for (j, (u, v)) in sb.iter().enumerate() {
            let r = q.sub(p);
            let s = v.sub(u);
            let den = det(&r, &s);
            if den.is_zero() {
                if det(&u.sub(p), &r).is_zero() {
                    let rr = dot(&r, &r);
                    let t0 = dot(&u.sub(p), &r) / rr.clone();
                    let t1 = dot(&v.sub(p), &r) / rr;
                    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
                    if lo < S::one() && hi > S::zero() {
                        return Err(Error::DegenerateInput(format!("curves {ia} and {ib} overlap along {p}-{q}")));
                    }
                }
                continue;
            }
            let up = u.sub(p);
            let t = det(&up, &s) / den.clone();
            let w = det(&up, &r) / den.clone();
            let in01 = |z: &S| !z.is_negative() && *z <= S::one();
            // half-open on the far end so shared vertices count once
            let last_a = i + 1 == sa.len() && a.kind == CurveKind::Arc;
            let last_b = j + 1 == sb.len() && b.kind == CurveKind::Arc;
            let ok_t = in01(&t) && (t < S::one() || last_a);
            let ok_w = in01(&w) && (w < S::one() || last_b);
            if ok_t && ok_w {
                out.push(IntersectionRecord {
                    point: p.lerp(q, &t),
                    index_a: ia,
                    index_b: ib,
                    order_a: (i, t),
                    order_b: (j, w),
                    sign: if den.is_positive() { 1 } else { -1 },
                });
            }
        }
    }
    Ok(out)
}

fn on_segment<S: Scalar>(a: &Pt<S>, b: &Pt<S>, p: &Pt<S>) -> bool {
    cross(a, b, p).is_zero()
        && std::cmp::min(&a.x, &b.x) <= &p.x
        && &p.x <= std::cmp::max(&a.x, &b.x)
        && std::cmp::min(&a.y, &b.y) <= &p.y
        && &p.y <= std::cmp::max(&a.y, &b.y)
}

/// Signed winding number of a closed polyline around one point.
pub fn winding_at<S: Scalar>(vertices: &[Pt<S>], p: &Pt<S>) -> Result<i64> {
    let m = vertices.len();
    let mut w = 0;
    for i in 0..m {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % m];
        if on_segment(a, b, p) {
            return Err(Error::DegenerateInput(format!("point {p} lies on the loop")));
        }
        if a.y <= p.y && p.y < b.y {
            if cross(a, b, p).is_positive() {
                w += 1;
            }
        } else if b.y <= p.y && p.y < a.y && cross(a, b, p).is_negative() {
            w -= 1;
        }
    }
    Ok(w)
}

/// Sum of counter-clockwise winding numbers of `lp` around `points`.
pub fn winding_number<S: Scalar>(lp: &PlanarCurve<S>, points: &[Pt<S>]) -> Result<i64> {
    let mut total = 0;
    for p in points {
        total += winding_at(&lp.vertices, p)?;
    }
    Ok(total)
}

/// One step of the exact angle tracker. `q` is even on the x axis
/// (`q/2` half turns from `+x`) and odd inside a half plane.
fn step_q<S: Scalar>(q: i64, a: &Pt<S>, b: &Pt<S>) -> Result<i64> {
    let (ya, yb) = (&a.y, &b.y);
    if ya.is_zero() && yb.is_zero() {
        if a.x.is_positive() != b.x.is_positive() {
            return Err(Error::DegenerateInput("difference vector passes through zero".into()));
        }
        return Ok(q);
    }
    if ya.is_zero() {
        let up = (a.x.is_positive() && yb.is_positive()) || (a.x.is_negative() && yb.is_negative());
        return Ok(if up { q + 1 } else { q - 1 });
    }
    if yb.is_zero() {
        let lower_pos = (q - 1).div_euclid(2).rem_euclid(2) == 0;
        return Ok(if lower_pos == b.x.is_positive() { q - 1 } else { q + 1 });
    }
    if ya.is_positive() == yb.is_positive() {
        return Ok(q);
    }
    let xc = a.x.clone() + (b.x.clone() - a.x.clone()) * ya.clone() / (ya.clone() - yb.clone());
    if xc.is_zero() {
        return Err(Error::DegenerateInput("difference vector passes through zero".into()));
    }
    Ok(if xc.is_positive() {
        if ya.is_negative() { q + 2 } else { q - 2 }
    } else if ya.is_positive() {
        q + 2
    } else {
        q - 2
    })
}

/// Total counter-clockwise angle, in half turns, swept by the piecewise
/// linear vector path through `vecs`. First and last vectors must be
/// horizontal.
pub fn angle_halfturns<S: Scalar>(vecs: &[Pt<S>]) -> Result<i64> {
    let v0 = &vecs[0];
    if !v0.y.is_zero() || v0.x.is_zero() {
        return Err(Error::ConventionViolation(format!("initial vector {v0} is not horizontal")));
    }
    let q0 = if v0.x.is_positive() { 0 } else { 2 };
    let mut q = q0;
    for w in vecs.windows(2) {
        if w[0].is_zero() || w[1].is_zero() {
            return Err(Error::DegenerateInput("zero difference vector".into()));
        }
        q = step_q(q, &w[0], &w[1])?;
    }
    if q % 2 != 0 {
        return Err(Error::ConventionViolation("final vector is not horizontal".into()));
    }
    Ok((q - q0) / 2)
}

/// Turning of the tangent along a polyline, in half revolutions, with
/// clockwise turning counted positive. The last segment must be parallel
/// or antiparallel to the first. U-turns are rejected.
pub fn turning_half_revolutions<S: Scalar>(path: &[Pt<S>]) -> Result<i64> {
    let dirs: Vec<Pt<S>> = path.windows(2).map(|w| w[1].sub(&w[0])).filter(|d| !d.is_zero()).collect();
    if dirs.is_empty() {
        return Ok(0);
    }
    let d0 = dirs[0].clone();
    // coordinates relative to the initial direction
    let rel: Vec<Pt<S>> = dirs.iter().map(|d| Pt::new(dot(d, &d0), det(&d0, d))).collect();
    for w in rel.windows(2) {
        if det(&w[0], &w[1]).is_zero() && dot(&w[0], &w[1]).is_negative() {
            return Err(Error::ConventionViolation("path makes a U-turn".into()));
        }
    }
    Ok(-angle_halfturns(&rel)?)
}

pub fn dedupe<S: Scalar>(p: &[Pt<S>]) -> Vec<Pt<S>> {
    let mut out: Vec<Pt<S>> = Vec::with_capacity(p.len());
    for v in p {
        if out.last() != Some(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Sample a polyline parametrized by vertex index over `[0, 1]`.
pub fn sample<S: Scalar>(poly: &[Pt<S>], ts: &[S]) -> Vec<Pt<S>> {
    let m = poly.len() - 1;
    ts.iter()
        .map(|t| {
            if m == 0 {
                return poly[0].clone();
            }
            let s = t.clone() * S::int(m as i64);
            let i = std::cmp::min(s.floor_i64() as usize, m - 1);
            poly[i].lerp(&poly[i + 1], &(s - S::int(i as i64)))
        })
        .collect()
}

pub fn grid<S: Scalar>(poly: &[Pt<S>]) -> Vec<S> {
    let m = poly.len() - 1;
    if m == 0 {
        return vec![S::zero()];
    }
    (0..=m).map(|i| S::ratio(i as i64, m as i64)).collect()
}

/// Half turns swept by the difference vector of two paths. Each path is a
/// list of phases; phase `k` of both paths runs simultaneously, each phase
/// parametrized by vertex index.
pub fn pair_halfturns<S: Scalar>(a: &[Vec<Pt<S>>], b: &[Vec<Pt<S>>]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::ConventionViolation("paths have different phase counts".into()));
    }
    let mut vecs = Vec::new();
    for (pa, pb) in a.iter().zip(b) {
        let mut ts = grid(pa);
        ts.extend(grid(pb));
        ts.sort();
        ts.dedup();
        let sa = sample(pa, &ts);
        let sb = sample(pb, &ts);
        vecs.extend(sa.iter().zip(&sb).map(|(p, q)| q.sub(p)));
    }
    angle_halfturns(&dedupe(&vecs))
}

/// Sum over unordered pairs of the half turns swept by difference vectors.
pub fn pairwise_winding<S: Scalar>(paths: &[Vec<Vec<Pt<S>>>]) -> Result<i64> {
    let mut total = 0;
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            total += pair_halfturns(&paths[i], &paths[j])?;
        }
    }
    Ok(total)
}

/// Tines, handles and figure-eights of the standard fork on `2n` punctures.
pub struct StandardFork<S> {
    pub tines: Vec<PlanarCurve<S>>,
    pub handles: Vec<PlanarCurve<S>>,
    pub eights: Vec<PlanarCurve<S>>,
}

/// Handles run from the tine midpoint straight down to the bottom edge.
pub fn standard_fork<S: Scalar>(n: usize) -> StandardFork<S> {
    let h = S::int(n as i64 + 1);
    let mut f = StandardFork { tines: Vec::new(), handles: Vec::new(), eights: Vec::new() };
    for k in 1..=n as i64 {
        let (p, q) = (2 * k - 1, 2 * k);
        let m = S::ratio(4 * k - 1, 2);
        f.tines.push(PlanarCurve::arc(
            vec![Pt::int(p, 0), Pt::int(q, 0)],
            EndTag::Puncture(p as usize),
            EndTag::Puncture(q as usize),
        ));
        f.handles.push(PlanarCurve::arc(
            vec![Pt::new(m.clone(), S::zero()), Pt::new(m.clone(), -h.clone())],
            EndTag::Free,
            EndTag::Boundary,
        ));
        let r = S::ratio(1, 4);
        let at = |x: S, y: S| Pt::new(x, y);
        let (sp, sq) = (S::int(p), S::int(q));
        f.eights.push(PlanarCurve::closed(vec![
            at(m.clone(), S::zero()),
            at(m.clone() + r.clone(), -r.clone()),
            at(sq.clone() + r.clone(), -r.clone()),
            at(sq + r.clone(), r.clone()),
            at(m.clone() + r.clone(), r.clone()),
            at(m.clone(), S::zero()),
            at(m.clone() - r.clone(), -r.clone()),
            at(sp.clone() - r.clone(), -r.clone()),
            at(sp - r.clone(), r.clone()),
            at(m - r.clone(), r),
        ]));
    }
    f
}
