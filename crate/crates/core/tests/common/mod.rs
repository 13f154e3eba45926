//! Oracles shared by the acceptance harness and the property suites.
//! Nothing here calls into the engine's own algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use platfloer::braid::BraidWord;
use platfloer::cover::{Family, HeegaardDiagram};
use rand::Rng;

/// Labels of the trefoil's 𝒵 points in id order.
pub const TREFOIL_Z: [&str; 12] = ["x1", "s", "s'", "t", "t'", "x2", "x3", "u'", "u", "v'", "v", "x4"];

/// Splits a two-letter generator name such as `"ut'"` or `"x2x3"`.
pub fn parse_pair(w: &str) -> BTreeSet<&'static str> {
    for a in TREFOIL_Z {
        if let Some(rest) = w.strip_prefix(a) {
            if let Some(b) = TREFOIL_Z.iter().find(|b| **b == rest) {
                return [a, *b].into_iter().collect();
            }
        }
    }
    panic!("not a trefoil generator: {w}")
}

pub fn letters_of(gen: &[usize]) -> BTreeSet<&'static str> {
    gen.iter().map(|&z| TREFOIL_Z[z]).collect()
}

// ---------------------------------------------------------------------------
// Free group oracle: the Artin action of B_m on F_m.

/// Reduced word in the free group; `k > 0` is `x_k`, `-k` its inverse.
pub type FreeWord = Vec<i32>;

fn push_reduced(w: &mut FreeWord, g: i32) {
    if w.last() == Some(&-g) {
        w.pop();
    } else {
        w.push(g);
    }
}

fn invert(w: &[i32]) -> FreeWord {
    w.iter().rev().map(|g| -g).collect()
}

/// Images of `x_1..x_m` under the automorphism of a braid word.
pub fn artin_images(strands: usize, letters: &[(usize, i32)]) -> Vec<FreeWord> {
    let mut images: Vec<FreeWord> = (1..=strands as i32).map(|k| vec![k]).collect();
    for &(i, s) in letters {
        let (a, b) = (i as i32, i as i32 + 1);
        let sub = |g: i32| -> FreeWord {
            if s > 0 {
                match g {
                    _ if g == a => vec![a, b, -a],
                    _ if g == b => vec![a],
                    _ => vec![g],
                }
            } else {
                match g {
                    _ if g == a => vec![b],
                    _ if g == b => vec![-b, a, b],
                    _ => vec![g],
                }
            }
        };
        for img in images.iter_mut() {
            let mut out = FreeWord::new();
            for &g in img.iter() {
                let piece = if g > 0 { sub(g) } else { invert(&sub(-g)) };
                for h in piece {
                    push_reduced(&mut out, h);
                }
            }
            *img = out;
        }
    }
    images
}

/// Braid equality decided by the faithful Artin representation.
pub fn same_braid(strands: usize, u: &[(usize, i32)], v: &[(usize, i32)]) -> bool {
    artin_images(strands, u) == artin_images(strands, v)
}

/// A random defining relator of `B_strands`, possibly inverted and
/// cyclically rotated.
pub fn random_relator<R: Rng>(rng: &mut R, strands: usize) -> Vec<(usize, i32)> {
    let m = strands - 1;
    let i = rng.gen_range(1..=m);
    let mut rel: Vec<(usize, i32)> = match rng.gen_range(0..3) {
        0 => vec![(i, 1), (i, -1)],
        1 if m >= 2 => {
            let i = rng.gen_range(1..m);
            vec![(i, 1), (i + 1, 1), (i, 1), (i + 1, -1), (i, -1), (i + 1, -1)]
        }
        _ if m >= 3 => {
            let far: Vec<(usize, usize)> = (1..=m).flat_map(|a| (a + 2..=m).map(move |b| (a, b))).collect();
            let (a, b) = far[rng.gen_range(0..far.len())];
            vec![(a, 1), (b, 1), (a, -1), (b, -1)]
        }
        _ => vec![(i, -1), (i, 1)],
    };
    if rng.gen_bool(0.5) {
        rel = rel.iter().rev().map(|&(k, s)| (k, -s)).collect();
    }
    let r = rng.gen_range(0..rel.len());
    rel.rotate_left(r);
    rel
}

// ---------------------------------------------------------------------------
// Smith normal form over the integers.

/// Invariant factors `d_1 | d_2 | …` of an integer matrix (nonzero ones only).
pub fn smith_diagonal(rows: &[Vec<i64>]) -> Vec<i128> {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest(&a, t, t..m, t..n) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(p);
                    sub_row(&mut a, i, t, q);
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(p);
                    for row in a.iter_mut() {
                        let v = row[t];
                        if v != 0 {
                            row[j] = row[j].checked_sub(q.checked_mul(v).expect("oracle overflow")).expect("oracle overflow");
                        }
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if clean {
                // divisibility: fold an offending row into the pivot row
                let bad = (t + 1..m).find(|&i| a[i][t + 1..].iter().any(|v| v % p != 0));
                match bad {
                    Some(i) => {
                        sub_row(&mut a, t, i, -1);
                        continue;
                    }
                    None => break,
                }
            }
            if let Some((i, _)) = smallest(&a, t, t..m, t..t + 1) {
                a.swap(t, i);
            }
            if let Some((_, j)) = smallest(&a, t, t..t + 1, t..n) {
                if a[t][j].abs() < a[t][t].abs() || a[t][t] == 0 {
                    swap_cols(&mut a, t, j);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn smallest(a: &[Vec<i128>], _t: usize, rs: std::ops::Range<usize>, cs: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rs {
        for j in cs.clone() {
            let v = a[i][j];
            if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<i128>], j: usize, k: usize) {
    if j != k {
        for row in a.iter_mut() {
            row.swap(j, k);
        }
    }
}

/// `row_i -= q · row_t`.
fn sub_row(a: &mut [Vec<i128>], i: usize, t: usize, q: i128) {
    let src = a[t].clone();
    for (x, s) in a[i].iter_mut().zip(src) {
        if s != 0 {
            *x = x.checked_sub(q.checked_mul(s).expect("oracle overflow")).expect("oracle overflow");
        }
    }
}

pub fn snf_rank(rows: &[Vec<i64>]) -> usize {
    smith_diagonal(rows).len()
}

/// Periodic-domain rank of a diagram computed two independent ways from
/// its curve words: the kernel of the "constant boundary multiplicity"
/// system, and `2g − rank(S)` with `S` the span of the curves in `H_1`.
pub struct PeriodicOracle {
    pub genus: usize,
    pub kernel_rank: usize,
    pub two_g_minus_rank_s: usize,
}

pub fn periodic_oracle(h: &HeegaardDiagram) -> PeriodicOracle {
    let nreg = h.regions.len();
    let edges: Vec<(usize, usize)> = h.curves.iter().flat_map(|c| c.seq.iter().map(|(l, r, _)| (*l, *r))).collect();
    // the basepoint tube is an annulus, so cell counts do not give g
    let alphas = h.curves.iter().filter(|c| c.fam == Family::Alpha).count();
    assert_eq!(2 * alphas, h.curves.len(), "unequal α and β counts");
    let genus = alphas;

    // ∂D along a curve edge is D[left] − D[right]; it must be constant per curve
    let others: Vec<usize> = (0..nreg).filter(|&r| r != h.z).collect();
    let mut sys = Vec::new();
    for c in &h.curves {
        for w in c.seq.windows(2) {
            let mut row = vec![0i64; others.len()];
            for (reg, s) in [(w[0].0, 1), (w[0].1, -1), (w[1].0, -1), (w[1].1, 1)] {
                if let Some(k) = others.iter().position(|&o| o == reg) {
                    row[k] += s;
                }
            }
            sys.push(row);
        }
    }
    let kernel_rank = others.len() - snf_rank(&sys);

    // boundary map C_2 → C_1 as columns, then curve cycles appended
    let mut d2: Vec<Vec<i64>> = edges
        .iter()
        .map(|&(l, r)| {
            let mut row = vec![0i64; nreg];
            row[l] += 1;
            row[r] -= 1;
            row
        })
        .collect();
    let base = snf_rank(&d2);
    let mut e = 0;
    for c in &h.curves {
        for (k, row) in d2.iter_mut().enumerate() {
            row.push(i64::from(k >= e && k < e + c.seq.len()));
        }
        e += c.seq.len();
    }
    let rank_s = snf_rank(&d2) - base;
    PeriodicOracle { genus, kernel_rank, two_g_minus_rank_s: 2 * genus - rank_s }
}

/// First `want` knots of a seeded stream whose diagrams are nice, plus
/// every knot drawn along the way.
pub fn corpus(seed: u64, strands: &[usize], max_len: usize, want: usize, cap: usize) -> Vec<BraidWord> {
    platfloer::braid::RandomKnots::new(seed, strands, max_len).unwrap().take(cap).scan(0, |nice, b| {
        if *nice >= want {
            return None;
        }
        let (g, _) = platfloer::pipeline::grade(&b).ok()?;
        if HeegaardDiagram::build(&g).map(|h| h.is_nice()).unwrap_or(false) {
            *nice += 1;
        }
        Some(b)
    }).collect()
}
