//! Exact integer and F₂ linear algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Column-echelon reduction `A·V = [L | 0]` of an integer matrix with `V`
/// unimodular. Solves `A·c = b` over ℤ and yields a basis of the integer
/// kernel (the trailing columns of `V`).
#[derive(Clone, Debug)]
pub struct IntSolver {
    rows: usize,
    cols: usize,
    /// Reduced columns: the first `rows` entries are `A·V`, the rest `V`.
    c: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl IntSolver {
    pub fn new(a: &[Vec<i64>], cols: usize) -> Self {
        let rows = a.len();
        let mut c: Vec<Vec<BigInt>> = (0..cols)
            .map(|j| {
                let mut col: Vec<BigInt> = a.iter().map(|r| BigInt::from(r[j])).collect();
                col.extend((0..cols).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
                col
            })
            .collect();
        let mut pivots = Vec::new();
        let mut k = 0;
        for r in 0..rows {
            if k == cols {
                break;
            }
            loop {
                let best = (k..cols).filter(|&j| !c[j][r].is_zero()).min_by_key(|&j| c[j][r].abs());
                let Some(j) = best else { break };
                c.swap(k, j);
                let mut done = true;
                for j in k + 1..cols {
                    if c[j][r].is_zero() {
                        continue;
                    }
                    let q = c[j][r].div_floor(&c[k][r]);
                    let (head, tail) = c.split_at_mut(j);
                    for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                        *x -= &q * y;
                    }
                    if !c[j][r].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if k < cols && !c[k][r].is_zero() {
                if c[k][r].is_negative() {
                    for x in c[k].iter_mut() {
                        *x = -&*x;
                    }
                }
                pivots.push(r);
                k += 1;
            }
        }
        IntSolver { rows, cols, c, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// An integer solution of `A·c = b`, or `None` when none exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.rank();
        let mut y: Vec<BigInt> = Vec::with_capacity(k);
        for t in 0..k {
            let r = self.pivots[t];
            let mut s = b[r].clone();
            for (j, yj) in y.iter().enumerate() {
                s -= &self.c[j][r] * yj;
            }
            let (q, rem) = s.div_rem(&self.c[t][r]);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
        }
        for r in 0..self.rows {
            let mut s = BigInt::zero();
            for (j, yj) in y.iter().enumerate() {
                s += &self.c[j][r] * yj;
            }
            if s != b[r] {
                return None;
            }
        }
        Some(
            (0..self.cols)
                .map(|i| y.iter().enumerate().map(|(j, yj)| &self.c[j][self.rows + i] * yj).sum())
                .collect(),
        )
    }

    /// Canonical representative of `b` modulo the column lattice of `A`:
    /// `b - b'` lies in the lattice exactly when the residues agree.
    pub fn residue(&self, b: &[BigInt]) -> Vec<BigInt> {
        let mut b = b.to_vec();
        for (t, &r) in self.pivots.iter().enumerate() {
            let q = b[r].div_floor(&self.c[t][r]);
            if !q.is_zero() {
                for (x, y) in b.iter_mut().zip(&self.c[t][..self.rows]) {
                    *x -= &q * y;
                }
            }
        }
        b
    }

    /// Basis of the integer kernel of `A`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols).map(|j| self.c[j][self.rows..].to_vec()).collect()
    }
}

/// Dense F₂ matrix with bit-packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<Vec<u64>>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, bits: vec![vec![0; cols.div_ceil(64)]; rows] }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.bits[r][c / 64] |= 1 << (c % 64);
        } else {
            self.bits[r][c / 64] &= !(1 << (c % 64));
        }
    }

    pub fn mul(&self, o: &F2Matrix) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for (x, y) in out.bits[r].iter_mut().zip(&o.bits[k]) {
                        *x ^= y;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|r| r.iter().all(|&w| w == 0))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.bits.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c / 64] >> (c % 64) & 1 == 1) else { continue };
            m.swap(rank, p);
            let piv = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c / 64] >> (c % 64) & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&piv) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solves_over_integers_only() {
        let s = IntSolver::new(&[vec![2, 4]], 2);
        assert_eq!(s.rank(), 1);
        assert!(s.solve(&big(&[3])).is_none());
        let c = s.solve(&big(&[6])).unwrap();
        assert_eq!(&c[0] * 2 + &c[1] * 4, BigInt::from(6));
        let k = s.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] * 2 + &k[0][1] * 4, BigInt::zero());
        assert_eq!(k[0][0].gcd(&k[0][1]), BigInt::one());
    }

    #[test]
    fn inconsistent_system() {
        let s = IntSolver::new(&[vec![1, 1], vec![1, 1]], 2);
        assert!(s.solve(&big(&[1, 2])).is_none());
        assert!(s.solve(&big(&[2, 2])).is_some());
    }

    #[test]
    fn residue_classes() {
        let s = IntSolver::new(&[vec![2, 0], vec![1, 3]], 2);
        for (a, b) in [([1, 0], [3, 1]), ([0, 1], [4, 7]), ([5, -2], [1, 0])] {
            let same = s.solve(&big(&[a[0] - b[0], a[1] - b[1]])).is_some();
            assert_eq!(s.residue(&big(&a)) == s.residue(&big(&b)), same, "{a:?} {b:?}");
        }
    }

    #[test]
    fn f2_rank() {
        let mut m = F2Matrix::zeros(3, 70);
        for (r, c) in [(0, 0), (0, 65), (1, 65), (2, 0), (1, 3)] {
            m.set(r, c, true);
        }
        assert_eq!(m.rank(), 3);
        m.set(1, 3, false);
        assert_eq!(m.rank(), 2);
    }
}
