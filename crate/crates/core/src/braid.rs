//! Braid words on an even number of strands, their plat closures and the
//! Birman moves relating braids with isotopic plat closures.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rat;

/// A word in the standard generators of `B_strands`. Each letter is
/// `(k, sign)` with `1 <= k < strands` and `sign = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<(usize, i32)>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<(usize, i32)>) -> Result<Self> {
        if strands < 2 || !strands.is_multiple_of(2) {
            return Err(Error::Parse(format!("strand count {strands} must be even and at least 2")));
        }
        for &(k, s) in &letters {
            if k == 0 || k >= strands {
                return Err(Error::Parse(format!("generator index {k} out of range for {strands} strands")));
            }
            if s != 1 && s != -1 {
                return Err(Error::Parse(format!("letter sign {s} is not ±1")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new())
    }

    /// Half the strand count.
    pub fn n(&self) -> usize {
        self.strands / 2
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&(k, s)| (k, -s)).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Move(format!("cannot concatenate braids on {} and {} strands", self.strands, other.strands)));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }
}

/// Parse the text grammar `(s<k>(^<m>)?)*`. Tokens may be separated by
/// whitespace; exponents may be negative and are expanded into letters.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut letters = Vec::new();
    let number = |i: &mut usize, allow_sign: bool| -> Result<i64> {
        let start = *i;
        if allow_sign && *i < chars.len() && (chars[*i] == '-' || chars[*i] == '+') {
            *i += 1;
        }
        let digits = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == digits {
            return Err(Error::Parse(format!("expected a number at offset {start} in {text:?}")));
        }
        let s: String = chars[start..*i].iter().collect();
        s.parse::<i64>().map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
    };
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        if chars[i] != 's' {
            return Err(Error::Parse(format!("malformed token at offset {i} in {text:?}")));
        }
        i += 1;
        let k = number(&mut i, false)?;
        let mut m = 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            m = number(&mut i, true)?;
        }
        if k < 1 {
            return Err(Error::Parse(format!("generator index {k} out of range")));
        }
        let sign = if m < 0 { -1 } else { 1 };
        for _ in 0..m.unsigned_abs() {
            letters.push((k as usize, sign));
        }
    }
    BraidWord::new(strands, letters)
}

impl fmt::Display for BraidWord {
    /// Canonical text: runs of equal letters collapse into `s<k>^<m>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let (k, s) = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == (k, s) {
                j += 1;
            }
            let m = (j - i) as i64 * s as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "s{k}")?;
            } else {
                write!(f, "s{k}^{m}")?;
            }
            i = j;
        }
        Ok(())
    }
}

pub fn exponent_sum(b: &BraidWord) -> i64 {
    b.letters.iter().map(|&(_, s)| s as i64).sum()
}

/// One crossing of the plat diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub position: usize,
    pub letter_sign: i32,
    /// Right-hand-rule sign once the closure is oriented.
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatDiagram {
    pub strands: usize,
    pub crossings: Vec<Crossing>,
    pub components: usize,
    /// `orientation[t][p]` is +1 when the strand piece at position `p` below
    /// the `t`-th letter is traversed downward.
    pub orientation: Vec<Vec<i32>>,
    pub writhe: Option<i64>,
}

impl PlatDiagram {
    pub fn is_knot(&self) -> bool {
        self.components == 1
    }

    /// Writhe computed with every strand direction reversed.
    pub fn writhe_reversed(&self) -> i64 {
        self.crossings
            .iter()
            .enumerate()
            .map(|(t, c)| {
                let a = -self.orientation[t][c.position - 1];
                let b = -self.orientation[t][c.position];
                (-c.letter_sign * a * b) as i64
            })
            .sum()
    }
}

/// Close the braid with caps joining strand ends `(2i-1, 2i)` at top and
/// bottom, count components and orient by tracing from the leftmost top cap.
pub fn plat_closure(b: &BraidWord) -> PlatDiagram {
    let n2 = b.strands;
    let len = b.letters.len();
    // next_pos[t][p]: position at layer t+1 of the piece at (t, p)
    let mut next_pos = vec![vec![0usize; n2]; len];
    for (t, &(k, _)) in b.letters.iter().enumerate() {
        for p in 0..n2 {
            next_pos[t][p] = if p == k - 1 {
                k
            } else if p == k {
                k - 1
            } else {
                p
            };
        }
    }
    let mut orientation = vec![vec![0i32; n2]; len + 1];
    let mut components = 0;
    for start in (0..n2).step_by(2) {
        if orientation[0][start] != 0 {
            continue;
        }
        components += 1;
        let mut p = start;
        loop {
            // downward along the strand starting at top position p
            let mut q = p;
            for t in 0..len {
                orientation[t][q] = 1;
                q = next_pos[t][q];
            }
            orientation[len][q] = 1;
            // bottom cap, then upward
            let mut q = q ^ 1;
            orientation[len][q] = -1;
            for t in (0..len).rev() {
                let prev = (0..n2).find(|&r| next_pos[t][r] == q).expect("permutation");
                q = prev;
                orientation[t][q] = -1;
            }
            p = q ^ 1;
            if orientation[0][p] != 0 {
                break;
            }
        }
    }
    let crossings: Vec<Crossing> = b
        .letters
        .iter()
        .enumerate()
        .map(|(t, &(k, s))| {
            let a = orientation[t][k - 1];
            let c = orientation[t][k];
            Crossing { position: k, letter_sign: s, sign: -s * a * c }
        })
        .collect();
    let writhe = if components == 1 {
        Some(crossings.iter().map(|c| c.sign as i64).sum())
    } else {
        None
    };
    PlatDiagram { strands: n2, crossings, components, orientation, writhe }
}

/// `s_R = (e - w - 2n) / 4` with `e` the exponent sum and `w` the writhe.
pub fn shift_sr(b: &BraidWord) -> Result<Rat> {
    let d = plat_closure(b);
    let w = d.writhe.ok_or(Error::NotAKnot(d.components))?;
    let e = exponent_sum(b);
    let n = b.n() as i64;
    Ok(Rat::new((e - w - 2 * n).into(), 4.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    A(i32),
    B(i32),
    /// `C_i^{±1}` with `1 <= i <= n-1`.
    C(usize, i32),
    Stabilize,
    Destabilize,
}

impl Move {
    pub fn word(&self, strands: usize) -> Result<Vec<(usize, i32)>> {
        let n = strands / 2;
        let (base, e): (Vec<usize>, i32) = match *self {
            Move::A(e) => (vec![1], e),
            Move::B(e) => {
                if strands < 4 {
                    return Err(Error::Move("move B needs at least 4 strands".into()));
                }
                (vec![2, 1, 1, 2], e)
            }
            Move::C(i, e) => {
                if i < 1 || i + 1 > n {
                    return Err(Error::Move(format!("C_{i} needs 1 <= i <= {}", n.saturating_sub(1))));
                }
                (vec![2 * i, 2 * i - 1, 2 * i + 1, 2 * i], e)
            }
            Move::Stabilize | Move::Destabilize => return Ok(Vec::new()),
        };
        if e == 1 {
            Ok(base.into_iter().map(|k| (k, 1)).collect())
        } else if e == -1 {
            Ok(base.into_iter().rev().map(|k| (k, -1)).collect())
        } else {
            Err(Error::Move(format!("move exponent {e} is not ±1")))
        }
    }
}

impl std::str::FromStr for Move {
    type Err = Error;

    /// `A`, `A-1`, `B`, `B-1`, `C<i>`, `C<i>-1`, `stab`, `destab`; `^-1`
    /// is accepted for `-1`.
    fn from_str(s: &str) -> Result<Move> {
        let (body, e) = match s.strip_suffix("^-1").or_else(|| s.strip_suffix("-1")) {
            Some(b) => (b, -1),
            None => (s, 1),
        };
        match body {
            "A" => Ok(Move::A(e)),
            "B" => Ok(Move::B(e)),
            "stab" if e == 1 => Ok(Move::Stabilize),
            "destab" if e == 1 => Ok(Move::Destabilize),
            _ => {
                let i = body
                    .strip_prefix('C')
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown move {s:?}")))?;
                Ok(Move::C(i, e))
            }
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |e: i32| if e < 0 { "-1" } else { "" };
        match *self {
            Move::A(e) => write!(f, "A{}", suffix(e)),
            Move::B(e) => write!(f, "B{}", suffix(e)),
            Move::C(i, e) => write!(f, "C{i}{}", suffix(e)),
            Move::Stabilize => write!(f, "stab"),
            Move::Destabilize => write!(f, "destab"),
        }
    }
}

pub fn birman_move(b: &BraidWord, m: Move) -> Result<BraidWord> {
    match m {
        Move::Stabilize => {
            let strands = b.strands + 2;
            let mut letters = b.letters.clone();
            letters.push((b.strands, 1));
            BraidWord::new(strands, letters)
        }
        Move::Destabilize => {
            let top = b.strands - 2;
            match b.letters.last() {
                Some(&(k, 1)) if k == top && top >= 2 => {
                    let letters = b.letters[..b.letters.len() - 1].to_vec();
                    if letters.iter().any(|&(j, _)| j >= top) {
                        return Err(Error::Move("remaining letters use the outer strands".into()));
                    }
                    BraidWord::new(top, letters)
                }
                _ => Err(Error::Move(format!("word does not end in s{top}"))),
            }
        }
        _ => {
            let mut letters = b.letters.clone();
            letters.extend(m.word(b.strands)?);
            BraidWord::new(b.strands, letters)
        }
    }
}

/// Replace each letter `σ_i^{±1}` by `σ_{2n-i}^{∓1}`, keeping the order.
pub fn mirror_braid(b: &BraidWord) -> BraidWord {
    BraidWord {
        strands: b.strands,
        letters: b.letters.iter().map(|&(k, s)| (b.strands - k, -s)).collect(),
    }
}

/// Seeded stream of random braid words whose plat closures are knots.
/// Strand counts are drawn from `strands`, word lengths from
/// `1..=max_len`.
pub struct RandomKnots {
    rng: ChaCha8Rng,
    strands: Vec<usize>,
    max_len: usize,
}

impl RandomKnots {
    pub fn new(seed: u64, strands: &[usize], max_len: usize) -> Result<Self> {
        if strands.is_empty() || max_len == 0 {
            return Err(Error::Parse("random braids need a strand count and a positive length".into()));
        }
        for &s in strands {
            BraidWord::identity(s)?;
        }
        Ok(RandomKnots { rng: ChaCha8Rng::seed_from_u64(seed), strands: strands.to_vec(), max_len })
    }
}

impl Iterator for RandomKnots {
    type Item = BraidWord;

    fn next(&mut self) -> Option<BraidWord> {
        loop {
            let strands = self.strands[self.rng.gen_range(0..self.strands.len())];
            let len = self.rng.gen_range(1..=self.max_len);
            let letters = (0..len).map(|_| (self.rng.gen_range(1..strands), if self.rng.gen_bool(0.5) { 1 } else { -1 })).collect();
            let b = BraidWord { strands, letters };
            if plat_closure(&b).is_knot() {
                return Some(b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> BraidWord {
        parse_braid("s2^3", 4).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert!(parse_braid("", 4).unwrap().is_empty());
        assert_eq!(trefoil().letters, vec![(2, 1); 3]);
        assert_eq!(parse_braid("s1^-1 s3", 4).unwrap().letters, vec![(1, -1), (3, 1)]);
        assert_eq!(parse_braid("s1s2^2", 4).unwrap().len(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_braid("s4", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_braid("s1", 3), Err(Error::Parse(_))));
        assert!(matches!(parse_braid("t1", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_braid("s^2", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_braid("s0", 4), Err(Error::Parse(_))));
    }

    #[test]
    fn printer() {
        assert_eq!(trefoil().to_string(), "s2^3");
        assert_eq!(parse_braid("s1^-2 s3 s1", 4).unwrap().to_string(), "s1^-2 s3 s1");
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sum(&trefoil()), 3);
        assert_eq!(exponent_sum(&BraidWord::identity(4).unwrap()), 0);
        assert_eq!(exponent_sum(&parse_braid("s1 s1^-1", 2).unwrap()), 0);
    }

    #[test]
    fn closures() {
        let d = plat_closure(&trefoil());
        assert!(d.is_knot());
        assert_eq!(d.writhe, Some(-3));
        let u = plat_closure(&BraidWord::identity(2).unwrap());
        assert_eq!((u.components, u.writhe), (1, Some(0)));
        let two = plat_closure(&BraidWord::identity(4).unwrap());
        assert_eq!((two.components, two.writhe), (2, None));
    }

    #[test]
    fn shifts() {
        assert_eq!(shift_sr(&trefoil()).unwrap(), Rat::new(1.into(), 2.into()));
        assert_eq!(shift_sr(&BraidWord::identity(2).unwrap()).unwrap(), Rat::new((-1).into(), 2.into()));
        let st = parse_braid("s2^3 s4", 6).unwrap();
        assert_eq!(shift_sr(&st).unwrap(), Rat::new(1.into(), 2.into()));
        assert!(matches!(shift_sr(&BraidWord::identity(4).unwrap()), Err(Error::NotAKnot(2))));
    }

    #[test]
    fn moves() {
        let b = trefoil();
        assert_eq!(birman_move(&b, Move::A(1)).unwrap().to_string(), "s2^3 s1");
        assert_eq!(birman_move(&b, Move::B(1)).unwrap().to_string(), "s2^4 s1^2 s2");
        let st = birman_move(&b, Move::Stabilize).unwrap();
        assert_eq!((st.strands, st.to_string()), (6, "s2^3 s4".to_string()));
        assert_eq!(birman_move(&st, Move::Destabilize).unwrap(), b);
        assert!(birman_move(&b, Move::Destabilize).is_err());
        assert!(birman_move(&b, Move::C(2, 1)).is_err());
        assert_eq!(birman_move(&b, Move::C(1, -1)).unwrap().letters[3..], [(2, -1), (3, -1), (1, -1), (2, -1)]);
    }

    #[test]
    fn move_names_round_trip() {
        for m in [Move::A(1), Move::A(-1), Move::B(-1), Move::C(2, 1), Move::C(1, -1), Move::Stabilize, Move::Destabilize] {
            assert_eq!(m.to_string().parse::<Move>().unwrap(), m);
        }
    }

    #[test]
    fn mirrors() {
        assert_eq!(mirror_braid(&trefoil()).to_string(), "s2^-3");
        assert_eq!(mirror_braid(&parse_braid("s1 s3^-1", 4).unwrap()).to_string(), "s3^-1 s1");
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(parse_braid("s1^-1 s3", 4).unwrap()).unwrap();
        assert_eq!(v, serde_json::json!({"strands": 4, "letters": [[1, -1], [3, 1]]}));
    }
}
