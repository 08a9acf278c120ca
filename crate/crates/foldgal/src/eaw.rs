//! The extended affine Weyl group `Q^vee x| W`, alcoves, sheets and walls.
//!
//! An element `t^lam w` labels the alcove `t^lam w a0` of the sheet
//! `kappa(lam)`. The base alcove `a0` has walls `H_{alpha_j,0}` (type `j`)
//! and `H_{alpha~,1}` (type `0`). Crossing the type-`j` wall of `x` leads to
//! `x s_j`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, q};
use crate::rootdata::{fmt_ivec, LatticeClass, RootDatum, Weyl};
use crate::{Error, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffine {
    pub lam: Vec<i64>,
    pub w: Weyl,
}

/// Affine hyperplane `H_{root,k} = { v : <root, v> = k }` with `root > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub root: Vec<i64>,
    pub k: i64,
}

impl Hyperplane {
    /// Normalizes `H_{-a,-k}` to `H_{a,k}`.
    pub fn new(root: Vec<i64>, k: i64) -> Hyperplane {
        if root.iter().all(|&x| x <= 0) {
            Hyperplane { root: root.iter().map(|x| -x).collect(), k: -k }
        } else {
            Hyperplane { root, k }
        }
    }

    /// `<root, v> - k`.
    pub fn height(&self, v: &[Q]) -> Q {
        self.root.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + b * *a) - q(self.k)
    }

    pub fn side(&self, v: &[Q]) -> i32 {
        linalg::sign(&self.height(v))
    }

    /// The affine reflection in this hyperplane, `t^{k root^vee} s_root`.
    pub fn reflection(&self, rd: &RootDatum) -> ExtAffine {
        let cr = rd.coroot(&self.root);
        ExtAffine { lam: cr.iter().map(|c| c * self.k).collect(), w: rd.reflection(&self.root) }
    }

    pub fn is_parallel_to(&self, root: &[i64]) -> bool {
        self.root == root || self.root.iter().zip(root).all(|(a, b)| *a == -b)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({},{})", fmt_ivec(&self.root), self.k)
    }
}

/// Serializable form of an element: translation and a reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EltRecord {
    pub lam: Vec<i64>,
    pub word: Vec<usize>,
}

impl ExtAffine {
    pub fn identity(n: usize) -> ExtAffine {
        ExtAffine { lam: vec![0; n], w: Weyl::identity(n) }
    }

    pub fn translation(lam: Vec<i64>) -> ExtAffine {
        let n = lam.len();
        ExtAffine { lam, w: Weyl::identity(n) }
    }

    pub fn spherical(w: Weyl) -> ExtAffine {
        ExtAffine { lam: vec![0; w.rank()], w }
    }

    pub fn new(lam: Vec<i64>, w: Weyl) -> ExtAffine {
        ExtAffine { lam, w }
    }

    pub fn rank(&self) -> usize {
        self.lam.len()
    }

    pub fn is_identity(&self) -> bool {
        self.lam.iter().all(|&x| x == 0) && self.w.is_identity()
    }

    /// `(t^a u)(t^b v) = t^{a + u b} uv`.
    pub fn mul(&self, other: &ExtAffine) -> ExtAffine {
        let wb = self.w.act(&other.lam);
        ExtAffine { lam: self.lam.iter().zip(&wb).map(|(a, b)| a + b).collect(), w: self.w.mul(&other.w) }
    }

    pub fn inverse(&self) -> ExtAffine {
        let wi = self.w.inverse();
        ExtAffine { lam: wi.act(&self.lam).iter().map(|x| -x).collect(), w: wi }
    }

    /// `b^y = y b y^-1`.
    pub fn conjugate(b: &ExtAffine, y: &ExtAffine) -> ExtAffine {
        y.mul(b).mul(&y.inverse())
    }

    pub fn act_point(&self, v: &[Q]) -> Vec<Q> {
        self.w.act_q(v).iter().zip(&self.lam).map(|(x, l)| x + q(*l)).collect()
    }

    /// Image of `H_{b,k}`: `H_{wb, k + <wb, lam>}`.
    pub fn act_hyperplane(&self, h: &Hyperplane) -> Hyperplane {
        let wb = self.w.act_root(&h.root);
        let shift: i64 = wb.iter().zip(&self.lam).map(|(a, b)| a * b).sum();
        Hyperplane::new(wb, h.k + shift)
    }

    /// Iwahori-Matsumoto length.
    pub fn length(&self, rd: &RootDatum) -> usize {
        let winv = self.w.inverse();
        rd.pos_roots
            .iter()
            .map(|a| {
                let p = rd.pairing(a, &self.lam);
                if rd.is_positive(&winv.act_root(a)) {
                    p.unsigned_abs() as usize
                } else {
                    (p - 1).unsigned_abs() as usize
                }
            })
            .sum()
    }

    pub fn sheet(&self, rd: &RootDatum) -> LatticeClass {
        rd.kottwitz_class(&self.lam)
    }

    pub fn record(&self, rd: &RootDatum) -> EltRecord {
        EltRecord { lam: self.lam.clone(), word: rd.reduced_word(&self.w) }
    }

    pub fn from_record(rd: &RootDatum, r: &EltRecord) -> Result<ExtAffine, Error> {
        if r.lam.len() != rd.rank || r.word.iter().any(|&i| i == 0 || i > rd.rank) {
            return Err(Error::Invalid("element record does not match the root datum".into()));
        }
        Ok(ExtAffine { lam: r.lam.clone(), w: rd.weyl_from_word(&r.word) })
    }

    /// `t^[a,b,...]*s1s2...`, with `id` for the trivial spherical part.
    pub fn to_text(&self, rd: &RootDatum) -> String {
        let word = rd.reduced_word(&self.w);
        let ws = if word.is_empty() {
            "id".to_string()
        } else {
            word.iter().map(|i| format!("s{i}")).collect::<String>()
        };
        format!("t^{}*{}", fmt_ivec(&self.lam), ws)
    }

    /// Parses `t^[a,b]*s1s2`, `t^[a,b]`, `s1s2s0`, `w0`, `id`.
    /// Factors separated by `*` are multiplied left to right.
    pub fn parse(rd: &RootDatum, s: &str) -> Result<ExtAffine, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('\u{2212}', "-");
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut acc = ExtAffine::identity(rd.rank);
        for factor in s.split('*') {
            acc = acc.mul(&parse_factor(rd, factor)?);
        }
        Ok(acc)
    }
}

fn parse_factor(rd: &RootDatum, f: &str) -> Result<ExtAffine, Error> {
    let n = rd.rank;
    if f.is_empty() {
        return Err(Error::Parse("empty factor".into()));
    }
    if let Some(rest) = f.strip_prefix("t^") {
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("translation `{f}` must look like t^[a,b,...]")))?;
        let lam: Vec<i64> = inner
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{x}` in `{f}`"))))
            .collect::<Result<_, _>>()?;
        if lam.len() != n {
            return Err(Error::Parse(format!("translation has {} coordinates, expected {n}", lam.len())));
        }
        return Ok(ExtAffine::translation(lam));
    }
    match f {
        "id" | "e" | "1" => return Ok(ExtAffine::identity(n)),
        "w0" => return Ok(ExtAffine::spherical(rd.w0())),
        _ => {}
    }
    let Some(body) = f.strip_prefix('s') else {
        return Err(Error::Parse(format!("unrecognized factor `{f}`")));
    };
    let mut acc = ExtAffine::identity(n);
    for part in body.split('s') {
        let j: usize = part.parse().map_err(|_| Error::Parse(format!("bad reflection index in `{f}`")))?;
        if j > n {
            return Err(Error::Parse(format!("reflection index {j} exceeds rank {n}")));
        }
        acc = acc.mul(&simple_reflection(rd, j));
    }
    Ok(acc)
}

/// Affine simple reflection: `s_0 = s_{alpha~,1}`, `s_j` spherical otherwise.
pub fn simple_reflection(rd: &RootDatum, j: usize) -> ExtAffine {
    if j == 0 {
        Hyperplane { root: rd.highest_root.clone(), k: 1 }.reflection(rd)
    } else {
        ExtAffine::spherical(rd.s(j))
    }
}

/// Wall of the base alcove of type `j`.
pub fn base_wall(rd: &RootDatum, j: usize) -> Hyperplane {
    if j == 0 {
        Hyperplane { root: rd.highest_root.clone(), k: 1 }
    } else {
        Hyperplane { root: rd.simple_root(j), k: 0 }
    }
}

/// Wall of type `j` of the alcove `x a0`.
pub fn wall(rd: &RootDatum, x: &ExtAffine, j: usize) -> Hyperplane {
    x.act_hyperplane(&base_wall(rd, j))
}

/// Coxeter number `h = ht(alpha~) + 1`.
pub fn coxeter_number(rd: &RootDatum) -> i64 {
    rd.highest_root.iter().sum::<i64>() + 1
}

/// The point `rho^vee / h`, interior to `a0`.
pub fn base_point(rd: &RootDatum) -> Vec<Q> {
    let h = coxeter_number(rd);
    vec![Q::new(1, h); rd.rank]
}

/// An interior point of the alcove `x a0`.
pub fn interior_point(rd: &RootDatum, x: &ExtAffine) -> Vec<Q> {
    x.act_point(&base_point(rd))
}

/// Hyperplanes crossed by the all-crossing gallery of the given type.
pub fn crossing_sequence(rd: &RootDatum, start: &ExtAffine, word: &[usize]) -> Vec<Hyperplane> {
    let mut cur = start.clone();
    word.iter()
        .map(|&j| {
            let h = wall(rd, &cur, j);
            cur = cur.mul(&simple_reflection(rd, j));
            h
        })
        .collect()
}

/// Evaluates a word of affine letters from `start`.
pub fn walk(rd: &RootDatum, start: &ExtAffine, word: &[usize]) -> ExtAffine {
    word.iter().fold(start.clone(), |acc, &j| acc.mul(&simple_reflection(rd, j)))
}

/// Longest element of the parabolic subgroup generated by `subset`.
pub fn longest_in(rd: &RootDatum, subset: &[usize]) -> Weyl {
    let mut w = Weyl::identity(rd.rank);
    while let Some(&i) = subset.iter().find(|&&i| rd.is_positive(&w.act_root(&rd.simple_root(i)))) {
        w = w.mul(&rd.s(i));
    }
    w
}

/// The length-zero elements, one per Kottwitz class, identity first.
pub fn omegas(rd: &RootDatum) -> &[ExtAffine] {
    rd.omegas.get_or_init(|| {
        let n = rd.rank;
        let mut out = vec![ExtAffine::identity(n)];
        for j in 1..=n {
            if rd.marks()[j - 1] != 1 {
                continue;
            }
            let others: Vec<usize> = (1..=n).filter(|&k| k != j).collect();
            let w = longest_in(rd, &others).mul(&rd.w0());
            let x = ExtAffine::new(rd.fundamental_coweight(j), w);
            debug_assert_eq!(x.length(rd), 0);
            out.push(x);
        }
        out
    })
}

/// The length-zero element in the given class.
pub fn omega_of_class(rd: &RootDatum, c: &LatticeClass) -> ExtAffine {
    omegas(rd)
        .iter()
        .find(|o| &o.sheet(rd) == c)
        .cloned()
        .expect("every class has a length-zero representative")
}

/// The permutation `pi` of `{0..n}` with `omega s_j omega^-1 = s_{pi(j)}`.
pub fn omega_permutation(rd: &RootDatum, omega: &ExtAffine) -> Result<Vec<usize>, Error> {
    if omega.length(rd) != 0 {
        return Err(Error::Invalid(format!("{} has nonzero length", omega.to_text(rd))));
    }
    let inv = omega.inverse();
    (0..=rd.rank)
        .map(|j| {
            let c = omega.mul(&simple_reflection(rd, j)).mul(&inv);
            (0..=rd.rank)
                .find(|&k| simple_reflection(rd, k) == c)
                .ok_or_else(|| Error::Internal("length-zero element does not permute the walls".into()))
        })
        .collect()
}

/// The element whose alcove is geometrically `g a0` and lies in sheet `c`.
pub fn alcove_in_sheet(rd: &RootDatum, g: &ExtAffine, c: &LatticeClass) -> ExtAffine {
    let need = c.add(&g.sheet(rd).neg());
    g.mul(&omega_of_class(rd, &need))
}

/// Lexicographically least reduced word of `a^-1 b` in affine letters, for
/// `a`, `b` in the same sheet.
pub fn reduced_affine_word(rd: &RootDatum, a: &ExtAffine, b: &ExtAffine) -> Result<Vec<usize>, Error> {
    if a.sheet(rd) != b.sheet(rd) {
        return Err(Error::Invalid("alcoves lie in different sheets".into()));
    }
    let mut cur = a.inverse().mul(b);
    let mut word = Vec::new();
    let mut len = cur.length(rd);
    while len > 0 {
        let (j, next) = (0..=rd.rank)
            .map(|j| (j, simple_reflection(rd, j).mul(&cur)))
            .find(|(_, x)| x.length(rd) + 1 == len)
            .ok_or_else(|| Error::Internal("no descent found".into()))?;
        word.push(j);
        cur = next;
        len -= 1;
    }
    if !cur.is_identity() {
        return Err(Error::Internal("residual length-zero factor".into()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Kind;

    fn rd(k: Kind, n: usize) -> RootDatum {
        RootDatum::new(k, n).unwrap()
    }

    #[test]
    fn multiplication_and_inverse() {
        let r = rd(Kind::A, 2);
        let x = ExtAffine::parse(&r, "t^[2,-1]*s1s2").unwrap();
        assert!(x.mul(&x.inverse()).is_identity());
        let back = ExtAffine::translation(x.lam.clone()).mul(&ExtAffine::spherical(x.w.clone()));
        assert_eq!(back, x);
    }

    #[test]
    fn conjugation_example() {
        let r = rd(Kind::A, 2);
        let b = ExtAffine::parse(&r, "t^[1,1]*s1").unwrap();
        let y = ExtAffine::parse(&r, "t^[-2,1]*s1s2").unwrap();
        assert_eq!(ExtAffine::conjugate(&b, &y), ExtAffine::parse(&r, "t^[-3,3]*s2").unwrap());
        assert_eq!(ExtAffine::conjugate(&b, &ExtAffine::identity(2)), b);
    }

    #[test]
    fn lengths() {
        let r = rd(Kind::A, 2);
        assert_eq!(ExtAffine::identity(2).length(&r), 0);
        assert_eq!(ExtAffine::parse(&r, "t^[3,3]*w0").unwrap().length(&r), 9);
        assert_eq!(ExtAffine::parse(&r, "w0").unwrap().length(&r), 3);
        assert_eq!(simple_reflection(&r, 0).length(&r), 1);
    }

    #[test]
    fn crossing_sequences() {
        let r = rd(Kind::A, 2);
        let id = ExtAffine::identity(2);
        assert!(crossing_sequence(&r, &id, &[]).is_empty());
        let hs = crossing_sequence(&r, &id, &[2, 1, 2]);
        assert_eq!(
            hs,
            vec![Hyperplane::new(vec![0, 1], 0), Hyperplane::new(vec![1, 1], 0), Hyperplane::new(vec![1, 0], 0)]
        );
        let t = ExtAffine::translation(vec![1, 1]);
        assert_eq!(crossing_sequence(&r, &t, &[1]), vec![Hyperplane::new(vec![1, 0], 1)]);
    }

    #[test]
    fn omega_permutations() {
        let a2 = rd(Kind::A, 2);
        assert_eq!(omegas(&a2).len(), 3);
        assert_eq!(omega_permutation(&a2, &omegas(&a2)[0]).unwrap(), vec![0, 1, 2]);
        for o in &omegas(&a2)[1..] {
            let p = omega_permutation(&a2, o).unwrap();
            assert!((0..3).all(|j| p[j] != j), "3-cycle expected, got {p:?}");
        }
        let c2 = rd(Kind::C, 2);
        let p = omega_permutation(&c2, &omegas(&c2)[1]).unwrap();
        assert_eq!(p, vec![2, 1, 0]);
        assert!(omega_permutation(&a2, &simple_reflection(&a2, 1)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = rd(Kind::B, 2);
        for w in r.elements() {
            let x = ExtAffine::new(vec![3, -2], w.clone());
            assert_eq!(ExtAffine::parse(&r, &x.to_text(&r)).unwrap(), x);
        }
        assert!(ExtAffine::parse(&r, "t^[oops]").is_err());
        assert!(ExtAffine::parse(&r, "s3").is_err());
    }

    #[test]
    fn affine_words_are_reduced() {
        let r = rd(Kind::G, 2);
        let a = ExtAffine::identity(2);
        let b = ExtAffine::parse(&r, "t^[2,1]*s1s2").unwrap();
        let word = reduced_affine_word(&r, &a, &b).unwrap();
        assert_eq!(word.len(), b.length(&r));
        assert_eq!(walk(&r, &a, &word), b);
    }
}
