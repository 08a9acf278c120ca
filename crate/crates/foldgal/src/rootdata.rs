//! Irreducible root systems with exact coordinates.
//!
//! Coweights are written in the fundamental-coweight basis, roots in the
//! simple-root basis, so `<alpha_j, varpi_k> = delta_jk` and the pairing is a
//! plain dot product. The simple coroot `alpha_i^vee` has coordinates equal to
//! column `i` of the Cartan matrix `c_ij = <alpha_i, alpha_j^vee>` (Bourbaki
//! numbering). Indices are 1-based in every public interface that talks about
//! simple reflections; vectors are 0-based.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, q, QMat, ZMat};
use crate::{Error, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Kind::A),
            "B" => Ok(Kind::B),
            "C" => Ok(Kind::C),
            "D" => Ok(Kind::D),
            "E" => Ok(Kind::E),
            "F" => Ok(Kind::F),
            "G" => Ok(Kind::G),
            other => Err(Error::Unsupported(format!("unknown root system type `{other}`"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A finite Weyl group element, stored as its integer matrix on the
/// fundamental-coweight coordinates together with the inverse matrix.
#[derive(Clone, Debug)]
pub struct Weyl {
    m: Vec<i64>,
    inv: Vec<i64>,
    n: usize,
}

impl PartialEq for Weyl {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for Weyl {}

impl std::hash::Hash for Weyl {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

impl PartialOrd for Weyl {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weyl {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.m.cmp(&other.m)
    }
}

impl Weyl {
    pub fn identity(n: usize) -> Weyl {
        let m: Vec<i64> = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
        Weyl { inv: m.clone(), m, n }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.n + j]
    }

    pub fn matrix(&self) -> ZMat {
        (0..self.n)
            .map(|i| self.m[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn inverse(&self) -> Weyl {
        Weyl { m: self.inv.clone(), inv: self.m.clone(), n: self.n }
    }

    pub fn is_identity(&self) -> bool {
        *self == Weyl::identity(self.n)
    }

    /// Composition `self * other` (apply `other` first).
    pub fn mul(&self, other: &Weyl) -> Weyl {
        Weyl { m: mul_flat(&self.m, &other.m, self.n), inv: mul_flat(&other.inv, &self.inv, self.n), n: self.n }
    }

    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.m[i * n + j] * v[j]).sum()).collect()
    }

    pub fn act_q(&self, v: &[Q]) -> Vec<Q> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).fold(Q::zero(), |acc, j| acc + v[j] * self.m[i * n + j]))
            .collect()
    }

    /// Action on a root given in simple-root coordinates.
    pub fn act_root(&self, alpha: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n).map(|k| (0..n).map(|j| alpha[j] * self.inv[j * n + k]).sum()).collect()
    }

    pub fn pow(&self, k: usize) -> Weyl {
        (0..k).fold(Weyl::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn order(&self) -> usize {
        let id = Weyl::identity(self.n);
        let mut cur = self.clone();
        let mut k = 1;
        while cur != id {
            cur = cur.mul(self);
            k += 1;
        }
        k
    }

    pub fn det(&self) -> i64 {
        let mut a = linalg::to_q(&self.matrix());
        let n = self.n;
        let mut det = Q::from_integer(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return 0 };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    let d = f * a[c][k];
                    a[r][k] -= d;
                }
            }
        }
        det.to_integer()
    }
}

fn mul_flat(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    out[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    out
}

/// An element of `Q^vee / R^vee`, in Smith-normal-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeClass {
    pub residues: Vec<i64>,
    pub moduli: Vec<i64>,
}

impl LatticeClass {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    pub fn add(&self, other: &LatticeClass) -> LatticeClass {
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(&self.moduli)
            .map(|((a, b), m)| (a + b).rem_euclid(*m))
            .collect();
        LatticeClass { residues, moduli: self.moduli.clone() }
    }

    pub fn neg(&self) -> LatticeClass {
        let residues = self.residues.iter().zip(&self.moduli).map(|(a, m)| (-a).rem_euclid(*m)).collect();
        LatticeClass { residues, moduli: self.moduli.clone() }
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.residues.iter().zip(&self.moduli).map(|(r, m)| format!("{r} mod {m}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug)]
pub struct RootDatum {
    pub kind: Kind,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_i, alpha_j^vee>`.
    pub cartan: ZMat,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    pub pos_roots: Vec<Vec<i64>>,
    /// Coroot of each positive root, in coweight coordinates.
    pub pos_coroots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    /// Sum of positive roots, simple-root coordinates.
    pub two_rho: Vec<i64>,
    /// Sum of positive coroots, coweight coordinates.
    pub two_rho_check: Vec<i64>,
    cartan_inv: QMat,
    root_index: HashMap<Vec<i64>, usize>,
    snf_u: ZMat,
    snf_u_inv: ZMat,
    class_rows: Vec<(usize, i64)>,
    w0: Weyl,
    elements: OnceLock<Vec<Weyl>>,
    pub(crate) omegas: OnceLock<Vec<crate::eaw::ExtAffine>>,
}

fn cartan_matrix(kind: Kind, n: usize) -> Result<ZMat, Error> {
    let ok = match kind {
        Kind::A => n >= 1,
        Kind::B | Kind::C => n >= 2,
        Kind::D => n >= 4,
        Kind::E => (6..=8).contains(&n),
        Kind::F => n == 4,
        Kind::G => n == 2,
    };
    if !ok {
        return Err(Error::Unsupported(format!("no irreducible root system of type {kind}{n}")));
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i - 1][j - 1] = cij;
        c[j - 1][i - 1] = cji;
    };
    match kind {
        Kind::A => (1..n).for_each(|i| link(i, i + 1, -1, -1)),
        Kind::B => {
            (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 1, n, -2, -1);
        }
        Kind::C => {
            (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 1, n, -1, -2);
        }
        Kind::D => {
            (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n, -1, -1);
        }
        Kind::E => {
            link(1, 3, -1, -1);
            link(2, 4, -1, -1);
            (3..n).for_each(|i| link(i, i + 1, -1, -1));
        }
        Kind::F => {
            link(1, 2, -1, -1);
            link(2, 3, -2, -1);
            link(3, 4, -1, -1);
        }
        Kind::G => link(1, 2, -1, -3),
    }
    Ok(c)
}

impl RootDatum {
    pub fn new(kind: Kind, rank: usize) -> Result<RootDatum, Error> {
        let cartan = cartan_matrix(kind, rank)?;
        Ok(Self::from_cartan(kind, cartan))
    }

    fn from_cartan(kind: Kind, cartan: ZMat) -> RootDatum {
        let n = cartan.len();
        let simple_coroot = |i: usize| -> Vec<i64> { (0..n).map(|r| cartan[r][i]).collect() };
        // positive roots by closure of the simple roots under simple reflections
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut coroots: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back((e, simple_coroot(i)));
        }
        while let Some((beta, cob)) = queue.pop_front() {
            for i in 0..n {
                // <beta, alpha_i^vee> = sum_j beta_j c_ji
                let p: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                if p == 0 {
                    continue;
                }
                let mut nb = beta.clone();
                nb[i] -= p;
                if nb.iter().any(|&x| x < 0) {
                    continue;
                }
                if seen.insert(nb.clone()) {
                    // s_i(beta^vee) = beta^vee - <alpha_i, beta^vee> alpha_i^vee
                    let a = cob[i];
                    let ai = simple_coroot(i);
                    let nc: Vec<i64> = (0..n).map(|k| cob[k] - a * ai[k]).collect();
                    queue.push_back((nb, nc));
                }
            }
            roots.push(beta);
            coroots.push(cob);
        }
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by_key(|&k| (roots[k].iter().sum::<i64>(), roots[k].clone()));
        let pos_roots: Vec<Vec<i64>> = order.iter().map(|&k| roots[k].clone()).collect();
        let pos_coroots: Vec<Vec<i64>> = order.iter().map(|&k| coroots[k].clone()).collect();
        let highest_root = pos_roots.last().cloned().unwrap_or_default();
        let two_rho = (0..n).map(|j| pos_roots.iter().map(|r| r[j]).sum()).collect();
        let two_rho_check = (0..n).map(|j| pos_coroots.iter().map(|r| r[j]).sum()).collect();
        let cartan_inv = linalg::inverse_q(&linalg::to_q(&cartan)).expect("Cartan matrix is invertible");
        let root_index = pos_roots.iter().enumerate().map(|(k, r)| (r.clone(), k)).collect();
        let (snf_u, d, _) = linalg::smith(&cartan);
        let snf_u_inv: ZMat = linalg::inverse_q(&linalg::to_q(&snf_u))
            .expect("unimodular")
            .iter()
            .map(|r| r.iter().map(|x| x.to_integer()).collect())
            .collect();
        let class_rows = d.iter().enumerate().filter(|(_, &dk)| dk > 1).map(|(k, &dk)| (k, dk)).collect();
        let mut rd = RootDatum {
            kind,
            rank: n,
            cartan,
            pos_roots,
            pos_coroots,
            highest_root,
            two_rho,
            two_rho_check,
            cartan_inv,
            root_index,
            snf_u,
            snf_u_inv,
            class_rows,
            w0: Weyl::identity(n),
            elements: OnceLock::new(),
            omegas: OnceLock::new(),
        };
        let mut w = Weyl::identity(n);
        loop {
            let Some(i) = (1..=n).find(|&i| rd.is_positive(&w.act_root(&rd.simple_root(i)))) else { break };
            w = w.mul(&rd.s(i));
        }
        rd.w0 = w;
        rd
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0; self.rank];
        e[i - 1] = 1;
        e
    }

    pub fn simple_coroot(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|r| self.cartan[r][i - 1]).collect()
    }

    pub fn fundamental_coweight(&self, i: usize) -> Vec<i64> {
        self.simple_root(i)
    }

    pub fn rho_check(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    /// Coefficients of the highest root (the marks `m_j`).
    pub fn marks(&self) -> &[i64] {
        &self.highest_root
    }

    pub fn is_positive(&self, root: &[i64]) -> bool {
        root.iter().all(|&x| x >= 0) && root.iter().any(|&x| x > 0)
    }

    pub fn root_id(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Coroot of any root (positive or negative), in coweight coordinates.
    pub fn coroot(&self, root: &[i64]) -> Vec<i64> {
        if let Some(k) = self.root_id(root) {
            return self.pos_coroots[k].clone();
        }
        let neg: Vec<i64> = root.iter().map(|x| -x).collect();
        let k = self.root_id(&neg).expect("not a root");
        self.pos_coroots[k].iter().map(|x| -x).collect()
    }

    pub fn pairing(&self, root: &[i64], v: &[i64]) -> i64 {
        root.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn pairing_q(&self, root: &[i64], v: &[Q]) -> Q {
        root.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + b * *a)
    }

    /// Simple reflection `s_i` (1-based).
    pub fn s(&self, i: usize) -> Weyl {
        self.reflection(&self.simple_root(i))
    }

    /// Reflection in the linear hyperplane of a root.
    pub fn reflection(&self, root: &[i64]) -> Weyl {
        let n = self.rank;
        let cr = self.coroot(root);
        let mk = |r: &[i64], c: &[i64]| -> Vec<i64> {
            let mut m = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] = i64::from(i == j) - c[i] * r[j];
                }
            }
            m
        };
        let m = mk(root, &cr);
        Weyl { inv: m.clone(), m, n }
    }

    pub fn reflect(&self, i: usize, v: &[Q]) -> Vec<Q> {
        let p = self.pairing_q(&self.simple_root(i), v);
        let c = self.simple_coroot(i);
        v.iter().zip(&c).map(|(x, &a)| x - p * a).collect()
    }

    pub fn weyl_from_word(&self, word: &[usize]) -> Weyl {
        word.iter().fold(Weyl::identity(self.rank), |acc, &i| acc.mul(&self.s(i)))
    }

    pub fn w0(&self) -> Weyl {
        self.w0.clone()
    }

    pub fn length(&self, w: &Weyl) -> usize {
        let winv = w.inverse();
        self.pos_roots.iter().filter(|a| !self.is_positive(&winv.act_root(a))).count()
    }

    /// Lexicographically least reduced word.
    pub fn reduced_word(&self, w: &Weyl) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while !cur.is_identity() {
            let inv = cur.inverse();
            let i = (1..=self.rank)
                .find(|&i| !self.is_positive(&inv.act_root(&self.simple_root(i))))
                .expect("non-identity element has a left descent");
            word.push(i);
            cur = self.s(i).mul(&cur);
        }
        word
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(&self.weyl_from_word(word)) == word.len()
    }

    /// All elements of the Weyl group, in breadth-first order.
    pub fn elements(&self) -> &[Weyl] {
        self.elements.get_or_init(|| {
            let mut out = vec![Weyl::identity(self.rank)];
            let mut seen: HashSet<Weyl> = out.iter().cloned().collect();
            let mut k = 0;
            while k < out.len() {
                for i in 1..=self.rank {
                    let x = out[k].mul(&self.s(i));
                    if seen.insert(x.clone()) {
                        out.push(x);
                    }
                }
                k += 1;
            }
            out
        })
    }

    /// Support of `w`: the simple indices occurring in a reduced word.
    pub fn support(&self, w: &Weyl) -> Vec<usize> {
        let mut s: Vec<usize> = self.reduced_word(w);
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The index `i1` with `w0 s_i w0 = s_{i1}`.
    pub fn opposite_index(&self, i: usize) -> usize {
        let a = self.w0.act_root(&self.simple_root(i));
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        neg.iter().position(|&x| x == 1).map(|k| k + 1).expect("w0 permutes -simple roots")
    }

    /// Reduced word for `w0` ending with a Coxeter element whose last letter
    /// is `i1` (the index opposite to `i`).
    pub fn tailored_w0_word(&self, i: usize) -> Result<Vec<usize>, Error> {
        if i == 0 || i > self.rank {
            return Err(Error::Invalid(format!("simple index {i} out of range 1..={}", self.rank)));
        }
        let i1 = self.opposite_index(i);
        let mut cox: Vec<usize> = (1..=self.rank).filter(|&j| j != i1).rev().collect();
        cox.push(i1);
        let c = self.weyl_from_word(&cox);
        let u = self.w0.mul(&c.inverse());
        let mut word = self.reduced_word(&u);
        word.extend(cox);
        debug_assert!(self.is_reduced(&word));
        Ok(word)
    }

    pub fn is_dominant(&self, v: &[Q]) -> bool {
        v.iter().all(|x| !x.is_negative())
    }

    /// Returns `(v+, u)` with `u v = v+` dominant.
    pub fn dominantize(&self, v: &[Q]) -> (Vec<Q>, Weyl) {
        let mut cur = v.to_vec();
        let mut u = Weyl::identity(self.rank);
        while let Some(i) = cur.iter().position(|x| x.is_negative()) {
            cur = self.reflect(i + 1, &cur);
            u = self.s(i + 1).mul(&u);
        }
        (cur, u)
    }

    /// Coordinates of `v` in the simple-coroot basis.
    pub fn coroot_coords(&self, v: &[Q]) -> Vec<Q> {
        linalg::mat_vec_q(&self.cartan_inv, v)
    }

    pub fn from_coroot_coords(&self, c: &[Q]) -> Vec<Q> {
        linalg::mat_vec_q(&linalg::to_q(&self.cartan), c)
    }

    pub fn dominance_leq(&self, v1: &[Q], v2: &[Q]) -> bool {
        let d: Vec<Q> = v2.iter().zip(v1).map(|(a, b)| a - b).collect();
        self.coroot_coords(&d).iter().all(|x| !x.is_negative())
    }

    /// Membership of `v` in the convex hull of `W xi`, for dominant `xi`.
    pub fn in_weyl_orbit_hull(&self, v: &[Q], xi: &[Q]) -> Result<bool, Error> {
        if !self.is_dominant(xi) {
            return Err(Error::Invalid("hull center must be dominant".into()));
        }
        Ok(self.dominance_leq(&self.dominantize(v).0, xi))
    }

    pub fn in_coroot_lattice(&self, v: &[Q]) -> bool {
        linalg::is_integral(v) && linalg::is_integral(&self.coroot_coords(v))
    }

    pub fn kottwitz_class(&self, lam: &[i64]) -> LatticeClass {
        let ul = linalg::mat_vec_z(&self.snf_u, lam);
        LatticeClass {
            residues: self.class_rows.iter().map(|&(k, d)| ul[k].rem_euclid(d)).collect(),
            moduli: self.class_rows.iter().map(|&(_, d)| d).collect(),
        }
    }

    pub fn kottwitz_class_q(&self, lam: &[Q]) -> Result<LatticeClass, Error> {
        let l = linalg::to_int(lam).ok_or_else(|| Error::Invalid("coweight is not integral".into()))?;
        Ok(self.kottwitz_class(&l))
    }

    pub fn zero_class(&self) -> LatticeClass {
        self.kottwitz_class(&vec![0; self.rank])
    }

    /// All classes of `Q^vee / R^vee`.
    pub fn classes(&self) -> Vec<LatticeClass> {
        let moduli: Vec<i64> = self.class_rows.iter().map(|&(_, d)| d).collect();
        let mut out = vec![Vec::new()];
        for &m in &moduli {
            out = out.into_iter().flat_map(|p: Vec<i64>| (0..m).map(move |r| {
                let mut x = p.clone();
                x.push(r);
                x
            })).collect();
        }
        out.into_iter().map(|residues| LatticeClass { residues, moduli: moduli.clone() }).collect()
    }

    /// An integral coweight in the given class.
    pub fn class_representative(&self, c: &LatticeClass) -> Vec<i64> {
        let mut r = vec![0; self.rank];
        for (&(k, _), &res) in self.class_rows.iter().zip(&c.residues) {
            r[k] = res;
        }
        linalg::mat_vec_z(&self.snf_u_inv, &r)
    }

    /// Matrix of `w` in the simple-coroot basis (columns are images).
    pub fn coroot_basis_matrix(&self, w: &Weyl) -> QMat {
        let c = linalg::to_q(&self.cartan);
        linalg::mat_mul_q(&linalg::mat_mul_q(&self.cartan_inv, &linalg::to_q(&w.matrix())), &c)
    }

    pub fn qvec(v: &[i64]) -> Vec<Q> {
        linalg::from_int(v)
    }

    /// Squared lengths of the simple coroots for a W-invariant form, scaled to
    /// coprime positive integers.
    pub fn coroot_lengths(&self) -> Vec<i64> {
        let n = self.rank;
        let mut d: Vec<Option<Q>> = vec![None; n];
        d[0] = Some(q(1));
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..n {
                    if i != j && self.cartan[i][j] != 0 {
                        if let (Some(di), None) = (d[i], d[j]) {
                            // c_ji d_j = c_ij d_i
                            d[j] = Some(di * q(self.cartan[i][j]) / q(self.cartan[j][i]));
                            changed = true;
                        }
                    }
                }
            }
        }
        let d: Vec<Q> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
        let l = d.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        let ints: Vec<i64> = d.iter().map(|x| (x * q(l)).to_integer()).collect();
        let g = linalg::gcd_all(&ints);
        ints.iter().map(|x| x / g).collect()
    }

    /// Gram matrix of a W-invariant inner product in the simple-coroot basis.
    pub fn coroot_gram(&self) -> ZMat {
        let d = self.coroot_lengths();
        let n = self.rank;
        // (a_i^v, a_j^v) = c_ji d_j / 2, scaled by 2
        (0..n).map(|i| (0..n).map(|j| self.cartan[j][i] * d[j]).collect()).collect()
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Formats a rational vector as `[a, b, ...]`.
pub fn fmt_qvec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn fmt_ivec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}
