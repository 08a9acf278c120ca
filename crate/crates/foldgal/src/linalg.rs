//! Small dense exact linear algebra over `Q` and `Z`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Sizes here never exceed the rank of
//! a root system, so the cubic algorithms are fine.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

pub type QMat = Vec<Vec<Q>>;
pub type ZMat = Vec<Vec<i64>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn to_q(m: &ZMat) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

pub fn identity_q(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn identity_z(n: usize) -> ZMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul_q(a: &QMat, b: &QMat) -> QMat {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, t| acc + row[t] * b[t][j]))
                .collect()
        })
        .collect()
}

pub fn mat_mul_z(a: &ZMat, b: &ZMat) -> ZMat {
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| (0..m).map(|j| (0..k).map(|t| row[t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn mat_vec_q(a: &QMat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn mat_vec_z(a: &ZMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn sub_q(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(a: &QMat) -> (QMat, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return (m, Vec::new());
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let d = f * m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &QMat) -> usize {
    rref(a).1.len()
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &QMat) -> Vec<Vec<Q>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f];
            }
            v
        })
        .collect()
}

/// Canonical basis (rows of the RREF) of the span of the given vectors.
pub fn span_rref(vectors: &[Vec<Q>]) -> QMat {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, p) = rref(&vectors.to_vec());
    r.into_iter().take(p.len()).collect()
}

/// Column space basis in canonical form.
pub fn column_space(a: &QMat) -> QMat {
    span_rref(&transpose(a))
}

pub fn inverse_q(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut aug: QMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    aug = r;
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Smith normal form: returns `(u, d, v)` with `u * a * v = diag(d)` and `u`, `v`
/// unimodular. The diagonal is non-negative and each entry divides the next,
/// with zeros last.
pub fn smith(a: &ZMat) -> (ZMat, Vec<i64>, ZMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u = identity_z(rows);
    let mut v = identity_z(cols);
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            u.swap(t, bi);
            for r in m.iter_mut() {
                r.swap(t, bj);
            }
            for r in v.iter_mut() {
                r.swap(t, bj);
            }
            let mut clean = true;
            let p = m[t][t];
            for i in t + 1..rows {
                let f = Integer::div_floor(&m[i][t], &p);
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] -= f * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= f * u[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = Integer::div_floor(&m[t][j], &p);
                if f != 0 {
                    for i in 0..rows {
                        m[i][j] -= f * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= f * v[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in 0..cols {
                        m[t][j] += m[i][j];
                    }
                    for j in 0..rows {
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
    }
    let d = (0..steps).map(|t| m[t][t]).collect();
    (u, d, v)
}

/// Lattice basis of `{x in Z^n : a x = 0}` (columns of the Smith transform).
pub fn int_kernel(a: &ZMat) -> Vec<Vec<i64>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (_, d, v) = smith(a);
    (0..cols)
        .filter(|&k| k >= d.len() || d[k] == 0)
        .map(|k| v.iter().map(|row| row[k]).collect())
        .collect()
}

/// Outcome of solving `a x = b` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntSolve {
    Solution(Vec<i64>),
    /// `(u b)_k` must be divisible by `modulus` (zero means "must vanish").
    Obstruction { row: Vec<i64>, modulus: i64, value: i64 },
}

pub fn int_solve(a: &ZMat, b: &[i64]) -> IntSolve {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (u, d, v) = smith(a);
    let ub = mat_vec_z(&u, b);
    let mut e = vec![0i64; cols];
    for k in 0..rows {
        let dk = if k < d.len() { d[k] } else { 0 };
        if dk == 0 {
            if ub[k] != 0 {
                return IntSolve::Obstruction { row: u[k].clone(), modulus: 0, value: ub[k] };
            }
        } else if ub[k] % dk != 0 {
            return IntSolve::Obstruction { row: u[k].clone(), modulus: dk, value: ub[k] };
        } else {
            e[k] = ub[k] / dk;
        }
    }
    IntSolve::Solution(mat_vec_z(&v, &e))
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn to_int(v: &[Q]) -> Option<Vec<i64>> {
    is_integral(v).then(|| v.iter().map(|x| x.to_integer()).collect())
}

pub fn from_int(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?);
            (b != 0).then(|| Q::new(a, b))
        }
        None => s.parse::<i64>().ok().map(q),
    }
}

/// Serde adapter writing rational vectors as strings such as `"3/2"`.
pub mod serde_qvec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Q;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| super::parse_q(x).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{x}`"))))
            .collect()
    }
}

/// Serde adapter writing a single rational as a string.
pub mod serde_q {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Q;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_q(&raw).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{raw}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_a2_cartan() {
        let c = vec![vec![2, -1], vec![-1, 2]];
        let (u, d, v) = smith(&c);
        assert_eq!(d, vec![1, 3]);
        let prod = mat_mul_z(&mat_mul_z(&u, &c), &v);
        assert_eq!(prod, vec![vec![1, 0], vec![0, 3]]);
    }

    #[test]
    fn smith_handles_rank_deficiency() {
        let a = vec![vec![2, 0, 0], vec![0, 0, 0], vec![0, -1, 2]];
        let (u, d, v) = smith(&a);
        let prod = mat_mul_z(&mat_mul_z(&u, &a), &v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i] } else { 0 };
                assert_eq!(prod[i][j], want);
            }
        }
        assert_eq!(d.iter().filter(|&&x| x == 0).count(), 1);
        assert_eq!(int_kernel(&a).len(), 1);
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = to_q(&vec![vec![1, 2], vec![2, 4]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec_q(&a, &ns[0]).iter().all(|x| x.is_zero()));
        assert!(inverse_q(&a).is_none());
        let b = to_q(&vec![vec![2, -1], vec![-1, 2]]);
        let bi = inverse_q(&b).unwrap();
        assert_eq!(mat_mul_q(&b, &bi), identity_q(2));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_q("3/2"), Some(Q::new(3, 2)));
        assert_eq!(parse_q("-4"), Some(q(-4)));
        assert_eq!(parse_q("1/0"), None);
    }

    #[test]
    fn int_solve_reports_parity() {
        let a = vec![vec![2]];
        assert_eq!(int_solve(&a, &[4]), IntSolve::Solution(vec![2]));
        assert!(matches!(int_solve(&a, &[3]), IntSolve::Obstruction { modulus: 2, .. }));
    }
}
