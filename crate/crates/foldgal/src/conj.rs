//! Transverse subspaces and conjugacy classes of rank-one standard
//! representatives in the extended affine Weyl group.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eaw::ExtAffine;
use crate::linalg::{self, IntSolve, ZMat};
use crate::newton::{self, AveragingOp};
use crate::rootdata::{LatticeClass, RootDatum, Weyl};
use crate::{Error, Q};

/// `nu + Ker A_v` for a standard representative `t^eta v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransverseSpace {
    #[serde(with = "linalg::serde_qvec")]
    pub base: Vec<Q>,
    /// Lattice basis of `Ker A_v` intersected with `R^vee`, in coweight coordinates.
    pub directions: Vec<Vec<i64>>,
}

pub fn transverse_space(rd: &RootDatum, b: &ExtAffine) -> TransverseSpace {
    let a = AveragingOp::new(&b.w);
    let base = a.apply(&RootDatum::qvec(&b.lam));
    let directions = kernel_lattice(rd, &b.w)
        .iter()
        .map(|c| linalg::mat_vec_z(&rd.cartan, c))
        .collect();
    TransverseSpace { base, directions }
}

impl TransverseSpace {
    /// Membership of a point, tested by comparing averages.
    pub fn contains(&self, v: &Weyl, p: &[Q]) -> bool {
        AveragingOp::new(v).apply(p) == self.base
    }
}

/// Lattice basis of `Ker A_v` intersected with `R^vee`, in coroot coordinates.
fn kernel_lattice(rd: &RootDatum, v: &Weyl) -> Vec<Vec<i64>> {
    let m = AveragingOp::new(v).coroot_matrix(rd);
    let den = m.iter().flatten().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let zm: ZMat = m.iter().map(|r| r.iter().map(|x| (x * Q::from_integer(den)).to_integer()).collect()).collect();
    linalg::int_kernel(&zm)
}

fn i_minus_v_coroot(rd: &RootDatum, v: &Weyl) -> ZMat {
    let m = rd.coroot_basis_matrix(v);
    let n = rd.rank;
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j) - m[i][j].to_integer()).collect())
        .collect()
}

/// A necessary congruence on coroot coordinates `c`: `row . c = 0 mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub row: Vec<i64>,
    pub modulus: i64,
}

impl Congruence {
    pub fn holds(&self, c: &[i64]) -> bool {
        let s: i64 = self.row.iter().zip(c).map(|(a, b)| a * b).sum();
        s.rem_euclid(self.modulus) == 0
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .row
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(k, &a)| match a {
                1 => format!("c{}", k + 1),
                -1 => format!("-c{}", k + 1),
                _ => format!("{a}c{}", k + 1),
            })
            .collect();
        write!(f, "{} = 0 (mod {})", terms.join(" + ").replace("+ -", "- "), self.modulus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Kernel generator in coroot coordinates.
    pub generator: Vec<i64>,
    /// Integral `d` with `(I - v) d = generator`, when one exists.
    pub solution: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillsOutCertificate {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    /// An element `c` of the kernel lattice (coroot coordinates) lies in
    /// `(I - v) R^vee` iff every congruence holds.
    pub congruences: Vec<Congruence>,
}

/// Decides `Ker A_v` intersect `R^vee` contained in `(I - v) R^vee`.
pub fn fills_out(rd: &RootDatum, v: &Weyl) -> FillsOutCertificate {
    let a = i_minus_v_coroot(rd, v);
    let (u, d, _) = linalg::smith(&a);
    let congruences = d
        .iter()
        .enumerate()
        .filter(|(_, &dk)| dk > 1)
        .map(|(k, &dk)| Congruence {
            row: u[k].iter().map(|x| x.rem_euclid(dk)).map(|x| if 2 * x > dk { x - dk } else { x }).collect(),
            modulus: dk,
        })
        .collect::<Vec<_>>();
    let witnesses: Vec<Witness> = kernel_lattice(rd, v)
        .into_iter()
        .map(|g| {
            let solution = match linalg::int_solve(&a, &g) {
                IntSolve::Solution(s) => Some(s),
                IntSolve::Obstruction { .. } => None,
            };
            Witness { generator: g, solution }
        })
        .collect();
    let holds = witnesses.iter().all(|w| w.solution.is_some());
    FillsOutCertificate { holds, witnesses, congruences }
}

/// Whether every rank-one Newton point for `P_i` with Kottwitz point `kappa`
/// is integral. This happens exactly when `<alpha_i, lambda>` is even for
/// every `lambda` in the class.
pub fn integral_exception(rd: &RootDatum, i: usize, kappa: &LatticeClass) -> bool {
    let rep = rd.class_representative(kappa);
    let row_even = rd.cartan[i - 1].iter().all(|c| c % 2 == 0);
    row_even && rd.pairing(&rd.simple_root(i), &rep) % 2 == 0
}

/// An explicit conjugator: `y = t^{d u eta} u` with `b^y = z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugator {
    pub u: Weyl,
    pub d: i64,
    pub y: ExtAffine,
}

fn rank_one_index(rd: &RootDatum, b: &ExtAffine) -> Result<usize, Error> {
    (1..=rd.rank)
        .find(|&i| b.w == rd.s(i))
        .ok_or_else(|| Error::Precondition("expected a rank-one representative t^eta s_i".into()))
}

/// Solves `b^y = z` for `b = t^eta s_i` and `z = t^zeta u s_i u^-1`.
pub fn inverse_problem(rd: &RootDatum, b: &ExtAffine, z: &ExtAffine) -> Result<Conjugator, Error> {
    let i = rank_one_index(rd, b)?;
    if z.sheet(rd) != b.sheet(rd) {
        return Err(Error::Precondition("z lies in a different Kottwitz class".into()));
    }
    let si = rd.s(i);
    let coroot = rd.simple_coroot(i);
    let mut conj_found = false;
    for u in rd.elements() {
        if u.mul(&si).mul(&u.inverse()) != z.w {
            continue;
        }
        conj_found = true;
        let diff: Vec<i64> = u.inverse().act(&z.lam).iter().zip(&b.lam).map(|(a, c)| a - c).collect();
        let Some(d) = multiple_of(&diff, &coroot) else { continue };
        let ueta = u.act(&b.lam);
        let y = ExtAffine::new(ueta.iter().map(|x| d * x).collect(), u.clone());
        if ExtAffine::conjugate(b, &y) != *z {
            return Err(Error::Internal("conjugator formula failed".into()));
        }
        return Ok(Conjugator { u: u.clone(), d, y });
    }
    if conj_found {
        Err(Error::Precondition("translation part is not on an integral translate u(eta + d alpha_i^vee)".into()))
    } else {
        Err(Error::Precondition("spherical part is not conjugate to s_i".into()))
    }
}

/// `Some(d)` with `v = d c`.
pub(crate) fn multiple_of(v: &[i64], c: &[i64]) -> Option<i64> {
    let k = c.iter().position(|&x| x != 0)?;
    if v[k] % c[k] != 0 {
        return None;
    }
    let d = v[k] / c[k];
    v.iter().zip(c).all(|(a, b)| *a == d * b).then_some(d)
}

/// Every integral coweight with all coordinates in `[-r, r]`.
pub fn box_points(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut y = p.clone();
                    y.push(x);
                    y
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct ClassWindow {
    pub radius: i64,
    /// Predicted members with a verified conjugator.
    pub members: BTreeSet<ExtAffine>,
    /// Predicted points for which no conjugator of the explicit form exists.
    pub unverified: BTreeSet<ExtAffine>,
}

/// Members `t^xi u s_i u^-1` of the class of `b = t^eta s_i` with
/// `xi in u T_nu`, `kappa(xi) = kappa(b)` and `|xi|_inf <= radius`.
pub fn conjugacy_class_window(rd: &RootDatum, b: &ExtAffine, radius: i64) -> Result<ClassWindow, Error> {
    let i = rank_one_index(rd, b)?;
    let inv = newton::classify(rd, b);
    if inv.integral {
        return Err(Error::Precondition("integral Newton point; the class is a W-orbit of translations".into()));
    }
    let si = rd.s(i);
    let nu = AveragingOp::new(&si).apply(&RootDatum::qvec(&b.lam));
    let kappa = b.sheet(rd);
    let pts: Vec<Vec<i64>> =
        box_points(rd.rank, radius).into_iter().filter(|p| rd.kottwitz_class(p) == kappa).collect();
    let predicted: BTreeSet<ExtAffine> = pts
        .par_iter()
        .flat_map_iter(|p| {
            let mut found = Vec::new();
            for u in rd.elements() {
                let back = u.inverse().act_q(&RootDatum::qvec(p));
                if newton::proj_onto_wall(rd, i, &back) == nu {
                    found.push(ExtAffine::new(p.clone(), u.mul(&si).mul(&u.inverse())));
                }
            }
            found
        })
        .collect();
    let mut out = ClassWindow { radius, ..Default::default() };
    for z in predicted {
        match inverse_problem(rd, b, &z) {
            Ok(_) => {
                out.members.insert(z);
            }
            Err(Error::Internal(e)) => return Err(Error::Internal(e)),
            Err(_) => {
                out.unverified.insert(z);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Kind;

    #[test]
    fn fills_out_examples() {
        let a3 = RootDatum::new(Kind::A, 3).unwrap();
        let cert = fills_out(&a3, &a3.weyl_from_word(&[1, 3]));
        assert!(!cert.holds);
        // the congruences on the kernel lattice say c1 - c3 is even
        for c1 in -3..=3 {
            for c3 in -3..=3 {
                let c = [c1, 0, c3];
                let ok = cert.congruences.iter().all(|g| g.holds(&c));
                assert_eq!(ok, (c1 - c3) % 2 == 0, "{c:?}");
            }
        }
        for i in 1..=3 {
            assert!(fills_out(&a3, &a3.s(i)).holds);
        }
        assert!(fills_out(&a3, &Weyl::identity(3)).holds);
        let c2 = RootDatum::new(Kind::C, 2).unwrap();
        assert!(!fills_out(&c2, &c2.s(2)).holds);
        assert!(fills_out(&c2, &c2.s(1)).holds);
        let g2 = RootDatum::new(Kind::G, 2).unwrap();
        let cert = fills_out(&g2, &g2.s(2));
        assert!(cert.holds);
    }

    #[test]
    fn exceptions() {
        let c2 = RootDatum::new(Kind::C, 2).unwrap();
        let b2 = RootDatum::new(Kind::B, 2).unwrap();
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        assert!(integral_exception(&c2, 2, &c2.zero_class()));
        assert!(!integral_exception(&c2, 1, &c2.zero_class()));
        assert!(integral_exception(&b2, 1, &b2.zero_class()));
        assert!(!integral_exception(&a2, 1, &a2.zero_class()));
    }

    #[test]
    fn inverse_problem_examples() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        let b = ExtAffine::parse(&a2, "t^[1,1]*s1").unwrap();
        let c = inverse_problem(&a2, &b, &b).unwrap();
        assert!(c.y.is_identity());
        let z = ExtAffine::parse(&a2, "t^[-3,3]*s2").unwrap();
        let c = inverse_problem(&a2, &b, &z).unwrap();
        assert_eq!(c.u, a2.weyl_from_word(&[1, 2]));
        assert_eq!(c.d, 1);
        assert_eq!(c.y, ExtAffine::parse(&a2, "t^[-2,1]*s1s2").unwrap());
        let z = ExtAffine::parse(&a2, "t^[3,0]*s1").unwrap();
        let c = inverse_problem(&a2, &b, &z).unwrap();
        assert_eq!((c.d, c.y.clone()), (1, ExtAffine::translation(vec![1, 1])));
        assert!(inverse_problem(&a2, &b, &ExtAffine::parse(&a2, "t^[1,1]*s1s2").unwrap()).is_err());
    }

    #[test]
    fn transverse_spaces() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        let t = transverse_space(&a2, &ExtAffine::parse(&a2, "t^[1,1]*s1").unwrap());
        assert_eq!(t.directions.len(), 1);
        assert!(t.directions[0] == vec![2, -1] || t.directions[0] == vec![-2, 1]);
        let p = transverse_space(&a2, &ExtAffine::translation(vec![2, 1]));
        assert!(p.directions.is_empty());
        let a3 = RootDatum::new(Kind::A, 3).unwrap();
        let s = transverse_space(&a3, &ExtAffine::parse(&a3, "t^[1,0,1]*s1s3").unwrap());
        assert_eq!(s.directions.len(), 2);
    }
}
