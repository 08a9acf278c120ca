//! Newton points, Kottwitz points and standard representatives.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eaw::{self, ExtAffine};
use crate::linalg::{self, q, QMat};
use crate::rootdata::{LatticeClass, RootDatum, Weyl};
use crate::{Error, Q};

/// `A_w = (1/m)(I + w + ... + w^{m-1})` on coweight coordinates.
#[derive(Clone, Debug)]
pub struct AveragingOp {
    pub w: Weyl,
    pub order: usize,
    pub matrix: QMat,
}

impl AveragingOp {
    pub fn new(w: &Weyl) -> AveragingOp {
        let n = w.rank();
        let m = w.order();
        let mut sum = vec![vec![Q::zero(); n]; n];
        let mut p = Weyl::identity(n);
        for _ in 0..m {
            for (i, row) in sum.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x += q(p.entry(i, j));
                }
            }
            p = p.mul(w);
        }
        let inv = Q::new(1, m as i64);
        let matrix = sum.into_iter().map(|r| r.into_iter().map(|x| x * inv).collect()).collect();
        AveragingOp { w: w.clone(), order: m, matrix }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        linalg::mat_vec_q(&self.matrix, v)
    }

    /// The same operator written in the simple-coroot basis.
    pub fn coroot_matrix(&self, rd: &RootDatum) -> QMat {
        let c = linalg::to_q(&rd.cartan);
        let ci = linalg::inverse_q(&c).expect("Cartan matrix is invertible");
        linalg::mat_mul_q(&linalg::mat_mul_q(&ci, &self.matrix), &c)
    }

    pub fn kernel(&self) -> QMat {
        linalg::span_rref(&linalg::nullspace(&self.matrix))
    }

    pub fn image(&self) -> QMat {
        linalg::column_space(&self.matrix)
    }
}

/// Results of the six elementary identities for `A_w` together with the two
/// kernel/image equalities, in that order.
pub fn averaging_identities(rd: &RootDatum, w: &Weyl) -> [bool; 8] {
    let n = rd.rank;
    let a = AveragingOp::new(w);
    let wm = linalg::to_q(&w.matrix());
    let id = linalg::identity_q(n);
    let i_minus_w = linalg::sub_q(&id, &wm);
    let zero = vec![vec![Q::zero(); n]; n];
    let absorbs = linalg::mat_mul_q(&a.matrix, &wm) == a.matrix;
    let conj = rd.elements().iter().all(|u| {
        let uwu = u.mul(w).mul(&u.inverse());
        let lhs = linalg::mat_mul_q(
            &linalg::mat_mul_q(&linalg::to_q(&u.matrix()), &a.matrix),
            &linalg::to_q(&u.inverse().matrix()),
        );
        lhs == AveragingOp::new(&uwu).matrix
    });
    let idempotent = linalg::mat_mul_q(&a.matrix, &a.matrix) == a.matrix;
    let reflection_case = if w.order() == 2 && linalg::rank(&i_minus_w) == 1 {
        // self-adjoint for the invariant form, in coroot coordinates
        let g = linalg::to_q(&rd.coroot_gram());
        let p = a.coroot_matrix(rd);
        let fixed = linalg::span_rref(&linalg::nullspace(&i_minus_w));
        linalg::mat_mul_q(&g, &p) == linalg::mat_mul_q(&linalg::transpose(&p), &g) && a.image() == fixed
    } else {
        true
    };
    let kills = linalg::mat_mul_q(&a.matrix, &i_minus_w) == zero;
    let fixes = linalg::mat_mul_q(&i_minus_w, &a.matrix) == zero;
    let ker_eq = a.kernel() == linalg::column_space(&i_minus_w);
    let im_eq = a.image() == linalg::span_rref(&linalg::nullspace(&i_minus_w));
    [absorbs, conj, idempotent, reflection_case, kills, fixes, ker_eq, im_eq]
}

/// `(A_w lam)^+` for `x = t^lam w`.
pub fn newton_point(rd: &RootDatum, x: &ExtAffine) -> Vec<Q> {
    let a = AveragingOp::new(&x.w);
    rd.dominantize(&a.apply(&RootDatum::qvec(&x.lam))).0
}

/// Orthogonal projection onto `H_{alpha_i}`: `v - <alpha_i,v>/2 alpha_i^vee`.
pub fn proj_onto_wall(rd: &RootDatum, i: usize, v: &[Q]) -> Vec<Q> {
    let p = rd.pairing_q(&rd.simple_root(i), v) / q(2);
    v.iter().zip(rd.simple_coroot(i)).map(|(x, c)| x - p * q(c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonInvariants {
    #[serde(with = "linalg::serde_qvec")]
    pub nu: Vec<Q>,
    pub kappa: LatticeClass,
    /// Simple indices `i` with `<alpha_i, nu> = 0`.
    pub parabolic: Vec<usize>,
    pub integral: bool,
}

impl NewtonInvariants {
    pub fn from_parts(rd: &RootDatum, nu: Vec<Q>, kappa: LatticeClass) -> NewtonInvariants {
        let parabolic = (1..=rd.rank).filter(|&i| rd.pairing_q(&rd.simple_root(i), &nu).is_zero()).collect();
        let integral = match linalg::to_int(&nu) {
            Some(l) => rd.kottwitz_class(&l) == kappa,
            None => false,
        };
        NewtonInvariants { nu, kappa, parabolic, integral }
    }

    pub fn is_rank_one(&self) -> bool {
        self.parabolic.len() == 1
    }
}

pub fn classify(rd: &RootDatum, x: &ExtAffine) -> NewtonInvariants {
    NewtonInvariants::from_parts(rd, newton_point(rd, x), x.sheet(rd))
}

/// The standard representative for parabolics of rank at most one and for
/// the full parabolic.
pub fn standard_rep(rd: &RootDatum, inv: &NewtonInvariants) -> Result<ExtAffine, Error> {
    let n = rd.rank;
    if inv.parabolic.len() == n {
        if inv.nu.iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("full parabolic with nonzero Newton point".into()));
        }
        return Ok(eaw::omega_of_class(rd, &inv.kappa));
    }
    match inv.parabolic.as_slice() {
        [] => {
            if !inv.integral {
                return Err(Error::Invalid("regular Newton point is not integral for this Kottwitz point".into()));
            }
            Ok(ExtAffine::translation(linalg::to_int(&inv.nu).expect("integral")))
        }
        &[i] => {
            if inv.integral {
                return Ok(ExtAffine::translation(linalg::to_int(&inv.nu).expect("integral")));
            }
            let eta = eta_for(rd, i, &inv.nu);
            let Some(eta) = linalg::to_int(&eta) else {
                return Err(Error::Invalid(format!(
                    "nu + alpha_{i}^vee/2 is not a coweight; no class has these invariants"
                )));
            };
            if rd.kottwitz_class(&eta) != inv.kappa {
                return Err(Error::Invalid(format!(
                    "no class with Newton point {} and Kottwitz point {}",
                    crate::rootdata::fmt_qvec(&inv.nu),
                    inv.kappa
                )));
            }
            Ok(ExtAffine::new(eta, rd.s(i)))
        }
        _ => Err(Error::Unsupported(format!(
            "standard representatives for parabolic {:?} of rank {} are not constructed",
            inv.parabolic,
            inv.parabolic.len()
        ))),
    }
}

/// `eta = nu + alpha_i^vee / 2`.
pub fn eta_for(rd: &RootDatum, i: usize, nu: &[Q]) -> Vec<Q> {
    nu.iter().zip(rd.simple_coroot(i)).map(|(x, c)| x + Q::new(c, 2)).collect()
}

/// Outcome of the three-condition test for a standard representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StdRepCheck {
    pub kottwitz: bool,
    pub levi_length_zero: bool,
    pub levi_newton: bool,
}

impl StdRepCheck {
    pub fn holds(&self) -> bool {
        self.kottwitz && self.levi_length_zero && self.levi_newton
    }
}

/// Positive roots of the Levi with simple roots `parabolic`.
pub fn levi_roots(rd: &RootDatum, parabolic: &[usize]) -> Vec<Vec<i64>> {
    rd.pos_roots
        .iter()
        .filter(|a| a.iter().enumerate().all(|(k, &c)| c == 0 || parabolic.contains(&(k + 1))))
        .cloned()
        .collect()
}

/// Iwahori-Matsumoto length computed over the roots of a Levi.
pub fn levi_length(rd: &RootDatum, x: &ExtAffine, parabolic: &[usize]) -> usize {
    let winv = x.w.inverse();
    levi_roots(rd, parabolic)
        .iter()
        .map(|a| {
            let p = rd.pairing(a, &x.lam);
            if rd.is_positive(&winv.act_root(a)) {
                p.unsigned_abs() as usize
            } else {
                (p - 1).unsigned_abs() as usize
            }
        })
        .sum()
}

fn levi_dominantize(rd: &RootDatum, v: &[Q], parabolic: &[usize]) -> Vec<Q> {
    let mut cur = v.to_vec();
    while let Some(&i) = parabolic.iter().find(|&&i| rd.pairing_q(&rd.simple_root(i), &cur) < Q::zero()) {
        cur = rd.reflect(i, &cur);
    }
    cur
}

pub fn check_standard_rep_detail(rd: &RootDatum, b: &ExtAffine, inv: &NewtonInvariants) -> StdRepCheck {
    let kottwitz = b.sheet(rd) == inv.kappa;
    let in_levi = rd.support(&b.w).iter().all(|i| inv.parabolic.contains(i));
    let levi_length_zero = in_levi && levi_length(rd, b, &inv.parabolic) == 0;
    let avg = AveragingOp::new(&b.w).apply(&RootDatum::qvec(&b.lam));
    let levi_newton = in_levi && levi_dominantize(rd, &avg, &inv.parabolic) == inv.nu;
    StdRepCheck { kottwitz, levi_length_zero, levi_newton }
}

pub fn check_standard_rep(rd: &RootDatum, b: &ExtAffine, inv: &NewtonInvariants) -> bool {
    check_standard_rep_detail(rd, b, inv).holds()
}

/// `<2 rho, v>`.
pub fn two_rho_pairing(rd: &RootDatum, v: &[Q]) -> Q {
    rd.pairing_q(&rd.two_rho, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Kind;

    fn qv(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| Q::new(a, b)).collect()
    }

    #[test]
    fn averaging_examples() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        let a = AveragingOp::new(&a2.s(1));
        assert_eq!(a.apply(&RootDatum::qvec(&[1, 1])), qv(&[(0, 1), (3, 2)]));
        assert_eq!(AveragingOp::new(&Weyl::identity(2)).apply(&qv(&[(1, 3), (2, 1)])), qv(&[(1, 3), (2, 1)]));
        let a3 = RootDatum::new(Kind::A, 3).unwrap();
        let m = AveragingOp::new(&a3.weyl_from_word(&[1, 3])).coroot_matrix(&a3);
        let h = Q::new(1, 2);
        let z = Q::zero();
        assert_eq!(m, vec![vec![z, h, z], vec![z, q(1), z], vec![z, h, z]]);
    }

    #[test]
    fn c2_newton_points() {
        let c2 = RootDatum::new(Kind::C, 2).unwrap();
        let b = ExtAffine::parse(&c2, "t^[0,3]").unwrap();
        let inv = classify(&c2, &b);
        assert_eq!(inv.nu, RootDatum::qvec(&[0, 3]));
        assert_eq!(inv.kappa, c2.kottwitz_class(&[0, 1]));
        assert!(inv.integral);
        assert!(check_standard_rep(&c2, &b, &inv));
        let b2 = ExtAffine::parse(&c2, "t^[1,2]*s1").unwrap();
        let inv2 = classify(&c2, &b2);
        assert_eq!(inv2.nu, inv.nu);
        assert!(inv2.kappa.is_zero());
        assert!(!inv2.integral);
        assert_eq!(inv2.parabolic, vec![1]);
    }

    #[test]
    fn a2_standard_rep() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        let inv = NewtonInvariants::from_parts(&a2, qv(&[(0, 1), (3, 2)]), a2.zero_class());
        let b = standard_rep(&a2, &inv).unwrap();
        assert_eq!(b, ExtAffine::parse(&a2, "t^[1,1]*s1").unwrap());
        assert!(check_standard_rep(&a2, &b, &inv));
        let wrong = ExtAffine::parse(&a2, "t^[1,1]*s2").unwrap();
        assert!(!check_standard_rep_detail(&a2, &wrong, &inv).levi_length_zero);
        let reg = NewtonInvariants::from_parts(&a2, RootDatum::qvec(&[3, 3]), a2.zero_class());
        assert_eq!(standard_rep(&a2, &reg).unwrap(), ExtAffine::translation(vec![3, 3]));
    }

    #[test]
    fn sl4_example() {
        let a3 = RootDatum::new(Kind::A, 3).unwrap();
        let b = ExtAffine::parse(&a3, "t^[1,0,1]*s1s3").unwrap();
        let inv = classify(&a3, &b);
        assert_eq!(inv.nu, RootDatum::qvec(&[0, 1, 0]));
        assert_eq!(inv.parabolic, vec![1, 3]);
        assert!(check_standard_rep(&a3, &b, &inv));
        assert!(matches!(standard_rep(&a3, &inv), Err(Error::Unsupported(_))));
    }

    #[test]
    fn basic_classes_use_length_zero_elements() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        for c in a2.classes() {
            let inv = NewtonInvariants::from_parts(&a2, vec![Q::zero(); 2], c.clone());
            let b = standard_rep(&a2, &inv).unwrap();
            assert_eq!(b.length(&a2), 0);
            assert!(check_standard_rep(&a2, &b, &inv));
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let a2 = RootDatum::new(Kind::A, 2).unwrap();
        let p = proj_onto_wall(&a2, 1, &RootDatum::qvec(&[1, 1]));
        assert_eq!(p, qv(&[(0, 1), (3, 2)]));
        assert_eq!(proj_onto_wall(&a2, 1, &p), p);
        // proj_1(w0 zeta) = proj_1(lambda - 2 rho^vee) for lambda = (3,3), zeta = (-3,3)
        let w0z = a2.w0().act_q(&RootDatum::qvec(&[-3, 3]));
        assert_eq!(proj_onto_wall(&a2, 1, &w0z), proj_onto_wall(&a2, 1, &RootDatum::qvec(&[1, 1])));
    }

    #[test]
    fn identities_hold_in_b2() {
        let b2 = RootDatum::new(Kind::B, 2).unwrap();
        for w in b2.elements() {
            assert!(averaging_identities(&b2, w).iter().all(|&b| b));
        }
    }
}
