//! Explicit positively folded galleries of type `x0 = t^lambda w0` reaching
//! non-integral rank-one Newton strata.
//!
//! The pipeline: a five-segment minimal gallery, a PRS fold of its middle
//! segment to `gamma_rho`, root operators producing `gamma_rho(c)`, and for
//! `d_i' <= 0` the unfold/refold repair `gamma''`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::conj::multiple_of;
use crate::eaw::{self, ExtAffine, Hyperplane};
use crate::gallery::{
    self, Action, ChimneySpec, FoldStats, Gallery, GalleryRecord, Orientation, Passage, VertexGallery,
};
use crate::linalg::q;
use crate::newton::{self, NewtonInvariants};
use crate::rootdata::{fmt_qvec, RootDatum};
use crate::{Error, Q};

/// The base minimal gallery and the bookkeeping needed downstream.
#[derive(Clone, Debug)]
pub struct PipelineState {
    pub lambda: Vec<i64>,
    pub x0: ExtAffine,
    pub i: usize,
    pub i1: usize,
    /// `(i_1, i_2, ..., i_n)`.
    pub order: Vec<usize>,
    /// Reduced word `k_1 .. k_l` for `w0` ending in `s_{i_n} .. s_{i_1}`.
    pub w0_word: Vec<usize>,
    pub gamma: Gallery,
    pub segments: [Range<usize>; 5],
    /// Panel index of the final crossing of segment (4).
    pub marked: usize,
}

fn check_shrunken(rd: &RootDatum, lambda: &[i64]) -> Result<(), Error> {
    let x0 = ExtAffine::new(lambda.to_vec(), rd.w0());
    let p = eaw::interior_point(rd, &x0);
    let ok = rd.pos_roots.iter().all(|a| rd.pairing_q(a, &p) > q(1));
    if !ok {
        return Err(Error::Precondition(format!(
            "t^{}*w0 is not in the shrunken dominant chamber",
            crate::rootdata::fmt_ivec(lambda)
        )));
    }
    let xi: Vec<i64> = lambda.iter().zip(rd.rho_check()).map(|(a, b)| a - 2 * b).collect();
    if xi.iter().any(|&x| x < 0) {
        return Err(Error::Precondition("lambda - 2 rho^vee must be dominant".into()));
    }
    Ok(())
}

/// `z = t^zeta s_{i1}` with `zeta = rho^vee + w0 s_i (lambda - rho^vee)`.
pub fn z_formula(rd: &RootDatum, lambda: &[i64], i: usize) -> ExtAffine {
    let rho = rd.rho_check();
    let shifted: Vec<i64> = lambda.iter().zip(&rho).map(|(a, b)| a - b).collect();
    let u = rd.w0().mul(&rd.s(i));
    let zeta: Vec<i64> = u.act(&shifted).iter().zip(&rho).map(|(a, b)| a + b).collect();
    ExtAffine::new(zeta, rd.s(rd.opposite_index(i)))
}

fn walk_hyperplanes(rd: &RootDatum, start: &ExtAffine, targets: &[Hyperplane]) -> Result<Vec<usize>, Error> {
    let mut cur = start.clone();
    let mut word = Vec::with_capacity(targets.len());
    for h in targets {
        let t = (0..=rd.rank)
            .find(|&t| eaw::wall(rd, &cur, t) == *h)
            .ok_or_else(|| Error::Internal(format!("no wall of the current alcove lies in {h}")))?;
        cur = cur.mul(&eaw::simple_reflection(rd, t));
        word.push(t);
    }
    Ok(word)
}

pub fn build_base_gallery(rd: &RootDatum, lambda: &[i64], i: usize) -> Result<PipelineState, Error> {
    let n = rd.rank;
    if n < 2 {
        return Err(Error::Precondition("the construction needs rank at least 2".into()));
    }
    if lambda.len() != n {
        return Err(Error::Invalid(format!("lambda has {} coordinates, expected {n}", lambda.len())));
    }
    if i == 0 || i > n {
        return Err(Error::Invalid(format!("wall index {i} out of range 1..={n}")));
    }
    check_shrunken(rd, lambda)?;
    let kappa = rd.kottwitz_class(lambda);
    let w0 = rd.w0();
    let rho = rd.rho_check();
    let lmr: Vec<i64> = lambda.iter().zip(&rho).map(|(a, b)| a - b).collect();
    let x0 = ExtAffine::new(lambda.to_vec(), w0.clone());
    let i1 = rd.opposite_index(i);
    let mut order = vec![i1];
    order.extend((1..=n).filter(|&j| j != i1));
    let w0_word = rd.tailored_w0_word(i)?;

    let a0 = eaw::omega_of_class(rd, &kappa);
    let a1 = eaw::alcove_in_sheet(rd, &ExtAffine::new(rho.clone(), w0.clone()), &kappa);
    let a2 = eaw::alcove_in_sheet(rd, &ExtAffine::translation(rho.clone()), &kappa);
    let a3 = eaw::alcove_in_sheet(rd, &ExtAffine::new(lmr.clone(), w0.clone()), &kappa);
    let a4 = eaw::alcove_in_sheet(rd, &ExtAffine::translation(lmr.clone()), &kappa);

    let seg1 = eaw::reduced_affine_word(rd, &a0, &a1)?;

    let t_rho = ExtAffine::translation(rho.clone());
    let mut prefix = crate::Weyl::identity(n);
    let mut targets = Vec::with_capacity(w0_word.len());
    for &k in &w0_word {
        let h = ExtAffine::spherical(prefix.clone()).act_hyperplane(&Hyperplane::new(rd.simple_root(k), 0));
        targets.push(t_rho.act_hyperplane(&h));
        prefix = prefix.mul(&rd.s(k));
    }
    let seg2 = walk_hyperplanes(rd, &a1, &targets)?;
    if eaw::walk(rd, &a1, &seg2) != a2 {
        return Err(Error::Internal("the opposite gallery does not end at the identity position".into()));
    }

    let seg3 = eaw::reduced_affine_word(rd, &a2, &a3)?;

    let ai = rd.simple_root(i);
    let hi = Hyperplane::new(ai.clone(), rd.pairing(&ai, &lmr));
    let last = (0..=n)
        .find(|&t| eaw::wall(rd, &a4, t) == hi)
        .ok_or_else(|| Error::Internal("no wall of the identity position at lambda - rho lies in the alpha_i wall".into()))?;
    let before = a4.mul(&eaw::simple_reflection(rd, last));
    let mut seg4 = eaw::reduced_affine_word(rd, &a3, &before)?;
    seg4.push(last);

    let seg5 = eaw::reduced_affine_word(rd, &a4, &x0)?;

    let lens = [seg1.len(), seg2.len(), seg3.len(), seg4.len(), seg5.len()];
    let mut bounds = [0usize; 6];
    for k in 0..5 {
        bounds[k + 1] = bounds[k] + lens[k];
    }
    let segments = [
        bounds[0]..bounds[1],
        bounds[1]..bounds[2],
        bounds[2]..bounds[3],
        bounds[3]..bounds[4],
        bounds[4]..bounds[5],
    ];
    let types: Vec<usize> = [seg1, seg2, seg3, seg4, seg5].concat();
    if types.len() != x0.length(rd) {
        return Err(Error::Internal(format!(
            "concatenated gallery has length {} but l(x0) = {}",
            types.len(),
            x0.length(rd)
        )));
    }
    let gamma = Gallery::unfolded(a0, types);
    debug_assert_eq!(gamma.end(rd), x0);
    let marked = bounds[4] - 1;
    Ok(PipelineState { lambda: lambda.to_vec(), x0, i, i1, order, w0_word, gamma, segments, marked })
}

impl PipelineState {
    pub fn new(rd: &RootDatum, lambda: &[i64], i: usize) -> Result<PipelineState, Error> {
        build_base_gallery(rd, lambda, i)
    }

    pub fn xi(&self, rd: &RootDatum) -> Vec<i64> {
        self.lambda.iter().zip(rd.rho_check()).map(|(a, b)| a - 2 * b).collect()
    }

    pub fn z(&self, rd: &RootDatum) -> ExtAffine {
        z_formula(rd, &self.lambda, self.i)
    }

    pub fn zeta(&self, rd: &RootDatum) -> Vec<i64> {
        self.z(rd).lam
    }

    /// `alpha'_{i_j} = -w0 alpha_{i_j}`, as a simple index.
    pub fn alpha_prime(&self, rd: &RootDatum, j: usize) -> usize {
        rd.opposite_index(self.order[j - 1])
    }

    /// `M_j' = <alpha'_{i_j}, w0 zeta>`.
    pub fn m_prime(&self, rd: &RootDatum, j: usize) -> i64 {
        let w0zeta = rd.w0().act(&self.zeta(rd));
        rd.pairing(&rd.simple_root(self.alpha_prime(rd, j)), &w0zeta)
    }

    /// `M_j = <alpha'_{i_j}, lambda - 2 rho^vee>`.
    pub fn m_bound(&self, rd: &RootDatum, j: usize) -> i64 {
        rd.pairing(&rd.simple_root(self.alpha_prime(rd, j)), &self.xi(rd))
    }
}

/// Folds the first `l(w0) - 1` crossings of the middle segment.
pub fn fold_first_target(rd: &RootDatum, st: &PipelineState) -> Result<(Gallery, ExtAffine), Error> {
    let start = st.segments[1].start;
    let mut g = st.gamma.clone();
    for k in 0..st.w0_word.len() - 1 {
        g = g.prs_fold(start + k)?;
    }
    let z = st.z(rd);
    if g.end(rd) != z {
        return Err(Error::Internal(format!("folded gallery ends at {} instead of {}", g.end(rd).to_text(rd), z.to_text(rd))));
    }
    Ok((g, z))
}

/// The non-integral rank-one data `nu = proj_i(lambda - 2 rho^vee)` and `b_nu`.
pub fn first_target_class(rd: &RootDatum, st: &PipelineState) -> Result<(NewtonInvariants, ExtAffine), Error> {
    let nu = newton::proj_onto_wall(rd, st.i, &RootDatum::qvec(&st.xi(rd)));
    let inv = NewtonInvariants::from_parts(rd, nu, rd.kottwitz_class(&st.lambda));
    rank_one_target(rd, st, &inv)
}

fn rank_one_target(rd: &RootDatum, st: &PipelineState, inv: &NewtonInvariants) -> Result<(NewtonInvariants, ExtAffine), Error> {
    if inv.parabolic != [st.i] {
        return Err(Error::Precondition(format!(
            "Newton point {} does not have parabolic P_{}",
            fmt_qvec(&inv.nu),
            st.i
        )));
    }
    if inv.integral {
        return Err(Error::Precondition(format!("Newton point {} is integral", fmt_qvec(&inv.nu))));
    }
    let b = newton::standard_rep(rd, inv).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok((inv.clone(), b))
}

/// `y = t^{d u eta} u` for `u = w0 s_i`, where `s_i w0 zeta - eta = d alpha_i^vee`.
fn conjugator(rd: &RootDatum, i: usize, zeta: &[i64], eta: &[i64]) -> Result<(i64, Vec<i64>, ExtAffine), Error> {
    let u = rd.w0().mul(&rd.s(i));
    let back = u.inverse().act(zeta);
    let diff: Vec<i64> = back.iter().zip(eta).map(|(a, b)| a - b).collect();
    let d = multiple_of(&diff, &rd.simple_coroot(i))
        .ok_or_else(|| Error::Internal("s_i w0 zeta - eta is not a multiple of alpha_i^vee".into()))?;
    let mu: Vec<i64> = u.act(eta).iter().map(|x| d * x).collect();
    Ok((d, mu.clone(), ExtAffine::new(mu, u)))
}

/// Standard chimney `(P_i, y)` orientation.
pub fn chimney(rd: &RootDatum, i: usize, y: &ExtAffine) -> Orientation {
    Orientation::new(rd, ChimneySpec::new(vec![i], y.clone()))
}

#[derive(Clone, Debug)]
pub struct FirstTarget {
    pub nu: Vec<Q>,
    pub b: ExtAffine,
    pub d: i64,
    pub mu: Vec<i64>,
    pub y: ExtAffine,
    pub gallery: Gallery,
    pub stats: FoldStats,
    pub positively_folded: bool,
}

pub fn first_target_certificate(rd: &RootDatum, st: &PipelineState) -> Result<FirstTarget, Error> {
    if rd.pairing(&rd.simple_root(st.i), &st.lambda) % 2 == 0 {
        return Err(Error::Precondition(format!(
            "<alpha_{}, lambda> is even, so the Newton point is integral",
            st.i
        )));
    }
    let (inv, b) = first_target_class(rd, st)?;
    let (gamma_rho, z) = fold_first_target(rd, st)?;
    let (d, mu, y) = conjugator(rd, st.i, &z.lam, &b.lam)?;
    if ExtAffine::conjugate(&b, &y) != z {
        return Err(Error::Internal("y b y^-1 differs from z".into()));
    }
    let o = chimney(rd, st.i, &y);
    let stats = gallery::fold_stats(rd, &gamma_rho, &o);
    Ok(FirstTarget {
        nu: inv.nu,
        b,
        d,
        mu,
        y,
        gallery: gamma_rho,
        positively_folded: stats.negative_folds == 0,
        stats,
    })
}

/// `gamma_rho(c_2, .., c_n)` via `w0 . f^{c_n} .. f^{c_2} (w0 gamma_rho^#)`.
pub fn apply_root_ops(
    rd: &RootDatum,
    st: &PipelineState,
    gamma_rho: &Gallery,
    c: &[i64],
) -> Result<(Gallery, ExtAffine), Error> {
    let n = rd.rank;
    if c.len() != n - 1 {
        return Err(Error::Invalid(format!("expected {} root-operator exponents, got {}", n - 1, c.len())));
    }
    let w0 = ExtAffine::spherical(rd.w0());
    let mut sigma = VertexGallery::sharp(rd, gamma_rho).left_mul(&w0);
    for j in 2..=n {
        let cj = c[j - 2];
        let mj = st.m_prime(rd, j);
        if cj < 0 || cj > mj {
            return Err(Error::Invalid(format!("c_{j} = {cj} outside 0..={mj} (M_{j}')")));
        }
        let alpha = rd.simple_root(st.alpha_prime(rd, j));
        for _ in 0..cj {
            sigma = gallery::root_operator_f(rd, &sigma, &alpha)?
                .ok_or_else(|| Error::Internal(format!("root operator undefined before M_{j}' applications")))?;
        }
    }
    let g = sigma.left_mul(&w0).gallery;
    let mut zeta = st.zeta(rd);
    for j in 2..=n {
        let cv = rd.simple_coroot(st.order[j - 1]);
        for (z, v) in zeta.iter_mut().zip(cv) {
            *z += c[j - 2] * v;
        }
    }
    let z = ExtAffine::new(zeta, rd.s(st.i1));
    if g.end(rd) != z {
        return Err(Error::Internal(format!("root operators end at {} instead of {}", g.end(rd).to_text(rd), z.to_text(rd))));
    }
    Ok((g, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `d_i' >= 1`: `gamma_rho(c)` with `y'`.
    Direct,
    /// `d_i' <= 0`: the repaired gallery `gamma''` with `y''`.
    Repair,
}

#[derive(Clone, Debug)]
pub struct LowerTarget {
    pub nu: Vec<Q>,
    pub b: ExtAffine,
    /// `(d_1, .., d_n)` with `lambda - 2 rho^vee - eta' = sum d_j alpha'_{i_j}^vee`.
    pub d: Vec<i64>,
    /// Whether `0 <= d_j <= <alpha'_{i_j}, lambda - 2 rho^vee>` for every `j`.
    pub within_m: bool,
    /// `(c_2, .., c_n)`.
    pub c: Vec<i64>,
    pub zeta: Vec<i64>,
    pub d_i: i64,
    pub mu: Vec<i64>,
    pub y: ExtAffine,
    pub branch: Branch,
}

pub fn solve_lower_target(rd: &RootDatum, st: &PipelineState, nu_prime: &[Q]) -> Result<LowerTarget, Error> {
    let n = rd.rank;
    if nu_prime.len() != n {
        return Err(Error::Invalid(format!("nu' has {} coordinates, expected {n}", nu_prime.len())));
    }
    let kappa = rd.kottwitz_class(&st.lambda);
    let inv = NewtonInvariants::from_parts(rd, nu_prime.to_vec(), kappa);
    if !rd.is_dominant(nu_prime) {
        return Err(Error::Precondition(format!("nu' = {} is not dominant", fmt_qvec(nu_prime))));
    }
    let (_, b) = rank_one_target(rd, st, &inv)?;
    let xi = st.xi(rd);
    if !rd.in_weyl_orbit_hull(nu_prime, &RootDatum::qvec(&xi))? {
        return Err(Error::Precondition(format!(
            "nu' = {} is outside Conv(W(lambda - 2 rho^vee))",
            fmt_qvec(nu_prime)
        )));
    }
    let eta = b.lam.clone();
    let diff: Vec<Q> = xi.iter().zip(&eta).map(|(a, e)| q(a - e)).collect();
    let coords = rd.coroot_coords(&diff);
    let mut d = Vec::with_capacity(n);
    for j in 1..=n {
        let k = st.alpha_prime(rd, j);
        let x = coords[k - 1];
        if !x.is_integer() {
            return Err(Error::Internal(format!("lower-target decomposition is not integral (d_{j} = {x})")));
        }
        let x = x.to_integer();
        if x < 0 {
            return Err(Error::Internal(format!("d_{j} = {x} is negative although eta' <= lambda - 2 rho^vee")));
        }
        if j >= 2 && x > st.m_prime(rd, j) {
            return Err(Error::Unsupported(format!(
                "d_{j} = {x} exceeds M_{j}' = {}; root operators cannot reach this target",
                st.m_prime(rd, j)
            )));
        }
        d.push(x);
    }
    let within_m = (1..=n).all(|j| d[j - 1] <= st.m_bound(rd, j));
    let c: Vec<i64> = d[1..].to_vec();
    let mut zeta = st.zeta(rd);
    for j in 2..=n {
        for (z, v) in zeta.iter_mut().zip(rd.simple_coroot(st.order[j - 1])) {
            *z += c[j - 2] * v;
        }
    }
    let w0zeta = rd.w0().act(&zeta);
    if newton::proj_onto_wall(rd, st.i, &RootDatum::qvec(&w0zeta)) != nu_prime {
        return Err(Error::Internal("proj_i(w0 zeta') differs from nu'".into()));
    }
    let (d_i, mu, y) = conjugator(rd, st.i, &zeta, &eta)?;
    let branch = if d_i >= 1 { Branch::Direct } else { Branch::Repair };
    Ok(LowerTarget { nu: nu_prime.to_vec(), b, d, within_m, c, zeta, d_i, mu, y, branch })
}

#[derive(Clone, Debug)]
pub struct Repair {
    pub gallery: Gallery,
    pub z: ExtAffine,
    pub y: ExtAffine,
    pub mu: Vec<i64>,
    /// Panel index that was unfolded.
    pub unfolded: usize,
    /// Panel index of the new fold and its hyperplane.
    pub refolded: usize,
    pub hyperplane: Hyperplane,
}

/// The `d_i' <= 0` repair: undo the last fold in `H_{alpha_{i1},1}`, then
/// fold at the image of the marked panel.
pub fn build_gamma_pp(rd: &RootDatum, st: &PipelineState, gamma_c: &Gallery, lt: &LowerTarget) -> Result<Repair, Error> {
    if lt.d_i >= 1 {
        return Err(Error::Precondition(format!("d_i' = {} >= 1; use the direct branch", lt.d_i)));
    }
    let a1 = rd.simple_root(st.i1);
    let h1 = Hyperplane::new(a1.clone(), 1);
    let tr = gamma_c.trace(rd);
    let p = (0..gamma_c.len())
        .rev()
        .find(|&j| gamma_c.mask[j] == Action::Fold && tr.panels[j] == h1)
        .ok_or_else(|| Error::Internal("no fold in H_{alpha_i1,1}".into()))?;
    let plus = gamma_c.unfold(p)?;
    let k = -2 * lt.d_i + 2;
    let target = Hyperplane::new(a1.clone(), k);
    let last_fold = plus.folds().last().copied().unwrap_or(0);
    let crosses_down = |j: usize| gallery::passage(rd, &plus, j) == (target.clone(), Passage::TowardAntidominant);
    let at = if st.marked > last_fold && crosses_down(st.marked) {
        st.marked
    } else {
        (last_fold + 1..plus.len()).rev().find(|&j| crosses_down(j)).ok_or_else(|| {
            Error::Unsupported(format!(
                "repair needs a crossing of {target} toward the antidominant side after the last fold, and there is none"
            ))
        })?
    };
    let g = plus.prs_fold(at)?;
    let zeta: Vec<i64> =
        lt.zeta.iter().zip(rd.simple_coroot(st.i1)).map(|(z, c)| z + (-2 * lt.d_i + 1) * c).collect();
    let z = ExtAffine::new(zeta, rd.s(st.i1));
    if g.end(rd) != z {
        return Err(Error::Internal(format!("repaired gallery ends at {} instead of {}", g.end(rd).to_text(rd), z.to_text(rd))));
    }
    let u = rd.w0().mul(&rd.s(st.i));
    let mu: Vec<i64> = u.act(&lt.b.lam).iter().map(|x| (1 - lt.d_i) * x).collect();
    let y = ExtAffine::new(mu.clone(), u);
    Ok(Repair { gallery: g, z, y, mu, unfolded: p, refolded: at, hyperplane: target })
}

/// A verified gallery certificate for `X_{x0}(b) != empty`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root_datum: String,
    pub x0: String,
    pub i: usize,
    pub nu_prime: Vec<String>,
    pub branch: Branch,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub y: String,
    pub gallery: GalleryRecord,
    pub stats: FoldStats,
}

/// Runs the full construction for `nu'` (the top target when `None`).
pub fn certify(rd: &RootDatum, lambda: &[i64], i: usize, nu_prime: Option<&[Q]>) -> Result<Certificate, Error> {
    let st = build_base_gallery(rd, lambda, i)?;
    let (gamma_rho, _) = fold_first_target(rd, &st)?;
    let nu = match nu_prime {
        Some(v) => v.to_vec(),
        None => {
            if rd.pairing(&rd.simple_root(i), lambda) % 2 == 0 {
                return Err(Error::Precondition(format!("<alpha_{i}, lambda> is even, so the Newton point is integral")));
            }
            first_target_class(rd, &st)?.0.nu
        }
    };
    let lt = solve_lower_target(rd, &st, &nu)?;
    let (gamma_c, _) = apply_root_ops(rd, &st, &gamma_rho, &lt.c)?;
    let (g, y) = match lt.branch {
        Branch::Direct => (gamma_c, lt.y.clone()),
        Branch::Repair => {
            let r = build_gamma_pp(rd, &st, &gamma_c, &lt)?;
            (r.gallery, r.y)
        }
    };
    let o = chimney(rd, i, &y);
    let stats = gallery::fold_stats(rd, &g, &o);
    if stats.negative_folds != 0 {
        return Err(Error::Internal(format!("constructed gallery has {} negative folds", stats.negative_folds)));
    }
    if g.end(rd) != ExtAffine::conjugate(&lt.b, &y) {
        return Err(Error::Internal("end alcove is not y b y^-1".into()));
    }
    Ok(Certificate {
        root_datum: rd.name(),
        x0: st.x0.to_text(rd),
        i,
        nu_prime: nu.iter().map(|x| x.to_string()).collect(),
        branch: lt.branch,
        c: lt.c,
        d: lt.d,
        y: y.to_text(rd),
        gallery: g.record(rd),
        stats,
    })
}

/// Every non-integral Newton point with parabolic `P_i` in
/// `Conv(W(lambda - 2 rho^vee))` whose standard representative lies in the
/// class of `lambda`.
pub fn lower_targets(rd: &RootDatum, lambda: &[i64], i: usize) -> Result<Vec<Vec<Q>>, Error> {
    let xi: Vec<i64> = lambda.iter().zip(rd.rho_check()).map(|(a, b)| a - 2 * b).collect();
    let kappa = rd.kottwitz_class(lambda);
    let xiq = RootDatum::qvec(&xi);
    let cap: i64 = xi.iter().map(|x| x.abs()).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    // eta' = nu' + alpha_i^vee / 2 is an integral coweight on H_{alpha_i,1}
    for eta in crate::conj::box_points(rd.rank, 2 * cap + 2) {
        if rd.pairing(&rd.simple_root(i), &eta) != 1 || rd.kottwitz_class(&eta) != kappa {
            continue;
        }
        let nu = newton::proj_onto_wall(rd, i, &RootDatum::qvec(&eta));
        let inv = NewtonInvariants::from_parts(rd, nu.clone(), kappa.clone());
        if inv.parabolic != [i] || inv.integral || !rd.is_dominant(&nu) {
            continue;
        }
        if rd.in_weyl_orbit_hull(&nu, &xiq)? {
            out.push(nu);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Kind;

    fn a2() -> RootDatum {
        RootDatum::new(Kind::A, 2).unwrap()
    }

    #[test]
    fn base_gallery_a2() {
        let r = a2();
        let st = build_base_gallery(&r, &[3, 3], 1).unwrap();
        assert_eq!(st.gamma.len(), 9);
        assert_eq!(st.w0_word, vec![2, 1, 2]);
        assert_eq!(st.order, vec![2, 1]);
        let (h, dir) = gallery::passage(&r, &st.gamma, st.marked);
        assert_eq!(h, Hyperplane::new(vec![1, 0], 2));
        assert_eq!(dir, Passage::TowardDominant);
        assert!(build_base_gallery(&RootDatum::new(Kind::A, 1).unwrap(), &[5], 1).is_err());
        assert!(build_base_gallery(&r, &[1, 3], 1).is_err());
    }

    #[test]
    fn first_target_a2() {
        let r = a2();
        let st = build_base_gallery(&r, &[3, 3], 1).unwrap();
        let (g, z) = fold_first_target(&r, &st).unwrap();
        assert_eq!(z.to_text(&r), "t^[-3,3]*s2");
        let tr = g.trace(&r);
        let fold_planes: Vec<Hyperplane> = g.folds().iter().map(|&j| tr.panels[j].clone()).collect();
        assert_eq!(fold_planes, vec![Hyperplane::new(vec![0, 1], 1), Hyperplane::new(vec![1, 0], 1)]);
        let ft = first_target_certificate(&r, &st).unwrap();
        assert_eq!(ft.d, 1);
        assert_eq!(ft.mu, vec![-2, 1]);
        assert_eq!(ft.y.to_text(&r), "t^[-2,1]*s1s2");
        assert!(ft.positively_folded);
        let even = build_base_gallery(&r, &[4, 3], 1).unwrap();
        assert!(matches!(first_target_certificate(&r, &even), Err(Error::Precondition(_))));
    }

    #[test]
    fn gamma_rho_folds_are_negative_for_the_plain_chimney() {
        let r = a2();
        let st = build_base_gallery(&r, &[3, 3], 1).unwrap();
        let (g, _) = fold_first_target(&r, &st).unwrap();
        let o = chimney(&r, 1, &ExtAffine::identity(2));
        let signs = gallery::panel_signs(&r, &g, &o);
        assert!(g.folds().iter().all(|&j| signs[j] < 0));
    }

    #[test]
    fn marked_panel_after_folding() {
        let r = a2();
        let st = build_base_gallery(&r, &[3, 3], 1).unwrap();
        let (g, z) = fold_first_target(&r, &st).unwrap();
        let (h, dir) = gallery::passage(&r, &g, st.marked);
        let k = r.pairing(&r.simple_root(2), &z.lam) - 1;
        assert_eq!(h, Hyperplane::new(vec![0, 1], k));
        assert_eq!(k, 2);
        assert_eq!(dir, Passage::TowardDominant);
        assert!(g.folds().iter().all(|&f| f < st.marked));
    }

    #[test]
    fn root_ops_move_the_end() {
        let r = a2();
        let st = build_base_gallery(&r, &[4, 5], 1).unwrap();
        let (g, _) = fold_first_target(&r, &st).unwrap();
        let (same, _) = apply_root_ops(&r, &st, &g, &[0]).unwrap();
        assert_eq!(same, g);
        let m = st.m_prime(&r, 2);
        assert!(m >= 2);
        let (g2, z2) = apply_root_ops(&r, &st, &g, &[2]).unwrap();
        assert_eq!(g2.types, g.types);
        assert_eq!(z2.lam, {
            let z = st.zeta(&r);
            vec![z[0] + 4, z[1] - 2]
        });
        assert!(apply_root_ops(&r, &st, &g, &[m + 1]).is_err());
    }

    #[test]
    fn top_target_matches_first_target() {
        let r = a2();
        let st = build_base_gallery(&r, &[3, 3], 1).unwrap();
        let lt = solve_lower_target(&r, &st, &[q(0), Q::new(3, 2)]).unwrap();
        assert_eq!(lt.c, vec![0]);
        assert_eq!(lt.d_i, 1);
        assert_eq!(lt.branch, Branch::Direct);
        // (0, 1/2) has eta' = (1, 0), which lies outside the coroot lattice
        let bad = solve_lower_target(&r, &st, &[q(0), Q::new(1, 2)]);
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn certificates_round_trip_as_json() {
        let r = a2();
        let c = certify(&r, &[3, 3], 1, None).unwrap();
        assert_eq!(c.y, "t^[-2,1]*s1s2");
        let js = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
    }
}
