//! Exhaustive search for positively folded galleries, nonemptiness verdicts
//! and dimension lower bounds for affine Deligne-Lusztig varieties.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{self, Certificate};
use crate::eaw::{self, ExtAffine};
use crate::gallery::{self, Action, ChimneySpec, FoldStats, Gallery, Orientation};
use crate::newton::{self, NewtonInvariants};
use crate::rootdata::RootDatum;
use crate::{Error, Q};

pub const DEFAULT_CAP: usize = 20;

/// Prefix depth at which the mask tree is split across workers.
const SPLIT_DEPTH: usize = 6;

fn check_cap(len: usize, cap: usize) -> Result<(), Error> {
    if len > cap || len > 63 {
        return Err(Error::CapExceeded { len, cap, masks: 1u128 << len.min(127) });
    }
    Ok(())
}

struct Search<'a> {
    rd: &'a RootDatum,
    types: &'a [usize],
    o: &'a Orientation,
    end: Option<&'a ExtAffine>,
}

impl Search<'_> {
    /// Depth-first over masks below `prefix`; a fold is only taken on the `+` side.
    fn run(&self, pos: usize, cur: ExtAffine, mask: u64, out: &mut Vec<u64>) {
        if pos == self.types.len() {
            if self.end.is_none_or(|e| *e == cur) {
                out.push(mask);
            }
            return;
        }
        let t = self.types[pos];
        let next = cur.mul(&eaw::simple_reflection(self.rd, t));
        self.run(pos + 1, next, mask, out);
        let h = eaw::wall(self.rd, &cur, t);
        if self.o.sign(&cur, &h) > 0 {
            self.run(pos + 1, cur, mask | (1 << pos), out);
        }
    }

    fn prefixes(&self, start: &ExtAffine, depth: usize) -> Vec<(ExtAffine, u64)> {
        let mut level = vec![(start.clone(), 0u64)];
        for pos in 0..depth {
            let t = self.types[pos];
            let mut next = Vec::with_capacity(level.len() * 2);
            for (cur, mask) in level {
                next.push((cur.mul(&eaw::simple_reflection(self.rd, t)), mask));
                let h = eaw::wall(self.rd, &cur, t);
                if self.o.sign(&cur, &h) > 0 {
                    next.push((cur, mask | (1 << pos)));
                }
            }
            level = next;
        }
        level
    }
}

fn mask_to_gallery(start: &ExtAffine, types: &[usize], mask: u64) -> Gallery {
    let mask = (0..types.len()).map(|j| if mask >> j & 1 == 1 { Action::Fold } else { Action::Cross }).collect();
    Gallery { start: start.clone(), types: types.to_vec(), mask }
}

/// All positively folded galleries of the given type from `start`,
/// optionally ending at `end`; ordered by mask with crossings first.
pub fn enumerate_folded(
    rd: &RootDatum,
    types: &[usize],
    start: &ExtAffine,
    o: &Orientation,
    end: Option<&ExtAffine>,
    cap: usize,
) -> Result<Vec<Gallery>, Error> {
    check_cap(types.len(), cap)?;
    let s = Search { rd, types, o, end };
    let depth = SPLIT_DEPTH.min(types.len());
    let prefixes = s.prefixes(start, depth);
    let masks: Vec<Vec<u64>> = prefixes
        .into_par_iter()
        .map(|(cur, mask)| {
            let mut out = Vec::new();
            s.run(depth, cur, mask, &mut out);
            out
        })
        .collect();
    Ok(masks.into_iter().flatten().map(|m| mask_to_gallery(start, types, m)).collect())
}

/// The same set, by testing every one of the `2^l` masks independently.
pub fn enumerate_unpruned(
    rd: &RootDatum,
    types: &[usize],
    start: &ExtAffine,
    o: &Orientation,
    end: Option<&ExtAffine>,
    cap: usize,
) -> Result<Vec<Gallery>, Error> {
    check_cap(types.len(), cap)?;
    let total: u64 = 1 << types.len();
    let mut found: Vec<(Vec<Action>, Gallery)> = (0..total)
        .into_par_iter()
        .filter_map(|m| {
            let g = mask_to_gallery(start, types, m);
            let ok = gallery::is_positively_folded(rd, &g, o) && end.is_none_or(|e| g.end(rd) == *e);
            ok.then(|| (g.mask.clone(), g))
        })
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found.into_iter().map(|(_, g)| g).collect())
}

/// A finite set of candidate positioning elements `y`.
#[derive(Clone, Debug)]
pub struct YWindow {
    pub elements: Vec<ExtAffine>,
}

impl YWindow {
    pub fn single(y: ExtAffine) -> YWindow {
        YWindow { elements: vec![y] }
    }

    /// Every `t^mu w` with `w` in `W` and `|mu|_inf <= radius`.
    pub fn boxed(rd: &RootDatum, radius: i64) -> YWindow {
        let mut elements = Vec::new();
        for mu in crate::conj::box_points(rd.rank, radius) {
            for w in rd.elements() {
                elements.push(ExtAffine::new(mu.clone(), w.clone()));
            }
        }
        elements.sort_by_key(|y| (y.lam.iter().map(|x| x.abs()).max().unwrap_or(0), y.lam.clone(), rd.length(&y.w)));
        YWindow { elements }
    }

    /// Radius `max(|lambda|_inf + 2, 4)` for `x = t^lambda w`.
    pub fn default_for(rd: &RootDatum, x: &ExtAffine) -> YWindow {
        let r = x.lam.iter().map(|a| a.abs()).max().unwrap_or(0) + 2;
        YWindow::boxed(rd, r.max(4))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub y: String,
    pub chimney: Vec<usize>,
    pub mask: String,
    pub stats: FoldStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Nonempty(Witness),
    Unknown,
    EmptyOnSheet,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Nonempty(_) => "NONEMPTY",
            Verdict::Unknown => "UNKNOWN",
            Verdict::EmptyOnSheet => "EMPTY-on-sheet",
        }
    }
}

/// Standard representative of the class of `b`, together with its invariants.
pub fn standard_class(rd: &RootDatum, b: &ExtAffine) -> Result<(NewtonInvariants, ExtAffine), Error> {
    let inv = newton::classify(rd, b);
    let bnu = newton::standard_rep(rd, &inv)?;
    Ok((inv, bnu))
}

struct Instance {
    types: Vec<usize>,
    start: ExtAffine,
    parabolic: Vec<usize>,
    bnu: ExtAffine,
    offset: Q,
}

fn instance(rd: &RootDatum, x: &ExtAffine, b: &ExtAffine) -> Result<Option<Instance>, Error> {
    if x.sheet(rd) != b.sheet(rd) {
        return Ok(None);
    }
    let (inv, bnu) = standard_class(rd, b)?;
    let g = Gallery::minimal(rd, x, None)?;
    Ok(Some(Instance {
        types: g.types,
        start: g.start,
        parabolic: inv.parabolic.clone(),
        offset: newton::two_rho_pairing(rd, &inv.nu),
        bnu,
    }))
}

fn best_for_y(rd: &RootDatum, inst: &Instance, y: &ExtAffine, cap: usize) -> Result<Option<Witness>, Error> {
    let o = Orientation::new(rd, ChimneySpec::new(inst.parabolic.clone(), y.clone()));
    let target = ExtAffine::conjugate(&inst.bnu, y);
    let found = enumerate_folded(rd, &inst.types, &inst.start, &o, Some(&target), cap)?;
    Ok(found
        .iter()
        .map(|g| (gallery::fold_stats(rd, g, &o), g))
        .max_by_key(|(st, _)| st.dim)
        .map(|(stats, g)| Witness { y: y.to_text(rd), chimney: inst.parabolic.clone(), mask: g.mask_string(), stats }))
}

/// Searches the window for a positively folded gallery of type `x` ending at
/// `b_nu^y`. Exhausting the window yields `Unknown`, never emptiness.
pub fn nonempty(rd: &RootDatum, x: &ExtAffine, b: &ExtAffine, window: &YWindow, cap: usize) -> Result<Verdict, Error> {
    let Some(inst) = instance(rd, x, b)? else { return Ok(Verdict::EmptyOnSheet) };
    check_cap(inst.types.len(), cap)?;
    let hit = window
        .elements
        .par_iter()
        .map(|y| best_for_y(rd, &inst, y, cap))
        .find_map_first(|r| match r {
            Ok(Some(w)) => Some(Ok(w)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        });
    match hit {
        Some(Ok(w)) => Ok(Verdict::Nonempty(w)),
        Some(Err(e)) => Err(e),
        None => Ok(Verdict::Unknown),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionBound {
    pub best_dim: usize,
    #[serde(with = "crate::linalg::serde_q")]
    pub offset: Q,
    #[serde(with = "crate::linalg::serde_q")]
    pub lower_bound: Q,
    pub witness: Witness,
}

/// `max dim(gamma) - <2 rho, nu>` over the window; a lower bound for
/// `dim X_x(b)`. `None` when the window holds no witness.
pub fn dimension_lb(
    rd: &RootDatum,
    x: &ExtAffine,
    b: &ExtAffine,
    window: &YWindow,
    cap: usize,
) -> Result<Option<DimensionBound>, Error> {
    let Some(inst) = instance(rd, x, b)? else { return Ok(None) };
    check_cap(inst.types.len(), cap)?;
    let all: Vec<Option<Witness>> =
        window.elements.par_iter().map(|y| best_for_y(rd, &inst, y, cap)).collect::<Result<_, _>>()?;
    let best = all.into_iter().flatten().reduce(|a, b| if b.stats.dim > a.stats.dim { b } else { a });
    Ok(best.map(|w| DimensionBound {
        best_dim: w.stats.dim,
        offset: inst.offset,
        lower_bound: Q::from_integer(w.stats.dim as i64) - inst.offset,
        witness: w,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub type_is_reduced_word_for_x0: bool,
    pub positively_folded: bool,
    pub ends_at_conjugate: bool,
    pub stats_match: bool,
    /// Set when the oracle was run: whether it lists the certificate's mask.
    pub oracle_agrees: Option<bool>,
}

impl CertificateCheck {
    pub fn holds(&self) -> bool {
        self.type_is_reduced_word_for_x0
            && self.positively_folded
            && self.ends_at_conjugate
            && self.stats_match
            && self.oracle_agrees != Some(false)
    }
}

/// Re-checks a construction certificate from scratch, optionally replaying
/// it through the enumeration oracle.
pub fn verify_certificate(rd: &RootDatum, cert: &Certificate, replay_cap: Option<usize>) -> Result<CertificateCheck, Error> {
    let x0 = ExtAffine::parse(rd, &cert.x0)?;
    let y = ExtAffine::parse(rd, &cert.y)?;
    let g = Gallery::from_record(rd, &cert.gallery)?;
    let nu: Vec<Q> = cert
        .nu_prime
        .iter()
        .map(|s| crate::linalg::parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`"))))
        .collect::<Result<_, _>>()?;
    let inv = NewtonInvariants::from_parts(rd, nu, x0.sheet(rd));
    let b = newton::standard_rep(rd, &inv)?;
    let unfolded = Gallery::unfolded(g.start.clone(), g.types.clone());
    let type_ok = g.start == eaw::omega_of_class(rd, &x0.sheet(rd))
        && unfolded.end(rd) == x0
        && g.len() == x0.length(rd);
    let o = construct::chimney(rd, cert.i, &y);
    let stats = gallery::fold_stats(rd, &g, &o);
    let target = ExtAffine::conjugate(&b, &y);
    let oracle_agrees = match replay_cap {
        Some(cap) => {
            let found = enumerate_folded(rd, &g.types, &g.start, &o, Some(&target), cap)?;
            Some(found.iter().any(|h| h.mask == g.mask))
        }
        None => None,
    };
    Ok(CertificateCheck {
        type_is_reduced_word_for_x0: type_ok,
        positively_folded: stats.negative_folds == 0,
        ends_at_conjugate: g.end(rd) == target,
        stats_match: stats == cert.stats,
        oracle_agrees,
    })
}

/// One row of a results table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub x: String,
    pub b: String,
    pub verdict: String,
    pub best_dim: Option<usize>,
    pub y: Option<String>,
    pub witness_mask: Option<String>,
}

impl ResultRow {
    pub fn new(rd: &RootDatum, x: &ExtAffine, b: &ExtAffine, v: &Verdict) -> ResultRow {
        let w = match v {
            Verdict::Nonempty(w) => Some(w),
            _ => None,
        };
        ResultRow {
            x: x.to_text(rd),
            b: b.to_text(rd),
            verdict: v.label().to_string(),
            best_dim: w.map(|w| w.stats.dim),
            y: w.map(|w| w.y.clone()),
            witness_mask: w.map(|w| w.mask.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Kind;

    fn a2() -> RootDatum {
        RootDatum::new(Kind::A, 2).unwrap()
    }

    #[test]
    fn empty_type_gives_the_trivial_gallery() {
        let r = a2();
        let o = Orientation::new(&r, ChimneySpec::new(vec![1], ExtAffine::identity(2)));
        let found = enumerate_folded(&r, &[], &ExtAffine::identity(2), &o, None, DEFAULT_CAP).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(gallery::fold_stats(&r, &found[0], &o).dim, 0);
    }

    #[test]
    fn pruned_matches_unpruned() {
        let r = a2();
        let x = ExtAffine::parse(&r, "t^[3,2]*s1").unwrap();
        let g = Gallery::minimal(&r, &x, None).unwrap();
        for y in ["id", "w0", "t^[1,-1]*s2"] {
            let o = Orientation::new(&r, ChimneySpec::new(vec![2], ExtAffine::parse(&r, y).unwrap()));
            let a = enumerate_folded(&r, &g.types, &g.start, &o, None, DEFAULT_CAP).unwrap();
            let b = enumerate_unpruned(&r, &g.types, &g.start, &o, None, DEFAULT_CAP).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = a2();
        let o = Orientation::new(&r, ChimneySpec::new(vec![], ExtAffine::identity(2)));
        let err = enumerate_folded(&r, &[1; 5], &ExtAffine::identity(2), &o, None, 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { len: 5, cap: 4, .. }));
    }

    #[test]
    fn translation_case_is_nonempty() {
        let r = a2();
        let x = ExtAffine::translation(vec![3, 3]);
        let v = nonempty(&r, &x, &x, &YWindow::default_for(&r, &x), DEFAULT_CAP).unwrap();
        let Verdict::Nonempty(w) = v else { panic!("no witness") };
        assert_eq!(w.mask, "000000000000");
        assert_eq!(w.stats.dim, 12);
    }

    #[test]
    fn kottwitz_mismatch_is_empty_on_sheet() {
        let r = a2();
        let x = ExtAffine::parse(&r, "t^[3,3]*w0").unwrap();
        let b = ExtAffine::translation(vec![1, 0]);
        let v = nonempty(&r, &x, &b, &YWindow::single(ExtAffine::identity(2)), DEFAULT_CAP).unwrap();
        assert_eq!(v, Verdict::EmptyOnSheet);
    }

    #[test]
    fn first_target_is_replayed_by_the_oracle() {
        let r = a2();
        let cert = construct::certify(&r, &[3, 3], 1, None).unwrap();
        let check = verify_certificate(&r, &cert, Some(DEFAULT_CAP)).unwrap();
        assert!(check.holds(), "{check:?}");
        assert_eq!(check.oracle_agrees, Some(true));
    }
}
