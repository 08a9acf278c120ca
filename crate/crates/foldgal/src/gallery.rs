//! Galleries of alcoves stored as (start, type, mask), chimney orientations,
//! folding, and the lowering root operators on vertex-to-vertex galleries.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eaw::{self, EltRecord, ExtAffine, Hyperplane};
use crate::linalg::{self, q};
use crate::rootdata::RootDatum;
use crate::{Error, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Cross,
    Fold,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gallery {
    pub start: ExtAffine,
    pub types: Vec<usize>,
    pub mask: Vec<Action>,
}

/// Alcoves `c_0..c_k` and panel hyperplanes `p_1..p_k` (stored 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub alcoves: Vec<ExtAffine>,
    pub panels: Vec<Hyperplane>,
}

impl Gallery {
    pub fn new(start: ExtAffine, types: Vec<usize>, mask: Vec<Action>) -> Result<Gallery, Error> {
        if types.len() != mask.len() {
            return Err(Error::Invalid(format!("type has {} letters but mask has {}", types.len(), mask.len())));
        }
        Ok(Gallery { start, types, mask })
    }

    pub fn unfolded(start: ExtAffine, types: Vec<usize>) -> Gallery {
        let mask = vec![Action::Cross; types.len()];
        Gallery { start, types, mask }
    }

    /// Minimal gallery from the base alcove of the sheet of `x` to `x`.
    pub fn minimal(rd: &RootDatum, x: &ExtAffine, word: Option<&[usize]>) -> Result<Gallery, Error> {
        let start = eaw::omega_of_class(rd, &x.sheet(rd));
        let types = match word {
            Some(w) => {
                if w.iter().any(|&j| j > rd.rank) {
                    return Err(Error::Invalid("affine letter out of range".into()));
                }
                if w.len() != x.length(rd) || eaw::walk(rd, &start, w) != *x {
                    return Err(Error::Invalid("word is not a reduced word for the element".into()));
                }
                w.to_vec()
            }
            None => eaw::reduced_affine_word(rd, &start, x)?,
        };
        Ok(Gallery::unfolded(start, types))
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn trace(&self, rd: &RootDatum) -> Trace {
        let mut alcoves = Vec::with_capacity(self.len() + 1);
        let mut panels = Vec::with_capacity(self.len());
        let mut cur = self.start.clone();
        alcoves.push(cur.clone());
        for (&t, &a) in self.types.iter().zip(&self.mask) {
            panels.push(eaw::wall(rd, &cur, t));
            if a == Action::Cross {
                cur = cur.mul(&eaw::simple_reflection(rd, t));
            }
            alcoves.push(cur.clone());
        }
        Trace { alcoves, panels }
    }

    pub fn end(&self, rd: &RootDatum) -> ExtAffine {
        let mut cur = self.start.clone();
        for (&t, &a) in self.types.iter().zip(&self.mask) {
            if a == Action::Cross {
                cur = cur.mul(&eaw::simple_reflection(rd, t));
            }
        }
        cur
    }

    pub fn folds(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.mask[j] == Action::Fold).collect()
    }

    /// Reflects the tail at panel `j` (0-based) and marks it folded.
    pub fn prs_fold(&self, j: usize) -> Result<Gallery, Error> {
        match self.mask.get(j) {
            None => Err(Error::Invalid(format!("panel index {j} out of range (length {})", self.len()))),
            Some(Action::Fold) => Err(Error::Invalid(format!("panel {j} is already folded"))),
            Some(Action::Cross) => {
                let mut g = self.clone();
                g.mask[j] = Action::Fold;
                Ok(g)
            }
        }
    }

    /// Removes the fold at panel `j`, reflecting the tail back.
    pub fn unfold(&self, j: usize) -> Result<Gallery, Error> {
        match self.mask.get(j) {
            None => Err(Error::Invalid(format!("panel index {j} out of range (length {})", self.len()))),
            Some(Action::Cross) => Err(Error::Invalid(format!("panel {j} is not folded"))),
            Some(Action::Fold) => {
                let mut g = self.clone();
                g.mask[j] = Action::Cross;
                Ok(g)
            }
        }
    }

    /// The image `g * gallery` (type and mask unchanged).
    pub fn left_mul(&self, g: &ExtAffine) -> Gallery {
        Gallery { start: g.mul(&self.start), types: self.types.clone(), mask: self.mask.clone() }
    }

    /// Rebuilds a gallery of the given type from an explicit alcove sequence.
    pub fn from_alcoves(rd: &RootDatum, types: &[usize], alcoves: &[ExtAffine]) -> Result<Gallery, Error> {
        if alcoves.len() != types.len() + 1 {
            return Err(Error::Invalid("alcove sequence length does not match type".into()));
        }
        let mask = types
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                if alcoves[j + 1] == alcoves[j] {
                    Ok(Action::Fold)
                } else if alcoves[j + 1] == alcoves[j].mul(&eaw::simple_reflection(rd, t)) {
                    Ok(Action::Cross)
                } else {
                    Err(Error::Internal(format!("alcoves {j} and {} are not adjacent along type {t}", j + 1)))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Gallery { start: alcoves[0].clone(), types: types.to_vec(), mask })
    }

    pub fn mask_string(&self) -> String {
        self.mask.iter().map(|a| if *a == Action::Fold { '1' } else { '0' }).collect()
    }

    /// `start | t1,t2,... | mask` with mask bits `1` for folds.
    pub fn to_text(&self, rd: &RootDatum) -> String {
        let types: Vec<String> = self.types.iter().map(|t| t.to_string()).collect();
        format!("{} | {} | {}", self.start.to_text(rd), types.join(","), self.mask_string())
    }

    pub fn parse(rd: &RootDatum, s: &str) -> Result<Gallery, Error> {
        let parts: Vec<&str> = s.trim().split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse("gallery record must be `start | types | mask`".into()));
        }
        let start = ExtAffine::parse(rd, parts[0])?;
        let types = parse_types(rd, parts[1])?;
        let mask = parse_mask(parts[2])?;
        Gallery::new(start, types, mask)
    }

    pub fn record(&self, rd: &RootDatum) -> GalleryRecord {
        GalleryRecord { start: self.start.record(rd), types: self.types.clone(), mask: self.mask_string() }
    }

    pub fn from_record(rd: &RootDatum, r: &GalleryRecord) -> Result<Gallery, Error> {
        if r.types.iter().any(|&t| t > rd.rank) {
            return Err(Error::Invalid("affine letter out of range".into()));
        }
        Gallery::new(ExtAffine::from_record(rd, &r.start)?, r.types.clone(), parse_mask(&r.mask)?)
    }
}

pub fn parse_types(rd: &RootDatum, s: &str) -> Result<Vec<usize>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            let t: usize = x.trim().parse().map_err(|_| Error::Parse(format!("bad affine letter `{x}`")))?;
            if t > rd.rank {
                return Err(Error::Parse(format!("affine letter {t} exceeds rank {}", rd.rank)));
            }
            Ok(t)
        })
        .collect()
}

pub fn parse_mask(s: &str) -> Result<Vec<Action>, Error> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(Action::Cross),
            '1' => Ok(Action::Fold),
            _ => Err(Error::Parse(format!("mask character `{c}` is not 0 or 1"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GalleryRecord {
    pub start: EltRecord,
    pub types: Vec<usize>,
    pub mask: String,
}

/// A standard parabolic (given by its simple indices) and a positioning element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChimneySpec {
    pub parabolic: Vec<usize>,
    pub y: ExtAffine,
}

impl ChimneySpec {
    pub fn new(parabolic: Vec<usize>, y: ExtAffine) -> ChimneySpec {
        let mut parabolic = parabolic;
        parabolic.sort_unstable();
        parabolic.dedup();
        ChimneySpec { parabolic, y }
    }

    pub fn describe(&self, rd: &RootDatum) -> String {
        let p: Vec<String> = self.parabolic.iter().map(|i| i.to_string()).collect();
        format!("P={{{}}}, y={}", p.join(","), self.y.to_text(rd))
    }
}

/// Sign oracle of a chimney. The sector is represented by the ray
/// `v(t) = y (c - t sum_{j not in P} varpi_j)` with `c` interior to the base
/// alcove; an alcove is on the `+` side of a hyperplane when it is separated
/// from `v(t)` for large `t`.
#[derive(Clone, Debug)]
pub struct Orientation {
    pub spec: ChimneySpec,
    anchor: Vec<Q>,
    direction: Vec<Q>,
    base: Vec<Q>,
}

impl Orientation {
    pub fn new(rd: &RootDatum, spec: ChimneySpec) -> Orientation {
        let base = eaw::base_point(rd);
        let anchor = spec.y.act_point(&base);
        let d: Vec<Q> = (1..=rd.rank).map(|j| if spec.parabolic.contains(&j) { Q::zero() } else { q(1) }).collect();
        let direction = spec.y.w.act_q(&d).iter().map(|x| -x).collect();
        Orientation { spec, anchor, direction, base }
    }

    /// Side of the far end of the chimney ray.
    pub fn deep_side(&self, h: &Hyperplane) -> i32 {
        let slope: Q = h.root.iter().zip(&self.direction).fold(Q::zero(), |acc, (a, b)| acc + b * *a);
        if !slope.is_zero() {
            linalg::sign(&slope)
        } else {
            h.side(&self.anchor)
        }
    }

    /// `+1` when `alcove` lies on the side of `h` facing away from the chimney.
    pub fn sign(&self, alcove: &ExtAffine, h: &Hyperplane) -> i32 {
        let p = alcove.act_point(&self.base);
        let s = h.side(&p);
        debug_assert!(s != 0);
        if s == self.deep_side(h) {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoldStats {
    pub p: usize,
    pub f: usize,
    pub dim: usize,
    pub negative_folds: usize,
}

/// Per-panel signs: a crossing is positive when the new alcove is on the `+`
/// side, a fold when the repeated alcove is.
pub fn panel_signs(rd: &RootDatum, g: &Gallery, o: &Orientation) -> Vec<i32> {
    let tr = g.trace(rd);
    (0..g.len()).map(|j| o.sign(&tr.alcoves[j + 1], &tr.panels[j])).collect()
}

pub fn fold_stats(rd: &RootDatum, g: &Gallery, o: &Orientation) -> FoldStats {
    let signs = panel_signs(rd, g, o);
    let mut st = FoldStats::default();
    for (a, s) in g.mask.iter().zip(signs) {
        match (a, s > 0) {
            (Action::Cross, true) => st.p += 1,
            (Action::Cross, false) => {}
            (Action::Fold, true) => st.f += 1,
            (Action::Fold, false) => st.negative_folds += 1,
        }
    }
    st.dim = st.p + st.f;
    st
}

pub fn is_positively_folded(rd: &RootDatum, g: &Gallery, o: &Orientation) -> bool {
    fold_stats(rd, g, o).negative_folds == 0
}

/// Direction in which a gallery passes a panel in `H_{beta,k}`, `beta > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Passage {
    /// From `<beta,.> < k` to `<beta,.> > k`.
    TowardDominant,
    TowardAntidominant,
    Fold,
}

pub fn passage(rd: &RootDatum, g: &Gallery, j: usize) -> (Hyperplane, Passage) {
    let tr = g.trace(rd);
    let h = tr.panels[j].clone();
    let dir = if g.mask[j] == Action::Fold {
        Passage::Fold
    } else if h.side(&eaw::interior_point(rd, &tr.alcoves[j + 1])) > 0 {
        Passage::TowardDominant
    } else {
        Passage::TowardAntidominant
    };
    (h, dir)
}

/// A gallery together with a first and a final vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGallery {
    pub gallery: Gallery,
    pub first: Vec<i64>,
    pub last: Vec<i64>,
}

impl VertexGallery {
    /// Closure with the origin as first vertex and the translation vertex of
    /// the final alcove as last vertex.
    pub fn sharp(rd: &RootDatum, g: &Gallery) -> VertexGallery {
        VertexGallery { gallery: g.clone(), first: vec![0; rd.rank], last: g.end(rd).lam }
    }

    pub fn left_mul(&self, x: &ExtAffine) -> VertexGallery {
        let pt = |v: &[i64]| linalg::to_int(&x.act_point(&RootDatum::qvec(v))).expect("integral image");
        VertexGallery { gallery: self.gallery.left_mul(x), first: pt(&self.first), last: pt(&self.last) }
    }
}

/// `m(gamma, alpha)`: the least `m` such that `H_{alpha,m}` contains a panel
/// or one of the two end vertices.
pub fn min_index(rd: &RootDatum, vg: &VertexGallery, alpha: &[i64]) -> i64 {
    let tr = vg.gallery.trace(rd);
    let mut m = rd.pairing(alpha, &vg.first).min(rd.pairing(alpha, &vg.last));
    for h in &tr.panels {
        if h.root == alpha {
            m = m.min(h.k);
        }
    }
    m
}

/// The lowering operator `f_alpha`, or `None` where it is undefined.
pub fn root_operator_f(rd: &RootDatum, vg: &VertexGallery, alpha: &[i64]) -> Result<Option<VertexGallery>, Error> {
    if !rd.is_positive(alpha) || alpha.iter().sum::<i64>() != 1 {
        return Err(Error::Invalid("root operators are indexed by simple roots".into()));
    }
    let m = min_index(rd, vg, alpha);
    if m == rd.pairing(alpha, &vg.last) {
        return Ok(None);
    }
    let g = &vg.gallery;
    let tr = g.trace(rd);
    let k = g.len();
    // panels are p_1..p_k, stored at 0..k-1; position 0 stands for the first vertex
    let at = |pos: usize, level: i64| tr.panels[pos - 1].root == alpha && tr.panels[pos - 1].k == level;
    let j = (1..=k).rev().find(|&p| at(p, m)).unwrap_or(0);
    let kk = (j + 1..=k).find(|&p| at(p, m + 1)).unwrap_or(k + 1);
    let refl = Hyperplane { root: alpha.to_vec(), k: m }.reflection(rd);
    let cv = rd.coroot(alpha);
    let shift = ExtAffine::translation(cv.iter().map(|x| -x).collect());
    let alcoves: Vec<ExtAffine> = tr
        .alcoves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i < j {
                c.clone()
            } else if i < kk {
                refl.mul(c)
            } else {
                shift.mul(c)
            }
        })
        .collect();
    let first = if j == 0 {
        linalg::to_int(&refl.act_point(&RootDatum::qvec(&vg.first))).expect("integral")
    } else {
        vg.first.clone()
    };
    let last = if kk <= k {
        vg.last.iter().zip(&cv).map(|(a, b)| a - b).collect()
    } else {
        linalg::to_int(&refl.act_point(&RootDatum::qvec(&vg.last))).expect("integral")
    };
    let gallery = Gallery::from_alcoves(rd, &g.types, &alcoves)?;
    Ok(Some(VertexGallery { gallery, first, last }))
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Cross => write!(f, "cross"),
            Action::Fold => write!(f, "fold"),
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
    fn minimal_galleries() {
        let r = a2();
        let id = ExtAffine::identity(2);
        assert!(Gallery::minimal(&r, &id, None).unwrap().is_empty());
        let x = ExtAffine::parse(&r, "t^[3,3]*w0").unwrap();
        let g = Gallery::minimal(&r, &x, None).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.end(&r), x);
        let w0 = ExtAffine::spherical(r.w0());
        let g = Gallery::minimal(&r, &w0, Some(&[2, 1, 2])).unwrap();
        let tr = g.trace(&r);
        assert_eq!(
            tr.panels,
            vec![Hyperplane::new(vec![0, 1], 0), Hyperplane::new(vec![1, 1], 0), Hyperplane::new(vec![1, 0], 0)]
        );
        assert!(Gallery::minimal(&r, &w0, Some(&[2, 1, 1])).is_err());
    }

    #[test]
    fn folding_rules() {
        let r = a2();
        let g = Gallery::unfolded(ExtAffine::identity(2), vec![1]);
        let f = g.prs_fold(0).unwrap();
        assert!(f.end(&r).is_identity());
        assert!(f.prs_fold(0).is_err());
        assert!(g.prs_fold(3).is_err());
        assert_eq!(f.unfold(0).unwrap(), g);
    }

    #[test]
    fn text_and_json_round_trip() {
        let r = a2();
        let g = Gallery::new(
            ExtAffine::parse(&r, "t^[1,0]*s1s2").unwrap(),
            vec![2, 0, 1, 0],
            parse_mask("0110").unwrap(),
        )
        .unwrap();
        let s = g.to_text(&r);
        assert_eq!(Gallery::parse(&r, &s).unwrap(), g);
        let js = serde_json::to_string(&g.record(&r)).unwrap();
        let back: GalleryRecord = serde_json::from_str(&js).unwrap();
        assert_eq!(Gallery::from_record(&r, &back).unwrap(), g);
    }

    #[test]
    fn minimal_dominant_gallery_has_min_index_zero() {
        let r = a2();
        let x = ExtAffine::translation(vec![2, 2]);
        let g = Gallery::minimal(&r, &x, None).unwrap();
        let vg = VertexGallery::sharp(&r, &g);
        for i in 1..=2 {
            assert_eq!(min_index(&r, &vg, &r.simple_root(i)), 0);
        }
    }

    #[test]
    fn all_crossings_have_no_folds() {
        let r = a2();
        let x = ExtAffine::parse(&r, "t^[2,1]*s1").unwrap();
        let g = Gallery::minimal(&r, &x, None).unwrap();
        let o = Orientation::new(&r, ChimneySpec::new(vec![1], ExtAffine::identity(2)));
        let st = fold_stats(&r, &g, &o);
        assert_eq!(st.f, 0);
        assert!(is_positively_folded(&r, &g, &o));
    }

    #[test]
    fn dominant_chimney_signs() {
        // with the dominant chamber as chimney, alcoves on the antidominant
        // side of a hyperplane are on the + side
        let r = a2();
        let o = Orientation::new(&r, ChimneySpec::new(vec![], ExtAffine::spherical(r.w0())));
        let h = Hyperplane::new(vec![1, 0], 0);
        assert_eq!(o.sign(&ExtAffine::identity(2), &h), -1);
        assert_eq!(o.sign(&ExtAffine::spherical(r.s(1)), &h), 1);
        let anti = Orientation::new(&r, ChimneySpec::new(vec![], ExtAffine::identity(2)));
        assert_eq!(anti.sign(&ExtAffine::identity(2), &h), 1);
    }
}
