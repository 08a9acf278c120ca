//! Rank-2 apartment pictures: reflection lines, chimney strip, galleries.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use foldgal::eaw::{self, ExtAffine};
use foldgal::gallery::{Action, ChimneySpec, Gallery, Orientation};
use foldgal::{Hyperplane, Kind, RootDatum, Q};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

const PX: f64 = 60.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub kind: Kind,
    pub rank: usize,
    /// Half-width of the viewport in units of the shortest coroot.
    pub radius: u32,
    pub gallery: Option<String>,
    pub chimney: Option<ChimneyRecord>,
    pub signs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChimneyRecord {
    pub parabolic: Vec<usize>,
    pub y: String,
}

struct Frame {
    /// Upper-triangular factor of the coroot Gram matrix.
    l: [f64; 3],
    half: f64,
}

impl Frame {
    fn new(rd: &RootDatum, radius: u32) -> Frame {
        let g = rd.coroot_gram();
        let norm = (0..2).map(|i| g[i][i]).min().unwrap_or(1) as f64;
        let (a, b, c) = (g[0][0] as f64 / norm, g[0][1] as f64 / norm, g[1][1] as f64 / norm);
        let l00 = a.sqrt();
        let l01 = b / l00;
        let l11 = (c - l01 * l01).sqrt();
        Frame { l: [l00, l01, l11], half: radius as f64 }
    }

    /// Euclidean position of a coweight given in fundamental-coweight coordinates.
    fn euclid(&self, rd: &RootDatum, v: &[Q]) -> (f64, f64) {
        let c = rd.coroot_coords(v);
        let (c0, c1) = (c[0].to_f64().unwrap_or(0.0), c[1].to_f64().unwrap_or(0.0));
        (self.l[0] * c0 + self.l[1] * c1, self.l[2] * c1)
    }

    fn px(&self, p: (f64, f64)) -> (f64, f64) {
        let round = |x: f64| (x * 100.0).round() / 100.0;
        (round((p.0 + self.half) * PX), round((self.half - p.1) * PX))
    }

    fn inside(&self, p: (f64, f64)) -> bool {
        p.0.abs() <= self.half && p.1.abs() <= self.half
    }

    fn size(&self) -> f64 {
        2.0 * self.half * PX
    }

    /// Liang-Barsky clipping of the line `p + t d` to the viewport.
    fn clip(&self, p: (f64, f64), d: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (pc, dc) in [(p.0, d.0), (p.1, d.1)] {
            if dc.abs() < 1e-12 {
                if pc.abs() > self.half {
                    return None;
                }
                continue;
            }
            let (t1, t2) = ((-self.half - pc) / dc, (self.half - pc) / dc);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
        (lo < hi).then(|| ((p.0 + lo * d.0, p.1 + lo * d.1), (p.0 + hi * d.0, p.1 + hi * d.1)))
    }
}

fn hyperplane_segment(rd: &RootDatum, f: &Frame, h: &Hyperplane) -> Option<((f64, f64), (f64, f64))> {
    let (b0, b1) = (h.root[0], h.root[1]);
    let nn = b0 * b0 + b1 * b1;
    let p = [Q::new(h.k * b0, nn), Q::new(h.k * b1, nn)];
    let q = [p[0] - Q::from_integer(b1), p[1] + Q::from_integer(b0)];
    let (pe, qe) = (f.euclid(rd, &p), f.euclid(rd, &q));
    f.clip(pe, (qe.0 - pe.0, qe.1 - pe.1))
}

fn base_vertices(rd: &RootDatum) -> Vec<Vec<Q>> {
    let marks = rd.marks();
    let mut out = vec![vec![Q::from_integer(0); 2]];
    for j in 0..2 {
        let mut v = vec![Q::from_integer(0); 2];
        v[j] = Q::new(1, marks[j]);
        out.push(v);
    }
    out
}

fn centroid(pts: &[Vec<Q>]) -> Vec<Q> {
    let n = Q::from_integer(pts.len() as i64);
    (0..2).map(|i| pts.iter().map(|p| p[i]).sum::<Q>() / n).collect()
}

fn alcove_vertices(rd: &RootDatum, x: &ExtAffine) -> Vec<Vec<Q>> {
    base_vertices(rd).iter().map(|v| x.act_point(v)).collect()
}

/// Midpoint of the type-`t` panel of `x`: the vertices other than vertex `t`.
fn panel_mid(rd: &RootDatum, x: &ExtAffine, t: usize) -> Vec<Q> {
    let vs = alcove_vertices(rd, x);
    let rest: Vec<Vec<Q>> = vs.into_iter().enumerate().filter(|(i, _)| *i != t).map(|(_, v)| v).collect();
    centroid(&rest)
}

/// Alcoves of the zero sheet whose centroid lies in the viewport.
fn visible_alcoves(rd: &RootDatum, f: &Frame) -> Vec<ExtAffine> {
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = std::collections::VecDeque::from([ExtAffine::identity(2)]);
    seen.insert(ExtAffine::identity(2));
    while let Some(x) = queue.pop_front() {
        for t in 0..=2 {
            let y = x.mul(&eaw::simple_reflection(rd, t));
            let c = f.euclid(rd, &centroid(&alcove_vertices(rd, &y)));
            if f.inside(c) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn in_chimney(rd: &RootDatum, o: &Orientation, anchor: &[Q], x: &ExtAffine) -> bool {
    let p = centroid(&alcove_vertices(rd, x));
    rd.pos_roots.iter().all(|beta| {
        let (a, b) = (rd.pairing_q(beta, anchor), rd.pairing_q(beta, &p));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut k = lo.floor().to_integer();
        while Q::from_integer(k) <= hi {
            if Q::from_integer(k) > lo && Q::from_integer(k) < hi {
                let h = Hyperplane::new(beta.clone(), k);
                if h.side(&p) != o.deep_side(&h) {
                    return false;
                }
            }
            k += 1;
        }
        true
    })
}

fn polygon(f: &Frame, rd: &RootDatum, pts: &[Vec<Q>]) -> String {
    pts.iter()
        .map(|p| {
            let (x, y) = f.px(f.euclid(rd, p));
            format!("{x},{y}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(scene: &Scene) -> Result<String> {
    if scene.rank != 2 {
        bail!("rendering needs rank 2, got rank {}", scene.rank);
    }
    let rd = RootDatum::new(scene.kind, scene.rank)?;
    let f = Frame::new(&rd, scene.radius.max(1));
    let size = f.size();
    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"##
    )?;
    writeln!(svg, r##"<rect width="{size}" height="{size}" fill="white"/>"##)?;

    let orientation = match &scene.chimney {
        Some(c) => {
            let y = ExtAffine::parse(&rd, &c.y)?;
            Some(Orientation::new(&rd, ChimneySpec::new(c.parabolic.clone(), y)))
        }
        None => None,
    };
    if let Some(o) = &orientation {
        let anchor = eaw::interior_point(&rd, &o.spec.y);
        writeln!(svg, r##"<g class="chimney" fill="#f3d9a4" stroke="none">"##)?;
        for x in visible_alcoves(&rd, &f) {
            if in_chimney(&rd, o, &anchor, &x) {
                writeln!(svg, r##"<polygon points="{}"/>"##, polygon(&f, &rd, &alcove_vertices(&rd, &x)))?;
            }
        }
        writeln!(svg, "</g>")?;
    }

    let reach = (scene.radius as i64 + 1) * 4 * rd.highest_root.iter().sum::<i64>();
    writeln!(svg, r##"<g class="hyperplanes" stroke="#9a9a9a" stroke-width="1">"##)?;
    let mut labels = String::new();
    for beta in &rd.pos_roots {
        for k in -reach..=reach {
            let h = Hyperplane::new(beta.clone(), k);
            let Some((a, b)) = hyperplane_segment(&rd, &f, &h) else { continue };
            let (pa, pb) = (f.px(a), f.px(b));
            let width = if k == 0 { r##" stroke-width="2""## } else { "" };
            writeln!(svg, r##"<line x1="{}" y1="{}" x2="{}" y2="{}"{width}/>"##, pa.0, pa.1, pb.0, pb.1)?;
            if let (true, Some(o)) = (scene.signs, &orientation) {
                let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
                let (nx, ny) = normal_towards(&rd, &f, &h, -o.deep_side(&h));
                let (x, y) = f.px((mid.0 + 0.12 * nx, mid.1 + 0.12 * ny));
                writeln!(labels, r##"<text x="{x}" y="{y}">+</text>"##)?;
            }
        }
    }
    writeln!(svg, "</g>")?;
    if !labels.is_empty() {
        writeln!(svg, r##"<g class="signs" font-size="10" fill="#2a6f2a" text-anchor="middle">"##)?;
        svg.push_str(&labels);
        writeln!(svg, "</g>")?;
    }

    if let Some(text) = &scene.gallery {
        let g = Gallery::parse(&rd, text)?;
        draw_gallery(&mut svg, &rd, &f, &g)?;
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}

/// Unit normal of `h` pointing to the side with sign `side`.
fn normal_towards(rd: &RootDatum, f: &Frame, h: &Hyperplane, side: i32) -> (f64, f64) {
    let Some((a, b)) = hyperplane_segment(rd, f, h) else { return (0.0, 0.0) };
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt();
    let n = (-dy / len, dx / len);
    let mid = ((a.0 + b.0) / 2.0 + 1e-3 * n.0, (a.1 + b.1) / 2.0 + 1e-3 * n.1);
    let s = side_of_euclid(rd, f, h, mid);
    if s == side {
        n
    } else {
        (-n.0, -n.1)
    }
}

fn side_of_euclid(rd: &RootDatum, f: &Frame, h: &Hyperplane, p: (f64, f64)) -> i32 {
    // invert the frame, then evaluate <beta, v> - k in floating point
    let c1 = p.1 / f.l[2];
    let c0 = (p.0 - f.l[1] * c1) / f.l[0];
    let w = coroot_to_coweight(rd, c0, c1);
    let val = h.root[0] as f64 * w.0 + h.root[1] as f64 * w.1 - h.k as f64;
    if val > 0.0 {
        1
    } else {
        -1
    }
}

fn coroot_to_coweight(rd: &RootDatum, c0: f64, c1: f64) -> (f64, f64) {
    let a0 = rd.simple_coroot(1);
    let a1 = rd.simple_coroot(2);
    (c0 * a0[0] as f64 + c1 * a1[0] as f64, c0 * a0[1] as f64 + c1 * a1[1] as f64)
}

fn draw_gallery(svg: &mut String, rd: &RootDatum, f: &Frame, g: &Gallery) -> Result<()> {
    let tr = g.trace(rd);
    let bary = |x: &ExtAffine| f.px(f.euclid(rd, &centroid(&alcove_vertices(rd, x))));
    let mut pts = vec![bary(&tr.alcoves[0])];
    let mut cusps = Vec::new();
    for (j, act) in g.mask.iter().enumerate() {
        let cur = &tr.alcoves[j];
        match act {
            Action::Cross => pts.push(bary(&tr.alcoves[j + 1])),
            Action::Fold => {
                let m = f.px(f.euclid(rd, &panel_mid(rd, cur, g.types[j])));
                pts.push(m);
                cusps.push(m);
                pts.push(bary(cur));
            }
        }
    }
    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{y}")).collect();
    writeln!(
        svg,
        r##"<polyline class="gallery" points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        path.join(" ")
    )?;
    let (sx, sy) = pts[0];
    writeln!(svg, r##"<circle class="start" cx="{sx}" cy="{sy}" r="4" fill="#1f4e9c"/>"##)?;
    for (x, y) in cusps {
        writeln!(svg, r##"<circle class="fold" cx="{x}" cy="{y}" r="3" fill="#c0392b"/>"##)?;
    }
    Ok(())
}
