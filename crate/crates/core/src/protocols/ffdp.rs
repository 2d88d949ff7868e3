//! Pieces that are 2-fat convex polygons with edge angles in multiples of 45
//! degrees, on right-angled isosceles triangles and squares.
//!
//! Sub-cakes here are triangles with diagonal legs, which the axis-permuting
//! frames cannot express, so this module works in cake coordinates throughout.
//! The n-agent procedures need a value of `2n-2` (1 for a single agent).

use super::*;
use crate::geometry::Walls;

type Pt = Point<f64>;

fn need(n: usize) -> f64 {
    if n == 1 {
        1.0
    } else {
        2.0 * n as f64 - 2.0
    }
}

fn dot(a: Pt, b: Pt) -> f64 {
    a.x * b.x + a.y * b.y
}

fn sub(a: Pt, b: Pt) -> Pt {
    Point::new(a.x - b.x, a.y - b.y)
}

fn mid(a: Pt, b: Pt) -> Pt {
    Point::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
}

/// Point of segment `pq` on the line `nu . x = level`.
fn cross_at(p: Pt, q: Pt, nu: Pt, level: f64) -> Pt {
    let s = ((level - dot(nu, p)) / dot(nu, sub(q, p))).clamp(0.0, 1.0);
    Point::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y))
}

/// Counter-clockwise copy without repeated or collinear vertices.
fn clean(p: &[Pt]) -> Vec<Pt> {
    let scale = {
        let (x0, y0, x1, y1) = poly::bbox(p);
        (x1 - x0).max(y1 - y0).max(1e-300)
    };
    let mut v: Vec<Pt> = Vec::with_capacity(p.len());
    for &q in p {
        if v.last().map_or(true, |l: &Pt| (l.x - q.x).hypot(l.y - q.y) > 1e-12 * scale) {
            v.push(q);
        }
    }
    while v.len() > 1 && (v[0].x - v[v.len() - 1].x).hypot(v[0].y - v[v.len() - 1].y) <= 1e-12 * scale {
        v.pop();
    }
    loop {
        let n = v.len();
        if n < 4 {
            break;
        }
        let k = (0..n).find(|&i| {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let cr = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            cr.abs() <= 1e-12 * scale * scale
        });
        match k {
            Some(i) => {
                v.remove(i);
            }
            None => break,
        }
    }
    poly::ccw(&v)
}

fn is_fat(p: &[Pt]) -> bool {
    p.len() >= 3 && poly::convex_fatness(p) <= 2.0 + 1e-9
}

fn verts(p: P) -> Vec<Pt> {
    match p {
        Piece::FfdPolygon(v) => v,
        _ => Vec::new(),
    }
}

fn piece(p: &[Pt]) -> P {
    Piece::FfdPolygon(clean(p))
}

/// Right-angled isosceles triangle with the right angle at `apex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rait {
    pub apex: Pt,
    pub u: Pt,
    pub v: Pt,
}

impl Rait {
    pub fn new(apex: Pt, u: Pt, v: Pt) -> Result<Self> {
        let (a, b) = (sub(u, apex), sub(v, apex));
        let (la, lb) = (a.x.hypot(a.y), b.x.hypot(b.y));
        let tol = 1e-9 * la.max(lb);
        if !(la > 0.0) || (la - lb).abs() > tol || dot(a, b).abs() > tol * la {
            return Err(Error::Shape("not a right-angled isosceles triangle".into()));
        }
        let r = Rait { apex, u, v };
        if Piece::FfdPolygon(r.poly()).validate(1e-9).is_err() {
            return Err(Error::Shape("triangle edges must have angles in multiples of 45 degrees".into()));
        }
        Ok(r)
    }

    /// Recognizes a triangle given by its three vertices in any order.
    pub fn from_polygon(p: &[Pt]) -> Option<Self> {
        if p.len() != 3 {
            return None;
        }
        (0..3).find_map(|i| Rait::new(p[i], p[(i + 1) % 3], p[(i + 2) % 3]).ok())
    }

    pub fn poly(&self) -> Vec<Pt> {
        poly::ccw(&[self.apex, self.u, self.v])
    }

    /// The two congruent halves cut along the median from the apex; the
    /// first contains `u`.
    pub fn halves(&self) -> [Rait; 2] {
        let m = mid(self.u, self.v);
        [Rait { apex: m, u: self.u, v: self.apex }, Rait { apex: m, u: self.apex, v: self.v }]
    }
}

/// Walled triangle cake `(x,y), (x+leg,y), (x,y+leg)`.
pub fn rait(x: f64, y: f64, leg: f64) -> CakeDomain<f64> {
    let r = Rait { apex: Point::new(x, y), u: Point::new(x + leg, y), v: Point::new(x, y + leg) };
    CakeDomain { base: CakeBase::Polygon(r.poly()), walls: Walls::all() }
}

/// Rescales every agent so that `region` is worth `target`.
fn on_region(subs: &mut [Sub], region: &[Pt], target: f64) -> Result<()> {
    for s in subs.iter_mut() {
        let v = s.d.poly_value(region);
        if !(v >= target * (1.0 - 1e-7) - 1e-9) {
            return Err(Error::Precondition(format!("2-FFDP: agent {} has value {} below {}", s.id, v, target)));
        }
        if v > 0.0 {
            s.d = s.d.scaled(target / v);
        }
    }
    Ok(())
}

/// Any number of agents on a triangle or a square; each gets a 2-FFDP worth `1/(2n-2)`.
pub fn ffdp_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 2)?;
    let n = agents.len();
    let mut ctx = Ctx::default();
    let shape = match &cake.base {
        CakeBase::Polygon(p) if cake.walls == Walls::all() => Rait::from_polygon(p).map(Ok),
        CakeBase::Rect(r) if cake.walls == Walls::all() && r.is_bounded() && r.is_square(1e-9) => Some(Err(*r)),
        _ => None,
    }
    .ok_or_else(|| Error::Shape("the 2-FFDP procedure needs a walled triangle with a right angle and equal legs, or a walled square".into()))?;
    let mut subs = prepare(agents, cake, &mut ctx)?;
    let region = match shape {
        Ok(t) => t.poly(),
        Err(r) => poly::ccw(&r.corners()),
    };
    for s in subs.iter_mut() {
        let v = s.d.poly_value(&region);
        if v > 0.0 {
            s.d = s.d.scaled(need(n) / v);
        }
    }
    let out = match shape {
        Ok(t) => tri(subs, t, &mut ctx)?,
        Err(r) => square(subs, r, &mut ctx)?,
    };
    Finish { name: "ffdp", agents, cake, bound: Bound::one_over(need(n)), constants: Some((2, 2)), normalization: Normalization::Absolute }
        .run(out, ctx)
}

fn hp_family(region: &[Pt], nu: Pt, from: f64, to: f64) -> Family<f64> {
    Family::Halfplane { poly: region.to_vec(), normal: nu, offset: from, max: (to - from).max(0.0) }
}

fn marks(subs: &[Sub], fam: &Family<f64>, v: f64, ctx: &mut Ctx) -> Result<Vec<(usize, f64)>> {
    let mut ts = Vec::with_capacity(subs.len());
    for s in subs {
        ts.push((s.id, ctx.mark(s, fam, v)?.t_or_inf()));
    }
    Ok(ts)
}

fn square(mut subs: Vec<Sub>, r: R, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = need(n);
    let region = poly::ccw(&r.corners());
    on_region(&mut subs, &region, total)?;
    let (bl, br, tr, tl) = (Point::new(r.xmin, r.ymin), Point::new(r.xmax, r.ymin), Point::new(r.xmax, r.ymax), Point::new(r.xmin, r.ymax));
    let halves = [Rait { apex: br, u: bl, v: tr }, Rait { apex: tl, u: tr, v: bl }];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| halves.iter().map(|h| ctx.eval(s, &piece(&h.poly()))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 1.0, n, |v| (v + 2.0) / 2.0))?;
    if let Some(j) = groups.iter().position(|g| g.len() == n) {
        // cut parallel to the diagonal, moving into the wanted half
        let want = halves[j];
        let nu = sub(want.apex, halves[1 - j].apex);
        let c = mid(bl, tr);
        let fam = hp_family(&region, nu, dot(nu, c), dot(nu, want.apex));
        let ts = marks(&subs, &fam, 1.0, ctx)?;
        let w = argmin_mark(&ts);
        let t = ts[w].1;
        if !t.is_finite() {
            return Err(Error::Invariant("diagonal mark in the wanted half is unreachable".into()));
        }
        let level = dot(nu, c) + t;
        let rest = Rait { apex: want.apex, u: cross_at(want.apex, want.u, nu, level), v: cross_at(want.apex, want.v, nu, level) };
        let mut out = vec![(subs[w].id, piece(&verts(fam.piece(t))))];
        let others: Vec<Sub> = subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, s)| s.clone()).collect();
        out.extend(tri(others, rest, ctx)?);
        return Ok(out);
    }
    let mut out = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if !g.is_empty() {
            out.extend(tri(pick(&subs, g), halves[j], ctx)?);
        }
    }
    Ok(out)
}

fn tri(mut subs: Vec<Sub>, t: Rait, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = need(n);
    let region = t.poly();
    on_region(&mut subs, &region, total)?;
    if n == 1 {
        return Ok(vec![(subs[0].id, piece(&region))]);
    }
    let halves = t.halves();
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| halves.iter().map(|h| ctx.eval(s, &piece(&h.poly()))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 1.0, n, |v| (v + 2.0) / 2.0))?;
    if let Some(j) = groups.iter().position(|g| g.len() == n) {
        return if n == 2 { two(&subs, t, j, ctx) } else { hard(subs, t, j, ctx) };
    }
    let mut out = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if !g.is_empty() {
            out.extend(tri(pick(&subs, g), halves[j], ctx)?);
        }
    }
    Ok(out)
}

/// Direction across the median toward half `j`, and the hypotenuse end on each side.
fn toward_half(t: &Rait, j: usize) -> (Pt, Pt, Pt) {
    let (lo, hi) = if j == 1 { (t.u, t.v) } else { (t.v, t.u) };
    (sub(hi, lo), lo, hi)
}

/// Everyone values half `j` at `2n-3` or more, with at least three agents.
fn hard(subs: Vec<Sub>, t: Rait, j: usize, ctx: &mut Ctx) -> Result<Out> {
    let region = t.poly();
    let (nu, lo, hi) = toward_half(&t, j);
    let m = mid(t.u, t.v);
    let fam = hp_family(&region, nu, dot(nu, m), dot(nu, hi));
    let ts = marks(&subs, &fam, 2.0, ctx)?;
    let w = argmin_mark(&ts);
    let c = ts[w].1;
    if !c.is_finite() {
        return Err(Error::Invariant("mark in the wanted half is unreachable".into()));
    }
    let x = verts(fam.piece(c));
    let mine = if is_fat(&clean(&x)) {
        piece(&x)
    } else {
        // the unwanted half plus the part of the strip near the apex
        let e = sub(lo, t.apex);
        let near = poly::clip_halfplane(&x, e.x, e.y, dot(e, t.apex) + 0.5 * dot(e, e));
        ctx.note("2-FFDP: winner's quadrangle is not 2-fat; using its two-piece cover");
        best_of(&subs[w], &[piece(&t.halves()[1 - j].poly()), piece(&near)])
    };
    let level = dot(nu, m) + c;
    let rest = Rait { apex: cross_at(lo, hi, nu, level), u: cross_at(t.apex, hi, nu, level), v: hi };
    let mut out = vec![(subs[w].id, mine)];
    let others: Vec<Sub> = subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, s)| s.clone()).collect();
    out.extend(tri(others, rest, ctx)?);
    Ok(out)
}

/// Two agents who both want half `j`: a cut-and-choose over straight cuts
/// in the four 45-degree directions, keeping both pieces 2-fat. Pieces that
/// are not 2-fat may be trimmed by a second straight cut.
fn two(subs: &[Sub], t: Rait, j: usize, ctx: &mut Ctx) -> Result<Out> {
    let region = t.poly();
    let (first, _, _) = toward_half(&t, j);
    let (e, f) = (sub(t.u, t.apex), sub(t.v, t.apex));
    let dirs = [first, e, f, Point::new(e.x + f.x, e.y + f.y)];
    // (low taker, high taker, normal, least cut, largest cut)
    let mut windows = Vec::new();
    for nu in dirs {
        let (lo, hi) = extent(&region, nu);
        let grow = hp_family(&region, nu, lo, hi);
        let neg = Point::new(-nu.x, -nu.y);
        let shrink = hp_family(&region, neg, -hi, -lo);
        let a = marks(subs, &grow, 1.0, ctx)?;
        let b: Vec<f64> = marks(subs, &shrink, 1.0, ctx)?.into_iter().map(|(_, s)| (hi - lo) - s).collect();
        for (p, q) in [(0, 1), (1, 0)] {
            let (from, to) = (a[p].1, b[q]);
            if from.is_finite() && to.is_finite() && from <= to + 1e-12 {
                windows.push((p, q, nu, lo, from, to));
            }
        }
    }
    for trim in [false, true] {
        let steps = if trim { 8 } else { 32 };
        for &(p, q, nu, lo, from, to) in &windows {
            for k in 0..=steps {
                let c = from + (to - from).max(0.0) * k as f64 / steps as f64;
                let low = clean(&poly::clip_halfplane(&region, nu.x, nu.y, lo + c));
                let high = clean(&poly::clip_halfplane(&region, -nu.x, -nu.y, -(lo + c)));
                let (low, high) = if trim {
                    match (fat_within(&subs[p], &low, ctx)?, fat_within(&subs[q], &high, ctx)?) {
                        (Some(a), Some(b)) => (a, b),
                        _ => continue,
                    }
                } else if is_fat(&low) && is_fat(&high) {
                    (low, high)
                } else {
                    continue;
                };
                if trim {
                    ctx.note("2-FFDP: two-agent split trimmed a piece to keep it 2-fat");
                }
                return Ok(vec![(subs[p].id, Piece::FfdPolygon(low)), (subs[q].id, Piece::FfdPolygon(high))]);
            }
        }
    }
    Err(Error::Invariant("no straight 45-degree cut gives both agents a 2-fat piece worth half".into()))
}

fn extent(region: &[Pt], nu: Pt) -> (f64, f64) {
    region.iter().map(|&p| dot(nu, p)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// A 2-fat part of `h` worth 1 to `s`, cut off by one more 45-degree line.
fn fat_within(s: &Sub, h: &[Pt], ctx: &mut Ctx) -> Result<Option<Vec<Pt>>> {
    if h.len() < 3 {
        return Ok(None);
    }
    if is_fat(h) {
        return Ok(Some(h.to_vec()));
    }
    for (x, y) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 0.0), (0.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)] {
        let nu = Point::new(x, y);
        let (lo, hi) = extent(h, nu);
        let fam = hp_family(h, nu, lo, hi);
        let t = ctx.mark(s, &fam, 1.0)?.t_or_inf();
        if !t.is_finite() {
            continue;
        }
        for k in 0..=8 {
            let c = t + (hi - lo - t) * k as f64 / 8.0;
            let part = clean(&verts(fam.piece(c)));
            if is_fat(&part) {
                return Ok(Some(part));
            }
        }
    }
    Ok(None)
}
