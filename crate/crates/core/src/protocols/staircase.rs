//! Cakes with two walls or fewer: staircases (the quarter-plane is the
//! one-corner case), the half-plane and the plane.

use super::*;
use crate::geometry::{remove_shadow, Square, Staircase};

/// `d` with the value outside `keep` removed; `xs`/`ys` are extra cuts.
pub(crate) fn keep_where(d: &D, xs: &[f64], ys: &[f64], keep: impl Fn(f64, f64) -> bool) -> D {
    let merge = |a: &[f64], b: &[f64]| {
        let (lo, hi) = (a[0], a[a.len() - 1]);
        let mut v: Vec<f64> = a.iter().chain(b.iter().filter(|c| c.is_finite() && **c > lo && **c < hi)).cloned().collect();
        v.sort_by(|p, q| p.partial_cmp(q).unwrap());
        v.dedup();
        v
    };
    let gx = merge(d.xs(), xs);
    let gy = merge(d.ys(), ys);
    let cells = gy
        .windows(2)
        .map(|wy| {
            gx.windows(2)
                .map(|wx| {
                    let (cx, cy) = (0.5 * (wx[0] + wx[1]), 0.5 * (wy[0] + wy[1]));
                    if keep(cx, cy) {
                        d.density_at(cx, cy)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    GridDensity::new(gx, gy, cells).expect("refinement of a valid grid")
}

/// Frame of a two-wall rectangle cake whose local cake is the quadrant
/// `x, y >= 0`, or `None` if the walls are not two adjacent ones.
fn quadrant_frame(cake: &CakeDomain<f64>) -> Option<Fr> {
    let r = match &cake.base {
        CakeBase::Rect(r) => *r,
        _ => return None,
    };
    let w = cake.walls;
    if w.count() != 2 || w.left == w.right || w.bottom == w.top {
        return None;
    }
    let (ox, sx) = if w.left { (r.xmin, 1) } else { (r.xmax, -1) };
    let (oy, sy) = if w.bottom { (r.ymin, 1) } else { (r.ymax, -1) };
    let open_ok = if w.left { r.xmax == f64::INFINITY } else { r.xmin == f64::NEG_INFINITY }
        && if w.bottom { r.ymax == f64::INFINITY } else { r.ymin == f64::NEG_INFINITY };
    if !open_ok || !ox.is_finite() || !oy.is_finite() {
        return None;
    }
    Some(Frame { origin: Point::new(ox, oy), scale: 1.0, col: [0, 1], sign: [sx, sy] })
}

/// Divides a staircase, or a rectangle cake with two adjacent walls and the
/// other two sides open (a quarter-plane); bound `1/(2n-2+k)`.
pub fn staircase_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let (f, st) = match &cake.base {
        CakeBase::Staircase(s) => {
            s.validate()?;
            (Frame::identity(), s.clone())
        }
        _ => {
            let f = quadrant_frame(cake)
                .ok_or_else(|| Error::Shape("the staircase procedure needs a staircase or a quarter-plane".into()))?;
            (f, Staircase::quarter_plane(Point::new(0.0, 0.0)))
        }
    };
    let n = agents.len();
    let k = st.k();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local: Vec<Sub> = subs.iter().map(|s| Sub { id: s.id, d: s.d.pullback(&f) }).collect();
    let den = (2 * n + k - 2) as f64;
    rescale(&mut local, den);
    let out = ctx.within(&f, |ctx| stair(local, st, ctx))?;
    Finish { name: "staircase", agents, cake, bound: Bound::one_over(den), constants: Some((2, 2 - k as i64)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

/// A finite square at `corner` holding all of the agent's value in the quadrant there.
fn covering_square(d: &D, corner: Point<f64>) -> P {
    let side = match d.support() {
        Some(s) => (s.xmax - corner.x).max(s.ymax - corner.y).max(1e-9),
        None => 1.0,
    };
    Piece::Square(Square::new(corner.x, corner.y, side))
}

pub(crate) fn stair(mut subs: Vec<Sub>, st: Staircase<f64>, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let k = st.k();
    let total = (2 * n + k - 2) as f64;
    if n == 1 {
        let s = &subs[0];
        let cover: Vec<P> = st.corners.iter().map(|c| covering_square(&s.d, *c)).collect();
        return Ok(vec![(s.id, best_of(s, &cover))]);
    }
    normalize(&mut subs, total, "staircase")?;
    // (key, agent id, corner, side, agent index)
    let mut best: Option<(f64, usize, usize, f64, usize)> = None;
    for (i, s) in subs.iter().enumerate() {
        for (j, c) in st.corners.iter().enumerate() {
            let fam = Family::CornerSquare { anchor: *c, dx: 1, dy: 1, max: f64::INFINITY };
            let l = ctx.mark(s, &fam, 1.0)?.t_or_inf();
            let key = c.x + c.y + l;
            let better = match best {
                None => l.is_finite(),
                Some((bk, bid, bj, _, _)) => l.is_finite() && (key < bk || (key == bk && (s.id, j) < (bid, bj))),
            };
            if better {
                best = Some((key, s.id, j, l, i));
            }
        }
    }
    let (_, id, j, l, w) = best.ok_or_else(|| Error::Invariant("no agent reaches value 1 at any corner".into()))?;
    let c = st.corners[j];
    let win = Square::new(c.x, c.y, l);
    let rest_st = remove_shadow(&st, &win, 1e-9)?;
    let (bx, by) = (c.x + l, c.y + l);
    let need = (2 * (n - 1) + rest_st.k()) as f64 - 2.0;
    let mut rest = Vec::with_capacity(n - 1);
    for (i, s) in subs.iter().enumerate() {
        if i == w {
            continue;
        }
        let d = keep_where(&s.d, &[bx], &[by], |x, y| !(x < bx && y < by));
        let v = d.total();
        if v < need * (1.0 - 1e-7) - 1e-9 {
            return Err(Error::Invariant(format!("agent {} keeps {} after the shadow removal, below {}", s.id, v, need)));
        }
        rest.push(Sub { id: s.id, d });
    }
    let mut out = vec![(id, Piece::Square(win))];
    out.extend(stair(rest, rest_st, ctx)?);
    Ok(out)
}

/// Frame of a one-wall rectangle cake whose local cake is the half-plane `y >= 0`.
fn half_frame(cake: &CakeDomain<f64>) -> Option<Fr> {
    let r = match &cake.base {
        CakeBase::Rect(r) => *r,
        _ => return None,
    };
    let w = cake.walls;
    if w.count() != 1 {
        return None;
    }
    let inf = f64::INFINITY;
    let open = |lo: f64, hi: f64| lo == -inf && hi == inf;
    let f = if w.bottom && open(r.xmin, r.xmax) && r.ymax == inf {
        Frame { origin: Point::new(0.0, r.ymin), scale: 1.0, col: [0, 1], sign: [1, 1] }
    } else if w.top && open(r.xmin, r.xmax) && r.ymin == -inf {
        Frame { origin: Point::new(0.0, r.ymax), scale: 1.0, col: [0, 1], sign: [1, -1] }
    } else if w.left && open(r.ymin, r.ymax) && r.xmax == inf {
        Frame { origin: Point::new(r.xmin, 0.0), scale: 1.0, col: [1, 0], sign: [1, 1] }
    } else if w.right && open(r.ymin, r.ymax) && r.xmin == -inf {
        Frame { origin: Point::new(r.xmax, 0.0), scale: 1.0, col: [1, 0], sign: [-1, 1] }
    } else {
        return None;
    };
    Some(f)
}

fn union_support(subs: &[Sub]) -> Option<R> {
    subs.iter().filter_map(|s| s.d.support()).reduce(|a, b| {
        Rect::new(a.xmin.min(b.xmin), a.ymin.min(b.ymin), a.xmax.max(b.xmax), a.ymax.max(b.ymax))
    })
}

/// Divides a half-plane (a rectangle cake with one wall and three open
/// sides); bound `1/(2n-2)`, and the whole value for a single agent.
pub fn half_plane_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let f = half_frame(cake).ok_or_else(|| Error::Shape("the half-plane procedure needs one wall and three open sides".into()))?;
    let n = agents.len();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local: Vec<Sub> = subs.iter().map(|s| Sub { id: s.id, d: s.d.pullback(&f) }).collect();
    let den = (2 * n).saturating_sub(2).max(1) as f64;
    rescale(&mut local, den);
    let out = ctx.within(&f, |ctx| half(local, ctx))?;
    Finish { name: "half-plane", agents, cake, bound: Bound::one_over(den), constants: Some((2, 2)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

/// Half-plane `y >= 0` with its wall at `y = 0`.
pub(crate) fn half(mut subs: Vec<Sub>, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let sup = union_support(&subs).unwrap_or(Rect::new(0.0, 0.0, 1.0, 1.0));
    if n == 1 {
        let side = sup.width().max(sup.ymax).max(1e-9);
        return Ok(vec![(subs[0].id, Piece::square(sup.xmin, 0.0, side))]);
    }
    normalize(&mut subs, (2 * n - 2) as f64, "half-plane")?;
    let fam = Family::Sweep { rect: Rect::new(sup.xmin, 0.0, sup.xmax, sup.ymax.max(1.0)), from: Side::Left };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let x = sup.xmin + ts[w].1;
    if !x.is_finite() {
        return Err(Error::Invariant("no agent reaches value 1 in the half-plane".into()));
    }
    let inf = f64::INFINITY;
    let mut out = vec![(subs[w].id, Piece::QuarterPlane(Rect::new(-inf, 0.0, x, inf)))];
    let rest: Vec<Sub> = subs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != w)
        .map(|(_, s)| Sub { id: s.id, d: keep_where(&s.d, &[x], &[], |cx, _| cx > x) })
        .collect();
    out.extend(stair(rest, Staircase::quarter_plane(Point::new(x, 0.0)), ctx)?);
    Ok(out)
}

/// Value a half-plane needs for `k` agents.
fn half_need(k: usize) -> f64 {
    if k <= 1 {
        1.0
    } else {
        (2 * k - 2) as f64
    }
}

/// Divides the whole plane (a rectangle cake with no walls and all sides
/// infinite); bound `1/max(2n-4, n)`.
pub fn plane_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let r = rect_of(cake)?;
    if cake.walls.count() != 0 || r.is_bounded() || r.xmin.is_finite() || r.xmax.is_finite() || r.ymin.is_finite() || r.ymax.is_finite() {
        return Err(Error::Shape("the plane procedure needs the whole plane without walls".into()));
    }
    let n = agents.len();
    let mut ctx = Ctx::default();
    let mut subs = prepare(agents, cake, &mut ctx)?;
    let den = (2 * n as i64 - 4).max(n as i64) as f64;
    rescale(&mut subs, den);
    let out = plane(subs, &mut ctx)?;
    Finish { name: "plane", agents, cake, bound: Bound::one_over(den), constants: None, normalization: Normalization::Absolute }.run(out, ctx)
}

fn plane(subs: Vec<Sub>, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let sup = union_support(&subs).unwrap_or(Rect::new(0.0, 0.0, 1.0, 1.0));
    if n == 1 {
        let side = sup.width().max(sup.height()).max(1e-9);
        return Ok(vec![(subs[0].id, Piece::square(sup.xmin, sup.ymin, side))]);
    }
    let a = if n <= 3 { 1 } else { 2 };
    let fam = Family::Sweep { rect: sup, from: Side::Left };
    let mut marks = Vec::new();
    for (i, s) in subs.iter().enumerate() {
        marks.push((ctx.mark(s, &fam, half_need(a))?.t_or_inf(), s.id, i));
    }
    marks.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap().then(p.1.cmp(&q.1)));
    let c = sup.xmin + marks[a - 1].0;
    if !c.is_finite() {
        return Err(Error::Invariant("plane cut mark is unreachable".into()));
    }
    ctx.note(format!("plane cut at x = {} with {} agent(s) on the left", c, a));
    let left_idx: Vec<usize> = marks[..a].iter().map(|m| m.2).collect();
    let right_idx: Vec<usize> = marks[a..].iter().map(|m| m.2).collect();
    let mut out = Vec::new();
    // left half-plane x <= c: local y = c - x
    let fl = Frame { origin: Point::new(c, 0.0), scale: 1.0, col: [1, 0], sign: [-1, 1] };
    let fr = Frame { origin: Point::new(c, 0.0), scale: 1.0, col: [1, 0], sign: [1, 1] };
    for (idx, f, left) in [(left_idx, fl, true), (right_idx, fr, false)] {
        let part: Vec<Sub> = pick(&subs, &idx)
            .into_iter()
            .map(|s| {
                let d = keep_where(&s.d, &[c], &[], |x, _| if left { x < c } else { x > c });
                Sub { id: s.id, d: d.pullback(&f) }
            })
            .collect();
        let got = ctx.within(&f, |ctx| half(part, ctx))?;
        out.extend(mapped(got, &f));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::geometry::Walls;

    fn masked(st: &Staircase<f64>, d: D) -> D {
        let xs: Vec<f64> = st.corners.iter().map(|c| c.x).collect();
        let ys: Vec<f64> = st.corners.iter().map(|c| c.y).collect();
        keep_where(&d, &xs, &ys, |x, y| st.contains_point(Point::new(x, y), 0.0))
    }

    #[test]
    fn quarter_plane_symmetric_pools() {
        let inf = f64::INFINITY;
        let cake = CakeDomain::rect(Rect::new(0.0, 0.0, inf, inf), Walls { left: true, right: false, bottom: true, top: false });
        let e = 0.01;
        let d = GridDensity::from_blocks(&[
            (Rect::new(0.0, 0.0, e, e), 1.0),
            (Rect::new(10.0, 0.0, 10.0 + e, e), 1.0),
            (Rect::new(0.0, 10.0, e, 10.0 + e), 1.0),
        ])
        .unwrap();
        let ag = vec![Agent::new(0, d.clone()), Agent::new(1, d)];
        let div = staircase_divide(&ag, &cake).unwrap();
        verify(&div, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).unwrap();
        assert!((div.report.min_fraction() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn random_staircases() {
        let st = Staircase::new(vec![Point::new(0.0, 3.0), Point::new(1.0, 2.0), Point::new(2.0, 1.0), Point::new(3.0, 0.0)]).unwrap();
        let cake = CakeDomain { base: CakeBase::Staircase(st.clone()), walls: Walls { left: true, right: false, bottom: true, top: false } };
        let box_ = Rect::new(0.0, 0.0, 5.0, 5.0);
        for n in 1..=5 {
            for seed in 0..20 {
                let ag: Vec<Agent> = agents(&box_, n, seed).into_iter().map(|a| Agent::new(a.id, masked(&st, a.density))).collect();
                let d = staircase_divide(&ag, &cake).unwrap();
                verify(&d, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).unwrap();
            }
        }
    }

    #[test]
    fn random_half_and_plane() {
        let inf = f64::INFINITY;
        let hp = CakeDomain::rect(Rect::new(-inf, 0.0, inf, inf), Walls { left: false, right: false, bottom: true, top: false });
        let hp_top = CakeDomain::rect(Rect::new(-inf, -inf, inf, 2.0), Walls { left: false, right: false, bottom: false, top: true });
        let pl = CakeDomain::rect(Rect::new(-inf, -inf, inf, inf), Walls::none());
        for n in 1..=6 {
            for seed in 0..20 {
                let ag = agents(&Rect::new(-2.0, 0.0, 3.0, 4.0), n, seed);
                let d = half_plane_divide(&ag, &hp).unwrap();
                verify(&d, &ag, &hp, PieceFamily::Squares, &Tolerances::default()).unwrap();
                let ag = agents(&Rect::new(-2.0, -3.0, 3.0, 2.0), n, seed + 77);
                let d = half_plane_divide(&ag, &hp_top).unwrap();
                verify(&d, &ag, &hp_top, PieceFamily::Squares, &Tolerances::default()).unwrap();
                let d = plane_divide(&ag, &pl).unwrap();
                verify(&d, &ag, &pl, PieceFamily::Squares, &Tolerances::default()).unwrap();
            }
        }
    }
}
