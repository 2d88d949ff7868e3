//! Pieces that are 2-fat rectangles.
//!
//! The n-agent procedure works on `[0,L] x [0,1]` with `1 <= L <= 2` and
//! needs a value of `4n-5` (1 for a single agent).

use super::*;
use crate::geometry::Walls;

fn need(n: usize) -> f64 {
    if n == 1 {
        1.0
    } else {
        4.0 * n as f64 - 5.0
    }
}

fn fat_cake(cake: &CakeDomain<f64>) -> Result<R> {
    let r = rect_of(cake)?;
    if !r.is_bounded() || cake.walls != Walls::all() || fatness(&r)? > 2.0 + 1e-9 {
        return Err(Error::Shape("the fat-rectangle procedures need a walled bounded 2-fat rectangle".into()));
    }
    Ok(r)
}

/// Index pair `(a, b)` with agent 0 taking part `a` and agent 1 part `b`,
/// each worth at least 1 to its taker.
fn split_two(vals: &[Vec<f64>]) -> Option<(usize, usize)> {
    let m = vals[0].len();
    for a in 0..m {
        for b in 0..m {
            if a != b && vals[0][a] >= 1.0 - EPS && vals[1][b] >= 1.0 - EPS {
                return Some((a, b));
            }
        }
    }
    None
}

/// Two agents on a square; each gets a 2-fat rectangle worth a third.
pub fn fatrect_two(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    if agents.len() != 2 {
        return Err(Error::Precondition("the two-agent fat-rectangle procedure needs exactly two agents".into()));
    }
    let r = fat_cake(cake)?;
    if !r.is_square(1e-9) {
        return Err(Error::Shape("the two-agent fat-rectangle procedure needs a square".into()));
    }
    let f = Frame::onto(&r, r.width());
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local = descend(&subs, &f, &R::unit());
    rescale(&mut local, 3.0);
    let out = ctx.within(&f, |ctx| two(&local, ctx))?;
    Finish { name: "fatrect-two", agents, cake, bound: Bound::one_over(3.0), constants: None, normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

fn two(subs: &[Sub], ctx: &mut Ctx) -> Result<Out> {
    let table = |parts: &[R], ctx: &mut Ctx| -> Vec<Vec<f64>> {
        subs.iter().map(|s| parts.iter().map(|p| ctx.eval(s, &Piece::Rect(*p))).collect()).collect()
    };
    let give = |parts: &[R], (a, b): (usize, usize)| vec![(subs[0].id, Piece::Rect(parts[a])), (subs[1].id, Piece::Rect(parts[b]))];
    let halves = [Rect::new(0.0, 0.0, 0.5, 1.0), Rect::new(0.5, 0.0, 1.0, 1.0)];
    let hv = table(&halves, ctx);
    if let Some(ab) = split_two(&hv) {
        return Ok(give(&halves, ab));
    }
    // both agents value the same half at 2 or more
    let h = if hv[0][0] >= hv[0][1] { 0 } else { 1 };
    let x0 = 0.5 * h as f64;
    let quarters = [Rect::new(x0, 0.0, x0 + 0.5, 0.5), Rect::new(x0, 0.5, x0 + 0.5, 1.0)];
    let qv = table(&quarters, ctx);
    if let Some(ab) = split_two(&qv) {
        return Ok(give(&quarters, ab));
    }
    let q = if qv[0][0] >= qv[0][1] { 0 } else { 1 };
    let (cx, cy) = (h, q);
    let anchor = Point::new(cx as f64, cy as f64);
    let (dx, dy) = (if cx == 0 { 1 } else { -1 }, if cy == 0 { 1 } else { -1 });
    let fam = Family::CornerSquare { anchor, dx, dy, max: 0.5 };
    let mut ts = Vec::new();
    for s in subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let t = ts[w].1;
    if !t.is_finite() {
        return Err(Error::Invariant("corner mark in the desired quarter is unreachable".into()));
    }
    let sq = fam.piece(t);
    let b = sq.bbox();
    // the rest is an L-shape covered by two 2-fat rectangles
    let cover = [
        Piece::Rect(if cx == 0 { Rect::new(b.xmax, 0.0, 1.0, 1.0) } else { Rect::new(0.0, 0.0, b.xmin, 1.0) }),
        Piece::Rect(if cy == 0 { Rect::new(0.0, b.ymax, 1.0, 1.0) } else { Rect::new(0.0, 0.0, 1.0, b.ymin) }),
    ];
    let l = 1 - w;
    Ok(vec![(subs[w].id, Piece::Rect(b)), (subs[l].id, best_of(&subs[l], &cover))])
}

/// Any number of agents on a 2-fat rectangle; each gets a 2-fat rectangle
/// worth `1/(4n-5)`. Two agents on a square use the two-agent procedure.
pub fn fatrect_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 2)?;
    let r = fat_cake(cake)?;
    let n = agents.len();
    if n == 2 && r.is_square(1e-9) {
        return fatrect_two(agents, cake);
    }
    let (f, l) = landscape(&r);
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let den = need(n);
    let mut local = descend(&subs, &f, &Rect::new(0.0, 0.0, l, 1.0));
    rescale(&mut local, den);
    let out = ctx.within(&f, |ctx| fr(local, l, ctx))?;
    Finish { name: "fatrect", agents, cake, bound: Bound::one_over(den), constants: Some((4, 5)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

fn on_landscape(subs: &[Sub], part: &R, ctx: &mut Ctx) -> Result<Out> {
    let (f, l) = landscape(part);
    let child = descend(subs, &f, &Rect::new(0.0, 0.0, l, 1.0));
    Ok(mapped(ctx.within(&f, |ctx| fr(child, l, ctx))?, &f))
}

fn on_frame(subs: &[Sub], f: &Fr, l: f64, ctx: &mut Ctx, body: fn(Vec<Sub>, f64, &mut Ctx) -> Result<Out>) -> Result<Out> {
    let child = descend(subs, f, &Rect::new(0.0, 0.0, l, 1.0));
    Ok(mapped(ctx.within(f, |ctx| body(child, l, ctx))?, f))
}

fn without(subs: &[Sub], w: usize) -> Vec<Sub> {
    subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, s)| s.clone()).collect()
}

fn fr(mut subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = need(n);
    normalize(&mut subs, total, "fat-rectangles")?;
    if n == 1 {
        return Ok(vec![(subs[0].id, Piece::Rect(Rect::new(0.0, 0.0, l, 1.0)))]);
    }
    let halves = [Rect::new(0.0, 0.0, l / 2.0, 1.0), Rect::new(l / 2.0, 0.0, l, 1.0)];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| halves.iter().map(|h| ctx.eval(s, &Piece::Rect(*h))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 1.0, n, |v| (v + 5.0) / 4.0))?;
    match groups.iter().position(|g| g.len() == n) {
        Some(0) => fr_hard(subs, l, ctx),
        Some(_) => on_frame(&subs, &Frame::flip_x(l), l, ctx, fr_hard),
        None => {
            let mut out = Vec::new();
            for (j, g) in groups.iter().enumerate() {
                if !g.is_empty() {
                    out.extend(on_landscape(&pick(&subs, g), &halves[j], ctx)?);
                }
            }
            Ok(out)
        }
    }
}

/// Everyone values the left half at `4n-6` or more.
fn fr_hard(subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = need(n);
    let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, l, 1.0), from: Side::Right };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let x = l - ts[w].1;
    if x >= 0.5 {
        let mut out = vec![(subs[w].id, Piece::Rect(Rect::new(x, 0.0, l, 1.0)))];
        out.extend(on_landscape(&without(&subs, w), &Rect::new(0.0, 0.0, x, 1.0), ctx)?);
        return Ok(out);
    }
    // all the value but 1 sits in [0,1/2] x [0,1]
    let sq = [Rect::new(0.0, 0.0, 0.5, 0.5), Rect::new(0.0, 0.5, 0.5, 1.0)];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| sq.iter().map(|h| ctx.eval(s, &Piece::Rect(*h))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 2.0, n, |v| (v + 5.0) / 4.0))?;
    match groups.iter().position(|g| g.len() == n) {
        Some(0) => fr_corner(subs, l, ctx),
        Some(_) => on_frame(&subs, &Frame::flip_y(1.0), l, ctx, fr_corner),
        None => {
            let mut out = Vec::new();
            for (j, g) in groups.iter().enumerate() {
                if !g.is_empty() {
                    out.extend(on_landscape(&pick(&subs, g), &sq[j], ctx)?);
                }
            }
            Ok(out)
        }
    }
}

/// Everyone values the bottom-left square `[0,1/2]^2` at `4n-7` or more.
fn fr_corner(subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let target = need(n) - 2.0;
    let fam = Family::CornerSquare { anchor: Point::new(0.0, 0.0), dx: 1, dy: 1, max: 0.5 };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, target)?.t_or_inf()));
    }
    let w = argmax_mark(&ts);
    let s = ts[w].1;
    if !s.is_finite() {
        return Err(Error::Invariant("corner mark in the desired square is unreachable".into()));
    }
    let cover = [Piece::Rect(Rect::new(s, 0.0, l, 1.0)), Piece::Rect(Rect::new(0.0, s, 1.0 - s, 1.0))];
    let mut out = vec![(subs[w].id, best_of(&subs[w], &cover))];
    out.extend(on_landscape(&without(&subs, w), &Rect::new(0.0, 0.0, s, s), ctx)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn two_uniform_get_halves() {
        let cake = CakeDomain::square(1.0);
        let u = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let ag = vec![Agent::new(0, u.clone()), Agent::new(1, u)];
        let d = fatrect_divide(&ag, &cake).unwrap();
        verify(&d, &ag, &cake, PieceFamily::FatRects, &Tolerances::default()).unwrap();
        for r in &d.report.results {
            assert!((r.fraction - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn two_concentrated_in_one_quarter() {
        let cake = CakeDomain::square(1.0);
        let d = GridDensity::uniform(&Rect::new(0.0, 0.0, 0.5, 0.5), 1.0).unwrap();
        let ag = vec![Agent::new(0, d.clone()), Agent::new(1, d)];
        let div = fatrect_two(&ag, &cake).unwrap();
        verify(&div, &ag, &cake, PieceFamily::FatRects, &Tolerances::default()).unwrap();
    }

    #[test]
    fn random_fat_rects() {
        for (w, h) in [(1.0, 1.0), (2.0, 1.0), (1.0, 1.6)] {
            let r = Rect::new(0.0, 0.0, w, h);
            let cake = CakeDomain::rect(r, Walls::all());
            for n in 2..=6 {
                for seed in 0..15 {
                    let ag = agents(&r, n, seed);
                    let d = fatrect_divide(&ag, &cake).unwrap();
                    verify(&d, &ag, &cake, PieceFamily::FatRects, &Tolerances::default()).unwrap();
                }
            }
        }
    }

    #[test]
    fn point_masses_force_hard_cases() {
        let cake = CakeDomain::square(1.0);
        for n in 2..=5 {
            let d = GridDensity::uniform(&Rect::new(0.1, 0.1, 0.12, 0.12), 1.0).unwrap();
            let ag: Vec<Agent> = (0..n).map(|i| Agent::new(i, d.clone())).collect();
            let div = fatrect_divide(&ag, &cake).unwrap();
            verify(&div, &ag, &cake, PieceFamily::FatRects, &Tolerances::default()).unwrap();
        }
    }
}
