//! The mutually recursive 4-walls and 3-walls procedures.
//!
//! 4-walls works on `[0,L] x [0,1]` with `1 <= L <= 2` and needs a value of
//! `max(2, 4n-4)`. 3-walls works on `[0,L] x [0,1]` with `L <= 1`, may spill
//! over the open right side up to `x = L + 1`, and needs `max(1, 4n-5)`.

use super::*;
use crate::geometry::Square;
use crate::measure::best::two_square_cover;

fn side_count(cake: &CakeDomain<f64>) -> (R, Vec<Side>) {
    let w = cake.walls;
    let open = [(w.left, Side::Left), (w.right, Side::Right), (w.bottom, Side::Bottom), (w.top, Side::Top)]
        .iter()
        .filter(|(on, _)| !on)
        .map(|(_, s)| *s)
        .collect();
    (rect_of(cake).unwrap_or(R::unit()), open)
}

pub fn divide_four_walls(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let r = rect_of(cake)?;
    if !r.is_bounded() || fatness(&r)? > 2.0 + 1e-9 {
        return Err(Error::Shape("4-walls needs a bounded 2-fat rectangle".into()));
    }
    let (f, l) = landscape(&r);
    let n = agents.len();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let den = (4 * n as i64 - 4).max(2) as f64;
    let mut local = descend(&subs, &f, &Rect::new(0.0, 0.0, l, 1.0));
    rescale(&mut local, den);
    let out = ctx.within(&f, |ctx| four(local, l, ctx))?;
    Finish { name: "four-walls", agents, cake, bound: Bound::one_over(den), constants: Some((4, 4)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

pub fn divide_three_walls(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let (r, open) = side_count(cake);
    rect_of(cake)?;
    if open.len() != 1 || !r.is_bounded() {
        return Err(Error::Shape("3-walls needs a bounded rectangle with exactly one open side".into()));
    }
    let side = open[0];
    let (span, depth) = match side {
        Side::Left | Side::Right => (r.height(), r.width()),
        Side::Bottom | Side::Top => (r.width(), r.height()),
    };
    if depth > span * (1.0 + 1e-9) {
        return Err(Error::Shape("the open side of a 3-walls cake must be a longer side".into()));
    }
    let f = toward(&r, side, span);
    let l = (depth / span).min(1.0);
    let n = agents.len();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let den = (4 * n as i64 - 5).max(1) as f64;
    let mut local = descend(&subs, &f, &Rect::new(0.0, 0.0, l, 1.0));
    rescale(&mut local, den);
    let out = ctx.within(&f, |ctx| three(local, l, ctx))?;
    Finish { name: "three-walls", agents, cake, bound: Bound::one_over(den), constants: Some((4, 5)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

/// Runs `body` on the local rectangle `part` put in landscape position.
fn on_landscape(subs: &[Sub], part: &R, ctx: &mut Ctx, body: fn(Vec<Sub>, f64, &mut Ctx) -> Result<Out>) -> Result<Out> {
    let (f, l) = landscape(part);
    let child = descend(subs, &f, &Rect::new(0.0, 0.0, l, 1.0));
    Ok(mapped(ctx.within(&f, |ctx| body(child, l, ctx))?, &f))
}

/// Runs `body` on the local frame `f`, whose local cake is `[0,l] x [0,1]`.
fn on_frame(subs: &[Sub], f: &Fr, l: f64, ctx: &mut Ctx, body: fn(Vec<Sub>, f64, &mut Ctx) -> Result<Out>) -> Result<Out> {
    let child = descend(subs, f, &Rect::new(0.0, 0.0, l, 1.0));
    Ok(mapped(ctx.within(f, |ctx| body(child, l, ctx))?, f))
}

fn without(subs: &[Sub], w: usize) -> Vec<Sub> {
    subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, s)| s.clone()).collect()
}

fn bottom_square() -> R {
    Rect::new(0.0, 0.0, 0.5, 0.5)
}

fn upper_square() -> R {
    Rect::new(0.0, 0.5, 0.5, 1.0)
}

pub(crate) fn four(mut subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = (4.0 * n as f64 - 4.0).max(2.0);
    normalize(&mut subs, total, "4-walls")?;
    let cake = Rect::new(0.0, 0.0, l, 1.0);
    if n == 1 {
        return Ok(vec![(subs[0].id, best_of(&subs[0], &two_square_cover(&cake)))]);
    }
    let halves = [Rect::new(0.0, 0.0, l / 2.0, 1.0), Rect::new(l / 2.0, 0.0, l, 1.0)];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| halves.iter().map(|h| ctx.eval(s, &Piece::Rect(*h))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 2.0, total - 2.0, n, |v| (v + 4.0) / 4.0))?;
    match groups.iter().position(|g| g.len() == n) {
        Some(0) => four_hard(subs, l, ctx),
        Some(_) => on_frame(&subs, &Frame::flip_x(l), l, ctx, four_hard),
        None => {
            let mut out = Vec::new();
            for (j, g) in groups.iter().enumerate() {
                if !g.is_empty() {
                    out.extend(on_landscape(&pick(&subs, g), &halves[j], ctx, four)?);
                }
            }
            Ok(out)
        }
    }
}

/// Everyone wants the left half.
fn four_hard(subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = 4.0 * n as f64 - 4.0;
    let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, l, 1.0), from: Side::Right };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, 2.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let x = l - ts[w].1;
    if x >= 0.5 {
        let right = Rect::new(x, 0.0, l, 1.0);
        let mut out = vec![(subs[w].id, best_of(&subs[w], &two_square_cover(&right)))];
        out.extend(on_landscape(&without(&subs, w), &Rect::new(0.0, 0.0, x, 1.0), ctx, four)?);
        return Ok(out);
    }
    let sq = [bottom_square(), upper_square()];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| sq.iter().map(|h| ctx.eval(s, &Piece::Rect(*h))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 3.0, n, |v| (v + 5.0) / 4.0))?;
    match groups.iter().position(|g| g.len() == n) {
        Some(0) => corner_step(subs, l, total - 3.0, true, ctx),
        Some(_) => on_frame(&subs, &Frame::flip_y(1.0), l, ctx, |s, l, ctx| { let t = 4.0 * s.len() as f64 - 7.0; corner_step(s, l, t, true, ctx) }),
        None => split_squares(&subs, &groups, ctx),
    }
}

/// 3-walls on each of the two left squares, spilling right up to `x = 1`.
fn split_squares(subs: &[Sub], groups: &[Vec<usize>], ctx: &mut Ctx) -> Result<Out> {
    let sq = [bottom_square(), upper_square()];
    let mut out = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if !g.is_empty() {
            out.extend(on_frame(&pick(subs, g), &Frame::onto(&sq[j], 0.5), 1.0, ctx, three)?);
        }
    }
    Ok(out)
}

/// Everyone wants the bottom-left square: corner squares worth `target`, the
/// largest goes to the others and its owner takes the top square or a piece
/// of the right part.
fn corner_step(subs: Vec<Sub>, l: f64, target: f64, bounded: bool, ctx: &mut Ctx) -> Result<Out> {
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
    let top = Piece::Square(Square::new(0.0, s, 1.0 - s));
    let cmax = Rect::new(0.0, 0.0, s, s);
    let rest = without(&subs, w);
    let mut out;
    let f;
    if subs[w].v(&top) >= 1.0 {
        out = vec![(subs[w].id, top)];
        f = Frame::onto(&cmax, s);
    } else {
        let piece = if bounded {
            best_of(&subs[w], &two_square_cover(&Rect::new(s, 0.0, l, 1.0)))
        } else {
            Piece::Square(Square::new(s, 0.0, 1.0))
        };
        out = vec![(subs[w].id, piece)];
        f = toward(&cmax, Side::Top, s);
    }
    out.extend(on_frame(&rest, &f, 1.0, ctx, three)?);
    Ok(out)
}

pub(crate) fn three(mut subs: Vec<Sub>, l: f64, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    if n == 1 {
        return Ok(vec![(subs[0].id, Piece::Square(Square::new(0.0, 0.0, 1.0)))]);
    }
    let total = 4.0 * n as f64 - 5.0;
    normalize(&mut subs, total, "3-walls")?;
    let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, l, 1.0), from: Side::Right };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let x = l - ts[w].1;
    if x >= 0.5 {
        let mut out = vec![(subs[w].id, Piece::Square(Square::new(x, 0.0, 1.0)))];
        out.extend(on_landscape(&without(&subs, w), &Rect::new(0.0, 0.0, x, 1.0), ctx, four)?);
        return Ok(out);
    }
    let sq = [bottom_square(), upper_square()];
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| sq.iter().map(|h| ctx.eval(s, &Piece::Rect(*h))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 2.0, n, |v| (v + 5.0) / 4.0))?;
    match groups.iter().position(|g| g.len() == n) {
        Some(0) => corner_step(subs, l, total - 2.0, false, ctx),
        Some(_) => on_frame(&subs, &Frame::flip_y(1.0), l, ctx, |s, l, ctx| { let t = 4.0 * s.len() as f64 - 7.0; corner_step(s, l, t, false, ctx) }),
        None => split_squares(&subs, &groups, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::geometry::Walls;

    #[test]
    fn single_agent_two_square_cover() {
        let r = Rect::new(0.0, 0.0, 2.0, 1.0);
        let cake = CakeDomain::rect(r, Walls::all());
        let ag = vec![Agent::new(0, GridDensity::uniform(&r, 1.0).unwrap())];
        let d = divide_four_walls(&ag, &cake).unwrap();
        assert!(d.report.results[0].fraction >= 0.5 - 1e-9);
    }

    #[test]
    fn two_uniform_on_square() {
        let cake = CakeDomain::square(1.0);
        let u = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let ag = vec![Agent::new(0, u.clone()), Agent::new(1, u)];
        let d = divide_four_walls(&ag, &cake).unwrap();
        verify(&d, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).unwrap();
    }

    #[test]
    fn random_walls() {
        let r4 = Rect::new(0.0, 0.0, 1.7, 1.0);
        let c4 = CakeDomain::rect(r4, Walls::all());
        let r3 = Rect::new(0.0, 0.0, 0.8, 1.0);
        let c3 = CakeDomain::rect(r3, Walls { left: true, right: false, bottom: true, top: true });
        for n in 1..=6 {
            for seed in 0..15 {
                let ag = agents(&r4, n, seed);
                let d = divide_four_walls(&ag, &c4).unwrap();
                verify(&d, &ag, &c4, PieceFamily::Squares, &Tolerances::default()).unwrap();
                let ag = agents(&r3, n, seed + 1000);
                let d = divide_three_walls(&ag, &c3).unwrap();
                verify(&d, &ag, &c3, PieceFamily::Squares, &Tolerances::default()).unwrap();
            }
        }
    }
}
