//! Square cakes: the two-agent procedure and the four-quarters procedure.

use super::*;
use crate::measure::best::lshape_square_cover;

/// Quarter `j` of the unit square (bit 0: right, bit 1: top), the cake corner
/// it touches and the inward directions from that corner.
pub(crate) fn quarter(j: usize) -> (R, Point<f64>, i8, i8) {
    let (cx, cy) = ((j & 1) as f64, (j >> 1) as f64);
    let r = Rect::new(cx * 0.5, cy * 0.5, cx * 0.5 + 0.5, cy * 0.5 + 0.5);
    let dx = if j & 1 == 0 { 1 } else { -1 };
    let dy = if j >> 1 == 0 { 1 } else { -1 };
    (r, Point::new(cx, cy), dx, dy)
}

pub(crate) fn square_cake(cake: &CakeDomain<f64>) -> Result<(R, Fr)> {
    let r = rect_of(cake)?;
    if !r.is_bounded() || !r.is_square(1e-9) {
        return Err(Error::Shape("the cake must be a bounded square".into()));
    }
    Ok((r, Frame::onto(&r, r.width())))
}

/// Two agents, each getting a square worth a quarter of the cake.
pub fn divide_square_two(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    if agents.len() != 2 {
        return Err(Error::Precondition("the two-agent procedure needs exactly two agents".into()));
    }
    let (_, f) = square_cake(cake)?;
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local = descend(&subs, &f, &R::unit());
    rescale(&mut local, 4.0);
    let out = ctx.within(&f, |ctx| two(&local, ctx))?;
    Finish { name: "square-two", agents, cake, bound: Bound::one_over(4.0), constants: None, normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

fn two(subs: &[Sub], ctx: &mut Ctx) -> Result<Out> {
    let choice: Vec<usize> = subs
        .iter()
        .map(|s| {
            let vals: Vec<f64> = (0..4).map(|j| ctx.eval(s, &Piece::Rect(quarter(j).0))).collect();
            (0..4).fold(0, |b, j| if vals[j] > vals[b] { j } else { b })
        })
        .collect();
    if choice[0] != choice[1] {
        return Ok((0..2).map(|i| (subs[i].id, Piece::Rect(quarter(choice[i]).0))).collect());
    }
    let (_, anchor, dx, dy) = quarter(choice[0]);
    let fam = Family::CornerSquare { anchor, dx, dy, max: 0.5 };
    let mut ts = Vec::new();
    for s in subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let sq = fam.piece(ts[w].1);
    let cover = lshape_square_cover(&R::unit(), &sq.bbox());
    let l = 1 - w;
    Ok(vec![(subs[w].id, sq), (subs[l].id, best_of(&subs[l], &cover))])
}

/// Any number of agents on a square; each gets a square worth `1/(6n-8)`.
pub fn four_quarters(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 2)?;
    let (_, f) = square_cake(cake)?;
    let n = agents.len();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local = descend(&subs, &f, &R::unit());
    rescale(&mut local, (6 * n - 8) as f64);
    let out = ctx.within(&f, |ctx| fq(local, ctx))?;
    let den = (6 * n - 8) as f64;
    Finish { name: "four-quarters", agents, cake, bound: Bound::one_over(den), constants: Some((6, 8)), normalization: Normalization::Absolute }
        .run(mapped(out, &f), ctx)
}

fn fq(mut subs: Vec<Sub>, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    if n == 1 {
        return Ok(vec![(subs[0].id, Piece::Rect(R::unit()))]);
    }
    let total = (6 * n - 8) as f64;
    normalize(&mut subs, total, "four-quarters")?;
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| (0..4).map(|j| ctx.eval(s, &Piece::Rect(quarter(j).0))).collect()).collect();
    let groups = rooms(&vals, |v| partner(v, 1.0, total - 3.0, n, |v| (v + 8.0) / 6.0))?;
    if let Some(j) = groups.iter().position(|g| g.len() == n) {
        return fq_hard(subs, j, ctx);
    }
    let mut out = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        if g.is_empty() {
            continue;
        }
        let f = Frame::onto(&quarter(j).0, 0.5);
        let child = descend(&pick(&subs, g), &f, &R::unit());
        let got = ctx.within(&f, |ctx| fq(child, ctx))?;
        out.extend(mapped(got, &f));
    }
    Ok(out)
}

fn fq_hard(subs: Vec<Sub>, j: usize, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let (_, anchor, dx, dy) = quarter(j);
    let fam = Family::CornerSquare { anchor, dx, dy, max: 0.5 };
    let target = (6 * n - 8) as f64 - 3.0;
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, target)?.t_or_inf()));
    }
    let w = argmax_mark(&ts);
    let side = ts[w].1;
    if !side.is_finite() {
        return Err(Error::Invariant("corner mark in the desired quarter is unreachable".into()));
    }
    let sq = fam.piece(side);
    let cover = lshape_square_cover(&R::unit(), &sq.bbox());
    let mut out = vec![(subs[w].id, best_of(&subs[w], &cover))];
    let rest: Vec<Sub> = subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, s)| s.clone()).collect();
    let f = Frame::onto(&sq.bbox(), side);
    let child = descend(&rest, &f, &R::unit());
    let got = ctx.within(&f, |ctx| fq(child, ctx))?;
    out.extend(mapped(got, &f));
    Ok(out)
}
