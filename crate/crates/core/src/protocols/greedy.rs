//! Compact cakes of any shape, with fractions relative to each agent's best
//! square in the cake.

use super::same::fat;
use super::*;
use crate::geometry::{overlap_bound_check, Square};

fn as_square(p: &P) -> Result<Square<f64>> {
    match p {
        Piece::Square(s) if s.side.is_finite() => Ok(*s),
        Piece::Rect(r) if r.is_bounded() => Square::from_rect(r, 1e-9).ok_or_else(|| Error::Invariant("expected a square rectangle".into())),
        _ => Err(Error::Invariant(format!("expected a finite square, got a {}", p.kind()))),
    }
}

fn compact(cake: &CakeDomain<f64>) -> Result<Region<f64>> {
    let ok = match &cake.base {
        CakeBase::Rect(r) => r.is_bounded() && cake.walls.count() == 4,
        CakeBase::GridRegion { .. } => true,
        _ => false,
    };
    if !ok {
        return Err(Error::Shape("the greedy procedures need a compact cake (a walled rectangle or a grid region)".into()));
    }
    Region::from_domain(cake)
}

/// `m` disjoint squares inside the square `q`, each worth at least `1/(2m)` of it.
fn split_square(d: &D, q: &Square<f64>, m: usize, ctx: &mut Ctx) -> Result<Vec<Square<f64>>> {
    let f = Frame::onto(&q.rect(), q.side);
    let local = d.restricted(&q.rect()).pullback(&f);
    let local = local.scaled(2.0 * m as f64 / local.total());
    let got = ctx.within(&f, |ctx| fat(local, m, 1.0, ctx))?;
    got.iter().map(|p| as_square(&p.map(&f))).collect()
}

/// Outcome of the greedy selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub chosen: Vec<(usize, Square<f64>)>,
    /// Largest number of squares one step removed from one other collection.
    pub max_removed: usize,
}

/// Repeatedly gives the smallest square of all collections to its owner and
/// drops the squares of the other collections that overlap it. Each
/// collection must be pairwise interior-disjoint.
pub fn greedy_select(collections: &[(usize, Vec<Square<f64>>)]) -> Result<Selection> {
    let mut live: Vec<(usize, Vec<Square<f64>>)> = collections.to_vec();
    let mut chosen = Vec::with_capacity(live.len());
    let mut max_removed = 0;
    while !live.is_empty() {
        let mut pick: Option<(f64, usize, usize, usize)> = None;
        for (a, (id, q)) in live.iter().enumerate() {
            for (b, s) in q.iter().enumerate() {
                let better = match pick {
                    None => true,
                    Some((side, bid, _, _)) => s.side < side || (s.side == side && *id < bid),
                };
                if better {
                    pick = Some((s.side, *id, a, b));
                }
            }
        }
        let (_, id, a, b) = pick.ok_or_else(|| Error::Invariant("an agent ran out of squares".into()))?;
        let win = live[a].1[b];
        chosen.push((id, win));
        live.remove(a);
        for (_, q) in live.iter_mut() {
            let (ok, count) = overlap_bound_check(&win, q, 1e-9)?;
            if !ok {
                return Err(Error::Invariant(format!("{} squares overlap the selected square", count)));
            }
            max_removed = max_removed.max(count);
            let w = Piece::Square(win);
            q.retain(|s| first_overlap(&[w.clone(), Piece::Square(*s)], 1e-9).is_none());
        }
    }
    Ok(Selection { chosen, max_removed })
}

/// Each agent splits its best square into `4n-3` squares worth at least
/// `1/(8n-6)` of it, then the greedy selection picks one per agent.
pub fn greedy_compact_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let region = compact(cake)?;
    let n = agents.len();
    let m = 4 * n - 3;
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut collections = Vec::with_capacity(n);
    for s in &subs {
        let q = as_square(&best_square(&s.d, &region, 1e-9).piece)?;
        if !(q.side > 0.0) || !(s.vr(&q.rect()) > 0.0) {
            return Err(Error::Invariant(format!("no valuable square found for agent {}", s.id)));
        }
        collections.push((s.id, split_square(&s.d, &q, m, &mut ctx)?));
    }
    let sel = greedy_select(&collections)?;
    ctx.note(format!("greedy selection removed at most {} squares per step", sel.max_removed));
    let out: Out = sel.chosen.into_iter().map(|(id, s)| (id, Piece::Square(s))).collect();
    Finish {
        name: "greedy-compact",
        agents,
        cake,
        bound: Bound::one_over((8 * n - 6) as f64),
        constants: None,
        normalization: Normalization::Relative,
    }
    .run(out, ctx)
}

/// Agents with one shared measure: the best square split into `n` squares;
/// relative bound `1/(2n)`.
pub fn greedy_same_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let region = compact(cake)?;
    let n = agents.len();
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let d = &subs[0].d;
    if subs.iter().any(|s| s.d != *d) {
        return Err(Error::Precondition("the same-measure procedure needs identical densities".into()));
    }
    let q = as_square(&best_square(d, &region, 1e-9).piece)?;
    if !(q.side > 0.0) {
        return Err(Error::Invariant("no valuable square in the cake".into()));
    }
    let squares = split_square(d, &q, n, &mut ctx)?;
    let mut ids: Vec<usize> = agents.iter().map(|a| a.id).collect();
    ids.sort_unstable();
    let out: Out = ids.into_iter().zip(squares.into_iter().map(Piece::Square)).collect();
    Finish { name: "greedy-same", agents, cake, bound: Bound::one_over((2 * n) as f64), constants: None, normalization: Normalization::Relative }
        .run(out, ctx)
}
