//! Pieces that are unions of two equal squares.
//!
//! The n-agent procedure works on the unit square and needs a value of
//! `3n-4` (1 for a single agent, 2 for two agents).

use super::square::{quarter, square_cake};
use super::*;
use crate::geometry::Square;

fn need(n: usize) -> f64 {
    match n {
        1 => 1.0,
        _ => 3.0 * n as f64 - 4.0,
    }
}

fn sq(r: &R) -> Square<f64> {
    Square::new(r.xmin, r.ymin, r.width())
}

/// The two diagonal pairs of quarters.
const DIAGONALS: [[usize; 2]; 2] = [[0, 3], [1, 2]];

/// Two agents on a square; each gets a pair of squares worth half the cake.
pub fn pairs_two(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    if agents.len() != 2 {
        return Err(Error::Precondition("the two-agent square-pair procedure needs exactly two agents".into()));
    }
    run(agents, cake, "pairs-two", Bound::one_over(2.0), None)
}

/// Any number of agents on a square; each gets a pair of squares worth `1/(3n-4)`.
pub fn pairs_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 2)?;
    let n = agents.len();
    if n == 2 {
        return pairs_two(agents, cake);
    }
    run(agents, cake, "pairs", Bound::one_over(need(n)), Some((3, 4)))
}

fn run(agents: &[Agent], cake: &CakeDomain<f64>, name: &str, bound: Bound, constants: Option<(i64, i64)>) -> Result<Division> {
    let (_, f) = square_cake(cake)?;
    let mut ctx = Ctx::default();
    let subs = prepare(agents, cake, &mut ctx)?;
    let mut local = descend(&subs, &f, &R::unit());
    rescale(&mut local, need(agents.len()));
    let out = ctx.within(&f, |ctx| pq(local, ctx))?;
    Finish { name, agents, cake, bound, constants, normalization: Normalization::Absolute }.run(mapped(out, &f), ctx)
}

fn two(subs: &[Sub], ctx: &mut Ctx) -> Result<Out> {
    let pair = |d: &[usize; 2]| Piece::SquarePair(sq(&quarter(d[0]).0), sq(&quarter(d[1]).0));
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| DIAGONALS.iter().map(|d| ctx.eval(s, &pair(d))).collect()).collect();
    for (a, b) in [(0, 1), (1, 0)] {
        if vals[0][a] >= 1.0 - EPS && vals[1][b] >= 1.0 - EPS {
            return Ok(vec![(subs[0].id, pair(&DIAGONALS[a])), (subs[1].id, pair(&DIAGONALS[b]))]);
        }
    }
    // both agents want the same diagonal
    let k = if vals[0][0] >= vals[0][1] { 0 } else { 1 };
    let corner = |j: usize| {
        let (_, p, dx, dy) = quarter(j);
        (p, (dx, dy))
    };
    let (a, adir) = corner(DIAGONALS[k][0]);
    let (b, bdir) = corner(DIAGONALS[k][1]);
    let fam = Family::CornerSquarePair { a, adir, b, bdir, max: 0.5 };
    let mut ts = Vec::new();
    for s in subs {
        ts.push((s.id, ctx.mark(s, &fam, 1.0)?.t_or_inf()));
    }
    let w = argmin_mark(&ts);
    let t = ts[w].1;
    if !t.is_finite() {
        return Err(Error::Invariant("pair mark in the desired diagonal is unreachable".into()));
    }
    // the rest is two overlapping squares of side 1-t
    let u = 1.0 - t;
    let rest = if k == 0 {
        Piece::SquarePair(Square::new(t, 0.0, u), Square::new(0.0, t, u))
    } else {
        Piece::SquarePair(Square::new(0.0, 0.0, u), Square::new(t, t, u))
    };
    Ok(vec![(subs[w].id, fam.piece(t)), (subs[1 - w].id, rest)])
}

/// Partitions of the four quarters into blocks of one or two quarters,
/// all singletons first.
fn partitions() -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![vec![0], vec![1], vec![2], vec![3]]];
    let pairs = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    for p in pairs {
        let mut blocks = vec![p.to_vec()];
        blocks.extend((0..4).filter(|q| !p.contains(q)).map(|q| vec![q]));
        out.push(blocks);
    }
    for p in [[0, 1], [0, 2], [0, 3]] {
        let other: Vec<usize> = (0..4).filter(|q| !p.contains(q)).collect();
        out.push(vec![p.to_vec(), other]);
    }
    out
}

/// Slot assignment: `sizes[b]` slots for block `b`, agent `i` may fill one
/// when `cap[i][b] >= sizes[b]`.
fn matching(cap: &[Vec<usize>], sizes: &[usize]) -> Option<Vec<usize>> {
    let slots: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat(b).take(k)).collect();
    let n = cap.len();
    let mut owner: Vec<Option<usize>> = vec![None; slots.len()];
    fn augment(i: usize, cap: &[Vec<usize>], sizes: &[usize], slots: &[usize], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for (s, &b) in slots.iter().enumerate() {
            if seen[s] || cap[i][b] < sizes[b] {
                continue;
            }
            seen[s] = true;
            if owner[s].map_or(true, |o| augment(o, cap, sizes, slots, owner, seen)) {
                owner[s] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; slots.len()];
        if !augment(i, cap, sizes, &slots, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut block = vec![0; n];
    for (s, o) in owner.iter().enumerate() {
        block[o.expect("every slot is filled")] = slots[s];
    }
    Some(block)
}

/// Block sizes with sum `n`, bounded by `max`, in lexicographic order.
fn size_vectors(max: &[usize], n: usize) -> Vec<Vec<usize>> {
    fn go(max: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == max.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = max[cur.len() + 1..].iter().sum();
        for k in (0..=max[cur.len()].min(left)).rev() {
            if left - k <= rest {
                cur.push(k);
                go(max, left - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(max, n, &mut Vec::new(), &mut out);
    out
}

/// First partition and block assignment that serves every agent.
fn assign(vals: &[Vec<f64>], pf: impl Fn(f64) -> usize) -> Option<(Vec<Vec<usize>>, Vec<usize>)> {
    let n = vals.len();
    for blocks in partitions() {
        let cap: Vec<Vec<usize>> = vals
            .iter()
            .map(|row| {
                blocks
                    .iter()
                    .map(|b| match b.as_slice() {
                        [q] => pf(row[*q]).min(n - 1),
                        _ => usize::from(b.iter().map(|&q| row[q]).sum::<f64>() >= 1.0 - EPS),
                    })
                    .collect()
            })
            .collect();
        let max: Vec<usize> = (0..blocks.len()).map(|b| cap.iter().map(|r| r[b]).max().unwrap_or(0)).collect();
        for sizes in size_vectors(&max, n) {
            if let Some(block) = matching(&cap, &sizes) {
                return Some((blocks, block));
            }
        }
    }
    None
}

fn pq(mut subs: Vec<Sub>, ctx: &mut Ctx) -> Result<Out> {
    let n = subs.len();
    let total = need(n);
    normalize(&mut subs, total, "square-pairs")?;
    match n {
        1 => return Ok(vec![(subs[0].id, Piece::square(0.0, 0.0, 1.0))]),
        2 => return two(&subs, ctx),
        _ => {}
    }
    let vals: Vec<Vec<f64>> = subs.iter().map(|s| (0..4).map(|j| ctx.eval(s, &Piece::Rect(quarter(j).0))).collect()).collect();
    let pf = |v: f64| partner(v, 1.0, total - 2.0, n, |v| (v + 4.0) / 3.0);
    if let Some(j) = (0..4).find(|&j| vals.iter().all(|row| pf(row[j]) == n)) {
        let (_, c, dx, dy) = quarter(j);
        let f = Frame { origin: c, scale: 1.0, col: [0, 1], sign: [dx, dy] };
        let child = descend(&subs, &f, &R::unit());
        return Ok(mapped(ctx.within(&f, |ctx| hard(child, ctx))?, &f));
    }
    let (blocks, block) = assign(&vals, pf).ok_or_else(|| Error::Invariant("no block assignment serves every agent".into()))?;
    if blocks.len() < 4 {
        ctx.note(format!("square-pairs: merged quarters {:?}", blocks.iter().filter(|b| b.len() == 2).collect::<Vec<_>>()));
    }
    let mut out = Vec::new();
    for (b, quarters) in blocks.iter().enumerate() {
        let group: Vec<usize> = (0..n).filter(|&i| block[i] == b).collect();
        match (group.len(), quarters.as_slice()) {
            (0, _) => {}
            (1, [q]) => out.push((subs[group[0]].id, Piece::Square(sq(&quarter(*q).0)))),
            (1, [a, c]) => out.push((subs[group[0]].id, Piece::SquarePair(sq(&quarter(*a).0), sq(&quarter(*c).0)))),
            (_, [q]) => {
                let f = Frame::onto(&quarter(*q).0, 0.5);
                let child = descend(&pick(&subs, &group), &f, &R::unit());
                out.extend(mapped(ctx.within(&f, |ctx| pq(child, ctx))?, &f));
            }
            _ => return Err(Error::Invariant("a merged block holds more than one agent".into())),
        }
    }
    Ok(out)
}

/// Everyone values the bottom-left quarter at `3n-6` or more.
fn hard(subs: Vec<Sub>, ctx: &mut Ctx) -> Result<Out> {
    let target = need(subs.len()) - 2.0;
    let fam = Family::CornerSquare { anchor: Point::new(0.0, 0.0), dx: 1, dy: 1, max: 0.5 };
    let mut ts = Vec::new();
    for s in &subs {
        ts.push((s.id, ctx.mark(s, &fam, target)?.t_or_inf()));
    }
    let w = argmax_mark(&ts);
    let s = ts[w].1;
    if !s.is_finite() {
        return Err(Error::Invariant("corner mark in the desired quarter is unreachable".into()));
    }
    let u = 1.0 - s;
    let cover = [Piece::SquarePair(Square::new(s, 0.0, u), Square::new(0.0, s, u)), Piece::square(s, s, u)];
    let mut out = vec![(subs[w].id, best_of(&subs[w], &cover))];
    let rest: Vec<Sub> = subs.iter().enumerate().filter(|(k, _)| *k != w).map(|(_, x)| x.clone()).collect();
    let f = Frame::onto(&Rect::new(0.0, 0.0, s, s), s);
    let child = descend(&rest, &f, &R::unit());
    out.extend(mapped(ctx.within(&f, |ctx| pq(child, ctx))?, &f));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn two_uniform_get_diagonals() {
        let cake = CakeDomain::square(1.0);
        let u = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let ag = vec![Agent::new(0, u.clone()), Agent::new(1, u)];
        let d = pairs_divide(&ag, &cake).unwrap();
        verify(&d, &ag, &cake, PieceFamily::SquarePairs, &Tolerances::default()).unwrap();
        for r in &d.report.results {
            assert!((r.fraction - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn two_on_one_diagonal() {
        let cake = CakeDomain::square(1.0);
        for blocks in [[(0.0, 0.0), (0.8, 0.8)], [(0.8, 0.0), (0.0, 0.8)]] {
            let d = GridDensity::from_blocks(&blocks.map(|(x, y)| (Rect::new(x, y, x + 0.2, y + 0.2), 1.0))).unwrap();
            let ag = vec![Agent::new(0, d.clone()), Agent::new(1, d)];
            let div = pairs_two(&ag, &cake).unwrap();
            verify(&div, &ag, &cake, PieceFamily::SquarePairs, &Tolerances::default()).unwrap();
        }
    }

    #[test]
    fn partitions_are_the_ten() {
        let p = partitions();
        assert_eq!(p.len(), 10);
        for blocks in &p {
            let mut all: Vec<usize> = blocks.concat();
            all.sort_unstable();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn random_pairs() {
        let cake = CakeDomain::square(1.0);
        for n in 2..=6 {
            for seed in 0..20 {
                let ag = agents(&R::unit(), n, seed);
                let d = pairs_divide(&ag, &cake).unwrap();
                verify(&d, &ag, &cake, PieceFamily::SquarePairs, &Tolerances::default()).unwrap();
            }
        }
    }

    #[test]
    fn quarter_patterns() {
        // two cheap quarters worth a little more than 1 together
        let cake = CakeDomain::square(1.0);
        for n in 3..=5 {
            for shift in 0..4 {
                let ag: Vec<Agent> = (0..n)
                    .map(|i| {
                        let lo = [(i + shift) % 4, (i + shift + 1 + i % 2) % 4];
                        let blocks: Vec<(R, f64)> = (0..4).map(|j| (quarter(j).0, if lo.contains(&j) { 0.55 } else { 1.0 + i as f64 })).collect();
                        Agent::new(i, GridDensity::from_blocks(&blocks).unwrap())
                    })
                    .collect();
                let d = pairs_divide(&ag, &cake).unwrap();
                verify(&d, &ag, &cake, PieceFamily::SquarePairs, &Tolerances::default()).unwrap();
            }
        }
    }

    #[test]
    fn point_masses_force_hard_case() {
        let cake = CakeDomain::square(1.0);
        for n in 2..=5 {
            let d = GridDensity::uniform(&Rect::new(0.7, 0.2, 0.72, 0.22), 1.0).unwrap();
            let ag: Vec<Agent> = (0..n).map(|i| Agent::new(i, d.clone())).collect();
            let div = pairs_divide(&ag, &cake).unwrap();
            verify(&div, &ag, &cake, PieceFamily::SquarePairs, &Tolerances::default()).unwrap();
        }
    }
}
