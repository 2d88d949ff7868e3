//! Procedures for agents sharing one value measure.
//!
//! The fat and thin procedures work on `[0,1] x [0,L]` (width one, length
//! `L` along y). The thin one may spill over the right side `x = 1` up to
//! `x = L - 1`; each returned square is worth at least one after the cake is
//! rescaled to `2n` (fat) or `2n - 2` (thin).

use super::*;
use crate::geometry::interior_disjoint;
use crate::measure::best::two_square_cover;

/// Record of a fat-procedure run where both thin sub-calls returned the larger
/// count and the largest of the `n + 1` squares was dropped. Lengths are in
/// cake units.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBRecord {
    pub n: usize,
    pub k: usize,
    /// Length of the wall the hawks stand on.
    pub width: f64,
    pub bottom_hawks: f64,
    pub top_hawks: f64,
    /// Every hawk touches its wall.
    pub hawks_on_wall: bool,
    pub removed: Piece<f64>,
    /// The `n` squares left after the removal are interior-disjoint.
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SameOutcome {
    pub squares: Vec<Piece<f64>>,
    pub case_b: Vec<CaseBRecord>,
}

/// Result of the thin procedure on `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThinOutcome {
    /// At least `n - 1` squares inside the four walls.
    Inside(Vec<Piece<f64>>),
    /// `n` squares that may cross the open long side.
    Overflow(Vec<Piece<f64>>),
}

impl ThinOutcome {
    pub fn squares(&self) -> &[Piece<f64>] {
        match self {
            ThinOutcome::Inside(v) | ThinOutcome::Overflow(v) => v,
        }
    }

    fn map(self, f: &Fr) -> Self {
        let m = |v: Vec<P>| v.into_iter().map(|p| p.map(f)).collect();
        match self {
            ThinOutcome::Inside(v) => ThinOutcome::Inside(m(v)),
            ThinOutcome::Overflow(v) => ThinOutcome::Overflow(m(v)),
        }
    }
}

fn norm(d: &mut D, target: f64, what: &str) -> Result<()> {
    let t = d.total();
    if !(t >= target * (1.0 - 1e-7) - 1e-9) || !(t > 0.0) {
        return Err(Error::Precondition(format!("{}: value {} below {}", what, t, target)));
    }
    *d = d.scaled(target / t);
    Ok(())
}

fn scale_to(d: D, target: f64) -> Result<D> {
    let t = d.total();
    if !(t > 0.0) {
        return Err(Error::Density("the measure is zero on the cake".into()));
    }
    Ok(d.scaled(target / t))
}

/// Frame putting `r` upright as `[0,1] x [0,L]` with `L >= 1`.
fn portrait(r: &R) -> (Fr, f64) {
    let (w, h) = (r.width(), r.height());
    if w <= h {
        (toward(r, Side::Right, w), h / w)
    } else {
        (toward(r, Side::Top, h), w / h)
    }
}

fn down(d: &D, f: &Fr, l: f64) -> D {
    d.restricted(&f.apply_rect(&Rect::new(0.0, 0.0, 1.0, l))).pullback(f)
}

/// Largest `y` with the part below it worth `u`.
fn y_at(d: &D, l: f64, u: f64) -> Result<f64> {
    let total = d.total();
    if u >= total {
        return Ok(l);
    }
    let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, 1.0, l), from: Side::Top };
    Ok((l - mark(d, &fam, (total - u).max(0.0))?.t().unwrap_or(l)).clamp(0.0, l))
}

/// Smallest `k` in `1..=kmax` with `y_{2k} >= 1/2`, and that `y_{2k}`.
fn first_half(d: &D, l: f64, kmax: usize) -> Result<(usize, f64)> {
    for k in 1..kmax {
        let y = y_at(d, l, 2.0 * k as f64)?;
        if y >= 0.5 {
            return Ok((k, y));
        }
    }
    Ok((kmax, l))
}

fn band(a: f64, b: f64) -> R {
    Rect::new(0.0, a, 1.0, b)
}

fn side_len(p: &P) -> f64 {
    p.bbox().width()
}

fn sub_fat(d: &D, part: &R, n: usize, ctx: &mut Ctx) -> Result<Vec<P>> {
    let (f, l) = portrait(part);
    let child = down(d, &f, l);
    let out = ctx.within(&f, |ctx| fat(child, n, l, ctx))?;
    Ok(out.into_iter().map(|p| p.map(&f)).collect())
}

/// Thin procedure on `part`, spilling toward `side`.
fn sub_thin(d: &D, part: &R, side: Side, n: usize, ctx: &mut Ctx) -> Result<ThinOutcome> {
    let (depth, span) = match side {
        Side::Left | Side::Right => (part.width(), part.height()),
        Side::Bottom | Side::Top => (part.height(), part.width()),
    };
    let f = toward(part, side, depth);
    let l = span / depth;
    let child = down(d, &f, l);
    Ok(ctx.within(&f, |ctx| thin(child, n, l, ctx))?.map(&f))
}

/// A full-width band of the upright cake: the fat procedure for `m` squares
/// when the band is fat, else the thin one for `m + 1` spilling right.
fn sub_auto(d: &D, part: &R, m: usize, ctx: &mut Ctx) -> Result<ThinOutcome> {
    if part.height() <= 2.0 * (1.0 + 1e-12) {
        Ok(ThinOutcome::Inside(sub_fat(d, part, m, ctx)?))
    } else {
        sub_thin(d, part, Side::Right, m + 1, ctx)
    }
}

fn join(mut first: Vec<P>, then: ThinOutcome) -> ThinOutcome {
    match then {
        ThinOutcome::Inside(v) => {
            first.extend(v);
            ThinOutcome::Inside(first)
        }
        ThinOutcome::Overflow(v) => {
            first.extend(v);
            ThinOutcome::Overflow(first)
        }
    }
}

fn take(mut v: Vec<P>, k: usize) -> Vec<P> {
    v.truncate(k);
    v
}

pub(crate) fn fat(mut d: D, n: usize, l: f64, ctx: &mut Ctx) -> Result<Vec<P>> {
    norm(&mut d, 2.0 * n as f64, "fat procedure")?;
    let cake = Rect::new(0.0, 0.0, 1.0, l);
    if n == 1 {
        let cover = two_square_cover(&cake);
        let best = cover.iter().cloned().fold((f64::NEG_INFINITY, None), |(bv, b), p| {
            let v = d.piece_value(&p);
            if v > bv {
                (v, Some(p))
            } else {
                (bv, b)
            }
        });
        return Ok(vec![best.1.expect("nonempty cover")]);
    }
    let (k, yk) = first_half(&d, l, n)?;
    if l - yk >= 0.5 {
        let mut out = sub_fat(&d, &band(0.0, yk), k, ctx)?;
        out.extend(sub_fat(&d, &band(yk, l), n - k, ctx)?);
        return Ok(out);
    }
    let yk2 = if k >= 2 { y_at(&d, l, 2.0 * (k - 1) as f64)? } else { 0.0 };
    let mut top_over = None;
    if k < n {
        match sub_thin(&d, &band(yk, l), Side::Bottom, n - k + 1, ctx)? {
            ThinOutcome::Inside(v) => {
                let mut out = take(v, n - k);
                out.extend(sub_fat(&d, &band(0.0, yk), k, ctx)?);
                return Ok(out);
            }
            ThinOutcome::Overflow(v) => top_over = Some(v),
        }
    }
    let mut bottom_over = None;
    if k >= 2 {
        match sub_thin(&d, &band(0.0, yk2), Side::Top, k, ctx)? {
            ThinOutcome::Inside(v) => {
                let mut out = take(v, k - 1);
                out.extend(sub_fat(&d, &band(yk2, l), n - k + 1, ctx)?);
                return Ok(out);
            }
            ThinOutcome::Overflow(v) => bottom_over = Some(v),
        }
    }
    match (top_over, bottom_over) {
        (Some(t), None) => Ok(take(t, n)),
        (None, Some(b)) => Ok(take(b, n)),
        (Some(t), Some(b)) => drop_largest(t, b, n, k, l, yk, yk2, ctx),
        (None, None) => Err(Error::Invariant("fat procedure: no thin part to divide".into())),
    }
}

/// `n + 1` squares from the two thin parts: drop the largest and check the
/// rest with the doves-and-hawks bookkeeping.
#[allow(clippy::too_many_arguments)]
fn drop_largest(top: Vec<P>, bottom: Vec<P>, n: usize, k: usize, l: f64, yk: f64, yk2: f64, ctx: &mut Ctx) -> Result<Vec<P>> {
    let tol = 1e-9;
    let top_band = band(yk, l);
    let bottom_band = band(0.0, yk2);
    let hawks = |v: &[P], part: &R| -> Vec<P> { v.iter().filter(|p| !part.contains_rect(&p.bbox(), tol)).cloned().collect() };
    let th = hawks(&top, &top_band);
    let bh = hawks(&bottom, &bottom_band);
    let on_wall = th.iter().all(|p| (p.bbox().ymax - l).abs() <= tol) && bh.iter().all(|p| p.bbox().ymin.abs() <= tol);
    let mut all: Vec<P> = bottom;
    all.extend(top);
    let big = (0..all.len()).fold(0, |b, i| if side_len(&all[i]) > side_len(&all[b]) { i } else { b });
    let removed = all.remove(big);
    let disjoint = interior_disjoint(&all, tol);
    let f = ctx.frame();
    let sum = |v: &[P]| v.iter().map(side_len).sum::<f64>() * f.scale;
    ctx.case_b.push(CaseBRecord {
        n,
        k,
        width: f.scale,
        bottom_hawks: sum(&bh),
        top_hawks: sum(&th),
        hawks_on_wall: on_wall,
        removed: removed.map(&f),
        disjoint,
    });
    if !disjoint {
        return Err(Error::Invariant("fat procedure: squares overlap after removing the largest".into()));
    }
    Ok(all)
}

pub(crate) fn thin(mut d: D, n: usize, l: f64, ctx: &mut Ctx) -> Result<ThinOutcome> {
    norm(&mut d, 2.0 * n as f64 - 2.0, "thin procedure")?;
    if n == 2 {
        let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, 1.0, l), from: Side::Bottom };
        let y = mark(&d, &fam, 1.0)?.t().unwrap_or(l);
        return Ok(if y < 1.0 {
            ThinOutcome::Inside(vec![Piece::square(0.0, 0.0, 1.0)])
        } else if y > l - 1.0 {
            ThinOutcome::Inside(vec![Piece::square(0.0, l - 1.0, 1.0)])
        } else {
            ThinOutcome::Overflow(vec![Piece::square(0.0, 0.0, y), Piece::square(0.0, y, l - y)])
        });
    }
    let (k, yk) = first_half(&d, l, n - 1)?;
    if l - yk >= 0.5 {
        let b = sub_auto(&d, &band(0.0, yk), k, ctx)?;
        let t = sub_auto(&d, &band(yk, l), n - k - 1, ctx)?;
        let over = matches!(b, ThinOutcome::Overflow(_)) || matches!(t, ThinOutcome::Overflow(_));
        let mut all: Vec<P> = b.squares().to_vec();
        all.extend(t.squares().iter().cloned());
        return Ok(if over { ThinOutcome::Overflow(take(all, n)) } else { ThinOutcome::Inside(all) });
    }
    let yk2 = if k >= 2 { y_at(&d, l, 2.0 * (k - 1) as f64)? } else { 0.0 };
    let mut got = Vec::new();
    if k < n - 1 {
        match sub_thin(&d, &band(yk, l), Side::Bottom, n - k, ctx)? {
            ThinOutcome::Inside(v) => return Ok(join(take(v, n - k - 1), sub_auto(&d, &band(0.0, yk), k, ctx)?)),
            ThinOutcome::Overflow(v) => got.extend(v),
        }
    }
    if k >= 2 {
        match sub_thin(&d, &band(0.0, yk2), Side::Top, k, ctx)? {
            ThinOutcome::Inside(v) => return Ok(join(take(v, k - 1), sub_auto(&d, &band(yk2, l), n - k, ctx)?)),
            ThinOutcome::Overflow(v) => got.extend(v),
        }
    }
    Ok(ThinOutcome::Inside(got))
}

/// Same-measure 3-walls on `[0,L] x [0,1]`, `L <= 1`, open on the right;
/// rescaled to `2n - 1`.
pub(crate) fn three(mut d: D, n: usize, l: f64, ctx: &mut Ctx) -> Result<Vec<P>> {
    if n == 1 {
        return Ok(vec![Piece::square(0.0, 0.0, 1.0)]);
    }
    norm(&mut d, 2.0 * n as f64 - 1.0, "3-walls procedure")?;
    let fam = Family::Sweep { rect: Rect::new(0.0, 0.0, l, 1.0), from: Side::Right };
    let x = l - mark(&d, &fam, 1.0)?.t().unwrap_or(l);
    let rest = Rect::new(0.0, 0.0, x, 1.0);
    let right = Piece::square(x, 0.0, 1.0);
    if x >= 0.5 {
        let mut out = sub_fat(&d, &rest, n - 1, ctx)?;
        out.push(right);
        return Ok(out);
    }
    match sub_thin(&d, &rest, Side::Right, n, ctx)? {
        ThinOutcome::Overflow(v) => Ok(take(v, n)),
        ThinOutcome::Inside(v) if v.len() >= n => Ok(take(v, n)),
        ThinOutcome::Inside(v) => {
            let mut out = take(v, n - 1);
            out.push(right);
            Ok(out)
        }
    }
}

fn one_open_side(cake: &CakeDomain<f64>) -> Option<Side> {
    let w = cake.walls;
    let open: Vec<Side> = [(w.left, Side::Left), (w.right, Side::Right), (w.bottom, Side::Bottom), (w.top, Side::Top)]
        .iter()
        .filter(|(on, _)| !on)
        .map(|(_, s)| *s)
        .collect();
    (open.len() == 1).then(|| open[0])
}

fn bounded_rect(cake: &CakeDomain<f64>) -> Result<R> {
    let r = rect_of(cake)?;
    if !r.is_bounded() {
        return Err(Error::Shape("the cake must be a bounded rectangle".into()));
    }
    Ok(r)
}

/// `n` squares in a 2-fat rectangle, each worth at least `1/(2n)` of it.
pub fn same_fat(d: &GridDensity<f64>, n: usize, cake: &CakeDomain<f64>) -> Result<SameOutcome> {
    let r = bounded_rect(cake)?;
    if n == 0 || fatness(&r)? > 2.0 + 1e-9 {
        return Err(Error::Shape("the fat procedure needs a 2-fat rectangle and n >= 1".into()));
    }
    let (f, l) = portrait(&r);
    let local = scale_to(down(&d.restricted(&r), &f, l), 2.0 * n as f64)?;
    let mut ctx = Ctx::default();
    let out = ctx.within(&f, |ctx| fat(local, n, l, ctx))?;
    Ok(SameOutcome { squares: out.into_iter().map(|p| p.map(&f)).collect(), case_b: ctx.case_b })
}

/// The thin procedure on a rectangle longer than twice its width, spilling
/// over an open long side if there is one (else the right or top side).
pub fn same_thin(d: &GridDensity<f64>, n: usize, cake: &CakeDomain<f64>) -> Result<ThinOutcome> {
    let r = bounded_rect(cake)?;
    if n < 2 || fatness(&r)? <= 2.0 {
        return Err(Error::Shape("the thin procedure needs a 2-thin rectangle and n >= 2".into()));
    }
    let w = cake.walls;
    let side = if r.height() > r.width() {
        if !w.left && w.right {
            Side::Left
        } else {
            Side::Right
        }
    } else if !w.bottom && w.top {
        Side::Bottom
    } else {
        Side::Top
    };
    let mut ctx = Ctx::default();
    sub_thin(&scale_to(d.restricted(&r), 2.0 * n as f64 - 2.0)?, &r, side, n, &mut ctx)
}

/// `n` squares within three walls of a rectangle whose open side is a longer
/// side, each worth at least `1/(2n-1)` of the cake.
pub fn same_three_walls(d: &GridDensity<f64>, n: usize, cake: &CakeDomain<f64>) -> Result<SameOutcome> {
    let r = bounded_rect(cake)?;
    let side = one_open_side(cake).ok_or_else(|| Error::Shape("3-walls needs exactly one open side".into()))?;
    let (span, depth) = match side {
        Side::Left | Side::Right => (r.height(), r.width()),
        Side::Bottom | Side::Top => (r.width(), r.height()),
    };
    if n == 0 || depth > span * (1.0 + 1e-9) {
        return Err(Error::Shape("the open side of a 3-walls cake must be a longer side".into()));
    }
    let f = toward(&r, side, span);
    let l = (depth / span).min(1.0);
    let local = d.restricted(&r).restricted(&f.apply_rect(&Rect::new(0.0, 0.0, l, 1.0))).pullback(&f);
    let local = scale_to(local, (2 * n) as f64 - 1.0)?;
    let mut ctx = Ctx::default();
    let out = ctx.within(&f, |ctx| three(local, n, l, ctx))?;
    Ok(SameOutcome { squares: out.into_iter().map(|p| p.map(&f)).collect(), case_b: ctx.case_b })
}

/// Agents with one shared measure: the fat procedure on a 2-fat rectangle
/// with four walls, the 3-walls procedure when one longer side is open.
pub fn same_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let d = cake_measure(&agents[0].density, cake)?;
    for a in &agents[1..] {
        let e = cake_measure(&a.density, cake)?;
        if !cells_agree(&d, &e) {
            return Err(Error::Precondition("the same-measure procedures need identical densities".into()));
        }
    }
    let n = agents.len();
    let (out, den, name) = if cake.walls.count() == 4 {
        (same_fat(&d, n, cake)?, 2.0 * n as f64, "same-fat")
    } else {
        (same_three_walls(&d, n, cake)?, 2.0 * n as f64 - 1.0, "same-three-walls")
    };
    let mut ids: Vec<usize> = agents.iter().map(|a| a.id).collect();
    ids.sort_unstable();
    let assigned: Out = ids.into_iter().zip(out.squares).collect();
    let mut ctx = Ctx::default();
    ctx.case_b = out.case_b;
    Finish { name, agents, cake, bound: Bound::one_over(den), constants: Some((2, if den == 2.0 * n as f64 { 0 } else { 1 })), normalization: Normalization::Absolute }
        .run(assigned, ctx)
}

/// Densities agree at the centre of every cell of the common refinement.
fn cells_agree(a: &D, b: &D) -> bool {
    let (xs, ys) = refinement(&[a, b]);
    xs.windows(2).all(|wx| {
        ys.windows(2).all(|wy| {
            let (cx, cy) = (0.5 * (wx[0] + wx[1]), 0.5 * (wy[0] + wy[1]));
            let (u, v) = (a.density_at(cx, cy), b.density_at(cx, cy));
            (u - v).abs() <= 1e-9 * u.abs().max(v.abs()).max(1.0)
        })
    })
}

fn refinement(ds: &[&D]) -> (Vec<f64>, Vec<f64>) {
    let merge = |f: &dyn Fn(&D) -> Vec<f64>| {
        let mut v: Vec<f64> = ds.iter().flat_map(|d| f(d)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    };
    (merge(&|d| d.xs().to_vec()), merge(&|d| d.ys().to_vec()))
}

/// Different measures on a 2-fat rectangle through one combined measure: the
/// pointwise maximum plus minimum of the normalized densities. The bound is
/// `1/(2nr)` with `r` the largest pointwise ratio of maximum to minimum.
pub fn ratio_divide(agents: &[Agent], cake: &CakeDomain<f64>) -> Result<Division> {
    need_agents(agents, 1)?;
    let r = bounded_rect(cake)?;
    let mut ds = Vec::with_capacity(agents.len());
    for a in agents {
        let d = cake_measure(&a.density, cake)?;
        let t = d.total();
        if !(t > 0.0) {
            return Err(Error::UnboundedRatio);
        }
        ds.push(d.scaled(1.0 / t));
    }
    let refs: Vec<&D> = ds.iter().collect();
    let (xs, ys) = refinement(&refs);
    let mut ratio: f64 = 1.0;
    let mut cells = vec![vec![0.0; xs.len() - 1]; ys.len() - 1];
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let (cx, cy) = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
            let vals: Vec<f64> = ds.iter().map(|d| d.density_at(cx, cy)).collect();
            let hi = vals.iter().cloned().fold(0.0, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            if hi > 0.0 {
                if !(lo > 0.0) {
                    return Err(Error::UnboundedRatio);
                }
                ratio = ratio.max(hi / lo);
            }
            cells[j][i] = hi + lo;
        }
    }
    let combined = GridDensity::new(xs, ys, cells)?.restricted(&r);
    let n = agents.len();
    let out = same_fat(&combined, n, cake)?;
    let mut ctx = Ctx::default();
    let piece_ratio = out
        .squares
        .iter()
        .map(|p| {
            let v: Vec<f64> = ds.iter().map(|d| d.piece_value(p)).collect();
            let hi = v.iter().cloned().fold(0.0, f64::max);
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            if lo > 0.0 {
                hi / lo
            } else {
                f64::INFINITY
            }
        })
        .fold(1.0, f64::max);
    ctx.note(format!("pointwise ratio r = {}; largest ratio over the allocated squares = {}", ratio, piece_ratio));
    ctx.case_b = out.case_b;
    let assigned: Out = agents.iter().map(|a| a.id).zip(out.squares).collect();
    Finish {
        name: "ratio",
        agents,
        cake,
        bound: Bound { num: 1.0, den: 2.0 * n as f64 * ratio },
        constants: None,
        normalization: Normalization::Absolute,
    }
    .run(assigned, ctx)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::geometry::Walls;

    fn check(squares: &[P], d: &D, need: f64) {
        assert!(interior_disjoint(squares, 1e-9));
        for s in squares {
            assert!(d.piece_value(s) >= need - 1e-9, "{} < {}", d.piece_value(s), need);
        }
    }

    #[test]
    fn fat_two_uniform_split() {
        let cake = CakeDomain::square(1.0);
        let d = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let out = same_fat(&d, 2, &cake).unwrap();
        assert_eq!(out.squares.len(), 2);
        check(&out.squares, &d, 0.25);
        assert!(out.case_b.is_empty());
    }

    #[test]
    fn fat_single() {
        let r = Rect::new(0.0, 0.0, 2.0, 1.0);
        let d = GridDensity::uniform(&r, 1.0).unwrap();
        let out = same_fat(&d, 1, &CakeDomain::rect(r, Walls::all())).unwrap();
        check(&out.squares, &d, 1.0);
    }

    #[test]
    fn uniform_three_hits_case_b() {
        let d = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let out = same_fat(&d, 3, &CakeDomain::square(1.0)).unwrap();
        assert_eq!(out.squares.len(), 3);
        assert_eq!(out.case_b.len(), 1);
        let rec = &out.case_b[0];
        assert!(rec.disjoint && rec.hawks_on_wall);
        assert!(rec.bottom_hawks <= rec.width + 1e-9 && rec.top_hawks <= rec.width + 1e-9);
        check(&out.squares, &d, 1.0 / 6.0);
    }

    #[test]
    fn random_fat_and_three() {
        let r = Rect::new(0.0, 0.0, 1.0, 1.6);
        let cake = CakeDomain::rect(r, Walls::all());
        let r3 = Rect::new(0.0, 0.0, 0.7, 1.0);
        let c3 = CakeDomain::rect(r3, Walls { left: true, right: false, bottom: true, top: true });
        for n in 1..=7 {
            for seed in 0..30 {
                let d = random_density(&r, 7, seed);
                let out = same_fat(&d, n, &cake).unwrap();
                assert_eq!(out.squares.len(), n);
                check(&out.squares, &d, d.total() / (2 * n) as f64);
                for s in &out.squares {
                    assert!(cake.allows(s, 1e-9));
                }
                let d = random_density(&r3, 7, seed + 500);
                let out = same_three_walls(&d, n, &c3).unwrap();
                assert_eq!(out.squares.len(), n);
                check(&out.squares, &d, d.total() / (2 * n - 1) as f64);
                for s in &out.squares {
                    assert!(c3.allows(s, 1e-9));
                }
            }
        }
    }

    #[test]
    fn thin_two_outcomes() {
        let r = Rect::new(0.0, 0.0, 1.0, 3.0);
        let cake = CakeDomain::rect(r, Walls::all());
        let mid = GridDensity::uniform(&Rect::new(0.0, 1.2, 1.0, 1.8), 1.0).unwrap();
        assert!(matches!(same_thin(&mid, 2, &cake).unwrap(), ThinOutcome::Overflow(ref v) if v.len() == 2));
        let low = GridDensity::uniform(&Rect::new(0.0, 0.0, 1.0, 0.5), 1.0).unwrap();
        assert!(matches!(same_thin(&low, 2, &cake).unwrap(), ThinOutcome::Inside(ref v) if v.len() == 1));
    }

    #[test]
    fn ratio_identical_and_bounded() {
        let cake = CakeDomain::square(1.0);
        let u = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let ag = vec![Agent::new(0, u.clone()), Agent::new(1, u.clone())];
        let d = ratio_divide(&ag, &cake).unwrap();
        assert!((d.report.bound.value() - 0.25).abs() < 1e-12);
        verify(&d, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).unwrap();
        let v = GridDensity::from_blocks(&[(Rect::new(0.0, 0.0, 0.5, 1.0), 1.0), (Rect::new(0.5, 0.0, 1.0, 1.0), 2.0)]).unwrap();
        let ag = vec![Agent::new(0, u), Agent::new(1, v)];
        let d = ratio_divide(&ag, &cake).unwrap();
        assert!(d.report.bound.value() >= 1.0 / 8.0 - 1e-12);
        verify(&d, &ag, &cake, PieceFamily::Squares, &Tolerances::default()).unwrap();
    }

    #[test]
    fn ratio_unbounded() {
        let cake = CakeDomain::square(1.0);
        let u = GridDensity::uniform(&R::unit(), 1.0).unwrap();
        let v = GridDensity::uniform(&Rect::new(0.0, 0.0, 0.5, 0.5), 1.0).unwrap();
        let ag = vec![Agent::new(0, u), Agent::new(1, v)];
        assert!(matches!(ratio_divide(&ag, &cake), Err(Error::UnboundedRatio)));
    }
}
