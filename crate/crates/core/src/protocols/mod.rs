//! Division procedures.
//!
//! Every procedure works in a local frame where the cake has a canonical
//! shape, with each agent's density rescaled so the guarantee is a value of
//! one. Sub-cakes are handed down as restricted, pulled-back densities and the
//! returned pieces are mapped back through the child frame.

mod fatrect;
mod ffdp;
mod greedy;
mod pairs;
mod same;
mod square;
mod staircase;
mod walls;

pub use fatrect::{fatrect_divide, fatrect_two};
pub use ffdp::{ffdp_divide, rait, Rait};
pub use greedy::{greedy_compact_divide, greedy_same_divide, greedy_select, Selection};
pub use pairs::{pairs_divide, pairs_two};
pub use same::{ratio_divide, same_divide, same_fat, same_three_walls, same_thin, CaseBRecord, SameOutcome, ThinOutcome};
pub use square::{divide_square_two, four_quarters};
pub use staircase::{half_plane_divide, plane_divide, staircase_divide};
pub use walls::{divide_four_walls, divide_three_walls};

use crate::error::{Error, Result};
use crate::geometry::frame::Frame;
use crate::geometry::{fatness, first_overlap, poly, CakeBase, CakeDomain, Piece, Point, Rect};
use crate::measure::{best_square, mark, Family, GridDensity, MarkOutcome, Region, Side};
use crate::rpa::{room_partition, PartnerMatrix};
use crate::scalar::Tolerances;
use std::collections::BTreeMap;

type D = GridDensity<f64>;
type P = Piece<f64>;
type R = Rect<f64>;
type Fr = Frame<f64>;

/// Slack on partner-number thresholds and similar value comparisons.
pub(crate) const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: usize,
    pub density: GridDensity<f64>,
}

impl Agent {
    pub fn new(id: usize, density: GridDensity<f64>) -> Self {
        Agent { id, density }
    }
}

/// Guaranteed fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub num: f64,
    pub den: f64,
}

impl Bound {
    pub fn one_over(den: f64) -> Self {
        Bound { num: 1.0, den }
    }

    pub fn value(&self) -> f64 {
        self.num / self.den
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Fractions of the value of the whole cake.
    Absolute,
    /// Fractions of the value of the agent's best square in the cake.
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Eval,
    Mark,
}

/// One query put to an agent, in cake coordinates and normalized units.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub kind: QueryKind,
    pub agent: usize,
    /// Evaluated piece, or the marked piece.
    pub piece: Option<Piece<f64>>,
    /// Target value of a mark.
    pub target: Option<f64>,
    /// Value for an eval; family parameter for a mark (infinite when unreachable).
    pub response: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentResult {
    pub agent: usize,
    pub piece: Piece<f64>,
    pub value: f64,
    /// Denominator of the fraction: cake value, or best-square value when relative.
    pub total: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Allocation {
    pub assignments: BTreeMap<usize, Piece<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisionReport {
    pub procedure: String,
    pub n: usize,
    pub bound: Bound,
    /// `(E, F)` when the cake value is normalized to `E n - F`.
    pub constants: Option<(i64, i64)>,
    pub normalization: Normalization,
    pub results: Vec<AgentResult>,
    pub queries: Vec<Query>,
    pub notes: Vec<String>,
}

impl DivisionReport {
    pub fn min_fraction(&self) -> f64 {
        self.results.iter().map(|r| r.fraction).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    pub allocation: Allocation,
    pub report: DivisionReport,
}

/// Usable piece family of a procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceFamily {
    Squares,
    FatRects,
    SquarePairs,
    Ffdp,
}

impl PieceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PieceFamily::Squares => "squares",
            PieceFamily::FatRects => "fat-rects",
            PieceFamily::SquarePairs => "square-pairs",
            PieceFamily::Ffdp => "ffdp",
        }
    }

    /// Shape predicate of the family.
    pub fn admits(&self, p: &Piece<f64>, tol: f64) -> bool {
        if p.validate(tol).is_err() {
            return false;
        }
        match (self, p) {
            (PieceFamily::Squares, Piece::Square(_) | Piece::QuarterPlane(_)) => true,
            (PieceFamily::Squares, Piece::Rect(r)) => r.is_square(tol),
            (PieceFamily::FatRects, Piece::Square(s)) => s.side.is_finite(),
            (PieceFamily::FatRects, Piece::Rect(r)) => fatness(r).map_or(false, |f| f <= 2.0 + tol),
            (PieceFamily::SquarePairs, Piece::SquarePair(..) | Piece::Square(_)) => true,
            (PieceFamily::Ffdp, Piece::FfdPolygon(v)) => poly::convex_fatness(v) <= 2.0 + 1e-6,
            _ => false,
        }
    }
}

/// Checks an allocation: one piece per agent, pairwise interior-disjoint,
/// inside the walls, in the family, and each fraction at least the bound.
pub fn verify(div: &Division, agents: &[Agent], cake: &CakeDomain<f64>, family: PieceFamily, tol: &Tolerances) -> Result<()> {
    let pieces: Vec<P> = div.allocation.assignments.values().cloned().collect();
    for a in agents {
        if !div.allocation.assignments.contains_key(&a.id) {
            return Err(Error::Invariant(format!("agent {} has no piece", a.id)));
        }
    }
    if let Some((i, j)) = first_overlap(&pieces, tol.geo) {
        return Err(Error::Invariant(format!("pieces {} and {} overlap", i, j)));
    }
    for (id, p) in &div.allocation.assignments {
        if !cake.allows(p, 1e-7) {
            return Err(Error::Invariant(format!("piece of agent {} crosses a wall", id)));
        }
        if !family.admits(p, 1e-7) {
            return Err(Error::Invariant(format!("piece of agent {} is not in the {} family", id, family.name())));
        }
    }
    let b = div.report.bound.value();
    for r in &div.report.results {
        let a = agents
            .iter()
            .find(|a| a.id == r.agent)
            .ok_or_else(|| Error::Invariant(format!("unknown agent {}", r.agent)))?;
        let d = cake_measure(&a.density, cake)?;
        let v = d.piece_value(&r.piece);
        let f = if r.total > 0.0 { v / r.total } else { 1.0 };
        if (f - r.fraction).abs() > 1e-6 * f.abs().max(1.0) {
            return Err(Error::Invariant(format!("agent {} reports fraction {} but has {}", r.agent, r.fraction, f)));
        }
        if f < b - tol.guarantee {
            return Err(Error::Invariant(format!("agent {} gets {} below the bound {}", r.agent, f, b)));
        }
    }
    Ok(())
}

/// The agent's measure on the cake: the density restricted to a rectangular
/// base, or checked to carry no mass outside any other base.
pub fn cake_measure(d: &GridDensity<f64>, cake: &CakeDomain<f64>) -> Result<GridDensity<f64>> {
    let outside = |inside: f64| {
        let t = d.total();
        if t - inside > 1e-9 * t.max(1.0) {
            Err(Error::Density(format!("density puts {} of value outside the cake", t - inside)))
        } else {
            Ok(d.clone())
        }
    };
    match &cake.base {
        CakeBase::Rect(r) => Ok(d.restricted(r)),
        CakeBase::Staircase(s) => outside(d.piece_value(&Piece::Staircase(s.clone()))),
        CakeBase::GridRegion { xs, ys, mask } => {
            let v = crate::geometry::grid_region_rects(xs, ys, mask).iter().map(|r| d.rect_value(r)).sum();
            outside(v)
        }
        CakeBase::Polygon(p) => outside(d.poly_value(p)),
    }
}

/// Uniform stand-in for an agent that values the whole cake at zero; any
/// piece then satisfies its guarantee, and the stand-in keeps the procedures
/// free of degenerate marks.
fn stand_in(cake: &CakeDomain<f64>) -> Result<GridDensity<f64>> {
    let r = match &cake.base {
        CakeBase::Rect(r) => {
            let pick = |lo: f64, hi: f64| match (lo.is_finite(), hi.is_finite()) {
                (true, true) => (lo, hi),
                (true, false) => (lo, lo + 1.0),
                (false, true) => (hi - 1.0, hi),
                _ => (0.0, 1.0),
            };
            let (x0, x1) = pick(r.xmin, r.xmax);
            let (y0, y1) = pick(r.ymin, r.ymax);
            Rect::new(x0, y0, x1, y1)
        }
        CakeBase::Staircase(s) => {
            let c = s.corners[0];
            Rect::new(c.x, c.y, c.x + 1.0, c.y + 1.0)
        }
        CakeBase::GridRegion { xs, ys, mask } => {
            let cells: Vec<(R, f64)> = crate::geometry::grid_region_rects(xs, ys, mask).into_iter().map(|r| (r, 1.0)).collect();
            return GridDensity::from_blocks(&cells);
        }
        CakeBase::Polygon(p) => {
            let n = p.len() as f64;
            let cx = p.iter().map(|q| q.x).sum::<f64>() / n;
            let cy = p.iter().map(|q| q.y).sum::<f64>() / n;
            let (x0, y0, x1, y1) = poly::bbox(p);
            let mut h = 0.1 * (x1 - x0).min(y1 - y0);
            loop {
                let r = Rect::new(cx - h, cy - h, cx + h, cy + h);
                if cake.allows(&Piece::Rect(r), 1e-9) || h < 1e-9 {
                    break r;
                }
                h *= 0.5;
            }
        }
    };
    GridDensity::uniform(&r, 1.0)
}

/// Agent as seen inside a procedure: a local density in normalized units.
#[derive(Debug, Clone)]
pub(crate) struct Sub {
    pub id: usize,
    pub d: D,
}

impl Sub {
    pub fn v(&self, p: &P) -> f64 {
        self.d.piece_value(p)
    }

    pub fn vr(&self, r: &R) -> f64 {
        self.d.rect_value(r)
    }
}

/// Rescales every density to total `target`. Totals may exceed the target;
/// a deficit beyond rounding means a broken precondition.
pub(crate) fn normalize(subs: &mut [Sub], target: f64, what: &str) -> Result<()> {
    for s in subs.iter_mut() {
        let t = s.d.total();
        if !(t >= target * (1.0 - 1e-7) - 1e-9) {
            return Err(Error::Precondition(format!("{}: agent {} has value {} below {}", what, s.id, t, target)));
        }
        if t > 0.0 {
            s.d = s.d.scaled(target / t);
        }
    }
    Ok(())
}

/// Rescales every density to total `target` unconditionally; used on entry.
pub(crate) fn rescale(subs: &mut [Sub], target: f64) {
    for s in subs.iter_mut() {
        let t = s.d.total();
        if t > 0.0 {
            s.d = s.d.scaled(target / t);
        }
    }
}

/// Densities of `subs` on the part `local` of the child frame `f`, in child coordinates.
pub(crate) fn descend(subs: &[Sub], f: &Fr, local: &R) -> Vec<Sub> {
    let world = f.apply_rect(local);
    subs.iter().map(|s| Sub { id: s.id, d: s.d.restricted(&world).pullback(f) }).collect()
}

pub(crate) fn pick(subs: &[Sub], idx: &[usize]) -> Vec<Sub> {
    idx.iter().map(|&i| subs[i].clone()).collect()
}

/// Frame whose local x axis points toward side `toward` of `r`, with `unit`
/// parent lengths per local unit. Local box: `[0, depth/unit] x [0, span/unit]`.
pub(crate) fn toward(r: &R, side: Side, unit: f64) -> Fr {
    let (o, col, sign) = match side {
        Side::Right => ((r.xmin, r.ymin), [0, 1], [1, 1]),
        Side::Left => ((r.xmax, r.ymin), [0, 1], [-1, 1]),
        Side::Top => ((r.xmin, r.ymin), [1, 0], [1, 1]),
        Side::Bottom => ((r.xmin, r.ymax), [1, 0], [1, -1]),
    };
    Frame { origin: Point::new(o.0, o.1), scale: unit, col, sign }
}

/// Frame putting `r` in landscape position `[0, long/short] x [0, 1]`.
pub(crate) fn landscape(r: &R) -> (Fr, f64) {
    let (w, h) = (r.width(), r.height());
    if w >= h {
        (toward(r, Side::Right, h), w / h)
    } else {
        (toward(r, Side::Top, w), h / w)
    }
}

/// Pieces returned by a sub-procedure, as `(agent, piece)` in the caller's frame.
pub(crate) type Out = Vec<(usize, P)>;

pub(crate) fn mapped(out: Out, f: &Fr) -> Out {
    out.into_iter().map(|(i, p)| (i, p.map(f))).collect()
}

/// Query trace with the frame stack needed to report cake coordinates.
#[derive(Debug, Default)]
pub(crate) struct Ctx {
    pub queries: Vec<Query>,
    pub notes: Vec<String>,
    pub case_b: Vec<CaseBRecord>,
    stack: Vec<Fr>,
}

impl Ctx {
    pub fn frame(&self) -> Fr {
        self.stack.last().copied().unwrap_or_else(Frame::identity)
    }

    /// Runs `body` with `f` as the frame of the current local coordinates.
    pub fn within<X>(&mut self, f: &Fr, body: impl FnOnce(&mut Ctx) -> X) -> X {
        let top = self.frame().compose(f);
        self.stack.push(top);
        let r = body(self);
        self.stack.pop();
        r
    }

    pub fn eval(&mut self, s: &Sub, p: &P) -> f64 {
        let v = s.v(p);
        let piece = Some(p.map(&self.frame()));
        self.queries.push(Query { kind: QueryKind::Eval, agent: s.id, piece, target: None, response: v });
        v
    }

    pub fn mark(&mut self, s: &Sub, fam: &Family<f64>, target: f64) -> Result<MarkOutcome<f64>> {
        let m = mark(&s.d, fam, target)?;
        let piece = m.piece().map(|p| p.map(&self.frame()));
        self.queries.push(Query { kind: QueryKind::Mark, agent: s.id, piece, target: Some(target), response: m.t_or_inf() });
        Ok(m)
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Partner number with the usual three cases: zero below `low`, everyone above
/// `high`, otherwise `formula(v)` capped at `n - 1`.
pub(crate) fn partner(v: f64, low: f64, high: f64, n: usize, formula: impl Fn(f64) -> f64) -> usize {
    if v < low - EPS {
        0
    } else if v >= high - EPS {
        n
    } else {
        let k = formula(v + EPS).floor().max(0.0) as usize;
        k.min(n - 1)
    }
}

/// Runs the room partition on a value table `vals[i][j]` with partner function `pf`.
pub(crate) fn rooms(vals: &[Vec<f64>], pf: impl Fn(f64) -> usize) -> Result<Vec<Vec<usize>>> {
    let p: Vec<Vec<usize>> = vals.iter().map(|row| row.iter().map(|&v| pf(v)).collect()).collect();
    Ok(room_partition(&PartnerMatrix::new(p)?)?.groups)
}

/// Index of the smallest mark parameter, ties to the lowest agent id.
pub(crate) fn argmin_mark(ts: &[(usize, f64)]) -> usize {
    let mut best = 0;
    for (k, &(id, t)) in ts.iter().enumerate() {
        let (bid, bt) = ts[best];
        if t < bt || (t == bt && id < bid) {
            best = k;
        }
    }
    best
}

/// Index of the largest mark parameter, ties to the lowest agent id.
pub(crate) fn argmax_mark(ts: &[(usize, f64)]) -> usize {
    let neg: Vec<(usize, f64)> = ts.iter().map(|&(i, t)| (i, -t)).collect();
    argmin_mark(&neg)
}

/// Most valuable member of a cover for one agent.
pub(crate) fn best_of(s: &Sub, cover: &[P]) -> P {
    let mut best = cover[0].clone();
    let mut bv = f64::NEG_INFINITY;
    for p in cover {
        let v = s.v(p);
        if v > bv {
            bv = v;
            best = p.clone();
        }
    }
    best
}

/// Builds the report; values and fractions are recomputed from the input densities.
pub(crate) struct Finish<'a> {
    pub name: &'a str,
    pub agents: &'a [Agent],
    pub cake: &'a CakeDomain<f64>,
    pub bound: Bound,
    pub constants: Option<(i64, i64)>,
    pub normalization: Normalization,
}

impl Finish<'_> {
    pub fn run(&self, out: Out, ctx: Ctx) -> Result<Division> {
        let mut assignments = BTreeMap::new();
        for (id, p) in out {
            if assignments.insert(id, p).is_some() {
                return Err(Error::Invariant(format!("agent {} received two pieces", id)));
            }
        }
        let mut results = Vec::with_capacity(self.agents.len());
        for a in self.agents {
            let piece = assignments
                .get(&a.id)
                .cloned()
                .ok_or_else(|| Error::Invariant(format!("agent {} received no piece", a.id)))?;
            let d = cake_measure(&a.density, self.cake)?;
            let total = match self.normalization {
                Normalization::Absolute => d.total(),
                Normalization::Relative => best_square(&d, &Region::from_domain(self.cake)?, 1e-9).value,
            };
            let value = d.piece_value(&piece);
            let fraction = if total > 0.0 { value / total } else { 1.0 };
            results.push(AgentResult { agent: a.id, piece, value, total, fraction });
        }
        Ok(Division {
            allocation: Allocation { assignments },
            report: DivisionReport {
                procedure: self.name.to_string(),
                n: self.agents.len(),
                bound: self.bound,
                constants: self.constants,
                normalization: self.normalization,
                results,
                queries: ctx.queries,
                notes: ctx.notes,
            },
        })
    }
}

/// Agents restricted to the cake, with stand-ins for zero-value agents.
pub(crate) fn prepare(agents: &[Agent], cake: &CakeDomain<f64>, ctx: &mut Ctx) -> Result<Vec<Sub>> {
    let mut ids: Vec<usize> = agents.iter().map(|a| a.id).collect();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("agent ids must be distinct".into()));
    }
    let mut out = Vec::with_capacity(agents.len());
    for a in agents {
        let mut d = cake_measure(&a.density, cake)?;
        if !(d.total() > 0.0) {
            ctx.note(format!("agent {} values the cake at zero; a uniform stand-in answers its queries", a.id));
            d = stand_in(cake)?;
        }
        out.push(Sub { id: a.id, d });
    }
    Ok(out)
}

pub(crate) fn rect_of(cake: &CakeDomain<f64>) -> Result<R> {
    match &cake.base {
        CakeBase::Rect(r) => Ok(*r),
        _ => Err(Error::Shape("the cake must be a rectangle".into())),
    }
}

pub(crate) fn need_agents(agents: &[Agent], min: usize) -> Result<()> {
    if agents.len() < min {
        return Err(Error::Precondition(format!("needs at least {} agents, got {}", min, agents.len())));
    }
    Ok(())
}
