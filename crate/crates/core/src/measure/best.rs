//! Best-square search and the covering-lemma selection.

use super::GridDensity;
use crate::error::{Error, Result};
use crate::geometry::{CakeBase, CakeDomain, Piece, Point, Rect, Square};
use crate::scalar::Real;

/// Rectangle minus a set of rectangular holes; the search space for squares.
#[derive(Debug, Clone, PartialEq)]
pub struct Region<T> {
    pub base: Rect<T>,
    pub holes: Vec<Rect<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityResult<T> {
    pub piece: Piece<T>,
    pub value: T,
}

/// Square anchored at a lattice point together with the largest side that fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor<T> {
    pub corner: Point<T>,
    pub dx: i8,
    pub dy: i8,
    pub max_side: T,
}

impl<T: Real> Anchor<T> {
    pub fn square(&self, side: T) -> Square<T> {
        Square::at_corner(self.corner, self.dx, self.dy, side)
    }
}

impl<T: Real> Region<T> {
    pub fn rect(base: Rect<T>) -> Self {
        Region { base, holes: Vec::new() }
    }

    pub fn from_piece(p: &Piece<T>) -> Result<Self> {
        match p {
            Piece::Square(s) => Ok(Region::rect(s.rect())),
            Piece::Rect(r) | Piece::HalfPlane(r) | Piece::QuarterPlane(r) => Ok(Region::rect(*r)),
            Piece::LShape { outer, notch } => Ok(Region { base: *outer, holes: vec![*notch] }),
            Piece::Staircase(s) => Ok(Region { base: s.hull(), holes: s.holes() }),
            _ => Err(Error::Unsupported(format!("square search inside a {}", p.kind()))),
        }
    }

    pub fn from_domain(d: &CakeDomain<T>) -> Result<Self> {
        match &d.base {
            CakeBase::Rect(_) => Ok(Region::rect(d.allowance().unwrap())),
            CakeBase::Staircase(s) => Ok(Region { base: s.hull(), holes: s.holes() }),
            CakeBase::GridRegion { xs, ys, mask } => {
                let base = Rect::new(xs[0], ys[0], xs[xs.len() - 1], ys[ys.len() - 1]);
                let mut holes: Vec<Rect<T>> = Vec::new();
                for (j, row) in mask.iter().enumerate() {
                    let mut i = 0;
                    while i < row.len() {
                        if row[i] {
                            i += 1;
                            continue;
                        }
                        let s = i;
                        while i < row.len() && !row[i] {
                            i += 1;
                        }
                        holes.push(Rect::new(xs[s], ys[j], xs[i], ys[j + 1]));
                    }
                }
                Ok(Region { base, holes })
            }
            CakeBase::Polygon(_) => Err(Error::Unsupported("square search inside a polygon cake".into())),
        }
    }

    pub fn with_holes(mut self, more: impl IntoIterator<Item = Rect<T>>) -> Self {
        self.holes.extend(more);
        self
    }

    /// Largest side of a square at `p` extending into `(dx, dy)` that avoids
    /// every hole interior and stays in the base.
    pub fn max_side(&self, p: Point<T>, dx: i8, dy: i8) -> T {
        let b = &self.base;
        if p.x < b.xmin || p.x > b.xmax || p.y < b.ymin || p.y > b.ymax {
            return T::zero();
        }
        let rx = if dx > 0 { b.xmax - p.x } else { p.x - b.xmin };
        let ry = if dy > 0 { b.ymax - p.y } else { p.y - b.ymin };
        let mut s = rx.min(ry);
        for h in &self.holes {
            let (h0, h1) = if dx > 0 { (h.xmin - p.x, h.xmax - p.x) } else { (p.x - h.xmax, p.x - h.xmin) };
            let (k0, k1) = if dy > 0 { (h.ymin - p.y, h.ymax - p.y) } else { (p.y - h.ymax, p.y - h.ymin) };
            if h1 > T::zero() && k1 > T::zero() {
                let block = h0.max(k0);
                if block <= T::zero() {
                    return T::zero();
                }
                s = s.min(block);
            }
        }
        s
    }

    /// Candidate lattice: density cuts plus finite base and hole bounds, inside the base.
    pub fn lattice(&self, d: &GridDensity<T>) -> (Vec<T>, Vec<T>) {
        let b = &self.base;
        let mut xs: Vec<T> = d.xs().to_vec();
        let mut ys: Vec<T> = d.ys().to_vec();
        for r in std::iter::once(b).chain(self.holes.iter()) {
            xs.extend([r.xmin, r.xmax]);
            ys.extend([r.ymin, r.ymax]);
        }
        let keep = |v: &mut Vec<T>, lo: T, hi: T| {
            v.retain(|c| c.is_finite() && *c >= lo && *c <= hi);
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.dedup();
        };
        keep(&mut xs, b.xmin, b.xmax);
        keep(&mut ys, b.ymin, b.ymax);
        (xs, ys)
    }

    /// All lattice anchors with a positive feasible side.
    pub fn anchors(&self, d: &GridDensity<T>) -> Vec<Anchor<T>> {
        let (xs, ys) = self.lattice(d);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                for (dx, dy) in [(1i8, 1i8), (-1, 1), (1, -1), (-1, -1)] {
                    let p = Point::new(x, y);
                    let s = self.max_side(p, dx, dy);
                    if s > T::zero() {
                        out.push(Anchor { corner: p, dx, dy, max_side: s });
                    }
                }
            }
        }
        out
    }
}

/// Side needed from an anchor to reach past the support, capping infinite squares.
fn support_reach<T: Real>(a: &Anchor<T>, sup: &Rect<T>) -> T {
    let rx = if a.dx > 0 { sup.xmax - a.corner.x } else { a.corner.x - sup.xmin };
    let ry = if a.dy > 0 { sup.ymax - a.corner.y } else { a.corner.y - sup.ymin };
    rx.max(ry).max(T::zero())
}

/// Finite side with the same value as `a.max_side`.
pub fn effective_side<T: Real>(a: &Anchor<T>, sup: Option<&Rect<T>>) -> T {
    match sup {
        Some(s) if !a.max_side.is_finite() => support_reach(a, s),
        None if !a.max_side.is_finite() => T::one(),
        _ => a.max_side,
    }
}

/// Square of maximum value inside the region.
///
/// For a fixed side the value is bilinear in the corner position between
/// lattice lines, so some optimal square has a corner on the lattice; value
/// grows with the side, so the largest feasible side at each anchor is enough.
/// The result is exact up to rounding; `tol` is accepted for interface parity.
pub fn best_square<T: Real>(d: &GridDensity<T>, region: &Region<T>, _tol: T) -> UtilityResult<T> {
    let sup = d.support();
    let mut best: Option<UtilityResult<T>> = None;
    for a in region.anchors(d) {
        let side = effective_side(&a, sup.as_ref());
        if !(side > T::zero()) {
            continue;
        }
        let sq = a.square(side);
        let v = d.rect_value(&sq.rect());
        if best.as_ref().map_or(true, |b| v > b.value) {
            best = Some(UtilityResult { piece: Piece::Square(sq), value: v });
        }
    }
    best.unwrap_or_else(|| {
        let b = &region.base;
        let x = if b.xmin.is_finite() { b.xmin } else { T::zero() };
        let y = if b.ymin.is_finite() { b.ymin } else { T::zero() };
        UtilityResult { piece: Piece::Square(Square::new(x, y, T::zero())), value: T::zero() }
    })
}

/// Most valuable member of a cover; worth at least the average of the cover.
pub fn best_covered_piece<T: Real>(d: &GridDensity<T>, cover: &[Piece<T>]) -> Result<UtilityResult<T>> {
    let mut best: Option<UtilityResult<T>> = None;
    for p in cover {
        let v = d.piece_value(p);
        if best.as_ref().map_or(true, |b| v > b.value) {
            best = Some(UtilityResult { piece: p.clone(), value: v });
        }
    }
    best.ok_or_else(|| Error::Precondition("cover must be nonempty".into()))
}

/// The two end squares covering a rectangle of aspect at most two.
pub fn two_square_cover<T: Real>(r: &Rect<T>) -> Vec<Piece<T>> {
    let w = r.width();
    let h = r.height();
    if w >= h {
        vec![Piece::square(r.xmin, r.ymin, h), Piece::square(r.xmax - h, r.ymin, h)]
    } else {
        vec![Piece::square(r.xmin, r.ymin, w), Piece::square(r.xmin, r.ymax - w, w)]
    }
}

/// Squares of side `h` tiling a rectangle along its long side (the last one flush with the end).
pub fn strip_cover<T: Real>(r: &Rect<T>) -> Vec<Piece<T>> {
    let w = r.width();
    let h = r.height();
    let (long, short) = if w >= h { (w, h) } else { (h, w) };
    let k = (long / short - T::c(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
    (0..k)
        .map(|i| {
            let off = (short * T::c(i as f64)).min(long - short);
            if w >= h {
                Piece::square(r.xmin + off, r.ymin, short)
            } else {
                Piece::square(r.xmin, r.ymin + off, short)
            }
        })
        .collect()
}

/// Three squares of side `1 - s` covering the unit-square L-shape left by a
/// corner square of side `s <= 1/2` at the corner `(cx, cy)` of `outer`.
pub fn lshape_square_cover<T: Real>(outer: &Rect<T>, notch: &Rect<T>) -> Vec<Piece<T>> {
    let side = outer.width();
    let s = notch.width();
    let t = side - s;
    let left = notch.xmin <= outer.xmin;
    let bottom = notch.ymin <= outer.ymin;
    // next to the notch horizontally, diagonally opposite, next to it vertically
    let xa = if left { outer.xmin + s } else { outer.xmin };
    let yb = if bottom { outer.ymin + s } else { outer.ymin };
    let xf = if left { outer.xmin } else { outer.xmax - t };
    let yf = if bottom { outer.ymin } else { outer.ymax - t };
    vec![Piece::square(xa, yf, t), Piece::square(xa, yb, t), Piece::square(xf, yb, t)]
}
