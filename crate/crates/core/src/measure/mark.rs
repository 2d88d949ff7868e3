//! Mark queries: the smallest member of a containment-ordered family of
//! pieces reaching a target value.

use super::GridDensity;
use crate::error::{Error, Result};
use crate::geometry::{poly, Piece, Point, Rect, Square};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// One-parameter family of pieces, growing with `t` in `[0, max]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T> {
    /// Square of side `t` with a corner at `anchor`, extending into quadrant `(dx, dy)`.
    CornerSquare { anchor: Point<T>, dx: i8, dy: i8, max: T },
    /// Strip of `rect` of depth `t` along side `from`; a vertical or horizontal cut.
    Sweep { rect: Rect<T>, from: Side },
    /// Part of the convex polygon with `normal . p <= offset + t`.
    Halfplane { poly: Vec<Point<T>>, normal: Point<T>, offset: T, max: T },
    /// Two squares of equal side `t` at two anchors.
    CornerSquarePair { a: Point<T>, adir: (i8, i8), b: Point<T>, bdir: (i8, i8), max: T },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkOutcome<T> {
    Finite { t: T, piece: Piece<T> },
    /// The whole family is worth less than the target.
    Infinite,
}

impl<T: Real> MarkOutcome<T> {
    pub fn t(&self) -> Option<T> {
        match self {
            MarkOutcome::Finite { t, .. } => Some(*t),
            MarkOutcome::Infinite => None,
        }
    }

    /// Parameter, with infinity for the sentinel.
    pub fn t_or_inf(&self) -> T {
        self.t().unwrap_or(T::infinity())
    }

    pub fn piece(&self) -> Option<&Piece<T>> {
        match self {
            MarkOutcome::Finite { piece, .. } => Some(piece),
            MarkOutcome::Infinite => None,
        }
    }
}

fn depth<T: Real>(r: &Rect<T>, s: Side) -> T {
    match s {
        Side::Left | Side::Right => r.width(),
        Side::Bottom | Side::Top => r.height(),
    }
}

impl<T: Real> Family<T> {
    pub fn range(&self) -> (T, T) {
        let hi = match self {
            Family::CornerSquare { max, .. } | Family::Halfplane { max, .. } | Family::CornerSquarePair { max, .. } => *max,
            Family::Sweep { rect, from } => depth(rect, *from),
        };
        (T::zero(), hi)
    }

    pub fn vertical_cut(rect: Rect<T>) -> Self {
        Family::Sweep { rect, from: Side::Left }
    }

    pub fn horizontal_cut(rect: Rect<T>) -> Self {
        Family::Sweep { rect, from: Side::Bottom }
    }

    pub fn piece(&self, t: T) -> Piece<T> {
        match self {
            Family::CornerSquare { anchor, dx, dy, .. } => Piece::Square(Square::at_corner(*anchor, *dx, *dy, t)),
            Family::Sweep { rect, from } => Piece::Rect(strip(rect, *from, t)),
            Family::Halfplane { poly, normal, offset, .. } => {
                Piece::FfdPolygon(poly::clip_halfplane(poly, normal.x, normal.y, *offset + t))
            }
            Family::CornerSquarePair { a, adir, b, bdir, .. } => Piece::SquarePair(
                Square::at_corner(*a, adir.0, adir.1, t),
                Square::at_corner(*b, bdir.0, bdir.1, t),
            ),
        }
    }

    pub fn value(&self, d: &GridDensity<T>, t: T) -> T {
        match self {
            Family::Halfplane { poly, normal, offset, .. } => {
                d.poly_value(&poly::clip_halfplane(poly, normal.x, normal.y, *offset + t))
            }
            _ => d.piece_value(&self.piece(t)),
        }
    }

    /// Parameters in `(lo, hi)` where the value stops being a single polynomial.
    pub fn breakpoints(&self, d: &GridDensity<T>) -> Vec<T> {
        let (lo, hi) = self.range();
        let mut out = Vec::new();
        match self {
            Family::CornerSquare { anchor, dx, dy, .. } => {
                push_axis(&mut out, d.xs(), anchor.x, *dx);
                push_axis(&mut out, d.ys(), anchor.y, *dy);
            }
            Family::Sweep { rect, from } => match from {
                Side::Left => push_axis(&mut out, d.xs(), rect.xmin, 1),
                Side::Right => push_axis(&mut out, d.xs(), rect.xmax, -1),
                Side::Bottom => push_axis(&mut out, d.ys(), rect.ymin, 1),
                Side::Top => push_axis(&mut out, d.ys(), rect.ymax, -1),
            },
            Family::CornerSquarePair { a, adir, b, bdir, .. } => {
                push_axis(&mut out, d.xs(), a.x, adir.0);
                push_axis(&mut out, d.ys(), a.y, adir.1);
                push_axis(&mut out, d.xs(), b.x, bdir.0);
                push_axis(&mut out, d.ys(), b.y, bdir.1);
                // moving sides of one square passing sides of the other
                for (p, pd, q, qd) in [(a.x, adir.0, b.x, bdir.0), (a.y, adir.1, b.y, bdir.1)] {
                    let diff = q - p;
                    out.push(diff.abs());
                    if pd != qd {
                        out.push(diff.abs() * T::half());
                    }
                }
            }
            Family::Halfplane { poly: pg, normal, offset, .. } => {
                let (x0, y0, x1, y1) = poly::bbox(pg);
                let xs = d.xs();
                let ys = d.ys();
                let mut vx: Vec<T> = vec![x0, x1];
                vx.extend(xs.iter().copied().filter(|c| *c > x0 && *c < x1));
                let mut vy: Vec<T> = vec![y0, y1];
                vy.extend(ys.iter().copied().filter(|c| *c > y0 && *c < y1));
                vx.sort_by(|a, b| a.partial_cmp(b).unwrap());
                vy.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for w in vy.windows(2) {
                    let strip = poly::clip_box(pg, T::neg_infinity(), w[0], T::infinity(), w[1]);
                    if strip.is_empty() {
                        continue;
                    }
                    for u in vx.windows(2) {
                        let c = poly::clip_box(&strip, u[0], T::neg_infinity(), u[1], T::infinity());
                        for p in c {
                            out.push(normal.x * p.x + normal.y * p.y - *offset);
                        }
                    }
                }
            }
        }
        out.retain(|t| *t > lo && *t < hi && t.is_finite());
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }
}

fn strip<T: Real>(r: &Rect<T>, s: Side, t: T) -> Rect<T> {
    match s {
        Side::Left => Rect::new(r.xmin, r.ymin, r.xmin + t, r.ymax),
        Side::Right => Rect::new(r.xmax - t, r.ymin, r.xmax, r.ymax),
        Side::Bottom => Rect::new(r.xmin, r.ymin, r.xmax, r.ymin + t),
        Side::Top => Rect::new(r.xmin, r.ymax - t, r.xmax, r.ymax),
    }
}

fn push_axis<T: Real>(out: &mut Vec<T>, cuts: &[T], from: T, dir: i8) {
    for c in cuts {
        let t = if dir > 0 { *c - from } else { from - *c };
        if t > T::zero() {
            out.push(t);
        }
    }
}

/// Smallest `t` whose piece is worth `v`, solved in closed form on the
/// polynomial segment that contains it.
pub fn mark<T: Real>(d: &GridDensity<T>, fam: &Family<T>, v: T) -> Result<MarkOutcome<T>> {
    if !(v >= T::zero()) {
        return Err(Error::Precondition("mark target must be nonnegative".into()));
    }
    let (lo, hi) = fam.range();
    let f = |t: T| fam.value(d, t);
    let done = |t: T| Ok(MarkOutcome::Finite { t, piece: fam.piece(t) });
    if f(lo) >= v {
        return done(lo);
    }
    let mut pts = vec![lo];
    pts.extend(fam.breakpoints(d));
    let tail = if hi.is_finite() {
        pts.push(hi);
        hi
    } else {
        // constant past the last breakpoint because the support is bounded
        *pts.last().unwrap()
    };
    let ftail = f(tail);
    let slack = T::c(1e-10) * v.max(ftail).max(T::one());
    if ftail < v {
        if ftail >= v - slack {
            // reachable up to rounding: the value first gets this close at the smallest such t
            return done(first_reach(&f, &pts, ftail));
        }
        return Ok(MarkOutcome::Infinite);
    }
    done(first_reach(&f, &pts, v))
}

/// Smallest `t` with `f(t) >= v`, given the sorted polynomial breakpoints `pts`,
/// `f(pts[0]) < v <= f(last)`.
fn first_reach<T: Real, F: Fn(T) -> T>(f: &F, pts: &[T], v: T) -> T {
    let (mut a, mut b) = (0usize, pts.len() - 1);
    if f(pts[0]) >= v {
        return pts[0];
    }
    while b - a > 1 {
        let m = (a + b) / 2;
        if f(pts[m]) >= v {
            b = m;
        } else {
            a = m;
        }
    }
    let (ta, tb) = (pts[a], pts[b]);
    let (fa, fb) = (f(ta), f(tb));
    let h = tb - ta;
    let fm = f(ta + h * T::half());
    let beta = T::two() * (fb - T::two() * fm + fa) / (h * h);
    let alpha = (fb - fa) / h - beta * h;
    let r = v - fa;
    let disc = (alpha * alpha + T::c(4.0) * beta * r).max(T::zero());
    let den = alpha + disc.sqrt();
    let mut t = if den > T::zero() { ta + (T::two() * r / den).min(h) } else { tb };
    t = t.max(ta).min(tb);
    let tol = T::c(1e-12) * v.abs().max(T::one());
    let ft = f(t);
    if ft >= v - tol && (ft - v).abs() <= tol {
        return t;
    }
    // rounding trouble: fall back to bisection on the segment
    let (mut lo, mut hi) = (ta, tb);
    for _ in 0..200 {
        let mid = lo + (hi - lo) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= v {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let u = GridDensity::<f64>::uniform(&Rect::<f64>::unit(), 1.0).unwrap();
        let fam = Family::CornerSquare { anchor: Point::new(0.0, 0.0), dx: 1, dy: 1, max: 1.0 };
        assert!((mark(&u, &fam, 0.25).unwrap().t().unwrap() - 0.5).abs() < 1e-12);

        let w = GridDensity::<f64>::uniform(&Rect::new(0.0, 0.0, 2.0, 1.0), 1.0).unwrap();
        let cut = Family::vertical_cut(Rect::new(0.0, 0.0, 2.0, 1.0));
        assert!((mark(&w, &cut, 1.0).unwrap().t().unwrap() - 1.0).abs() < 1e-12);

        let c = GridDensity::<f64>::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0], vec![vec![4.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!((mark(&c, &fam, 0.25).unwrap().t().unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infinite_sentinel() {
        let u = GridDensity::<f64>::uniform(&Rect::<f64>::unit(), 1.0).unwrap();
        let fam = Family::CornerSquare { anchor: Point::new(0.0, 0.0), dx: 1, dy: 1, max: f64::INFINITY };
        assert_eq!(mark(&u, &fam, 2.0).unwrap(), MarkOutcome::Infinite);
        assert!((mark(&u, &fam, 1.0).unwrap().t().unwrap() - 1.0).abs() < 1e-12);
        assert!(mark(&u, &fam, -1.0).is_err());
    }

    #[test]
    fn zero_target_and_flat_start() {
        let d = GridDensity::<f64>::uniform(&Rect::new(0.5, 0.0, 1.0, 1.0), 2.0).unwrap();
        let cut = Family::vertical_cut(Rect::<f64>::unit());
        assert_eq!(mark(&d, &cut, 0.0).unwrap().t(), Some(0.0));
        assert!((mark(&d, &cut, 0.5).unwrap().t().unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn diagonal_cut() {
        let u = GridDensity::<f64>::uniform(&Rect::<f64>::unit(), 1.0).unwrap();
        let tri = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let fam = Family::Halfplane { poly: tri, normal: Point::new(s, s), offset: 0.0, max: s };
        // the corner triangle of leg a has value a^2/2 and offset a/sqrt(2)
        let t = mark(&u, &fam, 0.125).unwrap().t().unwrap();
        assert!((t - 0.5 * s).abs() < 1e-12);
    }
}
