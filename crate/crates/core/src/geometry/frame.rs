//! Similarity maps made of a dihedral symmetry, a positive scale and a shift.

use super::{Point, Rect};
use crate::scalar::Real;

/// Maps local coordinates to parent coordinates: `parent = origin + scale * M * local`,
/// with `M` a signed permutation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame<T> {
    pub origin: Point<T>,
    pub scale: T,
    /// Row `r` of `M` has its single nonzero entry `sign[r]` in column `col[r]`.
    pub col: [usize; 2],
    pub sign: [i8; 2],
}

fn pick<T: Real>(p: Point<T>, c: usize) -> T {
    if c == 0 {
        p.x
    } else {
        p.y
    }
}

fn signed<T: Real>(v: T, s: i8) -> T {
    if s < 0 {
        -v
    } else {
        v
    }
}

impl<T: Real> Frame<T> {
    pub fn identity() -> Self {
        Frame { origin: Point::new(T::zero(), T::zero()), scale: T::one(), col: [0, 1], sign: [1, 1] }
    }

    pub fn translate(dx: T, dy: T) -> Self {
        Frame { origin: Point::new(dx, dy), ..Self::identity() }
    }

    /// Local box `[0, w/s] x [0, h/s]` onto `r`, keeping orientation.
    pub fn onto(r: &Rect<T>, scale: T) -> Self {
        Frame { origin: Point::new(r.xmin, r.ymin), scale, ..Self::identity() }
    }

    /// Mirror `x -> w - x`.
    pub fn flip_x(w: T) -> Self {
        Frame { origin: Point::new(w, T::zero()), scale: T::one(), col: [0, 1], sign: [-1, 1] }
    }

    /// Mirror `y -> h - y`.
    pub fn flip_y(h: T) -> Self {
        Frame { origin: Point::new(T::zero(), h), scale: T::one(), col: [0, 1], sign: [1, -1] }
    }

    /// Swap the axes.
    pub fn transpose() -> Self {
        Frame { origin: Point::new(T::zero(), T::zero()), scale: T::one(), col: [1, 0], sign: [1, 1] }
    }

    /// Rotation by 180 degrees around the centre of `[0,w] x [0,h]`.
    pub fn rot180(w: T, h: T) -> Self {
        Frame { origin: Point::new(w, h), scale: T::one(), col: [0, 1], sign: [-1, -1] }
    }

    /// Apply the linear part only; never multiplies an infinity by zero.
    fn lin(&self, p: Point<T>) -> Point<T> {
        Point::new(
            signed(pick(p, self.col[0]), self.sign[0]) * self.scale,
            signed(pick(p, self.col[1]), self.sign[1]) * self.scale,
        )
    }

    pub fn apply(&self, p: Point<T>) -> Point<T> {
        let q = self.lin(p);
        Point::new(self.origin.x + q.x, self.origin.y + q.y)
    }

    pub fn apply_rect(&self, r: &Rect<T>) -> Rect<T> {
        let a = self.apply(Point::new(r.xmin, r.ymin));
        let b = self.apply(Point::new(r.xmax, r.ymax));
        Rect::new(a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y))
    }

    /// Inverse map, parent to local.
    pub fn invert(&self, p: Point<T>) -> Point<T> {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        let d = [dx, dy];
        let mut out = [T::zero(); 2];
        for r in 0..2 {
            out[self.col[r]] = signed(d[r], self.sign[r]) / self.scale;
        }
        Point::new(out[0], out[1])
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Frame<T>) -> Frame<T> {
        let origin = self.apply(inner.origin);
        let mut col = [0usize; 2];
        let mut sign = [1i8; 2];
        for r in 0..2 {
            let mid = self.col[r];
            col[r] = inner.col[mid];
            sign[r] = self.sign[r] * inner.sign[mid];
        }
        Frame { origin, scale: self.scale * inner.scale, col, sign }
    }

    /// Parent axis fed by local axis `a`, with its sign.
    pub fn parent_axis_of(&self, a: usize) -> (usize, i8) {
        for r in 0..2 {
            if self.col[r] == a {
                return (r, self.sign[r]);
            }
        }
        unreachable!("signed permutation")
    }

    /// True when the linear part is a positive multiple of the identity.
    pub fn preserves_axes(&self) -> bool {
        self.col == [0, 1] && self.sign == [1, 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let f = Frame::translate(1.0, 2.0).compose(&Frame::transpose()).compose(&Frame::flip_x(3.0));
        for &(x, y) in &[(0.0f64, 0.0f64), (1.5, -2.0), (3.0, 7.0)] {
            let p = Point::new(x, y);
            let q = f.apply(p);
            let back = f.invert(q);
            assert!((back.x - x).abs() < 1e-12 && (back.y - y).abs() < 1e-12);
        }
        // flip_x(3) sends (0,0) to (3,0); transpose gives (0,3); shift gives (1,5)
        let q = f.apply(Point::new(0.0, 0.0));
        assert_eq!((q.x, q.y), (1.0, 5.0));
    }

    #[test]
    fn infinite_rect() {
        let r = Rect::new(0.0, 0.0, f64::INFINITY, 1.0);
        let m = Frame::transpose().apply_rect(&r);
        assert_eq!(m, Rect::new(0.0, 0.0, 1.0, f64::INFINITY));
        let m = Frame::flip_x(0.0).apply_rect(&r);
        assert_eq!(m, Rect::new(f64::NEG_INFINITY, 0.0, 0.0, 1.0));
    }
}
