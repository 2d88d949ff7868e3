//! Piecewise-constant value densities on an axis-parallel grid.

use crate::error::{Error, Result};
use crate::geometry::{poly, Frame, Piece, Point, Rect};
use crate::scalar::Real;

/// Nonnegative density, constant on each cell `[xs[i],xs[i+1]] x [ys[j],ys[j+1]]`
/// with value `cells[j][i]` per unit area, zero outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    cells: Vec<Vec<T>>,
    /// `prefix[j][i]` is the integral over `[xs[0],xs[i]] x [ys[0],ys[j]]`.
    prefix: Vec<Vec<T>>,
}

impl<T: Real> GridDensity<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>, cells: Vec<Vec<T>>) -> Result<Self> {
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::Density("need at least two cuts per axis".into()));
        }
        for v in xs.iter().chain(ys.iter()) {
            if !v.is_finite() {
                return Err(Error::Density("cuts must be finite".into()));
            }
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) || ys.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Density("cuts must be strictly increasing".into()));
        }
        if cells.len() != ys.len() - 1 || cells.iter().any(|r| r.len() != xs.len() - 1) {
            return Err(Error::Density(format!(
                "cells must be {} rows of {} values",
                ys.len() - 1,
                xs.len() - 1
            )));
        }
        if cells.iter().flatten().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::Density("cell values must be finite and nonnegative".into()));
        }
        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let mut prefix = vec![vec![T::zero(); nx + 1]; ny + 1];
        for j in 0..ny {
            let h = ys[j + 1] - ys[j];
            let mut row = T::zero();
            for i in 0..nx {
                row = row + cells[j][i] * (xs[i + 1] - xs[i]) * h;
                prefix[j + 1][i + 1] = prefix[j][i + 1] + row;
            }
        }
        Ok(GridDensity { xs, ys, cells, prefix })
    }

    pub fn uniform(r: &Rect<T>, density: T) -> Result<Self> {
        Self::new(vec![r.xmin, r.xmax], vec![r.ymin, r.ymax], vec![vec![density]])
    }

    /// Sum of densities, each uniform on its rectangle with the given total value.
    pub fn from_blocks(blocks: &[(Rect<T>, T)]) -> Result<Self> {
        let mut xs: Vec<T> = blocks.iter().flat_map(|(r, _)| [r.xmin, r.xmax]).collect();
        let mut ys: Vec<T> = blocks.iter().flat_map(|(r, _)| [r.ymin, r.ymax]).collect();
        sort_dedup(&mut xs);
        sort_dedup(&mut ys);
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::Density("blocks must have positive area".into()));
        }
        let mut cells = vec![vec![T::zero(); xs.len() - 1]; ys.len() - 1];
        for (r, v) in blocks {
            let a = r.area();
            if !(a > T::zero()) {
                return Err(Error::Density("blocks must have positive area".into()));
            }
            let d = *v / a;
            for j in 0..ys.len() - 1 {
                for i in 0..xs.len() - 1 {
                    if xs[i] >= r.xmin && xs[i + 1] <= r.xmax && ys[j] >= r.ymin && ys[j + 1] <= r.ymax {
                        cells[j][i] = cells[j][i] + d;
                    }
                }
            }
        }
        Self::new(xs, ys, cells)
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> &[T] {
        &self.ys
    }

    pub fn cells(&self) -> &[Vec<T>] {
        &self.cells
    }

    pub fn cell_rect(&self, i: usize, j: usize) -> Rect<T> {
        Rect::new(self.xs[i], self.ys[j], self.xs[i + 1], self.ys[j + 1])
    }

    pub fn total(&self) -> T {
        self.prefix[self.ys.len() - 1][self.xs.len() - 1]
    }

    /// Bounding box of the cells carrying positive density, if any.
    pub fn support(&self) -> Option<Rect<T>> {
        let mut r: Option<Rect<T>> = None;
        for (j, row) in self.cells.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v > T::zero() {
                    let c = self.cell_rect(i, j);
                    r = Some(match r {
                        None => c,
                        Some(b) => Rect::new(b.xmin.min(c.xmin), b.ymin.min(c.ymin), b.xmax.max(c.xmax), b.ymax.max(c.ymax)),
                    });
                }
            }
        }
        r
    }

    /// Integral over `(-inf, x] x (-inf, y]`, exact bilinear interpolation of the prefix table.
    pub fn cdf(&self, x: T, y: T) -> T {
        let (i, fx) = locate(&self.xs, x);
        let (j, fy) = locate(&self.ys, y);
        let p = &self.prefix;
        let p00 = p[j][i];
        let z = T::zero();
        let a = if fx > z { p[j][i + 1] - p00 } else { z };
        let b = if fy > z { p[j + 1][i] - p00 } else { z };
        let c = if fx > z && fy > z { p[j + 1][i + 1] - p[j][i + 1] - p[j + 1][i] + p00 } else { z };
        p00 + fx * a + fy * b + fx * fy * c
    }

    pub fn rect_value(&self, r: &Rect<T>) -> T {
        if !(r.xmin < r.xmax && r.ymin < r.ymax) {
            return T::zero();
        }
        let v = self.cdf(r.xmax, r.ymax) - self.cdf(r.xmin, r.ymax) - self.cdf(r.xmax, r.ymin) + self.cdf(r.xmin, r.ymin);
        v.max(T::zero())
    }

    /// Exact integral over a convex polygon.
    pub fn poly_value(&self, p: &[Point<T>]) -> T {
        if p.len() < 3 {
            return T::zero();
        }
        let (x0, y0, x1, y1) = poly::bbox(p);
        let (i0, i1) = cell_range(&self.xs, x0, x1);
        let (j0, j1) = cell_range(&self.ys, y0, y1);
        let mut s = T::zero();
        for j in j0..j1 {
            // clip to the row first, then split the strip into cells
            let strip = poly::clip_box(p, T::neg_infinity(), self.ys[j], T::infinity(), self.ys[j + 1]);
            if strip.len() < 3 {
                continue;
            }
            for i in i0..i1 {
                let d = self.cells[j][i];
                if d == T::zero() {
                    continue;
                }
                let c = poly::clip_box(&strip, self.xs[i], T::neg_infinity(), self.xs[i + 1], T::infinity());
                s = s + d * poly::area(&c);
            }
        }
        s
    }

    pub fn piece_value(&self, p: &Piece<T>) -> T {
        match p {
            Piece::Square(s) => self.rect_value(&s.rect()),
            Piece::Rect(r) | Piece::HalfPlane(r) | Piece::QuarterPlane(r) => self.rect_value(r),
            Piece::LShape { outer, notch } => {
                let inner = outer.intersect(notch).map(|n| self.rect_value(&n)).unwrap_or(T::zero());
                (self.rect_value(outer) - inner).max(T::zero())
            }
            Piece::Staircase(s) => s.strips().iter().fold(T::zero(), |a, r| a + self.rect_value(r)),
            Piece::FfdPolygon(v) => self.poly_value(v),
            Piece::SquarePair(a, b) => {
                let (ra, rb) = (a.rect(), b.rect());
                let both = ra.intersect(&rb).map(|i| self.rect_value(&i)).unwrap_or(T::zero());
                self.rect_value(&ra) + self.rect_value(&rb) - both
            }
        }
    }

    /// Copy with density multiplied by `c`.
    pub fn scaled(&self, c: T) -> Self {
        let cells = self.cells.iter().map(|r| r.iter().map(|v| *v * c).collect()).collect();
        Self::new(self.xs.clone(), self.ys.clone(), cells).expect("scaling keeps validity")
    }

    /// Copy that is zero outside `r`.
    pub fn restricted(&self, r: &Rect<T>) -> Self {
        let clip = |cuts: &[T], lo: T, hi: T| {
            let mut v: Vec<T> = cuts.to_vec();
            if lo.is_finite() {
                v.push(lo);
            }
            if hi.is_finite() {
                v.push(hi);
            }
            sort_dedup(&mut v);
            v
        };
        let xs = clip(&self.xs, r.xmin, r.xmax);
        let ys = clip(&self.ys, r.ymin, r.ymax);
        let mut cells = vec![vec![T::zero(); xs.len() - 1]; ys.len() - 1];
        for j in 0..ys.len() - 1 {
            let cy = (ys[j] + ys[j + 1]) * T::half();
            if cy < r.ymin || cy > r.ymax {
                continue;
            }
            for i in 0..xs.len() - 1 {
                let cx = (xs[i] + xs[i + 1]) * T::half();
                if cx < r.xmin || cx > r.xmax {
                    continue;
                }
                cells[j][i] = self.density_at(cx, cy);
            }
        }
        Self::new(xs, ys, cells).expect("restriction keeps validity").trimmed()
    }

    pub fn density_at(&self, x: T, y: T) -> T {
        if x < self.xs[0] || y < self.ys[0] || x > self.xs[self.xs.len() - 1] || y > self.ys[self.ys.len() - 1] {
            return T::zero();
        }
        let i = (self.xs.partition_point(|c| *c <= x).max(1) - 1).min(self.xs.len() - 2);
        let j = (self.ys.partition_point(|c| *c <= y).max(1) - 1).min(self.ys.len() - 2);
        self.cells[j][i]
    }

    /// Drops empty border rows and columns.
    pub fn trimmed(&self) -> Self {
        let nx = self.xs.len() - 1;
        let ny = self.ys.len() - 1;
        let col_nz = |i: usize| (0..ny).any(|j| self.cells[j][i] > T::zero());
        let row_nz = |j: usize| self.cells[j].iter().any(|v| *v > T::zero());
        let i0 = (0..nx).find(|&i| col_nz(i));
        let j0 = (0..ny).find(|&j| row_nz(j));
        match (i0, j0) {
            (Some(i0), Some(j0)) => {
                let i1 = (0..nx).rev().find(|&i| col_nz(i)).unwrap() + 1;
                let j1 = (0..ny).rev().find(|&j| row_nz(j)).unwrap() + 1;
                if i0 == 0 && j0 == 0 && i1 == nx && j1 == ny {
                    return self.clone();
                }
                let cells = (j0..j1).map(|j| self.cells[j][i0..i1].to_vec()).collect();
                Self::new(self.xs[i0..=i1].to_vec(), self.ys[j0..=j1].to_vec(), cells).unwrap()
            }
            _ => Self::new(vec![self.xs[0], self.xs[1]], vec![self.ys[0], self.ys[1]], vec![vec![T::zero()]]).unwrap(),
        }
    }

    /// The same measure expressed in the local coordinates of `f`
    /// (`parent = f.apply(local)`). Values of corresponding regions agree.
    pub fn pullback(&self, f: &Frame<T>) -> Self {
        // local axis a is read from parent axis pa with sign sg
        let mut axes: [(Vec<T>, bool); 2] = [(Vec::new(), false), (Vec::new(), false)];
        for a in 0..2 {
            let (pa, sg) = f.parent_axis_of(a);
            let (cuts, o) = if pa == 0 { (&self.xs, f.origin.x) } else { (&self.ys, f.origin.y) };
            let mut v: Vec<T> = cuts.iter().map(|c| (*c - o) / f.scale).collect();
            if sg < 0 {
                v = v.into_iter().rev().map(|c| -c).collect();
            }
            axes[a] = (v, pa == 1);
        }
        let swap = axes[0].1;
        let rev_x = f.parent_axis_of(0).1 < 0;
        let rev_y = f.parent_axis_of(1).1 < 0;
        let nx = axes[0].0.len() - 1;
        let ny = axes[1].0.len() - 1;
        let jac = f.scale * f.scale;
        let mut cells = vec![vec![T::zero(); nx]; ny];
        for (jl, row) in cells.iter_mut().enumerate() {
            for (il, c) in row.iter_mut().enumerate() {
                let a = if rev_x { nx - 1 - il } else { il };
                let b = if rev_y { ny - 1 - jl } else { jl };
                let (pi, pj) = if swap { (b, a) } else { (a, b) };
                *c = self.cells[pj][pi] * jac;
            }
        }
        let [(xs, _), (ys, _)] = axes;
        Self::new(xs, ys, cells).expect("dihedral maps keep validity")
    }

    /// Values of the rooms of a partition of `cake`.
    pub fn eval_partition(&self, cake: &Piece<T>, rooms: &[Piece<T>], tol: T) -> Result<Vec<T>> {
        let area: T = rooms.iter().fold(T::zero(), |s, r| s + r.area());
        let ca = cake.area();
        if !crate::geometry::interior_disjoint(rooms, tol) {
            return Err(Error::NotPartition("rooms overlap".into()));
        }
        if ca.is_finite() && (area - ca).abs() > tol * ca.max(T::one()) {
            return Err(Error::NotPartition("rooms do not cover the cake".into()));
        }
        let vals: Vec<T> = rooms.iter().map(|r| self.piece_value(r)).collect();
        Ok(vals)
    }
}

fn sort_dedup<T: Real>(v: &mut Vec<T>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
}

/// Cell index and fraction for coordinate `v`, clamped to the grid.
fn locate<T: Real>(cuts: &[T], v: T) -> (usize, T) {
    let n = cuts.len();
    if !(v > cuts[0]) {
        return (0, T::zero());
    }
    if v >= cuts[n - 1] {
        return (n - 1, T::zero());
    }
    let i = cuts.partition_point(|c| *c <= v) - 1;
    let f = (v - cuts[i]) / (cuts[i + 1] - cuts[i]);
    (i, f)
}

/// Half-open index range of cells overlapping `[lo, hi]`.
fn cell_range<T: Real>(cuts: &[T], lo: T, hi: T) -> (usize, usize) {
    let n = cuts.len() - 1;
    let a = cuts.partition_point(|c| *c <= lo).saturating_sub(1).min(n);
    let b = cuts.partition_point(|c| *c < hi).min(n);
    (a, b.max(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cells() -> GridDensity<f64> {
        GridDensity::<f64>::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0], vec![vec![1.0, 3.0]]).unwrap()
    }

    #[test]
    fn spec_examples() {
        let u = GridDensity::<f64>::uniform(&Rect::<f64>::unit(), 1.0).unwrap();
        assert!((u.piece_value(&Piece::square(0.0, 0.0, 0.5)) - 0.25).abs() < 1e-15);
        assert!((two_cells().piece_value(&Piece::rect(0.5, 0.0, 1.5, 1.0)) - 2.0).abs() < 1e-15);
        let tri = Piece::FfdPolygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
        assert!((u.piece_value(&tri) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_partition_examples() {
        let u = GridDensity::<f64>::uniform(&Rect::<f64>::unit(), 1.0).unwrap();
        let q = |x, y| Piece::square(x, y, 0.5);
        let v = u.eval_partition(&Piece::Rect(Rect::<f64>::unit()), &[q(0.0, 0.0), q(0.5, 0.0), q(0.0, 0.5), q(0.5, 0.5)], 1e-9).unwrap();
        assert!(v.iter().all(|x| (x - 0.25).abs() < 1e-15));
        let v = u.eval_partition(&Piece::Rect(Rect::<f64>::unit()), &[Piece::Rect(Rect::<f64>::unit())], 1e-9).unwrap();
        assert_eq!(v, vec![1.0]);
        assert!(u.eval_partition(&Piece::Rect(Rect::<f64>::unit()), &[q(0.0, 0.0)], 1e-9).is_err());
    }

    #[test]
    fn infinite_rects_and_outside() {
        let d = two_cells();
        assert!((d.rect_value(&Rect::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY)) - 4.0).abs() < 1e-15);
        assert_eq!(d.rect_value(&Rect::new(5.0, 5.0, 6.0, 6.0)), 0.0);
        assert!((d.rect_value(&Rect::new(1.0, -3.0, f64::INFINITY, 0.5)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn pullback_preserves_values() {
        let d = GridDensity::<f64>::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 3.0], vec![vec![1.0, 2.0], vec![5.0, 0.5]]).unwrap();
        let f = Frame::translate(3.0, 0.0).compose(&Frame::transpose()).compose(&Frame::flip_y(1.0));
        let f = Frame { scale: 0.5, ..f };
        let local = d.pullback(&f);
        assert!((local.total() - d.total()).abs() < 1e-12);
        let r = Rect::new(0.3, -1.0, 2.0, 4.5);
        let world = f.apply_rect(&r);
        assert!((local.rect_value(&r) - d.rect_value(&world)).abs() < 1e-12);
    }

    #[test]
    fn restriction() {
        let d = two_cells();
        let r = d.restricted(&Rect::new(0.5, 0.0, 1.5, 0.5));
        assert!((r.total() - 1.0).abs() < 1e-15);
        assert!((r.rect_value(&Rect::new(0.0, 0.0, 1.0, 1.0)) - 0.25).abs() < 1e-15);
    }
}
