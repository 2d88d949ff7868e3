//! Convex polygon helpers.

use super::Point;
use crate::scalar::Real;

/// Signed area, positive for counter-clockwise vertex order.
pub fn signed_area<T: Real>(p: &[Point<T>]) -> T {
    let n = p.len();
    if n < 3 {
        return T::zero();
    }
    let mut s = T::zero();
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        s = s + (a.x * b.y - b.x * a.y);
    }
    s * T::half()
}

pub fn area<T: Real>(p: &[Point<T>]) -> T {
    signed_area(p).abs()
}

/// Returns the polygon in counter-clockwise order.
pub fn ccw<T: Real>(p: &[Point<T>]) -> Vec<Point<T>> {
    let mut v = p.to_vec();
    if signed_area(&v) < T::zero() {
        v.reverse();
    }
    v
}

/// Keeps the part of `p` where `a*x + b*y <= c`.
pub fn clip_halfplane<T: Real>(p: &[Point<T>], a: T, b: T, c: T) -> Vec<Point<T>> {
    let n = p.len();
    let mut out = Vec::with_capacity(n + 2);
    if n == 0 {
        return out;
    }
    let side = |q: &Point<T>| a * q.x + b * q.y - c;
    for i in 0..n {
        let cur = p[i];
        let nxt = p[(i + 1) % n];
        let sc = side(&cur);
        let sn = side(&nxt);
        if sc <= T::zero() {
            out.push(cur);
        }
        if (sc < T::zero() && sn > T::zero()) || (sc > T::zero() && sn < T::zero()) {
            let t = sc / (sc - sn);
            out.push(Point::new(cur.x + (nxt.x - cur.x) * t, cur.y + (nxt.y - cur.y) * t));
        }
    }
    out
}

/// Clips `p` to an axis-parallel box; infinite bounds are skipped.
pub fn clip_box<T: Real>(p: &[Point<T>], x0: T, y0: T, x1: T, y1: T) -> Vec<Point<T>> {
    let one = T::one();
    let z = T::zero();
    let mut v = p.to_vec();
    if x0.is_finite() {
        v = clip_halfplane(&v, -one, z, -x0);
    }
    if x1.is_finite() {
        v = clip_halfplane(&v, one, z, x1);
    }
    if y0.is_finite() {
        v = clip_halfplane(&v, z, -one, -y0);
    }
    if y1.is_finite() {
        v = clip_halfplane(&v, z, one, y1);
    }
    v
}

/// Intersection of two convex polygons.
pub fn clip_convex<T: Real>(subject: &[Point<T>], clip: &[Point<T>]) -> Vec<Point<T>> {
    let c = ccw(clip);
    let n = c.len();
    let mut v = subject.to_vec();
    for i in 0..n {
        if v.is_empty() {
            break;
        }
        let a = c[i];
        let b = c[(i + 1) % n];
        // inside is to the left of a->b: cross(b-a, p-a) >= 0
        let nx = b.y - a.y;
        let ny = a.x - b.x;
        v = clip_halfplane(&v, nx, ny, nx * a.x + ny * a.y);
    }
    v
}

pub fn is_convex<T: Real>(p: &[Point<T>], tol: T) -> bool {
    let n = p.len();
    if n < 3 {
        return false;
    }
    let scale = bbox_diag(p).max(T::min_positive_value());
    let mut sign = T::zero();
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        let c = p[(i + 2) % n];
        let cr = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if cr.abs() <= tol * scale * scale {
            continue;
        }
        if sign == T::zero() {
            sign = cr.signum();
        } else if cr.signum() != sign {
            return false;
        }
    }
    sign != T::zero()
}

pub fn bbox<T: Real>(p: &[Point<T>]) -> (T, T, T, T) {
    let mut x0 = T::infinity();
    let mut y0 = T::infinity();
    let mut x1 = T::neg_infinity();
    let mut y1 = T::neg_infinity();
    for q in p {
        x0 = x0.min(q.x);
        y0 = y0.min(q.y);
        x1 = x1.max(q.x);
        y1 = y1.max(q.y);
    }
    (x0, y0, x1, y1)
}

fn bbox_diag<T: Real>(p: &[Point<T>]) -> T {
    let (x0, y0, x1, y1) = bbox(p);
    ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
}

pub fn rotate<T: Real>(p: &[Point<T>], theta: T) -> Vec<Point<T>> {
    let (s, c) = theta.sin_cos();
    p.iter().map(|q| Point::new(c * q.x - s * q.y, s * q.x + c * q.y)).collect()
}

/// Side of the largest axis-parallel square inside a convex polygon.
pub fn max_inscribed_square<T: Real>(p: &[Point<T>]) -> T {
    let p = ccw(p);
    let (x0, y0, x1, y1) = bbox(&p);
    let mut lo = T::zero();
    let mut hi = (x1 - x0).min(y1 - y0);
    let fits = |s: T| {
        let mut v = p.clone();
        for (dx, dy) in [(s, T::zero()), (T::zero(), s), (s, s)] {
            let shifted: Vec<_> = p.iter().map(|q| Point::new(q.x - dx, q.y - dy)).collect();
            v = clip_convex(&v, &shifted);
            if v.is_empty() {
                return false;
            }
        }
        true
    };
    for _ in 0..80 {
        let mid = (lo + hi) * T::half();
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Fatness of a convex polygon: least ratio between a containing and a
/// contained square sharing an orientation. Orientations are sampled, with
/// 0 and 45 degrees always included.
pub fn convex_fatness<T: Real>(p: &[Point<T>]) -> T {
    let quarter = T::c(std::f64::consts::FRAC_PI_2);
    let steps = 36;
    let mut best = T::infinity();
    for k in 0..steps {
        let theta = quarter * T::c(k as f64 / steps as f64);
        let r = rotate(p, -theta);
        let (x0, y0, x1, y1) = bbox(&r);
        let outer = (x1 - x0).max(y1 - y0);
        let inner = max_inscribed_square(&r);
        if inner > T::zero() {
            best = best.min(outer / inner);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point<f64>> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn triangle_area_and_clip() {
        let t = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!((area(&t) - 0.5).abs() < 1e-15);
        let c = clip_box(&t, 0.0, 0.0, 0.5, 0.5);
        assert!((area(&c) - 0.25).abs() < 1e-15);
        let c = clip_box(&t, 0.5, 0.0, f64::INFINITY, f64::INFINITY);
        assert!((area(&c) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn inscribed_square_of_rait() {
        let t = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!((max_inscribed_square(&t) - 0.5).abs() < 1e-9);
        // a RAIT is exactly 2-fat
        assert!((convex_fatness(&t) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn square_is_one_fat() {
        let s = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
        assert!((convex_fatness(&s) - 1.0).abs() < 1e-6);
        assert!(is_convex(&s, 1e-12));
    }
}
