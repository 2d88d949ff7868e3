#![allow(dead_code)]

use fairsquare::geometry::{Point, Rect};
use fairsquare::measure::{Family, GridDensity, Region};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random grid over `r` with `nx` x `ny` cells; roughly `zero_frac` of the cells are empty.
pub fn random_density(g: &mut ChaCha8Rng, r: &Rect<f64>, nx: usize, ny: usize, zero_frac: f64) -> GridDensity<f64> {
    let cuts = |g: &mut ChaCha8Rng, lo: f64, hi: f64, n: usize| {
        let mut v: Vec<f64> = (0..n - 1).map(|_| g.gen_range(lo..hi)).collect();
        v.push(lo);
        v.push(hi);
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-6 * (hi - lo));
        v
    };
    let xs = cuts(g, r.xmin, r.xmax, nx);
    let ys = cuts(g, r.ymin, r.ymax, ny);
    let mut cells: Vec<Vec<f64>> = (0..ys.len() - 1)
        .map(|_| (0..xs.len() - 1).map(|_| if g.gen_bool(zero_frac) { 0.0 } else { g.gen_range(0.0..10.0) }).collect())
        .collect();
    if cells.iter().flatten().all(|v| *v == 0.0) {
        cells[0][0] = 1.0;
    }
    GridDensity::new(xs, ys, cells).unwrap()
}

/// Independent integral: per-cell overlap area times density.
pub fn brute_rect_value(d: &GridDensity<f64>, r: &Rect<f64>) -> f64 {
    let mut s = 0.0;
    for j in 0..d.ys().len() - 1 {
        for i in 0..d.xs().len() - 1 {
            let c = d.cell_rect(i, j);
            let w = r.xmax.min(c.xmax) - r.xmin.max(c.xmin);
            let h = r.ymax.min(c.ymax) - r.ymin.max(c.ymin);
            if w > 0.0 && h > 0.0 {
                s += w * h * d.cells()[j][i];
            }
        }
    }
    s
}

/// Smallest parameter reaching `v`, by bisection to `1e-12`; `None` when unreachable.
pub fn bisect_mark(d: &GridDensity<f64>, fam: &Family<f64>, v: f64) -> Option<f64> {
    let (lo, mut hi) = fam.range();
    let f = |t: f64| fam.value(d, t);
    if f(lo) >= v {
        return Some(lo);
    }
    if !hi.is_finite() {
        hi = 1.0;
        while f(hi) < v && hi < 1e12 {
            hi *= 2.0;
        }
    }
    if f(hi) < v - 1e-10 * v.max(1.0) {
        return None;
    }
    let mut a = lo;
    let mut b = hi;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if f(m) >= v {
            b = m;
        } else {
            a = m;
        }
    }
    Some(b)
}

/// Grid search over square positions and sides at resolution `step`.
pub fn brute_best_square(d: &GridDensity<f64>, region: &Region<f64>, step: f64) -> f64 {
    let b = region.base;
    let n = ((b.width().min(1e6)) / step).ceil() as usize;
    let m = ((b.height().min(1e6)) / step).ceil() as usize;
    let mut best = 0.0f64;
    for i in 0..=n {
        for j in 0..=m {
            let p = Point::new(b.xmin + i as f64 * step, b.ymin + j as f64 * step);
            let s = region.max_side(p, 1, 1);
            if s > 0.0 {
                let s = s.min(1e6);
                best = best.max(d.rect_value(&Rect::new(p.x, p.y, p.x + s, p.y + s)));
            }
        }
    }
    best
}
