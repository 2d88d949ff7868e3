//! Water-pool instances that cap what any square allocation can achieve, and a
//! randomized search for allocations that would beat those caps.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{CakeDomain, Point, Rect, Square, Walls};
use crate::measure::{GridDensity, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolKind {
    QuarterPlane,
    Square4Walls,
    HalfPlane,
}

impl PoolKind {
    pub fn name(&self) -> &'static str {
        match self {
            PoolKind::QuarterPlane => "quarter-plane",
            PoolKind::Square4Walls => "square-4-walls",
            PoolKind::HalfPlane => "half-plane",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quarter-plane" => Ok(PoolKind::QuarterPlane),
            "square-4-walls" | "square" => Ok(PoolKind::Square4Walls),
            "half-plane" => Ok(PoolKind::HalfPlane),
            _ => Err(Error::Unsupported(format!("pool arrangement kind '{}'", s))),
        }
    }
}

/// Equal-valued square pools of uniform density.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolArrangement {
    pub kind: PoolKind,
    pub n: usize,
    pub eps: f64,
    pub pools: Vec<Square<f64>>,
    /// Scale applied to the inner arrangement at each nesting level, outermost first.
    pub deflation: Vec<f64>,
}

impl PoolArrangement {
    pub fn value_per_pool(&self) -> f64 {
        1.0 / self.pools.len() as f64
    }

    /// Largest min-fraction any allocation of squares can reach on this instance.
    pub fn bound(&self) -> f64 {
        self.value_per_pool()
    }

    pub fn density(&self) -> Result<GridDensity<f64>> {
        let v = self.value_per_pool();
        GridDensity::from_blocks(&self.pools.iter().map(|p| (p.rect(), v)).collect::<Vec<_>>())
    }

    pub fn cake(&self) -> CakeDomain<f64> {
        let inf = f64::INFINITY;
        match self.kind {
            PoolKind::QuarterPlane => {
                CakeDomain::rect(Rect::new(0.0, 0.0, inf, inf), Walls { left: true, bottom: true, ..Walls::none() })
            }
            PoolKind::Square4Walls => CakeDomain::square(10.0 + self.eps),
            PoolKind::HalfPlane => CakeDomain::rect(Rect::new(-inf, 0.0, inf, inf), Walls { bottom: true, ..Walls::none() }),
        }
    }
}

fn deflate(pools: &[Square<f64>], delta: f64) -> Vec<Square<f64>> {
    pools.iter().map(|p| Square::new(p.x * delta, p.y * delta, p.side * delta)).collect()
}

fn pool(x: f64, y: f64, eps: f64) -> Square<f64> {
    Square::new(x, y, eps)
}

/// Pools of the nested arrangement with `levels` rings around the origin pool.
fn nest(levels: usize, eps: f64, ring: &[(f64, f64)], deflation: &mut Vec<f64>) -> Vec<Square<f64>> {
    let mut pools = vec![pool(0.0, 0.0, eps)];
    for level in 0..levels {
        if level > 0 {
            pools = deflate(&pools, eps / 20.0);
            deflation.push(eps / 20.0);
        }
        pools.extend(ring.iter().map(|&(x, y)| pool(x, y, eps)));
    }
    deflation.reverse();
    pools
}

/// Pools for `n` agents: `2n-1` on the quarter-plane, `2n` on the walled
/// square of side `10+eps`, and `1.5m-0.5` on the half-plane where `m` is
/// `n` rounded down to an odd number.
pub fn gen_pools(kind: PoolKind, n: usize, eps: f64) -> Result<PoolArrangement> {
    if n < 2 {
        return Err(Error::Precondition(format!("pool arrangements need at least 2 agents, got {}", n)));
    }
    if !(eps > 0.0 && eps <= 0.01) {
        return Err(Error::Precondition(format!("pool side must lie in (0, 0.01], got {}", eps)));
    }
    let mut deflation = Vec::new();
    let pools = match kind {
        PoolKind::QuarterPlane => nest(n - 1, eps, &[(10.0, 0.0), (0.0, 10.0)], &mut deflation),
        PoolKind::Square4Walls => {
            let mut core = nest(n - 2, eps, &[(10.0, 0.0), (0.0, 10.0)], &mut deflation);
            if n > 2 {
                core = deflate(&core, eps / 20.0);
                deflation.insert(0, eps / 20.0);
            }
            core.extend([pool(10.0, 0.0, eps), pool(0.0, 10.0, eps), pool(10.0, 10.0, eps)]);
            core
        }
        PoolKind::HalfPlane => {
            let m = if n % 2 == 1 { n } else { n - 1 };
            nest((m - 1) / 2, eps, &[(5.0, 0.0), (0.0, 10.0), (-5.0, 0.0)], &mut deflation)
        }
    };
    Ok(PoolArrangement { kind, n, eps, pools, deflation })
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    rect: Rect<f64>,
    side: f64,
    value: f64,
}

fn overlaps(a: &Rect<f64>, b: &Rect<f64>, a_side: f64, b_side: f64) -> bool {
    let w = a.xmax.min(b.xmax) - a.xmin.max(b.xmin);
    let h = a.ymax.min(b.ymax) - a.ymin.max(b.ymin);
    let tol = 1e-9 * a_side.min(b_side);
    w > tol && h > tol
}

/// Squares with a corner on the density lattice whose sides reach a lattice
/// line, keeping only sizes where the value grows.
fn candidates(d: &GridDensity<f64>, region: &Region<f64>) -> Vec<Cand> {
    let (xs, ys) = region.lattice(d);
    let mut out = Vec::new();
    for &x in &xs {
        for &y in &ys {
            for (dx, dy) in [(1i8, 1i8), (-1, 1), (1, -1), (-1, -1)] {
                let p = Point::new(x, y);
                let max = region.max_side(p, dx, dy);
                if !(max > 0.0) {
                    continue;
                }
                let mut sides: Vec<f64> = xs
                    .iter()
                    .map(|&u| (u - x) * dx as f64)
                    .chain(ys.iter().map(|&v| (v - y) * dy as f64))
                    .filter(|s| *s > 0.0 && *s <= max)
                    .collect();
                if max.is_finite() {
                    sides.push(max);
                }
                sides.sort_by(|a, b| a.partial_cmp(b).unwrap());
                sides.dedup();
                let mut last = 0.0;
                for s in sides {
                    let sq = Square::at_corner(p, dx, dy, s);
                    let v = d.rect_value(&sq.rect());
                    if v > last * (1.0 + 1e-12) {
                        out.push(Cand { rect: sq.rect(), side: s, value: v });
                        last = v;
                    }
                }
            }
        }
    }
    out
}

/// Randomized greedy search for a square allocation to `n` agents sharing
/// the density `d`; returns the best min-fraction seen over all trials.
///
/// Each trial gives agents squares one at a time, either the smallest free
/// square reaching a randomly drawn value level or a random near-best free
/// square. This is sample-based evidence, not an exact optimum.
pub fn probe_upper_bound(d: &GridDensity<f64>, cake: &CakeDomain<f64>, n: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 || n == 0 {
        return Err(Error::Precondition("probe needs at least one trial and one agent".into()));
    }
    let total = d.total();
    if !(total > 0.0) {
        return Err(Error::Density("probe needs a density with positive total".into()));
    }
    let region = Region::from_domain(cake)?;
    let cands = candidates(d, &region);
    let mut levels: Vec<f64> = cands.iter().map(|c| c.value).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..trials {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let by_level = rng.gen_bool(0.6);
        let target = *levels.choose(&mut rng).unwrap_or(&0.0);
        let slack: f64 = rng.gen_range(0.0..0.3);
        let mut taken: Vec<Cand> = Vec::with_capacity(n);
        let mut worst = f64::INFINITY;
        for _ in &order {
            let free: Vec<&Cand> =
                cands.iter().filter(|c| taken.iter().all(|t| !overlaps(&c.rect, &t.rect, c.side, t.side))).collect();
            let Some(top) = free.iter().map(|c| c.value).reduce(f64::max) else {
                worst = 0.0;
                break;
            };
            let pick = if by_level && top >= target {
                let ok: Vec<&&Cand> = free.iter().filter(|c| c.value >= target * (1.0 - 1e-12)).collect();
                let small = ok.iter().map(|c| c.side).fold(f64::INFINITY, f64::min);
                let tied: Vec<&&Cand> = ok.into_iter().filter(|c| c.side <= small * (1.0 + 1e-12)).collect();
                **tied.choose(&mut rng).unwrap()
            } else {
                let ok: Vec<&&Cand> = free.iter().filter(|c| c.value >= top * (1.0 - slack)).collect();
                **ok.choose(&mut rng).unwrap()
            };
            worst = worst.min(pick.value / total);
            taken.push(*pick);
        }
        best = best.max(worst);
    }
    Ok(best)
}
