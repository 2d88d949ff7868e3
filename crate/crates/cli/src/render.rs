//! Deterministic SVG drawing of a division: walls solid, open sides dotted,
//! one fill color per agent and a legend with the fractions.

use std::fmt::Write;

use fairsquare::geometry::{poly, Atom, CakeBase, CakeDomain, Piece, Point, Rect};
use fairsquare::protocols::AgentResult;

const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];
const WIDTH: f64 = 600.0;
const PAD: f64 = 20.0;
const LINE: f64 = 18.0;

struct View {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    k: f64,
}

impl View {
    fn px(&self, p: Point<f64>) -> (f64, f64) {
        (PAD + (p.x - self.x0) * self.k, PAD + (self.y1 - p.y) * self.k)
    }

    fn rect(&self) -> Rect<f64> {
        Rect::new(self.x0, self.y0, self.x1, self.y1)
    }

    fn clamp(&self, p: Point<f64>) -> Point<f64> {
        Point::new(p.x.clamp(self.x0, self.x1), p.y.clamp(self.y0, self.y1))
    }
}

fn finite_coords(cake: &CakeDomain<f64>, pieces: &[&Piece<f64>]) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rect = |r: &Rect<f64>| {
        xs.extend([r.xmin, r.xmax]);
        ys.extend([r.ymin, r.ymax]);
    };
    match &cake.base {
        CakeBase::Rect(r) => rect(r),
        CakeBase::Staircase(s) => s.corners.iter().for_each(|c| rect(&Rect::new(c.x, c.y, c.x, c.y))),
        CakeBase::GridRegion { xs: gx, ys: gy, .. } => rect(&Rect::new(gx[0], gy[0], gx[gx.len() - 1], gy[gy.len() - 1])),
        CakeBase::Polygon(p) => p.iter().for_each(|c| rect(&Rect::new(c.x, c.y, c.x, c.y))),
    }
    for p in pieces {
        for a in p.atoms() {
            rect(&a.bbox());
        }
    }
    xs.retain(|v| v.is_finite());
    ys.retain(|v| v.is_finite());
    (xs, ys)
}

fn view(cake: &CakeDomain<f64>, pieces: &[&Piece<f64>]) -> View {
    let (xs, ys) = finite_coords(cake, pieces);
    let span = |v: &[f64]| match (v.iter().cloned().reduce(f64::min), v.iter().cloned().reduce(f64::max)) {
        (Some(a), Some(b)) => (a, b),
        _ => (0.0, 1.0),
    };
    let (mut x0, mut x1) = span(&xs);
    let (mut y0, mut y1) = span(&ys);
    let m = 0.1 * (x1 - x0).max(y1 - y0).max(1e-9);
    x0 -= m;
    x1 += m;
    y0 -= m;
    y1 += m;
    View { x0, y0, x1, y1, k: (WIDTH - 2.0 * PAD) / (x1 - x0) }
}

fn f(v: f64) -> String {
    let s = format!("{:.3}", v);
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn line(out: &mut String, v: &View, a: Point<f64>, b: Point<f64>, wall: bool) {
    let (ax, ay) = v.px(v.clamp(a));
    let (bx, by) = v.px(v.clamp(b));
    let style = if wall { "stroke=\"#1f3a93\" stroke-width=\"2\"" } else { "stroke=\"#8c6d46\" stroke-width=\"1.5\" stroke-dasharray=\"2,4\"" };
    let _ = writeln!(out, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>", f(ax), f(ay), f(bx), f(by), style);
}

fn outline(out: &mut String, v: &View, cake: &CakeDomain<f64>) {
    let p = Point::new;
    match &cake.base {
        CakeBase::Rect(r) => {
            let w = cake.walls;
            if r.xmin.is_finite() {
                line(out, v, p(r.xmin, r.ymin), p(r.xmin, r.ymax), w.left);
            }
            if r.xmax.is_finite() {
                line(out, v, p(r.xmax, r.ymin), p(r.xmax, r.ymax), w.right);
            }
            if r.ymin.is_finite() {
                line(out, v, p(r.xmin, r.ymin), p(r.xmax, r.ymin), w.bottom);
            }
            if r.ymax.is_finite() {
                line(out, v, p(r.xmin, r.ymax), p(r.xmax, r.ymax), w.top);
            }
        }
        CakeBase::Staircase(s) => {
            let c = &s.corners;
            line(out, v, p(c[0].x, f64::INFINITY), c[0], true);
            for w in c.windows(2) {
                line(out, v, w[0], p(w[1].x, w[0].y), true);
                line(out, v, p(w[1].x, w[0].y), w[1], true);
            }
            line(out, v, c[c.len() - 1], p(f64::INFINITY, c[c.len() - 1].y), true);
        }
        CakeBase::GridRegion { xs, ys, mask } => {
            let inside = |i: isize, j: isize| {
                i >= 0 && j >= 0 && (j as usize) < mask.len() && (i as usize) < mask[0].len() && mask[j as usize][i as usize]
            };
            for j in 0..mask.len() as isize {
                for i in 0..mask[0].len() as isize {
                    if !inside(i, j) {
                        continue;
                    }
                    let (x0, x1, y0, y1) = (xs[i as usize], xs[i as usize + 1], ys[j as usize], ys[j as usize + 1]);
                    if !inside(i - 1, j) {
                        line(out, v, p(x0, y0), p(x0, y1), true);
                    }
                    if !inside(i + 1, j) {
                        line(out, v, p(x1, y0), p(x1, y1), true);
                    }
                    if !inside(i, j - 1) {
                        line(out, v, p(x0, y0), p(x1, y0), true);
                    }
                    if !inside(i, j + 1) {
                        line(out, v, p(x0, y1), p(x1, y1), true);
                    }
                }
            }
        }
        CakeBase::Polygon(poly) => {
            for k in 0..poly.len() {
                line(out, v, poly[k], poly[(k + 1) % poly.len()], true);
            }
        }
    }
}

fn polygon(out: &mut String, v: &View, pts: &[Point<f64>], color: &str) {
    let s: Vec<String> = pts
        .iter()
        .map(|q| {
            let (x, y) = v.px(*q);
            format!("{},{}", f(x), f(y))
        })
        .collect();
    let _ = writeln!(out, "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.6\" stroke=\"{}\" stroke-width=\"1\"/>", s.join(" "), color, color);
}

fn piece(out: &mut String, v: &View, p: &Piece<f64>, color: &str) {
    for a in p.atoms() {
        match a {
            Atom::Rect(r) => {
                if let Some(c) = r.intersect(&v.rect()) {
                    polygon(out, v, &c.corners(), color);
                }
            }
            Atom::Poly(pts) => {
                let clipped = poly::clip_box(&pts, v.x0, v.y0, v.x1, v.y1);
                if clipped.len() >= 3 {
                    polygon(out, v, &clipped, color);
                }
            }
        }
    }
}

/// SVG for the given results; identical inputs give identical bytes.
pub fn render_svg(results: &[AgentResult], cake: &CakeDomain<f64>, title: &str) -> String {
    let pieces: Vec<&Piece<f64>> = results.iter().map(|r| &r.piece).collect();
    let v = view(cake, &pieces);
    let h = 2.0 * PAD + (v.y1 - v.y0) * v.k;
    let total_h = h + LINE * (results.len() as f64 + 1.0) + PAD;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        f(WIDTH),
        f(total_h),
        f(WIDTH),
        f(total_h)
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", f(WIDTH), f(total_h));
    for (i, r) in results.iter().enumerate() {
        piece(&mut out, &v, &r.piece, PALETTE[i % PALETTE.len()]);
    }
    outline(&mut out, &v, cake);
    let text = |out: &mut String, y: f64, s: &str| {
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">{}</text>", f(PAD), f(y), s);
    };
    text(&mut out, h + LINE, &escape(title));
    for (i, r) in results.iter().enumerate() {
        let y = h + LINE * (i as f64 + 2.0);
        let _ = writeln!(out, "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>", f(PAD), f(y - 11.0), PALETTE[i % PALETTE.len()]);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">agent {}: {} fraction {:.6}</text>",
            f(PAD + 18.0),
            f(y),
            r.agent,
            r.piece.kind(),
            r.fraction
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use fairsquare::geometry::{Staircase, Walls};

    fn result(agent: usize, p: Piece<f64>) -> AgentResult {
        AgentResult { agent, piece: p, value: 1.0, total: 4.0, fraction: 0.25 }
    }

    #[test]
    fn two_squares_deterministic() {
        let cake = CakeDomain::square(1.0);
        let rs = vec![result(0, Piece::square(0.0, 0.0, 0.5)), result(1, Piece::square(0.5, 0.5, 0.5))];
        let a = render_svg(&rs, &cake, "four-walls");
        assert_eq!(a, render_svg(&rs, &cake, "four-walls"));
        assert_eq!(a.matches("<polygon").count(), 2);
        assert_eq!(a.matches("stroke-dasharray").count(), 0);
    }

    #[test]
    fn open_sides_dotted_and_empty_allocation() {
        let cake = CakeDomain::rect(Rect::unit(), Walls::first(3));
        let svg = render_svg(&[], &cake, "empty");
        assert_eq!(svg.matches("<polygon").count(), 0);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg.matches("<line").count(), 4);
    }

    #[test]
    fn staircase_outline() {
        let st = Staircase::new(vec![Point::new(0.0, 1.0), Point::new(1.0, 0.0)]).unwrap();
        let cake = CakeDomain { base: CakeBase::Staircase(st), walls: Walls { left: true, bottom: true, ..Walls::none() } };
        let rs = vec![result(0, Piece::square(0.0, 1.0, 1.0)), result(1, Piece::square(1.0, 0.0, 1.0))];
        let svg = render_svg(&rs, &cake, "staircase");
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg.matches("<polygon").count(), 2);
    }
}
