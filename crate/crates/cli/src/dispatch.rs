//! Procedure table. Each entry names the summary-table row it implements so
//! validation errors can point at it.

use fairsquare::geometry::{CakeBase, CakeDomain};
use fairsquare::protocols::*;

pub type Run = fn(&[Agent], &CakeDomain<f64>) -> fairsquare::Result<Division>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Bounded rectangle or square with the given wall count.
    Walls(usize),
    /// Staircase, quarter-plane, half-plane or plane, by wall count.
    Open(usize),
    /// Right-angled isosceles triangle.
    Triangle,
    /// Union of grid cells.
    Grid,
}

impl Shape {
    pub fn of(cake: &CakeDomain<f64>) -> Shape {
        match &cake.base {
            CakeBase::Rect(r) if r.is_bounded() => Shape::Walls(cake.walls.count()),
            CakeBase::Rect(_) => Shape::Open(cake.walls.count()),
            CakeBase::Staircase(_) => Shape::Open(2),
            CakeBase::Polygon(_) => Shape::Triangle,
            CakeBase::GridRegion { .. } => Shape::Grid,
        }
    }

    pub fn walls(&self) -> usize {
        match self {
            Shape::Walls(k) | Shape::Open(k) => *k,
            Shape::Triangle | Shape::Grid => 4,
        }
    }
}

#[derive(Debug)]
pub struct Procedure {
    pub name: &'static str,
    pub run: Run,
    pub family: PieceFamily,
    /// Row of the summary table consulted for this procedure.
    pub row: &'static str,
    pub fits: fn(Shape) -> bool,
}

fn row_for(walls: usize) -> &'static str {
    match walls {
        4 => "4 walls (square)",
        3 => "3 walls",
        2 => "2 walls (quarter-plane)",
        1 => "1 wall (half-plane)",
        _ => "0 walls (plane)",
    }
}

pub const PROCEDURES: &[Procedure] = &[
    Procedure { name: "four-walls", run: divide_four_walls, family: PieceFamily::Squares, row: "4 walls (square)", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "four-quarters", run: four_quarters, family: PieceFamily::Squares, row: "4 walls (square)", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "square-two", run: divide_square_two, family: PieceFamily::Squares, row: "4 walls (square)", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "three-walls", run: divide_three_walls, family: PieceFamily::Squares, row: "3 walls", fits: |s| s == Shape::Walls(3) },
    Procedure { name: "same", run: same_divide, family: PieceFamily::Squares, row: "4 walls (square) / 3 walls, same", fits: |s| matches!(s, Shape::Walls(3) | Shape::Walls(4)) },
    Procedure { name: "ratio", run: ratio_divide, family: PieceFamily::Squares, row: "4 walls (square)", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "staircase", run: staircase_divide, family: PieceFamily::Squares, row: "2 walls (quarter-plane)", fits: |s| s == Shape::Open(2) },
    Procedure { name: "half-plane", run: half_plane_divide, family: PieceFamily::Squares, row: "1 wall (half-plane)", fits: |s| s == Shape::Open(1) },
    Procedure { name: "plane", run: plane_divide, family: PieceFamily::Squares, row: "0 walls (plane)", fits: |s| s == Shape::Open(0) },
    Procedure { name: "fat-rects", run: fatrect_divide, family: PieceFamily::FatRects, row: "4 walls (square), fat rectangles", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "pairs", run: pairs_divide, family: PieceFamily::SquarePairs, row: "4 walls (square), square pairs", fits: |s| s == Shape::Walls(4) },
    Procedure { name: "ffdp", run: ffdp_divide, family: PieceFamily::Ffdp, row: "4 walls (square), fat polygons", fits: |s| matches!(s, Shape::Walls(4) | Shape::Triangle) },
    Procedure { name: "greedy-compact", run: greedy_compact_divide, family: PieceFamily::Squares, row: "compact cake, parallel squares", fits: |s| matches!(s, Shape::Walls(4) | Shape::Grid) },
    Procedure { name: "greedy-same", run: greedy_same_divide, family: PieceFamily::Squares, row: "compact cake, parallel squares, same", fits: |s| matches!(s, Shape::Walls(4) | Shape::Grid) },
];

pub fn by_name(name: &str) -> Option<&'static Procedure> {
    PROCEDURES.iter().find(|p| p.name == name)
}

/// `auto` selection: wall count decides for squares; compact irregular cakes go greedy.
pub fn auto(shape: Shape, family: PieceFamily) -> Result<&'static Procedure, String> {
    let name = match (family, shape) {
        (PieceFamily::Squares, Shape::Grid) => "greedy-compact",
        (PieceFamily::Squares, Shape::Triangle) => return Err(no_row(shape, family, "auto")),
        (PieceFamily::Squares, Shape::Walls(k) | Shape::Open(k)) => match k {
            4 => "four-walls",
            3 => "three-walls",
            2 => "staircase",
            1 => "half-plane",
            _ => "plane",
        },
        (PieceFamily::FatRects, Shape::Walls(4)) => "fat-rects",
        (PieceFamily::SquarePairs, Shape::Walls(4)) => "pairs",
        (PieceFamily::Ffdp, Shape::Walls(4) | Shape::Triangle) => "ffdp",
        _ => return Err(no_row(shape, family, "auto")),
    };
    Ok(by_name(name).expect("table entry"))
}

fn describe(shape: Shape) -> String {
    match shape {
        Shape::Walls(k) => format!("a bounded rectangle with {} walls", k),
        Shape::Open(2) => "a staircase or quarter-plane".into(),
        Shape::Open(k) => format!("an unbounded cake with {} walls", k),
        Shape::Triangle => "a triangle".into(),
        Shape::Grid => "a compact grid region".into(),
    }
}

pub fn no_row(shape: Shape, family: PieceFamily, proc_name: &str) -> String {
    let row = match shape {
        Shape::Grid => "compact cake",
        Shape::Triangle => "4 walls (square), fat polygons",
        _ => row_for(shape.walls()),
    };
    let options: Vec<&str> = PROCEDURES.iter().filter(|p| (p.fits)(shape) && p.family == family).map(|p| p.name).collect();
    format!(
        "procedure '{}' with {} pieces does not fit {}; consulted row '{}'; applicable: {}",
        proc_name,
        family.name(),
        describe(shape),
        row,
        if options.is_empty() { "none".to_string() } else { options.join(", ") }
    )
}

/// Resolves a procedure name against the cake, or explains which row rules it out.
pub fn select(name: &str, shape: Shape, family: PieceFamily) -> Result<&'static Procedure, String> {
    if name == "auto" {
        return auto(shape, family);
    }
    let p = by_name(name).ok_or_else(|| {
        let names: Vec<&str> = PROCEDURES.iter().map(|p| p.name).collect();
        format!("unknown procedure '{}'; known: auto, {}", name, names.join(", "))
    })?;
    if !(p.fits)(shape) {
        return Err(format!("procedure '{}' implements row '{}' but the cake is {}", p.name, p.row, describe(shape)));
    }
    if p.family != family {
        return Err(format!("procedure '{}' implements row '{}' for {} pieces, not {}", p.name, p.row, p.family.name(), family.name()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_follows_wall_count() {
        let pick = |s| auto(s, PieceFamily::Squares).unwrap().name;
        assert_eq!(pick(Shape::Walls(4)), "four-walls");
        assert_eq!(pick(Shape::Walls(3)), "three-walls");
        assert_eq!(pick(Shape::Open(2)), "staircase");
        assert_eq!(pick(Shape::Open(1)), "half-plane");
        assert_eq!(pick(Shape::Open(0)), "plane");
        assert_eq!(pick(Shape::Grid), "greedy-compact");
        assert_eq!(auto(Shape::Triangle, PieceFamily::Ffdp).unwrap().name, "ffdp");
    }

    #[test]
    fn mismatch_names_the_row() {
        let e = select("staircase", Shape::Walls(4), PieceFamily::Squares).unwrap_err();
        assert!(e.contains("2 walls (quarter-plane)"), "{e}");
        let e = auto(Shape::Open(1), PieceFamily::Ffdp).unwrap_err();
        assert!(e.contains("1 wall (half-plane)"), "{e}");
    }
}
