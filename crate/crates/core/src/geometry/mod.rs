//! Geometric primitives: points, rectangles, squares, staircases and the
//! tagged [`Piece`] union, plus the predicates used to validate allocations.

pub mod frame;
pub mod poly;

pub use frame::Frame;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

/// Axis-parallel rectangle. Sides may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub xmin: T,
    pub ymin: T,
    pub xmax: T,
    pub ymax: T,
}

impl<T: Real> Rect<T> {
    pub fn new(xmin: T, ymin: T, xmax: T, ymax: T) -> Self {
        Rect { xmin, ymin, xmax, ymax }
    }

    pub fn unit() -> Self {
        Rect::new(T::zero(), T::zero(), T::one(), T::one())
    }

    pub fn width(&self) -> T {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> T {
        self.ymax - self.ymin
    }

    pub fn is_bounded(&self) -> bool {
        self.xmin.is_finite() && self.ymin.is_finite() && self.xmax.is_finite() && self.ymax.is_finite()
    }

    pub fn is_valid(&self) -> bool {
        !(self.xmin.is_nan() || self.ymin.is_nan() || self.xmax.is_nan() || self.ymax.is_nan())
            && self.xmin <= self.xmax
            && self.ymin <= self.ymax
    }

    pub fn area(&self) -> T {
        if self.width() <= T::zero() || self.height() <= T::zero() {
            return T::zero();
        }
        self.width() * self.height()
    }

    pub fn intersect(&self, o: &Rect<T>) -> Option<Rect<T>> {
        let r = Rect::new(
            self.xmin.max(o.xmin),
            self.ymin.max(o.ymin),
            self.xmax.min(o.xmax),
            self.ymax.min(o.ymax),
        );
        if r.xmin < r.xmax && r.ymin < r.ymax {
            Some(r)
        } else {
            None
        }
    }

    /// Containment with slack `tol` on every side.
    pub fn contains_rect(&self, o: &Rect<T>, tol: T) -> bool {
        o.xmin >= self.xmin - tol && o.ymin >= self.ymin - tol && o.xmax <= self.xmax + tol && o.ymax <= self.ymax + tol
    }

    pub fn corners(&self) -> [Point<T>; 4] {
        [
            Point::new(self.xmin, self.ymin),
            Point::new(self.xmax, self.ymin),
            Point::new(self.xmax, self.ymax),
            Point::new(self.xmin, self.ymax),
        ]
    }

    /// Smallest finite side, or one when both sides are infinite.
    pub fn scale(&self) -> T {
        let w = self.width();
        let h = self.height();
        match (w.is_finite(), h.is_finite()) {
            (true, true) => w.min(h),
            (true, false) => w,
            (false, true) => h,
            _ => T::one(),
        }
    }

    pub fn is_square(&self, tol: T) -> bool {
        let w = self.width();
        let h = self.height();
        if !w.is_finite() || !h.is_finite() {
            return w == h;
        }
        (w - h).abs() <= tol * w.max(h).max(T::min_positive_value())
    }
}

/// Axis-parallel square `[x, x+side] x [y, y+side]`. An infinite side
/// stands for the quadrant `[x,inf) x [y,inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square<T> {
    pub x: T,
    pub y: T,
    pub side: T,
}

impl<T: Real> Square<T> {
    pub fn new(x: T, y: T, side: T) -> Self {
        Square { x, y, side }
    }

    pub fn corner(&self) -> Point<T> {
        Point::new(self.x, self.y)
    }

    pub fn rect(&self) -> Rect<T> {
        Rect::new(self.x, self.y, self.x + self.side, self.y + self.side)
    }

    /// Square with a corner at `p` extending into the quadrant `(dx, dy)`.
    pub fn at_corner(p: Point<T>, dx: i8, dy: i8, side: T) -> Self {
        let x = if dx > 0 { p.x } else { p.x - side };
        let y = if dy > 0 { p.y } else { p.y - side };
        Square::new(x, y, side)
    }

    pub fn from_rect(r: &Rect<T>, tol: T) -> Option<Self> {
        if r.is_square(tol) && r.xmin.is_finite() && r.ymin.is_finite() {
            Some(Square::new(r.xmin, r.ymin, r.width().max(r.height())))
        } else {
            None
        }
    }
}

/// Rectilinear region `{(x,y) : x >= x_j and y >= y_j for some j}`, unbounded
/// toward `+x` and `+y`. Corner x strictly increases while y strictly decreases.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase<T> {
    pub corners: Vec<Point<T>>,
}

impl<T: Real> Staircase<T> {
    pub fn new(corners: Vec<Point<T>>) -> Result<Self> {
        let s = Staircase { corners };
        s.validate()?;
        Ok(s)
    }

    pub fn quarter_plane(origin: Point<T>) -> Self {
        Staircase { corners: vec![origin] }
    }

    pub fn k(&self) -> usize {
        self.corners.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.corners.is_empty() {
            return Err(Error::Shape("staircase needs at least one corner".into()));
        }
        for w in self.corners.windows(2) {
            if !(w[1].x > w[0].x && w[1].y < w[0].y) {
                return Err(Error::Shape("staircase corners must be strictly monotone".into()));
            }
        }
        if self.corners.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Shape("staircase corners must be finite".into()));
        }
        Ok(())
    }

    pub fn contains_point(&self, p: Point<T>, tol: T) -> bool {
        self.corners.iter().any(|c| p.x >= c.x - tol && p.y >= c.y - tol)
    }

    /// Bounding quadrant.
    pub fn hull(&self) -> Rect<T> {
        let first = self.corners[0];
        let last = self.corners[self.corners.len() - 1];
        Rect::new(first.x, last.y, T::infinity(), T::infinity())
    }

    /// Complement of the staircase within its bounding quadrant, as disjoint rectangles.
    pub fn holes(&self) -> Vec<Rect<T>> {
        let last = self.corners[self.corners.len() - 1];
        self.corners.windows(2).map(|w| Rect::new(w[0].x, last.y, w[1].x, w[0].y)).collect()
    }

    /// Disjoint vertical strips whose union is the staircase.
    pub fn strips(&self) -> Vec<Rect<T>> {
        let k = self.corners.len();
        (0..k)
            .map(|j| {
                let xe = if j + 1 < k { self.corners[j + 1].x } else { T::infinity() };
                Rect::new(self.corners[j].x, self.corners[j].y, xe, T::infinity())
            })
            .collect()
    }

    /// Quadrant at corner `j`; these `k` generalized squares cover the staircase.
    pub fn corner_quadrant(&self, j: usize) -> Square<T> {
        Square::new(self.corners[j].x, self.corners[j].y, T::infinity())
    }
}

/// Region that can be handed to an agent.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece<T> {
    Square(Square<T>),
    Rect(Rect<T>),
    /// `outer` minus `notch`, where `notch` shares a corner with `outer`.
    LShape { outer: Rect<T>, notch: Rect<T> },
    Staircase(Staircase<T>),
    /// Convex polygon whose edges all have angles that are multiples of 45 degrees.
    FfdPolygon(Vec<Point<T>>),
    /// Union of two equal squares; they may overlap.
    SquarePair(Square<T>, Square<T>),
    /// Rectangle with one infinite side direction pair, e.g. `y >= 0`.
    HalfPlane(Rect<T>),
    /// Rectangle with two adjacent infinite sides.
    QuarterPlane(Rect<T>),
}

/// Convex atom used by the overlap and area predicates.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom<T> {
    Rect(Rect<T>),
    Poly(Vec<Point<T>>),
}

impl<T: Real> Atom<T> {
    fn as_poly(&self) -> Option<Vec<Point<T>>> {
        match self {
            Atom::Rect(r) if r.is_bounded() => Some(r.corners().to_vec()),
            Atom::Rect(_) => None,
            Atom::Poly(p) => Some(p.clone()),
        }
    }

    pub fn area(&self) -> T {
        match self {
            Atom::Rect(r) => r.area(),
            Atom::Poly(p) => poly::area(p),
        }
    }

    pub fn bbox(&self) -> Rect<T> {
        match self {
            Atom::Rect(r) => *r,
            Atom::Poly(p) => {
                let (a, b, c, d) = poly::bbox(p);
                Rect::new(a, b, c, d)
            }
        }
    }
}

/// Intersection area of two atoms, or infinity when both are unbounded and overlap.
fn atom_overlap<T: Real>(a: &Atom<T>, b: &Atom<T>) -> T {
    match (a, b) {
        (Atom::Rect(r), Atom::Rect(s)) => r.intersect(s).map(|i| i.area()).unwrap_or(T::zero()),
        (Atom::Rect(r), other) | (other, Atom::Rect(r)) => {
            let p = other.as_poly().expect("polygon atom");
            poly::area(&poly::clip_box(&p, r.xmin, r.ymin, r.xmax, r.ymax))
        }
        (Atom::Poly(p), Atom::Poly(q)) => poly::area(&poly::clip_convex(p, q)),
    }
}

impl<T: Real> Piece<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Piece::Square(_) => "square",
            Piece::Rect(_) => "rect",
            Piece::LShape { .. } => "lshape",
            Piece::Staircase(_) => "staircase",
            Piece::FfdPolygon(_) => "ffd_polygon",
            Piece::SquarePair(..) => "square_pair",
            Piece::HalfPlane(_) => "half_plane",
            Piece::QuarterPlane(_) => "quarter_plane",
        }
    }

    pub fn square(x: T, y: T, side: T) -> Self {
        Piece::Square(Square::new(x, y, side))
    }

    pub fn rect(xmin: T, ymin: T, xmax: T, ymax: T) -> Self {
        Piece::Rect(Rect::new(xmin, ymin, xmax, ymax))
    }

    pub fn atoms(&self) -> Vec<Atom<T>> {
        match self {
            Piece::Square(s) => vec![Atom::Rect(s.rect())],
            Piece::Rect(r) | Piece::HalfPlane(r) | Piece::QuarterPlane(r) => vec![Atom::Rect(*r)],
            Piece::LShape { outer, notch } => lshape_rects(outer, notch).into_iter().map(Atom::Rect).collect(),
            Piece::Staircase(s) => s.strips().into_iter().map(Atom::Rect).collect(),
            Piece::FfdPolygon(p) => vec![Atom::Poly(p.clone())],
            Piece::SquarePair(a, b) => vec![Atom::Rect(a.rect()), Atom::Rect(b.rect())],
        }
    }

    pub fn bbox(&self) -> Rect<T> {
        let atoms = self.atoms();
        let mut r = atoms[0].bbox();
        for a in &atoms[1..] {
            let b = a.bbox();
            r = Rect::new(r.xmin.min(b.xmin), r.ymin.min(b.ymin), r.xmax.max(b.xmax), r.ymax.max(b.ymax));
        }
        r
    }

    pub fn area(&self) -> T {
        match self {
            Piece::SquarePair(a, b) => {
                let (ra, rb) = (a.rect(), b.rect());
                ra.area() + rb.area() - ra.intersect(&rb).map(|i| i.area()).unwrap_or(T::zero())
            }
            _ => self.atoms().iter().fold(T::zero(), |s, a| s + a.area()),
        }
    }

    /// Linear size used to make geometric tolerances relative.
    pub fn scale(&self) -> T {
        match self {
            Piece::Square(s) if s.side.is_finite() => s.side,
            Piece::SquarePair(a, _) if a.side.is_finite() => a.side,
            Piece::FfdPolygon(p) => {
                let (a, b, c, d) = poly::bbox(p);
                (c - a).min(d - b)
            }
            _ => self.bbox().scale(),
        }
    }

    pub fn map(&self, f: &Frame<T>) -> Piece<T> {
        match self {
            Piece::Square(s) if s.side.is_finite() => {
                let r = f.apply_rect(&s.rect());
                Piece::Square(Square::new(r.xmin, r.ymin, s.side * f.scale))
            }
            Piece::Square(s) => {
                if f.preserves_axes() {
                    let c = f.apply(s.corner());
                    Piece::Square(Square::new(c.x, c.y, T::infinity()))
                } else {
                    Piece::QuarterPlane(f.apply_rect(&s.rect()))
                }
            }
            Piece::Rect(r) => Piece::Rect(f.apply_rect(r)),
            Piece::HalfPlane(r) => Piece::HalfPlane(f.apply_rect(r)),
            Piece::QuarterPlane(r) => Piece::QuarterPlane(f.apply_rect(r)),
            Piece::LShape { outer, notch } => Piece::LShape { outer: f.apply_rect(outer), notch: f.apply_rect(notch) },
            Piece::Staircase(s) => {
                assert!(f.preserves_axes(), "staircases only map under translations and scalings");
                Piece::Staircase(Staircase { corners: s.corners.iter().map(|&p| f.apply(p)).collect() })
            }
            Piece::FfdPolygon(p) => Piece::FfdPolygon(p.iter().map(|&q| f.apply(q)).collect()),
            Piece::SquarePair(a, b) => {
                let ra = f.apply_rect(&a.rect());
                let rb = f.apply_rect(&b.rect());
                Piece::SquarePair(Square::new(ra.xmin, ra.ymin, a.side * f.scale), Square::new(rb.xmin, rb.ymin, b.side * f.scale))
            }
        }
    }

    /// Checks the variant's own shape predicate.
    pub fn validate(&self, tol: T) -> Result<()> {
        let bad = |m: &str| Err(Error::Shape(format!("{}: {}", self.kind(), m)));
        match self {
            Piece::Square(s) => {
                if !(s.side > T::zero()) || !s.x.is_finite() || !s.y.is_finite() {
                    return bad("side must be positive and corner finite");
                }
            }
            Piece::Rect(r) => {
                if !r.is_valid() || r.area() <= T::zero() {
                    return bad("degenerate");
                }
            }
            Piece::HalfPlane(r) => {
                let inf = [r.xmin, r.ymin, r.xmax, r.ymax].iter().filter(|v| v.is_infinite()).count();
                if !r.is_valid() || inf != 3 {
                    return bad("needs exactly three infinite bounds");
                }
            }
            Piece::QuarterPlane(r) => {
                let xi = r.xmin.is_infinite() as u8 + r.xmax.is_infinite() as u8;
                let yi = r.ymin.is_infinite() as u8 + r.ymax.is_infinite() as u8;
                if !r.is_valid() || xi != 1 || yi != 1 {
                    return bad("needs one infinite bound per axis");
                }
            }
            Piece::LShape { outer, notch } => {
                if !outer.is_valid() || !notch.is_valid() || !outer.contains_rect(notch, tol * outer.scale()) {
                    return bad("notch must lie in outer");
                }
                let sx = (notch.xmin - outer.xmin).abs() <= tol * outer.scale() || (notch.xmax - outer.xmax).abs() <= tol * outer.scale();
                let sy = (notch.ymin - outer.ymin).abs() <= tol * outer.scale() || (notch.ymax - outer.ymax).abs() <= tol * outer.scale();
                if !(sx && sy) {
                    return bad("notch must share a corner with outer");
                }
            }
            Piece::Staircase(s) => s.validate()?,
            Piece::FfdPolygon(p) => {
                if p.len() < 3 || !poly::is_convex(p, T::c(1e-9)) {
                    return bad("must be a convex polygon");
                }
                if !edges_at_45(p, tol) {
                    return bad("edge angles must be multiples of 45 degrees");
                }
            }
            Piece::SquarePair(a, b) => {
                if !(a.side > T::zero()) || (a.side - b.side).abs() > tol * a.side {
                    return bad("squares must have equal positive sides");
                }
            }
        }
        Ok(())
    }

    pub fn is_square(&self, tol: T) -> bool {
        match self {
            Piece::Square(_) => true,
            Piece::Rect(r) => r.is_square(tol),
            _ => false,
        }
    }
}

fn edges_at_45<T: Real>(p: &[Point<T>], tol: T) -> bool {
    let n = p.len();
    (0..n).all(|i| {
        let a = p[i];
        let b = p[(i + 1) % n];
        let dx = (b.x - a.x).abs();
        let dy = (b.y - a.y).abs();
        let len = dx.max(dy);
        len <= T::zero() || dx <= tol * len || dy <= tol * len || (dx - dy).abs() <= tol * len
    })
}

/// Two disjoint rectangles whose union is `outer` minus `notch`.
pub fn lshape_rects<T: Real>(outer: &Rect<T>, notch: &Rect<T>) -> Vec<Rect<T>> {
    let mut out = Vec::with_capacity(2);
    // full-height strip beside the notch, then the remainder of the notch's column
    let (strip, col) = if notch.xmin <= outer.xmin {
        (Rect::new(notch.xmax, outer.ymin, outer.xmax, outer.ymax), (outer.xmin, notch.xmax))
    } else {
        (Rect::new(outer.xmin, outer.ymin, notch.xmin, outer.ymax), (notch.xmin, outer.xmax))
    };
    let rest = if notch.ymin <= outer.ymin {
        Rect::new(col.0, notch.ymax, col.1, outer.ymax)
    } else {
        Rect::new(col.0, outer.ymin, col.1, notch.ymin)
    };
    for r in [strip, rest] {
        if r.area() > T::zero() {
            out.push(r);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverFamily {
    Squares,
    Rectangles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Walls {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl Walls {
    pub fn all() -> Self {
        Walls { left: true, right: true, bottom: true, top: true }
    }

    pub fn none() -> Self {
        Walls::default()
    }

    pub fn count(&self) -> usize {
        [self.left, self.right, self.bottom, self.top].iter().filter(|b| **b).count()
    }

    /// First `k` walls in the order bottom, left, top, right.
    pub fn first(k: usize) -> Self {
        Walls { bottom: k >= 1, left: k >= 2, top: k >= 3, right: k >= 4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CakeBase<T> {
    Rect(Rect<T>),
    Staircase(Staircase<T>),
    /// Union of grid cells; `mask[j][i]` is the cell `[xs[i],xs[i+1]] x [ys[j],ys[j+1]]`.
    GridRegion { xs: Vec<T>, ys: Vec<T>, mask: Vec<Vec<bool>> },
    /// Convex polygon, used for triangle cakes.
    Polygon(Vec<Point<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CakeDomain<T> {
    pub base: CakeBase<T>,
    pub walls: Walls,
}

impl<T: Real> CakeDomain<T> {
    pub fn rect(r: Rect<T>, walls: Walls) -> Self {
        CakeDomain { base: CakeBase::Rect(r), walls }
    }

    pub fn square(side: T) -> Self {
        Self::rect(Rect::new(T::zero(), T::zero(), side, side), Walls::all())
    }

    /// Region where pieces may lie: the base, extended to infinity across open sides of a rectangle.
    pub fn allowance(&self) -> Option<Rect<T>> {
        match &self.base {
            CakeBase::Rect(r) => {
                let w = self.walls;
                Some(Rect::new(
                    if w.left { r.xmin } else { T::neg_infinity() },
                    if w.bottom { r.ymin } else { T::neg_infinity() },
                    if w.right { r.xmax } else { T::infinity() },
                    if w.top { r.ymax } else { T::infinity() },
                ))
            }
            _ => None,
        }
    }

    /// Whether `p` lies inside the walls, ignoring zero-area slivers of relative size `tol`.
    pub fn allows(&self, p: &Piece<T>, tol: T) -> bool {
        let scale = p.scale().max(T::min_positive_value());
        let t = tol * scale;
        match &self.base {
            CakeBase::Rect(_) => {
                let a = self.allowance().unwrap();
                p.atoms().iter().all(|atom| a.contains_rect(&atom.bbox(), t))
            }
            CakeBase::Staircase(s) => p.atoms().iter().all(|atom| {
                let b = atom.bbox();
                s.contains_point(Point::new(b.xmin, b.ymin), t)
            }),
            CakeBase::GridRegion { xs, ys, mask } => p.atoms().iter().all(|atom| {
                let total = atom.area();
                if !total.is_finite() {
                    return false;
                }
                let mut inside = T::zero();
                for (j, row) in mask.iter().enumerate() {
                    for (i, &m) in row.iter().enumerate() {
                        if m {
                            let cell = Atom::Rect(Rect::new(xs[i], ys[j], xs[i + 1], ys[j + 1]));
                            inside = inside + atom_overlap(atom, &cell);
                        }
                    }
                }
                inside >= total - t * scale.max(total.sqrt())
            }),
            CakeBase::Polygon(poly) => p.atoms().iter().all(|atom| {
                let total = atom.area();
                match atom.as_poly() {
                    Some(ap) => poly::area(&poly::clip_convex(&ap, poly)) >= total - t * scale,
                    None => false,
                }
            }),
        }
    }
}

/// Least `R` such that the rectangle is R-fat.
pub fn fatness<T: Real>(r: &Rect<T>) -> Result<T> {
    if !r.is_bounded() {
        return Err(Error::Unbounded);
    }
    let w = r.width();
    let h = r.height();
    if !(w > T::zero() && h > T::zero()) {
        return Err(Error::Shape("degenerate rectangle".into()));
    }
    Ok(w.max(h) / w.min(h))
}

/// Fatness of any bounded piece: rectangles exactly, convex polygons by
/// sampled orientations.
pub fn piece_fatness<T: Real>(p: &Piece<T>) -> Result<T> {
    match p {
        Piece::Square(s) if s.side.is_finite() => Ok(T::one()),
        Piece::Rect(r) => fatness(r),
        Piece::FfdPolygon(v) => Ok(poly::convex_fatness(v)),
        _ => Err(Error::NoClosedForm),
    }
}

/// Closed-form cover numbers for the shapes the procedures produce.
pub fn cover_number<T: Real>(p: &Piece<T>, family: CoverFamily) -> Result<usize> {
    let tol = T::c(1e-9);
    match (p, family) {
        (Piece::Square(s), _) if s.side.is_finite() => Ok(1),
        (Piece::Rect(r), CoverFamily::Rectangles) if r.is_bounded() => Ok(1),
        (Piece::Rect(r), CoverFamily::Squares) => {
            let f = fatness(r)?;
            Ok((f - tol).ceil().to_usize().unwrap_or(usize::MAX).max(1))
        }
        (Piece::LShape { .. }, CoverFamily::Rectangles) => Ok(2),
        (Piece::LShape { outer, notch }, CoverFamily::Squares) => {
            let side = outer.width();
            let ok = outer.is_square(tol)
                && notch.is_square(tol)
                && notch.width() <= side * T::half() + tol * side
                && p.validate(tol).is_ok();
            if ok {
                Ok(3)
            } else {
                Err(Error::NoClosedForm)
            }
        }
        (Piece::Staircase(s), CoverFamily::Squares) => Ok(s.k()),
        _ => Err(Error::NoClosedForm),
    }
}

/// Cover number of a grid region: rectangles by ceiling aspect, T-shapes made
/// of a bar of two equal squares with a third equal square centred on its long side.
pub fn cover_number_region<T: Real>(base: &CakeBase<T>) -> Result<usize> {
    let tol = T::c(1e-9);
    match base {
        CakeBase::Rect(r) => cover_number(&Piece::Rect(*r), CoverFamily::Squares),
        CakeBase::Staircase(s) => Ok(s.k()),
        CakeBase::GridRegion { xs, ys, mask } => {
            let rects = grid_region_rects(xs, ys, mask);
            if rects.len() == 1 {
                return cover_number(&Piece::Rect(rects[0]), CoverFamily::Squares);
            }
            if is_tshape(&rects, tol) {
                return Ok(3);
            }
            Err(Error::NoClosedForm)
        }
        CakeBase::Polygon(_) => Err(Error::NoClosedForm),
    }
}

/// Merges the mask into maximal horizontal runs, then stacks identical runs.
pub fn grid_region_rects<T: Real>(xs: &[T], ys: &[T], mask: &[Vec<bool>]) -> Vec<Rect<T>> {
    let mut runs: Vec<Rect<T>> = Vec::new();
    for (j, row) in mask.iter().enumerate() {
        let mut i = 0;
        while i < row.len() {
            if !row[i] {
                i += 1;
                continue;
            }
            let s = i;
            while i < row.len() && row[i] {
                i += 1;
            }
            let r = Rect::new(xs[s], ys[j], xs[i], ys[j + 1]);
            if let Some(prev) = runs.iter_mut().find(|p| p.xmin == r.xmin && p.xmax == r.xmax && p.ymax == r.ymin) {
                prev.ymax = r.ymax;
            } else {
                runs.push(r);
            }
        }
    }
    runs
}

fn is_tshape<T: Real>(rects: &[Rect<T>], tol: T) -> bool {
    if rects.len() != 2 {
        return false;
    }
    let (a, b) = (rects[0], rects[1]);
    // bar below stem or stem below bar
    let (bar, stem) = if a.width() >= b.width() { (a, b) } else { (b, a) };
    let s = stem.width();
    let close = |u: T, v: T| (u - v).abs() <= tol * s;
    let stacked = close(bar.ymax, stem.ymin) || close(stem.ymax, bar.ymin);
    stacked
        && close(stem.height(), s)
        && close(bar.height(), s)
        && close(bar.width(), s + s)
        && close(stem.xmin - bar.xmin, s * T::half())
}

/// True iff all pairwise interior intersections have zero area, up to `tol`
/// relative to the smaller piece.
pub fn interior_disjoint<T: Real>(pieces: &[Piece<T>], tol: T) -> bool {
    first_overlap(pieces, tol).is_none()
}

pub fn first_overlap<T: Real>(pieces: &[Piece<T>], tol: T) -> Option<(usize, usize)> {
    let atoms: Vec<Vec<Atom<T>>> = pieces.iter().map(|p| p.atoms()).collect();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if pieces_overlap(&atoms[i], &atoms[j], pieces[i].scale().min(pieces[j].scale()), tol) {
                return Some((i, j));
            }
        }
    }
    None
}

fn pieces_overlap<T: Real>(a: &[Atom<T>], b: &[Atom<T>], scale: T, tol: T) -> bool {
    let t = tol * scale;
    for x in a {
        for y in b {
            match (x, y) {
                (Atom::Rect(r), Atom::Rect(s)) => {
                    let w = r.xmax.min(s.xmax) - r.xmin.max(s.xmin);
                    let h = r.ymax.min(s.ymax) - r.ymin.max(s.ymin);
                    if w > t && h > t {
                        return true;
                    }
                }
                _ => {
                    if atom_overlap(x, y) > t * scale {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Counts the squares in `others` that overlap `base`. All of them must be at
/// least as large as `base` and pairwise interior-disjoint. Returns whether the
/// count is at most four, with the count.
pub fn overlap_bound_check<T: Real>(base: &Square<T>, others: &[Square<T>], tol: T) -> Result<(bool, usize)> {
    if !(base.side > T::zero()) {
        return Err(Error::Precondition("base square must have positive side".into()));
    }
    if let Some(o) = others.iter().find(|o| o.side < base.side * (T::one() - tol)) {
        return Err(Error::Precondition(format!("square of side {} is smaller than base side {}", o.side, base.side)));
    }
    let ps: Vec<Piece<T>> = others.iter().map(|s| Piece::Square(*s)).collect();
    if !interior_disjoint(&ps, tol) {
        return Err(Error::Precondition("squares must be pairwise interior-disjoint".into()));
    }
    let bp = [Atom::Rect(base.rect())];
    let count = others.iter().filter(|o| pieces_overlap(&bp, &[Atom::Rect(o.rect())], base.side, tol)).count();
    Ok((count <= 4, count))
}

/// Removes `(-inf, x*+l*] x (-inf, y*+l*]` from the staircase, where the winner
/// square is anchored at one of its corners.
pub fn remove_shadow<T: Real>(c: &Staircase<T>, winner: &Square<T>, tol: T) -> Result<Staircase<T>> {
    let scale = if winner.side.is_finite() { winner.side } else { T::one() };
    let t = tol * scale.max(T::min_positive_value());
    let anchored = c.corners.iter().any(|p| (p.x - winner.x).abs() <= t && (p.y - winner.y).abs() <= t);
    if !anchored {
        return Err(Error::Precondition("winner square is not anchored at a staircase corner".into()));
    }
    let xs = winner.x + winner.side;
    let ys = winner.y + winner.side;
    if !xs.is_finite() {
        return Err(Error::Precondition("an infinite winner leaves no staircase".into()));
    }
    let mut cand: Vec<Point<T>> = Vec::new();
    for p in &c.corners {
        if p.x <= xs && p.y <= ys {
            cand.push(Point::new(xs, p.y));
            cand.push(Point::new(p.x, ys));
        } else {
            cand.push(*p);
        }
    }
    // keep the Pareto-minimal corners
    cand.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    let mut out: Vec<Point<T>> = Vec::new();
    for p in cand {
        if let Some(last) = out.last() {
            if p.y >= last.y {
                continue;
            }
            if p.x == last.x {
                out.pop();
            }
        }
        out.push(p);
    }
    Staircase::new(out)
}

/// Multiplies one coordinate axis by `factor`.
pub fn scale_axis<T: Real>(p: &Piece<T>, axis: Axis, factor: T) -> Result<Piece<T>> {
    if !(factor > T::zero()) || !factor.is_finite() {
        return Err(Error::Precondition("scale factor must be finite and positive".into()));
    }
    let sp = |q: Point<T>| match axis {
        Axis::X => Point::new(q.x * factor, q.y),
        Axis::Y => Point::new(q.x, q.y * factor),
    };
    let sr = |r: &Rect<T>| {
        let a = sp(Point::new(r.xmin, r.ymin));
        let b = sp(Point::new(r.xmax, r.ymax));
        Rect::new(a.x, a.y, b.x, b.y)
    };
    Ok(match p {
        Piece::Square(s) => {
            if factor == T::one() {
                p.clone()
            } else {
                Piece::Rect(sr(&s.rect()))
            }
        }
        Piece::Rect(r) => Piece::Rect(sr(r)),
        Piece::HalfPlane(r) => Piece::HalfPlane(sr(r)),
        Piece::QuarterPlane(r) => Piece::QuarterPlane(sr(r)),
        Piece::LShape { outer, notch } => Piece::LShape { outer: sr(outer), notch: sr(notch) },
        Piece::Staircase(s) => Piece::Staircase(Staircase { corners: s.corners.iter().map(|&q| sp(q)).collect() }),
        Piece::FfdPolygon(v) => Piece::FfdPolygon(v.iter().map(|&q| sp(q)).collect()),
        Piece::SquarePair(..) => {
            if factor == T::one() {
                p.clone()
            } else {
                return Err(Error::Unsupported("scaled square pairs are not square pairs".into()));
            }
        }
    })
}

/// Scales a rectangular or staircase domain along one axis.
pub fn scale_domain_axis<T: Real>(d: &CakeDomain<T>, axis: Axis, factor: T) -> Result<CakeDomain<T>> {
    let base = match &d.base {
        CakeBase::Rect(r) => match scale_axis(&Piece::Rect(*r), axis, factor)? {
            Piece::Rect(r) => CakeBase::Rect(r),
            _ => unreachable!(),
        },
        CakeBase::Staircase(s) => match scale_axis(&Piece::Staircase(s.clone()), axis, factor)? {
            Piece::Staircase(s) => CakeBase::Staircase(s),
            _ => unreachable!(),
        },
        CakeBase::GridRegion { xs, ys, mask } => {
            let (mut xs, mut ys) = (xs.clone(), ys.clone());
            match axis {
                Axis::X => xs.iter_mut().for_each(|v| *v = *v * factor),
                Axis::Y => ys.iter_mut().for_each(|v| *v = *v * factor),
            }
            CakeBase::GridRegion { xs, ys, mask: mask.clone() }
        }
        CakeBase::Polygon(v) => match scale_axis(&Piece::FfdPolygon(v.clone()), axis, factor)? {
            Piece::FfdPolygon(v) => CakeBase::Polygon(v),
            _ => unreachable!(),
        },
    };
    Ok(CakeDomain { base, walls: d.walls })
}
