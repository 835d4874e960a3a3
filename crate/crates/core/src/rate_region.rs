//! Two-user rate polytopes and their convex hulls.

/// Absolute tolerance for merging duplicate points.
pub const DEDUP_TOL: f64 = 1e-12;
/// Feasibility slack when testing candidate vertices.
pub const FEAS_TOL: f64 = 1e-9;

pub type Point = (f64, f64);

/// `a·R1 + b·R2 ≤ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Constraint {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    fn slack(&self, (x, y): Point) -> f64 {
        self.c - self.a * x - self.b * y
    }
}

/// Intersection of half-planes with the non-negative quadrant.
///
/// Constraints with `c = +∞` are inactive; a negative `c` leaves only the
/// origin (treated as an empty stream).
#[derive(Debug, Clone, PartialEq)]
pub struct RatePolytope {
    constraints: Vec<Constraint>,
}

impl RatePolytope {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        Self { constraints }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_feasible(&self, p: Point, tol: f64) -> bool {
        p.0 >= -tol
            && p.1 >= -tol
            && self
                .constraints
                .iter()
                .all(|k| k.c == f64::INFINITY || k.slack(p) >= -tol * (1.0 + k.c.abs()))
    }

    /// Vertices in counterclockwise order starting at the origin.
    ///
    /// Candidates are the origin, the axis intercepts and all pairwise
    /// intersections of constraint lines (including the axes); those
    /// satisfying every constraint are kept and reduced to their hull.
    pub fn vertices(&self) -> Vec<Point> {
        if self.constraints.iter().any(|k| k.c < 0.0 || k.c.is_nan()) {
            return vec![(0.0, 0.0)];
        }
        let mut lines: Vec<Constraint> = self
            .constraints
            .iter()
            .copied()
            .filter(|k| k.c.is_finite() && (k.a != 0.0 || k.b != 0.0))
            .collect();
        lines.push(Constraint::new(1.0, 0.0, 0.0));
        lines.push(Constraint::new(0.0, 1.0, 0.0));

        let mut candidates = vec![(0.0, 0.0)];
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if let Some(p) = intersect(&lines[i], &lines[j]) {
                    candidates.push(p);
                }
            }
        }
        let feasible: Vec<Point> = candidates
            .into_iter()
            .filter(|&p| self.is_feasible(p, FEAS_TOL))
            .map(|(x, y)| (x.max(0.0), y.max(0.0)))
            .collect();
        convex_hull(&feasible).vertices
    }
}

/// Free-function form of [`RatePolytope::vertices`].
pub fn polytope_vertices(p: &RatePolytope) -> Vec<Point> {
    p.vertices()
}

fn intersect(p: &Constraint, q: &Constraint) -> Option<Point> {
    let det = p.a * q.b - p.b * q.a;
    if det.abs() < 1e-15 {
        return None;
    }
    let x = (p.c * q.b - p.b * q.c) / det;
    let y = (p.a * q.c - p.c * q.a) / det;
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

/// Convex polygon in the non-negative quadrant, vertices counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub vertices: Vec<Point>,
}

impl RateRegion {
    /// The trivial region `{(0, 0)}`.
    pub fn origin() -> Self {
        Self {
            vertices: vec![(0.0, 0.0)],
        }
    }

    pub fn from_points(points: &[Point]) -> Self {
        convex_hull(points)
    }

    pub fn union(&self, other: &RateRegion) -> RateRegion {
        let mut pts = self.vertices.clone();
        pts.extend_from_slice(&other.vertices);
        convex_hull(&pts)
    }

    /// `max w·R1 + (1−w)·R2` over the region.
    pub fn weighted_sum_max(&self, w: f64) -> f64 {
        weighted_sum_max(&self.vertices, w)
    }

    pub fn sum_rate(&self) -> f64 {
        self.vertices
            .iter()
            .map(|(x, y)| x + y)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        contains(self, p, tol)
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return 0.0;
        }
        let twice: f64 = (0..n)
            .map(|i| {
                let (x0, y0) = v[i];
                let (x1, y1) = v[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        twice.abs() / 2.0
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn weighted_sum_max(points: &[Point], w: f64) -> f64 {
    points
        .iter()
        .map(|(x, y)| w * x + (1.0 - w) * y)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Collinear boundary points are dropped; the
/// result starts at the lowest-leftmost point and runs counterclockwise.
pub fn convex_hull(points: &[Point]) -> RateRegion {
    let mut pts: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    // Near-duplicates need not be adjacent after sorting, so look back over
    // every kept point whose R1 is within tolerance.
    let mut kept: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = kept
            .iter()
            .rev()
            .take_while(|q| p.0 - q.0 <= DEDUP_TOL)
            .any(|q| (p.1 - q.1).abs() <= DEDUP_TOL);
        if !dup {
            kept.push(p);
        }
    }
    let pts = kept;
    if pts.len() <= 2 {
        return RateRegion { vertices: pts };
    }

    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // Start from the lowest point (ties broken by smaller R1).
    let start = lower
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    lower.rotate_left(start);
    RateRegion { vertices: lower }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Point inside the region or within Euclidean distance `tol` of it.
pub fn contains(region: &RateRegion, p: Point, tol: f64) -> bool {
    let v = &region.vertices;
    match v.len() {
        0 => false,
        1 => segment_distance(p, v[0], v[0]) <= tol,
        2 => segment_distance(p, v[0], v[1]) <= tol,
        n => {
            let inside = (0..n).all(|i| cross(v[i], v[(i + 1) % n], p) >= 0.0);
            inside || (0..n).any(|i| segment_distance(p, v[i], v[(i + 1) % n]) <= tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[Point], b: &[Point]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(p, q)| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12)
    }

    #[test]
    fn interleaved_near_duplicates_merge() {
        let pts = [
            (0.0, 0.0),
            (0.055594471427113955, 0.0),
            (0.055594471427113955, 0.29334642139805206),
            (0.055594471427113934, 0.2933464213980521),
            (0.0, 0.34894089282516605),
        ];
        assert_eq!(convex_hull(&pts).vertices.len(), 4);
    }

    #[test]
    fn four_constraint_polytope() {
        let p = RatePolytope::new(vec![
            Constraint::new(1.0, 0.0, 2.0),
            Constraint::new(0.0, 1.0, 2.0),
            Constraint::new(1.0, 1.0, 3.0),
            Constraint::new(2.0, 1.0, 4.0),
        ]);
        // Hand enumeration: R1=2 meets 2R1+R2=4 at (2,0); R2=2 meets R1+R2=3 at (1,2),
        // which also lies on 2R1+R2=4.
        assert!(close(
            &p.vertices(),
            &[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0), (0.0, 2.0)]
        ));
    }

    #[test]
    fn zero_bounds_give_origin() {
        let p = RatePolytope::new(vec![
            Constraint::new(1.0, 0.0, 0.0),
            Constraint::new(0.0, 1.0, 0.0),
        ]);
        assert_eq!(p.vertices(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn negative_bound_gives_origin() {
        let p = RatePolytope::new(vec![Constraint::new(1.0, 1.0, -1.0)]);
        assert_eq!(p.vertices(), vec![(0.0, 0.0)]);
    }

    #[test]
    fn unit_square() {
        let p = RatePolytope::new(vec![
            Constraint::new(1.0, 0.0, 1.0),
            Constraint::new(0.0, 1.0, 1.0),
        ]);
        assert!(close(
            &p.vertices(),
            &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        ));
    }

    #[test]
    fn hull_drops_interior_point() {
        let r = convex_hull(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.4, 0.4)]);
        assert!(close(&r.vertices, &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]));
    }

    #[test]
    fn hull_of_single_point() {
        assert_eq!(convex_hull(&[(0.3, 0.2)]).vertices, vec![(0.3, 0.2)]);
    }

    #[test]
    fn hull_keeps_all_four() {
        let r = convex_hull(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.5, 0.5)]);
        assert!(close(
            &r.vertices,
            &[(0.0, 0.0), (1.0, 0.0), (1.5, 0.5), (0.0, 1.0)]
        ));
    }

    #[test]
    fn hull_drops_collinear_points() {
        let r = convex_hull(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 2.0)]);
        assert_eq!(r.vertices.len(), 3);
    }

    #[test]
    fn weighted_sums_on_rectangle() {
        let r = convex_hull(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
        assert_eq!(r.weighted_sum_max(1.0), 2.0);
        assert_eq!(r.weighted_sum_max(0.0), 1.0);
        assert_eq!(r.weighted_sum_max(0.5), 1.5);
        assert_eq!(r.sum_rate(), 3.0);
        assert_eq!(RateRegion::origin().sum_rate(), 0.0);
    }

    #[test]
    fn containment() {
        let r = convex_hull(&[(0.0, 0.0), (2.0, 0.0), (1.0, 2.0), (0.0, 2.0)]);
        assert!(r.contains((1.0, 2.0), 0.0));
        assert!(r.contains((0.0, 0.0), 0.0));
        assert!(r.contains((0.5, 0.5), 0.0));
        assert!(!r.contains((3.0, 3.0), 1e-6));
        assert!(r.contains((2.0 + 5e-7, 0.0), 1e-6));
        assert!(!r.contains((2.0 + 5e-6, 0.0), 1e-6));
        assert!(RateRegion::origin().contains((0.0, 0.0), 0.0));
    }

    #[test]
    fn area_of_triangle() {
        let r = convex_hull(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]);
        assert_eq!(r.area(), 2.0);
    }
}
