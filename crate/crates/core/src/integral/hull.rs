//! Planar convex hull (monotone chain) and signed distance to it.

pub(crate) type Point = (f64, f64);

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise hull without collinear points.
pub(crate) fn convex_hull(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + s * dx, a.1 + s * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Signed distance from `p` to the hull: positive inside, negative outside.
/// Degenerate hulls (a point or a segment) have no interior, so the result
/// is never positive for them.
pub(crate) fn signed_distance(hull: &[Point], p: Point) -> f64 {
    match hull.len() {
        0 => f64::NEG_INFINITY,
        1 => -segment_distance(p, hull[0], hull[0]),
        2 => -segment_distance(p, hull[0], hull[1]),
        n => {
            let edges = (0..n).map(|i| (hull[i], hull[(i + 1) % n]));
            let inside = edges.clone().all(|(a, b)| cross(a, b, p) >= 0.0);
            let d = edges
                .map(|(a, b)| segment_distance(p, a, b))
                .fold(f64::INFINITY, f64::min);
            if inside {
                d
            } else {
                -d
            }
        }
    }
}
