//! Convex-polygon geometry used for collision checks.
//!
//! Every shape decomposes into one or two convex polygons in world
//! coordinates (the cross is two bars; curved shapes use a 64-vertex
//! inscribed approximation). Intersection tests use the separating axis
//! theorem; overlap areas use Sutherland-Hodgman clipping with
//! inclusion-exclusion across parts.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    /// Left-hand normal.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn distance(self, o: Vec2) -> f64 {
        self.sub(o).dot(self.sub(o)).sqrt()
    }
}

/// Signed shoelace area (positive for counterclockwise winding).
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let mut acc = 0.0;
    for (i, p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        acc += p.x * q.y - q.x * p.y;
    }
    acc / 2.0
}

pub fn area(poly: &[Vec2]) -> f64 {
    signed_area(poly).abs()
}

/// Normalizes winding to counterclockwise so clipping can assume it.
pub fn ensure_ccw(poly: &mut Vec<Vec2>) {
    if signed_area(poly) < 0.0 {
        poly.reverse();
    }
}

fn project(poly: &[Vec2], axis: Vec2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in poly {
        let d = p.dot(axis);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

/// Strict positive-area intersection test for convex polygons. Polygons
/// that merely touch count as separated.
pub fn convex_intersects(a: &[Vec2], b: &[Vec2]) -> bool {
    const EPS: f64 = 1e-12;
    for poly in [a, b] {
        for (i, p) in poly.iter().enumerate() {
            let q = poly[(i + 1) % poly.len()];
            let axis = q.sub(*p).perp();
            let (a_lo, a_hi) = project(a, axis);
            let (b_lo, b_hi) = project(b, axis);
            if a_hi <= b_lo + EPS || b_hi <= a_lo + EPS {
                return false;
            }
        }
    }
    true
}

/// Sutherland-Hodgman clip of a convex `subject` by a counterclockwise
/// convex `clip` polygon. Returns the (possibly empty) intersection.
pub fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    let mut output: Vec<Vec2> = subject.to_vec();
    for (i, p) in clip.iter().enumerate() {
        if output.is_empty() {
            break;
        }
        let q = clip[(i + 1) % clip.len()];
        let edge = q.sub(*p);
        let inside = |v: Vec2| edge.x * (v.y - p.y) - edge.y * (v.x - p.x) >= 0.0;
        let input = std::mem::take(&mut output);
        for (j, s) in input.iter().enumerate() {
            let e = input[(j + 1) % input.len()];
            let s_in = inside(*s);
            let e_in = inside(e);
            if s_in {
                output.push(*s);
            }
            if s_in != e_in {
                let d = e.sub(*s);
                let denom = edge.x * d.y - edge.y * d.x;
                if denom.abs() > 1e-30 {
                    let t = (edge.y * (s.x - p.x) - edge.x * (s.y - p.y)) / denom;
                    output.push(Vec2::new(s.x + t * d.x, s.y + t * d.y));
                }
            }
        }
    }
    output
}

/// Clips a polygon to the half-plane `normal · p >= offset`.
pub fn clip_halfplane(poly: &[Vec2], normal: Vec2, offset: f64) -> Vec<Vec2> {
    let mut output = Vec::with_capacity(poly.len() + 1);
    for (i, s) in poly.iter().enumerate() {
        let p = poly[(i + 1) % poly.len()];
        let s_val = normal.dot(*s) - offset;
        let p_val = normal.dot(p) - offset;
        if s_val >= 0.0 {
            output.push(*s);
        }
        if (s_val >= 0.0) != (p_val >= 0.0) {
            let t = s_val / (s_val - p_val);
            output.push(Vec2::new(s.x + t * (p.x - s.x), s.y + t * (p.y - s.y)));
        }
    }
    output
}

/// Intersection area of two unions of convex parts, by inclusion-exclusion
/// over nonempty part subsets. Shapes here have at most two parts, so the
/// subset lattice stays tiny.
pub fn union_overlap_area(parts_a: &[Vec<Vec2>], parts_b: &[Vec<Vec2>]) -> f64 {
    let subsets = |n: usize| (1u32..(1 << n)).collect::<Vec<_>>();
    let intersect_subset = |parts: &[Vec<Vec2>], mask: u32| -> Option<Vec<Vec2>> {
        let mut acc: Option<Vec<Vec2>> = None;
        for (i, part) in parts.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            acc = Some(match acc {
                None => part.clone(),
                Some(cur) => clip_convex(&cur, part),
            });
            if acc.as_ref().map_or(false, |p| p.len() < 3) {
                return None;
            }
        }
        acc
    };

    let mut total = 0.0;
    for ma in subsets(parts_a.len()) {
        let Some(ia) = intersect_subset(parts_a, ma) else {
            continue;
        };
        for &mb in &subsets(parts_b.len()) {
            let Some(ib) = intersect_subset(parts_b, mb) else {
                continue;
            };
            let region = clip_convex(&ia, &ib);
            if region.len() >= 3 {
                let sign = if (ma.count_ones() + mb.count_ones()) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                total += sign * area(&region);
            }
        }
    }
    total.max(0.0)
}
