//! Rejection-sampling placement shared by the scene generators.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::PartitionLine;
use crate::scene::geometry::{clip_halfplane, convex_intersects, union_overlap_area, Vec2};
use crate::scene::{CollisionPolicy, ObjectSpec};

/// Position attempts per object before the scene placement is abandoned.
pub(super) const TRIES_PER_OBJECT: usize = 100;

/// Whole-scene placement attempts before `PlacementFailure`.
pub(super) const SCENE_RESTARTS: usize = 10;

/// Incrementally placed objects with cached convex decompositions, so each
/// candidate position needs one decomposition and a radius-pruned sweep.
pub(super) struct Placer {
    policy: CollisionPolicy,
    objects: Vec<ObjectSpec>,
    parts: Vec<Vec<Vec<Vec2>>>,
    radii: Vec<f64>,
}

impl Placer {
    pub(super) fn new(policy: CollisionPolicy) -> Self {
        Placer {
            policy,
            objects: Vec::new(),
            parts: Vec::new(),
            radii: Vec::new(),
        }
    }

    pub(super) fn into_objects(self) -> Vec<ObjectSpec> {
        self.objects
    }

    /// Removes the most recently placed object.
    pub(super) fn pop(&mut self) {
        self.objects.pop();
        self.parts.pop();
        self.radii.pop();
    }

    /// Adds the object unless it violates the collision policy against an
    /// already placed one.
    pub(super) fn try_place(&mut self, obj: ObjectSpec) -> bool {
        let parts = obj.convex_parts();
        let radius = obj.bounding_radius();
        let center = Vec2::new(obj.center.0, obj.center.1);
        for i in 0..self.objects.len() {
            let other = &self.objects[i];
            let other_center = Vec2::new(other.center.0, other.center.1);
            if center.distance(other_center) >= radius + self.radii[i] {
                continue;
            }
            let intersects = parts
                .iter()
                .any(|a| self.parts[i].iter().any(|b| convex_intersects(a, b)));
            if !intersects {
                continue;
            }
            let violates = match self.policy {
                CollisionPolicy::NoneAllowed => true,
                CollisionPolicy::OverlapFraction(max) => {
                    let overlap = union_overlap_area(&parts, &self.parts[i]);
                    overlap > max * obj.analytic_area().min(other.analytic_area())
                }
            };
            if violates {
                return false;
            }
        }
        self.objects.push(obj);
        self.parts.push(parts);
        self.radii.push(radius);
        true
    }
}

/// Feasible center positions for one object, sampled uniformly by area.
///
/// Sampling from the exact feasible region (instead of rejecting canvas
/// draws that land outside it) keeps every placement try meaningful: in
/// partitioned mode roughly two thirds of the canvas is off-side for a
/// given object, which would otherwise eat most of the retry budget.
pub(super) struct Region {
    tris: Vec<[Vec2; 3]>,
    cumulative: Vec<f64>,
    clamp: ((f64, f64), (f64, f64)),
}

/// Pulls sampled interior points a hair off the region boundary so the
/// margin inequalities they were clipped by also hold after rounding.
const REGION_INSET: f64 = 1e-9;

impl Region {
    fn from_polygon(poly: &[Vec2]) -> Option<Self> {
        if poly.len() < 3 {
            return None;
        }
        let mut tris = Vec::with_capacity(poly.len() - 2);
        let mut cumulative = Vec::with_capacity(poly.len() - 2);
        let mut total = 0.0;
        for i in 1..poly.len() - 1 {
            let tri = [poly[0], poly[i], poly[i + 1]];
            let ab = tri[1].sub(tri[0]);
            let ac = tri[2].sub(tri[0]);
            total += 0.5 * (ab.x * ac.y - ab.y * ac.x).abs();
            tris.push(tri);
            cumulative.push(total);
        }
        if total < 1e-12 {
            return None;
        }
        let xs = poly.iter().map(|p| p.x);
        let ys = poly.iter().map(|p| p.y);
        let clamp = (
            (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max)),
            (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max)),
        );
        Some(Region { tris, cumulative, clamp })
    }

    /// Uniform point in the region: area-weighted triangle pick, then a
    /// uniform draw inside that triangle.
    pub(super) fn sample(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let total = *self.cumulative.last().expect("nonempty triangulation");
        let t = rng.gen_range(0.0..total);
        let idx = self
            .cumulative
            .partition_point(|&c| c <= t)
            .min(self.tris.len() - 1);
        let [a, b, c] = self.tris[idx];
        let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let x = a.x + u * (b.x - a.x) + v * (c.x - a.x);
        let y = a.y + u * (b.y - a.y) + v * (c.y - a.y);
        let ((x0, x1), (y0, y1)) = self.clamp;
        (x.clamp(x0, x1), y.clamp(y0, y1))
    }
}

fn canvas_rect(proto: &ObjectSpec) -> Option<[Vec2; 4]> {
    let (ex, ey) = proto.canvas_extents();
    if ex > 0.5 || ey > 0.5 {
        return None;
    }
    Some([
        Vec2::new(ex, ey),
        Vec2::new(1.0 - ex, ey),
        Vec2::new(1.0 - ex, 1.0 - ey),
        Vec2::new(ex, 1.0 - ey),
    ])
}

/// Centers keeping the object's rotated bounding box inside the unit
/// canvas. `None` when the object cannot fit at all.
pub(super) fn rect_region(proto: &ObjectSpec) -> Option<Region> {
    Region::from_polygon(&canvas_rect(proto)?)
}

/// Canvas-fitting centers with the object's whole bounding disk on one
/// side of the partition line: the minority side for `sign` = +1, the
/// majority side for -1. `None` when no such center exists.
pub(super) fn side_region(
    proto: &ObjectSpec,
    line: &PartitionLine,
    sign: f64,
) -> Option<Region> {
    let rect = canvas_rect(proto)?;
    let (nx, ny) = line.normal();
    let normal = Vec2::new(sign * nx, sign * ny);
    // sign * signed_distance(p) >= radius, as an offset on normal . p.
    let offset =
        proto.bounding_radius() + normal.dot(Vec2::new(0.5, 0.5)) + REGION_INSET;
    Region::from_polygon(&clip_halfplane(&rect, normal, offset))
}
