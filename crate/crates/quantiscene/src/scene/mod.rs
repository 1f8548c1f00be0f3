//! Scene model: shapes, colors, objects, scenes, and attribute predicates.
//!
//! A scene is a list of objects on the unit canvas `[0, 1] x [0, 1]`
//! (x right, y down). Each object has a shape, a color, a center, a
//! rotation in radians (counterclockwise in canvas coordinates), and a
//! `(width, height)` size giving the bounding box of the unrotated shape.
//!
//! Canonical geometry is pinned here once and shared by the area formulas,
//! the collision tests, and the rasterizer:
//!
//! * square/rectangle: the full bounding box
//! * triangle: the half-box isosceles triangle, apex at the top edge
//! * pentagon: the regular pentagon, vertex up, stretched to fill the box
//! * cross: a plus sign whose arm width is 1/3 of the box side
//! * circle/ellipse: the inscribed ellipse
//! * semicircle: the half-ellipse with flat side on the bottom edge,
//!   arc reaching the top edge
//!
//! Truth evaluation reads only this symbolic model, never rendered pixels.

pub mod geometry;

use serde::{Deserialize, Serialize};

use geometry::Vec2;

// ---------------------------------------------------------------------------
// Attributes
// ---------------------------------------------------------------------------

/// The eight shape kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Square,
    Rectangle,
    Triangle,
    Pentagon,
    Cross,
    Circle,
    Semicircle,
    Ellipse,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 8] = [
        ShapeKind::Square,
        ShapeKind::Rectangle,
        ShapeKind::Triangle,
        ShapeKind::Pentagon,
        ShapeKind::Cross,
        ShapeKind::Circle,
        ShapeKind::Semicircle,
        ShapeKind::Ellipse,
    ];

    pub fn noun(self) -> &'static str {
        match self {
            ShapeKind::Square => "square",
            ShapeKind::Rectangle => "rectangle",
            ShapeKind::Triangle => "triangle",
            ShapeKind::Pentagon => "pentagon",
            ShapeKind::Cross => "cross",
            ShapeKind::Circle => "circle",
            ShapeKind::Semicircle => "semicircle",
            ShapeKind::Ellipse => "ellipse",
        }
    }

    pub fn noun_plural(self) -> &'static str {
        match self {
            ShapeKind::Square => "squares",
            ShapeKind::Rectangle => "rectangles",
            ShapeKind::Triangle => "triangles",
            ShapeKind::Pentagon => "pentagons",
            ShapeKind::Cross => "crosses",
            ShapeKind::Circle => "circles",
            ShapeKind::Semicircle => "semicircles",
            ShapeKind::Ellipse => "ellipses",
        }
    }

    /// Fraction of the `w x h` bounding box the shape covers, so that
    /// `analytic_area = coefficient * w * h`.
    pub fn unit_area_coefficient(self) -> f64 {
        match self {
            ShapeKind::Square | ShapeKind::Rectangle => 1.0,
            ShapeKind::Triangle => 0.5,
            // Regular pentagon stretched to its bounding box: (5 - sqrt 5)/4.
            ShapeKind::Pentagon => (5.0 - 5.0_f64.sqrt()) / 4.0,
            // Two 1 x 1/3 bars minus their 1/3 x 1/3 overlap.
            ShapeKind::Cross => 5.0 / 9.0,
            // Inscribed ellipse; the semicircle is the half-ellipse with
            // doubled vertical semi-axis, which has the same box fraction.
            ShapeKind::Circle | ShapeKind::Semicircle | ShapeKind::Ellipse => {
                std::f64::consts::FRAC_PI_4
            }
        }
    }
}

/// The seven colors, with their exact render palette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
    Yellow,
    Magenta,
    Cyan,
    Gray,
}

impl Color {
    pub const ALL: [Color; 7] = [
        Color::Red,
        Color::Green,
        Color::Blue,
        Color::Yellow,
        Color::Magenta,
        Color::Cyan,
        Color::Gray,
    ];

    pub fn adjective(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::Yellow => "yellow",
            Color::Magenta => "magenta",
            Color::Cyan => "cyan",
            Color::Gray => "gray",
        }
    }

    pub fn rgb(self) -> [u8; 3] {
        match self {
            Color::Red => [255, 0, 0],
            Color::Green => [0, 255, 0],
            Color::Blue => [0, 0, 255],
            Color::Yellow => [255, 255, 0],
            Color::Magenta => [255, 0, 255],
            Color::Cyan => [0, 255, 255],
            Color::Gray => [128, 128, 128],
        }
    }
}

// ---------------------------------------------------------------------------
// Objects
// ---------------------------------------------------------------------------

/// One placed shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub shape: ShapeKind,
    pub color: Color,
    /// Center on the unit canvas.
    pub center: (f64, f64),
    /// Radians, counterclockwise in canvas coordinates.
    pub rotation: f64,
    /// `(width, height)` of the unrotated bounding box, each in `(0, 1]`.
    pub size: (f64, f64),
}

impl ObjectSpec {
    /// Exact area from the closed-form box-fraction coefficients.
    pub fn analytic_area(&self) -> f64 {
        self.shape.unit_area_coefficient() * self.size.0 * self.size.1
    }

    /// Radius of a disk around the center guaranteed to contain the shape
    /// at any rotation (half the box diagonal).
    pub fn bounding_radius(&self) -> f64 {
        0.5 * self.size.0.hypot(self.size.1)
    }

    /// Maps a canvas point into the canonical unit-box frame.
    fn to_unit(&self, x: f64, y: f64) -> (f64, f64) {
        let dx = x - self.center.0;
        let dy = y - self.center.1;
        let (sin, cos) = self.rotation.sin_cos();
        // Inverse rotation, then inverse scale.
        let rx = cos * dx + sin * dy;
        let ry = -sin * dx + cos * dy;
        (rx / self.size.0, ry / self.size.1)
    }

    /// Exact containment test (analytic for curved edges).
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        let (u, v) = self.to_unit(x, y);
        if !(-0.5..=0.5).contains(&u) || !(-0.5..=0.5).contains(&v) {
            return false;
        }
        // Canvas y grows downward, so the visual top edge is v = -1/2.
        match self.shape {
            ShapeKind::Square | ShapeKind::Rectangle => true,
            ShapeKind::Triangle => {
                // Base on the bottom edge, apex at the top-edge midpoint.
                u.abs() <= 0.5 * (v + 0.5)
            }
            ShapeKind::Pentagon => point_in_convex_unit(&pentagon_unit(), u, v),
            ShapeKind::Cross => u.abs() <= CROSS_HALF_ARM || v.abs() <= CROSS_HALF_ARM,
            ShapeKind::Circle | ShapeKind::Ellipse => u * u + v * v <= 0.25,
            ShapeKind::Semicircle => {
                // Half-ellipse: flat side on the bottom edge, semi-axes
                // (1/2, 1), arc touching the top edge.
                let vv = v - 0.5;
                4.0 * u * u + vv * vv <= 1.0
            }
        }
    }

    /// Convex decomposition in world coordinates, counterclockwise. Curved
    /// shapes are approximated by inscribed polygons with at least 32
    /// vertices; the cross splits into its two bars.
    pub fn convex_parts(&self) -> Vec<Vec<Vec2>> {
        let unit_parts: Vec<Vec<(f64, f64)>> = match self.shape {
            ShapeKind::Square | ShapeKind::Rectangle => vec![BOX_UNIT.to_vec()],
            ShapeKind::Triangle => {
                vec![vec![(-0.5, 0.5), (0.5, 0.5), (0.0, -0.5)]]
            }
            ShapeKind::Pentagon => vec![pentagon_unit().to_vec()],
            ShapeKind::Cross => vec![
                vec![
                    (-0.5, -CROSS_HALF_ARM),
                    (0.5, -CROSS_HALF_ARM),
                    (0.5, CROSS_HALF_ARM),
                    (-0.5, CROSS_HALF_ARM),
                ],
                vec![
                    (-CROSS_HALF_ARM, -0.5),
                    (CROSS_HALF_ARM, -0.5),
                    (CROSS_HALF_ARM, 0.5),
                    (-CROSS_HALF_ARM, 0.5),
                ],
            ],
            ShapeKind::Circle | ShapeKind::Ellipse => {
                let n = 64;
                vec![(0..n)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(n);
                        (0.5 * t.cos(), 0.5 * t.sin())
                    })
                    .collect()]
            }
            ShapeKind::Semicircle => {
                let n = 32;
                vec![(0..=n)
                    .map(|k| {
                        let t = std::f64::consts::PI * f64::from(k) / f64::from(n);
                        (0.5 * t.cos(), 0.5 - t.sin())
                    })
                    .collect()]
            }
        };

        let (sin, cos) = self.rotation.sin_cos();
        unit_parts
            .into_iter()
            .map(|part| {
                let mut poly: Vec<Vec2> = part
                    .into_iter()
                    .map(|(u, v)| {
                        let sx = u * self.size.0;
                        let sy = v * self.size.1;
                        Vec2::new(
                            self.center.0 + cos * sx - sin * sy,
                            self.center.1 + sin * sx + cos * sy,
                        )
                    })
                    .collect();
                geometry::ensure_ccw(&mut poly);
                poly
            })
            .collect()
    }

    /// Half-extents of the rotated bounding box along the canvas axes.
    pub fn canvas_extents(&self) -> (f64, f64) {
        let (sin, cos) = self.rotation.sin_cos();
        let ex = 0.5 * (self.size.0 * cos.abs() + self.size.1 * sin.abs());
        let ey = 0.5 * (self.size.0 * sin.abs() + self.size.1 * cos.abs());
        (ex, ey)
    }

    /// Whether the rotated bounding box lies inside the unit canvas.
    pub fn fits_canvas(&self) -> bool {
        let (ex, ey) = self.canvas_extents();
        self.center.0 >= ex
            && self.center.0 <= 1.0 - ex
            && self.center.1 >= ey
            && self.center.1 <= 1.0 - ey
    }
}

const CROSS_HALF_ARM: f64 = 1.0 / 6.0;

const BOX_UNIT: [(f64, f64); 4] = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)];

/// Canonical pentagon vertices (regular pentagon, vertex at the visual
/// top, stretched to the unit box). The coordinates are exact in sqrt 5.
fn pentagon_unit() -> [(f64, f64); 5] {
    let s5 = 5.0_f64.sqrt();
    let x1 = (s5 - 1.0) / 4.0; // 0.3090...
    let y1 = (s5 - 2.0) / 2.0; // 0.1180...
    [
        (0.0, -0.5),
        (-0.5, -y1),
        (-x1, 0.5),
        (x1, 0.5),
        (0.5, -y1),
    ]
}

/// Winding-agnostic convex containment: the point must sit on the same
/// side of every edge (or on an edge).
fn point_in_convex_unit(poly: &[(f64, f64)], u: f64, v: f64) -> bool {
    let n = poly.len();
    let mut sign = 0.0_f64;
    for i in 0..n {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % n];
        let cross = (x2 - x1) * (v - y1) - (y2 - y1) * (u - x1);
        if cross.abs() < 1e-15 {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

/// Attribute predicate over objects: shape and/or color constraints, with
/// an optional complement flag used by the verification strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Predicate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
}

impl Predicate {
    /// Matches every object.
    pub fn universal() -> Self {
        Predicate {
            shape: None,
            color: None,
            negated: false,
        }
    }

    pub fn shape(shape: ShapeKind) -> Self {
        Predicate {
            shape: Some(shape),
            color: None,
            negated: false,
        }
    }

    pub fn color(color: Color) -> Self {
        Predicate {
            shape: None,
            color: Some(color),
            negated: false,
        }
    }

    pub fn is_universal(&self) -> bool {
        self.shape.is_none() && self.color.is_none() && !self.negated
    }

    /// The complement predicate.
    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn matches(&self, obj: &ObjectSpec) -> bool {
        let base = self.shape.map_or(true, |s| obj.shape == s)
            && self.color.map_or(true, |c| obj.color == c);
        base != self.negated
    }

    /// Short human-readable form for logs: "red square", "circle",
    /// "shape" (universal), "non-(red)".
    pub fn describe(&self) -> String {
        let core = match (self.color, self.shape) {
            (Some(color), Some(shape)) => format!("{} {}", color.adjective(), shape.noun()),
            (Some(color), None) => format!("{} shape", color.adjective()),
            (None, Some(shape)) => shape.noun().to_owned(),
            (None, None) => "shape".to_owned(),
        };
        if self.negated {
            format!("non-({core})")
        } else {
            core
        }
    }
}

// ---------------------------------------------------------------------------
// Scenes
// ---------------------------------------------------------------------------

/// Collision policy a scene was generated under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CollisionPolicy {
    /// No positive-area overlap between any two objects.
    #[default]
    NoneAllowed,
    /// Pairwise overlap area up to this fraction of the smaller object.
    OverlapFraction(f64),
}

/// An ordered list of objects; later objects draw over earlier ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub objects: Vec<ObjectSpec>,
    /// Omitted from JSON when it is the default `none_allowed`.
    #[serde(default, skip_serializing_if = "is_default_policy")]
    pub collision_policy: CollisionPolicy,
}

fn is_default_policy(p: &CollisionPolicy) -> bool {
    matches!(p, CollisionPolicy::NoneAllowed)
}

impl Scene {
    pub fn new(objects: Vec<ObjectSpec>) -> Self {
        Scene {
            objects,
            collision_policy: CollisionPolicy::NoneAllowed,
        }
    }

    pub fn count_matching(&self, pred: &Predicate) -> usize {
        self.objects.iter().filter(|o| pred.matches(o)).count()
    }

    /// Count of objects matching both predicates (conjunction).
    pub fn count_joint(&self, a: &Predicate, b: &Predicate) -> usize {
        self.objects
            .iter()
            .filter(|o| a.matches(o) && b.matches(o))
            .count()
    }

    /// Object index pairs violating the collision policy.
    pub fn collision_pairs(&self) -> Vec<(usize, usize)> {
        let parts: Vec<_> = self.objects.iter().map(|o| o.convex_parts()).collect();
        let mut bad = Vec::new();
        for i in 0..self.objects.len() {
            for j in (i + 1)..self.objects.len() {
                // Bounding-disk prefilter.
                let ci = self.objects[i].center;
                let cj = self.objects[j].center;
                let d = Vec2::new(ci.0, ci.1).distance(Vec2::new(cj.0, cj.1));
                if d >= self.objects[i].bounding_radius() + self.objects[j].bounding_radius() {
                    continue;
                }
                let intersects = parts[i]
                    .iter()
                    .any(|pa| parts[j].iter().any(|pb| geometry::convex_intersects(pa, pb)));
                if !intersects {
                    continue;
                }
                match self.collision_policy {
                    CollisionPolicy::NoneAllowed => bad.push((i, j)),
                    CollisionPolicy::OverlapFraction(max) => {
                        let overlap = geometry::union_overlap_area(&parts[i], &parts[j]);
                        let min_area = self.objects[i]
                            .analytic_area()
                            .min(self.objects[j].analytic_area());
                        if overlap > max * min_area {
                            bad.push((i, j));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Human-readable invariant violations (empty means valid).
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, obj) in self.objects.iter().enumerate() {
            if !(obj.size.0 > 0.0 && obj.size.0 <= 1.0 && obj.size.1 > 0.0 && obj.size.1 <= 1.0) {
                out.push(format!("object {i}: size out of (0, 1]"));
            }
            if obj.analytic_area() <= 0.0 {
                out.push(format!("object {i}: nonpositive area"));
            }
            if !obj.fits_canvas() {
                out.push(format!("object {i}: extends outside the canvas"));
            }
        }
        for (i, j) in self.collision_pairs() {
            out.push(format!("objects {i} and {j} violate the collision policy"));
        }
        out
    }
}
