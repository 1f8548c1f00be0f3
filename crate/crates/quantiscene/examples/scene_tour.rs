//! Build a scene by hand, query it with predicates, and serialize it.
//!
//! ```text
//! cargo run --release --example scene_tour
//! ```

use quantiscene::scene::{Color, ObjectSpec, Predicate, Scene, ShapeKind};

fn object(shape: ShapeKind, color: Color, center: (f64, f64)) -> ObjectSpec {
    ObjectSpec {
        shape,
        color,
        center,
        rotation: 0.0,
        size: (0.12, 0.12),
    }
}

fn main() -> quantiscene::error::Result<()> {
    let scene = Scene::new(vec![
        object(ShapeKind::Square, Color::Red, (0.2, 0.2)),
        object(ShapeKind::Square, Color::Red, (0.5, 0.2)),
        object(ShapeKind::Square, Color::Red, (0.8, 0.2)),
        object(ShapeKind::Circle, Color::Red, (0.2, 0.5)),
        object(ShapeKind::Circle, Color::Red, (0.5, 0.5)),
        object(ShapeKind::Circle, Color::Blue, (0.8, 0.5)),
        object(ShapeKind::Triangle, Color::Blue, (0.2, 0.8)),
        object(ShapeKind::Triangle, Color::Blue, (0.5, 0.8)),
        object(ShapeKind::Ellipse, Color::Yellow, (0.8, 0.8)),
    ]);

    println!("objects: {}", scene.objects.len());
    println!("violations: {:?}", scene.violations());

    let red = Predicate::color(Color::Red);
    let square = Predicate::shape(ShapeKind::Square);
    let any = Predicate::universal();
    println!("red objects:        {}", scene.count_matching(&red));
    println!("squares:            {}", scene.count_matching(&square));
    println!("red squares:        {}", scene.count_joint(&red, &square));
    println!("non-red squares:    {}", scene.count_joint(&red.negate(), &square));
    println!("everything:         {}", scene.count_matching(&any));

    let total_area: f64 = scene.objects.iter().map(|o| o.analytic_area()).sum();
    println!("total analytic area: {total_area:.4} of the unit canvas");

    let json = serde_json::to_string_pretty(&scene).expect("scenes serialize");
    println!("\nserialized scene:\n{json}");

    let back: Scene = serde_json::from_str(&json).expect("scenes deserialize");
    assert_eq!(back, scene);
    println!("\nround-trip through JSON: identical");
    Ok(())
}
