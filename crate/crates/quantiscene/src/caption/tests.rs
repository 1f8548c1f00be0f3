use super::*;
use crate::scene::{Color, ObjectSpec, Predicate, Scene, ShapeKind};
use proptest::prelude::*;
use rand::Rng;

fn obj(shape: ShapeKind, color: Color, x: f64, y: f64) -> ObjectSpec {
    ObjectSpec {
        shape,
        color,
        center: (x, y),
        rotation: 0.0,
        size: (0.1, 0.1),
    }
}

/// 5 red squares and 4 red circles, spread on a grid.
fn five_squares_four_circles() -> Scene {
    let mut objects = Vec::new();
    for i in 0..5 {
        objects.push(obj(ShapeKind::Square, Color::Red, 0.1 + 0.15 * f64::from(i), 0.3));
    }
    for i in 0..4 {
        objects.push(obj(ShapeKind::Circle, Color::Red, 0.1 + 0.15 * f64::from(i), 0.7));
    }
    Scene::new(objects)
}

fn caption(modifier: Modifier, quantity: Quantity, restrictor: Predicate, scope: Predicate) -> CaptionAst {
    CaptionAst {
        modifier,
        quantity,
        restrictor,
        scope,
    }
}

// ---------------------------------------------------------------------------
// Truth evaluation
// ---------------------------------------------------------------------------

#[test]
fn more_than_half_on_five_of_nine() {
    let scene = five_squares_four_circles();
    let c = caption(
        Modifier::MoreThan,
        Quantity::Fraction(1, 2),
        Predicate::universal(),
        Predicate::shape(ShapeKind::Square),
    );
    // 2 * 5 > 1 * 9
    assert!(c.evaluate(&scene));
    let less = caption(
        Modifier::LessThan,
        Quantity::Fraction(1, 2),
        Predicate::universal(),
        Predicate::shape(ShapeKind::Square),
    );
    assert!(!less.evaluate(&scene));
}

#[test]
fn exactly_no_square_is_red_when_none_is() {
    let scene = Scene::new(vec![
        obj(ShapeKind::Square, Color::Blue, 0.2, 0.2),
        obj(ShapeKind::Circle, Color::Red, 0.6, 0.6),
    ]);
    let c = caption(
        Modifier::Exactly,
        Quantity::Fraction(0, 1),
        Predicate::shape(ShapeKind::Square),
        Predicate::color(Color::Red),
    );
    assert!(c.evaluate(&scene));
}

#[test]
fn exactly_half_is_unsatisfiable_on_odd_counts() {
    // 9 objects: "exactly half the shapes are green" is false no matter
    // how many are green.
    for greens in 0..=9 {
        let objects = (0..9)
            .map(|i| {
                let color = if i < greens { Color::Green } else { Color::Blue };
                obj(ShapeKind::Cross, color, 0.1 + 0.08 * f64::from(i), 0.5)
            })
            .collect();
        let scene = Scene::new(objects);
        let c = caption(
            Modifier::Exactly,
            Quantity::Fraction(1, 2),
            Predicate::universal(),
            Predicate::color(Color::Green),
        );
        assert!(!c.evaluate(&scene), "greens = {greens}");
    }
}

#[test]
fn at_most_five_magenta_with_four() {
    let mut objects: Vec<_> = (0..4)
        .map(|i| obj(ShapeKind::Ellipse, Color::Magenta, 0.2 + 0.1 * f64::from(i), 0.4))
        .collect();
    objects.push(obj(ShapeKind::Square, Color::Cyan, 0.8, 0.8));
    let scene = Scene::new(objects);
    let c = caption(
        Modifier::AtMost,
        Quantity::Number(5),
        Predicate::universal(),
        Predicate::color(Color::Magenta),
    );
    assert!(c.evaluate(&scene));
}

#[test]
fn empty_restrictor_semantics() {
    let scene = Scene::new(vec![obj(ShapeKind::Circle, Color::Blue, 0.5, 0.5)]);
    let squares = Predicate::shape(ShapeKind::Square);
    let red = Predicate::color(Color::Red);
    // "More than half the squares are red": no squares, 0 > 0 is false.
    assert!(!caption(Modifier::MoreThan, Quantity::Fraction(1, 2), squares, red).evaluate(&scene));
    // "At least no square is red": 0 >= 0 is true.
    assert!(caption(Modifier::AtLeast, Quantity::Fraction(0, 1), squares, red).evaluate(&scene));
}

// ---------------------------------------------------------------------------
// Verification strategies
// ---------------------------------------------------------------------------

#[test]
fn cardinality_strategy_spot_cases() {
    let scene = five_squares_four_circles();
    let a = Predicate::universal();
    let squares = Predicate::shape(ShapeKind::Square);
    assert!(verify_most_cardinality(&scene, &a, &squares));

    // Remove one square: 4 vs 4 is not "most".
    let mut even = scene.clone();
    even.objects.remove(0);
    assert!(!verify_most_cardinality(&even, &a, &squares));
}

#[test]
fn pairing_strategy_leftover_counts() {
    // 5 red and 4 blue squares: one red witness stays unmatched.
    let mut objects = Vec::new();
    for i in 0..5 {
        objects.push(obj(ShapeKind::Square, Color::Red, 0.1 + 0.18 * f64::from(i), 0.3));
    }
    for i in 0..4 {
        objects.push(obj(ShapeKind::Square, Color::Blue, 0.1 + 0.18 * f64::from(i), 0.7));
    }
    let scene = Scene::new(objects);
    let a = Predicate::shape(ShapeKind::Square);
    let b = Predicate::color(Color::Red);
    assert!(verify_most_pairing(&scene, &a, &b));
    assert_eq!(pairing_remainder(&scene, &a, &b), (1, 0));

    // 0 red and 3 blue: no witnesses at all.
    let scene = Scene::new(
        (0..3)
            .map(|i| obj(ShapeKind::Square, Color::Blue, 0.2 + 0.2 * f64::from(i), 0.5))
            .collect(),
    );
    assert!(!verify_most_pairing(&scene, &a, &b));
    assert_eq!(pairing_remainder(&scene, &a, &b), (0, 3));
}

fn random_scene(seed: u64) -> Scene {
    let mut rng = crate::rng::derive(seed, "caption-tests", 0);
    let n = rng.gen_range(0..14);
    Scene::new(
        (0..n)
            .map(|_| {
                obj(
                    ShapeKind::ALL[rng.gen_range(0..8)],
                    Color::ALL[rng.gen_range(0..7)],
                    rng.gen_range(0.1..0.9),
                    rng.gen_range(0.1..0.9),
                )
            })
            .collect(),
    )
}

fn random_pair(seed: u64) -> (Predicate, Predicate) {
    let mut rng = crate::rng::derive(seed, "caption-preds", 1);
    let a = match rng.gen_range(0..3) {
        0 => Predicate::universal(),
        1 => Predicate::color(Color::ALL[rng.gen_range(0..7)]),
        _ => Predicate::shape(ShapeKind::ALL[rng.gen_range(0..8)]),
    };
    let b = if rng.gen_bool(0.5) {
        Predicate::color(Color::ALL[rng.gen_range(0..7)])
    } else {
        Predicate::shape(ShapeKind::ALL[rng.gen_range(0..8)])
    };
    (a, b)
}

#[test]
fn strategies_agree_on_random_scenes() {
    for seed in 0..10_000 {
        let scene = random_scene(seed);
        let (a, b) = random_pair(seed);
        assert_eq!(
            verify_most_cardinality(&scene, &a, &b),
            verify_most_pairing(&scene, &a, &b),
            "seed {seed}"
        );
    }
}

#[test]
fn pairing_is_order_independent() {
    for seed in 0..200 {
        let scene = random_scene(seed);
        let (a, b) = random_pair(seed + 7_000);
        let verdict = verify_most_pairing(&scene, &a, &b);
        let mut reversed = scene.clone();
        reversed.objects.reverse();
        assert_eq!(verify_most_pairing(&reversed, &a, &b), verdict);
    }
}

#[test]
fn most_matches_the_fraction_definition() {
    for seed in 0..2_000 {
        let scene = random_scene(seed + 50_000);
        let (a, b) = random_pair(seed + 50_000);
        let by_fraction = caption(Modifier::MoreThan, Quantity::Fraction(1, 2), a, b).evaluate(&scene);
        assert_eq!(by_fraction, verify_most_cardinality(&scene, &a, &b));
    }
}

#[test]
fn some_and_every_against_set_oracles() {
    for seed in 0..2_000 {
        let scene = random_scene(seed + 90_000);
        let (a, b) = random_pair(seed + 90_000);
        let some = scene.objects.iter().any(|o| a.matches(o) && b.matches(o));
        let every = scene.objects.iter().all(|o| !a.matches(o) || b.matches(o));
        assert_eq!(
            caption(Modifier::AtLeast, Quantity::Number(1), a, b).evaluate(&scene),
            some,
            "seed {seed}"
        );
        assert_eq!(
            caption(Modifier::Exactly, Quantity::Fraction(1, 1), a, b).evaluate(&scene),
            every,
            "seed {seed}"
        );
    }
}

// ---------------------------------------------------------------------------
// Realization
// ---------------------------------------------------------------------------

#[test]
fn realize_pinned_surface_strings() {
    let cases: Vec<(CaptionAst, &str)> = vec![
        (
            caption(
                Modifier::MoreThan,
                Quantity::Fraction(1, 2),
                Predicate::universal(),
                Predicate::color(Color::Red),
            ),
            "More than half the shapes are red shapes.",
        ),
        (
            caption(
                Modifier::MoreThan,
                Quantity::Fraction(1, 2),
                Predicate::color(Color::Red),
                Predicate::shape(ShapeKind::Square),
            ),
            "More than half the red shapes are squares.",
        ),
        (
            caption(
                Modifier::AtMost,
                Quantity::Number(5),
                Predicate::universal(),
                Predicate::color(Color::Magenta),
            ),
            "At most five shapes are magenta.",
        ),
        (
            caption(
                Modifier::Exactly,
                Quantity::Fraction(0, 1),
                Predicate::shape(ShapeKind::Square),
                Predicate::color(Color::Red),
            ),
            "Exactly no square is red.",
        ),
        (
            caption(
                Modifier::AtLeast,
                Quantity::Number(1),
                Predicate::shape(ShapeKind::Triangle),
                Predicate::color(Color::Gray),
            ),
            "At least one triangle is gray.",
        ),
        (
            caption(
                Modifier::Exactly,
                Quantity::Fraction(1, 1),
                Predicate::color(Color::Magenta),
                Predicate::shape(ShapeKind::Square),
            ),
            "Exactly all magenta shapes are squares.",
        ),
        (
            caption(
                Modifier::Exactly,
                Quantity::Number(2),
                Predicate::shape(ShapeKind::Square),
                Predicate::color(Color::Yellow),
            ),
            "Exactly two squares are yellow.",
        ),
        (
            caption(
                Modifier::MoreThan,
                Quantity::Fraction(1, 3),
                Predicate::universal(),
                Predicate::color(Color::Cyan),
            ),
            "More than a third of the shapes are cyan.",
        ),
    ];
    for (ast, want) in cases {
        assert_eq!(realize(&ast), want);
        // Each canonical string also parses back to its AST verbatim.
        assert_eq!(parse(want).unwrap(), ast);
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[test]
fn parse_pinned_examples() {
    let ast = parse("Less than half the shapes are green.").unwrap();
    assert_eq!(
        ast,
        caption(
            Modifier::LessThan,
            Quantity::Fraction(1, 2),
            Predicate::universal(),
            Predicate::color(Color::Green),
        )
    );
    let ast = parse("At least one triangle is gray.").unwrap();
    assert_eq!(
        ast,
        caption(
            Modifier::AtLeast,
            Quantity::Number(1),
            Predicate::shape(ShapeKind::Triangle),
            Predicate::color(Color::Gray),
        )
    );
}

#[test]
fn parse_attested_variants() {
    // Bare and noun-phrase color scopes parse to the same AST.
    let bare = parse("More than half the shapes are red.").unwrap();
    let noun = parse("More than half the shapes are red shapes.").unwrap();
    assert_eq!(bare, noun);
    // Leading word is case-insensitive; inner whitespace is tolerated.
    assert_eq!(parse("more  than half the shapes\tare red.").unwrap(), bare);
}

#[test]
fn parse_diagnostics_carry_positions() {
    // Missing determiner: error lands on "shapes".
    let err = parse("More than half shapes are red.").unwrap_err();
    assert_eq!(err.position, 15);
    assert!(err.message.contains("\"the\""), "{}", err.message);

    // Agreement violation: "no" wants the singular.
    let err = parse("Exactly no squares are red.").unwrap_err();
    assert_eq!(err.position, 11);
    assert!(err.message.contains("singular"), "{}", err.message);

    // Wrong verb for a plural subject: error lands on "is".
    let err = parse("More than half the shapes is red.").unwrap_err();
    assert_eq!(err.position, 26);

    // Missing final period: error points at the end.
    let err = parse("More than half the shapes are red").unwrap_err();
    assert_eq!(err.position, 33);

    // Trailing garbage is rejected.
    let err = parse("More than half the shapes are red shapes now.").unwrap_err();
    assert!(err.message.contains("trailing"), "{}", err.message);
}

#[test]
fn excluded_pairs_do_not_parse() {
    assert!(parse("More than all shapes are red.").is_err());
    assert!(parse("Less than no shape is red.").is_err());
    assert!(parse("Less than zero shapes are red.").is_err());
}

#[test]
fn grammar_round_trip_is_identity() {
    let all = enumerate_grammar();
    // 6 modifiers x 13 quantities minus 3 exclusions, x 16 restrictors
    // x 15 scopes.
    assert_eq!(all.len(), 75 * 16 * 15);
    for ast in &all {
        let surface = realize(ast);
        let back = parse(&surface).unwrap_or_else(|e| {
            panic!("{surface:?} failed to parse: {e}");
        });
        assert_eq!(&back, ast, "{surface}");
    }
}

proptest! {
    #[test]
    fn parse_never_panics(input in ".{0,80}") {
        let _ = parse(&input);
    }

    #[test]
    fn duality_less_than_is_not_at_least(seed in 0_u64..5_000) {
        let scene = random_scene(seed);
        let (a, b) = random_pair(seed);
        for quantity in Quantity::all() {
            let less = caption(Modifier::LessThan, quantity, a, b).evaluate(&scene);
            let at_least = caption(Modifier::AtLeast, quantity, a, b).evaluate(&scene);
            prop_assert_eq!(less, !at_least);
            let ne = caption(Modifier::NotEqual, quantity, a, b).evaluate(&scene);
            let eq = caption(Modifier::Exactly, quantity, a, b).evaluate(&scene);
            prop_assert_eq!(ne, !eq);
            let more = caption(Modifier::MoreThan, quantity, a, b).evaluate(&scene);
            let at_most = caption(Modifier::AtMost, quantity, a, b).evaluate(&scene);
            prop_assert_eq!(more, !at_most);
        }
    }
}
