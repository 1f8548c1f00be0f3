//! Walk the caption grammar: enumerate it, realize a few captions, parse
//! them back, and show what a parse diagnostic looks like.
//!
//! ```text
//! cargo run --release --example caption_grammar
//! ```

use quantiscene::caption::{enumerate_grammar, parse, realize, Modifier, Quantity};

fn main() {
    let grammar = enumerate_grammar();
    println!("grammar enumerates {} captions", grammar.len());

    println!("\na few realized captions:");
    for ast in grammar.iter().step_by(grammar.len() / 8).take(8) {
        println!("  {}", realize(ast));
    }

    println!("\nround-trip check over the whole grammar:");
    let mut checked = 0usize;
    for ast in &grammar {
        let surface = realize(ast);
        let parsed = parse(&surface).expect("every realized caption parses");
        assert_eq!(&parsed, ast, "round trip failed for {surface:?}");
        checked += 1;
    }
    println!("  parse(realize(ast)) == ast for all {checked} captions");

    println!("\nquantities and modifiers in play:");
    println!("  quantities: {:?}", Quantity::all().len());
    println!(
        "  modifiers:  {:?}",
        [
            Modifier::LessThan,
            Modifier::AtMost,
            Modifier::Exactly,
            Modifier::AtLeast,
            Modifier::MoreThan,
            Modifier::NotEqual,
        ]
        .len()
    );

    println!("\nwhat a diagnostic looks like:");
    for bad in [
        "More than half the shapes are.",
        "Exactly seven shapes are red shapes.",
        "More than half the shapes is red shapes.",
    ] {
        match parse(bad) {
            Ok(_) => println!("  {bad:?} unexpectedly parsed"),
            Err(err) => println!("  {bad:?}\n    -> {err}"),
        }
    }
}
