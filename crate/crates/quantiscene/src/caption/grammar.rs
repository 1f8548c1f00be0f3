//! Surface grammar: deterministic realization and a total parser.
//!
//! Surface forms, pinned:
//!
//! * modifiers: "less than", "at most", "exactly", "at least",
//!   "more than", "not"
//! * quantities: "zero".."five"; "no", "a quarter of", "a third of",
//!   "half", "two thirds of", "three quarters of", "all"
//! * restrictor: "the shapes" (universal; bare "shape(s)" after numbers,
//!   "no" and "all"), "<color> shape(s)", "<shape noun>"
//! * scope: "<color>", "<color> shapes", "<shape plural>"; singular
//!   contexts use "<color>" or "a <shape>"
//!
//! Number agreement uses the singular after "no" and "one" ("Exactly no
//! square is red.", "At least one triangle is gray."). Half-comparisons
//! name a color scope as a noun phrase ("More than half the shapes are
//! red shapes."), matching the evaluation caption template; every other
//! quantity uses the bare adjective ("At most five shapes are magenta.").
//! The parser additionally accepts the bare and noun-phrase color scopes
//! interchangeably, so all attested surface variants parse to the same
//! AST.
//!
//! `(more_than, all)`, `(less_than, no)` and `(less_than, zero)` are
//! excluded from the grammar as unsatisfiable or trivially true.

use super::{CaptionAst, Modifier, Quantity};
use crate::error::ParseError;
use crate::scene::{Color, Predicate, ShapeKind};

/// Pairs the grammar leaves out: "more than all" is unsatisfiable and
/// "less than no/zero" is trivially false of any count.
pub fn is_excluded_pair(modifier: Modifier, quantity: Quantity) -> bool {
    matches!(
        (modifier, quantity),
        (Modifier::MoreThan, Quantity::Fraction(1, 1))
            | (Modifier::LessThan, Quantity::Fraction(0, 1))
            | (Modifier::LessThan, Quantity::Number(0))
    )
}

/// Every caption the grammar generates: non-excluded modifier/quantity
/// pairs crossed with all restrictor and scope predicates.
pub fn enumerate_grammar() -> Vec<CaptionAst> {
    let mut restrictors = vec![Predicate::universal()];
    restrictors.extend(Color::ALL.map(Predicate::color));
    restrictors.extend(ShapeKind::ALL.map(Predicate::shape));
    let mut scopes: Vec<Predicate> = Color::ALL.map(Predicate::color).to_vec();
    scopes.extend(ShapeKind::ALL.map(Predicate::shape));

    let mut out = Vec::new();
    for modifier in Modifier::ALL {
        for quantity in Quantity::all() {
            if is_excluded_pair(modifier, quantity) {
                continue;
            }
            for restrictor in &restrictors {
                for scope in &scopes {
                    out.push(CaptionAst {
                        modifier,
                        quantity,
                        restrictor: *restrictor,
                        scope: *scope,
                    });
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Realization
// ---------------------------------------------------------------------------

const NUMBER_WORDS: [&str; 6] = ["zero", "one", "two", "three", "four", "five"];

fn modifier_words(m: Modifier) -> &'static str {
    match m {
        Modifier::LessThan => "less than",
        Modifier::AtMost => "at most",
        Modifier::Exactly => "exactly",
        Modifier::AtLeast => "at least",
        Modifier::MoreThan => "more than",
        Modifier::NotEqual => "not",
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Num {
    Sg,
    Pl,
}

/// Bare restrictor noun phrase, without any determiner.
fn restrictor_bare(p: &Predicate, num: Num) -> String {
    debug_assert!(!p.negated, "the surface grammar has no negated predicates");
    match (p.color, p.shape, num) {
        (None, None, Num::Sg) => "shape".to_string(),
        (None, None, Num::Pl) => "shapes".to_string(),
        (Some(c), None, Num::Sg) => format!("{} shape", c.adjective()),
        (Some(c), None, Num::Pl) => format!("{} shapes", c.adjective()),
        (None, Some(s), Num::Sg) => s.noun().to_string(),
        (None, Some(s), Num::Pl) => s.noun_plural().to_string(),
        (Some(c), Some(s), Num::Sg) => format!("{} {}", c.adjective(), s.noun()),
        (Some(c), Some(s), Num::Pl) => format!("{} {}", c.adjective(), s.noun_plural()),
    }
}

fn scope_phrase(p: &Predicate, num: Num, quantity: Quantity) -> String {
    debug_assert!(!p.negated, "the surface grammar has no negated predicates");
    match (p.color, p.shape, num) {
        (Some(c), None, Num::Sg) => c.adjective().to_string(),
        (Some(c), None, Num::Pl) => {
            if quantity == Quantity::Fraction(1, 2) {
                format!("{} shapes", c.adjective())
            } else {
                c.adjective().to_string()
            }
        }
        (None, Some(s), Num::Sg) => format!("a {}", s.noun()),
        (None, Some(s), Num::Pl) => s.noun_plural().to_string(),
        _ => unreachable!("scope predicates constrain exactly one attribute"),
    }
}

/// Deterministic English surface string: capitalized, period-terminated.
pub fn realize(ast: &CaptionAst) -> String {
    let (quantity_part, num) = match ast.quantity {
        Quantity::Number(n) => {
            let num = if n == 1 { Num::Sg } else { Num::Pl };
            (
                format!(
                    "{} {}",
                    NUMBER_WORDS[n as usize],
                    restrictor_bare(&ast.restrictor, num)
                ),
                num,
            )
        }
        Quantity::Fraction(0, 1) => (
            format!("no {}", restrictor_bare(&ast.restrictor, Num::Sg)),
            Num::Sg,
        ),
        Quantity::Fraction(1, 1) => (
            format!("all {}", restrictor_bare(&ast.restrictor, Num::Pl)),
            Num::Pl,
        ),
        Quantity::Fraction(1, 2) => (
            format!("half the {}", restrictor_bare(&ast.restrictor, Num::Pl)),
            Num::Pl,
        ),
        Quantity::Fraction(p, q) => {
            let words = match (p, q) {
                (1, 4) => "a quarter",
                (1, 3) => "a third",
                (2, 3) => "two thirds",
                (3, 4) => "three quarters",
                _ => unreachable!("quantity validated against the named fractions"),
            };
            (
                format!(
                    "{words} of the {}",
                    restrictor_bare(&ast.restrictor, Num::Pl)
                ),
                Num::Pl,
            )
        }
    };
    let verb = if num == Num::Sg { "is" } else { "are" };
    let mut s = format!(
        "{} {} {} {}.",
        modifier_words(ast.modifier),
        quantity_part,
        verb,
        scope_phrase(&ast.scope, num, ast.quantity)
    );
    // Capitalize the leading word.
    s[..1].make_ascii_uppercase();
    s
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Tokens<'a> {
    words: Vec<(usize, &'a str)>,
    idx: usize,
    end: usize,
    lowered_first: String,
}

impl<'a> Tokens<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        let trimmed_end = input.trim_end();
        let Some(body) = trimmed_end.strip_suffix('.') else {
            return Err(ParseError {
                position: trimmed_end.len(),
                message: "expected the caption to end with '.'".to_string(),
            });
        };
        let mut words = Vec::new();
        let mut offset = 0;
        for chunk in body.split_inclusive(char::is_whitespace) {
            let word = chunk.trim_end_matches(char::is_whitespace);
            if !word.is_empty() {
                words.push((offset, word));
            }
            offset += chunk.len();
        }
        if words.is_empty() {
            return Err(ParseError {
                position: 0,
                message: "empty caption".to_string(),
            });
        }
        let lowered_first = words[0].1.to_ascii_lowercase();
        Ok(Tokens {
            words,
            idx: 0,
            end: body.len(),
            lowered_first,
        })
    }

    fn pos(&self) -> usize {
        self.words.get(self.idx).map_or(self.end, |w| w.0)
    }

    fn peek(&self) -> Option<&str> {
        if self.idx == 0 {
            self.words.first().map(|_| self.lowered_first.as_str())
        } else {
            self.words.get(self.idx).map(|w| w.1)
        }
    }

    fn advance(&mut self) {
        self.idx += 1;
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos(),
            message: message.into(),
        }
    }

    fn expect(&mut self, word: &str, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(w) if w == word => {
                self.advance();
                Ok(())
            }
            Some(w) => Err(self.error(format!("expected \"{word}\" ({what}), found \"{w}\""))),
            None => Err(self.error(format!("expected \"{word}\" ({what}), found end of caption"))),
        }
    }
}

fn color_from_adjective(word: &str) -> Option<Color> {
    Color::ALL.iter().copied().find(|c| c.adjective() == word)
}

fn shape_from_noun(word: &str) -> Option<(ShapeKind, Num)> {
    for s in ShapeKind::ALL {
        if s.noun() == word {
            return Some((s, Num::Sg));
        }
        if s.noun_plural() == word {
            return Some((s, Num::Pl));
        }
    }
    None
}

fn parse_modifier(t: &mut Tokens) -> Result<Modifier, ParseError> {
    let Some(first) = t.peek() else {
        return Err(t.error("expected a modifier"));
    };
    let (modifier, second) = match first {
        "less" => (Modifier::LessThan, Some("than")),
        "more" => (Modifier::MoreThan, Some("than")),
        "at" => (Modifier::AtMost, None), // disambiguated below
        "exactly" => (Modifier::Exactly, None),
        "not" => (Modifier::NotEqual, None),
        other => {
            return Err(t.error(format!(
                "expected a modifier (less than/at most/exactly/at least/more than/not), \
                 found \"{other}\""
            )))
        }
    };
    let is_at = first == "at";
    t.advance();
    if is_at {
        return match t.peek() {
            Some("most") => {
                t.advance();
                Ok(Modifier::AtMost)
            }
            Some("least") => {
                t.advance();
                Ok(Modifier::AtLeast)
            }
            Some(w) => Err(t.error(format!("expected \"most\" or \"least\" after \"at\", found \"{w}\""))),
            None => Err(t.error("expected \"most\" or \"least\" after \"at\"")),
        };
    }
    if let Some(word) = second {
        t.expect(word, "modifier")?;
    }
    Ok(modifier)
}

/// Parses the quantity and notes whether a determiner context requires the
/// plural or singular restrictor.
fn parse_quantity(t: &mut Tokens) -> Result<(Quantity, Num, bool), ParseError> {
    let Some(word) = t.peek() else {
        return Err(t.error("expected a quantity"));
    };
    // (quantity, grammatical number, restrictor takes a leading "the")
    match word {
        "no" => {
            t.advance();
            Ok((Quantity::Fraction(0, 1), Num::Sg, false))
        }
        "all" => {
            t.advance();
            // Tolerate "all the shapes" alongside canonical "all shapes".
            if t.peek() == Some("the") {
                t.advance();
            }
            Ok((Quantity::Fraction(1, 1), Num::Pl, false))
        }
        "half" => {
            t.advance();
            Ok((Quantity::Fraction(1, 2), Num::Pl, true))
        }
        "a" => {
            t.advance();
            let q = match t.peek() {
                Some("quarter") => Quantity::Fraction(1, 4),
                Some("third") => Quantity::Fraction(1, 3),
                Some(w) => {
                    return Err(
                        t.error(format!("expected \"quarter\" or \"third\" after \"a\", found \"{w}\""))
                    )
                }
                None => return Err(t.error("expected \"quarter\" or \"third\" after \"a\"")),
            };
            t.advance();
            t.expect("of", "fraction")?;
            Ok((q, Num::Pl, true))
        }
        "two" | "three" => {
            // Could be a bare number ("two squares") or a fraction
            // ("two thirds of"). Look ahead one token.
            let next = t.words.get(t.idx + 1).map(|w| w.1);
            let frac = match (word, next) {
                ("two", Some("thirds")) => Some(Quantity::Fraction(2, 3)),
                ("three", Some("quarters")) => Some(Quantity::Fraction(3, 4)),
                _ => None,
            };
            if let Some(q) = frac {
                t.advance();
                t.advance();
                t.expect("of", "fraction")?;
                Ok((q, Num::Pl, true))
            } else {
                let n = NUMBER_WORDS.iter().position(|w| *w == word).unwrap() as u8;
                t.advance();
                Ok((Quantity::Number(n), Num::Pl, false))
            }
        }
        _ => {
            if let Some(n) = NUMBER_WORDS.iter().position(|w| *w == word) {
                t.advance();
                let num = if n == 1 { Num::Sg } else { Num::Pl };
                Ok((Quantity::Number(n as u8), num, false))
            } else {
                Err(t.error(format!("expected a quantity, found \"{word}\"")))
            }
        }
    }
}

fn parse_restrictor(t: &mut Tokens, num: Num, with_the: bool) -> Result<Predicate, ParseError> {
    if with_the {
        t.expect("the", "restrictor determiner")?;
    }
    let Some(word) = t.peek() else {
        return Err(t.error("expected a restrictor noun phrase"));
    };
    let plain = match num {
        Num::Sg => "shape",
        Num::Pl => "shapes",
    };
    if word == plain {
        t.advance();
        return Ok(Predicate::universal());
    }
    if let Some(color) = color_from_adjective(word) {
        t.advance();
        t.expect(plain, "restrictor noun")?;
        return Ok(Predicate::color(color));
    }
    if let Some((shape, found_num)) = shape_from_noun(word) {
        if found_num != num {
            return Err(t.error(format!(
                "number agreement: expected the {} form here, found \"{word}\"",
                if num == Num::Sg { "singular" } else { "plural" }
            )));
        }
        t.advance();
        return Ok(Predicate::shape(shape));
    }
    Err(t.error(format!("expected a restrictor noun phrase, found \"{word}\"")))
}

fn parse_scope(t: &mut Tokens, num: Num) -> Result<Predicate, ParseError> {
    let Some(word) = t.peek() else {
        return Err(t.error("expected a scope phrase"));
    };
    if let Some(color) = color_from_adjective(word) {
        t.advance();
        // Optional noun: "red" and "red shapes" denote the same scope.
        let noun = match num {
            Num::Sg => "shape",
            Num::Pl => "shapes",
        };
        if t.peek() == Some(noun) {
            t.advance();
        }
        return Ok(Predicate::color(color));
    }
    if num == Num::Sg && word == "a" {
        t.advance();
        let Some(noun) = t.peek() else {
            return Err(t.error("expected a shape noun after \"a\""));
        };
        let Some((shape, Num::Sg)) = shape_from_noun(noun) else {
            return Err(t.error(format!("expected a singular shape noun, found \"{noun}\"")));
        };
        t.advance();
        return Ok(Predicate::shape(shape));
    }
    if let Some((shape, found_num)) = shape_from_noun(word) {
        if found_num != num {
            return Err(t.error(format!(
                "number agreement: expected the {} form here, found \"{word}\"",
                if num == Num::Sg { "singular" } else { "plural" }
            )));
        }
        t.advance();
        return Ok(Predicate::shape(shape));
    }
    Err(t.error(format!("expected a scope phrase, found \"{word}\"")))
}

/// Parses a caption surface string. The leading word is matched
/// case-insensitively; the string must be period-terminated. Errors carry
/// the byte position of the offending token.
pub fn parse(input: &str) -> Result<CaptionAst, ParseError> {
    let mut t = Tokens::new(input)?;
    let modifier = parse_modifier(&mut t)?;
    let (quantity, num, with_the) = parse_quantity(&mut t)?;
    if is_excluded_pair(modifier, quantity) {
        return Err(ParseError {
            position: 0,
            message: format!(
                "\"{}\" with this quantity is excluded from the grammar",
                modifier_words(modifier)
            ),
        });
    }
    let restrictor = parse_restrictor(&mut t, num, with_the)?;
    match num {
        Num::Sg => t.expect("is", "verb")?,
        Num::Pl => t.expect("are", "verb")?,
    }
    let scope = parse_scope(&mut t, num)?;
    if let Some(extra) = t.peek() {
        return Err(t.error(format!("unexpected trailing word \"{extra}\"")));
    }
    debug_assert!(quantity.is_valid());
    Ok(CaptionAst {
        modifier,
        quantity,
        restrictor,
        scope,
    })
}
