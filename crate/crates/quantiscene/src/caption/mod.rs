//! Quantifier captions: the caption AST, exact truth evaluation, and the
//! two verification strategies for "most".
//!
//! A caption pairs a modifier with a quantity and applies it to a
//! restrictor/scope predicate pair, e.g. `(more_than, 1/2, the shapes,
//! red)` for "More than half the shapes are red shapes.". Truth is decided
//! purely on the symbolic scene in integer arithmetic: for a fraction
//! `p/q` over restrictor `A` and scope `B`, compare `q * |A and B|` with
//! `p * |A|`; for a bare number `n`, compare `|A and B|` with `n`.
//!
//! "More than half of the A are B" is exactly the generalized quantifier
//! "most": `|A and B| > 1/2 |A|` iff `|A and B| > |A and not B|`. The two
//! verification strategies below decide it by counting both cardinalities
//! or by pairing witnesses off one-to-one; they agree on every scene.

mod grammar;

pub use grammar::{enumerate_grammar, is_excluded_pair, parse, realize};

use serde::{Deserialize, Serialize};

use crate::scene::{Predicate, Scene};

/// Comparison modifier applied to the quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modifier {
    LessThan,
    AtMost,
    Exactly,
    AtLeast,
    MoreThan,
    NotEqual,
}

impl Modifier {
    pub const ALL: [Modifier; 6] = [
        Modifier::LessThan,
        Modifier::AtMost,
        Modifier::Exactly,
        Modifier::AtLeast,
        Modifier::MoreThan,
        Modifier::NotEqual,
    ];

    fn compare(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Modifier::LessThan => lhs < rhs,
            Modifier::AtMost => lhs <= rhs,
            Modifier::Exactly => lhs == rhs,
            Modifier::AtLeast => lhs >= rhs,
            Modifier::MoreThan => lhs > rhs,
            Modifier::NotEqual => lhs != rhs,
        }
    }
}

/// Caption quantity: a small count or one of the seven named fractions
/// (no, a quarter, a third, half, two thirds, three quarters, all).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Number(u8),
    Fraction(u8, u8),
}

/// The named fractions, in increasing order.
pub const FRACTIONS: [(u8, u8); 7] = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (1, 1)];

/// Largest bare number the grammar can express.
pub const MAX_NUMBER: u8 = 5;

impl Quantity {
    /// Every quantity the grammar admits: numbers 0..=5 and the seven
    /// named fractions.
    pub fn all() -> Vec<Quantity> {
        let mut out: Vec<Quantity> = (0..=MAX_NUMBER).map(Quantity::Number).collect();
        out.extend(FRACTIONS.iter().map(|&(p, q)| Quantity::Fraction(p, q)));
        out
    }

    pub fn is_valid(self) -> bool {
        match self {
            Quantity::Number(n) => n <= MAX_NUMBER,
            Quantity::Fraction(p, q) => FRACTIONS.contains(&(p, q)),
        }
    }
}

/// A complete caption.
///
/// The scope is never universal; the restrictor may be (realized as
/// "the shapes"). `realize(parse(s)) == s` holds for canonical surface
/// strings and `parse(realize(ast)) == ast` for every valid AST.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaptionAst {
    pub modifier: Modifier,
    pub quantity: Quantity,
    pub restrictor: Predicate,
    pub scope: Predicate,
}

impl CaptionAst {
    /// Exact truth against a scene, in integer arithmetic.
    ///
    /// With an empty restrictor both sides of a fraction comparison are
    /// zero, so e.g. "more than half of A" is false and "at least no A"
    /// is true.
    pub fn evaluate(&self, scene: &Scene) -> bool {
        let c = scene.count_joint(&self.restrictor, &self.scope) as i64;
        match self.quantity {
            Quantity::Number(n) => self.modifier.compare(c, i64::from(n)),
            Quantity::Fraction(p, q) => {
                let a = scene.count_matching(&self.restrictor) as i64;
                self.modifier
                    .compare(i64::from(q) * c, i64::from(p) * a)
            }
        }
    }

    pub fn surface(&self) -> String {
        realize(self)
    }
}

/// Free-function form of [`CaptionAst::evaluate`].
pub fn evaluate(caption: &CaptionAst, scene: &Scene) -> bool {
    caption.evaluate(scene)
}

// ---------------------------------------------------------------------------
// "Most" verification strategies
// ---------------------------------------------------------------------------

/// Cardinality strategy: count `A and B` and `A and not B` separately and
/// compare the two exact counts.
pub fn verify_most_cardinality(scene: &Scene, a: &Predicate, b: &Predicate) -> bool {
    scene.count_joint(a, b) > scene.count_joint(a, &b.negate())
}

/// Pairing strategy: repeatedly pair off the closest unmatched
/// `A and B` / `A and not B` objects (by Euclidean center distance, ties
/// broken by object index) and report whether the leftovers are `A and B`
/// witnesses.
///
/// "Most A are B" holds iff some proper subset of the witnesses can be
/// paired one-to-one with all of `A and not B`, so the verdict depends
/// only on which side runs out, never on the pairing order; the spatial
/// pairing here mirrors how a scanning subject would do it.
pub fn verify_most_pairing(scene: &Scene, a: &Predicate, b: &Predicate) -> bool {
    let (leftover_witnesses, _) = pairing_remainder(scene, a, b);
    leftover_witnesses > 0
}

/// Runs the pairing process and returns the leftover counts as
/// `(A and B, A and not B)`; at least one of the two is always zero.
pub fn pairing_remainder(scene: &Scene, a: &Predicate, b: &Predicate) -> (usize, usize) {
    let not_b = b.negate();
    let mut witnesses: Vec<(f64, f64)> = Vec::new();
    let mut counterexamples: Vec<(f64, f64)> = Vec::new();
    for obj in &scene.objects {
        if a.matches(obj) && b.matches(obj) {
            witnesses.push(obj.center);
        } else if a.matches(obj) && not_b.matches(obj) {
            counterexamples.push(obj.center);
        }
    }

    let mut w_alive: Vec<bool> = vec![true; witnesses.len()];
    let mut c_alive: Vec<bool> = vec![true; counterexamples.len()];
    let mut w_left = witnesses.len();
    let mut c_left = counterexamples.len();
    while w_left > 0 && c_left > 0 {
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, wc) in witnesses.iter().enumerate() {
            if !w_alive[i] {
                continue;
            }
            for (j, cc) in counterexamples.iter().enumerate() {
                if !c_alive[j] {
                    continue;
                }
                let d = (wc.0 - cc.0).hypot(wc.1 - cc.1);
                let better = match best {
                    None => true,
                    Some((bd, _, _)) => d < bd,
                };
                if better {
                    best = Some((d, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("both sides nonempty");
        w_alive[i] = false;
        c_alive[j] = false;
        w_left -= 1;
        c_left -= 1;
    }
    (w_left, c_left)
}

#[cfg(test)]
mod tests;
