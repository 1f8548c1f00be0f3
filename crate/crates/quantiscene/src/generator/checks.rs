//! Structural invariant checks for generated evaluation scenes.

use std::collections::BTreeSet;

use super::{ContrastAttribute, EvalConfig, EvalSceneMeta, PositionMode};
use crate::scene::geometry::Vec2;
use crate::scene::Scene;

/// Two objects count as a spatial pair when their centers are at most this
/// factor times the sum of their bounding radii apart.
pub const PAIR_DISTANCE_FACTOR: f64 = 1.5;

/// Verifies every structural invariant of a generated evaluation scene
/// against its metadata and the config that produced it. Returns the first
/// violation as text.
pub fn check_eval_scene(
    scene: &Scene,
    meta: &EvalSceneMeta,
    config: &EvalConfig,
) -> Result<(), String> {
    let violations = scene.violations();
    if !violations.is_empty() {
        return Err(violations.join("; "));
    }

    let n_min = scene.count_matching(&meta.minority_predicate);
    let n_maj = scene.count_matching(&meta.majority_predicate);
    if (n_min, n_maj) != meta.counts {
        return Err(format!(
            "predicate counts ({n_min}, {n_maj}) disagree with metadata {:?}",
            meta.counts
        ));
    }
    if meta.counts != meta.ratio.counts() {
        return Err(format!(
            "counts {:?} are not multiplier x (small, large) of {}",
            meta.counts,
            meta.ratio.label()
        ));
    }
    if n_min + n_maj != scene.objects.len() {
        return Err("objects outside the two contrast groups".to_string());
    }

    let shapes: BTreeSet<_> = scene.objects.iter().map(|o| o.shape).collect();
    let colors: BTreeSet<_> = scene.objects.iter().map(|o| o.color).collect();
    let (contrast_values, shared_values) = match meta.contrast {
        ContrastAttribute::Shape => (shapes.len(), colors.len()),
        ContrastAttribute::Color => (colors.len(), shapes.len()),
    };
    if contrast_values != 2 {
        return Err(format!(
            "{contrast_values} distinct contrast-attribute values, want 2"
        ));
    }
    if shared_values != 1 {
        return Err(format!(
            "{shared_values} distinct shared-attribute values, want 1"
        ));
    }

    match config.mode {
        PositionMode::Random | PositionMode::Paired => {
            if meta.partition.is_some() {
                return Err(format!("unexpected partition line in {} mode", config.mode));
            }
        }
        PositionMode::Partitioned => {
            let Some(line) = meta.partition else {
                return Err("partitioned scene without a partition line".to_string());
            };
            for (i, obj) in scene.objects.iter().enumerate() {
                let d = line.signed_distance(obj.center);
                let r = obj.bounding_radius();
                let ok = if meta.minority_predicate.matches(obj) {
                    d >= r
                } else {
                    d <= -r
                };
                if !ok {
                    return Err(format!(
                        "object {i} is on the wrong side of the partition \
                         (signed distance {d:.4}, radius {r:.4})"
                    ));
                }
            }
        }
    }
    if config.mode == PositionMode::Paired && !pairing_covers_minority(scene, meta) {
        return Err("no pairing assigns every minority object a distinct \
                    majority partner within the pair distance"
            .to_string());
    }

    Ok(())
}

/// Whether a maximum bipartite matching on the "within pair distance"
/// graph covers the whole minority group.
pub fn pairing_covers_minority(scene: &Scene, meta: &EvalSceneMeta) -> bool {
    let minority: Vec<usize> = (0..scene.objects.len())
        .filter(|&i| meta.minority_predicate.matches(&scene.objects[i]))
        .collect();
    let majority: Vec<usize> = (0..scene.objects.len())
        .filter(|&i| meta.majority_predicate.matches(&scene.objects[i]))
        .collect();

    let adjacency: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| {
            let a = &scene.objects[i];
            let ca = Vec2::new(a.center.0, a.center.1);
            majority
                .iter()
                .enumerate()
                .filter(|&(_, &j)| {
                    let b = &scene.objects[j];
                    let cb = Vec2::new(b.center.0, b.center.1);
                    ca.distance(cb)
                        <= PAIR_DISTANCE_FACTOR * (a.bounding_radius() + b.bounding_radius())
                })
                .map(|(jj, _)| jj)
                .collect()
        })
        .collect();

    max_bipartite_matching(&adjacency, majority.len()) == minority.len()
}

/// Maximum bipartite matching by augmenting paths (Hungarian-style); the
/// graphs here have at most ~10 left vertices, so no scaling is needed.
fn max_bipartite_matching(adjacency: &[Vec<usize>], right: usize) -> usize {
    let mut matched_to: Vec<Option<usize>> = vec![None; right];
    let mut size = 0;
    for left in 0..adjacency.len() {
        let mut visited = vec![false; right];
        if augment(left, adjacency, &mut matched_to, &mut visited) {
            size += 1;
        }
    }
    size
}

fn augment(
    left: usize,
    adjacency: &[Vec<usize>],
    matched_to: &mut Vec<Option<usize>>,
    visited: &mut Vec<bool>,
) -> bool {
    for &r in &adjacency[left] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if matched_to[r].is_none() || augment(matched_to[r].unwrap(), adjacency, matched_to, visited)
        {
            matched_to[r] = Some(left);
            return true;
        }
    }
    false
}
