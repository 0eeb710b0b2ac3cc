//! Seeded stratified folds, random oversampling and seed derivation.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Independent sub-seed for task `tag` under `seed` (counter-based: the
/// result depends only on the pair, never on execution order).
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.next_u64()
}

/// Row indices after randomly duplicating minority-class rows until every
/// class present in `rows` has the majority count. The original rows come
/// first, in order.
pub fn oversample(rows: &[usize], classes: &[usize], seed: u64) -> Vec<usize> {
    let n_classes = rows.iter().map(|&r| classes[r] + 1).max().unwrap_or(0);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for &r in rows {
        members[classes[r]].push(r);
    }
    let target = members.iter().map(Vec::len).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = rows.to_vec();
    for group in members.iter().filter(|g| !g.is_empty()) {
        for _ in group.len()..target {
            out.push(group[rng.gen_range(0..group.len())]);
        }
    }
    out
}

/// Fold id per row. Each class is shuffled and dealt round-robin,
/// continuing where the previous class stopped, so every fold holds
/// `⌊c/k⌋` or `⌈c/k⌉` rows of a class with `c` rows.
///
/// `folds` is reduced to the smallest class size when it exceeds it.
pub fn stratified_folds(classes: &[usize], folds: usize, seed: u64) -> Result<(Vec<usize>, usize)> {
    if folds < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let n_classes = classes.iter().map(|c| c + 1).max().unwrap_or(0);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in classes.iter().enumerate() {
        members[c].push(i);
    }
    let smallest = members.iter().map(Vec::len).filter(|&l| l > 0).min().unwrap_or(0);
    let k = if folds > smallest {
        log::warn!("{folds} folds exceed the smallest class size {smallest}; using {smallest}");
        smallest
    } else {
        folds
    };
    if k < 2 {
        return Err(Error::InvalidParameter(
            "the smallest class has fewer than 2 instances; cannot form folds".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; classes.len()];
    let mut offset = 0;
    for group in &mut members {
        group.shuffle(&mut rng);
        for (i, &r) in group.iter().enumerate() {
            assignment[r] = (offset + i) % k;
        }
        offset += group.len();
    }
    Ok((assignment, k))
}
