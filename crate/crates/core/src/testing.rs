//! Shared proptest strategies.

use proptest::prelude::*;

use crate::gauss_code::{CrossingPermutation, Layer, Sign, SignedGaussCode, Visit};

/// Random double-occurrence words with random layers and signs. Most are
/// not realizable as planar diagrams, which the combinatorial operations do
/// not care about.
pub(crate) fn arb_code(max_n: usize) -> impl Strategy<Value = SignedGaussCode> {
    (0..=max_n)
        .prop_flat_map(|n| {
            (
                Just((0..2 * n).map(|k| k / 2).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(order, over_first, positive)| {
            let mut seen = vec![false; positive.len()];
            let word = order
                .into_iter()
                .map(|id| {
                    let first = !std::mem::replace(&mut seen[id], true);
                    let layer = if first == over_first[id] {
                        Layer::Over
                    } else {
                        Layer::Under
                    };
                    let sign = if positive[id] {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    };
                    Visit::new(id + 1, layer, sign)
                })
                .collect();
            SignedGaussCode::new(word).unwrap()
        })
}

pub(crate) fn arb_perm(n: usize) -> impl Strategy<Value = CrossingPermutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| CrossingPermutation::from_images(&v).unwrap())
}
