//! Trip matrices of signed Gauss codes and the row-column swap calculus.
//!
//! For crossings `i != j` the entry is the parity of visits to `i` met while
//! travelling from one visit of `j` to the other, which is 1 exactly when the
//! two chords interlace. The diagonal entry is 1 for a positive crossing;
//! that convention is calibrated together with the writhe prefactor in
//! [`crate::jones_engine`].

use std::collections::HashMap;

use thiserror::Error;

use crate::gauss_code::{CrossingPermutation, Sign, SignedGaussCode};
use crate::gf2_matrix::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("permutation acts on {perm} crossings but the matrix is {n}x{n}")]
    SizeMismatch { perm: usize, n: usize },
    #[error("groups do not partition 1..={n}")]
    BadPartition { n: usize },
}

/// Symmetric GF(2) matrix indexed by crossings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripMatrix {
    m: Gf2Matrix,
}

impl TripMatrix {
    pub fn from_matrix(m: Gf2Matrix) -> Result<Self, TripError> {
        if !m.is_symmetric() {
            return Err(TripError::NotSymmetric);
        }
        Ok(Self { m })
    }

    pub fn build(code: &SignedGaussCode) -> Self {
        let n = code.n();
        let word = code.word();
        let signs = code.signs();
        let mut m = Gf2Matrix::zeros(n);
        for (j, &(first, second)) in code.occurrences().iter().enumerate() {
            if signs[j] == Sign::Positive {
                m.set(j, j, true);
            }
            // Parity of visits to each crossing strictly between j's visits.
            let mut odd = vec![false; n];
            for v in &word[first + 1..second] {
                odd[v.crossing - 1] ^= true;
            }
            for (i, &o) in odd.iter().enumerate() {
                if o {
                    m.set(i, j, true);
                    m.set(j, i, true);
                }
            }
        }
        Self { m }
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Gf2Matrix {
        self.m
    }

    /// Ones minus zeros on the diagonal.
    pub fn writhe(&self) -> i32 {
        self.m
            .diagonal()
            .iter()
            .map(|&d| if d { 1 } else { -1 })
            .sum()
    }

    /// Δ(i, j): swap rows `i` and `j`, then columns `i` and `j` (1-based).
    pub fn delta_swap(&self, i: usize, j: usize) -> Result<Self, TripError> {
        let n = self.n();
        for index in [i, j] {
            if index == 0 || index > n {
                return Err(TripError::IndexOutOfRange { index, n });
            }
        }
        let mut m = self.m.clone();
        m.swap_rows(i - 1, j - 1);
        m.swap_cols(i - 1, j - 1);
        Ok(Self { m })
    }

    /// Relabels rows and columns: entry `(perm(i), perm(j))` of the result is
    /// entry `(i, j)` of `self`.
    pub fn apply_permutation(&self, perm: &CrossingPermutation) -> Result<Self, TripError> {
        if perm.len() != self.n() {
            return Err(TripError::SizeMismatch {
                perm: perm.len(),
                n: self.n(),
            });
        }
        Ok(Self {
            m: self.m.congruent_by(|i| perm.apply_zero_based(i)),
        })
    }

    pub fn block_compose(blocks: &[TripMatrix]) -> Self {
        let inner: Vec<Gf2Matrix> = blocks.iter().map(|b| b.m.clone()).collect();
        Self {
            m: Gf2Matrix::block_diag(&inner),
        }
    }

    /// Connected components of the off-diagonal support graph. Diagonal
    /// entries are ignored.
    pub fn block_decompose(&self) -> BlockPartition {
        let n = self.n();
        let mut component = vec![usize::MAX; n];
        let mut groups = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut group = vec![start];
            component[start] = id;
            let mut k = 0;
            while k < group.len() {
                let u = group[k];
                for (v, slot) in component.iter_mut().enumerate() {
                    if v != u && *slot == usize::MAX && self.m.get(u, v) {
                        *slot = id;
                        group.push(v);
                    }
                }
                k += 1;
            }
            group.sort_unstable();
            groups.push(group.into_iter().map(|i| i + 1).collect());
        }
        BlockPartition { groups, n }
    }

    /// Principal sub-matrix on a group of 1-based crossing ids.
    pub fn block(&self, group: &[usize]) -> Self {
        let idx: Vec<usize> = group.iter().map(|&i| i - 1).collect();
        Self {
            m: self.m.principal_submatrix(&idx),
        }
    }
}

/// Ordered partition of crossing ids `1..=n` into groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    groups: Vec<Vec<usize>>,
    n: usize,
}

impl BlockPartition {
    /// Groups of 1-based ids that must partition `1..=n`.
    pub fn new(groups: Vec<Vec<usize>>, n: usize) -> Result<Self, TripError> {
        let mut seen = vec![false; n];
        for &id in groups.iter().flatten() {
            if id == 0 || id > n || std::mem::replace(&mut seen[id - 1], true) {
                return Err(TripError::BadPartition { n });
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TripError::BadPartition { n });
        }
        Ok(Self { groups, n })
    }

    /// Consecutive runs of the given sizes: `{1..s1}, {s1+1..s1+s2}, ...`.
    pub fn contiguous(sizes: &[usize]) -> Self {
        let mut groups = Vec::with_capacity(sizes.len());
        let mut next = 1;
        for &s in sizes {
            groups.push((next..next + s).collect());
            next += s;
        }
        Self {
            groups,
            n: next - 1,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Sends the crossings of each group, in order, to consecutive positions,
    /// so applying it makes the matrix block diagonal.
    pub fn sorting_permutation(&self) -> CrossingPermutation {
        let mut images = vec![0; self.n];
        for (pos, &id) in self.groups.iter().flatten().enumerate() {
            images[id - 1] = pos;
        }
        CrossingPermutation::from_zero_based(images)
    }

    pub fn blocks(&self, t: &TripMatrix) -> Vec<TripMatrix> {
        self.groups.iter().map(|g| t.block(g)).collect()
    }
}

type Signature = (bool, usize, Vec<usize>);

/// Per-vertex invariant used to prune the equivalence search: diagonal
/// value, off-diagonal row weight, and sorted weights of the neighbours.
fn signatures(m: &Gf2Matrix) -> Vec<Signature> {
    let n = m.n();
    let degree: Vec<usize> = (0..n)
        .map(|i| m.row_weight(i) - usize::from(m.get(i, i)))
        .collect();
    (0..n)
        .map(|i| {
            let mut profile: Vec<usize> = (0..n)
                .filter(|&j| j != i && m.get(i, j))
                .map(|j| degree[j])
                .collect();
            profile.sort_unstable();
            (m.get(i, i), degree[i], profile)
        })
        .collect()
}

/// Decides whether some sequence of Δ operations turns `a` into `b`. On
/// success returns a permutation `p` with `a.apply_permutation(p) == b`,
/// preferring the identity and then a single transposition when one works.
pub fn delta_equivalent(a: &TripMatrix, b: &TripMatrix) -> Option<CrossingPermutation> {
    let n = a.n();
    if n != b.n() {
        return None;
    }
    if a == b {
        return Some(CrossingPermutation::identity(n));
    }
    let (ma, mb) = (a.matrix(), b.matrix());
    let (da, db) = (ma.diagonal(), mb.diagonal());
    if da.iter().filter(|&&d| d).count() != db.iter().filter(|&&d| d).count()
        || ma.rank() != mb.rank()
    {
        return None;
    }
    let sig_a = signatures(ma);
    let sig_b = signatures(mb);
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return None;
    }

    for i in 1..=n {
        for j in i + 1..=n {
            let t = CrossingPermutation::transposition(n, i, j).expect("in range");
            if a.apply_permutation(&t).ok().as_ref() == Some(b) {
                return Some(t);
            }
        }
    }

    let mut classes: HashMap<&Signature, Vec<usize>> = HashMap::new();
    for (v, s) in sig_b.iter().enumerate() {
        classes.entry(s).or_default().push(v);
    }
    let candidates: Vec<&[usize]> = sig_a.iter().map(|s| classes[s].as_slice()).collect();
    // Most constrained vertices first; ties broken by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (candidates[v].len(), v));

    let mut search = Search {
        a: ma,
        b: mb,
        order: &order,
        candidates: &candidates,
        image: vec![usize::MAX; n],
        used: vec![false; n],
    };
    search
        .extend(0)
        .then(|| CrossingPermutation::from_zero_based(search.image))
}

struct Search<'a> {
    a: &'a Gf2Matrix,
    b: &'a Gf2Matrix,
    order: &'a [usize],
    candidates: &'a [&'a [usize]],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        for &w in self.candidates[v] {
            if self.used[w] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                let pu = self.image[u];
                self.a.get(v, u) == self.b.get(w, pu)
            });
            if !consistent {
                continue;
            }
            self.image[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[w] = false;
            self.image[v] = usize::MAX;
        }
        false
    }
}
